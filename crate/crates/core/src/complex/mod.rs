//! The combinatorial input: a triangulated disk or torus with optional
//! gadget annotations.

mod delaunay;
pub mod demos;
mod format;
mod structure;
mod validate;

use std::fmt;
use std::ops::{Add, Neg, Sub};

pub use delaunay::{delaunay_from_points, random_points};
pub use format::{parse, parse_unchecked, serialize, ComplexDocument, ParseError};
pub use structure::{Edge, Flower, Petal, Structure};
pub use validate::{validate, Location, ValidationReport, Violation, ViolationKind};

pub type VertexId = u32;

/// Lattice translation crossed by a directed edge of a torus complex,
/// counted in multiples of the two period vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Wrap {
    pub x: i32,
    pub y: i32,
}

impl Wrap {
    pub const ZERO: Wrap = Wrap { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }
}

impl Add for Wrap {
    type Output = Wrap;
    fn add(self, o: Wrap) -> Wrap {
        Wrap::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Wrap {
    type Output = Wrap;
    fn sub(self, o: Wrap) -> Wrap {
        Wrap::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Wrap {
    type Output = Wrap;
    fn neg(self) -> Wrap {
        Wrap::new(-self.x, -self.y)
    }
}

impl fmt::Display for Wrap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Topology {
    Disk,
    Torus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexRecord {
    pub id: VertexId,
    /// Authoring position; never read by the packing solver.
    pub hint: Option<[f64; 2]>,
}

/// Counterclockwise triangle. `wraps[i]` belongs to the directed edge
/// `vertices[i] -> vertices[(i + 1) % 3]` and is zero on disks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triangle {
    pub vertices: [VertexId; 3],
    pub wraps: [Wrap; 3],
}

impl Triangle {
    pub fn new(vertices: [VertexId; 3]) -> Self {
        Self {
            vertices,
            wraps: [Wrap::ZERO; 3],
        }
    }

    pub fn with_wraps(vertices: [VertexId; 3], wraps: [Wrap; 3]) -> Self {
        Self { vertices, wraps }
    }

    pub fn wrap_sum(&self) -> Wrap {
        self.wraps[0] + self.wraps[1] + self.wraps[2]
    }

    /// Rotation that starts at the smallest `(vertex, wrap)` corner.
    fn canonical(self) -> Self {
        let key = |c: usize| (self.vertices[c], self.wraps[c]);
        let start = (0..3).min_by_key(|&c| key(c)).unwrap_or(0);
        let idx = [start, (start + 1) % 3, (start + 2) % 3];
        Self {
            vertices: idx.map(|i| self.vertices[i]),
            wraps: idx.map(|i| self.wraps[i]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetKind {
    /// One degree-4 centre whose circle is replaced by four pentagons.
    Square,
    /// Two adjacent degree-4 centres replaced by four pentagons and a
    /// barrel hexagon.
    Bowtie,
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GadgetKind::Square => "square",
            GadgetKind::Bowtie => "bowtie",
        })
    }
}

/// Square: `centers = [a]`, `rim` = the link cycle of `a`.
/// Bowtie: `centers = [a, b]`, `rim = [c, d, e, f]` where `c` touches only
/// `a`, `e` touches only `b`, and `d`, `f` (the split-arc vertices) touch
/// both.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub centers: Vec<VertexId>,
    pub rim: Vec<VertexId>,
}

impl Gadget {
    pub fn square(center: VertexId, rim: [VertexId; 4]) -> Self {
        Self {
            kind: GadgetKind::Square,
            centers: vec![center],
            rim: rim.to_vec(),
        }
    }

    pub fn bowtie(a: VertexId, b: VertexId, rim: [VertexId; 4]) -> Self {
        Self {
            kind: GadgetKind::Bowtie,
            centers: vec![a, b],
            rim: rim.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    topology: Topology,
    vertices: Vec<VertexRecord>,
    triangles: Vec<Triangle>,
    gadgets: Vec<Gadget>,
}

impl Complex {
    /// Builds a complex in canonical order: vertices by id, each triangle
    /// rotated to start at its smallest corner, triangles and gadgets
    /// sorted. No validation happens here; see [`validate`].
    pub fn new(
        topology: Topology,
        mut vertices: Vec<VertexRecord>,
        triangles: Vec<Triangle>,
        mut gadgets: Vec<Gadget>,
    ) -> Self {
        vertices.sort_by_key(|v| v.id);
        let mut triangles: Vec<Triangle> = triangles.into_iter().map(Triangle::canonical).collect();
        triangles.sort_by_key(|t| (t.vertices, t.wraps));
        gadgets.sort_by(|a, b| (&a.centers, &a.rim, a.kind).cmp(&(&b.centers, &b.rim, b.kind)));
        Self {
            topology,
            vertices,
            triangles,
            gadgets,
        }
    }

    /// Disk complex whose vertex set is inferred from the triangles.
    pub fn disk(triangles: &[[VertexId; 3]]) -> Self {
        let mut ids: Vec<VertexId> = triangles.iter().flatten().copied().collect();
        ids.sort_unstable();
        ids.dedup();
        let vertices = ids
            .into_iter()
            .map(|id| VertexRecord { id, hint: None })
            .collect();
        Self::new(
            Topology::Disk,
            vertices,
            triangles.iter().map(|&t| Triangle::new(t)).collect(),
            Vec::new(),
        )
    }

    pub fn with_gadgets(self, gadgets: Vec<Gadget>) -> Self {
        Self::new(self.topology, self.vertices, self.triangles, gadgets)
    }

    pub fn with_hints(mut self, hints: impl IntoIterator<Item = (VertexId, [f64; 2])>) -> Self {
        for (id, h) in hints {
            if let Some(v) = self.vertices.iter_mut().find(|v| v.id == id) {
                v.hint = Some(h);
            }
        }
        self
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn vertices(&self) -> &[VertexRecord] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn gadgets(&self) -> &[Gadget] {
        &self.gadgets
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().map(|v| v.id)
    }

    /// Validates and returns the derived combinatorial structure.
    pub fn structure(&self) -> Result<Structure, ValidationReport> {
        let report = validate(self);
        if !report.is_empty() {
            return Err(report);
        }
        Ok(Structure::build(self).expect("validated complex has a structure"))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ComplexError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}
