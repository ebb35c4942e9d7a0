//! Polygonal patch derived from a packing: a cyclic polygon inside every
//! circle and small filler polygons in the gaps between them.

mod build;
mod csm;
mod cyclic;

use serde::{Deserialize, Serialize};

use crate::complex::{ValidationReport, VertexId, Wrap};
use crate::geom::Point2;
use crate::scalar::Scalar;

pub use build::{apply_bowtie_gadget, apply_square_gadget, build_patch};
pub use csm::{csm, optimize_tau, TauCurve, TauSweep};
pub use cyclic::{cyclic_polygon, filler_pentagons};

/// How cyclic polygons shrink inside their circles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TauMode {
    /// Vertices at `τ·r` from the centre.
    #[default]
    Scale,
    /// Vertices at `r - (1 - τ)·r̄`, where `r̄` is the mean radius: a constant
    /// inward offset. Kept for comparison only.
    Offset,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchParams {
    pub tau: f64,
    pub tau_mode: TauMode,
}

impl Default for PatchParams {
    fn default() -> Self {
        Self {
            tau: 0.8,
            tau_mode: TauMode::Scale,
        }
    }
}

impl PatchParams {
    pub fn with_tau(tau: f64) -> Self {
        Self {
            tau,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PatchError {
    #[error("invalid complex:\n{0}")]
    InvalidComplex(ValidationReport),
    #[error("tau must lie in (0, 1), got {0}")]
    InvalidTau(f64),
    #[error("circle {circle} has {count} neighbours; a cyclic polygon needs at least 3")]
    TooFewNeighbors { circle: VertexId, count: usize },
    #[error("packing has no circle for vertex {0}")]
    MissingCircle(VertexId),
    #[error("gadget geometry: {0}")]
    GadgetGeometry(String),
    #[error("offset leaves circle {0} with no room for a polygon")]
    OffsetTooLarge(VertexId),
    #[error("degenerate polygon")]
    DegeneratePolygon,
    #[error("patch has no filler pentagons to score")]
    NoFillerPentagons,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Cyclic { circle: VertexId, order: usize },
    FillerPentagon,
    GadgetPentagon,
    BarrelHexagon,
}

impl Role {
    pub fn name(&self) -> &'static str {
        match self {
            Role::Cyclic { .. } => "cyclic",
            Role::FillerPentagon => "filler_pentagon",
            Role::GadgetPentagon => "gadget_pentagon",
            Role::BarrelHexagon => "barrel_hexagon",
        }
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self, Role::Cyclic { .. })
    }
}

/// What a cyclic polygon vertex stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    /// Scaled tangency point with the neighbour at this flower position.
    Tangency(usize),
    /// Scaled midpoint of the arc between two consecutive tangencies.
    ArcMidpoint,
    /// Scaled midpoint of the outer arc of a boundary circle.
    ExteriorMidpoint,
    /// Scaled former tangency point with a circle removed by a square gadget
    /// (or the single removed neighbour at this flower position).
    FormerTangency(usize),
    /// One of two points splitting an arc left by a bowtie into thirds.
    Trisection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CyclicInfo<T> {
    pub center: Point2<T>,
    pub radius: T,
    pub kinds: Vec<VertexKind>,
}

/// The polygon across one edge: its edge `edge`, translated by `shift`
/// lattice steps, coincides with ours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Neighbor {
    pub polygon: usize,
    pub edge: usize,
    pub shift: Wrap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatchPolygon<T> {
    pub role: Role,
    /// Counterclockwise vertices.
    pub points: Vec<Point2<T>>,
    /// Neighbour across edge `i` (from `points[i]` to `points[i + 1]`);
    /// `None` on the patch boundary.
    pub neighbors: Vec<Option<Neighbor>>,
    /// The circle of a cyclic polygon, or the circles bordering the gap a
    /// filler polygon sits in.
    pub circles: Vec<VertexId>,
    pub cyclic: Option<CyclicInfo<T>>,
}

impl<T: Scalar> PatchPolygon<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn edge(&self, i: usize) -> (Point2<T>, Point2<T>) {
        (self.points[i], self.points[(i + 1) % self.points.len()])
    }

    pub fn edge_midpoint(&self, i: usize) -> Point2<T> {
        let (a, b) = self.edge(i);
        a.midpoint(b)
    }

    pub fn circle(&self) -> Option<VertexId> {
        match self.role {
            Role::Cyclic { circle, .. } => Some(circle),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Patch<T> {
    /// Cyclic polygons by circle id, then trio fillers by triangle, then
    /// gadget polygons by gadget.
    pub polygons: Vec<PatchPolygon<T>>,
    pub params: PatchParams,
    pub lattice: Option<[Point2<T>; 2]>,
}

impl<T: Scalar> Patch<T> {
    pub fn shift(&self, wrap: Wrap) -> Point2<T> {
        match self.lattice {
            Some([l1, l2]) => l1 * T::lit(f64::from(wrap.x)) + l2 * T::lit(f64::from(wrap.y)),
            None => Point2::origin(),
        }
    }

    /// Index of the cyclic polygon of `circle`.
    pub fn cyclic_of(&self, circle: VertexId) -> Option<usize> {
        self.polygons
            .iter()
            .position(|p| p.circle() == Some(circle))
    }

    pub fn dump(&self) -> PatchDump {
        PatchDump {
            polygons: self
                .polygons
                .iter()
                .map(|p| PolygonDump {
                    role: p.role.name().to_string(),
                    circle_id: p.circle(),
                    points: p.points.iter().map(|q| [q.x.f64(), q.y.f64()]).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonDump {
    pub role: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circle_id: Option<VertexId>,
    pub points: Vec<[f64; 2]>,
}

/// JSON form of a patch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchDump {
    pub polygons: Vec<PolygonDump>,
}
