//! Circle packings realising the tangency pattern of a complex.

mod layout;
mod select;
mod solve;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{Topology, ValidationReport, VertexId, Wrap};
use crate::geom::Point2;
use crate::scalar::Scalar;

pub use layout::layout;
pub use select::select_interior;
pub use solve::{angle_sum, beta, boundary_radius, solve_radii, solve_radii_traced, SolveTrace};

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryMode {
    /// Each boundary vertex of degree `n` gets `boundary_radius(n)`.
    DegreeFormula,
    /// Prescribed radius for every boundary vertex.
    ExplicitRadii(BTreeMap<VertexId, f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Largest allowed `|angle_sum - 2π|` over interior vertices.
    pub residual_tolerance: f64,
    pub max_sweeps: usize,
    pub boundary_mode: BoundaryMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            residual_tolerance: 1e-10,
            max_sweeps: 50_000,
            boundary_mode: BoundaryMode::DegreeFormula,
        }
    }
}

impl SolverConfig {
    /// Default configuration with the tolerance suited to `T`.
    pub fn for_scalar<T: Scalar>() -> Self {
        Self {
            residual_tolerance: T::SOLVER_TOLERANCE,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PackingError {
    #[error("invalid complex:\n{0}")]
    InvalidComplex(ValidationReport),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("boundary vertex of degree {degree} has no radius (degree must be at least 3)")]
    DegenerateBoundaryVertex { degree: usize },
    #[error("no interior vertex to solve for")]
    NothingToSolve { radii: BTreeMap<VertexId, f64> },
    #[error("radius solver did not converge after {sweeps} sweeps (worst residual {worst_residual:e} at vertex {vertex})")]
    NonConvergence {
        sweeps: usize,
        worst_residual: f64,
        vertex: VertexId,
    },
    #[error("layout inconsistency at vertex {vertex}: relative defect {defect:e}")]
    LayoutInconsistency { vertex: VertexId, defect: f64 },
    #[error("no circles left after trimming {trim_depth} layer(s)")]
    EmptySelection { trim_depth: usize },
    #[error("operation needs a disk complex")]
    NotADisk,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle<T> {
    pub center: Point2<T>,
    pub radius: T,
}

/// A tangency between the representative of `a` and the copy of `b` that
/// sits `wrap` lattice steps away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tangency {
    pub a: VertexId,
    pub b: VertexId,
    pub wrap: Wrap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Packing<T> {
    pub topology: Topology,
    pub circles: BTreeMap<VertexId, Circle<T>>,
    pub tangencies: Vec<Tangency>,
    /// Period vectors of an unrolled torus packing.
    pub lattice: Option<[Point2<T>; 2]>,
}

impl<T: Scalar> Packing<T> {
    pub fn circle(&self, id: VertexId) -> Circle<T> {
        self.circles[&id]
    }

    /// Lattice translation for `wrap`; zero on disks.
    pub fn shift(&self, wrap: Wrap) -> Point2<T> {
        match self.lattice {
            Some([l1, l2]) => l1 * T::lit(f64::from(wrap.x)) + l2 * T::lit(f64::from(wrap.y)),
            None => Point2::origin(),
        }
    }

    /// Centre of the copy of `id` translated by `wrap`.
    pub fn lift(&self, id: VertexId, wrap: Wrap) -> Point2<T> {
        self.circles[&id].center + self.shift(wrap)
    }

    /// Largest `| |c_a - c_b| - (r_a + r_b) | / (r_a + r_b)` over tangencies.
    pub fn max_tangency_defect(&self) -> f64 {
        self.tangencies
            .iter()
            .map(|t| {
                let (ca, cb) = (self.circles[&t.a], self.circles[&t.b]);
                let d = ca.center.dist(self.lift(t.b, t.wrap));
                let s = ca.radius + cb.radius;
                ((d - s).abs() / s).f64()
            })
            .fold(0.0, f64::max)
    }

    /// Largest relative overlap `1 - |c_a - c_b| / (r_a + r_b)` over pairs
    /// that are not tangent (negative when nothing overlaps). Torus packings
    /// are checked against neighbouring lattice copies.
    pub fn max_overlap(&self) -> f64 {
        let tangent: std::collections::BTreeSet<(VertexId, VertexId, Wrap)> = self
            .tangencies
            .iter()
            .flat_map(|t| [(t.a, t.b, t.wrap), (t.b, t.a, -t.wrap)])
            .collect();
        let shifts: Vec<Wrap> = if self.lattice.is_some() {
            (-1..=1)
                .flat_map(|x| (-1..=1).map(move |y| Wrap::new(x, y)))
                .collect()
        } else {
            vec![Wrap::ZERO]
        };
        let ids: Vec<VertexId> = self.circles.keys().copied().collect();
        let mut worst = f64::NEG_INFINITY;
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i..] {
                for &w in &shifts {
                    if (a == b && w.is_zero()) || tangent.contains(&(a, b, w)) {
                        continue;
                    }
                    let (ca, cb) = (self.circles[&a], self.circles[&b]);
                    let d = ca.center.dist(self.lift(b, w));
                    worst = worst.max((T::one() - d / (ca.radius + cb.radius)).f64());
                }
            }
        }
        worst
    }

    /// Every circle copy whose lattice offset is listed in `offsets`, in
    /// offset-major order. Disks only have the zero offset.
    pub fn stamp(&self, offsets: &[Wrap]) -> Vec<(VertexId, Wrap, Circle<T>)> {
        let mut out = Vec::new();
        for &w in offsets {
            if self.lattice.is_none() && !w.is_zero() {
                continue;
            }
            for (&id, c) in &self.circles {
                out.push((
                    id,
                    w,
                    Circle {
                        center: c.center + self.shift(w),
                        radius: c.radius,
                    },
                ));
            }
        }
        out
    }

    pub fn to_f64(&self) -> Packing<f64> {
        Packing {
            topology: self.topology,
            circles: self
                .circles
                .iter()
                .map(|(&id, c)| {
                    (
                        id,
                        Circle {
                            center: c.center.to_f64(),
                            radius: c.radius.f64(),
                        },
                    )
                })
                .collect(),
            tangencies: self.tangencies.clone(),
            lattice: self.lattice.map(|l| l.map(|p| p.to_f64())),
        }
    }

    pub fn dump(&self) -> PackingDump {
        PackingDump {
            circles: self
                .circles
                .iter()
                .map(|(&id, c)| CircleDump {
                    id,
                    x: c.center.x.f64(),
                    y: c.center.y.f64(),
                    r: c.radius.f64(),
                })
                .collect(),
            lattice: self.lattice.map(|l| l.map(|p| [p.x.f64(), p.y.f64()])),
        }
    }
}

/// Offsets `-k..=k` in both lattice directions, row by row.
pub fn square_offsets(k: i32) -> Vec<Wrap> {
    (-k..=k)
        .flat_map(|y| (-k..=k).map(move |x| Wrap::new(x, y)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleDump {
    pub id: VertexId,
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

/// JSON form of a packing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingDump {
    pub circles: Vec<CircleDump>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<[[f64; 2]; 2]>,
}

/// Solves radii and lays out the packing with the default configuration.
pub fn pack<T: Scalar>(complex: &crate::complex::Complex) -> Result<Packing<T>, PackingError> {
    let radii = solve_radii::<T>(complex, &SolverConfig::for_scalar::<T>())?;
    layout(complex, &radii)
}
