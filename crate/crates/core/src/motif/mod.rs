//! Motifs for patch polygons: wheel stars in cyclic polygons, PIC motifs in
//! the fillers, and the assembled, trimmed design.

mod assemble;
mod bowtie;
mod pic;
mod star;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::{ValidationReport, VertexId, Wrap};
use crate::geom::{Point2, Segment};
use crate::scalar::Scalar;

pub use assemble::{assemble, build_motifs};
pub use bowtie::fix_bowtie_hexagon;
pub use pic::{contact_pair, contact_rays, order_rays, pic_motif, RayPair};
pub use star::{
    alpha_from_theta_consecutive, alpha_from_theta_skip, star_in_cyclic_polygon, wheel_star,
};

/// Which filler motifs survive trimming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrimFillerRule {
    /// Every circle around the filler's gap is kept.
    #[default]
    AllNeighborsKept,
    /// At least two circles around the gap are kept.
    AnyTwoKept,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MotifParams {
    pub theta: f64,
    pub alpha_override: Option<f64>,
    /// Circles within this many edges of the boundary are trimmed; `None`
    /// keeps everything. An empty result retries with smaller depths.
    pub trim_depth: Option<usize>,
    pub trim_filler_rule: TrimFillerRule,
    /// Explicit set of rosettes to keep, overriding the trim depth.
    pub keep: Option<BTreeSet<VertexId>>,
    /// On a torus, copies are stamped at lattice offsets `-k..=k` in both
    /// directions.
    pub torus_copies: u32,
}

impl Default for MotifParams {
    fn default() -> Self {
        Self {
            theta: 2.0 * std::f64::consts::PI / 5.0,
            alpha_override: None,
            trim_depth: Some(1),
            trim_filler_rule: TrimFillerRule::default(),
            keep: None,
            torus_copies: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MotifError {
    #[error("contact angle must lie in (0, π/2), got {0}")]
    InvalidTheta(f64),
    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("inner radius must be positive, got {0}")]
    InvalidRadius(f64),
    #[error("contact angle {theta} gives a degenerate {n}-pointed star")]
    IncompatibleAngle { n: usize, theta: f64 },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("bisector {0} misses the inner circle; star points are too uneven")]
    StarDistortion(usize),
    #[error("polygon is not cyclic")]
    NotCyclic,
    #[error("rays could not be paired inside the polygon")]
    Unmatched,
    #[error("invalid complex:\n{0}")]
    InvalidComplex(ValidationReport),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rosette<T> {
    pub circle: VertexId,
    pub order: usize,
    pub center: Point2<T>,
    /// The cyclic polygon followed by the retained polygons around it.
    pub polygons: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonFailure {
    pub polygon: usize,
    pub error: MotifError,
}

/// Untrimmed motifs of a patch.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchMotifs<T> {
    pub motifs: Vec<Option<Vec<Segment<T>>>>,
    pub errors: BTreeMap<usize, MotifError>,
    pub fixed_hexagons: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Design<T> {
    /// Motif of each patch polygon (empty where construction failed).
    pub motifs: Vec<Vec<Segment<T>>>,
    /// Polygons surviving the trim.
    pub retained: Vec<bool>,
    pub rosettes: BTreeMap<VertexId, Rosette<T>>,
    pub kept: BTreeSet<VertexId>,
    pub failures: Vec<PolygonFailure>,
    /// Barrel hexagons whose motif was replaced by an X.
    pub fixed_hexagons: Vec<usize>,
    pub lattice: Option<[Point2<T>; 2]>,
    /// Lattice offsets at which the design is drawn; just the origin on a
    /// disk.
    pub stamps: Vec<Wrap>,
}

impl<T: Scalar> Design<T> {
    pub fn shift(&self, w: Wrap) -> Point2<T> {
        match self.lattice {
            Some([a, b]) => a * T::lit(f64::from(w.x)) + b * T::lit(f64::from(w.y)),
            None => Point2::origin(),
        }
    }

    /// Retained segments with their polygon, stamp by stamp.
    pub fn segments(&self) -> Vec<(usize, Segment<T>)> {
        let mut out = Vec::new();
        for &w in &self.stamps {
            let d = self.shift(w);
            for (i, m) in self.motifs.iter().enumerate() {
                if self.retained[i] {
                    out.extend(
                        m.iter()
                            .map(|s| (i, if w.is_zero() { *s } else { s.translate(d) })),
                    );
                }
            }
        }
        out
    }

    pub fn dump(&self) -> DesignDump {
        DesignDump {
            segments: self
                .segments()
                .into_iter()
                .map(|(polygon, s)| SegmentDump {
                    polygon,
                    x1: s.a.x.f64(),
                    y1: s.a.y.f64(),
                    x2: s.b.x.f64(),
                    y2: s.b.y.f64(),
                })
                .collect(),
            rosettes: self
                .rosettes
                .values()
                .map(|r| RosetteDump {
                    circle: r.circle,
                    order: r.order,
                    center: [r.center.x.f64(), r.center.y.f64()],
                })
                .collect(),
            kept: self.kept.iter().copied().collect(),
            failures: self
                .failures
                .iter()
                .map(|f| FailureDump {
                    polygon: f.polygon,
                    message: f.error.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentDump {
    pub polygon: usize,
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RosetteDump {
    pub circle: VertexId,
    pub order: usize,
    pub center: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureDump {
    pub polygon: usize,
    pub message: String,
}

/// JSON form of a design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignDump {
    pub segments: Vec<SegmentDump>,
    pub rosettes: Vec<RosetteDump>,
    pub kept: Vec<VertexId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<FailureDump>,
}
