use std::collections::BTreeSet;

use super::{CyclicInfo, PatchError, PatchParams, PatchPolygon, Role, TauMode, VertexKind};
use crate::complex::VertexId;
use crate::geom::{incenter, signed_area2, Point2};
use crate::packing::Circle;
use crate::scalar::Scalar;

/// Counterclockwise angle from `a` to `b`, in `(0, 2π]`.
pub(crate) fn ccw_angle<T: Scalar>(a: Point2<T>, b: Point2<T>) -> T {
    let mut d = a.cross(b).atan2(a.dot(b));
    if d <= T::zero() {
        d = d + T::two() * T::PI();
    }
    d
}

pub(crate) fn check_tau(params: &PatchParams) -> Result<(), PatchError> {
    if params.tau > 0.0 && params.tau < 1.0 {
        Ok(())
    } else {
        Err(PatchError::InvalidTau(params.tau))
    }
}

/// Distance of polygon vertices from the centre of a circle of radius `r`.
pub(crate) fn vertex_distance<T: Scalar>(
    id: VertexId,
    r: T,
    mean_radius: T,
    params: &PatchParams,
) -> Result<T, PatchError> {
    let tau = T::lit(params.tau);
    let d = match params.tau_mode {
        TauMode::Scale => tau * r,
        TauMode::Offset => r - (T::one() - tau) * mean_radius,
    };
    if d > T::zero() {
        Ok(d)
    } else {
        Err(PatchError::OffsetTooLarge(id))
    }
}

/// What fills the arc after a kept tangency.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Gap<T> {
    Midpoint,
    Exterior,
    /// A single removed neighbour at this flower position and direction.
    Former(usize, Point2<T>),
    Trisect,
}

/// Polygon vertices of one circle plus where each kept tangency landed.
#[derive(Debug, Clone)]
pub(crate) struct Ring<T> {
    pub points: Vec<Point2<T>>,
    pub kinds: Vec<VertexKind>,
    /// `(flower position, polygon index)` of each kept tangency vertex.
    pub tangency_at: Vec<(usize, usize)>,
}

impl<T: Scalar> Ring<T> {
    pub fn index_of_petal(&self, petal: usize) -> Option<usize> {
        self.tangency_at
            .iter()
            .find(|&&(p, _)| p == petal)
            .map(|&(_, i)| i)
    }
}

/// `kept[j] = (flower position, unit direction)`; `gaps[j]` fills the arc
/// from `kept[j]` counterclockwise to `kept[j + 1]`.
pub(crate) fn ring<T: Scalar>(
    center: Point2<T>,
    dist: T,
    kept: &[(usize, Point2<T>)],
    gaps: &[Gap<T>],
) -> Ring<T> {
    let n = kept.len();
    let mut r = Ring {
        points: Vec::new(),
        kinds: Vec::new(),
        tangency_at: Vec::new(),
    };
    let at = |u: Point2<T>| center + u * dist;
    for j in 0..n {
        let (petal, u) = kept[j];
        r.tangency_at.push((petal, r.points.len()));
        r.points.push(at(u));
        r.kinds.push(VertexKind::Tangency(petal));
        let next = kept[(j + 1) % n].1;
        let delta = ccw_angle(u, next);
        match gaps[j] {
            Gap::Midpoint | Gap::Exterior => {
                r.points.push(at(u.rotate(delta / T::two())));
                r.kinds.push(if matches!(gaps[j], Gap::Exterior) {
                    VertexKind::ExteriorMidpoint
                } else {
                    VertexKind::ArcMidpoint
                });
            }
            Gap::Former(p, dir) => {
                r.points.push(at(dir));
                r.kinds.push(VertexKind::FormerTangency(p));
            }
            Gap::Trisect => {
                let third = delta / T::lit(3.0);
                r.points.push(at(u.rotate(third)));
                r.points.push(at(u.rotate(third * T::two())));
                r.kinds.push(VertexKind::Trisection);
                r.kinds.push(VertexKind::Trisection);
            }
        }
    }
    r
}

pub(crate) fn cyclic_from_ring<T: Scalar>(
    id: VertexId,
    circle: Circle<T>,
    ring: Ring<T>,
) -> PatchPolygon<T> {
    let n = ring.points.len();
    PatchPolygon {
        role: Role::Cyclic {
            circle: id,
            order: n,
        },
        points: ring.points,
        neighbors: vec![None; n],
        circles: vec![id],
        cyclic: Some(CyclicInfo {
            center: circle.center,
            radius: circle.radius,
            kinds: ring.kinds,
        }),
    }
}

/// Cyclic polygon of a closed flower: each tangency point followed by the
/// midpoint of the arc to the next one (or by two trisection points for the
/// arcs listed in `splits`, counted from the arc after tangency 0), all
/// scaled towards the centre.
pub fn cyclic_polygon<T: Scalar>(
    id: VertexId,
    circle: Circle<T>,
    tangency_points: &[Point2<T>],
    params: &PatchParams,
    splits: &BTreeSet<usize>,
) -> Result<PatchPolygon<T>, PatchError> {
    check_tau(params)?;
    if tangency_points.len() < 3 {
        return Err(PatchError::TooFewNeighbors {
            circle: id,
            count: tangency_points.len(),
        });
    }
    let dist = vertex_distance(id, circle.radius, circle.radius, params)?;
    let kept: Vec<(usize, Point2<T>)> = tangency_points
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            (p - circle.center)
                .unit()
                .map(|u| (i, u))
                .ok_or(PatchError::DegeneratePolygon)
        })
        .collect::<Result<_, _>>()?;
    let gaps: Vec<Gap<T>> = (0..kept.len())
        .map(|i| {
            if splits.contains(&i) {
                Gap::Trisect
            } else {
                Gap::Midpoint
            }
        })
        .collect();
    Ok(cyclic_from_ring(
        id,
        circle,
        ring(circle.center, dist, &kept, &gaps),
    ))
}

/// The three pentagons filling the gap between three mutually tangent
/// circles. Pentagon `i` borders circles `i` and `i + 1` (after ordering the
/// circles counterclockwise) and is `[arc midpoint of i, tangency vertex of
/// i, tangency vertex of i + 1, arc midpoint of i + 1, o]` with `o` the
/// incentre of the centres.
pub fn filler_pentagons<T: Scalar>(
    circles: [Circle<T>; 3],
    params: &PatchParams,
) -> Result<[PatchPolygon<T>; 3], PatchError> {
    check_tau(params)?;
    let mut cs = circles;
    if signed_area2(&[cs[0].center, cs[1].center, cs[2].center]) < T::zero() {
        cs.swap(1, 2);
    }
    let mean_r = (cs[0].radius + cs[1].radius + cs[2].radius) / T::lit(3.0);
    let mut tan_next = Vec::new();
    let mut tan_prev = Vec::new();
    let mut mid = Vec::new();
    for i in 0..3 {
        let (x, y, z) = (cs[i], cs[(i + 1) % 3], cs[(i + 2) % 3]);
        let d = vertex_distance(i as VertexId, x.radius, mean_r, params)?;
        let uy = (y.center - x.center)
            .unit()
            .ok_or(PatchError::DegeneratePolygon)?;
        let uz = (z.center - x.center)
            .unit()
            .ok_or(PatchError::DegeneratePolygon)?;
        tan_next.push(x.center + uy * d);
        tan_prev.push(x.center + uz * d);
        mid.push(x.center + uy.rotate(ccw_angle(uy, uz) / T::two()) * d);
    }
    let o = incenter(cs[0].center, cs[1].center, cs[2].center);
    let pentagon = |i: usize| {
        let j = (i + 1) % 3;
        PatchPolygon {
            role: Role::FillerPentagon,
            points: vec![mid[i], tan_next[i], tan_prev[j], mid[j], o],
            neighbors: vec![None; 5],
            circles: Vec::new(),
            cyclic: None,
        }
    };
    Ok([pentagon(0), pentagon(1), pentagon(2)])
}
