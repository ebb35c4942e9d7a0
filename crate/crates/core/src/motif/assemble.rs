use std::collections::{BTreeMap, BTreeSet};

use super::bowtie::fix_bowtie_hexagon;
use super::pic::{contact_pair, order_rays, pic_motif, RayPair};
use super::star::star_in_cyclic_polygon;
use super::{
    Design, MotifError, MotifParams, PatchMotifs, PolygonFailure, Rosette, TrimFillerRule,
};
use crate::complex::{Complex, Topology, VertexId, Wrap};
use crate::geom::{Point2, Segment};
use crate::packing::{select_interior, square_offsets, Packing, PackingError};
use crate::patch::{Patch, Role};
use crate::scalar::Scalar;

/// Unit directions of the segments of `motif` that start or end at `p`,
/// pointing away from it.
fn arms_at<T: Scalar>(motif: &[Segment<T>], p: Point2<T>) -> Vec<Point2<T>> {
    motif
        .iter()
        .filter_map(|s| {
            if s.a == p {
                (s.b - p).unit()
            } else if s.b == p {
                (s.a - p).unit()
            } else {
                None
            }
        })
        .collect()
}

/// Rays on edge `e` of polygon `pi`: straight continuations of the two
/// segments meeting the edge midpoint from the neighbouring polygon when it
/// has exactly two there, otherwise the contact-angle rays.
fn edge_rays<T: Scalar>(
    patch: &Patch<T>,
    motifs: &[Option<Vec<Segment<T>>>],
    pi: usize,
    e: usize,
    theta: T,
    from_fillers: bool,
) -> RayPair<T> {
    let poly = &patch.polygons[pi];
    let (a, b) = poly.edge(e);
    let default = contact_pair(a, b, theta);
    let Some(n) = poly.neighbors[e] else {
        return default;
    };
    let other = &patch.polygons[n.polygon];
    if !other.role.is_cyclic() && !from_fillers {
        return default;
    }
    let Some(Some(motif)) = motifs.get(n.polygon) else {
        return default;
    };
    let arms = arms_at(motif, other.edge_midpoint(n.edge));
    if arms.len() != 2 {
        return default;
    }
    order_rays(a, b, [-arms[0], -arms[1]])
}

fn kept_circles<T: Scalar>(
    patch: &Patch<T>,
    packing: &Packing<T>,
    complex: &Complex,
    params: &MotifParams,
) -> Result<BTreeSet<VertexId>, MotifError> {
    let present: BTreeSet<VertexId> = patch.polygons.iter().filter_map(|p| p.circle()).collect();
    if complex.topology() == Topology::Torus {
        return Ok(present);
    }
    if let Some(keep) = &params.keep {
        return Ok(keep.intersection(&present).copied().collect());
    }
    let Some(depth) = params.trim_depth else {
        return Ok(present);
    };
    for d in (0..=depth).rev() {
        match select_interior(packing, complex, d) {
            Ok(set) => return Ok(set),
            Err(PackingError::EmptySelection { .. }) => continue,
            Err(PackingError::InvalidComplex(r)) => return Err(MotifError::InvalidComplex(r)),
            Err(_) => break,
        }
    }
    Ok(BTreeSet::new())
}

/// Motifs of every patch polygon before trimming: stars in the cyclic
/// polygons, then PIC motifs in the fillers, then X-fixes on thin barrel
/// hexagons. Polygons whose motif cannot be built are `None` and have an entry
/// in the error map.
pub fn build_motifs<T: Scalar>(
    patch: &Patch<T>,
    params: &MotifParams,
) -> Result<PatchMotifs<T>, MotifError> {
    if !(params.theta > 0.0 && params.theta < std::f64::consts::FRAC_PI_2) {
        return Err(MotifError::InvalidTheta(params.theta));
    }
    if let Some(a) = params.alpha_override {
        if !(a > 0.0 && a < 1.0) {
            return Err(MotifError::InvalidAlpha(a));
        }
    }
    let theta = T::lit(params.theta);
    let count = patch.polygons.len();
    let mut motifs: Vec<Option<Vec<Segment<T>>>> = vec![None; count];
    let mut errors: BTreeMap<usize, MotifError> = BTreeMap::new();

    for (i, p) in patch.polygons.iter().enumerate() {
        if p.role.is_cyclic() {
            match star_in_cyclic_polygon(p, params) {
                Ok(s) => motifs[i] = Some(s),
                Err(e) => {
                    errors.insert(i, e);
                }
            }
        }
    }
    let fillers: Vec<usize> = (0..count)
        .filter(|&i| !patch.polygons[i].role.is_cyclic())
        .collect();
    let mut rays: BTreeMap<usize, Vec<RayPair<T>>> = BTreeMap::new();
    for &i in &fillers {
        let r: Vec<RayPair<T>> = (0..patch.polygons[i].len())
            .map(|e| edge_rays(patch, &motifs, i, e, theta, false))
            .collect();
        rays.insert(i, r);
    }
    for &i in &fillers {
        match pic_motif(&patch.polygons[i].points, &rays[&i]) {
            Ok(s) => motifs[i] = Some(s),
            Err(e) => {
                errors.insert(i, e);
            }
        }
    }

    let mut fixed_hexagons = Vec::new();
    for &h in fillers
        .iter()
        .filter(|&&i| patch.polygons[i].role == Role::BarrelHexagon)
    {
        let Some(base) = &motifs[h] else { continue };
        let Some(fixed) = fix_bowtie_hexagon(&patch.polygons[h].points, &rays[&h], base) else {
            continue;
        };
        motifs[h] = Some(fixed);
        fixed_hexagons.push(h);
        for e in [0, 2, 3, 5] {
            let Some(n) = patch.polygons[h].neighbors[e] else {
                continue;
            };
            let q = n.polygon;
            if patch.polygons[q].role.is_cyclic() {
                continue;
            }
            let r = edge_rays(patch, &motifs, q, n.edge, theta, true);
            let qr = rays.get_mut(&q).expect("filler rays");
            qr[n.edge] = r;
            match pic_motif(&patch.polygons[q].points, qr) {
                Ok(s) => {
                    motifs[q] = Some(s);
                    errors.remove(&q);
                }
                Err(err) => {
                    motifs[q] = None;
                    errors.insert(q, err);
                }
            }
        }
    }
    Ok(PatchMotifs {
        motifs,
        errors,
        fixed_hexagons,
    })
}

/// Builds every motif, fixes thin bowtie hexagons, trims to whole rosettes
/// and groups polygons into rosettes. Retained polygons whose motif cannot be
/// built are listed in `failures` and left empty.
pub fn assemble<T: Scalar>(
    patch: &Patch<T>,
    packing: &Packing<T>,
    complex: &Complex,
    params: &MotifParams,
) -> Result<Design<T>, MotifError> {
    let PatchMotifs {
        motifs,
        errors,
        fixed_hexagons,
    } = build_motifs(patch, params)?;
    let kept = kept_circles(patch, packing, complex, params)?;
    let torus = complex.topology() == Topology::Torus;
    let retained: Vec<bool> = patch
        .polygons
        .iter()
        .map(|p| {
            if torus {
                return true;
            }
            if let Some(c) = p.circle() {
                return kept.contains(&c);
            }
            let k = p.circles.iter().filter(|c| kept.contains(c)).count();
            match params.trim_filler_rule {
                TrimFillerRule::AllNeighborsKept => !p.circles.is_empty() && k == p.circles.len(),
                TrimFillerRule::AnyTwoKept => k >= 2,
            }
        })
        .collect();

    let mut rosettes = BTreeMap::new();
    for (i, p) in patch.polygons.iter().enumerate() {
        let Some(c) = p.circle() else { continue };
        if !kept.contains(&c) || motifs[i].is_none() {
            continue;
        }
        let mut members = vec![i];
        let mut around: Vec<usize> = p
            .neighbors
            .iter()
            .flatten()
            .map(|n| n.polygon)
            .filter(|&q| retained[q] && q != i)
            .collect();
        around.sort_unstable();
        around.dedup();
        members.extend(
            around
                .into_iter()
                .filter(|&q| !patch.polygons[q].role.is_cyclic()),
        );
        let center = p
            .cyclic
            .as_ref()
            .map_or_else(|| Point2::origin(), |info| info.center);
        rosettes.insert(
            c,
            Rosette {
                circle: c,
                order: p.len(),
                center,
                polygons: members,
            },
        );
    }

    let stamps = if torus && patch.lattice.is_some() {
        square_offsets(params.torus_copies as i32)
    } else {
        vec![Wrap::ZERO]
    };
    let failures = errors
        .into_iter()
        .filter(|&(polygon, _)| retained[polygon])
        .map(|(polygon, error)| PolygonFailure { polygon, error })
        .collect();
    Ok(Design {
        motifs: motifs.into_iter().map(Option::unwrap_or_default).collect(),
        retained,
        rosettes,
        kept,
        failures,
        fixed_hexagons,
        lattice: patch.lattice,
        stamps,
    })
}
