use std::collections::BTreeSet;

use super::{Packing, PackingError};
use crate::complex::{Complex, Topology, VertexId};
use crate::scalar::Scalar;

/// Circles more than `trim_depth` edges away from the boundary, restricted
/// to the largest connected group (ties go to the group holding the lowest
/// id). Gadget centres never qualify since their circles are removed.
pub fn select_interior<T: Scalar>(
    packing: &Packing<T>,
    complex: &Complex,
    trim_depth: usize,
) -> Result<BTreeSet<VertexId>, PackingError> {
    if complex.topology() != Topology::Disk {
        return Err(PackingError::NotADisk);
    }
    let s = complex.structure().map_err(PackingError::InvalidComplex)?;
    let removed = s.gadget_centers();
    let dist = s.boundary_distance();
    let candidates: BTreeSet<VertexId> = s
        .ids()
        .iter()
        .copied()
        .filter(|v| dist.get(v).is_some_and(|&d| d > trim_depth))
        .filter(|v| !removed.contains(v) && packing.circles.contains_key(v))
        .collect();

    let mut best: BTreeSet<VertexId> = BTreeSet::new();
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    for &start in &candidates {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = BTreeSet::from([start]);
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            for u in s.neighbors(v) {
                if candidates.contains(&u) && seen.insert(u) {
                    comp.insert(u);
                    stack.push(u);
                }
            }
        }
        // Components are discovered in ascending order of their lowest id,
        // so a strict comparison keeps the lowest-id group on ties.
        if comp.len() > best.len() {
            best = comp;
        }
    }
    if best.is_empty() {
        return Err(PackingError::EmptySelection { trim_depth });
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::demos;
    use crate::packing::pack;

    #[test]
    fn flower_trim_levels() {
        let c = demos::flower(6);
        let p = pack::<f64>(&c).unwrap();
        assert!(matches!(
            select_interior(&p, &c, 1),
            Err(PackingError::EmptySelection { trim_depth: 1 })
        ));
        assert_eq!(select_interior(&p, &c, 0).unwrap(), BTreeSet::from([0]));
    }

    #[test]
    fn hex_patch_trims_to_core() {
        let c = demos::hex_patch(3);
        let p = pack::<f64>(&c).unwrap();
        assert_eq!(select_interior(&p, &c, 1).unwrap().len(), 7);
        assert_eq!(select_interior(&p, &c, 2).unwrap(), BTreeSet::from([0]));
    }
}
