use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{beta, Circle, Packing, PackingError, Tangency};
use crate::complex::{Complex, Petal, Topology, VertexId, Wrap};
use crate::geom::Point2;
use crate::scalar::Scalar;

/// Places the circles. The lowest-id interior vertex goes to the origin and
/// its lowest neighbour petal onto the +x axis; every other circle is placed
/// across a shared edge of an already placed triangle, breadth first. On a
/// torus the period vectors are then recovered from the positions of the
/// wrapped copies.
pub fn layout<T: Scalar>(
    complex: &Complex,
    radii: &BTreeMap<VertexId, T>,
) -> Result<Packing<T>, PackingError> {
    let s = complex.structure().map_err(PackingError::InvalidComplex)?;
    for &v in s.ids() {
        match radii.get(&v) {
            Some(&r) if r > T::zero() && r.is_finite() => {}
            _ => {
                return Err(PackingError::InvalidConfig(format!(
                    "vertex {v} needs a positive radius"
                )))
            }
        }
    }
    let tris = s.triangles();
    let mut twin: HashMap<(VertexId, VertexId, Wrap), (usize, usize)> = HashMap::new();
    for (ti, t) in tris.iter().enumerate() {
        for c in 0..3 {
            twin.insert(
                (t.vertices[c], t.vertices[(c + 1) % 3], t.wraps[c]),
                (ti, c),
            );
        }
    }

    let root = s.interior_ids().first().copied().unwrap_or(s.ids()[0]);
    let (t0, c0) = (0..tris.len())
        .flat_map(|t| (0..3).map(move |c| (t, c)))
        .filter(|&(t, c)| tris[t].vertices[c] == root)
        .min_by_key(|&(t, c)| Petal {
            vertex: tris[t].vertices[(c + 1) % 3],
            wrap: tris[t].wraps[c],
        })
        .expect("root has a wedge");

    let r = |v: VertexId| radii[&v];
    let mut pos: Vec<[Point2<T>; 3]> = vec![[Point2::origin(); 3]; tris.len()];
    let mut off: Vec<[Wrap; 3]> = vec![[Wrap::ZERO; 3]; tris.len()];
    let mut placed = vec![false; tris.len()];

    // Third corner of triangle `t`, given corners `c` and `c + 1`.
    let complete = |t: usize, c: usize, pos: &mut [[Point2<T>; 3]], off: &mut [[Wrap; 3]]| {
        let tri = &tris[t];
        let (a, b, k) = (c, (c + 1) % 3, (c + 2) % 3);
        let (ra, rb, rk) = (r(tri.vertices[a]), r(tri.vertices[b]), r(tri.vertices[k]));
        let dir = (pos[t][b] - pos[t][a])
            .unit()
            .unwrap_or(Point2::new(T::one(), T::zero()));
        pos[t][k] = pos[t][a] + dir.rotate(beta(ra, rb, rk)) * (ra + rk);
        off[t][k] = off[t][b] + tri.wraps[b];
    };

    {
        let tri = &tris[t0];
        let u = tri.vertices[(c0 + 1) % 3];
        pos[t0][c0] = Point2::origin();
        pos[t0][(c0 + 1) % 3] = Point2::new(r(root) + r(u), T::zero());
        off[t0][(c0 + 1) % 3] = tri.wraps[c0];
        complete(t0, c0, &mut pos, &mut off);
        placed[t0] = true;
    }
    let mut queue = VecDeque::from([t0]);
    let mut order = vec![t0];
    while let Some(t) = queue.pop_front() {
        for k in 0..3 {
            let tri = &tris[t];
            let (a, b) = (tri.vertices[k], tri.vertices[(k + 1) % 3]);
            let Some(&(t2, c2)) = twin.get(&(b, a, -tri.wraps[k])) else {
                continue;
            };
            if placed[t2] {
                continue;
            }
            pos[t2][c2] = pos[t][(k + 1) % 3];
            pos[t2][(c2 + 1) % 3] = pos[t][k];
            off[t2][c2] = off[t][(k + 1) % 3];
            off[t2][(c2 + 1) % 3] = off[t][k];
            complete(t2, c2, &mut pos, &mut off);
            placed[t2] = true;
            queue.push_back(t2);
            order.push(t2);
        }
    }

    // First placement of each vertex.
    let mut first: BTreeMap<VertexId, (Point2<T>, Wrap)> = BTreeMap::new();
    for &t in &order {
        for c in 0..3 {
            first
                .entry(tris[t].vertices[c])
                .or_insert((pos[t][c], off[t][c]));
        }
    }

    let torus = complex.topology() == Topology::Torus;
    let lattice = if torus {
        Some(fit_lattice(&order, tris, &pos, &off, &first)?)
    } else {
        None
    };
    let shift = |w: Wrap| match lattice {
        Some([l1, l2]) => l1 * T::lit(f64::from(w.x)) + l2 * T::lit(f64::from(w.y)),
        None => Point2::origin(),
    };
    let centers: BTreeMap<VertexId, Point2<T>> = first
        .iter()
        .map(|(&v, &(p, w))| (v, p - shift(w)))
        .collect();

    let tol = T::lit(T::LAYOUT_TOLERANCE);
    for &t in &order {
        for c in 0..3 {
            let v = tris[t].vertices[c];
            let defect = pos[t][c].dist(centers[&v] + shift(off[t][c])) / r(v);
            if !(defect <= tol) {
                return Err(PackingError::LayoutInconsistency {
                    vertex: v,
                    defect: defect.f64(),
                });
            }
        }
    }

    let packing = Packing {
        topology: complex.topology(),
        circles: centers
            .iter()
            .map(|(&v, &center)| {
                (
                    v,
                    Circle {
                        center,
                        radius: r(v),
                    },
                )
            })
            .collect(),
        tangencies: s
            .edges()
            .iter()
            .map(|e| Tangency {
                a: e.a,
                b: e.b,
                wrap: e.wrap,
            })
            .collect(),
        lattice,
    };
    let worst = packing.max_tangency_defect();
    if !(worst <= T::LAYOUT_TOLERANCE) {
        let vertex = packing
            .tangencies
            .iter()
            .max_by(|x, y| defect_of(&packing, x).total_cmp(&defect_of(&packing, y)))
            .map_or(root, |t| t.a);
        return Err(PackingError::LayoutInconsistency {
            vertex,
            defect: worst,
        });
    }
    Ok(packing)
}

fn defect_of<T: Scalar>(p: &Packing<T>, t: &Tangency) -> f64 {
    let (ca, cb) = (p.circles[&t.a], p.circles[&t.b]);
    let s = ca.radius + cb.radius;
    ((ca.center.dist(p.lift(t.b, t.wrap)) - s).abs() / s).f64()
}

/// Least-squares period vectors `L` from `X - P_v = L·(s - s_v)` over all
/// placed corners.
fn fit_lattice<T: Scalar>(
    order: &[usize],
    tris: &[crate::complex::Triangle],
    pos: &[[Point2<T>; 3]],
    off: &[[Wrap; 3]],
    first: &BTreeMap<VertexId, (Point2<T>, Wrap)>,
) -> Result<[Point2<T>; 2], PackingError> {
    let (mut a11, mut a12, mut a22) = (T::zero(), T::zero(), T::zero());
    let (mut b1, mut b2) = (Point2::origin(), Point2::origin());
    for &t in order {
        for c in 0..3 {
            let (p, w) = first[&tris[t].vertices[c]];
            let d = off[t][c] - w;
            let (dx, dy) = (T::lit(f64::from(d.x)), T::lit(f64::from(d.y)));
            let delta = pos[t][c] - p;
            a11 = a11 + dx * dx;
            a12 = a12 + dx * dy;
            a22 = a22 + dy * dy;
            b1 += delta * dx;
            b2 += delta * dy;
        }
    }
    let det = a11 * a22 - a12 * a12;
    if det.abs() <= T::epsilon() {
        return Err(PackingError::LayoutInconsistency {
            vertex: tris[order[0]].vertices[0],
            defect: f64::INFINITY,
        });
    }
    // L · A = B with A = [[a11, a12], [a12, a22]], B = [b1 b2] column-wise.
    let l1 = (b1 * a22 - b2 * a12) / det;
    let l2 = (b2 * a11 - b1 * a12) / det;
    Ok([l1, l2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::demos;
    use crate::packing::{solve_radii, SolverConfig};

    #[test]
    fn unit_flower_layout() {
        let radii: BTreeMap<VertexId, f64> = (0..=6).map(|v| (v, 1.0)).collect();
        let p = layout(&demos::flower(6), &radii).unwrap();
        assert_eq!(p.circle(0).center, Point2::origin());
        let c1 = p.circle(1).center;
        assert!((c1.x - 2.0).abs() < 1e-15 && c1.y.abs() < 1e-15);
        for v in 1..=6u32 {
            let want = Point2::polar(std::f64::consts::PI / 3.0 * f64::from(v - 1)) * 2.0;
            assert!(p.circle(v).center.dist(want) < 1e-12, "{v}");
        }
        assert!(p.max_overlap() <= 1e-12);
    }

    #[test]
    fn inconsistent_radii_are_detected() {
        let mut radii: BTreeMap<VertexId, f64> = (0..=6).map(|v| (v, 1.0)).collect();
        radii.insert(0, 1.2);
        assert!(matches!(
            layout(&demos::flower(6), &radii),
            Err(PackingError::LayoutInconsistency { .. })
        ));
    }

    #[test]
    fn hexagonal_torus_lattice() {
        let c = demos::torus_hex();
        let radii = solve_radii::<f64>(&c, &SolverConfig::default()).unwrap();
        let p = layout(&c, &radii).unwrap();
        let [l1, l2] = p.lattice.unwrap();
        assert!((l1.norm() - l2.norm()).abs() < 1e-9);
        let angle = (l1.dot(l2) / (l1.norm() * l2.norm())).acos();
        assert!((angle - std::f64::consts::PI / 3.0).abs() < 1e-9, "{angle}");
        assert!(p.max_tangency_defect() < 1e-9);
        assert!(p.max_overlap() < 1e-9);
    }

    #[test]
    fn torus_grid_lattice_spans_cells() {
        let c = demos::torus_grid(3, 2);
        let radii = solve_radii::<f64>(&c, &SolverConfig::default()).unwrap();
        let p = layout(&c, &radii).unwrap();
        let [l1, l2] = p.lattice.unwrap();
        assert!((l1.norm() - 6.0).abs() < 1e-9, "{l1:?}");
        assert!((l2.norm() - 4.0).abs() < 1e-9, "{l2:?}");
    }
}
