use std::collections::BTreeMap;
use std::f64::consts::PI;

use proptest::prelude::*;

use rosette_core::complex::{demos, Complex};
use rosette_core::packing::{
    angle_sum, beta, boundary_radius, layout, pack, solve_radii, solve_radii_traced, BoundaryMode,
    SolverConfig,
};
use rosette_core::Packing;

/// Angle subtended at `v` by each pair of consecutive petals, measured from
/// the laid-out centres rather than from the radii.
fn measured_angle_sum(c: &Complex, p: &Packing, v: u32) -> f64 {
    let s = c.structure().unwrap();
    let f = s.flower(v);
    let o = p.circle(v).center;
    let k = f.petals.len();
    let pairs = if f.closed { k } else { k - 1 };
    (0..pairs)
        .map(|i| {
            let a = p.lift(f.petals[i].vertex, f.petals[i].wrap) - o;
            let b = p.lift(f.petals[(i + 1) % k].vertex, f.petals[(i + 1) % k].wrap) - o;
            a.cross(b).atan2(a.dot(b))
        })
        .sum()
}

fn check_packing(c: &Complex) -> Result<(), TestCaseError> {
    let p = pack::<f64>(c).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(
        p.max_tangency_defect() <= 1e-6,
        "defect {}",
        p.max_tangency_defect()
    );
    prop_assert!(p.max_overlap() <= 1e-9, "overlap {}", p.max_overlap());
    for v in c.structure().unwrap().interior_ids() {
        let sum = measured_angle_sum(c, &p, v);
        prop_assert!((sum - 2.0 * PI).abs() < 1e-6, "vertex {v}: {sum}");
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_delaunay_packings_are_valid(n in 10usize..=200, seed in any::<u64>()) {
        check_packing(&demos::random_delaunay(n, seed))?;
    }

    #[test]
    fn angle_sum_decreases_in_radius(
        neighbors in prop::collection::vec(0.05f64..20.0, 3..12),
        r in 0.01f64..50.0,
        dr in 0.001f64..5.0,
    ) {
        prop_assert!(angle_sum(r + dr, &neighbors, true) < angle_sum(r, &neighbors, true));
    }

    #[test]
    fn beta_is_the_law_of_cosines(r in 0.01f64..50.0, a in 0.01f64..50.0, b in 0.01f64..50.0) {
        let (x, y, z) = (r + a, r + b, a + b);
        let want = ((x * x + y * y - z * z) / (2.0 * x * y)).clamp(-1.0, 1.0).acos();
        prop_assert!((beta(r, a, b) - want).abs() < 1e-7);
    }
}

#[test]
fn demo_packings_are_valid() {
    for name in demos::DEMO_NAMES {
        check_packing(&demos::by_name(name).unwrap()).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn three_unit_circles_around_one() {
    // Explicit placement: three unit circles around a unit circle subtend
    // 2·asin(1/2) each.
    assert!((3.0 * beta(1.0, 1.0, 1.0) - PI).abs() < 1e-14);
    assert!((angle_sum(1.0, &[1.0; 3], false) - 2.0 * PI / 3.0).abs() < 1e-14);
}

#[test]
fn boundary_radius_oracle() {
    // A circle of radius r tangent to n unit neighbours in a closed chain:
    // sin(π/n) = 1 / (1 + r) for the hub; boundary_radius inverts the roles.
    assert!((boundary_radius::<f64>(3).unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-12);
    assert!((boundary_radius::<f64>(4).unwrap() - 1.0).abs() < 1e-12);
    assert!(boundary_radius::<f64>(2).is_err());
}

#[test]
fn scale_equivariance() {
    for c in [demos::random_delaunay(80, 3), demos::bowtie_demo()] {
        let base = solve_radii::<f64>(&c, &SolverConfig::default()).unwrap();
        let s = c.structure().unwrap();
        let interior = s.interior_ids();
        let boundary: BTreeMap<_, _> = base
            .iter()
            .filter(|(v, _)| !interior.contains(v))
            .map(|(&v, &r)| (v, r))
            .collect();
        let scaled_config = |k: f64| SolverConfig {
            boundary_mode: BoundaryMode::ExplicitRadii(
                boundary.iter().map(|(&v, &r)| (v, r * k)).collect(),
            ),
            ..SolverConfig::default()
        };
        let r1 = solve_radii::<f64>(&c, &scaled_config(1.0)).unwrap();
        let r2 = solve_radii::<f64>(&c, &scaled_config(2.0)).unwrap();
        let (p1, p2) = (layout(&c, &r1).unwrap(), layout(&c, &r2).unwrap());
        for (v, c1) in &p1.circles {
            let c2 = p2.circle(*v);
            assert!((c2.radius / c1.radius - 2.0).abs() < 1e-8, "radius of {v}");
            let scale = c1.radius.max(c1.center.norm());
            assert!(
                c2.center.dist(c1.center * 2.0) <= 1e-8 * 2.0 * scale,
                "centre of {v}"
            );
        }
    }
}

#[test]
fn convergence_is_monotone() {
    for (n, seed) in [(10, 0), (50, 1), (100, 2), (200, 3)] {
        let c = demos::random_delaunay(n, seed);
        let (_, trace) = solve_radii_traced::<f64>(&c, &SolverConfig::default()).unwrap();
        for w in trace.total_error.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-9), "n={n}: total error rose {w:?}");
        }
        for w in trace.worst_residual.windows(2) {
            assert!(
                w[1] <= w[0] * (1.0 + 1e-9),
                "n={n}: worst residual rose {w:?}"
            );
        }
    }
}

#[test]
fn f32_agrees_with_f64() {
    let c = demos::hex_patch(2);
    let (a, b) = (pack::<f32>(&c).unwrap(), pack::<f64>(&c).unwrap());
    for (v, cb) in &b.circles {
        let ca = a.circle(*v);
        assert!((f64::from(ca.radius) - cb.radius).abs() < 1e-4 * cb.radius);
        assert!(ca.center.to_f64().dist(cb.center) < 1e-3);
    }
}

#[test]
fn hexagonal_torus() {
    let p = pack::<f64>(&demos::torus_hex()).unwrap();
    let [l1, l2] = p.lattice.unwrap();
    assert!((l1.norm() - l2.norm()).abs() < 1e-9);
    let angle = (l1.dot(l2) / (l1.norm() * l2.norm())).acos();
    assert!((angle - PI / 3.0).abs() < 1e-9);
    // Every tangency crosses a seam; the lattice must close them all.
    assert!(p.max_tangency_defect() < 1e-9);
}
