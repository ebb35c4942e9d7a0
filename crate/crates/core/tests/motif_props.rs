use std::f64::consts::PI;

use proptest::prelude::*;

use rosette_core::complex::{demos, Complex};
use rosette_core::geom::Point2;
use rosette_core::motif::{alpha_from_theta_skip, assemble, wheel_star, MotifParams};
use rosette_core::packing::{pack, Circle};
use rosette_core::patch::{build_patch, optimize_tau, PatchParams, Role, TauMode, TauSweep};
use rosette_core::{Design, Packing, Segment};

type P = Point2<f64>;

fn design(c: &Complex, packing: &Packing, params: &MotifParams) -> Design {
    let patch = build_patch(packing, c, &PatchParams::with_tau(0.8)).unwrap();
    assemble(&patch, packing, c, params).unwrap()
}

/// Acute angle between two directions.
fn acute(u: P, v: P) -> f64 {
    let a = (u.cross(v).abs()).atan2(u.dot(v));
    a.min(PI - a)
}

/// Points at angles `2πk/n` with radii scaled by `1 + eps_k`.
fn perturbed(n: usize, eps: &[f64]) -> Vec<P> {
    (0..n)
        .map(|k| P::polar(2.0 * PI * k as f64 / n as f64) * (1.0 + eps[k]))
        .collect()
}

/// Skip-2 star on the edge midpoints, as the cyclic polygons get it.
fn star(points: &[P], theta: f64) -> (Vec<Segment>, f64) {
    let n = points.len();
    let mids: Vec<P> = (0..n)
        .map(|e| points[e].midpoint(points[(e + 1) % n]))
        .collect();
    let r = points.iter().map(|p| p.norm()).sum::<f64>() / n as f64 * (PI / n as f64).cos();
    let rho = alpha_from_theta_skip(n, theta).unwrap() * r;
    (wheel_star(&mids, P::origin(), rho, 2).unwrap(), rho)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn contact_angle_on_near_regular_polygons(
        n in 6usize..=16,
        eps in prop::collection::vec(-1e-3f64..1e-3, 16),
        theta in 0.9f64..1.4,
    ) {
        let pts = perturbed(n, &eps);
        let (segs, _) = star(&pts, theta);
        for (i, s) in segs.iter().enumerate() {
            // Segment 2i leaves midpoint i, segment 2i + 1 ends at midpoint i + 2.
            let e = if i % 2 == 0 { i / 2 } else { (i / 2 + 2) % n };
            let edge = pts[(e + 1) % n] - pts[e];
            let a = acute(s.b - s.a, edge);
            prop_assert!((a - theta).abs() < 0.5f64.to_radians(), "segment {i}: {} vs {}", a.to_degrees(), theta.to_degrees());
        }
    }

    #[test]
    fn one_percent_radial_noise_degrades_gracefully(
        n in 5usize..=16,
        eps in prop::collection::vec(-0.01f64..0.01, 16),
    ) {
        let theta = 2.0 * PI / 5.0;
        prop_assume!(theta > PI / n as f64);
        let (segs, rho) = star(&perturbed(n, &eps), theta);
        prop_assert_eq!(segs.len(), 2 * n);
        for s in segs.iter().step_by(2) {
            prop_assert!((s.b.norm() / rho - 1.0).abs() < 0.02);
        }
    }
}

#[test]
fn contact_angle_in_the_hex_patch_hub() {
    let c = demos::hex_patch(2);
    let p = pack::<f64>(&c).unwrap();
    let patch = build_patch(&p, &c, &PatchParams::with_tau(0.8)).unwrap();
    let params = MotifParams::default();
    let d = assemble(&patch, &p, &c, &params).unwrap();
    let hub = patch.cyclic_of(0).unwrap();
    let q = &patch.polygons[hub];
    let mut checked = 0;
    for s in &d.motifs[hub] {
        for e in 0..q.len() {
            let m = q.edge_midpoint(e);
            let (a, b) = q.edge(e);
            let leg = if s.a.dist(m) < 1e-9 {
                s.b - s.a
            } else if s.b.dist(m) < 1e-9 {
                s.a - s.b
            } else {
                continue;
            };
            let angle = acute(leg, b - a);
            assert!(
                (angle - params.theta).abs() < 0.5f64.to_radians(),
                "edge {e}: {}°",
                angle.to_degrees()
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 24);
}

#[test]
fn bowtie_split_polygon_gets_an_odd_star() {
    let c = demos::bowtie_demo();
    let p = pack::<f64>(&c).unwrap();
    let patch = build_patch(&p, &c, &PatchParams::with_tau(0.8)).unwrap();
    let d = assemble(&patch, &p, &c, &MotifParams::default()).unwrap();
    let odd: Vec<usize> = patch
        .polygons
        .iter()
        .enumerate()
        .filter(|(_, q)| matches!(q.role, Role::Cyclic { order, .. } if order % 2 == 1))
        .map(|(i, _)| i)
        .collect();
    assert_eq!(odd.len(), 2);
    for i in odd {
        assert_eq!(patch.polygons[i].len(), 13);
        assert_eq!(d.motifs[i].len(), 26);
    }
}

#[test]
fn periodic_bowtie_grid_is_decagonal() {
    let c = demos::bowtie_grid(6);
    let p = pack::<f64>(&c).unwrap();
    let d = design(&c, &p, &MotifParams::default());
    assert!(!d.rosettes.is_empty());
    assert!(d.rosettes.values().all(|r| r.order == 10));
}

#[test]
fn offset_mode_is_worse_than_scale_mode() {
    for c in [demos::hex_patch(2), demos::random_delaunay(60, 1)] {
        let p = pack::<f64>(&c).unwrap();
        let sweep = TauSweep::default();
        let s = optimize_tau(&p, &c, &sweep, TauMode::Scale).unwrap();
        let o = optimize_tau(&p, &c, &sweep, TauMode::Offset).unwrap();
        assert!(
            s.best_error < o.best_error,
            "{} vs {}",
            s.best_error,
            o.best_error
        );
    }
}

#[test]
fn tau_curve_has_no_jumps() {
    for c in [demos::hex_patch(2), demos::random_delaunay(60, 1)] {
        let p = pack::<f64>(&c).unwrap();
        let e = optimize_tau(&p, &c, &TauSweep::default(), TauMode::Scale)
            .unwrap()
            .errors;
        assert!(e.iter().all(|x| x.is_finite()));
        for i in 1..e.len() - 2 {
            let local = (e[i] - e[i - 1]).abs().max((e[i + 2] - e[i + 1]).abs());
            assert!(
                (e[i + 1] - e[i]).abs() <= 10.0 * local + 1e-12,
                "jump at step {i}"
            );
        }
    }
}

fn moved(p: &Packing, angle: f64, by: P) -> Packing {
    let mut q = p.clone();
    for c in q.circles.values_mut() {
        *c = Circle {
            center: c.center.rotate(angle) + by,
            radius: c.radius,
        };
    }
    q.lattice = q.lattice.map(|l| l.map(|v| v.rotate(angle)));
    q
}

#[test]
fn motifs_follow_rigid_motions() {
    let (angle, by) = (0.7, P::new(3.0, -2.0));
    for name in ["delaunay", "bowtie", "grid-gadgets", "torus-grid"] {
        let c = demos::by_name(name).unwrap();
        let p = pack::<f64>(&c).unwrap();
        let params = MotifParams::default();
        let a = design(&c, &p, &params);
        let b = design(&c, &moved(&p, angle, by), &params);
        assert_eq!(a.retained, b.retained, "{name}");
        for (i, (ma, mb)) in a.motifs.iter().zip(&b.motifs).enumerate() {
            assert_eq!(ma.len(), mb.len(), "{name}: polygon {i}");
            for (sa, sb) in ma.iter().zip(mb) {
                let sa = sa.map(|x| x.rotate(angle) + by);
                assert!(
                    sa.a.dist(sb.a) < 1e-9 && sa.b.dist(sb.b) < 1e-9,
                    "{name}: polygon {i}"
                );
            }
        }
    }
}
