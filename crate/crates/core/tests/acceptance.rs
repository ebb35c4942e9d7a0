//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always appear in the output.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rosette_core::complex::{demos, Complex, GadgetKind, VertexId, Wrap};
use rosette_core::geom::Point2;
use rosette_core::motif::{
    alpha_from_theta_consecutive, alpha_from_theta_skip, assemble, contact_rays, pic_motif,
    wheel_star, MotifError, MotifParams,
};
use rosette_core::packing::{boundary_radius, pack, square_offsets};
use rosette_core::patch::{build_patch, optimize_tau, PatchParams, TauMode, TauSweep};
use rosette_core::pipeline::{self, DesignParams};
use rosette_core::{Design, Packing, Patch};

type P = Point2<f64>;

const FLOWER_TOL: f64 = 1e-8;
const FLOWER_TIME: Duration = Duration::from_secs(1);
const BOUNDARY_TOL: f64 = 1e-12;
const TANGENCY_TOL: f64 = 1e-6;
const OVERLAP_TOL: f64 = 1e-9;
const DELAUNAY_TIME: Duration = Duration::from_secs(30);
const STAR_TOL: f64 = 1e-9;
const PENTACLE_TOL: f64 = 1e-9;
const SEAM_TOL: f64 = 1e-9;
const LATTICE_TOL: f64 = 1e-6;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn design_of(c: &Complex, motif: &MotifParams) -> (Packing, Patch, Design) {
    let packing = pack::<f64>(c).expect("packs");
    let patch = build_patch(&packing, c, &PatchParams::with_tau(0.8)).expect("patch");
    let design = assemble(&patch, &packing, c, motif).expect("design");
    (packing, patch, design)
}

fn flower_packings() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for k in 3..=12 {
        let p = pack::<f64>(&demos::flower(k)).map_err(|e| format!("k={k}: {e}"))?;
        let petal = p.circle(1).radius;
        let want = 1.0 / (PI / k as f64).sin() - 1.0;
        let got = p.circle(0).radius / petal;
        worst = worst.max((got - want).abs());
        ensure((got - want).abs() <= FLOWER_TOL, || {
            format!("k={k}: interior radius {got}, expected {want}")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < FLOWER_TIME, || format!("took {elapsed:?}"))?;
    Ok(format!("k=3..12, max error {worst:.1e}, {elapsed:.0?}"))
}

fn boundary_radius_formula() -> Outcome {
    let r4 = boundary_radius::<f64>(4).map_err(|e| e.to_string())?;
    let r3 = boundary_radius::<f64>(3).map_err(|e| e.to_string())?;
    ensure((r4 - 1.0).abs() <= BOUNDARY_TOL, || format!("r(4) = {r4}"))?;
    ensure((r3 - (2f64.sqrt() - 1.0)).abs() <= BOUNDARY_TOL, || {
        format!("r(3) = {r3}")
    })?;
    Ok(format!("r(4) = {r4}, r(3) = {r3:.15}"))
}

fn delaunay_packings() -> Outcome {
    let start = Instant::now();
    let (mut defect, mut overlap) = (0f64, f64::NEG_INFINITY);
    for i in 0..20u64 {
        let n = 10 + 10 * i as usize;
        let c = demos::random_delaunay(n, 100 + i);
        let p = pack::<f64>(&c).map_err(|e| format!("n={n}: {e}"))?;
        let (d, o) = (p.max_tangency_defect(), p.max_overlap());
        ensure(d <= TANGENCY_TOL, || {
            format!("n={n}: tangency defect {d:e}")
        })?;
        ensure(o <= OVERLAP_TOL, || format!("n={n}: overlap {o:e}"))?;
        defect = defect.max(d);
        overlap = overlap.max(o);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < DELAUNAY_TIME, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "20 complexes of 10..200 vertices, max defect {defect:.1e}, max overlap {overlap:.2}, {elapsed:.1?}"
    ))
}

fn regular(n: usize) -> Vec<P> {
    (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64;
            P::new(a.cos(), a.sin())
        })
        .collect()
}

fn rotate(v: P, a: f64) -> P {
    P::new(v.x * a.cos() - v.y * a.sin(), v.x * a.sin() + v.y * a.cos())
}

/// Point where `p + s·u` meets `q + t·v`. Two rays along the same line
/// form one straight chord, whose bend point is the middle of `pq`.
fn line_meet(p: P, u: P, q: P, v: P) -> P {
    let det = u.x * (-v.y) - u.y * (-v.x);
    let w = q - p;
    if det.abs() <= 1e-12 * u.norm() * v.norm() {
        assert!(w.cross(u).abs() <= 1e-12, "parallel rays on distinct lines");
        return p.midpoint(q);
    }
    let s = (w.x * (-v.y) - w.y * (-v.x)) / det;
    p + u * s
}

/// Inner vertices of the PIC star in a regular `n`-gon, computed from the
/// contact-angle rays directly: the forward ray of edge `e` against the
/// backward ray of edge `e + skip`.
fn pic_oracle(n: usize, theta: f64, skip: usize) -> Vec<P> {
    let pts = regular(n);
    let edge = |e: usize| {
        let (a, b) = (pts[e % n], pts[(e + 1) % n]);
        (a.midpoint(b), (b - a).unit().unwrap())
    };
    (0..n)
        .map(|e| {
            let (m1, d1) = edge(e);
            let (m2, d2) = edge(e + skip);
            line_meet(m1, rotate(d1, theta), m2, rotate(d2 * -1.0, -theta))
        })
        .collect()
}

fn wheel_inner(n: usize, rho: f64, skip: usize) -> Vec<P> {
    let pts = regular(n);
    let mids: Vec<P> = (0..n).map(|e| pts[e].midpoint(pts[(e + 1) % n])).collect();
    wheel_star(&mids, P::origin(), rho, skip)
        .expect("wheel")
        .iter()
        .step_by(2)
        .map(|s| s.b)
        .collect()
}

fn set_distance(a: &[P], b: &[P]) -> f64 {
    let one = |x: &[P], y: &[P]| {
        x.iter()
            .map(|p| y.iter().map(|q| p.dist(*q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

fn alpha_oracles() -> Outcome {
    let mut worst: f64 = 0.0;
    let (mut cases, mut incompatible) = (0, 0);
    for n in 5..=16 {
        for theta in [0.5, 2.0 * PI / 5.0, 1.3] {
            let tag = format!("n={n} θ={theta:.4}");
            // Consecutive points: ratio against the circumradius.
            let a = alpha_from_theta_consecutive(n, theta).map_err(|e| format!("{tag}: {e}"))?;
            let wheel = wheel_inner(n, a, 1);
            let oracle = pic_oracle(n, theta, 1);
            let pts = regular(n);
            let pic: Vec<P> = pic_motif(&pts, &contact_rays(&pts, theta))
                .map_err(|e| format!("{tag}: {e}"))?
                .iter()
                .step_by(2)
                .map(|s| s.b)
                .collect();
            let d = set_distance(&wheel, &oracle).max(set_distance(&pic, &oracle));
            ensure(d <= STAR_TOL, || {
                format!("{tag} consecutive: distance {d:e}")
            })?;
            worst = worst.max(d);
            cases += 1;

            // Every other point: ratio against the star-point radius.
            match alpha_from_theta_skip(n, theta) {
                Err(MotifError::IncompatibleAngle { .. }) => {
                    ensure(theta <= PI / n as f64, || {
                        format!("{tag} skip: unexpected IncompatibleAngle")
                    })?;
                    incompatible += 1;
                }
                Err(e) => return Err(format!("{tag} skip: {e}")),
                Ok(a) => {
                    ensure(theta > PI / n as f64, || {
                        format!("{tag} skip: expected IncompatibleAngle")
                    })?;
                    let r = (PI / n as f64).cos();
                    let d = set_distance(&wheel_inner(n, a * r, 2), &pic_oracle(n, theta, 2));
                    ensure(d <= STAR_TOL, || format!("{tag} skip: distance {d:e}"))?;
                    worst = worst.max(d);
                    cases += 1;
                }
            }
        }
    }
    Ok(format!(
        "{cases} stars, max vertex distance {worst:.1e}; {incompatible} (n, θ) with θ ≤ π/n rejected"
    ))
}

fn pentacle() -> Outcome {
    let pts = regular(5);
    let segs = pic_motif(&pts, &contact_rays(&pts, 2.0 * PI / 5.0)).map_err(|e| e.to_string())?;
    let mids: Vec<P> = (0..5).map(|e| pts[e].midpoint(pts[(e + 1) % 5])).collect();
    // Regular pentagram through the midpoints: its chords m_i m_{i+2} cross
    // at the inner vertices.
    let inner: Vec<P> = (0..5)
        .map(|i| {
            let (a, b) = (mids[i], mids[(i + 2) % 5]);
            let (c, d) = (mids[(i + 1) % 5], mids[(i + 4) % 5]);
            line_meet(a, b - a, c, d - c)
        })
        .collect();
    let ends: Vec<P> = segs.iter().map(|s| s.b).collect();
    let d = set_distance(&ends, &inner);
    ensure(d <= PENTACLE_TOL, || format!("inner vertices off by {d:e}"))?;
    // Each segment lies on a pentagram chord.
    for s in &segs {
        let on_chord = (0..5).any(|i| {
            let (a, b) = (mids[i], mids[(i + 2) % 5]);
            let u = (b - a).unit().unwrap();
            (s.a - a).cross(u).abs() <= PENTACLE_TOL && (s.b - a).cross(u).abs() <= PENTACLE_TOL
        });
        ensure(on_chord, || format!("segment {s:?} leaves the chords"))?;
    }
    Ok(format!("10 segments, vertex error {d:.1e}"))
}

fn tau_sweep() -> Outcome {
    let c = demos::hex_patch(2);
    let p = pack::<f64>(&c).map_err(|e| e.to_string())?;
    let curve =
        optimize_tau(&p, &c, &TauSweep::default(), TauMode::Scale).map_err(|e| e.to_string())?;
    let at = |t: f64| curve.error_at(t).unwrap_or(f64::NAN);
    let (e6, e8, e95) = (at(0.6), at(0.8), at(0.95));
    ensure(curve.best_tau > 0.7 && curve.best_tau < 0.9, || {
        format!("minimum at τ = {}", curve.best_tau)
    })?;
    ensure(e8 < e6 && e8 < e95, || {
        format!("e(0.6) = {e6}, e(0.8) = {e8}, e(0.95) = {e95}")
    })?;
    Ok(format!(
        "hex7: minimum {:.5} at τ = {:.3}; e(0.6) = {e6:.5}, e(0.8) = {e8:.5}, e(0.95) = {e95:.5}",
        curve.best_error, curve.best_tau
    ))
}

fn rosette_order_law() -> Outcome {
    let mut checked = 0;
    for seed in 0..5 {
        let c = demos::random_delaunay(40 + 20 * seed as usize, 200 + seed);
        let s = c.structure().map_err(|r| r.to_string())?;
        let (_, _, d) = design_of(&c, &MotifParams::default());
        ensure(!d.rosettes.is_empty(), || {
            format!("seed {seed}: no rosettes")
        })?;
        for r in d.rosettes.values() {
            let deg = s.degree(r.circle);
            ensure(r.order == 2 * deg, || {
                format!(
                    "seed {seed}: circle {} has order {} at degree {deg}",
                    r.circle, r.order
                )
            })?;
            checked += 1;
        }
    }
    let c = demos::bowtie_demo();
    let bowties: Vec<_> = c
        .gadgets()
        .iter()
        .filter(|g| g.kind == GadgetKind::Bowtie)
        .collect();
    ensure(bowties.len() == 1, || format!("{} bowties", bowties.len()))?;
    let shared: Vec<VertexId> = vec![bowties[0].rim[1], bowties[0].rim[3]];
    let params = MotifParams {
        trim_depth: None,
        ..MotifParams::default()
    };
    let (_, _, d) = design_of(&c, &params);
    let mut orders = Vec::new();
    for v in &shared {
        let r = d
            .rosettes
            .get(v)
            .ok_or_else(|| format!("no rosette at {v}"))?;
        ensure(r.order % 2 == 1, || {
            format!("circle {v} has even order {}", r.order)
        })?;
        orders.push(r.order);
    }
    Ok(format!(
        "{checked} rosettes on 5 random complexes have order 2·deg; bowtie vertices {shared:?} have orders {orders:?}"
    ))
}

/// Motif endpoints of polygon `i` lying on its edge `e`.
fn edge_ends(patch: &Patch, d: &Design, i: usize, e: usize, shift: P) -> Vec<P> {
    let (a, b) = patch.polygons[i].edge(e);
    let (a, b) = (a + shift, b + shift);
    let len = a.dist(b);
    let u = (b - a) * (1.0 / len);
    d.motifs[i]
        .iter()
        .flat_map(|s| [s.a + shift, s.b + shift])
        .filter(|p| {
            let t = (*p - a).dot(u);
            (*p - a).cross(u).abs() <= SEAM_TOL && t >= -SEAM_TOL && t <= len + SEAM_TOL
        })
        .collect()
}

/// Checks every shared edge between retained polygons of the demo designs.
/// The untrimmed designs are checked too, skipping edges that touch a
/// polygon whose motif could not be built (partial boundary rosettes).
fn seamlessness() -> Outcome {
    let (mut trimmed_edges, mut untrimmed_edges, mut skipped) = (0, 0, 0);
    let untrimmed = MotifParams {
        trim_depth: None,
        ..MotifParams::default()
    };
    for (name, params) in demos::DEMO_NAMES
        .iter()
        .flat_map(|n| [(*n, MotifParams::default()), (*n, untrimmed.clone())])
    {
        let c = demos::by_name(name).unwrap();
        let (_, patch, d) = design_of(&c, &params);
        let trimmed = params.trim_depth.is_some();
        let failed: BTreeSet<usize> = d.failures.iter().map(|f| f.polygon).collect();
        if trimmed {
            let bad: Vec<_> = failed.iter().filter(|&&i| d.retained[i]).collect();
            ensure(bad.is_empty(), || {
                format!("{name}: retained polygons without motif {bad:?}")
            })?;
        }
        for (i, q) in patch.polygons.iter().enumerate() {
            if !d.retained[i] {
                continue;
            }
            for e in 0..q.len() {
                let Some(n) = q.neighbors[e] else { continue };
                if !d.retained[n.polygon] {
                    continue;
                }
                if failed.contains(&i) || failed.contains(&n.polygon) {
                    skipped += 1;
                    continue;
                }
                let mine = edge_ends(&patch, &d, i, e, P::origin());
                let theirs = edge_ends(&patch, &d, n.polygon, n.edge, patch.shift(n.shift));
                ensure(!mine.is_empty() && !theirs.is_empty(), || {
                    format!("{name}: polygon {i} edge {e} has no motif endpoint")
                })?;
                let gap = set_distance(&mine, &theirs);
                ensure(gap <= SEAM_TOL, || {
                    format!(
                        "{name}: polygon {i} edge {e} against {}: gap {gap:e}",
                        n.polygon
                    )
                })?;
                if trimmed {
                    trimmed_edges += 1;
                } else {
                    untrimmed_edges += 1;
                }
            }
        }
    }
    Ok(format!(
        "{trimmed_edges} shared edge sides in the demo designs; untrimmed: {untrimmed_edges} more, {skipped} skipped at failed boundary polygons"
    ))
}

fn torus_periodicity() -> Outcome {
    let c = demos::torus_hex();
    let p = pack::<f64>(&c).map_err(|e| e.to_string())?;
    let [l1, l2] = p.lattice.ok_or("no lattice")?;
    let ratio = l1.norm() / l2.norm();
    let angle = (l1.dot(l2) / (l1.norm() * l2.norm())).acos().to_degrees();
    ensure((ratio - 1.0).abs() <= LATTICE_TOL, || {
        format!("|l1|/|l2| = {ratio}")
    })?;
    ensure((angle - 60.0).abs() <= LATTICE_TOL, || {
        format!("angle {angle}°")
    })?;

    let offsets = square_offsets(1);
    let copies: BTreeMap<(VertexId, Wrap), _> = p
        .stamp(&offsets)
        .into_iter()
        .map(|(id, w, circle)| ((id, w), circle))
        .collect();
    let (mut pairs, mut seams, mut worst) = (0, 0, 0f64);
    for t in &p.tangencies {
        for &w in &offsets {
            let (Some(a), Some(b)) = (copies.get(&(t.a, w)), copies.get(&(t.b, w + t.wrap))) else {
                continue;
            };
            let s = a.radius + b.radius;
            worst = worst.max((a.center.dist(b.center) - s).abs() / s);
            pairs += 1;
            if !t.wrap.is_zero() {
                seams += 1;
            }
        }
    }
    ensure(worst <= TANGENCY_TOL, || {
        format!("stamped tangency defect {worst:e}")
    })?;
    ensure(seams > 0, || "no cross-seam tangencies".into())?;
    Ok(format!(
        "angle {angle:.9}°, |l1|/|l2| = {ratio:.12}; 3×3 stamp: {pairs} tangencies ({seams} across seams), max defect {worst:.1e}"
    ))
}

fn determinism() -> Outcome {
    for name in demos::DEMO_NAMES {
        let c = demos::by_name(name).unwrap();
        let run = || {
            let out =
                pipeline::run(&c, &DesignParams::default()).map_err(|e| format!("{name}: {e}"))?;
            Ok::<_, String>((out.svg.clone(), out.to_json().to_string()))
        };
        let (a, b) = (run()?, run()?);
        ensure(a.0 == b.0, || format!("{name}: SVG differs"))?;
        ensure(a.1 == b.1, || format!("{name}: JSON differs"))?;
    }
    Ok(format!(
        "{} demos, SVG and JSON byte-identical",
        demos::DEMO_NAMES.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("flower packings", flower_packings),
        ("boundary radius formula", boundary_radius_formula),
        ("packing validity", delaunay_packings),
        ("alpha oracle equivalence", alpha_oracles),
        ("pentacle", pentacle),
        ("tau sweep", tau_sweep),
        ("rosette order law", rosette_order_law),
        ("seamlessness", seamlessness),
        ("torus periodicity", torus_periodicity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
