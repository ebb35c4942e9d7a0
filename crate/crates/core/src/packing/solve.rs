use std::collections::BTreeMap;

use super::{BoundaryMode, PackingError, SolverConfig};
use crate::complex::{Complex, Topology, VertexId};
use crate::scalar::Scalar;

/// Radius of a boundary circle of degree `n`: the radius of a circle that
/// `2n - 2` unit circles would surround perfectly,
/// `(1 - sin φ) / sin φ` with `φ = π / (2n - 2)`.
pub fn boundary_radius<T: Scalar>(n: usize) -> Result<T, PackingError> {
    if n <= 2 {
        return Err(PackingError::DegenerateBoundaryVertex { degree: n });
    }
    let phi = T::PI() / T::of_usize(2 * n - 2);
    let s = phi.sin();
    Ok((T::one() - s) / s)
}

/// Angle at the centre of a circle of radius `r` subtended by two mutually
/// tangent neighbours of radii `a` and `b`:
/// `acos(((r+a)² + (r+b)² - (a+b)²) / (2(r+a)(r+b)))`, evaluated through the
/// equivalent half-angle form `2·atan(sqrt(ab / (r(r+a+b))))`, which stays
/// accurate for thin angles.
pub fn beta<T: Scalar>(r: T, a: T, b: T) -> T {
    let g = a * b / (r * (r + a + b));
    T::two() * g.sqrt().atan()
}

/// `β` and its derivative with respect to `ln r`.
fn beta_dlog<T: Scalar>(r: T, a: T, b: T) -> (T, T) {
    let s = r + a + b;
    let g = a * b / (r * s);
    let sg = g.sqrt();
    let d = -(sg / (T::one() + g)) * (r + s) / s;
    (T::two() * sg.atan(), d)
}

/// Sum of `β` over consecutive neighbour pairs; the pair (last, first) is
/// included when `closed`.
pub fn angle_sum<T: Scalar>(r: T, neighbors: &[T], closed: bool) -> T {
    let n = neighbors.len();
    let pairs = if closed { n } else { n.saturating_sub(1) };
    (0..pairs).fold(T::zero(), |acc, i| {
        acc + beta(r, neighbors[i], neighbors[(i + 1) % n])
    })
}

fn angle_sum_dlog<T: Scalar>(r: T, neighbors: &[T]) -> (T, T) {
    let n = neighbors.len();
    let mut s = T::zero();
    let mut ds = T::zero();
    for i in 0..n {
        let (b, d) = beta_dlog(r, neighbors[i], neighbors[(i + 1) % n]);
        s = s + b;
        ds = ds + d;
    }
    (s, ds)
}

/// Radius of an interior circle whose closed flower of `neighbors` sums to
/// `2π`: safeguarded Newton in `ln r`, falling back to bisection once the
/// root is bracketed.
fn solve_vertex<T: Scalar>(r0: T, neighbors: &[T], tol: T) -> T {
    let target = T::two() * T::PI();
    let max_step = T::two();
    let mut u = r0.ln();
    let mut lo = T::neg_infinity();
    let mut hi = T::infinity();
    for _ in 0..100 {
        let (s, ds) = angle_sum_dlog(u.exp(), neighbors);
        let f = s - target;
        if f.abs() <= tol {
            break;
        }
        // The angle sum falls as the radius grows.
        if f > T::zero() {
            lo = u;
        } else {
            hi = u;
        }
        let newton = u - f / ds;
        let mut next = if newton.is_finite() { newton } else { u };
        if next <= lo || next >= hi || next == u {
            next = if lo.is_finite() && hi.is_finite() {
                (lo + hi) / T::two()
            } else if f > T::zero() {
                u + max_step
            } else {
                u - max_step
            };
        }
        next = next.max(u - max_step).min(u + max_step);
        if (next - u).abs() <= T::epsilon() * (T::one() + u.abs()) {
            u = next;
            break;
        }
        u = next;
    }
    u.exp()
}

/// Convergence record of one solve.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveTrace {
    pub sweeps: usize,
    /// Worst `|angle_sum - 2π|` after each sweep.
    pub worst_residual: Vec<f64>,
    /// Sum of `|angle_sum - 2π|` over interior vertices after each sweep.
    pub total_error: Vec<f64>,
}

/// Radii making every interior angle sum equal `2π`.
pub fn solve_radii<T: Scalar>(
    complex: &Complex,
    config: &SolverConfig,
) -> Result<BTreeMap<VertexId, T>, PackingError> {
    solve_radii_traced(complex, config).map(|(r, _)| r)
}

/// [`solve_radii`] that also returns the per-sweep residual history.
pub fn solve_radii_traced<T: Scalar>(
    complex: &Complex,
    config: &SolverConfig,
) -> Result<(BTreeMap<VertexId, T>, SolveTrace), PackingError> {
    if !(config.residual_tolerance > 0.0) {
        return Err(PackingError::InvalidConfig(
            "residual_tolerance must be positive".into(),
        ));
    }
    if config.max_sweeps == 0 {
        return Err(PackingError::InvalidConfig(
            "max_sweeps must be at least 1".into(),
        ));
    }
    let s = complex.structure().map_err(PackingError::InvalidComplex)?;
    let ids = s.ids();
    let torus = complex.topology() == Topology::Torus;

    let mut radii: Vec<T> = vec![T::one(); ids.len()];
    for (i, &v) in ids.iter().enumerate() {
        if !s.is_boundary(v) {
            continue;
        }
        radii[i] = match &config.boundary_mode {
            // The formula has no value at degree 2; such corners get the degree-3 radius.
            BoundaryMode::DegreeFormula => boundary_radius(s.degree(v).max(3))?,
            BoundaryMode::ExplicitRadii(map) => match map.get(&v) {
                Some(&r) if r > 0.0 && r.is_finite() => T::lit(r),
                Some(_) => {
                    return Err(PackingError::InvalidConfig(format!(
                        "radius of vertex {v} must be positive"
                    )))
                }
                None => {
                    return Err(PackingError::InvalidConfig(format!(
                        "no radius for boundary vertex {v}"
                    )))
                }
            },
        };
    }
    let interior: Vec<usize> = (0..ids.len()).filter(|&i| !s.is_boundary(ids[i])).collect();
    if interior.is_empty() {
        let radii = ids.iter().zip(&radii).map(|(&v, r)| (v, r.f64())).collect();
        return Err(PackingError::NothingToSolve { radii });
    }
    let petals: Vec<Vec<usize>> = ids
        .iter()
        .map(|&v| {
            s.flower(v)
                .petals
                .iter()
                .map(|p| s.index_of(p.vertex).expect("known vertex"))
                .collect()
        })
        .collect();

    let tol = T::lit(config.residual_tolerance);
    let inner_tol = tol * T::lit(0.01);
    let two_pi = T::two() * T::PI();
    let mut trace = SolveTrace::default();
    let mut buf: Vec<T> = Vec::new();
    let mut converged = false;
    let mut worst_at = interior[0];
    for _ in 0..config.max_sweeps {
        for &i in &interior {
            buf.clear();
            buf.extend(petals[i].iter().map(|&j| radii[j]));
            radii[i] = solve_vertex(radii[i], &buf, inner_tol);
        }
        if torus {
            let m = radii.iter().fold(T::zero(), |m, &r| m.max(r));
            radii.iter_mut().for_each(|r| *r = *r / m);
        }
        let mut worst = T::zero();
        let mut total = T::zero();
        for &i in &interior {
            buf.clear();
            buf.extend(petals[i].iter().map(|&j| radii[j]));
            let e = (angle_sum(radii[i], &buf, true) - two_pi).abs();
            total = total + e;
            if e > worst {
                worst = e;
                worst_at = i;
            }
        }
        trace.sweeps += 1;
        trace.worst_residual.push(worst.f64());
        trace.total_error.push(total.f64());
        if worst <= tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(PackingError::NonConvergence {
            sweeps: trace.sweeps,
            worst_residual: trace.worst_residual.last().copied().unwrap_or(f64::NAN),
            vertex: ids[worst_at],
        });
    }
    Ok((ids.iter().copied().zip(radii).collect(), trace))
}
