use serde::{Deserialize, Serialize, Serializer};

use super::{build_patch, PatchError, PatchParams, Role, TauMode};
use crate::complex::Complex;
use crate::geom::{mean, Point2};
use crate::packing::Packing;
use crate::scalar::Scalar;

/// Continuous symmetry measure of a polygon against the regular polygon with
/// the same vertex count.
///
/// The polygon is centred and scaled to unit mean squared vertex norm. For
/// each labelling and orientation, vertices are folded onto one (rotating
/// vertex `i` back by `±2πi/n`), averaged, and unfolded into the closest
/// regular polygon; the result is the smallest mean squared displacement.
pub fn csm<T: Scalar>(points: &[Point2<T>]) -> Result<T, PatchError> {
    let n = points.len();
    if n < 3 {
        return Err(PatchError::DegeneratePolygon);
    }
    let c = mean(points);
    let centred: Vec<Point2<T>> = points.iter().map(|&p| p - c).collect();
    let spread = centred.iter().fold(T::zero(), |s, p| s + p.norm_sq()) / T::of_usize(n);
    if !(spread > T::zero()) || !spread.is_finite() {
        return Err(PatchError::DegeneratePolygon);
    }
    let scale = spread.sqrt();
    let p: Vec<Point2<T>> = centred.iter().map(|&q| q / scale).collect();
    let step = T::two() * T::PI() / T::of_usize(n);
    let mut best = T::infinity();
    for sign in [T::one(), -T::one()] {
        for shift in 0..n {
            let angle = |i: usize| step * sign * T::of_usize((i + n - shift) % n);
            let folded = (0..n).fold(Point2::origin(), |acc, i| acc + p[i].rotate(-angle(i)))
                / T::of_usize(n);
            let err = (0..n).fold(T::zero(), |acc, i| {
                acc + (p[i] - folded.rotate(angle(i))).norm_sq()
            });
            best = best.min(err / T::of_usize(n));
        }
    }
    Ok(best)
}

/// Closed range of τ values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauSweep {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Default for TauSweep {
    fn default() -> Self {
        Self {
            start: 0.5,
            end: 0.95,
            step: 0.005,
        }
    }
}

impl TauSweep {
    pub fn values(&self) -> Vec<f64> {
        if !(self.step > 0.0) || !(self.end >= self.start) {
            return Vec::new();
        }
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| ((self.start + self.step * i as f64) * 1e12).round() / 1e12)
            .collect()
    }
}

fn finite_or_null<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.is_finite().then_some(*x)))
}

/// Mean filler-pentagon CSM per τ. Values where the patch could not be
/// built are `+∞` (`null` in JSON).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauCurve {
    pub taus: Vec<f64>,
    #[serde(serialize_with = "finite_or_null")]
    pub errors: Vec<f64>,
    pub best_tau: f64,
    pub best_error: f64,
}

impl TauCurve {
    pub fn error_at(&self, tau: f64) -> Option<f64> {
        self.taus
            .iter()
            .position(|&t| (t - tau).abs() < 1e-9)
            .map(|i| self.errors[i])
    }
}

fn score<T: Scalar>(
    packing: &Packing<T>,
    complex: &Complex,
    params: &PatchParams,
) -> Result<f64, PatchError> {
    let patch = build_patch(packing, complex, params)?;
    let (mut sum, mut count) = (0.0, 0usize);
    for p in patch
        .polygons
        .iter()
        .filter(|p| p.role == Role::FillerPentagon)
    {
        sum += csm(&p.points)?.f64();
        count += 1;
    }
    if count == 0 {
        return Err(PatchError::NoFillerPentagons);
    }
    Ok(sum / count as f64)
}

/// Scores every τ of `sweep` and returns the whole curve with its minimum
/// (the first one on ties). Fails only if no τ yields a patch.
pub fn optimize_tau<T: Scalar>(
    packing: &Packing<T>,
    complex: &Complex,
    sweep: &TauSweep,
    mode: TauMode,
) -> Result<TauCurve, PatchError> {
    let taus = sweep.values();
    if taus.is_empty() {
        return Err(PatchError::InvalidTau(sweep.start));
    }
    let mut first_error = None;
    let errors: Vec<f64> = taus
        .iter()
        .map(|&tau| {
            match score(
                packing,
                complex,
                &PatchParams {
                    tau,
                    tau_mode: mode,
                },
            ) {
                Ok(e) => e,
                Err(e) => {
                    first_error.get_or_insert(e);
                    f64::INFINITY
                }
            }
        })
        .collect();
    let best = (0..taus.len())
        .filter(|&i| errors[i].is_finite())
        .min_by(|&a, &b| errors[a].total_cmp(&errors[b]));
    match best {
        Some(i) => Ok(TauCurve {
            best_tau: taus[i],
            best_error: errors[i],
            taus,
            errors,
        }),
        None => Err(first_error.unwrap_or(PatchError::DegeneratePolygon)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::demos;
    use crate::packing::pack;

    type P = Point2<f64>;

    fn regular(n: usize, r: f64, phase: f64, c: P) -> Vec<P> {
        (0..n)
            .map(|i| c + P::polar(phase + std::f64::consts::TAU * i as f64 / n as f64) * r)
            .collect()
    }

    #[test]
    fn regular_polygons_score_zero() {
        for n in 3..9 {
            assert!(csm(&regular(n, 3.7, 0.3, P::new(5.0, -2.0))).unwrap() < 1e-12);
            let mut cw = regular(n, 0.2, 1.0, P::origin());
            cw.reverse();
            assert!(csm(&cw).unwrap() < 1e-12);
        }
    }

    #[test]
    fn perturbation_grows_with_eps() {
        let mut last = 0.0;
        for k in 1..20 {
            let eps = 1e-3 * f64::from(k);
            let mut p = regular(5, 1.0, 0.0, P::origin());
            p[2] = p[2] + P::new(eps, 0.0);
            let v = csm(&p).unwrap();
            assert!(v > last && v < eps);
            last = v;
        }
    }

    #[test]
    fn degenerate() {
        let p = vec![P::new(1.0, 1.0); 4];
        assert_eq!(csm(&p), Err(PatchError::DegeneratePolygon));
        assert_eq!(csm(&p[..2]), Err(PatchError::DegeneratePolygon));
    }

    #[test]
    fn sweep_values() {
        let v = TauSweep::default().values();
        assert_eq!(v.len(), 91);
        assert!((v[90] - 0.95).abs() < 1e-12);
    }

    #[test]
    fn hex_patch_curve_has_interior_minimum() {
        let c = demos::hex_patch(2);
        let p = pack::<f64>(&c).unwrap();
        let curve = optimize_tau(&p, &c, &TauSweep::default(), TauMode::Scale).unwrap();
        assert!(
            curve.best_tau > 0.7 && curve.best_tau < 0.9,
            "{}",
            curve.best_tau
        );
        let at = |t| curve.error_at(t).unwrap();
        assert!(at(0.8) < at(0.6) && at(0.8) < at(0.95));
    }
}
