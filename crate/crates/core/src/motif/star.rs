use super::{MotifError, MotifParams};
use crate::geom::{Point2, Segment};
use crate::patch::PatchPolygon;
use crate::scalar::Scalar;

fn check_theta<T: Scalar>(theta: T) -> Result<(), MotifError> {
    if theta > T::zero() && theta < T::PI() / T::two() {
        Ok(())
    } else {
        Err(MotifError::InvalidTheta(theta.f64()))
    }
}

fn in_unit_interval<T: Scalar>(alpha: T, n: usize, theta: T) -> Result<T, MotifError> {
    if alpha > T::zero() && alpha < T::one() {
        Ok(alpha)
    } else {
        Err(MotifError::IncompatibleAngle {
            n,
            theta: theta.f64(),
        })
    }
}

/// Inner-circle ratio for the wheel star joining consecutive points, matched
/// to the PIC star with contact angle `theta` in the regular `n`-gon,
/// truncated at first intersections. The ratio is taken against the
/// circumradius of that `n`-gon (not the radius of its edge midpoints).
pub fn alpha_from_theta_consecutive<T: Scalar>(n: usize, theta: T) -> Result<T, MotifError> {
    check_theta(theta)?;
    if n < 3 {
        return Err(MotifError::TooFewPoints { needed: 3, got: n });
    }
    let nf = T::of_usize(n);
    let pi = T::PI();
    let den = (pi * (nf + T::two()) / (T::two() * nf) - theta).sin();
    if den.abs() <= T::epsilon() {
        return Err(MotifError::IncompatibleAngle {
            n,
            theta: theta.f64(),
        });
    }
    in_unit_interval(T::one() - (pi / nf).sin() * theta.sin() / den, n, theta)
}

/// Inner-circle ratio for the wheel star joining every other point, matched
/// to the PIC star truncated at second intersections, taken against the
/// radius of the star points: `cos θ / cos(θ - 2π/n)`.
///
/// The commonly quoted closed form
/// `1 - 2·sin(π/n)·sin(π(n-2)/2n)·sin(θ - π/n) / sin(π/2 + 2π/n - θ)`
/// agrees with this only at `θ = π/n`; its depth `1 - α` is `cos(π/n)` times
/// the true one, which tilts the contact angles away from `θ`.
pub fn alpha_from_theta_skip<T: Scalar>(n: usize, theta: T) -> Result<T, MotifError> {
    check_theta(theta)?;
    if n < 5 {
        return Err(MotifError::TooFewPoints { needed: 5, got: n });
    }
    let step = T::two() * T::PI() / T::of_usize(n);
    if theta <= step / T::two() {
        return Err(MotifError::IncompatibleAngle {
            n,
            theta: theta.f64(),
        });
    }
    in_unit_interval(theta.cos() / (theta - step).cos(), n, theta)
}

/// Wheel construction: for each `i`, joins `points[i]` and
/// `points[i + skip]` through the point where the perpendicular bisector of
/// their chord meets the circle `(o, rho)` (the crossing nearer the chord).
/// Emits `points[i] – x` then `x – points[i + skip]`.
pub fn wheel_star<T: Scalar>(
    points: &[Point2<T>],
    o: Point2<T>,
    rho: T,
    skip: usize,
) -> Result<Vec<Segment<T>>, MotifError> {
    let n = points.len();
    if !(skip == 1 || skip == 2) || n < 2 * skip + 1 {
        return Err(MotifError::TooFewPoints {
            needed: 2 * skip + 1,
            got: n,
        });
    }
    if !(rho > T::zero()) {
        return Err(MotifError::InvalidRadius(rho.f64()));
    }
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let (p, q) = (points[i], points[(i + skip) % n]);
        let u = (q - p).perp().unit().ok_or(MotifError::StarDistortion(i))?;
        let mid = p.midpoint(q);
        let w = mid - o;
        // |w + t·u|² = ρ²
        let b = u.dot(w);
        let disc = b * b - (w.norm_sq() - rho * rho);
        if disc < T::zero() || b.abs() <= T::epsilon() * rho {
            return Err(MotifError::StarDistortion(i));
        }
        let root = disc.sqrt();
        let t = if -b >= T::zero() {
            -b - root
        } else {
            -b + root
        };
        let x = mid + u * t;
        out.push(Segment::new(p, x));
        out.push(Segment::new(x, q));
    }
    Ok(out)
}

/// Star of a cyclic polygon: the wheel construction on its edge midpoints,
/// joining every other one, with inner radius `α·r`, where `r` is the
/// polygon's mean vertex distance times `cos(π/m)`.
pub fn star_in_cyclic_polygon<T: Scalar>(
    polygon: &PatchPolygon<T>,
    params: &MotifParams,
) -> Result<Vec<Segment<T>>, MotifError> {
    let info = polygon.cyclic.as_ref().ok_or(MotifError::NotCyclic)?;
    let m = polygon.len();
    let theta = T::lit(params.theta);
    let alpha = match params.alpha_override {
        Some(a) if a > 0.0 && a < 1.0 => T::lit(a),
        Some(a) => return Err(MotifError::InvalidAlpha(a)),
        None => alpha_from_theta_skip(m, theta)?,
    };
    let o = info.center;
    let dist = polygon.points.iter().fold(T::zero(), |s, p| s + p.dist(o)) / T::of_usize(m);
    let r = dist * (T::PI() / T::of_usize(m)).cos();
    let mids: Vec<Point2<T>> = (0..m).map(|i| polygon.edge_midpoint(i)).collect();
    wheel_star(&mids, o, alpha * r, 2)
}
