//! Small planar geometry toolkit: points, segments, rays and polygon tests.

use std::collections::HashMap;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// Unit vector at `angle` radians from the +x axis.
    #[inline]
    pub fn polar(angle: T) -> Self {
        Self::new(angle.cos(), angle.sin())
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Self) -> T {
        (self - o).norm()
    }

    #[inline]
    pub fn angle(self) -> T {
        self.y.atan2(self.x)
    }

    /// Returns `None` for the zero vector.
    pub fn unit(self) -> Option<Self> {
        let n = self.norm();
        (n > T::zero()).then(|| self / n)
    }

    /// Counterclockwise rotation by `angle`.
    #[inline]
    pub fn rotate(self, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Counterclockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    #[inline]
    pub fn lerp(self, o: Self, t: T) -> Self {
        self + (o - self) * t
    }

    #[inline]
    pub fn midpoint(self, o: Self) -> Self {
        (self + o) / T::two()
    }

    pub fn to_f64(self) -> Point2<f64> {
        Point2::new(self.x.f64(), self.y.f64())
    }

    pub fn from_f64(p: Point2<f64>) -> Self {
        Self::new(T::lit(p.x), T::lit(p.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> AddAssign for Point2<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Neg for Point2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl<T: Scalar> Div<T> for Point2<T> {
    type Output = Self;
    #[inline]
    fn div(self, s: T) -> Self {
        Self::new(self.x / s, self.y / s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<T> {
    pub a: Point2<T>,
    pub b: Point2<T>,
}

impl<T: Scalar> Segment<T> {
    pub fn new(a: Point2<T>, b: Point2<T>) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> T {
        self.a.dist(self.b)
    }

    pub fn translate(&self, by: Point2<T>) -> Self {
        Self::new(self.a + by, self.b + by)
    }

    pub fn map(&self, f: impl Fn(Point2<T>) -> Point2<T>) -> Self {
        Self::new(f(self.a), f(self.b))
    }
}

/// Mean of a non-empty point set.
pub fn mean<T: Scalar>(points: &[Point2<T>]) -> Point2<T> {
    let mut acc = Point2::origin();
    for &p in points {
        acc += p;
    }
    acc / T::of_usize(points.len().max(1))
}

/// Twice the signed area; positive for counterclockwise loops.
pub fn signed_area2<T: Scalar>(poly: &[Point2<T>]) -> T {
    let n = poly.len();
    let mut s = T::zero();
    for i in 0..n {
        s = s + poly[i].cross(poly[(i + 1) % n]);
    }
    s
}

pub fn area<T: Scalar>(poly: &[Point2<T>]) -> T {
    signed_area2(poly).abs() / T::two()
}

/// Incentre of triangle `abc`.
pub fn incenter<T: Scalar>(a: Point2<T>, b: Point2<T>, c: Point2<T>) -> Point2<T> {
    let la = b.dist(c);
    let lb = c.dist(a);
    let lc = a.dist(b);
    (a * la + b * lb + c * lc) / (la + lb + lc)
}

pub fn point_segment_distance<T: Scalar>(p: Point2<T>, a: Point2<T>, b: Point2<T>) -> T {
    let ab = b - a;
    let len2 = ab.norm_sq();
    if len2 == T::zero() {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).max(T::zero()).min(T::one());
    p.dist(a + ab * t)
}

/// Point-in-polygon test where points within `tol` of the boundary count as
/// inside.
pub fn contains_point<T: Scalar>(poly: &[Point2<T>], p: Point2<T>, tol: T) -> bool {
    let n = poly.len();
    for i in 0..n {
        if point_segment_distance(p, poly[i], poly[(i + 1) % n]) <= tol {
            return true;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Parameters `(s, t)` of the crossing of segments `p0p1` and `q0q1`, if
/// they cross at a point interior to both (strictly inside `(eps, 1-eps)`).
pub fn proper_crossing<T: Scalar>(
    p0: Point2<T>,
    p1: Point2<T>,
    q0: Point2<T>,
    q1: Point2<T>,
    eps: T,
) -> Option<(T, T)> {
    let r = p1 - p0;
    let s = q1 - q0;
    let den = r.cross(s);
    if den.abs() <= T::epsilon() * r.norm() * s.norm() {
        return None;
    }
    let qp = q0 - p0;
    let t = qp.cross(s) / den;
    let u = qp.cross(r) / den;
    let hi = T::one() - eps;
    (t > eps && t < hi && u > eps && u < hi).then_some((t, u))
}

/// True if the closed loop has no two non-adjacent edges that touch and no
/// adjacent edges that fold back onto each other.
pub fn is_simple<T: Scalar>(poly: &[Point2<T>]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let scale = poly
        .iter()
        .fold(T::zero(), |m, p| m.max(p.x.abs()).max(p.y.abs()));
    let tol = scale * T::lit(1e-12);
    for i in 0..n {
        let a0 = poly[i];
        let a1 = poly[(i + 1) % n];
        if a0.dist(a1) <= tol {
            return false;
        }
        for j in (i + 1)..n {
            let b0 = poly[j];
            let b1 = poly[(j + 1) % n];
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Reject a spike: the two edges overlap along a line.
                let shared = if j == i + 1 { a1 } else { a0 };
                let u = if j == i + 1 { a0 - shared } else { a1 - shared };
                let v = if j == i + 1 { b1 - shared } else { b0 - shared };
                if u.cross(v).abs() <= tol * (u.norm() + v.norm()) && u.dot(v) > T::zero() {
                    return false;
                }
                continue;
            }
            if segments_touch(a0, a1, b0, b1, tol) {
                return false;
            }
        }
    }
    true
}

fn segments_touch<T: Scalar>(
    a0: Point2<T>,
    a1: Point2<T>,
    b0: Point2<T>,
    b1: Point2<T>,
    tol: T,
) -> bool {
    if proper_crossing(a0, a1, b0, b1, T::zero()).is_some() {
        return true;
    }
    point_segment_distance(a0, b0, b1) <= tol
        || point_segment_distance(a1, b0, b1) <= tol
        || point_segment_distance(b0, a0, a1) <= tol
        || point_segment_distance(b1, a0, a1) <= tol
}

/// Where two rays `o + t·d` (t ≥ 0) meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayMeeting<T> {
    pub point: Point2<T>,
    /// Distance travelled along the first ray.
    pub t1: T,
    /// Distance travelled along the second ray.
    pub t2: T,
}

/// Meeting point of two rays with unit directions. Collinear rays pointing
/// at each other meet halfway between their origins.
pub fn ray_meeting<T: Scalar>(
    o1: Point2<T>,
    d1: Point2<T>,
    o2: Point2<T>,
    d2: Point2<T>,
) -> Option<RayMeeting<T>> {
    let w = o2 - o1;
    let scale = w.norm();
    if scale == T::zero() {
        return None;
    }
    let den = d1.cross(d2);
    let tol = T::lit(1e-10);
    if den.abs() <= tol {
        // Parallel: only the head-on collinear case meets.
        let off_line = d1.cross(w).abs();
        if off_line <= tol * scale && d1.dot(w) > T::zero() && d2.dot(w) < T::zero() {
            let half = scale / T::two();
            return Some(RayMeeting {
                point: o1.midpoint(o2),
                t1: half,
                t2: half,
            });
        }
        return None;
    }
    let t1 = w.cross(d2) / den;
    let t2 = w.cross(d1) / den;
    // A ray passing through the other's origin does not count as meeting it.
    if t1 <= tol * scale || t2 <= tol * scale {
        return None;
    }
    Some(RayMeeting {
        point: o1 + d1 * t1,
        t1,
        t2,
    })
}

/// Spatial hash that merges points closer than a tolerance and hands out
/// stable integer ids in insertion order.
#[derive(Debug, Clone)]
pub struct PointIndex<T> {
    tol: T,
    cell: T,
    points: Vec<Point2<T>>,
    grid: HashMap<(i64, i64), Vec<usize>>,
}

impl<T: Scalar> PointIndex<T> {
    pub fn new(tol: T) -> Self {
        Self {
            tol,
            cell: tol * T::lit(4.0),
            points: Vec::new(),
            grid: HashMap::new(),
        }
    }

    fn key(&self, p: Point2<T>) -> (i64, i64) {
        let kx = (p.x / self.cell).floor().to_i64().unwrap_or(i64::MAX);
        let ky = (p.y / self.cell).floor().to_i64().unwrap_or(i64::MAX);
        (kx, ky)
    }

    pub fn find(&self, p: Point2<T>) -> Option<usize> {
        let (kx, ky) = self.key(p);
        let mut best: Option<(usize, T)> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.grid.get(&(kx + dx, ky + dy)) {
                    for &id in ids {
                        let d = self.points[id].dist(p);
                        if d <= self.tol
                            && best.is_none_or(|(bid, bd)| d < bd || (d == bd && id < bid))
                        {
                            best = Some((id, d));
                        }
                    }
                }
            }
        }
        best.map(|(id, _)| id)
    }

    pub fn insert(&mut self, p: Point2<T>) -> usize {
        if let Some(id) = self.find(p) {
            return id;
        }
        let id = self.points.len();
        self.points.push(p);
        let k = self.key(p);
        self.grid.entry(k).or_default().push(id);
        id
    }

    pub fn get(&self, id: usize) -> Point2<T> {
        self.points[id]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Point2<f64>;

    #[test]
    fn incenter_of_equilateral_is_centroid() {
        let a = P::new(0.0, 0.0);
        let b = P::new(2.0, 0.0);
        let c = P::new(1.0, 3f64.sqrt());
        let i = incenter(a, b, c);
        let g = mean(&[a, b, c]);
        assert!(i.dist(g) < 1e-15);
    }

    #[test]
    fn head_on_rays_meet_halfway() {
        let m = ray_meeting(
            P::new(0.0, 0.0),
            P::new(1.0, 0.0),
            P::new(2.0, 0.0),
            P::new(-1.0, 0.0),
        )
        .unwrap();
        assert!((m.point.x - 1.0).abs() < 1e-15 && m.point.y.abs() < 1e-15);
        assert!(ray_meeting(
            P::new(0.0, 0.0),
            P::new(1.0, 0.0),
            P::new(0.0, 1.0),
            P::new(1.0, 0.0)
        )
        .is_none());
    }

    #[test]
    fn diverging_rays_do_not_meet() {
        let d = P::new(1.0, 1.0).unit().unwrap();
        let e = P::new(1.0, -1.0).unit().unwrap();
        assert!(ray_meeting(P::new(0.0, 0.0), -d, P::new(2.0, 0.0), -e).is_none());
        assert!(ray_meeting(P::new(0.0, 0.0), d, P::new(2.0, 0.0), -e).is_some());
    }

    #[test]
    fn simplicity() {
        let square = [
            P::new(0.0, 0.0),
            P::new(1.0, 0.0),
            P::new(1.0, 1.0),
            P::new(0.0, 1.0),
        ];
        assert!(is_simple(&square));
        let bow = [
            P::new(0.0, 0.0),
            P::new(1.0, 1.0),
            P::new(1.0, 0.0),
            P::new(0.0, 1.0),
        ];
        assert!(!is_simple(&bow));
        assert!(signed_area2(&square) > 0.0);
    }

    #[test]
    fn point_index_merges_nearby_points() {
        let mut idx = PointIndex::new(1e-9);
        let a = idx.insert(P::new(1.0, 1.0));
        let b = idx.insert(P::new(1.0 + 1e-12, 1.0 - 1e-12));
        let c = idx.insert(P::new(1.0 + 1e-6, 1.0));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(idx.len(), 2);
    }

    #[test]
    fn containment_counts_boundary() {
        let tri = [P::new(0.0, 0.0), P::new(1.0, 0.0), P::new(0.0, 1.0)];
        assert!(contains_point(&tri, P::new(0.5, 0.0), 1e-12));
        assert!(contains_point(&tri, P::new(0.2, 0.2), 1e-12));
        assert!(!contains_point(&tri, P::new(0.6, 0.6), 1e-12));
    }
}
