use super::MotifError;
use crate::geom::{contains_point, ray_meeting, Point2, Segment};
use crate::scalar::Scalar;

/// The two unit ray directions leaving an edge midpoint into the polygon:
/// `[towards the edge's end vertex, towards its start vertex]`.
pub type RayPair<T> = [Point2<T>; 2];

/// Rays at contact angle `theta` on the edge `a → b` of a counterclockwise
/// polygon.
pub fn contact_pair<T: Scalar>(a: Point2<T>, b: Point2<T>, theta: T) -> RayPair<T> {
    let t = (b - a).unit().unwrap_or(Point2::new(T::one(), T::zero()));
    [t.rotate(theta), (-t).rotate(-theta)]
}

/// Rays at contact angle `theta` on every edge.
pub fn contact_rays<T: Scalar>(points: &[Point2<T>], theta: T) -> Vec<RayPair<T>> {
    let n = points.len();
    (0..n)
        .map(|e| contact_pair(points[e], points[(e + 1) % n], theta))
        .collect()
}

/// Splits a pair of directions leaving the midpoint of edge `a → b` into
/// `[forward, backward]` order.
pub fn order_rays<T: Scalar>(a: Point2<T>, b: Point2<T>, d: [Point2<T>; 2]) -> RayPair<T> {
    let t = b - a;
    if d[0].dot(t) >= d[1].dot(t) {
        d
    } else {
        [d[1], d[0]]
    }
}

fn extent<T: Scalar>(points: &[Point2<T>]) -> T {
    let mut m = T::zero();
    for p in points {
        for q in points {
            m = m.max(p.dist(*q));
        }
    }
    m
}

/// Largest polygon (in edges) for which the exhaustive matching fallback runs.
const MAX_MATCHING_EDGES: usize = 8;

/// Polygons-in-contact motif. Ray `2e` is edge `e`'s forward ray and `2e + 1`
/// its backward ray. Each forward ray is first paired with the backward ray
/// of the next edge; if any such pair fails to meet inside the polygon, the
/// rays are instead paired to minimise the total segment length. Emits one
/// segment per ray, from its edge midpoint to where it was truncated, in ray
/// order.
pub fn pic_motif<T: Scalar>(
    points: &[Point2<T>],
    rays: &[RayPair<T>],
) -> Result<Vec<Segment<T>>, MotifError> {
    let n = points.len();
    if n < 3 || rays.len() != n {
        return Err(MotifError::TooFewPoints {
            needed: 3,
            got: n.min(rays.len()),
        });
    }
    let mids: Vec<Point2<T>> = (0..n)
        .map(|e| points[e].midpoint(points[(e + 1) % n]))
        .collect();
    let origin = |r: usize| mids[r / 2];
    let dir = |r: usize| rays[r / 2][r % 2];
    let tol = extent(points) * T::lit(1e-9);
    let meet = |i: usize, j: usize| {
        ray_meeting(origin(i), dir(i), origin(j), dir(j))
            .filter(|m| contains_point(points, m.point, tol))
    };
    let mut ends: Vec<Option<Point2<T>>> = vec![None; 2 * n];
    let adjacent: Option<Vec<_>> = (0..n).map(|e| meet(2 * e, 2 * ((e + 1) % n) + 1)).collect();
    if let Some(meetings) = adjacent {
        for (e, m) in meetings.iter().enumerate() {
            ends[2 * e] = Some(m.point);
            ends[2 * ((e + 1) % n) + 1] = Some(m.point);
        }
    } else {
        for (i, j, p) in
            min_length_matching(2 * n, |i, j| meet(i, j).map(|m| (m.t1 + m.t2, m.point)))?
        {
            ends[i] = Some(p);
            ends[j] = Some(p);
        }
    }
    Ok((0..2 * n)
        .map(|r| Segment::new(origin(r), ends[r].expect("every ray is matched")))
        .collect())
}

/// Minimum-cost perfect matching on `count` rays by dynamic programming over
/// subsets.
fn min_length_matching<T: Scalar>(
    count: usize,
    pair: impl Fn(usize, usize) -> Option<(T, Point2<T>)>,
) -> Result<Vec<(usize, usize, Point2<T>)>, MotifError> {
    if count > 2 * MAX_MATCHING_EDGES {
        return Err(MotifError::Unmatched);
    }
    let mut table = vec![vec![None; count]; count];
    for i in 0..count {
        for j in i + 1..count {
            table[i][j] = pair(i, j);
        }
    }
    let full = (1usize << count) - 1;
    let mut best: Vec<Option<(T, usize)>> = vec![None; 1 << count];
    best[0] = Some((T::zero(), usize::MAX));
    for mask in 0..full {
        let Some((cost, _)) = best[mask] else {
            continue;
        };
        let i = (!mask).trailing_zeros() as usize;
        for j in i + 1..count {
            if mask & (1 << j) != 0 {
                continue;
            }
            let Some((c, _)) = table[i][j] else { continue };
            let next = mask | (1 << i) | (1 << j);
            let total = cost + c;
            if best[next].is_none_or(|(b, _)| total < b) {
                best[next] = Some((total, i * count + j));
            }
        }
    }
    if best[full].is_none() {
        return Err(MotifError::Unmatched);
    }
    let mut out = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let (_, code) = best[mask].expect("reachable");
        let (i, j) = (code / count, code % count);
        out.push((i, j, table[i][j].expect("feasible").1));
        mask &= !((1 << i) | (1 << j));
    }
    out.sort_by_key(|&(i, j, _)| (i, j));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type P = Point2<f64>;

    fn regular(n: usize) -> Vec<P> {
        (0..n)
            .map(|i| P::polar(2.0 * PI * i as f64 / n as f64))
            .collect()
    }

    #[test]
    fn square_at_quarter_angle() {
        let sq = regular(4);
        let segs = pic_motif(&sq, &contact_rays(&sq, PI / 4.0)).unwrap();
        assert_eq!(segs.len(), 8);
        let mids: Vec<P> = (0..4).map(|e| sq[e].midpoint(sq[(e + 1) % 4])).collect();
        for e in 0..4 {
            // Forward ray of e and backward ray of e + 1 cover the chord
            // between the two midpoints.
            let (a, b) = (mids[e], mids[(e + 1) % 4]);
            assert!(segs[2 * e].b.dist(a.midpoint(b)) < 1e-12);
            assert!(segs[2 * ((e + 1) % 4) + 1].b.dist(a.midpoint(b)) < 1e-12);
        }
    }

    #[test]
    fn pentacle() {
        let pent = regular(5);
        let segs = pic_motif(&pent, &contact_rays(&pent, 2.0 * PI / 5.0)).unwrap();
        // Inner vertices of a regular pentagram through the edge midpoints
        // sit at cos 72° of the circumradius, towards the polygon vertices.
        for e in 0..5 {
            let tip = segs[2 * e].b;
            let want = pent[(e + 1) % 5] * (2.0 * PI / 5.0).cos();
            assert!(tip.dist(want) < 1e-12);
            assert_eq!(tip, segs[2 * ((e + 1) % 5) + 1].b);
        }
    }

    #[test]
    fn fallback_on_thin_hexagon() {
        let hex = vec![
            P::new(-2.0, 0.0),
            P::new(-0.5, -0.3),
            P::new(0.5, -0.3),
            P::new(2.0, 0.0),
            P::new(0.5, 0.3),
            P::new(-0.5, 0.3),
        ];
        let segs = pic_motif(&hex, &contact_rays(&hex, 2.0 * PI / 5.0)).unwrap();
        assert_eq!(segs.len(), 12);
        for s in &segs {
            assert!(contains_point(&hex, s.b, 1e-9));
        }
    }

    #[test]
    fn order_rays_sorts_by_edge_direction() {
        let (a, b) = (P::new(0.0, 0.0), P::new(1.0, 0.0));
        let f = P::new(0.3, 0.9);
        let k = P::new(-0.3, 0.9);
        assert_eq!(order_rays(a, b, [k, f]), [f, k]);
    }
}
