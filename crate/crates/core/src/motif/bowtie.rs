use super::pic::RayPair;
use crate::geom::{proper_crossing, ray_meeting, Point2, Segment};
use crate::scalar::Scalar;

/// X-fix for a barrel hexagon `[o, ℓ, ℓ', o', j', j]`, whose edges 1 and 4
/// face the trisected arcs.
///
/// The central V's are the two pairs of rays leaving the midpoints of edges
/// 1 and 4, each cut where it first meets the ray of the neighbouring edge.
/// When they cross, or when a segment of `motif` from edge 1 crosses one from
/// edge 4, the motif is rebuilt around a straight X joining the midpoints of edges
/// 0–3 and 5–2. The rays of edges 1 and 4 stop at the X, and the remaining
/// rays of the slanted edges meet at the `o` and `o'` corners. Returns `None`
/// when there is no such crossing or the rebuilt rays fail to meet.
/// A motif that already contains the X is rebuilt the same way, so applying
/// the fix twice changes nothing.
pub fn fix_bowtie_hexagon<T: Scalar>(
    hexagon: &[Point2<T>],
    rays: &[RayPair<T>],
    motif: &[Segment<T>],
) -> Option<Vec<Segment<T>>> {
    if hexagon.len() != 6 || rays.len() != 6 {
        return None;
    }
    let m: Vec<Point2<T>> = (0..6)
        .map(|e| hexagon[e].midpoint(hexagon[(e + 1) % 6]))
        .collect();
    let eps = T::lit(1e-9);
    let from = |p: Point2<T>| motif.iter().filter(move |s| s.a == p).copied();
    let crossed =
        from(m[1]).any(|s| from(m[4]).any(|t| proper_crossing(s.a, s.b, t.a, t.b, eps).is_some()));
    let v = |e: usize| -> Vec<Segment<T>> {
        let (next, prev) = ((e + 1) % 6, (e + 5) % 6);
        [
            ray_meeting(m[e], rays[e][0], m[next], rays[next][1]),
            ray_meeting(m[e], rays[e][1], m[prev], rays[prev][0]),
        ]
        .into_iter()
        .flatten()
        .map(|meet| Segment::new(m[e], meet.point))
        .collect()
    };
    let (v1, v4) = (v(1), v(4));
    let crossed = crossed
        || v1.iter().any(|s| {
            v4.iter()
                .any(|t| proper_crossing(s.a, s.b, t.a, t.b, eps).is_some())
        });
    let already = motif.iter().any(|s| s.a == m[0] && s.b == m[3]);
    if !crossed && !already {
        return None;
    }
    let x = [Segment::new(m[0], m[3]), Segment::new(m[5], m[2])];
    let mut out = x.to_vec();
    let corner = |e: usize, f: usize| -> Option<Segment<T>> {
        // Forward ray of edge e meets the backward ray of edge f.
        let meet = ray_meeting(m[e], rays[e][0], m[f], rays[f][1])?;
        Some(Segment::new(m[e], meet.point))
    };
    let corner_pair = |e: usize, f: usize| -> Option<[Segment<T>; 2]> {
        let s = corner(e, f)?;
        Some([s, Segment::new(m[f], s.b)])
    };
    let stop_at_x = |e: usize, k: usize| -> Option<Segment<T>> {
        let d = rays[e][k];
        let span = x
            .iter()
            .map(|s| s.length())
            .fold(T::zero(), |a, b| a.max(b));
        let far = m[e] + d * (span * T::two());
        let t = x
            .iter()
            .filter_map(|s| proper_crossing(m[e], far, s.a, s.b, T::zero()).map(|(t, _)| t))
            .fold(None, |best: Option<T>, t| {
                Some(best.map_or(t, |b| b.min(t)))
            })?;
        Some(Segment::new(m[e], m[e].lerp(far, t)))
    };
    let [o0, o1] = corner_pair(5, 0)?;
    let [p0, p1] = corner_pair(2, 3)?;
    out.extend([
        o1,
        stop_at_x(1, 0)?,
        stop_at_x(1, 1)?,
        p0,
        p1,
        stop_at_x(4, 0)?,
        stop_at_x(4, 1)?,
        o0,
    ]);
    Some(out)
}
