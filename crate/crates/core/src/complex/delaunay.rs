use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robust::{incircle, orient2d, Coord};

use super::{Complex, ComplexError, VertexId};

fn coord(p: [f64; 2]) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

fn orient(p: &[[f64; 2]], a: usize, b: usize, c: usize) -> f64 {
    orient2d(coord(p[a]), coord(p[b]), coord(p[c]))
}

/// `n` points uniform in the unit square, reproducible from `seed`.
pub fn random_points(n: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| [rng.gen::<f64>(), rng.gen::<f64>()])
        .collect()
}

/// Delaunay triangulation of the convex hull of `points`; vertex `i` is
/// `points[i]` and carries it as its hint. Cocircular ties keep the
/// diagonal with the lowest vertex id.
pub fn delaunay_from_points(points: &[[f64; 2]]) -> Result<Complex, ComplexError> {
    if points.len() < 3 {
        return Err(ComplexError::DegenerateInput(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(i) = points
        .iter()
        .position(|p| !p[0].is_finite() || !p[1].is_finite())
    {
        return Err(ComplexError::DegenerateInput(format!(
            "point {i} is not finite"
        )));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a][0]
            .total_cmp(&points[b][0])
            .then(points[a][1].total_cmp(&points[b][1]))
    });
    for w in order.windows(2) {
        if points[w[0]] == points[w[1]] {
            return Err(ComplexError::DegenerateInput(format!(
                "points {} and {} coincide",
                w[0], w[1]
            )));
        }
    }
    let k = (2..order.len())
        .find(|&k| orient(points, order[0], order[1], order[k]) != 0.0)
        .ok_or_else(|| ComplexError::DegenerateInput("all points are collinear".into()))?;

    let mut tris: Vec<[usize; 3]> = Vec::with_capacity(2 * points.len());
    let apex = order[k];
    let above = orient(points, order[0], order[1], apex) > 0.0;
    for i in 0..k - 1 {
        let (a, b) = (order[i], order[i + 1]);
        tris.push(if above { [a, b, apex] } else { [b, a, apex] });
    }
    // Counterclockwise hull.
    let mut hull: Vec<usize> = if above {
        order[..k].iter().copied().chain([apex]).collect()
    } else {
        [apex]
            .into_iter()
            .chain(order[..k].iter().rev().copied())
            .collect()
    };

    for &p in &order[k + 1..] {
        let n = hull.len();
        let visible: Vec<bool> = (0..n)
            .map(|i| orient(points, hull[i], hull[(i + 1) % n], p) < 0.0)
            .collect();
        // The visible edges form one contiguous run because p lies outside
        // the hull of all earlier points.
        let start = (0..n)
            .find(|&i| visible[i] && !visible[(i + n - 1) % n])
            .expect("new point sees the hull");
        let mut end = start;
        while visible[end % n] {
            let (a, b) = (hull[end % n], hull[(end + 1) % n]);
            tris.push([b, a, p]);
            end += 1;
        }
        // Hull vertices strictly between start and end are now interior.
        let mut next = Vec::with_capacity(n + 1);
        for j in 0..n {
            let off = (j + n - start) % n;
            if off == 0 {
                next.push(hull[j]);
                next.push(p);
            } else if off < end - start {
                continue;
            } else {
                next.push(hull[j]);
            }
        }
        hull = next;
    }

    legalize(points, &mut tris);
    let triangles: Vec<[VertexId; 3]> = tris.iter().map(|t| t.map(|v| v as VertexId)).collect();
    Ok(Complex::disk(&triangles)
        .with_hints(points.iter().enumerate().map(|(i, &p)| (i as VertexId, p))))
}

fn should_flip(points: &[[f64; 2]], a: usize, b: usize, c: usize, d: usize) -> bool {
    let s = incircle(
        coord(points[a]),
        coord(points[b]),
        coord(points[c]),
        coord(points[d]),
    );
    s > 0.0 || (s == 0.0 && c.min(d) < a.min(b))
}

/// Lawson flips until every interior edge is locally Delaunay.
fn legalize(points: &[[f64; 2]], tris: &mut [[usize; 3]]) {
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (ti, t) in tris.iter().enumerate() {
        for c in 0..3 {
            owner.insert((t[c], t[(c + 1) % 3]), ti);
        }
    }
    let third = |t: &[usize; 3], a: usize, b: usize| {
        *t.iter().find(|&&v| v != a && v != b).expect("triangle")
    };
    let mut stack: Vec<(usize, usize)> = owner.keys().copied().filter(|&(a, b)| a < b).collect();
    stack.sort_unstable();
    while let Some((a, b)) = stack.pop() {
        let (Some(&t1), Some(&t2)) = (owner.get(&(a, b)), owner.get(&(b, a))) else {
            continue;
        };
        let c = third(&tris[t1], a, b);
        let d = third(&tris[t2], a, b);
        if !should_flip(points, a, b, c, d) {
            continue;
        }
        for t in [t1, t2] {
            for k in 0..3 {
                owner.remove(&(tris[t][k], tris[t][(k + 1) % 3]));
            }
        }
        tris[t1] = [c, a, d];
        tris[t2] = [d, b, c];
        for t in [t1, t2] {
            for k in 0..3 {
                owner.insert((tris[t][k], tris[t][(k + 1) % 3]), t);
            }
        }
        stack.extend([(a, d), (d, b), (b, c), (c, a)].map(|(u, v)| (u.min(v), u.max(v))));
    }
}
