//! Built-in complexes used by the CLI, the service and the tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    delaunay_from_points, random_points, Complex, Gadget, Topology, Triangle, VertexId,
    VertexRecord, Wrap,
};

/// Names accepted by [`by_name`] (plus `flower<k>` for any `k >= 3`).
pub const DEMO_NAMES: &[&str] = &[
    "flower6",
    "hex7",
    "grid-gadgets",
    "bowtie-grid",
    "square",
    "bowtie",
    "torus-hex",
    "torus-grid",
    "delaunay",
];

pub fn by_name(name: &str) -> Option<Complex> {
    if let Some(k) = name
        .strip_prefix("flower")
        .and_then(|k| k.parse::<usize>().ok())
    {
        return (3..=64).contains(&k).then(|| flower(k));
    }
    Some(match name {
        "hex7" => hex_patch(2),
        "grid-gadgets" => grid_gadgets(6, 7),
        "bowtie-grid" => bowtie_grid(6),
        "square" => square_demo(),
        "bowtie" => bowtie_demo(),
        "torus-hex" => torus_hex(),
        "torus-grid" => torus_grid(3, 3),
        "delaunay" => random_delaunay(60, 1),
        _ => return None,
    })
}

/// Hub `0` surrounded by `k` rim vertices `1..=k` in counterclockwise order.
pub fn flower(k: usize) -> Complex {
    let k = k as VertexId;
    let tris: Vec<[VertexId; 3]> = (1..=k).map(|i| [0, i, i % k + 1]).collect();
    let hints = (0..=k).map(|i| {
        if i == 0 {
            (0, [0.0, 0.0])
        } else {
            let a = std::f64::consts::TAU * f64::from(i - 1) / f64::from(k);
            (i, [a.cos(), a.sin()])
        }
    });
    Complex::disk(&tris).with_hints(hints.collect::<Vec<_>>())
}

/// Patch of the triangular lattice containing every site within `rings`
/// hexagonal steps of the origin. Ids grow ring by ring, counterclockwise
/// from the +x axis; `hex_patch(2)` has seven interior vertices.
pub fn hex_patch(rings: i32) -> Complex {
    let hex_dist = |q: i32, r: i32| (q.abs() + r.abs() + (q + r).abs()) / 2;
    let pos = |q: i32, r: i32| {
        [
            f64::from(q) + 0.5 * f64::from(r),
            f64::from(r) * 3f64.sqrt() / 2.0,
        ]
    };
    let mut sites: Vec<(i32, f64, i32, i32)> = Vec::new();
    for q in -rings..=rings {
        for r in -rings..=rings {
            let d = hex_dist(q, r);
            if d <= rings {
                let [x, y] = pos(q, r);
                let mut a = y.atan2(x);
                if a < -1e-12 {
                    a += std::f64::consts::TAU;
                }
                sites.push((d, a.max(0.0), q, r));
            }
        }
    }
    sites.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let id_of = |q: i32, r: i32| {
        sites
            .iter()
            .position(|s| s.2 == q && s.3 == r)
            .map(|i| i as VertexId)
    };
    let mut tris = Vec::new();
    for q in -rings - 1..=rings {
        for r in -rings - 1..=rings {
            if let (Some(p), Some(a), Some(b)) = (id_of(q, r), id_of(q + 1, r), id_of(q, r + 1)) {
                tris.push([p, a, b]);
            }
            if let (Some(a), Some(b), Some(c)) =
                (id_of(q + 1, r), id_of(q + 1, r + 1), id_of(q, r + 1))
            {
                tris.push([a, b, c]);
            }
        }
    }
    let hints: Vec<(VertexId, [f64; 2])> = sites
        .iter()
        .enumerate()
        .map(|(i, s)| (i as VertexId, pos(s.2, s.3)))
        .collect();
    Complex::disk(&tris).with_hints(hints)
}

/// How one grid cell is filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    /// Split by the diagonal from bottom-left to top-right.
    DiagonalUp,
    /// Split by the diagonal from top-left to bottom-right.
    DiagonalDown,
    Square,
    /// Bowtie whose split-arc vertices are the top-left and bottom-right corners.
    BowtieDown,
    /// Bowtie whose split-arc vertices are the bottom-left and top-right corners.
    BowtieUp,
}

/// `m × m` grid of unit cells, each filled according to `cell(i, j)`.
pub fn grid_with(m: u32, cell: impl Fn(u32, u32) -> Cell) -> Complex {
    let side = m + 1;
    let id = |i: u32, j: u32| j * side + i;
    let mut next = side * side;
    let mut tris = Vec::new();
    let mut gadgets = Vec::new();
    let mut hints: Vec<(VertexId, [f64; 2])> = (0..side)
        .flat_map(|j| (0..side).map(move |i| (j * side + i, [f64::from(i), f64::from(j)])))
        .collect();
    for j in 0..m {
        for i in 0..m {
            let (bl, br, tr, tl) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            let (x, y) = (f64::from(i), f64::from(j));
            match cell(i, j) {
                Cell::DiagonalUp => {
                    tris.push([bl, br, tr]);
                    tris.push([bl, tr, tl]);
                }
                Cell::DiagonalDown => {
                    tris.push([bl, br, tl]);
                    tris.push([br, tr, tl]);
                }
                Cell::Square => {
                    let a = next;
                    next += 1;
                    hints.push((a, [x + 0.5, y + 0.5]));
                    tris.extend([[a, bl, br], [a, br, tr], [a, tr, tl], [a, tl, bl]]);
                    gadgets.push(Gadget::square(a, [bl, br, tr, tl]));
                }
                Cell::BowtieDown => {
                    let (a, b) = (next, next + 1);
                    next += 2;
                    hints.push((a, [x + 0.35, y + 0.35]));
                    hints.push((b, [x + 0.65, y + 0.65]));
                    tris.extend([
                        [a, b, tl],
                        [b, a, br],
                        [a, tl, bl],
                        [a, bl, br],
                        [b, tr, tl],
                        [b, br, tr],
                    ]);
                    gadgets.push(Gadget::bowtie(a, b, [bl, tl, tr, br]));
                }
                Cell::BowtieUp => {
                    let (a, b) = (next, next + 1);
                    next += 2;
                    hints.push((a, [x + 0.65, y + 0.35]));
                    hints.push((b, [x + 0.35, y + 0.65]));
                    tris.extend([
                        [a, b, bl],
                        [b, a, tr],
                        [a, bl, br],
                        [a, br, tr],
                        [b, tl, bl],
                        [b, tr, tl],
                    ]);
                    gadgets.push(Gadget::bowtie(a, b, [br, bl, tl, tr]));
                }
            }
        }
    }
    Complex::disk(&tris).with_hints(hints).with_gadgets(gadgets)
}

/// Square grid where each cell is randomly a diagonal split, a square
/// gadget or a bowtie gadget.
pub fn grid_gadgets(m: u32, seed: u64) -> Complex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells: Vec<Cell> = (0..m * m)
        .map(|_| match rng.gen_range(0..5) {
            0 => Cell::DiagonalUp,
            1 => Cell::DiagonalDown,
            2 => Cell::Square,
            3 => Cell::BowtieDown,
            _ => Cell::BowtieUp,
        })
        .collect();
    grid_with(m, |i, j| cells[(j * m + i) as usize])
}

/// Every cell a bowtie with the same orientation: each interior grid vertex
/// is a split-arc vertex of exactly two bowties, so all its rosettes have
/// order ten.
pub fn bowtie_grid(m: u32) -> Complex {
    grid_with(m, |_, _| Cell::BowtieDown)
}

/// 5 × 5 grid with a square gadget in the middle cell.
pub fn square_demo() -> Complex {
    grid_with(5, |i, j| {
        if (i, j) == (2, 2) {
            Cell::Square
        } else {
            Cell::DiagonalUp
        }
    })
}

/// 5 × 5 grid with a bowtie gadget in the middle cell.
pub fn bowtie_demo() -> Complex {
    grid_with(5, |i, j| {
        if (i, j) == (2, 2) {
            Cell::BowtieDown
        } else {
            Cell::DiagonalUp
        }
    })
}

/// One vertex, two triangles: the hexagonal torus. Its fundamental domain
/// is spanned by period vectors at 60°.
pub fn torus_hex() -> Complex {
    torus_grid(1, 1)
}

/// `m × n` torus with one vertex per cell; each cell is split by the
/// diagonal from its bottom-right to its top-left corner, so every vertex
/// has degree six.
pub fn torus_grid(m: u32, n: u32) -> Complex {
    let (mi, ni) = (m as i32, n as i32);
    let id = |i: i32, j: i32| (j.rem_euclid(ni) * mi + i.rem_euclid(mi)) as VertexId;
    let wrap = |i: i32, j: i32| Wrap::new(i.div_euclid(mi), j.div_euclid(ni));
    let tri = |corners: [(i32, i32); 3]| {
        let vertices = corners.map(|(i, j)| id(i, j));
        let w: Vec<Wrap> = corners.iter().map(|&(i, j)| wrap(i, j)).collect();
        Triangle::with_wraps(vertices, [w[1] - w[0], w[2] - w[1], w[0] - w[2]])
    };
    let mut tris = Vec::new();
    for j in 0..ni {
        for i in 0..mi {
            tris.push(tri([(i, j), (i + 1, j), (i, j + 1)]));
            tris.push(tri([(i + 1, j), (i + 1, j + 1), (i, j + 1)]));
        }
    }
    let vertices = (0..ni)
        .flat_map(|j| {
            (0..mi).map(move |i| VertexRecord {
                id: id(i, j),
                hint: Some([
                    f64::from(i) + 0.5 * f64::from(j),
                    f64::from(j) * 3f64.sqrt() / 2.0,
                ]),
            })
        })
        .collect();
    Complex::new(Topology::Torus, vertices, tris, Vec::new())
}

/// Delaunay triangulation of `n` seeded random points in the unit square.
pub fn random_delaunay(n: usize, seed: u64) -> Complex {
    delaunay_from_points(&random_points(n, seed)).expect("random points are in general position")
}
