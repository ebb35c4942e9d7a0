use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::cyclic::{check_tau, cyclic_from_ring, ring, vertex_distance, Gap, Ring};
use super::{Neighbor, Patch, PatchError, PatchParams, PatchPolygon, Role};
use crate::complex::{Complex, Gadget, GadgetKind, Structure, VertexId, Wrap};
use crate::geom::{incenter, mean, Point2, PointIndex};
use crate::packing::Packing;
use crate::scalar::Scalar;

/// Shared state for building the polygons of one packing.
struct Builder<'a, T> {
    s: Structure,
    packing: &'a Packing<T>,
    removed: BTreeSet<VertexId>,
    rings: BTreeMap<VertexId, Ring<T>>,
}

/// The four vertices a gap polygon takes from two tangent circles `x` and
/// `y`: `[vertex after T(x,y) on x, T(x,y), T(y,x), vertex before T(y,x) on y]`.
type Piece<T> = [Point2<T>; 4];

impl<'a, T: Scalar> Builder<'a, T> {
    fn new(
        packing: &'a Packing<T>,
        complex: &Complex,
        params: &PatchParams,
    ) -> Result<Self, PatchError> {
        check_tau(params)?;
        let s = complex.structure().map_err(PatchError::InvalidComplex)?;
        if let Some(&v) = s.ids().iter().find(|v| !packing.circles.contains_key(v)) {
            return Err(PatchError::MissingCircle(v));
        }
        let removed = s.gadget_centers();
        let mean_r = packing
            .circles
            .values()
            .fold(T::zero(), |acc, c| acc + c.radius)
            / T::of_usize(packing.circles.len());
        let mut rings = BTreeMap::new();
        for &v in s.ids() {
            if removed.contains(&v) {
                continue;
            }
            let circle = packing.circle(v);
            let dist = vertex_distance(v, circle.radius, mean_r, params)?;
            let flower = s.flower(v);
            let dirs: Vec<Point2<T>> = flower
                .petals
                .iter()
                .map(|p| {
                    (packing.lift(p.vertex, p.wrap) - circle.center)
                        .unit()
                        .ok_or(PatchError::DegeneratePolygon)
                })
                .collect::<Result<_, _>>()?;
            let gone: Vec<bool> = flower
                .petals
                .iter()
                .map(|p| removed.contains(&p.vertex))
                .collect();
            let kept: Vec<(usize, Point2<T>)> = (0..dirs.len())
                .filter(|&i| !gone[i])
                .map(|i| (i, dirs[i]))
                .collect();
            let min = if flower.closed { 3 } else { 2 };
            if kept.len() < min {
                return Err(PatchError::TooFewNeighbors {
                    circle: v,
                    count: kept.len(),
                });
            }
            let k = dirs.len();
            let mut gaps = Vec::with_capacity(kept.len());
            for j in 0..kept.len() {
                let from = kept[j].0;
                let last = j + 1 == kept.len();
                if last && !flower.closed {
                    if from + 1 != k || kept[0].0 != 0 {
                        return Err(PatchError::GadgetGeometry(format!(
                            "boundary circle {v} touches a removed circle at the end of its fan"
                        )));
                    }
                    gaps.push(Gap::Exterior);
                    continue;
                }
                let to = kept[(j + 1) % kept.len()].0;
                let run = (to + k - from - 1) % k;
                gaps.push(match run {
                    0 => Gap::Midpoint,
                    1 => {
                        let p = (from + 1) % k;
                        Gap::Former(p, dirs[p])
                    }
                    2 => Gap::Trisect,
                    n => {
                        return Err(PatchError::GadgetGeometry(format!(
                            "circle {v} has {n} consecutive removed neighbours"
                        )))
                    }
                });
            }
            rings.insert(v, ring(circle.center, dist, &kept, &gaps));
        }
        Ok(Self {
            s,
            packing,
            removed,
            rings,
        })
    }

    fn ring(&self, v: VertexId) -> Result<&Ring<T>, PatchError> {
        self.rings
            .get(&v)
            .ok_or_else(|| PatchError::GadgetGeometry(format!("circle {v} has been removed")))
    }

    /// Lattice offsets of the corners of triangle `t` relative to corner 0.
    fn corner_offsets(&self, t: usize) -> [Wrap; 3] {
        let w = self.s.triangles()[t].wraps;
        [Wrap::ZERO, w[0], w[0] + w[1]]
    }

    /// The piece for the edge from corner `cx` to corner `cx + 1` of
    /// triangle `t`, expressed in the frame where corner `reference` sits at
    /// lattice offset `lift`.
    fn piece(
        &self,
        t: usize,
        cx: usize,
        reference: usize,
        lift: Wrap,
    ) -> Result<Piece<T>, PatchError> {
        let tri = self.s.triangles()[t];
        let cy = (cx + 1) % 3;
        let (x, y) = (tri.vertices[cx], tri.vertices[cy]);
        let off = self.corner_offsets(t);
        let sx = self.packing.shift(off[cx] - off[reference] + lift);
        let sy = self.packing.shift(off[cy] - off[reference] + lift);
        let (rx, ry) = (self.ring(x)?, self.ring(y)?);
        let px = self.s.corner_petal(t, cx);
        let py = (self.s.corner_petal(t, cy) + 1) % self.s.degree(y);
        let missing =
            || PatchError::GadgetGeometry(format!("no tangency vertex between {x} and {y}"));
        let ix = rx.index_of_petal(px).ok_or_else(missing)?;
        let iy = ry.index_of_petal(py).ok_or_else(missing)?;
        let (nx, ny) = (rx.points.len(), ry.points.len());
        Ok([
            rx.points[(ix + 1) % nx] + sx,
            rx.points[ix] + sx,
            ry.points[iy] + sy,
            ry.points[(iy + ny - 1) % ny] + sy,
        ])
    }

    fn filler(
        &self,
        role: Role,
        piece: Piece<T>,
        o: Point2<T>,
        circles: &[VertexId],
    ) -> PatchPolygon<T> {
        PatchPolygon {
            role,
            points: vec![piece[0], piece[1], piece[2], piece[3], o],
            neighbors: vec![None; 5],
            circles: circles.to_vec(),
            cyclic: None,
        }
    }

    fn trio(&self, t: usize) -> Result<[PatchPolygon<T>; 3], PatchError> {
        let tri = self.s.triangles()[t];
        let off = self.corner_offsets(t);
        let c: Vec<Point2<T>> = (0..3)
            .map(|k| self.packing.lift(tri.vertices[k], off[k]))
            .collect();
        let o = incenter(c[0], c[1], c[2]);
        let mut circles = tri.vertices.to_vec();
        circles.sort_unstable();
        let p = |k: usize| -> Result<PatchPolygon<T>, PatchError> {
            Ok(self.filler(
                Role::FillerPentagon,
                self.piece(t, k, 0, Wrap::ZERO)?,
                o,
                &circles,
            ))
        };
        Ok([p(0)?, p(1)?, p(2)?])
    }

    /// Corners `(triangle, corner)` at `v`, in flower order.
    fn wedges(&self, v: VertexId) -> Vec<(usize, usize)> {
        let mut w: Vec<(usize, usize)> = self
            .s
            .triangles()
            .iter()
            .enumerate()
            .flat_map(|(t, tri)| {
                (0..3)
                    .filter(move |&c| tri.vertices[c] == v)
                    .map(move |c| (t, c))
            })
            .collect();
        w.sort_by_key(|&(t, c)| self.s.corner_petal(t, c));
        w
    }

    fn rim_circles(g: &Gadget) -> Vec<VertexId> {
        let mut r = g.rim.clone();
        r.sort_unstable();
        r.dedup();
        r
    }

    /// Four pentagons around `o = mean(i, j, k, ℓ)`, where `i, j, k, ℓ` are
    /// the vertices the rim circles placed at their former tangencies with
    /// the removed centre.
    fn square(&self, g: &Gadget) -> Result<Vec<PatchPolygon<T>>, PatchError> {
        if g.kind != GadgetKind::Square || g.centers.len() != 1 {
            return Err(PatchError::GadgetGeometry("not a square gadget".into()));
        }
        let a = g.centers[0];
        let wedges = self.wedges(a);
        if wedges.len() != 4 || !self.s.flower(a).closed {
            return Err(PatchError::GadgetGeometry(format!(
                "square centre {a} must have four wedges"
            )));
        }
        let pieces: Vec<Piece<T>> = wedges
            .iter()
            .map(|&(t, c)| self.piece(t, (c + 1) % 3, c, Wrap::ZERO))
            .collect::<Result<_, _>>()?;
        let corners: Vec<Point2<T>> = pieces.iter().map(|p| p[0]).collect();
        let o = mean(&corners);
        let rim = Self::rim_circles(g);
        Ok(pieces
            .into_iter()
            .map(|p| self.filler(Role::GadgetPentagon, p, o, &rim))
            .collect())
    }

    /// Corner of `h` whose wedge runs from `x` to `y`.
    fn wedge_between(&self, h: VertexId, x: VertexId, y: VertexId) -> Option<(usize, usize)> {
        self.wedges(h).into_iter().find(|&(t, c)| {
            let v = self.s.triangles()[t].vertices;
            v[(c + 1) % 3] == x && v[(c + 2) % 3] == y
        })
    }

    /// Four pentagons and the barrel hexagon replacing the circles of the
    /// bowtie centres `a` and `b`. With rim `[c, d, e, f]`, `d` and `f` keep
    /// trisected arcs `j, j'` and `ℓ, ℓ'`; `i` and `k` are the former
    /// tangency vertices of `c` and `e`. The pentagons meet at
    /// `o = mean(i, j, ℓ)` and `o' = mean(j', k, ℓ')`, and the hexagon is
    /// `[o, ℓ, ℓ', o', j', j]`.
    fn bowtie(&self, g: &Gadget) -> Result<Vec<PatchPolygon<T>>, PatchError> {
        if g.kind != GadgetKind::Bowtie || g.centers.len() != 2 || g.rim.len() != 4 {
            return Err(PatchError::GadgetGeometry("not a bowtie gadget".into()));
        }
        let (a, b) = (g.centers[0], g.centers[1]);
        let (c, mut d, e, mut f) = (g.rim[0], g.rim[1], g.rim[2], g.rim[3]);
        if self.wedge_between(a, d, c).is_none() {
            std::mem::swap(&mut d, &mut f);
        }
        let missing =
            |what: &str| PatchError::GadgetGeometry(format!("bowtie {a}/{b}: no wedge {what}"));
        let w_dc = self
            .wedge_between(a, d, c)
            .ok_or_else(|| missing("d-c at a"))?;
        let w_cf = self
            .wedge_between(a, c, f)
            .ok_or_else(|| missing("c-f at a"))?;
        let w_fe = self
            .wedge_between(b, f, e)
            .ok_or_else(|| missing("f-e at b"))?;
        let w_ed = self
            .wedge_between(b, e, d)
            .ok_or_else(|| missing("e-d at b"))?;
        let b_lift = self
            .s
            .flower(a)
            .petals
            .iter()
            .find(|p| p.vertex == b)
            .map(|p| p.wrap)
            .ok_or_else(|| missing("a-b"))?;
        let piece = |(t, k): (usize, usize), lift: Wrap| self.piece(t, (k + 1) % 3, k, lift);
        let dc = piece(w_dc, Wrap::ZERO)?;
        let cf = piece(w_cf, Wrap::ZERO)?;
        let fe = piece(w_fe, b_lift)?;
        let ed = piece(w_ed, b_lift)?;
        let (i, j, l) = (cf[0], dc[0], cf[3]);
        let (l2, k, j2) = (fe[0], ed[0], ed[3]);
        let o = mean(&[i, j, l]);
        let o2 = mean(&[j2, k, l2]);
        let rim = Self::rim_circles(g);
        let hexagon = PatchPolygon {
            role: Role::BarrelHexagon,
            points: vec![o, l, l2, o2, j2, j],
            neighbors: vec![None; 6],
            circles: rim.clone(),
            cyclic: None,
        };
        Ok(vec![
            self.filler(Role::GadgetPentagon, cf, o, &rim),
            self.filler(Role::GadgetPentagon, dc, o, &rim),
            self.filler(Role::GadgetPentagon, fe, o2, &rim),
            self.filler(Role::GadgetPentagon, ed, o2, &rim),
            hexagon,
        ])
    }
}

/// Square gadget polygons for `complex.gadgets()[index]`.
pub fn apply_square_gadget<T: Scalar>(
    packing: &Packing<T>,
    complex: &Complex,
    index: usize,
    params: &PatchParams,
) -> Result<Vec<PatchPolygon<T>>, PatchError> {
    let g = complex
        .gadgets()
        .get(index)
        .ok_or_else(|| PatchError::GadgetGeometry(format!("no gadget #{index}")))?;
    Builder::new(packing, complex, params)?.square(g)
}

/// Bowtie gadget polygons (four pentagons, then the hexagon) for
/// `complex.gadgets()[index]`.
pub fn apply_bowtie_gadget<T: Scalar>(
    packing: &Packing<T>,
    complex: &Complex,
    index: usize,
    params: &PatchParams,
) -> Result<Vec<PatchPolygon<T>>, PatchError> {
    let g = complex
        .gadgets()
        .get(index)
        .ok_or_else(|| PatchError::GadgetGeometry(format!("no gadget #{index}")))?;
    Builder::new(packing, complex, params)?.bowtie(g)
}

/// Builds the full patch: one cyclic polygon per surviving circle (by id),
/// three pentagons per triangle without a removed vertex, and the gadget
/// polygons; then links shared edges.
pub fn build_patch<T: Scalar>(
    packing: &Packing<T>,
    complex: &Complex,
    params: &PatchParams,
) -> Result<Patch<T>, PatchError> {
    let b = Builder::new(packing, complex, params)?;
    let mut polygons = Vec::new();
    for (&v, r) in &b.rings {
        polygons.push(cyclic_from_ring(v, packing.circle(v), r.clone()));
    }
    for (t, tri) in b.s.triangles().iter().enumerate() {
        if tri.vertices.iter().any(|v| b.removed.contains(v)) {
            continue;
        }
        polygons.extend(b.trio(t)?);
    }
    for g in b.s.gadgets() {
        polygons.extend(match g.kind {
            GadgetKind::Square => b.square(g)?,
            GadgetKind::Bowtie => b.bowtie(g)?,
        });
    }
    let scale = packing
        .circles
        .values()
        .fold(T::zero(), |m, c| m.max(c.radius));
    link(&mut polygons, packing, T::lit(T::MERGE_TOLERANCE) * scale);
    Ok(Patch {
        polygons,
        params: *params,
        lattice: packing.lattice,
    })
}

/// Fills in `neighbors` by matching reversed edges, across lattice shifts on
/// a torus.
fn link<T: Scalar>(polygons: &mut [PatchPolygon<T>], packing: &Packing<T>, tol: T) {
    let mut index = PointIndex::new(tol);
    let ids: Vec<Vec<usize>> = polygons
        .iter()
        .map(|p| p.points.iter().map(|&q| index.insert(q)).collect())
        .collect();
    let mut edges: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for (pi, v) in ids.iter().enumerate() {
        for e in 0..v.len() {
            edges.entry((v[e], v[(e + 1) % v.len()])).or_insert((pi, e));
        }
    }
    let mut shifts = vec![Wrap::ZERO];
    if packing.lattice.is_some() {
        for x in -2..=2 {
            for y in -2..=2 {
                if (x, y) != (0, 0) {
                    shifts.push(Wrap::new(x, y));
                }
            }
        }
    }
    for pi in 0..polygons.len() {
        let n = polygons[pi].points.len();
        for e in 0..n {
            let (p, q) = polygons[pi].edge(e);
            let found = shifts.iter().find_map(|&s| {
                let d = packing.shift(s);
                let a = if s.is_zero() {
                    ids[pi][e]
                } else {
                    index.find(p + d)?
                };
                let b = if s.is_zero() {
                    ids[pi][(e + 1) % n]
                } else {
                    index.find(q + d)?
                };
                let &(qi, f) = edges.get(&(b, a))?;
                (qi != pi || !s.is_zero()).then_some(Neighbor {
                    polygon: qi,
                    edge: f,
                    shift: -s,
                })
            });
            polygons[pi].neighbors[e] = found;
        }
    }
}
