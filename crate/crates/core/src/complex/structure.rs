use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Complex, Gadget, Topology, Triangle, VertexId, Wrap};

/// Neighbour of a vertex as seen from that vertex's representative: the
/// neighbour's copy sits `wrap` lattice steps away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Petal {
    pub vertex: VertexId,
    pub wrap: Wrap,
}

/// Counterclockwise neighbour cycle (interior) or fan (boundary) of a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flower {
    pub petals: Vec<Petal>,
    pub closed: bool,
}

impl Flower {
    pub fn degree(&self) -> usize {
        self.petals.len()
    }

    /// Number of wedges (triangle corners) in the flower.
    pub fn wedges(&self) -> usize {
        if self.closed {
            self.petals.len()
        } else {
            self.petals.len().saturating_sub(1)
        }
    }

    pub fn position(&self, petal: Petal) -> Option<usize> {
        self.petals.iter().position(|&p| p == petal)
    }
}

/// Undirected edge in canonical orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
    /// Wrap of the directed edge `a -> b`.
    pub wrap: Wrap,
}

impl Edge {
    pub fn canonical(a: VertexId, b: VertexId, wrap: Wrap) -> Self {
        if a < b || (a == b && wrap >= -wrap) {
            Self { a, b, wrap }
        } else {
            Self {
                a: b,
                b: a,
                wrap: -wrap,
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Wedge {
    pub triangle: usize,
    pub corner: usize,
    pub start: Petal,
    pub end: Petal,
}

/// Problems found while chaining wedges into flowers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LinkProblem {
    Isolated(VertexId),
    Pinch(VertexId),
}

/// Derived adjacency of a valid complex.
#[derive(Debug, Clone)]
pub struct Structure {
    topology: Topology,
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    flowers: Vec<Flower>,
    corner_petal: Vec<[usize; 3]>,
    edges: Vec<Edge>,
    triangles: Vec<Triangle>,
    gadgets: Vec<Gadget>,
}

pub(crate) fn wedges_of(triangles: &[Triangle]) -> Vec<(VertexId, Wedge)> {
    let mut out = Vec::with_capacity(triangles.len() * 3);
    for (ti, t) in triangles.iter().enumerate() {
        for c in 0..3 {
            let n1 = (c + 1) % 3;
            let n2 = (c + 2) % 3;
            let start = Petal {
                vertex: t.vertices[n1],
                wrap: t.wraps[c],
            };
            let end = Petal {
                vertex: t.vertices[n2],
                wrap: -t.wraps[n2],
            };
            out.push((
                t.vertices[c],
                Wedge {
                    triangle: ti,
                    corner: c,
                    start,
                    end,
                },
            ));
        }
    }
    out
}

/// Chains the wedges of one vertex. Returns the petal cycle/fan and, for
/// each wedge in chain order, its `(triangle, corner)`.
pub(crate) fn chain(
    v: VertexId,
    wedges: &[Wedge],
) -> Result<(Flower, Vec<(usize, usize)>), LinkProblem> {
    if wedges.is_empty() {
        return Err(LinkProblem::Isolated(v));
    }
    let mut by_start: BTreeMap<Petal, usize> = BTreeMap::new();
    for (i, w) in wedges.iter().enumerate() {
        if by_start.insert(w.start, i).is_some() {
            return Err(LinkProblem::Pinch(v));
        }
    }
    let ends: BTreeSet<Petal> = wedges.iter().map(|w| w.end).collect();
    if ends.len() != wedges.len() {
        return Err(LinkProblem::Pinch(v));
    }
    let starts: Vec<usize> = wedges
        .iter()
        .enumerate()
        .filter(|(_, w)| !ends.contains(&w.start))
        .map(|(i, _)| i)
        .collect();
    let (first, closed) = match starts.as_slice() {
        [] => (*by_start.values().next().expect("non-empty"), true),
        [one] => (*one, false),
        _ => return Err(LinkProblem::Pinch(v)),
    };
    let mut order = Vec::with_capacity(wedges.len());
    let mut cur = first;
    loop {
        order.push(cur);
        match by_start.get(&wedges[cur].end) {
            Some(&next) if next == first => break,
            Some(&next) => {
                if order.len() > wedges.len() {
                    return Err(LinkProblem::Pinch(v));
                }
                cur = next;
            }
            None => break,
        }
    }
    if order.len() != wedges.len() {
        return Err(LinkProblem::Pinch(v));
    }
    let mut petals: Vec<Petal> = order.iter().map(|&i| wedges[i].start).collect();
    if !closed {
        petals.push(wedges[*order.last().expect("non-empty")].end);
    }
    let corners = order
        .iter()
        .map(|&i| (wedges[i].triangle, wedges[i].corner))
        .collect();
    Ok((Flower { petals, closed }, corners))
}

impl Structure {
    /// Builds the structure, or reports the link problems that prevent it.
    pub(crate) fn analyze(complex: &Complex) -> Result<Self, Vec<LinkProblem>> {
        let ids: Vec<VertexId> = complex.vertex_ids().collect();
        let index: HashMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut per_vertex: Vec<Vec<Wedge>> = vec![Vec::new(); ids.len()];
        for (v, w) in wedges_of(complex.triangles()) {
            if let Some(&i) = index.get(&v) {
                per_vertex[i].push(w);
            }
        }
        let mut problems = Vec::new();
        let mut flowers = Vec::with_capacity(ids.len());
        let mut corner_petal = vec![[usize::MAX; 3]; complex.triangles().len()];
        for (i, wedges) in per_vertex.iter().enumerate() {
            match chain(ids[i], wedges) {
                Ok((flower, corners)) => {
                    for (pos, (t, c)) in corners.into_iter().enumerate() {
                        corner_petal[t][c] = pos;
                    }
                    flowers.push(flower);
                }
                Err(p) => {
                    problems.push(p);
                    flowers.push(Flower {
                        petals: Vec::new(),
                        closed: false,
                    });
                }
            }
        }
        if !problems.is_empty() {
            return Err(problems);
        }
        let mut edges: Vec<Edge> = complex
            .triangles()
            .iter()
            .flat_map(|t| {
                (0..3).map(move |c| {
                    Edge::canonical(t.vertices[c], t.vertices[(c + 1) % 3], t.wraps[c])
                })
            })
            .collect();
        edges.sort();
        edges.dedup();
        Ok(Self {
            topology: complex.topology(),
            ids,
            index,
            flowers,
            corner_petal,
            edges,
            triangles: complex.triangles().to_vec(),
            gadgets: complex.gadgets().to_vec(),
        })
    }

    pub(crate) fn build(complex: &Complex) -> Option<Self> {
        Self::analyze(complex).ok()
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    /// Vertex ids in ascending order.
    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn index_of(&self, id: VertexId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn contains(&self, id: VertexId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn flower(&self, id: VertexId) -> &Flower {
        &self.flowers[self.index[&id]]
    }

    pub fn degree(&self, id: VertexId) -> usize {
        self.flower(id).degree()
    }

    pub fn is_boundary(&self, id: VertexId) -> bool {
        !self.flower(id).closed
    }

    pub fn interior_ids(&self) -> Vec<VertexId> {
        self.ids
            .iter()
            .copied()
            .filter(|&v| !self.is_boundary(v))
            .collect()
    }

    pub fn boundary_ids(&self) -> Vec<VertexId> {
        self.ids
            .iter()
            .copied()
            .filter(|&v| self.is_boundary(v))
            .collect()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn gadgets(&self) -> &[Gadget] {
        &self.gadgets
    }

    /// Flower position of the petal `t[c+1]` as seen from corner `c` of
    /// triangle `t`; the petal `t[c+2]` follows it.
    pub fn corner_petal(&self, triangle: usize, corner: usize) -> usize {
        self.corner_petal[triangle][corner]
    }

    /// Distinct neighbour ids, ascending.
    pub fn neighbors(&self, id: VertexId) -> Vec<VertexId> {
        let mut n: Vec<VertexId> = self
            .flower(id)
            .petals
            .iter()
            .map(|p| p.vertex)
            .filter(|&u| u != id)
            .collect();
        n.sort_unstable();
        n.dedup();
        n
    }

    pub fn boundary_edges(&self) -> Vec<Edge> {
        let mut count: HashMap<Edge, usize> = HashMap::new();
        for t in &self.triangles {
            for c in 0..3 {
                *count
                    .entry(Edge::canonical(
                        t.vertices[c],
                        t.vertices[(c + 1) % 3],
                        t.wraps[c],
                    ))
                    .or_default() += 1;
            }
        }
        let mut out: Vec<Edge> = count
            .into_iter()
            .filter(|&(_, n)| n == 1)
            .map(|(e, _)| e)
            .collect();
        out.sort();
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ids.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Vertices whose circles are removed by gadget surgery.
    pub fn gadget_centers(&self) -> BTreeSet<VertexId> {
        self.gadgets
            .iter()
            .flat_map(|g| g.centers.iter().copied())
            .collect()
    }

    /// Graph distance from the nearest boundary vertex (BFS over edges).
    pub fn boundary_distance(&self) -> BTreeMap<VertexId, usize> {
        let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::new();
        for v in self.boundary_ids() {
            dist.insert(v, 0);
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for u in self.neighbors(v) {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(u) {
                    e.insert(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }
}
