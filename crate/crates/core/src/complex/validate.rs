use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::structure::{Edge, LinkProblem, Structure};
use super::{Complex, Gadget, GadgetKind, Topology, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Location {
    Complex,
    Vertex(VertexId),
    Edge(VertexId, VertexId),
    Triangle(usize),
    Gadget(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Complex => f.write_str("complex"),
            Location::Vertex(v) => write!(f, "vertex {v}"),
            Location::Edge(a, b) => write!(f, "edge {a}-{b}"),
            Location::Triangle(t) => write!(f, "triangle #{t}"),
            Location::Gadget(g) => write!(f, "gadget #{g}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    Empty,
    DuplicateVertex,
    UnknownVertex,
    DegenerateTriangle,
    InconsistentWraps,
    WrapOnDisk,
    IsolatedVertex,
    NonManifoldEdge,
    InconsistentOrientation,
    OpenTorus,
    PinchVertex,
    Disconnected,
    NotSimplyConnected,
    GadgetShape,
    GadgetDegree,
    GadgetRim,
    GadgetOverlap,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: Location,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Everything wrong with a complex. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, location: Location, message: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            location,
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

/// Checks every structural invariant of `complex`. Violations are data, so
/// this never fails.
pub fn validate(complex: &Complex) -> ValidationReport {
    let mut r = ValidationReport::default();
    use ViolationKind as K;

    if complex.triangles().is_empty() {
        r.push(K::Empty, Location::Complex, "complex has no triangles");
        return r;
    }

    let mut seen = BTreeSet::new();
    for v in complex.vertices() {
        if !seen.insert(v.id) {
            r.push(
                K::DuplicateVertex,
                Location::Vertex(v.id),
                format!("duplicate vertex id {}", v.id),
            );
        }
    }
    let torus = complex.topology() == Topology::Torus;

    let mut structural_ok = true;
    for (ti, t) in complex.triangles().iter().enumerate() {
        for &v in &t.vertices {
            if !seen.contains(&v) {
                r.push(
                    K::UnknownVertex,
                    Location::Triangle(ti),
                    format!("unknown vertex {v}"),
                );
                structural_ok = false;
            }
        }
        for c in 0..3 {
            let (a, b) = (t.vertices[c], t.vertices[(c + 1) % 3]);
            if a == b && t.wraps[c].is_zero() {
                r.push(
                    K::DegenerateTriangle,
                    Location::Triangle(ti),
                    format!("degenerate edge {a}-{b}"),
                );
                structural_ok = false;
            }
            if !torus && !t.wraps[c].is_zero() {
                r.push(
                    K::WrapOnDisk,
                    Location::Triangle(ti),
                    "wrap tags are only allowed on a torus",
                );
                structural_ok = false;
            }
        }
        if torus && !t.wrap_sum().is_zero() {
            r.push(
                K::InconsistentWraps,
                Location::Triangle(ti),
                format!("inconsistent wraps: sum around face is {}", t.wrap_sum()),
            );
            structural_ok = false;
        }
    }
    if !structural_ok {
        return r;
    }

    // Directed edge multiplicities.
    let mut directed: BTreeMap<(VertexId, VertexId, super::Wrap), usize> = BTreeMap::new();
    let mut undirected: BTreeMap<Edge, usize> = BTreeMap::new();
    for t in complex.triangles() {
        for c in 0..3 {
            let (a, b, w) = (t.vertices[c], t.vertices[(c + 1) % 3], t.wraps[c]);
            *directed.entry((a, b, w)).or_default() += 1;
            *undirected.entry(Edge::canonical(a, b, w)).or_default() += 1;
        }
    }
    for (&(a, b, _), &n) in &directed {
        if n > 1 {
            r.push(
                K::InconsistentOrientation,
                Location::Edge(a, b),
                format!("directed edge {a}->{b} used by {n} triangles (inconsistent orientation)"),
            );
        }
    }
    for (e, &n) in &undirected {
        if n > 2 {
            r.push(
                K::NonManifoldEdge,
                Location::Edge(e.a, e.b),
                format!("edge shared by {n} triangles"),
            );
        } else if torus && n != 2 {
            r.push(
                K::OpenTorus,
                Location::Edge(e.a, e.b),
                "torus edge must belong to exactly two triangles",
            );
        }
    }

    let used: BTreeSet<VertexId> = complex
        .triangles()
        .iter()
        .flat_map(|t| t.vertices)
        .collect();
    for v in complex.vertex_ids() {
        if !used.contains(&v) {
            r.push(
                K::IsolatedVertex,
                Location::Vertex(v),
                format!("isolated vertex {v}"),
            );
        }
    }
    if !r.is_empty() {
        return r;
    }

    let structure = match Structure::analyze(complex) {
        Ok(s) => s,
        Err(problems) => {
            for p in problems {
                match p {
                    LinkProblem::Isolated(v) => {
                        r.push(K::IsolatedVertex, Location::Vertex(v), format!("isolated vertex {v}"))
                    }
                    LinkProblem::Pinch(v) => r.push(
                        K::PinchVertex,
                        Location::Vertex(v),
                        format!("not simply connected / pinch vertex {v}: its link is not a single cycle or path"),
                    ),
                }
            }
            return r;
        }
    };

    if let Some(n) = disconnected_components(complex) {
        r.push(
            K::Disconnected,
            Location::Complex,
            format!("triangles form {n} edge-connected components"),
        );
    }

    let chi = structure.euler_characteristic();
    let expected = if torus { 0 } else { 1 };
    if chi != expected {
        let what = if torus { "torus" } else { "disk" };
        r.push(
            K::NotSimplyConnected,
            Location::Complex,
            format!("not simply connected: Euler characteristic V - E + F = {chi}, a {what} needs {expected}"),
        );
    }
    if torus && structure.ids().iter().any(|&v| structure.is_boundary(v)) {
        r.push(
            K::OpenTorus,
            Location::Complex,
            "torus has boundary vertices",
        );
    }

    validate_gadgets(&structure, complex.gadgets(), &mut r);
    r
}

fn disconnected_components(complex: &Complex) -> Option<usize> {
    let tris = complex.triangles();
    let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (i, t) in tris.iter().enumerate() {
        for c in 0..3 {
            by_edge
                .entry(Edge::canonical(
                    t.vertices[c],
                    t.vertices[(c + 1) % 3],
                    t.wraps[c],
                ))
                .or_default()
                .push(i);
        }
    }
    let mut comp = vec![usize::MAX; tris.len()];
    let mut count = 0;
    for s in 0..tris.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = count;
        while let Some(i) = stack.pop() {
            let t = &tris[i];
            for c in 0..3 {
                let e = Edge::canonical(t.vertices[c], t.vertices[(c + 1) % 3], t.wraps[c]);
                for &j in &by_edge[&e] {
                    if comp[j] == usize::MAX {
                        comp[j] = count;
                        stack.push(j);
                    }
                }
            }
        }
        count += 1;
    }
    (count > 1).then_some(count)
}

fn is_rotation(cycle: &[VertexId], target: &[VertexId]) -> bool {
    let n = cycle.len();
    if n != target.len() {
        return false;
    }
    (0..n).any(|s| (0..n).all(|i| cycle[(s + i) % n] == target[i]))
        || (0..n).any(|s| (0..n).all(|i| cycle[(s + n - i) % n] == target[i]))
}

fn validate_gadgets(s: &Structure, gadgets: &[Gadget], r: &mut ValidationReport) {
    use ViolationKind as K;
    let mut center_owner: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (gi, g) in gadgets.iter().enumerate() {
        let loc = Location::Gadget(gi);
        let (n_centers, n_rim) = match g.kind {
            GadgetKind::Square => (1, 4),
            GadgetKind::Bowtie => (2, 4),
        };
        if g.centers.len() != n_centers || g.rim.len() != n_rim {
            r.push(
                K::GadgetShape,
                loc,
                format!(
                    "{} gadget needs {n_centers} centre(s) and {n_rim} rim vertices",
                    g.kind
                ),
            );
            continue;
        }
        if let Some(&v) = g.centers.iter().chain(&g.rim).find(|&&v| !s.contains(v)) {
            r.push(
                K::UnknownVertex,
                loc,
                format!("gadget references unknown vertex {v}"),
            );
            continue;
        }
        for &c in &g.centers {
            if let Some(prev) = center_owner.insert(c, gi) {
                r.push(
                    K::GadgetOverlap,
                    loc.clone(),
                    format!("centre {c} already used by gadget #{prev}"),
                );
            }
        }
        let mut degree_ok = true;
        for &c in &g.centers {
            if s.is_boundary(c) || s.degree(c) != 4 {
                r.push(
                    K::GadgetDegree,
                    loc.clone(),
                    format!(
                        "gadget degree constraint: centre {c} must be an interior vertex of degree 4 (has degree {}{})",
                        s.degree(c),
                        if s.is_boundary(c) { ", on boundary" } else { "" }
                    ),
                );
                degree_ok = false;
            }
        }
        if !degree_ok {
            continue;
        }
        let link = |v: VertexId| -> Vec<VertexId> {
            s.flower(v).petals.iter().map(|p| p.vertex).collect()
        };
        match g.kind {
            GadgetKind::Square => {
                if !is_rotation(&link(g.centers[0]), &g.rim) {
                    r.push(
                        K::GadgetRim,
                        loc,
                        "square rim must be the link cycle of its centre",
                    );
                }
            }
            GadgetKind::Bowtie => {
                let (a, b) = (g.centers[0], g.centers[1]);
                let la = link(a);
                let lb = link(b);
                let [c, d, e, f] = [g.rim[0], g.rim[1], g.rim[2], g.rim[3]];
                if !la.contains(&b) {
                    r.push(
                        K::GadgetRim,
                        loc,
                        format!("bowtie centres {a} and {b} must share an edge"),
                    );
                    continue;
                }
                let shared: BTreeSet<VertexId> = la
                    .iter()
                    .copied()
                    .filter(|v| lb.contains(v) && *v != a && *v != b)
                    .collect();
                let want: BTreeSet<VertexId> = [d, f].into_iter().collect();
                if shared != want || d == f {
                    r.push(
                        K::GadgetRim,
                        loc,
                        format!(
                            "bowtie centres must share exactly the split-arc vertices {d} and {f}"
                        ),
                    );
                    continue;
                }
                if !la.contains(&c) || lb.contains(&c) || !lb.contains(&e) || la.contains(&e) {
                    r.push(
                        K::GadgetRim,
                        loc,
                        format!("bowtie rim vertex {c} must touch only {a} and {e} only {b}"),
                    );
                    continue;
                }
                for i in 0..4 {
                    let (u, w) = (g.rim[i], g.rim[(i + 1) % 4]);
                    if !s.neighbors(u).contains(&w) {
                        r.push(
                            K::GadgetRim,
                            loc.clone(),
                            format!("bowtie rim {u}-{w} is not an edge"),
                        );
                    }
                }
            }
        }
    }
    // Removed circles may not touch circles removed by another gadget.
    for (gi, g) in gadgets.iter().enumerate() {
        for &c in &g.centers {
            if !s.contains(c) {
                continue;
            }
            for u in s.neighbors(c) {
                if let Some(&other) = center_owner.get(&u) {
                    if other != gi {
                        r.push(
                            K::GadgetOverlap,
                            Location::Gadget(gi),
                            format!("centre {c} is adjacent to centre {u} of gadget #{other}"),
                        );
                    }
                }
            }
        }
        for &v in &g.rim {
            if center_owner.contains_key(&v) {
                r.push(
                    K::GadgetOverlap,
                    Location::Gadget(gi),
                    format!("rim vertex {v} is another gadget's centre"),
                );
            }
        }
    }
}
