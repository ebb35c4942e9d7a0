//! JSON file format for complexes.
//!
//! ```json
//! {
//!   "topology": "torus",
//!   "vertices": [{"id": 0, "x": 0.0, "y": 0.0}],
//!   "triangles": [[0, 0, 0], [0, 0, 0]],
//!   "wraps": [{"face": 0, "edge": 0, "wx": 1, "wy": 0}],
//!   "gadgets": []
//! }
//! ```
//!
//! A wrap entry `{from, to, wx, wy}` tags every directed edge `from -> to`
//! (and the reverse edge with the negated wrap). When two vertices are
//! joined by more than one edge, as on small tori, the entry names the
//! triangle corner instead: `{face, edge, wx, wy}` tags the directed edge
//! `triangles[face][edge] -> triangles[face][edge + 1]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::structure::Edge;
use super::{
    validate, Complex, Gadget, GadgetKind, Topology, Triangle, VertexId, VertexRecord, Wrap,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line of a syntax error.
    pub line: Option<usize>,
    pub column: Option<usize>,
    /// Path of the offending field, e.g. `triangles[3]`.
    pub field: Option<String>,
    pub message: String,
}

impl ParseError {
    fn at(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            line: None,
            column: None,
            field: Some(field.into()),
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column, &self.field) {
            (Some(l), Some(c), _) => write!(f, "line {l}, column {c}: ")?,
            (Some(l), None, _) => write!(f, "line {l}: ")?,
            (None, _, Some(field)) => write!(f, "{field}: ")?,
            _ => {}
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ParseError {}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        let line = (e.line() > 0).then_some(e.line());
        let column = (e.column() > 0).then_some(e.column());
        Self {
            line,
            column,
            field: None,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TopologyDoc {
    Disk,
    Torus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WrapDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    from: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    to: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    face: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge: Option<usize>,
    wx: i32,
    wy: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum GadgetKindDoc {
    Square,
    Bowtie,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GadgetDoc {
    kind: GadgetKindDoc,
    centers: Vec<VertexId>,
    rim: Vec<VertexId>,
}

/// Serde form of a complex file. Use [`ComplexDocument::into_complex`] to
/// resolve wraps and check references.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    topology: TopologyDoc,
    vertices: Vec<VertexDoc>,
    triangles: Vec<[VertexId; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    wraps: Vec<WrapDoc>,
    #[serde(default)]
    gadgets: Vec<GadgetDoc>,
}

impl ComplexDocument {
    pub fn from_complex(c: &Complex) -> Self {
        let vertices = c
            .vertices()
            .iter()
            .map(|v| VertexDoc {
                id: v.id,
                x: v.hint.map(|h| h[0]),
                y: v.hint.map(|h| h[1]),
            })
            .collect();
        let triangles = c.triangles().iter().map(|t| t.vertices).collect();
        let gadgets = c
            .gadgets()
            .iter()
            .map(|g| GadgetDoc {
                kind: match g.kind {
                    GadgetKind::Square => GadgetKindDoc::Square,
                    GadgetKind::Bowtie => GadgetKindDoc::Bowtie,
                },
                centers: g.centers.clone(),
                rim: g.rim.clone(),
            })
            .collect();
        let topology = match c.topology() {
            Topology::Disk => TopologyDoc::Disk,
            Topology::Torus => TopologyDoc::Torus,
        };
        Self {
            topology,
            vertices,
            triangles,
            wraps: wrap_entries(c.triangles()),
            gadgets,
        }
    }

    /// Resolves wraps and checks references, without validating topology.
    pub fn into_complex(self) -> Result<Complex, ParseError> {
        let topology = match self.topology {
            TopologyDoc::Disk => Topology::Disk,
            TopologyDoc::Torus => Topology::Torus,
        };
        let mut ids = BTreeSet::new();
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if !ids.insert(v.id) {
                return Err(ParseError::at(
                    format!("vertices[{i}]"),
                    format!("duplicate vertex id {}", v.id),
                ));
            }
            let hint = match (v.x, v.y) {
                (Some(x), Some(y)) if x.is_finite() && y.is_finite() => Some([x, y]),
                (None, None) => None,
                _ => {
                    return Err(ParseError::at(
                        format!("vertices[{i}]"),
                        "hint position needs finite x and y together",
                    ))
                }
            };
            vertices.push(VertexRecord { id: v.id, hint });
        }
        for (i, t) in self.triangles.iter().enumerate() {
            if let Some(v) = t.iter().find(|v| !ids.contains(v)) {
                return Err(ParseError::at(
                    format!("triangles[{i}]"),
                    format!("unknown vertex {v}"),
                ));
            }
        }
        for (i, g) in self.gadgets.iter().enumerate() {
            if let Some(v) = g.centers.iter().chain(&g.rim).find(|v| !ids.contains(v)) {
                return Err(ParseError::at(
                    format!("gadgets[{i}]"),
                    format!("unknown vertex {v}"),
                ));
            }
        }
        if topology == Topology::Disk && !self.wraps.is_empty() {
            return Err(ParseError::at("wraps", "wraps are only allowed on a torus"));
        }
        let wraps = resolve_wraps(&self.triangles, &self.wraps)?;
        let triangles: Vec<Triangle> = self
            .triangles
            .iter()
            .zip(wraps)
            .map(|(&v, w)| Triangle::with_wraps(v, w))
            .collect();
        for (i, t) in triangles.iter().enumerate() {
            if !t.wrap_sum().is_zero() {
                return Err(ParseError::at(
                    format!("triangles[{i}]"),
                    format!(
                        "inconsistent wraps: sum around face is {}, expected (0, 0)",
                        t.wrap_sum()
                    ),
                ));
            }
        }
        let gadgets = self
            .gadgets
            .into_iter()
            .map(|g| Gadget {
                kind: match g.kind {
                    GadgetKindDoc::Square => GadgetKind::Square,
                    GadgetKindDoc::Bowtie => GadgetKind::Bowtie,
                },
                centers: g.centers,
                rim: g.rim,
            })
            .collect();
        Ok(Complex::new(topology, vertices, triangles, gadgets))
    }
}

fn wrap_entries(triangles: &[Triangle]) -> Vec<WrapDoc> {
    let mut per_pair: BTreeMap<(VertexId, VertexId), BTreeSet<Edge>> = BTreeMap::new();
    for t in triangles {
        for c in 0..3 {
            let e = Edge::canonical(t.vertices[c], t.vertices[(c + 1) % 3], t.wraps[c]);
            per_pair.entry((e.a, e.b)).or_default().insert(e);
        }
    }
    let mut pairs = Vec::new();
    let mut corners = Vec::new();
    for (ti, t) in triangles.iter().enumerate() {
        for c in 0..3 {
            let (a, b, w) = (t.vertices[c], t.vertices[(c + 1) % 3], t.wraps[c]);
            if w.is_zero() {
                continue;
            }
            let unique = a != b && per_pair[&(a.min(b), a.max(b))].len() == 1;
            if unique {
                let (from, to, w) = if a < b { (a, b, w) } else { (b, a, -w) };
                pairs.push(WrapDoc {
                    from: Some(from),
                    to: Some(to),
                    face: None,
                    edge: None,
                    wx: w.x,
                    wy: w.y,
                });
            } else {
                corners.push(WrapDoc {
                    from: None,
                    to: None,
                    face: Some(ti),
                    edge: Some(c),
                    wx: w.x,
                    wy: w.y,
                });
            }
        }
    }
    pairs.sort_by_key(|d| (d.from, d.to));
    pairs.dedup();
    pairs.extend(corners);
    pairs
}

fn resolve_wraps(
    triangles: &[[VertexId; 3]],
    docs: &[WrapDoc],
) -> Result<Vec<[Wrap; 3]>, ParseError> {
    let mut by_pair: BTreeMap<(VertexId, VertexId), Wrap> = BTreeMap::new();
    let mut by_corner: BTreeMap<(usize, usize), Wrap> = BTreeMap::new();
    let directed: BTreeSet<(VertexId, VertexId)> = triangles
        .iter()
        .flat_map(|t| (0..3).map(move |c| (t[c], t[(c + 1) % 3])))
        .collect();
    for (i, d) in docs.iter().enumerate() {
        let field = format!("wraps[{i}]");
        let w = Wrap::new(d.wx, d.wy);
        match (d.from, d.to, d.face, d.edge) {
            (Some(a), Some(b), None, None) => {
                if !directed.contains(&(a, b)) && !directed.contains(&(b, a)) {
                    return Err(ParseError::at(
                        field,
                        format!("wrap on {a}-{b}, which is not an edge"),
                    ));
                }
                let (key, w) = if a <= b { ((a, b), w) } else { ((b, a), -w) };
                if let Some(prev) = by_pair.insert(key, w) {
                    if prev != w {
                        return Err(ParseError::at(
                            field,
                            format!("inconsistent wraps: edge {a}-{b} tagged twice"),
                        ));
                    }
                }
            }
            (None, None, Some(face), Some(edge)) => {
                if face >= triangles.len() || edge > 2 {
                    return Err(ParseError::at(
                        field,
                        format!("no triangle corner ({face}, {edge})"),
                    ));
                }
                if by_corner
                    .insert((face, edge), w)
                    .is_some_and(|prev| prev != w)
                {
                    return Err(ParseError::at(
                        field,
                        "inconsistent wraps: corner tagged twice",
                    ));
                }
            }
            _ => {
                return Err(ParseError::at(
                    field,
                    "wrap needs either from/to or face/edge",
                ))
            }
        }
    }
    let mut out = Vec::with_capacity(triangles.len());
    for (ti, t) in triangles.iter().enumerate() {
        let mut ws = [Wrap::ZERO; 3];
        for (c, w) in ws.iter_mut().enumerate() {
            let (a, b) = (t[c], t[(c + 1) % 3]);
            if let Some(&cw) = by_corner.get(&(ti, c)) {
                *w = cw;
            } else if a < b {
                *w = by_pair.get(&(a, b)).copied().unwrap_or_default();
            } else if b < a {
                *w = -by_pair.get(&(b, a)).copied().unwrap_or_default();
            } else if by_pair.contains_key(&(a, a)) {
                return Err(ParseError::at(
                    format!("triangles[{ti}]"),
                    format!("loop edge {a}-{a} needs a face/edge wrap entry"),
                ));
            }
        }
        out.push(ws);
    }
    Ok(out)
}

/// Parses a complex document and validates it.
pub fn parse(text: &[u8]) -> Result<Complex, ParseError> {
    let c = parse_unchecked(text)?;
    let report = validate(&c);
    match report.violations.first() {
        None => Ok(c),
        Some(first) => Err(ParseError {
            line: None,
            column: None,
            field: Some(first.location.to_string()),
            message: report.to_string(),
        }),
    }
}

/// Parses a complex document, checking syntax, references and wrap sums
/// but not topology.
pub fn parse_unchecked(text: &[u8]) -> Result<Complex, ParseError> {
    let text = std::str::from_utf8(text).map_err(|e| ParseError {
        line: None,
        column: None,
        field: None,
        message: format!("input is not UTF-8: {e}"),
    })?;
    let doc: ComplexDocument = serde_json::from_str(text)?;
    doc.into_complex()
}

/// Canonical pretty-printed document with a trailing newline.
pub fn serialize(complex: &Complex) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&ComplexDocument::from_complex(complex))
        .expect("document serializes");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::demos;

    #[test]
    fn single_triangle_round_trip() {
        let c = Complex::disk(&[[1, 2, 3]]);
        let text = serialize(&c);
        assert_eq!(parse(&text).unwrap(), c);
        assert_eq!(serialize(&parse(&text).unwrap()), text);
    }

    #[test]
    fn demos_round_trip() {
        for name in demos::DEMO_NAMES {
            let c = demos::by_name(name).unwrap();
            let back = parse(&serialize(&c)).unwrap();
            assert_eq!(back, c, "{name}");
        }
    }

    #[test]
    fn torus_uses_pair_entries_when_unambiguous() {
        let text = String::from_utf8(serialize(&demos::torus_grid(3, 3))).unwrap();
        assert!(text.contains("\"from\""));
        assert!(!text.contains("\"face\""));
        let text = String::from_utf8(serialize(&demos::torus_hex())).unwrap();
        assert!(text.contains("\"face\""));
    }

    #[test]
    fn unknown_vertex() {
        let doc = br#"{"topology":"disk","vertices":[{"id":1},{"id":2}],"triangles":[[1,2,3]]}"#;
        let e = parse(doc).unwrap_err();
        assert!(e.message.contains("unknown vertex"), "{e}");
        assert_eq!(e.field.as_deref(), Some("triangles[0]"));
    }

    #[test]
    fn corrupted_torus_wraps() {
        let text = String::from_utf8(serialize(&demos::torus_grid(3, 3))).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let first = &mut v["wraps"][0]["wx"];
        *first = serde_json::json!(first.as_i64().unwrap() + 1);
        let e = parse(v.to_string().as_bytes()).unwrap_err();
        assert!(e.message.contains("inconsistent wraps"), "{e}");
    }

    #[test]
    fn unknown_field_and_syntax_errors_carry_position() {
        let e = parse(b"{\"topology\":\"disk\",\n\"vertices\":[],\n\"colour\":1}").unwrap_err();
        assert!(e.message.contains("unknown field"), "{e}");
        assert_eq!(e.line, Some(3));
        let e = parse(b"{\n\"topology\": disk}").unwrap_err();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn parse_reports_invariant_violations() {
        let doc = br#"{"topology":"disk","vertices":[{"id":1},{"id":2},{"id":3},{"id":4},{"id":5}],
                       "triangles":[[1,2,3],[1,4,5]]}"#;
        let e = parse(doc).unwrap_err();
        assert!(e.message.contains("pinch vertex 1"), "{e}");
        assert!(parse_unchecked(doc).is_ok());
    }
}
