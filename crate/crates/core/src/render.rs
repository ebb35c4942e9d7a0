//! Stroke-only SVG output for packings, patches and designs.
//!
//! Coordinates are written with six fixed decimals and the y axis flipped, so
//! identical scenes give identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::complex::Wrap;
use crate::geom::Point2;
use crate::motif::Design;
use crate::packing::Packing;
use crate::patch::Patch;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    Circles,
    Patch,
    Motif,
    RosetteLabels,
}

impl Layer {
    fn id(self) -> &'static str {
        match self {
            Layer::Circles => "circles",
            Layer::Patch => "patch",
            Layer::Motif => "motif",
            Layer::RosetteLabels => "rosette-labels",
        }
    }
}

/// Palette keys: `circle`, `cyclic`, `filler_pentagon`, `gadget_pentagon`,
/// `barrel_hexagon`, `motif`, `label`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StyleConfig {
    pub stroke_width: f64,
    pub palette: BTreeMap<String, String>,
    pub layers: BTreeSet<Layer>,
    pub margin: f64,
    pub background: Option<String>,
}

impl Default for StyleConfig {
    fn default() -> Self {
        let palette = [
            ("circle", "#9aa5b1"),
            ("cyclic", "#c0392b"),
            ("filler_pentagon", "#2471a3"),
            ("gadget_pentagon", "#1e8449"),
            ("barrel_hexagon", "#b9770e"),
            ("motif", "#1b2631"),
            ("label", "#6c3483"),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
        Self {
            stroke_width: 0.02,
            palette,
            layers: BTreeSet::from([Layer::Motif]),
            margin: 0.1,
            background: None,
        }
    }
}

impl StyleConfig {
    pub fn with_layers(layers: impl IntoIterator<Item = Layer>) -> Self {
        Self {
            layers: layers.into_iter().collect(),
            ..Self::default()
        }
    }

    fn color(&self, key: &str) -> String {
        escape(self.palette.get(key).map_or("#000000", String::as_str))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RenderError {
    #[error("nothing to draw")]
    EmptyScene,
    #[error("invalid style: {0}")]
    InvalidStyle(String),
}

/// What to draw. Each layer uses the part of the scene it needs and is
/// skipped when that part is missing.
#[derive(Debug, Clone, Copy)]
pub struct Scene<'a, T> {
    pub packing: Option<&'a Packing<T>>,
    pub patch: Option<&'a Patch<T>>,
    pub design: Option<&'a Design<T>>,
}

impl<'a, T> Default for Scene<'a, T> {
    fn default() -> Self {
        Self {
            packing: None,
            patch: None,
            design: None,
        }
    }
}

impl<'a, T: Scalar> Scene<'a, T> {
    pub fn packing(packing: &'a Packing<T>) -> Self {
        Self {
            packing: Some(packing),
            ..Self::default()
        }
    }

    pub fn patch(patch: &'a Patch<T>) -> Self {
        Self {
            patch: Some(patch),
            ..Self::default()
        }
    }

    pub fn design(design: &'a Design<T>) -> Self {
        Self {
            design: Some(design),
            ..Self::default()
        }
    }

    /// Lattice offsets to draw: the design's stamps, or just the origin.
    fn stamps(&self) -> Vec<Wrap> {
        self.design
            .map_or_else(|| vec![Wrap::ZERO], |d| d.stamps.clone())
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

#[derive(Default)]
struct Bounds {
    min: Option<(f64, f64)>,
    max: (f64, f64),
}

impl Bounds {
    fn add(&mut self, x: f64, y: f64, pad: f64) {
        let (lo, hi) = ((x - pad, y - pad), (x + pad, y + pad));
        match self.min {
            None => {
                self.min = Some(lo);
                self.max = hi;
            }
            Some((mx, my)) => {
                self.min = Some((mx.min(lo.0), my.min(lo.1)));
                self.max = (self.max.0.max(hi.0), self.max.1.max(hi.1));
            }
        }
    }
}

/// Renders `scene` as an SVG 1.1 document.
pub fn emit_svg<T: Scalar>(
    scene: &Scene<'_, T>,
    style: &StyleConfig,
) -> Result<String, RenderError> {
    if !(style.stroke_width > 0.0 && style.stroke_width.is_finite()) {
        return Err(RenderError::InvalidStyle(format!(
            "stroke_width must be positive, got {}",
            style.stroke_width
        )));
    }
    if !(style.margin >= 0.0 && style.margin.is_finite()) {
        return Err(RenderError::InvalidStyle(format!(
            "margin must be non-negative, got {}",
            style.margin
        )));
    }
    let mut bounds = Bounds::default();
    let mut groups: Vec<(Layer, String, Vec<String>)> = Vec::new();
    let stamps = scene.stamps();
    let pt = |p: Point2<T>, d: Point2<f64>| (p.x.f64() + d.x, -(p.y.f64() + d.y));

    for &layer in &style.layers {
        let mut items = Vec::new();
        let attrs;
        match layer {
            Layer::Circles => {
                let Some(packing) = scene.packing else {
                    continue;
                };
                attrs = format!("fill=\"none\" stroke=\"{}\"", style.color("circle"));
                for &w in &stamps {
                    let d = packing.shift(w).to_f64();
                    for c in packing.circles.values() {
                        let (x, y) = pt(c.center, d);
                        let r = c.radius.f64();
                        bounds.add(x, y, r);
                        items.push(format!(
                            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                            num(x),
                            num(y),
                            num(r)
                        ));
                    }
                }
            }
            Layer::Patch => {
                let Some(patch) = scene.patch else { continue };
                attrs = "fill=\"none\" stroke-linejoin=\"round\"".to_string();
                for &w in &stamps {
                    let d = patch.shift(w).to_f64();
                    for p in &patch.polygons {
                        let mut pts = String::new();
                        for (k, &q) in p.points.iter().enumerate() {
                            let (x, y) = pt(q, d);
                            bounds.add(x, y, 0.0);
                            if k > 0 {
                                pts.push(' ');
                            }
                            let _ = write!(pts, "{},{}", num(x), num(y));
                        }
                        items.push(format!(
                            "<polygon class=\"{}\" stroke=\"{}\" points=\"{}\"/>",
                            p.role.name(),
                            style.color(p.role.name()),
                            pts
                        ));
                    }
                }
            }
            Layer::Motif => {
                let Some(design) = scene.design else { continue };
                attrs = format!(
                    "fill=\"none\" stroke=\"{}\" stroke-linecap=\"round\"",
                    style.color("motif")
                );
                for (_, s) in design.segments() {
                    let (x1, y1) = pt(s.a, Point2::origin());
                    let (x2, y2) = pt(s.b, Point2::origin());
                    bounds.add(x1, y1, 0.0);
                    bounds.add(x2, y2, 0.0);
                    items.push(format!(
                        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                        num(x1),
                        num(y1),
                        num(x2),
                        num(y2)
                    ));
                }
            }
            Layer::RosetteLabels => {
                let Some(design) = scene.design else { continue };
                attrs = format!(
                    "fill=\"{}\" font-family=\"sans-serif\" font-size=\"{}\" text-anchor=\"middle\"",
                    style.color("label"),
                    num(style.stroke_width * 10.0)
                );
                for r in design.rosettes.values() {
                    let (x, y) = pt(r.center, Point2::origin());
                    bounds.add(x, y, 0.0);
                    items.push(format!(
                        "<text x=\"{}\" y=\"{}\">{}</text>",
                        num(x),
                        num(y),
                        r.order
                    ));
                }
            }
        }
        if !items.is_empty() {
            groups.push((layer, attrs, items));
        }
    }

    let Some((min_x, min_y)) = bounds.min else {
        return Err(RenderError::EmptyScene);
    };
    let m = style.margin;
    let (x, y) = (min_x - m, min_y - m);
    let (w, h) = (
        bounds.max.0 - min_x + 2.0 * m,
        bounds.max.1 - min_y + 2.0 * m,
    );

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        num(x),
        num(y),
        num(w),
        num(h)
    );
    if let Some(bg) = &style.background {
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
            num(x),
            num(y),
            num(w),
            num(h),
            escape(bg)
        );
    }
    for (layer, attrs, items) in groups {
        let _ = writeln!(
            out,
            "<g id=\"{}\" stroke-width=\"{}\" {}>",
            layer.id(),
            num(style.stroke_width),
            attrs
        );
        for e in items {
            out.push_str(&e);
            out.push('\n');
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('"', "&quot;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Topology;
    use crate::packing::Circle;

    fn unit_circle() -> Packing<f64> {
        Packing {
            topology: Topology::Disk,
            circles: BTreeMap::from([(
                0,
                Circle {
                    center: Point2::origin(),
                    radius: 1.0,
                },
            )]),
            tangencies: vec![],
            lattice: None,
        }
    }

    #[test]
    fn single_circle() {
        let p = unit_circle();
        let mut style = StyleConfig::with_layers([Layer::Circles]);
        style.margin = 0.5;
        let svg = emit_svg(&Scene::packing(&p), &style).unwrap();
        assert!(svg.contains("viewBox=\"-1.500000 -1.500000 3.000000 3.000000\""));
        assert_eq!(svg.matches("<circle ").count(), 1);
    }

    #[test]
    fn empty_scene() {
        let p = unit_circle();
        let style = StyleConfig::with_layers([Layer::Motif]);
        assert_eq!(
            emit_svg(&Scene::packing(&p), &style),
            Err(RenderError::EmptyScene)
        );
    }

    #[test]
    fn negative_zero_is_printed_plainly() {
        assert_eq!(num(-0.0), "0.000000");
        assert_eq!(num(-1e-9), "0.000000");
        assert_eq!(num(-0.5), "-0.500000");
    }

    #[test]
    fn palette_is_escaped() {
        let p = unit_circle();
        let mut style = StyleConfig::with_layers([Layer::Circles]);
        style
            .palette
            .insert("circle".into(), "\"/><script/>".into());
        let svg = emit_svg(&Scene::packing(&p), &style).unwrap();
        assert!(!svg.contains("<script"));
    }

    #[test]
    fn bad_style() {
        let p = unit_circle();
        let mut style = StyleConfig::with_layers([Layer::Circles]);
        style.stroke_width = 0.0;
        assert!(matches!(
            emit_svg(&Scene::packing(&p), &style),
            Err(RenderError::InvalidStyle(_))
        ));
    }
}
