//! Byte-for-byte SVG snapshots. Set `ROSETTE_BLESS=1` to rewrite them after
//! an intended change.

use std::path::PathBuf;

use rosette_core::complex::demos;
use rosette_core::pipeline::{self, DesignParams, PipelineOutput};
use rosette_core::render::{Layer, StyleConfig};

fn golden(name: &str, out: &PipelineOutput) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.svg"));
    if std::env::var_os("ROSETTE_BLESS").is_some() {
        std::fs::write(&path, &out.svg).unwrap();
    }
    let want = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e} (run with ROSETTE_BLESS=1)", path.display()));
    assert!(
        want == out.svg,
        "{name}: SVG differs from {}",
        path.display()
    );
}

fn structure(out: &PipelineOutput) -> roxmltree::Document<'_> {
    let doc = roxmltree::Document::parse(&out.svg).expect("well-formed SVG");
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(
        root.tag_name().namespace(),
        Some("http://www.w3.org/2000/svg")
    );
    let view: Vec<f64> = root
        .attribute("viewBox")
        .unwrap()
        .split(' ')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(view.len() == 4 && view[2] > 0.0 && view[3] > 0.0);
    doc
}

#[test]
fn flower6_motif() {
    let out = pipeline::run(&demos::flower(6), &DesignParams::default()).unwrap();
    golden("flower6", &out);
    let doc = structure(&out);
    let lines = doc.descendants().filter(|n| n.has_tag_name("line")).count();
    assert_eq!(lines, out.stages.design.segments().len());
    assert_eq!(lines, 24);
}

#[test]
fn hex7_all_layers() {
    let params = DesignParams {
        style: StyleConfig::with_layers([
            Layer::Circles,
            Layer::Patch,
            Layer::Motif,
            Layer::RosetteLabels,
        ]),
        ..DesignParams::default()
    };
    let out = pipeline::run(&demos::hex_patch(2), &params).unwrap();
    golden("hex7-layers", &out);
    let doc = structure(&out);
    let count = |tag: &str| doc.descendants().filter(|n| n.has_tag_name(tag)).count();
    let s = &out.stages;
    assert_eq!(count("circle"), s.packing.circles.len());
    assert_eq!(count("polygon"), s.patch.polygons.len());
    assert_eq!(count("line"), s.design.segments().len());
    assert_eq!(count("text"), s.design.rosettes.len());
    let groups: Vec<_> = doc
        .root_element()
        .children()
        .filter_map(|n| n.attribute("id"))
        .collect();
    assert_eq!(groups, ["circles", "patch", "motif", "rosette-labels"]);
}
