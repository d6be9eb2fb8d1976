use bineval::counts::Label::{Negative as N, Positive as P};
use bineval::report::{render_json, render_svg, to_canvas, EvaluationReport, ReportMeta};
use bineval::{roc_points, ConfusionCounts, MetricValue, RocCurve, ScoredSample};
use proptest::prelude::*;

fn svg_doc(svg: &str) -> roxmltree::Document<'_> {
    roxmltree::Document::parse(svg).expect("well-formed SVG")
}

fn polyline_points(doc: &roxmltree::Document<'_>) -> Vec<(f64, f64)> {
    let poly = doc
        .descendants()
        .find(|n| n.has_tag_name("polyline"))
        .expect("polyline");
    poly.attribute("points")
        .unwrap()
        .split_whitespace()
        .map(|p| {
            let (x, y) = p.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect()
}

fn diagonal_ends(doc: &roxmltree::Document<'_>) -> ((f64, f64), (f64, f64)) {
    let d = doc
        .descendants()
        .find(|n| n.attribute("id") == Some("diagonal"))
        .expect("diagonal");
    assert!(d.has_tag_name("line"));
    assert!(d.attribute("stroke-dasharray").is_some());
    let g = |k: &str| d.attribute(k).unwrap().parse::<f64>().unwrap();
    ((g("x1"), g("y1")), (g("x2"), g("y2")))
}

#[test]
fn svg_uses_only_allowed_elements() {
    let curve = roc_points(&[ScoredSample::new(0.3, P), ScoredSample::new(0.1, N)]).unwrap();
    let svg = render_svg(&curve, "t");
    let doc = svg_doc(&svg);
    let root = doc.root_element();
    assert_eq!(root.attribute("width"), Some("640"));
    assert_eq!(root.attribute("height"), Some("480"));
    for n in root.descendants().filter(|n| n.is_element()).skip(1) {
        assert!(
            ["rect", "line", "polyline", "text"].contains(&n.tag_name().name()),
            "unexpected element {}",
            n.tag_name().name()
        );
    }
}

#[test]
fn diagonal_curve_coincides_with_chance_line() {
    let curve = roc_points(&[ScoredSample::new(0.5, P), ScoredSample::new(0.5, N)]).unwrap();
    let svg = render_svg(&curve, "ties");
    let doc = svg_doc(&svg);
    let (a, b) = diagonal_ends(&doc);
    assert_eq!(polyline_points(&doc), vec![a, b]);
    // data (0,0) is bottom-left and (1,1) top-right of the plot area
    assert_eq!(a, to_canvas(0.0, 0.0));
    assert_eq!(b, to_canvas(1.0, 1.0));
    assert!(a.0 < b.0 && a.1 > b.1);
    assert_eq!(a, (50.0, 430.0));
    assert_eq!(b, (590.0, 50.0));
}

#[test]
fn perfect_curve_reaches_top_left() {
    let curve = roc_points(&[
        ScoredSample::new(0.9, P),
        ScoredSample::new(0.8, P),
        ScoredSample::new(0.2, N),
    ])
    .unwrap();
    let svg = render_svg(&curve, "perfect");
    let doc = svg_doc(&svg);
    assert!(polyline_points(&doc).contains(&to_canvas(0.0, 1.0)));
    assert!(svg.contains(">AUC = 1.000<"));
}

#[test]
fn undefined_metrics_are_null() {
    let r = EvaluationReport::new(ConfusionCounts::new(0, 0, 3, 0), ReportMeta::default());
    let v: serde_json::Value = serde_json::from_str(&render_json(&r)).unwrap();
    assert!(v["metrics"]["pre"].is_null());
    assert!(v["metrics"]["mcc"].is_null());
    assert_eq!(v["metrics"]["tpr"], 0.0);
}

fn arb_counts() -> impl Strategy<Value = ConfusionCounts> {
    (0u64..1 << 50, 0u64..1 << 50, 0u64..1 << 50, 0u64..1 << 50)
        .prop_map(|(a, b, c, d)| ConfusionCounts::new(a, b, c, d))
}

proptest! {
    #[test]
    fn json_round_trips_exactly(c in arb_counts()) {
        let r = EvaluationReport::new(c, ReportMeta::default());
        let v: serde_json::Value = serde_json::from_str(&render_json(&r)).unwrap();
        prop_assert_eq!(v["counts"]["tp"].as_u64(), Some(c.tp));
        prop_assert_eq!(v["counts"]["fp"].as_u64(), Some(c.fp));
        prop_assert_eq!(v["counts"]["fn"].as_u64(), Some(c.fn_));
        prop_assert_eq!(v["counts"]["tn"].as_u64(), Some(c.tn));
        for (name, value) in r.metrics.entries() {
            match value {
                MetricValue::Defined(x) => prop_assert_eq!(v["metrics"][name].as_f64().unwrap().to_bits(), x.to_bits()),
                MetricValue::Undefined => prop_assert!(v["metrics"][name].is_null()),
            }
        }
    }

    #[test]
    fn svg_is_well_formed_and_deterministic(
        scores in prop::collection::vec((0u8..30, any::<bool>()), 2..60),
        title in "[ -~]{0,20}",
    ) {
        let mut samples: Vec<ScoredSample> = scores
            .iter()
            .map(|&(k, pos)| ScoredSample::new(k as f64 / 7.0, if pos { P } else { N }))
            .collect();
        samples.push(ScoredSample::new(0.5, P));
        samples.push(ScoredSample::new(0.5, N));
        let curve: RocCurve = roc_points(&samples).unwrap();
        let a = render_svg(&curve, &title);
        prop_assert_eq!(&a, &render_svg(&curve, &title));
        let doc = svg_doc(&a);
        let pts = polyline_points(&doc);
        prop_assert_eq!(pts.len(), curve.points.len());
        prop_assert_eq!(pts[0], to_canvas(0.0, 0.0));
        prop_assert_eq!(*pts.last().unwrap(), to_canvas(1.0, 1.0));
    }
}
