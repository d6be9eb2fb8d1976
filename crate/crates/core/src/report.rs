//! Text, JSON and SVG renderings of evaluation results.
//!
//! Text output is a fixed-order table with six decimals per metric. JSON
//! output uses the key order
//! `counts{tp,fp,fn,tn}`, `metrics{err,acc,fpr,tpr,pre,rec,f1,sen,spc,tnr,mcc}`,
//! optional `roc{points[{fpr,tpr,threshold}],auc}`, then `meta`. Undefined
//! metrics are `null` and the infinite threshold of the first ROC point is
//! `null`. Floats use the shortest representation that round-trips.
//!
//! All renderers are deterministic: identical inputs give identical bytes.

use std::fmt::Write as _;

use serde::Serialize;

use crate::counts::ConfusionCounts;
use crate::ingest::InputMode;
use crate::metrics::{all_metrics, MetricSet, MetricValue};
use crate::roc::RocCurve;

/// How undefined metrics are shown. The computed values are never changed.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum ZeroDivision {
    #[default]
    Undefined,
    Zero,
}

impl ZeroDivision {
    pub fn as_str(self) -> &'static str {
        match self {
            ZeroDivision::Undefined => "undefined",
            ZeroDivision::Zero => "zero",
        }
    }

    fn apply(self, v: MetricValue) -> Option<f64> {
        match (self, v) {
            (_, MetricValue::Defined(x)) => Some(x),
            (ZeroDivision::Zero, MetricValue::Undefined) => Some(0.0),
            (ZeroDivision::Undefined, MetricValue::Undefined) => None,
        }
    }
}

/// Run configuration and input accounting echoed into every report.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportMeta {
    pub input: String,
    pub mode: InputMode,
    pub positive_label: String,
    pub negative_label: Option<String>,
    pub delimiter: char,
    pub has_header: bool,
    pub strict: bool,
    pub threshold: Option<f64>,
    pub zero_division: ZeroDivision,
    pub records_read: usize,
    pub records_accepted: usize,
}

impl Default for ReportMeta {
    fn default() -> Self {
        ReportMeta {
            input: "-".into(),
            mode: InputMode::HardLabels,
            positive_label: "1".into(),
            negative_label: None,
            delimiter: ',',
            has_header: false,
            strict: false,
            threshold: None,
            zero_division: ZeroDivision::Undefined,
            records_read: 0,
            records_accepted: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationReport {
    pub counts: ConfusionCounts,
    pub metrics: MetricSet,
    curve: Option<RocCurve>,
    pub meta: ReportMeta,
}

impl EvaluationReport {
    pub fn new(counts: ConfusionCounts, meta: ReportMeta) -> Self {
        EvaluationReport {
            counts,
            metrics: all_metrics(&counts),
            curve: None,
            meta,
        }
    }

    pub fn with_curve(mut self, curve: RocCurve) -> Self {
        self.curve = Some(curve);
        self
    }

    pub fn curve(&self) -> Option<&RocCurve> {
        self.curve.as_ref()
    }

    /// Present exactly when a curve is attached.
    pub fn auc(&self) -> Option<f64> {
        self.curve.as_ref().map(|c| c.auc)
    }
}

fn fmt_metric(v: MetricValue, policy: ZeroDivision) -> String {
    match policy.apply(v) {
        Some(x) => format!("{x:.6}"),
        None => "undefined".to_string(),
    }
}

fn write_meta(out: &mut String, m: &ReportMeta) {
    let threshold = m.threshold.map_or_else(|| "none".to_string(), |t| t.to_string());
    let negative = m.negative_label.as_deref().unwrap_or("<any other>");
    let _ = writeln!(out, "input: {}", m.input);
    let _ = writeln!(out, "mode: {}", m.mode.as_str());
    let _ = writeln!(out, "positive_label: {}", m.positive_label);
    let _ = writeln!(out, "negative_label: {negative}");
    let _ = writeln!(out, "delimiter: {:?}", m.delimiter);
    let _ = writeln!(out, "header: {}", m.has_header);
    let _ = writeln!(out, "strict: {}", m.strict);
    let _ = writeln!(out, "threshold: {threshold}");
    let _ = writeln!(out, "zero_division: {}", m.zero_division.as_str());
    let _ = writeln!(out, "records_read: {}", m.records_read);
    let _ = writeln!(out, "records_accepted: {}", m.records_accepted);
    let _ = writeln!(
        out,
        "records_failed: {}",
        m.records_read - m.records_accepted.min(m.records_read)
    );
}

fn write_curve(out: &mut String, curve: &RocCurve) {
    let _ = writeln!(out, "ROC fpr tpr threshold");
    for p in &curve.points {
        let _ = writeln!(out, "{:.6} {:.6} {}", p.fpr, p.tpr, p.threshold);
    }
    let _ = writeln!(out, "AUC {:.6}", curve.auc);
}

/// Human-readable report: meta block, confusion matrix (rows actual,
/// columns predicted), one line per metric, then the ROC section if a curve
/// is attached.
pub fn render_text(r: &EvaluationReport) -> String {
    let mut out = String::new();
    write_meta(&mut out, &r.meta);
    let c = &r.counts;
    let w = [c.tp, c.fp, c.fn_, c.tn]
        .iter()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1)
        .max(6);
    let _ = writeln!(out);
    let _ = writeln!(out, "confusion matrix (rows: actual, columns: predicted)");
    let _ = writeln!(out, "{:8} {:>w$} {:>w$}", "", "pred P", "pred N");
    let _ = writeln!(out, "{:8} {:>w$} {:>w$}", "actual P", c.tp, c.fn_);
    let _ = writeln!(out, "{:8} {:>w$} {:>w$}", "actual N", c.fp, c.tn);
    let _ = writeln!(out);
    for (name, v) in r.metrics.entries() {
        let _ = writeln!(
            out,
            "{} {}",
            name.to_ascii_uppercase(),
            fmt_metric(v, r.meta.zero_division)
        );
    }
    if let Some(curve) = &r.curve {
        let _ = writeln!(out);
        write_curve(&mut out, curve);
    }
    out
}

/// Curve-only text report used by the `roc` command; ends with the AUC line.
pub fn render_roc_text(curve: &RocCurve, meta: &ReportMeta) -> String {
    let mut out = String::new();
    write_meta(&mut out, meta);
    let _ = writeln!(out);
    write_curve(&mut out, curve);
    out
}

#[derive(Serialize)]
struct CountsJson {
    tp: u64,
    fp: u64,
    #[serde(rename = "fn")]
    fn_: u64,
    tn: u64,
}

#[derive(Serialize)]
struct MetricsJson {
    err: Option<f64>,
    acc: Option<f64>,
    fpr: Option<f64>,
    tpr: Option<f64>,
    pre: Option<f64>,
    rec: Option<f64>,
    f1: Option<f64>,
    sen: Option<f64>,
    spc: Option<f64>,
    tnr: Option<f64>,
    mcc: Option<f64>,
}

#[derive(Serialize)]
struct PointJson {
    fpr: f64,
    tpr: f64,
    threshold: Option<f64>,
}

#[derive(Serialize)]
struct RocJson {
    points: Vec<PointJson>,
    auc: f64,
}

#[derive(Serialize)]
struct MetaJson<'a> {
    input: &'a str,
    mode: &'static str,
    positive_label: &'a str,
    negative_label: Option<&'a str>,
    delimiter: String,
    header: bool,
    strict: bool,
    threshold: Option<f64>,
    zero_division: &'static str,
    records_read: usize,
    records_accepted: usize,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    counts: Option<CountsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<MetricsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    roc: Option<RocJson>,
    meta: MetaJson<'a>,
}

fn roc_json(curve: &RocCurve) -> RocJson {
    RocJson {
        points: curve
            .points
            .iter()
            .map(|p| PointJson {
                fpr: p.fpr,
                tpr: p.tpr,
                threshold: p.threshold.is_finite().then_some(p.threshold),
            })
            .collect(),
        auc: curve.auc,
    }
}

fn meta_json(m: &ReportMeta) -> MetaJson<'_> {
    MetaJson {
        input: &m.input,
        mode: m.mode.as_str(),
        positive_label: &m.positive_label,
        negative_label: m.negative_label.as_deref(),
        delimiter: m.delimiter.to_string(),
        header: m.has_header,
        strict: m.strict,
        threshold: m.threshold,
        zero_division: m.zero_division.as_str(),
        records_read: m.records_read,
        records_accepted: m.records_accepted,
    }
}

fn to_json(doc: &ReportJson<'_>) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report JSON is always serializable");
    s.push('\n');
    s
}

pub fn render_json(r: &EvaluationReport) -> String {
    let z = r.meta.zero_division;
    let m = &r.metrics;
    to_json(&ReportJson {
        counts: Some(CountsJson {
            tp: r.counts.tp,
            fp: r.counts.fp,
            fn_: r.counts.fn_,
            tn: r.counts.tn,
        }),
        metrics: Some(MetricsJson {
            err: z.apply(m.err),
            acc: z.apply(m.acc),
            fpr: z.apply(m.fpr),
            tpr: z.apply(m.tpr),
            pre: z.apply(m.pre),
            rec: z.apply(m.rec),
            f1: z.apply(m.f1),
            sen: z.apply(m.sen),
            spc: z.apply(m.spc),
            tnr: z.apply(m.tnr),
            mcc: z.apply(m.mcc),
        }),
        roc: r.curve.as_ref().map(roc_json),
        meta: meta_json(&r.meta),
    })
}

/// JSON document with only the `roc` and `meta` keys.
pub fn render_roc_json(curve: &RocCurve, meta: &ReportMeta) -> String {
    to_json(&ReportJson {
        counts: None,
        metrics: None,
        roc: Some(roc_json(curve)),
        meta: meta_json(meta),
    })
}

pub const SVG_WIDTH: f64 = 640.0;
pub const SVG_HEIGHT: f64 = 480.0;
pub const SVG_MARGIN: f64 = 50.0;

/// Maps ROC data coordinates onto the SVG canvas. `(0, 0)` lands on the
/// bottom-left corner of the plot area and `(1, 1)` on the top-right.
pub fn to_canvas(fpr: f64, tpr: f64) -> (f64, f64) {
    let plot_w = SVG_WIDTH - 2.0 * SVG_MARGIN;
    let plot_h = SVG_HEIGHT - 2.0 * SVG_MARGIN;
    (
        SVG_MARGIN + fpr * plot_w,
        SVG_HEIGHT - SVG_MARGIN - tpr * plot_h,
    )
}

fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Standalone 640×480 SVG plot of the curve with axes, tick labels, a dashed
/// chance diagonal and an AUC legend. Uses only `rect`, `line`, `polyline`
/// and `text` elements.
pub fn render_svg(curve: &RocCurve, title: &str) -> String {
    let mut s = String::new();
    let (x0, y0) = to_canvas(0.0, 0.0);
    let (x1, y1) = to_canvas(1.0, 1.0);

    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = SVG_WIDTH,
        h = SVG_HEIGHT
    );
    let _ = writeln!(
        s,
        r#"  <rect x="0" y="0" width="{}" height="{}" fill="white"/>"#,
        SVG_WIDTH, SVG_HEIGHT
    );
    let _ = writeln!(
        s,
        r#"  <rect id="plot-area" x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black" stroke-width="1"/>"#,
        x1 - x0,
        y0 - y1
    );

    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let (tx, _) = to_canvas(v, 0.0);
        let (_, ty) = to_canvas(0.0, v);
        let _ = writeln!(
            s,
            r#"  <line x1="{tx:.2}" y1="{y0:.2}" x2="{tx:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            s,
            r#"  <text x="{tx:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{v:.1}</text>"#,
            y0 + 18.0
        );
        let _ = writeln!(
            s,
            r#"  <line x1="{:.2}" y1="{ty:.2}" x2="{x0:.2}" y2="{ty:.2}" stroke="black" stroke-width="1"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            s,
            r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{v:.1}</text>"#,
            x0 - 8.0,
            ty + 4.0
        );
    }

    let _ = writeln!(
        s,
        r#"  <text id="x-label" x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">False Positive Rate</text>"#,
        (x0 + x1) / 2.0,
        SVG_HEIGHT - 8.0
    );
    let (lx, ly) = (14.0, (y0 + y1) / 2.0);
    let _ = writeln!(
        s,
        r#"  <text id="y-label" x="{lx:.2}" y="{ly:.2}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 {lx:.2} {ly:.2})">True Positive Rate</text>"#
    );
    let _ = writeln!(
        s,
        r#"  <text id="title" x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        SVG_WIDTH / 2.0,
        SVG_MARGIN / 2.0 + 5.0,
        escape_xml(title)
    );

    let _ = writeln!(
        s,
        r#"  <line id="diagonal" x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="gray" stroke-width="1" stroke-dasharray="6,4"/>"#
    );

    let pts: Vec<String> = curve
        .points
        .iter()
        .map(|p| {
            let (x, y) = to_canvas(p.fpr, p.tpr);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        s,
        r#"  <polyline id="roc-curve" points="{}" fill="none" stroke="darkorange" stroke-width="2"/>"#,
        pts.join(" ")
    );

    let _ = writeln!(
        s,
        r#"  <text id="legend" x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">AUC = {:.3}</text>"#,
        x1 - 10.0,
        y0 - 12.0,
        curve.auc
    );
    let _ = writeln!(s, "</svg>");
    s
}
