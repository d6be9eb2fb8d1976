//! Delimited prediction files.
//!
//! One record per line, exactly two fields separated by a single delimiter
//! character, no quoting. Hard-label files hold `actual<delim>predicted`,
//! score files hold `actual<delim>score`. An optional header line is
//! skipped. Both LF and CRLF line endings are accepted and a missing final
//! newline is fine. Lines that are empty after stripping the line ending are
//! ignored and not counted as records.
//!
//! Failure line numbers are 1-based and include the header line.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::counts::{binarize, Label, LabeledPrediction};
use crate::roc::ScoredSample;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum InputMode {
    HardLabels,
    Scores,
}

impl InputMode {
    pub fn as_str(self) -> &'static str {
        match self {
            InputMode::HardLabels => "hard-labels",
            InputMode::Scores => "scores",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputConfig {
    pub mode: InputMode,
    /// Field value mapped to [`Label::Positive`].
    pub positive_label: String,
    /// When set, the only value accepted as [`Label::Negative`]; any third
    /// value is a per-line failure. When unset every non-positive value is
    /// negative.
    pub negative_label: Option<String>,
    pub delimiter: char,
    pub has_header: bool,
    /// Abort on the first failing line instead of recording it.
    pub strict: bool,
}

impl Default for InputConfig {
    fn default() -> Self {
        InputConfig {
            mode: InputMode::HardLabels,
            positive_label: "1".to_string(),
            negative_label: None,
            delimiter: ',',
            has_header: false,
            strict: false,
        }
    }
}

impl InputConfig {
    pub fn scores() -> Self {
        InputConfig {
            mode: InputMode::Scores,
            ..InputConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), IngestError> {
        if self.negative_label.as_deref() == Some(self.positive_label.as_str()) {
            return Err(IngestError::Config(format!(
                "positive and negative label are both {:?}",
                self.positive_label
            )));
        }
        if self.delimiter == '\n' || self.delimiter == '\r' {
            return Err(IngestError::Config("delimiter cannot be a line break".into()));
        }
        Ok(())
    }

    fn map_label(&self, field: &str) -> Result<Label, String> {
        match &self.negative_label {
            None => Ok(binarize(field, self.positive_label.as_str())),
            Some(neg) if field == neg => Ok(Label::Negative),
            Some(_) if field == self.positive_label => Ok(Label::Positive),
            Some(neg) => Err(format!(
                "unknown label {field:?} (expected {:?} or {neg:?})",
                self.positive_label
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseFailure {
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub records_read: usize,
    pub records_accepted: usize,
    pub failures: Vec<ParseFailure>,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("invalid input configuration: {0}")]
    Config(String),
    #[error("expected {expected} input, configuration says {actual}")]
    WrongMode { expected: &'static str, actual: &'static str },
    #[error("line {line}: {reason}")]
    Strict { line: usize, reason: String },
    #[error("read error: {0}")]
    Io(#[from] io::Error),
}

fn split_record(line: &str, delim: char) -> Result<(&str, &str), String> {
    let fields: Vec<&str> = line.split(delim).collect();
    match fields.as_slice() {
        [a, b] => Ok((a.trim(), b.trim())),
        _ => Err(format!("expected 2 fields, found {}", fields.len())),
    }
}

fn parse_score(field: &str) -> Result<f64, String> {
    let v: f64 = field
        .parse()
        .map_err(|_| format!("invalid score {field:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("non-finite score".to_string())
    }
}

fn parse_lines<R, T, F>(
    reader: R,
    cfg: &InputConfig,
    mut parse_record: F,
) -> Result<(Vec<T>, ParseReport), IngestError>
where
    R: BufRead,
    F: FnMut(&str, &str) -> Result<T, String>,
{
    cfg.validate()?;
    let mut out = Vec::new();
    let mut report = ParseReport::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        if cfg.has_header && line_no == 1 {
            continue;
        }
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() {
            continue;
        }
        report.records_read += 1;
        let parsed = split_record(line, cfg.delimiter).and_then(|(a, b)| parse_record(a, b));
        match parsed {
            Ok(item) => {
                out.push(item);
                report.records_accepted += 1;
            }
            Err(reason) if cfg.strict => {
                return Err(IngestError::Strict { line: line_no, reason });
            }
            Err(reason) => report.failures.push(ParseFailure { line: line_no, reason }),
        }
    }
    Ok((out, report))
}

/// Parses `actual<delim>predicted` rows.
pub fn parse_hard_labels<R: BufRead>(
    reader: R,
    cfg: &InputConfig,
) -> Result<(Vec<LabeledPrediction>, ParseReport), IngestError> {
    if cfg.mode != InputMode::HardLabels {
        return Err(IngestError::WrongMode {
            expected: InputMode::HardLabels.as_str(),
            actual: cfg.mode.as_str(),
        });
    }
    parse_lines(reader, cfg, |actual, predicted| {
        Ok(LabeledPrediction::new(
            cfg.map_label(actual)?,
            cfg.map_label(predicted)?,
        ))
    })
}

/// Parses `actual<delim>score` rows. Scores must be finite decimal reals.
pub fn parse_scores<R: BufRead>(
    reader: R,
    cfg: &InputConfig,
) -> Result<(Vec<ScoredSample>, ParseReport), IngestError> {
    if cfg.mode != InputMode::Scores {
        return Err(IngestError::WrongMode {
            expected: InputMode::Scores.as_str(),
            actual: cfg.mode.as_str(),
        });
    }
    parse_lines(reader, cfg, |actual, score| {
        let label = cfg.map_label(actual)?;
        Ok(ScoredSample::new(parse_score(score)?, label))
    })
}

fn label_text<'a>(l: Label, positive: &'a str, negative: &'a str) -> &'a str {
    match l {
        Label::Positive => positive,
        Label::Negative => negative,
    }
}

/// Writes predictions in the hard-label row format.
pub fn write_hard_labels<W: Write>(
    mut w: W,
    preds: &[LabeledPrediction],
    positive: &str,
    negative: &str,
    delimiter: char,
) -> io::Result<()> {
    for p in preds {
        writeln!(
            w,
            "{}{delimiter}{}",
            label_text(p.actual, positive, negative),
            label_text(p.predicted, positive, negative)
        )?;
    }
    Ok(())
}

/// Writes samples in the score row format. Scores use the shortest
/// representation that parses back to the same value.
pub fn write_scores<W: Write>(
    mut w: W,
    samples: &[ScoredSample],
    positive: &str,
    negative: &str,
    delimiter: char,
) -> io::Result<()> {
    for s in samples {
        writeln!(
            w,
            "{}{delimiter}{}",
            label_text(s.actual, positive, negative),
            s.score
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Label::{Negative as N, Positive as P};

    fn lp(a: Label, p: Label) -> LabeledPrediction {
        LabeledPrediction::new(a, p)
    }

    #[test]
    fn hard_labels_default_mapping() {
        let (v, r) = parse_hard_labels("1,1\n1,0\n0,1\n".as_bytes(), &InputConfig::default()).unwrap();
        assert_eq!(v, vec![lp(P, P), lp(P, N), lp(N, P)]);
        assert_eq!((r.records_read, r.records_accepted), (3, 3));
        assert!(r.failures.is_empty());
    }

    #[test]
    fn custom_positive_label() {
        let cfg = InputConfig {
            positive_label: "spam".into(),
            ..InputConfig::default()
        };
        let (v, _) = parse_hard_labels("spam,ham".as_bytes(), &cfg).unwrap();
        assert_eq!(v, vec![lp(P, N)]);
    }

    #[test]
    fn explicit_negative_label_rejects_others() {
        let cfg = InputConfig {
            positive_label: "spam".into(),
            negative_label: Some("ham".into()),
            ..InputConfig::default()
        };
        let (v, r) = parse_hard_labels("spam,ham\nham,eggs\nham,spam".as_bytes(), &cfg).unwrap();
        assert_eq!(v, vec![lp(P, N), lp(N, P)]);
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].line, 2);
        assert!(r.failures[0].reason.contains("unknown label"));
    }

    #[test]
    fn malformed_row_is_recorded() {
        let (v, r) = parse_hard_labels("1,1\n1\n0,0\n".as_bytes(), &InputConfig::default()).unwrap();
        assert_eq!(v, vec![lp(P, P), lp(N, N)]);
        assert_eq!(r.records_read, 3);
        assert_eq!(r.records_accepted, 2);
        assert_eq!(
            r.failures,
            vec![ParseFailure { line: 2, reason: "expected 2 fields, found 1".into() }]
        );
    }

    #[test]
    fn strict_aborts() {
        let cfg = InputConfig { strict: true, ..InputConfig::default() };
        match parse_hard_labels("1,1\n1,0,1\n".as_bytes(), &cfg) {
            Err(IngestError::Strict { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_counts_toward_line_numbers() {
        let cfg = InputConfig { has_header: true, ..InputConfig::scores() };
        let (v, r) = parse_scores("label,score\n1,0.9\n0,abc\n".as_bytes(), &cfg).unwrap();
        assert_eq!(v, vec![ScoredSample::new(0.9, P)]);
        assert_eq!(r.records_read, 2);
        assert_eq!(r.failures[0].line, 3);
    }

    #[test]
    fn score_rows() {
        let cfg = InputConfig::scores();
        let (v, _) = parse_scores("1,0.9\n0,0.8".as_bytes(), &cfg).unwrap();
        assert_eq!(v, vec![ScoredSample::new(0.9, P), ScoredSample::new(0.8, N)]);

        let (v, _) = parse_scores("1,9e-1".as_bytes(), &cfg).unwrap();
        assert_eq!(v[0].score, 0.9);

        for bad in ["1,nan", "1,inf", "1,-inf", "1,NaN"] {
            let (v, r) = parse_scores(bad.as_bytes(), &cfg).unwrap();
            assert!(v.is_empty());
            assert_eq!(r.failures[0].reason, "non-finite score", "{bad}");
        }
        // decimal comma under a semicolon delimiter
        let semi = InputConfig { delimiter: ';', ..InputConfig::scores() };
        let (v, r) = parse_scores("1;0,9".as_bytes(), &semi).unwrap();
        assert!(v.is_empty());
        assert!(r.failures[0].reason.starts_with("invalid score"));
    }

    #[test]
    fn empty_input_is_not_an_error() {
        let (v, r) = parse_scores("".as_bytes(), &InputConfig::scores()).unwrap();
        assert!(v.is_empty());
        assert_eq!(r, ParseReport::default());
    }

    #[test]
    fn crlf_and_trailing_newline() {
        let cfg = InputConfig::default();
        let a = parse_hard_labels("1,0\r\n0,0\r\n".as_bytes(), &cfg).unwrap();
        let b = parse_hard_labels("1,0\n0,0".as_bytes(), &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mode_and_label_validation() {
        assert!(matches!(
            parse_scores("1,1".as_bytes(), &InputConfig::default()),
            Err(IngestError::WrongMode { .. })
        ));
        let cfg = InputConfig { negative_label: Some("1".into()), ..InputConfig::default() };
        assert!(matches!(
            parse_hard_labels("1,1".as_bytes(), &cfg),
            Err(IngestError::Config(_))
        ));
    }

    fn arb_label() -> impl Strategy<Value = Label> {
        prop_oneof![Just(P), Just(N)]
    }

    proptest! {
        #[test]
        fn score_round_trip(
            rows in prop::collection::vec((arb_label(), -1e6f64..1e6), 0..50),
            crlf in any::<bool>(),
        ) {
            let samples: Vec<_> = rows.iter().map(|&(l, s)| ScoredSample::new(s, l)).collect();
            let mut buf = Vec::new();
            write_scores(&mut buf, &samples, "1", "0", ',').unwrap();
            let text = String::from_utf8(buf).unwrap();
            let text = if crlf { text.replace('\n', "\r\n") } else { text };
            let (back, report) = parse_scores(text.as_bytes(), &InputConfig::scores()).unwrap();
            prop_assert_eq!(back, samples);
            prop_assert_eq!(report.records_accepted, rows.len());
        }

        #[test]
        fn hard_label_round_trip(rows in prop::collection::vec((arb_label(), arb_label()), 0..50)) {
            let preds: Vec<_> = rows.iter().map(|&(a, p)| lp(a, p)).collect();
            let mut buf = Vec::new();
            write_hard_labels(&mut buf, &preds, "yes", "no", '\t').unwrap();
            let cfg = InputConfig {
                positive_label: "yes".into(),
                negative_label: Some("no".into()),
                delimiter: '\t',
                ..InputConfig::default()
            };
            let (back, _) = parse_hard_labels(buf.as_slice(), &cfg).unwrap();
            prop_assert_eq!(back, preds);
        }

        #[test]
        fn report_accounting(text in "[01a,\\.\n]{0,200}") {
            let (v, r) = parse_scores(text.as_bytes(), &InputConfig::scores()).unwrap();
            prop_assert_eq!(r.records_accepted + r.failures.len(), r.records_read);
            prop_assert_eq!(v.len(), r.records_accepted);
            let (v, r) = parse_hard_labels(text.as_bytes(), &InputConfig::default()).unwrap();
            prop_assert_eq!(r.records_accepted + r.failures.len(), r.records_read);
            prop_assert_eq!(v.len(), r.records_accepted);
        }
    }
}
