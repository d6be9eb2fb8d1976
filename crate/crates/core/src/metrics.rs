//! Rate metrics and the Matthews correlation coefficient over a
//! [`ConfusionCounts`] tally.
//!
//! A metric whose denominator is zero evaluates to [`MetricValue::Undefined`].
//! No metric ever yields NaN, and none silently substitutes zero; mapping
//! undefined values to zero is a rendering choice made in [`crate::report`].

use std::cmp::Ordering;
use std::fmt;

use crate::counts::ConfusionCounts;

/// A metric result: a finite real, or undefined because of a zero denominator.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum MetricValue {
    Defined(f64),
    Undefined,
}

impl MetricValue {
    pub fn value(self) -> Option<f64> {
        match self {
            MetricValue::Defined(v) => Some(v),
            MetricValue::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, MetricValue::Defined(_))
    }

    /// Defined value, or `0.0` when undefined.
    pub fn or_zero(self) -> f64 {
        self.value().unwrap_or(0.0)
    }

    /// Bit-level equality, treating two undefined values as equal.
    pub fn bit_eq(self, other: MetricValue) -> bool {
        match (self, other) {
            (MetricValue::Defined(a), MetricValue::Defined(b)) => a.to_bits() == b.to_bits(),
            (MetricValue::Undefined, MetricValue::Undefined) => true,
            _ => false,
        }
    }
}

impl From<Option<f64>> for MetricValue {
    fn from(v: Option<f64>) -> Self {
        v.map_or(MetricValue::Undefined, MetricValue::Defined)
    }
}

impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricValue::Defined(v) => fmt::Display::fmt(v, f),
            MetricValue::Undefined => f.write_str("undefined"),
        }
    }
}

fn ratio(num: u128, den: u128) -> MetricValue {
    if den == 0 {
        MetricValue::Undefined
    } else {
        MetricValue::Defined(num as f64 / den as f64)
    }
}

/// `(fp + fn) / total`.
pub fn error_rate(c: &ConfusionCounts) -> MetricValue {
    ratio(c.fp as u128 + c.fn_ as u128, c.total())
}

/// `(tp + tn) / total`.
pub fn accuracy(c: &ConfusionCounts) -> MetricValue {
    ratio(c.tp as u128 + c.tn as u128, c.total())
}

/// `fp / (fp + tn)`.
pub fn false_positive_rate(c: &ConfusionCounts) -> MetricValue {
    ratio(c.fp as u128, c.negatives())
}

/// `tp / (tp + fn)`.
pub fn true_positive_rate(c: &ConfusionCounts) -> MetricValue {
    ratio(c.tp as u128, c.positives())
}

/// Alias of [`true_positive_rate`].
pub fn recall(c: &ConfusionCounts) -> MetricValue {
    true_positive_rate(c)
}

/// Alias of [`true_positive_rate`].
pub fn sensitivity(c: &ConfusionCounts) -> MetricValue {
    true_positive_rate(c)
}

/// `tp / (tp + fp)`.
pub fn precision(c: &ConfusionCounts) -> MetricValue {
    ratio(c.tp as u128, c.tp as u128 + c.fp as u128)
}

/// Harmonic mean of precision and recall, evaluated from those two values.
/// Undefined when either input is undefined or both are zero.
pub fn f1_score(c: &ConfusionCounts) -> MetricValue {
    match (precision(c), recall(c)) {
        (MetricValue::Defined(pre), MetricValue::Defined(rec)) if pre + rec > 0.0 => {
            MetricValue::Defined(2.0 * (pre * rec) / (pre + rec))
        }
        _ => MetricValue::Undefined,
    }
}

/// `tn / (fp + tn)`.
pub fn specificity(c: &ConfusionCounts) -> MetricValue {
    ratio(c.tn as u128, c.negatives())
}

/// Alias of [`specificity`].
pub fn true_negative_rate(c: &ConfusionCounts) -> MetricValue {
    specificity(c)
}

/// Matthews correlation coefficient,
/// `(tp*tn - fp*fn) / sqrt((tp+fp)(tp+fn)(tn+fp)(tn+fn))`.
///
/// Undefined when any of the four marginal sums is zero. The numerator is
/// formed exactly in 128-bit integers. The four marginals are sorted before
/// the denominator is formed, so permuting them (class swap, prediction flip)
/// yields a bit-identical magnitude.
pub fn matthews_corrcoef(c: &ConfusionCounts) -> MetricValue {
    let mut margins = [
        c.tp as u128 + c.fp as u128,
        c.tp as u128 + c.fn_ as u128,
        c.tn as u128 + c.fp as u128,
        c.tn as u128 + c.fn_ as u128,
    ];
    if margins.contains(&0) {
        return MetricValue::Undefined;
    }
    margins.sort_unstable();

    // products of two u64 always fit in u128
    let diag = c.tp as u128 * c.tn as u128;
    let off = c.fp as u128 * c.fn_ as u128;
    let numerator = match diag.cmp(&off) {
        Ordering::Less => -((off - diag) as f64),
        _ => (diag - off) as f64,
    };

    let denominator = match margins
        .iter()
        .try_fold(1u128, |acc, &m| acc.checked_mul(m))
    {
        Some(prod) => (prod as f64).sqrt(),
        None => {
            // split into two halves that each stay well inside f64 range
            let lo = margins[0] as f64 * margins[3] as f64;
            let hi = margins[1] as f64 * margins[2] as f64;
            lo.sqrt() * hi.sqrt()
        }
    };

    MetricValue::Defined((numerator / denominator).clamp(-1.0, 1.0))
}

/// Every metric evaluated on one tally.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MetricSet {
    pub counts: ConfusionCounts,
    pub err: MetricValue,
    pub acc: MetricValue,
    pub fpr: MetricValue,
    pub tpr: MetricValue,
    pub pre: MetricValue,
    pub rec: MetricValue,
    pub f1: MetricValue,
    pub sen: MetricValue,
    pub spc: MetricValue,
    pub tnr: MetricValue,
    pub mcc: MetricValue,
}

impl MetricSet {
    /// `(name, value)` pairs in the canonical report order. Names are the
    /// lowercase metric abbreviations.
    pub fn entries(&self) -> [(&'static str, MetricValue); 11] {
        [
            ("err", self.err),
            ("acc", self.acc),
            ("fpr", self.fpr),
            ("tpr", self.tpr),
            ("pre", self.pre),
            ("rec", self.rec),
            ("f1", self.f1),
            ("sen", self.sen),
            ("spc", self.spc),
            ("tnr", self.tnr),
            ("mcc", self.mcc),
        ]
    }
}

pub fn all_metrics(c: &ConfusionCounts) -> MetricSet {
    MetricSet {
        counts: *c,
        err: error_rate(c),
        acc: accuracy(c),
        fpr: false_positive_rate(c),
        tpr: true_positive_rate(c),
        pre: precision(c),
        rec: recall(c),
        f1: f1_score(c),
        sen: sensitivity(c),
        spc: specificity(c),
        tnr: true_negative_rate(c),
        mcc: matthews_corrcoef(c),
    }
}
