//! Confusion-matrix tallies.
//!
//! [`ConfusionCounts`] holds the four cells of a 2×2 confusion matrix with
//! rows indexed by the actual class and columns by the predicted class:
//!
//! ```text
//!                 predicted P   predicted N
//!   actual P          TP            FN
//!   actual N          FP            TN
//! ```
//!
//! Counts are exact `u64` values. Every operation that can grow a cell uses
//! checked arithmetic and reports [`CountsError::Overflow`] instead of wrapping.

use std::borrow::Borrow;
use std::fmt;

use thiserror::Error;

use crate::roc::ScoredSample;

/// Class identity of a sample in a binary task.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    /// The other class.
    pub fn flipped(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Positive => f.write_str("P"),
            Label::Negative => f.write_str("N"),
        }
    }
}

/// One `(actual, predicted)` observation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledPrediction {
    pub actual: Label,
    pub predicted: Label,
}

impl LabeledPrediction {
    pub fn new(actual: Label, predicted: Label) -> Self {
        LabeledPrediction { actual, predicted }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountsError {
    #[error("confusion matrix cell counter overflowed")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThresholdError {
    #[error("decision threshold must not be NaN")]
    NanThreshold,
    #[error("non-finite score at record {index}")]
    NonFiniteScore { index: usize },
}

/// The four cells of a binary confusion matrix.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    /// Builds counts from cells in `(tp, fp, fn, tn)` order.
    pub const fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        ConfusionCounts { tp, fp, fn_, tn }
    }

    /// The all-zero tally; identity element of [`merge`](Self::merge).
    pub const fn empty() -> Self {
        ConfusionCounts::new(0, 0, 0, 0)
    }

    /// Number of recorded samples. Widened so the sum of four `u64` cells
    /// is always representable.
    pub fn total(&self) -> u128 {
        self.tp as u128 + self.fp as u128 + self.fn_ as u128 + self.tn as u128
    }

    /// Actual positives, `tp + fn`.
    pub fn positives(&self) -> u128 {
        self.tp as u128 + self.fn_ as u128
    }

    /// Actual negatives, `fp + tn`.
    pub fn negatives(&self) -> u128 {
        self.fp as u128 + self.tn as u128
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// Returns a copy with exactly one cell incremented.
    pub fn record(self, p: LabeledPrediction) -> Result<Self, CountsError> {
        let mut next = self;
        next.record_mut(p)?;
        Ok(next)
    }

    /// In-place variant of [`record`](Self::record). On overflow the
    /// accumulator is left unchanged.
    pub fn record_mut(&mut self, p: LabeledPrediction) -> Result<(), CountsError> {
        let cell = match (p.actual, p.predicted) {
            (Label::Positive, Label::Positive) => &mut self.tp,
            (Label::Positive, Label::Negative) => &mut self.fn_,
            (Label::Negative, Label::Positive) => &mut self.fp,
            (Label::Negative, Label::Negative) => &mut self.tn,
        };
        *cell = cell.checked_add(1).ok_or(CountsError::Overflow)?;
        Ok(())
    }

    /// Cell-wise sum.
    pub fn merge(self, other: ConfusionCounts) -> Result<Self, CountsError> {
        let add = |a: u64, b: u64| a.checked_add(b).ok_or(CountsError::Overflow);
        Ok(ConfusionCounts {
            tp: add(self.tp, other.tp)?,
            fp: add(self.fp, other.fp)?,
            fn_: add(self.fn_, other.fn_)?,
            tn: add(self.tn, other.tn)?,
        })
    }

    /// Tallies a sequence of predictions.
    pub fn from_predictions<I>(pairs: I) -> Result<Self, CountsError>
    where
        I: IntoIterator,
        I::Item: Borrow<LabeledPrediction>,
    {
        let mut acc = ConfusionCounts::empty();
        for p in pairs {
            acc.record_mut(*p.borrow())?;
        }
        Ok(acc)
    }

    /// Swaps the roles of the two classes for both the actual and the
    /// predicted label: `tp <-> tn`, `fp <-> fn`.
    pub fn swap_classes(self) -> Self {
        ConfusionCounts::new(self.tn, self.fn_, self.fp, self.tp)
    }

    /// Flips every predicted label: `tp <-> fn`, `fp <-> tn`.
    pub fn flip_predictions(self) -> Self {
        ConfusionCounts::new(self.fn_, self.tn, self.tp, self.fp)
    }
}

/// Folds [`ConfusionCounts::merge`] over a sequence of partial tallies.
pub fn merge_all<I>(parts: I) -> Result<ConfusionCounts, CountsError>
where
    I: IntoIterator<Item = ConfusionCounts>,
{
    parts
        .into_iter()
        .try_fold(ConfusionCounts::empty(), ConfusionCounts::merge)
}

/// One-vs-rest reduction: `Positive` iff `actual_class == positive_class`.
pub fn binarize<T: PartialEq + ?Sized>(actual_class: &T, positive_class: &T) -> Label {
    if actual_class == positive_class {
        Label::Positive
    } else {
        Label::Negative
    }
}

/// Turns scored samples into hard predictions with the rule
/// `score >= threshold => Positive`.
///
/// `+inf` predicts everything negative and `-inf` everything positive.
/// A NaN threshold or a non-finite sample score is rejected.
pub fn apply_threshold(
    samples: &[ScoredSample],
    threshold: f64,
) -> Result<Vec<LabeledPrediction>, ThresholdError> {
    if threshold.is_nan() {
        return Err(ThresholdError::NanThreshold);
    }
    samples
        .iter()
        .enumerate()
        .map(|(index, s)| {
            if !s.score.is_finite() {
                return Err(ThresholdError::NonFiniteScore { index });
            }
            let predicted = if s.score >= threshold {
                Label::Positive
            } else {
                Label::Negative
            };
            Ok(LabeledPrediction::new(s.actual, predicted))
        })
        .collect()
}
