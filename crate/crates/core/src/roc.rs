//! ROC curves from scored samples, and AUC by two independent routes.
//!
//! [`roc_points`] sorts once by descending score and sweeps the decision
//! threshold downward over the distinct score values, emitting one point per
//! distinct score. Tied positives and negatives therefore move the curve
//! diagonally. [`auc_trapezoid`] integrates the curve; [`auc_pair_count`]
//! counts correctly ordered positive/negative pairs directly (ties get half
//! credit). The two agree on every input.

use std::cmp::Ordering;

use thiserror::Error;

use crate::counts::{ConfusionCounts, Label};
use crate::metrics::{false_positive_rate, true_positive_rate, MetricValue};

/// Tolerance used by [`diagonal_position`].
pub const DIAGONAL_TOLERANCE: f64 = 1e-12;

/// A classifier score for the positive class together with the true label.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ScoredSample {
    pub score: f64,
    pub actual: Label,
}

impl ScoredSample {
    pub fn new(score: f64, actual: Label) -> Self {
        ScoredSample { score, actual }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Decision threshold producing this point; `+inf` for the origin.
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auc: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RocError {
    #[error("no samples")]
    Empty,
    #[error("need both classes (got {positives} positive, {negatives} negative)")]
    SingleClass { positives: usize, negatives: usize },
    #[error("non-finite score at record {index}")]
    NonFiniteScore { index: usize },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DiagonalPosition {
    Above,
    On,
    Below,
}

fn validate(samples: &[ScoredSample]) -> Result<(usize, usize), RocError> {
    if samples.is_empty() {
        return Err(RocError::Empty);
    }
    if let Some(index) = samples.iter().position(|s| !s.score.is_finite()) {
        return Err(RocError::NonFiniteScore { index });
    }
    let positives = samples.iter().filter(|s| s.actual.is_positive()).count();
    let negatives = samples.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(RocError::SingleClass { positives, negatives });
    }
    Ok((positives, negatives))
}

fn rate(v: MetricValue) -> f64 {
    // validate() guarantees both denominators are non-zero
    v.value().expect("rate denominator is non-zero")
}

/// Builds the ROC curve by sweeping the threshold over every distinct score.
///
/// The first point is `(0, 0)` at threshold `+inf`; each following point uses
/// the next lower distinct score as threshold under the `score >= t` rule, so
/// the last point is `(1, 1)`. The returned curve has `auc` filled in.
pub fn roc_points(samples: &[ScoredSample]) -> Result<RocCurve, RocError> {
    let (positives, negatives) = validate(samples)?;

    let mut sorted: Vec<ScoredSample> = samples.to_vec();
    // scores are finite here, so partial_cmp is total
    sorted.sort_by(|a, b| b.score.partial_cmp(&a.score).unwrap_or(Ordering::Equal));

    let counts_at = |tp: usize, fp: usize| {
        ConfusionCounts::new(
            tp as u64,
            fp as u64,
            (positives - tp) as u64,
            (negatives - fp) as u64,
        )
    };

    let mut points = Vec::with_capacity(sorted.len() + 1);
    points.push(RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: f64::INFINITY,
    });

    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < sorted.len() {
        let threshold = sorted[i].score;
        while i < sorted.len() && sorted[i].score == threshold {
            match sorted[i].actual {
                Label::Positive => tp += 1,
                Label::Negative => fp += 1,
            }
            i += 1;
        }
        let c = counts_at(tp, fp);
        points.push(RocPoint {
            fpr: rate(false_positive_rate(&c)),
            tpr: rate(true_positive_rate(&c)),
            threshold,
        });
    }

    let mut curve = RocCurve { points, auc: 0.0 };
    curve.auc = auc_trapezoid(&curve);
    Ok(curve)
}

/// Trapezoidal area under the curve's points.
pub fn auc_trapezoid(curve: &RocCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[0].tpr + w[1].tpr) / 2.0)
        .sum()
}

/// Fraction of positive/negative pairs in which the positive outscores the
/// negative, ties counting one half.
///
/// Runs in `O(n log n)`: after sorting ascending, each tie block contributes
/// `2 * negatives_below + negatives_in_block` half-credits per positive. The
/// tally is an exact integer; a single division produces the result.
pub fn auc_pair_count(samples: &[ScoredSample]) -> Result<f64, RocError> {
    let (positives, negatives) = validate(samples)?;

    let mut sorted: Vec<ScoredSample> = samples.to_vec();
    sorted.sort_by(|a, b| a.score.partial_cmp(&b.score).unwrap_or(Ordering::Equal));

    let mut half_credits: u128 = 0;
    let mut negatives_below: u128 = 0;
    let mut i = 0;
    while i < sorted.len() {
        let score = sorted[i].score;
        let (mut pos_block, mut neg_block) = (0u128, 0u128);
        while i < sorted.len() && sorted[i].score == score {
            match sorted[i].actual {
                Label::Positive => pos_block += 1,
                Label::Negative => neg_block += 1,
            }
            i += 1;
        }
        half_credits += pos_block * (2 * negatives_below + neg_block);
        negatives_below += neg_block;
    }

    let pairs = positives as u128 * negatives as u128;
    Ok(half_credits as f64 / (2 * pairs) as f64)
}

/// Quadratic pair enumeration computing the same statistic as
/// [`auc_pair_count`]. Meant for small inputs and cross-checking.
pub fn auc_pair_count_brute(samples: &[ScoredSample]) -> Result<f64, RocError> {
    let (positives, negatives) = validate(samples)?;
    let mut half_credits: u128 = 0;
    for p in samples.iter().filter(|s| s.actual.is_positive()) {
        for n in samples.iter().filter(|s| !s.actual.is_positive()) {
            half_credits += match p.score.partial_cmp(&n.score) {
                Some(Ordering::Greater) => 2,
                Some(Ordering::Equal) => 1,
                _ => 0,
            };
        }
    }
    Ok(half_credits as f64 / (2 * positives as u128 * negatives as u128) as f64)
}

/// Where a point lies relative to the chance diagonal `tpr = fpr`.
pub fn diagonal_position(point: &RocPoint) -> DiagonalPosition {
    let gap = point.tpr - point.fpr;
    if gap.abs() <= DIAGONAL_TOLERANCE {
        DiagonalPosition::On
    } else if gap > 0.0 {
        DiagonalPosition::Above
    } else {
        DiagonalPosition::Below
    }
}
