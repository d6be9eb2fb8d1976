//! Evaluation of binary classifiers.
//!
//! * [`counts`]: exact confusion-matrix tallies, one-vs-rest binarization and
//!   score thresholding.
//! * [`metrics`]: error rate, accuracy, FPR, TPR/recall/sensitivity,
//!   precision, F1, specificity/TNR and the Matthews correlation coefficient.
//! * [`roc`]: ROC curves by threshold sweep, AUC by trapezoids and by pair
//!   counting.
//! * [`ingest`]: delimited prediction files.
//! * [`report`]: text, JSON and SVG output.
//! * [`cli`]: the `bineval` command.

pub mod cli;
pub mod counts;
pub mod ingest;
pub mod metrics;
pub mod report;
pub mod roc;

pub use counts::{apply_threshold, binarize, ConfusionCounts, CountsError, Label, LabeledPrediction};
pub use metrics::{all_metrics, MetricSet, MetricValue};
pub use roc::{auc_pair_count, auc_trapezoid, roc_points, RocCurve, RocPoint, ScoredSample};
