//! Random forests, logistic regression and an evaluation harness for
//! predicting policy outcomes from voter preferences and interest-group
//! alignments.
//!
//! The crate is organised bottom-up:
//!
//! * [`dataset`] loads and validates policy cases, derives netIGA, encodes
//!   feature matrices and builds train/test splits.
//! * [`forest`] is a CART / random forest implementation with Gini and
//!   permutation importances.
//! * [`logistic`] is a ridge-stabilised logistic regression.
//! * [`metrics`] holds confusion counts, balanced accuracy, operating-point
//!   selection and ROC/AUC.
//! * [`experiments`] orchestrates repeated evaluations, per-domain rankings,
//!   feature-subset selection and the nonlinearity case study.
//! * [`cli`] backs the `policy-forest` binary.

pub mod cli;
pub mod dataset;
pub mod error;
pub mod experiments;
pub mod forest;
pub mod logistic;
pub mod metrics;
pub mod seed;

pub use error::{Error, Result};
