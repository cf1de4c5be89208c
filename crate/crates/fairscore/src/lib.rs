//! Certifiably optimal sparse and fair multi-class scoring systems.
//!
//! A scoring system is a linear classifier whose integer coefficients read
//! as point values attached to Boolean conditions; one scorer is trained
//! per class and the class with the highest score wins. This crate
//! compiles the training problem — minimize classification loss plus a
//! sparsity regularizer, subject to per-class coefficient budgets and
//! group-fairness constraints — into a mixed-integer linear program, and
//! either solves it exactly with the bundled branch-and-bound solver or
//! exports it in MPS/LP form for an external solver. Evaluation utilities
//! cover confusion matrices, (balanced) accuracy, four multi-class
//! fairness criteria, and fairness/accuracy sweep harnesses.
//!
//! The numeric core is generic over the scalar type via [`num::Real`];
//! the aliases below fix `f64`, which is what the CLI and most users want.

pub mod dataset;
pub mod error;
pub mod metrics;
pub mod milp;
pub mod num;
pub mod scoring;

pub use error::{Error, Result};
pub use scoring::MultiScoringSystem;

/// Scalar type used by the concrete aliases and the CLI.
pub type DefaultScalar = f64;

pub type FairnessSpec = dataset::FairnessSpec<DefaultScalar>;
pub type FairnessReport = metrics::FairnessReport<DefaultScalar>;
pub type Prediction = scoring::Prediction<DefaultScalar>;
pub type MilpModel = milp::MilpModel<DefaultScalar>;
pub type BuildConfig = milp::BuildConfig<DefaultScalar>;
