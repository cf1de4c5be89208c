//! Neutral mixed-integer linear model plus the scoring-system compiler.

mod build;
mod model;

pub use build::{big_m, build, BuildConfig, ObjectiveKind};
pub use model::{
    Census, ConflictGroup, Constraint, FeasibilityReport, MilpModel, ScoringMeta, Sense, VarKind,
    VarMaps, Variable, Violation,
};
