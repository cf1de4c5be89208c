//! Crate-wide error type.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    // --- dataset ---
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error on {path}: {detail}")]
    Csv { path: String, detail: String },
    #[error("empty input file: {path}")]
    EmptyFile { path: String },
    #[error("column `{column}` declared in the schema is missing from the header")]
    MissingColumn { column: String },
    #[error("row {row}, column {column}: cannot parse `{value}` as a number")]
    BadNumericCell {
        row: usize,
        column: String,
        value: String,
    },
    #[error("dataset invariant violated: {0}")]
    InvalidDataset(String),
    #[error("label column `{column}` has fewer than 2 distinct values")]
    DegenerateLabels { column: String },
    #[error("class `{class}` would be absent from the training set of fold {fold}")]
    ClassMissingFromFold { class: String, fold: usize },
    #[error("invalid split: {0}")]
    InvalidSplit(String),

    // --- scoring ---
    #[error("feature vector has {got} entries, model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(
        "coefficient {value} for class `{class}`, feature `{feature}` is outside bounds [{lo}, {hi}]"
    )]
    CoefficientOutOfBounds {
        class: String,
        feature: String,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("malformed model file: {0}")]
    MalformedModel(String),
    #[error("feature names do not align: missing {missing:?}, unexpected {extra:?}")]
    FeatureMismatch {
        missing: Vec<String>,
        extra: Vec<String>,
    },

    // --- metrics ---
    #[error("empty confusion matrix")]
    EmptyConfusion,
    #[error("class `{class}` has no samples; balanced accuracy undefined")]
    EmptyClass { class: String },
    #[error("no samples satisfy label `{label}` condition in the {group} group")]
    EmptyConditionalSubgroup { label: String, group: String },
    #[error("protected group is empty or covers the whole dataset")]
    DegenerateProtectedGroup,

    // --- milp / solver ---
    #[error("invalid build configuration: {0}")]
    InvalidConfig(String),
    #[error("assignment is missing a value for variable `{name}`")]
    MissingVariable { name: String },
    #[error("unknown variable name `{name}` in solution file")]
    UnknownVariable { name: String },
    #[error("model `{0}` has no scoring structure attached; cannot decode")]
    NotAScoringModel(String),
    #[error("LP solve failed: {0}")]
    LpFailure(String),
    #[error("enumeration would visit {needed} candidates, above the cap of {cap}")]
    EnumerationCap { needed: u128, cap: u128 },
    #[error("malformed {format} input at line {line}: {detail}")]
    MalformedFormat {
        format: &'static str,
        line: usize,
        detail: String,
    },

    // --- config / cli ---
    #[error("invalid experiment configuration: {0}")]
    InvalidExperiment(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
