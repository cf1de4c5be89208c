//! Turns a raw dataset into 0/1 features.
//!
//! Categorical columns become one indicator per category. Numeric columns
//! become "value <= t" indicators at equal-frequency thresholds, except
//! that columns already taking only the values 0 and 1 pass through
//! unchanged (this makes the transform idempotent). An always-one
//! intercept column is appended last, and rows whose features collide with
//! an earlier row under a different label are dropped.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::{BinaryDataset, Cell, ColumnKind, RawDataset};

#[derive(Debug, Clone)]
pub struct BinarizePolicy {
    /// Number of equal-frequency buckets for numeric columns; produces
    /// `quantiles - 1` thresholds before deduplication.
    pub quantiles: usize,
}

impl Default for BinarizePolicy {
    fn default() -> Self {
        BinarizePolicy { quantiles: 4 }
    }
}

#[derive(Debug)]
pub struct BinarizeOutcome {
    pub dataset: BinaryDataset,
    pub warnings: Vec<String>,
    /// Rows removed because their features matched an earlier row with a
    /// different label.
    pub dropped_rows: usize,
}

pub fn binarize(raw: &RawDataset, policy: &BinarizePolicy) -> Result<BinarizeOutcome> {
    if policy.quantiles < 2 {
        return Err(Error::InvalidConfig(
            "binarization needs at least 2 quantile buckets".into(),
        ));
    }
    if raw.is_empty() {
        return Err(Error::InvalidDataset("no rows to binarize".into()));
    }

    let mut warnings = Vec::new();
    let feature_specs: Vec<_> = raw.schema.feature_columns().cloned().collect();
    let n = raw.len();

    // Per source column, the list of derived indicator columns.
    let mut names: Vec<String> = Vec::new();
    let mut columns: Vec<Vec<u8>> = Vec::new();

    for (col_idx, spec) in feature_specs.iter().enumerate() {
        match spec.kind {
            ColumnKind::Categorical => {
                let mut categories: Vec<&str> = raw
                    .rows
                    .iter()
                    .map(|row| match &row[col_idx] {
                        Cell::Cat(s) => s.as_str(),
                        Cell::Num(_) => unreachable!("schema kind mismatch"),
                    })
                    .collect();
                categories.sort_unstable();
                categories.dedup();
                if categories.len() < 2 {
                    warnings.push(format!(
                        "column `{}` is constant and was dropped",
                        spec.name
                    ));
                    continue;
                }
                for cat in categories {
                    let col: Vec<u8> = raw
                        .rows
                        .iter()
                        .map(|row| match &row[col_idx] {
                            Cell::Cat(s) => u8::from(s == cat),
                            Cell::Num(_) => unreachable!(),
                        })
                        .collect();
                    names.push(format!("{}={}", spec.name, cat));
                    columns.push(col);
                }
            }
            ColumnKind::Numeric => {
                let values: Vec<f64> = raw
                    .rows
                    .iter()
                    .map(|row| match &row[col_idx] {
                        Cell::Num(v) => *v,
                        Cell::Cat(_) => unreachable!("schema kind mismatch"),
                    })
                    .collect();
                let mut distinct = values.clone();
                distinct.sort_by(f64::total_cmp);
                distinct.dedup();
                if distinct.len() < 2 {
                    warnings.push(format!(
                        "column `{}` is constant and was dropped",
                        spec.name
                    ));
                    continue;
                }
                // Already-binary columns pass through as-is.
                if distinct == [0.0, 1.0] {
                    names.push(spec.name.clone());
                    columns.push(values.iter().map(|v| u8::from(*v == 1.0)).collect());
                    continue;
                }
                let mut sorted = values.clone();
                sorted.sort_by(f64::total_cmp);
                let max = *sorted.last().unwrap();
                let mut thresholds: Vec<f64> = (1..policy.quantiles)
                    .map(|m| {
                        // m-th q-quantile as the ceil(n*m/q)-th order statistic.
                        let pos = (n * m).div_ceil(policy.quantiles);
                        sorted[pos.saturating_sub(1).min(n - 1)]
                    })
                    .filter(|t| *t < max) // "v <= max" would be constant 1
                    .collect();
                thresholds.dedup_by(|a, b| a == b);
                if thresholds.is_empty() {
                    warnings.push(format!(
                        "column `{}` produced no informative thresholds and was dropped",
                        spec.name
                    ));
                    continue;
                }
                for t in thresholds {
                    let col: Vec<u8> = values.iter().map(|v| u8::from(*v <= t)).collect();
                    names.push(format!("{}<={}", spec.name, t));
                    columns.push(col);
                }
            }
        }
    }

    if columns.is_empty() {
        return Err(Error::InvalidDataset(
            "binarization produced no feature columns".into(),
        ));
    }

    // Intercept goes last so coefficient displays end with the bias row.
    names.push("(intercept)".to_string());
    columns.push(vec![1u8; n]);
    let intercept_index = names.len() - 1;

    // Class names are the sorted distinct labels.
    let mut class_names: Vec<String> = raw.labels.clone();
    class_names.sort();
    class_names.dedup();
    let class_of = |label: &str| class_names.iter().position(|c| c == label).unwrap();

    // Assemble rows, dropping later rows that conflict with an earlier
    // identical feature vector (first occurrence wins).
    let d = names.len();
    let mut seen: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    let mut features = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    let mut dropped_rows = 0usize;
    for i in 0..n {
        let row: Vec<u8> = columns.iter().map(|col| col[i]).collect();
        let label = class_of(&raw.labels[i]);
        match seen.get(&row) {
            Some(&first_label) if first_label != label => {
                dropped_rows += 1;
                continue;
            }
            Some(_) => {}
            None => {
                seen.insert(row.clone(), label);
            }
        }
        features.extend_from_slice(&row);
        labels.push(label);
    }
    if dropped_rows > 0 {
        warnings.push(format!(
            "{dropped_rows} row(s) conflicted with an earlier identical row and were dropped"
        ));
    }

    let dataset = BinaryDataset::new(features, names, labels, class_names, Some(intercept_index))
        .map_err(|e| match e {
            Error::InvalidDataset(msg) => Error::InvalidDataset(format!(
                "{msg} (after removing {dropped_rows} conflicting row(s))"
            )),
            other => other,
        })?;

    Ok(BinarizeOutcome {
        dataset,
        warnings,
        dropped_rows,
    })
}

/// Re-expresses a binary dataset as raw data (all numeric 0/1 columns),
/// which is how idempotence of [`binarize`] is stated and tested.
pub fn to_raw(ds: &BinaryDataset) -> RawDataset {
    use super::{ColumnSpec, Schema};
    let mut columns: Vec<ColumnSpec> = ds
        .feature_names()
        .iter()
        .map(|name| ColumnSpec {
            name: name.clone(),
            kind: ColumnKind::Numeric,
        })
        .collect();
    columns.push(ColumnSpec {
        name: "label".into(),
        kind: ColumnKind::Categorical,
    });
    let rows = (0..ds.n_samples())
        .map(|i| {
            ds.sample(i)
                .iter()
                .map(|v| Cell::Num(f64::from(*v)))
                .collect()
        })
        .collect();
    let labels = (0..ds.n_samples())
        .map(|i| ds.class_names()[ds.label(i)].clone())
        .collect();
    RawDataset {
        schema: Schema {
            columns,
            label_column: "label".into(),
        },
        rows,
        labels,
    }
}
