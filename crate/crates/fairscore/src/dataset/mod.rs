//! Dataset ingestion, binarization, synthetic generation and splitting.
//!
//! Everything downstream (scoring, metrics, model building) works on a
//! [`BinaryDataset`]: an `N x D` matrix of 0/1 features, integer class
//! labels and an optional always-one intercept column.

mod binarize;
mod csv_io;
mod synthetic;

pub use binarize::{binarize, BinarizeOutcome, BinarizePolicy};
pub use csv_io::{load_csv, ColumnKind, ColumnSpec, Schema};
pub use synthetic::generate_synthetic;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;

/// A raw tabular dataset: typed cells plus one label string per row.
#[derive(Debug, Clone)]
pub struct RawDataset {
    pub schema: Schema,
    /// One entry per row; cells ordered like `schema.feature_columns()`.
    pub rows: Vec<Vec<Cell>>,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Cat(String),
}

impl RawDataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Binarized samples: features in {0,1}, labels in `0..K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryDataset {
    features: Vec<u8>, // row-major, n_samples x n_features
    feature_names: Vec<String>,
    labels: Vec<usize>,
    class_names: Vec<String>,
    intercept_index: Option<usize>,
}

impl BinaryDataset {
    /// Builds a dataset and checks every invariant, including that each
    /// class occurs at least once.
    pub fn new(
        features: Vec<u8>,
        feature_names: Vec<String>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        intercept_index: Option<usize>,
    ) -> Result<Self> {
        let ds = Self::from_parts(features, feature_names, labels, class_names, intercept_index)?;
        for (k, count) in ds.class_counts().iter().enumerate() {
            if *count == 0 {
                return Err(Error::InvalidDataset(format!(
                    "class `{}` has no samples",
                    ds.class_names[k]
                )));
            }
        }
        Ok(ds)
    }

    /// Like [`BinaryDataset::new`] but allows empty classes. Used for test
    /// folds, which legitimately may miss a class.
    pub fn from_parts(
        features: Vec<u8>,
        feature_names: Vec<String>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        intercept_index: Option<usize>,
    ) -> Result<Self> {
        let d = feature_names.len();
        let n = labels.len();
        if d == 0 || n == 0 {
            return Err(Error::InvalidDataset(
                "dataset must have at least one sample and one feature".into(),
            ));
        }
        if features.len() != n * d {
            return Err(Error::InvalidDataset(format!(
                "feature matrix has {} entries, expected {} x {}",
                features.len(),
                n,
                d
            )));
        }
        if let Some(bad) = features.iter().find(|v| **v > 1) {
            return Err(Error::InvalidDataset(format!(
                "feature entry {bad} is not 0/1"
            )));
        }
        let k = class_names.len();
        if k < 2 {
            return Err(Error::InvalidDataset(
                "dataset must have at least two classes".into(),
            ));
        }
        if let Some(bad) = labels.iter().find(|l| **l >= k) {
            return Err(Error::InvalidDataset(format!(
                "label index {bad} out of range for {k} classes"
            )));
        }
        if let Some(idx) = intercept_index {
            if idx >= d {
                return Err(Error::InvalidDataset(
                    "intercept index out of range".into(),
                ));
            }
            for i in 0..n {
                if features[i * d + idx] != 1 {
                    return Err(Error::InvalidDataset(format!(
                        "intercept column is not 1 on sample {i}"
                    )));
                }
            }
        }
        Ok(BinaryDataset {
            features,
            feature_names,
            labels,
            class_names,
            intercept_index,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    #[inline]
    pub fn feature(&self, sample: usize, feature: usize) -> u8 {
        self.features[sample * self.n_features() + feature]
    }

    #[inline]
    pub fn sample(&self, sample: usize) -> &[u8] {
        let d = self.n_features();
        &self.features[sample * d..(sample + 1) * d]
    }

    #[inline]
    pub fn label(&self, sample: usize) -> usize {
        self.labels[sample]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn intercept_index(&self) -> Option<usize> {
        self.intercept_index
    }

    /// Number of samples per class; sums to `n_samples`.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|f| f == name)
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.class_names.iter().position(|c| c == name)
    }

    /// Dataset restricted to `indices`, preserving class and feature lists.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let d = self.n_features();
        let mut features = Vec::with_capacity(indices.len() * d);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.n_samples() {
                return Err(Error::InvalidDataset(format!(
                    "subset index {i} out of range"
                )));
            }
            features.extend_from_slice(self.sample(i));
            labels.push(self.label(i));
        }
        Self::from_parts(
            features,
            self.feature_names.clone(),
            labels,
            self.class_names.clone(),
            self.intercept_index,
        )
    }
}

/// The four group-fairness criteria, each applied per sensitive label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FairnessMetric {
    /// Equal prediction rates across groups.
    Sp,
    /// Equal false-positive rates across groups.
    Pe,
    /// Equal true-positive rates across groups.
    Eo,
    /// Both predictive equality and equal opportunity.
    Eod,
}

impl FairnessMetric {
    pub fn as_str(self) -> &'static str {
        match self {
            FairnessMetric::Sp => "sp",
            FairnessMetric::Pe => "pe",
            FairnessMetric::Eo => "eo",
            FairnessMetric::Eod => "eod",
        }
    }
}

impl std::str::FromStr for FairnessMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sp" => Ok(FairnessMetric::Sp),
            "pe" => Ok(FairnessMetric::Pe),
            "eo" => Ok(FairnessMetric::Eo),
            "eod" => Ok(FairnessMetric::Eod),
            other => Err(Error::InvalidConfig(format!(
                "unknown fairness metric `{other}` (expected sp, pe, eo or eod)"
            ))),
        }
    }
}

/// Protected-group membership (one feature-value predicate), the sensitive
/// labels the constraint applies to, and the tolerated rate gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessSpec<F> {
    /// Index of the binarized feature defining the group.
    pub protected_feature: usize,
    /// Feature value (0 or 1) that marks membership in the group.
    pub protected_value: u8,
    /// Non-empty set of class indices the constraint applies to.
    pub sensitive_labels: Vec<usize>,
    pub metric: FairnessMetric,
    /// Allowed absolute rate gap, in [0, 1].
    pub tolerance: F,
}

impl<F: Real> FairnessSpec<F> {
    /// True when `sample` belongs to the protected group.
    pub fn in_group(&self, ds: &BinaryDataset, sample: usize) -> bool {
        ds.feature(sample, self.protected_feature) == self.protected_value
    }

    /// Membership mask over the whole dataset.
    pub fn group_mask(&self, ds: &BinaryDataset) -> Vec<bool> {
        (0..ds.n_samples()).map(|i| self.in_group(ds, i)).collect()
    }

    /// Checks the spec against a dataset: group predicate must split the
    /// samples non-trivially and sensitive labels must exist.
    pub fn validate(&self, ds: &BinaryDataset) -> Result<()> {
        if self.protected_feature >= ds.n_features() {
            return Err(Error::InvalidConfig(format!(
                "protected feature index {} out of range",
                self.protected_feature
            )));
        }
        if self.protected_value > 1 {
            return Err(Error::InvalidConfig(
                "protected value must be 0 or 1".into(),
            ));
        }
        if self.sensitive_labels.is_empty() {
            return Err(Error::InvalidConfig(
                "sensitive label set must be non-empty".into(),
            ));
        }
        for &k in &self.sensitive_labels {
            if k >= ds.n_classes() {
                return Err(Error::InvalidConfig(format!(
                    "sensitive label index {k} out of range"
                )));
            }
        }
        if self.tolerance < F::zero() || self.tolerance > F::one() {
            return Err(Error::InvalidConfig(
                "fairness tolerance must lie in [0, 1]".into(),
            ));
        }
        let in_group = self.group_mask(ds).iter().filter(|b| **b).count();
        if in_group == 0 || in_group == ds.n_samples() {
            return Err(Error::DegenerateProtectedGroup);
        }
        Ok(())
    }
}

/// Fold assignment for cross-validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub fold_count: usize,
    pub seed: u64,
    /// `assignment[i]` is the fold that holds sample `i` as test data.
    pub assignment: Vec<usize>,
}

impl SplitPlan {
    /// Stratified assignment: samples are shuffled per class and dealt
    /// round-robin with a cursor shared across classes, so fold sizes
    /// differ by at most one globally and per class.
    pub fn stratified(ds: &BinaryDataset, fold_count: usize, seed: u64) -> Result<Self> {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;

        if fold_count < 2 {
            return Err(Error::InvalidSplit(
                "fold count must be at least 2".into(),
            ));
        }
        if fold_count > ds.n_samples() {
            return Err(Error::InvalidSplit(format!(
                "fold count {} exceeds sample count {}",
                fold_count,
                ds.n_samples()
            )));
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut assignment = vec![0usize; ds.n_samples()];
        let mut cursor = 0usize;
        for k in 0..ds.n_classes() {
            let mut members: Vec<usize> =
                (0..ds.n_samples()).filter(|&i| ds.label(i) == k).collect();
            members.shuffle(&mut rng);
            for i in members {
                assignment[i] = cursor % fold_count;
                cursor += 1;
            }
        }
        Ok(SplitPlan {
            fold_count,
            seed,
            assignment,
        })
    }
}

/// Cross-validation folds: pair `i` holds (train, test) where test is fold
/// `i` and train is the union of the others.
pub fn split(ds: &BinaryDataset, plan: &SplitPlan) -> Result<Vec<(BinaryDataset, BinaryDataset)>> {
    if plan.assignment.len() != ds.n_samples() {
        return Err(Error::InvalidSplit(format!(
            "plan covers {} samples, dataset has {}",
            plan.assignment.len(),
            ds.n_samples()
        )));
    }
    // Every class must appear in every training fold so per-class counts
    // stay positive for the balanced objective.
    for fold in 0..plan.fold_count {
        for k in 0..ds.n_classes() {
            let in_training = (0..ds.n_samples())
                .any(|i| ds.label(i) == k && plan.assignment[i] != fold);
            if !in_training {
                return Err(Error::ClassMissingFromFold {
                    class: ds.class_names()[k].clone(),
                    fold,
                });
            }
        }
    }
    let mut out = Vec::with_capacity(plan.fold_count);
    for fold in 0..plan.fold_count {
        let train_idx: Vec<usize> = (0..ds.n_samples())
            .filter(|&i| plan.assignment[i] != fold)
            .collect();
        let test_idx: Vec<usize> = (0..ds.n_samples())
            .filter(|&i| plan.assignment[i] == fold)
            .collect();
        out.push((ds.subset(&train_idx)?, ds.subset(&test_idx)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> BinaryDataset {
        // 10 samples, 2 features + intercept, 2 classes, 5 per class.
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for i in 0..10 {
            features.extend_from_slice(&[(i % 2) as u8, (i / 5) as u8, 1]);
            labels.push(i % 2);
        }
        BinaryDataset::new(
            features,
            vec!["a".into(), "b".into(), "(intercept)".into()],
            labels,
            vec!["no".into(), "yes".into()],
            Some(2),
        )
        .unwrap()
    }

    #[test]
    fn class_counts_sum_to_n() {
        let ds = tiny();
        assert_eq!(ds.class_counts().iter().sum::<usize>(), ds.n_samples());
    }

    #[test]
    fn rejects_non_binary_entries() {
        let err = BinaryDataset::new(
            vec![0, 2],
            vec!["a".into(), "b".into()],
            vec![0],
            vec!["x".into(), "y".into()],
            None,
        );
        assert!(err.is_err());
    }

    #[test]
    fn rejects_broken_intercept() {
        let err = BinaryDataset::new(
            vec![1, 0],
            vec!["a".into(), "(intercept)".into()],
            vec![0, 1].into_iter().take(1).collect(),
            vec!["x".into(), "y".into()],
            Some(1),
        );
        assert!(err.is_err());
    }

    #[test]
    fn split_ten_samples_five_folds() {
        let ds = tiny();
        let plan = SplitPlan::stratified(&ds, 5, 7).unwrap();
        let folds = split(&ds, &plan).unwrap();
        assert_eq!(folds.len(), 5);
        for (train, test) in &folds {
            assert_eq!(test.n_samples(), 2);
            assert_eq!(train.n_samples(), 8);
        }
    }

    #[test]
    fn split_rejects_more_folds_than_samples() {
        let ds = tiny();
        let one = ds.subset(&[0]).unwrap();
        assert!(SplitPlan::stratified(&one, 2, 0).is_err());
    }

    #[test]
    fn split_reports_class_stuck_in_one_fold() {
        // Class `yes` has a single sample: its training fold must fail.
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for i in 0..6 {
            features.extend_from_slice(&[(i % 2) as u8, 1]);
            labels.push(if i == 0 { 1 } else { 0 });
        }
        let ds = BinaryDataset::new(
            features,
            vec!["a".into(), "(intercept)".into()],
            labels,
            vec!["no".into(), "yes".into()],
            Some(1),
        )
        .unwrap();
        let plan = SplitPlan::stratified(&ds, 3, 1).unwrap();
        match split(&ds, &plan) {
            Err(Error::ClassMissingFromFold { class, .. }) => assert_eq!(class, "yes"),
            other => panic!("expected ClassMissingFromFold, got {other:?}"),
        }
    }

    #[test]
    fn test_folds_reassemble_the_dataset() {
        let ds = tiny();
        let plan = SplitPlan::stratified(&ds, 4, 3).unwrap();
        let folds = split(&ds, &plan).unwrap();
        let mut rows: Vec<(Vec<u8>, usize)> = Vec::new();
        for (_, test) in &folds {
            for i in 0..test.n_samples() {
                rows.push((test.sample(i).to_vec(), test.label(i)));
            }
        }
        rows.sort();
        let mut expected: Vec<(Vec<u8>, usize)> = (0..ds.n_samples())
            .map(|i| (ds.sample(i).to_vec(), ds.label(i)))
            .collect();
        expected.sort();
        assert_eq!(rows, expected);
    }

    #[test]
    fn fold_sizes_differ_by_at_most_one() {
        let ds = tiny();
        let plan = SplitPlan::stratified(&ds, 3, 9).unwrap();
        let mut sizes = vec![0usize; 3];
        for &f in &plan.assignment {
            sizes[f] += 1;
        }
        let min = *sizes.iter().min().unwrap();
        let max = *sizes.iter().max().unwrap();
        assert!(max - min <= 1, "sizes {sizes:?}");
    }

    #[test]
    fn fairness_spec_group_is_single_feature_predicate() {
        let ds = tiny();
        let spec = FairnessSpec::<f64> {
            protected_feature: 0,
            protected_value: 1,
            sensitive_labels: vec![1],
            metric: FairnessMetric::Sp,
            tolerance: 0.1,
        };
        spec.validate(&ds).unwrap();
        for i in 0..ds.n_samples() {
            assert_eq!(spec.in_group(&ds, i), ds.feature(i, 0) == 1);
        }
    }

    #[test]
    fn fairness_spec_rejects_trivial_group() {
        let ds = tiny();
        let spec = FairnessSpec::<f64> {
            protected_feature: 2, // intercept: everyone is in the group
            protected_value: 1,
            sensitive_labels: vec![0],
            metric: FairnessMetric::Eo,
            tolerance: 0.5,
        };
        assert!(matches!(
            spec.validate(&ds),
            Err(Error::DegenerateProtectedGroup)
        ));
    }
}
