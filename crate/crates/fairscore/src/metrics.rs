//! Confusion matrices, (balanced) accuracy and group-fairness violations.

use serde::{Deserialize, Serialize};

use crate::dataset::{BinaryDataset, FairnessMetric, FairnessSpec};
use crate::error::{Error, Result};
use crate::num::{ru, Real};
use crate::scoring::MultiScoringSystem;

/// K x K counts; rows are actual classes, columns predicted classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn from_predictions(labels: &[usize], predictions: &[usize], n_classes: usize) -> Self {
        let mut counts = vec![vec![0usize; n_classes]; n_classes];
        for (&y, &p) in labels.iter().zip(predictions) {
            counts[y][p] += 1;
        }
        ConfusionMatrix { counts }
    }

    pub fn n_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, actual: usize, predicted: usize) -> usize {
        self.counts[actual][predicted]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|row| row.iter().sum::<usize>()).sum()
    }

    /// Samples of class `k`, i.e. the sum of row `k`.
    pub fn class_count(&self, k: usize) -> usize {
        self.counts[k].iter().sum()
    }

    pub fn true_positives(&self, k: usize) -> usize {
        self.counts[k][k]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.counts
    }
}

/// Tallies `model.predict` over the whole dataset.
pub fn confusion(model: &MultiScoringSystem, ds: &BinaryDataset) -> Result<ConfusionMatrix> {
    align(model, ds)?;
    let predictions = model.predict_all(ds)?;
    Ok(ConfusionMatrix::from_predictions(
        ds.labels(),
        &predictions,
        ds.n_classes(),
    ))
}

/// Fraction of correctly classified samples.
pub fn accuracy<F: Real>(cm: &ConfusionMatrix) -> Result<F> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyConfusion);
    }
    let correct: usize = (0..cm.n_classes()).map(|k| cm.true_positives(k)).sum();
    Ok(ru::<F>(correct) / ru::<F>(total))
}

/// Mean of per-class recalls; every class must have samples.
pub fn balanced_accuracy<F: Real>(cm: &ConfusionMatrix) -> Result<F> {
    if cm.total() == 0 {
        return Err(Error::EmptyConfusion);
    }
    let mut sum = F::zero();
    for k in 0..cm.n_classes() {
        let nk = cm.class_count(k);
        if nk == 0 {
            return Err(Error::EmptyClass {
                class: format!("{k}"),
            });
        }
        sum = sum + ru::<F>(cm.true_positives(k)) / ru::<F>(nk);
    }
    Ok(sum / ru::<F>(cm.n_classes()))
}

/// Which conditional rate a gap row measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapPart {
    /// P(pred = k | group): statistical parity.
    Prediction,
    /// P(pred = k | group, y != k): predictive equality.
    FalsePositive,
    /// P(pred = k | group, y = k): equal opportunity.
    TruePositive,
}

/// One sensitive label's rates in the protected group and its complement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow<F> {
    pub label: usize,
    pub part: GapPart,
    pub rate_group: F,
    pub rate_rest: F,
    pub gap: F,
    pub group_count: usize,
    pub rest_count: usize,
}

/// Per-label rates and gaps; the reported violation is the largest gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessReport<F> {
    pub metric: FairnessMetric,
    pub rows: Vec<GapRow<F>>,
    /// Sensitive labels skipped because a conditional subgroup was empty
    /// (only under [`EmptySubgroup::Skip`]).
    pub skipped_labels: Vec<usize>,
}

impl<F: Real> FairnessReport<F> {
    /// Max gap over all rows (and over both parts for equalized odds).
    pub fn violation(&self) -> F {
        self.rows
            .iter()
            .map(|r| r.gap)
            .fold(F::zero(), |a, b| if b > a { b } else { a })
    }
}

/// What to do when a conditional subgroup (e.g. group members with label k)
/// is empty: fail, or skip that label and record it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmptySubgroup {
    Error,
    Skip,
}

/// Empirical fairness violation of a model on a dataset. Errors on empty
/// conditional subgroups; use [`fairness_violation_with`] to skip them.
pub fn fairness_violation<F: Real>(
    model: &MultiScoringSystem,
    ds: &BinaryDataset,
    spec: &FairnessSpec<F>,
) -> Result<FairnessReport<F>> {
    align(model, ds)?;
    let predictions = model.predict_all(ds)?;
    fairness_from_predictions(ds, &predictions, spec, EmptySubgroup::Error)
}

pub fn fairness_violation_with<F: Real>(
    model: &MultiScoringSystem,
    ds: &BinaryDataset,
    spec: &FairnessSpec<F>,
    policy: EmptySubgroup,
) -> Result<FairnessReport<F>> {
    align(model, ds)?;
    let predictions = model.predict_all(ds)?;
    fairness_from_predictions(ds, &predictions, spec, policy)
}

/// Rate computation from raw predictions so callers can verify solver
/// output without re-running a model.
pub fn fairness_from_predictions<F: Real>(
    ds: &BinaryDataset,
    predictions: &[usize],
    spec: &FairnessSpec<F>,
    policy: EmptySubgroup,
) -> Result<FairnessReport<F>> {
    spec.validate(ds)?;
    if predictions.len() != ds.n_samples() {
        return Err(Error::DimensionMismatch {
            expected: ds.n_samples(),
            got: predictions.len(),
        });
    }
    let mask = spec.group_mask(ds);
    let parts: &[GapPart] = match spec.metric {
        FairnessMetric::Sp => &[GapPart::Prediction],
        FairnessMetric::Pe => &[GapPart::FalsePositive],
        FairnessMetric::Eo => &[GapPart::TruePositive],
        FairnessMetric::Eod => &[GapPart::FalsePositive, GapPart::TruePositive],
    };
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &part in parts {
        for &label in &spec.sensitive_labels {
            match gap_row(ds, predictions, &mask, label, part)? {
                Ok(row) => rows.push(row),
                Err(empty_side) => match policy {
                    EmptySubgroup::Error => {
                        return Err(Error::EmptyConditionalSubgroup {
                            label: ds.class_names()[label].clone(),
                            group: empty_side.to_string(),
                        })
                    }
                    EmptySubgroup::Skip => {
                        if !skipped.contains(&label) {
                            skipped.push(label);
                        }
                    }
                },
            }
        }
    }
    Ok(FairnessReport {
        metric: spec.metric,
        rows,
        skipped_labels: skipped,
    })
}

/// Inner error is the name of the empty side ("protected" / "complement").
#[allow(clippy::type_complexity)]
fn gap_row<F: Real>(
    ds: &BinaryDataset,
    predictions: &[usize],
    mask: &[bool],
    label: usize,
    part: GapPart,
) -> Result<std::result::Result<GapRow<F>, &'static str>> {
    let condition = |i: usize| match part {
        GapPart::Prediction => true,
        GapPart::FalsePositive => ds.label(i) != label,
        GapPart::TruePositive => ds.label(i) == label,
    };
    let mut group_hits = 0usize;
    let mut group_total = 0usize;
    let mut rest_hits = 0usize;
    let mut rest_total = 0usize;
    for i in 0..ds.n_samples() {
        if !condition(i) {
            continue;
        }
        if mask[i] {
            group_total += 1;
            group_hits += usize::from(predictions[i] == label);
        } else {
            rest_total += 1;
            rest_hits += usize::from(predictions[i] == label);
        }
    }
    if group_total == 0 {
        return Ok(Err("protected"));
    }
    if rest_total == 0 {
        return Ok(Err("complement"));
    }
    let rate_group = ru::<F>(group_hits) / ru::<F>(group_total);
    let rate_rest = ru::<F>(rest_hits) / ru::<F>(rest_total);
    let gap = (rate_group - rate_rest).abs();
    Ok(Ok(GapRow {
        label,
        part,
        rate_group,
        rate_rest,
        gap,
        group_count: group_total,
        rest_count: rest_total,
    }))
}

fn align(model: &MultiScoringSystem, ds: &BinaryDataset) -> Result<()> {
    if model.n_features() != ds.n_features() || model.n_classes() != ds.n_classes() {
        return Err(Error::DimensionMismatch {
            expected: model.n_features(),
            got: ds.n_features(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Dataset with features chosen so a given prediction pattern is easy to
    /// force: feature j of sample i is the j-th bit of i, plus intercept.
    fn dataset(labels: Vec<usize>, n_classes: usize) -> BinaryDataset {
        let n = labels.len();
        let d = 4;
        let mut features = Vec::new();
        for i in 0..n {
            for j in 0..d - 1 {
                features.push(((i >> j) & 1) as u8);
            }
            features.push(1);
        }
        BinaryDataset::from_parts(
            features,
            (0..d - 1)
                .map(|j| format!("b{j}"))
                .chain(std::iter::once("(intercept)".into()))
                .collect(),
            labels,
            (0..n_classes).map(|k| format!("c{k}")).collect(),
            Some(d - 1),
        )
        .unwrap()
    }

    fn constant_model(n_classes: usize, class: usize) -> MultiScoringSystem {
        let mut coefficients = vec![vec![0i64; 4]; n_classes];
        coefficients[class][3] = 1;
        MultiScoringSystem::new(
            (0..n_classes).map(|k| format!("c{k}")).collect(),
            (0..3)
                .map(|j| format!("b{j}"))
                .chain(std::iter::once("(intercept)".into()))
                .collect(),
            coefficients,
            -9,
            9,
        )
        .unwrap()
    }

    #[test]
    fn perfect_predictions_give_diagonal_matrix_and_accuracy_one() {
        let labels = vec![0, 1, 2, 0, 1, 2, 2];
        let cm = ConfusionMatrix::from_predictions(&labels, &labels, 3);
        for k in 0..3 {
            assert_eq!(cm.class_count(k), labels.iter().filter(|&&l| l == k).count());
            for j in 0..3 {
                if j != k {
                    assert_eq!(cm.count(k, j), 0);
                }
            }
        }
        assert_eq!(accuracy::<f64>(&cm).unwrap(), 1.0);
        assert_eq!(balanced_accuracy::<f64>(&cm).unwrap(), 1.0);
    }

    #[test]
    fn constant_predictor_fills_one_column() {
        let ds = dataset(vec![0, 0, 1, 2, 1, 0], 3);
        let model = constant_model(3, 1);
        let cm = confusion(&model, &ds).unwrap();
        for k in 0..3 {
            assert_eq!(cm.count(k, 1), cm.class_count(k));
        }
        // Only class 1 is ever recalled: balanced accuracy is exactly 1/K.
        assert_eq!(balanced_accuracy::<f64>(&cm).unwrap(), 1.0 / 3.0);
        // Accuracy equals the share of class-1 samples.
        assert_eq!(accuracy::<f64>(&cm).unwrap(), 2.0 / 6.0);
    }

    #[test]
    fn confusion_matches_independent_recount() {
        let ds = dataset(vec![0, 1, 1, 0, 1, 0, 1, 1], 2);
        // A non-trivial model over the bit features.
        let model = MultiScoringSystem::new(
            vec!["c0".into(), "c1".into()],
            vec!["b0".into(), "b1".into(), "b2".into(), "(intercept)".into()],
            vec![vec![2, -1, 0, 0], vec![0, 1, 1, -1]],
            -9,
            9,
        )
        .unwrap();
        let cm = confusion(&model, &ds).unwrap();
        let mut manual = vec![vec![0usize; 2]; 2];
        for i in 0..ds.n_samples() {
            let p = model.predict(ds.sample(i)).unwrap();
            manual[ds.label(i)][p] += 1;
        }
        assert_eq!(cm.rows(), manual.as_slice());
        assert_eq!(cm.total(), ds.n_samples());
    }

    #[test]
    fn balanced_accuracy_matches_hand_computation() {
        let labels = vec![0, 0, 0, 1, 1, 2];
        let preds = vec![0, 0, 1, 1, 0, 2];
        let cm = ConfusionMatrix::from_predictions(&labels, &preds, 3);
        let expected = (2.0 / 3.0 + 1.0 / 2.0 + 1.0) / 3.0;
        assert!((balanced_accuracy::<f64>(&cm).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn balanced_accuracy_errors_on_empty_class() {
        let cm = ConfusionMatrix::from_predictions(&[0, 0], &[0, 1], 2);
        assert!(matches!(
            balanced_accuracy::<f64>(&cm),
            Err(Error::EmptyClass { .. })
        ));
    }

    fn spec(metric: FairnessMetric, labels: Vec<usize>) -> FairnessSpec<f64> {
        FairnessSpec {
            protected_feature: 0,
            protected_value: 1,
            sensitive_labels: labels,
            metric,
            tolerance: 1.0,
        }
    }

    #[test]
    fn constant_predictor_has_zero_violation_for_every_metric() {
        let ds = dataset(vec![0, 1, 2, 0, 1, 2, 0, 1], 3);
        let model = constant_model(3, 2);
        for metric in [
            FairnessMetric::Sp,
            FairnessMetric::Pe,
            FairnessMetric::Eo,
            FairnessMetric::Eod,
        ] {
            let report = fairness_violation_with(
                &ds_model_spec(&ds, metric),
                &ds,
                &spec(metric, vec![0, 1, 2]),
                EmptySubgroup::Skip,
            )
            .unwrap();
            assert_eq!(report.violation(), 0.0, "{metric:?}");
        }

        fn ds_model_spec(_: &BinaryDataset, _: FairnessMetric) -> MultiScoringSystem {
            constant_model(3, 2)
        }
        let _ = model;
    }

    #[test]
    fn hand_computed_sp_gap() {
        // 4 samples; group membership comes from bit 0 of the index:
        // samples 1 and 3 are in the group. Predictions for label 1:
        // group [1, 0], outside [1, 1] -> gap |0.5 - 1.0| = 0.5.
        let ds = dataset(vec![0, 0, 1, 1], 2);
        let predictions = vec![1, 1, 1, 0];
        let report = fairness_from_predictions(
            &ds,
            &predictions,
            &spec(FairnessMetric::Sp, vec![1]),
            EmptySubgroup::Error,
        )
        .unwrap();
        assert_eq!(report.rows.len(), 1);
        assert!((report.rows[0].gap - 0.5).abs() < 1e-15);
        assert!((report.violation() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn empty_conditional_subgroup_is_named() {
        // Label 1 never occurs inside the protected group -> EO on label 1
        // has an empty protected subgroup.
        let ds = dataset(vec![0, 0, 1, 0], 2);
        let predictions = vec![0, 0, 1, 0];
        let err = fairness_from_predictions(
            &ds,
            &predictions,
            &spec(FairnessMetric::Eo, vec![1]),
            EmptySubgroup::Error,
        );
        match err {
            Err(Error::EmptyConditionalSubgroup { label, group }) => {
                assert_eq!(label, "c1");
                assert_eq!(group, "protected");
            }
            other => panic!("expected EmptyConditionalSubgroup, got {other:?}"),
        }
        let skipped = fairness_from_predictions(
            &ds,
            &predictions,
            &spec(FairnessMetric::Eo, vec![1]),
            EmptySubgroup::Skip,
        )
        .unwrap();
        assert_eq!(skipped.skipped_labels, vec![1]);
        assert!(skipped.rows.is_empty());
    }

    #[test]
    fn eod_violation_is_exactly_max_of_pe_and_eo() {
        let ds = dataset(vec![0, 1, 1, 0, 1, 0, 1, 0], 2);
        let predictions = vec![1, 1, 0, 0, 1, 1, 0, 0];
        let pe = fairness_from_predictions(
            &ds,
            &predictions,
            &spec(FairnessMetric::Pe, vec![0, 1]),
            EmptySubgroup::Skip,
        )
        .unwrap();
        let eo = fairness_from_predictions(
            &ds,
            &predictions,
            &spec(FairnessMetric::Eo, vec![0, 1]),
            EmptySubgroup::Skip,
        )
        .unwrap();
        let eod = fairness_from_predictions(
            &ds,
            &predictions,
            &spec(FairnessMetric::Eod, vec![0, 1]),
            EmptySubgroup::Skip,
        )
        .unwrap();
        assert_eq!(eod.violation(), pe.violation().max(eo.violation()));
    }

    proptest! {
        #[test]
        fn swapping_group_and_complement_preserves_gaps(
            labels in prop::collection::vec(0usize..2, 8),
            preds in prop::collection::vec(0usize..2, 8),
            metric_idx in 0usize..4,
        ) {
            let metric = [
                FairnessMetric::Sp,
                FairnessMetric::Pe,
                FairnessMetric::Eo,
                FairnessMetric::Eod,
            ][metric_idx];
            let mut labels = labels;
            labels[0] = 0;
            labels[1] = 1; // both classes present
            let ds = dataset(labels, 2);
            let a = fairness_from_predictions(
                &ds, &preds, &FairnessSpec {
                    protected_feature: 0,
                    protected_value: 1,
                    sensitive_labels: vec![0, 1],
                    metric,
                    tolerance: 1.0,
                }, EmptySubgroup::Skip).unwrap();
            let b = fairness_from_predictions(
                &ds, &preds, &FairnessSpec {
                    protected_feature: 0,
                    protected_value: 0, // complement as the group
                    sensitive_labels: vec![0, 1],
                    metric,
                    tolerance: 1.0,
                }, EmptySubgroup::Skip).unwrap();
            prop_assert_eq!(a.violation(), b.violation());
        }

        #[test]
        fn violation_is_monotone_in_sensitive_labels_and_bounded(
            labels in prop::collection::vec(0usize..3, 9),
            preds in prop::collection::vec(0usize..3, 9),
        ) {
            let mut labels = labels;
            labels[0] = 0;
            labels[1] = 1;
            labels[2] = 2;
            let ds = dataset(labels, 3);
            let make = |ks: Vec<usize>| FairnessSpec {
                protected_feature: 0,
                protected_value: 1,
                sensitive_labels: ks,
                metric: FairnessMetric::Sp,
                tolerance: 1.0,
            };
            let small = fairness_from_predictions(&ds, &preds, &make(vec![0]), EmptySubgroup::Skip)
                .unwrap()
                .violation();
            let big = fairness_from_predictions(
                &ds, &preds, &make(vec![0, 1, 2]), EmptySubgroup::Skip)
                .unwrap()
                .violation();
            prop_assert!(big >= small);
            prop_assert!((0.0..=1.0).contains(&big));
        }
    }
}
