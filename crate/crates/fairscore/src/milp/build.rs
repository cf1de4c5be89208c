//! Compiles (dataset, objective, sparsity budget, fairness spec) into a
//! mixed-integer linear model.
//!
//! Variables: one integer coefficient per (class, feature); a binary loss
//! indicator per sample; a binary activity indicator per coefficient; a
//! binary one-hot prediction indicator per (sample, class); and, unless
//! scores are inlined, one continuous score per (sample, class) defined by
//! an equality row. Big-M rows link scores to loss and prediction
//! indicators, activation rows force an activity indicator whenever its
//! coefficient is non-zero, cardinality rows cap active coefficients per
//! class, and fairness rows bound the gap between group prediction rates
//! (each absolute value as a pair of linear inequalities).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::{BinaryDataset, FairnessMetric, FairnessSpec};
use crate::error::{Error, Result};
use crate::num::{ri, ru, Real};

use super::model::{
    ConflictGroup, Constraint, MilpModel, ScoringMeta, Sense, VarKind, VarMaps, Variable,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// Minimize the fraction of misclassified samples.
    Accuracy,
    /// Minimize the sum of per-class misclassification rates (equivalent
    /// to maximizing balanced accuracy).
    BalancedAccuracy,
}

impl ObjectiveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectiveKind::Accuracy => "acc",
            ObjectiveKind::BalancedAccuracy => "bacc",
        }
    }
}

impl std::str::FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "acc" | "accuracy" => Ok(ObjectiveKind::Accuracy),
            "bacc" | "balanced" | "balanced_accuracy" => Ok(ObjectiveKind::BalancedAccuracy),
            other => Err(Error::InvalidConfig(format!(
                "unknown objective `{other}` (expected acc or bacc)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildConfig<F> {
    pub objective: ObjectiveKind,
    /// Maximum active coefficients per class scorer (>= 1).
    pub sparsity_limit: usize,
    pub l_min: i64,
    pub l_max: i64,
    pub fairness: Option<FairnessSpec<F>>,
    /// When false (default) the intercept column is neither counted
    /// against the sparsity budget nor penalized.
    pub penalize_intercept: bool,
    /// Divide conditional-rate sums by group sizes instead of by the
    /// conditional subgroup sizes.
    pub literal_denominators: bool,
    /// Substitute score equalities into the big-M rows, dropping the
    /// score variables. Same optima, smaller model.
    pub inline_scores: bool,
}

impl<F: Real> Default for BuildConfig<F> {
    fn default() -> Self {
        BuildConfig {
            objective: ObjectiveKind::Accuracy,
            sparsity_limit: 5,
            l_min: -9,
            l_max: 9,
            fairness: None,
            penalize_intercept: false,
            literal_denominators: false,
            inline_scores: false,
        }
    }
}

impl<F: Real> BuildConfig<F> {
    fn validate(&self, ds: &BinaryDataset) -> Result<()> {
        if self.sparsity_limit < 1 {
            return Err(Error::InvalidConfig(
                "sparsity limit must be at least 1".into(),
            ));
        }
        if !(self.l_min < 0 && 0 < self.l_max) {
            return Err(Error::InvalidConfig(format!(
                "coefficient bounds [{}, {}] must straddle 0 so activation rows can bind",
                self.l_min, self.l_max
            )));
        }
        if let Some(spec) = &self.fairness {
            spec.validate(ds)?;
        }
        Ok(())
    }
}

/// Per-sample big-M: with coefficients in `[l_min, l_max]` and `ones`
/// active features, any two scores of sample `i` differ by less than
/// `(l_max - l_min) * ones + gamma * K + 1`.
pub fn big_m<F: Real>(ds: &BinaryDataset, cfg: &BuildConfig<F>, sample: usize) -> F {
    let ones: i64 = ds.sample(sample).iter().map(|&v| i64::from(v)).sum();
    let k = ds.n_classes();
    let gamma = F::one() / (ru::<F>(2) * ru::<F>(k));
    ri::<F>(cfg.l_max - cfg.l_min) * ri::<F>(ones) + gamma * ru::<F>(k) + F::one()
}

pub fn build<F: Real>(ds: &BinaryDataset, cfg: &BuildConfig<F>) -> Result<MilpModel<F>> {
    cfg.validate(ds)?;
    let n = ds.n_samples();
    let d = ds.n_features();
    let k = ds.n_classes();
    let class_counts = ds.class_counts();
    if class_counts.iter().any(|&c| c == 0) {
        return Err(Error::InvalidDataset(
            "every class needs at least one training sample".into(),
        ));
    }
    let gamma = F::one() / (ru::<F>(2) * ru::<F>(k));
    // Worth of one active coefficient: strictly below any loss increment.
    let loss_unit_base = match cfg.objective {
        ObjectiveKind::Accuracy => n,
        ObjectiveKind::BalancedAccuracy => *class_counts.iter().min().unwrap(),
    };
    let reg_unit = F::one() / (ru::<F>(loss_unit_base * d * k) + F::one());

    let mut variables: Vec<Variable<F>> = Vec::new();
    let mut push_var = |variables: &mut Vec<Variable<F>>, name: String, kind, lower, upper| {
        variables.push(Variable {
            name,
            kind,
            lower,
            upper,
        });
        variables.len() - 1
    };

    let coeff: Vec<Vec<usize>> = (0..k)
        .map(|ki| {
            (0..d)
                .map(|j| {
                    push_var(
                        &mut variables,
                        format!("lam_{ki}_{j}"),
                        VarKind::Integer,
                        ri(cfg.l_min),
                        ri(cfg.l_max),
                    )
                })
                .collect()
        })
        .collect();
    let loss: Vec<usize> = (0..n)
        .map(|i| {
            push_var(
                &mut variables,
                format!("z_{i}"),
                VarKind::Binary,
                F::zero(),
                F::one(),
            )
        })
        .collect();
    let active: Vec<Vec<usize>> = (0..k)
        .map(|ki| {
            (0..d)
                .map(|j| {
                    push_var(
                        &mut variables,
                        format!("alpha_{ki}_{j}"),
                        VarKind::Binary,
                        F::zero(),
                        F::one(),
                    )
                })
                .collect()
        })
        .collect();
    let pred: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..k)
                .map(|ki| {
                    push_var(
                        &mut variables,
                        format!("pos_{i}_{ki}"),
                        VarKind::Binary,
                        F::zero(),
                        F::one(),
                    )
                })
                .collect()
        })
        .collect();
    let score: Option<Vec<Vec<usize>>> = if cfg.inline_scores {
        None
    } else {
        Some(
            (0..n)
                .map(|i| {
                    let ones: i64 = ds.sample(i).iter().map(|&v| i64::from(v)).sum();
                    (0..k)
                        .map(|ki| {
                            let offset = gamma * ru::<F>(ki);
                            push_var(
                                &mut variables,
                                format!("s_{i}_{ki}"),
                                VarKind::Continuous,
                                ri::<F>(cfg.l_min * ones) - offset,
                                ri::<F>(cfg.l_max * ones) - offset,
                            )
                        })
                        .collect()
                })
                .collect(),
        )
    };

    let ms: Vec<F> = (0..n).map(|i| big_m(ds, cfg, i)).collect();
    let mut constraints: Vec<Constraint<F>> = Vec::new();

    // Terms of `score(i, ka) - score(i, kb)` against the current variable
    // layout: either the two score variables or the inlined coefficient
    // combination, together with the constant offset moved to the rhs.
    let score_diff = |i: usize, ka: usize, kb: usize| -> (Vec<(usize, F)>, F) {
        match &score {
            Some(s) => (vec![(s[i][ka], F::one()), (s[i][kb], -F::one())], F::zero()),
            None => {
                let mut terms = Vec::new();
                for j in 0..d {
                    if ds.feature(i, j) == 1 {
                        terms.push((coeff[ka][j], F::one()));
                        terms.push((coeff[kb][j], -F::one()));
                    }
                }
                // score difference carries -gamma*(ka - kb); as rhs: +gamma*(ka - kb)
                let rhs = gamma * (ru::<F>(ka) - ru::<F>(kb));
                (terms, rhs)
            }
        }
    };

    // Loss link: score(y_i) - score(k') + M_i z_i >= 0 for all k' != y_i.
    for i in 0..n {
        let y = ds.label(i);
        for kp in 0..k {
            if kp == y {
                continue;
            }
            let (mut terms, rhs) = score_diff(i, y, kp);
            terms.push((loss[i], ms[i]));
            constraints.push(Constraint {
                name: format!("mis_{i}_{kp}"),
                terms,
                sense: Sense::Ge,
                rhs,
            });
        }
    }

    // Score definitions: s_{i,k} - sum_j lam_{k,j} x_{i,j} = -gamma*k.
    if let Some(s) = &score {
        for i in 0..n {
            for ki in 0..k {
                let mut terms = vec![(s[i][ki], F::one())];
                for j in 0..d {
                    if ds.feature(i, j) == 1 {
                        terms.push((coeff[ki][j], -F::one()));
                    }
                }
                constraints.push(Constraint {
                    name: format!("score_{i}_{ki}"),
                    terms,
                    sense: Sense::Eq,
                    rhs: -(gamma * ru::<F>(ki)),
                });
            }
        }
    }

    // Activation: lam <= l_max * alpha and lam >= l_min * alpha, so any
    // non-zero coefficient forces its indicator to one.
    for ki in 0..k {
        for j in 0..d {
            constraints.push(Constraint {
                name: format!("actp_{ki}_{j}"),
                terms: vec![(coeff[ki][j], F::one()), (active[ki][j], -ri::<F>(cfg.l_max))],
                sense: Sense::Le,
                rhs: F::zero(),
            });
            constraints.push(Constraint {
                name: format!("actn_{ki}_{j}"),
                terms: vec![(coeff[ki][j], F::one()), (active[ki][j], -ri::<F>(cfg.l_min))],
                sense: Sense::Ge,
                rhs: F::zero(),
            });
        }
    }

    // Cardinality: per class, at most `sparsity_limit` active coefficients
    // among the penalized columns.
    let penalized = |j: usize| cfg.penalize_intercept || Some(j) != ds.intercept_index();
    for ki in 0..k {
        let terms: Vec<(usize, F)> = (0..d)
            .filter(|&j| penalized(j))
            .map(|j| (active[ki][j], F::one()))
            .collect();
        constraints.push(Constraint {
            name: format!("card_{ki}"),
            terms,
            sense: Sense::Le,
            rhs: ru(cfg.sparsity_limit),
        });
    }

    // Prediction dominance: score(k) - score(k') - M_i pos_{i,k} >= -M_i,
    // i.e. pos can be one only for a maximal score.
    for i in 0..n {
        for ka in 0..k {
            for kb in 0..k {
                if ka == kb {
                    continue;
                }
                let (mut terms, rhs) = score_diff(i, ka, kb);
                terms.push((pred[i][ka], -ms[i]));
                constraints.push(Constraint {
                    name: format!("dom_{i}_{ka}_{kb}"),
                    terms,
                    sense: Sense::Ge,
                    rhs: rhs - ms[i],
                });
            }
        }
    }

    // One-hot: exactly one prediction indicator per sample.
    for i in 0..n {
        constraints.push(Constraint {
            name: format!("one_{i}"),
            terms: (0..k).map(|ki| (pred[i][ki], F::one())).collect(),
            sense: Sense::Eq,
            rhs: F::one(),
        });
    }

    // Fairness: for each sensitive label (and each part of the equalized
    // odds pair), |group rate - complement rate| <= tolerance, written as
    // two linear rows.
    let mut warnings = Vec::new();
    let mut has_fairness_rows = false;
    if let Some(spec) = &cfg.fairness {
        let mask = spec.group_mask(ds);
        let parts: &[(&str, Option<bool>)] = match spec.metric {
            // condition on y_i == label? None = unconditioned
            FairnessMetric::Sp => &[("fsp", None)],
            FairnessMetric::Pe => &[("fpe", Some(false))],
            FairnessMetric::Eo => &[("feo", Some(true))],
            FairnessMetric::Eod => &[("fpe", Some(false)), ("feo", Some(true))],
        };
        for &(tag, label_match) in parts {
            for &lbl in &spec.sensitive_labels {
                let applies = |i: usize| match label_match {
                    None => true,
                    Some(eq) => (ds.label(i) == lbl) == eq,
                };
                let in_count = (0..n).filter(|&i| applies(i) && mask[i]).count();
                let out_count = (0..n).filter(|&i| applies(i) && !mask[i]).count();
                let (den_in, den_out) = if cfg.literal_denominators {
                    (
                        mask.iter().filter(|m| **m).count(),
                        mask.iter().filter(|m| !**m).count(),
                    )
                } else {
                    (in_count, out_count)
                };
                if den_in == 0 || den_out == 0 {
                    warnings.push(format!(
                        "fairness rows {tag} for label `{}` dropped: empty conditional subgroup",
                        ds.class_names()[lbl]
                    ));
                    continue;
                }
                let mut terms = Vec::new();
                for i in 0..n {
                    if !applies(i) {
                        continue;
                    }
                    let w = if mask[i] {
                        F::one() / ru::<F>(den_in)
                    } else {
                        -(F::one() / ru::<F>(den_out))
                    };
                    terms.push((pred[i][lbl], w));
                }
                constraints.push(Constraint {
                    name: format!("{tag}_{lbl}_up"),
                    terms: terms.clone(),
                    sense: Sense::Le,
                    rhs: spec.tolerance,
                });
                constraints.push(Constraint {
                    name: format!("{tag}_{lbl}_lo"),
                    terms: terms.into_iter().map(|(idx, w)| (idx, -w)).collect(),
                    sense: Sense::Le,
                    rhs: spec.tolerance,
                });
                has_fairness_rows = true;
            }
        }
    }

    // Objective: per-sample loss weight plus the uniform activity weight
    // on penalized coefficients.
    let mut objective: Vec<(usize, F)> = Vec::new();
    for i in 0..n {
        let w = match cfg.objective {
            ObjectiveKind::Accuracy => F::one() / ru::<F>(n),
            ObjectiveKind::BalancedAccuracy => F::one() / ru::<F>(class_counts[ds.label(i)]),
        };
        objective.push((loss[i], w));
    }
    for ki in 0..k {
        for j in 0..d {
            if penalized(j) {
                objective.push((active[ki][j], reg_unit));
            }
        }
    }
    // Dropping one coefficient must never pay for an extra error.
    debug_assert!(reg_unit * ru::<F>(d * k) < F::one() / ru::<F>(loss_unit_base));

    // Duplicate feature rows with mixed labels force errors on any
    // deterministic classifier; record them for bound strengthening.
    let conflict_groups = conflict_groups(ds);

    let maps = VarMaps {
        coeff,
        loss,
        active,
        pred,
        score,
    };
    let meta = ScoringMeta {
        dataset: ds.clone(),
        l_min: cfg.l_min,
        l_max: cfg.l_max,
        sparsity_limit: cfg.sparsity_limit,
        penalize_intercept: cfg.penalize_intercept,
        literal_denominators: cfg.literal_denominators,
        inline_scores: cfg.inline_scores,
        fairness: cfg.fairness.clone(),
        gamma,
        reg_unit,
        big_m: ms,
        conflict_groups,
        has_fairness_rows,
    };
    Ok(MilpModel {
        name: format!("scoring_n{n}_d{d}_k{k}"),
        variables,
        constraints,
        objective,
        maps: Some(maps),
        meta: Some(meta),
        warnings,
    })
}

fn conflict_groups(ds: &BinaryDataset) -> Vec<ConflictGroup> {
    let mut groups: BTreeMap<&[u8], Vec<usize>> = BTreeMap::new();
    for i in 0..ds.n_samples() {
        groups.entry(ds.sample(i)).or_default().push(i);
    }
    groups
        .into_values()
        .filter_map(|samples| {
            if samples.len() < 2 {
                return None;
            }
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for &i in &samples {
                *counts.entry(ds.label(i)).or_insert(0) += 1;
            }
            let plurality = counts.values().copied().max().unwrap_or(0);
            let min_errors = samples.len() - plurality;
            if min_errors == 0 {
                None
            } else {
                Some(ConflictGroup {
                    samples,
                    min_errors,
                })
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::FairnessMetric;
    use crate::num::rf;

    fn dataset(labels: Vec<usize>, base_features: usize, n_classes: usize) -> BinaryDataset {
        // feature j of sample i = bit j of i, plus intercept
        let n = labels.len();
        let d = base_features + 1;
        let mut features = Vec::new();
        for i in 0..n {
            for j in 0..base_features {
                features.push(((i >> j) & 1) as u8);
            }
            features.push(1);
        }
        BinaryDataset::new(
            features,
            (0..base_features)
                .map(|j| format!("f{j}"))
                .chain(std::iter::once("(intercept)".into()))
                .collect(),
            labels,
            (0..n_classes).map(|c| format!("c{c}")).collect(),
            Some(d - 1),
        )
        .unwrap()
    }

    #[test]
    fn census_matches_closed_form_without_fairness() {
        // n=4 samples, d=2 features (one is the intercept), k=2 classes.
        let ds = dataset(vec![0, 1, 0, 1], 1, 2);
        let (n, d, k) = (4usize, 2usize, 2usize);
        let model = build(&ds, &BuildConfig::<f64>::default()).unwrap();
        let census = model.census();
        assert_eq!(census.integer_vars, k * d); // coefficients
        assert_eq!(census.binary_vars, n + k * d + n * k); // loss + activity + prediction
        assert_eq!(census.continuous_vars, n * k); // scores
        let expected_rows = n * (k - 1)   // loss link
            + n * k                       // score definitions
            + 2 * k * d                   // activation pairs
            + k                           // cardinality
            + n * k * (k - 1)             // prediction dominance
            + n; // one-hot
        assert_eq!(census.constraints, expected_rows);
        assert_eq!(census.rows_by_family["mis"], n * (k - 1));
        assert_eq!(census.rows_by_family["dom"], n * k * (k - 1));
    }

    #[test]
    fn single_label_sp_adds_exactly_two_rows() {
        let ds = dataset(vec![0, 1, 0, 1, 0, 1], 2, 2);
        let mut cfg = BuildConfig::<f64>::default();
        let base_rows = build(&ds, &cfg).unwrap().n_constraints();
        cfg.fairness = Some(FairnessSpec {
            protected_feature: 0,
            protected_value: 1,
            sensitive_labels: vec![1],
            metric: FairnessMetric::Sp,
            tolerance: 0.01,
        });
        let model = build(&ds, &cfg).unwrap();
        assert_eq!(model.n_constraints(), base_rows + 2);
        assert_eq!(model.census().rows_by_family["fsp"], 2);
    }

    #[test]
    fn regularizer_weight_matches_direct_substitution() {
        // Balanced objective, min class count 10, d=5, k=3 -> 1/151.
        let mut labels = Vec::new();
        labels.extend(std::iter::repeat(0).take(10));
        labels.extend(std::iter::repeat(1).take(12));
        labels.extend(std::iter::repeat(2).take(11));
        let ds = dataset(labels, 4, 3); // 4 base + intercept = 5 columns
        let cfg = BuildConfig::<f64> {
            objective: ObjectiveKind::BalancedAccuracy,
            ..BuildConfig::default()
        };
        let model = build(&ds, &cfg).unwrap();
        let meta = model.meta.as_ref().unwrap();
        assert!((meta.reg_unit - 1.0 / 151.0).abs() < 1e-15);
    }

    #[test]
    fn big_m_matches_hand_values() {
        // ones = 3 (two bits set + intercept), bounds [-9,9], K=3:
        // M = 18*3 + 0.5 + 1 = 55.5
        let ds = dataset(vec![0, 1, 2, 0, 1, 2, 0, 1], 3, 3);
        let cfg = BuildConfig::<f64>::default();
        let i = 3; // bits 0 and 1 set -> ones = 3 with intercept
        assert_eq!(ds.sample(i).iter().map(|&v| i64::from(v)).sum::<i64>(), 3);
        assert!((big_m(&ds, &cfg, i) - 55.5).abs() < 1e-12);
        // intercept-only sample: ones = 1 -> 18 + 0.5 + 1
        assert_eq!(ds.sample(0).iter().map(|&v| i64::from(v)).sum::<i64>(), 1);
        assert!((big_m(&ds, &cfg, 0) - 19.5).abs() < 1e-12);
    }

    #[test]
    fn big_m_dominates_score_differences() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let cfg = BuildConfig::<f64>::default();
        for _ in 0..10_000 {
            let k = rng.gen_range(2..=4usize);
            let d = rng.gen_range(1..=5usize);
            let x: Vec<u8> = (0..d).map(|_| rng.gen_range(0..=1u8)).collect();
            let lam: Vec<Vec<i64>> = (0..k)
                .map(|_| (0..d).map(|_| rng.gen_range(-9..=9i64)).collect())
                .collect();
            let gamma = 1.0 / (2.0 * k as f64);
            let scores: Vec<f64> = lam
                .iter()
                .enumerate()
                .map(|(ki, row)| {
                    row.iter()
                        .zip(&x)
                        .map(|(&c, &xv)| (c * i64::from(xv)) as f64)
                        .sum::<f64>()
                        - gamma * ki as f64
                })
                .collect();
            let spread = scores.iter().cloned().fold(f64::MIN, f64::max)
                - scores.iter().cloned().fold(f64::MAX, f64::min);
            let ones: f64 = x.iter().map(|&v| f64::from(v)).sum();
            let m = 18.0 * ones + gamma * k as f64 + 1.0;
            assert!(spread < m, "spread {spread} not below M {m}");
        }
        let _ = cfg;
    }

    #[test]
    fn rejects_bad_configs_early() {
        let ds = dataset(vec![0, 1, 0, 1], 2, 2);
        let bad_sparsity = BuildConfig::<f64> {
            sparsity_limit: 0,
            ..BuildConfig::default()
        };
        assert!(build(&ds, &bad_sparsity).is_err());
        let bad_bounds = BuildConfig::<f64> {
            l_min: 0,
            ..BuildConfig::default()
        };
        assert!(build(&ds, &bad_bounds).is_err());
        let bad_tolerance = BuildConfig::<f64> {
            fairness: Some(FairnessSpec {
                protected_feature: 0,
                protected_value: 1,
                sensitive_labels: vec![0],
                metric: FairnessMetric::Sp,
                tolerance: -0.1,
            }),
            ..BuildConfig::default()
        };
        assert!(build(&ds, &bad_tolerance).is_err());
        // Protected predicate nobody satisfies.
        let empty_group = BuildConfig::<f64> {
            fairness: Some(FairnessSpec {
                protected_feature: ds.intercept_index().unwrap(),
                protected_value: 0,
                sensitive_labels: vec![0],
                metric: FairnessMetric::Sp,
                tolerance: 0.1,
            }),
            ..BuildConfig::default()
        };
        assert!(matches!(
            build(&ds, &empty_group),
            Err(Error::DegenerateProtectedGroup)
        ));
    }

    #[test]
    fn scoring_assignment_is_feasible_and_checker_names_violations() {
        let ds = dataset(vec![0, 1, 1, 0], 2, 2);
        let cfg = BuildConfig::<f64> {
            fairness: Some(FairnessSpec {
                protected_feature: 0,
                protected_value: 1,
                sensitive_labels: vec![1],
                metric: FairnessMetric::Sp,
                tolerance: 1.0,
            }),
            ..BuildConfig::default()
        };
        let model = build(&ds, &cfg).unwrap();
        // All-zero coefficients: predicts class 0 everywhere; measured
        // gaps are 0, so a tolerance of 1.0 is comfortably satisfied.
        let system = crate::scoring::MultiScoringSystem::new(
            ds.class_names().to_vec(),
            ds.feature_names().to_vec(),
            vec![vec![0; 3], vec![0; 3]],
            -9,
            9,
        )
        .unwrap();
        let assignment = model.assignment_from_scoring(&system).unwrap();
        let report = model.check_feasible(&assignment, rf(1e-6)).unwrap();
        assert!(report.feasible(), "violations: {:?}", report.violations);

        // Force a second prediction indicator on sample 0: the one-hot row
        // must be named in the violation list.
        let mut broken = assignment;
        let maps = model.maps.as_ref().unwrap();
        broken[maps.pred[0][1]] = 1.0;
        let report = model.check_feasible(&broken, rf(1e-6)).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| v.what.contains("one_0")));
    }

    #[test]
    fn inline_scores_drops_score_variables_only() {
        let ds = dataset(vec![0, 1, 0, 1, 1, 0, 1, 0], 3, 2);
        let full = build(&ds, &BuildConfig::<f64>::default()).unwrap();
        let inlined = build(
            &ds,
            &BuildConfig::<f64> {
                inline_scores: true,
                ..BuildConfig::default()
            },
        )
        .unwrap();
        let fc = full.census();
        let ic = inlined.census();
        assert_eq!(ic.continuous_vars, 0);
        assert_eq!(ic.integer_vars, fc.integer_vars);
        assert_eq!(ic.binary_vars, fc.binary_vars);
        assert_eq!(
            ic.constraints,
            fc.constraints - ds.n_samples() * ds.n_classes()
        );
    }

    #[test]
    fn conflict_groups_capture_forced_errors() {
        // Samples 0 and 2 share features (bit pattern 0) but carry labels
        // 0 and 1: one forced error.
        let mut features = Vec::new();
        for pattern in [0u8, 1, 0, 1] {
            features.push(pattern);
            features.push(1);
        }
        let ds = BinaryDataset::new(
            features,
            vec!["f0".into(), "(intercept)".into()],
            vec![0, 0, 1, 1],
            vec!["a".into(), "b".into()],
            Some(1),
        )
        .unwrap();
        let model = build(&ds, &BuildConfig::<f64>::default()).unwrap();
        let groups = &model.meta.as_ref().unwrap().conflict_groups;
        assert_eq!(groups.len(), 2);
        assert!(groups.iter().all(|g| g.min_errors == 1));
    }

    #[test]
    fn empty_conditional_subgroup_drops_rows_with_warning() {
        // No protected-group sample carries label 1, so EO rows for label 1
        // cannot be normalized per subgroup.
        let mut features = Vec::new();
        let labels = vec![0, 0, 1, 0];
        for in_group in [1u8, 1, 0, 0] {
            features.push(in_group);
            features.push(1);
        }
        let ds = BinaryDataset::new(
            features,
            vec!["g".into(), "(intercept)".into()],
            labels,
            vec!["a".into(), "b".into()],
            Some(1),
        )
        .unwrap();
        let cfg = BuildConfig::<f64> {
            fairness: Some(FairnessSpec {
                protected_feature: 0,
                protected_value: 1,
                sensitive_labels: vec![1],
                metric: FairnessMetric::Eo,
                tolerance: 0.1,
            }),
            ..BuildConfig::default()
        };
        let model = build(&ds, &cfg).unwrap();
        assert!(model.census().rows_by_family.get("feo").is_none());
        assert!(!model.warnings.is_empty());
        // Under literal denominators the rows stay.
        let literal = build(
            &ds,
            &BuildConfig {
                literal_denominators: true,
                ..cfg
            },
        )
        .unwrap();
        assert_eq!(literal.census().rows_by_family["feo"], 2);
    }
}
