//! Multi-class scoring systems: one integer scorer per class, argmax wins.
//!
//! Ties between equal integer scores are broken toward the lowest class
//! index. That rule is realized numerically by subtracting `gamma * k`
//! from class `k`'s score with `gamma = 1 / (2K)`: base scores are
//! integers, the offsets differ by less than one, so offsets never
//! overturn a strict ordering and the offset argmax is always unique.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{ri, ru, Real};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiScoringSystem {
    class_names: Vec<String>,
    feature_names: Vec<String>,
    /// K x D integer coefficients.
    coefficients: Vec<Vec<i64>>,
    l_min: i64,
    l_max: i64,
}

/// Scores for one sample: exact integer parts, offset values used for the
/// argmax, and the predicted class.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<F> {
    pub base: Vec<i64>,
    pub scores: Vec<F>,
    pub predicted: usize,
}

impl MultiScoringSystem {
    pub fn new(
        class_names: Vec<String>,
        feature_names: Vec<String>,
        coefficients: Vec<Vec<i64>>,
        l_min: i64,
        l_max: i64,
    ) -> Result<Self> {
        if class_names.len() < 2 {
            return Err(Error::MalformedModel(
                "model needs at least two classes".into(),
            ));
        }
        if !(l_min <= 0 && 0 <= l_max) {
            return Err(Error::MalformedModel(format!(
                "coefficient bounds [{l_min}, {l_max}] must contain 0"
            )));
        }
        if coefficients.len() != class_names.len() {
            return Err(Error::MalformedModel(format!(
                "{} coefficient rows for {} classes",
                coefficients.len(),
                class_names.len()
            )));
        }
        for (k, row) in coefficients.iter().enumerate() {
            if row.len() != feature_names.len() {
                return Err(Error::MalformedModel(format!(
                    "row {k} has {} coefficients for {} features",
                    row.len(),
                    feature_names.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v < l_min || v > l_max {
                    return Err(Error::CoefficientOutOfBounds {
                        class: class_names[k].clone(),
                        feature: feature_names[j].clone(),
                        value: v,
                        lo: l_min,
                        hi: l_max,
                    });
                }
            }
        }
        Ok(MultiScoringSystem {
            class_names,
            feature_names,
            coefficients,
            l_min,
            l_max,
        })
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn coefficients(&self) -> &[Vec<i64>] {
        &self.coefficients
    }

    pub fn coefficient(&self, class: usize, feature: usize) -> i64 {
        self.coefficients[class][feature]
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.l_min, self.l_max)
    }

    /// Tie-break constant `1 / (2K)`.
    pub fn tie_break<F: Real>(&self) -> F {
        F::one() / (ru::<F>(2) * ru::<F>(self.n_classes()))
    }

    /// Integer dot products of each class row with `x`.
    pub fn base_scores(&self, x: &[u8]) -> Result<Vec<i64>> {
        if x.len() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                got: x.len(),
            });
        }
        Ok(self
            .coefficients
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .map(|(&c, &xv)| c * i64::from(xv))
                    .sum::<i64>()
            })
            .collect())
    }

    /// Offset scores `base_k - gamma * k` plus the winning class.
    pub fn score<F: Real>(&self, x: &[u8]) -> Result<Prediction<F>> {
        let base = self.base_scores(x)?;
        let gamma = self.tie_break::<F>();
        let scores: Vec<F> = base
            .iter()
            .enumerate()
            .map(|(k, &b)| ri::<F>(b) - gamma * ru::<F>(k))
            .collect();
        let predicted = argmax_lowest(&base);
        Ok(Prediction {
            base,
            scores,
            predicted,
        })
    }

    /// Winning class: highest integer score, lowest index on ties. This is
    /// exactly the argmax of the offset scores (the offsets are smaller
    /// than any integer gap), computed without floating point.
    pub fn predict(&self, x: &[u8]) -> Result<usize> {
        Ok(argmax_lowest(&self.base_scores(x)?))
    }

    pub fn predict_all(&self, ds: &crate::dataset::BinaryDataset) -> Result<Vec<usize>> {
        (0..ds.n_samples()).map(|i| self.predict(ds.sample(i))).collect()
    }

    /// Non-zero coefficients per class; `exempt` (usually the intercept
    /// column) is not counted.
    pub fn nonzero_counts(&self, exempt: Option<usize>) -> Vec<usize> {
        self.coefficients
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, &v)| v != 0 && Some(*j) != exempt)
                    .count()
            })
            .collect()
    }

    /// Plain-text table: one block per class, one line per non-zero
    /// coefficient, the intercept rendered as a "starts with" line.
    pub fn to_table(&self, intercept: Option<usize>) -> String {
        let width = self
            .feature_names
            .iter()
            .map(|n| n.len())
            .max()
            .unwrap_or(0)
            .max("starts with".len());
        let mut out = String::new();
        for (k, class) in self.class_names.iter().enumerate() {
            let _ = writeln!(out, "scoring system for class {class}");
            if let Some(j) = intercept {
                let _ = writeln!(
                    out,
                    "  {:width$}  {:>4} points",
                    "starts with", self.coefficients[k][j]
                );
            }
            for (j, &v) in self.coefficients[k].iter().enumerate() {
                if Some(j) == intercept || v == 0 {
                    continue;
                }
                let _ = writeln!(out, "  {:width$}  {:>4} points", self.feature_names[j], v);
            }
            if k + 1 < self.n_classes() {
                let _ = writeln!(out);
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ModelFile {
            classes: self.class_names.clone(),
            features: self.feature_names.clone(),
            coefficients: self.coefficients.clone(),
            gamma: 1.0 / (2.0 * self.n_classes() as f64),
            bounds: [self.l_min, self.l_max],
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        let model = MultiScoringSystem::new(
            file.classes,
            file.features,
            file.coefficients,
            file.bounds[0],
            file.bounds[1],
        )?;
        let expected = 1.0 / (2.0 * model.n_classes() as f64);
        if (file.gamma - expected).abs() > 1e-12 {
            return Err(Error::MalformedModel(format!(
                "stored gamma {} does not match 1/(2K) = {expected}",
                file.gamma
            )));
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path.as_ref(), self.to_json()?)
            .map_err(|e| Error::io(path.as_ref().display().to_string(), e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::io(path.as_ref().display().to_string(), e))?;
        Self::from_json(&text)
    }
}

fn argmax_lowest(scores: &[i64]) -> usize {
    let mut best = 0usize;
    for (k, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = k;
        }
    }
    best
}

/// On-disk JSON layout.
#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    classes: Vec<String>,
    features: Vec<String>,
    coefficients: Vec<Vec<i64>>,
    gamma: f64,
    bounds: [i64; 2],
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn model(coefficients: Vec<Vec<i64>>) -> MultiScoringSystem {
        let k = coefficients.len();
        let d = coefficients[0].len();
        MultiScoringSystem::new(
            (0..k).map(|i| format!("c{i}")).collect(),
            (0..d).map(|j| format!("f{j}")).collect(),
            coefficients,
            -9,
            9,
        )
        .unwrap()
    }

    #[test]
    fn zero_model_predicts_class_zero_with_offset_scores() {
        let m = model(vec![vec![0, 0], vec![0, 0], vec![0, 0]]);
        let p = m.score::<f64>(&[1, 1]).unwrap();
        assert_eq!(p.base, vec![0, 0, 0]);
        let gamma = 1.0 / 6.0;
        for (k, s) in p.scores.iter().enumerate() {
            assert!((s + gamma * k as f64).abs() < 1e-15);
        }
        assert_eq!(p.predicted, 0);
    }

    #[test]
    fn hand_dot_product_and_tie_toward_class_zero() {
        let m = model(vec![vec![3, -1], vec![0, 2]]);
        let p = m.score::<f64>(&[1, 1]).unwrap();
        assert_eq!(p.base, vec![2, 2]);
        assert_eq!(p.predicted, 0);
    }

    #[test]
    fn base_tie_among_three_goes_to_lowest() {
        // base scores [5, 5, 4] -> class 0
        let m = model(vec![vec![5], vec![5], vec![4]]);
        assert_eq!(m.predict(&[1]).unwrap(), 0);
    }

    #[test]
    fn dominant_row_wins() {
        // Four classes; only class 2's conditions give positive points.
        let m = model(vec![
            vec![0, 0, 1],
            vec![-2, 0, 1],
            vec![4, 3, 0],
            vec![0, -1, 1],
        ]);
        assert_eq!(m.predict(&[1, 1, 1]).unwrap(), 2);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let m = model(vec![vec![1, 0], vec![0, 1]]);
        assert!(matches!(
            m.predict(&[1]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn exhaustive_predict_matches_offset_argmax_oracle() {
        // All models with K <= 3, D <= 3, coefficients in {-1, 0, 1} and all
        // binary inputs: predict() must agree with an independent argmax on
        // the offset scores.
        for k in 2..=3usize {
            for d in 1..=3usize {
                let mut coeff_idx = vec![0usize; k * d];
                loop {
                    let coefficients: Vec<Vec<i64>> = (0..k)
                        .map(|r| (0..d).map(|c| coeff_idx[r * d + c] as i64 - 1).collect())
                        .collect();
                    let m = model(coefficients.clone());
                    for xbits in 0..(1u32 << d) {
                        let x: Vec<u8> = (0..d).map(|j| ((xbits >> j) & 1) as u8).collect();
                        // Oracle: argmax over f64 offset scores, asserting a
                        // unique maximum.
                        let gamma = 1.0 / (2.0 * k as f64);
                        let scores: Vec<f64> = coefficients
                            .iter()
                            .enumerate()
                            .map(|(r, row)| {
                                row.iter()
                                    .zip(&x)
                                    .map(|(&c, &xv)| (c * i64::from(xv)) as f64)
                                    .sum::<f64>()
                                    - gamma * r as f64
                            })
                            .collect();
                        let mut best = 0;
                        for (r, s) in scores.iter().enumerate() {
                            if *s > scores[best] {
                                best = r;
                            }
                        }
                        let unique =
                            scores.iter().filter(|s| **s == scores[best]).count() == 1;
                        assert!(unique, "offset scores must have a unique max");
                        assert_eq!(m.predict(&x).unwrap(), best);
                    }
                    // odometer over coefficient indices
                    let mut pos = k * d;
                    loop {
                        if pos == 0 {
                            break;
                        }
                        pos -= 1;
                        if coeff_idx[pos] < 2 {
                            coeff_idx[pos] += 1;
                            break;
                        }
                        coeff_idx[pos] = 0;
                        if pos == 0 {
                            break;
                        }
                    }
                    if coeff_idx.iter().all(|&v| v == 0) {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn serialize_round_trip() {
        let m = model(vec![vec![3, -1, 0], vec![0, 2, 1]]);
        let text = m.to_json().unwrap();
        let back = MultiScoringSystem::from_json(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn out_of_bounds_coefficient_rejected_on_load() {
        let text = r#"{
            "classes": ["a", "b"],
            "features": ["f0"],
            "coefficients": [[12], [0]],
            "gamma": 0.25,
            "bounds": [-9, 9]
        }"#;
        assert!(matches!(
            MultiScoringSystem::from_json(text),
            Err(Error::CoefficientOutOfBounds { value: 12, .. })
        ));
    }

    #[test]
    fn all_zero_row_renders_only_the_intercept_line() {
        let m = model(vec![vec![0, 0, 0], vec![2, 0, 1]]);
        let table = m.to_table(Some(2));
        let blocks: Vec<&str> = table.split("\n\n").collect();
        assert!(blocks[0].contains("starts with"));
        // class c0 block: header + intercept row only
        assert_eq!(blocks[0].trim_end().lines().count(), 2);
        assert!(blocks[1].contains("f0"));
    }

    proptest! {
        #[test]
        fn base_score_stays_within_coefficient_envelope(
            rows in prop::collection::vec(
                prop::collection::vec(-9i64..=9, 4), 2..4),
            x in prop::collection::vec(0u8..=1, 4),
        ) {
            let m = model(rows);
            let ones = x.iter().map(|&v| i64::from(v)).sum::<i64>();
            for b in m.base_scores(&x).unwrap() {
                prop_assert!(b >= -9 * ones && b <= 9 * ones);
            }
        }

        #[test]
        fn permuting_features_with_inputs_leaves_predictions_unchanged(
            rows in prop::collection::vec(
                prop::collection::vec(-3i64..=3, 5), 3),
            x in prop::collection::vec(0u8..=1, 5),
            perm_seed in 0u64..1000,
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let m = model(rows.clone());
            let before = m.predict(&x).unwrap();

            let mut perm: Vec<usize> = (0..5).collect();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed);
            perm.shuffle(&mut rng);
            let permuted_rows: Vec<Vec<i64>> = rows
                .iter()
                .map(|row| perm.iter().map(|&j| row[j]).collect())
                .collect();
            let permuted_x: Vec<u8> = perm.iter().map(|&j| x[j]).collect();
            let pm = model(permuted_rows);
            prop_assert_eq!(pm.predict(&permuted_x).unwrap(), before);
        }
    }
}
