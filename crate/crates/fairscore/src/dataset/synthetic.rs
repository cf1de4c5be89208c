//! Synthetic three-class generator with a built-in group bias.
//!
//! Six Bernoulli features with per-column densities drawn uniformly in
//! [0.4, 0.6]; each class score sums three designated features (class 0:
//! features 1-2-3, class 1: 3-4-5, class 2: 5-6-1, one-based) plus
//! zero-mean Gaussian noise, and the label is the argmax. Feature A1
//! contributes to classes L1 and L3, which biases those labels for the
//! group A1 = 1.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::Result;

use super::BinaryDataset;

const BASE_FEATURES: usize = 6;
const CLASS_SUPPORT: [[usize; 3]; 3] = [[0, 1, 2], [2, 3, 4], [4, 5, 0]];
const NOISE_SD: f64 = 0.5;

/// Deterministic given `(n, seed)`.
pub fn generate_synthetic(n: usize, seed: u64) -> Result<BinaryDataset> {
    assert!(n >= 1, "sample count must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let densities: Vec<f64> = (0..BASE_FEATURES).map(|_| rng.gen_range(0.4..0.6)).collect();
    let noise = Normal::new(0.0, NOISE_SD).expect("valid normal");

    let d = BASE_FEATURES + 1; // + intercept
    let mut features = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let row: Vec<u8> = densities
            .iter()
            .map(|p| u8::from(rng.gen_bool(*p)))
            .collect();
        let mut best = 0usize;
        let mut best_score = f64::NEG_INFINITY;
        for (k, support) in CLASS_SUPPORT.iter().enumerate() {
            let base: u8 = support.iter().map(|&j| row[j]).sum();
            let score = f64::from(base) + noise.sample(&mut rng);
            if score > best_score {
                best_score = score;
                best = k;
            }
        }
        features.extend_from_slice(&row);
        features.push(1);
        labels.push(best);
    }

    let feature_names: Vec<String> = (1..=BASE_FEATURES)
        .map(|j| format!("A{j}"))
        .chain(std::iter::once("(intercept)".to_string()))
        .collect();
    let class_names = vec!["L1".to_string(), "L2".to_string(), "L3".to_string()];
    BinaryDataset::new(features, feature_names, labels, class_names, Some(d - 1))
}
