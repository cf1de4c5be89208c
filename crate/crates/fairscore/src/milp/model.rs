//! Variables, linear constraints, objective and feasibility checking.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::{BinaryDataset, FairnessSpec};
use crate::error::{Error, Result};
use crate::num::{rf, ri, Real};
use crate::scoring::MultiScoringSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Continuous,
    Binary,
    Integer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable<F> {
    pub name: String,
    pub kind: VarKind,
    pub lower: F,
    pub upper: F,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

/// `sum(terms) sense rhs`; terms are (variable index, coefficient).
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<F> {
    pub name: String,
    pub terms: Vec<(usize, F)>,
    pub sense: Sense,
    pub rhs: F,
}

impl<F: Real> Constraint<F> {
    pub fn lhs(&self, assignment: &[F]) -> F {
        self.terms
            .iter()
            .map(|&(idx, coeff)| coeff * assignment[idx])
            .fold(F::zero(), |a, b| a + b)
    }

    /// Positive when the constraint is violated by that amount.
    pub fn violation(&self, assignment: &[F]) -> F {
        let lhs = self.lhs(assignment);
        match self.sense {
            Sense::Le => lhs - self.rhs,
            Sense::Ge => self.rhs - lhs,
            Sense::Eq => (lhs - self.rhs).abs(),
        }
        .max(F::zero())
    }
}

/// Index maps from scoring-system structure to variable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMaps {
    /// Coefficient variables, `[class][feature]`.
    pub coeff: Vec<Vec<usize>>,
    /// Per-sample misclassification indicators.
    pub loss: Vec<usize>,
    /// Non-zero indicators, `[class][feature]`.
    pub active: Vec<Vec<usize>>,
    /// One-hot prediction indicators, `[sample][class]`.
    pub pred: Vec<Vec<usize>>,
    /// Score values, `[sample][class]`; absent when scores are inlined.
    pub score: Option<Vec<Vec<usize>>>,
}

/// Samples with identical feature rows but not all the same label. Any
/// classifier is constant on such a group, so at least `min_errors` of its
/// members are misclassified. Solvers may use this as a valid bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictGroup {
    pub samples: Vec<usize>,
    pub min_errors: usize,
}

/// Build-side context a solver needs for decoding and heuristics.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoringMeta<F> {
    pub dataset: BinaryDataset,
    pub l_min: i64,
    pub l_max: i64,
    pub sparsity_limit: usize,
    pub penalize_intercept: bool,
    pub literal_denominators: bool,
    pub inline_scores: bool,
    pub fairness: Option<FairnessSpec<F>>,
    /// Tie-break constant `1 / (2K)`.
    pub gamma: F,
    /// Objective weight of one active coefficient.
    pub reg_unit: F,
    /// Per-sample big-M constants.
    pub big_m: Vec<F>,
    pub conflict_groups: Vec<ConflictGroup>,
    /// True when the model carries fairness rows (then prediction
    /// indicators are load-bearing, not just bookkeeping).
    pub has_fairness_rows: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpModel<F> {
    pub name: String,
    pub variables: Vec<Variable<F>>,
    pub constraints: Vec<Constraint<F>>,
    /// Sparse minimization objective.
    pub objective: Vec<(usize, F)>,
    pub maps: Option<VarMaps>,
    pub meta: Option<ScoringMeta<F>>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub integer_vars: usize,
    pub binary_vars: usize,
    pub continuous_vars: usize,
    pub constraints: usize,
    /// Row counts per family, keyed by the name prefix.
    pub rows_by_family: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation<F> {
    pub what: String,
    pub amount: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport<F> {
    pub violations: Vec<Violation<F>>,
    pub objective: F,
}

impl<F: Real> FeasibilityReport<F> {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<F: Real> MilpModel<F> {
    pub fn n_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn n_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective_value(&self, assignment: &[F]) -> F {
        self.objective
            .iter()
            .map(|&(idx, coeff)| coeff * assignment[idx])
            .fold(F::zero(), |a, b| a + b)
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn census(&self) -> Census {
        let mut integer_vars = 0;
        let mut binary_vars = 0;
        let mut continuous_vars = 0;
        for v in &self.variables {
            match v.kind {
                VarKind::Integer => integer_vars += 1,
                VarKind::Binary => binary_vars += 1,
                VarKind::Continuous => continuous_vars += 1,
            }
        }
        let mut rows_by_family: BTreeMap<String, usize> = BTreeMap::new();
        for c in &self.constraints {
            let family = c.name.split('_').next().unwrap_or("").to_string();
            *rows_by_family.entry(family).or_insert(0) += 1;
        }
        Census {
            integer_vars,
            binary_vars,
            continuous_vars,
            constraints: self.constraints.len(),
            rows_by_family,
        }
    }

    /// Checks every constraint, bound and integrality requirement of
    /// `assignment` within `tolerance` (integralities use the same value).
    pub fn check_feasible(&self, assignment: &[F], tolerance: F) -> Result<FeasibilityReport<F>> {
        if assignment.len() != self.variables.len() {
            let missing = self
                .variables
                .get(assignment.len())
                .map(|v| v.name.clone())
                .unwrap_or_else(|| "<extra values>".to_string());
            return Err(Error::MissingVariable { name: missing });
        }
        let mut violations = Vec::new();
        for (idx, var) in self.variables.iter().enumerate() {
            let x = assignment[idx];
            if x < var.lower - tolerance {
                violations.push(Violation {
                    what: format!("bound: {} = {x} below lower bound {}", var.name, var.lower),
                    amount: var.lower - x,
                });
            }
            if x > var.upper + tolerance {
                violations.push(Violation {
                    what: format!("bound: {} = {x} above upper bound {}", var.name, var.upper),
                    amount: x - var.upper,
                });
            }
            if matches!(var.kind, VarKind::Binary | VarKind::Integer) {
                let frac = (x - x.round()).abs();
                if frac > tolerance {
                    violations.push(Violation {
                        what: format!("integrality: {} = {x}", var.name),
                        amount: frac,
                    });
                }
            }
        }
        for c in &self.constraints {
            let v = c.violation(assignment);
            if v > tolerance {
                violations.push(Violation {
                    what: format!(
                        "constraint {}: lhs {} {} rhs {}",
                        c.name,
                        c.lhs(assignment),
                        c.sense.symbol(),
                        c.rhs
                    ),
                    amount: v,
                });
            }
        }
        Ok(FeasibilityReport {
            violations,
            objective: self.objective_value(assignment),
        })
    }

    /// Reads the coefficient matrix out of an assignment.
    pub fn decode(&self, assignment: &[F]) -> Result<MultiScoringSystem> {
        let maps = self
            .maps
            .as_ref()
            .ok_or_else(|| Error::NotAScoringModel(self.name.clone()))?;
        let meta = self
            .meta
            .as_ref()
            .ok_or_else(|| Error::NotAScoringModel(self.name.clone()))?;
        let coefficients: Vec<Vec<i64>> = maps
            .coeff
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&idx| {
                        assignment
                            .get(idx)
                            .map(|v| v.round().to_i64().unwrap_or(0))
                            .ok_or_else(|| Error::MissingVariable {
                                name: self.variables[idx].name.clone(),
                            })
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MultiScoringSystem::new(
            meta.dataset.class_names().to_vec(),
            meta.dataset.feature_names().to_vec(),
            coefficients,
            meta.l_min,
            meta.l_max,
        )
    }

    /// Full assignment realized by a concrete scoring system: loss
    /// indicators are exact misclassification flags, activity indicators
    /// match non-zero coefficients, prediction indicators are the argmax
    /// one-hot, and scores (when present) the offset values.
    pub fn assignment_from_scoring(&self, system: &MultiScoringSystem) -> Result<Vec<F>> {
        let maps = self
            .maps
            .as_ref()
            .ok_or_else(|| Error::NotAScoringModel(self.name.clone()))?;
        let meta = self
            .meta
            .as_ref()
            .ok_or_else(|| Error::NotAScoringModel(self.name.clone()))?;
        let ds = &meta.dataset;
        if system.n_features() != ds.n_features() || system.n_classes() != ds.n_classes() {
            return Err(Error::DimensionMismatch {
                expected: ds.n_features(),
                got: system.n_features(),
            });
        }
        let mut assignment = vec![F::zero(); self.variables.len()];
        for (k, row) in maps.coeff.iter().enumerate() {
            for (j, &idx) in row.iter().enumerate() {
                assignment[idx] = ri(system.coefficient(k, j));
                assignment[maps.active[k][j]] =
                    if system.coefficient(k, j) != 0 { F::one() } else { F::zero() };
            }
        }
        for i in 0..ds.n_samples() {
            let pred = system.score::<F>(ds.sample(i))?;
            assignment[maps.loss[i]] = if pred.predicted != ds.label(i) {
                F::one()
            } else {
                F::zero()
            };
            for (k, &idx) in maps.pred[i].iter().enumerate() {
                assignment[idx] = if k == pred.predicted { F::one() } else { F::zero() };
            }
            if let Some(score) = &maps.score {
                for (k, &idx) in score[i].iter().enumerate() {
                    assignment[idx] = pred.scores[k];
                }
            }
        }
        Ok(assignment)
    }

    /// Loss and regularizer parts of the objective at an assignment.
    pub fn objective_breakdown(&self, assignment: &[F]) -> (F, F) {
        let maps = match &self.maps {
            Some(m) => m,
            None => return (self.objective_value(assignment), F::zero()),
        };
        let mut loss = F::zero();
        let mut reg = F::zero();
        let active: std::collections::BTreeSet<usize> =
            maps.active.iter().flatten().copied().collect();
        for &(idx, coeff) in &self.objective {
            if active.contains(&idx) {
                reg = reg + coeff * assignment[idx];
            } else {
                loss = loss + coeff * assignment[idx];
            }
        }
        (loss, reg)
    }

    /// JSON rendering of the model census, for debugging builds.
    pub fn census_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.census())?)
    }
}

/// Named-assignment helper for solution files: resolves names to indices.
pub fn assignment_from_named<F: Real>(
    model: &MilpModel<F>,
    entries: &[(String, F)],
) -> Result<Vec<F>> {
    let index: BTreeMap<&str, usize> = model
        .variables
        .iter()
        .enumerate()
        .map(|(i, v)| (v.name.as_str(), i))
        .collect();
    let mut assignment = vec![None; model.variables.len()];
    for (name, value) in entries {
        let idx = index
            .get(name.as_str())
            .copied()
            .ok_or_else(|| Error::UnknownVariable { name: name.clone() })?;
        assignment[idx] = Some(*value);
    }
    assignment
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::MissingVariable {
                name: model.variables[i].name.clone(),
            })
        })
        .collect()
}

/// Infinite bounds rendered as such in debugging output.
pub fn fmt_bound<F: Real>(v: F) -> String {
    if v == F::infinity() {
        "+inf".to_string()
    } else if v == F::neg_infinity() {
        "-inf".to_string()
    } else {
        format!("{v}")
    }
}

/// Small helper used by builders and importers.
pub fn infinity<F: Real>() -> (F, F) {
    (F::neg_infinity(), F::infinity())
}

/// Shared tolerance default for feasibility checks.
pub fn default_check_tolerance<F: Real>() -> F {
    rf(1e-6)
}
