//! Branch-and-bound over the LP relaxation.
//!
//! Nodes relax integrality, prune on bounds, and branch the most
//! fractional integer variable into floor/ceil children. The search is
//! deterministic: Dantzig pricing with fixed tie-breaks inside the LP,
//! best-bound node order keyed by (bound, id), and branching ties resolved
//! by variable index.
//!
//! Scoring models carry enough structure for a few accelerations, all of
//! them bound-valid and exact:
//!  * duplicate feature rows with mixed labels yield valid lower-bound
//!    rows on the loss indicators (any classifier is constant on them);
//!  * when no fairness row reads the prediction block it is decorative
//!    (the one-hot argmax completes any coefficient matrix), so the search
//!    drops it and reconstructs predictions afterwards;
//!  * integer coefficient blocks met during the search are completed into
//!    full checked solutions (with per-class trimming), and constant
//!    predictors seed the incumbent at the root;
//!  * reduced costs tighten integer bounds in child nodes.

use std::cmp::Ordering as CmpOrdering;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::milp::{MilpModel, Sense, VarKind};
use crate::num::{rf, Real};
use crate::scoring::MultiScoringSystem;

use super::simplex::{solve_dense_lp, DenseLp, LpOutcome, LpRow, SimplexCfg};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    /// Stopped by the time limit, node limit or an interrupt; the best
    /// incumbent (if any) is returned together with a valid gap.
    FeasibleTimeLimit,
    Infeasible,
    Unbounded,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::FeasibleTimeLimit => "feasible_time_limit",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeSelection {
    BestBound,
    DepthFirst,
}

#[derive(Debug, Clone)]
pub struct SolverConfig<F> {
    /// Wall-clock limit in seconds.
    pub time_limit: f64,
    /// Absolute gap at which a run is declared optimal.
    pub abs_gap: F,
    /// Relative gap (on |UB|) at which a run is declared optimal.
    pub rel_gap: F,
    pub int_tol: F,
    pub node_selection: NodeSelection,
    /// Memory guard: process at most this many nodes.
    pub node_limit: u64,
    pub heuristics: bool,
    pub conflict_bounds: bool,
    pub reduced_cost_fixing: bool,
    /// Drop the prediction block when no fairness row reads it.
    pub structural_reduction: bool,
    /// Cooperative interruption, checked at node boundaries.
    pub interrupt: Option<Arc<AtomicBool>>,
    pub lp: SimplexCfg<F>,
}

impl<F: Real> Default for SolverConfig<F> {
    fn default() -> Self {
        SolverConfig {
            time_limit: 60.0,
            abs_gap: rf(1e-6),
            rel_gap: rf(1e-4),
            int_tol: rf(1e-6),
            node_selection: NodeSelection::BestBound,
            node_limit: 1_000_000,
            heuristics: true,
            conflict_bounds: true,
            reduced_cost_fixing: true,
            structural_reduction: true,
            interrupt: None,
            lp: SimplexCfg::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult<F> {
    pub status: SolveStatus,
    /// Incumbent objective (upper bound), when an incumbent exists.
    pub objective: Option<F>,
    pub assignment: Option<Vec<F>>,
    pub lower_bound: F,
    /// `(UB - LB) / max(|UB|, 1e-9)`, floored at zero.
    pub gap: F,
    pub nodes: u64,
    pub lp_iterations: u64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpRelaxation<F> {
    Optimal { values: Vec<F>, objective: F },
    Infeasible,
    Unbounded,
}

/// Solves the LP relaxation of a model (all integrality dropped). The
/// optimal objective is a valid lower bound for the integer problem.
pub fn solve_lp<F: Real>(model: &MilpModel<F>) -> Result<LpRelaxation<F>> {
    let lp = DenseLp {
        n: model.variables.len(),
        lower: model.variables.iter().map(|v| v.lower).collect(),
        upper: model.variables.iter().map(|v| v.upper).collect(),
        objective: dense_objective(model),
        rows: model
            .constraints
            .iter()
            .filter(|c| !c.terms.is_empty())
            .map(|c| LpRow {
                terms: c.terms.clone(),
                sense: c.sense,
                rhs: c.rhs,
            })
            .collect(),
    };
    match solve_dense_lp(&lp, &SimplexCfg::default()).map_err(Error::LpFailure)? {
        LpOutcome::Optimal(sol) => Ok(LpRelaxation::Optimal {
            values: sol.values,
            objective: sol.objective,
        }),
        LpOutcome::Infeasible => Ok(LpRelaxation::Infeasible),
        LpOutcome::Unbounded => Ok(LpRelaxation::Unbounded),
    }
}

fn dense_objective<F: Real>(model: &MilpModel<F>) -> Vec<F> {
    let mut c = vec![F::zero(); model.variables.len()];
    for &(idx, w) in &model.objective {
        c[idx] = c[idx] + w;
    }
    c
}

/// Search-space view: possibly a reduction of the original model.
struct SearchModel<F> {
    lower: Vec<F>,
    upper: Vec<F>,
    objective: Vec<F>,
    rows: Vec<LpRow<F>>,
    /// Reduced index -> original index.
    orig_of: Vec<usize>,
    /// Original index -> reduced index.
    reduced_of: Vec<Option<usize>>,
    int_vars: Vec<usize>,
    /// Reduced index of a coefficient column forced to zero when the given
    /// activity column (reduced index) is branched to zero.
    active_to_coeff: Vec<(usize, usize)>,
    reduction_active: bool,
}

fn build_search_model<F: Real>(model: &MilpModel<F>, cfg: &SolverConfig<F>) -> SearchModel<F> {
    let n = model.variables.len();
    let drop_prediction_block = cfg.structural_reduction
        && model.maps.is_some()
        && model
            .meta
            .as_ref()
            .map(|m| !m.has_fairness_rows)
            .unwrap_or(false);
    let mut keep = vec![true; n];
    if drop_prediction_block {
        if let Some(maps) = &model.maps {
            for row in &maps.pred {
                for &idx in row {
                    keep[idx] = false;
                }
            }
        }
    }
    let mut orig_of = Vec::new();
    let mut reduced_of = vec![None; n];
    for (i, &k) in keep.iter().enumerate() {
        if k {
            reduced_of[i] = Some(orig_of.len());
            orig_of.push(i);
        }
    }
    let dense_obj = dense_objective(model);
    let objective: Vec<F> = orig_of.iter().map(|&i| dense_obj[i]).collect();
    let lower: Vec<F> = orig_of.iter().map(|&i| model.variables[i].lower).collect();
    let upper: Vec<F> = orig_of.iter().map(|&i| model.variables[i].upper).collect();

    let mut rows = Vec::new();
    for c in &model.constraints {
        if c.terms.is_empty() {
            continue; // all-zero row
        }
        if drop_prediction_block && c.terms.iter().any(|&(idx, _)| !keep[idx]) {
            continue; // dominance / one-hot rows of the dropped block
        }
        rows.push(LpRow {
            terms: c
                .terms
                .iter()
                .map(|&(idx, w)| (reduced_of[idx].expect("kept var"), w))
                .collect(),
            sense: c.sense,
            rhs: c.rhs,
        });
    }

    // Valid loss lower bounds from duplicate feature rows.
    if cfg.conflict_bounds {
        if let (Some(meta), Some(maps)) = (&model.meta, &model.maps) {
            for group in &meta.conflict_groups {
                let terms: Vec<(usize, F)> = group
                    .samples
                    .iter()
                    .filter_map(|&i| reduced_of[maps.loss[i]].map(|r| (r, F::one())))
                    .collect();
                if terms.len() == group.samples.len() {
                    rows.push(LpRow {
                        terms,
                        sense: Sense::Ge,
                        rhs: F::from_usize(group.min_errors).unwrap(),
                    });
                }
            }
        }
    }

    let int_vars: Vec<usize> = orig_of
        .iter()
        .enumerate()
        .filter(|&(_, &oi)| {
            matches!(model.variables[oi].kind, VarKind::Binary | VarKind::Integer)
        })
        .map(|(ri, _)| ri)
        .collect();

    let mut active_to_coeff = Vec::new();
    if let Some(maps) = &model.maps {
        for (k, row) in maps.active.iter().enumerate() {
            for (j, &aidx) in row.iter().enumerate() {
                if let (Some(ari), Some(cri)) = (reduced_of[aidx], reduced_of[maps.coeff[k][j]]) {
                    active_to_coeff.push((ari, cri));
                }
            }
        }
    }

    SearchModel {
        lower,
        upper,
        objective,
        rows,
        orig_of,
        reduced_of,
        int_vars,
        active_to_coeff,
        reduction_active: drop_prediction_block,
    }
}

struct NodeRec<F> {
    parent: Option<usize>,
    changes: Vec<(usize, F, F)>,
    bound: F,
}

/// Best-bound heap entry; `BinaryHeap` is a max-heap, so "greater" means
/// smaller bound, then smaller id.
struct HeapKey<F> {
    bound: F,
    id: usize,
}

impl<F: Real> PartialEq for HeapKey<F> {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl<F: Real> Eq for HeapKey<F> {}
impl<F: Real> PartialOrd for HeapKey<F> {
    fn partial_cmp(&self, other: &Self) -> Option<CmpOrdering> {
        Some(self.cmp(other))
    }
}
impl<F: Real> Ord for HeapKey<F> {
    fn cmp(&self, other: &Self) -> CmpOrdering {
        match other.bound.partial_cmp(&self.bound) {
            Some(CmpOrdering::Equal) | None => other.id.cmp(&self.id),
            Some(ord) => ord,
        }
    }
}

enum OpenSet<F> {
    Best(BinaryHeap<HeapKey<F>>),
    Dfs(Vec<HeapKey<F>>),
}

impl<F: Real> OpenSet<F> {
    fn new(selection: NodeSelection) -> Self {
        match selection {
            NodeSelection::BestBound => OpenSet::Best(BinaryHeap::new()),
            NodeSelection::DepthFirst => OpenSet::Dfs(Vec::new()),
        }
    }

    fn push(&mut self, bound: F, id: usize) {
        match self {
            OpenSet::Best(heap) => heap.push(HeapKey { bound, id }),
            OpenSet::Dfs(stack) => stack.push(HeapKey { bound, id }),
        }
    }

    fn pop(&mut self) -> Option<usize> {
        match self {
            OpenSet::Best(heap) => heap.pop().map(|k| k.id),
            OpenSet::Dfs(stack) => stack.pop().map(|k| k.id),
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            OpenSet::Best(heap) => heap.is_empty(),
            OpenSet::Dfs(stack) => stack.is_empty(),
        }
    }

    fn lowest_bound(&self) -> Option<F> {
        match self {
            OpenSet::Best(heap) => heap.peek().map(|k| k.bound),
            OpenSet::Dfs(stack) => stack
                .iter()
                .map(|k| k.bound)
                .fold(None, |acc, b| match acc {
                    None => Some(b),
                    Some(a) => Some(if b < a { b } else { a }),
                }),
        }
    }
}

struct Incumbent<F> {
    objective: F,
    assignment: Vec<F>,
}

struct Search<'a, F: Real> {
    model: &'a MilpModel<F>,
    cfg: &'a SolverConfig<F>,
    sm: SearchModel<F>,
    nodes: Vec<NodeRec<F>>,
    incumbent: Option<Incumbent<F>>,
    tried_coeffs: std::collections::BTreeSet<Vec<i64>>,
    check_tol: F,
    prune_eps: F,
}

impl<'a, F: Real> Search<'a, F> {
    fn bounds_for(&self, node: usize) -> (Vec<F>, Vec<F>) {
        let mut chain = Vec::new();
        let mut cur = Some(node);
        while let Some(id) = cur {
            chain.push(id);
            cur = self.nodes[id].parent;
        }
        let mut lower = self.sm.lower.clone();
        let mut upper = self.sm.upper.clone();
        for &id in chain.iter().rev() {
            for &(var, lo, hi) in &self.nodes[id].changes {
                lower[var] = lo;
                upper[var] = hi;
            }
        }
        (lower, upper)
    }

    fn upper_bound(&self) -> Option<F> {
        self.incumbent.as_ref().map(|i| i.objective)
    }

    fn try_incumbent(&mut self, objective: F, assignment: Vec<F>) -> bool {
        let improves = match &self.incumbent {
            Some(inc) => objective < inc.objective - rf::<F>(1e-12),
            None => true,
        };
        if !improves {
            return false;
        }
        match self.model.check_feasible(&assignment, self.check_tol) {
            Ok(report) if report.feasible() => {
                self.incumbent = Some(Incumbent {
                    objective,
                    assignment,
                });
                true
            }
            _ => false,
        }
    }

    /// Completes a coefficient matrix into a full assignment and offers it
    /// as an incumbent, trimming per-class counts over the budget.
    fn offer_scoring_candidate(&mut self, mut coefficients: Vec<Vec<i64>>) {
        let Some(meta) = &self.model.meta else { return };
        let flat: Vec<i64> = coefficients.iter().flatten().copied().collect();
        if !self.tried_coeffs.insert(flat) {
            return;
        }
        let exempt = if meta.penalize_intercept {
            None
        } else {
            meta.dataset.intercept_index()
        };
        for row in coefficients.iter_mut() {
            loop {
                let over: Vec<usize> = row
                    .iter()
                    .enumerate()
                    .filter(|&(j, &v)| v != 0 && Some(j) != exempt)
                    .map(|(j, _)| j)
                    .collect();
                if over.len() <= meta.sparsity_limit {
                    break;
                }
                let &j = over
                    .iter()
                    .min_by_key(|&&j| (row[j].abs(), j))
                    .expect("non-empty");
                row[j] = 0;
            }
        }
        let Ok(system) = MultiScoringSystem::new(
            meta.dataset.class_names().to_vec(),
            meta.dataset.feature_names().to_vec(),
            coefficients,
            meta.l_min,
            meta.l_max,
        ) else {
            return;
        };
        let Ok(assignment) = self.model.assignment_from_scoring(&system) else {
            return;
        };
        let objective = self.model.objective_value(&assignment);
        self.try_incumbent(objective, assignment);
    }

    /// Constant predictors are always sparsity-feasible and, under
    /// subgroup-normalized rates, perfectly fair. Still checked like any
    /// other candidate.
    fn seed_constant_predictors(&mut self) {
        let Some(meta) = &self.model.meta else { return };
        let k = meta.dataset.n_classes();
        let d = meta.dataset.n_features();
        let intercept = meta.dataset.intercept_index();
        for class in 0..k {
            let mut coefficients = vec![vec![0i64; d]; k];
            if class > 0 {
                match intercept {
                    Some(j) => coefficients[class][j] = 1,
                    None => continue,
                }
            }
            self.offer_scoring_candidate(coefficients);
        }
    }

    fn lambda_block(&self, values: &[F]) -> Option<(Vec<Vec<i64>>, bool)> {
        let maps = self.model.maps.as_ref()?;
        let mut integral = true;
        let mut out = Vec::with_capacity(maps.coeff.len());
        for row in &maps.coeff {
            let mut r = Vec::with_capacity(row.len());
            for &oi in row {
                let ri = self.sm.reduced_of[oi]?;
                let v = values[ri];
                if (v - v.round()).abs() > self.cfg.int_tol {
                    integral = false;
                }
                r.push(v.round().to_i64()?);
            }
            out.push(r);
        }
        Some((out, integral))
    }

    /// Expands reduced-space values into a full integral assignment.
    fn expand_integral(&self, values: &[F]) -> Option<Vec<F>> {
        if self.sm.reduction_active {
            // Rebuild everything from the decoded system: exact indicators.
            let (coefficients, _) = self.lambda_block(values)?;
            let meta = self.model.meta.as_ref()?;
            let system = MultiScoringSystem::new(
                meta.dataset.class_names().to_vec(),
                meta.dataset.feature_names().to_vec(),
                coefficients,
                meta.l_min,
                meta.l_max,
            )
            .ok()?;
            self.model.assignment_from_scoring(&system).ok()
        } else {
            let mut full = vec![F::zero(); self.model.variables.len()];
            for (ri, &oi) in self.sm.orig_of.iter().enumerate() {
                let v = values[ri];
                full[oi] = match self.model.variables[oi].kind {
                    VarKind::Binary | VarKind::Integer => v.round(),
                    VarKind::Continuous => v,
                };
            }
            Some(full)
        }
    }
}

/// Exact branch-and-bound solve of a mixed-integer model.
pub fn solve<F: Real>(model: &MilpModel<F>, cfg: &SolverConfig<F>) -> Result<SolveResult<F>> {
    if cfg.time_limit <= 0.0 {
        return Err(Error::InvalidConfig("time limit must be positive".into()));
    }
    let start = Instant::now();
    let sm = build_search_model(model, cfg);
    let mut search = Search {
        model,
        cfg,
        sm,
        nodes: Vec::new(),
        incumbent: None,
        tried_coeffs: std::collections::BTreeSet::new(),
        check_tol: rf(1e-6),
        prune_eps: rf(1e-9),
    };
    if cfg.heuristics {
        search.seed_constant_predictors();
    }

    let mut open = OpenSet::new(cfg.node_selection);
    search.nodes.push(NodeRec {
        parent: None,
        changes: Vec::new(),
        bound: F::neg_infinity(),
    });
    open.push(F::neg_infinity(), 0);

    let mut node_count: u64 = 0;
    let mut lp_iterations: u64 = 0;
    let mut stop: Option<SolveStatus> = None;

    while let Some(lowest) = (!open.is_empty()).then(|| open.lowest_bound().unwrap()) {
        if start.elapsed().as_secs_f64() > cfg.time_limit {
            stop = Some(SolveStatus::FeasibleTimeLimit);
            break;
        }
        if let Some(flag) = &cfg.interrupt {
            if flag.load(Ordering::Relaxed) {
                stop = Some(SolveStatus::FeasibleTimeLimit);
                break;
            }
        }
        if node_count >= cfg.node_limit {
            stop = Some(SolveStatus::FeasibleTimeLimit);
            break;
        }
        if let Some(ub) = search.upper_bound() {
            let lb = lowest.min(ub);
            if ub - lb <= cfg.abs_gap || ub - lb <= cfg.rel_gap * ub.abs() {
                break; // gap closed
            }
        }

        let node_id = open.pop().expect("non-empty");
        let inherited = search.nodes[node_id].bound;
        if let Some(ub) = search.upper_bound() {
            if inherited >= ub - search.prune_eps {
                continue;
            }
        }
        node_count += 1;

        let (lower, upper) = search.bounds_for(node_id);
        if lower
            .iter()
            .zip(&upper)
            .any(|(&lo, &hi)| lo > hi + cfg.int_tol)
        {
            continue; // branching emptied a domain
        }
        let lp = DenseLp {
            n: search.sm.lower.len(),
            lower,
            upper,
            objective: search.sm.objective.clone(),
            rows: search.sm.rows.clone(),
        };
        let sol = match solve_dense_lp(&lp, &cfg.lp).map_err(Error::LpFailure)? {
            LpOutcome::Infeasible => continue,
            LpOutcome::Unbounded => {
                stop = Some(SolveStatus::Unbounded);
                break;
            }
            LpOutcome::Optimal(sol) => sol,
        };
        lp_iterations += sol.iterations;
        let bound = if sol.objective > inherited {
            sol.objective
        } else {
            inherited
        };
        search.nodes[node_id].bound = bound;
        if let Some(ub) = search.upper_bound() {
            if bound >= ub - search.prune_eps {
                continue;
            }
        }

        // Most fractional integer variable (closest to one half).
        let mut branch_var: Option<(usize, F)> = None;
        for &ri in &search.sm.int_vars {
            let v = sol.values[ri];
            let frac = v - v.floor();
            let dist_int = frac.min(F::one() - frac);
            if dist_int <= cfg.int_tol {
                continue;
            }
            let dist_half = (frac - rf::<F>(0.5)).abs();
            match branch_var {
                Some((_, best)) if best <= dist_half => {}
                _ => branch_var = Some((ri, dist_half)),
            }
        }

        let Some((var, _)) = branch_var else {
            // Integral relaxation: this node is solved exactly.
            if let Some(full) = search.expand_integral(&sol.values) {
                let objective = search.model.objective_value(&full);
                search.try_incumbent(objective, full);
            }
            continue;
        };

        // Incumbent heuristics from the fractional point.
        if cfg.heuristics && search.model.maps.is_some() {
            if let Some((coefficients, _)) = search.lambda_block(&sol.values) {
                search.offer_scoring_candidate(coefficients);
            }
        }

        // Reduced-cost tightening for the children: a nonbasic integer
        // column with reduced cost d cannot move further than
        // (UB - bound) / d in any solution better than the incumbent.
        let mut fixes: Vec<(usize, F, F)> = Vec::new();
        if cfg.reduced_cost_fixing {
            if let Some(ub) = search.upper_bound() {
                let slack = ub - search.prune_eps - bound;
                for &ri in &search.sm.int_vars {
                    if ri == var {
                        continue;
                    }
                    let d = sol.reduced_costs[ri];
                    let lo = lp.lower[ri];
                    let hi = lp.upper[ri];
                    if !(lo.is_finite() && hi.is_finite()) || hi - lo <= cfg.int_tol {
                        continue;
                    }
                    let v = sol.values[ri];
                    if d > cfg.lp.eps_cost && (v - lo).abs() <= cfg.int_tol {
                        let span = (slack / d + cfg.int_tol).floor().max(F::zero());
                        let new_hi = lo + span;
                        if new_hi < hi - rf::<F>(0.5) {
                            fixes.push((ri, lo, new_hi));
                        }
                    } else if d < -cfg.lp.eps_cost && (v - hi).abs() <= cfg.int_tol {
                        let span = (slack / (-d) + cfg.int_tol).floor().max(F::zero());
                        let new_lo = hi - span;
                        if new_lo > lo + rf::<F>(0.5) {
                            fixes.push((ri, new_lo, hi));
                        }
                    }
                }
            }
        }

        let value = sol.values[var];
        let floor_v = value.floor();
        let ceil_v = floor_v + F::one();
        let mut down_changes = fixes.clone();
        down_changes.push((var, lp.lower[var], floor_v));
        // Forcing an activity indicator to zero zeroes its coefficient too.
        if floor_v == F::zero() {
            for &(ari, cri) in &search.sm.active_to_coeff {
                if ari == var {
                    down_changes.push((cri, F::zero(), F::zero()));
                }
            }
        }
        let mut up_changes = fixes;
        up_changes.push((var, ceil_v, lp.upper[var]));

        for changes in [up_changes, down_changes] {
            let id = search.nodes.len();
            search.nodes.push(NodeRec {
                parent: Some(node_id),
                changes,
                bound,
            });
            open.push(bound, id);
        }
    }

    let wall_seconds = start.elapsed().as_secs_f64();
    let open_lb = open.lowest_bound();
    let exhausted = match (open_lb, search.upper_bound()) {
        (None, _) => true,
        (Some(lb), Some(ub)) => lb >= ub - search.prune_eps,
        (Some(_), None) => false,
    };

    let (objective, assignment) = match search.incumbent {
        Some(inc) => (Some(inc.objective), Some(inc.assignment)),
        None => (None, None),
    };

    let lower_bound = match (open_lb, &objective, exhausted) {
        (_, Some(ub), true) => *ub,
        (Some(lb), Some(ub), false) => lb.min(*ub),
        (Some(lb), None, _) => lb,
        (None, None, _) => F::infinity(),
    };

    let status = match stop {
        Some(SolveStatus::Unbounded) => SolveStatus::Unbounded,
        Some(s) if !exhausted => s,
        _ => {
            if objective.is_some() {
                SolveStatus::Optimal
            } else if exhausted {
                SolveStatus::Infeasible
            } else {
                SolveStatus::FeasibleTimeLimit
            }
        }
    };
    // "Optimal" additionally requires the gap tolerance to hold.
    let status = match (status, &objective) {
        (SolveStatus::Optimal, Some(ub)) => {
            if *ub - lower_bound <= cfg.abs_gap
                || *ub - lower_bound <= cfg.rel_gap * ub.abs()
            {
                SolveStatus::Optimal
            } else {
                SolveStatus::FeasibleTimeLimit
            }
        }
        (s, _) => s,
    };

    let gap = match &objective {
        Some(ub) => {
            let denom = ub.abs().max(rf(1e-9));
            ((*ub - lower_bound) / denom).max(F::zero())
        }
        None => F::infinity(),
    };

    Ok(SolveResult {
        status,
        objective,
        assignment,
        lower_bound,
        gap,
        nodes: node_count,
        lp_iterations,
        wall_seconds,
    })
}
