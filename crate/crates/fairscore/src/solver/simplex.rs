//! Dense bounded-variable primal simplex, two phases, Bland fallback.
//!
//! Works directly on general bounds (including infinite ones): nonbasic
//! variables sit at a bound (or at zero when free), entering variables may
//! move in either direction, and the ratio test admits bound flips. Phase
//! one drives row artificials to zero; rows are pre-negated so that every
//! artificial starts non-negative, leaves the basis at zero and is then
//! dropped for good, which keeps artificial columns out of the tableau.

use crate::milp::Sense;
use crate::num::{rf, Real};

#[derive(Debug, Clone)]
pub struct LpRow<F> {
    pub terms: Vec<(usize, F)>,
    pub sense: Sense,
    pub rhs: F,
}

/// A bounded LP: minimize `objective . x` subject to rows and bounds.
#[derive(Debug, Clone)]
pub struct DenseLp<F> {
    pub n: usize,
    pub lower: Vec<F>,
    pub upper: Vec<F>,
    pub objective: Vec<F>,
    pub rows: Vec<LpRow<F>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<F> {
    Optimal(LpSolution<F>),
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<F> {
    pub values: Vec<F>,
    pub objective: F,
    /// Reduced costs of the structural columns at the final basis;
    /// meaningful for nonbasic columns (zero on basic ones).
    pub reduced_costs: Vec<F>,
    pub iterations: u64,
}

#[derive(Debug, Clone)]
pub struct SimplexCfg<F> {
    pub eps_cost: F,
    pub eps_pivot: F,
    pub eps_step: F,
    pub eps_feas: F,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: u32,
    /// Hard cap per phase; exceeding it is a numerical failure.
    pub max_iterations: u64,
}

impl<F: Real> Default for SimplexCfg<F> {
    fn default() -> Self {
        SimplexCfg {
            eps_cost: rf(1e-9),
            eps_pivot: rf(1e-8),
            eps_step: rf(1e-10),
            eps_feas: rf(1e-8),
            bland_after: 50,
            max_iterations: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BasisVar {
    /// Structural or slack column.
    Col(usize),
    /// Phase-one artificial of a row; dropped once it leaves the basis.
    Artificial,
}

pub fn solve_dense_lp<F: Real>(
    lp: &DenseLp<F>,
    cfg: &SimplexCfg<F>,
) -> Result<LpOutcome<F>, String> {
    Tableau::new(lp, cfg).solve()
}

struct Tableau<'a, F> {
    cfg: &'a SimplexCfg<F>,
    n_struct: usize,
    ncols: usize,
    m: usize,
    /// Row-major m x ncols working matrix (B^-1 A).
    a: Vec<F>,
    rhs_flip: Vec<bool>,
    lower: Vec<F>,
    upper: Vec<F>,
    cost: Vec<F>,
    /// Current values of all columns.
    x: Vec<F>,
    basis: Vec<BasisVar>,
    /// For structural/slack columns: the basis row, if basic.
    in_basis: Vec<Option<usize>>,
    /// Artificial values per row while still basic.
    art_value: Vec<F>,
    art_active: Vec<bool>,
    /// After phase one artificials are pinned to zero.
    art_pinned: bool,
    red: Vec<F>,
    iterations: u64,
    degen_streak: u32,
    bland: bool,
}

impl<'a, F: Real> Tableau<'a, F> {
    fn new(lp: &DenseLp<F>, cfg: &'a SimplexCfg<F>) -> Self {
        let m = lp.rows.len();
        let n_struct = lp.n;
        // slack column per inequality row
        let n_slack = lp
            .rows
            .iter()
            .filter(|r| r.sense != Sense::Eq)
            .count();
        let ncols = n_struct + n_slack;
        let mut a = vec![F::zero(); m * ncols];
        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        lower.resize(ncols, F::zero());
        upper.resize(ncols, F::zero());
        let mut rhs = Vec::with_capacity(m);
        let mut slack_idx = n_struct;
        for (r, row) in lp.rows.iter().enumerate() {
            for &(j, v) in &row.terms {
                a[r * ncols + j] = a[r * ncols + j] + v;
            }
            match row.sense {
                Sense::Le => {
                    a[r * ncols + slack_idx] = F::one();
                    lower[slack_idx] = F::zero();
                    upper[slack_idx] = F::infinity();
                    slack_idx += 1;
                }
                Sense::Ge => {
                    a[r * ncols + slack_idx] = F::one();
                    lower[slack_idx] = F::neg_infinity();
                    upper[slack_idx] = F::zero();
                    slack_idx += 1;
                }
                Sense::Eq => {}
            }
            rhs.push(row.rhs);
        }
        let mut cost = vec![F::zero(); ncols];
        cost[..n_struct].copy_from_slice(&lp.objective);

        // Initial nonbasic values: the bound favoured by the cost, zero for
        // free columns.
        let mut x = vec![F::zero(); ncols];
        for j in 0..ncols {
            let lo = lower[j];
            let hi = upper[j];
            x[j] = if lo.is_finite() && hi.is_finite() {
                if cost[j] >= F::zero() {
                    lo
                } else {
                    hi
                }
            } else if lo.is_finite() {
                lo
            } else if hi.is_finite() {
                hi
            } else {
                F::zero()
            };
        }

        // Residuals; negate rows so artificials start non-negative.
        let mut art_value = vec![F::zero(); m];
        let mut rhs_flip = vec![false; m];
        for r in 0..m {
            let mut resid = rhs[r];
            for j in 0..ncols {
                resid = resid - a[r * ncols + j] * x[j];
            }
            if resid < F::zero() {
                rhs_flip[r] = true;
                for j in 0..ncols {
                    a[r * ncols + j] = -a[r * ncols + j];
                }
                resid = -resid;
            }
            art_value[r] = resid;
        }

        Tableau {
            cfg,
            n_struct,
            ncols,
            m,
            a,
            rhs_flip,
            lower,
            upper,
            cost,
            x,
            basis: vec![BasisVar::Artificial; m],
            in_basis: vec![None; ncols],
            art_active: vec![true; m],
            art_value,
            art_pinned: false,
            red: vec![F::zero(); ncols],
            iterations: 0,
            degen_streak: 0,
            bland: false,
        }
    }

    #[inline]
    fn at(&self, r: usize, j: usize) -> F {
        self.a[r * self.ncols + j]
    }

    fn basic_value(&self, r: usize) -> F {
        match self.basis[r] {
            BasisVar::Col(j) => self.x[j],
            BasisVar::Artificial => self.art_value[r],
        }
    }

    fn basic_bounds(&self, r: usize) -> (F, F) {
        match self.basis[r] {
            BasisVar::Col(j) => (self.lower[j], self.upper[j]),
            // During phase one artificials may move freely above zero;
            // afterwards they are pinned so any touching pivot ejects them.
            BasisVar::Artificial => {
                if self.art_pinned {
                    (F::zero(), F::zero())
                } else {
                    (F::zero(), F::infinity())
                }
            }
        }
    }

    /// Reduced costs for a cost vector (artificial costs folded in).
    fn recompute_reduced(&mut self, phase_one: bool) {
        for j in 0..self.ncols {
            let mut red = if phase_one { F::zero() } else { self.cost[j] };
            for r in 0..self.m {
                let cb = match self.basis[r] {
                    BasisVar::Col(b) => {
                        if phase_one {
                            F::zero()
                        } else {
                            self.cost[b]
                        }
                    }
                    BasisVar::Artificial => {
                        if phase_one {
                            F::one()
                        } else {
                            F::zero()
                        }
                    }
                };
                if cb != F::zero() {
                    red = red - cb * self.at(r, j);
                }
            }
            self.red[j] = red;
        }
    }

    fn phase_one_objective(&self) -> F {
        (0..self.m)
            .filter(|&r| self.basis[r] == BasisVar::Artificial)
            .map(|r| self.art_value[r])
            .fold(F::zero(), |a, b| a + b)
    }

    fn solve(mut self) -> Result<LpOutcome<F>, String> {
        // Phase 1: minimize the artificial sum.
        self.recompute_reduced(true);
        match self.iterate(true)? {
            IterEnd::Optimal => {}
            IterEnd::Unbounded => {
                return Err("phase-one relaxation reported unbounded".to_string())
            }
        }
        if self.phase_one_objective() > self.cfg.eps_feas {
            return Ok(LpOutcome::Infeasible);
        }
        // Clamp leftover basic artificials to exactly zero and pin them.
        for r in 0..self.m {
            if self.basis[r] == BasisVar::Artificial {
                self.art_value[r] = F::zero();
            }
        }
        self.art_pinned = true;
        // Phase 2 on the true cost.
        self.recompute_reduced(false);
        self.degen_streak = 0;
        self.bland = false;
        match self.iterate(false)? {
            IterEnd::Optimal => {}
            IterEnd::Unbounded => return Ok(LpOutcome::Unbounded),
        }
        let values: Vec<F> = self.x[..self.n_struct].to_vec();
        let objective = values
            .iter()
            .zip(&self.cost[..self.n_struct])
            .map(|(&x, &c)| x * c)
            .fold(F::zero(), |a, b| a + b);
        let reduced_costs = self.red[..self.n_struct].to_vec();
        Ok(LpOutcome::Optimal(LpSolution {
            values,
            objective,
            reduced_costs,
            iterations: self.iterations,
        }))
    }

    fn iterate(&mut self, phase_one: bool) -> Result<IterEnd, String> {
        loop {
            self.iterations += 1;
            if self.iterations > self.cfg.max_iterations {
                return Err(format!(
                    "simplex exceeded {} iterations (cycling guard)",
                    self.cfg.max_iterations
                ));
            }
            if phase_one && self.phase_one_objective() <= self.cfg.eps_feas {
                return Ok(IterEnd::Optimal);
            }
            let Some((enter, dir)) = self.choose_entering() else {
                return Ok(IterEnd::Optimal);
            };
            match self.ratio_test(enter, dir) {
                Ratio::Unbounded => {
                    return if phase_one {
                        Err("unbounded direction during phase one".to_string())
                    } else {
                        Ok(IterEnd::Unbounded)
                    };
                }
                Ratio::BoundFlip(step) => {
                    self.apply_step(enter, dir, step, None);
                    if step > self.cfg.eps_step {
                        self.degen_streak = 0;
                        self.bland = false;
                    }
                }
                Ratio::Pivot { row, step } => {
                    self.apply_step(enter, dir, step, Some(row));
                    if step > self.cfg.eps_step {
                        self.degen_streak = 0;
                        self.bland = false;
                    } else {
                        self.degen_streak += 1;
                        if self.degen_streak > self.cfg.bland_after {
                            self.bland = true;
                        }
                    }
                }
            }
        }
    }

    /// Entering column and its direction (+1 increase, -1 decrease):
    /// Dantzig pricing by default, lowest improving index in Bland mode.
    fn choose_entering(&self) -> Option<(usize, F)> {
        let eps = self.cfg.eps_cost;
        let mut best: Option<(usize, F, F)> = None; // (col, dir, score)
        for j in 0..self.ncols {
            if self.in_basis[j].is_some() {
                continue;
            }
            let lo = self.lower[j];
            let hi = self.upper[j];
            if lo.is_finite() && hi.is_finite() && hi - lo <= self.cfg.eps_step {
                continue; // fixed column
            }
            let red = self.red[j];
            let can_increase = !hi.is_finite() || self.x[j] < hi - self.cfg.eps_step;
            let can_decrease = !lo.is_finite() || self.x[j] > lo + self.cfg.eps_step;
            let dir = if red < -eps && can_increase {
                F::one()
            } else if red > eps && can_decrease {
                -F::one()
            } else {
                continue;
            };
            if self.bland {
                return Some((j, dir));
            }
            let score = red.abs();
            match best {
                Some((_, _, s)) if s >= score => {}
                _ => best = Some((j, dir, score)),
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    fn ratio_test(&self, enter: usize, dir: F) -> Ratio<F> {
        let mut step = {
            let lo = self.lower[enter];
            let hi = self.upper[enter];
            if dir > F::zero() {
                if hi.is_finite() {
                    hi - self.x[enter]
                } else {
                    F::infinity()
                }
            } else if lo.is_finite() {
                self.x[enter] - lo
            } else {
                F::infinity()
            }
        };
        let mut leave: Option<(usize, F)> = None; // (row, |pivot|)
        for r in 0..self.m {
            let coeff = self.at(r, enter);
            if coeff.abs() <= self.cfg.eps_pivot {
                continue;
            }
            // basic value rate per unit step of the entering column
            let rate = -(dir * coeff);
            let value = self.basic_value(r);
            let (lo, hi) = self.basic_bounds(r);
            let limit = if rate > F::zero() {
                if hi.is_finite() {
                    ((hi - value) / rate).max(F::zero())
                } else {
                    continue;
                }
            } else if lo.is_finite() {
                ((value - lo) / (-rate)).max(F::zero())
            } else {
                continue;
            };
            let strictly_better = limit < step - self.cfg.eps_step;
            let tied = (limit - step).abs() <= self.cfg.eps_step;
            if strictly_better || (tied && leave.is_some()) || (tied && step.is_infinite()) {
                let replace = if strictly_better || leave.is_none() {
                    true
                } else if self.bland {
                    // lowest basic variable index among ties
                    let cur = leave.unwrap().0;
                    basis_order(self.basis[r], r) < basis_order(self.basis[cur], cur)
                } else {
                    // largest pivot among ties for stability
                    coeff.abs() > leave.unwrap().1
                };
                if strictly_better {
                    step = limit;
                    leave = Some((r, coeff.abs()));
                } else if replace {
                    leave = Some((r, coeff.abs()));
                }
            }
        }
        if step.is_infinite() {
            return Ratio::Unbounded;
        }
        match leave {
            None => Ratio::BoundFlip(step),
            Some((row, _)) => Ratio::Pivot { row, step },
        }
    }

    fn apply_step(&mut self, enter: usize, dir: F, step: F, pivot_row: Option<usize>) {
        // Move all basic values along the direction.
        if step > F::zero() {
            for r in 0..self.m {
                let coeff = self.at(r, enter);
                if coeff == F::zero() {
                    continue;
                }
                let delta = -(dir * coeff) * step;
                match self.basis[r] {
                    BasisVar::Col(j) => self.x[j] = self.x[j] + delta,
                    BasisVar::Artificial => {
                        self.art_value[r] = self.art_value[r] + delta;
                    }
                }
            }
            self.x[enter] = self.x[enter] + dir * step;
        }
        let Some(row) = pivot_row else {
            return; // bound flip: basis unchanged
        };

        // Snap the leaving variable onto the bound it reached.
        match self.basis[row] {
            BasisVar::Col(j) => {
                let (lo, hi) = (self.lower[j], self.upper[j]);
                let v = self.x[j];
                self.x[j] = if (v - lo).abs() < (v - hi).abs() { lo } else { hi };
                self.in_basis[j] = None;
            }
            BasisVar::Artificial => {
                self.art_value[row] = F::zero();
                self.art_active[row] = false; // dropped for good
            }
        }

        // Gaussian elimination on the pivot column.
        let pivot = self.at(row, enter);
        let inv = F::one() / pivot;
        for j in 0..self.ncols {
            self.a[row * self.ncols + j] = self.a[row * self.ncols + j] * inv;
        }
        for r in 0..self.m {
            if r == row {
                continue;
            }
            let factor = self.at(r, enter);
            if factor == F::zero() {
                continue;
            }
            for j in 0..self.ncols {
                let upd = self.a[row * self.ncols + j] * factor;
                self.a[r * self.ncols + j] = self.a[r * self.ncols + j] - upd;
            }
        }
        let red_enter = self.red[enter];
        if red_enter != F::zero() {
            for j in 0..self.ncols {
                let upd = self.a[row * self.ncols + j] * red_enter;
                self.red[j] = self.red[j] - upd;
            }
        }
        self.basis[row] = BasisVar::Col(enter);
        self.in_basis[enter] = Some(row);
    }
}

fn basis_order(var: BasisVar, row: usize) -> (usize, usize) {
    match var {
        BasisVar::Col(j) => (j, row),
        BasisVar::Artificial => (usize::MAX, row),
    }
}

enum IterEnd {
    Optimal,
    Unbounded,
}

enum Ratio<F> {
    BoundFlip(F),
    Pivot { row: usize, step: F },
    Unbounded,
}
