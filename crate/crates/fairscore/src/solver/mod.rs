//! Exact solving: LP relaxation engine, branch-and-bound, a brute-force
//! oracle, and interchange formats for external solvers.

mod branch_bound;
mod brute;
mod formats;
pub mod simplex;

pub use branch_bound::{
    solve, solve_lp, LpRelaxation, NodeSelection, SolveResult, SolveStatus, SolverConfig,
};
pub use brute::{brute_force, BruteForceResult};
pub use formats::{
    parse_mps, parse_solution, verify_external, write_lp, write_mps, write_solution,
    ExternalVerification,
};
