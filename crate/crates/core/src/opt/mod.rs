//! Optimal defender strategies.
//!
//! [`solve_marginal_lp`] ignores leakage and optimizes coverage marginals.
//! [`solve_full_lp`] enumerates every pure strategy, which is exact but only
//! practical for small `C(n, k)`. [`column_generation`] grows a restricted
//! master problem with columns priced by a defender oracle, either the
//! support-enumeration oracle ([`defender_oracle_alg1`]) or brute force.

mod colgen;
mod marginal;
mod master;
mod oracle;

pub use colgen::{
    column_generation, initial_columns, solve_full_lp, ColumnGenOptions, OracleKind, SolveReport, Termination,
};
pub use marginal::{solve_marginal_lp, MarginalSolution};
pub use master::{master_duals, MasterDuals, MasterProblem, MasterSolution};
pub use oracle::{
    build_oracle_matrix, defender_oracle_alg1, defender_oracle_bruteforce, quadratic_value, OracleMatrix,
    ALG1_MAX_SUPPORT, ENUMERATION_LIMIT,
};
