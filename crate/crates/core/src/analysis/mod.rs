//! Numerical oracles: the balance function `alpha_k(M, j)` and the diversity
//! statistic `X_{m,H,j}` (number of disjoint blocks among random blocks).

mod balance;
mod diversity;

pub use balance::{
    balance_function, balance_series, bernoulli_balance_closed_form, exponential_balance_closed_form,
    exploration_budget, BalanceEstimate, BalanceMode, BalanceQuery,
};
pub use diversity::{
    diversity_estimate, diversity_pmf_estimate, diversity_pmf_exact, max_disjoint_blocks, BlockDraw, DiversityEstimate,
    MAX_EXACT_DIVERSITY,
};
