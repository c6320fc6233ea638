//! Exact finite-sample inference and treatment decisions for two-arm
//! randomized experiments with a binary outcome.
//!
//! The randomization itself is the only source of uncertainty: the sample's
//! principal-stratum counts are fixed unknowns and every probability is an
//! exact ratio of assignment counts. On top of the likelihood the crate
//! provides four data-driven decision rules plus a coin flip, and evaluates
//! rules exhaustively under four criteria.
//!
//! ```
//! use exact_decide::{mle_set, Design, StratumCounts, TrialOutcome};
//!
//! let design = Design::new(28, 14).unwrap();
//! let x = TrialOutcome::new(12, 2, 5, 9);
//! let mle = mle_set(&x, &design).unwrap();
//! assert_eq!(mle.strata, vec![StratumCounts::new(0, 21, 7, 0)]);
//! ```

// Public signatures use these types.
pub use num_bigint;
pub use num_rational;
pub use num_traits;

pub mod combinatorics;
pub mod config;
pub mod criteria;
pub mod error;
pub mod likelihood;
pub mod probability;
pub mod report;
pub mod rules;
pub mod svg;
pub mod verify;

pub use combinatorics::{
    binom, enumerate_outcomes, enumerate_strata, strata_of_size, BigCount, Design, StratumCounts,
    TrialOutcome, MAX_N,
};
pub use config::{OutputFormat, PriorSelection, RunConfig, TrialRecord};
pub use criteria::{
    expected_utility, sweep, v_bayes, v_maximin, v_maximin_normalized, v_ml, Criterion, Evaluator,
    MPolicy, RuleScore, SweepRow, Witness,
};
pub use error::{Error, Result};
pub use likelihood::{
    fisher_exact_p, fisher_exact_p_with, likelihood, likelihood_numerator, mle_set,
    outcome_distribution, positive_support_count, posterior, AssignmentSplit, FisherAlternative,
    LikelihoodTable, MleSet, PosteriorSummary, Prior, PriorWeights,
};
pub use probability::{format_decimal, ExactProbability};
pub use report::{analyze, decide_report, run_sweep, ExactValue, SweepRequest};
pub use rules::{
    decide, frechet_interval, rule_bayes, rule_coinflip, rule_empirical_success, rule_frechet,
    rule_frechet_cutoff, rule_frechet_set, rule_ml, utility, ActionProbability, Choice, Decision,
    FrechetInterval, Rationale, Rule, UtilitySpec,
};
pub use verify::{VerifyOptions, VerifyReport};
