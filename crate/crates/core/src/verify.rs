//! Self-checks over exhaustive enumerations of small designs.
//!
//! Each suite stops at its first failure and reports the design and the
//! stratum or outcome that broke it.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::combinatorics::{enumerate_outcomes, enumerate_strata, BigCount, Design, StratumCounts};
use crate::criteria::{big, Evaluator, MPolicy, Witness};
use crate::error::Result;
use crate::likelihood::{likelihood_numerator_from, outcome_numerators, Prior};
use crate::rules::{rule_frechet_cutoff, rule_frechet_set, Rule, UtilitySpec};

pub const NORMALIZATION_MAX_N: u32 = 20;
pub const ORACLE_MAX_N: u32 = 8;
pub const FRECHET_MAX_N: u32 = 12;
pub const BOUNDS_MAX_N: u32 = 50;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Lowers every suite's upper limit on `n`.
    pub max_n: Option<u32>,
    pub spec: UtilitySpec,
    pub m_policy: MPolicy,
    /// Starts the closed-form sum at 1 instead of 0. Used to confirm that
    /// the suites notice a broken likelihood.
    #[doc(hidden)]
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_n: None,
            spec: UtilitySpec::default(),
            m_policy: MPolicy::EvenHalf,
            inject_fault: false,
        }
    }
}

impl VerifyOptions {
    fn cap(&self, limit: u32) -> u32 {
        self.max_n.map_or(limit, |c| c.min(limit))
    }

    fn numerator(
        &self,
        theta: &StratumCounts,
        x: &crate::combinatorics::TrialOutcome,
        design: &Design,
    ) -> BigCount {
        likelihood_numerator_from(theta, x, design, u32::from(self.inject_fault))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub n: u32,
    pub m: u32,
    pub witness: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub max_n: u32,
    pub checks: u64,
    pub failure: Option<Failure>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(
                f,
                "PASS {} (n <= {}, {} checks)",
                self.name, self.max_n, self.checks
            ),
            Some(e) => write!(
                f,
                "FAIL {} at n={} m={} {}: {}",
                self.name, e.n, e.m, e.witness, e.detail
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

struct Suite {
    name: &'static str,
    max_n: u32,
    checks: u64,
}

impl Suite {
    fn new(name: &'static str, max_n: u32) -> Self {
        Self {
            name,
            max_n,
            checks: 0,
        }
    }

    fn pass(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            max_n: self.max_n,
            checks: self.checks,
            failure: None,
        }
    }

    fn fail(self, design: &Design, witness: String, detail: String) -> SuiteResult {
        SuiteResult {
            name: self.name,
            max_n: self.max_n,
            checks: self.checks,
            failure: Some(Failure {
                n: design.n(),
                m: design.m(),
                witness,
                detail,
            }),
        }
    }
}

/// Likelihoods over all outcomes sum to one, for `m = floor(n/2)` and `m = 1`.
pub fn normalization(opts: &VerifyOptions) -> Result<SuiteResult> {
    let mut suite = Suite::new("normalization", opts.cap(NORMALIZATION_MAX_N));
    for n in 2..=suite.max_n {
        let mut ms = vec![n / 2, 1];
        ms.dedup();
        for m in ms {
            let design = Design::new(n, m)?;
            let outcomes = enumerate_outcomes(&design);
            for theta in enumerate_strata(&design) {
                let total: BigCount = outcomes
                    .iter()
                    .map(|x| opts.numerator(&theta, x, &design))
                    .sum();
                suite.checks += 1;
                if total != design.assignments() {
                    let detail = format!("likelihoods sum to {total}/{}", design.assignments());
                    return Ok(suite.fail(&design, format!("theta={theta}"), detail));
                }
            }
        }
    }
    Ok(suite.pass())
}

/// Counts outcomes over every subset of participants and compares with both
/// the closed form and the split enumeration.
pub fn oracle(opts: &VerifyOptions) -> Result<SuiteResult> {
    let mut suite = Suite::new("oracle", opts.cap(ORACLE_MAX_N));
    for n in 2..=suite.max_n {
        for m in 1..n {
            let design = Design::new(n, m)?;
            let outcomes = enumerate_outcomes(&design);
            for theta in enumerate_strata(&design) {
                let counts = subset_counts(&theta, &design);
                let split = outcome_numerators(&theta, &design);
                for x in &outcomes {
                    let j = design.outcome_index(x);
                    let closed = opts.numerator(&theta, x, &design);
                    suite.checks += 1;
                    if closed != counts[j] || split[j] != counts[j] {
                        let detail = format!(
                            "subsets {}, closed form {closed}, split enumeration {}",
                            counts[j], split[j]
                        );
                        return Ok(suite.fail(&design, format!("theta={theta} x={x}"), detail));
                    }
                }
            }
        }
    }
    Ok(suite.pass())
}

fn subset_counts(theta: &StratumCounts, design: &Design) -> Vec<BigCount> {
    // (alive if treated, alive if control) per participant
    let mut people = Vec::new();
    let kinds = [(true, true), (true, false), (false, true), (false, false)];
    for (count, kind) in theta.as_array().iter().zip(kinds) {
        people.extend(std::iter::repeat_n(kind, *count as usize));
    }
    let n = design.n();
    let stride = design.control_size() as usize + 1;
    let mut counts = vec![0; design.outcome_count()];
    for mask in 0u32..(1 << n) {
        if mask.count_ones() != design.m() {
            continue;
        }
        let (mut treated_alive, mut control_alive) = (0usize, 0usize);
        for (k, &(if_treated, if_control)) in people.iter().enumerate() {
            if mask >> k & 1 == 1 {
                treated_alive += usize::from(if_treated);
            } else {
                control_alive += usize::from(if_control);
            }
        }
        counts[treated_alive * stride + control_alive] += 1;
    }
    counts
}

/// The set-valued and cutoff forms of the Fréchet rule agree.
pub fn frechet_equivalence(opts: &VerifyOptions) -> Result<SuiteResult> {
    let mut suite = Suite::new("frechet-equivalence", opts.cap(FRECHET_MAX_N));
    let spec = UtilitySpec::default();
    for n in 2..=suite.max_n {
        for m in 1..n {
            let design = Design::new(n, m)?;
            for x in enumerate_outcomes(&design) {
                let set = rule_frechet_set(&x, &design, &spec)?;
                let cutoff = rule_frechet_cutoff(&x, &design)?;
                suite.checks += 1;
                if set != cutoff {
                    let detail =
                        format!("set form {}, cutoff form {}", set.value(), cutoff.value());
                    return Ok(suite.fail(&design, format!("x={x}"), detail));
                }
            }
        }
    }
    Ok(suite.pass())
}

/// Sign and ordering constraints every criterion must satisfy, plus a
/// re-evaluation of each maximin witness.
pub fn criterion_bounds(opts: &VerifyOptions) -> Result<SuiteResult> {
    let mut suite = Suite::new("criterion-bounds", opts.cap(BOUNDS_MAX_N));
    let spec = &opts.spec;
    let max_utility = {
        let w = spec.efficacy_weight.max(spec.unsafe_weight);
        big(w)
    };
    for n in 2..=suite.max_n {
        let design = match opts.m_policy {
            MPolicy::EvenHalf if n % 2 == 1 => continue,
            policy => policy.design_for(n)?,
        };
        let eval = Evaluator::new(&design, spec, &Prior::Uniform)?;
        let bound = if spec.per_participant {
            max_utility.clone()
        } else {
            &max_utility * BigRational::from_integer(BigInt::from(n))
        };
        let bayes_best = eval.v_bayes(Rule::Bayes).value;
        for rule in Rule::ALL {
            let mm = eval.v_maximin(rule);
            let mmn = eval.v_maximin_normalized(rule);
            let vb = eval.v_bayes(rule);
            let vml = eval.v_ml(rule);
            let mut problems = Vec::new();
            if mm.value.is_positive() {
                problems.push(format!("maximin {} > 0", mm.value));
            }
            if rule == Rule::CoinFlip && !mm.value.is_zero() {
                problems.push(format!("coin-flip maximin {} != 0", mm.value));
            }
            if mmn.value > mm.value {
                problems.push(format!(
                    "normalized maximin {} above maximin {}",
                    mmn.value, mm.value
                ));
            }
            if vml.value.is_positive() {
                problems.push(format!("ml criterion {} > 0", vml.value));
            }
            if rule == Rule::MaximumLikelihood && !vml.value.is_zero() {
                problems.push(format!(
                    "ml rule scores {} under its own criterion",
                    vml.value
                ));
            }
            if vb.value > bayes_best {
                problems.push(format!(
                    "bayes criterion {} beats the bayes rule {}",
                    vb.value, bayes_best
                ));
            }
            for v in [&mm.value, &mmn.value, &vb.value, &vml.value] {
                if v.abs() > &bound * BigRational::from_integer(BigInt::from(2)) {
                    problems.push(format!("{v} outside the utility range"));
                }
            }
            if let Witness::Stratum(theta) = mm.witness {
                let again = eval.expected_utility(rule, &theta)?;
                if again != mm.value {
                    problems.push(format!(
                        "witness {theta} re-evaluates to {again}, not {}",
                        mm.value
                    ));
                }
            }
            suite.checks += 1;
            if let Some(p) = problems.into_iter().next() {
                let witness = format!("rule={}", rule.name());
                return Ok(suite.fail(&design, witness, p));
            }
        }
    }
    Ok(suite.pass())
}

pub fn run(opts: &VerifyOptions) -> Result<VerifyReport> {
    Ok(VerifyReport {
        suites: vec![
            normalization(opts)?,
            oracle(opts)?,
            frechet_equivalence(opts)?,
            criterion_bounds(opts)?,
        ],
    })
}
