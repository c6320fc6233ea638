//! Utilities over potential outcomes and the decision rules that map an
//! observed outcome to a probability of acting.
//!
//! "Action" gives the intervention to everyone, "inaction" to no one.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{Design, StratumCounts, TrialOutcome};
use crate::error::{Error, Result};
use crate::likelihood::{LikelihoodTable, MleSet, PosteriorSummary, Prior};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Choice {
    Action,
    Inaction,
}

/// Linear utility in the efficacious and harmed counts.
///
/// `u(theta, action) = (w_e * efficacious - w_u * harmed) / n` and
/// `u(theta, inaction) = -u(theta, action)`; the division by `n` is dropped
/// when `per_participant` is off.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UtilitySpec {
    pub efficacy_weight: Rational64,
    pub unsafe_weight: Rational64,
    pub per_participant: bool,
}

impl Default for UtilitySpec {
    fn default() -> Self {
        Self {
            efficacy_weight: Rational64::new(1, 2),
            unsafe_weight: Rational64::from_integer(1),
            per_participant: true,
        }
    }
}

impl UtilitySpec {
    pub fn new(
        efficacy_weight: Rational64,
        unsafe_weight: Rational64,
        per_participant: bool,
    ) -> Result<Self> {
        let spec = Self {
            efficacy_weight,
            unsafe_weight,
            per_participant,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.efficacy_weight.is_positive() {
            return Err(Error::InvalidUtility(format!(
                "efficacy weight must be positive, got {}",
                self.efficacy_weight
            )));
        }
        if !self.unsafe_weight.is_positive() {
            return Err(Error::InvalidUtility(format!(
                "unsafe weight must be positive, got {}",
                self.unsafe_weight
            )));
        }
        Ok(())
    }

    /// True for the weights (1/2, 1) with per-participant normalization.
    pub fn is_default(&self) -> bool {
        *self == Self::default()
    }

    /// `(w_e * efficacious - w_u * harmed)` scaled to an integer: returns
    /// `(numerator, denominator)` with a denominator that depends only on the
    /// weights and `n`, never on the particular `theta`.
    pub(crate) fn scaled_net(&self, theta: &StratumCounts, n: u32) -> (i128, i128) {
        let (a, b) = (
            *self.efficacy_weight.numer() as i128,
            *self.efficacy_weight.denom() as i128,
        );
        let (c, d) = (
            *self.unsafe_weight.numer() as i128,
            *self.unsafe_weight.denom() as i128,
        );
        let num = a * d * theta.efficacious as i128 - c * b * theta.harmed as i128;
        let den = b
            * d
            * if self.per_participant {
                n.max(1) as i128
            } else {
                1
            };
        (num, den)
    }
}

/// Utility of `choice` when the sample's strata are `theta`.
pub fn utility(theta: &StratumCounts, choice: Choice, spec: &UtilitySpec) -> Rational64 {
    let net =
        spec.efficacy_weight * theta.efficacious as i64 - spec.unsafe_weight * theta.harmed as i64;
    let n = theta.total() as i64;
    let net = if spec.per_participant && n > 0 {
        net / n
    } else {
        net
    };
    match choice {
        Choice::Action => net,
        Choice::Inaction => -net,
    }
}

/// Probability of taking action given the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionProbability(Rational64);

impl ActionProbability {
    pub const ZERO: Self = Self(Rational64::new_raw(0, 1));
    pub const HALF: Self = Self(Rational64::new_raw(1, 2));
    pub const ONE: Self = Self(Rational64::new_raw(1, 1));

    pub fn new(p: Rational64) -> Result<Self> {
        if p < Rational64::zero() || p > Rational64::from_integer(1) {
            return Err(Error::Parse {
                what: "action probability".into(),
                reason: format!("{p} is outside [0, 1]"),
            });
        }
        Ok(Self(p))
    }

    /// 1 if action is strictly better, 1/2 on a tie, 0 otherwise.
    pub fn from_preference(action_vs_inaction: Ordering) -> Self {
        match action_vs_inaction {
            Ordering::Greater => Self::ONE,
            Ordering::Equal => Self::HALF,
            Ordering::Less => Self::ZERO,
        }
    }

    pub fn value(&self) -> Rational64 {
        self.0
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.0.numer()), BigInt::from(*self.0.denom()))
    }

    pub fn complement(&self) -> Self {
        Self(Rational64::from_integer(1) - self.0)
    }
}

impl fmt::Display for ActionProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Maximum-likelihood rule for a known MLE set: average over the set of
/// the per-vector best response.
pub fn ml_from_mle_set(mle: &[StratumCounts], spec: &UtilitySpec) -> ActionProbability {
    assert!(!mle.is_empty(), "MLE set is never empty");
    let mut halves: i64 = 0;
    for theta in mle {
        let act = utility(theta, Choice::Action, spec);
        let idle = utility(theta, Choice::Inaction, spec);
        halves += match act.cmp(&idle) {
            Ordering::Greater => 2,
            Ordering::Equal => 1,
            Ordering::Less => 0,
        };
    }
    ActionProbability(Rational64::new(halves, 2 * mle.len() as i64))
}

/// Bayes rule from posterior means. Utility is linear in the counts, so the
/// posterior expected utility of action is the utility at the mean.
pub fn bayes_from_means(means: &[BigRational; 4], spec: &UtilitySpec) -> ActionProbability {
    let big = |r: Rational64| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
    let net = big(spec.efficacy_weight) * &means[1] - big(spec.unsafe_weight) * &means[2];
    ActionProbability::from_preference(net.cmp(&BigRational::zero()))
}

pub fn rule_ml(x: &TrialOutcome, design: &Design, spec: &UtilitySpec) -> Result<ActionProbability> {
    let mle = LikelihoodTable::new(x, design)?.mle_set();
    Ok(ml_from_mle_set(&mle.strata, spec))
}

pub fn rule_bayes(
    x: &TrialOutcome,
    design: &Design,
    spec: &UtilitySpec,
    prior: &Prior,
) -> Result<ActionProbability> {
    let post = LikelihoodTable::new(x, design)?.posterior(prior)?;
    Ok(bayes_from_means(&post.means, spec))
}

/// Act when the observed survival share is higher in intervention.
pub fn rule_empirical_success(x: &TrialOutcome, design: &Design) -> Result<ActionProbability> {
    design.check_outcome(x)?;
    let treated = x.treated_alive as u64 * design.control_size() as u64;
    let control = x.control_alive as u64 * design.m() as u64;
    Ok(ActionProbability::from_preference(treated.cmp(&control)))
}

/// Range of the harmed share consistent with the estimated marginals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrechetInterval {
    /// Survival share in intervention.
    pub p_treated: Rational64,
    /// Survival share in control.
    pub p_control: Rational64,
    pub lower: Rational64,
    pub upper: Rational64,
}

impl FrechetInterval {
    /// Estimated average effect `p_treated - p_control`.
    pub fn effect(&self) -> Rational64 {
        self.p_treated - self.p_control
    }

    /// Effect cutoff `min(p_control, 1 - p_treated) / 2` of the default-weight rule.
    pub fn threshold(&self) -> Rational64 {
        self.upper / 2
    }
}

pub fn frechet_interval(x: &TrialOutcome, design: &Design) -> Result<FrechetInterval> {
    design.check_outcome(x)?;
    let p_treated = Rational64::new(x.treated_alive as i64, design.m() as i64);
    let p_control = Rational64::new(x.control_alive as i64, design.control_size() as i64);
    let one = Rational64::from_integer(1);
    let lower = (p_control - p_treated).max(Rational64::zero());
    let upper = p_control.min(one - p_treated);
    Ok(FrechetInterval {
        p_treated,
        p_control,
        lower,
        upper,
    })
}

/// Worst-case utility of each choice over the Fréchet set.
///
/// The harmed share `p01` ranges over the interval and the efficacious share
/// is `effect + p01`, so `u(action) = w_e * effect + (w_e - w_u) * p01` is
/// affine in `p01` and both minima sit at interval endpoints.
pub fn frechet_minima(interval: &FrechetInterval, spec: &UtilitySpec) -> (Rational64, Rational64) {
    let slope = spec.efficacy_weight - spec.unsafe_weight;
    let at = |p01: Rational64| spec.efficacy_weight * interval.effect() + slope * p01;
    let lo = at(interval.lower);
    let hi = at(interval.upper);
    (lo.min(hi), -(lo.max(hi)))
}

/// Fréchet rule by direct minimization over the set; any weights.
pub fn rule_frechet_set(
    x: &TrialOutcome,
    design: &Design,
    spec: &UtilitySpec,
) -> Result<ActionProbability> {
    let interval = frechet_interval(x, design)?;
    let (act, idle) = frechet_minima(&interval, spec);
    Ok(ActionProbability::from_preference(act.cmp(&idle)))
}

/// Fréchet rule as an effect cutoff; valid for the default weights only.
pub fn rule_frechet_cutoff(x: &TrialOutcome, design: &Design) -> Result<ActionProbability> {
    let interval = frechet_interval(x, design)?;
    Ok(ActionProbability::from_preference(
        interval.effect().cmp(&interval.threshold()),
    ))
}

pub fn rule_frechet(
    x: &TrialOutcome,
    design: &Design,
    spec: &UtilitySpec,
) -> Result<ActionProbability> {
    if spec.is_default() {
        rule_frechet_cutoff(x, design)
    } else {
        rule_frechet_set(x, design, spec)
    }
}

/// Ignores the data and acts with probability one half.
pub fn rule_coinflip(_x: &TrialOutcome) -> ActionProbability {
    ActionProbability::HALF
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "ml")]
    MaximumLikelihood,
    #[serde(rename = "bayes")]
    Bayes,
    #[serde(rename = "es")]
    EmpiricalSuccess,
    #[serde(rename = "frechet")]
    Frechet,
    #[serde(rename = "coinflip")]
    CoinFlip,
}

impl Rule {
    pub const ALL: [Rule; 5] = [
        Rule::MaximumLikelihood,
        Rule::Bayes,
        Rule::EmpiricalSuccess,
        Rule::Frechet,
        Rule::CoinFlip,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Rule::MaximumLikelihood => "ml",
            Rule::Bayes => "bayes",
            Rule::EmpiricalSuccess => "es",
            Rule::Frechet => "frechet",
            Rule::CoinFlip => "coinflip",
        }
    }

    pub fn position(&self) -> usize {
        Rule::ALL.iter().position(|r| r == self).unwrap()
    }

    /// Evaluates the rule at one outcome, from scratch.
    pub fn apply(
        &self,
        x: &TrialOutcome,
        design: &Design,
        spec: &UtilitySpec,
        prior: &Prior,
    ) -> Result<ActionProbability> {
        match self {
            Rule::MaximumLikelihood => rule_ml(x, design, spec),
            Rule::Bayes => rule_bayes(x, design, spec, prior),
            Rule::EmpiricalSuccess => rule_empirical_success(x, design),
            Rule::Frechet => rule_frechet(x, design, spec),
            Rule::CoinFlip => {
                design.check_outcome(x)?;
                Ok(rule_coinflip(x))
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ml" => Ok(Rule::MaximumLikelihood),
            "bayes" => Ok(Rule::Bayes),
            "es" => Ok(Rule::EmpiricalSuccess),
            "frechet" => Ok(Rule::Frechet),
            "coinflip" => Ok(Rule::CoinFlip),
            _ => Err(Error::UnknownRule(s.to_string())),
        }
    }
}

/// Why a rule chose what it did.
#[derive(Debug, Clone, PartialEq)]
pub enum Rationale {
    MaximumLikelihood {
        mle: MleSet,
    },
    Bayes {
        posterior: PosteriorSummary,
    },
    EmpiricalSuccess {
        treated_share: Rational64,
        control_share: Rational64,
    },
    Frechet {
        interval: FrechetInterval,
        effect: Rational64,
        threshold: Rational64,
    },
    CoinFlip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub rule: Rule,
    pub probability: ActionProbability,
    pub rationale: Rationale,
}

/// Applies `rule` to `x` and keeps the intermediate quantities it used.
pub fn decide(
    rule: Rule,
    x: &TrialOutcome,
    design: &Design,
    spec: &UtilitySpec,
    prior: &Prior,
) -> Result<Decision> {
    let (probability, rationale) = match rule {
        Rule::MaximumLikelihood => {
            let mle = LikelihoodTable::new(x, design)?.mle_set();
            (
                ml_from_mle_set(&mle.strata, spec),
                Rationale::MaximumLikelihood { mle },
            )
        }
        Rule::Bayes => {
            let posterior = LikelihoodTable::new(x, design)?.posterior(prior)?;
            (
                bayes_from_means(&posterior.means, spec),
                Rationale::Bayes { posterior },
            )
        }
        Rule::EmpiricalSuccess => {
            let interval = frechet_interval(x, design)?;
            (
                rule_empirical_success(x, design)?,
                Rationale::EmpiricalSuccess {
                    treated_share: interval.p_treated,
                    control_share: interval.p_control,
                },
            )
        }
        Rule::Frechet => {
            let interval = frechet_interval(x, design)?;
            (
                rule_frechet(x, design, spec)?,
                Rationale::Frechet {
                    interval,
                    effect: interval.effect(),
                    threshold: interval.threshold(),
                },
            )
        }
        Rule::CoinFlip => {
            design.check_outcome(x)?;
            (rule_coinflip(x), Rationale::CoinFlip)
        }
    };
    Ok(Decision {
        rule,
        probability,
        rationale,
    })
}
