//! Exhaustive evaluation of decision rules under four criteria: worst-case
//! expected utility, worst-case normalized utility (minimax regret), prior
//! expected utility, and worst-case shortfall against the maximum-likelihood
//! rule when the MLE is taken as truth.
//!
//! An [`Evaluator`] makes two passes over the stratum vectors of one design.
//! The first builds, for every outcome, the MLE set and the prior-weighted
//! posterior sums, which fixes every rule's action table. The second
//! computes each vector's outcome distribution once and folds it against all
//! action tables. Both passes use integer arithmetic and ordered reductions,
//! so the results do not depend on the number of worker threads.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    enumerate_outcomes, enumerate_strata, BigCount, Design, StratumCounts, TrialOutcome,
};
use crate::error::{Error, Result};
use crate::likelihood::{accumulate_outcome_numerators, Prior, PriorWeights};
use crate::rules::{
    bayes_from_means, ml_from_mle_set, rule_empirical_success, rule_frechet, ActionProbability,
    Rule, UtilitySpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "maximin")]
    Maximin,
    #[serde(rename = "maximin-normalized")]
    MaximinNormalized,
    #[serde(rename = "bayes")]
    Bayes,
    #[serde(rename = "ml")]
    MaximumLikelihood,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [
        Criterion::Maximin,
        Criterion::MaximinNormalized,
        Criterion::Bayes,
        Criterion::MaximumLikelihood,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Criterion::Maximin => "maximin",
            Criterion::MaximinNormalized => "maximin-normalized",
            Criterion::Bayes => "bayes",
            Criterion::MaximumLikelihood => "ml",
        }
    }

    pub fn title(&self) -> &'static str {
        match self {
            Criterion::Maximin => "Maximin utility",
            Criterion::MaximinNormalized => "Maximin normalized utility (minimax regret)",
            Criterion::Bayes => "Expected utility",
            Criterion::MaximumLikelihood => "Maximum likelihood criterion",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "maximin" | "mm" => Ok(Criterion::Maximin),
            "maximin-normalized" | "mmn" | "regret" => Ok(Criterion::MaximinNormalized),
            "bayes" | "b" => Ok(Criterion::Bayes),
            "ml" => Ok(Criterion::MaximumLikelihood),
            _ => Err(Error::UnknownCriterion(s.to_string())),
        }
    }
}

/// Where a worst case was attained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Witness {
    Stratum(StratumCounts),
    Outcome(TrialOutcome),
    /// Averages have no single witness.
    None,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Stratum(t) => write!(f, "theta={t}"),
            Witness::Outcome(x) => write!(f, "x={x}"),
            Witness::None => f.write_str("-"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleScore {
    pub rule: Rule,
    pub criterion: Criterion,
    pub value: BigRational,
    /// First witness in canonical enumeration order.
    pub witness: Witness,
}

#[derive(Debug, Clone, Default)]
struct OutcomeSummary {
    max_numerator: BigCount,
    mle: Vec<u32>,
    evidence: u128,
    weighted: [u128; 4],
}

impl OutcomeSummary {
    fn merge(&mut self, other: OutcomeSummary) -> bool {
        use std::cmp::Ordering::*;
        match other.max_numerator.cmp(&self.max_numerator) {
            Greater => {
                self.max_numerator = other.max_numerator;
                self.mle = other.mle;
            }
            Equal => self.mle.extend(other.mle),
            Less => {}
        }
        let mut ok = true;
        match self.evidence.checked_add(other.evidence) {
            Some(v) => self.evidence = v,
            None => ok = false,
        }
        for (a, b) in self.weighted.iter_mut().zip(other.weighted) {
            match a.checked_add(b) {
                Some(v) => *a = v,
                None => ok = false,
            }
        }
        ok
    }
}

struct FirstPass {
    buf: Vec<BigCount>,
    summaries: Vec<OutcomeSummary>,
    overflow: bool,
}

/// Precomputed action tables and expected utilities for one design.
pub struct Evaluator {
    design: Design,
    spec: UtilitySpec,
    prior: PriorWeights,
    strata: Vec<StratumCounts>,
    outcomes: Vec<TrialOutcome>,
    summaries: Vec<OutcomeSummary>,
    actions: Vec<Vec<ActionProbability>>,
    net: Vec<i128>,
    net_den: i128,
    scale: Vec<i128>,
    sums: Vec<[i128; 5]>,
}

impl Evaluator {
    /// `prior` drives both the Bayes rule and the Bayes criterion.
    pub fn new(design: &Design, spec: &UtilitySpec, prior: &Prior) -> Result<Self> {
        spec.validate()?;
        let prior = prior.resolve(design)?;
        let strata = enumerate_strata(design);
        let outcomes = enumerate_outcomes(design);
        let summaries = first_pass(design, &strata, &prior)?;

        let mut actions = Vec::with_capacity(Rule::ALL.len());
        for rule in Rule::ALL {
            let table = outcomes
                .iter()
                .zip(&summaries)
                .map(|(x, s)| action_from_summary(rule, x, s, design, spec, &strata))
                .collect::<Result<Vec<_>>>()?;
            actions.push(table);
        }

        let n = design.n();
        let net: Vec<i128> = strata.iter().map(|t| spec.scaled_net(t, n).0).collect();
        let net_den = spec.scaled_net(&strata[0], n).1;

        // (2A - 1) rescaled to integers per rule
        let assignments = design.assignments() as i128;
        let mut scale = Vec::with_capacity(actions.len());
        let mut coeffs: Vec<Vec<i128>> = Vec::with_capacity(actions.len());
        for table in &actions {
            let mut lcm: i128 = 1;
            for a in table {
                lcm = lcm.lcm(&(*a.value().denom() as i128));
                if lcm > i64::MAX as i128 {
                    return Err(Error::Overflow("action-probability denominators"));
                }
            }
            assignments
                .checked_mul(lcm)
                .ok_or(Error::Overflow("expected-utility accumulator"))?;
            let c = table
                .iter()
                .map(|a| {
                    let (p, q) = (*a.value().numer() as i128, *a.value().denom() as i128);
                    (2 * p - q) * (lcm / q)
                })
                .collect();
            scale.push(lcm);
            coeffs.push(c);
        }

        let sums = second_pass(design, &strata, outcomes.len(), &coeffs);

        Ok(Self {
            design: *design,
            spec: *spec,
            prior,
            strata,
            outcomes,
            summaries,
            actions,
            net,
            net_den,
            scale,
            sums,
        })
    }

    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn spec(&self) -> &UtilitySpec {
        &self.spec
    }

    pub fn strata(&self) -> &[StratumCounts] {
        &self.strata
    }

    pub fn outcomes(&self) -> &[TrialOutcome] {
        &self.outcomes
    }

    pub fn actions(&self, rule: Rule) -> &[ActionProbability] {
        &self.actions[rule.position()]
    }

    pub fn action(&self, rule: Rule, x: &TrialOutcome) -> Result<ActionProbability> {
        self.design.check_outcome(x)?;
        Ok(self.actions(rule)[self.design.outcome_index(x)])
    }

    pub fn mle_set(&self, x: &TrialOutcome) -> Result<Vec<StratumCounts>> {
        self.design.check_outcome(x)?;
        let s = &self.summaries[self.design.outcome_index(x)];
        Ok(s.mle.iter().map(|&i| self.strata[i as usize]).collect())
    }

    /// Posterior means under the evaluator's prior, or `None` when the prior
    /// gives the outcome zero probability.
    pub fn posterior_means(&self, x: &TrialOutcome) -> Result<Option<[BigRational; 4]>> {
        self.design.check_outcome(x)?;
        Ok(means_of(&self.summaries[self.design.outcome_index(x)]))
    }

    fn eu_numerator(&self, r: usize, i: usize) -> BigInt {
        BigInt::from(self.net[i]) * BigInt::from(self.sums[i][r])
    }

    fn eu_denominator(&self, r: usize) -> BigInt {
        BigInt::from(self.net_den)
            * BigInt::from(self.scale[r])
            * BigInt::from(self.design.assignments())
    }

    /// `E[U(theta, A(X)) | theta]`, exact.
    pub fn expected_utility(&self, rule: Rule, theta: &StratumCounts) -> Result<BigRational> {
        self.design.check_strata(theta)?;
        let r = rule.position();
        Ok(BigRational::new(
            self.eu_numerator(r, theta.index()),
            self.eu_denominator(r),
        ))
    }

    /// Expected utility minus the best attainable utility at `theta`.
    pub fn normalized_utility(&self, rule: Rule, theta: &StratumCounts) -> Result<BigRational> {
        self.design.check_strata(theta)?;
        let r = rule.position();
        Ok(BigRational::new(
            self.mmn_numerator(r, theta.index()),
            self.eu_denominator(r),
        ))
    }

    fn mmn_numerator(&self, r: usize, i: usize) -> BigInt {
        let best = BigInt::from(self.net[i].abs())
            * BigInt::from(self.scale[r])
            * BigInt::from(self.design.assignments());
        self.eu_numerator(r, i) - best
    }

    /// Shortfall of `rule` against the ML rule at `x`, averaged over the MLE set.
    pub fn ml_shortfall(&self, rule: Rule, x: &TrialOutcome) -> Result<BigRational> {
        self.design.check_outcome(x)?;
        Ok(self.shortfall_at(rule.position(), self.design.outcome_index(x)))
    }

    fn shortfall_at(&self, r: usize, j: usize) -> BigRational {
        let ml = Rule::MaximumLikelihood.position();
        let mle = &self.summaries[j].mle;
        let diff = self.actions[r][j].value() - self.actions[ml][j].value();
        let net: i128 = mle.iter().map(|&i| self.net[i as usize]).sum();
        // U(t, a) = (2a - 1) u(t, action), so the difference is 2 (a - a_ml) u
        let num = BigInt::from(2 * *diff.numer() as i128) * BigInt::from(net);
        let den =
            BigInt::from(*diff.denom() as i128) * BigInt::from(mle.len() as i128 * self.net_den);
        BigRational::new(num, den)
    }

    fn minimum_over_strata<F: Fn(usize) -> BigInt>(&self, key: F) -> (BigInt, Vec<usize>) {
        let mut best: Option<BigInt> = None;
        let mut at = Vec::new();
        for i in 0..self.strata.len() {
            let v = key(i);
            match &best {
                Some(b) if v > *b => {}
                Some(b) if v == *b => at.push(i),
                _ => {
                    best = Some(v);
                    at = vec![i];
                }
            }
        }
        (best.expect("at least one stratum"), at)
    }

    pub fn v_maximin(&self, rule: Rule) -> RuleScore {
        let r = rule.position();
        let (num, at) = self.minimum_over_strata(|i| self.eu_numerator(r, i));
        RuleScore {
            rule,
            criterion: Criterion::Maximin,
            value: BigRational::new(num, self.eu_denominator(r)),
            witness: Witness::Stratum(self.strata[at[0]]),
        }
    }

    pub fn v_maximin_normalized(&self, rule: Rule) -> RuleScore {
        let r = rule.position();
        let (num, at) = self.minimum_over_strata(|i| self.mmn_numerator(r, i));
        RuleScore {
            rule,
            criterion: Criterion::MaximinNormalized,
            value: BigRational::new(num, self.eu_denominator(r)),
            witness: Witness::Stratum(self.strata[at[0]]),
        }
    }

    /// Prior expectation of the expected utility, under the evaluator's prior.
    pub fn v_bayes(&self, rule: Rule) -> RuleScore {
        let r = rule.position();
        let mut total = BigInt::zero();
        for i in 0..self.strata.len() {
            let w = self.prior.weight(i);
            if w != 0 {
                total += self.eu_numerator(r, i) * BigInt::from(w);
            }
        }
        let den = self.eu_denominator(r) * BigInt::from(self.prior.total());
        RuleScore {
            rule,
            criterion: Criterion::Bayes,
            value: BigRational::new(total, den),
            witness: Witness::None,
        }
    }

    pub fn v_ml(&self, rule: Rule) -> RuleScore {
        let r = rule.position();
        let mut best: Option<(BigRational, usize)> = None;
        for j in 0..self.outcomes.len() {
            let v = self.shortfall_at(r, j);
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, j));
            }
        }
        let (value, j) = best.expect("at least one outcome");
        RuleScore {
            rule,
            criterion: Criterion::MaximumLikelihood,
            value,
            witness: Witness::Outcome(self.outcomes[j]),
        }
    }

    pub fn score(&self, rule: Rule, criterion: Criterion) -> RuleScore {
        match criterion {
            Criterion::Maximin => self.v_maximin(rule),
            Criterion::MaximinNormalized => self.v_maximin_normalized(rule),
            Criterion::Bayes => self.v_bayes(rule),
            Criterion::MaximumLikelihood => self.v_ml(rule),
        }
    }

    /// Every witness attaining the reported extremum, in canonical order.
    pub fn all_witnesses(&self, rule: Rule, criterion: Criterion) -> Vec<Witness> {
        let r = rule.position();
        match criterion {
            Criterion::Maximin => {
                let (_, at) = self.minimum_over_strata(|i| self.eu_numerator(r, i));
                at.into_iter()
                    .map(|i| Witness::Stratum(self.strata[i]))
                    .collect()
            }
            Criterion::MaximinNormalized => {
                let (_, at) = self.minimum_over_strata(|i| self.mmn_numerator(r, i));
                at.into_iter()
                    .map(|i| Witness::Stratum(self.strata[i]))
                    .collect()
            }
            Criterion::Bayes => vec![Witness::None],
            Criterion::MaximumLikelihood => {
                let values: Vec<_> = (0..self.outcomes.len())
                    .map(|j| self.shortfall_at(r, j))
                    .collect();
                let min = values.iter().min().cloned().expect("at least one outcome");
                values
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v == min)
                    .map(|(j, _)| Witness::Outcome(self.outcomes[j]))
                    .collect()
            }
        }
    }
}

fn first_pass(
    design: &Design,
    strata: &[StratumCounts],
    prior: &PriorWeights,
) -> Result<Vec<OutcomeSummary>> {
    let len = design.outcome_count();
    let fresh = || FirstPass {
        buf: vec![0; len],
        summaries: vec![OutcomeSummary::default(); len],
        overflow: false,
    };
    let acc = strata
        .par_iter()
        .enumerate()
        .fold(fresh, |mut acc, (i, theta)| {
            acc.buf.iter_mut().for_each(|v| *v = 0);
            accumulate_outcome_numerators(theta, design, &mut acc.buf);
            let w = prior.weight(i) as u128;
            let counts = theta.as_array();
            for (s, &num) in acc.summaries.iter_mut().zip(&acc.buf) {
                if num > s.max_numerator {
                    s.max_numerator = num;
                    s.mle.clear();
                    s.mle.push(i as u32);
                } else if num == s.max_numerator && num > 0 {
                    s.mle.push(i as u32);
                }
                if w == 0 || num == 0 {
                    continue;
                }
                let Some(mass) = num.checked_mul(w) else {
                    acc.overflow = true;
                    continue;
                };
                match s.evidence.checked_add(mass) {
                    Some(v) => s.evidence = v,
                    None => acc.overflow = true,
                }
                for (k, c) in counts.iter().enumerate() {
                    match mass
                        .checked_mul(*c as u128)
                        .and_then(|v| s.weighted[k].checked_add(v))
                    {
                        Some(v) => s.weighted[k] = v,
                        None => acc.overflow = true,
                    }
                }
            }
            acc
        })
        .reduce(fresh, |mut a, b| {
            a.overflow |= b.overflow;
            for (x, y) in a.summaries.iter_mut().zip(b.summaries) {
                if !x.merge(y) {
                    a.overflow = true;
                }
            }
            a
        });
    if acc.overflow {
        return Err(Error::Overflow("posterior accumulation"));
    }
    let mut summaries = acc.summaries;
    for s in &mut summaries {
        s.mle.sort_unstable();
    }
    Ok(summaries)
}

fn second_pass(
    design: &Design,
    strata: &[StratumCounts],
    len: usize,
    coeffs: &[Vec<i128>],
) -> Vec<[i128; 5]> {
    strata
        .par_iter()
        .map_init(
            || vec![0 as BigCount; len],
            |buf, theta| {
                buf.iter_mut().for_each(|v| *v = 0);
                accumulate_outcome_numerators(theta, design, buf);
                let mut out = [0i128; 5];
                for (slot, c) in out.iter_mut().zip(coeffs) {
                    *slot = buf
                        .iter()
                        .zip(c)
                        .filter(|(&num, _)| num != 0)
                        .map(|(&num, &k)| num as i128 * k)
                        .sum();
                }
                out
            },
        )
        .collect()
}

fn means_of(s: &OutcomeSummary) -> Option<[BigRational; 4]> {
    if s.evidence == 0 {
        return None;
    }
    let z = BigInt::from(s.evidence);
    Some(
        s.weighted
            .map(|w| BigRational::new(BigInt::from(w), z.clone())),
    )
}

fn action_from_summary(
    rule: Rule,
    x: &TrialOutcome,
    s: &OutcomeSummary,
    design: &Design,
    spec: &UtilitySpec,
    strata: &[StratumCounts],
) -> Result<ActionProbability> {
    Ok(match rule {
        Rule::MaximumLikelihood => {
            let mle: Vec<StratumCounts> = s.mle.iter().map(|&i| strata[i as usize]).collect();
            ml_from_mle_set(&mle, spec)
        }
        // An outcome the prior deems impossible leaves both actions tied.
        Rule::Bayes => match means_of(s) {
            Some(means) => bayes_from_means(&means, spec),
            None => ActionProbability::HALF,
        },
        Rule::EmpiricalSuccess => rule_empirical_success(x, design)?,
        Rule::Frechet => rule_frechet(x, design, spec)?,
        Rule::CoinFlip => ActionProbability::HALF,
    })
}

/// `E[U(theta, A(X)) | theta]` for one rule and one stratum vector.
pub fn expected_utility(
    rule: Rule,
    theta: &StratumCounts,
    design: &Design,
    spec: &UtilitySpec,
    prior: &Prior,
) -> Result<BigRational> {
    Evaluator::new(design, spec, prior)?.expected_utility(rule, theta)
}

/// Worst-case expected utility. The Bayes rule uses the uniform prior.
pub fn v_maximin(rule: Rule, design: &Design, spec: &UtilitySpec) -> Result<RuleScore> {
    Ok(Evaluator::new(design, spec, &Prior::Uniform)?.v_maximin(rule))
}

pub fn v_maximin_normalized(rule: Rule, design: &Design, spec: &UtilitySpec) -> Result<RuleScore> {
    Ok(Evaluator::new(design, spec, &Prior::Uniform)?.v_maximin_normalized(rule))
}

pub fn v_bayes(
    rule: Rule,
    design: &Design,
    spec: &UtilitySpec,
    prior: &Prior,
) -> Result<RuleScore> {
    Ok(Evaluator::new(design, spec, prior)?.v_bayes(rule))
}

pub fn v_ml(rule: Rule, design: &Design, spec: &UtilitySpec) -> Result<RuleScore> {
    Ok(Evaluator::new(design, spec, &Prior::Uniform)?.v_ml(rule))
}

/// How the intervention-arm size is chosen for each sample size in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MPolicy {
    /// Even `n` only, `m = n / 2`.
    #[default]
    EvenHalf,
    /// `m = floor(n / 2)`.
    FloorHalf,
}

impl MPolicy {
    pub fn design_for(&self, n: u32) -> Result<Design> {
        match self {
            MPolicy::EvenHalf if n % 2 == 1 => Err(Error::config(
                "m_policy",
                format!("n = {n} is odd; even-half needs even n (use floor-half or --even-only)"),
            )),
            _ => Design::new(n, n / 2),
        }
    }
}

impl FromStr for MPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even-half" => Ok(MPolicy::EvenHalf),
            "floor-half" => Ok(MPolicy::FloorHalf),
            other => Err(Error::config(
                "m_policy",
                format!("`{other}` is not one of even-half, floor-half"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: u32,
    pub m: u32,
    pub rule: Rule,
    pub criterion: Criterion,
    pub value: BigRational,
}

/// Scores every `(n, criterion, rule)` combination, ordered by `n`, then
/// criterion, then rule, as listed.
pub fn sweep(
    ns: &[u32],
    policy: MPolicy,
    spec: &UtilitySpec,
    prior: &Prior,
    rules: &[Rule],
    criteria: &[Criterion],
) -> Result<Vec<SweepRow>> {
    let designs = ns
        .iter()
        .map(|&n| policy.design_for(n))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(designs.len() * rules.len() * criteria.len());
    for design in designs {
        let eval = Evaluator::new(&design, spec, prior)?;
        for &criterion in criteria {
            for &rule in rules {
                rows.push(SweepRow {
                    n: design.n(),
                    m: design.m(),
                    rule,
                    criterion,
                    value: eval.score(rule, criterion).value,
                });
            }
        }
    }
    Ok(rows)
}

/// Exact `Rational64` to `BigRational`.
pub fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::strata_of_size;
    use crate::rules::{utility, Choice};
    use num_traits::One;

    fn st(a: [u32; 4]) -> StratumCounts {
        StratumCounts::from_array(a)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn eval(n: u32, m: u32) -> Evaluator {
        Evaluator::new(
            &Design::new(n, m).unwrap(),
            &UtilitySpec::default(),
            &Prior::Uniform,
        )
        .unwrap()
    }

    #[test]
    fn coinflip_and_trivial_state_have_zero_expected_utility() {
        let e = eval(6, 3);
        for theta in e.strata() {
            assert!(e.expected_utility(Rule::CoinFlip, theta).unwrap().is_zero());
        }
        for rule in Rule::ALL {
            assert!(e
                .expected_utility(rule, &st([6, 0, 0, 0]))
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn empirical_success_at_all_efficacious_pair() {
        let e = eval(2, 1);
        assert_eq!(
            e.expected_utility(Rule::EmpiricalSuccess, &st([0, 2, 0, 0]))
                .unwrap(),
            q(1, 2)
        );
    }

    #[test]
    fn coinflip_regret_at_two() {
        let e = eval(2, 1);
        let s = e.v_maximin_normalized(Rule::CoinFlip);
        assert_eq!(s.value, q(-1, 1));
        assert_eq!(s.witness, Witness::Stratum(st([0, 0, 2, 0])));
        let s = e.v_maximin(Rule::CoinFlip);
        assert!(s.value.is_zero());
    }

    #[test]
    fn point_prior_bayes_criterion_reduces_to_one_state() {
        let design = Design::new(2, 1).unwrap();
        let prior = Prior::Point(st([0, 2, 0, 0]));
        let s = v_bayes(
            Rule::EmpiricalSuccess,
            &design,
            &UtilitySpec::default(),
            &prior,
        )
        .unwrap();
        assert_eq!(s.value, q(1, 2));
    }

    #[test]
    fn point_prior_on_trivial_state_makes_bayes_rule_indifferent() {
        let e = Evaluator::new(
            &Design::new(4, 2).unwrap(),
            &UtilitySpec::default(),
            &Prior::Point(st([4, 0, 0, 0])),
        )
        .unwrap();
        assert!(e
            .actions(Rule::Bayes)
            .iter()
            .all(|&a| a == ActionProbability::HALF));
    }

    #[test]
    fn ml_rule_has_zero_shortfall() {
        for (n, m) in [(2, 1), (5, 2), (8, 4)] {
            let e = eval(n, m);
            assert!(e.v_ml(Rule::MaximumLikelihood).value.is_zero());
            for rule in Rule::ALL {
                assert!(e.v_ml(rule).value <= BigRational::zero());
            }
        }
    }

    #[test]
    fn empirical_success_ml_criterion_at_two() {
        // x=(1,0,1,0): MLE (2,0,0,0) has zero utility; x=(0,1,1,0): MLE (0,0,2,0),
        // ES and ML both withhold; same by symmetry for the other two outcomes.
        let e = eval(2, 1);
        assert!(e.v_ml(Rule::EmpiricalSuccess).value.is_zero());
        // the Fréchet rule also withholds at (0,1,0,1)? p_I = p_C = 0: effect 0, threshold 0 -> 1/2
        assert!(e.v_ml(Rule::Frechet).value.is_zero());
    }

    #[test]
    fn scores_are_bounded_and_witnesses_reproduce() {
        for (n, m) in [(2, 1), (4, 2), (5, 1), (7, 3)] {
            let e = eval(n, m);
            for rule in Rule::ALL {
                let mm = e.v_maximin(rule);
                let mmn = e.v_maximin_normalized(rule);
                assert!(mm.value <= BigRational::zero());
                assert!(mmn.value <= mm.value);
                if let Witness::Stratum(t) = mm.witness {
                    assert_eq!(e.expected_utility(rule, &t).unwrap(), mm.value);
                }
                if let Witness::Stratum(t) = mmn.witness {
                    assert_eq!(e.normalized_utility(rule, &t).unwrap(), mmn.value);
                }
                let ml = e.v_ml(rule);
                if let Witness::Outcome(x) = ml.witness {
                    assert_eq!(e.ml_shortfall(rule, &x).unwrap(), ml.value);
                }
                let ties = e.all_witnesses(rule, Criterion::Maximin);
                assert_eq!(ties[0], mm.witness);
            }
        }
    }

    #[test]
    fn expected_utility_matches_direct_sum() {
        let design = Design::new(5, 2).unwrap();
        let spec = UtilitySpec::default();
        let e = Evaluator::new(&design, &spec, &Prior::Uniform).unwrap();
        let outcomes = enumerate_outcomes(&design);
        for theta in strata_of_size(5) {
            let dist = crate::likelihood::outcome_numerators(&theta, &design);
            let ua = big(utility(&theta, Choice::Action, &spec));
            for rule in Rule::ALL {
                let mut total = BigRational::zero();
                for (x, num) in outcomes.iter().zip(&dist) {
                    let a = e.action(rule, x).unwrap().to_rational();
                    let u = &a * &ua - (BigRational::one() - &a) * &ua;
                    total += u * BigRational::new(
                        BigInt::from(*num),
                        BigInt::from(design.assignments()),
                    );
                }
                assert_eq!(e.expected_utility(rule, &theta).unwrap(), total);
            }
        }
    }

    #[test]
    fn action_tables_match_single_outcome_rules() {
        let design = Design::new(6, 2).unwrap();
        let spec = UtilitySpec::default();
        let e = Evaluator::new(&design, &spec, &Prior::Uniform).unwrap();
        for x in enumerate_outcomes(&design) {
            for rule in Rule::ALL {
                assert_eq!(
                    e.action(rule, &x).unwrap(),
                    rule.apply(&x, &design, &spec, &Prior::Uniform).unwrap(),
                    "{rule} {x}"
                );
            }
            assert_eq!(
                e.mle_set(&x).unwrap(),
                crate::likelihood::mle_set(&x, &design).unwrap().strata
            );
        }
    }

    #[test]
    fn m_policy() {
        assert!(MPolicy::EvenHalf.design_for(3).is_err());
        assert_eq!(MPolicy::EvenHalf.design_for(4).unwrap().m(), 2);
        assert_eq!(MPolicy::FloorHalf.design_for(5).unwrap().m(), 2);
        let err = MPolicy::EvenHalf.design_for(7).unwrap_err();
        assert!(err.to_string().contains("m_policy"));
    }

    #[test]
    fn sweep_at_two() {
        let rows = sweep(
            &[2],
            MPolicy::EvenHalf,
            &UtilitySpec::default(),
            &Prior::Uniform,
            &Rule::ALL,
            &[Criterion::Maximin],
        )
        .unwrap();
        assert_eq!(rows.len(), 5);
        let coin = rows.iter().find(|r| r.rule == Rule::CoinFlip).unwrap();
        assert!(coin.value.is_zero());
    }

    #[test]
    fn criterion_names() {
        for c in Criterion::ALL {
            assert_eq!(c.name().parse::<Criterion>().unwrap(), c);
        }
        assert!("median".parse::<Criterion>().is_err());
    }
}
