//! The exact randomization likelihood of stratum counts given observed cell
//! counts, its maximizers, Bayesian posteriors over the strata, and Fisher's
//! exact test under the sharp null.
//!
//! Randomization draws `m` of the `n` participants into intervention, each
//! subset equally likely. Given the stratum counts `theta`, the number drawn
//! from each stratum is multivariate hypergeometric, and an outcome `x` is
//! produced by every split with
//!
//! ```text
//! i11 + i10 = x_I1
//! i11 + i01 = theta11 + theta01 - x_C1
//! ```
//!
//! Summing over `i = i11 = 0..=theta11` gives the closed form used by
//! [`likelihood_numerator`]. The `i = 0` term is required.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    binom, binom_in_range, enumerate_outcomes, enumerate_strata, BigCount, Design, StratumCounts,
    TrialOutcome,
};
use crate::error::{Error, Result};
use crate::probability::ExactProbability;

/// How many members of each stratum were randomized into intervention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AssignmentSplit {
    pub live_regardless: u32,
    pub efficacious: u32,
    pub harmed: u32,
    pub die_regardless: u32,
}

impl AssignmentSplit {
    /// The outcome this split produces, or `None` if it is not a valid split
    /// of `theta` under `design`.
    pub fn outcome(&self, theta: &StratumCounts, design: &Design) -> Option<TrialOutcome> {
        let fits = self.live_regardless <= theta.live_regardless
            && self.efficacious <= theta.efficacious
            && self.harmed <= theta.harmed
            && self.die_regardless <= theta.die_regardless;
        let drawn = self.live_regardless as u64
            + self.efficacious as u64
            + self.harmed as u64
            + self.die_regardless as u64;
        if !fits || drawn != design.m() as u64 || theta.total() != design.n() as u64 {
            return None;
        }
        let treated_alive = self.live_regardless + self.efficacious;
        let control_alive =
            (theta.live_regardless - self.live_regardless) + (theta.harmed - self.harmed);
        Some(TrialOutcome::new(
            treated_alive,
            design.m() - treated_alive,
            control_alive,
            design.control_size() - control_alive,
        ))
    }

    /// Number of assignments realizing this split.
    pub fn multiplicity(&self, theta: &StratumCounts) -> BigCount {
        binom(theta.live_regardless, self.live_regardless as i64)
            * binom(theta.efficacious, self.efficacious as i64)
            * binom(theta.harmed, self.harmed as i64)
            * binom(theta.die_regardless, self.die_regardless as i64)
    }
}

/// Number of assignments (out of `C(n, m)`) that produce `x` under `theta`.
///
/// Preconditions are not checked; out-of-support arguments contribute zero.
pub fn likelihood_numerator(theta: &StratumCounts, x: &TrialOutcome, design: &Design) -> BigCount {
    summed_from(theta, x, design, 0)
}

/// The closed-form sum started at an arbitrary index. Only used to inject a
/// known fault into the verification suites.
#[doc(hidden)]
pub fn likelihood_numerator_from(
    theta: &StratumCounts,
    x: &TrialOutcome,
    design: &Design,
    start: u32,
) -> BigCount {
    summed_from(theta, x, design, start)
}

fn summed_from(theta: &StratumCounts, x: &TrialOutcome, design: &Design, start: u32) -> BigCount {
    let t11 = theta.live_regardless as i64;
    let t01 = theta.harmed as i64;
    let xi1 = x.treated_alive as i64;
    let xc1 = x.control_alive as i64;
    let m = design.m() as i64;
    let mut total: BigCount = 0;
    for i in start as i64..=t11 {
        let a = binom(theta.live_regardless, i);
        let b = binom(theta.efficacious, xi1 - i);
        if b == 0 {
            continue;
        }
        let c = binom(theta.harmed, t11 + t01 - xc1 - i);
        if c == 0 {
            continue;
        }
        let d = binom(theta.die_regardless, m + xc1 + i - t11 - t01 - xi1);
        total += a * b * c * d;
    }
    total
}

/// `P(X = x | theta)` as an exact fraction over `C(n, m)`.
pub fn likelihood(
    theta: &StratumCounts,
    x: &TrialOutcome,
    design: &Design,
) -> Result<ExactProbability> {
    design.check_strata(theta)?;
    design.check_outcome(x)?;
    Ok(ExactProbability::new(
        likelihood_numerator(theta, x, design),
        design.assignments(),
    ))
}

/// Adds, for every outcome, the number of assignments producing it under
/// `theta`, indexed by [`Design::outcome_index`]. Enumerates assignment
/// splits directly rather than evaluating the closed form per outcome.
pub(crate) fn accumulate_outcome_numerators(
    theta: &StratumCounts,
    design: &Design,
    out: &mut [BigCount],
) {
    let m = design.m();
    let stride = design.control_size() as usize + 1;
    let t11 = theta.live_regardless;
    let t10 = theta.efficacious;
    let t01 = theta.harmed;
    let t00 = theta.die_regardless;
    for i11 in 0..=t11.min(m) {
        let w11 = binom_in_range(t11, i11);
        for i01 in 0..=t01.min(m - i11) {
            let base = w11 * binom_in_range(t01, i01);
            let control_alive = (t11 - i11 + t01 - i01) as usize;
            let rest = m - i11 - i01;
            let lo = rest.saturating_sub(t00);
            let hi = t10.min(rest);
            for i10 in lo..=hi {
                let count = base * binom_in_range(t10, i10) * binom_in_range(t00, rest - i10);
                out[(i11 + i10) as usize * stride + control_alive] += count;
            }
        }
    }
}

/// Outcome numerators for `theta`, indexed like [`enumerate_outcomes`].
pub fn outcome_numerators(theta: &StratumCounts, design: &Design) -> Vec<BigCount> {
    let mut out = vec![0; design.outcome_count()];
    accumulate_outcome_numerators(theta, design, &mut out);
    out
}

/// The full sampling distribution of the outcome under `theta`, in
/// [`enumerate_outcomes`] order (zero-probability outcomes included).
pub fn outcome_distribution(
    theta: &StratumCounts,
    design: &Design,
) -> Result<Vec<(TrialOutcome, ExactProbability)>> {
    design.check_strata(theta)?;
    let den = design.assignments();
    Ok(enumerate_outcomes(design)
        .into_iter()
        .zip(outcome_numerators(theta, design))
        .map(|(x, num)| (x, ExactProbability::new(num, den)))
        .collect())
}

/// The set of stratum counts maximizing the likelihood, in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MleSet {
    pub strata: Vec<StratumCounts>,
    pub likelihood: ExactProbability,
}

impl MleSet {
    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn contains(&self, theta: &StratumCounts) -> bool {
        self.strata.contains(theta)
    }
}

/// Prior over stratum counts for one design.
#[derive(Debug, Clone, PartialEq)]
pub enum Prior {
    /// Equal mass on each of the `C(n + 3, 3)` vectors.
    Uniform,
    /// All mass on one vector.
    Point(StratumCounts),
    /// Exact masses; non-negative and summing to one. Unlisted vectors get zero.
    Masses(Vec<(StratumCounts, BigRational)>),
    /// Relative non-negative integer weights, normalized internally.
    Weights(Vec<(StratumCounts, u64)>),
}

/// A prior resolved to integer weights over the canonical stratum order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorWeights {
    weights: Vec<u64>,
    total: u128,
}

impl PriorWeights {
    pub fn weight(&self, index: usize) -> u64 {
        self.weights[index]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    pub fn mass(&self, index: usize) -> BigRational {
        BigRational::new(BigInt::from(self.weights[index]), BigInt::from(self.total))
    }
}

impl Prior {
    pub fn resolve(&self, design: &Design) -> Result<PriorWeights> {
        let size = design.strata_count();
        let weights = match self {
            Prior::Uniform => vec![1u64; size],
            Prior::Point(theta) => {
                check_prior_member(theta, design)?;
                let mut w = vec![0u64; size];
                w[theta.index()] = 1;
                w
            }
            Prior::Weights(list) => {
                let mut w = vec![0u64; size];
                let mut seen = HashSet::new();
                for (theta, weight) in list {
                    check_prior_member(theta, design)?;
                    if !seen.insert(*theta) {
                        return Err(Error::InvalidPrior(format!("{theta} listed twice")));
                    }
                    w[theta.index()] = *weight;
                }
                w
            }
            Prior::Masses(list) => {
                let mut sum = BigRational::zero();
                let mut lcm = BigInt::one();
                let mut seen = HashSet::new();
                for (theta, mass) in list {
                    check_prior_member(theta, design)?;
                    if !seen.insert(*theta) {
                        return Err(Error::InvalidPrior(format!("{theta} listed twice")));
                    }
                    if mass < &BigRational::zero() {
                        return Err(Error::InvalidPrior(format!(
                            "negative mass {mass} at {theta}"
                        )));
                    }
                    sum += mass;
                    lcm = lcm.lcm(mass.denom());
                }
                if !sum.is_one() {
                    return Err(Error::InvalidPrior(format!("masses sum to {sum}, not 1")));
                }
                let mut w = vec![0u64; size];
                for (theta, mass) in list {
                    let scaled = mass.numer() * (&lcm / mass.denom());
                    w[theta.index()] = u64::try_from(scaled)
                        .map_err(|_| Error::Overflow("prior weight scaling"))?;
                }
                w
            }
        };
        let total: u128 = weights.iter().map(|&w| w as u128).sum();
        if total == 0 {
            return Err(Error::InvalidPrior("all prior weights are zero".into()));
        }
        Ok(PriorWeights { weights, total })
    }
}

fn check_prior_member(theta: &StratumCounts, design: &Design) -> Result<()> {
    design
        .check_strata(theta)
        .map_err(|e| Error::InvalidPrior(e.to_string()))
}

/// Posterior over stratum counts given one observed outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSummary {
    /// Strata with positive posterior mass, in canonical order.
    pub weights: Vec<(StratumCounts, BigRational)>,
    /// Posterior expected count in each stratum, ordered like [`StratumCounts::as_array`].
    pub means: [BigRational; 4],
}

impl PosteriorSummary {
    pub fn mass(&self, theta: &StratumCounts) -> BigRational {
        self.weights
            .iter()
            .find(|(t, _)| t == theta)
            .map(|(_, w)| w.clone())
            .unwrap_or_else(BigRational::zero)
    }
}

/// Likelihood numerators of every stratum vector for one fixed outcome.
///
/// Built once per `(design, x)` and shared by the MLE, support and posterior
/// computations.
#[derive(Debug, Clone)]
pub struct LikelihoodTable {
    design: Design,
    outcome: TrialOutcome,
    strata: Vec<StratumCounts>,
    numerators: Vec<BigCount>,
}

impl LikelihoodTable {
    pub fn new(x: &TrialOutcome, design: &Design) -> Result<Self> {
        design.check_outcome(x)?;
        let strata = enumerate_strata(design);
        let numerators = strata
            .iter()
            .map(|t| likelihood_numerator(t, x, design))
            .collect();
        Ok(Self {
            design: *design,
            outcome: *x,
            strata,
            numerators,
        })
    }

    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn outcome(&self) -> &TrialOutcome {
        &self.outcome
    }

    pub fn strata(&self) -> &[StratumCounts] {
        &self.strata
    }

    pub fn numerators(&self) -> &[BigCount] {
        &self.numerators
    }

    pub fn likelihood_at(&self, index: usize) -> ExactProbability {
        ExactProbability::new(self.numerators[index], self.design.assignments())
    }

    pub fn mle_set(&self) -> MleSet {
        let best = self.numerators.iter().copied().max().unwrap_or(0);
        let strata = self
            .strata
            .iter()
            .zip(&self.numerators)
            .filter(|(_, &num)| num == best)
            .map(|(t, _)| *t)
            .collect();
        MleSet {
            strata,
            likelihood: ExactProbability::new(best, self.design.assignments()),
        }
    }

    pub fn positive_support_count(&self) -> usize {
        self.numerators.iter().filter(|&&num| num > 0).count()
    }

    /// The `k` most likely vectors, ties broken by canonical order.
    pub fn top(&self, k: usize) -> Vec<(StratumCounts, ExactProbability)> {
        let mut idx: Vec<usize> = (0..self.strata.len()).collect();
        idx.sort_by(|&a, &b| self.numerators[b].cmp(&self.numerators[a]).then(a.cmp(&b)));
        idx.into_iter()
            .take(k)
            .map(|i| (self.strata[i], self.likelihood_at(i)))
            .collect()
    }

    pub fn posterior(&self, prior: &Prior) -> Result<PosteriorSummary> {
        let weights = prior.resolve(&self.design)?;
        self.posterior_with(&weights)
    }

    pub fn posterior_with(&self, prior: &PriorWeights) -> Result<PosteriorSummary> {
        let mut joint = Vec::new();
        let mut evidence = BigUint::zero();
        let mut sums = [
            BigUint::zero(),
            BigUint::zero(),
            BigUint::zero(),
            BigUint::zero(),
        ];
        for (i, (theta, &num)) in self.strata.iter().zip(&self.numerators).enumerate() {
            let w = prior.weight(i);
            if w == 0 || num == 0 {
                continue;
            }
            let mass = BigUint::from(num) * BigUint::from(w);
            for (s, c) in sums.iter_mut().zip(theta.as_array()) {
                *s += &mass * BigUint::from(c);
            }
            evidence += &mass;
            joint.push((*theta, mass));
        }
        if evidence.is_zero() {
            return Err(Error::DegeneratePosterior);
        }
        let z = BigInt::from(evidence);
        let weights = joint
            .into_iter()
            .map(|(t, mass)| (t, BigRational::new(BigInt::from(mass), z.clone())))
            .collect();
        let means = sums.map(|s| BigRational::new(BigInt::from(s), z.clone()));
        Ok(PosteriorSummary { weights, means })
    }
}

/// All stratum vectors attaining the maximal likelihood for `x`.
pub fn mle_set(x: &TrialOutcome, design: &Design) -> Result<MleSet> {
    Ok(LikelihoodTable::new(x, design)?.mle_set())
}

/// Number of stratum vectors under which `x` has positive probability.
pub fn positive_support_count(x: &TrialOutcome, design: &Design) -> Result<usize> {
    Ok(LikelihoodTable::new(x, design)?.positive_support_count())
}

/// Posterior over stratum vectors, proportional to `prior(theta) * L(theta | x)`.
pub fn posterior(x: &TrialOutcome, design: &Design, prior: &Prior) -> Result<PosteriorSummary> {
    LikelihoodTable::new(x, design)?.posterior(prior)
}

/// Alternative hypothesis for [`fisher_exact_p_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FisherAlternative {
    /// More survivors in intervention than expected under the sharp null.
    #[default]
    Greater,
    /// Sum of all tables no more probable than the observed one.
    TwoSided,
}

/// One-sided Fisher exact p-value in the direction of benefit.
pub fn fisher_exact_p(x: &TrialOutcome, design: &Design) -> Result<ExactProbability> {
    fisher_exact_p_with(x, design, FisherAlternative::Greater)
}

/// Fisher exact p-value. Under the sharp null every participant's outcome is
/// fixed, so the number of survivors drawn into intervention is
/// hypergeometric with `K = x_I1 + x_C1` survivors among `n`, `m` draws.
pub fn fisher_exact_p_with(
    x: &TrialOutcome,
    design: &Design,
    alternative: FisherAlternative,
) -> Result<ExactProbability> {
    design.check_outcome(x)?;
    let n = design.n();
    let m = design.m() as i64;
    let alive = x.total_alive();
    let table = |k: i64| binom(alive, k) * binom(n - alive, m - k);
    let observed = x.treated_alive as i64;
    let num: BigCount = match alternative {
        FisherAlternative::Greater => (observed..=m).map(table).sum(),
        FisherAlternative::TwoSided => {
            let p_obs = table(observed);
            (0..=m).map(table).filter(|&p| p <= p_obs).sum()
        }
    };
    Ok(ExactProbability::new(num, design.assignments()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probability::format_decimal;

    fn d(n: u32, m: u32) -> Design {
        Design::new(n, m).unwrap()
    }

    fn st(a: [u32; 4]) -> StratumCounts {
        StratumCounts::from_array(a)
    }

    fn ox(a: [u32; 4]) -> TrialOutcome {
        TrialOutcome::from_array(a)
    }

    #[test]
    fn two_person_likelihoods() {
        let design = d(2, 1);
        let x = ox([1, 0, 1, 0]);
        assert_eq!(
            likelihood(&st([2, 0, 0, 0]), &x, &design).unwrap(),
            ExactProbability::new(2, 2)
        );
        assert_eq!(
            likelihood(&st([1, 0, 1, 0]), &x, &design).unwrap(),
            ExactProbability::new(1, 2)
        );
    }

    #[test]
    fn sepsis_likelihood_values() {
        let design = d(28, 14);
        let x = ox([12, 2, 5, 9]);
        let lik = |t: [u32; 4]| likelihood(&st(t), &x, &design).unwrap();
        // C(21,12) C(7,2) / C(28,14)
        assert_eq!(
            lik([0, 21, 7, 0]),
            ExactProbability::new(6_172_530, 40_116_600)
        );
        assert_eq!(
            format_decimal(&lik([0, 21, 7, 0]).to_rational(), 3),
            "0.154"
        );
        assert_eq!(
            format_decimal(&lik([6, 18, 4, 0]).to_rational(), 3),
            "0.145"
        );
        // balanced monotone explanation: 10 live regardless, 14 efficacious, 4 die regardless
        assert_eq!(
            format_decimal(&lik([10, 14, 0, 4]).to_rational(), 3),
            "0.129"
        );
        // with nobody harmed, five control survivors need at least five live-regardless
        assert!(lik([4, 14, 0, 10]).is_zero());
    }

    #[test]
    fn dropping_the_zero_term_changes_the_answer() {
        let design = d(2, 1);
        let x = ox([1, 0, 1, 0]);
        let theta = st([2, 0, 0, 0]);
        assert_eq!(likelihood_numerator(&theta, &x, &design), 2);
        assert_eq!(likelihood_numerator_from(&theta, &x, &design, 1), 2);
        // live-regardless person in control, efficacious person treated: i = 0
        let theta = st([1, 1, 0, 0]);
        assert_eq!(likelihood_numerator(&theta, &x, &design), 1);
        assert_eq!(likelihood_numerator_from(&theta, &x, &design, 1), 0);
    }

    #[test]
    fn precondition_violations() {
        let design = d(4, 2);
        assert!(likelihood(&st([1, 1, 1, 0]), &ox([1, 1, 1, 1]), &design).is_err());
        assert!(likelihood(&st([1, 1, 1, 1]), &ox([1, 0, 1, 1]), &design).is_err());
    }

    #[test]
    fn point_mass_distributions() {
        let design = d(5, 2);
        let dist = outcome_distribution(&st([5, 0, 0, 0]), &design).unwrap();
        for (x, p) in &dist {
            if *x == ox([2, 0, 3, 0]) {
                assert_eq!(p.numerator(), p.denominator());
            } else {
                assert!(p.is_zero());
            }
        }
        let design = d(2, 1);
        let dist = outcome_distribution(&st([0, 2, 0, 0]), &design).unwrap();
        let one: Vec<_> = dist.iter().filter(|(_, p)| !p.is_zero()).collect();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].0, ox([1, 0, 0, 1]));
        let dist = outcome_distribution(&st([1, 0, 1, 0]), &design).unwrap();
        let half = ExactProbability::new(1, 2);
        for (x, p) in dist {
            // the harmed person dies if treated and lives in control
            if x == ox([1, 0, 1, 0]) || x == ox([0, 1, 1, 0]) {
                assert_eq!(p, half);
            } else {
                assert!(p.is_zero());
            }
        }
    }

    #[test]
    fn split_enumeration_matches_closed_form() {
        for n in 2..=9 {
            for m in 1..n {
                let design = d(n, m);
                let outcomes = enumerate_outcomes(&design);
                for theta in enumerate_strata(&design) {
                    let nums = outcome_numerators(&theta, &design);
                    for (x, num) in outcomes.iter().zip(nums) {
                        assert_eq!(num, likelihood_numerator(&theta, x, &design), "{theta} {x}");
                    }
                }
            }
        }
    }

    #[test]
    fn assignment_split_maps_to_outcome() {
        let design = d(28, 14);
        let theta = st([0, 21, 7, 0]);
        let split = AssignmentSplit {
            live_regardless: 0,
            efficacious: 12,
            harmed: 2,
            die_regardless: 0,
        };
        assert_eq!(split.outcome(&theta, &design), Some(ox([12, 2, 5, 9])));
        assert_eq!(split.multiplicity(&theta), binom(21, 12) * binom(7, 2));
        let too_many = AssignmentSplit { harmed: 8, ..split };
        assert_eq!(too_many.outcome(&theta, &design), None);
    }

    #[test]
    fn two_person_mle_sets() {
        let design = d(2, 1);
        let cases = [
            ([1, 0, 1, 0], [2, 0, 0, 0]),
            ([1, 0, 0, 1], [0, 2, 0, 0]),
            ([0, 1, 1, 0], [0, 0, 2, 0]),
            ([0, 1, 0, 1], [0, 0, 0, 2]),
        ];
        for (x, want) in cases {
            let set = mle_set(&ox(x), &design).unwrap();
            assert_eq!(set.strata, vec![st(want)], "x={x:?}");
            assert_eq!(set.likelihood.numerator(), set.likelihood.denominator());
        }
    }

    #[test]
    fn support_counts() {
        assert_eq!(
            positive_support_count(&ox([1, 0, 1, 0]), &d(2, 1)).unwrap(),
            4
        );
        assert_eq!(
            positive_support_count(&ox([12, 2, 5, 9]), &d(28, 14)).unwrap(),
            1260
        );
    }

    #[test]
    fn top_k_is_sorted_with_stable_ties() {
        let table = LikelihoodTable::new(&ox([1, 0, 1, 0]), &d(2, 1)).unwrap();
        let top = table.top(3);
        assert_eq!(top[0].0, st([2, 0, 0, 0]));
        // the three half-likelihood vectors, in canonical order
        assert_eq!(top[1].0, st([0, 1, 1, 0]));
        assert_eq!(top[2].0, st([1, 0, 1, 0]));
    }

    #[test]
    fn posterior_point_prior() {
        let design = d(6, 3);
        let theta = st([6, 0, 0, 0]);
        let post = posterior(&ox([3, 0, 3, 0]), &design, &Prior::Point(theta)).unwrap();
        assert_eq!(post.weights.len(), 1);
        assert!(post.mass(&theta).is_one());
        assert_eq!(post.means[0], BigRational::from_integer(6.into()));
    }

    #[test]
    fn posterior_with_incompatible_point_prior_fails() {
        let design = d(2, 1);
        let err =
            posterior(&ox([1, 0, 1, 0]), &design, &Prior::Point(st([0, 0, 0, 2]))).unwrap_err();
        assert!(matches!(err, Error::DegeneratePosterior));
    }

    #[test]
    fn prior_validation() {
        let design = d(2, 1);
        let half = BigRational::new(1.into(), 2.into());
        let bad_sum = Prior::Masses(vec![(st([2, 0, 0, 0]), half.clone())]);
        assert!(bad_sum.resolve(&design).is_err());
        let ok = Prior::Masses(vec![
            (st([2, 0, 0, 0]), half.clone()),
            (st([0, 2, 0, 0]), half),
        ]);
        assert_eq!(ok.resolve(&design).unwrap().total(), 2);
        let wrong_n = Prior::Point(st([1, 0, 0, 0]));
        assert!(matches!(
            wrong_n.resolve(&design),
            Err(Error::InvalidPrior(_))
        ));
        let zero = Prior::Weights(vec![(st([2, 0, 0, 0]), 0)]);
        assert!(zero.resolve(&design).is_err());
    }

    #[test]
    fn fisher_examples() {
        // sum over k = 12..=14 of C(17, k) C(11, 14 - k)
        let p = fisher_exact_p(&ox([12, 2, 5, 9]), &d(28, 14)).unwrap();
        assert_eq!(p, ExactProbability::new(367_200, 40_116_600));
        assert_eq!(format_decimal(&p.to_rational(), 3), "0.009");
        let p = fisher_exact_p(&ox([1, 0, 0, 1]), &d(2, 1)).unwrap();
        assert_eq!(p.to_rational(), BigRational::new(1.into(), 2.into()));
        let p = fisher_exact_p(&ox([3, 0, 4, 0]), &d(7, 3)).unwrap();
        assert_eq!(p.numerator(), p.denominator());
    }

    #[test]
    fn fisher_two_sided_is_at_least_one_sided_when_effect_is_positive() {
        let design = d(28, 14);
        let x = ox([12, 2, 5, 9]);
        let one = fisher_exact_p(&x, &design).unwrap();
        let two = fisher_exact_p_with(&x, &design, FisherAlternative::TwoSided).unwrap();
        assert_eq!(two.numerator(), 734_400);
        assert!(two >= one);
        assert!(two.numerator() <= two.denominator());
    }
}
