//! All four criteria recomputed by plain loops over strata and outcomes,
//! with every rule reimplemented from its definition.

mod common;

use common::*;
use exact_decide::num_rational::Rational64;
use exact_decide::*;

#[derive(Clone, Copy)]
struct Weights {
    e: i64,
    e_den: i64,
    u: i64,
    u_den: i64,
    per_participant: bool,
}

impl Weights {
    fn spec(&self) -> UtilitySpec {
        UtilitySpec::new(
            Rational64::new(self.e, self.e_den),
            Rational64::new(self.u, self.u_den),
            self.per_participant,
        )
        .unwrap()
    }

    fn action_utility(&self, t: [u32; 4], n: u32) -> Q {
        let raw = q(self.e, self.e_den) * qi(t[1] as i64) - q(self.u, self.u_den) * qi(t[2] as i64);
        if self.per_participant {
            raw / qi(n as i64)
        } else {
            raw
        }
    }
}

fn prefer(action: &Q, inaction: &Q) -> Q {
    if action > inaction {
        qi(1)
    } else if action < inaction {
        qi(0)
    } else {
        q(1, 2)
    }
}

struct Naive {
    n: u32,
    m: u32,
    w: Weights,
    strata: Vec<[u32; 4]>,
    outcomes: Vec<[u32; 4]>,
    /// lik[i][j] = P(outcome j | stratum i)
    lik: Vec<Vec<Q>>,
}

impl Naive {
    fn new(n: u32, m: u32, w: Weights) -> Self {
        let strata = strata(n);
        let outcomes = outcomes(n, m);
        let lik = strata
            .iter()
            .map(|&t| {
                outcomes
                    .iter()
                    .map(|&x| brute_likelihood(t, x, n, m))
                    .collect()
            })
            .collect();
        Self {
            n,
            m,
            w,
            strata,
            outcomes,
            lik,
        }
    }

    fn u_action(&self, i: usize) -> Q {
        self.w.action_utility(self.strata[i], self.n)
    }

    fn mle(&self, j: usize) -> Vec<usize> {
        let best = (0..self.strata.len())
            .map(|i| self.lik[i][j].clone())
            .max()
            .unwrap();
        (0..self.strata.len())
            .filter(|&i| self.lik[i][j] == best)
            .collect()
    }

    fn rule(&self, rule: Rule, j: usize) -> Q {
        let x = self.outcomes[j];
        match rule {
            Rule::MaximumLikelihood => {
                let set = self.mle(j);
                let total = set
                    .iter()
                    .map(|&i| {
                        let a = self.u_action(i);
                        prefer(&a, &-a.clone())
                    })
                    .fold(qi(0), |s, v| s + v);
                total / qi(set.len() as i64)
            }
            Rule::Bayes => {
                let mut ev = qi(0);
                for i in 0..self.strata.len() {
                    ev += &self.lik[i][j] * self.u_action(i);
                }
                prefer(&ev, &-ev.clone())
            }
            Rule::EmpiricalSuccess => prefer(
                &q(x[0] as i64, self.m as i64),
                &q(x[2] as i64, (self.n - self.m) as i64),
            ),
            Rule::Frechet => {
                let p_i = q(x[0] as i64, self.m as i64);
                let p_c = q(x[2] as i64, (self.n - self.m) as i64);
                let lo = std::cmp::max(qi(0), &p_c - &p_i);
                let hi = std::cmp::min(p_c.clone(), qi(1) - &p_i);
                // per-participant utility of acting at harmed share p01
                let act = |p01: &Q| {
                    let p10 = &p_i - &p_c + p01;
                    q(self.w.e, self.w.e_den) * p10 - q(self.w.u, self.w.u_den) * p01
                };
                let ends = [act(&lo), act(&hi)];
                let min_action = ends.iter().min().unwrap().clone();
                let min_inaction = -ends.iter().max().unwrap().clone();
                prefer(&min_action, &min_inaction)
            }
            Rule::CoinFlip => q(1, 2),
        }
    }

    /// U(theta, a) = a u(action) + (1 - a) u(inaction)
    fn realized(&self, i: usize, a: &Q) -> Q {
        let ua = self.u_action(i);
        a * &ua - (qi(1) - a) * ua
    }

    fn eu(&self, actions: &[Q], i: usize) -> Q {
        (0..self.outcomes.len())
            .map(|j| &self.lik[i][j] * self.realized(i, &actions[j]))
            .fold(qi(0), |s, v| s + v)
    }

    fn criteria(&self, rule: Rule) -> [Q; 4] {
        let actions: Vec<Q> = (0..self.outcomes.len())
            .map(|j| self.rule(rule, j))
            .collect();
        let ml: Vec<Q> = (0..self.outcomes.len())
            .map(|j| self.rule(Rule::MaximumLikelihood, j))
            .collect();
        let eus: Vec<Q> = (0..self.strata.len())
            .map(|i| self.eu(&actions, i))
            .collect();
        let mm = eus.iter().min().unwrap().clone();
        let mmn = (0..self.strata.len())
            .map(|i| {
                let ua = self.u_action(i);
                let best = std::cmp::max(ua.clone(), -ua);
                &eus[i] - best
            })
            .min()
            .unwrap();
        let vb = eus.iter().fold(qi(0), |s, v| s + v) / qi(self.strata.len() as i64);
        let vml = (0..self.outcomes.len())
            .map(|j| {
                let set = self.mle(j);
                let sum = set
                    .iter()
                    .map(|&i| self.realized(i, &actions[j]) - self.realized(i, &ml[j]))
                    .fold(qi(0), |s, v| s + v);
                sum / qi(set.len() as i64)
            })
            .min()
            .unwrap();
        [mm, mmn, vb, vml]
    }
}

const WEIGHTS: [Weights; 3] = [
    Weights {
        e: 1,
        e_den: 2,
        u: 1,
        u_den: 1,
        per_participant: true,
    },
    Weights {
        e: 1,
        e_den: 1,
        u: 1,
        u_den: 1,
        per_participant: true,
    },
    Weights {
        e: 2,
        e_den: 3,
        u: 3,
        u_den: 2,
        per_participant: false,
    },
];

#[test]
fn every_criterion_matches_naive_loops_up_to_6() {
    for w in WEIGHTS {
        for n in 2..=6 {
            for m in 1..n {
                let naive = Naive::new(n, m, w);
                let design = Design::new(n, m).unwrap();
                let eval = Evaluator::new(&design, &w.spec(), &Prior::Uniform).unwrap();
                for rule in Rule::ALL {
                    let want = naive.criteria(rule);
                    for (k, criterion) in Criterion::ALL.iter().enumerate() {
                        let got = eval.score(rule, *criterion).value;
                        assert_eq!(
                            got, want[k],
                            "n={n} m={m} rule={rule} criterion={criterion}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn rules_match_naive_definitions_up_to_6() {
    for w in WEIGHTS {
        let spec = w.spec();
        for n in 2..=6 {
            for m in 1..n {
                let naive = Naive::new(n, m, w);
                let design = Design::new(n, m).unwrap();
                for (j, x) in naive.outcomes.iter().enumerate() {
                    let x = TrialOutcome::from_array(*x);
                    for rule in Rule::ALL {
                        let got = rule.apply(&x, &design, &spec, &Prior::Uniform).unwrap();
                        assert_eq!(
                            got.to_rational(),
                            naive.rule(rule, j),
                            "n={n} m={m} x={x} {rule}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn maximin_witnesses_reproduce_their_scores() {
    for n in [4, 6, 10] {
        let design = Design::new(n, n / 2).unwrap();
        let eval = Evaluator::new(&design, &UtilitySpec::default(), &Prior::Uniform).unwrap();
        for rule in Rule::ALL {
            let s = eval.v_maximin(rule);
            let Witness::Stratum(theta) = s.witness else {
                panic!("stratum witness expected")
            };
            assert_eq!(eval.expected_utility(rule, &theta).unwrap(), s.value);
            let s = eval.v_maximin_normalized(rule);
            let Witness::Stratum(theta) = s.witness else {
                panic!("stratum witness expected")
            };
            assert_eq!(eval.normalized_utility(rule, &theta).unwrap(), s.value);
            let s = eval.v_ml(rule);
            let Witness::Outcome(x) = s.witness else {
                panic!("outcome witness expected")
            };
            assert_eq!(eval.ml_shortfall(rule, &x).unwrap(), s.value);
            assert_eq!(
                eval.all_witnesses(rule, Criterion::Maximin)[0],
                eval.v_maximin(rule).witness
            );
        }
    }
}

#[test]
fn n2_hand_values() {
    let design = Design::new(2, 1).unwrap();
    let spec = UtilitySpec::default();
    let t = |a| StratumCounts::from_array(a);

    // ES acts for sure at (0,2,0,0): utility w_e * 2 / 2
    let eu = expected_utility(
        Rule::EmpiricalSuccess,
        &t([0, 2, 0, 0]),
        &design,
        &spec,
        &Prior::Uniform,
    )
    .unwrap();
    assert_eq!(eu, q(1, 2));
    for rule in Rule::ALL {
        let eu = expected_utility(rule, &t([2, 0, 0, 0]), &design, &spec, &Prior::Uniform).unwrap();
        assert_eq!(eu, qi(0));
    }

    // coin flip loses |u| / 1 at the worst stratum (0,0,2,0)
    let s = v_maximin_normalized(Rule::CoinFlip, &design, &spec).unwrap();
    assert_eq!(s.value, qi(-1));
    assert_eq!(s.witness, Witness::Stratum(t([0, 0, 2, 0])));

    // point prior on everyone efficacious reduces V_B to one expected utility
    let point = Prior::Point(t([0, 2, 0, 0]));
    assert_eq!(
        v_bayes(Rule::EmpiricalSuccess, &design, &spec, &point)
            .unwrap()
            .value,
        q(1, 2)
    );

    // V_ML of ES over the four outcomes: ES matches ML at (1,0,0,1) and
    // (0,1,1,0); at the other two the MLE has zero utility either way
    let naive = Naive::new(2, 1, WEIGHTS[0]);
    let want = naive.criteria(Rule::EmpiricalSuccess)[3].clone();
    assert_eq!(want, qi(0));
    assert_eq!(
        v_ml(Rule::EmpiricalSuccess, &design, &spec).unwrap().value,
        want
    );
}

#[test]
fn sepsis_maximin_prefers_ml_to_es() {
    let design = Design::new(28, 14).unwrap();
    let eval = Evaluator::new(&design, &UtilitySpec::default(), &Prior::Uniform).unwrap();
    assert!(
        eval.v_maximin(Rule::MaximumLikelihood).value
            > eval.v_maximin(Rule::EmpiricalSuccess).value
    );
}
