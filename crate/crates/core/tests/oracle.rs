//! Likelihood engine against explicit assignment enumeration.

mod common;

use common::*;
use exact_decide::num_bigint::BigInt;
use exact_decide::*;

fn st(a: [u32; 4]) -> StratumCounts {
    StratumCounts::from_array(a)
}

fn out(a: [u32; 4]) -> TrialOutcome {
    TrialOutcome::from_array(a)
}

fn as_q(p: ExactProbability) -> Q {
    Q::new(BigInt::from(p.numerator()), BigInt::from(p.denominator()))
}

#[test]
fn closed_form_matches_subset_enumeration_up_to_8() {
    for n in 2..=8 {
        for m in 1..n {
            let design = Design::new(n, m).unwrap();
            for theta in strata(n) {
                for (x, count) in brute_counts(theta, n, m) {
                    let num = likelihood_numerator(&st(theta), &out(x), &design);
                    assert_eq!(num, count, "n={n} m={m} theta={theta:?} x={x:?}");
                }
            }
        }
    }
}

#[test]
fn outcome_distribution_matches_subset_enumeration() {
    for n in 2..=7 {
        let m = n / 2;
        let design = Design::new(n, m).unwrap();
        for theta in strata(n) {
            let mut dist = outcome_distribution(&st(theta), &design).unwrap();
            dist.retain(|(_, p)| !p.is_zero());
            let brute: Vec<_> = brute_counts(theta, n, m)
                .into_iter()
                .filter(|c| c.1 > 0)
                .collect();
            assert_eq!(dist.len(), brute.len(), "theta={theta:?}");
            for ((x, p), (bx, count)) in dist.iter().zip(&brute) {
                assert_eq!(x.as_array(), *bx);
                assert_eq!(p.numerator(), *count);
            }
        }
    }
}

#[test]
fn binomial_against_pascal() {
    let t = pascal(61);
    assert_eq!(t[28][14], 40_116_600);
    assert_eq!(binom(28, 14), t[28][14]);
    for n in 0..=60u32 {
        for k in -2..=(n as i64 + 2) {
            let expected = if k < 0 || k > n as i64 {
                0
            } else {
                t[n as usize][k as usize]
            };
            assert_eq!(binom(n, k), expected, "C({n},{k})");
        }
    }
}

#[test]
fn strata_and_outcome_enumeration_match_loops() {
    for n in 1..=12u32 {
        let lib: Vec<[u32; 4]> = strata_of_size(n).iter().map(|s| s.as_array()).collect();
        assert_eq!(lib, strata(n));
    }
    for n in 2..=12u32 {
        for m in 1..n {
            let design = Design::new(n, m).unwrap();
            let lib: Vec<[u32; 4]> = enumerate_outcomes(&design)
                .iter()
                .map(|x| x.as_array())
                .collect();
            assert_eq!(lib, outcomes(n, m));
        }
    }
    assert_eq!(strata(1).len(), 4);
    assert_eq!(strata(2).len(), 10);
    assert_eq!(strata(28).len(), 4495);
    assert_eq!(outcomes(3, 1).len(), 6);
    assert_eq!(outcomes(28, 14).len(), 225);
}

#[test]
fn label_swap_preserves_likelihood_up_to_10() {
    for n in 2..=10 {
        for m in 1..n {
            let design = Design::new(n, m).unwrap();
            let swapped = design.swap_arms();
            for theta in enumerate_strata(&design) {
                for x in enumerate_outcomes(&design) {
                    assert_eq!(
                        likelihood_numerator(&theta, &x, &design),
                        likelihood_numerator(&theta.swap_arms(), &x.swap_arms(), &swapped),
                        "n={n} m={m} theta={theta} x={x}"
                    );
                }
            }
        }
    }
}

#[test]
fn consistency_witness_has_positive_likelihood() {
    for n in 2..=14 {
        for m in 1..n {
            let design = Design::new(n, m).unwrap();
            for x in enumerate_outcomes(&design) {
                let theta = StratumCounts::new(
                    x.treated_alive + x.control_alive,
                    0,
                    0,
                    x.treated_dead + x.control_dead,
                );
                assert!(likelihood_numerator(&theta, &x, &design) > 0, "x={x}");
                assert!(posterior(&x, &design, &Prior::Uniform).is_ok());
            }
        }
    }
}

#[test]
fn mle_members_tie_exactly_and_beat_the_rest() {
    for n in 2..=9 {
        let design = Design::new(n, n / 2).unwrap();
        for x in enumerate_outcomes(&design) {
            let mle = mle_set(&x, &design).unwrap();
            let best = mle.likelihood.numerator();
            for theta in enumerate_strata(&design) {
                let l = likelihood_numerator(&theta, &x, &design);
                if mle.contains(&theta) {
                    assert_eq!(l, best);
                } else {
                    assert!(l < best);
                }
            }
        }
    }
}

#[test]
fn n2_golden_cases() {
    let design = Design::new(2, 1).unwrap();
    let x = out([1, 0, 1, 0]);
    assert_eq!(
        as_q(likelihood(&st([2, 0, 0, 0]), &x, &design).unwrap()),
        qi(1)
    );
    assert_eq!(
        as_q(likelihood(&st([1, 0, 1, 0]), &x, &design).unwrap()),
        q(1, 2)
    );
    assert_eq!(brute_likelihood([1, 0, 1, 0], [1, 0, 1, 0], 2, 1), q(1, 2));

    let expected = [
        ([1, 0, 1, 0], [2, 0, 0, 0]),
        ([1, 0, 0, 1], [0, 2, 0, 0]),
        ([0, 1, 1, 0], [0, 0, 2, 0]),
        ([0, 1, 0, 1], [0, 0, 0, 2]),
    ];
    for (x, theta) in expected {
        let mle = mle_set(&out(x), &design).unwrap();
        assert_eq!(mle.strata, vec![st(theta)], "x={x:?}");
    }

    // support at X=(1,0,1,0) by scanning all ten strata
    let support = strata(2)
        .into_iter()
        .filter(|t| brute_likelihood(*t, [1, 0, 1, 0], 2, 1) > qi(0))
        .count();
    assert_eq!(support, 4);
    assert_eq!(positive_support_count(&x, &design).unwrap(), support);
}

#[test]
fn n2_outcome_distributions() {
    let design = Design::new(2, 1).unwrap();
    let dist = |t: [u32; 4]| -> Vec<([u32; 4], Q)> {
        outcome_distribution(&st(t), &design)
            .unwrap()
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(x, p)| (x.as_array(), as_q(p)))
            .collect()
    };
    assert_eq!(dist([2, 0, 0, 0]), vec![([1, 0, 1, 0], qi(1))]);
    assert_eq!(dist([0, 2, 0, 0]), vec![([1, 0, 0, 1], qi(1))]);
    let brute: Vec<([u32; 4], Q)> = brute_counts([1, 0, 1, 0], 2, 1)
        .into_iter()
        .filter(|c| c.1 > 0)
        .map(|(x, c)| (x, q(c as i64, 2)))
        .collect();
    assert_eq!(dist([1, 0, 1, 0]), brute);
}

#[test]
fn n2_posterior_means_match_ten_term_sum() {
    let design = Design::new(2, 1).unwrap();
    for x in outcomes(2, 1) {
        let post = posterior(&out(x), &design, &Prior::Uniform).unwrap();
        assert_eq!(post.means, brute_posterior_means(x, 2, 1), "x={x:?}");
    }
    // X=(1,0,1,0): likelihood 1 on (2,0,0,0) and 1/2 on each of (1,1,0,0), (1,0,1,0), (0,1,1,0)
    let means = brute_posterior_means([1, 0, 1, 0], 2, 1);
    assert_eq!(means, [q(6, 5), q(2, 5), q(2, 5), qi(0)]);
}

#[test]
fn n1_has_no_valid_design() {
    assert!(matches!(
        Design::new(1, 0),
        Err(Error::InvalidDesign { .. })
    ));
    assert!(matches!(
        Design::new(1, 1),
        Err(Error::InvalidDesign { .. })
    ));
}
