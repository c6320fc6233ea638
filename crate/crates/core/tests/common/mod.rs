//! Test-only oracles that share no code with the library: Pascal's
//! triangle, explicit per-person assignment enumeration and plain
//! quadruple loops over strata.

#![allow(dead_code)]

use exact_decide::num_bigint::BigInt;
use exact_decide::num_rational::BigRational;

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(v: i64) -> Q {
    q(v, 1)
}

/// Pascal's triangle by repeated addition.
pub fn pascal(rows: usize) -> Vec<Vec<u128>> {
    let mut t: Vec<Vec<u128>> = vec![vec![1]];
    for r in 1..rows {
        let prev = &t[r - 1];
        let mut row = vec![1u128; r + 1];
        for k in 1..r {
            row[k] = prev[k - 1] + prev[k];
        }
        t.push(row);
    }
    t
}

/// Every (t11, t10, t01, t00) with sum n, lexicographic.
pub fn strata(n: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n - a {
            for c in 0..=n - a - b {
                out.push([a, b, c, n - a - b - c]);
            }
        }
    }
    out
}

/// Every (x_i1, x_i0, x_c1, x_c0) compatible with arm sizes m and n - m.
pub fn outcomes(n: u32, m: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for xi1 in 0..=m {
        for xc1 in 0..=n - m {
            out.push([xi1, m - xi1, xc1, n - m - xc1]);
        }
    }
    out
}

/// Counts, for every outcome, the subsets of size m (the treated group)
/// that produce it. Person k has potential outcomes (alive if treated,
/// alive if control) given by their type.
pub fn brute_counts(theta: [u32; 4], n: u32, m: u32) -> Vec<([u32; 4], u128)> {
    let types = [(1u32, 1u32), (1, 0), (0, 1), (0, 0)];
    let mut people = Vec::new();
    for (t, &count) in theta.iter().enumerate() {
        for _ in 0..count {
            people.push(types[t]);
        }
    }
    assert_eq!(people.len() as u32, n);
    let mut tally = std::collections::BTreeMap::new();
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() != m {
            continue;
        }
        let mut x = [0u32; 4];
        for (k, &(y1, y0)) in people.iter().enumerate() {
            if mask & (1 << k) != 0 {
                if y1 == 1 {
                    x[0] += 1
                } else {
                    x[1] += 1
                }
            } else if y0 == 1 {
                x[2] += 1
            } else {
                x[3] += 1
            }
        }
        *tally.entry(x).or_insert(0u128) += 1;
    }
    outcomes(n, m)
        .into_iter()
        .map(|x| (x, tally.get(&x).copied().unwrap_or(0)))
        .collect()
}

pub fn brute_likelihood(theta: [u32; 4], x: [u32; 4], n: u32, m: u32) -> Q {
    let counts = brute_counts(theta, n, m);
    let total: u128 = counts.iter().map(|c| c.1).sum();
    let hit = counts.iter().find(|c| c.0 == x).map_or(0, |c| c.1);
    Q::new(BigInt::from(hit), BigInt::from(total))
}

/// Posterior means under the uniform prior, by summing over all strata.
pub fn brute_posterior_means(x: [u32; 4], n: u32, m: u32) -> [Q; 4] {
    let mut mass = qi(0);
    let mut sums = [qi(0), qi(0), qi(0), qi(0)];
    for theta in strata(n) {
        let l = brute_likelihood(theta, x, n, m);
        mass += &l;
        for k in 0..4 {
            sums[k] += &l * qi(theta[k] as i64);
        }
    }
    sums.map(|s| s / &mass)
}
