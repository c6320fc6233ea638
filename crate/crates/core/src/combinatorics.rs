//! Exact integer combinatorics: binomial coefficients, designs, and the
//! enumeration of stratum-count vectors and trial outcomes.
//!
//! Every count in the crate is a `u128`. Designs are capped at
//! [`MAX_N`] participants, which keeps every binomial coefficient and every
//! partial product of binomials used by the likelihood below `2^n < 2^128`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact non-negative count.
pub type BigCount = u128;

/// Largest supported number of participants.
pub const MAX_N: u32 = 120;

const TABLE_ROWS: usize = 128;

fn pascal() -> &'static [[u128; TABLE_ROWS]] {
    static TABLE: OnceLock<Vec<[u128; TABLE_ROWS]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rows = vec![[0u128; TABLE_ROWS]; TABLE_ROWS];
        for n in 0..TABLE_ROWS {
            rows[n][0] = 1;
            for k in 1..=n {
                rows[n][k] = rows[n - 1][k - 1] + rows[n - 1][k];
            }
        }
        rows
    })
}

/// `C(n, k)`, with `0` whenever `k < 0` or `k > n`.
///
/// Rows up to 127 come from a precomputed Pascal triangle. Larger `n` falls
/// back to the multiplicative formula and panics if the result does not fit
/// in a `u128`.
pub fn binom(n: u32, k: i64) -> BigCount {
    if k < 0 || k > n as i64 {
        return 0;
    }
    let k = k as usize;
    let n = n as usize;
    if n < TABLE_ROWS {
        return pascal()[n][k];
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for j in 0..k {
        // acc * (n - j) is divisible by (j + 1) at every step.
        acc = acc
            .checked_mul(n - j)
            .expect("binomial coefficient exceeds u128")
            / (j + 1);
    }
    acc
}

/// Table lookup for in-range arguments on hot paths.
#[inline]
pub(crate) fn binom_in_range(n: u32, k: u32) -> BigCount {
    pascal()[n as usize][k as usize]
}

/// Sample size and intervention-arm size of a two-arm experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Design {
    n: u32,
    m: u32,
}

impl Design {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        if m == 0 || m >= n || n > MAX_N {
            return Err(Error::InvalidDesign { n, m, max: MAX_N });
        }
        Ok(Self { n, m })
    }

    /// Total participants.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Participants randomized to intervention.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Participants randomized to control.
    pub fn control_size(&self) -> u32 {
        self.n - self.m
    }

    /// Number of equally likely assignments, `C(n, m)`.
    pub fn assignments(&self) -> BigCount {
        binom_in_range(self.n, self.m)
    }

    /// The design with the arm sizes exchanged.
    pub fn swap_arms(&self) -> Design {
        Design {
            n: self.n,
            m: self.n - self.m,
        }
    }

    pub fn check_strata(&self, theta: &StratumCounts) -> Result<()> {
        let sum = theta.total();
        if sum != self.n as u64 {
            return Err(Error::StratumTotal {
                counts: theta.as_array(),
                sum,
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn check_outcome(&self, x: &TrialOutcome) -> Result<()> {
        let treated = x.treated_alive as u64 + x.treated_dead as u64;
        if treated != self.m as u64 {
            return Err(Error::MarginViolation(format!(
                "x_I1 + x_I0 = {} + {} = {treated}, but m = {}",
                x.treated_alive, x.treated_dead, self.m
            )));
        }
        let control = x.control_alive as u64 + x.control_dead as u64;
        if control != self.control_size() as u64 {
            return Err(Error::MarginViolation(format!(
                "x_C1 + x_C0 = {} + {} = {control}, but n - m = {}",
                x.control_alive,
                x.control_dead,
                self.control_size()
            )));
        }
        Ok(())
    }

    /// Number of stratum-count vectors, `C(n + 3, 3)`.
    pub fn strata_count(&self) -> usize {
        binom(self.n + 3, 3) as usize
    }

    /// Number of possible trial outcomes, `(m + 1)(n - m + 1)`.
    pub fn outcome_count(&self) -> usize {
        (self.m as usize + 1) * (self.control_size() as usize + 1)
    }

    /// Position of `x` in [`enumerate_outcomes`].
    pub fn outcome_index(&self, x: &TrialOutcome) -> usize {
        x.treated_alive as usize * (self.control_size() as usize + 1) + x.control_alive as usize
    }
}

/// Census of the sample across the four principal strata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StratumCounts {
    /// Alive under both arms.
    pub live_regardless: u32,
    /// Alive under intervention, dead under control.
    pub efficacious: u32,
    /// Dead under intervention, alive under control: the intervention is unsafe for them.
    pub harmed: u32,
    /// Dead under both arms.
    pub die_regardless: u32,
}

impl StratumCounts {
    pub const fn new(
        live_regardless: u32,
        efficacious: u32,
        harmed: u32,
        die_regardless: u32,
    ) -> Self {
        Self {
            live_regardless,
            efficacious,
            harmed,
            die_regardless,
        }
    }

    pub fn from_array(a: [u32; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn as_array(&self) -> [u32; 4] {
        [
            self.live_regardless,
            self.efficacious,
            self.harmed,
            self.die_regardless,
        ]
    }

    pub fn total(&self) -> u64 {
        self.as_array().iter().map(|&c| c as u64).sum()
    }

    /// Relabels intervention as control: efficacious and harmed trade places.
    pub fn swap_arms(&self) -> Self {
        Self::new(
            self.live_regardless,
            self.harmed,
            self.efficacious,
            self.die_regardless,
        )
    }

    /// Position of this vector in [`enumerate_strata`] for its own total.
    pub fn index(&self) -> usize {
        let n = self.total() as u32;
        let mut idx: u128 = 0;
        // vectors whose first coordinate is smaller
        for a in 0..self.live_regardless {
            idx += binom(n - a + 2, 2);
        }
        let rest = n - self.live_regardless;
        for b in 0..self.efficacious {
            idx += (rest - b + 1) as u128;
        }
        idx as usize + self.harmed as usize
    }
}

impl std::fmt::Display for StratumCounts {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.live_regardless, self.efficacious, self.harmed, self.die_regardless
        )
    }
}

/// Observed cell counts of one realized experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TrialOutcome {
    /// `x_I1`
    pub treated_alive: u32,
    /// `x_I0`
    pub treated_dead: u32,
    /// `x_C1`
    pub control_alive: u32,
    /// `x_C0`
    pub control_dead: u32,
}

impl TrialOutcome {
    pub const fn new(
        treated_alive: u32,
        treated_dead: u32,
        control_alive: u32,
        control_dead: u32,
    ) -> Self {
        Self {
            treated_alive,
            treated_dead,
            control_alive,
            control_dead,
        }
    }

    pub fn from_array(a: [u32; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn as_array(&self) -> [u32; 4] {
        [
            self.treated_alive,
            self.treated_dead,
            self.control_alive,
            self.control_dead,
        ]
    }

    pub fn swap_arms(&self) -> Self {
        Self::new(
            self.control_alive,
            self.control_dead,
            self.treated_alive,
            self.treated_dead,
        )
    }

    pub fn total_alive(&self) -> u32 {
        self.treated_alive + self.control_alive
    }
}

impl std::fmt::Display for TrialOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.treated_alive, self.treated_dead, self.control_alive, self.control_dead
        )
    }
}

/// All stratum-count vectors summing to `n`, lexicographic in
/// (live_regardless, efficacious, harmed) with die_regardless implied.
pub fn strata_of_size(n: u32) -> Vec<StratumCounts> {
    let mut out = Vec::with_capacity(binom(n + 3, 3) as usize);
    for a in 0..=n {
        for b in 0..=(n - a) {
            for c in 0..=(n - a - b) {
                out.push(StratumCounts::new(a, b, c, n - a - b - c));
            }
        }
    }
    out
}

/// Every stratum-count vector compatible with `design`, in canonical order.
pub fn enumerate_strata(design: &Design) -> Vec<StratumCounts> {
    strata_of_size(design.n)
}

/// Every outcome satisfying the design margins, ordered by
/// (treated_alive, control_alive).
pub fn enumerate_outcomes(design: &Design) -> Vec<TrialOutcome> {
    let m = design.m;
    let c = design.control_size();
    let mut out = Vec::with_capacity(design.outcome_count());
    for xi1 in 0..=m {
        for xc1 in 0..=c {
            out.push(TrialOutcome::new(xi1, m - xi1, xc1, c - xc1));
        }
    }
    out
}
