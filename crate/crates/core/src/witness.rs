//! Parameter arithmetic and structural ground truth for the sampled solvers.
//!
//! A *witness halve* of a partition instance is a subset W of roughly half
//! the universe that some solution splits exactly: the solution's sets
//! divide into S1 partitioning W and S2 partitioning the complement. The
//! sampled solvers work because YES-instances (with small sets) have
//! abundantly many such W, so a sparse random sample of balanced subsets
//! hits one with good probability.
//!
//! This module provides the brute-force enumeration of witness halves (a
//! test oracle), the abundance equivalence check, the binary entropy
//! function with the inequality suite the analysis leans on, and the
//! sampling schedule (ζ, β, rate, repeats) shared by the solver drivers.

use std::collections::HashSet;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::instances::SetSystemInstance;

/// Upper bound on zeta: the schedule hypothesis needs zeta < 1/4, and this
/// is the value used when clamping from above.
pub const ZETA_CAP: f64 = 0.2499;

/// Guards for the brute-force witness-halve enumeration.
pub const WITNESS_ENUM_MAX_N: usize = 16;
pub const WITNESS_ENUM_MAX_M: usize = 16;

// ---------------------------------------------------------------------------
// Entropy
// ---------------------------------------------------------------------------

/// Binary entropy h(x) = -x lg x - (1-x) lg (1-x), with h(0) = h(1) = 0.
pub fn entropy(x: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&x) {
        return Err(Error::InfeasibleParams(format!(
            "entropy argument {x} outside [0, 1]"
        )));
    }
    let x = x.clamp(0.0, 1.0);
    let mut h = 0.0;
    if x > 0.0 {
        h -= x * x.log2();
    }
    if x < 1.0 {
        h -= (1.0 - x) * (1.0 - x).log2();
    }
    Ok(h)
}

/// One failed inequality from [`check_entropy_bounds`].
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyViolation {
    /// Which inequality failed (1, 2, or 3).
    pub item: usize,
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
}

/// Outcome of the numeric inequality suite.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub points_checked: usize,
    pub violations: Vec<EntropyViolation>,
}

impl EntropyReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Numerically checks three entropy inequalities on a grid:
///
/// 1. `h(1/2 - x) <= 1 - x^2` for grid points in (0, 1/2);
/// 2. `h(x) <= x * lg(4/x)` for grid points in (0, 1);
/// 3. `(1 - 1/n)^n <= 1/e` for integer grid points n >= 1.
///
/// Points outside an item's domain are skipped for that item. All three
/// inequalities are theorems, so the report is expected clean; violations
/// are collected rather than raised.
pub fn check_entropy_bounds(grid: &[f64]) -> EntropyReport {
    const TOL: f64 = 1e-9;
    let mut report = EntropyReport {
        points_checked: 0,
        violations: Vec::new(),
    };
    for &x in grid {
        if x > 0.0 && x < 0.5 {
            report.points_checked += 1;
            let lhs = entropy(0.5 - x).expect("domain checked");
            let rhs = 1.0 - x * x;
            if lhs > rhs + TOL {
                report.violations.push(EntropyViolation {
                    item: 1,
                    x,
                    lhs,
                    rhs,
                });
            }
        }
        if x > 0.0 && x < 1.0 {
            report.points_checked += 1;
            let lhs = entropy(x).expect("domain checked");
            let rhs = x * (4.0 / x).log2();
            if lhs > rhs + TOL {
                report.violations.push(EntropyViolation {
                    item: 2,
                    x,
                    lhs,
                    rhs,
                });
            }
        }
        if x >= 1.0 && x.fract() == 0.0 {
            report.points_checked += 1;
            let n = x;
            let lhs = (1.0 - 1.0 / n).powf(n);
            let rhs = std::f64::consts::E.recip();
            if lhs > rhs + TOL {
                report.violations.push(EntropyViolation {
                    item: 3,
                    x,
                    lhs,
                    rhs,
                });
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Sampling schedules
// ---------------------------------------------------------------------------

/// Parameters steering one sampled-solver run: the overall solution density
/// `sigma`, the per-iteration density `sigma0`, the sampling exponent
/// `zeta` (subsets kept with probability 2^(-zeta n)), the balance slack
/// `beta` (layers l with (1/2-beta)n < l < (1/2+beta)n, open interval), and
/// the number of independent amplification passes.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSchedule {
    pub sigma: f64,
    pub sigma0: f64,
    pub zeta: f64,
    pub beta: f64,
    /// 2^(-zeta * n).
    pub sample_rate: f64,
    /// Independent passes; defaults to n.
    pub repeats: usize,
    pub n: usize,
}

impl ParamSchedule {
    /// Subset sizes examined: integers l with
    /// floor((1/2-beta)n) < l < ceil((1/2+beta)n), clamped to 0..=n.
    pub fn layer_range(&self) -> Range<usize> {
        let nf = self.n as f64;
        let lo_f = (0.5 - self.beta) * nf;
        let hi_f = (0.5 + self.beta) * nf;
        let lo = (lo_f + 1e-9).floor() as i64 + 1;
        let hi = (hi_f - 1e-9).ceil() as i64; // exclusive
        let lo = lo.clamp(0, self.n as i64 + 1) as usize;
        let hi = hi.clamp(0, self.n as i64 + 1) as usize;
        lo..hi.max(lo)
    }

    /// Same schedule with the outer density recorded separately (used when a
    /// driver iterates several per-pass densities under one target).
    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }
}

fn finish_schedule(sigma0: f64, zeta: f64, beta: f64, n: usize) -> Result<ParamSchedule> {
    let sched = ParamSchedule {
        sigma: sigma0,
        sigma0,
        zeta,
        beta,
        sample_rate: (-(zeta * n as f64)).exp2(),
        repeats: n.max(1),
        n,
    };
    if sched.layer_range().is_empty() {
        return Err(Error::InfeasibleParams(format!(
            "no subset size falls strictly inside the balance window \
             (1/2 +- {beta})*{n}; odd n needs beta > 1/(2n)"
        )));
    }
    Ok(sched)
}

/// The schedule used by the solver drivers: zeta = min(sigma0, {ZETA_CAP})
/// and beta = sigma0^2/4. Errors when the hypothesis 2*sqrt(beta) <= zeta
/// fails after clamping (then the caller must shrink beta — see
/// [`schedule_for_sigma_clamped`]) or when no sampling layer exists.
pub fn schedule_for_sigma(sigma0: f64, n: usize) -> Result<ParamSchedule> {
    if !(sigma0 > 0.0 && sigma0 <= 1.0) {
        return Err(Error::InfeasibleParams(format!(
            "sigma0 must lie in (0, 1]; got {sigma0}"
        )));
    }
    let zeta = sigma0.min(ZETA_CAP);
    let beta = sigma0 * sigma0 / 4.0;
    if 2.0 * beta.sqrt() > zeta + 1e-12 {
        return Err(Error::HypothesisViolation(format!(
            "schedule hypothesis 2*sqrt(beta) <= zeta fails: beta={beta}, zeta={zeta}; \
             shrink beta (clamped schedule) or lower sigma0"
        )));
    }
    finish_schedule(sigma0, zeta, beta, n)
}

/// Like [`schedule_for_sigma`] but shrinks beta to (zeta/2)^2 when
/// sigma0^2/4 would violate the hypothesis. Lowering beta narrows the
/// balance window, which keeps soundness unconditionally; the formal
/// abundance guarantee is tied to beta = sigma0^2/4, so completeness for
/// clamped runs rests on the measured acceptance rates.
pub fn schedule_for_sigma_clamped(sigma0: f64, n: usize) -> Result<ParamSchedule> {
    if !(sigma0 > 0.0 && sigma0 <= 1.0) {
        return Err(Error::InfeasibleParams(format!(
            "sigma0 must lie in (0, 1]; got {sigma0}"
        )));
    }
    let zeta = sigma0.min(ZETA_CAP);
    let beta = (sigma0 * sigma0 / 4.0).min((zeta / 2.0) * (zeta / 2.0));
    finish_schedule(sigma0, zeta, beta, n)
}

// ---------------------------------------------------------------------------
// Witness halves
// ---------------------------------------------------------------------------

/// A balanced subset W together with a solution split realizing it: the
/// instance has an exact-partition solution S1 ∪ S2 (index sets, disjoint)
/// with S1 partitioning W and S2 partitioning the complement of W.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessHalve {
    pub w: u64,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
}

impl WitnessHalve {
    /// |S1|.
    pub fn i(&self) -> usize {
        self.s1.len()
    }

    /// Re-verifies the defining conditions against an instance and slack.
    pub fn verify(&self, inst: &SetSystemInstance, beta: f64) -> bool {
        let n = inst.n() as f64;
        let k = self.w.count_ones() as f64;
        if k < (0.5 - beta) * n - 1e-9 || k > (0.5 + beta) * n + 1e-9 {
            return false;
        }
        if self.s1.len() + self.s2.len() != inst.s() {
            return false;
        }
        let mut seen = vec![false; inst.m()];
        let mut union1 = 0u64;
        let mut union2 = 0u64;
        let mut total = 0usize;
        for &j in &self.s1 {
            if j >= inst.m() || seen[j] {
                return false;
            }
            seen[j] = true;
            union1 |= inst.set(j);
            total += inst.set_size(j);
        }
        for &j in &self.s2 {
            if j >= inst.m() || seen[j] {
                return false;
            }
            seen[j] = true;
            union2 |= inst.set(j);
            total += inst.set_size(j);
        }
        union1 == self.w && union2 == inst.universe_mask() & !self.w && total == inst.n()
    }
}

/// Enumerates every distinct witness-halve subset W at the instance's
/// target size, slack `beta`, recording one realizing split per W. Brute
/// force over all subfamilies — a test oracle, guarded small.
pub fn enumerate_witness_halves(inst: &SetSystemInstance, beta: f64) -> Result<Vec<WitnessHalve>> {
    if inst.n() > WITNESS_ENUM_MAX_N || inst.m() > WITNESS_ENUM_MAX_M {
        return Err(Error::GuardExceeded(format!(
            "witness enumeration limited to n <= {WITNESS_ENUM_MAX_N}, m <= {WITNESS_ENUM_MAX_M}; \
             got n={}, m={}",
            inst.n(),
            inst.m()
        )));
    }
    let n = inst.n();
    let s = inst.s();
    let universe = inst.universe_mask();
    let lo = (0.5 - beta) * n as f64 - 1e-9;
    let hi = (0.5 + beta) * n as f64 + 1e-9;
    let mut seen_w: HashSet<u64> = HashSet::new();
    let mut out = Vec::new();
    for choice in 0u64..(1u64 << inst.m()) {
        if choice.count_ones() as usize != s {
            continue;
        }
        let mut union = 0u64;
        let mut total = 0usize;
        let mut rest = choice;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            union |= inst.set(j);
            total += inst.set_size(j);
        }
        if union != universe || total != n {
            continue; // not an exact-partition solution
        }
        // Every split of this solution is a candidate halve.
        let mut sub = choice;
        loop {
            let mut w = 0u64;
            let mut r = sub;
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                r &= r - 1;
                w |= inst.set(j);
            }
            let k = w.count_ones() as f64;
            if k >= lo && k <= hi && !seen_w.contains(&w) {
                seen_w.insert(w);
                let s1: Vec<usize> = (0..inst.m()).filter(|&j| sub & (1u64 << j) != 0).collect();
                let s2: Vec<usize> = (0..inst.m())
                    .filter(|&j| (choice & !sub) & (1u64 << j) != 0)
                    .collect();
                out.push(WitnessHalve { w, s1, s2 });
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & choice;
        }
    }
    out.sort_by_key(|h| (h.w.count_ones(), h.w));
    Ok(out)
}

/// Abundance equivalence: a partition instance whose sets are nonempty and
/// of size at most max(1, floor(sigma0^4 n / 8)) (sigma0 = s/n) is a
/// YES-instance exactly when it has at least 2^(sigma0 n)/4 witness
/// (sigma0^2/4)-halves. Returns whether the equivalence holds (it is a
/// theorem, so `true` is expected); hypothesis failures are errors.
pub fn check_abundance(inst: &SetSystemInstance) -> Result<bool> {
    if inst.n() == 0 {
        return Err(Error::InfeasibleParams(
            "abundance check needs a nonempty universe".into(),
        ));
    }
    if inst.has_empty_sets() {
        return Err(Error::HypothesisViolation(
            "abundance hypotheses forbid empty sets".into(),
        ));
    }
    let n = inst.n();
    let sigma0 = inst.s() as f64 / n as f64;
    let threshold = size_threshold(sigma0, n, 8.0);
    for j in 0..inst.m() {
        if inst.set_size(j) > threshold {
            return Err(Error::HypothesisViolation(format!(
                "set {j} has size {} above the hypothesis bound {threshold}",
                inst.set_size(j)
            )));
        }
    }
    let beta = sigma0 * sigma0 / 4.0;
    let halves = enumerate_witness_halves(inst, beta)?;
    let needed = (sigma0 * n as f64).exp2() / 4.0;
    let abundant = halves.len() as f64 >= needed;
    let yes = crate::instances::brute_force_set_partition(inst)?.is_yes();
    Ok(yes == abundant)
}

/// The size thresholds of the solver hypotheses: floor(sigma^4 n / divisor),
/// never below 1 so that singleton families are always admissible.
pub fn size_threshold(sigma: f64, n: usize, divisor: f64) -> usize {
    let raw = (sigma.powi(4) * n as f64 / divisor + 1e-9).floor();
    (raw as usize).max(1)
}
