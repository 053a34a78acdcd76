//! Randomized solvers built on sampling balanced subsets of the universe.
//!
//! The core routine samples, for each admissible layer size `l`, a random
//! collection of `l`-element subsets `W`, builds the subset-closures of the
//! samples and of their complements, and runs the partition-count DP on
//! both. A target split `(W, i)` such that `W` splits into `i` family sets
//! and its complement into `s - i` proves a partition of size `s`; every
//! YES is backed by an explicitly extracted and re-verified certificate, so
//! the solvers never return a false YES. False negatives are driven down by
//! independent passes.

use crate::bits::{for_each_k_subset, universe_mask};
use crate::dp_core::{
    min_cover_certificate_on_sub_universe, partition_profile_on_closure, partition_profile_oracle,
    PartitionProfile,
};
use crate::error::{Error, Result};
use crate::instances::{
    k_coloring_classes, verify_coloring, verify_cover, verify_mask_partition, verify_partition,
    Certificate, RandomSeed, SetSystemInstance, SimpleGraph, Verdict,
};
use crate::lattice::{down_closure, DownClosure, SetOracle};
use crate::reductions::{cover_to_partition, remove_sets_larger_than, LargeSetOutcome};
use crate::witness::{schedule_for_sigma_clamped, size_threshold, ParamSchedule};
use rand::Rng;
use std::collections::HashSet;

/// Largest universe the sampling solvers accept: beyond this the subset
/// closures stop fitting comfortably in memory.
pub const SAMPLED_MAX_N: usize = 20;

/// Default overall false-negative probability for the amplified drivers.
pub const DEFAULT_FAILURE_PROBABILITY: f64 = 0.25;

/// Random membership probes performed by the oracle hypothesis spot-check,
/// in addition to the two deterministic probes (the empty set and the whole
/// universe).
pub const SPOT_CHECK_PROBES: usize = 62;

/// Seed-path component reserved for the spot-check RNG so it never collides
/// with the per-pass sampling streams.
const SPOT_CHECK_STREAM: u64 = 0x73_70_6f_74; // "spot"

/// One layer's sample: subsets of the universe of size exactly `l`, each
/// kept independently with the schedule's sample rate, plus their
/// complements. Deterministic given (seed, l).
#[derive(Debug, Clone)]
pub struct SampledFamily {
    pub l: usize,
    pub members: Vec<u64>,
    pub complements: Vec<u64>,
}

impl SampledFamily {
    pub fn sample(n: usize, l: usize, rate: f64, seed: &RandomSeed) -> Self {
        let mut rng = seed.rng();
        let mut members = Vec::new();
        for_each_k_subset(n, l, |mask| {
            if rng.random::<f64>() < rate {
                members.push(mask);
            }
        });
        let u = universe_mask(n);
        let complements = members.iter().map(|&w| u ^ w).collect();
        SampledFamily {
            l,
            members,
            complements,
        }
    }
}

/// Sizes observed at one sampled layer, logged so the closure-growth bound
/// can be audited after the fact.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LayerSample {
    /// Amplification pass the layer belongs to.
    pub pass: usize,
    /// Subset size sampled at this layer.
    pub l: usize,
    /// Members kept by the sampler.
    pub sampled: usize,
    /// Total closure nodes built over the members and their complements
    /// (zero when the sample came up empty and the layer was skipped).
    pub closure: usize,
}

/// Work counters for one solver run, reported by the `_with_stats`
/// variants and surfaced by the CLI.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SampleStats {
    /// Independent passes started.
    pub passes: usize,
    /// Layers visited across all passes.
    pub layers_visited: usize,
    /// Subsets kept by the sampler across all layers.
    pub sets_sampled: u64,
    /// Total nodes across all subset-closures built.
    pub closure_nodes: u64,
    /// Membership queries issued to a set oracle, when one is in play.
    pub oracle_queries: u64,
    /// Split candidates whose DP bits fired and were probed for a
    /// certificate.
    pub candidates_checked: u64,
    /// Per-layer sample and closure sizes, in visit order.
    pub layer_log: Vec<LayerSample>,
}

fn check_solver_guards(n: usize, sched: &ParamSchedule) -> Result<()> {
    if n > SAMPLED_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "sampling solvers limited to n <= {SAMPLED_MAX_N}; got n={n}"
        )));
    }
    if sched.n != n {
        return Err(Error::InfeasibleParams(format!(
            "schedule built for n={} but the instance has n={}",
            sched.n, n
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Certificate extraction
// ---------------------------------------------------------------------------

/// Depth-first search for exactly `a` pairwise-disjoint non-empty family
/// sets with union `x`, over the instance's set indices. `memo` caches
/// failing `(x, a)` states. Chosen indices are pushed onto `out`; on
/// failure `out` is left as found.
pub(crate) fn extract_nonempty(
    inst: &SetSystemInstance,
    x: u64,
    a: usize,
    memo: &mut HashSet<(u64, usize)>,
    out: &mut Vec<usize>,
) -> bool {
    if x == 0 {
        return a == 0;
    }
    if a == 0 || (x.count_ones() as usize) < a {
        return false;
    }
    if memo.contains(&(x, a)) {
        return false;
    }
    let pivot = x & x.wrapping_neg();
    for j in 0..inst.m() {
        let set = inst.set(j);
        if set == 0 || set & pivot == 0 || set & !x != 0 {
            continue;
        }
        out.push(j);
        if extract_nonempty(inst, x ^ set, a - 1, memo, out) {
            return true;
        }
        out.pop();
    }
    memo.insert((x, a));
    false
}

/// Build an exact-size-`s` partition certificate split across `w` and its
/// complement: some number of non-empty sets partitions `w`, some number
/// partitions the complement, and distinct listed empty sets make up the
/// difference. Returns sorted instance indices, or `None` when no split
/// balances (e.g. both sides would need the same single empty set).
fn explicit_split_certificate(
    inst: &SetSystemInstance,
    w: u64,
    memo: &mut HashSet<(u64, usize)>,
) -> Option<Vec<usize>> {
    let s = inst.s();
    let cw = inst.universe_mask() ^ w;
    let empty_indices: Vec<usize> = (0..inst.m()).filter(|&j| inst.set(j) == 0).collect();
    let e_total = empty_indices.len();
    let w_cap = (w.count_ones() as usize).min(s);
    for a_left in 1..=w_cap {
        let mut left = Vec::new();
        if !extract_nonempty(inst, w, a_left, memo, &mut left) {
            continue;
        }
        let hi = (cw.count_ones() as usize).min(s - a_left);
        let lo = 1.max((s - a_left).saturating_sub(e_total));
        // Fewest padding empties first.
        for a_right in (lo..=hi).rev() {
            let mut right = Vec::new();
            if extract_nonempty(inst, cw, a_right, memo, &mut right) {
                let mut cert = left;
                cert.extend(right);
                cert.extend(&empty_indices[..s - a_left - a_right]);
                cert.sort_unstable();
                return Some(cert);
            }
        }
    }
    None
}

/// Guided extraction for the oracle solver: peel one oracle set off `x` at
/// a time, always consuming the lowest remaining element, keeping only
/// moves the DP profile certifies as completable. Emits set masks (the
/// empty mask may repeat when the oracle admits it).
fn oracle_split_masks(
    oracle: &dyn SetOracle,
    dc: &DownClosure,
    profile: &PartitionProfile,
    x: u64,
    k: usize,
    out: &mut Vec<u64>,
    queries: &mut u64,
) -> bool {
    if x == 0 {
        if k == 0 {
            return true;
        }
        // Only copies of the empty set can fill the remaining slots.
        let pos = match dc.position(0) {
            Some(p) => p,
            None => return false,
        };
        if profile.can_partition(pos, k) {
            out.extend(std::iter::repeat_n(0u64, k));
            return true;
        }
        return false;
    }
    if k == 0 {
        return false;
    }
    let pivot = x & x.wrapping_neg();
    let rest = x ^ pivot;
    let mut sub = rest;
    loop {
        let cand = sub | pivot;
        *queries += 1;
        if oracle.contains_set(cand) {
            let rem = x ^ cand;
            if let Some(pos) = dc.position(rem) {
                if profile.can_partition(pos, k - 1) {
                    out.push(cand);
                    if oracle_split_masks(oracle, dc, profile, rem, k - 1, out, queries) {
                        return true;
                    }
                    out.pop();
                }
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    false
}

// ---------------------------------------------------------------------------
// Core sampling loops
// ---------------------------------------------------------------------------

/// Exact-size partition search by balanced-subset sampling over an explicit
/// family. Runs `sched.repeats` independent passes; each pass samples every
/// layer in the schedule's window, builds the two subset-closures, runs the
/// partition-count DP on both, and probes every sampled subset for a split
/// whose two sides both complete. YES only ever comes with a verified
/// certificate of instance indices.
pub fn solve_partition_sampled(
    inst: &SetSystemInstance,
    sched: &ParamSchedule,
    seed: &RandomSeed,
) -> Result<Verdict> {
    Ok(solve_partition_sampled_with_stats(inst, sched, seed)?.0)
}

pub fn solve_partition_sampled_with_stats(
    inst: &SetSystemInstance,
    sched: &ParamSchedule,
    seed: &RandomSeed,
) -> Result<(Verdict, SampleStats)> {
    check_solver_guards(inst.n(), sched)?;
    let s = inst.s();
    let mut stats = SampleStats::default();
    for pass in 0..sched.repeats {
        stats.passes += 1;
        for l in sched.layer_range() {
            stats.layers_visited += 1;
            let layer_seed = seed.derive(pass as u64).derive(l as u64);
            let fam = SampledFamily::sample(inst.n(), l, sched.sample_rate, &layer_seed);
            stats.sets_sampled += fam.members.len() as u64;
            if fam.members.is_empty() {
                stats.layer_log.push(LayerSample {
                    pass,
                    l,
                    sampled: 0,
                    closure: 0,
                });
                continue;
            }
            let dcw = down_closure(inst.n(), &fam.members)?;
            let dcc = down_closure(inst.n(), &fam.complements)?;
            stats.closure_nodes += (dcw.len() + dcc.len()) as u64;
            stats.layer_log.push(LayerSample {
                pass,
                l,
                sampled: fam.members.len(),
                closure: dcw.len() + dcc.len(),
            });
            let pw = partition_profile_on_closure(inst, &dcw)?;
            let pc = partition_profile_on_closure(inst, &dcc)?;
            let mut memo: HashSet<(u64, usize)> = HashSet::new();
            for (&w, &cw) in fam.members.iter().zip(&fam.complements) {
                let pos_w = dcw.position(w).expect("sampled subset is a closure member");
                let pos_c = dcc
                    .position(cw)
                    .expect("sampled complement is a closure member");
                let fires =
                    (0..=s).any(|i| pw.can_partition(pos_w, i) && pc.can_partition(pos_c, s - i));
                if !fires {
                    continue;
                }
                stats.candidates_checked += 1;
                if let Some(cert) = explicit_split_certificate(inst, w, &mut memo) {
                    if verify_partition(inst, &cert) {
                        return Ok((Verdict::Yes(Certificate::SetIndices(cert)), stats));
                    }
                    debug_assert!(false, "extracted certificate failed verification");
                }
                // No balanced split exists (e.g. both sides would need the
                // single listed empty set); keep scanning.
            }
        }
    }
    Ok((Verdict::No, stats))
}

/// Oracle twin of [`solve_partition_sampled`]: the family is only reachable
/// through membership queries, so the per-layer DP switches to the
/// query-based partition profile and certificates are emitted as set masks.
pub fn solve_partition_sampled_oracle(
    oracle: &dyn SetOracle,
    s: usize,
    sched: &ParamSchedule,
    seed: &RandomSeed,
) -> Result<Verdict> {
    Ok(solve_partition_sampled_oracle_with_stats(oracle, s, sched, seed)?.0)
}

pub fn solve_partition_sampled_oracle_with_stats(
    oracle: &dyn SetOracle,
    s: usize,
    sched: &ParamSchedule,
    seed: &RandomSeed,
) -> Result<(Verdict, SampleStats)> {
    let n = oracle.n();
    check_solver_guards(n, sched)?;
    let mut stats = SampleStats::default();
    for pass in 0..sched.repeats {
        stats.passes += 1;
        for l in sched.layer_range() {
            stats.layers_visited += 1;
            let layer_seed = seed.derive(pass as u64).derive(l as u64);
            let fam = SampledFamily::sample(n, l, sched.sample_rate, &layer_seed);
            stats.sets_sampled += fam.members.len() as u64;
            if fam.members.is_empty() {
                stats.layer_log.push(LayerSample {
                    pass,
                    l,
                    sampled: 0,
                    closure: 0,
                });
                continue;
            }
            let dcw = down_closure(n, &fam.members)?;
            let dcc = down_closure(n, &fam.complements)?;
            stats.closure_nodes += (dcw.len() + dcc.len()) as u64;
            stats.layer_log.push(LayerSample {
                pass,
                l,
                sampled: fam.members.len(),
                closure: dcw.len() + dcc.len(),
            });
            let pw = partition_profile_oracle(oracle, &dcw)?;
            let pc = partition_profile_oracle(oracle, &dcc)?;
            stats.oracle_queries += (dcw.len() + dcc.len()) as u64;
            for (&w, &cw) in fam.members.iter().zip(&fam.complements) {
                let pos_w = dcw.position(w).expect("sampled subset is a closure member");
                let pos_c = dcc
                    .position(cw)
                    .expect("sampled complement is a closure member");
                for i in 0..=s {
                    if !(pw.can_partition(pos_w, i) && pc.can_partition(pos_c, s - i)) {
                        continue;
                    }
                    stats.candidates_checked += 1;
                    let mut masks = Vec::with_capacity(s);
                    let left = oracle_split_masks(
                        oracle,
                        &dcw,
                        &pw,
                        w,
                        i,
                        &mut masks,
                        &mut stats.oracle_queries,
                    );
                    if !left {
                        continue;
                    }
                    let right = oracle_split_masks(
                        oracle,
                        &dcc,
                        &pc,
                        cw,
                        s - i,
                        &mut masks,
                        &mut stats.oracle_queries,
                    );
                    if !right {
                        continue;
                    }
                    let sound = verify_mask_partition(n, &masks, s)
                        && masks.iter().all(|&m| oracle.contains_set(m));
                    if sound {
                        return Ok((Verdict::Yes(Certificate::SetMasks(masks)), stats));
                    }
                    debug_assert!(false, "extracted mask certificate failed verification");
                }
            }
        }
    }
    Ok((Verdict::No, stats))
}

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

/// Convenience driver: build the clamped schedule for `sigma0 = s/n` and run
/// the explicit sampling solver.
pub fn solve_partition(inst: &SetSystemInstance, seed: &RandomSeed) -> Result<Verdict> {
    Ok(solve_partition_with_stats(inst, seed)?.0)
}

pub fn solve_partition_with_stats(
    inst: &SetSystemInstance,
    seed: &RandomSeed,
) -> Result<(Verdict, SampleStats)> {
    let (n, s) = (inst.n(), inst.s());
    if n == 0 {
        // Only listed empty sets can make up an exact-size partition of the
        // empty universe.
        let empties: Vec<usize> = (0..inst.m()).filter(|&j| inst.set(j) == 0).collect();
        let verdict = if empties.len() >= s {
            Verdict::Yes(Certificate::SetIndices(empties[..s].to_vec()))
        } else {
            Verdict::No
        };
        return Ok((verdict, SampleStats::default()));
    }
    if s == 0 {
        return Ok((Verdict::No, SampleStats::default()));
    }
    if s > n && !inst.allows_empty() {
        // More than n pairwise-disjoint non-empty sets cannot fit in n
        // elements.
        return Ok((Verdict::No, SampleStats::default()));
    }
    let sched = schedule_for_sigma_clamped(s as f64 / n as f64, n)?;
    solve_partition_sampled_with_stats(inst, &sched, seed)
}

/// Large-solution cover search. `sigma` is the target solution density;
/// `sigma * n` must equal the instance target. Three stages: (1) every set
/// above the size cutoff either completes to a cover within budget (answer
/// YES on the spot) or is deleted; (2) for each candidate exact size `s'`
/// in `[s/2, s]`, close the family under subsets and run the sampling
/// partition solver; (3) split the universe in half and check whether the
/// two halves' minimum covers fit the budget together. Stage 2 is repeated
/// to push the false-negative rate below [`DEFAULT_FAILURE_PROBABILITY`].
pub fn solve_large_cover(
    inst: &SetSystemInstance,
    sigma: f64,
    seed: &RandomSeed,
) -> Result<Verdict> {
    Ok(solve_large_cover_with_delta(inst, sigma, DEFAULT_FAILURE_PROBABILITY, seed)?.0)
}

pub fn solve_large_cover_with_delta(
    inst: &SetSystemInstance,
    sigma: f64,
    delta: f64,
    seed: &RandomSeed,
) -> Result<(Verdict, SampleStats)> {
    let (n, s) = (inst.n(), inst.s());
    if n > SAMPLED_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "sampling solvers limited to n <= {SAMPLED_MAX_N}; got n={n}"
        )));
    }
    // NaN must be rejected too, so the comparison cannot be `sigma <= 0.0`.
    if sigma.is_nan() || sigma <= 0.0 || sigma > 1.0 + 1e-9 {
        return Err(Error::InfeasibleParams(format!(
            "solution density must lie in (0, 1]; got {sigma}"
        )));
    }
    if (sigma * n as f64 - s as f64).abs() > 1e-6 {
        return Err(Error::InfeasibleParams(format!(
            "density {} times n={} must equal the target {}",
            sigma, n, s
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InfeasibleParams(format!(
            "failure probability must lie in (0, 1); got {delta}"
        )));
    }
    let mut stats = SampleStats::default();
    if n == 0 {
        return Ok((Verdict::Yes(Certificate::SetIndices(Vec::new())), stats));
    }

    // Stage 1: resolve or delete every set above the size cutoff. The
    // cutoff is floored at one so singleton sets always stay in play.
    let cutoff = size_threshold(sigma, n, 1000.0);
    let (reduced, kept) = match remove_sets_larger_than(inst, cutoff)? {
        LargeSetOutcome::Resolved(verdict) => {
            if let Verdict::Yes(Certificate::SetIndices(idx)) = &verdict {
                debug_assert!(verify_cover(inst, idx));
            }
            return Ok((verdict, stats));
        }
        LargeSetOutcome::Reduced { inst, kept } => (inst, kept),
    };

    // Stage 2: sampled exact-size partition searches over the subset
    // closure, amplified. Every surviving set fits the cutoff, so the
    // closure expansion stays within m * 2^cutoff.
    let eps_eff = cutoff as f64 / n as f64;
    let outer = (1.0 / delta).ln() / (4.0f64 / 3.0).ln();
    let outer = outer.ceil().max(1.0) as usize;
    for trial in 0..outer {
        for s_prime in (s / 2)..=s {
            if s_prime == 0 {
                continue;
            }
            let sigma0 = s_prime as f64 / n as f64;
            let sched = match schedule_for_sigma_clamped(sigma0, n) {
                Ok(sched) => sched.with_sigma(sigma),
                Err(Error::InfeasibleParams(_)) => continue,
                Err(e) => return Err(e),
            };
            let expanded = cover_to_partition(&reduced.with_target(s_prime), eps_eff)?;
            let trial_seed = seed.derive(1).derive(trial as u64).derive(s_prime as u64);
            let (verdict, st) = solve_partition_sampled_with_stats(&expanded, &sched, &trial_seed)?;
            stats.passes += st.passes;
            stats.layers_visited += st.layers_visited;
            stats.sets_sampled += st.sets_sampled;
            stats.closure_nodes += st.closure_nodes;
            stats.candidates_checked += st.candidates_checked;
            stats.layer_log.extend(st.layer_log);
            if let Verdict::Yes(Certificate::SetIndices(idx)) = verdict {
                let cert = lift_expanded_partition(&expanded, &idx, &reduced, &kept);
                if verify_cover(inst, &cert) {
                    return Ok((Verdict::Yes(Certificate::SetIndices(cert)), stats));
                }
                debug_assert!(false, "lifted cover certificate failed verification");
            }
        }
    }

    // Stage 3: small solutions. Fix the first floor(n/2) elements; a cover
    // of size at most s exists whenever the two halves' minimum covers fit
    // the budget together.
    let x_mask = universe_mask(n / 2);
    let left = min_cover_certificate_on_sub_universe(&reduced, x_mask)?;
    let right = min_cover_certificate_on_sub_universe(&reduced, inst.universe_mask() ^ x_mask)?;
    if let (Some((ls, lc)), Some((rs, rc))) = (left, right) {
        if ls + rs <= s {
            let mut cert: Vec<usize> = lc.into_iter().chain(rc).map(|j| kept[j]).collect();
            cert.sort_unstable();
            cert.dedup();
            if verify_cover(inst, &cert) {
                return Ok((Verdict::Yes(Certificate::SetIndices(cert)), stats));
            }
            debug_assert!(false, "half-split cover certificate failed verification");
        }
    }
    Ok((Verdict::No, stats))
}

/// Map a partition of the subset-closed family back to original set
/// indices: each non-empty chosen mask lies below some surviving set, which
/// in turn carries its original index.
fn lift_expanded_partition(
    expanded: &SetSystemInstance,
    chosen: &[usize],
    reduced: &SetSystemInstance,
    kept: &[usize],
) -> Vec<usize> {
    let mut cert: Vec<usize> = chosen
        .iter()
        .map(|&i| expanded.set(i))
        .filter(|&mask| mask != 0)
        .map(|mask| {
            let j = (0..reduced.m())
                .find(|&j| mask & !reduced.set(j) == 0)
                .expect("closure member lies below a family set");
            kept[j]
        })
        .collect();
    cert.sort_unstable();
    cert.dedup();
    cert
}

/// Exact-size partition search against a membership oracle, with the
/// small-set hypothesis spot-checked before sampling: the oracle must
/// reject the empty set and (statistically) every set larger than the size
/// cutoff. `s > n` is an immediate NO because that many disjoint non-empty
/// sets cannot fit.
pub fn solve_partition_oracle(
    oracle: &dyn SetOracle,
    s: usize,
    seed: &RandomSeed,
) -> Result<Verdict> {
    Ok(solve_partition_oracle_with_stats(oracle, s, seed)?.0)
}

pub fn solve_partition_oracle_with_stats(
    oracle: &dyn SetOracle,
    s: usize,
    seed: &RandomSeed,
) -> Result<(Verdict, SampleStats)> {
    let n = oracle.n();
    let mut stats = SampleStats::default();
    if s > n {
        return Ok((Verdict::No, stats));
    }
    if n == 0 {
        return Ok((Verdict::Yes(Certificate::SetMasks(Vec::new())), stats));
    }
    if s == 0 {
        return Ok((Verdict::No, stats));
    }
    if n > SAMPLED_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "sampling solvers limited to n <= {SAMPLED_MAX_N}; got n={n}"
        )));
    }
    let sigma = s as f64 / n as f64;
    let cutoff = size_threshold(sigma, n, 8.0);

    // Hypothesis spot-check: the empty set must be rejected, and so must
    // every probed set larger than the cutoff (the universe determinist-
    // ically, then random supersized probes).
    stats.oracle_queries += 1;
    if oracle.contains_set(0) {
        return Err(Error::HypothesisViolation(
            "oracle accepts the empty set".into(),
        ));
    }
    let u = universe_mask(n);
    if n > cutoff {
        stats.oracle_queries += 1;
        if oracle.contains_set(u) {
            return Err(Error::HypothesisViolation(format!(
                "oracle accepts the whole universe, which exceeds the size cutoff {cutoff}"
            )));
        }
        let mut rng = seed.derive(SPOT_CHECK_STREAM).rng();
        let mut elements: Vec<usize> = (0..n).collect();
        for _ in 0..SPOT_CHECK_PROBES {
            let size = rng.random_range(cutoff + 1..=n);
            use rand::seq::SliceRandom;
            elements.shuffle(&mut rng);
            let mask = elements[..size]
                .iter()
                .fold(0u64, |acc, &e| acc | 1u64 << e);
            stats.oracle_queries += 1;
            if oracle.contains_set(mask) {
                return Err(Error::HypothesisViolation(format!(
                    "oracle accepts a set of size {size}, above the size cutoff {cutoff}"
                )));
            }
        }
    }

    let sched = schedule_for_sigma_clamped(sigma, n)?;
    let (verdict, inner) = solve_partition_sampled_oracle_with_stats(oracle, s, &sched, seed)?;
    stats.passes = inner.passes;
    stats.layers_visited = inner.layers_visited;
    stats.sets_sampled = inner.sets_sampled;
    stats.closure_nodes = inner.closure_nodes;
    stats.oracle_queries += inner.oracle_queries;
    stats.candidates_checked = inner.candidates_checked;
    stats.layer_log = inner.layer_log;
    Ok((verdict, stats))
}

/// Membership oracle for the family of non-empty independent sets of a
/// graph, as used by the coloring decision.
#[derive(Debug, Clone)]
pub struct IndependentSetOracle<'a> {
    g: &'a SimpleGraph,
}

impl<'a> IndependentSetOracle<'a> {
    pub fn new(g: &'a SimpleGraph) -> Self {
        IndependentSetOracle { g }
    }
}

impl SetOracle for IndependentSetOracle<'_> {
    fn n(&self) -> usize {
        self.g.n()
    }

    fn contains_set(&self, mask: u64) -> bool {
        mask != 0 && self.g.is_independent(mask)
    }
}

fn induced_subgraph(g: &SimpleGraph, keep: u64) -> (SimpleGraph, Vec<usize>) {
    let old_ids: Vec<usize> = (0..g.n()).filter(|&v| keep & (1 << v) != 0).collect();
    let mut sub = SimpleGraph::new(old_ids.len()).expect("induced subgraph is no larger");
    for (a, &va) in old_ids.iter().enumerate() {
        for (b, &vb) in old_ids.iter().enumerate().skip(a + 1) {
            if g.adj(va) & (1 << vb) != 0 {
                sub.add_edge(a, b).expect("relabeled edge is valid");
            }
        }
    }
    (sub, old_ids)
}

/// One-sided coloring decision: NO is always correct (more colors than `s`
/// are provably needed); YES is correct and carries a verified class
/// decomposition, found with constant probability when strictly fewer than
/// `s` colors suffice. At the exact boundary either answer may come back.
///
/// Strategy: if some independent set of size `tau` (the partition size
/// cutoff) exists, remove it and decide `s - 1` colors exactly on the rest;
/// otherwise every independent set is small, so the independent-set oracle
/// satisfies the partition solver's hypothesis and the sampled oracle
/// solver decides a partition into `s` independent sets.
pub fn chromatic_decision(g: &SimpleGraph, s: usize, seed: &RandomSeed) -> Result<Verdict> {
    let n = g.n();
    if n > SAMPLED_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "coloring decision limited to n <= {SAMPLED_MAX_N}; got n={n}"
        )));
    }
    if n == 0 {
        return Ok(Verdict::Yes(Certificate::SetMasks(Vec::new())));
    }
    if s == 0 {
        return Ok(Verdict::No);
    }
    if s >= n {
        // n singleton classes always fit.
        let classes: Vec<u64> = (0..n).map(|v| 1u64 << v).collect();
        debug_assert!(verify_coloring(g, &classes, s));
        return Ok(Verdict::Yes(Certificate::SetMasks(classes)));
    }
    let sigma = s as f64 / n as f64;
    let tau = size_threshold(sigma, n, 8.0);
    let mut found: Option<u64> = None;
    for_each_k_subset(n, tau, |mask| {
        if found.is_none() && g.is_independent(mask) {
            found = Some(mask);
        }
    });
    if let Some(ind) = found {
        // Removing an independent set changes the number of colors needed
        // by at most one, so deciding s - 1 colors on the rest is exact on
        // both sides of the boundary.
        let (sub, old_ids) = induced_subgraph(g, g.vertex_mask() ^ ind);
        return Ok(match k_coloring_classes(&sub, s - 1)? {
            Some(sub_classes) => {
                let mut classes: Vec<u64> = sub_classes
                    .iter()
                    .map(|&c| {
                        let mut mapped = 0u64;
                        for (a, &va) in old_ids.iter().enumerate() {
                            if c & (1 << a) != 0 {
                                mapped |= 1 << va;
                            }
                        }
                        mapped
                    })
                    .collect();
                classes.push(ind);
                debug_assert!(verify_coloring(g, &classes, s));
                Verdict::Yes(Certificate::SetMasks(classes))
            }
            None => Verdict::No,
        });
    }
    // No independent set of size tau at all: the independent-set family
    // satisfies the small-set hypothesis, so partition the vertices into s
    // independent sets via the oracle solver.
    let oracle = IndependentSetOracle::new(g);
    let verdict = solve_partition_oracle(&oracle, s, seed)?;
    if let Verdict::Yes(Certificate::SetMasks(classes)) = &verdict {
        debug_assert!(verify_coloring(g, classes, s));
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{
        brute_force_chromatic, brute_force_set_cover, brute_force_set_partition,
        generate_random_instance, masks_from_elements, GeneratorParams,
    };
    use crate::lattice::ExplicitFamilyOracle;

    fn inst(n: usize, sets: &[&[usize]], s: usize) -> SetSystemInstance {
        SetSystemInstance::new(n, masks_from_elements(sets), s).unwrap()
    }

    fn singleton_instance(n: usize) -> SetSystemInstance {
        let sets: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        SetSystemInstance::new(n, sets, n).unwrap()
    }

    #[test]
    fn sampled_family_is_deterministic_and_sized() {
        let seed = RandomSeed::new(7).derive(0).derive(4);
        let a = SampledFamily::sample(8, 4, 0.25, &seed);
        let b = SampledFamily::sample(8, 4, 0.25, &seed);
        assert_eq!(a.members, b.members);
        assert!(a.members.iter().all(|w| w.count_ones() == 4));
        for (w, c) in a.members.iter().zip(&a.complements) {
            assert_eq!(w | c, universe_mask(8));
            assert_eq!(w & c, 0);
        }
    }

    #[test]
    fn planted_singletons_found_often() {
        let instance = singleton_instance(8);
        let sched = schedule_for_sigma_clamped(1.0, 8).unwrap();
        let mut yes = 0;
        for seed in 0..100u64 {
            let verdict =
                solve_partition_sampled(&instance, &sched, &RandomSeed::new(seed)).unwrap();
            if let Verdict::Yes(Certificate::SetIndices(idx)) = &verdict {
                assert!(verify_partition(&instance, idx));
                yes += 1;
            }
        }
        assert!(yes >= 60, "only {yes}/100 seeds found the partition");
    }

    #[test]
    fn one_big_set_never_splits_in_two() {
        let instance = inst(8, &[&[0, 1, 2, 3, 4, 5, 6, 7]], 2);
        let sched = schedule_for_sigma_clamped(0.25, 8).unwrap();
        for seed in 0..20u64 {
            let verdict =
                solve_partition_sampled(&instance, &sched, &RandomSeed::new(seed)).unwrap();
            assert_eq!(verdict, Verdict::No, "seed {seed}");
        }
    }

    #[test]
    fn vacuous_sample_is_sound() {
        let instance = singleton_instance(8);
        let mut sched = schedule_for_sigma_clamped(1.0, 8).unwrap();
        sched.sample_rate = 0.0; // every layer draws an empty sample
        sched.repeats = 3;
        let (verdict, stats) =
            solve_partition_sampled_with_stats(&instance, &sched, &RandomSeed::new(1)).unwrap();
        assert_eq!(verdict, Verdict::No);
        assert_eq!(stats.sets_sampled, 0);
        assert_eq!(stats.closure_nodes, 0);
    }

    #[test]
    fn single_listed_empty_set_cannot_serve_both_sides() {
        // Family {0}, {1}, {} over two elements at target 4: three distinct
        // sets can never make four, but each half-split locally completes
        // using the one empty set. The solver must still answer NO.
        let instance = SetSystemInstance::new_allowing_empty(2, vec![0b01, 0b10, 0], 4).unwrap();
        let sched = ParamSchedule {
            sigma: 1.0,
            sigma0: 1.0,
            zeta: 0.0,
            beta: 0.25,
            sample_rate: 1.0,
            repeats: 2,
            n: 2,
        };
        let (verdict, stats) =
            solve_partition_sampled_with_stats(&instance, &sched, &RandomSeed::new(3)).unwrap();
        assert_eq!(verdict, Verdict::No);
        assert!(stats.candidates_checked > 0, "the DP bits should fire");
    }

    #[test]
    fn empty_sets_pad_when_distinct_copies_exist() {
        let instance = SetSystemInstance::new_allowing_empty(2, vec![0b01, 0b10, 0, 0], 4).unwrap();
        let sched = ParamSchedule {
            sigma: 1.0,
            sigma0: 1.0,
            zeta: 0.0,
            beta: 0.25,
            sample_rate: 1.0,
            repeats: 2,
            n: 2,
        };
        let verdict = solve_partition_sampled(&instance, &sched, &RandomSeed::new(3)).unwrap();
        match verdict {
            Verdict::Yes(Certificate::SetIndices(idx)) => {
                assert!(verify_partition(&instance, &idx));
            }
            other => panic!("expected YES, got {other:?}"),
        }
    }

    #[test]
    fn oracle_and_explicit_agree_on_shared_seeds() {
        let params = GeneratorParams {
            n: 8,
            m: 6,
            max_set_size: 3,
            planted: true,
            s: 3,
        };
        let mut disagreements = 0;
        for seed in 0..50u64 {
            let instance =
                generate_random_instance(&params, &RandomSeed::new(1000 + seed)).unwrap();
            if instance.has_empty_sets() {
                continue;
            }
            let sigma0 = instance.s() as f64 / instance.n() as f64;
            let sched = schedule_for_sigma_clamped(sigma0, instance.n()).unwrap();
            let run_seed = RandomSeed::new(seed);
            let explicit = solve_partition_sampled(&instance, &sched, &run_seed).unwrap();
            let oracle = ExplicitFamilyOracle::new(instance.n(), instance.sets());
            let by_oracle =
                solve_partition_sampled_oracle(&oracle, instance.s(), &sched, &run_seed).unwrap();
            if explicit.is_yes() != by_oracle.is_yes() {
                disagreements += 1;
            }
            if let Verdict::Yes(Certificate::SetMasks(masks)) = &by_oracle {
                assert!(verify_mask_partition(instance.n(), masks, instance.s()));
                assert!(masks.iter().all(|m| instance.sets().contains(m)));
            }
        }
        assert_eq!(disagreements, 0);
    }

    #[test]
    fn oracle_always_false_is_no() {
        struct Never;
        impl SetOracle for Never {
            fn n(&self) -> usize {
                8
            }
            fn contains_set(&self, _mask: u64) -> bool {
                false
            }
        }
        let sched = schedule_for_sigma_clamped(0.5, 8).unwrap();
        let verdict =
            solve_partition_sampled_oracle(&Never, 4, &sched, &RandomSeed::new(0)).unwrap();
        assert_eq!(verdict, Verdict::No);
    }

    #[test]
    fn oracle_whole_universe_only_is_no() {
        // The layer window never includes l = n, so the full universe is
        // never sampled and the single member is unusable.
        let oracle = ExplicitFamilyOracle::new(8, &[universe_mask(8)]);
        let sched = schedule_for_sigma_clamped(0.125, 8).unwrap();
        for seed in 0..10u64 {
            let verdict =
                solve_partition_sampled_oracle(&oracle, 1, &sched, &RandomSeed::new(seed)).unwrap();
            assert_eq!(verdict, Verdict::No, "seed {seed}");
        }
    }

    #[test]
    fn large_cover_planted_instance_found_often() {
        // Eight singletons: no set exceeds the cutoff, so the verdict comes
        // from the sampled stage.
        let instance = singleton_instance(8);
        assert!(brute_force_set_cover(&instance).unwrap().is_yes());
        let mut yes = 0;
        for seed in 0..100u64 {
            let verdict = solve_large_cover(&instance, 1.0, &RandomSeed::new(seed)).unwrap();
            if let Verdict::Yes(Certificate::SetIndices(idx)) = &verdict {
                assert!(verify_cover(&instance, idx));
                yes += 1;
            }
        }
        assert!(yes >= 60, "only {yes}/100 seeds found the cover");
    }

    #[test]
    fn large_cover_with_decoys_verifies_certificates() {
        let params = GeneratorParams {
            n: 8,
            m: 12,
            max_set_size: 4,
            planted: true,
            s: 8,
        };
        let mut yes = 0;
        for seed in 0..100u64 {
            let instance =
                generate_random_instance(&params, &RandomSeed::new(7_000 + seed)).unwrap();
            assert!(brute_force_set_cover(&instance).unwrap().is_yes());
            let verdict = solve_large_cover(&instance, 1.0, &RandomSeed::new(seed)).unwrap();
            if let Verdict::Yes(Certificate::SetIndices(idx)) = &verdict {
                assert!(verify_cover(&instance, idx), "seed {seed}");
                yes += 1;
            }
        }
        assert!(yes >= 60, "only {yes}/100 seeds accepted");
    }

    #[test]
    fn large_cover_big_set_small_budget_is_deterministic_yes() {
        let instance = inst(8, &[&[0, 1, 2, 3, 4, 5, 6, 7]], 4);
        for seed in 0..10u64 {
            let verdict = solve_large_cover(&instance, 0.5, &RandomSeed::new(seed)).unwrap();
            match verdict {
                Verdict::Yes(Certificate::SetIndices(idx)) => {
                    assert!(verify_cover(&instance, &idx));
                }
                other => panic!("expected YES, got {other:?} on seed {seed}"),
            }
        }
    }

    #[test]
    fn large_cover_uncoverable_element_is_always_no() {
        // Element 7 appears in no set.
        let sets: Vec<u64> = (0..7).map(|i| 1u64 << i).collect();
        let instance = SetSystemInstance::new(8, sets, 4).unwrap();
        for seed in 0..20u64 {
            let verdict = solve_large_cover(&instance, 0.5, &RandomSeed::new(seed)).unwrap();
            assert_eq!(verdict, Verdict::No, "seed {seed}");
        }
    }

    #[test]
    fn large_cover_validates_density() {
        let instance = singleton_instance(8);
        let err = solve_large_cover(&instance, 0.3, &RandomSeed::new(0)).unwrap_err();
        assert!(matches!(err, Error::InfeasibleParams(_)));
    }

    #[test]
    fn partition_oracle_planted_singletons() {
        let sets: Vec<u64> = (0..8).map(|i| 1u64 << i).collect();
        let oracle = ExplicitFamilyOracle::new(8, &sets);
        let mut yes = 0;
        for seed in 0..100u64 {
            let verdict = solve_partition_oracle(&oracle, 8, &RandomSeed::new(seed)).unwrap();
            if let Verdict::Yes(Certificate::SetMasks(masks)) = &verdict {
                assert!(verify_mask_partition(8, masks, 8));
                yes += 1;
            }
        }
        assert!(yes >= 60, "only {yes}/100 seeds accepted");
    }

    #[test]
    fn partition_oracle_spot_check_catches_huge_sets() {
        let oracle = ExplicitFamilyOracle::new(8, &[universe_mask(8)]);
        let err = solve_partition_oracle(&oracle, 4, &RandomSeed::new(0)).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation(_)));
    }

    #[test]
    fn partition_oracle_pigeonhole_rejects_oversized_targets() {
        let sets: Vec<u64> = (0..8).map(|i| 1u64 << i).collect();
        let oracle = ExplicitFamilyOracle::new(8, &sets);
        let verdict = solve_partition_oracle(&oracle, 9, &RandomSeed::new(0)).unwrap();
        assert_eq!(verdict, Verdict::No);
    }

    #[test]
    fn sampling_solvers_match_brute_force_no_instances() {
        let params = GeneratorParams {
            n: 8,
            m: 5,
            max_set_size: 2,
            planted: false,
            s: 3,
        };
        let mut checked = 0;
        for seed in 0..60u64 {
            let instance =
                generate_random_instance(&params, &RandomSeed::new(40_000 + seed)).unwrap();
            if brute_force_set_partition(&instance).unwrap().is_yes() {
                continue;
            }
            checked += 1;
            let verdict = solve_partition(&instance, &RandomSeed::new(seed)).unwrap();
            assert_eq!(verdict, Verdict::No, "seed {seed}");
        }
        assert!(checked >= 10, "too few NO instances sampled: {checked}");
    }

    #[test]
    fn partition_driver_trivial_sizes() {
        let empty_universe = SetSystemInstance::new(0, Vec::new(), 0).unwrap();
        assert!(solve_partition(&empty_universe, &RandomSeed::new(0))
            .unwrap()
            .is_yes());
        let zero_target = singleton_instance(4).with_target(0);
        assert_eq!(
            solve_partition(&zero_target, &RandomSeed::new(0)).unwrap(),
            Verdict::No
        );
        let oversized = singleton_instance(4).with_target(5);
        assert_eq!(
            solve_partition(&oversized, &RandomSeed::new(0)).unwrap(),
            Verdict::No
        );
    }

    #[test]
    fn chromatic_empty_graph_two_colors() {
        let g = SimpleGraph::new(6).unwrap();
        let verdict = chromatic_decision(&g, 2, &RandomSeed::new(0)).unwrap();
        match verdict {
            Verdict::Yes(Certificate::SetMasks(classes)) => {
                assert!(verify_coloring(&g, &classes, 2));
            }
            other => panic!("expected YES, got {other:?}"),
        }
    }

    #[test]
    fn chromatic_k4_two_colors_is_no() {
        let mut g = SimpleGraph::new(4).unwrap();
        for a in 0..4 {
            for b in (a + 1)..4 {
                g.add_edge(a, b).unwrap();
            }
        }
        assert_eq!(brute_force_chromatic(&g).unwrap(), 4);
        for seed in 0..10u64 {
            let verdict = chromatic_decision(&g, 2, &RandomSeed::new(seed)).unwrap();
            assert_eq!(verdict, Verdict::No, "seed {seed}");
        }
    }

    #[test]
    fn chromatic_boundary_does_not_crash() {
        let mut g = SimpleGraph::new(3).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g.add_edge(0, 2).unwrap();
        // Chromatic number equals the budget: either answer is in
        // contract, but a YES must carry a valid coloring.
        let verdict = chromatic_decision(&g, 3, &RandomSeed::new(0)).unwrap();
        if let Verdict::Yes(Certificate::SetMasks(classes)) = &verdict {
            assert!(verify_coloring(&g, classes, 3));
        }
    }

    #[test]
    fn chromatic_star_three_colors() {
        // A star is 2-chromatic, so s = 3 must say YES (strict side).
        let mut g = SimpleGraph::new(6).unwrap();
        for v in 1..6 {
            g.add_edge(0, v).unwrap();
        }
        let verdict = chromatic_decision(&g, 3, &RandomSeed::new(0)).unwrap();
        match verdict {
            Verdict::Yes(Certificate::SetMasks(classes)) => {
                assert!(verify_coloring(&g, &classes, 3));
            }
            other => panic!("expected YES, got {other:?}"),
        }
    }

    #[test]
    fn chromatic_matches_brute_force_off_boundary() {
        // Random graphs, both sides of the boundary, NO side checked on
        // every seed and YES side checked for certificate validity.
        use crate::instances::generate_random_graph;
        for seed in 0..30u64 {
            let g = generate_random_graph(7, 0.4, &RandomSeed::new(9_000 + seed)).unwrap();
            let chi = brute_force_chromatic(&g).unwrap();
            if chi > 1 {
                let verdict = chromatic_decision(&g, chi - 1, &RandomSeed::new(seed)).unwrap();
                assert_eq!(verdict, Verdict::No, "seed {seed} below chi");
            }
            let verdict = chromatic_decision(&g, chi + 1, &RandomSeed::new(seed)).unwrap();
            if let Verdict::Yes(Certificate::SetMasks(classes)) = &verdict {
                assert!(verify_coloring(&g, classes, chi + 1), "seed {seed}");
            }
        }
    }
}
