//! Instance-to-instance translations between the cover, partition, and
//! parity-system problems.
//!
//! Every function here maps a decision question on its input to a decision
//! question on its output and documents the exact correspondence. The
//! translations are used by the solvers to move an instance into the regime
//! a particular algorithm handles (small sets, solution size divisible by a
//! block width, tagged universes forcing a fixed solution size), and by the
//! test suite to cross-check solvers against each other.

use crate::dp_core::min_cover_certificate_on_sub_universe;
use crate::error::{Error, Result};
use crate::instances::{
    Certificate, LinSatInstance, ProblemMode, SetSystemInstance, Verdict, MAX_UNIVERSE,
};
use crate::lattice::down_closure;

/// Cap on `m^c`, the number of ordered tuples [`reduce_solution_size`] may
/// enumerate.
pub const TUPLE_GUARD: u64 = 1_000_000;

/// Cap on the number of unordered integer partitions [`partition_to_cover`]
/// may expand into separate instances.
pub const INTEGER_PARTITION_GUARD: u64 = 100_000;

/// Cap on the family size produced by [`cover_to_partition`].
pub const SUBSET_EXPANSION_GUARD: u64 = 1 << 22;

const EPS: f64 = 1e-9;

/// A partition of an integer `n` into a fixed number of positive parts,
/// stored in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerPartition {
    parts: Vec<usize>,
}

impl IntegerPartition {
    /// The parts, non-increasing, each positive.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// True when there are no parts (the unique partition of 0).
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// All partitions of `n` into exactly `k` positive parts, non-increasing
/// within each partition, ordered lexicographically descending (largest
/// first part first).
///
/// `integer_partitions(4, 2)` yields `[3,1]` then `[2,2]`.
pub fn integer_partitions(n: usize, k: usize) -> Vec<IntegerPartition> {
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(k);
    fn recurse(
        remaining: usize,
        parts_left: usize,
        max_part: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<IntegerPartition>,
    ) {
        if parts_left == 0 {
            if remaining == 0 {
                out.push(IntegerPartition {
                    parts: stack.clone(),
                });
            }
            return;
        }
        // Each remaining part is at least 1 and at most max_part; the first
        // (largest) must also cover its share: ceil(remaining / parts_left).
        let lo = remaining.div_ceil(parts_left);
        let hi = max_part.min(remaining.saturating_sub(parts_left - 1));
        for part in (lo..=hi).rev() {
            stack.push(part);
            recurse(remaining - part, parts_left - 1, part, stack, out);
            stack.pop();
        }
    }
    recurse(n, k, n, &mut stack, &mut out);
    out
}

/// Number of partitions of `n` into exactly `k` positive parts, computed by
/// the standard two-way recurrence (take a part equal to 1, or subtract 1
/// from every part).
pub fn count_integer_partitions(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    if k == 0 {
        return u64::from(n == 0);
    }
    let mut table = vec![vec![0u64; k + 1]; n + 1];
    table[0][0] = 1;
    for total in 1..=n {
        for parts in 1..=k.min(total) {
            table[total][parts] = table[total - 1][parts - 1]
                + if total >= parts {
                    table[total - parts][parts]
                } else {
                    0
                };
        }
    }
    table[n][k]
}

/// Replace the family by the unions of ordered `c`-tuples of its members,
/// dividing the target solution size by `c`.
///
/// Cover mode admits every tuple. Partition mode admits only tuples whose
/// members are pairwise disjoint (a repeated non-empty member is never
/// disjoint with itself, so such tuples drop out). Tuples are ordered and
/// their unions are kept with multiplicity: distinct tuples with equal
/// unions each contribute a copy, because downstream counting arguments
/// rely on those copies.
///
/// A cover (partition) of the output at size `s/c` exists iff one of the
/// input exists at size `s`: group the input solution into blocks of `c`
/// (padding cover blocks by repeating a set), or concatenate the tuples of
/// an output solution.
///
/// Errors: `c` must be positive and divide `s`; `m^c` must stay within
/// [`TUPLE_GUARD`].
pub fn reduce_solution_size(
    inst: &SetSystemInstance,
    c: usize,
    mode: ProblemMode,
) -> Result<SetSystemInstance> {
    if c == 0 {
        return Err(Error::InfeasibleParams(
            "tuple width must be positive".into(),
        ));
    }
    if !inst.s().is_multiple_of(c) {
        return Err(Error::InfeasibleParams(format!(
            "tuple width {} does not divide the target size {}",
            c,
            inst.s()
        )));
    }
    let m = inst.m() as u64;
    let mut tuple_count: u64 = 1;
    for _ in 0..c {
        tuple_count = tuple_count.saturating_mul(m);
        if tuple_count > TUPLE_GUARD {
            return Err(Error::GuardExceeded(format!(
                "{}^{} ordered tuples exceed the cap of {}",
                m, c, TUPLE_GUARD
            )));
        }
    }
    let mut unions: Vec<u64> = Vec::new();
    let mut tuple = vec![0usize; c];
    'outer: loop {
        // Evaluate the current tuple.
        let mut union = 0u64;
        let mut disjoint = true;
        for &j in &tuple {
            let set = inst.set(j);
            if union & set != 0 {
                disjoint = false;
            }
            union |= set;
        }
        if mode == ProblemMode::Cover || disjoint {
            unions.push(union);
        }
        // Odometer increment over [0, m)^c.
        for slot in (0..c).rev() {
            tuple[slot] += 1;
            if tuple[slot] < inst.m() {
                continue 'outer;
            }
            tuple[slot] = 0;
        }
        break;
    }
    let target = inst.s() / c;
    if unions.contains(&0) || inst.allows_empty() {
        SetSystemInstance::new_allowing_empty(inst.n(), unions, target)
    } else {
        SetSystemInstance::new(inst.n(), unions, target)
    }
}

/// Result of [`remove_large_sets`]: either the question was answered on the
/// spot, or a reduced instance (with the surviving sets and their original
/// indices) remains to be solved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LargeSetOutcome {
    /// Some large set belongs to a cover within budget; the verdict carries
    /// the witness indices into the *original* family.
    Resolved(Verdict),
    /// No large set can participate in a solution; they have been deleted.
    Reduced {
        inst: SetSystemInstance,
        /// Original index of each surviving set, parallel to the reduced
        /// family.
        kept: Vec<usize>,
    },
}

/// Handle every set of size at least `eps * n`: if any of them extends to a
/// cover of size at most `s` (checked exactly on the complement of the set),
/// answer YES immediately; otherwise no such set can appear in a minimum
/// cover of size `<= s`, so they are all deleted.
pub fn remove_large_sets(inst: &SetSystemInstance, eps: f64) -> Result<LargeSetOutcome> {
    // NaN must be rejected too, so the comparison cannot be `eps <= 0.0`.
    if eps.is_nan() || eps <= 0.0 || eps >= 1.0 + EPS {
        return Err(Error::InfeasibleParams(format!(
            "size fraction must lie in (0, 1]; got {eps}"
        )));
    }
    let threshold = eps * inst.n() as f64 - EPS;
    remove_sets_of_size(inst, |size| (size as f64) >= threshold)
}

/// Like [`remove_large_sets`] but with an integer cutoff: sets of size
/// strictly greater than `threshold` are the large ones. Solvers use this
/// form so that a floor-at-one cutoff keeps singletons in play.
pub fn remove_sets_larger_than(
    inst: &SetSystemInstance,
    threshold: usize,
) -> Result<LargeSetOutcome> {
    remove_sets_of_size(inst, |size| size > threshold)
}

fn remove_sets_of_size(
    inst: &SetSystemInstance,
    is_large: impl Fn(usize) -> bool,
) -> Result<LargeSetOutcome> {
    let universe = inst.universe_mask();
    for (j, &set) in inst.sets().iter().enumerate() {
        if !is_large(set.count_ones() as usize) {
            continue;
        }
        if inst.s() == 0 {
            continue; // No budget for the set itself.
        }
        // Does some cover of size <= s contain this set? Equivalently: can
        // the rest of the universe be covered with s - 1 sets?
        if let Some((size, mut indices)) =
            min_cover_certificate_on_sub_universe(inst, universe & !set)?
        {
            if size < inst.s() {
                if !indices.contains(&j) {
                    indices.push(j);
                }
                indices.sort_unstable();
                return Ok(LargeSetOutcome::Resolved(Verdict::Yes(
                    Certificate::SetIndices(indices),
                )));
            }
        }
    }
    let mut sets = Vec::new();
    let mut kept = Vec::new();
    for (j, &set) in inst.sets().iter().enumerate() {
        if !is_large(set.count_ones() as usize) {
            sets.push(set);
            kept.push(j);
        }
    }
    let reduced = if inst.allows_empty() {
        SetSystemInstance::new_allowing_empty(inst.n(), sets, inst.s())?
    } else {
        SetSystemInstance::new(inst.n(), sets, inst.s())?
    };
    Ok(LargeSetOutcome::Reduced {
        inst: reduced,
        kept,
    })
}

/// Close the family under taking subsets (including the empty set), turning
/// a cover question into a partition question at the same target size: any
/// cover shrinks to a partition by removing overlaps, and any partition is a
/// cover by sets below the original family.
///
/// Requires every set to have size at most `eps * n` so the expansion stays
/// within `m * 2^(eps*n)`; the deduplicated output is checked against
/// [`SUBSET_EXPANSION_GUARD`].
pub fn cover_to_partition(inst: &SetSystemInstance, eps: f64) -> Result<SetSystemInstance> {
    // NaN must be rejected too, so the comparison cannot be `eps <= 0.0`.
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InfeasibleParams(format!(
            "size fraction must be positive; got {eps}"
        )));
    }
    let cap = eps * inst.n() as f64 + EPS;
    if let Some(&big) = inst.sets().iter().find(|set| set.count_ones() as f64 > cap) {
        return Err(Error::HypothesisViolation(format!(
            "a set of size {} exceeds the size cap {:.3}; remove large sets first",
            big.count_ones(),
            eps * inst.n() as f64
        )));
    }
    let bound = (inst.m() as f64) * (eps * inst.n() as f64).exp2();
    if bound > SUBSET_EXPANSION_GUARD as f64 {
        return Err(Error::GuardExceeded(format!(
            "subset expansion bound {bound:.0} exceeds the cap of {SUBSET_EXPANSION_GUARD}"
        )));
    }
    let closure = down_closure(inst.n(), inst.sets())?;
    let masks = closure.masks().to_vec();
    debug_assert!((masks.len() as f64) <= bound + 1.0);
    SetSystemInstance::new_allowing_empty(inst.n(), masks, inst.s())
}

/// Output of [`partition_to_cover`]: one cover instance per integer
/// partition of the universe size, plus the bookkeeping needed to interpret
/// answers.
#[derive(Debug, Clone)]
pub struct PartitionToCover {
    /// One cover instance per admissible integer partition; the original
    /// partition question is YES iff at least one of these is YES.
    pub instances: Vec<SetSystemInstance>,
    /// The integer partition behind each instance, parallel to `instances`.
    pub shapes: Vec<IntegerPartition>,
    /// Target size of every emitted instance.
    pub target: usize,
    /// Tuple width used to shrink the solution size.
    pub block: usize,
}

/// Turn a partition question into a disjunction of cover questions with a
/// small target (`s' ~ eps/2 * s`), by (1) padding the target up to a
/// multiple of `c = ceil(2/eps)` with forced dummy element/set pairs,
/// (2) grouping sets into disjoint `c`-tuples via [`reduce_solution_size`],
/// and (3) for every partition of the padded universe size into `s'`
/// positive parts, tagging each set whose size matches a part with a fresh
/// per-part element. A tagged cover of size `s'` must pick exactly one set
/// per tag, and matching sizes force total size `n`, hence disjointness.
///
/// Empty sets are rejected: they can never participate in an exact
/// partition question translated this way.
pub fn partition_to_cover(inst: &SetSystemInstance, eps: f64) -> Result<PartitionToCover> {
    // NaN must be rejected too, so the comparison cannot be `eps <= 0.0`.
    if eps.is_nan() || eps <= 0.0 || eps > 2.0 + EPS {
        return Err(Error::InfeasibleParams(format!(
            "target fraction must lie in (0, 2]; got {eps}"
        )));
    }
    if inst.has_empty_sets() {
        return Err(Error::HypothesisViolation(
            "empty sets cannot be tagged; drop them first".into(),
        ));
    }
    let c = (2.0 / eps).ceil() as usize;
    // Pad s to a multiple of c with dummy element/singleton pairs; each
    // dummy element is covered only by its own singleton, so every exact
    // partition of the padded instance uses all dummies.
    let pad = (c - inst.s() % c) % c;
    let n_padded = inst.n() + pad;
    let s_padded = inst.s() + pad;
    if n_padded > MAX_UNIVERSE {
        return Err(Error::GuardExceeded(format!(
            "padded universe of {n_padded} elements exceeds the cap of {MAX_UNIVERSE}"
        )));
    }
    let mut sets = inst.sets().to_vec();
    for d in 0..pad {
        sets.push(1u64 << (inst.n() + d));
    }
    let padded = SetSystemInstance::new(n_padded, sets, s_padded)?;
    let reduced = reduce_solution_size(&padded, c, ProblemMode::Partition)?;
    let target = s_padded / c;
    if n_padded + target > MAX_UNIVERSE {
        return Err(Error::GuardExceeded(format!(
            "tagged universe of {} elements exceeds the cap of {MAX_UNIVERSE}",
            n_padded + target
        )));
    }
    let shape_count = count_integer_partitions(n_padded, target);
    if shape_count > INTEGER_PARTITION_GUARD {
        return Err(Error::GuardExceeded(format!(
            "{shape_count} integer partitions exceed the cap of {INTEGER_PARTITION_GUARD}"
        )));
    }
    let shapes = integer_partitions(n_padded, target);
    let mut instances = Vec::with_capacity(shapes.len());
    for shape in &shapes {
        instances.push(tag_by_partition(&reduced, shape)?);
    }
    Ok(PartitionToCover {
        instances,
        shapes,
        target,
        block: c,
    })
}

/// Append one fresh tag element per part and emit, for every set whose size
/// equals a part, a copy of the set extended by that part's tag. The target
/// becomes the number of parts.
///
/// In the result, covers of size exactly `parts.len()` correspond to
/// systems of sets matching the part sizes and covering the universe; since
/// the sizes sum to the universe size, such a cover is forced to be a
/// partition of the original universe.
pub fn tag_by_partition(
    inst: &SetSystemInstance,
    shape: &IntegerPartition,
) -> Result<SetSystemInstance> {
    if shape.total() != inst.n() {
        return Err(Error::InfeasibleParams(format!(
            "partition sums to {} but the universe has {} elements",
            shape.total(),
            inst.n()
        )));
    }
    let k = shape.len();
    if inst.n() + k > MAX_UNIVERSE {
        return Err(Error::GuardExceeded(format!(
            "tagged universe of {} elements exceeds the cap of {MAX_UNIVERSE}",
            inst.n() + k
        )));
    }
    let mut sets = Vec::new();
    for &set in inst.sets() {
        let size = set.count_ones() as usize;
        for (i, &part) in shape.parts().iter().enumerate() {
            if part == size {
                sets.push(set | 1u64 << (inst.n() + i));
            }
        }
    }
    SetSystemInstance::new(inst.n() + k, sets, k)
}

/// Force every partition of the output to have size exactly
/// `floor(eps1 * (n + s))`: append one tag element per original solution
/// slot, replace each set by all of its tagged variants (so any chosen set
/// consumes exactly one tag), and pad the family with empty sets that make
/// up the difference.
///
/// Requires `s <= min(eps1, 1/2) * (n + s)`, which makes the forced size at
/// least `s`. The output is YES at its own target iff the input is YES at
/// `s`.
pub fn pad_partition_solution_size(
    inst: &SetSystemInstance,
    eps1: f64,
) -> Result<SetSystemInstance> {
    // NaN must be rejected too, so the comparison cannot be `eps1 <= 0.0`.
    if eps1.is_nan() || eps1 <= 0.0 || eps1 > 1.0 + EPS {
        return Err(Error::InfeasibleParams(format!(
            "target fraction must lie in (0, 1]; got {eps1}"
        )));
    }
    if inst.has_empty_sets() {
        return Err(Error::HypothesisViolation(
            "empty sets cannot be tagged; drop them first".into(),
        ));
    }
    let n_out = inst.n() + inst.s();
    if n_out > MAX_UNIVERSE {
        return Err(Error::GuardExceeded(format!(
            "tagged universe of {n_out} elements exceeds the cap of {MAX_UNIVERSE}"
        )));
    }
    let cap = eps1.min(0.5) * n_out as f64;
    if inst.s() as f64 > cap + EPS {
        return Err(Error::InfeasibleParams(format!(
            "target {} exceeds the padding cap {:.3} over a universe of {} elements",
            inst.s(),
            cap,
            n_out
        )));
    }
    let forced = (eps1 * n_out as f64 + EPS).floor() as usize;
    debug_assert!(forced >= inst.s());
    let mut sets = Vec::new();
    for &set in inst.sets() {
        for i in 0..inst.s() {
            sets.push(set | 1u64 << (inst.n() + i));
        }
    }
    sets.extend(std::iter::repeat_n(0u64, forced.saturating_sub(inst.s())));
    if forced > inst.s() {
        SetSystemInstance::new_allowing_empty(n_out, sets, forced)
    } else {
        SetSystemInstance::new(n_out, sets, forced)
    }
}

/// Encode a partition question as a minimum-cost parity system: columns are
/// the incidence vectors of the sets, the right-hand side is all-ones, and
/// set `f` costs `n * |f| + 1`.
///
/// Any 0/1 solution of the parity system covers every element an odd number
/// of times, so its sets have total size at least `n`, with equality
/// exactly for partitions. A partition into `k` sets costs `n^2 + k`, while
/// any non-partition solution costs at least `n^2 + 2n + 1`; the budget is
/// therefore set to `n^2 + n`, and the minimum cost below that budget
/// reveals the minimum partition size via [`linsat_cost_to_partition_size`].
pub fn partition_to_linsat(inst: &SetSystemInstance) -> Result<LinSatInstance> {
    if inst.has_empty_sets() {
        return Err(Error::HypothesisViolation(
            "empty sets cost 1 but change no parity; drop them first".into(),
        ));
    }
    let n = inst.n();
    let columns = inst.sets().to_vec();
    let weights: Vec<u64> = inst
        .sets()
        .iter()
        .map(|set| (n as u64) * u64::from(set.count_ones()) + 1)
        .collect();
    let budget = (n * n + n) as u64;
    LinSatInstance::new(n, columns, inst.universe_mask(), weights, budget)
}

/// Decode the cost of an optimal parity solution produced via
/// [`partition_to_linsat`] back into a partition size. Costs outside
/// `[n^2, n^2 + n]` do not correspond to partitions.
pub fn linsat_cost_to_partition_size(n: usize, cost: u128) -> Option<usize> {
    let base = (n * n) as u128;
    if cost >= base && cost <= base + n as u128 {
        Some((cost - base) as usize)
    } else {
        None
    }
}
