//! Dynamic-programming engines.
//!
//! Three engines live here:
//!
//! - the classic full-lattice minimum-cover table (`folklore_cover_dp` and
//!   its sub-universe variant), exponential in n and guarded accordingly;
//! - an exact-partition feasibility profile computed by a set-indexed
//!   recurrence restricted to a down-closure (`partition_profile_on_closure`);
//! - the same profile computed from a membership oracle through the counting
//!   pipeline in [`crate::lattice`] (`partition_profile_oracle`).
//!
//! A profile answers, for every mask W in a closure and every count i,
//! whether some i pairwise-disjoint family sets union exactly to W.

use crate::bits::universe_mask;
use crate::error::{Error, Result};
use crate::instances::{Certificate, SetSystemInstance, Verdict};
use crate::lattice::{
    moebius_on_closure, mul_rows_truncated, zeta_on_closure, DownClosure, LayeredTable, SetOracle,
    TableKind,
};

/// Memory guard for the full-lattice cover table (2^n one-byte entries).
pub const FOLKLORE_MAX_N: usize = 26;

const INFINITY: u8 = u8::MAX;

fn cover_table(n: usize, sets: &[u64]) -> Vec<u8> {
    let size = 1usize << n;
    let mut table = vec![INFINITY; size];
    table[0] = 0;
    for x in 1..size {
        let mut best = INFINITY;
        for &set in sets {
            if set & x as u64 == 0 {
                continue;
            }
            let prev = table[x & !(set as usize)];
            if prev != INFINITY && prev + 1 < best {
                best = prev + 1;
            }
        }
        table[x] = best;
    }
    table
}

fn backtrack_cover(n: usize, sets: &[u64], table: &[u8]) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut x = universe_mask(n) as usize;
    while x != 0 {
        let here = table[x];
        let j = (0..sets.len())
            .find(|&j| {
                sets[j] & x as u64 != 0 && {
                    let prev = table[x & !(sets[j] as usize)];
                    prev != INFINITY && prev + 1 == here
                }
            })
            .expect("a finite table entry always has a predecessor");
        chosen.push(j);
        x &= !(sets[j] as usize);
    }
    chosen.sort_unstable();
    chosen
}

/// Exact minimum-cover decision by the classic subset table: T[X] is the
/// least number of sets whose union contains X. YES iff T[U] <= s, with a
/// minimum cover backtracked as the certificate.
pub fn folklore_cover_dp(inst: &SetSystemInstance) -> Result<Verdict> {
    if inst.n() > FOLKLORE_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "full-lattice cover table limited to n <= {FOLKLORE_MAX_N}; got n={}",
            inst.n()
        )));
    }
    let table = cover_table(inst.n(), inst.sets());
    let full = universe_mask(inst.n()) as usize;
    if table[full] as usize <= inst.s() {
        let chosen = backtrack_cover(inst.n(), inst.sets(), &table);
        Ok(Verdict::Yes(Certificate::SetIndices(chosen)))
    } else {
        Ok(Verdict::No)
    }
}

/// Minimum number of sets covering exactly the elements of `x_mask`, with
/// every set first induced onto `x_mask` (intersected; empty intersections
/// discarded). `None` means impossible. The table is built over the induced
/// universe, so the guard applies to `|x_mask|`.
pub fn min_cover_on_sub_universe(inst: &SetSystemInstance, x_mask: u64) -> Result<Option<usize>> {
    Ok(min_cover_certificate_on_sub_universe(inst, x_mask)?.map(|(size, _)| size))
}

/// Like [`min_cover_on_sub_universe`] but also returns original set indices
/// achieving the minimum (one representative per induced image).
pub fn min_cover_certificate_on_sub_universe(
    inst: &SetSystemInstance,
    x_mask: u64,
) -> Result<Option<(usize, Vec<usize>)>> {
    if x_mask & !inst.universe_mask() != 0 {
        return Err(Error::InvalidInstance(
            "queried sub-universe leaves the instance universe".into(),
        ));
    }
    let k = x_mask.count_ones() as usize;
    if k > FOLKLORE_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "sub-universe cover table limited to {FOLKLORE_MAX_N} elements; got {k}"
        )));
    }
    if k == 0 {
        return Ok(Some((0, Vec::new())));
    }
    // Compress the elements of x_mask onto bits 0..k.
    let mut compress = [0usize; 64];
    let mut rest = x_mask;
    let mut next = 0usize;
    while rest != 0 {
        let b = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        compress[b] = next;
        next += 1;
    }
    // Induced images, deduplicated, each remembering one original index.
    let mut by_image: std::collections::HashMap<u64, usize> = std::collections::HashMap::new();
    for (j, &set) in inst.sets().iter().enumerate() {
        let mut cut = set & x_mask;
        if cut == 0 {
            continue;
        }
        let mut small = 0u64;
        while cut != 0 {
            let b = cut.trailing_zeros() as usize;
            cut &= cut - 1;
            small |= 1u64 << compress[b];
        }
        by_image.entry(small).or_insert(j);
    }
    let mut pairs: Vec<(u64, usize)> = by_image.into_iter().collect();
    pairs.sort_unstable();
    let induced: Vec<u64> = pairs.iter().map(|&(m, _)| m).collect();
    let table = cover_table(k, &induced);
    let full = universe_mask(k) as usize;
    if table[full] == INFINITY {
        return Ok(None);
    }
    let chosen = backtrack_cover(k, &induced, &table);
    let mut orig: Vec<usize> = chosen.into_iter().map(|c| pairs[c].1).collect();
    orig.sort_unstable();
    Ok(Some((table[full] as usize, orig)))
}

// ---------------------------------------------------------------------------
// Partition profiles
// ---------------------------------------------------------------------------

/// For every mask in a down-closure and every count i in 0..=n: whether some
/// i pairwise-disjoint family sets union exactly to the mask. Stored as one
/// bit per (position, i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionProfile {
    n: usize,
    words: Vec<u64>,
}

impl PartitionProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> usize {
        self.words.len()
    }

    /// Whether the mask at `pos` splits into exactly `i` disjoint family sets.
    pub fn can_partition(&self, pos: usize, i: usize) -> bool {
        i <= self.n && self.words[pos] & (1u64 << i) != 0
    }

    /// All feasible counts for `pos`, as a bitmask over i.
    pub fn feasible_counts(&self, pos: usize) -> u64 {
        self.words[pos]
    }
}

/// Computes the partition profile of an explicit family, restricted to a
/// down-closure: one sweep per family set over the closure, each position
/// keeping a bitset over i. Work is O(m * |closure|) word operations.
///
/// Family sets may repeat in the list without affecting the answer for
/// nonempty sets (two copies of a nonempty set are never disjoint). A listed
/// empty set can pad a partition once per copy; the oracle-driven variant
/// instead pads with unboundedly many copies, so the two agree on families
/// without empty sets.
pub fn partition_profile_on_closure(
    inst: &SetSystemInstance,
    dc: &DownClosure,
) -> Result<PartitionProfile> {
    if dc.n() != inst.n() {
        return Err(Error::TableMismatch(format!(
            "closure over n={} but instance over n={}",
            dc.n(),
            inst.n()
        )));
    }
    let n = inst.n();
    let ibits = universe_mask(n + 1); // valid i values: bits 0..=n
    let mut cur = vec![0u64; dc.len()];
    if let Some(p0) = dc.position(0) {
        cur[p0] = 1; // zero sets partition exactly the empty mask
    }
    for &set in inst.sets() {
        // Descending positions: a proper submask always sits at a smaller
        // index, so its slot still holds the previous sweep's value when
        // read; an empty set reads its own slot before writing it.
        for pos in (0..dc.len()).rev() {
            let mask = dc.mask(pos);
            if set & !mask != 0 {
                continue;
            }
            let sub = dc
                .position(mask & !set)
                .expect("down-closure contains every submask");
            let take = (cur[sub] << 1) & ibits;
            cur[pos] |= take;
        }
    }
    Ok(PartitionProfile { n, words: cur })
}

/// Computes the same profile from a membership oracle via the counting
/// pipeline: base indicators, zeta, incremental composition per i, Möbius,
/// then positivity at the layer x = |mask|. Composition tables are rolled,
/// so memory stays at a few tables regardless of n.
pub fn partition_profile_oracle(
    oracle: &dyn SetOracle,
    dc: &DownClosure,
) -> Result<PartitionProfile> {
    if oracle.n() != dc.n() {
        return Err(Error::TableMismatch(format!(
            "oracle over n={} but closure over n={}",
            oracle.n(),
            dc.n()
        )));
    }
    let n = dc.n();
    let mut words = vec![0u64; dc.len()];
    if let Some(p0) = dc.position(0) {
        words[p0] = 1;
    }
    if dc.is_empty() || n == 0 {
        return Ok(PartitionProfile { n, words });
    }
    let mut f = LayeredTable::zeros(dc.len(), n, TableKind::Base);
    for pos in 0..dc.len() {
        let mask = dc.mask(pos);
        if oracle.contains_set(mask) {
            f.set(pos, mask.count_ones() as usize, 1);
        }
    }
    let g = zeta_on_closure(dc, &f)?;
    let mut h = g.clone();
    let mut scratch = vec![0i64; n + 1];
    for i in 1..=n {
        if i > 1 {
            for pos in 0..dc.len() {
                mul_rows_truncated(h.row(pos), g.row(pos), &mut scratch)?;
                h.row_mut(pos).copy_from_slice(&scratch);
            }
        }
        let exact = moebius_on_closure(dc, &h)?;
        for (pos, word) in words.iter_mut().enumerate() {
            let x = dc.mask(pos).count_ones() as usize;
            if exact.get(pos, x) > 0 {
                *word |= 1u64 << i;
            }
        }
    }
    Ok(PartitionProfile { n, words })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{
        brute_force_set_cover, generate_random_instance, masks_from_elements, verify_cover,
        GeneratorParams, RandomSeed,
    };
    use crate::lattice::{down_closure, ExplicitFamilyOracle, SingletonOracle};
    use rand::Rng;

    fn inst(n: usize, sets: &[&[usize]], s: usize) -> SetSystemInstance {
        SetSystemInstance::new(n, masks_from_elements(sets), s).unwrap()
    }

    #[test]
    fn folklore_examples() {
        let i = inst(3, &[&[0, 1], &[1, 2], &[0]], 2);
        let v = folklore_cover_dp(&i).unwrap();
        assert!(v.is_yes());
        if let Verdict::Yes(Certificate::SetIndices(c)) = &v {
            assert!(verify_cover(&i, c));
        }
        assert!(brute_force_set_cover(&i).unwrap().is_yes());

        // Take-all instances are YES whenever the family covers U.
        let all = inst(4, &[&[0, 1], &[2], &[3]], 3);
        assert!(folklore_cover_dp(&all).unwrap().is_yes());

        // No sets, nonempty universe: NO at every target.
        let none = SetSystemInstance::new(2, vec![], 2).unwrap();
        assert_eq!(folklore_cover_dp(&none).unwrap(), Verdict::No);

        // Empty universe: the empty selection covers it.
        let empty = SetSystemInstance::new(0, vec![], 0).unwrap();
        assert!(folklore_cover_dp(&empty).unwrap().is_yes());
    }

    #[test]
    fn folklore_agrees_with_brute_force() {
        let mut count = 0;
        for seed in 0..60u64 {
            let root = RandomSeed::new(seed);
            let mut rng = root.derive(0).rng();
            let n = rng.random_range(1..=7);
            let m = rng.random_range(1..=8);
            let params = GeneratorParams {
                n,
                m,
                max_set_size: rng.random_range(1..=n),
                planted: false,
                s: 0,
            };
            let base = generate_random_instance(&params, &root.derive(1)).unwrap();
            for s in 0..=m {
                let i = base.with_target(s);
                let dp = folklore_cover_dp(&i).unwrap();
                let bf = brute_force_set_cover(&i).unwrap();
                assert_eq!(dp.is_yes(), bf.is_yes(), "seed {seed}, s={s}");
                if let Verdict::Yes(Certificate::SetIndices(c)) = &dp {
                    assert!(verify_cover(&i, c), "seed {seed}, s={s}");
                }
                count += 1;
            }
        }
        assert!(count > 300);
    }

    #[test]
    fn folklore_guard() {
        let i = SetSystemInstance::new(27, vec![1], 1).unwrap();
        assert!(matches!(
            folklore_cover_dp(&i).unwrap_err(),
            Error::GuardExceeded(_)
        ));
    }

    #[test]
    fn min_cover_examples() {
        let i = inst(4, &[&[0, 1], &[2, 3]], 1);
        assert_eq!(min_cover_on_sub_universe(&i, 0).unwrap(), Some(0));
        assert_eq!(min_cover_on_sub_universe(&i, 0b0011).unwrap(), Some(1));
        assert_eq!(min_cover_on_sub_universe(&i, 0b1111).unwrap(), Some(2));
        let j = inst(2, &[&[0]], 1);
        assert_eq!(min_cover_on_sub_universe(&j, 0b10).unwrap(), None);
        // Induction cuts sets down to X: {0,1} covers X={1} via its part.
        let k = inst(3, &[&[0, 1], &[1, 2]], 1);
        assert_eq!(min_cover_on_sub_universe(&k, 0b010).unwrap(), Some(1));
        assert!(min_cover_on_sub_universe(&k, 0b1000).is_err()); // outside U
    }

    #[test]
    fn min_cover_matches_folklore_on_full_universe() {
        for seed in 0..30u64 {
            let root = RandomSeed::new(100 + seed);
            let mut rng = root.derive(0).rng();
            let n = rng.random_range(1..=7);
            let m = rng.random_range(1..=8);
            let params = GeneratorParams {
                n,
                m,
                max_set_size: rng.random_range(1..=n),
                planted: false,
                s: 0,
            };
            let base = generate_random_instance(&params, &root.derive(1)).unwrap();
            let min = min_cover_on_sub_universe(&base, base.universe_mask()).unwrap();
            for s in 0..=m {
                let yes = folklore_cover_dp(&base.with_target(s)).unwrap().is_yes();
                assert_eq!(yes, min.is_some_and(|v| v <= s), "seed {seed}, s={s}");
            }
        }
    }

    #[test]
    fn profile_frozen_example() {
        let i = inst(2, &[&[0], &[1], &[0, 1]], 2);
        let dc = DownClosure::full_lattice(2).unwrap();
        let p = partition_profile_on_closure(&i, &dc).unwrap();
        let at = |mask: u64, k: usize| p.can_partition(dc.position(mask).unwrap(), k);
        assert!(at(0b11, 1));
        assert!(at(0b11, 2));
        assert!(!at(0b01, 2));
        assert!(at(0b01, 1));
        assert!(at(0b00, 0));
        assert!(!at(0b00, 1));
        assert!(!at(0b11, 0));
    }

    #[test]
    fn profile_on_restricted_closure() {
        let i = inst(3, &[&[0], &[1], &[2]], 3);
        let dc = down_closure(3, &[0]).unwrap(); // only the empty mask
        let p = partition_profile_on_closure(&i, &dc).unwrap();
        assert_eq!(p.positions(), 1);
        assert!(p.can_partition(0, 0));
        assert!(!p.can_partition(0, 1));
    }

    #[test]
    fn profile_mismatch_is_rejected() {
        let i = inst(2, &[&[0]], 1);
        let dc = DownClosure::full_lattice(3).unwrap();
        assert!(matches!(
            partition_profile_on_closure(&i, &dc).unwrap_err(),
            Error::TableMismatch(_)
        ));
    }

    /// Reference: brute-force partition of the sub-universe `w` into `i`
    /// sets drawn from `sets` (restricted to subsets of `w`).
    fn brute_partition_of(n: usize, sets: &[u64], w: u64, i: usize) -> bool {
        let usable: Vec<u64> = sets.iter().copied().filter(|&s| s & !w == 0).collect();
        if usable.len() > 20 {
            panic!("test helper limited to 20 usable sets");
        }
        for choice in 0u64..(1u64 << usable.len()) {
            if choice.count_ones() as usize != i {
                continue;
            }
            let mut union = 0u64;
            let mut total = 0u32;
            let mut rest = choice;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                union |= usable[j];
                total += usable[j].count_ones();
            }
            if union == w && total == w.count_ones() {
                return true;
            }
        }
        let _ = n;
        false
    }

    #[test]
    fn profile_matches_brute_force_on_random_instances() {
        for seed in 0..25u64 {
            let root = RandomSeed::new(200 + seed);
            let mut rng = root.derive(0).rng();
            let n = rng.random_range(2..=7);
            let m = rng.random_range(1..=9);
            let params = GeneratorParams {
                n,
                m,
                max_set_size: rng.random_range(1..=n),
                planted: false,
                s: 0,
            };
            let i = generate_random_instance(&params, &root.derive(1)).unwrap();
            let dc = DownClosure::full_lattice(n).unwrap();
            let p = partition_profile_on_closure(&i, &dc).unwrap();
            for pos in 0..dc.len() {
                for k in 0..=n {
                    assert_eq!(
                        p.can_partition(pos, k),
                        brute_partition_of(n, i.sets(), dc.mask(pos), k),
                        "seed {seed}, W={:#b}, i={k}",
                        dc.mask(pos)
                    );
                }
            }
        }
    }

    #[test]
    fn oracle_profile_agrees_with_explicit() {
        for seed in 0..20u64 {
            let root = RandomSeed::new(300 + seed);
            let mut rng = root.derive(0).rng();
            let n = rng.random_range(2..=8);
            let m = rng.random_range(1..=10);
            let params = GeneratorParams {
                n,
                m,
                max_set_size: rng.random_range(1..=n),
                planted: false,
                s: 0,
            };
            let i = generate_random_instance(&params, &root.derive(1)).unwrap();
            // Closure of five random subsets, as a nontrivial restriction.
            let members: Vec<u64> = (0..5)
                .map(|_| rng.random::<u64>() & i.universe_mask())
                .collect();
            let dc = down_closure(n, &members).unwrap();
            let explicit = partition_profile_on_closure(&i, &dc).unwrap();
            let oracle = ExplicitFamilyOracle::new(n, i.sets());
            let via_oracle = partition_profile_oracle(&oracle, &dc).unwrap();
            assert_eq!(explicit, via_oracle, "seed {seed}");
        }
    }

    #[test]
    fn oracle_profile_trivial_families() {
        let dc = DownClosure::full_lattice(4).unwrap();
        // Empty family: only c_0(emptyset).
        let nothing = ExplicitFamilyOracle::new(4, &[]);
        let p = partition_profile_oracle(&nothing, &dc).unwrap();
        for pos in 0..dc.len() {
            for i in 0..=4 {
                assert_eq!(p.can_partition(pos, i), dc.mask(pos) == 0 && i == 0);
            }
        }
        // Singletons: exactly i = |W| works.
        let singles = SingletonOracle { n: 4 };
        let p = partition_profile_oracle(&singles, &dc).unwrap();
        for pos in 0..dc.len() {
            let k = dc.mask(pos).count_ones() as usize;
            for i in 0..=4 {
                assert_eq!(p.can_partition(pos, i), i == k, "W={:#b}", dc.mask(pos));
            }
        }
    }

    #[test]
    fn empty_set_padding_semantics() {
        // One listed empty set pads an explicit-family partition exactly once.
        let sets = vec![0b11u64, 0u64];
        let i = SetSystemInstance::new_allowing_empty(2, sets, 0).unwrap();
        let dc = DownClosure::full_lattice(2).unwrap();
        let p = partition_profile_on_closure(&i, &dc).unwrap();
        let full = dc.position(0b11).unwrap();
        assert!(p.can_partition(full, 1)); // {0,1}
        assert!(p.can_partition(full, 2)); // {0,1} + one empty
        assert!(!p.can_partition(full, 3)); // no second empty listed
    }
}
