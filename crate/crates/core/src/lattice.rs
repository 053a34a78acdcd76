//! Down-closed subset families and exact counting transforms on them.
//!
//! The solvers in this crate never materialize the full 2^n subset lattice.
//! Instead they work on the *down-closure* of a (typically sampled) family
//! of subsets: every submask of every member. Because the closure is closed
//! under removing elements, the classic zeta and Möbius sweeps remain valid
//! when restricted to it, costing O(n·|closure|) per layer instead of
//! O(n·2^n).
//!
//! The counting pipeline implemented here turns a membership oracle for a
//! set family into exact tuple counts: for each subset X in the closure,
//! each tuple length i, and each total-size index x, the number of ordered
//! i-tuples of (distinct) family sets whose union is exactly X and whose
//! sizes sum to x. When x = |X| those tuples are pairwise disjoint, i.e.
//! exact partitions of X.

use std::collections::HashMap;

use crate::bits::{for_each_submask, universe_mask};
use crate::error::{Error, Result};
use crate::instances::MAX_UNIVERSE;

// ---------------------------------------------------------------------------
// Down-closures
// ---------------------------------------------------------------------------

/// All submasks of a family of subsets, deduplicated, ordered so that every
/// mask appears after all of its proper submasks (sorted by size, then
/// value), with an exact mask-to-position index.
#[derive(Debug, Clone)]
pub struct DownClosure {
    n: usize,
    masks: Vec<u64>,
    index: HashMap<u64, u32>,
}

impl DownClosure {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Masks sorted by (size, value); proper submasks always come earlier.
    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn mask(&self, pos: usize) -> u64 {
        self.masks[pos]
    }

    pub fn position(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).map(|&p| p as usize)
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.index.contains_key(&mask)
    }

    /// The full lattice over an n-element universe.
    pub fn full_lattice(n: usize) -> Result<Self> {
        down_closure(n, &[universe_mask(n)])
    }
}

/// Builds the down-closure of `family` over an `n`-element universe.
pub fn down_closure(n: usize, family: &[u64]) -> Result<DownClosure> {
    if n > MAX_UNIVERSE {
        return Err(Error::InvalidInstance(format!(
            "universe size {n} exceeds the cap of {MAX_UNIVERSE}"
        )));
    }
    let umask = universe_mask(n);
    for (i, &w) in family.iter().enumerate() {
        if w & !umask != 0 {
            return Err(Error::InvalidInstance(format!(
                "family member {i} contains elements outside the universe"
            )));
        }
    }
    let mut members: Vec<u64> = family.to_vec();
    members.sort_unstable();
    members.dedup();
    let mut masks = Vec::new();
    for &w in &members {
        for_each_submask(w, |sub| masks.push(sub));
    }
    masks.sort_unstable_by_key(|&m| (m.count_ones(), m));
    masks.dedup();
    let index = masks
        .iter()
        .enumerate()
        .map(|(pos, &m)| (m, pos as u32))
        .collect();
    Ok(DownClosure { n, masks, index })
}

/// Checks the closure-growth bound `|closure| <= n * 2^((1 - (zeta/2)^4) n)`
/// for a family of equal-size subsets. Under the stated parameter window the
/// bound is guaranteed, so this is a property-test harness: it should always
/// return true when the preconditions hold.
///
/// Requires `0 < zeta <= 1/4`, `2*sqrt(|beta|) <= zeta`, every family member
/// of size exactly `(1/2+beta)*n` (which must be integral), and at most
/// `2^((1-zeta)*n)` members.
pub fn closure_size_bound_check(n: usize, zeta: f64, beta: f64, family: &[u64]) -> Result<bool> {
    if !(zeta > 0.0 && zeta <= 0.25) {
        return Err(Error::InfeasibleParams(format!(
            "zeta must lie in (0, 1/4]; got {zeta}"
        )));
    }
    if 2.0 * beta.abs().sqrt() > zeta + 1e-12 {
        return Err(Error::InfeasibleParams(format!(
            "need 2*sqrt(|beta|) <= zeta; got beta={beta}, zeta={zeta}"
        )));
    }
    let target = (0.5 + beta) * n as f64;
    let k = target.round();
    if (target - k).abs() > 1e-9 {
        return Err(Error::InfeasibleParams(format!(
            "member size (1/2+beta)*n = {target} is not an integer"
        )));
    }
    let k = k as u32;
    for (i, &w) in family.iter().enumerate() {
        if w.count_ones() != k {
            return Err(Error::HypothesisViolation(format!(
                "family member {i} has size {}, expected {k}",
                w.count_ones()
            )));
        }
    }
    let max_members = ((1.0 - zeta) * n as f64).exp2();
    if family.len() as f64 > max_members * (1.0 + 1e-9) {
        return Err(Error::HypothesisViolation(format!(
            "family has {} members, allowed at most 2^((1-zeta)n) = {max_members:.1}",
            family.len()
        )));
    }
    let dc = down_closure(n, family)?;
    let bound = n as f64 * ((1.0 - (zeta / 2.0).powi(4)) * n as f64).exp2();
    Ok(dc.len() as f64 <= bound)
}

// ---------------------------------------------------------------------------
// Layered tables
// ---------------------------------------------------------------------------

/// What a [`LayeredTable`]'s entries mean; purely informational, set by the
/// transform that produced the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// Raw per-subset values (e.g. membership indicators split by size).
    Base,
    /// Each position holds the sum of base values over all of its submasks.
    SubsetSums,
    /// Size-indexed products of subset sums (ordered-tuple generating counts).
    Composed,
    /// Alternating-sum inversion: exact counts with union equal to the mask.
    ExactCounts,
}

/// A signed-integer value per (closure position, size index x ∈ 0..=n).
/// Rows (fixed position, all x) are contiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredTable {
    positions: usize,
    n: usize,
    kind: TableKind,
    values: Vec<i64>,
}

impl LayeredTable {
    pub fn zeros(positions: usize, n: usize, kind: TableKind) -> Self {
        Self {
            positions,
            n,
            kind,
            values: vec![0; positions * (n + 1)],
        }
    }

    pub fn positions(&self) -> usize {
        self.positions
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn get(&self, pos: usize, x: usize) -> i64 {
        self.values[pos * (self.n + 1) + x]
    }

    pub fn set(&mut self, pos: usize, x: usize, v: i64) {
        self.values[pos * (self.n + 1) + x] = v;
    }

    pub fn row(&self, pos: usize) -> &[i64] {
        &self.values[pos * (self.n + 1)..(pos + 1) * (self.n + 1)]
    }

    pub fn row_mut(&mut self, pos: usize) -> &mut [i64] {
        &mut self.values[pos * (self.n + 1)..(pos + 1) * (self.n + 1)]
    }

    fn check_matches(&self, dc: &DownClosure) -> Result<()> {
        if self.positions != dc.len() || self.n != dc.n() {
            return Err(Error::TableMismatch(format!(
                "table has {} positions over n={}, closure has {} positions over n={}",
                self.positions,
                self.n,
                dc.len(),
                dc.n()
            )));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Set oracles
// ---------------------------------------------------------------------------

/// Membership oracle for a set family over `{0,..,n-1}`: answers whether
/// some family member's element set equals the queried mask. Must be
/// deterministic. `cost_hint` is an accounting weight for work reports.
pub trait SetOracle {
    fn n(&self) -> usize;

    /// Whether the family contains a set whose elements are exactly `mask`.
    fn contains_set(&self, mask: u64) -> bool;

    /// Declared per-query cost used for work accounting only.
    fn cost_hint(&self) -> u64 {
        1
    }
}

/// Oracle backed by an explicit list of set masks.
#[derive(Debug, Clone)]
pub struct ExplicitFamilyOracle {
    n: usize,
    members: std::collections::HashSet<u64>,
}

impl ExplicitFamilyOracle {
    pub fn new(n: usize, sets: &[u64]) -> Self {
        Self {
            n,
            members: sets.iter().copied().collect(),
        }
    }
}

impl SetOracle for ExplicitFamilyOracle {
    fn n(&self) -> usize {
        self.n
    }

    fn contains_set(&self, mask: u64) -> bool {
        self.members.contains(&mask)
    }
}

/// Oracle for the family of all singletons; handy in tests, where tuple
/// counts against it have closed forms.
#[derive(Debug, Clone, Copy)]
pub struct SingletonOracle {
    pub n: usize,
}

impl SetOracle for SingletonOracle {
    fn n(&self) -> usize {
        self.n
    }

    fn contains_set(&self, mask: u64) -> bool {
        mask.count_ones() == 1
    }
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

fn overflow() -> Error {
    Error::CountOverflow
}

/// Subset-sum (zeta) transform restricted to a down-closure: the output at
/// position Y, layer x is the sum of input values over all submasks of Y at
/// layer x. One in-place sweep per universe element, ascending bit order.
pub fn zeta_on_closure(dc: &DownClosure, f: &LayeredTable) -> Result<LayeredTable> {
    f.check_matches(dc)?;
    let mut out = f.clone();
    out.kind = TableKind::SubsetSums;
    let width = dc.n() + 1;
    for j in 0..dc.n() {
        let bit = 1u64 << j;
        // Entries whose mask lacks bit j are read but never written in this
        // sweep, so updating in place is sound.
        for pos in 0..dc.len() {
            let mask = dc.mask(pos);
            if mask & bit == 0 {
                continue;
            }
            let sub = dc
                .position(mask & !bit)
                .expect("down-closure contains every submask");
            debug_assert!(sub < pos);
            let (lo, hi) = out.values.split_at_mut(pos * width);
            let src = &lo[sub * width..(sub + 1) * width];
            let dst = &mut hi[..width];
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = d.checked_add(s).ok_or_else(overflow)?;
            }
        }
    }
    Ok(out)
}

/// Alternating-sum (Möbius) inversion restricted to a down-closure: exactly
/// undoes [`zeta_on_closure`]. The output at position X, layer x is
/// `sum over Z subset of X of (-1)^|Z| * input(X minus Z, x)`.
pub fn moebius_on_closure(dc: &DownClosure, h: &LayeredTable) -> Result<LayeredTable> {
    h.check_matches(dc)?;
    let mut out = h.clone();
    out.kind = TableKind::ExactCounts;
    let width = dc.n() + 1;
    for j in 0..dc.n() {
        let bit = 1u64 << j;
        for pos in 0..dc.len() {
            let mask = dc.mask(pos);
            if mask & bit == 0 {
                continue;
            }
            let sub = dc
                .position(mask & !bit)
                .expect("down-closure contains every submask");
            let (lo, hi) = out.values.split_at_mut(pos * width);
            let src = &lo[sub * width..(sub + 1) * width];
            let dst = &mut hi[..width];
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = d.checked_sub(s).ok_or_else(overflow)?;
            }
        }
    }
    Ok(out)
}

/// Multiplies two size-indexed rows as polynomials in the size variable,
/// truncating above degree n.
pub(crate) fn mul_rows_truncated(a: &[i64], b: &[i64], out: &mut [i64]) -> Result<()> {
    out.fill(0);
    let n1 = out.len();
    for (i, &av) in a.iter().enumerate() {
        if av == 0 {
            continue;
        }
        for (j, &bv) in b.iter().enumerate() {
            if i + j >= n1 || bv == 0 {
                continue;
            }
            let prod = av.checked_mul(bv).ok_or_else(overflow)?;
            out[i + j] = out[i + j].checked_add(prod).ok_or_else(overflow)?;
        }
    }
    Ok(())
}

/// Raises each position's size-indexed row to the i-th power as a truncated
/// polynomial: the result at layer x counts ordered i-compositions
/// x_1 + .. + x_i = x weighted by the products g_{x_1} ... g_{x_i}.
pub fn compose_weight_profiles(g: &LayeredTable, i: usize) -> Result<LayeredTable> {
    if i == 0 {
        return Err(Error::InfeasibleParams(
            "composition order must be at least 1".into(),
        ));
    }
    let mut out = g.clone();
    out.kind = TableKind::Composed;
    if i == 1 {
        return Ok(out);
    }
    let width = g.n + 1;
    let mut scratch = vec![0i64; width];
    for pos in 0..g.positions {
        let base = g.row(pos);
        let acc = out.row_mut(pos);
        for _ in 1..i {
            mul_rows_truncated(acc, base, &mut scratch)?;
            acc.copy_from_slice(&scratch);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// The tuple-counting pipeline
// ---------------------------------------------------------------------------

/// Exact ordered-tuple counts per tuple length, produced by
/// [`tuple_cover_counts`]. `table(i)` holds, at (position X, layer x), the
/// number of ordered i-tuples of distinct-image family sets whose union is
/// exactly X and whose sizes sum to x.
#[derive(Debug, Clone)]
pub struct TupleCounts {
    tables: Vec<LayeredTable>,
    oracle_queries: u64,
}

impl TupleCounts {
    pub fn i_max(&self) -> usize {
        self.tables.len()
    }

    /// Counts for tuple length `i` (1-based).
    pub fn table(&self, i: usize) -> &LayeredTable {
        &self.tables[i - 1]
    }

    pub fn count(&self, i: usize, pos: usize, x: usize) -> i64 {
        self.table(i).get(pos, x)
    }

    /// Number of oracle queries made while building the base layer.
    pub fn oracle_queries(&self) -> u64 {
        self.oracle_queries
    }

    /// Whether some i-tuple of pairwise-disjoint sets partitions the mask at
    /// `pos` (counts at layer x = |mask| are of disjoint tuples).
    pub fn partitions_exactly(&self, dc: &DownClosure, i: usize, pos: usize) -> bool {
        let x = dc.mask(pos).count_ones() as usize;
        i >= 1 && i <= self.i_max() && self.count(i, pos, x) > 0
    }
}

/// Runs the full counting pipeline over a down-closure: query the oracle on
/// every position (base layer, split by size), zeta-transform, compose to
/// every tuple length up to `i_max`, and Möbius-invert each composition.
///
/// Counts are over ordered tuples of *distinct set images* — a membership
/// oracle cannot see multiplicities — which is exactly what existence
/// questions need. Entries at layer x = |X| count tuples of pairwise
/// disjoint sets partitioning X. All arithmetic is checked; overflow
/// surfaces as an error instead of wrapping.
pub fn tuple_cover_counts(
    dc: &DownClosure,
    oracle: &dyn SetOracle,
    i_max: usize,
) -> Result<TupleCounts> {
    if i_max == 0 {
        return Err(Error::InfeasibleParams(
            "tuple length bound must be at least 1".into(),
        ));
    }
    if oracle.n() != dc.n() {
        return Err(Error::TableMismatch(format!(
            "oracle over n={} queried on a closure over n={}",
            oracle.n(),
            dc.n()
        )));
    }
    let mut f = LayeredTable::zeros(dc.len(), dc.n(), TableKind::Base);
    let mut queries = 0u64;
    for pos in 0..dc.len() {
        let mask = dc.mask(pos);
        queries += 1;
        if oracle.contains_set(mask) {
            f.set(pos, mask.count_ones() as usize, 1);
        }
    }
    let g = zeta_on_closure(dc, &f)?;
    let width = dc.n() + 1;
    let mut tables = Vec::with_capacity(i_max);
    let mut h = g.clone();
    h.kind = TableKind::Composed;
    let mut scratch = vec![0i64; width];
    for i in 1..=i_max {
        if i > 1 {
            for pos in 0..dc.len() {
                mul_rows_truncated(h.row(pos), g.row(pos), &mut scratch)?;
                h.row_mut(pos).copy_from_slice(&scratch);
            }
        }
        tables.push(moebius_on_closure(dc, &h)?);
    }
    Ok(TupleCounts {
        tables,
        oracle_queries: queries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{masks_from_elements, RandomSeed};
    use rand::Rng;

    #[test]
    fn down_closure_full_lattice() {
        let dc = down_closure(3, &[0b111]).unwrap();
        assert_eq!(dc.len(), 8);
        assert_eq!(dc.mask(0), 0);
        assert_eq!(dc.mask(7), 0b111);
    }

    #[test]
    fn down_closure_two_members() {
        let family = masks_from_elements(&[&[0, 1], &[1, 2]]);
        let dc = down_closure(3, &family).unwrap();
        let expect: Vec<u64> = vec![0b000, 0b001, 0b010, 0b100, 0b011, 0b110];
        assert_eq!(dc.len(), 6);
        for m in expect {
            assert!(dc.contains(m), "missing {m:#b}");
        }
        assert!(!dc.contains(0b101));
        assert!(!dc.contains(0b111));
    }

    #[test]
    fn down_closure_empty_family() {
        let dc = down_closure(5, &[]).unwrap();
        assert!(dc.is_empty());
    }

    #[test]
    fn down_closure_ordering_and_closedness() {
        let mut rng = RandomSeed::new(9).rng();
        let family: Vec<u64> = (0..12).map(|_| rng.random::<u64>() & 0x3ff).collect();
        let dc = down_closure(10, &family).unwrap();
        for pos in 0..dc.len() {
            let mask = dc.mask(pos);
            // Every proper submask is present and earlier.
            for_each_submask(mask, |sub| {
                let p = dc.position(sub).expect("closure must be down-closed");
                if sub != mask {
                    assert!(p < pos);
                }
            });
        }
    }

    #[test]
    fn closure_bound_examples() {
        // Empty family always satisfies the bound.
        assert!(closure_size_bound_check(8, 0.25, 0.0, &[]).unwrap());
        // Parameter window violation.
        assert!(matches!(
            closure_size_bound_check(16, 0.25, 0.1, &[]).unwrap_err(),
            Error::InfeasibleParams(_)
        ));
        // Wrong member size is a hypothesis violation.
        assert!(matches!(
            closure_size_bound_check(8, 0.25, 0.0, &[0b111]).unwrap_err(),
            Error::HypothesisViolation(_)
        ));
        // A non-integral target size is rejected.
        assert!(closure_size_bound_check(9, 0.25, 0.0, &[]).is_err());
    }

    #[test]
    fn closure_bound_random_half_subsets() {
        // n=16, all sampled 8-subsets: even the worst case |closure| <= 2^16
        // sits below 16 * 2^(16 * (1 - (0.125)^4)).
        let mut rng = RandomSeed::new(4).rng();
        let mut family = Vec::new();
        while family.len() < 1 << 10 {
            let mask = rng.random::<u64>() & 0xffff;
            if mask.count_ones() == 8 {
                family.push(mask);
            }
        }
        assert!(closure_size_bound_check(16, 0.25, 0.0, &family).unwrap());
    }

    fn full_table_from_fn(dc: &DownClosure, mut f: impl FnMut(u64, usize) -> i64) -> LayeredTable {
        let mut t = LayeredTable::zeros(dc.len(), dc.n(), TableKind::Base);
        for pos in 0..dc.len() {
            for x in 0..=dc.n() {
                t.set(pos, x, f(dc.mask(pos), x));
            }
        }
        t
    }

    #[test]
    fn zeta_single_point() {
        let dc = DownClosure::full_lattice(2).unwrap();
        let f = full_table_from_fn(&dc, |mask, x| (mask == 0b01 && x == 1) as i64);
        let g = zeta_on_closure(&dc, &f).unwrap();
        let at = |m: u64, x: usize| g.get(dc.position(m).unwrap(), x);
        assert_eq!(at(0b01, 1), 1);
        assert_eq!(at(0b11, 1), 1);
        assert_eq!(at(0b10, 1), 0);
        assert_eq!(at(0b00, 1), 0);
        assert_eq!(g.kind(), TableKind::SubsetSums);
    }

    #[test]
    fn zeta_counts_singletons() {
        let dc = DownClosure::full_lattice(3).unwrap();
        let f = full_table_from_fn(&dc, |mask, x| (mask.count_ones() == 1 && x == 1) as i64);
        let g = zeta_on_closure(&dc, &f).unwrap();
        for pos in 0..dc.len() {
            assert_eq!(g.get(pos, 1), dc.mask(pos).count_ones() as i64);
            assert_eq!(g.get(pos, 0), 0);
        }
    }

    #[test]
    fn zeta_of_zero_is_zero() {
        let dc = down_closure(4, &[0b1011, 0b0111]).unwrap();
        let f = LayeredTable::zeros(dc.len(), 4, TableKind::Base);
        let g = zeta_on_closure(&dc, &f).unwrap();
        assert!((0..dc.len()).all(|p| g.row(p).iter().all(|&v| v == 0)));
    }

    #[test]
    fn compose_identity_and_squares() {
        let dc = DownClosure::full_lattice(2).unwrap();
        let g = full_table_from_fn(&dc, |_, x| if x == 1 { 2 } else { 0 });
        let h1 = compose_weight_profiles(&g, 1).unwrap();
        for pos in 0..dc.len() {
            assert_eq!(h1.row(pos), g.row(pos));
        }
        let h2 = compose_weight_profiles(&g, 2).unwrap();
        for pos in 0..dc.len() {
            assert_eq!(h2.get(pos, 2), 4);
            assert_eq!(h2.row(pos).iter().filter(|&&v| v != 0).count(), 1);
        }
        assert!(compose_weight_profiles(&g, 0).is_err());
    }

    #[test]
    fn compose_counts_ordered_singleton_pairs() {
        let dc = DownClosure::full_lattice(3).unwrap();
        let f = full_table_from_fn(&dc, |mask, x| (mask.count_ones() == 1 && x == 1) as i64);
        let g = zeta_on_closure(&dc, &f).unwrap();
        let h2 = compose_weight_profiles(&g, 2).unwrap();
        let full = dc.position(0b111).unwrap();
        assert_eq!(h2.get(full, 2), 9);
    }

    #[test]
    fn moebius_inverts_zeta_on_full_lattice() {
        let dc = DownClosure::full_lattice(6).unwrap();
        let mut rng = RandomSeed::new(11).rng();
        let f = full_table_from_fn(&dc, |_, _| rng.random_range(-50..50));
        let g = zeta_on_closure(&dc, &f).unwrap();
        let back = moebius_on_closure(&dc, &g).unwrap();
        for pos in 0..dc.len() {
            assert_eq!(back.row(pos), f.row(pos));
        }
    }

    #[test]
    fn moebius_of_constant_one() {
        let dc = DownClosure::full_lattice(2).unwrap();
        let h = full_table_from_fn(&dc, |_, _| 1);
        let c = moebius_on_closure(&dc, &h).unwrap();
        for pos in 0..dc.len() {
            let expect = if dc.mask(pos) == 0 { 1 } else { 0 };
            assert!(c.row(pos).iter().all(|&v| v == expect));
        }
    }

    #[test]
    fn restricted_transform_agrees_with_full_lattice() {
        // Random family over n=10; zeta restricted to the closure must agree
        // with the classic full-lattice sweep at every closure member.
        let n = 10;
        let mut rng = RandomSeed::new(21).rng();
        let family: Vec<u64> = (0..8).map(|_| rng.random::<u64>() & 0x3ff).collect();
        let dc = down_closure(n, &family).unwrap();
        let f = full_table_from_fn(
            &dc,
            |_, x| {
                if x == 0 {
                    rng.random_range(-9..10)
                } else {
                    0
                }
            },
        );
        // Full-lattice reference at layer 0 only (other layers are zero).
        let mut full = vec![0i64; 1 << n];
        for pos in 0..dc.len() {
            full[dc.mask(pos) as usize] = f.get(pos, 0);
        }
        for j in 0..n {
            for x in 0..(1usize << n) {
                if x & (1 << j) != 0 {
                    full[x] += full[x & !(1 << j)];
                }
            }
        }
        let g = zeta_on_closure(&dc, &f).unwrap();
        for pos in 0..dc.len() {
            assert_eq!(g.get(pos, 0), full[dc.mask(pos) as usize]);
        }
        // And Möbius undoes it, restricted or not.
        let back = moebius_on_closure(&dc, &g).unwrap();
        for pos in 0..dc.len() {
            assert_eq!(back.get(pos, 0), f.get(pos, 0));
        }
    }

    /// Direct enumeration of ordered i-tuples over distinct images.
    fn brute_tuples(n: usize, family: &[u64], i: usize, union_target: u64, x: usize) -> i64 {
        let mut images: Vec<u64> = family.to_vec();
        images.sort_unstable();
        images.dedup();
        let mut count = 0i64;
        let mut idx = vec![0usize; i];
        if images.is_empty() {
            return if i == 0 {
                (union_target == 0 && x == 0) as i64
            } else {
                0
            };
        }
        loop {
            let mut union = 0u64;
            let mut total = 0usize;
            for &t in &idx {
                union |= images[t];
                total += images[t].count_ones() as usize;
            }
            if union == union_target && total == x && total <= n {
                count += 1;
            }
            // Odometer increment.
            let mut d = 0;
            loop {
                if d == i {
                    return count;
                }
                idx[d] += 1;
                if idx[d] < images.len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    }

    #[test]
    fn tuple_counts_frozen_example() {
        let family = masks_from_elements(&[&[0], &[1], &[0, 1]]);
        let dc = DownClosure::full_lattice(2).unwrap();
        let oracle = ExplicitFamilyOracle::new(2, &family);
        let counts = tuple_cover_counts(&dc, &oracle, 2).unwrap();
        let full = dc.position(0b11).unwrap();
        // Ordered pairs ({0},{1}) and ({1},{0}).
        assert_eq!(counts.count(2, full, 2), 2);
        // The set {0,1} alone.
        assert_eq!(counts.count(1, full, 2), 1);
        assert!(counts.partitions_exactly(&dc, 1, full));
        assert!(counts.partitions_exactly(&dc, 2, full));
        // No singleton partitions {0,1} in one piece of size != 2.
        assert_eq!(counts.count(1, full, 1), 0);
    }

    #[test]
    fn tuple_counts_empty_family() {
        let dc = DownClosure::full_lattice(3).unwrap();
        let oracle = ExplicitFamilyOracle::new(3, &[]);
        let counts = tuple_cover_counts(&dc, &oracle, 2).unwrap();
        for i in 1..=2 {
            for pos in 0..dc.len() {
                for x in 0..=3 {
                    assert_eq!(counts.count(i, pos, x), 0);
                }
            }
        }
    }

    #[test]
    fn tuple_counts_match_brute_force() {
        let n = 5;
        let mut rng = RandomSeed::new(33).rng();
        for trial in 0..20 {
            let fam_size = rng.random_range(1..=6);
            let family: Vec<u64> = (0..fam_size)
                .map(|_| loop {
                    let m = rng.random::<u64>() & 0b11111;
                    if m != 0 {
                        break m;
                    }
                })
                .collect();
            let dc = DownClosure::full_lattice(n).unwrap();
            let oracle = ExplicitFamilyOracle::new(n, &family);
            let counts = tuple_cover_counts(&dc, &oracle, 3).unwrap();
            for i in 1..=3 {
                for pos in (0..dc.len()).step_by(3) {
                    for x in 0..=n {
                        let expect = brute_tuples(n, &family, i, dc.mask(pos), x);
                        assert_eq!(
                            counts.count(i, pos, x),
                            expect,
                            "trial {trial}, i={i}, X={:#b}, x={x}",
                            dc.mask(pos)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn tuple_counts_singleton_oracle_partitions() {
        // With only singletons available, X is partitionable by exactly
        // |X|-tuples, in |X|! orders.
        let dc = DownClosure::full_lattice(4).unwrap();
        let oracle = SingletonOracle { n: 4 };
        let counts = tuple_cover_counts(&dc, &oracle, 4).unwrap();
        for pos in 0..dc.len() {
            let k = dc.mask(pos).count_ones() as usize;
            for i in 1..=4 {
                let expect = if i == k {
                    (1..=k as i64).product::<i64>()
                } else {
                    0
                };
                assert_eq!(counts.count(i, pos, k), expect);
            }
        }
    }

    #[test]
    fn mismatched_table_is_rejected() {
        let dc = DownClosure::full_lattice(3).unwrap();
        let wrong = LayeredTable::zeros(4, 3, TableKind::Base);
        assert!(matches!(
            zeta_on_closure(&dc, &wrong).unwrap_err(),
            Error::TableMismatch(_)
        ));
        let wrong_n = LayeredTable::zeros(dc.len(), 2, TableKind::Base);
        assert!(moebius_on_closure(&dc, &wrong_n).is_err());
    }

    #[test]
    fn overflow_is_detected() {
        let dc = DownClosure::full_lattice(2).unwrap();
        let f = full_table_from_fn(&dc, |_, _| i64::MAX / 2);
        assert_eq!(zeta_on_closure(&dc, &f).unwrap_err(), Error::CountOverflow);
    }
}
