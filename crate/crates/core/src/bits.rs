//! Internal bit-twiddling helpers shared across modules.
//!
//! Universes are capped at 63 elements so every subset fits in one `u64`
//! word with room to spare for shifted arithmetic.

/// Bitmask with the lowest `n` bits set (`n <= 63`).
pub(crate) fn universe_mask(n: usize) -> u64 {
    debug_assert!(n <= 63);
    if n == 0 {
        0
    } else {
        u64::MAX >> (64 - n)
    }
}

/// Calls `f` on every subset of `{0, .., n-1}` with exactly `k` elements,
/// in ascending numeric order (Gosper's hack).
pub(crate) fn for_each_k_subset(n: usize, k: usize, mut f: impl FnMut(u64)) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let limit = universe_mask(n);
    let mut x = universe_mask(k);
    while x <= limit {
        f(x);
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
}

/// Calls `f` on every submask of `mask`, including `mask` itself and 0,
/// in descending numeric order.
pub(crate) fn for_each_submask(mask: u64, mut f: impl FnMut(u64)) {
    let mut sub = mask;
    loop {
        f(sub);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
}

/// Parity of `x & y`, i.e. the GF(2) inner product of two bit vectors.
pub(crate) fn dot_parity(x: u64, y: u64) -> u64 {
    ((x & y).count_ones() & 1) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universe_mask_widths() {
        assert_eq!(universe_mask(0), 0);
        assert_eq!(universe_mask(1), 1);
        assert_eq!(universe_mask(5), 0b11111);
        assert_eq!(universe_mask(63), u64::MAX >> 1);
    }

    #[test]
    fn k_subsets_count_matches_binomial() {
        // C(6, 3) = 20, C(5, 0) = 1, C(4, 4) = 1.
        let mut count = 0;
        for_each_k_subset(6, 3, |m| {
            assert_eq!(m.count_ones(), 3);
            count += 1;
        });
        assert_eq!(count, 20);
        count = 0;
        for_each_k_subset(5, 0, |m| {
            assert_eq!(m, 0);
            count += 1;
        });
        assert_eq!(count, 1);
        count = 0;
        for_each_k_subset(4, 4, |m| {
            assert_eq!(m, 0b1111);
            count += 1;
        });
        assert_eq!(count, 1);
    }

    #[test]
    fn k_subsets_ascending() {
        let mut prev = None;
        for_each_k_subset(7, 4, |m| {
            if let Some(p) = prev {
                assert!(m > p);
            }
            prev = Some(m);
        });
    }

    #[test]
    fn submask_enumeration_is_complete() {
        let mut seen = Vec::new();
        for_each_submask(0b1010, |s| seen.push(s));
        assert_eq!(seen, vec![0b1010, 0b1000, 0b0010, 0b0000]);
    }

    #[test]
    fn dot_parity_examples() {
        assert_eq!(dot_parity(0b101, 0b100), 1);
        assert_eq!(dot_parity(0b101, 0b101), 0);
        assert_eq!(dot_parity(0, u64::MAX), 0);
    }
}
