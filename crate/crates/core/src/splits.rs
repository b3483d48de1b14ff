//! Optimal color splits: maximize `s_1 * ... * s_c` subject to
//! `s_1 + ... + s_c <= k`, the derived constants `c(k)`, `N(k)`, `D(k)`, and
//! ordered partitions of the color set.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::arith::factorial;
use crate::error::{invalid, Result};
use crate::families::{cover_size, next_permutation};

/// Largest color budget supported by the bit-mask partition code.
pub const MAX_COLORS: usize = 32;

/// A split of the color budget; components are kept in the order given.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SplitVector {
    k: usize,
    parts: Vec<usize>,
}

impl SplitVector {
    pub fn new(k: usize, parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(invalid("split components must be positive"));
        }
        if parts.iter().sum::<usize>() > k {
            return Err(invalid(format!("split {parts:?} exceeds the budget k={k}")));
        }
        Ok(SplitVector { k, parts })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn value(&self) -> BigUint {
        self.parts.iter().fold(BigUint::one(), |acc, &p| acc * p)
    }

    /// Components sorted into nonincreasing order.
    pub fn sorted(&self) -> SplitVector {
        let mut parts = self.parts.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        SplitVector { k: self.k, parts }
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(invalid(format!("need k >= 2, got {k}")));
    }
    if k > MAX_COLORS {
        return Err(invalid(format!("k={k} exceeds the supported maximum of {MAX_COLORS}")));
    }
    Ok(())
}

/// The optimal splits as nonincreasing multisets, shortest first.
pub fn optimal_splits(k: usize) -> Result<Vec<SplitVector>> {
    check_k(k)?;
    let threes = k / 3;
    let shapes: Vec<Vec<usize>> = match k % 3 {
        0 => vec![vec![3; threes]],
        1 => {
            let mut with_four = vec![4];
            with_four.extend(vec![3; threes - 1]);
            let mut with_twos = vec![3; threes - 1];
            with_twos.extend([2, 2]);
            vec![with_four, with_twos]
        }
        _ => {
            let mut v = vec![3; threes];
            v.push(2);
            vec![v]
        }
    };
    Ok(shapes.into_iter().map(|parts| SplitVector { k, parts }).collect())
}

/// The common value of every optimal split.
pub fn optimal_value(k: usize) -> Result<BigUint> {
    Ok(optimal_splits(k)?[0].value())
}

/// `c(k)`, `N(k)` and `D(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cnd {
    pub c: usize,
    #[serde(serialize_with = "crate::lab::decimal")]
    pub n: BigUint,
    #[serde(serialize_with = "crate::lab::decimal")]
    pub d: BigUint,
}

pub fn cnd(k: usize) -> Result<Cnd> {
    check_k(k)?;
    let c = cover_size(k);
    let kf = factorial(k as u64);
    let pow3 = |e: usize| BigUint::from(3u32).pow(e as u32);
    let pow6 = |e: usize| BigUint::from(6u32).pow(e as u32);
    let (n, d) = match k % 3 {
        0 => (kf / pow6(k / 3), pow3(k / 3)),
        1 => {
            let pairs = BigUint::from(c * (c - 1) / 2);
            (pairs * kf / (pow6(c - 2) * 4u32), pow3(c - 2) * 4u32)
        }
        _ => (BigUint::from(c) * kf / (pow6(k / 3) * 2u32), pow3(k / 3) * 2u32),
    };
    Ok(Cnd { c, n, d })
}

/// Every distinct ordering of an optimal split with exactly `len`
/// components, in lexicographic order. These are the block sizes handed to
/// `len` labelled cover slots.
pub fn ordered_splits(k: usize, len: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for shape in optimal_splits(k)? {
        if shape.len() != len {
            continue;
        }
        let mut perm = shape.parts().to_vec();
        perm.sort_unstable();
        loop {
            out.push(perm.clone());
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `k! / (s_1! ... s_c!)`.
pub fn multinomial(k: usize, s: &[usize]) -> BigUint {
    s.iter().fold(factorial(k as u64), |acc, &p| acc / factorial(p as u64))
}

/// Number of pairs (ordered optimal split of length `len`, ordered
/// partition with those block sizes).
pub fn split_partition_pairs(k: usize, len: usize) -> Result<BigUint> {
    Ok(ordered_splits(k, len)?.iter().map(|s| multinomial(k, s)).sum())
}

/// An ordered partition of the colors `1..=k`; block `i` is a bit mask with
/// color `x` at bit `x - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorPartition {
    blocks: Vec<u32>,
}

impl ColorPartition {
    pub fn block_masks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> Vec<usize> {
        crate::arith::bits(self.blocks[i] as u64).map(|b| b + 1).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.count_ones() as usize).collect()
    }

    /// Index of the block holding color `x`.
    pub fn block_of(&self, x: usize) -> Option<usize> {
        self.blocks.iter().position(|&b| b >> (x - 1) & 1 == 1)
    }
}

/// All ordered partitions of `[k]` with block sizes `s`, each once.
pub fn ordered_partitions(s: &[usize], k: usize) -> Result<impl Iterator<Item = ColorPartition>> {
    if k > MAX_COLORS {
        return Err(invalid(format!("k={k} exceeds the supported maximum of {MAX_COLORS}")));
    }
    if s.iter().sum::<usize>() != k {
        return Err(invalid(format!("block sizes {s:?} do not sum to k={k}")));
    }
    let mut out = Vec::new();
    let full = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    let mut blocks = Vec::with_capacity(s.len());
    fill_blocks(s, full, &mut blocks, &mut out);
    Ok(out.into_iter())
}

fn fill_blocks(s: &[usize], free: u32, blocks: &mut Vec<u32>, out: &mut Vec<ColorPartition>) {
    let Some((&size, rest)) = s.split_first() else {
        out.push(ColorPartition { blocks: blocks.clone() });
        return;
    };
    let positions: Vec<u32> = crate::arith::bits(free as u64).map(|b| 1u32 << b).collect();
    for pick in crate::arith::subsets_of_size(positions.len(), size) {
        let mask = crate::arith::bits(pick).fold(0u32, |m, i| m | positions[i]);
        blocks.push(mask);
        fill_blocks(rest, free & !mask, blocks, out);
        blocks.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every multiset of positive parts with sum at most `k`.
    fn partitions_up_to(k: usize) -> Vec<Vec<usize>> {
        fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(cur.clone());
            for p in (1..=max.min(left)).rev() {
                cur.push(p);
                rec(left - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(k, k, &mut Vec::new(), &mut out);
        out.retain(|p| !p.is_empty());
        out
    }

    #[test]
    fn optimal_splits_match_brute_force() {
        for k in 2..=12 {
            let all = partitions_up_to(k);
            let value = |p: &Vec<usize>| p.iter().product::<usize>();
            let best = all.iter().map(value).max().unwrap();
            let mut argmax: Vec<Vec<usize>> = all.into_iter().filter(|p| value(p) == best).collect();
            argmax.sort();
            let mut ours: Vec<Vec<usize>> = optimal_splits(k).unwrap().iter().map(|s| s.parts().to_vec()).collect();
            ours.sort();
            assert_eq!(ours, argmax, "k={k}");
            assert_eq!(optimal_value(k).unwrap(), BigUint::from(best));
            assert_eq!(cnd(k).unwrap().d, BigUint::from(best));
        }
    }

    #[test]
    fn split_examples() {
        let parts = |k| -> Vec<Vec<usize>> { optimal_splits(k).unwrap().iter().map(|s| s.parts().to_vec()).collect() };
        assert_eq!(parts(6), vec![vec![3, 3]]);
        assert_eq!(parts(7), vec![vec![4, 3], vec![3, 2, 2]]);
        assert_eq!(parts(5), vec![vec![3, 2]]);
        assert_eq!(optimal_value(7).unwrap(), BigUint::from(12u32));
        assert!(optimal_splits(1).is_err());
    }

    #[test]
    fn optimal_splits_avoid_ones_and_many_twos() {
        for k in 2..=30 {
            for s in optimal_splits(k).unwrap() {
                assert!(!s.parts().contains(&1));
                assert!(s.parts().iter().filter(|&&p| p == 2).count() <= 2);
                assert_eq!(s.parts().iter().sum::<usize>(), k);
            }
        }
    }

    #[test]
    fn cnd_examples() {
        let x = cnd(4).unwrap();
        assert_eq!((x.c, x.n, x.d), (2, 6u32.into(), 4u32.into()));
        let x = cnd(9).unwrap();
        assert_eq!((x.c, x.n, x.d), (3, 1680u32.into(), 27u32.into()));
        let x = cnd(5).unwrap();
        assert_eq!((x.c, x.n, x.d), (2, 20u32.into(), 6u32.into()));
        let x = cnd(2).unwrap();
        assert_eq!((x.c, x.n, x.d), (1, 1u32.into(), 2u32.into()));
    }

    #[test]
    fn n_counts_slot_partition_pairs() {
        for k in 2..=12 {
            let x = cnd(k).unwrap();
            // direct count: ordered split over labelled slots times ordered partitions
            let direct: usize = ordered_splits(k, x.c)
                .unwrap()
                .iter()
                .map(|s| ordered_partitions(s, k).unwrap().count())
                .sum();
            assert_eq!(x.n, BigUint::from(direct), "k={k}");
            assert_eq!(split_partition_pairs(k, x.c).unwrap(), x.n);
        }
    }

    #[test]
    fn shorter_cover_pairs_for_residue_one() {
        for k in [7usize, 10] {
            let c = cover_size(k);
            let short = split_partition_pairs(k, c - 1).unwrap();
            let expected = BigUint::from(c - 1) * factorial(k as u64) / (BigUint::from(24u32) * BigUint::from(6u32).pow(c as u32 - 2));
            assert_eq!(short, expected);
            // ratio of the two sums is 3c
            assert_eq!(cnd(k).unwrap().n, short * (3 * c));
        }
    }

    #[test]
    fn partition_examples() {
        assert_eq!(ordered_partitions(&[2, 2], 4).unwrap().count(), 6);
        assert_eq!(ordered_partitions(&[3, 3], 6).unwrap().count(), 20);
        assert_eq!(ordered_partitions(&[4], 4).unwrap().count(), 1);
        assert!(ordered_partitions(&[2, 1], 4).is_err());
        let mut all: Vec<_> = ordered_partitions(&[3, 2, 2], 7).unwrap().collect();
        assert_eq!(all.len(), 210);
        assert_eq!(BigUint::from(210u32), multinomial(7, &[3, 2, 2]));
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 210);
        for p in &all {
            assert_eq!(p.sizes(), vec![3, 2, 2]);
            assert_eq!(p.block_masks().iter().fold(0, |a, b| a | b), 0b111_1111);
        }
    }

    #[test]
    fn ordered_split_lists() {
        assert_eq!(ordered_splits(7, 3).unwrap(), vec![vec![2, 2, 3], vec![2, 3, 2], vec![3, 2, 2]]);
        assert_eq!(ordered_splits(7, 2).unwrap(), vec![vec![3, 4], vec![4, 3]]);
        assert!(ordered_splits(5, 1).unwrap().is_empty());
        assert_eq!(ordered_splits(4, 1).unwrap(), vec![vec![4]]);
    }
}
