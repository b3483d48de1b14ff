//! Exact integer helpers shared by the counting code.
//!
//! Binomial coefficients follow the convention `binom(a, b) = 0` whenever
//! `b < 0`, `b > a` or `a < 0`; this is what every alternating sum in
//! [`crate::closedform`] relies on.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

pub fn binom(a: i64, b: i64) -> BigUint {
    if b < 0 || a < 0 || b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient that must fit a machine word; used for exponents
/// and enumeration sizes.
pub fn binom_u64(a: i64, b: i64) -> u64 {
    if b < 0 || a < 0 || b > a {
        return 0;
    }
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `base^exp` with a shift fast path for powers of two.
pub fn pow_big(base: u64, exp: &BigUint) -> BigUint {
    let exp_u64 = u64::try_from(exp).expect("exponent does not fit in u64");
    pow_u(base, exp_u64)
}

pub fn pow_u(base: u64, exp: u64) -> BigUint {
    if exp == 0 {
        return BigUint::one();
    }
    match base {
        0 => BigUint::zero(),
        1 => BigUint::one(),
        b if b.is_power_of_two() => {
            let bits = b.trailing_zeros() as u64;
            BigUint::one() << (bits * exp)
        }
        b => {
            let exp = u32::try_from(exp).expect("exponent too large for a non-power-of-two base");
            BigUint::from(b).pow(exp)
        }
    }
}

pub fn to_u64(x: &BigUint) -> u64 {
    u64::try_from(x).expect("count does not fit in u64")
}

pub fn to_bigint(x: &BigUint) -> BigInt {
    BigInt::from(x.clone())
}

/// Falling factorial `x (x-1) ... (x-m+1)`; zero once a factor reaches zero.
pub fn falling(x: u64, m: u64) -> BigUint {
    if m > x {
        return BigUint::zero();
    }
    (0..m).fold(BigUint::one(), |acc, i| acc * (x - i))
}

/// Iterates over all `size`-subsets of the low `n` bits in increasing
/// numeric order (Gosper's hack).
pub fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = u64> {
    assert!(n <= 64);
    let limit: u128 = 1u128 << n;
    let first: u128 = if size > n {
        limit
    } else if size == 0 {
        0
    } else {
        (1u128 << size) - 1
    };
    let mut next = Some(first);
    let empty_once = size == 0;
    let mut emitted_empty = false;
    std::iter::from_fn(move || {
        if empty_once {
            if emitted_empty {
                return None;
            }
            emitted_empty = true;
            return Some(0);
        }
        let cur = next?;
        if cur >= limit {
            next = None;
            return None;
        }
        let c = cur & cur.wrapping_neg();
        let r = cur + c;
        next = Some((((r ^ cur) >> 2) / c) | r);
        Some(cur as u64)
    })
}

/// Iterates over the set bits of a mask, lowest first.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_conventions() {
        assert_eq!(binom(5, 2), BigUint::from(10u32));
        assert_eq!(binom(5, -1), BigUint::zero());
        assert_eq!(binom(5, 6), BigUint::zero());
        assert_eq!(binom(-3, 0), BigUint::zero());
        assert_eq!(binom(0, 0), BigUint::one());
        assert_eq!(binom_u64(29, 7), 1_560_780);
    }

    #[test]
    fn pow_paths_agree() {
        for base in [0u64, 1, 2, 3, 4, 6, 8] {
            for exp in 0..20u64 {
                assert_eq!(pow_u(base, exp), BigUint::from(base).pow(exp as u32));
            }
        }
    }

    #[test]
    fn gosper_counts() {
        for n in 0..10 {
            for s in 0..=n + 1 {
                let all: Vec<u64> = subsets_of_size(n, s).collect();
                assert_eq!(all.len() as u64, binom_u64(n as i64, s as i64));
                assert!(all.iter().all(|m| m.count_ones() as usize == s));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert_eq!(subsets_of_size(64, 63).count(), 64);
    }

    #[test]
    fn falling_factorial() {
        assert_eq!(falling(2, 3), BigUint::zero());
        assert_eq!(falling(5, 2), BigUint::from(20u32));
        assert_eq!(falling(3, 0), BigUint::one());
    }
}
