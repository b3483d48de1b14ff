//! Closed-form counts with arbitrary-precision integers and exact
//! rationals: coverage counts `A`..`E` of disjoint covers, the star sum,
//! `alpha(n, r, k, ell)`, the generalized star count `S(y)`, the upper bound
//! on `KC`, the cover-size comparison ratio and the product inequality.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{binom, binom_u64, factorial, pow_u, subsets_of_size};
use crate::count::anchor_mask;
use crate::error::{invalid, Error, Result};
use crate::families::{cover_size, CoverConfig};
use crate::hypergraph::Hypergraph;
use crate::splits::{cnd, multinomial, optimal_splits, ordered_splits, split_partition_pairs};

/// Number of `r`-subsets of `[n]` that contain `contained` given sets out
/// of `total` pairwise disjoint `ell`-sets and none of the others.
pub fn coverage(n: usize, r: usize, ell: usize, total: usize, contained: usize) -> BigUint {
    if contained > total {
        return BigUint::zero();
    }
    let free = total - contained;
    let (n, r, ell) = (n as i64, r as i64, ell as i64);
    let mut acc = BigInt::zero();
    for i in 0..=free {
        let used = ell * (contained + i) as i64;
        let term = BigInt::from(binom(n - used, r - used) * binom(free as i64, i as i64));
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint().expect("coverage counts are nonnegative")
}

/// Coverage counts of a disjoint cover of size `c`, each the number of
/// edges holding a fixed subset of the cover sets and none of the others.
///
/// `a[x]`: a fixed `(x+2)`-subset of the `c` sets. `b[y]`: a fixed
/// `(y+1)`-subset. `cz[z]`: a fixed `z`-subset. `d[x]` and `e[z]`: fixed
/// `(x+1)`- and `z`-subsets of a cover of `c-1` sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageCount {
    pub n: usize,
    pub r: usize,
    pub ell: usize,
    pub c: usize,
    pub a: Vec<BigUint>,
    pub b: Vec<BigUint>,
    pub cz: Vec<BigUint>,
    pub d: Vec<BigUint>,
    pub e: Vec<BigUint>,
}

impl CoverageCount {
    /// `floor(r / ell)`, the most cover sets one edge can hold.
    pub fn q(&self) -> usize {
        self.r / self.ell
    }
}

pub fn coverage_counts(n: usize, r: usize, ell: usize, c: usize) -> Result<CoverageCount> {
    if ell == 0 || ell >= r {
        return Err(invalid(format!("need 1 <= ell < r (r={r}, ell={ell})")));
    }
    if c < 2 {
        return Err(invalid(format!("need c >= 2, got {c}")));
    }
    if n < c * ell {
        return Err(invalid(format!("n={n} cannot hold {c} disjoint {ell}-sets")));
    }
    let cov = |total: usize, j: usize| coverage(n, r, ell, total, j);
    Ok(CoverageCount {
        n,
        r,
        ell,
        c,
        a: (0..=c - 2).map(|x| cov(c, x + 2)).collect(),
        b: (0..c).map(|y| cov(c, y + 1)).collect(),
        cz: (0..=c).map(|z| cov(c, z)).collect(),
        d: (0..=c - 2).map(|x| cov(c - 1, x + 1)).collect(),
        e: (0..c).map(|z| cov(c - 1, z)).collect(),
    })
}

/// Counts by listing every `r`-subset of `[n]` and checking which of the
/// blocks `{1..ell}, {ell+1..2ell}, ...` it holds.
pub fn coverage_by_enumeration(n: usize, r: usize, ell: usize, c: usize) -> Result<CoverageCount> {
    if ell == 0 || ell >= r || c < 2 || n < c * ell || n > 64 {
        return Err(invalid(format!("bad parameters n={n} r={r} ell={ell} c={c}")));
    }
    let block = |i: usize| ((1u64 << ell) - 1) << (i * ell);
    // tally[t][j]: subsets holding exactly the first j of t blocks
    let mut tally = vec![vec![0u64; c + 1]; c + 1];
    for e in subsets_of_size(n, r) {
        for t in [c - 1, c] {
            let held: Vec<bool> = (0..t).map(|i| e & block(i) == block(i)).collect();
            let j = held.iter().take_while(|&&h| h).count();
            if held[j..].iter().all(|&h| !h) {
                tally[t][j] += 1;
            }
        }
    }
    let get = |t: usize, j: usize| BigUint::from(if j <= t { tally[t][j] } else { 0 });
    Ok(CoverageCount {
        n,
        r,
        ell,
        c,
        a: (0..=c - 2).map(|x| get(c, x + 2)).collect(),
        b: (0..c).map(|y| get(c, y + 1)).collect(),
        cz: (0..=c).map(|z| get(c, z)).collect(),
        d: (0..=c - 2).map(|x| get(c - 1, x + 1)).collect(),
        e: (0..c).map(|z| get(c - 1, z)).collect(),
    })
}

/// A product of small integer powers kept as prime exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PowerProduct {
    exps: BTreeMap<u64, i128>,
}

impl PowerProduct {
    pub fn new() -> Self {
        Self::default()
    }

    /// Multiplies by `base^exp`; `base` must be positive.
    pub fn push(&mut self, base: u64, exp: i128) {
        assert!(base > 0, "zero base");
        if exp == 0 {
            return;
        }
        let mut b = base;
        let mut p = 2u64;
        while p * p <= b {
            while b % p == 0 {
                *self.exps.entry(p).or_default() += exp;
                b /= p;
            }
            p += 1;
        }
        if b > 1 {
            *self.exps.entry(b).or_default() += exp;
        }
        self.exps.retain(|_, e| *e != 0);
    }

    pub fn divide(&mut self, other: &PowerProduct) {
        for (&p, &e) in &other.exps {
            *self.exps.entry(p).or_default() -= e;
        }
        self.exps.retain(|_, e| *e != 0);
    }

    fn side(&self, positive: bool) -> BigUint {
        let mut acc = BigUint::one();
        for (&p, &e) in &self.exps {
            if (e > 0) == positive {
                acc *= pow_u(p, e.unsigned_abs() as u64);
            }
        }
        acc
    }

    pub fn to_rational(&self) -> BigRational {
        Ratio::new(BigInt::from(self.side(true)), BigInt::from(self.side(false)))
    }

    /// Value when every exponent is nonnegative.
    pub fn to_integer(&self) -> Option<BigUint> {
        if self.exps.values().any(|&e| e < 0) {
            return None;
        }
        Some(self.side(true))
    }
}

/// Number of `r`-subsets of `[n]` per anchor mask (bit `i` set when the
/// subset contains cover set `i`), by inclusion–exclusion over unions.
/// Mask 0 counts the subsets containing no cover set.
pub fn cover_mask_counts(n: usize, r: usize, cover: &CoverConfig) -> Result<BTreeMap<u32, u64>> {
    let c = cover.c();
    if c > 16 {
        return Err(invalid("cover too large for mask counting"));
    }
    let union_size = |s: u32| {
        crate::arith::bits(s as u64).fold(0u64, |m, i| m | cover.sets()[i].mask()).count_ones() as i64
    };
    let contains = |s: u32| {
        let u = union_size(s);
        binom_u64(n as i64 - u, r as i64 - u) as i128
    };
    let full = (1u32 << c) - 1;
    let mut out = BTreeMap::new();
    for mask in 0..=full {
        let rest = full & !mask;
        let mut total: i128 = 0;
        let mut sub = rest;
        loop {
            let term = contains(mask | sub);
            if sub.count_ones() % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        if total < 0 {
            return Err(invalid("negative mask count"));
        }
        if total > 0 {
            out.insert(mask, total as u64);
        }
    }
    Ok(out)
}

/// `sum over (s, P) of prod over edges of (sum of s_i over cover sets in
/// the edge)` for the hypergraph's own edges.
pub fn star_sum(h: &Hypergraph, cover: &CoverConfig, k: usize, ell: usize) -> Result<BigUint> {
    if ell != cover.ell() {
        return Err(invalid(format!("cover sets have size {}, not ell={ell}", cover.ell())));
    }
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for &e in h.edges() {
        *counts.entry(anchor_mask(e, cover)).or_default() += 1;
    }
    star_sum_from_counts(&counts, cover.c(), k)
}

/// [`star_sum`] for a (C,r)-complete hypergraph, without listing edges.
pub fn star_sum_complete(n: usize, r: usize, cover: &CoverConfig, k: usize) -> Result<BigUint> {
    let mut counts = cover_mask_counts(n, r, cover)?;
    counts.remove(&0);
    star_sum_from_counts(&counts, cover.c(), k)
}

/// Star sum from the number of edges per anchor mask.
pub fn star_sum_from_counts(counts: &BTreeMap<u32, u64>, c: usize, k: usize) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for s in ordered_splits(k, c)? {
        let mut prod = PowerProduct::new();
        let mut zero = false;
        for (&mask, &cnt) in counts {
            let colors: usize = crate::arith::bits(mask as u64).map(|i| s[i]).sum();
            if colors == 0 {
                zero = cnt > 0;
                if zero {
                    break;
                }
                continue;
            }
            prod.push(colors as u64, cnt as i128);
        }
        if !zero {
            total += multinomial(k, &s) * prod.to_integer().expect("nonnegative exponents");
        }
    }
    Ok(total)
}

/// Parameters of `alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaParameters {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub ell: usize,
}

impl AlphaParameters {
    fn check(&self) -> Result<()> {
        let AlphaParameters { n, r, k, ell } = *self;
        if k < 4 {
            return Err(invalid(format!("alpha needs k >= 4, got {k}")));
        }
        if ell == 0 || ell >= r {
            return Err(invalid(format!("need 1 <= ell < r (r={r}, ell={ell})")));
        }
        if n < r.max(ell * cover_size(k)) {
            return Err(invalid(format!("n={n} too small for r={r} and {} disjoint {ell}-sets", cover_size(k))));
        }
        Ok(())
    }
}

fn exp_of(count: &BigUint, times: u64) -> Result<i128> {
    count
        .to_u64()
        .and_then(|c| (c as i128).checked_mul(times as i128))
        .ok_or_else(|| Error::Budget("exponent does not fit in 128 bits".into()))
}

/// Inclusive upper index `min(a, b)` that may be negative.
fn upto(a: i64, b: i64) -> i64 {
    a.min(b)
}

/// `alpha(n, r, k, ell)` with subset products collapsed to binomial
/// exponents.
pub fn alpha(p: AlphaParameters) -> Result<BigUint> {
    alpha_impl(p, false)
}

/// The same value, multiplying one factor per index subset.
pub fn alpha_uncollapsed(p: AlphaParameters) -> Result<BigUint> {
    alpha_impl(p, true)
}

fn alpha_impl(p: AlphaParameters, literal: bool) -> Result<BigUint> {
    p.check()?;
    let AlphaParameters { n, r, k, ell } = p;
    let x = cnd(k)?;
    if k == 4 || r < 2 * ell {
        let b = binom_u64((n - ell) as i64, (r - ell) as i64);
        let mut prod = PowerProduct::new();
        prod.push(x.d.to_u64().expect("small D"), b as i128);
        return Ok(x.n * prod.to_integer().expect("integer"));
    }
    let cov = coverage_counts(n, r, ell, x.c)?;
    let (c, q) = (x.c as i64, cov.q() as i64);
    let mut prod = PowerProduct::new();
    // multiplies base^count once per index subset of the given size
    let push = |prod: &mut PowerProduct, base: i64, count: &BigUint, pool: i64, size: i64, times: u64| -> Result<()> {
        if literal {
            for _ in subsets_of_size(pool as usize, size as usize) {
                prod.push(base as u64, exp_of(count, times)?);
            }
        } else {
            let ways = binom_u64(pool, size);
            prod.push(base as u64, exp_of(count, times)?.checked_mul(ways as i128).ok_or_else(|| Error::Budget("exponent overflow".into()))?);
        }
        Ok(())
    };
    match k % 3 {
        0 => {
            for z in 1..=upto(c, q) {
                push(&mut prod, 3 * z, &cov.cz[z as usize], c, z, 1)?;
            }
        }
        1 => {
            let pool = c - 2;
            for xx in 0..=upto(pool, q - 2) {
                push(&mut prod, 4 + 3 * xx, &cov.a[xx as usize], pool, xx, 1)?;
            }
            for y in 0..=upto(pool, q - 1) {
                push(&mut prod, 2 + 3 * y, &cov.b[y as usize], pool, y, 2)?;
            }
            for z in 1..=upto(pool, q) {
                push(&mut prod, 3 * z, &cov.cz[z as usize], pool, z, 1)?;
            }
        }
        _ => {
            let pool = c - 1;
            for y in 0..=upto(pool, q - 1) {
                push(&mut prod, 2 + 3 * y, &cov.b[y as usize], pool, y, 1)?;
            }
            for z in 1..=upto(pool, q) {
                push(&mut prod, 3 * z, &cov.cz[z as usize], pool, z, 1)?;
            }
        }
    }
    Ok(x.n * prod.to_integer().expect("nonnegative exponents"))
}

/// `S(y)`, the generalized star count for `k = 4` and two cover sets
/// meeting in `y` vertices.
pub fn generalized_star_count(n: usize, r: usize, ell: usize, y: usize) -> Result<BigUint> {
    if ell == 0 || ell >= r || y >= ell {
        return Err(invalid(format!("need 1 <= ell < r and y < ell (r={r}, ell={ell}, y={y})")));
    }
    let (ni, ri, li, yi) = (n as i64, r as i64, ell as i64, y as i64);
    let big_b = binom_u64(ni - li, ri - li);
    let b2 = binom_u64(ni - 2 * li + yi, ri - 2 * li + yi);
    let b1 = big_b - b2;
    let inner: BigInt = BigInt::from(pow_u(3, b1)) - BigInt::from(pow_u(2, b1)) * 3u32 + 3u32;
    let inner = inner.to_biguint().expect("3^b - 3*2^b + 3 is nonnegative");
    Ok(pow_u(4, big_b) * 6u32 + inner * pow_u(4, b2) * 8u32)
}

/// The lower estimate for `S(ell - 1)`:
/// `6*4^B + 4 * 3^binom(n-ell-1, r-ell) * 4^binom(n-ell-1, r-ell-1)`.
pub fn generalized_star_lower_estimate(n: usize, r: usize, ell: usize) -> BigUint {
    let (ni, ri, li) = (n as i64, r as i64, ell as i64);
    let big_b = binom_u64(ni - li, ri - li);
    let e3 = binom_u64(ni - li - 1, ri - li);
    let e4 = binom_u64(ni - li - 1, ri - li - 1);
    pow_u(4, big_b) * 6u32 + pow_u(3, e3) * pow_u(4, e4) * 4u32
}

/// `N(k) * k^(binom(ell c, ell+1) binom(n-ell-1, r-ell-1)) * D(k)^binom(n-ell, r-ell)`.
pub fn t1_upper_bound(n: usize, r: usize, k: usize, ell: usize) -> Result<BigUint> {
    if k < 4 {
        return Err(invalid(format!("bound needs k >= 4, got {k}")));
    }
    if ell == 0 || ell >= r || n < r {
        return Err(invalid(format!("need 1 <= ell < r <= n (n={n}, r={r}, ell={ell})")));
    }
    let x = cnd(k)?;
    let (ni, ri, li) = (n as i64, r as i64, ell as i64);
    let ek = binom_u64(li * x.c as i64, li + 1) as i128 * binom_u64(ni - li - 1, ri - li - 1) as i128;
    let ed = binom_u64(ni - li, ri - li) as i128;
    let mut prod = PowerProduct::new();
    prod.push(k as u64, ek);
    prod.push(x.d.to_u64().expect("small D"), ed);
    Ok(x.n * prod.to_integer().expect("integer"))
}

/// `D(k)^binom(n - ell c(k), r - ell)`, the easy lower bound on the number
/// of colorings of `H_{n,r,k,ell}`.
pub fn extremal_lower_bound(n: usize, r: usize, k: usize, ell: usize) -> Result<BigUint> {
    let x = cnd(k)?;
    let e = binom_u64(n as i64 - (ell * x.c) as i64, (r - ell) as i64);
    let mut prod = PowerProduct::new();
    prod.push(x.d.to_u64().expect("small D"), e as i128);
    Ok(prod.to_integer().expect("integer"))
}

/// Pair counts for the two cover sizes when `k = 1 (mod 3)`, `k >= 7`:
/// `(c, (c choose 2) k! / (4 * 6^(c-2)), (c-1) k! / (24 * 6^(c-2)))`.
pub fn cover_size_pair_counts(k: usize) -> Result<(usize, BigUint, BigUint)> {
    if k % 3 != 1 || k < 7 {
        return Err(invalid(format!("need k = 1 (mod 3) and k >= 7, got {k}")));
    }
    let c = cover_size(k);
    let kf = factorial(k as u64);
    let six = BigUint::from(6u32).pow((c - 2) as u32);
    let long = BigUint::from(c * (c - 1) / 2) * &kf / (&six * 4u32);
    let short = BigUint::from(c - 1) * kf / (six * 24u32);
    Ok((c, long, short))
}

/// The per-partition star count ratio between the disjoint cover of size
/// `c(k)` (two blocks of two colors) and of size `c(k)-1` (one block of
/// four), as an exact rational.
pub fn appendix_ratio(n: usize, r: usize, ell: usize, k: usize) -> Result<BigRational> {
    let (cov, c, q) = appendix_setup(n, r, ell, k)?;
    let pool = c - 2;
    let w = |size: i64| binom_u64(pool, size);
    let mut top = PowerProduct::new();
    for x in 0..=upto(pool, q - 2) {
        top.push((4 + 3 * x) as u64, exp_of(&cov.a[x as usize], w(x))?);
    }
    for y in 0..=upto(pool, q - 1) {
        top.push((2 + 3 * y) as u64, exp_of(&cov.b[y as usize], 2 * w(y))?);
    }
    for z in 1..=upto(pool, q) {
        top.push((3 * z) as u64, exp_of(&cov.cz[z as usize], w(z))?);
    }
    let mut bottom = PowerProduct::new();
    for x in 0..=upto(pool, q - 1) {
        bottom.push((4 + 3 * x) as u64, exp_of(&cov.d[x as usize], w(x))?);
    }
    for z in 1..=upto(pool, q) {
        bottom.push((3 * z) as u64, exp_of(&cov.e[z as usize], w(z))?);
    }
    top.divide(&bottom);
    Ok(top.to_rational())
}

/// The same ratio after cancelling with `B = D - A` and `B = E - C`.
pub fn appendix_ratio_reduced(n: usize, r: usize, ell: usize, k: usize) -> Result<BigRational> {
    let (cov, c, q) = appendix_setup(n, r, ell, k)?;
    let pool = c - 2;
    let w = |size: i64| binom_u64(pool, size);
    let mut prod = PowerProduct::new();
    for y in 1..=upto(pool, q - 1) {
        prod.push((2 + 3 * y) as u64, exp_of(&cov.b[y as usize], 2 * w(y))?);
    }
    for x in 1..=upto(pool, q - 2) {
        prod.push((4 + 3 * x) as u64, exp_of(&cov.a[x as usize], w(x))?);
    }
    let mut bottom = PowerProduct::new();
    for z in 1..=upto(pool, q) {
        bottom.push((3 * z) as u64, exp_of(&cov.b[z as usize], w(z))?);
    }
    for x in 1..=upto(pool, q - 1) {
        bottom.push((4 + 3 * x) as u64, exp_of(&cov.d[x as usize], w(x))?);
    }
    prod.divide(&bottom);
    Ok(prod.to_rational())
}

fn appendix_setup(n: usize, r: usize, ell: usize, k: usize) -> Result<(CoverageCount, i64, i64)> {
    if k % 3 != 1 || k < 7 {
        return Err(invalid(format!("need k = 1 (mod 3) and k >= 7, got {k}")));
    }
    if ell == 0 || ell >= r || r + 1 < 2 * ell {
        return Err(invalid(format!("need 2ell - 1 <= r and ell < r (r={r}, ell={ell})")));
    }
    let c = cover_size(k);
    let cov = coverage_counts(n, r, ell, c)?;
    let q = cov.q() as i64;
    Ok((cov, c as i64, q))
}

/// The lower bound the ratio is expected to meet: exactly 1 when
/// `floor(r/ell) = 1`; `(1 + 4/((3c-2)(3c-6)))^(sum B(x) binom(c-2,x))` when
/// `c <= q`; `((3q-1)^2 / ((3q-3)(3q+1)))^(B(q-1) binom(c-2,q-1))` otherwise.
pub fn appendix_ratio_lower_bound(n: usize, r: usize, ell: usize, k: usize) -> Result<BigRational> {
    let (cov, c, q) = appendix_setup(n, r, ell, k)?;
    if q == 1 {
        return Ok(BigRational::one());
    }
    let (base, exp) = if c <= q {
        let base = Ratio::new(
            BigInt::from((3 * c - 2) * (3 * c - 6) + 4),
            BigInt::from((3 * c - 2) * (3 * c - 6)),
        );
        let mut e = 0i128;
        for x in 1..=c - 2 {
            e += exp_of(&cov.b[x as usize], binom_u64(c - 2, x))?;
        }
        (base, e)
    } else {
        let base = Ratio::new(BigInt::from((3 * q - 1) * (3 * q - 1)), BigInt::from((3 * q - 3) * (3 * q + 1)));
        (base, exp_of(&cov.b[(q - 1) as usize], binom_u64(c - 2, q - 1))?)
    };
    let e = u32::try_from(exp).map_err(|_| Error::Budget("lower-bound exponent too large".into()))?;
    Ok(Ratio::new(base.numer().pow(e), base.denom().pow(e)))
}

/// The constant `4 * binom(|S|+1, 2) * binom(k!, 2) * binom(c, 2) * k`
/// bounding overlaps between star-coloring classes, with `|S|` the number
/// of ordered optimal splits of length `c`.
pub fn overlap_constant(k: usize, c: usize) -> Result<BigUint> {
    let s = ordered_splits(k, c)?.len() as u64;
    let kf = factorial(k as u64);
    let kf2 = &kf * (&kf - 1u32) / 2u32;
    Ok(BigUint::from(4u32) * ((s + 1) * s / 2) * kf2 * (c * c.saturating_sub(1) / 2) * k)
}

/// Lower end of the star-count bracket:
/// `(1 - A(k) ((k-1)/k)^binom(n-2ell, r-ell)) * star_sum`.
pub fn star_bracket_lower(n: usize, r: usize, ell: usize, k: usize, c: usize, sum: &BigUint) -> Result<BigRational> {
    let e = binom_u64(n as i64 - 2 * ell as i64, (r - ell) as i64);
    let e = u32::try_from(e).map_err(|_| Error::Budget("bracket exponent too large".into()))?;
    let decay = Ratio::new(BigInt::from(k - 1).pow(e), BigInt::from(k).pow(e));
    let a = BigRational::from_integer(BigInt::from(overlap_constant(k, c)?));
    Ok((BigRational::one() - a * decay) * BigRational::from_integer(BigInt::from(sum.clone())))
}

/// Which strengthening of the product inequality is certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlackClass {
    /// The product equals 1.
    Equality,
    /// At least 1 and no strengthening applies.
    AtLeastOne,
    /// Some matched pair is slack: at least `1 + m/(M^2 - m^2)`.
    MatchedSlack,
    /// Some unmatched `b_j` with `max(m, b_j) >= 3`: at least `6/5`.
    UnmatchedSlack,
}

/// Result of [`product_inequality_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductCheck {
    pub lhs: BigRational,
    /// `lhs >= 1`.
    pub holds: bool,
    /// Some `a_i < b_phi(i) + m`.
    pub matched_slack: bool,
    /// `lhs >= 1 + m/(M^2 - m^2)` (only meaningful with `matched_slack`).
    pub matched_bound_holds: bool,
    /// Some `b_j` outside the image of `phi` has `max(m, b_j) >= 3`.
    pub unmatched_slack: bool,
    /// `lhs >= 6/5`.
    pub six_fifths_holds: bool,
    /// `p < q` and `max(m, b_1, ..., b_q) >= 3`, the broader reading of the
    /// `6/5` condition, which does not by itself force `lhs >= 6/5`.
    pub broad_six_fifths_condition: bool,
    pub class: SlackClass,
}

/// Evaluates `m^(q-p) prod a_i prod b_j / (prod (a_i - m) prod (b_j + m))`
/// exactly and certifies which lower bound applies. `phi[i]` is the
/// zero-based index in `b` matched to `a[i]`.
pub fn product_inequality_check(a: &[u64], b: &[u64], m: u64, big_m: u64, phi: &[usize]) -> Result<ProductCheck> {
    let (p, q) = (a.len(), b.len());
    if !(2..=4).contains(&m) {
        return Err(Error::Hypothesis(format!("m={m} not in {{2,3,4}}")));
    }
    if q < p.max(1) {
        return Err(Error::Hypothesis(format!("need q >= max(p, 1), got p={p}, q={q}")));
    }
    if let Some(&x) = a.iter().find(|&&x| x < m + 2 || x > big_m) {
        return Err(Error::Hypothesis(format!("a value {x} outside [m+2, M]")));
    }
    if let Some(&x) = b.iter().find(|&&x| x < 2 || x > big_m) {
        return Err(Error::Hypothesis(format!("b value {x} outside [2, M]")));
    }
    if phi.len() != p || phi.iter().any(|&j| j >= q) {
        return Err(Error::Hypothesis("mapping must send each a_i to an index of b".into()));
    }
    let mut used = vec![false; q];
    for &j in phi {
        if std::mem::replace(&mut used[j], true) {
            return Err(Error::Hypothesis("mapping is not injective".into()));
        }
    }
    if let Some(i) = (0..p).find(|&i| a[i] > b[phi[i]] + m) {
        return Err(Error::Hypothesis(format!("a_{} = {} exceeds b + m = {}", i + 1, a[i], b[phi[i]] + m)));
    }
    let mut num = BigInt::from(m).pow((q - p) as u32);
    let mut den = BigInt::one();
    for &x in a {
        num *= x;
        den *= x - m;
    }
    for &x in b {
        num *= x;
        den *= x + m;
    }
    let lhs = Ratio::new(num, den);
    let one = BigRational::one();
    let matched_slack = (0..p).any(|i| a[i] < b[phi[i]] + m);
    // with M = m no a_i fits and the bound is vacuous
    let matched_bound = if big_m > m {
        &one + Ratio::new(BigInt::from(m), BigInt::from(big_m * big_m - m * m))
    } else {
        one.clone()
    };
    let unmatched_slack = (0..q).any(|j| !used[j] && m.max(b[j]) >= 3);
    let six_fifths = Ratio::new(BigInt::from(6), BigInt::from(5));
    let broad = p < q && b.iter().copied().chain([m]).max().unwrap_or(0) >= 3;
    let class = if lhs == one {
        SlackClass::Equality
    } else if unmatched_slack {
        SlackClass::UnmatchedSlack
    } else if matched_slack {
        SlackClass::MatchedSlack
    } else {
        SlackClass::AtLeastOne
    };
    Ok(ProductCheck {
        holds: lhs >= one,
        matched_bound_holds: lhs >= matched_bound,
        six_fifths_holds: lhs >= six_fifths,
        lhs,
        matched_slack,
        unmatched_slack,
        broad_six_fifths_condition: broad,
        class,
    })
}

/// Log-domain rendering of a ratio for reports.
pub fn log10_ratio(x: &BigRational) -> f64 {
    fn log10_big(v: &BigInt) -> f64 {
        let bits = v.bits();
        if bits < 1000 {
            return v.to_f64().unwrap_or(f64::NAN).abs().log10();
        }
        let shift = bits - 64;
        let top = (v.abs() >> shift).to_f64().unwrap_or(f64::NAN);
        top.log10() + shift as f64 * std::f64::consts::LOG10_2
    }
    log10_big(x.numer()) - log10_big(x.denom())
}

/// The optimal split shapes that feed the cover-size comparison, as a
/// sanity accessor for reports.
pub fn split_shapes(k: usize) -> Result<Vec<Vec<usize>>> {
    Ok(optimal_splits(k)?.into_iter().map(|s| s.parts().to_vec()).collect())
}

/// `split_partition_pairs(k, c) / split_partition_pairs(k, c-1)` halved,
/// i.e. `3c/2` for `k = 1 (mod 3)`.
pub fn halved_cover_size_ratio(k: usize) -> Result<BigRational> {
    let (c, _, _) = cover_size_pair_counts(k)?;
    let long = split_partition_pairs(k, c)?;
    let short = split_partition_pairs(k, c - 1)?;
    Ok(Ratio::new(BigInt::from(long), BigInt::from(short) * 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete_from_cover, disjoint_blocks, two_set_cover};

    #[test]
    fn coverage_examples() {
        // single term at z = c
        assert_eq!(coverage(12, 8, 2, 3, 3), binom(6, 2));
        // B(1) at n=8, r=4, ell=2, c=3 against brute force
        let brute = coverage_by_enumeration(8, 4, 2, 3).unwrap();
        let cc = coverage_counts(8, 4, 2, 3).unwrap();
        assert_eq!(cc.b[1], brute.b[1]);
        assert_eq!(cc, brute);
        // x + 2 sets cannot fit
        let cc = coverage_counts(12, 5, 2, 4).unwrap();
        assert!(cc.a[1].is_zero());
    }

    #[test]
    fn identities_and_brute_force_sweep() {
        for n in 4..=11 {
            for r in 2..=5.min(n) {
                for ell in 1..r {
                    for c in 2..=4 {
                        if c * ell > n {
                            continue;
                        }
                        let cc = coverage_counts(n, r, ell, c).unwrap();
                        for x in 0..=c - 2 {
                            assert_eq!(cc.b[x], &cc.d[x] - &cc.a[x]);
                        }
                        for x in 0..c {
                            assert_eq!(&cc.b[x] + &cc.cz[x], cc.e[x]);
                        }
                        assert_eq!(cc, coverage_by_enumeration(n, r, ell, c).unwrap(), "n={n} r={r} ell={ell} c={c}");
                    }
                }
            }
        }
    }

    #[test]
    fn mask_counts_match_enumeration() {
        let cover = CoverConfig::from_vertex_lists(2, &[vec![1, 2], vec![2, 3], vec![5, 6]]).unwrap();
        let counts = cover_mask_counts(9, 4, &cover).unwrap();
        let mut brute: BTreeMap<u32, u64> = BTreeMap::new();
        for e in Hypergraph::complete(9, 4).unwrap().edges() {
            *brute.entry(anchor_mask(*e, &cover)).or_default() += 1;
        }
        assert_eq!(counts, brute);
    }

    #[test]
    fn star_sum_examples() {
        let s = crate::families::star(7, 3, 2).unwrap();
        let cover = CoverConfig::from_vertex_lists(2, &[vec![1, 2]]).unwrap();
        assert_eq!(star_sum(&s, &cover, 3, 2).unwrap(), pow_u(3, s.edge_count() as u64));
        for y in 0..3 {
            let cover = two_set_cover(9, 3, y).unwrap();
            let h = complete_from_cover(9, 5, &cover).unwrap();
            let expected = pow_u(4, binom_u64(6, 2)) * 6u32;
            assert_eq!(star_sum(&h, &cover, 4, 3).unwrap(), expected);
            assert_eq!(star_sum_complete(9, 5, &cover, 4).unwrap(), expected);
        }
    }

    #[test]
    fn alpha_examples() {
        let p = AlphaParameters { n: 9, r: 3, k: 5, ell: 2 };
        assert_eq!(alpha(p).unwrap(), pow_u(6, 7) * 20u32);
        let p = AlphaParameters { n: 10, r: 4, k: 4, ell: 2 };
        assert_eq!(alpha(p).unwrap(), pow_u(4, binom_u64(8, 2)) * 6u32);
        assert!(alpha(AlphaParameters { n: 9, r: 3, k: 3, ell: 2 }).is_err());
    }

    #[test]
    fn alpha_matches_star_sum_and_literal_products() {
        for k in 4..=10 {
            for ell in 1..=2 {
                for r in ell + 1..=5 {
                    for n in (r.max(ell * cover_size(k)))..=r.max(ell * cover_size(k)) + 4 {
                        let p = AlphaParameters { n, r, k, ell };
                        let a = alpha(p).unwrap();
                        assert_eq!(a, alpha_uncollapsed(p).unwrap());
                        let cover = disjoint_blocks(n, r, cover_size(k), ell).unwrap();
                        let s = star_sum_complete(n, r, &cover, k).unwrap();
                        if k == 4 && ell > 0 {
                            // every two-set cover gives the same value
                            assert_eq!(a, s);
                        } else {
                            assert_eq!(a, s, "n={n} r={r} k={k} ell={ell}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn s_of_y_examples() {
        // r - 2ell + y < 0: B2 vanishes
        let big_b = binom_u64(7, 1);
        let expected = pow_u(4, big_b) * 6u32
            + (BigInt::from(pow_u(3, big_b)) - BigInt::from(pow_u(2, big_b)) * 3u32 + 3u32).to_biguint().unwrap() * 8u32;
        assert_eq!(generalized_star_count(10, 4, 3, 0).unwrap(), expected);
        let s0 = generalized_star_count(8, 3, 2, 0).unwrap();
        let s1 = generalized_star_count(8, 3, 2, 1).unwrap();
        assert!(s1 > s0);
        for n in 8..=20 {
            assert!(generalized_star_count(n, 3, 2, 1).unwrap() >= generalized_star_lower_estimate(n, 3, 2));
        }
        assert!(generalized_star_count(8, 3, 2, 2).is_err());
    }

    #[test]
    fn s_of_y_counts_generalized_colorings_on_small_case() {
        // y = ell - 1 and small n: compare with direct enumeration of
        // colorings anchored per color
        use crate::count::{classify_star, StarClass};
        use crate::hypergraph::KneserColoring;
        let (n, r, ell) = (4, 2, 1);
        let cover = two_set_cover(n, ell, 0).unwrap();
        let h = complete_from_cover(n, r, &cover).unwrap();
        let m = h.edge_count();
        let mut generalized = 0u64;
        let mut colors = vec![1usize; m];
        loop {
            let col = KneserColoring::new(4, colors.clone()).unwrap();
            if let Ok(class) = classify_star(&h, &cover, 4, ell, &col) {
                if class != StarClass::NonStar {
                    generalized += 1;
                }
            }
            let mut i = 0;
            while i < m && colors[i] == 4 {
                colors[i] = 1;
                i += 1;
            }
            if i == m {
                break;
            }
            colors[i] += 1;
        }
        // S(y) counts each (split, partition) pattern once and therefore
        // bounds the anchored colorings from above at this size
        assert!(BigUint::from(generalized) <= generalized_star_count(n, r, ell, 0).unwrap());
    }

    #[test]
    fn t1_bound_example() {
        assert_eq!(t1_upper_bound(6, 2, 4, 1).unwrap(), pow_u(4, 6) * 6u32);
        for k in 4..=9 {
            for (n, r, ell) in [(8, 3, 1), (9, 4, 2), (10, 3, 2)] {
                if n < ell * cover_size(k) {
                    continue;
                }
                let p = AlphaParameters { n, r, k, ell };
                assert!(t1_upper_bound(n, r, k, ell).unwrap() >= alpha(p).unwrap());
            }
        }
    }

    #[test]
    fn pair_counts_and_halved_ratio() {
        for k in [7usize, 10, 13] {
            let (c, long, short) = cover_size_pair_counts(k).unwrap();
            assert_eq!(long, split_partition_pairs(k, c).unwrap());
            assert_eq!(short, split_partition_pairs(k, c - 1).unwrap());
            assert_eq!(halved_cover_size_ratio(k).unwrap(), Ratio::new(BigInt::from(3 * c), BigInt::from(2)));
        }
    }

    #[test]
    fn appendix_ratio_cases() {
        // r = 2ell - 1
        for (n, r, ell) in [(12, 3, 2), (15, 5, 3)] {
            assert_eq!(appendix_ratio(n, r, ell, 7).unwrap(), BigRational::one());
        }
        // c <= q: k = 7 (c = 3), r = 6, ell = 2 (q = 3)
        let x = appendix_ratio(10, 6, 2, 7).unwrap();
        assert!(x > BigRational::one());
        assert!(x >= appendix_ratio_lower_bound(10, 6, 2, 7).unwrap());
        // c >= q + 1: k = 10 (c = 4), r = 4, ell = 2 (q = 2)
        let x = appendix_ratio(12, 4, 2, 10).unwrap();
        assert!(x >= appendix_ratio_lower_bound(12, 4, 2, 10).unwrap());
        assert!(x > BigRational::one());
        assert_eq!(x, appendix_ratio_reduced(12, 4, 2, 10).unwrap());
        assert!(appendix_ratio(12, 4, 2, 8).is_err());
    }

    #[test]
    fn appendix_ratio_matches_star_sums() {
        for (n, r, ell, k) in [(9, 4, 1, 7), (10, 4, 2, 7), (10, 3, 1, 10)] {
            let c = cover_size(k);
            let long = disjoint_blocks(n, r, c, ell).unwrap();
            let short = disjoint_blocks(n, r, c - 1, ell).unwrap();
            let s0 = star_sum_complete(n, r, &long, k).unwrap();
            let s1 = star_sum_complete(n, r, &short, k).unwrap();
            let (_, p0, p1) = cover_size_pair_counts(k).unwrap();
            // each pair contributes the same product
            let per0 = Ratio::new(BigInt::from(s0), BigInt::from(p0));
            let per1 = Ratio::new(BigInt::from(s1), BigInt::from(p1));
            assert_eq!(per0 / per1, appendix_ratio(n, r, ell, k).unwrap());
        }
    }

    #[test]
    fn product_inequality_examples() {
        let x = product_inequality_check(&[], &[2], 2, 2, &[]).unwrap();
        assert_eq!(x.lhs, BigRational::one());
        assert_eq!(x.class, SlackClass::Equality);
        let x = product_inequality_check(&[], &[3], 3, 3, &[]).unwrap();
        assert_eq!(x.lhs, Ratio::new(BigInt::from(3), BigInt::from(2)));
        assert!(x.six_fifths_holds);
        // the broad reading of the 6/5 clause admits a product equal to 1
        let x = product_inequality_check(&[5], &[3, 2], 2, 5, &[0]).unwrap();
        assert!(x.broad_six_fifths_condition);
        assert!(!x.unmatched_slack);
        assert_eq!(x.lhs, BigRational::one());
        // hypothesis violations are errors
        assert!(product_inequality_check(&[3], &[2], 2, 5, &[0]).is_err());
        assert!(product_inequality_check(&[6], &[2], 2, 9, &[0]).is_err());
        assert!(product_inequality_check(&[], &[2], 5, 5, &[]).is_err());
        assert!(product_inequality_check(&[4, 4], &[2, 3], 2, 5, &[1, 1]).is_err());
    }

    #[test]
    fn overlap_constant_value() {
        // k = 4, c = 2: |S| = 1, binom(2,2) = 1, binom(24,2) = 276
        assert_eq!(overlap_constant(4, 2).unwrap(), BigUint::from(4u32 * 276 * 4));
    }

    #[test]
    fn power_product_roundtrip() {
        let mut p = PowerProduct::new();
        p.push(12, 3);
        p.push(18, -2);
        assert_eq!(p.to_rational(), Ratio::new(BigInt::from(1728), BigInt::from(324)));
        assert!(p.to_integer().is_none());
        assert!(log10_ratio(&p.to_rational()) > 0.0);
    }
}
