//! Hypergraph families: (C,r)-complete hypergraphs, candidate covers,
//! Ahlswede–Khachatrian families and the intersecting Turán number.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::arith::{binom, subsets_of_size};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{intersect_size, Edge, Hypergraph, MAX_VERTICES};

/// Largest `binom(n, r)` for which [`all_hypergraphs`] will enumerate.
pub const ENUMERATION_EDGE_CAP: usize = 24;

/// An ordered list of distinct `ell`-subsets of the vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoverConfig {
    ell: usize,
    sets: Vec<Edge>,
}

impl CoverConfig {
    pub fn new(ell: usize, sets: Vec<Edge>) -> Result<Self> {
        if ell == 0 {
            return Err(invalid("cover sets must be nonempty"));
        }
        if sets.is_empty() {
            return Err(invalid("a cover needs at least one set"));
        }
        if let Some(t) = sets.iter().find(|t| t.len() != ell) {
            return Err(Error::InvalidEdge(format!("cover set {t:?} does not have {ell} elements")));
        }
        for (i, t) in sets.iter().enumerate() {
            if sets[..i].contains(t) {
                return Err(Error::DuplicateEdge(format!("cover set {t:?}")));
            }
        }
        Ok(CoverConfig { ell, sets })
    }

    pub fn from_vertex_lists(ell: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let sets = lists.iter().map(|l| Edge::from_vertices(l)).collect::<Result<Vec<_>>>()?;
        Self::new(ell, sets)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn c(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Edge] {
        &self.sets
    }

    pub fn max_vertex(&self) -> usize {
        self.sets.iter().map(|t| t.max_vertex()).max().unwrap_or(0)
    }

    pub fn intersection_size(&self, i: usize, j: usize) -> usize {
        intersect_size(self.sets[i], self.sets[j])
    }

    pub fn union_size(&self, i: usize, j: usize) -> usize {
        self.sets[i].union(self.sets[j]).len()
    }

    /// Pairwise intersection sizes in pair order (1,2),(1,3),...,(c-1,c).
    pub fn pairwise_intersections(&self) -> Vec<usize> {
        let c = self.c();
        let mut out = Vec::with_capacity(c * (c.saturating_sub(1)) / 2);
        for i in 0..c {
            for j in i + 1..c {
                out.push(self.intersection_size(i, j));
            }
        }
        out
    }

    pub fn is_pairwise_disjoint(&self) -> bool {
        self.pairwise_intersections().iter().all(|&x| x == 0)
    }

    /// Short stable label, e.g. `c=2;l=2;caps=[1]`.
    pub fn signature(&self) -> String {
        let caps: Vec<String> = self.pairwise_intersections().iter().map(|x| x.to_string()).collect();
        format!("c={};l={};caps=[{}]", self.c(), self.ell, caps.join(","))
    }

    /// True when every edge of `h` contains some cover set.
    pub fn covers(&self, h: &Hypergraph) -> bool {
        h.edges().iter().all(|&e| self.sets.iter().any(|&t| e.contains(t)))
    }
}

/// `H_{C,r}(n)`: every `r`-subset of `[n]` containing a member of `C`.
pub fn complete_from_cover(n: usize, r: usize, cover: &CoverConfig) -> Result<Hypergraph> {
    if cover.ell() >= r {
        return Err(invalid(format!("need ell < r, got ell={}, r={r}", cover.ell())));
    }
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices(n));
    }
    if cover.max_vertex() > n {
        return Err(invalid(format!("cover uses vertex {} but n={n}", cover.max_vertex())));
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut edges = BTreeSet::new();
    for &t in cover.sets() {
        let rest = full & !t.mask();
        let free: Vec<u64> = crate::arith::bits(rest).map(|b| 1u64 << b).collect();
        for pick in subsets_of_size(free.len(), r - cover.ell()) {
            let extra = crate::arith::bits(pick).fold(0u64, |m, i| m | free[i]);
            edges.insert(Edge::from_mask(t.mask() | extra));
        }
    }
    Ok(Hypergraph::from_distinct_unchecked(n, r, edges.into_iter().collect()))
}

/// The star `S_{n,r,ell}`: all `r`-sets containing `{1..ell}`.
pub fn star(n: usize, r: usize, ell: usize) -> Result<Hypergraph> {
    let cover = CoverConfig::new(ell, vec![block(0, ell)])?;
    complete_from_cover(n, r, &cover)
}

fn block(start: usize, len: usize) -> Edge {
    Edge::from_mask(((1u64 << len) - 1) << start)
}

/// `c(k) = ceil(k/3)`.
pub fn cover_size(k: usize) -> usize {
    k.div_ceil(3)
}

/// `c(k)` consecutive disjoint `ell`-blocks `{1..ell}, {ell+1..2ell}, ...`.
pub fn disjoint_cover(n: usize, r: usize, k: usize, ell: usize) -> Result<CoverConfig> {
    let c = cover_size(k);
    disjoint_blocks(n, r, c, ell)
}

pub(crate) fn disjoint_blocks(n: usize, r: usize, c: usize, ell: usize) -> Result<CoverConfig> {
    if ell == 0 || c == 0 {
        return Err(invalid("need ell >= 1 and c >= 1"));
    }
    if n < r.max(ell * c) {
        return Err(invalid(format!(
            "n={n} too small: {c} disjoint {ell}-sets and r={r} need {} vertices",
            r.max(ell * c)
        )));
    }
    CoverConfig::new(ell, (0..c).map(|i| block(i * ell, ell)).collect())
}

/// `H_{n,r,k,ell}`, the complete hypergraph over the disjoint cover.
pub fn extremal_hypergraph(n: usize, r: usize, k: usize, ell: usize) -> Result<Hypergraph> {
    complete_from_cover(n, r, &disjoint_cover(n, r, k, ell)?)
}

/// Two `ell`-sets meeting in exactly `y` vertices: `{1..ell}` and
/// `{ell-y+1 .. 2ell-y}`.
pub fn two_set_cover(n: usize, ell: usize, y: usize) -> Result<CoverConfig> {
    if y >= ell {
        return Err(invalid(format!("intersection {y} must be below ell={ell}")));
    }
    if n < 2 * ell - y {
        return Err(invalid(format!("n={n} too small for two {ell}-sets meeting in {y}")));
    }
    CoverConfig::new(ell, vec![block(0, ell), block(ell - y, ell)])
}

/// Candidate covers by case: the disjoint cover when `k` is 2 or 3 or
/// `r >= 2ell-1`; for `k = 4` the pair meeting in `ell-1` vertices (every
/// intersection `0..ell` when `wide` is set); otherwise one representative
/// per Venn-region pattern of `c(k)` sets with all pairwise unions above `r`.
pub fn candidate_covers(n: usize, r: usize, k: usize, ell: usize, wide: bool) -> Result<Vec<CoverConfig>> {
    if k < 2 || ell == 0 || ell >= r {
        return Err(invalid(format!("need k >= 2 and 1 <= ell < r (k={k}, r={r}, ell={ell})")));
    }
    if k == 4 {
        let ys: Vec<usize> = if wide { (0..ell).collect() } else { vec![ell - 1] };
        return ys
            .into_iter()
            .filter(|&y| n >= (2 * ell - y).max(r))
            .map(|y| two_set_cover(n, ell, y))
            .collect();
    }
    if k <= 3 || r + 1 >= 2 * ell {
        return Ok(vec![disjoint_cover(n, r, k, ell)?]);
    }
    Ok(union_constrained_covers(n, r, cover_size(k), ell))
}

/// All patterns of `c` distinct `ell`-sets on at most `n` vertices with
/// `|t_i ∪ t_j| > r` for every pair, up to permuting the sets. A pattern
/// is the vector of Venn-region sizes, which fixes `H_{C,r}(n)` up to
/// isomorphism.
pub fn union_constrained_covers(n: usize, r: usize, c: usize, ell: usize) -> Vec<CoverConfig> {
    let max_cap = (2 * ell).saturating_sub(r + 1);
    let regions: Vec<u32> = (1u32..1 << c).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut counts = vec![0usize; regions.len()];
    let mut remaining = vec![ell; c];
    let mut caps = vec![0usize; c * c];
    venn_search(
        &regions, 0, n, max_cap, c, &mut counts, &mut remaining, &mut caps, &mut |counts| {
            let key = canonical_venn(&regions, counts, c);
            if seen.insert(key.clone()) {
                out.push(realize_venn(&regions, &key, c, ell));
            }
        },
    );
    out.sort_by(|a, b| a.signature().cmp(&b.signature()).then_with(|| a.sets().cmp(b.sets())));
    out
}

#[allow(clippy::too_many_arguments)]
fn venn_search(
    regions: &[u32],
    idx: usize,
    vertices_left: usize,
    max_cap: usize,
    c: usize,
    counts: &mut Vec<usize>,
    remaining: &mut Vec<usize>,
    caps: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if idx == regions.len() {
        if remaining.iter().all(|&x| x == 0) {
            emit(counts);
        }
        return;
    }
    let region = regions[idx];
    let members: Vec<usize> = (0..c).filter(|&i| region >> i & 1 == 1).collect();
    let mut limit = members.iter().map(|&i| remaining[i]).min().unwrap_or(0).min(vertices_left);
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            limit = limit.min(max_cap - caps[i * c + j]);
        }
    }
    for x in 0..=limit {
        counts[idx] = x;
        for &i in &members {
            remaining[i] -= x;
        }
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                caps[i * c + j] += x;
            }
        }
        venn_search(regions, idx + 1, vertices_left - x, max_cap, c, counts, remaining, caps, emit);
        for &i in &members {
            remaining[i] += x;
        }
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                caps[i * c + j] -= x;
            }
        }
    }
    counts[idx] = 0;
}

fn canonical_venn(regions: &[u32], counts: &[usize], c: usize) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    let mut perm: Vec<usize> = (0..c).collect();
    loop {
        let mut image = vec![0usize; regions.len()];
        for (ri, &reg) in regions.iter().enumerate() {
            let mapped = (0..c).filter(|&i| reg >> i & 1 == 1).fold(0u32, |m, i| m | 1 << perm[i]);
            image[mapped as usize - 1] = counts[ri];
        }
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.expect("at least one permutation")
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn realize_venn(regions: &[u32], counts: &[usize], c: usize, ell: usize) -> CoverConfig {
    let mut sets = vec![0u64; c];
    let mut next = 0usize;
    // Place the largest regions first so shared vertices get the small labels.
    let mut order: Vec<usize> = (0..regions.len()).collect();
    order.sort_by_key(|&ri| std::cmp::Reverse(regions[ri].count_ones()));
    for ri in order {
        for _ in 0..counts[ri] {
            for (i, set) in sets.iter_mut().enumerate() {
                if regions[ri] >> i & 1 == 1 {
                    *set |= 1u64 << next;
                }
            }
            next += 1;
        }
    }
    CoverConfig::new(ell, sets.into_iter().map(Edge::from_mask).collect())
        .expect("Venn pattern realizes distinct ell-sets")
}

/// Parameters of the family `F_s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AKParameters {
    pub n: usize,
    pub r: usize,
    pub ell: usize,
    pub s: usize,
}

/// `F_s`: the `r`-sets meeting `[1, ell+2s]` in at least `ell+s` vertices.
pub fn ak_family(p: AKParameters) -> Result<Hypergraph> {
    let AKParameters { n, r, ell, s } = p;
    if ell == 0 || ell >= r {
        return Err(invalid(format!("need 1 <= ell < r (r={r}, ell={ell})")));
    }
    if s > r - ell {
        return Err(invalid(format!("s={s} exceeds r-ell={}", r - ell)));
    }
    if n < r {
        return Err(invalid(format!("n={n} below r={r}")));
    }
    let window = ell + 2 * s;
    let window_mask = if window >= 64 { u64::MAX } else { (1u64 << window.min(n)) - 1 };
    let edges = Hypergraph::complete(n, r)?
        .edges()
        .iter()
        .copied()
        .filter(|e| (e.mask() & window_mask).count_ones() as usize >= ell + s)
        .collect();
    Ok(Hypergraph::from_distinct_unchecked(n, r, edges))
}

/// `|F_s|` from the closed sum.
pub fn ak_family_size(n: usize, r: usize, ell: usize, s: usize) -> BigUint {
    let w = (ell + 2 * s).min(n) as i64;
    let (n, r) = (n as i64, r as i64);
    ((ell + s) as i64..=r.min(w)).map(|j| binom(w, j) * binom(n - w, r - j)).sum()
}

/// Largest pairwise `ell`-intersecting family of `r`-subsets of `[n]`.
pub fn turan_number(n: usize, r: usize, ell: usize) -> Result<BigUint> {
    Ok(turan_with_optimal_s(n, r, ell)?.0)
}

/// The Turán number together with every `s` whose `F_s` attains it. Below
/// `n = 2r - ell` every two `r`-sets already meet in `ell` vertices and the
/// list is empty.
pub fn turan_with_optimal_s(n: usize, r: usize, ell: usize) -> Result<(BigUint, Vec<usize>)> {
    if ell == 0 || ell >= r || n < r {
        return Err(invalid(format!("need n >= r > ell >= 1 (n={n}, r={r}, ell={ell})")));
    }
    if n + ell <= 2 * r {
        return Ok((binom(n as i64, r as i64), Vec::new()));
    }
    let sizes: Vec<BigUint> = (0..=r - ell).map(|s| ak_family_size(n, r, ell, s)).collect();
    let best = sizes.iter().max().cloned().expect("nonempty range");
    let winners = (0..sizes.len()).filter(|&s| sizes[s] == best).collect();
    Ok((best, winners))
}

/// Every hypergraph on `[n]` with uniformity `r`, in order of the bit mask
/// over the lexicographically ordered complete edge list.
pub fn all_hypergraphs(n: usize, r: usize) -> Result<AllHypergraphs> {
    let complete = Hypergraph::complete(n, r)?;
    if complete.edge_count() > ENUMERATION_EDGE_CAP {
        return Err(Error::Budget(format!(
            "binom({n},{r}) = {} edges exceeds the enumeration cap of {ENUMERATION_EDGE_CAP}",
            complete.edge_count()
        )));
    }
    let total = 1u64 << complete.edge_count();
    Ok(AllHypergraphs { complete, next: 0, end: total })
}

/// Restartable, shardable enumeration over subsets of the complete edge set.
#[derive(Clone, Debug)]
pub struct AllHypergraphs {
    complete: Hypergraph,
    next: u64,
    end: u64,
}

impl AllHypergraphs {
    pub fn total(&self) -> u64 {
        1u64 << self.complete.edge_count()
    }

    /// Restricts to indices in `[start, end)`.
    pub fn shard(mut self, start: u64, end: u64) -> Self {
        let total = self.total();
        self.next = start.min(total);
        self.end = end.min(total);
        self
    }

    pub fn nth_hypergraph(&self, index: u64) -> Hypergraph {
        let all = self.complete.edges();
        let edges = crate::arith::bits(index).map(|i| all[i]).collect();
        Hypergraph::from_distinct_unchecked(self.complete.n(), self.complete.r(), edges)
    }
}

impl Iterator for AllHypergraphs {
    type Item = Hypergraph;

    fn next(&mut self) -> Option<Hypergraph> {
        if self.next >= self.end {
            return None;
        }
        let h = self.nth_hypergraph(self.next);
        self.next += 1;
        Some(h)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next.min(self.end)) as usize;
        (left, Some(left))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_cover_edges(n: usize, r: usize, cover: &CoverConfig) -> usize {
        Hypergraph::complete(n, r)
            .unwrap()
            .edges()
            .iter()
            .filter(|e| cover.sets().iter().any(|&t| e.contains(t)))
            .count()
    }

    #[test]
    fn complete_from_cover_examples() {
        let c = CoverConfig::from_vertex_lists(1, &[vec![1], vec![2]]).unwrap();
        assert_eq!(complete_from_cover(5, 2, &c).unwrap().edge_count(), 7);
        let c = CoverConfig::from_vertex_lists(2, &[vec![1, 2]]).unwrap();
        assert_eq!(complete_from_cover(5, 3, &c).unwrap().edge_count(), 3);
        let c = CoverConfig::from_vertex_lists(2, &[vec![1, 2], vec![3, 4]]).unwrap();
        let h = complete_from_cover(6, 3, &c).unwrap();
        assert_eq!(h.edge_count(), brute_cover_edges(6, 3, &c));
        assert_eq!(h.edge_count(), 8);
        assert!(c.covers(&h));
    }

    #[test]
    fn complete_from_cover_rejects_out_of_range() {
        let c = CoverConfig::from_vertex_lists(1, &[vec![7]]).unwrap();
        assert!(complete_from_cover(5, 2, &c).is_err());
        let c = CoverConfig::from_vertex_lists(2, &[vec![1, 2]]).unwrap();
        assert!(complete_from_cover(5, 2, &c).is_err());
    }

    #[test]
    fn cover_validation() {
        assert!(CoverConfig::from_vertex_lists(2, &[vec![1, 2], vec![2, 1]]).is_err());
        assert!(CoverConfig::from_vertex_lists(2, &[vec![1, 2, 3]]).is_err());
        assert!(CoverConfig::new(1, vec![]).is_err());
    }

    #[test]
    fn disjoint_cover_examples() {
        let c = disjoint_cover(10, 3, 6, 2).unwrap();
        assert_eq!(c.sets(), CoverConfig::from_vertex_lists(2, &[vec![1, 2], vec![3, 4]]).unwrap().sets());
        let c = disjoint_cover(10, 2, 7, 1).unwrap();
        assert_eq!(c.c(), 3);
        assert_eq!(c.sets()[2].vertices(), vec![3]);
        assert!(disjoint_cover(5, 3, 12, 2).is_err());
    }

    #[test]
    fn candidate_cover_cases() {
        let a = candidate_covers(10, 3, 5, 2, false).unwrap();
        assert_eq!(a.len(), 1);
        assert!(a[0].is_pairwise_disjoint());
        assert_eq!(a[0].c(), 2);

        let b = candidate_covers(10, 3, 4, 2, false).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].pairwise_intersections(), vec![1]);
        let wide = candidate_covers(10, 3, 4, 2, true).unwrap();
        assert_eq!(wide.len(), 2);

        let c = candidate_covers(12, 4, 5, 3, false).unwrap();
        let mut caps: Vec<usize> = c.iter().map(|x| x.pairwise_intersections()[0]).collect();
        caps.sort();
        assert_eq!(caps, vec![0, 1]);
        assert!(c.iter().all(|x| x.union_size(0, 1) > 4));
    }

    #[test]
    fn union_constraint_matches_brute_filter() {
        // three 3-sets, r=4: unions > 4 means every pairwise intersection <= 1
        for x in union_constrained_covers(12, 4, 3, 3) {
            assert!(x.pairwise_intersections().iter().all(|&y| y <= 1));
        }
        // patterns with all caps 0, one cap 1, two caps 1 (path), three caps 1
        // pairwise-shared or a common vertex
        let found = union_constrained_covers(12, 4, 3, 3);
        let mut sigs: Vec<String> = found.iter().map(|c| c.signature()).collect();
        sigs.sort();
        sigs.dedup();
        assert_eq!(sigs.len(), 4);
        assert_eq!(found.len(), 5);
    }

    #[test]
    fn ak_examples() {
        let f = ak_family(AKParameters { n: 5, r: 2, ell: 1, s: 0 }).unwrap();
        assert_eq!(f.edge_count(), 4);
        let f = ak_family(AKParameters { n: 5, r: 3, ell: 2, s: 1 }).unwrap();
        assert_eq!(f.edge_count(), 4);
        assert!(f.edges().iter().all(|e| e.max_vertex() <= 4));
        let f = ak_family(AKParameters { n: 4, r: 2, ell: 1, s: 1 }).unwrap();
        assert_eq!(f.edge_count(), 3);
        assert!(ak_family(AKParameters { n: 5, r: 2, ell: 1, s: 2 }).is_err());
    }

    #[test]
    fn ak_families_are_intersecting_and_sized() {
        for n in 3..=9 {
            for r in 2..=4.min(n) {
                for ell in 1..r {
                    for s in 0..=r - ell {
                        let f = ak_family(AKParameters { n, r, ell, s }).unwrap();
                        assert!(f.is_intersecting(ell), "n={n} r={r} ell={ell} s={s}");
                        assert_eq!(BigUint::from(f.edge_count()), ak_family_size(n, r, ell, s));
                    }
                }
            }
        }
    }

    #[test]
    fn turan_values() {
        assert_eq!(turan_number(5, 2, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(turan_number(4, 2, 1).unwrap(), BigUint::from(3u32));
        assert_eq!(turan_number(5, 3, 2).unwrap(), BigUint::from(4u32));
        let (_, ties) = turan_with_optimal_s(4, 2, 1).unwrap();
        assert_eq!(ties, vec![0, 1]);
        let (v, ties) = turan_with_optimal_s(6, 3, 1).unwrap();
        assert_eq!(v, BigUint::from(10u32));
        assert_eq!(ties, vec![0, 1, 2]);
        let (_, ties) = turan_with_optimal_s(4, 3, 2).unwrap();
        assert!(ties.is_empty());
        assert!(turan_number(3, 3, 1).is_ok());
        assert!(turan_number(2, 3, 1).is_err());
    }

    #[test]
    fn enumeration_counts_and_shards() {
        assert_eq!(all_hypergraphs(4, 2).unwrap().count(), 64);
        assert_eq!(all_hypergraphs(5, 2).unwrap().count(), 1024);
        assert_eq!(all_hypergraphs(6, 2).unwrap().count(), 32768);
        assert!(all_hypergraphs(8, 2).is_err());
        let it = all_hypergraphs(4, 2).unwrap();
        let a: Vec<_> = it.clone().shard(0, 20).chain(it.clone().shard(20, 64)).collect();
        let b: Vec<_> = it.collect();
        assert_eq!(a, b);
    }
}
