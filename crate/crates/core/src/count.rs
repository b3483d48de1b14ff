//! Exact counting of Kneser colorings, minimum `ell`-covers and star
//! colorings.
//!
//! Two independent counters are provided. [`kappa_backtrack`] colors the
//! conflict graph vertex by vertex; color classes that have not been used
//! yet are interchangeable, so they are counted together, and states are
//! memoized on the set of future vertices each used class forbids.
//! [`kappa_chromatic`] builds the chromatic polynomial of the conflict graph
//! by deletion–contraction, switching to counting partitions into
//! independent sets once a subgraph is dense, and evaluates it.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{bits, pow_u, subsets_of_size};
use crate::error::{invalid, Error, Result};
use crate::families::CoverConfig;
use crate::hypergraph::{conflict_graph, is_kneser_coloring, ConflictGraph, Edge, Hypergraph, KneserColoring};
use crate::splits::{ordered_partitions, ordered_splits, ColorPartition, SplitVector};

/// Hard resource limits. Exceeding any of them is an error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest conflict graph handed to deletion–contraction.
    pub chromatic_vertices: usize,
    /// Recursive calls allowed in deletion–contraction.
    pub chromatic_calls: u64,
    /// Distinct states the backtracking counter may expand.
    pub backtrack_states: u64,
    /// State-edge steps allowed for the star-coloring state sweep.
    pub enumeration: u64,
    /// Largest number of (split, partition) pairs for inclusion–exclusion.
    pub ie_pairs: usize,
    /// Largest number of live inclusion–exclusion states.
    pub ie_states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            chromatic_vertices: 20,
            chromatic_calls: 20_000_000,
            backtrack_states: 2_000_000,
            enumeration: 200_000_000,
            ie_pairs: 10_000,
            ie_states: 1_000_000,
        }
    }
}

impl Budget {
    /// Multiplies every limit by `factor`.
    pub fn scaled(&self, factor: f64) -> Budget {
        let s = |x: u64| ((x as f64) * factor).round().max(1.0) as u64;
        Budget {
            chromatic_vertices: self.chromatic_vertices,
            chromatic_calls: s(self.chromatic_calls),
            backtrack_states: s(self.backtrack_states),
            enumeration: s(self.enumeration),
            ie_pairs: s(self.ie_pairs as u64) as usize,
            ie_states: s(self.ie_states as u64) as usize,
        }
    }
}

/// Number of `(k, ell)`-Kneser colorings of `h`.
pub fn kappa_backtrack(h: &Hypergraph, k: usize, ell: usize) -> Result<BigUint> {
    kappa_backtrack_with(h, k, ell, &Budget::default())
}

pub fn kappa_backtrack_with(h: &Hypergraph, k: usize, ell: usize, budget: &Budget) -> Result<BigUint> {
    if h.is_empty() {
        return Ok(BigUint::one());
    }
    let g = conflict_graph(h, ell)?;
    count_proper_colorings(&g, k, budget)
}

/// Proper colorings of `g` with `k` labelled colors.
pub fn count_proper_colorings(g: &ConflictGraph, k: usize, budget: &Budget) -> Result<BigUint> {
    let comps = components(g);
    let results: Vec<Result<BigUint>> = comps
        .par_iter()
        .map(|comp| {
            if comp.len() == 1 {
                Ok(BigUint::from(k))
            } else {
                ComponentCounter::new(g, comp, k, budget.backtrack_states).count()
            }
        })
        .collect();
    results.into_iter().try_fold(BigUint::one(), |acc, r| Ok(acc * r?))
}

fn components(g: &ConflictGraph) -> Vec<Vec<usize>> {
    let m = g.vertex_count();
    let mut seen = vec![false; m];
    let mut out = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            for &w in g.neighbors(comp[i]) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

type Mask = Vec<u64>;

struct ComponentCounter {
    k: usize,
    len: usize,
    /// For each position, the later positions adjacent to it.
    later: Vec<Mask>,
    memo: HashMap<(usize, usize, Vec<Mask>), BigUint>,
    states: u64,
    limit: u64,
}

impl ComponentCounter {
    fn new(g: &ConflictGraph, comp: &[usize], k: usize, limit: u64) -> Self {
        let mut order = comp.to_vec();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(p, &v)| (v, p)).collect();
        let words = order.len().div_ceil(64);
        let later = order
            .iter()
            .enumerate()
            .map(|(p, &v)| {
                let mut m = vec![0u64; words];
                for w in g.neighbors(v) {
                    let q = pos[w];
                    if q > p {
                        m[q / 64] |= 1u64 << (q % 64);
                    }
                }
                m
            })
            .collect();
        ComponentCounter { k, len: order.len(), later, memo: HashMap::new(), states: 0, limit }
    }

    fn count(mut self) -> Result<BigUint> {
        self.rec(0, 0, Vec::new())
    }

    fn rec(&mut self, p: usize, used: usize, masks: Vec<Mask>) -> Result<BigUint> {
        if p == self.len {
            return Ok(BigUint::one());
        }
        let key = (p, used, masks);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        self.states += 1;
        if self.states > self.limit {
            return Err(Error::Budget(format!("backtracking exceeded {} states", self.limit)));
        }
        let (_, _, masks) = &key;
        let masks = masks.clone();
        let (word, bit) = (p / 64, 1u64 << (p % 64));
        let nb = self.later[p].clone();
        let is_empty = |m: &Mask| m.iter().all(|&w| w == 0);
        let cleared: Vec<Mask> = masks
            .iter()
            .map(|m| {
                let mut m = m.clone();
                m[word] &= !bit;
                m
            })
            .collect();
        let child = |replace: Option<usize>, extra: bool| -> Vec<Mask> {
            let mut next: Vec<Mask> = Vec::with_capacity(cleared.len() + 1);
            for (i, m) in cleared.iter().enumerate() {
                if Some(i) == replace {
                    next.push(m.iter().zip(&nb).map(|(a, b)| a | b).collect());
                } else {
                    next.push(m.clone());
                }
            }
            if extra {
                next.push(nb.clone());
            }
            next.retain(|m| !is_empty(m));
            next.sort_unstable();
            next
        };
        let mut total = BigUint::zero();
        let mut i = 0;
        while i < masks.len() {
            let mut j = i + 1;
            while j < masks.len() && masks[j] == masks[i] {
                j += 1;
            }
            if masks[i][word] & bit == 0 {
                let sub = self.rec(p + 1, used, child(Some(i), false))?;
                total += sub * (j - i);
            }
            i = j;
        }
        let idle = used - masks.len();
        let with_nb = child(None, true);
        if idle > 0 {
            let sub = self.rec(p + 1, used, with_nb.clone())?;
            total += sub * idle;
        }
        if used < self.k {
            let sub = self.rec(p + 1, used + 1, with_nb)?;
            total += sub * (self.k - used);
        }
        self.memo.insert(key, total.clone());
        Ok(total)
    }
}

/// Chromatic polynomial in the monomial basis: `coefficients()[i]`
/// multiplies `x^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChromaticPolynomial {
    coeffs: Vec<BigInt>,
}

impl ChromaticPolynomial {
    fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ChromaticPolynomial { coeffs }
    }

    fn one() -> Self {
        ChromaticPolynomial { coeffs: vec![BigInt::one()] }
    }

    /// `x (x-1) ... (x-m+1)`.
    pub fn falling(m: usize) -> Self {
        (0..m).fold(Self::one(), |acc, i| acc.mul_linear(i as i64))
    }

    fn mul_linear(&self, root: i64) -> Self {
        // (x - root) * p
        let mut out = vec![BigInt::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= c * root;
        }
        Self::from_coeffs(out)
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    fn combine(&self, other: &Self, sign: i32) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let out = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_default();
                let b = other.coeffs.get(i).cloned().unwrap_or_default();
                if sign > 0 {
                    a + b
                } else {
                    a - b
                }
            })
            .collect();
        Self::from_coeffs(out)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: u64) -> BigInt {
        let x = BigInt::from(x);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    }
}

/// Chromatic polynomial of `g`.
pub fn chromatic_polynomial(g: &ConflictGraph, budget: &Budget) -> Result<ChromaticPolynomial> {
    let n = g.vertex_count();
    if n > budget.chromatic_vertices || n > 64 {
        return Err(Error::Budget(format!(
            "conflict graph has {n} vertices, deletion-contraction limit is {}",
            budget.chromatic_vertices.min(64)
        )));
    }
    let adj: Vec<u64> = (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect();
    let mut ctx = ChromContext { calls: 0, limit: budget.chromatic_calls, memo: HashMap::new() };
    chrom(&SmallGraph { adj }, &mut ctx)
}

struct ChromContext {
    calls: u64,
    limit: u64,
    memo: HashMap<Vec<u64>, ChromaticPolynomial>,
}

/// Evaluates the chromatic polynomial of the conflict graph at `k`.
pub fn kappa_chromatic(h: &Hypergraph, k: usize, ell: usize) -> Result<BigUint> {
    kappa_chromatic_with(h, k, ell, &Budget::default())
}

pub fn kappa_chromatic_with(h: &Hypergraph, k: usize, ell: usize, budget: &Budget) -> Result<BigUint> {
    if h.is_empty() {
        return Ok(BigUint::one());
    }
    let g = conflict_graph(h, ell)?;
    let value = chromatic_polynomial(&g, budget)?.eval(k as u64);
    value
        .to_biguint()
        .ok_or_else(|| Error::InvalidParameters(format!("negative chromatic value {value}")))
}

#[derive(Clone, Debug)]
struct SmallGraph {
    adj: Vec<u64>,
}

impl SmallGraph {
    fn n(&self) -> usize {
        self.adj.len()
    }

    fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    fn induced(&self, keep: &[usize]) -> SmallGraph {
        let adj = keep
            .iter()
            .map(|&v| {
                keep.iter()
                    .enumerate()
                    .filter(|(_, &w)| self.adj[v] >> w & 1 == 1)
                    .fold(0u64, |m, (i, _)| m | 1 << i)
            })
            .collect();
        SmallGraph { adj }
    }

    fn without_vertex(&self, v: usize) -> SmallGraph {
        let keep: Vec<usize> = (0..self.n()).filter(|&w| w != v).collect();
        self.induced(&keep)
    }

    /// Merges `v` into `u`.
    fn contract(&self, u: usize, v: usize) -> SmallGraph {
        let mut g = self.clone();
        let merged = (g.adj[u] | g.adj[v]) & !(1 << u) & !(1 << v);
        g.adj[u] = merged;
        for w in bits(merged) {
            g.adj[w] |= 1 << u;
        }
        g.without_vertex(v)
    }

    fn toggle_edge(&self, u: usize, v: usize) -> SmallGraph {
        let mut g = self.clone();
        g.adj[u] ^= 1 << v;
        g.adj[v] ^= 1 << u;
        g
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let mut left: u64 = if self.n() == 64 { u64::MAX } else { (1u64 << self.n()) - 1 };
        let mut out = Vec::new();
        while left != 0 {
            let start = left.trailing_zeros() as usize;
            let mut comp = 1u64 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let next = bits(frontier).fold(0u64, |m, w| m | self.adj[w]) & !comp;
                comp |= next;
                frontier = next;
            }
            left &= !comp;
            out.push(bits(comp).collect());
        }
        out
    }
}

fn chrom(g: &SmallGraph, ctx: &mut ChromContext) -> Result<ChromaticPolynomial> {
    ctx.calls += 1;
    if ctx.calls > ctx.limit {
        return Err(Error::Budget(format!("deletion-contraction exceeded {} calls", ctx.limit)));
    }
    let n = g.n();
    if n == 0 {
        return Ok(ChromaticPolynomial::one());
    }
    if let Some(p) = ctx.memo.get(&g.adj) {
        return Ok(p.clone());
    }
    let p = chrom_uncached(g, ctx)?;
    if ctx.memo.len() < MEMO_CAP {
        ctx.memo.insert(g.adj.clone(), p.clone());
    }
    Ok(p)
}

const MEMO_CAP: usize = 200_000;

/// For dense graphs: `sum_j a_j x(x-1)...(x-j+1)` with `a_j` the number of
/// partitions of the vertices into `j` independent sets.
fn partition_polynomial(g: &SmallGraph, ctx: &mut ChromContext) -> Result<ChromaticPolynomial> {
    let n = g.n();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo: HashMap<u64, Vec<u128>> = HashMap::new();
    let a = partitions_of(g, full, &mut memo, ctx)?;
    let mut out = ChromaticPolynomial { coeffs: vec![BigInt::zero()] };
    for (j, &count) in a.iter().enumerate() {
        if count > 0 {
            let term = ChromaticPolynomial::falling(j);
            let scaled = term.coeffs.iter().map(|c| c * BigInt::from(count)).collect();
            out = out.combine(&ChromaticPolynomial::from_coeffs(scaled), 1);
        }
    }
    Ok(out)
}

fn partitions_of(
    g: &SmallGraph,
    set: u64,
    memo: &mut HashMap<u64, Vec<u128>>,
    ctx: &mut ChromContext,
) -> Result<Vec<u128>> {
    if set == 0 {
        return Ok(vec![1]);
    }
    if let Some(v) = memo.get(&set) {
        return Ok(v.clone());
    }
    let v = set.trailing_zeros() as usize;
    let candidates = set & !g.adj[v] & !(1u64 << v);
    let mut total: Vec<u128> = Vec::new();
    let mut stack = vec![(1u64 << v, candidates)];
    // every independent set containing v inside `set`
    while let Some((chosen, cand)) = stack.pop() {
        ctx.calls += 1;
        if ctx.calls > ctx.limit {
            return Err(Error::Budget(format!("deletion-contraction exceeded {} calls", ctx.limit)));
        }
        let rest = partitions_of(g, set & !chosen, memo, ctx)?;
        if total.len() < rest.len() + 1 {
            total.resize(rest.len() + 1, 0);
        }
        for (j, &x) in rest.iter().enumerate() {
            total[j + 1] = total[j + 1]
                .checked_add(x)
                .ok_or_else(|| Error::Budget("partition count overflow".into()))?;
        }
        let mut c = cand;
        while c != 0 {
            let w = c.trailing_zeros() as usize;
            c &= c - 1;
            // only extend with later candidates so each set is listed once
            stack.push((chosen | 1 << w, c & !g.adj[w]));
        }
    }
    memo.insert(set, total.clone());
    Ok(total)
}

fn chrom_uncached(g: &SmallGraph, ctx: &mut ChromContext) -> Result<ChromaticPolynomial> {
    let n = g.n();
    let comps = g.components();
    if comps.len() > 1 {
        let mut acc = ChromaticPolynomial::one();
        for comp in comps {
            acc = acc.mul(&chrom(&g.induced(&comp), ctx)?);
        }
        return Ok(acc);
    }
    let e = g.edge_count();
    if e == n * (n - 1) / 2 {
        return Ok(ChromaticPolynomial::falling(n));
    }
    // a vertex whose neighbors form a clique contributes (x - degree)
    let simplicial = (0..n).find(|&v| {
        let nb = g.adj[v];
        bits(nb).all(|w| (g.adj[w] | 1 << w) & nb == nb)
    });
    if let Some(v) = simplicial {
        let d = g.adj[v].count_ones() as i64;
        return Ok(chrom(&g.without_vertex(v), ctx)?.mul_linear(d));
    }
    let u = (0..n).max_by_key(|&v| (g.adj[v].count_ones(), std::cmp::Reverse(v))).expect("nonempty");
    if 16 * e > n * (n - 1) {
        partition_polynomial(g, ctx)
    } else {
        let v = g.adj[u].trailing_zeros() as usize;
        let deleted = chrom(&g.toggle_edge(u, v), ctx)?;
        let merged = chrom(&g.contract(u, v), ctx)?;
        Ok(deleted.combine(&merged, -1))
    }
}

/// A minimum set of `ell`-sets such that every edge contains one of them.
/// Candidates are the `ell`-subsets of edges.
pub fn min_l_cover(h: &Hypergraph, ell: usize) -> Result<CoverConfig> {
    if h.is_empty() {
        return Err(invalid("the empty hypergraph has no minimum cover"));
    }
    if ell == 0 || ell > h.r() {
        return Err(invalid(format!("need 1 <= ell <= r, got ell={ell}, r={}", h.r())));
    }
    let edges: Vec<u64> = h.edges().iter().map(|e| e.mask()).collect();
    let mut best = greedy_cover(&edges, ell);
    let all: Vec<usize> = (0..edges.len()).collect();
    let mut chosen = Vec::new();
    cover_search(&edges, ell, &all, &mut chosen, &mut best);
    best.sort_unstable_by(|a, b| Edge::from_mask(*a).cmp(&Edge::from_mask(*b)));
    CoverConfig::new(ell, best.into_iter().map(Edge::from_mask).collect())
}

fn ell_subsets(e: u64, ell: usize) -> impl Iterator<Item = u64> {
    let verts: Vec<usize> = bits(e).collect();
    subsets_of_size(verts.len(), ell).map(move |pick| bits(pick).fold(0u64, |m, i| m | 1 << verts[i]))
}

fn greedy_cover(edges: &[u64], ell: usize) -> Vec<u64> {
    let mut uncovered: Vec<u64> = edges.to_vec();
    let mut cover = Vec::new();
    while !uncovered.is_empty() {
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for &e in &uncovered {
            for t in ell_subsets(e, ell) {
                *counts.entry(t).or_default() += 1;
            }
        }
        let (&t, _) = counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
            .expect("uncovered edges have subsets");
        cover.push(t);
        uncovered.retain(|&e| e & t != t);
    }
    cover
}

/// Edges pairwise sharing fewer than `ell` vertices need distinct cover sets.
fn packing_bound(edges: &[u64], live: &[usize], ell: usize) -> usize {
    let mut packed: Vec<u64> = Vec::new();
    for &i in live {
        let e = edges[i];
        if packed.iter().all(|&f| ((e & f).count_ones() as usize) < ell) {
            packed.push(e);
        }
    }
    packed.len()
}

fn cover_search(edges: &[u64], ell: usize, live: &[usize], chosen: &mut Vec<u64>, best: &mut Vec<u64>) {
    if live.is_empty() {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return;
    }
    if chosen.len() + packing_bound(edges, live, ell) >= best.len() {
        return;
    }
    let e = edges[live[0]];
    let mut options: Vec<(usize, u64)> = ell_subsets(e, ell)
        .map(|t| (live.iter().filter(|&&i| edges[i] & t == t).count(), t))
        .collect();
    options.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for (_, t) in options {
        let rest: Vec<usize> = live.iter().copied().filter(|&i| edges[i] & t != t).collect();
        chosen.push(t);
        cover_search(edges, ell, &rest, chosen, best);
        chosen.pop();
    }
}

/// Outcome of [`classify_star`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StarClass {
    /// Colors split among cover slots by an optimal split, every edge of a
    /// color containing its slot's set.
    Star { split: SplitVector, partition: ColorPartition },
    /// Every color anchored to some cover set; `anchors[x-1]` lists the
    /// slots color `x` could use.
    GeneralizedStar { anchors: Vec<Vec<usize>> },
    NonStar,
}

/// Slots whose cover set lies inside `e`, as a bit mask.
pub fn anchor_mask(e: Edge, cover: &CoverConfig) -> u32 {
    cover
        .sets()
        .iter()
        .enumerate()
        .filter(|(_, &t)| e.contains(t))
        .fold(0u32, |m, (i, _)| m | 1 << i)
}

pub fn classify_star(
    h: &Hypergraph,
    cover: &CoverConfig,
    k: usize,
    ell: usize,
    coloring: &KneserColoring,
) -> Result<StarClass> {
    if coloring.k() != k || !is_kneser_coloring(h, ell, coloring) {
        return Err(Error::InvalidColoring(format!("not a ({k},{ell})-Kneser coloring of the hypergraph")));
    }
    if cover.c() > 32 {
        return Err(invalid("cover too large"));
    }
    let full = if cover.c() == 32 { u32::MAX } else { (1u32 << cover.c()) - 1 };
    let mut anchors = vec![full; k];
    for (e, &color) in h.edges().iter().zip(coloring.colors()) {
        anchors[color - 1] &= anchor_mask(*e, cover);
    }
    if anchors.contains(&0) {
        return Ok(StarClass::NonStar);
    }
    if let Some((split, assignment)) = star_witness(&anchors, cover.c(), k)? {
        let mut blocks = vec![0u32; cover.c()];
        for (x, &slot) in assignment.iter().enumerate() {
            blocks[slot] |= 1 << x;
        }
        let partition = block_partition(&split, blocks)?;
        return Ok(StarClass::Star { split: SplitVector::new(k, split)?, partition });
    }
    Ok(StarClass::GeneralizedStar {
        anchors: anchors.iter().map(|&a| bits(a as u64).collect()).collect(),
    })
}

fn block_partition(split: &[usize], blocks: Vec<u32>) -> Result<ColorPartition> {
    let k = split.iter().sum();
    ordered_partitions(split, k)?
        .find(|p| p.block_masks() == blocks.as_slice())
        .ok_or_else(|| invalid("witness blocks do not form a partition"))
}

/// Finds an ordered optimal split of length `c` and a color-to-slot
/// assignment respecting `anchors` that fills slot `i` with exactly `s_i`
/// colors. Splits are tried in lexicographic order.
fn star_witness(anchors: &[u32], c: usize, k: usize) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    for split in ordered_splits(k, c)? {
        if let Some(assign) = capacity_matching(anchors, &split) {
            return Ok(Some((split, assign)));
        }
    }
    Ok(None)
}

/// Assigns every color a slot in its anchor mask with slot loads equal to
/// `caps`. Augmenting paths over slot copies.
fn capacity_matching(anchors: &[u32], caps: &[usize]) -> Option<Vec<usize>> {
    if caps.iter().sum::<usize>() != anchors.len() {
        return None;
    }
    let copies: Vec<usize> = caps.iter().enumerate().flat_map(|(i, &s)| std::iter::repeat_n(i, s)).collect();
    let mut owner: Vec<Option<usize>> = vec![None; copies.len()];
    fn augment(
        x: usize,
        anchors: &[u32],
        copies: &[usize],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for j in 0..copies.len() {
            if anchors[x] >> copies[j] & 1 == 0 || seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|y| augment(y, anchors, copies, owner, seen)) {
                owner[j] = Some(x);
                return true;
            }
        }
        false
    }
    for x in 0..anchors.len() {
        let mut seen = vec![false; copies.len()];
        if !augment(x, anchors, &copies, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut assign = vec![0usize; anchors.len()];
    for (j, o) in owner.iter().enumerate() {
        assign[o.expect("all copies filled")] = copies[j];
    }
    Some(assign)
}

/// Which route [`star_count_exact`] takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarMethod {
    /// The state sweep, falling back to inclusion–exclusion when the sweep
    /// runs out of budget.
    Auto,
    /// Sweep over colorings grouped by per-color anchor sets, classifying
    /// each group.
    Sweep,
    InclusionExclusion,
}

/// Number of star colorings of `h` with respect to `cover`.
pub fn star_count_exact(h: &Hypergraph, cover: &CoverConfig, k: usize, ell: usize) -> Result<BigUint> {
    star_count_with(h, cover, k, ell, StarMethod::Auto, &Budget::default())
}

pub fn star_count_with(
    h: &Hypergraph,
    cover: &CoverConfig,
    k: usize,
    ell: usize,
    method: StarMethod,
    budget: &Budget,
) -> Result<BigUint> {
    if ell != cover.ell() {
        return Err(invalid(format!("cover sets have size {}, not ell={ell}", cover.ell())));
    }
    if cover.c() > 16 || k > 32 {
        return Err(invalid("cover size or color count too large"));
    }
    let counts = anchor_histogram(h, cover);
    match method {
        StarMethod::Sweep => star_sweep(&counts, cover.c(), k, budget),
        StarMethod::InclusionExclusion => star_inclusion_exclusion(&counts, cover.c(), k, budget),
        StarMethod::Auto => match star_sweep(&counts, cover.c(), k, budget) {
            Err(Error::Budget(_)) => star_inclusion_exclusion(&counts, cover.c(), k, budget),
            other => other,
        },
    }
}

/// Number of edges per anchor mask.
fn anchor_histogram(h: &Hypergraph, cover: &CoverConfig) -> BTreeMap<u32, u64> {
    let mut counts = BTreeMap::new();
    for &e in h.edges() {
        *counts.entry(anchor_mask(e, cover)).or_insert(0u64) += 1;
    }
    counts
}

fn star_sweep(counts: &BTreeMap<u32, u64>, c: usize, k: usize, budget: &Budget) -> Result<BigUint> {
    let full = (1u32 << c) - 1;
    // state: sorted per-color anchor masks
    let mut states: HashMap<Vec<u32>, BigUint> = HashMap::new();
    states.insert(vec![full; k], BigUint::one());
    let mut work = 0u64;
    for (&mask, &cnt) in counts {
        for _ in 0..cnt {
            work += states.len() as u64;
            if work > budget.enumeration {
                return Err(Error::Budget(format!("star sweep exceeded {} steps", budget.enumeration)));
            }
            let mut next: HashMap<Vec<u32>, BigUint> = HashMap::with_capacity(states.len());
            for (state, ways) in &states {
                let mut i = 0;
                while i < state.len() {
                    let mut j = i + 1;
                    while j < state.len() && state[j] == state[i] {
                        j += 1;
                    }
                    let narrowed = state[i] & mask;
                    if narrowed != 0 {
                        let mut s = state.clone();
                        s[i] = narrowed;
                        s.sort_unstable();
                        *next.entry(s).or_default() += ways * (j - i);
                    }
                    i = j;
                }
            }
            states = next;
        }
    }
    let splits = ordered_splits(k, c)?;
    let mut total = BigUint::zero();
    for (state, ways) in states {
        if splits.iter().any(|s| capacity_matching(&state, s).is_some()) {
            total += ways;
        }
    }
    Ok(total)
}

fn star_inclusion_exclusion(counts: &BTreeMap<u32, u64>, c: usize, k: usize, budget: &Budget) -> Result<BigUint> {
    let mut pairs: Vec<Vec<u32>> = Vec::new();
    for s in ordered_splits(k, c)? {
        for p in ordered_partitions(&s, k)? {
            if pairs.len() >= budget.ie_pairs {
                return Err(Error::Budget(format!(
                    "more than {} (split, partition) pairs",
                    budget.ie_pairs
                )));
            }
            // slot bit of each color
            pairs.push((1..=k).map(|x| 1u32 << p.block_of(x).expect("partition is total")).collect());
        }
    }
    // Signed sum over subfamilies F of (-1)^|F| times the colorings inside
    // every member of F, grouped by each color's slot set under F.
    let mut terms: HashMap<Vec<u32>, BigInt> = HashMap::new();
    terms.insert(vec![0u32; k], BigInt::one());
    for slots in &pairs {
        let mut next = terms.clone();
        for (state, coef) in &terms {
            let joined: Vec<u32> = state.iter().zip(slots).map(|(a, b)| a | b).collect();
            *next.entry(joined).or_default() -= coef;
        }
        next.retain(|_, v| !v.is_zero());
        if next.len() > budget.ie_states {
            return Err(Error::Budget(format!("inclusion-exclusion exceeded {} states", budget.ie_states)));
        }
        terms = next;
    }
    let total_edges: u64 = counts.values().sum();
    let mut outside = BigInt::zero();
    for (state, coef) in &terms {
        let mut value = BigUint::one();
        for (&mask, &cnt) in counts {
            let allowed = state.iter().filter(|&&s| s & !mask == 0).count() as u64;
            value *= pow_u(allowed, cnt);
            if value.is_zero() {
                break;
            }
        }
        outside += coef * BigInt::from(value);
    }
    let union = BigInt::from(pow_u(k as u64, total_edges)) - outside;
    union
        .to_biguint()
        .ok_or_else(|| Error::InvalidParameters("negative inclusion-exclusion total".into()))
}

/// Ways to pick the cover sets `t_i` contained in an edge; exposed for
/// callers building their own per-edge products.
pub fn anchor_counts(h: &Hypergraph, cover: &CoverConfig) -> Vec<(u32, u64)> {
    anchor_histogram(h, cover).into_iter().collect()
}

/// Distinct `ell`-subsets of edges, the candidate pool for covers.
pub fn cover_candidates(h: &Hypergraph, ell: usize) -> Vec<Edge> {
    let set: HashSet<u64> = h.edges().iter().flat_map(|e| ell_subsets(e.mask(), ell)).collect();
    let mut v: Vec<Edge> = set.into_iter().map(Edge::from_mask).collect();
    v.sort_unstable();
    v
}
