//! Verification harness: exhaustive and sampled experiments that produce
//! [`ExperimentReport`]s.
//!
//! Claims that only hold for `n` large are reported per instance as
//! consistent or inconsistent at that `n`; only exact identities are pass or
//! fail.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::{binom, pow_u};
use crate::closedform::{
    alpha, alpha_uncollapsed, coverage_by_enumeration, coverage_counts, extremal_lower_bound,
    generalized_star_count, product_inequality_check, star_bracket_lower, star_sum, star_sum_complete,
    t1_upper_bound, AlphaParameters,
};
use crate::count::{kappa_backtrack_with, kappa_chromatic_with, min_l_cover, star_count_with, Budget, StarMethod};
use crate::error::{invalid, Error, Result};
use crate::families::{
    ak_family, all_hypergraphs, candidate_covers, complete_from_cover, cover_size, disjoint_blocks,
    disjoint_cover, next_permutation, star, turan_with_optimal_s, two_set_cover, union_constrained_covers,
    AKParameters, CoverConfig,
};
use crate::hypergraph::{Edge, Hypergraph};
use crate::splits::cnd;

/// Serializes a big integer as a decimal string.
pub fn decimal<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

/// Outcome of one checked claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A large-`n` claim that holds at this instance.
    ConsistentAtN,
    /// A large-`n` claim that does not hold at this instance; not a failure.
    InconsistentAtN,
    Skipped,
    Observation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub status: Status,
    pub detail: String,
}

/// One candidate in a ranked experiment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub signature: String,
    pub kind: String,
    #[serde(serialize_with = "decimal")]
    pub count: BigUint,
    pub rank: usize,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
}

impl Parameters {
    pub fn nrkl(n: usize, r: usize, k: Option<usize>, ell: usize) -> Self {
        Parameters { n: Some(n), r: Some(r), k, ell: Some(ell), ..Default::default() }
    }
}

/// Result of one experiment. Rows are sorted by count, largest first, ties
/// by signature. `duration_ms` is only filled in on request so that
/// repeated runs serialize identically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub parameters: Parameters,
    pub rows: Vec<Row>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, parameters: Parameters) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            parameters,
            rows: Vec::new(),
            verdicts: Vec::new(),
            duration_ms: None,
        }
    }

    pub fn row(&mut self, signature: impl Into<String>, kind: &str, count: BigUint) -> &mut Row {
        self.rows.push(Row { signature: signature.into(), kind: kind.into(), count, rank: 0, extra: BTreeMap::new() });
        self.rows.last_mut().expect("just pushed")
    }

    fn push(&mut self, claim: &str, status: Status, detail: String) {
        self.verdicts.push(Verdict { claim: claim.into(), status, detail });
    }

    /// An exact claim: pass or fail.
    pub fn check(&mut self, claim: &str, ok: bool, detail: impl Into<String>) -> bool {
        self.push(claim, if ok { Status::Pass } else { Status::Fail }, detail.into());
        ok
    }

    /// A claim stated for large `n`, evaluated at this instance.
    pub fn at_n(&mut self, claim: &str, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::ConsistentAtN } else { Status::InconsistentAtN };
        self.push(claim, status, detail.into());
    }

    pub fn observe(&mut self, claim: &str, detail: impl Into<String>) {
        self.push(claim, Status::Observation, detail.into());
    }

    pub fn skip(&mut self, claim: &str, detail: impl Into<String>) {
        self.push(claim, Status::Skipped, detail.into());
    }

    /// Sorts rows and assigns competition ranks (equal counts share a rank).
    pub fn finish(mut self) -> Self {
        self.rows.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.signature.cmp(&b.signature)));
        for i in 0..self.rows.len() {
            self.rows[i].rank = if i > 0 && self.rows[i].count == self.rows[i - 1].count {
                self.rows[i - 1].rank
            } else {
                i + 1
            };
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.verdicts.iter().filter(|v| v.status == status).count()
    }
}

/// Smallest sorted edge-mask list over all relabelings of `[n]`.
pub fn canonical_form(h: &Hypergraph) -> Vec<u64> {
    let n = h.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u64>> = None;
    loop {
        let mut masks: Vec<u64> = h
            .edges()
            .iter()
            .map(|e| crate::arith::bits(e.mask()).fold(0u64, |m, v| m | 1 << perm[v]))
            .collect();
        masks.sort_unstable();
        if best.as_ref().is_none_or(|b| masks < *b) {
            best = Some(masks);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn edge_list(h: &Hypergraph) -> String {
    let parts: Vec<String> = h.edges().iter().map(|e| format!("{e:?}")).collect();
    format!("[{}]", parts.join(" "))
}

const LISTED_MAXIMIZERS: usize = 50;

/// Exhaustive maximum of `kappa(., k, ell)` over every `r`-uniform
/// hypergraph on `[n]`: the maximum and the sorted indices attaining it.
fn exhaustive_max(n: usize, r: usize, k: usize, ell: usize, budget: &Budget) -> Result<(BigUint, Vec<u64>, Vec<Hypergraph>)> {
    let all = all_hypergraphs(n, r)?;
    let total = all.total();
    if total > budget.enumeration {
        return Err(Error::Budget(format!("{total} hypergraphs exceed the enumeration budget of {}", budget.enumeration)));
    }
    let chunk = 256u64;
    let shards: Vec<u64> = (0..total.div_ceil(chunk)).collect();
    let best = shards
        .par_iter()
        .map(|&s| -> Result<(BigUint, Vec<u64>)> {
            let mut best = (BigUint::zero(), Vec::new());
            let start = s * chunk;
            for (i, h) in all.clone().shard(start, start + chunk).enumerate() {
                let kappa = kappa_backtrack_with(&h, k, ell, budget)?;
                let idx = start + i as u64;
                if kappa > best.0 {
                    best = (kappa, vec![idx]);
                } else if kappa == best.0 {
                    best.1.push(idx);
                }
            }
            Ok(best)
        })
        .try_reduce(
            || (BigUint::zero(), Vec::new()),
            |a, b| {
                Ok(match a.0.cmp(&b.0) {
                    std::cmp::Ordering::Greater => a,
                    std::cmp::Ordering::Less => b,
                    std::cmp::Ordering::Equal => (a.0, a.1.into_iter().chain(b.1).collect()),
                })
            },
        )?;
    let (max, mut idx) = best;
    idx.sort_unstable();
    let graphs = idx.iter().map(|&i| all.nth_hypergraph(i)).collect();
    Ok((max, idx, graphs))
}

/// Exhaustive check of the two-color extremal statement; in the case
/// `ell = 1, n = 2r` it checks the `(k(k-1))^binom(2r-1, r)` maximum for
/// every `k` in `ks` instead.
pub fn verify_k2(n: usize, r: usize, ell: usize, ks: &[usize], budget: &Budget) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("verify-k2", Parameters::nrkl(n, r, Some(2), ell));
    let anomaly = ell == 1 && n == 2 * r;
    if !anomaly {
        let (turan, winners) = turan_with_optimal_s(n, r, ell)?;
        let (max, _, graphs) = exhaustive_max(n, r, 2, ell, budget)?;
        for h in graphs.iter().take(LISTED_MAXIMIZERS) {
            rep.row(edge_list(h), "kappa", max.clone());
        }
        rep.check(
            "two-color maximum equals 2^ex(n, r, ell)",
            max == pow_u(2, crate::arith::to_u64(&turan)),
            format!("max = {max}, 2^{turan} = {}", pow_u(2, crate::arith::to_u64(&turan))),
        );
        let argmax: BTreeSet<Vec<u64>> = graphs.iter().map(canonical_form).collect();
        let families: BTreeSet<Vec<u64>> = if winners.is_empty() {
            // every r-set meets every other in ell vertices
            [canonical_form(&Hypergraph::complete(n, r)?)].into()
        } else {
            winners
                .iter()
                .map(|&s| ak_family(AKParameters { n, r, ell, s }).map(|h| canonical_form(&h)))
                .collect::<Result<_>>()?
        };
        rep.check(
            "maximizers are the extremal intersecting families up to relabeling",
            argmax == families,
            format!("{} maximizers in {} isomorphism classes; expected {} classes", graphs.len(), argmax.len(), families.len()),
        );
    } else {
        for &k in ks {
            let (max, _, graphs) = exhaustive_max(n, r, k, ell, budget)?;
            let e = crate::arith::binom_u64(2 * r as i64 - 1, r as i64);
            let expected = pow_u((k * (k - 1)) as u64, e);
            for h in graphs.iter().take(LISTED_MAXIMIZERS) {
                rep.row(format!("k={k} {}", edge_list(h)), "kappa", max.clone());
            }
            rep.check(
                &format!("k={k}: maximum equals (k(k-1))^binom(2r-1, r)"),
                max == expected,
                format!("max = {max}, expected {expected}"),
            );
            let non_intersecting = graphs.iter().filter(|h| !h.is_intersecting(ell)).count();
            rep.check(
                &format!("k={k}: maximizers include hypergraphs that are not ell-intersecting"),
                non_intersecting > 0,
                format!("{non_intersecting} of {} maximizers are not ell-intersecting", graphs.len()),
            );
        }
    }
    Ok(rep.finish())
}

/// Four colors, two cover sets meeting in `y` vertices for each `y < ell`:
/// the generalized star count `S(y)`, the star sum, and `kappa` when it
/// fits the budget.
pub fn verify_k4(n: usize, r: usize, ell: usize, budget: &Budget) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("verify-k4", Parameters::nrkl(n, r, Some(4), ell));
    if ell == 0 || ell >= r || n < r {
        return Err(invalid(format!("need 1 <= ell < r <= n (n={n}, r={r}, ell={ell})")));
    }
    let big_b = crate::arith::binom_u64((n - ell) as i64, (r - ell) as i64);
    let base = pow_u(4, big_b);
    let mut s_values = Vec::new();
    let mut kappas = Vec::new();
    for y in 0..ell {
        let Ok(cover) = two_set_cover(n, ell, y) else { continue };
        if n < r {
            continue;
        }
        let s = generalized_star_count(n, r, ell, y)?;
        let sum = star_sum_complete(n, r, &cover, 4)?;
        let h = complete_from_cover(n, r, &cover)?;
        let row = rep.row(format!("y={y} {}", cover.signature()), "S(y)", s.clone());
        row.extra.insert("star_sum".into(), sum.to_string());
        match kappa_backtrack_with(&h, 4, ell, budget) {
            Ok(kappa) => {
                row.extra.insert("kappa".into(), kappa.to_string());
                kappas.push((y, kappa));
            }
            Err(Error::Budget(msg)) => {
                row.extra.insert("kappa".into(), "skipped".into());
                rep.skip(&format!("kappa at y={y}"), msg);
            }
            Err(e) => return Err(e),
        }
        rep.check(
            &format!("star sum at y={y} equals 6*4^binom(n-ell, r-ell)"),
            sum == &base * 6u32,
            format!("star_sum = {sum}"),
        );
        s_values.push((y, s));
    }
    if let Some(best) = s_values.iter().map(|(_, s)| s).max() {
        let argmax: Vec<usize> = s_values.iter().filter(|(_, s)| s == best).map(|(y, _)| *y).collect();
        if ell >= 2 {
            rep.at_n(
                "S(y) is maximized at y = ell-1",
                argmax == vec![ell - 1],
                format!("argmax y = {argmax:?}"),
            );
        } else {
            rep.observe("S(y) is maximized at y = ell-1", "ell = 1 leaves only the disjoint pair y = 0");
        }
    }
    if kappas.len() == s_values.len() && !kappas.is_empty() {
        let best = kappas.iter().map(|(_, k)| k).max().expect("nonempty");
        let argmax: Vec<usize> = kappas.iter().filter(|(_, k)| k == best).map(|(y, _)| *y).collect();
        rep.at_n("kappa is maximized at y = ell-1", argmax.contains(&(ell - 1)), format!("argmax y = {argmax:?}"));
    }
    let one = CoverConfig::new(ell, vec![disjoint_blocks(n, r, 1, ell)?.sets()[0]])?;
    let two = two_set_cover(n, ell, 0).or_else(|_| two_set_cover(n, ell, ell - 1))?;
    let s2 = star_sum_complete(n, r, &two, 4)?;
    let s1 = star_sum_complete(n, r, &one, 4)?;
    rep.check(
        "two-set over one-set star sum ratio is 6",
        s2 == &s1 * 6u32,
        format!("{s2} / {s1}"),
    );
    Ok(rep.finish())
}

/// Ranks every cover pattern with pairwise unions above `r` by the exact
/// star count of its complete hypergraph. Nothing is asserted.
pub fn explore_conjecture(n: usize, r: usize, k: usize, ell: usize, budget: &Budget) -> Result<ExperimentReport> {
    if k < 5 || ell == 0 || !(ell < r && r < 2 * ell) {
        return Err(invalid(format!("need k >= 5 and ell < r < 2ell (k={k}, r={r}, ell={ell})")));
    }
    let mut rep = ExperimentReport::new("explore", Parameters::nrkl(n, r, Some(k), ell));
    let c = cover_size(k);
    let target = 2 * ell - r - 1;
    let covers = union_constrained_covers(n, r, c, ell);
    if covers.is_empty() {
        return Err(invalid(format!("no {c} {ell}-sets on {n} vertices have pairwise unions above {r}")));
    }
    let mut counted: Vec<(BigUint, CoverConfig)> = Vec::new();
    let mut complete_ranking = true;
    for cover in &covers {
        let h = complete_from_cover(n, r, cover)?;
        let sum = star_sum(&h, cover, k, ell)?;
        let (count, kind) = match star_count_with(&h, cover, k, ell, StarMethod::Auto, budget) {
            Ok(x) => (x, "star_count"),
            Err(Error::Budget(msg)) => {
                complete_ranking = false;
                rep.skip(&format!("star count for {}", cover.signature()), msg);
                (sum.clone(), "star_sum")
            }
            Err(e) => return Err(e),
        };
        let row = rep.row(cover.signature(), kind, count.clone());
        row.extra.insert("star_sum".into(), sum.to_string());
        row.extra.insert("edges".into(), h.edge_count().to_string());
        if h.edge_count() <= 40 {
            match kappa_backtrack_with(&h, k, ell, budget) {
                Ok(kappa) => {
                    row.extra.insert("kappa".into(), kappa.to_string());
                }
                Err(Error::Budget(_)) => {
                    row.extra.insert("kappa".into(), "skipped".into());
                }
                Err(e) => return Err(e),
            }
        }
        counted.push((count, cover.clone()));
    }
    counted.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.signature().cmp(&b.1.signature())));
    let winner = &counted[0].1;
    let hits = winner.pairwise_intersections().iter().all(|&x| x == target);
    rep.observe(
        "winner has all pairwise intersections equal to 2ell-r-1",
        format!(
            "winner {} (intersections {:?}, target {target}){}",
            winner.signature(),
            winner.pairwise_intersections(),
            if complete_ranking { "" } else { "; ranking partly by star sum" }
        ) + if hits { ": yes" } else { ": no" },
    );
    if let Some(uniform) = covers.iter().find(|cv| cv.pairwise_intersections().iter().all(|&x| x == target)) {
        if n >= c * ell {
            let h_disjoint = complete_from_cover(n, r, &disjoint_blocks(n, r, c, ell)?)?;
            let h_uniform = complete_from_cover(n, r, uniform)?;
            rep.observe(
                "edge symmetric difference against the disjoint cover",
                format!(
                    "|E(H) xor E(H')| = {} with |E(H')| = {} for H' over {}",
                    h_disjoint.symmetric_difference(&h_uniform),
                    h_uniform.edge_count(),
                    uniform.signature()
                ),
            );
        }
    }
    Ok(rep.finish())
}

/// Random small hypergraphs: the two exact counters agree, star counts sit
/// below `kappa`, and the disjoint-cover hypergraph meets its lower bound.
pub fn cross_validate(seed: u64, trials: usize, budget: &Budget) -> Result<ExperimentReport> {
    cross_validate_with(seed, trials, budget, |_, x| x)
}

/// [`cross_validate`] with a hook applied to every polynomial-route count
/// before comparison.
pub fn cross_validate_with<F>(seed: u64, trials: usize, budget: &Budget, tamper: F) -> Result<ExperimentReport>
where
    F: Fn(usize, BigUint) -> BigUint,
{
    let mut rep = ExperimentReport::new(
        "cross-validate",
        Parameters { seed: Some(seed), trials: Some(trials), ..Default::default() },
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut mismatches, mut sandwich_bad, mut bound_bad, mut skipped) = (0usize, 0usize, 0usize, 0usize);
    let (mut compared, mut over_budget) = (0usize, 0usize);
    let mut first_mismatch = None;
    for t in 0..trials {
        let n = rng.gen_range(3..=8);
        let r = rng.gen_range(2..=4usize.min(n - 1));
        let ell = rng.gen_range(1..r);
        let k = rng.gen_range(1..=6);
        let mut edges: Vec<Edge> = Hypergraph::complete(n, r)?.edges().to_vec();
        edges.shuffle(&mut rng);
        edges.truncate(rng.gen_range(0..=edges.len().min(budget.chromatic_vertices)));
        let h = Hypergraph::new(n, r, edges)?;
        let a = kappa_backtrack_with(&h, k, ell, budget)?;
        let b = match kappa_chromatic_with(&h, k, ell, budget) {
            Ok(b) => tamper(t, b),
            Err(Error::Budget(_)) => {
                over_budget += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        compared += 1;
        if a != b {
            mismatches += 1;
            first_mismatch.get_or_insert(format!("trial {t}: n={n} r={r} ell={ell} k={k}: {a} vs {b}"));
        }
        if k >= 2 && !h.is_empty() {
            let cover = min_l_cover(&h, ell)?;
            if cover.c() <= 16 {
                match star_count_with(&h, &cover, k, ell, StarMethod::Auto, budget) {
                    Ok(s) if s > a => sandwich_bad += 1,
                    Ok(_) => {}
                    Err(Error::Budget(_)) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        if k >= 2 && n >= cover_size(k) * ell {
            let hx = crate::families::extremal_hypergraph(n, r, k, ell)?;
            if hx.edge_count() > 30 {
                skipped += 1;
                continue;
            }
            match kappa_backtrack_with(&hx, k, ell, budget) {
                Ok(kx) if kx < extremal_lower_bound(n, r, k, ell)? => bound_bad += 1,
                Ok(_) => {}
                Err(Error::Budget(_)) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    rep.check(
        "backtracking and chromatic-polynomial counts agree",
        mismatches == 0,
        first_mismatch.unwrap_or_else(|| format!("{compared} of {trials} instances compared, {over_budget} over budget")),
    );
    rep.check(
        "star count never exceeds kappa",
        sandwich_bad == 0,
        format!("{sandwich_bad} violations, {skipped} side checks skipped"),
    );
    rep.check(
        "kappa(H_{n,r,k,ell}) >= D(k)^binom(n - ell c(k), r - ell)",
        bound_bad == 0,
        format!("{bound_bad} violations"),
    );
    Ok(rep.finish())
}

/// Coverage identities and the brute-force classification for one
/// parameter tuple.
pub fn verify_identities(n: usize, r: usize, ell: usize, c: usize) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new(
        "identities",
        Parameters { n: Some(n), r: Some(r), ell: Some(ell), c: Some(c), ..Default::default() },
    );
    let cov = coverage_counts(n, r, ell, c)?;
    let ok_a = (0..=c - 2).all(|x| cov.b[x] == &cov.d[x] - &cov.a[x]);
    let ok_c = (0..c).all(|x| &cov.b[x] + &cov.cz[x] == cov.e[x]);
    rep.check("B(x) = D(x) - A(x)", ok_a, format!("x in 0..={}", c - 2));
    rep.check("B(x) = E(x) - C(x)", ok_c, format!("x in 0..={}", c - 1));
    for (name, values) in [("A", &cov.a), ("B", &cov.b), ("C", &cov.cz), ("D", &cov.d), ("E", &cov.e)] {
        for (i, v) in values.iter().enumerate() {
            rep.row(format!("{name}({i})"), "coverage", v.clone());
        }
    }
    if binom(n as i64, r as i64) <= BigUint::from(100_000u32) {
        let brute = coverage_by_enumeration(n, r, ell, c)?;
        rep.check("coverage counts match brute-force classification", brute == cov, "all five families");
    } else {
        rep.skip("coverage counts match brute-force classification", "more than 10^5 subsets");
    }
    Ok(rep.finish())
}

/// One instance of the sandwich suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SandwichCase {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub ell: usize,
}

/// Desk-scale tuples for [`verify_sandwich`]: `n <= 8`, `r <= 4` and at
/// most `max_edges` edges in `H_{n,r,k,ell}`.
pub fn sandwich_cases(max_edges: usize) -> Vec<SandwichCase> {
    let mut out = Vec::new();
    for n in 3..=8 {
        for r in 2..=4.min(n - 1) {
            for ell in 1..r {
                for k in 2..=6 {
                    let c = cover_size(k);
                    if n < c * ell {
                        continue;
                    }
                    let edges = disjoint_cover(n, r, k, ell)
                        .and_then(|cv| complete_from_cover(n, r, &cv))
                        .map(|h| h.edge_count())
                        .unwrap_or(usize::MAX);
                    if edges <= max_edges {
                        out.push(SandwichCase { n, r, k, ell });
                    }
                }
            }
        }
    }
    out
}

/// Star counts against `kappa`, the lower bound on `kappa(H_{n,r,k,ell})`,
/// the star-sum bracket, the upper bound for `k >= 4`, agreement of star
/// sums across candidate covers and with `alpha`, and the small-`n`
/// observation for the complete graph at `k = 3`.
pub fn verify_sandwich(cases: &[SandwichCase], budget: &Budget) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("sandwich", Parameters::default());
    let results: Vec<Result<Vec<(String, Status, String)>>> = cases
        .par_iter()
        .map(|&case| sandwich_one(case, budget))
        .collect();
    for res in results {
        for (claim, status, detail) in res? {
            rep.push(&claim, status, detail);
        }
    }
    // K_5 at three colors: below any threshold
    let k5 = Hypergraph::complete(5, 2)?;
    let st = star(5, 2, 1)?;
    let kc = kappa_backtrack_with(&k5, 3, 1, budget)?;
    let ks = kappa_backtrack_with(&st, 3, 1, budget)?;
    rep.at_n(
        "star is optimal at (n, r, k, ell) = (5, 2, 3, 1)",
        ks >= kc,
        format!("complete graph {kc} vs star {ks}"),
    );
    Ok(rep.finish())
}

fn sandwich_one(case: SandwichCase, budget: &Budget) -> Result<Vec<(String, Status, String)>> {
    let SandwichCase { n, r, k, ell } = case;
    let tag = format!("(n,r,k,ell)=({n},{r},{k},{ell})");
    let mut out = Vec::new();
    let mut check = |claim: &str, ok: bool, detail: String| {
        out.push((format!("{claim} {tag}"), if ok { Status::Pass } else { Status::Fail }, detail));
    };
    let cover = disjoint_cover(n, r, k, ell)?;
    let h = complete_from_cover(n, r, &cover)?;
    let sum = star_sum(&h, &cover, k, ell)?;
    let kappa = match kappa_backtrack_with(&h, k, ell, budget) {
        Ok(x) => Some(x),
        Err(Error::Budget(_)) => None,
        Err(e) => return Err(e),
    };
    let stars = match star_count_with(&h, &cover, k, ell, StarMethod::Auto, budget) {
        Ok(x) => Some(x),
        Err(Error::Budget(_)) => None,
        Err(e) => return Err(e),
    };
    if let Some(kappa) = &kappa {
        let lower = extremal_lower_bound(n, r, k, ell)?;
        check("kappa >= D^binom(n - ell c, r - ell)", *kappa >= lower, format!("{kappa} >= {lower}"));
        if k >= 4 {
            let upper = t1_upper_bound(n, r, k, ell)?;
            check("kappa <= upper bound", *kappa <= upper, format!("{kappa} <= {upper}"));
        }
    }
    if let Some(s) = &stars {
        check("star count <= star sum", *s <= sum, format!("{s} <= {sum}"));
        let lower = star_bracket_lower(n, r, ell, k, cover.c(), &sum)?;
        check(
            "bracket lower end <= star count",
            lower <= BigRational::from_integer(BigInt::from(s.clone())),
            "exact rational".into(),
        );
        if let Some(kappa) = &kappa {
            check("star count <= kappa", s <= kappa, format!("{s} <= {kappa}"));
        }
    }
    if kappa.is_none() || stars.is_none() {
        out.push((format!("budgeted counts {tag}"), Status::Skipped, "budget exceeded".into()));
    }
    if k >= 4 {
        let a = alpha(AlphaParameters { n, r, k, ell })?;
        let sums: Vec<BigUint> = candidate_covers(n, r, k, ell, true)?
            .iter()
            .map(|cv| star_sum_complete(n, r, cv, k))
            .collect::<Result<_>>()?;
        let same = sums.iter().all(|s| *s == a);
        let mut out2 = vec![(
            format!("star sum equals alpha on every candidate cover {tag}"),
            if same { Status::Pass } else { Status::Fail },
            format!("{} covers", sums.len()),
        )];
        let lit = alpha_uncollapsed(AlphaParameters { n, r, k, ell })? == a;
        out2.push((
            format!("alpha collapsed equals uncollapsed {tag}"),
            if lit { Status::Pass } else { Status::Fail },
            String::new(),
        ));
        out.extend(out2);
    }
    Ok(out)
}

/// Random instances of the product inequality plus fixed boundary cases.
pub fn verify_product_inequality(seed: u64, trials: usize) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new(
        "lemma37",
        Parameters { seed: Some(seed), trials: Some(trials), ..Default::default() },
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases: Vec<(Vec<u64>, Vec<u64>, u64, u64, Vec<usize>)> = vec![
        (vec![], vec![2], 2, 2, vec![]),
        (vec![], vec![3], 3, 3, vec![]),
        (vec![4], vec![2], 2, 4, vec![0]),
        (vec![6, 5], vec![3, 2, 4], 3, 8, vec![0, 2]),
        (vec![5], vec![3, 2], 2, 5, vec![0]),
    ];
    while cases.len() < trials {
        let m = rng.gen_range(2..=4u64);
        let big_m = rng.gen_range(m + 2..=12);
        let q = rng.gen_range(1..=5usize);
        let p = rng.gen_range(0..=q);
        let b: Vec<u64> = (0..q).map(|_| rng.gen_range(2..=big_m)).collect();
        let mut idx: Vec<usize> = (0..q).collect();
        idx.shuffle(&mut rng);
        let phi: Vec<usize> = idx[..p].to_vec();
        let a: Vec<u64> = phi.iter().map(|&j| rng.gen_range(m + 2..=big_m.min(b[j] + m))).collect();
        cases.push((a, b, m, big_m, phi));
    }
    let (mut below_one, mut matched_bad, mut unmatched_bad) = (0, 0, 0);
    let (mut equalities, mut matched, mut unmatched, mut broad_only) = (0, 0, 0, 0);
    let mut broad_example = None;
    for (a, b, m, big_m, phi) in &cases {
        let x = product_inequality_check(a, b, *m, *big_m, phi)?;
        below_one += usize::from(!x.holds);
        equalities += usize::from(x.lhs == BigRational::one());
        if x.matched_slack {
            matched += 1;
            matched_bad += usize::from(!x.matched_bound_holds);
        }
        if x.unmatched_slack {
            unmatched += 1;
            unmatched_bad += usize::from(!x.six_fifths_holds);
        }
        if x.broad_six_fifths_condition && !x.six_fifths_holds {
            broad_only += 1;
            broad_example.get_or_insert(format!("a={a:?} b={b:?} m={m} M={big_m} phi={phi:?} gives {}", x.lhs));
        }
    }
    rep.check("product is at least 1", below_one == 0, format!("{} instances, {equalities} equalities", cases.len()));
    rep.check(
        "matched slack gives at least 1 + m/(M^2 - m^2)",
        matched_bad == 0,
        format!("{matched} instances with matched slack"),
    );
    rep.check(
        "unmatched b_j with max(m, b_j) >= 3 gives at least 6/5",
        unmatched_bad == 0,
        format!("{unmatched} instances with unmatched slack"),
    );
    rep.observe(
        "p < q with max(m, b) >= 3 alone does not force 6/5",
        match broad_example {
            Some(ex) => format!("{broad_only} instances below 6/5, e.g. {ex}"),
            None => "no instance below 6/5".into(),
        },
    );
    Ok(rep.finish())
}

/// Exact rational `x / y` of two counts.
pub fn ratio(x: &BigUint, y: &BigUint) -> BigRational {
    Ratio::new(BigInt::from(x.clone()), BigInt::from(y.clone()))
}

/// `cnd(k)` rendered as `c=.. N=.. D=..`.
pub fn cnd_line(k: usize) -> Result<String> {
    let x = cnd(k)?;
    Ok(format!("c={} N={} D={}", x.c, x.n, x.d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_sorting_and_ranks() {
        let mut rep = ExperimentReport::new("t", Parameters::default());
        rep.row("b", "x", BigUint::from(5u32));
        rep.row("a", "x", BigUint::from(5u32));
        rep.row("c", "x", BigUint::from(9u32));
        let rep = rep.finish();
        let order: Vec<_> = rep.rows.iter().map(|r| (r.signature.as_str(), r.rank)).collect();
        assert_eq!(order, vec![("c", 1), ("a", 2), ("b", 2)]);
    }

    #[test]
    fn canonical_form_identifies_stars() {
        let a = Hypergraph::from_vertex_lists(4, 2, &[vec![1, 2], vec![1, 3]]).unwrap();
        let b = Hypergraph::from_vertex_lists(4, 2, &[vec![2, 4], vec![3, 4]]).unwrap();
        let c = Hypergraph::from_vertex_lists(4, 2, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert_ne!(canonical_form(&a), canonical_form(&c));
    }

    #[test]
    fn k2_small() {
        let rep = verify_k2(5, 2, 1, &[2], &Budget::default()).unwrap();
        assert!(rep.passed(), "{:?}", rep.verdicts);
        assert_eq!(rep.rows.len(), 5);
        assert_eq!(rep.rows[0].count, BigUint::from(16u32));
    }

    #[test]
    fn identities_report() {
        let rep = verify_identities(12, 4, 2, 3).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.count(Status::Pass), 3);
    }

    #[test]
    fn cross_validate_zero_trials_and_tamper() {
        let b = Budget::default();
        let rep = cross_validate(7, 0, &b).unwrap();
        assert!(rep.passed());
        let rep = cross_validate_with(3, 20, &b, |t, x| if t == 5 { x + 1u32 } else { x }).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.failures().count(), 1);
    }

    #[test]
    fn product_suite_flags_broad_clause() {
        let rep = verify_product_inequality(1, 200).unwrap();
        assert!(rep.passed());
        let obs = rep.verdicts.iter().find(|v| v.status == Status::Observation).unwrap();
        assert!(obs.detail.contains("below 6/5"));
    }

    #[test]
    fn cnd_line_k4() {
        assert_eq!(cnd_line(4).unwrap(), "c=2 N=6 D=4");
    }
}
