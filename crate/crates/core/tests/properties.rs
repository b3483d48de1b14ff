use num_bigint::BigUint;
use proptest::prelude::*;

use kneser_core::closedform::{coverage, coverage_counts, product_inequality_check};
use kneser_core::count::{kappa_backtrack, kappa_chromatic};
use kneser_core::families::all_hypergraphs;
use kneser_core::{Edge, Hypergraph};

fn hypergraph(n: usize, r: usize, picks: &[bool]) -> Hypergraph {
    let complete = Hypergraph::complete(n, r).unwrap();
    let edges: Vec<Edge> = complete.edges().iter().zip(picks.iter().cycle()).filter(|(_, &p)| p).map(|(e, _)| *e).collect();
    Hypergraph::new(n, r, edges.into_iter().take(14)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counters_agree(n in 3usize..=7, r in 2usize..=4, ell_off in 0usize..3, k in 1usize..=5, picks in prop::collection::vec(any::<bool>(), 1..40)) {
        prop_assume!(r < n);
        let ell = 1 + ell_off % (r - 1);
        let h = hypergraph(n, r, &picks);
        prop_assert_eq!(kappa_backtrack(&h, k, ell).unwrap(), kappa_chromatic(&h, k, ell).unwrap());
    }

    #[test]
    fn text_round_trip(n in 3usize..=9, r in 1usize..=4, picks in prop::collection::vec(any::<bool>(), 1..30)) {
        prop_assume!(r <= n);
        let h = hypergraph(n, r, &picks);
        prop_assert_eq!(Hypergraph::parse(&h.to_text()).unwrap(), h);
    }

    #[test]
    fn coverage_partitions_all_subsets(n in 4usize..=20, r in 2usize..=6, ell in 1usize..=3, c in 2usize..=4) {
        prop_assume!(ell < r && c * ell <= n && r <= n);
        // every r-set holds some subset of the cover: summing over subsets
        // by size gives binom(n, r)
        let mut total = BigUint::from(0u32);
        for j in 0..=c {
            let ways = kneser_core::binom(c as i64, j as i64);
            total += ways * coverage(n, r, ell, c, j);
        }
        prop_assert_eq!(total, kneser_core::binom(n as i64, r as i64));
        prop_assert!(coverage_counts(n, r, ell, c).is_ok());
    }

    #[test]
    fn product_at_least_one(m in 2u64..=4, extra in 0u64..8, seeds in prop::collection::vec((2u64..=12, any::<bool>(), 0u64..=4), 1..6)) {
        let big_m = m + 2 + extra;
        let b: Vec<u64> = seeds.iter().map(|&(x, _, _)| x.min(big_m)).collect();
        let mut a = Vec::new();
        let mut phi = Vec::new();
        for (j, &(_, matched, off)) in seeds.iter().enumerate() {
            if matched {
                let hi = big_m.min(b[j] + m);
                a.push((m + 2 + off).min(hi));
                phi.push(j);
            }
        }
        let x = product_inequality_check(&a, &b, m, big_m, &phi).unwrap();
        prop_assert!(x.holds);
        if x.matched_slack {
            prop_assert!(x.matched_bound_holds);
        }
        if x.unmatched_slack {
            prop_assert!(x.six_fifths_holds);
        }
    }
}

#[test]
fn exhaustive_shards_cover_everything_once() {
    let all = all_hypergraphs(4, 2).unwrap();
    let total = all.total();
    let mut seen: Vec<usize> = Vec::new();
    for start in (0..total).step_by(10) {
        seen.extend(all.clone().shard(start, start + 10).map(|h| h.edge_count()));
    }
    assert_eq!(seen.len() as u64, total);
    assert_eq!(seen.iter().filter(|&&m| m == 3).count(), 20);
}
