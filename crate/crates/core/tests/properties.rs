use std::collections::BTreeSet;

use proptest::prelude::*;
use reap_core::polarized::{check_witness, search_witness, PolMatrix, PolQuery, PolSearchOutcome};
use reap_core::{
    defeats, find_monochromatic_subtree, lift, min_colors, modular_witness, search_counterexample,
    subtree_leaves, Coloring, MinColors, PropertyQuery, SearchOutcome, TreeShape,
};

/// All color sets of `k`-branching subtrees under the node whose leaves are
/// `leaves[lo..hi]`, by plain recursion.
fn achievable(leaves: &[u8], i: usize, k: usize, lo: usize, hi: usize) -> BTreeSet<u64> {
    if hi - lo == 1 {
        return BTreeSet::from([1u64 << leaves[lo]]);
    }
    let width = (hi - lo) / i;
    let children: Vec<BTreeSet<u64>> = (0..i)
        .map(|c| achievable(leaves, i, k, lo + c * width, lo + (c + 1) * width))
        .collect();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << i) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut acc = BTreeSet::from([0u64]);
        for (c, sets) in children.iter().enumerate() {
            if mask & (1 << c) != 0 {
                acc = acc
                    .iter()
                    .flat_map(|a| sets.iter().map(move |s| a | s))
                    .collect();
            }
        }
        out.extend(acc);
    }
    out
}

fn oracle_min(c: &Coloring, k: usize) -> usize {
    achievable(
        c.leaf_colors(),
        c.shape().branching(),
        k,
        0,
        c.shape().leaf_count(),
    )
    .iter()
    .map(|s| s.count_ones() as usize)
    .min()
    .unwrap()
}

fn coloring_strategy() -> impl Strategy<Value = (Coloring, usize)> {
    (2usize..=4, 1usize..=3, 1usize..=4)
        .prop_filter("small trees", |(i, h, _)| i.pow(*h as u32) <= 64)
        .prop_flat_map(|(i, h, j)| {
            let leaves = i.pow(h as u32);
            (prop::collection::vec(0..j, leaves), 2..=i).prop_map(move |(ls, k)| {
                (
                    Coloring::new(TreeShape::new(i, h).unwrap(), j, ls).unwrap(),
                    k,
                )
            })
        })
}

fn value(m: MinColors) -> usize {
    m.value().unwrap_or(usize::MAX)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dp_matches_recursive_oracle((c, k) in coloring_strategy()) {
        prop_assert_eq!(value(min_colors(&c, k, 64).unwrap()), oracle_min(&c, k));
    }

    #[test]
    fn renaming_does_not_change_min_colors((c, k) in coloring_strategy()) {
        prop_assert_eq!(min_colors(&c, k, 64).unwrap(), min_colors(&c.canonical(), k, 64).unwrap());
    }

    #[test]
    fn defeats_is_monotone((c, k) in coloring_strategy(), m in 1usize..4) {
        if defeats(&c, k, m).unwrap() {
            prop_assert!(m == 1 || defeats(&c, k, m - 1).unwrap());
            if k < c.shape().branching() {
                prop_assert!(defeats(&c, k + 1, m).unwrap());
            }
        }
    }

    #[test]
    fn lift_preserves_defeat((c, k) in coloring_strategy(), m in 1usize..4) {
        prop_assume!(c.shape().leaf_count() * c.shape().branching() <= 256);
        if defeats(&c, k, m).unwrap() {
            prop_assert!(defeats(&lift(&c).unwrap(), k, m).unwrap());
        }
    }

    #[test]
    fn counting_criterion_matches_depth_one_search(i in 2usize..=8, j in 1usize..=4, k in 2usize..=8) {
        prop_assume!(k <= i);
        let q = PropertyQuery::new(i, j, k, 1).unwrap();
        let found = matches!(search_counterexample(&q, 1, u64::MAX).unwrap(), SearchOutcome::Found { .. });
        prop_assert_eq!(found, i <= j * (k - 1));
    }

    #[test]
    fn monochromatic_certificates_are_valid(
        (i, j, k) in (2usize..=5, 1usize..=3, 2usize..=3).prop_filter("counting side", |(i, j, k)| k <= i && *i > j * (k - 1)),
        h in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let shape = TreeShape::new(i, h).unwrap();
        let leaves = (0..shape.leaf_count()).map(|t| (seed.rotate_left(t as u32 % 64) as usize ^ t) % j).collect();
        let c = Coloring::new(shape, j, leaves).unwrap();
        let (color, cert) = find_monochromatic_subtree(&c, k).unwrap();
        let ls = subtree_leaves(&cert).unwrap();
        prop_assert_eq!(ls.len(), k.pow(h as u32));
        prop_assert!(ls.iter().all(|&l| c.color_of(l) == color));
    }

    #[test]
    fn witness_check_is_antitone(
        (n, m, k) in (2usize..=5, 2usize..=5, 1usize..=5),
        seed in prop::collection::vec(0usize..5, 25),
        i in 1usize..=3, j in 1usize..=3, q in 0usize..=4,
    ) {
        prop_assume!(i <= n && j <= m);
        let entries = seed[..n * m].iter().map(|e| e % k).collect();
        let h = PolMatrix::new(n, m, k, entries).unwrap();
        if check_witness(&h, &PolQuery { i, j, q }).unwrap() {
            for lower in 0..q {
                let weaker = PolQuery { i, j, q: lower };
                prop_assert!(check_witness(&h, &weaker).unwrap());
            }
        }
    }

    #[test]
    fn witness_search_output_verifies(n in 2usize..=4, m in 2usize..=4, k in 2usize..=5, q in 1usize..=3) {
        let query = PolQuery { i: 2, j: 2, q };
        if let PolSearchOutcome::Found { matrix, .. } = search_witness(n, m, k, &query, 200_000).unwrap() {
            prop_assert!(check_witness(&matrix, &query).unwrap());
        }
    }
}

/// Brute force over every coloring: does any defeat `(k, m)`?
fn any_defeating(i: usize, h: usize, j: usize, k: usize, m: usize) -> bool {
    let shape = TreeShape::new(i, h).unwrap();
    let n = shape.leaf_count();
    let total = j.pow(n as u32);
    (0..total).any(|mut code| {
        let leaves = (0..n)
            .map(|_| {
                let c = code % j;
                code /= j;
                c
            })
            .collect();
        defeats(&Coloring::new(shape, j, leaves).unwrap(), k, m).unwrap()
    })
}

#[test]
fn symmetry_breaking_loses_nothing() {
    for (i, h) in [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2)] {
        for j in 1usize..=3 {
            for k in 2..=i {
                for m in 1..=2 {
                    if j.pow((i as u32).pow(h as u32)) > 1 << 20 {
                        continue;
                    }
                    let q = PropertyQuery::new(i, j, k, m).unwrap();
                    let found = matches!(
                        search_counterexample(&q, h, u64::MAX).unwrap(),
                        SearchOutcome::Found { .. }
                    );
                    assert_eq!(found, any_defeating(i, h, j, k, m), "{q} depth {h}");
                }
            }
        }
    }
}

#[test]
fn modular_witnesses_for_primes() {
    for n in [2, 3, 5, 7] {
        let h = modular_witness(n).unwrap();
        for k in 1..n {
            assert!(
                check_witness(&h, &PolQuery { i: k, j: 2, q: k }).unwrap(),
                "n={n} k={k}"
            );
        }
    }
}
