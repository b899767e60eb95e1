use std::collections::HashSet;

use caracol::combinat::{
    binomial, dominates, dominating_compositions, multichoose, multinomial, prefix_sums,
    rational_catalan, weak_compositions, BigCount,
};
use caracol::graph::{from_simple_roots, to_simple_roots, DirectedMultigraph};
use caracol::kostant::{integral_flows, kostant};
use caracol::lidskii::{lattice_points_binomial, lattice_points_multiset};
use caracol::paths::{enumerate_multilabeled, MultiLabeledDyckPath};
use caracol::unified;
use num_traits::Pow;
use proptest::prelude::*;

fn composition(max_len: usize, max_part: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..=max_part, 1..=max_len)
}

/// Path 1 -> 2 -> ... -> n+1 plus extra forward edges, parallel ones allowed.
fn small_graph() -> impl Strategy<Value = DirectedMultigraph> {
    (2usize..=5).prop_flat_map(|n| {
        let extra =
            (1..=n, 1..=n + 1).prop_filter_map("forward edge", |(i, j)| (i < j).then_some((i, j)));
        prop::collection::vec(extra, 0..=4).prop_map(move |mut edges| {
            edges.extend((1..=n).map(|v| (v, v + 1)));
            DirectedMultigraph::from_edge_list(n, &edges).unwrap()
        })
    })
}

fn graph_and_flow() -> impl Strategy<Value = (DirectedMultigraph, Vec<i64>)> {
    small_graph().prop_flat_map(|g| {
        let n = g.n();
        (Just(g), prop::collection::vec(0i64..=2, n)).prop_map(|(g, mut a)| {
            let s: i64 = a.iter().sum();
            a.push(-s);
            (g, a)
        })
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dominance_is_prefix_comparison(s in composition(6, 4), moves in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>()), 0..6)) {
        let mut t = s.clone();
        for (from, to) in moves {
            let (from, to) = (from.index(t.len()), to.index(t.len()));
            if t[from] > 0 {
                t[from] -= 1;
                t[to] += 1;
            }
        }
        let want = prefix_sums(&s).iter().zip(prefix_sums(&t)).all(|(a, b)| *a >= b);
        prop_assert_eq!(dominates(&s, &t).unwrap(), want);
    }

    #[test]
    fn dominating_compositions_is_the_up_set(t in composition(5, 3)) {
        let total: u64 = t.iter().sum();
        let up: Vec<Vec<u64>> = dominating_compositions(&t).collect();
        let distinct: HashSet<&Vec<u64>> = up.iter().collect();
        prop_assert_eq!(distinct.len(), up.len());
        let brute: HashSet<Vec<u64>> = weak_compositions(total, t.len()).filter(|s| dominates(s, &t).unwrap()).collect();
        let brute: HashSet<&Vec<u64>> = brute.iter().collect();
        prop_assert_eq!(distinct, brute);
        prop_assert!(up.contains(&t));
    }

    #[test]
    fn multinomials_sum_to_a_power(total in 0u64..=7, k in 1usize..=4) {
        let sum: BigCount = weak_compositions(total, k).map(|d| multinomial(total, &d).unwrap()).sum();
        prop_assert_eq!(sum, Pow::pow(BigCount::from(k as u64), total));
    }

    #[test]
    fn multinomial_is_a_product_of_binomials(parts in composition(5, 6)) {
        let total: u64 = parts.iter().sum();
        let mut rest = total;
        let mut prod = BigCount::from(1u32);
        for &p in &parts {
            prod *= binomial(rest, p);
            rest -= p;
        }
        prop_assert_eq!(multinomial(total, &parts).unwrap(), prod);
    }

    #[test]
    fn pascal_and_multichoose(n in 1u64..40, k in 1u64..40) {
        prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
        prop_assert_eq!(multichoose(n, k), binomial(n + k - 1, k));
    }

    #[test]
    fn simple_roots_round_trip(c in prop::collection::vec(-5i64..=5, 0..8)) {
        let v = from_simple_roots(&c);
        prop_assert_eq!(v.iter().sum::<i64>(), 0);
        prop_assert_eq!(to_simple_roots(&v), c);
    }

    #[test]
    fn rational_catalan_counts_paths(a in 1u64..=7, b in 1u64..=9) {
        prop_assume!(gcd(a, b) == 1);
        let t = caracol::paths::rational_shape(a, b).unwrap();
        let paths = caracol::paths::enumerate_t_dyck(&t).count() as u64;
        prop_assert_eq!(rational_catalan(a, b).unwrap(), BigCount::from(paths));
    }

    #[test]
    fn lattice_point_formulas_agree((g, a) in graph_and_flow()) {
        let k = kostant(&g, &a).unwrap();
        prop_assert_eq!(BigCount::from(integral_flows(&g, &a).unwrap().count() as u64), k.clone());
        prop_assert_eq!(lattice_points_binomial(&g, &a).unwrap(), k.clone());
        prop_assert_eq!(lattice_points_multiset(&g, &a).unwrap(), k);
    }

    #[test]
    fn integral_flows_have_the_right_net_flow((g, a) in graph_and_flow()) {
        for f in integral_flows(&g, &a).unwrap().take(50) {
            prop_assert_eq!(f.net(&g), a.clone());
        }
    }

    #[test]
    fn preferences_round_trip(k in 1u64..=3, r in 0u64..=3, pick in any::<prop::sample::Index>()) {
        let i = pick.index(r as usize + 1) as u64;
        let all: Vec<MultiLabeledDyckPath> = enumerate_multilabeled(k, r, i).collect();
        let m = &all[pick.index(all.len())];
        prop_assert!(m.is_valid());
        prop_assert_eq!(MultiLabeledDyckPath::from_preference(k, r, &m.to_preference()), Some(m.clone()));
    }

    #[test]
    fn completions_match_direct_count(n in 3u64..=7, kk in any::<prop::sample::Index>(), ii in any::<prop::sample::Index>(), pick in any::<prop::sample::Index>()) {
        let k = kk.index(n as usize - 1) as u64 + 1;
        let i = ii.index((n - k) as usize) as u64;
        let all: Vec<_> = unified::enumerate_truncated(n, k, i).unwrap().collect();
        let u = &all[pick.index(all.len())];
        prop_assert_eq!(unified::completions(u), unified::completions_by_enumeration(u));
        prop_assert_eq!(unified::theta_inverse(n, &unified::theta(u).unwrap()).unwrap(), u.clone());
    }

    #[test]
    fn simplex_partition_covers(c0 in composition(4, 3)) {
        prop_assume!(c0.len() >= 2);
        let total: u64 = c0.iter().sum();
        let parts = unified::simplex_partition(&c0).unwrap();
        let all: Vec<&Vec<u64>> = parts.iter().flatten().collect();
        let distinct: HashSet<&Vec<u64>> = all.iter().copied().collect();
        prop_assert_eq!(all.len(), distinct.len());
        prop_assert_eq!(all.len(), weak_compositions(total, c0.len()).count());
    }
}
