use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use threeway::conditions::check_ultrametric_by_fives;
use threeway::io::{write_multiset, write_plain};
use threeway::newick::{parse_labelled, write_labelled};
use threeway::oracle::{enumerate_labelled_trees, rooted_representations};
use threeway::reconstruct::{decide_tree_map_at, triplets_from_two_way};
use threeway::sample::{perturb, random_labelled_tree, random_multiset_map};
use threeway::*;

fn table() -> (SymbolTable, Vec<Symbol>) {
    let mut st = SymbolTable::new();
    let syms = ["A", "B", "C"].iter().map(|s| st.intern(s)).collect();
    (st, syms)
}

fn leaves(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn tree(seed: u64, n: usize, k: usize, flavor: Flavor) -> LabelledTree {
    let (_, syms) = table();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_labelled_tree(&mut rng, &leaves(n), &syms[..k], flavor)
}

fn multiset() -> impl Strategy<Value = TripleMultiset> {
    (0u32..3, 0u32..3, 0u32..3).prop_map(|(a, b, c)| TripleMultiset::new(Symbol(a), Symbol(b), Symbol(c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn m_and_n_rebuild_the_multiset(s in multiset()) {
        match (s.m(), s.n()) {
            (Some(m), Some(n)) => prop_assert_eq!(TripleMultiset::new(m, m, n), s),
            (None, None) => prop_assert_eq!(s.distinct_count(), 3),
            _ => prop_assert!(false, "only one of m, n present"),
        }
    }

    #[test]
    fn rooted_values_use_at_most_two_symbols(seed: u64, n in 3usize..9, k in 1usize..4) {
        let d = three_way_from_rooted(&tree(seed, n, k, Flavor::Rooted)).unwrap();
        prop_assert!(d.values().iter().all(|v| v.distinct_count() <= 2));
    }

    #[test]
    fn restriction_commutes_with_induced_subtree(seed: u64, n in 4usize..9, k in 1usize..4) {
        let t = tree(seed, n, k, Flavor::Rooted);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let mut ys = leaves(n);
        ys.shuffle(&mut rng);
        ys.truncate(3 + (seed as usize % (n - 2)));
        let d = three_way_from_rooted(&t).unwrap();
        let sub = t.induced_subtree(&ys).unwrap();
        prop_assert_eq!(three_way_from_rooted(&sub).unwrap(), d.restrict(&ys).unwrap());
        let kept: BTreeSet<String> = ys.iter().cloned().collect();
        let expected: BTreeSet<Triplet> = t
            .displayed_triplets()
            .into_iter()
            .filter(|tr| tr.leaves().iter().all(|l| kept.contains(*l)))
            .collect();
        prop_assert_eq!(sub.displayed_triplets(), expected);
    }

    #[test]
    fn farris_projection_matches_transform(seed: u64, n in 4usize..9, k in 1usize..4) {
        let t = tree(seed, n, k, Flavor::Unrooted);
        let d = three_way_from_unrooted(&t).unwrap();
        for r in t.leaf_names() {
            let res = farris_transform(&t, &r).unwrap();
            prop_assert_eq!(two_way_from_tree(&res.rooted).unwrap(), farris_project(&d, &r).unwrap());
            prop_assert!(farris_inverse(&res.rooted, &r).unwrap().labelled_isomorphic(&t));
        }
    }

    #[test]
    fn rooted_tree_maps_are_recovered(seed: u64, n in 5usize..9, k in 1usize..4) {
        let t = tree(seed, n, k, Flavor::Rooted);
        let d = three_way_from_rooted(&t).unwrap();
        prop_assert!(check_p(&d).unwrap().is_empty());
        let outcome = decide_ultrametric(&d).unwrap();
        prop_assert!(outcome.unique);
        let back = outcome.tree.unwrap();
        prop_assert!(back.is_discriminating());
        prop_assert!(back.labelled_isomorphic(&t.collapse_to_discriminating()));
    }

    #[test]
    fn unrooted_tree_maps_are_recovered_from_any_leaf(seed: u64, n in 4usize..9, k in 1usize..4) {
        let t = tree(seed, n, k, Flavor::Unrooted);
        let d = three_way_from_unrooted(&t).unwrap();
        prop_assert!(check_m(&d).unwrap().is_empty());
        let target = t.collapse_to_discriminating();
        for r in t.leaf_names() {
            let back = decide_tree_map_at(&d, &r).unwrap().tree.unwrap();
            prop_assert!(back.labelled_isomorphic(&target));
        }
    }

    #[test]
    fn two_way_tree_maps_are_ultrametric(seed: u64, n in 3usize..9, k in 1usize..4) {
        let t = tree(seed, n, k, Flavor::Rooted);
        let d = two_way_from_tree(&t).unwrap();
        prop_assert!(check_u(&d).unwrap().is_empty());
        let ts = triplets_from_two_way(&d).unwrap();
        let rebuilt = build(&ts, &leaves(n)).unwrap().unwrap();
        prop_assert!(ts.iter().all(|tr| rebuilt.displayed_triplets().contains(tr)));
    }

    #[test]
    fn build_displays_every_input_triplet(seed: u64, n in 3usize..9, keep in 0.0f64..1.0) {
        let t = tree(seed, n, 1, Flavor::Rooted);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ts = TripletSet::new(leaves(n));
        for tr in t.displayed_triplets() {
            if rand::Rng::gen_bool(&mut rng, keep) {
                ts.insert(tr).unwrap();
            }
        }
        let built = build(&ts, &leaves(n)).unwrap().expect("subset of a tree's triplets");
        let shown = built.displayed_triplets();
        prop_assert!(ts.iter().all(|tr| shown.contains(tr)));
    }

    #[test]
    fn five_point_check_agrees_with_oracle(seed: u64, perturbations in 0usize..3, k in 1usize..4) {
        let (_, syms) = table();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_labelled_tree(&mut rng, &leaves(5), &syms[..k], Flavor::Rooted);
        let d = perturb(&mut rng, &three_way_from_rooted(&t).unwrap(), &syms[..2], perturbations);
        let checker = check_p(&d).unwrap().is_empty();
        prop_assert_eq!(checker, representable_rooted(&d).unwrap().is_some());
        prop_assert_eq!(checker, decide_ultrametric(&d).unwrap().is_representable());
    }

    #[test]
    fn larger_maps_hold_iff_every_five_subset_does(seed: u64, perturbations in 0usize..2) {
        let (_, syms) = table();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_labelled_tree(&mut rng, &leaves(6), &syms[..2], Flavor::Rooted);
        let d = perturb(&mut rng, &three_way_from_rooted(&t).unwrap(), &syms[..2], perturbations);
        let checker = check_p(&d).unwrap().is_empty();
        prop_assert_eq!(checker, check_ultrametric_by_fives(&d).unwrap());
        prop_assert_eq!(checker, decide_ultrametric(&d).unwrap().is_representable());
    }

    #[test]
    fn four_point_check_agrees_with_oracle(seed: u64, n in 4usize..6, flip in proptest::bool::ANY) {
        let (_, syms) = table();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_labelled_tree(&mut rng, &leaves(n), &syms, Flavor::Unrooted);
        let mut d = three_way_from_unrooted(&t).unwrap();
        if flip {
            let mut values = d.values().to_vec();
            let i = seed as usize % values.len();
            values[i] = syms[(values[i].id() + 1 + (seed as usize >> 8) % 2) % 3];
            d = PlainMap::from_values(d.ground().clone(), values).unwrap();
        }
        let checker = check_m(&d).unwrap().is_empty();
        prop_assert_eq!(checker, representable_unrooted(&d).unwrap().is_some());
        prop_assert_eq!(checker, decide_tree_map(&d).unwrap().is_representable());
    }

    #[test]
    fn isomorphism_is_an_equivalence(a: u64, b: u64, n in 3usize..7) {
        let (st, _) = table();
        let mut st = st;
        let s = tree(a, n, 2, Flavor::Rooted);
        let t = tree(b, n, 2, Flavor::Rooted);
        prop_assert!(s.labelled_isomorphic(&s));
        prop_assert_eq!(s.labelled_isomorphic(&t), t.labelled_isomorphic(&s));
        let reparsed = parse_labelled(&write_labelled(&s, &st), &mut st).unwrap();
        prop_assert!(reparsed.labelled_isomorphic(&s));
        prop_assert_eq!(s.labelled_isomorphic(&t), s.canonical_code() == t.canonical_code());
        let n2 = s.normalized();
        prop_assert!(n2.labelled_isomorphic(&s));
        prop_assert_eq!(n2.labelled_isomorphic(&t), s.labelled_isomorphic(&t));
    }

    #[test]
    fn map_text_round_trips(seed: u64, n in 3usize..8) {
        let (st, syms) = table();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_multiset_map(&mut rng, GroundSet::new(leaves(n)).unwrap(), &syms, false);
        let mut st2 = SymbolTable::new();
        let back = threeway::io::parse_multiset_map(&write_multiset(&d, &st), &mut st2).unwrap();
        prop_assert_eq!(write_multiset(&back, &st2), write_multiset(&d, &st));
        let t = random_labelled_tree(&mut rng, &leaves(n.max(4)), &syms, Flavor::Unrooted);
        let p = three_way_from_unrooted(&t).unwrap();
        let back = threeway::io::parse_plain_map(&write_plain(&p, &st), &mut st2).unwrap();
        prop_assert_eq!(write_plain(&back, &st2), write_plain(&p, &st));
    }
}

#[test]
fn five_leaf_representations_are_unique() {
    let (_, syms) = table();
    let spec = EnumerationSpec::new(leaves(5), syms, Flavor::Rooted);
    let mut seen = HashSet::new();
    for t in enumerate_labelled_trees(&spec).unwrap() {
        let d = three_way_from_rooted(&t).unwrap();
        assert!(seen.insert(d.values().to_vec()), "two trees share a map");
        assert_eq!(rooted_representations(&d, 2).unwrap().len(), 1);
    }
}

#[test]
fn only_the_balanced_two_label_quartet_is_ambiguous() {
    let (_, syms) = table();
    let spec = EnumerationSpec::new(leaves(4), syms, Flavor::Rooted);
    let mut types = BTreeSet::new();
    for t in enumerate_labelled_trees(&spec).unwrap() {
        let d = three_way_from_rooted(&t).unwrap();
        let q = classify_quartet(&d, &leaves(4)).unwrap();
        let index = q.index.expect("every tree map has a type");
        types.insert(index);
        let unique = rooted_representations(&d, 2).unwrap().len() == 1;
        assert_eq!(unique, index != 3, "type {index}");
    }
    assert_eq!(types, (1..=7).collect());
}
