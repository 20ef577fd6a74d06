//! Seeded benchmark inputs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use threeway::sample::random_labelled_tree;
use threeway::{
    three_way_from_rooted, three_way_from_unrooted, Flavor, LabelledTree, MultisetMap, PlainMap,
    Symbol, SymbolTable, TripletSet,
};

pub fn leaves(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn symbols(k: usize) -> Vec<Symbol> {
    let mut st = SymbolTable::new();
    ["A", "B", "C", "D"][..k].iter().map(|s| st.intern(s)).collect()
}

pub fn tree(n: usize, flavor: Flavor, seed: u64) -> LabelledTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_labelled_tree(&mut rng, &leaves(n), &symbols(3), flavor).collapse_to_discriminating()
}

pub fn rooted_map(n: usize, seed: u64) -> MultisetMap {
    three_way_from_rooted(&tree(n, Flavor::Rooted, seed)).expect("rooted tree")
}

pub fn unrooted_map(n: usize, seed: u64) -> PlainMap {
    three_way_from_unrooted(&tree(n, Flavor::Unrooted, seed)).expect("unrooted tree")
}

pub fn triplets(n: usize, seed: u64) -> TripletSet {
    TripletSet::from_tree(tree(n, Flavor::Rooted, seed).tree())
}
