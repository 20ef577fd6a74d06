//! Seeded random trees and maps for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::maps::{GroundSet, MultisetMap};
use crate::symbols::{Symbol, TripleMultiset};
use crate::tree::{Flavor, LabelledTree, TreeBuilder};

/// A random labelled tree built by inserting leaves one at a time at a
/// uniformly chosen place. Labels are drawn independently from `symbols`,
/// so the result need not be discriminating.
pub fn random_labelled_tree<R: Rng + ?Sized>(
    rng: &mut R,
    leaves: &[String],
    symbols: &[Symbol],
    flavor: Flavor,
) -> LabelledTree {
    let rooted_leaves = match flavor {
        Flavor::Rooted => leaves.len(),
        Flavor::Unrooted => leaves.len() - 1,
    };
    assert!(rooted_leaves >= 2, "too few leaves");
    assert!(!symbols.is_empty(), "no symbols");
    let mut order: Vec<usize> = (0..rooted_leaves).collect();
    order.shuffle(rng);

    // leaf_parent and int_parent as in a growing rooted shape
    let mut leaf_parent = vec![0usize; rooted_leaves];
    let mut int_parent: Vec<Option<usize>> = vec![None];
    for (k, &leaf) in order.iter().enumerate().skip(2) {
        let m = int_parent.len();
        let placed = &order[..k];
        // interior children, leaf edges, interior edges (root's included)
        let choice = rng.gen_range(0..m + placed.len() + m);
        if choice < m {
            leaf_parent[leaf] = choice;
        } else if choice < m + placed.len() {
            let c = placed[choice - m];
            int_parent.push(Some(leaf_parent[c]));
            leaf_parent[c] = m;
            leaf_parent[leaf] = m;
        } else {
            let c = choice - m - placed.len();
            int_parent.push(int_parent[c]);
            int_parent[c] = Some(m);
            leaf_parent[leaf] = m;
        }
    }

    let mut b = TreeBuilder::new();
    let m = int_parent.len();
    let root = int_parent.iter().position(Option::is_none).unwrap();
    let mut id = vec![usize::MAX; m];
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        let label = *symbols.choose(rng).unwrap();
        id[v] = b.add_interior(int_parent[v].map(|p| id[p]), Some(label));
        stack.extend((0..m).filter(|&c| int_parent[c] == Some(v)));
    }
    for (l, &p) in leaf_parent.iter().enumerate() {
        b.add_leaf(Some(id[p]), leaves[l].clone());
    }
    if flavor == Flavor::Unrooted {
        b.add_leaf(Some(id[root]), leaves[rooted_leaves].clone());
    }
    b.finish(flavor).expect("insertion keeps trees phylogenetic")
}

/// A map with independent uniformly random values over `symbols`, each a
/// multiset of at most two distinct symbols when `two_symbol_values` holds.
pub fn random_multiset_map<R: Rng + ?Sized>(
    rng: &mut R,
    ground: GroundSet,
    symbols: &[Symbol],
    two_symbol_values: bool,
) -> MultisetMap {
    MultisetMap::from_fn(ground, |_, _, _| loop {
        let v = TripleMultiset::new(
            *symbols.choose(rng).unwrap(),
            *symbols.choose(rng).unwrap(),
            *symbols.choose(rng).unwrap(),
        );
        if !two_symbol_values || v.distinct_count() < 3 {
            break v;
        }
    })
}

/// `d` with `k` randomly chosen values replaced by random multisets.
pub fn perturb<R: Rng + ?Sized>(rng: &mut R, d: &MultisetMap, symbols: &[Symbol], k: usize) -> MultisetMap {
    let mut values = d.values().to_vec();
    for _ in 0..k {
        let i = rng.gen_range(0..values.len());
        values[i] = TripleMultiset::new(
            *symbols.choose(rng).unwrap(),
            *symbols.choose(rng).unwrap(),
            *symbols.choose(rng).unwrap(),
        );
    }
    MultisetMap::from_values(d.ground().clone(), values).expect("same length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shapes_are_valid_and_varied() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let leaves: Vec<String> = (1..=8).map(|i| i.to_string()).collect();
        let syms = [Symbol(0), Symbol(1)];
        let mut codes = std::collections::HashSet::new();
        for _ in 0..50 {
            for flavor in [Flavor::Rooted, Flavor::Unrooted] {
                let t = random_labelled_tree(&mut rng, &leaves, &syms, flavor);
                assert_eq!(t.leaf_names(), leaves);
                codes.insert(t.canonical_code());
            }
        }
        assert!(codes.len() > 50);
    }
}
