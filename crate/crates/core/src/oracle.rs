//! Exhaustive ground truth on small leaf sets.
//!
//! Rooted tree shapes on leaves `0..n` are generated by inserting leaf `k`
//! into every shape on `0..k` in every possible place: as a new child of an
//! interior vertex, or by subdividing any edge (including a new edge above
//! the root). Every shape arises exactly once. Unrooted shapes on `n`
//! leaves are the rooted shapes on the first `n - 1` leaves with the last
//! leaf hung from the root.

use std::collections::HashSet;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::maps::{combinations, GroundSet, MultisetMap, PlainMap};
use crate::symbols::{Symbol, TripleMultiset};
use crate::tree::{Flavor, LabelledTree, TreeBuilder};

pub const MAX_LEAVES: usize = 6;
pub const MAX_SYMBOLS: usize = 3;
/// Upper limit on the number of trees a single enumeration may produce.
pub const MAX_ENUMERATED: u64 = 5_000_000;

/// Which labelled trees to enumerate.
#[derive(Debug, Clone)]
pub struct EnumerationSpec {
    pub leaves: Vec<String>,
    pub symbols: Vec<Symbol>,
    pub flavor: Flavor,
    pub discriminating_only: bool,
}

impl EnumerationSpec {
    pub fn new(leaves: Vec<String>, symbols: Vec<Symbol>, flavor: Flavor) -> Self {
        EnumerationSpec {
            leaves,
            symbols,
            flavor,
            discriminating_only: true,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.leaves.len();
        let min = match self.flavor {
            Flavor::Rooted => 2,
            Flavor::Unrooted => 3,
        };
        if n < min {
            return Err(Error::TooFewLeaves { needed: min, got: n });
        }
        if n > MAX_LEAVES {
            return Err(Error::BoundsExceeded(format!(
                "{n} leaves, at most {MAX_LEAVES} supported"
            )));
        }
        if self.symbols.is_empty() || self.symbols.len() > MAX_SYMBOLS {
            return Err(Error::BoundsExceeded(format!(
                "{} symbols, between 1 and {MAX_SYMBOLS} supported",
                self.symbols.len()
            )));
        }
        let mut seen = HashSet::new();
        for s in &self.symbols {
            if !seen.insert(*s) {
                return Err(Error::BoundsExceeded(format!("symbol {} repeated", s.0)));
            }
        }
        GroundSet::new(self.leaves.iter().cloned())?;
        let count = labelled_count(self);
        if count > MAX_ENUMERATED {
            return Err(Error::BoundsExceeded(format!(
                "{count} trees exceeds the cap of {MAX_ENUMERATED}"
            )));
        }
        Ok(())
    }
}

/// A rooted shape: leaf `i` hangs from interior `leaf_parent[i]`.
#[derive(Debug, Clone)]
struct Shape {
    leaf_parent: Vec<usize>,
    int_parent: Vec<Option<usize>>,
}

impl Shape {
    fn cherry() -> Self {
        Shape {
            leaf_parent: vec![0, 0],
            int_parent: vec![None],
        }
    }

    fn root(&self) -> usize {
        self.int_parent.iter().position(Option::is_none).expect("root")
    }

    fn extensions(&self) -> Vec<Shape> {
        let mut out = Vec::new();
        let m = self.int_parent.len();
        for v in 0..m {
            let mut s = self.clone();
            s.leaf_parent.push(v);
            out.push(s);
        }
        for c in 0..self.leaf_parent.len() {
            let mut s = self.clone();
            s.int_parent.push(Some(s.leaf_parent[c]));
            s.leaf_parent[c] = m;
            s.leaf_parent.push(m);
            out.push(s);
        }
        for c in 0..m {
            let mut s = self.clone();
            s.int_parent.push(s.int_parent[c]);
            s.int_parent[c] = Some(m);
            s.leaf_parent.push(m);
            out.push(s);
        }
        out
    }
}

/// Per-shape lookup tables in a parent-before-child order of interiors.
#[derive(Debug)]
struct Compiled {
    /// Leaf parents, renumbered into topological positions.
    leaf_parent: Vec<usize>,
    /// Parent position of each interior position; the root is position 0.
    parent: Vec<Option<usize>>,
    /// The three pairwise lca positions of each leaf triple, lexicographic.
    triple_lcas: Vec<[usize; 3]>,
}

impl Compiled {
    fn new(shape: &Shape) -> Self {
        let m = shape.int_parent.len();
        let root = shape.root();
        let mut order = vec![root];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            order.extend((0..m).filter(|&c| shape.int_parent[c] == Some(v)));
            i += 1;
        }
        let mut pos = vec![0; m];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let parent: Vec<Option<usize>> = order
            .iter()
            .map(|&v| shape.int_parent[v].map(|p| pos[p]))
            .collect();
        let leaf_parent: Vec<usize> = shape.leaf_parent.iter().map(|&v| pos[v]).collect();
        let depth = {
            let mut d = vec![0usize; m];
            for p in 1..m {
                d[p] = d[parent[p].unwrap()] + 1;
            }
            d
        };
        let lca = |mut a: usize, mut b: usize| {
            while a != b {
                if depth[a] >= depth[b] {
                    a = parent[a].unwrap();
                } else {
                    b = parent[b].unwrap();
                }
            }
            a
        };
        let n = leaf_parent.len();
        let triple_lcas = combinations(n, 3)
            .map(|t| {
                let (x, y, z) = (leaf_parent[t[0]], leaf_parent[t[1]], leaf_parent[t[2]]);
                [lca(x, y), lca(x, z), lca(y, z)]
            })
            .collect();
        Compiled {
            leaf_parent,
            parent,
            triple_lcas,
        }
    }

    fn interior_count(&self) -> usize {
        self.parent.len()
    }

    /// Median positions of the triples of the unrooted tree obtained by
    /// hanging one extra leaf (the last) from the root.
    fn unrooted_medians(&self) -> Vec<usize> {
        let n = self.leaf_parent.len() + 1;
        let mut out = Vec::with_capacity(crate::maps::binom(n, 3));
        let mut rank = 0;
        for t in combinations(n, 3) {
            if t[2] == n - 1 {
                let (x, y) = (self.leaf_parent[t[0]], self.leaf_parent[t[1]]);
                out.push(self.lca_pos(x, y));
            } else {
                let [a, b, c] = self.triple_lcas[rank];
                // two coincide, the third is the deepest
                out.push(if a == b {
                    c
                } else if a == c {
                    b
                } else {
                    a
                });
                rank += 1;
            }
        }
        out
    }

    fn lca_pos(&self, mut a: usize, mut b: usize) -> usize {
        // positions are topological, so the larger one is never an ancestor
        // of the smaller
        while a != b {
            if a > b {
                a = self.parent[a].unwrap();
            } else {
                b = self.parent[b].unwrap();
            }
        }
        a
    }

    fn build(&self, names: &[String], labels: &[Symbol], flavor: Flavor) -> LabelledTree {
        let mut b = TreeBuilder::new();
        for (p, par) in self.parent.iter().enumerate() {
            let id = b.add_interior(*par, Some(labels[p]));
            debug_assert_eq!(id, p);
        }
        for (i, &p) in self.leaf_parent.iter().enumerate() {
            b.add_leaf(Some(p), names[i].clone());
        }
        if flavor == Flavor::Unrooted {
            b.add_leaf(Some(0), names[self.leaf_parent.len()].clone());
        }
        b.finish(flavor).expect("enumerated shapes are phylogenetic")
    }
}

fn shapes() -> &'static [Vec<Compiled>] {
    static SHAPES: OnceLock<Vec<Vec<Compiled>>> = OnceLock::new();
    SHAPES.get_or_init(|| {
        let mut raw: Vec<Vec<Shape>> = vec![Vec::new(), Vec::new(), vec![Shape::cherry()]];
        for _ in 3..=MAX_LEAVES {
            let next = raw.last().unwrap().iter().flat_map(Shape::extensions).collect();
            raw.push(next);
        }
        raw.iter()
            .map(|level| level.iter().map(Compiled::new).collect())
            .collect()
    })
}

/// Rooted shapes on `n` leaves in the generation order.
fn rooted_shapes(n: usize) -> &'static [Compiled] {
    &shapes()[n]
}

/// Number of rooted phylogenetic tree shapes on `n` labelled leaves.
pub fn rooted_shape_count(n: usize) -> usize {
    if n > MAX_LEAVES {
        return 0;
    }
    rooted_shapes(n).len()
}

/// Number of unrooted phylogenetic tree shapes on `n` labelled leaves.
pub fn unrooted_shape_count(n: usize) -> usize {
    if n < 3 {
        return 0;
    }
    rooted_shape_count(n - 1)
}

fn shapes_for(flavor: Flavor, n: usize) -> &'static [Compiled] {
    match flavor {
        Flavor::Rooted => rooted_shapes(n),
        Flavor::Unrooted => rooted_shapes(n - 1),
    }
}

fn labellings_of(c: &Compiled, s: u64, discriminating: bool) -> u64 {
    let m = c.interior_count() as u32;
    if discriminating {
        s * (s - 1).pow(m - 1)
    } else {
        s.pow(m)
    }
}

fn labelled_count(spec: &EnumerationSpec) -> u64 {
    let s = spec.symbols.len() as u64;
    shapes_for(spec.flavor, spec.leaves.len())
        .iter()
        .map(|c| labellings_of(c, s, spec.discriminating_only))
        .sum()
}

/// Counts produced by an enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Census {
    pub shapes: usize,
    pub labelled_trees: u64,
}

pub fn census(spec: &EnumerationSpec) -> Result<Census> {
    spec.validate()?;
    Ok(Census {
        shapes: shapes_for(spec.flavor, spec.leaves.len()).len(),
        labelled_trees: labelled_count(spec),
    })
}

/// Odometer over labellings of one shape in topological position order.
fn next_labelling(c: &Compiled, digits: &mut [usize], s: usize, discriminating: bool) -> bool {
    loop {
        let mut i = digits.len();
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < s {
                break;
            }
            digits[i] = 0;
        }
        if !discriminating || is_discriminating(c, digits) {
            return true;
        }
    }
}

fn is_discriminating(c: &Compiled, digits: &[usize]) -> bool {
    c.parent
        .iter()
        .enumerate()
        .all(|(p, par)| par.is_none_or(|q| digits[q] != digits[p]))
}

/// Streams every labelled tree of the given flavor on the leaves, each
/// exactly once up to labelled isomorphism.
pub fn enumerate_labelled_trees(
    spec: &EnumerationSpec,
) -> Result<impl Iterator<Item = LabelledTree>> {
    spec.validate()?;
    let spec = spec.clone();
    let list = shapes_for(spec.flavor, spec.leaves.len());
    let s = spec.symbols.len();
    let mut shape = 0;
    let mut digits: Option<Vec<usize>> = None;
    Ok(std::iter::from_fn(move || loop {
        let c = list.get(shape)?;
        let advanced = match digits.as_mut() {
            None => {
                let mut d = vec![0; c.interior_count()];
                let ok = !spec.discriminating_only
                    || is_discriminating(c, &d)
                    || next_labelling(c, &mut d, s, spec.discriminating_only);
                digits = Some(d);
                ok
            }
            Some(d) => next_labelling(c, d, s, spec.discriminating_only),
        };
        if !advanced {
            shape += 1;
            digits = None;
            continue;
        }
        let labels: Vec<Symbol> = digits
            .as_ref()
            .unwrap()
            .iter()
            .map(|&i| spec.symbols[i])
            .collect();
        return Some(c.build(&spec.leaves, &labels, spec.flavor));
    }))
}

/// Depth-first labelling search; `accept(pos, labels)` is asked once every
/// interior up to `pos` carries a label.
fn search_labellings(
    c: &Compiled,
    s: usize,
    accept: &mut dyn FnMut(usize, &[usize]) -> bool,
    found: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let m = c.interior_count();
    let mut labels = vec![0usize; m];
    fn go(
        c: &Compiled,
        s: usize,
        pos: usize,
        labels: &mut Vec<usize>,
        accept: &mut dyn FnMut(usize, &[usize]) -> bool,
        found: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if pos == labels.len() {
            return found(labels);
        }
        for l in 0..s {
            if c.parent[pos].is_some_and(|p| labels[p] == l) {
                continue;
            }
            labels[pos] = l;
            if accept(pos, labels) && go(c, s, pos + 1, labels, accept, found) {
                return true;
            }
        }
        false
    }
    go(c, s, 0, &mut labels, accept, found)
}

fn check_bounds(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::TooFewLeaves { needed: min, got: n });
    }
    if n > MAX_LEAVES {
        return Err(Error::BoundsExceeded(format!(
            "{n} leaves, at most {MAX_LEAVES} supported"
        )));
    }
    Ok(())
}

/// All discriminating rooted labelled trees representing `d`, up to
/// labelled isomorphism, stopping after `limit` of them.
pub fn rooted_representations(d: &MultisetMap, limit: usize) -> Result<Vec<LabelledTree>> {
    let n = d.ground().len();
    check_bounds(n, 3)?;
    if limit == 0 || d.values().iter().any(|v| v.distinct_count() == 3) {
        return Ok(Vec::new());
    }
    let image: Vec<Symbol> = d.image().into_iter().collect();
    // a rooted tree on n leaves has at most n - 1 interior vertices
    if image.len() > n - 1 {
        return Ok(Vec::new());
    }
    let targets: Vec<[usize; 3]> = d
        .values()
        .iter()
        .map(|v| v.entries().map(|s| image.binary_search(&s).unwrap()))
        .collect();
    let names = d.ground().names().to_vec();
    let mut out = Vec::new();
    for c in rooted_shapes(n) {
        if c.interior_count() < image.len() {
            continue;
        }
        // triples whose last-labelled lca sits at each position
        let mut due: Vec<Vec<usize>> = vec![Vec::new(); c.interior_count()];
        for (r, l) in c.triple_lcas.iter().enumerate() {
            due[*l.iter().max().unwrap()].push(r);
        }
        let mut accept = |pos: usize, labels: &[usize]| {
            due[pos].iter().all(|&r| {
                let mut got = c.triple_lcas[r].map(|v| labels[v]);
                got.sort_unstable();
                got == targets[r]
            })
        };
        let mut found = |labels: &[usize]| {
            let labels: Vec<Symbol> = labels.iter().map(|&i| image[i]).collect();
            out.push(c.build(&names, &labels, Flavor::Rooted));
            out.len() >= limit
        };
        if search_labellings(c, image.len(), &mut accept, &mut found) {
            break;
        }
    }
    Ok(out)
}

/// A discriminating rooted labelled tree representing `d`, if one exists.
pub fn representable_rooted(d: &MultisetMap) -> Result<Option<LabelledTree>> {
    Ok(rooted_representations(d, 1)?.pop())
}

/// All discriminating unrooted labelled trees representing `d`, stopping
/// after `limit` of them.
pub fn unrooted_representations(d: &PlainMap, limit: usize) -> Result<Vec<LabelledTree>> {
    let n = d.ground().len();
    check_bounds(n, 3)?;
    let image: Vec<Symbol> = d.image().into_iter().collect();
    // an unrooted tree on n leaves has at most n - 2 interior vertices
    if limit == 0 || image.len() > n - 2 {
        return Ok(Vec::new());
    }
    let targets: Vec<usize> = d
        .values()
        .iter()
        .map(|v| image.binary_search(v).unwrap())
        .collect();
    let names = d.ground().names().to_vec();
    let mut out = Vec::new();
    for c in rooted_shapes(n - 1) {
        if c.interior_count() < image.len() {
            continue;
        }
        let medians = c.unrooted_medians();
        let mut due: Vec<Vec<usize>> = vec![Vec::new(); c.interior_count()];
        for (r, &v) in medians.iter().enumerate() {
            due[v].push(r);
        }
        let mut accept =
            |pos: usize, labels: &[usize]| due[pos].iter().all(|&r| labels[pos] == targets[r]);
        let mut found = |labels: &[usize]| {
            let labels: Vec<Symbol> = labels.iter().map(|&i| image[i]).collect();
            out.push(c.build(&names, &labels, Flavor::Unrooted));
            out.len() >= limit
        };
        if search_labellings(c, image.len(), &mut accept, &mut found) {
            break;
        }
    }
    Ok(out)
}

/// A discriminating unrooted labelled tree representing `d`, if one exists.
pub fn representable_unrooted(d: &PlainMap) -> Result<Option<LabelledTree>> {
    Ok(unrooted_representations(d, 1)?.pop())
}

/// Value tables (lexicographic over leaves `0..n`) of every map on `n`
/// leaves induced by a rooted labelled tree with labels in
/// `Symbol(0)..Symbol(symbols)`.
pub fn rooted_map_tables(n: usize, symbols: usize) -> Result<HashSet<Vec<TripleMultiset>>> {
    check_bounds(n, 3)?;
    let mut out = HashSet::new();
    for c in rooted_shapes(n) {
        let mut digits = vec![0; c.interior_count()];
        let mut ok = is_discriminating(c, &digits) || next_labelling(c, &mut digits, symbols, true);
        while ok {
            out.insert(
                c.triple_lcas
                    .iter()
                    .map(|l| {
                        let [a, b, e] = l.map(|v| Symbol(digits[v] as u32));
                        TripleMultiset::new(a, b, e)
                    })
                    .collect(),
            );
            ok = next_labelling(c, &mut digits, symbols, true);
        }
    }
    Ok(out)
}

/// Like [`rooted_map_tables`], for unrooted trees and plain maps.
pub fn unrooted_map_tables(n: usize, symbols: usize) -> Result<HashSet<Vec<Symbol>>> {
    check_bounds(n, 3)?;
    let mut out = HashSet::new();
    for c in rooted_shapes(n - 1) {
        let medians = c.unrooted_medians();
        let mut digits = vec![0; c.interior_count()];
        let mut ok = is_discriminating(c, &digits) || next_labelling(c, &mut digits, symbols, true);
        while ok {
            out.insert(medians.iter().map(|&v| Symbol(digits[v] as u32)).collect());
            ok = next_labelling(c, &mut digits, symbols, true);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{three_way_from_rooted, three_way_from_unrooted};

    fn leaves(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn shape_counts() {
        let rooted: Vec<usize> = (2..=6).map(rooted_shape_count).collect();
        assert_eq!(rooted, [1, 4, 26, 236, 2752]);
        assert_eq!(unrooted_shape_count(5), 26);
    }

    #[test]
    fn shapes_are_distinct() {
        for n in 2..=5 {
            let spec = EnumerationSpec::new(leaves(n), vec![Symbol(0)], Flavor::Rooted);
            let mut spec = spec;
            spec.discriminating_only = false;
            let codes: HashSet<String> = enumerate_labelled_trees(&spec)
                .unwrap()
                .map(|t| t.tree().tree_code(None))
                .collect();
            assert_eq!(codes.len(), rooted_shape_count(n));
        }
    }

    #[test]
    fn enumeration_matches_census_and_is_duplicate_free() {
        for flavor in [Flavor::Rooted, Flavor::Unrooted] {
            for disc in [true, false] {
                let mut spec = EnumerationSpec::new(leaves(4), vec![Symbol(0), Symbol(1)], flavor);
                spec.discriminating_only = disc;
                let trees: Vec<LabelledTree> = enumerate_labelled_trees(&spec).unwrap().collect();
                assert_eq!(trees.len() as u64, census(&spec).unwrap().labelled_trees);
                let codes: HashSet<String> = trees.iter().map(|t| t.canonical_code()).collect();
                assert_eq!(codes.len(), trees.len());
                assert!(trees.iter().all(|t| !disc || t.is_discriminating()));
            }
        }
    }

    #[test]
    fn medians_match_tree_medians() {
        let spec = EnumerationSpec::new(leaves(5), vec![Symbol(0), Symbol(1), Symbol(2)], Flavor::Unrooted);
        let tables = unrooted_map_tables(5, 3).unwrap();
        for t in enumerate_labelled_trees(&spec).unwrap() {
            let d = three_way_from_unrooted(&t).unwrap();
            assert!(tables.contains(d.values()));
        }
    }

    #[test]
    fn search_finds_enumerated_trees() {
        let spec = EnumerationSpec::new(leaves(5), vec![Symbol(0), Symbol(1)], Flavor::Rooted);
        for t in enumerate_labelled_trees(&spec).unwrap() {
            let d = three_way_from_rooted(&t).unwrap();
            let found = representable_rooted(&d).unwrap().unwrap();
            assert_eq!(three_way_from_rooted(&found).unwrap(), d);
        }
        let spec = EnumerationSpec::new(leaves(5), vec![Symbol(0), Symbol(1)], Flavor::Unrooted);
        for t in enumerate_labelled_trees(&spec).unwrap() {
            let d = three_way_from_unrooted(&t).unwrap();
            let found = representable_unrooted(&d).unwrap().unwrap();
            assert!(found.labelled_isomorphic(&t));
        }
    }

    #[test]
    fn bounds() {
        let spec = EnumerationSpec::new(leaves(7), vec![Symbol(0)], Flavor::Rooted);
        assert!(matches!(census(&spec), Err(Error::BoundsExceeded(_))));
        let spec = EnumerationSpec::new(leaves(4), vec![Symbol(0), Symbol(1), Symbol(2), Symbol(3)], Flavor::Rooted);
        assert!(matches!(census(&spec), Err(Error::BoundsExceeded(_))));
    }
}
