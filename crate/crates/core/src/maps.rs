//! Total symbolic maps on the 2- and 3-subsets of a leaf set.
//!
//! Subsets are stored densely, indexed by their lexicographic rank over the
//! ordered ground set.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::symbols::{Symbol, TripleMultiset};
use crate::tree::{Flavor, LabelledTree};

pub(crate) fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Lexicographic rank of the pair `i < j` among pairs of `0..n`.
pub(crate) fn pair_rank(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    binom(n, 2) - binom(n - i, 2) + (j - i - 1)
}

/// Lexicographic rank of `i < j < k` among triples of `0..n`.
pub(crate) fn triple_rank(n: usize, i: usize, j: usize, k: usize) -> usize {
    debug_assert!(i < j && j < k && k < n);
    binom(n, 3) - binom(n - i, 3) + binom(n - 1 - i, 2) - binom(n - j, 2) + (k - j - 1)
}

fn sort3(a: usize, b: usize, c: usize) -> (usize, usize, usize) {
    let mut v = [a, b, c];
    v.sort_unstable();
    (v[0], v[1], v[2])
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// An ordered set of leaf names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl GroundSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateLeaf(n.clone()));
            }
        }
        Ok(Self { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownLeaf(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Same names, regardless of order.
    pub fn same_members(&self, other: &GroundSet) -> bool {
        self.len() == other.len() && self.names.iter().all(|n| other.contains(n))
    }

    pub(crate) fn subset_indices(&self, ys: &[String]) -> Result<Vec<usize>> {
        let mut idx = Vec::with_capacity(ys.len());
        for y in ys {
            let i = self
                .index
                .get(y)
                .copied()
                .ok_or_else(|| Error::NotASubset(y.clone()))?;
            if idx.contains(&i) {
                return Err(Error::DuplicateLeaf(y.clone()));
            }
            idx.push(i);
        }
        idx.sort_unstable();
        Ok(idx)
    }
}

/// A total map from the 2-subsets of the ground set into symbols.
#[derive(Debug, Clone)]
pub struct TwoWayMap {
    ground: GroundSet,
    values: Vec<Symbol>,
}

impl TwoWayMap {
    pub fn from_fn(ground: GroundSet, mut f: impl FnMut(usize, usize) -> Symbol) -> Self {
        let n = ground.len();
        let mut values = Vec::with_capacity(binom(n, 2));
        for i in 0..n {
            for j in i + 1..n {
                values.push(f(i, j));
            }
        }
        Self { ground, values }
    }

    pub fn from_values(ground: GroundSet, values: Vec<Symbol>) -> Result<Self> {
        if values.len() != binom(ground.len(), 2) {
            return Err(Error::IncompleteMap(format!(
                "{} of {} pairs",
                values.len(),
                binom(ground.len(), 2)
            )));
        }
        Ok(Self { ground, values })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    /// Value on the pair of ground-set indices `i != j`.
    pub fn at(&self, i: usize, j: usize) -> Symbol {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.values[pair_rank(self.len(), a, b)]
    }

    pub fn get(&self, x: &str, y: &str) -> Result<Symbol> {
        let (i, j) = (self.ground.index_of(x)?, self.ground.index_of(y)?);
        if i == j {
            return Err(Error::Arity { expected: 2, got: 1 });
        }
        Ok(self.at(i, j))
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn image(&self) -> BTreeSet<Symbol> {
        self.values.iter().copied().collect()
    }

    /// `(x, y, value)` in lexicographic pair order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, Symbol)> + '_ {
        combinations(self.len(), 2).map(move |p| {
            (
                self.ground.name(p[0]),
                self.ground.name(p[1]),
                self.at(p[0], p[1]),
            )
        })
    }
}

impl PartialEq for TwoWayMap {
    fn eq(&self, other: &Self) -> bool {
        if self.ground == other.ground {
            return self.values == other.values;
        }
        self.ground.same_members(&other.ground)
            && self
                .entries()
                .all(|(x, y, v)| other.get(x, y).map(|w| w == v).unwrap_or(false))
    }
}

/// A total map from the 3-subsets of the ground set into `V`.
#[derive(Debug, Clone)]
pub struct ThreeWayMap<V> {
    ground: GroundSet,
    values: Vec<V>,
}

/// Three-way map into plain symbols.
pub type PlainMap = ThreeWayMap<Symbol>;
/// Three-way map into size-3 multisets of symbols.
pub type MultisetMap = ThreeWayMap<TripleMultiset>;

impl<V: Copy + PartialEq> ThreeWayMap<V> {
    pub fn from_fn(ground: GroundSet, mut f: impl FnMut(usize, usize, usize) -> V) -> Self {
        let n = ground.len();
        let mut values = Vec::with_capacity(binom(n, 3));
        for t in combinations(n, 3) {
            values.push(f(t[0], t[1], t[2]));
        }
        Self { ground, values }
    }

    pub fn from_values(ground: GroundSet, values: Vec<V>) -> Result<Self> {
        if values.len() != binom(ground.len(), 3) {
            return Err(Error::IncompleteMap(format!(
                "{} of {} triples",
                values.len(),
                binom(ground.len(), 3)
            )));
        }
        Ok(Self { ground, values })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    /// Values in lexicographic triple order.
    pub fn values(&self) -> &[V] {
        &self.values
    }

    /// Value on three distinct ground-set indices, in any order.
    pub fn at(&self, a: usize, b: usize, c: usize) -> V {
        let (i, j, k) = sort3(a, b, c);
        self.values[triple_rank(self.len(), i, j, k)]
    }

    pub fn get(&self, x: &str, y: &str, z: &str) -> Result<V> {
        let (i, j, k) = (
            self.ground.index_of(x)?,
            self.ground.index_of(y)?,
            self.ground.index_of(z)?,
        );
        if i == j || i == k || j == k {
            return Err(Error::Arity { expected: 3, got: 2 });
        }
        Ok(self.at(i, j, k))
    }

    /// `([x, y, z], value)` in lexicographic triple order.
    pub fn entries(&self) -> impl Iterator<Item = ([&str; 3], V)> + '_ {
        combinations(self.len(), 3)
            .zip(self.values.iter().copied())
            .map(move |(t, v)| {
                (
                    [
                        self.ground.name(t[0]),
                        self.ground.name(t[1]),
                        self.ground.name(t[2]),
                    ],
                    v,
                )
            })
    }

    /// The map restricted to the 3-subsets of `ys`; the new ground set keeps
    /// the original relative order.
    pub fn restrict(&self, ys: &[String]) -> Result<Self> {
        if ys.len() < 3 {
            return Err(Error::TooFewLeaves {
                needed: 3,
                got: ys.len(),
            });
        }
        let idx = self.ground.subset_indices(ys)?;
        Ok(self.restrict_indices(&idx))
    }

    /// Restriction to sorted ground-set indices.
    pub(crate) fn restrict_indices(&self, idx: &[usize]) -> Self {
        let ground = GroundSet::new(idx.iter().map(|&i| self.ground.name(i).to_string()))
            .expect("subset of a ground set has distinct names");
        Self::from_fn(ground, |a, b, c| self.at(idx[a], idx[b], idx[c]))
    }

    /// The same map over a reordered ground set.
    pub fn reordered(&self, order: &GroundSet) -> Result<Self> {
        if !self.ground.same_members(order) {
            return Err(Error::NotASubset(format!(
                "ground sets differ: {:?} vs {:?}",
                self.ground.names(),
                order.names()
            )));
        }
        let map: Vec<usize> = order
            .names()
            .iter()
            .map(|n| self.ground.index_of(n).unwrap())
            .collect();
        Ok(Self::from_fn(order.clone(), |a, b, c| {
            self.at(map[a], map[b], map[c])
        }))
    }
}

impl<V: Copy + PartialEq> PartialEq for ThreeWayMap<V> {
    fn eq(&self, other: &Self) -> bool {
        if self.ground == other.ground {
            return self.values == other.values;
        }
        self.ground.same_members(&other.ground)
            && self
                .entries()
                .all(|([x, y, z], v)| other.get(x, y, z).map(|w| w == v).unwrap_or(false))
    }
}

impl PlainMap {
    pub fn image(&self) -> BTreeSet<Symbol> {
        self.values.iter().copied().collect()
    }
}

impl MultisetMap {
    pub fn image(&self) -> BTreeSet<Symbol> {
        self.values.iter().flat_map(|s| s.entries()).collect()
    }

    /// The set-valued view: each triple mapped to the underlying set of its
    /// multiset.
    pub fn set_valued(&self) -> Vec<BTreeSet<Symbol>> {
        self.values.iter().map(|s| s.underlying_set()).collect()
    }
}

fn tree_ground(t: &LabelledTree) -> GroundSet {
    GroundSet::new(t.leaf_names()).expect("tree leaves are distinct")
}

fn leaf_vertices(t: &LabelledTree, ground: &GroundSet) -> Vec<usize> {
    ground
        .names()
        .iter()
        .map(|n| t.tree().leaf(n).expect("ground set comes from the tree"))
        .collect()
}

/// `D(x, y) = t(lca(x, y))` for a labelled rooted tree.
pub fn two_way_from_tree(t: &LabelledTree) -> Result<TwoWayMap> {
    if t.flavor() != Flavor::Rooted {
        return Err(Error::WrongFlavor { expected: "rooted" });
    }
    let ground = tree_ground(t);
    let leaves = leaf_vertices(t, &ground);
    let tree = t.tree();
    Ok(TwoWayMap::from_fn(ground, |i, j| {
        t.interior_label(tree.lca_vertices(leaves[i], leaves[j]))
    }))
}

/// `δ(x, y, z) = t(median(x, y, z))` for a labelled unrooted tree.
pub fn three_way_from_unrooted(t: &LabelledTree) -> Result<PlainMap> {
    if t.flavor() != Flavor::Unrooted {
        return Err(Error::WrongFlavor {
            expected: "unrooted",
        });
    }
    let ground = tree_ground(t);
    let leaves = leaf_vertices(t, &ground);
    let tree = t.tree();
    Ok(PlainMap::from_fn(ground, |i, j, k| {
        t.interior_label(tree.median_vertices(leaves[i], leaves[j], leaves[k]))
    }))
}

/// `δ(x, y, z) = {t(lca(x, y)), t(lca(x, z)), t(lca(y, z))}` for a labelled
/// rooted tree.
pub fn three_way_from_rooted(t: &LabelledTree) -> Result<MultisetMap> {
    if t.flavor() != Flavor::Rooted {
        return Err(Error::WrongFlavor { expected: "rooted" });
    }
    let ground = tree_ground(t);
    let leaves = leaf_vertices(t, &ground);
    let tree = t.tree();
    let pair = TwoWayMap::from_fn(ground.clone(), |i, j| {
        t.interior_label(tree.lca_vertices(leaves[i], leaves[j]))
    });
    Ok(lift_two_way(&pair))
}

/// The multiset map `{D(x,y), D(x,z), D(y,z)}` induced by a two-way map.
pub fn lift_two_way(d: &TwoWayMap) -> MultisetMap {
    MultisetMap::from_fn(d.ground().clone(), |i, j, k| {
        TripleMultiset::new(d.at(i, j), d.at(i, k), d.at(j, k))
    })
}

/// `δ_r(x, y) = δ(x, y, r)` on the ground set without `r`.
pub fn farris_project(d: &PlainMap, r: &str) -> Result<TwoWayMap> {
    if d.len() < 4 {
        return Err(Error::TooFewLeaves {
            needed: 4,
            got: d.len(),
        });
    }
    let ri = d.ground().index_of(r)?;
    let keep: Vec<usize> = (0..d.len()).filter(|&i| i != ri).collect();
    let ground = GroundSet::new(keep.iter().map(|&i| d.ground().name(i).to_string()))?;
    Ok(TwoWayMap::from_fn(ground, |a, b| d.at(keep[a], keep[b], ri)))
}
