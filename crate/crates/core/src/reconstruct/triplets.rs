use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::conditions::{Violation, ViolationKind};
use crate::error::{parse_err, Error, Result};
use crate::maps::{combinations, MultisetMap, TwoWayMap};
use crate::tree::{sort_natural, PhyloTree, Triplet};

/// A set of rooted triplets over a ground set of leaves.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TripletSet {
    ground: Vec<String>,
    triplets: BTreeSet<Triplet>,
}

impl TripletSet {
    /// An empty set over `ground`, kept in natural order.
    pub fn new(ground: impl IntoIterator<Item = String>) -> Self {
        let mut ground: Vec<String> = ground.into_iter().collect();
        sort_natural(&mut ground);
        ground.dedup();
        TripletSet {
            ground,
            triplets: BTreeSet::new(),
        }
    }

    /// Triplets displayed by a rooted tree.
    pub fn from_tree(t: &PhyloTree) -> Self {
        let mut ts = TripletSet::new(t.leaf_names());
        ts.triplets = t.displayed_triplets();
        ts
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    /// Adds a triplet; its leaves must lie in the ground set.
    pub fn insert(&mut self, t: Triplet) -> Result<bool> {
        for x in t.leaves() {
            if !self.ground.iter().any(|g| g == x) {
                return Err(Error::UnknownLeaf(x.to_string()));
            }
        }
        Ok(self.triplets.insert(t))
    }

    pub fn contains(&self, t: &Triplet) -> bool {
        self.triplets.contains(t)
    }

    pub fn len(&self) -> usize {
        self.triplets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triplets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triplet> {
        self.triplets.iter()
    }

    pub fn triplets(&self) -> &BTreeSet<Triplet> {
        &self.triplets
    }

    /// Reads one `x y | z` per line; `#` starts a comment. The ground set is
    /// every leaf mentioned plus `extra`.
    pub fn parse(text: &str, extra: &[String]) -> Result<Self> {
        let mut parsed = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (left, right) = line
                .split_once('|')
                .ok_or_else(|| parse_err(i + 1, "expected `x y | z`"))?;
            let cherry: Vec<&str> = left.split_whitespace().collect();
            let outlier: Vec<&str> = right.split_whitespace().collect();
            if cherry.len() != 2 || outlier.len() != 1 {
                return Err(parse_err(i + 1, "expected `x y | z`"));
            }
            let t = Triplet::try_new(cherry[0], cherry[1], outlier[0])
                .map_err(|e| parse_err(i + 1, e.to_string()))?;
            parsed.push(t);
        }
        let names = parsed
            .iter()
            .flat_map(|t| t.leaves().map(String::from))
            .chain(extra.iter().cloned());
        let mut ts = TripletSet::new(names);
        for t in parsed {
            ts.insert(t)?;
        }
        Ok(ts)
    }

    /// Index form: `outlier[sorted triple] = outlier index`.
    pub(crate) fn outliers(&self, index: &HashMap<&str, usize>) -> HashMap<[usize; 3], Vec<usize>> {
        let mut out: HashMap<[usize; 3], Vec<usize>> = HashMap::new();
        for t in &self.triplets {
            let ((x, y), z) = (t.cherry(), t.outlier());
            let [x, y, z] = [x, y, z].map(|s| index[s]);
            let mut key = [x, y, z];
            key.sort_unstable();
            out.entry(key).or_default().push(z);
        }
        out
    }
}

impl fmt::Display for TripletSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.triplets {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Triplets `xy|z` with `D(x,y) != D(x,z) = D(y,z)`.
///
/// A triple with three distinct values is returned as a (U1) violation.
pub fn triplets_from_two_way(d: &TwoWayMap) -> std::result::Result<TripletSet, Violation> {
    let g = d.ground();
    let mut ts = TripletSet::new(g.names().iter().cloned());
    for t in combinations(g.len(), 3) {
        let (x, y, z) = (t[0], t[1], t[2]);
        let (xy, xz, yz) = (d.at(x, y), d.at(x, z), d.at(y, z));
        let triplet = if xy == xz && xz == yz {
            None
        } else if xz == yz {
            Some((x, y, z))
        } else if xy == yz {
            Some((x, z, y))
        } else if xy == xz {
            Some((y, z, x))
        } else {
            return Err(Violation::new(
                ViolationKind::U1,
                t.iter().map(|&i| g.name(i).to_string()).collect(),
                "three pairwise distinct values",
            ));
        };
        if let Some((a, b, c)) = triplet {
            ts.triplets.insert(Triplet::new(g.name(a), g.name(b), g.name(c)));
        }
    }
    Ok(ts)
}

/// Triplets `xy|z` for which some fourth leaf `u` witnesses one of the two
/// extraction properties:
///
/// * `d(x,u,z) = d(y,u,z) != d(x,y,u)`, and if `d(x,y,u)` has a single
///   underlying symbol then `d(x,y,u) != d(x,y,z)`;
/// * `d(x,u,z)`, `d(y,u,z)`, `d(x,y,u)` are pairwise distinct and
///   `m(d(x,u,z)) = m(d(y,u,z)) != m(d(x,y,u))`.
pub fn triplets_from_three_way(d: &MultisetMap) -> Result<TripletSet> {
    let g = d.ground();
    let n = g.len();
    if n < 4 {
        return Err(Error::TooFewLeaves { needed: 4, got: n });
    }
    let mut ts = TripletSet::new(g.names().iter().cloned());
    for t in combinations(n, 3) {
        for (x, y, z) in [(t[0], t[1], t[2]), (t[0], t[2], t[1]), (t[1], t[2], t[0])] {
            let witnessed = (0..n)
                .filter(|&u| u != x && u != y && u != z)
                .any(|u| extraction_holds(d, x, y, z, u));
            if witnessed {
                ts.triplets.insert(Triplet::new(g.name(x), g.name(y), g.name(z)));
            }
        }
    }
    Ok(ts)
}

fn extraction_holds(d: &MultisetMap, x: usize, y: usize, z: usize, u: usize) -> bool {
    let xuz = d.at(x, u, z);
    let yuz = d.at(y, u, z);
    let xyu = d.at(x, y, u);
    if xuz == yuz && xuz != xyu && (xyu.distinct_count() != 1 || xyu != d.at(x, y, z)) {
        return true;
    }
    if xuz == yuz || xuz == xyu || yuz == xyu {
        return false;
    }
    match (xuz.m(), yuz.m(), xyu.m()) {
        (Some(a), Some(b), Some(c)) => a == b && a != c,
        _ => false,
    }
}
