use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::farris::farris_inverse;
use crate::maps::{
    combinations, farris_project, three_way_from_rooted, three_way_from_unrooted, GroundSet,
    MultisetMap, PlainMap, TwoWayMap,
};
use crate::newick::write_labelled;
use crate::oracle;
use crate::symbols::{Symbol, SymbolTable};
use crate::tree::{natural_cmp, Flavor, LabelledTree, PhyloTree, TreeBuilder};

use super::{build, triplets_from_three_way, triplets_from_two_way, TripletSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Representable,
    NotRepresentable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Representable => "representable",
            Verdict::NotRepresentable => "not-representable",
        })
    }
}

/// The step at which a decision procedure rejected its input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureStage {
    TripletExtraction,
    Build,
    LabellingVerification,
    FixedCherry,
}

impl fmt::Display for FailureStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureStage::TripletExtraction => "triplet-extraction",
            FailureStage::Build => "build",
            FailureStage::LabellingVerification => "labelling-verification",
            FailureStage::FixedCherry => "fixed-cherry",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ReconstructionOutcome {
    pub verdict: Verdict,
    /// The discriminating representation, when one exists.
    pub tree: Option<LabelledTree>,
    pub failure_stage: Option<FailureStage>,
    /// Whether the discriminating representation is unique.
    pub unique: bool,
    pub detail: String,
}

impl ReconstructionOutcome {
    fn found(tree: LabelledTree, unique: bool) -> Self {
        ReconstructionOutcome {
            verdict: Verdict::Representable,
            tree: Some(tree),
            failure_stage: None,
            unique,
            detail: String::new(),
        }
    }

    fn failed(stage: FailureStage, detail: impl Into<String>) -> Self {
        ReconstructionOutcome {
            verdict: Verdict::NotRepresentable,
            tree: None,
            failure_stage: Some(stage),
            unique: false,
            detail: detail.into(),
        }
    }

    pub fn is_representable(&self) -> bool {
        self.verdict == Verdict::Representable
    }

    /// Verdict header as `#` comment lines, followed by the tree if any.
    pub fn to_text(&self, table: &SymbolTable) -> String {
        let mut out = format!("# verdict: {}\n", self.verdict);
        if let Some(stage) = self.failure_stage {
            out.push_str(&format!("# stage: {stage}\n"));
        }
        if !self.detail.is_empty() {
            out.push_str(&format!("# detail: {}\n", self.detail));
        }
        if let Some(t) = &self.tree {
            out.push_str(&format!("# unique: {}\n", self.unique));
            out.push_str(&write_labelled(t, table));
            out.push('\n');
        }
        out
    }
}

/// A pair whose recovered two-way value is contradictory.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no consistent value for ({}, {}): {detail}", pair[0], pair[1])]
pub struct RecoveryConflict {
    pub pair: [String; 2],
    pub detail: String,
}

/// The two-way map read off a three-way map given the triplets of its tree:
/// a triple without a triplet contributes its only symbol, `xy|z`
/// contributes `n(d(x,y,z))` and `xz|y` or `yz|x` contribute `m(d(x,y,z))`.
pub fn recover_two_way(
    d: &MultisetMap,
    ts: &TripletSet,
) -> std::result::Result<TwoWayMap, RecoveryConflict> {
    let g = d.ground();
    let n = g.len();
    let index: HashMap<&str, usize> = g
        .names()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let outliers = ts.outliers(&index);
    let conflict = |x: usize, y: usize, detail: String| RecoveryConflict {
        pair: [g.name(x).to_string(), g.name(y).to_string()],
        detail,
    };
    let mut values = Vec::with_capacity(crate::maps::binom(n, 2));
    for x in 0..n {
        for y in x + 1..n {
            let mut value: Option<Symbol> = None;
            for z in (0..n).filter(|&z| z != x && z != y) {
                let v = d.at(x, y, z);
                let mut key = [x, y, z];
                key.sort_unstable();
                let candidate = match outliers.get(&key).map(Vec::as_slice) {
                    None | Some([]) => {
                        if v.distinct_count() != 1 {
                            return Err(conflict(
                                x,
                                y,
                                format!(
                                    "triple ({}, {}, {}) displays no triplet but has a mixed value",
                                    g.name(x),
                                    g.name(y),
                                    g.name(z)
                                ),
                            ));
                        }
                        Some(v.entries()[0])
                    }
                    Some([o]) if *o == z => v.n(),
                    Some([_]) => v.m(),
                    Some(_) => {
                        return Err(conflict(x, y, format!("several triplets on the triple with {}", g.name(z))))
                    }
                }
                .ok_or_else(|| conflict(x, y, "value has three distinct symbols".into()))?;
                match value {
                    Some(prev) if prev != candidate => {
                        return Err(conflict(x, y, format!("disagreement at {}", g.name(z))));
                    }
                    _ => value = Some(candidate),
                }
            }
            values.push(value.expect("at least three leaves"));
        }
    }
    Ok(TwoWayMap::from_values(g.clone(), values).expect("one value per pair"))
}

/// Labels every interior vertex of `tree` by `dd` on a leaf pair whose lca
/// it is, failing on the first pair that disagrees.
fn label_from_pairs(tree: PhyloTree, dd: &TwoWayMap) -> std::result::Result<LabelledTree, String> {
    let g = dd.ground();
    let leaves: Vec<usize> = g
        .names()
        .iter()
        .map(|x| tree.leaf(x).expect("same leaf set"))
        .collect();
    let mut labels: Vec<Option<Symbol>> = vec![None; tree.vertex_count()];
    for p in combinations(g.len(), 2) {
        let v = tree.lca_vertices(leaves[p[0]], leaves[p[1]]);
        let s = dd.at(p[0], p[1]);
        match labels[v] {
            Some(prev) if prev != s => {
                return Err(format!(
                    "pair ({}, {}) disagrees with another pair at the same vertex",
                    g.name(p[0]),
                    g.name(p[1])
                ));
            }
            _ => labels[v] = Some(s),
        }
    }
    LabelledTree::new(tree, labels).map_err(|e| e.to_string())
}

fn smallest_leaf(g: &GroundSet) -> &str {
    g.names()
        .iter()
        .min_by(|a, b| natural_cmp(a, b))
        .expect("non-empty ground set")
}

/// Decides whether `d` is induced by an unrooted labelled tree, working
/// through the two-way projection at the smallest leaf.
pub fn decide_tree_map(d: &PlainMap) -> Result<ReconstructionOutcome> {
    let r = smallest_leaf(d.ground()).to_string();
    decide_tree_map_at(d, &r)
}

/// [`decide_tree_map`] with an explicit projection leaf `r`.
pub fn decide_tree_map_at(d: &PlainMap, r: &str) -> Result<ReconstructionOutcome> {
    let n = d.ground().len();
    if n < 4 {
        return Err(Error::TooFewLeaves { needed: 4, got: n });
    }
    let dr = farris_project(d, r)?;
    let ts = match triplets_from_two_way(&dr) {
        Ok(ts) => ts,
        Err(v) => {
            return Ok(ReconstructionOutcome::failed(
                FailureStage::TripletExtraction,
                format!("projection at {r} has three distinct values on {}", v.witness.join(",")),
            ))
        }
    };
    let Some(shape) = build(&ts, dr.ground().names())? else {
        return Ok(ReconstructionOutcome::failed(
            FailureStage::Build,
            format!("triplets of the projection at {r} are incompatible"),
        ));
    };
    let rooted = match label_from_pairs(shape, &dr) {
        Ok(t) => t,
        Err(e) => return Ok(ReconstructionOutcome::failed(FailureStage::LabellingVerification, e)),
    };
    let tree = farris_inverse(&rooted, r)?;
    if three_way_from_unrooted(&tree)? != *d {
        return Ok(ReconstructionOutcome::failed(
            FailureStage::LabellingVerification,
            "candidate tree induces a different map",
        ));
    }
    Ok(ReconstructionOutcome::found(tree.collapse_to_discriminating(), true))
}

/// Outcome for every choice of projection leaf, in ground-set order.
pub fn decide_tree_map_every_r(d: &PlainMap) -> Result<Vec<(String, ReconstructionOutcome)>> {
    d.ground()
        .names()
        .iter()
        .map(|r| Ok((r.clone(), decide_tree_map_at(d, r)?)))
        .collect()
}

/// The cherry and symbols of a fixed-cherry map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedCherry {
    pub cherry: [String; 2],
    pub root_symbol: Symbol,
    pub inner_symbol: Symbol,
}

/// Detects the map of a fixed-cherry tree: for some pair `{x1, x2}` and
/// symbols `a != b`, every triple avoiding the pair maps to `3b` and every
/// other triple to `2a+b`.
pub fn is_fixed_cherry_map(d: &MultisetMap) -> Option<FixedCherry> {
    let g = d.ground();
    let n = g.len();
    if n < 4 {
        return None;
    }
    for p in combinations(n, 2) {
        let (x1, x2) = (p[0], p[1]);
        let z = (0..n).find(|&z| z != x1 && z != x2).expect("n >= 4");
        let probe = d.at(x1, x2, z);
        let (Some(a), Some(b)) = (probe.m(), probe.n()) else {
            continue;
        };
        if a == b {
            continue;
        }
        let ok = combinations(n, 3).all(|t| {
            let v = d.at(t[0], t[1], t[2]);
            let touches = t.contains(&x1) || t.contains(&x2);
            if touches {
                v.m() == Some(a) && v.n() == Some(b)
            } else {
                v.distinct_count() == 1 && v.entries()[0] == b
            }
        });
        if ok {
            return Some(FixedCherry {
                cherry: [g.name(x1).to_string(), g.name(x2).to_string()],
                root_symbol: a,
                inner_symbol: b,
            });
        }
    }
    None
}

/// The fixed-cherry tree on `leaves` described by `fc`.
pub fn fixed_cherry_tree(fc: &FixedCherry, leaves: &[String]) -> Result<LabelledTree> {
    let mut b = TreeBuilder::new();
    let root = b.add_interior(None, Some(fc.root_symbol));
    let v = b.add_interior(Some(root), Some(fc.inner_symbol));
    let w = b.add_interior(Some(root), Some(fc.inner_symbol));
    for x in &fc.cherry {
        if !leaves.contains(x) {
            return Err(Error::UnknownLeaf(x.clone()));
        }
        b.add_leaf(Some(v), x.clone());
    }
    for x in leaves.iter().filter(|x| !fc.cherry.contains(x)) {
        b.add_leaf(Some(w), x.clone());
    }
    b.finish(Flavor::Rooted)
}

/// Decides whether `d` is induced by a rooted labelled tree and, if so,
/// reconstructs its discriminating representation.
///
/// From five leaves on, fixed-cherry maps are recognised directly; all other
/// maps go through triplet extraction, BUILD, two-way recovery and a final
/// comparison of the induced map with `d`. Three and four leaves are
/// decided by exhaustive search, which also reports whether the
/// representation is unique.
pub fn decide_ultrametric(d: &MultisetMap) -> Result<ReconstructionOutcome> {
    let n = d.ground().len();
    if n < 3 {
        return Err(Error::TooFewLeaves { needed: 3, got: n });
    }
    if n < 5 {
        let reps = oracle::rooted_representations(d, 2)?;
        return Ok(match reps.first() {
            Some(t) => ReconstructionOutcome::found(t.normalized(), reps.len() == 1),
            None => ReconstructionOutcome::failed(
                FailureStage::LabellingVerification,
                "no labelled tree on these leaves induces the map",
            ),
        });
    }
    if let Some(fc) = is_fixed_cherry_map(d) {
        let t = fixed_cherry_tree(&fc, d.ground().names())?;
        if three_way_from_rooted(&t)? != *d {
            return Ok(ReconstructionOutcome::failed(
                FailureStage::FixedCherry,
                "fixed-cherry tree induces a different map",
            ));
        }
        return Ok(ReconstructionOutcome::found(t.normalized(), true));
    }
    let tr = triplets_from_three_way(d)?;
    let Some(shape) = build(&tr, d.ground().names())? else {
        return Ok(ReconstructionOutcome::failed(
            FailureStage::Build,
            "extracted triplets are incompatible",
        ));
    };
    let displayed = TripletSet::from_tree(&shape);
    let dd = match recover_two_way(d, &displayed) {
        Ok(dd) => dd,
        Err(e) => {
            return Ok(ReconstructionOutcome::failed(
                FailureStage::LabellingVerification,
                e.to_string(),
            ))
        }
    };
    let tree = match label_from_pairs(shape, &dd) {
        Ok(t) => t,
        Err(e) => return Ok(ReconstructionOutcome::failed(FailureStage::LabellingVerification, e)),
    };
    if three_way_from_rooted(&tree)? != *d {
        return Ok(ReconstructionOutcome::failed(
            FailureStage::LabellingVerification,
            "candidate tree induces a different map",
        ));
    }
    Ok(ReconstructionOutcome::found(tree.collapse_to_discriminating(), true))
}
