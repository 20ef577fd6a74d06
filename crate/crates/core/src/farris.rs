//! Symbolic Farris transform: an unrooted labelled tree on X, seen from a
//! leaf r, becomes a rooted labelled tree on X - {r}.

use crate::error::{Error, Result};
use crate::tree::{Flavor, LabelledTree, TreeBuilder, VertexId};

#[derive(Debug, Clone)]
pub struct FarrisResult {
    pub rooted: LabelledTree,
    pub removed_leaf: String,
    /// `(original interior vertex, transformed interior vertex)` pairs.
    pub vertex_map: Vec<(VertexId, VertexId)>,
}

/// Directs all edges away from `r`, then deletes `r` and its edge.
pub fn farris_transform(t: &LabelledTree, r: &str) -> Result<FarrisResult> {
    if t.flavor() != Flavor::Unrooted {
        return Err(Error::WrongFlavor {
            expected: "unrooted",
        });
    }
    let tree = t.tree();
    if tree.leaf_count() < 4 {
        return Err(Error::TooFewLeaves {
            needed: 4,
            got: tree.leaf_count(),
        });
    }
    let leaf = tree.leaf(r)?;
    let anchor = tree.neighbours(leaf)[0];
    let oriented = tree.rerooted(anchor);

    let mut start = anchor;
    // A degree-two anchor cannot occur in a valid unrooted tree; suppress it
    // anyway so the result stays phylogenetic.
    let rest: Vec<VertexId> = oriented
        .children(anchor)
        .iter()
        .copied()
        .filter(|&c| c != leaf)
        .collect();
    if rest.len() == 1 {
        start = rest[0];
    }

    let mut builder = TreeBuilder::new();
    let mut vertex_map = Vec::new();
    let mut stack = vec![(start, None)];
    while let Some((v, parent)) = stack.pop() {
        if v == leaf {
            continue;
        }
        if let Some(name) = oriented.leaf_name(v) {
            builder.add_leaf(parent, name);
            continue;
        }
        let id = builder.add_interior(parent, t.label(v));
        vertex_map.push((v, id));
        for &c in oriented.children(v).iter().rev() {
            stack.push((c, Some(id)));
        }
    }
    let rooted = builder.finish(Flavor::Rooted)?;
    Ok(FarrisResult {
        rooted,
        removed_leaf: r.to_string(),
        vertex_map,
    })
}

/// Attaches a new leaf `r` to the root and forgets the orientation.
pub fn farris_inverse(t: &LabelledTree, r: &str) -> Result<LabelledTree> {
    if t.flavor() != Flavor::Rooted {
        return Err(Error::WrongFlavor { expected: "rooted" });
    }
    let tree = t.tree();
    if tree.has_leaf(r) {
        return Err(Error::DuplicateLeaf(r.to_string()));
    }
    let mut builder = TreeBuilder::new();
    let mut stack = vec![(tree.root(), None)];
    let mut new_root = None;
    while let Some((v, parent)) = stack.pop() {
        if let Some(name) = tree.leaf_name(v) {
            builder.add_leaf(parent, name);
            continue;
        }
        let id = builder.add_interior(parent, t.label(v));
        if parent.is_none() {
            new_root = Some(id);
        }
        for &c in tree.children(v).iter().rev() {
            stack.push((c, Some(id)));
        }
    }
    builder.add_leaf(new_root, r);
    builder.finish(Flavor::Unrooted)
}
