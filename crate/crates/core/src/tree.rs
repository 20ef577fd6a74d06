//! Rooted and unrooted phylogenetic trees with interior-vertex labellings.
//!
//! Both flavors share one representation: a parent array over dense vertex
//! ids. An unrooted tree is stored rooted at one of its interior vertices;
//! the choice of that vertex carries no meaning and every unrooted query
//! (median, isomorphism, serialization) is independent of it.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbols::Symbol;

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Rooted,
    Unrooted,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Rooted => "rooted",
            Flavor::Unrooted => "unrooted",
        })
    }
}

/// Orders leaf names numerically when both parse as integers, otherwise
/// lexicographically, with numbers first.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

pub(crate) fn sort_natural(names: &mut [String]) {
    names.sort_by(|a, b| natural_cmp(a, b));
}

/// Incremental construction of a tree; validated by [`TreeBuilder::finish`].
#[derive(Debug, Clone, Default)]
pub struct TreeBuilder {
    parent: Vec<Option<VertexId>>,
    names: Vec<Option<String>>,
    labels: Vec<Option<Symbol>>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_interior(&mut self, parent: Option<VertexId>, label: Option<Symbol>) -> VertexId {
        self.parent.push(parent);
        self.names.push(None);
        self.labels.push(label);
        self.parent.len() - 1
    }

    pub fn add_leaf(&mut self, parent: Option<VertexId>, name: impl Into<String>) -> VertexId {
        self.parent.push(parent);
        self.names.push(Some(name.into()));
        self.labels.push(None);
        self.parent.len() - 1
    }

    pub fn set_label(&mut self, v: VertexId, label: Symbol) {
        self.labels[v] = Some(label);
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn finish_shape(self, flavor: Flavor) -> Result<PhyloTree> {
        PhyloTree::from_parts(flavor, self.parent, self.names)
    }

    /// Builds a labelled tree; every interior vertex must carry a label.
    pub fn finish(self, flavor: Flavor) -> Result<LabelledTree> {
        let labels = self.labels;
        let tree = PhyloTree::from_parts(flavor, self.parent, self.names)?;
        LabelledTree::new(tree, labels)
    }
}

/// A rooted or unrooted phylogenetic tree on a set of named leaves.
#[derive(Debug, Clone)]
pub struct PhyloTree {
    flavor: Flavor,
    parent: Vec<Option<VertexId>>,
    children: Vec<Vec<VertexId>>,
    names: Vec<Option<String>>,
    depth: Vec<usize>,
    root: VertexId,
    leaf_index: HashMap<String, VertexId>,
}

impl PhyloTree {
    pub fn from_parts(
        flavor: Flavor,
        parent: Vec<Option<VertexId>>,
        names: Vec<Option<String>>,
    ) -> Result<Self> {
        let n = parent.len();
        if names.len() != n {
            return Err(Error::MalformedTree("name table size mismatch".into()));
        }
        let mut children = vec![Vec::new(); n];
        let mut root = None;
        for (v, p) in parent.iter().enumerate() {
            match *p {
                Some(p) if p >= n || p == v => {
                    return Err(Error::MalformedTree(format!("bad parent for vertex {v}")))
                }
                Some(p) => children[p].push(v),
                None if root.is_some() => {
                    return Err(Error::MalformedTree("more than one root".into()))
                }
                None => root = Some(v),
            }
        }
        let root = root.ok_or_else(|| Error::MalformedTree("no root".into()))?;

        let mut depth = vec![usize::MAX; n];
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        let mut seen = 1;
        while let Some(v) = queue.pop_front() {
            for &c in &children[v] {
                depth[c] = depth[v] + 1;
                seen += 1;
                queue.push_back(c);
            }
        }
        if seen != n {
            return Err(Error::MalformedTree("parent structure is not a tree".into()));
        }

        let mut leaf_index = HashMap::new();
        for v in 0..n {
            let is_leaf = children[v].is_empty();
            match (&names[v], is_leaf) {
                (Some(name), true) => {
                    if leaf_index.insert(name.clone(), v).is_some() {
                        return Err(Error::DuplicateLeaf(name.clone()));
                    }
                }
                (None, true) => {
                    return Err(Error::MalformedTree(format!("leaf vertex {v} has no name")))
                }
                (Some(name), false) => {
                    return Err(Error::MalformedTree(format!(
                        "interior vertex carries leaf name `{name}`"
                    )))
                }
                (None, false) => {}
            }
            if !is_leaf {
                let min_children = match flavor {
                    Flavor::Unrooted if v == root => 3,
                    _ => 2,
                };
                if children[v].len() < min_children {
                    return Err(Error::MalformedTree(format!(
                        "interior vertex {v} has degree two"
                    )));
                }
            }
        }
        let min_leaves = match flavor {
            Flavor::Rooted => 2,
            Flavor::Unrooted => 3,
        };
        if leaf_index.len() < min_leaves {
            return Err(Error::TooFewLeaves {
                needed: min_leaves,
                got: leaf_index.len(),
            });
        }
        Ok(Self {
            flavor,
            parent,
            children,
            names,
            depth,
            root,
            leaf_index,
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.children[v].is_empty()
    }

    pub fn leaf_name(&self, v: VertexId) -> Option<&str> {
        self.names[v].as_deref()
    }

    pub fn depth(&self, v: VertexId) -> usize {
        self.depth[v]
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_index.len()
    }

    pub fn leaf(&self, name: &str) -> Result<VertexId> {
        self.leaf_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownLeaf(name.to_string()))
    }

    pub fn has_leaf(&self, name: &str) -> bool {
        self.leaf_index.contains_key(name)
    }

    /// Leaf names in natural order.
    pub fn leaf_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.leaf_index.keys().cloned().collect();
        sort_natural(&mut names);
        names
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count()).filter(|&v| !self.is_leaf(v))
    }

    /// Undirected neighbours of `v`.
    pub fn neighbours(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self.parent[v].into_iter().collect();
        out.extend_from_slice(&self.children[v]);
        out
    }

    /// Interior edges as (parent, child) pairs.
    pub fn interior_edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.vertex_count()).filter_map(move |v| match self.parent[v] {
            Some(p) if !self.is_leaf(v) => Some((p, v)),
            _ => None,
        })
    }

    /// Deepest common ancestor of two vertices in the stored rooting.
    pub(crate) fn lca_vertices(&self, mut a: VertexId, mut b: VertexId) -> VertexId {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].expect("non-root has parent");
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].expect("non-root has parent");
        }
        while a != b {
            a = self.parent[a].expect("non-root has parent");
            b = self.parent[b].expect("non-root has parent");
        }
        a
    }

    /// The least common ancestor of two distinct leaves of a rooted tree.
    pub fn lca(&self, x: &str, y: &str) -> Result<VertexId> {
        if self.flavor != Flavor::Rooted {
            return Err(Error::WrongFlavor { expected: "rooted" });
        }
        let (a, b) = (self.leaf(x)?, self.leaf(y)?);
        if a == b {
            return Err(Error::Arity { expected: 2, got: 1 });
        }
        Ok(self.lca_vertices(a, b))
    }

    /// Median of three vertices: of the three pairwise lcas in any rooting,
    /// two coincide and the remaining one is the median.
    pub(crate) fn median_vertices(&self, a: VertexId, b: VertexId, c: VertexId) -> VertexId {
        let ab = self.lca_vertices(a, b);
        let ac = self.lca_vertices(a, c);
        let bc = self.lca_vertices(b, c);
        if ab == ac {
            bc
        } else if ab == bc {
            ac
        } else {
            ab
        }
    }

    /// The unique vertex lying on all three pairwise paths between the leaves.
    pub fn median(&self, x: &str, y: &str, z: &str) -> Result<VertexId> {
        let (a, b, c) = (self.leaf(x)?, self.leaf(y)?, self.leaf(z)?);
        if a == b || a == c || b == c {
            return Err(Error::Arity { expected: 3, got: 2 });
        }
        Ok(self.median_vertices(a, b, c))
    }

    /// Same vertices and adjacency, stored rooted at `new_root`.
    pub(crate) fn rerooted(&self, new_root: VertexId) -> PhyloTree {
        let n = self.vertex_count();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[new_root] = true;
        let mut queue = VecDeque::from([new_root]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        PhyloTree::from_parts(self.flavor, parent, self.names.clone())
            .expect("rerooting an unrooted tree at an interior vertex stays valid")
    }

    /// The interior vertex adjacent to the smallest leaf; the canonical
    /// storage root for unrooted trees.
    pub(crate) fn canonical_unrooted_root(&self) -> VertexId {
        let first = &self.leaf_names()[0];
        let leaf = self.leaf_index[first];
        self.neighbours(leaf)[0]
    }

    /// Rooted triplets displayed by the tree, one per resolved leaf triple.
    pub fn displayed_triplets(&self) -> BTreeSet<Triplet> {
        let names = self.leaf_names();
        let ids: Vec<VertexId> = names.iter().map(|n| self.leaf_index[n]).collect();
        let mut out = BTreeSet::new();
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                let ij = self.lca_vertices(ids[i], ids[j]);
                for k in j + 1..ids.len() {
                    let ik = self.lca_vertices(ids[i], ids[k]);
                    let jk = self.lca_vertices(ids[j], ids[k]);
                    let t = if ik == jk && ij != ik {
                        Some((i, j, k))
                    } else if ij == jk && ik != ij {
                        Some((i, k, j))
                    } else if ij == ik && jk != ij {
                        Some((j, k, i))
                    } else {
                        None
                    };
                    if let Some((a, b, c)) = t {
                        out.insert(Triplet::new(&names[a], &names[b], &names[c]));
                    }
                }
            }
        }
        out
    }

    /// Minimal rooted subtree spanning the leaves `ys`, with vertices of
    /// indegree and outdegree one suppressed. Returns the subtree and, for
    /// each of its vertices, the originating vertex.
    pub(crate) fn induced(&self, ys: &[String]) -> Result<(PhyloTree, Vec<VertexId>)> {
        if self.flavor != Flavor::Rooted {
            return Err(Error::WrongFlavor { expected: "rooted" });
        }
        if ys.len() < 2 {
            return Err(Error::TooFewLeaves {
                needed: 2,
                got: ys.len(),
            });
        }
        let mut count = vec![0usize; self.vertex_count()];
        let mut seen = BTreeSet::new();
        for y in ys {
            let v = self
                .leaf_index
                .get(y)
                .copied()
                .ok_or_else(|| Error::NotASubset(y.clone()))?;
            if !seen.insert(v) {
                return Err(Error::DuplicateLeaf(y.clone()));
            }
            let mut cur = Some(v);
            while let Some(c) = cur {
                count[c] += 1;
                cur = self.parent[c];
            }
        }
        let total = ys.len();
        let mut top = self.root;
        loop {
            let kept: Vec<VertexId> = self.children[top]
                .iter()
                .copied()
                .filter(|&c| count[c] > 0)
                .collect();
            if kept.len() == 1 && count[kept[0]] == total {
                top = kept[0];
            } else {
                break;
            }
        }

        let mut builder = TreeBuilder::new();
        let mut origin = Vec::new();
        let mut stack = vec![(top, None)];
        while let Some((v, new_parent)) = stack.pop() {
            // Skip down through suppressed vertices.
            let mut v = v;
            loop {
                let kept: Vec<VertexId> = self.children[v]
                    .iter()
                    .copied()
                    .filter(|&c| count[c] > 0)
                    .collect();
                if kept.len() == 1 {
                    v = kept[0];
                } else {
                    break;
                }
            }
            let id = if self.is_leaf(v) {
                builder.add_leaf(new_parent, self.names[v].clone().unwrap())
            } else {
                builder.add_interior(new_parent, None)
            };
            origin.push(v);
            for &c in self.children[v].iter().rev() {
                if count[c] > 0 {
                    stack.push((c, Some(id)));
                }
            }
        }
        Ok((builder.finish_shape(Flavor::Rooted)?, origin))
    }

    /// Canonical string for the subtree at `v`; equal codes mean isomorphic
    /// subtrees fixing leaf names (and labels, when given).
    pub(crate) fn canonical_code(&self, v: VertexId, labels: Option<&[Option<Symbol>]>) -> String {
        if let Some(name) = &self.names[v] {
            return format!("'{}'", name.replace('\'', "''"));
        }
        let mut codes: Vec<String> = self.children[v]
            .iter()
            .map(|&c| self.canonical_code(c, labels))
            .collect();
        codes.sort();
        let label = labels
            .and_then(|l| l[v])
            .map(|s| s.0.to_string())
            .unwrap_or_default();
        format!("({}){}", codes.join(","), label)
    }

    /// Canonical code of the whole tree, independent of vertex numbering and
    /// (for unrooted trees) of the storage root.
    pub(crate) fn tree_code(&self, labels: Option<&[Option<Symbol>]>) -> String {
        match self.flavor {
            Flavor::Rooted => format!("R{}", self.canonical_code(self.root, labels)),
            Flavor::Unrooted => {
                let r = self.canonical_unrooted_root();
                let t = self.rerooted(r);
                format!("U{}", t.canonical_code(r, labels))
            }
        }
    }

    pub fn isomorphic(&self, other: &PhyloTree) -> bool {
        self.flavor == other.flavor && self.tree_code(None) == other.tree_code(None)
    }

    /// Builds a copy in which vertices are renumbered by a preorder walk
    /// with children sorted by their smallest leaf name.
    pub(crate) fn normalized_order(&self) -> Vec<VertexId> {
        let root = match self.flavor {
            Flavor::Rooted => self.root,
            Flavor::Unrooted => self.canonical_unrooted_root(),
        };
        let tree = if root == self.root {
            std::borrow::Cow::Borrowed(self)
        } else {
            std::borrow::Cow::Owned(self.rerooted(root))
        };
        let mut min_leaf: Vec<Option<String>> = vec![None; self.vertex_count()];
        fn fill(t: &PhyloTree, v: VertexId, out: &mut Vec<Option<String>>) -> String {
            let best = if let Some(n) = &t.names[v] {
                n.clone()
            } else {
                let mut best: Option<String> = None;
                for &c in &t.children[v] {
                    let m = fill(t, c, out);
                    if best.as_ref().is_none_or(|b| natural_cmp(&m, b) == Ordering::Less) {
                        best = Some(m);
                    }
                }
                best.unwrap()
            };
            out[v] = Some(best.clone());
            best
        }
        fill(&tree, root, &mut min_leaf);
        let mut order = Vec::with_capacity(self.vertex_count());
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            order.push(v);
            let mut kids = tree.children[v].clone();
            kids.sort_by(|&a, &b| {
                natural_cmp(min_leaf[a].as_ref().unwrap(), min_leaf[b].as_ref().unwrap())
            });
            stack.extend(kids.into_iter().rev());
        }
        order
    }
}

/// A phylogenetic tree together with a labelling of its interior vertices.
#[derive(Debug, Clone)]
pub struct LabelledTree {
    tree: PhyloTree,
    labels: Vec<Option<Symbol>>,
}

impl LabelledTree {
    /// `labels` is indexed by vertex; entries for leaves are ignored.
    pub fn new(tree: PhyloTree, mut labels: Vec<Option<Symbol>>) -> Result<Self> {
        if labels.len() != tree.vertex_count() {
            return Err(Error::MalformedTree("label table size mismatch".into()));
        }
        for v in 0..tree.vertex_count() {
            if tree.is_leaf(v) {
                labels[v] = None;
            } else if labels[v].is_none() {
                return Err(Error::MissingLabel(v));
            }
        }
        Ok(Self { tree, labels })
    }

    pub fn tree(&self) -> &PhyloTree {
        &self.tree
    }

    pub fn flavor(&self) -> Flavor {
        self.tree.flavor
    }

    /// Label of an interior vertex; `None` for leaves.
    pub fn label(&self, v: VertexId) -> Option<Symbol> {
        self.labels[v]
    }

    pub(crate) fn interior_label(&self, v: VertexId) -> Symbol {
        self.labels[v].expect("interior vertex is labelled")
    }

    pub fn leaf_names(&self) -> Vec<String> {
        self.tree.leaf_names()
    }

    pub fn lca(&self, x: &str, y: &str) -> Result<VertexId> {
        self.tree.lca(x, y)
    }

    pub fn median(&self, x: &str, y: &str, z: &str) -> Result<VertexId> {
        self.tree.median(x, y, z)
    }

    /// Every interior edge joins differently labelled vertices.
    pub fn is_discriminating(&self) -> bool {
        self.tree
            .interior_edges()
            .all(|(p, c)| self.labels[p] != self.labels[c])
    }

    /// Contracts every interior edge whose endpoints share a label.
    pub fn collapse_to_discriminating(&self) -> LabelledTree {
        let t = &self.tree;
        let mut builder = TreeBuilder::new();
        // (old vertex, new parent)
        let mut stack = vec![(t.root, None)];
        while let Some((v, new_parent)) = stack.pop() {
            if t.is_leaf(v) {
                builder.add_leaf(new_parent, t.names[v].clone().unwrap());
                continue;
            }
            let label = self.labels[v];
            let id = builder.add_interior(new_parent, label);
            // Gather the children of the whole same-label component below v.
            let mut frontier = t.children[v].clone();
            let mut kids = Vec::new();
            while let Some(c) = frontier.pop() {
                if !t.is_leaf(c) && self.labels[c] == label {
                    frontier.extend_from_slice(&t.children[c]);
                } else {
                    kids.push(c);
                }
            }
            for c in kids {
                stack.push((c, Some(id)));
            }
        }
        builder
            .finish(t.flavor)
            .expect("contracting edges keeps a phylogenetic tree")
            .normalized()
    }

    /// Rooted subtree induced by `ys`, labels carried along.
    pub fn induced_subtree(&self, ys: &[String]) -> Result<LabelledTree> {
        let (shape, origin) = self.tree.induced(ys)?;
        let labels = origin.iter().map(|&v| self.labels[v]).collect();
        LabelledTree::new(shape, labels)
    }

    /// Isomorphism fixing leaf names and preserving interior labels.
    pub fn labelled_isomorphic(&self, other: &LabelledTree) -> bool {
        self.flavor() == other.flavor()
            && self.tree.leaf_count() == other.tree.leaf_count()
            && self.canonical_code() == other.canonical_code()
    }

    pub fn canonical_code(&self) -> String {
        self.tree.tree_code(Some(&self.labels))
    }

    pub fn displayed_triplets(&self) -> BTreeSet<Triplet> {
        self.tree.displayed_triplets()
    }

    /// Renumbers vertices into a deterministic preorder; unrooted trees are
    /// re-stored rooted at the neighbour of their smallest leaf.
    pub fn normalized(&self) -> LabelledTree {
        let order = self.tree.normalized_order();
        let mut new_id = vec![usize::MAX; order.len()];
        for (i, &v) in order.iter().enumerate() {
            new_id[v] = i;
        }
        let root = order[0];
        let base = if root == self.tree.root {
            self.tree.clone()
        } else {
            self.tree.rerooted(root)
        };
        let mut builder = TreeBuilder::new();
        for &v in &order {
            let p = base.parent[v].map(|p| new_id[p]);
            if base.is_leaf(v) {
                builder.add_leaf(p, base.names[v].clone().unwrap());
            } else {
                builder.add_interior(p, self.labels[v]);
            }
        }
        builder.finish(self.flavor()).expect("renumbering keeps validity")
    }
}

/// A rooted triplet `xy|z`: cherry {x, y}, outlier z.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Triplet {
    cherry: [String; 2],
    outlier: String,
}

impl Triplet {
    pub fn new(x: &str, y: &str, z: &str) -> Self {
        let mut cherry = [x.to_string(), y.to_string()];
        if natural_cmp(&cherry[0], &cherry[1]) == Ordering::Greater {
            cherry.swap(0, 1);
        }
        Self {
            cherry,
            outlier: z.to_string(),
        }
    }

    pub fn try_new(x: &str, y: &str, z: &str) -> Result<Self> {
        if x == y || x == z || y == z {
            return Err(Error::Arity { expected: 3, got: 2 });
        }
        Ok(Self::new(x, y, z))
    }

    pub fn cherry(&self) -> (&str, &str) {
        (&self.cherry[0], &self.cherry[1])
    }

    pub fn outlier(&self) -> &str {
        &self.outlier
    }

    /// The three leaves in natural order.
    pub fn leaves(&self) -> [&str; 3] {
        let mut l = [
            self.cherry[0].as_str(),
            self.cherry[1].as_str(),
            self.outlier.as_str(),
        ];
        l.sort_by(|a, b| natural_cmp(a, b));
        l
    }
}

impl Ord for Triplet {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.cherry[0], &other.cherry[0])
            .then_with(|| natural_cmp(&self.cherry[1], &other.cherry[1]))
            .then_with(|| natural_cmp(&self.outlier, &other.outlier))
    }
}

impl PartialOrd for Triplet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} | {}", self.cherry[0], self.cherry[1], self.outlier)
    }
}
