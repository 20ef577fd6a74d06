use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::tree::{sort_natural, Flavor, PhyloTree, TreeBuilder, VertexId};

use super::TripletSet;

/// Aho et al.'s BUILD: a rooted tree on `ground` displaying every triplet in
/// `ts`, or `None` if no such tree exists.
///
/// Each level joins `x` and `y` whenever some `xy|z` has all three leaves in
/// the current set, then recurses on the connected components. The result
/// is minimally resolved: one child per component.
pub fn build(ts: &TripletSet, ground: &[String]) -> Result<Option<PhyloTree>> {
    let mut names = ground.to_vec();
    sort_natural(&mut names);
    names.dedup();
    if names.len() < 2 {
        return Err(Error::TooFewLeaves {
            needed: 2,
            got: names.len(),
        });
    }
    let index: HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut triplets = Vec::with_capacity(ts.len());
    for t in ts.iter() {
        let ((x, y), z) = (t.cherry(), t.outlier());
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::NotASubset(s.to_string()))
        };
        triplets.push([lookup(x)?, lookup(y)?, lookup(z)?]);
    }
    let mut builder = TreeBuilder::new();
    let leaves: Vec<usize> = (0..names.len()).collect();
    if !grow(&leaves, triplets, None, &names, &mut builder) {
        return Ok(None);
    }
    Ok(Some(builder.finish_shape(Flavor::Rooted)?))
}

fn grow(
    leaves: &[usize],
    triplets: Vec<[usize; 3]>,
    parent: Option<VertexId>,
    names: &[String],
    builder: &mut TreeBuilder,
) -> bool {
    if let [leaf] = leaves {
        builder.add_leaf(parent, names[*leaf].clone());
        return true;
    }
    let local: HashMap<usize, usize> = leaves.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut uf: Vec<usize> = (0..leaves.len()).collect();
    fn find(uf: &mut [usize], mut a: usize) -> usize {
        while uf[a] != a {
            uf[a] = uf[uf[a]];
            a = uf[a];
        }
        a
    }
    for &[x, y, _] in &triplets {
        let (a, b) = (find(&mut uf, local[&x]), find(&mut uf, local[&y]));
        uf[a] = b;
    }
    // components in order of their smallest leaf
    let mut comp_of_root: HashMap<usize, usize> = HashMap::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for (i, &x) in leaves.iter().enumerate() {
        let r = find(&mut uf, i);
        let c = *comp_of_root.entry(r).or_insert_with(|| {
            comps.push(Vec::new());
            comps.len() - 1
        });
        comps[c].push(x);
    }
    if comps.len() == 1 {
        return false;
    }
    let mut split: Vec<Vec<[usize; 3]>> = vec![Vec::new(); comps.len()];
    for t in triplets {
        let cx = comp_of_root[&find(&mut uf, local[&t[0]])];
        let cz = comp_of_root[&find(&mut uf, local[&t[2]])];
        if cx == cz {
            split[cx].push(t);
        }
    }
    let v = builder.add_interior(parent, None);
    comps
        .iter()
        .zip(split)
        .all(|(c, ts)| grow(c, ts, Some(v), names, builder))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::{parse_shape, write_shape};
    use crate::tree::Triplet;

    fn set(ground: &[&str], ts: &[(&str, &str, &str)]) -> (TripletSet, Vec<String>) {
        let ground: Vec<String> = ground.iter().map(|s| s.to_string()).collect();
        let mut out = TripletSet::new(ground.clone());
        for &(x, y, z) in ts {
            out.insert(Triplet::new(x, y, z)).unwrap();
        }
        (out, ground)
    }

    #[test]
    fn single_triplet() {
        let (ts, g) = set(&["1", "2", "3"], &[("1", "2", "3")]);
        let t = build(&ts, &g).unwrap().unwrap();
        assert_eq!(write_shape(&t), "((1,2),3);");
    }

    #[test]
    fn contradiction() {
        let (ts, g) = set(&["1", "2", "3"], &[("1", "2", "3"), ("1", "3", "2")]);
        assert!(build(&ts, &g).unwrap().is_none());
    }

    #[test]
    fn minimally_resolved() {
        let (ts, g) = set(
            &["1", "2", "3", "4", "5"],
            &[
                ("3", "4", "1"),
                ("3", "4", "2"),
                ("3", "5", "1"),
                ("3", "5", "2"),
                ("4", "5", "1"),
                ("4", "5", "2"),
            ],
        );
        let t = build(&ts, &g).unwrap().unwrap();
        assert!(t.isomorphic(&parse_shape("(1,2,(3,4,5));").unwrap()));
        assert_eq!(&t.displayed_triplets(), ts.triplets());
    }

    #[test]
    fn tree_triplets_rebuild_the_tree() {
        let t = parse_shape("(((1,2),3,(4,5)),(6,7));").unwrap();
        let ts = TripletSet::from_tree(&t);
        let back = build(&ts, &t.leaf_names()).unwrap().unwrap();
        assert!(back.isomorphic(&t));
    }

    #[test]
    fn unknown_leaf() {
        let (ts, _) = set(&["1", "2", "3"], &[("1", "2", "3")]);
        let g = vec!["1".to_string(), "2".to_string()];
        assert!(matches!(build(&ts, &g), Err(Error::NotASubset(_))));
    }
}
