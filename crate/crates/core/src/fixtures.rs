//! Small named trees and maps with known behaviour, used by the tests, the
//! benchmarks and the command-line examples.
//!
//! Every fixture is stored as text and parsed on demand, so the same
//! strings double as sample input files.

use crate::io::{parse_multiset_map, parse_plain_map};
use crate::maps::{lift_two_way, GroundSet, MultisetMap, PlainMap, TwoWayMap};
use crate::newick::parse_labelled;
use crate::symbols::{SymbolTable, TripleMultiset};
use crate::tree::LabelledTree;

/// Unrooted tree on 1..5 with a B-labelled vertex above each of the
/// cherries {1,2} and {4,5}, both hanging from an A vertex.
pub const SAMPLE_UNROOTED: &str = "unrooted\n((1,2)B,3,(4,5)B)A;";

/// Rooted tree on 1..5: cherries {1,2} and {3,4} under B, leaf 5 and both
/// cherries under an A root.
pub const SAMPLE_ROOTED: &str = "((1,2)B,(3,4)B,5)A;";

/// The seven discriminating rooted quartets, one per entry of
/// [`QUARTET_PATTERNS`](crate::conditions::QUARTET_PATTERNS), in the same order.
pub const QUARTET_TREES: [&str; 7] = [
    "(1,2,3,4)A;",
    "((1,2)B,3,4)A;",
    "((1,2)B,(3,4)B)A;",
    "((1,2)B,(3,4)C)A;",
    "((1,2,3)B,4)A;",
    "(((1,2)A,3)B,4)A;",
    "(((1,2)C,3)B,4)A;",
];

/// Consistent on every 4-subset, yet not a symbolic ultrametric.
pub const FOUR_CONSISTENT_MAP: &str = "\
x\ty\tz\tvalue
1\t2\t3\t2A+B
1\t2\t4\t2A+B
1\t2\t5\t3B
1\t3\t4\t3A
1\t3\t5\t2A+B
1\t4\t5\t2A+B
2\t3\t4\t3A
2\t3\t5\t2A+B
2\t4\t5\t2A+B
3\t4\t5\tA+2B
";

/// 3A on {3,4,5} and 2A+B elsewhere. Its extracted triplets are compatible,
/// but no labelling of the BUILD tree reproduces the map.
pub const BUILD_CAVEAT_MAP: &str = "\
x\ty\tz\tvalue
1\t2\t3\t2A+B
1\t2\t4\t2A+B
1\t2\t5\t2A+B
1\t3\t4\t2A+B
1\t3\t5\t2A+B
1\t4\t5\t2A+B
2\t3\t4\t2A+B
2\t3\t5\t2A+B
2\t4\t5\t2A+B
3\t4\t5\t3A
";

/// A on the triples containing leaf 1, B elsewhere. Every projection is a
/// symbolic ultrametric but the map itself is not a tree-map.
pub const LEAF_ONE_MAP: &str = "\
x\ty\tz\tvalue
1\t2\t3\tA
1\t2\t4\tA
1\t2\t5\tA
1\t3\t4\tA
1\t3\t5\tA
1\t4\t5\tA
2\t3\t4\tB
2\t3\t5\tB
2\t4\t5\tB
3\t4\t5\tB
";

/// Two discriminating rooted trees on 1..5 over {A, B} whose lca label
/// *sets* agree on every triple while their lca label multisets do not.
pub const SET_VALUED_TWINS: [&str; 2] = ["((1,2,3,4)A,5)B;", "(((1,2,3)A,5)B,4)A;"];

/// Two-way map whose lift fails only the second five-point condition:
/// D(1,2)=C, D(1,3)=B, A elsewhere.
pub const P2_FAILURE_PAIRS: &str = "\
x\ty\tvalue
1\t2\tC
1\t3\tB
1\t4\tA
1\t5\tA
2\t3\tA
2\t4\tA
2\t5\tA
3\t4\tA
3\t5\tA
4\t5\tA
";

/// Two-way map whose lift fails only the third five-point condition:
/// B on the path 3-2-1-4, A elsewhere.
pub const P3_FAILURE_PAIRS: &str = "\
x\ty\tvalue
1\t2\tB
1\t3\tA
1\t4\tB
1\t5\tA
2\t3\tB
2\t4\tA
2\t5\tA
3\t4\tA
3\t5\tA
4\t5\tA
";

fn tree(text: &str, st: &mut SymbolTable) -> LabelledTree {
    parse_labelled(text, st).expect("fixture tree parses")
}

pub fn sample_unrooted(st: &mut SymbolTable) -> LabelledTree {
    tree(SAMPLE_UNROOTED, st)
}

pub fn sample_rooted(st: &mut SymbolTable) -> LabelledTree {
    tree(SAMPLE_ROOTED, st)
}

pub fn quartet_trees(st: &mut SymbolTable) -> Vec<LabelledTree> {
    QUARTET_TREES.iter().map(|t| tree(t, st)).collect()
}

pub fn set_valued_twins(st: &mut SymbolTable) -> [LabelledTree; 2] {
    SET_VALUED_TWINS.map(|t| tree(t, st))
}

pub fn four_consistent_map(st: &mut SymbolTable) -> MultisetMap {
    parse_multiset_map(FOUR_CONSISTENT_MAP, st).expect("fixture map parses")
}

pub fn build_caveat_map(st: &mut SymbolTable) -> MultisetMap {
    parse_multiset_map(BUILD_CAVEAT_MAP, st).expect("fixture map parses")
}

pub fn leaf_one_map(st: &mut SymbolTable) -> PlainMap {
    parse_plain_map(LEAF_ONE_MAP, st).expect("fixture map parses")
}

/// 2A+B on every triple of 1..5: fails only the first five-point condition.
pub fn constant_map(st: &mut SymbolTable) -> MultisetMap {
    let (a, b) = (st.intern("A"), st.intern("B"));
    let ground = GroundSet::new((1..=5).map(|i| i.to_string())).expect("distinct names");
    MultisetMap::from_fn(ground, |_, _, _| TripleMultiset::new(a, a, b))
}

fn lifted(text: &str, st: &mut SymbolTable) -> MultisetMap {
    let d: TwoWayMap = crate::io::parse_two_way_map(text, st).expect("fixture map parses");
    lift_two_way(&d)
}

pub fn p2_failure_map(st: &mut SymbolTable) -> MultisetMap {
    lifted(P2_FAILURE_PAIRS, st)
}

pub fn p3_failure_map(st: &mut SymbolTable) -> MultisetMap {
    lifted(P3_FAILURE_PAIRS, st)
}
