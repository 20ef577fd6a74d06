//! Three-way symbolic maps arising from vertex-labelled phylogenetic trees.
//!
//! An unrooted labelled tree induces a map on leaf triples through the
//! label of each triple's median vertex; a rooted labelled tree induces a
//! map into 3-element multisets through the labels of the three pairwise
//! least common ancestors. This crate builds those maps, checks the
//! four- and five-point conditions that characterize them, and recovers the
//! unique discriminating tree behind a representable map, either directly
//! or by feeding extracted triplets to BUILD.

pub mod conditions;
pub mod error;
pub mod farris;
pub mod fixtures;
pub mod io;
pub mod maps;
pub mod newick;
pub mod oracle;
pub mod reconstruct;
pub mod sample;
pub mod symbols;
pub mod tree;

pub use error::{Error, Result};
pub use farris::{farris_inverse, farris_transform, FarrisResult};
pub use maps::{
    farris_project, lift_two_way, three_way_from_rooted, three_way_from_unrooted,
    two_way_from_tree, GroundSet, MultisetMap, PlainMap, ThreeWayMap, TwoWayMap,
};
pub use symbols::{Symbol, SymbolCombination, SymbolTable, TripleMultiset};
pub use tree::{Flavor, LabelledTree, PhyloTree, TreeBuilder, Triplet, VertexId};
pub use conditions::{
    check_m, check_p, check_quartets, check_u, classify_quartet, compute_s, QuartetType,
    Violation, ViolationKind,
};
pub use io::{parse_map, LoadedMap, ValueKind};
pub use oracle::{representable_rooted, representable_unrooted, EnumerationSpec};
pub use reconstruct::{
    build, decide_tree_map, decide_ultrametric, triplets_from_three_way, FailureStage,
    ReconstructionOutcome, TripletSet, Verdict,
};
