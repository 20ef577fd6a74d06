//! Triplet extraction, BUILD and the decision procedures that reconstruct
//! labelled trees from three-way maps.

mod build;
mod decide;
mod triplets;

pub use build::build;
pub use decide::{
    decide_tree_map, decide_tree_map_at, decide_tree_map_every_r, decide_ultrametric,
    fixed_cherry_tree, is_fixed_cherry_map, recover_two_way, FailureStage, FixedCherry,
    ReconstructionOutcome, RecoveryConflict, Verdict,
};
pub use triplets::{triplets_from_three_way, triplets_from_two_way, TripletSet};
