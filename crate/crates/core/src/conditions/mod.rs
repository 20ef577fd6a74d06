//! Point conditions characterizing two-way ultrametrics, unrooted tree-maps
//! and three-way ultrametrics.
//!
//! Every checker returns the full list of violations in lexicographic
//! subset order, so reports are deterministic.

mod five_point;
mod quartet;
mod treemap;
mod ultrametric;

use std::fmt;

use serde::Serialize;

pub use five_point::{
    check_p, check_ultrametric_by_fives, compute_s, compute_s_matrix, FivePointSystem, A,
    A_INV_TIMES_6,
};
pub use quartet::{
    check_quartets, classify_quartet, quartet_pattern_map, quartet_pattern_value, QuartetType,
    QUARTET_PATTERNS,
};
pub use treemap::check_m;
pub use ultrametric::check_u;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ViolationKind {
    U1,
    U2,
    M1,
    M2,
    P1,
    P2,
    P3,
    QuartetType,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::U1 => "U1",
            ViolationKind::U2 => "U2",
            ViolationKind::M1 => "M1",
            ViolationKind::M2 => "M2",
            ViolationKind::P1 => "P1",
            ViolationKind::P2 => "P2",
            ViolationKind::P3 => "P3",
            ViolationKind::QuartetType => "QuartetType",
        };
        f.write_str(s)
    }
}

/// One failed instance of a condition, with the leaves that witness it.
///
/// For patterned conditions the witness lists leaves in the order they are
/// bound to the pattern variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Vec<String>,
    pub detail: String,
}

impl Violation {
    pub(crate) fn new(kind: ViolationKind, witness: Vec<String>, detail: impl Into<String>) -> Self {
        Violation {
            kind,
            witness,
            detail: detail.into(),
        }
    }

    pub fn witness_set(&self) -> std::collections::BTreeSet<&str> {
        self.witness.iter().map(String::as_str).collect()
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.kind, self.witness.join(","), self.detail)
    }
}

pub(crate) fn names(ground: &crate::maps::GroundSet, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| ground.name(i).to_string()).collect()
}

/// All orderings of `items`, in lexicographic order of positions.
pub(crate) fn permutations<const N: usize>(items: [usize; N]) -> Vec<[usize; N]> {
    let mut out = Vec::new();
    let mut perm = items;
    perm.sort_unstable();
    loop {
        out.push(perm);
        // next lexicographic permutation
        let Some(i) = (0..N.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..N).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    out
}
