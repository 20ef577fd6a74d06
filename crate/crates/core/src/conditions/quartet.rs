use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{combinations, GroundSet, MultisetMap};
use crate::symbols::{Symbol, TripleMultiset};

use super::{names, permutations, Violation, ViolationKind};

/// The seven representable quartet patterns over abstract symbols
/// `0 = A, 1 = B, 2 = C`, rows for the triples `123, 124, 134, 234`.
pub const QUARTET_PATTERNS: [[[u8; 3]; 4]; 7] = [
    [[0, 0, 0], [0, 0, 0], [0, 0, 0], [0, 0, 0]],
    [[0, 0, 1], [0, 0, 1], [0, 0, 0], [0, 0, 0]],
    [[0, 0, 1], [0, 0, 1], [0, 0, 1], [0, 0, 1]],
    [[0, 0, 1], [0, 0, 1], [0, 0, 2], [0, 0, 2]],
    [[1, 1, 1], [0, 0, 1], [0, 0, 1], [0, 0, 1]],
    [[0, 1, 1], [0, 0, 0], [0, 0, 1], [0, 0, 1]],
    [[1, 1, 2], [0, 0, 2], [0, 0, 1], [0, 0, 1]],
];

const ROWS: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];

/// Value of pattern `index` (1-based) on a triple of pattern leaves
/// `1..=4`, with the abstract symbols replaced by `symbols`.
pub fn quartet_pattern_value(index: usize, triple: [usize; 3], symbols: [Symbol; 3]) -> TripleMultiset {
    let mut t = triple.map(|x| x - 1);
    t.sort_unstable();
    let row = ROWS.iter().position(|r| *r == t).expect("triple of 1..=4");
    let v = QUARTET_PATTERNS[index - 1][row].map(|s| symbols[s as usize]);
    TripleMultiset::new(v[0], v[1], v[2])
}

/// Outcome of matching a quartet restriction against the seven patterns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuartetType {
    /// 1-based pattern index, if any pattern matches.
    pub index: Option<usize>,
    /// Each leaf of the quartet with its pattern leaf in `1..=4`.
    pub leaf_bijection: Vec<(String, usize)>,
    /// Each image symbol with its pattern symbol `A`, `B` or `C`.
    pub symbol_bijection: Vec<(Symbol, char)>,
}

/// Finds the pattern of the restriction of `d` to the 4-set `ys`, trying
/// every leaf bijection and every injective renaming of symbols.
pub fn classify_quartet(d: &MultisetMap, ys: &[String]) -> Result<QuartetType> {
    if ys.len() != 4 {
        return Err(Error::Arity {
            expected: 4,
            got: ys.len(),
        });
    }
    let idx = d.ground().subset_indices(ys)?;
    Ok(classify_indices(d, [idx[0], idx[1], idx[2], idx[3]]))
}

fn classify_indices(d: &MultisetMap, q: [usize; 4]) -> QuartetType {
    let none = QuartetType {
        index: None,
        leaf_bijection: Vec::new(),
        symbol_bijection: Vec::new(),
    };
    let image: Vec<Symbol> = {
        let mut s: Vec<Symbol> = combinations(4, 3)
            .flat_map(|t| d.at(q[t[0]], q[t[1]], q[t[2]]).entries())
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    if image.len() > 3 {
        return none;
    }
    let injections = injections(image.len());
    for (i, pattern) in QUARTET_PATTERNS.iter().enumerate() {
        // perm[k] is the quartet leaf sent to pattern leaf k
        for perm in permutations([0usize, 1, 2, 3]) {
            let vals: Vec<[Symbol; 3]> = ROWS
                .iter()
                .map(|r| d.at(q[perm[r[0]]], q[perm[r[1]]], q[perm[r[2]]]).entries())
                .collect();
            for phi in &injections {
                let ok = vals.iter().zip(pattern).all(|(v, want)| {
                    let mut got = v.map(|s| {
                        phi[image.binary_search(&s).expect("symbol in image")]
                    });
                    got.sort_unstable();
                    got == *want
                });
                if ok {
                    let mut leaf_bijection: Vec<(String, usize)> = (0..4)
                        .map(|k| (d.ground().name(q[perm[k]]).to_string(), k + 1))
                        .collect();
                    leaf_bijection.sort_by_key(|(_, k)| *k);
                    return QuartetType {
                        index: Some(i + 1),
                        leaf_bijection,
                        symbol_bijection: image
                            .iter()
                            .zip(phi)
                            .map(|(&s, &a)| (s, (b'A' + a) as char))
                            .collect(),
                    };
                }
            }
        }
    }
    none
}

/// Injective maps from `0..k` into `0..3`.
fn injections(k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for p in permutations([0usize, 1, 2]) {
        let v: Vec<u8> = p[..k].iter().map(|&x| x as u8).collect();
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Reports every 4-subset whose restriction matches no pattern.
pub fn check_quartets(d: &MultisetMap) -> Result<Vec<Violation>> {
    let n = d.ground().len();
    if n < 4 {
        return Err(Error::TooFewLeaves { needed: 4, got: n });
    }
    Ok(combinations(n, 4)
        .filter(|q| classify_indices(d, [q[0], q[1], q[2], q[3]]).index.is_none())
        .map(|q| {
            Violation::new(
                ViolationKind::QuartetType,
                names(d.ground(), &q),
                "restriction matches none of the seven quartet patterns",
            )
        })
        .collect())
}

/// The map of pattern `index` on the ground set `1,2,3,4`.
pub fn quartet_pattern_map(index: usize, symbols: [Symbol; 3]) -> MultisetMap {
    let g = GroundSet::new(["1", "2", "3", "4"]).expect("distinct");
    MultisetMap::from_fn(g, |a, b, c| quartet_pattern_value(index, [a + 1, b + 1, c + 1], symbols))
}
