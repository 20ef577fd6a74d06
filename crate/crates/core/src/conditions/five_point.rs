use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::maps::{combinations, pair_rank, MultisetMap};
use crate::symbols::{Symbol, SymbolCombination, TripleMultiset};

use super::{names, permutations, Violation, ViolationKind};

/// Incidence of pairs (columns) in triples (rows) of a 5-set `x<y<z<u<v`,
/// both in lexicographic order: `A * mu = nu`.
pub const A: [[i64; 10]; 10] = [
    [1, 1, 0, 0, 1, 0, 0, 0, 0, 0],
    [1, 0, 1, 0, 0, 1, 0, 0, 0, 0],
    [1, 0, 0, 1, 0, 0, 1, 0, 0, 0],
    [0, 1, 1, 0, 0, 0, 0, 1, 0, 0],
    [0, 1, 0, 1, 0, 0, 0, 0, 1, 0],
    [0, 0, 1, 1, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, 1, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0, 1, 0, 1, 0],
    [0, 0, 0, 0, 0, 1, 1, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 1, 1, 1],
];

/// `6 * A^-1`.
pub const A_INV_TIMES_6: [[i64; 10]; 10] = [
    [2, 2, 2, -1, -1, -1, -1, -1, -1, 2],
    [2, -1, -1, 2, 2, -1, -1, -1, 2, -1],
    [-1, 2, -1, 2, -1, 2, -1, 2, -1, -1],
    [-1, -1, 2, -1, 2, 2, 2, -1, -1, -1],
    [2, -1, -1, -1, -1, 2, 2, 2, -1, -1],
    [-1, 2, -1, -1, 2, -1, 2, -1, 2, -1],
    [-1, -1, 2, 2, -1, -1, -1, 2, 2, -1],
    [-1, -1, 2, 2, -1, -1, 2, -1, -1, 2],
    [-1, 2, -1, -1, 2, -1, -1, 2, -1, 2],
    [2, -1, -1, -1, -1, 2, -1, -1, 2, 2],
];

/// The linear system relating a map on a 5-set to a candidate two-way map.
#[derive(Debug, Clone)]
pub struct FivePointSystem {
    /// The five leaves in ground-set order.
    pub leaves: [String; 5],
    /// Map values on the ten triples, lexicographic.
    pub nu: [TripleMultiset; 10],
    /// `A^-1 nu` read back as symbols, where every entry is a valid singleton.
    pub mu: [Option<Symbol>; 10],
}

impl FivePointSystem {
    pub fn new(d: &MultisetMap, ys: &[String]) -> Result<Self> {
        let idx = five_indices(d, ys)?;
        let mut nu = [TripleMultiset::uniform(Symbol(0)); 10];
        for (r, t) in combinations(5, 3).enumerate() {
            nu[r] = d.at(idx[t[0]], idx[t[1]], idx[t[2]]);
        }
        let mut mu = [None; 10];
        for (row, slot) in mu.iter_mut().enumerate() {
            *slot = matrix_row(&nu, row).as_singleton();
        }
        Ok(FivePointSystem {
            leaves: std::array::from_fn(|i| d.ground().name(idx[i]).to_string()),
            nu,
            mu,
        })
    }

    /// `A^-1 nu`, one combination per pair.
    pub fn solve(&self) -> [SymbolCombination; 10] {
        std::array::from_fn(|row| matrix_row(&self.nu, row))
    }

    /// `A mu` for a symbol per pair.
    pub fn apply(mu: &[Symbol; 10]) -> [TripleMultiset; 10] {
        std::array::from_fn(|row| {
            let cols: Vec<Symbol> = (0..10).filter(|&c| A[row][c] == 1).map(|c| mu[c]).collect();
            TripleMultiset::new(cols[0], cols[1], cols[2])
        })
    }
}

fn matrix_row(nu: &[TripleMultiset; 10], row: usize) -> SymbolCombination {
    let mut acc = SymbolCombination::zero();
    for (c, &v) in nu.iter().enumerate() {
        let coef = Rational64::new(A_INV_TIMES_6[row][c], 6);
        acc = acc + SymbolCombination::from(v) * coef;
    }
    acc
}

fn five_indices(d: &MultisetMap, ys: &[String]) -> Result<[usize; 5]> {
    if ys.len() != 5 {
        return Err(Error::Arity {
            expected: 5,
            got: ys.len(),
        });
    }
    let idx = d.ground().subset_indices(ys)?;
    if idx.len() != 5 {
        return Err(Error::Arity {
            expected: 5,
            got: idx.len(),
        });
    }
    Ok([idx[0], idx[1], idx[2], idx[3], idx[4]])
}

fn pq_positions(d: &MultisetMap, idx: &[usize; 5], p: &str, q: &str) -> Result<(usize, usize)> {
    let pi = d.ground().index_of(p)?;
    let qi = d.ground().index_of(q)?;
    let pos = |i: usize| {
        idx.iter()
            .position(|&j| j == i)
            .ok_or_else(|| Error::NotASubset(d.ground().name(i).to_string()))
    };
    let (a, b) = (pos(pi)?, pos(qi)?);
    if a == b {
        return Err(Error::Arity { expected: 2, got: 1 });
    }
    Ok((a.min(b), a.max(b)))
}

/// `S_{p,q}` over the 5-set `ys`, by the closed formula
/// `(2(d(p,q,e)+d(p,q,f)+d(p,q,g)+d(e,f,g)) - sum over {a,b} of (d(p,a,b)+d(q,a,b))) / 6`
/// where `{e,f,g}` is the rest of `ys`.
pub fn compute_s(d: &MultisetMap, ys: &[String], p: &str, q: &str) -> Result<SymbolCombination> {
    let idx = five_indices(d, ys)?;
    let (a, b) = pq_positions(d, &idx, p, q)?;
    let (p, q) = (idx[a], idx[b]);
    let rest: Vec<usize> = (0..5).filter(|&i| i != a && i != b).map(|i| idx[i]).collect();
    let (e, f, g) = (rest[0], rest[1], rest[2]);
    let c = |x, y, z| SymbolCombination::from(d.at(x, y, z));

    let plus = c(p, q, e) + c(p, q, f) + c(p, q, g) + c(e, f, g);
    let mut minus = SymbolCombination::zero();
    for (s, t) in [(e, f), (e, g), (f, g)] {
        minus = minus + c(p, s, t) + c(q, s, t);
    }
    let two = Rational64::from_integer(2);
    Ok((plus * two - minus) * Rational64::new(1, 6))
}

/// `S_{p,q}` as the `{p,q}` row of `A^-1` applied to `nu`.
pub fn compute_s_matrix(
    d: &MultisetMap,
    ys: &[String],
    p: &str,
    q: &str,
) -> Result<SymbolCombination> {
    let idx = five_indices(d, ys)?;
    let (a, b) = pq_positions(d, &idx, p, q)?;
    let sys = FivePointSystem::new(d, ys)?;
    Ok(matrix_row(&sys.nu, pair_rank(5, a, b)))
}

/// `6 S_{p,q}` as integer counts per symbol id, written into `counts`.
fn six_s_counts(d: &MultisetMap, p: usize, q: usize, rest: [usize; 3], counts: &mut [i64]) {
    counts.iter_mut().for_each(|c| *c = 0);
    let mut add = |t: TripleMultiset, w: i64| {
        for s in t.entries() {
            counts[s.id()] += w;
        }
    };
    let [e, f, g] = rest;
    for x in rest {
        add(d.at(p, q, x), 2);
    }
    add(d.at(e, f, g), 2);
    for (s, t) in [(e, f), (e, g), (f, g)] {
        add(d.at(p, s, t), -1);
        add(d.at(q, s, t), -1);
    }
}

/// Checks (P1) on every 5-subset and pair, (P2) on every triple and (P3) on
/// every 4-subset.
pub fn check_p(d: &MultisetMap) -> Result<Vec<Violation>> {
    let n = d.ground().len();
    if n < 5 {
        return Err(Error::TooFewLeaves { needed: 5, got: n });
    }
    let width = d.image().iter().map(|s| s.id() + 1).max().unwrap_or(0);
    let mut counts = vec![0i64; width];
    let mut out = Vec::new();

    for f in combinations(n, 5) {
        for pq in combinations(5, 2) {
            let (p, q) = (f[pq[0]], f[pq[1]]);
            let rest: Vec<usize> = f.iter().copied().filter(|&i| i != p && i != q).collect();
            six_s_counts(d, p, q, [rest[0], rest[1], rest[2]], &mut counts);
            if counts.iter().any(|&c| c < 0 || c % 6 != 0) {
                let mut w = vec![p, q];
                w.extend(rest);
                out.push(Violation::new(
                    ViolationKind::P1,
                    names(d.ground(), &w),
                    "S for the first two leaves over this 5-set is not valid",
                ));
            }
        }
    }
    for t in combinations(n, 3) {
        if d.at(t[0], t[1], t[2]).distinct_count() == 3 {
            out.push(Violation::new(
                ViolationKind::P2,
                names(d.ground(), &t),
                "value has three distinct symbols",
            ));
        }
    }
    for q in combinations(n, 4) {
        let hit = permutations([q[0], q[1], q[2], q[3]])
            .into_iter()
            .find(|&[x, y, z, u]| p3_fails(d, x, y, z, u));
        if let Some(w) = hit {
            out.push(Violation::new(
                ViolationKind::P3,
                names(d.ground(), &w),
                "d(x,y,z)=d(y,z,u) differs from d(x,y,u)=d(x,z,u) with different m",
            ));
        }
    }
    Ok(out)
}

fn p3_fails(d: &MultisetMap, x: usize, y: usize, z: usize, u: usize) -> bool {
    let a = d.at(x, y, z);
    let b = d.at(x, y, u);
    if a == b || d.at(y, z, u) != a || d.at(x, z, u) != b {
        return false;
    }
    match (a.m(), b.m()) {
        (Some(ma), Some(mb)) => ma != mb,
        _ => false,
    }
}

/// Whether every restriction to five leaves is representable by a rooted
/// labelled tree, each decided by exhaustive search.
pub fn check_ultrametric_by_fives(d: &MultisetMap) -> Result<bool> {
    let n = d.ground().len();
    if n < 5 {
        return Err(Error::TooFewLeaves { needed: 5, got: n });
    }
    for f in combinations(n, 5) {
        let sub = d.restrict_indices(&f);
        if crate::oracle::representable_rooted(&sub)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
