use crate::error::{Error, Result};
use crate::maps::{combinations, TwoWayMap};

use super::{names, permutations, Violation, ViolationKind};

/// Checks (U1) on every triple and (U2) on every 4-subset.
///
/// (U2) is tested against every assignment of the subset to the pattern
/// `D(x,y)=D(y,z)=D(z,u) != D(z,x)=D(x,u)=D(u,y)`; one violation is reported
/// per offending subset.
pub fn check_u(d: &TwoWayMap) -> Result<Vec<Violation>> {
    let n = d.ground().len();
    if n < 3 {
        return Err(Error::TooFewLeaves { needed: 3, got: n });
    }
    let mut out = Vec::new();
    for t in combinations(n, 3) {
        let (a, b, c) = (d.at(t[0], t[1]), d.at(t[0], t[2]), d.at(t[1], t[2]));
        if a != b && a != c && b != c {
            out.push(Violation::new(
                ViolationKind::U1,
                names(d.ground(), &t),
                "three pairwise distinct values",
            ));
        }
    }
    for q in combinations(n, 4) {
        if let Some(w) = u2_witness(d, [q[0], q[1], q[2], q[3]]) {
            out.push(Violation::new(
                ViolationKind::U2,
                names(d.ground(), &w),
                "D(x,y)=D(y,z)=D(z,u) differs from D(z,x)=D(x,u)=D(u,y)",
            ));
        }
    }
    Ok(out)
}

fn u2_witness(d: &TwoWayMap, q: [usize; 4]) -> Option<[usize; 4]> {
    permutations(q).into_iter().find(|&[x, y, z, u]| {
        let p = d.at(x, y);
        let s = d.at(z, x);
        p != s
            && d.at(y, z) == p
            && d.at(z, u) == p
            && d.at(x, u) == s
            && d.at(u, y) == s
    })
}
