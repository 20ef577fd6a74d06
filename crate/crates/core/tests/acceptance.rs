//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use threeway::conditions::{
    compute_s_matrix, quartet_pattern_map, FivePointSystem, A, A_INV_TIMES_6,
};
use threeway::fixtures;
use threeway::oracle::enumerate_labelled_trees;
use threeway::reconstruct::triplets_from_three_way;
use threeway::sample::{perturb, random_labelled_tree, random_multiset_map};
use threeway::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn leaves(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    ensure_with(cond, || msg.into())
}

fn ensure_with(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:?}, limit {limit:?}"))
}

fn quartet_values() -> Outcome {
    let start = Instant::now();
    let mut st = SymbolTable::with_names(["A", "B", "C"]);
    let syms = [st.intern("A"), st.intern("B"), st.intern("C")];
    let mut cells = 0;
    for (i, t) in fixtures::quartet_trees(&mut st).iter().enumerate() {
        let got = three_way_from_rooted(t).map_err(|e| e.to_string())?;
        let want = quartet_pattern_map(i + 1, syms);
        for (g, w) in got.values().iter().zip(want.values()) {
            ensure(g == w, format!("pattern {} differs", i + 1))?;
            cells += 1;
        }
    }
    ensure(cells == 28, format!("{cells} cells"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("{cells} cells match"))
}

fn sample_values() -> Outcome {
    let mut st = SymbolTable::new();
    let u = three_way_from_unrooted(&fixtures::sample_unrooted(&mut st)).map_err(|e| e.to_string())?;
    let r = three_way_from_rooted(&fixtures::sample_rooted(&mut st)).map_err(|e| e.to_string())?;
    let a = st.intern("A");
    let b = st.intern("B");
    ensure(u.get("1", "3", "5").unwrap() == a, "unrooted d(1,3,5) != A")?;
    ensure(
        r.get("1", "2", "5").unwrap() == TripleMultiset::new(a, a, b),
        "rooted d(1,2,5) != {A,A,B}",
    )?;
    Ok("d(1,3,5)=A, d(1,2,5)=2A+B".into())
}

fn four_consistent_separation() -> Outcome {
    let start = Instant::now();
    let mut st = SymbolTable::new();
    let d = fixtures::four_consistent_map(&mut st);
    let names = d.ground().names().to_vec();
    for skip in 0..5 {
        let ys: Vec<String> = names.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, s)| s.clone()).collect();
        let q = classify_quartet(&d, &ys).map_err(|e| e.to_string())?;
        ensure(q.index.is_some(), format!("4-subset without {} unmatched", names[skip]))?;
    }
    let violations = check_p(&d).map_err(|e| e.to_string())?;
    ensure(!violations.is_empty(), "five-point check passed")?;
    let outcome = decide_ultrametric(&d).map_err(|e| e.to_string())?;
    ensure(!outcome.is_representable(), "reconstruction accepted")?;
    let oracle = representable_rooted(&d).map_err(|e| e.to_string())?;
    ensure(oracle.is_none(), "oracle found a tree")?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("5/5 quartets typed; {} violations; reconstruction and oracle reject", violations.len()))
}

fn build_caveat() -> Outcome {
    let mut st = SymbolTable::new();
    let d = fixtures::build_caveat_map(&mut st);
    let ts = triplets_from_three_way(&d).map_err(|e| e.to_string())?;
    let want: BTreeSet<Triplet> = ["34|1", "34|2", "35|1", "35|2", "45|1", "45|2"]
        .iter()
        .map(|s| {
            let c: Vec<String> = s.chars().filter(|c| c.is_ascii_digit()).map(String::from).collect();
            Triplet::new(&c[0], &c[1], &c[2])
        })
        .collect();
    ensure(ts.triplets() == &want, format!("triplets {ts}"))?;
    let built = build(&ts, d.ground().names()).map_err(|e| e.to_string())?;
    ensure(built.is_some(), "triplets incompatible")?;
    let outcome = decide_ultrametric(&d).map_err(|e| e.to_string())?;
    ensure(outcome.verdict == Verdict::NotRepresentable, "accepted")?;
    ensure(
        outcome.failure_stage == Some(FailureStage::LabellingVerification),
        format!("failed at {:?}", outcome.failure_stage),
    )?;
    Ok("6 triplets; tree built; labelling rejected".into())
}

fn matrix_identity() -> Outcome {
    for i in 0..10 {
        for j in 0..10 {
            let s: Rational64 = (0..10)
                .map(|k| Rational64::from_integer(A[i][k]) * Rational64::new(A_INV_TIMES_6[k][j], 6))
                .sum();
            ensure(s == Rational64::from_integer((i == j) as i64), format!("entry ({i},{j}) = {s}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut st = SymbolTable::new();
    let syms = [st.intern("A"), st.intern("B"), st.intern("C")];
    let names = leaves(5);
    let ground = GroundSet::new(names.clone()).unwrap();
    let mut compared = 0;
    for _ in 0..1000 {
        let d = random_multiset_map(&mut rng, ground.clone(), &syms, false);
        for p in 0..5 {
            for q in p + 1..5 {
                let f = compute_s(&d, &names, &names[p], &names[q]).map_err(|e| e.to_string())?;
                let m = compute_s_matrix(&d, &names, &names[p], &names[q]).map_err(|e| e.to_string())?;
                ensure(f == m, format!("routes differ at ({p},{q})"))?;
                compared += 1;
            }
        }
        let sys = FivePointSystem::new(&d, &names).map_err(|e| e.to_string())?;
        ensure(sys.solve().len() == 10, "system size")?;
    }
    Ok(format!("identity exact; {compared} combinations agree"))
}

fn rooted_round_trip() -> Outcome {
    let mut st = SymbolTable::new();
    let syms = vec![st.intern("A"), st.intern("B")];
    let spec = EnumerationSpec::new(leaves(5), syms, Flavor::Rooted);
    let mut count = 0;
    for t in enumerate_labelled_trees(&spec).map_err(|e| e.to_string())? {
        count += 1;
        let d = three_way_from_rooted(&t).map_err(|e| e.to_string())?;
        let v = check_p(&d).map_err(|e| e.to_string())?;
        ensure_with(v.is_empty(), || format!("violation {} on {}", v[0], newick::write_labelled(&t, &st)))?;
        let outcome = decide_ultrametric(&d).map_err(|e| e.to_string())?;
        let back = outcome.tree.ok_or_else(|| format!("rejected {}", newick::write_labelled(&t, &st)))?;
        ensure(back.labelled_isomorphic(&t), format!("wrong tree for {}", newick::write_labelled(&t, &st)))?;
    }
    Ok(format!("{count} trees"))
}

fn unrooted_round_trip() -> Outcome {
    let mut st = SymbolTable::new();
    let syms = vec![st.intern("A"), st.intern("B")];
    let spec = EnumerationSpec::new(leaves(5), syms, Flavor::Unrooted);
    let mut count = 0;
    for t in enumerate_labelled_trees(&spec).map_err(|e| e.to_string())? {
        count += 1;
        let text = newick::write_labelled(&t, &st).replace('\n', " ");
        let d = three_way_from_unrooted(&t).map_err(|e| e.to_string())?;
        let v = check_m(&d).map_err(|e| e.to_string())?;
        ensure_with(v.is_empty(), || format!("violation {} on {text}", v[0]))?;
        for (r, outcome) in reconstruct::decide_tree_map_every_r(&d).map_err(|e| e.to_string())? {
            let back = outcome.tree.ok_or_else(|| format!("rejected {text} at r={r}"))?;
            ensure(back.labelled_isomorphic(&t), format!("wrong tree for {text} at r={r}"))?;
        }
    }
    Ok(format!("{count} trees, every r"))
}

fn checker_oracle_agreement() -> Outcome {
    let mut st = SymbolTable::new();
    let (a, b, c) = (st.intern("A"), st.intern("B"), st.intern("C"));
    let alphabet = [
        TripleMultiset::uniform(a),
        TripleMultiset::new(a, a, b),
        TripleMultiset::new(a, b, b),
        TripleMultiset::uniform(b),
    ];
    let mut disagreements = 0;
    let mut checked = 0;

    // every multiset map on four leaves over the two-symbol alphabet
    let g4 = GroundSet::new(leaves(4)).unwrap();
    for code in 0..256usize {
        let d = MultisetMap::from_values(g4.clone(), (0..4).map(|i| alphabet[(code >> (2 * i)) & 3]).collect())
            .unwrap();
        let checker = check_quartets(&d).map_err(|e| e.to_string())?.is_empty();
        let oracle = representable_rooted(&d).map_err(|e| e.to_string())?.is_some();
        disagreements += (checker != oracle) as usize;
        checked += 1;
    }
    // every plain map on four leaves over three symbols
    for code in 0..81usize {
        let d = PlainMap::from_values(
            g4.clone(),
            (0..4).map(|i| [a, b, c][(code / 3usize.pow(i)) % 3]).collect(),
        )
        .unwrap();
        let checker = check_m(&d).map_err(|e| e.to_string())?.is_empty();
        let oracle = representable_unrooted(&d).map_err(|e| e.to_string())?.is_some();
        disagreements += (checker != oracle) as usize;
        checked += 1;
    }

    // random maps on five leaves: tree-induced, perturbed, and unstructured
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let names = leaves(5);
    let g5 = GroundSet::new(names.clone()).unwrap();
    let syms = [a, b, c];
    let mut positives = 0;
    for i in 0..10_000 {
        let kind = i % 4;
        if kind < 2 {
            let k = rng.gen_range(1..=3);
            let t = random_labelled_tree(&mut rng, &names, &syms[..k], Flavor::Rooted);
            let mut d = three_way_from_rooted(&t).unwrap();
            if kind == 1 {
                d = perturb(&mut rng, &d, &syms[..2], 1);
            }
            let checker = check_p(&d).map_err(|e| e.to_string())?.is_empty();
            let oracle = representable_rooted(&d).map_err(|e| e.to_string())?.is_some();
            disagreements += (checker != oracle) as usize;
            positives += oracle as usize;
        } else if kind == 2 {
            let d = random_multiset_map(&mut rng, g5.clone(), &syms[..2], true);
            let checker = check_p(&d).map_err(|e| e.to_string())?.is_empty();
            let oracle = representable_rooted(&d).map_err(|e| e.to_string())?.is_some();
            disagreements += (checker != oracle) as usize;
            positives += oracle as usize;
        } else {
            let k = rng.gen_range(1..=3);
            let t = random_labelled_tree(&mut rng, &names, &syms[..k], Flavor::Unrooted);
            let mut d = three_way_from_unrooted(&t).unwrap();
            if rng.gen_bool(0.5) {
                let i = rng.gen_range(0..10);
                let mut values = d.values().to_vec();
                values[i] = syms[rng.gen_range(0..3)];
                d = PlainMap::from_values(g5.clone(), values).unwrap();
            }
            let checker = check_m(&d).map_err(|e| e.to_string())?.is_empty();
            let oracle = representable_unrooted(&d).map_err(|e| e.to_string())?.is_some();
            disagreements += (checker != oracle) as usize;
            positives += oracle as usize;
        }
        checked += 1;
    }
    ensure(disagreements == 0, format!("{disagreements} disagreements out of {checked}"))?;
    Ok(format!("{checked} maps, 0 disagreements ({positives} representable among the random ones)"))
}

fn converse_failure() -> Outcome {
    let mut st = SymbolTable::new();
    let d = fixtures::leaf_one_map(&mut st);
    let v = check_m(&d).map_err(|e| e.to_string())?;
    let want: BTreeSet<&str> = ["1", "2", "3", "4"].into();
    ensure(
        v.iter().any(|v| v.kind == ViolationKind::M1 && v.witness_set() == want),
        "no M1 violation on {1,2,3,4}",
    )?;
    for r in d.ground().names() {
        let p = farris_project(&d, r).map_err(|e| e.to_string())?;
        let u = check_u(&p).map_err(|e| e.to_string())?;
        ensure_with(u.is_empty(), || format!("projection at {r} violates {}", u[0]))?;
    }
    Ok("M1 at {1,2,3,4}; all 5 projections are ultrametric".into())
}

fn set_valued_non_uniqueness() -> Outcome {
    let mut st = SymbolTable::new();
    let [s, t] = fixtures::set_valued_twins(&mut st);
    let ds = three_way_from_rooted(&s).map_err(|e| e.to_string())?;
    let dt = three_way_from_rooted(&t).map_err(|e| e.to_string())?;
    ensure(ds.set_valued() == dt.set_valued(), "set-valued maps differ")?;
    ensure(ds != dt, "multiset maps agree")?;
    ensure(!s.labelled_isomorphic(&t), "trees are isomorphic")?;
    Ok("equal sets, different multisets, distinct trees".into())
}

fn independence() -> Outcome {
    let mut st = SymbolTable::new();
    let cases = [
        ("constant", fixtures::constant_map(&mut st), ViolationKind::P1),
        ("p2", fixtures::p2_failure_map(&mut st), ViolationKind::P2),
        ("p3", fixtures::p3_failure_map(&mut st), ViolationKind::P3),
    ];
    for (name, d, kind) in cases {
        let kinds: BTreeSet<ViolationKind> = check_p(&d).map_err(|e| e.to_string())?.iter().map(|v| v.kind).collect();
        ensure(kinds == BTreeSet::from([kind]), format!("{name}: violated {kinds:?}"))?;
        ensure(
            representable_rooted(&d).map_err(|e| e.to_string())?.is_none(),
            format!("{name}: oracle found a tree"),
        )?;
    }
    Ok("each map fails exactly one condition; oracle rejects all three".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("quartet tree values", quartet_values),
        ("sample tree spot values", sample_values),
        ("4-consistent map is not ultrametric", four_consistent_separation),
        ("compatible triplets, unlabellable tree", build_caveat),
        ("five-point matrix identity and routes", matrix_identity),
        ("exhaustive rooted round trip", rooted_round_trip),
        ("exhaustive unrooted round trip", unrooted_round_trip),
        ("checkers agree with oracle", checker_oracle_agreement),
        ("projections ultrametric, map not a tree-map", converse_failure),
        ("set-valued maps do not determine trees", set_valued_non_uniqueness),
        ("five-point conditions are independent", independence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS [{}] {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
