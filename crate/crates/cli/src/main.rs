//! `threeway`: build, check and reconstruct three-way symbolic maps.
//!
//! Exit codes: 0 success, 1 not representable or violations found, 2 bad
//! input, 3 checker/reconstructor/oracle disagreement.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use threeway::conditions::check_quartets;
use threeway::io::{parse_map, write_map, write_multiset, write_plain, write_two_way, LoadedMap, ValueKind};
use threeway::newick::{detect_flavor, parse_labelled, write_labelled};
use threeway::oracle::{census, MAX_LEAVES, MAX_SYMBOLS};
use threeway::reconstruct::{decide_tree_map_at, decide_tree_map_every_r, triplets_from_three_way};
use threeway::sample::{perturb, random_labelled_tree};
use threeway::*;

#[derive(Parser)]
#[command(name = "threeway", version, about = "Three-way symbolic maps on labelled phylogenetic trees")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Auto,
    Plain,
    Multiset,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Condition {
    /// Two-way ultrametric conditions.
    U,
    /// Four- and five-point tree-map conditions.
    M,
    /// Five-point multiset conditions.
    P,
    /// Quartet types on every 4-subset.
    Q,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FlavorArg {
    Rooted,
    Unrooted,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Rooted => Flavor::Rooted,
            FlavorArg::Unrooted => Flavor::Unrooted,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the map induced by a labelled tree.
    MapFromTree {
        tree: PathBuf,
        /// For a rooted tree, write the two-way lca map instead.
        #[arg(long)]
        two_way: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the characterizing conditions and list violations.
    Check {
        map: PathBuf,
        /// Condition families; defaults to the natural one for the map.
        #[arg(long, value_enum, value_delimiter = ',')]
        conditions: Vec<Condition>,
        #[arg(long, value_enum, default_value_t = Kind::Auto)]
        kind: Kind,
    },
    /// Decide representability and print the discriminating tree.
    Reconstruct {
        map: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Auto)]
        kind: Kind,
        /// Leaf to root a tree-map at (defaults to the first leaf).
        #[arg(long, conflicts_with = "every_leaf")]
        leaf: Option<String>,
        /// Reconstruct a tree-map from every leaf and report each.
        #[arg(long)]
        every_leaf: bool,
        /// Also write the extracted triplets of a multiset map here.
        #[arg(long)]
        triplets: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Farris transform of an unrooted tree, or projection of a tree-map.
    Farris {
        input: PathBuf,
        #[arg(long)]
        leaf: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count tree shapes and labelled trees.
    Census {
        #[arg(long)]
        leaves: usize,
        #[arg(long)]
        symbols: usize,
        #[arg(long, value_enum, default_value_t = FlavorArg::Rooted)]
        flavor: FlavorArg,
        /// Count every labelling, not only discriminating ones.
        #[arg(long)]
        all_labellings: bool,
    },
    /// Compare the condition checker, the reconstruction and the oracle.
    CrossValidate {
        /// Map to validate; omit to validate random maps.
        map: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Kind::Auto)]
        kind: Kind,
        /// Number of random maps.
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        leaves: usize,
        #[arg(long, default_value_t = 2)]
        symbols: usize,
        #[arg(long, value_enum, default_value_t = FlavorArg::Rooted)]
        flavor: FlavorArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit status of a successful run.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Status {
    Ok,
    Negative,
    Disagreement,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> ExitCode {
        match s {
            Status::Ok => ExitCode::SUCCESS,
            Status::Negative => ExitCode::from(1),
            Status::Disagreement => ExitCode::from(3),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Status> {
    let mut out = Output::new(cli.format);
    let status = match &cli.command {
        Command::MapFromTree { tree, two_way, output } => {
            map_from_tree(tree, *two_way, output.as_deref(), &mut out)?
        }
        Command::Check { map, conditions, kind } => check(map, conditions, *kind, &mut out)?,
        Command::Reconstruct {
            map,
            kind,
            leaf,
            every_leaf,
            triplets,
            output,
        } => reconstruct(map, *kind, leaf.as_deref(), *every_leaf, triplets.as_deref(), output.as_deref(), &mut out)?,
        Command::Farris { input, leaf, output } => farris(input, leaf, output.as_deref(), &mut out)?,
        Command::Census {
            leaves,
            symbols,
            flavor,
            all_labellings,
        } => census_cmd(*leaves, *symbols, (*flavor).into(), *all_labellings, &mut out)?,
        Command::CrossValidate {
            map,
            kind,
            count,
            leaves,
            symbols,
            flavor,
            seed,
        } => match map {
            Some(path) => cross_validate_file(path, *kind, &mut out)?,
            None => cross_validate_random(*count, *leaves, *symbols, (*flavor).into(), *seed, &mut out)?,
        },
    };
    out.flush()?;
    Ok(status)
}

/// Collects text or a JSON document and prints it once at the end.
struct Output {
    format: Format,
    text: String,
    json: serde_json::Value,
}

impl Output {
    fn new(format: Format) -> Self {
        Output {
            format,
            text: String::new(),
            json: serde_json::Value::Null,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn set_json(&mut self, v: serde_json::Value) {
        self.json = v;
    }

    fn flush(&self) -> anyhow::Result<()> {
        let mut stdout = std::io::stdout().lock();
        match self.format {
            Format::Text => stdout.write_all(self.text.as_bytes())?,
            Format::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&self.json)?)?,
        }
        Ok(())
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_artifact(path: Option<&Path>, content: &str, out: &mut Output) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            out.text.push_str(content);
            Ok(())
        }
    }
}

fn value_kind(k: Kind) -> ValueKind {
    match k {
        Kind::Auto => ValueKind::Auto,
        Kind::Plain => ValueKind::Plain,
        Kind::Multiset => ValueKind::Multiset,
    }
}

fn load_map(path: &Path, kind: Kind, st: &mut SymbolTable) -> anyhow::Result<LoadedMap> {
    let text = read(path)?;
    parse_map(&text, st, value_kind(kind)).with_context(|| format!("in {}", path.display()))
}

fn map_from_tree(path: &Path, two_way: bool, output: Option<&Path>, out: &mut Output) -> anyhow::Result<Status> {
    let mut st = SymbolTable::new();
    let text = read(path)?;
    let t = parse_labelled(&text, &mut st).with_context(|| format!("in {}", path.display()))?;
    let map = match (t.flavor(), two_way) {
        (_, true) => LoadedMap::TwoWay(two_way_from_tree(&t)?),
        (Flavor::Unrooted, false) => LoadedMap::Plain(three_way_from_unrooted(&t)?),
        (Flavor::Rooted, false) => LoadedMap::Multiset(three_way_from_rooted(&t)?),
    };
    let tsv = write_map(&map, &st);
    out.set_json(json!({
        "kind": map.kind_name(),
        "leaves": map.ground().names(),
        "map": if output.is_none() { Some(tsv.clone()) } else { None },
    }));
    write_artifact(output, &tsv, out)?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct ViolationReport {
    kind: String,
    witness: Vec<String>,
    detail: String,
}

fn check(path: &Path, conditions: &[Condition], kind: Kind, out: &mut Output) -> anyhow::Result<Status> {
    let mut st = SymbolTable::new();
    let map = load_map(path, kind, &mut st)?;
    let conditions: Vec<Condition> = if conditions.is_empty() {
        vec![match &map {
            LoadedMap::TwoWay(_) => Condition::U,
            LoadedMap::Plain(_) => Condition::M,
            LoadedMap::Multiset(d) if d.ground().len() >= 5 => Condition::P,
            LoadedMap::Multiset(_) => Condition::Q,
        }]
    } else {
        conditions.to_vec()
    };
    let mut violations = Vec::new();
    for c in &conditions {
        let found = match (c, &map) {
            (Condition::U, LoadedMap::TwoWay(d)) => check_u(d)?,
            (Condition::M, LoadedMap::Plain(d)) => check_m(d)?,
            (Condition::P, LoadedMap::Multiset(d)) => check_p(d)?,
            (Condition::Q, LoadedMap::Multiset(d)) => check_quartets(d)?,
            (c, m) => bail!(
                "condition {} does not apply to a {} map",
                c.to_possible_value().unwrap().get_name(),
                m.kind_name()
            ),
        };
        violations.extend(found);
    }
    for v in &violations {
        out.line(v.to_string());
    }
    let clean = violations.is_empty();
    out.line(format!(
        "# {} violation(s); map is {}",
        violations.len(),
        if clean { "clean" } else { "not representable" }
    ));
    let reports: Vec<ViolationReport> = violations
        .iter()
        .map(|v| ViolationReport {
            kind: v.kind.to_string(),
            witness: v.witness.clone(),
            detail: v.detail.clone(),
        })
        .collect();
    out.set_json(json!({ "kind": map.kind_name(), "clean": clean, "violations": reports }));
    Ok(if clean { Status::Ok } else { Status::Negative })
}

fn outcome_json(o: &ReconstructionOutcome, st: &SymbolTable) -> serde_json::Value {
    json!({
        "verdict": o.verdict,
        "stage": o.failure_stage,
        "detail": o.detail,
        "unique": o.tree.as_ref().map(|_| o.unique),
        "tree": o.tree.as_ref().map(|t| write_labelled(t, st)),
    })
}

/// Reconstruction for whatever kind of map was loaded. A two-way map is
/// lifted to the multiset map of the same tree.
fn decide(map: &LoadedMap, leaf: Option<&str>) -> anyhow::Result<ReconstructionOutcome> {
    Ok(match map {
        LoadedMap::Plain(d) => match leaf {
            Some(r) => decide_tree_map_at(d, r)?,
            None => decide_tree_map(d)?,
        },
        LoadedMap::Multiset(d) => decide_ultrametric(d)?,
        LoadedMap::TwoWay(d) => decide_ultrametric(&lift_two_way(d))?,
    })
}

fn reconstruct(
    path: &Path,
    kind: Kind,
    leaf: Option<&str>,
    every_leaf: bool,
    triplets: Option<&Path>,
    output: Option<&Path>,
    out: &mut Output,
) -> anyhow::Result<Status> {
    let mut st = SymbolTable::new();
    let map = load_map(path, kind, &mut st)?;
    if (leaf.is_some() || every_leaf) && !matches!(map, LoadedMap::Plain(_)) {
        bail!("--leaf and --every-leaf apply to tree-maps only");
    }
    if let Some(tp) = triplets {
        let LoadedMap::Multiset(d) = &map else {
            bail!("--triplets applies to multiset maps only");
        };
        fs::write(tp, triplets_from_three_way(d)?.to_string())
            .with_context(|| format!("writing {}", tp.display()))?;
    }
    if every_leaf {
        let LoadedMap::Plain(d) = &map else { unreachable!() };
        let all = decide_tree_map_every_r(d)?;
        let mut reports = Vec::new();
        let mut representable = true;
        let mut text = String::new();
        for (r, o) in &all {
            representable &= o.is_representable();
            text.push_str(&format!("# leaf: {r}\n{}", o.to_text(&st)));
            reports.push(json!({ "leaf": r, "outcome": outcome_json(o, &st) }));
        }
        let agree = all.windows(2).all(|w| match (&w[0].1.tree, &w[1].1.tree) {
            (Some(a), Some(b)) => a.labelled_isomorphic(b),
            (None, None) => true,
            _ => false,
        });
        text.push_str(&format!("# leaves agree: {agree}\n"));
        out.set_json(json!({ "outcomes": reports, "agree": agree }));
        write_artifact(output, &text, out)?;
        return Ok(match (agree, representable) {
            (false, _) => Status::Disagreement,
            (true, true) => Status::Ok,
            (true, false) => Status::Negative,
        });
    }
    let o = decide(&map, leaf)?;
    out.set_json(outcome_json(&o, &st));
    write_artifact(output, &o.to_text(&st), out)?;
    Ok(if o.is_representable() { Status::Ok } else { Status::Negative })
}

fn looks_like_tree(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with('(') || l == "rooted" || l == "unrooted")
}

fn farris(path: &Path, leaf: &str, output: Option<&Path>, out: &mut Output) -> anyhow::Result<Status> {
    let mut st = SymbolTable::new();
    let text = read(path)?;
    let artifact = if looks_like_tree(&text) {
        if detect_flavor(&text)? != Flavor::Unrooted {
            bail!("the Farris transform needs an unrooted tree");
        }
        let t = parse_labelled(&text, &mut st).with_context(|| format!("in {}", path.display()))?;
        let res = farris_transform(&t, leaf)?;
        format!("{}\n", write_labelled(&res.rooted, &st))
    } else {
        match parse_map(&text, &mut st, ValueKind::Plain).with_context(|| format!("in {}", path.display()))? {
            LoadedMap::Plain(d) => write_two_way(&farris_project(&d, leaf)?, &st),
            other => bail!("expected a tree-map, found a {} map", other.kind_name()),
        }
    };
    out.set_json(json!({ "removed_leaf": leaf, "result": artifact }));
    write_artifact(output, &artifact, out)?;
    Ok(Status::Ok)
}

fn census_cmd(leaves: usize, symbols: usize, flavor: Flavor, all: bool, out: &mut Output) -> anyhow::Result<Status> {
    let mut st = SymbolTable::new();
    let syms: Vec<Symbol> = (0..symbols).map(|i| st.intern(&symbol_name(i))).collect();
    let names: Vec<String> = (1..=leaves).map(|i| i.to_string()).collect();
    let mut spec = EnumerationSpec::new(names, syms, flavor);
    spec.discriminating_only = !all;
    let c = census(&spec)?;
    out.line("leaves\tsymbols\tflavor\tshapes\tlabelled_trees");
    out.line(format!(
        "{leaves}\t{symbols}\t{}\t{}\t{}",
        flavor_name(flavor),
        c.shapes,
        c.labelled_trees
    ));
    out.set_json(json!({
        "leaves": leaves,
        "symbols": symbols,
        "flavor": flavor_name(flavor),
        "discriminating_only": !all,
        "census": c,
    }));
    Ok(Status::Ok)
}

fn symbol_name(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("S{i}")
    }
}

fn flavor_name(f: Flavor) -> &'static str {
    match f {
        Flavor::Rooted => "rooted",
        Flavor::Unrooted => "unrooted",
    }
}

#[derive(Serialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
enum OracleVerdict {
    Representable,
    NotRepresentable,
    Skipped,
}

#[derive(Serialize)]
struct Verdicts {
    checker: bool,
    reconstruction: bool,
    oracle: OracleVerdict,
}

impl Verdicts {
    fn agree(&self) -> bool {
        let oracle_ok = match self.oracle {
            OracleVerdict::Representable => self.checker,
            OracleVerdict::NotRepresentable => !self.checker,
            OracleVerdict::Skipped => true,
        };
        self.checker == self.reconstruction && oracle_ok
    }
}

fn within_bounds(n: usize, image: usize) -> bool {
    n <= MAX_LEAVES && image <= MAX_SYMBOLS
}

fn oracle_verdict(found: Option<LabelledTree>) -> OracleVerdict {
    if found.is_some() {
        OracleVerdict::Representable
    } else {
        OracleVerdict::NotRepresentable
    }
}

fn verdicts(map: &LoadedMap) -> anyhow::Result<Verdicts> {
    let n = map.ground().len();
    let (checker, oracle) = match map {
        LoadedMap::TwoWay(d) => {
            let lifted = lift_two_way(d);
            let oracle = if within_bounds(n, d.image().len()) {
                oracle_verdict(representable_rooted(&lifted)?)
            } else {
                OracleVerdict::Skipped
            };
            (check_u(d)?.is_empty(), oracle)
        }
        LoadedMap::Plain(d) => {
            let oracle = if within_bounds(n, d.image().len()) {
                oracle_verdict(representable_unrooted(d)?)
            } else {
                OracleVerdict::Skipped
            };
            (check_m(d)?.is_empty(), oracle)
        }
        LoadedMap::Multiset(d) => {
            let oracle = if within_bounds(n, d.image().len()) {
                oracle_verdict(representable_rooted(d)?)
            } else {
                OracleVerdict::Skipped
            };
            let checker = if n >= 5 { check_p(d)? } else { check_quartets(d)? };
            (checker.is_empty(), oracle)
        }
    };
    let reconstruction = decide(map, None)?.is_representable();
    Ok(Verdicts {
        checker,
        reconstruction,
        oracle,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "representable"
    } else {
        "not-representable"
    }
}

fn oracle_name(v: OracleVerdict) -> &'static str {
    match v {
        OracleVerdict::Representable => "representable",
        OracleVerdict::NotRepresentable => "not-representable",
        OracleVerdict::Skipped => "skipped",
    }
}

fn cross_validate_file(path: &Path, kind: Kind, out: &mut Output) -> anyhow::Result<Status> {
    let mut st = SymbolTable::new();
    let map = load_map(path, kind, &mut st)?;
    let v = verdicts(&map)?;
    let agree = v.agree();
    out.line(format!("checker\t{}", yes_no(v.checker)));
    out.line(format!("reconstruction\t{}", yes_no(v.reconstruction)));
    out.line(format!("oracle\t{}", oracle_name(v.oracle)));
    out.line(format!("agree\t{agree}"));
    out.set_json(json!({ "kind": map.kind_name(), "verdicts": v, "agree": agree }));
    Ok(if agree { Status::Ok } else { Status::Disagreement })
}

fn cross_validate_random(
    count: usize,
    leaves: usize,
    symbols: usize,
    flavor: Flavor,
    seed: u64,
    out: &mut Output,
) -> anyhow::Result<Status> {
    let min = if flavor == Flavor::Rooted { 3 } else { 4 };
    if leaves < min {
        bail!("need at least {min} leaves");
    }
    if symbols < 2 {
        bail!("need at least 2 symbols");
    }
    let mut st = SymbolTable::new();
    let syms: Vec<Symbol> = (0..symbols).map(|i| st.intern(&symbol_name(i))).collect();
    let names: Vec<String> = (1..=leaves).map(|i| i.to_string()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut representable, mut disagreements) = (0usize, Vec::new());
    for i in 0..count {
        let k = rng.gen_range(1..=symbols);
        let t = random_labelled_tree(&mut rng, &names, &syms[..k], flavor);
        let changes = rng.gen_range(0..=2);
        let map = match flavor {
            Flavor::Rooted => {
                let d = three_way_from_rooted(&t)?;
                LoadedMap::Multiset(perturb(&mut rng, &d, &syms[..2], changes))
            }
            Flavor::Unrooted => {
                let d = three_way_from_unrooted(&t)?;
                let mut values = d.values().to_vec();
                for _ in 0..changes {
                    let j = rng.gen_range(0..values.len());
                    values[j] = syms[rng.gen_range(0..symbols)];
                }
                LoadedMap::Plain(PlainMap::from_values(d.ground().clone(), values)?)
            }
        };
        let v = verdicts(&map)?;
        representable += v.checker as usize;
        if !v.agree() {
            disagreements.push(json!({ "index": i, "map": write_map(&map, &st), "verdicts": v }));
            out.line(format!("# disagreement on map {i}"));
            out.line(match &map {
                LoadedMap::Multiset(d) => write_multiset(d, &st),
                LoadedMap::Plain(d) => write_plain(d, &st),
                LoadedMap::TwoWay(d) => write_two_way(d, &st),
            });
        }
    }
    out.line(format!(
        "maps\t{count}\nrepresentable\t{representable}\ndisagreements\t{}\nseed\t{seed}",
        disagreements.len()
    ));
    out.set_json(json!({
        "maps": count,
        "representable": representable,
        "seed": seed,
        "disagreements": disagreements,
    }));
    Ok(if disagreements.is_empty() { Status::Ok } else { Status::Disagreement })
}
