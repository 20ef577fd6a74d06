//! Whitespace-separated text tables for two- and three-way maps.
//!
//! ```text
//! x  y  z  value
//! 1  2  3  2A+B
//! 1  2  4  3A
//! ```
//!
//! The header line is optional; blank lines and `#` comments are skipped.
//! The number of columns fixes the arity. Every subset of the leaves
//! mentioned must appear exactly once (repeats with the same value are
//! tolerated). The ground set is the set of leaves mentioned, in natural
//! order. Three-way values are read as multisets when every value parses
//! as one (`2A+B`, `A+A+B`, `3A`), and as plain symbols otherwise.

use std::collections::HashMap;

use crate::error::{parse_err, Error, Result};
use crate::maps::{combinations, GroundSet, MultisetMap, PlainMap, TwoWayMap};
use crate::symbols::SymbolTable;
use crate::tree::sort_natural;

/// How to read the values of a three-way table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValueKind {
    #[default]
    Auto,
    Plain,
    Multiset,
}

#[derive(Debug, Clone)]
pub enum LoadedMap {
    TwoWay(TwoWayMap),
    Plain(PlainMap),
    Multiset(MultisetMap),
}

impl LoadedMap {
    pub fn kind_name(&self) -> &'static str {
        match self {
            LoadedMap::TwoWay(_) => "two-way",
            LoadedMap::Plain(_) => "plain",
            LoadedMap::Multiset(_) => "multiset",
        }
    }

    pub fn ground(&self) -> &GroundSet {
        match self {
            LoadedMap::TwoWay(d) => d.ground(),
            LoadedMap::Plain(d) => d.ground(),
            LoadedMap::Multiset(d) => d.ground(),
        }
    }
}

struct Table<'a> {
    arity: usize,
    ground: GroundSet,
    /// Value text per subset rank, with its line number.
    cells: Vec<(&'a str, usize)>,
}

fn read_table(text: &str) -> Result<Table<'_>> {
    let mut arity = None;
    let mut rows: Vec<(Vec<&str>, &str, usize)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if rows.is_empty() && arity.is_none() && tokens.last() == Some(&"value") {
            arity = Some(tokens.len() - 1);
            continue;
        }
        let k = *arity.get_or_insert(tokens.len().saturating_sub(1));
        if !(2..=3).contains(&k) {
            return Err(parse_err(line_no, "expected 3 or 4 columns"));
        }
        if tokens.len() != k + 1 {
            return Err(parse_err(
                line_no,
                format!("expected {} columns, found {}", k + 1, tokens.len()),
            ));
        }
        rows.push((tokens[..k].to_vec(), tokens[k], line_no));
    }
    let arity = arity.ok_or_else(|| parse_err(0, "empty map"))?;
    if rows.is_empty() {
        return Err(parse_err(0, "empty map"));
    }
    let mut names: Vec<String> = rows
        .iter()
        .flat_map(|(leaves, _, _)| leaves.iter().map(|s| s.to_string()))
        .collect();
    sort_natural(&mut names);
    names.dedup();
    let ground = GroundSet::new(names)?;
    let n = ground.len();
    let mut by_key: HashMap<Vec<usize>, (&str, usize)> = HashMap::new();
    for (leaves, value, line_no) in rows {
        let mut key: Vec<usize> = leaves
            .iter()
            .map(|s| ground.index_of(s).expect("collected above"))
            .collect();
        key.sort_unstable();
        if key.windows(2).any(|w| w[0] == w[1]) {
            return Err(parse_err(line_no, "repeated leaf in a row"));
        }
        match by_key.get(&key) {
            Some(&(prev, _)) if prev != value => {
                return Err(Error::ConflictingEntry(leaves.join(",")));
            }
            Some(_) => {}
            None => {
                by_key.insert(key, (value, line_no));
            }
        }
    }
    let mut cells = Vec::with_capacity(by_key.len());
    for key in combinations(n, arity) {
        match by_key.get(&key) {
            Some(&c) => cells.push(c),
            None => {
                let missing: Vec<&str> = key.iter().map(|&i| ground.name(i)).collect();
                return Err(Error::IncompleteMap(missing.join(",")));
            }
        }
    }
    Ok(Table {
        arity,
        ground,
        cells,
    })
}

/// Reads a two- or three-way map, interning symbols into `table`.
pub fn parse_map(text: &str, table: &mut SymbolTable, kind: ValueKind) -> Result<LoadedMap> {
    let t = read_table(text)?;
    if t.arity == 2 {
        let mut values = Vec::with_capacity(t.cells.len());
        for (v, line) in &t.cells {
            values.push(table.parse_symbol(v).map_err(|e| relocate(e, *line))?);
        }
        return Ok(LoadedMap::TwoWay(TwoWayMap::from_values(t.ground, values)?));
    }
    let multiset = match kind {
        ValueKind::Multiset => true,
        ValueKind::Plain => false,
        ValueKind::Auto => {
            let mut scratch = table.clone();
            t.cells.iter().all(|(v, _)| scratch.parse_multiset(v).is_ok())
        }
    };
    if multiset {
        let mut values = Vec::with_capacity(t.cells.len());
        for (v, line) in &t.cells {
            values.push(table.parse_multiset(v).map_err(|e| relocate(e, *line))?);
        }
        Ok(LoadedMap::Multiset(MultisetMap::from_values(t.ground, values)?))
    } else {
        let mut values = Vec::with_capacity(t.cells.len());
        for (v, line) in &t.cells {
            values.push(table.parse_symbol(v).map_err(|e| relocate(e, *line))?);
        }
        Ok(LoadedMap::Plain(PlainMap::from_values(t.ground, values)?))
    }
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { message, .. } => Error::Parse { line, message },
        other => other,
    }
}

pub fn parse_multiset_map(text: &str, table: &mut SymbolTable) -> Result<MultisetMap> {
    match parse_map(text, table, ValueKind::Multiset)? {
        LoadedMap::Multiset(d) => Ok(d),
        _ => Err(parse_err(0, "expected a three-way map")),
    }
}

pub fn parse_plain_map(text: &str, table: &mut SymbolTable) -> Result<PlainMap> {
    match parse_map(text, table, ValueKind::Plain)? {
        LoadedMap::Plain(d) => Ok(d),
        _ => Err(parse_err(0, "expected a three-way map")),
    }
}

pub fn parse_two_way_map(text: &str, table: &mut SymbolTable) -> Result<TwoWayMap> {
    match parse_map(text, table, ValueKind::Auto)? {
        LoadedMap::TwoWay(d) => Ok(d),
        _ => Err(parse_err(0, "expected a two-way map")),
    }
}

pub fn write_two_way(d: &TwoWayMap, table: &SymbolTable) -> String {
    let mut out = String::from("x\ty\tvalue\n");
    for (x, y, v) in d.entries() {
        out.push_str(&format!("{x}\t{y}\t{}\n", table.name(v)));
    }
    out
}

pub fn write_plain(d: &PlainMap, table: &SymbolTable) -> String {
    let mut out = String::from("x\ty\tz\tvalue\n");
    for ([x, y, z], v) in d.entries() {
        out.push_str(&format!("{x}\t{y}\t{z}\t{}\n", table.name(v)));
    }
    out
}

pub fn write_multiset(d: &MultisetMap, table: &SymbolTable) -> String {
    let mut out = String::from("x\ty\tz\tvalue\n");
    for ([x, y, z], v) in d.entries() {
        out.push_str(&format!("{x}\t{y}\t{z}\t{}\n", table.display_multiset(&v)));
    }
    out
}

pub fn write_map(d: &LoadedMap, table: &SymbolTable) -> String {
    match d {
        LoadedMap::TwoWay(d) => write_two_way(d, table),
        LoadedMap::Plain(d) => write_plain(d, table),
        LoadedMap::Multiset(d) => write_multiset(d, table),
    }
}
