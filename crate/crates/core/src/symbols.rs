//! Symbols, size-3 multisets of symbols, and formal rational combinations.
//!
//! A [`Symbol`] is an interned id handed out by a [`SymbolTable`]; all trees
//! and maps that are compared against each other must share one table.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{parse_err, Result};

/// An interned symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn id(self) -> usize {
        self.0 as usize
    }
}

/// Bijection between symbol display names and ids.
#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    names: Vec<String>,
    ids: HashMap<String, Symbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// A table pre-populated with the given names, in order.
    pub fn with_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut table = Self::new();
        for name in names {
            table.intern(name.as_ref());
        }
        table
    }

    pub fn intern(&mut self, name: &str) -> Symbol {
        if let Some(&sym) = self.ids.get(name) {
            return sym;
        }
        let sym = Symbol(self.names.len() as u32);
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), sym);
        sym
    }

    pub fn get(&self, name: &str) -> Option<Symbol> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, sym: Symbol) -> &str {
        &self.names[sym.id()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len() as u32).map(Symbol)
    }

    /// Parses a single symbol name, interning it.
    pub fn parse_symbol(&mut self, text: &str) -> Result<Symbol> {
        let text = text.trim();
        if !is_symbol_name(text) {
            return Err(parse_err(0, format!("invalid symbol name `{text}`")));
        }
        Ok(self.intern(text))
    }

    /// Parses a multiset written as `2A+B`, `A+A+B` or `3A`.
    pub fn parse_multiset(&mut self, text: &str) -> Result<TripleMultiset> {
        let mut entries = Vec::with_capacity(3);
        for term in text.trim().split('+') {
            let term = term.trim();
            let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
            let (count, name) = if digits == 0 {
                (1usize, term)
            } else {
                let count = term[..digits]
                    .parse::<usize>()
                    .map_err(|_| parse_err(0, format!("bad coefficient in `{term}`")))?;
                (count, &term[digits..])
            };
            if !is_symbol_name(name) {
                return Err(parse_err(0, format!("invalid multiset term `{term}`")));
            }
            if count == 0 || entries.len() + count > 3 {
                return Err(parse_err(0, format!("`{text}` is not a 3-element multiset")));
            }
            let sym = self.intern(name);
            entries.extend(std::iter::repeat_n(sym, count));
        }
        if entries.len() != 3 {
            return Err(parse_err(0, format!("`{text}` is not a 3-element multiset")));
        }
        Ok(TripleMultiset::new(entries[0], entries[1], entries[2]))
    }

    /// Text form with terms ordered by symbol name, e.g. `2A+B`.
    pub fn display_multiset(&self, s: &TripleMultiset) -> String {
        let mut terms: Vec<(&str, usize)> = Vec::with_capacity(3);
        for sym in s.underlying_set() {
            terms.push((self.name(sym), s.count(sym)));
        }
        terms.sort_by(|a, b| crate::tree::natural_cmp(a.0, b.0));
        let parts: Vec<String> = terms
            .into_iter()
            .map(|(name, count)| match count {
                1 => name.to_string(),
                c => format!("{c}{name}"),
            })
            .collect();
        parts.join("+")
    }

    pub fn display_combination(&self, c: &SymbolCombination) -> String {
        if c.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&str, Rational64)> =
            c.coefficients.iter().map(|(&s, &q)| (self.name(s), q)).collect();
        terms.sort_by(|a, b| crate::tree::natural_cmp(a.0, b.0));
        let mut out = String::new();
        for (i, (name, coef)) in terms.into_iter().enumerate() {
            if coef.is_negative() {
                out.push('-');
            } else if i > 0 {
                out.push('+');
            }
            let mag = coef.abs();
            if mag.is_one() {
                out.push_str(name);
            } else if mag.is_integer() {
                out.push_str(&format!("{}{}", mag.numer(), name));
            } else {
                out.push_str(&format!("({}/{}){}", mag.numer(), mag.denom(), name));
            }
        }
        out
    }
}

/// Symbol names: non-empty, start with a non-digit, no separators.
pub fn is_symbol_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        None => false,
        Some(c) if c.is_ascii_digit() => false,
        Some(_) => s
            .chars()
            .all(|c| !c.is_whitespace() && !matches!(c, '+' | '(' | ')' | ',' | ';' | ':' | '[' | ']' | '|')),
    }
}

/// A multiset of exactly three symbols, stored in non-decreasing id order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TripleMultiset([Symbol; 3]);

impl TripleMultiset {
    pub fn new(a: Symbol, b: Symbol, c: Symbol) -> Self {
        let mut e = [a, b, c];
        e.sort_unstable();
        Self(e)
    }

    pub fn uniform(a: Symbol) -> Self {
        Self([a, a, a])
    }

    pub fn entries(&self) -> [Symbol; 3] {
        self.0
    }

    /// Number of distinct symbols (1, 2 or 3).
    pub fn distinct_count(&self) -> usize {
        let [a, b, c] = self.0;
        1 + usize::from(a != b) + usize::from(b != c)
    }

    /// The symbol occurring at least twice; `None` when all three differ.
    pub fn m(&self) -> Option<Symbol> {
        let [a, b, c] = self.0;
        if a == b {
            Some(a)
        } else if b == c {
            Some(b)
        } else {
            None
        }
    }

    /// The symbol occurring exactly once (or the only symbol of a uniform
    /// multiset); `None` when all three differ.
    pub fn n(&self) -> Option<Symbol> {
        let [a, b, c] = self.0;
        match (a == b, b == c) {
            (true, true) => Some(a),
            (true, false) => Some(c),
            (false, true) => Some(a),
            (false, false) => None,
        }
    }

    pub fn underlying_set(&self) -> BTreeSet<Symbol> {
        self.0.iter().copied().collect()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.0.contains(&s)
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.0.iter().filter(|&&e| e == s).count()
    }

    /// The multiset with one copy of `s` removed, if present.
    pub fn remove_one(&self, s: Symbol) -> Option<[Symbol; 2]> {
        let pos = self.0.iter().position(|&e| e == s)?;
        let rest: Vec<Symbol> = self
            .0
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pos)
            .map(|(_, &e)| e)
            .collect();
        Some([rest[0], rest[1]])
    }
}

/// A formal linear combination of symbols with exact rational coefficients.
///
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolCombination {
    coefficients: BTreeMap<Symbol, Rational64>,
}

impl SymbolCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn singleton(s: Symbol) -> Self {
        Self::term(s, Rational64::one())
    }

    pub fn term(s: Symbol, coef: Rational64) -> Self {
        let mut c = Self::zero();
        c.add_term(s, coef);
        c
    }

    pub fn add_term(&mut self, s: Symbol, coef: Rational64) {
        if coef.is_zero() {
            return;
        }
        let entry = self.coefficients.entry(s).or_insert_with(Rational64::zero);
        *entry += coef;
        if entry.is_zero() {
            self.coefficients.remove(&s);
        }
    }

    pub fn coefficient(&self, s: Symbol) -> Rational64 {
        self.coefficients.get(&s).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (Symbol, Rational64)> + '_ {
        self.coefficients.iter().map(|(&s, &c)| (s, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn scale(&self, factor: Rational64) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            coefficients: self
                .coefficients
                .iter()
                .map(|(&s, &c)| (s, c * factor))
                .collect(),
        }
    }

    /// True iff every coefficient is a non-negative integer.
    pub fn is_valid(&self) -> bool {
        self.coefficients
            .values()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    /// The symbol `s` if this combination is exactly `1·s`.
    pub fn as_singleton(&self) -> Option<Symbol> {
        let mut it = self.coefficients.iter();
        match (it.next(), it.next()) {
            (Some((&s, c)), None) if c.is_one() => Some(s),
            _ => None,
        }
    }
}

impl From<TripleMultiset> for SymbolCombination {
    fn from(s: TripleMultiset) -> Self {
        let mut c = Self::zero();
        for e in s.entries() {
            c.add_term(e, Rational64::one());
        }
        c
    }
}

impl Add for SymbolCombination {
    type Output = SymbolCombination;
    fn add(mut self, rhs: Self) -> Self {
        for (s, c) in rhs.coefficients {
            self.add_term(s, c);
        }
        self
    }
}

impl Sub for SymbolCombination {
    type Output = SymbolCombination;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for SymbolCombination {
    type Output = SymbolCombination;
    fn neg(self) -> Self {
        self.scale(-Rational64::one())
    }
}

impl Mul<Rational64> for SymbolCombination {
    type Output = SymbolCombination;
    fn mul(self, rhs: Rational64) -> Self {
        self.scale(rhs)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
