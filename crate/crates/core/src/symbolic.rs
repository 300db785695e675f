//! Words over `{L, C, R}` and the parity-lexicographic order.
//!
//! Two kinds of word occur. A *finite* word ends in its only `C` and stands
//! for a periodic critical orbit; in comparisons it is read as its periodic
//! extension. A *truncated* word contains no `C` and is a finite prefix of an
//! infinite itinerary, so two truncated words may be undecidable.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{KneadError, Result};

/// Number of periods a finite word is unrolled to in comparisons.
pub const EXTENSION_PERIODS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Symbol {
    L,
    C,
    R,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::L => 'L',
            Symbol::C => 'C',
            Symbol::R => 'R',
        }
    }

    pub fn from_char(ch: char) -> Option<Symbol> {
        match ch {
            'L' => Some(Symbol::L),
            'C' => Some(Symbol::C),
            'R' => Some(Symbol::R),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordKind {
    /// Ends with its single `C`.
    Finite,
    /// No `C`; a prefix of an infinite itinerary.
    Truncated,
}

/// Outcome of a parity-lexicographic comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    Less,
    Equal,
    Greater,
    /// One truncated word is a prefix of the other.
    Undecided,
}

impl Order {
    pub fn reverse(self) -> Order {
        match self {
            Order::Less => Order::Greater,
            Order::Greater => Order::Less,
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Word {
    symbols: Vec<Symbol>,
    kind: WordKind,
}

impl Word {
    /// Builds a word, inferring its kind: a trailing `C` makes it finite.
    pub fn new(symbols: Vec<Symbol>) -> Result<Word> {
        let text = || symbols.iter().map(|s| s.as_char()).collect::<String>();
        if symbols.is_empty() {
            return Err(KneadError::InvalidWord(String::new(), "empty word"));
        }
        let c_count = symbols.iter().filter(|&&s| s == Symbol::C).count();
        let kind = match c_count {
            0 => WordKind::Truncated,
            1 if symbols.last() == Some(&Symbol::C) => WordKind::Finite,
            _ => {
                return Err(KneadError::InvalidWord(
                    text(),
                    "C may only appear once, at the end",
                ))
            }
        };
        Ok(Word { symbols, kind })
    }

    /// The finite word `prefix` followed by `C`.
    pub fn finite(prefix: &[Symbol]) -> Result<Word> {
        let mut symbols = prefix.to_vec();
        symbols.push(Symbol::C);
        Word::new(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn kind(&self) -> WordKind {
        self.kind
    }

    pub fn is_finite(&self) -> bool {
        self.kind == WordKind::Finite
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// For a finite word, the symbols before the terminating `C`.
    pub fn prefix(&self) -> &[Symbol] {
        match self.kind {
            WordKind::Finite => &self.symbols[..self.symbols.len() - 1],
            WordKind::Truncated => &self.symbols,
        }
    }

    /// Number of `R` symbols.
    pub fn r_count(&self) -> usize {
        self.symbols.iter().filter(|&&s| s == Symbol::R).count()
    }

    /// The first `len` symbols of the periodic extension (finite words) or
    /// of the word itself, whichever is shorter for truncated words.
    pub fn unrolled(&self, len: usize) -> Vec<Symbol> {
        match self.kind {
            WordKind::Finite => self.symbols.iter().copied().cycle().take(len).collect(),
            WordKind::Truncated => self.symbols.iter().copied().take(len).collect(),
        }
    }

    /// Least period of the periodic extension of a finite word.
    pub fn least_period(&self) -> usize {
        let n = self.symbols.len();
        (1..=n)
            .find(|&p| {
                n.is_multiple_of(p) && (p..n).all(|i| self.symbols[i] == self.symbols[i - p])
            })
            .unwrap_or(n)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = KneadError;

    fn from_str(s: &str) -> Result<Word> {
        let symbols = s
            .chars()
            .map(|ch| {
                Symbol::from_char(ch)
                    .ok_or_else(|| KneadError::InvalidWord(s.to_string(), "only L, C, R allowed"))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(symbols)
    }
}

impl TryFrom<String> for Word {
    type Error = KneadError;

    fn try_from(s: String) -> Result<Word> {
        s.parse()
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

/// Parity-lexicographic comparison of two symbol sequences over their common
/// length. Returns `None` when they agree on it.
///
/// At the first index `n` where they differ, the plain order `L < C < R` is
/// flipped when the shared prefix `a[..n]` holds an odd number of `R`s.
pub fn compare_symbols(a: &[Symbol], b: &[Symbol]) -> Option<Order> {
    let mut odd = false;
    for (&x, &y) in a.iter().zip(b) {
        if x != y {
            let plain = if x < y { Order::Less } else { Order::Greater };
            return Some(if odd { plain.reverse() } else { plain });
        }
        if x == Symbol::R {
            odd = !odd;
        }
    }
    None
}

/// Parity-lexicographic comparison of two words.
pub fn compare(a: &Word, b: &Word) -> Order {
    use WordKind::*;
    match (a.kind, b.kind) {
        (Finite, Finite) => {
            if a.symbols == b.symbols {
                return Order::Equal;
            }
            let len = EXTENSION_PERIODS * a.len().max(b.len());
            // Each period holds one C at a different offset, so they differ early.
            compare_symbols(&a.unrolled(len), &b.unrolled(len)).unwrap_or(Order::Equal)
        }
        (Finite, Truncated) | (Truncated, Finite) => {
            let (fin, tr, flip) = if a.is_finite() {
                (a, b, false)
            } else {
                (b, a, true)
            };
            let len = (EXTENSION_PERIODS * fin.len()).max(tr.len());
            let order =
                compare_symbols(&fin.unrolled(len), &tr.symbols).unwrap_or(Order::Undecided);
            if flip {
                order.reverse()
            } else {
                order
            }
        }
        (Truncated, Truncated) => match compare_symbols(&a.symbols, &b.symbols) {
            Some(order) => order,
            None if a.len() == b.len() => Order::Equal,
            None => Order::Undecided,
        },
    }
}

/// Drops the first symbol.
pub fn shift(w: &Word) -> Result<Word> {
    if w.len() < 2 {
        return Err(KneadError::ShiftTooShort);
    }
    Ok(Word {
        symbols: w.symbols[1..].to_vec(),
        kind: w.kind,
    })
}

/// True when `w` is at least as large as each of its proper shifts.
pub fn is_shift_maximal(w: &Word) -> bool {
    is_shift_maximal_with(w, EXTENSION_PERIODS)
}

/// [`is_shift_maximal`] with finite words unrolled to `periods` periods.
pub fn is_shift_maximal_with(w: &Word, periods: usize) -> bool {
    let n = w.len();
    match w.kind {
        WordKind::Finite => {
            let len = periods.max(1) * n;
            let ext = w.unrolled(len + n);
            (1..n).all(|k| compare_symbols(&ext[..len], &ext[k..k + len]) != Some(Order::Less))
        }
        WordKind::Truncated => {
            (1..n).all(|k| compare_symbols(&w.symbols, &w.symbols[k..]) != Some(Order::Less))
        }
    }
}
