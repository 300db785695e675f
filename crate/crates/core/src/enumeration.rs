//! Admissible finite kneading words by period, and the Möbius count of them.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{KneadError, Result};
use crate::symbolic::{compare, is_shift_maximal, Order, Symbol, Word};

/// Largest period [`formula_count`] handles without overflow.
pub const MAX_FORMULA_PERIOD: u32 = 120;
/// Largest period [`enumerate_admissible`] accepts (2^(n-1) candidates).
pub const MAX_ENUMERATION_PERIOD: u32 = 24;

pub fn mobius(d: u64) -> i64 {
    assert!(d >= 1, "mobius is defined for d >= 1");
    let mut n = d;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `(1 / 2n) * sum over odd square-free d | n of mobius(d) 2^(n/d)`.
pub fn formula_count(n: u32) -> Result<u128> {
    if n == 0 || n > MAX_FORMULA_PERIOD {
        return Err(KneadError::InvalidArgument(format!(
            "period {n} outside 1..={MAX_FORMULA_PERIOD}"
        )));
    }
    let n64 = u64::from(n);
    let sum: i128 = (1..=n64)
        .filter(|d| n64 % d == 0 && d % 2 == 1)
        .map(|d| i128::from(mobius(d)) * (1i128 << (n64 / d)))
        .sum();
    let denom = 2 * i128::from(n);
    assert!(
        sum % denom == 0,
        "counting formula not integral for n = {n}: {sum} / {denom}"
    );
    Ok((sum / denom) as u128)
}

/// All primitive shift-maximal words `P C` with `|P| = n - 1`, in
/// parity-lexicographic order.
pub fn enumerate_admissible(n: u32) -> Result<Vec<Word>> {
    if n == 0 || n > MAX_ENUMERATION_PERIOD {
        return Err(KneadError::InvalidArgument(format!(
            "period {n} outside 1..={MAX_ENUMERATION_PERIOD}"
        )));
    }
    let k = (n - 1) as usize;
    let mut words: Vec<Word> = (0u64..1 << k)
        .map(|bits| {
            let prefix: Vec<Symbol> = (0..k)
                .map(|i| {
                    if bits >> (k - 1 - i) & 1 == 1 {
                        Symbol::R
                    } else {
                        Symbol::L
                    }
                })
                .collect();
            Word::finite(&prefix).expect("prefix has no C")
        })
        .filter(|w| w.least_period() == w.len() && is_shift_maximal(w))
        .collect();
    sort_words(&mut words);
    Ok(words)
}

/// Sorts finite words ascending in the parity-lexicographic order.
pub fn sort_words(words: &mut [Word]) {
    words.sort_by(|a, b| match compare(a, b) {
        Order::Less => Ordering::Less,
        Order::Greater => Ordering::Greater,
        Order::Equal | Order::Undecided => Ordering::Equal,
    });
}

/// All admissible words with period at most `max_period`, in parity-lex order.
pub fn admissible_up_to(max_period: u32) -> Result<Vec<Word>> {
    let mut all = Vec::new();
    for n in 1..=max_period {
        all.extend(enumerate_admissible(n)?);
    }
    sort_words(&mut all);
    Ok(all)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodCensus {
    pub n: u32,
    pub enumerated: Vec<Word>,
    pub formula_count: u128,
}

impl PeriodCensus {
    pub fn agrees(&self) -> bool {
        self.enumerated.len() as u128 == self.formula_count
    }
}

/// Enumeration and formula side by side for periods `1..=n_max`.
pub fn census(n_max: u32) -> Result<Vec<PeriodCensus>> {
    (1..=n_max)
        .map(|n| {
            Ok(PeriodCensus {
                n,
                enumerated: enumerate_admissible(n)?,
                formula_count: formula_count(n)?,
            })
        })
        .collect()
}
