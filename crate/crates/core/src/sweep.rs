//! Grid check that `mu -> K(mu f)` is monotone.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{KneadError, Result};
use crate::family::UnimodalFamily;
use crate::kneading::{kneading_sequence, Termination};
use crate::symbolic::{compare, Order, Word};

pub const DEFAULT_SWEEP_TRUNC: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub mu: f64,
    pub word: Word,
    pub termination: Termination,
    pub c_distance: f64,
}

/// Adjacent grid points `index` and `index + 1` whose words are out of
/// order (or could not be ordered).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPair {
    pub index: usize,
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub word_lo: Word,
    pub word_hi: Word,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: String,
    pub grid_size: usize,
    pub trunc_len: usize,
    pub c_tol: f64,
    pub points: Vec<SweepPoint>,
    /// Strict order reversals: `K(mu_i) > K(mu_{i+1})`.
    pub violations: Vec<SweepPair>,
    /// Pairs still undecided after one retry at twice the truncation.
    pub undecided: Vec<SweepPair>,
}

impl SweepReport {
    pub fn is_monotone(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Kneading sequences on `mu_i = i / (grid_size - 1)` and every adjacent
/// pair that is not in nondecreasing order.
pub fn kneading_sweep<F: UnimodalFamily + ?Sized>(
    fam: &F,
    grid_size: usize,
    trunc_len: usize,
    c_tol: f64,
) -> Result<SweepReport> {
    if grid_size < 2 {
        return Err(KneadError::InvalidArgument(
            "grid_size must be at least 2".into(),
        ));
    }
    if trunc_len == 0 {
        return Err(KneadError::InvalidArgument(
            "trunc_len must be positive".into(),
        ));
    }
    let mu_at = |i: usize| i as f64 / (grid_size - 1) as f64;
    let points = (0..grid_size)
        .into_par_iter()
        .map(|i| {
            let mu = mu_at(i);
            let k = kneading_sequence(fam, mu, trunc_len, c_tol)?;
            Ok(SweepPoint {
                mu,
                word: k.word,
                termination: k.termination,
                c_distance: k.c_distance,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut violations = Vec::new();
    let mut undecided = Vec::new();
    for (i, pair) in points.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        let order = match compare(&a.word, &b.word) {
            Order::Undecided => {
                let long = |mu| kneading_sequence(fam, mu, 2 * trunc_len, c_tol).map(|k| k.word);
                compare(&long(a.mu)?, &long(b.mu)?)
            }
            order => order,
        };
        let record = || SweepPair {
            index: i,
            mu_lo: a.mu,
            mu_hi: b.mu,
            word_lo: a.word.clone(),
            word_hi: b.word.clone(),
        };
        match order {
            Order::Greater => violations.push(record()),
            Order::Undecided => undecided.push(record()),
            Order::Less | Order::Equal => {}
        }
    }
    Ok(SweepReport {
        family: fam.name().to_string(),
        grid_size,
        trunc_len,
        c_tol,
        points,
        violations,
        undecided,
    })
}
