//! Itineraries and kneading sequences.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::family::{check_unit, step, UnimodalFamily};
use crate::symbolic::{Symbol, Word};

pub const DEFAULT_C_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_LEN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    #[serde(rename = "hit_C")]
    HitC,
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KneadingResult {
    pub word: Word,
    pub termination: Termination,
    /// Smallest `|f^k(x0) - c|` seen along the computed orbit.
    pub c_distance: f64,
}

/// Itinerary of `x0` under `mu * f`, stopping at the first symbol within
/// `c_tol` of the critical point or after `max_len` symbols.
pub fn itinerary<F: UnimodalFamily + ?Sized>(
    fam: &F,
    mu: f64,
    x0: f64,
    max_len: usize,
    c_tol: f64,
) -> Result<KneadingResult> {
    let mu = check_unit("mu", mu)?;
    let mut x = check_unit("x0", x0)?;
    let c = fam.critical_point();
    let max_len = max_len.max(1);
    let mut symbols = Vec::with_capacity(max_len);
    let mut c_distance = f64::INFINITY;
    loop {
        let dist = (x - c).abs();
        c_distance = c_distance.min(dist);
        if dist <= c_tol {
            symbols.push(Symbol::C);
            let word = Word::new(symbols).expect("single trailing C");
            return Ok(KneadingResult {
                word,
                termination: Termination::HitC,
                c_distance,
            });
        }
        symbols.push(if x < c { Symbol::L } else { Symbol::R });
        if symbols.len() == max_len {
            let word = Word::new(symbols).expect("no C");
            return Ok(KneadingResult {
                word,
                termination: Termination::Truncated,
                c_distance,
            });
        }
        x = step(fam, mu, x)?;
    }
}

/// Kneading sequence `K(mu f)`: the itinerary of the critical value `mu`.
pub fn kneading_sequence<F: UnimodalFamily + ?Sized>(
    fam: &F,
    mu: f64,
    max_len: usize,
    c_tol: f64,
) -> Result<KneadingResult> {
    itinerary(fam, mu, mu, max_len, c_tol)
}
