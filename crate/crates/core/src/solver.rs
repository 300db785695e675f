//! Superstable parameters for admissible finite kneading words.
//!
//! Because `mu -> K(mu f)` is monotone, the kneading order itself drives a
//! bisection: compare `K(mid)` with the target word and keep the half that
//! still separates. Once the bracket is narrow, a safeguarded Newton
//! iteration on `g(mu) = f^n_mu(c) - c` polishes the root.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{KneadError, Result};
use crate::family::{check_unit, iterate_value, UnimodalFamily};
use crate::kneading::{kneading_sequence, KneadingResult, DEFAULT_C_TOL};
use crate::symbolic::{compare, is_shift_maximal, Order, Word};

pub const DEFAULT_SOLVE_TOL: f64 = 1e-11;
/// Grid size used by [`solve_all`] to find initial brackets.
pub const DISCOVERY_GRID: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Required `|f^n(c) - c|` at the returned parameter.
    pub tol: f64,
    pub c_tol: f64,
    /// Kneading bisection stops once the bracket is narrower than this.
    pub bisect_width: f64,
    /// Central-difference step for `dg/dmu`.
    pub fd_step: f64,
    /// Truncation cap when comparisons stay undecided.
    pub max_trunc: usize,
    pub max_newton: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: DEFAULT_SOLVE_TOL,
            c_tol: DEFAULT_C_TOL,
            bisect_width: 1e-6,
            fd_step: 1e-7,
            max_trunc: 512,
            max_newton: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub target: Word,
    pub mu_star: f64,
    /// `|f^n_{mu*}(c) - c|`.
    pub residual: f64,
    pub bracket_history: Vec<(f64, f64)>,
    pub kneading_check: KneadingResult,
    pub newton_steps: usize,
}

/// Position of `K(mu f)` relative to `target`, extending the truncation
/// while the comparison is undecided.
pub fn kneading_order<F: UnimodalFamily + ?Sized>(
    fam: &F,
    mu: f64,
    target: &Word,
    opts: &SolveOptions,
) -> Result<Order> {
    let mut len = 4 * target.len();
    loop {
        let k = kneading_sequence(fam, mu, len, opts.c_tol)?;
        match compare(&k.word, target) {
            Order::Undecided if len < opts.max_trunc => len = (2 * len).min(opts.max_trunc),
            // agreement to max_trunc symbols: treat mu as sitting on the target
            Order::Undecided => return Ok(Order::Equal),
            order => return Ok(order),
        }
    }
}

fn check_target(target: &Word) -> Result<()> {
    if !target.is_finite() || !is_shift_maximal(target) {
        return Err(KneadError::Inadmissible(target.to_string()));
    }
    Ok(())
}

fn critical_return<F: UnimodalFamily + ?Sized>(fam: &F, mu: f64, n: usize) -> Result<f64> {
    let c = fam.critical_point();
    Ok(iterate_value(fam, mu, c, n)? - c)
}

/// Parameter whose kneading sequence is `target`, inside `[lo, hi]`.
pub fn solve_word<F: UnimodalFamily + ?Sized>(
    fam: &F,
    target: &Word,
    lo: f64,
    hi: f64,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    check_target(target)?;
    let (mut lo, mut hi) = (check_unit("bracket lo", lo)?, check_unit("bracket hi", hi)?);
    if lo >= hi
        || kneading_order(fam, lo, target, opts)? != Order::Less
        || kneading_order(fam, hi, target, opts)? != Order::Greater
    {
        return Err(KneadError::BracketInvalid { lo, hi });
    }

    let mut history = vec![(lo, hi)];
    let mut start = 0.5 * (lo + hi);
    while hi - lo >= opts.bisect_width {
        let mid = 0.5 * (lo + hi);
        match kneading_order(fam, mid, target, opts)? {
            Order::Less => lo = mid,
            Order::Greater => hi = mid,
            _ => {
                start = mid;
                break;
            }
        }
        start = 0.5 * (lo + hi);
        history.push((lo, hi));
    }

    let n = target.len();
    let (mu_star, newton_steps) = polish(fam, n, start, lo, hi, opts)?;
    let residual = critical_return(fam, mu_star, n)?.abs();
    if residual > opts.tol {
        return Err(KneadError::NoConvergence {
            iterations: newton_steps,
            residual,
        });
    }
    let check = kneading_sequence(fam, mu_star, 4 * n, opts.c_tol)?;
    if check.word != *target {
        return Err(KneadError::WordMismatch {
            mu: mu_star,
            found: check.word.to_string(),
            expected: target.to_string(),
        });
    }
    Ok(SolveReport {
        target: target.clone(),
        mu_star,
        residual,
        bracket_history: history,
        kneading_check: check,
        newton_steps,
    })
}

/// Safeguarded Newton on `g(mu) = f^n_mu(c) - c` inside `[lo, hi]`, with
/// bisection on the sign of `g` whenever a step is rejected.
fn polish<F: UnimodalFamily + ?Sized>(
    fam: &F,
    n: usize,
    start: f64,
    mut lo: f64,
    mut hi: f64,
    opts: &SolveOptions,
) -> Result<(f64, usize)> {
    let g = |mu: f64| critical_return(fam, mu, n);
    let (mut g_lo, g_hi) = (g(lo)?, g(hi)?);
    let bracketed = g_lo.signum() != g_hi.signum() || g_lo == 0.0 || g_hi == 0.0;
    let mut mu = start;
    let mut best = (f64::INFINITY, mu);
    for step in 1..=opts.max_newton {
        let gm = g(mu)?;
        if gm.abs() < best.0 {
            best = (gm.abs(), mu);
        }
        if gm == 0.0 || (gm.abs() <= opts.tol * 1e-2) {
            return Ok((mu, step));
        }
        if bracketed {
            if gm.signum() == g_lo.signum() {
                lo = mu;
                g_lo = gm;
            } else {
                hi = mu;
            }
        }
        let h = opts.fd_step.min(0.5 * (hi - lo)).max(f64::EPSILON * 16.0);
        let slope = (g((mu + h).min(1.0))? - g((mu - h).max(0.0))?) / (2.0 * h);
        let newton = mu - gm / slope;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else if bracketed {
            0.5 * (lo + hi)
        } else {
            break;
        };
        if next == mu || hi - lo <= f64::EPSILON * hi {
            break;
        }
        mu = next;
    }
    if best.0 <= opts.tol {
        return Ok((best.1, opts.max_newton));
    }
    Err(KneadError::NoConvergence {
        iterations: opts.max_newton,
        residual: best.0,
    })
}

/// Outcome of [`solve_all`]: successful reports sorted by parameter, plus
/// per-word failures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveAll {
    pub reports: Vec<SolveReport>,
    pub failures: Vec<SolveFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveFailure {
    pub target: Word,
    pub error: String,
}

/// Grid bracket `[mu_i, mu_j]` with `K(mu_i) < target < K(mu_j)`.
pub fn discover_bracket(grid: &[(f64, Order)]) -> Option<(f64, f64)> {
    let last_less = grid.iter().rposition(|(_, o)| *o == Order::Less)?;
    let first_greater = grid[last_less..]
        .iter()
        .position(|(_, o)| *o == Order::Greater)?
        + last_less;
    Some((grid[last_less].0, grid[first_greater].0))
}

/// [`solve_word`] with the bracket found on a `DISCOVERY_GRID` scan of `[0, 1]`.
pub fn solve_discovered<F: UnimodalFamily + ?Sized>(
    fam: &F,
    target: &Word,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    check_target(target)?;
    let grid = (0..=DISCOVERY_GRID)
        .map(|i| {
            let mu = i as f64 / DISCOVERY_GRID as f64;
            Ok((mu, kneading_order(fam, mu, target, opts)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (lo, hi) =
        discover_bracket(&grid).ok_or(KneadError::BracketInvalid { lo: 0.0, hi: 1.0 })?;
    solve_word(fam, target, lo, hi, opts)
}

/// Solves every word with [`solve_discovered`]. Reports come back sorted
/// by `mu*`.
pub fn solve_all<F: UnimodalFamily + ?Sized>(
    fam: &F,
    words: &[Word],
    opts: &SolveOptions,
) -> SolveAll {
    let results: Vec<std::result::Result<SolveReport, SolveFailure>> = words
        .par_iter()
        .map(|w| {
            solve_discovered(fam, w, opts).map_err(|e| SolveFailure {
                target: w.clone(),
                error: e.to_string(),
            })
        })
        .collect();

    let mut out = SolveAll {
        reports: Vec::new(),
        failures: Vec::new(),
    };
    for r in results {
        match r {
            Ok(report) => out.reports.push(report),
            Err(failure) => out.failures.push(failure),
        }
    }
    out.reports.sort_by(|a, b| a.mu_star.total_cmp(&b.mu_star));
    out
}

/// Roots of `f^n_mu(c) - c` on `[0, 1]` (fine scan plus bisection) whose
/// kneading sequence equals `target`.
pub fn realizations<F: UnimodalFamily + ?Sized>(
    fam: &F,
    target: &Word,
    scan: usize,
    opts: &SolveOptions,
) -> Result<Vec<f64>> {
    let n = target.len();
    let g = |mu: f64| critical_return(fam, mu, n);
    let mut roots = Vec::new();
    let mut prev = (0.0, g(0.0)?);
    if prev.1 == 0.0 && kneading_sequence(fam, 0.0, 4 * n, opts.c_tol)?.word == *target {
        roots.push(0.0);
    }
    for i in 1..=scan {
        let mu = i as f64 / scan as f64;
        let gm = g(mu)?;
        let (a, ga) = prev;
        let root = if gm == 0.0 {
            Some(mu)
        } else if ga != 0.0 && ga.signum() != gm.signum() {
            let (mut lo, mut hi, mut glo) = (a, mu, ga);
            for _ in 0..200 {
                let m = 0.5 * (lo + hi);
                if m <= lo || m >= hi {
                    break;
                }
                let gmid = g(m)?;
                if gmid.signum() == glo.signum() {
                    lo = m;
                    glo = gmid;
                } else {
                    hi = m;
                }
            }
            Some(0.5 * (lo + hi))
        } else {
            None
        };
        if let Some(r) = root {
            let k = kneading_sequence(fam, r, 4 * n, opts.c_tol)?;
            if k.word == *target {
                roots.push(r);
            }
        }
        prev = (mu, gm);
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::admissible_up_to;
    use crate::family::BuiltinFamily::{Logistic, Sine};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    #[test]
    fn solve_c_is_exact() {
        for fam in [Logistic, Sine] {
            let r = solve_word(&fam, &w("C"), 0.05, 0.95, &opts()).unwrap();
            assert!((r.mu_star - 0.5).abs() <= 1e-12);
            assert_eq!(r.residual, 0.0);
        }
    }

    #[test]
    fn solve_period_two_logistic() {
        // mu f(mu) = 1/2 reads 8 mu^2 (1 - mu) = 1, with root (1 + sqrt 5) / 4
        // in (1/2, 1).
        let exact = (1.0 + 5f64.sqrt()) / 4.0;
        assert!((8.0 * exact * exact * (1.0 - exact) - 1.0).abs() < 1e-14);
        let r = solve_word(&Logistic, &w("RC"), 0.55, 0.95, &opts()).unwrap();
        assert!((r.mu_star - exact).abs() <= 1e-10, "{}", r.mu_star);
        assert!(r.residual <= 1e-12);
        assert_eq!(r.kneading_check.word, w("RC"));
        assert!(r.bracket_history.len() > 10);
        for pair in r.bracket_history.windows(2) {
            assert!(pair[1].0 >= pair[0].0 && pair[1].1 <= pair[0].1);
        }
    }

    #[test]
    fn solve_period_three_logistic() {
        let r = solve_word(&Logistic, &w("RLC"), 0.9, 0.99, &opts()).unwrap();
        assert!((r.mu_star - 0.957_968_513_820_828_9).abs() < 1e-12);
        assert!(r.residual <= 1e-11);
    }

    #[test]
    fn solve_period_two_sine() {
        let r = solve_word(&Sine, &w("RC"), 0.55, 0.95, &opts()).unwrap();
        assert!((r.mu_star - 0.777_733_766_171_606_1).abs() < 1e-12);
    }

    #[test]
    fn bad_brackets_and_words() {
        assert!(matches!(
            solve_word(&Logistic, &w("RLC"), 0.55, 0.9, &opts()),
            Err(KneadError::BracketInvalid { .. })
        ));
        assert!(matches!(
            solve_word(&Logistic, &w("RRC"), 0.5, 1.0, &opts()),
            Err(KneadError::Inadmissible(_))
        ));
        assert!(matches!(
            solve_word(&Logistic, &w("RL"), 0.5, 1.0, &opts()),
            Err(KneadError::Inadmissible(_))
        ));
    }

    #[test]
    fn solve_all_small_periods_in_order() {
        let words = admissible_up_to(4).unwrap();
        for fam in [Logistic, Sine] {
            let all = solve_all(&fam, &words, &opts());
            assert!(all.failures.is_empty(), "{:?}", all.failures);
            let got: Vec<String> = all.reports.iter().map(|r| r.target.to_string()).collect();
            assert_eq!(got, ["C", "RC", "RLRC", "RLC", "RLLC"]);
        }
    }

    #[test]
    fn solve_all_collects_failures() {
        let all = solve_all(&Logistic, &[w("RC"), w("RRC")], &opts());
        assert_eq!(all.reports.len(), 1);
        assert_eq!(all.failures.len(), 1);
        assert_eq!(all.failures[0].target, w("RRC"));
    }

    #[test]
    fn unique_realization_small_periods() {
        for word in admissible_up_to(4).unwrap() {
            let roots = realizations(&Logistic, &word, 1 << 14, &opts()).unwrap();
            assert_eq!(roots.len(), 1, "{word}: {roots:?}");
        }
    }
}
