//! Topological entropy from lap-number growth and from the Markov matrix of
//! a superstable cycle.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{KneadError, Result};
use crate::family::{check_unit, UnimodalFamily};
use crate::inverse::{invert_unchecked, Branch};
use crate::symbolic::{compare_symbols, is_shift_maximal, Order, Symbol, Word};

/// Distance below `mu` within which a point is treated as the critical
/// value itself, so its only preimage is `c`.
pub const PREIMAGE_SNAP: f64 = 1e-9;
/// Default cap on the number of distinct preimages of `c` explored.
pub const DEFAULT_NODE_BUDGET: usize = 1 << 20;
pub const MIN_ENTROPY_NMAX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LapCount {
    pub n: usize,
    pub laps: u64,
}

fn preimages<F: UnimodalFamily + ?Sized>(fam: &F, mu: f64, y: f64, out: &mut Vec<f64>) {
    if y > mu + PREIMAGE_SNAP {
        return;
    }
    if y >= mu - PREIMAGE_SNAP {
        out.push(fam.critical_point());
        return;
    }
    out.push(invert_unchecked(fam, mu, Branch::L, y));
    out.push(invert_unchecked(fam, mu, Branch::R, y));
}

/// Lap numbers of `f^n_mu` for `n = 1..=n_max`.
pub fn lap_numbers<F: UnimodalFamily + ?Sized>(
    fam: &F,
    mu: f64,
    n_max: usize,
) -> Result<Vec<LapCount>> {
    lap_numbers_with_budget(fam, mu, n_max, usize::MAX)
}

/// Like [`lap_numbers`], but stops before the level at which more than
/// `budget` distinct preimages of `c` would have been collected.
///
/// The turning points of `f^n` are the solutions of `f^k(x) = c` for
/// `k < n`; they are found breadth-first by inverting both branches.
pub fn lap_numbers_with_budget<F: UnimodalFamily + ?Sized>(
    fam: &F,
    mu: f64,
    n_max: usize,
    budget: usize,
) -> Result<Vec<LapCount>> {
    if n_max == 0 {
        return Err(KneadError::InvalidArgument(
            "n_max must be at least 1".into(),
        ));
    }
    let mu = check_unit("mu", mu)?;
    let c = fam.critical_point();
    let mut seen: HashSet<u64> = HashSet::from([c.to_bits()]);
    let mut frontier = vec![c];
    let mut counts = vec![LapCount { n: 1, laps: 2 }];
    let mut scratch = Vec::new();
    for n in 2..=n_max {
        scratch.clear();
        for &y in &frontier {
            preimages(fam, mu, y, &mut scratch);
        }
        let mut next = Vec::with_capacity(scratch.len());
        for &x in &scratch {
            if seen.insert(x.to_bits()) {
                next.push(x);
            }
        }
        if seen.len() > budget {
            break;
        }
        frontier = next;
        counts.push(LapCount {
            n,
            laps: 1 + seen.len() as u64,
        });
    }
    Ok(counts)
}

/// Least-squares slope of `ln laps(n)` against `n` over the last half of
/// the counts, clamped to `[0, ln 2]`.
pub fn growth_rate(counts: &[LapCount]) -> f64 {
    let tail = &counts[counts.len() - counts.len().div_ceil(2)..];
    if tail.len() < 2 {
        return 0.0;
    }
    let m = tail.len() as f64;
    let mean_n = tail.iter().map(|p| p.n as f64).sum::<f64>() / m;
    let mean_l = tail.iter().map(|p| (p.laps as f64).ln()).sum::<f64>() / m;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for p in tail {
        let dx = p.n as f64 - mean_n;
        sxy += dx * ((p.laps as f64).ln() - mean_l);
        sxx += dx * dx;
    }
    (sxy / sxx).clamp(0.0, std::f64::consts::LN_2)
}

/// Entropy estimate from lap growth with the default node budget.
pub fn entropy_lap<F: UnimodalFamily + ?Sized>(fam: &F, mu: f64, n_max: usize) -> Result<f64> {
    entropy_lap_with_budget(fam, mu, n_max, DEFAULT_NODE_BUDGET)
}

pub fn entropy_lap_with_budget<F: UnimodalFamily + ?Sized>(
    fam: &F,
    mu: f64,
    n_max: usize,
    budget: usize,
) -> Result<f64> {
    if n_max < MIN_ENTROPY_NMAX {
        return Err(KneadError::InvalidArgument(format!(
            "n_max must be at least {MIN_ENTROPY_NMAX}"
        )));
    }
    Ok(growth_rate(&lap_numbers_with_budget(
        fam, mu, n_max, budget,
    )?))
}

/// 0/1 transition matrix of the intervals between consecutive points of the
/// superstable cycle realizing `w`. Row `i` marks the intervals covered by
/// the image of interval `i`.
pub fn transition_matrix(w: &Word) -> Result<Vec<Vec<u8>>> {
    if !w.is_finite() || !is_shift_maximal(w) || w.least_period() != w.len() {
        return Err(KneadError::Inadmissible(w.to_string()));
    }
    let n = w.len();
    if n < 2 {
        return Err(KneadError::InvalidArgument(
            "period must be at least 2".into(),
        ));
    }
    // Point j of the cycle (x_0 = c, x_1 = mu) has itinerary w shifted by j - 1.
    let ext: Vec<Symbol> = w.unrolled(4 * n);
    let itin = |j: usize| &ext[(j + n - 1) % n..(j + n - 1) % n + 3 * n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| match compare_symbols(itin(a), itin(b)) {
        Some(Order::Less) => std::cmp::Ordering::Less,
        Some(Order::Greater) => std::cmp::Ordering::Greater,
        _ => std::cmp::Ordering::Equal,
    });
    let mut rank = vec![0; n];
    for (r, &j) in order.iter().enumerate() {
        rank[j] = r;
    }
    let mut a = vec![vec![0u8; n - 1]; n - 1];
    for (i, row) in a.iter_mut().enumerate() {
        let (p, q) = (rank[(order[i] + 1) % n], rank[(order[i + 1] + 1) % n]);
        for cell in &mut row[p.min(q)..p.max(q)] {
            *cell = 1;
        }
    }
    Ok(a)
}

/// Spectral radius of a nonnegative matrix.
///
/// `lambda > rho(A)` exactly when `lambda I - A` is a nonsingular M-matrix,
/// i.e. when Gaussian elimination without pivoting has only positive pivots,
/// so `rho` is found by bisection on `lambda`.
pub fn spectral_radius(a: &[Vec<f64>]) -> f64 {
    let m = a.len();
    let above = |lambda: f64| {
        let mut b: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if i == j { lambda - a[i][j] } else { -a[i][j] })
                    .collect()
            })
            .collect();
        for k in 0..m {
            let (top, rest) = b.split_at_mut(k + 1);
            let pivot = &top[k];
            if pivot[k] <= 0.0 {
                return false;
            }
            for row in rest {
                let factor = row[k] / pivot[k];
                for (x, p) in row[k..].iter_mut().zip(&pivot[k..]) {
                    *x -= factor * p;
                }
            }
        }
        true
    };
    let mut lo = 0.0;
    let mut hi = a
        .iter()
        .map(|row| row.iter().sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Entropy of the superstable map realizing `w`, as the log of the spectral
/// radius of its transition matrix.
pub fn entropy_matrix(w: &Word) -> Result<f64> {
    let a: Vec<Vec<f64>> = transition_matrix(w)?
        .into_iter()
        .map(|row| row.into_iter().map(f64::from).collect())
        .collect();
    Ok(spectral_radius(&a).ln().max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyPoint {
    pub mu: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropySweep {
    pub points: Vec<EntropyPoint>,
    pub slack: f64,
    /// Indices `i` where `h(mu_i)` falls below the running maximum by more
    /// than `slack`.
    pub violations: Vec<usize>,
}

/// Sweeps use a common depth at every grid point; with a budget-limited
/// depth the estimate would depend on how far each point got.
pub const DEFAULT_SWEEP_NMAX: usize = 20;
pub const DEFAULT_ENTROPY_SLACK: f64 = 2e-3;

/// Lap entropy on the uniform grid `mu_i = i / (grid - 1)`, checked for
/// monotonicity against the running maximum. `2^n_max` must fit within
/// the default node budget for every point to reach the same depth.
pub fn entropy_sweep<F: UnimodalFamily + ?Sized>(
    fam: &F,
    grid: usize,
    n_max: usize,
    slack: f64,
) -> Result<EntropySweep> {
    if grid < 2 {
        return Err(KneadError::InvalidArgument(
            "grid must have at least 2 points".into(),
        ));
    }
    let points = (0..grid)
        .into_par_iter()
        .map(|i| {
            let mu = i as f64 / (grid - 1) as f64;
            Ok(EntropyPoint {
                mu,
                h: entropy_lap(fam, mu, n_max)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut running = f64::NEG_INFINITY;
    let mut violations = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if p.h < running - slack {
            violations.push(i);
        }
        running = running.max(p.h);
    }
    Ok(EntropySweep {
        points,
        slack,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::BuiltinFamily::{Logistic, Sine};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn laps(counts: &[LapCount]) -> Vec<u64> {
        counts.iter().map(|p| p.laps).collect()
    }

    #[test]
    fn lap_examples() {
        assert_eq!(laps(&lap_numbers(&Logistic, 1.0, 3).unwrap()), [2, 4, 8]);
        assert_eq!(laps(&lap_numbers(&Logistic, 0.4, 3).unwrap()), [2, 2, 2]);
        for fam in [Logistic, Sine] {
            assert_eq!(laps(&lap_numbers(&fam, 0.7, 1).unwrap()), [2]);
        }
        assert!(lap_numbers(&Logistic, 0.7, 0).is_err());
    }

    #[test]
    fn full_map_doubles() {
        for fam in [Logistic, Sine] {
            let counts = lap_numbers(&fam, 1.0, 16).unwrap();
            for p in &counts {
                assert_eq!(p.laps, 1 << p.n);
            }
        }
    }

    #[test]
    fn laps_at_most_double() {
        for fam in [Logistic, Sine] {
            for mu in [0.55, 0.8, 0.9, 0.93, 0.97, 0.999] {
                let counts = lap_numbers(&fam, mu, 14).unwrap();
                for pair in counts.windows(2) {
                    assert!(pair[1].laps >= pair[0].laps);
                    assert!(pair[1].laps <= 2 * pair[0].laps, "{mu}: {counts:?}");
                }
            }
        }
    }

    /// Lap count of the logistic `f^n` from direction changes on a fine grid.
    fn laps_by_scan(mu: f64, n: usize) -> u64 {
        let grid = 1 << 18;
        let ys: Vec<f64> = (0..=grid)
            .map(|i| {
                crate::family::iterate_value(&Logistic, mu, i as f64 / grid as f64, n).unwrap()
            })
            .collect();
        let turns = ys
            .windows(3)
            .filter(|t| (t[1] - t[0]) * (t[2] - t[1]) < 0.0)
            .count();
        turns as u64 + 1
    }

    #[test]
    fn laps_match_grid_scan() {
        for mu in [0.6, 0.85, 0.95, 0.99] {
            let counts = lap_numbers(&Logistic, mu, 6).unwrap();
            for p in &counts {
                assert_eq!(p.laps, laps_by_scan(mu, p.n), "mu = {mu}, n = {}", p.n);
            }
        }
    }

    #[test]
    fn lap_entropy_examples() {
        assert!((entropy_lap(&Logistic, 1.0, 20).unwrap() - std::f64::consts::LN_2).abs() <= 1e-3);
        assert_eq!(entropy_lap(&Logistic, 0.5, 20).unwrap(), 0.0);
        assert_eq!(entropy_lap(&Logistic, 0.3, 20).unwrap(), 0.0);
        assert!(entropy_lap(&Logistic, 0.9, 7).is_err());
    }

    #[test]
    fn coarse_sweep_is_monotone() {
        for fam in [Logistic, Sine] {
            let sweep = entropy_sweep(&fam, 101, 14, DEFAULT_ENTROPY_SLACK).unwrap();
            assert!(sweep.violations.is_empty(), "{fam}: {:?}", sweep.violations);
            assert_eq!(sweep.points[0].h, 0.0);
            assert!((sweep.points[100].h - std::f64::consts::LN_2).abs() < 1e-3);
        }
    }

    #[test]
    fn budget_truncates() {
        let counts = lap_numbers_with_budget(&Logistic, 1.0, 30, 1000).unwrap();
        assert!(counts.len() < 30);
        assert!(counts.last().unwrap().laps <= 1001);
    }

    #[test]
    fn transition_matrices() {
        assert_eq!(transition_matrix(&w("RC")).unwrap(), [[1]]);
        assert_eq!(transition_matrix(&w("RLC")).unwrap(), [[0, 1], [1, 1]]);
        assert!(transition_matrix(&w("C")).is_err());
        assert!(transition_matrix(&w("RRC")).is_err());
    }

    #[test]
    fn matrix_entropy_examples() {
        assert!(entropy_matrix(&w("RC")).unwrap().abs() <= 1e-12);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((entropy_matrix(&w("RLC")).unwrap() - golden.ln()).abs() <= 1e-12);
        // RLLC: the largest root of x^3 - x^2 - x - 1
        let mut lo: f64 = 1.0;
        let mut hi: f64 = 2.0;
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if m * m * m - m * m - m - 1.0 > 0.0 {
                hi = m;
            } else {
                lo = m;
            }
        }
        assert!((entropy_matrix(&w("RLLC")).unwrap() - lo.ln()).abs() <= 1e-12);
    }

    #[test]
    fn spectral_radius_defective() {
        // Jordan block: power iteration converges slowly here
        let a = vec![vec![1.0, 1.0], vec![0.0, 1.0]];
        assert!((spectral_radius(&a) - 1.0).abs() < 1e-12);
        let b = vec![vec![2.0, 0.0], vec![0.0, 3.0]];
        assert!((spectral_radius(&b) - 3.0).abs() < 1e-12);
    }
}
