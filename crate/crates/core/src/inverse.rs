//! Inverse branches of `mu * f` and the level functions built from them.
//!
//! `mu * f` maps both `[0, c]` and `[c, 1]` onto `[0, mu]`, so every `y` in
//! `[0, mu]` has one preimage per branch. Composing branch inverses starting
//! from `c` gives the level function
//!
//! ```text
//! x_P(mu) = inv_{P_1}( inv_{P_2}( ... inv_{P_k}(c) ... ) )
//! ```
//!
//! a `k`-th preimage of `c` that depends on `mu` alone. When `x_P(mu) = mu`
//! the critical point is periodic: `f^{k+1}_mu(c) = c` and the kneading
//! sequence of `mu` is `P` followed by `C`.

use serde::{Deserialize, Serialize};

use crate::error::{KneadError, Result};
use crate::family::{check_unit, iterate_value, UnimodalFamily};
use crate::symbolic::{Symbol, Word};

pub const DEFAULT_INVERT_TOL: f64 = 1e-13;
pub const DEFAULT_LEVEL_TOL: f64 = 1e-11;
/// Sample count for the sign-change scan in [`level_fixed_points`].
pub const FIXED_POINT_SCAN: usize = 256;

const MAX_INVERT_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// Preimage in `[0, c]`.
    L,
    /// Preimage in `[c, 1]`.
    R,
}

impl Branch {
    pub fn symbol(self) -> Symbol {
        match self {
            Branch::L => Symbol::L,
            Branch::R => Symbol::R,
        }
    }

    pub fn from_symbol(s: Symbol) -> Option<Branch> {
        match s {
            Symbol::L => Some(Branch::L),
            Symbol::R => Some(Branch::R),
            Symbol::C => None,
        }
    }
}

/// Parses a branch word such as `"RLL"`.
pub fn parse_branches(s: &str) -> Result<Vec<Branch>> {
    s.chars()
        .map(|ch| match ch {
            'L' => Ok(Branch::L),
            'R' => Ok(Branch::R),
            _ => Err(KneadError::InvalidWord(
                s.to_string(),
                "branch words use only L and R",
            )),
        })
        .collect()
}

/// Preimage of `y` under `mu * f` on the chosen branch.
///
/// Safeguarded Newton inside the branch interval, falling back to bisection,
/// iterated to machine precision. Values `mu < y <= mu + tol` map to `c`.
pub fn invert_branch<F: UnimodalFamily + ?Sized>(
    fam: &F,
    mu: f64,
    branch: Branch,
    y: f64,
    tol: f64,
) -> Result<f64> {
    let mu = check_unit("mu", mu)?;
    let y = check_unit("y", y)?;
    if y > mu + tol {
        return Err(KneadError::NoPreimage { y, mu });
    }
    Ok(invert_unchecked(fam, mu, branch, y.min(mu)))
}

/// Core of [`invert_branch`]; requires `0 <= y <= mu`.
pub(crate) fn invert_unchecked<F: UnimodalFamily + ?Sized>(
    fam: &F,
    mu: f64,
    branch: Branch,
    y: f64,
) -> f64 {
    let c = fam.critical_point();
    if y >= mu {
        return c;
    }
    let (mut lo, mut hi) = match branch {
        Branch::L => (0.0, c),
        Branch::R => (c, 1.0),
    };
    // g is increasing on the L branch; flip it on R so the update rule is shared.
    let sign = match branch {
        Branch::L => 1.0,
        Branch::R => -1.0,
    };
    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_INVERT_ITER {
        let g = sign * (fam.eval(mu, x) - y);
        if g == 0.0 {
            return x;
        }
        if g > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = sign * fam.deriv(mu, x, 1);
        let newton = x - g / d;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE)
            || hi - lo <= 1e-17
        {
            return next;
        }
        x = next;
    }
    x
}

/// Result of evaluating a level function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Level {
    Value {
        x: f64,
    },
    /// The running value exceeded `mu` before inversion step `step`
    /// (1-based, counted in application order, i.e. from `P_k` back to `P_1`).
    DomainViolation {
        step: usize,
        value: f64,
    },
}

impl Level {
    pub fn value(self) -> Option<f64> {
        match self {
            Level::Value { x } => Some(x),
            Level::DomainViolation { .. } => None,
        }
    }
}

/// The level function `x_P(mu)` of a family for a branch word `P`.
#[derive(Debug, Clone)]
pub struct LevelFunction<'a, F: UnimodalFamily + ?Sized> {
    fam: &'a F,
    branches: Vec<Branch>,
}

impl<'a, F: UnimodalFamily + ?Sized> LevelFunction<'a, F> {
    pub fn new(fam: &'a F, branches: Vec<Branch>) -> Result<Self> {
        if branches.is_empty() {
            return Err(KneadError::InvalidArgument(
                "branch word must be nonempty".into(),
            ));
        }
        Ok(LevelFunction { fam, branches })
    }

    /// Level function whose fixed point realises the finite word `w`
    /// (the symbols before `C`, in order).
    pub fn for_word(fam: &'a F, w: &Word) -> Result<Self> {
        if !w.is_finite() || w.len() < 2 {
            return Err(KneadError::InvalidArgument(format!(
                "{w} needs to be a finite word of length >= 2"
            )));
        }
        let branches = w
            .prefix()
            .iter()
            .map(|&s| Branch::from_symbol(s).expect("no C in prefix"))
            .collect();
        LevelFunction::new(fam, branches)
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn family(&self) -> &'a F {
        self.fam
    }

    /// Order `k` of the preimage, i.e. the branch word length.
    pub fn order(&self) -> usize {
        self.branches.len()
    }

    pub fn eval(&self, mu: f64, tol: f64) -> Result<Level> {
        let mu = check_unit("mu", mu)?;
        if mu == 0.0 {
            return Err(KneadError::Domain {
                what: "mu",
                value: mu,
            });
        }
        let mut x = self.fam.critical_point();
        for (step, &b) in self.branches.iter().rev().enumerate() {
            if x > mu + tol {
                return Ok(Level::DomainViolation {
                    step: step + 1,
                    value: x,
                });
            }
            x = invert_unchecked(self.fam, mu, b, x.min(mu));
        }
        Ok(Level::Value { x })
    }

    /// Sign-carrying `x_P(mu) - mu`, or `None` outside the domain.
    fn gap(&self, mu: f64, tol: f64) -> Option<f64> {
        self.eval(mu, tol).ok()?.value().map(|x| x - mu)
    }
}

/// A fixed point of a level function together with the forward check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelFixedPoint {
    pub mu: f64,
    /// `|x_P(mu) - mu|`.
    pub level_residual: f64,
    /// `|f^{k+1}_mu(c) - c|` with `k` the branch word length.
    pub forward_residual: f64,
    /// Forward residual within ten times the tolerance.
    pub verified: bool,
}

/// All sign changes of `x_P(mu) - mu` on `[lo, hi]`, each refined by bisection.
pub fn level_fixed_points<F: UnimodalFamily + ?Sized>(
    level: &LevelFunction<'_, F>,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<Vec<LevelFixedPoint>> {
    let lo = check_unit("bracket lo", lo)?;
    let hi = check_unit("bracket hi", hi)?;
    if lo >= hi {
        return Err(KneadError::BracketInvalid { lo, hi });
    }
    let samples: Vec<(f64, Option<f64>)> = (0..FIXED_POINT_SCAN)
        .map(|i| {
            let mu = lo + (hi - lo) * i as f64 / (FIXED_POINT_SCAN - 1) as f64;
            (mu, if mu > 0.0 { level.gap(mu, tol) } else { None })
        })
        .collect();

    let mut roots = Vec::new();
    for pair in samples.windows(2) {
        let ((a, ga), (b, gb)) = (pair[0], pair[1]);
        let (Some(ga), Some(gb)) = (ga, gb) else {
            continue;
        };
        if ga == 0.0 {
            roots.push(a);
        } else if ga.signum() != gb.signum() && gb != 0.0 {
            if let Some(root) = bisect_gap(level, a, b, ga, tol) {
                roots.push(root);
            }
        }
    }
    if let Some((b, Some(gb))) = samples.last() {
        if *gb == 0.0 {
            roots.push(*b);
        }
    }

    let fam = level.family();
    let c = fam.critical_point();
    let k = level.order() + 1;
    roots
        .into_iter()
        .map(|mu| {
            let level_residual = level.gap(mu, tol).map_or(f64::INFINITY, f64::abs);
            let forward_residual = (iterate_value(fam, mu, c, k)? - c).abs();
            Ok(LevelFixedPoint {
                mu,
                level_residual,
                forward_residual,
                verified: forward_residual <= 10.0 * tol,
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().filter(|p| p.level_residual <= tol).collect())
}

/// First fixed point of `x_P(mu) = mu` in `[lo, hi]`, if any.
pub fn find_level_fixed_point<F: UnimodalFamily + ?Sized>(
    level: &LevelFunction<'_, F>,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<Option<LevelFixedPoint>> {
    Ok(level_fixed_points(level, lo, hi, tol)?.into_iter().next())
}

fn bisect_gap<F: UnimodalFamily + ?Sized>(
    level: &LevelFunction<'_, F>,
    mut a: f64,
    mut b: f64,
    mut ga: f64,
    tol: f64,
) -> Option<f64> {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = level.gap(m, tol)?;
        if gm == 0.0 {
            return Some(m);
        }
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    let ga_abs = ga.abs();
    let gb_abs = level.gap(b, tol)?.abs();
    Some(if ga_abs <= gb_abs { a } else { b })
}
