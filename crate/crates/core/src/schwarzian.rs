//! Schwarzian derivative `S(g) = g'''/g' - 3/2 (g''/g')^2` and the positivity
//! check for inverse branches of a family.

use serde::{Deserialize, Serialize};

use crate::error::{KneadError, Result};
use crate::family::{check_unit, UnimodalFamily};
use crate::inverse::{invert_branch, Branch, DEFAULT_INVERT_TOL};

/// Default relative step for [`inverse_branch_probe_fd`].
pub const DEFAULT_FD_STEP: f64 = 5e-3;
/// Relative margin kept away from `y = 0` and `y = mu` on probe grids.
pub const GRID_MARGIN: f64 = 1e-3;

/// Value and first three derivatives of a function at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C3Probe {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl C3Probe {
    /// Probe of `outer ∘ inner`, where `outer` is probed at `inner.value`.
    pub fn compose(outer: &C3Probe, inner: &C3Probe) -> C3Probe {
        let (a1, a2, a3) = (outer.d1, outer.d2, outer.d3);
        let (b1, b2, b3) = (inner.d1, inner.d2, inner.d3);
        C3Probe {
            value: outer.value,
            d1: a1 * b1,
            d2: a2 * b1 * b1 + a1 * b2,
            d3: a3 * b1 * b1 * b1 + 3.0 * a2 * b1 * b2 + a1 * b3,
        }
    }
}

pub fn schwarzian(probe: &C3Probe) -> Result<f64> {
    if probe.d1 == 0.0 || !probe.d1.is_finite() {
        return Err(KneadError::Singular);
    }
    let ratio = probe.d2 / probe.d1;
    Ok(probe.d3 / probe.d1 - 1.5 * ratio * ratio)
}

/// `S(outer ∘ inner) = S(outer)(inner) * inner'^2 + S(inner)`.
pub fn composed_schwarzian(outer_s: f64, inner_s: f64, inner_d1: f64) -> f64 {
    outer_s * inner_d1 * inner_d1 + inner_s
}

/// Probe of the forward map `mu * f` at `x`.
pub fn forward_probe<F: UnimodalFamily + ?Sized>(fam: &F, mu: f64, x: f64) -> C3Probe {
    C3Probe {
        value: fam.deriv(mu, x, 0),
        d1: fam.deriv(mu, x, 1),
        d2: fam.deriv(mu, x, 2),
        d3: fam.deriv(mu, x, 3),
    }
}

/// Probe of the inverse branch at `y` from the inverse-function relations
/// `g' = 1/f'`, `g'' = -f''/f'^3`, `g''' = (3 f''^2 - f' f''') / f'^5`.
pub fn inverse_branch_probe<F: UnimodalFamily + ?Sized>(
    fam: &F,
    mu: f64,
    branch: Branch,
    y: f64,
) -> Result<C3Probe> {
    let x = invert_branch(fam, mu, branch, y, DEFAULT_INVERT_TOL)?;
    let fwd = forward_probe(fam, mu, x);
    if fwd.d1 == 0.0 {
        return Err(KneadError::Singular);
    }
    let (f1, f2, f3) = (fwd.d1, fwd.d2, fwd.d3);
    Ok(C3Probe {
        value: x,
        d1: 1.0 / f1,
        d2: -f2 / f1.powi(3),
        d3: (3.0 * f2 * f2 - f1 * f3) / f1.powi(5),
    })
}

/// Probe of the inverse branch at `y` by central differences of
/// [`invert_branch`].
///
/// The step is `rel_step * (mu - y)`: the branch derivative blows up at
/// `y = mu`, so that distance is its natural length scale. It is capped so
/// the widest stencil point stays above zero. First and second derivatives use five-point
/// stencils; the third uses the five-point stencil at steps `h` and `2h`
/// combined by one Richardson extrapolation.
pub fn inverse_branch_probe_fd<F: UnimodalFamily + ?Sized>(
    fam: &F,
    mu: f64,
    branch: Branch,
    y: f64,
    rel_step: f64,
) -> Result<C3Probe> {
    let mu = check_unit("mu", mu)?;
    if !(rel_step > 0.0 && rel_step < 0.2) {
        return Err(KneadError::InvalidArgument(format!(
            "relative step {rel_step} outside (0, 0.2)"
        )));
    }
    if !(y > 0.0 && y < mu) {
        return Err(KneadError::InvalidArgument(format!(
            "y = {y} must lie inside (0, mu = {mu})"
        )));
    }
    let h = (rel_step * (mu - y)).min(y / 4.5);
    let g = |t: f64| invert_branch(fam, mu, branch, t, DEFAULT_INVERT_TOL);
    let z = g(y)?;
    let mut at = [0.0; 9];
    for (i, slot) in at.iter_mut().enumerate() {
        let offset = i as f64 - 4.0;
        *slot = if i == 4 { z } else { g(y + offset * h)? };
    }
    // at[4 + k] = g(y + k h)
    let third = |s: usize| {
        let hs = h * s as f64;
        (-at[4 - 2 * s] + 2.0 * at[4 - s] - 2.0 * at[4 + s] + at[4 + 2 * s]) / (2.0 * hs * hs * hs)
    };
    Ok(C3Probe {
        value: z,
        d1: (at[2] - 8.0 * at[3] + 8.0 * at[5] - at[6]) / (12.0 * h),
        d2: (-at[2] + 16.0 * at[3] - 30.0 * z + 16.0 * at[5] - at[6]) / (12.0 * h * h),
        d3: (4.0 * third(1) - third(2)) / 3.0,
    })
}

/// Location of a grid sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub branch: Branch,
    pub mu: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub family: String,
    pub samples: usize,
    pub min_s_left: f64,
    pub min_s_right: f64,
    pub min_s: f64,
    pub argmin: Option<GridPoint>,
    pub pass: bool,
}

/// Uniform `(mu, y/mu)` grid: `mu_i = i / n_mu` for `i = 1..=n_mu`, and
/// `n_y` fractions spread over `[GRID_MARGIN, 1 - GRID_MARGIN]`.
pub fn positivity_grid(n_mu: usize, n_y: usize) -> (Vec<f64>, Vec<f64>) {
    let mus = (1..=n_mu).map(|i| i as f64 / n_mu as f64).collect();
    let fracs = if n_y == 1 {
        vec![0.5]
    } else {
        (0..n_y)
            .map(|j| GRID_MARGIN + (1.0 - 2.0 * GRID_MARGIN) * j as f64 / (n_y - 1) as f64)
            .collect()
    };
    (mus, fracs)
}

/// Minimum of `S` of both inverse branches over the grid; passes iff the
/// minimum is positive and every sample is defined.
pub fn verify_positive_schwarzian<F: UnimodalFamily + ?Sized>(
    fam: &F,
    mus: &[f64],
    fracs: &[f64],
) -> Result<PositivityReport> {
    if mus.is_empty() || fracs.is_empty() {
        return Err(KneadError::InvalidArgument(
            "schwarzian grid must be nonempty".into(),
        ));
    }
    let mut report = PositivityReport {
        family: fam.name().to_string(),
        samples: 0,
        min_s_left: f64::INFINITY,
        min_s_right: f64::INFINITY,
        min_s: f64::INFINITY,
        argmin: None,
        pass: true,
    };
    for &mu in mus {
        for &frac in fracs {
            let y = frac * mu;
            for branch in [Branch::L, Branch::R] {
                report.samples += 1;
                let s = match inverse_branch_probe(fam, mu, branch, y).and_then(|p| schwarzian(&p))
                {
                    Ok(s) if s.is_finite() => s,
                    _ => {
                        report.pass = false;
                        continue;
                    }
                };
                let slot = match branch {
                    Branch::L => &mut report.min_s_left,
                    Branch::R => &mut report.min_s_right,
                };
                *slot = slot.min(s);
                if s < report.min_s {
                    report.min_s = s;
                    report.argmin = Some(GridPoint { branch, mu, y });
                }
            }
        }
    }
    report.pass &= report.min_s > 0.0;
    Ok(report)
}
