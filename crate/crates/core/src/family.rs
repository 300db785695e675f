//! One-parameter unimodal families `mu * f(x)` on the unit interval.
//!
//! A family is fixed by its shape function `f`, normalised so that
//! `f(0) = f(1) = 0` and `f(c) = 1` at the single critical point `c`. The
//! parameter `mu` in `[0, 1]` scales the map, so `mu * f(c) = mu` is the
//! critical value. Derivatives are supplied analytically by each family.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{KneadError, Result};

/// Values escaping [0, 1] by at most this much are clamped back.
pub const CLAMP_SLACK: f64 = 1e-12;

/// Contract for a unimodal shape `f` with analytic derivatives.
///
/// Implementors must satisfy `f(0) = f(1) = 0`, `f(c) = 1`, `f` strictly
/// increasing on `[0, c]` and strictly decreasing on `[c, 1]`.
pub trait UnimodalFamily: Send + Sync {
    fn name(&self) -> &str;

    /// Critical point `c` in (0, 1).
    fn critical_point(&self) -> f64;

    fn shape(&self, x: f64) -> f64;
    fn shape_d1(&self, x: f64) -> f64;
    fn shape_d2(&self, x: f64) -> f64;
    fn shape_d3(&self, x: f64) -> f64;

    /// `mu * f(x)`.
    #[inline]
    fn eval(&self, mu: f64, x: f64) -> f64 {
        mu * self.shape(x)
    }

    /// x-derivative of `mu * f` of order 1, 2 or 3.
    fn deriv(&self, mu: f64, x: f64, order: u8) -> f64 {
        match order {
            0 => mu * self.shape(x),
            1 => mu * self.shape_d1(x),
            2 => mu * self.shape_d2(x),
            3 => mu * self.shape_d3(x),
            _ => panic!("derivative order {order} not supported"),
        }
    }
}

/// The two families shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinFamily {
    /// `f(x) = 4 x (1 - x)`
    Logistic,
    /// `f(x) = sin(pi x)`
    Sine,
}

impl BuiltinFamily {
    pub const ALL: [BuiltinFamily; 2] = [BuiltinFamily::Logistic, BuiltinFamily::Sine];
}

impl UnimodalFamily for BuiltinFamily {
    fn name(&self) -> &str {
        match self {
            BuiltinFamily::Logistic => "logistic",
            BuiltinFamily::Sine => "sine",
        }
    }

    fn critical_point(&self) -> f64 {
        0.5
    }

    #[inline]
    fn shape(&self, x: f64) -> f64 {
        match self {
            BuiltinFamily::Logistic => 4.0 * x * (1.0 - x),
            BuiltinFamily::Sine => (PI * x).sin(),
        }
    }

    #[inline]
    fn shape_d1(&self, x: f64) -> f64 {
        match self {
            BuiltinFamily::Logistic => 4.0 - 8.0 * x,
            BuiltinFamily::Sine => PI * (PI * x).cos(),
        }
    }

    #[inline]
    fn shape_d2(&self, x: f64) -> f64 {
        match self {
            BuiltinFamily::Logistic => -8.0,
            BuiltinFamily::Sine => -PI * PI * (PI * x).sin(),
        }
    }

    #[inline]
    fn shape_d3(&self, x: f64) -> f64 {
        match self {
            BuiltinFamily::Logistic => 0.0,
            BuiltinFamily::Sine => -PI * PI * PI * (PI * x).cos(),
        }
    }
}

impl fmt::Display for BuiltinFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinFamily {
    type Err = KneadError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logistic" => Ok(BuiltinFamily::Logistic),
            "sine" => Ok(BuiltinFamily::Sine),
            other => Err(KneadError::InvalidArgument(format!(
                "unknown family {other:?} (expected \"logistic\" or \"sine\")"
            ))),
        }
    }
}

/// Checks that `value` lies in [0, 1], clamping rounding-sized escapes.
pub fn check_unit(what: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else if (-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&value) {
        Ok(value.clamp(0.0, 1.0))
    } else {
        Err(KneadError::Domain { what, value })
    }
}

/// One applied map step, clamped to [0, 1].
#[inline]
pub(crate) fn step<F: UnimodalFamily + ?Sized>(fam: &F, mu: f64, x: f64) -> Result<f64> {
    check_unit("orbit value", fam.eval(mu, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub index: usize,
    pub value: f64,
}

/// Orbit `x0, f(x0), ..., f^n(x0)` of `mu * f`.
pub fn iterate<F: UnimodalFamily + ?Sized>(
    fam: &F,
    mu: f64,
    x0: f64,
    n: usize,
) -> Result<Vec<OrbitPoint>> {
    let mu = check_unit("mu", mu)?;
    let mut x = check_unit("x0", x0)?;
    let mut orbit = Vec::with_capacity(n + 1);
    orbit.push(OrbitPoint { index: 0, value: x });
    for index in 1..=n {
        x = step(fam, mu, x)?;
        orbit.push(OrbitPoint { index, value: x });
    }
    Ok(orbit)
}

/// `f^n_mu(x)` without materialising the orbit.
pub fn iterate_value<F: UnimodalFamily + ?Sized>(
    fam: &F,
    mu: f64,
    x0: f64,
    n: usize,
) -> Result<f64> {
    let mu = check_unit("mu", mu)?;
    let mut x = check_unit("x0", x0)?;
    for _ in 0..n {
        x = step(fam, mu, x)?;
    }
    Ok(x)
}

/// Derivative of `f^n_mu` at `x` by the chain rule: the product of
/// `mu * f'` over the first `n` orbit points.
pub fn iterate_derivative<F: UnimodalFamily + ?Sized>(
    fam: &F,
    mu: f64,
    x: f64,
    n: usize,
) -> Result<f64> {
    if n == 0 {
        return Err(KneadError::InvalidArgument(
            "iterate_derivative needs n >= 1".into(),
        ));
    }
    let mu = check_unit("mu", mu)?;
    let mut x = check_unit("x", x)?;
    let mut product = 1.0;
    for _ in 0..n {
        product *= fam.deriv(mu, x, 1);
        x = step(fam, mu, x)?;
    }
    Ok(product)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn values(orbit: &[OrbitPoint]) -> Vec<f64> {
        orbit.iter().map(|p| p.value).collect()
    }

    #[test]
    fn iterate_examples() {
        use BuiltinFamily::*;
        assert_eq!(
            values(&iterate(&Logistic, 1.0, 0.5, 2).unwrap()),
            vec![0.5, 1.0, 0.0]
        );
        assert_eq!(
            values(&iterate(&Logistic, 0.5, 0.5, 3).unwrap()),
            vec![0.5; 4]
        );
        assert_eq!(
            values(&iterate(&Sine, 0.5, 0.5, 1).unwrap()),
            vec![0.5, 0.5]
        );
        let v = values(&iterate(&Logistic, 0.9, 0.5, 2).unwrap());
        assert!(close(v[1], 0.9, 1e-15));
        assert!(close(v[2], 0.324, 1e-14));
    }

    #[test]
    fn iterate_rejects_out_of_domain() {
        let fam = BuiltinFamily::Logistic;
        assert!(matches!(
            iterate(&fam, 1.2, 0.5, 1),
            Err(KneadError::Domain { what: "mu", .. })
        ));
        assert!(matches!(
            iterate(&fam, 0.5, -0.1, 1),
            Err(KneadError::Domain { what: "x0", .. })
        ));
        // rounding-sized escapes are clamped
        let orbit = iterate(&fam, 1.0 + 1e-13, 0.5, 1).unwrap();
        assert_eq!(orbit[1].value, 1.0);
    }

    #[test]
    fn indices_increase() {
        let orbit = iterate(&BuiltinFamily::Sine, 0.93, 0.2, 10).unwrap();
        for (i, p) in orbit.iter().enumerate() {
            assert_eq!(p.index, i);
            assert!((0.0..=1.0).contains(&p.value));
        }
    }

    #[test]
    fn derivative_examples() {
        let fam = BuiltinFamily::Logistic;
        assert_eq!(iterate_derivative(&fam, 1.0, 0.5, 1).unwrap(), 0.0);
        assert!(close(
            iterate_derivative(&fam, 1.0, 0.25, 1).unwrap(),
            2.0,
            1e-15
        ));
        let h = 1e-6;
        let fd = (iterate_value(&fam, 1.0, 0.25 + h, 2).unwrap()
            - iterate_value(&fam, 1.0, 0.25 - h, 2).unwrap())
            / (2.0 * h);
        assert!(close(
            iterate_derivative(&fam, 1.0, 0.25, 2).unwrap(),
            fd,
            1e-6
        ));
        assert!(iterate_derivative(&fam, 1.0, 0.25, 0).is_err());
    }

    #[test]
    fn derivative_sign_counts_right_half_visits() {
        let fam = BuiltinFamily::Sine;
        let (mu, x0, n) = (0.97, 0.123, 7);
        let orbit = iterate(&fam, mu, x0, n).unwrap();
        let rights = orbit[..n].iter().filter(|p| p.value > 0.5).count();
        let d = iterate_derivative(&fam, mu, x0, n).unwrap();
        assert_eq!(d.signum(), if rights % 2 == 0 { 1.0 } else { -1.0 });
    }

    #[test]
    fn normalisation() {
        for fam in BuiltinFamily::ALL {
            let c = fam.critical_point();
            assert!(fam.shape(0.0).abs() < 1e-15);
            assert!(fam.shape(1.0).abs() < 1e-15);
            assert_eq!(fam.shape(c), 1.0);
            for i in 0..=1000 {
                let mu = i as f64 / 1000.0;
                assert!((fam.eval(mu, c) - mu).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn unimodal_on_grid() {
        for fam in BuiltinFamily::ALL {
            let c = fam.critical_point();
            let n = 10_000;
            let xs: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
            for w in xs.windows(2) {
                let (a, b) = (fam.shape(w[0]), fam.shape(w[1]));
                if w[1] <= c {
                    assert!(b >= a, "{fam} not increasing at {}", w[0]);
                } else if w[0] >= c {
                    assert!(b <= a, "{fam} not decreasing at {}", w[0]);
                }
                assert!((0.0..=1.0).contains(&a));
            }
        }
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let h = 1e-5;
        for fam in BuiltinFamily::ALL {
            for i in 1..20 {
                let x = i as f64 / 20.0;
                let fd1 = (fam.shape(x + h) - fam.shape(x - h)) / (2.0 * h);
                let fd2 = (fam.shape_d1(x + h) - fam.shape_d1(x - h)) / (2.0 * h);
                let fd3 = (fam.shape_d2(x + h) - fam.shape_d2(x - h)) / (2.0 * h);
                assert!(close(fam.shape_d1(x), fd1, 1e-7));
                assert!(close(fam.shape_d2(x), fd2, 1e-6));
                assert!(close(fam.shape_d3(x), fd3, 1e-5));
            }
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!(
            "sine".parse::<BuiltinFamily>().unwrap(),
            BuiltinFamily::Sine
        );
        assert!("tent".parse::<BuiltinFamily>().is_err());
    }
}
