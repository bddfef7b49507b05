use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Scalar functions `(f, g, g^-1)` for the functional chain: `f` continuous,
/// `g` increasing and concave, `g o f` increasing and convex on `[0, inf)`.
#[derive(Clone)]
pub struct FunctionPair {
    pub name: String,
    pub f: ScalarFn,
    pub g: ScalarFn,
    pub g_inverse: ScalarFn,
}

impl fmt::Debug for FunctionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionPair")
            .field("name", &self.name)
            .finish()
    }
}

const INVERSE_GRID: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 10.0];

/// `{0, 0.25, ..., 4}`
fn shape_grid() -> impl Iterator<Item = f64> + Clone {
    (0..=16).map(|k| k as f64 * 0.25)
}

/// `(2x + 1 - sqrt(4x + 1)) / 2`, the inverse of `x + sqrt(x)`.
pub fn inverse_x_plus_sqrt(x: f64) -> f64 {
    (2.0 * x + 1.0 - (4.0 * x + 1.0).sqrt()) / 2.0
}

impl FunctionPair {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g_inverse: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
            g: Arc::new(g),
            g_inverse: Arc::new(g_inverse),
        }
    }

    /// `f = g = id`; the chain collapses onto Kittaneh's estimate.
    pub fn identity() -> Self {
        Self::new("identity", |x| x, |x| x, |x| x)
    }

    /// `f(x) = x^r`, `g(x) = x + sqrt(x)`.
    pub fn power_sqrt(r: f64) -> Self {
        Self::new(
            format!("x^{r}, x+sqrt(x)"),
            move |x| x.powf(r),
            |x| x + x.sqrt(),
            inverse_x_plus_sqrt,
        )
    }

    pub fn compose(&self, x: f64) -> f64 {
        (self.g)((self.f)(x))
    }

    /// Necessary conditions on finite grids: `g^-1` inverts `g`, `g` is
    /// increasing and midpoint-concave, `g o f` is increasing and
    /// midpoint-convex, and `g^-1` is increasing. Passing cannot certify the
    /// hypotheses; failing refutes them.
    pub fn check_hypotheses(&self) -> Result<()> {
        for x in INVERSE_GRID {
            let back = (self.g_inverse)((self.g)(x));
            if !((back - x).abs() <= 1e-12 * x.max(1.0)) {
                return Err(Error::HypothesisFailed(format!(
                    "{}: g^-1(g({x})) = {back}",
                    self.name
                )));
            }
        }
        let grid: Vec<f64> = shape_grid().collect();
        let g: Vec<f64> = grid.iter().map(|&x| (self.g)(x)).collect();
        let h: Vec<f64> = grid.iter().map(|&x| self.compose(x)).collect();
        let gi: Vec<f64> = grid.iter().map(|&x| (self.g_inverse)(x)).collect();
        let slack = |vals: &[f64]| 1e-12 * vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let (sg, sh, si) = (slack(&g), slack(&h), slack(&gi));
        if g.iter().chain(&h).chain(&gi).any(|v| !v.is_finite()) {
            return Err(Error::HypothesisFailed(format!(
                "{}: non-finite value on the grid",
                self.name
            )));
        }
        for k in 0..grid.len() - 1 {
            if g[k + 1] < g[k] - sg {
                return Err(self.fail("g is not increasing", grid[k]));
            }
            if h[k + 1] < h[k] - sh {
                return Err(self.fail("g o f is not increasing", grid[k]));
            }
            if gi[k + 1] < gi[k] - si {
                return Err(self.fail("g^-1 is not increasing", grid[k]));
            }
        }
        for k in 1..grid.len() - 1 {
            if g[k] < 0.5 * (g[k - 1] + g[k + 1]) - sg {
                return Err(self.fail("g is not concave", grid[k]));
            }
            if h[k] > 0.5 * (h[k - 1] + h[k + 1]) + sh {
                return Err(self.fail("g o f is not convex", grid[k]));
            }
        }
        Ok(())
    }

    fn fail(&self, what: &str, at: f64) -> Error {
        Error::HypothesisFailed(format!("{}: {what} near x = {at}", self.name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_closed_form() {
        for x in [0.0, 0.5, 1.0, 2.0, 10.0, 123.4] {
            let g = x + f64::sqrt(x);
            assert!((inverse_x_plus_sqrt(g) - x).abs() <= 1e-12 * x.max(1.0));
        }
        // g(x) = 1 at x = ((sqrt 5 - 1)/2)^2 = (3 - sqrt 5)/2
        assert!((inverse_x_plus_sqrt(1.0) - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn standard_pairs_pass() {
        FunctionPair::identity().check_hypotheses().unwrap();
        for r in [2.0, 3.0, 4.0, 2.5] {
            FunctionPair::power_sqrt(r).check_hypotheses().unwrap();
        }
    }

    #[test]
    fn bad_pairs_fail() {
        // g convex
        let p = FunctionPair::new("sq", |x| x, |x| x * x, f64::sqrt);
        assert!(matches!(
            p.check_hypotheses(),
            Err(Error::HypothesisFailed(_))
        ));
        // wrong inverse
        let p = FunctionPair::new("bad-inverse", |x| x, |x| x, |x| 2.0 * x);
        assert!(matches!(
            p.check_hypotheses(),
            Err(Error::HypothesisFailed(_))
        ));
        // g o f concave: f = sqrt, g = id
        let p = FunctionPair::new("sqrt", f64::sqrt, |x| x, |x| x);
        assert!(matches!(
            p.check_hypotheses(),
            Err(Error::HypothesisFailed(_))
        ));
    }
}
