//! Norms, polar absolute values and the Hermitian functional calculus.

use num_complex::Complex64;

use super::eigen::{eigh, eigvalsh, symmetrize_checked};
use super::matrix::ComplexMatrix;
use super::svd::{svd, SvdResult};
use crate::error::{Error, Result};

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(svd(a)?.max_singular_value())
}

/// Spectral norm of a Hermitian matrix as its largest eigenvalue modulus.
pub fn herm_norm(h: &ComplexMatrix) -> Result<f64> {
    let vals = eigvalsh(&symmetrize_checked(h)?)?;
    Ok(vals[0].abs().max(vals[vals.len() - 1].abs()))
}

/// Smallest eigenvalue, i.e. `inf <Hx, x>` over unit `x`.
pub fn m_min(h: &ComplexMatrix) -> Result<f64> {
    let vals = eigvalsh(&symmetrize_checked(h)?)?;
    Ok(vals[0])
}

/// `|A| = (A*A)^{1/2}`.
pub fn abs_left(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(PolarParts::new(a)?.abs_left())
}

/// `|A*| = (AA*)^{1/2}`.
pub fn abs_right(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(PolarParts::new(a)?.abs_right())
}

/// `f(H) = V f(Λ) V*`. Fails when `f` is non-finite at an eigenvalue.
pub fn apply_herm_fn(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let eig = eigh(&symmetrize_checked(h)?)?;
    let values = map_spectrum(&eig.eigenvalues, f)?;
    Ok(eig.reconstruct_with(&values))
}

fn map_spectrum(spectrum: &[f64], f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    spectrum
        .iter()
        .map(|&x| {
            let y = f(x);
            if y.is_finite() {
                Ok(y)
            } else {
                Err(Error::DomainError { value: x })
            }
        })
        .collect()
}

/// Cartesian decomposition `A = B + iC` with `B = (A + A*)/2`, `C = (A - A*)/(2i)`.
pub fn cartesian_decomp(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.ensure_square()?;
    let half_i = Complex64::new(0.0, -0.5);
    let b = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(a[(i, i)].re, 0.0)
        } else {
            (a[(i, j)] + a[(j, i)].conj()) * 0.5
        }
    });
    // (A - A*)/(2i) = -i/2 (A - A*)
    let c = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(a[(i, i)].im, 0.0)
        } else {
            (a[(i, j)] - a[(j, i)].conj()) * half_i
        }
    });
    Ok((b, c))
}

/// One SVD serving both `|A|` and `|A*|` and functions of them.
///
/// With `A = U Σ V*`, `f(|A|) = V f(Σ) V*` and `f(|A*|) = U f(Σ) U*`, so
/// scalar functions are applied directly to the singular values.
#[derive(Debug, Clone)]
pub struct PolarParts {
    svd: SvdResult,
}

impl PolarParts {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        a.ensure_square()?;
        Ok(Self { svd: svd(a)? })
    }

    pub fn from_svd(svd: SvdResult) -> Self {
        Self { svd }
    }

    pub fn svd(&self) -> &SvdResult {
        &self.svd
    }

    pub fn norm(&self) -> f64 {
        self.svd.max_singular_value()
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.svd.singular_values
    }

    pub fn abs_left(&self) -> ComplexMatrix {
        gram(&self.svd.right_vectors, &self.svd.singular_values)
    }

    pub fn abs_right(&self) -> ComplexMatrix {
        gram(&self.svd.left_vectors, &self.svd.singular_values)
    }

    /// `f(|A|)`.
    pub fn left_fn(&self, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        let values = map_spectrum(&self.svd.singular_values, f)?;
        Ok(gram(&self.svd.right_vectors, &values))
    }

    /// `f(|A*|)`.
    pub fn right_fn(&self, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        let values = map_spectrum(&self.svd.singular_values, f)?;
        Ok(gram(&self.svd.left_vectors, &values))
    }
}

/// `Q diag(values) Q*`, exactly Hermitian.
fn gram(q: &ComplexMatrix, values: &[f64]) -> ComplexMatrix {
    let n = q.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &s) in values.iter().enumerate() {
                if s != 0.0 {
                    acc += q[(i, k)] * q[(j, k)].conj() * s;
                }
            }
            if i == j {
                out[(i, i)] = Complex64::new(acc.re, 0.0);
            } else {
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
    }
    out
}
