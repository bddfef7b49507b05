//! Hermitian eigensolver: Householder reduction to real symmetric tridiagonal
//! form followed by implicit-shift QL.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Relative hermiticity gate applied before decomposition.
pub const HERMITICITY_TOL: f64 = 1e-12;

const QL_MAX_SWEEPS: usize = 60;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermEigen {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl HermEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V diag(values) V*`, the reassembly used by the functional calculus.
    pub fn reconstruct_with(&self, values: &[f64]) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &lambda) in values.iter().enumerate() {
                    acc += v[(i, k)] * v[(j, k)].conj() * lambda;
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
}

/// Checks the hermiticity gate and returns the symmetrized matrix `(H + H*)/2`.
pub fn symmetrize_checked(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    h.ensure_square()?;
    let tolerance = HERMITICITY_TOL * h.max_abs();
    let deviation = h.hermitian_deviation();
    if deviation > tolerance {
        return Err(Error::NotHermitian {
            deviation,
            tolerance,
        });
    }
    Ok(h.hermitian_part())
}

/// Full eigendecomposition with residual and orthonormality certification.
pub fn herm_eigen(h: &ComplexMatrix) -> Result<HermEigen> {
    let sym = symmetrize_checked(h)?;
    let eig = eigh(&sym)?;
    certify(&sym, &eig)?;
    Ok(eig)
}

/// Eigenvalues only, ascending.
pub fn herm_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let sym = symmetrize_checked(h)?;
    eigvalsh(&sym)
}

/// Decomposition of an exactly Hermitian matrix, without gating or certification.
pub(crate) fn eigh(h: &ComplexMatrix) -> Result<HermEigen> {
    let n = h.rows();
    let mut work = h.as_slice().to_vec();
    let tri = tridiagonalize(&mut work, n, true);
    let mut d = tri.diag;
    let mut e = tri.off;
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql(&mut d, &mut e, Some(&mut z), n)?;
    let q = tri.basis.expect("basis requested");

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| d[k]).collect();

    // V = Q Z, columns permuted into ascending order.
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        let q_row = &q[i * n..(i + 1) * n];
        for (col, &k) in order.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (p, &qv) in q_row.iter().enumerate() {
                acc += qv * z[p * n + k];
            }
            v[i * n + col] = acc;
        }
    }
    Ok(HermEigen {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_vec_unchecked(n, n, v),
    })
}

/// Eigenvalues of an exactly Hermitian matrix, ascending.
pub(crate) fn eigvalsh(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = h.rows();
    let mut work = h.as_slice().to_vec();
    let tri = tridiagonalize(&mut work, n, false);
    let mut d = tri.diag;
    let mut e = tri.off;
    tql(&mut d, &mut e, None, n)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

fn certify(h: &ComplexMatrix, eig: &HermEigen) -> Result<()> {
    let n = h.rows();
    let eps = f64::EPSILON;
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let residual_bound = 64.0 * n as f64 * eps * scale;
    for k in 0..n {
        let v = eig.vector(k);
        let hv = h.matvec(&v);
        let r: f64 = hv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b * eig.eigenvalues[k]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if r > residual_bound {
            return Err(Error::ConvergenceFailure(format!(
                "eigenpair {k} residual {r:e} exceeds {residual_bound:e}"
            )));
        }
    }
    let ortho_bound = 64.0 * n as f64 * eps;
    let vtv = eig.eigenvectors.adjoint().mul_unchecked(&eig.eigenvectors);
    let dev = (&vtv - &ComplexMatrix::identity(n)).max_abs();
    if dev > ortho_bound {
        return Err(Error::ConvergenceFailure(format!(
            "eigenvectors lose orthonormality: {dev:e} exceeds {ortho_bound:e}"
        )));
    }
    Ok(())
}

struct Tridiagonal {
    diag: Vec<f64>,
    /// `off[k]` couples `k` and `k+1`; `off[n-1]` is zero.
    off: Vec<f64>,
    /// Unitary `Q` (row-major) with `H = Q T Q*`, phases folded in.
    basis: Option<Vec<Complex64>>,
}

/// Reduces the Hermitian matrix stored in `a` to real symmetric tridiagonal
/// form. `a` is overwritten.
fn tridiagonalize(a: &mut [Complex64], n: usize, want_basis: bool) -> Tridiagonal {
    let zero = Complex64::new(0.0, 0.0);
    let mut reflectors: Vec<(usize, Vec<Complex64>, f64)> = Vec::new();
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let v = &mut v[..m];
        let p = &mut p[..m];
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = a[(k + 1 + i) * n + k];
        }
        let tail_sq: f64 = v[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail_sq == 0.0 {
            continue;
        }
        let x0 = v[0];
        let alpha = (x0.norm_sqr() + tail_sq).sqrt();
        let x0_abs = x0.norm();
        let phase = if x0_abs > 0.0 {
            x0 / x0_abs
        } else {
            Complex64::new(1.0, 0.0)
        };
        v[0] = x0 + phase * alpha;
        let v_norm_sq = v[0].norm_sqr() + tail_sq;
        let tau = 2.0 / v_norm_sq;

        // p = tau * T v, with T the trailing block.
        for i in 0..m {
            let row = &a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            let mut acc = zero;
            for (t, vj) in row.iter().zip(v.iter()) {
                acc += t * vj;
            }
            p[i] = acc * tau;
        }
        let vp: f64 = v
            .iter()
            .zip(p.iter())
            .map(|(vi, pi)| (vi.conj() * pi).re)
            .sum();
        let kappa = 0.5 * tau * vp;
        for (pi, vi) in p.iter_mut().zip(v.iter()) {
            *pi -= vi * kappa;
        }
        // T <- T - v p* - p v*
        for i in 0..m {
            let (vi, pi) = (v[i], p[i]);
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for (j, t) in row.iter_mut().enumerate() {
                *t -= vi * p[j].conj() + pi * v[j].conj();
            }
        }
        let sub = -phase * alpha;
        a[(k + 1) * n + k] = sub;
        a[k * n + k + 1] = sub.conj();
        for i in k + 2..n {
            a[i * n + k] = zero;
            a[k * n + i] = zero;
        }
        if want_basis {
            reflectors.push((k, v.to_vec(), tau));
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut off = vec![0.0; n];
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let e = a[(k + 1) * n + k];
        let mag = e.norm();
        off[k] = mag;
        phases[k + 1] = if mag > 0.0 {
            phases[k] * (e / mag)
        } else {
            phases[k]
        };
    }

    let basis = want_basis.then(|| {
        let mut q = vec![zero; n * n];
        for i in 0..n {
            q[i * n + i] = Complex64::new(1.0, 0.0);
        }
        for (k, v, tau) in &reflectors {
            let start = k + 1;
            for i in 0..n {
                let row = &mut q[i * n + start..i * n + n];
                let s: Complex64 = row.iter().zip(v).map(|(q, v)| q * v).sum::<Complex64>() * *tau;
                for (q, vj) in row.iter_mut().zip(v) {
                    *q -= s * vj.conj();
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                q[i * n + j] *= phases[j];
            }
        }
        q
    });

    Tridiagonal { diag, off, basis }
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix. Rotations are
/// accumulated into the columns of `z` (row-major, `n x n`) when given.
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>, n: usize) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_SWEEPS {
                return Err(Error::ConvergenceFailure(format!(
                    "QL iteration did not deflate eigenvalue {l} after {QL_MAX_SWEEPS} sweeps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let row = &mut z[k * n..(k + 1) * n];
                        let f = row[i + 1];
                        row[i + 1] = s * row[i] + c * f;
                        row[i] = c * row[i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
