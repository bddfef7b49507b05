//! One-sided (Hestenes) Jacobi SVD for dense complex matrices.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U diag(s) V*`, singular values descending.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub singular_values: Vec<f64>,
    /// `rows x k` with orthonormal columns, `k = min(rows, cols)`.
    pub left_vectors: ComplexMatrix,
    /// `cols x k` with orthonormal columns.
    pub right_vectors: ComplexMatrix,
}

impl SvdResult {
    pub fn max_singular_value(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// `U diag(s) V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (u, v) = (&self.left_vectors, &self.right_vectors);
        ComplexMatrix::from_fn(u.rows(), v.rows(), |i, j| {
            self.singular_values
                .iter()
                .enumerate()
                .map(|(k, &s)| u[(i, k)] * v[(j, k)].conj() * s)
                .sum()
        })
    }
}

pub fn svd(a: &ComplexMatrix) -> Result<SvdResult> {
    if a.rows() >= a.cols() {
        jacobi_svd(a)
    } else {
        let t = jacobi_svd(&a.adjoint())?;
        Ok(SvdResult {
            singular_values: t.singular_values,
            left_vectors: t.right_vectors,
            right_vectors: t.left_vectors,
        })
    }
}

/// Requires `rows >= cols`.
fn jacobi_svd(a: &ComplexMatrix) -> Result<SvdResult> {
    let (m, n) = (a.rows(), a.cols());
    let zero = Complex64::new(0.0, 0.0);
    // column-major working copies
    let mut w: Vec<Complex64> = (0..n)
        .flat_map(|j| (0..m).map(move |i| (i, j)))
        .map(|(i, j)| a[(i, j)])
        .collect();
    let mut v = vec![zero; n * n];
    for j in 0..n {
        v[j * n + j] = Complex64::new(1.0, 0.0);
    }

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let (head, tail) = w.split_at_mut(q * m);
                let wp = &mut head[p * m..(p + 1) * m];
                let wq = &mut tail[..m];
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = zero;
                for (x, y) in wp.iter().zip(wq.iter()) {
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (x, y) in wp.iter_mut().zip(wq.iter_mut()) {
                    let yq = *y * phase;
                    let xp = *x;
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
                let (vh, vt) = v.split_at_mut(q * n);
                let vp = &mut vh[p * n..(p + 1) * n];
                let vq = &mut vt[..n];
                for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                    let yq = *y * phase;
                    let xp = *x;
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::ConvergenceFailure(format!(
            "Jacobi SVD did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| {
            w[j * m..(j + 1) * m]
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let sigma_max = norms[order[0]];
    let negligible = n as f64 * f64::EPSILON * sigma_max;

    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut deferred = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        let s = norms[j];
        if s > negligible && s > 0.0 {
            u_cols.push(w[j * m..(j + 1) * m].iter().map(|z| z / s).collect());
        } else {
            u_cols.push(Vec::new());
            deferred.push(slot);
        }
    }
    for slot in deferred {
        let col = complete_orthonormal(&u_cols, m);
        u_cols[slot] = col;
    }

    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let left_vectors = ComplexMatrix::from_fn(m, n, |i, k| u_cols[k][i]);
    let right_vectors = ComplexMatrix::from_fn(n, n, |i, k| v[order[k] * n + i]);
    Ok(SvdResult {
        singular_values,
        left_vectors,
        right_vectors,
    })
}

/// A unit vector orthogonal to every non-empty column in `cols`.
fn complete_orthonormal(cols: &[Vec<Complex64>], m: usize) -> Vec<Complex64> {
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for e in 0..m {
        let mut x = vec![Complex64::new(0.0, 0.0); m];
        x[e] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for c in cols.iter().filter(|c| !c.is_empty()) {
                let proj: Complex64 = c.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
                for (xi, ci) in x.iter_mut().zip(c) {
                    *xi -= proj * ci;
                }
            }
        }
        let norm = super::matrix::vec_norm(&x);
        if norm > 0.5 {
            return x.into_iter().map(|z| z / norm).collect();
        }
        if best.as_ref().is_none_or(|(b, _)| norm > *b) {
            best = Some((norm, x));
        }
    }
    let (norm, x) = best.expect("m >= 1");
    x.into_iter().map(|z| z / norm).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn check_orthonormal(q: &ComplexMatrix, tol: f64) {
        let g = q.adjoint().mul_unchecked(q);
        let dev = (&g - &ComplexMatrix::identity(q.cols())).max_abs();
        assert!(dev < tol, "orthonormality deviation {dev:e}");
    }

    #[test]
    fn jordan_block_singular_values() {
        let j = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let s = svd(&j).unwrap();
        assert_eq!(s.singular_values, vec![1.0, 0.0]);
        check_orthonormal(&s.left_vectors, 1e-15);
        check_orthonormal(&s.right_vectors, 1e-15);
        assert!((&s.reconstruct() - &j).max_abs() < 1e-15);
    }

    #[test]
    fn dense_complex_reconstruction() {
        let n = 9;
        let a = ComplexMatrix::from_fn(n, n, |i, j| {
            c(((i * 3 + j) as f64).sin(), ((i + 2 * j) as f64).cos())
        });
        let s = svd(&a).unwrap();
        let bound = 64.0 * n as f64 * f64::EPSILON * a.frobenius_norm();
        assert!((&s.reconstruct() - &a).frobenius_norm() <= bound);
        assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
        check_orthonormal(&s.left_vectors, 1e-13);
        check_orthonormal(&s.right_vectors, 1e-13);
    }

    #[test]
    fn rank_deficient_and_wide() {
        // rank one: u v*
        let a = ComplexMatrix::from_fn(4, 4, |i, j| {
            c(1.0 + i as f64, 0.5) * c(0.0, 1.0 + j as f64).conj()
        });
        let s = svd(&a).unwrap();
        assert!(s.singular_values[1] < 1e-13 * s.singular_values[0]);
        check_orthonormal(&s.left_vectors, 1e-13);
        let wide = ComplexMatrix::from_fn(2, 5, |i, j| c((i + j) as f64, (i * j) as f64 - 1.0));
        let s = svd(&wide).unwrap();
        assert_eq!(s.left_vectors.rows(), 2);
        assert_eq!(s.right_vectors.rows(), 5);
        assert!((&s.reconstruct() - &wide).max_abs() < 1e-13);
    }

    #[test]
    fn zero_matrix() {
        let s = svd(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert!(s.singular_values.iter().all(|&x| x == 0.0));
        check_orthonormal(&s.left_vectors, 1e-15);
    }
}
