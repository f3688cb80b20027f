//! Dense Hermitian positive-definite solve, enough for the Gram systems.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Solves `A x = b` for Hermitian positive definite `A` (row-major, n x n)
/// by an in-place Cholesky factorization `A = L L^H`.
/// A non-positive pivot is reported as a degenerate weight.
pub fn solve_hermitian_pd(a: &[Complex64], b: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    let mut l = a.to_vec();
    // tolerance relative to the largest diagonal entry
    let scale = (0..n).map(|i| l[i * n + i].re).fold(0.0f64, f64::max);
    let floor = scale * 1e-13;
    for j in 0..n {
        let mut d = l[j * n + j].re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if !(d > floor) {
            return Err(Error::DegenerateWeight { row: j, pivot: d });
        }
        let dj = d.sqrt();
        l[j * n + j] = Complex64::new(dj, 0.0);
        for i in (j + 1)..n {
            let mut s = l[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / dj;
        }
    }
    // forward solve L y = b
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let t = l[i * n + k] * y[k];
            y[i] -= t;
        }
        y[i] /= l[i * n + i].re;
    }
    // back solve L^H x = y
    let mut x = y;
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let t = l[k * n + i].conj() * x[k];
            x[i] -= t;
        }
        x[i] /= l[i * n + i].re;
    }
    Ok(x)
}
