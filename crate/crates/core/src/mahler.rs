//! Exact-in-spirit evaluation of `∫ log|F| dm` for polynomials.
//!
//! Clamped grid quadrature of `log|F|` loses an O(1/N) term whenever the zero
//! set of `F` touches the torus, which is not good enough for the certified
//! lower bounds. Instead the integral is computed by slicing: after a
//! triangular monomial change of variables (a Haar-preserving torus
//! automorphism) the leading coefficient in the first variable is a single
//! monomial, and each one-variable slice integrates exactly through the
//! factorization of the slice polynomial over its roots. Only the bounded,
//! kink-free part `sum log+|root|` is left to the outer tensor average.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bohr::LiftedPolynomial;
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// Roots of `sum coeffs[i] z^i` by the Durand-Kerner iteration.
/// Deterministic; trailing zero coefficients must already be stripped.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    // strip exact zero roots for conditioning
    let low = coeffs
        .iter()
        .position(|c| c.norm_sqr() > 0.0)
        .unwrap_or(coeffs.len() - 1);
    let work = &coeffs[low..];
    let d = work.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); low];
    if d == 0 {
        return roots;
    }
    let lead = work[d];
    let monic: Vec<Complex64> = work.iter().map(|c| c / lead).collect();
    // Cauchy bound for the initial circle
    let bound = 1.0
        + monic[..d]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    let radius = bound.min(1e6).max(0.5);
    let golden = 0.618_033_988_749_895;
    let mut z: Vec<Complex64> = (0..d)
        .map(|i| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (i as f64 * golden + 0.257)))
        .collect();
    let eval = |x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    for _ in 0..600 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm_sqr() == 0.0 {
                // coincident iterates: nudge deterministically
                z[i] += Complex64::new(1e-8, 1e-8);
                continue;
            }
            let delta = eval(z[i]) / denom;
            z[i] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-14 * radius.max(1.0) {
            break;
        }
    }
    roots.extend(z);
    roots
}

/// `∫ log|F| dm` over the torus in the variables of `F`.
pub fn log_integral(f: &LiftedPolynomial) -> Result<f64> {
    if f.is_empty() {
        return Err(Error::Domain("log integral of the zero polynomial".into()));
    }
    // compact the variables actually used
    let mut positions: Vec<u32> = Vec::new();
    for (alpha, _) in f.monomials() {
        for &(p, _) in alpha.entries() {
            if !positions.contains(&p) {
                positions.push(p);
            }
        }
    }
    positions.sort_unstable();
    let k = positions.len();
    let support: Vec<(Vec<u32>, Complex64)> = f
        .monomials()
        .map(|(alpha, c)| {
            let dense = positions
                .iter()
                .map(|&p| alpha.exponent_at(p))
                .collect::<Vec<_>>();
            (dense, c)
        })
        .collect();
    log_integral_dense(&support, k)
}

fn log_integral_dense(support: &[(Vec<u32>, Complex64)], k: usize) -> Result<f64> {
    match k {
        0 => {
            let c: Complex64 = support.iter().map(|(_, c)| *c).sum();
            if c.norm_sqr() == 0.0 {
                return Err(Error::Domain("log integral of zero".into()));
            }
            Ok(c.norm().ln())
        }
        1 => {
            let d = support.iter().map(|(e, _)| e[0]).max().unwrap() as usize;
            let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
            for (e, c) in support {
                coeffs[e[0] as usize] += c;
            }
            Ok(univariate_log_mean(&coeffs))
        }
        _ => {
            // triangular substitution: e1' = e1 + m e2 + m^2 e3 + ...
            let m = 1 + support
                .iter()
                .flat_map(|(e, _)| e.iter().copied())
                .max()
                .unwrap() as u64;
            let sub: Vec<(u64, Vec<u32>, Complex64)> = support
                .iter()
                .map(|(e, c)| {
                    let mut e1 = 0u64;
                    let mut pw = 1u64;
                    for &x in e.iter() {
                        e1 += x as u64 * pw;
                        pw *= m;
                    }
                    (e1, e[1..].to_vec(), *c)
                })
                .collect();
            let deg = sub.iter().map(|(e1, _, _)| *e1).max().unwrap() as usize;
            let top: Vec<&(u64, Vec<u32>, Complex64)> =
                sub.iter().filter(|(e1, _, _)| *e1 as usize == deg).collect();
            debug_assert_eq!(top.len(), 1, "substitution leaves a unique vertex");
            let lead_mod = top[0].2.norm();

            let n_outer: usize = match k - 1 {
                1 => 4096,
                2 => 48,
                _ => 16,
            };
            let outer_nodes = (n_outer as u64).pow((k - 1) as u32);
            let roots_table: Vec<Complex64> = (0..n_outer)
                .map(|j| {
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n_outer as f64)
                })
                .collect();
            let partials: Vec<f64> = (0..outer_nodes)
                .into_par_iter()
                .map(|flat| {
                    let mut digits = vec![0usize; k - 1];
                    let mut rem = flat;
                    for j in (0..k - 1).rev() {
                        digits[j] = (rem % n_outer as u64) as usize;
                        rem /= n_outer as u64;
                    }
                    let w: Vec<Complex64> = digits.iter().map(|&d| roots_table[d]).collect();
                    let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
                    for (e1, rest, c) in &sub {
                        let mut v = *c;
                        for (j, &e) in rest.iter().enumerate() {
                            if e > 0 {
                                v *= w[j].powu(e);
                            }
                        }
                        coeffs[*e1 as usize] += v;
                    }
                    let roots = polynomial_roots(&coeffs);
                    roots
                        .iter()
                        .map(|r| {
                            let n = r.norm();
                            if n > 1.0 {
                                n.ln()
                            } else {
                                0.0
                            }
                        })
                        .sum::<f64>()
                })
                .collect();
            Ok(lead_mod.ln() + pairwise_sum(&partials) / outer_nodes as f64)
        }
    }
}

/// One-variable `∫ log|P| dm` through the factorization over roots.
fn univariate_log_mean(coeffs: &[Complex64]) -> f64 {
    let d = coeffs
        .iter()
        .rposition(|c| c.norm_sqr() > 0.0)
        .expect("nonzero polynomial");
    let coeffs = &coeffs[..=d];
    if d == 0 {
        return coeffs[0].norm().ln();
    }
    let roots = polynomial_roots(coeffs);
    let mut acc = coeffs[d].norm().ln();
    for r in roots {
        let n = r.norm();
        if n > 1.0 {
            acc += n.ln();
        }
    }
    acc
}
