//! Poisson kernels on the infinite torus, Poisson integrals, the Jensen
//! inequality gap, and the outer-function criterion.
//!
//! For a point `zeta` with finite support the kernel is the finite product of
//! one-variable Poisson kernels; its Fourier coefficients decay like
//! `|zeta_j|^m` per axis, so an N-node tensor grid integrates it with a
//! geometric error `|zeta_j|^N`.

use num_complex::Complex64;

use crate::bohr::{LiftedPolynomial, PolydiskPoint};
use crate::error::{Error, Result};
use crate::mahler;
use crate::torus::{haar_integral_fn, PointTransform, QuadratureGrid, LOG_CLAMP};

/// Default classification threshold for `is_outer`.
pub const OUTER_TOL: f64 = 1e-6;

/// Evaluation point for Poisson kernels, `|zeta_j| < 1` with finite support.
#[derive(Clone, Debug)]
pub struct PoissonPoint {
    point: PolydiskPoint,
}

impl PoissonPoint {
    pub fn new(point: PolydiskPoint) -> Self {
        PoissonPoint { point }
    }

    pub fn origin(k: usize) -> Self {
        PoissonPoint {
            point: PolydiskPoint::origin(k),
        }
    }

    pub fn coords(&self) -> &[Complex64] {
        self.point.coords()
    }

    pub fn polydisk_point(&self) -> &PolydiskPoint {
        &self.point
    }

    /// `||P_zeta||_inf = prod (1+|zeta_j|)/(1-|zeta_j|)`.
    pub fn kernel_sup(&self) -> f64 {
        self.coords()
            .iter()
            .map(|z| (1.0 + z.norm()) / (1.0 - z.norm()))
            .product()
    }
}

/// Product of one-variable kernels `(1-|z|^2)/|z - w|^2` over the support;
/// coordinates beyond the support contribute the factor 1.
pub fn kernel_eval(zeta: &PoissonPoint, w: &[Complex64]) -> f64 {
    let mut acc = 1.0;
    for (j, z) in zeta.coords().iter().enumerate() {
        if z.norm_sqr() == 0.0 {
            continue;
        }
        let wj = w.get(j).copied().unwrap_or(Complex64::new(1.0, 0.0));
        acc *= (1.0 - z.norm_sqr()) / (z - wj).norm_sqr();
    }
    acc
}

/// `∫ P_zeta * boundary dm` by tensor quadrature.
pub fn poisson_integral<F>(boundary: F, zeta: &PoissonPoint, grid: &QuadratureGrid) -> Complex64
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    let re = haar_integral_fn(
        |w| Complex64::new(kernel_eval(zeta, w) * boundary(w).re, 0.0),
        grid,
        PointTransform::Real,
    );
    let im = haar_integral_fn(
        |w| Complex64::new(kernel_eval(zeta, w) * boundary(w).im, 0.0),
        grid,
        PointTransform::Real,
    );
    Complex64::new(re, im)
}

/// `∫ P_zeta log|F| dm - log|F(zeta)|`; nonnegative up to quadrature error
/// for analytic `F`. Returns `+inf` when `F(zeta) = 0`.
pub fn jensen_gap(
    f: &LiftedPolynomial,
    zeta: &PoissonPoint,
    grid: &QuadratureGrid,
) -> Result<f64> {
    if f.is_empty() {
        return Err(Error::Domain("jensen gap of the zero polynomial".into()));
    }
    let at_zeta = f.evaluate(zeta.polydisk_point()).norm();
    if at_zeta == 0.0 {
        return Ok(f64::INFINITY);
    }
    let weighted = haar_integral_fn(
        |w| {
            let v = f.evaluate_at(w).norm().max(LOG_CLAMP).ln();
            Complex64::new(kernel_eval(zeta, w) * v, 0.0)
        },
        grid,
        PointTransform::Real,
    );
    Ok(weighted - at_zeta.ln())
}

/// Outer-criterion report: `gamma = ∫ log|F*| dm - log|F(0)|`.
#[derive(Clone, Copy, Debug)]
pub struct OuterReport {
    pub gamma: f64,
    pub outer: bool,
    pub tol: f64,
}

/// Computes the outer gap with the default threshold.
pub fn outer_gap(f: &LiftedPolynomial) -> Result<OuterReport> {
    outer_gap_with_tol(f, OUTER_TOL)
}

pub fn outer_gap_with_tol(f: &LiftedPolynomial, tol: f64) -> Result<OuterReport> {
    if f.is_empty() {
        return Err(Error::Domain("outer gap of the zero polynomial".into()));
    }
    let at_zero = f.constant_term().norm();
    if at_zero == 0.0 {
        // log|F(0)| = -inf: infinite gap, not outer
        return Ok(OuterReport {
            gamma: f64::INFINITY,
            outer: false,
            tol,
        });
    }
    let boundary = mahler::log_integral(f)?;
    let gamma = boundary - at_zero.ln();
    Ok(OuterReport {
        gamma,
        outer: gamma <= tol,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bohr::MultiIndex;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(monos: &[(&[u32], (f64, f64))]) -> LiftedPolynomial {
        LiftedPolynomial::from_monomials(
            monos
                .iter()
                .map(|(e, (re, im))| (MultiIndex::from_exponents(e), c(*re, *im))),
        )
    }

    fn pnt(coords: &[(f64, f64)]) -> PoissonPoint {
        PoissonPoint::new(
            PolydiskPoint::new(coords.iter().map(|&(re, im)| c(re, im)).collect()).unwrap(),
        )
    }

    #[test]
    fn kernel_values() {
        let origin = PoissonPoint::origin(2);
        assert_eq!(kernel_eval(&origin, &[c(1.0, 0.0), c(-1.0, 0.0)]), 1.0);

        let half = pnt(&[(0.5, 0.0)]);
        assert!((kernel_eval(&half, &[c(1.0, 0.0)]) - 3.0).abs() < 1e-15);
        assert!((kernel_eval(&half, &[c(-1.0, 0.0)]) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_normalization() {
        let zeta = pnt(&[(0.5, 0.2), (-0.3, 0.4)]);
        let grid = QuadratureGrid::new(2, 256).unwrap();
        let one = |_: &[Complex64]| c(1.0, 0.0);
        let v = poisson_integral(one, &zeta, &grid);
        assert!((v - c(1.0, 0.0)).norm() < 1e-10, "{v}");
    }

    #[test]
    fn harmonic_extension_of_re_z() {
        let zeta = pnt(&[(0.6, 0.0)]);
        let grid = QuadratureGrid::new(1, 512).unwrap();
        let v = poisson_integral(|w| Complex64::new(w[0].re, 0.0), &zeta, &grid);
        assert!((v.re - 0.6).abs() < 1e-10);

        // boundary |1+w|^2 at the origin: Haar mean 2
        let v = poisson_integral(
            |w| Complex64::new((c(1.0, 0.0) + w[0]).norm_sqr(), 0.0),
            &PoissonPoint::origin(1),
            &grid,
        );
        assert!((v.re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn jensen_gap_examples() {
        let grid = QuadratureGrid::new(1, 512).unwrap();
        let konst = poly(&[(&[], (0.0, -2.0))]);
        let g = jensen_gap(&konst, &PoissonPoint::origin(1), &grid).unwrap();
        assert!(g.abs() < 1e-12);

        // outer: equality at the origin
        let f = poly(&[(&[], (1.0, 0.0)), (&[1], (-0.5, 0.0))]);
        let g = jensen_gap(&f, &PoissonPoint::origin(1), &grid).unwrap();
        assert!(g.abs() < 1e-12, "{g}");

        // zero inside: gap log 2
        let f = poly(&[(&[1], (1.0, 0.0)), (&[], (-0.5, 0.0))]);
        let g = jensen_gap(&f, &PoissonPoint::origin(1), &grid).unwrap();
        assert!((g - 2f64.ln()).abs() < 1e-10, "{g}");

        // F(zeta) = 0: infinite flag
        let f = poly(&[(&[1], (1.0, 0.0)), (&[], (-0.5, 0.0))]);
        let g = jensen_gap(&f, &pnt(&[(0.5, 0.0)]), &grid).unwrap();
        assert!(g.is_infinite());
    }

    #[test]
    fn outer_gap_examples() {
        let one = poly(&[(&[], (1.0, 0.0))]);
        let r = outer_gap(&one).unwrap();
        assert!(r.gamma.abs() < 1e-14 && r.outer);

        let f = poly(&[(&[], (1.0, 0.0)), (&[1], (-0.5, 0.0))]);
        let r = outer_gap(&f).unwrap();
        assert!(r.gamma.abs() < 1e-12 && r.outer, "{r:?}");

        let f = poly(&[(&[1], (1.0, 0.0)), (&[], (-0.5, 0.0))]);
        let r = outer_gap(&f).unwrap();
        assert!((r.gamma - 2f64.ln()).abs() < 1e-10 && !r.outer, "{r:?}");

        // boundary zero is still outer
        let f = poly(&[(&[], (1.0, 0.0)), (&[1], (1.0, 0.0))]);
        let r = outer_gap(&f).unwrap();
        assert!(r.gamma.abs() < 1e-8 && r.outer, "{r:?}");

        // vanishing constant term: infinite gap, not an error
        let f = poly(&[(&[1], (1.0, 0.0))]);
        let r = outer_gap(&f).unwrap();
        assert!(r.gamma.is_infinite() && !r.outer);

        assert!(outer_gap(&LiftedPolynomial::new()).is_err());
    }

    #[test]
    fn gamma_is_multiplicative() {
        let f = poly(&[(&[], (1.0, 0.0)), (&[1], (0.3, 0.4)), (&[0, 1], (-0.2, 0.0))]);
        let g = poly(&[(&[], (0.8, -0.1)), (&[1, 1], (0.35, 0.0))]);
        let fg = &f * &g;
        let gf = outer_gap(&f).unwrap().gamma;
        let gg = outer_gap(&g).unwrap().gamma;
        let gfg = outer_gap(&fg).unwrap().gamma;
        assert!((gfg - gf - gg).abs() < 1e-9, "{gfg} vs {} ", gf + gg);
    }

    #[test]
    fn gamma_is_multiplicative_on_random_pairs() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mut rand_poly = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut f = LiftedPolynomial::constant(c(1.0 + rng.random::<f64>(), 0.0));
            for _ in 0..rng.random_range(1..=4usize) {
                let e = [rng.random_range(0..=2u32), rng.random_range(0..=2u32)];
                let re = rng.random::<f64>() - 0.5;
                let im = rng.random::<f64>() - 0.5;
                f.add_monomial(MultiIndex::from_exponents(&e), c(re, im));
            }
            f
        };
        for _ in 0..20 {
            let f = rand_poly(&mut rng);
            let g = rand_poly(&mut rng);
            let gf = outer_gap(&f).unwrap().gamma;
            let gg = outer_gap(&g).unwrap().gamma;
            let gfg = outer_gap(&(&f * &g)).unwrap().gamma;
            assert!(
                (gfg - gf - gg).abs() < 1e-8,
                "{gfg} vs {gf} + {gg}"
            );
        }
    }

    #[test]
    fn outer_products_stay_outer() {
        // zero-free on the closed polydisk and boundary-zero outer factors
        let candidates = [
            poly(&[(&[], (1.0, 0.0)), (&[1], (-0.5, 0.0))]),
            poly(&[(&[], (1.0, 0.0)), (&[1], (1.0, 0.0))]),
            poly(&[(&[], (2.0, 0.0)), (&[1, 1], (0.6, -0.3))]),
            poly(&[(&[], (1.0, 0.0)), (&[0, 1], (0.0, 0.9))]),
        ];
        for f in &candidates {
            assert!(outer_gap(f).unwrap().outer, "{f:?}");
        }
        for f in &candidates {
            for g in &candidates {
                let prod = f * g;
                assert!(outer_gap(&prod).unwrap().outer, "{prod:?}");
            }
        }
    }

    #[test]
    fn kernel_normalization_on_random_points() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let k = rng.random_range(1..=4usize);
            let n = match k {
                1 | 2 => 256usize,
                3 => 96,
                _ => 48,
            };
            let coords: Vec<Complex64> = (0..k)
                .map(|_| {
                    Complex64::from_polar(rng.random::<f64>() * 0.7, rng.random::<f64>() * 6.28)
                })
                .collect();
            // accumulated geometric aliasing bound, one term per axis
            let tol: f64 = coords.iter().map(|z| z.norm().powi(n as i32)).sum::<f64>() + 1e-12;
            let zeta = PoissonPoint::new(PolydiskPoint::new(coords).unwrap());
            let grid = QuadratureGrid::new(k, n).unwrap();
            let v = poisson_integral(|_| c(1.0, 0.0), &zeta, &grid);
            assert!(
                (v - c(1.0, 0.0)).norm() <= 10.0 * tol.max(1e-12),
                "{v} vs 1, tol {tol:.2e}"
            );
        }
    }
}
