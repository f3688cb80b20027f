//! Haar-measure quadrature on truncated tori and the metrics built on it.
//!
//! The default rule is the tensor product of equal-weight averages over the
//! N-th roots of unity per axis. That rule integrates trigonometric
//! polynomials of per-axis degree < N exactly, so character orthogonality,
//! Parseval sums and Fourier coefficients of polynomial weights carry no
//! quadrature error at all. Non-polynomial integrands (log(1+|F|), log|F|)
//! converge fast and are cross-checked by grid doubling where it matters.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bohr::{lift, DirichletSeries, LiftedPolynomial};
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// Hard cap on tensor-grid size; larger requests are pushed to `qmc_integral`.
pub const NODE_BUDGET: u64 = 10_000_000;

/// Clamp floor for `log|F|` integrands.
pub const LOG_CLAMP: f64 = 1e-14;

/// Korobov generator used by the rank-1 lattice estimator.
pub const KOROBOV_A: u64 = 17797;

const CHUNK: usize = 8192;
const PARALLEL_THRESHOLD: u64 = 1 << 16;

/// Tensor grid on the k-torus: N-th roots of unity on every axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadratureGrid {
    k: usize,
    nodes_per_axis: usize,
}

impl QuadratureGrid {
    pub fn new(k: usize, nodes_per_axis: usize) -> Result<Self> {
        if nodes_per_axis == 0 {
            return Err(Error::Invalid("nodes_per_axis must be >= 1".into()));
        }
        let nodes = (nodes_per_axis as u128).checked_pow(k.max(1) as u32);
        match nodes {
            Some(n) if n <= NODE_BUDGET as u128 => Ok(QuadratureGrid { k, nodes_per_axis }),
            n => Err(Error::GridBudget {
                nodes: n.unwrap_or(u128::MAX),
                budget: NODE_BUDGET,
            }),
        }
    }

    /// Default sizing: generous in low dimension, budget-limited beyond.
    /// `exact_axis_degree` is the largest per-axis trig degree the caller
    /// needs integrated exactly.
    pub fn auto(k: usize, exact_axis_degree: u32) -> Result<Self> {
        let default_n: usize = match k {
            0 | 1 => 65_536,
            2 => 1_024,
            3 => 181,
            _ => (NODE_BUDGET as f64).powf(1.0 / k as f64).floor() as usize,
        };
        let need = exact_axis_degree as usize + 1;
        let n = default_n.max(need);
        if (n as u128).pow(k.max(1) as u32) > NODE_BUDGET as u128 {
            if (need as u128).pow(k.max(1) as u32) > NODE_BUDGET as u128 {
                return Err(Error::GridBudget {
                    nodes: (need as u128).pow(k.max(1) as u32),
                    budget: NODE_BUDGET,
                });
            }
            let mut n = (NODE_BUDGET as f64).powf(1.0 / k as f64).floor() as usize;
            n = n.max(need);
            return QuadratureGrid::new(k, n);
        }
        QuadratureGrid::new(k, n)
    }

    /// Coarser default used inside r/sigma/k profiles, where many integrals
    /// of the same family are compared against each other.
    pub fn profile(k: usize, exact_axis_degree: u32) -> Result<Self> {
        let default_n: usize = match k {
            0 | 1 => 4_096,
            2 => 256,
            3 => 64,
            _ => (2_000_000f64).powf(1.0 / k as f64).floor() as usize,
        };
        QuadratureGrid::new(k, default_n.max(exact_axis_degree as usize + 1))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.nodes_per_axis
    }

    pub fn total_nodes(&self) -> u64 {
        (self.nodes_per_axis as u64).pow(self.k.max(1) as u32)
    }

    fn halved(&self) -> QuadratureGrid {
        QuadratureGrid {
            k: self.k,
            nodes_per_axis: (self.nodes_per_axis / 2).max(1),
        }
    }
}

/// Pointwise real map applied to the integrand value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PointTransform {
    /// log(1 + |z|)
    Log1pAbs,
    /// |z|^p
    AbsPow(f64),
    /// log(max(|z|, clamp))
    LogAbsClamped,
    /// Re z (identity on real-valued integrands)
    Real,
}

impl PointTransform {
    #[inline]
    pub fn apply(self, z: Complex64) -> f64 {
        match self {
            PointTransform::Log1pAbs => z.norm().ln_1p(),
            PointTransform::AbsPow(p) => z.norm().powf(p),
            PointTransform::LogAbsClamped => z.norm().max(LOG_CLAMP).ln(),
            PointTransform::Real => z.re,
        }
    }
}

/// Value with an error estimate attached.
#[derive(Clone, Copy, Debug)]
pub struct MetricReport {
    pub value: f64,
    pub error: f64,
    pub nodes: u64,
    pub converged: bool,
}

// ---------------------------------------------------------------------------
// tensor-grid evaluation
// ---------------------------------------------------------------------------

/// Compiled polynomial for grid sweeps: every monomial keeps integer phase
/// increments per axis, so node values need no transcendental calls.
struct PolyEval {
    coefs: Vec<Complex64>,
    exps: Vec<Vec<(usize, usize)>>, // (axis, exponent), axes 0-based
    k: usize,
    n: usize,
    roots: Vec<Complex64>,
}

impl PolyEval {
    fn new(f: &LiftedPolynomial, grid: &QuadratureGrid) -> Self {
        let n = grid.nodes_per_axis;
        let roots: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64))
            .collect();
        let mut coefs = Vec::with_capacity(f.len());
        let mut exps = Vec::with_capacity(f.len());
        for (alpha, c) in f.monomials() {
            coefs.push(c);
            exps.push(
                alpha
                    .entries()
                    .iter()
                    .map(|&(p, e)| (p as usize - 1, e as usize % n))
                    .collect(),
            );
        }
        PolyEval {
            coefs,
            exps,
            k: grid.k.max(1),
            n,
            roots,
        }
    }

    /// Sum of `map(F(node))` over the flat node range `[start, end)`.
    fn reduce_range<M: Fn(Complex64) -> f64>(&self, start: u64, end: u64, map: &M) -> f64 {
        let mut digits = vec![0usize; self.k.max(1)];
        let mut idx = start;
        let mut rem = start;
        for j in (0..self.k).rev() {
            digits[j] = (rem % self.n as u64) as usize;
            rem /= self.n as u64;
        }
        let mut phases: Vec<usize> = self.phases_of(&digits);
        let mut buf = Vec::with_capacity(CHUNK.min((end - start) as usize));
        let mut total = 0.0;
        while idx < end {
            let mut v = Complex64::new(0.0, 0.0);
            for (c, ph) in self.coefs.iter().zip(phases.iter()) {
                v += c * self.roots[*ph];
            }
            buf.push(map(v));
            if buf.len() == CHUNK {
                total += pairwise_sum(&buf);
                buf.clear();
            }
            idx += 1;
            if idx < end {
                // advance odometer: fast path bumps the last axis only
                let last = self.k - 1;
                digits[last] += 1;
                if digits[last] == self.n {
                    let mut j = last;
                    loop {
                        digits[j] = 0;
                        if j == 0 {
                            break;
                        }
                        j -= 1;
                        digits[j] += 1;
                        if digits[j] < self.n {
                            break;
                        }
                    }
                    phases = self.phases_of(&digits);
                } else {
                    for (ph, exp) in phases.iter_mut().zip(self.exps.iter()) {
                        for &(axis, e) in exp {
                            if axis == last {
                                *ph += e;
                                if *ph >= self.n {
                                    *ph -= self.n;
                                }
                            }
                        }
                    }
                }
            }
        }
        total + pairwise_sum(&buf)
    }

    fn phases_of(&self, digits: &[usize]) -> Vec<usize> {
        self.exps
            .iter()
            .map(|exp| {
                exp.iter()
                    .map(|&(axis, e)| (digits[axis] * e) % self.n)
                    .sum::<usize>()
                    % self.n
            })
            .collect()
    }
}

fn grid_reduce_poly<M: Fn(Complex64) -> f64 + Sync>(
    f: &LiftedPolynomial,
    grid: &QuadratureGrid,
    map: M,
) -> f64 {
    let eval = PolyEval::new(f, grid);
    let total = grid.total_nodes();
    let sum = if total >= PARALLEL_THRESHOLD {
        let chunks: u64 = total.div_ceil(CHUNK as u64);
        let partials: Vec<f64> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * CHUNK as u64;
                let end = (start + CHUNK as u64).min(total);
                eval.reduce_range(start, end, &map)
            })
            .collect();
        pairwise_sum(&partials)
    } else {
        eval.reduce_range(0, total, &map)
    };
    sum / total as f64
}

fn grid_reduce_fn<F, M>(f: &F, grid: &QuadratureGrid, map: M) -> f64
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
    M: Fn(Complex64) -> f64 + Sync,
{
    let n = grid.nodes_per_axis;
    let k = grid.k.max(1);
    let roots: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64))
        .collect();
    let total = grid.total_nodes();
    let reduce_range = |start: u64, end: u64| -> f64 {
        let mut digits = vec![0usize; k];
        let mut rem = start;
        for j in (0..k).rev() {
            digits[j] = (rem % n as u64) as usize;
            rem /= n as u64;
        }
        let mut coords: Vec<Complex64> = digits.iter().map(|&d| roots[d]).collect();
        let mut buf = Vec::with_capacity(CHUNK.min((end - start) as usize));
        let mut total_sum = 0.0;
        let mut idx = start;
        while idx < end {
            buf.push(map(f(&coords)));
            if buf.len() == CHUNK {
                total_sum += pairwise_sum(&buf);
                buf.clear();
            }
            idx += 1;
            if idx < end {
                let mut j = k - 1;
                loop {
                    digits[j] += 1;
                    if digits[j] < n {
                        coords[j] = roots[digits[j]];
                        break;
                    }
                    digits[j] = 0;
                    coords[j] = roots[0];
                    if j == 0 {
                        break;
                    }
                    j -= 1;
                }
            }
        }
        total_sum + pairwise_sum(&buf)
    };
    let sum = if total >= PARALLEL_THRESHOLD {
        let chunks: u64 = total.div_ceil(CHUNK as u64);
        let partials: Vec<f64> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * CHUNK as u64;
                let end = (start + CHUNK as u64).min(total);
                reduce_range(start, end)
            })
            .collect();
        pairwise_sum(&partials)
    } else {
        reduce_range(0, total)
    };
    sum / total as f64
}

// ---------------------------------------------------------------------------
// public integrals
// ---------------------------------------------------------------------------

/// Plain Haar average of a polynomial; exact when per-axis degree < N.
pub fn haar_mean(f: &LiftedPolynomial, grid: &QuadratureGrid) -> Complex64 {
    let re = grid_reduce_poly(f, grid, |z| z.re);
    let im = grid_reduce_poly(f, grid, |z| z.im);
    Complex64::new(re, im)
}

/// Haar average of `transform(F(w))` over the tensor grid.
pub fn haar_integral(f: &LiftedPolynomial, grid: &QuadratureGrid, tr: PointTransform) -> f64 {
    grid_reduce_poly(f, grid, move |z| tr.apply(z))
}

/// Same for an arbitrary callable on the k-torus.
pub fn haar_integral_fn<F>(f: F, grid: &QuadratureGrid, tr: PointTransform) -> f64
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    grid_reduce_fn(&f, grid, move |z| tr.apply(z))
}

/// Randomized rank-1 lattice estimate for dimensions beyond the grid budget.
/// Deterministic for a fixed seed; the error field is the standard error over
/// the random shifts.
pub fn qmc_integral<F>(f: F, k: usize, n: usize, seed: u64) -> Result<MetricReport>
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    qmc_integral_with_generator(f, k, n, seed, KOROBOV_A)
}

pub fn qmc_integral_with_generator<F>(
    f: F,
    k: usize,
    n: usize,
    seed: u64,
    generator: u64,
) -> Result<MetricReport>
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    if n < 2 {
        return Err(Error::Invalid("qmc_integral needs N >= 2".into()));
    }
    const SHIFTS: usize = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Korobov direction z_j = a^j mod n
    let mut z = Vec::with_capacity(k);
    let mut acc = 1u64;
    for _ in 0..k {
        z.push(acc % n as u64);
        acc = acc.wrapping_mul(generator) % n as u64;
    }
    let mut estimates = Vec::with_capacity(SHIFTS);
    for _ in 0..SHIFTS {
        let shift: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
        let values: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let coords: Vec<Complex64> = (0..k)
                    .map(|j| {
                        let x = (i as f64 * z[j] as f64 / n as f64 + shift[j]).fract();
                        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x)
                    })
                    .collect();
                f(&coords)
            })
            .collect();
        estimates.push(pairwise_sum(&values) / n as f64);
    }
    let mean = pairwise_sum(&estimates) / SHIFTS as f64;
    let var = estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>()
        / (SHIFTS as f64 - 1.0);
    Ok(MetricReport {
        value: mean,
        error: (var / SHIFTS as f64).sqrt(),
        nodes: (n * SHIFTS) as u64,
        converged: true,
    })
}

// ---------------------------------------------------------------------------
// dilation and metrics
// ---------------------------------------------------------------------------

/// `F_[r]`: coefficient of `alpha` scaled by `r^(sum_j j*alpha_j)`.
pub fn radial_dilate(f: &LiftedPolynomial, r: f64) -> Result<LiftedPolynomial> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("dilation radius {r} outside [0,1]")));
    }
    Ok(LiftedPolynomial::from_monomials(f.monomials().map(
        |(a, c)| {
            let w = a.weighted_degree();
            (a.clone(), c * r.powi(w.min(i32::MAX as u64) as i32))
        },
    )))
}

fn default_grid(f: &LiftedPolynomial) -> Result<QuadratureGrid> {
    QuadratureGrid::auto(f.vars() as usize, f.max_axis_degree())
}

/// `sup_r` of the dilated log-integrals; polynomials are continuous up to the
/// boundary, so this is the boundary integral at r = 1.
pub fn metric_d0(f: &LiftedPolynomial) -> Result<f64> {
    metric_d0_with(f, &default_grid(f)?)
}

pub fn metric_d0_with(f: &LiftedPolynomial, grid: &QuadratureGrid) -> Result<f64> {
    Ok(haar_integral(f, grid, PointTransform::Log1pAbs))
}

/// `(∫ |F|^p dm)^{1/p}`.
pub fn metric_p(f: &LiftedPolynomial, p: f64) -> Result<f64> {
    if p <= 0.0 {
        return Err(Error::Domain(format!("metric_p needs p > 0, got {p}")));
    }
    // even integer p keeps |F|^p a trig polynomial: size the grid for exactness
    let exact_deg = if p.fract() == 0.0 && (p as u64) % 2 == 0 {
        f.max_axis_degree().saturating_mul(p as u32)
    } else {
        f.max_axis_degree()
    };
    let grid = QuadratureGrid::auto(f.vars() as usize, exact_deg)?;
    metric_p_with(f, p, &grid)
}

pub fn metric_p_with(f: &LiftedPolynomial, p: f64, grid: &QuadratureGrid) -> Result<f64> {
    Ok(haar_integral(f, grid, PointTransform::AbsPow(p)).powf(1.0 / p))
}

/// Log-integrals of the dilation family, one value per radius.
pub fn d0_profile(f: &LiftedPolynomial, radii: &[f64]) -> Result<Vec<f64>> {
    let grid = QuadratureGrid::profile(f.vars() as usize, f.max_axis_degree())?;
    d0_profile_with(f, radii, &grid)
}

pub fn d0_profile_with(
    f: &LiftedPolynomial,
    radii: &[f64],
    grid: &QuadratureGrid,
) -> Result<Vec<f64>> {
    for w in radii.windows(2) {
        if w[1] < w[0] {
            return Err(Error::Invalid("radii must be ascending".into()));
        }
    }
    radii
        .iter()
        .map(|&r| Ok(haar_integral(&radial_dilate(f, r)?, grid, PointTransform::Log1pAbs)))
        .collect()
}

/// Haar average of `log|F|` with the clamp floor, plus a grid-halving
/// consistency estimate.
pub fn log_modulus_integral(f: &LiftedPolynomial, grid: &QuadratureGrid) -> Result<MetricReport> {
    if f.is_empty() {
        return Err(Error::Domain("log integral of the zero polynomial".into()));
    }
    let value = haar_integral(f, grid, PointTransform::LogAbsClamped);
    let coarse = haar_integral(f, &grid.halved(), PointTransform::LogAbsClamped);
    Ok(MetricReport {
        value,
        error: (value - coarse).abs(),
        nodes: grid.total_nodes(),
        converged: true,
    })
}

/// `||f_sigma||_0` along a sigma ladder, via the Bohr lift.
pub fn sigma_profile(f: &DirichletSeries, sigmas: &[f64]) -> Result<Vec<f64>> {
    for w in sigmas.windows(2) {
        if w[1] < w[0] {
            return Err(Error::Invalid("sigmas must be ascending".into()));
        }
    }
    let lifted = lift(f);
    let grid = QuadratureGrid::profile(lifted.vars() as usize, lifted.max_axis_degree())?;
    sigmas
        .iter()
        .map(|&s| {
            let shifted = lift(&f.vertical_shift(s));
            Ok(haar_integral(&shifted, &grid, PointTransform::Log1pAbs))
        })
        .collect()
}

/// Log-integrals of the k-te Abschnitt ladder at a fixed sigma > 0.
/// All entries share one per-axis node count so values at different k are
/// directly comparable.
pub fn abschnitt_profile(f: &DirichletSeries, sigma: f64, ks: &[u32]) -> Result<Vec<f64>> {
    if sigma <= 0.0 {
        return Err(Error::Domain("abschnitt_profile needs sigma > 0".into()));
    }
    for w in ks.windows(2) {
        if w[1] < w[0] {
            return Err(Error::Invalid("ks must be ascending".into()));
        }
    }
    let shifted = lift(&f.vertical_shift(sigma));
    let kmax = ks.iter().copied().max().unwrap_or(0).min(shifted.vars());
    let grid_n = QuadratureGrid::profile(kmax as usize, shifted.max_axis_degree())?
        .nodes_per_axis();
    ks.iter()
        .map(|&k| {
            let cut = shifted.abschnitt(k);
            let kv = cut.vars() as usize;
            if kv == 0 {
                return Ok(cut.constant_term().norm().ln_1p());
            }
            let grid = QuadratureGrid::new(kv, grid_n)?;
            Ok(haar_integral(&cut, &grid, PointTransform::Log1pAbs))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// almost-periodic vertical-line averages
// ---------------------------------------------------------------------------

/// Doubling schedule for the vertical-line time average.
#[derive(Clone, Debug)]
pub struct LineAverageConfig {
    pub t_start: f64,
    pub t_max: f64,
    /// Cauchy stop: doubling ends early once successive stage values agree
    /// to this tolerance.
    pub tol: f64,
    /// Trapezoid step; `None` derives it from the series frequencies.
    pub dt: Option<f64>,
}

impl Default for LineAverageConfig {
    fn default() -> Self {
        LineAverageConfig {
            t_start: 64.0,
            t_max: 16384.0,
            tol: 0.0,
            dt: None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LineStage {
    pub t: f64,
    pub value: f64,
}

#[derive(Clone, Debug)]
pub struct LineAverageReport {
    pub stages: Vec<LineStage>,
    pub value: f64,
    pub cauchy_gap: f64,
    pub converged: bool,
    pub dt: f64,
}

/// Step small enough to resolve the top frequency `ln n_max` with more than
/// 8 points per period. The golden-ratio factor keeps the sampling grid
/// incommensurable with the series frequencies, so no harmonic aliases to a
/// standing offset of the mean.
pub fn default_line_step(f: &DirichletSeries) -> f64 {
    let max_ln = f
        .terms()
        .map(|(n, _)| (n as f64).ln())
        .fold(0.0f64, f64::max);
    if max_ln <= 0.0 {
        0.5
    } else {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        std::f64::consts::PI / (4.0 * phi * max_ln)
    }
}

/// Composite-trapezoid time average of `transform(|f(sigma + it)|)` over
/// `[-T, T]`, T running through the doubling schedule.
pub fn line_average(
    f: &DirichletSeries,
    sigma: f64,
    cfg: &LineAverageConfig,
    tr: PointTransform,
) -> Result<LineAverageReport> {
    if sigma < 0.0 {
        return Err(Error::Domain("line_average needs sigma >= 0".into()));
    }
    let dt = cfg.dt.unwrap_or_else(|| default_line_step(f));
    if !(dt > 0.0) || dt >= cfg.t_start {
        return Err(Error::Invalid(format!("bad line-average step {dt}")));
    }
    let max_ln = f
        .terms()
        .map(|(n, _)| (n as f64).ln())
        .fold(0.0f64, f64::max);
    if max_ln > 0.0 && dt > std::f64::consts::PI / (4.0 * max_ln) * (1.0 + 1e-12) {
        return Err(Error::Invalid(format!(
            "step {dt} undersamples the top frequency ln {max_ln:.3}"
        )));
    }
    let mut stages = Vec::new();
    let mut t = cfg.t_start;
    let mut cauchy = f64::INFINITY;
    let mut converged = false;
    while t <= cfg.t_max * (1.0 + 1e-12) {
        let value = window_mean(f, sigma, t, dt, tr);
        if let Some(prev) = stages.last() {
            let prev: &LineStage = prev;
            cauchy = (value - prev.value).abs();
        }
        stages.push(LineStage { t, value });
        if cfg.tol > 0.0 && cauchy < cfg.tol {
            converged = true;
            break;
        }
        t *= 2.0;
    }
    if cfg.tol == 0.0 {
        converged = true; // schedule ran to completion by request
    }
    let value = stages.last().map(|s| s.value).unwrap_or(0.0);
    Ok(LineAverageReport {
        stages,
        value,
        cauchy_gap: cauchy,
        converged,
        dt,
    })
}

fn window_mean(f: &DirichletSeries, sigma: f64, t_half: f64, dt: f64, tr: PointTransform) -> f64 {
    let m = ((2.0 * t_half) / dt).ceil() as usize;
    let step = 2.0 * t_half / m as f64;
    // trapezoid: half weights at the window ends
    let values: Vec<f64> = (0..=m)
        .into_par_iter()
        .map(|i| {
            let t = -t_half + step * i as f64;
            let v = tr.apply(f.evaluate_line(sigma, t));
            if i == 0 || i == m {
                0.5 * v
            } else {
                v
            }
        })
        .collect();
    pairwise_sum(&values) / m as f64
}
