//! The truncated extremal problem
//! `S_d(K) = inf { ∫ |1-q|^p K dm : q(0) = 0, deg q <= d, q in k variables }`
//! with its certified interval `[exp ∫ log K dm, K^(0)]`.
//!
//! At p = 2 the problem is a Hermitian normal-equation solve over the Fourier
//! data of `K`; for general p > 1 the grid-discretized objective is minimized
//! by gradient descent with backtracking and an epsilon-smoothing
//! continuation, warm-started from the p = 2 solution. Grids follow the
//! exactness rule `nodes_per_axis >= 2d + deg K + 1`, so every Gram entry and
//! the p = 2 objective carry no quadrature error.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::bohr::{LiftedPolynomial, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg::solve_hermitian_pd;
use crate::mahler;
use crate::numeric::pairwise_sum;
use crate::poisson::{outer_gap, OuterReport};
use crate::torus::QuadratureGrid;

/// Exponent sequence with entries of either sign, e.g. a difference
/// `beta - alpha` of two multi-indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct SignedIndex {
    entries: Vec<(u32, i32)>,
}

impl SignedIndex {
    pub fn new(pairs: impl IntoIterator<Item = (u32, i32)>) -> Result<Self> {
        let mut map: BTreeMap<u32, i64> = BTreeMap::new();
        for (p, e) in pairs {
            if p == 0 {
                return Err(Error::Invalid("positions are 1-based".into()));
            }
            *map.entry(p).or_insert(0) += e as i64;
        }
        let mut entries = Vec::new();
        for (p, e) in map {
            if e != 0 {
                let e = i32::try_from(e)
                    .map_err(|_| Error::Invalid("signed exponent exceeds i32".into()))?;
                entries.push((p, e));
            }
        }
        Ok(SignedIndex { entries })
    }

    pub fn zero() -> Self {
        SignedIndex::default()
    }

    pub fn from_unsigned(alpha: &MultiIndex) -> Self {
        SignedIndex {
            entries: alpha
                .entries()
                .iter()
                .map(|&(p, e)| (p, e as i32))
                .collect(),
        }
    }

    /// `beta - alpha` componentwise.
    pub fn diff(beta: &MultiIndex, alpha: &MultiIndex) -> Self {
        let mut map: BTreeMap<u32, i32> = BTreeMap::new();
        for &(p, e) in beta.entries() {
            *map.entry(p).or_insert(0) += e as i32;
        }
        for &(p, e) in alpha.entries() {
            *map.entry(p).or_insert(0) -= e as i32;
        }
        SignedIndex {
            entries: map.into_iter().filter(|&(_, e)| e != 0).collect(),
        }
    }

    pub fn negate(&self) -> Self {
        SignedIndex {
            entries: self.entries.iter().map(|&(p, e)| (p, -e)).collect(),
        }
    }

    pub fn entries(&self) -> &[(u32, i32)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_position(&self) -> u32 {
        self.entries.last().map_or(0, |&(p, _)| p)
    }

    pub fn max_abs_exponent(&self) -> u32 {
        self.entries
            .iter()
            .map(|&(_, e)| e.unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

/// Nonnegative weight on the torus.
#[derive(Clone, Debug)]
pub enum WeightSpec {
    /// `K = |h|^p` for a nonzero polynomial `h`.
    ModulusPower { h: LiftedPolynomial, power: f64 },
    /// Hermitian Fourier table: `K = sum K^(alpha) e_alpha`, finitely many
    /// entries, `K^(-alpha) = conj K^(alpha)`.
    FourierTable { entries: BTreeMap<SignedIndex, Complex64> },
}

impl WeightSpec {
    pub fn modulus_power(h: LiftedPolynomial, power: f64) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::Domain("weight |h|^p needs h != 0".into()));
        }
        if !(power > 0.0) {
            return Err(Error::Domain("weight |h|^p needs p > 0".into()));
        }
        Ok(WeightSpec::ModulusPower { h, power })
    }

    /// Builds a Fourier table, filling and checking Hermitian symmetry.
    pub fn fourier_table(
        entries: impl IntoIterator<Item = (SignedIndex, Complex64)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<SignedIndex, Complex64> = BTreeMap::new();
        for (idx, v) in entries {
            map.insert(idx, v);
        }
        let mut full = map.clone();
        for (idx, v) in &map {
            let neg = idx.negate();
            match map.get(&neg) {
                Some(w) => {
                    if (w - v.conj()).norm() > 1e-12 * v.norm().max(1.0) {
                        return Err(Error::Invalid(format!(
                            "fourier table is not Hermitian at {idx:?}"
                        )));
                    }
                }
                None => {
                    full.insert(neg, v.conj());
                }
            }
        }
        match full.get(&SignedIndex::zero()) {
            Some(v) if v.re > 0.0 && v.im.abs() < 1e-12 * v.re => {}
            _ => return Err(Error::Domain("fourier table needs K^(0) > 0".into())),
        }
        Ok(WeightSpec::FourierTable { entries: full })
    }

    pub fn vars(&self) -> u32 {
        match self {
            WeightSpec::ModulusPower { h, .. } => h.vars(),
            WeightSpec::FourierTable { entries } => entries
                .keys()
                .map(|i| i.max_position())
                .max()
                .unwrap_or(0),
        }
    }

    /// Per-axis trig degree of `K` (for even powers, exact; otherwise a
    /// sizing heuristic).
    pub fn axis_degree(&self) -> u32 {
        match self {
            WeightSpec::ModulusPower { h, power } => {
                h.max_axis_degree().saturating_mul(power.ceil() as u32)
            }
            WeightSpec::FourierTable { entries } => entries
                .keys()
                .map(|i| i.max_abs_exponent())
                .max()
                .unwrap_or(0),
        }
    }

    /// Pointwise value at a torus point.
    pub fn value_at(&self, w: &[Complex64]) -> f64 {
        match self {
            WeightSpec::ModulusPower { h, power } => h.evaluate_at(w).norm().powf(*power),
            WeightSpec::FourierTable { entries } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (idx, v) in entries {
                    let mut e = Complex64::new(1.0, 0.0);
                    for &(p, exp) in idx.entries() {
                        let z = w[p as usize - 1];
                        e *= if exp >= 0 {
                            z.powu(exp as u32)
                        } else {
                            z.conj().powu((-exp) as u32)
                        };
                    }
                    acc += v * e;
                }
                acc.re
            }
        }
    }

    /// `exp(∫ log K dm)` through the sliced-Jensen route: exact for modulus
    /// powers of polynomials, and for Fourier tables via the monomial shift
    /// that turns the trig polynomial into an analytic one of equal modulus.
    pub fn lower_bound(&self) -> Result<f64> {
        match self {
            WeightSpec::ModulusPower { h, power } => {
                Ok((power * mahler::log_integral(h)?).exp())
            }
            WeightSpec::FourierTable { entries } => {
                let mut shift: BTreeMap<u32, u32> = BTreeMap::new();
                for idx in entries.keys() {
                    for &(p, e) in idx.entries() {
                        if e < 0 {
                            let s = shift.entry(p).or_insert(0);
                            *s = (*s).max((-e) as u32);
                        }
                    }
                }
                let mut poly = LiftedPolynomial::new();
                for (idx, v) in entries {
                    let mut pairs: BTreeMap<u32, u32> = shift.clone();
                    for &(p, e) in idx.entries() {
                        let base = shift.get(&p).copied().unwrap_or(0) as i64;
                        let total = base + e as i64;
                        pairs.insert(p, u32::try_from(total).expect("shift covers negatives"));
                    }
                    let alpha = MultiIndex::new(pairs.into_iter().filter(|&(_, e)| e > 0))?;
                    poly.add_monomial(alpha, *v);
                }
                Ok(mahler::log_integral(&poly)?.exp())
            }
        }
    }
}

/// Grid data for one weight: node values plus exact character sums.
pub struct WeightOnGrid {
    grid: QuadratureGrid,
    values: Vec<f64>,
    roots: Vec<Complex64>,
    /// fraction of nodes where K is (numerically) zero
    pub zero_fraction: f64,
    pub min_value: f64,
}

impl WeightOnGrid {
    pub fn new(weight: &WeightSpec, grid: &QuadratureGrid) -> Result<Self> {
        let n = grid.nodes_per_axis();
        let k = grid.k().max(1);
        let total = grid.total_nodes() as usize;
        let roots: Vec<Complex64> = (0..n)
            .map(|j| {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64)
            })
            .collect();
        let mut values = Vec::with_capacity(total);
        let mut digits = vec![0usize; k];
        let mut coords = vec![roots[0]; k];
        let mut min_value = f64::INFINITY;
        let mut zeros = 0usize;
        for idx in 0..total {
            let v = weight.value_at(&coords);
            min_value = min_value.min(v);
            if v.abs() < 1e-13 {
                zeros += 1;
            }
            values.push(v);
            if idx + 1 < total {
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
        if min_value < -1e-10 * values.iter().cloned().fold(0.0f64, f64::max) {
            return Err(Error::Domain(format!(
                "weight is negative on the grid (min {min_value:.3e})"
            )));
        }
        Ok(WeightOnGrid {
            grid: grid.clone(),
            values,
            roots,
            zero_fraction: zeros as f64 / total as f64,
            min_value,
        })
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `K^(gamma) = ∫ K conj(e_gamma) dm`, exact for trig-polynomial `K`
    /// when the grid satisfies the sizing rule.
    pub fn fourier_coeff(&self, gamma: &SignedIndex) -> Complex64 {
        let n = self.grid.nodes_per_axis();
        let k = self.grid.k().max(1);
        let total = self.values.len();
        // e_gamma phase per node, accumulated by odometer walk
        let mut exps = vec![0i64; k];
        for &(p, e) in gamma.entries() {
            exps[p as usize - 1] = e as i64;
        }
        let mut digits = vec![0usize; k];
        let mut re = Vec::with_capacity(total);
        let mut im = Vec::with_capacity(total);
        for (idx, kv) in self.values.iter().enumerate() {
            let mut phase = 0i64;
            for j in 0..k {
                phase += exps[j] * digits[j] as i64;
            }
            let ph = phase.rem_euclid(n as i64) as usize;
            // conj(e_gamma) = root at -phase
            let z = self.roots[(n - ph) % n];
            re.push(kv * z.re);
            im.push(kv * z.im);
            if idx + 1 < total {
                let mut j = k - 1;
                loop {
                    digits[j] += 1;
                    if digits[j] < n {
                        break;
                    }
                    digits[j] = 0;
                    if j == 0 {
                        break;
                    }
                    j -= 1;
                }
            }
        }
        Complex64::new(
            pairwise_sum(&re) / total as f64,
            pairwise_sum(&im) / total as f64,
        )
    }

    pub fn khat0(&self) -> f64 {
        pairwise_sum(&self.values) / self.values.len() as f64
    }
}

/// `exp ∫ log K dm` plus a reliability flag: a weight that vanishes on more
/// than half the grid nodes signals `log K` far from integrable.
pub fn lower_bound_on_grid(weight: &WeightSpec, grid: &QuadratureGrid) -> Result<(f64, bool)> {
    let data = WeightOnGrid::new(weight, grid)?;
    Ok((weight.lower_bound()?, data.zero_fraction <= 0.5))
}

/// Grid sized by the exactness rule `N >= 2d + deg K + 1`.
pub fn exact_grid(weight: &WeightSpec, k: usize, d: usize) -> Result<QuadratureGrid> {
    let n = 2 * d as u32 + weight.axis_degree() + 1;
    QuadratureGrid::new(k.max(1), (n as usize).max(4))
}

/// `∫ K conj(e_alpha) dm` on an explicit grid.
pub fn fourier_coeff(
    weight: &WeightSpec,
    alpha: &SignedIndex,
    grid: &QuadratureGrid,
) -> Result<Complex64> {
    Ok(WeightOnGrid::new(weight, grid)?.fourier_coeff(alpha))
}

/// All `alpha != 0` supported on the first `k` variables with total degree
/// `<= d`, in graded order.
pub fn build_index_set(k: usize, d: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut expo = vec![0u32; k];
    enumerate(&mut expo, 0, d as u32, &mut out);
    out.retain(|a| !a.is_zero());
    out.sort_by(|a, b| a.cmp_graded(b));
    out
}

fn enumerate(expo: &mut Vec<u32>, axis: usize, left: u32, out: &mut Vec<MultiIndex>) {
    if axis == expo.len() {
        out.push(MultiIndex::from_exponents(expo));
        return;
    }
    for e in 0..=left {
        expo[axis] = e;
        enumerate(expo, axis + 1, left - e, out);
    }
    expo[axis] = 0;
}

/// Outcome of one truncated solve.
#[derive(Clone, Debug)]
pub struct SzegoResult {
    pub value: f64,
    pub coeffs: Vec<(MultiIndex, Complex64)>,
    /// `exp ∫ log K dm`
    pub lower: f64,
    /// `K^(0)`
    pub upper: f64,
    pub converged: bool,
    pub grad_norm: f64,
}

/// Exact p = 2 solve: Hermitian normal equations `G c = b` with
/// `G[beta][alpha] = K^(beta - alpha)`, `b[beta] = K^(beta)`, and value
/// `S = K^(0) - Re(b* c)`.
pub fn szego_p2(
    weight: &WeightSpec,
    index_set: &[MultiIndex],
    grid: &QuadratureGrid,
) -> Result<SzegoResult> {
    let data = WeightOnGrid::new(weight, grid)?;
    szego_p2_on(&data, weight, index_set)
}

fn szego_p2_on(
    data: &WeightOnGrid,
    weight: &WeightSpec,
    index_set: &[MultiIndex],
) -> Result<SzegoResult> {
    let n = index_set.len();
    let mut gram = vec![Complex64::new(0.0, 0.0); n * n];
    let mut cache: BTreeMap<SignedIndex, Complex64> = BTreeMap::new();
    let mut khat = |gamma: SignedIndex| -> Complex64 {
        if let Some(v) = cache.get(&gamma) {
            return *v;
        }
        let v = data.fourier_coeff(&gamma);
        cache.insert(gamma, v);
        v
    };
    for (i, beta) in index_set.iter().enumerate() {
        for (j, alpha) in index_set.iter().enumerate() {
            gram[i * n + j] = khat(SignedIndex::diff(beta, alpha));
        }
    }
    let rhs: Vec<Complex64> = index_set
        .iter()
        .map(|beta| khat(SignedIndex::from_unsigned(beta)))
        .collect();
    let khat0 = data.khat0();
    let coeffs = if n == 0 {
        Vec::new()
    } else {
        solve_hermitian_pd(&gram, &rhs, n)?
    };
    let mut correction = 0.0;
    for (b, c) in rhs.iter().zip(coeffs.iter()) {
        correction += (b.conj() * c).re;
    }
    Ok(SzegoResult {
        value: khat0 - correction,
        coeffs: index_set.iter().cloned().zip(coeffs).collect(),
        lower: weight.lower_bound()?,
        upper: khat0,
        converged: true,
        grad_norm: 0.0,
    })
}

/// Configuration for the general-p minimization.
#[derive(Clone, Debug)]
pub struct SzegoConfig {
    pub p: f64,
    pub vars: usize,
    pub degree: usize,
    /// per-axis node override; `None` applies the exactness rule
    pub nodes_per_axis: Option<usize>,
    pub grad_tol: f64,
    pub max_iter: usize,
    pub eps_schedule: Vec<f64>,
}

impl SzegoConfig {
    pub fn new(p: f64, vars: usize, degree: usize) -> Result<Self> {
        if !(p > 1.0) {
            return Err(Error::Domain(format!("szego needs p > 1, got {p}")));
        }
        Ok(SzegoConfig {
            p,
            vars,
            degree,
            nodes_per_axis: None,
            grad_tol: 1e-9,
            max_iter: 200_000,
            eps_schedule: vec![1e-2, 1e-4, 1e-6, 1e-8, 1e-10],
        })
    }
}

/// Smoothed grid objective and its conjugate (Wirtinger) gradient at `c`:
/// `Phi(c) = sum_m w_m K_m (|1 - q_c|^2 + eps^2)^{p/2}`,
/// `g_alpha = dPhi/d(conj c_alpha)`. The real-parameter gradient is `2 g`.
pub struct SzegoObjective {
    kvals: Vec<f64>,
    chars: Vec<Vec<Complex64>>, // per index, value of e_alpha at each node
    p: f64,
    weight_norm: f64,
}

impl SzegoObjective {
    pub fn new(data: &WeightOnGrid, index_set: &[MultiIndex]) -> Self {
        let grid = data.grid();
        let n = grid.nodes_per_axis();
        let k = grid.k().max(1);
        let total = data.values().len();
        let roots: Vec<Complex64> = (0..n)
            .map(|j| {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64)
            })
            .collect();
        let mut chars = Vec::with_capacity(index_set.len());
        for alpha in index_set {
            let mut col = Vec::with_capacity(total);
            let mut digits = vec![0usize; k];
            for idx in 0..total {
                let mut phase = 0usize;
                for &(p, e) in alpha.entries() {
                    phase += digits[p as usize - 1] * e as usize;
                }
                col.push(roots[phase % n]);
                if idx + 1 < total {
                    let mut j = k - 1;
                    loop {
                        digits[j] += 1;
                        if digits[j] < n {
                            break;
                        }
                        digits[j] = 0;
                        if j == 0 {
                            break;
                        }
                        j -= 1;
                    }
                }
            }
            chars.push(col);
        }
        SzegoObjective {
            kvals: data.values().to_vec(),
            chars,
            p: 0.0,
            weight_norm: data.khat0(),
        }
    }

    pub fn with_power(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    fn residual(&self, c: &[Complex64]) -> Vec<Complex64> {
        let total = self.kvals.len();
        let mut u = vec![Complex64::new(1.0, 0.0); total];
        for (ci, col) in c.iter().zip(self.chars.iter()) {
            if ci.norm_sqr() == 0.0 {
                continue;
            }
            for (um, em) in u.iter_mut().zip(col.iter()) {
                *um -= ci * em;
            }
        }
        u
    }

    pub fn value(&self, c: &[Complex64], eps: f64) -> f64 {
        let u = self.residual(c);
        let terms: Vec<f64> = u
            .iter()
            .zip(self.kvals.iter())
            .map(|(um, kv)| kv * (um.norm_sqr() + eps * eps).powf(self.p / 2.0))
            .collect();
        pairwise_sum(&terms) / terms.len() as f64
    }

    pub fn value_and_gradient(&self, c: &[Complex64], eps: f64) -> (f64, Vec<Complex64>) {
        let u = self.residual(c);
        let total = self.kvals.len();
        let mut fac = Vec::with_capacity(total);
        let mut terms = Vec::with_capacity(total);
        for (um, kv) in u.iter().zip(self.kvals.iter()) {
            let t = um.norm_sqr() + eps * eps;
            terms.push(kv * t.powf(self.p / 2.0));
            fac.push(kv * (self.p / 2.0) * t.powf(self.p / 2.0 - 1.0));
        }
        let phi = pairwise_sum(&terms) / total as f64;
        let mut grad = Vec::with_capacity(self.chars.len());
        for col in &self.chars {
            let parts_re: Vec<f64> = (0..total)
                .map(|m| -(fac[m] * (u[m] * col[m].conj()).re))
                .collect();
            let parts_im: Vec<f64> = (0..total)
                .map(|m| -(fac[m] * (u[m] * col[m].conj()).im))
                .collect();
            grad.push(Complex64::new(
                pairwise_sum(&parts_re) / total as f64,
                pairwise_sum(&parts_im) / total as f64,
            ));
        }
        (phi, grad)
    }

    fn grad_norm(g: &[Complex64]) -> f64 {
        g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Convex minimization for p > 1 with epsilon continuation, warm-started
/// from the p = 2 normal equations.
pub fn szego_general(weight: &WeightSpec, cfg: &SzegoConfig) -> Result<SzegoResult> {
    let grid = match cfg.nodes_per_axis {
        Some(n) => QuadratureGrid::new(cfg.vars.max(1), n)?,
        None => exact_grid(weight, cfg.vars, cfg.degree)?,
    };
    let data = WeightOnGrid::new(weight, &grid)?;
    let index_set = build_index_set(cfg.vars, cfg.degree);
    let init = szego_p2_on(&data, weight, &index_set)?;
    let objective = SzegoObjective::new(&data, &index_set).with_power(cfg.p);

    let mut c: Vec<Complex64> = init.coeffs.iter().map(|&(_, v)| v).collect();
    let gtol = cfg.grad_tol * objective.weight_norm.max(1.0);
    let mut converged = true;
    let mut last_gnorm = 0.0;
    for &eps in &cfg.eps_schedule {
        let (mut phi, mut grad) = objective.value_and_gradient(&c, eps);
        let mut step = 1.0f64;
        let mut iter = 0usize;
        loop {
            let gnorm = SzegoObjective::grad_norm(&grad);
            last_gnorm = gnorm;
            if gnorm <= gtol || iter >= cfg.max_iter {
                if gnorm > gtol {
                    converged = false;
                }
                break;
            }
            // Armijo backtracking along -grad
            let mut accepted = false;
            while step > 1e-18 {
                let trial: Vec<Complex64> = c
                    .iter()
                    .zip(grad.iter())
                    .map(|(ci, gi)| ci - step * gi)
                    .collect();
                let (phi_t, grad_t) = objective.value_and_gradient(&trial, eps);
                if phi_t <= phi - 0.25 * step * gnorm * gnorm {
                    c = trial;
                    phi = phi_t;
                    grad = grad_t;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                converged = false;
                break;
            }
            step = (step * 2.0).min(1e12);
            iter += 1;
        }
    }
    let value = objective.value(&c, 0.0);
    Ok(SzegoResult {
        value,
        coeffs: index_set.into_iter().zip(c).collect(),
        lower: init.lower,
        upper: init.upper,
        converged,
        grad_norm: last_gnorm,
    })
}

/// Builds the grid objective for gradient checks and diagnostics.
pub fn objective_for(
    weight: &WeightSpec,
    cfg: &SzegoConfig,
) -> Result<(SzegoObjective, Vec<MultiIndex>)> {
    let grid = match cfg.nodes_per_axis {
        Some(n) => QuadratureGrid::new(cfg.vars.max(1), n)?,
        None => exact_grid(weight, cfg.vars, cfg.degree)?,
    };
    let data = WeightOnGrid::new(weight, &grid)?;
    let index_set = build_index_set(cfg.vars, cfg.degree);
    Ok((SzegoObjective::new(&data, &index_set).with_power(cfg.p), index_set))
}

/// Degree ladder certifying that `S_d(|h|^p)` descends onto the lower bound
/// for an outer candidate `h`.
#[derive(Clone, Debug)]
pub struct AttainmentReport {
    pub outer: OuterReport,
    pub lower: f64,
    /// `(d, S_d, S_d - lower)` per ladder rung
    pub ladder: Vec<(usize, f64, f64)>,
    pub monotone: bool,
    pub final_gap: f64,
}

pub fn certify_lower_attainment(
    h: &LiftedPolynomial,
    p: f64,
    vars: usize,
    degrees: &[usize],
) -> Result<AttainmentReport> {
    let outer = outer_gap(h)?;
    if !outer.outer {
        return Err(Error::NotOuter {
            gamma: outer.gamma,
            tol: outer.tol,
        });
    }
    let weight = WeightSpec::modulus_power(h.clone(), p)?;
    let lower = weight.lower_bound()?;
    let mut ladder = Vec::new();
    for &d in degrees {
        let s = if p == 2.0 {
            let grid = exact_grid(&weight, vars, d)?;
            szego_p2(&weight, &build_index_set(vars, d), &grid)?.value
        } else {
            let cfg = SzegoConfig::new(p, vars, d)?;
            szego_general(&weight, &cfg)?.value
        };
        ladder.push((d, s, s - lower));
    }
    let slack = if p == 2.0 { 1e-10 } else { 1e-6 };
    let monotone = ladder.windows(2).all(|w| w[1].2 <= w[0].2 + slack);
    let final_gap = ladder.last().map(|&(_, _, g)| g).unwrap_or(0.0);
    Ok(AttainmentReport {
        outer,
        lower,
        ladder,
        monotone,
        final_gap,
    })
}

/// Check of the upper-endpoint characterization: `S = K^(0)` exactly when
/// every nonzero one-sided coefficient vanishes, strict drop otherwise.
#[derive(Clone, Debug)]
pub struct UpperReport {
    pub khat0: f64,
    pub max_onesided_coeff: f64,
    pub witness: Option<MultiIndex>,
    pub vanishing: bool,
    pub s_value: f64,
    /// 1x1 certificate `|K^(alpha*)|^2 / K^(0)` for the witness direction
    pub margin: f64,
}

pub fn certify_upper(
    weight: &WeightSpec,
    vars: usize,
    degree: usize,
    grid: &QuadratureGrid,
) -> Result<UpperReport> {
    let data = WeightOnGrid::new(weight, grid)?;
    let index_set = build_index_set(vars, degree);
    let mut max_coeff = 0.0;
    let mut witness = None;
    for alpha in &index_set {
        let v = data.fourier_coeff(&SignedIndex::from_unsigned(alpha)).norm();
        if v > max_coeff {
            max_coeff = v;
            witness = Some(alpha.clone());
        }
    }
    let vanishing = max_coeff < 1e-10;
    let solve = szego_p2_on(&data, weight, &index_set)?;
    let margin = if vanishing {
        0.0
    } else {
        max_coeff * max_coeff / data.khat0()
    };
    Ok(UpperReport {
        khat0: data.khat0(),
        max_onesided_coeff: max_coeff,
        witness,
        vanishing,
        s_value: solve.value,
        margin,
    })
}
