//! The Bohr correspondence between Dirichlet polynomials and analytic
//! polynomials in infinitely many variables.
//!
//! An integer `n = p_1^{a_1} ... p_k^{a_k}` is identified with the exponent
//! multi-index `alpha(n)`, and the coefficient-preserving map
//! `sum a_n n^{-s}  <->  sum a_n zeta^{alpha(n)}` is an algebra isomorphism.
//! Everything here is exact: coefficients are kept in sparse maps, zero
//! coefficients are never stored, and index reconstruction uses checked
//! 64-bit arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::primes;

const COEFF_EPS: f64 = 0.0; // exact: only literal zeros are dropped

/// Series indices live in `1..2^63`; reconstruction beyond that is reported
/// as overflow rather than wrapped.
pub const MAX_INDEX: u64 = 1 << 63;

/// Finitely supported exponent sequence keyed by prime position (1-based).
///
/// `entries` is sorted by strictly increasing position with all exponents
/// >= 1; the empty list is the zero multi-index `alpha = 0`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex {
    entries: Vec<(u32, u32)>,
}

impl MultiIndex {
    pub fn zero() -> Self {
        MultiIndex::default()
    }

    /// Builds from (position, exponent) pairs; positions need not be sorted,
    /// repeated positions accumulate, zero exponents are dropped.
    pub fn new(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut map: BTreeMap<u32, u64> = BTreeMap::new();
        for (pos, exp) in pairs {
            if pos == 0 {
                return Err(Error::Invalid("multi-index positions are 1-based".into()));
            }
            *map.entry(pos).or_insert(0) += exp as u64;
        }
        let mut entries = Vec::with_capacity(map.len());
        for (pos, exp) in map {
            if exp == 0 {
                continue;
            }
            let exp = u32::try_from(exp)
                .map_err(|_| Error::Invalid("multi-index exponent exceeds u32".into()))?;
            entries.push((pos, exp));
        }
        Ok(MultiIndex { entries })
    }

    /// Dense exponent vector `(a_1, ..., a_k)` over the first k positions.
    pub fn from_exponents(exponents: &[u32]) -> Self {
        let entries = exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i as u32 + 1, e))
            .collect();
        MultiIndex { entries }
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total degree `|alpha| = sum alpha_j`.
    pub fn total_degree(&self) -> u64 {
        self.entries.iter().map(|&(_, e)| e as u64).sum()
    }

    /// Dilation weight `sum j * alpha_j` used by `F_[r]`.
    pub fn weighted_degree(&self) -> u64 {
        self.entries
            .iter()
            .map(|&(p, e)| p as u64 * e as u64)
            .sum()
    }

    /// Largest variable position in the support (0 for `alpha = 0`).
    pub fn max_position(&self) -> u32 {
        self.entries.last().map_or(0, |&(p, _)| p)
    }

    pub fn exponent_at(&self, position: u32) -> u32 {
        self.entries
            .binary_search_by_key(&position, |&(p, _)| p)
            .map_or(0, |i| self.entries[i].1)
    }

    /// Componentwise sum, `alpha(m) + alpha(n) = alpha(mn)`.
    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        let mut map: BTreeMap<u32, u32> = self.entries.iter().copied().collect();
        for &(p, e) in &other.entries {
            *map.entry(p).or_insert(0) += e;
        }
        MultiIndex {
            entries: map.into_iter().collect(),
        }
    }

    /// Graded order: total degree first, then earlier variables carry more
    /// weight (so for k = 2, d = 2: z1, z2, z1^2, z1 z2, z2^2).
    pub fn cmp_graded(&self, other: &MultiIndex) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let kmax = self.max_position().max(other.max_position());
                for pos in 1..=kmax {
                    let (a, b) = (self.exponent_at(pos), other.exponent_at(pos));
                    if a != b {
                        return b.cmp(&a);
                    }
                }
                std::cmp::Ordering::Equal
            })
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|&(p, e)| {
                if e == 1 {
                    format!("z{p}")
                } else {
                    format!("z{p}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Prime-exponent multi-index of `n`.
pub fn factorize(n: u64) -> Result<MultiIndex> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    let mut rem = n;
    let mut entries = Vec::new();
    let mut idx = 1u32;
    loop {
        if rem == 1 {
            break;
        }
        let p = primes::prime(idx);
        if p * p > rem {
            // remaining part is prime; its position needs the full table
            let pos = primes::prime_index(rem).expect("remainder after trial division is prime");
            entries.push((pos, 1));
            break;
        }
        if rem % p == 0 {
            let mut e = 0u32;
            while rem % p == 0 {
                rem /= p;
                e += 1;
            }
            entries.push((idx, e));
        }
        idx += 1;
    }
    entries.sort_unstable();
    Ok(MultiIndex { entries })
}

/// Integer `prod p_j^{alpha_j}` with checked multiplication.
pub fn index_of(alpha: &MultiIndex) -> Result<u64> {
    let mut n: u64 = 1;
    for &(pos, exp) in alpha.entries() {
        let p = primes::prime(pos);
        for _ in 0..exp {
            n = n
                .checked_mul(p)
                .filter(|&v| v < MAX_INDEX)
                .ok_or_else(|| Error::Overflow(format!("{alpha:?}")))?;
        }
    }
    Ok(n)
}

/// A Dirichlet polynomial `sum a_n n^{-s}` stored as a sparse map.
#[derive(Clone, PartialEq, Default)]
pub struct DirichletSeries {
    terms: BTreeMap<u64, Complex64>,
}

impl DirichletSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u64, Complex64)>) -> Result<Self> {
        let mut s = Self::new();
        for (n, c) in terms {
            s.add_term(n, c)?;
        }
        Ok(s)
    }

    /// Adds `c * n^{-s}`; cancellation to zero removes the entry.
    pub fn add_term(&mut self, n: u64, c: Complex64) -> Result<()> {
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        if n >= MAX_INDEX {
            return Err(Error::Overflow(format!("index {n} >= 2^63")));
        }
        let v = self.terms.entry(n).or_insert(Complex64::new(0.0, 0.0));
        *v += c;
        if v.norm_sqr() <= COEFF_EPS {
            self.terms.remove(&n);
        }
        Ok(())
    }

    pub fn coefficient(&self, n: u64) -> Complex64 {
        self.terms
            .get(&n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.terms.iter().map(|(&n, &c)| (n, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_index(&self) -> u64 {
        self.terms.keys().next_back().copied().unwrap_or(1)
    }

    /// Coefficients become `a_n n^{-sigma}`.
    pub fn vertical_shift(&self, sigma: f64) -> DirichletSeries {
        let terms = self
            .terms
            .iter()
            .map(|(&n, &c)| (n, c * (n as f64).powf(-sigma)))
            .collect();
        DirichletSeries { terms }
    }

    /// Keeps the terms whose index lies in the semigroup generated by the
    /// first `k` primes.
    pub fn abschnitt(&self, k: u32) -> Result<DirichletSeries> {
        let mut out = DirichletSeries::new();
        for (&n, &c) in &self.terms {
            if factorize(n)?.max_position() <= k {
                out.terms.insert(n, c);
            }
        }
        Ok(out)
    }

    /// Value `sum a_n n^{-sigma} e^{-i t ln n}` on the vertical line.
    pub fn evaluate_line(&self, sigma: f64, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&n, &c) in &self.terms {
            let ln_n = (n as f64).ln();
            let modulus = (-sigma * ln_n).exp();
            acc += c * Complex64::from_polar(modulus, -t * ln_n);
        }
        acc
    }
}

impl fmt::Debug for DirichletSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(n, c)| format!("({c})*{n}^-s"))
            .collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

/// Dirichlet convolution: coefficient at `N` is `sum_{mn=N} a_m b_n`.
pub fn multiply(f: &DirichletSeries, g: &DirichletSeries) -> Result<DirichletSeries> {
    let mut out = DirichletSeries::new();
    for (m, a) in f.terms() {
        for (n, b) in g.terms() {
            let idx = m
                .checked_mul(n)
                .ok_or_else(|| Error::Overflow(format!("{m} * {n}")))?;
            out.add_term(idx, a * b)?;
        }
    }
    Ok(out)
}

/// Element of the polynomial ring in countably many variables, sparse.
#[derive(Clone, PartialEq, Default)]
pub struct LiftedPolynomial {
    monomials: BTreeMap<MultiIndex, Complex64>,
}

impl LiftedPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        let mut p = Self::new();
        p.add_monomial(MultiIndex::zero(), c);
        p
    }

    pub fn from_monomials(monomials: impl IntoIterator<Item = (MultiIndex, Complex64)>) -> Self {
        let mut p = Self::new();
        for (a, c) in monomials {
            p.add_monomial(a, c);
        }
        p
    }

    pub fn add_monomial(&mut self, alpha: MultiIndex, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.monomials.entry(alpha) {
            Entry::Vacant(e) => {
                if c.norm_sqr() > COEFF_EPS {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v.norm_sqr() <= COEFF_EPS {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Complex64 {
        self.monomials
            .get(alpha)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&MultiIndex, Complex64)> + '_ {
        self.monomials.iter().map(|(a, &c)| (a, c))
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coefficient(&MultiIndex::zero())
    }

    /// Number of variables: largest position in the support.
    pub fn vars(&self) -> u32 {
        self.monomials
            .keys()
            .map(|a| a.max_position())
            .max()
            .unwrap_or(0)
    }

    pub fn max_total_degree(&self) -> u64 {
        self.monomials
            .keys()
            .map(|a| a.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// Largest exponent of the given variable across all monomials.
    pub fn axis_degree(&self, position: u32) -> u32 {
        self.monomials
            .keys()
            .map(|a| a.exponent_at(position))
            .max()
            .unwrap_or(0)
    }

    /// Largest per-axis exponent over all variables.
    pub fn max_axis_degree(&self) -> u32 {
        (1..=self.vars())
            .map(|p| self.axis_degree(p))
            .max()
            .unwrap_or(0)
    }

    /// Keeps the monomials supported on the first `k` variables.
    pub fn abschnitt(&self, k: u32) -> LiftedPolynomial {
        let monomials = self
            .monomials
            .iter()
            .filter(|(a, _)| a.max_position() <= k)
            .map(|(a, &c)| (a.clone(), c))
            .collect();
        LiftedPolynomial { monomials }
    }

    /// Value at a point given by its coordinate slice (coordinates beyond the
    /// slice read as zero).
    pub fn evaluate_at(&self, coords: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (alpha, c) in &self.monomials {
            let mut term = *c;
            let mut vanished = false;
            for &(pos, exp) in alpha.entries() {
                let z = coords
                    .get(pos as usize - 1)
                    .copied()
                    .unwrap_or(Complex64::new(0.0, 0.0));
                if z == Complex64::new(0.0, 0.0) {
                    vanished = true;
                    break;
                }
                term *= z.powu(exp);
            }
            if !vanished {
                acc += term;
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &PolydiskPoint) -> Complex64 {
        self.evaluate_at(point.coords())
    }

    pub fn scale(&self, factor: Complex64) -> LiftedPolynomial {
        let monomials = self
            .monomials
            .iter()
            .map(|(a, &c)| (a.clone(), c * factor))
            .collect();
        LiftedPolynomial { monomials }
    }
}

impl fmt::Debug for LiftedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .monomials
            .iter()
            .map(|(a, c)| format!("({c})*{a:?}"))
            .collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

impl std::ops::Mul for &LiftedPolynomial {
    type Output = LiftedPolynomial;

    fn mul(self, rhs: &LiftedPolynomial) -> LiftedPolynomial {
        let mut out = LiftedPolynomial::new();
        for (a, ca) in self.monomials() {
            for (b, cb) in rhs.monomials() {
                out.add_monomial(a.plus(b), ca * cb);
            }
        }
        out
    }
}

impl std::ops::Add for &LiftedPolynomial {
    type Output = LiftedPolynomial;

    fn add(self, rhs: &LiftedPolynomial) -> LiftedPolynomial {
        let mut out = self.clone();
        for (a, c) in rhs.monomials() {
            out.add_monomial(a.clone(), c);
        }
        out
    }
}

/// `B(sum a_n n^{-s}) = sum a_n zeta^{alpha(n)}`.
pub fn lift(q: &DirichletSeries) -> LiftedPolynomial {
    let mut out = LiftedPolynomial::new();
    for (n, c) in q.terms() {
        let alpha = factorize(n).expect("series indices are positive");
        out.add_monomial(alpha, c);
    }
    out
}

/// Inverse of `lift`; fails if a monomial's integer index overflows 64 bits.
pub fn unlift(f: &LiftedPolynomial) -> Result<DirichletSeries> {
    let mut out = DirichletSeries::new();
    for (alpha, c) in f.monomials() {
        out.add_term(index_of(alpha)?, c)?;
    }
    Ok(out)
}

/// Point of the infinite polydisk with finite support, all `|zeta_j| < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolydiskPoint {
    coords: Vec<Complex64>,
}

impl PolydiskPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        for (j, z) in coords.iter().enumerate() {
            if !(z.norm() < 1.0) {
                return Err(Error::Domain(format!(
                    "|zeta_{}| = {} must be < 1",
                    j + 1,
                    z.norm()
                )));
            }
        }
        Ok(PolydiskPoint { coords })
    }

    pub fn origin(k: usize) -> Self {
        PolydiskPoint {
            coords: vec![Complex64::new(0.0, 0.0); k],
        }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn support(&self) -> usize {
        self.coords.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factorize_basics() {
        assert!(factorize(1).unwrap().is_zero());
        assert_eq!(factorize(12).unwrap().entries(), &[(1, 2), (2, 1)]);
        assert_eq!(factorize(5).unwrap().entries(), &[(3, 1)]);
        assert!(matches!(factorize(0), Err(Error::ZeroIndex)));
    }

    #[test]
    fn index_of_inverts_factorize() {
        assert_eq!(index_of(&MultiIndex::zero()).unwrap(), 1);
        assert_eq!(index_of(&factorize(12).unwrap()).unwrap(), 12);
        // alpha with position 25 is the 25th prime
        let alpha = MultiIndex::new([(25, 1)]).unwrap();
        assert_eq!(index_of(&alpha).unwrap(), 97);
        // 2^64 overflows
        let alpha = MultiIndex::new([(1, 64)]).unwrap();
        assert!(matches!(index_of(&alpha), Err(Error::Overflow(_))));
    }

    #[test]
    fn factorize_is_additive() {
        for (m, n) in [(6u64, 35u64), (12, 18), (7, 7), (1, 99)] {
            let lhs = factorize(m * n).unwrap();
            let rhs = factorize(m).unwrap().plus(&factorize(n).unwrap());
            assert_eq!(lhs, rhs, "m={m} n={n}");
        }
    }

    #[test]
    fn lift_examples() {
        // 1 - 2*2^{-s} + 3*6^{-s} -> 1 - 2 z1 + 3 z1 z2
        let q = DirichletSeries::from_terms([
            (1, c(1.0, 0.0)),
            (2, c(-2.0, 0.0)),
            (6, c(3.0, 0.0)),
        ])
        .unwrap();
        let f = lift(&q);
        assert_eq!(f.len(), 3);
        assert_eq!(f.coefficient(&MultiIndex::zero()), c(1.0, 0.0));
        assert_eq!(f.coefficient(&factorize(2).unwrap()), c(-2.0, 0.0));
        assert_eq!(
            f.coefficient(&MultiIndex::new([(1, 1), (2, 1)]).unwrap()),
            c(3.0, 0.0)
        );
        assert_eq!(unlift(&f).unwrap(), q);

        // 7 * 9^{-s} -> 7 z2^2
        let q = DirichletSeries::from_terms([(9, c(7.0, 0.0))]).unwrap();
        assert_eq!(
            lift(&q).coefficient(&MultiIndex::new([(2, 2)]).unwrap()),
            c(7.0, 0.0)
        );

        // empty <-> zero
        assert!(lift(&DirichletSeries::new()).is_empty());
        assert!(unlift(&LiftedPolynomial::new()).unwrap().is_empty());
    }

    #[test]
    fn abschnitt_examples() {
        let f = LiftedPolynomial::from_monomials([
            (MultiIndex::zero(), c(1.0, 0.0)),
            (MultiIndex::new([(1, 1)]).unwrap(), c(-2.0, 0.0)),
            (MultiIndex::new([(1, 1), (2, 1)]).unwrap(), c(3.0, 0.0)),
        ]);
        let f1 = f.abschnitt(1);
        assert_eq!(f1.len(), 2);
        assert_eq!(f1.coefficient(&MultiIndex::new([(1, 1)]).unwrap()), c(-2.0, 0.0));
        let f0 = f.abschnitt(0);
        assert_eq!(f0.len(), 1);
        assert_eq!(f0.constant_term(), c(1.0, 0.0));
        // idempotent and identity above the support
        assert_eq!(f.abschnitt(2), f);
        assert_eq!(f1.abschnitt(1), f1);

        let q = DirichletSeries::from_terms([(2, c(1.0, 0.0)), (5, c(1.0, 0.0))]).unwrap();
        let q2 = q.abschnitt(2).unwrap();
        assert_eq!(q2.len(), 1);
        assert_eq!(q2.coefficient(2), c(1.0, 0.0));
    }

    #[test]
    fn vertical_shift_examples() {
        let f = DirichletSeries::from_terms([(2, c(1.0, 0.0))]).unwrap();
        assert_eq!(f.vertical_shift(1.0).coefficient(2), c(0.5, 0.0));
        assert_eq!(f.vertical_shift(0.0), f);
        // 6^{-sigma} = 1/2 at sigma = ln 2 / ln 6
        let f = DirichletSeries::from_terms([(6, c(3.0, 0.0))]).unwrap();
        let sigma = 2f64.ln() / 6f64.ln();
        let shifted = f.vertical_shift(sigma);
        assert!((shifted.coefficient(6) - c(1.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn shift_composes_additively() {
        let f = DirichletSeries::from_terms([
            (2, c(1.0, -0.5)),
            (15, c(0.25, 2.0)),
            (97, c(-3.0, 0.0)),
        ])
        .unwrap();
        let a = f.vertical_shift(0.7).vertical_shift(0.55);
        let b = f.vertical_shift(1.25);
        for (n, cb) in b.terms() {
            assert!((a.coefficient(n) - cb).norm() <= 1e-14 * cb.norm());
        }
    }

    #[test]
    fn evaluate_line_examples() {
        let one = DirichletSeries::from_terms([(1, c(1.0, 0.0))]).unwrap();
        assert_eq!(one.evaluate_line(3.0, 17.0), c(1.0, 0.0));

        let f = DirichletSeries::from_terms([(2, c(1.0, 0.0))]).unwrap();
        let v = f.evaluate_line(0.0, 0.37);
        assert!((v.norm() - 1.0).abs() < 1e-15);
        assert!((v - Complex64::from_polar(1.0, -0.37 * 2f64.ln())).norm() < 1e-15);

        let f = DirichletSeries::from_terms([(1, c(1.0, 0.0)), (2, c(1.0, 0.0))]).unwrap();
        assert_eq!(f.evaluate_line(0.0, 0.0), c(2.0, 0.0));
    }

    #[test]
    fn evaluate_lift_examples() {
        let f = LiftedPolynomial::from_monomials([
            (MultiIndex::zero(), c(1.0, 0.0)),
            (MultiIndex::new([(1, 1)]).unwrap(), c(-2.0, 0.0)),
        ]);
        let zero = PolydiskPoint::new(vec![c(0.0, 0.0)]).unwrap();
        assert_eq!(f.evaluate(&zero), c(1.0, 0.0));

        let g = LiftedPolynomial::from_monomials([(
            MultiIndex::new([(1, 1), (2, 1)]).unwrap(),
            c(1.0, 0.0),
        )]);
        let p = PolydiskPoint::new(vec![c(0.5, 0.0), c(1.0 / 3.0, 0.0)]).unwrap();
        assert!((g.evaluate(&p) - c(1.0 / 6.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn line_and_lift_evaluation_agree() {
        // lift(Q) at (p_j^{-sigma-it}) equals Q(sigma + it)
        let q = DirichletSeries::from_terms([
            (1, c(0.3, 0.1)),
            (2, c(1.0, -1.0)),
            (6, c(-0.5, 0.25)),
            (9, c(0.0, 2.0)),
            (30, c(1.5, 0.0)),
        ])
        .unwrap();
        let f = lift(&q);
        let (sigma, t) = (0.8, 3.7);
        let coords: Vec<Complex64> = (1..=3)
            .map(|j| {
                let p = primes::prime(j) as f64;
                Complex64::from_polar(p.powf(-sigma), -t * p.ln())
            })
            .collect();
        let a = f.evaluate_at(&coords);
        let b = q.evaluate_line(sigma, t);
        assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
    }

    #[test]
    fn multiply_examples() {
        let two = DirichletSeries::from_terms([(2, c(1.0, 0.0))]).unwrap();
        let three = DirichletSeries::from_terms([(3, c(1.0, 0.0))]).unwrap();
        let six = multiply(&two, &three).unwrap();
        assert_eq!(six.len(), 1);
        assert_eq!(six.coefficient(6), c(1.0, 0.0));

        let one = DirichletSeries::from_terms([(1, c(1.0, 0.0))]).unwrap();
        let f = DirichletSeries::from_terms([(2, c(2.0, 1.0)), (7, c(0.5, 0.0))]).unwrap();
        assert_eq!(multiply(&f, &one).unwrap(), f);

        let g = DirichletSeries::from_terms([(1, c(1.0, 0.0)), (2, c(1.0, 0.0))]).unwrap();
        let sq = multiply(&g, &g).unwrap();
        assert_eq!(sq.coefficient(1), c(1.0, 0.0));
        assert_eq!(sq.coefficient(2), c(2.0, 0.0));
        assert_eq!(sq.coefficient(4), c(1.0, 0.0));

        let big = DirichletSeries::from_terms([((1 << 62) - 1, c(1.0, 0.0))]).unwrap();
        assert!(matches!(multiply(&big, &big), Err(Error::Overflow(_))));
        // indices live strictly below 2^63
        assert!(matches!(
            DirichletSeries::from_terms([(1u64 << 63, c(1.0, 0.0))]),
            Err(Error::Overflow(_))
        ));
        assert!(matches!(
            index_of(&MultiIndex::new([(1, 63)]).unwrap()),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn multiply_commutes_with_lift() {
        let f = DirichletSeries::from_terms([
            (1, c(1.0, 2.0)),
            (4, c(-1.0, 0.0)),
            (15, c(0.5, 0.5)),
        ])
        .unwrap();
        let g = DirichletSeries::from_terms([(2, c(3.0, 0.0)), (9, c(0.0, -1.0))]).unwrap();
        let lhs = lift(&multiply(&f, &g).unwrap());
        let rhs = &lift(&f) * &lift(&g);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_order_matches_expected_enumeration() {
        let mut v = vec![
            MultiIndex::from_exponents(&[0, 2]),
            MultiIndex::from_exponents(&[1, 1]),
            MultiIndex::from_exponents(&[2, 0]),
            MultiIndex::from_exponents(&[0, 1]),
            MultiIndex::from_exponents(&[1, 0]),
        ];
        v.sort_by(|a, b| a.cmp_graded(b));
        let dense: Vec<Vec<u32>> = v
            .iter()
            .map(|a| (1..=2).map(|p| a.exponent_at(p)).collect())
            .collect();
        assert_eq!(
            dense,
            vec![vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]
        );
    }
}
