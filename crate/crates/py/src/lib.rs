//! Python bindings: the Bohr correspondence, torus metrics, outer/Jensen
//! checks, the truncated extremal solver, and the l1 factorization.
//!
//! Build with `cargo build -p bohr-szego-py --release`; the resulting
//! `libbohr_szego.so` imports as the module `bohr_szego` once renamed to
//! `bohr_szego.so` (see python/smoke_test.py).

use num_complex::Complex64;
use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use bohr_szego_core::error::Error as CoreError;
use bohr_szego_core::{bohr, mahler, poisson, seqfactor, szego, torus};

fn err(e: CoreError) -> PyErr {
    match e {
        CoreError::Overflow(_) => PyOverflowError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn multi_index(pairs: Vec<(u32, u32)>) -> PyResult<bohr::MultiIndex> {
    bohr::MultiIndex::new(pairs).map_err(err)
}

/// Prime-exponent multi-index of n, as (position, exponent) pairs.
#[pyfunction]
fn factorize(n: u64) -> PyResult<Vec<(u32, u32)>> {
    Ok(bohr::factorize(n).map_err(err)?.entries().to_vec())
}

/// Integer with the given prime-exponent multi-index.
#[pyfunction]
fn index_of(pairs: Vec<(u32, u32)>) -> PyResult<u64> {
    bohr::index_of(&multi_index(pairs)?).map_err(err)
}

/// The j-th prime, 1-based.
#[pyfunction]
fn prime(index: u32) -> u64 {
    bohr_szego_core::primes::prime(index)
}

/// A Dirichlet polynomial, constructed from {n: coefficient}.
#[pyclass(from_py_object)]
#[derive(Clone)]
struct DirichletSeries {
    inner: bohr::DirichletSeries,
}

#[pymethods]
impl DirichletSeries {
    #[new]
    fn new(terms: std::collections::BTreeMap<u64, Complex64>) -> PyResult<Self> {
        Ok(DirichletSeries {
            inner: bohr::DirichletSeries::from_terms(terms).map_err(err)?,
        })
    }

    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (n, c) in self.inner.terms() {
            d.set_item(n, c)?;
        }
        Ok(d)
    }

    fn lift(&self) -> LiftedPolynomial {
        LiftedPolynomial {
            inner: bohr::lift(&self.inner),
        }
    }

    fn vertical_shift(&self, sigma: f64) -> DirichletSeries {
        DirichletSeries {
            inner: self.inner.vertical_shift(sigma),
        }
    }

    fn abschnitt(&self, k: u32) -> PyResult<DirichletSeries> {
        Ok(DirichletSeries {
            inner: self.inner.abschnitt(k).map_err(err)?,
        })
    }

    fn evaluate_line(&self, sigma: f64, t: f64) -> Complex64 {
        self.inner.evaluate_line(sigma, t)
    }

    fn multiply(&self, other: &DirichletSeries) -> PyResult<DirichletSeries> {
        Ok(DirichletSeries {
            inner: bohr::multiply(&self.inner, &other.inner).map_err(err)?,
        })
    }

    /// ||f_sigma||_0 per sigma in the ascending list.
    fn sigma_profile(&self, sigmas: Vec<f64>) -> PyResult<Vec<f64>> {
        torus::sigma_profile(&self.inner, &sigmas).map_err(err)
    }

    /// log-integrals of the k-te Abschnitt ladder at fixed sigma > 0.
    fn abschnitt_profile(&self, sigma: f64, ks: Vec<u32>) -> PyResult<Vec<f64>> {
        torus::abschnitt_profile(&self.inner, sigma, &ks).map_err(err)
    }

    /// Vertical-line time average of log(1+|f|) over the doubling window;
    /// returns (stages, value) with stages as (T, value) pairs.
    #[pyo3(signature = (sigma=0.0, t_start=64.0, t_max=16384.0))]
    fn line_average(&self, sigma: f64, t_start: f64, t_max: f64) -> PyResult<(Vec<(f64, f64)>, f64)> {
        let cfg = torus::LineAverageConfig {
            t_start,
            t_max,
            tol: 0.0,
            dt: None,
        };
        let rep = torus::line_average(&self.inner, sigma, &cfg, torus::PointTransform::Log1pAbs)
            .map_err(err)?;
        Ok((
            rep.stages.iter().map(|s| (s.t, s.value)).collect(),
            rep.value,
        ))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }

    fn __eq__(&self, other: &DirichletSeries) -> bool {
        self.inner == other.inner
    }
}

/// A sparse polynomial in countably many variables, constructed from
/// {((position, exponent), ...): coefficient}.
#[pyclass(from_py_object)]
#[derive(Clone)]
struct LiftedPolynomial {
    inner: bohr::LiftedPolynomial,
}

#[pymethods]
impl LiftedPolynomial {
    #[new]
    fn new(monomials: Vec<(Vec<(u32, u32)>, Complex64)>) -> PyResult<Self> {
        let mut f = bohr::LiftedPolynomial::new();
        for (pairs, c) in monomials {
            f.add_monomial(multi_index(pairs)?, c);
        }
        Ok(LiftedPolynomial { inner: f })
    }

    fn monomials(&self) -> Vec<(Vec<(u32, u32)>, Complex64)> {
        self.inner
            .monomials()
            .map(|(a, c)| (a.entries().to_vec(), c))
            .collect()
    }

    fn unlift(&self) -> PyResult<DirichletSeries> {
        Ok(DirichletSeries {
            inner: bohr::unlift(&self.inner).map_err(err)?,
        })
    }

    fn abschnitt(&self, k: u32) -> LiftedPolynomial {
        LiftedPolynomial {
            inner: self.inner.abschnitt(k),
        }
    }

    fn evaluate(&self, point: Vec<Complex64>) -> Complex64 {
        self.inner.evaluate_at(&point)
    }

    fn dilate(&self, r: f64) -> PyResult<LiftedPolynomial> {
        Ok(LiftedPolynomial {
            inner: torus::radial_dilate(&self.inner, r).map_err(err)?,
        })
    }

    fn metric_d0(&self) -> PyResult<f64> {
        torus::metric_d0(&self.inner).map_err(err)
    }

    fn metric_p(&self, p: f64) -> PyResult<f64> {
        torus::metric_p(&self.inner, p).map_err(err)
    }

    fn d0_profile(&self, radii: Vec<f64>) -> PyResult<Vec<f64>> {
        torus::d0_profile(&self.inner, &radii).map_err(err)
    }

    /// Exact ∫ log|F| dm (sliced Jensen evaluation).
    fn log_integral(&self) -> PyResult<f64> {
        mahler::log_integral(&self.inner).map_err(err)
    }

    /// Outer criterion: dict with gamma, outer, tol.
    #[pyo3(signature = (tol=poisson::OUTER_TOL))]
    fn outer_gap<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        let rep = poisson::outer_gap_with_tol(&self.inner, tol).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("gamma", rep.gamma)?;
        d.set_item("outer", rep.outer)?;
        d.set_item("tol", rep.tol)?;
        Ok(d)
    }

    /// Jensen gap at zeta (list of complex coordinates, |z| < 1).
    #[pyo3(signature = (zeta, nodes_per_axis=None))]
    fn jensen_gap(&self, zeta: Vec<Complex64>, nodes_per_axis: Option<usize>) -> PyResult<f64> {
        let k = zeta.len().max(self.inner.vars() as usize).max(1);
        let point = poisson::PoissonPoint::new(bohr::PolydiskPoint::new(zeta).map_err(err)?);
        let n = nodes_per_axis.unwrap_or(match k {
            1 => 1024,
            2 => 512,
            _ => 128,
        });
        let grid = torus::QuadratureGrid::new(k, n).map_err(err)?;
        poisson::jensen_gap(&self.inner, &point, &grid).map_err(err)
    }

    fn __mul__(&self, other: &LiftedPolynomial) -> LiftedPolynomial {
        LiftedPolynomial {
            inner: &self.inner * &other.inner,
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }

    fn __eq__(&self, other: &LiftedPolynomial) -> bool {
        self.inner == other.inner
    }
}

fn szego_result_to_dict<'py>(
    py: Python<'py>,
    r: &szego::SzegoResult,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("S", r.value)?;
    d.set_item("lower", r.lower)?;
    d.set_item("upper", r.upper)?;
    d.set_item("converged", r.converged)?;
    let coeffs: Vec<(Vec<(u32, u32)>, Complex64)> = r
        .coeffs
        .iter()
        .map(|(a, c)| (a.entries().to_vec(), *c))
        .collect();
    d.set_item("coeffs", coeffs)?;
    Ok(d)
}

/// Truncated extremal value for the weight |h|^power.
#[pyfunction]
#[pyo3(signature = (h, power, p, vars, degree, nodes_per_axis=None))]
fn szego_modulus<'py>(
    py: Python<'py>,
    h: &LiftedPolynomial,
    power: f64,
    p: f64,
    vars: usize,
    degree: usize,
    nodes_per_axis: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let weight = szego::WeightSpec::modulus_power(h.inner.clone(), power).map_err(err)?;
    let r = if p == 2.0 {
        let grid = match nodes_per_axis {
            Some(n) => torus::QuadratureGrid::new(vars.max(1), n).map_err(err)?,
            None => szego::exact_grid(&weight, vars, degree).map_err(err)?,
        };
        szego::szego_p2(&weight, &szego::build_index_set(vars, degree), &grid).map_err(err)?
    } else {
        let mut cfg = szego::SzegoConfig::new(p, vars, degree).map_err(err)?;
        cfg.nodes_per_axis = nodes_per_axis;
        szego::szego_general(&weight, &cfg).map_err(err)?
    };
    szego_result_to_dict(py, &r)
}

/// Truncated extremal value for a Hermitian Fourier-table weight; entries are
/// (((position, exponent), ...), value) with signed exponents.
#[pyfunction]
#[pyo3(signature = (entries, p, vars, degree, nodes_per_axis=None))]
fn szego_table<'py>(
    py: Python<'py>,
    entries: Vec<(Vec<(u32, i32)>, Complex64)>,
    p: f64,
    vars: usize,
    degree: usize,
    nodes_per_axis: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let pairs: Result<Vec<_>, CoreError> = entries
        .into_iter()
        .map(|(idx, v)| szego::SignedIndex::new(idx).map(|i| (i, v)))
        .collect();
    let weight = szego::WeightSpec::fourier_table(pairs.map_err(err)?).map_err(err)?;
    let r = if p == 2.0 {
        let grid = match nodes_per_axis {
            Some(n) => torus::QuadratureGrid::new(vars.max(1), n).map_err(err)?,
            None => szego::exact_grid(&weight, vars, degree).map_err(err)?,
        };
        szego::szego_p2(&weight, &szego::build_index_set(vars, degree), &grid).map_err(err)?
    } else {
        let mut cfg = szego::SzegoConfig::new(p, vars, degree).map_err(err)?;
        cfg.nodes_per_axis = nodes_per_axis;
        szego::szego_general(&weight, &cfg).map_err(err)?
    };
    szego_result_to_dict(py, &r)
}

/// l1 = l1 . c0 factorization; returns (b, c, breakpoints, all_checks_passed).
#[pyfunction]
fn factorize_l1(
    values: Vec<Complex64>,
) -> PyResult<(Vec<Complex64>, Vec<f64>, Vec<(u64, usize)>, bool)> {
    let seq = seqfactor::SummableSeq::new(values);
    let r = seqfactor::factorize_l1(&seq);
    let verify = seqfactor::verify_factorization(&seq, &r);
    Ok((r.b, r.c, r.breakpoints, verify.all_passed))
}

#[pymodule]
fn bohr_szego(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<DirichletSeries>()?;
    m.add_class::<LiftedPolynomial>()?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(index_of, m)?)?;
    m.add_function(wrap_pyfunction!(prime, m)?)?;
    m.add_function(wrap_pyfunction!(szego_modulus, m)?)?;
    m.add_function(wrap_pyfunction!(szego_table, m)?)?;
    m.add_function(wrap_pyfunction!(factorize_l1, m)?)?;
    Ok(())
}
