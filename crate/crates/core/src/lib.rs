//! Numerical library for Dirichlet polynomials and their power-series lifts
//! on the infinite polydisk.
//!
//! The crate covers four connected areas:
//!
//! - **`bohr`** - exact arithmetic of the correspondence between Dirichlet
//!   polynomials `sum a_n n^{-s}` and sparse polynomials in infinitely many
//!   variables, through prime-exponent multi-indices.
//! - **`torus`** - Haar quadrature on truncated tori, the `||.||_0` and
//!   `||.||_p` metrics, radial dilation, monotone profiles, and
//!   almost-periodic vertical-line averages (the ergodic route to the same
//!   integrals).
//! - **`poisson`** / **`mahler`** - Poisson kernels and integrals, the Jensen
//!   inequality gap, and the outer-function criterion backed by an exact
//!   sliced evaluation of `∫ log|F| dm`.
//! - **`szego`** - the truncated extremal problem `S_d(K)` with its certified
//!   interval: the exact p = 2 normal-equation solve and a smoothed convex
//!   minimizer for general p > 1.
//! - **`seqfactor`** - the constructive `l^1 = l^1 . c_0` factorization with
//!   its verification suite.

pub mod bohr;
pub mod error;
pub mod io;
pub mod linalg;
pub mod mahler;
pub mod numeric;
pub mod poisson;
pub mod primes;
pub mod seqfactor;
pub mod szego;
pub mod torus;

pub use bohr::{
    factorize, index_of, lift, multiply, unlift, DirichletSeries, LiftedPolynomial, MultiIndex,
    PolydiskPoint,
};
pub use error::{Error, Result};
pub use num_complex::Complex64;
