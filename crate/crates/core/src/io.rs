//! JSON schemas and CSV formatting for the file interfaces.
//!
//! Series files:      {"terms":[{"n":6,"re":3.0,"im":0.0},...]}
//! Polynomial files:  {"monomials":[{"alpha":[[1,2],[2,1]],"re":1.0,"im":0.0},...]}
//! Weight files:      {"kind":"modulus_power","p":2.0,"h":{...polynomial...}}
//!                 or {"kind":"fourier_table","entries":[{"alpha":[[1,1],[2,-1]],"re":0.5,"im":0.0},...]}
//!
//! All floating-point output is written with 17 significant digits so the
//! decimal files round-trip bit-exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bohr::{DirichletSeries, LiftedPolynomial, MultiIndex};
use crate::error::{Error, Result};
use crate::szego::{SignedIndex, WeightSpec};

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct TermJson {
    pub n: u64,
    pub re: f64,
    pub im: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SeriesJson {
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct MonomialJson {
    pub alpha: Vec<(u32, i64)>,
    pub re: f64,
    pub im: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PolynomialJson {
    pub monomials: Vec<MonomialJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightJson {
    ModulusPower { p: f64, h: PolynomialJson },
    FourierTable { entries: Vec<MonomialJson> },
}

pub fn series_to_json(s: &DirichletSeries) -> SeriesJson {
    SeriesJson {
        terms: s
            .terms()
            .map(|(n, c)| TermJson {
                n,
                re: c.re,
                im: c.im,
            })
            .collect(),
    }
}

pub fn series_from_json(j: &SeriesJson) -> Result<DirichletSeries> {
    DirichletSeries::from_terms(j.terms.iter().map(|t| (t.n, Complex64::new(t.re, t.im))))
}

pub fn polynomial_to_json(f: &LiftedPolynomial) -> PolynomialJson {
    PolynomialJson {
        monomials: f
            .monomials()
            .map(|(a, c)| MonomialJson {
                alpha: a.entries().iter().map(|&(p, e)| (p, e as i64)).collect(),
                re: c.re,
                im: c.im,
            })
            .collect(),
    }
}

pub fn polynomial_from_json(j: &PolynomialJson) -> Result<LiftedPolynomial> {
    let mut f = LiftedPolynomial::new();
    for m in &j.monomials {
        let pairs: Result<Vec<(u32, u32)>> = m
            .alpha
            .iter()
            .map(|&(p, e)| {
                u32::try_from(e)
                    .map(|e| (p, e))
                    .map_err(|_| Error::Invalid(format!("negative exponent {e} in polynomial")))
            })
            .collect();
        f.add_monomial(MultiIndex::new(pairs?)?, Complex64::new(m.re, m.im));
    }
    Ok(f)
}

pub fn weight_to_json(w: &WeightSpec) -> WeightJson {
    match w {
        WeightSpec::ModulusPower { h, power } => WeightJson::ModulusPower {
            p: *power,
            h: polynomial_to_json(h),
        },
        WeightSpec::FourierTable { entries } => WeightJson::FourierTable {
            entries: entries
                .iter()
                .map(|(idx, v)| MonomialJson {
                    alpha: idx.entries().iter().map(|&(p, e)| (p, e as i64)).collect(),
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        },
    }
}

pub fn weight_from_json(j: &WeightJson) -> Result<WeightSpec> {
    match j {
        WeightJson::ModulusPower { p, h } => {
            WeightSpec::modulus_power(polynomial_from_json(h)?, *p)
        }
        WeightJson::FourierTable { entries } => {
            let pairs: Result<Vec<(SignedIndex, Complex64)>> = entries
                .iter()
                .map(|m| {
                    let idx = SignedIndex::new(m.alpha.iter().map(|&(p, e)| (p, e as i32)))?;
                    Ok((idx, Complex64::new(m.re, m.im)))
                })
                .collect();
            WeightSpec::fourier_table(pairs?)
        }
    }
}

/// 17-significant-digit decimal, round-trip exact for f64.
pub fn format_g17(x: f64) -> String {
    format!("{:.16e}", x)
}

/// CSV profile writer: header `parameter,value,error`, one row per point.
pub fn profile_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("parameter,value,error\n");
    for &(p, v, e) in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            format_g17(p),
            format_g17(v),
            format_g17(e)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_json_roundtrip() {
        let s = DirichletSeries::from_terms([
            (1, Complex64::new(1.0, 0.0)),
            (2, Complex64::new(-2.0, 0.5)),
            (6, Complex64::new(3.0, 0.0)),
        ])
        .unwrap();
        let j = series_to_json(&s);
        let text = serde_json::to_string(&j).unwrap();
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(series_from_json(&back).unwrap(), s);
    }

    #[test]
    fn polynomial_json_matches_documented_shape() {
        let f = LiftedPolynomial::from_monomials([(
            MultiIndex::new([(1, 2), (2, 1)]).unwrap(),
            Complex64::new(1.0, 0.0),
        )]);
        let text = serde_json::to_string(&polynomial_to_json(&f)).unwrap();
        assert_eq!(
            text,
            r#"{"monomials":[{"alpha":[[1,2],[2,1]],"re":1.0,"im":0.0}]}"#
        );
    }

    #[test]
    fn g17_roundtrips_doubles() {
        for x in [std::f64::consts::PI, 2f64.ln(), 1.0 / 3.0, 6.02e23] {
            let s = format_g17(x);
            let y: f64 = s.parse().unwrap();
            assert_eq!(x, y, "{s}");
        }
    }

    #[test]
    fn weight_json_roundtrip() {
        let w = WeightSpec::fourier_table([
            (SignedIndex::zero(), Complex64::new(1.0, 0.0)),
            (
                SignedIndex::new([(1, 1), (2, -1)]).unwrap(),
                Complex64::new(0.5, 0.0),
            ),
        ])
        .unwrap();
        let j = weight_to_json(&w);
        let text = serde_json::to_string(&j).unwrap();
        let back = weight_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        match back {
            WeightSpec::FourierTable { entries } => assert_eq!(entries.len(), 3),
            _ => panic!("wrong variant"),
        }
    }
}
