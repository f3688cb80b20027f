use std::path::Path;

use num_complex::Complex64;
use serde_json::json;

use bohr_szego_core::bohr::{lift as bohr_lift, unlift as bohr_unlift, PolydiskPoint};
use bohr_szego_core::io::{
    format_g17, polynomial_from_json, polynomial_to_json, profile_csv, series_from_json,
    series_to_json, weight_from_json, PolynomialJson, SeriesJson, WeightJson,
};
use bohr_szego_core::poisson::{jensen_gap, outer_gap_with_tol, PoissonPoint};
use bohr_szego_core::seqfactor::{factorize_l1, verify_factorization, SummableSeq};
use bohr_szego_core::szego::{
    build_index_set, exact_grid, szego_general, szego_p2, SignedIndex, SzegoConfig, WeightOnGrid,
};
use bohr_szego_core::torus::{
    abschnitt_profile, d0_profile_with, line_average, metric_d0,
    metric_p, qmc_integral, LineAverageConfig, PointTransform, QuadratureGrid,
};
use bohr_szego_core::{primes, DirichletSeries, LiftedPolynomial};

use crate::util::{
    emit, json_finite, parse_f64_list, parse_point, parse_usize_list, read_json, Failure,
};

fn load_series(path: &Path) -> Result<DirichletSeries, Failure> {
    let j: SeriesJson = read_json(path)?;
    Ok(series_from_json(&j)?)
}

fn load_poly(path: &Path) -> Result<LiftedPolynomial, Failure> {
    let j: PolynomialJson = read_json(path)?;
    Ok(polynomial_from_json(&j)?)
}

pub fn lift(series: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let s = load_series(series)?;
    let f = bohr_lift(&s);
    let text = serde_json::to_string_pretty(&polynomial_to_json(&f)).unwrap();
    emit(out, &text)
}

pub fn unlift(poly: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let f = load_poly(poly)?;
    let s = bohr_unlift(&f)?;
    let text = serde_json::to_string_pretty(&series_to_json(&s)).unwrap();
    emit(out, &text)
}

pub fn eval(
    series: Option<&Path>,
    poly: Option<&Path>,
    sigma: f64,
    t: f64,
    point: Option<&str>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let value = match (series, poly) {
        (Some(s), None) => load_series(s)?.evaluate_line(sigma, t),
        (None, Some(p)) => {
            let f = load_poly(p)?;
            let coords = parse_point(point.ok_or_else(|| {
                Failure::Input("polynomial evaluation needs --point".into())
            })?)?;
            let zeta = PolydiskPoint::new(coords).map_err(Failure::from)?;
            f.evaluate(&zeta)
        }
        _ => {
            return Err(Failure::Input(
                "pass exactly one of --series or --poly".into(),
            ))
        }
    };
    emit(
        out,
        &serde_json::to_string_pretty(&json!({"re": value.re, "im": value.im})).unwrap(),
    )
}

#[allow(clippy::too_many_arguments)]
pub fn metric(
    poly: Option<&Path>,
    series: Option<&Path>,
    kind: &str,
    p: f64,
    estimator: &str,
    lattice_n: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let f = match (poly, series) {
        (Some(p), None) => load_poly(p)?,
        (None, Some(s)) => bohr_lift(&load_series(s)?),
        _ => {
            return Err(Failure::Input(
                "pass exactly one of --series or --poly".into(),
            ))
        }
    };
    let report = match (kind, estimator) {
        ("d0", "grid") => json!({"kind": "d0", "value": metric_d0(&f).map_err(Failure::from)?}),
        ("p", "grid") => {
            json!({"kind": "p", "p": p, "value": metric_p(&f, p).map_err(Failure::from)?})
        }
        (k @ ("d0" | "p"), "lattice") => {
            let dim = f.vars().max(1) as usize;
            let g = f.clone();
            let closure = move |w: &[Complex64]| {
                let v = g.evaluate_at(w).norm();
                if k == "d0" {
                    v.ln_1p()
                } else {
                    v.powf(p)
                }
            };
            let r = qmc_integral(closure, dim, lattice_n, seed).map_err(Failure::from)?;
            let value = if k == "d0" { r.value } else { r.value.powf(1.0 / p) };
            json!({
                "kind": k,
                "estimator": "lattice",
                "value": value,
                "error": r.error,
                "nodes": r.nodes,
                "seed": seed,
            })
        }
        _ => {
            return Err(Failure::Input(format!(
                "unknown metric kind '{kind}' / estimator '{estimator}'"
            )))
        }
    };
    emit(out, &serde_json::to_string_pretty(&report).unwrap())
}

pub fn profile(
    mode: &str,
    poly: Option<&Path>,
    series: Option<&Path>,
    points: &str,
    sigma: f64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let rows: Vec<(f64, f64, f64)> = match mode {
        "r" => {
            let f = match (poly, series) {
                (Some(p), None) => load_poly(p)?,
                (None, Some(s)) => bohr_lift(&load_series(s)?),
                _ => return Err(Failure::Input("r-mode needs --poly or --series".into())),
            };
            let rs = parse_f64_list(points)?;
            let k = f.vars() as usize;
            let grid = QuadratureGrid::profile(k, f.max_axis_degree()).map_err(Failure::from)?;
            let coarse =
                QuadratureGrid::new(k.max(1), (grid.nodes_per_axis() / 2).max(1))
                    .map_err(Failure::from)?;
            let fine = d0_profile_with(&f, &rs, &grid).map_err(Failure::from)?;
            let rough = d0_profile_with(&f, &rs, &coarse).map_err(Failure::from)?;
            rs.iter()
                .zip(fine.iter().zip(rough.iter()))
                .map(|(&r, (&v, &w))| (r, v, (v - w).abs()))
                .collect()
        }
        "sigma" => {
            let s = series
                .map(load_series)
                .transpose()?
                .ok_or_else(|| Failure::Input("sigma-mode needs --series".into()))?;
            let sigmas = parse_f64_list(points)?;
            let values = bohr_szego_core::torus::sigma_profile(&s, &sigmas)
                .map_err(Failure::from)?;
            sigmas
                .iter()
                .zip(values.iter())
                .map(|(&s, &v)| (s, v, 0.0))
                .collect()
        }
        "k" => {
            let s = series
                .map(load_series)
                .transpose()?
                .ok_or_else(|| Failure::Input("k-mode needs --series".into()))?;
            let ks: Vec<u32> = parse_usize_list(points)?
                .into_iter()
                .map(|k| k as u32)
                .collect();
            let values = abschnitt_profile(&s, sigma, &ks).map_err(Failure::from)?;
            ks.iter()
                .zip(values.iter())
                .map(|(&k, &v)| (k as f64, v, 0.0))
                .collect()
        }
        _ => return Err(Failure::Input(format!("unknown profile mode '{mode}'"))),
    };
    emit(out, &profile_csv(&rows))
}

pub fn ergodic(
    series: &Path,
    sigma: f64,
    t_start: f64,
    t_max: f64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if sigma < 0.0 {
        return Err(Failure::Input("ergodic needs sigma >= 0".into()));
    }
    let s = load_series(series)?;
    let shifted = s.vertical_shift(sigma);
    let torus = metric_d0(&bohr_lift(&shifted)).map_err(Failure::from)?;
    let cfg = LineAverageConfig {
        t_start,
        t_max,
        tol: 0.0,
        dt: None,
    };
    let rep = line_average(&s, sigma, &cfg, PointTransform::Log1pAbs).map_err(Failure::from)?;
    let mut csv = String::from("T,line_average,torus_value,gap\n");
    let mut gaps = Vec::new();
    for stage in &rep.stages {
        let gap = (stage.value - torus).abs();
        gaps.push(gap);
        csv.push_str(&format!(
            "{},{},{},{}\n",
            format_g17(stage.t),
            format_g17(stage.value),
            format_g17(torus),
            format_g17(gap)
        ));
    }
    let max_increase = gaps
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    let summary = json!({
        "final_gap": gaps.last().copied().unwrap_or(0.0),
        "max_gap_increase": max_increase,
        "non_increasing": max_increase <= 2e-3,
        "warning": if rep.converged { serde_json::Value::Null } else { json!("schedule exhausted before tolerance") },
    });
    let summary_text = serde_json::to_string(&summary).unwrap();
    if out.is_some() {
        emit(out, &csv)?;
        println!("{summary_text}");
    } else {
        emit(None, &csv)?;
        eprintln!("{summary_text}");
    }
    Ok(())
}

pub fn szego(
    weight_path: &Path,
    p: f64,
    vars: usize,
    degree: usize,
    grid_override: Option<usize>,
    ladder: Option<&str>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let wj: WeightJson = read_json(weight_path)?;
    let weight = weight_from_json(&wj)?;
    let solve_at = |d: usize| -> Result<bohr_szego_core::szego::SzegoResult, Failure> {
        if p == 2.0 {
            let grid = match grid_override {
                Some(n) => QuadratureGrid::new(vars.max(1), n).map_err(Failure::from)?,
                None => exact_grid(&weight, vars, d).map_err(Failure::from)?,
            };
            Ok(szego_p2(&weight, &build_index_set(vars, d), &grid)?)
        } else {
            let mut cfg = SzegoConfig::new(p, vars, d).map_err(Failure::from)?;
            cfg.nodes_per_axis = grid_override;
            Ok(szego_general(&weight, &cfg)?)
        }
    };
    let main = solve_at(degree)?;
    let mut ladder_json = Vec::new();
    if let Some(text) = ladder {
        for d in parse_usize_list(text)? {
            let r = solve_at(d)?;
            ladder_json.push(json!({"d": d, "S": r.value, "gap": r.value - r.lower}));
        }
    }
    let coeffs: Vec<serde_json::Value> = main
        .coeffs
        .iter()
        .map(|(alpha, c)| {
            json!({
                "alpha": alpha.entries().iter().map(|&(p, e)| json!([p, e])).collect::<Vec<_>>(),
                "re": c.re,
                "im": c.im,
            })
        })
        .collect();
    let report = json!({
        "S": main.value,
        "lower": main.lower,
        "upper": main.upper,
        "coeffs": coeffs,
        "ladder": ladder_json,
        "p": p,
        "vars": vars,
        "degree": degree,
        "converged": main.converged,
    });
    emit(out, &serde_json::to_string_pretty(&report).unwrap())
}

pub fn outer(poly: &Path, tol: f64, out: Option<&Path>) -> Result<(), Failure> {
    let f = load_poly(poly)?;
    let rep = outer_gap_with_tol(&f, tol).map_err(Failure::from)?;
    let report = json!({
        "gamma": json_finite(rep.gamma),
        "outer": rep.outer,
        "tol": rep.tol,
    });
    emit(out, &serde_json::to_string_pretty(&report).unwrap())
}

pub fn jensen(
    poly: &Path,
    zeta: &str,
    grid_override: Option<usize>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let f = load_poly(poly)?;
    let coords = parse_point(zeta)?;
    let k = coords.len().max(f.vars() as usize);
    let point = PoissonPoint::new(PolydiskPoint::new(coords).map_err(Failure::from)?);
    let n = grid_override.unwrap_or(match k {
        0 | 1 => 1024,
        2 => 512,
        _ => 128,
    });
    let grid = QuadratureGrid::new(k.max(1), n).map_err(Failure::from)?;
    let gap = jensen_gap(&f, &point, &grid).map_err(Failure::from)?;
    let report = json!({
        "gap": json_finite(gap),
        "nodes_per_axis": n,
        "vars": k,
    });
    emit(out, &serde_json::to_string_pretty(&report).unwrap())
}

pub fn factorize_cmd(input: &Path, out: Option<&Path>) -> Result<(), Failure> {
    // accepts [x, x, ...] or [[re, im], ...]
    let raw: serde_json::Value = read_json(input)?;
    let arr = raw
        .as_array()
        .ok_or_else(|| Failure::Input("factorize input must be a JSON array".into()))?;
    let mut values = Vec::with_capacity(arr.len());
    let mut complex_input = false;
    for v in arr {
        match v {
            serde_json::Value::Number(x) => {
                values.push(Complex64::new(x.as_f64().unwrap_or(f64::NAN), 0.0))
            }
            serde_json::Value::Array(pair) if pair.len() == 2 => {
                complex_input = true;
                let re = pair[0].as_f64().ok_or_else(|| {
                    Failure::Input("complex entries must be [re, im] numbers".into())
                })?;
                let im = pair[1].as_f64().ok_or_else(|| {
                    Failure::Input("complex entries must be [re, im] numbers".into())
                })?;
                values.push(Complex64::new(re, im));
            }
            _ => {
                return Err(Failure::Input(
                    "factorize entries must be numbers or [re, im] pairs".into(),
                ))
            }
        }
    }
    let seq = SummableSeq::new(values);
    let result = factorize_l1(&seq);
    let verify = verify_factorization(&seq, &result);
    let num = |x: f64| serde_json::Value::from(x);
    let b: Vec<serde_json::Value> = if complex_input {
        result.b.iter().map(|z| json!([z.re, z.im])).collect()
    } else {
        result.b.iter().map(|z| num(z.re)).collect()
    };
    let checks: serde_json::Map<String, serde_json::Value> = verify
        .checks
        .iter()
        .map(|c| {
            (
                c.name.to_string(),
                json!({"passed": c.passed, "detail": c.detail}),
            )
        })
        .collect();
    let report = json!({
        "b": b,
        "c": result.c,
        "breakpoints": result
            .breakpoints
            .iter()
            .map(|&(s, k)| json!({"s": s, "k": k}))
            .collect::<Vec<_>>(),
        "abs_sum": result.abs_sum,
        "checks": checks,
        "all_passed": verify.all_passed,
    });
    emit(out, &serde_json::to_string_pretty(&report).unwrap())?;
    if verify.all_passed {
        Ok(())
    } else {
        Err(Failure::Check("factorization verification failed".into()))
    }
}

pub fn fourier(
    weight_path: &Path,
    alpha: Option<&str>,
    vars: usize,
    degree: usize,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let wj: WeightJson = read_json(weight_path)?;
    let weight = weight_from_json(&wj)?;
    let grid = exact_grid(&weight, vars.max(weight.vars() as usize), degree)
        .map_err(Failure::from)?;
    let data = WeightOnGrid::new(&weight, &grid).map_err(Failure::from)?;
    let report = match alpha {
        Some(text) => {
            let pairs: Vec<(u32, i32)> = serde_json::from_str(text)
                .map_err(|e| Failure::Input(format!("bad --alpha: {e}")))?;
            let idx = SignedIndex::new(pairs).map_err(Failure::from)?;
            let v = data.fourier_coeff(&idx);
            json!({
                "alpha": idx.entries().iter().map(|&(p, e)| json!([p, e])).collect::<Vec<_>>(),
                "re": v.re,
                "im": v.im,
            })
        }
        None => {
            let mut rows = Vec::new();
            for a in build_index_set(vars, degree) {
                let idx = SignedIndex::from_unsigned(&a);
                let v = data.fourier_coeff(&idx);
                rows.push(json!({
                    "alpha": idx.entries().iter().map(|&(p, e)| json!([p, e])).collect::<Vec<_>>(),
                    "re": v.re,
                    "im": v.im,
                }));
            }
            json!({"khat0": data.khat0(), "coefficients": rows})
        }
    };
    emit(out, &serde_json::to_string_pretty(&report).unwrap())
}

pub fn divergence_witness(terms: usize, sigmas: &str, out: Option<&Path>) -> Result<(), Failure> {
    if terms == 0 || terms > 40 {
        return Err(Failure::Input(
            "divergence witness supports 1..=40 terms".into(),
        ));
    }
    let sigmas = parse_f64_list(sigmas)?;
    // primes with doubling gaps: p_{j+1} > 2 p_j
    let mut ps = vec![2u64];
    while ps.len() < terms {
        let last = *ps.last().unwrap();
        ps.push(primes::next_prime_above(2 * last));
    }
    let coeffs: Vec<f64> = ps.iter().map(|&p| (p as f64).ln()).collect();
    // the coefficients grow without bound: each step adds more than log 2
    let min_increment = coeffs
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let damped: Vec<serde_json::Value> = sigmas
        .iter()
        .map(|&s| {
            let total: f64 = ps
                .iter()
                .map(|&p| (p as f64).ln() * (p as f64).powf(-2.0 * s))
                .sum();
            json!({"sigma": s, "sum": total})
        })
        .collect();
    let report = json!({
        "primes": ps,
        "coefficients": coeffs,
        "unbounded_certificate": {
            "strictly_increasing": min_increment > 0.0,
            "min_increment": min_increment,
            "exceeds_log2": min_increment > 2f64.ln() - 1e-12,
            "last_coefficient": coeffs.last().copied().unwrap_or(0.0),
        },
        "damped_sums": damped,
    });
    emit(out, &serde_json::to_string_pretty(&report).unwrap())
}

