use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use siegel_core::discrete_series::{
    c_mn, matrix_coeff, matrix_coeff_via_lift, MatrixCoefficientSpec, Weight,
};
use siegel_core::nonvanishing::{n0_detl, reference_table, ThresholdSettings};
use siegel_core::petersson::{
    default_kernel_points, mc_cmn, verify_cor62, verify_thm93, FundamentalDomainSpec,
    IdentityReport, IdentitySettings,
};
use siegel_core::polynomial::MatrixPolynomial;
use siegel_core::sampling::{random_symplectic, sub_rng};

use crate::args::{Common, Format, Suite, VerifyArgs};
use crate::commands::{emit, threshold_settings, to_json, usage, Outcome};
use crate::Failure;

/// Tolerance of the matrix-coefficient identity.
pub const COEFF_TOL: f64 = 1e-9;

#[derive(Debug, Serialize)]
pub struct CheckLine {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<IdentityReport>,
}

impl CheckLine {
    fn new(
        suite: &'static str,
        name: impl Into<String>,
        pass: bool,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            suite,
            name: name.into(),
            pass,
            detail: detail.into(),
            report: None,
        }
    }
}

pub fn table1(n: usize, settings: &ThresholdSettings) -> Result<CheckLine, Failure> {
    let (first_m, reference) =
        reference_table(n).ok_or_else(|| usage(format!("no reference table for degree {n}")))?;
    let cells: Vec<(u32, i64, u64)> = (0..13u32)
        .flat_map(|l| (0..8).map(move |j| (l, first_m + j as i64, reference[l as usize][j])))
        .collect();
    let results: Vec<Result<u64, String>> = cells
        .par_iter()
        .map(|&(l, m, _)| {
            n0_detl(l, Weight::new(m, n), settings)
                .map(|r| r.n0)
                .map_err(|e| e.to_string())
        })
        .collect();
    let mut bad = Vec::new();
    for (&(l, m, expect), got) in cells.iter().zip(&results) {
        match got {
            Ok(v) if *v == expect => {}
            Ok(v) => bad.push(format!("(l={l}, m={m}): got {v}, expected {expect}")),
            Err(e) => bad.push(format!("(l={l}, m={m}): {e}")),
        }
    }
    let matched = cells.len() - bad.len();
    let mut detail = format!("{matched}/{} entries reproduced", cells.len());
    for b in &bad {
        let _ = write!(detail, "; {b}");
    }
    Ok(CheckLine::new(
        "table1",
        format!("n={n}"),
        bad.is_empty(),
        detail,
    ))
}

/// Relative discrepancy `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

pub fn coeff(samples: usize, seed: u64) -> Result<Vec<CheckLine>, Failure> {
    let mut lines = Vec::new();
    for n in 1..=3usize {
        let weight = Weight::new(2 * n as i64 + 2, n);
        let polys = [
            ("1", MatrixPolynomial::one(n)),
            ("det", (*MatrixPolynomial::det_power(n, 1)).clone()),
            ("det^2", (*MatrixPolynomial::det_power(n, 2)).clone()),
            ("X_{1,1}", MatrixPolynomial::variable(n, 1, 1)?),
        ];
        for (k, (name, mu)) in polys.into_iter().enumerate() {
            let spec = MatrixCoefficientSpec::new(mu, weight)?;
            let stream = seed ^ ((n as u64) << 40) ^ ((k as u64) << 32);
            let worst = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let g = random_symplectic(n, 0.8, &mut sub_rng(stream, i as u64));
                    let a = matrix_coeff(&spec, &g)?;
                    let b = matrix_coeff_via_lift(&spec, &g)?;
                    Ok(rel_diff(a, b))
                })
                .collect::<Result<Vec<f64>, siegel_core::Error>>()?
                .into_iter()
                .fold(0.0, f64::max);
            lines.push(CheckLine::new(
                "coeff",
                format!("n={n} mu={name} m={}", weight.m),
                worst <= COEFF_TOL,
                format!(
                    "max relative error {worst:.3e} over {samples} matrices (tol {COEFF_TOL:e})"
                ),
            ));
        }
    }
    Ok(lines)
}

pub fn cmn(samples: usize, seed: u64) -> Result<Vec<CheckLine>, Failure> {
    let mut lines = Vec::new();
    for (n, m) in [(1usize, 4i64), (1, 12), (2, 5), (2, 8)] {
        let w = Weight::new(m, n);
        let exact = c_mn(w)?;
        let mc = mc_cmn(w, samples, seed)?;
        let z = (mc.value - exact).abs() / mc.error_estimate;
        lines.push(CheckLine::new(
            "cmn",
            format!("n={n} m={m}"),
            z <= 3.0,
            format!(
                "closed form {exact:.9}, Monte Carlo {:.9} +- {:.2e} ({z:.2} standard errors)",
                mc.value, mc.error_estimate
            ),
        ));
    }
    Ok(lines)
}

fn identity_line(suite: &'static str, name: String, r: IdentityReport) -> CheckLine {
    let detail = format!(
        "lhs {:.10e}{:+.3e}i, rhs {:.10e}{:+.3e}i, relative error {:.3e} (series {:.1e}, quadrature {:.1e}, cutoff {:.1e})",
        r.lhs.re, r.lhs.im, r.rhs.re, r.rhs.im, r.rel_err, r.error_budget.series, r.error_budget.quadrature, r.error_budget.cutoff
    );
    let mut line = CheckLine::new(suite, name, r.pass, detail);
    line.report = Some(r);
    line
}

fn identity_settings(a: &VerifyArgs) -> Result<IdentitySettings, Failure> {
    Ok(IdentitySettings {
        radius: a.radius,
        domain: FundamentalDomainSpec::new(a.y_max, a.quad_tol)?,
        ..IdentitySettings::default()
    })
}

pub fn run(common: &Common, a: &VerifyArgs) -> Outcome {
    let mut lines = Vec::new();
    let want = |s: Suite| a.suite == s || a.suite == Suite::All;
    if want(Suite::Table1) {
        let settings = threshold_settings(common, 200_000);
        let degrees = match a.n {
            Some(n) => vec![n],
            None => vec![1, 2],
        };
        for n in degrees {
            lines.push(table1(n, &settings)?);
        }
    }
    if want(Suite::Coeff) {
        lines.extend(coeff(a.coeff_samples, common.seed)?);
    }
    if want(Suite::Cmn) {
        lines.extend(cmn(a.mc_samples, common.seed)?);
    }
    if want(Suite::Cor62) {
        let r = verify_cor62(12, &identity_settings(a)?)?;
        lines.push(identity_line("cor62", "m=12 full modular group".into(), r));
    }
    if want(Suite::Thm93) {
        for r in verify_thm93(12, &default_kernel_points(), &identity_settings(a)?)? {
            let name = r.identity.rsplit("xi = ").next().unwrap_or("").to_string();
            lines.push(identity_line("thm93", format!("xi={name}"), r));
        }
    }
    let all_pass = lines.iter().all(|l| l.pass);
    let text = match common.format {
        Format::Json => to_json(&lines)?,
        _ => {
            let mut s = String::new();
            for l in &lines {
                let _ = writeln!(
                    s,
                    "{} {} {}: {}",
                    if l.pass { "PASS" } else { "FAIL" },
                    l.suite,
                    l.name,
                    l.detail
                );
            }
            let _ = writeln!(s, "{}", if all_pass { "PASS" } else { "FAIL" });
            s
        }
    };
    emit(common, &text)?;
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Fail)
    }
}
