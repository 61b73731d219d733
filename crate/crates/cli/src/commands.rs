use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;
use siegel_core::discrete_series::{
    c_mn, matrix_coeff, matrix_coeff_via_lift, MatrixCoefficientSpec, Weight,
};
use siegel_core::io::{load_siegel_point, load_symplectic, parse_complex};
use siegel_core::lattice::{enumerate_ball_cached, CongruenceGroup, EnumerationBall};
use siegel_core::linalg::RealMatrix;
use siegel_core::nonvanishing::{
    n0_detl, n0_general, n0_table, reference_table, McSettings, TableCell, ThresholdQuery,
    ThresholdSettings,
};
use siegel_core::petersson::mc_cmn;
use siegel_core::poincare::{kernel_series, poincare_F, poincare_f, TruncatedSeriesResult};
use siegel_core::polynomial::MatrixPolynomial;
use siegel_core::symplectic::SiegelPoint;

use crate::args::{
    Cli, CmnArgs, CoeffArgs, Command, Common, Format, KernelArgs, N0Args, PoincareArgs, SeriesArgs,
    TableArgs,
};
use crate::Failure;

pub type Outcome = Result<(), Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let c = &cli.common;
    match &cli.command {
        Command::N0(a) => n0(c, a),
        Command::N0Table(a) => table(c, a),
        Command::Cmn(a) => cmn(c, a),
        Command::Coeff(a) => coeff(c, a),
        Command::Poincare(a) => poincare(c, a),
        Command::Kernel(a) => kernel(c, a),
        Command::Verify(a) => crate::verify::run(c, a),
    }
}

/// Writes `text` to `--output` or standard output.
pub fn emit(common: &Common, text: &str) -> Outcome {
    match &common.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Numerical(e.to_string()))
}

pub fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub fn threshold_settings(common: &Common, mc_samples: usize) -> ThresholdSettings {
    ThresholdSettings {
        tol: common.tol,
        mc_samples,
        seed: common.seed,
        ..ThresholdSettings::default()
    }
}

pub fn parse_poly(n: usize, text: &str) -> Result<MatrixPolynomial, Failure> {
    let path = Path::new(text);
    if text.ends_with(".json") || path.is_file() {
        let body = std::fs::read_to_string(path).map_err(|e| usage(format!("{text}: {e}")))?;
        return Ok(MatrixPolynomial::from_json(Some(n), &body)?);
    }
    Ok(MatrixPolynomial::parse(n, text)?)
}

fn check_integrable(weight: Weight) -> Outcome {
    if weight.n == 0 {
        return Err(usage("degree n must be positive"));
    }
    if weight.m <= 2 * weight.n as i64 {
        return Err(usage(format!(
            "weight m = {} must exceed 2n = {} for this command",
            weight.m,
            2 * weight.n
        )));
    }
    Ok(())
}

fn n0(common: &Common, a: &N0Args) -> Outcome {
    let weight = Weight::new(a.m, a.n);
    check_integrable(weight)?;
    let settings = threshold_settings(common, a.mc_samples);
    if let Some(mu) = &a.mu {
        let query = ThresholdQuery::new(parse_poly(a.n, mu)?, weight)?;
        let mc = McSettings {
            samples: a.mc_samples,
            seed: common.seed,
            ..McSettings::default()
        };
        let report = n0_general(&query, &mc)?;
        let text = match common.format {
            Format::Json => to_json(&report)?,
            _ => {
                let mut s = format!("{}\n", report.n0);
                for e in &report.estimates {
                    let _ = writeln!(
                        s,
                        "N={} M(N)={:.12} D={:.6e} +- {:.2e}",
                        e.level, e.big_m, e.difference, e.std_error
                    );
                }
                let _ = writeln!(
                    s,
                    "method=monte_carlo samples={} z={} validated={}",
                    report.samples, report.z, report.validated
                );
                s
            }
        };
        return emit(common, &text);
    }
    let r = n0_detl(a.l, weight, &settings)?;
    let text = match common.format {
        Format::Json => to_json(&r)?,
        Format::Csv => format!(
            "n,l,m,N0,method,margin\n{},{},{},{},{},{:e}\n",
            a.n,
            a.l,
            a.m,
            r.n0,
            method_name(&r.method),
            r.margin
        ),
        Format::Text => format!(
            "{}\nmethod={} margin={:.6e} error_band={:.3e} validated={}\n",
            r.n0,
            method_name(&r.method),
            r.margin,
            r.error_band,
            r.validated
        ),
    };
    emit(common, &text)
}

pub fn method_name(m: &siegel_core::quadrature::IntegrationMethod) -> String {
    serde_json::to_value(m)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn parse_range(text: &str) -> Result<(i64, i64), Failure> {
    let bad = || usage(format!("cannot read range '{text}' (expected lo..hi)"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let hi = hi.trim_start_matches('=');
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn table_csv(cells: &[TableCell]) -> String {
    let mut s = String::from("n,l,m,N0,method,margin\n");
    for c in cells {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{:e}",
            c.n,
            c.l,
            c.m,
            c.result.n0,
            method_name(&c.result.method),
            c.result.margin
        );
    }
    s
}

fn table(common: &Common, a: &TableArgs) -> Outcome {
    let (l_lo, l_hi) = match &a.l_range {
        Some(r) => parse_range(r)?,
        None => (0, 12),
    };
    if l_lo < 0 {
        return Err(usage("l must be nonnegative"));
    }
    let (m_lo, m_hi) = match (&a.m_range, reference_table(a.n)) {
        (Some(r), _) => parse_range(r)?,
        (None, Some((first, _))) => (first, first + 7),
        (None, None) => return Err(usage("--m-range is required for this degree")),
    };
    let ls: Vec<u32> = (l_lo..=l_hi).map(|l| l as u32).collect();
    let ms: Vec<i64> = (m_lo..=m_hi).collect();
    for &m in &ms {
        check_integrable(Weight::new(m, a.n))?;
    }
    let cells = n0_table(a.n, &ls, &ms, &threshold_settings(common, a.mc_samples))?;
    let text = match common.format {
        Format::Json => to_json(&cells)?,
        _ => table_csv(&cells),
    };
    emit(common, &text)
}

fn cmn(common: &Common, a: &CmnArgs) -> Outcome {
    let weight = Weight::new(a.m, a.n);
    if a.n == 0 || a.m <= a.n as i64 {
        return Err(usage(format!(
            "C_(m,n) needs m > n >= 1 (got m = {}, n = {})",
            a.m, a.n
        )));
    }
    let value = c_mn(weight)?;
    let mc = match a.mc_samples {
        Some(k) => Some(mc_cmn(weight, k, common.seed)?),
        None => None,
    };
    let text = match common.format {
        Format::Json => to_json(&json!({ "n": a.n, "m": a.m, "c_mn": value, "monte_carlo": mc }))?,
        _ => {
            let mut s = format!("{value}\n");
            if let Some(r) = &mc {
                let _ = writeln!(
                    s,
                    "monte_carlo {} +- {:.3e} ({} samples)",
                    r.value, r.error_estimate, r.evaluations
                );
            }
            s
        }
    };
    emit(common, &text)
}

fn coeff(common: &Common, a: &CoeffArgs) -> Outcome {
    let g = load_symplectic(&a.matrix)?;
    let n = g.degree();
    let weight = Weight::new(a.m, n);
    if a.m <= n as i64 {
        return Err(usage(format!("weight m = {} must exceed n = {n}", a.m)));
    }
    let spec = MatrixCoefficientSpec::new(parse_poly(n, &a.mu)?, weight)?;
    let kak = matrix_coeff(&spec, &g)?;
    let direct = matrix_coeff_via_lift(&spec, &g)?;
    let diff = (kak - direct).norm();
    let text = match common.format {
        Format::Json => {
            to_json(&json!({ "value": kak, "lift_value": direct, "error_estimate": diff }))?
        }
        _ => format!("{} +- {:.3e}\n", fmt_c(kak), diff),
    };
    emit(common, &text)
}

pub fn fmt_c(z: Complex64) -> String {
    if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn default_radius(n: usize) -> f64 {
    match n {
        1 => 40.0,
        2 => 10.0,
        _ => 4.0,
    }
}

fn point(n: usize, z: Option<&str>, file: Option<&Path>) -> Result<SiegelPoint, Failure> {
    if let Some(path) = file {
        let p = load_siegel_point(path)?;
        if p.degree() != n {
            return Err(usage(format!(
                "point has degree {}, expected {n}",
                p.degree()
            )));
        }
        return Ok(p);
    }
    let z = parse_complex(
        z.ok_or_else(|| usage("an evaluation point (--z or --z-file) is required"))?,
    )?;
    scalar_point(n, z)
}

fn scalar_point(n: usize, z: Complex64) -> Result<SiegelPoint, Failure> {
    Ok(SiegelPoint::new(
        RealMatrix::identity(n, n) * z.re,
        RealMatrix::identity(n, n) * z.im,
    )?)
}

fn ball(common: &Common, s: &SeriesArgs) -> Result<EnumerationBall, Failure> {
    let weight = Weight::new(s.m, s.n);
    check_integrable(weight)?;
    let group = CongruenceGroup::new(s.n, s.level)?;
    let radius = s.radius.unwrap_or_else(|| default_radius(s.n));
    Ok(enumerate_ball_cached(
        &group,
        radius,
        common.budget,
        common.cache_dir.as_deref(),
    )?)
}

fn series_text(common: &Common, r: &TruncatedSeriesResult) -> Result<String, Failure> {
    Ok(match common.format {
        Format::Json => to_json(r)?,
        _ => format!(
            "{} +- {:.3e}\nterms={} radius={} (tail estimate |S(R) - S(R/2)|, heuristic)\n",
            fmt_c(r.value),
            r.tail_estimate,
            r.terms_used,
            r.radius
        ),
    })
}

fn poincare(common: &Common, a: &PoincareArgs) -> Outcome {
    let s = &a.series;
    let weight = Weight::new(s.m, s.n);
    let b = ball(common, s)?;
    let mu = parse_poly(s.n, &a.mu)?;
    let r = match &a.group_element {
        Some(path) => {
            let g = load_symplectic(path)?;
            if g.degree() != s.n {
                return Err(usage("group element has the wrong degree"));
            }
            poincare_F(&MatrixCoefficientSpec::new(mu, weight)?, &b, &g)?
        }
        None => poincare_f(
            &mu,
            weight,
            &b,
            &point(s.n, s.z.as_deref(), s.z_file.as_deref())?,
        )?,
    };
    emit(common, &series_text(common, &r)?)
}

fn kernel(common: &Common, a: &KernelArgs) -> Outcome {
    let s = &a.series;
    let b = ball(common, s)?;
    let xi = scalar_point(s.n, parse_complex(&a.xi)?)?;
    let z = point(s.n, s.z.as_deref(), s.z_file.as_deref())?;
    let r = kernel_series(Weight::new(s.m, s.n), &b, &xi, &z)?;
    emit(common, &series_text(common, &r)?)
}
