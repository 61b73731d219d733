//! Numerical checks of the inner-product identities: Monte Carlo for the
//! bounded-domain integral defining `C_{m,n}`, and in degree one the
//! Petersson product over the standard fundamental domain of `SL(2, Z)`
//! against the discriminant form.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrete_series::{c_mn, Weight};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_ball, CongruenceGroup, EnumerationBall, DEFAULT_BUDGET};
use crate::linalg::ComplexMatrix;
use crate::poincare::{kernel_series, poincare_f, TruncatedSeriesResult};
use crate::polynomial::MatrixPolynomial;
use crate::quadrature::{integrate_with_breaks, IntegralResult, IntegrationMethod, QuadSettings};
use crate::sampling::sub_rng;
use crate::symplectic::SiegelPoint;

/// Relative discrepancy accepted by the identity checks.
pub const IDENTITY_TOLERANCE: f64 = 0.02;

/// Monte Carlo estimate of `2^{n(n+1)} int_{D_n} det(I - w^* w)^{m-n-1}`.
///
/// The `n(n+1)/2` independent entries of `w` are drawn uniformly from the
/// unit disc and the sample is kept when `I - w^* w` is positive definite.
pub fn mc_cmn(weight: Weight, samples: usize, seed: u64) -> Result<IntegralResult> {
    weight.require_above_n()?;
    if samples < 1000 {
        return Err(Error::Sampling("at least 1000 samples are required".into()));
    }
    let n = weight.n;
    let k = n * (n + 1) / 2;
    let power = (weight.m - n as i64 - 1) as i32;
    const CHUNK: usize = 8192;
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<(f64, f64, usize)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = sub_rng(seed, c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let (mut s, mut s2, mut acc) = (0.0, 0.0, 0usize);
            let mut w = ComplexMatrix::zeros(n, n);
            for _ in 0..count {
                for i in 0..n {
                    for j in i..n {
                        let v = loop {
                            let x = 2.0 * rng.random::<f64>() - 1.0;
                            let y = 2.0 * rng.random::<f64>() - 1.0;
                            if x * x + y * y < 1.0 {
                                break Complex64::new(x, y);
                            }
                        };
                        w[(i, j)] = v;
                        w[(j, i)] = v;
                    }
                }
                let h = ComplexMatrix::identity(n, n) - w.adjoint() * &w;
                if let Some(ch) = h.clone().cholesky() {
                    let det: f64 = ch.l().diagonal().iter().map(|d| d.re * d.re).product();
                    let v = det.powi(power);
                    s += v;
                    s2 += v * v;
                    acc += 1;
                }
            }
            (s, s2, acc)
        })
        .collect();
    let (s, s2, acc) = parts
        .iter()
        .fold((0.0, 0.0, 0usize), |a, p| (a.0 + p.0, a.1 + p.1, a.2 + p.2));
    let kf = samples as f64;
    if (acc as f64) / kf < 1e-4 {
        return Err(Error::Sampling(format!(
            "acceptance rate {:e} is below 1e-4; degree {n} is too large for rejection sampling",
            acc as f64 / kf
        )));
    }
    let scale = 2f64.powi((n * (n + 1)) as i32) * PI.powi(k as i32);
    let mean = s / kf;
    let var = (s2 / kf - mean * mean).max(0.0);
    Ok(IntegralResult {
        value: scale * mean,
        error_estimate: scale * (var / (kf - 1.0)).sqrt(),
        evaluations: samples as u64,
        method: IntegrationMethod::MonteCarlo,
    })
}

/// The weight-12 discriminant form through its `q`-expansion, with
/// coefficients expanded from `q prod (1 - q^k)^24` up to a cutoff.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QExpansionForm {
    pub weight: i64,
    /// `coefficients[k]` is the coefficient of `q^{k+1}`.
    pub coefficients: Vec<i64>,
}

impl QExpansionForm {
    pub fn discriminant(cutoff: usize) -> Self {
        let cutoff = cutoff.max(1);
        // coefficients of prod_{k <= cutoff} (1 - q^k)^24 up to q^{cutoff - 1}
        let mut p = vec![0i128; cutoff];
        p[0] = 1;
        for k in 1..cutoff {
            for _ in 0..24 {
                for i in (k..cutoff).rev() {
                    p[i] -= p[i - k];
                }
            }
        }
        Self {
            weight: 12,
            coefficients: p.iter().map(|&v| v as i64).collect(),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.coefficients.len()
    }

    /// Value and a bound on the dropped tail from `|tau(k)| <= 2 k^6`.
    pub fn eval_with_bound(&self, z: Complex64) -> (Complex64, f64) {
        let q = (Complex64::new(0.0, 2.0 * PI) * z).exp();
        let mut value = Complex64::new(0.0, 0.0);
        let mut qk = q;
        for &c in &self.coefficients {
            value += qk * c as f64;
            qk *= q;
        }
        let aq = q.norm();
        let mut tail = 0.0;
        let mut k = self.coefficients.len() + 1;
        let mut term = 2.0 * (k as f64).powi(6) * aq.powi(k as i32);
        while term > 1e-300 && k < self.coefficients.len() + 100_000 {
            tail += term;
            k += 1;
            let next = 2.0 * (k as f64).powi(6) * aq.powi(k as i32);
            if next < term && next < 1e-18 * tail {
                break;
            }
            term = next;
        }
        (value, tail)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_with_bound(z).0
    }
}

/// `Delta(i) = Gamma(1/4)^24 / (2^24 pi^18)`.
pub fn discriminant_at_i() -> f64 {
    let g = crate::special::gamma(0.25);
    g.powi(24) / (2f64.powi(24) * PI.powi(18))
}

/// The standard fundamental domain `|x| <= 1/2, |z| >= 1`, cut at `y_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalDomainSpec {
    pub y_max: f64,
    /// Above this height the inner integral runs in `u = 1/y`.
    pub y_split: f64,
    pub tol: f64,
    pub max_evals: usize,
}

impl FundamentalDomainSpec {
    pub fn new(y_max: f64, tol: f64) -> Result<Self> {
        if !(y_max >= 2.0) {
            return Err(Error::domain(format!("Y_max = {y_max} must be at least 2")));
        }
        if !(tol > 0.0) {
            return Err(Error::domain("tolerance must be positive"));
        }
        Ok(Self {
            y_max,
            y_split: 2.0,
            tol,
            max_evals: 2_000_000,
        })
    }

    /// `|Gamma cap {+-I}|` for `SL(2, Z)`.
    pub fn epsilon(&self) -> f64 {
        2.0
    }
}

impl Default for FundamentalDomainSpec {
    fn default() -> Self {
        Self::new(8.0, 1e-8).expect("valid defaults")
    }
}

/// A complex integral with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexIntegral {
    pub value: Complex64,
    pub error_estimate: f64,
    /// Heuristic size of the part above `y_max`.
    pub cutoff_estimate: f64,
    pub evaluations: u64,
}

fn atomic_max(slot: &AtomicU64, v: f64) {
    slot.fetch_max(v.to_bits(), Ordering::Relaxed);
}

/// `eps^{-1} int_F f1 conj(f2) y^m dx dy / y^2` for weight `m`.
pub fn petersson<F1, F2>(
    f1: F1,
    f2: F2,
    m: i64,
    domain: &FundamentalDomainSpec,
) -> Result<ComplexIntegral>
where
    F1: Fn(Complex64) -> Complex64 + Sync,
    F2: Fn(Complex64) -> Complex64 + Sync,
{
    let density = |x: f64, y: f64| -> Complex64 {
        let z = Complex64::new(x, y);
        f1(z) * f2(z).conj() * y.powi(m as i32 - 2)
    };
    let inner_settings = QuadSettings {
        abs_tol: 0.0,
        rel_tol: domain.tol * 1e-2,
        max_evals: domain.max_evals / 20,
        parallel: false,
    };
    let max_inner_err = AtomicU64::new(0);
    let failed = AtomicBool::new(false);
    let inner_evals = AtomicU64::new(0);
    let column = |x: f64| -> Complex64 {
        let y0 = (1.0 - x * x).max(0.0).sqrt();
        let split = domain.y_split.max(y0).min(domain.y_max);
        let low = integrate_with_breaks(|y| density(x, y), &[y0, split], &inner_settings);
        let (ua, ub) = (1.0 / domain.y_max, 1.0 / split);
        let high = integrate_with_breaks(
            |u| density(x, 1.0 / u) / (u * u),
            &[ua, ub],
            &inner_settings,
        );
        if !(low.converged && high.converged) {
            failed.store(true, Ordering::Relaxed);
        }
        atomic_max(&max_inner_err, low.error + high.error);
        inner_evals.fetch_add(
            (low.evaluations + high.evaluations) as u64,
            Ordering::Relaxed,
        );
        low.value + high.value
    };
    let outer = QuadSettings {
        abs_tol: 0.0,
        rel_tol: domain.tol,
        max_evals: 2000,
        parallel: true,
    };
    let out = integrate_with_breaks(column, &[-0.5, 0.0, 0.5], &outer);
    let eps = domain.epsilon();
    let value = out.value / eps;
    let inner_err = f64::from_bits(max_inner_err.load(Ordering::Relaxed));
    let error_estimate = (out.error + inner_err) / eps;
    // integrand decays like exp(-4 pi y) y^{m-2} for a product of cusp forms
    let at_top = [-0.5, 0.0, 0.5]
        .iter()
        .map(|&x| density(x, domain.y_max).norm())
        .fold(0.0, f64::max);
    let rate = 4.0 * PI - (m as f64 - 2.0) / domain.y_max;
    let cutoff_estimate = if rate > 0.0 {
        at_top / rate / eps
    } else {
        f64::INFINITY
    };
    let evaluations = inner_evals.load(Ordering::Relaxed);
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::num(
            "Petersson integrand produced a non-finite value",
        ));
    }
    if failed.load(Ordering::Relaxed) || !out.converged {
        return Err(Error::Convergence {
            message: format!(
                "fundamental-domain quadrature did not reach rel. tol {:e}",
                domain.tol
            ),
            partial: IntegralResult {
                value: value.norm(),
                error_estimate,
                evaluations,
                method: IntegrationMethod::AdaptiveQuadrature,
            },
        });
    }
    Ok(ComplexIntegral {
        value,
        error_estimate,
        cutoff_estimate,
        evaluations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub series: f64,
    pub quadrature: f64,
    pub cutoff: f64,
}

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub rel_err: f64,
    pub error_budget: ErrorBudget,
    pub pass: bool,
}

/// Settings shared by the two identity checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentitySettings {
    pub radius: f64,
    pub domain: FundamentalDomainSpec,
    pub q_cutoff: usize,
}

impl Default for IdentitySettings {
    fn default() -> Self {
        Self {
            radius: 40.0,
            domain: FundamentalDomainSpec::default(),
            q_cutoff: 60,
        }
    }
}

fn full_ball(radius: f64) -> Result<EnumerationBall> {
    enumerate_ball(&CongruenceGroup::full(1)?, radius, DEFAULT_BUDGET)
}

/// `<Delta, S>` for a truncated series `S`, with the series contribution to
/// the error estimated as `|<Delta, S_R - S_{R/2}>|`.
fn pair_with_series<S>(
    delta: &QExpansionForm,
    m: i64,
    ball: &EnumerationBall,
    settings: &IdentitySettings,
    series: S,
) -> Result<(ComplexIntegral, f64)>
where
    S: Fn(&EnumerationBall, Complex64) -> Result<TruncatedSeriesResult> + Sync,
{
    let half = ball.restrict(ball.radius() / 2.0);
    let eval = |b: &EnumerationBall, z: Complex64| -> Complex64 {
        series(b, z)
            .map(|r| r.value)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    let full = petersson(|z| delta.eval(z), |z| eval(ball, z), m, &settings.domain)?;
    let coarse = petersson(|z| delta.eval(z), |z| eval(&half, z), m, &settings.domain)?;
    Ok((full, (full.value - coarse.value).norm()))
}

fn report(
    identity: String,
    lhs: ComplexIntegral,
    rhs: Complex64,
    series_err: f64,
) -> IdentityReport {
    let rel_err = (lhs.value - rhs).norm() / rhs.norm();
    IdentityReport {
        identity,
        lhs: lhs.value,
        rhs,
        rel_err,
        error_budget: ErrorBudget {
            series: series_err / rhs.norm(),
            quadrature: lhs.error_estimate / rhs.norm(),
            cutoff: lhs.cutoff_estimate / rhs.norm(),
        },
        pass: rel_err <= IDENTITY_TOLERANCE,
    }
}

/// `<Delta, P f_{1,12}> = C_{12,1} Delta(i)` over the full modular group.
pub fn verify_cor62(m: i64, settings: &IdentitySettings) -> Result<IdentityReport> {
    if m != 12 {
        return Err(Error::domain("the discriminant check needs weight 12"));
    }
    let weight = Weight::new(m, 1);
    let delta = QExpansionForm::discriminant(settings.q_cutoff);
    let ball = full_ball(settings.radius)?;
    let one = MatrixPolynomial::one(1);
    let (lhs, series_err) = pair_with_series(&delta, m, &ball, settings, |b, z| {
        poincare_f(&one, weight, b, &SiegelPoint::scalar(z)?)
    })?;
    let rhs = delta.eval(Complex64::i()) * c_mn(weight)?;
    Ok(report(
        "<Delta, P f_{1,12}> = C_{12,1} Delta(i)".into(),
        lhs,
        rhs,
        series_err,
    ))
}

/// `<Delta, Delta_{Gamma,12,xi}> = Delta(xi)` for each `xi`.
pub fn verify_thm93(
    m: i64,
    xis: &[Complex64],
    settings: &IdentitySettings,
) -> Result<Vec<IdentityReport>> {
    if m != 12 {
        return Err(Error::domain("the discriminant check needs weight 12"));
    }
    let weight = Weight::new(m, 1);
    let delta = QExpansionForm::discriminant(settings.q_cutoff);
    let ball = full_ball(settings.radius)?;
    xis.iter()
        .map(|&xi| {
            let xi_point = SiegelPoint::scalar(xi)?;
            let (lhs, series_err) = pair_with_series(&delta, m, &ball, settings, |b, z| {
                kernel_series(weight, b, &xi_point, &SiegelPoint::scalar(z)?)
            })?;
            let rhs = delta.eval(xi);
            Ok(report(
                format!(
                    "<Delta, Delta_(Gamma,12,xi)> = Delta(xi) at xi = {} + {}i",
                    xi.re, xi.im
                ),
                lhs,
                rhs,
                series_err,
            ))
        })
        .collect()
}

/// The sample points used by default for the kernel check.
pub fn default_kernel_points() -> Vec<Complex64> {
    vec![
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(0.3, 0.8),
    ]
}
