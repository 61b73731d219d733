//! Non-vanishing thresholds: `M(N)`, the integrands `phi_{l,m}` and
//! `varphi_{mu,m}`, the integrals over `A_t^+` and the smallest level `N_0`
//! from which the Poincare series is guaranteed not to vanish.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrete_series::Weight;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::polynomial::MatrixPolynomial;
use crate::quadrature::{integrate, IntegralResult, IntegrationMethod, QuadSettings};
use crate::sampling::{haar_unitary, sub_rng};
use crate::special::{beta_inc, beta_reg};
use crate::symplectic::UnitaryMatrix;
use num_complex::Complex64;

/// Largest level the threshold search will consider.
pub const MAX_LEVEL: u64 = 1 << 40;

/// `M(N) = (sqrt(1 + 4n/N^2) + sqrt(4n/N^2))^{-2}`.
pub fn big_m(level: u64, n: usize) -> Result<f64> {
    if level == 0 {
        return Err(Error::domain("level N must be positive"));
    }
    if n == 0 {
        return Err(Error::dim("degree must be positive"));
    }
    let q = 4.0 * n as f64 / (level as f64 * level as f64);
    let s = (1.0 + q).sqrt() + q.sqrt();
    Ok(1.0 / (s * s))
}

/// The region `A_t^+ = {t > x_1 > ... > x_n > 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexRegion {
    n: usize,
    t: f64,
}

impl SimplexRegion {
    pub fn new(n: usize, t: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::dim("degree must be positive"));
        }
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::domain(format!(
                "region parameter t = {t} is outside (0, 1]"
            )));
        }
        Ok(Self { n, t })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

fn check_ordered(x: &[f64], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::dim(format!(
            "expected {n} coordinates, got {}",
            x.len()
        )));
    }
    let ok = x.iter().all(|&v| v > 0.0 && v < 1.0) && x.windows(2).all(|w| w[0] > w[1]);
    if !ok {
        return Err(Error::domain("point must satisfy 1 > x_1 > ... > x_n > 0"));
    }
    Ok(())
}

fn vandermonde(x: &[f64]) -> f64 {
    let mut p = 1.0;
    for r in 0..x.len() {
        for s in r + 1..x.len() {
            p *= x[r] - x[s];
        }
    }
    p
}

fn exponent_a(weight: Weight) -> f64 {
    weight.m as f64 / 2.0 - weight.n as f64 - 1.0
}

/// `phi_{l,m}(x) = prod x_r^{l/2} (1 - x_r)^{m/2-n-1} prod_{r<s} (x_r - x_s)`.
pub fn phi_lm(l: u32, weight: Weight, x: &[f64]) -> Result<f64> {
    weight.require_integrable()?;
    check_ordered(x, weight.n)?;
    let a = exponent_a(weight);
    let h = l as f64 / 2.0;
    let radial: f64 = x.iter().map(|&v| v.powf(h) * (1.0 - v).powf(a)).product();
    Ok(radial * vandermonde(x))
}

/// `varphi_{mu,m}(u, x) = |mu(u d_x^{1/2} u^T)| prod_{r<s}(x_r - x_s) prod (1 - x_r)^{m/2-n-1}`.
pub fn varphi_mu(
    mu: &MatrixPolynomial,
    weight: Weight,
    u: &UnitaryMatrix,
    x: &[f64],
) -> Result<f64> {
    weight.require_integrable()?;
    check_ordered(x, weight.n)?;
    let a = exponent_a(weight);
    let radial: f64 = x.iter().map(|&v| (1.0 - v).powf(a)).product();
    Ok(mu_modulus(mu, u, x)? * vandermonde(x) * radial)
}

fn mu_modulus(mu: &MatrixPolynomial, u: &UnitaryMatrix, x: &[f64]) -> Result<f64> {
    let n = x.len();
    let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        x.iter().map(|v| Complex64::new(v.sqrt(), 0.0)),
    ));
    let um = u.matrix();
    Ok(mu.eval(&(um * d * um.transpose()))?.norm())
}

/// Numerical settings for threshold integrals and searches.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSettings {
    /// Relative tolerance of adaptive quadrature.
    pub tol: f64,
    /// Evaluation budget per integral.
    pub max_evals: usize,
    /// Samples for Monte Carlo paths.
    pub mc_samples: usize,
    pub seed: u64,
    /// Number of times the tolerance is tightened before giving up on an ambiguous margin.
    pub refinements: u32,
}

impl Default for ThresholdSettings {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_evals: 400_000,
            mc_samples: 200_000,
            seed: 0,
            refinements: 3,
        }
    }
}

const CLOSED_FORM_ERROR: f64 = 1e-13;

/// `int_{A_t^+} phi_{l,m}`.
///
/// Degree one is the incomplete beta `B(t; l/2+1, m/2-1)`. Degree two
/// integrates `x_2` in closed form and `x_1` adaptively after the change of
/// variables `x_1 = 1 - s^2`, which turns `(1-x_1)^{m/2-3} dx_1` into a
/// polynomial weight. Higher degrees fall back to Monte Carlo.
pub fn integral_phi(
    l: u32,
    weight: Weight,
    region: SimplexRegion,
    settings: &ThresholdSettings,
) -> Result<IntegralResult> {
    weight.require_integrable()?;
    if region.n != weight.n {
        return Err(Error::dim("region and weight degrees differ"));
    }
    let h = l as f64 / 2.0;
    let t = region.t;
    match weight.n {
        1 => {
            let b = weight.m as f64 / 2.0 - 1.0;
            let value = beta_inc(t, h + 1.0, b);
            Ok(IntegralResult {
                value,
                error_estimate: CLOSED_FORM_ERROR * value.abs(),
                evaluations: 1,
                method: IntegrationMethod::ClosedFormBeta,
            })
        }
        2 => integral_phi_degree_two(h, exponent_a(weight), t, settings),
        _ => Ok(integral_phi_mc(l, weight, t, settings)),
    }
}

fn integral_phi_degree_two(
    h: f64,
    a: f64,
    t: f64,
    settings: &ThresholdSettings,
) -> Result<IntegralResult> {
    // int_0^{x1} (x1 - x2) x2^h (1 - x2)^a dx2
    let inner = |x1: f64| x1 * beta_inc(x1, h + 1.0, a + 1.0) - beta_inc(x1, h + 2.0, a + 1.0);
    let integrand = |s: f64| {
        let x1 = 1.0 - s * s;
        if x1 <= 0.0 {
            return 0.0;
        }
        2.0 * x1.powf(h) * s.powf(2.0 * a + 1.0) * inner(x1)
    };
    let quad = QuadSettings {
        abs_tol: 0.0,
        rel_tol: settings.tol,
        max_evals: settings.max_evals,
        parallel: false,
    };
    let out = integrate(integrand, (1.0 - t).max(0.0).sqrt(), 1.0, &quad);
    let result = IntegralResult {
        value: out.value,
        error_estimate: out.error,
        evaluations: out.evaluations as u64,
        method: IntegrationMethod::AdaptiveQuadrature,
    };
    if !out.converged {
        return Err(Error::Convergence {
            message: format!(
                "degree-two threshold integral did not reach rel. tol {:e}",
                settings.tol
            ),
            partial: result,
        });
    }
    Ok(result)
}

/// Draws `x` from the product density `prod (a+1)(1-x_r)^a`, sorted descending.
fn draw_x<R: Rng + ?Sized>(n: usize, a: f64, rng: &mut R) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n)
        .map(|_| {
            let v: f64 = rng.random();
            1.0 - (1.0 - v).powf(1.0 / (a + 1.0))
        })
        .collect();
    x.sort_by(|p, q| q.total_cmp(p));
    x
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn integral_phi_mc(l: u32, weight: Weight, t: f64, settings: &ThresholdSettings) -> IntegralResult {
    let n = weight.n;
    let a = exponent_a(weight);
    let h = l as f64 / 2.0;
    let mut rng = sub_rng(settings.seed, 0);
    let k = settings.mc_samples.max(2);
    let norm = 1.0 / (factorial(n) * (a + 1.0).powi(n as i32));
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..k {
        let x = draw_x(n, a, &mut rng);
        let v = if x[0] < t {
            x.iter().map(|v| v.powf(h)).product::<f64>() * vandermonde(&x) * norm
        } else {
            0.0
        };
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / k as f64;
    let var = (sum_sq / k as f64 - mean * mean).max(0.0);
    IntegralResult {
        value: mean,
        error_estimate: (var / (k as f64 - 1.0)).sqrt(),
        evaluations: k as u64,
        method: IntegrationMethod::MonteCarlo,
    }
}

/// Outcome of a threshold search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub n0: u64,
    pub method: IntegrationMethod,
    /// `min(ratio(N_0) - 1/2, 1/2 - ratio(N_0 - 1))`.
    pub margin: f64,
    /// Summed error estimate of the two ratios entering the margin.
    pub error_band: f64,
    pub ratio_at_n0: f64,
    pub ratio_below: Option<f64>,
    pub total: IntegralResult,
    /// False for degrees without reference values.
    pub validated: bool,
}

/// Smallest `N >= 1` with `pred(N)`, for `pred` monotone in `N`.
fn first_level<F: FnMut(u64) -> Result<bool>>(mut pred: F) -> Result<u64> {
    if pred(1)? {
        return Ok(1);
    }
    let mut lo = 1u64;
    let mut hi = 2u64;
    while !pred(hi)? {
        lo = hi;
        hi = hi
            .checked_mul(2)
            .filter(|&v| v <= MAX_LEVEL)
            .ok_or_else(|| Error::num("threshold search exceeded the largest supported level"))?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `N_0(det^l, m)`: the smallest `N` with `int_{A_{M(N)}^+} phi > 1/2 int_{A_1^+} phi`.
///
/// A level is declared only when the margin exceeds ten times the error
/// band; otherwise the tolerance is tightened `settings.refinements` times
/// before returning [`Error::AmbiguousThreshold`]. Degrees three and up use
/// [`n0_general`] with `mu = det^l` and are reported as unvalidated.
pub fn n0_detl(l: u32, weight: Weight, settings: &ThresholdSettings) -> Result<ThresholdResult> {
    weight.require_integrable()?;
    let n = weight.n;
    if n >= 3 {
        let query = ThresholdQuery::new(MatrixPolynomial::det_power(n, l), weight)?;
        let report = n0_general(&query, &McSettings::from_threshold(settings))?;
        return Ok(report.into_threshold_result());
    }
    let mut current = *settings;
    let mut last_ambiguous = None;
    for _ in 0..=settings.refinements {
        match n0_detl_once(l, weight, &current) {
            Ok(r) => return Ok(r),
            Err(e @ Error::AmbiguousThreshold { .. }) => {
                if n == 1 {
                    return Err(e);
                }
                last_ambiguous = Some(e);
                current.tol *= 1e-2;
                current.max_evals = current.max_evals.saturating_mul(4);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_ambiguous.expect("loop ran at least once"))
}

fn n0_detl_once(l: u32, weight: Weight, settings: &ThresholdSettings) -> Result<ThresholdResult> {
    let n = weight.n;
    let total = integral_phi(l, weight, SimplexRegion::new(n, 1.0)?, settings)?;
    if total.value <= 0.0 {
        return Err(Error::num("total threshold integral is not positive"));
    }
    let ratio = |level: u64| -> Result<(f64, f64)> {
        let t = big_m(level, n)?;
        if n == 1 {
            let h = l as f64 / 2.0;
            let b = weight.m as f64 / 2.0 - 1.0;
            return Ok((beta_reg(t, h + 1.0, b), CLOSED_FORM_ERROR));
        }
        let part = integral_phi(l, weight, SimplexRegion::new(n, t)?, settings)?;
        let r = part.value / total.value;
        let err = (part.error_estimate + r * total.error_estimate) / total.value;
        Ok((r, err))
    };
    let n0 = first_level(|level| Ok(ratio(level)?.0 > 0.5))?;
    let (r0, e0) = ratio(n0)?;
    let (below, eb) = if n0 > 1 {
        let (rb, eb) = ratio(n0 - 1)?;
        (Some(rb), eb)
    } else {
        (None, 0.0)
    };
    let margin = match below {
        Some(rb) => (r0 - 0.5).min(0.5 - rb),
        None => r0 - 0.5,
    };
    let error_band = e0 + eb;
    if !(margin > 10.0 * error_band) {
        return Err(Error::AmbiguousThreshold {
            level: n0,
            margin,
            error_band,
        });
    }
    Ok(ThresholdResult {
        n0,
        method: total.method,
        margin,
        error_band,
        ratio_at_n0: r0,
        ratio_below: below,
        total,
        validated: true,
    })
}

/// A threshold question for a general polynomial `mu`.
#[derive(Clone, Debug)]
pub struct ThresholdQuery {
    mu: Arc<MatrixPolynomial>,
    weight: Weight,
}

impl ThresholdQuery {
    pub fn new(mu: impl Into<Arc<MatrixPolynomial>>, weight: Weight) -> Result<Self> {
        let mu = mu.into();
        weight.require_integrable()?;
        if mu.degree_n() != weight.n {
            return Err(Error::dim("polynomial and weight degrees differ"));
        }
        if mu.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self { mu, weight })
    }

    pub fn mu(&self) -> &MatrixPolynomial {
        &self.mu
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }
}

/// Monte Carlo settings for [`n0_general`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McSettings {
    pub samples: usize,
    pub seed: u64,
    /// Two-sided normal quantile for the confidence check.
    pub z: f64,
}

impl Default for McSettings {
    fn default() -> Self {
        Self {
            samples: 200_000,
            seed: 0,
            z: 2.576,
        }
    }
}

impl McSettings {
    fn from_threshold(s: &ThresholdSettings) -> Self {
        Self {
            samples: s.mc_samples,
            seed: s.seed,
            ..Self::default()
        }
    }
}

/// Estimate of `D(N) = E[w (1{x_1 < M(N)} - 1/2)]` at one level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelEstimate {
    pub level: u64,
    pub big_m: f64,
    pub difference: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralThresholdReport {
    pub n0: u64,
    pub samples: usize,
    pub z: f64,
    /// `E[w]`, proportional to the full integral.
    pub total: IntegralResult,
    pub estimates: Vec<LevelEstimate>,
    pub validated: bool,
}

impl GeneralThresholdReport {
    fn estimate(&self, level: u64) -> Option<&LevelEstimate> {
        self.estimates.iter().find(|e| e.level == level)
    }

    /// Converts the report to a [`ThresholdResult`] with ratios `1/2 + D/E[w]`.
    pub fn into_threshold_result(self) -> ThresholdResult {
        let scale = self.total.value;
        let at = self
            .estimate(self.n0)
            .copied()
            .expect("n0 estimate present");
        let below = if self.n0 > 1 {
            self.estimate(self.n0 - 1).copied()
        } else {
            None
        };
        let r0 = 0.5 + at.difference / scale;
        let rb = below.map(|b| 0.5 + b.difference / scale);
        let margin = match rb {
            Some(rb) => (r0 - 0.5).min(0.5 - rb),
            None => r0 - 0.5,
        };
        let error_band = (at.std_error + below.map_or(0.0, |b| b.std_error)) / scale;
        ThresholdResult {
            n0: self.n0,
            method: IntegrationMethod::MonteCarlo,
            margin,
            error_band,
            ratio_at_n0: r0,
            ratio_below: rb,
            total: self.total,
            validated: self.validated,
        }
    }
}

/// `N_0(mu, m)` by Monte Carlo over `U(n) x A_1^+` with common random numbers.
///
/// Points `x` are drawn from `prod (a+1)(1-x_r)^a`, `a = m/2-n-1`, which
/// absorbs that factor of `varphi_{mu,m}`; `u` is Haar. Every level reuses the
/// same samples, so the estimate of `D(N)` is monotone in `N`. The level is
/// accepted when `D(N_0) > z se` and `D(N_0 - 1) < -z se`.
pub fn n0_general(query: &ThresholdQuery, settings: &McSettings) -> Result<GeneralThresholdReport> {
    let weight = query.weight;
    let n = weight.n;
    let a = exponent_a(weight);
    let k = settings.samples;
    if k < 2 {
        return Err(Error::Sampling("need at least two samples".into()));
    }
    const CHUNK: usize = 4096;
    let chunks = k.div_ceil(CHUNK);
    let parts: Vec<Result<Vec<(f64, f64)>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = sub_rng(settings.seed, c as u64);
            let count = CHUNK.min(k - c * CHUNK);
            (0..count)
                .map(|_| {
                    let u = haar_unitary(n, &mut rng);
                    let x = draw_x(n, a, &mut rng);
                    let w = mu_modulus(&query.mu, &u, &x)? * vandermonde(&x);
                    Ok((x[0], w))
                })
                .collect()
        })
        .collect();
    let mut samples = Vec::with_capacity(k);
    for p in parts {
        samples.extend(p?);
    }
    samples.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));

    let kf = k as f64;
    let mut prefix = Vec::with_capacity(k + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    let mut sum_sq = 0.0;
    for &(_, w) in &samples {
        acc += w;
        sum_sq += w * w;
        prefix.push(acc);
    }
    let sum = acc;
    let max_w = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    if !(sum > 0.0) || max_w <= 1e-300 {
        return Err(Error::ZeroPolynomial);
    }
    let mean_w = sum / kf;
    let se_w = ((sum_sq / kf - mean_w * mean_w).max(0.0) / (kf - 1.0)).sqrt();

    let estimate = |level: u64| -> Result<LevelEstimate> {
        let t = big_m(level, n)?;
        let below = samples.partition_point(|s| s.0 < t);
        let d = (prefix[below] - 0.5 * sum) / kf;
        // (1{..} - 1/2)^2 = 1/4
        let var = (0.25 * sum_sq / kf - d * d).max(0.0);
        Ok(LevelEstimate {
            level,
            big_m: t,
            difference: d,
            std_error: (var / (kf - 1.0)).sqrt(),
        })
    };

    let n0 = first_level(|level| Ok(estimate(level)?.difference > 0.0))?;
    let at = estimate(n0)?;
    if at.difference <= settings.z * at.std_error {
        return Err(Error::AmbiguousThreshold {
            level: n0,
            margin: at.difference,
            error_band: settings.z * at.std_error,
        });
    }
    if n0 > 1 {
        let below = estimate(n0 - 1)?;
        if -below.difference <= settings.z * below.std_error {
            return Err(Error::AmbiguousThreshold {
                level: n0 - 1,
                margin: -below.difference,
                error_band: settings.z * below.std_error,
            });
        }
    }
    let first = n0.saturating_sub(5).max(1);
    let estimates = (first..=n0 + 1).map(estimate).collect::<Result<Vec<_>>>()?;
    Ok(GeneralThresholdReport {
        n0,
        samples: k,
        z: settings.z,
        total: IntegralResult {
            value: mean_w,
            error_estimate: se_w,
            evaluations: k as u64,
            method: IntegrationMethod::MonteCarlo,
        },
        estimates,
        validated: n <= 2,
    })
}

/// Levels at which the series vanishes identically for `mu = det^l`:
/// `N = 1` with `4` not dividing `m + 2l`, or `N = 2` with `m` odd.
pub fn vanishing_case(l: u32, weight: Weight, level: u64) -> bool {
    let m = weight.m;
    (level == 1 && (m + 2 * l as i64).rem_euclid(4) != 0) || (level == 2 && m.rem_euclid(2) == 1)
}

/// One cell of an `N_0` table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub n: usize,
    pub l: u32,
    pub m: i64,
    pub result: ThresholdResult,
}

fn cell_seed(seed: u64, l: u32, m: i64) -> u64 {
    let mut z = seed ^ ((l as u64) << 32) ^ (m as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `N_0(det^l, m)` for every `(l, m)` pair, computed in parallel; each cell
/// draws from its own seed derived from `(settings.seed, l, m)`.
pub fn n0_table(
    n: usize,
    ls: &[u32],
    ms: &[i64],
    settings: &ThresholdSettings,
) -> Result<Vec<TableCell>> {
    let cells: Vec<(u32, i64)> = ls
        .iter()
        .flat_map(|&l| ms.iter().map(move |&m| (l, m)))
        .collect();
    cells
        .par_iter()
        .map(|&(l, m)| {
            let mut s = *settings;
            s.seed = cell_seed(settings.seed, l, m);
            let result = n0_detl(l, Weight::new(m, n), &s)?;
            Ok(TableCell { n, l, m, result })
        })
        .collect()
}

/// Reference `N_0` values for `l = 0..=12` (rows) and `m = 3..=10` (columns), degree one.
pub const REFERENCE_N0_DEGREE_ONE: [[u64; 8]; 13] = [
    [14, 6, 4, 4, 3, 3, 3, 2],
    [23, 9, 6, 5, 4, 4, 3, 3],
    [32, 12, 8, 6, 5, 5, 4, 4],
    [40, 15, 10, 7, 6, 5, 5, 4],
    [49, 18, 11, 9, 7, 6, 5, 5],
    [58, 21, 13, 10, 8, 7, 6, 6],
    [67, 24, 15, 11, 9, 8, 7, 6],
    [75, 26, 16, 12, 10, 8, 7, 7],
    [84, 29, 18, 13, 11, 9, 8, 7],
    [93, 32, 20, 15, 12, 10, 9, 8],
    [102, 35, 22, 16, 13, 11, 9, 8],
    [111, 38, 23, 17, 14, 12, 10, 9],
    [119, 41, 25, 18, 15, 12, 11, 10],
];

/// Reference `N_0` values for `l = 0..=12` (rows) and `m = 5..=12` (columns), degree two.
pub const REFERENCE_N0_DEGREE_TWO: [[u64; 8]; 13] = [
    [77, 25, 15, 11, 9, 8, 7, 6],
    [107, 33, 20, 14, 11, 10, 8, 8],
    [137, 41, 24, 17, 14, 11, 10, 9],
    [167, 49, 28, 20, 16, 13, 11, 10],
    [197, 58, 33, 23, 18, 15, 13, 11],
    [227, 66, 37, 26, 20, 17, 14, 12],
    [257, 74, 41, 29, 22, 18, 16, 14],
    [287, 82, 46, 32, 24, 20, 17, 15],
    [317, 90, 50, 34, 26, 22, 18, 16],
    [347, 98, 54, 37, 29, 23, 20, 17],
    [377, 107, 59, 40, 31, 25, 21, 18],
    [407, 115, 63, 43, 33, 27, 22, 19],
    [437, 123, 67, 46, 35, 28, 24, 21],
];

/// The reference table for degree `n` with its first weight, if one exists.
pub fn reference_table(n: usize) -> Option<(i64, &'static [[u64; 8]; 13])> {
    match n {
        1 => Some((3, &REFERENCE_N0_DEGREE_ONE)),
        2 => Some((5, &REFERENCE_N0_DEGREE_TWO)),
        _ => None,
    }
}
