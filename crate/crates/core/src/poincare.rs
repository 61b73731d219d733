//! Truncated Poincare series over norm balls of `Gamma_n(N)`: the series of
//! `f_{mu,m}` on the upper half-space, of `F_{mu,m}` on the group, and of the
//! reproducing-kernel seed `f_{1,m,xi}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrete_series::{c_mn, f_kernel, f_mu_m, matrix_coeff, MatrixCoefficientSpec, Weight};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_ball, CongruenceGroup, EnumerationBall, IntMatrix};
use crate::polynomial::MatrixPolynomial;
use crate::sampling::{haar_unitary, seeded_rng};
use crate::symplectic::{act, embed_unitary, j_factor, pow_int, SiegelPoint, SymplecticMatrix};

/// A truncated series `sum_{||gamma|| <= radius}`.
///
/// `tail_estimate` is `|S(radius) - S(radius / 2)|`, a heuristic rather than a bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeriesResult {
    pub value: Complex64,
    pub terms_used: usize,
    pub radius: f64,
    pub tail_estimate: f64,
    /// Largest modulus among the summed terms.
    pub max_term: f64,
}

fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => v[0],
        len if len <= 8 => v.iter().fold(Complex64::new(0.0, 0.0), |a, b| a + b),
        len => {
            let (a, b) = v.split_at(len / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Sums per-element terms over the ball in canonical order.
fn sum_over_ball<F>(ball: &EnumerationBall, term: F) -> Result<TruncatedSeriesResult>
where
    F: Fn(&IntMatrix) -> Result<Complex64> + Sync + Send,
{
    let terms: Vec<Complex64> = ball
        .elements()
        .par_iter()
        .map(&term)
        .collect::<Result<_>>()?;
    let half = (ball.radius() / 2.0).powi(2) * (1.0 + 1e-12) + 1e-9;
    // canonical order sorts by norm, so the half-radius ball is a prefix
    let cut = ball
        .elements()
        .partition_point(|g| (g.norm_sq() as f64) <= half);
    let value = pairwise_sum(&terms);
    let inner = pairwise_sum(&terms[..cut]);
    let max_term = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::num("series sum is not finite"));
    }
    Ok(TruncatedSeriesResult {
        value,
        terms_used: terms.len(),
        radius: ball.radius(),
        tail_estimate: (value - inner).norm(),
        max_term,
    })
}

fn check_ball(ball: &EnumerationBall, weight: Weight) -> Result<()> {
    weight.require_integrable()?;
    if ball.group().degree() != weight.n {
        return Err(Error::dim("ball and weight degrees differ"));
    }
    Ok(())
}

/// `sum_gamma F_{mu,m}(gamma g)` over the ball.
#[allow(non_snake_case)]
pub fn poincare_F(
    spec: &MatrixCoefficientSpec,
    ball: &EnumerationBall,
    g: &SymplecticMatrix,
) -> Result<TruncatedSeriesResult> {
    check_ball(ball, spec.weight())?;
    sum_over_ball(ball, |gamma| {
        matrix_coeff(spec, &gamma.to_symplectic().compose(g)?)
    })
}

/// `(gamma.z, j(gamma, z))` for a degree-one element.
fn scalar_parts(gamma: &IntMatrix, z: Complex64) -> (Complex64, Complex64) {
    let (a, b, c, d) = (
        gamma.get(0, 0) as f64,
        gamma.get(0, 1) as f64,
        gamma.get(1, 0) as f64,
        gamma.get(1, 1) as f64,
    );
    (z * a + b, z * c + d)
}

fn scalar_f_term(
    mu: &MatrixPolynomial,
    m: i64,
    prefactor: Complex64,
    gamma: &IntMatrix,
    z: Complex64,
) -> Complex64 {
    // (f|gamma)(z) = (2i)^m mu(w) / (p + iq)^m with p = az + b, q = cz + d
    let (p, q) = scalar_parts(gamma, z);
    let denom = p + Complex64::i() * q;
    let w = (p - Complex64::i() * q) / denom;
    prefactor * mu.eval_scalar(w) * pow_int(denom, -m)
}

fn matrix_f_term(
    mu: &MatrixPolynomial,
    weight: Weight,
    gamma: &IntMatrix,
    z: &SiegelPoint,
) -> Result<Complex64> {
    let g = gamma.to_symplectic();
    let j = j_factor(&g, z)?;
    Ok(pow_int(j, -weight.m) * f_mu_m(mu, weight, &act(&g, z)?)?)
}

/// `sum_gamma (f_{mu,m}|_m gamma)(z)` over the ball.
pub fn poincare_f(
    mu: &MatrixPolynomial,
    weight: Weight,
    ball: &EnumerationBall,
    z: &SiegelPoint,
) -> Result<TruncatedSeriesResult> {
    check_ball(ball, weight)?;
    if mu.degree_n() != weight.n || z.degree() != weight.n {
        return Err(Error::dim("polynomial, point and weight degrees differ"));
    }
    if weight.n == 1 {
        let zs = z.z()[(0, 0)];
        let prefactor = pow_int(Complex64::new(0.0, 2.0), weight.m);
        return sum_over_ball(ball, |gamma| {
            Ok(scalar_f_term(mu, weight.m, prefactor, gamma, zs))
        });
    }
    sum_over_ball(ball, |gamma| matrix_f_term(mu, weight, gamma, z))
}

/// [`poincare_f`] evaluated through the general matrix formulas in every degree.
pub fn poincare_f_matrix_path(
    mu: &MatrixPolynomial,
    weight: Weight,
    ball: &EnumerationBall,
    z: &SiegelPoint,
) -> Result<TruncatedSeriesResult> {
    check_ball(ball, weight)?;
    sum_over_ball(ball, |gamma| matrix_f_term(mu, weight, gamma, z))
}

/// `sum_gamma (f_{1,m,xi}|_m gamma)(z)` over the ball.
pub fn kernel_series(
    weight: Weight,
    ball: &EnumerationBall,
    xi: &SiegelPoint,
    z: &SiegelPoint,
) -> Result<TruncatedSeriesResult> {
    check_ball(ball, weight)?;
    if weight.n == 1 {
        let c = c_mn(weight)?;
        let zs = z.z()[(0, 0)];
        let xs = xi.z()[(0, 0)].conj();
        let two_i = Complex64::new(0.0, 2.0);
        return sum_over_ball(ball, |gamma| {
            let (p, q) = scalar_parts(gamma, zs);
            Ok(pow_int((p - xs * q) / two_i, -weight.m) / c)
        });
    }
    sum_over_ball(ball, |gamma| {
        let g = gamma.to_symplectic();
        let j = j_factor(&g, z)?;
        Ok(pow_int(j, -weight.m) * f_kernel(weight, xi, &act(&g, z)?)?)
    })
}

/// Empirical checks of two norm inequalities behind the non-vanishing criterion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormBoundsReport {
    pub n: usize,
    pub radius_r: f64,
    pub samples: usize,
    /// `max ||k h_t k_u h_{-t'} k'|| / sqrt(2n cosh 4R)` over the samples.
    pub max_ratio: f64,
    pub level: u64,
    pub ball_radius: f64,
    /// Smallest `||gamma||^2` over enumerated `gamma` outside `K`, if any.
    pub min_noncompact_norm_sq: Option<i128>,
    /// `N^2 + 2n`.
    pub required_norm_sq: i128,
    pub pass: bool,
}

/// Samples `k h_t k_u h_{-t'} k'` with `t, t'` in `[0, R)^n` and checks
/// `||.|| < sqrt(2n cosh 4R)`; enumerates `Gamma_n(N)` and checks
/// `||gamma||^2 >= N^2 + 2n` outside `K`.
pub fn norm_bounds_check(
    n: usize,
    r: f64,
    level: u64,
    samples: usize,
    seed: u64,
) -> Result<NormBoundsReport> {
    if !(r > 0.0) {
        return Err(Error::domain("R must be positive"));
    }
    let mut rng = seeded_rng(seed);
    let bound = (2.0 * n as f64 * (4.0 * r).cosh()).sqrt();
    let mut max_ratio: f64 = 0.0;
    for _ in 0..samples {
        let t: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * r).collect();
        let tp: Vec<f64> = (0..n).map(|_| -rng.random::<f64>() * r).collect();
        let k = embed_unitary(&haar_unitary(n, &mut rng));
        let ku = embed_unitary(&haar_unitary(n, &mut rng));
        let kp = embed_unitary(&haar_unitary(n, &mut rng));
        let g = k
            .compose(&SymplecticMatrix::torus(&t))?
            .compose(&ku)?
            .compose(&SymplecticMatrix::torus(&tp))?
            .compose(&kp)?;
        max_ratio = max_ratio.max(g.matrix().norm() / bound);
    }
    let group = CongruenceGroup::new(n, level)?;
    let required = (level as i128).pow(2) + 2 * n as i128;
    let ball_radius = ((required as f64) * 1.5).sqrt();
    let ball = enumerate_ball(&group, ball_radius, crate::lattice::DEFAULT_BUDGET)?;
    let min_noncompact = ball
        .elements()
        .iter()
        .map(IntMatrix::norm_sq)
        .filter(|&s| s > 2 * n as i128)
        .min();
    let pass = max_ratio < 1.0 && min_noncompact.is_none_or(|s| s >= required);
    Ok(NormBoundsReport {
        n,
        radius_r: r,
        samples,
        max_ratio,
        level,
        ball_radius,
        min_noncompact_norm_sq: min_noncompact,
        required_norm_sq: required,
        pass,
    })
}

/// Singular values of the matrix of series values `P f_{mu_i,m}(z_j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanProbe {
    pub singular_values: Vec<f64>,
    /// Count of singular values above `rel_threshold` times the largest.
    pub numerical_rank: usize,
    pub rel_threshold: f64,
    pub values: Vec<Vec<Complex64>>,
    /// True when no reference dimension is available (degree two and up).
    pub exploratory: bool,
}

pub fn span_probe(
    polys: &[MatrixPolynomial],
    weight: Weight,
    ball: &EnumerationBall,
    points: &[SiegelPoint],
    rel_threshold: f64,
) -> Result<SpanProbe> {
    let values: Vec<Vec<Complex64>> = polys
        .iter()
        .map(|mu| {
            points
                .iter()
                .map(|z| poincare_f(mu, weight, ball, z).map(|r| r.value))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let rows = values.len();
    let cols = points.len();
    let m = DMatrix::from_fn(rows, cols, |i, j| values[i][j]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv.first().copied().unwrap_or(0.0);
    let numerical_rank = sv
        .iter()
        .filter(|&&s| top > 0.0 && s > rel_threshold * top)
        .count();
    Ok(SpanProbe {
        singular_values: sv,
        numerical_rank,
        rel_threshold,
        values,
        exploratory: weight.n >= 2,
    })
}
