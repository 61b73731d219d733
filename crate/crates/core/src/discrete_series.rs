//! K-finite vectors `f_{mu,m}` of the holomorphic discrete series, the
//! weight-`m` slash action, the lift to the group, the closed-form matrix
//! coefficients in KAK coordinates and the normalizing constant `C_{m,n}`.

use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{identity_c, ComplexMatrix, I};
use crate::polynomial::MatrixPolynomial;
use crate::special::ln_gamma;
use crate::symplectic::{
    act, cayley, chi, j_factor, kak_decompose, nak_decompose, pow_int, KakFactors, SiegelPoint,
    SymplecticMatrix,
};

/// A function on the Siegel upper half-space.
pub type HnFunction<'a> = dyn Fn(&SiegelPoint) -> Result<Complex64> + Send + Sync + 'a;

/// Weight `m` in degree `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub m: i64,
    pub n: usize,
}

impl Weight {
    pub fn new(m: i64, n: usize) -> Self {
        Self { m, n }
    }

    /// `m > n`, needed for `f_{mu,m}` to lie in the discrete series.
    pub fn require_above_n(&self) -> Result<()> {
        if self.m <= self.n as i64 {
            return Err(Error::domain(format!(
                "weight m = {} must exceed n = {}",
                self.m, self.n
            )));
        }
        Ok(())
    }

    /// `m > 2n`, the integrability range.
    pub fn require_integrable(&self) -> Result<()> {
        if self.m <= 2 * self.n as i64 {
            return Err(Error::domain(format!(
                "weight m = {} must exceed 2n = {}",
                self.m,
                2 * self.n
            )));
        }
        Ok(())
    }
}

/// The matrix coefficient `F_{mu,m}`.
#[derive(Clone, Debug)]
pub struct MatrixCoefficientSpec {
    mu: Arc<MatrixPolynomial>,
    weight: Weight,
}

impl MatrixCoefficientSpec {
    pub fn new(mu: impl Into<Arc<MatrixPolynomial>>, weight: Weight) -> Result<Self> {
        let mu = mu.into();
        if mu.degree_n() != weight.n {
            return Err(Error::dim(format!(
                "polynomial degree {} does not match weight degree {}",
                mu.degree_n(),
                weight.n
            )));
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

fn check_point(weight: Weight, z: &SiegelPoint) -> Result<()> {
    if z.degree() != weight.n {
        return Err(Error::dim(format!(
            "point of degree {} with weight of degree {}",
            z.degree(),
            weight.n
        )));
    }
    Ok(())
}

/// `f_{mu,m}(z) = (2i)^{mn} mu((z - iI)(z + iI)^{-1}) / det(z + iI)^m`.
pub fn f_mu_m(mu: &MatrixPolynomial, weight: Weight, z: &SiegelPoint) -> Result<Complex64> {
    weight.require_above_n()?;
    check_point(weight, z)?;
    if mu.degree_n() != weight.n {
        return Err(Error::dim("polynomial and weight degrees differ"));
    }
    let n = weight.n;
    let m = weight.m;
    let shifted = z.z() + identity_c(n) * I;
    let det = shifted.determinant();
    if det.norm() == 0.0 || !det.norm().is_finite() {
        return Err(Error::num("det(z + iI) is not usable"));
    }
    let w = cayley(z);
    let prefactor = pow_int(Complex64::new(0.0, 2.0), m * n as i64);
    Ok(prefactor * mu.eval(w.w())? * pow_int(det, -m))
}

/// `(f|_m g)(z) = j(g, z)^{-m} f(g.z)`.
pub fn slash_eval(
    f: &HnFunction<'_>,
    g: &SymplecticMatrix,
    weight: Weight,
    z: &SiegelPoint,
) -> Result<Complex64> {
    check_point(weight, z)?;
    let j = j_factor(g, z)?;
    let gz = act(g, z)?;
    Ok(pow_int(j, -weight.m) * f(&gz)?)
}

/// The slashed function `f|_m g` as a new closure.
pub fn slash<'a>(
    f: &'a HnFunction<'a>,
    g: &SymplecticMatrix,
    weight: Weight,
) -> impl Fn(&SiegelPoint) -> Result<Complex64> + Send + Sync + 'a {
    let g = g.clone();
    move |z: &SiegelPoint| slash_eval(f, &g, weight, z)
}

/// Classical lift `F_f(g) = (f|_m g)(iI_n)`.
pub fn lift(f: &HnFunction<'_>, weight: Weight, g: &SymplecticMatrix) -> Result<Complex64> {
    slash_eval(f, g, weight, &SiegelPoint::i_identity(weight.n))
}

/// The lift through the NAK factors: `chi_m(k_u) det(y)^{m/2} f(x + iy)`.
pub fn lift_nak(f: &HnFunction<'_>, weight: Weight, g: &SymplecticMatrix) -> Result<Complex64> {
    let nak = nak_decompose(g)?;
    let z = SiegelPoint::new(nak.x.clone(), nak.y.clone())?;
    let det_y = nak.y.determinant();
    Ok(chi(weight.m, &nak.u) * det_y.powf(weight.m as f64 / 2.0) * f(&z)?)
}

/// `F_{mu,m}(k_u h_t k_{u'}) = det(u)^m mu(u tanh(d_t) u^T) det(u')^m / prod cosh(t_r)^m`.
pub fn matrix_coeff_kak(spec: &MatrixCoefficientSpec, kak: &KakFactors) -> Result<Complex64> {
    let weight = spec.weight;
    weight.require_above_n()?;
    let n = weight.n;
    if kak.u.degree() != n || kak.uprime.degree() != n || kak.t.len() != n {
        return Err(Error::dim("KAK factors have the wrong degree"));
    }
    let u = kak.u.matrix();
    let tanh = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        kak.t.iter().map(|t| Complex64::new(t.tanh(), 0.0)),
    ));
    let w = u * tanh * u.transpose();
    let cosh_prod: f64 = kak.t.iter().map(|t| t.cosh()).product();
    let m = weight.m;
    Ok(chi(m, &kak.u) * spec.mu.eval(&w)? * chi(m, &kak.uprime) * cosh_prod.powi(-(m as i32)))
}

/// `F_{mu,m}(g)` through the KAK route.
pub fn matrix_coeff(spec: &MatrixCoefficientSpec, g: &SymplecticMatrix) -> Result<Complex64> {
    matrix_coeff_kak(spec, &kak_decompose(g)?)
}

/// `F_{mu,m}(g)` through the lift of `f_{mu,m}`.
pub fn matrix_coeff_via_lift(
    spec: &MatrixCoefficientSpec,
    g: &SymplecticMatrix,
) -> Result<Complex64> {
    let mu = Arc::clone(&spec.mu);
    let weight = spec.weight;
    let f = move |z: &SiegelPoint| f_mu_m(&mu, weight, z);
    lift(&f, weight, g)
}

/// `C_{m,n} = 2^{n(n+3)/2} pi^{n(n+1)/2} prod_r Gamma(m - (n+r)/2) / Gamma(m - (r-1)/2)`.
pub fn c_mn(weight: Weight) -> Result<f64> {
    weight.require_above_n()?;
    let n = weight.n as f64;
    let m = weight.m as f64;
    let mut log = n * (n + 3.0) / 2.0 * LN_2 + n * (n + 1.0) / 2.0 * PI.ln();
    for r in 1..=weight.n {
        let r = r as f64;
        log += ln_gamma(m - (n + r) / 2.0) - ln_gamma(m - (r - 1.0) / 2.0);
    }
    Ok(log.exp())
}

/// Reproducing-kernel seed `f_{1,m,xi}(z) = C_{m,n}^{-1} det((z - conj(xi)) / 2i)^{-m}`.
pub fn f_kernel(weight: Weight, xi: &SiegelPoint, z: &SiegelPoint) -> Result<Complex64> {
    weight.require_integrable()?;
    check_point(weight, z)?;
    check_point(weight, xi)?;
    let diff = (z.z() - xi.z().map(|v| v.conj())) * Complex64::new(0.0, -0.5);
    let det = diff.determinant();
    Ok(pow_int(det, -weight.m) / c_mn(weight)?)
}
