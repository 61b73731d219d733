//! The real symplectic group `Sp(2n, R)`, its action on the Siegel upper
//! half-space, the automorphy factor, the Cayley transform onto the bounded
//! domain and the NAK / KAK factorizations.
//!
//! Every value type carries its degree `n` explicitly and every binary
//! operation rejects mixed degrees.

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    all_finite, all_finite_c, complexify, condition_number_c, from_parts, identity_c, imag_part,
    j_matrix, max_abs, max_abs_c, real_part, spd_inv_sqrt, spd_sqrt, symmetrize, symmetrize_c,
    ComplexMatrix, RealMatrix, I,
};

/// Default tolerance of the relation `g^T J g = J`.
pub const SP_TOL: f64 = 1e-10;
/// Default tolerance for symmetry of points in `H_n` and `D_n`.
pub const SYM_TOL: f64 = 1e-12;
/// Default tolerance of `u^* u = I`.
pub const UNITARY_TOL: f64 = 1e-10;
/// Largest condition number of `Cz + D` accepted by [`act`].
pub const COND_LIMIT: f64 = 1e12;
/// Unitarity tolerance for the compact residual of a factorization.
pub const RESIDUAL_TOL: f64 = 1e-8;

fn degree_of_square_even(g: &RealMatrix) -> Result<usize> {
    if g.nrows() != g.ncols() {
        return Err(Error::dim(format!(
            "expected a square matrix, got {}x{}",
            g.nrows(),
            g.ncols()
        )));
    }
    if g.nrows() == 0 || !g.nrows().is_multiple_of(2) {
        return Err(Error::dim(format!(
            "expected an even dimension 2n, got {}",
            g.nrows()
        )));
    }
    Ok(g.nrows() / 2)
}

fn check_degrees(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::dim(format!("degree mismatch: {a} vs {b}")));
    }
    Ok(())
}

/// True iff `max |g^T J g - J| <= tol`.
pub fn sp_check(g: &RealMatrix, tol: f64) -> Result<bool> {
    let n = degree_of_square_even(g)?;
    let j = j_matrix(n);
    let defect = g.transpose() * &j * g - j;
    Ok(max_abs(&defect) <= tol)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix {
    n: usize,
    g: RealMatrix,
}

impl SymplecticMatrix {
    pub fn new(g: RealMatrix) -> Result<Self> {
        Self::with_tolerance(g, SP_TOL)
    }

    pub fn with_tolerance(g: RealMatrix, tol: f64) -> Result<Self> {
        let n = degree_of_square_even(&g)?;
        if !all_finite(&g) {
            return Err(Error::num("non-finite matrix entry"));
        }
        if !sp_check(&g, tol)? {
            return Err(Error::domain(format!(
                "matrix fails g^T J g = J within {tol:e}"
            )));
        }
        Ok(Self { n, g })
    }

    pub(crate) fn from_trusted(g: RealMatrix) -> Self {
        let n = g.nrows() / 2;
        Self { n, g }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_trusted(RealMatrix::identity(2 * n, 2 * n))
    }

    /// The matrix `J_n` itself.
    pub fn j(n: usize) -> Self {
        Self::from_trusted(j_matrix(n))
    }

    /// `n_x = (I x; 0 I)` for symmetric `x`.
    pub fn translation(x: &RealMatrix) -> Result<Self> {
        let n = x.nrows();
        if x.ncols() != n {
            return Err(Error::dim("translation needs a square matrix"));
        }
        if max_abs(&(x - x.transpose())) > SYM_TOL {
            return Err(Error::domain("translation needs a symmetric matrix"));
        }
        let mut g = RealMatrix::identity(2 * n, 2 * n);
        g.view_mut((0, n), (n, n)).copy_from(x);
        Ok(Self::from_trusted(g))
    }

    /// `a_y = diag(y^{1/2}, y^{-1/2})` for symmetric positive definite `y`.
    pub fn scaling(y: &RealMatrix) -> Result<Self> {
        let n = y.nrows();
        if y.ncols() != n {
            return Err(Error::dim("scaling needs a square matrix"));
        }
        let mut g = RealMatrix::zeros(2 * n, 2 * n);
        g.view_mut((0, 0), (n, n)).copy_from(&spd_sqrt(y)?);
        g.view_mut((n, n), (n, n)).copy_from(&spd_inv_sqrt(y)?);
        Ok(Self::from_trusted(g))
    }

    /// `h_t = diag(e^{t_1}, ..., e^{t_n}, e^{-t_1}, ..., e^{-t_n})`.
    pub fn torus(t: &[f64]) -> Self {
        let n = t.len();
        let mut g = RealMatrix::zeros(2 * n, 2 * n);
        for (r, &tr) in t.iter().enumerate() {
            g[(r, r)] = tr.exp();
            g[(n + r, n + r)] = (-tr).exp();
        }
        Self::from_trusted(g)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.g
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.g
    }

    pub fn a(&self) -> RealMatrix {
        self.g.view((0, 0), (self.n, self.n)).into_owned()
    }

    pub fn b(&self) -> RealMatrix {
        self.g.view((0, self.n), (self.n, self.n)).into_owned()
    }

    pub fn c(&self) -> RealMatrix {
        self.g.view((self.n, 0), (self.n, self.n)).into_owned()
    }

    pub fn d(&self) -> RealMatrix {
        self.g.view((self.n, self.n), (self.n, self.n)).into_owned()
    }

    /// Group product `self * other`.
    pub fn compose(&self, other: &SymplecticMatrix) -> Result<Self> {
        check_degrees(self.n, other.n)?;
        Ok(Self::from_trusted(&self.g * &other.g))
    }

    pub fn neg(&self) -> Self {
        Self::from_trusted(-&self.g)
    }

    pub fn inverse(&self) -> Self {
        sp_inverse(self)
    }
}

/// `g^{-1} = J^{-1} g^T J`, valid for symplectic `g`.
pub fn sp_inverse(g: &SymplecticMatrix) -> SymplecticMatrix {
    let j = j_matrix(g.n);
    SymplecticMatrix::from_trusted(-(&j * g.g.transpose() * &j))
}

/// A point `z = x + iy` of the Siegel upper half-space.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelPoint {
    n: usize,
    x: RealMatrix,
    y: RealMatrix,
}

impl SiegelPoint {
    pub fn new(x: RealMatrix, y: RealMatrix) -> Result<Self> {
        let n = x.nrows();
        if x.shape() != (n, n) || y.shape() != (n, n) || n == 0 {
            return Err(Error::dim("x and y must be square of the same size"));
        }
        if !all_finite(&x) || !all_finite(&y) {
            return Err(Error::num("non-finite entry in Siegel point"));
        }
        if max_abs(&(&x - x.transpose())) > SYM_TOL || max_abs(&(&y - y.transpose())) > SYM_TOL {
            return Err(Error::domain("x and y must be symmetric"));
        }
        if y.clone().cholesky().is_none() {
            return Err(Error::domain("imaginary part is not positive definite"));
        }
        Ok(Self { n, x, y })
    }

    /// Builds a point from a complex matrix, symmetrizing away rounding.
    pub fn from_complex(z: &ComplexMatrix) -> Result<Self> {
        if z.nrows() != z.ncols() {
            return Err(Error::dim("Siegel point needs a square matrix"));
        }
        if max_abs_c(&(z - z.transpose())) > 1e-8 * (1.0 + max_abs_c(z)) {
            return Err(Error::domain("matrix is not symmetric"));
        }
        let z = symmetrize_c(z);
        Self::new(real_part(&z), imag_part(&z))
    }

    /// Degree one point `x + iy`.
    pub fn scalar(z: Complex64) -> Result<Self> {
        Self::new(
            RealMatrix::from_element(1, 1, z.re),
            RealMatrix::from_element(1, 1, z.im),
        )
    }

    /// The base point `i I_n`.
    pub fn i_identity(n: usize) -> Self {
        Self {
            n,
            x: RealMatrix::zeros(n, n),
            y: RealMatrix::identity(n, n),
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &RealMatrix {
        &self.x
    }

    pub fn y(&self) -> &RealMatrix {
        &self.y
    }

    pub fn z(&self) -> ComplexMatrix {
        from_parts(&self.x, &self.y)
    }
}

/// A point `w` of the bounded domain `{w = w^T, I - w^* w > 0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedDomainPoint {
    n: usize,
    w: ComplexMatrix,
}

impl BoundedDomainPoint {
    pub fn new(w: ComplexMatrix) -> Result<Self> {
        let n = w.nrows();
        if w.ncols() != n || n == 0 {
            return Err(Error::dim("bounded domain point needs a square matrix"));
        }
        if !all_finite_c(&w) {
            return Err(Error::num("non-finite entry in bounded domain point"));
        }
        if max_abs_c(&(&w - w.transpose())) > SYM_TOL {
            return Err(Error::domain("w must be symmetric"));
        }
        let gap = identity_c(n) - w.adjoint() * &w;
        if gap.cholesky().is_none() {
            return Err(Error::domain("I - w*w is not positive definite"));
        }
        Ok(Self { n, w })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            w: ComplexMatrix::zeros(n, n),
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> &ComplexMatrix {
        &self.w
    }
}

/// Density of the invariant measure on the bounded domain with respect to
/// Lebesgue measure on the independent entries: `2^{n(n+1)} det(I - w^*w)^{-n-1}`.
pub fn domain_density(w: &BoundedDomainPoint) -> f64 {
    let n = w.n;
    let gap = identity_c(n) - w.w.adjoint() * &w.w;
    let det = gap.determinant().re;
    2f64.powi((n * (n + 1)) as i32) * det.powi(-(n as i32) - 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    n: usize,
    u: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(u: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(u, UNITARY_TOL)
    }

    pub fn with_tolerance(u: ComplexMatrix, tol: f64) -> Result<Self> {
        let n = u.nrows();
        if u.ncols() != n || n == 0 {
            return Err(Error::dim("unitary matrix must be square"));
        }
        if !all_finite_c(&u) {
            return Err(Error::num("non-finite entry in unitary matrix"));
        }
        if max_abs_c(&(u.adjoint() * &u - identity_c(n))) > tol {
            return Err(Error::domain(format!(
                "u^*u deviates from I by more than {tol:e}"
            )));
        }
        Ok(Self { n, u })
    }

    pub(crate) fn from_trusted(u: ComplexMatrix) -> Self {
        Self { n: u.nrows(), u }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_trusted(identity_c(n))
    }

    /// Degree one unitary `e^{i theta}`.
    pub fn phase(theta: f64) -> Self {
        Self::from_trusted(ComplexMatrix::from_element(
            1,
            1,
            Complex64::from_polar(1.0, theta),
        ))
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn det(&self) -> Complex64 {
        self.u.determinant()
    }

    pub fn compose(&self, other: &UnitaryMatrix) -> Result<Self> {
        check_degrees(self.n, other.n)?;
        Ok(Self::from_trusted(&self.u * &other.u))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_trusted(self.u.adjoint())
    }
}

fn cz_plus_d(g: &SymplecticMatrix, z: &SiegelPoint) -> Result<ComplexMatrix> {
    check_degrees(g.n, z.n)?;
    let zc = z.z();
    let m = complexify(&g.c()) * &zc + complexify(&g.d());
    let cond = if g.n == 1 {
        if m[(0, 0)].norm() > 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        condition_number_c(&m)
    };
    if !(cond < COND_LIMIT) {
        return Err(Error::num(format!(
            "Cz + D is ill-conditioned (cond {cond:e})"
        )));
    }
    Ok(m)
}

fn invert(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::num("singular matrix"))
}

/// `g.z = (Az + B)(Cz + D)^{-1}`.
pub fn act(g: &SymplecticMatrix, z: &SiegelPoint) -> Result<SiegelPoint> {
    let m = cz_plus_d(g, z)?;
    let num = complexify(&g.a()) * z.z() + complexify(&g.b());
    let w = num * invert(&m)?;
    let w = symmetrize_c(&w);
    SiegelPoint::new(real_part(&w), imag_part(&w))
        .map_err(|e| Error::num(format!("image left the upper half-space: {e}")))
}

/// Automorphy factor `j(g, z) = det(Cz + D)`.
pub fn j_factor(g: &SymplecticMatrix, z: &SiegelPoint) -> Result<Complex64> {
    Ok(cz_plus_d(g, z)?.determinant())
}

/// `Im(g.z)` computed as `(Cz + D)^{-*} y (Cz + D)^{-1}`.
pub fn im_transform(g: &SymplecticMatrix, z: &SiegelPoint) -> Result<RealMatrix> {
    let m = cz_plus_d(g, z)?;
    let inv = invert(&m)?;
    let v = inv.adjoint() * complexify(&z.y) * inv;
    Ok(symmetrize(&real_part(&v)))
}

/// `w = (z - iI)(z + iI)^{-1}`.
pub fn cayley(z: &SiegelPoint) -> BoundedDomainPoint {
    let n = z.n;
    let zc = z.z();
    let shift = identity_c(n) * I;
    let w = (&zc - &shift) * invert(&(&zc + &shift)).expect("z + iI is invertible on H_n");
    BoundedDomainPoint {
        n,
        w: symmetrize_c(&w),
    }
}

/// `z = i(I + w)(I - w)^{-1}`.
pub fn cayley_inv(w: &BoundedDomainPoint) -> SiegelPoint {
    let n = w.n;
    let id = identity_c(n);
    let z = (&id + &w.w) * invert(&(&id - &w.w)).expect("I - w is invertible on D_n") * I;
    let z = symmetrize_c(&z);
    SiegelPoint {
        n,
        x: real_part(&z),
        y: symmetrize(&imag_part(&z)),
    }
}

/// `u = A + iB` maps to `k_u = (A B; -B A)`.
pub fn embed_unitary(u: &UnitaryMatrix) -> SymplecticMatrix {
    let n = u.n;
    let a = real_part(&u.u);
    let b = imag_part(&u.u);
    let mut g = RealMatrix::zeros(2 * n, 2 * n);
    g.view_mut((0, 0), (n, n)).copy_from(&a);
    g.view_mut((0, n), (n, n)).copy_from(&b);
    g.view_mut((n, 0), (n, n)).copy_from(&(-&b));
    g.view_mut((n, n), (n, n)).copy_from(&a);
    SymplecticMatrix::from_trusted(g)
}

/// Character `chi_r(k_u) = det(u)^r`.
pub fn chi(r: i64, u: &UnitaryMatrix) -> Complex64 {
    pow_int(u.det(), r)
}

pub(crate) fn pow_int(z: Complex64, r: i64) -> Complex64 {
    if r >= 0 {
        z.powu(r as u32)
    } else {
        z.powu((-r) as u32).inv()
    }
}

/// Factors of `g = n_x a_y k_u`.
#[derive(Clone, Debug, PartialEq)]
pub struct NakFactors {
    pub x: RealMatrix,
    pub y: RealMatrix,
    pub u: UnitaryMatrix,
}

impl NakFactors {
    pub fn reassemble(&self) -> Result<SymplecticMatrix> {
        let nx = SymplecticMatrix::translation(&self.x)?;
        let ay = SymplecticMatrix::scaling(&self.y)?;
        nx.compose(&ay)?.compose(&embed_unitary(&self.u))
    }
}

pub fn nak_decompose(g: &SymplecticMatrix) -> Result<NakFactors> {
    let n = g.n;
    let z = act(g, &SiegelPoint::i_identity(n))?;
    let x = z.x.clone();
    let y = z.y.clone();
    let nx_inv = SymplecticMatrix::translation(&(-&x))?;
    let ay_inv = SymplecticMatrix::scaling(
        &y.clone()
            .try_inverse()
            .ok_or_else(|| Error::num("singular y"))?,
    )?;
    let k = ay_inv.compose(&nx_inv)?.compose(g)?;
    let u = from_parts(&k.a(), &k.b());
    let residual = max_abs(&(k.c() + k.b())).max(max_abs(&(k.d() - k.a())));
    if residual > RESIDUAL_TOL {
        return Err(Error::num(format!(
            "compact residual is not block-unitary ({residual:e})"
        )));
    }
    let u = UnitaryMatrix::with_tolerance(u, RESIDUAL_TOL)
        .map_err(|e| Error::num(format!("compact residual: {e}")))?;
    Ok(NakFactors { x, y, u })
}

/// Factors of `g = k_u h_t k_{u'}` with `t` sorted descending and nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct KakFactors {
    pub u: UnitaryMatrix,
    pub t: Vec<f64>,
    pub uprime: UnitaryMatrix,
}

impl KakFactors {
    pub fn reassemble(&self) -> Result<SymplecticMatrix> {
        embed_unitary(&self.u)
            .compose(&SymplecticMatrix::torus(&self.t))?
            .compose(&embed_unitary(&self.uprime))
    }
}

/// KAK factorization from the eigendecomposition of `g^T g = k_{u'}^T h_t^2 k_{u'}`.
///
/// Rows of `u'` are read off eigenvectors of the `n` largest eigenvalues;
/// inside a degenerate eigenvalue-one cluster the candidates are
/// Gram-Schmidt orthonormalized in `C^n` and those that collapse onto an
/// already accepted complex line are skipped. The remaining freedom is a
/// sign per column of `u`, fixed by making the first non-negligible entry of
/// each column have positive real part.
pub fn kak_decompose(g: &SymplecticMatrix) -> Result<KakFactors> {
    let n = g.n;
    let gram = symmetrize(&(g.g.transpose() * &g.g));
    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut rows: Vec<DVector<Complex64>> = Vec::with_capacity(n);
    let mut t = Vec::with_capacity(n);
    for idx in order {
        if rows.len() == n {
            break;
        }
        let e = eig.eigenvectors.column(idx);
        let mut v = DVector::from_fn(n, |j, _| Complex64::new(e[j], e[n + j]));
        for r in &rows {
            let c = r.dotc(&v);
            v -= r * c;
        }
        let norm = v.norm();
        if norm < 0.5 {
            continue;
        }
        v /= Complex64::new(norm, 0.0);
        rows.push(v);
        t.push(0.5 * eig.eigenvalues[idx].max(1.0).ln());
    }
    if rows.len() != n {
        return Err(Error::num("could not extract a unitary frame from g^T g"));
    }

    let mut uprime = ComplexMatrix::from_fn(n, n, |r, c| rows[r][c]);
    let kprime = embed_unitary(&UnitaryMatrix::from_trusted(uprime.clone()));
    let gk = &g.g * kprime.g.transpose();
    let mut u = ComplexMatrix::from_fn(n, n, |j, r| {
        let s = (-t[r]).exp();
        Complex64::new(gk[(j, r)] * s, -gk[(n + j, r)] * s)
    });

    for r in 0..n {
        let lead = (0..n).map(|j| u[(j, r)]).find(|v| v.norm() > 1e-8);
        let flip = match lead {
            Some(v) if v.re.abs() > 1e-12 => v.re < 0.0,
            Some(v) => v.im < 0.0,
            None => false,
        };
        if flip {
            for j in 0..n {
                u[(j, r)] = -u[(j, r)];
                uprime[(r, j)] = -uprime[(r, j)];
            }
        }
    }

    let u = UnitaryMatrix::with_tolerance(u, RESIDUAL_TOL)
        .map_err(|e| Error::num(format!("left KAK factor: {e}")))?;
    let uprime = UnitaryMatrix::with_tolerance(uprime, RESIDUAL_TOL)
        .map_err(|e| Error::num(format!("right KAK factor: {e}")))?;
    Ok(KakFactors { u, t, uprime })
}
