//! Seeded random generation of Haar unitaries, symplectic matrices and
//! points of the Siegel upper half-space.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{ComplexMatrix, RealMatrix};
use crate::symplectic::{embed_unitary, SiegelPoint, SymplecticMatrix, UnitaryMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for work item `index` of a run seeded with `seed`.
pub fn sub_rng(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Haar-distributed element of `U(n)` via QR of a complex Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(normal(rng) * s, normal(rng) * s)
    });
    let qr = z.qr();
    let q = qr.q();
    let r = qr.r();
    let phases = DVector::from_fn(n, |i, _| {
        let d = r[(i, i)];
        if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        }
    });
    UnitaryMatrix::from_trusted(q * ComplexMatrix::from_diagonal(&phases))
}

fn random_symmetric<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> RealMatrix {
    let mut x = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = normal(rng) * scale;
            x[(i, j)] = v;
            x[(j, i)] = v;
        }
    }
    x
}

fn random_spd<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> RealMatrix {
    let h = random_symmetric(n, scale, rng);
    let eig = h.symmetric_eigen();
    let d = eig.eigenvalues.map(f64::exp);
    let y = &eig.eigenvectors * RealMatrix::from_diagonal(&d) * eig.eigenvectors.transpose();
    (&y + y.transpose()) * 0.5
}

/// Random point `x + iy` with `x` symmetric Gaussian and `y = exp(h)`.
pub fn random_siegel_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SiegelPoint {
    let x = random_symmetric(n, 1.0, rng);
    let y = random_spd(n, 0.5, rng);
    SiegelPoint::new(x, y).expect("random point is valid")
}

/// Random `n_x a_y k_u` with `scale` controlling the spread of `x` and `log y`.
pub fn random_symplectic<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> SymplecticMatrix {
    let x = random_symmetric(n, scale, rng);
    let y = random_spd(n, scale, rng);
    let u = haar_unitary(n, rng);
    SymplecticMatrix::translation(&x)
        .and_then(|nx| nx.compose(&SymplecticMatrix::scaling(&y)?))
        .and_then(|g| g.compose(&embed_unitary(&u)))
        .expect("random factors are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::sp_check;

    #[test]
    fn haar_is_unitary_and_reproducible() {
        for n in 1..=4 {
            let a = haar_unitary(n, &mut seeded_rng(3));
            let b = haar_unitary(n, &mut seeded_rng(3));
            assert_eq!(a, b);
            let e = a.matrix().adjoint() * a.matrix() - ComplexMatrix::identity(n, n);
            assert!(e.iter().all(|v| v.norm() < 1e-13));
        }
    }

    #[test]
    fn haar_first_entry_moments() {
        // |u_11|^2 for Haar U(n) is Beta(1, n-1) with mean 1/n
        let mut rng = seeded_rng(4);
        let n = 3;
        let trials = 20000;
        let mean: f64 = (0..trials)
            .map(|_| haar_unitary(n, &mut rng).matrix()[(0, 0)].norm_sqr())
            .sum::<f64>()
            / trials as f64;
        assert!((mean - 1.0 / 3.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn random_symplectic_is_symplectic() {
        let mut rng = seeded_rng(5);
        for n in 1..=3 {
            for _ in 0..20 {
                let g = random_symplectic(n, 1.0, &mut rng);
                assert!(sp_check(g.matrix(), 1e-9).unwrap());
            }
        }
    }

    #[test]
    fn sub_streams_differ() {
        let a: u64 = sub_rng(1, 0).random();
        let b: u64 = sub_rng(1, 1).random();
        assert_ne!(a, b);
        let c: u64 = sub_rng(1, 0).random();
        assert_eq!(a, c);
    }
}
