//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! a failure status if any criterion fails.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use siegel_core::discrete_series::{
    f_mu_m, lift, matrix_coeff, matrix_coeff_via_lift, slash, slash_eval, MatrixCoefficientSpec,
    Weight,
};
use siegel_core::lattice::{enumerate_ball, CongruenceGroup, EnumerationBall, DEFAULT_BUDGET};
use siegel_core::nonvanishing::{n0_detl, ThresholdSettings};
use siegel_core::petersson::{
    mc_cmn, verify_cor62, verify_thm93, FundamentalDomainSpec, IdentitySettings,
};
use siegel_core::poincare::{norm_bounds_check, poincare_F, poincare_f, span_probe};
use siegel_core::polynomial::MatrixPolynomial;
use siegel_core::sampling::{
    haar_unitary, random_siegel_point, random_symplectic, seeded_rng, sub_rng,
};
use siegel_core::symplectic::{
    act, chi, embed_unitary, im_transform, j_factor, kak_decompose, nak_decompose, SiegelPoint,
};
use statrs::function::gamma::gamma;

const TABLE_N1: [[u64; 8]; 13] = [
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

const TABLE_N2: [[u64; 8]; 13] = [
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

type Check = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn table(n: usize, first_m: i64, reference: &[[u64; 8]; 13]) -> Check {
    let settings = ThresholdSettings {
        tol: 1e-10,
        ..ThresholdSettings::default()
    };
    let mut bad = Vec::new();
    let mut min_margin = f64::INFINITY;
    for (l, row) in reference.iter().enumerate() {
        for (j, &expect) in row.iter().enumerate() {
            let m = first_m + j as i64;
            match n0_detl(l as u32, Weight::new(m, n), &settings) {
                Ok(r) if r.n0 == expect => min_margin = min_margin.min(r.margin),
                Ok(r) => bad.push(format!("(l={l}, m={m}) gave {} instead of {expect}", r.n0)),
                Err(e) => bad.push(format!("(l={l}, m={m}): {e}")),
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("104/104 entries, smallest margin {min_margin:.2e}"))
    } else {
        Err(bad.join("; "))
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

fn matrix_coefficients() -> Check {
    let mut worst: f64 = 0.0;
    for n in 1..=3usize {
        let w = Weight::new(2 * n as i64 + 2, n);
        let polys = [
            MatrixPolynomial::one(n),
            (*MatrixPolynomial::det_power(n, 1)).clone(),
            (*MatrixPolynomial::det_power(n, 2)).clone(),
            MatrixPolynomial::variable(n, 1, 1).unwrap(),
        ];
        for (k, mu) in polys.into_iter().enumerate() {
            let spec = MatrixCoefficientSpec::new(mu, w).unwrap();
            let mut rng = seeded_rng(1000 + 10 * n as u64 + k as u64);
            for _ in 0..500 {
                let g = random_symplectic(n, 0.8, &mut rng);
                let a = matrix_coeff(&spec, &g).map_err(|e| e.to_string())?;
                let b = matrix_coeff_via_lift(&spec, &g).map_err(|e| e.to_string())?;
                worst = worst.max(rel(a, b));
            }
        }
    }
    let msg = format!("max relative error {worst:.2e} over 6000 matrices");
    if worst <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn closed_form_c(n: usize, m: i64) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    let mut c = 2f64.powf(nf * (nf + 3.0) / 2.0) * PI.powf(nf * (nf + 1.0) / 2.0);
    for r in 1..=n {
        let r = r as f64;
        c *= gamma(mf - (nf + r) / 2.0) / gamma(mf - (r - 1.0) / 2.0);
    }
    c
}

fn cmn_monte_carlo() -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for (n, m) in [(1usize, 4i64), (1, 12), (2, 5), (2, 8)] {
        let exact = closed_form_c(n, m);
        let r = mc_cmn(Weight::new(m, n), 1_000_000, 42).map_err(|e| e.to_string())?;
        let z = (r.value - exact).abs() / r.error_estimate;
        ok &= z <= 3.0;
        parts.push(format!("(n={n}, m={m}) {z:.2} se"));
    }
    let msg = parts.join(", ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn closed_under_k(ball: &EnumerationBall) -> bool {
    let set: std::collections::HashSet<_> = ball.elements().iter().cloned().collect();
    let ks = ball.group().k_intersection();
    ball.elements()
        .iter()
        .all(|g| ks.iter().all(|k| set.contains(&k.mul(g).unwrap())))
}

fn exact_vanishing() -> Check {
    let cases = [
        (1usize, 1u64, 13i64, 0u32, 10.0),
        (1, 2, 7, 1, 10.0),
        (2, 1, 13, 0, 3.0),
        (2, 2, 7, 1, 6.0),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (n, level, m, l, radius) in cases {
        let group = CongruenceGroup::new(n, level).unwrap();
        let ball = enumerate_ball(&group, radius, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        if !closed_under_k(&ball) {
            return Err(format!(
                "ball (n={n}, N={level}) is not closed under Gamma cap K"
            ));
        }
        let w = Weight::new(m, n);
        let mu = MatrixPolynomial::det_power(n, l);
        let mut rng = seeded_rng(77 + n as u64);
        let z = random_siegel_point(n, &mut rng);
        let g = random_symplectic(n, 0.5, &mut rng);
        let f = poincare_f(&mu, w, &ball, &z).map_err(|e| e.to_string())?;
        let spec = MatrixCoefficientSpec::new((*mu).clone(), w).unwrap();
        let big = poincare_F(&spec, &ball, &g).map_err(|e| e.to_string())?;
        for (name, r) in [("f", &f), ("F", &big)] {
            let limit = 1e-12 * r.terms_used as f64 * r.max_term;
            let pass = r.value.norm() <= limit;
            ok &= pass;
            parts.push(format!(
                "(n={n}, N={level}, m={m}, l={l}, {name}) |sum| {:.1e} <= {:.1e} over {} terms",
                r.value.norm(),
                limit,
                r.terms_used
            ));
        }
    }
    let msg = parts.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn identity_settings() -> IdentitySettings {
    IdentitySettings {
        radius: 40.0,
        domain: FundamentalDomainSpec::new(8.0, 1e-8).unwrap(),
        ..IdentitySettings::default()
    }
}

fn delta_at_i() -> f64 {
    gamma(0.25).powi(24) / (2f64.powi(24) * PI.powi(18))
}

fn cor62() -> Check {
    let r = verify_cor62(12, &identity_settings()).map_err(|e| e.to_string())?;
    let expect = 4.0 * PI / 11.0 * delta_at_i();
    let err = (r.lhs - expect).norm() / expect;
    let msg = format!(
        "<Delta, P f> = {:.10e}, (4 pi/11) Delta(i) = {expect:.10e}, relative error {err:.2e}",
        r.lhs.re
    );
    if err <= 0.02 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn delta_product(z: Complex64) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0 * PI) * z).exp();
    let mut p = q;
    let mut qk = q;
    for _ in 1..400 {
        p *= (Complex64::new(1.0, 0.0) - qk).powi(24);
        qk *= q;
    }
    p
}

fn thm93() -> Check {
    let xis = [
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(0.3, 0.8),
    ];
    let reports = verify_thm93(12, &xis, &identity_settings()).map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (xi, r) in xis.iter().zip(&reports) {
        let target = delta_product(*xi);
        let err = (r.lhs - target).norm() / target.norm();
        ok &= err <= 0.02;
        parts.push(format!("xi={xi}: relative error {err:.2e}"));
    }
    let msg = parts.join(", ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ensure(cond: bool, what: &str, failures: &mut Vec<String>) {
    if !cond {
        failures.push(what.to_string());
    }
}

fn properties() -> Check {
    let mut failures = Vec::new();
    let mut rng = seeded_rng(2024);
    for n in 1..=3usize {
        for _ in 0..200 {
            let g1 = random_symplectic(n, 0.7, &mut rng);
            let g2 = random_symplectic(n, 0.7, &mut rng);
            let z = random_siegel_point(n, &mut rng);
            // cocycle
            let lhs = j_factor(&g1.compose(&g2).unwrap(), &z).unwrap();
            let rhs = j_factor(&g1, &act(&g2, &z).unwrap()).unwrap() * j_factor(&g2, &z).unwrap();
            ensure(rel(lhs, rhs) <= 1e-10, "cocycle", &mut failures);
            // imaginary part transform against a direct evaluation of (Az+B)(Cz+D)^{-1}
            let zc = z.z();
            let cplx = |m: DMatrix<f64>| m.map(|v| Complex64::new(v, 0.0));
            let num = cplx(g1.a()) * &zc + cplx(g1.b());
            let den = cplx(g1.c()) * &zc + cplx(g1.d());
            let gz = num * den.try_inverse().unwrap();
            let direct = gz.map(|v| v.im);
            let formula = im_transform(&g1, &z).unwrap();
            let scale = direct.norm();
            ensure(
                (direct - formula).norm() <= 1e-9 * scale,
                "Im transform",
                &mut failures,
            );
            // NAK and KAK round trips
            let nak = nak_decompose(&g1).unwrap();
            ensure(
                (nak.reassemble().unwrap().matrix() - g1.matrix()).amax() <= 1e-9,
                "NAK round trip",
                &mut failures,
            );
            let kak = kak_decompose(&g1).unwrap();
            ensure(
                (kak.reassemble().unwrap().matrix() - g1.matrix()).amax() <= 1e-9,
                "KAK round trip",
                &mut failures,
            );
            ensure(
                kak.t.windows(2).all(|w| w[0] >= w[1]) && kak.t.iter().all(|&t| t >= 0.0),
                "KAK ordering",
                &mut failures,
            );
            // character equivariance
            let u = haar_unitary(n, &mut rng);
            for l in 0..=2u32 {
                let w = Weight::new(2 * n as i64 + 1, n);
                let spec =
                    MatrixCoefficientSpec::new((*MatrixPolynomial::det_power(n, l)).clone(), w)
                        .unwrap();
                let kg = embed_unitary(&u).compose(&g1).unwrap();
                let a = matrix_coeff_via_lift(&spec, &kg).unwrap();
                let b = chi(w.m + 2 * l as i64, &u) * matrix_coeff_via_lift(&spec, &g1).unwrap();
                ensure(rel(a, b) <= 1e-10, "character equivariance", &mut failures);
            }
            // slash composition
            let w = Weight::new(2 * n as i64 + 2, n);
            let mu = MatrixPolynomial::parse(n, "1 + X_{1,1}").unwrap();
            let f = |p: &SiegelPoint| f_mu_m(&mu, w, p);
            let f1 = slash(&f, &g1, w);
            let twice = slash_eval(&f1, &g2, w, &z).unwrap();
            let once = slash_eval(&f, &g1.compose(&g2).unwrap(), w, &z).unwrap();
            ensure(rel(twice, once) <= 1e-9, "slash composition", &mut failures);
            let lifted = lift(&f, w, &g1).unwrap();
            ensure(lifted.norm().is_finite(), "lift", &mut failures);
        }
    }
    // Haar statistics: E[e^{i theta}] = 0 in U(1); left translation preserves moments in U(3)
    let k = 100_000;
    let mut s = Complex64::new(0.0, 0.0);
    let mut hrng = sub_rng(5, 0);
    for _ in 0..k {
        s += haar_unitary(1, &mut hrng).matrix()[(0, 0)];
    }
    let mean = s / k as f64;
    ensure(
        mean.norm() <= 3.0 * (1.0 / k as f64).sqrt(),
        "Haar U(1) mean",
        &mut failures,
    );
    let v = haar_unitary(3, &mut sub_rng(5, 1));
    let mut a = (0.0, 0.0);
    let mut b = (0.0, 0.0);
    let mut trng = sub_rng(5, 2);
    let trials = 20_000;
    for _ in 0..trials {
        let u = haar_unitary(3, &mut trng);
        let x = u.matrix()[(0, 0)].norm_sqr();
        let y = (v.matrix() * u.matrix())[(0, 0)].norm_sqr();
        a = (a.0 + x, a.1 + x * x);
        b = (b.0 + y, b.1 + y * y);
    }
    let t = trials as f64;
    let (ma, mb) = (a.0 / t, b.0 / t);
    let se = ((a.1 / t - ma * ma) / t).sqrt() + ((b.1 / t - mb * mb) / t).sqrt();
    ensure(
        (ma - 1.0 / 3.0).abs() <= 3.0 * se && (mb - 1.0 / 3.0).abs() <= 3.0 * se,
        "Haar invariance",
        &mut failures,
    );
    // norm bounds
    for (n, r, level) in [(1usize, 0.5, 1u64), (1, 0.5, 5), (2, 0.4, 1), (2, 0.4, 2)] {
        let rep = norm_bounds_check(n, r, level, 1000, 9).unwrap();
        ensure(rep.pass, "norm bounds", &mut failures);
    }
    if failures.is_empty() {
        Ok("cocycle, Im transform, NAK/KAK, character, slash, Haar, norm bounds".into())
    } else {
        failures.sort();
        failures.dedup();
        Err(format!("failed: {}", failures.join(", ")))
    }
}

fn span() -> Check {
    let group = CongruenceGroup::full(1).unwrap();
    let ball = enumerate_ball(&group, 40.0, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let polys: Vec<MatrixPolynomial> = (0..=5)
        .map(|d| MatrixPolynomial::variable(1, 1, 1).unwrap().pow(d))
        .collect();
    let mut rng = seeded_rng(8);
    let points: Vec<SiegelPoint> = (0..8)
        .map(|_| {
            let z = Complex64::new(rng.random::<f64>() - 0.5, 0.9 + 0.6 * rng.random::<f64>());
            SiegelPoint::scalar(z).unwrap()
        })
        .collect();
    let probe =
        span_probe(&polys, Weight::new(12, 1), &ball, &points, 1e-6).map_err(|e| e.to_string())?;
    let ratio = probe.singular_values[1] / probe.singular_values[0];
    let msg = format!(
        "numerical rank {}, sigma_2 / sigma_1 = {ratio:.2e}",
        probe.numerical_rank
    );
    if probe.numerical_rank == 1 && ratio < 1e-6 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("N0 table, degree one", 60, || table(1, 3, &TABLE_N1)),
        ("N0 table, degree two", 600, || table(2, 5, &TABLE_N2)),
        ("matrix coefficient identity", 60, matrix_coefficients),
        ("C_(m,n) Monte Carlo", 120, cmn_monte_carlo),
        ("exact vanishing", 60, exact_vanishing),
        ("Petersson identity for P f_(1,12)", 300, cor62),
        ("reproducing kernel identity", 600, thm93),
        ("property suites", 120, properties),
        ("spanning probe", 120, span),
    ];
    let mut failed = 0;
    let mut out = std::io::stdout();
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(msg) if elapsed > Duration::from_secs(limit) => {
                Err(format!("{msg}; runtime {elapsed:.1?} exceeds {limit} s"))
            }
            other => other,
        };
        let (tag, msg) = match &result {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        let _ = writeln!(out, "{tag} {name} ({elapsed:.1?}): {msg}");
    }
    let _ = out.flush();
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
