//! Gamma and incomplete beta functions.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut acc = LANCZOS_COEFFS[0];
    for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + k as f64);
    }
    acc
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma needs a positive argument, got {x}");
    if x < 0.5 {
        // reflection keeps the Lanczos series in its accurate range
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + lanczos_sum(x).ln()
}

pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(xm + 0.5) * (-t).exp() * lanczos_sum(xm)
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=2000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn beta_reg(x: f64, a: f64, b: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "beta parameters must be positive");
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let front = (a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b)).exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(x, a, b) / a
    } else {
        1.0 - front * beta_cf(1.0 - x, b, a) / b
    }
}

/// Unregularized incomplete beta `B(x; a, b) = int_0^x s^{a-1} (1-s)^{b-1} ds`.
pub fn beta_inc(x: f64, a: f64, b: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "beta parameters must be positive");
    if x <= 0.0 {
        return 0.0;
    }
    let complete = ln_beta(a, b).exp();
    if x >= 1.0 {
        return complete;
    }
    if x < (a + 1.0) / (a + b + 2.0) {
        (a * x.ln() + b * (-x).ln_1p()).exp() * beta_cf(x, a, b) / a
    } else {
        complete - (b * (1.0 - x).ln() + a * x.ln()).exp() * beta_cf(1.0 - x, b, a) / b
    }
}

/// Median of `Beta(a, b)`, by bisection on the regularized incomplete beta.
pub fn beta_median(a: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_reg(mid, a, b) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_integers_and_half_integers() {
        let mut fact = 1.0;
        for k in 1..20 {
            assert!((gamma(k as f64) - fact).abs() <= 1e-13 * fact, "k = {k}");
            fact *= k as f64;
        }
        let sqrt_pi = PI.sqrt();
        assert!((gamma(0.5) - sqrt_pi).abs() < 1e-14);
        // Gamma(7/2) = 15 sqrt(pi) / 8
        assert!((gamma(3.5) - 15.0 * sqrt_pi / 8.0).abs() < 1e-13);
        assert!((ln_gamma(0.25) - gamma(0.25).ln()).abs() < 1e-13);
    }

    #[test]
    fn ln_gamma_large_argument() {
        // ln Gamma(40) = ln(39!)
        let exact: f64 = (1..40).map(|k| (k as f64).ln()).sum();
        assert!((ln_gamma(40.0) - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn incomplete_beta_closed_forms() {
        // B(x; 1, 1/2) = 2 - 2 sqrt(1 - x)
        for &x in &[0.1, 0.5, 0.75, 0.9, 0.999] {
            let exact = 2.0 - 2.0 * (1.0f64 - x).sqrt();
            assert!((beta_inc(x, 1.0, 0.5) - exact).abs() < 1e-14, "x = {x}");
        }
        assert!((beta_inc(1.0, 1.0, 0.5) - 2.0).abs() < 1e-14);
        // I_x(a, 1) = x^a
        assert!((beta_reg(0.3, 2.5, 1.0) - 0.3f64.powf(2.5)).abs() < 1e-15);
        assert_eq!(beta_reg(0.0, 2.0, 3.0), 0.0);
        assert_eq!(beta_reg(1.0, 2.0, 3.0), 1.0);
    }

    #[test]
    fn incomplete_beta_matches_statrs() {
        for &(a, b) in &[(1.0, 0.5), (3.5, 2.0), (7.0, 4.0), (0.5, 0.5), (6.5, 0.5)] {
            for k in 1..20 {
                let x = k as f64 / 20.0;
                let ours = beta_reg(x, a, b);
                let theirs = statrs::function::beta::beta_reg(a, b, x);
                assert!(
                    (ours - theirs).abs() < 1e-13,
                    "a={a} b={b} x={x}: {ours} vs {theirs}"
                );
            }
        }
    }

    #[test]
    fn median_of_symmetric_beta_is_half() {
        assert!((beta_median(2.0, 2.0) - 0.5).abs() < 1e-14);
        // Beta(1, 1/2): 1 - sqrt(1 - x) = 1/2  =>  x = 3/4
        assert!((beta_median(1.0, 0.5) - 0.75).abs() < 1e-14);
    }
}
