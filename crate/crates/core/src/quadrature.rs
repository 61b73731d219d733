//! Globally adaptive Gauss-Kronrod (10/21 point) quadrature on intervals.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// How an [`IntegralResult`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationMethod {
    ClosedFormBeta,
    AdaptiveQuadrature,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
    pub method: IntegrationMethod,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_868_798,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Weights of the embedded 10 point Gauss rule at `XGK[1], XGK[3], ..., XGK[9]`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

pub trait QuadValue:
    Copy + Send + Sync + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
    /// Evaluate the 21 nodes of each panel on the rayon pool.
    pub parallel: bool,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_evals: 200_000,
            parallel: false,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadOutcome<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

fn gk21<T, F>(f: &F, a: f64, b: f64, parallel: bool) -> Panel<T>
where
    T: QuadValue,
    F: Fn(f64) -> T + Sync,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abscissae: Vec<f64> = (0..21)
        .map(|k| {
            if k < 10 {
                center - half * XGK[k]
            } else if k == 10 {
                center
            } else {
                center + half * XGK[20 - k]
            }
        })
        .collect();
    let values: Vec<T> = if parallel {
        abscissae.par_iter().map(|&x| f(x)).collect()
    } else {
        abscissae.iter().map(|&x| f(x)).collect()
    };
    let node = |k: usize| -> (T, T) { (values[k], values[20 - k]) };

    let fc = values[10];
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::default();
    let mut abs_k = fc.magnitude() * WGK[10];
    for k in 0..10 {
        let (lo, hi) = node(k);
        kronrod = kronrod + (lo + hi) * WGK[k];
        abs_k += (lo.magnitude() + hi.magnitude()) * WGK[k];
        if k % 2 == 1 {
            gauss = gauss + (lo + hi) * WG[k / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).magnitude() * WGK[10];
    for k in 0..10 {
        let (lo, hi) = node(k);
        asc += ((lo - mean).magnitude() + (hi - mean).magnitude()) * WGK[k];
    }
    let value = kronrod * half;
    let abs_k = abs_k * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).magnitude();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let round_floor = 50.0 * f64::EPSILON * abs_k;
    if abs_k > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(round_floor);
    }
    Panel { a, b, value, error }
}

/// Integrates `f` over `[a, b]`, bisecting the panel with the largest error
/// until the summed error meets `max(abs_tol, rel_tol |I|)` or the evaluation
/// budget runs out (reported through `converged`).
pub fn integrate<T, F>(f: F, a: f64, b: f64, settings: &QuadSettings) -> QuadOutcome<T>
where
    T: QuadValue,
    F: Fn(f64) -> T + Sync,
{
    integrate_with_breaks(f, &[a, b], settings)
}

/// Like [`integrate`] with the initial panels given by `breaks` (ascending).
pub fn integrate_with_breaks<T, F>(f: F, breaks: &[f64], settings: &QuadSettings) -> QuadOutcome<T>
where
    T: QuadValue,
    F: Fn(f64) -> T + Sync,
{
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut panels: Vec<Panel<T>> = breaks
        .windows(2)
        .map(|w| gk21(&f, w[0], w[1], settings.parallel))
        .collect();
    let mut evaluations = 21 * panels.len();
    loop {
        let value = panels.iter().fold(T::default(), |acc, p| acc + p.value);
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = settings.abs_tol.max(settings.rel_tol * value.magnitude());
        if error <= target {
            return QuadOutcome {
                value,
                error,
                evaluations,
                converged: true,
            };
        }
        if evaluations + 42 > settings.max_evals {
            return QuadOutcome {
                value,
                error,
                evaluations,
                converged: false,
            };
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // the panel cannot be split further in double precision
            return QuadOutcome {
                value,
                error,
                evaluations,
                converged: false,
            };
        }
        panels.push(gk21(&f, p.a, mid, settings.parallel));
        panels.push(gk21(&f, mid, p.b, settings.parallel));
        evaluations += 42;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact_on_one_panel() {
        let out = integrate(
            |x: f64| x.powi(9) - 3.0 * x * x,
            0.0,
            2.0,
            &QuadSettings::default(),
        );
        assert!((out.value - (102.4 - 8.0)).abs() < 1e-12);
        assert_eq!(out.evaluations, 21);
    }

    #[test]
    fn sqrt_endpoint_singularity_converges() {
        // int_0^1 x^{-1/2} dx = 2
        let settings = QuadSettings {
            rel_tol: 1e-10,
            ..Default::default()
        };
        let out = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, &settings);
        assert!(out.converged);
        assert!((out.value - 2.0).abs() < 1e-9, "{}", out.value);
    }

    #[test]
    fn complex_integrand() {
        // int_0^{2 pi} e^{3ix} dx = 0,  int_0^1 e^{ix} dx = (e^i - 1)/i
        let out = integrate(
            |x: f64| Complex64::new(0.0, x).exp(),
            0.0,
            1.0,
            &QuadSettings::default(),
        );
        let exact = (Complex64::new(0.0, 1.0).exp() - 1.0) / Complex64::new(0.0, 1.0);
        assert!((out.value - exact).norm() < 1e-13);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let settings = QuadSettings {
            abs_tol: 0.0,
            rel_tol: 0.0,
            max_evals: 100,
            parallel: false,
        };
        let out = integrate(|x: f64| (50.0 * x).sin(), 0.0, 10.0, &settings);
        assert!(!out.converged);
        assert!(out.evaluations <= 100);
    }

    #[test]
    fn parallel_and_serial_agree_bitwise() {
        let f = |x: f64| (x * x).cos() * x.exp();
        let s = QuadSettings::default();
        let p = QuadSettings {
            parallel: true,
            ..s
        };
        let a = integrate(f, -1.0, 3.0, &s);
        let b = integrate(f, -1.0, 3.0, &p);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
