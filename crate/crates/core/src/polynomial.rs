//! Polynomials in the `n^2` matrix entries `X_{r,s}`.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// A complex polynomial in the entries of an `n x n` matrix.
///
/// Terms are keyed by their flattened row-major exponent matrix, so the
/// `BTreeMap` order is the lexicographic order on exponents. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial {
    n: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TermJson {
    coeff: [f64; 2],
    exps: Vec<Vec<u32>>,
}

static DET_CACHE: OnceLock<RwLock<HashMap<(usize, u32), Arc<MatrixPolynomial>>>> = OnceLock::new();

fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(
        prefix: &mut Vec<usize>,
        used: &mut [bool],
        sign: i32,
        out: &mut Vec<(Vec<usize>, i32)>,
    ) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), sign));
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            // count inversions introduced by placing v after the prefix
            let inversions = prefix.iter().filter(|&&p| p > v).count() as i32;
            let s = if inversions % 2 == 0 { sign } else { -sign };
            used[v] = true;
            prefix.push(v);
            rec(prefix, used, s, out);
            prefix.pop();
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], 1, &mut out);
    out
}

impl MatrixPolynomial {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        let mut p = Self::zero(n);
        p.insert(vec![0; n * n], c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Complex64::new(1.0, 0.0))
    }

    /// The variable `X_{r,s}` (1-based indices).
    pub fn variable(n: usize, r: usize, s: usize) -> Result<Self> {
        if r == 0 || s == 0 || r > n || s > n {
            return Err(Error::domain(format!(
                "X_{{{r},{s}}} is out of range for n = {n}"
            )));
        }
        let mut exps = vec![0; n * n];
        exps[(r - 1) * n + (s - 1)] = 1;
        let mut p = Self::zero(n);
        p.insert(exps, Complex64::new(1.0, 0.0));
        Ok(p)
    }

    /// `det^l`, expanded once per `(n, l)` and cached.
    pub fn det_power(n: usize, l: u32) -> Arc<MatrixPolynomial> {
        let cache = DET_CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(p) = cache.read().expect("det cache poisoned").get(&(n, l)) {
            return Arc::clone(p);
        }
        let mut det = Self::zero(n);
        for (perm, sign) in permutations(n) {
            let mut exps = vec![0; n * n];
            for (r, &c) in perm.iter().enumerate() {
                exps[r * n + c] += 1;
            }
            det.insert(exps, Complex64::new(sign as f64, 0.0));
        }
        let value = Arc::new(det.pow(l));
        let mut guard = cache.write().expect("det cache poisoned");
        match guard.entry((n, l)) {
            Entry::Occupied(e) => Arc::clone(e.get()),
            Entry::Vacant(e) => Arc::clone(e.insert(value)),
        }
    }

    fn insert(&mut self, exps: Vec<u32>, c: Complex64) {
        let slot = self.terms.entry(exps).or_insert(Complex64::new(0.0, 0.0));
        *slot += c;
        if *slot == Complex64::new(0.0, 0.0) {
            self.terms.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        }
    }

    pub fn degree_n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Complex64)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn same_degree(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::dim(format!(
                "polynomials in {}x{} and {}x{} variables",
                self.n, self.n, other.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_degree(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), *c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_degree(other)?;
        let mut out = Self::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.n);
        for (e, v) in &self.terms {
            out.insert(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.n);
        for _ in 0..k {
            out = out.mul(self).expect("same degree");
        }
        out
    }

    /// Evaluates at an `n x n` complex matrix.
    pub fn eval(&self, w: &ComplexMatrix) -> Result<Complex64> {
        if w.shape() != (self.n, self.n) {
            return Err(Error::dim(format!(
                "polynomial in {}x{} variables evaluated at a {}x{} matrix",
                self.n,
                self.n,
                w.nrows(),
                w.ncols()
            )));
        }
        let n = self.n;
        let mut total = Complex64::new(0.0, 0.0);
        for (exps, c) in &self.terms {
            let mut term = *c;
            for (k, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term *= w[(k / n, k % n)].powu(e);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Evaluation for `n = 1`, where the polynomial is univariate.
    pub fn eval_scalar(&self, w: Complex64) -> Complex64 {
        debug_assert_eq!(self.n, 1);
        self.terms.iter().map(|(e, c)| c * w.powu(e[0])).sum()
    }

    /// If this polynomial is `c * det^l`, returns `(c, l)`.
    pub fn as_det_power(&self) -> Option<(Complex64, u32)> {
        let l = self.total_degree();
        if !l.is_multiple_of(self.n as u32) {
            return None;
        }
        let l = l / self.n as u32;
        let base = MatrixPolynomial::det_power(self.n, l);
        let (e0, c0) = base.terms.iter().next()?;
        let c = *self.terms.get(e0)? / c0;
        let scaled = base.scale(c);
        let close = scaled.terms.len() == self.terms.len()
            && scaled.terms.iter().all(|(e, v)| {
                self.terms
                    .get(e)
                    .is_some_and(|w| (w - v).norm() <= 1e-12 * (1.0 + v.norm()))
            });
        close.then_some((c, l))
    }

    pub fn from_json(n_hint: Option<usize>, text: &str) -> Result<Self> {
        let raw: Vec<TermJson> = serde_json::from_str(text)?;
        let n = match raw.first() {
            Some(t) => t.exps.len(),
            None => n_hint.ok_or_else(|| Error::Parse("empty polynomial needs a degree".into()))?,
        };
        if n == 0 {
            return Err(Error::Parse("exponent matrix must be non-empty".into()));
        }
        if let Some(h) = n_hint {
            if h != n {
                return Err(Error::dim(format!(
                    "polynomial has degree {n}, expected {h}"
                )));
            }
        }
        let mut p = Self::zero(n);
        for t in raw {
            if t.exps.len() != n || t.exps.iter().any(|row| row.len() != n) {
                return Err(Error::Parse("exponent matrices must all be n x n".into()));
            }
            let flat: Vec<u32> = t.exps.into_iter().flatten().collect();
            p.insert(flat, Complex64::new(t.coeff[0], t.coeff[1]));
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        let n = self.n;
        let raw: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(e, c)| TermJson {
                coeff: [c.re, c.im],
                exps: e.chunks(n).map(|r| r.to_vec()).collect(),
            })
            .collect();
        serde_json::to_string(&raw).expect("serializable")
    }

    /// Parses the shorthand grammar: integer-coefficient sums of products of
    /// `1`, integers, `det`, `det^L`, `X_{r,s}` and `X_{r,s}^k`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut parser = Parser { chars, pos: 0, n };
        let p = parser.sum()?;
        if parser.pos != parser.chars.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(p)
    }
}

impl fmt::Display for MatrixPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let n = self.n;
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for (k, &p) in e.iter().enumerate() {
                if p > 0 {
                    write!(f, "*X_{{{},{}}}", k / n + 1, k % n + 1)?;
                    if p > 1 {
                        write!(f, "^{p}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn error(&self, msg: &str) -> Error {
        let s: String = self.chars.iter().collect();
        Error::Parse(format!("{msg} at position {} in `{s}`", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.error("integer out of range"))
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.eat('^') {
            let k = self.integer()?;
            u32::try_from(k).map_err(|_| self.error("exponent too large"))
        } else {
            Ok(1)
        }
    }

    fn sum(&mut self) -> Result<MatrixPolynomial> {
        let mut sign = 1.0;
        if self.eat('-') {
            sign = -1.0;
        } else {
            self.eat('+');
        }
        let mut acc = self.product()?.scale(Complex64::new(sign, 0.0));
        loop {
            let sign = if self.eat('+') {
                1.0
            } else if self.eat('-') {
                -1.0
            } else {
                break;
            };
            let term = self.product()?.scale(Complex64::new(sign, 0.0));
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<MatrixPolynomial> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MatrixPolynomial> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let k = self.integer()?;
                Ok(MatrixPolynomial::constant(
                    self.n,
                    Complex64::new(k as f64, 0.0),
                ))
            }
            Some('d') => {
                for c in ['d', 'e', 't'] {
                    self.expect(c)?;
                }
                let l = self.exponent()?;
                Ok((*MatrixPolynomial::det_power(self.n, l)).clone())
            }
            Some('X') => {
                self.pos += 1;
                self.expect('_')?;
                self.expect('{')?;
                let r = self.integer()? as usize;
                self.expect(',')?;
                let s = self.integer()? as usize;
                self.expect('}')?;
                let k = self.exponent()?;
                Ok(MatrixPolynomial::variable(self.n, r, s)?.pow(k))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(')')?;
                let k = self.exponent()?;
                Ok(inner.pow(k))
            }
            _ => Err(self.error("expected `1`, an integer, `det^L` or `X_{r,s}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::complexify;
    use nalgebra::DMatrix;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn det_expansion_matches_numeric_determinant() {
        for n in 1..=4 {
            let m = DMatrix::from_fn(n, n, |r, s| {
                Complex64::new((r * 3 + s) as f64 * 0.37 - 1.0, (r + 2 * s) as f64 * 0.11)
            });
            let expected = m.determinant();
            let got = MatrixPolynomial::det_power(n, 1).eval(&m).unwrap();
            assert!(
                (got - expected).norm() < 1e-12 * (1.0 + expected.norm()),
                "n = {n}"
            );
            let got3 = MatrixPolynomial::det_power(n, 3).eval(&m).unwrap();
            assert!((got3 - expected.powu(3)).norm() < 1e-10 * (1.0 + expected.norm().powi(3)));
        }
    }

    #[test]
    fn constant_term_at_zero() {
        let p = MatrixPolynomial::parse(2, "3 + X_{1,2}*X_{2,1} - 2*det^2").unwrap();
        let zero = ComplexMatrix::zeros(2, 2);
        assert_eq!(p.eval(&zero).unwrap(), c(3.0));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = MatrixPolynomial::parse(2, "X_{1,1} - X_{1,1}").unwrap();
        assert!(p.is_zero());
        let q = MatrixPolynomial::parse(1, "X_{1,1}^2 + 1 - 1").unwrap();
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn shorthand_grammar() {
        let n = 2;
        let w = complexify(&DMatrix::from_row_slice(2, 2, &[0.3, -0.2, -0.2, 0.5]));
        let det = 0.3 * 0.5 - 0.04;
        let one = MatrixPolynomial::parse(n, "1").unwrap();
        assert_eq!(one.eval(&w).unwrap(), c(1.0));
        let d2 = MatrixPolynomial::parse(n, "det^2").unwrap();
        assert!((d2.eval(&w).unwrap() - c(det * det)).norm() < 1e-15);
        let mixed = MatrixPolynomial::parse(n, "2*X_{1,1}*X_{2,2} - det + X_{1,2}^3").unwrap();
        let expect = 2.0 * 0.15 - det - 0.008;
        assert!((mixed.eval(&w).unwrap() - c(expect)).norm() < 1e-15);
        assert!(MatrixPolynomial::parse(n, "X_{3,1}").is_err());
        assert!(MatrixPolynomial::parse(n, "sin(X)").is_err());
        assert!(MatrixPolynomial::parse(n, "det^").is_err());
    }

    #[test]
    fn det_power_detection() {
        let p = MatrixPolynomial::parse(2, "3*det^2").unwrap();
        let (coeff, l) = p.as_det_power().unwrap();
        assert_eq!(l, 2);
        assert!((coeff - c(3.0)).norm() < 1e-15);
        assert_eq!(MatrixPolynomial::one(3).as_det_power(), Some((c(1.0), 0)));
        assert!(MatrixPolynomial::parse(2, "X_{1,1}")
            .unwrap()
            .as_det_power()
            .is_none());
        let x = MatrixPolynomial::parse(1, "X_{1,1}^3").unwrap();
        assert_eq!(x.as_det_power(), Some((c(1.0), 3)));
    }

    #[test]
    fn json_schema() {
        let p = MatrixPolynomial::parse(2, "det - 2").unwrap();
        let text = p.to_json();
        let q = MatrixPolynomial::from_json(Some(2), &text).unwrap();
        assert_eq!(p, q);
        let raw = r#"[{"coeff": [1.5, -2.0], "exps": [[1, 0], [0, 2]]}]"#;
        let r = MatrixPolynomial::from_json(None, raw).unwrap();
        let w = complexify(&DMatrix::from_row_slice(2, 2, &[2.0, 7.0, 7.0, 3.0]));
        assert_eq!(r.eval(&w).unwrap(), Complex64::new(1.5, -2.0) * 18.0);
        assert!(MatrixPolynomial::from_json(Some(3), raw).is_err());
    }

    #[test]
    fn terms_are_lexicographically_ordered() {
        let p = MatrixPolynomial::parse(2, "X_{2,2} + X_{1,1} + 5").unwrap();
        let keys: Vec<Vec<u32>> = p.terms().map(|(e, _)| e.to_vec()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}
