//! JSON matrix files: `{"rows": r, "cols": c, "re": [...], "im": [...]}`,
//! entries row-major, `im` optional.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{all_finite, ComplexMatrix, RealMatrix};
use crate::symplectic::{SiegelPoint, SymplecticMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_real(m: &RealMatrix) -> Self {
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            re: m.transpose().iter().copied().collect(),
            im: None,
        }
    }

    pub fn from_complex(m: &ComplexMatrix) -> Self {
        let t = m.transpose();
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            re: t.iter().map(|v| v.re).collect(),
            im: Some(t.iter().map(|v| v.im).collect()),
        }
    }

    fn check(&self) -> Result<()> {
        let len = self.rows * self.cols;
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::dim("matrix file has an empty dimension"));
        }
        if self.re.len() != len || self.im.as_ref().is_some_and(|im| im.len() != len) {
            return Err(Error::dim(format!(
                "matrix file needs {len} entries per part"
            )));
        }
        Ok(())
    }

    pub fn to_real(&self) -> Result<RealMatrix> {
        self.check()?;
        if self
            .im
            .as_ref()
            .is_some_and(|im| im.iter().any(|&v| v != 0.0))
        {
            return Err(Error::domain("expected a real matrix"));
        }
        let m = RealMatrix::from_row_slice(self.rows, self.cols, &self.re);
        if !all_finite(&m) {
            return Err(Error::num("matrix has non-finite entries"));
        }
        Ok(m)
    }

    pub fn to_complex(&self) -> Result<ComplexMatrix> {
        self.check()?;
        let im = self.im.clone().unwrap_or_else(|| vec![0.0; self.re.len()]);
        let entries: Vec<Complex64> = self
            .re
            .iter()
            .zip(&im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        if entries
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::num("matrix has non-finite entries"));
        }
        Ok(ComplexMatrix::from_row_slice(
            self.rows, self.cols, &entries,
        ))
    }
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    let m: MatrixFile = serde_json::from_str(text)?;
    m.check()?;
    Ok(m)
}

pub fn read_matrix(path: &Path) -> Result<MatrixFile> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(path: &Path, m: &MatrixFile) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(m)?)?;
    Ok(())
}

/// Reads a real `2n x 2n` matrix and checks it is symplectic.
pub fn load_symplectic(path: &Path) -> Result<SymplecticMatrix> {
    SymplecticMatrix::new(read_matrix(path)?.to_real()?)
}

/// Reads a complex symmetric matrix `z = x + iy` with `y` positive definite.
pub fn load_siegel_point(path: &Path) -> Result<SiegelPoint> {
    SiegelPoint::from_complex(&read_matrix(path)?.to_complex()?)
}

/// Parses a complex scalar written as `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot read '{text}' as a complex number"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&k| {
            (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
        });
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            v => v.parse::<f64>().map_err(|_| bad())?,
        };
        let re = re.parse::<f64>().map_err(|_| bad())?;
        return Ok(Complex64::new(re, im));
    }
    Ok(Complex64::new(s.parse::<f64>().map_err(|_| bad())?, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0.3+0.8i").unwrap(), Complex64::new(0.3, 0.8));
        assert_eq!(parse_complex("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("-1.5").unwrap(), Complex64::new(-1.5, 0.0));
        assert_eq!(
            parse_complex("1e-3-2e+1i").unwrap(),
            Complex64::new(1e-3, -20.0)
        );
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        let g = SymplecticMatrix::torus(&[0.3, -0.2]);
        write_matrix(&path, &MatrixFile::from_real(g.matrix())).unwrap();
        assert_eq!(load_symplectic(&path).unwrap(), g);
        std::fs::write(&path, r#"{"rows":2,"cols":2,"re":[1,1,0,2]}"#).unwrap();
        assert!(load_symplectic(&path).is_err());
        std::fs::write(&path, r#"{"rows":2,"cols":2,"re":[1,0,0]}"#).unwrap();
        assert!(matches!(read_matrix(&path), Err(Error::Dimension(_))));
    }

    #[test]
    fn siegel_point_file() {
        let z = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.1, 2.0),
                Complex64::new(0.2, 0.1),
                Complex64::new(0.2, 0.1),
                Complex64::new(0.0, 1.0),
            ],
        );
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z.json");
        write_matrix(&path, &MatrixFile::from_complex(&z)).unwrap();
        let p = load_siegel_point(&path).unwrap();
        assert!((p.z() - z).iter().all(|v| v.norm() < 1e-15));
    }
}
