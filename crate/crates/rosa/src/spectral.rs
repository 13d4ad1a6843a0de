//! Pseudo-circulant expansion matrices and their spectra on the planes `E_n^k`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::edgeword::{abelianize, Edgeword};
use crate::error::{Result, RosaError};
use crate::geometry::check_n;

/// Default tolerance of [`classify_planarity`].
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-6;

/// An `n × n` matrix with constant diagonals and a sign flip across the wrap,
/// stored by its first column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoCirculant {
    pub n: usize,
    #[serde(rename = "firstColumn")]
    pub first_column: Vec<i64>,
}

impl PseudoCirculant {
    pub fn new(first_column: Vec<i64>) -> Self {
        PseudoCirculant {
            n: first_column.len(),
            first_column,
        }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    /// Entry `(i, j)`: `m_{i-j}` when `i ≥ j`, else `-m_{i-j+n}`.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        if i >= j {
            self.first_column[i - j]
        } else {
            -self.first_column[i + self.n - j]
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j) * v[j]).sum())
            .collect()
    }

    pub fn apply_f64(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j) as f64 * v[j]).sum())
            .collect()
    }

    pub fn add(&self, o: &PseudoCirculant) -> PseudoCirculant {
        Self::new(
            self.first_column
                .iter()
                .zip(&o.first_column)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, s: i64) -> PseudoCirculant {
        Self::new(self.first_column.iter().map(|a| a * s).collect())
    }

    /// `Σ_j m_j ζ^j` for `ζ = exp(iπ(2k+1)/n)`, as `(re, im)`.
    pub fn symbol(&self, k: usize) -> (f64, f64) {
        let f = (2 * k + 1) as f64 * PI / self.n as f64;
        self.first_column
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (j, &m)| {
                let a = f * j as f64;
                (re + m as f64 * a.cos(), im + m as f64 * a.sin())
            })
    }

    /// Largest residual of `M v - λ v` over the real and imaginary parts,
    /// for `v = (ζ^{-j})_j`, `ζ = exp(iπ(2k+1)/n)` and `λ = Σ m_j ζ^j`.
    ///
    /// With `m` the first column, `(ζ^{-j})_j` is the eigenvector; it is
    /// `(ζ^j)_j` when `m` is read as the first row.
    pub fn eigenvector_residual(&self, k: usize) -> f64 {
        let f = (2 * k + 1) as f64 * PI / self.n as f64;
        let vr: Vec<f64> = (0..self.n).map(|j| (f * j as f64).cos()).collect();
        let vi: Vec<f64> = (0..self.n).map(|j| -(f * j as f64).sin()).collect();
        let (lr, li) = self.symbol(k);
        let mr = self.apply_f64(&vr);
        let mi = self.apply_f64(&vi);
        let mut worst: f64 = 0.0;
        for j in 0..self.n {
            let er = mr[j] - (lr * vr[j] - li * vi[j]);
            let ei = mi[j] - (lr * vi[j] + li * vr[j]);
            worst = worst.max(er.abs()).max(ei.abs());
        }
        worst
    }
}

/// `E_n^i`: identity for `i = 0`, otherwise `m_i = 1`, `m_{n-i} = -1`.
pub fn elementary_matrix(n: usize, i: usize) -> Result<PseudoCirculant> {
    check_n(n)?;
    if i >= n / 2 {
        return Err(RosaError::OutOfRange {
            what: "elementary matrix index",
            value: i as i64,
            allowed: format!("0..{}", n / 2),
        });
    }
    let mut m = vec![0; n];
    if i == 0 {
        m[0] = 1;
    } else {
        m[i] = 1;
        m[n - i] = -1;
    }
    Ok(PseudoCirculant::new(m))
}

/// The expansion matrix of the substitution with edgeword `u`.
pub fn expansion_matrix(n: usize, u: &Edgeword) -> Result<PseudoCirculant> {
    check_n(n)?;
    if u.n() != n {
        return Err(RosaError::DimensionMismatch {
            expected: n,
            got: u.n(),
        });
    }
    let a = abelianize(u).counts;
    let mut m = vec![0i64; n];
    m[0] = a[0] as i64;
    for i in 1..n / 2 {
        m[i] = a[i] as i64;
        m[n - i] = -(a[i] as i64);
    }
    Ok(PseudoCirculant::new(m))
}

/// `Q_n[i][j] = η_j cos((2i+1)jπ/n)` with `η_0 = 1`, `η_j = 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueMatrix {
    pub n: usize,
    pub entries: Vec<Vec<f64>>,
}

impl EigenvalueMatrix {
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

pub fn eigenvalue_matrix(n: usize) -> Result<EigenvalueMatrix> {
    check_n(n)?;
    let h = n / 2;
    let entries = (0..h)
        .map(|i| {
            (0..h)
                .map(|j| {
                    let eta = if j == 0 { 1.0 } else { 2.0 };
                    eta * (((2 * i + 1) * j) as f64 * PI / n as f64).cos()
                })
                .collect()
        })
        .collect();
    Ok(EigenvalueMatrix { n, entries })
}

/// Eigenvalues of an expansion matrix on the planes `E_n^0, …, E_n^{n/2-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub n: usize,
    pub lambdas: Vec<f64>,
}

/// `λ = Q_n · [u]`.
pub fn spectrum(n: usize, u: &Edgeword) -> Result<Spectrum> {
    check_n(n)?;
    if u.is_empty() {
        return Err(RosaError::PreconditionFailed("empty edgeword".into()));
    }
    if u.n() != n {
        return Err(RosaError::DimensionMismatch {
            expected: n,
            got: u.n(),
        });
    }
    let a: Vec<f64> = abelianize(u).counts.iter().map(|&c| c as f64).collect();
    Ok(Spectrum {
        n,
        lambdas: eigenvalue_matrix(n)?.apply(&a),
    })
}

/// `1 / sin²((2k+1)π/(2n))`, the Sub Rosa eigenvalue on `E_n^k`.
pub fn subrosa_eigenvalue(n: usize, k: usize) -> Result<f64> {
    check_n(n)?;
    if k >= n / 2 {
        return Err(RosaError::OutOfRange {
            what: "plane index",
            value: k as i64,
            allowed: format!("0..{}", n / 2),
        });
    }
    let s = ((2 * k + 1) as f64 * PI / (2 * n) as f64).sin();
    Ok(1.0 / (s * s))
}

/// Spectral planarity verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    PlanarSlope0,
    NonPlanar,
    Indeterminate,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::PlanarSlope0 => "PlanarSlope0",
            Classification::NonPlanar => "NonPlanar",
            Classification::Indeterminate => "Indeterminate",
        };
        f.write_str(s)
    }
}

pub fn classify_planarity(s: &Spectrum, tol: f64) -> Classification {
    let l = &s.lambdas;
    if l.is_empty() {
        return Classification::Indeterminate;
    }
    if l[0] > 1.0 + tol && l[1..].iter().all(|x| x.abs() < 1.0 - tol) {
        return Classification::PlanarSlope0;
    }
    if l.iter().filter(|x| x.abs() > 1.0 + tol).count() >= 2 {
        return Classification::NonPlanar;
    }
    Classification::Indeterminate
}

/// JSON report of an expansion spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: usize,
    #[serde(rename = "firstColumn")]
    pub first_column: Vec<i64>,
    pub lambdas: Vec<f64>,
    pub classification: Classification,
}

pub fn spectrum_report(n: usize, u: &Edgeword, tol: f64) -> Result<SpectrumReport> {
    let m = expansion_matrix(n, u)?;
    let s = spectrum(n, u)?;
    let classification = classify_planarity(&s, tol);
    Ok(SpectrumReport {
        n,
        first_column: m.first_column,
        lambdas: s.lambdas,
        classification,
    })
}
