//! Correlation and amplitude matrices of the critical chains.
//!
//! All closed-form entries are evaluated with 1-based site labels `j, k`
//! exactly as the half-shifted formulas are written, then stored 0-based.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SkewMatrix};

/// Distance below which a symbol zero is considered hit.
pub const SYMBOL_ZERO_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[serde(rename = "pbc")]
    Periodic,
    #[serde(rename = "obc")]
    Open,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "pbc",
            Boundary::Open => "obc",
        })
    }
}

impl FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pbc" | "periodic" => Ok(Boundary::Periodic),
            "obc" | "open" => Ok(Boundary::Open),
            _ => Err(Error::Parse(format!("unknown boundary {s:?} (expected pbc or obc)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Family {
    /// Critical transverse-field Ising chain.
    Tfi,
    /// XX chain at zero field, checkerboard reference configuration.
    Xx,
    /// Dispersion `f(z) = z^n + 1`.
    #[serde(rename = "zn+1")]
    ZnPlusOne { n: usize },
    /// Dispersion `f(z) = z^m + z^-m`.
    Chiral { m: usize },
}

impl Family {
    /// Families described by a correlation matrix `G` (as opposed to an amplitude matrix `R`).
    pub fn has_correlation_matrix(self) -> bool {
        !matches!(self, Family::Xx)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Tfi => f.write_str("tfi"),
            Family::Xx => f.write_str("xx"),
            Family::ZnPlusOne { n } => write!(f, "z^{n}+1"),
            Family::Chiral { m } => write!(f, "z^{m}+z^-{m}"),
        }
    }
}

/// A validated (family, boundary, size) triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ModelSpec {
    pub family: Family,
    pub boundary: Boundary,
    pub size: usize,
}

impl ModelSpec {
    pub fn new(family: Family, boundary: Boundary, size: usize) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if size == 0 {
            return bad("size L must be positive".into());
        }
        match family {
            Family::Tfi => {}
            Family::Xx => {
                if size % 2 != 0 {
                    return bad(format!("XX chain needs even L, got {size}"));
                }
            }
            Family::ZnPlusOne { n } => {
                if n == 0 || size % (2 * n) != 0 {
                    return bad(format!("z^n+1 needs n >= 1 and 2n | L, got n={n}, L={size}"));
                }
            }
            Family::Chiral { m } => {
                if m == 0 || size % (2 * m) != 0 || (size / (2 * m)) % 2 != 0 {
                    return bad(format!("z^m+z^-m needs m >= 1, 2m | L and L/(2m) even, got m={m}, L={size}"));
                }
            }
        }
        if matches!(family, Family::ZnPlusOne { .. } | Family::Chiral { .. }) && boundary == Boundary::Open {
            return bad(format!("{family} is defined for periodic boundaries only"));
        }
        Ok(Self { family, boundary, size })
    }

    /// `G` for the correlation-matrix families.
    pub fn correlation_matrix(&self) -> Result<Matrix<f64>> {
        match self.family {
            Family::Tfi => tfi_g(self.boundary, self.size),
            Family::Xx => Err(Error::InvalidModel(
                "the XX chain is described by an amplitude matrix R, not a correlation matrix".into(),
            )),
            Family::ZnPlusOne { .. } | Family::Chiral { .. } => symbol_g(self),
        }
    }

    /// `R` for the amplitude-matrix family.
    pub fn amplitude_matrix(&self) -> Result<SkewMatrix<f64>> {
        match self.family {
            Family::Xx => xx_r(self.boundary, self.size),
            _ => Err(Error::InvalidModel(format!(
                "{} is described by a correlation matrix G, not an amplitude matrix",
                self.family
            ))),
        }
    }
}

fn csc(x: f64) -> f64 {
    1.0 / x.sin()
}

fn parity_sign(d: i64) -> f64 {
    if d.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Ground-state correlation matrix of the critical TFI chain.
pub fn tfi_g(boundary: Boundary, l: usize) -> Result<Matrix<f64>> {
    if l == 0 {
        return Err(Error::InvalidModel("size L must be positive".into()));
    }
    let lf = l as f64;
    Ok(Matrix::from_fn(l, l, |a, b| {
        let (j, k) = ((a + 1) as f64, (b + 1) as f64);
        let sign = parity_sign(a as i64 - b as i64);
        match boundary {
            Boundary::Periodic => sign / lf * csc(PI / lf * (j - k + 0.5)),
            Boundary::Open => {
                let den = 2.0 * lf + 1.0;
                sign / den * (csc(PI / den * (j - k + 0.5)) + csc(PI / den * (j + k - 0.5)))
            }
        }
    }))
}

/// How the open-chain XX rule is read for `j odd, k even` entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObcReading {
    /// The two-cosecant expression for every `(j odd, k even)` pair; the
    /// `(j even, k odd)` entries follow by antisymmetry.
    PrintedRule,
    /// The two-cosecant expression evaluated only above the diagonal
    /// (`j < k`, `j + k` odd), the lower triangle by antisymmetry.
    UpperTriangle,
}

/// Amplitude matrix `R` of the XX chain ground state over the checkerboard configuration.
pub fn xx_r(boundary: Boundary, l: usize) -> Result<SkewMatrix<f64>> {
    match boundary {
        Boundary::Periodic => {
            check_even(l)?;
            let lf = l as f64;
            Ok(SkewMatrix::from_upper(l, |a, b| {
                let (j, k) = (a + 1, b + 1);
                if (j + k) % 2 == 0 {
                    0.0
                } else {
                    let sign = parity_sign(((j + k + 1) / 2) as i64);
                    sign * (2.0 / lf) * csc(PI * (j as f64 - k as f64) / lf)
                }
            }))
        }
        Boundary::Open => xx_r_obc(l, ObcReading::PrintedRule),
    }
}

/// Open-chain XX amplitude matrix under an explicit reading of the entry rule.
pub fn xx_r_obc(l: usize, reading: ObcReading) -> Result<SkewMatrix<f64>> {
    check_even(l)?;
    let theta = PI / (l as f64 + 1.0);
    let entry = |j: usize, k: usize| {
        let (jf, kf) = (j as f64, k as f64);
        (csc((kf - jf) / 2.0 * theta) + csc((kf + jf) / 2.0 * theta)) / (l as f64 + 1.0)
    };
    Ok(SkewMatrix::from_upper(l, |a, b| {
        let (j, k) = (a + 1, b + 1);
        if (j + k) % 2 == 0 {
            return 0.0;
        }
        match reading {
            ObcReading::UpperTriangle => entry(j, k),
            ObcReading::PrintedRule if j % 2 == 1 => entry(j, k),
            // j even, k odd: minus the (k odd, j even) entry.
            ObcReading::PrintedRule => -entry(k, j),
        }
    }))
}

fn check_even(l: usize) -> Result<()> {
    if l == 0 || l % 2 != 0 {
        Err(Error::InvalidModel(format!("XX chain needs even positive L, got {l}")))
    } else {
        Ok(())
    }
}

/// Momentum grid `θ_k = (2π/L)(k − 1/2)`, `k = 1..L`.
pub fn half_shifted_grid(l: usize) -> impl Iterator<Item = f64> {
    let lf = l as f64;
    (1..=l).map(move |k| 2.0 * PI / lf * (k as f64 - 0.5))
}

/// Half-shifted correlation matrix of a validated symbol family.
pub fn symbol_g(spec: &ModelSpec) -> Result<Matrix<f64>> {
    let spec = ModelSpec::new(spec.family, spec.boundary, spec.size)?;
    let l = spec.size;
    let symbol: Box<dyn Fn(f64) -> Result<Complex64>> = match spec.family {
        Family::ZnPlusOne { n } => {
            let nf = n as f64;
            Box::new(move |t| {
                let c = (nf * t / 2.0).cos();
                if c.abs() < SYMBOL_ZERO_TOLERANCE {
                    return Err(Error::SingularSymbol(t));
                }
                Ok(Complex64::from_polar(1.0, nf * t / 2.0) * c.signum())
            })
        }
        Family::Chiral { m } => {
            let mf = m as f64;
            Box::new(move |t| {
                let c = (mf * t).cos();
                if c.abs() < SYMBOL_ZERO_TOLERANCE {
                    return Err(Error::SingularSymbol(t));
                }
                Ok(Complex64::new(c.signum(), 0.0))
            })
        }
        _ => {
            return Err(Error::InvalidModel(format!(
                "{} has no symbol representation here; use its own constructor",
                spec.family
            )))
        }
    };
    let thetas: Vec<f64> = half_shifted_grid(l).collect();
    let symbols = thetas.iter().map(|&t| symbol(t)).collect::<Result<Vec<_>>>()?;
    half_shifted_matrix(l, &thetas, &symbols)
}

/// `G_{nm} = (−1)^{n−m}/L Σ_k s(θ_k) e^{iθ_k(n−m)}`, which depends only on `n − m`.
fn half_shifted_matrix(l: usize, thetas: &[f64], symbols: &[Complex64]) -> Result<Matrix<f64>> {
    let lf = l as f64;
    let span = l as i64 - 1;
    let mut by_offset = Vec::with_capacity(2 * l);
    for d in -span..=span {
        let df = d as f64;
        let sum: Complex64 = thetas.iter().zip(symbols).map(|(&t, &s)| s * Complex64::from_polar(1.0, t * df)).sum();
        by_offset.push(sum * (parity_sign(d) / lf));
    }
    let g = Matrix::from_fn(l, l, |a, b| by_offset[(a as i64 - b as i64 + span) as usize]);
    g.to_real(1e-10)
}

/// `diag(1, −1, 1, −1, …)` of size `n`.
pub fn alternating_signs(n: usize) -> Vec<f64> {
    (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect()
}
