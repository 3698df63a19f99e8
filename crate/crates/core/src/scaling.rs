//! Entropy series over system sizes and fits to `M_α(L) = m L + b ln L − c`.

use std::f64::consts::LN_2;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{shannon_limit, stabilizer_renyi, stabilizer_renyi_from_log, LimitTarget};
use crate::error::{Error, Result};
use crate::identities::{table2_closed, Table2Row};
use crate::minors::MinorEngine;
use crate::models::{Boundary, Family, ModelSpec};

/// Closed-form fits drop sizes below this by default.
pub const DEFAULT_FIT_MIN_L: usize = 20;
/// Fits whose largest size is below this carry a finite-size caveat.
pub const FINITE_SIZE_L: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Brute,
    Closed,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Brute => "brute",
            Source::Closed => "closed",
        })
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "brute" => Ok(Source::Brute),
            "closed" => Ok(Source::Closed),
            _ => Err(Error::Parse(format!("unknown source {s:?} (expected brute or closed)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesPoint {
    #[serde(rename = "L")]
    pub l: usize,
    pub value: f64,
}

/// Number of TFI blocks a symbol-family entropy splits into, and their size.
fn tfi_blocks(family: Family, l: usize) -> Option<(usize, usize)> {
    match family {
        Family::Tfi => Some((1, l)),
        Family::ZnPlusOne { n } => Some((n, l / n)),
        Family::Chiral { m } => Some((2 * m, l / (2 * m))),
        Family::Xx => None,
    }
}

fn closed_point(family: Family, boundary: Boundary, alpha: f64, l: usize) -> Result<f64> {
    let row = Table2Row::from_alpha(alpha).ok_or_else(|| {
        Error::Unavailable(format!("no closed form for alpha = {alpha}; closed forms exist for 0.5, 2, 4, otherwise use --source brute"))
    })?;
    let (copies, size) = tfi_blocks(family, l)
        .ok_or_else(|| Error::Unavailable(format!("no closed form for {family}; use --source brute")))?;
    if family != Family::Tfi {
        ModelSpec::new(family, boundary, l)?;
    }
    let log_det = table2_closed(boundary, row, size)?;
    Ok(copies as f64 * stabilizer_renyi_from_log(size, alpha, log_det)?.value)
}

fn brute_point(engine: &MinorEngine, family: Family, boundary: Boundary, alpha: f64, l: usize) -> Result<f64> {
    let g = ModelSpec::new(family, boundary, l)?.correlation_matrix()?;
    if alpha == 1.0 {
        return Ok(shannon_limit(engine, LimitTarget::Stabilizer(&g))?.value);
    }
    Ok(stabilizer_renyi(engine, &g, alpha)?.value)
}

/// `M_α(L)` for every `L`, in the order given. The closed source covers the
/// TFI chain at `α ∈ {1/2, 2, 4}` and, through their block structure, the
/// symbol families (block count times the TFI value at the block size).
pub fn entropy_series(
    engine: &MinorEngine,
    family: Family,
    boundary: Boundary,
    alpha: f64,
    sizes: &[usize],
    source: Source,
) -> Result<Vec<SeriesPoint>> {
    sizes
        .par_iter()
        .map(|&l| {
            let value = match source {
                Source::Closed => closed_point(family, boundary, alpha, l)?,
                Source::Brute => brute_point(engine, family, boundary, alpha, l)?,
            };
            Ok(SeriesPoint { l, value })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Prediction {
    pub b: f64,
    /// Only universal when `b = 0`.
    pub c: Option<f64>,
}

/// Predicted `(b_α, c_α)`. Periodic: `b = 0`, `c = ln α / (2(α − 1))` up to
/// `α = 4` and `ln 2 / (1 − α)` beyond. Open: `b = −1/4` below 4, `−1/6` at 4,
/// `0` above; no constant.
pub fn cft_prediction(alpha: f64, boundary: Boundary) -> Result<Prediction> {
    if alpha == 1.0 || !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("no scaling prediction for alpha = {alpha}")));
    }
    Ok(match boundary {
        Boundary::Periodic => {
            let c = if alpha <= 4.0 { alpha.ln() / (2.0 * (alpha - 1.0)) } else { LN_2 / (1.0 - alpha) };
            Prediction { b: 0.0, c: Some(c) }
        }
        Boundary::Open => {
            let b = if alpha < 4.0 {
                -0.25
            } else if alpha == 4.0 {
                -1.0 / 6.0
            } else {
                0.0
            };
            Prediction { b, c: None }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    pub alpha: f64,
    pub boundary: Boundary,
    #[serde(rename = "L_grid")]
    pub l_grid: Vec<usize>,
    pub values: Vec<f64>,
    pub m_alpha: f64,
    pub b_alpha: f64,
    pub c_alpha: f64,
    pub residual_rms: f64,
    pub predicted: Prediction,
    pub finite_size_caveat: bool,
}

/// Least squares for a tall `rows × K` system by Householder QR.
pub fn least_squares<const K: usize>(design: &[[f64; K]], rhs: &[f64]) -> Result<[f64; K]> {
    let n = design.len();
    if n < K || rhs.len() != n {
        return Err(Error::Fit(format!("need at least {K} points, got {n}")));
    }
    let mut a: Vec<[f64; K]> = design.to_vec();
    let mut b = rhs.to_vec();
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    for k in 0..K {
        let norm = a[k..].iter().map(|r| r[k] * r[k]).sum::<f64>().sqrt();
        if norm <= 1e-12 * scale.max(1.0) * (n as f64).sqrt() {
            return Err(Error::Fit("rank-deficient design matrix".into()));
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[k..].iter().map(|r| r[k]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        for j in k..K {
            let dot: f64 = v.iter().zip(&a[k..]).map(|(vi, r)| vi * r[j]).sum();
            let f = 2.0 * dot / vv;
            for (vi, r) in v.iter().zip(a[k..].iter_mut()) {
                r[j] -= f * vi;
            }
        }
        let dot: f64 = v.iter().zip(&b[k..]).map(|(vi, bi)| vi * bi).sum();
        let f = 2.0 * dot / vv;
        for (vi, bi) in v.iter().zip(b[k..].iter_mut()) {
            *bi -= f * vi;
        }
    }
    let mut x = [0.0; K];
    for k in (0..K).rev() {
        let tail: f64 = (k + 1..K).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - tail) / a[k][k];
    }
    Ok(x)
}

/// Fits `m L + b ln L − c`; the returned `c_alpha` carries the ansatz sign.
pub fn fit_scaling(alpha: f64, boundary: Boundary, series: &[SeriesPoint]) -> Result<ScalingFit> {
    let predicted = cft_prediction(alpha, boundary)?;
    if series.len() < 4 {
        return Err(Error::Fit(format!("need at least 4 sizes, got {}", series.len())));
    }
    let design: Vec<[f64; 3]> = series.iter().map(|p| [p.l as f64, (p.l as f64).ln(), -1.0]).collect();
    let values: Vec<f64> = series.iter().map(|p| p.value).collect();
    let [m, b, c] = least_squares(&design, &values)?;
    let sq: f64 = design.iter().zip(&values).map(|(d, v)| (m * d[0] + b * d[1] + c * d[2] - v).powi(2)).sum();
    let l_max = series.iter().map(|p| p.l).max().unwrap_or(0);
    Ok(ScalingFit {
        alpha,
        boundary,
        l_grid: series.iter().map(|p| p.l).collect(),
        values,
        m_alpha: m,
        b_alpha: b,
        c_alpha: c,
        residual_rms: (sq / series.len() as f64).sqrt(),
        predicted,
        finite_size_caveat: l_max < FINITE_SIZE_L,
    })
}

/// Drops `L < min_l` unless fewer than four points would remain.
pub fn fit_window(series: &[SeriesPoint], min_l: usize) -> Vec<SeriesPoint> {
    let kept: Vec<SeriesPoint> = series.iter().copied().filter(|p| p.l >= min_l).collect();
    if kept.len() >= 4 {
        kept
    } else {
        series.to_vec()
    }
}

pub const SERIES_CSV_HEADER: &str = "alpha,boundary,L,M_alpha,source";

/// Rows `alpha,boundary,L,M_alpha,source` with a header.
pub fn write_series_csv(
    out: &mut impl Write,
    alpha: f64,
    boundary: Boundary,
    series: &[SeriesPoint],
    source: Source,
) -> std::io::Result<()> {
    writeln!(out, "{SERIES_CSV_HEADER}")?;
    write_series_rows(out, alpha, boundary, series, source)
}

pub fn write_series_rows(
    out: &mut impl Write,
    alpha: f64,
    boundary: Boundary,
    series: &[SeriesPoint],
    source: Source,
) -> std::io::Result<()> {
    for p in series {
        writeln!(out, "{alpha},{boundary},{},{:.17e},{source}", p.l, p.value)?;
    }
    Ok(())
}
