//! Gauge equivalence `B = ±U Pᵀ A P U*` with `P` a permutation and `U` a
//! diagonal of signs.

use itertools::Itertools;
use serde::Serialize;

use super::{ReportBuilder, VerificationReport};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, Permutation};
use crate::minors::MinorEngine;

/// Largest size searched exhaustively.
pub const MAX_EXHAUSTIVE_DIM: usize = 6;
pub const GAUGE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GaugeMode {
    /// Search every permutation and sign pattern.
    Exhaustive,
    /// Compare the sorted multisets of all minor magnitudes (necessary condition).
    Invariant,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gauge {
    pub permutation: Permutation,
    pub signs: Vec<f64>,
    pub global_sign: f64,
    pub residual: f64,
}

/// Smallest-residual gauge mapping `a` onto `b`, stopping at the first one within `tol`.
pub fn find_gauge(a: &Matrix<f64>, b: &Matrix<f64>, tol: f64) -> Result<Gauge> {
    let n = check_sizes(a, b)?;
    if n > MAX_EXHAUSTIVE_DIM {
        return Err(Error::Domain(format!("exhaustive gauge search is limited to size {MAX_EXHAUSTIVE_DIM}, got {n}")));
    }
    let mut best: Option<Gauge> = None;
    for image in (0..n).permutations(n) {
        // First sign fixed to +1; the global sign covers the other half.
        for pattern in 0u32..(1 << n.saturating_sub(1)) {
            let signs: Vec<f64> =
                (0..n).map(|i| if i > 0 && pattern >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 }).collect();
            for global_sign in [1.0, -1.0] {
                let bound = best.as_ref().map_or(f64::INFINITY, |g| g.residual);
                let mut residual: f64 = 0.0;
                'scan: for x in 0..n {
                    for y in 0..n {
                        let v = global_sign * signs[x] * signs[y] * a[(image[x], image[y])];
                        residual = residual.max((v - b[(x, y)]).abs());
                        if residual >= bound {
                            break 'scan;
                        }
                    }
                }
                if residual < bound {
                    best = Some(Gauge {
                        permutation: Permutation::new(image.clone())?,
                        signs: signs.clone(),
                        global_sign,
                        residual,
                    });
                    if residual <= tol {
                        return Ok(best.expect("just set"));
                    }
                }
            }
        }
    }
    Ok(best.unwrap_or(Gauge { permutation: Permutation::identity(0), signs: Vec::new(), global_sign: 1.0, residual: 0.0 }))
}

fn check_sizes(a: &Matrix<f64>, b: &Matrix<f64>) -> Result<usize> {
    if !a.is_square() || a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Dimension(format!(
            "gauge comparison of {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(a.rows())
}

/// Reports whether `a` and `b` are gauge-equivalent under the chosen mode.
pub fn gauge_equivalent(engine: &MinorEngine, a: &Matrix<f64>, b: &Matrix<f64>, mode: GaugeMode) -> Result<VerificationReport> {
    let n = check_sizes(a, b)?;
    let mut report = ReportBuilder::new(format!("gauge/{}", if mode == GaugeMode::Exhaustive { "exhaustive" } else { "invariant" }), GAUGE_TOLERANCE);
    match mode {
        GaugeMode::Exhaustive => {
            let g = find_gauge(a, b, GAUGE_TOLERANCE)?;
            report.residual(n, "best gauge residual", g.residual);
            if g.residual <= GAUGE_TOLERANCE {
                report.note(format!(
                    "permutation {:?}, signs {:?}, global sign {:+}",
                    g.permutation.image(),
                    g.signs,
                    g.global_sign
                ));
            }
        }
        GaugeMode::Invariant => {
            let mut xs = engine.minor_magnitudes(a)?;
            let mut ys = engine.minor_magnitudes(b)?;
            xs.sort_by(f64::total_cmp);
            ys.sort_by(f64::total_cmp);
            let worst = xs.iter().zip(&ys).map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1.0)).fold(0.0, f64::max);
            report.residual(n, "sorted minor magnitudes", worst);
        }
    }
    Ok(report.finish())
}
