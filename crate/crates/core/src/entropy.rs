//! Rényi entropies from power sums.
//!
//! Shannon-Rényi entropy of `|R, C⟩` in the occupation basis:
//! `H_α = ln(Pf_{2α}(R) / N_R^{2α}) / (1 − α)` with `N_R = det(I + R†R)^{1/4}`.
//!
//! Stabilizer Rényi entropy of a pure Gaussian state with correlation matrix `G`:
//! `M_α = ln(Det_{2α}(G) / Det_2(G)^α) / (1 − α)`, where `Det_2(G) = 2^L` is
//! checked explicitly before it is used.
//!
//! Everything is carried in natural-log units. `α = 1` is served by explicit
//! Shannon entropies of the underlying distributions.

use serde::Serialize;
use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::matrix::{log_abs_determinant, Matrix, Scalar, SkewMatrix};
use crate::minors::{log_spm_fast2, MinorEngine};
use crate::models::ModelSpec;

/// Relative tolerance of the `Det_2(G) = 2^L` purity check.
pub const PURITY_TOLERANCE: f64 = 1e-8;
/// Tolerance on the total probability of an enumerated distribution.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyKind {
    ShannonRenyi,
    Stabilizer,
}

/// What an entropy was computed for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Subject {
    Model(ModelSpec),
    Raw { dim: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyResult {
    pub kind: EntropyKind,
    pub alpha: f64,
    /// Entropy in nats.
    pub value: f64,
    /// `ln Pf_{2α}` or `ln Det_{2α}`. For `α = 1` this holds the entropy itself.
    pub numerator_log: f64,
    /// `2α ln N_R` or `α L ln 2`; zero for `α = 1`.
    pub normalization_log: f64,
    pub subject: Subject,
}

impl EntropyResult {
    fn renyi(kind: EntropyKind, alpha: f64, numerator_log: f64, normalization_log: f64, dim: usize) -> Result<Self> {
        let value = (numerator_log - normalization_log) / (1.0 - alpha);
        if !value.is_finite() {
            return Err(Error::Domain(format!("entropy is not finite (alpha = {alpha})")));
        }
        Ok(Self { kind, alpha, value, numerator_log, normalization_log, subject: Subject::Raw { dim } })
    }

    pub fn with_model(mut self, spec: ModelSpec) -> Self {
        self.subject = Subject::Model(spec);
        self
    }
}

/// `ln N_R` with `N_R = det(I + R†R)^{1/4}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Normalization {
    pub log_nr: f64,
}

pub fn normalization<T: Scalar>(r: &SkewMatrix<T>) -> Result<Normalization> {
    let m = r.as_matrix();
    let mut k = m.adjoint().matmul(m)?;
    for i in 0..k.rows() {
        k[(i, i)] += T::one();
    }
    Ok(Normalization { log_nr: 0.25 * log_abs_determinant(&k)? })
}

fn check_renyi_index(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("Rényi index must be positive, got {alpha}")));
    }
    if alpha == 1.0 {
        return Err(Error::Domain("alpha = 1 is the Shannon limit; use shannon_limit".into()));
    }
    Ok(())
}

/// Verifies `Det_2(G) = 2^L` to [`PURITY_TOLERANCE`] and returns `L ln 2`.
pub fn check_purity<T: Scalar>(g: &Matrix<T>) -> Result<f64> {
    let expected_log = g.rows() as f64 * LN_2;
    let actual_log = log_spm_fast2(g)?;
    if (actual_log - expected_log).abs().exp_m1() > PURITY_TOLERANCE {
        return Err(Error::Purity { expected_log, actual_log });
    }
    Ok(expected_log)
}

/// Shannon-Rényi entropy `H_α` of the Gaussian state with amplitude matrix `R`.
pub fn shannon_renyi<T: Scalar>(engine: &MinorEngine, r: &SkewMatrix<T>, alpha: f64) -> Result<EntropyResult> {
    check_renyi_index(alpha)?;
    let pf = engine.spp(r, 2.0 * alpha)?;
    let norm = normalization(r)?;
    EntropyResult::renyi(EntropyKind::ShannonRenyi, alpha, pf.log_total(), 2.0 * alpha * norm.log_nr, r.dim())
}

/// Stabilizer Rényi entropy `M_α` of the pure Gaussian state with correlation matrix `G`.
pub fn stabilizer_renyi<T: Scalar>(engine: &MinorEngine, g: &Matrix<T>, alpha: f64) -> Result<EntropyResult> {
    check_renyi_index(alpha)?;
    let log_purity = check_purity(g)?;
    let det = engine.spm(g, 2.0 * alpha)?;
    EntropyResult::renyi(EntropyKind::Stabilizer, alpha, det.log_total(), alpha * log_purity, g.rows())
}

/// `M_α` for `L` sites from an externally supplied `ln Det_{2α}(G)` (e.g. a closed form).
pub fn stabilizer_renyi_from_log(l: usize, alpha: f64, log_det: f64) -> Result<EntropyResult> {
    check_renyi_index(alpha)?;
    EntropyResult::renyi(EntropyKind::Stabilizer, alpha, log_det, alpha * l as f64 * LN_2, l)
}

/// Which distribution the `α → 1` limit is taken of.
#[derive(Clone, Copy, Debug)]
pub enum LimitTarget<'a, T> {
    /// Stabilizer distribution `q_{I,J} = |det G[I,J]|² / 2^L`.
    Stabilizer(&'a Matrix<T>),
    /// Occupation distribution `p_S = |pf R[S,S]|² / N_R²`.
    ShannonRenyi(&'a SkewMatrix<T>),
}

/// Shannon entropy `−Σ p ln p` of the chosen distribution, after checking `Σ p = 1`.
pub fn shannon_limit<T: Scalar>(engine: &MinorEngine, target: LimitTarget<'_, T>) -> Result<EntropyResult> {
    let (kind, dim, (total, entropy)) = match target {
        LimitTarget::Stabilizer(g) => {
            let log_norm = check_purity(g)?;
            (EntropyKind::Stabilizer, g.rows(), engine.minor_distribution_entropy(g, log_norm)?)
        }
        LimitTarget::ShannonRenyi(r) => {
            let log_norm = 2.0 * normalization(r)?.log_nr;
            (EntropyKind::ShannonRenyi, r.dim(), engine.pfaffian_distribution_entropy(r, log_norm)?)
        }
    };
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Normalization(total));
    }
    Ok(EntropyResult {
        kind,
        alpha: 1.0,
        value: entropy,
        numerator_log: entropy,
        normalization_log: 0.0,
        subject: Subject::Raw { dim },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::spp;
    use crate::models::{tfi_g, xx_r, Boundary};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    fn engine() -> MinorEngine {
        MinorEngine::default()
    }

    #[test]
    fn normalization_simple_cases() {
        assert_eq!(normalization(&SkewMatrix::<f64>::zeros(4)).unwrap().log_nr, 0.0);
        let r = SkewMatrix::from_upper(2, |_, _| 1.0);
        assert!(rel(normalization(&r).unwrap().log_nr, LN_2 / 2.0) < 1e-15);
    }

    #[test]
    fn doubled_normalization_is_purity() {
        for l in [2usize, 4, 6, 8] {
            let r = xx_r(Boundary::Periodic, 2 * l).unwrap();
            let n2 = 2.0 * normalization(&r).unwrap().log_nr;
            assert!(rel(n2, l as f64 * LN_2) < 1e-12, "L={l}");
        }
    }

    #[test]
    fn vacuum_has_zero_shannon_renyi_entropy() {
        let r = SkewMatrix::<f64>::zeros(6);
        for alpha in [0.5, 2.0, 3.0] {
            assert_eq!(shannon_renyi(&engine(), &r, alpha).unwrap().value, 0.0);
        }
        assert_eq!(shannon_limit(&engine(), LimitTarget::ShannonRenyi(&r)).unwrap().value, 0.0);
    }

    #[test]
    fn xx_four_site_half_index() {
        let r = xx_r(Boundary::Periodic, 4).unwrap();
        let h = shannon_renyi(&engine(), &r, 0.5).unwrap();
        let pf1 = 2.0 + 2.0 * std::f64::consts::SQRT_2;
        let expect = 2.0 * (pf1.ln() - normalization(&r).unwrap().log_nr);
        assert!(rel(h.value, expect) < 1e-13);
    }

    #[test]
    fn identity_correlation_matrix() {
        // Det_β(I) = 2^L for every β, so M_α = L ln 2 for every α.
        for l in 1..5 {
            let g = Matrix::<f64>::identity(l);
            for alpha in [0.5, 2.0, 4.0] {
                let m = stabilizer_renyi(&engine(), &g, alpha).unwrap();
                assert!(rel(m.value, l as f64 * LN_2) < 1e-14);
            }
            let s = shannon_limit(&engine(), LimitTarget::Stabilizer(&g)).unwrap();
            assert!(rel(s.value, l as f64 * LN_2) < 1e-14);
        }
    }

    #[test]
    fn single_site_shannon_limit() {
        let g = Matrix::from_rows(&[vec![1.0]]).unwrap();
        let s = shannon_limit(&engine(), LimitTarget::Stabilizer(&g)).unwrap();
        assert!(rel(s.value, LN_2) < 1e-15);
    }

    #[test]
    fn tfi_two_site_values() {
        let g = tfi_g(Boundary::Periodic, 2).unwrap();
        let m2 = stabilizer_renyi(&engine(), &g, 2.0).unwrap();
        assert!(rel(m2.value, (16.0f64 / 3.0).ln()) < 1e-13);
        assert!((m2.value - 1.673_976_433).abs() < 1e-9);
        let m4 = stabilizer_renyi(&engine(), &g, 4.0).unwrap();
        let expect = -((0.25f64 * 9.0 / 256.0).ln()) / 3.0;
        assert!(rel(m4.value, expect) < 1e-13);
        assert!((m4.value - 1.578_08).abs() < 1e-5);
    }

    #[test]
    fn log_domain_consistency() {
        let g = tfi_g(Boundary::Open, 5).unwrap();
        for alpha in [0.5, 2.0, 3.0] {
            let m = stabilizer_renyi(&engine(), &g, alpha).unwrap();
            assert_eq!(m.value, (m.numerator_log - m.normalization_log) / (1.0 - alpha));
            assert!(m.value >= 0.0);
        }
    }

    #[test]
    fn renyi_entropies_are_monotone_in_alpha() {
        let g = tfi_g(Boundary::Periodic, 4).unwrap();
        let r = xx_r(Boundary::Open, 6).unwrap();
        let e = engine();
        let sre = |a: f64| {
            if a == 1.0 {
                shannon_limit(&e, LimitTarget::Stabilizer(&g)).unwrap().value
            } else {
                stabilizer_renyi(&e, &g, a).unwrap().value
            }
        };
        let sr = |a: f64| {
            if a == 1.0 {
                shannon_limit(&e, LimitTarget::ShannonRenyi(&r)).unwrap().value
            } else {
                shannon_renyi(&e, &r, a).unwrap().value
            }
        };
        let grid = [0.5, 0.99, 1.0, 1.01, 2.0, 3.0, 4.0, 6.0];
        for f in [&sre as &dyn Fn(f64) -> f64, &sr] {
            let vals: Vec<f64> = grid.iter().map(|&a| f(a)).collect();
            for w in vals.windows(2) {
                assert!(w[1] <= w[0] + 1e-10, "{vals:?}");
            }
        }
    }

    #[test]
    fn purity_violation_is_reported() {
        let g = Matrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(stabilizer_renyi(&engine(), &g, 2.0), Err(Error::Purity { .. })));
    }

    #[test]
    fn alpha_one_is_rejected_by_renyi_formulas() {
        let g = Matrix::<f64>::identity(2);
        assert!(matches!(stabilizer_renyi(&engine(), &g, 1.0), Err(Error::Domain(_))));
        assert!(matches!(stabilizer_renyi(&engine(), &g, -2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn occupation_distribution_normalizes() {
        let r = xx_r(Boundary::Periodic, 8).unwrap();
        let pf2 = spp(&r, 2.0).unwrap().total;
        let n2 = (2.0 * normalization(&r).unwrap().log_nr).exp();
        assert!(rel(pf2, n2) < 1e-12);
    }
}
