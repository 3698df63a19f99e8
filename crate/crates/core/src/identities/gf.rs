//! Product identities for the minor generating functions of the symbol families.

use super::{ReportBuilder, VerificationReport};
use crate::error::{Error, Result};
use crate::minors::MinorEngine;
use crate::models::{symbol_g, Boundary, Family, ModelSpec};

pub const GF_TOLERANCE: f64 = 1e-9;

pub fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_pow(a: &[f64], k: u32) -> Vec<f64> {
    (0..k).fold(vec![1.0], |acc, _| poly_mul(&acc, a))
}

fn check_even(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.fract() == 0.0 && alpha % 2.0 == 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("the product identity covers even integer alpha only, got {alpha}")))
    }
}

/// `F_G(t) = F_{G(z+1, M)}(t)^k` with `(k, M) = (n, L/n)` for `zⁿ + 1` and
/// `(2m, L/(2m))` for the chiral family.
pub fn verify_gf_products(engine: &MinorEngine, family: Family, l: usize, alpha: f64) -> Result<VerificationReport> {
    check_even(alpha)?;
    let spec = ModelSpec::new(family, Boundary::Periodic, l)?;
    let (k, name) = match family {
        Family::ZnPlusOne { n } => (n, format!("gf/zn+1/n={n}")),
        Family::Chiral { m } => (2 * m, format!("gf/chiral/m={m}")),
        _ => return Err(Error::InvalidModel(format!("{family} has no product identity"))),
    };
    let m = l / k;
    let lhs = engine.minor_gf(&symbol_g(&spec)?, alpha)?;
    let base = engine.minor_gf(&symbol_g(&ModelSpec::new(Family::ZnPlusOne { n: 1 }, Boundary::Periodic, m)?)?, alpha)?;
    let rhs = poly_pow(base.coefficients(), k as u32);
    let mut report = ReportBuilder::new(name, GF_TOLERANCE);
    if lhs.coefficients().len() != rhs.len() {
        return Err(Error::Dimension(format!("degree mismatch {} vs {}", lhs.coefficients().len(), rhs.len())));
    }
    for (r, (a, b)) in lhs.coefficients().iter().zip(&rhs).enumerate() {
        report.values(l, format!("alpha={alpha} t^{r}"), *a, *b);
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_power() {
        assert_eq!(poly_pow(&[1.0, 1.0], 3), vec![1.0, 3.0, 3.0, 1.0]);
        assert_eq!(poly_pow(&[2.0, 5.0], 0), vec![1.0]);
        assert_eq!(poly_mul(&[1.0, 2.0], &[3.0]), vec![3.0, 6.0]);
    }

    #[test]
    fn products_hold() {
        let e = MinorEngine::default();
        for (family, l, alpha) in [
            (Family::ZnPlusOne { n: 1 }, 4, 2.0),
            (Family::ZnPlusOne { n: 2 }, 8, 2.0),
            (Family::ZnPlusOne { n: 2 }, 8, 4.0),
            (Family::Chiral { m: 1 }, 8, 2.0),
            (Family::ZnPlusOne { n: 3 }, 12, 2.0),
        ] {
            let rep = verify_gf_products(&e, family, l, alpha).unwrap();
            assert!(rep.pass, "{family} L={l}: {}", rep.max_rel_error);
        }
    }

    #[test]
    fn odd_or_fractional_alpha_rejected() {
        let e = MinorEngine::default();
        for alpha in [1.0, 3.0, 0.5, 2.5] {
            assert!(matches!(verify_gf_products(&e, Family::ZnPlusOne { n: 2 }, 8, alpha), Err(Error::Domain(_))));
        }
    }
}
