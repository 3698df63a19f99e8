//! Determinant and Pfaffian kernels.
//!
//! Determinants use LU factorization with partial pivoting. Pfaffians use the
//! skew-symmetric Parlett-Reid reduction: at each even step the largest entry
//! of the current column is swapped into the subdiagonal, that entry joins the
//! product, and a rank-2 skew update eliminates the remaining couplings. Each
//! row/column swap flips the sign.

use super::{Matrix, Scalar, SkewMatrix};
use crate::error::{Error, Result};

/// Result of an elimination: `value = phase * exp(log_abs)`, or exactly zero.
struct Factored<T> {
    phase: T,
    log_abs: f64,
    zero: bool,
}

fn lu_factor<T: Scalar>(m: &Matrix<T>) -> Factored<T> {
    let n = m.rows();
    let mut a = m.as_slice().to_vec();
    let mut phase = T::one();
    let mut log_abs = 0.0;
    for k in 0..n {
        let (piv, best) = (k..n)
            .map(|i| (i, a[i * n + k].modulus()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            return Factored { phase: T::zero(), log_abs: f64::NEG_INFINITY, zero: true };
        }
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            phase = -phase;
        }
        let p = a[k * n + k];
        phase *= p / T::from_real(best);
        log_abs += best.ln();
        let (upper, lower) = a.split_at_mut((k + 1) * n);
        let pivot_row = &upper[k * n + k + 1..k * n + n];
        for row in lower.chunks_exact_mut(n) {
            let f = row[k] / p;
            if f == T::zero() {
                continue;
            }
            for (x, &y) in row[k + 1..].iter_mut().zip(pivot_row) {
                *x -= f * y;
            }
        }
    }
    Factored { phase, log_abs, zero: false }
}

/// `det M`; the 0x0 determinant is 1.
pub fn determinant<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    m.require_square("determinant")?;
    let n = m.rows();
    match n {
        0 => Ok(T::one()),
        1 => Ok(m[(0, 0)]),
        2 => Ok(m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]),
        _ => {
            // Direct product of pivots keeps small determinants free of exp/ln rounding.
            let mut a = m.as_slice().to_vec();
            let mut det = T::one();
            for k in 0..n {
                let (piv, best) = (k..n)
                    .map(|i| (i, a[i * n + k].modulus()))
                    .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
                if best == 0.0 {
                    return Ok(T::zero());
                }
                if piv != k {
                    for j in 0..n {
                        a.swap(k * n + j, piv * n + j);
                    }
                    det = -det;
                }
                let p = a[k * n + k];
                det *= p;
                let (upper, lower) = a.split_at_mut((k + 1) * n);
                let pivot_row = &upper[k * n + k + 1..k * n + n];
                for row in lower.chunks_exact_mut(n) {
                    let f = row[k] / p;
                    if f == T::zero() {
                        continue;
                    }
                    for (x, &y) in row[k + 1..].iter_mut().zip(pivot_row) {
                        *x -= f * y;
                    }
                }
            }
            Ok(det)
        }
    }
}

/// `ln |det M|`, `-inf` for singular input. Safe for sizes where `det` overflows.
pub fn log_abs_determinant<T: Scalar>(m: &Matrix<T>) -> Result<f64> {
    m.require_square("log_abs_determinant")?;
    let f = lu_factor(m);
    Ok(if f.zero { f64::NEG_INFINITY } else { f.log_abs })
}

/// Symmetric swap of indices `p < q` in a skew matrix of which only the
/// strict upper triangle is kept current.
fn swap_upper<T: Scalar>(m: &mut [T], n: usize, p: usize, q: usize) {
    for i in 0..p {
        m.swap(i * n + p, i * n + q);
    }
    for i in p + 1..q {
        let a = m[p * n + i];
        m[p * n + i] = -m[i * n + q];
        m[i * n + q] = -a;
    }
    for j in q + 1..n {
        m.swap(p * n + j, q * n + j);
    }
    m[p * n + q] = -m[p * n + q];
}

/// Skew elimination on the strict upper triangle; the lower triangle goes stale.
fn pfaffian_factor<T: Scalar>(a: &SkewMatrix<T>) -> Result<Factored<T>> {
    let n = a.dim();
    if n % 2 == 1 {
        return Err(Error::Dimension(format!("Pfaffian of odd dimension {n}")));
    }
    let mut m = a.as_matrix().as_slice().to_vec();
    let mut phase = T::one();
    let mut log_abs = 0.0;
    let mut tau = vec![T::zero(); n];
    let mut col = vec![T::zero(); n];
    let mut k = 0;
    while k + 1 < n {
        // Largest |A[i][k]| below the diagonal, read from row k by skewness.
        let (kp, best) = (k + 1..n)
            .map(|i| (i, m[k * n + i].modulus()))
            .fold((k + 1, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            return Ok(Factored { phase: T::zero(), log_abs: f64::NEG_INFINITY, zero: true });
        }
        if kp != k + 1 {
            swap_upper(&mut m, n, k + 1, kp);
            phase = -phase;
        }
        let pivot = m[k * n + k + 1];
        phase *= pivot / T::from_real(best);
        log_abs += best.ln();
        if k + 2 < n {
            let lo = k + 2;
            for j in lo..n {
                tau[j] = m[k * n + j] / pivot;
                // A[j][k+1] = -A[k+1][j]
                col[j] = -m[(k + 1) * n + j];
            }
            let tau = &tau[lo..n];
            let col = &col[lo..n];
            for (off, row) in m[lo * n..].chunks_exact_mut(n).enumerate() {
                let (ti, ci) = (tau[off], col[off]);
                let start = off + 1;
                for ((x, &cj), &tj) in row[lo + start..].iter_mut().zip(&col[start..]).zip(&tau[start..]) {
                    *x += ti * cj - ci * tj;
                }
            }
        }
        k += 2;
    }
    Ok(Factored { phase, log_abs, zero: false })
}

/// `pf A`; the 0x0 Pfaffian is 1.
pub fn pfaffian<T: Scalar>(a: &SkewMatrix<T>) -> Result<T> {
    match a.dim() {
        0 => Ok(T::one()),
        2 => Ok(a[(0, 1)]),
        4 => Ok(a[(0, 1)] * a[(2, 3)] - a[(0, 2)] * a[(1, 3)] + a[(0, 3)] * a[(1, 2)]),
        _ => {
            let f = pfaffian_factor(a)?;
            Ok(if f.zero { T::zero() } else { f.phase * T::from_real(f.log_abs.exp()) })
        }
    }
}

/// `ln |pf A|`, `-inf` when the Pfaffian vanishes.
pub fn log_abs_pfaffian<T: Scalar>(a: &SkewMatrix<T>) -> Result<f64> {
    let f = pfaffian_factor(a)?;
    Ok(if f.zero { f64::NEG_INFINITY } else { f.log_abs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    fn random_skew(n: usize, rng: &mut impl Rng) -> SkewMatrix<f64> {
        SkewMatrix::from_upper(n, |_, _| rng.gen_range(-1.0..1.0))
    }

    /// Pfaffian by expansion along the first row; test-only oracle.
    fn pf_expand(a: &Matrix<f64>) -> f64 {
        let n = a.rows();
        if n == 0 {
            return 1.0;
        }
        let mut total = 0.0;
        for j in 1..n {
            let keep: Vec<usize> = (1..n).filter(|&i| i != j).collect();
            let sub = Matrix::from_fn(n - 2, n - 2, |x, y| a[(keep[x], keep[y])]);
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * a[(0, j)] * pf_expand(&sub);
        }
        total
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(determinant(&Matrix::<f64>::zeros(0, 0)).unwrap(), 1.0);
        let d = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap();
        assert_eq!(determinant(&d).unwrap(), 6.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let g = Matrix::from_rows(&[vec![s, s], vec![-s, s]]).unwrap();
        assert!((determinant(&g).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(determinant(&Matrix::<f64>::zeros(2, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn determinant_matches_log_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 3..8 {
            let m = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let d = determinant(&m).unwrap();
            assert!(rel(d.abs().ln(), log_abs_determinant(&m).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn pfaffian_small_cases() {
        let a = SkewMatrix::from_upper(2, |_, _| 3.0);
        assert_eq!(pfaffian(&a).unwrap(), 3.0);
        assert_eq!(pfaffian(&SkewMatrix::<f64>::zeros(0)).unwrap(), 1.0);
        assert!(matches!(pfaffian(&SkewMatrix::<f64>::zeros(3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn pfaffian_matches_expansion_and_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 4, 6, 8] {
            let a = random_skew(n, &mut rng);
            let expect = pf_expand(a.as_matrix());
            let got = pfaffian(&a).unwrap();
            assert!(rel(got, expect) < 1e-12, "n={n}: {got} vs {expect}");
            if n > 4 {
                let f = pfaffian_factor(&a).unwrap();
                assert!(rel(f.log_abs, expect.abs().ln()) < 1e-12);
            }
        }
    }

    #[test]
    fn random_six_by_six_pfaffian_squares_to_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_skew(6, &mut rng);
        let pf = pfaffian(&a).unwrap();
        let det = determinant(a.as_matrix()).unwrap();
        assert!(rel(pf * pf, det) < 1e-10);
    }

    #[test]
    fn complex_pfaffian_squares_to_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = SkewMatrix::from_upper(6, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let pf = pfaffian(&a).unwrap();
        let det = determinant(a.as_matrix()).unwrap();
        assert!((pf * pf - det).norm() / det.norm() < 1e-10);
    }

    #[test]
    fn singular_pfaffian_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = SkewMatrix::from_upper(6, |i, j| if i == 2 || j == 2 { 0.0 } else { rng.gen_range(-1.0..1.0) });
        assert_eq!(pfaffian(&a).unwrap(), 0.0);
        assert_eq!(log_abs_pfaffian(&a).unwrap(), f64::NEG_INFINITY);
    }

    proptest! {
        #[test]
        fn pfaffian_squared_is_determinant(seed in any::<u64>(), half in 0usize..=4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_skew(2 * half, &mut rng);
            let pf = pfaffian(&a).unwrap();
            let det = determinant(a.as_matrix()).unwrap();
            prop_assert!(rel(pf * pf, det) < 1e-10 || (pf * pf - det).abs() < 1e-14);
        }

        #[test]
        fn determinant_is_multiplicative(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = Matrix::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
            let b = Matrix::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
            let lhs = determinant(&a.matmul(&b).unwrap()).unwrap();
            let rhs = determinant(&a).unwrap() * determinant(&b).unwrap();
            prop_assert!(rel(lhs, rhs) < 1e-10 || (lhs - rhs).abs() < 1e-14);
        }
    }
}
