//! Sums of powers of minors and of principal Pfaffians.
//!
//! `Det_β(M) = Σ_{|I|=|J|} |det M[I,J]|^β` and `Pf_β(A) = Σ_{|S| even} |pf A[S,S]|^β`,
//! resolved by rank `r = |I|` (resp. `|S|/2`). Subsets of each size are
//! enumerated in colexicographic order as bitmasks. Work is split into fixed
//! units (one row set `I`, or a fixed-length run of `S`), each reduced with
//! compensated summation; unit partials are then combined in enumeration
//! order, so results do not depend on the number of worker threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{determinant, log_abs_determinant, pfaffian, Matrix, Scalar, SkewMatrix};

/// Magnitudes below this are treated as exact zeros before taking powers.
pub const FLUSH_THRESHOLD: f64 = 1e-14;
pub const DEFAULT_SPM_MAX_DIM: usize = 16;
pub const DEFAULT_SPP_MAX_DIM: usize = 28;
/// Environment variable replacing the dimension caps with a term-count cap.
pub const MAX_TERMS_ENV: &str = "MAGIC_MINORS_MAX_TERMS";

const SPP_CHUNK: usize = 256;

/// Neumaier-compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    c: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Rank-resolved power sums `S^(r)` and their total.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerSums {
    pub beta: f64,
    pub by_rank: Vec<f64>,
    pub total: f64,
    pub term_count: u128,
}

impl PowerSums {
    fn new(beta: f64, by_rank: Vec<f64>, term_count: u128) -> Self {
        let total = by_rank.iter().copied().collect::<CompensatedSum>().value();
        Self { beta, by_rank, total, term_count }
    }

    /// Coefficients of the generating polynomial `Σ_r S^(r) t^r`.
    pub fn coefficients(&self) -> &[f64] {
        &self.by_rank
    }

    pub fn log_total(&self) -> f64 {
        self.total.ln()
    }
}

/// Enumeration limits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub spm_max_dim: usize,
    pub spp_max_dim: usize,
    /// When set, replaces both dimension caps with a cap on the number of terms.
    pub max_terms: Option<u128>,
}

impl Default for Budget {
    fn default() -> Self {
        Self { spm_max_dim: DEFAULT_SPM_MAX_DIM, spp_max_dim: DEFAULT_SPP_MAX_DIM, max_terms: None }
    }
}

impl Budget {
    /// Default caps, overridden by [`MAX_TERMS_ENV`] when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_TERMS_ENV) {
            Ok(v) => {
                let n = v
                    .trim()
                    .parse::<u128>()
                    .map_err(|_| Error::Parse(format!("{MAX_TERMS_ENV}={v:?} is not a term count")))?;
                Ok(Self::with_max_terms(n))
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn with_max_terms(max_terms: u128) -> Self {
        Self { max_terms: Some(max_terms), ..Self::default() }
    }

    fn check(&self, what: &str, dim: usize, dim_cap: usize, terms: u128) -> Result<()> {
        // Subsets are bitmasks in a u64.
        if dim > 63 {
            return Err(Error::Capacity { what: what.into(), terms, cap: "dimension 63".into() });
        }
        match self.max_terms {
            Some(cap) if terms > cap => {
                Err(Error::Capacity { what: what.into(), terms, cap: format!("{cap} terms ({MAX_TERMS_ENV})") })
            }
            Some(_) => Ok(()),
            None if dim > dim_cap => {
                Err(Error::Capacity { what: what.into(), terms, cap: format!("dimension {dim_cap}") })
            }
            None => Ok(()),
        }
    }

    pub fn check_spm(&self, dim: usize) -> Result<()> {
        self.check(&format!("minor sum of a {dim}x{dim} matrix"), dim, self.spm_max_dim, spm_term_count(dim))
    }

    pub fn check_spp(&self, dim: usize) -> Result<()> {
        self.check(&format!("Pfaffian sum of a {dim}x{dim} matrix"), dim, self.spp_max_dim, spp_term_count(dim))
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of minors of an `n x n` matrix, `Σ_r C(n,r)² = C(2n, n)`.
pub fn spm_term_count(n: usize) -> u128 {
    binomial(2 * n, n)
}

/// Number of even-size subsets of `n` indices.
pub fn spp_term_count(n: usize) -> u128 {
    if n == 0 {
        1
    } else {
        1u128 << (n - 1)
    }
}

/// `r`-subsets of `0..n` as bitmasks in colexicographic order.
pub fn colex_subsets(n: usize, r: usize) -> impl Iterator<Item = u64> {
    let limit: u64 = 1u64 << n;
    let first = if r > n { None } else { Some((1u64 << r) - 1) };
    std::iter::successors(first, move |&x| {
        if x == 0 {
            return None;
        }
        // Gosper's hack: next integer with the same popcount.
        let c = x & x.wrapping_neg();
        let r = x + c;
        let next = (((r ^ x) >> 2) / c) | r;
        (next < limit).then_some(next)
    })
}

fn mask_indices(mask: u64, out: &mut Vec<usize>) {
    out.clear();
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
}

fn flushed(x: f64) -> f64 {
    if x < FLUSH_THRESHOLD {
        0.0
    } else {
        x
    }
}

/// Rank-resolved `Σ term(|det M[I,J]|)`, with sub-threshold magnitudes flushed to 0.
fn minor_sums<T: Scalar>(m: &Matrix<T>, term: &(dyn Fn(f64) -> f64 + Sync)) -> Vec<f64> {
    let n = m.rows();
    (0..=n)
        .map(|r| {
            let row_sets: Vec<u64> = colex_subsets(n, r).collect();
            let partials: Vec<f64> = row_sets
                .par_iter()
                .map(|&rows| {
                    let mut ri = Vec::with_capacity(r);
                    let mut ci = Vec::with_capacity(r);
                    mask_indices(rows, &mut ri);
                    let mut acc = CompensatedSum::default();
                    for cols in colex_subsets(n, r) {
                        mask_indices(cols, &mut ci);
                        let sub = Matrix::from_fn(r, r, |a, b| m[(ri[a], ci[b])]);
                        let d = determinant(&sub).expect("square by construction").modulus();
                        acc.add(term(flushed(d)));
                    }
                    acc.value()
                })
                .collect();
            partials.into_iter().collect::<CompensatedSum>().value()
        })
        .collect()
}

/// Rank-resolved `Σ term(|pf A[S,S]|)` over even `|S| = 2r`.
fn pfaffian_sums<T: Scalar>(a: &SkewMatrix<T>, term: &(dyn Fn(f64) -> f64 + Sync)) -> Vec<f64> {
    let n = a.dim();
    (0..=n / 2)
        .map(|r| {
            let sets: Vec<u64> = colex_subsets(n, 2 * r).collect();
            let partials: Vec<f64> = sets
                .par_chunks(SPP_CHUNK)
                .map(|chunk| {
                    let mut idx = Vec::with_capacity(2 * r);
                    let mut acc = CompensatedSum::default();
                    for &s in chunk {
                        mask_indices(s, &mut idx);
                        let sub = SkewMatrix::from_upper(2 * r, |x, y| a[(idx[x], idx[y])]);
                        let p = pfaffian(&sub).expect("even by construction").modulus();
                        acc.add(term(flushed(p)));
                    }
                    acc.value()
                })
                .collect();
            partials.into_iter().collect::<CompensatedSum>().value()
        })
        .collect()
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("power beta must be positive and finite, got {beta}")))
    }
}

/// Exhaustive minor and Pfaffian enumeration under a [`Budget`].
#[derive(Clone, Debug, Default)]
pub struct MinorEngine {
    pub budget: Budget,
}

impl MinorEngine {
    pub fn new(budget: Budget) -> Self {
        Self { budget }
    }

    /// Sum of `β`-th powers of all minors, `Det_β(M)`.
    pub fn spm<T: Scalar>(&self, m: &Matrix<T>, beta: f64) -> Result<PowerSums> {
        check_beta(beta)?;
        require_square(m)?;
        self.budget.check_spm(m.rows())?;
        let by_rank = minor_sums(m, &|d: f64| d.powf(beta));
        Ok(PowerSums::new(beta, by_rank, spm_term_count(m.rows())))
    }

    /// Sum of `β`-th powers of all even principal Pfaffians, `Pf_β(A)`.
    pub fn spp<T: Scalar>(&self, a: &SkewMatrix<T>, beta: f64) -> Result<PowerSums> {
        check_beta(beta)?;
        self.budget.check_spp(a.dim())?;
        let by_rank = pfaffian_sums(a, &|p: f64| p.powf(beta));
        Ok(PowerSums::new(beta, by_rank, spp_term_count(a.dim())))
    }

    /// Generating polynomial `F^(α)_M(t) = Σ_r S^(r)_α t^r`; same numbers as [`Self::spm`].
    pub fn minor_gf<T: Scalar>(&self, m: &Matrix<T>, alpha: f64) -> Result<PowerSums> {
        self.spm(m, alpha)
    }

    /// Every `|det M[I,J]|` (flushed), ranks ascending, colex order within a rank.
    pub fn minor_magnitudes<T: Scalar>(&self, m: &Matrix<T>) -> Result<Vec<f64>> {
        require_square(m)?;
        self.budget.check_spm(m.rows())?;
        let n = m.rows();
        let mut out = Vec::new();
        let (mut ri, mut ci) = (Vec::new(), Vec::new());
        for r in 0..=n {
            for rows in colex_subsets(n, r) {
                mask_indices(rows, &mut ri);
                for cols in colex_subsets(n, r) {
                    mask_indices(cols, &mut ci);
                    let sub = Matrix::from_fn(r, r, |a, b| m[(ri[a], ci[b])]);
                    out.push(flushed(determinant(&sub)?.modulus()));
                }
            }
        }
        Ok(out)
    }

    /// `(Σ q, −Σ q ln q)` for `q = |det M[I,J]|² / exp(log_norm)`.
    pub fn minor_distribution_entropy<T: Scalar>(&self, m: &Matrix<T>, log_norm: f64) -> Result<(f64, f64)> {
        require_square(m)?;
        self.budget.check_spm(m.rows())?;
        let q = move |d: f64| (2.0 * d.ln() - log_norm).exp();
        let total = sum_ranks(minor_sums(m, &|d: f64| if d == 0.0 { 0.0 } else { q(d) }));
        let entropy = sum_ranks(minor_sums(m, &|d: f64| {
            if d == 0.0 {
                0.0
            } else {
                let lq = 2.0 * d.ln() - log_norm;
                -lq.exp() * lq
            }
        }));
        Ok((total, entropy))
    }

    /// `(Σ p, −Σ p ln p)` for `p = |pf A[S,S]|² / exp(log_norm)`.
    pub fn pfaffian_distribution_entropy<T: Scalar>(&self, a: &SkewMatrix<T>, log_norm: f64) -> Result<(f64, f64)> {
        self.budget.check_spp(a.dim())?;
        let total = sum_ranks(pfaffian_sums(a, &|p: f64| if p == 0.0 { 0.0 } else { (2.0 * p.ln() - log_norm).exp() }));
        let entropy = sum_ranks(pfaffian_sums(a, &|p: f64| {
            if p == 0.0 {
                0.0
            } else {
                let lp = 2.0 * p.ln() - log_norm;
                -lp.exp() * lp
            }
        }));
        Ok((total, entropy))
    }
}

fn sum_ranks(v: Vec<f64>) -> f64 {
    v.into_iter().collect::<CompensatedSum>().value()
}

fn require_square<T: Scalar>(m: &Matrix<T>) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::Dimension(format!("minor sums need a square matrix, got {}x{}", m.rows(), m.cols())))
    }
}

/// `Det_β(M)` with the default budget.
pub fn spm<T: Scalar>(m: &Matrix<T>, beta: f64) -> Result<PowerSums> {
    MinorEngine::default().spm(m, beta)
}

/// `Pf_β(A)` with the default budget.
pub fn spp<T: Scalar>(a: &SkewMatrix<T>, beta: f64) -> Result<PowerSums> {
    MinorEngine::default().spp(a, beta)
}

/// `F^(α)_M` coefficients with the default budget.
pub fn minor_gf<T: Scalar>(m: &Matrix<T>, alpha: f64) -> Result<PowerSums> {
    MinorEngine::default().minor_gf(m, alpha)
}

fn gram_plus_identity<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    require_square(m)?;
    let mut k = m.matmul(&m.adjoint())?;
    for i in 0..k.rows() {
        k[(i, i)] += T::one();
    }
    Ok(k)
}

/// `Det_2(M) = det(I + M M†)` by Cauchy-Binet, in polynomial time.
pub fn spm_fast2<T: Scalar>(m: &Matrix<T>) -> Result<f64> {
    Ok(determinant(&gram_plus_identity(m)?)?.re())
}

/// `ln Det_2(M)`, usable where `Det_2` itself would overflow.
pub fn log_spm_fast2<T: Scalar>(m: &Matrix<T>) -> Result<f64> {
    log_abs_determinant(&gram_plus_identity(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{conjugate, submatrix, IndexSet, Permutation};
    use crate::models::{tfi_g, xx_r, Boundary};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    fn random_matrix(n: usize, rng: &mut impl Rng) -> Matrix<f64> {
        Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0))
    }

    /// Independent minor sum: recursive subset choice, cofactor determinant.
    fn brute_minor_sum(m: &Matrix<f64>, beta: f64) -> f64 {
        fn cofactor_det(m: &Matrix<f64>) -> f64 {
            let n = m.rows();
            if n == 0 {
                return 1.0;
            }
            (0..n)
                .map(|j| {
                    let keep: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                    let minor = Matrix::from_fn(n - 1, n - 1, |a, b| m[(a + 1, keep[b])]);
                    let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                    s * m[(0, j)] * cofactor_det(&minor)
                })
                .sum()
        }
        let n = m.rows();
        let mut total = 0.0;
        for rows in 0u64..(1 << n) {
            for cols in 0u64..(1 << n) {
                if rows.count_ones() != cols.count_ones() {
                    continue;
                }
                let sub = submatrix(m, &IndexSet::from_mask(rows), &IndexSet::from_mask(cols)).unwrap();
                let d = cofactor_det(&sub).abs();
                if d >= FLUSH_THRESHOLD {
                    total += d.powf(beta);
                }
            }
        }
        total
    }

    #[test]
    fn colex_order_and_counts() {
        let v: Vec<u64> = colex_subsets(4, 2).collect();
        assert_eq!(v, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(colex_subsets(5, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(colex_subsets(3, 3).collect::<Vec<_>>(), vec![0b111]);
        assert_eq!(colex_subsets(2, 3).count(), 0);
        for n in 0..10 {
            let total: usize = (0..=n).map(|r| colex_subsets(n, r).count()).sum();
            assert_eq!(total, 1 << n);
        }
    }

    #[test]
    fn one_by_one() {
        let m = Matrix::from_rows(&[vec![-0.3]]).unwrap();
        let p = spm(&m, 2.5).unwrap();
        assert_eq!(p.by_rank[0], 1.0);
        assert!(rel(p.by_rank[1], 0.3f64.powf(2.5)) < 1e-15);
        assert_eq!(p.term_count, 2);
    }

    #[test]
    fn empty_matrix_gf_is_one() {
        let p = minor_gf(&Matrix::<f64>::zeros(0, 0), 2.0).unwrap();
        assert_eq!(p.coefficients(), &[1.0]);
        assert_eq!(p.term_count, 1);
    }

    #[test]
    fn tfi_two_site_values() {
        let g = tfi_g(Boundary::Periodic, 2).unwrap();
        assert!(rel(spm(&g, 4.0).unwrap().total, 3.0) < 1e-14);
        assert!(rel(spm(&g, 1.0).unwrap().total, 2.0 + 2.0 * SQRT2) < 1e-14);
        let gf = minor_gf(&g, 4.0).unwrap();
        for (c, e) in gf.coefficients().iter().zip([1.0, 1.0, 1.0]) {
            assert!(rel(*c, e) < 1e-14);
        }
    }

    #[test]
    fn purity_for_tfi() {
        for l in [2usize, 4, 6] {
            let g = tfi_g(Boundary::Periodic, l).unwrap();
            let p = spm(&g, 2.0).unwrap();
            assert!(rel(p.total, 2f64.powi(l as i32)) < 1e-12, "L={l}");
        }
        let g8 = tfi_g(Boundary::Periodic, 8).unwrap();
        assert!(rel(spm_fast2(&g8).unwrap(), 256.0) < 1e-12);
        assert!(rel(spm(&g8, 2.0).unwrap().total, 256.0) < 1e-12);
    }

    #[test]
    fn spp_small_cases() {
        let a = SkewMatrix::from_upper(2, |_, _| 0.7);
        let p = spp(&a, 2.0).unwrap();
        assert_eq!(p.by_rank, vec![1.0, 0.7 * 0.7]);
        assert_eq!(p.term_count, 2);

        let r = xx_r(Boundary::Periodic, 4).unwrap();
        assert!(rel(spp(&r, 1.0).unwrap().total, 2.0 + 2.0 * SQRT2) < 1e-13);
    }

    #[test]
    fn zero_row_contributes_nothing() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = SkewMatrix::from_upper(6, |i, j| if i == 0 || j == 0 { 0.0 } else { rng.gen_range(-1.0..1.0) });
        let reduced = SkewMatrix::from_upper(5, |i, j| a[(i + 1, j + 1)]);
        assert!(rel(spp(&a, 1.5).unwrap().total, spp(&reduced, 1.5).unwrap().total) < 1e-13);
    }

    #[test]
    fn identity_fast_path() {
        for l in 1..6 {
            assert!(rel(spm_fast2(&Matrix::<f64>::identity(l)).unwrap(), 2f64.powi(l as i32)) < 1e-15);
        }
    }

    #[test]
    fn matches_independent_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=4 {
            let m = random_matrix(n, &mut rng);
            for beta in [0.5, 1.0, 3.0] {
                assert!(rel(spm(&m, beta).unwrap().total, brute_minor_sum(&m, beta)) < 1e-11);
            }
        }
    }

    #[test]
    fn fast_path_oracle_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for i in 0..50 {
            let n = 1 + i % 8;
            let m = random_matrix(n, &mut rng);
            assert!(rel(spm_fast2(&m).unwrap(), spm(&m, 2.0).unwrap().total) < 1e-10);
        }
        let c = Matrix::from_fn(4, 4, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        assert!(rel(spm_fast2(&c).unwrap(), spm(&c, 2.0).unwrap().total) < 1e-10);
    }

    #[test]
    fn term_counts_are_exact() {
        assert_eq!(spm_term_count(0), 1);
        assert_eq!(spm_term_count(3), 20);
        assert_eq!(spm_term_count(16), 601_080_390);
        assert_eq!(spp_term_count(0), 1);
        assert_eq!(spp_term_count(12), 2048);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_matrix(5, &mut rng);
        assert_eq!(spm(&m, 1.0).unwrap().term_count, (0..=5).map(|r| binomial(5, r).pow(2)).sum::<u128>());
    }

    #[test]
    fn budget_and_domain_errors() {
        let big = Matrix::<f64>::identity(17);
        assert!(matches!(spm(&big, 2.0), Err(Error::Capacity { .. })));
        assert!(matches!(spp(&SkewMatrix::<f64>::zeros(30), 2.0), Err(Error::Capacity { .. })));
        let small = Matrix::<f64>::identity(6);
        let tight = MinorEngine::new(Budget::with_max_terms(100));
        assert!(matches!(tight.spm(&small, 2.0), Err(Error::Capacity { .. })));
        assert!(matches!(spm(&small, 0.0), Err(Error::Domain(_))));
        assert!(matches!(spm(&small, -1.0), Err(Error::Domain(_))));
        assert!(matches!(spm(&Matrix::<f64>::zeros(2, 3), 1.0), Err(Error::Dimension(_))));
    }

    #[test]
    fn results_do_not_depend_on_worker_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let m = random_matrix(7, &mut rng);
        let a = SkewMatrix::from_upper(12, |_, _| rng.gen_range(-1.0..1.0));
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| (spm(&m, 0.7).unwrap(), spp(&a, 1.3).unwrap()))
        };
        let (m1, a1) = run(1);
        for threads in [2, 8] {
            let (mt, at) = run(threads);
            assert_eq!(m1.total.to_bits(), mt.total.to_bits());
            assert_eq!(a1.total.to_bits(), at.total.to_bits());
            assert_eq!(m1.by_rank, mt.by_rank);
        }
    }

    #[test]
    fn gauge_invariance_exhaustive_at_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let m = random_matrix(3, &mut rng).to_complex();
        let base = spm(&m, 1.5).unwrap();
        for perm in [vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]] {
            let phases: Vec<Complex64> = (0..3).map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))).collect();
            let c = conjugate(&m, &Permutation::new(perm).unwrap(), &phases).unwrap();
            let other = spm(&c, 1.5).unwrap();
            for (x, y) in base.by_rank.iter().zip(&other.by_rank) {
                assert!(rel(*x, *y) < 1e-12);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn total_is_sum_of_ranks(seed in any::<u64>(), n in 1usize..=6, beta in 0.25f64..5.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(n, &mut rng);
            let p = spm(&m, beta).unwrap();
            prop_assert_eq!(p.by_rank[0], 1.0);
            let naive: f64 = p.by_rank.iter().sum();
            prop_assert!(rel(p.total, naive) < 1e-12);
        }

        #[test]
        fn minor_multiset_survives_conjugation(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(3, &mut rng);
            let mut image = vec![0usize, 1, 2];
            for i in (1..3).rev() {
                image.swap(i, rng.gen_range(0..=i));
            }
            let signs: Vec<f64> = (0..3).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
            let c = conjugate(&m, &Permutation::new(image).unwrap(), &signs).unwrap();
            let collect = |x: &Matrix<f64>| {
                let mut v = Vec::new();
                for rows in 0u64..8 {
                    for cols in 0u64..8 {
                        if rows.count_ones() == cols.count_ones() {
                            let s = submatrix(x, &IndexSet::from_mask(rows), &IndexSet::from_mask(cols)).unwrap();
                            v.push(determinant(&s).unwrap().abs());
                        }
                    }
                }
                v.sort_by(f64::total_cmp);
                v
            };
            for (a, b) in collect(&m).iter().zip(collect(&c).iter()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
