//! Block-diagonalization of the symbol-family correlation matrices by
//! residue-class permutations.

use super::gauge::{gauge_equivalent, GaugeMode, MAX_EXHAUSTIVE_DIM};
use super::{ReportBuilder, VerificationReport};
use crate::error::{Error, Result};
use crate::matrix::{conjugate, permute, Matrix, Permutation};
use crate::minors::MinorEngine;
use crate::models::{alternating_signs, symbol_g, Boundary, Family, ModelSpec};

pub const OFF_BLOCK_TOLERANCE: f64 = 1e-12;
pub const BLOCK_TOLERANCE: f64 = 1e-10;
/// Largest `M` for the minor-multiset gauge check.
pub const MAX_INVARIANT_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct BlockDecomposition {
    pub permutation: Permutation,
    pub blocks: Vec<Matrix<f64>>,
    /// Largest entry of the permuted matrix outside the diagonal blocks.
    pub off_block_residual: f64,
    /// Largest deviation of any block from the expected reduced matrix.
    pub block_target_residual: f64,
    /// Top-right `M × M` corner of a chiral block.
    pub chiral_x: Option<Matrix<f64>>,
    /// Deviation of the chiral blocks from `[[0, X], [Xᵀ, 0]]`.
    pub chiral_structure_residual: Option<f64>,
}

impl BlockDecomposition {
    /// Block-diagonal matrix mapped back to the original site order.
    pub fn reassemble(&self) -> Matrix<f64> {
        let n = self.permutation.len();
        let mut diag = Matrix::zeros(n, n);
        let mut offset = 0;
        for b in &self.blocks {
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    diag[(offset + i, offset + j)] = b[(i, j)];
                }
            }
            offset += b.rows();
        }
        permute(&diag, &self.permutation.inverse()).expect("sizes agree")
    }
}

/// Residue classes mod `q`, each in increasing order: `0, q, 2q, …, 1, 1 + q, …`.
pub fn coset_permutation(l: usize, q: usize) -> Result<Permutation> {
    if q == 0 || l % q != 0 {
        return Err(Error::InvalidModel(format!("{q} does not divide {l}")));
    }
    Permutation::new((0..q).flat_map(|r| (0..l / q).map(move |j| r + j * q)).collect())
}

/// For each residue `r < m`: the class of `r` mod `2m`, then the class of `r + m`.
pub fn chiral_permutation(l: usize, m: usize) -> Result<Permutation> {
    if m == 0 || l % (2 * m) != 0 {
        return Err(Error::InvalidModel(format!("2*{m} does not divide {l}")));
    }
    let step = 2 * m;
    let len = l / step;
    Permutation::new(
        (0..m)
            .flat_map(|r| (0..len).map(move |j| r + j * step).chain((0..len).map(move |j| r + m + j * step)))
            .collect(),
    )
}

fn split_blocks(g: &Matrix<f64>, p: &Permutation, size: usize) -> Result<(Vec<Matrix<f64>>, f64)> {
    let pg = permute(g, p)?;
    let n = pg.rows();
    let mut off = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i / size != j / size {
                off = off.max(pg[(i, j)].abs());
            }
        }
    }
    let blocks = (0..n / size).map(|b| Matrix::from_fn(size, size, |i, j| pg[(b * size + i, b * size + j)])).collect();
    Ok((blocks, off))
}

fn z_plus_one(m: usize) -> Result<Matrix<f64>> {
    symbol_g(&ModelSpec::new(Family::ZnPlusOne { n: 1 }, Boundary::Periodic, m)?)
}

fn max_diff(blocks: &[Matrix<f64>], target: &Matrix<f64>) -> Result<f64> {
    blocks.iter().try_fold(0.0f64, |acc, b| Ok(acc.max(b.max_abs_diff(target)?)))
}

/// `Π_n` reduces `G^(zⁿ+1)(L)` to `n` copies of the `z + 1` matrix of size
/// `M = L/n`, conjugated by `diag(1, −1, …)` when `n` is even.
pub fn block_reduce_zn(l: usize, n: usize) -> Result<BlockDecomposition> {
    let g = symbol_g(&ModelSpec::new(Family::ZnPlusOne { n }, Boundary::Periodic, l)?)?;
    let m = l / n;
    let permutation = coset_permutation(l, n)?;
    let (blocks, off_block_residual) = split_blocks(&g, &permutation, m)?;
    let mut target = z_plus_one(m)?;
    if n % 2 == 0 {
        target = conjugate(&target, &Permutation::identity(m), &alternating_signs(m))?;
    }
    let block_target_residual = max_diff(&blocks, &target)?;
    Ok(BlockDecomposition {
        permutation,
        blocks,
        off_block_residual,
        block_target_residual,
        chiral_x: None,
        chiral_structure_residual: None,
    })
}

/// `Π_{2m}` reduces `G^(z^m+z^-m)(L)` to `m` identical blocks `[[0, X], [Xᵀ, 0]]`
/// of size `2M`, `M = L/(2m)`.
pub fn block_reduce_chiral(l: usize, m: usize) -> Result<BlockDecomposition> {
    let g = symbol_g(&ModelSpec::new(Family::Chiral { m }, Boundary::Periodic, l)?)?;
    let half = l / (2 * m);
    let permutation = chiral_permutation(l, m)?;
    let (blocks, off_block_residual) = split_blocks(&g, &permutation, 2 * half)?;
    let first = blocks[0].clone();
    let x = Matrix::from_fn(half, half, |i, j| first[(i, half + j)]);
    let mut structure = 0.0f64;
    for i in 0..half {
        for j in 0..half {
            structure = structure
                .max(first[(i, j)].abs())
                .max(first[(half + i, half + j)].abs())
                .max((first[(half + i, j)] - x[(j, i)]).abs());
        }
    }
    let block_target_residual = max_diff(&blocks, &first)?;
    Ok(BlockDecomposition {
        permutation,
        blocks,
        off_block_residual,
        block_target_residual,
        chiral_x: Some(x),
        chiral_structure_residual: Some(structure),
    })
}

/// Residual checks for one symbol family, plus the gauge comparison of the
/// chiral `X_M` with the `z + 1` matrix of size `M`.
pub fn verify_blocks(engine: &MinorEngine, family: Family, l: usize) -> Result<Vec<VerificationReport>> {
    let (d, name) = match family {
        Family::ZnPlusOne { n } => (block_reduce_zn(l, n)?, format!("blocks/zn+1/n={n}")),
        Family::Chiral { m } => (block_reduce_chiral(l, m)?, format!("blocks/chiral/m={m}")),
        _ => return Err(Error::InvalidModel(format!("{family} has no block reduction"))),
    };
    let mut off = ReportBuilder::new(format!("{name}/off-block"), OFF_BLOCK_TOLERANCE);
    off.residual(l, "off-block residual", d.off_block_residual);
    let mut blocks = ReportBuilder::new(format!("{name}/blocks"), BLOCK_TOLERANCE);
    blocks.residual(l, "block target residual", d.block_target_residual);
    if let Some(s) = d.chiral_structure_residual {
        blocks.residual(l, "chiral block structure", s);
    }
    let mut out = vec![off.finish(), blocks.finish()];
    if let Some(x) = &d.chiral_x {
        let half = x.rows();
        let reduced = z_plus_one(half)?;
        let mode = if half <= MAX_EXHAUSTIVE_DIM {
            Some(GaugeMode::Exhaustive)
        } else if half <= MAX_INVARIANT_DIM {
            Some(GaugeMode::Invariant)
        } else {
            None
        };
        if engine.budget.check_spm(half).is_ok() {
            let mut spectra = ReportBuilder::new(format!("{name}/x-vs-z+1/det-alpha"), 1e-9);
            for alpha in [1.0, 2.0, 4.0] {
                spectra.values(half, format!("alpha={alpha}"), engine.spm(x, alpha)?.total, engine.spm(&reduced, alpha)?.total);
            }
            out.push(spectra.finish());
        }
        if let Some(mode) = mode {
            let mut rep = gauge_equivalent(engine, x, &reduced, mode)?;
            rep.identity_name = format!("{name}/x-vs-z+1/{}", rep.identity_name);
            out.push(rep);
        }
    }
    Ok(out)
}
