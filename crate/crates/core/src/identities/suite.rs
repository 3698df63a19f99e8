//! The standard verification suite behind `verify`.

use super::{
    verify_blocks, verify_gf_products, verify_table2, verify_theorem1_random, verify_xx_obc_readings, verify_xx_tfi,
    VerificationReport,
};
use crate::error::Result;
use crate::minors::MinorEngine;
use crate::models::{Boundary, Family};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteSelection {
    Theorem1,
    XxTfi,
    Blocks,
    Gf,
    Table2,
    All,
}

impl SuiteSelection {
    fn includes(self, other: SuiteSelection) -> bool {
        self == SuiteSelection::All || self == other
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub theorem1_count: usize,
    pub theorem1_sizes: Vec<usize>,
    pub theorem1_alphas: Vec<f64>,
    pub seed: u64,
    pub xx_sizes: Vec<usize>,
    pub xx_alphas: Vec<f64>,
    pub boundaries: Vec<Boundary>,
    pub obc_reading_sizes: Vec<usize>,
    /// `(family, L)` pairs for the block reductions.
    pub block_cases: Vec<(Family, usize)>,
    /// `(family, L, α)` triples for the product identities.
    pub gf_cases: Vec<(Family, usize, f64)>,
    pub table2_pbc_sizes: Vec<usize>,
    pub table2_obc_sizes: Vec<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let mut block_cases = Vec::new();
        for n in 1..=3 {
            block_cases.extend((1..=24).filter(|l| l % (2 * n) == 0).map(|l| (Family::ZnPlusOne { n }, l)));
        }
        for m in 1..=2 {
            block_cases.extend((1..=16).filter(|l| l % (2 * m) == 0 && (l / (2 * m)) % 2 == 0).map(|l| (Family::Chiral { m }, l)));
        }
        Self {
            theorem1_count: 20,
            theorem1_sizes: vec![2, 3, 4, 5],
            theorem1_alphas: vec![0.5, 1.0, 2.0, 3.0],
            seed: 1,
            xx_sizes: vec![2, 4, 6],
            xx_alphas: vec![0.5, 1.0, 2.0, 4.0],
            boundaries: vec![Boundary::Periodic, Boundary::Open],
            obc_reading_sizes: vec![2, 4],
            block_cases,
            gf_cases: vec![
                (Family::ZnPlusOne { n: 2 }, 8, 2.0),
                (Family::ZnPlusOne { n: 2 }, 8, 4.0),
                (Family::Chiral { m: 1 }, 8, 2.0),
            ],
            table2_pbc_sizes: vec![1, 2, 4, 6, 8],
            table2_obc_sizes: vec![2, 4, 6],
        }
    }
}

pub fn run_suite(engine: &MinorEngine, selection: SuiteSelection, config: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    if selection.includes(SuiteSelection::Theorem1) {
        out.push(verify_theorem1_random(
            engine,
            config.theorem1_count,
            &config.theorem1_sizes,
            &config.theorem1_alphas,
            config.seed,
            1e-10,
        )?);
    }
    if selection.includes(SuiteSelection::XxTfi) {
        for &bc in &config.boundaries {
            out.push(verify_xx_tfi(engine, &config.xx_sizes, bc, &config.xx_alphas, 1e-9)?);
        }
        if config.boundaries.contains(&Boundary::Open) && !config.obc_reading_sizes.is_empty() {
            out.extend(verify_xx_obc_readings(engine, &config.obc_reading_sizes, 1e-9)?);
        }
    }
    if selection.includes(SuiteSelection::Blocks) {
        for &(family, l) in &config.block_cases {
            out.extend(verify_blocks(engine, family, l)?);
        }
    }
    if selection.includes(SuiteSelection::Gf) {
        for &(family, l, alpha) in &config.gf_cases {
            out.push(verify_gf_products(engine, family, l, alpha)?);
        }
    }
    if selection.includes(SuiteSelection::Table2) {
        if !config.table2_pbc_sizes.is_empty() && config.boundaries.contains(&Boundary::Periodic) {
            out.extend(verify_table2(engine, Boundary::Periodic, &config.table2_pbc_sizes)?);
        }
        if !config.table2_obc_sizes.is_empty() && config.boundaries.contains(&Boundary::Open) {
            out.extend(verify_table2(engine, Boundary::Open, &config.table2_obc_sizes)?);
        }
    }
    Ok(out)
}

/// True when every gating report passed.
pub fn suite_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass || r.informational)
}
