use ncbundle_core::projection::{kr_case, recipe_table, BaseRecipe};
use ncbundle_core::triple::SpinorModule;
use serde::Serialize;

use crate::error::CliError;

/// (j, n) pairs beyond `max_dim` that carry the wrong-sign j₀ and are always included.
const EXTRA_CASES: [(usize, usize); 2] = [(4, 3), (4, 5)];

#[derive(Clone, Debug, Serialize)]
pub struct SweepCase {
    pub j: usize,
    pub n: usize,
    pub cutoff: u32,
    pub module: SpinorModule,
    pub recipe: BaseRecipe,
    pub pass: bool,
    pub max_violation: f64,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub max_dim: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub cases: Vec<SweepCase>,
    /// All 64 recipes by residue, including the ones too large to build.
    pub table: Vec<BaseRecipe>,
    pub pass: bool,
}

/// Cutoff keeping each case at desk scale; radius-2 checks are vacuous at cutoff 1.
pub fn default_cutoff(total_dim: usize) -> u32 {
    match total_dim {
        0..=4 => 3,
        5 => 2,
        _ => 1,
    }
}

/// Base KR verification for every (j, n) with 1 ≤ n and j + n ≤ `max_dim`,
/// plus the large wrong-sign cases.
pub fn kr_sweep(
    max_dim: usize,
    cutoff: Option<u32>,
    seed: u64,
    tolerance: f64,
) -> Result<SweepReport, CliError> {
    let mut pairs: Vec<(usize, usize)> = (1..=max_dim)
        .flat_map(|total| (1..=total).map(move |n| (total - n, n)))
        .collect();
    pairs.extend(EXTRA_CASES.iter().filter(|(j, n)| j + n > max_dim));
    let mut cases = Vec::with_capacity(pairs.len());
    for (j, n) in pairs {
        let cut = cutoff.unwrap_or_else(|| default_cutoff(j + n));
        let case = kr_case(j, n, cut, seed.wrapping_add((10 * j + n) as u64), tolerance)?;
        cases.push(SweepCase {
            j,
            n,
            cutoff: cut,
            module: case.module,
            recipe: case.recipe,
            pass: case.pass(),
            max_violation: case.report.max_violation(),
            failures: case.report.failures().map(|f| f.check.clone()).collect(),
        });
    }
    let pass = cases.iter().all(|c| c.pass);
    Ok(SweepReport {
        max_dim,
        seed,
        tolerance,
        cases,
        table: recipe_table(),
        pass,
    })
}
