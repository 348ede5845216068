//! Executes a resolved configuration: sweeps, validation, rendering.

use crate::config::{Mode, RunConfig};
use crate::entangle::{converge_entropy, total_entropy};
use crate::error::Result;
use crate::output::{
    render, render_report, EntanglementRow, SpectrumRow, TableData, ToyRow,
};
use crate::spectrum::{trace_branch, TrapParams};
use crate::toymodel::toy_curve_point;
use crate::validate;

/// What a run produced, before anything touches the filesystem.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// Fully rendered output text.
    pub rendered: String,
    /// Advisory messages for stderr; never fatal.
    pub warnings: Vec<String>,
    /// Number of failed validation checks (zero for non-validate modes).
    pub failed_checks: usize,
}

/// Branch list as actually swept: sorted, duplicates dropped.
fn swept_branches(config: &RunConfig) -> Vec<usize> {
    let mut branches = config.branches.clone();
    branches.sort_unstable();
    branches.dedup();
    branches
}

fn run_spectrum(config: &RunConfig) -> Result<TableData> {
    let base = TrapParams::new(config.lambda, 0.0, config.r0_ratio)?;
    let grid = config.grid();
    let mut rows = Vec::new();
    for branch in swept_branches(config) {
        let traced = trace_branch(branch, &grid, &base)?;
        for (i, point) in traced.points.iter().enumerate() {
            let beta2 = crate::spectrum::molecular_fraction(&traced, i)
                .map_err(|e| e.at_grid_point(point.inv_as))?;
            rows.push(SpectrumRow {
                inv_as: point.inv_as,
                branch,
                x: point.x,
                beta2,
            });
        }
    }
    Ok(TableData::Spectrum(rows))
}

fn run_entanglement(config: &RunConfig) -> Result<TableData> {
    let mut rows = Vec::new();
    for branch in swept_branches(config) {
        for &inv_as in &config.grid() {
            let p = TrapParams::new(config.lambda, inv_as, config.r0_ratio)
                .map_err(|e| e.at_grid_point(inv_as))?;
            let report = converge_entropy(branch, &p, &config.k_schedule, config.tol)
                .map_err(|e| e.at_grid_point(inv_as))?;
            let spatial = report.best();
            rows.push(EntanglementRow {
                inv_as,
                branch,
                k: report.last_k(),
                spatial_entropy: spatial,
                total_entropy: total_entropy(spatial),
                converged: report.converged,
            });
        }
    }
    Ok(TableData::Entanglement(rows))
}

fn run_toy(config: &RunConfig) -> Result<TableData> {
    let mut rows = Vec::new();
    for &g_over_gap in &config.grid() {
        let entropy =
            toy_curve_point(g_over_gap).map_err(|e| e.at_grid_point(g_over_gap))?;
        rows.push(ToyRow { g_over_gap, entropy });
    }
    Ok(TableData::Toy(rows))
}

/// Runs the configured computation and renders its output. Filesystem
/// writes are left to the caller so results stay testable in-memory.
pub fn execute(config: &RunConfig) -> Result<RunOutcome> {
    let mut warnings = Vec::new();
    if matches!(config.mode, Mode::Spectrum | Mode::Entanglement) {
        let probe = TrapParams::new(config.lambda, 0.0, config.r0_ratio)?;
        if !probe.within_broad_resonance_limit() {
            warnings.push(format!(
                "r0_ratio = {} is outside the broad-resonance regime (|r0|/d_perp <= 0.1); \
                 results describe a narrow resonance",
                config.r0_ratio
            ));
        }
    }
    match config.mode {
        Mode::Spectrum => {
            let data = run_spectrum(config)?;
            Ok(RunOutcome { rendered: render(config, &data), warnings, failed_checks: 0 })
        }
        Mode::Entanglement => {
            let data = run_entanglement(config)?;
            Ok(RunOutcome { rendered: render(config, &data), warnings, failed_checks: 0 })
        }
        Mode::Toy => {
            let data = run_toy(config)?;
            Ok(RunOutcome { rendered: render(config, &data), warnings, failed_checks: 0 })
        }
        Mode::Validate => {
            let results = validate::run_all();
            let failed_checks = results.iter().filter(|r| !r.passed).count();
            Ok(RunOutcome {
                rendered: render_report(config, &results),
                warnings,
                failed_checks,
            })
        }
    }
}
