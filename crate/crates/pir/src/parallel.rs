//! The simulation grid on a rayon thread pool.
//!
//! Every replication draws from its own `(seed, stream id)` pair, so the
//! result is bit-identical to [`pir_core::simulation::run`] for any number
//! of workers.

use pir_core::simulation::{CellPlan, CellResult, SimulationResult, SimulationSpec};
use rayon::prelude::*;

use crate::error::Result;

/// Runs the grid with `threads` workers (`None` lets rayon decide).
pub fn run(spec: &SimulationSpec, threads: Option<usize>) -> Result<SimulationResult> {
    spec.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| pir_core::Error::Invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_in_current_pool(spec))
}

fn run_in_current_pool(spec: &SimulationSpec) -> Result<SimulationResult> {
    let mut cells = Vec::new();
    for cell in spec.cells() {
        let plan = CellPlan::new(cell, spec.level, spec.seed, spec.sigma_eps_mode)?;
        let outcomes: Vec<_> = (0..spec.replications as u64)
            .into_par_iter()
            .map(|rep| plan.replicate(rep))
            .collect();
        cells.push(CellResult::from_replications(cell, outcomes)?);
    }
    Ok(SimulationResult { spec: spec.clone(), cells })
}
