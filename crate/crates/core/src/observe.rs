//! Step observers: mass series, fundamental-diagram scatter, snapshots.

use alloc::vec::Vec;

use crate::analysis::{MassSeries, ScatterPoint, ScatterSeries};
use crate::grid::{free_mass, Field, Grid, SimState};

/// What the stepping loop hands to each observer after a step. The flux
/// slice (1D only) holds the interface fluxes actually used by the ρ-update,
/// indexed by interface; `rho_before` is the matching time-n density.
pub struct StepRecord<'a> {
    pub t: f64,
    pub state: &'a SimState,
    pub grid: &'a Grid,
    pub rho_before: Option<&'a Field>,
    pub rho_fluxes: Option<&'a [f64]>,
}

pub trait Observer {
    fn record(&mut self, rec: &StepRecord<'_>);
}

/// Records (t, mass) with the Dirichlet cells excluded from the budget.
pub struct MassCollector {
    stride: usize,
    count: usize,
    pub series: MassSeries,
}

impl MassCollector {
    pub fn new(stride: usize) -> Self {
        MassCollector {
            stride: stride.max(1),
            count: 0,
            series: MassSeries::default(),
        }
    }
}

impl Observer for MassCollector {
    fn record(&mut self, rec: &StepRecord<'_>) {
        if self.count.is_multiple_of(self.stride) {
            self.series.push(rec.t, free_mass(&rec.state.rho, rec.grid));
        }
        self.count += 1;
    }
}

/// Collects the ex-post fundamental diagram: one (ρ_j, G(j, j+1)) pair per
/// interior interface per step, with ρ taken from the sending cell at time n.
pub struct ScatterCollector {
    pub series: ScatterSeries,
}

impl ScatterCollector {
    pub fn new() -> Self {
        ScatterCollector {
            series: ScatterSeries::default(),
        }
    }
}

impl Default for ScatterCollector {
    fn default() -> Self {
        Self::new()
    }
}

impl Observer for ScatterCollector {
    fn record(&mut self, rec: &StepRecord<'_>) {
        let (Some(rho), Some(fluxes)) = (rec.rho_before, rec.rho_fluxes) else {
            return;
        };
        let n = rec.grid.nx;
        // Interface i+1 sits between cells i and i+1; skip the two boundary
        // interfaces.
        for j in 0..n.saturating_sub(1) {
            self.series.points.push(ScatterPoint {
                t: rec.t,
                cell: j,
                rho: rho.at(j, 0),
                flux: fluxes[j + 1],
            });
        }
    }
}

/// Keeps full state snapshots every `stride` records.
pub struct SnapshotCollector {
    stride: usize,
    count: usize,
    pub snapshots: Vec<(f64, SimState)>,
}

impl SnapshotCollector {
    pub fn new(stride: usize) -> Self {
        SnapshotCollector {
            stride: stride.max(1),
            count: 0,
            snapshots: Vec::new(),
        }
    }
}

impl Observer for SnapshotCollector {
    fn record(&mut self, rec: &StepRecord<'_>) {
        if self.count.is_multiple_of(self.stride) {
            self.snapshots.push((rec.t, rec.state.clone()));
        }
        self.count += 1;
    }
}
