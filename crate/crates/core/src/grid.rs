//! Grids, fields, the (ρ, τ, u) state container, bound enforcement, and mass
//! accounting.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::params::SimParams;

/// Per-cell classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellKind {
    Interior,
    /// Zero-flux cell; also blocks the sensory region and the distance field.
    Wall,
    /// Door cell: a sink with φ = 0 whose incoming flux is scaled by `factor`.
    Exit { factor: f64 },
    /// Dirichlet cell whose density is re-pinned to `rho` after every step.
    FixedDensity { rho: f64 },
}

impl CellKind {
    pub fn is_wall(&self) -> bool {
        matches!(self, CellKind::Wall)
    }

    pub fn is_exit(&self) -> bool {
        matches!(self, CellKind::Exit { .. })
    }
}

/// Cell-centered rectangular grid. 1D corridors use `ny == 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    kinds: Vec<CellKind>,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, dx: f64) -> Self {
        Grid {
            nx,
            ny,
            dx,
            kinds: vec![CellKind::Interior; nx * ny],
        }
    }

    pub fn is_1d(&self) -> bool {
        self.ny == 1
    }

    /// Number of spatial dimensions (1 or 2).
    pub fn dims(&self) -> u32 {
        if self.is_1d() {
            1
        } else {
            2
        }
    }

    /// Cell area: dx in 1D, dx² in 2D.
    pub fn cell_measure(&self) -> f64 {
        if self.is_1d() {
            self.dx
        } else {
            self.dx * self.dx
        }
    }

    #[inline]
    pub fn idx(&self, j: usize, k: usize) -> usize {
        debug_assert!(j < self.nx && k < self.ny);
        k * self.nx + j
    }

    #[inline]
    pub fn kind(&self, j: usize, k: usize) -> CellKind {
        self.kinds[self.idx(j, k)]
    }

    pub fn set_kind(&mut self, j: usize, k: usize, kind: CellKind) {
        let i = self.idx(j, k);
        self.kinds[i] = kind;
    }

    #[inline]
    pub fn is_wall(&self, j: usize, k: usize) -> bool {
        self.kind(j, k).is_wall()
    }

    pub fn kinds(&self) -> &[CellKind] {
        &self.kinds
    }

    pub fn exit_cells(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.ny).flat_map(move |k| {
            (0..self.nx).filter_map(move |j| match self.kind(j, k) {
                CellKind::Exit { factor } => Some((j, k, factor)),
                _ => None,
            })
        })
    }

    pub fn has_exit(&self) -> bool {
        self.exit_cells().next().is_some()
    }

    /// Swap the grid axes.
    pub fn transposed(&self) -> Grid {
        let mut g = Grid::new(self.ny, self.nx, self.dx);
        for k in 0..self.ny {
            for j in 0..self.nx {
                g.set_kind(k, j, self.kind(j, k));
            }
        }
        g
    }
}

/// One scalar value per grid cell, row-major with x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub nx: usize,
    pub ny: usize,
    data: Vec<f64>,
}

impl Field {
    pub fn new(nx: usize, ny: usize, fill: f64) -> Self {
        Field {
            nx,
            ny,
            data: vec![fill; nx * ny],
        }
    }

    pub fn like(grid: &Grid, fill: f64) -> Self {
        Field::new(grid.nx, grid.ny, fill)
    }

    #[inline]
    pub fn at(&self, j: usize, k: usize) -> f64 {
        debug_assert!(j < self.nx && k < self.ny);
        self.data[k * self.nx + j]
    }

    #[inline]
    pub fn set(&mut self, j: usize, k: usize, v: f64) {
        debug_assert!(j < self.nx && k < self.ny);
        self.data[k * self.nx + j] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn fill(&mut self, v: f64) {
        self.data.fill(v);
    }

    pub fn transposed(&self) -> Field {
        let mut f = Field::new(self.ny, self.nx, 0.0);
        for k in 0..self.ny {
            for j in 0..self.nx {
                f.set(k, j, self.at(j, k));
            }
        }
        f
    }

    /// Largest absolute cell-wise difference against another field.
    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| libm::fabs(a - b))
            .fold(0.0, f64::max)
    }
}

/// The (ρ, τ, u) triple at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub rho: Field,
    pub tau: Field,
    pub u: Field,
    pub t: f64,
}

impl SimState {
    /// Fresh state: ρ = 0, τ = τ_*, u = 0.
    pub fn resting(grid: &Grid, params: &SimParams) -> Self {
        SimState {
            rho: Field::like(grid, 0.0),
            tau: Field::like(grid, params.tau_lo),
            u: Field::like(grid, 0.0),
            t: 0.0,
        }
    }
}

/// Clip u to [u_*, u^*] and τ to [τ_*, τ^*], then lift τ to max(τ, ρ)
/// cell-wise so the constraint ρ ≤ τ holds. ρ is never touched: the ρ-update
/// is conservative and the projection must not destroy mass.
///
/// Fails on the first non-finite value encountered, reporting the cell.
pub fn clamp_state(state: &mut SimState, params: &SimParams, grid: &Grid) -> Result<(), Error> {
    for k in 0..grid.ny {
        for j in 0..grid.nx {
            if grid.is_wall(j, k) {
                continue;
            }
            let rho = state.rho.at(j, k);
            let tau = state.tau.at(j, k);
            let u = state.u.at(j, k);
            for (name, v) in [("rho", rho), ("tau", tau), ("u", u)] {
                if !v.is_finite() {
                    return Err(Error::NonFinite { field: name, j, k });
                }
            }
            state.u.set(j, k, u.clamp(params.u_lo, params.u_hi));
            let tau = tau.clamp(params.tau_lo, params.tau_hi).max(rho);
            state.tau.set(j, k, tau);
        }
    }
    Ok(())
}

/// Total mass Σ ρ · dx^dims over non-wall cells.
pub fn total_mass(rho: &Field, grid: &Grid) -> f64 {
    let mut sum = 0.0;
    for k in 0..grid.ny {
        for j in 0..grid.nx {
            if !grid.is_wall(j, k) {
                sum += rho.at(j, k);
            }
        }
    }
    sum * grid.cell_measure()
}

/// Mass over non-wall cells excluding Dirichlet cells, whose pinned density
/// is not part of the conserved budget.
pub fn free_mass(rho: &Field, grid: &Grid) -> f64 {
    let mut sum = 0.0;
    for k in 0..grid.ny {
        for j in 0..grid.nx {
            match grid.kind(j, k) {
                CellKind::Wall | CellKind::FixedDensity { .. } => {}
                _ => sum += rho.at(j, k),
            }
        }
    }
    sum * grid.cell_measure()
}
