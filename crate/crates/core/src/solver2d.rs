//! 2D room solver: Lie splitting with sign-aware directional Godunov fluxes.
//!
//! Each full step sweeps the ρ-equation along x then y (order configurable),
//! then the u-equation the same way plus its source added once, then updates
//! τ and clamps. Within a sweep every cell sends through the interface
//! selected by the sign of its own w-component, and receives from whichever
//! neighbors point at it; fluxes are the hatted positive fluxes
//! f̂ = ρ s |w_axis| and ĝ = ½ u² |w_axis|.
//!
//! The room is surrounded by a ring of wall cells; exits are door cells
//! carved into the ring that act as sinks (re-pinned to ρ = 0, τ = τ_*,
//! u = 0 after every step) with their incoming flux scaled by the per-exit
//! factor.

use alloc::vec;
use alloc::vec::Vec;

use crate::eikonal::{self, DirectionField};
use crate::error::Error;
use crate::flux::{receiving_rho, receiving_u, sending_rho, sending_u};
use crate::grid::{clamp_state, free_mass, CellKind, Field, Grid, SimState};
use crate::nonlocal::{self, SensoryStencils};
use crate::observe::{Observer, StepRecord};
use crate::params::SimParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    #[inline]
    fn cell(self, u: usize, v: usize) -> (usize, usize) {
        match self {
            Axis::X => (u, v),
            Axis::Y => (v, u),
        }
    }

    #[inline]
    fn len(self, grid: &Grid) -> usize {
        match self {
            Axis::X => grid.nx,
            Axis::Y => grid.ny,
        }
    }

    #[inline]
    fn lines(self, grid: &Grid) -> usize {
        match self {
            Axis::X => grid.ny,
            Axis::Y => grid.nx,
        }
    }

    #[inline]
    fn wcomp(self, w: &DirectionField, j: usize, k: usize) -> f64 {
        match self {
            Axis::X => w.wx.at(j, k),
            Axis::Y => w.wy.at(j, k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldKind {
    Density,
    Wave,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepOrder {
    XThenY,
    YThenX,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

/// A one-cell-wide door in the wall ring. `offset` counts interior cells
/// along the side from the low end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitSpec {
    pub side: Side,
    pub offset: usize,
    pub factor: f64,
}

/// Axis-aligned region of constant initial density, in physical coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub value: f64,
}

/// Dirichlet cell (interior coordinates) whose ρ is re-pinned every step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinnedCell {
    pub j: usize,
    pub k: usize,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario2D {
    pub width: f64,
    pub height: f64,
    pub params: SimParams,
    pub exits: Vec<ExitSpec>,
    /// Interior wall rectangles (x0, x1, y0, y1) in physical coordinates.
    pub walls: Vec<(f64, f64, f64, f64)>,
    pub pinned: Vec<PinnedCell>,
    pub initial: Vec<Block>,
    pub sweep_order: SweepOrder,
    /// Stop early once the free mass falls below this fraction of its
    /// initial value.
    pub stop_when_empty: Option<f64>,
}

impl Scenario2D {
    pub fn room(width: f64, height: f64, params: SimParams) -> Self {
        Scenario2D {
            width,
            height,
            params,
            exits: Vec::new(),
            walls: Vec::new(),
            pinned: Vec::new(),
            initial: Vec::new(),
            sweep_order: SweepOrder::XThenY,
            stop_when_empty: None,
        }
    }
}

/// One directed flux from cell `s` across an interface to cell `r`, using
/// the hatted w-component fluxes. `dir` is the sign of the transport
/// direction along the axis (+1 for low → high, −1 for high → low); only
/// the parts of the two w-components pointing along `dir` carry transport,
/// which keeps the scheme exactly reflection-symmetric when the components
/// change sign across the interface. Exit receivers scale by their door
/// factor.
#[inline]
#[allow(clippy::too_many_arguments)]
fn directed_flux(
    kind: FieldKind,
    s: (usize, usize),
    r: (usize, usize),
    axis: Axis,
    dir: f64,
    q: &Field,
    tau: Option<&Field>,
    grid: &Grid,
    w: &DirectionField,
    p: &SimParams,
) -> f64 {
    let kr = grid.kind(r.0, r.1);
    if grid.kind(s.0, s.1).is_wall() || kr.is_wall() {
        return 0.0;
    }
    let ws = (dir * axis.wcomp(w, s.0, s.1)).max(0.0);
    let wr_along = (dir * axis.wcomp(w, r.0, r.1)).max(0.0);
    let g = match kind {
        FieldKind::Density => {
            let tau = tau.expect("density sweep needs tau");
            let (ts, tr) = (tau.at(s.0, s.1), tau.at(r.0, r.1));
            // After the first sub-step of the splitting ρ may sit a hair
            // above τ; evaluate the flux at the admissible projection.
            let rs = q.at(s.0, s.1).min(ts);
            let rr = q.at(r.0, r.1).min(tr);
            // The interface flux is the plain 1D Godunov flux scaled by the
            // sender's transport coefficient. Hatting the supply by the
            // receiver's |w-component| instead would deadlock any receiver
            // whose component vanishes along this axis (symmetry rows, or a
            // pinned cell heading straight for the exit): it could never
            // absorb transverse inflow. Keeping the receiver capacity a pure
            // state property also preserves ρ ≤ τ per sweep: a cell gains at
            // most 2·(Δt/Δx)·f_max·(τ−ρ)/(τ−σ) ≤ τ − ρ for τ ≥ σ + 2·Δt·f_max/Δx.
            ws * sending_rho(rs, ts, p).min(receiving_rho(rr, tr, p))
        }
        FieldKind::Wave => {
            (ws * sending_u(q.at(s.0, s.1))).max(wr_along * receiving_u(q.at(r.0, r.1)))
        }
    };
    match kr {
        CellKind::Exit { factor } => g * factor,
        _ => g,
    }
}

/// One splitting sub-step of `q` along `axis` over the full Δt.
///
/// Per interface both transport directions are evaluated with the matching
/// signed parts of the w-components; a cell under converging directions
/// receives from both neighbors in the same sweep, and directions pointing
/// away from the interface contribute nothing.
#[allow(clippy::too_many_arguments)]
pub fn axis_sweep(
    kind: FieldKind,
    axis: Axis,
    q: &Field,
    tau: Option<&Field>,
    grid: &Grid,
    w: &DirectionField,
    p: &SimParams,
    out: &mut Field,
) {
    let len = axis.len(grid);
    let mut up_flux = vec![0.0; len.saturating_sub(1)];
    let mut down_flux = vec![0.0; len.saturating_sub(1)];
    axis_sweep_with_scratch(kind, axis, q, tau, grid, w, p, &mut up_flux, &mut down_flux, out);
}

#[allow(clippy::too_many_arguments)]
fn axis_sweep_with_scratch(
    kind: FieldKind,
    axis: Axis,
    q: &Field,
    tau: Option<&Field>,
    grid: &Grid,
    w: &DirectionField,
    p: &SimParams,
    up_flux: &mut [f64],
    down_flux: &mut [f64],
    out: &mut Field,
) {
    let len = axis.len(grid);
    let lines = axis.lines(grid);
    let lambda = p.dt / p.dx;
    out.values_mut().copy_from_slice(q.values());
    for v in 0..lines {
        for u in 0..len - 1 {
            let a = axis.cell(u, v);
            let b = axis.cell(u + 1, v);
            up_flux[u] = directed_flux(kind, a, b, axis, 1.0, q, tau, grid, w, p);
            down_flux[u] = directed_flux(kind, b, a, axis, -1.0, q, tau, grid, w, p);
        }
        for u in 0..len {
            let c = axis.cell(u, v);
            if grid.is_wall(c.0, c.1) {
                continue;
            }
            let in_minus = if u > 0 { up_flux[u - 1] } else { 0.0 };
            let out_minus = if u > 0 { down_flux[u - 1] } else { 0.0 };
            let (in_plus, out_plus) = if u < len - 1 {
                (down_flux[u], up_flux[u])
            } else {
                (0.0, 0.0)
            };
            let net = (out_minus + out_plus) - (in_minus + in_plus);
            out.set(c.0, c.1, q.at(c.0, c.1) - lambda * net);
        }
    }
}

pub struct Solver2d {
    params: SimParams,
    sweep_order: SweepOrder,
    grid: Grid,
    w: DirectionField,
    phi: Option<Field>,
    stencils: SensoryStencils,
    initial: Vec<Block>,
    stop_when_empty: Option<f64>,
    // scratch
    tau_avg: Field,
    theta: Field,
    omega: Field,
    stage: Field,
    up_flux: Vec<f64>,
    down_flux: Vec<f64>,
}

impl Solver2d {
    /// Build grid, distance field, directions, and stencils for a scenario.
    ///
    /// A room with no exits is legal and degenerate: w ≡ 0, so nothing is
    /// transported (the closed-box case).
    pub fn new(scenario: Scenario2D) -> Result<Self, Error> {
        let p = scenario.params;
        p.validate()?;
        let nx_in = libm::round(scenario.width / p.dx) as usize;
        let ny_in = libm::round(scenario.height / p.dx) as usize;
        if nx_in < 2 || ny_in < 2 {
            return Err(Error::Config(alloc::format!(
                "room of {nx_in} x {ny_in} cells is too small"
            )));
        }
        let (nx, ny) = (nx_in + 2, ny_in + 2);
        let mut grid = Grid::new(nx, ny, p.dx);
        for j in 0..nx {
            grid.set_kind(j, 0, CellKind::Wall);
            grid.set_kind(j, ny - 1, CellKind::Wall);
        }
        for k in 0..ny {
            grid.set_kind(0, k, CellKind::Wall);
            grid.set_kind(nx - 1, k, CellKind::Wall);
        }
        for &(x0, x1, y0, y1) in &scenario.walls {
            for k in 0..ny_in {
                for j in 0..nx_in {
                    let x = (j as f64 + 0.5) * p.dx;
                    let y = (k as f64 + 0.5) * p.dx;
                    if x >= x0 && x < x1 && y >= y0 && y < y1 {
                        grid.set_kind(j + 1, k + 1, CellKind::Wall);
                    }
                }
            }
        }
        for exit in &scenario.exits {
            if !(0.0..=1.0).contains(&exit.factor) {
                return Err(Error::Config(alloc::format!(
                    "exit flux factor {} outside [0, 1]",
                    exit.factor
                )));
            }
            let (j, k, limit) = match exit.side {
                Side::Left => (0, exit.offset + 1, ny_in),
                Side::Right => (nx - 1, exit.offset + 1, ny_in),
                Side::Bottom => (exit.offset + 1, 0, nx_in),
                Side::Top => (exit.offset + 1, ny - 1, nx_in),
            };
            if exit.offset >= limit {
                return Err(Error::Config(alloc::format!(
                    "exit offset {} outside the side of {limit} cells",
                    exit.offset
                )));
            }
            grid.set_kind(j, k, CellKind::Exit { factor: exit.factor });
        }
        for pin in &scenario.pinned {
            if pin.j >= nx_in || pin.k >= ny_in {
                return Err(Error::Config(alloc::format!(
                    "pinned cell ({}, {}) outside the {nx_in} x {ny_in} interior",
                    pin.j,
                    pin.k
                )));
            }
            if !(0.0..=p.tau_hi).contains(&pin.rho) {
                return Err(Error::Config(alloc::format!(
                    "pinned density {} outside [0, tau_hi]",
                    pin.rho
                )));
            }
            grid.set_kind(pin.j + 1, pin.k + 1, CellKind::FixedDensity { rho: pin.rho });
        }
        for block in &scenario.initial {
            if block.value < 0.0 || block.value > p.tau_lo {
                return Err(Error::Config(alloc::format!(
                    "initial density {} outside [0, tau_lo]",
                    block.value
                )));
            }
        }

        let (phi, w) = if grid.has_exit() {
            let phi = eikonal::solve_eikonal(&grid)?;
            let w = eikonal::direction_field(&phi, &grid)?;
            (Some(phi), w)
        } else {
            (None, DirectionField::uniform(&grid, 0.0, 0.0))
        };
        let stencils = nonlocal::build_stencils(&grid, &w, &p);
        let max_len = grid.nx.max(grid.ny);
        Ok(Solver2d {
            params: p,
            sweep_order: scenario.sweep_order,
            tau_avg: Field::like(&grid, 0.0),
            theta: Field::like(&grid, 0.0),
            omega: Field::like(&grid, 0.0),
            stage: Field::like(&grid, 0.0),
            up_flux: vec![0.0; max_len],
            down_flux: vec![0.0; max_len],
            grid,
            w,
            phi,
            stencils,
            initial: scenario.initial,
            stop_when_empty: scenario.stop_when_empty,
        })
    }

    /// Assemble a solver from a prebuilt grid and direction field, bypassing
    /// the Eikonal solve.
    pub fn from_parts(
        grid: Grid,
        w: DirectionField,
        params: SimParams,
        sweep_order: SweepOrder,
    ) -> Result<Self, Error> {
        params.validate()?;
        let stencils = nonlocal::build_stencils(&grid, &w, &params);
        let max_len = grid.nx.max(grid.ny);
        Ok(Solver2d {
            params,
            sweep_order,
            tau_avg: Field::like(&grid, 0.0),
            theta: Field::like(&grid, 0.0),
            omega: Field::like(&grid, 0.0),
            stage: Field::like(&grid, 0.0),
            up_flux: vec![0.0; max_len],
            down_flux: vec![0.0; max_len],
            grid,
            w,
            phi: None,
            stencils,
            initial: Vec::new(),
            stop_when_empty: None,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn params(&self) -> &SimParams {
        &self.params
    }

    pub fn direction_field(&self) -> &DirectionField {
        &self.w
    }

    pub fn distance_field(&self) -> Option<&Field> {
        self.phi.as_ref()
    }

    pub fn initial_state(&self) -> SimState {
        let p = &self.params;
        let mut state = SimState::resting(&self.grid, p);
        for block in &self.initial {
            for k in 1..self.grid.ny - 1 {
                for j in 1..self.grid.nx - 1 {
                    let x = (j as f64 - 0.5) * p.dx;
                    let y = (k as f64 - 0.5) * p.dx;
                    if x >= block.x0 && x < block.x1 && y >= block.y0 && y < block.y1 {
                        state.rho.set(j, k, block.value);
                    }
                }
            }
        }
        self.pin_cells(&mut state);
        state
    }

    fn pin_cells(&self, state: &mut SimState) {
        let p = &self.params;
        for k in 0..self.grid.ny {
            for j in 0..self.grid.nx {
                match self.grid.kind(j, k) {
                    CellKind::Exit { .. } => {
                        state.rho.set(j, k, 0.0);
                        state.tau.set(j, k, p.tau_lo);
                        state.u.set(j, k, 0.0);
                    }
                    CellKind::FixedDensity { rho } => {
                        state.rho.set(j, k, rho);
                        let lifted = state.tau.at(j, k).max(rho);
                        state.tau.set(j, k, lifted);
                    }
                    _ => {}
                }
            }
        }
    }

    fn sweep_pair(&mut self, kind: FieldKind, field: &mut Field, tau: Option<&Field>) {
        let (first, second) = match self.sweep_order {
            SweepOrder::XThenY => (Axis::X, Axis::Y),
            SweepOrder::YThenX => (Axis::Y, Axis::X),
        };
        for axis in [first, second] {
            axis_sweep_with_scratch(
                kind,
                axis,
                field,
                tau,
                &self.grid,
                &self.w,
                &self.params,
                &mut self.up_flux,
                &mut self.down_flux,
                &mut self.stage,
            );
            core::mem::swap(field, &mut self.stage);
        }
    }

    /// Advance one time step.
    pub fn step(&mut self, state: &mut SimState) -> Result<(), Error> {
        let p = self.params;

        // Source terms from the time-n fields.
        nonlocal::tau_ave(&state.tau, &self.stencils, &mut self.tau_avg);
        nonlocal::theta(&state.rho, &self.tau_avg, &p, &mut self.theta);
        nonlocal::u_rhs(&state.u, &self.theta, &self.w, &self.grid, &p, &mut self.omega);

        // ρ: both splitting sub-steps against the time-n τ.
        let tau_n = state.tau.clone();
        self.sweep_pair(FieldKind::Density, &mut state.rho, Some(&tau_n));

        // τ sees u at time n, so update it before sweeping u.
        for k in 0..self.grid.ny {
            for j in 0..self.grid.nx {
                if self.grid.is_wall(j, k) {
                    continue;
                }
                let tau = state.tau.at(j, k) + p.dt * p.gamma * state.u.at(j, k);
                state.tau.set(j, k, tau);
            }
        }

        // u: sweeps, then the source applied once for the whole step.
        self.sweep_pair(FieldKind::Wave, &mut state.u, None);
        for k in 0..self.grid.ny {
            for j in 0..self.grid.nx {
                if self.grid.is_wall(j, k) {
                    continue;
                }
                let v = state.u.at(j, k) + p.dt * self.omega.at(j, k);
                state.u.set(j, k, v);
            }
        }

        clamp_state(state, &p, &self.grid)?;
        self.pin_cells(state);
        state.t += p.dt;
        Ok(())
    }

    pub fn run(&mut self, state: &mut SimState, observers: &mut [&mut dyn Observer]) -> Result<(), Error> {
        let p = self.params;
        let steps = libm::ceil(p.t_end / p.dt - 1e-9) as usize;
        let m0 = free_mass(&state.rho, &self.grid);
        for obs in observers.iter_mut() {
            obs.record(&StepRecord {
                t: state.t,
                state,
                grid: &self.grid,
                rho_before: None,
                rho_fluxes: None,
            });
        }
        for _ in 0..steps {
            self.step(state)?;
            for obs in observers.iter_mut() {
                obs.record(&StepRecord {
                    t: state.t,
                    state,
                    grid: &self.grid,
                    rho_before: None,
                    rho_fluxes: None,
                });
            }
            if let Some(frac) = self.stop_when_empty {
                if free_mass(&state.rho, &self.grid) < frac * m0 {
                    break;
                }
            }
        }
        Ok(())
    }

    pub fn run_to_end(&mut self, observers: &mut [&mut dyn Observer]) -> Result<SimState, Error> {
        let mut state = self.initial_state();
        self.run(&mut state, observers)?;
        Ok(state)
    }
}
