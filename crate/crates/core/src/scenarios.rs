//! Built-in scenarios. Constants live here in code so they are
//! version-controlled together with the solvers.

use crate::params::SimParams;
use crate::solver1d::{DensityBlock, GateSpec, InflowSpec, Scenario1D};
use crate::solver2d::{Block, ExitSpec, PinnedCell, Scenario2D, Side};

/// Corridor of length 100 with a gate at x = 66 that opens at t = 400.
/// A crowd of density 0.5 starts on the left half and keeps entering until
/// t = 150. Damping is off to leave the wave dynamics undisturbed.
pub fn test1() -> Scenario1D {
    let mut params = SimParams::default().with_dx(1.0);
    params.eps = 0.0;
    params.t_end = 600.0;
    let mut s = Scenario1D::corridor(100.0, params);
    s.gate = Some(GateSpec {
        position: 66.0,
        opens_at: Some(400.0),
    });
    s.inflow = Some(InflowSpec {
        density: 0.5,
        until: 150.0,
    });
    s.initial.push(DensityBlock {
        from: 0.0,
        to: 50.0,
        value: 0.5,
    });
    s
}

/// Same corridor on a refined mesh with the gate kept closed forever, run
/// until the queue settles into its steady state.
pub fn test2() -> Scenario1D {
    let mut params = SimParams::default().with_dx(0.5);
    params.t_end = 2000.0;
    let mut s = Scenario1D::corridor(100.0, params);
    s.gate = Some(GateSpec {
        position: 66.0,
        opens_at: None,
    });
    s.inflow = Some(InflowSpec {
        density: 0.5,
        until: 150.0,
    });
    s.initial.push(DensityBlock {
        from: 0.0,
        to: 50.0,
        value: 0.5,
    });
    s.steady_stop = Some(1e-8);
    s
}

fn room_block() -> Block {
    Block {
        x0: 20.0,
        x1: 60.0,
        y0: 44.0,
        y1: 68.0,
        value: 0.5,
    }
}

/// 100 x 100 room, crowd block [20,60]x[44,68] at ρ = 0.5, two exits at the
/// top- and bottom-right corners.
pub fn test3() -> Scenario2D {
    let mut params = SimParams::default().with_dx(1.0);
    params.t_end = 2000.0;
    let mut s = Scenario2D::room(100.0, 100.0, params);
    s.exits.push(ExitSpec {
        side: Side::Right,
        offset: 0,
        factor: 1.0,
    });
    s.exits.push(ExitSpec {
        side: Side::Right,
        offset: 99,
        factor: 1.0,
    });
    s.initial.push(room_block());
    s.stop_when_empty = Some(0.01);
    s
}

/// Single exit in the middle of the right side with its outgoing flux
/// halved.
pub fn test4a() -> Scenario2D {
    let mut params = SimParams::default().with_dx(1.0);
    params.t_end = 4000.0;
    let mut s = Scenario2D::room(100.0, 100.0, params);
    s.exits.push(ExitSpec {
        side: Side::Right,
        offset: 50,
        factor: 0.5,
    });
    s.initial.push(room_block());
    s.stop_when_empty = Some(0.01);
    s
}

/// Single middle-right exit on a coarse mesh, blocked by a one-cell
/// obstacle held at ρ = τ_* − 0.1 = 0.9 directly in front of it.
pub fn test4b() -> Scenario2D {
    let mut params = SimParams::default().with_dx(2.0);
    params.t_end = 8000.0;
    let mut s = Scenario2D::room(100.0, 100.0, params);
    s.exits.push(ExitSpec {
        side: Side::Right,
        offset: 25,
        factor: 1.0,
    });
    s.pinned.push(PinnedCell {
        j: 49,
        k: 25,
        rho: 0.9,
    });
    s.initial.push(room_block());
    s.stop_when_empty = Some(0.01);
    s
}
