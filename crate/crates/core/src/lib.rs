//! Finite-volume engine for a macroscopic pedestrian-flow model in which the
//! maximal crowd density is itself a state variable.
//!
//! The state is the triple (ρ, τ, u):
//!
//! * ρ — crowd density, transported by a conservation law with a triangular
//!   fundamental diagram whose right foot sits at the variable maximal
//!   density τ;
//! * τ — maximal density, relaxed by ∂t τ = γ u within fixed bounds;
//! * u — a Burgers-like "information wave" with a nonlocal source that fires
//!   when the local density gets within a tolerance ν of the average maximal
//!   density seen ahead.
//!
//! Both hyperbolic equations are discretized with Godunov fluxes written as
//! sending/receiving pairs (the ρ-equation reduces to the classical Cell
//! Transmission Method when τ is frozen). The 2D solver uses Lie splitting
//! with sign-aware directional fluxes driven by the unit direction field of
//! an Eikonal walking-distance solve.
//!
//! The crate is `no_std` + `alloc`; all IO lives in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod eikonal;
pub mod error;
pub mod flux;
pub mod grid;
pub mod nonlocal;
pub mod observe;
pub mod params;
pub mod scenarios;
pub mod solver1d;
pub mod solver2d;

pub use error::Error;
pub use grid::{CellKind, Field, Grid, SimState};
pub use params::SimParams;
