//! Nonlocal average τ^ave, threshold θ, and the source ω of the u-equation.
//!
//! Each cell averages τ over its sensory stencil: the cell itself plus every
//! in-domain non-wall cell within distance δ whose offset has a positive
//! projection on the walking direction w (the discrete forward half-ball).
//! The threshold θ = ρ - (τ^ave - ν) selects the source branch:
//!
//! ```text
//! ω = -ε u + α⁺ max(θ - β ∇θ·w, 0)   θ ≥ 0
//! ω = -ε u + α⁻ θ                    θ < 0
//! ```
//!
//! ∇θ·w is approximated by one-sided differences taken ahead along w.

use alloc::vec::Vec;

use crate::eikonal::DirectionField;
use crate::grid::{Field, Grid};
use crate::params::SimParams;

/// Discrete forward half-ball of every non-wall cell, as flat cell indices
/// with uniform weights. Wall cells carry an empty list.
#[derive(Debug, Clone)]
pub struct SensoryStencils {
    members: Vec<Vec<u32>>,
}

impl SensoryStencils {
    pub fn members(&self, cell: usize) -> &[u32] {
        &self.members[cell]
    }
}

/// Build the sensory stencils. Membership uses the closed ball |z-x| ≤ δ on
/// cell centers and always includes the cell itself; with δ = Δx the open
/// ball would be empty along the walking axis and the linear steady state
/// τ^ave = τ + aδ/2 would be lost. Stencils are not truncated at closed
/// gates: seeing the low τ beyond the gate is what drives compression.
pub fn build_stencils(grid: &Grid, w: &DirectionField, params: &SimParams) -> SensoryStencils {
    let reach = (params.delta / grid.dx + 1e-12) as i64;
    let mut members = Vec::with_capacity(grid.nx * grid.ny);
    for k in 0..grid.ny {
        for j in 0..grid.nx {
            if grid.is_wall(j, k) {
                members.push(Vec::new());
                continue;
            }
            let (wx, wy) = w.at(j, k);
            let mut list = Vec::new();
            list.push(grid.idx(j, k) as u32);
            for dk in -reach..=reach {
                for dj in -reach..=reach {
                    if dj == 0 && dk == 0 {
                        continue;
                    }
                    let (jz, kz) = (j as i64 + dj, k as i64 + dk);
                    if jz < 0 || kz < 0 || jz >= grid.nx as i64 || kz >= grid.ny as i64 {
                        continue;
                    }
                    let (jz, kz) = (jz as usize, kz as usize);
                    if grid.is_wall(jz, kz) {
                        continue;
                    }
                    let (ox, oy) = (dj as f64 * grid.dx, dk as f64 * grid.dx);
                    if ox * ox + oy * oy > params.delta * params.delta {
                        continue;
                    }
                    if wx * ox + wy * oy > 0.0 {
                        list.push(grid.idx(jz, kz) as u32);
                    }
                }
            }
            members.push(list);
        }
    }
    SensoryStencils { members }
}

/// Uniform average of τ over each stencil. Summands are totally ordered
/// before accumulation so the result is exactly invariant under grid
/// reflections and transposition of the stencil layout.
pub fn tau_ave(tau: &Field, stencils: &SensoryStencils, out: &mut Field) {
    let vals = tau.values();
    let mut scratch: Vec<f64> = Vec::new();
    for (cell, list) in stencils.members.iter().enumerate() {
        if list.is_empty() {
            continue;
        }
        scratch.clear();
        scratch.extend(list.iter().map(|&i| vals[i as usize]));
        scratch.sort_unstable_by(f64::total_cmp);
        let sum: f64 = scratch.iter().sum();
        out.values_mut()[cell] = sum / list.len() as f64;
    }
}

/// θ = ρ - (τ^ave - ν), cell-wise.
pub fn theta(rho: &Field, tau_ave: &Field, params: &SimParams, out: &mut Field) {
    for ((o, &r), &ta) in out
        .values_mut()
        .iter_mut()
        .zip(rho.values())
        .zip(tau_ave.values())
    {
        *o = r - (ta - params.nu);
    }
}

/// Ahead-looking one-sided difference of θ along one axis, scaled by the
/// local w-component. Returns 0 when the ahead neighbor is missing.
#[inline]
fn directional_diff(
    theta: &Field,
    grid: &Grid,
    j: usize,
    k: usize,
    axis_x: bool,
    w_comp: f64,
) -> f64 {
    if w_comp == 0.0 {
        return 0.0;
    }
    let here = theta.at(j, k);
    let step: i64 = if w_comp > 0.0 { 1 } else { -1 };
    let (jn, kn) = if axis_x {
        (j as i64 + step, k as i64)
    } else {
        (j as i64, k as i64 + step)
    };
    if jn < 0 || kn < 0 || jn >= grid.nx as i64 || kn >= grid.ny as i64 {
        return 0.0;
    }
    let (jn, kn) = (jn as usize, kn as usize);
    if grid.is_wall(jn, kn) {
        return 0.0;
    }
    // Forward difference for w > 0, backward for w < 0: both sample the
    // cell ahead along the walking direction.
    let diff = if step > 0 {
        (theta.at(jn, kn) - here) / grid.dx
    } else {
        (here - theta.at(jn, kn)) / grid.dx
    };
    w_comp * diff
}

/// Full right-hand side ω of the u-equation from time-n fields.
pub fn u_rhs(
    u: &Field,
    theta: &Field,
    w: &DirectionField,
    grid: &Grid,
    params: &SimParams,
    out: &mut Field,
) {
    for k in 0..grid.ny {
        for j in 0..grid.nx {
            if grid.is_wall(j, k) {
                continue;
            }
            let th = theta.at(j, k);
            let damping = -params.eps * u.at(j, k);
            let omega = if th >= 0.0 {
                let (wx, wy) = w.at(j, k);
                let d_theta = directional_diff(theta, grid, j, k, true, wx)
                    + directional_diff(theta, grid, j, k, false, wy);
                damping + params.alpha_pos * (th - params.beta * d_theta).max(0.0)
            } else {
                damping + params.alpha_neg * th
            };
            out.set(j, k, omega);
        }
    }
}
