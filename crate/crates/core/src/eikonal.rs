//! Walking-distance field and unit direction field.
//!
//! Solves the stationary Eikonal problem ‖∇φ‖ = 1 with φ = 0 on exit cells
//! and φ = +∞ on walls, using fast sweeping (alternating Gauss-Seidel sweep
//! orders) on the standard first-order upwind discretization. The domain is
//! solved once per scenario on the empty geometry; the direction field
//! w = -∇φ/‖∇φ‖ then drives both transport equations.

use libm::sqrt;

use crate::error::Error;
use crate::grid::{Field, Grid};

/// Unit direction field w; (0, 0) on walls, the outward door normal on
/// exits. In 1D only `wx` is meaningful.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionField {
    pub wx: Field,
    pub wy: Field,
}

impl DirectionField {
    /// Constant field, useful for 1D corridors (w ≡ +1).
    pub fn uniform(grid: &Grid, wx: f64, wy: f64) -> Self {
        DirectionField {
            wx: Field::like(grid, wx),
            wy: Field::like(grid, wy),
        }
    }

    #[inline]
    pub fn at(&self, j: usize, k: usize) -> (f64, f64) {
        (self.wx.at(j, k), self.wy.at(j, k))
    }

    /// Swap axes: the transposed field has components exchanged.
    pub fn transposed(&self) -> DirectionField {
        DirectionField {
            wx: self.wy.transposed(),
            wy: self.wx.transposed(),
        }
    }
}

const CONVERGENCE_TOL: f64 = 1e-10;

/// Local update: smallest value at a cell compatible with the upwind
/// discretization, given the per-axis downwind minima `a` and `b`.
#[inline]
fn eikonal_update(a: f64, b: f64, h: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if !lo.is_finite() {
        return f64::INFINITY;
    }
    if hi - lo >= h {
        lo + h
    } else {
        let d = hi - lo;
        0.5 * (lo + hi + sqrt(2.0 * h * h - d * d))
    }
}

/// Solve for the walking distance φ by fast sweeping to a fixed point.
pub fn solve_eikonal(grid: &Grid) -> Result<Field, Error> {
    if !grid.has_exit() {
        return Err(Error::NoExit);
    }
    let (nx, ny, h) = (grid.nx, grid.ny, grid.dx);
    let mut phi = Field::like(grid, f64::INFINITY);
    for (j, k, _) in grid.exit_cells() {
        phi.set(j, k, 0.0);
    }

    let sweep = |phi: &mut Field, x_fwd: bool, y_fwd: bool| -> f64 {
        let mut max_update: f64 = 0.0;
        for kk in 0..ny {
            let k = if y_fwd { kk } else { ny - 1 - kk };
            for jj in 0..nx {
                let j = if x_fwd { jj } else { nx - 1 - jj };
                match grid.kind(j, k) {
                    crate::grid::CellKind::Wall | crate::grid::CellKind::Exit { .. } => continue,
                    _ => {}
                }
                let nbr = |jn: Option<usize>, kn: Option<usize>| -> f64 {
                    match (jn, kn) {
                        (Some(jn), Some(kn)) if !grid.is_wall(jn, kn) => phi.at(jn, kn),
                        _ => f64::INFINITY,
                    }
                };
                let a = nbr(j.checked_sub(1), Some(k))
                    .min(nbr(if j + 1 < nx { Some(j + 1) } else { None }, Some(k)));
                let b = nbr(Some(j), k.checked_sub(1))
                    .min(nbr(Some(j), if k + 1 < ny { Some(k + 1) } else { None }));
                let cand = eikonal_update(a, b, h);
                let cur = phi.at(j, k);
                if cand < cur {
                    phi.set(j, k, cand);
                    let upd = if cur.is_finite() { cur - cand } else { f64::INFINITY };
                    max_update = max_update.max(upd);
                }
            }
        }
        max_update
    };

    // Each round runs the four corner orderings. Characteristics are
    // straight in this monotone discretization, so the iteration reaches an
    // exact fixed point after a modest number of rounds.
    let max_rounds = 4 * (nx + ny) + 16;
    let mut last = f64::INFINITY;
    for _ in 0..max_rounds {
        let mut round_max: f64 = 0.0;
        for (x_fwd, y_fwd) in [(true, true), (false, true), (true, false), (false, false)] {
            round_max = round_max.max(sweep(&mut phi, x_fwd, y_fwd));
        }
        last = round_max;
        if round_max == 0.0 {
            return Ok(phi);
        }
    }
    if last < CONVERGENCE_TOL {
        Ok(phi)
    } else {
        Err(Error::EikonalDiverged { max_update: last })
    }
}

/// Per-axis upwind gradient component: signed descent toward the smaller
/// neighbor, reusing the stencil selection of the Eikonal solve. Exact
/// left/right ties yield 0 so mirrored grids produce mirrored directions;
/// `break_ties` instead resolves a tied descent toward the minus side, used
/// as a fallback for ridge cells whose symmetric gradient vanishes.
// The negated comparisons are NaN-safe on purpose: an unset phi must fall
// through to the zero component.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn descent_component(
    phi: &Field,
    grid: &Grid,
    j: usize,
    k: usize,
    axis_x: bool,
    break_ties: bool,
) -> f64 {
    let here = phi.at(j, k);
    let get = |jn: isize, kn: isize| -> f64 {
        if jn < 0
            || kn < 0
            || jn as usize >= grid.nx
            || kn as usize >= grid.ny
            || grid.is_wall(jn as usize, kn as usize)
        {
            f64::INFINITY
        } else {
            phi.at(jn as usize, kn as usize)
        }
    };
    let (minus, plus) = if axis_x {
        (get(j as isize - 1, k as isize), get(j as isize + 1, k as isize))
    } else {
        (get(j as isize, k as isize - 1), get(j as isize, k as isize + 1))
    };
    let m = minus.min(plus);
    if !(m < here) {
        return 0.0;
    }
    if minus == plus && !break_ties {
        return 0.0;
    }
    let g = (here - m) / grid.dx;
    if plus < minus {
        g
    } else {
        -g
    }
}

/// Derive the unit direction field from a solved distance field.
pub fn direction_field(phi: &Field, grid: &Grid) -> Result<DirectionField, Error> {
    let mut w = DirectionField {
        wx: Field::like(grid, 0.0),
        wy: Field::like(grid, 0.0),
    };
    for k in 0..grid.ny {
        for j in 0..grid.nx {
            match grid.kind(j, k) {
                crate::grid::CellKind::Wall => continue,
                crate::grid::CellKind::Exit { .. } => {
                    // Doors point out of the domain through the exit face.
                    let (ex, ey) = if j == grid.nx - 1 {
                        (1.0, 0.0)
                    } else if j == 0 {
                        (-1.0, 0.0)
                    } else if k == grid.ny - 1 {
                        (0.0, 1.0)
                    } else if k == 0 {
                        (0.0, -1.0)
                    } else {
                        return Err(Error::Config(alloc::format!(
                            "exit cell ({j},{k}) does not lie on the boundary"
                        )));
                    };
                    w.wx.set(j, k, ex);
                    w.wy.set(j, k, ey);
                }
                _ => {
                    let mut gx = descent_component(phi, grid, j, k, true, false);
                    let mut gy = if grid.is_1d() {
                        0.0
                    } else {
                        descent_component(phi, grid, j, k, false, false)
                    };
                    if gx == 0.0 && gy == 0.0 {
                        if !phi.at(j, k).is_finite() {
                            return Err(Error::UnreachableCell { j, k });
                        }
                        // Ridge cell: the descent is an exact tie on every
                        // axis that is not blocked (e.g. a cell equidistant
                        // between two exits with a wall behind it). The
                        // symmetric gradient vanishes but the cell is
                        // reachable, so resolve the tie toward the minus
                        // side to keep it draining.
                        gx = descent_component(phi, grid, j, k, true, true);
                        if !grid.is_1d() {
                            gy = descent_component(phi, grid, j, k, false, true);
                        }
                    }
                    let norm = sqrt(gx * gx + gy * gy);
                    if norm == 0.0 {
                        return Err(Error::UnreachableCell { j, k });
                    }
                    w.wx.set(j, k, gx / norm);
                    w.wy.set(j, k, gy / norm);
                }
            }
        }
    }
    Ok(w)
}
