//! Shared helpers for the integration suites: exact Riemann solutions for
//! the triangular-flux conservation law and for the quadratic wave flux,
//! plus L1 error measurement against a 1D run.

use crowdwave_core::solver1d::{Scenario1D, Solver1d};
use crowdwave_core::{Field, SimParams};

/// Exact self-similar solution of ∂t ρ + ∂x f(ρ, τ) = 0 with frozen
/// constant τ, triangular f, and Riemann data (ρl, ρr) at x = x0.
pub fn exact_lwr(rho_l: f64, rho_r: f64, tau: f64, p: &SimParams, x: f64, t: f64) -> f64 {
    let c_free = p.f_max / p.sigma;
    let c_cong = p.f_max / (p.sigma - tau);
    let f = |r: f64| -> f64 {
        if r <= p.sigma {
            c_free * r
        } else {
            p.f_max * (r - tau) / (p.sigma - tau)
        }
    };
    if t <= 0.0 {
        return if x < 0.0 { rho_l } else { rho_r };
    }
    let xi = x / t;
    let same_branch = (rho_l <= p.sigma) == (rho_r <= p.sigma);
    if (rho_l - rho_r).abs() == 0.0 {
        return rho_l;
    }
    if same_branch {
        // Linear branch: every jump is a contact moving at the branch slope.
        let c = if rho_l <= p.sigma { c_free } else { c_cong };
        return if xi < c { rho_l } else { rho_r };
    }
    if rho_l < rho_r {
        // Compressive across the apex: a single shock.
        let s = (f(rho_r) - f(rho_l)) / (rho_r - rho_l);
        if xi < s {
            rho_l
        } else {
            rho_r
        }
    } else {
        // Expansive across the apex: the fan degenerates to the apex state
        // between the two branch slopes.
        if xi < c_cong {
            rho_l
        } else if xi <= c_free {
            p.sigma
        } else {
            rho_r
        }
    }
}

/// Exact solution of ∂t u + ∂x (u²/2) = 0 with Riemann data at x = 0.
pub fn exact_burgers(ul: f64, ur: f64, x: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return if x < 0.0 { ul } else { ur };
    }
    let xi = x / t;
    if ul > ur {
        let s = 0.5 * (ul + ur);
        if xi < s {
            ul
        } else {
            ur
        }
    } else if xi < ul {
        ul
    } else if xi > ur {
        ur
    } else {
        xi
    }
}

/// Corridor solver with every coupling term switched off, so ρ follows the
/// plain conservation law with τ frozen at τ_* and u follows the plain wave
/// equation.
pub fn decoupled_solver(length: f64, dx: f64, t_end: f64) -> Solver1d {
    let mut params = SimParams::default().with_dx(dx);
    params.eps = 0.0;
    params.alpha_pos = 0.0;
    params.alpha_neg = 0.0;
    params.gamma = 0.0;
    params.t_end = t_end;
    Solver1d::new(Scenario1D::corridor(length, params)).unwrap()
}

/// Piecewise-constant Riemann state centered at `x0` for one field.
pub fn set_riemann(field: &mut Field, left: f64, right: f64, x0: f64, dx: f64) {
    for j in 0..field.nx {
        let x = (j as f64 + 0.5) * dx;
        field.set(j, 0, if x < x0 { left } else { right });
    }
}

/// L1 distance between a numeric profile and an exact self-similar solution
/// over the window [a, b], with the exact cell averages approximated by
/// subsampling.
pub fn l1_error(
    num: &Field,
    dx: f64,
    window: (f64, f64),
    exact: impl Fn(f64) -> f64,
) -> f64 {
    let m = 64;
    let mut err = 0.0;
    for j in 0..num.nx {
        let x_lo = j as f64 * dx;
        if x_lo + 0.5 * dx < window.0 || x_lo + 0.5 * dx > window.1 {
            continue;
        }
        let mut avg = 0.0;
        for s in 0..m {
            avg += exact(x_lo + (s as f64 + 0.5) * dx / m as f64);
        }
        avg /= m as f64;
        err += (num.at(j, 0) - avg).abs() * dx;
    }
    err
}

/// Run the decoupled corridor from a Riemann state in ρ and return the L1
/// error at `t_end` in the interior window.
pub fn lwr_riemann_error(rho_l: f64, rho_r: f64, dx: f64, t_end: f64) -> f64 {
    let length = 60.0;
    let x0 = 30.0;
    let mut solver = decoupled_solver(length, dx, t_end);
    let mut state = solver.initial_state();
    set_riemann(&mut state.rho, rho_l, rho_r, x0, dx);
    solver.run(&mut state, &mut []).unwrap();
    let p = solver.scenario().params;
    l1_error(&state.rho, dx, (15.0, 45.0), |x| {
        exact_lwr(rho_l, rho_r, p.tau_lo, &p, x - x0, t_end)
    })
}

/// Same for a Riemann state in u (ρ stays zero).
pub fn burgers_riemann_error(ul: f64, ur: f64, dx: f64, t_end: f64) -> f64 {
    let length = 60.0;
    let x0 = 30.0;
    let mut solver = decoupled_solver(length, dx, t_end);
    let mut state = solver.initial_state();
    set_riemann(&mut state.u, ul, ur, x0, dx);
    solver.run(&mut state, &mut []).unwrap();
    l1_error(&state.u, dx, (15.0, 45.0), |x| exact_burgers(ul, ur, x - x0, t_end))
}

/// Observed convergence orders for successive dx halvings.
#[allow(dead_code)]
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors
        .windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .collect()
}

/// Variant on a longer corridor for well-developed fans.
pub fn burgers_riemann_error_wide(ul: f64, ur: f64, dx: f64, t_end: f64) -> f64 {
    let length = 160.0;
    let x0 = 80.0;
    let mut solver = decoupled_solver(length, dx, t_end);
    let mut state = solver.initial_state();
    set_riemann(&mut state.u, ul, ur, x0, dx);
    solver.run(&mut state, &mut []).unwrap();
    l1_error(&state.u, dx, (45.0, 115.0), |x| exact_burgers(ul, ur, x - x0, t_end))
}
