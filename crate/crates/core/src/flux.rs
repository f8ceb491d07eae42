//! Fundamental diagram and Godunov interface fluxes.
//!
//! The ρ-equation has the concave triangular flux
//!
//! ```text
//! f(ρ, τ) = (f_max/σ) ρ           ρ ≤ σ
//!         = f_max (ρ-τ)/(σ-τ)     ρ > σ
//! ```
//!
//! and its Godunov interface flux is min(S, R) of the sending/receiving
//! pair. The u-equation has the convex flux g(u) = u²/2, whose Godunov flux
//! is max(S, R) with the opposite sign structure.

use crate::params::SimParams;

/// Triangular fundamental diagram evaluated at (ρ, τ).
///
/// Continuous at ρ = σ (both branches meet at f_max); zero at ρ = τ.
#[inline]
pub fn fd_flux(rho: f64, tau: f64, p: &SimParams) -> f64 {
    assert!(rho <= tau, "fd_flux called with rho {rho} > tau {tau}");
    if rho <= p.sigma {
        p.f_max / p.sigma * rho
    } else {
        (rho - tau) / (p.sigma - tau) * p.f_max
    }
}

/// Demand of the upstream cell: the flux it can push across an interface.
#[inline]
pub fn sending_rho(rho: f64, tau: f64, p: &SimParams) -> f64 {
    if rho <= p.sigma {
        fd_flux(rho, tau, p)
    } else {
        p.f_max
    }
}

/// Supply of the downstream cell: the flux it can absorb.
#[inline]
pub fn receiving_rho(rho: f64, tau: f64, p: &SimParams) -> f64 {
    if rho <= p.sigma {
        p.f_max
    } else {
        fd_flux(rho, tau, p)
    }
}

/// Godunov flux for the ρ-equation across one interface; `left` sends,
/// `right` receives (orientation already resolved by the caller).
#[inline]
pub fn interface_flux_rho(left: (f64, f64), right: (f64, f64), p: &SimParams) -> f64 {
    sending_rho(left.0, left.1, p).min(receiving_rho(right.0, right.1, p))
}

/// Burgers flux g(u) = u²/2. The |w| factor of the 2D hatted fluxes is
/// applied by the caller.
#[inline]
pub fn g_flux(u: f64) -> f64 {
    0.5 * u * u
}

#[inline]
pub fn sending_u(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        g_flux(u)
    }
}

#[inline]
pub fn receiving_u(u: f64) -> f64 {
    if u <= 0.0 {
        g_flux(u)
    } else {
        0.0
    }
}

/// Godunov flux for the u-equation. This max{S, R} form is the exact
/// Godunov flux of the convex flux u²/2; the transonic rarefaction through
/// u = 0 yields exactly zero.
#[inline]
pub fn interface_flux_u(u_left: f64, u_right: f64) -> f64 {
    sending_u(u_left).max(receiving_u(u_right))
}
