//! Model constants and discretization parameters.

use alloc::format;

use crate::error::Error;

/// All model constants plus the grid spacing, time step, and horizon.
///
/// Units are meters and seconds; densities are ped/m in 1D and ped/m² in 2D.
/// `Default` carries the reference parameter set used by the built-in
/// scenarios (maximal walking speed `f_max / sigma` = 1 m/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    /// Peak flux of the fundamental diagram.
    pub f_max: f64,
    /// Critical density (apex of the triangle).
    pub sigma: f64,
    /// Lower bound τ_* for the maximal density.
    pub tau_lo: f64,
    /// Upper bound τ^* for the maximal density.
    pub tau_hi: f64,
    /// Lower bound u_* for the wave amplitude (negative).
    pub u_lo: f64,
    /// Upper bound u^* for the wave amplitude (positive).
    pub u_hi: f64,
    /// Damping rate ε of the wave equation.
    pub eps: f64,
    /// Source gain α⁺ for the compression branch (θ ≥ 0).
    pub alpha_pos: f64,
    /// Source gain α⁻ for the relaxation branch (θ < 0).
    pub alpha_neg: f64,
    /// Gradient length β in the source term Φ.
    pub beta: f64,
    /// Response rate γ of the maximal density, ∂t τ = γ u.
    pub gamma: f64,
    /// Sensory radius δ of the forward half-ball.
    pub delta: f64,
    /// Tolerance density ν in the threshold θ = ρ - (τ^ave - ν).
    pub nu: f64,
    /// Cell size.
    pub dx: f64,
    /// Time step.
    pub dt: f64,
    /// Final time.
    pub t_end: f64,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            f_max: 0.5,
            sigma: 0.5,
            tau_lo: 1.0,
            tau_hi: 5.5,
            u_lo: -1.5,
            u_hi: 1.0,
            eps: 0.1,
            alpha_pos: 1.0,
            alpha_neg: 0.1,
            beta: 1.0,
            gamma: 0.01,
            delta: 1.0,
            nu: 0.1,
            dx: 1.0,
            dt: 0.5,
            t_end: 600.0,
        }
    }
}

impl SimParams {
    /// Largest signal speed of the two hyperbolic equations.
    pub fn max_signal_speed(&self) -> f64 {
        let rho_speed = self.f_max / self.sigma;
        rho_speed.max(libm::fabs(self.u_lo)).max(self.u_hi)
    }

    /// Set the cell size and derive `dt = dx / 2` (the CFL rule used by all
    /// built-in scenarios).
    pub fn with_dx(mut self, dx: f64) -> Self {
        self.dx = dx;
        self.dt = dx / 2.0;
        self
    }

    // Negated comparisons are NaN-safe on purpose: NaN must fail validation.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), Error> {
        let positive = [
            ("f_max", self.f_max),
            ("sigma", self.sigma),
            ("tau_lo", self.tau_lo),
            ("delta", self.delta),
            ("nu", self.nu),
            ("dx", self.dx),
            ("dt", self.dt),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.tau_lo < self.tau_hi) {
            return Err(Error::Config(format!(
                "need tau_lo < tau_hi, got {} >= {}",
                self.tau_lo, self.tau_hi
            )));
        }
        if !(self.u_lo < 0.0 && 0.0 < self.u_hi) {
            return Err(Error::Config(format!(
                "need u_lo < 0 < u_hi, got [{}, {}]",
                self.u_lo, self.u_hi
            )));
        }
        // Rates and gains may be zero: that switches the matching term off.
        let nonnegative = [
            ("eps", self.eps),
            ("alpha_pos", self.alpha_pos),
            ("alpha_neg", self.alpha_neg),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ];
        for (name, v) in nonnegative {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be nonnegative, got {v}")));
            }
        }
        // The critical density must lie left of every admissible τ, otherwise
        // the congested branch of the triangle degenerates.
        if !(self.sigma < self.tau_lo) {
            return Err(Error::Config(format!(
                "need sigma < tau_lo, got {} >= {}",
                self.sigma, self.tau_lo
            )));
        }
        if self.t_end < 0.0 || !self.t_end.is_finite() {
            return Err(Error::Config(format!("t_end must be nonnegative, got {}", self.t_end)));
        }
        let speed = self.max_signal_speed();
        if self.dt * speed / self.dx > 1.0 + 1e-12 {
            return Err(Error::CflViolation {
                dt: self.dt,
                dx: self.dx,
                speed,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_set_is_valid() {
        SimParams::default().validate().unwrap();
    }

    #[test]
    fn default_max_speed_is_walking_speed_vs_wave_bound() {
        // f_max/sigma = 1, |u_lo| = 1.5.
        assert_eq!(SimParams::default().max_signal_speed(), 1.5);
    }

    #[test]
    fn cfl_violation_is_rejected() {
        let p = SimParams {
            dt: 1.0,
            ..SimParams::default()
        };
        assert!(matches!(p.validate(), Err(Error::CflViolation { .. })));
    }

    #[test]
    fn sigma_must_lie_below_tau_lo() {
        let p = SimParams {
            sigma: 1.2,
            ..SimParams::default()
        };
        assert!(matches!(p.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn with_dx_keeps_the_cfl_rule() {
        let p = SimParams::default().with_dx(0.5);
        assert_eq!(p.dt, 0.25);
        p.validate().unwrap();
    }
}
