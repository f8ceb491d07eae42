//! 1D corridor solver with gate, inflow, and outflow boundary logic.
//!
//! One step performs, all from time-n fields (Jacobi staging):
//!
//! 1. Godunov update of ρ with min(S, R) interface fluxes;
//! 2. Godunov update of u with max(S, R) fluxes plus Δt ω;
//! 3. τ ← τ + Δt γ u;
//! 4. clamp to the admissible box, lifting τ to keep ρ ≤ τ;
//! 5. gate post-conditions (downstream cells reset while closed).
//!
//! The closed gate is realized as a zero interface flux rather than by
//! mutating the upstream cell: it is equivalent to the ρ = τ ghost
//! prescription (a full cell receives nothing) and keeps mass accounting
//! exact.

use alloc::vec;
use alloc::vec::Vec;

use crate::eikonal::DirectionField;
use crate::error::Error;
use crate::flux::{interface_flux_rho, interface_flux_u};
use crate::grid::{clamp_state, Field, Grid, SimState};
use crate::nonlocal::{self, SensoryStencils};
use crate::observe::{Observer, StepRecord};
use crate::params::SimParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSpec {
    /// Gate position along the corridor (an interface location).
    pub position: f64,
    /// Opening time; `None` keeps the gate closed forever.
    pub opens_at: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InflowSpec {
    /// Density held in the left ghost cell while the inflow is active.
    pub density: f64,
    /// Inflow cutoff time.
    pub until: f64,
}

/// Constant-density span of the initial condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityBlock {
    pub from: f64,
    pub to: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario1D {
    pub length: f64,
    pub params: SimParams,
    pub gate: Option<GateSpec>,
    pub inflow: Option<InflowSpec>,
    /// Multiplier on the right-boundary outflow flux; 0 closes the corridor.
    pub right_outflow_factor: f64,
    pub initial: Vec<DensityBlock>,
    /// Stop early once the max cell change per step falls below this.
    pub steady_stop: Option<f64>,
}

impl Scenario1D {
    /// Empty corridor with free outflow on the right.
    pub fn corridor(length: f64, params: SimParams) -> Self {
        Scenario1D {
            length,
            params,
            gate: None,
            inflow: None,
            right_outflow_factor: 1.0,
            initial: Vec::new(),
            steady_stop: None,
        }
    }
}

pub struct Solver1d {
    scenario: Scenario1D,
    grid: Grid,
    w: DirectionField,
    stencils: SensoryStencils,
    n: usize,
    gate_iface: Option<usize>,
    // scratch reused across steps
    rho_prev: Field,
    tau_avg: Field,
    theta: Field,
    omega: Field,
    rho_flux: Vec<f64>,
    u_flux: Vec<f64>,
}

impl Solver1d {
    pub fn new(scenario: Scenario1D) -> Result<Self, Error> {
        let p = &scenario.params;
        p.validate()?;
        // NaN-safe on purpose.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(scenario.length > 0.0) {
            return Err(Error::Config(alloc::format!(
                "corridor length must be positive, got {}",
                scenario.length
            )));
        }
        let n = libm::round(scenario.length / p.dx) as usize;
        if n < 3 {
            return Err(Error::Config(alloc::format!("corridor of {n} cells is too short")));
        }
        let gate_iface = match &scenario.gate {
            Some(g) => {
                if !(g.position > 0.0 && g.position < scenario.length) {
                    return Err(Error::Config(alloc::format!(
                        "gate position {} outside the corridor (0, {})",
                        g.position,
                        scenario.length
                    )));
                }
                Some(libm::round(g.position / p.dx) as usize)
            }
            None => None,
        };
        if let Some(inflow) = &scenario.inflow {
            if inflow.density > p.tau_lo || inflow.density < 0.0 {
                return Err(Error::Config(alloc::format!(
                    "inflow density {} outside [0, tau_lo]",
                    inflow.density
                )));
            }
        }
        if !(0.0..=1.0).contains(&scenario.right_outflow_factor) {
            return Err(Error::Config(alloc::format!(
                "right outflow factor {} outside [0, 1]",
                scenario.right_outflow_factor
            )));
        }
        let grid = Grid::new(n, 1, p.dx);
        // People walk toward the right end of the corridor.
        let w = DirectionField::uniform(&grid, 1.0, 0.0);
        let stencils = nonlocal::build_stencils(&grid, &w, p);
        Ok(Solver1d {
            grid: grid.clone(),
            w,
            stencils,
            n,
            gate_iface,
            rho_prev: Field::like(&grid, 0.0),
            tau_avg: Field::like(&grid, 0.0),
            theta: Field::like(&grid, 0.0),
            omega: Field::like(&grid, 0.0),
            rho_flux: vec![0.0; n + 1],
            u_flux: vec![0.0; n + 1],
            scenario,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn scenario(&self) -> &Scenario1D {
        &self.scenario
    }

    fn gate_closed(&self, t: f64) -> bool {
        match &self.scenario.gate {
            Some(g) => g.opens_at.is_none_or(|open| t < open),
            None => false,
        }
    }

    /// Initial state: the configured ρ blocks over (τ_*, u = 0).
    pub fn initial_state(&self) -> SimState {
        let p = &self.scenario.params;
        let mut state = SimState::resting(&self.grid, p);
        for block in &self.scenario.initial {
            for j in 0..self.n {
                let x = (j as f64 + 0.5) * p.dx;
                if x >= block.from && x < block.to {
                    state.rho.set(j, 0, block.value);
                    let lifted = state.tau.at(j, 0).max(block.value);
                    state.tau.set(j, 0, lifted);
                }
            }
        }
        self.reset_downstream_of_gate(&mut state);
        state
    }

    fn reset_downstream_of_gate(&self, state: &mut SimState) {
        if let Some(gi) = self.gate_iface {
            if self.gate_closed(state.t) {
                for j in gi..self.n {
                    state.rho.set(j, 0, 0.0);
                    state.tau.set(j, 0, self.scenario.params.tau_lo);
                    state.u.set(j, 0, 0.0);
                }
            }
        }
    }

    /// Interface fluxes for ρ and u at time n, including boundary ghosts and
    /// the gate condition.
    fn compute_fluxes(&mut self, state: &SimState) {
        let p = self.scenario.params;
        let t = state.t;
        let n = self.n;
        let rho = &state.rho;
        let tau = &state.tau;
        let u = &state.u;

        let left_ghost = match &self.scenario.inflow {
            Some(inflow) if t < inflow.until => (inflow.density, p.tau_lo),
            _ => (0.0, p.tau_lo),
        };
        self.rho_flux[0] = interface_flux_rho(left_ghost, (rho.at(0, 0), tau.at(0, 0)), &p);
        for i in 1..n {
            self.rho_flux[i] = interface_flux_rho(
                (rho.at(i - 1, 0), tau.at(i - 1, 0)),
                (rho.at(i, 0), tau.at(i, 0)),
                &p,
            );
        }
        self.rho_flux[n] = interface_flux_rho((rho.at(n - 1, 0), tau.at(n - 1, 0)), (0.0, p.tau_lo), &p)
            * self.scenario.right_outflow_factor;

        // u ghosts are 0 on both sides.
        self.u_flux[0] = interface_flux_u(0.0, u.at(0, 0));
        for i in 1..n {
            self.u_flux[i] = interface_flux_u(u.at(i - 1, 0), u.at(i, 0));
        }
        self.u_flux[n] = interface_flux_u(u.at(n - 1, 0), 0.0);

        if let Some(gi) = self.gate_iface {
            if self.gate_closed(t) {
                self.rho_flux[gi] = 0.0;
                self.u_flux[gi] = 0.0;
            }
        }
    }

    /// Advance one time step.
    pub fn step(&mut self, state: &mut SimState) -> Result<(), Error> {
        let p = self.scenario.params;
        let lambda = p.dt / p.dx;
        let n = self.n;

        self.rho_prev.values_mut().copy_from_slice(state.rho.values());

        // Everything on the right-hand side is evaluated at time n.
        nonlocal::tau_ave(&state.tau, &self.stencils, &mut self.tau_avg);
        nonlocal::theta(&state.rho, &self.tau_avg, &p, &mut self.theta);
        nonlocal::u_rhs(&state.u, &self.theta, &self.w, &self.grid, &p, &mut self.omega);
        self.compute_fluxes(state);

        for j in 0..n {
            let r = state.rho.at(j, 0) - lambda * (self.rho_flux[j + 1] - self.rho_flux[j]);
            state.rho.set(j, 0, r);
        }
        // τ first: it must see u at time n.
        for j in 0..n {
            let tau = state.tau.at(j, 0) + p.dt * p.gamma * state.u.at(j, 0);
            state.tau.set(j, 0, tau);
        }
        for j in 0..n {
            let v = state.u.at(j, 0) - lambda * (self.u_flux[j + 1] - self.u_flux[j])
                + p.dt * self.omega.at(j, 0);
            state.u.set(j, 0, v);
        }

        clamp_state(state, &p, &self.grid)?;
        self.reset_downstream_of_gate(state);
        state.t += p.dt;
        Ok(())
    }

    /// Run from the given state to `t_end`, invoking the observers after
    /// every step (and once on the initial state).
    pub fn run(&mut self, state: &mut SimState, observers: &mut [&mut dyn Observer]) -> Result<(), Error> {
        let p = self.scenario.params;
        let steps = libm::ceil(p.t_end / p.dt - 1e-9) as usize;
        for obs in observers.iter_mut() {
            obs.record(&StepRecord {
                t: state.t,
                state,
                grid: &self.grid,
                rho_before: None,
                rho_fluxes: None,
            });
        }
        let mut prev = self.scenario.steady_stop.map(|_| state.clone());
        for _ in 0..steps {
            self.step(state)?;
            for obs in observers.iter_mut() {
                obs.record(&StepRecord {
                    t: state.t,
                    state,
                    grid: &self.grid,
                    rho_before: Some(&self.rho_prev),
                    rho_fluxes: Some(&self.rho_flux),
                });
            }
            if let (Some(tol), Some(prev_state)) = (self.scenario.steady_stop, prev.as_mut()) {
                let change = state
                    .rho
                    .max_abs_diff(&prev_state.rho)
                    .max(state.tau.max_abs_diff(&prev_state.tau))
                    .max(state.u.max_abs_diff(&prev_state.u));
                if change < tol {
                    break;
                }
                *prev_state = state.clone();
            }
        }
        Ok(())
    }

    /// Convenience: build the initial state and run to the end.
    pub fn run_to_end(&mut self, observers: &mut [&mut dyn Observer]) -> Result<SimState, Error> {
        let mut state = self.initial_state();
        self.run(&mut state, observers)?;
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::total_mass;

    fn base_params() -> SimParams {
        SimParams::default()
    }

    #[test]
    fn uniform_free_flow_step_matches_hand_evaluation() {
        // ρ ≡ 0.3, τ ≡ τ_*, u ≡ 0: interior fluxes telescope, θ = -0.6,
        // so u picks up Δt α⁻ θ = -0.03 in one step.
        let mut scenario = Scenario1D::corridor(100.0, base_params());
        scenario.initial.push(DensityBlock {
            from: 0.0,
            to: 100.0,
            value: 0.3,
        });
        let mut solver = Solver1d::new(scenario).unwrap();
        let mut state = solver.initial_state();
        solver.step(&mut state).unwrap();
        // Interior cells see equal fluxes on both sides.
        for j in 2..97 {
            assert!((state.rho.at(j, 0) - 0.3).abs() < 1e-15);
            assert!((state.u.at(j, 0) + 0.03).abs() < 1e-15);
        }
    }

    #[test]
    fn long_decay_pins_tau_at_its_lower_bound() {
        // Empty corridor: θ = -0.9 pulls u toward α⁻θ/ε = -0.9 while the
        // u = 0 right ghost feeds a rarefaction in from the outflow end, so
        // the profile settles negative and increasing toward the boundary;
        // γu < 0 keeps τ pressed against its lower bound throughout.
        let mut scenario = Scenario1D::corridor(20.0, base_params());
        scenario.params.t_end = 400.0;
        let mut solver = Solver1d::new(scenario).unwrap();
        let state = solver.run_to_end(&mut []).unwrap();
        for j in 0..20 {
            assert_eq!(state.tau.at(j, 0), 1.0);
            assert_eq!(state.rho.at(j, 0), 0.0);
            let u = state.u.at(j, 0);
            assert!((-0.9 - 1e-9..=0.0).contains(&u), "u = {u} at {j}");
            if j > 0 {
                assert!(u >= state.u.at(j - 1, 0) - 1e-12);
            }
        }
        assert!(state.u.at(0, 0) < -0.6);
    }

    #[test]
    fn zero_scenario_stays_zero() {
        let mut scenario = Scenario1D::corridor(50.0, base_params());
        scenario.params.t_end = 50.0;
        let mut solver = Solver1d::new(scenario).unwrap();
        let state = solver.run_to_end(&mut []).unwrap();
        assert_eq!(total_mass(&state.rho, solver.grid()), 0.0);
    }

    #[test]
    fn closed_gate_interface_carries_no_flux() {
        let mut scenario = Scenario1D::corridor(100.0, base_params());
        scenario.gate = Some(GateSpec {
            position: 66.0,
            opens_at: Some(400.0),
        });
        scenario.initial.push(DensityBlock {
            from: 60.0,
            to: 66.0,
            value: 0.9,
        });
        let mut solver = Solver1d::new(scenario).unwrap();
        let mut state = solver.initial_state();
        for _ in 0..20 {
            solver.step(&mut state).unwrap();
            assert_eq!(solver.rho_flux[66], 0.0);
            assert_eq!(solver.u_flux[66], 0.0);
            // Downstream cells stay evacuated while the gate is closed.
            for j in 66..100 {
                assert_eq!(state.rho.at(j, 0), 0.0);
            }
        }
    }

    #[test]
    fn inflow_cutoff_switches_the_left_ghost() {
        let mut scenario = Scenario1D::corridor(100.0, base_params());
        scenario.inflow = Some(InflowSpec {
            density: 0.5,
            until: 150.0,
        });
        let mut solver = Solver1d::new(scenario).unwrap();
        let mut state = solver.initial_state();
        state.t = 149.0;
        solver.compute_fluxes(&state);
        assert!(solver.rho_flux[0] > 0.0);
        state.t = 151.0;
        solver.compute_fluxes(&state);
        assert_eq!(solver.rho_flux[0], 0.0);
    }

    #[test]
    fn closed_corridor_conserves_mass_exactly() {
        let mut scenario = Scenario1D::corridor(60.0, base_params());
        scenario.right_outflow_factor = 0.0;
        scenario.initial.push(DensityBlock {
            from: 5.0,
            to: 35.0,
            value: 0.8,
        });
        let mut solver = Solver1d::new(scenario).unwrap();
        let mut state = solver.initial_state();
        let m0 = total_mass(&state.rho, solver.grid());
        for _ in 0..10_000 {
            solver.step(&mut state).unwrap();
        }
        let m1 = total_mass(&state.rho, solver.grid());
        assert!(
            ((m1 - m0) / m0).abs() < 1e-12,
            "relative mass drift {:e}",
            (m1 - m0) / m0
        );
    }

    #[test]
    fn frozen_tau_keeps_rho_in_the_invariant_box_without_clamping() {
        // Godunov monotonicity: with τ frozen, ρ never needs the clamp.
        let mut params = base_params();
        params.alpha_pos = 0.0;
        params.alpha_neg = 0.0;
        params.gamma = 0.0;
        let mut scenario = Scenario1D::corridor(80.0, params);
        scenario.initial.push(DensityBlock {
            from: 0.0,
            to: 40.0,
            value: 0.97,
        });
        let mut solver = Solver1d::new(scenario).unwrap();
        let mut state = solver.initial_state();
        for _ in 0..500 {
            solver.step(&mut state).unwrap();
            for j in 0..80 {
                let r = state.rho.at(j, 0);
                assert!((0.0..=1.0).contains(&r), "rho = {r} at cell {j}");
                assert_eq!(state.tau.at(j, 0), 1.0);
            }
        }
    }
}
