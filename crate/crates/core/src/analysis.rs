//! Ex-post analysis: fundamental-diagram scatter, mass series, steady-state
//! slope fitting, and evacuation-time extraction.

use alloc::vec::Vec;

use crate::error::Error;
use crate::grid::Field;

/// One ex-post fundamental diagram sample: density of the sending cell and
/// the Godunov flux across the interface to its right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterPoint {
    pub t: f64,
    pub cell: usize,
    pub rho: f64,
    pub flux: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ScatterSeries {
    pub points: Vec<ScatterPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassSample {
    pub t: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Default)]
pub struct MassSeries {
    pub samples: Vec<MassSample>,
}

impl MassSeries {
    pub fn push(&mut self, t: f64, mass: f64) {
        self.samples.push(MassSample { t, mass });
    }

    pub fn initial_mass(&self) -> Option<f64> {
        self.samples.first().map(|s| s.mass)
    }
}

/// First time at which the mass drops below `frac` of its initial value.
pub fn evacuation_time(series: &MassSeries, frac: f64) -> Option<f64> {
    let m0 = series.initial_mass()?;
    series
        .samples
        .iter()
        .find(|s| s.mass < frac * m0)
        .map(|s| s.t)
}

/// Least-squares line through a window of a 1D density profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateFit {
    /// Fitted dρ/dx.
    pub slope: f64,
    /// Value of the fitted line at x = 0.
    pub intercept: f64,
    /// Root-mean-square residual over the window.
    pub residual: f64,
    /// Cell index window [start, end).
    pub window: (usize, usize),
}

/// Fit ρ(x) = a x + b over the cell window [start, end) of a 1D field.
pub fn fit_steady_slope(rho: &Field, dx: f64, window: (usize, usize)) -> Result<SteadyStateFit, Error> {
    let (start, end) = window;
    let len = end.saturating_sub(start);
    if len < 5 {
        return Err(Error::WindowTooShort { len });
    }
    let n = len as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for j in start..end {
        let x = (j as f64 + 0.5) * dx;
        let y = rho.at(j, 0);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mut ss = 0.0;
    for j in start..end {
        let x = (j as f64 + 0.5) * dx;
        let r = rho.at(j, 0) - (slope * x + intercept);
        ss += r * r;
    }
    Ok(SteadyStateFit {
        slope,
        intercept,
        residual: libm::sqrt(ss / n),
        window,
    })
}

/// Locate the linear ramp of a steady queue upstream of `gate_cell`: the
/// contiguous congested run (ρ > σ) ending at the gate, with the saturated
/// plateau near the gate (ρ close to τ^*) dropped and 15% trimmed from each
/// end of what remains.
pub fn queue_window(
    rho: &Field,
    gate_cell: usize,
    sigma: f64,
    tau_hi: f64,
) -> Option<(usize, usize)> {
    let mut start = gate_cell;
    while start > 0 && rho.at(start - 1, 0) > sigma {
        start -= 1;
    }
    if start >= gate_cell {
        return None;
    }
    let mut end = gate_cell;
    while end > start && rho.at(end - 1, 0) > tau_hi - 0.2 {
        end -= 1;
    }
    let len = end - start;
    let trim = len * 15 / 100;
    let (start, end) = (start + trim, end - trim);
    if end > start {
        Some((start, end))
    } else {
        None
    }
}

/// Mean flux per density bin over `[0, rho_max)`; empty bins are skipped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdBin {
    pub rho_mid: f64,
    pub mean_flux: f64,
    pub count: usize,
}

pub fn binned_means(series: &ScatterSeries, n_bins: usize, rho_max: f64) -> Vec<FdBin> {
    let mut sums = alloc::vec![0.0; n_bins];
    let mut counts = alloc::vec![0usize; n_bins];
    let width = rho_max / n_bins as f64;
    for p in &series.points {
        if p.rho < 0.0 || p.rho >= rho_max {
            continue;
        }
        let b = ((p.rho / width) as usize).min(n_bins - 1);
        sums[b] += p.flux;
        counts[b] += 1;
    }
    (0..n_bins)
        .filter(|&b| counts[b] > 0)
        .map(|b| FdBin {
            rho_mid: (b as f64 + 0.5) * width,
            mean_flux: sums[b] / counts[b] as f64,
            count: counts[b],
        })
        .collect()
}
