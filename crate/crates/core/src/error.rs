//! Error type shared by the solver modules.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Invalid parameter set or scenario description.
    Config(String),
    /// The grid has no exit cell, so the Eikonal problem is undefined.
    NoExit,
    /// Fast sweeping did not reach a fixed point within the iteration cap.
    EikonalDiverged { max_update: f64 },
    /// An interior cell has no downhill neighbor in the distance field.
    UnreachableCell { j: usize, k: usize },
    /// A field value became non-finite during time stepping.
    NonFinite {
        field: &'static str,
        j: usize,
        k: usize,
    },
    /// The CFL bound dt * max_speed / dx <= 1 is violated.
    CflViolation { dt: f64, dx: f64, speed: f64 },
    /// A least-squares window shorter than the minimum of 5 cells.
    WindowTooShort { len: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::NoExit => write!(f, "grid has no exit cell"),
            Error::EikonalDiverged { max_update } => {
                write!(f, "eikonal solve did not converge (last update {max_update:e})")
            }
            Error::UnreachableCell { j, k } => {
                write!(f, "cell ({j},{k}) is unreachable from every exit")
            }
            Error::NonFinite { field, j, k } => {
                write!(f, "non-finite {field} value at cell ({j},{k})")
            }
            Error::CflViolation { dt, dx, speed } => {
                write!(f, "CFL violation: dt={dt}, dx={dx}, max signal speed {speed}")
            }
            Error::WindowTooShort { len } => {
                write!(f, "fit window of {len} cells is shorter than 5 cells")
            }
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}
