//! CSV and JSON artifact writers.
//!
//! Every float is written with 17 significant digits so that two runs of the
//! same configuration produce byte-identical files.

use crowdwave_core::analysis::{MassSeries, ScatterSeries};
use crowdwave_core::eikonal::DirectionField;
use crowdwave_core::grid::{Field, Grid, SimState};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// 17 significant digits — enough to reproduce any f64 bit pattern.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn writer(path: &Path) -> io::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_mass(path: &Path, series: &MassSeries) -> io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "t,mass")?;
    for s in &series.samples {
        writeln!(w, "{},{}", fmt(s.t), fmt(s.mass))?;
    }
    w.flush()
}

pub fn write_scatter(path: &Path, series: &ScatterSeries) -> io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "t,cell,rho,flux")?;
    for p in &series.points {
        writeln!(w, "{},{},{},{}", fmt(p.t), p.cell, fmt(p.rho), fmt(p.flux))?;
    }
    w.flush()
}

/// All snapshots in one long-format file: one row per cell per snapshot.
pub fn write_snapshots(
    path: &Path,
    snapshots: &[(f64, SimState)],
    grid: &Grid,
) -> io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "t,j,k,x,y,rho,tau,u")?;
    for (t, state) in snapshots {
        for k in 0..grid.ny {
            for j in 0..grid.nx {
                if grid.is_wall(j, k) {
                    continue;
                }
                let x = (j as f64 + 0.5) * grid.dx;
                let y = (k as f64 + 0.5) * grid.dx;
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{}",
                    fmt(*t),
                    j,
                    k,
                    fmt(x),
                    fmt(y),
                    fmt(state.rho.at(j, k)),
                    fmt(state.tau.at(j, k)),
                    fmt(state.u.at(j, k)),
                )?;
            }
        }
    }
    w.flush()
}

pub fn write_field(path: &Path, name: &str, field: &Field, grid: &Grid) -> io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "j,k,x,y,{name}")?;
    for k in 0..grid.ny {
        for j in 0..grid.nx {
            if grid.is_wall(j, k) {
                continue;
            }
            let x = (j as f64 + 0.5) * grid.dx;
            let y = (k as f64 + 0.5) * grid.dx;
            writeln!(
                w,
                "{},{},{},{},{}",
                j,
                k,
                fmt(x),
                fmt(y),
                fmt(field.at(j, k))
            )?;
        }
    }
    w.flush()
}

pub fn write_direction(path: &Path, dir: &DirectionField, grid: &Grid) -> io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "j,k,x,y,wx,wy")?;
    for k in 0..grid.ny {
        for j in 0..grid.nx {
            if grid.is_wall(j, k) {
                continue;
            }
            let x = (j as f64 + 0.5) * grid.dx;
            let y = (k as f64 + 0.5) * grid.dx;
            writeln!(
                w,
                "{},{},{},{},{},{}",
                j,
                k,
                fmt(x),
                fmt(y),
                fmt(dir.wx.at(j, k)),
                fmt(dir.wy.at(j, k)),
            )?;
        }
    }
    w.flush()
}

pub fn write_meta(path: &Path, meta: &serde_json::Value) -> io::Result<()> {
    let mut w = writer(path)?;
    serde_json::to_writer_pretty(&mut w, meta)?;
    writeln!(w)?;
    w.flush()
}
