//! Command-line front end: run scenarios, sweep parameters, dump the
//! walking-distance field, or validate a configuration.

mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use config::Scenario;
use crowdwave_core::analysis::evacuation_time;
use crowdwave_core::grid::free_mass;
use crowdwave_core::observe::{MassCollector, ScatterCollector, SnapshotCollector};
use crowdwave_core::solver1d::Solver1d;
use crowdwave_core::solver2d::Solver2d;
use crowdwave_core::SimParams;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

#[derive(Parser)]
#[command(
    name = "crowdwave",
    about = "Pedestrian flow simulator with a dynamic maximal density",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Built-in scenario (test1 | test2 | test3 | test4a | test4b) or
    /// `custom` with --config.
    #[arg(long)]
    scenario: String,
    /// Custom scenario file (JSON), required with --scenario custom.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter override, repeatable: --set nu=0.2 --set dx=1.
    /// Setting dx re-derives dt = dx/2 unless dt is set too.
    #[arg(long = "set", value_parser = config::parse_set)]
    sets: Vec<(String, f64)>,
}

#[derive(Args)]
struct OutArgs {
    /// Output directory; defaults to $CROWDSIM_OUT/<scenario> or
    /// runs/<scenario>.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write mass.csv, snapshots.csv, meta.json
    /// (and fd_scatter.csv for corridor scenarios).
    Run {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Seconds of simulated time between state snapshots.
        #[arg(long, default_value_t = 100.0)]
        snapshot_every: f64,
        /// Seconds of simulated time between mass samples.
        #[arg(long, default_value_t = 1.0)]
        mass_every: f64,
    },
    /// Run the same scenario once per value of one parameter, in parallel.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Parameter to sweep (any --set name).
        #[arg(long)]
        param: String,
        /// Comma-separated values, e.g. 0,0.05,0.2,1.
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
        /// Worker threads; defaults to one per value capped at the CPU count.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value_t = 100.0)]
        snapshot_every: f64,
        #[arg(long, default_value_t = 1.0)]
        mass_every: f64,
    },
    /// Solve only the walking-distance field and write phi.csv and
    /// direction.csv (room scenarios).
    Eikonal {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Resolve a configuration, check its invariants, and run a short
    /// simulation to confirm the state stays in bounds.
    Validate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Number of steps to simulate during validation.
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
}

/// (swept value, per-run result, output directory) of one sweep job.
type SweepOutcome = (f64, Result<(f64, f64, Option<f64>), String>, PathBuf);

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            scenario,
            out,
            snapshot_every,
            mass_every,
        } => cmd_run(&scenario, &out, snapshot_every, mass_every),
        Command::Sweep {
            scenario,
            out,
            param,
            values,
            workers,
            snapshot_every,
            mass_every,
        } => cmd_sweep(&scenario, &out, &param, &values, workers, snapshot_every, mass_every),
        Command::Eikonal { scenario, out } => cmd_eikonal(&scenario, &out),
        Command::Validate { scenario, steps } => cmd_validate(&scenario, steps),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn out_dir(out: &OutArgs, scenario_name: &str) -> PathBuf {
    match &out.out {
        Some(p) => p.clone(),
        None => {
            let root = std::env::var_os("CROWDSIM_OUT")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("runs"));
            root.join(scenario_name)
        }
    }
}

fn params_json(p: &SimParams) -> serde_json::Value {
    json!({
        "f_max": p.f_max, "sigma": p.sigma,
        "tau_lo": p.tau_lo, "tau_hi": p.tau_hi,
        "u_lo": p.u_lo, "u_hi": p.u_hi,
        "eps": p.eps, "alpha_pos": p.alpha_pos, "alpha_neg": p.alpha_neg,
        "beta": p.beta, "gamma": p.gamma, "delta": p.delta, "nu": p.nu,
        "dx": p.dx, "dt": p.dt, "t_end": p.t_end,
    })
}

fn stride_for(seconds: f64, dt: f64) -> usize {
    ((seconds / dt).round() as usize).max(1)
}

/// Runs one resolved scenario into `dir`. Returns (final t, final free mass,
/// evacuation time at the 1% threshold if the mass series crosses it).
fn run_into(
    scenario: Scenario,
    dir: &Path,
    snapshot_every: f64,
    mass_every: f64,
) -> Result<(f64, f64, Option<f64>), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let p = *scenario.params();
    let mut mass = MassCollector::new(stride_for(mass_every, p.dt));
    let mut snaps = SnapshotCollector::new(stride_for(snapshot_every, p.dt));

    let (final_t, final_mass, grid, scatter) = match scenario {
        Scenario::Corridor(s) => {
            let mut solver = Solver1d::new(s).map_err(|e| format!("{e:?}"))?;
            let mut state = solver.initial_state();
            let mut scatter = ScatterCollector::new();
            solver
                .run(&mut state, &mut [&mut mass, &mut snaps, &mut scatter])
                .map_err(|e| format!("{e:?}"))?;
            let grid = solver.grid().clone();
            let m = free_mass(&state.rho, &grid);
            (state.t, m, grid, Some(scatter.series))
        }
        Scenario::Room(s) => {
            let mut solver = Solver2d::new(s).map_err(|e| format!("{e:?}"))?;
            let mut state = solver.initial_state();
            solver
                .run(&mut state, &mut [&mut mass, &mut snaps])
                .map_err(|e| format!("{e:?}"))?;
            let grid = solver.grid().clone();
            let m = free_mass(&state.rho, &grid);
            (state.t, m, grid, None)
        }
    };

    let io_err = |e: std::io::Error| format!("write failed in {}: {e}", dir.display());
    output::write_mass(&dir.join("mass.csv"), &mass.series).map_err(io_err)?;
    output::write_snapshots(&dir.join("snapshots.csv"), &snaps.snapshots, &grid).map_err(io_err)?;
    if let Some(series) = scatter {
        output::write_scatter(&dir.join("fd_scatter.csv"), &series).map_err(io_err)?;
    }
    let evac = evacuation_time(&mass.series, 0.01);
    Ok((final_t, final_mass, evac))
}

fn cmd_run(
    args: &ScenarioArgs,
    out: &OutArgs,
    snapshot_every: f64,
    mass_every: f64,
) -> Result<(), String> {
    let scenario = config::resolve(&args.scenario, args.config.as_deref(), &args.sets)
        .map_err(|e| e.to_string())?;
    let dir = out_dir(out, &args.scenario);
    let params = params_json(scenario.params());
    let (final_t, final_mass, evac) = run_into(scenario, &dir, snapshot_every, mass_every)?;
    let meta = json!({
        "scenario": args.scenario,
        "overrides": args.sets.iter().map(|(k, v)| json!({k: v})).collect::<Vec<_>>(),
        "params": params,
        "final_t": final_t,
        "final_free_mass": final_mass,
        "evacuation_time": evac,
    });
    output::write_meta(&dir.join("meta.json"), &meta).map_err(|e| e.to_string())?;
    println!(
        "{}: t = {}, free mass = {}{}",
        dir.display(),
        final_t,
        final_mass,
        match evac {
            Some(t) => format!(", evacuated at t = {t}"),
            None => String::new(),
        }
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    args: &ScenarioArgs,
    out: &OutArgs,
    param: &str,
    values: &[f64],
    workers: Option<usize>,
    snapshot_every: f64,
    mass_every: f64,
) -> Result<(), String> {
    if values.is_empty() {
        return Err("sweep needs at least one --values entry".into());
    }
    // Resolve once per value so override order stays: base sets, then the
    // swept parameter.
    let mut jobs = Vec::new();
    for &v in values {
        let mut sets = args.sets.clone();
        sets.push((param.to_string(), v));
        let scenario = config::resolve(&args.scenario, args.config.as_deref(), &sets)
            .map_err(|e| e.to_string())?;
        jobs.push((v, scenario));
    }
    let root = out_dir(out, &args.scenario);
    let workers = workers
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .clamp(1, jobs.len());

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<SweepOutcome>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some((v, scenario)) = jobs.get(i) else {
                    break;
                };
                let dir = root.join(format!("{param}_{v}"));
                let res = run_into(scenario.clone(), &dir, snapshot_every, mass_every);
                results.lock().unwrap().push((*v, res, dir));
            });
        }
    });

    let mut results = results.into_inner().unwrap();
    results.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut summary = Vec::new();
    let mut failed = false;
    for (v, res, dir) in &results {
        match res {
            Ok((final_t, final_mass, evac)) => {
                println!(
                    "{param} = {v}: t = {final_t}, free mass = {final_mass}{}",
                    match evac {
                        Some(t) => format!(", evacuated at t = {t}"),
                        None => String::new(),
                    }
                );
                summary.push(json!({
                    "value": v,
                    "dir": dir.file_name().map(|n| n.to_string_lossy().into_owned()),
                    "final_t": final_t,
                    "final_free_mass": final_mass,
                    "evacuation_time": evac,
                }));
            }
            Err(e) => {
                eprintln!("{param} = {v}: failed: {e}");
                failed = true;
            }
        }
    }
    let meta = json!({
        "scenario": args.scenario,
        "param": param,
        "overrides": args.sets.iter().map(|(k, v)| json!({k: v})).collect::<Vec<_>>(),
        "runs": summary,
    });
    std::fs::create_dir_all(&root).map_err(|e| e.to_string())?;
    output::write_meta(&root.join("meta.json"), &meta).map_err(|e| e.to_string())?;
    if failed {
        Err("one or more sweep runs failed".into())
    } else {
        Ok(())
    }
}

fn cmd_eikonal(args: &ScenarioArgs, out: &OutArgs) -> Result<(), String> {
    let scenario = config::resolve(&args.scenario, args.config.as_deref(), &args.sets)
        .map_err(|e| e.to_string())?;
    let Scenario::Room(s) = scenario else {
        return Err("eikonal needs a room scenario (corridors have a trivial field)".into());
    };
    let solver = Solver2d::new(s).map_err(|e| format!("{e:?}"))?;
    let dir = out_dir(out, &args.scenario);
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let grid = solver.grid();
    let phi = solver
        .distance_field()
        .ok_or("scenario has no exits, so no distance field")?;
    output::write_field(&dir.join("phi.csv"), "phi", phi, grid).map_err(|e| e.to_string())?;
    output::write_direction(&dir.join("direction.csv"), solver.direction_field(), grid)
        .map_err(|e| e.to_string())?;
    println!("{}: wrote phi.csv and direction.csv", dir.display());
    Ok(())
}

fn cmd_validate(args: &ScenarioArgs, steps: usize) -> Result<(), String> {
    let scenario = config::resolve(&args.scenario, args.config.as_deref(), &args.sets)
        .map_err(|e| e.to_string())?;
    let p = *scenario.params();
    let check = |rho: f64, tau: f64, u: f64| -> Result<(), String> {
        if !(0.0..=tau).contains(&rho) || !(p.tau_lo..=p.tau_hi).contains(&tau)
            || !(p.u_lo..=p.u_hi).contains(&u)
        {
            return Err(format!("state out of bounds: rho = {rho}, tau = {tau}, u = {u}"));
        }
        Ok(())
    };
    match scenario {
        Scenario::Corridor(s) => {
            let mut solver = Solver1d::new(s).map_err(|e| format!("{e:?}"))?;
            let mut state = solver.initial_state();
            for _ in 0..steps {
                solver.step(&mut state).map_err(|e| format!("{e:?}"))?;
            }
            let grid = solver.grid();
            for j in 0..grid.nx {
                check(state.rho.at(j, 0), state.tau.at(j, 0), state.u.at(j, 0))?;
            }
        }
        Scenario::Room(s) => {
            let mut solver = Solver2d::new(s).map_err(|e| format!("{e:?}"))?;
            let mut state = solver.initial_state();
            for _ in 0..steps {
                solver.step(&mut state).map_err(|e| format!("{e:?}"))?;
            }
            let grid = solver.grid().clone();
            for k in 0..grid.ny {
                for j in 0..grid.nx {
                    if grid.is_wall(j, k) {
                        continue;
                    }
                    check(state.rho.at(j, k), state.tau.at(j, k), state.u.at(j, k))?;
                }
            }
        }
    }
    println!(
        "{}: parameters valid, state in bounds after {steps} steps",
        args.scenario
    );
    Ok(())
}
