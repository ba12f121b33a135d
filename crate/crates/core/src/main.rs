use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use thermopipe::analytic::ImpulseKernel;
use thermopipe::identify::{identify, Bounds, FitModel, IdentifyOptions, MeasurementSet, NelderMeadOptions};
use thermopipe::io::{fmt_sig9, write_output_csv};
use thermopipe::scenario::{output_file_name, run_scenario, Scenario};
use thermopipe::{Exec, ModelKind, PipeParameters, Result, Signal, SignalKind};

#[derive(Parser)]
#[command(name = "thermopipe", version, about = "Thermal plug-flow pipe models")]
struct Cli {
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the models of a scenario and write one CSV per model.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        /// Override the scenario's model list (repeatable), e.g. `dpde:5`.
        #[arg(long = "model")]
        models: Vec<String>,
        /// Output directory (overrides the scenario).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score every model of a scenario against its reference.
    Compare {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit heat-transfer coefficients to a measurement CSV.
    Identify(IdentifyArgs),
    /// Transport delay τ and characteristic time φ for a velocity signal.
    Delay {
        /// Velocity: `const:v`, `ramp:t0,t1,v0,v1`, `step:t,v0,v1` or `csv:path`.
        #[arg(long)]
        v: String,
        /// Distance travelled, m.
        #[arg(long)]
        distance: f64,
        /// Arrival time, s.
        #[arg(long)]
        t: f64,
    },
    /// Sample the constant-flow impulse response of an isolated pipe.
    Kernel {
        /// Position, m.
        #[arg(long)]
        z: f64,
        /// Velocity, m/s.
        #[arg(long)]
        v: f64,
        /// Parameter file (defaults to the simulation-study parameters).
        #[arg(long)]
        params: Option<PathBuf>,
        /// Requested sample spacing, s (capped at 0.1/h2).
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
        /// CSV destination; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct IdentifyArgs {
    /// CSV with columns t,Tin,Tout,Tw_out,Tm_probe,v,Tamb.
    #[arg(long)]
    measurements: PathBuf,
    /// Parameter file supplying geometry and materials (defaults to the
    /// measurement-study parameters).
    #[arg(long)]
    params: Option<PathBuf>,
    /// `pde:<n>`, `dpde:<n>` or `adapted_dde`.
    #[arg(long, default_value = "dpde:5")]
    model: String,
    #[arg(long, default_value_t = 0.05)]
    dt: f64,
    /// Add the wall residuals to the loss.
    #[arg(long)]
    include_wall: bool,
    /// Position of the Tm_probe column, m.
    #[arg(long)]
    probe_m: Option<f64>,
    /// Ambient temperature when the Tamb column is empty, °C.
    #[arg(long)]
    ambient_c: Option<f64>,
    /// Initial guess `alpha_mw,alpha_wa,epsilon`; defaults to the parameter file.
    #[arg(long, value_delimiter = ',')]
    initial: Option<Vec<f64>>,
    #[arg(long, default_value_t = 500)]
    max_iterations: usize,
}

fn exec(cli: &Cli) -> Exec {
    if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate { scenario, models, out } => {
            let mut sc = Scenario::from_file(scenario)?;
            if let Some(o) = out {
                sc.output_dir.clone_from(o);
            }
            let kinds: Vec<ModelKind> = if models.is_empty() {
                sc.all_models()
            } else {
                models.iter().map(|m| m.parse()).collect::<Result<_>>()?
            };
            std::fs::create_dir_all(&sc.output_dir).map_err(|e| thermopipe::Error::Io {
                path: sc.output_dir.clone(),
                source: e,
            })?;
            let runs = exec(cli).map(&kinds, |k| k.run(&sc.params, &sc.boundary, &sc.settings, &sc.probes));
            let mut failed = 0;
            for (k, r) in kinds.iter().zip(runs) {
                match r {
                    Ok(o) => {
                        let path = sc.output_dir.join(output_file_name(k));
                        write_output_csv(&path, &o)?;
                        println!("{k}: {}", path.display());
                    }
                    Err(e) => {
                        failed += 1;
                        eprintln!("{k}: {e}");
                    }
                }
            }
            if failed > 0 {
                return Err(thermopipe::Error::Unsupported {
                    model: "simulate".into(),
                    reason: format!("{failed} model(s) failed"),
                });
            }
        }
        Command::Compare { scenario, out } => {
            let mut sc = Scenario::from_file(scenario)?;
            if let Some(o) = out {
                sc.output_dir.clone_from(o);
            }
            let report = run_scenario(&sc, exec(cli))?;
            println!("reference {}  (report: {})", report.reference, sc.output_dir.join("report.toml").display());
            for m in &report.models {
                match &m.error {
                    Some(e) => println!("{:<18} FAILED  {e}", m.model),
                    None => {
                        let cols: Vec<String> = m
                            .errors
                            .iter()
                            .map(|c| format!("{} e2={:.4} einf={:.4}", c.column, c.e2, c.e_inf))
                            .collect();
                        println!("{:<18} {:>8.3}s  {}", m.model, m.runtime_s, cols.join("  "));
                    }
                }
            }
        }
        Command::Identify(a) => {
            let base = match &a.params {
                Some(p) => PipeParameters::from_file(p)?,
                None => PipeParameters::measurement_study(),
            };
            let meas = MeasurementSet::from_csv(&a.measurements, a.probe_m, a.ambient_c)?;
            let initial = match &a.initial {
                Some(v) if v.len() == 3 => (v[0], v[1], v[2]),
                Some(_) => {
                    return Err(thermopipe::Error::Config {
                        field: "initial".into(),
                        reason: "expected alpha_mw,alpha_wa,epsilon".into(),
                    })
                }
                None => (base.heat.alpha_mw, base.heat.alpha_wa, base.heat.epsilon),
            };
            let opts = IdentifyOptions {
                model: a.model.parse::<FitModel>()?,
                bounds: Bounds::default(),
                initial,
                dt: a.dt,
                include_wall: a.include_wall,
                optimizer: NelderMeadOptions {
                    max_iterations: a.max_iterations,
                    ..Default::default()
                },
            };
            let fit = identify(&meas, &base, &opts)?;
            println!("model = \"{}\"", fit.model);
            println!("alpha_mw = {}", fmt_sig9(fit.alpha_mw));
            println!("alpha_wa = {}", fmt_sig9(fit.alpha_wa));
            println!("epsilon = {}", fmt_sig9(fit.epsilon));
            println!("residual_e2 = {}", fmt_sig9(fit.residual));
            println!("loss = {}", fmt_sig9(fit.loss));
            println!("initial_loss = {}", fmt_sig9(fit.initial_loss));
            println!("iterations = {}", fit.iterations);
        }
        Command::Delay { v, distance, t } => {
            let sig = Signal::parse_spec("v", SignalKind::Velocity, v, None)?;
            let tau = sig.solve_delay(*t, *distance)?;
            println!("{tau:?}");
        }
        Command::Kernel { z, v, params, dt, out } => {
            let p = match params {
                Some(p) => PipeParameters::from_file(p)?,
                None => PipeParameters::simulation_study(),
            };
            let k = ImpulseKernel::from_params(&p, *v, *z, *dt)?;
            let mut text = String::from("t,g_cont,mass\n");
            let last = k.values.len() - 1;
            for (j, g) in k.values.iter().enumerate() {
                let w = if j == 0 || j == last { 0.5 * k.dt } else { k.dt };
                text.push_str(&format!("{},{},{}\n", fmt_sig9(j as f64 * k.dt), fmt_sig9(*g), fmt_sig9(w * g)));
            }
            match out {
                Some(path) => {
                    std::fs::write(path, text).map_err(|e| thermopipe::Error::Io {
                        path: path.clone(),
                        source: e,
                    })?;
                    println!("dirac_weight = {}", fmt_sig9(k.dirac_weight));
                    println!("mass = {}", fmt_sig9(k.mass()));
                }
                None => {
                    print!("{text}");
                    eprintln!("dirac_weight = {}", fmt_sig9(k.dirac_weight));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
