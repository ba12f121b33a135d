//! Writes `tests/fixtures/synthetic_measurement.csv`: the 1.62 m rig
//! simulated with the 100-cell PDE, sampled once per second.
//!
//! cargo run --example synthetic_measurement [-- <path>]

use std::path::PathBuf;

use thermopipe::io::{write_measurement_csv, MeasurementTable};
use thermopipe::output::{probe_column, OUTLET, WALL};
use thermopipe::{Boundary, ModelKind, PipeParameters, RunSettings, Signal, SignalKind};

fn main() -> thermopipe::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/synthetic_measurement.csv"));

    let params = PipeParameters::measurement_study();
    let boundary = Boundary::new(
        Signal::new(
            "v",
            SignalKind::Velocity,
            vec![0.0, 150.0, 170.0, 400.0, 420.0, 600.0],
            vec![0.4, 0.4, 0.25, 0.25, 0.5, 0.5],
        )?,
        Signal::new(
            "Tin",
            SignalKind::Temperature,
            vec![0.0, 20.0, 80.0, 250.0, 300.0, 450.0, 480.0],
            vec![22.0, 22.0, 70.0, 70.0, 45.0, 45.0, 60.0],
        )?,
        Signal::constant("Tamb", SignalKind::Temperature, 21.0)?,
    )?;
    let probe = params.length() / 3.0;
    let mut settings = RunSettings::new(0.01, 600.0);
    settings.initial = Some(22.0);
    let out = ModelKind::Pde(100).run(&params, &boundary, &settings, &[probe])?;

    let every = 100;
    let pick = |c: &[f64]| c.iter().step_by(every).copied().collect::<Vec<f64>>();
    let t = pick(&out.times);
    let tab = MeasurementTable {
        t_in: boundary.inlet.sample(&t),
        t_out: pick(out.column(OUTLET).unwrap()),
        t_wall: pick(out.column(WALL).unwrap()),
        t_probe: pick(out.column(&probe_column(probe)).unwrap()),
        v: boundary.velocity.sample(&t),
        t_amb: boundary.ambient.sample(&t),
        t,
    };
    write_measurement_csv(&path, &tab)?;
    println!("{} rows -> {}", tab.t.len(), path.display());
    Ok(())
}
