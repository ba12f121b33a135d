use std::path::Path;

use thermopipe::identify::{identify, minimize, Bounds, FitModel, IdentifyOptions, MeasurementSet, NelderMeadOptions};
use thermopipe::metrics::{max_error, residuals, rms_error};
use thermopipe::{Boundary, Error, ModelKind, PipeParameters, RunSettings, Signal, SignalKind};

fn temp(t: Vec<f64>, y: Vec<f64>) -> Signal {
    Signal::new("x", SignalKind::Temperature, t, y).unwrap()
}

#[test]
fn metric_properties() {
    let t: Vec<f64> = (0..200).map(|k| k as f64 * 0.5).collect();
    let a = temp(t.clone(), t.iter().map(|x| (0.1 * x).sin()).collect());
    let b = temp(t.clone(), t.iter().map(|x| (0.1 * x).sin() + 0.01 * x).collect());
    assert_eq!(rms_error(&a, &a).unwrap(), 0.0);
    let (e2, einf) = (rms_error(&a, &b).unwrap(), max_error(&a, &b).unwrap());
    assert!(e2 <= einf && e2 > 0.0);
    assert_eq!(rms_error(&a, &b).unwrap(), rms_error(&b, &a).unwrap());
    assert!((einf - 0.01 * 99.5).abs() < 1e-12);
}

#[test]
fn resampling_on_the_reference_grid_is_idempotent() {
    let fine: Vec<f64> = (0..=1000).map(|k| k as f64 * 0.1).collect();
    let cand = temp(fine.clone(), fine.iter().map(|x| 20.0 + x.sqrt()).collect());
    let coarse: Vec<f64> = (0..=33).map(|k| k as f64 * 3.0).collect();
    let reference = temp(coarse.clone(), coarse.iter().map(|x| 20.0 + 0.1 * x).collect());
    let once = temp(coarse.clone(), cand.sample(&coarse));
    assert_eq!(residuals(&reference, &cand).unwrap(), residuals(&reference, &once).unwrap());
    // rows outside the candidate's support are dropped
    let short = temp(vec![10.0, 20.0], vec![0.0, 0.0]);
    assert_eq!(residuals(&reference, &short).unwrap().len(), 3);
    let disjoint = temp(vec![200.0, 300.0], vec![0.0, 0.0]);
    assert!(matches!(residuals(&reference, &disjoint), Err(Error::EmptyOverlap)));
}

#[test]
fn nelder_mead_respects_the_box() {
    // unconstrained minimum at (3, −1) lies outside [0, 2]²
    let mut f = |x: &[f64]| (x[0] - 3.0).powi(2) + (x[1] + 1.0).powi(2);
    let m = minimize(&mut f, &[1.0, 1.0], &[0.0, 0.0], &[2.0, 2.0], &NelderMeadOptions::default());
    assert!(m.converged);
    assert!((m.x[0] - 2.0).abs() < 1e-5 && m.x[1].abs() < 1e-5, "{:?}", m.x);
}

fn synthetic(p: &PipeParameters, kind: ModelKind) -> MeasurementSet {
    let b = Boundary::ramp_study();
    let out = kind.run(p, &b, &RunSettings::new(0.1, 200.0), &[]).unwrap();
    let grid: Vec<f64> = (0..=200).map(|k| k as f64).collect();
    let sampled = |name: &str| temp(grid.clone(), out.series(name).unwrap().sample(&grid));
    MeasurementSet {
        boundary: b,
        outlet: sampled(thermopipe::output::OUTLET),
        wall: out.column(thermopipe::output::WALL).map(|_| sampled(thermopipe::output::WALL)),
        probe: None,
    }
}

fn options(model: FitModel, initial: (f64, f64, f64)) -> IdentifyOptions {
    IdentifyOptions {
        model,
        bounds: Bounds::default(),
        initial,
        dt: 0.1,
        include_wall: false,
        optimizer: NelderMeadOptions::default(),
    }
}

#[test]
fn recovers_epsilon_of_the_adapted_model() {
    let base = PipeParameters::simulation_study();
    let meas = synthetic(&base.with_epsilon(0.91).unwrap(), ModelKind::AdaptedDde);
    let fit = identify(&meas, &base, &options(FitModel::AdaptedDde, (1000.0, 80.0, 0.4))).unwrap();
    assert!((fit.epsilon - 0.91).abs() < 1e-3, "{}", fit.epsilon);
    assert!(fit.loss < fit.initial_loss);
    assert!(fit.residual < 1e-3);
}

#[test]
fn recovers_coefficients_of_a_coarse_pde() {
    let base = PipeParameters::simulation_study();
    let truth = base.with_alphas(1500.0, 50.0).unwrap();
    let meas = synthetic(&truth, ModelKind::Pde(20));
    let fit = identify(&meas, &base, &options(FitModel::Pde(20), (1000.0, 80.0, 1.0))).unwrap();
    assert!((fit.alpha_mw / 1500.0 - 1.0).abs() < 0.02, "{}", fit.alpha_mw);
    assert!((fit.alpha_wa / 50.0 - 1.0).abs() < 0.02, "{}", fit.alpha_wa);
}

#[test]
fn iteration_cap_reports_the_best_point() {
    let base = PipeParameters::simulation_study();
    let meas = synthetic(&base.with_epsilon(0.91).unwrap(), ModelKind::AdaptedDde);
    let mut opts = options(FitModel::AdaptedDde, (1000.0, 80.0, 0.4));
    opts.optimizer.max_iterations = 2;
    match identify(&meas, &base, &opts) {
        Err(Error::NotConverged { iterations, best, .. }) => {
            assert_eq!(iterations, 2);
            assert_eq!(best.len(), 1);
        }
        other => panic!("expected NotConverged, got {other:?}"),
    }
}

#[test]
fn invalid_requests_are_rejected() {
    let base = PipeParameters::simulation_study();
    let meas = synthetic(&base, ModelKind::AdaptedDde);
    assert!(identify(&meas, &base, &options(FitModel::Pde(5), (5.0, 80.0, 1.0))).is_err());
    let mut opts = options(FitModel::Pde(5), (1000.0, 80.0, 1.0));
    opts.include_wall = true;
    assert!(identify(&meas, &base, &opts).is_err());
    assert!("ode".parse::<FitModel>().is_err());
    assert_eq!("dpde:5".parse::<FitModel>().unwrap(), FitModel::Dpde(5));
}

#[test]
fn fixture_is_ingested() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/synthetic_measurement.csv");
    let l = PipeParameters::measurement_study().length();
    let m = MeasurementSet::from_csv(&path, Some(l / 3.0), None).unwrap();
    assert_eq!(m.outlet.len(), 601);
    assert!(m.wall.is_some());
    assert_eq!(m.probe.as_ref().unwrap().0, l / 3.0);
    assert!(MeasurementSet::from_csv(&path, None, None).unwrap().probe.is_none());
}
