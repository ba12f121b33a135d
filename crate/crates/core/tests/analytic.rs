use approx::assert_relative_eq;
use thermopipe::analytic::{bessel_i1, convolve_constant_flow, dirac_weight, impulse_response, ImpulseKernel};
use thermopipe::output::OUTLET;
use thermopipe::{Exec, PipeParameters, Signal, SignalKind};

fn isolated() -> PipeParameters {
    PipeParameters::simulation_study().insulated()
}

#[test]
fn series_agrees_with_bessel_form() {
    let h = isolated().h();
    let v = 0.5;
    let k = h.h1 * h.h2 / v;
    // low-discrepancy points over z in (0, 5], t in (0, 200]
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for j in 1..=50 {
        let z = 5.0 * ((j as f64 * phi).fract()).max(1e-3);
        let t = 200.0 * ((j as f64 * phi * phi + 0.37).fract()).max(1e-3);
        let bessel = (-h.h1 * z / v - h.h2 * t).exp() * (k * z / t).sqrt() * bessel_i1(2.0 * (k * z * t).sqrt());
        let series = impulse_response(z, t, h.h1, h.h2, v);
        assert_relative_eq!(series, bessel, max_relative = 1e-10);
    }
}

#[test]
fn response_is_finite_at_time_zero() {
    let h = isolated().h();
    let g0 = impulse_response(5.0, 0.0, h.h1, h.h2, 0.5);
    let kz = h.h1 * h.h2 / 0.5 * 5.0;
    assert_relative_eq!(g0, (-h.h1 * 5.0 / 0.5).exp() * kz, max_relative = 1e-14);
}

/// Composite Simpson on `[0, end]` with `2m` intervals.
fn simpson(f: impl Fn(f64) -> f64, end: f64, m: usize) -> f64 {
    let h = end / (2 * m) as f64;
    let mut s = f(0.0) + f(end);
    for i in 1..2 * m {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn total_mass_is_one() {
    let h = isolated().h();
    for &(z, v) in &[(5.0, 0.5), (1.0, 0.2), (2.5, 1.5)] {
        let k = ImpulseKernel::new(z, h.h1, h.h2, v, 0.05).unwrap();
        assert!((k.mass() - 1.0).abs() < 1e-6, "z={z} v={v}: {}", k.mass());
        let end = 2.0 * k.values.len() as f64 * k.dt;
        let quad = simpson(|t| impulse_response(z, t, h.h1, h.h2, v), end, 200_000);
        assert!((quad + dirac_weight(z, h.h1, v) - 1.0).abs() < 1e-8, "{quad}");
    }
}

#[test]
fn sampling_step_is_capped() {
    let h = isolated().h();
    let k = ImpulseKernel::new(5.0, h.h1, h.h2, 0.5, 10.0).unwrap();
    assert_eq!(k.dt, 0.1 / h.h2);
}

#[test]
fn constant_inlet_passes_with_unit_gain() {
    let p = isolated();
    let inlet = Signal::constant("Tin", SignalKind::Temperature, 40.0).unwrap();
    let v = Signal::constant("v", SignalKind::Velocity, 0.5).unwrap();
    let times: Vec<f64> = (0..=100).map(|k| k as f64).collect();
    let out = convolve_constant_flow(&inlet, &p, &v, 5.0, &times, 0.05, Exec::Sequential).unwrap();
    for y in out.column(OUTLET).unwrap() {
        assert!((y - 40.0).abs() < 1e-6, "{y}");
    }
}

#[test]
fn parallel_and_sequential_convolutions_agree() {
    let p = isolated();
    let inlet = Signal::ramp("Tin", SignalKind::Temperature, 0.0, 50.0, 20.0, 60.0).unwrap();
    let v = Signal::constant("v", SignalKind::Velocity, 0.5).unwrap();
    let times: Vec<f64> = (0..=400).map(|k| k as f64 * 0.5).collect();
    let a = convolve_constant_flow(&inlet, &p, &v, 5.0, &times, 0.05, Exec::Sequential).unwrap();
    let b = convolve_constant_flow(&inlet, &p, &v, 5.0, &times, 0.05, Exec::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn unsupported_configurations_are_rejected() {
    let inlet = Signal::constant("Tin", SignalKind::Temperature, 40.0).unwrap();
    let v = Signal::constant("v", SignalKind::Velocity, 0.5).unwrap();
    let times = [0.0, 1.0];
    let lossy = PipeParameters::simulation_study();
    assert!(convolve_constant_flow(&inlet, &lossy, &v, 5.0, &times, 0.1, Exec::Sequential).is_err());
    let ramp = Signal::ramp("v", SignalKind::Velocity, 0.0, 10.0, 0.5, 0.6).unwrap();
    assert!(convolve_constant_flow(&inlet, &isolated(), &ramp, 5.0, &times, 0.1, Exec::Sequential).is_err());
    assert!(convolve_constant_flow(&inlet, &isolated(), &v, 6.0, &times, 0.1, Exec::Sequential).is_err());
}
