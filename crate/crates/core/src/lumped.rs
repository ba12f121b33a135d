//! Single-state models of the whole pipe.
//!
//! ```text
//! ODE          dT/dt = (v/l)(T_in(t)   − T) + h4 (T_∞ − T)
//! DDE          dT/dt = (v/l)(T_in(t−τ) − T) + h4 (T_∞ − T)
//! adapted DDE ε dT/dt = (v/l)(T_in(t−τ) − T) + h4 (T_∞ − T)
//! ```
//!
//! `τ = τ(l, t)` is the variable transport delay. In the adapted form the sink
//! is written `α_ma A_s/(c m)` with `A_s = U_w l`, `m = ρ A_m l`, which is
//! `h4` again. Evaluating at `z0 < l` replaces `l` by `z0`, which leaves
//! the sink unchanged.

use crate::error::{Error, Result};
use crate::model::{Boundary, RunSettings, PREHISTORY_NOTE};
use crate::output::{probe_column, ModelOutput, OUTLET};
use crate::params::PipeParameters;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lumped {
    Ode,
    Dde,
    AdaptedDde,
}

/// Sink coefficient `α_ma A_s/(c_m m)` of a section of length `len`.
pub fn adapted_sink(params: &PipeParameters, len: f64) -> f64 {
    let g = &params.geometry;
    let surface = g.outer_perimeter() * len;
    let mass = params.material.rho_m * g.medium_area() * len;
    params.derived().alpha_ma * surface / (params.material.cp_m * mass)
}

fn integrate(
    params: &PipeParameters,
    boundary: &Boundary,
    s: &RunSettings,
    kind: Lumped,
    len: f64,
    times: &[f64],
) -> Result<Vec<f64>> {
    let (eps, sink) = match kind {
        Lumped::Ode | Lumped::Dde => (1.0, params.h().h4),
        Lumped::AdaptedDde => (params.heat.epsilon, adapted_sink(params, len)),
    };
    let delayed = kind != Lumped::Ode;
    let inlet = |t: f64| -> Result<f64> {
        let at = if delayed {
            t - boundary.velocity.solve_delay(t, len)?
        } else {
            t
        };
        Ok(boundary.inlet.value_at(at))
    };
    let mut temp = s.initial_temperature(boundary);
    let mut out = Vec::with_capacity(times.len());
    out.push(temp);
    for k in 1..times.len() {
        let t = times[k - 1];
        let v = boundary.velocity.value_at(t);
        let rate = v / len * (inlet(t)? - temp) + sink * (boundary.ambient.value_at(t) - temp);
        temp += s.dt * rate / eps;
        out.push(temp);
    }
    Ok(out)
}

pub fn simulate_lumped(
    params: &PipeParameters,
    boundary: &Boundary,
    settings: &RunSettings,
    kind: Lumped,
    probes: &[f64],
) -> Result<ModelOutput> {
    let times = settings.grid()?;
    let length = params.length();
    let mut out = ModelOutput::new(
        match kind {
            Lumped::Ode => "ode",
            Lumped::Dde => "dde",
            Lumped::AdaptedDde => "adapted_dde",
        },
        times.clone(),
    );
    out.push_column(OUTLET, integrate(params, boundary, settings, kind, length, &times)?);
    for &z in probes {
        if !(z > 0.0 && z <= length) {
            return Err(Error::param("probes", format!("{z} m outside (0, {length}]")));
        }
        out.push_column(probe_column(z), integrate(params, boundary, settings, kind, z, &times)?);
    }
    if kind != Lumped::Ode && boundary.needs_prehistory(settings.t_start, length) {
        out.notes.push(PREHISTORY_NOTE.into());
    }
    Ok(out)
}

pub fn simulate_ode(params: &PipeParameters, boundary: &Boundary, settings: &RunSettings) -> Result<ModelOutput> {
    simulate_lumped(params, boundary, settings, Lumped::Ode, &[])
}

pub fn simulate_dde(params: &PipeParameters, boundary: &Boundary, settings: &RunSettings) -> Result<ModelOutput> {
    simulate_lumped(params, boundary, settings, Lumped::Dde, &[])
}

pub fn simulate_adapted_dde(
    params: &PipeParameters,
    boundary: &Boundary,
    settings: &RunSettings,
) -> Result<ModelOutput> {
    simulate_lumped(params, boundary, settings, Lumped::AdaptedDde, &[])
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    #[test]
    fn adapted_sink_is_h4_for_any_length() {
        let p = PipeParameters::simulation_study();
        for len in [0.3, 1.0, 5.0] {
            assert_relative_eq!(adapted_sink(&p, len), p.h().h4, max_relative = 1e-12);
        }
    }

    #[test]
    fn unit_epsilon_reduces_to_dde() {
        let p = PipeParameters::simulation_study().with_epsilon(1.0).unwrap();
        let b = Boundary::ramp_study();
        let s = RunSettings::new(0.1, 100.0);
        let a = simulate_adapted_dde(&p, &b, &s).unwrap();
        let d = simulate_dde(&p, &b, &s).unwrap();
        for (x, y) in a.outlet().iter().zip(d.outlet()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn equilibrium_is_preserved() {
        let p = PipeParameters::simulation_study();
        let b = Boundary::constant(0.5, 42.0, 42.0).unwrap();
        let out = simulate_ode(&p, &b, &RunSettings::new(0.5, 50.0)).unwrap();
        assert!(out.outlet().iter().all(|&t| t == 42.0));
    }
}
