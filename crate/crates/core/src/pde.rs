//! 1-D benchmark: medium advection coupled to an averaged wall.
//!
//! ```text
//! ∂T_m/∂t + v ∂T_m/∂z = h1 (T_w − T_m)
//! ∂T_w/∂t            = h2 (T_m − T_w) − h3 (T_w − T_∞)
//! ```
//!
//! Method of lines with first-order upwind differences on a uniform grid and
//! explicit Euler in time. The inflow node is overwritten with the inlet
//! signal after every step.

use crate::error::{Error, Result};
use crate::model::{Boundary, RunSettings};
use crate::output::{probe_column, ModelOutput, OUTLET, WALL};
use crate::params::PipeParameters;

/// Uniform grid `z_0 = 0 … z_n = l` with medium and wall temperatures.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub z: Vec<f64>,
    pub t_m: Vec<f64>,
    pub t_w: Vec<f64>,
    pub t: f64,
}

impl FieldState {
    pub fn uniform(n: usize, length: f64, temperature: f64, t: f64) -> Self {
        let dz = length / n as f64;
        Self {
            z: (0..=n).map(|i| i as f64 * dz).collect(),
            t_m: vec![temperature; n + 1],
            t_w: vec![temperature; n + 1],
            t,
        }
    }
}

/// Upwind spatial operator on `n` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpwindOperator {
    pub n: usize,
    pub dz: f64,
}

pub fn semidiscretize(n: usize, params: &PipeParameters) -> Result<UpwindOperator> {
    if n == 0 {
        return Err(Error::Grid("at least one cell is required".into()));
    }
    Ok(UpwindOperator {
        n,
        dz: params.length() / n as f64,
    })
}

impl UpwindOperator {
    /// Time derivatives of both fields. The inflow medium node gets rate 0.
    #[allow(clippy::too_many_arguments)]
    pub fn rates(
        &self,
        state: &FieldState,
        v: f64,
        t_amb: f64,
        h1: f64,
        h2: f64,
        h3: f64,
        d_m: &mut [f64],
        d_w: &mut [f64],
    ) {
        let (tm, tw) = (&state.t_m, &state.t_w);
        d_m[0] = 0.0;
        for i in 1..=self.n {
            d_m[i] = -v * (tm[i] - tm[i - 1]) / self.dz + h1 * (tw[i] - tm[i]);
        }
        for i in 0..=self.n {
            d_w[i] = h2 * (tm[i] - tw[i]) - h3 * (tw[i] - t_amb);
        }
    }

    /// Wall-free variant: `∂T/∂t = −v ∂T/∂z + h4 (T_∞ − T)`.
    pub fn rates_simplified(&self, t_m: &[f64], v: f64, t_amb: f64, h4: f64, d_m: &mut [f64]) {
        d_m[0] = 0.0;
        for i in 1..=self.n {
            d_m[i] = -v * (t_m[i] - t_m[i - 1]) / self.dz + h4 * (t_amb - t_m[i]);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdeConfig {
    pub n: usize,
    pub settings: RunSettings,
    pub probes: Vec<f64>,
}

impl PdeConfig {
    pub fn new(n: usize, settings: RunSettings, probes: &[f64]) -> Self {
        Self {
            n,
            settings,
            probes: probes.to_vec(),
        }
    }
}

/// Largest `v·dt/dz` the explicit scheme tolerates.
pub const CFL_LIMIT: f64 = 1.0;

/// `dt` giving a CFL number of 0.5 for the peak velocity of `boundary`.
pub fn default_dt(params: &PipeParameters, boundary: &Boundary, n: usize) -> f64 {
    0.5 * params.length() / n as f64 / boundary.velocity.max_value()
}

fn check_cfl(op: &UpwindOperator, boundary: &Boundary, dt: f64) -> Result<()> {
    let ratio = boundary.velocity.max_value() * dt / op.dz;
    if ratio > CFL_LIMIT {
        return Err(Error::Cfl { ratio });
    }
    Ok(())
}

/// Snaps probe positions to grid nodes; returns `(requested z, node)`.
pub(crate) fn snap_probes(probes: &[f64], n: usize, length: f64) -> Result<Vec<(f64, usize)>> {
    probes
        .iter()
        .map(|&z| {
            if !(0.0..=length).contains(&z) {
                return Err(Error::param("probes", format!("{z} m outside [0, {length}]")));
            }
            Ok((z, (z / length * n as f64).round() as usize))
        })
        .collect()
}

fn probe_notes(out: &mut ModelOutput, probes: &[(f64, usize)], dz: f64) {
    for &(z, i) in probes {
        out.notes.push(format!("probe z={z} m snapped to node {i} (z={} m)", i as f64 * dz));
    }
}

pub fn simulate_pde(params: &PipeParameters, boundary: &Boundary, cfg: &PdeConfig) -> Result<ModelOutput> {
    let op = semidiscretize(cfg.n, params)?;
    let s = &cfg.settings;
    check_cfl(&op, boundary, s.dt)?;
    let times = s.grid()?;
    let probes = snap_probes(&cfg.probes, op.n, params.length())?;
    let h = params.h();

    let mut state = FieldState::uniform(op.n, params.length(), s.initial_temperature(boundary), s.t_start);
    state.t_m[0] = boundary.inlet.value_at(s.t_start);
    let (mut d_m, mut d_w) = (vec![0.0; op.n + 1], vec![0.0; op.n + 1]);
    let mut outlet = Vec::with_capacity(times.len());
    let mut wall = Vec::with_capacity(times.len());
    let mut probe_vals = vec![Vec::with_capacity(times.len()); probes.len()];
    let record = |st: &FieldState, outlet: &mut Vec<f64>, wall: &mut Vec<f64>, pv: &mut [Vec<f64>]| {
        outlet.push(st.t_m[op.n]);
        wall.push(st.t_w[op.n]);
        for (col, &(_, i)) in pv.iter_mut().zip(&probes) {
            col.push(st.t_m[i]);
        }
    };
    record(&state, &mut outlet, &mut wall, &mut probe_vals);

    for k in 1..times.len() {
        let t = times[k - 1];
        let v = boundary.velocity.value_at(t);
        let (h1, h2) = params.h12_at(v);
        op.rates(&state, v, boundary.ambient.value_at(t), h1, h2, h.h3, &mut d_m, &mut d_w);
        for i in 0..=op.n {
            state.t_m[i] += s.dt * d_m[i];
            state.t_w[i] += s.dt * d_w[i];
        }
        state.t = times[k];
        state.t_m[0] = boundary.inlet.value_at(state.t);
        record(&state, &mut outlet, &mut wall, &mut probe_vals);
    }

    let mut out = ModelOutput::new(format!("pde:{}", op.n), times);
    out.push_column(OUTLET, outlet);
    out.push_column(WALL, wall);
    for ((z, _), vals) in probes.iter().zip(probe_vals) {
        out.push_column(probe_column(*z), vals);
    }
    probe_notes(&mut out, &probes, op.dz);
    if params.heat.affine.is_some() {
        out.notes.push("h1, h2 follow alpha_mw(v) each step".into());
    }
    Ok(out)
}

pub fn simulate_simplified_pde(
    params: &PipeParameters,
    boundary: &Boundary,
    cfg: &PdeConfig,
) -> Result<ModelOutput> {
    let op = semidiscretize(cfg.n, params)?;
    let s = &cfg.settings;
    check_cfl(&op, boundary, s.dt)?;
    let times = s.grid()?;
    let probes = snap_probes(&cfg.probes, op.n, params.length())?;
    let h4 = params.h().h4;

    let mut t_m = vec![s.initial_temperature(boundary); op.n + 1];
    t_m[0] = boundary.inlet.value_at(s.t_start);
    let mut d_m = vec![0.0; op.n + 1];
    let mut outlet = vec![t_m[op.n]];
    let mut probe_vals: Vec<Vec<f64>> = probes.iter().map(|&(_, i)| vec![t_m[i]]).collect();

    for k in 1..times.len() {
        let t = times[k - 1];
        op.rates_simplified(&t_m, boundary.velocity.value_at(t), boundary.ambient.value_at(t), h4, &mut d_m);
        for i in 0..=op.n {
            t_m[i] += s.dt * d_m[i];
        }
        t_m[0] = boundary.inlet.value_at(times[k]);
        outlet.push(t_m[op.n]);
        for (col, &(_, i)) in probe_vals.iter_mut().zip(&probes) {
            col.push(t_m[i]);
        }
    }

    let mut out = ModelOutput::new(format!("simplified_pde:{}", op.n), times);
    out.push_column(OUTLET, outlet);
    for ((z, _), vals) in probes.iter().zip(probe_vals) {
        out.push_column(probe_column(*z), vals);
    }
    probe_notes(&mut out, &probes, op.dz);
    Ok(out)
}
