//! Delayed-field model and its finite-difference DDE reductions.
//!
//! Along the characteristic `φ(z, t) = t − τ(l − z, t)` the medium equation
//! loses its advection term. Writing `T_i` for the delayed medium temperature
//! at node `i` and using a backward difference in `z`, every node obeys
//!
//! ```text
//! Ṫ_i − k3,i Ṫ_{i−1} = k1,i (T_{i−1} − T_i) + k2,i (T_∞(φ_i) − T_i)
//!
//! c_i  = v_del,i + h1 Δz
//! k1,i = ((h2 + h3) v + ∂t v_del,i) / c_i
//! k2,i = h1 h3 Δz (v / v_del,i) / c_i
//! k3,i = v_del,i / c_i
//! ```
//!
//! with `v_del,i = v(φ_i)`. The inflow node is the inlet delayed by the
//! full pipe, `T_0 = T_in(φ_0)`, and the outlet node coincides with the
//! physical outlet temperature. The input feedthrough `k3 Ṫ_{i−1}` is removed
//! with the transformed state `T̂_i = T_i − k3,i T_{i−1}`, whose rate picks up
//! `−k̇3,i T_{i−1}` when the flow varies. `∂t v_del` is a centred difference
//! of `v∘φ` over `±dt`.

use crate::error::{Error, Result};
use crate::model::{Boundary, RunSettings, PREHISTORY_NOTE};
use crate::output::{probe_column, ModelOutput, INLET_DELAYED, OUTLET, WALL};
use crate::params::PipeParameters;
use crate::pde::snap_probes;
use crate::signal::Signal;

/// Constant-flow coefficients of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dpde1Constants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

/// Node coefficients for arbitrary flow, plus `k̇3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct NodeCoefficients {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k3_dot: f64,
}

#[inline]
pub(crate) fn node_coefficients(h1: f64, h23: f64, h3: f64, v: f64, v_del: f64, dv_del: f64, dz: f64) -> NodeCoefficients {
    let c = v_del + h1 * dz;
    NodeCoefficients {
        k1: (h23 * v + dv_del) / c,
        k2: h1 * h3 * dz * (v / v_del) / c,
        k3: v_del / c,
        k3_dot: h1 * dz * dv_del / (c * c),
    }
}

pub fn dpde_constants(h1: f64, h2: f64, h3: f64, v: f64, dz: f64) -> Dpde1Constants {
    let c = node_coefficients(h1, h2 + h3, h3, v, v, 0.0, dz);
    Dpde1Constants {
        k1: c.k1,
        k2: c.k2,
        k3: c.k3,
    }
}

/// Delayed medium temperatures on the grid at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayedField {
    pub z: Vec<f64>,
    /// `T_m^del(z_i, t)`
    pub t_m: Vec<f64>,
    /// `T̂_i = T_i − k3,i T_{i−1}` for `i ≥ 1`; entry 0 unused.
    pub t_hat: Vec<f64>,
    pub v_del: Vec<f64>,
    pub t: f64,
}

impl DelayedField {
    pub fn n(&self) -> usize {
        self.z.len() - 1
    }
}

/// `T_w^del = (v_del/h1)·∂z T_m^del + T_m^del`, backward differences; entry 0
/// uses the first cell.
pub fn reconstruct_wall(field: &DelayedField, params: &PipeParameters) -> Result<Vec<f64>> {
    let n = field.n();
    if n == 0 {
        return Err(Error::Grid("wall reconstruction needs at least one cell".into()));
    }
    let h1 = params.h().h1;
    let dz = field.z[1] - field.z[0];
    Ok((0..=n)
        .map(|i| {
            let j = i.max(1);
            wall_from_gradient(field.v_del[i], h1, field.t_m[j] - field.t_m[j - 1], dz, field.t_m[i])
        })
        .collect())
}

#[inline]
fn wall_from_gradient(v_del: f64, h1: f64, diff: f64, dz: f64, t_m: f64) -> f64 {
    v_del / h1 * (diff / dz) + t_m
}

#[derive(Debug, Clone, PartialEq)]
pub struct DpdeConfig {
    pub n: usize,
    pub settings: RunSettings,
    pub probes: Vec<f64>,
    /// Emit the delayed inlet `T_in(t − τ(l, t))` as an extra column.
    pub inlet_delayed: bool,
}

impl DpdeConfig {
    pub fn new(n: usize, settings: RunSettings, probes: &[f64]) -> Self {
        Self {
            n,
            settings,
            probes: probes.to_vec(),
            inlet_delayed: false,
        }
    }
}

/// Per-node characteristic data at one instant.
struct Characteristics {
    phi: Vec<f64>,
    v_del: Vec<f64>,
    dv_del: Vec<f64>,
}

fn characteristics(v: &Signal, z: &[f64], length: f64, t: f64, dt: f64) -> Result<Characteristics> {
    let n1 = z.len();
    let mut c = Characteristics {
        phi: Vec::with_capacity(n1),
        v_del: Vec::with_capacity(n1),
        dv_del: Vec::with_capacity(n1),
    };
    let constant = v.is_constant();
    for &zi in z {
        let phi = v.characteristic_time(zi, t, length)?;
        c.phi.push(phi);
        c.v_del.push(v.value_at(phi));
        c.dv_del.push(if constant {
            0.0
        } else {
            let ahead = v.value_at(v.characteristic_time(zi, t + dt, length)?);
            let behind = v.value_at(v.characteristic_time(zi, t - dt, length)?);
            (ahead - behind) / (2.0 * dt)
        });
    }
    Ok(c)
}

fn node_grid(n: usize, length: f64) -> Vec<f64> {
    let dz = length / n as f64;
    (0..=n).map(|i| if i == n { length } else { i as f64 * dz }).collect()
}

pub fn simulate_dpde(params: &PipeParameters, boundary: &Boundary, cfg: &DpdeConfig) -> Result<ModelOutput> {
    let n = cfg.n;
    if n == 0 {
        return Err(Error::Grid("at least one cell is required".into()));
    }
    let s = &cfg.settings;
    let times = s.grid()?;
    let length = params.length();
    let probes = snap_probes(&cfg.probes, n, length)?;
    let h = params.h();
    let (h1, h23, h3) = (h.h1, h.h2 + h.h3, h.h3);
    let z = node_grid(n, length);
    let dz = length / n as f64;
    let vel = &boundary.velocity;

    let coeffs = |ch: &Characteristics, v: f64| -> Vec<NodeCoefficients> {
        (0..=n)
            .map(|i| node_coefficients(h1, h23, h3, v, ch.v_del[i], ch.dv_del[i], dz))
            .collect()
    };

    let t0 = s.t_start;
    let init = s.initial_temperature(boundary);
    let mut ch = characteristics(vel, &z, length, t0, s.dt)?;
    let mut kc = coeffs(&ch, vel.value_at(t0));
    let mut field = DelayedField {
        z: z.clone(),
        t_m: vec![init; n + 1],
        t_hat: vec![0.0; n + 1],
        v_del: ch.v_del.clone(),
        t: t0,
    };
    field.t_m[0] = boundary.inlet.value_at(ch.phi[0]);
    for i in 1..=n {
        field.t_hat[i] = (1.0 - kc[i].k3) * init;
    }

    let mut outlet = Vec::with_capacity(times.len());
    let mut wall = Vec::with_capacity(times.len());
    let mut inlet_del = Vec::with_capacity(times.len());
    // node histories for interior probes
    let mut hist: Vec<Vec<f64>> = vec![Vec::new(); probes.len()];
    let record = |f: &DelayedField, outlet: &mut Vec<f64>, wall: &mut Vec<f64>, inlet_del: &mut Vec<f64>, hist: &mut [Vec<f64>]| {
        outlet.push(f.t_m[n]);
        wall.push(wall_from_gradient(f.v_del[n], h1, f.t_m[n] - f.t_m[n - 1], dz, f.t_m[n]));
        inlet_del.push(f.t_m[0]);
        for (col, &(_, i)) in hist.iter_mut().zip(&probes) {
            col.push(f.t_m[i]);
        }
    };
    record(&field, &mut outlet, &mut wall, &mut inlet_del, &mut hist);

    let mut rate = vec![0.0; n + 1];
    for k in 1..times.len() {
        for i in 1..=n {
            let amb = boundary.ambient.value_at(ch.phi[i]);
            let c = &kc[i];
            let (prev, cur) = (field.t_m[i - 1], field.t_m[i]);
            rate[i] = c.k1 * (prev - cur) + c.k2 * (amb - cur) - c.k3_dot * prev;
        }
        for i in 1..=n {
            field.t_hat[i] += s.dt * rate[i];
        }

        let t_next = times[k];
        ch = characteristics(vel, &z, length, t_next, s.dt)?;
        kc = coeffs(&ch, vel.value_at(t_next));
        field.t = t_next;
        field.t_m[0] = boundary.inlet.value_at(ch.phi[0]);
        for i in 1..=n {
            field.t_m[i] = field.t_hat[i] + kc[i].k3 * field.t_m[i - 1];
        }
        field.v_del.clone_from(&ch.v_del);
        record(&field, &mut outlet, &mut wall, &mut inlet_del, &mut hist);
    }

    let mut out = ModelOutput::new(format!("dpde:{n}"), times);
    out.push_column(OUTLET, outlet);
    out.push_column(WALL, wall);
    if cfg.inlet_delayed {
        out.push_column(INLET_DELAYED, inlet_del);
    }
    for (&(zp, i), node_hist) in probes.iter().zip(&hist) {
        let col = physical_from_delayed(vel, &out.times, node_hist, z[i], length)?;
        out.push_column(probe_column(zp), col);
        out.notes.push(format!("probe z={zp} m snapped to node {i} (z={} m)", z[i]));
    }
    finish_notes(&mut out, params, boundary, t0, length);
    Ok(out)
}

/// Physical `T_m(z, s)` equals the delayed field at node `z` at the time the
/// parcel passing `z` at `s` reaches the outlet. Times whose arrival lies past
/// the simulated horizon are NaN.
fn physical_from_delayed(v: &Signal, times: &[f64], node: &[f64], z: f64, length: f64) -> Result<Vec<f64>> {
    let (first, last) = (times[0], times[times.len() - 1]);
    let dt = times[1] - times[0];
    times
        .iter()
        .map(|&t| {
            let arrival = t + v.solve_advance(t, length - z)?;
            if arrival > last + 1e-9 * dt.abs() {
                return Ok(f64::NAN);
            }
            let x = ((arrival - first) / dt).max(0.0);
            let k = (x.floor() as usize).min(node.len() - 1);
            Ok(if k + 1 < node.len() {
                let w = x - k as f64;
                node[k] + w * (node[k + 1] - node[k])
            } else {
                node[k]
            })
        })
        .collect()
}

fn finish_notes(out: &mut ModelOutput, params: &PipeParameters, boundary: &Boundary, t0: f64, length: f64) {
    if boundary.needs_prehistory(t0, length) {
        out.notes.push(PREHISTORY_NOTE.into());
    }
    if !boundary.is_constant_flow() && params.h().h3 > 0.0 {
        out.notes.push("delayed ambient is linearly interpolated between samples".into());
    }
    if params.heat.affine.is_some() {
        out.notes.push("affine alpha_mw ignored; constant alpha_mw used".into());
    }
}

/// Scalar single-cell reduction; the same arithmetic as `simulate_dpde` with
/// `n = 1`, written without vectors.
pub fn simulate_dpde1(params: &PipeParameters, boundary: &Boundary, settings: &RunSettings) -> Result<ModelOutput> {
    let s = settings;
    let times = s.grid()?;
    let length = params.length();
    let h = params.h();
    let (h1, h23, h3) = (h.h1, h.h2 + h.h3, h.h3);
    let dz = length;
    let vel = &boundary.velocity;
    let inlet = &boundary.inlet;

    let t0 = s.t_start;
    let init = s.initial_temperature(boundary);
    // φ at the inlet (z = 0) and at the outlet (z = l, φ = t).
    let delay_state = |t: f64| -> Result<(f64, NodeCoefficients, f64)> {
        let phi_in = vel.characteristic_time(0.0, t, length)?;
        let v_del = vel.value_at(vel.characteristic_time(length, t, length)?);
        let dv_del = if vel.is_constant() {
            0.0
        } else {
            let ahead = vel.value_at(vel.characteristic_time(length, t + s.dt, length)?);
            let behind = vel.value_at(vel.characteristic_time(length, t - s.dt, length)?);
            (ahead - behind) / (2.0 * s.dt)
        };
        let c = node_coefficients(h1, h23, h3, vel.value_at(t), v_del, dv_del, dz);
        Ok((phi_in, c, v_del))
    };

    let (mut phi_in, mut c, mut v_del) = delay_state(t0)?;
    let mut t_in_del = inlet.value_at(phi_in);
    let mut t_out = init;
    let mut t_hat = (1.0 - c.k3) * init;

    let mut outlet = vec![t_out];
    let mut wall = vec![wall_from_gradient(v_del, h1, t_out - t_in_del, dz, t_out)];
    for k in 1..times.len() {
        let t = times[k - 1];
        let amb = boundary.ambient.value_at(t);
        let rate = c.k1 * (t_in_del - t_out) + c.k2 * (amb - t_out) - c.k3_dot * t_in_del;
        t_hat += s.dt * rate;

        (phi_in, c, v_del) = delay_state(times[k])?;
        t_in_del = inlet.value_at(phi_in);
        t_out = t_hat + c.k3 * t_in_del;
        outlet.push(t_out);
        wall.push(wall_from_gradient(v_del, h1, t_out - t_in_del, dz, t_out));
    }

    let mut out = ModelOutput::new("dpde1", times);
    out.push_column(OUTLET, outlet);
    out.push_column(WALL, wall);
    finish_notes(&mut out, params, boundary, t0, length);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    #[test]
    fn single_cell_constants() {
        let p = PipeParameters::simulation_study();
        let h = p.h();
        let k = dpde_constants(h.h1, h.h2, h.h3, 0.5, 5.0);
        // (h2+h3)v/(v+h1 l), h1 h3 l/(v+h1 l), v/(v+h1 l) with the frozen h values
        assert_relative_eq!(k.k1, 0.04783120578945227, max_relative = 1e-12);
        assert_relative_eq!(k.k2, 0.0029385178557238506, max_relative = 1e-12);
        assert_relative_eq!(k.k3, 0.6316842110271691, max_relative = 1e-12);
        let iso = dpde_constants(h.h1, h.h2, 0.0, 0.5, 5.0);
        assert_eq!(iso.k2, 0.0);
    }

    #[test]
    fn uniform_field_reconstructs_uniform_wall() {
        let p = PipeParameters::simulation_study();
        let f = DelayedField {
            z: vec![0.0, 2.5, 5.0],
            t_m: vec![33.0; 3],
            t_hat: vec![0.0; 3],
            v_del: vec![0.5; 3],
            t: 0.0,
        };
        assert_eq!(reconstruct_wall(&f, &p).unwrap(), vec![33.0; 3]);
    }

    #[test]
    fn n1_matches_scalar_reduction_bitwise() {
        let p = PipeParameters::simulation_study();
        let b = Boundary::ramp_study();
        let s = RunSettings::new(0.1, 100.0);
        let a = simulate_dpde(&p, &b, &DpdeConfig::new(1, s, &[])).unwrap();
        let d = simulate_dpde1(&p, &b, &s).unwrap();
        assert_eq!(a.outlet(), d.outlet());
        assert_eq!(a.wall(), d.wall());
    }
}
