//! Constant-flow closed forms used as independent oracles.
//!
//! For an isolated pipe (`h3 = 0`) and constant `v` the delayed outlet
//! temperature at `z` is the inlet, delayed by `z/v`, filtered by
//!
//! ```text
//! g(z, t) = e^{−h1 z/v} δ(t) + e^{−h1 z/v} e^{−h2 t} √(K z / t) I1(2 √(K z t)),   K = h1 h2 / v
//! ```
//!
//! The continuous part is evaluated through its power series
//! `K z Σ (K z t)^n / ((n+1)! n!)`, which is regular at `t = 0`.

use crate::error::{Error, Result};
use crate::output::{probe_column, ModelOutput, OUTLET};
use crate::par::Exec;
use crate::params::PipeParameters;
use crate::signal::Signal;

/// Modified Bessel function of the first kind, order one, by its power series.
pub fn bessel_i1(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= q / (n * (n + 1.0));
        sum += term;
        if term < 1e-16 * sum {
            return sum;
        }
    }
}

/// `ln Σ_{n≥0} y^n / ((n+1)! n!)` without overflow.
fn ln_series(y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    let ly = y.ln();
    let shift = 2.0 * y.sqrt();
    let mut lt = 0.0; // ln of the n-th term
    let mut sum = (lt - shift).exp();
    let mut n: f64 = 0.0;
    loop {
        lt += ly - ((n + 2.0) * (n + 1.0)).ln();
        n += 1.0;
        let term = (lt - shift).exp();
        sum += term;
        if n * n > y && term < 1e-17 * sum {
            return shift + sum.ln();
        }
    }
}

/// Continuous part of the impulse response at `(z, t)`, 1/s.
pub fn impulse_response(z: f64, t: f64, h1: f64, h2: f64, v: f64) -> f64 {
    let kz = h1 * h2 / v * z;
    if kz == 0.0 {
        return 0.0;
    }
    (-h1 * z / v - h2 * t + kz.ln() + ln_series(kz * t)).exp()
}

/// Weight of the delayed Dirac term, `exp(−h1 z/v)`.
pub fn dirac_weight(z: f64, h1: f64, v: f64) -> f64 {
    (-h1 * z / v).exp()
}

/// Tail mass below which the kernel is cut off.
pub const KERNEL_TAIL: f64 = 1e-8;

/// Sampled impulse response on `s_j = j·dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpulseKernel {
    pub z: f64,
    pub h1: f64,
    pub h2: f64,
    pub v: f64,
    pub dt: f64,
    pub values: Vec<f64>,
    pub dirac_weight: f64,
}

impl ImpulseKernel {
    /// Samples with `dt_kernel = min(dt, 0.1/h2)` until the continuous tail
    /// drops below [`KERNEL_TAIL`].
    pub fn new(z: f64, h1: f64, h2: f64, v: f64, dt: f64) -> Result<Self> {
        if !(z > 0.0) || !(v > 0.0) || !(dt > 0.0) || !(h1 >= 0.0) || !(h2 >= 0.0) {
            return Err(Error::param("kernel", "need z, v, dt > 0 and h1, h2 >= 0"));
        }
        let dirac_weight = dirac_weight(z, h1, v);
        let kz = h1 * h2 / v * z;
        if kz == 0.0 {
            return Ok(Self { z, h1, h2, v, dt, values: vec![0.0], dirac_weight });
        }
        let dt = dt.min(0.1 / h2);
        // log-slope of g is −h2 + √(Kz/t); past t = 4Kz/h2² it is below −h2/2,
        // so the tail beyond t is at most 2 g(t)/h2.
        let t_decay = 4.0 * kz / (h2 * h2);
        let mut values = Vec::new();
        loop {
            let t = values.len() as f64 * dt;
            let g = impulse_response(z, t, h1, h2, v);
            values.push(g);
            if t > t_decay && 2.0 * g / h2 < KERNEL_TAIL {
                break;
            }
            if values.len() > 50_000_000 {
                return Err(Error::param("kernel", "horizon exceeds 5e7 samples; increase dt"));
            }
        }
        Ok(Self { z, h1, h2, v, dt, values, dirac_weight })
    }

    pub fn from_params(params: &PipeParameters, v: f64, z: f64, dt: f64) -> Result<Self> {
        let h = params.h();
        Self::new(z, h.h1, h.h2, v, dt)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.values.len()).map(|j| j as f64 * self.dt).collect()
    }

    /// Trapezoid weight of sample `j` on `[0, s_last]`.
    fn weight(&self, j: usize, last: usize) -> f64 {
        if j == 0 || j == last {
            0.5 * self.dt
        } else {
            self.dt
        }
    }

    /// Dirac weight plus the trapezoid integral of the continuous part.
    pub fn mass(&self) -> f64 {
        let last = self.values.len() - 1;
        self.dirac_weight
            + self
                .values
                .iter()
                .enumerate()
                .map(|(j, g)| self.weight(j, last) * g)
                .sum::<f64>()
    }
}

/// Delayed outlet temperature at `z` by convolution with the impulse response.
///
/// History before the first inlet sample is held constant, so the part of the
/// kernel reaching before it contributes `(remaining mass)·T_in(first)`.
pub fn convolve_constant_flow(
    inlet: &Signal,
    params: &PipeParameters,
    velocity: &Signal,
    z: f64,
    times: &[f64],
    kernel_dt: f64,
    exec: Exec,
) -> Result<ModelOutput> {
    let model = "convolution";
    if !velocity.is_constant() {
        return Err(Error::Unsupported {
            model: model.into(),
            reason: "velocity must be constant".into(),
        });
    }
    let h = params.h();
    if h.h3 != 0.0 {
        return Err(Error::Unsupported {
            model: model.into(),
            reason: format!("kernel is only known for an isolated pipe, h3 = {}", h.h3),
        });
    }
    if !(z > 0.0 && z <= params.length()) {
        return Err(Error::param("z", format!("must lie in (0, {}], got {z}", params.length())));
    }
    let v = velocity.value_at(0.0);
    let kernel = ImpulseKernel::new(z, h.h1, h.h2, v, kernel_dt)?;
    let continuous_mass = 1.0 - kernel.dirac_weight;
    let first = inlet.first_time();
    let y0 = inlet.value_at(first);

    let values = exec.map(times, |&t| {
        let u = t - z / v;
        let mut acc = kernel.dirac_weight * inlet.value_at(u);
        if continuous_mass > 0.0 {
            let reach = ((u - first) / kernel.dt).floor();
            let last = if reach < 1.0 { 0 } else { (reach as usize).min(kernel.values.len() - 1) };
            let mut used = 0.0;
            if last > 0 {
                for (j, g) in kernel.values[..=last].iter().enumerate() {
                    let w = kernel.weight(j, last) * g;
                    used += w;
                    acc += w * inlet.value_at(u - j as f64 * kernel.dt);
                }
            }
            acc += (continuous_mass - used) * y0;
        }
        acc
    });

    let column = if z == params.length() { OUTLET.to_string() } else { probe_column(z) };
    let mut out = ModelOutput::new(model, times.to_vec());
    out.push_column(column, values);
    Ok(out)
}

/// Stationary outlet of the wall-coupled PDE for constant inputs.
pub fn steady_outlet(params: &PipeParameters, v: f64, t_in: f64, t_amb: f64) -> f64 {
    let h = params.h();
    let decay = h.h1 * h.h3 * params.length() / ((h.h2 + h.h3) * v);
    t_amb + (t_in - t_amb) * (-decay).exp()
}

/// Stationary outlet of the wall-free PDE.
pub fn steady_outlet_simplified(params: &PipeParameters, v: f64, t_in: f64, t_amb: f64) -> f64 {
    t_amb + (t_in - t_amb) * (-params.h().h4 * params.length() / v).exp()
}

/// Fixed point shared by the ODE, DDE and adapted DDE.
pub fn steady_lumped(params: &PipeParameters, v: f64, t_in: f64, t_amb: f64) -> f64 {
    let a = v / params.length();
    let h4 = params.h().h4;
    (a * t_in + h4 * t_amb) / (a + h4)
}
