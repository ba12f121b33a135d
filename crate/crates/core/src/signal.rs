//! Sampled boundary signals and the variable transport delay.
//!
//! A [`Signal`] is piecewise linear between samples and held constant before
//! the first and after the last sample. For velocity signals the running
//! integral `F(t) = ∫ v` is kept as prefix sums over the samples, so the flow
//! through any window is `F(t1) − F(t0)` and the delay equation
//!
//! ```text
//! ∫_{t−τ}^{t} v(s) ds = d
//! ```
//!
//! is solved by locating the sample interval containing `F(t) − d` with a
//! binary search and then inverting the quadratic `F` on that interval in
//! closed form. No iteration, no tolerance.

use std::path::Path;

use crate::error::{Error, Result};
use crate::par::Exec;

/// Width of the linear transition used to represent a step.
pub const STEP_WIDTH: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    /// m/s, strictly positive.
    Velocity,
    /// °C
    Temperature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    name: String,
    kind: SignalKind,
    t: Vec<f64>,
    y: Vec<f64>,
    /// `cum[k] = ∫_{t[0]}^{t[k]} y`
    cum: Vec<f64>,
}

impl Signal {
    pub fn new(name: impl Into<String>, kind: SignalKind, t: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let name = name.into();
        let bad = |reason: String| Error::InvalidSignal {
            name: name.clone(),
            reason,
        };
        if t.is_empty() {
            return Err(bad("no samples".into()));
        }
        if t.len() != y.len() {
            return Err(bad(format!("{} times but {} values", t.len(), y.len())));
        }
        if let Some(i) = t.iter().chain(&y).position(|x| !x.is_finite()) {
            return Err(bad(format!("non-finite entry at position {i}")));
        }
        if let Some(k) = t.windows(2).position(|w| w[1] <= w[0]) {
            return Err(bad(format!(
                "times not strictly increasing at t = {} s",
                t[k + 1]
            )));
        }
        if kind == SignalKind::Velocity {
            if let Some(k) = y.iter().position(|&v| v <= 0.0) {
                return Err(Error::NonPositiveVelocity { t: t[k], value: y[k] });
            }
        }
        let mut cum = Vec::with_capacity(t.len());
        cum.push(0.0);
        for k in 1..t.len() {
            let area = 0.5 * (y[k - 1] + y[k]) * (t[k] - t[k - 1]);
            cum.push(cum[k - 1] + area);
        }
        Ok(Self {
            name,
            kind,
            t,
            y,
            cum,
        })
    }

    pub fn constant(name: impl Into<String>, kind: SignalKind, value: f64) -> Result<Self> {
        Self::new(name, kind, vec![0.0], vec![value])
    }

    /// Linear ramp from `y0` at `t0` to `y1` at `t1`, held outside.
    pub fn ramp(
        name: impl Into<String>,
        kind: SignalKind,
        t0: f64,
        t1: f64,
        y0: f64,
        y1: f64,
    ) -> Result<Self> {
        Self::new(name, kind, vec![t0, t1], vec![y0, y1])
    }

    /// Step from `y0` to `y1` at `t` (linear over [`STEP_WIDTH`]).
    pub fn step(name: impl Into<String>, kind: SignalKind, t: f64, y0: f64, y1: f64) -> Result<Self> {
        Self::new(name, kind, vec![t, t + STEP_WIDTH], vec![y0, y1])
    }

    /// Parses the inline forms `const:v`, `ramp:t0,t1,v0,v1`, `step:t,v0,v1`
    /// and `csv:path` (relative paths resolve against `base`).
    pub fn parse_spec(name: &str, kind: SignalKind, spec: &str, base: Option<&Path>) -> Result<Self> {
        let bad = |reason: &str| Error::config(name, format!("{reason} in `{spec}`"));
        let (head, rest) = spec
            .split_once(':')
            .ok_or_else(|| bad("expected `<kind>:<args>`"))?;
        let nums = || -> Result<Vec<f64>> {
            rest.split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|_| bad("bad number")))
                .collect()
        };
        match head.trim() {
            "const" => match nums()?.as_slice() {
                [v] => Self::constant(name, kind, *v),
                _ => Err(bad("const takes 1 value")),
            },
            "ramp" => match nums()?.as_slice() {
                [t0, t1, y0, y1] => Self::ramp(name, kind, *t0, *t1, *y0, *y1),
                _ => Err(bad("ramp takes t0,t1,v0,v1")),
            },
            "step" => match nums()?.as_slice() {
                [t, y0, y1] => Self::step(name, kind, *t, *y0, *y1),
                _ => Err(bad("step takes t,v0,v1")),
            },
            "csv" => {
                let p = Path::new(rest.trim());
                let path = match base {
                    Some(b) if p.is_relative() => b.join(p),
                    _ => p.to_path_buf(),
                };
                crate::io::read_signal_csv(&path, name, kind)
            }
            other => Err(bad(&format!("unknown signal kind `{other}`"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SignalKind {
        self.kind
    }

    pub fn times(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn first_time(&self) -> f64 {
        self.t[0]
    }

    pub fn last_time(&self) -> f64 {
        self.t[self.t.len() - 1]
    }

    pub fn is_constant(&self) -> bool {
        self.y.iter().all(|&y| y == self.y[0])
    }

    pub fn max_value(&self) -> f64 {
        self.y.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.y.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Index `k` with `t[k] <= t < t[k+1]`; `None` before the first sample.
    fn segment(&self, t: f64) -> Option<usize> {
        let k = self.t.partition_point(|&s| s <= t);
        k.checked_sub(1)
    }

    pub fn value_at(&self, t: f64) -> f64 {
        match self.segment(t) {
            None => self.y[0],
            Some(k) if k + 1 == self.t.len() => self.y[k],
            Some(k) => {
                let w = (t - self.t[k]) / (self.t[k + 1] - self.t[k]);
                self.y[k] + w * (self.y[k + 1] - self.y[k])
            }
        }
    }

    /// Slope of the interpolant on the interval containing `t` (0 outside the samples).
    fn slope(&self, k: usize) -> f64 {
        if k + 1 >= self.t.len() {
            0.0
        } else {
            (self.y[k + 1] - self.y[k]) / (self.t[k + 1] - self.t[k])
        }
    }

    /// `F(t) = ∫_{t[0]}^{t} y`, negative before the first sample.
    fn running_integral(&self, t: f64) -> f64 {
        match self.segment(t) {
            None => self.y[0] * (t - self.t[0]),
            Some(k) => {
                let u = t - self.t[k];
                self.cum[k] + u * (self.y[k] + 0.5 * self.slope(k) * u)
            }
        }
    }

    /// Exact integral of the interpolant over `[t0, t1]` (signed if `t1 < t0`).
    pub fn cumulative_flow(&self, t0: f64, t1: f64) -> f64 {
        if t0 == t1 {
            return 0.0;
        }
        self.running_integral(t1) - self.running_integral(t0)
    }

    /// Earliest-arrival inversion: the time `s` with `F(s) = target`.
    fn invert_running_integral(&self, target: f64) -> f64 {
        if target < 0.0 {
            return self.t[0] + target / self.y[0];
        }
        let k = self.cum.partition_point(|&c| c <= target) - 1;
        let r = target - self.cum[k];
        let v0 = self.y[k];
        let a = self.slope(k);
        // 0.5·a·u² + v0·u − r = 0, root in the form that is stable for a → 0
        let u = 2.0 * r / (v0 + (v0 * v0 + 2.0 * a * r).max(0.0).sqrt());
        self.t[k] + u
    }

    fn require_velocity(&self) -> Result<()> {
        match self.kind {
            SignalKind::Velocity => Ok(()),
            SignalKind::Temperature => Err(Error::InvalidSignal {
                name: self.name.clone(),
                reason: "transport delay needs a velocity signal".into(),
            }),
        }
    }

    /// Transport delay `τ ≥ 0` of a parcel arriving at time `t` after travelling `distance`.
    pub fn solve_delay(&self, t: f64, distance: f64) -> Result<f64> {
        self.require_velocity()?;
        if !(distance >= 0.0) {
            return Err(Error::param("distance", format!("must be >= 0, got {distance}")));
        }
        if distance == 0.0 {
            return Ok(0.0);
        }
        let s = self.invert_running_integral(self.running_integral(t) - distance);
        Ok((t - s).max(f64::MIN_POSITIVE))
    }

    /// Travel time of a parcel leaving at time `t` over `distance` (forward in time).
    pub fn solve_advance(&self, t: f64, distance: f64) -> Result<f64> {
        self.require_velocity()?;
        if !(distance >= 0.0) {
            return Err(Error::param("distance", format!("must be >= 0, got {distance}")));
        }
        if distance == 0.0 {
            return Ok(0.0);
        }
        let s = self.invert_running_integral(self.running_integral(t) + distance);
        Ok(s - t)
    }

    /// Characteristic projection `φ(z, t) = t − τ(l − z, t)`.
    pub fn characteristic_time(&self, z: f64, t: f64, length: f64) -> Result<f64> {
        check_position(z, length)?;
        Ok(t - self.solve_delay(t, length - z)?)
    }

    /// `v(φ(z, t))`.
    pub fn delayed_velocity(&self, z: f64, t: f64, length: f64) -> Result<f64> {
        Ok(self.value_at(self.characteristic_time(z, t, length)?))
    }

    /// Delays for many `(t, distance)` queries.
    pub fn solve_delay_batch(&self, queries: &[(f64, f64)], exec: Exec) -> Result<Vec<f64>> {
        exec.map(queries, |&(t, d)| self.solve_delay(t, d))
            .into_iter()
            .collect()
    }

    /// Samples of `value_at` on the given times.
    pub fn sample(&self, times: &[f64]) -> Vec<f64> {
        times.iter().map(|&t| self.value_at(t)).collect()
    }
}

fn check_position(z: f64, length: f64) -> Result<()> {
    if (0.0..=length).contains(&z) {
        Ok(())
    } else {
        Err(Error::param("z", format!("must lie in [0, {length}], got {z}")))
    }
}
