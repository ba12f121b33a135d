//! Shared run inputs and the model catalogue.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::output::ModelOutput;
use crate::params::PipeParameters;
use crate::signal::{Signal, SignalKind};
use crate::{dpde, lumped, pde};

/// Boundary data shared by every model of a run.
#[derive(Debug, Clone)]
pub struct Boundary {
    pub velocity: Signal,
    pub inlet: Signal,
    pub ambient: Signal,
}

impl Boundary {
    pub fn new(velocity: Signal, inlet: Signal, ambient: Signal) -> Result<Self> {
        if velocity.kind() != SignalKind::Velocity {
            return Err(Error::InvalidSignal {
                name: velocity.name().into(),
                reason: "velocity must be a velocity signal".into(),
            });
        }
        Ok(Self {
            velocity,
            inlet,
            ambient,
        })
    }

    /// Constant velocity, inlet and ambient.
    pub fn constant(v: f64, t_in: f64, t_amb: f64) -> Result<Self> {
        Self::new(
            Signal::constant("v", SignalKind::Velocity, v)?,
            Signal::constant("Tin", SignalKind::Temperature, t_in)?,
            Signal::constant("Tamb", SignalKind::Temperature, t_amb)?,
        )
    }

    /// Inlet ramp 20 → 60 °C over [0, 50] s, ambient 30 → 20 °C over
    /// [0, 200] s, constant 0.5 m/s.
    pub fn ramp_study() -> Self {
        Self::new(
            Signal::constant("v", SignalKind::Velocity, 0.5).unwrap(),
            Signal::ramp("Tin", SignalKind::Temperature, 0.0, 50.0, 20.0, 60.0).unwrap(),
            Signal::ramp("Tamb", SignalKind::Temperature, 0.0, 200.0, 30.0, 20.0).unwrap(),
        )
        .unwrap()
    }

    pub fn is_constant_flow(&self) -> bool {
        self.velocity.is_constant()
    }

    /// `true` if any boundary signal needs history before its first sample
    /// to cover a run starting at `t0` with the given pipe length.
    pub fn needs_prehistory(&self, t0: f64, length: f64) -> bool {
        let tau0 = self.velocity.solve_delay(t0, length).unwrap_or(0.0);
        let earliest = t0 - tau0;
        earliest < self.inlet.first_time()
            || earliest < self.ambient.first_time()
            || earliest < self.velocity.first_time()
    }
}

/// Time grid and start state shared by all integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub t_start: f64,
    pub dt: f64,
    pub t_end: f64,
    /// Uniform initial temperature; defaults to the inlet value at `t_start`.
    pub initial: Option<f64>,
}

impl RunSettings {
    pub fn new(dt: f64, t_end: f64) -> Self {
        Self {
            t_start: 0.0,
            dt,
            t_end,
            initial: None,
        }
    }

    pub fn initial_temperature(&self, boundary: &Boundary) -> f64 {
        self.initial
            .unwrap_or_else(|| boundary.inlet.value_at(self.t_start))
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        crate::output::time_grid(self.t_start, self.dt, self.t_end)
    }
}

pub(crate) const PREHISTORY_NOTE: &str =
    "boundary history before the first sample uses constant hold";

/// Every simulation model of the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Full 1-D PDE (medium + averaged wall) with `n` upwind cells.
    Pde(usize),
    /// Wall-free PDE with the overall coefficient `α_ma`.
    SimplifiedPde(usize),
    /// Delayed-field model with `n` cells.
    Dpde(usize),
    /// Scalar DDE reduction of the delayed-field model.
    Dpde1,
    Ode,
    Dde,
    AdaptedDde,
}

impl ModelKind {
    pub fn run(
        &self,
        params: &PipeParameters,
        boundary: &Boundary,
        settings: &RunSettings,
        probes: &[f64],
    ) -> Result<ModelOutput> {
        let mut out = match *self {
            ModelKind::Pde(n) => pde::simulate_pde(params, boundary, &pde::PdeConfig::new(n, *settings, probes)),
            ModelKind::SimplifiedPde(n) => {
                pde::simulate_simplified_pde(params, boundary, &pde::PdeConfig::new(n, *settings, probes))
            }
            ModelKind::Dpde(n) => dpde::simulate_dpde(params, boundary, &dpde::DpdeConfig::new(n, *settings, probes)),
            ModelKind::Dpde1 => dpde::simulate_dpde1(params, boundary, settings),
            ModelKind::Ode => lumped::simulate_lumped(params, boundary, settings, lumped::Lumped::Ode, probes),
            ModelKind::Dde => lumped::simulate_lumped(params, boundary, settings, lumped::Lumped::Dde, probes),
            ModelKind::AdaptedDde => {
                lumped::simulate_lumped(params, boundary, settings, lumped::Lumped::AdaptedDde, probes)
            }
        }?;
        out.model = self.to_string();
        Ok(out)
    }

    /// Models carrying a wall temperature at the outlet.
    pub fn has_wall(&self) -> bool {
        matches!(self, ModelKind::Pde(_) | ModelKind::Dpde(_) | ModelKind::Dpde1)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Pde(n) => write!(f, "pde:{n}"),
            ModelKind::SimplifiedPde(n) => write!(f, "simplified_pde:{n}"),
            ModelKind::Dpde(n) => write!(f, "dpde:{n}"),
            ModelKind::Dpde1 => f.write_str("dpde1"),
            ModelKind::Ode => f.write_str("ode"),
            ModelKind::Dde => f.write_str("dde"),
            ModelKind::AdaptedDde => f.write_str("adapted_dde"),
        }
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let cells = |arg: &str| -> Result<usize> {
            match arg.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(Error::config("models", format!("`{s}`: cell count must be an integer >= 1"))),
            }
        };
        match s.split_once(':') {
            Some(("pde", n)) => Ok(ModelKind::Pde(cells(n)?)),
            Some(("simplified_pde", n)) => Ok(ModelKind::SimplifiedPde(cells(n)?)),
            Some(("dpde", n)) => Ok(ModelKind::Dpde(cells(n)?)),
            None => match s {
                "dpde1" => Ok(ModelKind::Dpde1),
                "ode" => Ok(ModelKind::Ode),
                "dde" => Ok(ModelKind::Dde),
                "adapted_dde" => Ok(ModelKind::AdaptedDde),
                _ => Err(Error::config("models", format!("unknown model `{s}`"))),
            },
            _ => Err(Error::config("models", format!("unknown model `{s}`"))),
        }
    }
}
