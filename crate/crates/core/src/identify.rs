//! Least-squares identification of heat-transfer coefficients.
//!
//! `α_mw`, `α_wa` are fitted for the PDE and delayed-field models; for the
//! adapted DDE the coefficients stay fixed (so `α_ma` follows from them) and
//! only `ε` is fitted. The loss is the sum of squared outlet residuals on the
//! measured grid, optionally plus the wall residuals.

use std::cell::RefCell;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::{read_measurement_csv, MeasurementTable};
use crate::metrics::residuals;
use crate::model::{Boundary, ModelKind, RunSettings};
use crate::output::{probe_column, ModelOutput, OUTLET, WALL};
use crate::params::PipeParameters;
use crate::signal::{Signal, SignalKind};

mod nelder_mead;

pub use nelder_mead::{minimize, Minimum, NelderMeadOptions};

/// Measured series on a common time base.
#[derive(Debug, Clone)]
pub struct MeasurementSet {
    pub boundary: Boundary,
    pub outlet: Signal,
    pub wall: Option<Signal>,
    /// Interior medium temperature and its position in metres; dropped when
    /// no position is given.
    pub probe: Option<(f64, Signal)>,
}

fn finite_signal(name: &str, kind: SignalKind, t: &[f64], y: &[f64]) -> Result<Option<Signal>> {
    let (tt, yy): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(y)
        .filter(|(t, y)| t.is_finite() && y.is_finite())
        .map(|(&t, &y)| (t, y))
        .unzip();
    if tt.is_empty() {
        return Ok(None);
    }
    Signal::new(name, kind, tt, yy).map(Some)
}

impl MeasurementSet {
    pub fn from_table(tab: &MeasurementTable, probe_position: Option<f64>, default_ambient: Option<f64>) -> Result<Self> {
        let t = &tab.t;
        let need = |name: &str, s: Option<Signal>| {
            s.ok_or_else(|| Error::config(name, "column has no values"))
        };
        let velocity = need("v", finite_signal("v", SignalKind::Velocity, t, &tab.v)?)?;
        let inlet = need("Tin", finite_signal("Tin", SignalKind::Temperature, t, &tab.t_in)?)?;
        let outlet = need("Tout", finite_signal("Tout", SignalKind::Temperature, t, &tab.t_out)?)?;
        let ambient = match finite_signal("Tamb", SignalKind::Temperature, t, &tab.t_amb)? {
            Some(s) => s,
            None => match default_ambient {
                Some(c) => Signal::constant("Tamb", SignalKind::Temperature, c)?,
                None => return Err(Error::config("Tamb", "no ambient column and no constant given")),
            },
        };
        let wall = finite_signal("Tw_out", SignalKind::Temperature, t, &tab.t_wall)?;
        let probe = match (probe_position, finite_signal("Tm_probe", SignalKind::Temperature, t, &tab.t_probe)?) {
            (Some(z), Some(s)) => Some((z, s)),
            _ => None,
        };
        Ok(Self {
            boundary: Boundary::new(velocity, inlet, ambient)?,
            outlet,
            wall,
            probe,
        })
    }

    pub fn from_csv(path: &Path, probe_position: Option<f64>, default_ambient: Option<f64>) -> Result<Self> {
        Self::from_table(&read_measurement_csv(path)?, probe_position, default_ambient)
    }

    /// Builds a measurement set from a model run (synthetic data).
    pub fn from_output(out: &ModelOutput, boundary: Boundary, probe_position: Option<f64>) -> Result<Self> {
        let probe = match probe_position {
            Some(z) => Some((z, out.series(&probe_column(z))?)),
            None => None,
        };
        Ok(Self {
            boundary,
            outlet: out.series(OUTLET)?,
            wall: out.series(WALL).ok(),
            probe,
        })
    }

    pub fn start_time(&self) -> f64 {
        self.outlet.first_time()
    }

    pub fn end_time(&self) -> f64 {
        self.outlet.last_time()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    Pde(usize),
    Dpde(usize),
    AdaptedDde,
}

impl FitModel {
    fn kind(self) -> ModelKind {
        match self {
            FitModel::Pde(n) => ModelKind::Pde(n),
            FitModel::Dpde(n) => ModelKind::Dpde(n),
            FitModel::AdaptedDde => ModelKind::AdaptedDde,
        }
    }
}

impl std::str::FromStr for FitModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<ModelKind>()? {
            ModelKind::Pde(n) => Ok(FitModel::Pde(n)),
            ModelKind::Dpde(n) => Ok(FitModel::Dpde(n)),
            ModelKind::AdaptedDde => Ok(FitModel::AdaptedDde),
            other => Err(Error::config("model", format!("`{other}` cannot be identified"))),
        }
    }
}

/// Box bounds on the fitted parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub alpha_mw: (f64, f64),
    pub alpha_wa: (f64, f64),
    pub epsilon: (f64, f64),
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            alpha_mw: (10.0, 20_000.0),
            alpha_wa: (1.0, 1_000.0),
            epsilon: (0.05, 5.0),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IdentifyOptions {
    pub model: FitModel,
    pub bounds: Bounds,
    /// Initial `(α_mw, α_wa, ε)`.
    pub initial: (f64, f64, f64),
    pub dt: f64,
    pub include_wall: bool,
    pub optimizer: NelderMeadOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: String,
    pub alpha_mw: f64,
    pub alpha_wa: f64,
    pub epsilon: f64,
    /// Outlet `e2` at the fitted parameters, °C.
    pub residual: f64,
    pub loss: f64,
    pub initial_loss: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

fn check_in(name: &'static str, x: f64, (lo, hi): (f64, f64)) -> Result<()> {
    if lo > 0.0 && lo <= x && x <= hi {
        Ok(())
    } else {
        Err(Error::param(name, format!("initial value {x} outside bounds [{lo}, {hi}] (lower bound must be > 0)")))
    }
}

fn sum_sq(d: &[f64]) -> f64 {
    d.iter().map(|x| x * x).sum()
}

pub fn identify(meas: &MeasurementSet, base: &PipeParameters, opts: &IdentifyOptions) -> Result<FitResult> {
    let b = &opts.bounds;
    let (a0, w0, e0) = opts.initial;
    let settings = RunSettings {
        t_start: meas.start_time(),
        dt: opts.dt,
        t_end: meas.end_time(),
        initial: Some(meas.outlet.value_at(meas.start_time())),
    };
    let kind = opts.model.kind();
    let with_wall = opts.include_wall && kind.has_wall();
    if opts.include_wall && meas.wall.is_none() {
        return Err(Error::config("include_wall", "measurement set has no wall column"));
    }

    let simulate = |p: &PipeParameters| -> Result<f64> {
        let out = kind.run(p, &meas.boundary, &settings, &[])?;
        let mut loss = sum_sq(&residuals(&meas.outlet, &out.series(OUTLET)?)?);
        if with_wall {
            let wall = meas.wall.as_ref().expect("checked above");
            loss += sum_sq(&residuals(wall, &out.series(WALL)?)?);
        }
        Ok(loss)
    };

    let (params_of, lo, hi, x0): (Box<dyn Fn(&[f64]) -> Result<PipeParameters>>, Vec<f64>, Vec<f64>, Vec<f64>) =
        match opts.model {
            FitModel::Pde(_) | FitModel::Dpde(_) => {
                check_in("alpha_mw", a0, b.alpha_mw)?;
                check_in("alpha_wa", w0, b.alpha_wa)?;
                (
                    Box::new(|x: &[f64]| base.with_alphas(x[0], x[1])),
                    vec![b.alpha_mw.0, b.alpha_wa.0],
                    vec![b.alpha_mw.1, b.alpha_wa.1],
                    vec![a0, w0],
                )
            }
            FitModel::AdaptedDde => {
                check_in("epsilon", e0, b.epsilon)?;
                (
                    Box::new(|x: &[f64]| base.with_epsilon(x[0])),
                    vec![b.epsilon.0],
                    vec![b.epsilon.1],
                    vec![e0],
                )
            }
        };

    // Search in log space: the coefficients span orders of magnitude.
    let to_x = |y: &[f64]| -> Vec<f64> { y.iter().map(|v| v.exp()).collect() };
    let ln = |v: &[f64]| -> Vec<f64> { v.iter().map(|x| x.ln()).collect() };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let mut loss = |y: &[f64]| -> f64 {
        match params_of(&to_x(y)).and_then(|p| simulate(&p)) {
            Ok(l) => l,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::INFINITY
            }
        }
    };
    let initial_loss = loss(&ln(&x0));
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    let min = minimize(&mut loss, &ln(&x0), &ln(&lo), &ln(&hi), &opts.optimizer);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let x = to_x(&min.x);
    if !min.converged {
        return Err(Error::NotConverged {
            iterations: min.iterations,
            best_loss: min.value,
            best: x,
        });
    }

    let fitted = params_of(&x)?;
    let out = kind.run(&fitted, &meas.boundary, &settings, &[])?;
    let residual = crate::metrics::rms_error(&meas.outlet, &out.series(OUTLET)?)?;
    Ok(FitResult {
        model: kind.to_string(),
        alpha_mw: fitted.heat.alpha_mw,
        alpha_wa: fitted.heat.alpha_wa,
        epsilon: fitted.heat.epsilon,
        residual,
        loss: min.value,
        initial_loss,
        iterations: min.iterations,
        evaluations: min.evaluations,
    })
}
