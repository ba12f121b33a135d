use crate::error::{Error, Result};
use crate::signal::{Signal, SignalKind};

pub const OUTLET: &str = "Tm_out";
pub const WALL: &str = "Tw_out";
pub const INLET_DELAYED: &str = "Tin_delayed";

pub fn probe_column(z: f64) -> String {
    format!("Tm_probe_{z}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    /// NaN marks "no value at this time" (written as an empty CSV field).
    pub values: Vec<f64>,
}

/// Time series produced by any model on a fixed time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelOutput {
    pub model: String,
    pub times: Vec<f64>,
    pub columns: Vec<Column>,
    /// Free-form metadata, e.g. conventions applied during the run.
    pub notes: Vec<String>,
}

impl ModelOutput {
    pub fn new(model: impl Into<String>, times: Vec<f64>) -> Self {
        Self {
            model: model.into(),
            times,
            columns: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.times.len());
        self.columns.push(Column {
            name: name.into(),
            values,
        });
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn outlet(&self) -> &[f64] {
        self.column(OUTLET).expect("every model emits the outlet temperature")
    }

    pub fn wall(&self) -> Option<&[f64]> {
        self.column(WALL)
    }

    /// Column as an interpolating signal, dropping rows without a value.
    pub fn series(&self, name: &str) -> Result<Signal> {
        let values = self.column(name).ok_or_else(|| Error::InvalidSignal {
            name: name.into(),
            reason: format!("model `{}` has no such column", self.model),
        })?;
        let (t, y): (Vec<f64>, Vec<f64>) = self
            .times
            .iter()
            .zip(values)
            .filter(|(_, y)| y.is_finite())
            .map(|(&t, &y)| (t, y))
            .unzip();
        Signal::new(format!("{}:{name}", self.model), SignalKind::Temperature, t, y)
    }

    /// Last finite value of a column.
    pub fn final_value(&self, name: &str) -> Option<f64> {
        self.column(name)?.iter().rev().copied().find(|y| y.is_finite())
    }

    /// Maps every temperature column through `a·T + b`.
    pub fn map_affine(&self, a: f64, b: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.columns {
            for y in &mut c.values {
                *y = a * *y + b;
            }
        }
        out
    }
}

/// Uniform simulation time grid `t0, t0 + dt, …` covering `[t0, t_end]`.
pub fn time_grid(t0: f64, dt: f64, t_end: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::param("dt", format!("must be > 0, got {dt}")));
    }
    if !(t_end > t0) {
        return Err(Error::param("t_end", format!("must exceed start time {t0}, got {t_end}")));
    }
    let steps = ((t_end - t0) / dt - 1e-9).ceil() as usize;
    Ok((0..=steps).map(|k| t0 + k as f64 * dt).collect())
}
