//! Scenario files and model comparison runs.
//!
//! ```toml
//! parameters = "pipe.toml"          # or an inline [pipe] table
//!
//! [signals]
//! velocity = "const:0.5"
//! inlet = "ramp:0,50,20,60"
//! ambient = "csv:ambient.csv"
//!
//! [run]
//! models = ["dde", "adapted_dde", "dpde1", "dpde:5"]
//! reference = "pde:200"
//! dt_s = 0.025
//! t_end_s = 200
//! probes_m = [1.0]
//! output_dir = "out"
//! ```
//!
//! Relative input paths resolve against the scenario file. The output
//! directory resolves against the working directory and defaults to
//! `$THERMOPIPE_OUT`, then `thermopipe-out`.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::write_output_csv;
use crate::metrics::column_errors;
use crate::model::{Boundary, ModelKind, RunSettings};
use crate::output::{probe_column, ModelOutput, OUTLET, WALL};
use crate::par::Exec;
use crate::params::{ParameterFile, PipeParameters};
use crate::signal::{Signal, SignalKind};

pub const OUTPUT_DIR_ENV: &str = "THERMOPIPE_OUT";
const DEFAULT_OUTPUT_DIR: &str = "thermopipe-out";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    parameters: Option<String>,
    pipe: Option<ParameterFile>,
    signals: SignalsSection,
    run: RunSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignalsSection {
    velocity: String,
    inlet: String,
    ambient: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    #[serde(default)]
    models: Vec<String>,
    reference: String,
    dt_s: f64,
    t_end_s: f64,
    #[serde(default)]
    t_start_s: f64,
    initial_c: Option<f64>,
    #[serde(default)]
    probes_m: Vec<f64>,
    output_dir: Option<String>,
}

/// Validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub params: PipeParameters,
    pub boundary: Boundary,
    pub reference: ModelKind,
    /// Candidate models, without the reference.
    pub models: Vec<ModelKind>,
    pub settings: RunSettings,
    pub probes: Vec<f64>,
    pub output_dir: PathBuf,
}

impl Scenario {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scenario".into());
        Self::from_toml(&name, &text, path.parent())
    }

    pub fn from_toml(name: &str, text: &str, base: Option<&Path>) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::config(name, e.message().to_string()))?;
        let params = match (file.parameters, file.pipe) {
            (Some(_), Some(_)) => return Err(Error::config("parameters", "give either `parameters` or [pipe], not both")),
            (Some(p), None) => {
                let p = Path::new(&p);
                let path = match base {
                    Some(b) if p.is_relative() => b.join(p),
                    _ => p.to_path_buf(),
                };
                if !path.exists() {
                    return Err(Error::config("parameters", format!("file not found: {}", path.display())));
                }
                PipeParameters::from_file(&path)?
            }
            (None, Some(pipe)) => pipe.into_parameters()?,
            (None, None) => return Err(Error::config("parameters", "missing `parameters` path or [pipe] table")),
        };

        let signal = |field: &str, kind: SignalKind, spec: &str| -> Result<Signal> {
            if let Some(rest) = spec.trim().strip_prefix("csv:") {
                let p = Path::new(rest.trim());
                let path = match base {
                    Some(b) if p.is_relative() => b.join(p),
                    _ => p.to_path_buf(),
                };
                if !path.exists() {
                    return Err(Error::config(
                        format!("signals.{field}"),
                        format!("file not found: {}", path.display()),
                    ));
                }
            }
            Signal::parse_spec(field, kind, spec, base)
        };
        let s = &file.signals;
        let boundary = Boundary::new(
            signal("velocity", SignalKind::Velocity, &s.velocity)?,
            signal("inlet", SignalKind::Temperature, &s.inlet)?,
            signal("ambient", SignalKind::Temperature, &s.ambient)?,
        )?;

        let r = file.run;
        let positive = |field: &str, x: f64| -> Result<()> {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::config(format!("run.{field}"), format!("must be > 0, got {x}")))
            }
        };
        positive("dt_s", r.dt_s)?;
        positive("t_end_s", r.t_end_s)?;
        if r.t_end_s <= r.t_start_s {
            return Err(Error::config("run.t_end_s", "must exceed t_start_s"));
        }
        let reference: ModelKind = r.reference.parse()?;
        let mut models = Vec::new();
        for m in &r.models {
            let kind: ModelKind = m.parse()?;
            if kind != reference && !models.contains(&kind) {
                models.push(kind);
            }
        }
        for &z in &r.probes_m {
            if !(z > 0.0 && z <= params.length()) {
                return Err(Error::config("run.probes_m", format!("{z} m outside (0, {}]", params.length())));
            }
        }
        let output_dir = r
            .output_dir
            .or_else(|| std::env::var(OUTPUT_DIR_ENV).ok())
            .unwrap_or_else(|| DEFAULT_OUTPUT_DIR.into())
            .into();

        Ok(Self {
            name: name.into(),
            params,
            boundary,
            reference,
            models,
            settings: RunSettings {
                t_start: r.t_start_s,
                dt: r.dt_s,
                t_end: r.t_end_s,
                initial: r.initial_c,
            },
            probes: r.probes_m,
            output_dir,
        })
    }

    /// Reference first, then the candidates.
    pub fn all_models(&self) -> Vec<ModelKind> {
        std::iter::once(self.reference).chain(self.models.iter().copied()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnErrors {
    pub column: String,
    pub e2: f64,
    pub e_inf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub model: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default)]
    pub errors: Vec<ColumnErrors>,
    /// Wall-clock seconds; kept out of the written report so it stays
    /// reproducible.
    #[serde(skip)]
    pub runtime_s: f64,
}

impl ModelReport {
    pub fn errors_for(&self, column: &str) -> Option<&ColumnErrors> {
        self.errors.iter().find(|c| c.column == column)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub scenario: String,
    pub reference: String,
    pub dt_s: f64,
    pub t_end_s: f64,
    pub models: Vec<ModelReport>,
}

impl ComparisonReport {
    pub fn model(&self, name: &str) -> Option<&ModelReport> {
        self.models.iter().find(|m| m.model == name)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report is always serializable")
    }
}

/// Report plus the in-memory trajectories.
#[derive(Debug)]
pub struct Comparison {
    pub report: ComparisonReport,
    pub outputs: Vec<(ModelKind, Result<ModelOutput>)>,
}

fn compared_columns(sc: &Scenario) -> Vec<String> {
    let mut cols = vec![OUTLET.to_string(), WALL.to_string()];
    cols.extend(sc.probes.iter().map(|&z| probe_column(z)));
    cols
}

/// Runs every model (concurrently under `Exec::Parallel`) and scores the
/// candidates against the reference. A failing candidate is reported, not
/// fatal; a failing reference is.
pub fn compare(sc: &Scenario, exec: Exec) -> Result<Comparison> {
    let kinds = sc.all_models();
    let runs = exec.map(&kinds, |m| {
        let start = Instant::now();
        let out = m.run(&sc.params, &sc.boundary, &sc.settings, &sc.probes);
        (out, start.elapsed().as_secs_f64())
    });
    let mut outputs = Vec::with_capacity(kinds.len());
    let mut timings = Vec::with_capacity(kinds.len());
    for (k, (out, secs)) in kinds.iter().zip(runs) {
        outputs.push((*k, out));
        timings.push(secs);
    }
    let reference = match &outputs[0].1 {
        Ok(o) => o,
        Err(e) => {
            return Err(Error::Unsupported {
                model: sc.reference.to_string(),
                reason: format!("reference run failed: {e}"),
            })
        }
    };
    let columns = compared_columns(sc);
    let mut models = Vec::new();
    for ((kind, out), secs) in outputs.iter().zip(&timings) {
        let mut rep = ModelReport {
            model: kind.to_string(),
            status: "ok".into(),
            error: None,
            file: None,
            notes: Vec::new(),
            errors: Vec::new(),
            runtime_s: *secs,
        };
        match out {
            Ok(o) => {
                rep.notes.clone_from(&o.notes);
                for c in &columns {
                    if o.column(c).is_some() && reference.column(c).is_some() {
                        let (e2, e_inf) = column_errors(reference, o, c)?;
                        rep.errors.push(ColumnErrors { column: c.clone(), e2, e_inf });
                    }
                }
            }
            Err(e) => {
                rep.status = "failed".into();
                rep.error = Some(e.to_string());
            }
        }
        models.push(rep);
    }
    Ok(Comparison {
        report: ComparisonReport {
            scenario: sc.name.clone(),
            reference: sc.reference.to_string(),
            dt_s: sc.settings.dt,
            t_end_s: sc.settings.t_end,
            models,
        },
        outputs,
    })
}

pub fn output_file_name(kind: &ModelKind) -> String {
    format!("{}.csv", kind.to_string().replace(':', "_"))
}

/// `compare`, then write one CSV per successful model and `report.toml`.
pub fn run_scenario(sc: &Scenario, exec: Exec) -> Result<ComparisonReport> {
    let mut cmp = compare(sc, exec)?;
    let dir = &sc.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for ((kind, out), rep) in cmp.outputs.iter().zip(&mut cmp.report.models) {
        if let Ok(o) = out {
            let name = output_file_name(kind);
            write_output_csv(&dir.join(&name), o)?;
            rep.file = Some(name);
        }
    }
    let path = dir.join("report.toml");
    std::fs::write(&path, cmp.report.to_toml()).map_err(|e| Error::io(&path, e))?;
    Ok(cmp.report)
}
