//! Pipe geometry, material data and every lumped coefficient derived from them.
//!
//! All quantities are SI. Temperatures never enter here; the models are affine
//! in temperature, so °C is used throughout the crate.
//!
//! The wall is represented by its area-averaged temperature. The two mean
//! radii `rbar_m`, `rbar_w` make that substitution exact for the stationary
//! radial conduction profile, which gives the overall coefficients
//!
//! ```text
//! 1/ᾱ_mw = 1/α_mw + R̄_m/λ_w        1/ᾱ_wa = 1/α_wa + R̄_w/λ_w
//! 1/α_ma = 1/α_mw + 1/α_wa + (R_m/λ_w)·ln(R_w/R_m)
//! ```
//!
//! and the rate constants of the 1-D model
//!
//! ```text
//! h1 = U_m ᾱ_mw / (A_m ρ_m c_m)    h2 = U_m ᾱ_mw / (A_w ρ_w c_w)
//! h3 = U_w ᾱ_wa / (A_w ρ_w c_w)    h4 = U_w α_ma / (A_m ρ_m c_m)
//! ```

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipeGeometry {
    pub length: f64,
    pub inner_radius: f64,
    pub outer_radius: f64,
}

impl PipeGeometry {
    pub fn new(length: f64, inner_radius: f64, outer_radius: f64) -> Result<Self> {
        let g = Self {
            length,
            inner_radius,
            outer_radius,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        positive("length_m", self.length)?;
        positive("inner_radius_m", self.inner_radius)?;
        positive("outer_radius_m", self.outer_radius)?;
        if self.outer_radius <= self.inner_radius {
            return Err(Error::DegenerateGeometry {
                inner: self.inner_radius,
                outer: self.outer_radius,
            });
        }
        Ok(())
    }

    /// Inner (wetted) perimeter `U_m = 2πR_m`.
    pub fn inner_perimeter(&self) -> f64 {
        2.0 * PI * self.inner_radius
    }

    /// Outer perimeter `U_w = 2πR_w`.
    pub fn outer_perimeter(&self) -> f64 {
        2.0 * PI * self.outer_radius
    }

    /// Flow cross section `A_m = πR_m²`.
    pub fn medium_area(&self) -> f64 {
        PI * self.inner_radius * self.inner_radius
    }

    /// Wall cross section `A_w = π(R_w² − R_m²)`.
    pub fn wall_area(&self) -> f64 {
        PI * (self.outer_radius * self.outer_radius - self.inner_radius * self.inner_radius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialProperties {
    pub rho_m: f64,
    pub cp_m: f64,
    pub rho_w: f64,
    pub cp_w: f64,
    pub lambda_w: f64,
}

impl MaterialProperties {
    pub fn validate(&self) -> Result<()> {
        positive("rho_m", self.rho_m)?;
        positive("cp_m", self.cp_m)?;
        positive("rho_w", self.rho_w)?;
        positive("cp_w", self.cp_w)?;
        positive("lambda_w", self.lambda_w)
    }

    /// Water in a stainless steel wall, as used for both validation studies.
    pub fn water_in_steel() -> Self {
        Self {
            rho_m: 997.04,
            cp_m: 4179.0,
            rho_w: 7856.0,
            cp_w: 500.0,
            lambda_w: 20.0,
        }
    }
}

/// Velocity-dependent medium/wall coefficient `α_mw(v) = intercept + slope·v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineAlpha {
    /// W/(m²·K)
    pub intercept: f64,
    /// W·s/(m³·K)
    pub slope: f64,
}

impl AffineAlpha {
    pub fn at(&self, v: f64) -> f64 {
        self.intercept + self.slope * v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatTransferSpec {
    pub alpha_mw: f64,
    pub alpha_wa: f64,
    pub affine: Option<AffineAlpha>,
    /// Correction factor of the adapted DDE model.
    pub epsilon: f64,
}

impl HeatTransferSpec {
    pub fn validate(&self) -> Result<()> {
        positive("alpha_mw", self.alpha_mw)?;
        positive("alpha_wa", self.alpha_wa)?;
        positive("epsilon", self.epsilon)?;
        if let Some(a) = self.affine {
            positive("alpha_mw0", a.intercept)?;
            if !(a.slope >= 0.0) || !a.slope.is_finite() {
                return Err(Error::param("alpha_mw1", format!("must be >= 0, got {}", a.slope)));
            }
        }
        Ok(())
    }
}

/// Rate constants of the 1-D model, all in 1/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HCoefficients {
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub h4: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCoefficients {
    pub rbar_m: f64,
    pub rbar_w: f64,
    pub bar_alpha_mw: f64,
    pub bar_alpha_wa: f64,
    pub alpha_ma: f64,
    pub h: HCoefficients,
}

/// Mean radii `(R̄_m, R̄_w)` of the averaged wall model.
pub fn mean_radii(geom: &PipeGeometry) -> Result<(f64, f64)> {
    geom.validate()?;
    let rm = geom.inner_radius;
    let rw = geom.outer_radius;
    let ln = (rw / rm).ln();
    let span = rw * rw - rm * rm;
    let rbar_m = rm * (rw * rw / span * ln - 0.5);
    let rbar_w = rm * (-rm * rm / span * ln + 0.5);
    Ok((rbar_m, rbar_w))
}

fn series(a: f64, b: f64) -> f64 {
    1.0 / (1.0 / a + b)
}

/// Overall coefficients `(ᾱ_mw, ᾱ_wa)` relative to the averaged wall temperature.
pub fn overall_coefficients(
    geom: &PipeGeometry,
    mat: &MaterialProperties,
    ht: &HeatTransferSpec,
) -> Result<(f64, f64)> {
    let (rbar_m, rbar_w) = mean_radii(geom)?;
    Ok((
        series(ht.alpha_mw, rbar_m / mat.lambda_w),
        series(ht.alpha_wa, rbar_w / mat.lambda_w),
    ))
}

/// Medium-to-ambient coefficient through the whole wall.
pub fn alpha_ma(geom: &PipeGeometry, mat: &MaterialProperties, ht: &HeatTransferSpec) -> Result<f64> {
    geom.validate()?;
    Ok(alpha_ma_raw(geom, mat.lambda_w, ht.alpha_mw, ht.alpha_wa))
}

fn alpha_ma_raw(geom: &PipeGeometry, lambda_w: f64, alpha_mw: f64, alpha_wa: f64) -> f64 {
    let wall = geom.inner_radius / lambda_w * (geom.outer_radius / geom.inner_radius).ln();
    1.0 / (1.0 / alpha_mw + 1.0 / alpha_wa + wall)
}

/// `h1..h4`. With `v` given, `h1`/`h2` use `α_mw(v)` from the affine pair.
pub fn h_parameters(
    geom: &PipeGeometry,
    mat: &MaterialProperties,
    ht: &HeatTransferSpec,
    v: Option<f64>,
) -> Result<HCoefficients> {
    let (rbar_m, rbar_w) = mean_radii(geom)?;
    let alpha_mw = match v {
        None => ht.alpha_mw,
        Some(v) => {
            let affine = ht.affine.ok_or(Error::MissingAffineCoefficients)?;
            if !(v > 0.0) {
                return Err(Error::NonPositiveVelocity { t: f64::NAN, value: v });
            }
            affine.at(v)
        }
    };
    let bar_mw = series(alpha_mw, rbar_m / mat.lambda_w);
    let bar_wa = series(ht.alpha_wa, rbar_w / mat.lambda_w);
    let medium_cap = geom.medium_area() * mat.rho_m * mat.cp_m;
    let wall_cap = geom.wall_area() * mat.rho_w * mat.cp_w;
    Ok(HCoefficients {
        h1: geom.inner_perimeter() * bar_mw / medium_cap,
        h2: geom.inner_perimeter() * bar_mw / wall_cap,
        h3: geom.outer_perimeter() * bar_wa / wall_cap,
        h4: geom.outer_perimeter() * alpha_ma_raw(geom, mat.lambda_w, ht.alpha_mw, ht.alpha_wa)
            / medium_cap,
    })
}

/// Complete, validated parameter set with its derived coefficients cached.
#[derive(Debug, Clone, PartialEq)]
pub struct PipeParameters {
    pub geometry: PipeGeometry,
    pub material: MaterialProperties,
    pub heat: HeatTransferSpec,
    derived: DerivedCoefficients,
}

impl PipeParameters {
    pub fn new(
        geometry: PipeGeometry,
        material: MaterialProperties,
        heat: HeatTransferSpec,
    ) -> Result<Self> {
        geometry.validate()?;
        material.validate()?;
        heat.validate()?;
        let (rbar_m, rbar_w) = mean_radii(&geometry)?;
        let (bar_alpha_mw, bar_alpha_wa) = overall_coefficients(&geometry, &material, &heat)?;
        let derived = DerivedCoefficients {
            rbar_m,
            rbar_w,
            bar_alpha_mw,
            bar_alpha_wa,
            alpha_ma: alpha_ma(&geometry, &material, &heat)?,
            h: h_parameters(&geometry, &material, &heat, None)?,
        };
        Ok(Self {
            geometry,
            material,
            heat,
            derived,
        })
    }

    /// Simulation-study column of the validation parameter table (5 m pipe).
    pub fn simulation_study() -> Self {
        Self::new(
            PipeGeometry {
                length: 5.0,
                inner_radius: 0.0077,
                outer_radius: 0.01065,
            },
            MaterialProperties::water_in_steel(),
            HeatTransferSpec {
                alpha_mw: 1000.0,
                alpha_wa: 80.0,
                affine: None,
                epsilon: 0.7,
            },
        )
        .expect("table parameters are valid")
    }

    /// Measurement column of the validation parameter table (1.62 m test rig).
    pub fn measurement_study() -> Self {
        Self::new(
            PipeGeometry {
                length: 1.62,
                inner_radius: 0.0077,
                outer_radius: 0.01065,
            },
            MaterialProperties::water_in_steel(),
            HeatTransferSpec {
                alpha_mw: 3052.87,
                alpha_wa: 46.98,
                affine: None,
                epsilon: 0.91,
            },
        )
        .expect("table parameters are valid")
    }

    pub fn derived(&self) -> &DerivedCoefficients {
        &self.derived
    }

    pub fn h(&self) -> HCoefficients {
        self.derived.h
    }

    pub fn length(&self) -> f64 {
        self.geometry.length
    }

    /// `(h1, h2)` at velocity `v`: affine when the pair is configured, constant otherwise.
    pub fn h12_at(&self, v: f64) -> (f64, f64) {
        match self.heat.affine {
            None => (self.derived.h.h1, self.derived.h.h2),
            Some(_) => {
                let h = h_parameters(&self.geometry, &self.material, &self.heat, Some(v))
                    .expect("validated parameters with positive velocity");
                (h.h1, h.h2)
            }
        }
    }

    /// Same parameters with the medium/wall and wall/ambient coefficients replaced.
    pub fn with_alphas(&self, alpha_mw: f64, alpha_wa: f64) -> Result<Self> {
        let mut heat = self.heat;
        heat.alpha_mw = alpha_mw;
        heat.alpha_wa = alpha_wa;
        Self::new(self.geometry, self.material, heat)
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        let mut heat = self.heat;
        heat.epsilon = epsilon;
        Self::new(self.geometry, self.material, heat)
    }

    pub fn with_length(&self, length: f64) -> Result<Self> {
        let mut geometry = self.geometry;
        geometry.length = length;
        Self::new(geometry, self.material, self.heat)
    }

    /// Perfectly insulated variant (`α_wa → 0`, hence `h3 = h4 = 0`).
    pub fn insulated(&self) -> Self {
        let mut p = self.clone();
        p.derived.h.h3 = 0.0;
        p.derived.h.h4 = 0.0;
        p.derived.bar_alpha_wa = 0.0;
        p.derived.alpha_ma = 0.0;
        p
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: ParameterFile =
            toml::from_str(&text).map_err(|e| Error::format(path, e.to_string()))?;
        file.into_parameters()
    }
}

/// Flat key-value parameter document. Lengths may be given in metres (`*_m`)
/// or millimetres (`*_mm`), and are converted to metres here.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterFile {
    pub length_m: Option<f64>,
    pub inner_radius_m: Option<f64>,
    pub inner_radius_mm: Option<f64>,
    pub outer_radius_m: Option<f64>,
    pub outer_radius_mm: Option<f64>,
    pub rho_m: Option<f64>,
    pub cp_m: Option<f64>,
    pub rho_w: Option<f64>,
    pub cp_w: Option<f64>,
    pub lambda_w: Option<f64>,
    pub alpha_mw: Option<f64>,
    pub alpha_wa: Option<f64>,
    pub alpha_mw0: Option<f64>,
    pub alpha_mw1: Option<f64>,
    pub epsilon: Option<f64>,
}

impl ParameterFile {
    pub fn into_parameters(self) -> Result<PipeParameters> {
        fn req(v: Option<f64>, key: &str) -> Result<f64> {
            v.ok_or_else(|| Error::config(key, "missing"))
        }
        fn length(m: Option<f64>, mm: Option<f64>, key: &str) -> Result<f64> {
            match (m, mm) {
                (Some(_), Some(_)) => Err(Error::config(key, "given both in m and mm")),
                (Some(m), None) => Ok(m),
                (None, Some(mm)) => Ok(mm * 1e-3),
                (None, None) => Err(Error::config(format!("{key}_m"), "missing")),
            }
        }
        let affine = match (self.alpha_mw0, self.alpha_mw1) {
            (None, None) => None,
            (Some(intercept), Some(slope)) => Some(AffineAlpha { intercept, slope }),
            _ => {
                return Err(Error::config(
                    "alpha_mw0",
                    "alpha_mw0 and alpha_mw1 must be given together",
                ))
            }
        };
        PipeParameters::new(
            PipeGeometry {
                length: req(self.length_m, "length_m")?,
                inner_radius: length(self.inner_radius_m, self.inner_radius_mm, "inner_radius")?,
                outer_radius: length(self.outer_radius_m, self.outer_radius_mm, "outer_radius")?,
            },
            MaterialProperties {
                rho_m: req(self.rho_m, "rho_m")?,
                cp_m: req(self.cp_m, "cp_m")?,
                rho_w: req(self.rho_w, "rho_w")?,
                cp_w: req(self.cp_w, "cp_w")?,
                lambda_w: req(self.lambda_w, "lambda_w")?,
            },
            HeatTransferSpec {
                alpha_mw: req(self.alpha_mw, "alpha_mw")?,
                alpha_wa: req(self.alpha_wa, "alpha_wa")?,
                affine,
                epsilon: self.epsilon.unwrap_or(1.0),
            },
        )
    }

    pub fn from_parameters(p: &PipeParameters) -> Self {
        Self {
            length_m: Some(p.geometry.length),
            inner_radius_m: Some(p.geometry.inner_radius),
            outer_radius_m: Some(p.geometry.outer_radius),
            rho_m: Some(p.material.rho_m),
            cp_m: Some(p.material.cp_m),
            rho_w: Some(p.material.rho_w),
            cp_w: Some(p.material.cp_w),
            lambda_w: Some(p.material.lambda_w),
            alpha_mw: Some(p.heat.alpha_mw),
            alpha_wa: Some(p.heat.alpha_wa),
            alpha_mw0: p.heat.affine.map(|a| a.intercept),
            alpha_mw1: p.heat.affine.map(|a| a.slope),
            epsilon: Some(p.heat.epsilon),
            ..Default::default()
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be finite and > 0, got {v}")))
    }
}
