use approx::assert_relative_eq;
use proptest::prelude::*;
use thermopipe::params::{
    alpha_ma, h_parameters, mean_radii, overall_coefficients, AffineAlpha, HeatTransferSpec, MaterialProperties,
    ParameterFile, PipeGeometry,
};
use thermopipe::PipeParameters;

fn geometry(rm: f64, rw: f64) -> PipeGeometry {
    PipeGeometry {
        length: 5.0,
        inner_radius: rm,
        outer_radius: rw,
    }
}

fn heat(alpha_mw: f64, alpha_wa: f64) -> HeatTransferSpec {
    HeatTransferSpec {
        alpha_mw,
        alpha_wa,
        affine: None,
        epsilon: 1.0,
    }
}

#[test]
fn mean_radii_sum_identity() {
    let (a, b) = mean_radii(&geometry(0.0077, 0.01065)).unwrap();
    assert_relative_eq!(a + b, 0.0077 * (0.01065f64 / 0.0077).ln(), max_relative = 1e-14);
    assert_relative_eq!(a + b, 2.497414637377628e-3, max_relative = 1e-12);

    let (a, b) = mean_radii(&geometry(0.01, 0.010001)).unwrap();
    // thin wall: both radii tend to half the thickness
    assert_relative_eq!(a, 0.5e-6, max_relative = 1e-3);
    assert_relative_eq!(b, 0.5e-6, max_relative = 1e-3);
    assert_relative_eq!(a + b, 0.01 * (1.0001f64).ln(), max_relative = 1e-6);
}

#[test]
fn degenerate_geometry_is_rejected() {
    assert!(mean_radii(&geometry(0.01, 0.01)).is_err());
    assert!(mean_radii(&geometry(0.02, 0.01)).is_err());
}

#[test]
fn infinite_conductivity_removes_wall_resistance() {
    let mut mat = MaterialProperties::water_in_steel();
    mat.lambda_w = 1e300;
    let (mw, wa) = overall_coefficients(&geometry(0.0077, 0.01065), &mat, &heat(1000.0, 80.0)).unwrap();
    assert_relative_eq!(mw, 1000.0, max_relative = 1e-12);
    assert_relative_eq!(wa, 80.0, max_relative = 1e-12);
}

#[test]
fn affine_mode_with_zero_slope_matches_constant_mode() {
    let g = geometry(0.0077, 0.01065);
    let m = MaterialProperties::water_in_steel();
    let mut ht = heat(1000.0, 80.0);
    let constant = h_parameters(&g, &m, &ht, None).unwrap();
    ht.affine = Some(AffineAlpha {
        intercept: 1000.0,
        slope: 0.0,
    });
    let affine = h_parameters(&g, &m, &ht, Some(0.7)).unwrap();
    assert_eq!(constant, affine);

    ht.affine = None;
    assert!(h_parameters(&g, &m, &ht, Some(0.7)).is_err());
}

#[test]
fn medium_heat_capacity_scales_h1_and_h4_only() {
    let g = geometry(0.0077, 0.01065);
    let m = MaterialProperties::water_in_steel();
    let mut m2 = m;
    m2.rho_m *= 2.0;
    let a = h_parameters(&g, &m, &heat(1000.0, 80.0), None).unwrap();
    let b = h_parameters(&g, &m2, &heat(1000.0, 80.0), None).unwrap();
    assert_relative_eq!(b.h1, a.h1 / 2.0, max_relative = 1e-14);
    assert_relative_eq!(b.h4, a.h4 / 2.0, max_relative = 1e-14);
    assert_eq!(a.h2, b.h2);
    assert_eq!(a.h3, b.h3);
}

#[test]
fn derived_coefficients_respect_their_bounds() {
    for p in [PipeParameters::simulation_study(), PipeParameters::measurement_study()] {
        let d = p.derived();
        assert!(d.rbar_m > 0.0 && d.rbar_w > 0.0);
        assert!(d.bar_alpha_mw < p.heat.alpha_mw);
        assert!(d.bar_alpha_wa < p.heat.alpha_wa);
        assert!(d.alpha_ma < p.heat.alpha_mw.min(p.heat.alpha_wa));
        let h = d.h;
        assert!(h.h1 > 0.0 && h.h2 > 0.0 && h.h3 > 0.0 && h.h4 > 0.0);
    }
}

#[test]
fn parameter_file_round_trip_and_units() {
    let p = PipeParameters::simulation_study();
    let text = toml::to_string(&ParameterFile::from_parameters(&p)).unwrap();
    let q: ParameterFile = toml::from_str(&text).unwrap();
    assert_eq!(q.into_parameters().unwrap(), p);

    let mm = "length_m = 5\ninner_radius_mm = 7.7\nouter_radius_mm = 10.65\nrho_m = 997.04\ncp_m = 4179\n\
              rho_w = 7856\ncp_w = 500\nlambda_w = 20\nalpha_mw = 1000\nalpha_wa = 80\nepsilon = 0.7\n";
    let q: ParameterFile = toml::from_str(mm).unwrap();
    let q = q.into_parameters().unwrap();
    assert_relative_eq!(q.geometry.inner_radius, 0.0077, max_relative = 1e-15);
    assert_relative_eq!(q.h().h1, p.h().h1, max_relative = 1e-12);
    assert!(toml::from_str::<ParameterFile>("length_m = 5\nbogus = 1\n").is_err());
}

/// Stationary radial conduction `(r T')' = 0` in the wall, integrated with RK4
/// as the first-order system `T' = −q R_m/(λ r)`, and the area average
/// `∫ T 2r dr / (R_w² − R_m²)` accumulated alongside. Works on `T − T(R_m)`
/// to keep the small differences free of cancellation.
fn radial_profile(rm: f64, rw: f64, lambda: f64, q_m: f64, t_inner: f64) -> (f64, f64) {
    let steps = 20_000;
    let h = (rw - rm) / steps as f64;
    // state [T, ∫ 2rT dr]
    let f = |r: f64, t: f64| -> [f64; 2] { [-q_m * rm / (lambda * r), 2.0 * r * t] };
    let mut y = [0.0, 0.0];
    for k in 0..steps {
        let r = rm + k as f64 * h;
        let k1 = f(r, y[0]);
        let k2 = f(r + 0.5 * h, y[0] + 0.5 * h * k1[0]);
        let k3 = f(r + 0.5 * h, y[0] + 0.5 * h * k2[0]);
        let k4 = f(r + h, y[0] + h * k3[0]);
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    (t_inner + y[0], t_inner + y[1] / (rw * rw - rm * rm))
}

#[test]
fn averaged_wall_reproduces_stationary_radial_flux() {
    let p = PipeParameters::simulation_study();
    let (g, lambda) = (p.geometry, p.material.lambda_w);
    let d = p.derived();
    let (t_medium, q_m) = (60.0, 1500.0);
    let t_inner = t_medium - q_m / p.heat.alpha_mw;
    let (t_outer, t_mean) = radial_profile(g.inner_radius, g.outer_radius, lambda, q_m, t_inner);

    // medium side: the averaged model's flux equals the radial one
    let q_avg = d.bar_alpha_mw * (t_medium - t_mean);
    assert_relative_eq!(q_avg, q_m, max_relative = 1e-10);
    // conduction between the mean wall temperature and either surface
    assert_relative_eq!(t_inner - t_mean, d.rbar_m * q_m / lambda, max_relative = 1e-10);
    assert_relative_eq!(t_mean - t_outer, d.rbar_w * q_m / lambda, max_relative = 1e-10);
}

proptest! {
    #[test]
    fn alpha_ma_formula_residual(
        amw in 10.0f64..1e5, awa in 1.0f64..1e4, lambda in 0.1f64..500.0,
        rm in 1e-3f64..0.5, ratio in 1.0001f64..3.0,
    ) {
        let g = geometry(rm, rm * ratio);
        let mut m = MaterialProperties::water_in_steel();
        m.lambda_w = lambda;
        let a = alpha_ma(&g, &m, &heat(amw, awa)).unwrap();
        let rhs = 1.0 / amw + 1.0 / awa + rm / lambda * ratio.ln();
        prop_assert!((1.0 / a - rhs).abs() <= 1e-12 * (1.0 / a));
    }

    #[test]
    fn alpha_ma_increases_with_each_coefficient(
        amw in 10.0f64..1e5, awa in 1.0f64..1e4, lambda in 0.1f64..500.0, f in 1.01f64..3.0,
    ) {
        let g = geometry(0.0077, 0.01065);
        let mut m = MaterialProperties::water_in_steel();
        m.lambda_w = lambda;
        let base = alpha_ma(&g, &m, &heat(amw, awa)).unwrap();
        prop_assert!(alpha_ma(&g, &m, &heat(amw * f, awa)).unwrap() > base);
        prop_assert!(alpha_ma(&g, &m, &heat(amw, awa * f)).unwrap() > base);
        let mut m2 = m;
        m2.lambda_w = lambda * f;
        prop_assert!(alpha_ma(&g, &m2, &heat(amw, awa)).unwrap() > base);
    }

    #[test]
    fn mean_radii_identity_holds(rm in 1e-3f64..0.5, ratio in 1.001f64..5.0) {
        let (a, b) = mean_radii(&geometry(rm, rm * ratio)).unwrap();
        prop_assert!(a > 0.0 && b > 0.0);
        prop_assert!((a + b - rm * ratio.ln()).abs() <= 1e-12 * rm * ratio.ln());
    }
}
