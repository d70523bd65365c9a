//! Traveling-wave residuals for the two velocity closures, front kinematics
//! and the flat-state dispersion relation.
//!
//! With the normalised arclength parameterisation `s_σ = L/2π`, curvature is
//! `κ = (2π/L) θ_σ` and its second arclength derivative is `(2π/L)^3 θ_σσσ`.
//! A front moving with constant velocity `(0, -β)` has normal velocity
//! `U = -β cos θ` and tangential velocity `V = -β sin θ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{FlameError, Result};
use crate::spectral::{self, ThetaProfile};

/// Threshold on `mean(cos θ)` below which the length formula is rejected.
pub const DEGENERATE_MEAN_COS: f64 = 1e-8;

/// Relative tolerance used by [`kinematics`] when checking the length.
pub const LENGTH_CONSISTENCY_TOL: f64 = 1e-8;

/// Velocity closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// `-U = 1 + (α-1)κ + 4κ_ss`
    Linear,
    /// `-U = 1 + (α-1)κ + α²(α+3)κ_ss + (1+α/2)κ² + (2α+5α²-α³/3)κ³`
    Nonlinear,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Linear => "linear",
            ModelKind::Nonlinear => "nonlinear",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = FlameError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(ModelKind::Linear),
            "nonlinear" => Ok(ModelKind::Nonlinear),
            other => Err(FlameError::Domain(format!("unknown model '{other}'"))),
        }
    }
}

/// Coefficient multiplying `κ²` in the nonlinear closure.
///
/// The model is usually written with `1 + α/2`; one rewriting of it carries
/// `1 + α²/2` instead. The second form is kept only for sensitivity runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum KappaSquaredCoeff {
    #[default]
    OnePlusHalfAlpha,
    OnePlusHalfAlphaSquared,
}

impl KappaSquaredCoeff {
    pub fn eval(self, alpha: f64) -> f64 {
        match self {
            KappaSquaredCoeff::OnePlusHalfAlpha => 1.0 + 0.5 * alpha,
            KappaSquaredCoeff::OnePlusHalfAlphaSquared => 1.0 + 0.5 * alpha * alpha,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualOptions {
    pub kappa_squared: KappaSquaredCoeff,
}

/// Instability parameter, vertical speed and curve length per period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub alpha: f64,
    pub beta: f64,
    pub length: f64,
}

impl WaveParams {
    /// Parameters whose length is taken from the profile itself.
    pub fn for_profile(p: &ThetaProfile, alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self {
            alpha,
            beta,
            length: length_from_theta(p)?,
        })
    }
}

/// Derived fields on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontKinematics {
    pub s_sigma: f64,
    pub kappa: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// Mean of `cos θ` over the grid (spectral mean, exact for the zero mode).
fn mean_cos(p: &ThetaProfile) -> f64 {
    p.values().iter().map(|t| t.cos()).sum::<f64>() / p.nx() as f64
}

/// `L = 4π² / ∫ cos θ dσ`.
pub fn length_from_theta(p: &ThetaProfile) -> Result<f64> {
    let m = mean_cos(p);
    if m <= DEGENERATE_MEAN_COS {
        return Err(FlameError::DegenerateFront { mean_cos: m });
    }
    Ok(2.0 * PI / m)
}

pub fn kinematics(p: &ThetaProfile, params: &WaveParams) -> Result<FrontKinematics> {
    let l = length_from_theta(p)?;
    if ((params.length - l) / l).abs() > LENGTH_CONSISTENCY_TOL {
        return Err(FlameError::Contract(format!(
            "length {} inconsistent with profile length {}",
            params.length, l
        )));
    }
    let s_sigma = params.length / (2.0 * PI);
    let theta_s = spectral::deriv(p, 1)?;
    let kappa = theta_s.values().iter().map(|t| t / s_sigma).collect();
    let u = p.values().iter().map(|t| -params.beta * t.cos()).collect();
    let v = p.values().iter().map(|t| -params.beta * t.sin()).collect();
    Ok(FrontKinematics {
        s_sigma,
        kappa,
        u,
        v,
    })
}

/// Max-abs of `V_σ - θ_σ U`, with `V_σ` obtained by spectrally
/// differentiating the tangential velocity of [`kinematics`].
pub fn traveling_identity_defect(p: &ThetaProfile, params: &WaveParams) -> Result<f64> {
    let kin = kinematics(p, params)?;
    let v = ThetaProfile::from_values(kin.v)?;
    let v_s = spectral::deriv(&v, 1)?;
    let theta_s = spectral::deriv(p, 1)?;
    Ok(v_s
        .values()
        .iter()
        .zip(theta_s.values())
        .zip(&kin.u)
        .map(|((vs, ts), u)| (vs - ts * u).abs())
        .fold(0.0, f64::max))
}

/// Grid values of the traveling-wave residual `F` (nonlinear) or `G`
/// (linear); zero exactly when `(θ, β, α)` is a traveling wave.
pub fn residual(p: &ThetaProfile, params: &WaveParams, kind: ModelKind) -> Vec<f64> {
    residual_with(p, params, kind, &ResidualOptions::default())
}

pub fn residual_with(
    p: &ThetaProfile,
    params: &WaveParams,
    kind: ModelKind,
    opts: &ResidualOptions,
) -> Vec<f64> {
    let mut c1 = p.coeffs().to_vec();
    spectral::differentiate_coeffs(&mut c1, 1);
    let mut c3 = c1.clone();
    spectral::differentiate_coeffs(&mut c3, 2);
    let theta_s = spectral::inverse(&c1);
    let theta_sss = spectral::inverse(&c3);

    let WaveParams {
        alpha,
        beta,
        length,
    } = *params;
    let scale = 2.0 * PI / length;
    let scale3 = scale * scale * scale;
    let (dispersive, quad, cubic) = match kind {
        ModelKind::Linear => (4.0, 0.0, 0.0),
        ModelKind::Nonlinear => (
            alpha * alpha * (alpha + 3.0),
            opts.kappa_squared.eval(alpha),
            2.0 * alpha + 5.0 * alpha * alpha - alpha * alpha * alpha / 3.0,
        ),
    };

    p.values()
        .iter()
        .zip(theta_s.iter().zip(&theta_sss))
        .map(|(&t, (&ts, &tsss))| {
            let kappa = scale * ts;
            1.0 + (alpha - 1.0) * kappa
                + dispersive * scale3 * tsss
                + quad * kappa * kappa
                + cubic * kappa * kappa * kappa
                - beta * t.cos()
        })
        .collect()
}

/// Growth rate `λ(k) = -4k⁴ + (α-1)k²` of the mode `exp(ikσ)` about the flat
/// front (linear closure, unit length scale).
pub fn dispersion_linear(alpha: f64, k: f64) -> f64 {
    let k2 = k * k;
    -4.0 * k2 * k2 + (alpha - 1.0) * k2
}

/// Positive integer wavenumbers with `λ(k) > 0`.
pub fn unstable_modes(alpha: f64) -> Vec<u32> {
    (1u32..)
        .take_while(|&k| 4.0 * (k as f64).powi(2) < alpha - 1.0)
        .filter(|&k| dispersion_linear(alpha, k as f64) > 0.0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid_points;

    fn max_abs(v: &[f64]) -> f64 {
        v.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Composite trapezoid on a fine periodic grid (spectrally accurate).
    fn trapezoid_length(theta: impl Fn(f64) -> f64, n: usize) -> f64 {
        let h = 2.0 * PI / n as f64;
        let integral: f64 = (0..n).map(|j| theta(j as f64 * h).cos()).sum::<f64>() * h;
        4.0 * PI * PI / integral
    }

    #[test]
    fn length_examples() {
        let flat = ThetaProfile::zeros(64).unwrap();
        assert!((length_from_theta(&flat).unwrap() - 2.0 * PI).abs() < 1e-14);

        let oracle = trapezoid_length(|s| 0.1 * s.sin(), 4096);
        let p = ThetaProfile::from_fn(64, |s| 0.1 * s.sin()).unwrap();
        let l = length_from_theta(&p).unwrap();
        assert!((l - oracle).abs() / oracle < 1e-13, "{l} vs {oracle}");
        // mean of cos(ε sin σ) is the Bessel function J0(ε)
        let j0: f64 = (0..10)
            .map(|m| {
                (-1f64).powi(m) * 0.05f64.powi(2 * m)
                    / (1..=m).map(f64::from).product::<f64>().powi(2)
            })
            .sum();
        assert!((l - 2.0 * PI / j0).abs() < 1e-13, "{l}");

        let vertical = ThetaProfile::from_fn(64, |_| PI / 2.0).unwrap();
        assert!(matches!(
            length_from_theta(&vertical),
            Err(FlameError::DegenerateFront { .. })
        ));
    }

    #[test]
    fn kinematics_examples() {
        let flat = ThetaProfile::zeros(32).unwrap();
        let params = WaveParams {
            alpha: 5.0,
            beta: 1.0,
            length: 2.0 * PI,
        };
        let k = kinematics(&flat, &params).unwrap();
        assert!((k.s_sigma - 1.0).abs() < 1e-15);
        assert!(k.u.iter().all(|&u| (u + 1.0).abs() < 1e-15));
        assert!(max_abs(&k.v) < 1e-15 && max_abs(&k.kappa) < 1e-15);

        let eps = 1e-5;
        let p = ThetaProfile::from_fn(32, |s| eps * s.sin()).unwrap();
        let k = kinematics(&p, &params).unwrap();
        for (kap, s) in k.kappa.iter().zip(grid_points(32)) {
            assert!((kap - eps * s.cos()).abs() < 1e-15);
        }

        let zero_speed = WaveParams {
            beta: 0.0,
            ..params
        };
        let k = kinematics(&p, &zero_speed).unwrap();
        assert!(max_abs(&k.u) == 0.0 && max_abs(&k.v) == 0.0);

        let big = ThetaProfile::from_fn(32, |s| 0.3 * s.sin()).unwrap();
        assert!(matches!(
            kinematics(&big, &params),
            Err(FlameError::Contract(_))
        ));
    }

    #[test]
    fn residual_flat_state() {
        let flat = ThetaProfile::zeros(32).unwrap();
        for kind in [ModelKind::Linear, ModelKind::Nonlinear] {
            for alpha in [-3.4, 5.0, 17.0] {
                let r = residual(
                    &flat,
                    &WaveParams {
                        alpha,
                        beta: 1.0,
                        length: 2.0 * PI,
                    },
                    kind,
                );
                assert!(max_abs(&r) < 1e-15);
                let r = residual(
                    &flat,
                    &WaveParams {
                        alpha,
                        beta: 2.0,
                        length: 2.0 * PI,
                    },
                    kind,
                );
                assert!(r.iter().all(|&x| (x + 1.0).abs() < 1e-15));
            }
        }
    }

    #[test]
    fn residual_annihilates_leading_order_at_bifurcation() {
        for k0 in 1..=3u32 {
            let alpha = 4.0 * (k0 * k0) as f64 + 1.0;
            let defect = |eps: f64| {
                let p = ThetaProfile::from_fn(64, |s| eps * (k0 as f64 * s).sin()).unwrap();
                max_abs(&residual(
                    &p,
                    &WaveParams {
                        alpha,
                        beta: 1.0,
                        length: 2.0 * PI,
                    },
                    ModelKind::Linear,
                ))
            };
            let (r1, r2) = (defect(1e-4), defect(5e-5));
            // quadratic defect: halving ε divides by 4
            assert!((r1 / r2 - 4.0).abs() < 0.05, "ratio {}", r1 / r2);
            assert!(r1 < 1e-8);
        }
    }

    #[test]
    fn nonlinear_residual_matches_pointwise_formula() {
        let nx = 64;
        let f = |s: f64| 0.2 * s.sin() - 0.05 * (2.0 * s).sin();
        let fs = |s: f64| 0.2 * s.cos() - 0.1 * (2.0 * s).cos();
        let fsss = |s: f64| -0.2 * s.cos() + 0.4 * (2.0 * s).cos();
        let p = ThetaProfile::from_fn(nx, f).unwrap();
        let params = WaveParams {
            alpha: -3.3,
            beta: 1.1,
            length: 6.5,
        };
        let a = params.alpha;
        let sc = 2.0 * PI / params.length;
        for (opts, q) in [
            (ResidualOptions::default(), 1.0 + a / 2.0),
            (
                ResidualOptions {
                    kappa_squared: KappaSquaredCoeff::OnePlusHalfAlphaSquared,
                },
                1.0 + a * a / 2.0,
            ),
        ] {
            let r = residual_with(&p, &params, ModelKind::Nonlinear, &opts);
            for (j, s) in grid_points(nx).into_iter().enumerate() {
                let kap = sc * fs(s);
                let expect = 1.0
                    + (a - 1.0) * kap
                    + a * a * (a + 3.0) * sc.powi(3) * fsss(s)
                    + q * kap * kap
                    + (2.0 * a + 5.0 * a * a - a.powi(3) / 3.0) * kap.powi(3)
                    - params.beta * f(s).cos();
                assert!((r[j] - expect).abs() < 1e-11, "{} vs {expect}", r[j]);
            }
        }
    }

    #[test]
    fn dispersion_examples() {
        assert!(unstable_modes(5.0).is_empty());
        assert_eq!(dispersion_linear(17.0, 1.0), 12.0);
        assert_eq!(unstable_modes(17.0), vec![1]);
        assert_eq!(unstable_modes(37.0), vec![1, 2]);
        assert_eq!(dispersion_linear(37.0, 2.0), 80.0);
        assert_eq!(dispersion_linear(17.0, 3.0), -180.0);
        for a in [-5.0, 0.0, 5.0, 100.0] {
            assert_eq!(dispersion_linear(a, 0.0), 0.0);
        }
    }

    #[test]
    fn traveling_identity_holds_for_smooth_profiles() {
        let p = ThetaProfile::from_fn(128, |s| 0.8 * s.sin() + 0.1 * (2.0 * s).sin()).unwrap();
        let params = WaveParams::for_profile(&p, 5.0, 1.2).unwrap();
        let d = traveling_identity_defect(&p, &params).unwrap();
        let ts = spectral::deriv(&p, 1).unwrap().max_abs();
        assert!(d <= 1e-8 * ts, "{d}");
    }

    #[test]
    fn model_kind_parses() {
        assert_eq!("linear".parse::<ModelKind>().unwrap(), ModelKind::Linear);
        assert_eq!(
            "nonlinear".parse::<ModelKind>().unwrap(),
            ModelKind::Nonlinear
        );
        assert!("quadratic".parse::<ModelKind>().is_err());
    }
}
