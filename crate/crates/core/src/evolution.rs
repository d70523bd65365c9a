//! Time evolution of the linear-closure front in tangent-angle form and
//! growth-rate probes of traveling waves.
//!
//! With `s = L/2π` and `U = -[1 + (α-1)θ_σ/s + 4θ_σσσ/s³]` the front obeys
//!
//! ```text
//! θ_t = (U_σ + V θ_σ)/s,   V_σ = θ_σ U + L_t/2π,   L_t = -∫ θ_σ U dσ,
//! ```
//!
//! with `V(0) = 0`. The term `-4θ_σσσσ/s⁴` is stepped implicitly with `L`
//! frozen over the step; everything else is explicit.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FlameError, Result};
use crate::model::ModelKind;
use crate::solver::WaveSolution;
use crate::spectral::{self, ThetaProfile};

/// `max |θ|` above which a run is declared blown up.
pub const BLOW_UP_THETA: f64 = 1e3;

/// Rates below this are reported as "no instability observed".
pub const INSTABILITY_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionState {
    pub theta: ThetaProfile,
    pub length: f64,
    pub time: f64,
}

impl EvolutionState {
    pub fn new(theta: ThetaProfile, length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(FlameError::Domain(format!(
                "length must be positive, got {length}"
            )));
        }
        Ok(Self {
            theta,
            length,
            time: 0.0,
        })
    }

    pub fn from_wave(wave: &WaveSolution) -> Result<Self> {
        Self::new(wave.theta.clone(), wave.length)
    }
}

fn check_linear(kind: ModelKind) -> Result<()> {
    match kind {
        ModelKind::Linear => Ok(()),
        ModelKind::Nonlinear => Err(FlameError::UnsupportedModel(
            "time evolution is only available for the linear closure".into(),
        )),
    }
}

fn implicit_symbol(nx: usize, length: f64) -> Vec<f64> {
    let s4 = (length / (2.0 * PI)).powi(4);
    (0..nx)
        .map(|idx| {
            let k = spectral::wavenumber(idx, nx) as f64;
            -4.0 * k.powi(4) / s4
        })
        .collect()
}

/// Explicit part of `θ_t` in Fourier space together with `L_t`.
fn explicit_part(theta: &ThetaProfile, length: f64, alpha: f64) -> (Vec<Complex64>, f64) {
    let s = length / (2.0 * PI);
    let mut c1 = theta.coeffs().to_vec();
    spectral::differentiate_coeffs(&mut c1, 1);
    let mut c2 = theta.coeffs().to_vec();
    spectral::differentiate_coeffs(&mut c2, 2);
    let mut c3 = c1.clone();
    spectral::differentiate_coeffs(&mut c3, 2);
    let t1 = spectral::inverse(&c1);
    let t2 = spectral::inverse(&c2);
    let t3 = spectral::inverse(&c3);

    let u: Vec<f64> = t1
        .iter()
        .zip(&t3)
        .map(|(a, c)| -(1.0 + (alpha - 1.0) * a / s + 4.0 * c / (s * s * s)))
        .collect();
    let tu: Vec<f64> = t1.iter().zip(&u).map(|(a, b)| a * b).collect();
    let length_t = -2.0 * PI * tu.iter().sum::<f64>() / tu.len() as f64;

    // tu + L_t/2π has zero mean by construction
    let vs = ThetaProfile::from_values(tu).expect("grid already validated");
    let (v, _) = spectral::antiderivative(&vs);

    let n: Vec<f64> = t2
        .iter()
        .zip(&t1)
        .zip(v.values())
        .map(|((b, a), v)| (-(alpha - 1.0) * b / s + v * a) / s)
        .collect();
    (spectral::forward(&n), length_t)
}

/// `(θ_t, L_t)` for the linear closure.
pub fn theta_rhs(state: &EvolutionState, alpha: f64, kind: ModelKind) -> Result<(Vec<f64>, f64)> {
    check_linear(kind)?;
    let (mut n, length_t) = explicit_part(&state.theta, state.length, alpha);
    let d = implicit_symbol(state.theta.nx(), state.length);
    for ((n, c), d) in n.iter_mut().zip(state.theta.coeffs()).zip(&d) {
        *n += c * *d;
    }
    Ok((spectral::inverse(&n), length_t))
}

fn check_state(theta: &ThetaProfile, length: f64, time: f64) -> Result<()> {
    let m = theta.max_abs();
    if !(m <= BLOW_UP_THETA) || !length.is_finite() || length <= 0.0 {
        return Err(FlameError::BlowUp { time, max_theta: m });
    }
    Ok(())
}

fn zero_nyquist(c: &mut [Complex64]) {
    let nx = c.len();
    c[nx / 2] = Complex64::new(0.0, 0.0);
}

/// One first-order IMEX Euler step.
pub fn imex_step(state: &EvolutionState, alpha: f64, dt: f64) -> Result<EvolutionState> {
    let mut integ = Integrator::new(alpha, dt)?;
    integ.step(state)
}

/// IMEX Euler on the first step, SBDF2 afterwards.
#[derive(Debug, Clone)]
pub struct Integrator {
    alpha: f64,
    dt: f64,
    history: Option<History>,
}

#[derive(Debug, Clone)]
struct History {
    theta: Vec<Complex64>,
    explicit: Vec<Complex64>,
    length: f64,
    length_t: f64,
}

impl Integrator {
    pub fn new(alpha: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(FlameError::Domain(format!(
                "time step must be positive, got {dt}"
            )));
        }
        Ok(Self {
            alpha,
            dt,
            history: None,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&mut self, state: &EvolutionState) -> Result<EvolutionState> {
        let dt = self.dt;
        let nx = state.theta.nx();
        let (n, length_t) = explicit_part(&state.theta, state.length, self.alpha);
        let d = implicit_symbol(nx, state.length);
        let c = state.theta.coeffs();

        let (mut next, length) = match &self.history {
            None => {
                let next: Vec<Complex64> = (0..nx)
                    .map(|i| (c[i] + n[i] * dt) / (1.0 - dt * d[i]))
                    .collect();
                (next, state.length + dt * length_t)
            }
            Some(h) => {
                let next: Vec<Complex64> = (0..nx)
                    .map(|i| {
                        (c[i] * 4.0 - h.theta[i] + (n[i] * 2.0 - h.explicit[i]) * (2.0 * dt))
                            / (3.0 - 2.0 * dt * d[i])
                    })
                    .collect();
                let length = (4.0 * state.length - h.length
                    + 2.0 * dt * (2.0 * length_t - h.length_t))
                    / 3.0;
                (next, length)
            }
        };
        zero_nyquist(&mut next);
        let theta = ThetaProfile::from_coeffs(&next)?;
        let time = state.time + dt;
        check_state(&theta, length, time)?;
        self.history = Some(History {
            theta: c.to_vec(),
            explicit: n,
            length: state.length,
            length_t,
        });
        Ok(EvolutionState {
            theta,
            length,
            time,
        })
    }

    /// Advances `steps` steps.
    pub fn run(&mut self, state: &EvolutionState, steps: usize) -> Result<EvolutionState> {
        let mut s = state.clone();
        for _ in 0..steps {
            s = self.step(&s)?;
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityProbeConfig {
    pub delta: f64,
    pub dt: f64,
    pub t_max: f64,
    pub growth_window_decades: f64,
}

impl Default for StabilityProbeConfig {
    fn default() -> Self {
        Self {
            delta: 1e-8,
            dt: 1e-4,
            t_max: 2.0,
            growth_window_decades: 2.0,
        }
    }
}

impl StabilityProbeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0) || !(self.dt > 0.0) || !(self.t_max > 0.0) {
            return Err(FlameError::Domain(format!(
                "delta, dt and t_max must be positive (got {}, {}, {})",
                self.delta, self.dt, self.t_max
            )));
        }
        if !(self.growth_window_decades >= 1.0) {
            return Err(FlameError::Domain(format!(
                "growth window must span at least one decade, got {}",
                self.growth_window_decades
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthEstimate {
    pub rate: f64,
    pub intercept: f64,
    /// Time interval used by the fit.
    pub window: (f64, f64),
    pub unstable_observed: bool,
    /// `(t, d(t))` with `d = max |θ(t) - θ(0)|`.
    pub series: Vec<(f64, f64)>,
}

/// Least-squares line through `(t, ln d)`; returns `(slope, intercept)`.
pub fn fit_exponential(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.1 > 0.0)
        .map(|&(t, d)| (t, d.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    if stt == 0.0 {
        return None;
    }
    let slope = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum::<f64>() / stt;
    Some((slope, my - slope * mt))
}

/// Perturbs `wave` by `δ(sin σ + sin 2σ)`, evolves it and fits the growth
/// of `d(t) = max |θ(t) - θ(0)|` between one decade below and exactly
/// `growth_window_decades` decades above the perturbation size. When the
/// upper level is not reached by `t_max` the slope over the second half of
/// the record is returned and the estimate is flagged as stable.
pub fn stability_probe(wave: &WaveSolution, cfg: &StabilityProbeConfig) -> Result<GrowthEstimate> {
    check_linear(wave.kind)?;
    cfg.validate()?;
    let nx = wave.theta.nx();
    let perturbed: Vec<f64> = wave
        .theta
        .values()
        .iter()
        .zip(spectral::grid_points(nx))
        .map(|(t, s)| t + cfg.delta * (s.sin() + (2.0 * s).sin()))
        .collect();
    let theta0 = ThetaProfile::from_values(perturbed)?;
    let d_ref = theta0
        .values()
        .iter()
        .zip(wave.theta.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let upper = d_ref * 10f64.powf(cfg.growth_window_decades);
    let lower = upper / 10.0;

    let mut state = EvolutionState::new(theta0.clone(), wave.length)?;
    let mut integ = Integrator::new(wave.alpha, cfg.dt)?;
    let steps = (cfg.t_max / cfg.dt).round() as usize;
    let mut series = vec![(0.0, 0.0)];
    let mut reached = false;
    for _ in 0..steps {
        state = integ.step(&state)?;
        let d = state
            .theta
            .values()
            .iter()
            .zip(theta0.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        series.push((state.time, d));
        if d >= upper {
            reached = true;
            break;
        }
    }

    if reached {
        let window: Vec<(f64, f64)> = series.iter().copied().filter(|p| p.1 >= lower).collect();
        let (rate, intercept) = fit_exponential(&window).ok_or_else(|| {
            FlameError::Domain("time step too coarse to resolve the growth window".into())
        })?;
        return Ok(GrowthEstimate {
            rate,
            intercept,
            window: (window[0].0, window[window.len() - 1].0),
            unstable_observed: rate > INSTABILITY_THRESHOLD,
            series,
        });
    }
    let tail = &series[series.len() / 2..];
    let (rate, intercept) = fit_exponential(tail).unwrap_or((0.0, d_ref.ln()));
    Ok(GrowthEstimate {
        rate,
        intercept,
        window: (tail[0].0, tail[tail.len() - 1].0),
        unstable_observed: false,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bifurcation::asymptotic_guess;
    use crate::model::dispersion_linear;
    use crate::solver::{quasi_newton_solve, SolveConfig};

    fn sine(nx: usize, amp: f64, k: f64) -> EvolutionState {
        EvolutionState::new(
            ThetaProfile::from_fn(nx, |s| amp * (k * s).sin()).unwrap(),
            2.0 * PI,
        )
        .unwrap()
    }

    fn mode(theta: &ThetaProfile, k: usize) -> f64 {
        theta.sine_coeffs()[k - 1]
    }

    #[test]
    fn flat_state_is_fixed() {
        let s = EvolutionState::new(ThetaProfile::zeros(64).unwrap(), 2.0 * PI).unwrap();
        let (t, lt) = theta_rhs(&s, 17.0, ModelKind::Linear).unwrap();
        assert!(t.iter().all(|v| *v == 0.0) && lt == 0.0);
        let mut integ = Integrator::new(17.0, 0.1).unwrap();
        let out = integ.run(&s, 3).unwrap();
        assert_eq!(out.theta.max_abs(), 0.0);
        assert_eq!(out.length, 2.0 * PI);
        assert!(theta_rhs(&s, -3.3, ModelKind::Nonlinear).is_err());
    }

    #[test]
    fn rhs_matches_dispersion() {
        for alpha in [5.0, 17.0, 37.0] {
            for k in 1..=3 {
                let s = sine(64, 1e-6, k as f64);
                let (t, _) = theta_rhs(&s, alpha, ModelKind::Linear).unwrap();
                let lambda = dispersion_linear(alpha, k as f64);
                for (j, x) in spectral::grid_points(64).iter().enumerate() {
                    let expect = lambda * 1e-6 * (k as f64 * x).sin();
                    assert!((t[j] - expect).abs() <= 1e-3 * lambda.abs().max(1.0) * 1e-6);
                }
            }
        }
    }

    #[test]
    fn stiff_mode_decays_at_dispersion_rate() {
        let s = sine(64, 1e-6, 3.0);
        let out = Integrator::new(5.0, 1e-4).unwrap().run(&s, 100).unwrap();
        let ratio = mode(&out.theta, 3) / 1e-6;
        let expect = (-288.0f64 * 0.01).exp();
        assert!((ratio / expect - 1.0).abs() < 0.02, "{ratio} vs {expect}");
    }

    #[test]
    fn unstable_mode_grows_at_dispersion_rate() {
        let s = sine(64, 1e-6, 1.0);
        let out = Integrator::new(17.0, 1e-4).unwrap().run(&s, 5000).unwrap();
        let rate = (mode(&out.theta, 1) / 1e-6).ln() / 0.5;
        assert!((rate - 12.0).abs() < 0.24, "{rate}");
    }

    #[test]
    fn second_order_in_time() {
        let s = sine(64, 0.01, 1.0);
        let run = |dt: f64| {
            let steps = (0.1 / dt).round() as usize;
            Integrator::new(5.0, dt)
                .unwrap()
                .run(&s, steps)
                .unwrap()
                .theta
        };
        let (a, b, c) = (run(2e-3), run(1e-3), run(5e-4));
        let diff = |x: &ThetaProfile, y: &ThetaProfile| {
            x.values()
                .iter()
                .zip(y.values())
                .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()))
        };
        let ratio = diff(&a, &b) / diff(&b, &c);
        assert!((ratio - 4.0).abs() < 0.8, "ratio {ratio}");
    }

    #[test]
    fn traveling_wave_is_steady() {
        let (g, p) = asymptotic_guess(1, 0.3, ModelKind::Linear, 128).unwrap();
        let cfg = SolveConfig {
            nx: 128,
            ..Default::default()
        };
        let wave = quasi_newton_solve((&g, &p), 0.3, ModelKind::Linear, &cfg).unwrap();
        let s = EvolutionState::from_wave(&wave).unwrap();
        let (t, lt) = theta_rhs(&s, wave.alpha, ModelKind::Linear).unwrap();
        let ts = spectral::deriv(&wave.theta, 1).unwrap().max_abs();
        assert!(t.iter().all(|v| v.abs() <= 1e-6 * ts));
        assert!(lt.abs() < 1e-9);
        let out = Integrator::new(wave.alpha, 1e-4)
            .unwrap()
            .run(&s, 1000)
            .unwrap();
        assert!(
            (out.length - wave.length).abs() < 1e-10,
            "{}",
            out.length - wave.length
        );
        let drift = out
            .theta
            .values()
            .iter()
            .zip(wave.theta.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(drift < 1e-5, "drift {drift}");
    }

    #[test]
    fn resolved_runs_keep_the_spectral_tail_empty() {
        let nx = 128;
        let s = EvolutionState::new(
            ThetaProfile::from_fn(nx, |x| 0.5 * x.sin() + 0.1 * (2.0 * x).sin()).unwrap(),
            2.0 * PI,
        )
        .unwrap();
        let mut integ = Integrator::new(5.0, 1e-4).unwrap();
        let mut st = s;
        for _ in 0..10 {
            st = integ.run(&st, 100).unwrap();
            let c = st.theta.coeffs();
            let total: f64 = c.iter().map(|a| a.norm_sqr()).sum();
            let tail: f64 = (0..nx)
                .filter(|&i| spectral::wavenumber(i, nx).unsigned_abs() as usize > nx / 3)
                .map(|i| c[i].norm_sqr())
                .sum();
            assert!(tail <= 1e-10 * total, "tail {tail:e} of {total:e}");
        }
    }

    #[test]
    fn flat_probes() {
        let flat = |alpha: f64| WaveSolution::flat(64, alpha, ModelKind::Linear).unwrap();
        let cfg = StabilityProbeConfig {
            t_max: 1.0,
            ..Default::default()
        };
        let g = stability_probe(&flat(5.0), &cfg).unwrap();
        assert!(!g.unstable_observed && g.rate < INSTABILITY_THRESHOLD);
        let g = stability_probe(&flat(17.0), &cfg).unwrap();
        assert!(
            g.unstable_observed && (g.rate - 12.0).abs() < 0.5,
            "{}",
            g.rate
        );
        let g = stability_probe(&flat(37.0), &cfg).unwrap();
        assert!((g.rate - 80.0).abs() < 4.0, "{}", g.rate);
        let nl = WaveSolution::flat(64, -3.3, ModelKind::Nonlinear).unwrap();
        assert!(matches!(
            stability_probe(&nl, &cfg),
            Err(FlameError::UnsupportedModel(_))
        ));
    }

    #[test]
    fn fit_recovers_exponential() {
        let pts: Vec<(f64, f64)> = (0..20)
            .map(|i| (i as f64 * 0.1, 3.0 * (2.5 * i as f64 * 0.1).exp()))
            .collect();
        let (a, b) = fit_exponential(&pts).unwrap();
        assert!((a - 2.5).abs() < 1e-12 && (b - 3f64.ln()).abs() < 1e-12);
        assert!(fit_exponential(&pts[..1]).is_none());
    }
}
