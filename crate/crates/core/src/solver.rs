//! Collocated traveling-wave system, its quasi-Newton solution and
//! continuation of wave branches in amplitude.
//!
//! The unknowns are the sine coefficients `b_1 … b_{nx/2-1}` of `θ`
//! followed by `β` and `α`. The equations are the cosine modes
//! `0 … nx/2-1` of the residual followed by the amplitude constraint
//! `θ(σ_{j*}) - h`, where `j*` is the grid index of the maximum of `θ`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bifurcation::{asymptotic_guess, MAX_GUESS_EPS};
use crate::error::{FlameError, Result};
use crate::geometry::{is_near_self_intersecting, reconstruct_curve};
use crate::model::{residual_with, ModelKind, ResidualOptions, WaveParams};
use crate::spectral::{self, ThetaProfile};

/// LU pivots below this magnitude make the Newton system singular.
pub const SINGULAR_PIVOT: f64 = 1e-14;

/// Nonlinear waves must stay below this value of `α`.
pub const ALPHA_THRESHOLD: f64 = -3.0;

/// Continuation halves its amplitude step at most this many times.
pub const MAX_STEP_HALVINGS: u32 = 4;

/// Every wave kept on a branch must satisfy this residual bound when
/// re-evaluated on a grid twice as fine.
pub const REFINED_RESIDUAL_TOL: f64 = 1e-8;

const MAX_ARGMAX_REFRESHES: usize = 4;
const MAX_BACKTRACKS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JacobianMode {
    /// Fresh forward-difference Jacobian every iteration.
    FiniteDifferenceFull,
    /// One forward-difference Jacobian, then rank-one Broyden updates.
    BroydenUpdate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub nx: usize,
    pub tol_residual: f64,
    pub max_iters: usize,
    pub jacobian_mode: JacobianMode,
    pub fd_step: f64,
    pub residual_options: ResidualOptions,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            nx: 256,
            tol_residual: 1e-10,
            max_iters: 50,
            jacobian_mode: JacobianMode::FiniteDifferenceFull,
            fd_step: 1e-7,
            residual_options: ResidualOptions::default(),
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        spectral::grid(self.nx)?;
        if !(self.tol_residual > 0.0) {
            return Err(FlameError::Domain(format!(
                "tolerance must be positive, got {}",
                self.tol_residual
            )));
        }
        if self.max_iters == 0 {
            return Err(FlameError::Domain("max_iters must be at least 1".into()));
        }
        if !(self.fd_step > 0.0) {
            return Err(FlameError::Domain(format!(
                "finite-difference step must be positive, got {}",
                self.fd_step
            )));
        }
        Ok(())
    }
}

/// A converged traveling wave.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSolution {
    pub theta: ThetaProfile,
    pub alpha: f64,
    pub beta: f64,
    pub length: f64,
    /// `h`, the grid maximum of `θ`.
    pub amplitude: f64,
    pub residual_norm: f64,
    /// Dominant sine mode, used as the branch label.
    pub k0: u32,
    pub kind: ModelKind,
    pub iterations: usize,
}

impl WaveSolution {
    pub fn params(&self) -> WaveParams {
        WaveParams {
            alpha: self.alpha,
            beta: self.beta,
            length: self.length,
        }
    }

    /// The flat front `θ ≡ 0`, `β = 1` at the given `α`.
    pub fn flat(nx: usize, alpha: f64, kind: ModelKind) -> Result<Self> {
        let theta = ThetaProfile::zeros(nx)?;
        Ok(Self {
            length: 2.0 * std::f64::consts::PI,
            theta,
            alpha,
            beta: 1.0,
            amplitude: 0.0,
            residual_norm: 0.0,
            k0: 1,
            kind,
            iterations: 0,
        })
    }

    /// Max-abs residual after trigonometric interpolation onto `nx` points.
    pub fn residual_norm_at(&self, nx: usize, opts: &ResidualOptions) -> Result<f64> {
        let theta = self.theta.resample(nx)?;
        let params = WaveParams::for_profile(&theta, self.alpha, self.beta)?;
        Ok(max_abs(&residual_with(&theta, &params, self.kind, opts)))
    }

    fn unknowns(&self) -> Vec<f64> {
        let mut x = self.theta.sine_coeffs();
        x.push(self.beta);
        x.push(self.alpha);
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    SelfIntersection,
    AlphaThreshold,
    IterationFailure,
    MaxAmplitudeReached,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::SelfIntersection => "self-intersection",
            Termination::AlphaThreshold => "alpha-threshold",
            Termination::IterationFailure => "iteration-failure",
            Termination::MaxAmplitudeReached => "max-amplitude-reached",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchRecord {
    pub solutions: Vec<WaveSolution>,
    pub kind: ModelKind,
    pub k0: u32,
    pub termination: Termination,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dominant_mode(theta: &ThetaProfile) -> u32 {
    let b = theta.sine_coeffs();
    let mut best = 0;
    for (i, v) in b.iter().enumerate() {
        if v.abs() > b[best].abs() {
            best = i;
        }
    }
    best as u32 + 1
}

/// The square system at a fixed amplitude index.
struct System {
    nx: usize,
    kind: ModelKind,
    opts: ResidualOptions,
    j_star: usize,
    target_h: f64,
}

struct Evaluation {
    equations: Vec<f64>,
    grid_norm: f64,
    amplitude_defect: f64,
}

impl System {
    fn size(&self) -> usize {
        self.nx / 2 + 1
    }

    fn unpack(&self, x: &[f64]) -> Result<(ThetaProfile, WaveParams)> {
        let m = self.nx / 2;
        let theta = ThetaProfile::from_sine_coeffs(self.nx, &x[..m - 1])?;
        let params = WaveParams::for_profile(&theta, x[m], x[m - 1])?;
        Ok((theta, params))
    }

    fn eval(&self, x: &[f64]) -> Result<Evaluation> {
        let (theta, params) = self.unpack(x)?;
        let r = residual_with(&theta, &params, self.kind, &self.opts);
        let modes = spectral::cosine_modes_from_coeffs(&spectral::forward(&r));
        let amplitude_defect = theta.values()[self.j_star] - self.target_h;
        let mut equations = modes;
        equations.truncate(self.nx / 2);
        equations.push(amplitude_defect);
        Ok(Evaluation {
            equations,
            grid_norm: max_abs(&r),
            amplitude_defect,
        })
    }

    fn converged(&self, e: &Evaluation, tol: f64) -> bool {
        e.grid_norm <= tol && e.amplitude_defect.abs() <= tol
    }

    fn jacobian(&self, x: &[f64], f0: &[f64], fd_step: f64) -> Result<DMatrix<f64>> {
        let n = self.size();
        let mut jac = DMatrix::zeros(n, n);
        let mut xp = x.to_vec();
        for col in 0..n {
            let h = fd_step * (1.0 + x[col].abs());
            xp[col] = x[col] + h;
            let fp = self.eval(&xp)?.equations;
            xp[col] = x[col];
            for row in 0..n {
                jac[(row, col)] = (fp[row] - f0[row]) / h;
            }
        }
        Ok(jac)
    }
}

fn newton_direction(jac: &DMatrix<f64>, f: &[f64]) -> Result<Vec<f64>> {
    let lu = jac.clone().lu();
    let pivot = lu
        .u()
        .diagonal()
        .iter()
        .fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if !(pivot >= SINGULAR_PIVOT) {
        return Err(FlameError::SingularSystem { pivot });
    }
    let rhs = -DVector::from_column_slice(f);
    let dx = lu.solve(&rhs).ok_or(FlameError::SingularSystem { pivot })?;
    Ok(dx.iter().copied().collect())
}

/// Stacked equations of the traveling-wave system: the cosine modes
/// `0 … nx/2-1` of the residual, then `max θ - target_h` evaluated at the
/// grid index of the maximum of `theta`.
pub fn assemble_system(
    theta: &ThetaProfile,
    beta: f64,
    alpha: f64,
    target_h: f64,
    kind: ModelKind,
) -> Result<Vec<f64>> {
    let sys = System {
        nx: theta.nx(),
        kind,
        opts: ResidualOptions::default(),
        j_star: theta.argmax(),
        target_h,
    };
    let mut x = spectral::project_odd(theta).sine_coeffs();
    x.push(beta);
    x.push(alpha);
    Ok(sys.eval(&x)?.equations)
}

/// Solves for the traveling wave of amplitude `target_h` starting from
/// `guess`. The guess is interpolated onto `cfg.nx` points and projected
/// onto its sine series; its length is ignored and recomputed from `θ`.
pub fn quasi_newton_solve(
    guess: (&ThetaProfile, &WaveParams),
    target_h: f64,
    kind: ModelKind,
    cfg: &SolveConfig,
) -> Result<WaveSolution> {
    cfg.validate()?;
    if !(target_h >= 0.0 && target_h.is_finite()) {
        return Err(FlameError::Domain(format!(
            "target amplitude must be non-negative, got {target_h}"
        )));
    }
    let theta0 = spectral::project_odd(&guess.0.resample(cfg.nx)?);
    let mut x = theta0.sine_coeffs();
    x.push(guess.1.beta);
    x.push(guess.1.alpha);

    let mut sys = System {
        nx: cfg.nx,
        kind,
        opts: cfg.residual_options,
        j_star: theta0.argmax(),
        target_h,
    };
    let mut iterations = 0;
    let mut history = Vec::new();

    for _ in 0..MAX_ARGMAX_REFRESHES {
        let mut ev = sys.eval(&x)?;
        history.push(ev.grid_norm.max(ev.amplitude_defect.abs()));
        let mut jac: Option<DMatrix<f64>> = None;
        while !sys.converged(&ev, cfg.tol_residual) {
            if iterations >= cfg.max_iters {
                return Err(FlameError::NoConvergence {
                    iterations,
                    last_residual: ev.grid_norm.max(ev.amplitude_defect.abs()),
                    history,
                    last_iterate: x,
                });
            }
            iterations += 1;
            let fresh = cfg.jacobian_mode == JacobianMode::FiniteDifferenceFull || jac.is_none();
            if fresh {
                jac = Some(sys.jacobian(&x, &ev.equations, cfg.fd_step)?);
            }
            let j = jac.as_mut().expect("jacobian set above");
            let dx = newton_direction(j, &ev.equations)?;
            let f_norm = norm2(&ev.equations);

            // backtrack until the equations shrink; keep the full step otherwise
            let mut step = 1.0;
            let mut accepted = None;
            for _ in 0..=MAX_BACKTRACKS {
                let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a + step * d).collect();
                if let Ok(e) = sys.eval(&trial) {
                    let better = norm2(&e.equations) < f_norm;
                    if better || accepted.is_none() {
                        accepted = Some((trial, e, step));
                    }
                    if better {
                        break;
                    }
                }
                step *= 0.5;
            }
            let Some((trial, e, taken)) = accepted else {
                return Err(FlameError::NoConvergence {
                    iterations,
                    last_residual: ev.grid_norm.max(ev.amplitude_defect.abs()),
                    history,
                    last_iterate: x,
                });
            };
            if cfg.jacobian_mode == JacobianMode::BroydenUpdate {
                if norm2(&e.equations) >= f_norm {
                    // stale secant model, rebuild it next time
                    jac = None;
                } else {
                    let s = DVector::from_iterator(dx.len(), dx.iter().map(|d| taken * d));
                    let y = DVector::from_iterator(
                        dx.len(),
                        e.equations.iter().zip(&ev.equations).map(|(a, b)| a - b),
                    );
                    let ss = s.dot(&s);
                    if ss > 0.0 {
                        let corr = (y - &*j * &s) / ss;
                        *j += corr * s.transpose();
                    }
                }
            }
            x = trial;
            ev = e;
            history.push(ev.grid_norm.max(ev.amplitude_defect.abs()));
        }

        let (theta, params) = sys.unpack(&x)?;
        let j_new = theta.argmax();
        if j_new == sys.j_star
            || theta.values()[j_new] - theta.values()[sys.j_star] <= cfg.tol_residual
        {
            let residual_norm = ev.grid_norm;
            return Ok(WaveSolution {
                amplitude: theta.max(),
                k0: dominant_mode(&theta),
                theta,
                alpha: params.alpha,
                beta: params.beta,
                length: params.length,
                residual_norm,
                kind,
                iterations,
            });
        }
        sys.j_star = j_new;
    }
    let last = history.last().copied().unwrap_or(f64::NAN);
    Err(FlameError::NoConvergence {
        iterations,
        last_residual: last,
        history,
        last_iterate: x,
    })
}

enum StepOutcome {
    Accepted(WaveSolution),
    Rejected(Termination),
    Stop(Termination),
}

fn predict(prev: &[WaveSolution], target_h: f64, nx: usize) -> Result<(ThetaProfile, WaveParams)> {
    let last = prev.last().expect("branch has a first wave");
    let x = match prev.len() {
        1 => {
            let scale = target_h / last.amplitude;
            let mut x: Vec<f64> = last.theta.sine_coeffs().iter().map(|b| b * scale).collect();
            x.push(last.beta);
            x.push(last.alpha);
            x
        }
        n => {
            let before = &prev[n - 2];
            let t = (target_h - last.amplitude) / (last.amplitude - before.amplitude);
            last.unknowns()
                .iter()
                .zip(before.unknowns())
                .map(|(a, b)| a + t * (a - b))
                .collect()
        }
    };
    let m = nx / 2;
    let theta = ThetaProfile::from_sine_coeffs(nx, &x[..m - 1])?;
    let params = WaveParams::for_profile(&theta, x[m], x[m - 1])?;
    Ok((theta, params))
}

fn self_intersects(theta: &ThetaProfile) -> bool {
    match reconstruct_curve(theta) {
        Ok(c) => is_near_self_intersecting(&c),
        Err(_) => true,
    }
}

fn try_step(
    prev: &[WaveSolution],
    target_h: f64,
    kind: ModelKind,
    cfg: &SolveConfig,
) -> StepOutcome {
    let (theta, params) = match predict(prev, target_h, cfg.nx) {
        Ok(g) => g,
        Err(FlameError::DegenerateFront { .. }) => {
            return StepOutcome::Rejected(Termination::SelfIntersection)
        }
        Err(_) => return StepOutcome::Rejected(Termination::IterationFailure),
    };
    if self_intersects(&theta) {
        return StepOutcome::Rejected(Termination::SelfIntersection);
    }
    let sol = match quasi_newton_solve((&theta, &params), target_h, kind, cfg) {
        Ok(s) => s,
        Err(_) => return StepOutcome::Rejected(Termination::IterationFailure),
    };
    if kind == ModelKind::Nonlinear && sol.alpha >= ALPHA_THRESHOLD {
        return StepOutcome::Stop(Termination::AlphaThreshold);
    }
    if self_intersects(&sol.theta) {
        return StepOutcome::Rejected(Termination::SelfIntersection);
    }
    match sol.residual_norm_at(2 * cfg.nx, &cfg.residual_options) {
        Ok(r) if r <= REFINED_RESIDUAL_TOL => StepOutcome::Accepted(sol),
        _ => StepOutcome::Rejected(Termination::IterationFailure),
    }
}

/// Continues the branch bifurcating from mode `k0` in steps of `h_step`
/// until `h_max`, self-intersection, the nonlinear `α` threshold, or
/// repeated solver failure. A failed step is retried with half the step,
/// down to `h_step / 2^MAX_STEP_HALVINGS`; after a success the step grows
/// back towards `h_step`.
pub fn continue_branch(
    k0: u32,
    kind: ModelKind,
    h_step: f64,
    h_max: f64,
    cfg: &SolveConfig,
) -> Result<BranchRecord> {
    cfg.validate()?;
    if !(h_step > 0.0 && h_step.is_finite()) {
        return Err(FlameError::Domain(format!(
            "amplitude step must be positive, got {h_step}"
        )));
    }
    if !(h_max >= h_step) {
        return Err(FlameError::Domain(format!(
            "maximum amplitude {h_max} is below the first step {h_step}"
        )));
    }
    let start = || -> Result<WaveSolution> {
        let (theta, params) = asymptotic_guess(k0, h_step.min(MAX_GUESS_EPS), kind, cfg.nx)?;
        quasi_newton_solve((&theta, &params), h_step, kind, cfg)
    };
    let first = start().map_err(|e| FlameError::BranchStart(Box::new(e)))?;
    let mut record = BranchRecord {
        solutions: Vec::new(),
        kind,
        k0,
        termination: Termination::MaxAmplitudeReached,
    };
    if kind == ModelKind::Nonlinear && first.alpha >= ALPHA_THRESHOLD {
        record.termination = Termination::AlphaThreshold;
        return Ok(record);
    }
    record.solutions.push(first);

    let min_step = h_step / f64::from(1u32 << MAX_STEP_HALVINGS);
    let mut step = h_step;
    loop {
        let h = record.solutions.last().expect("non-empty").amplitude;
        if h + min_step > h_max * (1.0 + 1e-12) {
            record.termination = Termination::MaxAmplitudeReached;
            return Ok(record);
        }
        let target = (h + step).min(h_max);
        match try_step(&record.solutions, target, kind, cfg) {
            StepOutcome::Accepted(sol) => {
                record.solutions.push(sol);
                step = (2.0 * step).min(h_step);
            }
            StepOutcome::Stop(reason) => {
                record.termination = reason;
                return Ok(record);
            }
            StepOutcome::Rejected(reason) => {
                if step <= min_step * (1.0 + 1e-12) {
                    record.termination = reason;
                    return Ok(record);
                }
                step *= 0.5;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_guess(eps: f64) -> (ThetaProfile, WaveParams) {
        asymptotic_guess(1, eps, ModelKind::Linear, 256).unwrap()
    }

    #[test]
    fn flat_state_needs_no_iterations() {
        let flat = ThetaProfile::zeros(64).unwrap();
        let params = WaveParams {
            alpha: 5.0,
            beta: 1.0,
            length: 2.0 * std::f64::consts::PI,
        };
        let cfg = SolveConfig {
            nx: 64,
            ..Default::default()
        };
        let sol = quasi_newton_solve((&flat, &params), 0.0, ModelKind::Linear, &cfg).unwrap();
        assert_eq!(sol.iterations, 0);
        assert_eq!(sol.amplitude, 0.0);
        assert_eq!(sol.residual_norm, 0.0);
    }

    #[test]
    fn assemble_examples() {
        let flat = ThetaProfile::zeros(32).unwrap();
        let eq = assemble_system(&flat, 1.0, 5.0, 0.0, ModelKind::Linear).unwrap();
        assert_eq!(eq.len(), 17);
        assert!(eq.iter().all(|&v| v == 0.0));
        let eq = assemble_system(&flat, 1.0, 5.0, 0.1, ModelKind::Linear).unwrap();
        assert!(eq[..16].iter().all(|&v| v == 0.0));
        assert_eq!(eq[16], -0.1);

        let defect = |eps: f64| {
            let (g, p) = linear_guess(eps);
            max_abs(&assemble_system(&g, p.beta, p.alpha, g.max(), ModelKind::Linear).unwrap())
        };
        let (d1, d2) = (defect(0.05), defect(0.025));
        assert!(d1 < 4.0 * 0.05f64.powi(3), "{d1}");
        assert!((d1 / d2 - 8.0).abs() < 1.0, "ratio {}", d1 / d2);
    }

    #[test]
    fn linear_small_wave_matches_expansion() {
        let (g, p) = linear_guess(0.05);
        let cfg = SolveConfig::default();
        let sol = quasi_newton_solve((&g, &p), g.max(), ModelKind::Linear, &cfg).unwrap();
        assert!(sol.iterations <= 5, "{} iterations", sol.iterations);
        assert!((sol.alpha - 5.0).abs() < 0.01, "alpha {}", sol.alpha);
        assert!((sol.beta - (1.0 + 0.05f64.powi(2) / 4.0)).abs() < 1e-3);
        assert!(sol.residual_norm <= 1e-10);
        assert!((sol.amplitude - g.max()).abs() <= 1e-10);
        assert_eq!(sol.k0, 1);
        // pure sine series
        assert!(sol.theta.cosine_coeffs().iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn broyden_mode_converges_too() {
        let (g, p) = linear_guess(0.1);
        let cfg = SolveConfig {
            jacobian_mode: JacobianMode::BroydenUpdate,
            ..Default::default()
        };
        let sol = quasi_newton_solve((&g, &p), 0.1, ModelKind::Linear, &cfg).unwrap();
        let full =
            quasi_newton_solve((&g, &p), 0.1, ModelKind::Linear, &SolveConfig::default()).unwrap();
        assert!((sol.alpha - full.alpha).abs() < 1e-8 && (sol.beta - full.beta).abs() < 1e-8);
    }

    #[test]
    fn nonlinear_small_wave_near_root() {
        let (g, p) = asymptotic_guess(1, 0.02, ModelKind::Nonlinear, 256).unwrap();
        let sol = quasi_newton_solve(
            (&g, &p),
            g.max(),
            ModelKind::Nonlinear,
            &SolveConfig::default(),
        )
        .unwrap();
        assert!((sol.alpha + 3.383).abs() < 0.05, "alpha {}", sol.alpha);
        assert!(sol.residual_norm <= 1e-10);
    }

    #[test]
    fn resolve_from_own_data_is_immediate() {
        let (g, p) = linear_guess(0.2);
        let cfg = SolveConfig::default();
        let sol = quasi_newton_solve((&g, &p), 0.2, ModelKind::Linear, &cfg).unwrap();
        let again =
            quasi_newton_solve((&sol.theta, &sol.params()), 0.2, ModelKind::Linear, &cfg).unwrap();
        assert!(again.iterations <= 2);
        assert!(
            sol.residual_norm_at(512, &ResidualOptions::default())
                .unwrap()
                <= 1e-8
        );
    }

    #[test]
    fn short_branch_is_monotone_and_tends_to_flat_limit() {
        let rec =
            continue_branch(1, ModelKind::Linear, 0.05, 0.2, &SolveConfig::default()).unwrap();
        assert_eq!(rec.termination, Termination::MaxAmplitudeReached);
        assert_eq!(rec.solutions.len(), 4);
        for w in rec.solutions.windows(2) {
            assert!(w[1].amplitude > w[0].amplitude);
            assert!(w[1].beta > w[0].beta);
        }
        let first = &rec.solutions[0];
        assert!((first.beta - 1.0).abs() < 1e-3 && (first.alpha - 5.0).abs() < 1e-2);
        assert!((first.length - 2.0 * std::f64::consts::PI).abs() < 1e-2);
    }

    #[test]
    fn beta_grows_quadratically() {
        let cfg = SolveConfig::default();
        let hs = [0.01, 0.02, 0.05, 0.1];
        let mut pts = Vec::new();
        for h in hs {
            let (g, p) = linear_guess(h);
            let sol = quasi_newton_solve((&g, &p), h, ModelKind::Linear, &cfg).unwrap();
            pts.push((h.ln(), (sol.beta - 1.0).ln()));
        }
        let n = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mx, my) = (sx / n, sy / n);
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        let prefactor = (my - slope * mx).exp();
        assert!((slope - 2.0).abs() < 0.05, "slope {slope}");
        assert!((prefactor - 0.25).abs() < 0.02, "prefactor {prefactor}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(continue_branch(1, ModelKind::Linear, 0.1, 0.05, &SolveConfig::default()).is_err());
        assert!(matches!(
            continue_branch(0, ModelKind::Linear, 0.1, 0.5, &SolveConfig::default()),
            Err(FlameError::BranchStart(_))
        ));
        let cfg = SolveConfig {
            max_iters: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
