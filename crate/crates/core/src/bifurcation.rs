//! Bifurcation points of the flat front, their algebraic certificates, and
//! the small-amplitude expansion used to seed the Newton solver.
//!
//! Linearising either closure about `θ = 0, β = 1` and expanding `θ` in
//! `sin(kσ)` gives the mode multiplier `k[(α-1) - D(α) k²]` with `D = 4`
//! (linear closure) or `D = α²(α+3)` (nonlinear closure). A branch leaves
//! the flat state wherever this vanishes for some integer `k₀ ≥ 1`.

use serde::Serialize;

use crate::error::{FlameError, Result};
use crate::model::{length_from_theta, ModelKind, WaveParams};
use crate::spectral::ThetaProfile;

/// Bracket for the real root of the nonlinear kernel cubic.
pub const NONLINEAR_ROOT_BRACKET: (f64, f64) = (-4.0, -3.0 + 1e-9);

/// Largest ε accepted by [`asymptotic_guess`].
pub const MAX_GUESS_EPS: f64 = 0.3;

fn check_k0(k0: u32) -> Result<()> {
    if k0 < 1 {
        return Err(FlameError::Domain("k0 must be >= 1".into()));
    }
    Ok(())
}

/// `α₀ = 4k₀² + 1` for the linear closure, computed in integer arithmetic.
pub fn linear_bifurcation_alpha(k0: u32) -> Result<f64> {
    check_k0(k0)?;
    let k = k0 as u64;
    Ok((4 * k * k + 1) as f64)
}

/// `q(α) = (α-1) - k₀²α²(α+3)`, evaluated in factored form so that the
/// cancellation near `α = -3` stays exact.
pub fn kernel_cubic(alpha: f64, k0: u32) -> f64 {
    let k2 = (k0 as f64).powi(2);
    (alpha - 1.0) - k2 * alpha * alpha * (alpha + 3.0)
}

/// `q'(α) = 1 - k₀²(3α² + 6α)`.
pub fn kernel_cubic_derivative(alpha: f64, k0: u32) -> f64 {
    let k2 = (k0 as f64).powi(2);
    1.0 - k2 * alpha * (3.0 * alpha + 6.0)
}

/// `p(α) = 3k₀²α² + 6k₀²α - 1`; a nonzero value at the root certifies
/// transversality.
pub fn transversality_quadratic(alpha: f64, k0: u32) -> f64 {
    let k2 = (k0 as f64).powi(2);
    3.0 * k2 * alpha * alpha + 6.0 * k2 * alpha - 1.0
}

/// Integer coefficients of `q`, highest degree first: `[-k², -3k², 1, -1]`.
pub fn kernel_cubic_coeffs(k0: u32) -> [i128; 4] {
    let k2 = (k0 as i128).pow(2);
    [-k2, -3 * k2, 1, -1]
}

/// Integer coefficients of `p`, highest degree first: `[3k², 6k², -1]`.
pub fn transversality_quadratic_coeffs(k0: u32) -> [i128; 3] {
    let k2 = (k0 as i128).pow(2);
    [3 * k2, 6 * k2, -1]
}

/// The unique real root of `q` for the nonlinear closure.
///
/// Bisection on [`NONLINEAR_ROOT_BRACKET`] down to adjacent doubles, then a
/// Newton step kept inside the final bracket; the candidate with smaller
/// `|q|` wins.
pub fn nonlinear_bifurcation_alpha(k0: u32) -> Result<f64> {
    check_k0(k0)?;
    let (mut lo, mut hi) = NONLINEAR_ROOT_BRACKET;
    let (mut q_lo, q_hi) = (kernel_cubic(lo, k0), kernel_cubic(hi, k0));
    if !(q_lo > 0.0 && q_hi < 0.0) {
        return Err(FlameError::RootNotFound(format!(
            "no sign change on [{lo}, {hi}] for k0 = {k0}: q = ({q_lo}, {q_hi})"
        )));
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let q_mid = kernel_cubic(mid, k0);
        if q_mid == 0.0 {
            return Ok(mid);
        }
        if (q_mid > 0.0) == (q_lo > 0.0) {
            lo = mid;
            q_lo = q_mid;
        } else {
            hi = mid;
        }
    }
    let mut best = if kernel_cubic(lo, k0).abs() <= kernel_cubic(hi, k0).abs() {
        lo
    } else {
        hi
    };
    let polished = best - kernel_cubic(best, k0) / kernel_cubic_derivative(best, k0);
    if polished.is_finite()
        && (lo..=hi).contains(&polished)
        && kernel_cubic(polished, k0).abs() < kernel_cubic(best, k0).abs()
    {
        best = polished;
    }
    Ok(best)
}

/// Bifurcation point for either closure.
pub fn bifurcation_alpha(kind: ModelKind, k0: u32) -> Result<f64> {
    match kind {
        ModelKind::Linear => linear_bifurcation_alpha(k0),
        ModelKind::Nonlinear => nonlinear_bifurcation_alpha(k0),
    }
}

/// Discriminant of a cubic `a x³ + b x² + c x + d`.
pub fn discriminant_cubic(coeffs: [i128; 4]) -> i128 {
    let [a, b, c, d] = coeffs;
    18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c - 27 * a * a * d * d
}

/// Discriminant of `q` for the given `k₀`; negative values certify a single
/// real root.
pub fn cubic_discriminant(k0: u32) -> f64 {
    discriminant_cubic(kernel_cubic_coeffs(k0)) as f64
}

/// Sylvester matrix of `f` (degree m) and `g` (degree n), coefficients
/// highest degree first: n shifted rows of `f` followed by m rows of `g`.
pub fn sylvester_matrix(f: &[i128], g: &[i128]) -> Vec<Vec<i128>> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![0; size];
        row[shift..shift + f.len()].copy_from_slice(f);
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![0; size];
        row[shift..shift + g.len()].copy_from_slice(g);
        rows.push(row);
    }
    rows
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn determinant_exact(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Closed form `res(p, q) = 4k₀⁴(27k₀⁴ + 18k₀² - 1)`. Note that
/// `disc(q) = -res(p, q) / k₀²` since `p = -q'`.
pub fn resultant_closed_form(k0: u32) -> i128 {
    let k2 = (k0 as i128).pow(2);
    4 * k2 * k2 * (27 * k2 * k2 + 18 * k2 - 1)
}

/// Resultant of `p` and `q`, by closed form and by the Sylvester
/// determinant; the two must agree.
pub fn transversality_resultant(k0: u32) -> Result<f64> {
    check_k0(k0)?;
    let closed = resultant_closed_form(k0) as f64;
    let sylvester = determinant_exact(sylvester_matrix(
        &kernel_cubic_coeffs(k0),
        &transversality_quadratic_coeffs(k0),
    )) as f64;
    if ((closed - sylvester) / closed).abs() > 1e-9 {
        return Err(FlameError::Consistency(format!(
            "resultant closed form {closed} != Sylvester determinant {sylvester}"
        )));
    }
    Ok(closed)
}

/// Small-amplitude expansion
/// `θ = ε sin(k₀σ) + ε² c₂ sin(2k₀σ)`, `β = β₀ + ε² β₂`, `α = α₀ + ε α₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticExpansion {
    pub kind: ModelKind,
    pub k0: u32,
    pub alpha0: f64,
    pub eps: f64,
    pub theta2_coeff: f64,
    pub beta0: f64,
    pub beta2: f64,
    pub alpha1: f64,
}

impl AsymptoticExpansion {
    /// Second order is known only for the linear closure at `k₀ = 1`; every
    /// other case is leading order.
    pub fn new(k0: u32, eps: f64, kind: ModelKind) -> Result<Self> {
        check_k0(k0)?;
        if !(eps > 0.0 && eps <= MAX_GUESS_EPS) {
            return Err(FlameError::Domain(format!(
                "expansion amplitude {eps} outside (0, {MAX_GUESS_EPS}]"
            )));
        }
        let alpha0 = bifurcation_alpha(kind, k0)?;
        let (theta2_coeff, beta2) = match (kind, k0) {
            (ModelKind::Linear, 1) => (-1.0 / 96.0, 0.25),
            _ => (0.0, 0.0),
        };
        Ok(Self {
            kind,
            k0,
            alpha0,
            eps,
            theta2_coeff,
            beta0: 1.0,
            beta2,
            alpha1: 0.0,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta0 + self.eps * self.eps * self.beta2
    }

    pub fn alpha(&self) -> f64 {
        self.alpha0 + self.eps * self.alpha1
    }

    pub fn theta(&self, nx: usize) -> Result<ThetaProfile> {
        let k = self.k0 as f64;
        let (e, c2) = (self.eps, self.theta2_coeff);
        ThetaProfile::from_fn(nx, |s| e * (k * s).sin() + e * e * c2 * (2.0 * k * s).sin())
    }
}

/// Initial guess `(θ, α, β, L)` on a grid of `nx` points.
pub fn asymptotic_guess(
    k0: u32,
    eps: f64,
    kind: ModelKind,
    nx: usize,
) -> Result<(ThetaProfile, WaveParams)> {
    let exp = AsymptoticExpansion::new(k0, eps, kind)?;
    let theta = exp.theta(nx)?;
    let length = length_from_theta(&theta)?;
    Ok((
        theta,
        WaveParams {
            alpha: exp.alpha(),
            beta: exp.beta(),
            length,
        },
    ))
}
