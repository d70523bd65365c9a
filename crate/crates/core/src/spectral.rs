//! Periodic Fourier toolbox on a uniform collocation grid.
//!
//! A [`ThetaProfile`] stores a real 2π-periodic field both as grid values
//! `θ(σ_j)`, `σ_j = 2πj/nx`, and as discrete Fourier coefficients `a_n` with
//!
//! ```text
//! θ(σ_j) = Σ a_n exp(i n σ_j),   n = -nx/2 … nx/2-1
//! ```
//!
//! Coefficients are kept in FFT order (`0, 1, …, nx/2-1, -nx/2, …, -1`);
//! use [`ThetaProfile::coeff`] to address them by signed wavenumber.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{FlameError, Result};

/// Smallest grid accepted by [`grid`] and the profile constructors.
pub const MIN_NX: usize = 8;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(nx: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(nx)
        } else {
            p.plan_fft_forward(nx)
        }
    })
}

fn check_nx(nx: usize) -> Result<()> {
    if nx < MIN_NX || !nx.is_multiple_of(2) {
        return Err(FlameError::InvalidGrid { nx });
    }
    Ok(())
}

/// Collocation points `σ_j = 2πj/nx`, `j = 0 … nx-1`.
pub fn grid(nx: usize) -> Result<Vec<f64>> {
    check_nx(nx)?;
    Ok(grid_points(nx))
}

/// Same as [`grid`] without the size check; tests use it for tiny grids.
pub fn grid_points(nx: usize) -> Vec<f64> {
    (0..nx).map(|j| 2.0 * PI * j as f64 / nx as f64).collect()
}

/// Signed wavenumber stored at FFT index `idx`.
#[inline]
pub fn wavenumber(idx: usize, nx: usize) -> i64 {
    if idx < nx / 2 {
        idx as i64
    } else {
        idx as i64 - nx as i64
    }
}

/// Normalised forward transform: `a_n = (1/nx) Σ_j θ_j exp(-i n σ_j)`.
pub fn forward(values: &[f64]) -> Vec<Complex64> {
    let nx = values.len();
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plan(nx, false).process(&mut buf);
    let scale = 1.0 / nx as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Inverse of [`forward`]; the imaginary part is discarded.
pub fn inverse(coeffs: &[Complex64]) -> Vec<f64> {
    let mut buf = coeffs.to_vec();
    plan(coeffs.len(), true).process(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Real periodic field on the collocation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaProfile {
    nx: usize,
    values: Vec<f64>,
    coeffs: Vec<Complex64>,
}

impl ThetaProfile {
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        check_nx(values.len())?;
        let coeffs = forward(&values);
        Ok(Self {
            nx: values.len(),
            values,
            coeffs,
        })
    }

    /// Builds a profile from FFT-ordered coefficients. Only the Hermitian
    /// part survives: grid values are the real part of the inverse transform
    /// and the stored coefficients are recomputed from them.
    pub fn from_coeffs(coeffs: &[Complex64]) -> Result<Self> {
        check_nx(coeffs.len())?;
        Self::from_values(inverse(coeffs))
    }

    pub fn zeros(nx: usize) -> Result<Self> {
        Self::from_values(vec![0.0; nx])
    }

    pub fn from_fn(nx: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        check_nx(nx)?;
        Self::from_values(grid_points(nx).into_iter().map(f).collect())
    }

    /// `θ(σ) = Σ_k b_k sin(kσ)` with `sine[k-1] = b_k`. Coefficients beyond
    /// `nx/2 - 1` are not representable on the grid and must not be passed.
    pub fn from_sine_coeffs(nx: usize, sine: &[f64]) -> Result<Self> {
        check_nx(nx)?;
        if sine.len() > nx / 2 - 1 {
            return Err(FlameError::Domain(format!(
                "{} sine coefficients do not fit on a grid of {nx}",
                sine.len()
            )));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); nx];
        for (i, &b) in sine.iter().enumerate() {
            let k = i + 1;
            coeffs[k] = Complex64::new(0.0, -0.5 * b);
            coeffs[nx - k] = Complex64::new(0.0, 0.5 * b);
        }
        let values = inverse(&coeffs);
        Ok(Self { nx, values, coeffs })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// FFT-ordered coefficients.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `a_n` for `-nx/2 <= n < nx/2`.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let nx = self.nx as i64;
        assert!(n >= -nx / 2 && n < nx / 2, "wavenumber {n} outside grid");
        self.coeffs[n.rem_euclid(nx) as usize]
    }

    /// Sine-series coefficients `b_k`, `k = 1 … nx/2-1`.
    pub fn sine_coeffs(&self) -> Vec<f64> {
        (1..self.nx / 2).map(|k| -2.0 * self.coeffs[k].im).collect()
    }

    /// Cosine-series coefficients `c_k`, `k = 0 … nx/2` (the last is Nyquist).
    pub fn cosine_coeffs(&self) -> Vec<f64> {
        cosine_modes_from_coeffs(&self.coeffs)
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the largest grid value (first one on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (j, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = j;
            }
        }
        best
    }

    /// Trigonometric interpolation onto a grid of `nx_new` points. The
    /// Nyquist coefficient is split evenly between `±nx/2` when refining.
    pub fn resample(&self, nx_new: usize) -> Result<Self> {
        check_nx(nx_new)?;
        if nx_new == self.nx {
            return Ok(self.clone());
        }
        let mut out = vec![Complex64::new(0.0, 0.0); nx_new];
        let half_old = self.nx as i64 / 2;
        let half_new = nx_new as i64 / 2;
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let n = wavenumber(idx, self.nx);
            if n == -half_old {
                if nx_new > self.nx {
                    out[(half_old) as usize] += c * 0.5;
                    out[(nx_new as i64 - half_old) as usize] += c * 0.5;
                }
                continue;
            }
            if n >= -half_new && n < half_new {
                out[n.rem_euclid(nx_new as i64) as usize] += c;
            }
        }
        Self::from_values(inverse(&out))
    }
}

/// Cosine modes `c_0 … c_{nx/2}` of a real grid function given its FFT
/// coefficients: `f_j = c_0 + Σ c_k cos(kσ_j) + c_{nx/2} (-1)^j + (sines)`.
pub fn cosine_modes_from_coeffs(coeffs: &[Complex64]) -> Vec<f64> {
    let nx = coeffs.len();
    let half = nx / 2;
    let mut out = Vec::with_capacity(half + 1);
    out.push(coeffs[0].re);
    for k in 1..half {
        out.push(coeffs[k].re + coeffs[nx - k].re);
    }
    out.push(coeffs[half].re);
    out
}

/// Multiplies FFT-ordered coefficients by `(i n)^order` in place. The
/// Nyquist mode is zeroed for odd orders.
pub fn differentiate_coeffs(coeffs: &mut [Complex64], order: u32) {
    let nx = coeffs.len();
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let n = wavenumber(idx, nx);
        if order % 2 == 1 && n == -(nx as i64) / 2 {
            *c = Complex64::new(0.0, 0.0);
            continue;
        }
        *c *= Complex64::new(0.0, n as f64).powu(order);
    }
}

/// Spectral derivative of the given order (1 to 4).
pub fn deriv(p: &ThetaProfile, order: u32) -> Result<ThetaProfile> {
    if !(1..=4).contains(&order) {
        return Err(FlameError::Domain(format!(
            "derivative order {order} not in 1..=4"
        )));
    }
    let mut c = p.coeffs.clone();
    differentiate_coeffs(&mut c, order);
    ThetaProfile::from_coeffs(&c)
}

/// Odd-parity part: keeps the sine series, drops mean, cosines and Nyquist.
pub fn project_odd(p: &ThetaProfile) -> ThetaProfile {
    let nx = p.nx;
    let mut c = vec![Complex64::new(0.0, 0.0); nx];
    for k in 1..nx / 2 {
        // a_k - a_{-k} over 2 is the odd part; it is purely imaginary for real input
        let odd = (p.coeffs[k] - p.coeffs[nx - k]) * 0.5;
        c[k] = odd;
        c[nx - k] = -odd;
    }
    ThetaProfile {
        nx,
        values: inverse(&c),
        coeffs: c,
    }
}

/// Periodic antiderivative of the zero-mean part of `p`, normalised so that
/// its value at `σ = 0` is zero. The mean of `p` is returned separately so
/// callers can add the secular term `mean · σ` themselves.
pub fn antiderivative(p: &ThetaProfile) -> (ThetaProfile, f64) {
    let nx = p.nx;
    let mut c = vec![Complex64::new(0.0, 0.0); nx];
    for (idx, &a) in p.coeffs.iter().enumerate() {
        let n = wavenumber(idx, nx);
        if n == 0 || n == -(nx as i64) / 2 {
            continue;
        }
        c[idx] = a / Complex64::new(0.0, n as f64);
    }
    let mut values = inverse(&c);
    let v0 = values[0];
    values.iter_mut().for_each(|v| *v -= v0);
    c[0] -= v0;
    (
        ThetaProfile {
            nx,
            values,
            coeffs: c,
        },
        p.mean(),
    )
}
