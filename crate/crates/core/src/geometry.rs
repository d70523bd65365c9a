//! Interface reconstruction from the tangent angle and the point-proximity
//! test used to stop branches just before a profile self-intersects.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::model::length_from_theta;
use crate::spectral::{self, ThetaProfile};

/// Two non-adjacent points closer than this fraction of `L/nx` flag a
/// near self-intersection.
pub const SELF_INTERSECTION_FRACTION: f64 = 0.9;

/// One period of the interface, `nx + 1` points with the last point the
/// periodic image of the first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterfaceCurve {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub length: f64,
}

impl InterfaceCurve {
    /// Number of distinct points per period.
    pub fn nx(&self) -> usize {
        self.x.len() - 1
    }

    /// Uniform arclength spacing `L/nx`.
    pub fn spacing(&self) -> f64 {
        self.length / self.nx() as f64
    }
}

/// Integrates `(x_σ, y_σ) = (L/2π)(cos θ, sin θ)` spectrally, anchored at
/// `x(0) = 0` with zero-mean `y`.
pub fn reconstruct_curve(p: &ThetaProfile) -> Result<InterfaceCurve> {
    let length = length_from_theta(p)?;
    let scale = length / (2.0 * PI);
    let nx = p.nx();
    let cos = ThetaProfile::from_values(p.values().iter().map(|t| t.cos()).collect())?;
    let sin = ThetaProfile::from_values(p.values().iter().map(|t| t.sin()).collect())?;
    let (pc, mean_c) = spectral::antiderivative(&cos);
    let (ps, mean_s) = spectral::antiderivative(&sin);
    let sigma = spectral::grid_points(nx);

    let mut x: Vec<f64> = sigma
        .iter()
        .zip(pc.values())
        .map(|(s, c)| scale * (mean_c * s + c))
        .collect();
    let mut y: Vec<f64> = sigma
        .iter()
        .zip(ps.values())
        .map(|(s, c)| scale * (mean_s * s + c))
        .collect();
    let y_mean = y.iter().sum::<f64>() / nx as f64;
    y.iter_mut().for_each(|v| *v -= y_mean);
    x.push(x[0] + scale * mean_c * 2.0 * PI);
    y.push(y[0] + scale * mean_s * 2.0 * PI);
    Ok(InterfaceCurve { x, y, length })
}

/// Closest pair of non-adjacent points found by [`closest_nonadjacent_pair`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosestPair {
    pub i: usize,
    pub j: usize,
    /// Horizontal period image of point `j` (`-1`, `0` or `1`).
    pub shift: i32,
    pub distance: f64,
}

/// Brute-force scan over all pairs `i < j` among the `nx` distinct points
/// with cyclic index distance at least 2, comparing point `i` against point
/// `j` and its `±2π` horizontal translates. Ties keep the first pair found.
pub fn closest_nonadjacent_pair(c: &InterfaceCurve) -> Option<ClosestPair> {
    let n = c.nx();
    let mut best: Option<ClosestPair> = None;
    for i in 0..n {
        for j in i + 1..n {
            let gap = (j - i).min(n - (j - i));
            if gap < 2 {
                continue;
            }
            for shift in [-1i32, 0, 1] {
                let dx = c.x[i] - (c.x[j] + shift as f64 * 2.0 * PI);
                let dy = c.y[i] - c.y[j];
                let d = dx.hypot(dy);
                if best.is_none_or(|b| d < b.distance) {
                    best = Some(ClosestPair {
                        i,
                        j,
                        shift,
                        distance: d,
                    });
                }
            }
        }
    }
    best
}

/// Minimum distance between non-adjacent points (see
/// [`closest_nonadjacent_pair`]); infinite for curves too short to have any.
pub fn min_nonadjacent_gap(c: &InterfaceCurve) -> f64 {
    closest_nonadjacent_pair(c).map_or(f64::INFINITY, |p| p.distance)
}

pub fn is_near_self_intersecting(c: &InterfaceCurve) -> bool {
    min_nonadjacent_gap(c) < SELF_INTERSECTION_FRACTION * c.spacing()
}
