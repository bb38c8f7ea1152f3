//! Two-sided radial grid and staggered fourth-order stencils.
//!
//! The interior side is uniform in `r` on `[0, r0]`, the exterior side uniform in `s = ln r`
//! on `[r0, r_max]`. Both sides carry a node at `r0`.

use clifford_core::{Error, Result};
use serde::{Deserialize, Serialize};

/// Smallest number of intervals per side.
pub const MIN_INTERVALS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn index(self) -> usize {
        match self {
            Side::Minus => 0,
            Side::Plus => 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialGrid {
    pub intervals: usize,
    pub r0: f64,
    pub r_max: f64,
    pub minus: Vec<f64>,
    pub plus: Vec<f64>,
    pub h_minus: f64,
    pub h_s: f64,
}

impl RadialGrid {
    pub fn new(r0: f64, r_max: f64, intervals: usize) -> Result<Self> {
        if intervals < MIN_INTERVALS {
            return Err(Error::Argument(format!("need at least {MIN_INTERVALS} intervals per side, got {intervals}")));
        }
        if !(r0 > 0.0 && r_max > r0 && r_max.is_finite()) {
            return Err(Error::Argument(format!("need 0 < r0 < r_max, got r0 = {r0}, r_max = {r_max}")));
        }
        let h_minus = r0 / intervals as f64;
        let h_s = (r_max / r0).ln() / intervals as f64;
        let minus = (0..=intervals).map(|j| if j == intervals { r0 } else { j as f64 * h_minus }).collect();
        let plus = (0..=intervals)
            .map(|j| match j {
                0 => r0,
                j if j == intervals => r_max,
                j => r0 * (j as f64 * h_s).exp(),
            })
            .collect();
        Ok(Self { intervals, r0, r_max, minus, plus, h_minus, h_s })
    }

    pub fn nodes(&self, side: Side) -> &[f64] {
        match side {
            Side::Minus => &self.minus,
            Side::Plus => &self.plus,
        }
    }

    /// Stencil coordinate: `r` inside, `ln r` outside.
    pub fn coordinate(&self, side: Side, r: f64) -> f64 {
        match side {
            Side::Minus => r,
            Side::Plus => r.ln(),
        }
    }

    pub fn radius(&self, side: Side, t: f64) -> f64 {
        match side {
            Side::Minus => t,
            Side::Plus => t.exp(),
        }
    }

    pub fn spacing(&self, side: Side) -> f64 {
        match side {
            Side::Minus => self.h_minus,
            Side::Plus => self.h_s,
        }
    }

    /// Stencil coordinate of node `j`.
    pub fn node_coordinate(&self, side: Side, j: usize) -> f64 {
        match side {
            Side::Minus => self.minus[j],
            Side::Plus => {
                if j == 0 {
                    self.r0.ln()
                } else {
                    self.r0.ln() + j as f64 * self.h_s
                }
            }
        }
    }
}

/// Stencil evaluating `u` and `du/dt` at the midpoint of interval `k`, unit spacing.
///
/// Interior intervals use the symmetric four-node stencil; the two end intervals use five
/// one-sided nodes so that every interval is fourth order.
#[derive(Debug, Clone, PartialEq)]
pub struct MidpointStencil {
    pub first: usize,
    pub derivative: Vec<f64>,
    pub value: Vec<f64>,
}

pub fn midpoint_stencil(intervals: usize, k: usize) -> MidpointStencil {
    let one_sided = |first: usize, at: f64| {
        let xs: Vec<f64> = (0..5).map(|i| (first + i) as f64).collect();
        let (value, derivative) = lagrange_weights(&xs, at);
        MidpointStencil { first, derivative, value }
    };
    if k == 0 {
        one_sided(0, 0.5)
    } else if k + 1 == intervals {
        one_sided(intervals - 4, intervals as f64 - 0.5)
    } else {
        MidpointStencil {
            first: k - 1,
            derivative: vec![1.0 / 24.0, -27.0 / 24.0, 27.0 / 24.0, -1.0 / 24.0],
            value: vec![-1.0 / 16.0, 9.0 / 16.0, 9.0 / 16.0, -1.0 / 16.0],
        }
    }
}

/// Lagrange weights for the value and first derivative at `x` over the nodes `xs`.
pub fn lagrange_weights(xs: &[f64], x: f64) -> (Vec<f64>, Vec<f64>) {
    let m = xs.len();
    let mut w = vec![0.0; m];
    let mut dw = vec![0.0; m];
    for i in 0..m {
        let mut den = 1.0;
        for j in 0..m {
            if j != i {
                den *= xs[i] - xs[j];
            }
        }
        let mut num = 1.0;
        for j in 0..m {
            if j != i {
                num *= x - xs[j];
            }
        }
        w[i] = num / den;
        let mut d = 0.0;
        for l in 0..m {
            if l == i {
                continue;
            }
            let mut p = 1.0;
            for j in 0..m {
                if j != i && j != l {
                    p *= x - xs[j];
                }
            }
            d += p;
        }
        dw[i] = d / den;
    }
    (w, dw)
}

/// First node of a window of `width` nodes centred on `center`, clamped to `0..=last`.
pub fn window(center: usize, width: usize, last: usize) -> usize {
    let half = width / 2;
    center.saturating_sub(half).min(last + 1 - width)
}
