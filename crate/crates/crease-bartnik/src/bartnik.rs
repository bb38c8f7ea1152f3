use clifford_core::{Error, Result};
use geometry_catalog::surface::hypersurface_geometry_with_frame;
use geometry_catalog::{CreasedData, InitialData, Orientation};
use serde::Serialize;

use crate::grid::SphereGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Minus,
    Plus,
}

/// Boundary data at one grid node, on the tangential frame `(theta_hat, phi_hat)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BartnikNode {
    pub gamma: [[f64; 2]; 2],
    pub h: f64,
    pub trk: f64,
    pub beta: [f64; 2],
}

impl BartnikNode {
    fn gamma_inv(&self) -> Result<[[f64; 2]; 2]> {
        let g = self.gamma;
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        if !(det > 0.0) || !(g[0][0] > 0.0) {
            return Err(Error::InvalidData("induced metric is not positive definite".into()));
        }
        Ok([[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]])
    }

    /// `|w|_gamma` for a covector on the tangential frame.
    pub fn covector_norm(&self, w: &[f64; 2]) -> Result<f64> {
        let gi = self.gamma_inv()?;
        let mut s = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                s += w[a] * gi[a][b] * w[b];
            }
        }
        Ok(s.max(0.0).sqrt())
    }
}

/// Bartnik data `(gamma, H, Tr_gamma k, beta)` sampled on a sphere grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BartnikData {
    pub r0: f64,
    pub side: Side,
    pub orientation: Orientation,
    pub grid: SphereGrid,
    pub nodes: Vec<BartnikNode>,
}

impl BartnikData {
    /// Samples the coordinate sphere `{|x| = r0}` of three-dimensional data with normal `orientation`.
    pub fn from_data(
        data: &InitialData,
        r0: f64,
        grid: &SphereGrid,
        side: Side,
        orientation: Orientation,
    ) -> Result<Self> {
        if data.dim() != 3 {
            return Err(Error::Unsupported(format!(
                "Bartnik data grids are implemented for n = 3, got n = {}",
                data.dim()
            )));
        }
        let mut nodes = Vec::with_capacity(grid.len());
        for i in 0..grid.len() {
            let t = grid.tangents(i);
            let hs = hypersurface_geometry_with_frame(
                data,
                r0,
                &grid.points[i],
                orientation,
                vec![t[0].to_vec(), t[1].to_vec()],
            )?;
            nodes.push(BartnikNode {
                gamma: [[hs.gamma[0][0], hs.gamma[0][1]], [hs.gamma[1][0], hs.gamma[1][1]]],
                h: hs.mean_curvature,
                trk: hs.trace_k,
                beta: [hs.beta[0], hs.beta[1]],
            });
        }
        let b = Self { r0, side, orientation, grid: grid.clone(), nodes };
        b.validate()?;
        Ok(b)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Positive-definite `gamma` everywhere and a bounded smoothness score.
    pub fn validate(&self) -> Result<()> {
        for n in &self.nodes {
            n.gamma_inv()?;
            if !(n.h.is_finite() && n.trk.is_finite() && n.beta.iter().all(|b| b.is_finite())) {
                return Err(Error::InvalidData("non-finite Bartnik data".into()));
            }
        }
        let s = self.smoothness_score();
        if s > SMOOTHNESS_THRESHOLD {
            return Err(Error::InvalidData(format!("Bartnik data not smooth on the grid (score {s})")));
        }
        Ok(())
    }

    /// Largest second difference of `H` and `Tr k` along the phi circles, relative to their scale.
    pub fn smoothness_score(&self) -> f64 {
        let nphi = 2 * self.grid.order;
        let scale = self.nodes.iter().map(|n| n.h.abs().max(n.trk.abs())).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for ring in self.nodes.chunks(nphi) {
            for j in 0..ring.len() {
                let a = &ring[(j + ring.len() - 1) % ring.len()];
                let b = &ring[j];
                let c = &ring[(j + 1) % ring.len()];
                worst = worst.max((a.h - 2.0 * b.h + c.h).abs());
                worst = worst.max((a.trk - 2.0 * b.trk + c.trk).abs());
            }
        }
        worst / scale
    }

    pub fn check_same_grid(&self, other: &BartnikData) -> Result<()> {
        if self.grid != other.grid || (self.r0 - other.r0).abs() > 1e-14 * self.r0.max(1.0) {
            return Err(Error::Argument("Bartnik data live on different grids".into()));
        }
        Ok(())
    }

    /// Image under the gauge change by `f`: `H -> cosh f H + sinh f trk`,
    /// `trk -> sinh f H + cosh f trk`, `beta -> beta + df`.
    pub fn gauge_rotated(&self, f: &[f64]) -> Result<Self> {
        let (nu, tau) = rotated_components(self, f)?;
        let df = self.grid.gradient(f, self.r0)?;
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| BartnikNode {
                gamma: n.gamma,
                h: nu[i],
                trk: tau[i],
                beta: [n.beta[0] + df[i][0], n.beta[1] + df[i][1]],
            })
            .collect();
        Ok(Self { nodes, ..self.clone() })
    }
}

pub const SMOOTHNESS_THRESHOLD: f64 = 0.5;

/// Both sides of a three-dimensional crease with outward normals and `f` sampled at the nodes.
pub fn bartnik_pair(cd: &CreasedData, order: usize) -> Result<(BartnikData, BartnikData, Vec<f64>)> {
    let grid = SphereGrid::new(order)?;
    let minus = BartnikData::from_data(&cd.minus, cd.r0, &grid, Side::Minus, Orientation::Outward)?;
    let plus = BartnikData::from_data(&cd.plus, cd.r0, &grid, Side::Plus, Orientation::Outward)?;
    let f = grid.points.iter().map(|p| cd.f.value(p)).collect();
    Ok((minus, plus, f))
}

/// Components of `F(H_minus)` on `{nu_plus, tau_plus}`.
pub fn rotated_components(b_minus: &BartnikData, f: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if f.len() != b_minus.len() {
        return Err(Error::Argument(format!(
            "angle has {} values, grid has {} nodes",
            f.len(),
            b_minus.len()
        )));
    }
    let mut nu = Vec::with_capacity(f.len());
    let mut tau = Vec::with_capacity(f.len());
    for (n, &fi) in b_minus.nodes.iter().zip(f) {
        let (c, s) = (fi.cosh(), fi.sinh());
        nu.push(c * n.h + s * n.trk);
        tau.push(s * n.h + c * n.trk);
    }
    Ok((nu, tau))
}

/// `beta_plus - beta_minus - df` at every node.
pub fn beta_delta(b_minus: &BartnikData, b_plus: &BartnikData, f: &[f64]) -> Result<Vec<[f64; 2]>> {
    b_minus.check_same_grid(b_plus)?;
    if f.len() != b_minus.len() {
        return Err(Error::Argument("angle length does not match the grid".into()));
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::Argument("non-finite hyperbolic angle".into()));
    }
    let df = b_minus.grid.gradient(f, b_minus.r0)?;
    Ok(b_minus
        .nodes
        .iter()
        .zip(&b_plus.nodes)
        .zip(&df)
        .map(|((m, p), d)| [p.beta[0] - m.beta[0] - d[0], p.beta[1] - m.beta[1] - d[1]])
        .collect())
}
