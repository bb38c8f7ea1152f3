//! Killing developments `-(u^2 - |Y|^2) dt^2 + 2 Y dt + g` and their curvature.

use clifford_core::{Error, Result};
use flux_integrals::quad::sphere_nodes;
use geometry_catalog::frame::christoffel;
use geometry_catalog::{CreasedData, Domain, InitialData, Mat};
use serde::Serialize;

use crate::lapse::{shift_norm_sq, LapseShift};

#[derive(Debug, Clone)]
struct Piece {
    data: InitialData,
    ls: LapseShift,
}

/// Metric on `R x chart`, with coordinates `(t, x)`.
#[derive(Debug, Clone)]
pub struct DevelopmentMetric {
    pieces: Vec<Piece>,
    /// Radius separating the inner piece from the outer one.
    pub crease_radius: Option<f64>,
    /// `d_t` is Killing; the evaluator never reads `t`.
    pub t_independent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeSummary {
    pub points: usize,
    pub min_lapse: f64,
}

fn probe_radii(domain: &Domain) -> Vec<f64> {
    match *domain {
        Domain::All => vec![0.1, 0.5, 1.0, 2.0, 5.0, 10.0],
        Domain::Ball { r0 } => [0.05, 0.25, 0.5, 0.75, 0.95].iter().map(|s| s * r0).collect(),
        Domain::Exterior { r0 } if r0 <= 0.0 => vec![0.1, 0.5, 1.0, 2.0, 5.0, 10.0],
        Domain::Exterior { r0 } => [1.05, 1.5, 2.0, 4.0, 10.0].iter().map(|s| s * r0).collect(),
        Domain::Annulus { r_in, r_out } => {
            [0.05, 0.25, 0.5, 0.75, 0.95].iter().map(|s| r_in + s * (r_out - r_in)).collect()
        }
    }
}

fn probe(data: &InitialData, ls: &LapseShift, min_radius: f64, max_radius: f64) -> Result<ProbeSummary> {
    let n = data.dim();
    let mut min_lapse = f64::INFINITY;
    let mut points = 0;
    for r in probe_radii(&data.domain).into_iter().filter(|r| *r >= min_radius && *r <= max_radius) {
        for (x, _) in sphere_nodes(n, r, 4)? {
            let u = ls.eval(&x)?.u;
            points += 1;
            min_lapse = min_lapse.min(u);
            if !(u > 0.0) {
                return Err(Error::Precondition(format!("lapse {u:e} is not positive at {x:?}")));
            }
        }
    }
    Ok(ProbeSummary { points, min_lapse })
}

/// Development of one chart. Fails when the lapse is not positive at a probe point;
/// probes are sphere nodes at a few radii spread over the chart, the origin excluded.
pub fn killing_development(data: &InitialData, ls: &LapseShift) -> Result<DevelopmentMetric> {
    probe(data, ls, 0.0, f64::INFINITY)?;
    Ok(DevelopmentMetric {
        pieces: vec![Piece { data: data.clone(), ls: ls.clone() }],
        crease_radius: None,
        t_independent: true,
    })
}

/// Development glued along the crease cylinder `R x {r = r0}`.
pub fn killing_development_creased(cd: &CreasedData, minus: &LapseShift, plus: &LapseShift) -> Result<DevelopmentMetric> {
    probe(&cd.minus, minus, 0.0, cd.r0)?;
    probe(&cd.plus, plus, cd.r0, f64::INFINITY)?;
    Ok(DevelopmentMetric {
        pieces: vec![
            Piece { data: cd.minus.clone(), ls: minus.clone() },
            Piece { data: cd.plus.clone(), ls: plus.clone() },
        ],
        crease_radius: Some(cd.r0),
        t_independent: true,
    })
}

impl DevelopmentMetric {
    pub fn dim(&self) -> usize {
        self.pieces[0].data.dim() + 1
    }

    fn piece(&self, x: &[f64]) -> &Piece {
        match self.crease_radius {
            Some(r0) if x.iter().map(|v| v * v).sum::<f64>().sqrt() > r0 => &self.pieces[1],
            _ => &self.pieces[0],
        }
    }

    /// Metric at `(t, x)`.
    pub fn metric(&self, tx: &[f64]) -> Result<Mat> {
        let n = self.dim() - 1;
        if tx.len() != n + 1 {
            return Err(Error::Argument(format!("expected {} coordinates, got {}", n + 1, tx.len())));
        }
        let x = &tx[1..];
        let p = self.piece(x);
        let g = p.data.g(x)?;
        let v = p.ls.eval(x)?;
        if !(v.u > 0.0) {
            return Err(Error::Precondition(format!("lapse {:e} is not positive at {x:?}", v.u)));
        }
        let mut m = Mat::zeros(n + 1, n + 1);
        m[(0, 0)] = -(v.u * v.u - shift_norm_sq(&g, &v.y));
        for i in 0..n {
            let yi: f64 = (0..n).map(|a| g[(i, a)] * v.y[a]).sum();
            m[(0, i + 1)] = yi;
            m[(i + 1, 0)] = yi;
            for j in 0..n {
                m[(i + 1, j + 1)] = g[(i, j)];
            }
        }
        Ok(m)
    }

    fn christoffel_at(&self, p: &[f64], h: f64) -> Result<Vec<Mat>> {
        let d = p.len();
        let g = self.metric(p)?;
        let g_inv = g
            .try_inverse()
            .ok_or_else(|| Error::Numeric(format!("degenerate development metric at {p:?}")))?;
        let dg = (0..d)
            .map(|a| {
                let mut pp = p.to_vec();
                let mut pm = p.to_vec();
                pp[a] += h;
                pm[a] -= h;
                Ok((self.metric(&pp)? - self.metric(&pm)?) / (2.0 * h))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(christoffel(&g_inv, &dg))
    }
}

/// Step used by `riemann_norm` at `(t, x)`.
pub fn riemann_step(tx: &[f64]) -> f64 {
    let r = tx[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
    1e-4 * r.max(1.0)
}

/// Frobenius norm of `R^a_{bcd}` from nested central differences.
pub fn riemann_norm(dm: &DevelopmentMetric, point: &[f64]) -> Result<f64> {
    let d = dm.dim();
    if point.len() != d {
        return Err(Error::Argument(format!("expected {d} coordinates, got {}", point.len())));
    }
    let h = riemann_step(point);
    if let Some(r0) = dm.crease_radius {
        let r = point[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if (r - r0).abs() < 2.0 * h {
            return Err(Error::Domain(format!(
                "point at radius {r} is within two difference steps of the crease at {r0}"
            )));
        }
    }
    let gam = dm.christoffel_at(point, h)?;
    // dgam[e][a][(b, c)] = d_e Gamma^a_{bc}
    let dgam = (0..d)
        .map(|e| {
            let mut pp = point.to_vec();
            let mut pm = point.to_vec();
            pp[e] += h;
            pm[e] -= h;
            let (gp, gm) = (dm.christoffel_at(&pp, h)?, dm.christoffel_at(&pm, h)?);
            Ok(gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * h)).collect::<Vec<Mat>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut s = 0.0;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let mut r = dgam[c][a][(e, b)] - dgam[e][a][(c, b)];
                    for f in 0..d {
                        r += gam[a][(c, f)] * gam[f][(e, b)] - gam[a][(e, f)] * gam[f][(c, b)];
                    }
                    s += r * r;
                }
            }
        }
    }
    Ok(s.sqrt())
}
