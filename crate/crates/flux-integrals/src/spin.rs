//! Spin and Sen connections, the Dirac-Witten operator and the boundary operator of a
//! coordinate sphere, all in the spin frame induced by the symmetric orthonormal frame.

use clifford_core::{CMat, CliffordRep, Complex64, Result, Spinor};
use geometry_catalog::linalg::{norm, Mat};
use geometry_catalog::surface::tangent_frame;
use geometry_catalog::{normal_field, InitialData, Orientation, PointGeometry};

use crate::field::{partials, SpinorField};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Connection data at one point.
#[derive(Debug, Clone)]
pub struct SpinFrame {
    pub x: Vec<f64>,
    /// Row `i` holds the coordinate components of `e_i`.
    pub frame: Mat,
    pub coframe: Mat,
    /// `Omega_i = 1/4 sum omega_{jl}(e_i) gamma_j gamma_l`.
    pub spin_conn: Vec<CMat>,
    /// `Omega_i + 1/2 sum_j k(e_i, e_j) gamma_j tau`.
    pub sen_conn: Vec<CMat>,
    pub gammas: Vec<CMat>,
    pub tau: CMat,
}

impl SpinFrame {
    pub fn new(rep: &CliffordRep, pg: &PointGeometry) -> Self {
        let n = pg.dim();
        let gammas = rep.gammas().to_vec();
        let tau = rep.tau().clone();
        let d = rep.dim();
        let mut spin_conn = Vec::with_capacity(n);
        let mut sen_conn = Vec::with_capacity(n);
        for i in 0..n {
            let mut om = CMat::zeros(d, d);
            for j in 0..n {
                for l in 0..n {
                    let w = pg.omega[i][(j, l)];
                    if w != 0.0 && j != l {
                        om += &gammas[j] * &gammas[l] * c(0.25 * w);
                    }
                }
            }
            let mut kt = CMat::zeros(d, d);
            for j in 0..n {
                let w = pg.k_frame[(i, j)];
                if w != 0.0 {
                    kt += &gammas[j] * c(0.5 * w);
                }
            }
            sen_conn.push(&om + kt * &tau);
            spin_conn.push(om);
        }
        Self { x: pg.x.clone(), frame: pg.frame.clone(), coframe: pg.coframe.clone(), spin_conn, sen_conn, gammas, tau }
    }

    pub fn at(data: &InitialData, rep: &CliffordRep, x: &[f64]) -> Result<Self> {
        Ok(Self::new(rep, &PointGeometry::new(data, x)?))
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Clifford multiplication by the vector with frame components `v`.
    pub fn clifford(&self, v: &[f64]) -> CMat {
        let d = self.tau.nrows();
        let mut m = CMat::zeros(d, d);
        for (g, vi) in self.gammas.iter().zip(v) {
            if *vi != 0.0 {
                m += g * c(*vi);
            }
        }
        m
    }

    /// `e_i(psi)` from coordinate partials.
    pub fn frame_derivatives(&self, dpsi: &[Spinor]) -> Vec<Spinor> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = Spinor::zeros(dpsi[0].len());
                for (j, dj) in dpsi.iter().enumerate() {
                    let w = self.frame[(i, j)];
                    if w != 0.0 {
                        s += dj * c(w);
                    }
                }
                s
            })
            .collect()
    }

    /// Spin covariant derivatives `nabla_{e_i} psi`.
    pub fn spin_derivatives(&self, psi: &Spinor, dpsi: &[Spinor]) -> Vec<Spinor> {
        self.frame_derivatives(dpsi).into_iter().zip(&self.spin_conn).map(|(d, o)| d + o * psi).collect()
    }

    /// Sen derivatives `nabla-bar_{e_i} psi`.
    pub fn sen_derivatives(&self, psi: &Spinor, dpsi: &[Spinor]) -> Vec<Spinor> {
        self.frame_derivatives(dpsi).into_iter().zip(&self.sen_conn).map(|(d, o)| d + o * psi).collect()
    }

    /// `D_W psi = sum_i gamma_i nabla-bar_i psi`.
    pub fn dirac_witten(&self, psi: &Spinor, dpsi: &[Spinor]) -> Spinor {
        let sd = self.sen_derivatives(psi, dpsi);
        let mut out = Spinor::zeros(psi.len());
        for (g, s) in self.gammas.iter().zip(&sd) {
            out += g * s;
        }
        out
    }

    /// `nabla_X psi` for a coordinate vector `X`.
    pub fn spin_derivative_along(&self, xdir: &[f64], psi: &Spinor, dpsi: &[Spinor]) -> Spinor {
        let n = self.dim();
        let mut out = Spinor::zeros(psi.len());
        for (a, d) in dpsi.iter().enumerate() {
            if xdir[a] != 0.0 {
                out += d * c(xdir[a]);
            }
        }
        let xf: Vec<f64> = (0..n).map(|i| (0..n).map(|j| self.coframe[(i, j)] * xdir[j]).sum()).collect();
        for (o, w) in self.spin_conn.iter().zip(&xf) {
            if *w != 0.0 {
                out += o * psi * c(*w);
            }
        }
        out
    }
}

/// Sen derivative `nabla-bar_{e_i} psi` of a field.
pub fn sen_derivative(
    data: &InitialData,
    rep: &CliffordRep,
    field: &dyn SpinorField,
    x: &[f64],
    i: usize,
) -> Result<Spinor> {
    let sf = SpinFrame::at(data, rep, x)?;
    if i >= sf.dim() {
        return Err(clifford_core::Error::Argument(format!("frame index {i} out of range")));
    }
    let psi = field.value(x);
    Ok(sf.sen_derivatives(&psi, &partials(field, x)).swap_remove(i))
}

pub fn dirac_witten_apply(
    data: &InitialData,
    rep: &CliffordRep,
    field: &dyn SpinorField,
    x: &[f64],
) -> Result<Spinor> {
    let sf = SpinFrame::at(data, rep, x)?;
    Ok(sf.dirac_witten(&field.value(x), &partials(field, x)))
}

/// Geometry of a coordinate sphere at one node, with the unit normal `nu` of the given orientation.
#[derive(Debug, Clone)]
pub struct BoundaryPoint {
    pub spin: SpinFrame,
    pub orientation: Orientation,
    /// Frame components of `nu`.
    pub nu_frame: Vec<f64>,
    /// Coordinate components of a `g`-orthonormal tangent basis.
    pub tangents: Vec<Vec<f64>>,
    pub tangents_frame: Vec<Vec<f64>>,
    /// Frame components of `W(e_a) = nabla_{e_a} nu`.
    pub shape_frame: Vec<Vec<f64>>,
    /// `div nu`.
    pub mean_curvature: f64,
    /// Trace of `k` over the sphere.
    pub trace_k: f64,
    /// `k(nu, e_a)`.
    pub beta: Vec<f64>,
    /// `sqrt(det g) |dr|_g r^{n-1}` times the angular weight.
    pub weight: f64,
}

impl BoundaryPoint {
    pub fn new(
        data: &InitialData,
        rep: &CliffordRep,
        x: &[f64],
        orientation: Orientation,
        angular_weight: f64,
    ) -> Result<Self> {
        let pg = PointGeometry::new(data, x)?;
        Self::from_geometry(rep, &pg, orientation, angular_weight)
    }

    pub fn from_geometry(
        rep: &CliffordRep,
        pg: &PointGeometry,
        orientation: Orientation,
        angular_weight: f64,
    ) -> Result<Self> {
        let n = pg.dim();
        let nf = normal_field(pg, orientation)?;
        let r = norm(&pg.x);
        let xh: Vec<f64> = pg.x.iter().map(|v| v / r).collect();
        let mut tangents: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
        for t in tangent_frame(&xh) {
            let mut v = t;
            for p in &tangents {
                let d = pg.g_dot(&v, p);
                for (a, b) in v.iter_mut().zip(p) {
                    *a -= d * b;
                }
            }
            let l = pg.g_dot(&v, &v).sqrt();
            tangents.push(v.iter().map(|a| a / l).collect());
        }
        let tangents_frame: Vec<Vec<f64>> = tangents.iter().map(|t| pg.vector_to_frame(t)).collect();
        let shape_frame = tangents
            .iter()
            .map(|t| {
                let w: Vec<f64> = (0..n).map(|a| (0..n).map(|cc| nf.nabla_nu[(a, cc)] * t[cc]).sum()).collect();
                pg.vector_to_frame(&w)
            })
            .collect();
        let trace_k = pg.trace_k() - pg.k_dot(&nf.nu, &nf.nu);
        let beta = tangents.iter().map(|t| pg.k_dot(&nf.nu, t)).collect();
        let det = pg.fields.g.determinant();
        let mut dr2 = 0.0;
        for a in 0..n {
            for b in 0..n {
                dr2 += pg.g_inv[(a, b)] * xh[a] * xh[b];
            }
        }
        let weight = det.sqrt() * dr2.sqrt() * r.powi(n as i32 - 1) * angular_weight;
        Ok(Self {
            spin: SpinFrame::new(rep, pg),
            orientation,
            nu_frame: pg.vector_to_frame(&nf.nu),
            tangents,
            tangents_frame,
            shape_frame,
            mean_curvature: nf.mean_curvature,
            trace_k,
            beta,
            weight,
        })
    }

    /// `nabla^S_X psi = nabla_X psi + 1/2 W(X) nu psi` along each tangent `e_a`.
    pub fn boundary_connection(&self, psi: &Spinor, dpsi: &[Spinor]) -> Vec<Spinor> {
        let nu = self.spin.clifford(&self.nu_frame);
        self.tangents
            .iter()
            .zip(&self.shape_frame)
            .map(|(t, w)| {
                self.spin.spin_derivative_along(t, psi, dpsi) + self.spin.clifford(w) * (&nu * psi) * c(0.5)
            })
            .collect()
    }

    /// Boundary Dirac operator `nu sum_a e_a nabla^S_a psi`.
    pub fn boundary_dirac(&self, psi: &Spinor, dpsi: &[Spinor]) -> Spinor {
        let mut s = Spinor::zeros(psi.len());
        for (tf, d) in self.tangents_frame.iter().zip(self.boundary_connection(psi, dpsi)) {
            s += self.spin.clifford(tf) * d;
        }
        self.spin.clifford(&self.nu_frame) * s
    }

    /// `D psi - 1/2 H psi - 1/2 [(tr k) nu - k(nu, e_a) e_a] tau psi`.
    pub fn boundary_operator(&self, psi: &Spinor, dpsi: &[Spinor]) -> Spinor {
        let n = self.spin.dim();
        let mut v: Vec<f64> = self.nu_frame.iter().map(|a| a * self.trace_k).collect();
        for (b, tf) in self.beta.iter().zip(&self.tangents_frame) {
            for i in 0..n {
                v[i] -= b * tf[i];
            }
        }
        let kv = self.spin.clifford(&v) * (&self.spin.tau * psi);
        self.boundary_dirac(psi, dpsi) - psi * c(0.5 * self.mean_curvature) - kv * c(0.5)
    }

    /// `<psi, nabla-bar_nu psi + nu D_W psi>`, pointwise equal to the boundary integrand.
    pub fn normal_form(&self, psi: &Spinor, dpsi: &[Spinor]) -> Complex64 {
        let sd = self.spin.sen_derivatives(psi, dpsi);
        let mut dn = Spinor::zeros(psi.len());
        for (s, w) in sd.iter().zip(&self.nu_frame) {
            dn += s * c(*w);
        }
        let dw = self.spin.dirac_witten(psi, dpsi);
        psi.dotc(&(dn + self.spin.clifford(&self.nu_frame) * dw))
    }

    pub fn integrand(&self, psi: &Spinor, dpsi: &[Spinor]) -> Complex64 {
        psi.dotc(&self.boundary_operator(psi, dpsi))
    }
}
