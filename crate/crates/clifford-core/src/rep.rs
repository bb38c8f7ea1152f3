//! Gamma matrices for the spacetime spinor space `S = S0 (+) S0`.

use crate::error::{Error, Result};
use crate::{CMat, Spinor};
use nalgebra::DMatrix;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Concrete Clifford representation with `VW + WV = -2 h(V, W)`.
///
/// Spatial vectors act blockwise as `X psi1 (+) -X psi2`, `tau` swaps the blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordRep {
    n: usize,
    dim: usize,
    gamma: Vec<CMat>,
    tau: CMat,
}

/// Description of the block layout used by [`CliffordRep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockConvention {
    pub half_dim: usize,
}

fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

fn pauli() -> [CMat; 3] {
    let s1 = DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
    let s2 = DMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]);
    let s3 = DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
    [s1, s2, s3]
}

/// Generators of Cl(n) on S0 with `c_i^2 = -1`, built by iterated doubling from n = 2.
fn base_generators(n: usize) -> Vec<CMat> {
    let [s1, s2, s3] = pauli();
    let mut gens = vec![s1.map(|z| z * I), s2.map(|z| z * I)];
    let mut chir = s3.clone();
    let mut m = 2;
    while m + 2 <= n {
        let id = CMat::identity(chir.nrows(), chir.ncols());
        let mut next: Vec<CMat> = gens.iter().map(|c| kron(c, &s3)).collect();
        next.push(kron(&id, &s1.map(|z| z * I)));
        next.push(kron(&id, &s2.map(|z| z * I)));
        chir = kron(&chir, &s3);
        gens = next;
        m += 2;
    }
    if n % 2 == 1 {
        gens.push(chir.map(|z| z * I));
    }
    gens
}

impl CliffordRep {
    /// Build the representation for spatial dimension `3 <= n <= 6`.
    pub fn new(n: usize) -> Result<Self> {
        if !(3..=6).contains(&n) {
            return Err(Error::Config(format!("unsupported spatial dimension n = {n} (need 3..=6)")));
        }
        let base = base_generators(n);
        let h = base[0].nrows();
        let dim = 2 * h;
        let gamma = base
            .iter()
            .map(|c| {
                let mut g = CMat::zeros(dim, dim);
                g.view_mut((0, 0), (h, h)).copy_from(c);
                g.view_mut((h, h), (h, h)).copy_from(&(-c));
                g
            })
            .collect();
        let mut tau = CMat::zeros(dim, dim);
        for k in 0..h {
            tau[(k, h + k)] = ONE;
            tau[(h + k, k)] = ONE;
        }
        Ok(Self { n, dim, gamma, tau })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Spinor dimension `I = 2 * 2^floor(n/2)`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Gamma matrix for frame index `i` (zero based).
    pub fn gamma(&self, i: usize) -> &CMat {
        &self.gamma[i]
    }

    pub fn gammas(&self) -> &[CMat] {
        &self.gamma
    }

    pub fn tau(&self) -> &CMat {
        &self.tau
    }

    pub fn identity(&self) -> CMat {
        CMat::identity(self.dim, self.dim)
    }

    pub fn block_convention(&self) -> BlockConvention {
        BlockConvention { half_dim: self.dim / 2 }
    }

    /// Matrix of Clifford multiplication by the spatial vector with frame components `v`.
    pub fn vector_matrix(&self, v: &[f64]) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (g, &c) in self.gamma.iter().zip(v) {
            if c != 0.0 {
                m += g * Complex64::new(c, 0.0);
            }
        }
        m
    }

    pub(crate) fn check_spinor(&self, psi: &Spinor) -> Result<()> {
        if psi.len() != self.dim {
            return Err(Error::Argument(format!(
                "spinor has dimension {}, representation needs {}",
                psi.len(),
                self.dim
            )));
        }
        Ok(())
    }
}

/// Deterministic constructor; identical input gives identical matrices.
pub fn build_rep(n: usize) -> Result<CliffordRep> {
    CliffordRep::new(n)
}
