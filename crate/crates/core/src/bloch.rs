//! Bloch–Fano decompositions in the generalised Gell-Mann basis.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{kron, kron_all, ComplexMatrix, I, ONE};
use crate::states::DensityMatrix;

/// Traceless Hermitian generators with `Tr(σₘσₙ) = 2δₘₙ`, ordered as the
/// symmetric pairs, then the antisymmetric pairs, then the diagonals.
#[derive(Clone, Debug)]
pub struct GellMannBasis {
    d: usize,
    matrices: Vec<ComplexMatrix>,
}

impl GellMannBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
}

pub fn gell_mann_basis(d: usize) -> GellMannBasis {
    assert!(d >= 2, "Gell-Mann basis needs d >= 2");
    let mut matrices = Vec::with_capacity(d * d - 1);
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d);
        m[(j, k)] = ONE;
        m[(k, j)] = ONE;
        matrices.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d);
        m[(j, k)] = -I;
        m[(k, j)] = I;
        matrices.push(m);
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        diag[..l].iter_mut().for_each(|v| *v = norm);
        diag[l] = -(l as f64) * norm;
        matrices.push(ComplexMatrix::from_diagonal(&diag));
    }
    GellMannBasis { d, matrices }
}

/// Dense row-major real matrix used for correlation tensors.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    /// `Tr(TᵀT)`.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn equal_local_dims(rho: &DensityMatrix, parties: usize) -> Result<usize> {
    let dims = rho.dims();
    if dims.len() != parties || dims.iter().any(|&d| d != dims[0]) {
        return Err(Error::DimensionMismatch(format!(
            "expected {parties} equal local dimensions, got {dims:?}"
        )));
    }
    Ok(dims[0])
}

fn real_trace(rho: &DensityMatrix, op: &ComplexMatrix) -> f64 {
    rho.matrix().trace_of_product(op).re
}

/// `ρ = (1/d²)(I + Σ aₘ σₘ⊗I + Σ bₙ I⊗σₙ + Σ tₘₙ σₘ⊗σₙ)`.
#[derive(Clone, Debug)]
pub struct BlochBipartite {
    pub d: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub t: RealMatrix,
}

impl BlochBipartite {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let basis = gell_mann_basis(self.d);
        let id = ComplexMatrix::identity(self.d);
        let mut m = ComplexMatrix::identity(self.d * self.d);
        for (i, s) in basis.matrices().iter().enumerate() {
            m = &m + &kron(s, &id).scale_real(self.a[i]);
            m = &m + &kron(&id, s).scale_real(self.b[i]);
            for (j, s2) in basis.matrices().iter().enumerate() {
                let c = self.t.get(i, j);
                if c != 0.0 {
                    m = &m + &kron(s, s2).scale_real(c);
                }
            }
        }
        m.scale_real(1.0 / (self.d * self.d) as f64)
    }

    pub fn a_norm_sq(&self) -> f64 {
        norm_sq(&self.a)
    }

    pub fn b_norm_sq(&self) -> f64 {
        norm_sq(&self.b)
    }

    pub fn t_norm_sq(&self) -> f64 {
        self.t.frobenius_sq()
    }
}

pub fn decompose_bipartite(rho: &DensityMatrix) -> Result<BlochBipartite> {
    let d = equal_local_dims(rho, 2)?;
    let basis = gell_mann_basis(d);
    let id = ComplexMatrix::identity(d);
    let n = basis.len();
    let df = d as f64;
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut t = RealMatrix::zeros(n, n);
    for (i, s) in basis.matrices().iter().enumerate() {
        a[i] = df / 2.0 * real_trace(rho, &kron(s, &id));
        b[i] = df / 2.0 * real_trace(rho, &kron(&id, s));
        for (j, s2) in basis.matrices().iter().enumerate() {
            t.set(i, j, df * df / 4.0 * real_trace(rho, &kron(s, s2)));
        }
    }
    Ok(BlochBipartite { d, a, b, t })
}

/// `(d² + 2d‖a‖² + 2d‖b‖² + 4‖T‖²)/d⁴`.
pub fn purity_from_bloch(bb: &BlochBipartite) -> f64 {
    let d = bb.d as f64;
    (d * d + 2.0 * d * (bb.a_norm_sq() + bb.b_norm_sq()) + 4.0 * bb.t_norm_sq()) / d.powi(4)
}

/// Which two parties of a tripartite state are retained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pair {
    P23,
    P13,
    P12,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::P23, Pair::P13, Pair::P12];

    /// Zero-based subsystem indices kept.
    pub fn kept(self) -> [usize; 2] {
        match self {
            Pair::P23 => [1, 2],
            Pair::P13 => [0, 2],
            Pair::P12 => [0, 1],
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y] = self.kept();
        write!(f, "{}{}", x + 1, y + 1)
    }
}

impl FromStr for Pair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "23" => Ok(Pair::P23),
            "13" => Ok(Pair::P13),
            "12" => Ok(Pair::P12),
            other => Err(Error::DimensionMismatch(format!(
                "pair must be 23, 13 or 12, got {other:?}"
            ))),
        }
    }
}

/// Raw trace coefficients of a three-party state, e.g.
/// `t1[i] = Tr(ρ σᵢ⊗I⊗I)` and `t123[i][j][k] = Tr(ρ σᵢ⊗σⱼ⊗σₖ)`.
#[derive(Clone, Debug)]
pub struct BlochTripartite {
    pub d: usize,
    pub t1: Vec<f64>,
    pub t2: Vec<f64>,
    pub t3: Vec<f64>,
    pub t12: RealMatrix,
    pub t13: RealMatrix,
    pub t23: RealMatrix,
    /// Flattened `n×n×n`, index `(i·n + j)·n + k`.
    pub t123: Vec<f64>,
}

impl BlochTripartite {
    fn n(&self) -> usize {
        self.t1.len()
    }

    pub fn t123_at(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.n();
        self.t123[(i * n + j) * n + k]
    }

    /// Local vectors and correlation matrix for the retained pair, in
    /// subsystem order.
    pub fn pair_data(&self, pair: Pair) -> (&[f64], &[f64], &RealMatrix) {
        match pair {
            Pair::P23 => (&self.t2, &self.t3, &self.t23),
            Pair::P13 => (&self.t1, &self.t3, &self.t13),
            Pair::P12 => (&self.t1, &self.t2, &self.t12),
        }
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.d;
        let df = d as f64;
        let basis = gell_mann_basis(d);
        let s = basis.matrices();
        let id = ComplexMatrix::identity(d);
        let mut m = ComplexMatrix::identity(d * d * d).scale_real(1.0 / df.powi(3));
        let single = 1.0 / (2.0 * df * df);
        let double = 1.0 / (4.0 * df);
        for i in 0..self.n() {
            m = &m + &kron_all([&s[i], &id, &id]).scale_real(single * self.t1[i]);
            m = &m + &kron_all([&id, &s[i], &id]).scale_real(single * self.t2[i]);
            m = &m + &kron_all([&id, &id, &s[i]]).scale_real(single * self.t3[i]);
            for j in 0..self.n() {
                m = &m + &kron_all([&s[i], &s[j], &id]).scale_real(double * self.t12.get(i, j));
                m = &m + &kron_all([&s[i], &id, &s[j]]).scale_real(double * self.t13.get(i, j));
                m = &m + &kron_all([&id, &s[i], &s[j]]).scale_real(double * self.t23.get(i, j));
                for k in 0..self.n() {
                    let c = self.t123_at(i, j, k);
                    if c != 0.0 {
                        m = &m + &kron_all([&s[i], &s[j], &s[k]]).scale_real(c / 8.0);
                    }
                }
            }
        }
        m
    }
}

pub fn decompose_tripartite(rho: &DensityMatrix) -> Result<BlochTripartite> {
    let d = equal_local_dims(rho, 3)?;
    let basis = gell_mann_basis(d);
    let s = basis.matrices();
    let id = ComplexMatrix::identity(d);
    let n = basis.len();
    let mut out = BlochTripartite {
        d,
        t1: vec![0.0; n],
        t2: vec![0.0; n],
        t3: vec![0.0; n],
        t12: RealMatrix::zeros(n, n),
        t13: RealMatrix::zeros(n, n),
        t23: RealMatrix::zeros(n, n),
        t123: vec![0.0; n * n * n],
    };
    for i in 0..n {
        out.t1[i] = real_trace(rho, &kron_all([&s[i], &id, &id]));
        out.t2[i] = real_trace(rho, &kron_all([&id, &s[i], &id]));
        out.t3[i] = real_trace(rho, &kron_all([&id, &id, &s[i]]));
        for j in 0..n {
            out.t12.set(i, j, real_trace(rho, &kron_all([&s[i], &s[j], &id])));
            out.t13.set(i, j, real_trace(rho, &kron_all([&s[i], &id, &s[j]])));
            out.t23.set(i, j, real_trace(rho, &kron_all([&id, &s[i], &s[j]])));
            let sij = kron(&s[i], &s[j]);
            for (k, sk) in s.iter().enumerate() {
                out.t123[(i * n + j) * n + k] = real_trace(rho, &kron(&sij, sk));
            }
        }
    }
    Ok(out)
}

/// `1/d² + (‖T_x‖² + ‖T_y‖²)/(2d) + ‖T_xy‖²/4` for the retained pair.
pub fn marginal_purity(bt: &BlochTripartite, pair: Pair) -> f64 {
    let d = bt.d as f64;
    let (x, y, xy) = bt.pair_data(pair);
    1.0 / (d * d) + (norm_sq(x) + norm_sq(y)) / (2.0 * d) + xy.frobenius_sq() / 4.0
}

/// Two-party marginal assembled from Bloch data:
/// `I/d² + (1/2d)(Σ xᵢ σᵢ⊗I + Σ yⱼ I⊗σⱼ) + (1/4) Σ tᵢⱼ σᵢ⊗σⱼ`.
pub fn reduced_from_bloch(bt: &BlochTripartite, pair: Pair) -> ComplexMatrix {
    let d = bt.d;
    let df = d as f64;
    let basis = gell_mann_basis(d);
    let s = basis.matrices();
    let id = ComplexMatrix::identity(d);
    let (x, y, xy) = bt.pair_data(pair);
    let mut m = ComplexMatrix::identity(d * d).scale_real(1.0 / (df * df));
    for i in 0..s.len() {
        m = &m + &kron(&s[i], &id).scale_real(x[i] / (2.0 * df));
        m = &m + &kron(&id, &s[i]).scale_real(y[i] / (2.0 * df));
        for j in 0..s.len() {
            m = &m + &kron(&s[i], &s[j]).scale_real(xy.get(i, j) / 4.0);
        }
    }
    m
}
