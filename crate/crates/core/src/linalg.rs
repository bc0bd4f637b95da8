//! Dense complex matrices sized for two- and three-party operators
//! (dimension at most ~64), with a cyclic Jacobi Hermitian eigensolver,
//! Kronecker products, partial traces and Haar-random unitaries.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

pub use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::states::DensityMatrix;
use crate::tolerances;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries cannot form a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, values: &[f64]) -> Result<Self> {
        Self::new(dim, values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// `|v⟩⟨v|` for an (unnormalised) ket.
    pub fn projector(ket: &[C64]) -> Self {
        Self::from_fn(ket.len(), |i, j| ket[i] * ket[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> C64 {
        assert_eq!(self.dim, other.dim, "trace_of_product dimension mismatch");
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += self.entries[i * n + j] * other.entries[j * n + i];
            }
        }
        acc
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.dagger()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise `|M - M†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise `|U†U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.dagger() * self).max_abs_diff(&Self::identity(self.dim))
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    fn off_diagonal_norm(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.entries[k * n..(k + 1) * n];
                for (o, b) in out[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        ComplexMatrix { dim: n, entries: out }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted non-increasing; column `k` of `eigenvectors`
/// belongs to `eigenvalues[k]`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj())
                .sum()
        })
    }
}

/// Full Hermitian eigen-decomposition by cyclic complex Jacobi rotations.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Spectrum> {
    let (values, vectors) = jacobi(m, true)?;
    let vectors = vectors.expect("vectors requested");
    let order = descending_order(&values);
    let n = m.dim();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| vectors[(i, order[j])]);
    Ok(Spectrum {
        eigenvalues: order.iter().map(|&k| values[k]).collect(),
        eigenvectors,
    })
}

/// Eigenvalues only (non-increasing); skips eigenvector accumulation.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let (values, _) = jacobi(m, false)?;
    Ok(descending_order(&values).into_iter().map(|k| values[k]).collect())
}

fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    // stable sort keeps ties in original index order
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order
}

fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let defect = m.hermiticity_defect();
    if defect > tolerances::HERMITICITY {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let norm = a.frobenius_norm();

    let mut converged = false;
    for _ in 0..tolerances::JACOBI_MAX_SWEEPS {
        let off = a.off_diagonal_norm();
        if off == 0.0 || off <= tolerances::JACOBI_OFF_DIAGONAL * norm {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                rotate(&mut a, v.as_mut(), p, q);
            }
        }
    }
    if !converged && a.off_diagonal_norm() > tolerances::JACOBI_OFF_DIAGONAL * norm {
        return Err(Error::NoConvergence(tolerances::JACOBI_MAX_SWEEPS));
    }
    Ok(((0..n).map(|i| a[(i, i)].re).collect(), v))
}

/// One complex Jacobi rotation annihilating `a[p,q]`.
fn rotate(a: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.dim();
    let phase_conj = (apq / r).conj();
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U restricted to the (p,q) plane: [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
    let upp = C64::new(c, 0.0);
    let upq = C64::new(s, 0.0);
    let uqp = phase_conj * (-s);
    let uqq = phase_conj * c;

    let rotate_columns = |m: &mut ComplexMatrix| {
        for k in 0..n {
            let mkp = m[(k, p)];
            let mkq = m[(k, q)];
            m[(k, p)] = mkp * upp + mkq * uqp;
            m[(k, q)] = mkp * upq + mkq * uqq;
        }
    };
    rotate_columns(a);
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    if let Some(v) = v {
        rotate_columns(v);
    }
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(da * db, |r, c| a[(r / db, c / db)] * b[(r % db, c % db)])
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// Traces out every subsystem not listed in `keep`.
///
/// `dims` lists the local dimensions in big-endian order; `keep` holds
/// subsystem indices and is interpreted as a set (the kept subsystems
/// stay in their original order).
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || total != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {dims:?} do not multiply to {}",
            m.dim()
        )));
    }
    if keep.is_empty() || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "keep set {keep:?} invalid for {} subsystems",
            dims.len()
        )));
    }
    let kept: Vec<bool> = (0..dims.len()).map(|s| keep.contains(&s)).collect();
    let kept_dim: usize = dims.iter().zip(&kept).filter(|(_, &k)| k).map(|(d, _)| d).product();
    let traced_dim = total / kept_dim;

    // full_index[k * traced_dim + t] is the global index with kept digits k and traced digits t.
    let mut full_index = vec![0usize; total];
    for global in 0..total {
        let (mut k, mut t) = (0usize, 0usize);
        let mut rem = global;
        let mut kw = 1;
        let mut tw = 1;
        for s in (0..dims.len()).rev() {
            let digit = rem % dims[s];
            rem /= dims[s];
            if kept[s] {
                k += digit * kw;
                kw *= dims[s];
            } else {
                t += digit * tw;
                tw *= dims[s];
            }
        }
        full_index[k * traced_dim + t] = global;
    }

    Ok(ComplexMatrix::from_fn(kept_dim, |i, j| {
        (0..traced_dim)
            .map(|t| m[(full_index[i * traced_dim + t], full_index[j * traced_dim + t])])
            .sum()
    }))
}

/// `Tr ρⁿ` evaluated on the spectrum.
pub fn trace_power(rho: &DensityMatrix, n: u32) -> f64 {
    assert!(n >= 1, "trace_power needs n >= 1");
    rho.eigenvalues()
        .iter()
        .map(|&l| l.max(0.0).powi(n as i32))
        .sum()
}

/// Haar-distributed unitary, deterministic per seed.
pub fn haar_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_unitary_with(dim, &mut rng)
}

/// Haar-distributed unitary drawn from a caller-owned RNG.
///
/// Gram–Schmidt on the columns of a complex Ginibre matrix; the implied
/// `R` has a positive real diagonal, which is the phase correction that
/// makes `Q` exactly Haar.
pub fn haar_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    assert!(dim >= 1, "haar_unitary needs dim >= 1");
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut columns: Vec<Vec<C64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    C64::new(re * scale, im * scale)
                })
                .collect()
        })
        .collect();

    for j in 0..dim {
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for i in 0..j {
                let (done, rest) = columns.split_at_mut(j);
                let qi = &done[i];
                let vj = &mut rest[0];
                let overlap: C64 = qi.iter().zip(vj.iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, q) in vj.iter_mut().zip(qi) {
                    *x -= overlap * q;
                }
            }
        }
        let norm = columns[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in columns[j].iter_mut() {
            *x /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| columns[j][i])
}

/// Pauli matrices.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(2, vec![ZERO, -I, I, ZERO]).expect("2x2")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[1.0, -1.0])
}
