//! Validated density matrices and the named state families.
//!
//! Basis ordering is big-endian: for qubits `|abc⟩` is index `4a + 2b + c`,
//! and qudits follow the same radix-`d` rule.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ZERO};
use crate::tolerances;

/// A quantum state: Hermitian, unit trace, positive semidefinite, with
/// subsystem dimensions attached.
///
/// The spectrum is computed once during validation and cached, since
/// nearly every downstream criterion is a spectral function.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
    eigenvalues: Vec<f64>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || total != matrix.dim() {
            return Err(Error::DimensionMismatch(format!(
                "subsystem dims {dims:?} do not multiply to {}",
                matrix.dim()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > tolerances::HERMITICITY {
            return Err(Error::NotHermitian(defect));
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tolerances::UNIT_TRACE {
            return Err(Error::InvalidTrace(trace));
        }
        let eigenvalues = linalg::eigvals_hermitian(&matrix)?;
        let min = *eigenvalues.last().expect("nonempty spectrum");
        if min < tolerances::PSD_FLOOR {
            return Err(Error::NotPositive(min));
        }
        Ok(Self {
            matrix,
            dims,
            eigenvalues,
        })
    }

    /// `|ψ⟩⟨ψ|`; the ket must already be normalised.
    pub fn from_pure(ket: &[C64], dims: Vec<usize>) -> Result<Self> {
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > tolerances::NORMALIZATION {
            return Err(Error::NotNormalized(norm));
        }
        Self::new(ComplexMatrix::projector(ket), dims)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        let m = ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
        Self::new(m, dims).expect("maximally mixed state is valid")
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probabilities: &[f64], dims: Vec<usize>) -> Result<Self> {
        Self::new(ComplexMatrix::from_diagonal(probabilities), dims)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Common local dimension when every subsystem has the same size.
    pub fn local_dim(&self) -> Option<usize> {
        let d = self.dims[0];
        self.dims.iter().all(|&x| x == d).then_some(d)
    }

    /// Local dimension `d` of a `d ⊗ d` state.
    pub fn bipartite_local_dim(&self) -> Result<usize> {
        match self.dims.as_slice() {
            [a, b] if a == b => Ok(*a),
            other => Err(Error::DimensionMismatch(format!(
                "expected a d⊗d state, got dims {other:?}"
            ))),
        }
    }

    /// Eigenvalues, non-increasing.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn purity(&self) -> f64 {
        linalg::trace_power(self, 2)
    }

    /// Reduced state on the subsystems in `keep`.
    pub fn reduce(&self, keep: &[usize]) -> Result<Self> {
        let m = linalg::partial_trace(&self.matrix, &self.dims, keep)?;
        let dims = (0..self.dims.len())
            .filter(|s| keep.contains(s))
            .map(|s| self.dims[s])
            .collect();
        Self::new(m, dims)
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "unitary of dim {} on state of dim {}",
                u.dim(),
                self.dim()
            )));
        }
        Self::new(self.matrix.conjugate_by(u).hermitian_part(), self.dims.clone())
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let m = linalg::kron(&self.matrix, &other.matrix);
        let dims = self.dims.iter().chain(&other.dims).copied().collect();
        Self::new(m, dims).expect("product of states is a state")
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `cos θ|00⟩ + sin θ|11⟩`.
pub fn pure_schmidt(theta: f64) -> DensityMatrix {
    let ket = [real(theta.cos()), ZERO, ZERO, real(theta.sin())];
    DensityMatrix::from_pure(&ket, vec![2, 2]).expect("unit Schmidt vector")
}

/// True at the endpoints θ ∈ {0, π/2} (mod π/2) where the Schmidt state is a product.
pub fn schmidt_is_product(theta: f64) -> bool {
    let (s, c) = theta.sin_cos();
    (s * c).abs() < 1e-12
}

/// Globally depolarised Schmidt state with the pure component kept at
/// weight `p`: `p|ψ⟩⟨ψ| + (1-p)I/4`.
///
/// Equivalent to [`crate::channels::global_depolarize`] with noise `1 - p`.
pub fn depolarized_schmidt(theta: f64, p: f64) -> Result<DensityMatrix> {
    check_closed("p", p, 0.0, 1.0, "[0, 1]")?;
    let pure = pure_schmidt(theta);
    let m = &pure.matrix().scale_real(p) + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    DensityMatrix::new(m, vec![2, 2])
}

/// Two-parameter mixed family with corners `(1-λ)/2` and central block
/// `λ·[[sin²θ, sinθcosθ], [sinθcosθ, cos²θ]]`.
pub fn acin_two_param(lambda: f64, theta: f64) -> Result<DensityMatrix> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            allowed: "(0, 1)",
        });
    }
    if !(theta > 0.0 && theta < PI / 2.0) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
            allowed: "(0, π/2)",
        });
    }
    let (s, c) = theta.sin_cos();
    let corner = (1.0 - lambda) / 2.0;
    #[rustfmt::skip]
    let m = ComplexMatrix::from_real(4, &[
        corner, 0.0,            0.0,            0.0,
        0.0,    lambda * s * s, lambda * s * c, 0.0,
        0.0,    lambda * s * c, lambda * c * c, 0.0,
        0.0,    0.0,            0.0,            corner,
    ])?;
    DensityMatrix::new(m, vec![2, 2])
}

/// `(1/√d) Σᵢ |ii⟩`.
pub fn max_entangled_ket(d: usize) -> Vec<C64> {
    let amp = real(1.0 / (d as f64).sqrt());
    (0..d * d)
        .map(|k| if k / d == k % d { amp } else { ZERO })
        .collect()
}

/// Isotropic state `β|ψ⁺⟩⟨ψ⁺| + (1-β)I/d²`.
pub fn isotropic(d: usize, beta: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
            allowed: "d >= 2",
        });
    }
    let lower = -1.0 / ((d * d - 1) as f64);
    if !(beta >= lower - 1e-15 && beta <= 1.0 + 1e-15) {
        return Err(Error::OutOfRange {
            name: "beta",
            value: beta,
            allowed: "[-1/(d²-1), 1]",
        });
    }
    let n = d * d;
    let psi = ComplexMatrix::projector(&max_entangled_ket(d));
    let m = &psi.scale_real(beta) + &ComplexMatrix::identity(n).scale_real((1.0 - beta) / n as f64);
    DensityMatrix::new(m, vec![d, d])
}

/// Three-qubit pure state
/// `x₀|000⟩ + x₁e^{iθ}|100⟩ + x₂|101⟩ + x₃|110⟩ + x₄|111⟩`.
pub fn acin_tripartite(x: [f64; 5], theta: f64) -> Result<DensityMatrix> {
    if let Some(&bad) = x.iter().find(|v| **v < 0.0) {
        return Err(Error::OutOfRange {
            name: "x_i",
            value: bad,
            allowed: "x_i >= 0",
        });
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
            allowed: "[0, π]",
        });
    }
    let norm: f64 = x.iter().map(|v| v * v).sum();
    if (norm - 1.0).abs() > tolerances::NORMALIZATION {
        return Err(Error::NotNormalized(norm));
    }
    let mut ket = vec![ZERO; 8];
    ket[0] = real(x[0]);
    ket[4] = C64::from_polar(x[1], theta);
    ket[5] = real(x[2]);
    ket[6] = real(x[3]);
    ket[7] = real(x[4]);
    DensityMatrix::from_pure(&ket, vec![2, 2, 2])
}

pub fn ghz_ket() -> Vec<C64> {
    let mut ket = vec![ZERO; 8];
    ket[0] = real(FRAC_1_SQRT_2);
    ket[7] = real(FRAC_1_SQRT_2);
    ket
}

pub fn w_ket() -> Vec<C64> {
    let amp = real(1.0 / 3f64.sqrt());
    let mut ket = vec![ZERO; 8];
    ket[1] = amp;
    ket[2] = amp;
    ket[4] = amp;
    ket
}

/// `p|GHZ⟩⟨GHZ| + (1-p)|W⟩⟨W|`.
pub fn ghz_w_mix(p: f64) -> Result<DensityMatrix> {
    check_closed("p", p, 0.0, 1.0, "[0, 1]")?;
    let m = &ComplexMatrix::projector(&ghz_ket()).scale_real(p)
        + &ComplexMatrix::projector(&w_ket()).scale_real(1.0 - p);
    DensityMatrix::new(m, vec![2, 2, 2])
}

/// Two-qubit Bell kets in outcome order:
/// 0 → ψ⁺ = (|00⟩+|11⟩)/√2, 1 → ψ⁻ = (|00⟩−|11⟩)/√2,
/// 2 → φ⁺ = (|01⟩+|10⟩)/√2, 3 → φ⁻ = (|01⟩−|10⟩)/√2.
pub fn bell_ket(index: usize) -> Result<[C64; 4]> {
    let h = real(FRAC_1_SQRT_2);
    Ok(match index {
        0 => [h, ZERO, ZERO, h],
        1 => [h, ZERO, ZERO, -h],
        2 => [ZERO, h, h, ZERO],
        3 => [ZERO, h, -h, ZERO],
        _ => {
            return Err(Error::OutOfRange {
                name: "index",
                value: index as f64,
                allowed: "{0, 1, 2, 3}",
            })
        }
    })
}

pub fn bell_state(index: usize) -> Result<DensityMatrix> {
    DensityMatrix::from_pure(&bell_ket(index)?, vec![2, 2])
}

/// Mixture of the `d²` generalised Bell states
/// `(I ⊗ XᵐZⁿ)|ψ⁺⟩`, weight `weights[m·d + n]`.
///
/// These states have vanishing local Bloch vectors.
pub fn weyl_diagonal(d: usize, weights: &[f64]) -> Result<DensityMatrix> {
    if weights.len() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "need {} weights for d = {d}, got {}",
            d * d,
            weights.len()
        )));
    }
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|w| *w < 0.0) || (total - 1.0).abs() > tolerances::NORMALIZATION {
        return Err(Error::NotNormalized(total));
    }
    let psi = max_entangled_ket(d);
    let omega = 2.0 * PI / d as f64;
    let mut acc = ComplexMatrix::zeros(d * d);
    for m in 0..d {
        for n in 0..d {
            // X^m Z^n |j⟩ = ω^{nj} |j+m⟩
            let shift = ComplexMatrix::from_fn(d, |row, col| {
                if row == (col + m) % d {
                    C64::from_polar(1.0, omega * (n * col) as f64)
                } else {
                    ZERO
                }
            });
            let op = linalg::kron(&ComplexMatrix::identity(d), &shift);
            let ket: Vec<C64> = (0..d * d)
                .map(|i| (0..d * d).map(|j| op[(i, j)] * psi[j]).sum())
                .collect();
            acc = &acc + &ComplexMatrix::projector(&ket).scale_real(weights[m * d + n]);
        }
    }
    DensityMatrix::new(acc, vec![d, d])
}

pub fn check_closed(name: &'static str, value: f64, lo: f64, hi: f64, allowed: &'static str) -> Result<()> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value, allowed })
    }
}
