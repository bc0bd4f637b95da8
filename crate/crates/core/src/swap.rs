//! Entanglement swapping: Bell measurement on the two middle qubits of
//! `ρ_ab ⊗ ρ_bc` and the retrieval test on the resulting outer pair.

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use crate::channels::{damped_schmidt, ChannelKind};
use crate::entropy::von_neumann_of_spectrum;
use crate::error::{Error, Result};
use crate::linalg::{eigvals_hermitian, ComplexMatrix, C64, ZERO};
use crate::states::{bell_ket, depolarized_schmidt, DensityMatrix};
use crate::sweep::{scan_3d, Axis, SweepGrid};
use crate::tolerances::{NULL_OUTCOME, THRESHOLD_GUARD};

/// Bob's broadcast bits, indexed like [`bell_ket`]:
/// `00 ↔ ψ⁺`, `01 ↔ ψ⁻`, `10 ↔ φ⁺`, `11 ↔ φ⁻`.
pub const LABELS: [&str; 4] = ["00", "01", "10", "11"];

#[derive(Clone, Debug)]
pub struct SwapOutcome {
    pub label: &'static str,
    pub probability: f64,
    /// `None` when the outcome has (numerically) zero probability.
    pub conditional_state: Option<DensityMatrix>,
}

fn check_two_qubit(rho: &DensityMatrix, name: &str) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "{name} must be a two-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Unnormalised `Tr_{B₁B₂}[(I⊗P⊗I) ρ_ab⊗ρ_bc (I⊗P⊗I)]` for `P = |β⟩⟨β|`,
/// contracted directly: entry `(a c, a' c')` is
/// `Σ β*(b₁b₂) β(b₁'b₂') ρ_ab(a b₁, a' b₁') ρ_bc(b₂ c, b₂' c')`.
fn project(rho_ab: &ComplexMatrix, rho_bc: &ComplexMatrix, beta: &[C64; 4]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4);
    for a in 0..2 {
        for c in 0..2 {
            for ap in 0..2 {
                for cp in 0..2 {
                    let mut acc = ZERO;
                    for (k, bk) in beta.iter().enumerate() {
                        if *bk == ZERO {
                            continue;
                        }
                        let (b1, b2) = (k / 2, k % 2);
                        for (kp, bkp) in beta.iter().enumerate() {
                            if *bkp == ZERO {
                                continue;
                            }
                            let (b1p, b2p) = (kp / 2, kp % 2);
                            acc += bk.conj()
                                * bkp
                                * rho_ab[(2 * a + b1, 2 * ap + b1p)]
                                * rho_bc[(2 * b2 + c, 2 * b2p + cp)];
                        }
                    }
                    out[(2 * a + c, 2 * ap + cp)] = acc;
                }
            }
        }
    }
    out
}

pub fn swap_conditionals(rho_ab: &DensityMatrix, rho_bc: &DensityMatrix) -> Result<Vec<SwapOutcome>> {
    check_two_qubit(rho_ab, "rho_ab")?;
    check_two_qubit(rho_bc, "rho_bc")?;
    (0..4)
        .map(|idx| {
            let sigma = project(rho_ab.matrix(), rho_bc.matrix(), &bell_ket(idx)?);
            let probability = sigma.trace().re;
            let conditional_state = if probability > NULL_OUTCOME {
                Some(DensityMatrix::new(sigma.scale_real(1.0 / probability), vec![2, 2])?)
            } else {
                None
            };
            Ok(SwapOutcome {
                label: LABELS[idx],
                probability,
                conditional_state,
            })
        })
        .collect()
}

/// Probabilities and conditional entropies (bits) without building
/// validated states; `NaN` marks a null outcome.
pub fn conditional_entropies(rho_ab: &DensityMatrix, rho_bc: &DensityMatrix) -> Result<([f64; 4], [f64; 4])> {
    check_two_qubit(rho_ab, "rho_ab")?;
    check_two_qubit(rho_bc, "rho_bc")?;
    let mut probs = [0.0; 4];
    let mut ents = [f64::NAN; 4];
    for idx in 0..4 {
        let sigma = project(rho_ab.matrix(), rho_bc.matrix(), &bell_ket(idx)?);
        let p = sigma.trace().re;
        probs[idx] = p;
        if p > NULL_OUTCOME {
            let spec = eigvals_hermitian(&sigma.hermitian_part().scale_real(1.0 / p))?;
            ents[idx] = von_neumann_of_spectrum(&spec);
        }
    }
    Ok((probs, ents))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RetrievalReason {
    /// At least one input has entropy below 1 bit.
    InputNotInAc,
    /// Both inputs qualify but every conditional state keeps entropy ≥ 1.
    NoConditionalBelowBound,
    Retrieved,
}

impl fmt::Display for RetrievalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RetrievalReason::InputNotInAc => "input not in AC",
            RetrievalReason::NoConditionalBelowBound => "no conditional state below 1 bit",
            RetrievalReason::Retrieved => "retrieved",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RetrievalReport {
    pub input_entropies: [f64; 2],
    pub probabilities: [f64; 4],
    /// Entropy in bits of each conditional state; `NaN` for null outcomes.
    pub conditional_entropies: [f64; 4],
    /// Success restricted to a single outcome.
    pub per_outcome: [bool; 4],
    pub success: bool,
    pub reason: RetrievalReason,
}

impl RetrievalReport {
    pub fn min_conditional_entropy(&self) -> f64 {
        self.conditional_entropies
            .iter()
            .copied()
            .filter(|e| !e.is_nan())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Succeeds when both inputs have `S ≥ 1` and some conditional state has
/// `S < 1`.
pub fn retrieval_success(rho_ab: &DensityMatrix, rho_bc: &DensityMatrix) -> Result<(bool, RetrievalReport)> {
    let (probabilities, conditional_entropies) = conditional_entropies(rho_ab, rho_bc)?;
    let input_entropies = [
        von_neumann_of_spectrum(rho_ab.eigenvalues()),
        von_neumann_of_spectrum(rho_bc.eigenvalues()),
    ];
    let inputs_ok = input_entropies.iter().all(|&s| s >= 1.0 - THRESHOLD_GUARD);
    let mut per_outcome = [false; 4];
    for (flag, &s) in per_outcome.iter_mut().zip(&conditional_entropies) {
        *flag = inputs_ok && !s.is_nan() && s < 1.0 - THRESHOLD_GUARD;
    }
    let success = per_outcome.iter().any(|&f| f);
    let reason = if !inputs_ok {
        RetrievalReason::InputNotInAc
    } else if success {
        RetrievalReason::Retrieved
    } else {
        RetrievalReason::NoConditionalBelowBound
    };
    Ok((
        success,
        RetrievalReport {
            input_entropies,
            probabilities,
            conditional_entropies,
            per_outcome,
            success,
            reason,
        },
    ))
}

/// Input families for the swapping scans.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SwapFamily {
    /// Two depolarised Schmidt states `(θ₁,p₁)`, `(θ₂,p₂)`; `p₂` fixed,
    /// scan over `(p₁, θ₁, θ₂)`.
    GlobalDepolarizing { p2: f64 },
    /// Two doubly amplitude-damped maximally entangled states `(p₁,p₂)`,
    /// `(p₃,p₄)`; `p₄` fixed, scan over `(p₁, p₂, p₃)`.
    AmplitudeDamping { p4: f64 },
}

impl SwapFamily {
    pub const GLOBAL_DEPOLARIZING: &'static str = "global-depolarizing";
    pub const AMPLITUDE_DAMPING: &'static str = "amplitude-damping";

    /// Build a family from its name and fixed parameter. Phase damping is
    /// refused: its outputs never enter the AC class, so there is nothing
    /// to retrieve.
    pub fn from_name(name: &str, fixed: f64) -> Result<Self> {
        crate::states::check_closed("fixed", fixed, 0.0, 1.0, "[0, 1]")?;
        match name.to_ascii_lowercase().replace('_', "-").as_str() {
            Self::GLOBAL_DEPOLARIZING => Ok(SwapFamily::GlobalDepolarizing { p2: fixed }),
            Self::AMPLITUDE_DAMPING => Ok(SwapFamily::AmplitudeDamping { p4: fixed }),
            "phase-damping" => Err(Error::Unsupported(
                "phase-damping family refused: doubly phase-damped states never reach entropy 1, \
                 so the inputs are never in AC and swapping cannot retrieve anything"
                    .into(),
            )),
            other => Err(Error::Unsupported(format!(
                "unknown swap family {other:?} (expected global-depolarizing or amplitude-damping)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SwapFamily::GlobalDepolarizing { .. } => Self::GLOBAL_DEPOLARIZING,
            SwapFamily::AmplitudeDamping { .. } => Self::AMPLITUDE_DAMPING,
        }
    }

    pub fn axis_names(&self) -> [&'static str; 3] {
        match self {
            SwapFamily::GlobalDepolarizing { .. } => ["p1", "theta1", "theta2"],
            SwapFamily::AmplitudeDamping { .. } => ["p1", "p2", "p3"],
        }
    }

    /// Default axes with `n` points each: probabilities on `[0,1]`
    /// inclusive, angles at midpoints of `(0, π/2)`.
    pub fn axes(&self, n: usize) -> [Axis; 3] {
        let [a, b, c] = self.axis_names();
        match self {
            SwapFamily::GlobalDepolarizing { .. } => [
                Axis::linspace(a, 0.0, 1.0, n),
                Axis::midpoints(b, 0.0, FRAC_PI_2, n),
                Axis::midpoints(c, 0.0, FRAC_PI_2, n),
            ],
            SwapFamily::AmplitudeDamping { .. } => [
                Axis::linspace(a, 0.0, 1.0, n),
                Axis::linspace(b, 0.0, 1.0, n),
                Axis::linspace(c, 0.0, 1.0, n),
            ],
        }
    }

    pub fn inputs(&self, x: f64, y: f64, z: f64) -> Result<(DensityMatrix, DensityMatrix)> {
        match *self {
            SwapFamily::GlobalDepolarizing { p2 } => Ok((depolarized_schmidt(y, x)?, depolarized_schmidt(z, p2)?)),
            SwapFamily::AmplitudeDamping { p4 } => Ok((
                damped_schmidt(ChannelKind::AmplitudeDamping, FRAC_PI_4, x, y)?,
                damped_schmidt(ChannelKind::AmplitudeDamping, FRAC_PI_4, z, p4)?,
            )),
        }
    }
}

impl FromStr for SwapFamily {
    type Err = Error;

    /// Parses `name` or `name:value` where value is the fixed parameter;
    /// bare names get the fixed parameter of the reference scans.
    fn from_str(s: &str) -> Result<Self> {
        let (name, fixed) = match s.split_once(':') {
            Some((n, v)) => (
                n,
                v.trim().parse::<f64>().map_err(|_| Error::Unsupported(format!("bad fixed parameter {v:?}")))?,
            ),
            None => (s, f64::NAN),
        };
        let fixed = if fixed.is_nan() { default_fixed(name) } else { fixed };
        Self::from_name(name, fixed)
    }
}

fn default_fixed(name: &str) -> f64 {
    if name.contains("amplitude") {
        REFERENCE_P4
    } else {
        REFERENCE_P2
    }
}

/// Fixed second-copy weight used for the depolarised reference scan.
pub const REFERENCE_P2: f64 = 0.705882;
/// Fixed damping of the last qubit used for the amplitude-damping scan.
pub const REFERENCE_P4: f64 = 0.714286;

/// Evaluate the retrieval report over the family's 3-D grid.
pub fn scan_family(family: SwapFamily, axes: [Axis; 3]) -> Result<SweepGrid<RetrievalReport>> {
    let [a, b, c] = axes;
    let grid = scan_3d(
        |x, y, z| family.inputs(x, y, z).and_then(|(ab, bc)| retrieval_success(&ab, &bc).map(|r| r.1)),
        a,
        b,
        c,
    );
    grid.try_map(|r| r)
}

/// Count of grid points succeeding through each outcome, and through any.
pub fn success_counts(grid: &SweepGrid<RetrievalReport>) -> ([usize; 4], usize) {
    let mut per = [0usize; 4];
    let mut any = 0;
    for r in grid.values() {
        for (count, &flag) in per.iter_mut().zip(&r.per_outcome) {
            *count += flag as usize;
        }
        any += r.success as usize;
    }
    (per, any)
}
