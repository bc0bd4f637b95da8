//! Single-qubit Kraus channels, their one- and two-sided action on
//! bipartite states, and the global depolarizing map.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::states::{self, check_closed, DensityMatrix};
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    PhaseFlip,
    BitFlip,
    PhaseDamping,
    AmplitudeDamping,
    Depolarizing,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 5] = [
        ChannelKind::PhaseFlip,
        ChannelKind::BitFlip,
        ChannelKind::PhaseDamping,
        ChannelKind::AmplitudeDamping,
        ChannelKind::Depolarizing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::PhaseFlip => "phase-flip",
            ChannelKind::BitFlip => "bit-flip",
            ChannelKind::PhaseDamping => "phase-damping",
            ChannelKind::AmplitudeDamping => "amplitude-damping",
            ChannelKind::Depolarizing => "depolarizing",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        ChannelKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| {
                let names: Vec<_> = ChannelKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown channel '{s}', expected one of {}", names.join(", "))
            })
    }
}

/// A qubit channel in operator-sum form with a verified completeness relation.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    kind: ChannelKind,
    parameter: f64,
    kraus_ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn parameter(&self) -> f64 {
        self.parameter
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    pub fn dim(&self) -> usize {
        self.kraus_ops[0].dim()
    }

    /// Largest entrywise `|Σ K†K − I|`.
    pub fn completeness_defect(&self) -> f64 {
        let sum = self
            .kraus_ops
            .iter()
            .fold(ComplexMatrix::zeros(self.dim()), |acc, k| &acc + &(&k.dagger() * k));
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }
}

/// Kraus set for a named channel.
///
/// The flip channels use `K₀ = √(1−p)·I`, `K₁ = √p·σ`, the normalisation
/// forced by `Σ K†K = I`.
pub fn make_channel(kind: ChannelKind, p: f64) -> Result<KrausChannel> {
    check_closed("p", p, 0.0, 1.0, "[0, 1]")?;
    let id = ComplexMatrix::identity(2);
    let keep = (1.0 - p).sqrt();
    let kraus_ops = match kind {
        ChannelKind::PhaseFlip => vec![id.scale_real(keep), linalg::pauli_z().scale_real(p.sqrt())],
        ChannelKind::BitFlip => vec![id.scale_real(keep), linalg::pauli_x().scale_real(p.sqrt())],
        ChannelKind::PhaseDamping => vec![
            ComplexMatrix::from_diagonal(&[1.0, keep]),
            ComplexMatrix::from_diagonal(&[0.0, p.sqrt()]),
        ],
        ChannelKind::AmplitudeDamping => vec![
            ComplexMatrix::from_diagonal(&[1.0, keep]),
            ComplexMatrix::from_real(2, &[0.0, p.sqrt(), 0.0, 0.0])?,
        ],
        ChannelKind::Depolarizing => {
            let w = (p / 3.0).sqrt();
            vec![
                id.scale_real(keep),
                linalg::pauli_x().scale_real(w),
                linalg::pauli_y().scale_real(w),
                linalg::pauli_z().scale_real(w),
            ]
        }
    };
    let channel = KrausChannel {
        kind,
        parameter: p,
        kraus_ops,
    };
    let defect = channel.completeness_defect();
    if defect > tolerances::KRAUS_COMPLETENESS {
        return Err(Error::CompletenessViolation(defect));
    }
    Ok(channel)
}

fn kraus_sum<'a>(ops: impl Iterator<Item = ComplexMatrix> + 'a, rho: &ComplexMatrix) -> ComplexMatrix {
    ops.fold(ComplexMatrix::zeros(rho.dim()), |acc, k| &acc + &rho.conjugate_by(&k))
}

fn finish(m: ComplexMatrix, dims: &[usize]) -> Result<DensityMatrix> {
    DensityMatrix::new(m.hermitian_part(), dims.to_vec())
}

/// `Σ Kᵢ ρ Kᵢ†` on a state whose full dimension matches the channel.
pub fn apply(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if ch.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel of dim {} on state of dim {}",
            ch.dim(),
            rho.dim()
        )));
    }
    finish(kraus_sum(ch.kraus_ops.iter().cloned(), rho.matrix()), rho.dims())
}

/// Applies `ch` to one subsystem of a multipartite state.
pub fn apply_local(ch: &KrausChannel, rho: &DensityMatrix, subsystem: usize) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if subsystem >= dims.len() || dims[subsystem] != ch.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel of dim {} on subsystem {subsystem} of dims {dims:?}",
            ch.dim()
        )));
    }
    let ops = ch.kraus_ops.iter().map(|k| {
        let factors: Vec<ComplexMatrix> = dims
            .iter()
            .enumerate()
            .map(|(s, &d)| if s == subsystem { k.clone() } else { ComplexMatrix::identity(d) })
            .collect();
        linalg::kron_all(&factors)
    });
    finish(kraus_sum(ops, rho.matrix()), dims)
}

/// `Σᵢⱼ (Kᵢ ⊗ Lⱼ) ρ (Kᵢ ⊗ Lⱼ)†` with `ch_a` on qubit A and `ch_b` on qubit B.
pub fn double_apply(ch_a: &KrausChannel, ch_b: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dims() != [ch_a.dim(), ch_b.dim()] {
        return Err(Error::DimensionMismatch(format!(
            "double channel needs dims [{}, {}], got {:?}",
            ch_a.dim(),
            ch_b.dim(),
            rho.dims()
        )));
    }
    let ops = ch_a
        .kraus_ops
        .iter()
        .flat_map(|k| ch_b.kraus_ops.iter().map(move |l| linalg::kron(k, l)));
    finish(kraus_sum(ops, rho.matrix()), rho.dims())
}

/// Whether a qubit channel acts on one side (A) or both sides of a two-qubit state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Sidedness {
    Single,
    #[default]
    Double,
}

impl fmt::Display for Sidedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sidedness::Single => "single",
            Sidedness::Double => "double",
        })
    }
}

/// Applies `kind` with parameter `p` to qubit A only, or to both qubits
/// with equal parameters.
pub fn apply_sided(kind: ChannelKind, p: f64, rho: &DensityMatrix, sidedness: Sidedness) -> Result<DensityMatrix> {
    let ch = make_channel(kind, p)?;
    match sidedness {
        Sidedness::Single => apply_local(&ch, rho, 0),
        Sidedness::Double => double_apply(&ch, &ch, rho),
    }
}

/// `(1−p)ρ + p·I/D` for a state of total dimension `D`.
pub fn global_depolarize(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    check_closed("p", p, 0.0, 1.0, "[0, 1]")?;
    let n = rho.dim();
    let m = &rho.matrix().scale_real(1.0 - p) + &ComplexMatrix::identity(n).scale_real(p / n as f64);
    DensityMatrix::new(m, rho.dims().to_vec())
}

/// Schmidt state `cos θ|00⟩ + sin θ|11⟩` sent through `kind` on both
/// qubits with parameters `p1` (A) and `p2` (B).
pub fn damped_schmidt(kind: ChannelKind, theta: f64, p1: f64, p2: f64) -> Result<DensityMatrix> {
    double_apply(&make_channel(kind, p1)?, &make_channel(kind, p2)?, &states::pure_schmidt(theta))
}

/// `σₓ` on qubit B; relabels `|a b⟩ → |a, 1−b⟩`.
pub fn flip_second_qubit(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let u = linalg::kron(&ComplexMatrix::identity(2), &linalg::pauli_x());
    rho.conjugate_by(&u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_state, pure_schmidt};
    use std::f64::consts::{FRAC_PI_4, PI};

    fn plus_state() -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap(), vec![2]).unwrap()
    }

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    fn assert_close_spectrum(got: &[f64], want: Vec<f64>, tol: f64) {
        let want = sorted(want);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= tol, "got {got:?}, want {want:?}");
        }
    }

    #[test]
    fn every_channel_is_complete() {
        for kind in ChannelKind::ALL {
            for k in 0..=10 {
                let ch = make_channel(kind, k as f64 / 10.0).unwrap();
                assert!(ch.completeness_defect() <= 1e-12, "{kind} at p={}", k as f64 / 10.0);
            }
        }
        assert_eq!(make_channel(ChannelKind::Depolarizing, 0.4).unwrap().kraus_ops().len(), 4);
    }

    #[test]
    fn rejects_out_of_range_parameter() {
        assert!(matches!(
            make_channel(ChannelKind::BitFlip, 1.2),
            Err(Error::OutOfRange { name: "p", .. })
        ));
        assert!(make_channel(ChannelKind::BitFlip, -0.1).is_err());
    }

    #[test]
    fn names_round_trip() {
        for kind in ChannelKind::ALL {
            assert_eq!(kind.name().parse::<ChannelKind>().unwrap(), kind);
        }
        assert_eq!("phase_damping".parse::<ChannelKind>().unwrap(), ChannelKind::PhaseDamping);
        assert!("erasure".parse::<ChannelKind>().is_err());
    }

    #[test]
    fn identity_parameter_leaves_state_unchanged() {
        let rho = plus_state();
        for kind in [ChannelKind::PhaseFlip, ChannelKind::BitFlip, ChannelKind::PhaseDamping, ChannelKind::AmplitudeDamping, ChannelKind::Depolarizing] {
            let out = apply(&make_channel(kind, 0.0).unwrap(), &rho).unwrap();
            assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        }
    }

    #[test]
    fn phase_flip_half_dephases_plus() {
        let out = apply(&make_channel(ChannelKind::PhaseFlip, 0.5).unwrap(), &plus_state()).unwrap();
        // oracle: 0.5·|+⟩⟨+| + 0.5·Z|+⟩⟨+|Z = I/2
        assert!(out.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn amplitude_damping_full_decay() {
        let excited = DensityMatrix::diagonal(&[0.0, 1.0], vec![2]).unwrap();
        let out = apply(&make_channel(ChannelKind::AmplitudeDamping, 1.0).unwrap(), &excited).unwrap();
        assert!((out.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trace_preserved_on_random_inputs() {
        for seed in 0..10 {
            let u = linalg::haar_unitary(4, seed);
            let rho = DensityMatrix::diagonal(&[0.4, 0.3, 0.2, 0.1], vec![2, 2])
                .unwrap()
                .conjugate_by(&u)
                .unwrap();
            for kind in ChannelKind::ALL {
                let p = 0.1 * (seed as f64 % 9.0) + 0.05;
                for side in [Sidedness::Single, Sidedness::Double] {
                    let out = apply_sided(kind, p, &rho, side).unwrap();
                    assert!((out.matrix().trace().re - 1.0).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn apply_dimension_mismatch() {
        let ch = make_channel(ChannelKind::BitFlip, 0.2).unwrap();
        assert!(matches!(apply(&ch, &bell_state(0).unwrap()), Err(Error::DimensionMismatch(_))));
        let tri = DensityMatrix::maximally_mixed(vec![2, 2, 2]);
        assert!(matches!(double_apply(&ch, &ch, &tri), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn zero_parameters_leave_bipartite_unchanged() {
        let rho = pure_schmidt(0.3);
        for kind in ChannelKind::ALL {
            let out = damped_schmidt(kind, 0.3, 0.0, 0.0).unwrap();
            assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        }
    }

    #[test]
    fn double_amplitude_damping_matches_printed_matrix() {
        for &(theta, p1, p2) in &[(0.3, 0.2, 0.7), (FRAC_PI_4, 0.5, 0.5), (1.1, 0.9, 0.05)] {
            let got = damped_schmidt(ChannelKind::AmplitudeDamping, theta, p1, p2).unwrap();
            let (s, c) = f64::sin_cos(theta);
            let corner = (1.0f64 - p1).sqrt() * (1.0f64 - p2).sqrt() * c * s;
            #[rustfmt::skip]
            let printed = ComplexMatrix::from_real(4, &[
                c * c + p1 * p2 * s * s, 0.0, 0.0, corner,
                0.0, -p1 * (-1.0 + p2) * s * s, 0.0, 0.0,
                0.0, 0.0, -p2 * (-1.0 + p1) * s * s, 0.0,
                corner, 0.0, 0.0, (-1.0 + p1) * (-1.0 + p2) * s * s,
            ]).unwrap();
            assert!(got.matrix().max_abs_diff(&printed) < 1e-15);
        }
    }

    #[test]
    fn double_phase_damping_matches_printed_matrix_after_relabel() {
        for &(theta, p) in &[(0.3, 0.2), (FRAC_PI_4, 1.0), (1.1, 0.6)] {
            let got = damped_schmidt(ChannelKind::PhaseDamping, theta, p, p).unwrap();
            let (s, c) = f64::sin_cos(theta);
            let off = -(-1.0 + p) * c * s;
            #[rustfmt::skip]
            let printed = ComplexMatrix::from_real(4, &[
                0.0, 0.0, 0.0, 0.0,
                0.0, c * c, off, 0.0,
                0.0, off, s * s, 0.0,
                0.0, 0.0, 0.0, 0.0,
            ]).unwrap();
            let relabelled = flip_second_qubit(&got).unwrap();
            assert!(relabelled.matrix().max_abs_diff(&printed) < 1e-15);
        }
    }

    #[test]
    fn global_depolarizing_examples() {
        let rho = pure_schmidt(0.4);
        let full = global_depolarize(&rho, 1.0).unwrap();
        assert!(full.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-15);
        for &(theta, p) in &[(0.2, 0.3), (FRAC_PI_4, 0.747614), (1.3, 0.9)] {
            let via_channel = global_depolarize(&pure_schmidt(theta), 1.0 - p).unwrap();
            let printed = states::depolarized_schmidt(theta, p).unwrap();
            assert!(via_channel.matrix().max_abs_diff(printed.matrix()) < 1e-15);
            let (s, c) = f64::sin_cos(theta);
            assert!((via_channel.matrix()[(0, 3)].re - p * c * s).abs() < 1e-15);
        }
        assert!(global_depolarize(&rho, 1.5).is_err());
    }

    #[test]
    fn global_depolarizing_keeps_isotropic_family() {
        for d in 2..=4 {
            for &(beta, lambda) in &[(0.8, 0.3), (-0.05, 0.5), (1.0, 0.9)] {
                let out = global_depolarize(&states::isotropic(d, beta).unwrap(), lambda).unwrap();
                let want = states::isotropic(d, (1.0 - lambda) * beta).unwrap();
                assert!(out.matrix().max_abs_diff(want.matrix()) < 1e-14);
            }
        }
    }

    #[test]
    fn depolarized_schmidt_spectrum_is_theta_independent() {
        for i in 1..10 {
            let theta = i as f64 * PI / 20.0;
            for j in 0..=10 {
                let p = j as f64 / 10.0;
                let rho = states::depolarized_schmidt(theta, p).unwrap();
                let q = (1.0 - p) / 4.0;
                assert_close_spectrum(rho.eigenvalues(), vec![(1.0 + 3.0 * p) / 4.0, q, q, q], 1e-10);
            }
        }
    }

    #[test]
    fn double_amplitude_damping_closed_form_spectrum() {
        for j in 0..=20 {
            let p = j as f64 / 20.0;
            let rho = damped_schmidt(ChannelKind::AmplitudeDamping, FRAC_PI_4, p, p).unwrap();
            let r = (1.0 + 2.0 * p * p - 2.0 * p).sqrt();
            let want = vec![
                0.5 * (1.0 + p * p - p + r),
                0.5 * (1.0 + p * p - p - r),
                0.5 * (p - p * p),
                0.5 * (p - p * p),
            ];
            assert_close_spectrum(rho.eigenvalues(), want, 1e-10);
        }
    }

    #[test]
    fn double_phase_damping_closed_form_spectrum() {
        for i in 0..=10 {
            let theta = i as f64 * PI / 20.0;
            let c4 = (4.0 * theta).cos();
            for j in 0..=10 {
                let p = j as f64 / 10.0;
                let rho = damped_schmidt(ChannelKind::PhaseDamping, theta, p, p).unwrap();
                let root = 2f64.sqrt() * (2.0 - 2.0 * p + p * p + 2.0 * p * c4 - p * p * c4).sqrt();
                let want = vec![0.0, 0.0, 0.25 * (2.0 - root), 0.25 * (2.0 + root)];
                assert_close_spectrum(rho.eigenvalues(), want, 1e-10);
            }
        }
    }
}
