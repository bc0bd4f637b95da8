//! Numerical tolerances shared by the library and its tests.
//!
//! Every comparison against a threshold in this crate goes through one of
//! these constants, so a test asserting a boundary and the code deciding it
//! always agree on what "equal" means.

/// Maximum entrywise `|M - M†|` accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-10;

/// Maximum `|Tr ρ - 1|` accepted for a density matrix.
pub const UNIT_TRACE: f64 = 1e-10;

/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_FLOOR: f64 = -1e-9;

/// Entrywise tolerance for `V·diag(λ)·V† = M`.
pub const RECONSTRUCTION: f64 = 1e-8;

/// Jacobi sweeps stop once the off-diagonal Frobenius norm is below this
/// fraction of the full Frobenius norm.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-12;

/// Hard cap on Jacobi sweeps; quadratic convergence needs far fewer.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Guard band on every membership threshold (inclusive comparisons).
pub const THRESHOLD_GUARD: f64 = 1e-12;

/// `Σ K†K = I` tolerance for Kraus sets.
pub const KRAUS_COMPLETENESS: f64 = 1e-10;

/// Normalisation tolerance for state amplitudes and majorization sums.
pub const NORMALIZATION: f64 = 1e-10;

/// Outcomes with probability at or below this carry no conditional state.
pub const NULL_OUTCOME: f64 = 1e-12;

/// Default bisection width for boundary finding.
pub const BISECTION: f64 = 1e-7;

/// Agreement required between a computed endpoint and a tabulated one.
pub const TABLE_ENDPOINT: f64 = 1e-4;

/// Default number of coarse grid points when extracting intervals.
pub const INTERVAL_GRID_POINTS: usize = 2001;
