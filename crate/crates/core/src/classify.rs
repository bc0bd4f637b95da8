//! Spectral membership tests for the absolute classes, each returned with
//! the scalar it was decided on.

use crate::bloch::{BlochBipartite, BlochTripartite, Pair};
use crate::entropy::{check_alpha, power_sum, von_neumann_of_spectrum};
use crate::error::{Error, Result};
use crate::states::DensityMatrix;
use crate::tolerances::{NORMALIZATION, THRESHOLD_GUARD};

/// Outcome of one membership test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verdict {
    pub member: bool,
    pub witness: f64,
    pub threshold: f64,
}

impl Verdict {
    fn at_most(witness: f64, threshold: f64) -> Self {
        Self {
            member: witness <= threshold + THRESHOLD_GUARD,
            witness,
            threshold,
        }
    }

    fn at_least(witness: f64, threshold: f64) -> Self {
        Self {
            member: witness >= threshold - THRESHOLD_GUARD,
            witness,
            threshold,
        }
    }

    /// Signed distance to the threshold, positive inside the class.
    pub fn margin(&self, sense_at_most: bool) -> f64 {
        if sense_at_most {
            self.threshold - self.witness
        } else {
            self.witness - self.threshold
        }
    }
}

/// `λ_max ≤ 1/d`.
pub fn is_afef(rho: &DensityMatrix) -> Result<Verdict> {
    let d = rho.bipartite_local_dim()? as f64;
    Ok(Verdict::at_most(rho.max_eigenvalue(), 1.0 / d))
}

/// `S(ρ) ≥ log₂ d`.
pub fn is_acvenn(rho: &DensityMatrix) -> Result<Verdict> {
    let d = rho.bipartite_local_dim()? as f64;
    Ok(Verdict::at_least(von_neumann_of_spectrum(rho.eigenvalues()), d.log2()))
}

/// `Tr ρ^α ≥ d^{1−α}` for α < 1 and `≤` for α > 1.
pub fn is_acrenn(rho: &DensityMatrix, alpha: f64) -> Result<Verdict> {
    check_alpha(alpha)?;
    let d = rho.bipartite_local_dim()? as f64;
    Ok(acrenn_of_spectrum(rho.eigenvalues(), d, alpha))
}

pub(crate) fn acrenn_of_spectrum(spectrum: &[f64], d: f64, alpha: f64) -> Verdict {
    let witness = power_sum(spectrum, alpha);
    let threshold = d.powf(1.0 - alpha);
    if alpha < 1.0 {
        Verdict::at_least(witness, threshold)
    } else {
        Verdict::at_most(witness, threshold)
    }
}

/// `Tr ρ² ≤ 1/d`.
pub fn is_acre2nn(rho: &DensityMatrix) -> Result<Verdict> {
    let d = rho.bipartite_local_dim()? as f64;
    Ok(Verdict::at_most(rho.purity(), 1.0 / d))
}

/// `‖T‖² ≤ (d²(d−1) − 2d(‖a‖²+‖b‖²))/4`.
pub fn acre2nn_bloch(bb: &BlochBipartite) -> Verdict {
    let d = bb.d as f64;
    let threshold = (d * d * (d - 1.0) - 2.0 * d * (bb.a_norm_sq() + bb.b_norm_sq())) / 4.0;
    Verdict::at_most(bb.t_norm_sq(), threshold)
}

/// `‖T_xy‖² ≤ (4(d−1) − 2md)/d²` with `m = ‖T_x‖² + ‖T_y‖²`.
pub fn marginal_acre2nn(bt: &BlochTripartite, pair: Pair) -> Verdict {
    let d = bt.d as f64;
    let (x, y, xy) = bt.pair_data(pair);
    let m: f64 = x.iter().chain(y).map(|v| v * v).sum();
    let threshold = (4.0 * (d - 1.0) - 2.0 * m * d) / (d * d);
    Verdict::at_most(xy.frobenius_sq(), threshold)
}

/// `r ⪰ s`: every prefix sum of descending `r` dominates that of `s`.
pub fn majorizes(r: &[f64], s: &[f64]) -> Result<bool> {
    if r.len() != s.len() {
        return Err(Error::DimensionMismatch(format!(
            "majorization needs equal lengths, got {} and {}",
            r.len(),
            s.len()
        )));
    }
    let (sr, ss): (f64, f64) = (r.iter().sum(), s.iter().sum());
    if (sr - ss).abs() > NORMALIZATION {
        return Err(Error::SumMismatch(sr, ss));
    }
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let (r, s) = (sorted(r), sorted(s));
    let (mut pr, mut ps) = (0.0, 0.0);
    for (a, b) in r.iter().zip(&s) {
        pr += a;
        ps += b;
        if pr < ps - NORMALIZATION {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub local_dim: usize,
    pub afef: Verdict,
    pub acvenn: Verdict,
    pub acrenn: Vec<(f64, Verdict)>,
    pub acre2nn: Verdict,
}

pub fn classify(rho: &DensityMatrix, alphas: &[f64]) -> Result<ClassificationReport> {
    let local_dim = rho.bipartite_local_dim()?;
    let acrenn = alphas
        .iter()
        .map(|&a| is_acrenn(rho, a).map(|v| (a, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassificationReport {
        local_dim,
        afef: is_afef(rho)?,
        acvenn: is_acvenn(rho)?,
        acrenn,
        acre2nn: is_acre2nn(rho)?,
    })
}
