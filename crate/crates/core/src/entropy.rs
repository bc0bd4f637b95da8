//! Entropy functionals on density matrices, all in bits unless a series
//! estimate is explicitly requested in natural units.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg;
use crate::states::DensityMatrix;
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EntropyKind {
    VonNeumann,
    Renyi(f64),
    ConditionalVonNeumann,
    ConditionalRenyi(f64),
    SeriesEstimate(usize),
}

impl fmt::Display for EntropyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntropyKind::VonNeumann => write!(f, "von_neumann"),
            EntropyKind::Renyi(a) => write!(f, "renyi({a})"),
            EntropyKind::ConditionalVonNeumann => write!(f, "conditional_vn"),
            EntropyKind::ConditionalRenyi(a) => write!(f, "conditional_renyi({a})"),
            EntropyKind::SeriesEstimate(n) => write!(f, "series_estimate({n})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyValue {
    pub value: f64,
    pub kind: EntropyKind,
}

fn clamp(lambda: f64) -> f64 {
    if (tolerances::PSD_FLOOR..0.0).contains(&lambda) {
        0.0
    } else {
        lambda
    }
}

/// `−Σ λ log₂ λ` with `0·log 0 = 0`.
pub fn von_neumann_of_spectrum(spectrum: &[f64]) -> f64 {
    spectrum
        .iter()
        .map(|&l| clamp(l))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha != 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::AlphaOutOfDomain(alpha))
    }
}

/// `Σ λ^α` over the strictly positive part of the spectrum.
pub fn power_sum(spectrum: &[f64], alpha: f64) -> f64 {
    spectrum
        .iter()
        .map(|&l| clamp(l))
        .filter(|&l| l > 0.0)
        .map(|l| l.powf(alpha))
        .sum()
}

pub fn renyi_of_spectrum(spectrum: &[f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(power_sum(spectrum, alpha).log2() / (1.0 - alpha))
}

pub fn von_neumann(rho: &DensityMatrix) -> EntropyValue {
    EntropyValue {
        value: von_neumann_of_spectrum(rho.eigenvalues()),
        kind: EntropyKind::VonNeumann,
    }
}

fn marginal_b(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dims().len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "conditional entropy needs a bipartite state, got dims {:?}",
            rho.dims()
        )));
    }
    rho.reduce(&[1])
}

/// `S(AB) − S(B)`.
pub fn conditional_von_neumann(rho: &DensityMatrix) -> Result<EntropyValue> {
    let b = marginal_b(rho)?;
    Ok(EntropyValue {
        value: von_neumann(rho).value - von_neumann(&b).value,
        kind: EntropyKind::ConditionalVonNeumann,
    })
}

/// `log₂(Tr ρ^α)/(1−α)`.
pub fn renyi(rho: &DensityMatrix, alpha: f64) -> Result<EntropyValue> {
    Ok(EntropyValue {
        value: renyi_of_spectrum(rho.eigenvalues(), alpha)?,
        kind: EntropyKind::Renyi(alpha),
    })
}

/// `S_α(AB) − S_α(B)`.
pub fn conditional_renyi(rho: &DensityMatrix, alpha: f64) -> Result<EntropyValue> {
    check_alpha(alpha)?;
    let b = marginal_b(rho)?;
    Ok(EntropyValue {
        value: renyi(rho, alpha)?.value - renyi(&b, alpha)?.value,
        kind: EntropyKind::ConditionalRenyi(alpha),
    })
}

/// Coefficient pattern of `g(k) = Σₘ cₖₘ (−1)ᵐ R_{m+1}` in the trace-power series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SeriesCoefficients {
    /// `cₖₘ = C(k, m)`: the Taylor expansion of `−ln x` about 1, which
    /// converges to the von Neumann entropy.
    #[default]
    Binomial,
    /// `cₖ₀ = cₖₖ = 1` and `cₖₘ = k` in between, the truncation tabulated
    /// for the depolarised isotropic family (terms 1–3 agree with the
    /// binomial pattern; from k = 4 on they differ).
    Tabulated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SeriesUnit {
    /// Raw series sum.
    Nats,
    /// Series sum divided by `ln 2`.
    #[default]
    Bits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesOptions {
    pub terms: usize,
    pub coefficients: SeriesCoefficients,
    pub unit: SeriesUnit,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            terms: 10,
            coefficients: SeriesCoefficients::Binomial,
            unit: SeriesUnit::Bits,
        }
    }
}

impl SeriesOptions {
    /// The ten-term truncation used for the isotropic tables.
    pub fn tabulated() -> Self {
        Self {
            terms: 10,
            coefficients: SeriesCoefficients::Tabulated,
            unit: SeriesUnit::Nats,
        }
    }
}

fn coefficient(pattern: SeriesCoefficients, k: usize, m: usize) -> f64 {
    match pattern {
        SeriesCoefficients::Binomial => binomial(k, m),
        SeriesCoefficients::Tabulated if m == 0 || m == k => 1.0,
        SeriesCoefficients::Tabulated => k as f64,
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Σ_{k=1}^{terms} g(k)/k` from the trace powers `R_n = Σ λⁿ`.
pub fn series_of_spectrum(spectrum: &[f64], options: SeriesOptions) -> f64 {
    assert!(options.terms >= 1, "series needs at least one term");
    let clamped: Vec<f64> = spectrum.iter().map(|&l| clamp(l).max(0.0)).collect();
    let total = match options.coefficients {
        // g(k) = Tr ρ(1−ρ)^k; summed per eigenvalue because the alternating
        // binomial form cancels catastrophically once k passes ~40
        SeriesCoefficients::Binomial => clamped
            .iter()
            .map(|&l| {
                let mut factor = 1.0;
                (1..=options.terms)
                    .map(|k| {
                        factor *= 1.0 - l;
                        l * factor / k as f64
                    })
                    .sum::<f64>()
            })
            .sum(),
        pattern => trace_power_series(&clamped, pattern, options.terms),
    };
    match options.unit {
        SeriesUnit::Nats => total,
        SeriesUnit::Bits => total / std::f64::consts::LN_2,
    }
}

fn trace_power_series(spectrum: &[f64], pattern: SeriesCoefficients, terms: usize) -> f64 {
    // powers[n] = R_n
    let mut powers = vec![0.0; terms + 2];
    let mut current = spectrum.to_vec();
    for slot in powers.iter_mut().skip(1) {
        *slot = current.iter().sum();
        for (c, l) in current.iter_mut().zip(spectrum) {
            *c *= l;
        }
    }
    (1..=terms)
        .map(|k| {
            let g: f64 = (0..=k)
                .map(|m| {
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    sign * coefficient(pattern, k, m) * powers[m + 1]
                })
                .sum();
            g / k as f64
        })
        .sum()
}

/// Binomial trace-power series in bits with `terms` terms.
pub fn series_estimate(rho: &DensityMatrix, terms: usize) -> EntropyValue {
    series_estimate_with(
        rho,
        SeriesOptions {
            terms,
            ..SeriesOptions::default()
        },
    )
}

pub fn series_estimate_with(rho: &DensityMatrix, options: SeriesOptions) -> EntropyValue {
    debug_assert!((linalg::trace_power(rho, 1) - 1.0).abs() < 1e-9);
    EntropyValue {
        value: series_of_spectrum(rho.eigenvalues(), options),
        kind: EntropyKind::SeriesEstimate(options.terms),
    }
}
