#![allow(dead_code)]

use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Exp1;

use absreg::linalg::haar_unitary_with;
use absreg::states::{weyl_diagonal, DensityMatrix};

/// Print one verdict line and fail the test on a FAIL.
///
/// Writes through the stdout handle rather than `println!` so the line is
/// shown for passing tests too (the test harness only captures the macros).
pub fn report(criterion: &str, ok: bool, detail: impl AsRef<str>) {
    let status = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "[acceptance] {status} {criterion}: {}", detail.as_ref()).unwrap();
    out.flush().unwrap();
    assert!(ok, "{criterion}: {}", detail.as_ref());
}

/// Probability vector `eᵢ^k / Σ eⱼ^k` with `eᵢ ~ Exp(1)`; `k = 0` gives the
/// uniform distribution, larger `k` concentrates the weight.
pub fn random_probabilities<R: Rng>(n: usize, sharpness: f64, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1).powf(sharpness)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|v| v / total).collect()
}

/// Random spectrum with random sharpness, rotated by a Haar unitary.
pub fn random_state<R: Rng>(dims: Vec<usize>, rng: &mut R) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let sharpness = rng.random_range(0.0..4.0);
    let probs = random_probabilities(n, sharpness, rng);
    let u = haar_unitary_with(n, rng);
    DensityMatrix::diagonal(&probs, dims).unwrap().conjugate_by(&u).unwrap()
}

pub fn random_weyl<R: Rng>(d: usize, rng: &mut R) -> DensityMatrix {
    let sharpness = rng.random_range(0.0..4.0);
    weyl_diagonal(d, &random_probabilities(d * d, sharpness, rng)).unwrap()
}

/// `Σⱼ wⱼ Pⱼ r` for random permutations `Pⱼ` and random convex weights;
/// the result is majorised by `r`.
pub fn birkhoff_mix<R: Rng>(r: &[f64], rng: &mut R) -> Vec<f64> {
    let terms = rng.random_range(1..6);
    let weights = random_probabilities(terms, 1.0, rng);
    let mut out = vec![0.0; r.len()];
    for w in weights {
        let mut perm: Vec<usize> = (0..r.len()).collect();
        perm.shuffle(rng);
        for (slot, &i) in out.iter_mut().zip(&perm) {
            *slot += w * r[i];
        }
    }
    out
}

pub fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
