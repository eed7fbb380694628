//! Weighted line fits, parametric bootstrap and the slope verdict rule.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope implied by the weights.
    pub slope_se: f64,
    pub r2: f64,
}

/// Weighted least squares y ≈ a + b x with weights `w`.
pub fn wls(x: &[f64], y: &[f64], w: &[f64]) -> LineFit {
    let sw: f64 = w.iter().sum();
    let mx = x.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let my = y.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let sxx: f64 = x.iter().zip(w).map(|(a, b)| b * (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).zip(w).map(|((a, c), b)| b * (a - mx) * (c - my)).sum();
    let syy: f64 = y.iter().zip(w).map(|(c, b)| b * (c - my) * (c - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    LineFit { slope, intercept, slope_se: (1.0 / sxx).sqrt(), r2 }
}

pub fn ols(x: &[f64], y: &[f64]) -> LineFit {
    let w = vec![1.0; x.len()];
    let mut f = wls(x, y, &w);
    // residual-based standard error for unweighted fits
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - f.intercept - f.slope * a).powi(2)).sum();
    f.slope_se = if n > 2.0 { (rss / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    f
}

/// Slopes refitted on `reps` parametric resamples y + se·N(0,1).
pub fn bootstrap_slopes(x: &[f64], y: &[f64], se: &[f64], reps: usize, seed: u64) -> Vec<f64> {
    let w: Vec<f64> = se.iter().map(|s| 1.0 / (s * s)).collect();
    let mut rng = stream_rng(seed, 0xB007);
    let mut yb = vec![0.0; y.len()];
    (0..reps)
        .map(|_| {
            for ((o, v), s) in yb.iter_mut().zip(y).zip(se) {
                let g: f64 = rng.sample(StandardNormal);
                *o = v + s * g;
            }
            wls(x, &yb, &w).slope
        })
        .collect()
}

/// Linear-interpolated sample quantile.
pub fn quantile(v: &[f64], q: f64) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if s.is_empty() {
        return f64::NAN;
    }
    let pos = q * (s.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    s[lo] + (s[hi] - s[lo]) * (pos - lo as f64)
}

pub fn std_dev(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Finite,
    Divergent,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Finite => "finite",
            Verdict::Divergent => "divergent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Classifies a shell-mass slope σ (log₂ mass per shell index).
///
/// Finite needs σ̂ < −margin with the bootstrap 95% quantile below 0.
/// Divergent needs σ̂ ≥ −margin with the bootstrap 5% quantile above −margin,
/// so a critical exponent (σ = 0, logarithmic divergence) reads divergent.
pub fn classify(sigma: f64, boot: &[f64], margin: f64) -> Verdict {
    if sigma < -margin && quantile(boot, 0.95) < 0.0 {
        Verdict::Finite
    } else if sigma >= -margin && quantile(boot, 0.05) > -margin {
        Verdict::Divergent
    } else {
        Verdict::Inconclusive
    }
}
