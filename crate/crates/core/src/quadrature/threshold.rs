use serde::Serialize;

use super::fit::{bootstrap_slopes, classify, quantile, std_dev, wls, Verdict};
use super::shells::LevelShellProfile;
use super::ser_inf;
use crate::error::{LabError, Result};

/// Slope band around zero that separates finite from divergent.
pub const MARGIN: f64 = 0.1;
/// Estimated thresholds above this are reported as infinite.
pub const P_MAX: f64 = 64.0;

#[derive(Debug, Clone, Serialize)]
pub struct PVerdict {
    pub p: f64,
    /// Shell-mass slope σ(p) = p·s − γ̂.
    pub sigma: f64,
    pub sigma_q05: f64,
    pub sigma_q95: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdVerdict {
    pub gamma_hat: f64,
    /// Bootstrap standard error of γ̂.
    pub stderr: f64,
    #[serde(serialize_with = "ser_inf")]
    pub p_star_hat: f64,
    #[serde(serialize_with = "ser_inf")]
    pub p_star_stderr: f64,
    pub exponent: f64,
    pub r2: f64,
    pub shells_used: usize,
    pub verdicts: Vec<PVerdict>,
}

impl ThresholdVerdict {
    pub fn verdict_at(&self, p: f64) -> Option<Verdict> {
        self.verdicts.iter().find(|v| (v.p - p).abs() < 1e-12).map(|v| v.verdict)
    }
}

/// Fits log₂ vol_k on k and classifies the requested exponents.
pub fn estimate_threshold(profile: &LevelShellProfile, p_grid: &[f64], seed: u64) -> Result<ThresholdVerdict> {
    let idx = profile.usable();
    if idx.len() < 6 {
        return Err(LabError::InsufficientShells(idx.len()));
    }
    let x: Vec<f64> = idx.iter().map(|&i| profile.ks[i] as f64).collect();
    let y: Vec<f64> = idx.iter().map(|&i| profile.log2_vol[i]).collect();
    let se: Vec<f64> = idx.iter().map(|&i| profile.log2_vol_se[i].max(1e-9)).collect();
    let w: Vec<f64> = se.iter().map(|s| 1.0 / (s * s)).collect();
    let fit = wls(&x, &y, &w);
    let gamma_hat = -fit.slope;
    let boot: Vec<f64> = bootstrap_slopes(&x, &y, &se, 200, seed).into_iter().map(|b| -b).collect();
    let stderr = std_dev(&boot);
    let s = profile.exponent;
    let (p_star_hat, p_star_stderr) = if s > 0.0 && gamma_hat / s <= P_MAX {
        (gamma_hat / s, stderr / s)
    } else {
        (f64::INFINITY, f64::INFINITY)
    };
    let verdicts = p_grid
        .iter()
        .map(|&p| {
            let sig = p * s - gamma_hat;
            let sb: Vec<f64> = boot.iter().map(|g| p * s - g).collect();
            PVerdict {
                p,
                sigma: sig,
                sigma_q05: quantile(&sb, 0.05),
                sigma_q95: quantile(&sb, 0.95),
                verdict: classify(sig, &sb, MARGIN),
            }
        })
        .collect();
    Ok(ThresholdVerdict {
        gamma_hat,
        stderr,
        p_star_hat,
        p_star_stderr,
        exponent: s,
        r2: fit.r2,
        shells_used: idx.len(),
        verdicts,
    })
}
