use rand::Rng;
use serde::Serialize;

use super::merge_all;
use crate::error::{LabError, Result};
use crate::quadrature::fit::{bootstrap_slopes, classify, wls, Verdict};
use crate::rng::{ball_volume, derive, par_chunks, uniform_in_ball, Moments};

const MARGIN: f64 = 0.1;

#[derive(Debug, Clone, Serialize)]
pub struct ModelIntegral {
    pub p: f64,
    pub n: usize,
    pub radius: f64,
    pub ks: Vec<i32>,
    pub shell_mass: Vec<f64>,
    pub shell_stderr: Vec<f64>,
    /// Fitted log₂ shell-mass slope per shell index.
    pub slope: f64,
    pub slope_stderr: f64,
    pub verdict: Verdict,
    /// Bulk plus shells plus geometric tail; infinite unless finite.
    pub estimate: f64,
}

/// ∫_{0<t₁<R, |t'|<R} (t₁ + |t₂| + t₃² + ⋯ + t_{2n}²)^{−p} dt with the t₁
/// integral done in closed form, the remaining 2n−1 variables by Monte Carlo
/// over dyadic shells of c = |t₂| + Σ t_i².
pub fn model_integral(p: f64, n: usize, radius: f64, budget: u64, seed: u64) -> Result<ModelIntegral> {
    if p <= 0.0 || n == 0 || radius <= 0.0 {
        return Err(LabError::Domain("model integral needs p > 0, n >= 1, R > 0".into()));
    }
    let g = move |cc: f64| -> f64 {
        if (p - 1.0).abs() < 1e-12 {
            ((cc + radius) / cc).ln()
        } else {
            (cc.powf(1.0 - p) - (cc + radius).powf(1.0 - p)) / (p - 1.0)
        }
    };
    let ks: Vec<i32> = (3..15).collect();
    let per = budget / (ks.len() as u64 + 1);
    let rest = 2 * n - 2;
    let mut masses = Vec::new();
    let mut errs = Vec::new();
    for &k in &ks {
        let l = 0.5f64.powi(k);
        let rr = l.sqrt();
        let vprop = 2.0 * l * ball_volume(rest, rr);
        let parts = par_chunks(derive(seed, 0x30de1, k as u64), 0, per, 8192, |rng, len| {
            let mut m = Moments::default();
            let mut y = vec![0.0; rest];
            for _ in 0..len {
                let t2: f64 = rng.random_range(-l..l);
                uniform_in_ball(rng, rest, rr, &mut y);
                let s2: f64 = y.iter().map(|v| v * v).sum();
                let cc = t2.abs() + s2;
                if cc >= l / 2.0 && cc < l && t2 * t2 + s2 < radius * radius {
                    m.push(g(cc));
                } else {
                    m.push(0.0);
                }
            }
            m
        });
        let m = merge_all(&parts);
        masses.push(vprop * m.mean());
        errs.push(vprop * m.stderr());
    }
    // bulk: c ≥ 2^{-k₀}
    let k0 = ks[0];
    let bulk_parts = par_chunks(derive(seed, 0xb01c, 0), 0, per, 8192, |rng, len| {
        let mut m = Moments::default();
        let mut y = vec![0.0; 2 * n - 1];
        for _ in 0..len {
            uniform_in_ball(rng, 2 * n - 1, radius, &mut y);
            let cc = y[0].abs() + y[1..].iter().map(|v| v * v).sum::<f64>();
            if cc >= 0.5f64.powi(k0) {
                m.push(g(cc));
            } else {
                m.push(0.0);
            }
        }
        m
    });
    let bulk = merge_all(&bulk_parts).mean() * ball_volume(2 * n - 1, radius);
    let (slope, se, verdict) = shell_verdict(&ks, &masses, &errs, seed)?;
    let estimate = if verdict == Verdict::Finite {
        let r = 2f64.powf(slope);
        bulk + masses.iter().sum::<f64>() + masses.last().unwrap() * r / (1.0 - r)
    } else {
        f64::INFINITY
    };
    Ok(ModelIntegral {
        p,
        n,
        radius,
        ks,
        shell_mass: masses,
        shell_stderr: errs,
        slope,
        slope_stderr: se,
        verdict,
        estimate,
    })
}

/// Fits log₂ mass on k and classifies the slope.
pub(crate) fn shell_verdict(ks: &[i32], masses: &[f64], errs: &[f64], seed: u64) -> Result<(f64, f64, Verdict)> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut s = Vec::new();
    for ((k, m), e) in ks.iter().zip(masses).zip(errs) {
        if *m > 0.0 {
            x.push(*k as f64);
            y.push(m.log2());
            s.push((e / m / std::f64::consts::LN_2).max(1e-6));
        }
    }
    if x.len() < 6 {
        return Err(LabError::InsufficientShells(x.len()));
    }
    let w: Vec<f64> = s.iter().map(|v| 1.0 / (v * v)).collect();
    let fit = wls(&x, &y, &w);
    let boot = bootstrap_slopes(&x, &y, &s, 200, seed);
    let se = crate::quadrature::fit::std_dev(&boot);
    Ok((fit.slope, se, classify(fit.slope, &boot, MARGIN)))
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialIntegral {
    pub n: usize,
    pub power: f64,
    pub ks: Vec<i32>,
    pub shell_mass: Vec<f64>,
    pub shell_stderr: Vec<f64>,
    /// Exact per-shell value ½·|S^{2n−1}|·log 2 at power = n, else NaN.
    pub expected_shell_mass: f64,
    /// max over shells of |mass/mean − 1|.
    pub flatness: f64,
    pub slope: f64,
    pub verdict: Verdict,
}

/// ∫ dt / |t|^{2·power} over the half-space patch {t₁ > 0, |t| < R} in ℝ^{2n},
/// shell by shell on |t| ∈ [2^{−k−1}, 2^{−k}).
pub fn radial_integral(n: usize, power: f64, ks: &[i32], budget: u64, seed: u64) -> Result<RadialIntegral> {
    let dim = 2 * n;
    let per = budget / ks.len() as u64;
    let mut masses = Vec::new();
    let mut errs = Vec::new();
    for &k in ks {
        let r = 0.5f64.powi(k);
        let parts = par_chunks(derive(seed, 0x7ad1, k as u64), 0, per, 8192, |rng, len| {
            let mut m = Moments::default();
            let mut x = vec![0.0; dim];
            for _ in 0..len {
                uniform_in_ball(rng, dim, r, &mut x);
                let r2: f64 = x.iter().map(|v| v * v).sum();
                if x[0] > 0.0 && r2 >= r * r / 4.0 {
                    m.push(r2.powf(-power));
                } else {
                    m.push(0.0);
                }
            }
            m
        });
        let m = merge_all(&parts);
        let v = ball_volume(dim, r);
        masses.push(v * m.mean());
        errs.push(v * m.stderr());
    }
    let mean = masses.iter().sum::<f64>() / masses.len() as f64;
    let flatness = masses.iter().map(|m| (m / mean - 1.0).abs()).fold(0.0, f64::max);
    let sphere = 2.0 * std::f64::consts::PI.powi(n as i32) / (1..n).map(|i| i as f64).product::<f64>();
    let expected = if (power - n as f64).abs() < 1e-12 { 0.5 * sphere * std::f64::consts::LN_2 } else { f64::NAN };
    let (slope, _, verdict) = shell_verdict(ks, &masses, &errs, seed)?;
    Ok(RadialIntegral {
        n,
        power,
        ks: ks.to_vec(),
        shell_mass: masses,
        shell_stderr: errs,
        expected_shell_mass: expected,
        flatness,
        slope,
        verdict,
    })
}

/// The critical radial integral ∫ dt/(Σ t_i²)^n over the half-space patch.
pub fn divergence_integral_2n(n: usize, budget: u64, seed: u64) -> Result<RadialIntegral> {
    let ks: Vec<i32> = (3..13).collect();
    radial_integral(n, n as f64, &ks, budget, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_model_verdicts() {
        assert_eq!(model_integral(1.0, 1, 1.0, 400_000, 1).unwrap().verdict, Verdict::Finite);
        assert_eq!(model_integral(2.5, 1, 1.0, 400_000, 1).unwrap().verdict, Verdict::Divergent);
    }

    #[test]
    fn critical_radial_shells_are_flat() {
        let r = divergence_integral_2n(1, 1_000_000, 2).unwrap();
        for m in &r.shell_mass {
            assert!((m / r.expected_shell_mass - 1.0).abs() < 0.05);
        }
        assert_ne!(r.verdict, Verdict::Finite);
    }

    #[test]
    fn subcritical_radial_integral_is_finite() {
        let ks: Vec<i32> = (3..13).collect();
        let r = radial_integral(2, 1.5, &ks, 1_000_000, 3).unwrap();
        assert_eq!(r.verdict, Verdict::Finite);
    }
}
