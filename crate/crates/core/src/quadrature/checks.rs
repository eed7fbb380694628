use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::fit::{ols, Verdict};
use super::mass::{lp_mass, lp_mass_multi};
use super::region::Region;
use crate::cvec::{c, Point, C64};
use crate::error::{LabError, Result};
use crate::geometry::{sample_uniform, Domain};
use crate::kernels::{Combination, KernelFamily, SingularKernel};
use crate::rng::{derive, stream_rng};

#[derive(Debug, Clone, Serialize)]
pub struct LogLawPoint {
    pub r: f64,
    pub j: f64,
    pub stderr: f64,
    /// log(1/(1−r²)).
    pub log_term: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LogLawFit {
    pub n: usize,
    pub p: f64,
    pub points: Vec<LogLawPoint>,
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub r2: f64,
}

/// J(r) = ∫_{rB} |1/(1 − ⟨z, e₁⟩)|^p on the unit ball of ℂⁿ, regressed on
/// log(1/(1−r²)).
pub fn log_law_fit(n: usize, p: f64, r_grid: &[f64], budget: u64, seed: u64) -> Result<LogLawFit> {
    if r_grid.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(LabError::Input("radii must lie in (0, 1)".into()));
    }
    let domain = Arc::new(Domain::unit_ball(n));
    let mut zeta = vec![c(0.0, 0.0); n];
    zeta[0] = c(1.0, 0.0);
    let k = Arc::new(SingularKernel::build(KernelFamily::BallPole, &domain, zeta, seed)?);
    let f = Combination::single(k);
    let mut points = Vec::new();
    for (i, &r) in r_grid.iter().enumerate() {
        let region = Region::new(vec![c(0.0, 0.0); n], r);
        let m = lp_mass(&f, &domain, p, Some(&region), budget, derive(seed, 0x1a3, i as u64))?;
        points.push(LogLawPoint { r, j: m.estimate, stderr: m.stderr, log_term: (1.0 / (1.0 - r * r)).ln() });
    }
    let x: Vec<f64> = points.iter().map(|q| q.log_term).collect();
    let y: Vec<f64> = points.iter().map(|q| q.j).collect();
    let fit = ols(&x, &y);
    Ok(LogLawFit { n, p, points, slope: fit.slope, intercept: fit.intercept, slope_stderr: fit.slope_se, r2: fit.r2 })
}

#[derive(Debug, Clone, Serialize)]
pub struct SubmeanTrial {
    pub a: Point,
    pub r: f64,
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubmeanReport {
    pub trials: usize,
    pub violations: usize,
    /// Largest (lhs − rhs)/stderr seen.
    pub worst_z: f64,
    pub examples: Vec<SubmeanTrial>,
}

/// Torus mean of |f|^p over radii ρ with M equispaced angles per
/// coordinate, rotated by `phase`.
fn torus_mean(f: &Combination, a: &[C64], rho: &[f64], phase: &[f64], m: usize, p: f64) -> Result<f64> {
    let n = a.len();
    let total = m.pow(n as u32);
    let mut acc = 0.0;
    let mut z = a.to_vec();
    for idx in 0..total {
        let mut rem = idx;
        for j in 0..n {
            let t = phase[j] + 2.0 * PI * (rem % m) as f64 / m as f64;
            rem /= m;
            z[j] = a[j] + C64::from_polar(rho[j], t);
        }
        acc += f.eval(&z)?.norm().powf(p);
    }
    Ok(acc / total as f64)
}

/// Checks |f(a)|^p ≤ (1/vol P) ∫_P |f|^p on random polydisks P(a, r) ⊂⊂ Ω.
/// The right side averages rotated torus rules over radius vectors drawn
/// with density ∝ ρ_j.
pub fn submean_check(f: &Combination, domain: &Domain, trials: usize, seed: u64) -> Result<SubmeanReport> {
    let n = domain.n;
    let m = if n == 1 { 16 } else { 12 };
    let radii_draws = 32;
    let centers = sample_uniform(domain, trials, derive(seed, 0x5b, 0))?;
    let out: Vec<Result<Option<SubmeanTrial>>> = {
        use rayon::prelude::*;
        centers
            .points
            .par_iter()
            .enumerate()
            .map(|(i, a)| -> Result<Option<SubmeanTrial>> {
                let mut rng = stream_rng(derive(seed, 0x5b, 2), i as u64);
                let d = domain
                    .boundary_distance(a)
                    .ok_or_else(|| LabError::UnsupportedFamily("submean check needs a boundary distance".into()))?;
                if d <= 0.0 {
                    return Ok(None);
                }
                let r = rng.random_range(0.05..0.9) * d / (n as f64).sqrt();
                let p = [0.5, 1.0, 2.0][rng.random_range(0..3)];
                let lhs = f.eval(a)?.norm().powf(p);
                let mut vals = Vec::with_capacity(radii_draws);
                for _ in 0..radii_draws {
                    let rho: Vec<f64> = (0..n).map(|_| r * rng.random::<f64>().sqrt()).collect();
                    let phase: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
                    vals.push(torus_mean(f, a, &rho, &phase, m, p)?);
                }
                let k = vals.len() as f64;
                let mean = vals.iter().sum::<f64>() / k;
                let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
                Ok(Some(SubmeanTrial { a: a.clone(), r, p, lhs, rhs: mean, stderr: (var / k).sqrt() }))
            })
            .collect()
    };
    let mut report = SubmeanReport { trials: 0, violations: 0, worst_z: f64::NEG_INFINITY, examples: Vec::new() };
    for t in out {
        let Some(t) = t? else { continue };
        report.trials += 1;
        let slack = 3.0 * t.stderr + 1e-12 * t.lhs;
        if t.lhs > t.rhs + slack {
            report.violations += 1;
        }
        let z = if t.stderr > 0.0 { (t.lhs - t.rhs) / t.stderr } else if t.lhs > t.rhs + 1e-12 * t.lhs { f64::INFINITY } else { f64::NEG_INFINITY };
        report.worst_z = report.worst_z.max(z);
        if report.examples.len() < 5 {
            report.examples.push(t);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct CauchyControl {
    pub alpha: Vec<usize>,
    pub delta_k: f64,
    pub sup_derivative: f64,
    pub l1_norm: f64,
    pub l1_stderr: f64,
    /// sup_K |∂^α f| / ‖f‖₁; zero when f = 0.
    pub ratio: f64,
    /// (t, ratio for t·f) for t ∈ {1, 2, 5}.
    pub scaled: Vec<(f64, f64)>,
}

/// ∂^α f(z) by the Cauchy formula on a torus of radius r with N nodes per
/// coordinate.
pub fn cauchy_derivative(f: &Combination, z: &[C64], alpha: &[usize], r: f64, nodes: usize) -> Result<C64> {
    let n = z.len();
    let active: Vec<usize> = (0..n).filter(|&j| alpha[j] > 0).collect();
    if active.is_empty() {
        return f.eval(z);
    }
    let total = nodes.pow(active.len() as u32);
    let mut acc = c(0.0, 0.0);
    let mut w = z.to_vec();
    for idx in 0..total {
        let mut rem = idx;
        let mut factor = c(1.0, 0.0);
        for &j in &active {
            let t = 2.0 * PI * (rem % nodes) as f64 / nodes as f64;
            rem /= nodes;
            w[j] = z[j] + C64::from_polar(r, t);
            factor *= C64::from_polar(1.0, -(alpha[j] as f64) * t);
        }
        acc += f.eval(&w)? * factor;
    }
    let fact: f64 = active.iter().map(|&j| (1..=alpha[j]).map(|i| i as f64).product::<f64>() / r.powi(alpha[j] as i32)).product();
    Ok(acc / total as f64 * fact)
}

/// Consistency check of sup_K |∂^α f| ≤ c(α, K)‖f‖₁ over a compact sample
/// set K.
pub fn cauchy_norm_control(
    f: &Combination,
    compact: &[Point],
    alpha: &[usize],
    domain: &Domain,
    budget: u64,
    seed: u64,
) -> Result<CauchyControl> {
    let delta_k = compact
        .iter()
        .map(|z| domain.boundary_distance(z).unwrap_or(0.0))
        .fold(f64::INFINITY, f64::min);
    if delta_k < 1e-3 {
        return Err(LabError::CompactTooClose(delta_k));
    }
    let r = 0.5 * delta_k / (domain.n as f64).sqrt();
    let mut sup: f64 = 0.0;
    for z in compact {
        sup = sup.max(cauchy_derivative(f, z, alpha, r, 32)?.norm());
    }
    let (l1, l1_se) = if f.is_zero() {
        (0.0, 0.0)
    } else {
        let m = lp_mass_multi(f, domain, &[1.0], None, budget, seed)?;
        if m.verdict[0] == Verdict::Divergent {
            return Err(LabError::NotInSpace { index: 0, p: 1.0 });
        }
        (m.mass[0], m.stderr[0])
    };
    let ratio = if sup == 0.0 && l1 == 0.0 { 0.0 } else { sup / l1 };
    let scaled = [1.0, 2.0, 5.0]
        .iter()
        .map(|&t| {
            let s = (f.scale(c(t, 0.0)), t);
            let mut sup_t: f64 = 0.0;
            for z in compact {
                sup_t = sup_t.max(cauchy_derivative(&s.0, z, alpha, r, 32).map(|v| v.norm()).unwrap_or(f64::NAN));
            }
            (t, if sup_t == 0.0 && l1 == 0.0 { 0.0 } else { sup_t / (t * l1) })
        })
        .collect();
    Ok(CauchyControl { alpha: alpha.to_vec(), delta_k, sup_derivative: sup, l1_norm: l1, l1_stderr: l1_se, ratio, scaled })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_derivative_of_pole() {
        let d = Arc::new(Domain::unit_disk());
        let k = Arc::new(SingularKernel::build(KernelFamily::PlanarPole, &d, vec![c(1.0, 0.0)], 1).unwrap());
        let f = Combination::single(k);
        let z = [c(0.1, 0.2)];
        let dv = cauchy_derivative(&f, &z, &[1], 0.2, 32).unwrap();
        let exact = -1.0 / ((z[0] - 1.0) * (z[0] - 1.0));
        assert!((dv - exact).norm() < 1e-8);
    }

    #[test]
    fn constant_passes_submean_with_equality() {
        let d = Domain::unit_disk();
        let rep = submean_check(&Combination::constant(c(3.0, 0.0)), &d, 50, 2).unwrap();
        assert_eq!(rep.violations, 0);
        assert_eq!(rep.trials, 50);
    }
}
