use std::f64::consts::LN_2;

use serde::Serialize;

use super::fit::{bootstrap_slopes, classify, wls, Verdict};
use super::region::{integrate_region, Region, ShellRegion};
use super::threshold::MARGIN;
use crate::cvec::C64;
use crate::error::{LabError, Result};
use crate::geometry::Domain;
use crate::kernels::Combination;
use crate::rng::{derive, Moments};

/// Outermost shell index; points with |D_j| < 2^{−K0} belong to term j.
const K0: i32 = 2;
const FIRST_BLOCK: i32 = 16;
const BLOCK: i32 = 8;
const K_LIMIT: i32 = 200;
const FIT_SHELLS: usize = 6;

/// Multi-exponent estimate of ∫|f|^p over Ω (or Ω ∩ region).
#[derive(Debug, Clone, Serialize)]
pub struct MassEstimate {
    pub ps: Vec<f64>,
    /// Infinite where the verdict is divergent.
    pub mass: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Geometric tail beyond the last sampled shell.
    pub tail: Vec<f64>,
    /// Shell-mass slope used for the tail, per p.
    pub tail_slope: Vec<f64>,
    pub verdict: Vec<Verdict>,
    pub samples: u64,
    /// Last sampled shell per term.
    pub last_shell: Vec<i32>,
}

impl MassEstimate {
    /// Exact rescaling ∫|t f|^p = |t|^p ∫|f|^p.
    pub fn scaled(&self, t: f64) -> MassEstimate {
        let mut out = self.clone();
        for (i, p) in self.ps.iter().enumerate() {
            let f = t.abs().powf(*p);
            out.mass[i] *= f;
            out.stderr[i] *= f;
            out.tail[i] *= f;
        }
        out
    }

    pub fn relative_error(&self, i: usize) -> f64 {
        if self.mass[i] > 0.0 {
            self.stderr[i] / self.mass[i]
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MassValue {
    pub p: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub verdict: Verdict,
}

struct TermShells {
    ks: Vec<i32>,
    // [k] → (log scale per p, moments per p)
    log_scale: Vec<Vec<f64>>,
    moments: Vec<Vec<Moments>>,
}

impl TermShells {
    fn mass(&self, i: usize, pi: usize) -> (f64, f64) {
        let m = &self.moments[i][pi];
        let s = self.log_scale[i][pi].exp();
        (s * m.mean(), s * m.stderr())
    }

    /// WLS slope of log₂ mass over the last shells with positive mass.
    fn tail_fit(&self, pi: usize, seed: u64) -> Option<(f64, f64, Verdict)> {
        let mut x = Vec::new();
        let mut y = Vec::new();
        let mut se = Vec::new();
        for i in (0..self.ks.len()).rev() {
            let (m, e) = self.mass(i, pi);
            if m > 0.0 {
                x.push(self.ks[i] as f64);
                y.push(m.log2());
                se.push((e / m / LN_2).max(1e-9));
            }
            if x.len() == FIT_SHELLS {
                break;
            }
        }
        if x.len() < 3 {
            return None;
        }
        let w: Vec<f64> = se.iter().map(|s| 1.0 / (s * s)).collect();
        let fit = wls(&x, &y, &w);
        let boot = bootstrap_slopes(&x, &y, &se, 200, seed);
        let sd = super::fit::std_dev(&boot);
        Some((fit.slope, sd, classify(fit.slope, &boot, MARGIN)))
    }

    /// Whether the last block of shells is empty for every p.
    fn empty_tail(&self) -> bool {
        let n = self.ks.len();
        (n.saturating_sub(FIT_SHELLS)..n).all(|i| self.moments[i].iter().all(|m| m.mean() == 0.0))
    }
}

/// Stratified estimate of ∫|f|^p for several p at once: dyadic shells of
/// each term's denominator, a bulk stratum outside all cores
/// {|D_j| < 2^{−2}}, and a geometric tail fitted on the last shells.
pub fn lp_mass_multi(
    f: &Combination,
    domain: &Domain,
    ps: &[f64],
    region: Option<&Region>,
    budget: u64,
    seed: u64,
) -> Result<MassEstimate> {
    for k in f.kernels() {
        if k.levi.is_some() {
            return Err(LabError::UnsupportedFamily("Levi kernels are local; use shell_profile".into()));
        }
    }
    let kernels: Vec<_> = f.kernels().cloned().collect();
    let nt = kernels.len();
    let core = 0.5f64.powi(K0);
    let per_shell = (budget * 3 / 4 / (nt.max(1) as u64 * FIRST_BLOCK as u64)).max(1000);
    let bulk_count = if nt == 0 { budget } else { budget / 4 };
    let np = ps.len();
    let abs_pow = |v: C64, vals: &mut [f64], offs: &[f64]| {
        let l = v.norm().ln();
        for ((o, p), off) in vals.iter_mut().zip(ps).zip(offs) {
            *o = if l == f64::NEG_INFINITY { 0.0 } else { (p * l - off).exp() };
        }
    };
    // bulk
    let bulk_region = match region {
        Some(r) => ShellRegion::ball(r),
        None => ShellRegion::bbox(domain),
    };
    let zeros = vec![0.0; np];
    let (bm, _) = integrate_region(&bulk_region, domain, region, bulk_count, derive(seed, 0xb01c, 0), np, |z, vals| {
        if kernels.iter().any(|k| k.denominator(z).norm() < core) {
            return Ok(false);
        }
        abs_pow(f.eval_unchecked(z)?, vals, &zeros);
        Ok(true)
    })?;
    let bscale = bulk_region.log_volume.exp();
    let mut mass: Vec<f64> = (0..np).map(|pi| bscale * bm[pi + 1].mean()).collect();
    let mut var: Vec<f64> = (0..np).map(|pi| (bscale * bm[pi + 1].stderr()).powi(2)).collect();
    let mut samples = bulk_count;
    let mut tail = vec![0.0; np];
    let mut tail_slope = vec![f64::NEG_INFINITY; np];
    let mut verdict = vec![Verdict::Finite; np];
    let mut last_shell = Vec::new();
    let pmax_i = (0..np).max_by(|&a, &b| ps[a].total_cmp(&ps[b]));
    for (j, kj) in kernels.iter().enumerate() {
        let s = kj.exponent;
        let mut shells = TermShells { ks: Vec::new(), log_scale: Vec::new(), moments: Vec::new() };
        let mut k1 = K0 + FIRST_BLOCK - 1;
        let mut k = K0;
        let tseed = derive(seed, 0x57a7, j as u64);
        loop {
            while k <= k1 {
                let level = 0.5f64.powi(k);
                let reg = ShellRegion::new(kj, level);
                let offs: Vec<f64> = ps.iter().map(|p| p * s * k as f64 * LN_2).collect();
                let (m, _) = integrate_region(&reg, domain, region, per_shell, derive(tseed, 0x5e11, k as u64), np, |z, vals| {
                    let d = kj.denominator(z).norm();
                    if !(d >= level / 2.0 && d < level) {
                        return Ok(false);
                    }
                    if kernels[..j].iter().any(|ki| ki.denominator(z).norm() < core) {
                        return Ok(false);
                    }
                    abs_pow(f.eval_unchecked(z)?, vals, &offs);
                    Ok(true)
                })?;
                samples += per_shell;
                shells.ks.push(k);
                shells.log_scale.push(offs.iter().map(|o| reg.log_volume + o).collect());
                shells.moments.push(m[1..].to_vec());
                k += 1;
            }
            if shells.empty_tail() || k1 >= K_LIMIT {
                break;
            }
            let Some(pi) = pmax_i else { break };
            match shells.tail_fit(pi, tseed) {
                None => break,
                Some((slope, _, _)) => {
                    if slope <= -1.0 || (slope >= -MARGIN && k1 >= K0 + FIRST_BLOCK + BLOCK - 1) {
                        break;
                    }
                }
            }
            k1 += BLOCK;
        }
        last_shell.push(k1);
        for pi in 0..np {
            for i in 0..shells.ks.len() {
                let (m, e) = shells.mass(i, pi);
                mass[pi] += m;
                var[pi] += e * e;
            }
            if shells.empty_tail() {
                continue;
            }
            if let Some((slope, sd, v)) = shells.tail_fit(pi, tseed ^ pi as u64) {
                let (m_last, e_last) = shells.mass(shells.ks.len() - 1, pi);
                if v == Verdict::Divergent || slope >= 0.0 {
                    verdict[pi] = Verdict::Divergent;
                    continue;
                }
                if v == Verdict::Inconclusive && verdict[pi] == Verdict::Finite {
                    verdict[pi] = Verdict::Inconclusive;
                }
                let r = slope.exp2();
                let t = m_last * r / (1.0 - r);
                let dt = t * LN_2 / (1.0 - r) * sd;
                tail[pi] += t;
                tail_slope[pi] = tail_slope[pi].max(slope);
                var[pi] += (t * e_last / m_last.max(f64::MIN_POSITIVE)).powi(2) + dt * dt;
            }
        }
    }
    let mut stderr = Vec::with_capacity(np);
    for pi in 0..np {
        if verdict[pi] == Verdict::Divergent {
            mass[pi] = f64::INFINITY;
            stderr.push(f64::INFINITY);
        } else {
            mass[pi] += tail[pi];
            stderr.push(var[pi].sqrt());
        }
    }
    Ok(MassEstimate { ps: ps.to_vec(), mass, stderr, tail, tail_slope, verdict, samples, last_shell })
}

/// ∫|f|^p dv over Ω or Ω ∩ region, with standard error.
pub fn lp_mass(
    f: &Combination,
    domain: &Domain,
    p: f64,
    region: Option<&Region>,
    budget: u64,
    seed: u64,
) -> Result<MassValue> {
    let m = lp_mass_multi(f, domain, &[p], region, budget, seed)?;
    let v = MassValue { p, estimate: m.mass[0], stderr: m.stderr[0], verdict: m.verdict[0] };
    if v.estimate.is_finite() && v.estimate > 0.0 && v.stderr / v.estimate > 0.2 {
        return Err(LabError::UnstableEstimate {
            estimate: v.estimate,
            stderr: v.stderr,
            relative: v.stderr / v.estimate,
        });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cvec::c;
    use crate::kernels::{KernelFamily, SingularKernel};

    #[test]
    fn constant_mass_is_area() {
        let d = Domain::unit_disk();
        let m = lp_mass(&Combination::constant(c(1.0, 0.0)), &d, 1.5, None, 200_000, 1).unwrap();
        assert!((m.estimate - std::f64::consts::PI).abs() < 3.0 * m.stderr + 1e-12);
    }

    #[test]
    fn zero_has_zero_mass() {
        let d = Arc::new(Domain::unit_disk());
        let k = Arc::new(SingularKernel::build(KernelFamily::PlanarPole, &d, vec![c(1.0, 0.0)], 1).unwrap());
        let f = Combination::single(k);
        let m = lp_mass(&f.sub(&f), &d, 1.0, None, 100_000, 1).unwrap();
        assert_eq!(m.estimate, 0.0);
    }

    #[test]
    fn pole_above_threshold_is_divergent() {
        let d = Arc::new(Domain::unit_disk());
        let k = Arc::new(SingularKernel::build(KernelFamily::PlanarPole, &d, vec![c(1.0, 0.0)], 1).unwrap());
        let m = lp_mass_multi(&Combination::single(k), &d, &[1.0, 2.5], None, 400_000, 1).unwrap();
        assert_eq!(m.verdict[0], Verdict::Finite);
        assert_eq!(m.verdict[1], Verdict::Divergent);
        assert!(m.mass[1].is_infinite());
    }
}
