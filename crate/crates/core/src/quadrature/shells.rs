use std::f64::consts::LN_2;
use std::io::Write;

use serde::Serialize;

use super::region::{integrate_region, Region, ShellRegion};
use crate::error::{LabError, Result};
use crate::kernels::SingularKernel;
use crate::rng::derive;

/// Per-shell volumes and p-masses of T_k = {2^{−k−1} ≤ |D| < 2^{−k}}.
///
/// Volumes and masses are kept as log₂ values so that shells of the
/// exponential cusp, far below `f64` range, still regress.
#[derive(Debug, Clone, Serialize)]
pub struct LevelShellProfile {
    pub kernel: String,
    pub exponent: f64,
    pub ks: Vec<i32>,
    pub ps: Vec<f64>,
    pub log2_vol: Vec<f64>,
    pub log2_vol_se: Vec<f64>,
    /// log₂ ∫_{T_k} |f|^p, indexed [p][k].
    pub log2_mass: Vec<Vec<f64>>,
    pub log2_mass_se: Vec<Vec<f64>>,
    pub hits: Vec<u64>,
    pub proposals: Vec<u64>,
    /// Shells with no hits, excluded from fits.
    pub missing: Vec<i32>,
}

impl LevelShellProfile {
    pub fn vol(&self, i: usize) -> f64 {
        self.log2_vol[i].exp2()
    }

    pub fn vol_stderr(&self, i: usize) -> f64 {
        self.vol(i) * self.log2_vol_se[i] * LN_2
    }

    pub fn mass(&self, pi: usize, i: usize) -> f64 {
        self.log2_mass[pi][i].exp2()
    }

    /// Indices of shells with hits.
    pub fn usable(&self) -> Vec<usize> {
        (0..self.ks.len()).filter(|&i| self.hits[i] > 0).collect()
    }

    /// Shell table as RFC-4180 CSV: k, vol, stderr, mass_p columns.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["k".to_string(), "vol".into(), "stderr".into()];
        header.extend(self.ps.iter().map(|p| format!("mass_{p}")));
        w.write_record(&header).map_err(|e| LabError::Io(e.to_string()))?;
        for i in 0..self.ks.len() {
            let mut row = vec![self.ks[i].to_string(), format!("{:e}", self.vol(i)), format!("{:e}", self.vol_stderr(i))];
            row.extend((0..self.ps.len()).map(|pi| format!("{:e}", self.mass(pi, i))));
            w.write_record(&row).map_err(|e| LabError::Io(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Default shell range: twelve halvings of the level, starting where the
/// proposal for Levi kernels fits inside the local patch.
pub fn default_shells(kernel: &SingularKernel) -> (i32, i32) {
    let mut k0 = 2;
    if let Some(l) = &kernel.levi {
        while (0.5f64.powi(k0) / l.beta).sqrt() > 0.5 * l.epsilon {
            k0 += 1;
        }
    }
    (k0, k0 + 12)
}

/// Samples each shell of the kernel's denominator inside its proposal
/// region, optionally restricted to `region`.
pub fn shell_profile(
    kernel: &SingularKernel,
    ks: (i32, i32),
    ps: &[f64],
    per_shell: u64,
    region: Option<&Region>,
    seed: u64,
) -> Result<LevelShellProfile> {
    let domain = kernel.domain().clone();
    let s = kernel.exponent;
    let mut prof = LevelShellProfile {
        kernel: kernel.label(),
        exponent: s,
        ks: (ks.0..=ks.1).collect(),
        ps: ps.to_vec(),
        log2_vol: Vec::new(),
        log2_vol_se: Vec::new(),
        log2_mass: vec![Vec::new(); ps.len()],
        log2_mass_se: vec![Vec::new(); ps.len()],
        hits: Vec::new(),
        proposals: Vec::new(),
        missing: Vec::new(),
    };
    let mut run = 0;
    for k in ks.0..=ks.1 {
        let level = 0.5f64.powi(k);
        let reg = ShellRegion::new(kernel, level);
        // |f|^p ≈ 2^{k p s}; factor it out to stay in range
        let offsets: Vec<f64> = ps.iter().map(|p| p * s * k as f64 * LN_2).collect();
        let (m, hits) = integrate_region(&reg, &domain, region, per_shell, derive(seed, 0x5e11, k as u64), ps.len(), |z, vals| {
            if !kernel.in_patch(z) {
                return Ok(false);
            }
            let d = kernel.denominator(z).norm();
            if !(d >= level / 2.0 && d < level) {
                return Ok(false);
            }
            let lf = kernel.eval_unchecked(z)?.norm().ln();
            for ((v, p), o) in vals.iter_mut().zip(ps).zip(&offsets) {
                *v = (p * lf - o).exp();
            }
            Ok(true)
        })?;
        prof.hits.push(hits);
        prof.proposals.push(per_shell);
        let lv = |mean: f64, off: f64| (reg.log_volume + off + mean.ln()) / LN_2;
        let rel = |mm: &crate::rng::Moments| if mm.mean() > 0.0 { mm.stderr() / mm.mean() / LN_2 } else { f64::INFINITY };
        prof.log2_vol.push(lv(m[0].mean(), 0.0));
        prof.log2_vol_se.push(rel(&m[0]));
        for pi in 0..ps.len() {
            prof.log2_mass[pi].push(lv(m[pi + 1].mean(), offsets[pi]));
            prof.log2_mass_se[pi].push(rel(&m[pi + 1]));
        }
        if hits == 0 {
            prof.missing.push(k);
            run += 1;
            if run >= 3 {
                return Err(LabError::ShellStarvation(run));
            }
        } else {
            run = 0;
        }
    }
    Ok(prof)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cvec::c;
    use crate::geometry::Domain;
    use crate::kernels::KernelFamily;

    #[test]
    fn pole_shell_masses_are_bracketed_by_volumes() {
        let d = Arc::new(Domain::unit_disk());
        let k = SingularKernel::build(KernelFamily::PlanarPole, &d, vec![c(1.0, 0.0)], 1).unwrap();
        let prof = shell_profile(&k, (2, 8), &[1.0, 1.5], 20_000, None, 3).unwrap();
        for i in prof.usable() {
            for (pi, p) in prof.ps.iter().enumerate() {
                let k = prof.ks[i] as f64;
                let lo = prof.log2_vol[i] + k * p;
                let hi = prof.log2_vol[i] + (k + 1.0) * p;
                let m = prof.log2_mass[pi][i];
                assert!(m >= lo - 1e-9 && m <= hi + 1e-9);
            }
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let d = Arc::new(Domain::unit_disk());
        let k = SingularKernel::build(KernelFamily::PlanarPole, &d, vec![c(1.0, 0.0)], 1).unwrap();
        let prof = shell_profile(&k, (2, 4), &[1.0], 2000, None, 3).unwrap();
        let mut buf = Vec::new();
        prof.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,vol,stderr,mass_1\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
