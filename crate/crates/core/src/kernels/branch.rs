use std::f64::consts::PI;

use serde::Serialize;

use super::{BranchCertificate, KernelFamily, SingularKernel};
use crate::cvec::{c, Point, C64, I};
use crate::error::{LabError, Result};
use crate::geometry::ComponentMap;

#[derive(Debug, Clone, Serialize)]
pub struct Continuation {
    pub waypoints: Vec<C64>,
    /// Log(ratio) + 2πik nearest to the integrated value.
    pub value: C64,
    /// Integrated value before snapping.
    pub raw: C64,
    /// |raw − value|.
    pub residual: f64,
    pub refinements: usize,
}

fn log_derivative(z: C64, a: C64, zeta: C64) -> C64 {
    1.0 / (z - a) - 1.0 / (z - zeta)
}

impl SingularKernel {
    /// Integrates the log-derivative 1/(w−a) − 1/(w−ζ) along the polyline
    /// starting at the certificate base, Romberg-refining each segment to
    /// 10⁻¹². Every refined node must lie in Ω.
    pub fn continue_along(&self, waypoints: &[C64]) -> Result<Continuation> {
        if !matches!(self.spec.family, KernelFamily::PlanarLog | KernelFamily::PlanarPower { .. }) {
            return Err(LabError::UnsupportedFamily("path continuation needs a planar log kernel".into()));
        }
        let a = self.anchor.unwrap();
        let zeta = self.spec.zeta[0];
        let (base, start) = match &self.certificate {
            BranchCertificate::PathContinued { base, value } => (*base, *value),
            _ => {
                let b = waypoints[0];
                (b, self.log_ratio_principal(b)?)
            }
        };
        if waypoints.is_empty() || (waypoints[0] - base).norm() > 1e-14 {
            let mut w = vec![base];
            w.extend_from_slice(waypoints);
            return self.integrate(&w, start, a, zeta);
        }
        self.integrate(waypoints, start, a, zeta)
    }

    fn integrate(&self, pts: &[C64], start: C64, a: C64, zeta: C64) -> Result<Continuation> {
        let domain = self.domain();
        let mut total = start;
        let mut refinements = 0;
        for pair in pts.windows(2) {
            let (z0, z1) = (pair[0], pair[1]);
            let h = z1 - z0;
            if h.norm() == 0.0 {
                continue;
            }
            let f = |t: f64| log_derivative(z0 + h * t, a, zeta) * h;
            for z in [z0, z1] {
                if !domain.contains(&[z]) {
                    return Err(LabError::PathEscape { witness: vec![z] });
                }
            }
            let mut rows: Vec<Vec<C64>> = vec![vec![(f(0.0) + f(1.0)) * 0.5]];
            let mut m = 1usize;
            let mut done = false;
            for level in 1..=20 {
                let mut mid = c(0.0, 0.0);
                for i in 0..m {
                    let t = (2 * i + 1) as f64 / (2 * m) as f64;
                    let z = z0 + h * t;
                    if !domain.contains(&[z]) {
                        return Err(LabError::PathEscape { witness: vec![z] });
                    }
                    mid += f(t);
                }
                m *= 2;
                let mut row = vec![rows[level - 1][0] * 0.5 + mid / (m as f64)];
                for j in 1..=level {
                    let k = 4f64.powi(j as i32);
                    let v = (row[j - 1] * k - rows[level - 1][j - 1]) / (k - 1.0);
                    row.push(v);
                }
                let change = (row[level] - rows[level - 1][level - 1]).norm();
                rows.push(row);
                refinements += 1;
                if level >= 3 && change < 1e-12 {
                    done = true;
                    break;
                }
            }
            if !done {
                return Err(LabError::UnstableEstimate { estimate: f64::NAN, stderr: f64::NAN, relative: f64::NAN });
            }
            let last = rows.last().unwrap();
            total += *last.last().unwrap();
        }
        let end = *pts.last().unwrap();
        let principal = ((end - a) / (end - zeta)).ln();
        let k = ((total.im - principal.im) / (2.0 * PI)).round();
        let value = principal + I * (2.0 * PI * k);
        Ok(Continuation { waypoints: pts.to_vec(), value, raw: total, residual: (total - value).norm(), refinements })
    }

    /// Continues the branch to z along the component graph: base → nearest
    /// node of base → BFS path → nearest node of z → z.
    pub fn continue_branch(&self, z: C64, map: &ComponentMap) -> Result<Continuation> {
        let base = match &self.certificate {
            BranchCertificate::PathContinued { base, .. } => *base,
            _ => return Err(LabError::UnsupportedFamily("continue_branch needs a path-continued kernel".into())),
        };
        let nearest = |p: C64| -> Option<usize> {
            map.nodes
                .iter()
                .enumerate()
                .map(|(i, q)| (i, (q[0] - p).norm()))
                .filter(|(_, d)| *d <= map.reach())
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .map(|(i, _)| i)
        };
        let (i0, i1) = match (nearest(base), nearest(z)) {
            (Some(i), Some(j)) => (i, j),
            _ => return Err(LabError::Unreachable),
        };
        let path = map.path(i0, i1).ok_or(LabError::Unreachable)?;
        let mut pts = vec![base];
        pts.extend(path.iter().map(|&i| map.nodes[i][0]));
        pts.push(z);
        self.continue_along(&pts)
    }
}

/// Largest |f′ via (x-stencil) − f′ via (iy-stencil)| over the given points,
/// with central differences of step h. For holomorphic f this is O(h²).
pub fn cauchy_riemann_residual<F>(f: F, points: &[Point], h: f64) -> Result<f64>
where
    F: Fn(&[C64]) -> Result<C64>,
{
    let mut worst: f64 = 0.0;
    for z in points {
        for j in 0..z.len() {
            let shifted = |d: C64| -> Result<C64> {
                let mut w = z.clone();
                w[j] += d;
                f(&w)
            };
            let dx = (shifted(c(h, 0.0))? - shifted(c(-h, 0.0))?) / (2.0 * h);
            let dy = (shifted(c(0.0, h))? - shifted(c(0.0, -h))?) / (2.0 * h * I);
            worst = worst.max((dx - dy).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::geometry::{Domain, DomainFamily};
    use crate::kernels::KernelSpec;

    fn annulus_kernel() -> SingularKernel {
        let d = Arc::new(Domain::new(DomainFamily::Annulus { center: c(0.0, 0.0), inner: 0.5, outer: 1.0 }).unwrap());
        let mut spec = KernelSpec::new(KernelFamily::PlanarLog, vec![c(1.0, 0.0)]);
        spec.anchor = Some(c(1.5, 0.0));
        spec.base = Some(c(0.75, 0.0));
        SingularKernel::new(spec, d, 1).unwrap()
    }

    #[test]
    fn annulus_paths_agree() {
        let k = annulus_kernel();
        let upper = k.continue_along(&[c(0.75, 0.0), c(0.0, 0.75), c(-0.75, 0.0)]).unwrap();
        let lower = k.continue_along(&[c(0.75, 0.0), c(0.0, -0.75), c(-0.75, 0.0)]).unwrap();
        assert!((upper.raw - lower.raw).norm() < 1e-8);
        let z = c(-0.75, 0.0);
        assert!((upper.value.exp() - (z - 1.5) / (z - 1.0)).norm() < 1e-10);
    }

    #[test]
    fn escape_is_reported() {
        let k = annulus_kernel();
        let e = k.continue_along(&[c(0.75, 0.0), c(-0.75, 0.0)]).unwrap_err();
        assert_eq!(e.code(), "path-escape");
    }

    #[test]
    fn pole_satisfies_cauchy_riemann() {
        let f = |z: &[C64]| Ok(1.0 / (z[0] - 1.0));
        let pts = vec![vec![c(0.2, 0.3)]];
        let r1 = cauchy_riemann_residual(f, &pts, 1e-2).unwrap();
        let r2 = cauchy_riemann_residual(f, &pts, 5e-3).unwrap();
        assert!(r2 < r1 / 3.0);
    }
}
