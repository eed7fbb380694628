//! Weighted proposal regions around a kernel's singular point.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cvec::{dist, from_real, to_real, Point, C64, I};
use crate::error::Result;
use crate::geometry::{Domain, GraphProfile};
use crate::kernels::{ShellProposal, SingularKernel};
use crate::rng::{ball_volume, par_chunks, uniform_in_ball, LabRng, Moments, CHUNK};

/// Euclidean ball B(center, radius) used to restrict integrals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub center: Point,
    pub radius: f64,
}

impl Region {
    pub fn new(center: Point, radius: f64) -> Region {
        Region { center, radius }
    }

    pub fn contains(&self, z: &[C64]) -> bool {
        dist(z, &self.center) < self.radius
    }
}

enum Kind {
    Box { bbox: Vec<(f64, f64)> },
    Ball { center: Point, radius: f64 },
    Slab { center: Point, e: Point, basis: Vec<Point>, u_radius: f64, perp_radius: f64 },
    Graph { profile: GraphProfile, x_max: f64, lambda: f64, norm: f64, log_h_max: f64 },
}

/// A region with a sampler: ∫_R g = exp(log_volume) · E[weight · g(z)].
pub(crate) struct ShellRegion {
    kind: Kind,
    pub log_volume: f64,
}

/// Orthonormal real basis of the complement of span{e, ie} in ℝ^{2n}.
fn complement_basis(e: &[C64]) -> Vec<Point> {
    let dim = 2 * e.len();
    let mut rows: Vec<Vec<f64>> = vec![to_real(e), to_real(&e.iter().map(|v| v * I).collect::<Vec<_>>())];
    for i in 0..dim {
        if rows.len() == dim {
            break;
        }
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        for _ in 0..2 {
            for r in rows.iter() {
                let d: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
                for (x, y) in v.iter_mut().zip(r) {
                    *x -= d * y;
                }
            }
        }
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv > 1e-6 {
            rows.push(v.iter().map(|x| x / nv).collect());
        }
    }
    rows[2..].iter().map(|r| from_real(r)).collect()
}

impl ShellRegion {
    /// Uniform over the bounding box of the domain.
    pub fn bbox(domain: &Domain) -> ShellRegion {
        ShellRegion { kind: Kind::Box { bbox: domain.bounding_box.clone() }, log_volume: domain.bbox_volume().ln() }
    }

    /// Uniform over a Euclidean ball in ℂⁿ.
    pub fn ball(region: &Region) -> ShellRegion {
        let vol = ball_volume(2 * region.center.len(), region.radius);
        ShellRegion { kind: Kind::Ball { center: region.center.clone(), radius: region.radius }, log_volume: vol.ln() }
    }

    pub fn new(kernel: &SingularKernel, level: f64) -> ShellRegion {
        match kernel.shell_proposal(level) {
            ShellProposal::Slab { center, e, u_radius, perp_radius } => {
                let basis = complement_basis(&e);
                let vol = std::f64::consts::PI * u_radius * u_radius * ball_volume(basis.len(), perp_radius);
                ShellRegion { kind: Kind::Slab { center, e, basis, u_radius, perp_radius }, log_volume: vol.ln() }
            }
            ShellProposal::Graph { profile, x_max } => {
                let lambda = match profile {
                    GraphProfile::Power(alpha) => alpha / x_max,
                    GraphProfile::ExpInvSquare => 2.0 / (x_max * x_max * x_max),
                };
                let norm = -(-lambda * x_max).exp_m1();
                let log_h_max = profile.log_height(x_max);
                ShellRegion { kind: Kind::Graph { profile, x_max, lambda, norm, log_h_max }, log_volume: log_h_max }
            }
        }
    }

    /// Graph proposals lie in Ω by construction.
    pub fn trusted(&self) -> bool {
        matches!(self.kind, Kind::Graph { .. })
    }

    pub fn draw(&self, rng: &mut LabRng, buf: &mut Vec<f64>) -> (Point, f64) {
        match &self.kind {
            Kind::Box { bbox } => {
                let z = bbox
                    .chunks(2)
                    .map(|b| C64::new(rng.random_range(b[0].0..b[0].1), rng.random_range(b[1].0..b[1].1)))
                    .collect();
                (z, 1.0)
            }
            Kind::Ball { center, radius } => {
                buf.resize(2 * center.len(), 0.0);
                uniform_in_ball(rng, buf.len(), *radius, buf);
                (center.iter().zip(from_real(buf)).map(|(c, d)| c + d).collect(), 1.0)
            }
            Kind::Slab { center, e, basis, u_radius, perp_radius } => {
                let mut uv = [0.0; 2];
                uniform_in_ball(rng, 2, *u_radius, &mut uv);
                let u = C64::new(uv[0], uv[1]);
                buf.resize(basis.len(), 0.0);
                uniform_in_ball(rng, basis.len(), *perp_radius, buf);
                let mut z: Point = center.iter().zip(e).map(|(c, d)| c + d * u).collect();
                for (y, b) in buf.iter().zip(basis) {
                    for (zj, bj) in z.iter_mut().zip(b) {
                        *zj += bj * y;
                    }
                }
                (z, 1.0)
            }
            Kind::Graph { profile, x_max, lambda, norm, log_h_max } => {
                let u: f64 = rng.random();
                let t = (-(-u * norm).ln_1p() / lambda).min(x_max * (1.0 - 1e-15));
                let x = x_max - t;
                let lh = profile.log_height(x);
                let y = rng.random::<f64>() * lh.exp();
                let w = (lh - log_h_max + lambda * t).exp() * norm / lambda;
                (vec![C64::new(x, y)], w)
            }
        }
    }
}

/// Weighted Monte Carlo over a region. `f` fills the integrand values at z
/// (already scaled by the caller) and returns false when z is outside the
/// stratum. Slot 0 of the result is the indicator (volume), the rest follow
/// `f`'s values. Returns the moments and the hit count.
pub(crate) fn integrate_region<F>(
    region: &ShellRegion,
    domain: &Domain,
    filter: Option<&Region>,
    count: u64,
    seed: u64,
    nvals: usize,
    f: F,
) -> Result<(Vec<Moments>, u64)>
where
    F: Fn(&[C64], &mut [f64]) -> Result<bool> + Sync,
{
    let parts = par_chunks(seed, 0, count, CHUNK, |rng, len| -> Result<(Vec<Moments>, u64)> {
        let mut m = vec![Moments::default(); nvals + 1];
        let mut vals = vec![0.0; nvals];
        let mut buf = Vec::new();
        let mut hits = 0u64;
        for _ in 0..len {
            let (z, w) = region.draw(rng, &mut buf);
            let inside = (region.trusted() || domain.contains(&z)) && filter.is_none_or(|r| r.contains(&z));
            if inside && f(&z, &mut vals)? {
                hits += 1;
                m[0].push(w);
                for (mi, v) in m[1..].iter_mut().zip(&vals) {
                    mi.push(w * v);
                }
            } else {
                for mi in m.iter_mut() {
                    mi.push(0.0);
                }
            }
        }
        Ok((m, hits))
    });
    let mut total = vec![Moments::default(); nvals + 1];
    let mut hits = 0;
    for p in parts {
        let (m, h) = p?;
        for (t, x) in total.iter_mut().zip(&m) {
            t.merge(x);
        }
        hits += h;
    }
    Ok((total, hits))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cvec::c;
    use crate::kernels::KernelFamily;

    #[test]
    fn slab_covers_ball_level_set() {
        // every point of Ω with |D| < L must lie in the slab: check the
        // volume of {|D| < L} against the sublevel set sampled uniformly
        let d = Arc::new(Domain::unit_ball(2));
        let k = SingularKernel::build(KernelFamily::BallPole, &d, vec![c(1.0, 0.0), c(0.0, 0.0)], 1).unwrap();
        let level = 0.25;
        let reg = ShellRegion::new(&k, level);
        let (m, _) =
            integrate_region(&reg, &d, None, 400_000, 5, 0, |z, _| Ok(k.denominator(z).norm() < level)).unwrap();
        let slab_vol = reg.log_volume.exp() * m[0].mean();
        let s = crate::geometry::sample_uniform(&d, 400_000, 6).unwrap();
        let frac = s.points.iter().filter(|z| k.denominator(z).norm() < level).count() as f64 / s.points.len() as f64;
        let direct = frac * d.exact_volume().unwrap();
        assert!((slab_vol / direct - 1.0).abs() < 0.03, "{slab_vol} vs {direct}");
    }

    #[test]
    fn graph_region_integrates_cusp_area() {
        let d = Arc::new(Domain::cusp(2.0));
        let k = SingularKernel::build(KernelFamily::CuspMonomial { alpha: 2.0, q: 3.0 }, &d, vec![c(0.0, 0.0)], 1)
            .unwrap();
        let reg = ShellRegion::new(&k, 0.1);
        let (m, _) = integrate_region(&reg, &d, None, 200_000, 2, 0, |_, _| Ok(true)).unwrap();
        let area = reg.log_volume.exp() * m[0].mean();
        assert!((area / (1e-3 / 3.0) - 1.0).abs() < 0.01);
    }
}
