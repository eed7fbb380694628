use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cvec::{c, norm, norm_sqr, Point, C64};
use crate::error::{LabError, Result};
use crate::levi::DefiningFunction;
use crate::rng::unit_ball_volume;

/// Catalog of bounded domains. Real coordinates are interleaved
/// `(Re z₁, Im z₁, …)`; the bounding box lists one interval per real
/// coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "parameters", rename_all = "kebab-case")]
pub enum DomainFamily {
    Disk { center: C64, radius: f64 },
    Annulus { center: C64, inner: f64, outer: f64 },
    /// Annulus about 0 with the closed sector |arg z − π| ≤ gap removed.
    Horseshoe { inner: f64, outer: f64, gap: f64 },
    /// Union of pairwise disjoint disks.
    DiskUnion { disks: Vec<(C64, f64)> },
    /// Ω_α = {0 < x < 1, 0 < y < x^α}.
    Cusp { alpha: f64 },
    /// {0 < x < 1, 0 < y < exp(−1/x²)}.
    ExpCusp,
    Ball { n: usize, radius: f64 },
    Ellipsoid { radii: Vec<f64> },
    /// {|z| < 1, Re z₁ > 0}.
    HalfBall { n: usize },
    /// {0 < Re z_j < 1, 0 < Im z_j < 1}.
    Box { n: usize },
    Polydisk { n: usize },
    /// Convex hull of planar points (n = 1).
    ConvexHull { points: Vec<C64> },
    StrictlyPsh { rho: DefiningFunction },
}

/// A bounded open set in ℂⁿ: a family with its membership predicate and a
/// finite bounding box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    #[serde(flatten)]
    pub family: DomainFamily,
    pub n: usize,
    pub bounding_box: Vec<(f64, f64)>,
    #[serde(skip)]
    hull: Vec<C64>,
}

/// Height profile of a planar graph domain {0 < x < 1, 0 < y < h(x)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphProfile {
    Power(f64),
    ExpInvSquare,
}

impl GraphProfile {
    /// ln h(x) for x > 0.
    pub fn log_height(&self, x: f64) -> f64 {
        match self {
            GraphProfile::Power(a) => a * x.ln(),
            GraphProfile::ExpInvSquare => -1.0 / (x * x),
        }
    }
}

fn monotone_chain(points: &[C64]) -> Vec<C64> {
    let mut pts: Vec<C64> = points.to_vec();
    pts.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: C64, a: C64, b: C64| (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re);
    let mut lower: Vec<C64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<C64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl Domain {
    pub fn new(family: DomainFamily) -> Result<Domain> {
        let bad = |m: &str| Err(LabError::Input(m.to_string()));
        let mut hull = Vec::new();
        let (n, bbox): (usize, Vec<(f64, f64)>) = match &family {
            DomainFamily::Disk { center, radius } => {
                if *radius <= 0.0 {
                    return bad("disk radius must be positive");
                }
                (1, vec![(center.re - radius, center.re + radius), (center.im - radius, center.im + radius)])
            }
            DomainFamily::Annulus { center, inner, outer } => {
                if !(0.0 <= *inner && inner < outer) {
                    return bad("annulus needs 0 <= inner < outer");
                }
                (1, vec![(center.re - outer, center.re + outer), (center.im - outer, center.im + outer)])
            }
            DomainFamily::Horseshoe { inner, outer, gap } => {
                if !(0.0 <= *inner && inner < outer && *gap > 0.0 && *gap < PI) {
                    return bad("horseshoe needs 0 <= inner < outer and 0 < gap < π");
                }
                (1, vec![(-outer, *outer), (-outer, *outer)])
            }
            DomainFamily::DiskUnion { disks } => {
                if disks.is_empty() {
                    return bad("disk union needs at least one disk");
                }
                for (i, (ci, ri)) in disks.iter().enumerate() {
                    for (cj, rj) in disks.iter().skip(i + 1) {
                        if (ci - cj).norm() <= ri + rj {
                            return bad("disks in a union must be disjoint");
                        }
                    }
                }
                let lo_x = disks.iter().map(|(c, r)| c.re - r).fold(f64::INFINITY, f64::min);
                let hi_x = disks.iter().map(|(c, r)| c.re + r).fold(f64::NEG_INFINITY, f64::max);
                let lo_y = disks.iter().map(|(c, r)| c.im - r).fold(f64::INFINITY, f64::min);
                let hi_y = disks.iter().map(|(c, r)| c.im + r).fold(f64::NEG_INFINITY, f64::max);
                (1, vec![(lo_x, hi_x), (lo_y, hi_y)])
            }
            DomainFamily::Cusp { alpha } => {
                if *alpha < 1.0 {
                    return bad("cusp exponent must be >= 1");
                }
                (1, vec![(0.0, 1.0), (0.0, 1.0)])
            }
            DomainFamily::ExpCusp => (1, vec![(0.0, 1.0), (0.0, (-1.0f64).exp())]),
            DomainFamily::Ball { n, radius } => {
                if *n == 0 || *radius <= 0.0 {
                    return bad("ball needs n >= 1 and positive radius");
                }
                (*n, vec![(-radius, *radius); 2 * n])
            }
            DomainFamily::Ellipsoid { radii } => {
                if radii.is_empty() || radii.iter().any(|a| *a <= 0.0) {
                    return bad("ellipsoid radii must be positive");
                }
                (radii.len(), radii.iter().flat_map(|a| [(-a, *a), (-a, *a)]).collect())
            }
            DomainFamily::HalfBall { n } => {
                if *n == 0 {
                    return bad("half-ball needs n >= 1");
                }
                let mut b = vec![(-1.0, 1.0); 2 * n];
                b[0] = (0.0, 1.0);
                (*n, b)
            }
            DomainFamily::Box { n } => {
                if *n == 0 {
                    return bad("box needs n >= 1");
                }
                (*n, vec![(0.0, 1.0); 2 * n])
            }
            DomainFamily::Polydisk { n } => {
                if *n == 0 {
                    return bad("polydisk needs n >= 1");
                }
                (*n, vec![(-1.0, 1.0); 2 * n])
            }
            DomainFamily::ConvexHull { points } => {
                hull = monotone_chain(points);
                if hull.len() < 3 {
                    return bad("convex hull needs three affinely independent points");
                }
                let lo_x = hull.iter().map(|p| p.re).fold(f64::INFINITY, f64::min);
                let hi_x = hull.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
                let lo_y = hull.iter().map(|p| p.im).fold(f64::INFINITY, f64::min);
                let hi_y = hull.iter().map(|p| p.im).fold(f64::NEG_INFINITY, f64::max);
                (1, vec![(lo_x, hi_x), (lo_y, hi_y)])
            }
            DomainFamily::StrictlyPsh { rho } => {
                let r = rho.enclosing_radius().ok_or_else(|| {
                    LabError::Input("defining function has no bounded sublevel set".into())
                })?;
                (rho.dim(), vec![(-r, r); 2 * rho.dim()])
            }
        };
        Ok(Domain { family, n, bounding_box: bbox, hull })
    }

    /// Rebuilds derived state after deserialization.
    pub fn rebuild(self) -> Result<Domain> {
        Domain::new(self.family)
    }

    pub fn unit_disk() -> Domain {
        Domain::new(DomainFamily::Disk { center: c(0.0, 0.0), radius: 1.0 }).unwrap()
    }

    pub fn disk(center: C64, radius: f64) -> Domain {
        Domain::new(DomainFamily::Disk { center, radius }).unwrap()
    }

    pub fn unit_ball(n: usize) -> Domain {
        Domain::new(DomainFamily::Ball { n, radius: 1.0 }).unwrap()
    }

    pub fn cusp(alpha: f64) -> Domain {
        Domain::new(DomainFamily::Cusp { alpha }).unwrap()
    }

    pub fn ellipsoid(radii: &[f64]) -> Domain {
        Domain::new(DomainFamily::Ellipsoid { radii: radii.to_vec() }).unwrap()
    }

    pub fn unit_square() -> Domain {
        Domain::new(DomainFamily::Box { n: 1 }).unwrap()
    }

    pub fn real_dim(&self) -> usize {
        2 * self.n
    }

    pub fn family_tag(&self) -> &'static str {
        match self.family {
            DomainFamily::Disk { .. } => "disk",
            DomainFamily::Annulus { .. } => "annulus",
            DomainFamily::Horseshoe { .. } => "horseshoe",
            DomainFamily::DiskUnion { .. } => "disk-union",
            DomainFamily::Cusp { .. } => "cusp",
            DomainFamily::ExpCusp => "exp-cusp",
            DomainFamily::Ball { .. } => "ball",
            DomainFamily::Ellipsoid { .. } => "ellipsoid",
            DomainFamily::HalfBall { .. } => "half-ball",
            DomainFamily::Box { .. } => "box",
            DomainFamily::Polydisk { .. } => "polydisk",
            DomainFamily::ConvexHull { .. } => "convex-hull",
            DomainFamily::StrictlyPsh { .. } => "strictly-psh",
        }
    }

    pub fn in_bbox(&self, z: &[C64]) -> bool {
        z.iter().enumerate().all(|(j, w)| {
            let (a, b) = self.bounding_box[2 * j];
            let (cc, d) = self.bounding_box[2 * j + 1];
            w.re >= a && w.re <= b && w.im >= cc && w.im <= d
        })
    }

    /// Membership predicate of the open set.
    pub fn contains(&self, z: &[C64]) -> bool {
        if z.len() != self.n {
            return false;
        }
        match &self.family {
            DomainFamily::Disk { center, radius } => (z[0] - center).norm_sqr() < radius * radius,
            DomainFamily::Annulus { center, inner, outer } => {
                let r2 = (z[0] - center).norm_sqr();
                r2 > inner * inner && r2 < outer * outer
            }
            DomainFamily::Horseshoe { inner, outer, gap } => {
                let r2 = z[0].norm_sqr();
                r2 > inner * inner && r2 < outer * outer && z[0].arg().abs() < PI - gap
            }
            DomainFamily::DiskUnion { disks } => disks.iter().any(|(ctr, r)| (z[0] - ctr).norm_sqr() < r * r),
            DomainFamily::Cusp { alpha } => {
                let (x, y) = (z[0].re, z[0].im);
                x > 0.0 && x < 1.0 && y > 0.0 && y < x.powf(*alpha)
            }
            DomainFamily::ExpCusp => {
                let (x, y) = (z[0].re, z[0].im);
                x > 0.0 && x < 1.0 && y > 0.0 && y < (-1.0 / (x * x)).exp()
            }
            DomainFamily::Ball { radius, .. } => norm_sqr(z) < radius * radius,
            DomainFamily::Ellipsoid { radii } => {
                z.iter().zip(radii).map(|(w, a)| w.norm_sqr() / (a * a)).sum::<f64>() < 1.0
            }
            DomainFamily::HalfBall { .. } => norm_sqr(z) < 1.0 && z[0].re > 0.0,
            DomainFamily::Box { .. } => z.iter().all(|w| w.re > 0.0 && w.re < 1.0 && w.im > 0.0 && w.im < 1.0),
            DomainFamily::Polydisk { .. } => z.iter().all(|w| w.norm_sqr() < 1.0),
            DomainFamily::ConvexHull { .. } => self.hull_margin(z[0]) > 0.0,
            DomainFamily::StrictlyPsh { rho } => self.in_bbox(z) && rho.rho(z) < 0.0,
        }
    }

    /// Minimum over hull edges of the signed distance (positive inside).
    fn hull_margin(&self, p: C64) -> f64 {
        let h = &self.hull;
        (0..h.len())
            .map(|i| {
                let a = h[i];
                let b = h[(i + 1) % h.len()];
                let e = b - a;
                ((e.re) * (p.im - a.im) - (e.im) * (p.re - a.re)) / e.norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Vertices of the planar convex hull in counter-clockwise order.
    pub fn hull_vertices(&self) -> &[C64] {
        &self.hull
    }

    /// Global defining function, when the family has one.
    pub fn defining_fn(&self) -> Option<DefiningFunction> {
        match &self.family {
            DomainFamily::Ball { n, radius } => Some(DefiningFunction::Ball { n: *n, radius: *radius }),
            DomainFamily::Ellipsoid { radii } => Some(DefiningFunction::ellipsoid(radii)),
            DomainFamily::StrictlyPsh { rho } => Some(rho.clone()),
            DomainFamily::Disk { center, radius } if *center == c(0.0, 0.0) => {
                Some(DefiningFunction::Ball { n: 1, radius: *radius })
            }
            _ => None,
        }
    }

    pub fn is_convex(&self) -> bool {
        matches!(
            self.family,
            DomainFamily::Disk { .. }
                | DomainFamily::Ball { .. }
                | DomainFamily::Ellipsoid { .. }
                | DomainFamily::HalfBall { .. }
                | DomainFamily::Box { .. }
                | DomainFamily::Polydisk { .. }
                | DomainFamily::ConvexHull { .. }
        )
    }

    pub fn has_c1_boundary(&self) -> bool {
        matches!(
            self.family,
            DomainFamily::Disk { .. }
                | DomainFamily::Annulus { .. }
                | DomainFamily::DiskUnion { .. }
                | DomainFamily::Ball { .. }
                | DomainFamily::Ellipsoid { .. }
                | DomainFamily::StrictlyPsh { .. }
        )
    }

    pub fn graph_profile(&self) -> Option<GraphProfile> {
        match self.family {
            DomainFamily::Cusp { alpha } => Some(GraphProfile::Power(alpha)),
            DomainFamily::ExpCusp => Some(GraphProfile::ExpInvSquare),
            _ => None,
        }
    }

    pub fn bbox_volume(&self) -> f64 {
        self.bounding_box.iter().map(|(a, b)| b - a).product()
    }

    pub fn diameter(&self) -> f64 {
        match &self.family {
            DomainFamily::Disk { radius, .. } => 2.0 * radius,
            DomainFamily::Annulus { outer, .. } | DomainFamily::Horseshoe { outer, .. } => 2.0 * outer,
            DomainFamily::Ball { radius, .. } => 2.0 * radius,
            DomainFamily::HalfBall { .. } | DomainFamily::Polydisk { .. } => 2.0 * (self.n as f64).sqrt().max(1.0),
            _ => self.bounding_box.iter().map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt(),
        }
    }

    /// Largest distance from `z` to a corner of the bounding box, so that
    /// B(z, reach) ⊇ Ω.
    pub fn reach(&self, z: &[C64]) -> f64 {
        crate::cvec::to_real(z)
            .iter()
            .zip(&self.bounding_box)
            .map(|(x, (lo, hi))| (x - lo).powi(2).max((hi - x).powi(2)))
            .sum::<f64>()
            .sqrt()
    }

    /// Closed-form Lebesgue volume where available.
    pub fn exact_volume(&self) -> Option<f64> {
        match &self.family {
            DomainFamily::Disk { radius, .. } => Some(PI * radius * radius),
            DomainFamily::Annulus { inner, outer, .. } => Some(PI * (outer * outer - inner * inner)),
            DomainFamily::Horseshoe { inner, outer, gap } => {
                Some((PI - gap) * (outer * outer - inner * inner))
            }
            DomainFamily::DiskUnion { disks } => Some(disks.iter().map(|(_, r)| PI * r * r).sum()),
            DomainFamily::Cusp { alpha } => Some(1.0 / (alpha + 1.0)),
            DomainFamily::Ball { n, radius } => Some(unit_ball_volume(2 * n) * radius.powi(2 * *n as i32)),
            DomainFamily::Ellipsoid { radii } => {
                Some(unit_ball_volume(2 * radii.len()) * radii.iter().map(|a| a * a).product::<f64>())
            }
            DomainFamily::HalfBall { n } => Some(0.5 * unit_ball_volume(2 * n)),
            DomainFamily::Box { .. } => Some(1.0),
            DomainFamily::Polydisk { n } => Some(PI.powi(*n as i32)),
            DomainFamily::ConvexHull { .. } => {
                let h = &self.hull;
                let a: f64 = (0..h.len())
                    .map(|i| {
                        let p = h[i];
                        let q = h[(i + 1) % h.len()];
                        p.re * q.im - q.re * p.im
                    })
                    .sum();
                Some(0.5 * a.abs())
            }
            DomainFamily::ExpCusp | DomainFamily::StrictlyPsh { .. } => None,
        }
    }

    /// Distance from an interior point to the complement (exact, or a lower
    /// bound for the ellipsoid). `None` when no cheap bound is available.
    pub fn boundary_distance(&self, z: &[C64]) -> Option<f64> {
        if !self.contains(z) {
            return Some(0.0);
        }
        let d = match &self.family {
            DomainFamily::Disk { center, radius } => radius - (z[0] - center).norm(),
            DomainFamily::Annulus { center, inner, outer } => {
                let r = (z[0] - center).norm();
                (outer - r).min(r - inner)
            }
            DomainFamily::Horseshoe { inner, outer, gap } => {
                let r = z[0].norm();
                let mut d = (outer - r).min(r - inner);
                for s in [1.0, -1.0] {
                    let dir = C64::from_polar(1.0, s * (PI - gap));
                    let t = (z[0].re * dir.re + z[0].im * dir.im).clamp(*inner, *outer);
                    d = d.min((z[0] - dir * t).norm());
                }
                d
            }
            DomainFamily::DiskUnion { disks } => disks
                .iter()
                .map(|(ctr, r)| r - (z[0] - ctr).norm())
                .fold(f64::NEG_INFINITY, f64::max),
            DomainFamily::Ball { radius, .. } => radius - norm(z),
            DomainFamily::Ellipsoid { radii } => {
                let s = z.iter().zip(radii).map(|(w, a)| w.norm_sqr() / (a * a)).sum::<f64>().sqrt();
                let amin = radii.iter().cloned().fold(f64::INFINITY, f64::min);
                (1.0 - s) * amin
            }
            DomainFamily::HalfBall { .. } => (1.0 - norm(z)).min(z[0].re),
            DomainFamily::Box { .. } => z
                .iter()
                .flat_map(|w| [w.re, 1.0 - w.re, w.im, 1.0 - w.im])
                .fold(f64::INFINITY, f64::min),
            DomainFamily::Polydisk { .. } => z.iter().map(|w| 1.0 - w.norm()).fold(f64::INFINITY, f64::min),
            DomainFamily::ConvexHull { .. } => self.hull_margin(z[0]),
            _ => return None,
        };
        Some(d.max(0.0))
    }

    /// Outward unit normal at a boundary point where the boundary is smooth.
    pub fn outward_normal(&self, zeta: &[C64]) -> Option<Point> {
        let unit = |v: Point| {
            let r = norm(&v);
            if r > 0.0 {
                Some(v.into_iter().map(|w| w / r).collect::<Point>())
            } else {
                None
            }
        };
        match &self.family {
            DomainFamily::Disk { center, .. } => unit(vec![zeta[0] - center]),
            DomainFamily::Annulus { center, inner, outer } => {
                let r = (zeta[0] - center).norm();
                let v = zeta[0] - center;
                if (r - outer).abs() <= (r - inner).abs() { unit(vec![v]) } else { unit(vec![-v]) }
            }
            DomainFamily::DiskUnion { disks } => {
                let (ctr, _) = disks
                    .iter()
                    .min_by(|a, b| {
                        ((zeta[0] - a.0).norm() - a.1).abs().partial_cmp(&((zeta[0] - b.0).norm() - b.1).abs()).unwrap()
                    })
                    .unwrap();
                unit(vec![zeta[0] - ctr])
            }
            DomainFamily::Ball { .. } => unit(zeta.to_vec()),
            DomainFamily::Ellipsoid { .. } | DomainFamily::StrictlyPsh { .. } => {
                let df = self.defining_fn()?;
                // real gradient (ρ_x, ρ_y) as the complex number ρ_x + iρ_y = 2 conj(∂ρ)
                unit(df.grad(zeta).iter().map(|g| g.conj() * 2.0).collect())
            }
            DomainFamily::HalfBall { n } => {
                if zeta[0].re.abs() < 1e-12 && norm(zeta) < 1.0 - 1e-12 {
                    let mut v = vec![c(0.0, 0.0); *n];
                    v[0] = c(-1.0, 0.0);
                    Some(v)
                } else if zeta[0].re > 1e-12 {
                    unit(zeta.to_vec())
                } else {
                    None
                }
            }
            DomainFamily::Box { .. } => {
                let faces = box_active_faces(zeta, 1e-12);
                if faces.len() == 1 {
                    let (j, dir) = faces[0];
                    let mut v = vec![c(0.0, 0.0); zeta.len()];
                    v[j] = -dir;
                    Some(v)
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

/// Active faces of the unit box at ζ: (coordinate, inward normal as complex
/// number). Re z_j = 0 → 1, Re z_j = 1 → −1, Im z_j = 0 → i, Im z_j = 1 → −i.
pub fn box_active_faces(zeta: &[C64], tol: f64) -> Vec<(usize, C64)> {
    let mut out = Vec::new();
    for (j, w) in zeta.iter().enumerate() {
        if w.re.abs() <= tol {
            out.push((j, c(1.0, 0.0)));
        }
        if (w.re - 1.0).abs() <= tol {
            out.push((j, c(-1.0, 0.0)));
        }
        if w.im.abs() <= tol {
            out.push((j, c(0.0, 1.0)));
        }
        if (w.im - 1.0).abs() <= tol {
            out.push((j, c(0.0, -1.0)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_implies_bbox() {
        let domains = vec![
            Domain::unit_disk(),
            Domain::cusp(2.0),
            Domain::new(DomainFamily::ExpCusp).unwrap(),
            Domain::unit_ball(2),
            Domain::ellipsoid(&[1.0, 2.0]),
            Domain::new(DomainFamily::HalfBall { n: 2 }).unwrap(),
            Domain::new(DomainFamily::Horseshoe { inner: 0.5, outer: 1.0, gap: 0.5 }).unwrap(),
        ];
        let mut rng = crate::rng::stream_rng(1, 0);
        use rand::Rng;
        for d in &domains {
            for _ in 0..2000 {
                let z: Point = (0..d.n).map(|_| c(rng.random_range(-2.5..2.5), rng.random_range(-2.5..2.5))).collect();
                if d.contains(&z) {
                    assert!(d.in_bbox(&z), "{} member outside bbox", d.family_tag());
                }
            }
        }
    }

    #[test]
    fn defining_function_agrees_with_membership() {
        let mut rng = crate::rng::stream_rng(2, 0);
        use rand::Rng;
        for d in [Domain::unit_ball(2), Domain::ellipsoid(&[1.0, 2.0])] {
            let rho = d.defining_fn().unwrap();
            for _ in 0..5000 {
                let z: Point = d
                    .bounding_box
                    .chunks(2)
                    .map(|b| c(rng.random_range(b[0].0..b[0].1), rng.random_range(b[1].0..b[1].1)))
                    .collect();
                assert_eq!(d.contains(&z), rho.rho(&z) < 0.0);
            }
        }
    }

    #[test]
    fn convex_hull_of_square_points() {
        let d = Domain::new(DomainFamily::ConvexHull {
            points: vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(0.5, 0.5)],
        })
        .unwrap();
        assert_eq!(d.hull_vertices().len(), 4);
        assert!(d.contains(&[c(0.5, 0.2)]));
        assert!(!d.contains(&[c(1.2, 0.2)]));
        assert!((d.exact_volume().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn domain_json_shape() {
        let d = Domain::cusp(2.0);
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["family"], "cusp");
        assert_eq!(v["parameters"]["alpha"], 2.0);
        assert_eq!(v["n"], 1);
        let back: Domain = serde_json::from_value(v).unwrap();
        assert_eq!(back.rebuild().unwrap(), d);
        let ball = serde_json::to_value(Domain::unit_ball(2)).unwrap();
        assert_eq!(ball["bounding_box"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn horseshoe_removes_left_sector() {
        let d = Domain::new(DomainFamily::Horseshoe { inner: 0.5, outer: 1.0, gap: 0.5 }).unwrap();
        assert!(!d.contains(&[c(-0.75, 0.0)]));
        assert!(d.contains(&[c(0.75, 0.0)]));
        assert!(d.contains(&[c(0.0, 0.75)]));
    }
}
