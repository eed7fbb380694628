use serde::{Deserialize, Serialize};

use super::domain::{box_active_faces, Domain, DomainFamily};
use super::sampling::{sample_near, sample_uniform};
use crate::cvec::{c, norm, pair, sub, to_real, Point, C64};
use crate::error::{LabError, Result};

/// A point of ∂Ω together with optional inward real normal data (α_j, β_j).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub zeta: Point,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_data: Option<Vec<(f64, f64)>>,
}

impl BoundaryPoint {
    /// Validates that ζ ∉ Ω and that Ω has points within 10⁻⁶ of ζ.
    pub fn new(domain: &Domain, zeta: Point, seed: u64) -> Result<BoundaryPoint> {
        if zeta.len() != domain.n {
            return Err(LabError::Input(format!("boundary point needs {} coordinates", domain.n)));
        }
        if domain.contains(&zeta) {
            return Err(LabError::Input("boundary point lies inside the domain".into()));
        }
        if !touches(domain, &zeta, seed) {
            return Err(LabError::Input("point is not on the boundary (no domain points within 1e-6)".into()));
        }
        Ok(BoundaryPoint { zeta, normal_data: None })
    }

    /// Skips validation; for points known analytically to lie on ∂Ω.
    pub fn trusted(zeta: Point) -> BoundaryPoint {
        BoundaryPoint { zeta, normal_data: None }
    }
}

fn touches(domain: &Domain, zeta: &[C64], seed: u64) -> bool {
    const R: f64 = 1e-6;
    // deterministic candidates first: inward normal steps and graph midlines
    if let Some(nu) = domain.outward_normal(zeta) {
        for k in 1..12 {
            let t = R * 0.5f64.powi(k);
            let z: Point = zeta.iter().zip(&nu).map(|(a, b)| a - b * t).collect();
            if domain.contains(&z) {
                return true;
            }
        }
    }
    if let Some(profile) = domain.graph_profile() {
        for k in 20..200 {
            let x = zeta[0].re + 0.5f64.powi(k) * if zeta[0].re >= 1.0 { -1.0 } else { 1.0 };
            let y = if zeta[0].im <= 0.0 { 0.5 * profile.log_height(x).exp() } else { zeta[0].im * (1.0 - 1e-9) };
            let z = [c(x, y)];
            if domain.contains(&z) && (z[0] - zeta[0]).norm() < R {
                return true;
            }
        }
    }
    sample_near(domain, &to_real(zeta), R, 1, seed).is_ok()
}

/// Moves a point onto {ρ = 0} by bisection along the gradient direction.
pub fn project_to_boundary(domain: &Domain, seed_point: &[C64]) -> Result<BoundaryPoint> {
    let df = domain
        .defining_fn()
        .ok_or_else(|| LabError::UnsupportedFamily(format!("{} has no defining function", domain.family_tag())))?;
    let g = df.grad(seed_point);
    let v: Point = g.iter().map(|x| x.conj() * 2.0).collect();
    let nv = norm(&v);
    if nv == 0.0 {
        return Err(LabError::DegenerateGradient);
    }
    let v: Point = v.iter().map(|x| x / nv).collect();
    let at = |t: f64| -> Point { seed_point.iter().zip(&v).map(|(a, b)| a + b * t).collect() };
    let r0 = df.rho(seed_point);
    let dir = if r0 < 0.0 { 1.0 } else { -1.0 };
    let mut step = 1e-3 * domain.diameter();
    let mut far = dir * step;
    let mut guard = 0;
    while (df.rho(&at(far)) < 0.0) == (r0 < 0.0) {
        step *= 2.0;
        far = dir * step;
        guard += 1;
        if guard > 60 {
            return Err(LabError::Domain("no sign change of the defining function along the gradient".into()));
        }
    }
    let (mut lo, mut hi) = (0.0, far);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (df.rho(&at(mid)) < 0.0) == (r0 < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // the outside end of the bracket, so that ζ ∉ Ω
    let t = if r0 < 0.0 { hi } else { lo };
    Ok(BoundaryPoint::trusted(at(t)))
}

#[derive(Debug, Clone, Serialize)]
pub struct SupportReport {
    /// Unit-norm coefficients c with Re Σ c_j(z_j − ζ_j) > 0 on Ω.
    pub coeffs: Vec<C64>,
    pub method: String,
    pub samples: usize,
    pub min_margin: f64,
}

fn unit(v: Vec<C64>) -> Vec<C64> {
    let r = norm(&v);
    v.into_iter().map(|x| x / r).collect()
}

/// Projected-gradient ascent of min_z Re Σ c_j(z_j − ζ_j) over |c| = 1.
fn margin_maximizer(pts: &[Point], zeta: &[C64], init: Vec<C64>) -> Vec<C64> {
    let diffs: Vec<Point> = pts.iter().map(|z| sub(z, zeta)).collect();
    let mut cvec = unit(init);
    let margin = |cv: &[C64]| -> (f64, usize) {
        diffs
            .iter()
            .enumerate()
            .map(|(i, w)| (pair(cv, w).re / norm(w).max(1e-300), i))
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
            .unwrap()
    };
    let mut best = cvec.clone();
    let mut best_m = margin(&cvec).0;
    for it in 0..500 {
        let (_, i) = margin(&cvec);
        let w = &diffs[i];
        let nw = norm(w).max(1e-300);
        let eta = 0.5 / (1.0 + it as f64).sqrt();
        cvec = unit(cvec.iter().zip(w).map(|(a, b)| a + b.conj() * (eta / nw)).collect());
        let m = margin(&cvec).0;
        if m > best_m {
            best_m = m;
            best = cvec.clone();
        }
    }
    best
}

fn candidate_coeffs(domain: &Domain, zeta: &[C64], seed: u64) -> Result<(Vec<C64>, &'static str)> {
    let tol = 1e-9;
    let gradient_recipe = |d: &Domain| -> Result<Vec<C64>> {
        let df = d.defining_fn().ok_or_else(|| LabError::UnsupportedFamily(d.family_tag().into()))?;
        let g = df.grad(zeta);
        if norm(&g) == 0.0 {
            return Err(LabError::DegenerateGradient);
        }
        Ok(unit(g.iter().map(|x| -x * 2.0).collect()))
    };
    let hull_samples = |init: Vec<C64>| -> Result<Vec<C64>> {
        let s = sample_uniform(domain, 2000, seed ^ 0x5eed)?;
        let mut pts = s.points;
        if let DomainFamily::ConvexHull { .. } = domain.family {
            pts.extend(domain.hull_vertices().iter().filter(|v| (**v - zeta[0]).norm() > tol).map(|v| vec![*v]));
        }
        Ok(margin_maximizer(&pts, zeta, init))
    };
    match &domain.family {
        DomainFamily::Disk { center, .. } => Ok((vec![-(zeta[0] - center).conj() / (zeta[0] - center).norm()], "gradient")),
        DomainFamily::Ball { .. } | DomainFamily::Ellipsoid { .. } | DomainFamily::StrictlyPsh { .. } => {
            Ok((gradient_recipe(domain)?, "gradient"))
        }
        DomainFamily::HalfBall { n } => {
            let flat = zeta[0].re.abs() <= tol;
            let sphere = (norm(zeta) - 1.0).abs() <= tol;
            if flat && !sphere {
                let mut v = vec![c(0.0, 0.0); *n];
                v[0] = c(1.0, 0.0);
                Ok((v, "active-face"))
            } else if sphere && !flat {
                Ok((unit(zeta.iter().map(|x| -x.conj()).collect()), "gradient"))
            } else {
                let mut v: Vec<C64> = zeta.iter().map(|x| -x.conj()).collect();
                v[0] += c(1.0, 0.0);
                Ok((hull_samples(v)?, "margin-maximizer"))
            }
        }
        DomainFamily::Box { n } => {
            let faces = box_active_faces(zeta, tol);
            if faces.is_empty() {
                return Err(LabError::UnsupportedBoundaryPoint("point is not on a face of the box".into()));
            }
            let mut v = vec![c(0.0, 0.0); *n];
            for (j, nu) in &faces {
                v[*j] += nu.conj();
            }
            if faces.len() == 1 {
                Ok((unit(v), "active-face"))
            } else {
                Ok((hull_samples(v)?, "margin-maximizer"))
            }
        }
        DomainFamily::Polydisk { n } => {
            let active: Vec<usize> = (0..*n).filter(|j| (zeta[*j].norm() - 1.0).abs() <= tol).collect();
            if active.is_empty() {
                return Err(LabError::UnsupportedBoundaryPoint("no coordinate on the unit circle".into()));
            }
            let mut v = vec![c(0.0, 0.0); *n];
            for j in &active {
                v[*j] = -zeta[*j].conj();
            }
            Ok((unit(v), if active.len() == 1 { "active-face" } else { "face-sum" }))
        }
        DomainFamily::ConvexHull { .. } => {
            let h = domain.hull_vertices();
            let m = h.iter().sum::<C64>() / h.len() as f64;
            Ok((hull_samples(vec![(m - zeta[0]).conj()])?, "margin-maximizer"))
        }
        _ => Err(LabError::UnsupportedFamily(format!("{} is not convex", domain.family_tag()))),
    }
}

/// Supporting functional at ζ, verified on 10⁵ uniform samples.
pub fn supporting_functional(domain: &Domain, zeta: &BoundaryPoint, seed: u64) -> Result<SupportReport> {
    let (coeffs, method) = candidate_coeffs(domain, &zeta.zeta, seed)?;
    let samples = 100_000;
    let s = sample_uniform(domain, samples, seed)?;
    let mut min_margin = f64::INFINITY;
    for z in &s.points {
        let m = pair(&coeffs, &sub(z, &zeta.zeta)).re;
        if m <= 0.0 {
            return Err(LabError::NotSupporting { witness: z.clone() });
        }
        min_margin = min_margin.min(m);
    }
    Ok(SupportReport { coeffs, method: method.into(), samples, min_margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levi::DefiningFunction;

    fn assert_parallel(a: &[C64], b: &[C64]) {
        let ip: C64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
        assert!((ip.re - norm(a) * norm(b)).abs() < 1e-9, "{a:?} vs {b:?}");
    }

    #[test]
    fn disk_support_at_one() {
        let d = Domain::unit_disk();
        let r = supporting_functional(&d, &BoundaryPoint::new(&d, vec![c(1.0, 0.0)], 0).unwrap(), 1).unwrap();
        assert_parallel(&r.coeffs, &[c(-1.0, 0.0)]);
    }

    #[test]
    fn ball_support_is_conjugate_normal() {
        let d = Domain::unit_ball(2);
        let r = supporting_functional(&d, &BoundaryPoint::trusted(vec![c(1.0, 0.0), c(0.0, 0.0)]), 2).unwrap();
        assert_parallel(&r.coeffs, &[c(-1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn box_face_with_zero_imaginary_part() {
        let d = Domain::new(DomainFamily::Box { n: 2 }).unwrap();
        let zeta = vec![c(0.5, 0.0), c(0.5, 0.5)];
        let r = supporting_functional(&d, &BoundaryPoint::trusted(zeta), 3).unwrap();
        assert_parallel(&r.coeffs, &[c(0.0, -1.0), c(0.0, 0.0)]);
    }

    #[test]
    fn box_corner_uses_margin_maximizer() {
        let d = Domain::unit_square();
        let r = supporting_functional(&d, &BoundaryPoint::trusted(vec![c(0.0, 0.0)]), 3).unwrap();
        assert_eq!(r.method, "margin-maximizer");
        assert!(r.min_margin > 0.0);
    }

    #[test]
    fn convex_hull_edge_point() {
        let d = Domain::new(DomainFamily::ConvexHull {
            points: vec![c(0.0, 0.0), c(2.0, 0.0), c(1.0, 1.5)],
        })
        .unwrap();
        let r = supporting_functional(&d, &BoundaryPoint::trusted(vec![c(1.0, 0.0)]), 4).unwrap();
        assert_parallel(&r.coeffs, &[c(0.0, -1.0)]);
    }

    #[test]
    fn doubling_rho_keeps_direction() {
        let a = Domain::new(DomainFamily::StrictlyPsh { rho: DefiningFunction::ellipsoid(&[1.0, 2.0]) }).unwrap();
        let b = Domain::new(DomainFamily::StrictlyPsh { rho: DefiningFunction::ellipsoid(&[1.0, 2.0]).scaled(2.0) })
            .unwrap();
        let zeta = project_to_boundary(&a, &[c(0.3, 0.2), c(0.5, -0.4)]).unwrap();
        let ra = supporting_functional(&a, &zeta, 5).unwrap();
        let rb = supporting_functional(&b, &zeta, 5).unwrap();
        assert_parallel(&ra.coeffs, &rb.coeffs);
    }

    #[test]
    fn non_convex_family_is_rejected() {
        let d = Domain::cusp(2.0);
        let e = supporting_functional(&d, &BoundaryPoint::trusted(vec![c(0.0, 0.0)]), 1).unwrap_err();
        assert_eq!(e.code(), "unsupported-family");
    }

    #[test]
    fn projection_lands_on_the_sphere() {
        let d = Domain::unit_ball(2);
        let p = project_to_boundary(&d, &[c(0.2, 0.1), c(0.3, 0.0)]).unwrap();
        assert!((norm(&p.zeta) - 1.0).abs() < 1e-12);
        assert!(!d.contains(&p.zeta));
    }
}
