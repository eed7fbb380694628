//! Explicit singular kernels with branch-correct logarithms and powers.

mod branch;
mod combination;
mod threshold;

pub use branch::{cauchy_riemann_residual, Continuation};
pub use combination::Combination;
pub use threshold::{theoretical_threshold, Threshold};

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cvec::{c, dist, norm, pair, sub, LogComplex, Point, C64};
use crate::error::{LabError, Result};
use crate::geometry::{
    box_active_faces, sample_uniform, supporting_functional, BoundaryPoint, Domain, DomainFamily, GraphProfile, Probe,
};
use crate::levi::{compute_beta, levi_polynomial_with, DefiningFunction};
use crate::linalg::complex_spectral_norm;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum KernelFamily {
    PlanarPole,
    PlanarLog,
    PlanarPower { q: f64 },
    CuspMonomial { alpha: f64, q: f64 },
    CuspInversePower {
        #[serde(rename = "N")]
        n: u32,
    },
    BallPole,
    BallLog,
    BallPower { q: f64 },
    ConvexPole,
    ConvexLog,
    ConvexPower { q: f64 },
    LeviPole,
    LeviLog,
    LeviPower { q: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Pole,
    Log,
    Power,
}

impl KernelFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            KernelFamily::PlanarPole => "planar-pole",
            KernelFamily::PlanarLog => "planar-log",
            KernelFamily::PlanarPower { .. } => "planar-power",
            KernelFamily::CuspMonomial { .. } => "cusp-monomial",
            KernelFamily::CuspInversePower { .. } => "cusp-inverse-power",
            KernelFamily::BallPole => "ball-pole",
            KernelFamily::BallLog => "ball-log",
            KernelFamily::BallPower { .. } => "ball-power",
            KernelFamily::ConvexPole => "convex-pole",
            KernelFamily::ConvexLog => "convex-log",
            KernelFamily::ConvexPower { .. } => "convex-power",
            KernelFamily::LeviPole => "levi-pole",
            KernelFamily::LeviLog => "levi-log",
            KernelFamily::LeviPower { .. } => "levi-power",
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            KernelFamily::PlanarPole | KernelFamily::BallPole | KernelFamily::ConvexPole | KernelFamily::LeviPole => {
                Shape::Pole
            }
            KernelFamily::PlanarLog | KernelFamily::BallLog | KernelFamily::ConvexLog | KernelFamily::LeviLog => {
                Shape::Log
            }
            _ => Shape::Power,
        }
    }

    fn is_planar(&self) -> bool {
        matches!(self, KernelFamily::PlanarPole | KernelFamily::PlanarLog | KernelFamily::PlanarPower { .. })
    }

    fn is_cusp(&self) -> bool {
        matches!(self, KernelFamily::CuspMonomial { .. } | KernelFamily::CuspInversePower { .. })
    }

    fn is_ball(&self) -> bool {
        matches!(self, KernelFamily::BallPole | KernelFamily::BallLog | KernelFamily::BallPower { .. })
    }

    fn is_convex(&self) -> bool {
        matches!(self, KernelFamily::ConvexPole | KernelFamily::ConvexLog | KernelFamily::ConvexPower { .. })
    }

    fn is_levi(&self) -> bool {
        matches!(self, KernelFamily::LeviPole | KernelFamily::LeviLog | KernelFamily::LeviPower { .. })
    }
}

/// Serializable kernel description: family parameters, ζ, optional anchor
/// and optional base point for path continuation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    #[serde(flatten)]
    pub family: KernelFamily,
    pub zeta: Point,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<C64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<C64>,
}

impl KernelSpec {
    pub fn new(family: KernelFamily, zeta: Point) -> KernelSpec {
        KernelSpec { family, zeta, anchor: None, base: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BranchCertificate {
    /// Rational kernel, no branch involved.
    NotNeeded,
    /// Principal logarithm valid on Ω; `samples` = 0 means an analytic argument.
    Principal { method: String, samples: usize },
    /// Values obtained by integrating the log-derivative from `base`.
    PathContinued { base: C64, value: C64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeviPatch {
    pub beta: f64,
    pub epsilon: f64,
    pub grad: Vec<C64>,
    pub hol_hessian: Vec<C64>,
    /// Spectral norm of the holomorphic Hessian.
    pub hol_norm: f64,
}

/// Region containing {z ∈ Ω : |D(z)| < L}, used to sample level shells.
#[derive(Debug, Clone, PartialEq)]
pub enum ShellProposal {
    /// ζ + u·e + w⊥ with |u| < u_radius (complex u) and |w⊥| < perp_radius
    /// in the real orthogonal complement of span(e, ie).
    Slab { center: Point, e: Point, u_radius: f64, perp_radius: f64 },
    /// Planar graph domain: 0 < x < x_max, 0 < y < h(x).
    Graph { profile: GraphProfile, x_max: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularKernel {
    #[serde(flatten)]
    pub spec: KernelSpec,
    pub anchor: Option<C64>,
    pub coeffs: Option<Vec<C64>>,
    pub levi: Option<LeviPatch>,
    pub certificate: BranchCertificate,
    /// Power s with |f| ≍ |D|^{−s}; 0 for logarithmic kernels.
    pub exponent: f64,
    #[serde(skip)]
    domain: Arc<Domain>,
    /// −κ·∂ρ(ζ) relation of the coefficients with the domain's quadratic
    /// defining function: (κ, m) so that |w|² < 2|D|/(κ m) on Ω.
    #[serde(skip)]
    quadratic_bound: Option<(f64, f64)>,
}

/// Anchor a = ζ + t·ν outside Ω̄ with [ζ, a] ∩ Ω = ∅, t halved from
/// 0.1 × diameter until 10³ segment points miss Ω.
pub fn default_anchor(domain: &Domain, zeta: C64) -> Result<C64> {
    let nu = match domain.outward_normal(&[zeta]) {
        Some(v) => v[0],
        None => {
            let ctr = c(
                0.5 * (domain.bounding_box[0].0 + domain.bounding_box[0].1),
                0.5 * (domain.bounding_box[1].0 + domain.bounding_box[1].1),
            );
            let v = zeta - ctr;
            if v.norm() == 0.0 {
                return Err(LabError::Domain("cannot choose an anchor direction".into()));
            }
            v / v.norm()
        }
    };
    let mut t = 0.1 * domain.diameter();
    for _ in 0..40 {
        let a = zeta + nu * t;
        let clear = (1..=1000).all(|j| !domain.contains(&[zeta + nu * (t * j as f64 / 1000.0)]));
        if clear {
            return Ok(a);
        }
        t *= 0.5;
    }
    Err(LabError::Domain("no anchor segment outside the domain".into()))
}

fn wrap_arg(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    } else if y <= -PI {
        y += 2.0 * PI;
    }
    y
}

impl SingularKernel {
    pub fn new(spec: KernelSpec, domain: Arc<Domain>, seed: u64) -> Result<SingularKernel> {
        let n = domain.n;
        let fam = spec.family;
        if spec.zeta.len() != n {
            return Err(LabError::Input(format!("zeta needs {n} coordinates")));
        }
        match fam {
            KernelFamily::PlanarPower { q } | KernelFamily::BallPower { q } | KernelFamily::ConvexPower { q }
            | KernelFamily::LeviPower { q } => {
                if q <= 0.0 {
                    return Err(LabError::Input("q must be positive".into()));
                }
            }
            KernelFamily::CuspMonomial { alpha, q } => {
                if q <= 0.0 || alpha < 1.0 {
                    return Err(LabError::Input("cusp monomial needs alpha >= 1 and q > 0".into()));
                }
            }
            _ => {}
        }
        let mut k = SingularKernel {
            spec: spec.clone(),
            anchor: None,
            coeffs: None,
            levi: None,
            certificate: BranchCertificate::NotNeeded,
            exponent: 0.0,
            domain: domain.clone(),
            quadratic_bound: None,
        };
        if fam.is_planar() {
            if n != 1 {
                return Err(LabError::UnsupportedFamily(format!("{} needs a planar domain", fam.tag())));
            }
            BoundaryPoint::new(&domain, spec.zeta.clone(), seed)?;
            if fam != KernelFamily::PlanarPole {
                let a = match spec.anchor {
                    Some(a) => a,
                    None => default_anchor(&domain, spec.zeta[0])?,
                };
                if domain.contains(&[a]) {
                    return Err(LabError::Input("anchor must lie outside the domain".into()));
                }
                k.anchor = Some(a);
                k.certificate = k.certify_planar(spec.base, seed)?;
            }
        } else if fam.is_cusp() {
            if domain.graph_profile().is_none() {
                return Err(LabError::UnsupportedFamily(format!("{} needs a cusp domain", fam.tag())));
            }
            if spec.zeta[0].norm() != 0.0 {
                return Err(LabError::UnsupportedBoundaryPoint("cusp kernels are singular at 0 only".into()));
            }
            k.certificate = match fam {
                KernelFamily::CuspMonomial { .. } => {
                    BranchCertificate::Principal { method: "first-quadrant".into(), samples: 0 }
                }
                _ => BranchCertificate::NotNeeded,
            };
        } else if fam.is_ball() {
            let radius = match domain.family {
                DomainFamily::Ball { radius, .. } => radius,
                DomainFamily::Disk { center, radius } if center == c(0.0, 0.0) => radius,
                _ => return Err(LabError::UnsupportedFamily(format!("{} needs a ball", fam.tag()))),
            };
            if (norm(&spec.zeta) - radius).abs() > 1e-12 * radius {
                return Err(LabError::Input("zeta must lie on the sphere".into()));
            }
            let r2 = radius * radius;
            k.coeffs = Some(spec.zeta.iter().map(|z| -z.conj() / r2).collect());
            k.quadratic_bound = Some((1.0 / r2, 1.0));
            if fam.shape() != Shape::Pole {
                k.certificate = BranchCertificate::Principal { method: "re-denominator-positive".into(), samples: 0 };
            }
        } else if fam.is_convex() {
            let active = match domain.family {
                DomainFamily::Box { .. } => box_active_faces(&spec.zeta, 1e-12).len(),
                DomainFamily::Polydisk { .. } => spec.zeta.iter().filter(|w| (w.norm() - 1.0).abs() <= 1e-12).count(),
                _ => 1,
            };
            if active != 1 {
                return Err(LabError::UnsupportedBoundaryPoint(format!("{active} active faces at zeta")));
            }
            let bp = BoundaryPoint::trusted(spec.zeta.clone());
            let rep = supporting_functional(&domain, &bp, seed)?;
            let smooth = match &domain.family {
                DomainFamily::Ball { .. } | DomainFamily::Ellipsoid { .. } => domain.defining_fn(),
                DomainFamily::Disk { center, .. } if *center == c(0.0, 0.0) => domain.defining_fn(),
                _ => None,
            };
            match smooth {
                Some(df) => {
                    // c = −∂ρ(ζ): for the ellipsoid this is the ball pole at w = z/a
                    let g = df.grad(&spec.zeta);
                    let radius2 = match &df {
                        DefiningFunction::Ball { radius, .. } => radius * radius,
                        _ => 1.0,
                    };
                    let m = df.quadratic_convexity().unwrap_or(0.0);
                    k.coeffs = Some(g.iter().map(|v| -v / radius2).collect());
                    if m > 0.0 {
                        k.quadratic_bound = Some((1.0 / radius2, m));
                    }
                }
                None => k.coeffs = Some(rep.coeffs.clone()),
            }
            if fam.shape() != Shape::Pole {
                k.certificate =
                    BranchCertificate::Principal { method: "support-inequality".into(), samples: rep.samples };
            }
        } else if fam.is_levi() {
            let df = domain
                .defining_fn()
                .ok_or_else(|| LabError::UnsupportedFamily(format!("{} needs a defining function", fam.tag())))?;
            if df.rho(&spec.zeta).abs() > 1e-9 {
                return Err(LabError::Input("zeta must satisfy rho(zeta) = 0".into()));
            }
            let data = compute_beta(&df, &domain, 64, seed)?;
            let g = df.grad(&spec.zeta);
            let h = df.hol_hessian(&spec.zeta);
            k.coeffs = Some(g.iter().map(|v| -v * 2.0).collect());
            k.levi = Some(LeviPatch {
                beta: data.beta,
                epsilon: data.epsilon,
                hol_norm: complex_spectral_norm(&h, n),
                grad: g,
                hol_hessian: h,
            });
            if fam.shape() != Shape::Pole {
                k.certificate = BranchCertificate::Principal { method: "coercivity".into(), samples: 0 };
            }
        }
        k.exponent = k.compute_exponent();
        Ok(k)
    }

    /// Kernel of `family` at `zeta` with default anchor and branch handling.
    pub fn build(family: KernelFamily, domain: &Arc<Domain>, zeta: Point, seed: u64) -> Result<SingularKernel> {
        SingularKernel::new(KernelSpec::new(family, zeta), domain.clone(), seed)
    }

    fn certify_planar(&self, base: Option<C64>, seed: u64) -> Result<BranchCertificate> {
        let a = self.anchor.unwrap();
        let zeta = self.spec.zeta[0];
        if let Some(b) = base {
            if !self.domain.contains(&[b]) {
                return Err(LabError::Input("branch base must lie in the domain".into()));
            }
            return Ok(BranchCertificate::PathContinued { base: b, value: ((b - a) / (b - zeta)).ln() });
        }
        let samples = 100_000;
        let s = sample_uniform(&self.domain, samples, seed ^ 0xb4a2c4)?;
        let bad = s.points.iter().find(|z| ((z[0] - a) / (z[0] - zeta)).re <= 0.0);
        match bad {
            None => Ok(BranchCertificate::Principal { method: "sampled-half-plane".into(), samples }),
            Some(_) => {
                let b = s.points[0][0];
                Ok(BranchCertificate::PathContinued { base: b, value: ((b - a) / (b - zeta)).ln() })
            }
        }
    }

    fn compute_exponent(&self) -> f64 {
        let n = self.domain.n as f64;
        match self.spec.family {
            KernelFamily::PlanarPole | KernelFamily::BallPole | KernelFamily::ConvexPole | KernelFamily::LeviPole => 1.0,
            KernelFamily::PlanarLog | KernelFamily::BallLog | KernelFamily::ConvexLog | KernelFamily::LeviLog => 0.0,
            KernelFamily::PlanarPower { q } => 2.0 / q,
            KernelFamily::CuspMonomial { alpha, q } => (alpha + 1.0) / q,
            KernelFamily::CuspInversePower { n } => n as f64,
            KernelFamily::BallPower { q } | KernelFamily::ConvexPower { q } | KernelFamily::LeviPower { q } => {
                (n + 1.0) / q
            }
        }
    }

    pub fn family(&self) -> KernelFamily {
        self.spec.family
    }

    pub fn zeta(&self) -> &[C64] {
        &self.spec.zeta
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn label(&self) -> String {
        format!("{}@{:?}", self.spec.family.tag(), self.spec.zeta.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>())
    }

    /// Denominator D(z), whose zero set on Ω̄ is {ζ}.
    pub fn denominator(&self, z: &[C64]) -> C64 {
        let fam = self.spec.family;
        if fam.is_planar() {
            z[0] - self.spec.zeta[0]
        } else if fam.is_cusp() {
            z[0]
        } else if fam.is_levi() {
            let l = self.levi.as_ref().unwrap();
            levi_polynomial_with(&l.grad, &l.hol_hessian, &sub(z, &self.spec.zeta))
        } else {
            let cv = self.coeffs.as_ref().unwrap();
            pair(cv, &sub(z, &self.spec.zeta))
        }
    }

    /// Coefficients c of the linear part D ≈ Σ c_j (z_j − ζ_j) near ζ.
    pub fn linear_coeffs(&self) -> Vec<C64> {
        match &self.coeffs {
            Some(cv) => cv.clone(),
            None => vec![c(1.0, 0.0)],
        }
    }

    fn log_ratio_principal(&self, z: C64) -> Result<C64> {
        let a = self.anchor.unwrap();
        let r = (z - a) / (z - self.spec.zeta[0]);
        if r.re <= 0.0 {
            return Err(LabError::BranchViolation { witness: vec![z], re_arg: r.re });
        }
        Ok(r.ln())
    }

    /// g_ζ(z) for the planar log families, honouring the certificate.
    fn planar_log(&self, z: C64) -> Result<C64> {
        match &self.certificate {
            BranchCertificate::PathContinued { base, .. } => {
                Ok(self.continue_along(&[*base, z])?.value)
            }
            _ => self.log_ratio_principal(z),
        }
    }

    fn log_denominator(&self, z: &[C64]) -> Result<C64> {
        let d = self.denominator(z);
        // Re D = 0 is allowed on ∂Ω away from ζ
        if d.re < 0.0 || d == c(0.0, 0.0) {
            return Err(LabError::BranchViolation { witness: z.to_vec(), re_arg: d.re });
        }
        Ok(d.ln())
    }

    /// Kernel value at z ∈ Ω.
    pub fn eval(&self, z: &[C64]) -> Result<C64> {
        if z.len() != self.domain.n || !self.domain.contains(z) {
            return Err(LabError::OutsideDomain);
        }
        if let Some(l) = &self.levi {
            if dist(z, &self.spec.zeta) >= l.epsilon {
                return Err(LabError::OutsideLocalPatch { radius: l.epsilon });
            }
        }
        self.eval_unchecked(z)
    }

    /// Kernel value without the membership and patch checks.
    pub fn eval_unchecked(&self, z: &[C64]) -> Result<C64> {
        let fam = self.spec.family;
        Ok(match fam {
            KernelFamily::PlanarPole => 1.0 / (z[0] - self.spec.zeta[0]),
            KernelFamily::PlanarLog => self.planar_log(z[0])?,
            KernelFamily::PlanarPower { q } => (self.planar_log(z[0])? * (2.0 / q)).exp(),
            KernelFamily::CuspMonomial { .. } => {
                if z[0].re <= 0.0 {
                    return Err(LabError::BranchViolation { witness: z.to_vec(), re_arg: z[0].re });
                }
                (-z[0].ln() * self.exponent).exp()
            }
            KernelFamily::CuspInversePower { n } => 1.0 / z[0].powi(n as i32),
            _ => match fam.shape() {
                Shape::Pole => 1.0 / self.denominator(z),
                Shape::Log => -self.log_denominator(z)?,
                Shape::Power => (-self.log_denominator(z)? * self.exponent).exp(),
            },
        })
    }

    /// exp(g) − (z − a)/(z − ζ) for the planar log families.
    pub fn log_residual(&self, z: &[C64]) -> Result<f64> {
        let a = self.anchor.ok_or_else(|| LabError::UnsupportedFamily("kernel has no anchor".into()))?;
        let g = self.planar_log(z[0])?;
        Ok((g.exp() - (z[0] - a) / (z[0] - self.spec.zeta[0])).norm())
    }

    /// Value at a probe point z = base + e^{s}·dir, in log-polar form. When
    /// the base is ζ and the offset is below `f64` resolution the value is
    /// computed from log D = s + Log(c·dir).
    pub fn eval_probe(&self, probe: &Probe) -> Result<LogComplex> {
        let at_zeta = dist(&probe.base, &self.spec.zeta) <= 1e-14 * norm(&self.spec.zeta).max(1.0);
        if !at_zeta || probe.representable() {
            return Ok(LogComplex::from_c64(self.eval_unchecked(&probe.point())?));
        }
        let cd = pair(&self.linear_coeffs(), &probe.dir);
        if cd.norm() == 0.0 {
            return Err(LabError::Input("probe direction is tangent to the level set".into()));
        }
        let log_d = c(probe.log_scale + cd.norm().ln(), cd.arg());
        let fam = self.spec.family;
        let s = self.exponent;
        Ok(match fam {
            KernelFamily::PlanarLog | KernelFamily::PlanarPower { .. } => {
                if let BranchCertificate::PathContinued { .. } = self.certificate {
                    return Err(LabError::UnsupportedFamily("extended probes need a principal branch".into()));
                }
                let za = self.spec.zeta[0] - self.anchor.unwrap();
                let g = c(za.norm().ln() - log_d.re, wrap_arg(za.arg() - log_d.im));
                match fam {
                    KernelFamily::PlanarLog => LogComplex::from_c64(g),
                    KernelFamily::PlanarPower { q } => LogComplex { log_abs: 2.0 / q * g.re, arg: 2.0 / q * g.im },
                    _ => unreachable!(),
                }
            }
            _ => match fam.shape() {
                Shape::Pole => LogComplex { log_abs: -log_d.re, arg: -log_d.im },
                Shape::Log => LogComplex::from_c64(-log_d),
                Shape::Power => LogComplex { log_abs: -s * log_d.re, arg: -s * log_d.im },
            },
        })
    }

    /// Region containing {z ∈ Ω : |D(z)| < level}.
    pub fn shell_proposal(&self, level: f64) -> ShellProposal {
        let fam = self.spec.family;
        if fam.is_cusp() {
            return ShellProposal::Graph { profile: self.domain.graph_profile().unwrap(), x_max: level.min(1.0) };
        }
        let zeta = &self.spec.zeta;
        let reach = self.domain.reach(zeta);
        let cv = self.linear_coeffs();
        let cn = norm(&cv);
        let e: Point = cv.iter().map(|v| v.conj() / cn).collect();
        let (u_radius, perp_radius) = if let Some(l) = &self.levi {
            // Re F ≥ β|w|² on Ω ∩ B(ζ, ε), and |c·w| ≤ |F| + ‖S‖|w|²
            let r = (level / l.beta).sqrt();
            ((level * (1.0 + l.hol_norm / l.beta) / cn).min(r), r.min(l.epsilon))
        } else if let Some((kappa, m)) = self.quadratic_bound {
            let r = (2.0 * level / (kappa * m)).sqrt();
            ((level / cn).min(r), r)
        } else {
            (level / cn, reach)
        };
        ShellProposal::Slab { center: zeta.clone(), e, u_radius: u_radius.min(reach), perp_radius: perp_radius.min(reach) }
    }

    /// Points where the kernel is evaluated must also satisfy this (the
    /// local patch for Levi kernels).
    pub fn in_patch(&self, z: &[C64]) -> bool {
        match &self.levi {
            Some(l) => dist(z, &self.spec.zeta) < l.epsilon,
            None => true,
        }
    }

    pub fn has_log(&self) -> bool {
        self.spec.family.shape() == Shape::Log
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk() -> Arc<Domain> {
        Arc::new(Domain::unit_disk())
    }

    #[test]
    fn planar_pole_at_origin() {
        let k = SingularKernel::build(KernelFamily::PlanarPole, &disk(), vec![c(1.0, 0.0)], 1).unwrap();
        assert_eq!(k.eval(&[c(0.0, 0.0)]).unwrap(), c(-1.0, 0.0));
        assert_eq!(k.eval(&[c(2.0, 0.0)]).unwrap_err().code(), "outside-domain");
    }

    #[test]
    fn ball_pole_at_origin() {
        let d = Arc::new(Domain::unit_ball(2));
        let k = SingularKernel::build(KernelFamily::BallPole, &d, vec![c(1.0, 0.0), c(0.0, 0.0)], 1).unwrap();
        assert_eq!(k.eval(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn planar_log_with_explicit_anchor() {
        let mut spec = KernelSpec::new(KernelFamily::PlanarLog, vec![c(1.0, 0.0)]);
        spec.anchor = Some(c(2.0, 0.0));
        let k = SingularKernel::new(spec, disk(), 1).unwrap();
        let v = k.eval(&[c(0.0, 0.0)]).unwrap();
        assert!((v - c(std::f64::consts::LN_2, 0.0)).norm() < 1e-15);
        assert!(matches!(k.certificate, BranchCertificate::Principal { .. }));
    }

    #[test]
    fn default_anchor_is_radial_offset() {
        let a = default_anchor(&Domain::unit_disk(), c(1.0, 0.0)).unwrap();
        assert!((a - c(1.2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn denominator_exponents() {
        let d = Arc::new(Domain::unit_ball(2));
        let k = SingularKernel::build(KernelFamily::BallPower { q: 2.0 }, &d, vec![c(1.0, 0.0), c(0.0, 0.0)], 1).unwrap();
        assert_eq!(k.exponent, 1.5);
        let cusp = Arc::new(Domain::cusp(2.0));
        let k = SingularKernel::build(KernelFamily::CuspMonomial { alpha: 2.0, q: 3.0 }, &cusp, vec![c(0.0, 0.0)], 1)
            .unwrap();
        assert_eq!(k.exponent, 1.0);
        let z = [c(0.5, 0.1)];
        assert!((k.eval(&z).unwrap() - 1.0 / z[0]).norm() < 1e-14);
    }

    #[test]
    fn power_family_magnitude_matches_denominator() {
        let d = Arc::new(Domain::unit_ball(2));
        let k = SingularKernel::build(KernelFamily::BallPower { q: 1.7 }, &d, vec![c(0.6, 0.0), c(0.0, 0.8)], 1).unwrap();
        let z = [c(0.1, 0.2), c(-0.3, 0.4)];
        let lhs = k.eval(&z).unwrap().norm();
        let rhs = k.denominator(&z).norm().powf(-k.exponent);
        assert!((lhs / rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn levi_kernel_is_local() {
        let d = Arc::new(Domain::ellipsoid(&[1.0, 2.0]));
        let k = SingularKernel::build(KernelFamily::LeviPole, &d, vec![c(1.0, 0.0), c(0.0, 0.0)], 1).unwrap();
        let eps = k.levi.as_ref().unwrap().epsilon;
        assert!(k.eval(&[c(1.0 - eps / 2.0, 0.0), c(0.0, 0.0)]).is_ok());
        assert_eq!(k.eval(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap_err().code(), "outside-local-patch");
    }

    #[test]
    fn extended_probe_matches_direct_evaluation() {
        let k = SingularKernel::build(KernelFamily::PlanarLog, &disk(), vec![c(1.0, 0.0)], 1).unwrap();
        let dir = vec![c(-1.0, 0.0)];
        let near = Probe { base: vec![c(1.0, 0.0)], log_scale: -20.0, dir: dir.clone() };
        let direct = k.eval_probe(&near).unwrap().to_c64();
        let far = Probe { base: vec![c(1.0, 0.0)], log_scale: -60.0, dir };
        let ext = k.eval_probe(&far).unwrap().to_c64();
        // g grows by exactly 40 in the real part between the two scales
        assert!((ext.re - direct.re - 40.0).abs() < 1e-6);
        assert!((ext.im - direct.im).abs() < 1e-6);
    }
}
