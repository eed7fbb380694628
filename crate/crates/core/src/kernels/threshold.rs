use serde::{Deserialize, Serialize};

use super::{Shape, SingularKernel};
use crate::geometry::{box_active_faces, Domain, DomainFamily};
use crate::error::{LabError, Result};

/// Expected critical exponent p* of a catalogued (kernel, domain) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Threshold {
    Finite { value: f64 },
    Infinite,
    /// Membership proved below `lo`, divergence proved at `hi`.
    Bracket { lo: f64, hi: f64 },
}

impl Threshold {
    /// Whether an estimate lies within `tol` of the expected value (or of
    /// the bracket).
    pub fn accepts(&self, estimate: f64, tol: f64) -> bool {
        match *self {
            Threshold::Finite { value } => (estimate - value).abs() <= tol,
            Threshold::Infinite => estimate.is_infinite(),
            Threshold::Bracket { lo, hi } => estimate >= lo - tol && estimate <= hi + tol,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            Threshold::Finite { value } => Some(value),
            Threshold::Infinite => Some(f64::INFINITY),
            Threshold::Bracket { .. } => None,
        }
    }
}

/// Volume-decay exponent γ of {z ∈ Ω : |D(z)| < λ} ≍ λ^γ for the catalogued
/// geometries.
fn decay_exponent(kernel: &SingularKernel, domain: &Domain) -> Result<f64> {
    let fam = kernel.family();
    let zeta = kernel.zeta();
    let n = domain.n as f64;
    let none = || LabError::NoTheoreticalValue(format!("{} on {}", fam.tag(), domain.family_tag()));
    if fam.is_planar() {
        let ok = domain.has_c1_boundary()
            || matches!(domain.family, DomainFamily::ConvexHull { .. } | DomainFamily::Box { n: 1 });
        return if ok { Ok(2.0) } else { Err(none()) };
    }
    if fam.is_cusp() {
        return match domain.family {
            DomainFamily::Cusp { alpha } => Ok(alpha + 1.0),
            DomainFamily::ExpCusp => Ok(f64::INFINITY),
            _ => Err(none()),
        };
    }
    if fam.is_ball() {
        return Ok(n + 1.0);
    }
    if fam.is_convex() {
        return match &domain.family {
            DomainFamily::Ball { .. } | DomainFamily::Ellipsoid { .. } | DomainFamily::Disk { .. } => Ok(n + 1.0),
            DomainFamily::HalfBall { .. } => {
                if zeta[0].re.abs() < 1e-12 {
                    Ok(2.0)
                } else {
                    Ok(n + 1.0)
                }
            }
            DomainFamily::Box { .. } if box_active_faces(zeta, 1e-12).len() == 1 => Ok(2.0),
            DomainFamily::Polydisk { .. } | DomainFamily::ConvexHull { .. } => Ok(2.0),
            _ => Err(none()),
        };
    }
    Err(none())
}

/// Table value of p* for the kernel on `domain`.
pub fn theoretical_threshold(kernel: &SingularKernel, domain: &Domain) -> Result<Threshold> {
    let fam = kernel.family();
    if fam.shape() == Shape::Log {
        return Ok(Threshold::Infinite);
    }
    let s = kernel.exponent;
    if fam.is_levi() {
        let n = domain.n as f64;
        let (lo, hi) = ((n + 1.0) / s, 2.0 * n / s);
        return Ok(if hi - lo < 1e-12 { Threshold::Finite { value: lo } } else { Threshold::Bracket { lo, hi } });
    }
    let gamma = decay_exponent(kernel, domain)?;
    if gamma.is_infinite() {
        return Ok(Threshold::Infinite);
    }
    Ok(Threshold::Finite { value: gamma / s })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cvec::c;
    use crate::kernels::KernelFamily;

    #[test]
    fn catalogue_values() {
        let ball = Arc::new(Domain::unit_ball(2));
        let k = SingularKernel::build(KernelFamily::BallPole, &ball, vec![c(1.0, 0.0), c(0.0, 0.0)], 1).unwrap();
        assert_eq!(theoretical_threshold(&k, &ball).unwrap(), Threshold::Finite { value: 3.0 });
        let cusp = Arc::new(Domain::cusp(2.0));
        let k = SingularKernel::build(KernelFamily::CuspMonomial { alpha: 2.0, q: 3.0 }, &cusp, vec![c(0.0, 0.0)], 1)
            .unwrap();
        assert_eq!(theoretical_threshold(&k, &cusp).unwrap(), Threshold::Finite { value: 3.0 });
        let ell = Arc::new(Domain::ellipsoid(&[1.0, 2.0]));
        let k = SingularKernel::build(KernelFamily::LeviPole, &ell, vec![c(1.0, 0.0), c(0.0, 0.0)], 1).unwrap();
        assert_eq!(theoretical_threshold(&k, &ell).unwrap(), Threshold::Bracket { lo: 3.0, hi: 4.0 });
    }

    #[test]
    fn power_families_scale_with_q() {
        let ball = Arc::new(Domain::unit_ball(2));
        let k = SingularKernel::build(KernelFamily::BallPower { q: 1.5 }, &ball, vec![c(1.0, 0.0), c(0.0, 0.0)], 1)
            .unwrap();
        let t = theoretical_threshold(&k, &ball).unwrap().value().unwrap();
        assert!((t - 1.5).abs() < 1e-12);
    }
}
