//! Branch of log((z − a)/(z − ζ)): principal certificate on the disk,
//! continuation along paths on the annulus.

use std::f64::consts::PI;
use std::sync::Arc;

use bergman_lab::geometry::{Domain, DomainFamily};
use bergman_lab::kernels::{KernelFamily, KernelSpec, SingularKernel};
use bergman_lab::{c, C64};

fn main() -> bergman_lab::Result<()> {
    let disk = Arc::new(Domain::unit_disk());
    let k = SingularKernel::build(KernelFamily::PlanarLog, &disk, vec![c(1.0, 0.0)], 1)?;
    println!("disk certificate: {:?}", k.certificate);
    for z in [c(0.0, 0.0), c(0.99, 0.0), c(-0.5, 0.8)] {
        println!("g({z}) = {}  residual {:.1e}", k.eval(&[z])?, k.log_residual(&[z])?);
    }
    let ann = Arc::new(Domain::new(DomainFamily::Annulus { center: c(0.0, 0.0), inner: 0.5, outer: 1.0 })?);
    let mut spec = KernelSpec::new(KernelFamily::PlanarLog, vec![c(1.0, 0.0)]);
    spec.anchor = Some(c(1.5, 0.0));
    spec.base = Some(c(0.75, 0.0));
    let ka = SingularKernel::new(spec, ann, 1)?;
    let arc = |sign: f64| -> Vec<C64> { (0..=16).map(|i| C64::from_polar(0.75, sign * PI * i as f64 / 16.0)).collect() };
    let up = ka.continue_along(&arc(1.0))?;
    let down = ka.continue_along(&arc(-1.0))?;
    println!("at −0.75: upper {} lower {} (|Δ| = {:.1e})", up.value, down.value, (up.raw - down.raw).norm());
    Ok(())
}
