//! f + φ/k exceeds any level near ζ while staying within the sublinear bound.

use std::sync::Arc;

use bergman_lab::genericity::{approach_probes, densify};
use bergman_lab::geometry::Domain;
use bergman_lab::kernels::{Combination, KernelFamily, SingularKernel};
use bergman_lab::c;

fn main() -> bergman_lab::Result<()> {
    let d = Arc::new(Domain::unit_disk());
    let zeta = [c(1.0, 0.0)];
    let phi = Combination::single(Arc::new(SingularKernel::build(KernelFamily::PlanarPole, &d, zeta.to_vec(), 1)?));
    let f = Combination::constant(c(1e6, 0.0));
    let probes = approach_probes(&d, &zeta, &[c(0.5, 0.0)]);
    let rep = densify(&f, &phi, 10.0, &probes, Some(1e9))?;
    let i = rep.first_exceeding(1e6 + 1e3).expect("level reached");
    println!("bound holds: {}", rep.bound_holds);
    println!("|f + φ/10| first exceeds 10⁶ + 10³ at dist {:.3e}", rep.steps[i].log_dist.exp());
    println!("oracle: dist ≤ 0.1/(2·10⁶ + 10³) = {:.4e}", 0.1 / (2e6 + 1e3));
    Ok(())
}
