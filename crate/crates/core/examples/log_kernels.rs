//! Logarithmic kernels lie in every L^p yet are unbounded near ζ.

use std::sync::Arc;

use bergman_lab::genericity::approach_probes;
use bergman_lab::geometry::Domain;
use bergman_lab::kernels::{Combination, KernelFamily, SingularKernel};
use bergman_lab::quadrature::lp_mass_multi;
use bergman_lab::c;

fn main() -> bergman_lab::Result<()> {
    let square = Arc::new(Domain::unit_square());
    let zeta = [c(1.0, 0.5)];
    let k = Arc::new(SingularKernel::build(KernelFamily::ConvexLog, &square, zeta.to_vec(), 1)?);
    let f = Combination::single(k);
    let ps = [1.0, 2.0, 4.0, 8.0, 16.0];
    let m = lp_mass_multi(&f, &square, &ps, None, 400_000, 5)?;
    for i in 0..ps.len() {
        println!("p = {:<3} ∫|g|^p = {:.4e} ± {:.1e}  {}", ps[i], m.mass[i], m.stderr[i], m.verdict[i].as_str());
    }
    for probe in approach_probes(&square, &zeta, &[c(0.5, 0.5)]).iter().step_by(10) {
        println!("log dist {:>14.4e}  |g| = {:.4e}", probe.log_scale, f.eval_probe(probe)?.abs());
    }
    Ok(())
}
