//! 1/z on the cusps {0 < y < x^α}: threshold α + 1.

use std::sync::Arc;

use bergman_lab::geometry::Domain;
use bergman_lab::kernels::{KernelFamily, SingularKernel};
use bergman_lab::quadrature::{default_shells, estimate_threshold, shell_profile};
use bergman_lab::c;

fn main() -> bergman_lab::Result<()> {
    for alpha in [1.0, 2.0, 3.0, 1.5] {
        let d = Arc::new(Domain::cusp(alpha));
        let k = SingularKernel::build(KernelFamily::CuspMonomial { alpha, q: alpha + 1.0 }, &d, vec![c(0.0, 0.0)], 1)?;
        let profile = shell_profile(&k, default_shells(&k), &[alpha + 1.0], 50_000, None, 3)?;
        let t = estimate_threshold(&profile, &[alpha + 1.0], 4)?;
        println!("α = {alpha}: p̂ = {:.4} ± {:.4} (expected {})", t.p_star_hat, t.p_star_stderr, alpha + 1.0);
    }
    // exponential cusp: every power of 1/z is integrable
    let d = Arc::new(Domain::new(bergman_lab::geometry::DomainFamily::ExpCusp)?);
    let k = SingularKernel::build(KernelFamily::CuspInversePower { n: 3 }, &d, vec![c(0.0, 0.0)], 1)?;
    let profile = shell_profile(&k, default_shells(&k), &[4.0, 16.0], 50_000, None, 5)?;
    let t = estimate_threshold(&profile, &[4.0, 16.0], 6)?;
    println!("exp cusp, 1/z³: p̂ = {}", t.p_star_hat);
    Ok(())
}
