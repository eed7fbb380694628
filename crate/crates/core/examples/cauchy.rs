//! Cauchy estimates: derivatives on a compact set controlled by the L¹ norm.

use std::sync::Arc;

use bergman_lab::geometry::{sample_uniform, Domain};
use bergman_lab::kernels::{Combination, KernelFamily, SingularKernel};
use bergman_lab::quadrature::cauchy_norm_control;
use bergman_lab::c;

fn main() -> bergman_lab::Result<()> {
    let disk = Arc::new(Domain::unit_disk());
    let k = SingularKernel::build(KernelFamily::PlanarPole, &disk, vec![c(1.0, 0.0)], 1)?;
    let f = Combination::single(Arc::new(k)).with_term(c(0.5, 0.0), Arc::new(SingularKernel::build(
        KernelFamily::PlanarLog,
        &disk,
        vec![c(0.0, 1.0)],
        1,
    )?));
    let compact: Vec<_> = sample_uniform(&Domain::disk(c(0.0, 0.0), 0.5), 200, 2)?.points;
    for alpha in [0, 1, 2] {
        let r = cauchy_norm_control(&f, &compact, &[alpha], &disk, 200_000, 3)?;
        println!(
            "α = {alpha}: sup |∂f| = {:.4}, ‖f‖₁ = {:.4}, ratio {:.4}, scaled {:?}",
            r.sup_derivative, r.l1_norm, r.ratio, r.scaled
        );
    }
    Ok(())
}
