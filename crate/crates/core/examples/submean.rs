//! Sub-mean-value property of |f|^p on random polydisks.

use std::sync::Arc;

use bergman_lab::geometry::Domain;
use bergman_lab::kernels::{Combination, KernelFamily, SingularKernel};
use bergman_lab::quadrature::submean_check;
use bergman_lab::c;

fn main() -> bergman_lab::Result<()> {
    let ball = Arc::new(Domain::unit_ball(2));
    let k = SingularKernel::build(KernelFamily::BallPole, &ball, vec![c(1.0, 0.0), c(0.0, 0.0)], 1)?;
    let f = Combination::single(Arc::new(k)).with_term(c(0.0, 0.0), Arc::new(SingularKernel::build(
        KernelFamily::BallLog,
        &ball,
        vec![c(0.0, 0.0), c(0.0, 1.0)],
        1,
    )?));
    let rep = submean_check(&f, &ball, 1_000, 4)?;
    println!("{} trials, {} violations, worst z {:.2}", rep.trials, rep.violations, rep.worst_z);
    for t in &rep.examples {
        println!("  r = {:.3} p = {}  |f(a)|^p = {:.4} ≤ mean {:.4} ± {:.1e}", t.r, t.p, t.lhs, t.rhs, t.stderr);
    }
    Ok(())
}
