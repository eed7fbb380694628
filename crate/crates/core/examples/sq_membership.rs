//! Local membership f ∈ OL^q(B(w, ε) ∩ Ω) and the radius-enlargement rule.

use std::sync::Arc;

use bergman_lab::genericity::{enlargement_check, sq_membership};
use bergman_lab::geometry::Domain;
use bergman_lab::kernels::{Combination, KernelFamily, SingularKernel};
use bergman_lab::c;

fn main() -> bergman_lab::Result<()> {
    let d = Arc::new(Domain::unit_disk());
    let f = Combination::single(Arc::new(SingularKernel::build(KernelFamily::PlanarPole, &d, vec![c(1.0, 0.0)], 1)?));
    for (w, eps) in [(c(0.9, 0.0), 0.2), (c(0.0, 0.0), 0.5), (c(0.0, 0.0), 0.9)] {
        let v = sq_membership(&f, &[w], eps, 2.0, 50_000, 2)?;
        println!("w = {w}, ε = {eps}: {}", v.verdict.as_str());
    }
    let e = enlargement_check(&f, &[c(0.85, 0.0)], &[c(0.9, 0.0)], 0.2, 2.0, 50_000, 3)?;
    println!("enlargement consistent: {}", e.consistent);
    Ok(())
}
