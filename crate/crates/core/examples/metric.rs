//! Truncated Fréchet metric on ∩_{p<q} OL^p and scalar continuity.

use std::sync::Arc;

use bergman_lab::geometry::Domain;
use bergman_lab::kernels::{Combination, KernelFamily, SingularKernel};
use bergman_lab::quadrature::{metric_distance, scalar_continuity_check, MetricSpec};
use bergman_lab::c;

fn main() -> bergman_lab::Result<()> {
    let d = Arc::new(Domain::disk(c(0.0, 0.0), 0.25));
    let phi = Combination::single(Arc::new(SingularKernel::build(KernelFamily::PlanarLog, &d, vec![c(0.25, 0.0)], 1)?));
    let f = Combination::constant(c(1.0, 0.0));
    for q in [1.0, 2.0, f64::INFINITY] {
        let spec = MetricSpec::new(q, 20)?;
        print!("q = {q:<4}");
        for k in [1.0, 10.0, 100.0] {
            let g = f.add(&phi.scale(c(1.0 / k, 0.0)));
            let dist = metric_distance(&spec, &g, &f, &d, 100_000, 9)?;
            print!("  d(f + φ/{k}, f) = {:.5}", dist.value);
        }
        println!();
    }
    let spec = MetricSpec::new(2.0, 20)?;
    let lambdas: Vec<f64> = [1.0, 10.0, 100.0].iter().map(|k| 1.0 + 1.0 / k).collect();
    for (l, dist) in lambdas.iter().zip(scalar_continuity_check(&spec, &lambdas, 1.0, &phi, &d, 100_000, 3)?) {
        println!("d({l:.2}·φ, φ) = {:.5} ± {:.1e}", dist.value, dist.stderr);
    }
    Ok(())
}
