//! Ball pole 1/(1 − ⟨z, ζ⟩) in ℂⁿ, and the ellipsoid as a rescaled ball.

use std::sync::Arc;

use bergman_lab::geometry::Domain;
use bergman_lab::kernels::{KernelFamily, SingularKernel};
use bergman_lab::quadrature::{default_shells, estimate_threshold, shell_profile};
use bergman_lab::{c, C64};

fn fit(k: &SingularKernel, p: f64) -> bergman_lab::Result<(f64, f64)> {
    let profile = shell_profile(k, default_shells(k), &[p], 100_000, None, 11)?;
    let t = estimate_threshold(&profile, &[p], 12)?;
    Ok((t.p_star_hat, t.p_star_stderr))
}

fn main() -> bergman_lab::Result<()> {
    for n in 1..=3 {
        let d = Arc::new(Domain::unit_ball(n));
        let mut zeta = vec![c(0.0, 0.0); n];
        zeta[0] = c(1.0, 0.0);
        let k = SingularKernel::build(KernelFamily::BallPole, &d, zeta, 1)?;
        let (p, se) = fit(&k, n as f64 + 1.0)?;
        println!("ball n={n}: p̂ = {p:.4} ± {se:.4}");
    }
    let a = [1.0, 2.0];
    let e = Arc::new(Domain::ellipsoid(&a));
    let k = SingularKernel::build(KernelFamily::ConvexPole, &e, vec![c(1.0, 0.0), c(0.0, 0.0)], 1)?;
    let (p, se) = fit(&k, 3.0)?;
    println!("ellipsoid (1, 2): p̂ = {p:.4} ± {se:.4}");
    let z = [c(0.3, 0.1), c(-0.4, 0.9)];
    let w: Vec<C64> = z.iter().zip(&a).map(|(z, r)| z / r).collect();
    println!("f_E(z) = {}, 1/(1 − w₁) = {}", k.eval(&z)?, 1.0 / (c(1.0, 0.0) - w[0]));
    Ok(())
}
