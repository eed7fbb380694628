//! Integrability threshold of 1/(z − 1) on the unit disk from dyadic shell masses.

use std::sync::Arc;

use bergman_lab::geometry::Domain;
use bergman_lab::kernels::{theoretical_threshold, KernelFamily, SingularKernel};
use bergman_lab::quadrature::{default_shells, estimate_threshold, shell_profile};
use bergman_lab::c;

fn main() -> bergman_lab::Result<()> {
    let disk = Arc::new(Domain::unit_disk());
    let k = SingularKernel::build(KernelFamily::PlanarPole, &disk, vec![c(1.0, 0.0)], 7)?;
    let ps = [1.0, 1.5, 2.0, 2.5];
    let profile = shell_profile(&k, default_shells(&k), &ps, 100_000, None, 7)?;
    for (kk, lv) in profile.ks.iter().zip(&profile.log2_vol) {
        println!("shell {kk:>3}  log2 vol {lv:>9.4}");
    }
    let t = estimate_threshold(&profile, &ps, 8)?;
    println!("γ̂ = {:.4} ± {:.4}, p̂ = {:.4}", t.gamma_hat, t.stderr, t.p_star_hat);
    for v in &t.verdicts {
        println!("p = {:<4} σ = {:+.3}  {}", v.p, v.sigma, v.verdict.as_str());
    }
    println!("theory: {:?}", theoretical_threshold(&k, &disk)?);
    Ok(())
}
