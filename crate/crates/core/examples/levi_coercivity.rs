//! Levi polynomial lower bound Re F(z, ζ) ≥ ρ(ζ) − ρ(z) + β|ζ − z|².

use bergman_lab::geometry::Domain;
use bergman_lab::levi::{compute_beta, levi_polynomial, verify_coercivity, DefiningFunction};
use bergman_lab::c;

fn main() -> bergman_lab::Result<()> {
    let cases = [
        ("ball", DefiningFunction::ball(2), Domain::unit_ball(2)),
        ("ellipsoid", DefiningFunction::ellipsoid(&[1.0, 2.0]), Domain::ellipsoid(&[1.0, 2.0])),
    ];
    for (name, df, d) in cases {
        let levi = compute_beta(&df, &d, 64, 1)?;
        let rep = verify_coercivity(&df, &levi, 100_000, 2);
        println!(
            "{name}: β = {:.4}, ε = {:.4}, λ_min = {:.4}, violations {} / {}, min margin {:.2e}",
            levi.beta, levi.epsilon, levi.lambda_min, rep.violations, rep.pairs, rep.min_margin
        );
        let zeta = [c(1.0, 0.0), c(0.0, 0.0)];
        println!("  F(0.9e₁, e₁) = {}", levi_polynomial(&df, &zeta, &[c(0.9, 0.0), c(0.0, 0.0)]));
    }
    Ok(())
}
