//! J(r) = ∫_{rB} |1 − z₁|^{−(n+1)} grows like log 1/(1 − r²).

use std::f64::consts::PI;

use bergman_lab::quadrature::log_law_fit;

fn main() -> bergman_lab::Result<()> {
    let radii = [0.9, 0.95, 0.98, 0.99, 0.995, 0.999];
    for n in [1, 2] {
        let fit = log_law_fit(n, n as f64 + 1.0, &radii, 400_000, 1)?;
        println!("n={n}: slope {:.4} ± {:.4}, R² {:.5}", fit.slope, fit.slope_stderr, fit.r2);
        for pt in &fit.points {
            let exact = if n == 1 { format!("  (π log term {:.4})", PI * pt.log_term) } else { String::new() };
            println!("  r = {:<6} J = {:.4} ± {:.4}{exact}", pt.r, pt.j, pt.stderr);
        }
    }
    Ok(())
}
