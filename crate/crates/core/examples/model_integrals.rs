//! Model integral ∫ |t + i s + |w|²|^{−p} over the Levi chart and the flat
//! 2n-dimensional integral ∫ |x|^{−2n}.

use bergman_lab::levi::{divergence_integral_2n, model_integral};

fn main() -> bergman_lab::Result<()> {
    for n in [1, 2] {
        for p in [n as f64, n as f64 + 0.5, n as f64 + 1.0, n as f64 + 1.5] {
            let m = model_integral(p, n, 1.0, 800_000, 3)?;
            println!("n={n} p={p:<3} slope {:+.3} ± {:.3}  {}", m.slope, m.slope_stderr, m.verdict.as_str());
        }
        let r = divergence_integral_2n(n, 800_000, 4)?;
        println!("n={n} |x|^(-2n): per-shell {:.4} (exact {:.4}), flatness {:.3}", r.shell_mass[0], r.expected_shell_mass, r.flatness);
    }
    Ok(())
}
