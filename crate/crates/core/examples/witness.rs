//! Witness series Σ ε_j φ_j over a boundary net, unbounded near every net point.

use bergman_lab::genericity::assemble_witness;
use bergman_lab::geometry::Domain;

fn main() -> bergman_lab::Result<()> {
    for (name, d) in [("disk", Domain::unit_disk()), ("square", Domain::unit_square())] {
        let rep = assemble_witness(&d, 8, f64::INFINITY, 1e4, 200_000, 1)?;
        println!("{name}: {} attempt(s), all pass {}", rep.attempts, rep.all_pass());
        for x in &rep.diagnostics {
            println!(
                "  j={} δ={:.3} log max {:>7.2} (without own term {:>6.2})",
                x.j, x.delta, x.log_max, x.log_max_without
            );
        }
    }
    Ok(())
}
