//! Connected components of B(w, δ) ∩ Ω on a pixel grid and an ε-graph.

use bergman_lab::geometry::{connected_components, Domain, DomainFamily, GraphSpec};
use bergman_lab::c;

fn main() -> bergman_lab::Result<()> {
    let horseshoe = Domain::new(DomainFamily::Horseshoe { inner: 0.5, outer: 1.0, gap: 0.3 })?;
    for delta in [0.3, 1.0, 1.8] {
        let map = connected_components(&horseshoe, &[c(-0.75, 0.0)], delta, GraphSpec::Grid { h: delta / 200.0 }, None, 1)?;
        println!("horseshoe δ = {delta}: {} components, sizes {:?}", map.component_count(), map.component_sizes);
    }
    let ball = Domain::unit_ball(2);
    let map = connected_components(&ball, &[c(1.0, 0.0), c(0.0, 0.0)], 0.3, GraphSpec::Samples { count: 10_000, eps_factor: 4.0 }, None, 2)?;
    println!("ball: {} component(s), ε = {:.4}", map.component_count(), map.eps);
    Ok(())
}
