//! Constructive side of the density arguments: shrinking spike
//! perturbations, per-component unboundedness probes, local L^q divergence
//! verdicts and assembled witness series.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cvec::{c, dist, LogComplex, Point, C64};
use crate::error::{LabError, Result};
use crate::geometry::{connected_components, refine_probes, ComponentMap, Domain, DomainFamily, GraphSpec, Probe};
use crate::kernels::{Combination, KernelFamily, KernelSpec, SingularKernel};
use crate::quadrature::{
    default_shells, estimate_threshold, lp_mass, shell_profile, MetricSpec, Region, ThresholdVerdict, Verdict,
};
use crate::rng::{derive, stream_rng};

/// Default unboundedness grid.
pub const M_GRID: [f64; 3] = [1e3, 1e6, 1e9];
/// Deepest probe offset, as ln(distance).
pub const MIN_LOG_SCALE: f64 = -1e12;
const PROBES: usize = 80;

fn log_sub(la: f64, lb: f64) -> f64 {
    // ln(e^la − e^lb), −∞ when the difference is not positive
    if lb == f64::NEG_INFINITY {
        la
    } else if la <= lb {
        f64::NEG_INFINITY
    } else {
        la + (-(lb - la).exp()).ln_1p()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DensifyStep {
    /// ln of the probe offset from its base point.
    pub log_dist: f64,
    pub log_abs_f: f64,
    pub log_abs_phi: f64,
    pub log_abs_sum: f64,
    pub log_running_max: f64,
    /// ln of (1/k)·max|φ| − sup|f| up to this point.
    pub log_bound: f64,
    pub bound_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensifyReport {
    pub k: f64,
    pub log_sup_f: f64,
    pub steps: Vec<DensifyStep>,
    /// Whether the running max dominates the bound at every probe point.
    pub bound_holds: bool,
    /// ln of the final running max.
    pub log_achieved: f64,
}

impl DensifyReport {
    /// Index of the first step whose running max reaches `m`.
    pub fn first_exceeding(&self, m: f64) -> Option<usize> {
        self.steps.iter().position(|s| s.log_running_max >= m.ln())
    }
}

/// Running max of |f + (1/k)φ| along a probe sequence, checked pointwise
/// against (1/k)·max|φ| − sup|f|. With `target`, fails with
/// `ProbeExhausted` when the running max never reaches it.
pub fn densify(f: &Combination, phi: &Combination, k: f64, probe: &[Probe], target: Option<f64>) -> Result<DensifyReport> {
    if !(k > 0.0) {
        return Err(LabError::Input("k must be positive".into()));
    }
    if probe.is_empty() {
        return Err(LabError::Input("empty probe sequence".into()));
    }
    let h = f.add(&phi.scale(c(1.0 / k, 0.0)));
    let vals: Vec<(LogComplex, LogComplex, LogComplex)> = probe
        .iter()
        .map(|p| Ok((f.eval_probe(p)?, phi.eval_probe(p)?, h.eval_probe(p)?)))
        .collect::<Result<_>>()?;
    let log_sup_f = vals.iter().map(|v| v.0.log_abs).fold(f64::NEG_INFINITY, f64::max);
    if !log_sup_f.is_finite() && log_sup_f > 0.0 {
        return Err(LabError::Input("f is unbounded along the probe".into()));
    }
    let mut steps = Vec::with_capacity(probe.len());
    let mut run = f64::NEG_INFINITY;
    let mut max_phi = f64::NEG_INFINITY;
    for (p, (fv, pv, hv)) in probe.iter().zip(&vals) {
        run = run.max(hv.log_abs);
        max_phi = max_phi.max(pv.log_abs);
        let log_bound = log_sub(max_phi - k.ln(), log_sup_f);
        let bound_ok = run >= log_bound - 1e-9 * log_bound.abs().max(1.0);
        steps.push(DensifyStep {
            log_dist: p.log_scale,
            log_abs_f: fv.log_abs,
            log_abs_phi: pv.log_abs,
            log_abs_sum: hv.log_abs,
            log_running_max: run,
            log_bound,
            bound_ok,
        });
    }
    let report = DensifyReport { k, log_sup_f, bound_holds: steps.iter().all(|s| s.bound_ok), log_achieved: run, steps };
    if let Some(m) = target {
        if report.log_achieved < m.ln() {
            return Err(LabError::ProbeExhausted { achieved: report.log_achieved.exp(), requested: m });
        }
    }
    Ok(report)
}

/// Probe sequence toward `target` starting from the interior point `from`.
pub fn approach_probes(domain: &Domain, target: &[C64], from: &[C64]) -> Vec<Probe> {
    refine_probes(domain, target, from, PROBES, MIN_LOG_SCALE)
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentVerdict {
    pub label: usize,
    pub size: usize,
    /// ln max|f| over the component nodes and the refined approaches.
    pub log_max: f64,
    pub log_max_nodes: f64,
    pub exceeds: Vec<bool>,
    pub unbounded: bool,
    /// Boundary targets probed from this component.
    pub targets: Vec<Point>,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnboundednessReport {
    pub w: Point,
    pub delta: f64,
    pub m_grid: Vec<f64>,
    pub components: Vec<ComponentVerdict>,
}

impl UnboundednessReport {
    pub fn all_unbounded(&self) -> bool {
        self.components.iter().all(|c| c.unbounded)
    }
}

/// Per-component sup of |f| over B(w, δ) ∩ Ω: node maxima, then refined
/// approaches from each component toward the singular points of f that lie
/// in the ball and on the component's closure.
pub fn unboundedness_verdict(
    f: &Combination,
    domain: &Domain,
    w: &[C64],
    delta: f64,
    map: &ComponentMap,
    m_grid: &[f64],
) -> Result<UnboundednessReport> {
    let singular: Vec<Point> = f
        .terms
        .iter()
        .filter(|(a, k)| *a != c(0.0, 0.0) && dist(k.zeta(), w) < delta)
        .map(|(_, k)| k.zeta().to_vec())
        .collect();
    let components = (0..map.component_count())
        .into_par_iter()
        .map(|label| -> Result<ComponentVerdict> {
            let mut log_max_nodes = f64::NEG_INFINITY;
            for (_, z) in map.nodes_of(label) {
                log_max_nodes = log_max_nodes.max(f.eval_unchecked(z)?.norm().ln());
            }
            let mut log_max = log_max_nodes;
            let mut targets = Vec::new();
            for zeta in &singular {
                let Some((i, d)) = map.nearest_in(label, zeta) else { continue };
                if d > map.reach() {
                    continue;
                }
                targets.push(zeta.clone());
                for p in approach_probes(domain, zeta, &map.nodes[i]) {
                    log_max = log_max.max(f.eval_probe(&p)?.log_abs);
                }
            }
            let exceeds: Vec<bool> = m_grid.iter().map(|m| log_max > m.ln()).collect();
            Ok(ComponentVerdict {
                label,
                size: map.component_sizes[label],
                log_max,
                log_max_nodes,
                unbounded: exceeds.iter().all(|e| *e),
                exceeds,
                targets,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UnboundednessReport { w: w.to_vec(), delta, m_grid: m_grid.to_vec(), components })
}

/// Grid for planar domains, ε-graph on 10⁴ samples otherwise.
pub fn default_graph(domain: &Domain, delta: f64) -> GraphSpec {
    if domain.n == 1 {
        GraphSpec::Grid { h: delta / 60.0 }
    } else {
        GraphSpec::Samples { count: 10_000, eps_factor: 4.0 }
    }
}

/// Log kernel family available at every boundary point of the domain.
pub fn witness_family(domain: &Domain) -> Result<KernelFamily> {
    match &domain.family {
        DomainFamily::Ball { .. } => Ok(if domain.n == 1 { KernelFamily::PlanarLog } else { KernelFamily::BallLog }),
        DomainFamily::Box { .. } | DomainFamily::Polydisk { .. } | DomainFamily::ConvexHull { .. } => {
            Ok(KernelFamily::ConvexLog)
        }
        _ if domain.n == 1 && domain.has_c1_boundary() => Ok(KernelFamily::PlanarLog),
        _ if domain.is_convex() => Ok(KernelFamily::ConvexLog),
        _ => Err(LabError::UnsupportedFamily(format!("no witness kernels on {}", domain.family_tag()))),
    }
}

fn interior_center(domain: &Domain) -> Result<Point> {
    let z: Point = domain.bounding_box.chunks(2).map(|b| c(0.5 * (b[0].0 + b[0].1), 0.5 * (b[1].0 + b[1].1))).collect();
    if domain.contains(&z) {
        Ok(z)
    } else {
        Err(LabError::UnsupportedFamily("witness net needs a domain containing its bounding-box center".into()))
    }
}

/// Boundary point on the ray center + t·u, by bisection on membership.
fn ray_boundary(domain: &Domain, center: &[C64], u: &[C64]) -> Point {
    let (mut lo, mut hi) = (0.0, domain.diameter() * 1.01 + 1e-9);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let z: Point = center.iter().zip(u).map(|(a, b)| a + b * mid).collect();
        if domain.contains(&z) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    center.iter().zip(u).map(|(a, b)| a + b * hi).collect()
}

/// J boundary points: equispaced angles with a seeded offset for n = 1,
/// seeded random directions otherwise.
pub fn boundary_net(domain: &Domain, count: usize, seed: u64) -> Result<Vec<Point>> {
    let center = interior_center(domain)?;
    let mut rng = stream_rng(seed, 0x2e7);
    let offset: f64 = rng.random_range(0.25..0.75);
    let mut x = vec![0.0; domain.real_dim()];
    (0..count)
        .map(|j| {
            let u: Point = if domain.n == 1 {
                vec![C64::from_polar(1.0, 2.0 * PI * (j as f64 + offset) / count as f64)]
            } else {
                crate::rng::unit_vector(&mut rng, x.len(), &mut x);
                crate::cvec::from_real(&x)
            };
            let mut w = ray_boundary(domain, &center, &u);
            if let DomainFamily::Box { .. } = domain.family {
                // put the point exactly on its face
                let snap = |x: f64| if x.abs() < 1e-12 { 0.0 } else if (x - 1.0).abs() < 1e-12 { 1.0 } else { x };
                w = w.iter().map(|z| c(snap(z.re), snap(z.im))).collect();
            }
            Ok(w)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessSeries {
    pub domain: Domain,
    #[serde(serialize_with = "crate::quadrature::ser_inf", deserialize_with = "crate::quadrature::de_inf")]
    pub q: f64,
    pub truncation: usize,
    /// Exponent p_J at which the term norms are estimated.
    pub p_ref: f64,
    pub net: Vec<Point>,
    pub kernels: Vec<KernelSpec>,
    /// ε_j = 2^{−j}/(1 + ‖f_{w_j}‖_{p_J}).
    pub epsilons: Vec<f64>,
    pub phases: Vec<C64>,
    pub norms: Vec<f64>,
    /// Σ_{i≤j} ε_i ‖f_{w_i}‖_{p_J}.
    pub partial_sums: Vec<f64>,
    pub seed: u64,
}

impl WitnessSeries {
    pub fn combination(&self) -> Result<Combination> {
        let domain = Arc::new(self.domain.clone());
        let mut f = Combination::zero();
        for (j, spec) in self.kernels.iter().enumerate() {
            let k = Arc::new(SingularKernel::new(spec.clone(), domain.clone(), derive(self.seed, 0x3e7, j as u64))?);
            f = f.with_term(self.phases[j] * self.epsilons[j], k);
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NetDiagnostic {
    pub j: usize,
    pub w: Point,
    pub delta: f64,
    pub components: usize,
    /// Smallest ln max|f| over the components of B(w_j, δ) ∩ Ω.
    pub log_max: f64,
    pub passed: bool,
    /// ln max|f − term_j| over the same set.
    pub log_max_without: f64,
    pub attribution_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub series: WitnessSeries,
    pub m: f64,
    pub attempts: usize,
    pub diagnostics: Vec<NetDiagnostic>,
}

impl WitnessReport {
    pub fn all_pass(&self) -> bool {
        self.diagnostics.iter().all(|d| d.passed && d.attribution_ok)
    }
}

/// Ball radius for net diagnostics: 0.4 × the smallest net spacing, capped
/// at 0.25 × diameter.
fn net_delta(domain: &Domain, net: &[Point]) -> f64 {
    let mut m = 0.25 * domain.diameter();
    for i in 0..net.len() {
        for j in i + 1..net.len() {
            m = m.min(0.4 * dist(&net[i], &net[j]));
        }
    }
    m
}

fn diagnose(series: &WitnessSeries, f: &Combination, m: f64, seed: u64) -> Result<Vec<NetDiagnostic>> {
    let domain = &series.domain;
    let delta = net_delta(domain, &series.net);
    series
        .net
        .iter()
        .enumerate()
        .map(|(j, w)| {
            let map = connected_components(domain, w, delta, default_graph(domain, delta), None, derive(seed, 0xd1a, j as u64))?;
            let with = unboundedness_verdict(f, domain, w, delta, &map, &[m])?;
            let without = unboundedness_verdict(&f.without(j), domain, w, delta, &map, &[m])?;
            let log_max = with.components.iter().map(|c| c.log_max).fold(f64::INFINITY, f64::min);
            let log_max_without = without.components.iter().map(|c| c.log_max).fold(f64::NEG_INFINITY, f64::max);
            Ok(NetDiagnostic {
                j,
                w: w.clone(),
                delta,
                components: map.component_count(),
                log_max,
                passed: with.all_unbounded(),
                log_max_without,
                attribution_ok: without.components.iter().all(|c| !c.unbounded),
            })
        })
        .collect()
}

/// Finite witness Σ_j ε_j e^{iθ_j} f_{w_j} over a boundary net, with
/// unboundedness diagnostics at every net point. Phases start at +1 and are
/// re-drawn (up to 3 times) when some net verdict fails.
pub fn assemble_witness(domain: &Domain, truncation: usize, q: f64, m: f64, budget: u64, seed: u64) -> Result<WitnessReport> {
    if truncation == 0 {
        return Err(LabError::Input("J must be at least 1".into()));
    }
    let spec = MetricSpec::new(q, truncation)?;
    let p_ref = *spec.p_sequence.last().unwrap();
    let family = witness_family(domain)?;
    let arc = Arc::new(domain.clone());
    let net = boundary_net(domain, truncation, seed)?;
    let mut kernels = Vec::with_capacity(truncation);
    let mut norms = Vec::with_capacity(truncation);
    for (j, w) in net.iter().enumerate() {
        let k = SingularKernel::build(family, &arc, w.clone(), derive(seed, 0x3e7, j as u64))?;
        let mass = lp_mass(&Combination::single(Arc::new(k.clone())), domain, p_ref, None, budget, derive(seed, 0x3a5, j as u64))?;
        if mass.verdict == Verdict::Divergent {
            return Err(LabError::NotInSpace { index: j + 1, p: p_ref });
        }
        norms.push(mass.estimate.powf(1.0 / p_ref));
        kernels.push(k.spec.clone());
    }
    let epsilons: Vec<f64> = norms.iter().enumerate().map(|(j, n)| 0.5f64.powi(j as i32 + 1) / (1.0 + n)).collect();
    let partial_sums = epsilons
        .iter()
        .zip(&norms)
        .scan(0.0, |acc, (e, n)| {
            *acc += e * n;
            Some(*acc)
        })
        .collect();
    let mut series = WitnessSeries {
        domain: domain.clone(),
        q,
        truncation,
        p_ref,
        net,
        kernels,
        epsilons,
        phases: vec![c(1.0, 0.0); truncation],
        norms,
        partial_sums,
        seed,
    };
    let mut rng = stream_rng(seed, 0xfa5e);
    for attempt in 1..=4 {
        let f = series.combination()?;
        let diagnostics = diagnose(&series, &f, m, seed)?;
        let report = WitnessReport { series: series.clone(), m, attempts: attempt, diagnostics };
        if report.all_pass() {
            return Ok(report);
        }
        if attempt == 4 {
            let failing = report.diagnostics.iter().filter(|d| !(d.passed && d.attribution_ok)).map(|d| d.j).collect();
            return Err(LabError::WitnessDegraded(failing));
        }
        series.phases = (0..truncation).map(|_| C64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))).collect();
    }
    unreachable!()
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelLocalVerdict {
    pub kernel: String,
    pub threshold: ThresholdVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct SqVerdict {
    pub w: Point,
    pub epsilon: f64,
    pub q: f64,
    pub verdict: Verdict,
    pub kernels: Vec<KernelLocalVerdict>,
}

impl SqVerdict {
    /// ∫_{B(w,ε)∩Ω} |f|^q = ∞ at the verdict level.
    pub fn divergent(&self) -> bool {
        self.verdict == Verdict::Divergent
    }
}

/// Whether ∫_{B(w,ε)∩Ω} |f|^q dv = ∞: shell profiles of the kernels of f
/// singular inside B(w, ε), restricted to the ball. Divergent if any is
/// divergent at q, finite if all are finite (or none lies in the ball).
pub fn sq_membership(f: &Combination, w: &[C64], epsilon: f64, q: f64, budget: u64, seed: u64) -> Result<SqVerdict> {
    if !(epsilon > 0.0 && q > 0.0) {
        return Err(LabError::Input("need epsilon > 0 and q > 0".into()));
    }
    let region = Region::new(w.to_vec(), epsilon);
    let mut kernels = Vec::new();
    let mut verdict = Verdict::Finite;
    for (i, (a, k)) in f.terms.iter().enumerate() {
        if *a == c(0.0, 0.0) || dist(k.zeta(), w) >= epsilon {
            continue;
        }
        let ks = default_shells(k);
        let per_shell = (budget / (ks.1 - ks.0 + 1) as u64).max(1000);
        let profile = shell_profile(k, ks, &[q], per_shell, Some(&region), derive(seed, 0x5a, i as u64))?;
        let t = estimate_threshold(&profile, &[q], derive(seed, 0x5b, i as u64))?;
        match t.verdict_at(q).unwrap() {
            Verdict::Divergent => verdict = Verdict::Divergent,
            Verdict::Inconclusive if verdict == Verdict::Finite => verdict = Verdict::Inconclusive,
            _ => {}
        }
        kernels.push(KernelLocalVerdict { kernel: k.label(), threshold: t });
    }
    Ok(SqVerdict { w: w.to_vec(), epsilon, q, verdict, kernels })
}

#[derive(Debug, Clone, Serialize)]
pub struct EnlargementCheck {
    pub near: SqVerdict,
    pub enlarged: SqVerdict,
    /// Divergence at (w′, ε) with |w′ − w| < ε implies divergence at (w, 2ε).
    pub consistent: bool,
}

/// B(w, 2ε) ⊇ B(w′, ε) when |w′ − w| < ε, so a divergent verdict at
/// (w′, ε) must carry over to (w, 2ε).
pub fn enlargement_check(
    f: &Combination,
    w: &[C64],
    w_near: &[C64],
    epsilon: f64,
    q: f64,
    budget: u64,
    seed: u64,
) -> Result<EnlargementCheck> {
    if dist(w, w_near) >= epsilon {
        return Err(LabError::Input("enlargement needs |w' - w| < epsilon".into()));
    }
    let near = sq_membership(f, w_near, epsilon, q, budget, derive(seed, 0xe1, 0))?;
    let enlarged = sq_membership(f, w, 2.0 * epsilon, q, budget, derive(seed, 0xe1, 1))?;
    let consistent = !near.divergent() || enlarged.divergent();
    Ok(EnlargementCheck { near, enlarged, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pole(d: &Arc<Domain>, z: C64) -> Combination {
        Combination::single(Arc::new(SingularKernel::build(KernelFamily::PlanarPole, d, vec![z], 1).unwrap()))
    }

    #[test]
    fn zero_base_running_max_is_spike() {
        let d = Arc::new(Domain::unit_disk());
        let phi = pole(&d, c(1.0, 0.0));
        let probes = approach_probes(&d, &[c(1.0, 0.0)], &[c(0.5, 0.0)]);
        let r = densify(&Combination::zero(), &phi, 1.0, &probes, Some(1e100)).unwrap();
        assert!(r.bound_holds);
        for s in &r.steps {
            assert!((s.log_abs_sum - s.log_abs_phi).abs() < 1e-9);
        }
        assert!(r.log_achieved > 1e11);
    }

    #[test]
    fn short_probe_is_exhausted() {
        let d = Arc::new(Domain::unit_disk());
        let phi = pole(&d, c(1.0, 0.0));
        let probes = vec![Probe::at(&[c(0.5, 0.0)])];
        let e = densify(&Combination::zero(), &phi, 1.0, &probes, Some(10.0)).unwrap_err();
        assert_eq!(e.code(), "probe-exhausted");
    }

    #[test]
    fn far_ball_is_bounded() {
        let d = Arc::new(Domain::unit_disk());
        let f = pole(&d, c(1.0, 0.0));
        let w = [c(-1.0, 0.0)];
        let map = connected_components(&d, &w, 0.1, GraphSpec::Grid { h: 0.002 }, None, 0).unwrap();
        let r = unboundedness_verdict(&f, &d, &w, 0.1, &map, &M_GRID).unwrap();
        assert_eq!(r.components.len(), 1);
        assert!(!r.components[0].unbounded);
        assert!((r.components[0].log_max.exp() - 1.0 / 1.9).abs() < 0.005);
    }

    #[test]
    fn net_points_lie_on_the_square_boundary() {
        let d = Domain::unit_square();
        let net = boundary_net(&d, 8, 3).unwrap();
        for w in &net {
            let x = w[0];
            let on = [x.re, 1.0 - x.re, x.im, 1.0 - x.im].iter().any(|t| t.abs() < 1e-12);
            assert!(on && !d.contains(w));
        }
    }
}
