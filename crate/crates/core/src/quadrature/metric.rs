use serde::{Deserialize, Serialize};

use super::fit::Verdict;
use super::mass::{lp_mass_multi, MassEstimate};
use super::ser_inf;
use crate::cvec::c;
use crate::error::{LabError, Result};
use crate::geometry::Domain;
use crate::kernels::{theoretical_threshold, Combination};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    /// Terms ‖f−g‖_{p_j}.
    Norm,
    /// Terms d_{p_j}(f,g) = ∫|f−g|^{p_j}, for 0 < q ≤ 1.
    Power,
}

/// d(f,g) = Σ_{j≤J} 2^{−j} x_j/(1+x_j) on ∩_{p<q} OL^p.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSpec {
    #[serde(serialize_with = "ser_inf", deserialize_with = "super::de_inf")]
    pub q: f64,
    pub p_sequence: Vec<f64>,
    pub flavor: Flavor,
    pub truncation: usize,
}

impl MetricSpec {
    /// Default exponents: p_j = j + 1 for q = ∞, q(1 − 2^{−j−1}) otherwise
    /// (clipped to ≥ 1 for q > 1).
    pub fn new(q: f64, truncation: usize) -> Result<MetricSpec> {
        if q.is_nan() || q <= 0.0 || truncation == 0 {
            return Err(LabError::Input("metric needs q > 0 and J >= 1".into()));
        }
        let p_sequence: Vec<f64> = (1..=truncation)
            .map(|j| {
                if q.is_infinite() {
                    (j + 1) as f64
                } else {
                    let p = q * (1.0 - 0.5f64.powi(j as i32 + 1));
                    if q > 1.0 { p.max(1.0) } else { p }
                }
            })
            .collect();
        if p_sequence.windows(2).any(|w| w[1] <= w[0]) {
            return Err(LabError::Input("p sequence is not strictly increasing".into()));
        }
        let flavor = if q <= 1.0 { Flavor::Power } else { Flavor::Norm };
        Ok(MetricSpec { q, p_sequence, flavor, truncation })
    }

    pub fn weight(&self, j: usize) -> f64 {
        0.5f64.powi(j as i32)
    }

    pub fn tail_bound(&self) -> f64 {
        0.5f64.powi(self.truncation as i32)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricTerm {
    pub j: usize,
    pub p: f64,
    #[serde(serialize_with = "ser_inf")]
    pub x: f64,
    pub contribution: f64,
    pub stderr: f64,
    /// Mass not resolvable at this exponent although the function lies in
    /// the space; the term is bounded by its weight.
    pub saturated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricDistance {
    pub value: f64,
    pub stderr: f64,
    pub tail_bound: f64,
    pub terms: Vec<MetricTerm>,
    pub samples: u64,
}

/// Terms sorted by kernel label so that f − g and g − f share strata and
/// sample points exactly.
pub fn canonical(h: &Combination) -> Combination {
    let mut out = h.clone();
    out.terms.sort_by_key(|(_, k)| k.label());
    out
}

/// Whether every kernel with a nonzero coefficient has p* ≥ q.
fn in_space(h: &Combination, domain: &Domain, q: f64) -> bool {
    h.terms.iter().filter(|(a, _)| *a != c(0.0, 0.0)).all(|(_, k)| match theoretical_threshold(k, domain) {
        Ok(t) => t.value().is_some_and(|v| v >= q),
        Err(_) => false,
    })
}

/// Distance from precomputed masses of h = f − g.
pub fn distance_from_masses(spec: &MetricSpec, masses: &MassEstimate, in_space: bool) -> Result<MetricDistance> {
    let mut terms = Vec::new();
    let mut value = 0.0;
    let mut stderr = 0.0;
    for (i, &p) in spec.p_sequence.iter().enumerate() {
        let j = i + 1;
        let w = spec.weight(j);
        let (m, e) = (masses.mass[i], masses.stderr[i]);
        if masses.verdict[i] == Verdict::Divergent || !m.is_finite() {
            if !in_space {
                return Err(LabError::NotInSpace { index: j, p });
            }
            terms.push(MetricTerm { j, p, x: f64::INFINITY, contribution: w, stderr: 0.0, saturated: true });
            value += w;
            continue;
        }
        let (x, dx) = match spec.flavor {
            Flavor::Norm => {
                let x = m.powf(1.0 / p);
                (x, if m > 0.0 { x / (p * m) * e } else { 0.0 })
            }
            Flavor::Power => (m, e),
        };
        let contribution = w * x / (1.0 + x);
        let se = w * dx / ((1.0 + x) * (1.0 + x));
        value += contribution;
        stderr += se;
        terms.push(MetricTerm { j, p, x, contribution, stderr: se, saturated: false });
    }
    Ok(MetricDistance { value, stderr, tail_bound: spec.tail_bound(), terms, samples: masses.samples })
}

/// Truncated metric d(f, g); terms use one multi-exponent mass pass on f − g.
pub fn metric_distance(
    spec: &MetricSpec,
    f: &Combination,
    g: &Combination,
    domain: &Domain,
    budget: u64,
    seed: u64,
) -> Result<MetricDistance> {
    let h = canonical(&f.sub(g));
    if h.is_zero() {
        let zero = MassEstimate {
            ps: spec.p_sequence.clone(),
            mass: vec![0.0; spec.truncation],
            stderr: vec![0.0; spec.truncation],
            tail: vec![0.0; spec.truncation],
            tail_slope: vec![f64::NEG_INFINITY; spec.truncation],
            verdict: vec![Verdict::Finite; spec.truncation],
            samples: 0,
            last_shell: Vec::new(),
        };
        return distance_from_masses(spec, &zero, true);
    }
    let masses = lp_mass_multi(&h, domain, &spec.p_sequence, None, budget, seed)?;
    distance_from_masses(spec, &masses, in_space(&h, domain, spec.q))
}

/// d(λ_k f, λ f) for each λ_k, from one mass pass on f (exact |t|^p scaling).
pub fn scalar_continuity_check(
    spec: &MetricSpec,
    lambdas: &[f64],
    lambda: f64,
    f: &Combination,
    domain: &Domain,
    budget: u64,
    seed: u64,
) -> Result<Vec<MetricDistance>> {
    let base = canonical(f);
    let masses = if base.is_zero() {
        None
    } else {
        Some(lp_mass_multi(&base, domain, &spec.p_sequence, None, budget, seed)?)
    };
    let ok = in_space(&base, domain, spec.q);
    lambdas
        .iter()
        .map(|&lk| match &masses {
            Some(m) if lk != lambda => distance_from_masses(spec, &m.scaled(lk - lambda), ok),
            _ => metric_distance(spec, &Combination::zero(), &Combination::zero(), domain, 0, seed),
        })
        .collect()
}
