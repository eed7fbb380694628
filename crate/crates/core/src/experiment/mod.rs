//! Serializable experiment configs, the flag grammar, and the reports the
//! binary writes.
//!
//! Domains are written `family:key=val,...` (list values separated by `;`),
//! kernels `family[:key=val]`, and functions as `+`-separated terms
//! `[coef*]kernel[@re,im,...]`, `const:re[,im]` or `zero`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cvec::{c, Point};
use crate::error::{LabError, Result};
use crate::genericity::assemble_witness;
use crate::geometry::{connected_components, Domain, DomainFamily, GraphSpec};
use crate::kernels::{theoretical_threshold, Combination, KernelFamily, SingularKernel, Threshold};
use crate::levi::{compute_beta, verify_coercivity};
use crate::quadrature::{
    de_inf, default_shells, estimate_threshold, log_law_fit, metric_distance, ser_inf, shell_profile, MetricSpec,
};
use crate::rng::derive;

/// Exit codes of the binary.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const TOLERANCE: i32 = 2;
    pub const INPUT: i32 = 3;
    pub const NUMERIC: i32 = 4;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    Threshold {
        domain: String,
        kernel: String,
        #[serde(default)]
        zeta: Option<Vec<f64>>,
        #[serde(default)]
        p_grid: Option<Vec<f64>>,
        #[serde(default)]
        shells: Option<(i32, i32)>,
        per_shell: u64,
        tolerance: f64,
    },
    Coercivity {
        domain: String,
        beta_scale: f64,
        pairs: u64,
        boundary_samples: usize,
    },
    Witness {
        domain: String,
        #[serde(rename = "J")]
        j: usize,
        #[serde(serialize_with = "ser_inf", deserialize_with = "de_inf")]
        q: f64,
        m: f64,
        budget: u64,
    },
    Metric {
        domain: String,
        #[serde(serialize_with = "ser_inf", deserialize_with = "de_inf")]
        q: f64,
        #[serde(rename = "J")]
        j: usize,
        f: String,
        g: String,
        budget: u64,
    },
    Loglaw {
        n: usize,
        p: f64,
        radii: Vec<f64>,
        budget: u64,
    },
    Components {
        domain: String,
        w: Vec<f64>,
        delta: f64,
        #[serde(default)]
        graph: Option<GraphSpec>,
    },
}

/// One experiment: a command with its parameters, the seed and optional
/// output paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub command: Command,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub version: String,
    pub pass: bool,
    pub result: Value,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub csv: Option<String>,
    pub exit_code: i32,
}

impl Outcome {
    pub fn json(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("report serializes") + "\n"
    }
}

/// Exit code for an error: 4 for numeric instability, 3 otherwise.
pub fn error_code(e: &LabError) -> i32 {
    if e.is_numeric() {
        exit::NUMERIC
    } else {
        exit::INPUT
    }
}

/// JSON number, or "inf"/"-inf"/"nan" for non-finite values.
fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(if v.is_nan() { "nan" } else if v > 0.0 { "inf" } else { "-inf" })
    }
}

fn bad(msg: impl Into<String>) -> LabError {
    LabError::Input(msg.into())
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| bad(format!("not a number: {s}")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|_| bad(format!("not an integer: {s}")))
}

/// `re,im,re,im,...` → complex vector.
pub fn parse_complex_vec(values: &[f64]) -> Result<Point> {
    if values.is_empty() || values.len() % 2 != 0 {
        return Err(bad("complex vectors need an even number of reals (re,im pairs)"));
    }
    Ok(values.chunks(2).map(|p| c(p[0], p[1])).collect())
}

pub fn parse_reals(s: &str, sep: char) -> Result<Vec<f64>> {
    s.split(sep).filter(|t| !t.trim().is_empty()).map(parse_f64).collect()
}

fn split_spec(s: &str) -> Result<(&str, Vec<(&str, &str)>)> {
    let (name, rest) = match s.split_once(':') {
        Some((a, b)) => (a.trim(), b),
        None => (s.trim(), ""),
    };
    let mut kv = Vec::new();
    for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| bad(format!("expected key=value in '{part}'")))?;
        kv.push((k.trim(), v.trim()));
    }
    Ok((name, kv))
}

fn get<'a>(kv: &[(&str, &'a str)], key: &str) -> Option<&'a str> {
    kv.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

fn check_keys(kv: &[(&str, &str)], allowed: &[&str]) -> Result<()> {
    for (k, _) in kv {
        if !allowed.contains(k) {
            return Err(bad(format!("unknown key '{k}'")));
        }
    }
    Ok(())
}

/// Parses `family:key=val,...` into a domain.
pub fn parse_domain(s: &str) -> Result<Domain> {
    let (name, kv) = split_spec(s)?;
    let f = |k: &str, d: f64| get(&kv, k).map(parse_f64).unwrap_or(Ok(d));
    let n = |d: usize| get(&kv, "n").map(parse_usize).unwrap_or(Ok(d));
    let family = match name {
        "disk" => {
            check_keys(&kv, &["r", "cx", "cy"])?;
            DomainFamily::Disk { center: c(f("cx", 0.0)?, f("cy", 0.0)?), radius: f("r", 1.0)? }
        }
        "annulus" => {
            check_keys(&kv, &["inner", "outer"])?;
            DomainFamily::Annulus { center: c(0.0, 0.0), inner: f("inner", 0.5)?, outer: f("outer", 1.0)? }
        }
        "horseshoe" => {
            check_keys(&kv, &["inner", "outer", "gap"])?;
            DomainFamily::Horseshoe { inner: f("inner", 0.5)?, outer: f("outer", 1.0)?, gap: f("gap", 0.3)? }
        }
        "cusp" => {
            check_keys(&kv, &["alpha"])?;
            DomainFamily::Cusp { alpha: f("alpha", 2.0)? }
        }
        "expcusp" => {
            check_keys(&kv, &[])?;
            DomainFamily::ExpCusp
        }
        "ball" => {
            check_keys(&kv, &["n", "r"])?;
            DomainFamily::Ball { n: n(2)?, radius: f("r", 1.0)? }
        }
        "ellipsoid" => {
            check_keys(&kv, &["a"])?;
            DomainFamily::Ellipsoid { radii: parse_reals(get(&kv, "a").unwrap_or("1;2"), ';')? }
        }
        "halfball" => {
            check_keys(&kv, &["n"])?;
            DomainFamily::HalfBall { n: n(2)? }
        }
        "square" => {
            check_keys(&kv, &[])?;
            DomainFamily::Box { n: 1 }
        }
        "box" => {
            check_keys(&kv, &["n"])?;
            DomainFamily::Box { n: n(1)? }
        }
        "polydisk" => {
            check_keys(&kv, &["n"])?;
            DomainFamily::Polydisk { n: n(2)? }
        }
        "hull" => {
            check_keys(&kv, &["points"])?;
            let pts = parse_complex_vec(&parse_reals(get(&kv, "points").unwrap_or(""), ';')?)?;
            DomainFamily::ConvexHull { points: pts }
        }
        other => return Err(bad(format!("unknown domain family '{other}'"))),
    };
    Domain::new(family)
}

/// Parses a kernel family name; cusp kernels read α from the domain.
pub fn parse_kernel(s: &str, domain: &Domain) -> Result<KernelFamily> {
    let (name, kv) = split_spec(s)?;
    let q = || -> Result<f64> {
        check_keys(&kv, &["q"])?;
        get(&kv, "q").map(parse_f64).unwrap_or_else(|| Err(bad(format!("{name} needs q=..."))))
    };
    let alpha = match domain.family {
        DomainFamily::Cusp { alpha } => Some(alpha),
        _ => None,
    };
    let need_alpha = || alpha.ok_or_else(|| bad(format!("{name} needs a cusp:alpha=... domain")));
    Ok(match name {
        "planar-pole" => KernelFamily::PlanarPole,
        "planar-log" => KernelFamily::PlanarLog,
        "planar-power" => KernelFamily::PlanarPower { q: q()? },
        "cusp-base" => {
            let a = need_alpha()?;
            KernelFamily::CuspMonomial { alpha: a, q: a + 1.0 }
        }
        "cusp-monomial" => KernelFamily::CuspMonomial { alpha: need_alpha()?, q: q()? },
        "inv-power" | "cusp-inverse-power" => {
            check_keys(&kv, &["N"])?;
            let n = get(&kv, "N").map(parse_usize).unwrap_or(Ok(1))?;
            KernelFamily::CuspInversePower { n: n as u32 }
        }
        "ball-pole" => KernelFamily::BallPole,
        "ball-log" => KernelFamily::BallLog,
        "ball-power" => KernelFamily::BallPower { q: q()? },
        "convex-pole" => KernelFamily::ConvexPole,
        "convex-log" => KernelFamily::ConvexLog,
        "convex-power" => KernelFamily::ConvexPower { q: q()? },
        "levi-pole" => KernelFamily::LeviPole,
        "levi-log" => KernelFamily::LeviLog,
        "levi-power" => KernelFamily::LeviPower { q: q()? },
        other => return Err(bad(format!("unknown kernel family '{other}'"))),
    })
}

/// A canonical singular boundary point per domain family.
pub fn default_zeta(domain: &Domain) -> Result<Point> {
    let n = domain.n;
    let mut e1 = vec![c(0.0, 0.0); n];
    Ok(match &domain.family {
        DomainFamily::Disk { center, radius } => vec![center + radius],
        DomainFamily::Annulus { center, outer, .. } => vec![center + outer],
        DomainFamily::Horseshoe { outer, .. } => vec![c(*outer, 0.0)],
        DomainFamily::Cusp { .. } | DomainFamily::ExpCusp => vec![c(0.0, 0.0)],
        DomainFamily::Ball { radius, .. } => {
            e1[0] = c(*radius, 0.0);
            e1
        }
        DomainFamily::Ellipsoid { radii } => {
            e1[0] = c(radii[0], 0.0);
            e1
        }
        DomainFamily::HalfBall { .. } => e1,
        DomainFamily::Box { .. } => {
            let mut z = vec![c(0.5, 0.5); n];
            z[0] = c(1.0, 0.5);
            z
        }
        DomainFamily::Polydisk { .. } => {
            e1[0] = c(1.0, 0.0);
            for z in e1.iter_mut().skip(1) {
                *z = c(0.0, 0.0);
            }
            e1
        }
        _ => return Err(bad(format!("no default boundary point on {}; pass --zeta", domain.family_tag()))),
    })
}

/// `+`-separated terms `[coef*]kernel[@re,im,...]`, `const:re[,im]` or `zero`.
pub fn parse_function(s: &str, domain: &Arc<Domain>, seed: u64) -> Result<Combination> {
    let mut f = Combination::zero();
    for (i, term) in s.split('+').map(str::trim).enumerate() {
        if term.is_empty() || term == "zero" || term == "0" {
            continue;
        }
        if let Some(v) = term.strip_prefix("const:") {
            let r = parse_reals(v, ',')?;
            let value = match r.as_slice() {
                [re] => c(*re, 0.0),
                [re, im] => c(*re, *im),
                _ => return Err(bad("const needs re[,im]")),
            };
            f = f.add(&Combination::constant(value));
            continue;
        }
        let (coef, rest) = match term.split_once('*') {
            Some((a, b)) => (parse_f64(a)?, b),
            None => (1.0, term),
        };
        let (name, zeta) = match rest.split_once('@') {
            Some((a, b)) => (a, parse_complex_vec(&parse_reals(b, ',')?)?),
            None => (rest, default_zeta(domain)?),
        };
        let fam = parse_kernel(name, domain)?;
        let k = SingularKernel::build(fam, domain, zeta, derive(seed, 0xf00, i as u64))?;
        f = f.with_term(c(coef, 0.0), Arc::new(k));
    }
    Ok(f)
}

impl ExperimentConfig {
    /// Fills defaults so the embedded config is fully explicit.
    pub fn resolve(mut self) -> Result<ExperimentConfig> {
        if let Command::Threshold { domain, kernel, zeta, p_grid, shells, .. } = &mut self.command {
            let d = Arc::new(parse_domain(domain)?);
            let fam = parse_kernel(kernel, &d)?;
            if zeta.is_none() {
                *zeta = Some(default_zeta(&d)?.iter().flat_map(|z| [z.re, z.im]).collect());
            }
            let k = SingularKernel::build(fam, &d, parse_complex_vec(zeta.as_ref().unwrap())?, self.seed)?;
            if shells.is_none() {
                *shells = Some(default_shells(&k));
            }
            if p_grid.is_none() {
                let t = theoretical_threshold(&k, &d).ok().and_then(|t| t.value()).filter(|v| v.is_finite());
                *p_grid = Some(match t {
                    Some(v) => [0.5, 0.9, 1.0, 1.1, 1.5].iter().map(|m| (m * v * 1e6).round() / 1e6).collect(),
                    None => vec![1.0, 2.0, 4.0, 8.0, 16.0],
                });
            }
        }
        Ok(self)
    }
}

/// Runs a config after resolving its defaults.
pub fn run(config: ExperimentConfig) -> Result<Outcome> {
    let config = config.resolve()?;
    let seed = config.seed;
    let mut csv = None;
    let (pass, result) = match &config.command {
        Command::Threshold { domain, kernel, zeta, p_grid, shells, per_shell, tolerance } => {
            let d = Arc::new(parse_domain(domain)?);
            let fam = parse_kernel(kernel, &d)?;
            let k = SingularKernel::build(fam, &d, parse_complex_vec(zeta.as_ref().unwrap())?, seed)?;
            let grid = p_grid.clone().unwrap();
            let profile = shell_profile(&k, shells.unwrap(), &grid, *per_shell, None, derive(seed, 1, 0))?;
            let t = estimate_threshold(&profile, &grid, derive(seed, 2, 0))?;
            let theory = theoretical_threshold(&k, &d).ok();
            let pass = theory.is_none_or(|th: Threshold| th.accepts(t.p_star_hat, *tolerance));
            let mut buf = Vec::new();
            profile.write_csv(&mut buf)?;
            csv = Some(String::from_utf8(buf).expect("csv is utf-8"));
            (
                pass,
                json!({
                    "kernel": k.label(),
                    "domain": &*d,
                    "gamma_hat": t.gamma_hat,
                    "p_star_hat": num(t.p_star_hat),
                    "stderr": num(t.p_star_stderr),
                    "estimate": t,
                    "theoretical": theory,
                    "samples": profile.proposals.iter().sum::<u64>(),
                }),
            )
        }
        Command::Coercivity { domain, beta_scale, pairs, boundary_samples } => {
            let d = parse_domain(domain)?;
            let df = d
                .defining_fn()
                .ok_or_else(|| LabError::UnsupportedFamily(format!("{} has no defining function", d.family_tag())))?;
            let mut levi = compute_beta(&df, &d, *boundary_samples, derive(seed, 3, 0))?;
            levi.beta *= beta_scale;
            let rep = verify_coercivity(&df, &levi, *pairs, derive(seed, 4, 0));
            (rep.violations == 0, json!({ "beta": rep.beta, "epsilon": rep.epsilon, "violations": rep.violations,
                "min_margin": num(rep.min_margin), "pairs": rep.pairs, "lambda_min": levi.lambda_min }))
        }
        Command::Witness { domain, j, q, m, budget } => {
            let d = parse_domain(domain)?;
            let rep = assemble_witness(&d, *j, *q, *m, *budget, seed)?;
            (rep.all_pass(), serde_json::to_value(&rep).map_err(|e| LabError::Io(e.to_string()))?)
        }
        Command::Metric { domain, q, j, f, g, budget } => {
            let d = Arc::new(parse_domain(domain)?);
            let spec = MetricSpec::new(*q, *j)?;
            let fv = parse_function(f, &d, derive(seed, 5, 0))?;
            let gv = parse_function(g, &d, derive(seed, 5, 1))?;
            let dist = metric_distance(&spec, &fv, &gv, &d, *budget, derive(seed, 6, 0))?;
            (dist.value.is_finite(), json!({ "spec": spec, "distance": dist }))
        }
        Command::Loglaw { n, p, radii, budget } => {
            let fit = log_law_fit(*n, *p, radii, *budget, seed)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["r", "J", "stderr", "log_term"]).map_err(|e| LabError::Io(e.to_string()))?;
            for pt in &fit.points {
                w.write_record([pt.r, pt.j, pt.stderr, pt.log_term].map(|x| format!("{x:e}")))
                    .map_err(|e| LabError::Io(e.to_string()))?;
            }
            csv = Some(String::from_utf8(w.into_inner().map_err(|e| LabError::Io(e.to_string()))?).unwrap());
            (fit.slope > 0.0, serde_json::to_value(&fit).map_err(|e| LabError::Io(e.to_string()))?)
        }
        Command::Components { domain, w, delta, graph } => {
            let d = parse_domain(domain)?;
            let wv = parse_complex_vec(w)?;
            let spec = graph.unwrap_or(if d.n == 1 {
                GraphSpec::Grid { h: delta / 200.0 }
            } else {
                GraphSpec::Samples { count: 20_000, eps_factor: 4.0 }
            });
            let map = connected_components(&d, &wv, *delta, spec, None, seed)?;
            (
                true,
                json!({ "components": map.component_count(), "sizes": map.component_sizes,
                    "distinguished": map.distinguished, "representatives": map.representatives,
                    "spacing": map.spacing, "eps": map.eps, "graph": map.spec }),
            )
        }
    };
    let report = Report { config, seed, version: env!("CARGO_PKG_VERSION").to_string(), pass, result };
    Ok(Outcome { report, csv, exit_code: if pass { exit::PASS } else { exit::TOLERANCE } })
}

/// Manifest: a JSON array of configs, or `{"experiments": [...]}`.
pub fn parse_manifest(text: &str) -> Result<Vec<ExperimentConfig>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Manifest {
        List(Vec<ExperimentConfig>),
        Wrapped { experiments: Vec<ExperimentConfig> },
    }
    match serde_json::from_str::<Manifest>(text).map_err(|e| bad(format!("manifest: {e}")))? {
        Manifest::List(v) | Manifest::Wrapped { experiments: v } => Ok(v),
    }
}

/// Re-runs the config embedded in a report; returns the new outcome and
/// whether its JSON equals `text` byte for byte.
pub fn replay(text: &str) -> Result<(Outcome, bool)> {
    let old: Report = serde_json::from_str(text).map_err(|e| bad(format!("report: {e}")))?;
    let out = run(old.config)?;
    let same = out.json() == text;
    Ok((out, same))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_grammar() {
        assert_eq!(parse_domain("ball:n=3").unwrap().n, 3);
        assert_eq!(parse_domain("ellipsoid:a=1;2").unwrap().family, DomainFamily::Ellipsoid { radii: vec![1.0, 2.0] });
        assert!(parse_domain("ball:m=3").is_err());
        assert!(parse_domain("blob").is_err());
        let d = parse_domain("cusp:alpha=2").unwrap();
        assert_eq!(parse_kernel("cusp-base", &d).unwrap(), KernelFamily::CuspMonomial { alpha: 2.0, q: 3.0 });
        assert_eq!(parse_kernel("inv-power:N=3", &d).unwrap(), KernelFamily::CuspInversePower { n: 3 });
    }

    #[test]
    fn function_grammar() {
        let d = Arc::new(parse_domain("disk").unwrap());
        let f = parse_function("2*planar-pole@1,0 + const:1", &d, 0).unwrap();
        let v = f.eval(&[c(0.0, 0.0)]).unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(parse_function("zero", &d, 0).unwrap().is_zero());
    }

    #[test]
    fn config_round_trip() {
        let cfg = ExperimentConfig {
            command: Command::Metric {
                domain: "disk".into(),
                q: f64::INFINITY,
                j: 20,
                f: "planar-log".into(),
                g: "zero".into(),
                budget: 1000,
            },
            seed: 3,
            output: None,
            csv: None,
        };
        let s = serde_json::to_string(&cfg).unwrap();
        assert!(s.contains("\"q\":\"inf\""));
        let back: ExperimentConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn components_report_is_replayable() {
        let cfg = ExperimentConfig {
            command: Command::Components { domain: "annulus".into(), w: vec![1.0, 0.0], delta: 1.6, graph: None },
            seed: 0,
            output: None,
            csv: None,
        };
        let out = run(cfg).unwrap();
        let (again, same) = replay(&out.json()).unwrap();
        assert!(same);
        assert_eq!(again.exit_code, 0);
    }
}
