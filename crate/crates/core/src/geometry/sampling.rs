use rand::Rng;
use serde::Serialize;

use super::domain::{Domain, GraphProfile};
use crate::cvec::{c, Point};
use crate::error::{LabError, Result};
use crate::rng::{ball_volume, par_chunks, uniform_in_ball, LabRng, CHUNK};

/// Proposal budget after which rejection sampling gives up.
pub const MAX_PROPOSALS: u64 = 10_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct UniformSample {
    pub points: Vec<Point>,
    pub proposals: u64,
    pub acceptance_rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NearSample {
    pub points: Vec<Point>,
    pub proposals: u64,
    pub volume: f64,
    pub stderr: f64,
}

/// Runs a proposal function in rounds of whole chunks until `count` points
/// are accepted or `max_proposals` is reached. Returns accepted points (in
/// chunk order, truncated to `count`) and the number of proposals made.
fn collect<F>(seed: u64, count: usize, max_proposals: u64, propose: F) -> (Vec<Point>, u64, u64)
where
    F: Fn(&mut LabRng) -> Option<Point> + Sync,
{
    let mut accepted: Vec<Point> = Vec::with_capacity(count);
    let mut hits: u64 = 0;
    let mut proposals: u64 = 0;
    let mut stream: u64 = 0;
    let mut round_chunks: u64 = 16;
    while accepted.len() < count && proposals < max_proposals {
        let total = (round_chunks * CHUNK).min(max_proposals - proposals);
        let results = par_chunks(seed, stream, total, CHUNK, |rng, len| {
            let mut pts = Vec::new();
            for _ in 0..len {
                if let Some(p) = propose(rng) {
                    pts.push(p);
                }
            }
            (pts, len)
        });
        stream += total.div_ceil(CHUNK);
        for (pts, len) in results {
            if accepted.len() >= count {
                break;
            }
            proposals += len;
            hits += pts.len() as u64;
            accepted.extend(pts);
        }
        round_chunks = (round_chunks * 2).min(1024);
    }
    accepted.truncate(count);
    (accepted, proposals, hits)
}

fn bbox_point(rng: &mut LabRng, domain: &Domain) -> Point {
    domain
        .bounding_box
        .chunks(2)
        .map(|b| c(rng.random_range(b[0].0..=b[0].1), rng.random_range(b[1].0..=b[1].1)))
        .collect()
}

/// Rejection sampling from the bounding box.
pub fn sample_uniform(domain: &Domain, count: usize, seed: u64) -> Result<UniformSample> {
    if count == 0 {
        return Err(LabError::Input("count must be at least 1".into()));
    }
    let (points, proposals, hits) = collect(seed, count, MAX_PROPOSALS, |rng| {
        let z = bbox_point(rng, domain);
        domain.contains(&z).then_some(z)
    });
    let rate = hits as f64 / proposals.max(1) as f64;
    if points.len() < count {
        return Err(LabError::DegenerateDomain { rate, proposals });
    }
    Ok(UniformSample { points, proposals, acceptance_rate: rate })
}

/// Uniform sampling of B(center, radius) ∩ Ω with a volume estimate.
pub fn sample_near(domain: &Domain, center: &[f64], radius: f64, count: usize, seed: u64) -> Result<NearSample> {
    if radius <= 0.0 || count == 0 {
        return Err(LabError::Input("radius and count must be positive".into()));
    }
    let dim = domain.real_dim();
    if center.len() != dim {
        return Err(LabError::Input(format!("center must have {dim} real coordinates")));
    }
    let (points, proposals, hits) = collect(seed, count, MAX_PROPOSALS, |rng| {
        let mut x = vec![0.0; dim];
        uniform_in_ball(rng, dim, radius, &mut x);
        for (xi, ci) in x.iter_mut().zip(center) {
            *xi += ci;
        }
        let z = crate::cvec::from_real(&x);
        domain.contains(&z).then_some(z)
    });
    if hits == 0 {
        return Err(LabError::EmptyIntersection { proposals });
    }
    let p = hits as f64 / proposals as f64;
    let vb = ball_volume(dim, radius);
    Ok(NearSample {
        points,
        proposals,
        volume: vb * p,
        stderr: vb * (p * (1.0 - p) / proposals as f64).sqrt(),
    })
}

/// Uniform sampling of a planar graph domain through the dyadic boxes
/// {2^{-k-1} < x < 2^{-k}, 0 < y < h(2^{-k})}, each chosen with probability
/// proportional to its exact volume. Suited to cusps too thin for bounding
/// box rejection. Boxes whose volume underflows are dropped.
pub fn sample_graph_stratified(domain: &Domain, count: usize, seed: u64) -> Result<UniformSample> {
    let profile: GraphProfile = domain
        .graph_profile()
        .ok_or_else(|| LabError::UnsupportedFamily(domain.family_tag().into()))?;
    let boxes: Vec<(f64, f64, f64)> = (0..60)
        .map(|k| {
            let hi = 0.5f64.powi(k);
            let h = profile.log_height(hi).exp();
            (hi / 2.0, hi, h)
        })
        .filter(|b| b.2 > 0.0)
        .collect();
    let weights: Vec<f64> = boxes.iter().map(|(lo, hi, h)| (hi - lo) * h).collect();
    let total: f64 = weights.iter().sum();
    let cdf: Vec<f64> = weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w / total;
            Some(*acc)
        })
        .collect();
    let (points, proposals, hits) = collect(seed, count, MAX_PROPOSALS, |rng| {
        let u: f64 = rng.random();
        let i = cdf.iter().position(|&f| u < f).unwrap_or(boxes.len() - 1);
        let (lo, hi, h) = boxes[i];
        let z = c(rng.random_range(lo..hi), rng.random_range(0.0..h));
        domain.contains(&[z]).then(|| vec![z])
    });
    let rate = hits as f64 / proposals.max(1) as f64;
    if points.len() < count {
        return Err(LabError::DegenerateDomain { rate, proposals });
    }
    Ok(UniformSample { points, proposals, acceptance_rate: rate })
}
