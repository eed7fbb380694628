//! Strictly pseudoconvex machinery: the constant β, the Levi polynomial,
//! coercivity checks, Levi coordinates and the model integrals.

mod chart;
mod defining;
mod model;

pub use chart::{levi_coordinates, LeviChart, NormEquivalence};
pub use defining::DefiningFunction;
pub use model::{divergence_integral_2n, model_integral, radial_integral, ModelIntegral, RadialIntegral};

use rand::Rng;
use serde::Serialize;

use crate::cvec::{axpy, from_real, norm_sqr, sub, Point, C64};
use crate::error::{LabError, Result};
use crate::geometry::Domain;
use crate::rng::{par_chunks, stream_rng, uniform_in_ball, unit_vector, Moments};

#[derive(Debug, Clone, Serialize)]
pub struct LeviData {
    pub beta: f64,
    pub epsilon: f64,
    /// Smallest Levi eigenvalue seen on the boundary samples.
    pub lambda_min: f64,
    pub halvings: usize,
    pub boundary_samples: Vec<Point>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoercivityReport {
    pub beta: f64,
    pub epsilon: f64,
    pub pairs: u64,
    pub violations: u64,
    pub min_margin: f64,
}

/// Levi polynomial F(z, ζ) = −[2 Σ ∂ρ_j(ζ) w_j + Σ ∂²ρ_jk(ζ) w_j w_k], w = z − ζ.
pub fn levi_polynomial(df: &DefiningFunction, zeta: &[C64], z: &[C64]) -> C64 {
    let g = df.grad(zeta);
    let h = df.hol_hessian(zeta);
    levi_polynomial_with(&g, &h, &sub(z, zeta))
}

/// F from precomputed ∂ρ(ζ), holomorphic Hessian at ζ and w = z − ζ.
pub fn levi_polynomial_with(g: &[C64], h: &[C64], w: &[C64]) -> C64 {
    let n = w.len();
    let mut lin = C64::new(0.0, 0.0);
    let mut quad = C64::new(0.0, 0.0);
    for j in 0..n {
        lin += g[j] * w[j];
        for k in 0..n {
            quad += h[j * n + k] * w[j] * w[k];
        }
    }
    -(lin * 2.0 + quad)
}

/// Boundary points on rays from the origin, found by bisection on ρ. The
/// domain must be star-shaped about 0 with ρ(0) < 0.
pub fn boundary_samples(df: &DefiningFunction, count: usize, seed: u64) -> Result<Vec<Point>> {
    let n = df.dim();
    let origin = vec![C64::new(0.0, 0.0); n];
    if df.rho(&origin) >= 0.0 {
        return Err(LabError::Domain("boundary sampling needs rho(0) < 0".into()));
    }
    let r_max = df
        .enclosing_radius()
        .ok_or_else(|| LabError::Domain("defining function has no bounded sublevel set".into()))?
        * 1.01
        + 1e-9;
    let mut rng = stream_rng(seed, 0x1e71);
    let mut x = vec![0.0; 2 * n];
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        unit_vector(&mut rng, 2 * n, &mut x);
        let u = from_real(&x);
        let (mut lo, mut hi) = (0.0, r_max);
        if df.rho(&axpy(&origin, hi, &u)) < 0.0 {
            return Err(LabError::Domain("enclosing radius does not enclose the domain".into()));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if df.rho(&axpy(&origin, mid, &u)) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(axpy(&origin, hi, &u));
    }
    Ok(out)
}

/// β = ⅓ min over boundary samples of the Levi form on unit vectors, taking
/// the smaller of exact λ_min and 50 random directions; then ε by halving
/// from 0.1 × diameter until the coercivity check passes.
pub fn compute_beta(df: &DefiningFunction, domain: &Domain, n_boundary: usize, seed: u64) -> Result<LeviData> {
    // fall back to the domain's own boundary when ρ has no usable sublevel set
    let samples = match boundary_samples(df, n_boundary, seed) {
        Ok(s) => s,
        Err(e) => match domain.defining_fn() {
            Some(own) if own != *df => boundary_samples(&own, n_boundary, seed)?,
            _ => return Err(e),
        },
    };
    let n = df.dim();
    let mut rng = stream_rng(seed, 0xbe7a);
    let mut x = vec![0.0; 2 * n];
    let mut lambda_min = f64::INFINITY;
    let mut dir_min = f64::INFINITY;
    for zeta in &samples {
        let h = df.complex_hessian(zeta);
        let lam = crate::linalg::hermitian_min_eigenvalue(&h, n);
        if lam <= 0.0 {
            return Err(LabError::NotStrictlyPsh { witness: zeta.clone(), lambda_min: lam });
        }
        lambda_min = lambda_min.min(lam);
        for _ in 0..50 {
            unit_vector(&mut rng, 2 * n, &mut x);
            let xi = from_real(&x);
            let mut q = C64::new(0.0, 0.0);
            for j in 0..n {
                for k in 0..n {
                    q += h[j * n + k] * xi[j] * xi[k].conj();
                }
            }
            dir_min = dir_min.min(q.re);
        }
    }
    let beta = lambda_min.min(dir_min) / 3.0;
    let mut data = LeviData { beta, epsilon: 0.1 * domain.diameter(), lambda_min, halvings: 0, boundary_samples: samples };
    while data.halvings < 10 {
        let rep = verify_coercivity(df, &data, 20_000, seed ^ 0xc0e5);
        if rep.violations == 0 {
            break;
        }
        data.epsilon *= 0.5;
        data.halvings += 1;
    }
    Ok(data)
}

/// Counts violations of Re F(z,ζ) ≥ ρ(ζ) − ρ(z) + β|ζ − z|² (slack 10⁻⁹)
/// over pairs with ζ drawn from the boundary samples and z uniform in B(ζ, ε).
pub fn verify_coercivity(df: &DefiningFunction, levi: &LeviData, n_pairs: u64, seed: u64) -> CoercivityReport {
    let n = df.dim();
    let pre: Vec<(Point, Vec<C64>, Vec<C64>, f64)> = levi
        .boundary_samples
        .iter()
        .map(|z| (z.clone(), df.grad(z), df.hol_hessian(z), df.rho(z)))
        .collect();
    let parts = par_chunks(seed, 0, n_pairs, 4096, |rng, len| {
        let mut x = vec![0.0; 2 * n];
        let mut violations = 0u64;
        let mut min_margin = f64::INFINITY;
        for _ in 0..len {
            let (zeta, g, h, rz) = &pre[rng.random_range(0..pre.len())];
            uniform_in_ball(rng, 2 * n, levi.epsilon, &mut x);
            let w = from_real(&x);
            let z: Point = zeta.iter().zip(&w).map(|(a, b)| a + b).collect();
            let f = levi_polynomial_with(g, h, &w);
            let margin = f.re - (rz - df.rho(&z) + levi.beta * norm_sqr(&w));
            if margin < -1e-9 {
                violations += 1;
            }
            min_margin = min_margin.min(margin);
        }
        (violations, min_margin)
    });
    let violations = parts.iter().map(|p| p.0).sum();
    let min_margin = parts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    CoercivityReport { beta: levi.beta, epsilon: levi.epsilon, pairs: n_pairs, violations, min_margin }
}

/// Moments helper shared by the model integrals.
pub(crate) fn merge_all(parts: &[Moments]) -> Moments {
    let mut m = Moments::default();
    for p in parts {
        m.merge(p);
    }
    m
}
