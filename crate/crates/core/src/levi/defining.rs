use serde::{Deserialize, Serialize};

use crate::cvec::{norm_sqr, C64};
use crate::linalg;

/// Real defining functions with closed-form Wirtinger derivatives.
///
/// `grad` returns ∂ρ/∂z_j, `complex_hessian` returns ∂²ρ/∂z_j∂z̄_k (row j,
/// column k) and `hol_hessian` returns ∂²ρ/∂z_j∂z_k, all row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum DefiningFunction {
    /// |z|² − r²
    Ball { n: usize, radius: f64 },
    /// Σ |z_j|²/a_j² − 1
    Ellipsoid { radii: Vec<f64> },
    /// Σ w_j|z_j|² + κ|z|⁴ + Re(Σ s_jk z_j z_k) − offset, with s symmetric.
    QuadQuartic { weights: Vec<f64>, quartic: f64, sym: Vec<C64>, offset: f64 },
    /// factor · ρ_inner, factor > 0.
    Scaled { factor: f64, inner: Box<DefiningFunction> },
}

impl DefiningFunction {
    pub fn ball(n: usize) -> Self {
        DefiningFunction::Ball { n, radius: 1.0 }
    }

    pub fn ellipsoid(radii: &[f64]) -> Self {
        DefiningFunction::Ellipsoid { radii: radii.to_vec() }
    }

    /// ρ = Re(z₁²), whose complex Hessian vanishes identically.
    pub fn pluriharmonic_test(n: usize) -> Self {
        let mut sym = vec![C64::new(0.0, 0.0); n * n];
        sym[0] = C64::new(1.0, 0.0);
        DefiningFunction::QuadQuartic { weights: vec![0.0; n], quartic: 0.0, sym, offset: 0.0 }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        DefiningFunction::Scaled { factor, inner: Box::new(self.clone()) }
    }

    pub fn dim(&self) -> usize {
        match self {
            DefiningFunction::Ball { n, .. } => *n,
            DefiningFunction::Ellipsoid { radii } => radii.len(),
            DefiningFunction::QuadQuartic { weights, .. } => weights.len(),
            DefiningFunction::Scaled { inner, .. } => inner.dim(),
        }
    }

    pub fn rho(&self, z: &[C64]) -> f64 {
        match self {
            DefiningFunction::Ball { radius, .. } => norm_sqr(z) - radius * radius,
            DefiningFunction::Ellipsoid { radii } => {
                z.iter().zip(radii).map(|(w, a)| w.norm_sqr() / (a * a)).sum::<f64>() - 1.0
            }
            DefiningFunction::QuadQuartic { weights, quartic, sym, offset } => {
                let n = z.len();
                let r2 = norm_sqr(z);
                let quad: f64 = z.iter().zip(weights).map(|(w, a)| a * w.norm_sqr()).sum();
                let mut s = C64::new(0.0, 0.0);
                for j in 0..n {
                    for k in 0..n {
                        s += sym[j * n + k] * z[j] * z[k];
                    }
                }
                quad + quartic * r2 * r2 + s.re - offset
            }
            DefiningFunction::Scaled { factor, inner } => factor * inner.rho(z),
        }
    }

    /// Holomorphic gradient ∂ρ/∂z_j.
    pub fn grad(&self, z: &[C64]) -> Vec<C64> {
        match self {
            DefiningFunction::Ball { .. } => z.iter().map(|w| w.conj()).collect(),
            DefiningFunction::Ellipsoid { radii } => {
                z.iter().zip(radii).map(|(w, a)| w.conj() / (a * a)).collect()
            }
            DefiningFunction::QuadQuartic { weights, quartic, sym, .. } => {
                let n = z.len();
                let r2 = norm_sqr(z);
                (0..n)
                    .map(|j| {
                        let lin: C64 = (0..n).map(|k| sym[j * n + k] * z[k]).sum();
                        z[j].conj() * (weights[j] + 2.0 * quartic * r2) + lin
                    })
                    .collect()
            }
            DefiningFunction::Scaled { factor, inner } => {
                inner.grad(z).into_iter().map(|g| g * factor).collect()
            }
        }
    }

    /// Real gradient in interleaved coordinates: (∂ρ/∂x_j, ∂ρ/∂y_j) = (2 Re g_j, −2 Im g_j).
    pub fn real_gradient(&self, z: &[C64]) -> Vec<f64> {
        self.grad(z).iter().flat_map(|g| [2.0 * g.re, -2.0 * g.im]).collect()
    }

    /// Complex Hessian ∂²ρ/∂z_j∂z̄_k, Hermitian by construction.
    pub fn complex_hessian(&self, z: &[C64]) -> Vec<C64> {
        let n = z.len();
        let zero = C64::new(0.0, 0.0);
        let mut h = vec![zero; n * n];
        match self {
            DefiningFunction::Ball { .. } => {
                for j in 0..n {
                    h[j * n + j] = C64::new(1.0, 0.0);
                }
            }
            DefiningFunction::Ellipsoid { radii } => {
                for j in 0..n {
                    h[j * n + j] = C64::new(1.0 / (radii[j] * radii[j]), 0.0);
                }
            }
            DefiningFunction::QuadQuartic { weights, quartic, .. } => {
                let r2 = norm_sqr(z);
                for j in 0..n {
                    for k in 0..n {
                        let mut v = 2.0 * quartic * z[j].conj() * z[k];
                        if j == k {
                            v += weights[j] + 2.0 * quartic * r2;
                        }
                        h[j * n + k] = v;
                    }
                }
                // exact Hermitian symmetry
                for j in 0..n {
                    h[j * n + j].im = 0.0;
                    for k in (j + 1)..n {
                        h[k * n + j] = h[j * n + k].conj();
                    }
                }
            }
            DefiningFunction::Scaled { factor, inner } => {
                return inner.complex_hessian(z).into_iter().map(|v| v * factor).collect();
            }
        }
        h
    }

    /// Holomorphic second derivatives ∂²ρ/∂z_j∂z_k (symmetric).
    pub fn hol_hessian(&self, z: &[C64]) -> Vec<C64> {
        let n = z.len();
        let zero = C64::new(0.0, 0.0);
        match self {
            DefiningFunction::Ball { .. } | DefiningFunction::Ellipsoid { .. } => vec![zero; n * n],
            DefiningFunction::QuadQuartic { quartic, sym, .. } => {
                let mut h = vec![zero; n * n];
                for j in 0..n {
                    for k in 0..n {
                        h[j * n + k] = 2.0 * quartic * z[j].conj() * z[k].conj() + sym[j * n + k];
                    }
                }
                h
            }
            DefiningFunction::Scaled { factor, inner } => {
                inner.hol_hessian(z).into_iter().map(|v| v * factor).collect()
            }
        }
    }

    pub fn min_levi_eigenvalue(&self, z: &[C64]) -> f64 {
        linalg::hermitian_min_eigenvalue(&self.complex_hessian(z), z.len())
    }

    /// Radius of a centred ball containing {ρ < 0}, when one is known.
    pub fn enclosing_radius(&self) -> Option<f64> {
        match self {
            DefiningFunction::Ball { radius, .. } => Some(*radius),
            DefiningFunction::Ellipsoid { radii } => radii.iter().cloned().reduce(f64::max),
            DefiningFunction::QuadQuartic { weights, quartic, sym, offset } => {
                let n = weights.len();
                let wmin = weights.iter().cloned().fold(f64::INFINITY, f64::min);
                let snorm = linalg::complex_spectral_norm(sym, n);
                // ρ ≥ (wmin − ‖s‖)|z|² + κ|z|⁴ − offset
                let a = wmin - snorm;
                if *quartic > 0.0 {
                    // κ t² + a t − offset = 0, t = |z|²
                    let disc = a * a + 4.0 * quartic * offset;
                    Some(((-a + disc.sqrt()) / (2.0 * quartic)).max(0.0).sqrt())
                } else if a > 0.0 && *offset > 0.0 {
                    Some((offset / a).sqrt())
                } else {
                    None
                }
            }
            DefiningFunction::Scaled { inner, .. } => inner.enclosing_radius(),
        }
    }

    /// Lower bound m with ρ(ζ+w) ≥ ρ(ζ) + 2 Re Σ ∂ρ_j(ζ) w_j + m|w|², when
    /// ρ is a quadratic with that property.
    pub fn quadratic_convexity(&self) -> Option<f64> {
        match self {
            DefiningFunction::Ball { .. } => Some(1.0),
            DefiningFunction::Ellipsoid { radii } => {
                radii.iter().map(|a| 1.0 / (a * a)).reduce(f64::min)
            }
            DefiningFunction::Scaled { factor, inner } => inner.quadratic_convexity().map(|m| m * factor),
            DefiningFunction::QuadQuartic { .. } => None,
        }
    }
}
