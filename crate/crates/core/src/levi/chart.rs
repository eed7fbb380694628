use serde::Serialize;

use super::{levi_polynomial_with, DefiningFunction};
use crate::cvec::{from_real, norm, sub, to_real, Point, C64};
use crate::error::{LabError, Result};
use crate::linalg::singular_values;
use crate::rng::{stream_rng, uniform_in_ball};

/// Local chart t = (−ρ, Im F(·,ζ), affine completion) around a boundary point.
#[derive(Debug, Clone, Serialize)]
pub struct LeviChart {
    pub zeta: Point,
    /// Rows of the real Jacobian at ζ (2n × 2n, row-major).
    pub jacobian: Vec<f64>,
    pub condition_number: f64,
    pub abs_det: f64,
    #[serde(skip)]
    df: Option<DefiningFunction>,
    #[serde(skip)]
    grad: Vec<C64>,
    #[serde(skip)]
    hol: Vec<C64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormEquivalence {
    /// min over samples of Σt²/|z−ζ|².
    pub c1: f64,
    /// max over samples of Σt²/|z−ζ|².
    pub c2: f64,
    /// max over samples of |t(z) − J(z−ζ)|/|z−ζ|².
    pub linearization: f64,
}

fn gram_schmidt(rows: &mut Vec<Vec<f64>>, dim: usize) {
    for i in 0..dim {
        if rows.len() == dim {
            break;
        }
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        for r in rows.iter() {
            let d: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(r) {
                *x -= d * y;
            }
        }
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv > 1e-8 {
            rows.push(v.iter().map(|x| x / nv).collect());
        }
    }
}

pub fn levi_coordinates(df: &DefiningFunction, zeta: &[C64]) -> Result<LeviChart> {
    let n = zeta.len();
    let dim = 2 * n;
    let g = df.grad(zeta);
    let gn = norm(&g);
    if gn < 1e-14 {
        return Err(LabError::DegenerateGradient);
    }
    // dt₁ = −∇ρ; dt₂ = ∇ Im(−2 Σ g_j w_j) = (−2 Im g_j, −2 Re g_j)
    let dt1: Vec<f64> = df.real_gradient(zeta).iter().map(|x| -x).collect();
    let dt2: Vec<f64> = g.iter().flat_map(|v| [-2.0 * v.im, -2.0 * v.re]).collect();
    let unit = |v: &[f64]| {
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter().map(|x| x / r).collect::<Vec<f64>>()
    };
    let mut basis = vec![unit(&dt1), unit(&dt2)];
    gram_schmidt(&mut basis, dim);
    let mut jac = Vec::with_capacity(dim * dim);
    jac.extend_from_slice(&dt1);
    jac.extend_from_slice(&dt2);
    for row in &basis[2..] {
        jac.extend_from_slice(row);
    }
    let sv = singular_values(&jac, dim, dim);
    let smin = *sv.last().unwrap();
    let cond = if smin > 0.0 { sv[0] / smin } else { f64::INFINITY };
    if cond > 1e8 {
        return Err(LabError::IllConditionedChart(cond));
    }
    Ok(LeviChart {
        zeta: zeta.to_vec(),
        jacobian: jac,
        condition_number: cond,
        abs_det: sv.iter().product(),
        df: Some(df.clone()),
        grad: g,
        hol: df.hol_hessian(zeta),
    })
}

impl LeviChart {
    pub fn dim(&self) -> usize {
        2 * self.zeta.len()
    }

    pub fn t(&self, z: &[C64]) -> Vec<f64> {
        let df = self.df.as_ref().expect("chart built by levi_coordinates");
        let w = sub(z, &self.zeta);
        let dim = self.dim();
        let x = to_real(&w);
        let mut out = vec![-df.rho(z), levi_polynomial_with(&self.grad, &self.hol, &w).im];
        for r in 2..dim {
            out.push((0..dim).map(|c| self.jacobian[r * dim + c] * x[c]).sum());
        }
        out
    }

    pub fn linear(&self, z: &[C64]) -> Vec<f64> {
        let dim = self.dim();
        let x = to_real(&sub(z, &self.zeta));
        (0..dim).map(|r| (0..dim).map(|c| self.jacobian[r * dim + c] * x[c]).sum()).collect()
    }

    /// Sampled bounds c₁|w|² ≤ Σt² ≤ c₂|w|² and the linearization constant
    /// on |w| ≤ radius.
    pub fn norm_equivalence(&self, radius: f64, samples: usize, seed: u64) -> NormEquivalence {
        let mut rng = stream_rng(seed, 0xc4a7);
        let mut x = vec![0.0; self.dim()];
        let (mut c1, mut c2, mut lin) = (f64::INFINITY, 0.0f64, 0.0f64);
        for _ in 0..samples {
            uniform_in_ball(&mut rng, self.dim(), radius, &mut x);
            let w = from_real(&x);
            let r2 = norm(&w).powi(2);
            if r2 < 1e-20 {
                continue;
            }
            let z: Point = self.zeta.iter().zip(&w).map(|(a, b)| a + b).collect();
            let t = self.t(&z);
            let l = self.linear(&z);
            let s: f64 = t.iter().map(|v| v * v).sum();
            c1 = c1.min(s / r2);
            c2 = c2.max(s / r2);
            let e = t.iter().zip(&l).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            lin = lin.max(e / r2);
        }
        NormEquivalence { c1, c2, linearization: lin }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvec::c;

    #[test]
    fn ball_chart_at_pole() {
        let df = DefiningFunction::ball(2);
        let zeta = [c(1.0, 0.0), c(0.0, 0.0)];
        let ch = levi_coordinates(&df, &zeta).unwrap();
        assert!(ch.abs_det > 0.0);
        assert!(ch.t(&zeta).iter().all(|v| v.abs() < 1e-15));
        let eq = ch.norm_equivalence(0.1, 2000, 1);
        assert!(eq.c1 > 0.0 && eq.c2 >= eq.c1);
        // inside the ball t₁ > 0
        assert!(ch.t(&[c(0.9, 0.0), c(0.0, 0.0)])[0] > 0.0);
    }

    #[test]
    fn degenerate_gradient_is_reported() {
        let df = DefiningFunction::ball(2);
        let e = levi_coordinates(&df, &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap_err();
        assert_eq!(e.code(), "degenerate-gradient");
    }
}
