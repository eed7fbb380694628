use std::sync::Arc;

use serde::Serialize;

use super::SingularKernel;
use crate::cvec::{c, dist, norm, LogComplex, C64};
use crate::error::Result;
use crate::geometry::Probe;

/// Finite combination constant + Σ λ_j f_j of kernels on one domain.
///
/// Terms are compared by identity, so `f − f` keeps its (now zero) term and
/// shares the shell strata of `f`.
#[derive(Debug, Clone, Serialize)]
pub struct Combination {
    pub constant: C64,
    pub terms: Vec<(C64, Arc<SingularKernel>)>,
}

impl Combination {
    pub fn zero() -> Combination {
        Combination { constant: c(0.0, 0.0), terms: Vec::new() }
    }

    pub fn constant(value: C64) -> Combination {
        Combination { constant: value, terms: Vec::new() }
    }

    pub fn single(kernel: Arc<SingularKernel>) -> Combination {
        Combination { constant: c(0.0, 0.0), terms: vec![(c(1.0, 0.0), kernel)] }
    }

    pub fn with_term(mut self, coef: C64, kernel: Arc<SingularKernel>) -> Combination {
        self.push(coef, kernel);
        self
    }

    fn push(&mut self, coef: C64, kernel: Arc<SingularKernel>) {
        match self.terms.iter_mut().find(|(_, k)| Arc::ptr_eq(k, &kernel)) {
            Some(t) => t.0 += coef,
            None => self.terms.push((coef, kernel)),
        }
    }

    pub fn scale(&self, lambda: C64) -> Combination {
        Combination {
            constant: self.constant * lambda,
            terms: self.terms.iter().map(|(a, k)| (a * lambda, k.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Combination) -> Combination {
        let mut out = self.clone();
        out.constant += other.constant;
        for (a, k) in &other.terms {
            out.push(*a, k.clone());
        }
        out
    }

    pub fn sub(&self, other: &Combination) -> Combination {
        self.add(&other.scale(c(-1.0, 0.0)))
    }

    /// Without the term at `index`.
    pub fn without(&self, index: usize) -> Combination {
        let mut out = self.clone();
        out.terms.remove(index);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.constant == c(0.0, 0.0) && self.terms.iter().all(|(a, _)| *a == c(0.0, 0.0))
    }

    pub fn kernels(&self) -> impl Iterator<Item = &Arc<SingularKernel>> {
        self.terms.iter().map(|(_, k)| k)
    }

    pub fn eval(&self, z: &[C64]) -> Result<C64> {
        let mut v = self.constant;
        for (a, k) in &self.terms {
            if *a != c(0.0, 0.0) {
                v += a * k.eval(z)?;
            }
        }
        Ok(v)
    }

    pub fn eval_unchecked(&self, z: &[C64]) -> Result<C64> {
        let mut v = self.constant;
        for (a, k) in &self.terms {
            if *a != c(0.0, 0.0) {
                v += a * k.eval_unchecked(z)?;
            }
        }
        Ok(v)
    }

    /// Value at an extended-range probe. Terms singular at the probe base use
    /// their own extended evaluation; the rest are smooth there and are
    /// evaluated at the nearest `f64` point.
    pub fn eval_probe(&self, probe: &Probe) -> Result<LogComplex> {
        let mut parts = vec![LogComplex::from_c64(self.constant)];
        let near = probe.point();
        for (a, k) in &self.terms {
            if *a == c(0.0, 0.0) {
                continue;
            }
            let at_base = dist(&probe.base, k.zeta()) <= 1e-14 * norm(k.zeta()).max(1.0);
            let v = if at_base {
                k.eval_probe(probe)?
            } else {
                LogComplex::from_c64(k.eval_unchecked(&near)?)
            };
            parts.push(v.scale(*a));
        }
        Ok(LogComplex::sum(&parts))
    }
}
