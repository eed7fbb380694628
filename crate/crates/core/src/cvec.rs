//! Small helpers for points of ℂⁿ stored as `[Complex64]` slices.
//!
//! Real coordinates are interleaved: `(Re z₁, Im z₁, Re z₂, Im z₂, …)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;
pub type Point = Vec<Complex64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Hermitian inner product ⟨z, w⟩ = Σ z_j w̄_j.
#[inline]
pub fn inner(z: &[C64], w: &[C64]) -> C64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

/// Bilinear pairing Σ c_j w_j (no conjugation).
#[inline]
pub fn pair(c: &[C64], w: &[C64]) -> C64 {
    c.iter().zip(w).map(|(a, b)| a * b).sum()
}

#[inline]
pub fn norm_sqr(z: &[C64]) -> f64 {
    z.iter().map(|a| a.norm_sqr()).sum()
}

#[inline]
pub fn norm(z: &[C64]) -> f64 {
    norm_sqr(z).sqrt()
}

#[inline]
pub fn dist(z: &[C64], w: &[C64]) -> f64 {
    z.iter().zip(w).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
}

pub fn sub(z: &[C64], w: &[C64]) -> Point {
    z.iter().zip(w).map(|(a, b)| a - b).collect()
}

pub fn add(z: &[C64], w: &[C64]) -> Point {
    z.iter().zip(w).map(|(a, b)| a + b).collect()
}

pub fn scale(z: &[C64], s: f64) -> Point {
    z.iter().map(|a| a * s).collect()
}

/// `z + t·v`.
pub fn axpy(z: &[C64], t: f64, v: &[C64]) -> Point {
    z.iter().zip(v).map(|(a, b)| a + b * t).collect()
}

pub fn to_real(z: &[C64]) -> Vec<f64> {
    z.iter().flat_map(|a| [a.re, a.im]).collect()
}

pub fn from_real(x: &[f64]) -> Point {
    x.chunks_exact(2).map(|p| c(p[0], p[1])).collect()
}

/// Real Euclidean dot product of the interleaved real coordinates.
#[inline]
pub fn real_dot(z: &[C64], w: &[C64]) -> f64 {
    inner(z, w).re
}

/// A complex number stored as `(ln|w|, arg w)` so that magnitudes far outside
/// the `f64` range can be represented.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_abs: f64,
    pub arg: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex { log_abs: f64::NEG_INFINITY, arg: 0.0 };

    pub fn from_c64(w: C64) -> Self {
        if w == C64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        LogComplex { log_abs: w.norm().ln(), arg: w.arg() }
    }

    pub fn abs(&self) -> f64 {
        self.log_abs.exp()
    }

    pub fn to_c64(&self) -> C64 {
        C64::from_polar(self.log_abs.exp(), self.arg)
    }

    pub fn scale(&self, coef: C64) -> Self {
        if coef == C64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        LogComplex { log_abs: self.log_abs + coef.norm().ln(), arg: self.arg + coef.arg() }
    }

    /// Sum of terms, factoring out the largest magnitude.
    pub fn sum(terms: &[LogComplex]) -> LogComplex {
        let m = terms.iter().map(|t| t.log_abs).fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        if m.is_infinite() {
            return LogComplex { log_abs: m, arg: 0.0 };
        }
        let s: C64 = terms
            .iter()
            .filter(|t| t.log_abs > f64::NEG_INFINITY)
            .map(|t| C64::from_polar((t.log_abs - m).exp(), t.arg))
            .sum();
        if s.norm() == 0.0 {
            return Self::ZERO;
        }
        LogComplex { log_abs: m + s.norm().ln(), arg: s.arg() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_product_is_conjugate_linear_in_second_slot() {
        let z = vec![c(1.0, 2.0), c(0.0, -1.0)];
        let w = vec![c(0.5, 0.0), c(0.0, 1.0)];
        let lhs = inner(&z, &scale(&w, 1.0).iter().map(|a| a * I).collect::<Vec<_>>());
        assert!((lhs - inner(&z, &w) * (-I)).norm() < 1e-15);
    }

    #[test]
    fn log_complex_sum_handles_huge_terms() {
        let big = LogComplex { log_abs: 1e6, arg: 0.3 };
        let small = LogComplex::from_c64(c(5.0, 1.0));
        let s = LogComplex::sum(&[big, small]);
        assert_eq!(s.log_abs, 1e6);
        let plain = LogComplex::sum(&[LogComplex::from_c64(c(1.0, 1.0)), LogComplex::from_c64(c(2.0, -3.0))]);
        assert!((plain.to_c64() - c(3.0, -2.0)).norm() < 1e-12);
    }

    #[test]
    fn real_roundtrip() {
        let z = vec![c(1.5, -2.0), c(0.25, 3.0)];
        assert_eq!(from_real(&to_real(&z)), z);
    }
}
