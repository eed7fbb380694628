//! Cyclic Jacobi eigenvalues for small dense symmetric and Hermitian matrices.

use crate::cvec::C64;

/// Eigenvalues (ascending) of a real symmetric `n×n` matrix given row-major.
/// Cyclic Jacobi sweeps until the off-diagonal Frobenius norm drops below
/// `tol` times the matrix norm.
pub fn symmetric_eigenvalues(a: &[f64], n: usize, tol: f64) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let frob: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    if frob == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= tol * frob {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = cs * akp - sn * akq;
                    m[k * n + q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = cs * apk - sn * aqk;
                    m[q * n + k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Eigenvalues (ascending) of a Hermitian `n×n` matrix H = A + iB, through
/// the real symmetric embedding [[A, −B], [B, A]], whose spectrum is that of
/// H with every eigenvalue doubled.
pub fn hermitian_eigenvalues(h: &[C64], n: usize, tol: f64) -> Vec<f64> {
    assert_eq!(h.len(), n * n);
    let m = 2 * n;
    let mut r = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[i * n + j];
            r[i * m + j] = z.re;
            r[(i + n) * m + (j + n)] = z.re;
            r[i * m + (j + n)] = -z.im;
            r[(i + n) * m + j] = z.im;
        }
    }
    let ev = symmetric_eigenvalues(&r, m, tol);
    ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

pub fn hermitian_min_eigenvalue(h: &[C64], n: usize) -> f64 {
    hermitian_eigenvalues(h, n, 1e-12)[0]
}

/// Singular values of a real `rows×cols` matrix (row-major), descending.
pub fn singular_values(a: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut ata = vec![0.0; cols * cols];
    for i in 0..cols {
        for j in 0..cols {
            ata[i * cols + j] = (0..rows).map(|k| a[k * cols + i] * a[k * cols + j]).sum();
        }
    }
    let mut sv: Vec<f64> = symmetric_eigenvalues(&ata, cols, 1e-14)
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    sv.reverse();
    sv
}

/// Spectral norm of a complex `n×n` matrix (row-major).
pub fn complex_spectral_norm(a: &[C64], n: usize) -> f64 {
    // ‖A‖² = λ_max(A* A)
    let mut g = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            g[i * n + j] = (0..n).map(|k| a[k * n + i].conj() * a[k * n + j]).sum();
        }
    }
    let ev = hermitian_eigenvalues(&g, n, 1e-13);
    ev.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvec::c;

    #[test]
    fn diagonal_matrix() {
        let ev = symmetric_eigenvalues(&[3.0, 0.0, 0.0, -1.0], 2, 1e-12);
        assert_eq!(ev, vec![-1.0, 3.0]);
    }

    #[test]
    fn hermitian_two_by_two_closed_form() {
        // [[2, i],[−i, 2]] has eigenvalues 1 and 3.
        let h = [c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)];
        let ev = hermitian_eigenvalues(&h, 2, 1e-13);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn singular_values_of_rotation_scaled() {
        let a = [0.0, -2.0, 2.0, 0.0];
        let sv = singular_values(&a, 2, 2);
        assert!((sv[0] - 2.0).abs() < 1e-12 && (sv[1] - 2.0).abs() < 1e-12);
    }
}
