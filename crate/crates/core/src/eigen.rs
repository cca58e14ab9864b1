//! Eigenvalues of small dense Hermitian matrices via cyclic Jacobi.
//!
//! The matrices this crate diagonalizes are reduced states and channel
//! outputs over enumerated bases — a few hundred rows at most — so a
//! dependency-free Jacobi sweep is plenty.

use num_complex::Complex64;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a Hermitian matrix (row-major, `n × n`), ascending.
/// Only the lower/upper-consistent Hermitian part is meaningful to the
/// caller; the input is symmetrized first so tiny asymmetries from float
/// roundoff do not matter.
pub fn hermitian_eigenvalues(matrix: &[Complex64], n: usize) -> Vec<f64> {
    assert_eq!(matrix.len(), n * n, "matrix shape mismatch");
    if n == 0 {
        return Vec::new();
    }
    let mut a = vec![Complex64::default(); n * n];
    for r in 0..n {
        for c in 0..n {
            a[r * n + c] = 0.5 * (matrix[r * n + c] + matrix[c * n + r].conj());
        }
    }

    let scale: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let stop = 1e-28 * scale * scale;

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (r + 1..n).map(move |c| (r, c)))
            .map(|(r, c)| a[r * n + c].norm_sqr())
            .sum();
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, n, p, q);
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

/// One Jacobi rotation zeroing the `(p, q)` off-diagonal element.
fn rotate(a: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag < 1e-300 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    // phase e^{iφ} of the off-diagonal entry, rotation angle from the
    // standard symmetric-case formula applied to |a_pq|
    let phase = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s_mag = t * c;
    let s = phase * s_mag; // complex sine carries the phase

    // columns p and q: A ← A·J with J = [[c, s],[−s̄, c]] acting on (p,q)
    for r in 0..n {
        let arp = a[r * n + p];
        let arq = a[r * n + q];
        a[r * n + p] = c * arp - s.conj() * arq;
        a[r * n + q] = c * arq + s * arp;
    }
    // rows p and q: A ← J†·A
    for col in 0..n {
        let apc = a[p * n + col];
        let aqc = a[q * n + col];
        a[p * n + col] = c * apc - s * aqc;
        a[q * n + col] = c * aqc + s.conj() * apc;
    }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(matrix: &[Complex64], n: usize) -> f64 {
    hermitian_eigenvalues(matrix, n)
        .first()
        .copied()
        .unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix_returns_sorted_diagonal() {
        let m = vec![
            c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0),
        ];
        let e = hermitian_eigenvalues(&m, 3);
        assert!((e[0] + 1.0).abs() < 1e-12);
        assert!((e[1] - 2.0).abs() < 1e-12);
        assert!((e[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_hermitian_with_complex_offdiagonal() {
        // [[1, i],[-i, 1]] has eigenvalues 0 and 2
        let m = vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)];
        let e = hermitian_eigenvalues(&m, 2);
        assert!(e[0].abs() < 1e-12);
        assert!((e[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn projector_eigenvalues_are_zero_and_one() {
        // |+⟩⟨+| in a 2-dim space
        let m = vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)];
        let e = hermitian_eigenvalues(&m, 2);
        assert!(e[0].abs() < 1e-12);
        assert!((e[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_and_square_sum_are_preserved() {
        // pseudo-random Hermitian 6×6: eigenvalue sums must match trace and
        // Frobenius norm
        let n = 6;
        let mut m = vec![c(0.0, 0.0); n * n];
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for r in 0..n {
            for col in r..n {
                if r == col {
                    m[r * n + col] = c(next(), 0.0);
                } else {
                    let v = c(next(), next());
                    m[r * n + col] = v;
                    m[col * n + r] = v.conj();
                }
            }
        }
        let trace: f64 = (0..n).map(|i| m[i * n + i].re).sum();
        let frob: f64 = m.iter().map(|x| x.norm_sqr()).sum();
        let e = hermitian_eigenvalues(&m, n);
        let esum: f64 = e.iter().sum();
        let esq: f64 = e.iter().map(|x| x * x).sum();
        assert!((esum - trace).abs() < 1e-10);
        assert!((esq - frob).abs() < 1e-10);
    }
}
