//! Dense complex linear algebra helpers.
//!
//! Superoperators act on density matrices linearized by **column stacking**:
//! `vec(X)[i + d*j] = X[(i, j)]`, which is also nalgebra's storage order. Under
//! this convention `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Largest absolute entry; 0 for an empty matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Operator (spectral) norm, i.e. the largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn hermitian_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `(m + m†)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted ascending.
///
/// Each eigenvector is rotated so that its largest-magnitude component is real
/// and positive, which makes the result independent of solver phase choices.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let eig = hermitize(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let pivot = v
            .iter()
            .cloned()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(C64::new(1.0, 0.0));
        let phase = if pivot.norm() > 0.0 {
            pivot.conj() / pivot.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        vectors.set_column(col, &(v * phase));
    }
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = hermitize(m).symmetric_eigenvalues().iter().cloned().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Column-stacked linearization of a square matrix.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &CVector, d: usize) -> CMatrix {
    CMatrix::from_column_slice(d, d, v.as_slice())
}

/// Superoperator of `X ↦ A X`.
pub fn left_mul(a: &CMatrix) -> CMatrix {
    identity(a.nrows()).kronecker(a)
}

/// Superoperator of `X ↦ X B`.
pub fn right_mul(b: &CMatrix) -> CMatrix {
    b.transpose().kronecker(&identity(b.nrows()))
}

/// Superoperator of `X ↦ A X B`.
pub fn sandwich(a: &CMatrix, b: &CMatrix) -> CMatrix {
    b.transpose().kronecker(a)
}

/// Superoperator of `X ↦ -i[H, X]`.
pub fn hamiltonian_superop(h: &CMatrix) -> CMatrix {
    (left_mul(h) - right_mul(h)) * (-I)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(d: usize, seed: u64) -> CMatrix {
        let mut s = seed;
        CMatrix::from_fn(d, d, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = ((s >> 11) as f64) / ((1u64 << 53) as f64) - 0.5;
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = ((s >> 11) as f64) / ((1u64 << 53) as f64) - 0.5;
            c(a, b)
        })
    }

    #[test]
    fn sandwich_matches_direct_product() {
        let (a, x, b) = (sample(3, 1), sample(3, 2), sample(3, 3));
        let direct = vectorize(&(&a * &x * &b));
        let via = sandwich(&a, &b) * vectorize(&x);
        assert!(max_abs(&CMatrix::from_column_slice(9, 1, (direct - via).as_slice())) < 1e-14);
    }

    #[test]
    fn vectorize_round_trip() {
        let x = sample(4, 9);
        assert_eq!(unvectorize(&vectorize(&x), 4), x);
        // column stacking: entry (1, 0) is the second component
        assert_eq!(vectorize(&x)[1], x[(1, 0)]);
        assert_eq!(vectorize(&x)[4], x[(0, 1)]);
    }

    #[test]
    fn eigen_sorted_and_reconstructs() {
        let a = sample(5, 4);
        let h = hermitize(&a);
        let (vals, vecs) = hermitian_eigen(&h);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let diag = CMatrix::from_diagonal(&CVector::from_iterator(5, vals.iter().map(|&v| r(v))));
        let back = &vecs * diag * vecs.adjoint();
        assert!(max_abs(&(back - h)) < 1e-12);
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![r(1.0), c(0.0, -3.0)]));
        assert!((spectral_norm(&m) - 3.0).abs() < 1e-14);
    }
}
