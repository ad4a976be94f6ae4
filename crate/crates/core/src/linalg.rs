//! Thin wrappers over `nalgebra` for the small dense blocks that show up when a
//! sparse state or operator is materialized over its support.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Eigenvalues of a Hermitian matrix in ascending order. Only the lower
/// triangle is read.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Eigenpairs of a Hermitian matrix, ascending by eigenvalue.
pub fn hermitian_eigen(m: &CMatrix) -> Vec<(f64, Vec<Complex64>)> {
    let eig = m.clone().symmetric_eigen();
    let mut pairs: Vec<(f64, Vec<Complex64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(k, &val)| (val, eig.eigenvectors.column(k).iter().copied().collect()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Unitary `q` with `q^† m` upper triangular.
pub fn qr_unitary(m: &CMatrix) -> CMatrix {
    m.clone().qr().q()
}

/// Number of singular values above `rel_tol` times the largest one.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&s| s > rel_tol * top).count(),
        _ => 0,
    }
}

/// Singular values `(s1, s2)` of a 2x2 matrix, `s1 >= s2`.
pub fn singular_values_2x2(m: &[[Complex64; 2]; 2]) -> (f64, f64) {
    let fro: f64 = m.iter().flatten().map(|z| z.norm_sqr()).sum();
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm();
    let disc = (fro * fro - 4.0 * det * det).max(0.0).sqrt();
    let s1 = ((fro + disc) / 2.0).sqrt();
    let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
    (s1, s2)
}

/// Schmidt rank two at relative tolerance `rel_tol`.
pub fn is_rank_two_2x2(m: &[[Complex64; 2]; 2], rel_tol: f64) -> bool {
    let (s1, s2) = singular_values_2x2(m);
    s1 > 0.0 && s2 > rel_tol * s1
}
