//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! The channel count never exceeds 16, so a cyclic Jacobi sweep is both the
//! simplest and one of the most accurate options: each rotation is unitary
//! to machine precision, eigenvectors come out orthonormal essentially for
//! free, and quadratic convergence sets in after two or three sweeps. The
//! complex off-diagonal entry is first rotated onto the real axis, then
//! annihilated with the classical symmetric Schur rotation.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numeric::mat::{CMat, HermitianMatrix};

/// Eigenvalues (ascending) and matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    /// Real eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose j-th column is the eigenvector of `values[j]`.
    pub vectors: CMat,
}

/// Hard cap on Jacobi sweeps before declaring non-convergence.
const MAX_SWEEPS: usize = 40;

/// Full eigendecomposition of a Hermitian matrix.
///
/// The returned eigenvalues are ascending; ties keep the order produced by
/// the final sweep so repeated calls on the same matrix are deterministic.
pub fn eig_herm(m: &HermitianMatrix) -> Result<EigDecomposition> {
    let n = m.dim();
    let mut a = m.mat().clone();
    let mut v = CMat::identity(n);

    // Convergence target: off-diagonal mass small relative to the matrix
    // scale. The extra n factor keeps the criterion dimension-independent.
    let scale = a.fro_norm().max(1e-300);
    let target = 1e-15 * scale;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        if sweeps >= MAX_SWEEPS {
            return Err(Error::EigNonConvergence { residual: off, sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    // Sort ascending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMat::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_col(dst, &v.col(src));
    }
    Ok(EigDecomposition { values, vectors })
}

/// Frobenius norm of the strict off-diagonal part.
fn off_diagonal_norm(a: &CMat) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation annihilating `a[(p, q)]`.
///
/// With `g = a[(p, q)] = r e^{i phi}`, the unitary
/// `J = diag(1, e^{i phi}) * R(c, s)` (acting on the (p, q) plane) maps the
/// Hermitian block to a real symmetric one and then applies the classical
/// Jacobi rotation. We update `a <- J* a J` and accumulate `v <- v J`.
fn rotate(a: &mut CMat, v: &mut CMat, p: usize, q: usize) {
    let g = a[(p, q)];
    let r = g.norm();
    if r == 0.0 {
        return;
    }
    let phase = g / r; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let tau = (aqq - app) / (2.0 * r);
    // Smaller-angle root of t^2 + 2 tau t - 1 = 0.
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Column p of J is (c, -s e^{-i phi}); column q is (s e^{i phi}, c),
    // restricted to the (p, q) plane.
    let jpp = C64::new(c, 0.0);
    let jpq = phase * s;
    let jqp = -phase.conj() * s;
    let jqq = C64::new(c, 0.0);

    let n = a.dim();
    // a <- J* a J: first the column update a J, then the row update J* a.
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * jpp + aiq * jqp;
        a[(i, q)] = aip * jpq + aiq * jqq;
    }
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = jpp.conj() * apj + jqp.conj() * aqj;
        a[(q, j)] = jpq.conj() * apj + jqq.conj() * aqj;
    }
    // Clean the annihilated pair and enforce real diagonal against rounding.
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * jpp + viq * jqp;
        v[(i, q)] = vip * jpq + viq * jqq;
    }
}

/// Rotate each eigenvector column to the canonical gauge: the entry of
/// largest modulus (ties broken by the smallest row index within a 1e-12
/// relative band) is made real and positive.
///
/// Scattering matrices are only comparable between the predictor and the
/// oracle when both sides frame channels identically, and this gauge is that
/// frame.
pub fn phase_fix_columns(vectors: &mut CMat) {
    let n = vectors.dim();
    for j in 0..n {
        let col = vectors.col(j);
        let mut best = 0usize;
        let mut best_mod = 0.0f64;
        for (i, z) in col.iter().enumerate() {
            let m = z.norm();
            if m > best_mod * (1.0 + 1e-12) {
                best_mod = m;
                best = i;
            }
        }
        let anchor = col[best];
        if anchor.norm() == 0.0 {
            continue;
        }
        let rot = anchor.conj() / anchor.norm();
        let fixed: Vec<C64> = col.iter().map(|z| z * rot).collect();
        vectors.set_col(j, &fixed);
    }
}
