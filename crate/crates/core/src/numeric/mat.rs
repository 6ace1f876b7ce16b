//! Small dense complex matrices.
//!
//! Every matrix in this engine is square and tiny (n <= 16 channels), so we
//! carry a flat row-major `Vec<Complex64>` and write the handful of kernels
//! we need (products, adjoints, norms, a pivoted LU) directly. The two
//! semantically loaded wrappers are [`HermitianMatrix`], which validates
//! conjugate symmetry on construction, and [`UnitaryMatrix`], which carries a
//! propagator or scattering matrix together with its measured unitarity
//! defect.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n: usize,
    data: Vec<C64>,
}

impl CMat {
    /// Zero matrix of dimension `n`.
    pub fn zeros(n: usize) -> Self {
        CMat { n, data: vec![C64::new(0.0, 0.0); n * n] }
    }

    /// Identity matrix of dimension `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a row-major slice; panics if the length is not `n * n`.
    pub fn from_rows(n: usize, entries: &[C64]) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n^2");
        CMat { n, data: entries.to_vec() }
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        let mut out = CMat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n, "dimension mismatch");
        let mut out = vec![C64::new(0.0, 0.0); self.n];
        for i in 0..self.n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..self.n {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Entrywise difference `self - rhs`.
    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a -= *b;
        }
        out
    }

    /// Largest entry modulus (max-entry norm). This is the norm all the
    /// engine tolerances are quoted in.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Column `j` as a vector.
    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    /// Overwrite column `j`.
    pub fn set_col(&mut self, j: usize, v: &[C64]) {
        assert_eq!(v.len(), self.n);
        for i in 0..self.n {
            self[(i, j)] = v[i];
        }
    }

    /// Entrywise modulus-squared matrix as flat row-major data
    /// (probability matrix of a scattering amplitude matrix).
    pub fn abs2(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Row-major view of the raw entries.
    pub fn entries(&self) -> &[C64] {
        &self.data
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

/// Maximum relative conjugate-asymmetry admitted by [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-14;

/// A matrix certified Hermitian at construction.
///
/// The check is `max |m_ij - conj(m_ji)| <= 1e-14 * max(1, max |m_ij|)`;
/// after it passes, the stored matrix is symmetrized exactly so downstream
/// eigensolves see a bit-level Hermitian operand.
#[derive(Debug, Clone)]
pub struct HermitianMatrix(CMat);

impl HermitianMatrix {
    /// Validate and wrap. Fails with a domain error when the asymmetry
    /// exceeds the tolerance.
    pub fn new(m: CMat) -> Result<Self> {
        let n = m.dim();
        let scale = m.max_abs().max(1.0);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let asym = (m[(i, j)] - m[(j, i)].conj()).norm();
                if asym > worst {
                    worst = asym;
                }
            }
        }
        if worst > HERMITIAN_TOL * scale {
            return Err(Error::Domain(format!(
                "matrix is not Hermitian: asymmetry {worst:.3e} exceeds {:.1e} * scale",
                HERMITIAN_TOL
            )));
        }
        // Exact symmetrization: keep the upper triangle, mirror it, and force
        // real diagonal entries.
        let mut s = m;
        for i in 0..n {
            s[(i, i)] = C64::new(s[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let v = s[(i, j)];
                s[(j, i)] = v.conj();
            }
        }
        Ok(HermitianMatrix(s))
    }

    /// The underlying matrix.
    pub fn mat(&self) -> &CMat {
        &self.0
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// A (numerically) unitary matrix together with its measured defect.
///
/// Construction never fails: propagators are unitary by construction up to
/// rounding, and the engine's contracts are phrased in terms of the measured
/// defect, so we record it instead of gatekeeping on it.
#[derive(Debug, Clone)]
pub struct UnitaryMatrix {
    mat: CMat,
    defect: f64,
}

impl UnitaryMatrix {
    /// Wrap a matrix, measuring `max |u* u - id|`.
    pub fn new(mat: CMat) -> Self {
        let defect = unitarity_defect(&mat);
        UnitaryMatrix { mat, defect }
    }

    /// The underlying matrix.
    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    /// Max-entry norm of `u* u - id` measured at construction.
    pub fn defect(&self) -> f64 {
        self.defect
    }
}

/// Max-entry norm of `u* u - id`; zero exactly when `u` is unitary.
pub fn unitarity_defect(u: &CMat) -> f64 {
    let n = u.dim();
    u.adjoint().mul(u).sub(&CMat::identity(n)).max_abs()
}

/// Re-orthonormalize the columns in place (modified Gram-Schmidt).
///
/// Used to scrub accumulated rounding from long products of unitary steps;
/// on an already near-unitary matrix the perturbation is of the order of the
/// defect itself.
pub fn orthonormalize_columns(m: &mut CMat) {
    let n = m.dim();
    for j in 0..n {
        for k in 0..j {
            let mut proj = C64::new(0.0, 0.0);
            for i in 0..n {
                proj += m[(i, k)].conj() * m[(i, j)];
            }
            for i in 0..n {
                let s = m[(i, k)];
                m[(i, j)] -= proj * s;
            }
        }
        let mut norm2 = 0.0;
        for i in 0..n {
            norm2 += m[(i, j)].norm_sqr();
        }
        let inv = 1.0 / norm2.sqrt();
        for i in 0..n {
            m[(i, j)] *= inv;
        }
    }
}

/// Solve `a x = b` by LU with partial pivoting. `a` is consumed as the
/// factorization workspace. Fails on (numerically) singular systems.
pub fn lu_solve(mut a: CMat, b: &[C64]) -> Result<Vec<C64>> {
    let n = a.dim();
    assert_eq!(b.len(), n, "dimension mismatch");
    let mut x: Vec<C64> = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        // Pivot: largest modulus in column k at or below the diagonal.
        let mut p = k;
        let mut best = a[(k, k)].norm();
        for i in (k + 1)..n {
            let v = a[(i, k)].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best < 1e-300 {
            return Err(Error::Structure(format!(
                "linear system is singular at elimination step {k}"
            )));
        }
        if p != k {
            for j in 0..n {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = tmp;
            }
            x.swap(k, p);
            perm.swap(k, p);
        }
        let piv = a[(k, k)];
        for i in (k + 1)..n {
            let f = a[(i, k)] / piv;
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            a[(i, k)] = f;
            for j in (k + 1)..n {
                let akj = a[(k, j)];
                a[(i, j)] -= f * akj;
            }
            let xk = x[k];
            x[i] -= f * xk;
        }
    }

    // Back substitution.
    for k in (0..n).rev() {
        let mut acc = x[k];
        for j in (k + 1)..n {
            acc -= a[(k, j)] * x[j];
        }
        x[k] = acc / a[(k, k)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_has_zero_defect() {
        assert_eq!(unitarity_defect(&CMat::identity(4)), 0.0);
    }

    #[test]
    fn orthonormalization_restores_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut m = CMat::zeros(4);
        // Random full-rank matrix, nowhere near unitary.
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        orthonormalize_columns(&mut m);
        assert!(unitarity_defect(&m) < 1e-14);
    }

    #[test]
    fn shear_matrix_has_unit_defect() {
        let m = CMat::from_rows(2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!((unitarity_defect(&m) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hermitian_constructor_rejects_asymmetry() {
        let m = CMat::from_rows(2, &[c(1.0, 0.0), c(0.5, 0.1), c(0.5, 0.1), c(2.0, 0.0)]);
        // conj(m_21) = 0.5 - 0.1i != m_12, asymmetry 0.2.
        assert!(HermitianMatrix::new(m).is_err());
    }

    #[test]
    fn hermitian_constructor_accepts_and_symmetrizes() {
        let m = CMat::from_rows(
            2,
            &[c(1.0, 0.0), c(0.5, 0.1), c(0.5, -0.1), c(2.0, 1e-16)],
        );
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h.mat()[(1, 1)].im, 0.0);
        assert_eq!(h.mat()[(1, 0)], c(0.5, -0.1));
    }

    #[test]
    fn lu_solves_random_system_to_machine_accuracy() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 5, 13] {
            let mut a = CMat::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
                a[(i, i)] += c(3.0, 0.0); // keep it comfortably non-singular
            }
            let xs: Vec<C64> = (0..n)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let b = a.mul_vec(&xs);
            let sol = lu_solve(a.clone(), &b).unwrap();
            let worst = sol
                .iter()
                .zip(xs.iter())
                .map(|(u, v)| (u - v).norm())
                .fold(0.0, f64::max);
            assert!(worst < 1e-12, "n={n}: residual {worst:.3e}");
        }
    }

    #[test]
    fn lu_rejects_singular_system() {
        let a = CMat::from_rows(2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        assert!(lu_solve(a, &[c(1.0, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn defect_is_stable_under_composition() {
        // Products of nearly-unitary matrices stay nearly unitary:
        // defect(u v) <= 4 (defect(u) + defect(v)) for the small dimensions
        // and small defects this engine composes.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 8, 16] {
            // Random unitary via Gram-Schmidt on a random matrix.
            let mut u = random_unitary(n, &mut rng);
            let mut v = random_unitary(n, &mut rng);
            // Inject small non-unitary perturbations.
            for m in [&mut u, &mut v] {
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] += c(1e-9 * rng.gen_range(-1.0..1.0), 1e-9 * rng.gen_range(-1.0..1.0));
                    }
                }
            }
            let du = unitarity_defect(&u);
            let dv = unitarity_defect(&v);
            let duv = unitarity_defect(&u.mul(&v));
            assert!(
                duv <= 4.0 * (du + dv),
                "n={n}: defect {duv:.3e} vs bound {:.3e}",
                4.0 * (du + dv)
            );
        }
    }

    fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMat {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        // Gram-Schmidt on columns.
        for j in 0..n {
            let mut col = m.col(j);
            for k in 0..j {
                let prev = m.col(k);
                let proj: C64 = prev.iter().zip(col.iter()).map(|(p, q)| p.conj() * q).sum();
                for (ci, pi) in col.iter_mut().zip(prev.iter()) {
                    *ci -= proj * pi;
                }
            }
            let norm: f64 = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for ci in col.iter_mut() {
                *ci /= norm;
            }
            m.set_col(j, &col);
        }
        m
    }
}
