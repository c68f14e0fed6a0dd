//! Small dense linear algebra for the exact-propagation oracle.
//!
//! Real symmetric matrices are diagonalized by Householder reduction to
//! tridiagonal form followed by the implicit-shift QL iteration (the
//! classic `tred2`/`tql2` pair). A complex Hermitian `H = A + iB` is
//! handled through its real symmetric embedding `[[A, −B], [B, A]]`, whose
//! spectrum is that of `H` with every eigenvalue doubled.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{domain, Result};

/// Square complex matrix in column-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for j in 0..n {
            for i in 0..n {
                m.data[j * n + i] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// `max |M_ij − conj(M_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut err = 0.0f64;
        for j in 0..self.n {
            for i in 0..=j {
                err = err.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        err
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n, "input length mismatch");
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for (j, &xj) in x.iter().enumerate() {
            for (yi, &m) in y.iter_mut().zip(&self.data[j * self.n..(j + 1) * self.n]) {
                *yi += m * xj;
            }
        }
        y
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[j * self.n + i]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[j * self.n + i]
    }
}

/// Eigenpairs of a real symmetric matrix; `vectors` is column-major with
/// eigenvector `k` in column `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> &[f64] {
        let n = self.values.len();
        &self.vectors[k * n..(k + 1) * n]
    }
}

/// Diagonalizes the real symmetric `n × n` matrix stored column-major in `a`.
pub fn symmetric_eigen(a: &[f64], n: usize) -> Result<SymmetricEigen> {
    if a.len() != n * n {
        return Err(domain(format!("expected {} entries for a {n}x{n} matrix, got {}", n * n, a.len())));
    }
    if n == 0 {
        return Ok(SymmetricEigen { values: Vec::new(), vectors: Vec::new() });
    }
    let mut v = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut v, &mut d, &mut e);
    tql2(n, &mut v, &mut d, &mut e)?;
    Ok(SymmetricEigen { values: d, vectors: v })
}

/// Householder tridiagonalization with accumulated transform (column-major `v`).
fn tred2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |r: usize, c: usize| c * n + r;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for &dk in &d[..i] {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for dk in d[..i].iter_mut() {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = libm::sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e[..i].iter_mut() {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL iteration on the tridiagonal `(d, e)`, rotating the columns of `v`.
fn tql2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    const MAX_SWEEPS_PER_VALUE: usize = 60;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_SWEEPS_PER_VALUE {
                    return Err(domain(format!("QL iteration did not converge for eigenvalue {l}")));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d[l + 2..].iter_mut() {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (left, right) = v.split_at_mut((i + 1) * n);
                    let col_i = &mut left[i * n..];
                    let col_next = &mut right[..n];
                    for (a, b) in col_i.iter_mut().zip(col_next.iter_mut()) {
                        let hb = *b;
                        *b = s * *a + c * hb;
                        *a = c * *a - s * hb;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Spectral decomposition `H = w Σ_k λ_k v_k v_k†` of a Hermitian matrix.
///
/// For real input `w = 1` and the `v_k` are the `n` orthonormal
/// eigenvectors. For complex input the `2n` vectors come from the real
/// embedding; each eigenvector of `H` appears twice and `w = ½`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column-major, `values.len()` columns of length `dim`.
    pub vectors: Vec<Complex64>,
    pub weight: f64,
    dim: usize,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self, k: usize) -> &[Complex64] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }

    /// `w Σ_k f(λ_k) v_k (v_k† x)`.
    pub fn apply_fn(&self, x: &[Complex64], f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim, "input length mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (k, &lambda) in self.values.iter().enumerate() {
            let v = self.vector(k);
            let overlap = v.iter().zip(x).fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b);
            let c = overlap * f(lambda) * self.weight;
            for (o, &vi) in out.iter_mut().zip(v) {
                *o += c * vi;
            }
        }
        out
    }
}

/// Hermiticity tolerance accepted by [`hermitian_eigen`].
pub const DENSE_HERMITICITY_TOLERANCE: f64 = 1e-12;

pub fn hermitian_eigen(h: &DenseMatrix) -> Result<HermitianEigen> {
    let n = h.dim();
    let err = h.hermiticity_error();
    if err > DENSE_HERMITICITY_TOLERANCE {
        return Err(domain(format!("matrix is not Hermitian (max |H - H†| = {err:.3e})")));
    }
    if h.is_real() {
        let a: Vec<f64> = h.data.iter().map(|z| z.re).collect();
        let eig = symmetric_eigen(&a, n)?;
        Ok(HermitianEigen {
            vectors: eig.vectors.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            values: eig.values,
            weight: 1.0,
            dim: n,
        })
    } else {
        let m = 2 * n;
        let mut a = vec![0.0; m * m];
        for j in 0..n {
            for i in 0..n {
                let z = h[(i, j)];
                a[j * m + i] = z.re;
                a[(j + n) * m + i + n] = z.re;
                a[(j + n) * m + i] = -z.im;
                a[j * m + i + n] = z.im;
            }
        }
        let eig = symmetric_eigen(&a, m)?;
        let mut vectors = Vec::with_capacity(m * n);
        for k in 0..m {
            let col = eig.vector(k);
            vectors.extend((0..n).map(|i| Complex64::new(col[i], col[i + n])));
        }
        Ok(HermitianEigen {
            values: eig.values,
            vectors,
            weight: 0.5,
            dim: n,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reconstruction_error(h: &DenseMatrix, eig: &HermitianEigen) -> f64 {
        let n = h.dim();
        let mut err = 0.0f64;
        for j in 0..n {
            let mut unit = vec![Complex64::new(0.0, 0.0); n];
            unit[j] = Complex64::new(1.0, 0.0);
            let col = eig.apply_fn(&unit, |l| Complex64::new(l, 0.0));
            for i in 0..n {
                err = err.max((col[i] - h[(i, j)]).norm());
            }
        }
        err
    }

    #[test]
    fn two_by_two() {
        let a = [2.0, 1.0, 1.0, 2.0];
        let eig = symmetric_eigen(&a, 2).unwrap();
        let mut values = eig.values.clone();
        values.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((values[0] - 1.0).abs() < 1e-15 && (values[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_and_reducible() {
        // block-diagonal with repeated eigenvalues and exact zeros
        let n = 6;
        let h = DenseMatrix::from_fn(n, |i, j| {
            let v = match (i, j) {
                (0, 1) | (1, 0) => 0.5,
                (3, 4) | (4, 3) => 0.5,
                (2, 2) | (5, 5) => 1.0,
                _ => 0.0,
            };
            Complex64::new(v, 0.0)
        });
        let eig = hermitian_eigen(&h).unwrap();
        assert!(reconstruction_error(&h, &eig) < 1e-14);
    }

    #[test]
    fn pauli_y_through_embedding() {
        let h = DenseMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => Complex64::new(0.0, -1.0),
            (1, 0) => Complex64::new(0.0, 1.0),
            _ => Complex64::new(0.0, 0.0),
        });
        let eig = hermitian_eigen(&h).unwrap();
        assert_eq!(eig.values.len(), 4);
        assert_eq!(eig.weight, 0.5);
        assert!(reconstruction_error(&h, &eig) < 1e-14);
        let x = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let id = eig.apply_fn(&x, |_| Complex64::new(1.0, 0.0));
        assert!((id[0] - x[0]).norm() < 1e-14 && id[1].norm() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = DenseMatrix::from_fn(2, |i, j| Complex64::new((i + 2 * j) as f64, 0.0));
        assert!(hermitian_eigen(&h).is_err());
        assert!(symmetric_eigen(&[1.0, 2.0], 2).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn random_hermitian_reconstructs(
            n in 1usize..9,
            entries in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 81),
            real in any::<bool>(),
        ) {
            let h = DenseMatrix::from_fn(n, |i, j| {
                let (a, b) = entries[i.min(j) * 9 + i.max(j)];
                let b = if real || i == j { 0.0 } else if i < j { b } else { -b };
                Complex64::new(a, b)
            });
            let eig = hermitian_eigen(&h).unwrap();
            prop_assert!(reconstruction_error(&h, &eig) < 1e-13);
        }
    }
}
