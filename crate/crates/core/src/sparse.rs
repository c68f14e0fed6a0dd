//! Compressed-row storage for complex Hermitian matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dense::DenseMatrix;
use crate::error::{domain, Error, Result};

/// Largest tolerated `|A_ij − conj(A_ji)|` for a stored operator.
pub const HERMITICITY_TOLERANCE: f64 = 1e-14;

/// Largest tolerated imaginary part of an expectation value.
pub const EXPECTATION_IMAG_TOLERANCE: f64 = 1e-10;

/// Sparse complex Hermitian matrix in compressed-row form.
///
/// Rows are sorted by column, carry no duplicates and no explicit zeros.
/// Matrices whose entries are all real keep only the real parts, which
/// roughly halves the memory traffic of a product.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHermitianOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    values: Values,
}

#[derive(Debug, Clone, PartialEq)]
enum Values {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Values {
    fn from_complex(values: Vec<Complex64>) -> Self {
        if values.iter().all(|v| v.im == 0.0) {
            Values::Real(values.iter().map(|v| v.re).collect())
        } else {
            Values::Complex(values)
        }
    }

    fn len(&self) -> usize {
        match self {
            Values::Real(v) => v.len(),
            Values::Complex(v) => v.len(),
        }
    }

    fn at(&self, k: usize) -> Complex64 {
        match self {
            Values::Real(v) => Complex64::new(v[k], 0.0),
            Values::Complex(v) => v[k],
        }
    }
}

impl SparseHermitianOperator {
    /// Assembles a matrix row by row. `fill_row(i, entries)` pushes the
    /// `(column, value)` pairs of row `i` in any order; duplicates are summed
    /// and zeros dropped. Fails if the result is not Hermitian.
    pub fn from_row_fn<F>(dim: usize, mut fill_row: F) -> Result<Self>
    where
        F: FnMut(usize, &mut Vec<(usize, Complex64)>),
    {
        if dim > u32::MAX as usize {
            return Err(domain(format!("dimension {dim} too large")));
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        let mut scratch = Vec::new();
        row_ptr.push(0);
        for i in 0..dim {
            scratch.clear();
            fill_row(i, &mut scratch);
            scratch.sort_unstable_by_key(|&(j, _)| j);
            let mut k = 0;
            while k < scratch.len() {
                let (j, mut v) = scratch[k];
                if j >= dim {
                    return Err(domain(format!("column {j} out of range in row {i}")));
                }
                k += 1;
                while k < scratch.len() && scratch[k].0 == j {
                    v += scratch[k].1;
                    k += 1;
                }
                if v != Complex64::new(0.0, 0.0) {
                    cols.push(j as u32);
                    values.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        let op = SparseHermitianOperator {
            dim,
            row_ptr,
            cols,
            values: Values::from_complex(values),
        };
        let err = op.hermiticity_error();
        if err > HERMITICITY_TOLERANCE {
            return Err(domain(format!("matrix is not Hermitian (max |A - A†| = {err:.3e})")));
        }
        Ok(op)
    }

    /// Builds a matrix from `(row, col, value)` triplets.
    pub fn from_triplets(dim: usize, triplets: &[(usize, usize, Complex64)]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); dim];
        for &(i, j, v) in triplets {
            if i >= dim {
                return Err(domain(format!("row {i} out of range")));
            }
            rows[i].push((j, v));
        }
        Self::from_row_fn(dim, |i, out| out.extend_from_slice(&rows[i]))
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut row_ptr = Vec::with_capacity(diag.len() + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for (i, &d) in diag.iter().enumerate() {
            if d != 0.0 {
                cols.push(i as u32);
                values.push(d);
            }
            row_ptr.push(cols.len());
        }
        SparseHermitianOperator {
            dim: diag.len(),
            row_ptr,
            cols,
            values: Values::Real(values),
        }
    }

    pub fn zero(dim: usize) -> Self {
        SparseHermitianOperator {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            values: Values::Real(Vec::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i`, in column order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.cols[k] as usize, self.values.at(k)))
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let start = self.row_ptr[i];
        let cols = &self.cols[start..self.row_ptr[i + 1]];
        match cols.binary_search(&(j as u32)) {
            Ok(k) => self.values.at(start + k),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// True when every stored entry is real.
    pub fn is_real(&self) -> bool {
        matches!(self.values, Values::Real(_))
    }

    pub fn max_row_nnz(&self) -> usize {
        self.row_ptr.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| self.row(i).all(|(j, _)| j == i))
    }

    /// Real parts of the main diagonal.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    /// `max |A_ij − conj(A_ji)|` over all stored entries.
    pub fn hermiticity_error(&self) -> f64 {
        let mut err = 0.0f64;
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                err = err.max((v - self.get(j, i).conj()).norm());
            }
        }
        err
    }

    /// `y = A x`.
    pub fn matvec_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.matvec_dot(x, y);
    }

    /// `y = A x`, returning `x†y`.
    pub fn matvec_dot(&self, x: &[Complex64], y: &mut [Complex64]) -> Complex64 {
        assert_eq!(x.len(), self.dim, "input length mismatch");
        assert_eq!(y.len(), self.dim, "output length mismatch");
        match &self.values {
            Values::Real(values) => self.product_rows(x, y, |k, xj| xj * values[k]),
            Values::Complex(values) => self.product_rows(x, y, |k, xj| values[k] * xj),
        }
    }

    #[inline(always)]
    fn product_rows<F>(&self, x: &[Complex64], y: &mut [Complex64], term: F) -> Complex64
    where
        F: Fn(usize, Complex64) -> Complex64,
    {
        let mut dot = Complex64::new(0.0, 0.0);
        for ((out, w), &xi) in y.iter_mut().zip(self.row_ptr.windows(2)).zip(x) {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &j) in (w[0]..w[1]).zip(&self.cols[w[0]..w[1]]) {
                acc += term(k, x[j as usize]);
            }
            *out = acc;
            dot += xi.conj() * acc;
        }
        dot
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        self.matvec_into(x, &mut y);
        y
    }

    /// `⟨ψ|A|ψ⟩` (not divided by the norm), checked to be real.
    pub fn expectation(&self, psi: &[Complex64]) -> Result<f64> {
        assert_eq!(psi.len(), self.dim, "state length mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &p) in psi.iter().enumerate() {
            let mut row = Complex64::new(0.0, 0.0);
            for (j, v) in self.row(i) {
                row += v * psi[j];
            }
            acc += p.conj() * row;
        }
        if acc.im.abs() > EXPECTATION_IMAG_TOLERANCE * acc.re.abs().max(1.0) {
            return Err(Error::NonRealExpectation { imag: acc.im });
        }
        Ok(acc.re)
    }

    /// `Σ_k c_k A_k` over operators of equal dimension.
    pub fn linear_combination(terms: &[(f64, &SparseHermitianOperator)]) -> Result<Self> {
        let dim = terms.first().map(|(_, op)| op.dim).unwrap_or(0);
        if terms.iter().any(|(_, op)| op.dim != dim) {
            return Err(domain("dimension mismatch in linear combination"));
        }
        Self::from_row_fn(dim, |i, out| {
            for &(c, op) in terms {
                out.extend(op.row(i).map(|(j, v)| (j, v * c)));
            }
        })
    }

    /// Submatrix on the given sorted, duplicate-free index set.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(domain("restriction indices must be strictly increasing"));
        }
        if indices.last().is_some_and(|&i| i >= self.dim) {
            return Err(domain("restriction index out of range"));
        }
        let mut position = vec![u32::MAX; self.dim];
        for (p, &i) in indices.iter().enumerate() {
            position[i] = p as u32;
        }
        Self::from_row_fn(indices.len(), |p, out| {
            for (j, v) in self.row(indices[p]) {
                let q = position[j];
                if q != u32::MAX {
                    out.push((q as usize, v));
                }
            }
        })
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Largest element magnitude of the commutator `AB − BA`, computed by
    /// explicit sparse products.
    pub fn commutator_max_abs(a: &Self, b: &Self) -> Result<f64> {
        if a.dim != b.dim {
            return Err(domain("dimension mismatch in commutator"));
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut acc = vec![zero; a.dim];
        let mut touched = Vec::new();
        let mut max = 0.0f64;
        for i in 0..a.dim {
            // row i of AB: Σ_k A_ik B_k·, minus row i of BA.
            for (sign, left, right) in [(1.0, a, b), (-1.0, b, a)] {
                for (k, lk) in left.row(i) {
                    for (j, rk) in right.row(k) {
                        if acc[j] == zero {
                            touched.push(j);
                        }
                        acc[j] += lk * rk * sign;
                    }
                }
            }
            for &j in &touched {
                max = max.max(acc[j].norm());
                acc[j] = zero;
            }
            touched.clear();
        }
        Ok(max)
    }
}
