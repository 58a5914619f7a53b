//! Dense and sparse complex linear algebra, backed by `faer`.
//!
//! Matrices here are column-major. The dense routines are the oracle backend
//! (`dense_build`, resolvent solves) and the spectral workhorse; the sparse
//! shift-invert Arnoldi solver finds interior eigenpairs of large blocks.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};

use crate::{Error, Result, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            data: vec![ZERO; nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for j in 0..ncols {
            for i in 0..nrows {
                m.data[j * nrows + i] = f(i, j);
            }
        }
        m
    }

    /// Build from whole columns.
    pub fn from_columns(nrows: usize, cols: &[Vec<C64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(nrows * cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != nrows {
                return Err(Error::InvalidParameter(format!(
                    "column {j} has {} entries, expected {nrows}",
                    c.len()
                )));
            }
            data.extend_from_slice(c);
        }
        Ok(Self {
            nrows,
            ncols: cols.len(),
            data,
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[j * self.nrows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[j * self.nrows + i] = v;
    }

    pub fn col(&self, j: usize) -> &[C64] {
        &self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [C64] {
        &mut self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::InvalidParameter(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        Ok(Self::from_faer(&(self.to_faer() * other.to_faer())))
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.nrows];
        for (j, &x) in v.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.col(j)) {
                *o += a * x;
            }
        }
        out
    }

    /// The submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|M†M − 1|`.
    pub fn unitarity_error(&self) -> f64 {
        let g = self.adjoint().to_faer() * self.to_faer();
        let mut err: f64 = 0.0;
        for j in 0..g.ncols() {
            for i in 0..g.nrows() {
                let want = if i == j { 1.0 } else { 0.0 };
                err = err.max((g[(i, j)] - C64::new(want, 0.0)).norm());
            }
        }
        err
    }

    pub fn to_faer(&self) -> Mat<C64> {
        Mat::from_fn(self.nrows, self.ncols, |i, j| self.get(i, j))
    }

    pub fn from_faer(m: &Mat<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

fn square(m: &DenseMatrix) -> Result<()> {
    if m.nrows != m.ncols {
        return Err(Error::InvalidParameter(format!(
            "expected a square matrix, got {}x{}",
            m.nrows, m.ncols
        )));
    }
    Ok(())
}

pub fn eigenvalues(m: &DenseMatrix) -> Result<Vec<C64>> {
    square(m)?;
    m.to_faer()
        .eigenvalues()
        .map_err(|e| Error::Solver(format!("{e:?}")))
}

/// Eigenvalues and right eigenvectors (as columns).
pub fn eigen(m: &DenseMatrix) -> Result<(Vec<C64>, DenseMatrix)> {
    square(m)?;
    let evd = m
        .to_faer()
        .eigen()
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    let s = evd.S();
    let values = (0..m.nrows).map(|i| s[i]).collect();
    let u = evd.U();
    let vectors = DenseMatrix::from_fn(m.nrows, m.ncols, |i, j| u[(i, j)]);
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle is
/// read.
pub fn hermitian_eigenvalues(m: &DenseMatrix) -> Result<Vec<f64>> {
    square(m)?;
    m.to_faer()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Solver(format!("{e:?}")))
}

pub fn singular_values(m: &DenseMatrix) -> Result<Vec<f64>> {
    m.to_faer()
        .singular_values()
        .map_err(|e| Error::Solver(format!("{e:?}")))
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: DenseMatrix,
    /// 2-norm condition number of the system matrix.
    pub condition: f64,
}

/// Solve `A X = B` by LU with partial pivoting.
pub fn solve(a: &DenseMatrix, b: &DenseMatrix) -> Result<Solution> {
    square(a)?;
    if b.nrows != a.nrows {
        return Err(Error::InvalidParameter(format!(
            "right-hand side has {} rows, system has {}",
            b.nrows, a.nrows
        )));
    }
    let sv = singular_values(a)?;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !condition.is_finite() || condition > 1e14 {
        return Err(Error::Solver(format!(
            "near-singular system, condition number {condition:.3e}"
        )));
    }
    let fa = a.to_faer();
    let x = fa.partial_piv_lu().solve(b.to_faer());
    Ok(Solution {
        x: DenseMatrix::from_faer(&x),
        condition,
    })
}

/// Largest distance between paired entries of two multisets of complex
/// numbers under greedy nearest matching.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let mut best = (f64::INFINITY, usize::MAX);
        for (k, y) in b.iter().enumerate() {
            if !used[k] {
                let d = (x - y).norm();
                if d < best.0 {
                    best = (d, k);
                }
            }
        }
        used[best.1] = true;
        worst = worst.max(best.0);
    }
    worst
}

/// Square sparse matrix in compressed-column form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<C64>,
}

impl SparseMatrix {
    /// Build from per-column entry lists; repeated rows are summed.
    pub fn from_columns(n: usize, columns: Vec<Vec<(usize, C64)>>) -> Result<Self> {
        if columns.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{} columns for dimension {n}",
                columns.len()
            )));
        }
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for mut col in columns {
            col.sort_by_key(|e| e.0);
            let mut last = usize::MAX;
            for (r, v) in col {
                if r >= n {
                    return Err(Error::InvalidParameter(format!("row {r} out of range {n}")));
                }
                if r == last {
                    *values.last_mut().unwrap() += v;
                } else {
                    row_idx.push(r);
                    values.push(v);
                    last = r;
                }
            }
            col_ptr.push(row_idx.len());
        }
        Ok(Self {
            n,
            col_ptr,
            row_idx,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let r = self.col_ptr[j]..self.col_ptr[j + 1];
        self.row_idx[r.clone()].iter().cloned().zip(self.values[r].iter().cloned())
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.n];
        for (j, &x) in v.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            for (i, a) in self.column(j) {
                out[i] += a * x;
            }
        }
        out
    }

    /// Product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidParameter(format!(
                "dimension mismatch {} vs {}",
                self.n, other.n
            )));
        }
        let cols = (0..self.n)
            .map(|j| {
                let mut acc = Vec::new();
                for (k, b) in other.column(j) {
                    acc.extend(self.column(k).map(|(i, a)| (i, a * b)));
                }
                acc
            })
            .collect();
        Self::from_columns(self.n, cols)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n, self.n);
        for j in 0..self.n {
            for (i, v) in self.column(j) {
                m.set(i, j, m.get(i, j) + v);
            }
        }
        m
    }

    fn shifted_faer(&self, sigma: C64) -> Result<SparseColMat<usize, C64>> {
        let mut trip = Vec::with_capacity(self.nnz() + self.n);
        let mut diag_seen = vec![false; self.n];
        for j in 0..self.n {
            for (i, v) in self.column(j) {
                let v = if i == j {
                    diag_seen[j] = true;
                    v - sigma
                } else {
                    v
                };
                trip.push(Triplet::new(i, j, v));
            }
        }
        for (j, seen) in diag_seen.iter().enumerate() {
            if !seen {
                trip.push(Triplet::new(j, j, -sigma));
            }
        }
        SparseColMat::try_new_from_triplets(self.n, self.n, &trip)
            .map_err(|e| Error::Solver(format!("{e:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: C64,
    pub vector: Vec<C64>,
    /// `‖A v − λ v‖` for the unit-norm `v`.
    pub residual: f64,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// The `count` eigenpairs of `a` nearest to `sigma`, by Arnoldi iteration on
/// `(A − σ)⁻¹` with a sparse LU factorization.
///
/// The Krylov space is rebuilt with twice the dimension until `count` Ritz
/// pairs reach residual `tol`.
pub fn shift_invert_eigs(
    a: &SparseMatrix,
    sigma: C64,
    count: usize,
    tol: f64,
) -> Result<Vec<EigenPair>> {
    let n = a.dim();
    if count == 0 || count > n {
        return Err(Error::InvalidParameter(format!(
            "cannot extract {count} eigenpairs from dimension {n}"
        )));
    }
    let lu = a
        .shifted_faer(sigma)?
        .sp_lu()
        .map_err(|e| Error::Solver(format!("sparse LU failed: {e:?}")))?;
    let apply = |v: &[C64]| -> Vec<C64> {
        let mut rhs = Mat::from_fn(n, 1, |i, _| v[i]);
        lu.solve_in_place(rhs.as_mut());
        (0..n).map(|i| rhs[(i, 0)]).collect()
    };

    let mut m = (3 * count + 20).min(n);
    loop {
        let pairs = arnoldi_pass(a, sigma, &apply, n, m, tol);
        let good: Vec<EigenPair> = pairs.into_iter().filter(|p| p.residual <= tol).take(count).collect();
        if good.len() == count {
            return Ok(good);
        }
        if m == n {
            return Err(Error::Solver(format!(
                "only {} of {count} eigenpairs converged",
                good.len()
            )));
        }
        m = (2 * m).min(n);
    }
}

/// One Arnoldi build of dimension `m`; returns Ritz pairs ordered by
/// distance of the eigenvalue from `sigma`.
fn arnoldi_pass(
    a: &SparseMatrix,
    sigma: C64,
    apply: &dyn Fn(&[C64]) -> Vec<C64>,
    n: usize,
    m: usize,
    tol: f64,
) -> Vec<EigenPair> {
    // Deterministic, dense start vector.
    let mut v0: Vec<C64> = (0..n)
        .map(|i| {
            let t = (i as f64 + 1.0) * 0.618_033_988_749_895;
            C64::new((t * 12.9898).sin(), (t * 78.233).cos())
        })
        .collect();
    let nv = norm(&v0);
    v0.iter_mut().for_each(|x| *x /= nv);

    let mut basis: Vec<Vec<C64>> = vec![v0];
    let mut h = DenseMatrix::zeros(m + 1, m);
    let mut k = m;
    for j in 0..m {
        let mut w = apply(&basis[j]);
        for _ in 0..2 {
            for (i, q) in basis.iter().enumerate() {
                let c = dot(q, &w);
                h.set(i, j, h.get(i, j) + c);
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let beta = norm(&w);
        h.set(j + 1, j, C64::new(beta, 0.0));
        if beta < 1e-12 * h.get(j, j).norm().max(1.0) {
            k = j + 1;
            break;
        }
        w.iter_mut().for_each(|x| *x /= beta);
        basis.push(w);
    }

    let hk = DenseMatrix::from_fn(k, k, |i, j| h.get(i, j));
    let Ok((theta, y)) = eigen(&hk) else {
        return Vec::new();
    };
    let mut pairs: Vec<EigenPair> = theta
        .iter()
        .enumerate()
        .filter(|(_, t)| t.norm() > 0.0)
        .map(|(c, t)| {
            let mut x = vec![ZERO; n];
            for (i, q) in basis.iter().take(k).enumerate() {
                let yi = y.get(i, c);
                x.iter_mut().zip(q).for_each(|(a, b)| *a += yi * b);
            }
            let nx = norm(&x);
            x.iter_mut().for_each(|a| *a /= nx);
            let value = sigma + t.inv();
            let ax = a.matvec(&x);
            let residual = norm(
                &ax.iter()
                    .zip(&x)
                    .map(|(p, q)| p - value * q)
                    .collect::<Vec<_>>(),
            );
            EigenPair {
                value,
                vector: x,
                residual,
            }
        })
        .collect();
    pairs.sort_by(|p, q| {
        (p.value - sigma)
            .norm()
            .total_cmp(&(q.value - sigma).norm())
    });
    // Converged pairs first, preserving distance order among them.
    pairs.sort_by_key(|p| p.residual > tol);
    pairs
}
