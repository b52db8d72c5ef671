//! Dense complex linear algebra with explicit tolerance contracts.
//!
//! Everything in this crate rides on [`ComplexDense`], a row-major dense
//! matrix of `Complex<f64>`. Decompositions are Jacobi-based: two-sided
//! Jacobi for Hermitian eigenproblems and one-sided (Hestenes) Jacobi for
//! singular values. Both are deterministic — fixed sweep order, fixed
//! tie-breaking, no randomized pivoting — so repeated runs produce
//! bit-identical output, which the CLI layer relies on.

mod jacobi;

use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

pub const ONE: C64 = Complex::new(1.0, 0.0);
pub const ZERO: C64 = Complex::new(0.0, 0.0);
pub const I: C64 = Complex::new(0.0, 1.0);

/// Absolute/relative tolerance pair used for rank decisions.
///
/// The rank threshold for a matrix with largest singular value `s_max` and
/// larger dimension `d` is `max(abs, rel * s_max * d)`, the usual
/// scale-aware rank-revealing SVD cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-10,
            rel: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Result<Self> {
        if !abs.is_finite() || !rel.is_finite() || abs < 0.0 || rel < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be finite and nonnegative, got abs={abs}, rel={rel}"
            )));
        }
        Ok(Tolerance { abs, rel })
    }

    /// Rank cutoff: singular values at or below this count as zero.
    pub fn rank_threshold(&self, sigma_max: f64, max_dim: usize) -> f64 {
        self.abs.max(self.rel * sigma_max * max_dim as f64)
    }

    /// Hermiticity cutoff `abs * (1 + s_max)`; with the default `abs` this
    /// is `1e-10 * (1 + s_max)`.
    pub fn hermiticity_threshold(&self, sigma_max: f64) -> f64 {
        self.abs * (1.0 + sigma_max)
    }
}

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexDense {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexDense {
    /// Builds a matrix from row-major entries, rejecting non-finite values
    /// and shape mismatches.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimMismatch(format!(
                "entry count {} does not match {rows}x{cols}",
                entries.len()
            )));
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix entries must all be finite".into(),
            ));
        }
        Ok(ComplexDense {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexDense {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = ONE;
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.entries[i * n + i] = C64::new(v, 0.0);
        }
        m
    }

    pub fn diag_complex(values: &[C64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.entries[i * n + i] = v;
        }
        m
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimMismatch("ragged rows".into()));
            }
            entries.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        ComplexDense::new(r, c, entries)
    }

    /// |i><j| on an `n`-dimensional space.
    pub fn matrix_unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.entries[i * n + j] = ONE;
        m
    }

    pub fn pauli_z() -> Self {
        Self::diag_real(&[1.0, -1.0])
    }

    pub fn pauli_x() -> Self {
        let mut m = Self::zeros(2, 2);
        m.entries[1] = ONE;
        m.entries[2] = ONE;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    /// Matrix product; panics on incompatible dimensions (use the checked
    /// operations in `sync`/`dynamics` for caller-facing contracts).
    pub fn mul(&self, other: &ComplexDense) -> ComplexDense {
        assert_eq!(
            self.cols, other.rows,
            "matrix product dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = ComplexDense::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.at(i, k);
                if aik == ZERO {
                    continue;
                }
                let dst = &mut out.entries[i * other.cols..(i + 1) * other.cols];
                let src = &other.entries[k * other.cols..(k + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += aik * s;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &ComplexDense) -> ComplexDense {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        ComplexDense {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &ComplexDense) -> ComplexDense {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        ComplexDense {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, factor: C64) -> ComplexDense {
        ComplexDense {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexDense {
        let mut out = ComplexDense::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.at(i, j).conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.at(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius inner product <A, B> = tr(A' B).
    pub fn frobenius_inner(&self, other: &ComplexDense) -> C64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(
            self.cols,
            v.len(),
            "matrix-vector dimension mismatch: {}x{} * {}",
            self.rows,
            self.cols,
            v.len()
        );
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum::<C64>()
            })
            .collect()
    }

    /// Spectral-norm distance from Hermitian symmetry, |A - A'|.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        operator_norm(&self.sub(&self.adjoint()))
    }

    /// Direct sum: places the blocks along the diagonal.
    pub fn block_diag(blocks: &[ComplexDense]) -> Result<ComplexDense> {
        if blocks.is_empty() {
            return Err(Error::InvalidArgument("direct sum of zero blocks".into()));
        }
        let rows: usize = blocks.iter().map(ComplexDense::rows).sum();
        let cols: usize = blocks.iter().map(ComplexDense::cols).sum();
        let mut out = ComplexDense::zeros(rows, cols);
        let mut r0 = 0;
        let mut c0 = 0;
        for b in blocks {
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    out.set(r0 + i, c0 + j, b.at(i, j));
                }
            }
            r0 += b.rows();
            c0 += b.cols();
        }
        Ok(out)
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[ComplexDense]) -> Result<ComplexDense> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::InvalidArgument("vstack of zero blocks".into()))?;
        let cols = first.cols;
        let mut entries = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::DimMismatch(format!(
                    "vstack column mismatch: {} vs {}",
                    b.cols, cols
                )));
            }
            rows += b.rows;
            entries.extend_from_slice(&b.entries);
        }
        ComplexDense::new(rows, cols, entries)
    }
}

/// Unit-norm state vector.
///
/// Construction normalizes, so the Euclidean norm is 1 to within 1e-12
/// everywhere downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Normalizes `amplitudes`; rejects the zero vector and non-finite input.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("empty state vector".into()));
        }
        if !amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::InvalidArgument(
                "state amplitudes must be finite".into(),
            ));
        }
        let norm = vec_norm(&amplitudes);
        if norm < 1e-300 {
            return Err(Error::InvalidArgument(
                "cannot normalize the zero vector".into(),
            ));
        }
        let inv = 1.0 / norm;
        let amplitudes = amplitudes.into_iter().map(|z| z * inv).collect();
        Ok(StateVector { amplitudes })
    }

    /// Computational basis state |index> on a `dim`-dimensional space.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        StateVector { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Rank-1 projector |psi><psi|.
    pub fn projector(&self) -> ComplexDense {
        let n = self.dim();
        let mut p = ComplexDense::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                p.set(i, j, self.amplitudes[i] * self.amplitudes[j].conj());
            }
        }
        p
    }
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Kronecker product; block (i,j) of the result equals `a[i,j] * b`.
pub fn kron(a: &ComplexDense, b: &ComplexDense) -> ComplexDense {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut out = ComplexDense::zeros(rows, cols);
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let f = a.at(ia, ja);
            if f == ZERO {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out.set(ia * b.rows() + ib, ja * b.cols() + jb, f * b.at(ib, jb));
                }
            }
        }
    }
    out
}

/// Kronecker product of state vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Spectral norm (largest singular value).
pub fn operator_norm(a: &ComplexDense) -> f64 {
    let (sigma, _) = jacobi::one_sided_svd(a);
    sigma.last().copied().unwrap_or(0.0)
}

/// Orthonormal basis of the numerical right null space.
#[derive(Debug, Clone)]
pub struct NullSpace {
    /// Basis vectors ordered by ascending singular value, each phase-fixed
    /// so its largest-modulus component is real positive.
    pub basis: Vec<StateVector>,
    /// The rank cutoff actually used: `max(abs, rel * sigma_max * max_dim)`.
    pub threshold: f64,
    /// Number of singular values above the cutoff.
    pub rank: usize,
}

/// Computes an orthonormal basis of `{v : |a v| <= threshold}` by one-sided
/// Jacobi SVD. Full-rank input yields an empty basis.
pub fn null_space(a: &ComplexDense, tol: &Tolerance) -> NullSpace {
    let (sigma, v) = jacobi::one_sided_svd(a);
    let sigma_max = sigma.last().copied().unwrap_or(0.0);
    let threshold = tol.rank_threshold(sigma_max, a.rows().max(a.cols()));
    let null_count = sigma.iter().take_while(|&&s| s <= threshold).count();
    let basis = (0..null_count)
        .map(|j| {
            let col = v.column(j);
            StateVector::new(col).expect("SVD columns are unit vectors")
        })
        .collect();
    NullSpace {
        basis,
        threshold,
        rank: a.cols() - null_count,
    }
}

/// Eigendecomposition of a Hermitian matrix: `a = V diag(values) V'` with
/// eigenvalues ascending and `V` unitary.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector for `eigenvalues[j]`.
    pub eigenvectors: ComplexDense,
}

impl HermEig {
    /// Rebuilds `V f(diag) V'` for a scalar-to-complex spectral function.
    pub fn apply_spectral<F: Fn(f64) -> C64>(&self, f: F) -> ComplexDense {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexDense::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let fk = f(lambda);
            if fk == ZERO {
                continue;
            }
            for i in 0..n {
                let vik = v.at(i, k) * fk;
                for j in 0..n {
                    let cur = out.at(i, j);
                    out.set(i, j, cur + vik * v.at(j, k).conj());
                }
            }
        }
        out
    }
}

/// Hermitian eigendecomposition by cyclic two-sided Jacobi.
///
/// Rejects input whose deviation from self-adjointness exceeds
/// `tol.abs * (1 + sigma_max)`.
pub fn herm_eig(a: &ComplexDense, tol: &Tolerance) -> Result<HermEig> {
    check_hermitian(a, tol)?;
    let (eigenvalues, eigenvectors) = jacobi::hermitian_eig(a);
    Ok(HermEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Verifies `|a - a'| <= tol.abs * (1 + sigma_max)`.
pub fn check_hermitian(a: &ComplexDense, tol: &Tolerance) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimMismatch(format!(
            "Hermitian check requires a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let sigma_max = operator_norm(a);
    let threshold = tol.hermiticity_threshold(sigma_max);
    let deviation = a.hermiticity_deviation();
    if deviation > threshold {
        return Err(Error::NotHermitian {
            deviation,
            threshold,
        });
    }
    Ok(())
}

/// Unitary propagator `exp(-i h t) = V diag(exp(-i lambda t)) V'` for a
/// Hermitian generator.
pub fn expm_unitary(h: &ComplexDense, t: f64) -> Result<ComplexDense> {
    let eig = herm_eig(h, &Tolerance::default())?;
    Ok(eig.apply_spectral(|lambda| (-I * lambda * t).exp()))
}
