//! Jacobi decompositions for complex matrices.
//!
//! Two routines, both cyclic-sweep with a fixed pair order so results are
//! reproducible run to run:
//!
//! * [`hermitian_eig`] — two-sided Jacobi for Hermitian eigenproblems. Each
//!   (p,q) rotation absorbs the phase of the off-diagonal entry and then
//!   applies the classical real rotation, so the 2x2 subproblem is exactly
//!   the textbook symmetric case.
//! * [`one_sided_svd`] — Hestenes one-sided Jacobi: orthogonalize column
//!   pairs of the work matrix until the Gram matrix is diagonal. Singular
//!   values come out as column norms with high relative accuracy, which is
//!   what makes the rank thresholds in `null_space` trustworthy.

use num_complex::Complex;

use super::{C64, ComplexDense, ONE, ZERO};

const MAX_SWEEPS: usize = 64;
const CONVERGENCE_FACTOR: f64 = 1e-14;

/// Rotation parameters zeroing the off-diagonal entry of the Hermitian 2x2
/// block [[app, apq], [conj(apq), aqq]].
struct Rotation {
    c: f64,
    s: f64,
    /// Phase factor with `apq = |apq| * conj(w)`, i.e. `w = conj(apq)/|apq|`.
    w: C64,
}

fn plane_rotation(app: f64, aqq: f64, apq: C64) -> Rotation {
    let abs = apq.norm();
    let w = apq.conj() / abs;
    let theta = (aqq - app) / (2.0 * abs);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    Rotation { c, s, w }
}

/// Eigendecomposition of a Hermitian matrix. Returns eigenvalues in
/// ascending order and the matching unitary eigenvector matrix, columns
/// phase-fixed so the largest-modulus component is real positive.
pub(crate) fn hermitian_eig(a: &ComplexDense) -> (Vec<f64>, ComplexDense) {
    let n = a.rows();
    let mut m = a.clone();
    // Symmetrize up front so rounding in the caller's Hermiticity slack
    // cannot leak imaginary parts onto the diagonal.
    for i in 0..n {
        for j in 0..n {
            let avg = (m.at(i, j) + m.at(j, i).conj()) * 0.5;
            m.set(i, j, avg);
        }
    }
    let mut v = ComplexDense::identity(n);
    let scale = m.frobenius_norm();

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m.at(p, q).norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= CONVERGENCE_FACTOR * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = m.at(p, q);
                if apq.norm() == 0.0 {
                    continue;
                }
                let rot = plane_rotation(m.at(p, p).re, m.at(q, q).re, apq);
                apply_two_sided(&mut m, p, q, &rot);
                apply_column_rotation(&mut v, p, q, &rot);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m.at(i, i)
            .re
            .partial_cmp(&m.at(j, j).re)
            .expect("finite eigenvalues")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m.at(i, i).re).collect();
    let mut vectors = ComplexDense::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src);
        canonicalize_phase(&mut col);
        for (i, &z) in col.iter().enumerate() {
            vectors.set(i, dst, z);
        }
    }
    (eigenvalues, vectors)
}

/// A <- J' A J on the (p,q) plane.
fn apply_two_sided(m: &mut ComplexDense, p: usize, q: usize, rot: &Rotation) {
    let n = m.rows();
    let (c, s, w) = (rot.c, rot.s, rot.w);
    let wc = w.conj();
    // Rows: A <- J' A.
    for k in 0..n {
        let apk = m.at(p, k);
        let aqk = m.at(q, k);
        m.set(p, k, apk * c - aqk * wc * s);
        m.set(q, k, apk * s + aqk * wc * c);
    }
    // Columns: A <- A J.
    for k in 0..n {
        let akp = m.at(k, p);
        let akq = m.at(k, q);
        m.set(k, p, akp * c - akq * w * s);
        m.set(k, q, akp * s + akq * w * c);
    }
    // The rotation zeroes these in exact arithmetic; pin them so the
    // off-diagonal shrinks monotonically, and keep the diagonal real.
    m.set(p, q, ZERO);
    m.set(q, p, ZERO);
    let dpp = m.at(p, p);
    let dqq = m.at(q, q);
    m.set(p, p, Complex::new(dpp.re, 0.0));
    m.set(q, q, Complex::new(dqq.re, 0.0));
}

/// V <- V J on columns (p,q).
fn apply_column_rotation(v: &mut ComplexDense, p: usize, q: usize, rot: &Rotation) {
    let n = v.rows();
    let (c, s, w) = (rot.c, rot.s, rot.w);
    for k in 0..n {
        let vkp = v.at(k, p);
        let vkq = v.at(k, q);
        v.set(k, p, vkp * c - vkq * w * s);
        v.set(k, q, vkp * s + vkq * w * c);
    }
}

/// One-sided Jacobi SVD. Returns singular values in ascending order along
/// with the unitary matrix of right singular vectors (column `j` pairs with
/// `sigma[j]`), columns phase-fixed like eigenvectors.
#[allow(clippy::needless_range_loop)] // paired column updates index two rows of `cols` at once
pub(crate) fn one_sided_svd(a: &ComplexDense) -> (Vec<f64>, ComplexDense) {
    let m = a.rows();
    let n = a.cols();
    // Column-major copy of the work matrix.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v = ComplexDense::identity(n);

    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                if gamma.norm() <= CONVERGENCE_FACTOR * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let rot = plane_rotation(alpha, beta, gamma);
                let (c, s, w) = (rot.c, rot.s, rot.w);
                for k in 0..m {
                    let bkp = cols[p][k];
                    let bkq = cols[q][k];
                    cols[p][k] = bkp * c - bkq * w * s;
                    cols[q][k] = bkp * s + bkq * w * c;
                }
                apply_column_rotation(&mut v, p, q, &rot);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = cols
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[i].partial_cmp(&sigma[j]).expect("finite sigma"));
    sigma = order.iter().map(|&i| sigma[i]).collect();
    let mut vectors = ComplexDense::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src);
        canonicalize_phase(&mut col);
        for (i, &z) in col.iter().enumerate() {
            vectors.set(i, dst, z);
        }
    }
    (sigma, vectors)
}

/// Multiplies the column by a unit phase so the entry of largest modulus
/// (first such index on ties) becomes real positive.
fn canonicalize_phase(col: &mut [C64]) {
    let mut best = 0usize;
    let mut best_mod = 0.0f64;
    for (i, z) in col.iter().enumerate() {
        let m = z.norm();
        if m > best_mod {
            best_mod = m;
            best = i;
        }
    }
    if best_mod == 0.0 {
        return;
    }
    let phase = col[best].conj() / best_mod;
    if phase != ONE {
        for z in col.iter_mut() {
            *z *= phase;
        }
    }
    // Kill the rounding residue in the pivot's imaginary part.
    col[best] = Complex::new(col[best].re, 0.0);
}
