//! Exact PSD decisions for Hermitian Gaussian-rational matrices, float
//! operator norms and Parrott-lemma completions.
//!
//! Every pass/fail verdict about positivity is taken on the exact side by a
//! recursive pivoted LDL* factorization; floats appear in operator norms,
//! eigenvalue oracles and the square-root-bearing completion formula.

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::scalar::{gauss_conj, gauss_real, gauss_to_c64, GaussRat, Rat, C64};

// ---------------------------------------------------------------------------
// Exact Hermitian matrices
// ---------------------------------------------------------------------------

/// Hermitian matrix over Gaussian rationals. Construction checks
/// H[j][i] = conj(H[i][j]) (diagonal entries real).
#[derive(Clone, PartialEq, Debug)]
pub struct HermitianExact {
    n: usize,
    entries: Vec<GaussRat>,
}

impl HermitianExact {
    pub fn try_new(n: usize, entries: Vec<GaussRat>) -> Result<Self, Error> {
        assert_eq!(entries.len(), n * n, "entry count");
        for i in 0..n {
            for j in i..n {
                if entries[j * n + i] != gauss_conj(&entries[i * n + j]) {
                    return Err(Error::NotHermitian { row: j, col: i });
                }
            }
        }
        Ok(HermitianExact { n, entries })
    }

    /// Build from the upper triangle (i <= j); the lower triangle is filled
    /// by conjugation.
    pub fn from_upper<F: FnMut(usize, usize) -> GaussRat>(n: usize, mut f: F) -> Self {
        let mut entries = vec![GaussRat::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                entries[j * n + i] = gauss_conj(&v);
                entries[i * n + j] = v;
            }
        }
        HermitianExact { n, entries }
    }

    pub fn from_real_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        Self::from_upper(n, |i, j| {
            GaussRat::new(Rat::from_integer(rows[i][j].into()), Rat::zero())
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussRat {
        &self.entries[i * self.n + j]
    }

    pub fn principal_submatrix(&self, indices: &[usize]) -> HermitianExact {
        let m = indices.len();
        let mut entries = Vec::with_capacity(m * m);
        for &i in indices {
            for &j in indices {
                entries.push(self.get(i, j).clone());
            }
        }
        HermitianExact { n: m, entries }
    }

    pub fn to_float(&self) -> FloatMatrix {
        FloatMatrix::from_fn(self.n, self.n, |i, j| gauss_to_c64(self.get(i, j)))
    }

    /// Exact quadratic form v* H v (a real rational for Hermitian H).
    pub fn quadratic_form(&self, v: &[GaussRat]) -> Rat {
        assert_eq!(v.len(), self.n);
        let mut acc = GaussRat::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc += gauss_conj(&v[i]) * self.get(i, j) * &v[j];
            }
        }
        debug_assert!(acc.im.is_zero());
        acc.re
    }
}

// ---------------------------------------------------------------------------
// PSD verdicts
// ---------------------------------------------------------------------------

/// Witness for a failed PSD test. Every variant comes with a vector v whose
/// exact quadratic form v* H v is strictly negative.
#[derive(Clone, Debug)]
pub enum PsdWitness {
    /// H[i][i] < 0; the vector is e_i.
    NegativeDiagonal { index: usize, value: Rat },
    /// H[row][row] = 0 but H[row][col] != 0.
    ZeroDiagonalNonzeroRow {
        row: usize,
        col: usize,
        entry: GaussRat,
    },
    /// A principal minor with negative determinant, discovered as a negative
    /// pivot in the Schur-complement recursion.
    NegativeMinor { indices: Vec<usize>, minor_det: Rat },
}

#[derive(Clone, Debug)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub witness: Option<PsdWitness>,
    /// Sparse vector (index, component) with v* H v = `quad_value` < 0 when
    /// the test fails.
    pub vector: Option<Vec<(usize, GaussRat)>>,
    pub quad_value: Option<Rat>,
}

impl PsdVerdict {
    fn pass() -> Self {
        PsdVerdict {
            is_psd: true,
            witness: None,
            vector: None,
            quad_value: None,
        }
    }

    fn fail(witness: PsdWitness, vector: Vec<(usize, GaussRat)>, quad_value: Rat) -> Self {
        PsdVerdict {
            is_psd: false,
            witness: Some(witness),
            vector: Some(vector),
            quad_value: Some(quad_value),
        }
    }
}

/// Solve A x = b exactly by Gaussian elimination with first-nonzero
/// pivoting. Callers only pass invertible principal blocks.
fn solve_exact(a: &HermitianExact, b: &[GaussRat]) -> Vec<GaussRat> {
    let n = a.dim();
    let mut m: Vec<Vec<GaussRat>> = (0..n)
        .map(|i| {
            let mut row: Vec<GaussRat> = (0..n).map(|j| a.get(i, j).clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .expect("singular system in witness construction");
        m.swap(col, pivot_row);
        let pivot = m[col][col].clone();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pivot;
            for c in col..=n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    (0..n).map(|i| &m[i][n] / &m[i][i]).collect()
}

/// Vector supported on pivots + tail with v* H v < 0, built by solving the
/// positive-definite principal system on the pivot block exactly.
fn witness_vector(
    h: &HermitianExact,
    pivots: &[usize],
    tail: &[(usize, GaussRat)],
) -> (Vec<(usize, GaussRat)>, Rat) {
    let mut vector: Vec<(usize, GaussRat)> = Vec::new();
    if pivots.is_empty() {
        vector.extend(tail.iter().cloned());
    } else {
        let block = h.principal_submatrix(pivots);
        // rhs_i = -sum_t H[p_i][t] v_t over the tail support
        let rhs: Vec<GaussRat> = pivots
            .iter()
            .map(|&p| {
                let mut acc = GaussRat::zero();
                for (t, vt) in tail {
                    acc -= h.get(p, *t) * vt;
                }
                acc
            })
            .collect();
        let x = solve_exact(&block, &rhs);
        vector.extend(pivots.iter().cloned().zip(x));
        vector.extend(tail.iter().cloned());
    }
    let mut full = vec![GaussRat::zero(); h.dim()];
    for (i, v) in &vector {
        full[*i] = v.clone();
    }
    let value = h.quadratic_form(&full);
    (vector, value)
}

/// Exact PSD decision by recursive pivoted LDL*.
///
/// Rejects on any negative diagonal entry; a zero diagonal entry forces its
/// row to be zero; otherwise the largest positive diagonal entry (lowest
/// index on ties) is pivoted out and the exact Schur complement is formed.
/// PSD iff the recursion empties without rejection. On failure the verdict
/// carries a vector with a strictly negative exact quadratic-form value.
pub fn psd_test_exact(h: &HermitianExact) -> PsdVerdict {
    let n = h.dim();
    let mut s: Vec<Vec<GaussRat>> = (0..n)
        .map(|i| (0..n).map(|j| h.get(i, j).clone()).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    // Pivot order with Schur diagonal values; det of the pivot principal
    // block is the product of the pivot values.
    let mut pivots: Vec<usize> = Vec::new();
    let mut pivot_det = Rat::one();

    loop {
        if active.is_empty() {
            return PsdVerdict::pass();
        }

        // Diagonal scan: negative diagonal rejects outright.
        for &i in &active {
            debug_assert!(s[i][i].im.is_zero());
            if s[i][i].re.is_negative() {
                let d = s[i][i].re.clone();
                let (vector, value) = witness_vector(h, &pivots, &[(i, gauss_real(Rat::one()))]);
                debug_assert_eq!(value, d);
                let witness = if pivots.is_empty() {
                    PsdWitness::NegativeDiagonal { index: i, value: d }
                } else {
                    let mut indices: Vec<usize> = pivots.clone();
                    indices.push(i);
                    indices.sort_unstable();
                    PsdWitness::NegativeMinor {
                        indices,
                        minor_det: &pivot_det * &d,
                    }
                };
                return PsdVerdict::fail(witness, vector, value);
            }
        }

        // Zero diagonal entries force zero rows.
        let mut next_active = Vec::with_capacity(active.len());
        for &i in &active {
            if !s[i][i].re.is_zero() {
                next_active.push(i);
                continue;
            }
            for &j in &active {
                if j == i || s[i][j].is_zero() {
                    continue;
                }
                // v = mu e_i + e_j with mu = -beta s_ij and
                // beta = (s_jj + 1) / (2 |s_ij|^2) gives quadratic value -1
                // on the Schur complement.
                let sij = s[i][j].clone();
                let norm_sqr = &sij.re * &sij.re + &sij.im * &sij.im;
                let beta = (&s[j][j].re + Rat::one()) / (Rat::from_integer(2.into()) * norm_sqr);
                let mu = -sij.clone() * gauss_real(beta);
                let (vector, value) =
                    witness_vector(h, &pivots, &[(i, mu), (j, gauss_real(Rat::one()))]);
                debug_assert!(value.is_negative());
                let witness = PsdWitness::ZeroDiagonalNonzeroRow {
                    row: i,
                    col: j,
                    entry: sij,
                };
                return PsdVerdict::fail(witness, vector, value);
            }
            // Zero row: contributes nothing, drop it.
        }
        active = next_active;
        if active.is_empty() {
            return PsdVerdict::pass();
        }

        // Pivot on the largest positive diagonal entry, lowest index on ties.
        let mut p = active[0];
        for &i in &active[1..] {
            if s[i][i].re > s[p][p].re {
                p = i;
            }
        }
        let pivot_val = s[p][p].re.clone();
        pivot_det *= &pivot_val;
        pivots.push(p);
        let remaining: Vec<usize> = active.iter().copied().filter(|&i| i != p).collect();
        let pivot_inv = gauss_real(Rat::one() / pivot_val);
        for &i in &remaining {
            if s[i][p].is_zero() {
                continue;
            }
            let left = &s[i][p] * &pivot_inv;
            for &j in &remaining {
                if s[p][j].is_zero() {
                    continue;
                }
                let sub = &left * &s[p][j];
                s[i][j] -= sub;
            }
        }
        active = remaining;
    }
}

/// Contraction test through the diagonally congruent exact Gram form
/// assembled by the interpolation module: the matrix is PSD iff the
/// associated Caratheodory block matrix is a contraction.
pub fn contraction_test_exact(g: &HermitianExact) -> PsdVerdict {
    psd_test_exact(g)
}

// ---------------------------------------------------------------------------
// Float matrices
// ---------------------------------------------------------------------------

/// Dense complex double matrix.
#[derive(Clone, Debug)]
pub struct FloatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl FloatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FloatMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> C64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn try_new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, Error> {
        assert_eq!(data.len(), rows * cols);
        let m = FloatMatrix { rows, cols, data };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> FloatMatrix {
        FloatMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, other: &FloatMatrix) -> FloatMatrix {
        assert_eq!(self.cols, other.rows, "matmul dims");
        let mut out = FloatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &FloatMatrix) -> FloatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FloatMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) - other.get(i, j)
        })
    }

    pub fn scale(&self, factor: f64) -> FloatMatrix {
        FloatMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * factor)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Stack [self; other] vertically.
    pub fn vstack(&self, other: &FloatMatrix) -> FloatMatrix {
        assert_eq!(self.cols, other.cols);
        FloatMatrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j)
            } else {
                other.get(i - self.rows, j)
            }
        })
    }

    /// Stack [self other] horizontally.
    pub fn hstack(&self, other: &FloatMatrix) -> FloatMatrix {
        assert_eq!(self.rows, other.rows);
        FloatMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }
}

// ---------------------------------------------------------------------------
// Hermitian eigenvalues (float oracle) and operator norms
// ---------------------------------------------------------------------------

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix
/// by cyclic complex Jacobi rotations. This is the float oracle opposite the
/// exact LDL* path and the workhorse inside the Parrott completion.
pub fn hermitian_eigen(m: &FloatMatrix) -> (Vec<f64>, FloatMatrix) {
    assert_eq!(m.rows, m.cols, "hermitian_eigen needs a square matrix");
    let n = m.rows;
    // Symmetrize to kill representation noise.
    let mut a = FloatMatrix::from_fn(n, n, |i, j| 0.5 * (m.get(i, j) + m.get(j, i).conj()));
    let mut v = FloatMatrix::identity(n);
    if n <= 1 {
        let eig = if n == 1 { vec![a.get(0, 0).re] } else { vec![] };
        return (eig, v);
    }
    let scale = a.frobenius().max(1.0);
    let tol = 1e-15 * scale;
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).norm();
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Rotation R: R[p][p]=c, R[p][q]=s, R[q][p]=-s*conj(phase),
                // R[q][q]=c*conj(phase). Apply A <- R^H A R, V <- V R.
                let phc = phase.conj();
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * c - aiq * s * phc);
                    a.set(i, q, aip * s + aiq * c * phc);
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * c - viq * s * phc);
                    v.set(i, q, vip * s + viq * c * phc);
                }
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, apj * c - aqj * s * phase);
                    a.set(q, j, apj * s + aqj * c * phase);
                }
                a.set(p, q, C64::new(0.0, 0.0));
                a.set(q, p, C64::new(0.0, 0.0));
                let app_new = a.get(p, p).re;
                let aqq_new = a.get(q, q).re;
                a.set(p, p, C64::new(app_new, 0.0));
                a.set(q, q, C64::new(aqq_new, 0.0));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.partial_cmp(&a.get(j, j).re).unwrap());
    let eig: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let vecs = FloatMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    (eig, vecs)
}

/// Smallest eigenvalue of a Hermitian matrix (float oracle).
pub fn min_eigenvalue(m: &FloatMatrix) -> f64 {
    if m.rows == 0 {
        return 0.0;
    }
    hermitian_eigen(m).0[0]
}

/// Float PSD verdict: min eigenvalue >= -tol * norm, where norm is the
/// largest eigenvalue magnitude.
#[derive(Clone, Copy, Debug)]
pub struct PsdFloat {
    pub psd: bool,
    pub min_eigenvalue: f64,
    pub norm: f64,
    pub tolerance: f64,
}

pub fn psd_float(m: &FloatMatrix, tol: f64) -> PsdFloat {
    if m.rows == 0 {
        return PsdFloat {
            psd: true,
            min_eigenvalue: 0.0,
            norm: 0.0,
            tolerance: tol,
        };
    }
    let eig = hermitian_eigen(m).0;
    let min = eig[0];
    let norm = eig.iter().map(|l| l.abs()).fold(0.0, f64::max);
    PsdFloat {
        psd: min >= -tol * norm.max(1.0),
        min_eigenvalue: min,
        norm,
        tolerance: tol,
    }
}

/// Largest singular value via iterated (squared) power method on M*M.
///
/// Repeated squaring drives the iterate into the top eigenspace far faster
/// than plain power iteration, and the final Rayleigh quotient is taken with
/// the original M*M, which keeps the relative accuracy well inside the
/// 1e-12 contract.
pub fn operator_norm(m: &FloatMatrix) -> Result<f64, Error> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m.rows == 0 || m.cols == 0 {
        return Ok(0.0);
    }
    let a = m.adjoint().mul(m); // PSD Hermitian, cols x cols
    let n = a.rows;
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut s = a.scale(1.0 / scale);
    for _ in 0..64 {
        let next = s.mul(&s);
        let f = next.max_abs();
        if f == 0.0 || !next.is_finite() {
            break;
        }
        s = next.scale(1.0 / f);
    }
    // The column of the squared iterate with the largest norm sits in the
    // top eigenspace; finish with Rayleigh quotients on the original A.
    let mut best_col = 0;
    let mut best = -1.0f64;
    for j in 0..n {
        let norm: f64 = (0..n).map(|i| s.get(i, j).norm_sqr()).sum();
        if norm > best {
            best = norm;
            best_col = j;
        }
    }
    let mut v: Vec<C64> = (0..n).map(|i| s.get(i, best_col)).collect();
    let mut lambda = 0.0f64;
    for _ in 0..8 {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        for z in v.iter_mut() {
            *z /= norm;
        }
        let av: Vec<C64> = (0..n)
            .map(|i| (0..n).map(|j| a.get(i, j) * v[j]).sum())
            .collect();
        lambda = v.iter().zip(&av).map(|(x, y)| (x.conj() * y).re).sum();
        v = av;
    }
    Ok(lambda.max(0.0).sqrt())
}

// ---------------------------------------------------------------------------
// Parrott completion
// ---------------------------------------------------------------------------

/// Pseudo-inverse of (I - H)^{1/2} for Hermitian PSD H with eigenvalues
/// clamped to [0, 1]; singular values below the cutoff are dropped.
fn pinv_sqrt_complement(h: &FloatMatrix, cutoff: f64) -> FloatMatrix {
    let (eig, vecs) = hermitian_eigen(h);
    let n = h.rows;
    let inv: Vec<f64> = eig
        .iter()
        .map(|&l| {
            let s = (1.0 - l.clamp(0.0, 1.0)).max(0.0).sqrt();
            if s > cutoff {
                1.0 / s
            } else {
                0.0
            }
        })
        .collect();
    FloatMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| vecs.get(i, k) * inv[k] * vecs.get(j, k).conj())
            .sum()
    })
}

/// Default slack accepted on the Parrott norm constraints.
pub const PARROTT_SLACK: f64 = 1e-9;
/// Singular-value cutoff used in the pseudo-inverse square roots.
pub const PARROTT_SV_CUTOFF: f64 = 1e-12;

/// Central Parrott completion: given blocks with contractive column [A; C]
/// and row [C D] (up to `slack`), returns B = -X C* Y so that
/// [[A, B], [C, D]] has norm at most max(norm [A; C], norm [C D]) + 1e-8.
///
/// The free parameter of the general solution is fixed to zero, giving the
/// reproducible central completion.
pub fn parrott_complete(
    a: &FloatMatrix,
    c: &FloatMatrix,
    d: &FloatMatrix,
    slack: f64,
) -> Result<FloatMatrix, Error> {
    if a.cols() != c.cols() {
        return Err(Error::DimensionMismatch(format!(
            "A has {} columns, C has {}",
            a.cols(),
            c.cols()
        )));
    }
    if c.rows() != d.rows() {
        return Err(Error::DimensionMismatch(format!(
            "C has {} rows, D has {}",
            c.rows(),
            d.rows()
        )));
    }
    if !a.is_finite() || !c.is_finite() || !d.is_finite() {
        return Err(Error::NonFinite);
    }
    let col_norm = operator_norm(&a.vstack(c))?;
    let row_norm = operator_norm(&c.hstack(d))?;
    if col_norm > 1.0 + slack {
        return Err(Error::ConstraintNorm {
            which: "[A; C]",
            norm: col_norm,
            slack,
        });
    }
    if row_norm > 1.0 + slack {
        return Err(Error::ConstraintNorm {
            which: "[C D]",
            norm: row_norm,
            slack,
        });
    }
    let tau = col_norm.max(row_norm);
    if tau < 1e-300 {
        return Ok(FloatMatrix::zeros(a.rows(), d.cols()));
    }
    let inv_tau = 1.0 / tau;
    let at = a.scale(inv_tau);
    let ct = c.scale(inv_tau);
    let dt = d.scale(inv_tau);
    // X solves A = X (I - C*C)^{1/2}; Y solves D = (I - CC*)^{1/2} Y.
    let x = at.mul(&pinv_sqrt_complement(
        &ct.adjoint().mul(&ct),
        PARROTT_SV_CUTOFF,
    ));
    let y = pinv_sqrt_complement(&ct.mul(&ct.adjoint()), PARROTT_SV_CUTOFF).mul(&dt);
    let b = x.mul(&ct.adjoint()).mul(&y).scale(-tau);
    Ok(b)
}

/// Norm of the completed block matrix [[A, B], [C, D]].
pub fn completed_norm(
    a: &FloatMatrix,
    b: &FloatMatrix,
    c: &FloatMatrix,
    d: &FloatMatrix,
) -> Result<f64, Error> {
    operator_norm(&a.hstack(b).vstack(&c.hstack(d)))
}
