//! Finite Pick and Caratheodory interpolation machinery: block Pick
//! matrices, one-point extension feasibility, zero-based Schur-complement
//! kernels, exact Caratheodory Gram forms, Parrott-driven coefficient
//! extension, pointwise certificate checks and finite-kernel diagnostics.
//!
//! Two parallel paths run everywhere: the exact Gaussian-rational Gram
//! forms carry the authoritative verdicts, while the float path (which owns
//! the square roots) drives extensions and cross-checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::catalog::KernelEval;
use crate::error::Error;
use crate::linalg::{
    min_eigenvalue, parrott_complete, psd_float, psd_test_exact, FloatMatrix, HermitianExact,
    PsdFloat, PsdVerdict,
};
use crate::scalar::{
    gauss_conj, gauss_real, gauss_to_c64, rat_to_f64, round_to_grid, GaussRat, C64,
};
use crate::series::{indices_below, CoInvariantSet, DiagonalSeries, MultiIndex};

/// Default relative tolerance for float PSD verdicts.
pub const PSD_FLOAT_TOL: f64 = 1e-9;
/// Relative threshold under which kernel sections count as dependent.
pub const INDEPENDENCE_THRESHOLD: f64 = 1e-10;
/// Grid denominator for rounding completed coefficients to rationals.
pub const ROUNDING_DENOMINATOR: i64 = 1_000_000_000_000;

// ---------------------------------------------------------------------------
// Pick problems
// ---------------------------------------------------------------------------

/// Finite matrix-valued Pick interpolation data: points, target matrices
/// and the two kernels as pointwise evaluators.
pub struct PickProblem {
    pub points: Vec<Vec<C64>>,
    pub targets: Vec<FloatMatrix>,
    pub kernel_k: Arc<dyn KernelEval>,
    pub kernel_l: Arc<dyn KernelEval>,
}

impl PickProblem {
    pub fn try_new(
        points: Vec<Vec<C64>>,
        targets: Vec<FloatMatrix>,
        kernel_k: Arc<dyn KernelEval>,
        kernel_l: Arc<dyn KernelEval>,
    ) -> Result<Self, Error> {
        if points.len() != targets.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} points but {} targets",
                points.len(),
                targets.len()
            )));
        }
        let vars = kernel_k.vars();
        if kernel_l.vars() != vars || points.iter().any(|p| p.len() != vars) {
            return Err(Error::DimensionMismatch(
                "point arity vs kernel arity".into(),
            ));
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points_coincide(&points[i], &points[j]) {
                    return Err(Error::CoincidentPoint);
                }
            }
        }
        if let Some(first) = targets.first() {
            let n = first.rows();
            if targets.iter().any(|t| t.rows() != n || t.cols() != n) {
                return Err(Error::DimensionMismatch(
                    "targets must share one square size".into(),
                ));
            }
        }
        Ok(PickProblem {
            points,
            targets,
            kernel_k,
            kernel_l,
        })
    }

    pub fn block_size(&self) -> usize {
        self.targets.first().map(|t| t.rows()).unwrap_or(1)
    }
}

fn points_coincide(a: &[C64], b: &[C64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-14)
}

/// The n N x n N block Hermitian matrix with (i, j) block
/// l(z_i, z_j) I - k(z_i, z_j) W_i W_j*.
pub fn pick_matrix(problem: &PickProblem) -> Result<FloatMatrix, Error> {
    pick_matrix_with(
        problem,
        problem.kernel_k.as_ref(),
        problem.kernel_l.as_ref(),
    )
}

fn pick_matrix_with(
    problem: &PickProblem,
    k: &dyn KernelEval,
    l: &dyn KernelEval,
) -> Result<FloatMatrix, Error> {
    let n = problem.points.len();
    let bs = problem.block_size();
    let mut out = FloatMatrix::zeros(n * bs, n * bs);
    for i in 0..n {
        for j in 0..n {
            let kv = k.eval(&problem.points[i], &problem.points[j]);
            let lv = l.eval(&problem.points[i], &problem.points[j]);
            if !kv.re.is_finite() || !kv.im.is_finite() || !lv.re.is_finite() || !lv.im.is_finite()
            {
                return Err(Error::NonFinite);
            }
            let wiwj = problem.targets[i].mul(&problem.targets[j].adjoint());
            for a in 0..bs {
                for b in 0..bs {
                    let idv = if a == b {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    };
                    out.set(i * bs + a, j * bs + b, lv * idv - kv * wiwj.get(a, b));
                }
            }
        }
    }
    Ok(out)
}

/// Pointwise evaluator of the zero-based kernel
/// k^z(w, v) = k(w, v) - k(w, z) k(z, v) / k(z, z).
pub struct SchurPointKernel {
    base: Arc<dyn KernelEval>,
    z: Vec<C64>,
    diag: C64,
}

impl KernelEval for SchurPointKernel {
    fn vars(&self) -> usize {
        self.base.vars()
    }

    fn eval(&self, w: &[C64], v: &[C64]) -> C64 {
        self.base.eval(w, v) - self.base.eval(w, &self.z) * self.base.eval(&self.z, v) / self.diag
    }
}

pub fn kernel_schur_point(
    base: Arc<dyn KernelEval>,
    z: Vec<C64>,
) -> Result<SchurPointKernel, Error> {
    let diag = base.eval(&z, &z);
    if !diag.re.is_finite() || !diag.im.is_finite() {
        return Err(Error::NonFinite);
    }
    if diag.norm() == 0.0 {
        return Err(Error::VanishingDiagonal);
    }
    Ok(SchurPointKernel { base, z, diag })
}

/// Exact Schur complement of a finite kernel matrix at one point. A zero
/// diagonal entry leaves the kernel unchanged (its row must already vanish
/// for a PSD matrix; a nonzero row is rejected).
pub fn exact_schur_point(h: &HermitianExact, at: usize) -> Result<HermitianExact, Error> {
    let n = h.dim();
    let d = h.get(at, at).clone();
    if d.is_zero() {
        for j in 0..n {
            if !h.get(at, j).is_zero() {
                return Err(Error::NotHermitian { row: at, col: j });
            }
        }
        return Ok(h.clone());
    }
    Ok(HermitianExact::from_upper(n, |i, j| {
        h.get(i, j).clone() - h.get(i, at) * h.get(at, j) / &d
    }))
}

/// Feasibility of extending Pick data by one more point: PSD verdict of the
/// Pick matrix built from the one-point Schur-complement kernels.
pub fn one_point_extension_feasible(
    problem: &PickProblem,
    z_new: &[C64],
    tol: f64,
) -> Result<PsdFloat, Error> {
    for p in &problem.points {
        if points_coincide(p, z_new) {
            return Err(Error::CoincidentPoint);
        }
    }
    if problem.points.is_empty() {
        // Extend from nothing: W = 0 always works.
        return Ok(PsdFloat {
            psd: true,
            min_eigenvalue: 0.0,
            norm: 0.0,
            tolerance: tol,
        });
    }
    // Sections of l at the n+1 points must be numerically independent.
    let mut all_points = problem.points.clone();
    all_points.push(z_new.to_vec());
    let m = all_points.len();
    let gram = FloatMatrix::from_fn(m, m, |i, j| {
        problem.kernel_l.eval(&all_points[i], &all_points[j])
    });
    if !gram.is_finite() {
        return Err(Error::NonFinite);
    }
    let min = min_eigenvalue(&gram);
    let scale = gram.max_abs().max(1.0);
    if min <= INDEPENDENCE_THRESHOLD * scale {
        return Err(Error::DependentKernelFunctions {
            min_eigenvalue: min,
        });
    }
    let k_z = kernel_schur_point(problem.kernel_k.clone(), z_new.to_vec())?;
    let l_z = kernel_schur_point(problem.kernel_l.clone(), z_new.to_vec())?;
    let matrix = pick_matrix_with(problem, &k_z, &l_z)?;
    Ok(psd_float(&matrix, tol))
}

// ---------------------------------------------------------------------------
// Caratheodory data
// ---------------------------------------------------------------------------

/// Square matrix of Gaussian rationals (row-major), the block coefficients
/// of Caratheodory data.
pub type GaussMatrix = Vec<GaussRat>;

/// Coefficient-interpolation data: a co-invariant index set F together with
/// J x J matrix coefficients c_a for a in F (missing entries are zero).
#[derive(Clone)]
pub struct CaratheodoryData {
    f: CoInvariantSet,
    block: usize,
    coeffs: BTreeMap<MultiIndex, GaussMatrix>,
}

impl CaratheodoryData {
    pub fn try_new(
        f: CoInvariantSet,
        block: usize,
        coeffs: BTreeMap<MultiIndex, GaussMatrix>,
    ) -> Result<Self, Error> {
        if block == 0 {
            return Err(Error::InvalidParameter(
                "block size must be positive".into(),
            ));
        }
        for (a, c) in &coeffs {
            if !f.contains(a) {
                return Err(Error::InvalidParameter(format!(
                    "coefficient index {a} is outside F"
                )));
            }
            if c.len() != block * block {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient at {a} has {} entries, want {}",
                    c.len(),
                    block * block
                )));
            }
        }
        Ok(CaratheodoryData { f, block, coeffs })
    }

    /// Scalar (J = 1) data from plain rational coefficients.
    pub fn scalar(f: CoInvariantSet, values: &[(MultiIndex, GaussRat)]) -> Result<Self, Error> {
        let coeffs = values
            .iter()
            .map(|(a, v)| (a.clone(), vec![v.clone()]))
            .collect();
        CaratheodoryData::try_new(f, 1, coeffs)
    }

    pub fn index_set(&self) -> &CoInvariantSet {
        &self.f
    }

    pub fn block_size(&self) -> usize {
        self.block
    }

    pub fn coefficient(&self, a: &MultiIndex) -> GaussMatrix {
        self.coeffs
            .get(a)
            .cloned()
            .unwrap_or_else(|| vec![GaussRat::zero(); self.block * self.block])
    }

    pub fn coefficients(&self) -> &BTreeMap<MultiIndex, GaussMatrix> {
        &self.coeffs
    }

    /// Adjoin the coefficient at a new index d; F united with d must stay
    /// co-invariant.
    pub fn with_coefficient(&self, d: MultiIndex, c: GaussMatrix) -> Result<Self, Error> {
        if c.len() != self.block * self.block {
            return Err(Error::DimensionMismatch(
                "new coefficient block size".into(),
            ));
        }
        let f = self.f.with_index(d.clone())?;
        let mut coeffs = self.coeffs.clone();
        coeffs.insert(d, c);
        CaratheodoryData::try_new(f, self.block, coeffs)
    }
}

fn component_min(a: &MultiIndex, b: &MultiIndex) -> MultiIndex {
    MultiIndex::new(
        a.exponents()
            .iter()
            .zip(b.exponents())
            .map(|(x, y)| *x.min(y))
            .collect(),
    )
}

fn mat_adjoint_mul(block: usize, a: &GaussMatrix, b: &GaussMatrix) -> GaussMatrix {
    // a^H b for row-major J x J blocks
    let mut out = vec![GaussRat::zero(); block * block];
    for r in 0..block {
        for i in 0..block {
            let left = gauss_conj(&a[r * block + i]);
            if left.is_zero() {
                continue;
            }
            for j in 0..block {
                let term = &left * &b[r * block + j];
                out[i * block + j] += term;
            }
        }
    }
    out
}

/// Exact congruent Gram form over an explicit index list:
/// entry block (a, b) = l_a delta_{a,b} I_J - sum_u k_u c*_{a-u} c_{b-u},
/// where u runs over indices below min(a, b) componentwise, excluding 0
/// when `include_zero` is false. PSD of this matrix is equivalent to the
/// associated block matrix being a contraction.
fn gram_over(
    indices: &[MultiIndex],
    include_zero: bool,
    data: &CaratheodoryData,
    k: &DiagonalSeries,
    l: &DiagonalSeries,
) -> Result<HermitianExact, Error> {
    let block = data.block_size();
    let m = indices.len();
    let max_deg = indices.iter().map(|a| a.degree()).max().unwrap_or(0);
    if k.truncation() < max_deg || l.truncation() < max_deg {
        return Err(Error::NotNormalized(format!(
            "kernel truncation below the index-set degree {max_deg}"
        )));
    }
    let blocks: Vec<Vec<GaussMatrix>> = (0..m)
        .map(|p| {
            (0..m)
                .map(|q| {
                    let a = &indices[p];
                    let b = &indices[q];
                    let mut acc = vec![GaussRat::zero(); block * block];
                    if a == b {
                        let la = l.coeff(a);
                        for i in 0..block {
                            acc[i * block + i] = gauss_real(la.clone());
                        }
                    }
                    let bound = component_min(a, b);
                    for u in indices_below(&bound) {
                        if !include_zero && u.is_zero() {
                            continue;
                        }
                        let ku = k.coeff(&u);
                        if ku.is_zero() {
                            continue;
                        }
                        let ca = data.coefficient(&a.checked_sub(&u).unwrap());
                        let cb = data.coefficient(&b.checked_sub(&u).unwrap());
                        let prod = mat_adjoint_mul(block, &ca, &cb);
                        for (dst, src) in acc.iter_mut().zip(prod) {
                            *dst -= gauss_real(ku.clone()) * src;
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let dim = m * block;
    HermitianExact::try_new(
        dim,
        (0..dim * dim)
            .map(|pos| {
                let (row, col) = (pos / dim, pos % dim);
                let (p, i) = (row / block, row % block);
                let (q, j) = (col / block, col % block);
                blocks[p][q][i * block + j].clone()
            })
            .collect(),
    )
}

/// The |F| J square exact Hermitian Gram form of the Caratheodory data;
/// PSD iff the block matrix of the data is a contraction.
pub fn caratheodory_gram(
    data: &CaratheodoryData,
    k: &DiagonalSeries,
    l: &DiagonalSeries,
) -> Result<HermitianExact, Error> {
    let indices: Vec<MultiIndex> = data.index_set().iter().cloned().collect();
    gram_over(&indices, true, data, k, l)
}

/// One-step index set F+ = (F union {d}) minus {0}, validated against the
/// extension preconditions: d outside F and every index of smaller total
/// degree inside F.
fn one_step_indices(f: &CoInvariantSet, d: &MultiIndex) -> Result<Vec<MultiIndex>, Error> {
    if f.contains(d) {
        return Err(Error::InvalidParameter(format!(
            "target index {d} is already in F"
        )));
    }
    for a in crate::series::indices_up_to(d.vars(), d.degree().saturating_sub(1)) {
        if !f.contains(&a) {
            return Err(Error::InvalidParameter(format!(
                "index {a} of smaller degree is missing from F"
            )));
        }
    }
    let mut indices: Vec<MultiIndex> = f.iter().filter(|a| !a.is_zero()).cloned().collect();
    indices.push(d.clone());
    indices.sort();
    Ok(indices)
}

/// Exact Gram form of the one-step matrix (drop index 0, adjoin d); its PSD
/// is the feasibility condition for the Parrott extension step.
pub fn one_step_gram(
    data: &CaratheodoryData,
    k: &DiagonalSeries,
    l: &DiagonalSeries,
    d: &MultiIndex,
) -> Result<HermitianExact, Error> {
    let indices = one_step_indices(data.index_set(), d)?;
    gram_over(&indices, false, data, k, l)
}

/// Float block matrix of the data over an index list:
/// C[a, b] = c_{b-a} sqrt(k_a / l_b) for a <= b, zero otherwise.
fn block_matrix_float(
    row_indices: &[MultiIndex],
    col_indices: &[MultiIndex],
    data: &CaratheodoryData,
    k: &DiagonalSeries,
    l: &DiagonalSeries,
) -> FloatMatrix {
    let block = data.block_size();
    let mut out = FloatMatrix::zeros(row_indices.len() * block, col_indices.len() * block);
    for (p, a) in row_indices.iter().enumerate() {
        for (q, b) in col_indices.iter().enumerate() {
            if !a.component_le(b) {
                continue;
            }
            let factor = (rat_to_f64(&k.coeff(a)) / rat_to_f64(&l.coeff(b))).sqrt();
            let c = data.coefficient(&b.checked_sub(a).unwrap());
            for i in 0..block {
                for j in 0..block {
                    out.set(
                        p * block + i,
                        q * block + j,
                        gauss_to_c64(&c[i * block + j]) * factor,
                    );
                }
            }
        }
    }
    out
}

/// Result of one Parrott-driven coefficient extension.
pub struct CaratheodoryExtension {
    /// Data extended by the rounded rational coefficient at d.
    pub data: CaratheodoryData,
    /// The float coefficient before rounding.
    pub c_d_float: FloatMatrix,
    /// Min eigenvalue of the extended exact Gram evaluated in floats; the
    /// rounding-induced slack (>= -1e-9 * norm for a healthy extension).
    pub slack: f64,
    /// Whether the extended exact Gram is PSD outright.
    pub exact_psd: bool,
}

/// Extend Caratheodory data to a new index d by the central Parrott
/// completion. Square roots live on the float side; the chosen c_d is
/// rounded to rationals on a 1e-12 grid so the exact pipeline stays closed,
/// and the rounding-induced PSD slack is reported.
pub fn caratheodory_extend(
    data: &CaratheodoryData,
    k: &DiagonalSeries,
    l: &DiagonalSeries,
    d: &MultiIndex,
    slack: f64,
) -> Result<CaratheodoryExtension, Error> {
    // Feasibility of the data itself, exactly.
    let base = caratheodory_gram(data, k, l)?;
    let base_verdict = psd_test_exact(&base);
    if !base_verdict.is_psd {
        return Err(Error::InfeasibleExtension(describe_witness(&base_verdict)));
    }
    // Feasibility of the shifted one-step matrix, exactly.
    let plus = one_step_gram(data, k, l, d)?;
    let plus_verdict = psd_test_exact(&plus);
    if !plus_verdict.is_psd {
        return Err(Error::InfeasibleExtension(describe_witness(&plus_verdict)));
    }

    let block = data.block_size();
    let f_indices: Vec<MultiIndex> = data.index_set().iter().cloned().collect();
    let zero = vec![MultiIndex::zero(d.vars())];
    let fplus = one_step_indices(data.index_set(), d)?;
    // Parrott blocks: A = row {0} x F, C = rows F+ x F, D = rows F+ x {d}.
    let a_block = block_matrix_float(&zero, &f_indices, data, k, l);
    let c_block = block_matrix_float(&fplus, &f_indices, data, k, l);
    let d_col = block_matrix_float(&fplus, std::slice::from_ref(d), data, k, l);
    let x = parrott_complete(&a_block, &c_block, &d_col, slack)?;
    let ld = rat_to_f64(&l.coeff(d)).sqrt();
    let c_d_float = x.scale(ld);

    let c_d_rat: GaussMatrix = (0..block * block)
        .map(|pos| {
            let v = c_d_float.get(pos / block, pos % block);
            GaussRat::new(
                round_to_grid(v.re, ROUNDING_DENOMINATOR),
                round_to_grid(v.im, ROUNDING_DENOMINATOR),
            )
        })
        .collect();
    let extended = data.with_coefficient(d.clone(), c_d_rat)?;
    let extended_gram = caratheodory_gram(&extended, k, l)?;
    let float_check = psd_float(&extended_gram.to_float(), PSD_FLOAT_TOL);
    let exact_psd = psd_test_exact(&extended_gram).is_psd;
    Ok(CaratheodoryExtension {
        data: extended,
        c_d_float,
        slack: float_check.min_eigenvalue,
        exact_psd,
    })
}

fn describe_witness(verdict: &PsdVerdict) -> String {
    match (&verdict.witness, &verdict.quad_value) {
        (Some(w), Some(v)) => format!("{w:?} with quadratic value {v}"),
        _ => "not PSD".into(),
    }
}

// ---------------------------------------------------------------------------
// Pointwise certificate checks and finite-kernel diagnostics
// ---------------------------------------------------------------------------

/// Check the pointwise certificate conditions at a base point z over a
/// finite grid: PSD of [l^z - p l] and of [p k - k^z] Gram matrices.
pub fn shimorin_pointwise_check(
    k: &dyn KernelEval,
    l: &dyn KernelEval,
    p: &dyn KernelEval,
    z: &[C64],
    grid: &[Vec<C64>],
    tol: f64,
) -> Result<(PsdFloat, PsdFloat), Error> {
    let n = grid.len();
    let kd = k.eval(z, z);
    let ld = l.eval(z, z);
    if kd.norm() == 0.0 || ld.norm() == 0.0 {
        return Err(Error::VanishingDiagonal);
    }
    let first = FloatMatrix::from_fn(n, n, |i, j| {
        let lv = l.eval(&grid[i], &grid[j]);
        let l_z = lv - l.eval(&grid[i], z) * l.eval(z, &grid[j]) / ld;
        l_z - p.eval(&grid[i], &grid[j]) * lv
    });
    let second = FloatMatrix::from_fn(n, n, |i, j| {
        let kv = k.eval(&grid[i], &grid[j]);
        let k_z = kv - k.eval(&grid[i], z) * k.eval(z, &grid[j]) / kd;
        p.eval(&grid[i], &grid[j]) * kv - k_z
    });
    if !first.is_finite() || !second.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok((psd_float(&first, tol), psd_float(&second, tol)))
}

/// A kernel on a finite set, by its Gram matrix: PSD with strictly positive
/// diagonal.
#[derive(Clone, Debug)]
pub struct FiniteKernel {
    gram: HermitianExact,
}

impl FiniteKernel {
    pub fn try_new(gram: HermitianExact) -> Result<Self, Error> {
        let verdict = psd_test_exact(&gram);
        if !verdict.is_psd {
            return Err(Error::InvalidParameter(format!(
                "finite kernel must be PSD: {}",
                describe_witness(&verdict)
            )));
        }
        for i in 0..gram.dim() {
            if !gram.get(i, i).re.is_positive() {
                return Err(Error::InvalidParameter(format!(
                    "kernel diagonal must be strictly positive, entry {i} is not"
                )));
            }
        }
        Ok(FiniteKernel { gram })
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    pub fn gram(&self) -> &HermitianExact {
        &self.gram
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussRat {
        self.gram.get(i, j)
    }
}

/// Connected components of the nonzero pattern of a finite kernel: the
/// unique splitting into irreducible blocks.
pub fn irreducible_components(k: &FiniteKernel) -> Vec<Vec<usize>> {
    let n = k.dim();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut component = Vec::new();
        seen[start] = true;
        while let Some(i) = stack.pop() {
            component.push(i);
            for j in 0..n {
                if !seen[j] && !k.get(i, j).is_zero() {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components
}

/// A violated necessary zero-pattern condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroPatternViolation {
    /// k(z, w) = 0 but l(z, w) != 0.
    MissingZero { z: usize, w: usize },
    /// k(z, w) = 0 and the third point v satisfies neither
    /// l(z, v) = l(w, v) = 0 nor k(z, v) = 0 nor k(w, v) = 0.
    Trichotomy { z: usize, w: usize, v: usize },
}

/// Audit the zero patterns of a pair of finite kernels against the
/// necessary splitting conditions; a nonempty list refutes the pair.
pub fn zero_pattern_audit(
    k: &FiniteKernel,
    l: &FiniteKernel,
) -> Result<Vec<ZeroPatternViolation>, Error> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {}",
            k.dim(),
            l.dim()
        )));
    }
    let n = k.dim();
    let mut violations = Vec::new();
    for z in 0..n {
        for w in (z + 1)..n {
            if !k.get(z, w).is_zero() {
                continue;
            }
            if !l.get(z, w).is_zero() {
                violations.push(ZeroPatternViolation::MissingZero { z, w });
            }
            for v in 0..n {
                if v == z || v == w {
                    continue;
                }
                let l_both_zero = l.get(z, v).is_zero() && l.get(w, v).is_zero();
                let k_one_zero = k.get(z, v).is_zero() || k.get(w, v).is_zero();
                if !l_both_zero && !k_one_zero {
                    violations.push(ZeroPatternViolation::Trichotomy { z, w, v });
                }
            }
        }
    }
    Ok(violations)
}

/// Shifted block matrix of Lemma-style positivity: entries C_{a-v, b-v}
/// where defined, zero otherwise. Shifting preserves positivity over a
/// co-invariant index set.
pub fn shift_block_matrix(
    c: &HermitianExact,
    f: &CoInvariantSet,
    block: usize,
    v: &MultiIndex,
) -> HermitianExact {
    let indices: Vec<MultiIndex> = f.iter().cloned().collect();
    let position: BTreeMap<&MultiIndex, usize> =
        indices.iter().enumerate().map(|(p, a)| (a, p)).collect();
    let m = indices.len();
    HermitianExact::from_upper(m * block, |row, col| {
        let (p, i) = (row / block, row % block);
        let (q, j) = (col / block, col % block);
        match (indices[p].checked_sub(v), indices[q].checked_sub(v)) {
            (Some(a), Some(b)) => {
                let (pa, pb) = (position[&a], position[&b]);
                c.get(pa * block + i, pb * block + j).clone()
            }
            _ => GaussRat::zero(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{bergman, finite_example32, fn_kernel, geometric, szego};
    use crate::certificates::verify_formal_certificate;
    use crate::linalg::operator_norm;
    use crate::scalar::{gauss_int, rat, rat_int, Rat};

    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn szego_series(trunc: u32) -> DiagonalSeries {
        szego().diagonal_series(trunc).unwrap()
    }

    fn bergman_series(trunc: u32) -> DiagonalSeries {
        bergman().diagonal_series(trunc).unwrap()
    }

    fn geo_series(rate: i64, trunc: u32) -> DiagonalSeries {
        geometric(rat_int(rate))
            .unwrap()
            .diagonal_series(trunc)
            .unwrap()
    }

    #[test]
    fn pick_matrix_single_point_boundary() {
        // psi(z) = sqrt(l(z,z)/k(z,z)) makes the 1x1 Pick matrix zero.
        let k = Arc::new(bergman());
        let l = Arc::new(geometric(rat(3, 1)).unwrap());
        let z = vec![C64::new(0.3, 0.1)];
        let kv = k.eval(&z, &z);
        let lv = l.eval(&z, &z);
        let psi = (lv.re / kv.re).sqrt();
        let target = FloatMatrix::from_fn(1, 1, |_, _| C64::new(psi, 0.0));
        let problem = PickProblem::try_new(vec![z], vec![target], k, l).unwrap();
        let m = pick_matrix(&problem).unwrap();
        assert!(m.get(0, 0).norm() < 1e-12);
    }

    #[test]
    fn pick_matrix_zero_targets_is_l_gram() {
        let k = Arc::new(szego());
        let l = Arc::new(bergman());
        let pts = vec![vec![C64::new(0.1, 0.0)], vec![C64::new(-0.2, 0.1)]];
        let targets = vec![FloatMatrix::zeros(1, 1), FloatMatrix::zeros(1, 1)];
        let problem = PickProblem::try_new(pts.clone(), targets, k, l.clone()).unwrap();
        let m = pick_matrix(&problem).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((m.get(i, j) - l.eval(&pts[i], &pts[j])).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn pick_matrix_scalar_szego_is_classical() {
        let s = Arc::new(szego());
        let pts = vec![vec![C64::new(0.2, 0.1)], vec![C64::new(-0.3, 0.05)]];
        let w = [C64::new(0.4, -0.2), C64::new(0.1, 0.3)];
        let targets: Vec<FloatMatrix> = w
            .iter()
            .map(|&v| FloatMatrix::from_fn(1, 1, |_, _| v))
            .collect();
        let problem = PickProblem::try_new(pts.clone(), targets, s.clone(), s).unwrap();
        let m = pick_matrix(&problem).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let classical = (1.0 - w[i] * w[j].conj()) / (1.0 - pts[i][0] * pts[j][0].conj());
                assert!((m.get(i, j) - classical).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn schur_point_annihilates_and_matches_szego_formula() {
        let s = Arc::new(szego()) as Arc<dyn KernelEval>;
        let z = vec![C64::new(0.0, 0.0)];
        let kz = kernel_schur_point(s, z).unwrap();
        let w = [C64::new(0.3, 0.2)];
        let v = [C64::new(-0.1, 0.25)];
        // Annihilation at the base point.
        assert!(kz.eval(&[C64::new(0.0, 0.0)], &v).norm() < 1e-15);
        // Szego at 0: k^0(w, v) = w vbar / (1 - w vbar).
        let x = w[0] * v[0].conj();
        let want = x / (C64::new(1.0, 0.0) - x);
        assert!((kz.eval(&w, &v) - want).norm() < 1e-14);
    }

    #[test]
    fn exact_schur_point_is_idempotent() {
        let h = HermitianExact::from_real_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        let once = exact_schur_point(&h, 1).unwrap();
        let twice = exact_schur_point(&once, 1).unwrap();
        assert_eq!(once, twice);
        for j in 0..3 {
            assert!(once.get(1, j).is_zero());
        }
    }

    #[test]
    fn one_point_extension_on_constructed_data() {
        // Feasible: targets from a constant contraction.
        let k = Arc::new(bergman());
        let l = Arc::new(geometric(rat(2, 1)).unwrap());
        let pts = vec![vec![C64::new(0.1, 0.05)], vec![C64::new(-0.15, 0.12)]];
        let phi = C64::new(0.35, 0.1);
        let targets: Vec<FloatMatrix> = (0..2)
            .map(|_| FloatMatrix::from_fn(1, 1, |_, _| phi))
            .collect();
        let problem = PickProblem::try_new(pts, targets, k.clone(), l.clone()).unwrap();
        let verdict =
            one_point_extension_feasible(&problem, &[C64::new(0.2, -0.1)], PSD_FLOAT_TOL).unwrap();
        assert!(
            verdict.psd,
            "constant contraction restricts to feasible data"
        );

        // Infeasible: scale the same multiplier to norm 2.
        let targets: Vec<FloatMatrix> = (0..2)
            .map(|_| FloatMatrix::from_fn(1, 1, |_, _| phi * 6.0))
            .collect();
        let problem = PickProblem::try_new(
            vec![vec![C64::new(0.1, 0.05)], vec![C64::new(-0.15, 0.12)]],
            targets,
            k,
            l,
        )
        .unwrap();
        let verdict =
            one_point_extension_feasible(&problem, &[C64::new(0.2, -0.1)], PSD_FLOAT_TOL).unwrap();
        assert!(!verdict.psd);
    }

    #[test]
    fn one_point_extension_empty_data_is_feasible() {
        let k = Arc::new(szego());
        let l = Arc::new(szego());
        let problem = PickProblem::try_new(vec![], vec![], k, l).unwrap();
        assert!(
            one_point_extension_feasible(&problem, &[C64::new(0.3, 0.0)], PSD_FLOAT_TOL)
                .unwrap()
                .psd
        );
    }

    #[test]
    fn one_point_extension_reports_dependence() {
        // A constant kernel has rank-one sections: dependence is reported,
        // never resolved.
        let constant = fn_kernel(1, |_, _| C64::new(1.0, 0.0));
        let problem = PickProblem::try_new(
            vec![vec![C64::new(0.1, 0.0)]],
            vec![FloatMatrix::zeros(1, 1)],
            constant.clone(),
            constant,
        )
        .unwrap();
        assert!(matches!(
            one_point_extension_feasible(&problem, &[C64::new(0.2, 0.0)], PSD_FLOAT_TOL),
            Err(Error::DependentKernelFunctions { .. })
        ));
    }

    #[test]
    fn one_point_extension_monotone_under_deletion() {
        let mut rng = StdRng::seed_from_u64(91);
        let k = Arc::new(bergman());
        let l = Arc::new(geometric(rat(2, 1)).unwrap());
        for _ in 0..20 {
            let pts: Vec<Vec<C64>> = (0..3)
                .map(|i| {
                    vec![C64::from_polar(
                        0.05 + 0.08 * i as f64 + rng.gen_range(0.0..0.02),
                        rng.gen_range(0.0..6.28),
                    )]
                })
                .collect();
            let phi = C64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(0.0..6.28));
            let targets: Vec<FloatMatrix> = (0..3)
                .map(|_| FloatMatrix::from_fn(1, 1, |_, _| phi))
                .collect();
            let z_new = [C64::new(0.31, 0.07)];
            let full =
                PickProblem::try_new(pts.clone(), targets.clone(), k.clone(), l.clone()).unwrap();
            let full_verdict = one_point_extension_feasible(&full, &z_new, PSD_FLOAT_TOL).unwrap();
            if !full_verdict.psd {
                continue;
            }
            // Deleting any data point keeps the extension feasible.
            for drop in 0..3 {
                let pts2: Vec<Vec<C64>> = pts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, p)| p.clone())
                    .collect();
                let targets2: Vec<FloatMatrix> = targets
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, t)| t.clone())
                    .collect();
                let sub = PickProblem::try_new(pts2, targets2, k.clone(), l.clone()).unwrap();
                assert!(
                    one_point_extension_feasible(&sub, &z_new, PSD_FLOAT_TOL)
                        .unwrap()
                        .psd
                );
            }
        }
    }

    #[test]
    fn caratheodory_gram_boundary_and_shift_examples() {
        // F = {0}, c_0 = 1 on a normalized pair: [l_0 - k_0] = [0].
        let f = CoInvariantSet::full(1, 0);
        let data =
            CaratheodoryData::scalar(f, &[(MultiIndex::scalar(0), gauss_int(1, 0))]).unwrap();
        let k = szego_series(4);
        let g = caratheodory_gram(&data, &k, &k).unwrap();
        assert_eq!(g.dim(), 1);
        assert!(g.get(0, 0).is_zero());
        assert!(psd_test_exact(&g).is_psd);

        // Szego pair, F = {0, 1}, c_0 = 0, c_1 = 1: the shift, norm one.
        let f = CoInvariantSet::full(1, 1);
        let data =
            CaratheodoryData::scalar(f, &[(MultiIndex::scalar(1), gauss_int(1, 0))]).unwrap();
        let g = caratheodory_gram(&data, &k, &k).unwrap();
        assert_eq!(*g.get(0, 0), gauss_int(1, 0));
        assert!(g.get(0, 1).is_zero());
        assert!(g.get(1, 1).is_zero());
        assert!(psd_test_exact(&g).is_psd);
    }

    #[test]
    fn caratheodory_gram_detects_excess() {
        // c_0 = 1 with k_a > l_a at some a in F: not a contraction.
        let f = CoInvariantSet::full(1, 1);
        let data =
            CaratheodoryData::scalar(f, &[(MultiIndex::scalar(0), gauss_int(1, 0))]).unwrap();
        let k = bergman_series(4); // k_1 = 2
        let l = szego_series(4); // l_1 = 1
        let g = caratheodory_gram(&data, &k, &l).unwrap();
        assert!(!psd_test_exact(&g).is_psd);

        // The zero data is always a contraction.
        let zero = CaratheodoryData::scalar(CoInvariantSet::full(1, 1), &[]).unwrap();
        assert!(psd_test_exact(&caratheodory_gram(&zero, &k, &l).unwrap()).is_psd);
    }

    #[test]
    fn caratheodory_rank_one_gram_is_diagonal() {
        // Data whose only nonzero column is at slot (a, 0) produces the
        // block-diagonal Gram with entries l_a - sum v k.
        let degree = 3u32;
        let f = CoInvariantSet::full(1, degree);
        let block = f.len();
        let v: Vec<Rat> = vec![rat(1, 1), rat(1, 2), rat(1, 4), rat(1, 8)];
        let mut coeffs: BTreeMap<MultiIndex, GaussMatrix> = BTreeMap::new();
        for (n, va) in v.iter().enumerate() {
            let mut mat = vec![GaussRat::zero(); block * block];
            mat[n * block] = gauss_real(va.clone());
            coeffs.insert(MultiIndex::scalar(n as u32), mat);
        }
        let data = CaratheodoryData::try_new(f.clone(), block, coeffs).unwrap();
        let k = bergman_series(degree);
        let l = geo_series(2, degree);
        let g = caratheodory_gram(&data, &k, &l).unwrap();
        // Off-diagonal blocks vanish.
        let dim = g.dim();
        for r in 0..dim {
            for c in 0..dim {
                let (p, q) = (r / block, c / block);
                if p != q {
                    assert!(g.get(r, c).is_zero(), "off-diagonal block ({p},{q})");
                }
            }
        }
        // The (a, 0) slot of each diagonal block carries the residual
        // l_a - sum_{u<=a} v_{a-u}^2 k_u (the quadratic form squares v).
        for (p, a) in f.iter().enumerate() {
            let mut want = l.coeff(a);
            for u in indices_below(a) {
                let va = &v[a.checked_sub(&u).unwrap().get(0) as usize];
                want -= va * va * k.coeff(&u);
            }
            assert_eq!(g.get(p * block, p * block).re, want, "diagonal at {a}");
        }
    }

    #[test]
    fn gram_psd_matches_float_contraction_norm() {
        // Exact PSD of the congruent Gram agrees with the float norm of the
        // assembled block matrix on random scalar and 2x2 data.
        let mut rng = StdRng::seed_from_u64(101);
        let k = bergman_series(5);
        let l = geo_series(2, 5);
        for trial in 0..200 {
            let degree = rng.gen_range(1..=5u32);
            let block = rng.gen_range(1..=2usize);
            let f = CoInvariantSet::full(1, degree);
            let mut coeffs: BTreeMap<MultiIndex, GaussMatrix> = BTreeMap::new();
            for a in f.iter() {
                let mat: GaussMatrix = (0..block * block)
                    .map(|_| {
                        GaussRat::new(
                            rat(rng.gen_range(-8..=8), 16),
                            rat(rng.gen_range(-8..=8), 16),
                        )
                    })
                    .collect();
                coeffs.insert(a.clone(), mat);
            }
            let data = CaratheodoryData::try_new(f.clone(), block, coeffs).unwrap();
            let g = caratheodory_gram(&data, &k, &l).unwrap();
            let exact = psd_test_exact(&g).is_psd;
            let indices: Vec<MultiIndex> = f.iter().cloned().collect();
            let c = block_matrix_float(&indices, &indices, &data, &k, &l);
            let norm = operator_norm(&c).unwrap();
            if norm <= 1.0 - 1e-8 {
                assert!(
                    exact,
                    "norm {norm} < 1 but exact Gram rejected, trial {trial}"
                );
            }
            if norm > 1.0 + 1e-8 {
                assert!(
                    !exact,
                    "norm {norm} > 1 but exact Gram accepted, trial {trial}"
                );
            }
        }
    }

    #[test]
    fn shifted_block_matrices_stay_psd() {
        let mut rng = StdRng::seed_from_u64(103);
        for _ in 0..50 {
            let degree = rng.gen_range(1..=3u32);
            let vars = rng.gen_range(1..=2usize);
            let f = CoInvariantSet::full(vars, degree);
            let m = f.len();
            // Random PSD block matrix over F as V* V.
            let rows = rng.gen_range(1..=m);
            let v: Vec<Vec<GaussRat>> = (0..rows)
                .map(|_| {
                    (0..m)
                        .map(|_| {
                            GaussRat::new(
                                rat(rng.gen_range(-3..=3), 2),
                                rat(rng.gen_range(-3..=3), 2),
                            )
                        })
                        .collect()
                })
                .collect();
            let c = HermitianExact::from_upper(m, |i, j| {
                let mut acc = GaussRat::zero();
                for row in &v {
                    acc += gauss_conj(&row[i]) * &row[j];
                }
                acc
            });
            assert!(psd_test_exact(&c).is_psd);
            let shift_by = f.iter().nth(rng.gen_range(0..m)).unwrap().clone();
            let shifted = shift_block_matrix(&c, &f, 1, &shift_by);
            assert!(psd_test_exact(&shifted).is_psd, "shift by {shift_by}");
        }
    }

    #[test]
    fn one_step_gram_stays_psd_under_formal_certificate() {
        // With a verified formal certificate and contractive data, the
        // shifted one-step Gram stays PSD: the Parrott step is feasible.
        let mut rng = StdRng::seed_from_u64(107);
        let fixtures = [
            (bergman_series(8), geo_series(2, 8)),
            (szego_series(8), szego_series(8)),
        ];
        for (k, l) in &fixtures {
            let theta = crate::certificates::master_certificate(k, 8)
                .unwrap()
                .into_theta();
            assert!(verify_formal_certificate(k, l, &theta, 8).unwrap().pass);
            for _ in 0..50 {
                let degree = rng.gen_range(1..=4u32);
                let f = CoInvariantSet::full(1, degree);
                let mut coeffs: BTreeMap<MultiIndex, GaussMatrix> = BTreeMap::new();
                for a in f.iter() {
                    coeffs.insert(
                        a.clone(),
                        vec![GaussRat::new(rat(rng.gen_range(-4..=4), 16), Rat::zero())],
                    );
                }
                let data = CaratheodoryData::try_new(f, 1, coeffs).unwrap();
                let base = caratheodory_gram(&data, k, l).unwrap();
                if !psd_test_exact(&base).is_psd {
                    continue;
                }
                let d = MultiIndex::scalar(degree + 1);
                let plus = one_step_gram(&data, k, l, &d).unwrap();
                assert!(psd_test_exact(&plus).is_psd);
            }
        }
    }

    #[test]
    fn caratheodory_extension_on_classical_data() {
        // Szego pair, data c = (0, 1): the central completion continues
        // with c_2 = 0 (the shift keeps norm one).
        let k = szego_series(6);
        let f = CoInvariantSet::full(1, 1);
        let data =
            CaratheodoryData::scalar(f, &[(MultiIndex::scalar(1), gauss_int(1, 0))]).unwrap();
        let ext = caratheodory_extend(&data, &k, &k, &MultiIndex::scalar(2), 1e-9).unwrap();
        assert!(
            ext.c_d_float.get(0, 0).norm() < 1e-9,
            "central solution is zero"
        );
        assert!(ext.exact_psd);
        assert!(ext.slack >= -1e-9);
    }

    #[test]
    fn caratheodory_extension_of_zero_data() {
        let k = bergman_series(6);
        let l = geo_series(2, 6);
        let data = CaratheodoryData::scalar(CoInvariantSet::full(1, 2), &[]).unwrap();
        let ext = caratheodory_extend(&data, &k, &l, &MultiIndex::scalar(3), 1e-9).unwrap();
        assert!(ext.c_d_float.max_abs() < 1e-12);
        assert!(ext.exact_psd);
    }

    #[test]
    fn caratheodory_extension_iterates_on_certified_pair() {
        // Random small contractive data on a certified pair extends stage
        // by stage up to degree 8 without losing the contraction.
        let mut rng = StdRng::seed_from_u64(109);
        let k = bergman_series(10);
        let l = geo_series(2, 10);
        let f = CoInvariantSet::full(1, 1);
        let scale = rat(1, 8);
        let data = CaratheodoryData::scalar(
            f,
            &[
                (
                    MultiIndex::scalar(0),
                    gauss_real(&scale * rat_int(rng.gen_range(0..=2))),
                ),
                (
                    MultiIndex::scalar(1),
                    gauss_real(&scale * rat_int(rng.gen_range(-2..=2))),
                ),
            ],
        )
        .unwrap();
        assert!(psd_test_exact(&caratheodory_gram(&data, &k, &l).unwrap()).is_psd);
        let mut current = data;
        for degree in 2..=8u32 {
            let ext = caratheodory_extend(&current, &k, &l, &MultiIndex::scalar(degree), 1e-9)
                .expect("extension stays feasible");
            assert!(ext.slack >= -1e-8, "slack {} at degree {degree}", ext.slack);
            current = ext.data;
        }
    }

    #[test]
    fn caratheodory_extension_rejects_infeasible_data() {
        let k = bergman_series(6);
        let l = szego_series(6);
        // c_0 = 1 forces k_a <= l_a, which Bergman over Szego violates.
        let data = CaratheodoryData::scalar(
            CoInvariantSet::full(1, 1),
            &[(MultiIndex::scalar(0), gauss_int(1, 0))],
        )
        .unwrap();
        assert!(matches!(
            caratheodory_extend(&data, &k, &l, &MultiIndex::scalar(2), 1e-9),
            Err(Error::InfeasibleExtension(_))
        ));
    }

    #[test]
    fn pointwise_check_on_finite_fixture() {
        let (k, l, patterns) = finite_example32();
        // Embed the 3-point set as 0, 1, 2 on the real line.
        let grid: Vec<Vec<C64>> = (0..3).map(|i| vec![C64::new(i as f64, 0.0)]).collect();
        let to_eval = |m: HermitianExact| {
            fn_kernel(1, move |z: &[C64], w: &[C64]| {
                let i = z[0].re.round() as usize;
                let j = w[0].re.round() as usize;
                gauss_to_c64(m.get(i, j))
            })
        };
        let ke = to_eval(k.gram().clone());
        let le = to_eval(l.gram().clone());
        for (t, pattern) in patterns.iter().enumerate() {
            let pe = to_eval(pattern.clone());
            let (first, second) = shimorin_pointwise_check(
                ke.as_ref(),
                le.as_ref(),
                pe.as_ref(),
                &grid[t],
                &grid,
                PSD_FLOAT_TOL,
            )
            .unwrap();
            assert!(first.psd, "l-condition at base point {t}");
            assert!(second.psd, "k-condition at base point {t}");
        }
    }

    #[test]
    fn pointwise_check_with_trivial_pattern() {
        // p = 1: the k-condition always holds; the l-condition generically
        // fails (l^z is a strict compression).
        let s = Arc::new(szego());
        let one = fn_kernel(1, |_, _| C64::new(1.0, 0.0));
        let grid: Vec<Vec<C64>> = vec![
            vec![C64::new(0.1, 0.0)],
            vec![C64::new(0.3, 0.1)],
            vec![C64::new(-0.2, 0.2)],
        ];
        let (first, second) = shimorin_pointwise_check(
            s.as_ref(),
            s.as_ref(),
            one.as_ref(),
            &grid[0],
            &grid,
            PSD_FLOAT_TOL,
        )
        .unwrap();
        assert!(second.psd);
        assert!(!first.psd);
    }

    #[test]
    fn pointwise_check_with_ratio_pattern() {
        // For a single kernel s, p = s^z / s satisfies both conditions.
        let s = Arc::new(szego()) as Arc<dyn KernelEval>;
        let z = vec![C64::new(0.25, -0.1)];
        let base_point = z.clone();
        let s_for_ratio = s.clone();
        let ratio = fn_kernel(1, move |a: &[C64], b: &[C64]| {
            let base = s_for_ratio.eval(a, b);
            (base
                - s_for_ratio.eval(a, &base_point) * s_for_ratio.eval(&base_point, b)
                    / s_for_ratio.eval(&base_point, &base_point))
                / base
        });
        let grid: Vec<Vec<C64>> = vec![
            vec![C64::new(0.1, 0.0)],
            vec![C64::new(-0.2, 0.15)],
            vec![C64::new(0.05, -0.3)],
            vec![C64::new(0.33, 0.21)],
        ];
        let (first, second) =
            shimorin_pointwise_check(s.as_ref(), s.as_ref(), ratio.as_ref(), &z, &grid, 1e-8)
                .unwrap();
        assert!(first.psd);
        assert!(second.psd);
    }

    #[test]
    fn components_of_fixture_and_blocks() {
        let (k, _, _) = finite_example32();
        assert_eq!(irreducible_components(&k), vec![vec![0, 1, 2]]);

        let block_diag = FiniteKernel::try_new(HermitianExact::from_real_rows(&[
            vec![1, 1, 0, 0],
            vec![1, 2, 0, 0],
            vec![0, 0, 3, 0],
            vec![0, 0, 0, 1],
        ]))
        .unwrap();
        assert_eq!(
            irreducible_components(&block_diag),
            vec![vec![0, 1], vec![2], vec![3]]
        );

        let id = FiniteKernel::try_new(HermitianExact::from_real_rows(&[vec![1, 0], vec![0, 1]]))
            .unwrap();
        assert_eq!(irreducible_components(&id), vec![vec![0], vec![1]]);
    }

    #[test]
    fn zero_pattern_audit_cases() {
        let (k, l, _) = finite_example32();
        // Diagonal l: vacuous pass on the l side of the trichotomy.
        assert!(zero_pattern_audit(&k, &l).unwrap().is_empty());

        // An l with l(0, 2) != 0 violates the forced zero (k(0,2) = 0).
        let bad_l = FiniteKernel::try_new(HermitianExact::from_real_rows(&[
            vec![2, 0, 1],
            vec![0, 1, 0],
            vec![1, 0, 2],
        ]))
        .unwrap();
        let violations = zero_pattern_audit(&k, &bad_l).unwrap();
        assert!(violations.contains(&ZeroPatternViolation::MissingZero { z: 0, w: 2 }));

        // Strictly positive k: nothing to check.
        let pos = FiniteKernel::try_new(HermitianExact::from_real_rows(&[vec![2, 1], vec![1, 2]]))
            .unwrap();
        assert!(zero_pattern_audit(&pos, &pos).unwrap().is_empty());
    }
}
