//! Coefficient-level and point-level Schur-complement chains for
//! one-variable holomorphic kernels: the exact stage recursion on the
//! coefficient matrix, quotient positivity against a diagonal kernel, the
//! pointwise chain evaluator, and the iterated-limit cross-check that
//! connects the two.

use std::sync::Arc;

use num_traits::Zero;

use crate::catalog::KernelEval;
use crate::error::Error;
use crate::interpolation::kernel_schur_point;
use crate::linalg::{psd_test_exact, HermitianExact, PsdVerdict};
use crate::scalar::{Rat, C64};
use crate::series::{BivariateSeries, DiagonalSeries};

/// Stages of the coefficient Schur-complement chain: stage m has zero rows
/// and columns below index m and was produced by pivoting on the previous
/// stage's (m-1, m-1) entry.
#[derive(Clone, Debug)]
pub struct SchurChain {
    pub stages: Vec<BivariateSeries>,
    /// Pivot values used at each stage (real, exact, nonzero).
    pub pivots: Vec<Rat>,
}

impl SchurChain {
    pub fn stage(&self, n: usize) -> &BivariateSeries {
        &self.stages[n]
    }
}

/// The n-stage chain of exact Schur complements of the coefficient matrix,
/// stage_m[i][j] = stage_{m-1}[i][j]
///                 - stage_{m-1}[i][m-1] stage_{m-1}[m-1][j] / pivot.
///
/// Regularity up to order n (nonzero pivots) is checked exactly; a
/// vanishing pivot reports its stage.
pub fn coeff_schur_chain(l: &BivariateSeries, n: usize) -> Result<SchurChain, Error> {
    l.require_hermitian()?;
    if n as u32 > l.truncation() {
        return Err(Error::InvalidParameter(format!(
            "chain depth {n} exceeds truncation {}",
            l.truncation()
        )));
    }
    let mut stages = vec![l.clone()];
    let mut pivots = Vec::with_capacity(n);
    for m in 1..=n {
        let prev = &stages[m - 1];
        let p = (m - 1) as u32;
        let pivot = prev.get(p, p).clone();
        debug_assert!(pivot.im.is_zero());
        if pivot.is_zero() {
            return Err(Error::RegularityFailure { stage: m });
        }
        let mut next = BivariateSeries::zero(l.truncation());
        for i in (m as u32)..=l.truncation() {
            for j in (m as u32)..=l.truncation() {
                let v = prev.get(i, j) - prev.get(i, p) * prev.get(p, j) / &pivot;
                next.set(i, j, v);
            }
        }
        pivots.push(pivot.re);
        stages.push(next);
    }
    Ok(SchurChain { stages, pivots })
}

/// Exact PSD verdict of the degree-N coefficient matrix of
/// (stage) * (1/k) for a normalized diagonal k. A failure refutes the
/// certificate hypothesis for the pair.
pub fn quotient_positivity(
    stage: &BivariateSeries,
    k: &DiagonalSeries,
    degree: u32,
) -> Result<PsdVerdict, Error> {
    if k.vars() != 1 {
        return Err(Error::InvalidParameter(
            "quotients are one-variable only".into(),
        ));
    }
    k.check_normalized_kernel()?;
    let k_inv = BivariateSeries::from_diagonal(&k.reciprocal()?)?;
    let q = stage.mul(&k_inv).truncate_to(degree);
    q.require_hermitian()?;
    let n = degree.min(q.truncation()) as usize + 1;
    let matrix = HermitianExact::from_upper(n, |i, j| q.get(i as u32, j as u32).clone());
    Ok(psd_test_exact(&matrix))
}

/// Pointwise evaluator of the iterated point Schur complement over base
/// points u_1, ..., u_n.
pub struct PointSchurChain {
    top: Arc<dyn KernelEval>,
}

impl KernelEval for PointSchurChain {
    fn vars(&self) -> usize {
        self.top.vars()
    }

    fn eval(&self, z: &[C64], w: &[C64]) -> C64 {
        self.top.eval(z, w)
    }
}

/// Float threshold below which a chain denominator counts as vanishing.
pub const DENOMINATOR_THRESHOLD: f64 = 1e-14;

pub fn point_schur_chain(
    l: Arc<dyn KernelEval>,
    points: &[Vec<C64>],
) -> Result<PointSchurChain, Error> {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i]
                .iter()
                .zip(&points[j])
                .all(|(a, b)| (a - b).norm() < 1e-14)
            {
                return Err(Error::CoincidentPoint);
            }
        }
    }
    let mut current: Arc<dyn KernelEval> = l;
    for (stage, u) in points.iter().enumerate() {
        let diag = current.eval(u, u);
        if diag.norm() <= DENOMINATOR_THRESHOLD {
            return Err(Error::VanishingDenominator {
                stage: stage + 1,
                value: diag.norm(),
            });
        }
        current = Arc::new(kernel_schur_point(current, u.clone())?);
    }
    Ok(PointSchurChain { top: current })
}

/// Deviation table of the iterated-limit identity: for each shrink value t
/// the point chain at u_m = m t^3 is compared with the truncated evaluation
/// of the coefficient chain stage n over a grid. Deviations are judged
/// against the reported truncation floor, not against zero.
///
/// The chain is evaluated in exact rational arithmetic (the float points
/// convert exactly): its stage denominators shrink with the squared point
/// separation, far past what double precision can subtract accurately, and
/// only the final comparison happens in floats.
#[derive(Clone, Debug)]
pub struct LimitCheck {
    /// (t, sup deviation over the grid).
    pub deviations: Vec<(f64, f64)>,
    /// Crude bound for the truncation error of the series evaluations on
    /// the grid: the outermost coefficient band at the grid radius.
    pub truncation_floor: f64,
}

fn exact_from_f64(x: f64) -> Result<Rat, Error> {
    Rat::from_float(x).ok_or(Error::NonFinite)
}

fn exact_point(z: C64) -> Result<crate::scalar::GaussRat, Error> {
    Ok(crate::scalar::GaussRat::new(
        exact_from_f64(z.re)?,
        exact_from_f64(z.im)?,
    ))
}

pub fn limit_identity_check(
    l: &BivariateSeries,
    n: usize,
    schedule: &[f64],
    grid: &[C64],
) -> Result<LimitCheck, Error> {
    if schedule.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidParameter(
            "shrink schedule must be positive".into(),
        ));
    }
    if schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter(
            "shrink schedule must decrease".into(),
        ));
    }
    let chain = coeff_schur_chain(l, n)?;
    let stage = chain.stage(n);
    let mut deviations = Vec::with_capacity(schedule.len());
    for &t in schedule {
        let shrink = t * t * t;
        // Exact table of kernel values over grid points followed by the
        // chain base points u_m = m shrink.
        let mut points: Vec<crate::scalar::GaussRat> = grid
            .iter()
            .map(|&z| exact_point(z))
            .collect::<Result<_, _>>()?;
        for m in 1..=n {
            points.push(exact_point(C64::new(m as f64 * shrink, 0.0))?);
        }
        let total = points.len();
        let mut table: Vec<Vec<crate::scalar::GaussRat>> = (0..total)
            .map(|i| {
                (0..total)
                    .map(|j| l.eval_exact(&points[i], &points[j]))
                    .collect()
            })
            .collect();
        for m in 1..=n {
            let u = grid.len() + m - 1;
            let diag = table[u][u].clone();
            if diag.is_zero() {
                return Err(Error::VanishingDenominator {
                    stage: m,
                    value: 0.0,
                });
            }
            let snapshot = table.clone();
            for i in 0..total {
                for j in 0..total {
                    let delta = &snapshot[i][u] * &snapshot[u][j] / &diag;
                    table[i][j] = &snapshot[i][j] - delta;
                }
            }
        }
        let mut sup = 0.0f64;
        for (i, &z) in grid.iter().enumerate() {
            for (j, &w) in grid.iter().enumerate() {
                let lhs = crate::scalar::gauss_to_c64(&table[i][j]);
                let rhs = stage.eval_f64(z, w);
                sup = sup.max((lhs - rhs).norm());
            }
        }
        deviations.push((t, sup));
    }
    let radius = grid.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let nn = l.truncation();
    let mut floor = 0.0f64;
    for i in 0..=nn {
        for j in 0..=nn {
            if i == nn || j == nn {
                let c = crate::scalar::gauss_to_c64(l.get(i, j)).norm();
                floor += c * radius.powi((i + j) as i32);
            }
        }
    }
    Ok(LimitCheck {
        deviations,
        truncation_floor: floor,
    })
}
