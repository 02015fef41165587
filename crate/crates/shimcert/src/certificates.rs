//! Certificate computations for pairs of normalized diagonal holomorphic
//! kernels: the master-certificate recursion, formal Shimorin certificate
//! verification, pair certification, greedy v-sequences, Schur-complement
//! index chains and domain radii.
//!
//! Verdicts are truncation-relative: a pass at degree N asserts the
//! defining inequalities for all |a| <= N only; a failure is definitive.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::scalar::{rat_to_f64, Rat};
use crate::series::{indices_below, indices_up_to, DiagonalSeries, MultiIndex};

/// Nonnegativity verdict for a truncated series, with the first failing
/// index (graded lexicographic) and its exact value.
#[derive(Clone, Debug, PartialEq)]
pub struct NonnegVerdict {
    pub ok: bool,
    pub first_failure: Option<(MultiIndex, Rat)>,
}

impl NonnegVerdict {
    pub fn of(series: &DiagonalSeries) -> Self {
        match series.first_negative() {
            None => NonnegVerdict {
                ok: true,
                first_failure: None,
            },
            Some(fail) => NonnegVerdict {
                ok: false,
                first_failure: Some(fail),
            },
        }
    }
}

/// The greedy minimum diagonal certificate of a normalized kernel.
///
/// theta_0 = 0, theta_{e_j} = k_{e_j} and for |b| >= 2
/// theta_b = max(0, k_b - sum_{w+u=b, w,u != 0} theta_w k_u),
/// computed in graded lexicographic order with exact comparisons.
#[derive(Clone, Debug, PartialEq)]
pub struct MasterCertificate {
    theta: DiagonalSeries,
}

impl MasterCertificate {
    pub fn theta(&self) -> &DiagonalSeries {
        &self.theta
    }

    pub fn into_theta(self) -> DiagonalSeries {
        self.theta
    }
}

pub fn master_certificate(k: &DiagonalSeries, degree: u32) -> Result<MasterCertificate, Error> {
    if k.truncation() < degree {
        return Err(Error::NotNormalized(format!(
            "kernel truncation {} is below the requested degree {degree}",
            k.truncation()
        )));
    }
    let k = k.truncate_to(degree);
    k.check_normalized_kernel()?;
    let vars = k.vars();
    let mut theta = DiagonalSeries::zero(vars, degree);
    for j in 0..vars {
        let e = MultiIndex::unit(vars, j);
        if degree >= 1 {
            theta.set_coeff(e.clone(), k.coeff(&e));
        }
    }
    for b in indices_up_to(vars, degree) {
        if b.degree() < 2 {
            continue;
        }
        // Only nonzero theta_w contribute; theta is sparse by construction.
        let mut raw = k.coeff(&b);
        for (w, tw) in theta.iter() {
            if w >= &b {
                break;
            }
            if let Some(u) = b.checked_sub(w) {
                if !u.is_zero() {
                    raw -= tw * &k.coeff(&u);
                }
            }
        }
        if raw.is_positive() {
            theta.set_coeff(b, raw);
        }
    }
    Ok(MasterCertificate { theta })
}

/// h = 1 - k(1 - t), with its coefficientwise nonnegativity verdict.
pub fn shimorin_h(
    k: &DiagonalSeries,
    t: &DiagonalSeries,
) -> Result<(DiagonalSeries, NonnegVerdict), Error> {
    let one = DiagonalSeries::one(k.vars(), k.truncation().min(t.truncation()));
    let h = one.sub(&k.mul(&one.sub(t)?)?)?;
    let verdict = NonnegVerdict::of(&h);
    Ok((h, verdict))
}

/// g = l(1 - t), with its coefficientwise nonnegativity verdict.
pub fn shimorin_g(
    l: &DiagonalSeries,
    t: &DiagonalSeries,
) -> Result<(DiagonalSeries, NonnegVerdict), Error> {
    let one = DiagonalSeries::one(l.vars(), l.truncation().min(t.truncation()));
    let g = l.mul(&one.sub(t)?)?;
    let verdict = NonnegVerdict::of(&g);
    Ok((g, verdict))
}

/// Which series produced the first failing coefficient of a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailedSeries {
    G,
    H,
}

/// Outcome of certifying a pair: the factorization data g, h, s together
/// with the pass/fail verdict and the first offending coefficient.
#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub degree: u32,
    pub theta: DiagonalSeries,
    pub g: DiagonalSeries,
    pub h: DiagonalSeries,
    /// s = 1/(1 - theta), the certificate kernel.
    pub s: DiagonalSeries,
    pub pass: bool,
    pub first_failure: Option<(FailedSeries, MultiIndex, Rat)>,
}

/// Decide whether the master certificate of k certifies the pair (k, l) at
/// the given degree: pass iff every coefficient of g = l(1 - theta) is
/// nonnegative. h = 1 - k(1 - theta) is nonnegative automatically and is
/// asserted. On pass the exact truncated factorizations k = (1 - h)s and
/// l = g s are verified.
pub fn certify_pair(
    k: &DiagonalSeries,
    l: &DiagonalSeries,
    degree: u32,
) -> Result<CertificateReport, Error> {
    if k.vars() != l.vars() {
        return Err(Error::VariableCountMismatch {
            left: k.vars(),
            right: l.vars(),
        });
    }
    if l.truncation() < degree {
        return Err(Error::NotNormalized(format!(
            "second kernel truncation {} is below the requested degree {degree}",
            l.truncation()
        )));
    }
    let k = k.truncate_to(degree);
    let l = l.truncate_to(degree);
    l.check_normalized_kernel()?;
    let theta = master_certificate(&k, degree)?.into_theta();
    let (h, h_verdict) = shimorin_h(&k, &theta)?;
    assert!(
        h_verdict.ok,
        "master certificate must make 1 - k(1 - theta) nonnegative"
    );
    let (g, g_verdict) = shimorin_g(&l, &theta)?;
    let one = DiagonalSeries::one(k.vars(), degree);
    let s = one.sub(&theta)?.reciprocal()?;
    let pass = g_verdict.ok;
    if pass {
        // Exact truncated identities behind the certificate.
        let k_back = one.sub(&h)?.mul(&s)?;
        assert_eq!(
            k_back, k,
            "k = (1 - h) s must hold exactly at the truncation"
        );
        let l_back = g.mul(&s)?;
        assert_eq!(l_back, l, "l = g s must hold exactly at the truncation");
    }
    let first_failure = g_verdict
        .first_failure
        .map(|(a, v)| (FailedSeries::G, a, v));
    Ok(CertificateReport {
        degree,
        theta,
        g,
        h,
        s,
        pass,
        first_failure,
    })
}

/// Verify a candidate formal certificate t against (k, l) by solving the
/// factorization identities coefficientwise:
/// g_a = l_a - sum_{0<u<=a} t_u l_{a-u} and
/// h_a = sum_{0<u<=a} t_u k_{a-u} - k_a,
/// passing iff every g_a and h_a is nonnegative up to the degree.
///
/// t must satisfy t_0 = 0 and t_a >= 0.
pub fn verify_formal_certificate(
    k: &DiagonalSeries,
    l: &DiagonalSeries,
    t: &DiagonalSeries,
    degree: u32,
) -> Result<CertificateReport, Error> {
    if k.vars() != l.vars() {
        return Err(Error::VariableCountMismatch {
            left: k.vars(),
            right: l.vars(),
        });
    }
    if t.vars() != k.vars() {
        return Err(Error::VariableCountMismatch {
            left: t.vars(),
            right: k.vars(),
        });
    }
    if !t.constant_term().is_zero() {
        return Err(Error::InvalidParameter(
            "certificate must have zero constant term".into(),
        ));
    }
    if let Some((index, _)) = t.first_negative() {
        return Err(Error::NegativeCoefficient { index });
    }
    let k = k.truncate_to(degree);
    let l = l.truncate_to(degree);
    let t = t.truncate_to(degree);
    let vars = k.vars();
    let mut g = DiagonalSeries::zero(vars, degree);
    let mut h = DiagonalSeries::zero(vars, degree);
    let one = Rat::one();
    for a in indices_up_to(vars, degree) {
        if a.is_zero() {
            g.set_coeff(a.clone(), l.coeff(&a));
            h.set_coeff(a.clone(), &one - &k.coeff(&a));
            continue;
        }
        let mut conv_l = Rat::zero();
        let mut conv_k = Rat::zero();
        for (u, tu) in t.iter() {
            if u.is_zero() {
                continue;
            }
            if let Some(rest) = a.checked_sub(u) {
                conv_l += tu * &l.coeff(&rest);
                conv_k += tu * &k.coeff(&rest);
            }
        }
        g.set_coeff(a.clone(), l.coeff(&a) - conv_l);
        h.set_coeff(a.clone(), conv_k - k.coeff(&a));
    }
    // First failure scans g then h at each index in graded order.
    let mut first_failure = None;
    'scan: for a in indices_up_to(vars, degree) {
        let ga = g.coeff(&a);
        if ga.is_negative() {
            first_failure = Some((FailedSeries::G, a, ga));
            break 'scan;
        }
        let ha = h.coeff(&a);
        if ha.is_negative() {
            first_failure = Some((FailedSeries::H, a, ha));
            break 'scan;
        }
    }
    let pass = first_failure.is_none();
    let s = DiagonalSeries::one(vars, degree).sub(&t)?.reciprocal()?;
    Ok(CertificateReport {
        degree,
        theta: t,
        g,
        h,
        s,
        pass,
        first_failure,
    })
}

/// Greedy v-sequence over { a <= d }: v_a = 0 on S, otherwise
/// v_a = l_a - sum_{u<a} v_u k_{a-u}, with v_0 = 1 when 0 is outside S.
#[derive(Clone, Debug)]
pub struct VSequence {
    pub d: MultiIndex,
    pub skip: BTreeSet<MultiIndex>,
    /// Values v_a for a <= d in graded lexicographic order.
    pub values: Vec<(MultiIndex, Rat)>,
    /// All v_a >= 0.
    pub values_nonneg: bool,
    /// All residuals l_a - sum_{u<=a} v_u k_{a-u} >= 0.
    pub residuals_nonneg: bool,
    pub first_violation: Option<(MultiIndex, Rat)>,
}

pub fn greedy_v_sequence(
    k: &DiagonalSeries,
    l: &DiagonalSeries,
    d: &MultiIndex,
    skip: &BTreeSet<MultiIndex>,
) -> Result<VSequence, Error> {
    if k.vars() != l.vars() {
        return Err(Error::VariableCountMismatch {
            left: k.vars(),
            right: l.vars(),
        });
    }
    if d.vars() != k.vars() {
        return Err(Error::VariableCountMismatch {
            left: d.vars(),
            right: k.vars(),
        });
    }
    k.check_normalized_kernel()?;
    l.check_normalized_kernel()?;
    let below = indices_below(d);
    let mut values: Vec<(MultiIndex, Rat)> = Vec::with_capacity(below.len());
    let value_of = |values: &Vec<(MultiIndex, Rat)>, idx: &MultiIndex| -> Rat {
        values
            .iter()
            .find(|(a, _)| a == idx)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rat::zero)
    };
    let mut values_nonneg = true;
    let mut residuals_nonneg = true;
    let mut first_violation = None;
    for a in &below {
        let v = if skip.contains(a) {
            Rat::zero()
        } else if a.is_zero() {
            Rat::one()
        } else {
            let mut acc = l.coeff(a);
            for u in indices_below(a) {
                if &u == a {
                    continue;
                }
                let vu = value_of(&values, &u);
                if !vu.is_zero() {
                    acc -= vu * k.coeff(&a.checked_sub(&u).unwrap());
                }
            }
            acc
        };
        values.push((a.clone(), v));
    }
    for a in &below {
        let va = value_of(&values, a);
        if va.is_negative() && values_nonneg {
            values_nonneg = false;
            if first_violation.is_none() {
                first_violation = Some((a.clone(), va.clone()));
            }
        }
        let mut residual = l.coeff(a);
        for u in indices_below(a) {
            let vu = value_of(&values, &u);
            if !vu.is_zero() {
                residual -= vu * k.coeff(&a.checked_sub(&u).unwrap());
            }
        }
        if residual.is_negative() && residuals_nonneg {
            residuals_nonneg = false;
            if first_violation.is_none() {
                first_violation = Some((a.clone(), residual));
            }
        }
    }
    Ok(VSequence {
        d: d.clone(),
        skip: skip.clone(),
        values,
        values_nonneg,
        residuals_nonneg,
        first_violation,
    })
}

/// One stage of a Schur-complement index chain.
#[derive(Clone, Debug)]
pub struct ChainStage {
    pub index: u32,
    /// Chain element after subtracting the quotient coefficient at `index`.
    pub series: DiagonalSeries,
    /// Nonnegativity of (stage)/k up to the truncation; only meaningful for
    /// strictly increasing chains, suppressed otherwise.
    pub quotient_verdict: Option<NonnegVerdict>,
}

#[derive(Clone, Debug)]
pub struct EllChain {
    pub stages: Vec<ChainStage>,
}

impl EllChain {
    pub fn last_series(&self) -> Option<&DiagonalSeries> {
        self.stages.last().map(|s| &s.series)
    }

    /// Pass iff every stage's quotient is coefficientwise nonnegative.
    /// None when the verdicts were suppressed (non-increasing chain).
    pub fn all_nonnegative(&self) -> Option<bool> {
        let mut all = true;
        for stage in &self.stages {
            match &stage.quotient_verdict {
                Some(v) => all &= v.ok,
                None => return None,
            }
        }
        Some(all)
    }
}

/// Iterated chain: each step subtracts ((current)/k)_m x^m. The positivity
/// verdicts are emitted only when the index sequence is strictly
/// increasing; the recursion itself runs for any sequence of distinct
/// indices.
pub fn ell_chain(
    l: &DiagonalSeries,
    k: &DiagonalSeries,
    indices: &[u32],
) -> Result<EllChain, Error> {
    if l.vars() != 1 || k.vars() != 1 {
        return Err(Error::InvalidParameter(
            "index chains are one-variable only".into(),
        ));
    }
    k.check_normalized_kernel()?;
    let mut seen = BTreeSet::new();
    for &m in indices {
        if !seen.insert(m) {
            return Err(Error::RepeatedChainIndex(m));
        }
    }
    let increasing = indices.windows(2).all(|w| w[0] < w[1]);
    let k_inv = k.reciprocal()?;
    let mut current = l.truncate_to(l.truncation().min(k.truncation()));
    let mut stages = Vec::with_capacity(indices.len());
    for &m in indices {
        let quotient = current.mul(&k_inv)?;
        let coeff = quotient.coeff_1d(m);
        let monomial =
            DiagonalSeries::monomial(1, current.truncation(), MultiIndex::scalar(m), coeff);
        current = current.sub(&monomial)?;
        let quotient_after = current.mul(&k_inv)?;
        let quotient_verdict = if increasing {
            Some(NonnegVerdict::of(&quotient_after))
        } else {
            None
        };
        stages.push(ChainStage {
            index: m,
            series: current.clone(),
            quotient_verdict,
        });
    }
    Ok(EllChain { stages })
}

/// Unique r > 0 with sum_n theta_n r^{2n} = 1 for a one-variable truncated
/// certificate, by doubling then bisection to the absolute tolerance.
/// Returns +infinity when the truncated sum never reaches 1.
pub fn omega1_radius(theta: &DiagonalSeries, tol: f64) -> Result<f64, Error> {
    if theta.vars() != 1 {
        return Err(Error::InvalidParameter(
            "radius takes a one-variable radial section".into(),
        ));
    }
    if let Some((index, _)) = theta.first_negative() {
        return Err(Error::NegativeCoefficient { index });
    }
    if !theta.constant_term().is_zero() {
        return Err(Error::InvalidParameter(
            "certificate must vanish at 0".into(),
        ));
    }
    if theta.is_zero() {
        return Err(Error::ZeroSeries);
    }
    let coeffs: Vec<(u32, f64)> = (1..=theta.truncation())
        .map(|n| (n, rat_to_f64(&theta.coeff_1d(n))))
        .collect();
    let eval = |r: f64| -> f64 {
        let x = r * r;
        let mut acc = 0.0;
        let mut pow = 1.0;
        let mut last = 0u32;
        for &(n, c) in &coeffs {
            for _ in last..n {
                pow *= x;
            }
            last = n;
            acc += c * pow;
        }
        acc
    };
    let mut hi = 1.0f64;
    while eval(hi) < 1.0 {
        hi *= 2.0;
        if hi > 1e30 {
            return Ok(f64::INFINITY);
        }
    }
    let mut lo = 0.0f64;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if eval(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Default absolute tolerance for [`omega1_radius`].
pub const RADIUS_TOL: f64 = 1e-12;

/// One stage of the diagonal-growth audit along the coefficient
/// Schur-complement chain.
#[derive(Clone, Debug)]
pub struct NecessityAuditRow {
    pub stage: usize,
    /// Chain diagonal entry at this stage (exact).
    pub stage_diag: Rat,
    /// Previous stage's pivot diagonal entry.
    pub prev_diag: Rat,
    /// stage_diag >= 2 prev_diag: the doubling forced on certified pairs
    /// with the squared-geometric base kernel.
    pub doubling_ok: bool,
    /// Raw-coefficient consequence l_{nn} >= 2^n l_{00}.
    pub geometric_ok: bool,
}

#[derive(Clone, Debug)]
pub struct NecessityAudit {
    pub rows: Vec<NecessityAuditRow>,
    /// Pivot values used by the chain, all nonzero (regular to this order).
    pub pivots: Vec<Rat>,
    pub all_pass: bool,
}

impl NecessityAudit {
    /// First stage where either inequality fails.
    pub fn first_failure(&self) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| !r.doubling_ok || !r.geometric_ok)
            .map(|r| r.stage)
    }
}

/// Audit the stage diagonals of the coefficient Schur-complement chain of a
/// holomorphic kernel against the growth the squared-geometric base kernel
/// forces: stage diagonals must at least double and the raw diagonal must
/// dominate 2^n l_00. A failed row refutes the certificate hypothesis for
/// kernels whose diagonal grows slower than 2^n. Regularity (nonzero
/// pivots) is checked exactly up to the requested order.
pub fn bergman_necessity_audit(
    l: &crate::series::BivariateSeries,
    n_max: usize,
) -> Result<NecessityAudit, Error> {
    let chain = crate::schurtools::coeff_schur_chain(l, n_max)?;
    let two = Rat::from_integer(2.into());
    let l00 = l.get(0, 0).re.clone();
    let mut rows = Vec::with_capacity(n_max);
    let mut power = Rat::one();
    for n in 1..=n_max {
        power *= &two;
        let stage_diag = chain.stage(n).get(n as u32, n as u32).re.clone();
        let prev_diag = chain
            .stage(n - 1)
            .get(n as u32 - 1, n as u32 - 1)
            .re
            .clone();
        let doubling_ok = stage_diag >= &two * &prev_diag;
        let geometric_ok = l.get(n as u32, n as u32).re >= &power * &l00;
        rows.push(NecessityAuditRow {
            stage: n,
            stage_diag,
            prev_diag,
            doubling_ok,
            geometric_ok,
        });
    }
    let all_pass = rows.iter().all(|r| r.doubling_ok && r.geometric_ok);
    Ok(NecessityAudit {
        rows,
        pivots: chain.pivots,
        all_pass,
    })
}
