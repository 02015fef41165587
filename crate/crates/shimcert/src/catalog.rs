//! Constructors for the kernels used as ground-truth fixtures: Szego,
//! Bergman, weighted polydisc and ball powers, the degree-three rational
//! counterexample kernel, the non-diagonal one-parameter family, and the
//! three-point finite fixture.
//!
//! Every handle couples a pointwise float evaluator with an exact truncated
//! series form where one exists; the rank-one family handles are float-only
//! (their normalization is irrational) and are certified by Gram sampling.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::interpolation::FiniteKernel;
use crate::linalg::HermitianExact;
use crate::scalar::{gauss_real, rat_int, Rat, C64};
use crate::series::{indices_up_to, BivariateSeries, DiagonalSeries};

/// Pointwise kernel evaluator in g complex variables.
pub trait KernelEval: Send + Sync {
    fn vars(&self) -> usize;
    fn eval(&self, z: &[C64], w: &[C64]) -> C64;
}

struct FnKernel<F> {
    vars: usize,
    f: F,
}

impl<F: Fn(&[C64], &[C64]) -> C64 + Send + Sync> KernelEval for FnKernel<F> {
    fn vars(&self) -> usize {
        self.vars
    }

    fn eval(&self, z: &[C64], w: &[C64]) -> C64 {
        (self.f)(z, w)
    }
}

/// Wrap a closure as a kernel evaluator.
pub fn fn_kernel<F>(vars: usize, f: F) -> Arc<dyn KernelEval>
where
    F: Fn(&[C64], &[C64]) -> C64 + Send + Sync + 'static,
{
    Arc::new(FnKernel { vars, f })
}

/// A catalog kernel: named evaluator plus optional exact series forms.
#[derive(Clone)]
pub struct KernelHandle {
    name: String,
    vars: usize,
    eval: Arc<dyn Fn(&[C64], &[C64]) -> C64 + Send + Sync>,
    diagonal: Option<Arc<dyn Fn(u32) -> DiagonalSeries + Send + Sync>>,
    bivariate: Option<Arc<dyn Fn(u32) -> Result<BivariateSeries, Error> + Send + Sync>>,
}

impl KernelEval for KernelHandle {
    fn vars(&self) -> usize {
        self.vars
    }

    fn eval(&self, z: &[C64], w: &[C64]) -> C64 {
        (self.eval)(z, w)
    }
}

impl KernelHandle {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Exact diagonal series at the requested truncation, when the kernel
    /// has one.
    pub fn diagonal_series(&self, trunc: u32) -> Option<DiagonalSeries> {
        self.diagonal.as_ref().map(|f| f(trunc))
    }

    /// Exact bivariate coefficient matrix at the requested truncation.
    pub fn bivariate_series(&self, trunc: u32) -> Option<Result<BivariateSeries, Error>> {
        if let Some(f) = &self.bivariate {
            return Some(f(trunc));
        }
        // Diagonal kernels embed on the coefficient-matrix diagonal.
        self.diagonal
            .as_ref()
            .map(|f| BivariateSeries::from_diagonal(&f(trunc)))
    }

    pub fn as_eval(self: &Arc<Self>) -> Arc<dyn KernelEval> {
        self.clone()
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn inner(z: &[C64], w: &[C64]) -> C64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

/// Szego kernel 1/(1 - z wbar): coefficients all 1.
pub fn szego() -> KernelHandle {
    geometric(Rat::one()).expect("rate 1 is valid")
}

/// Bergman kernel 1/(1 - z wbar)^2: coefficients n + 1.
pub fn bergman() -> KernelHandle {
    KernelHandle {
        name: "bergman".into(),
        vars: 1,
        eval: Arc::new(|z, w| {
            let x = z[0] * w[0].conj();
            let d = C64::new(1.0, 0.0) - x;
            1.0 / (d * d)
        }),
        diagonal: Some(Arc::new(|trunc| {
            let coeffs: Vec<Rat> = (0..=trunc).map(|n| rat_int(n as i64 + 1)).collect();
            DiagonalSeries::from_coeffs_1d(trunc, &coeffs)
        })),
        bivariate: None,
    }
}

/// Geometric kernel 1/(1 - c z wbar) with rational rate c > 0:
/// coefficients c^n.
pub fn geometric(rate: Rat) -> Result<KernelHandle, Error> {
    use num_traits::Signed;
    if !rate.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "geometric rate {rate} must be positive"
        )));
    }
    let rate_f = crate::scalar::rat_to_f64(&rate);
    let rate_clone = rate.clone();
    Ok(KernelHandle {
        name: format!("geometric({rate})"),
        vars: 1,
        eval: Arc::new(move |z, w| {
            let x = z[0] * w[0].conj();
            1.0 / (C64::new(1.0, 0.0) - x * rate_f)
        }),
        diagonal: Some(Arc::new(move |trunc| {
            let mut c = Rat::one();
            let coeffs: Vec<Rat> = (0..=trunc)
                .map(|_| {
                    let v = c.clone();
                    c *= &rate_clone;
                    v
                })
                .collect();
            DiagonalSeries::from_coeffs_1d(trunc, &coeffs)
        })),
        bivariate: None,
    })
}

/// Weighted polydisc kernel prod_i 1/(1 - z_i wbar_i)^{p_i}: coefficient at
/// a is the product of binomial weights.
pub fn polydisc_weights(p: &[u32]) -> Result<KernelHandle, Error> {
    if p.is_empty() || p.iter().any(|&w| w == 0) {
        return Err(Error::InvalidParameter(
            "polydisc weights must be positive".into(),
        ));
    }
    let vars = p.len();
    let weights = p.to_vec();
    let weights_eval = weights.clone();
    Ok(KernelHandle {
        name: format!("polydisc{weights:?}"),
        vars,
        eval: Arc::new(move |z, w| {
            let mut acc = C64::new(1.0, 0.0);
            for (i, &pw) in weights_eval.iter().enumerate() {
                let d = C64::new(1.0, 0.0) - z[i] * w[i].conj();
                acc /= d.powu(pw);
            }
            acc
        }),
        diagonal: Some(Arc::new(move |trunc| {
            let mut s = DiagonalSeries::zero(vars, trunc);
            for a in indices_up_to(vars, trunc) {
                let mut num = BigInt::one();
                for (j, &pj) in weights.iter().enumerate() {
                    num *= binomial(a.get(j) as u64 + pj as u64 - 1, pj as u64 - 1);
                }
                s.set_coeff(a, Rat::from_integer(num));
            }
            s
        })),
        bivariate: None,
    })
}

/// Ball power kernel 1/(1 - <z, w>)^alpha in g variables: coefficient at a
/// is binom(|a|+alpha-1, alpha-1) |a|!/a!.
pub fn ball_power(alpha: u32, vars: usize) -> Result<KernelHandle, Error> {
    if alpha == 0 || vars == 0 {
        return Err(Error::InvalidParameter(
            "ball power needs alpha, g >= 1".into(),
        ));
    }
    Ok(KernelHandle {
        name: format!("ball_power({alpha},{vars})"),
        vars,
        eval: Arc::new(move |z, w| {
            let d = C64::new(1.0, 0.0) - inner(z, w);
            1.0 / d.powu(alpha)
        }),
        diagonal: Some(Arc::new(move |trunc| {
            let mut s = DiagonalSeries::zero(vars, trunc);
            for a in indices_up_to(vars, trunc) {
                let m = a.degree() as u64;
                let mut num = binomial(m + alpha as u64 - 1, alpha as u64 - 1);
                // multinomial |a|! / (a_1! ... a_g!)
                let mut fact = BigInt::one();
                for i in 1..=m {
                    fact *= BigInt::from(i);
                }
                num *= fact;
                let mut den = BigInt::one();
                for j in 0..vars {
                    for i in 1..=(a.get(j) as u64) {
                        den *= BigInt::from(i);
                    }
                }
                s.set_coeff(a, Rat::new(num, den));
            }
            s
        })),
        bivariate: None,
    })
}

/// The rational kernel 1/((1 + x + 4x^2)(1 - 3x)) whose coefficients start
/// 1, 2, 3, 16 and whose master certificate is 2x + 10x^3 + ...
pub fn prop65_kernel() -> KernelHandle {
    KernelHandle {
        name: "prop65".into(),
        vars: 1,
        eval: Arc::new(|z, w| {
            let x = z[0] * w[0].conj();
            let one = C64::new(1.0, 0.0);
            1.0 / ((one + x + 4.0 * x * x) * (one - 3.0 * x))
        }),
        diagonal: Some(Arc::new(|trunc| {
            // (1 + x + 4x^2)(1 - 3x) = 1 - 2x + x^2 - 12x^3
            DiagonalSeries::from_coeffs_1d(
                trunc,
                &[rat_int(1), rat_int(-2), rat_int(1), rat_int(-12)],
            )
            .reciprocal()
            .expect("constant term 1")
        })),
        bivariate: None,
    }
}

/// Exact coefficient matrix of P(z, w) = z wbar [3 - 2z - 2wbar + 2 z wbar]
/// + 8 (z wbar)^3 / (1 - z wbar).
pub fn lastex_p_series(trunc: u32) -> Result<BivariateSeries, Error> {
    if trunc < 3 {
        return Err(Error::InvalidParameter(
            "the rank-one tail needs truncation >= 3".into(),
        ));
    }
    let mut p = BivariateSeries::zero(trunc);
    p.set(1, 1, gauss_real(rat_int(3)));
    p.set(2, 1, gauss_real(rat_int(-2)));
    p.set(1, 2, gauss_real(rat_int(-2)));
    p.set(2, 2, gauss_real(rat_int(2)));
    for m in 3..=trunc {
        p.set(m, m, gauss_real(rat_int(8)));
    }
    Ok(p)
}

/// The non-diagonal certificate kernel s = 1/(1 - P).
pub fn lastex_kernel() -> KernelHandle {
    KernelHandle {
        name: "lastex".into(),
        vars: 1,
        eval: Arc::new(|z, w| {
            let x = z[0] * w[0].conj();
            let one = C64::new(1.0, 0.0);
            let p = x * (3.0 * one - 2.0 * z[0] - 2.0 * w[0].conj() + 2.0 * x)
                + 8.0 * x.powu(3) / (one - x);
            1.0 / (one - p)
        }),
        diagonal: None,
        bivariate: Some(Arc::new(|trunc| {
            let p = lastex_p_series(trunc)?;
            BivariateSeries::one(trunc).sub(&p).reciprocal()
        })),
    }
}

/// Rank-one certificate family for the Bergman kernel, indexed by
/// 0 < |lambda| < 1: the multiplier g, the kernels s = 1/(1 - g gbar) and
/// h with (g(z) conj(g(w)) - 1) b(z,w) + 1 = h(z,w), and the domain test
/// |g(z)| < 1.
#[derive(Clone, Copy, Debug)]
pub struct GLambda {
    lambda: C64,
}

impl GLambda {
    pub fn new(lambda: C64) -> Result<Self, Error> {
        let r = lambda.norm();
        if r <= 0.0 || r >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda must satisfy 0 < |lambda| < 1, got |lambda| = {r}"
            )));
        }
        Ok(GLambda { lambda })
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    /// g(z) = (2 z lbar - (z lbar)^2) / sqrt(2 |l|^2 - |l|^4).
    pub fn g(&self, z: C64) -> C64 {
        let zl = z * self.lambda.conj();
        let r2 = self.lambda.norm_sqr();
        (2.0 * zl - zl * zl) / (2.0 * r2 - r2 * r2).sqrt()
    }

    /// Membership in the domain where g is a contraction.
    pub fn in_domain(&self, z: C64) -> bool {
        self.g(z).norm() < 1.0
    }

    pub fn s_eval(&self, z: C64, w: C64) -> C64 {
        1.0 / (C64::new(1.0, 0.0) - self.g(z) * self.g(w).conj())
    }

    /// h(z, w) = 2 z wbar (z - l)(conj(w - l)) / ((1 - z wbar)^2 (2 - |l|^2)).
    pub fn h_eval(&self, z: C64, w: C64) -> C64 {
        let x = z * w.conj();
        let d = C64::new(1.0, 0.0) - x;
        2.0 * x * (z - self.lambda) * (w - self.lambda).conj()
            / (d * d * (2.0 - self.lambda.norm_sqr()))
    }

    pub fn s_handle(&self) -> KernelHandle {
        let this = *self;
        KernelHandle {
            name: format!("s_lambda({})", self.lambda),
            vars: 1,
            eval: Arc::new(move |z, w| this.s_eval(z[0], w[0])),
            diagonal: None,
            bivariate: None,
        }
    }

    pub fn h_handle(&self) -> KernelHandle {
        let this = *self;
        KernelHandle {
            name: format!("h_lambda({})", self.lambda),
            vars: 1,
            eval: Arc::new(move |z, w| this.h_eval(z[0], w[0])),
            diagonal: None,
            bivariate: None,
        }
    }
}

/// The three-point fixture: positive definite K with a zero at (1, 3),
/// diagonal-only L, and the 0/1 certificate patterns p[t].
pub fn finite_example32() -> (FiniteKernel, FiniteKernel, Vec<HermitianExact>) {
    let k = FiniteKernel::try_new(HermitianExact::from_real_rows(&[
        vec![1, 1, 0],
        vec![1, 2, 1],
        vec![0, 1, 2],
    ]))
    .expect("fixture kernel is PSD");
    let l = FiniteKernel::try_new(HermitianExact::from_real_rows(&[
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![0, 0, 1],
    ]))
    .expect("identity is PSD");
    let patterns = (0..3)
        .map(|t| {
            HermitianExact::from_upper(3, |i, j| {
                if i == t || j == t {
                    gauss_real(Rat::zero())
                } else {
                    gauss_real(Rat::one())
                }
            })
        })
        .collect();
    (k, l, patterns)
}
