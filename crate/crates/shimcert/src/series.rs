//! Multi-index bookkeeping and truncated formal power series arithmetic.
//!
//! `DiagonalSeries` is a truncated series sum f_a x^a with exact rational
//! coefficients, stored sparsely (missing entries are zero, zero entries are
//! never stored, no stored index exceeds the truncation degree).
//! `BivariateSeries` is the dense coefficient matrix (f_ij) of a one-variable
//! series sum f_ij z^i wbar^j over Gaussian rationals.
//!
//! All binary operations truncate to the minimum of the operands'
//! truncation degrees and drop higher-order terms silently.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::scalar::{gauss_conj, gauss_real, gauss_to_c64, rat_to_f64, GaussRat, Rat, C64};

/// Exponent tuple in N^g.
///
/// `Ord` is the graded lexicographic order: total degree first, then the
/// leftmost differing coordinate. The coordinatewise partial order is
/// exposed separately as [`MultiIndex::component_le`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(
            !exponents.is_empty(),
            "multi-index needs at least one variable"
        );
        MultiIndex(exponents)
    }

    pub fn zero(vars: usize) -> Self {
        MultiIndex::new(vec![0; vars])
    }

    /// Standard unit vector e_j (0-based coordinate).
    pub fn unit(vars: usize, j: usize) -> Self {
        let mut e = vec![0; vars];
        e[j] = 1;
        MultiIndex::new(e)
    }

    /// One-variable index n.
    pub fn scalar(n: u32) -> Self {
        MultiIndex::new(vec![n])
    }

    pub fn vars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// Total degree |a|.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Coordinatewise partial order a <= b.
    pub fn component_le(&self, other: &MultiIndex) -> bool {
        self.vars() == other.vars() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.vars(), other.vars());
        MultiIndex::new(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// a - b when b <= a componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.component_le(self) {
            return None;
        }
        Some(MultiIndex::new(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(
            self.vars(),
            other.vars(),
            "comparing indices of different arity"
        );
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// All indices in N^vars with |a| <= degree, in graded lexicographic order.
pub fn indices_up_to(vars: usize, degree: u32) -> Vec<MultiIndex> {
    fn fill(vars: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() == vars {
            out.push(MultiIndex::new(prefix.clone()));
            return;
        }
        for e in 0..=degree {
            prefix.push(e);
            fill(vars, degree - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(vars, degree, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All indices with a <= bound componentwise, in graded lexicographic order.
pub fn indices_below(bound: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::zero(bound.vars())];
    for j in 0..bound.vars() {
        let mut next = Vec::with_capacity(out.len() * (bound.get(j) as usize + 1));
        for idx in &out {
            for e in 0..=bound.get(j) {
                let mut v = idx.0.clone();
                v[j] = e;
                next.push(MultiIndex::new(v));
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Truncated formal power series sum f_a x^a with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagonalSeries {
    vars: usize,
    trunc: u32,
    coeffs: BTreeMap<MultiIndex, Rat>,
}

impl DiagonalSeries {
    pub fn zero(vars: usize, trunc: u32) -> Self {
        assert!(vars >= 1);
        DiagonalSeries {
            vars,
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(vars: usize, trunc: u32) -> Self {
        let mut s = Self::zero(vars, trunc);
        s.set_coeff(MultiIndex::zero(vars), Rat::one());
        s
    }

    pub fn monomial(vars: usize, trunc: u32, index: MultiIndex, value: Rat) -> Self {
        let mut s = Self::zero(vars, trunc);
        s.set_coeff(index, value);
        s
    }

    /// One-variable series from the list of coefficients f_0, f_1, ...
    pub fn from_coeffs_1d(trunc: u32, coeffs: &[Rat]) -> Self {
        let mut s = Self::zero(1, trunc);
        for (n, c) in coeffs.iter().enumerate() {
            s.set_coeff(MultiIndex::scalar(n as u32), c.clone());
        }
        s
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    pub fn coeff(&self, index: &MultiIndex) -> Rat {
        self.coeffs.get(index).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff_1d(&self, n: u32) -> Rat {
        debug_assert_eq!(self.vars, 1);
        self.coeff(&MultiIndex::scalar(n))
    }

    /// Insert a coefficient; entries beyond the truncation degree are
    /// dropped and zero values are never stored.
    pub fn set_coeff(&mut self, index: MultiIndex, value: Rat) {
        assert_eq!(index.vars(), self.vars, "index arity mismatch");
        if index.degree() > self.trunc {
            return;
        }
        if value.is_zero() {
            self.coeffs.remove(&index);
        } else {
            self.coeffs.insert(index, value);
        }
    }

    /// Stored (nonzero) coefficients in graded lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Rat)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&MultiIndex::zero(self.vars))
    }

    /// Same series viewed at a lower truncation degree.
    pub fn truncate_to(&self, trunc: u32) -> DiagonalSeries {
        let mut out = DiagonalSeries::zero(self.vars, trunc.min(self.trunc));
        for (a, c) in &self.coeffs {
            out.set_coeff(a.clone(), c.clone());
        }
        out
    }

    fn check_same_vars(&self, other: &DiagonalSeries) -> Result<(), Error> {
        if self.vars != other.vars {
            return Err(Error::VariableCountMismatch {
                left: self.vars,
                right: other.vars,
            });
        }
        Ok(())
    }

    /// Coefficientwise sum at the minimum truncation.
    pub fn add(&self, other: &DiagonalSeries) -> Result<DiagonalSeries, Error> {
        self.check_same_vars(other)?;
        let mut out = self.truncate_to(self.trunc.min(other.trunc));
        for (a, c) in &other.coeffs {
            out.set_coeff(a.clone(), out.coeff(a) + c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiagonalSeries) -> Result<DiagonalSeries, Error> {
        self.check_same_vars(other)?;
        let mut out = self.truncate_to(self.trunc.min(other.trunc));
        for (a, c) in &other.coeffs {
            out.set_coeff(a.clone(), out.coeff(a) - c);
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rat) -> DiagonalSeries {
        let mut out = DiagonalSeries::zero(self.vars, self.trunc);
        for (a, c) in &self.coeffs {
            out.set_coeff(a.clone(), c * factor);
        }
        out
    }

    /// Truncated Cauchy product; indices beyond the truncation are dropped.
    pub fn mul(&self, other: &DiagonalSeries) -> Result<DiagonalSeries, Error> {
        self.check_same_vars(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = DiagonalSeries::zero(self.vars, trunc);
        for (a, ca) in &self.coeffs {
            if a.degree() > trunc {
                continue;
            }
            for (b, cb) in &other.coeffs {
                if a.degree() + b.degree() > trunc {
                    continue;
                }
                let idx = a.plus(b);
                let val = out.coeff(&idx) + ca * cb;
                out.set_coeff(idx, val);
            }
        }
        Ok(out)
    }

    /// Formal reciprocal r with self * r = 1 up to the truncation degree,
    /// by the triangular recursion r_a = (delta_{a,0} - sum_{0<u<=a} f_u r_{a-u}) / f_0.
    pub fn reciprocal(&self) -> Result<DiagonalSeries, Error> {
        let f0 = self.constant_term();
        if f0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let mut out = DiagonalSeries::zero(self.vars, self.trunc);
        for a in indices_up_to(self.vars, self.trunc) {
            let mut acc = if a.is_zero() { Rat::one() } else { Rat::zero() };
            for (u, fu) in &self.coeffs {
                if u.is_zero() || !u.component_le(&a) {
                    continue;
                }
                if let Some(rest) = a.checked_sub(u) {
                    let r = out.coeff(&rest);
                    if !r.is_zero() {
                        acc -= fu * &r;
                    }
                }
            }
            out.set_coeff(a, acc / &f0);
        }
        Ok(out)
    }

    /// First (graded lexicographic) strictly negative coefficient, if any.
    pub fn first_negative(&self) -> Option<(MultiIndex, Rat)> {
        self.coeffs
            .iter()
            .find(|(_, c)| c.is_negative())
            .map(|(a, c)| (a.clone(), c.clone()))
    }

    /// Check the normalized-kernel refinement: constant term 1 and every
    /// coefficient up to the truncation strictly positive.
    pub fn check_normalized_kernel(&self) -> Result<(), Error> {
        if !self.constant_term().is_one() {
            return Err(Error::NotNormalized(format!(
                "constant term is {}, want 1",
                self.constant_term()
            )));
        }
        for a in indices_up_to(self.vars, self.trunc) {
            if !self.coeff(&a).is_positive() {
                return Err(Error::NotNormalized(format!(
                    "coefficient at {a} is not positive"
                )));
            }
        }
        Ok(())
    }

    /// Evaluate sum f_a x^a at a point x in C^g.
    pub fn eval_at_x(&self, x: &[C64]) -> C64 {
        assert_eq!(x.len(), self.vars);
        let mut acc = C64::new(0.0, 0.0);
        for (a, c) in &self.coeffs {
            let mut term = C64::new(rat_to_f64(c), 0.0);
            for (j, &e) in a.exponents().iter().enumerate() {
                term *= x[j].powu(e);
            }
            acc += term;
        }
        acc
    }

    /// Kernel evaluation f(z, w) = sum f_a (z wbar)^a.
    pub fn eval_kernel(&self, z: &[C64], w: &[C64]) -> C64 {
        let x: Vec<C64> = z.iter().zip(w).map(|(zi, wi)| zi * wi.conj()).collect();
        self.eval_at_x(&x)
    }

    /// One-variable section along coordinate axis j: n maps to f_{n e_j}.
    pub fn axis_section(&self, j: usize) -> DiagonalSeries {
        assert!(j < self.vars);
        let mut out = DiagonalSeries::zero(1, self.trunc);
        for n in 0..=self.trunc {
            let idx = MultiIndex::new((0..self.vars).map(|i| if i == j { n } else { 0 }).collect());
            out.set_coeff(MultiIndex::scalar(n), self.coeff(&idx));
        }
        out
    }
}

/// Dense truncated coefficient matrix (f_ij) of sum f_ij z^i wbar^j.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BivariateSeries {
    trunc: u32,
    coeffs: Vec<GaussRat>,
}

impl BivariateSeries {
    pub fn zero(trunc: u32) -> Self {
        let n = (trunc as usize + 1) * (trunc as usize + 1);
        BivariateSeries {
            trunc,
            coeffs: vec![GaussRat::zero(); n],
        }
    }

    pub fn one(trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        s.set(0, 0, gauss_real(Rat::one()));
        s
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    fn pos(&self, i: u32, j: u32) -> usize {
        debug_assert!(i <= self.trunc && j <= self.trunc);
        (i as usize) * (self.trunc as usize + 1) + j as usize
    }

    pub fn get(&self, i: u32, j: u32) -> &GaussRat {
        &self.coeffs[self.pos(i, j)]
    }

    pub fn set(&mut self, i: u32, j: u32, value: GaussRat) {
        let p = self.pos(i, j);
        self.coeffs[p] = value;
    }

    /// Embed a one-variable diagonal series: d_n lands at (n, n).
    pub fn from_diagonal(d: &DiagonalSeries) -> Result<BivariateSeries, Error> {
        if d.vars() != 1 {
            return Err(Error::VariableCountMismatch {
                left: d.vars(),
                right: 1,
            });
        }
        let mut out = BivariateSeries::zero(d.truncation());
        for (a, c) in d.iter() {
            let n = a.get(0);
            out.set(n, n, gauss_real(c.clone()));
        }
        Ok(out)
    }

    pub fn truncate_to(&self, trunc: u32) -> BivariateSeries {
        let t = trunc.min(self.trunc);
        let mut out = BivariateSeries::zero(t);
        for i in 0..=t {
            for j in 0..=t {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn add(&self, other: &BivariateSeries) -> BivariateSeries {
        let t = self.trunc.min(other.trunc);
        let mut out = BivariateSeries::zero(t);
        for i in 0..=t {
            for j in 0..=t {
                out.set(i, j, self.get(i, j) + other.get(i, j));
            }
        }
        out
    }

    pub fn sub(&self, other: &BivariateSeries) -> BivariateSeries {
        let t = self.trunc.min(other.trunc);
        let mut out = BivariateSeries::zero(t);
        for i in 0..=t {
            for j in 0..=t {
                out.set(i, j, self.get(i, j) - other.get(i, j));
            }
        }
        out
    }

    /// Two-dimensional convolution truncated at the minimum degree in each
    /// variable.
    pub fn mul(&self, other: &BivariateSeries) -> BivariateSeries {
        let t = self.trunc.min(other.trunc);
        let mut out = BivariateSeries::zero(t);
        for i in 0..=t {
            for j in 0..=t {
                let mut acc = GaussRat::zero();
                for p in 0..=i {
                    for q in 0..=j {
                        let a = self.get(p, q);
                        if a.is_zero() {
                            continue;
                        }
                        let b = other.get(i - p, j - q);
                        if b.is_zero() {
                            continue;
                        }
                        acc += a * b;
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Formal reciprocal with self * r = 1 up to the truncation degree.
    pub fn reciprocal(&self) -> Result<BivariateSeries, Error> {
        let f00 = self.get(0, 0).clone();
        if f00.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let t = self.trunc;
        let mut out = BivariateSeries::zero(t);
        // Solve by increasing total degree i + j: each referenced entry has
        // strictly smaller total degree.
        for deg in 0..=(2 * t) {
            for i in deg.saturating_sub(t)..=deg.min(t) {
                let j = deg - i;
                let mut acc = if deg == 0 {
                    gauss_real(Rat::one())
                } else {
                    GaussRat::zero()
                };
                for p in 0..=i {
                    for q in 0..=j {
                        if p == 0 && q == 0 {
                            continue;
                        }
                        let f = self.get(p, q);
                        if f.is_zero() {
                            continue;
                        }
                        let r = out.get(i - p, j - q);
                        if r.is_zero() {
                            continue;
                        }
                        acc -= f * r;
                    }
                }
                out.set(i, j, acc / &f00);
            }
        }
        Ok(out)
    }

    /// Check the holomorphic-kernel refinement f_ji = conj(f_ij).
    pub fn require_hermitian(&self) -> Result<(), Error> {
        for i in 0..=self.trunc {
            for j in i..=self.trunc {
                if *self.get(j, i) != gauss_conj(self.get(i, j)) {
                    return Err(Error::NotHermitian {
                        row: j as usize,
                        col: i as usize,
                    });
                }
            }
        }
        Ok(())
    }

    /// Horner evaluation of the truncated series at (z, w).
    pub fn eval_f64(&self, z: C64, w: C64) -> C64 {
        let wb = w.conj();
        let mut acc = C64::new(0.0, 0.0);
        for i in (0..=self.trunc).rev() {
            let mut row = C64::new(0.0, 0.0);
            for j in (0..=self.trunc).rev() {
                row = row * wb + gauss_to_c64(self.get(i, j));
            }
            acc = acc * z + row;
        }
        acc
    }

    /// Exact Horner evaluation at Gaussian-rational points.
    pub fn eval_exact(&self, z: &GaussRat, w: &GaussRat) -> GaussRat {
        let wb = gauss_conj(w);
        let mut acc = GaussRat::zero();
        for i in (0..=self.trunc).rev() {
            let mut row = GaussRat::zero();
            for j in (0..=self.trunc).rev() {
                row = row * &wb + self.get(i, j);
            }
            acc = acc * z + row;
        }
        acc
    }
}

/// Finite downward-closed set of multi-indices containing 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoInvariantSet {
    vars: usize,
    indices: BTreeSet<MultiIndex>,
}

/// Check downward closure and membership of 0; on failure returns the
/// missing witness index.
pub fn validate_coinvariant(indices: &BTreeSet<MultiIndex>) -> Result<(), MultiIndex> {
    let vars = match indices.iter().next() {
        Some(first) => first.vars(),
        None => return Err(MultiIndex::scalar(0)),
    };
    let zero = MultiIndex::zero(vars);
    if !indices.contains(&zero) {
        return Err(zero);
    }
    for b in indices {
        for j in 0..vars {
            if b.get(j) > 0 {
                let pred = b.checked_sub(&MultiIndex::unit(vars, j)).unwrap();
                if !indices.contains(&pred) {
                    return Err(pred);
                }
            }
        }
    }
    Ok(())
}

impl CoInvariantSet {
    pub fn try_new<I: IntoIterator<Item = MultiIndex>>(indices: I) -> Result<Self, Error> {
        let set: BTreeSet<MultiIndex> = indices.into_iter().collect();
        if let Some(first) = set.iter().next() {
            let vars = first.vars();
            if set.iter().any(|a| a.vars() != vars) {
                return Err(Error::Parse(
                    "mixed index arities in co-invariant set".into(),
                ));
            }
        }
        match validate_coinvariant(&set) {
            Ok(()) => {
                let vars = set.iter().next().unwrap().vars();
                Ok(CoInvariantSet { vars, indices: set })
            }
            Err(witness) => Err(Error::InvalidCoInvariant { witness }),
        }
    }

    /// The full downward-closed set { |a| <= degree }.
    pub fn full(vars: usize, degree: u32) -> Self {
        CoInvariantSet {
            vars,
            indices: indices_up_to(vars, degree).into_iter().collect(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, a: &MultiIndex) -> bool {
        self.indices.contains(a)
    }

    /// Members in graded lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &MultiIndex> {
        self.indices.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<MultiIndex> {
        &self.indices
    }

    /// Adjoin one index; fails when the result is not co-invariant.
    pub fn with_index(&self, d: MultiIndex) -> Result<Self, Error> {
        let mut indices = self.indices.clone();
        indices.insert(d);
        CoInvariantSet::try_new(indices)
    }
}
