//! JSON file formats: kernel specs, exact Hermitian matrices, float
//! matrices, Pick problems and Caratheodory data, plus report shapes.
//!
//! Exact rationals travel as decimal strings "p/q" with q > 0 and the
//! fraction in lowest terms; float matrices use plain JSON numbers.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::{
    ball_power, bergman, geometric, lastex_kernel, polydisc_weights, prop65_kernel, szego, GLambda,
    KernelEval, KernelHandle,
};
use crate::certificates::{CertificateReport, FailedSeries};
use crate::error::Error;
use crate::interpolation::{CaratheodoryData, GaussMatrix, PickProblem};
use crate::linalg::{FloatMatrix, HermitianExact, PsdVerdict, PsdWitness};
use crate::scalar::{format_rat, parse_rat, GaussRat, C64};
use crate::series::{BivariateSeries, CoInvariantSet, DiagonalSeries, MultiIndex};

pub const KERNELSPEC_FORMAT: &str = "kernelspec/1";
pub const HMAT_FORMAT: &str = "hmat/1";
pub const CCDATA_FORMAT: &str = "ccdata/1";

fn parse_err<E: std::fmt::Display>(e: E) -> Error {
    Error::Parse(e.to_string())
}

// ---------------------------------------------------------------------------
// Kernel specs
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffEntry {
    Diagonal {
        index: Vec<u32>,
        value: String,
    },
    Bivariate {
        i: u32,
        j: u32,
        re: String,
        im: String,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelSpecFile {
    pub format: String,
    pub variables: usize,
    pub truncation_degree: u32,
    pub kind: String,
    #[serde(default)]
    pub coefficients: Vec<CoeffEntry>,
}

impl KernelSpecFile {
    pub fn from_diagonal(series: &DiagonalSeries) -> Self {
        let coefficients = series
            .iter()
            .map(|(a, c)| CoeffEntry::Diagonal {
                index: a.exponents().to_vec(),
                value: format_rat(c),
            })
            .collect();
        KernelSpecFile {
            format: KERNELSPEC_FORMAT.into(),
            variables: series.vars(),
            truncation_degree: series.truncation(),
            kind: "diagonal".into(),
            coefficients,
        }
    }

    pub fn from_bivariate(series: &BivariateSeries) -> Self {
        let mut coefficients = Vec::new();
        for i in 0..=series.truncation() {
            for j in 0..=series.truncation() {
                let v = series.get(i, j);
                if !num_traits::Zero::is_zero(v) {
                    coefficients.push(CoeffEntry::Bivariate {
                        i,
                        j,
                        re: format_rat(&v.re),
                        im: format_rat(&v.im),
                    });
                }
            }
        }
        KernelSpecFile {
            format: KERNELSPEC_FORMAT.into(),
            variables: 1,
            truncation_degree: series.truncation(),
            kind: "bivariate".into(),
            coefficients,
        }
    }

    fn check_format(&self) -> Result<(), Error> {
        if self.format != KERNELSPEC_FORMAT {
            return Err(Error::Parse(format!(
                "unsupported kernel-spec format {:?}",
                self.format
            )));
        }
        Ok(())
    }

    pub fn to_diagonal(&self) -> Result<DiagonalSeries, Error> {
        self.check_format()?;
        if self.kind != "diagonal" {
            return Err(Error::Parse(format!(
                "expected a diagonal kernel, got {:?}",
                self.kind
            )));
        }
        let mut out = DiagonalSeries::zero(self.variables.max(1), self.truncation_degree);
        for entry in &self.coefficients {
            match entry {
                CoeffEntry::Diagonal { index, value } => {
                    if index.len() != self.variables {
                        return Err(Error::Parse(format!(
                            "index arity {} does not match {} variables",
                            index.len(),
                            self.variables
                        )));
                    }
                    out.set_coeff(MultiIndex::new(index.clone()), parse_rat(value)?);
                }
                CoeffEntry::Bivariate { .. } => {
                    return Err(Error::Parse(
                        "bivariate entry in a diagonal kernel spec".into(),
                    ))
                }
            }
        }
        Ok(out)
    }

    pub fn to_bivariate(&self) -> Result<BivariateSeries, Error> {
        self.check_format()?;
        if self.kind != "bivariate" {
            return Err(Error::Parse(format!(
                "expected a bivariate kernel, got {:?}",
                self.kind
            )));
        }
        let mut out = BivariateSeries::zero(self.truncation_degree);
        for entry in &self.coefficients {
            match entry {
                CoeffEntry::Bivariate { i, j, re, im } => {
                    if *i > self.truncation_degree || *j > self.truncation_degree {
                        continue;
                    }
                    out.set(*i, *j, GaussRat::new(parse_rat(re)?, parse_rat(im)?));
                }
                CoeffEntry::Diagonal { .. } => {
                    return Err(Error::Parse(
                        "diagonal entry in a bivariate kernel spec".into(),
                    ))
                }
            }
        }
        Ok(out)
    }
}

pub fn kernel_spec_to_json(spec: &KernelSpecFile) -> String {
    serde_json::to_string_pretty(spec).expect("kernel specs serialize")
}

pub fn kernel_spec_from_json(text: &str) -> Result<KernelSpecFile, Error> {
    serde_json::from_str(text).map_err(parse_err)
}

// ---------------------------------------------------------------------------
// Exact Hermitian matrices
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HmatEntry {
    pub i: usize,
    pub j: usize,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HmatFile {
    pub format: String,
    pub n: usize,
    pub entries: Vec<HmatEntry>,
}

impl HmatFile {
    /// Store the upper triangle (i <= j) of a Hermitian matrix.
    pub fn from_matrix(h: &HermitianExact) -> Self {
        let mut entries = Vec::new();
        for i in 0..h.dim() {
            for j in i..h.dim() {
                let v = h.get(i, j);
                if !num_traits::Zero::is_zero(v) {
                    entries.push(HmatEntry {
                        i,
                        j,
                        re: format_rat(&v.re),
                        im: format_rat(&v.im),
                    });
                }
            }
        }
        HmatFile {
            format: HMAT_FORMAT.into(),
            n: h.dim(),
            entries,
        }
    }

    pub fn to_matrix(&self) -> Result<HermitianExact, Error> {
        if self.format != HMAT_FORMAT {
            return Err(Error::Parse(format!(
                "unsupported matrix format {:?}",
                self.format
            )));
        }
        let mut upper: BTreeMap<(usize, usize), GaussRat> = BTreeMap::new();
        for e in &self.entries {
            if e.i > e.j || e.j >= self.n {
                return Err(Error::Parse(format!(
                    "entry ({}, {}) outside the upper triangle of size {}",
                    e.i, e.j, self.n
                )));
            }
            upper.insert(
                (e.i, e.j),
                GaussRat::new(parse_rat(&e.re)?, parse_rat(&e.im)?),
            );
        }
        let h = HermitianExact::from_upper(self.n, |i, j| {
            upper
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(num_traits::Zero::zero)
        });
        // Diagonal entries must be real for a Hermitian matrix.
        for i in 0..self.n {
            if !num_traits::Zero::is_zero(&h.get(i, i).im) {
                return Err(Error::NotHermitian { row: i, col: i });
            }
        }
        Ok(h)
    }
}

// ---------------------------------------------------------------------------
// Float matrices (IEEE-754 doubles as JSON numbers)
// ---------------------------------------------------------------------------

/// Row-major complex float matrix: entries are [re, im] pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FloatMatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl FloatMatrixFile {
    pub fn from_matrix(m: &FloatMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.get(i, j);
                // Adding 0.0 collapses negative zeros for stable report bytes.
                entries.push([v.re + 0.0, v.im + 0.0]);
            }
        }
        FloatMatrixFile {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }

    pub fn to_matrix(&self) -> Result<FloatMatrix, Error> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Parse(format!(
                "{} entries for a {} x {} matrix",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        FloatMatrix::try_new(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .map(|[re, im]| C64::new(*re, *im))
                .collect(),
        )
    }
}

// ---------------------------------------------------------------------------
// Kernel references (catalog name + parameters, or a kernel-spec file)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KernelRef {
    Catalog(CatalogRef),
    File { file: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogRef {
    pub catalog: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<[f64; 2]>,
}

impl CatalogRef {
    pub fn plain(name: &str) -> Self {
        CatalogRef {
            catalog: name.into(),
            rate: None,
            weights: None,
            alpha: None,
            vars: None,
            lambda: None,
        }
    }
}

/// Build the named catalog kernel.
pub fn resolve_catalog(r: &CatalogRef) -> Result<KernelHandle, Error> {
    match r.catalog.as_str() {
        "szego" => Ok(szego()),
        "bergman" => Ok(bergman()),
        "geometric" => {
            let rate = r
                .rate
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("geometric needs a rate".into()))?;
            geometric(parse_rat(rate)?)
        }
        "polydisc" => {
            let weights = r
                .weights
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("polydisc needs weights".into()))?;
            polydisc_weights(weights)
        }
        "ball_power" => {
            let alpha = r
                .alpha
                .ok_or_else(|| Error::InvalidParameter("ball_power needs alpha".into()))?;
            let vars = r
                .vars
                .ok_or_else(|| Error::InvalidParameter("ball_power needs vars".into()))?;
            ball_power(alpha, vars)
        }
        "prop65" => Ok(prop65_kernel()),
        "lastex" => Ok(lastex_kernel()),
        "s_lambda" | "h_lambda" => {
            let [re, im] = r
                .lambda
                .ok_or_else(|| Error::InvalidParameter("lambda family needs lambda".into()))?;
            let gl = GLambda::new(C64::new(re, im))?;
            Ok(if r.catalog == "s_lambda" {
                gl.s_handle()
            } else {
                gl.h_handle()
            })
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown catalog kernel {other:?}"
        ))),
    }
}

/// Evaluator for a kernel spec: truncated series evaluation.
pub fn spec_to_eval(spec: &KernelSpecFile) -> Result<Arc<dyn KernelEval>, Error> {
    match spec.kind.as_str() {
        "diagonal" => {
            let series = spec.to_diagonal()?;
            let vars = series.vars();
            Ok(crate::catalog::fn_kernel(vars, move |z, w| {
                series.eval_kernel(z, w)
            }))
        }
        "bivariate" => {
            let series = spec.to_bivariate()?;
            Ok(crate::catalog::fn_kernel(1, move |z, w| {
                series.eval_f64(z[0], w[0])
            }))
        }
        other => Err(Error::Parse(format!("unknown kernel kind {other:?}"))),
    }
}

// ---------------------------------------------------------------------------
// Pick problems
// ---------------------------------------------------------------------------

/// Pick problem file: points as [re, im] pairs per coordinate, targets as
/// row-major complex matrices, kernels by reference.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PickProblemFile {
    pub points: Vec<Vec<[f64; 2]>>,
    pub targets: Vec<FloatMatrixFile>,
    pub kernel_k: KernelRef,
    pub kernel_l: KernelRef,
}

impl PickProblemFile {
    /// Assemble the problem, resolving kernel references through the given
    /// loader (the CLI reads referenced files from disk).
    pub fn to_problem<L>(&self, mut load: L) -> Result<PickProblem, Error>
    where
        L: FnMut(&str) -> Result<KernelSpecFile, Error>,
    {
        let mut resolve = |r: &KernelRef| -> Result<Arc<dyn KernelEval>, Error> {
            match r {
                KernelRef::Catalog(c) => Ok(Arc::new(resolve_catalog(c)?)),
                KernelRef::File { file } => spec_to_eval(&load(file)?),
            }
        };
        let kernel_k = resolve(&self.kernel_k)?;
        let kernel_l = resolve(&self.kernel_l)?;
        let points: Vec<Vec<C64>> = self
            .points
            .iter()
            .map(|p| p.iter().map(|[re, im]| C64::new(*re, *im)).collect())
            .collect();
        let targets: Vec<FloatMatrix> = self
            .targets
            .iter()
            .map(|t| t.to_matrix())
            .collect::<Result<_, _>>()?;
        PickProblem::try_new(points, targets, kernel_k, kernel_l)
    }
}

// ---------------------------------------------------------------------------
// Caratheodory data
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CcCoefficient {
    pub index: Vec<u32>,
    /// Row-major J x J matrix, entries as {"re": "p/q", "im": "p/q"}.
    pub matrix: Vec<Vec<CcEntry>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CcEntry {
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CcDataFile {
    pub format: String,
    pub variables: usize,
    pub block_size: usize,
    pub index_set: Vec<Vec<u32>>,
    pub coefficients: Vec<CcCoefficient>,
}

impl CcDataFile {
    pub fn from_data(data: &CaratheodoryData) -> Self {
        let block = data.block_size();
        let coefficients = data
            .coefficients()
            .iter()
            .map(|(a, m)| CcCoefficient {
                index: a.exponents().to_vec(),
                matrix: (0..block)
                    .map(|i| {
                        (0..block)
                            .map(|j| {
                                let v = &m[i * block + j];
                                CcEntry {
                                    re: format_rat(&v.re),
                                    im: format_rat(&v.im),
                                }
                            })
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        CcDataFile {
            format: CCDATA_FORMAT.into(),
            variables: data.index_set().vars(),
            block_size: block,
            index_set: data
                .index_set()
                .iter()
                .map(|a| a.exponents().to_vec())
                .collect(),
            coefficients,
        }
    }

    pub fn to_data(&self) -> Result<CaratheodoryData, Error> {
        if self.format != CCDATA_FORMAT {
            return Err(Error::Parse(format!(
                "unsupported data format {:?}",
                self.format
            )));
        }
        let f = CoInvariantSet::try_new(self.index_set.iter().map(|v| MultiIndex::new(v.clone())))?;
        let block = self.block_size;
        let mut coeffs: BTreeMap<MultiIndex, GaussMatrix> = BTreeMap::new();
        for c in &self.coefficients {
            if c.matrix.len() != block || c.matrix.iter().any(|row| row.len() != block) {
                return Err(Error::Parse(format!(
                    "coefficient at {:?} is not a {block} x {block} matrix",
                    c.index
                )));
            }
            let mut m = Vec::with_capacity(block * block);
            for row in &c.matrix {
                for e in row {
                    m.push(GaussRat::new(parse_rat(&e.re)?, parse_rat(&e.im)?));
                }
            }
            coeffs.insert(MultiIndex::new(c.index.clone()), m);
        }
        CaratheodoryData::try_new(f, block, coeffs)
    }
}

// ---------------------------------------------------------------------------
// Report shapes
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct FirstFailureJson {
    pub series: String,
    pub index: Vec<u32>,
    pub value: String,
}

/// Certificate report: verdict, truncation degree, first failure, and the
/// three factorization series in kernel-spec format.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateReportJson {
    pub verdict: String,
    pub truncation_degree: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<FirstFailureJson>,
    pub theta: KernelSpecFile,
    pub g: KernelSpecFile,
    pub h: KernelSpecFile,
    pub s: KernelSpecFile,
}

impl CertificateReportJson {
    pub fn from_report(report: &CertificateReport) -> Self {
        CertificateReportJson {
            verdict: if report.pass { "pass" } else { "fail" }.into(),
            truncation_degree: report.degree,
            first_failure: report.first_failure.as_ref().map(|(series, index, value)| {
                FirstFailureJson {
                    series: match series {
                        FailedSeries::G => "g".into(),
                        FailedSeries::H => "h".into(),
                    },
                    index: index.exponents().to_vec(),
                    value: format_rat(value),
                }
            }),
            theta: KernelSpecFile::from_diagonal(&report.theta),
            g: KernelSpecFile::from_diagonal(&report.g),
            h: KernelSpecFile::from_diagonal(&report.h),
            s: KernelSpecFile::from_diagonal(&report.s),
        }
    }
}

/// PSD verdict with the witness flattened to strings.
#[derive(Clone, Debug, Serialize)]
pub struct PsdVerdictJson {
    pub is_psd: bool,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_minor_indices: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_minor_det: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadratic_value: Option<String>,
}

impl PsdVerdictJson {
    pub fn from_verdict(v: &PsdVerdict) -> Self {
        let (witness, indices, det) = match &v.witness {
            None => (None, None, None),
            Some(PsdWitness::NegativeDiagonal { index, value }) => (
                Some(format!("negative diagonal at {index}: {value}")),
                None,
                None,
            ),
            Some(PsdWitness::ZeroDiagonalNonzeroRow { row, col, entry }) => (
                Some(format!(
                    "zero diagonal at {row} with nonzero entry at column {col}: {entry}"
                )),
                None,
                None,
            ),
            Some(PsdWitness::NegativeMinor { indices, minor_det }) => (
                Some(format!(
                    "negative principal minor {indices:?} with determinant {minor_det}"
                )),
                Some(indices.clone()),
                Some(format_rat(minor_det)),
            ),
        };
        PsdVerdictJson {
            is_psd: v.is_psd,
            mode: "exact".into(),
            witness,
            witness_minor_indices: indices,
            witness_minor_det: det,
            quadratic_value: v.quad_value.as_ref().map(format_rat),
        }
    }
}

/// Grid generator spec: the seed travels with every sampled verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridSpec {
    pub seed: u64,
    pub radius: f64,
    pub count: usize,
    #[serde(default = "one_var")]
    pub variables: usize,
}

fn one_var() -> usize {
    1
}

impl GridSpec {
    pub fn build(&self) -> crate::sampling::Grid {
        crate::sampling::Grid::random_ball(self.seed, self.variables, self.radius, self.count)
    }
}

/// Per-stage report of a coefficient Schur-complement chain: exact pivots
/// plus the PSD verdict of each stage quotient against the base kernel.
pub fn schur_chain_report(
    chain: &crate::schurtools::SchurChain,
    verdicts: &[PsdVerdictJson],
) -> serde_json::Value {
    serde_json::json!({
        "pivots": chain.pivots.iter().map(format_rat).collect::<Vec<_>>(),
        "stage_verdicts": verdicts,
    })
}

/// Deviation table of an iterated-limit run.
pub fn limit_check_report(check: &crate::schurtools::LimitCheck) -> serde_json::Value {
    serde_json::json!({
        "deviations": check.deviations.iter().map(|&(t, d)| {
            serde_json::json!({"t": t, "sup_deviation": d})
        }).collect::<Vec<_>>(),
        "truncation_floor": check.truncation_floor,
    })
}

/// Diagonal-growth audit rows with exact values.
pub fn necessity_audit_report(audit: &crate::certificates::NecessityAudit) -> serde_json::Value {
    serde_json::json!({
        "all_pass": audit.all_pass,
        "pivots": audit.pivots.iter().map(format_rat).collect::<Vec<_>>(),
        "rows": audit.rows.iter().map(|r| serde_json::json!({
            "stage": r.stage,
            "stage_diag": format_rat(&r.stage_diag),
            "prev_diag": format_rat(&r.prev_diag),
            "doubling_ok": r.doubling_ok,
            "geometric_ok": r.geometric_ok,
        })).collect::<Vec<_>>(),
    })
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report shapes serialize")
}

pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(parse_err)
}
