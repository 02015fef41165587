//! Pointwise Gram-matrix positivity certification on random grids, and
//! orthogonal projections onto monomial-plus-section spans in truncated
//! kernel-space coordinates.
//!
//! Grids are seeded and the seed travels with every verdict so float
//! results reproduce exactly. Near-dependent spans are rejected rather
//! than regularized.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::catalog::KernelEval;
use crate::error::Error;
use crate::linalg::{hermitian_eigen, operator_norm, psd_float, FloatMatrix};
use crate::scalar::{rat_to_f64, C64};
use crate::series::{indices_up_to, DiagonalSeries, MultiIndex};

/// Minimum separation between grid points.
pub const MIN_SEPARATION: f64 = 1e-8;
/// Condition-number threshold beyond which a span is rejected.
pub const SPAN_CONDITION_LIMIT: f64 = 1e10;

/// A finite list of sample points in C^g with its generator parameters.
#[derive(Clone, Debug)]
pub struct Grid {
    pub points: Vec<Vec<C64>>,
    pub seed: Option<u64>,
    pub radius: f64,
}

impl Grid {
    pub fn from_points(points: Vec<Vec<C64>>) -> Result<Self, Error> {
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let sep: f64 = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                if sep < MIN_SEPARATION {
                    return Err(Error::CoincidentPoint);
                }
            }
        }
        let radius = points
            .iter()
            .map(|p| p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        Ok(Grid {
            points,
            seed: None,
            radius,
        })
    }

    /// Uniform random points in the radius-r ball of C^g, resampling any
    /// draw that lands within the minimum separation of an earlier point.
    pub fn random_ball(seed: u64, vars: usize, radius: f64, count: usize) -> Self {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut points: Vec<Vec<C64>> = Vec::with_capacity(count);
        while points.len() < count {
            // Rejection-sample the 2g-dimensional ball.
            let candidate: Vec<C64> = loop {
                let p: Vec<C64> = (0..vars)
                    .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                if p.iter().map(|z| z.norm_sqr()).sum::<f64>() <= 1.0 {
                    break p.into_iter().map(|z| z * radius).collect();
                }
            };
            let separated = points.iter().all(|q| {
                candidate
                    .iter()
                    .zip(q)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
                    >= MIN_SEPARATION
            });
            if separated {
                points.push(candidate);
            }
        }
        Grid {
            points,
            seed: Some(seed),
            radius,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Gram-matrix positivity verdict for a kernel evaluator on a grid.
#[derive(Clone, Debug)]
pub struct GramVerdict {
    pub psd: bool,
    pub min_eigenvalue: f64,
    pub norm: f64,
    pub tolerance: f64,
    pub seed: Option<u64>,
}

/// Assemble the Gram matrix of the kernel on the grid (symmetrized to kill
/// evaluator roundoff) and test min eigenvalue >= -tol * norm.
pub fn gram_psd(kernel: &dyn KernelEval, grid: &Grid, tol: f64) -> Result<GramVerdict, Error> {
    let n = grid.len();
    let raw = FloatMatrix::from_fn(n, n, |i, j| kernel.eval(&grid.points[i], &grid.points[j]));
    if !raw.is_finite() {
        return Err(Error::NonFinite);
    }
    let sym = FloatMatrix::from_fn(n, n, |i, j| 0.5 * (raw.get(i, j) + raw.get(j, i).conj()));
    let verdict = psd_float(&sym, tol);
    Ok(GramVerdict {
        psd: verdict.psd,
        min_eigenvalue: verdict.min_eigenvalue,
        norm: verdict.norm,
        tolerance: tol,
        seed: grid.seed,
    })
}

/// Orthogonal projection onto span({monomials} union {kernel sections}) in
/// the truncated kernel space, represented in monomial coordinates.
///
/// Functions are coordinate vectors (f_a) over |a| <= N with inner product
/// <f, g> = sum_a f_a conj(g_a) / l_a; the kernel section at w has
/// coordinates l_a conj(w)^a. The projection matrix acts on these
/// coordinates, so applying it to kernel sections realizes the projected
/// kernel.
pub struct SpanProjection {
    indices: Vec<MultiIndex>,
    /// Metric weights 1 / l_a per coordinate.
    weights: Vec<f64>,
    kernel: DiagonalSeries,
    /// Projection matrix in coordinate space.
    matrix: FloatMatrix,
}

/// Build the projection for the truncated kernel l onto the span of the
/// first `monomial_count` monomials (graded lexicographic) and the kernel
/// sections at the points of `lambda`.
pub fn span_projection(
    l: &DiagonalSeries,
    lambda: &[Vec<C64>],
    monomial_count: usize,
) -> Result<SpanProjection, Error> {
    l.check_normalized_kernel()?;
    let indices = indices_up_to(l.vars(), l.truncation());
    let dim = indices.len();
    if monomial_count > dim {
        return Err(Error::InvalidParameter(format!(
            "asked for {monomial_count} monomials but only {dim} exist at this truncation"
        )));
    }
    let weights: Vec<f64> = indices
        .iter()
        .map(|a| 1.0 / rat_to_f64(&l.coeff(a)))
        .collect();

    // Spanning vectors in coordinate space.
    let mut span: Vec<Vec<C64>> = Vec::with_capacity(monomial_count + lambda.len());
    for m in 0..monomial_count {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[m] = C64::new(1.0, 0.0);
        span.push(v);
    }
    for point in lambda {
        if point.len() != l.vars() {
            return Err(Error::DimensionMismatch("section point arity".into()));
        }
        let v: Vec<C64> = indices
            .iter()
            .enumerate()
            .map(|(p, a)| {
                let mut mono = C64::new(1.0, 0.0);
                for (j, &e) in a.exponents().iter().enumerate() {
                    mono *= point[j].conj().powu(e);
                }
                mono * rat_to_f64(&l.coeff(&indices[p]))
            })
            .collect();
        span.push(v);
    }

    let dot = |a: &[C64], b: &[C64]| -> C64 {
        a.iter()
            .zip(b)
            .zip(&weights)
            .map(|((x, y), &w)| x * y.conj() * w)
            .sum()
    };

    // Condition check on the span Gram matrix.
    let m = span.len();
    if m > 0 {
        let gram = FloatMatrix::from_fn(m, m, |i, j| dot(&span[i], &span[j]));
        let eig = hermitian_eigen(&gram).0;
        let max = eig.last().copied().unwrap_or(0.0);
        let min = eig.first().copied().unwrap_or(0.0);
        if min <= 0.0 || max / min > SPAN_CONDITION_LIMIT {
            return Err(Error::IllConditionedSpan {
                condition: if min > 0.0 { max / min } else { f64::INFINITY },
            });
        }
    }

    // Modified Gram-Schmidt in the weighted metric.
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m);
    for mut v in span {
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&v, q);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
        let norm = dot(&v, &v).re.max(0.0).sqrt();
        // The condition check above guarantees independence.
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        basis.push(v);
    }

    // P = sum_q |q><q| in the weighted metric: P[i][j] = sum q_i conj(q_j) w_j.
    let matrix = FloatMatrix::from_fn(dim, dim, |i, j| {
        basis.iter().map(|q| q[i] * q[j].conj() * weights[j]).sum()
    });
    Ok(SpanProjection {
        indices,
        weights,
        kernel: l.clone(),
        matrix,
    })
}

impl SpanProjection {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn matrix(&self) -> &FloatMatrix {
        &self.matrix
    }

    /// Coordinates of the kernel section at w.
    fn section_coords(&self, w: &[C64]) -> Vec<C64> {
        self.indices
            .iter()
            .map(|a| {
                let mut mono = C64::new(1.0, 0.0);
                for (j, &e) in a.exponents().iter().enumerate() {
                    mono *= w[j].conj().powu(e);
                }
                mono * rat_to_f64(&self.kernel.coeff(a))
            })
            .collect()
    }

    fn eval_coords(&self, coords: &[C64], z: &[C64]) -> C64 {
        self.indices
            .iter()
            .zip(coords)
            .map(|(a, c)| {
                let mut mono = C64::new(1.0, 0.0);
                for (j, &e) in a.exponents().iter().enumerate() {
                    mono *= z[j].powu(e);
                }
                c * mono
            })
            .sum()
    }

    /// (P l)(z, w): the projected kernel.
    pub fn projected_kernel(&self, z: &[C64], w: &[C64]) -> C64 {
        let coords = self.section_coords(w);
        let projected: Vec<C64> = (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| self.matrix.get(i, j) * coords[j])
                    .sum()
            })
            .collect();
        self.eval_coords(&projected, z)
    }

    /// ((I - P) l)(z, w): the complementary kernel.
    pub fn complement_kernel(&self, z: &[C64], w: &[C64]) -> C64 {
        self.kernel.eval_kernel(z, w) - self.projected_kernel(z, w)
    }

    /// The projection conjugated into orthonormal coordinates, where
    /// self-adjointness means plain Hermitian symmetry.
    fn orthonormal_matrix(&self) -> FloatMatrix {
        let n = self.dim();
        FloatMatrix::from_fn(n, n, |i, j| {
            self.matrix.get(i, j) * (self.weights[i] / self.weights[j]).sqrt()
        })
    }

    /// Largest deviation from idempotence, measured as the operator norm of
    /// P^2 - P in the kernel-space metric.
    pub fn idempotence_defect(&self) -> f64 {
        let m = self.orthonormal_matrix();
        operator_norm(&m.mul(&m).sub(&m)).unwrap_or(f64::NAN)
    }

    /// Largest deviation from self-adjointness in the kernel-space metric.
    pub fn self_adjointness_defect(&self) -> f64 {
        let m = self.orthonormal_matrix();
        operator_norm(&m.sub(&m.adjoint())).unwrap_or(f64::NAN)
    }

    /// Operator-norm distance to another projection on the same truncated
    /// space, in the kernel-space metric.
    pub fn distance(&self, other: &SpanProjection) -> Result<f64, Error> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(
                "projections on different spaces".into(),
            ));
        }
        operator_norm(&self.orthonormal_matrix().sub(&other.orthonormal_matrix()))
    }
}
