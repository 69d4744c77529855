//! Dense floating-point route for the two minimizations.
//!
//! Independent of the exact sparse path: the matrices are assembled densely
//! and solved through a symmetric-eigendecomposition pseudo-inverse, which
//! also yields the minimum-norm solution of a singular KKT system. Results are lifted back to
//! rationals by continued fractions when every entry is a simple fraction, and
//! that lift is then checked exactly.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::Zero;

use super::{NumericError, Rational, SparseVector};

/// Default KKT residual tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Largest denominator tried when rationalizing a float.
pub const MAX_DENOMINATOR: i64 = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub struct FloatSolution {
    pub values: Vec<f64>,
    /// Max-abs residual of the solved linear system.
    pub residual: f64,
    /// Exact lift of `values`, present only if it satisfies the constraints exactly.
    pub exact: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloatQuadraticMin {
    /// Dense point of length `dim`.
    pub point: FloatSolution,
    pub value: f64,
}

fn to_f64(r: &Rational) -> f64 {
    super::to_f64(r)
}

fn dense_columns(vectors: &[&SparseVector], dim: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        for (i, c) in v.iter() {
            a[(i, j)] = to_f64(c);
        }
    }
    a
}

fn dense(v: &SparseVector) -> DVector<f64> {
    let mut out = DVector::zeros(v.dim());
    for (i, c) in v.iter() {
        out[i] = to_f64(c);
    }
    out
}

/// Minimum-norm least-squares solution of `m x = b`.
///
/// nalgebra's SVD sometimes returns inaccurate singular vectors on rank-deficient
/// integer matrices, so the solve goes through a symmetric eigendecomposition of the
/// smaller Gram matrix instead.
fn pinv_solve(m: DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    if m.is_empty() {
        return DVector::zeros(m.ncols());
    }
    if m.nrows() <= m.ncols() {
        let gram = &m * m.transpose();
        m.transpose() * symmetric_pinv_solve(gram, b)
    } else {
        let gram = m.transpose() * &m;
        symmetric_pinv_solve(gram, &(m.transpose() * b))
    }
}

/// `pinv(s) b` for a symmetric matrix `s`, dropping eigenvalues below a relative cutoff.
fn symmetric_pinv_solve(s: DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = s.nrows();
    let eigen = s.symmetric_eigen();
    let largest = eigen.eigenvalues.amax();
    let cutoff = f64::EPSILON * largest.max(1.0) * n as f64;
    let mut y = eigen.eigenvectors.transpose() * b;
    for (yi, &l) in y.iter_mut().zip(eigen.eigenvalues.iter()) {
        *yi = if l.abs() > cutoff { *yi / l } else { 0.0 };
    }
    eigen.eigenvectors * y
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Floating-point minimum-norm solution. `None` when the residual exceeds `tolerance`.
pub fn min_norm_solution_f64(
    vectors: &[SparseVector],
    target: &SparseVector,
    tolerance: f64,
) -> Result<Option<FloatSolution>, NumericError> {
    for v in vectors {
        target.check_dim(v.dim())?;
    }
    let refs: Vec<&SparseVector> = vectors.iter().collect();
    let a = dense_columns(&refs, target.dim());
    let t = dense(target);
    let w = pinv_solve(a.clone(), &t);
    let residual = max_abs(&(&a * &w - &t));
    if residual > tolerance {
        return Ok(None);
    }
    let values: Vec<f64> = w.iter().copied().collect();
    let exact = rationalize_all(&values, tolerance).filter(|w| {
        let mut r = target.clone();
        for (c, v) in w.iter().zip(vectors) {
            r.add_scaled(&-c, v).expect("dims checked");
        }
        r.is_zero()
    });
    Ok(Some(FloatSolution {
        values,
        residual,
        exact,
    }))
}

/// Floating-point counterpart of [`super::constrained_quadratic_min`].
///
/// The full KKT system over all `dim` coordinates is solved by pseudo-inverse.
/// `None` when the KKT residual exceeds `tolerance` (infeasible constraints).
pub fn constrained_quadratic_min_f64(
    objective: &[SparseVector],
    orthogonality: &[SparseVector],
    normalizer: &SparseVector,
    tolerance: f64,
) -> Result<Option<FloatQuadraticMin>, NumericError> {
    for v in objective.iter().chain(orthogonality) {
        normalizer.check_dim(v.dim())?;
    }
    let dim = normalizer.dim();
    let obj_refs: Vec<&SparseVector> = objective.iter().collect();
    let b = dense_columns(&obj_refs, dim);
    let gram = &b * b.transpose();

    let constraints: Vec<&SparseVector> =
        std::iter::once(normalizer).chain(orthogonality).collect();
    let c = dense_columns(&constraints, dim);
    let k = constraints.len();

    let mut kkt = DMatrix::zeros(dim + k, dim + k);
    kkt.view_mut((0, 0), (dim, dim)).copy_from(&gram);
    kkt.view_mut((0, dim), (dim, k)).copy_from(&c);
    kkt.view_mut((dim, 0), (k, dim)).copy_from(&c.transpose());
    let mut rhs = DVector::zeros(dim + k);
    rhs[dim] = 1.0;

    let sol = symmetric_pinv_solve(kkt.clone(), &rhs);
    let residual = max_abs(&(&kkt * &sol - &rhs));
    if residual > tolerance {
        return Ok(None);
    }
    let w = sol.rows(0, dim).into_owned();
    let value = (b.transpose() * &w).norm_squared();
    let values: Vec<f64> = w.iter().copied().collect();
    let exact = rationalize_all(&values, tolerance).filter(|w| {
        let point =
            SparseVector::from_entries(dim, w.iter().cloned().enumerate()).expect("dim > 0");
        normalizer.dot(&point).expect("dims checked") == super::int(1)
            && orthogonality
                .iter()
                .all(|a| a.dot(&point).expect("dims checked").is_zero())
    });
    Ok(Some(FloatQuadraticMin {
        point: FloatSolution {
            values,
            residual,
            exact,
        },
        value,
    }))
}

/// Best rational approximation with denominator at most [`MAX_DENOMINATOR`], accepted
/// only if it is within `tolerance` of `x`.
pub fn rationalize(x: f64, tolerance: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    // Continued-fraction convergents h/k.
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > MAX_DENOMINATOR {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tolerance {
            return Some(Rational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = rest - a as f64;
        if frac.abs() < f64::EPSILON {
            break;
        }
        rest = 1.0 / frac;
    }
    if k1 != 0 && (x - h1 as f64 / k1 as f64).abs() <= tolerance {
        Some(Rational::new(BigInt::from(h1), BigInt::from(k1)))
    } else {
        None
    }
}

/// Rationalizes every entry or gives up.
pub fn rationalize_all(values: &[f64], tolerance: f64) -> Option<Vec<Rational>> {
    values.iter().map(|&x| rationalize(x, tolerance)).collect()
}
