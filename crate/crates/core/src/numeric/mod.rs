//! Exact linear-algebra primitives over the rationals.
//!
//! Everything that decides a 0/1 answer (span membership, feasibility of a
//! negative witness) is computed exactly. The two quadratic minimizations are
//! also solved exactly through sparse elimination on their normal/KKT systems;
//! [`float`] provides an independent dense floating-point route used for
//! cross-checking.

mod echelon;
pub mod float;
mod sparse_solve;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use echelon::IntegerEchelon;
pub(crate) use sparse_solve::SparseSystem;

/// Arbitrary-precision rational, always normalized (lowest terms, positive denominator).
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Shorthand for `num / den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Lossy conversion used only for reporting.
pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("exact verification of a computed solution failed: {0}")]
    VerificationFailed(&'static str),
}

/// Sparse vector with exact rational coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseVector {
    dim: usize,
    entries: BTreeMap<usize, Rational>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    /// Unit vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self, NumericError> {
        Self::from_entries(dim, [(index, Rational::one())])
    }

    /// Builds a vector from `(index, coefficient)` pairs. Repeated indices are summed
    /// and zero results dropped.
    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self, NumericError>
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        if dim == 0 {
            return Err(NumericError::ZeroDimension);
        }
        let mut v = Self::zeros(dim);
        for (index, coeff) in entries {
            if index >= dim {
                return Err(NumericError::IndexOutOfRange { index, dim });
            }
            v.add_at(index, &coeff);
        }
        Ok(v)
    }

    /// Same as [`from_entries`](Self::from_entries) with small integer coefficients.
    pub fn from_int_entries<I>(dim: usize, entries: I) -> Result<Self, NumericError>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        Self::from_entries(dim, entries.into_iter().map(|(i, c)| (i, int(c))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Rational {
        self.entries
            .get(&index)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Nonzero entries in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    /// Adds `coeff` to coordinate `index`. Caller guarantees `index < dim`.
    pub(crate) fn add_at(&mut self, index: usize, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.entries.entry(index).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.entries.remove(&index);
        }
    }

    /// `self += scale * other`.
    pub fn add_scaled(
        &mut self,
        scale: &Rational,
        other: &SparseVector,
    ) -> Result<(), NumericError> {
        self.check_dim(other.dim)?;
        if scale.is_zero() {
            return Ok(());
        }
        for (i, c) in other.iter() {
            self.add_at(i, &(scale * c));
        }
        Ok(())
    }

    pub fn dot(&self, other: &SparseVector) -> Result<Rational, NumericError> {
        self.check_dim(other.dim)?;
        let (small, large) = if self.nnz() <= other.nnz() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Rational::zero();
        for (i, c) in small.iter() {
            if let Some(d) = large.entries.get(&i) {
                acc += c * d;
            }
        }
        Ok(acc)
    }

    pub fn norm_squared(&self) -> Rational {
        self.entries.values().map(|c| c * c).sum()
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<(), NumericError> {
        if self.dim == found {
            Ok(())
        } else {
            Err(NumericError::DimensionMismatch {
                expected: self.dim,
                found,
            })
        }
    }
}

impl fmt::Debug for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseVector(dim={}; ", self.dim)?;
        let mut first = true;
        for (i, c) in self.iter() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{i}:{c}")?;
        }
        write!(f, ")")
    }
}

fn check_all_dims(vectors: &[SparseVector], target: &SparseVector) -> Result<(), NumericError> {
    for v in vectors {
        target.check_dim(v.dim)?;
    }
    Ok(())
}

/// True iff `target` is a rational linear combination of `vectors`.
///
/// Decided by fraction-free elimination over the integers; no tolerance is involved.
pub fn span_membership(
    vectors: &[SparseVector],
    target: &SparseVector,
) -> Result<bool, NumericError> {
    check_all_dims(vectors, target)?;
    if target.is_zero() {
        return Ok(true);
    }
    let mut echelon = IntegerEchelon::new();
    for v in vectors {
        echelon.insert(v);
    }
    Ok(echelon.contains(target))
}

/// Minimum-norm exact solution of `sum_j w_j * vectors[j] = target`, or `None` when
/// `target` is outside the span.
///
/// The minimizer lies in the row space of the column matrix `A`, so it is
/// `A^T y` for any solution `y` of the Gram system `A A^T y = target`.
pub fn min_norm_solution(
    vectors: &[SparseVector],
    target: &SparseVector,
) -> Result<Option<Vec<Rational>>, NumericError> {
    check_all_dims(vectors, target)?;
    if target.is_zero() {
        return Ok(Some(vec![Rational::zero(); vectors.len()]));
    }

    let mut coords = CoordinateMap::default();
    for v in vectors {
        coords.extend(v.support());
    }
    if target.support().any(|i| !coords.contains(i)) {
        return Ok(None);
    }

    let mut system = SparseSystem::new(coords.len(), coords.len());
    for v in vectors {
        let local: Vec<(usize, &Rational)> = v.iter().map(|(i, c)| (coords.local(i), c)).collect();
        for &(i, ci) in &local {
            for &(j, cj) in &local {
                system.add(i, j, &(ci * cj));
            }
        }
    }
    for (i, c) in target.iter() {
        system.set_rhs(coords.local(i), c.clone());
    }

    let Some(y_local) = system.solve() else {
        return Ok(None);
    };
    let y = coords.expand(target.dim, &y_local);
    let w: Vec<Rational> = vectors
        .iter()
        .map(|v| v.dot(&y))
        .collect::<Result<_, _>>()?;

    let mut residual = target.clone();
    for (coeff, v) in w.iter().zip(vectors) {
        residual.add_scaled(&-coeff, v)?;
    }
    if !residual.is_zero() {
        return Err(NumericError::VerificationFailed(
            "min-norm residual is nonzero",
        ));
    }
    Ok(Some(w))
}

/// Result of [`constrained_quadratic_min`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticMin {
    pub point: SparseVector,
    /// `sum_b <b, point>^2` over the objective vectors.
    pub value: Rational,
}

/// Minimizes `sum_{b in objective} <b, w>^2` subject to `<normalizer, w> = 1` and
/// `<a, w> = 0` for every `a` in `orthogonality`.
///
/// Returns `None` exactly when the constraints are infeasible, i.e. when
/// `normalizer` lies in the span of `orthogonality`. Otherwise the exact KKT
/// system is solved; when it is singular the solution with all free variables
/// set to zero is returned.
pub fn constrained_quadratic_min(
    objective: &[SparseVector],
    orthogonality: &[SparseVector],
    normalizer: &SparseVector,
) -> Result<Option<QuadraticMin>, NumericError> {
    check_all_dims(objective, normalizer)?;
    check_all_dims(orthogonality, normalizer)?;
    let dim = normalizer.dim;

    // Keep an independent subset of the orthogonality constraints; this both
    // decides feasibility and keeps the KKT system small.
    let mut echelon = IntegerEchelon::new();
    let independent: Vec<&SparseVector> =
        orthogonality.iter().filter(|a| echelon.insert(a)).collect();
    if normalizer.is_zero() || echelon.contains(normalizer) {
        return Ok(None);
    }

    let mut coords = CoordinateMap::default();
    coords.extend(normalizer.support());
    for a in &independent {
        coords.extend(a.support());
    }
    for b in objective {
        coords.extend(b.support());
    }
    let m = coords.len();
    let constraint_count = 1 + independent.len();
    let mut system = SparseSystem::new(m + constraint_count, m + constraint_count);

    for b in objective {
        let local: Vec<(usize, &Rational)> = b.iter().map(|(i, c)| (coords.local(i), c)).collect();
        for &(i, ci) in &local {
            for &(j, cj) in &local {
                system.add(i, j, &(ci * cj));
            }
        }
    }
    let constraints = std::iter::once(normalizer).chain(independent.iter().copied());
    for (r, a) in constraints.enumerate() {
        let row = m + r;
        for (i, c) in a.iter() {
            let li = coords.local(i);
            system.add(li, row, c);
            system.add(row, li, c);
        }
    }
    system.set_rhs(m, Rational::one());

    let solution = system.solve().ok_or(NumericError::VerificationFailed(
        "KKT system inconsistent for a feasible problem",
    ))?;
    let point = coords.expand(dim, &solution[..m]);

    if normalizer.dot(&point)? != Rational::one() {
        return Err(NumericError::VerificationFailed(
            "normalization constraint violated",
        ));
    }
    for a in orthogonality {
        if !a.dot(&point)?.is_zero() {
            return Err(NumericError::VerificationFailed(
                "orthogonality constraint violated",
            ));
        }
    }
    let value = objective
        .iter()
        .map(|b| b.dot(&point).map(|d| &d * &d))
        .sum::<Result<Rational, _>>()?;
    Ok(Some(QuadraticMin { point, value }))
}

/// Compacts a set of global basis indices to `0..len`.
#[derive(Default)]
struct CoordinateMap {
    to_local: BTreeMap<usize, usize>,
    to_global: Vec<usize>,
}

impl CoordinateMap {
    fn extend(&mut self, indices: impl Iterator<Item = usize>) {
        for i in indices {
            if !self.to_local.contains_key(&i) {
                self.to_local.insert(i, self.to_global.len());
                self.to_global.push(i);
            }
        }
    }

    fn contains(&self, i: usize) -> bool {
        self.to_local.contains_key(&i)
    }

    fn local(&self, i: usize) -> usize {
        self.to_local[&i]
    }

    fn len(&self) -> usize {
        self.to_global.len()
    }

    fn expand(&self, dim: usize, local: &[Rational]) -> SparseVector {
        let mut v = SparseVector::zeros(dim);
        for (li, c) in local.iter().enumerate() {
            v.add_at(self.to_global[li], c);
        }
        v
    }
}

/// `|value|` as a rational, handy when reporting signed coefficients.
pub fn abs(value: &Rational) -> Rational {
    value.abs()
}
