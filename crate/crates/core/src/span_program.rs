//! Span programs: a target vector plus vectors grouped by `(input, bit)`.
//!
//! A vector in group `(i, b)` is available on input `x` iff `x_i = b`; free
//! vectors are always available. The program outputs 1 on `x` iff the target
//! lies in the span of the available vectors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::float::{self, FloatQuadraticMin, FloatSolution};
use crate::numeric::{self, NumericError, Rational, SparseVector};

/// Stable insertion-order identifier of a program vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VectorId(pub usize);

impl fmt::Display for VectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpanProgramError {
    #[error("input has {found} bits, program expects {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("input index {index} out of range for arity {arity}")]
    InputOutOfRange { index: usize, arity: usize },
    #[error("unknown vector id {0}")]
    UnknownVector(VectorId),
    #[error("input #{index} ({label}) evaluates to {actual}, expected {expected}")]
    WrongSide {
        index: usize,
        label: String,
        expected: u8,
        actual: u8,
    },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Boolean input `x in {0,1}^arity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InputAssignment {
    bits: Vec<bool>,
}

impl InputAssignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(arity: usize) -> Self {
        Self {
            bits: vec![false; arity],
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }
}

impl fmt::Display for InputAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// An immutable span program. Build one with [`SpanProgramBuilder`].
#[derive(Debug, Clone)]
pub struct SpanProgram {
    dim: usize,
    target: SparseVector,
    vectors: Vec<SparseVector>,
    /// `groups[i][b]` lists the vectors available when `x_i = b`.
    groups: Vec<[Vec<VectorId>; 2]>,
    free: Vec<VectorId>,
}

impl SpanProgram {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn target(&self) -> &SparseVector {
        &self.target
    }

    pub fn input_arity(&self) -> usize {
        self.groups.len()
    }

    pub fn vector_count(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, id: VectorId) -> Result<&SparseVector, SpanProgramError> {
        self.vectors
            .get(id.0)
            .ok_or(SpanProgramError::UnknownVector(id))
    }

    /// All vectors in id order.
    pub fn vectors(&self) -> impl Iterator<Item = (VectorId, &SparseVector)> + '_ {
        self.vectors
            .iter()
            .enumerate()
            .map(|(i, v)| (VectorId(i), v))
    }

    pub fn free_vectors(&self) -> &[VectorId] {
        &self.free
    }

    pub fn group(&self, input: usize, bit: bool) -> &[VectorId] {
        &self.groups[input][bit as usize]
    }

    fn check_arity(&self, x: &InputAssignment) -> Result<(), SpanProgramError> {
        if x.len() == self.input_arity() {
            Ok(())
        } else {
            Err(SpanProgramError::ArityMismatch {
                expected: self.input_arity(),
                found: x.len(),
            })
        }
    }

    /// `V(x)`: free vectors first, then group `(i, x_i)` for each `i` in order.
    /// Deduplicated by id.
    pub fn available_vectors(
        &self,
        x: &InputAssignment,
    ) -> Result<Vec<VectorId>, SpanProgramError> {
        self.check_arity(x)?;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let chosen = self
            .groups
            .iter()
            .zip(x.bits())
            .flat_map(|(g, &b)| g[b as usize].iter());
        for &id in self.free.iter().chain(chosen) {
            if seen.insert(id) {
                out.push(id);
            }
        }
        Ok(out)
    }

    fn collect(&self, ids: &[VectorId]) -> Vec<SparseVector> {
        ids.iter().map(|id| self.vectors[id.0].clone()).collect()
    }

    /// Program output on `x`: 1 iff the target is in the span of `V(x)`.
    pub fn evaluate(&self, x: &InputAssignment) -> Result<bool, SpanProgramError> {
        let avail = self.available_vectors(x)?;
        Ok(numeric::span_membership(
            &self.collect(&avail),
            &self.target,
        )?)
    }

    /// Minimum-norm positive witness, or `None` on a 0-input.
    pub fn positive_witness(
        &self,
        x: &InputAssignment,
    ) -> Result<Option<PositiveWitness>, SpanProgramError> {
        let avail = self.available_vectors(x)?;
        let Some(w) = numeric::min_norm_solution(&self.collect(&avail), &self.target)? else {
            return Ok(None);
        };
        let coefficients = avail
            .into_iter()
            .zip(w)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(Some(PositiveWitness::new(coefficients)))
    }

    /// Optimal negative witness, or `None` on a 1-input.
    ///
    /// The objective sums `<v, w>^2` over every program vector once, available or not.
    pub fn negative_witness(
        &self,
        x: &InputAssignment,
    ) -> Result<Option<NegativeWitness>, SpanProgramError> {
        let avail = self.available_vectors(x)?;
        let result =
            numeric::constrained_quadratic_min(&self.vectors, &self.collect(&avail), &self.target)?;
        Ok(result.map(|m| NegativeWitness {
            functional: m.point,
            size: m.value,
        }))
    }

    /// Floating-point positive witness via the dense pseudo-inverse route.
    /// Returns the coefficient solution and its squared norm.
    pub fn positive_witness_float(
        &self,
        x: &InputAssignment,
        tolerance: f64,
    ) -> Result<Option<(FloatSolution, f64)>, SpanProgramError> {
        let avail = self.available_vectors(x)?;
        let sol = float::min_norm_solution_f64(&self.collect(&avail), &self.target, tolerance)?;
        Ok(sol.map(|s| {
            let size = s.values.iter().map(|c| c * c).sum();
            (s, size)
        }))
    }

    /// Floating-point negative witness via a dense KKT solve.
    pub fn negative_witness_float(
        &self,
        x: &InputAssignment,
        tolerance: f64,
    ) -> Result<Option<FloatQuadraticMin>, SpanProgramError> {
        let avail = self.available_vectors(x)?;
        Ok(float::constrained_quadratic_min_f64(
            &self.vectors,
            &self.collect(&avail),
            &self.target,
            tolerance,
        )?)
    }

    /// Positive and negative witnesses are mutually exclusive; returns whichever exists.
    pub fn optimal_witness(&self, x: &InputAssignment) -> Result<Witness, SpanProgramError> {
        if self.evaluate(x)? {
            let w = self.positive_witness(x)?.ok_or_else(|| {
                SpanProgramError::InvalidWitness("1-input without positive witness".into())
            })?;
            Ok(Witness::Positive(w))
        } else {
            let w = self.negative_witness(x)?.ok_or_else(|| {
                SpanProgramError::InvalidWitness("0-input without negative witness".into())
            })?;
            Ok(Witness::Negative(w))
        }
    }

    /// Witness sizes maximized over sampled inputs on each side.
    pub fn wsize_over(
        &self,
        inputs_1: &[InputAssignment],
        inputs_0: &[InputAssignment],
    ) -> Result<WitnessSizes, SpanProgramError> {
        let mut positive = SideMax::vacuous();
        for (index, x) in inputs_1.iter().enumerate() {
            let w = self
                .positive_witness(x)?
                .ok_or_else(|| wrong_side(index, x, 1))?;
            positive.observe(&w.size);
        }
        let mut negative = SideMax::vacuous();
        for (index, x) in inputs_0.iter().enumerate() {
            let w = self
                .negative_witness(x)?
                .ok_or_else(|| wrong_side(index, x, 0))?;
            negative.observe(&w.size);
        }
        Ok(WitnessSizes::new(positive, negative))
    }
}

fn wrong_side(index: usize, x: &InputAssignment, expected: u8) -> SpanProgramError {
    SpanProgramError::WrongSide {
        index,
        label: x.to_string(),
        expected,
        actual: 1 - expected,
    }
}

/// Incremental construction of a [`SpanProgram`].
#[derive(Debug, Clone)]
pub struct SpanProgramBuilder {
    program: SpanProgram,
}

impl SpanProgramBuilder {
    pub fn new(target: SparseVector, input_arity: usize) -> Self {
        Self {
            program: SpanProgram {
                dim: target.dim(),
                target,
                vectors: Vec::new(),
                groups: vec![[Vec::new(), Vec::new()]; input_arity],
                free: Vec::new(),
            },
        }
    }

    fn push(&mut self, v: SparseVector) -> Result<VectorId, SpanProgramError> {
        self.program.target.check_dim(v.dim())?;
        let id = VectorId(self.program.vectors.len());
        self.program.vectors.push(v);
        Ok(id)
    }

    pub fn add_free(&mut self, v: SparseVector) -> Result<VectorId, SpanProgramError> {
        let id = self.push(v)?;
        self.program.free.push(id);
        Ok(id)
    }

    pub fn add_to_group(
        &mut self,
        input: usize,
        bit: bool,
        v: SparseVector,
    ) -> Result<VectorId, SpanProgramError> {
        let arity = self.program.groups.len();
        if input >= arity {
            return Err(SpanProgramError::InputOutOfRange {
                index: input,
                arity,
            });
        }
        let id = self.push(v)?;
        self.program.groups[input][bit as usize].push(id);
        Ok(id)
    }

    pub fn build(self) -> SpanProgram {
        self.program
    }
}

/// Coefficients over available vectors that reproduce the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveWitness {
    /// Nonzero coefficients, ordered by id.
    pub coefficients: BTreeMap<VectorId, Rational>,
    /// `sum c^2`.
    pub size: Rational,
}

impl PositiveWitness {
    pub fn new(coefficients: BTreeMap<VectorId, Rational>) -> Self {
        let size = coefficients.values().map(|c| c * c).sum();
        Self { coefficients, size }
    }

    /// Checks the witness against `program` on input `x`, exactly.
    pub fn verify(
        &self,
        program: &SpanProgram,
        x: &InputAssignment,
    ) -> Result<(), SpanProgramError> {
        let avail: BTreeSet<VectorId> = program.available_vectors(x)?.into_iter().collect();
        let mut residual = program.target().clone();
        for (id, c) in &self.coefficients {
            if !avail.contains(id) {
                return Err(SpanProgramError::InvalidWitness(format!(
                    "{id} is not available"
                )));
            }
            residual.add_scaled(&-c, program.vector(*id)?)?;
        }
        if !residual.is_zero() {
            return Err(SpanProgramError::InvalidWitness(format!(
                "residual {residual:?} is nonzero"
            )));
        }
        let size: Rational = self.coefficients.values().map(|c| c * c).sum();
        if size != self.size {
            return Err(SpanProgramError::InvalidWitness(
                "stored size disagrees".into(),
            ));
        }
        Ok(())
    }
}

/// A functional `w'` with `<t, w'> = 1` vanishing on the available vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeWitness {
    pub functional: SparseVector,
    /// `sum_{v in V} <v, w'>^2` over all program vectors.
    pub size: Rational,
}

impl NegativeWitness {
    /// Wraps `functional` and computes its size against `program`.
    pub fn from_functional(
        program: &SpanProgram,
        functional: SparseVector,
    ) -> Result<Self, SpanProgramError> {
        let size = program
            .vectors
            .iter()
            .map(|v| v.dot(&functional).map(|d| &d * &d))
            .sum::<Result<Rational, _>>()?;
        Ok(Self { functional, size })
    }

    /// `<v, w'>^2` for each program vector, in id order.
    pub fn contributions(&self, program: &SpanProgram) -> Result<Vec<Rational>, SpanProgramError> {
        program
            .vectors
            .iter()
            .map(|v| Ok(v.dot(&self.functional).map(|d| &d * &d)?))
            .collect()
    }

    pub fn verify(
        &self,
        program: &SpanProgram,
        x: &InputAssignment,
    ) -> Result<(), SpanProgramError> {
        if program.target().dot(&self.functional)? != Rational::one() {
            return Err(SpanProgramError::InvalidWitness("<t, w'> != 1".into()));
        }
        for id in program.available_vectors(x)? {
            if !program.vector(id)?.dot(&self.functional)?.is_zero() {
                return Err(SpanProgramError::InvalidWitness(format!(
                    "<{id}, w'> != 0 for available vector"
                )));
            }
        }
        let recomputed = Self::from_functional(program, self.functional.clone())?;
        if recomputed.size != self.size {
            return Err(SpanProgramError::InvalidWitness(
                "stored size disagrees".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Positive(PositiveWitness),
    Negative(NegativeWitness),
}

impl Witness {
    pub fn size(&self) -> &Rational {
        match self {
            Witness::Positive(w) => &w.size,
            Witness::Negative(w) => &w.size,
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, Witness::Positive(_))
    }
}

/// Maximum over one side of the sample. A max over no inputs is 0 and flagged vacuous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideMax {
    pub value: Rational,
    pub vacuous: bool,
}

impl SideMax {
    pub fn vacuous() -> Self {
        Self {
            value: Rational::zero(),
            vacuous: true,
        }
    }

    pub fn observe(&mut self, size: &Rational) {
        if self.vacuous || *size > self.value {
            self.value = size.clone();
        }
        self.vacuous = false;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSizes {
    pub positive: SideMax,
    pub negative: SideMax,
    /// `sqrt(wsize0 * wsize1)`.
    pub combined: f64,
}

impl WitnessSizes {
    pub fn new(positive: SideMax, negative: SideMax) -> Self {
        let combined = (numeric::to_f64(&positive.value) * numeric::to_f64(&negative.value)).sqrt();
        Self {
            positive,
            negative,
            combined,
        }
    }
}
