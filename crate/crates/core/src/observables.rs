// Copyright 2026 The tpic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Finite-outcome observables, their operator systems and annihilators.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::herm::{hs_inner, HermitianOperator};
use crate::linalg::{rank_split, NULL_REL_TOL};
use crate::tolerance::Tolerances;

/// One labelled outcome of an observable.
#[derive(Clone, Debug, PartialEq)]
pub struct Effect {
    pub label: String,
    pub op: HermitianOperator,
}

/// A POVM on `C^d` with finitely many outcomes.
///
/// Construction only checks shapes; use [`validate`] or
/// [`Observable::validated`] for the positivity and completeness axioms.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    dim: usize,
    effects: Vec<Effect>,
}

impl Observable {
    /// Effects labelled `"0"`, `"1"`, ...
    pub fn from_effects(effects: Vec<HermitianOperator>) -> Result<Self> {
        Self::with_labels(effects.into_iter().enumerate().map(|(k, op)| (k.to_string(), op)).collect())
    }

    pub fn with_labels(effects: Vec<(String, HermitianOperator)>) -> Result<Self> {
        let dim = effects
            .first()
            .map(|(_, op)| op.dim())
            .ok_or_else(|| Error::InvalidObservable("no effects".into()))?;
        let mut out = Vec::with_capacity(effects.len());
        for (label, op) in effects {
            if op.dim() != dim {
                return Err(Error::DimMismatch { expected: dim, found: op.dim() });
            }
            out.push(Effect { label, op });
        }
        Ok(Observable { dim, effects: out })
    }

    /// Returns `self` if [`validate_with`] reports no violations.
    pub fn validated(self, tol: &Tolerances) -> Result<Self> {
        let report = validate_with(&self, tol);
        if report.is_valid() {
            Ok(self)
        } else {
            Err(Error::InvalidObservable(report.to_string()))
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    /// Real coordinates of the effects, one row per effect.
    pub(crate) fn coefficient_matrix(&self) -> DMatrix<f64> {
        let n = self.dim * self.dim;
        let mut m = DMatrix::zeros(self.effects.len(), n);
        for (k, e) in self.effects.iter().enumerate() {
            m.set_row(k, &e.op.real_coords().transpose());
        }
        m
    }
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// `(effect index, minimum eigenvalue)` for effects that are not PSD.
    pub psd_violations: Vec<(usize, f64)>,
    /// `||sum_k M_k - I||_op`.
    pub completeness_error: f64,
    pub completeness_tol: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.psd_violations.is_empty() && self.completeness_error <= self.completeness_tol
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            return write!(f, "valid (completeness error {:e})", self.completeness_error);
        }
        let mut parts = Vec::new();
        for (k, min) in &self.psd_violations {
            parts.push(format!("effect {k} has eigenvalue {min:e}"));
        }
        if self.completeness_error > self.completeness_tol {
            parts.push(format!("effects sum to identity only within {:e}", self.completeness_error));
        }
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate(obs: &Observable) -> ValidationReport {
    validate_with(obs, &Tolerances::global())
}

pub fn validate_with(obs: &Observable, tol: &Tolerances) -> ValidationReport {
    let mut psd_violations = Vec::new();
    let mut sum = HermitianOperator::zeros(obs.dim);
    for (k, e) in obs.effects.iter().enumerate() {
        let min = e.op.min_eigenvalue();
        if min < -tol.psd {
            psd_violations.push((k, min));
        }
        sum = &sum + &e.op;
    }
    let completeness_error = (&sum - &HermitianOperator::identity(obs.dim)).op_norm();
    ValidationReport { psd_violations, completeness_error, completeness_tol: tol.completeness }
}

/// Outcome distribution aligned with the effect ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(entries: Vec<f64>, tol: f64) -> Result<Self> {
        let sum: f64 = entries.iter().sum();
        if entries.iter().any(|&p| p.is_nan() || p < -tol) || (sum - 1.0).abs() > tol {
            return Err(Error::Format(format!("not a probability vector (sum {sum})")));
        }
        Ok(ProbabilityVector(entries))
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    /// Largest entrywise difference.
    pub fn max_diff(&self, other: &ProbabilityVector) -> f64 {
        self.0.iter().zip(&other.0).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Outcome probabilities `tr[rho M_k]`.
pub fn statistics(obs: &Observable, rho: &HermitianOperator) -> Result<ProbabilityVector> {
    let tol = Tolerances::global();
    if rho.dim() != obs.dim {
        return Err(Error::DimMismatch { expected: obs.dim, found: rho.dim() });
    }
    rho.check_state(&tol)?;
    let p = pairings(obs, rho)?;
    ProbabilityVector::new(p, tol.prob.max(tol.completeness * obs.dim as f64))
}

/// `tr[T M_k]` for every effect, without state checks.
pub fn pairings(obs: &Observable, t: &HermitianOperator) -> Result<Vec<f64>> {
    obs.effects.iter().map(|e| hs_inner(t, &e.op)).collect()
}

/// Real dimension of the span of the effects.
pub fn operator_system_dim(obs: &Observable) -> usize {
    rank_split(&obs.coefficient_matrix(), NULL_REL_TOL).rank
}

/// Hilbert-Schmidt orthonormal basis of `{T : tr[T M_k] = 0 for all k}`.
pub fn annihilator(obs: &Observable) -> OperatorSubspace {
    let split = rank_split(&obs.coefficient_matrix(), NULL_REL_TOL);
    let basis = columns_to_operators(obs.dim, &split.null_space);
    OperatorSubspace { dim_space: obs.dim, basis }
}

fn columns_to_operators(dim: usize, cols: &DMatrix<f64>) -> Vec<HermitianOperator> {
    cols.column_iter()
        .map(|c| HermitianOperator::from_real_coords(dim, c.as_slice()).expect("column length is dim^2"))
        .collect()
}

/// Builds an observable with `d^2 - dim X` outcomes whose annihilator is `X`.
///
/// With `G_1 = I/sqrt(d)` and `G_2..G_n` an orthonormal basis of the rest of
/// `X^perp`, the effects are `M_k = (G_k + ||G_k|| I)/(2c)` for `k >= 2` and
/// `M_1 = I - sum M_k`, where `c` is the sum of the operator norms of the
/// shifted operators. This keeps `M_1 >= I/2`.
pub fn observable_from_annihilator(x: &OperatorSubspace) -> Result<Observable> {
    let d = x.dim_space;
    let k = x.dim();
    if k > d * d - 1 {
        return Err(Error::TooLarge { dim: k, max: d * d - 1 });
    }
    let mut rows = DMatrix::<f64>::zeros(k + 1, d * d);
    for (i, b) in x.basis.iter().enumerate() {
        rows.set_row(i, &b.real_coords().transpose());
    }
    rows.set_row(k, &HermitianOperator::identity(d).real_coords().transpose());
    let split = rank_split(&rows, NULL_REL_TOL);
    if split.rank != k + 1 {
        return Err(Error::DependentBasis);
    }
    let id = HermitianOperator::identity(d);
    let shifted: Vec<HermitianOperator> = columns_to_operators(d, &split.null_space)
        .into_iter()
        .map(|g| {
            let n = g.op_norm();
            &g + &id.scaled(n)
        })
        .collect();
    let c: f64 = shifted.iter().map(|a| a.op_norm()).sum();
    let mut effects = Vec::with_capacity(shifted.len() + 1);
    let rest: Vec<HermitianOperator> = shifted.iter().map(|a| a.scaled(1.0 / (2.0 * c))).collect();
    let mut first = id.clone();
    for m in &rest {
        first = &first - m;
    }
    effects.push(first);
    effects.extend(rest);
    Observable::from_effects(effects)
}

/// Real subspace of traceless Hermitian operators on `C^d`, given by a
/// linearly independent basis.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSubspace {
    dim_space: usize,
    basis: Vec<HermitianOperator>,
}

impl OperatorSubspace {
    pub fn new(dim_space: usize, basis: Vec<HermitianOperator>) -> Result<Self> {
        Self::new_with(dim_space, basis, &Tolerances::global())
    }

    pub fn new_with(dim_space: usize, basis: Vec<HermitianOperator>, tol: &Tolerances) -> Result<Self> {
        if dim_space == 0 {
            return Err(Error::BadDimension(0));
        }
        for b in &basis {
            if b.dim() != dim_space {
                return Err(Error::DimMismatch { expected: dim_space, found: b.dim() });
            }
            let trace = b.trace();
            if trace.abs() > tol.trace * b.hs_norm().max(1.0) {
                return Err(Error::NonTraceless { trace });
            }
        }
        let s = OperatorSubspace { dim_space, basis };
        if rank_split(&s.coords().transpose(), NULL_REL_TOL).rank != s.basis.len() {
            return Err(Error::DependentBasis);
        }
        Ok(s)
    }

    /// The zero subspace.
    pub fn zero(dim_space: usize) -> Self {
        OperatorSubspace { dim_space, basis: Vec::new() }
    }

    pub fn dim_space(&self) -> usize {
        self.dim_space
    }

    /// Real dimension of the subspace.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[HermitianOperator] {
        &self.basis
    }

    /// Basis coordinates as columns of a `d^2 x dim` matrix.
    pub(crate) fn coords(&self) -> DMatrix<f64> {
        let n = self.dim_space * self.dim_space;
        let mut m = DMatrix::zeros(n, self.basis.len());
        for (k, b) in self.basis.iter().enumerate() {
            m.set_column(k, &b.real_coords());
        }
        m
    }

    /// Orthonormal coordinates (`d^2 x dim`) spanning the same subspace.
    pub(crate) fn orthonormal_coords(&self) -> DMatrix<f64> {
        if self.basis.is_empty() {
            return DMatrix::zeros(self.dim_space * self.dim_space, 0);
        }
        rank_split(&self.coords().transpose(), NULL_REL_TOL).row_space
    }

    /// Hilbert-Schmidt orthonormal basis of the same subspace.
    pub fn orthonormal_basis(&self) -> Vec<HermitianOperator> {
        columns_to_operators(self.dim_space, &self.orthonormal_coords())
    }

    /// `||T - P T|| / ||T||` with `P` the orthogonal projection onto the
    /// subspace; zero for `T = 0`.
    pub fn projection_residual(&self, t: &HermitianOperator) -> f64 {
        let v = t.real_coords();
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let q = self.orthonormal_coords();
        let proj = &q * (q.transpose() * &v);
        (v - proj).norm() / norm
    }

    /// Largest projection residual of either orthonormal basis onto the other
    /// subspace. Zero iff the spans agree.
    pub fn mutual_residual(&self, other: &OperatorSubspace) -> f64 {
        if self.dim_space != other.dim_space {
            return f64::INFINITY;
        }
        let a = self.orthonormal_basis();
        let b = other.orthonormal_basis();
        let ab = a.iter().map(|t| other.projection_residual(t));
        let ba = b.iter().map(|t| self.projection_residual(t));
        ab.chain(ba).fold(0.0, f64::max)
    }

    /// Whether the two subspaces coincide within `tol`.
    pub fn same_span(&self, other: &OperatorSubspace, tol: f64) -> bool {
        self.dim() == other.dim() && self.mutual_residual(other) <= tol
    }

    /// Element `sum c_k B_k` of the span.
    pub fn combination(&self, coeffs: &[f64]) -> HermitianOperator {
        let d = self.dim_space;
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for (b, c) in self.basis.iter().zip(coeffs) {
            m += b.matrix() * Complex64::new(*c, 0.0);
        }
        HermitianOperator::from_matrix_unchecked(m)
    }
}
