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

//! Hermitian operator arithmetic on `C^d`.
//!
//! [`HermitianOperator`] is the workhorse type of the crate: effects of an
//! observable, annihilator elements, density matrices and fiducial states are
//! all stored as Hermitian operators. Rank queries are tolerance-aware; see
//! [`crate::tolerance::default_rank_tol`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tolerance::{default_rank_tol, Tolerances};

/// Square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.nrows() == 0 {
            return Err(Error::BadDimension(0));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix(m))
    }

    /// Builds a `dim x dim` matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch { expected: dim * dim, found: entries.len() });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Largest entrywise modulus of `M - M*`.
    pub fn hermitian_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

/// Returns `(M + M*)/2`, provided `M` is Hermitian up to `tol`.
pub fn hermitize(m: &ComplexMatrix, tol: f64) -> Result<HermitianOperator> {
    let deviation = m.hermitian_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }
    let sym = (m.matrix() + m.matrix().adjoint()) * Complex64::new(0.5, 0.0);
    Ok(HermitianOperator(sym))
}

/// Self-adjoint `d x d` complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator(DMatrix<Complex64>);

impl HermitianOperator {
    /// Symmetrizes `m` under the global Hermiticity tolerance.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        hermitize(&ComplexMatrix::new(m)?, Tolerances::global().hermit)
    }

    /// Symmetrizes `m` without checking; for internally produced matrices
    /// that are Hermitian by construction.
    pub(crate) fn from_matrix_unchecked(m: DMatrix<Complex64>) -> Self {
        let sym = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        HermitianOperator(sym)
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianOperator(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOperator(DMatrix::identity(dim, dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
        HermitianOperator(DMatrix::from_diagonal(&v))
    }

    /// Rank-one projector onto the (normalized) vector `psi`.
    pub fn projector(psi: &DVector<Complex64>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroOperator);
        }
        let v = psi.unscale(norm);
        Ok(HermitianOperator::from_matrix_unchecked(&v * v.adjoint()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn hs_norm(&self) -> f64 {
        self.0.norm()
    }

    /// Operator norm, the largest eigenvalue modulus.
    pub fn op_norm(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.0.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    pub fn det(&self) -> f64 {
        self.eigenvalues().iter().product()
    }

    pub fn spectral(&self) -> SpectralDecomposition {
        let eig = self.0.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
        SpectralDecomposition { eigenvalues, eigenvectors }
    }

    pub fn rank_signature(&self) -> RankSignature {
        rank_signature(self, None)
    }

    /// Real coordinates over the fixed orthonormal Hermitian basis (see
    /// [`hermitian_basis`]).
    pub fn real_coords(&self) -> DVector<f64> {
        let d = self.dim();
        let s2 = std::f64::consts::SQRT_2;
        let mut out = DVector::zeros(d * d);
        for k in 0..d {
            out[k] = self.0[(k, k)].re;
        }
        let mut idx = d;
        for j in 0..d {
            for k in (j + 1)..d {
                out[idx] = s2 * self.0[(j, k)].re;
                out[idx + 1] = -s2 * self.0[(j, k)].im;
                idx += 2;
            }
        }
        out
    }

    /// Inverse of [`HermitianOperator::real_coords`].
    pub fn from_real_coords(dim: usize, coords: &[f64]) -> Result<Self> {
        if coords.len() != dim * dim {
            return Err(Error::DimMismatch { expected: dim * dim, found: coords.len() });
        }
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for k in 0..dim {
            m[(k, k)] = Complex64::new(coords[k], 0.0);
        }
        let mut idx = dim;
        for j in 0..dim {
            for k in (j + 1)..dim {
                let z = Complex64::new(r * coords[idx], -r * coords[idx + 1]);
                m[(j, k)] = z;
                m[(k, j)] = z.conj();
                idx += 2;
            }
        }
        Ok(HermitianOperator(m))
    }

    /// `self * c` with `c` real.
    pub fn scaled(&self, c: f64) -> Self {
        HermitianOperator(&self.0 * Complex64::new(c, 0.0))
    }

    /// Normalized to unit Hilbert-Schmidt norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.hs_norm();
        if n == 0.0 {
            return Err(Error::ZeroOperator);
        }
        Ok(self.scaled(1.0 / n))
    }

    /// Checks density-matrix conditions (PSD and unit trace).
    pub fn check_state(&self, tol: &Tolerances) -> Result<()> {
        let min = self.min_eigenvalue();
        if min < -tol.psd {
            return Err(Error::NotAState(format!("minimum eigenvalue {min:e}")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > tol.trace {
            return Err(Error::NotAState(format!("trace {tr}")));
        }
        Ok(())
    }
}

impl fmt::Display for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator(&self.0 + &rhs.0)
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &HermitianOperator {
    type Output = HermitianOperator;
    fn mul(self, rhs: f64) -> HermitianOperator {
        self.scaled(rhs)
    }
}

impl Neg for &HermitianOperator {
    type Output = HermitianOperator;
    fn neg(self) -> HermitianOperator {
        self.scaled(-1.0)
    }
}

/// The fixed real orthonormal basis of Hermitian `d x d` matrices: diagonal
/// units, then for each `j < k` the normalized symmetric and antisymmetric
/// off-diagonal pair.
pub fn hermitian_basis(dim: usize) -> Vec<HermitianOperator> {
    (0..dim * dim)
        .map(|i| {
            let mut e = vec![0.0; dim * dim];
            e[i] = 1.0;
            HermitianOperator::from_real_coords(dim, &e).expect("length matches")
        })
        .collect()
}

/// Counts of strictly positive and negative eigenvalues and derived ranks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RankSignature {
    pub rank_plus: usize,
    pub rank_minus: usize,
    pub rank_up: usize,
    pub rank_down: usize,
    pub rank: usize,
}

impl RankSignature {
    pub fn from_counts(rank_plus: usize, rank_minus: usize) -> Self {
        RankSignature {
            rank_plus,
            rank_minus,
            rank_up: rank_plus.max(rank_minus),
            rank_down: rank_plus.min(rank_minus),
            rank: rank_plus + rank_minus,
        }
    }

    pub fn as_tuple(&self) -> (usize, usize, usize, usize, usize) {
        (self.rank_plus, self.rank_minus, self.rank_up, self.rank_down, self.rank)
    }
}

/// Signature of `t`. Eigenvalues above `rank_tol` count as positive, below
/// `-rank_tol` as negative; `None` selects the default scaled threshold.
pub fn rank_signature(t: &HermitianOperator, rank_tol: Option<f64>) -> RankSignature {
    signature_of_eigenvalues(&t.eigenvalues(), t.dim(), rank_tol)
}

pub(crate) fn signature_of_eigenvalues(ev: &[f64], dim: usize, rank_tol: Option<f64>) -> RankSignature {
    let op = ev.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let tol = rank_tol.unwrap_or_else(|| default_rank_tol(dim, op));
    let plus = ev.iter().filter(|&&x| x > tol).count();
    let minus = ev.iter().filter(|&&x| x < -tol).count();
    RankSignature::from_counts(plus, minus)
}

/// Eigenvalues (descending) with orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<DVector<Complex64>>,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let d = self.eigenvectors.first().map_or(0, |v| v.len());
        let mut m = DMatrix::zeros(d, d);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            m += v * v.adjoint() * Complex64::new(*lambda, 0.0);
        }
        m
    }

    /// Largest entry of `|V* V - I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.eigenvectors.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let g = self.eigenvectors[i].dotc(&self.eigenvectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// `T = lambda (rho_plus - rho_minus)` with density matrices of ranks
/// `rank_+(T)` and `rank_-(T)`.
#[derive(Clone, Debug)]
pub struct JordanPair {
    pub lambda: f64,
    pub rho_plus: HermitianOperator,
    pub rho_minus: HermitianOperator,
}

impl JordanPair {
    pub fn reconstruct(&self) -> HermitianOperator {
        (&self.rho_plus - &self.rho_minus).scaled(self.lambda)
    }
}

/// Splits a traceless operator into its normalized positive and negative
/// parts.
pub fn jordan_decompose(t: &HermitianOperator) -> Result<JordanPair> {
    jordan_decompose_with(t, &Tolerances::global())
}

pub fn jordan_decompose_with(t: &HermitianOperator, tol: &Tolerances) -> Result<JordanPair> {
    let trace = t.trace();
    if trace.abs() > tol.trace {
        return Err(Error::NonTraceless { trace });
    }
    let spec = t.spectral();
    let op = spec.eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let rank_tol = default_rank_tol(t.dim(), op);
    let d = t.dim();
    let mut plus = DMatrix::<Complex64>::zeros(d, d);
    let mut minus = DMatrix::<Complex64>::zeros(d, d);
    let mut lambda = 0.0;
    for (l, v) in spec.eigenvalues.iter().zip(&spec.eigenvectors) {
        let p = v * v.adjoint();
        if *l > rank_tol {
            plus += p * Complex64::new(*l, 0.0);
            lambda += l;
        } else if *l < -rank_tol {
            minus += p * Complex64::new(-l, 0.0);
        }
    }
    if lambda == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let inv = Complex64::new(1.0 / lambda, 0.0);
    Ok(JordanPair {
        lambda,
        rho_plus: HermitianOperator::from_matrix_unchecked(plus * inv),
        rho_minus: HermitianOperator::from_matrix_unchecked(minus * inv),
    })
}

/// Hilbert-Schmidt pairing `tr[A B]`, real for Hermitian arguments.
pub fn hs_inner(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(a.0.iter().zip(b.0.transpose().iter()).map(|(x, y)| (x * y).re).sum())
}

/// Random unit-HS-norm element `sum c_k B_k` with `c_k` i.i.d. standard
/// normal, reproducible from `seed`.
pub fn random_traceless_in_span(basis: &[HermitianOperator], seed: u64) -> Result<HermitianOperator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_in_span(basis, &mut rng)
}

pub(crate) fn random_in_span<R: Rng + ?Sized>(basis: &[HermitianOperator], rng: &mut R) -> Result<HermitianOperator> {
    let first = basis.first().ok_or(Error::EmptyBasis)?;
    let d = first.dim();
    let mut acc = DMatrix::<Complex64>::zeros(d, d);
    for b in basis {
        if b.dim() != d {
            return Err(Error::DimMismatch { expected: d, found: b.dim() });
        }
        let c: f64 = rng.sample(StandardNormal);
        acc += &b.0 * Complex64::new(c, 0.0);
    }
    HermitianOperator(acc).normalized()
}

/// Random samplers used by property tests and the acceptance suite.
pub mod random {
    use super::*;

    fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
        DMatrix::from_fn(rows, cols, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    }

    /// GUE-like Hermitian matrix.
    pub fn hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
        HermitianOperator::from_matrix_unchecked(gaussian_matrix(dim, dim, rng))
    }

    /// Random traceless Hermitian matrix.
    pub fn traceless<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
        let h = hermitian(dim, rng);
        let shift = h.trace() / dim as f64;
        &h - &HermitianOperator::identity(dim).scaled(shift)
    }

    /// Random density matrix of the given rank (`G G* / tr` with `G` a
    /// `dim x rank` Ginibre matrix).
    pub fn density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> HermitianOperator {
        let g = gaussian_matrix(dim, rank.max(1), rng);
        let m = &g * g.adjoint();
        let tr = m.trace().re;
        HermitianOperator::from_matrix_unchecked(m * Complex64::new(1.0 / tr, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitize_examples() {
        let m = ComplexMatrix::from_row_major(2, &[c(0., 0.), c(0., 1.), c(0., -1.), c(0., 0.)]).unwrap();
        let h = hermitize(&m, 1e-12).unwrap();
        assert_eq!(h.matrix(), m.matrix());

        let m = ComplexMatrix::from_row_major(2, &[c(1., 0.), c(1e-14, 0.), c(0., 0.), c(1., 0.)]).unwrap();
        let h = hermitize(&m, 1e-12).unwrap();
        assert!((h.matrix()[(0, 1)].re - 5e-15).abs() < 1e-30);
        assert!((h.matrix()[(1, 0)].re - 5e-15).abs() < 1e-30);

        let m = ComplexMatrix::from_row_major(2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert!(matches!(hermitize(&m, 1e-12), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn complex_matrix_rejects_bad_input() {
        assert!(matches!(ComplexMatrix::new(DMatrix::zeros(2, 3)), Err(Error::NotSquare { .. })));
        let m = DMatrix::from_element(2, 2, c(f64::NAN, 0.0));
        assert_eq!(ComplexMatrix::new(m), Err(Error::NonFinite));
    }

    #[test]
    fn signature_examples() {
        let t = HermitianOperator::from_real_diagonal(&[0.5, 0.5, -1.0]);
        assert_eq!(t.rank_signature().as_tuple(), (2, 1, 2, 1, 3));
        let z = HermitianOperator::zeros(3);
        assert_eq!(z.rank_signature().as_tuple(), (0, 0, 0, 0, 0));
        let t = HermitianOperator::from_real_diagonal(&[0.5, 0.5, -0.5, -0.5]);
        assert_eq!(t.rank_signature().as_tuple(), (2, 2, 2, 2, 4));
    }

    #[test]
    fn jordan_examples() {
        let t = HermitianOperator::from_real_diagonal(&[0.5, 0.5, -1.0]);
        let j = jordan_decompose(&t).unwrap();
        assert!((j.lambda - 1.0).abs() < 1e-14);
        let expect_plus = HermitianOperator::from_real_diagonal(&[0.5, 0.5, 0.0]);
        let expect_minus = HermitianOperator::from_real_diagonal(&[0.0, 0.0, 1.0]);
        assert!((&j.rho_plus - &expect_plus).hs_norm() < 1e-14);
        assert!((&j.rho_minus - &expect_minus).hs_norm() < 1e-14);

        let t = HermitianOperator::from_real_diagonal(&[1.0, -1.0]);
        let j = jordan_decompose(&t).unwrap();
        assert!((j.lambda - 1.0).abs() < 1e-14);
        assert!((&j.rho_plus - &HermitianOperator::from_real_diagonal(&[1.0, 0.0])).hs_norm() < 1e-14);

        let t = HermitianOperator::from_real_diagonal(&[0.25; 4]);
        assert!(matches!(jordan_decompose(&t), Err(Error::NonTraceless { .. })));
        assert_eq!(jordan_decompose(&HermitianOperator::zeros(3)).unwrap_err(), Error::ZeroOperator);
    }

    #[test]
    fn hs_inner_examples() {
        let id = HermitianOperator::identity(5);
        assert!((hs_inner(&id, &id).unwrap() - 5.0).abs() < 1e-15);
        let sx = HermitianOperator::new(DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])).unwrap();
        let sz = HermitianOperator::from_real_diagonal(&[1.0, -1.0]);
        // Oracle: tr[sx sz] computed by explicit 2x2 product.
        let prod = sx.matrix() * sz.matrix();
        let oracle = (prod[(0, 0)] + prod[(1, 1)]).re;
        assert_eq!(oracle, 0.0);
        assert!(hs_inner(&sx, &sz).unwrap().abs() < 1e-15);
        assert!((hs_inner(&sz, &sz).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(hs_inner(&sz, &id), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn random_span_examples() {
        let b = vec![HermitianOperator::from_real_diagonal(&[1.0, -1.0])];
        for seed in 0..5 {
            let t = random_traceless_in_span(&b, seed).unwrap();
            let target = HermitianOperator::from_real_diagonal(&[1.0, -1.0]).scaled(std::f64::consts::FRAC_1_SQRT_2);
            assert!((&t - &target).hs_norm() < 1e-14 || (&t + &target).hs_norm() < 1e-14);
        }
        assert_eq!(random_traceless_in_span(&[], 1).unwrap_err(), Error::EmptyBasis);

        let b = vec![
            HermitianOperator::from_real_diagonal(&[1.0, -1.0, 0.0]),
            HermitianOperator::from_real_diagonal(&[0.0, 1.0, -1.0]),
        ];
        let t1 = random_traceless_in_span(&b, 42).unwrap();
        let t2 = random_traceless_in_span(&b, 42).unwrap();
        assert_eq!(t1, t2);
        assert!(t1.trace().abs() <= 1e-12);
        assert!((t1.hs_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn real_coords_roundtrip_and_basis_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random::hermitian(4, &mut rng);
        let back = HermitianOperator::from_real_coords(4, h.real_coords().as_slice()).unwrap();
        assert!((&h - &back).hs_norm() < 1e-13);
        let basis = hermitian_basis(3);
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let g = hs_inner(a, b).unwrap();
                assert!((g - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
        // Coordinates are HS inner products with the basis.
        for (i, b) in basis.iter().enumerate() {
            let h3 = random::hermitian(3, &mut rng);
            assert!((h3.real_coords()[i] - hs_inner(b, &h3).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_decomposition_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in 1..8 {
            let h = random::hermitian(d, &mut rng);
            let s = h.spectral();
            assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            assert!((s.reconstruct() - h.matrix()).norm() <= 1e-10 * h.hs_norm().max(1.0));
            assert!(s.orthogonality_error() <= 1e-10);
        }
    }

    #[test]
    fn traceless_operators_obey_rank_inequalities() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 2..=8 {
            for _ in 0..1000 {
                // Random support size exercises rank-deficient operators too.
                let k = rng.random_range(2..=d);
                let mut ev: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
                let mean = ev.iter().sum::<f64>() / k as f64;
                ev.iter_mut().for_each(|x| *x -= mean);
                ev.resize(d, 0.0);
                let u = random::hermitian(d, &mut rng).spectral().eigenvectors;
                let mut m = DMatrix::<Complex64>::zeros(d, d);
                for (l, v) in ev.iter().zip(&u) {
                    m += v * v.adjoint() * c(*l, 0.0);
                }
                let t = HermitianOperator::from_matrix_unchecked(m);
                let s = t.rank_signature();
                assert!(1 <= s.rank_down && s.rank_down <= s.rank_up);
                assert!(s.rank_up < s.rank && s.rank <= d, "{s:?}");
            }
        }
    }

    #[test]
    fn fan_rank_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..1000 {
            let d = rng.random_range(2..=6);
            let r1 = rng.random_range(1..=d);
            let r2 = rng.random_range(1..=d);
            let rho1 = random::density(d, r1, &mut rng);
            let rho2 = random::density(d, r2, &mut rng);
            let lambda = rng.random_range(0.1..10.0);
            let t = (&rho1 - &rho2).scaled(lambda);
            let s = t.rank_signature();
            assert!(rho1.rank_signature().rank >= s.rank_plus);
            assert!(rho2.rank_signature().rank >= s.rank_minus);
        }
    }

    proptest! {
        #[test]
        fn negation_swaps_signs(seed in any::<u64>(), d in 2usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random::traceless(d, &mut rng);
            let s = t.rank_signature();
            let n = (-&t).rank_signature();
            prop_assert_eq!(s.rank_plus, n.rank_minus);
            prop_assert_eq!(s.rank_minus, n.rank_plus);
            prop_assert_eq!(s.rank_up, n.rank_up);
            prop_assert_eq!(s.rank_down, n.rank_down);
        }

        #[test]
        fn signature_scale_invariant(seed in any::<u64>(), d in 2usize..7, log_c in -3.0f64..3.0, neg in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random::traceless(d, &mut rng);
            let c = 10f64.powf(log_c) * if neg { -1.0 } else { 1.0 };
            let s = t.rank_signature();
            let sc = t.scaled(c).rank_signature();
            prop_assert_eq!(s.rank_up, sc.rank_up);
            prop_assert_eq!(s.rank_down, sc.rank_down);
            prop_assert_eq!(s.rank, sc.rank);
        }

        #[test]
        fn jordan_roundtrip(seed in any::<u64>(), d in 2usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random::traceless(d, &mut rng);
            let j = jordan_decompose(&t).unwrap();
            let err = (&t - &j.reconstruct()).hs_norm();
            prop_assert!(err <= 1e-10 * t.hs_norm());
            let s = t.rank_signature();
            prop_assert_eq!(j.rho_plus.rank_signature().rank, s.rank_plus);
            prop_assert_eq!(j.rho_minus.rank_signature().rank, s.rank_minus);
            prop_assert!((j.rho_plus.trace() - 1.0).abs() < 1e-10);
            prop_assert!((j.rho_minus.trace() - 1.0).abs() < 1e-10);
        }
    }
}
