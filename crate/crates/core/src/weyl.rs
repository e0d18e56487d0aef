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

//! Finite Weyl-Heisenberg phase space `Z_d x Z_d`.
//!
//! `W(x, xi)` shifts the computational basis by `x` and multiplies `psi_j` by
//! `omega^(xi j)`, `omega = exp(2 pi i / d)`. The inverse Weyl transform of an
//! operator is `T^(x, xi) = tr[T W(x, xi)]`; its zero set controls the
//! annihilator of the covariant observable built from a fiducial state.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::constructions::{Provenance, TaggedSubspace};
use crate::error::{Error, Result};
use crate::herm::{rank_signature, ComplexMatrix, HermitianOperator, RankSignature};
use crate::observables::{Observable, OperatorSubspace};
use crate::tolerance::Tolerances;

/// Point `(x, xi)` of `Z_d x Z_d`, components reduced to `[0, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PhasePoint {
    pub x: usize,
    pub xi: usize,
}

impl PhasePoint {
    pub fn new(d: usize, x: i64, xi: i64) -> Self {
        let m = d as i64;
        PhasePoint { x: x.rem_euclid(m) as usize, xi: xi.rem_euclid(m) as usize }
    }

    pub fn origin() -> Self {
        PhasePoint { x: 0, xi: 0 }
    }

    pub fn is_origin(&self) -> bool {
        self.x == 0 && self.xi == 0
    }

    pub fn neg(&self, d: usize) -> Self {
        PhasePoint { x: (d - self.x) % d, xi: (d - self.xi) % d }
    }

    pub fn is_self_symmetric(&self, d: usize) -> bool {
        self.neg(d) == *self
    }

    fn in_range(&self, d: usize) -> bool {
        self.x < d && self.xi < d
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.xi)
    }
}

/// All points in row-major order (`x` outer, `xi` inner).
pub fn all_points(d: usize) -> impl Iterator<Item = PhasePoint> {
    (0..d).flat_map(move |x| (0..d).map(move |xi| PhasePoint { x, xi }))
}

/// `omega^k` for `omega = exp(2 pi i / d)`, with `k` reduced mod `d` first.
pub fn root_of_unity(d: usize, k: i64) -> Complex64 {
    let r = k.rem_euclid(d as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * r / d as f64)
}

/// The commutation phase `omega^(xi y)`.
pub fn pairing_phase(d: usize, xi: usize, y: usize) -> Complex64 {
    root_of_unity(d, ((xi % d) * (y % d)) as i64)
}

pub fn weyl_operator(d: usize, pt: PhasePoint) -> ComplexMatrix {
    ComplexMatrix::new(weyl_matrix(d, pt)).expect("square and finite")
}

pub(crate) fn weyl_matrix(d: usize, pt: PhasePoint) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(d, d);
    for j in 0..d {
        m[((j + pt.x) % d, j)] = root_of_unity(d, (pt.xi * j) as i64);
    }
    m
}

/// `d x d` table of transform values, indexed `[(x, xi)]`.
pub type WeylTable = DMatrix<Complex64>;

/// `T^(x, xi) = tr[T W(x, xi)] = sum_j T_{j, j+x} omega^(xi j)`.
pub fn inverse_weyl(t: &HermitianOperator) -> WeylTable {
    inverse_weyl_matrix(t.matrix())
}

pub(crate) fn inverse_weyl_matrix(t: &DMatrix<Complex64>) -> WeylTable {
    let d = t.nrows();
    DMatrix::from_fn(d, d, |x, xi| {
        (0..d)
            .map(|j| t[(j, (j + x) % d)] * root_of_unity(d, (xi * j) as i64))
            .sum()
    })
}

/// Inverse of [`inverse_weyl`]: `T = (1/d) sum T^(x, xi) W(x, xi)*`.
pub fn weyl_reconstruct(table: &WeylTable) -> DMatrix<Complex64> {
    let d = table.nrows();
    let mut m = DMatrix::zeros(d, d);
    for pt in all_points(d) {
        let c = table[(pt.x, pt.xi)];
        if c != Complex64::new(0.0, 0.0) {
            m += weyl_matrix(d, pt).adjoint() * c;
        }
    }
    m / Complex64::new(d as f64, 0.0)
}

/// Symmetric set of phase-space points avoiding the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroSet {
    dim: usize,
    points: BTreeSet<PhasePoint>,
}

impl ZeroSet {
    pub fn new(dim: usize, points: impl IntoIterator<Item = PhasePoint>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadDimension(dim));
        }
        let points: BTreeSet<PhasePoint> = points.into_iter().collect();
        for p in &points {
            if !p.in_range(dim) {
                return Err(Error::BadZeroSet(format!("point {p} outside Z_{dim}")));
            }
            if p.is_origin() {
                return Err(Error::BadZeroSet("contains the origin".into()));
            }
            if !points.contains(&p.neg(dim)) {
                return Err(Error::BadZeroSet(format!("{p} present but {} missing", p.neg(dim))));
            }
        }
        Ok(ZeroSet { dim, points })
    }

    /// Adds the missing partners `-z` before validating.
    pub fn symmetrized(dim: usize, points: impl IntoIterator<Item = PhasePoint>) -> Result<Self> {
        let mut all = BTreeSet::new();
        for p in points {
            all.insert(p);
            all.insert(PhasePoint::new(dim, -(p.x as i64), -(p.xi as i64)));
        }
        Self::new(dim, all)
    }

    pub fn empty(dim: usize) -> Self {
        ZeroSet { dim, points: BTreeSet::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points in sorted order.
    pub fn points(&self) -> impl Iterator<Item = &PhasePoint> {
        self.points.iter()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &PhasePoint) -> bool {
        self.points.contains(p)
    }

    pub fn union(&self, other: &ZeroSet) -> Result<ZeroSet> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: other.dim });
        }
        Ok(ZeroSet { dim: self.dim, points: self.points.union(&other.points).copied().collect() })
    }

    /// Orbit representatives of `{z, -z}`, the smaller point of each pair.
    fn orbits(&self) -> Vec<PhasePoint> {
        self.points.iter().filter(|p| **p <= p.neg(self.dim)).copied().collect()
    }
}

/// Uniformly chooses a random subset of the `{z, -z}` orbits.
pub fn random_zero_set<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ZeroSet {
    let mut orbits: Vec<PhasePoint> =
        all_points(d).filter(|p| !p.is_origin() && *p <= p.neg(d)).collect();
    orbits.shuffle(rng);
    let k = rng.random_range(0..=orbits.len());
    ZeroSet::symmetrized(d, orbits.into_iter().take(k)).expect("orbits are admissible")
}

/// Density matrix used as the seed of a covariant observable.
#[derive(Clone, Debug, PartialEq)]
pub struct FiducialState {
    pub tau: HermitianOperator,
    pub provenance: String,
}

impl FiducialState {
    pub fn new(tau: HermitianOperator, provenance: impl Into<String>) -> Result<Self> {
        tau.check_state(&Tolerances::global())?;
        Ok(FiducialState { tau, provenance: provenance.into() })
    }

    pub fn dim(&self) -> usize {
        self.tau.dim()
    }

    pub fn transform(&self) -> WeylTable {
        inverse_weyl(&self.tau)
    }
}

/// Points whose transform magnitude is at most `zero_tol`.
///
/// Magnitudes strictly between `zero_tol` and `10 zero_tol` raise
/// [`Error::AmbiguousZero`].
pub fn zero_set(tau: &FiducialState, zero_tol: f64) -> Result<ZeroSet> {
    zero_set_of_table(&tau.transform(), zero_tol)
}

fn zero_set_of_table(table: &WeylTable, zero_tol: f64) -> Result<ZeroSet> {
    let d = table.nrows();
    let upper = 10.0 * zero_tol;
    let mut points = Vec::new();
    for pt in all_points(d) {
        let v = table[(pt.x, pt.xi)].norm();
        if v <= zero_tol {
            points.push(pt);
        } else if v < upper {
            return Err(Error::AmbiguousZero { x: pt.x, xi: pt.xi, value: v, tol: zero_tol, upper });
        }
    }
    ZeroSet::new(d, points)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha == 0.0 || alpha.abs() >= 1.0 {
        return Err(Error::BadAlpha(alpha));
    }
    Ok(())
}

fn geometric_state(d: usize, beta: Complex64) -> HermitianOperator {
    let psi = DVector::from_iterator(d, (0..d).map(|j| beta.powu(j as u32)));
    HermitianOperator::projector(&psi).expect("first component is 1")
}

/// Pure state `psi_j ~ beta^j` with `beta = alpha exp(i pi / (2d))`.
///
/// Without the twist the transform vanishes at `(d/2, xi)`, `xi` odd, for
/// even `d`; see [`coherent_fiducial_raw`].
pub fn coherent_fiducial(d: usize, alpha: f64) -> Result<FiducialState> {
    check_alpha(alpha)?;
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    let beta = Complex64::from_polar(alpha, PI / (2.0 * d as f64));
    Ok(FiducialState { tau: geometric_state(d, beta), provenance: format!("coherent(alpha={alpha})") })
}

/// Untwisted geometric state `psi_j ~ alpha^j`. For even `d` its transform
/// vanishes at `(d/2, xi)` with `xi` odd.
pub fn coherent_fiducial_raw(d: usize, alpha: f64) -> Result<FiducialState> {
    check_alpha(alpha)?;
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    let beta = Complex64::new(alpha, 0.0);
    Ok(FiducialState { tau: geometric_state(d, beta), provenance: format!("coherent-raw(alpha={alpha})") })
}

/// Probability weights on `Z_d x Z_d`, stored `[(x, xi)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseMeasure {
    dim: usize,
    weights: DMatrix<f64>,
}

impl NoiseMeasure {
    pub fn new(weights: DMatrix<f64>) -> Result<Self> {
        let d = weights.nrows();
        if d != weights.ncols() {
            return Err(Error::BadNoise(format!("{}x{} weight table", weights.nrows(), weights.ncols())));
        }
        if d < 2 {
            return Err(Error::BadDimension(d));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::BadNoise("weights must be finite and nonnegative".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > Tolerances::global().prob {
            return Err(Error::BadNoise(format!("weights sum to {sum}")));
        }
        Ok(NoiseMeasure { dim: d, weights })
    }

    pub fn point_mass(d: usize, pt: PhasePoint) -> Self {
        let mut w = DMatrix::zeros(d, d);
        w[(pt.x % d, pt.xi % d)] = 1.0;
        NoiseMeasure { dim: d, weights: w }
    }

    pub fn uniform(d: usize) -> Self {
        NoiseMeasure { dim: d, weights: DMatrix::from_element(d, d, 1.0 / (d * d) as f64) }
    }

    /// Normalized sum of the bumps `f_z(y, zeta) = (1 + cos(2 pi (zeta x - xi y)/d))/d`
    /// over all `z` outside `zeros`, origin included. Its Fourier transform
    /// vanishes exactly on `zeros`.
    pub fn with_zero_set(zeros: &ZeroSet) -> Self {
        let d = zeros.dim();
        let complement: Vec<PhasePoint> = all_points(d).filter(|p| !zeros.contains(p)).collect();
        let mut w = DMatrix::zeros(d, d);
        for q in all_points(d) {
            let mut acc = 0.0;
            for z in &complement {
                let arg = (q.xi * z.x) as f64 - (z.xi * q.x) as f64;
                acc += (1.0 + (2.0 * PI * arg / d as f64).cos()) / d as f64;
            }
            w[(q.x, q.xi)] = acc;
        }
        let norm = (d * (complement.len() + 1)) as f64;
        NoiseMeasure { dim: d, weights: w / norm }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    /// Symplectic Fourier transform `mu^(x, xi) = sum omega^(xi y - zeta x) mu(y, zeta)`.
    pub fn fourier(&self) -> WeylTable {
        let d = self.dim;
        DMatrix::from_fn(d, d, |x, xi| {
            all_points(d)
                .map(|q| {
                    let k = (xi * q.x) as i64 - (q.xi * x) as i64;
                    root_of_unity(d, k) * self.weights[(q.x, q.xi)]
                })
                .sum()
        })
    }

    /// Zero set of the Fourier transform.
    pub fn zero_set(&self, zero_tol: f64) -> Result<ZeroSet> {
        zero_set_of_table(&self.fourier(), zero_tol)
    }
}

/// `tau = sum mu(x, xi) W tau0 W*`.
pub fn smear(tau0: &FiducialState, mu: &NoiseMeasure) -> Result<FiducialState> {
    let d = tau0.dim();
    if mu.dim() != d {
        return Err(Error::DimMismatch { expected: d, found: mu.dim() });
    }
    let mut acc = DMatrix::<Complex64>::zeros(d, d);
    for pt in all_points(d) {
        let w = mu.weights[(pt.x, pt.xi)];
        if w != 0.0 {
            let u = weyl_matrix(d, pt);
            acc += (&u * tau0.tau.matrix() * u.adjoint()) * Complex64::new(w, 0.0);
        }
    }
    Ok(FiducialState {
        tau: HermitianOperator::from_matrix_unchecked(acc),
        provenance: format!("smeared({})", tau0.provenance),
    })
}

/// A state whose transform vanishes exactly on `zeros`: the coherent state
/// smeared with [`NoiseMeasure::with_zero_set`].
pub fn fiducial_with_zero_set(d: usize, zeros: &ZeroSet, alpha: f64) -> Result<FiducialState> {
    if zeros.dim() != d {
        return Err(Error::DimMismatch { expected: d, found: zeros.dim() });
    }
    let tau0 = coherent_fiducial(d, alpha)?;
    if zeros.is_empty() {
        return Ok(tau0);
    }
    let mut tau = smear(&tau0, &NoiseMeasure::with_zero_set(zeros))?;
    let pts: Vec<String> = zeros.points().map(|p| p.to_string()).collect();
    tau.provenance = format!("zero-set[{}](alpha={alpha})", pts.join(""));
    Ok(tau)
}

/// `d^2`-outcome observable with effects `W tau W* / d`, labelled `"x,xi"`.
pub fn covariant_observable(tau: &FiducialState) -> Observable {
    let d = tau.dim();
    let effects = all_points(d)
        .map(|pt| {
            let u = weyl_matrix(d, pt);
            let e = (&u * tau.tau.matrix() * u.adjoint()) / Complex64::new(d as f64, 0.0);
            (format!("{},{}", pt.x, pt.xi), HermitianOperator::from_matrix_unchecked(e))
        })
        .collect();
    Observable::with_labels(effects).expect("d^2 effects of equal size")
}

/// Phase `sigma` with `sigma W(z)` Hermitian for a self-symmetric point:
/// `1` if `omega^(xi x) = 1`, `i` if it is `-1`.
fn self_symmetric_phase(d: usize, pt: PhasePoint) -> Complex64 {
    if pairing_phase(d, pt.xi, pt.x).re > 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 1.0)
    }
}

/// `sigma W(z) / sqrt(d)` for a self-symmetric point.
fn self_symmetric_generator(d: usize, pt: PhasePoint) -> HermitianOperator {
    let m = weyl_matrix(d, pt) * (self_symmetric_phase(d, pt) / (d as f64).sqrt());
    HermitianOperator::from_matrix_unchecked(m)
}

/// Hermitian part of `span{W(z) : z in Z}`, with the orthonormal basis
/// `(W + W*)/sqrt(2d)`, `i(W - W*)/sqrt(2d)` per pair `{z, -z}` and
/// `sigma W / sqrt(d)` per self-symmetric point.
pub fn annihilator_from_zero_set(d: usize, zeros: &ZeroSet) -> Result<TaggedSubspace> {
    if zeros.dim() != d {
        return Err(Error::DimMismatch { expected: d, found: zeros.dim() });
    }
    let mut basis = Vec::with_capacity(zeros.len());
    let scale = 1.0 / (2.0 * d as f64).sqrt();
    for z in zeros.orbits() {
        if z.is_self_symmetric(d) {
            basis.push(self_symmetric_generator(d, z));
        } else {
            let w = weyl_matrix(d, z);
            let wa = w.adjoint();
            let re = (&w + &wa) * Complex64::new(scale, 0.0);
            let im = (&w - &wa) * Complex64::new(0.0, scale);
            basis.push(HermitianOperator::from_matrix_unchecked(re));
            basis.push(HermitianOperator::from_matrix_unchecked(im));
        }
    }
    let orbits = zeros.orbits();
    let provenance = match orbits.as_slice() {
        [z] if z.is_self_symmetric(d) => Provenance::WeylSingle { point: *z },
        [z] => Provenance::WeylPair { point: *z },
        _ => Provenance::Generic,
    };
    let subspace = OperatorSubspace::new(d, basis)?;
    Ok(TaggedSubspace { subspace, provenance })
}

/// Points where `|T^| > rel_tol * ||T||_HS`.
pub(crate) fn weyl_support(t: &HermitianOperator, rel_tol: f64) -> Vec<PhasePoint> {
    let table = inverse_weyl(t);
    let thr = rel_tol * t.hs_norm() * (t.dim() as f64).sqrt();
    all_points(t.dim()).filter(|p| table[(p.x, p.xi)].norm() > thr).collect()
}

/// Structure of a single self-symmetric zero.
#[derive(Clone, Debug, Serialize)]
pub struct SinglePointReport {
    pub dim: usize,
    pub point: PhasePoint,
    #[serde(skip)]
    pub generator: HermitianOperator,
    pub signature: RankSignature,
    /// `(t, d)`-informational completeness holds for every `t` up to this.
    pub certified_max_t: usize,
    /// `(t, t)` fails for every `t` from this value on.
    pub refuted_from_t: usize,
}

pub fn single_point_analysis(d: usize, pt: PhasePoint) -> Result<SinglePointReport> {
    if d < 2 || !pt.in_range(d) {
        return Err(Error::BadZeroSet(format!("point {pt} outside Z_{d}")));
    }
    if pt.is_origin() {
        return Err(Error::BadZeroSet("contains the origin".into()));
    }
    if !pt.is_self_symmetric(d) {
        return Err(Error::NotSelfSymmetric { d, x: pt.x, xi: pt.xi });
    }
    let generator = self_symmetric_generator(d, pt);
    let signature = rank_signature(&generator, None);
    Ok(SinglePointReport {
        dim: d,
        point: pt,
        generator,
        signature,
        certified_max_t: signature.rank_down - 1,
        refuted_from_t: signature.rank_down,
    })
}

pub(crate) fn is_odd_prime(d: usize) -> bool {
    d >= 3 && d % 2 == 1 && (3..).step_by(2).take_while(|k| k * k <= d).all(|k| !d.is_multiple_of(k))
}

/// `W'(z) = omega^(2^-1 xi x) W(z)`, which satisfies `W'(z)^d = I`.
pub(crate) fn symmetric_weyl(d: usize, pt: PhasePoint) -> DMatrix<Complex64> {
    let half = d.div_ceil(2);
    let k = (half * pt.xi % d) * pt.x % d;
    weyl_matrix(d, pt) * root_of_unity(d, k as i64)
}

/// `(e^{i theta} W' + e^{-i theta} W'^*) / 2`, with eigenvalues
/// `cos(2 pi eta / d + theta)`.
pub(crate) fn cosine_element(d: usize, pt: PhasePoint, theta: f64) -> HermitianOperator {
    let w = symmetric_weyl(d, pt);
    let m = (&w * Complex64::from_polar(0.5, theta)) + (w.adjoint() * Complex64::from_polar(0.5, -theta));
    HermitianOperator::from_matrix_unchecked(m)
}

/// θ-sweep over the two-point annihilator at odd prime `d`.
#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub dim: usize,
    pub point: PhasePoint,
    pub grid: usize,
    pub min_rank_down: usize,
    pub max_rank_up: usize,
    /// Grid angle attaining the smallest `rank_up` among those with minimal `rank_down`.
    pub witness_theta: f64,
    pub witness_signature: RankSignature,
    pub certified_max_t: usize,
    pub refuted_t: usize,
}

pub fn two_point_prime_analysis(d: usize, pt: PhasePoint, theta_grid: usize) -> Result<PairReport> {
    if !is_odd_prime(d) {
        return Err(Error::NotOddPrime(d));
    }
    if !pt.in_range(d) || pt.is_origin() {
        return Err(Error::BadZeroSet(format!("point {pt} is not a nonzero point of Z_{d}")));
    }
    if theta_grid == 0 {
        return Err(Error::BadRange("theta grid must be positive".into()));
    }
    let sigs: Vec<(f64, RankSignature)> = (0..theta_grid)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / theta_grid as f64;
            (theta, rank_signature(&cosine_element(d, pt, theta), None))
        })
        .collect();
    let min_rank_down = sigs.iter().map(|(_, s)| s.rank_down).min().expect("nonempty grid");
    let max_rank_up = sigs.iter().map(|(_, s)| s.rank_up).max().expect("nonempty grid");
    let (witness_theta, witness_signature) = sigs
        .iter()
        .filter(|(_, s)| s.rank_down == min_rank_down)
        .min_by_key(|(_, s)| s.rank_up)
        .copied()
        .expect("nonempty grid");
    Ok(PairReport {
        dim: d,
        point: pt,
        grid: theta_grid,
        min_rank_down,
        max_rank_up,
        witness_theta,
        witness_signature,
        certified_max_t: min_rank_down - 1,
        refuted_t: (d - 1) / 2,
    })
}
