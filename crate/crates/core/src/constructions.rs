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

//! Explicit operators and observables: inequivalence counterexamples, the
//! `N'` subspace built from four 2x2 matrices, and minimal observables in
//! dimension four.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::herm::HermitianOperator;
use crate::observables::{observable_from_annihilator, Observable, OperatorSubspace};
use crate::weyl::PhasePoint;

/// Where a subspace came from. Informational: [`crate::determination::decide`]
/// recognizes the analytically certified families from the operators
/// themselves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    NPrime,
    PremiseCex { p1: usize },
    TaskCex { t1: usize },
    RankDeficitD4,
    WeylSingle { point: PhasePoint },
    WeylPair { point: PhasePoint },
    Generic,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::NPrime => "N_PRIME",
            Provenance::PremiseCex { .. } => "PREMISE_CEX",
            Provenance::TaskCex { .. } => "TASK_CEX",
            Provenance::RankDeficitD4 => "RANK_DEFICIT_D4",
            Provenance::WeylSingle { .. } => "WEYL_SINGLE",
            Provenance::WeylPair { .. } => "WEYL_PAIR",
            Provenance::Generic => "GENERIC",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaggedSubspace {
    pub subspace: OperatorSubspace,
    pub provenance: Provenance,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The four 2x2 matrices `sigma^1..sigma^4` (three Pauli matrices and `iI`)
/// defining `N(a) = sum a_i sigma^i`.
#[derive(Clone, Debug)]
pub struct SigmaQuadruple(pub [DMatrix<Complex64>; 4]);

impl SigmaQuadruple {
    pub fn standard() -> Self {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        SigmaQuadruple([
            DMatrix::from_row_slice(2, 2, &[z, one, one, z]),
            DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
            DMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
            DMatrix::from_row_slice(2, 2, &[i, z, z, i]),
        ])
    }

    /// `N(a)`, which satisfies `N(a)* N(a) = |a|^2 I`.
    pub fn n(&self, a: [f64; 4]) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(2, 2);
        for (s, ai) in self.0.iter().zip(a) {
            m += s * c(ai, 0.0);
        }
        m
    }
}

/// `A_0 = diag(I, -I)` and `A_i = [[0, sigma^i], [sigma^i*, 0]]`.
pub fn n_prime_basis() -> [HermitianOperator; 5] {
    let sig = SigmaQuadruple::standard();
    let a0 = HermitianOperator::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0]);
    let block = |s: &DMatrix<Complex64>| {
        let mut m = DMatrix::zeros(4, 4);
        m.view_mut((0, 2), (2, 2)).copy_from(s);
        m.view_mut((2, 0), (2, 2)).copy_from(&s.adjoint());
        HermitianOperator::from_matrix_unchecked(m)
    };
    [a0, block(&sig.0[0]), block(&sig.0[1]), block(&sig.0[2]), block(&sig.0[3])]
}

/// `N'(a_0, a) = [[a_0 I, N(a)], [N(a)*, -a_0 I]]`, with
/// `det N'(a_0, a) = (a_0^2 + |a|^2)^2`.
pub fn n_prime(a0: f64, a: [f64; 4]) -> HermitianOperator {
    let basis = n_prime_basis();
    let mut acc = basis[0].scaled(a0);
    for (b, ai) in basis[1..].iter().zip(a) {
        acc = &acc + &b.scaled(ai);
    }
    acc
}

/// The five-dimensional span of `A_0..A_4`.
pub fn n_prime_subspace() -> TaggedSubspace {
    let subspace = OperatorSubspace::new(4, n_prime_basis().to_vec()).expect("A_0..A_4 are independent");
    TaggedSubspace { subspace, provenance: Provenance::NPrime }
}

/// `R T` with `T = (1/(p1+1)) sum_{j<=p1} |j><j| - |p1+1><p1+1|`.
pub fn premise_counterexample(d: usize, p1: usize) -> Result<TaggedSubspace> {
    if p1 < 1 || p1 + 2 > d {
        return Err(Error::BadRange(format!("premise counterexample needs 1 <= p1 <= d-2, got p1={p1}, d={d}")));
    }
    let mut diag = vec![0.0; d];
    diag[..=p1].iter_mut().for_each(|x| *x = 1.0 / (p1 + 1) as f64);
    diag[p1 + 1] = -1.0;
    let subspace = OperatorSubspace::new(d, vec![HermitianOperator::from_real_diagonal(&diag)])?;
    Ok(TaggedSubspace { subspace, provenance: Provenance::PremiseCex { p1 } })
}

/// `R T` with `T` equal to `1/(t1+1)` on the first `t1+1` basis vectors and
/// `-1/(t1+1)` on the next `t1+1`.
pub fn task_counterexample(d: usize, t1: usize) -> Result<TaggedSubspace> {
    if t1 < 1 || 2 * t1 + 2 > d {
        return Err(Error::BadRange(format!("task counterexample needs 1 <= t1 and 2 t1 + 2 <= d, got t1={t1}, d={d}")));
    }
    let w = 1.0 / (t1 + 1) as f64;
    let mut diag = vec![0.0; d];
    diag[..=t1].iter_mut().for_each(|x| *x = w);
    diag[t1 + 1..2 * t1 + 2].iter_mut().for_each(|x| *x = -w);
    let subspace = OperatorSubspace::new(d, vec![HermitianOperator::from_real_diagonal(&diag)])?;
    Ok(TaggedSubspace { subspace, provenance: Provenance::TaskCex { t1 } })
}

/// `R diag(1/3, 1/3, 1/3, -1)`, a line of negative-determinant operators.
pub fn rank_deficit_d4() -> TaggedSubspace {
    let t = HermitianOperator::from_real_diagonal(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, -1.0]);
    let subspace = OperatorSubspace::new(4, vec![t]).expect("nonzero traceless generator");
    TaggedSubspace { subspace, provenance: Provenance::RankDeficitD4 }
}

/// `N'(R^5)` extended by `i A_1 A_2 = -diag(sigma^3, sigma^3)`.
///
/// Random elements have rank at least 3, but the extension is not certified:
/// elements with `a_1 = a_2 = 0` and `|a_0| = |s|` (for example `A_0 + B`)
/// have rank 2. Used only as the dimension-count realization of a
/// 10-outcome observable.
pub fn pure_vs_pure_upper_subspace() -> TaggedSubspace {
    let mut basis = n_prime_basis().to_vec();
    basis.push(HermitianOperator::from_real_diagonal(&[-1.0, 1.0, -1.0, 1.0]));
    let subspace = OperatorSubspace::new(4, basis).expect("independent");
    TaggedSubspace { subspace, provenance: Provenance::Generic }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinimalD4Kind {
    /// Pure states among all states: 11 outcomes.
    PureVsAll,
    /// Rank at most two among rank at most two: 15 outcomes.
    Rank2VsRank2,
    /// Pure among pure, 10 outcomes; not certified.
    PureVsPureUpper,
}

impl MinimalD4Kind {
    pub fn subspace(&self) -> TaggedSubspace {
        match self {
            MinimalD4Kind::PureVsAll => n_prime_subspace(),
            MinimalD4Kind::Rank2VsRank2 => rank_deficit_d4(),
            MinimalD4Kind::PureVsPureUpper => pure_vs_pure_upper_subspace(),
        }
    }

    pub fn is_certified(&self) -> bool {
        !matches!(self, MinimalD4Kind::PureVsPureUpper)
    }
}

pub fn minimal_d4_observable(kind: MinimalD4Kind) -> Observable {
    observable_from_annihilator(&kind.subspace().subspace).expect("subspace dimension below 15")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herm::rank_signature;
    use crate::observables::{annihilator, validate};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn sigma_relations() {
        let sig = SigmaQuadruple::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let a: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let n = sig.n(a);
            let norm2: f64 = a.iter().map(|x| x * x).sum();
            let id = DMatrix::<Complex64>::identity(2, 2) * c(norm2, 0.0);
            assert!((n.adjoint() * &n - &id).norm() < 1e-12 * norm2.max(1.0));
            assert!((&n * n.adjoint() - &id).norm() < 1e-12 * norm2.max(1.0));
        }
    }

    #[test]
    fn n_prime_examples() {
        let b = n_prime_basis();
        assert_eq!(b[0], HermitianOperator::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0]));
        assert!((n_prime(1.0, [0.0; 4]).det() - 1.0).abs() < 1e-14);
        let s = n_prime_subspace();
        assert_eq!(s.subspace.dim(), 5);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let a0: f64 = rng.sample(StandardNormal);
            let a: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let t = n_prime(a0, a);
            let closed = (a0 * a0 + a.iter().map(|x| x * x).sum::<f64>()).powi(2);
            // Oracle: determinant from nalgebra's LU on the complex matrix.
            let lu = t.matrix().clone().determinant();
            assert!((lu.re - closed).abs() <= 1e-9 * closed);
            assert!((t.det() - closed).abs() <= 1e-9 * closed);
            assert_eq!(t.rank_signature().as_tuple(), (2, 2, 2, 2, 4));
        }
    }

    #[test]
    fn counterexample_examples() {
        let s = premise_counterexample(3, 1).unwrap();
        assert_eq!(s.subspace.basis()[0], HermitianOperator::from_real_diagonal(&[0.5, 0.5, -1.0]));
        let s = premise_counterexample(5, 3).unwrap();
        assert_eq!(s.subspace.basis()[0].rank_signature().as_tuple(), (4, 1, 4, 1, 5));
        assert!(matches!(premise_counterexample(3, 2), Err(Error::BadRange(_))));
        assert!(matches!(premise_counterexample(3, 0), Err(Error::BadRange(_))));

        let s = task_counterexample(4, 1).unwrap();
        assert_eq!(s.subspace.basis()[0], HermitianOperator::from_real_diagonal(&[0.5, 0.5, -0.5, -0.5]));
        let s = task_counterexample(6, 2).unwrap();
        assert_eq!(s.subspace.basis()[0].rank_signature().as_tuple(), (3, 3, 3, 3, 6));
        assert!(matches!(task_counterexample(4, 2), Err(Error::BadRange(_))));
    }

    #[test]
    fn counterexample_signatures_all_ranges() {
        for d in 3..=10 {
            for p1 in 1..=d - 2 {
                let x = premise_counterexample(d, p1).unwrap().subspace;
                let t = &x.basis()[0];
                let s = rank_signature(t, None);
                assert_eq!((s.rank_up, s.rank_down), (p1 + 1, 1));
                assert!(t.trace().abs() < 1e-12);
            }
            for t1 in (1..).take_while(|t1| 2 * t1 + 2 <= d) {
                let s = task_counterexample(d, t1).unwrap().subspace.basis()[0].rank_signature();
                assert_eq!((s.rank_up, s.rank_down), (t1 + 1, t1 + 1));
            }
        }
    }

    #[test]
    fn rank_deficit_examples() {
        let s = rank_deficit_d4();
        let t = &s.subspace.basis()[0];
        assert!((t.det() + 1.0 / 27.0).abs() < 1e-14);
        assert_eq!(t.rank_signature().as_tuple(), (3, 1, 3, 1, 4));
        assert_eq!(minimal_d4_observable(MinimalD4Kind::Rank2VsRank2).num_outcomes(), 15);
    }

    #[test]
    fn minimal_d4_observables() {
        let obs = minimal_d4_observable(MinimalD4Kind::PureVsAll);
        assert_eq!(obs.num_outcomes(), 11);
        assert!(validate(&obs).is_valid());
        let ann = annihilator(&obs);
        assert_eq!(ann.dim(), 5);
        assert!(ann.same_span(&n_prime_subspace().subspace, 1e-9));

        let obs = minimal_d4_observable(MinimalD4Kind::PureVsPureUpper);
        assert_eq!(obs.num_outcomes(), 10);
        assert!(validate(&obs).is_valid());
        assert!(!MinimalD4Kind::PureVsPureUpper.is_certified());
    }

    #[test]
    fn pure_vs_pure_upper_random_elements_have_rank_three() {
        let s = pure_vs_pure_upper_subspace();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let coeffs: Vec<f64> = (0..6).map(|_| rng.sample(StandardNormal)).collect();
            assert!(s.subspace.combination(&coeffs).rank_signature().rank >= 3);
        }
        let b = s.subspace.basis();
        assert_eq!((&b[0] + &b[5]).rank_signature().rank, 2);
    }
}
