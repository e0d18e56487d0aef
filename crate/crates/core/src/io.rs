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

//! JSON exchange formats.
//!
//! * matrix: `{"dim": d, "re": [[...]], "im": [[...]]}`, row-major;
//! * observable: `{"dim": d, "effects": [{"label": "...", "re": ..., "im": ...}]}`;
//! * subspace: `{"dim": d, "basis": [matrix, ...]}`;
//! * verdict: `{"status": ..., "witness": matrix|null, "trials_used": n, "method": ...}`;
//! * zero set: `{"dim": d, "points": [[x, xi], ...]}`, sorted;
//! * noise: `{"dim": d, "weights": [[...]]}` with `weights[x][xi]`.
//!
//! Syntax and shape problems map to [`Error::Format`]; content that parses
//! but violates a mathematical precondition keeps its specific error.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::determination::{Lattice, Verdict};
use crate::error::{Error, Result};
use crate::herm::{hermitize, ComplexMatrix, HermitianOperator};
use crate::observables::{Observable, OperatorSubspace};
use crate::tolerance::Tolerances;
use crate::weyl::{FiducialState, NoiseMeasure, PhasePoint, ZeroSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &DMatrix<Complex64>) -> Self {
        let d = m.nrows();
        MatrixJson {
            dim: d,
            re: (0..d).map(|i| (0..d).map(|j| m[(i, j)].re).collect()).collect(),
            im: (0..d).map(|i| (0..d).map(|j| m[(i, j)].im).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::Format("matrix dim must be positive".into()));
        }
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == d && rows.iter().all(|r| r.len() == d);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::Format(format!("re/im must be {d}x{d} arrays")));
        }
        let entries: Vec<Complex64> = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| Complex64::new(self.re[i][j], self.im[i][j]))
            .collect();
        ComplexMatrix::from_row_major(d, &entries)
    }

    pub fn to_hermitian(&self, tol: &Tolerances) -> Result<HermitianOperator> {
        hermitize(&self.to_matrix()?, tol.hermit)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectJson {
    pub label: String,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableJson {
    pub dim: usize,
    pub effects: Vec<EffectJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub dim: usize,
    pub basis: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: String,
    pub witness: Option<MatrixJson>,
    pub trials_used: usize,
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSetJson {
    pub dim: usize,
    pub points: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseJson {
    pub dim: usize,
    pub weights: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassJson {
    pub canonical: [usize; 2],
    pub ic: bool,
    pub members: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub dim: usize,
    pub count: usize,
    pub classes: Vec<ClassJson>,
    pub implies: Vec<[[usize; 2]; 2]>,
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

pub fn matrix_to_json(m: &DMatrix<Complex64>) -> String {
    to_pretty(&MatrixJson::from_matrix(m))
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    parse::<MatrixJson>(text)?.to_matrix()
}

pub fn parse_hermitian(text: &str) -> Result<HermitianOperator> {
    parse::<MatrixJson>(text)?.to_hermitian(&Tolerances::global())
}

/// State file: a matrix object holding a density matrix.
pub fn parse_state(text: &str) -> Result<FiducialState> {
    FiducialState::new(parse_hermitian(text)?, "file")
}

pub fn observable_to_value(obs: &Observable) -> ObservableJson {
    ObservableJson {
        dim: obs.dim(),
        effects: obs
            .effects()
            .iter()
            .map(|e| {
                let m = MatrixJson::from_matrix(e.op.matrix());
                EffectJson { label: e.label.clone(), re: m.re, im: m.im }
            })
            .collect(),
    }
}

pub fn observable_to_json(obs: &Observable) -> String {
    to_pretty(&observable_to_value(obs))
}

/// Parses effects and checks shapes and Hermiticity; the POVM axioms are left
/// to [`crate::observables::validate`].
pub fn parse_observable(text: &str) -> Result<Observable> {
    let v: ObservableJson = parse(text)?;
    if v.effects.is_empty() {
        return Err(Error::Format("observable has no effects".into()));
    }
    let tol = Tolerances::global();
    let effects = v
        .effects
        .into_iter()
        .map(|e| {
            let m = MatrixJson { dim: v.dim, re: e.re, im: e.im };
            Ok((e.label, m.to_hermitian(&tol)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Observable::with_labels(effects)
}

pub fn subspace_to_value(x: &OperatorSubspace, provenance: Option<&str>) -> SubspaceJson {
    SubspaceJson {
        dim: x.dim_space(),
        basis: x.basis().iter().map(|b| MatrixJson::from_matrix(b.matrix())).collect(),
        provenance: provenance.map(str::to_string),
    }
}

pub fn subspace_to_json(x: &OperatorSubspace, provenance: Option<&str>) -> String {
    to_pretty(&subspace_to_value(x, provenance))
}

pub fn parse_subspace(text: &str) -> Result<OperatorSubspace> {
    let v: SubspaceJson = parse(text)?;
    let tol = Tolerances::global();
    let basis = v
        .basis
        .iter()
        .map(|m| {
            if m.dim != v.dim {
                return Err(Error::DimMismatch { expected: v.dim, found: m.dim });
            }
            m.to_hermitian(&tol)
        })
        .collect::<Result<Vec<_>>>()?;
    OperatorSubspace::new(v.dim, basis)
}

pub fn verdict_to_value(v: &Verdict) -> VerdictJson {
    VerdictJson {
        status: v.status.to_string(),
        witness: v.witness.as_ref().map(|w| MatrixJson::from_matrix(w.matrix())),
        trials_used: v.trials_used,
        method: v.method.clone(),
    }
}

pub fn verdict_to_json(v: &Verdict) -> String {
    to_pretty(&verdict_to_value(v))
}

pub fn lattice_to_value(l: &Lattice) -> LatticeJson {
    LatticeJson {
        dim: l.dim,
        count: l.classes.len(),
        classes: l
            .classes
            .iter()
            .map(|c| ClassJson {
                canonical: [c.canonical_t, c.canonical_p],
                ic: c.is_ic_class,
                members: c.members.iter().map(|&(t, p)| [t, p]).collect(),
            })
            .collect(),
        implies: l.implies.iter().map(|&((a, b), (c, d))| [[a, b], [c, d]]).collect(),
    }
}

pub fn zero_set_to_value(z: &ZeroSet) -> ZeroSetJson {
    ZeroSetJson { dim: z.dim(), points: z.points().map(|p| [p.x, p.xi]).collect() }
}

pub fn zero_set_to_json(z: &ZeroSet) -> String {
    to_pretty(&zero_set_to_value(z))
}

pub fn parse_zero_set(text: &str) -> Result<ZeroSet> {
    let v: ZeroSetJson = parse(text)?;
    ZeroSet::new(v.dim, v.points.iter().map(|&[x, xi]| PhasePoint { x, xi }))
}

pub fn noise_to_json(mu: &NoiseMeasure) -> String {
    let w = mu.weights();
    let d = mu.dim();
    to_pretty(&NoiseJson { dim: d, weights: (0..d).map(|x| (0..d).map(|xi| w[(x, xi)]).collect()).collect() })
}

pub fn parse_noise(text: &str) -> Result<NoiseMeasure> {
    let v: NoiseJson = parse(text)?;
    let d = v.dim;
    if v.weights.len() != d || v.weights.iter().any(|r| r.len() != d) {
        return Err(Error::Format(format!("weights must be a {d}x{d} array")));
    }
    NoiseMeasure::new(DMatrix::from_fn(d, d, |x, xi| v.weights[x][xi]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{minimal_d4_observable, n_prime_subspace, MinimalD4Kind};
    use crate::determination::{decide, implication_lattice, TaskPremise};

    #[test]
    fn matrix_round_trip_and_shape_errors() {
        let m = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(1.0, 0.0), Complex64::new(0.5, -0.25),
            Complex64::new(0.5, 0.25), Complex64::new(-1.0, 0.0),
        ]);
        let text = matrix_to_json(&m);
        assert_eq!(parse_matrix(&text).unwrap().matrix(), &m);
        assert!(matches!(parse_matrix(r#"{"dim": 2, "re": [[1]], "im": [[0]]}"#), Err(Error::Format(_))));
        assert!(matches!(parse_matrix(r#"{"dim": 2, "re": "#), Err(Error::Format(_))));
        let bad = r#"{"dim": 2, "re": [[0, 1], [0, 0]], "im": [[0, 0], [0, 0]]}"#;
        assert!(matches!(parse_hermitian(bad), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn observable_round_trip() {
        let obs = minimal_d4_observable(MinimalD4Kind::PureVsAll);
        let text = observable_to_json(&obs);
        let back = parse_observable(&text).unwrap();
        assert_eq!(back.num_outcomes(), 11);
        for (a, b) in obs.effects().iter().zip(back.effects()) {
            assert_eq!(a.label, b.label);
            assert!((&a.op - &b.op).hs_norm() < 1e-15);
        }
        assert_eq!(observable_to_json(&back), text);
    }

    #[test]
    fn subspace_and_verdict_json() {
        let x = n_prime_subspace().subspace;
        let text = subspace_to_json(&x, Some("N_PRIME"));
        assert!(parse_subspace(&text).unwrap().same_span(&x, 1e-12));
        let v = decide(&x, TaskPremise::new(2, 2, 4).unwrap(), 10, 0).unwrap();
        let j: serde_json::Value = serde_json::from_str(&verdict_to_json(&v)).unwrap();
        assert_eq!(j["status"], "CERTIFIED_NO");
        assert_eq!(j["witness"]["dim"], 4);
        let v = decide(&x, TaskPremise::new(1, 4, 4).unwrap(), 10, 0).unwrap();
        let j: serde_json::Value = serde_json::from_str(&verdict_to_json(&v)).unwrap();
        assert!(j["witness"].is_null());
    }

    #[test]
    fn lattice_zero_set_and_noise_json() {
        let l = lattice_to_value(&implication_lattice(4).unwrap());
        assert_eq!(l.count, 5);
        let z = ZeroSet::new(4, [PhasePoint { x: 0, xi: 3 }, PhasePoint { x: 0, xi: 1 }]).unwrap();
        let text = zero_set_to_json(&z);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["points"], serde_json::json!([[0, 1], [0, 3]]));
        assert_eq!(parse_zero_set(&text).unwrap(), z);
        let mu = NoiseMeasure::uniform(3);
        assert_eq!(parse_noise(&noise_to_json(&mu)).unwrap(), mu);
        assert!(matches!(parse_noise(r#"{"dim": 2, "weights": [[1.0]]}"#), Err(Error::Format(_))));
    }
}
