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

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian: max |M - M*| = {deviation:e} exceeds {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("operator is zero")]
    ZeroOperator,
    #[error("operator is not traceless: trace = {trace:e}")]
    NonTraceless { trace: f64 },
    #[error("basis is empty")]
    EmptyBasis,
    #[error("basis elements are linearly dependent")]
    DependentBasis,
    #[error("not a state: {0}")]
    NotAState(String),
    #[error("invalid observable: {0}")]
    InvalidObservable(String),
    #[error("subspace dimension {dim} exceeds the maximum {max}")]
    TooLarge { dim: usize, max: usize },
    #[error("invalid task/premise pair (t={t}, p={p}, d={d}): need 1 <= t <= p <= d")]
    InvalidTaskPremise { t: usize, p: usize, d: usize },
    #[error("parameter out of range: {0}")]
    BadRange(String),
    #[error("unsupported dimension {0}")]
    BadDimension(usize),
    #[error("inadmissible zero set: {0}")]
    BadZeroSet(String),
    #[error("alpha must satisfy 0 < |alpha| < 1, got {0}")]
    BadAlpha(f64),
    #[error("ambiguous zero at ({x},{xi}): |value| = {value:e} lies in the guard band ({tol:e}, {upper:e})")]
    AmbiguousZero { x: usize, xi: usize, value: f64, tol: f64, upper: f64 },
    #[error("phase point ({x},{xi}) is not self-symmetric in dimension {d}")]
    NotSelfSymmetric { d: usize, x: usize, xi: usize },
    #[error("{0} is not an odd prime")]
    NotOddPrime(usize),
    #[error("invalid noise measure: {0}")]
    BadNoise(String),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
