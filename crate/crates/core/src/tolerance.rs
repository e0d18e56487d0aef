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

//! Numerical tolerance family.
//!
//! Every public operation that compares floating point quantities takes its
//! thresholds from a [`Tolerances`] value. The process-wide default can be
//! replaced with [`Tolerances::set_global`]; operations with an explicit
//! tolerance argument use that instead.

use std::sync::RwLock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max entrywise deviation `|M - M*|` accepted when symmetrizing.
    pub hermit: f64,
    /// Max `|tr T|` for an operator to count as traceless.
    pub trace: f64,
    /// Spectral reconstruction error.
    pub spect: f64,
    /// Eigenvector Gram matrix deviation from identity.
    pub orth: f64,
    /// Min eigenvalue allowed for a PSD operator is `-psd`.
    pub psd: f64,
    /// `||sum of effects - I||_op` for an observable.
    pub completeness: f64,
    /// Probability vector normalization.
    pub prob: f64,
    /// Mutual projection residual for subspace equality.
    pub subspace: f64,
    /// Inverse Weyl transform magnitudes at or below this count as zero.
    pub zero: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermit: 1e-10,
        trace: 1e-10,
        spect: 1e-10,
        orth: 1e-10,
        psd: 1e-10,
        completeness: 1e-10,
        prob: 1e-10,
        subspace: 1e-9,
        zero: 1e-9,
    };

    /// Sets the linear-algebra family (hermit, trace, spect, orth, psd,
    /// completeness, prob) to `tol`; subspace and zero thresholds are kept.
    pub fn with_base(mut self, tol: f64) -> Self {
        self.hermit = tol;
        self.trace = tol;
        self.spect = tol;
        self.orth = tol;
        self.psd = tol;
        self.completeness = tol;
        self.prob = tol;
        self
    }

    pub fn global() -> Tolerances {
        *GLOBAL.read().unwrap_or_else(|e| e.into_inner())
    }

    pub fn set_global(tol: Tolerances) {
        *GLOBAL.write().unwrap_or_else(|e| e.into_inner()) = tol;
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::global()
    }
}

static GLOBAL: RwLock<Tolerances> = RwLock::new(Tolerances::DEFAULT);

/// Rank threshold: an eigenvalue counts as nonzero iff `|lambda| > tol` with
/// `tol = max(1e-12, 1e-9 * d * ||T||_op)`.
pub fn default_rank_tol(dim: usize, op_norm: f64) -> f64 {
    (1e-9 * dim as f64 * op_norm).max(1e-12)
}
