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

//! Deciding `(t, p)`-informational completeness from an annihilator, the
//! equivalence classes of `(t, p)` pairs, and outcome-count bounds.
//!
//! An observable is `(t, p)`-informationally complete (states of rank at most
//! `t` are determined among states of rank at most `p`) iff every nonzero `T`
//! in its annihilator has `rank_down(T) >= t + 1` or `rank_up(T) >= p + 1`.
//! A nonzero element violating both is a witness: its Jordan parts are two
//! distinct states, of ranks within `t` and `p`, with equal statistics.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herm::{random_in_span, rank_signature, signature_of_eigenvalues, HermitianOperator, RankSignature};
use crate::observables::OperatorSubspace;
use crate::weyl::{cosine_element, is_odd_prime, weyl_support, PhasePoint};

/// Task rank `t` and premise rank `p` on `C^d`, `1 <= t <= p <= d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TaskPremise {
    pub t: usize,
    pub p: usize,
    pub dim: usize,
}

impl TaskPremise {
    pub fn new(t: usize, p: usize, dim: usize) -> Result<Self> {
        if t < 1 || t > p || p > dim {
            return Err(Error::InvalidTaskPremise { t, p, d: dim });
        }
        Ok(TaskPremise { t, p, dim })
    }

    /// Whether `sig` belongs to a nonzero operator separating no state pair
    /// the property requires, i.e. a witness against it.
    pub fn is_violated_by(&self, sig: &RankSignature) -> bool {
        sig.rank > 0 && sig.rank_down <= self.t && sig.rank_up <= self.p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    CertifiedYes,
    CertifiedNo,
    Unresolved,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::CertifiedYes => "CERTIFIED_YES",
            Status::CertifiedNo => "CERTIFIED_NO",
            Status::Unresolved => "UNRESOLVED",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub status: Status,
    /// Present iff `status` is `CertifiedNo`.
    pub witness: Option<HermitianOperator>,
    /// Random trials evaluated.
    pub trials_used: usize,
    pub method: String,
}

impl Verdict {
    fn yes(method: &str) -> Self {
        Verdict { status: Status::CertifiedYes, witness: None, trials_used: 0, method: method.into() }
    }

    fn no(witness: HermitianOperator, trials_used: usize, method: &str) -> Self {
        Verdict { status: Status::CertifiedNo, witness: Some(witness), trials_used, method: method.into() }
    }
}

pub const DEFAULT_TRIALS: usize = 10_000;

/// Grid sizes for arcs between structured candidates and between random ones.
const ARC_STEPS: usize = 48;
const RANDOM_ARC_STEPS: usize = 16;
const GOLDEN_STEPS: usize = 90;
/// Tolerance for the anticommutation and Weyl-support certificates.
const CERT_TOL: f64 = 1e-9;

/// Decides `(t, p)`-informational completeness of any observable whose
/// annihilator is `x`.
///
/// Exact on the zero subspace, on lines, on subspaces whose orthonormal bases
/// anticommute (every element then has `T^2` proportional to `I`), and on
/// two-point Weyl subspaces at odd prime `d`. Otherwise searches structured
/// candidates, singular elements along arcs between them, then `trials`
/// random elements and arcs; without a witness the verdict is `Unresolved`.
/// Deterministic for fixed `seed` regardless of thread count.
pub fn decide(x: &OperatorSubspace, tp: TaskPremise, trials: usize, seed: u64) -> Result<Verdict> {
    let d = x.dim_space();
    if tp.dim != d {
        return Err(Error::DimMismatch { expected: d, found: tp.dim });
    }
    match x.dim() {
        0 => return Ok(Verdict::yes("trivial")),
        1 => {
            let g = &x.basis()[0];
            return Ok(if tp.is_violated_by(&g.rank_signature()) {
                Verdict::no(g.clone(), 0, "exact-line")
            } else {
                Verdict::yes("exact-line")
            });
        }
        _ => {}
    }
    if let Some(v) = anticommuting_certificate(x, tp) {
        return Ok(v);
    }
    if let Some(v) = weyl_pair_certificate(x, tp) {
        return Ok(v);
    }
    let basis = x.basis();
    for (i, a) in basis.iter().enumerate() {
        if tp.is_violated_by(&a.rank_signature()) {
            return Ok(Verdict::no(a.clone(), 0, "structured"));
        }
        for b in &basis[i + 1..] {
            for cand in [a + b, a - b] {
                if tp.is_violated_by(&cand.rank_signature()) {
                    return Ok(Verdict::no(cand, 0, "structured"));
                }
            }
        }
    }
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            if let Some(w) = arc_witness(a, b, tp, ARC_STEPS) {
                return Ok(Verdict::no(w, 0, "det-root"));
            }
        }
    }
    let found = (0..trials).into_par_iter().find_map_first(|k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let a = random_in_span(basis, &mut rng).ok()?;
        if tp.is_violated_by(&a.rank_signature()) {
            return Some((k, a, "random"));
        }
        let b = random_in_span(basis, &mut rng).ok()?;
        arc_witness(&a, &b, tp, RANDOM_ARC_STEPS).map(|w| (k, w, "det-root"))
    });
    Ok(match found {
        Some((k, w, method)) => Verdict::no(w, k + 1, method),
        None => Verdict { status: Status::Unresolved, witness: None, trials_used: trials, method: "search-exhausted".into() },
    })
}

/// If `{B_i B_j + B_j B_i} = (2/d) delta_ij I` on an orthonormal basis, every
/// nonzero element squares to a multiple of `I`, so all have signature
/// `(d/2, d/2)`.
fn anticommuting_certificate(x: &OperatorSubspace, tp: TaskPremise) -> Option<Verdict> {
    let d = x.dim_space();
    if !d.is_multiple_of(2) {
        return None;
    }
    let ob = x.orthonormal_basis();
    let id = DMatrix::<Complex64>::identity(d, d);
    for (i, a) in ob.iter().enumerate() {
        for (j, b) in ob.iter().enumerate().skip(i) {
            let ac = a.matrix() * b.matrix() + b.matrix() * a.matrix();
            let target = if i == j { &id * Complex64::new(2.0 / d as f64, 0.0) } else { DMatrix::zeros(d, d) };
            if (ac - target).norm() > CERT_TOL {
                return None;
            }
        }
    }
    let sig = RankSignature::from_counts(d / 2, d / 2);
    Some(if tp.is_violated_by(&sig) {
        Verdict::no(x.basis()[0].clone(), 0, "certificate:anticommuting")
    } else {
        Verdict::yes("certificate:anticommuting")
    })
}

/// Two-dimensional subspaces whose Weyl transforms live on `{z, -z}` at odd
/// prime `d` consist of positive multiples of `cos`-spectrum operators with
/// eigenvalues `cos(2 pi eta / d + theta)`: `rank_down = (d-1)/2` always and
/// `rank_up = (d-1)/2` is attained.
fn weyl_pair_certificate(x: &OperatorSubspace, tp: TaskPremise) -> Option<Verdict> {
    let d = x.dim_space();
    if x.dim() != 2 || !is_odd_prime(d) {
        return None;
    }
    let mut support = BTreeSet::new();
    for b in x.orthonormal_basis() {
        support.extend(weyl_support(&b, CERT_TOL));
    }
    let z = *support.iter().next()?;
    if z.is_origin() || !support.iter().all(|p| *p == z || *p == z.neg(d)) {
        return None;
    }
    let half = (d - 1) / 2;
    if tp.t < half {
        return Some(Verdict::yes("certificate:weyl-pair"));
    }
    let w = cosine_element(d, PhasePoint { x: z.x, xi: z.xi }, PI / 2.0);
    if x.projection_residual(&w) > CERT_TOL || !tp.is_violated_by(&w.rank_signature()) {
        return None;
    }
    Some(Verdict::no(w, 0, "certificate:weyl-pair"))
}

/// Scans `cos(s) a + sin(s) b` over `s in [0, pi]` for elements where the
/// determinant vanishes: around every grid minimum of `min|lambda| / max|lambda|`
/// (this includes every sign change of an eigenvalue) a golden-section search
/// homes in on the singular element.
fn arc_witness(a: &HermitianOperator, b: &HermitianOperator, tp: TaskPremise, steps: usize) -> Option<HermitianOperator> {
    let point = |s: f64| &a.scaled(s.cos()) + &b.scaled(s.sin());
    let ratio = |ev: &[f64]| {
        let (lo, hi) = ev.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(x.abs()), hi.max(x.abs())));
        if hi == 0.0 { 0.0 } else { lo / hi }
    };
    let grid: Vec<f64> = (0..=steps).map(|i| PI * i as f64 / steps as f64).collect();
    let mut m = Vec::with_capacity(grid.len());
    for &s in &grid {
        let t = point(s);
        let ev = t.eigenvalues();
        if tp.is_violated_by(&signature_of_eigenvalues(&ev, t.dim(), None)) {
            return Some(t);
        }
        m.push(ratio(&ev));
    }
    for i in 1..steps {
        if m[i] <= m[i - 1] && m[i] <= m[i + 1] {
            let s = golden_min(|s| ratio(&point(s).eigenvalues()), grid[i - 1], grid[i + 1]);
            let w = point(s);
            if tp.is_violated_by(&rank_signature(&w, None)) {
                return Some(w);
            }
        }
    }
    None
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_STEPS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 { x1 } else { x2 }
}

/// An equivalence class of `(t, p)` properties at fixed `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceClass {
    pub canonical_t: usize,
    pub canonical_p: usize,
    pub is_ic_class: bool,
    pub members: Vec<(usize, usize)>,
}

fn canonical_pair(t: usize, p: usize, d: usize) -> (usize, usize) {
    let pt = if p + 1 >= d { d } else { p };
    (t.min(d / 2), pt)
}

/// All admissible pairs `1 <= t <= p <= d` in row-major order.
pub fn admissible_pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=d).flat_map(move |t| (t..=d).map(move |p| (t, p)))
}

/// Class of `tp`: `p` is replaced by `d` once `p >= d - 1`, and `t` by
/// `floor(d/2)` once it exceeds it.
pub fn canonicalize(tp: TaskPremise) -> EquivalenceClass {
    let d = tp.dim;
    let canon = canonical_pair(tp.t, tp.p, d);
    let members = admissible_pairs(d).filter(|&(t, p)| canonical_pair(t, p, d) == canon).collect();
    EquivalenceClass {
        canonical_t: canon.0,
        canonical_p: canon.1,
        is_ic_class: tp.p + 1 >= d && tp.t >= d / 2,
        members,
    }
}

/// `floor(d/2) (d - 1/2 - floor(d/2)/2)`, the number of inequivalent classes.
pub fn count_classes(d: usize) -> usize {
    let h = d / 2;
    // If h is odd then 2d - 1 - h is even, so the product is always even.
    h * (2 * d - 1 - h) / 2
}

/// Classes with the induced implication order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lattice {
    pub dim: usize,
    pub classes: Vec<EquivalenceClass>,
    /// `(from, to)` canonical pairs such that `from` implies `to`, `from != to`.
    pub implies: Vec<((usize, usize), (usize, usize))>,
}

impl Lattice {
    pub fn class_of(&self, t: usize, p: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.members.contains(&(t, p)))
    }
}

/// `(t1, p1)` implies `(t2, p2)` when `t2 <= t1` and `p2 <= p1`.
pub fn implication_lattice(d: usize) -> Result<Lattice> {
    if !(2..=64).contains(&d) {
        return Err(Error::BadDimension(d));
    }
    let mut by_canon: BTreeMap<(usize, usize), EquivalenceClass> = BTreeMap::new();
    for (t, p) in admissible_pairs(d) {
        let tp = TaskPremise { t, p, dim: d };
        let canon = canonical_pair(t, p, d);
        by_canon.entry(canon).or_insert_with(|| canonicalize(tp));
    }
    let classes: Vec<EquivalenceClass> = by_canon.into_values().collect();
    let mut implies = Vec::new();
    for a in &classes {
        for b in &classes {
            if a == b {
                continue;
            }
            let dominated = a
                .members
                .iter()
                .any(|&(t1, p1)| b.members.iter().any(|&(t2, p2)| t2 <= t1 && p2 <= p1));
            if dominated {
                implies.push(((a.canonical_t, a.canonical_p), (b.canonical_t, b.canonical_p)));
            }
        }
    }
    Ok(Lattice { dim: d, classes, implies })
}

/// Minimal number of outcomes of a `(t, p)`-informationally complete
/// observable, as far as known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeBounds {
    pub lower: Option<usize>,
    pub upper: Option<usize>,
    pub exact: Option<usize>,
    pub source: String,
}

impl OutcomeBounds {
    fn exact(n: usize, source: &str) -> Self {
        OutcomeBounds { lower: Some(n), upper: Some(n), exact: Some(n), source: source.into() }
    }
}

pub fn minimal_outcome_bounds(tp: TaskPremise) -> OutcomeBounds {
    let d = tp.dim;
    let class = canonicalize(tp);
    if class.is_ic_class {
        return OutcomeBounds::exact(d * d, "equivalent to informational completeness: d^2");
    }
    let (t, p) = (class.canonical_t, class.canonical_p);
    match (d, t, p) {
        (3, 1, 1) => return OutcomeBounds::exact(8, "d=3: a single annihilator direction of signature (2,1)"),
        (4, 1, 4) | (4, 1, 2) => {
            return OutcomeBounds::exact(11, "d=4: positive-determinant annihilators have dimension at most 5")
        }
        (4, 2, 2) => {
            return OutcomeBounds::exact(15, "d=4: negative-determinant annihilators are one-dimensional")
        }
        (4, 1, 1) => return OutcomeBounds::exact(10, "d=4 pure-state value from the literature"),
        _ => {}
    }
    // (t, d) implies (t, p); (p, p) implies (t, p).
    let mut upper = 4 * t * (d - t) + d - 2 * t;
    if 2 * p < d {
        upper = upper.min(4 * p * (d - p));
    }
    OutcomeBounds {
        lower: None,
        upper: Some(upper.min(d * d)),
        exact: None,
        source: "upper bound min(4t(d-t)+d-2t, 4p(d-p) for p<d/2); lower bound not computed".into(),
    }
}

/// True when an annihilator of the given Weyl zero-set size certainly
/// contains a pure-state witness, from the real-rank bounds with
/// `alpha = popcount(d - 1)`.
pub fn pure_ic_size_bound(d: usize, zero_set_size: usize) -> Result<bool> {
    if d < 4 {
        return Err(Error::BadDimension(d));
    }
    let alpha = (d - 1).count_ones() as i64;
    let base = ((d - 2) * (d - 2)) as i64;
    let n = zero_set_size as i64;
    let odd = d % 2 == 1;
    Ok(n >= base + 2 * alpha - 1
        || (odd && alpha % 4 == 3 && n >= base + 2 * alpha - 3)
        || (odd && alpha % 4 == 2 && n >= base + 2 * alpha - 2))
}
