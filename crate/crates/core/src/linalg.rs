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

//! Rank-revealing helpers over real matrices.

use nalgebra::DMatrix;

/// Relative singular value threshold used for null spaces and ranks.
pub(crate) const NULL_REL_TOL: f64 = 1e-10;

/// Result of a rank-revealing SVD of an `m x n` real matrix.
pub(crate) struct RankSplit {
    pub rank: usize,
    /// Orthonormal basis of the row space, one vector per column (`n x rank`).
    pub row_space: DMatrix<f64>,
    /// Orthonormal basis of the null space, one vector per column (`n x (n - rank)`).
    pub null_space: DMatrix<f64>,
}

/// Splits `R^n` into row space and null space of `a`. Singular values below
/// `rel_tol * sigma_max` count as zero. Rows are zero-padded so the full set
/// of right singular vectors is available.
pub(crate) fn rank_split(a: &DMatrix<f64>, rel_tol: f64) -> RankSplit {
    let n = a.ncols();
    if n == 0 {
        return RankSplit {
            rank: 0,
            row_space: DMatrix::zeros(0, 0),
            null_space: DMatrix::zeros(0, 0),
        };
    }
    let m = a.nrows().max(n);
    let mut padded = DMatrix::<f64>::zeros(m, n);
    padded.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigma_max = order.first().map(|&i| svd.singular_values[i]).unwrap_or(0.0);
    let threshold = rel_tol * sigma_max;
    let rank = if sigma_max == 0.0 {
        0
    } else {
        order.iter().filter(|&&i| svd.singular_values[i] > threshold).count()
    };
    let mut row_space = DMatrix::zeros(n, rank);
    let mut null_space = DMatrix::zeros(n, n - rank);
    for (k, &i) in order.iter().enumerate() {
        let v = v_t.row(i).transpose();
        if k < rank {
            row_space.set_column(k, &v);
        } else {
            null_space.set_column(k - rank, &v);
        }
    }
    RankSplit { rank, row_space, null_space }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_of_rank_one_matrix() {
        let a = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        let s = rank_split(&a, NULL_REL_TOL);
        assert_eq!(s.rank, 1);
        assert_eq!(s.null_space.ncols(), 2);
        let residual = &a * &s.null_space;
        assert!(residual.norm() < 1e-12);
        let gram = s.null_space.transpose() * &s.null_space;
        assert!((gram - DMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn tall_matrix_and_zero_matrix() {
        let a = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 2.0, 0.0]);
        assert_eq!(rank_split(&a, NULL_REL_TOL).rank, 2);
        let z = DMatrix::<f64>::zeros(3, 4);
        let s = rank_split(&z, NULL_REL_TOL);
        assert_eq!(s.rank, 0);
        assert_eq!(s.null_space.ncols(), 4);
    }
}
