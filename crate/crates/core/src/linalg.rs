//! Thin helpers around `faer` sparse matrices and plain `f64` vectors.

use faer::sparse::{SparseColMat, Triplet};

use crate::error::{Error, Result};

/// Sparse column-major matrix used for every assembled form.
pub type SpMat = SparseColMat<usize, f64>;

/// Builds a sparse matrix from (row, col, value) triplets; duplicates sum.
pub fn from_triplets(nrows: usize, ncols: usize, trips: &[(usize, usize, f64)]) -> Result<SpMat> {
    let t: Vec<Triplet<usize, usize, f64>> =
        trips.iter().map(|&(i, j, v)| Triplet::new(i, j, v)).collect();
    SpMat::try_new_from_triplets(nrows, ncols, &t)
        .map_err(|e| Error::AssemblyInvariant(format!("triplet assembly failed: {e:?}")))
}

/// y = A x.
pub fn mul_vec(a: &SpMat, x: &[f64]) -> Vec<f64> {
    assert_eq!(a.ncols(), x.len());
    let mut y = vec![0.0; a.nrows()];
    let sym = a.symbolic();
    let col_ptr = sym.col_ptr();
    let row_idx = sym.row_idx();
    let val = a.val();
    for j in 0..a.ncols() {
        let xj = x[j];
        if xj == 0.0 {
            continue;
        }
        for p in col_ptr[j]..col_ptr[j + 1] {
            y[row_idx[p]] += val[p] * xj;
        }
    }
    y
}

/// y = Aᵀ x.
pub fn mul_vec_transpose(a: &SpMat, x: &[f64]) -> Vec<f64> {
    assert_eq!(a.nrows(), x.len());
    let mut y = vec![0.0; a.ncols()];
    let sym = a.symbolic();
    let col_ptr = sym.col_ptr();
    let row_idx = sym.row_idx();
    let val = a.val();
    for (j, yj) in y.iter_mut().enumerate() {
        let mut acc = 0.0;
        for p in col_ptr[j]..col_ptr[j + 1] {
            acc += val[p] * x[row_idx[p]];
        }
        *yj = acc;
    }
    y
}

/// xᵀ A y.
pub fn quad_form(a: &SpMat, x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(a.nrows(), x.len());
    assert_eq!(a.ncols(), y.len());
    let sym = a.symbolic();
    let col_ptr = sym.col_ptr();
    let row_idx = sym.row_idx();
    let val = a.val();
    let mut acc = 0.0;
    for (j, &yj) in y.iter().enumerate() {
        if yj == 0.0 {
            continue;
        }
        let mut col = 0.0;
        for p in col_ptr[j]..col_ptr[j + 1] {
            col += val[p] * x[row_idx[p]];
        }
        acc += col * yj;
    }
    acc
}

/// max |A - Aᵀ| over all entries.
pub fn max_asymmetry(a: &SpMat) -> f64 {
    use std::collections::HashMap;
    let sym = a.symbolic();
    let col_ptr = sym.col_ptr();
    let row_idx = sym.row_idx();
    let val = a.val();
    let mut entries: HashMap<(usize, usize), f64> = HashMap::new();
    for j in 0..a.ncols() {
        for p in col_ptr[j]..col_ptr[j + 1] {
            entries.insert((row_idx[p], j), val[p]);
        }
    }
    let mut worst: f64 = 0.0;
    for (&(i, j), &v) in &entries {
        let vt = entries.get(&(j, i)).copied().unwrap_or(0.0);
        worst = worst.max((v - vt).abs());
    }
    worst
}

/// Diagonal of a square sparse matrix.
pub fn diagonal(a: &SpMat) -> Vec<f64> {
    assert_eq!(a.nrows(), a.ncols());
    let sym = a.symbolic();
    let col_ptr = sym.col_ptr();
    let row_idx = sym.row_idx();
    let val = a.val();
    let mut d = vec![0.0; a.ncols()];
    for (j, dj) in d.iter_mut().enumerate() {
        for p in col_ptr[j]..col_ptr[j + 1] {
            if row_idx[p] == j {
                *dj += val[p];
            }
        }
    }
    d
}

/// Iterates stored entries as (row, col, value).
pub fn entries(a: &SpMat) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
    let sym = a.symbolic();
    let col_ptr = sym.col_ptr();
    let row_idx = sym.row_idx();
    let val = a.val();
    (0..a.ncols()).flat_map(move |j| {
        (col_ptr[j]..col_ptr[j + 1]).map(move |p| (row_idx[p], j, val[p]))
    })
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_and_quad_form_matches() {
        let a = from_triplets(2, 2, &[(0, 0, 1.0), (0, 0, 1.0), (0, 1, 3.0), (1, 0, 3.0)]).unwrap();
        assert_eq!(max_asymmetry(&a), 0.0);
        let x = [1.0, 2.0];
        // xᵀ A x = 2·1 + 3·2·2·1 = 14
        assert_eq!(quad_form(&a, &x, &x), 14.0);
        assert_eq!(mul_vec(&a, &x), vec![8.0, 3.0]);
        assert_eq!(mul_vec_transpose(&a, &x), vec![8.0, 3.0]);
        assert_eq!(diagonal(&a), vec![2.0, 0.0]);
    }
}
