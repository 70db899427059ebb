//! Dense helpers for the small (m <= 5) matrices the geometry kernels
//! juggle, in two flavors: entries as jets (derivatives ride along) and
//! entries as plain values.

use crate::error::{Error, Result};
use crate::jet::Jet;

pub type JetMatrix = Vec<Vec<Jet>>;
pub type Matrix = Vec<Vec<f64>>;

/// Gauss-Jordan inverse of a jet-valued matrix, pivoting on the largest
/// scalar part.
pub fn invert_jets(a: &JetMatrix) -> Result<JetMatrix> {
    let n = a.len();
    let mut work: Vec<Vec<Jet>> = a.iter().map(|row| row.to_vec()).collect();
    let proto = a[0][0].constant_like(0.0);
    let mut inv: Vec<Vec<Jet>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| proto.constant_like(if i == j { 1.0 } else { 0.0 }))
                .collect()
        })
        .collect();

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| {
                work[r][col]
                    .value()
                    .abs()
                    .total_cmp(&work[s][col].value().abs())
            })
            .expect("nonempty pivot range");
        if work[pivot_row][col].value().abs() == 0.0 {
            return Err(Error::InvalidArgument(
                "singular matrix in jet inversion".into(),
            ));
        }
        work.swap(col, pivot_row);
        inv.swap(col, pivot_row);

        let pivot = work[col][col].recip()?;
        for j in 0..n {
            work[col][j] = work[col][j].mul_jet(&pivot);
            inv[col][j] = inv[col][j].mul_jet(&pivot);
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let factor = work[i][col].clone();
            if factor.value() == 0.0 && factor.is_constant() {
                continue;
            }
            for j in 0..n {
                work[i][j] = work[i][j].sub_jet(&factor.mul_jet(&work[col][j]));
                inv[i][j] = inv[i][j].sub_jet(&factor.mul_jet(&inv[col][j]));
            }
        }
    }
    Ok(inv)
}

/// Determinant of a jet-valued matrix by LU elimination with value
/// pivoting.
pub fn det_jets(a: &JetMatrix) -> Result<Jet> {
    let n = a.len();
    let mut work: Vec<Vec<Jet>> = a.iter().map(|row| row.to_vec()).collect();
    let mut det = a[0][0].constant_like(1.0);
    let mut sign = 1.0;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| {
                work[r][col]
                    .value()
                    .abs()
                    .total_cmp(&work[s][col].value().abs())
            })
            .expect("nonempty pivot range");
        if work[pivot_row][col].value() == 0.0 {
            return Ok(det.constant_like(0.0));
        }
        if pivot_row != col {
            work.swap(col, pivot_row);
            sign = -sign;
        }
        det = det.mul_jet(&work[col][col]);
        let pivot_inv = work[col][col].recip()?;
        for i in col + 1..n {
            let factor = work[i][col].mul_jet(&pivot_inv);
            for j in col..n {
                work[i][j] = work[i][j].sub_jet(&factor.mul_jet(&work[col][j]));
            }
        }
    }
    Ok(det.scale(sign))
}

/// Gauss-Jordan inverse for plain matrices.
pub fn invert(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let mut work: Matrix = a.to_vec();
    let mut inv: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| work[r][col].abs().total_cmp(&work[s][col].abs()))
            .expect("nonempty pivot range");
        if work[pivot_row][col] == 0.0 {
            return Err(Error::InvalidArgument("singular matrix".into()));
        }
        work.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pivot = work[col][col];
        for j in 0..n {
            work[col][j] /= pivot;
            inv[col][j] /= pivot;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let factor = work[i][col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..n {
                work[i][j] -= factor * work[col][j];
                inv[i][j] -= factor * inv[col][j];
            }
        }
    }
    Ok(inv)
}

/// Positive-definiteness test by LDL^T pivots. Returns the index of the
/// first non-positive pivot on failure.
pub fn positive_definite(a: &Matrix) -> std::result::Result<(), usize> {
    let n = a.len();
    let mut work = a.to_vec();
    for k in 0..n {
        let pivot = work[k][k];
        if !(pivot > 0.0) {
            return Err(k);
        }
        for i in k + 1..n {
            let f = work[i][k] / pivot;
            for j in k..n {
                work[i][j] -= f * work[k][j];
            }
        }
    }
    Ok(())
}

/// Symmetric inner product `v^T g w`.
pub fn quad(g: &Matrix, v: &[f64], w: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i, vi) in v.iter().enumerate() {
        for (j, wj) in w.iter().enumerate() {
            s += g[i][j] * vi * wj;
        }
    }
    s
}

pub fn mat_vec(g: &Matrix, v: &[f64]) -> Vec<f64> {
    g.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Norm of `v` in the metric `g` (requires `g` positive definite).
pub fn g_norm(g: &Matrix, v: &[f64]) -> f64 {
    quad(g, v, v).max(0.0).sqrt()
}

/// Gram-Schmidt orthonormalization of the coordinate basis with respect
/// to the metric `g`. Row `i` of the result holds the components of the
/// i-th frame vector in the coordinate basis. The basis order is the
/// caller's; traces over the frame are order-independent.
pub fn orthonormal_frame(g: &Matrix, order: &[usize]) -> Result<Matrix> {
    let n = g.len();
    let mut frame: Matrix = Vec::with_capacity(n);
    for &k in order {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        for e in &frame {
            let proj = quad(g, &v, e);
            for (vi, ei) in v.iter_mut().zip(e) {
                *vi -= proj * ei;
            }
        }
        let norm = g_norm(g, &v);
        if norm < 1e-12 {
            return Err(Error::MetricDegenerate {
                point: vec![],
                detail: format!("Gram-Schmidt collapsed on basis vector {k}"),
            });
        }
        for vi in &mut v {
            *vi /= norm;
        }
        frame.push(v);
    }
    Ok(frame)
}
