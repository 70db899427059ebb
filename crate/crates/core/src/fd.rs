//! Central-difference oracle for mixed partial derivatives.
//!
//! This module is the independent cross-check for the jet pipeline: it
//! only ever evaluates a scalar field at plain points and differentiates
//! numerically, so it shares no code path with the Taylor arithmetic it
//! verifies. Each differentiation level is a central difference with
//! truncation error O(h^2).

use crate::error::{Error, Result};

/// A scalar field evaluable at plain points. Returning an error marks the
/// point as outside the field's domain.
pub trait PointFn {
    fn eval(&self, x: &[f64]) -> Result<f64>;
}

impl<F: Fn(&[f64]) -> Result<f64>> PointFn for F {
    fn eval(&self, x: &[f64]) -> Result<f64> {
        self(x)
    }
}

/// Central-difference estimate of the mixed partial `d^idx f` at `point`,
/// stepping `h` per differentiation along each axis.
///
/// Nested differences are used for repeated or mixed indices; a degree-d
/// derivative therefore touches up to 2^d stencil points. The stencil must
/// stay inside the field's domain or a domain error is returned.
pub fn fd_derivative(f: &dyn PointFn, point: &[f64], idx: &[u8], h: f64) -> Result<f64> {
    if idx.len() != point.len() {
        return Err(Error::InvalidArgument(format!(
            "multi-index arity {} does not match point dimension {}",
            idx.len(),
            point.len()
        )));
    }
    let deg: usize = idx.iter().map(|&e| e as usize).sum();
    if deg > 3 {
        return Err(Error::InvalidArgument(format!(
            "finite-difference oracle limited to degree 3, got {deg}"
        )));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    fd_recursive(f, point, idx, h)
}

fn fd_recursive(f: &dyn PointFn, point: &[f64], idx: &[u8], h: f64) -> Result<f64> {
    match idx.iter().position(|&e| e > 0) {
        None => f.eval(point),
        Some(axis) => {
            let mut lower = idx.to_vec();
            lower[axis] -= 1;
            let mut plus = point.to_vec();
            plus[axis] += h;
            let mut minus = point.to_vec();
            minus[axis] -= h;
            let a = fd_recursive(f, &plus, &lower, h)?;
            let b = fd_recursive(f, &minus, &lower, h)?;
            Ok((a - b) / (2.0 * h))
        }
    }
}

/// Central-difference gradient (all first partials) of `f` at `point`.
pub fn fd_gradient(f: &dyn PointFn, point: &[f64], h: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(point.len());
    for i in 0..point.len() {
        let mut idx = vec![0u8; point.len()];
        idx[i] = 1;
        out.push(fd_derivative(f, point, &idx, h)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_derivative_of_square() {
        let f = |x: &[f64]| Ok(x[0] * x[0]);
        let d = fd_derivative(&f, &[1.0], &[2], 1e-3).unwrap();
        assert!((d - 2.0).abs() < 1e-6);
    }

    #[test]
    fn first_derivative_of_sine_at_zero() {
        let f = |x: &[f64]| Ok(x[0].sin());
        let d = fd_derivative(&f, &[0.0], &[1], 1e-4).unwrap();
        assert!((d - 1.0).abs() < 1e-8);
    }

    #[test]
    fn mixed_partial_of_exp_sum() {
        let f = |x: &[f64]| Ok((x[0] + x[1]).exp());
        let d = fd_derivative(&f, &[0.0, 0.0], &[1, 1], 1e-3).unwrap();
        assert!((d - 1.0).abs() < 1e-5);
    }

    #[test]
    fn domain_errors_propagate_from_the_stencil() {
        let f = |x: &[f64]| {
            if x[0] <= 0.0 {
                Err(Error::OutOfDomain("nonpositive".into()))
            } else {
                Ok(x[0].ln())
            }
        };
        assert!(fd_derivative(&f, &[1e-4], &[1], 1e-3).is_err());
        assert!(fd_derivative(&f, &[1.0], &[1], 1e-3).is_ok());
    }

    #[test]
    fn rejects_degree_four() {
        let f = |x: &[f64]| Ok(x[0]);
        assert!(fd_derivative(&f, &[0.0], &[4], 1e-3).is_err());
    }
}
