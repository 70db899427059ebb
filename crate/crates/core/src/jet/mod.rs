//! Truncated multivariate Taylor arithmetic ("jets") up to order 3.
//!
//! A [`Jet`] stores the Taylor coefficients of a scalar quantity around a
//! point: the coefficient of the multi-index `a` is `d^a f / a!`. Every
//! derivative consumed by the geometry kernels — of warping functions,
//! fiber metric components and graph functions alike — flows through this
//! type, so the finite-difference oracle in [`crate::fd`] can corroborate
//! all of them in one place.
//!
//! Jets are immutable values and every operation is pure; evaluating
//! fields at many sample points in parallel needs no shared state.

mod space;

pub use space::{coeff_count, degree, multi_indices, space, JetSpace, MultiIndex, MAX_ORDER};

use crate::error::{Error, MathError, Result};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// Truncated Taylor expansion of a scalar at a point.
///
/// Arithmetic between jets requires matching variable counts; mixed-order
/// operands truncate to the smaller order (extracting a coefficient past
/// the stored order panics, so an over-truncated pipeline fails loudly
/// instead of silently reading zeros).
#[derive(Debug, Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    center: Option<Arc<[f64]>>,
    coeffs: Vec<f64>,
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        self.space.nvars == other.space.nvars
            && self.space.order == other.space.order
            && self.coeffs == other.coeffs
    }
}

impl Jet {
    /// Jet of a constant: every coefficient of degree >= 1 is zero.
    pub fn constant(nvars: usize, order: usize, value: f64) -> Jet {
        let space = space(nvars, order);
        let mut coeffs = vec![0.0; space.len()];
        coeffs[0] = value;
        Jet {
            space,
            center: None,
            coeffs,
        }
    }

    /// Jet of the coordinate function `x_index` at `value`.
    pub fn variable(index: usize, value: f64, nvars: usize, order: usize) -> Result<Jet> {
        if index >= nvars {
            return Err(Error::InvalidArgument(format!(
                "variable index {index} out of range for {nvars} variables"
            )));
        }
        if order > MAX_ORDER {
            return Err(Error::InvalidArgument(format!(
                "jet order {order} exceeds maximum {MAX_ORDER}"
            )));
        }
        let space = space(nvars, order);
        let mut coeffs = vec![0.0; space.len()];
        coeffs[0] = value;
        if order >= 1 {
            coeffs[1 + index] = 1.0;
        }
        Ok(Jet {
            space,
            center: None,
            coeffs,
        })
    }

    /// Lift a whole point: one coordinate jet per variable, all sharing the
    /// point as their recorded center.
    pub fn coordinates(point: &[f64], order: usize) -> Vec<Jet> {
        let nvars = point.len();
        let center: Arc<[f64]> = Arc::from(point);
        (0..nvars)
            .map(|i| {
                let mut j = Jet::variable(i, point[i], nvars, order)
                    .expect("coordinate lift is always in range");
                j.center = Some(center.clone());
                j
            })
            .collect()
    }

    /// A constant jet shaped like `self` (same space, no center).
    pub fn constant_like(&self, value: f64) -> Jet {
        Jet::constant(self.space.nvars, self.space.order, value)
    }

    pub fn nvars(&self) -> usize {
        self.space.nvars
    }

    pub fn order(&self) -> usize {
        self.space.order
    }

    pub fn center(&self) -> Option<&[f64]> {
        self.center.as_deref()
    }

    /// The order-0 coefficient, i.e. the underlying scalar value.
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Raw Taylor coefficient for a multi-index (`d^a f / a!`).
    ///
    /// Panics if the index degree exceeds the stored order.
    pub fn coeff(&self, idx: &[u8]) -> f64 {
        assert_eq!(idx.len(), self.space.nvars, "multi-index arity mismatch");
        let pos = *self
            .space
            .position
            .get(idx)
            .unwrap_or_else(|| panic!("multi-index {idx:?} beyond stored order {}", self.order()));
        self.coeffs[pos]
    }

    /// Partial derivative `d^a f` (coefficient times `a!`).
    pub fn derivative_value(&self, idx: &[u8]) -> f64 {
        let fact: f64 = idx
            .iter()
            .map(|&e| (1..=e as u64).product::<u64>() as f64)
            .product();
        self.coeff(idx) * fact
    }

    /// First partial derivative in direction `var` (value only).
    pub fn d1(&self, var: usize) -> f64 {
        assert!(self.order() >= 1, "order-0 jet has no first derivatives");
        self.coeffs[1 + var]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Drop coefficients above `order`.
    pub fn truncated(&self, order: usize) -> Jet {
        if order >= self.order() {
            return self.clone();
        }
        let space = space(self.nvars(), order);
        Jet {
            coeffs: self.coeffs[..space.len()].to_vec(),
            center: self.center.clone(),
            space,
        }
    }

    /// Jet of the partial derivative in direction `var`, one order down.
    ///
    /// Panics on an order-0 jet: its derivatives were never stored.
    pub fn derivative(&self, var: usize) -> Jet {
        assert!(
            self.order() >= 1,
            "cannot differentiate an order-0 jet; raise the pipeline order"
        );
        let lower = space(self.nvars(), self.order() - 1);
        let mut coeffs = vec![0.0; lower.len()];
        for &(src, dst, factor) in &self.space.deriv[var] {
            coeffs[dst as usize] += factor * self.coeffs[src as usize];
        }
        Jet {
            space: lower,
            center: self.center.clone(),
            coeffs,
        }
    }

    fn merged_center(&self, rhs: &Jet) -> Option<Arc<[f64]>> {
        match (&self.center, &rhs.center) {
            (Some(a), Some(b)) => {
                if !Arc::ptr_eq(a, b) && a[..] != b[..] {
                    panic!("jet center mismatch: {:?} vs {:?}", &a[..], &b[..]);
                }
                Some(a.clone())
            }
            (Some(a), None) => Some(a.clone()),
            (None, b) => b.clone(),
        }
    }

    fn zip(&self, rhs: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        assert_eq!(self.nvars(), rhs.nvars(), "jet variable count mismatch");
        let order = self.order().min(rhs.order());
        let space = space(self.nvars(), order);
        let n = space.len();
        let coeffs = (0..n).map(|i| f(self.coeffs[i], rhs.coeffs[i])).collect();
        Jet {
            center: self.merged_center(rhs),
            space,
            coeffs,
        }
    }

    pub fn add_jet(&self, rhs: &Jet) -> Jet {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub_jet(&self, rhs: &Jet) -> Jet {
        self.zip(rhs, |a, b| a - b)
    }

    /// Truncated Cauchy product.
    pub fn mul_jet(&self, rhs: &Jet) -> Jet {
        assert_eq!(self.nvars(), rhs.nvars(), "jet variable count mismatch");
        let order = self.order().min(rhs.order());
        let space = space(self.nvars(), order);
        let mut coeffs = vec![0.0; space.len()];
        for &(i, j, k) in &space.mul_pairs {
            coeffs[k as usize] += self.coeffs[i as usize] * rhs.coeffs[j as usize];
        }
        Jet {
            center: self.merged_center(rhs),
            space,
            coeffs,
        }
    }

    pub fn neg_jet(&self) -> Jet {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -*c;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= s;
        }
        out
    }

    pub fn plus(&self, s: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    /// Compose a univariate function onto this jet from the list of its
    /// derivatives `[f(v), f'(v), ..., f^(k)(v)]` at `v = self.value()`.
    ///
    /// Writing `w` for the increment part of the jet (zero scalar part),
    /// the composition is the truncated series `sum f^(n)(v)/n! * w^n`,
    /// evaluated by Horner's scheme. With order capped at 3 this is the
    /// full chain rule for every elementary function used here.
    pub fn compose_univariate(&self, derivs: &[f64]) -> Jet {
        let order = self.order();
        assert!(derivs.len() > order, "need derivatives up to the jet order");
        if self.is_constant() {
            // Short-circuit: a zero increment must not touch the higher
            // derivatives (which may overflow for extreme arguments).
            let mut out = self.constant_like(derivs[0]);
            out.center = self.center.clone();
            return out;
        }
        let mut w = self.clone();
        w.coeffs[0] = 0.0;
        // Taylor coefficients of f at v.
        let mut fact = 1.0;
        let taylor: Vec<f64> = derivs[..=order]
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                if k > 0 {
                    fact *= k as f64;
                }
                d / fact
            })
            .collect();
        let mut acc = self.constant_like(taylor[order]);
        for k in (0..order).rev() {
            acc = acc.mul_jet(&w).plus(taylor[k]);
        }
        // The increment has no scalar part, so the scalar slot is exactly
        // d0; pin it so an overflowing higher coefficient (inf * 0 = NaN)
        // cannot leak into the value.
        acc.coeffs[0] = derivs[0];
        acc.center = self.center.clone();
        acc
    }

    pub fn recip(&self) -> Result<Jet> {
        let v = self.value();
        if v == 0.0 {
            return Err(MathError::DivByZero.into());
        }
        let v2 = v * v;
        Ok(self.compose_univariate(&[1.0 / v, -1.0 / v2, 2.0 / (v2 * v), -6.0 / (v2 * v2)]))
    }

    pub fn div_jet(&self, rhs: &Jet) -> Result<Jet> {
        let mut out = self.mul_jet(&rhs.recip()?);
        // Direct division for the scalar part: `a * (1/b)` double-rounds,
        // and values must match the plain carrier bitwise.
        out.coeffs[0] = self.value() / rhs.value();
        Ok(out)
    }

    pub fn exp(&self) -> Result<Jet> {
        let e = self.value().exp();
        Ok(self.compose_univariate(&[e, e, e, e]))
    }

    pub fn ln(&self) -> Result<Jet> {
        let v = self.value();
        if v <= 0.0 {
            return Err(MathError::Domain {
                func: "log",
                value: v,
            }
            .into());
        }
        let v2 = v * v;
        Ok(self.compose_univariate(&[v.ln(), 1.0 / v, -1.0 / v2, 2.0 / (v2 * v)]))
    }

    pub fn sqrt(&self) -> Result<Jet> {
        let v = self.value();
        if v <= 0.0 {
            return Err(MathError::Domain {
                func: "sqrt",
                value: v,
            }
            .into());
        }
        let r = v.sqrt();
        Ok(self.compose_univariate(&[
            r,
            0.5 / r,
            -0.25 / (r * v),
            0.375 / (r * v * v),
        ]))
    }

    pub fn sin(&self) -> Result<Jet> {
        let s = self.value().sin();
        let c = self.value().cos();
        Ok(self.compose_univariate(&[s, c, -s, -c]))
    }

    pub fn cos(&self) -> Result<Jet> {
        let s = self.value().sin();
        let c = self.value().cos();
        Ok(self.compose_univariate(&[c, -s, -c, s]))
    }

    pub fn sinh(&self) -> Result<Jet> {
        let s = self.value().sinh();
        let c = self.value().cosh();
        Ok(self.compose_univariate(&[s, c, s, c]))
    }

    pub fn cosh(&self) -> Result<Jet> {
        let s = self.value().sinh();
        let c = self.value().cosh();
        Ok(self.compose_univariate(&[c, s, c, s]))
    }

    /// Integer power by binary exponentiation (any base; negative
    /// exponents require a nonzero scalar part).
    pub fn powi(&self, n: i64) -> Result<Jet> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let mut result = self.constant_like(1.0);
        result.center = self.center.clone();
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul_jet(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_jet(&base);
            }
        }
        Ok(result)
    }

    /// Real power for a positive base.
    pub fn powf(&self, p: f64) -> Result<Jet> {
        let v = self.value();
        if v <= 0.0 {
            return Err(MathError::PowDomain {
                base: v,
                exponent: p,
            }
            .into());
        }
        let d0 = v.powf(p);
        let d1 = p * v.powf(p - 1.0);
        let d2 = p * (p - 1.0) * v.powf(p - 2.0);
        let d3 = p * (p - 1.0) * (p - 2.0) * v.powf(p - 3.0);
        Ok(self.compose_univariate(&[d0, d1, d2, d3]))
    }

    /// `self ^ rhs`. Constant integer exponents use the exact integer
    /// route (valid for any base); everything else goes through
    /// `exp(rhs * ln self)` and requires a positive base. The scalar part
    /// is normalized to the plain-f64 evaluation of the same power, so
    /// carriers agree bitwise on values whenever both are defined.
    pub fn pow_jet(&self, rhs: &Jet) -> Result<Jet> {
        if rhs.is_constant() {
            let p = rhs.value();
            if p == p.trunc() && p.abs() <= 64.0 {
                return self.powi(p as i64);
            }
            return self.powf(p);
        }
        let mut out = rhs.mul_jet(&self.ln()?).exp()?;
        let p = rhs.value();
        out.coeffs[0] = if p == p.trunc() && p.abs() <= 64.0 {
            crate::carrier::scalar_powi(self.value(), p as i64)?
        } else {
            self.value().powf(p)
        };
        Ok(out)
    }

    /// True when every coefficient of degree >= 1 vanishes.
    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0.0)
    }

    /// Substitute jets for the variables of `self`.
    ///
    /// `self` is read as a Taylor polynomial in increments around its
    /// expansion point; `inner[i]` must be a jet whose scalar part equals
    /// the i-th coordinate of that point (the caller guarantees this).
    /// The result is the jet of the composed map in the inner space —
    /// exactly what restricting an ambient field to a graph needs.
    pub fn compose(&self, inner: &[Jet]) -> Jet {
        assert_eq!(inner.len(), self.nvars(), "composition arity mismatch");
        let order = self
            .order()
            .min(inner.iter().map(|j| j.order()).min().unwrap_or(0));
        // Increment powers per variable, up to the order.
        let mut powers: Vec<Vec<Jet>> = Vec::with_capacity(inner.len());
        for j in inner {
            let mut w = j.truncated(order);
            w.coeffs[0] = 0.0;
            let one = w.constant_like(1.0);
            let mut ps = vec![one, w.clone()];
            for _ in 2..=order {
                let next = ps.last().unwrap().mul_jet(&w);
                ps.push(next);
            }
            powers.push(ps);
        }
        let proto = &powers[0][0];
        let mut acc = proto.constant_like(0.0);
        for (pos, idx) in self.space.indices.iter().enumerate() {
            let c = self.coeffs[pos];
            if c == 0.0 || self.space.degrees[pos] as usize > order {
                continue;
            }
            let mut term = proto.constant_like(c);
            for (v, &e) in idx.iter().enumerate() {
                if e > 0 {
                    term = term.mul_jet(&powers[v][e as usize]);
                }
            }
            acc = acc.add_jet(&term);
        }
        acc.center = inner[0].center.clone();
        acc
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $jet_method:ident) => {
        impl $trait<&Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                self.$jet_method(rhs)
            }
        }
        impl $trait<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$jet_method(&rhs)
            }
        }
        impl $trait<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                self.$jet_method(rhs)
            }
        }
        impl $trait<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$jet_method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_jet);
forward_binop!(Sub, sub, sub_jet);
forward_binop!(Mul, mul, mul_jet);

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.neg_jet()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.neg_jet()
    }
}

/// Division panics on a zero scalar part. Kernel code only divides by
/// quantities whose positivity the admission gates have already certified;
/// use [`Jet::div_jet`] where the zero case is a real input condition.
impl Div<&Jet> for &Jet {
    type Output = Jet;
    fn div(self, rhs: &Jet) -> Jet {
        self.div_jet(rhs).expect("jet division by zero scalar part")
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scale(s)
    }
}

impl Add<f64> for &Jet {
    type Output = Jet;
    fn add(self, s: f64) -> Jet {
        self.plus(s)
    }
}

/// Elementary operations addressable by name, mirroring the expression
/// language's operator set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl ArithOp {
    pub fn arity(self) -> usize {
        match self {
            ArithOp::Add | ArithOp::Sub | ArithOp::Mul | ArithOp::Div | ArithOp::Pow => 2,
            _ => 1,
        }
    }
}

/// Apply a named elementary operation to jets, with full precondition
/// checking (matching spaces, centers and arity).
pub fn arith(op: ArithOp, args: &[Jet]) -> Result<Jet> {
    if args.len() != op.arity() {
        return Err(Error::InvalidArgument(format!(
            "{op:?} expects {} operand(s), got {}",
            op.arity(),
            args.len()
        )));
    }
    if op.arity() == 2 {
        let (a, b) = (&args[0], &args[1]);
        if a.nvars() != b.nvars() || a.order() != b.order() {
            return Err(Error::InvalidArgument(format!(
                "operand shapes disagree: {}v/{} vs {}v/{}",
                a.nvars(),
                a.order(),
                b.nvars(),
                b.order()
            )));
        }
        if let (Some(ca), Some(cb)) = (a.center(), b.center()) {
            if ca != cb {
                return Err(Error::InvalidArgument(
                    "operand centers disagree".to_string(),
                ));
            }
        }
    }
    match op {
        ArithOp::Add => Ok(args[0].add_jet(&args[1])),
        ArithOp::Sub => Ok(args[0].sub_jet(&args[1])),
        ArithOp::Mul => Ok(args[0].mul_jet(&args[1])),
        ArithOp::Div => args[0].div_jet(&args[1]),
        ArithOp::Neg => Ok(args[0].neg_jet()),
        ArithOp::Pow => args[0].pow_jet(&args[1]),
        ArithOp::Exp => args[0].exp(),
        ArithOp::Log => args[0].ln(),
        ArithOp::Sqrt => args[0].sqrt(),
        ArithOp::Sin => args[0].sin(),
        ArithOp::Cos => args[0].cos(),
        ArithOp::Sinh => args[0].sinh(),
        ArithOp::Cosh => args[0].cosh(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_is_coordinate_function() {
        let j = Jet::variable(0, 2.0, 2, 2).unwrap();
        assert_eq!(j.value(), 2.0);
        assert_eq!(j.coeff(&[1, 0]), 1.0);
        assert_eq!(j.coeff(&[0, 1]), 0.0);
        assert_eq!(j.coeff(&[2, 0]), 0.0);

        let j = Jet::variable(1, -1.0, 2, 1).unwrap();
        assert_eq!(j.value(), -1.0);
        assert_eq!(j.coeff(&[0, 1]), 1.0);

        let j = Jet::variable(0, 0.0, 3, 3).unwrap();
        assert_eq!(j.coeffs().len(), 20);
        let nonzero: Vec<usize> = j
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(nonzero, vec![1]);
    }

    #[test]
    fn lift_rejects_bad_arguments() {
        assert!(Jet::variable(2, 0.0, 2, 1).is_err());
        assert!(Jet::variable(0, 0.0, 2, 4).is_err());
    }

    #[test]
    fn square_of_coordinate() {
        let x = Jet::variable(0, 3.0, 1, 2).unwrap();
        let sq = &x * &x;
        assert_eq!(sq.value(), 9.0);
        assert_eq!(sq.derivative_value(&[1]), 6.0);
        assert_eq!(sq.derivative_value(&[2]), 2.0);
    }

    #[test]
    fn exp_at_zero_has_unit_derivatives() {
        let t = Jet::variable(0, 0.0, 1, 3).unwrap();
        let e = t.exp().unwrap();
        for k in 0..=3u8 {
            assert!((e.derivative_value(&[k]) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn sqrt_of_linear() {
        // (2 a t)^(1/2) at t = 1, a = 1: value sqrt(2), d/dt = 1/sqrt(2).
        let t = Jet::variable(0, 1.0, 1, 3).unwrap();
        let s = t.scale(2.0).sqrt().unwrap();
        assert!((s.value() - 2f64.sqrt()).abs() < 1e-15);
        assert!((s.derivative_value(&[1]) - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn division_by_zero_scalar_is_an_error() {
        let x = Jet::variable(0, 0.0, 1, 2).unwrap();
        let one = x.constant_like(1.0);
        assert!(matches!(
            one.div_jet(&x),
            Err(Error::Math(MathError::DivByZero))
        ));
    }

    #[test]
    fn log_and_sqrt_domains() {
        let x = Jet::variable(0, -1.0, 1, 2).unwrap();
        assert!(x.ln().is_err());
        assert!(x.sqrt().is_err());
        let zero = Jet::constant(1, 2, 0.0);
        assert!(zero.sqrt().is_err());
    }

    #[test]
    fn constant_lift_has_no_higher_coefficients() {
        let c = Jet::constant(3, 3, 4.25);
        assert!(c.coeffs()[1..].iter().all(|&v| v == 0.0));
        assert!(c.is_constant());
    }

    #[test]
    fn derivative_shifts_coefficients() {
        // f = x^2 y at (1, 2), order 3.
        let x = Jet::variable(0, 1.0, 2, 3).unwrap();
        let y = Jet::variable(1, 2.0, 2, 3).unwrap();
        let f = &(&x * &x) * &y;
        let fx = f.derivative(0); // 2 x y
        assert_eq!(fx.value(), 4.0);
        assert_eq!(fx.derivative_value(&[1, 0]), 4.0);
        assert_eq!(fx.derivative_value(&[0, 1]), 2.0);
        assert_eq!(fx.derivative_value(&[1, 1]), 2.0);
    }

    #[test]
    fn compose_substitutes_graph_into_ambient_field() {
        // Ambient field F(t, x) = t^2 * x at (u(x0), x0) composed with
        // t = u(x) = x^3 at x0 = 2 gives x^7; check value and first
        // three derivatives.
        let x0 = 2.0;
        let u_center = x0 * x0 * x0;
        let t = Jet::variable(0, u_center, 2, 3).unwrap();
        let xa = Jet::variable(1, x0, 2, 3).unwrap();
        let f = &(&t * &t) * &xa;

        let xc = Jet::variable(0, x0, 1, 3).unwrap();
        let u = xc.powi(3).unwrap();
        let composed = f.compose(&[u, xc]);

        let direct = Jet::variable(0, x0, 1, 3).unwrap().powi(7).unwrap();
        for k in 0..=3u8 {
            let a = composed.derivative_value(&[k]);
            let b = direct.derivative_value(&[k]);
            assert!(
                (a - b).abs() <= 1e-9 * b.abs().max(1.0),
                "k={k}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn arith_checks_arity_and_shape() {
        let a = Jet::variable(0, 1.0, 1, 2).unwrap();
        let b = Jet::variable(0, 1.0, 2, 2).unwrap();
        assert!(arith(ArithOp::Add, std::slice::from_ref(&a)).is_err());
        assert!(arith(ArithOp::Add, &[a.clone(), b]).is_err());
        assert!(arith(ArithOp::Exp, &[a]).is_ok());
    }

    #[test]
    fn pow_with_integer_and_fractional_exponents() {
        let t = Jet::variable(0, 8.0, 1, 2).unwrap();
        let p = t.powf(2.0 / 3.0).unwrap();
        assert!((p.value() - 4.0).abs() < 1e-12);
        // d/dt t^(2/3) = (2/3) t^(-1/3) = 1/3 at t = 8.
        assert!((p.derivative_value(&[1]) - 1.0 / 3.0).abs() < 1e-12);

        let neg = Jet::variable(0, -2.0, 1, 2).unwrap();
        let cubed = neg.powi(3).unwrap();
        assert_eq!(cubed.value(), -8.0);
        assert!(neg.powf(0.5).is_err());
    }
}
