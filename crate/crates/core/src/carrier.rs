//! Numeric carriers for expression evaluation.
//!
//! The same expression tree evaluates over plain `f64` (feeding the
//! finite-difference oracle) and over [`Jet`]s (feeding the geometry
//! kernels). Scalar parts are computed by the identical sequence of f64
//! operations in both carriers, so the order-0 coefficient of a jet
//! evaluation matches the plain evaluation bit for bit.

use crate::error::MathError;
use crate::jet::Jet;

/// Elementary functions available to carriers and to the expression
/// grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            _ => return None,
        })
    }
}

/// Shape information a carrier needs to mint constants.
pub trait Carrier: Clone {
    type Ctx: Clone;

    fn constant(ctx: &Self::Ctx, value: f64) -> Self;
    /// The underlying scalar (order-0 coefficient for jets).
    fn value(&self) -> f64;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self, MathError>;
    fn pow(&self, rhs: &Self) -> Result<Self, MathError>;
    fn apply(&self, f: Func) -> Result<Self, MathError>;
}

impl Carrier for f64 {
    type Ctx = ();

    fn constant(_: &(), value: f64) -> f64 {
        value
    }

    fn value(&self) -> f64 {
        *self
    }

    fn add(&self, rhs: &f64) -> f64 {
        self + rhs
    }

    fn sub(&self, rhs: &f64) -> f64 {
        self - rhs
    }

    fn mul(&self, rhs: &f64) -> f64 {
        self * rhs
    }

    fn neg(&self) -> f64 {
        -self
    }

    fn div(&self, rhs: &f64) -> Result<f64, MathError> {
        if *rhs == 0.0 {
            return Err(MathError::DivByZero);
        }
        Ok(self / rhs)
    }

    fn pow(&self, rhs: &f64) -> Result<f64, MathError> {
        let p = *rhs;
        if p == p.trunc() && p.abs() <= 64.0 {
            return scalar_powi(*self, p as i64);
        }
        if *self <= 0.0 {
            return Err(MathError::PowDomain {
                base: *self,
                exponent: p,
            });
        }
        Ok(self.powf(p))
    }

    fn apply(&self, f: Func) -> Result<f64, MathError> {
        let v = *self;
        Ok(match f {
            Func::Exp => v.exp(),
            Func::Log => {
                if v <= 0.0 {
                    return Err(MathError::Domain {
                        func: "log",
                        value: v,
                    });
                }
                v.ln()
            }
            Func::Sqrt => {
                if v <= 0.0 {
                    return Err(MathError::Domain {
                        func: "sqrt",
                        value: v,
                    });
                }
                v.sqrt()
            }
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Sinh => v.sinh(),
            Func::Cosh => v.cosh(),
        })
    }
}

/// Integer power by the same squaring sequence the jet carrier uses, so
/// both carriers produce bitwise-identical scalar parts.
pub(crate) fn scalar_powi(base: f64, n: i64) -> Result<f64, MathError> {
    if n < 0 {
        let p = scalar_powi(base, -n)?;
        if p == 0.0 {
            return Err(MathError::DivByZero);
        }
        return Ok(1.0 / p);
    }
    let mut result = 1.0;
    let mut b = base;
    let mut n = n as u64;
    while n > 0 {
        if n & 1 == 1 {
            result *= b;
        }
        n >>= 1;
        if n > 0 {
            b *= b;
        }
    }
    Ok(result)
}

/// Shape of a jet carrier: number of variables and truncation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JetShape {
    pub nvars: usize,
    pub order: usize,
}

fn demote(e: crate::error::Error) -> MathError {
    match e {
        crate::error::Error::Math(m) => m,
        // The fallible jet entry points only ever surface math errors.
        other => unreachable!("jet arithmetic returned a non-math error: {other}"),
    }
}

impl Carrier for Jet {
    type Ctx = JetShape;

    fn constant(ctx: &JetShape, value: f64) -> Jet {
        Jet::constant(ctx.nvars, ctx.order, value)
    }

    fn value(&self) -> f64 {
        Jet::value(self)
    }

    fn add(&self, rhs: &Jet) -> Jet {
        self.add_jet(rhs)
    }

    fn sub(&self, rhs: &Jet) -> Jet {
        self.sub_jet(rhs)
    }

    fn mul(&self, rhs: &Jet) -> Jet {
        self.mul_jet(rhs)
    }

    fn neg(&self) -> Jet {
        self.neg_jet()
    }

    fn div(&self, rhs: &Jet) -> Result<Jet, MathError> {
        self.div_jet(rhs).map_err(demote)
    }

    fn pow(&self, rhs: &Jet) -> Result<Jet, MathError> {
        self.pow_jet(rhs).map_err(demote)
    }

    fn apply(&self, f: Func) -> Result<Jet, MathError> {
        let r = match f {
            Func::Exp => self.exp(),
            Func::Log => self.ln(),
            Func::Sqrt => self.sqrt(),
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Sinh => self.sinh(),
            Func::Cosh => self.cosh(),
        };
        r.map_err(demote)
    }
}
