//! Numerical verification engine for the extrinsic geometry of spacelike
//! graph hypersurfaces in warped-product (GRW) spacetimes.
//!
//! The crate builds spacetimes `I x_rho F` from user-declared warping
//! functions and fiber metrics, constructs graph hypersurfaces `t = u(x)`
//! over the fiber chart, and certifies the curvature identities,
//! inequality margins and theorem hypotheses of constant-mean-curvature
//! theory at sampled points. All derivatives flow through truncated
//! Taylor jets ([`jet`]), independently corroborated by central
//! differences ([`fd`]).

// Index loops here mirror the tensor index notation they implement, and
// comparisons like `!(lo < hi)` deliberately reject NaN bounds.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carrier;
pub mod catalog;
pub mod checks;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod fd;
pub mod fiber;
pub mod hypersurface;
pub mod identities;
pub mod jet;
pub mod linalg;
pub mod spacetime;
pub mod theorems;

pub use carrier::{Carrier, Func, JetShape};
pub use error::{Error, MathError, Result};
pub use expr::{eval, eval_f64, parse, Expr, ParseError};
pub use fiber::{FiberKind, FiberMetric};
pub use hypersurface::{GraphHypersurface, PointGeometry};
pub use jet::Jet;
pub use spacetime::{AmbientPoint, Spacetime, WarpFunction};
