pub mod dual;
pub mod expr;
pub mod flow;
pub mod graph;
pub mod heis;
pub mod plateau;
pub mod quadrature;
pub mod real;
pub mod ruled;
pub mod schema;
pub mod spline;
pub mod sweep;
pub mod tol;

pub use dual::Dual;
pub use expr::{Expr, ExprError};
pub use graph::{GaussData, GraphError, GraphPatch};
pub use heis::{FrameVector, HPoint, PlanarVector};
pub use plateau::{ClosedCurve, PlateauError};
pub use real::Real;
pub use tol::Tolerances;

pub type Point = HPoint<f64>;
pub type Dual64 = Dual<f64>;
pub type HyperDual64 = Dual<Dual<f64>>;
