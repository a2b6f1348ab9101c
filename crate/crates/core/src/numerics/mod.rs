//! Quadrature and derivative-free minimization.

mod optimize;
mod quadrature;

pub use optimize::{
    finite_diff_gradient, minimize, multistart, multistart_points, Bounds, MinimizeOptions,
    OptimizationResult, PENALTY,
};
pub use quadrature::{integrate, try_integrate, Integral, QuadratureSpec};
