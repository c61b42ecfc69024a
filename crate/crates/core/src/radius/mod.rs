//! Tensor radii of operators and spaces.

mod bounds;
mod ntp;
mod tau;

pub use bounds::*;
pub use ntp::*;
pub use tau::{injective_ball_vertices, rho_k, tau_k, tau_k_with, TauMethod, TauPath, TauResult};
