//! Tensor norms, nuclear norms, John/Loewner ellipsoids and bounds on
//! asymptotic tensor radii for finite-dimensional real normed spaces.

pub mod bounds;
pub mod convex_kernel;
pub mod ellipsoids;
pub mod error;
pub mod linalg;
pub mod operators;
pub mod radius;
pub mod scalar;
pub mod settings;
pub mod spaces;
pub mod tensor_norms;

pub use error::{Error, Result};
pub use scalar::Rat;
pub use settings::{Arithmetic, Caps, Settings};
pub use operators::LinearOperator;
pub use spaces::{NormedSpace, SpaceKind};
