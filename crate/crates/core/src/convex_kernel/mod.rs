//! Exact geometry of origin-symmetric polytopes: representations, polarity,
//! vertex enumeration and linear programming.

pub mod dd;
pub mod polytope;
pub mod simplex;

pub use simplex::{maximize, minimize_equality, EqOutcome, LpOutcome};
pub use polytope::{
    enumerate_facets, enumerate_vertices, lp_max_h, lp_max_v, HPolytope, LpResult, LpStatus, VPolytope,
};
