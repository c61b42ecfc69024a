//! Injective and projective tensor norms.

mod entangle;
mod injective;
mod projective;
mod tensor;

pub use entangle::{entangled_witness, eps_upper_bound, paired_tensor, phase_tensor, EntangledWitness};
pub use injective::{
    flattening_bound, injective_norm, multistart, pair_exact, planned_method, InjectiveResult, Method,
    RankOneWitness,
};
pub use projective::{projective_norm, projective_norm_warm, NuclearDecomposition, ProjectiveResult};
pub use tensor::{axis_to_back, contract_all_but, outer, Tensor, TensorSpec};

/// Euclidean norm of the coefficient array.
pub fn hs_norm(z: &Tensor) -> f64 {
    z.hs_norm()
}
