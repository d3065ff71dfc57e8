//! Exact engine for highest-weight modules over map Lie algebras `g ⊗ A`.
//!
//! The crate is organised bottom-up:
//!
//! * [`rational`], [`linalg`], [`poly`]: exact arithmetic substrate.
//! * [`rootsys`]: generalized Cartan matrices and positive roots with multiplicities.
//! * [`commalg`]: the coefficient algebra `A = ℚ[x₁..xₙ]`, cofinite ideals and their quotients.
//! * [`hwdata`]: weights, evaluation functionals ψ and ideal sequences `{I_α}`.
//! * [`charcalc`]: truncated formal characters and the product formula for `K_η`.
//! * [`modeng`]: PBW straightening and explicit module construction.
//! * [`theorems`]: end-to-end verification of the tensor product decompositions.
//! * [`io`]: JSON/CSV surfaces shared by the CLI and the browser demo.

pub mod charcalc;
pub mod commalg;
pub mod hwdata;
pub mod io;
pub mod linalg;
pub mod modeng;
pub mod poly;
pub mod rational;
pub mod rootsys;
pub mod theorems;

pub use rational::Q;

/// A weight `η ∈ Q₊`, in simple-root coordinates.
pub type Eta = Vec<u32>;

/// Height of an element of `Q₊`.
pub fn height(eta: &[u32]) -> u32 {
    eta.iter().sum()
}
