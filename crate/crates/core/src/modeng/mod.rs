//! Explicit construction of highest-weight modules over `g ⊗ B`.
//!
//! `g` is a finite-type Kac-Moody algebra of rank at most 3, realized by
//! matrices, and `B` is a finite-dimensional quotient of a polynomial ring.

pub mod chevalley;
pub mod engine;
pub mod module;
pub mod tensor;

pub use chevalley::{ChevalleyBasis, Elem};
pub use engine::{Element, Gen, GenKind, MapAlgebra, Mono, PbwEngine, PbwOrder};
pub use module::{
    build_M, build_M_with_entries, build_W, verify_lemma_l1, weights_upto, ActResult, AuditReport, BuildOptions, DimRow, ModuleKind,
    ModuleState,
};
pub use tensor::{
    act_element, apply_word, cyclic_span, evaluation_module, singular_vectors, tensor_module,
    weyl_relation_audit, CyclicityReport, GradedModule, RelationAudit, TensorModule,
};

use std::sync::Arc;

use crate::commalg::{CofiniteIdeal, CommError, QuotientAlgebra};
use crate::hwdata::HwError;
use crate::rootsys::{Gcm, RootError};
use crate::Eta;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModError {
    #[error("IncompatibleCoefficients: {0}")]
    IncompatibleCoefficients(String),
    #[error("IntegrabilityAuditFailed: {0}")]
    IntegrabilityAuditFailed(String),
    #[error("UnsupportedType: {0}")]
    UnsupportedType(String),
    #[error("DuplicatePoint: {0}")]
    DuplicatePoint(String),
    #[error("AlgebraMismatch: {0}")]
    AlgebraMismatch(String),
    #[error("WeightOverflow: acting at {eta:?} leaves the height bound {bound}")]
    WeightOverflow { eta: Eta, bound: u32 },
    #[error("OrderViolation: {0}")]
    OrderViolation(String),
    #[error("ResourceCap: {0}")]
    ResourceCap(String),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Comm(#[from] CommError),
    #[error(transparent)]
    Hw(#[from] HwError),
}

/// `g ⊗ A/I₀` for a finite-type `g`.
pub fn map_algebra(gcm: &Gcm, coeff_ideal: &CofiniteIdeal) -> Result<Arc<MapAlgebra>, ModError> {
    let g = Arc::new(ChevalleyBasis::new(gcm)?);
    let b = Arc::new(QuotientAlgebra::new(coeff_ideal)?);
    Ok(Arc::new(MapAlgebra::new(g, b)))
}

/// Same `g`, new coefficient algebra.
pub fn with_coefficients(alg: &MapAlgebra, coeff_ideal: &CofiniteIdeal) -> Result<Arc<MapAlgebra>, ModError> {
    let b = Arc::new(QuotientAlgebra::new(coeff_ideal)?);
    Ok(Arc::new(MapAlgebra::new(alg.g.clone(), b)))
}
