//! Pairwise concurrence in cyclically symmetric qubit states.
//!
//! Qubit 0 is the most significant bit of a basis index throughout.

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod concurrence;
pub mod csx;
pub mod cyclic;
pub mod error;
pub mod extremal;
pub mod io;
pub mod linalg;
pub mod sampler;

pub use concurrence::{
    concurrence, extract_x, pair_rdm, subconcurrence, wootters_spectrum, x_subconcurrences,
    ConcurrencePoint, WoottersSpectrum, XParams,
};
pub use csx::{csx4_branches, csx5_branches, BranchValues, Csx4Coeffs, Csx5Coeffs};
pub use cyclic::{
    dicke, embed, necklaces, project_cs, relabel, spaced_product, CsProjection, CsState, Necklace,
    Relabeling,
};
pub use error::{Error, Result};
pub use linalg::{
    hermitian_eig, kron, matrix_sqrt_psd, partial_trace, spin_flip, ComplexMatrix, StateVector, C64,
};
pub use sampler::{random_state, scatter, Mode, SampleSpec, ScatterDataset, Subspace};
