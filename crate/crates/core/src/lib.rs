//! Belief propagation decoders for quantum LDPC codes with ordered Tanner
//! forest post-processing.
//!
//! The crate covers GF(2) linear algebra ([`gf2`]), detector error models
//! ([`model`]), flooding belief propagation ([`bp`]), the ordered Tanner
//! forest stage ([`otf`]), sparsified detector models and transfer matrices
//! ([`sparsify`]), composed pipelines ([`pipeline`]) and a Monte Carlo
//! harness ([`sim`]) with small test codes ([`codes`]).
//!
//! ```
//! use bpotf::codes::build_repetition_code;
//! use bpotf::gf2::{BinaryVector, SparseBinaryMatrix};
//! use bpotf::model::build_code_capacity_model;
//! use bpotf::pipeline::{Decoder, PipelineConfig, PipelineKind};
//!
//! let (h, _) = build_repetition_code(5)?;
//! let logical = SparseBinaryMatrix::from_row_supports(5, vec![vec![0]])?;
//! let model = build_code_capacity_model(&h, &logical, 0.05)?;
//! let decoder = Decoder::new(PipelineKind::BpOtf, PipelineConfig::surface_code(), &model, None)?;
//! let out = decoder.decode(&BinaryVector::parse("0110")?)?;
//! assert!(out.result.converged);
//! assert_eq!(out.result.estimate, BinaryVector::parse("00100")?);
//! # Ok::<(), bpotf::Error>(())
//! ```

pub mod bp;
pub mod codes;
mod error;
pub mod gf2;
pub mod model;
pub mod otf;
pub mod pipeline;
pub mod sim;
pub mod sparsify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/gf2.md")]
    mod gf2 {}
    #[doc = include_str!("../../../book/src/detector-models.md")]
    mod detector_models {}
    #[doc = include_str!("../../../book/src/belief-propagation.md")]
    mod belief_propagation {}
    #[doc = include_str!("../../../book/src/ordered-tanner-forest.md")]
    mod ordered_tanner_forest {}
    #[doc = include_str!("../../../book/src/sparsification.md")]
    mod sparsification {}
    #[doc = include_str!("../../../book/src/pipelines.md")]
    mod pipelines {}
    #[doc = include_str!("../../../book/src/monte-carlo.md")]
    mod monte_carlo {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

pub use bp::{BpConfig, BpDecoder, BpVariant, DecodeResult, Stage};
pub use error::{Error, Result};
pub use gf2::{BinaryVector, SparseBinaryMatrix};
pub use model::{DetectorModel, SoftInfo};
pub use otf::{build_otf, OtfConfig, OtfSelection, VirtualCheckPolicy};
pub use pipeline::{Decoder, PipelineConfig, PipelineKind, PipelineOutcome};
pub use sparsify::{SparsifyConfig, TransferMatrix};
