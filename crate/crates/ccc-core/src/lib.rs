//! Constructions and certification of optimal constant-composition codes of
//! weight three, built on group divisible codes (GDCs).
//!
//! The crate is organized around a strict trust boundary: every construction
//! re-verifies its output from scratch (distance, composition, group
//! condition, pair coverage), and the certification pipeline compares sizes
//! against independently evaluated bounds. Nothing is served unverified —
//! not even the embedded catalog data.

pub mod algebra;
pub mod bounds;
pub mod catalog;
pub mod codes;
pub mod designs;
pub mod gdc;
pub mod io;
pub mod pipeline;

mod error;

pub use error::{Error, Result};

pub use codes::{
    BlockDesign, Code, Codeword, Composition, CoverageMode, Gdc, GddType, GroupPartition,
    VerificationReport,
};
pub use pipeline::{CertifiedCode, CodeStatus};
