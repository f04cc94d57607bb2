//! Exact computations on finite ultrametric spaces.
//!
//! The crate covers the Gromov-Hausdorff ultrametric between finite
//! ultrametric spaces: the infimum of Hausdorff distances over all isometric
//! embeddings of both spaces into a common ultrametric space. Distances are
//! exact rationals throughout.
//!
//! - [`space`]: validated spaces and spectra
//! - [`dendrogram`]: merge trees, canonical forms, isometry testing
//! - [`quotient`]: closed-ball quotients
//! - [`hyperspace`]: Hausdorff distance, nets, subspaces
//! - [`amalgam`]: gluing along a common subspace
//! - [`ugh`]: the distance itself, certificates, and a brute-force oracle
//! - [`gallery`]: standard families and random generators
//! - [`format`]: JSON file formats

pub mod amalgam;
pub mod dendrogram;
pub mod format;
pub mod gallery;
pub mod hyperspace;
pub mod quotient;
pub mod rational;
pub mod space;
pub mod ugh;

pub use amalgam::{chain_glue, disjoint_amalgam, glue, ChainGlue, ChainLink, GlueError, GlueSpec};
pub use dendrogram::{from_dendrogram, isometric, isometry, to_dendrogram, Dendrogram, DendrogramError};
pub use gallery::{
    cauchy_sequence, crowd_family, in_uk, random_glue_spec, random_space, single_linkage,
    two_point_space, uk_violation, GalleryError, SpectrumConstraint, UkViolation,
};
pub use hyperspace::{epsilon_net, hausdorff_distance, indices_of, restrict, HyperspaceError};
pub use quotient::{closed_quotient, QuotientSpace};
pub use rational::{ParseRationalError, Rational};
pub use space::{merge_duplicates, spectrum, validate_ultrametric, FiniteUltrametricSpace, SpaceError, Spectrum};
pub use ugh::{
    certificate, spectrum_agreement, ugh_distance, ugh_oracle, Certificate, CertificateError, UghError,
    UghResult,
};
