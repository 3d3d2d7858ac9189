//! Continuous-time quantum walks on weighted graphs.
//!
//! The crate builds weighted graphs and their products, decomposes the
//! generalized adjacency matrix `M_q = qD + A` (or the Laplacian), evaluates
//! transition amplitudes, and classifies vertices as sedentary, involved in
//! perfect or pretty good state transfer, or neither.

pub mod dsl;
pub mod edgelist;
pub mod error;
pub mod families;
pub mod graph;
pub mod numtheory;
pub mod sedentary;
pub mod spectral;
pub mod twins;
pub mod walk;

pub use error::{FamilyError, GraphError, NumberError, ParseError, SedentaryError, SpectralError, TwinError, WalkError};
pub use graph::{MatrixKind, Weight, WeightedGraph};

pub use sedentary::{classify_vertex, Verdict, VertexClassification};
pub use spectral::{decompose, SpectralDecomposition};
pub use walk::{InfimumEstimate, WalkEvaluator};
