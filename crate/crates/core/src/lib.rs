//! Marked translation surfaces as glued Euclidean polygons, with relative
//! period coordinates, saddle connection search, the exhaustion-type
//! functionals built from them, and the combinatorics of the strata.

pub mod acceptance;
pub mod builtin;
pub mod config;
pub mod error;
pub mod functionals;
pub mod geom;
pub mod hessian;
pub mod homology;
pub mod loops;
pub mod matroid;
pub mod report;
pub mod saddle;
pub mod strata;
pub mod surface;
pub mod sweep;
mod triangulation;

pub use num_complex::Complex64 as C64;

pub use builtin::Builtin;
pub use config::{OutputFormat, RunConfig};
pub use error::{Error, Result};
pub use functionals::{Analysis, CoverContext, FunctionalKind, FunctionalValue, WitnessSegment};
pub use hessian::{HessianReport, Signature};
pub use homology::PeriodChart;
pub use matroid::GreedyResult;
pub use saddle::SaddleConnection;
pub use strata::{CohdimBounds, Surjection};
pub use surface::{
    EdgeRef, Marking, StratumSignature, Surface, SurfaceDescription, Tolerances, VertexRef,
};
