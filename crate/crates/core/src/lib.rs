//! Exact-arithmetic toric geometry: polyhedral cones and fans over the
//! integers, Gale duality with the GKZ secondary fan on the moving cone,
//! torus-invariant divisors, and certified D-flips from non-projective
//! complete simplicial fans to projective models.

pub mod cone;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod flip;
pub mod gkz;
pub mod json;
pub mod linalg;

pub use cone::{Cone, Membership};
pub use divisor::{CartierData, DivClass, TDivisor};
pub use error::{Error, Result};
pub use fan::{Fan, SubdivisionReport, ValidationReport, Violation};
pub use flip::{FlipCertificate, PipelineOptions, PipelineResult, VerificationReport};
pub use gkz::{Chamber, SecondaryFan, Wall, WeightMatrix, WeightSource};
pub use linalg::{IMatrix, Int, Rat};
