//! Trace codes over `R = F_p + uF_p + vF_p + uvF_p`.
//!
//! [`code::TraceCode`] builds `C(m, p)` from the defining set `L` of units
//! with square leading coefficient, enumerates its Lee weights exactly and
//! evaluates them a second way through additive character sums.
//! [`theory`] holds the closed-form spectra, Gauss sums and bounds, and
//! [`analysis`] the dual-distance, minimality and secret-sharing checks.
//! [`report`] assembles both sides into the reports printed by the
//! `tracecode` binary.

pub mod analysis;
pub mod code;
pub mod error;
pub mod gf;
pub mod report;
pub mod ring;
pub mod theory;

pub use code::{EnumerationOptions, GeneratorMatrix, Mode, TraceCode, WeightDistribution};
pub use error::{Error, Result};
pub use gf::{Field, FieldElement, FieldParams};
pub use ring::{BaseRingElement, Ring, RingElement};
