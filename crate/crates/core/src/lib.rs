//! Finite-scale machinery for metric ultraproducts of finite simple groups:
//! exact finite-field linear algebra, the Hamming, projective-rank and
//! conjugacy metrics, rank-bounded centralizer constructions, centralizer
//! structure, and discrete geodesic chains.

pub mod centralizers;
pub mod constructions;
pub mod error;
pub mod geodesics;
pub mod gf;
pub mod groups;
pub mod linalg;
pub mod metrics;
pub mod poly;

pub use error::{Error, Result};
pub use gf::{Field, FieldElement, FieldSpec};
pub use groups::{ClassicalElement, GroupDescriptor, GroupElement, GroupTag, Permutation};
pub use linalg::{Matrix, RankShift, SpanBuilder, Vector};
pub use metrics::{MetricKind, MetricValue, Rational};
pub use poly::Poly;
