//! Multiple packings (list-decodable codes) in Euclidean space.
//!
//! The crate computes Chebyshev and average radii of point lists, verifies
//! and list-decodes codes, builds codes by random coding with expurgation,
//! estimates bad-list tail probabilities and evaluates closed-form density
//! bounds for bounded and unbounded packings.

pub mod bounds;
pub mod covering;
pub mod ensembles;
pub mod error;
pub mod expurgation;
pub mod geometry;
pub mod io;
pub mod montecarlo;

pub use error::{Error, Result};
pub use geometry::{Code, ListWitness, PackingNotion, PackingParams, RadiusNotion};
