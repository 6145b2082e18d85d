//! Computations on k-cube groups.
//!
//! The pipeline runs in this order: a [`presentation::Presentation`] is checked
//! against the square axioms, closed into its pointed-square set, and extended
//! to pointed n-cubes ([`cubes`]). The pointed k-cubes index the vertices of a
//! k-rank graph whose incidence matrices ([`rank_graph`]) feed an integer chain
//! complex. [`homology`] computes that complex exactly through Smith normal
//! forms, and [`ktheory`] turns the homology into exact-sequence reports.
//! [`cellular`] computes the homology of the quotient cube complex itself, and
//! [`covers`] handles the two-vertex double-cover graphs.

pub mod cellular;
pub mod covers;
pub mod cubes;
pub mod error;
pub mod fixtures;
pub mod homology;
pub mod ktheory;
pub mod par;
pub mod presentation;
pub mod rank_graph;
pub mod report;

pub use error::{Error, Result};
