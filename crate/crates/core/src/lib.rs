//! Quandle homology and the homotopy groups of rack and quandle spaces.
//!
//! The crate builds finite quandles (raw tables, Alexander modules, finite fields),
//! computes rack/quandle homology with arbitrary X-set coefficients through a sparse
//! Smith normal form, derives the second and third homotopy groups of quandle spaces
//! for regular Alexander quandles, generates Mochizuki-type cocycles over finite
//! fields, and evaluates cocycle state sums on classical link diagrams.

pub mod cocycles;
pub mod field;
pub mod homology;
pub mod homotopy;
pub mod link;
pub mod quandle;
pub mod tables;
pub mod textpoly;
