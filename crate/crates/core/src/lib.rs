//! Groupoids of self-similar Z-actions on graphs, given by a pair of integer matrices.
//!
//! A pair `(A, B)` defines a self-similar action of `Z` on the path space
//! of the graph of `A` ([`action`]), an ample groupoid built from triples
//! `(mu, m, nu)` ([`groupoid`]), its compact open bisections
//! ([`bisection`]), the homology of the groupoid and the index map into
//! `H1` ([`homology`]), and constructive factorizations of full-group
//! elements ([`full_group`]). [`verify`] holds the exhaustive and sampled
//! law checks; with the `parallel` feature they run on rayon.

pub mod action;
pub mod bisection;
pub mod error;
pub mod full_group;
pub mod graph;
pub mod groupoid;
pub mod homology;
pub mod matrix;
pub mod path;
pub mod report;
pub mod sample;
pub mod verify;
