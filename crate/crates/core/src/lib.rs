//! Finite presentations of discontinuous isometry groups of Euclidean,
//! spherical and hyperbolic space, read off from a fundamental polyhedron
//! and its side pairings.

pub mod dirichlet;
pub mod draw;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub(crate) mod lp;
pub mod pipeline;
pub mod polyhedra;
pub mod presentation;
pub mod tessellation;

pub use error::{Error, Result};
pub use geometry::{Chart, Frame, Isometry, Kind, Point, Space, Tolerance};
