//! Half-spaces, thick polyhedra, essential half-spaces and relative interiors.

mod halfspace;
mod polyhedron;

pub use halfspace::{bisector, HalfSpace, HalfSpaceSpec, Side};
pub use polyhedron::{default_frame_radius, Polyhedron};
pub(crate) use polyhedron::rows_in;
