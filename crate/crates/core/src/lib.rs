//! Exact homology, orientability checks and NB-space recognition for finite
//! triangulated spaces.

pub mod cap;
pub mod chain;
pub mod complex;
pub mod constructions;
pub mod corpus;
pub mod cover;
pub mod error;
pub mod homology;
pub mod int;
pub mod matrix;
pub mod nb;
pub mod orientation;
pub mod ring;
pub mod snf;
pub mod space;
pub mod sphere;

pub use complex::{Cell, CellRef, DeltaComplex, Subcomplex, VertexId};
pub use error::{Error, Result};
pub use int::Int;
pub use ring::Ring;
