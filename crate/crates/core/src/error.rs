use thiserror::Error;

use crate::complex::VertexId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty cell in input")]
    EmptyCell,
    #[error("duplicate maximal cell {0:?}")]
    DuplicateCell(Vec<usize>),
    #[error("cell {0:?} repeats a vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("complex is not pure: {0}")]
    NotPure(String),
    #[error("complex is not simplicial; subdivide first")]
    NotSimplicial,
    #[error("complex has a cell with a repeated vertex; subdivide first")]
    NotRegular,
    #[error("not a simplicial map: {0}")]
    NotSimplicialMap(String),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("branching codimension-one cell with {cofaces} cofaces")]
    Branching { cofaces: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("group closure exceeded {0} elements")]
    GroupTooLarge(usize),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("gluing map is not an isomorphism of subcomplexes: {0}")]
    BadGluing(String),
    #[error("not orientable over {0}")]
    NotOrientable(crate::ring::Ring),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
