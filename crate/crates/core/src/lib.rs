//! Plumbing graphs of normal surface singularities, Milnor fillability,
//! the least divisor carrying a ubiquitous open book, and numerical checks
//! of the contact structure on the link.

pub mod contact;
pub mod divisor;
pub mod error;
pub mod graph;
pub mod openbook;

pub use divisor::{
    check_theorem_conditions, constraint_vector, minimal_divisor, minimal_divisor_with,
    oracle_minimal_divisor, Divisor, DivisorReport, MultiplicityVector,
};
pub use error::{ContactError, DivisorError, GraphError, OpenBookError, PolyError};
pub use graph::{IntersectionMatrix, PlumbingGraph, Vertex, VertexPermutation};
pub use openbook::{decorate, decorated_isomorphic, ubiquitous_open_book, DecoratedLinkGraph, OpenBookReport};
