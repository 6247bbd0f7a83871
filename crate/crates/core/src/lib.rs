//! Graphs of groups with trivial or infinite cyclic edge groups.
//!
//! The crate models Serre graphs, graphs of groups whose vertex groups are
//! free groups of finite rank or fundamental groups of smaller graphs of
//! groups, words in the path group, isomorphisms between graphs of groups,
//! Dehn twists, conjugation relative to an isomorphism, and the
//! quotient/blow-up surgery that relates a twist on a subgraph with a twist
//! on the whole graph.

pub mod dehn;
pub mod error;
pub mod fixtures;
pub mod free_word;
pub mod gog;
pub mod graph;
pub mod group;
pub mod hconj;
pub mod hom;
pub mod iso;
pub mod surgery;
pub mod syntax;
pub mod word;

pub use error::{GogError, Report, Violation};
pub use free_word::FreeWord;
pub use gog::{EdgeGroup, GogBuilder, GraphOfGroups};
pub use graph::{DartId, Orientation, SerreGraph, SpanningTree, VertexId};
pub use group::{FreeGroup, GroupElement, GroupIso, Pi1Group, VertexGroup};
pub use hom::{PathHom, VertexMap};
pub use iso::GogIso;
pub use word::PathWord;
