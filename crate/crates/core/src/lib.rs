//! Labelled planar graphs with a degree window `[d, D]`: exact enumeration of the
//! classes `P(n, d, D)`, the graph rewrites that move between them, and exhaustive
//! checks of the counting inequalities that hold over those classes.

pub mod appearance;
pub mod enumeration;
pub mod graph;
pub mod graph6;
pub mod iso;
pub mod planarity;
pub mod sampler;
pub mod surgery;
pub mod verify;

pub use graph::{in_class, ClassSpec, ComponentPartition, Edge, GraphError, LabelledGraph};
pub use iso::is_isomorphic;
pub use planarity::{is_planar, planar_embedding, RotationSystem};
