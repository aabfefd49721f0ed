//! Exact lattice geometry and real geometric quantization of almost toric
//! and semitoric base diagrams.

pub mod catalog;
pub mod diagram;
pub mod graded;
pub mod lattice;
pub mod mv;
pub mod quantization;
pub mod rat;
pub mod render;
pub mod semitoric;

pub use diagram::{symplectic_sum, BaseKind, ClosedBase, Diagram, DiagramError, Node, Violation};
pub use graded::{Component, GradedQuant};
pub use lattice::{LatticeError, PrimitiveVector, RatPolygon, UnimodularMatrix};
pub use quantization::{quantize, quantize_closed, BSClass, QuantReport};
pub use rat::{LatticePoint, Rat, RatPoint};
