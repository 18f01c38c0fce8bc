//! Min-sum loopy belief propagation with difference messages for MAP
//! interpolation of an `N x N` grid block from its boundary.
//!
//! The crate is organised around the pieces needed to run the algorithm and
//! to check it against exact answers:
//!
//! * [`grid`]: coordinates, directions, boundary configurations and the
//!   symmetry group of the square.
//! * [`messages`]: the message-passing engine, generic over any graph with a
//!   designated interior, plus the unnormalized min-sum messages it is
//!   derived from.
//! * [`oracle`]: exact min-marginals and local solutions by enumeration and
//!   by a row-sweep dynamic program.
//! * [`regions`]: inner/outer shortest paths and the region decomposition
//!   that predicts the local-solution field of a one-run boundary.
//! * [`convergence`]: rectangles, compatible tuples and the forward/backward
//!   convergence checks run against recorded traces.
//! * [`cli`]: report-producing commands shared by the binary and examples.

pub mod cli;
pub mod convergence;
mod error;
pub mod field;
pub mod graph;
pub mod grid;
pub mod messages;
pub mod oracle;
pub mod regions;
pub mod tree;

pub use error::{Error, Result};
pub use field::LocalSolutionField;
pub use graph::GraphInstance;
pub use grid::{BoundaryConfig, Coord, DirectedEdge, Direction, Grid, SymmetryTransform};
pub use messages::{GridTrace, MessageState, Trace};
