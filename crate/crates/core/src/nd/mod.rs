//! Solver parameterized by neighborhood diversity: twin classes, shapes and
//! interval-balance flows.

pub mod flow;
pub mod partition;
pub mod shape;
pub mod solver;

pub use flow::{min_cost_flow, solve_minmcf, FlowNetwork, FlowSolution};
pub use partition::{twin_partition, VertexTypePartition};
pub use shape::{build_network, enumerate_shapes, shape_of, BandPolicy, Shape, ShapeEntry};
pub use solver::{min_budget_nd, solve_nd, NdOptions};
