//! Solution discovery by token sliding on colored graphs.
//!
//! The crate provides the graph and configuration model, a logic layer for
//! FO/MSO formulas, three independent solvers (exhaustive, neighborhood
//! diversity and tree decomposition based), and generators for the standard
//! hardness constructions together with their certificates and witnesses.

pub mod assignment;
pub mod graph;
pub mod instance;
pub mod logic;
pub mod nd;
pub mod oracle;
pub mod reductions;
pub mod solution;
pub mod tw;

pub use graph::{
    apply_sequence, min_relocation_cost, relocation_plan, route_pairs, ColoredGraph, Configuration,
    ModelError, RelocationPlan, Slide, TransformationSequence,
};
pub use instance::{read_instance, write_instance, DiscoveryInstance, InstanceError};
pub use logic::{model_check, parse, Formula, FormulaStats, LogicError};
pub use solution::{Solution, SolveError, Verdict};
