//! Treewidth dynamic program with pluggable type engines.

pub mod decomposition;
pub mod dp;
pub mod engine;
pub mod structure;

pub use decomposition::{
    alternative_td, compute_td, parse_td, read_td, NiceTreeDecomposition, NodeKind,
    TreeDecomposition,
};
pub use dp::{solve_tw, solve_tw_with, EngineKind, TwOptions};
pub use engine::{CanonicalEngine, EfGameEngine, TypeEngine, TypeId};
pub use structure::Structure;

use crate::instance::DiscoveryInstance;
use crate::solution::{SolveError, Verdict};

/// Decides the instance on a computed decomposition.
pub fn solve_tw_auto(inst: &DiscoveryInstance, opts: &TwOptions) -> Result<Verdict, SolveError> {
    let td = compute_td(&inst.graph)?;
    solve_tw(inst, &td, opts)
}
