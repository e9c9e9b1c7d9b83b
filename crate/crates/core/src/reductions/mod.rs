//! Generators for the four hardness constructions, with certificates,
//! condition checkers, structured deciders and parameter witnesses.

pub mod bandwidth;
pub mod source;
pub mod stars_paths;
pub mod twincover;
pub mod witness;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ColoredGraph, Configuration, ModelError, TransformationSequence};
use crate::instance::{DiscoveryInstance, InstanceError, InstanceFile};
use crate::logic::builtin;

pub use bandwidth::BwLayout;
pub use source::{
    solve_mcc_bruteforce, solve_pas_bruteforce, ArcSupplyInstance, MulticoloredCliqueInstance,
    SupplyArc,
};
pub use stars_paths::{decide_paths, decide_stars, McLayout};
pub use twincover::TcLayout;
pub use witness::{verify_witness, Witness, WitnessReport};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("invalid source instance: {0}")]
    InvalidSource(String),
    #[error("invalid source solution: {0}")]
    InvalidSourceSolution(String),
    #[error("family mismatch: {0}")]
    WrongFamily(String),
    #[error("provenance: {0}")]
    Provenance(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Stars,
    Paths,
    Twincover,
    Bandwidth,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Stars,
        Family::Paths,
        Family::Twincover,
        Family::Bandwidth,
    ];

    /// Name of the builtin formula the family's instances use.
    pub fn formula_name(self) -> &'static str {
        match self {
            Family::Stars => "S_STARS",
            Family::Paths => "P_PATHS",
            Family::Twincover => "T_TWINCOVER",
            Family::Bandwidth => "B_BANDWIDTH",
        }
    }

    /// Whether the family reduces from multicolored clique (otherwise from arc supply).
    pub fn from_clique(self) -> bool {
        matches!(self, Family::Stars | Family::Paths)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Stars => "stars",
            Family::Paths => "paths",
            Family::Twincover => "twincover",
            Family::Bandwidth => "bandwidth",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| ReductionError::WrongFamily(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "snake_case")]
pub enum Source {
    MulticoloredClique(MulticoloredCliqueInstance),
    ArcSupply(ArcSupplyInstance),
}

impl Source {
    /// Reads either source format, trying multicolored clique first.
    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        if let Ok(s) = serde_json::from_str::<Source>(text) {
            match &s {
                Source::MulticoloredClique(m) => m.validate()?,
                Source::ArcSupply(p) => p.validate()?,
            }
            return Ok(s);
        }
        MulticoloredCliqueInstance::from_json(text)
            .map(Source::MulticoloredClique)
            .or_else(|_| ArcSupplyInstance::from_json(text).map(Source::ArcSupply))
            .map_err(|_| {
                ReductionError::InvalidSource(
                    "neither a multicolored clique nor an arc supply instance".into(),
                )
            })
    }

    /// Size parameter of the source: classes for cliques, vertices plus arcs for supplies.
    pub fn kappa(&self) -> usize {
        match self {
            Source::MulticoloredClique(m) => m.kappa,
            Source::ArcSupply(p) => p.demands.len() + p.arcs.len(),
        }
    }
}

/// A solution of the source problem: one vertex per class, or one pair index per arc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceSolution {
    Clique(Vec<usize>),
    Supply(Vec<usize>),
}

pub fn solve_source(source: &Source) -> Option<SourceSolution> {
    match source {
        Source::MulticoloredClique(m) => solve_mcc_bruteforce(m).map(SourceSolution::Clique),
        Source::ArcSupply(p) => solve_pas_bruteforce(p).map(SourceSolution::Supply),
    }
}

/// Role of every gadget node, in the coordinates certificates and checkers use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Layout {
    Modulator(McLayout),
    Twincover(TcLayout),
    Bandwidth(BwLayout),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub family: Family,
    pub source: Source,
    /// Scale used by the arc supply gadgets, when they have one.
    pub sigma: Option<u64>,
    pub layout: Layout,
    pub witness: Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GenOptions {
    /// Replaces the default scale of the arc supply gadgets, to build small graphs.
    pub sigma: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub instance: DiscoveryInstance,
    pub provenance: Provenance,
}

impl GeneratedInstance {
    pub fn family(&self) -> Family {
        self.provenance.family
    }

    pub fn graph(&self) -> &ColoredGraph {
        &self.instance.graph
    }

    pub fn to_file(&self) -> InstanceFile {
        let mut file = self.instance.to_file();
        file.formula = format!("builtin:{}", self.family().formula_name());
        file.provenance = Some(serde_json::to_value(&self.provenance).expect("serializable"));
        file
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    pub fn from_file(file: InstanceFile) -> Result<Self, ReductionError> {
        let value = file
            .provenance
            .clone()
            .ok_or_else(|| ReductionError::Provenance("instance has no provenance block".into()))?;
        let provenance: Provenance =
            serde_json::from_value(value).map_err(|e| ReductionError::Provenance(e.to_string()))?;
        let instance = file.into_instance()?;
        Ok(GeneratedInstance {
            instance,
            provenance,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        Self::from_file(InstanceFile::from_json(text)?)
    }
}

/// Builds the instance of `family` from `source`.
pub fn generate(
    family: Family,
    source: &Source,
    opts: &GenOptions,
) -> Result<GeneratedInstance, ReductionError> {
    match (family, source) {
        (Family::Stars, Source::MulticoloredClique(m)) => Ok(stars_paths::gen_stars(m)),
        (Family::Paths, Source::MulticoloredClique(m)) => Ok(stars_paths::gen_paths(m)),
        (Family::Twincover, Source::ArcSupply(p)) => twincover::gen_twincover(p, opts),
        (Family::Bandwidth, Source::ArcSupply(p)) => bandwidth::gen_bandwidth(p, opts),
        _ => Err(ReductionError::WrongFamily(format!(
            "{family} does not reduce from this source problem"
        ))),
    }
}

/// The forward-direction transformation for a source solution.
pub fn certificate(
    gen: &GeneratedInstance,
    solution: &SourceSolution,
) -> Result<TransformationSequence, ReductionError> {
    let p = &gen.provenance;
    match (&p.layout, &p.source, solution) {
        (Layout::Modulator(l), Source::MulticoloredClique(m), SourceSolution::Clique(c)) => {
            stars_paths::certificate(m, l, c)
        }
        (Layout::Twincover(l), Source::ArcSupply(s), SourceSolution::Supply(c)) => {
            twincover::certificate(s, l, c)
        }
        (Layout::Bandwidth(l), Source::ArcSupply(s), SourceSolution::Supply(c)) => {
            bandwidth::certificate(s, l, c)
        }
        _ => Err(ReductionError::InvalidSourceSolution(
            "solution kind does not match the family".into(),
        )),
    }
}

/// One failed condition with a short description of where.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ConditionReport {
    pub violations: Vec<Violation>,
}

impl ConditionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Names of the failed conditions, without repeats, in report order.
    pub fn failed(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for v in &self.violations {
            if !out.contains(&v.condition.as_str()) {
                out.push(&v.condition);
            }
        }
        out
    }

    fn fail(&mut self, condition: &str, detail: impl Into<String>) {
        self.violations.push(Violation {
            condition: condition.to_string(),
            detail: detail.into(),
        });
    }
}

/// Procedural evaluation of the family's conditions on `config`.
pub fn check_conditions(gen: &GeneratedInstance, config: &Configuration) -> ConditionReport {
    let x = config.indicator(gen.graph().n());
    match (&gen.provenance.layout, gen.family()) {
        (Layout::Modulator(l), Family::Stars) => stars_paths::check_stars(l, &x),
        (Layout::Modulator(l), _) => stars_paths::check_paths(l, &x),
        (Layout::Twincover(l), _) => twincover::check(l, &x),
        (Layout::Bandwidth(l), _) => bandwidth::check(l, &x),
    }
}

/// The family formula, for generic model checking.
pub fn family_formula(family: Family) -> crate::logic::Formula {
    builtin(family.formula_name()).expect("family formulas are builtin")
}

/// Incremental construction of a colored graph.
#[derive(Default)]
struct Builder {
    n: usize,
    edges: Vec<(usize, usize)>,
    colors: BTreeMap<String, Vec<usize>>,
}

impl Builder {
    fn with_colors(names: &[&str]) -> Self {
        Builder {
            colors: names.iter().map(|c| (c.to_string(), Vec::new())).collect(),
            ..Builder::default()
        }
    }

    fn node(&mut self, color: Option<&str>) -> usize {
        let v = self.n;
        self.n += 1;
        if let Some(c) = color {
            self.colors.get_mut(c).expect("declared color").push(v);
        }
        v
    }

    fn nodes(&mut self, count: usize, color: Option<&str>) -> Vec<usize> {
        (0..count).map(|_| self.node(color)).collect()
    }

    fn edge(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    fn path(&mut self, nodes: &[usize]) {
        for w in nodes.windows(2) {
            self.edge(w[0], w[1]);
        }
    }

    fn clique(&mut self, nodes: &[usize]) {
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                self.edge(a, b);
            }
        }
    }

    fn build(self) -> ColoredGraph {
        ColoredGraph::new(self.n, self.edges, self.colors).expect("generated graphs are simple")
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    family: Family,
    source: Source,
    sigma: Option<u64>,
    graph: ColoredGraph,
    start: Vec<usize>,
    budget: usize,
    layout: Layout,
    witness: Witness,
) -> GeneratedInstance {
    let instance = DiscoveryInstance::new(
        graph,
        Configuration::new(start),
        budget,
        family_formula(family),
    )
    .expect("generated instance is valid");
    GeneratedInstance {
        instance,
        provenance: Provenance {
            family,
            source,
            sigma,
            layout,
            witness,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert!("cliques".parse::<Family>().is_err());
    }

    #[test]
    fn source_reads_both_formats() {
        let m = MulticoloredCliqueInstance::new(2, 1, [(0, 1)]).unwrap();
        assert_eq!(
            Source::from_json(&m.to_json()).unwrap(),
            Source::MulticoloredClique(m.clone())
        );
        let tagged = serde_json::to_string(&Source::MulticoloredClique(m.clone())).unwrap();
        assert_eq!(
            Source::from_json(&tagged).unwrap(),
            Source::MulticoloredClique(m)
        );
        let p = ArcSupplyInstance {
            demands: vec![1, 1],
            arcs: vec![SupplyArc {
                from: 0,
                to: 1,
                pairs: vec![(1, 1)],
            }],
        };
        assert_eq!(
            Source::from_json(&p.to_json()).unwrap(),
            Source::ArcSupply(p)
        );
        assert!(Source::from_json("{}").is_err());
    }
}
