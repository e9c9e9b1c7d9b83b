//! Discovery instances and their JSON and PACE `.gr` file formats.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ColoredGraph, Configuration, ModelError};
use crate::logic::{builtin, parse, Formula, LogicError};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("formula: {0}")]
    Formula(#[from] LogicError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl From<ModelError> for InstanceError {
    fn from(e: ModelError) -> Self {
        InstanceError::Schema(e.to_string())
    }
}

/// A graph, start configuration, slide budget and formula in the free set `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscoveryInstance {
    pub graph: ColoredGraph,
    pub start: Configuration,
    pub budget: usize,
    pub formula: Formula,
}

impl DiscoveryInstance {
    pub fn new(
        graph: ColoredGraph,
        start: Configuration,
        budget: usize,
        formula: Formula,
    ) -> Result<Self, InstanceError> {
        start.check_range(graph.n())?;
        if let Some(v) = formula.free_vertex_vars().into_iter().next() {
            return Err(InstanceError::Schema(format!(
                "formula has free vertex variable `{v}`"
            )));
        }
        Ok(DiscoveryInstance {
            graph,
            start,
            budget,
            formula,
        })
    }

    pub fn k(&self) -> usize {
        self.start.len()
    }

    pub fn with_budget(&self, budget: usize) -> Self {
        DiscoveryInstance {
            budget,
            ..self.clone()
        }
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            n: self.graph.n(),
            edges: self.graph.edges().iter().map(|&(u, v)| [u, v]).collect(),
            colors: self.graph.colors().clone(),
            tokens: self.start.as_slice().to_vec(),
            budget: self.budget as i64,
            formula: self.formula.to_string(),
            provenance: None,
        }
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }
}

/// On-disk layout. `provenance` carries generator metadata and is ignored by solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub colors: BTreeMap<String, Vec<usize>>,
    pub tokens: Vec<usize>,
    pub budget: i64,
    pub formula: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

impl InstanceFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        serde_json::from_str(text).map_err(|e| InstanceError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Validates the file and resolves `builtin:NAME` formulas.
    pub fn into_instance(self) -> Result<DiscoveryInstance, InstanceError> {
        if self.budget < 0 {
            return Err(InstanceError::Schema(format!(
                "budget {} is negative",
                self.budget
            )));
        }
        let mut tokens = self.tokens.clone();
        tokens.sort_unstable();
        if tokens.windows(2).any(|w| w[0] == w[1]) {
            return Err(InstanceError::Schema("duplicate token".into()));
        }
        if let Some(&v) = tokens.iter().find(|&&v| v >= self.n) {
            return Err(InstanceError::Schema(format!(
                "token on nonexistent vertex {v}"
            )));
        }
        let graph =
            ColoredGraph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])), self.colors)?;
        let formula = match self.formula.strip_prefix("builtin:") {
            Some(name) => builtin(name.trim())?,
            None => parse(&self.formula)?,
        };
        DiscoveryInstance::new(
            graph,
            Configuration::new(tokens),
            self.budget as usize,
            formula,
        )
    }
}

pub fn read_instance_str(text: &str) -> Result<DiscoveryInstance, InstanceError> {
    InstanceFile::from_json(text)?.into_instance()
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<DiscoveryInstance, InstanceError> {
    read_instance_str(&std::fs::read_to_string(path)?)
}

pub fn write_instance(
    path: impl AsRef<Path>,
    inst: &DiscoveryInstance,
) -> Result<(), InstanceError> {
    std::fs::write(path, inst.to_json())?;
    Ok(())
}

/// Reads a PACE `.gr` graph: `p tw n m` header, 1-indexed edge lines, `c` comments.
pub fn parse_gr(text: &str) -> Result<ColoredGraph, InstanceError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let err = |message: String| InstanceError::Parse {
            line: i + 1,
            column: 1,
            message,
        };
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] | ["c", ..] => {}
            ["p", _, nv, _] => {
                n = Some(nv.parse::<usize>().map_err(|e| err(e.to_string()))?);
            }
            [a, b] => {
                if n.is_none() {
                    return Err(err("edge before header".into()));
                }
                let u: usize = a
                    .parse()
                    .map_err(|e: std::num::ParseIntError| err(e.to_string()))?;
                let v: usize = b
                    .parse()
                    .map_err(|e: std::num::ParseIntError| err(e.to_string()))?;
                if u == 0 || v == 0 {
                    return Err(err("vertices are 1-indexed".into()));
                }
                edges.push((u - 1, v - 1));
            }
            _ => return Err(err(format!("unrecognized line `{line}`"))),
        }
    }
    let n = n.ok_or_else(|| InstanceError::Schema("missing `p` header".into()))?;
    Ok(ColoredGraph::plain(n, edges)?)
}

pub fn read_gr(path: impl AsRef<Path>) -> Result<ColoredGraph, InstanceError> {
    parse_gr(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_instance_parses() {
        let text = r#"{"n":1,"edges":[],"colors":{},"tokens":[0],"budget":0,"formula":"exists x0. X(x0)"}"#;
        let inst = read_instance_str(text).unwrap();
        assert_eq!((inst.graph.n(), inst.k(), inst.budget), (1, 1, 0));
    }

    #[test]
    fn schema_violations() {
        let bad_token = r#"{"n":1,"edges":[],"tokens":[3],"budget":0,"formula":"true"}"#;
        assert!(matches!(
            read_instance_str(bad_token),
            Err(InstanceError::Schema(_))
        ));
        let negative = r#"{"n":1,"edges":[],"tokens":[],"budget":-1,"formula":"true"}"#;
        assert!(matches!(
            read_instance_str(negative),
            Err(InstanceError::Schema(_))
        ));
        let broken = "{\"n\":1,\n\"edges\":[}";
        assert!(matches!(
            read_instance_str(broken),
            Err(InstanceError::Parse { line: 2, .. })
        ));
        let unknown = r#"{"n":1,"edges":[],"tokens":[],"budget":0,"formula":"builtin:NOPE"}"#;
        assert!(matches!(
            read_instance_str(unknown),
            Err(InstanceError::Formula(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let g = ColoredGraph::path(4).with_color("C1", vec![3]).unwrap();
        let f = parse("exists x. (X(x) & C1(x))").unwrap();
        let inst = DiscoveryInstance::new(g, Configuration::new([0]), 3, f).unwrap();
        assert_eq!(read_instance_str(&inst.to_json()).unwrap(), inst);
    }

    #[test]
    fn gr_is_one_indexed() {
        let g = parse_gr("c comment\np tw 3 2\n1 2\n2 3\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert!(parse_gr("p tw 2 1\n0 1\n").is_err());
    }
}
