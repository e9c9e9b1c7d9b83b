//! Shapes: per-class token counts with medium counts collapsed to a band symbol.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::flow::FlowNetwork;
use super::partition::VertexTypePartition;

/// One class entry. `Band` stands for any count in `[q, |V_i| - q]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ShapeEntry {
    Exact(usize),
    Band,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Shape(pub Vec<ShapeEntry>);

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.0.iter().map(|e| match e {
            ShapeEntry::Exact(c) => c.to_string(),
            ShapeEntry::Band => "_".to_string(),
        });
        write!(f, "({})", parts.format(","))
    }
}

/// Inclusive band `[q, size - q]`, or `None` when empty.
pub fn band(size: usize, q: usize) -> Option<(usize, usize)> {
    (2 * q <= size).then(|| (q, size - q))
}

pub fn entry_of(count: usize, size: usize, q: usize) -> ShapeEntry {
    match band(size, q) {
        Some((lo, hi)) if lo <= count && count <= hi => ShapeEntry::Band,
        _ => ShapeEntry::Exact(count),
    }
}

pub fn shape_of(
    p: &VertexTypePartition,
    q: usize,
    tokens: impl IntoIterator<Item = usize>,
) -> Shape {
    Shape(
        p.counts(tokens)
            .into_iter()
            .zip(p.sizes())
            .map(|(c, s)| entry_of(c, s, q))
            .collect(),
    )
}

/// Possible entries for a class of the given size, ascending.
pub fn class_entries(size: usize, q: usize) -> Vec<ShapeEntry> {
    let mut out: Vec<ShapeEntry> = (0..=size)
        .filter(|&c| entry_of(c, size, q) != ShapeEntry::Band)
        .map(ShapeEntry::Exact)
        .collect();
    if band(size, q).is_some() {
        out.push(ShapeEntry::Band);
    }
    out
}

/// Range of token totals a shape can realize.
pub fn total_range(p: &VertexTypePartition, q: usize, shape: &Shape) -> (usize, usize) {
    shape
        .0
        .iter()
        .zip(p.sizes())
        .fold((0, 0), |(lo, hi), (e, size)| match e {
            ShapeEntry::Exact(c) => (lo + c, hi + c),
            ShapeEntry::Band => {
                let (a, b) = band(size, q).expect("band entries only on classes with a band");
                (lo + a, hi + b)
            }
        })
}

/// Every shape admissible for `k` tokens, in lexicographic order.
pub fn enumerate_shapes(
    p: &VertexTypePartition,
    q: usize,
    k: usize,
) -> Box<dyn Iterator<Item = Shape> + '_> {
    let admissible = move |sh: &Shape| {
        let (lo, hi) = total_range(p, q, sh);
        lo <= k && k <= hi
    };
    if p.is_empty() {
        return Box::new(std::iter::once(Shape(Vec::new())).filter(admissible));
    }
    Box::new(
        p.sizes()
            .into_iter()
            .map(|s| class_entries(s, q))
            .multi_cartesian_product()
            .map(Shape)
            .filter(admissible),
    )
}

/// How band entries constrain the balance of a class whose start count is already in the band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandPolicy {
    /// The final count may be anywhere in the band.
    #[default]
    Free,
    /// The class keeps its count when it already lies in the band.
    Pinned,
}

/// Balance interval for one class.
pub fn class_interval(
    entry: ShapeEntry,
    start: usize,
    size: usize,
    q: usize,
    policy: BandPolicy,
) -> (i64, i64) {
    let s = start as i64;
    match entry {
        ShapeEntry::Exact(c) => (c as i64 - s, c as i64 - s),
        ShapeEntry::Band => {
            let (lo, hi) = band(size, q).expect("band entries only on classes with a band");
            let in_band = lo <= start && start <= hi;
            if in_band && policy == BandPolicy::Pinned {
                (0, 0)
            } else {
                (lo as i64 - s, hi as i64 - s)
            }
        }
    }
}

/// One node per class, unit-cost unbounded arcs both ways between adjacent classes.
pub fn build_network(
    p: &VertexTypePartition,
    start_counts: &[usize],
    shape: &Shape,
    q: usize,
    policy: BandPolicy,
) -> FlowNetwork {
    let sizes = p.sizes();
    let intervals = (0..p.len())
        .map(|i| class_interval(shape.0[i], start_counts[i], sizes[i], q, policy))
        .collect();
    let mut net = FlowNetwork::new(intervals);
    for i in 0..p.len() {
        for j in 0..p.len() {
            if p.adjacent[i][j] {
                net.add_arc(i, j, None, 1);
            }
        }
    }
    net
}
