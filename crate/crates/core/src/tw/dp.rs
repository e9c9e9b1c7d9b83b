//! Dynamic program over a nice tree decomposition.
//!
//! A state at node `i` is `(kappa, ell, T', A, type, f)`. It is valid when some
//! `T_i` in the subgraph `G_i` of size `kappa` meets the bag in `T'` and has the
//! given type, and within `ell` slides inside `G_i` the start tokens of `G_i`
//! plus `-f(v)` extra tokens on each `v` with `f(v) < 0` reach `T_i` minus
//! `T' \ A` plus `f(v)` extra tokens on each `v` with `f(v) > 0`.
//!
//! Equivalently, with `e(v) = f(v) + [v in A] - [v in S]`, a flow inside `G_i`
//! of cost `ell` has net inflow `e(v)` at every bag vertex and
//! `[v in T_i] - [v in S]` at every forgotten vertex. All transitions below
//! follow from this flow reading.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::graph::ColoredGraph;
use crate::instance::DiscoveryInstance;
use crate::logic::{stats, Fragment};
use crate::solution::{Solution, SolveError, Verdict};

use super::decomposition::{NiceTreeDecomposition, NodeKind};
use super::engine::{CanonicalEngine, EfGameEngine, TypeEngine, TypeId};
use super::structure::label;

/// Default cap on the number of states stored at one node.
pub const DEFAULT_STATE_CAP: usize = 2_000_000;

/// A state without its cost; bag subsets are bitmasks over bag positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey {
    pub kappa: u8,
    pub t_prime: u32,
    pub a_set: u32,
    pub type_id: TypeId,
    pub f: Vec<i8>,
}

/// Costs per key: only the minimum after cleaning, every reached cost otherwise.
pub type Table = HashMap<StateKey, BTreeSet<u32>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Canonical,
    EfGame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwOptions {
    pub engine: EngineKind,
    pub clean: bool,
    pub state_cap: usize,
}

impl Default for TwOptions {
    fn default() -> Self {
        TwOptions {
            engine: EngineKind::Canonical,
            clean: true,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

fn insert_bit(mask: u32, pos: usize, bit: bool) -> u32 {
    let low = (1u32 << pos) - 1;
    (mask & low) | ((mask & !low) << 1) | ((bit as u32) << pos)
}

fn remove_bit(mask: u32, pos: usize) -> u32 {
    let low = (1u32 << pos) - 1;
    (mask & low) | ((mask >> 1) & !low)
}

/// Problem data shared by all node handlers.
pub struct Dp<'a> {
    pub graph: &'a ColoredGraph,
    pub in_start: Vec<bool>,
    pub k: usize,
    pub budget: usize,
    pub clean: bool,
    pub state_cap: usize,
}

impl<'a> Dp<'a> {
    pub fn new(inst: &'a DiscoveryInstance, clean: bool, state_cap: usize) -> Self {
        let n = inst.graph.n();
        let k = inst.k();
        Dp {
            graph: &inst.graph,
            in_start: inst.start.indicator(n),
            k,
            // Longer sequences are never needed: each token moves at most n - 1 times.
            budget: inst.budget.min(k * n),
            clean,
            state_cap,
        }
    }

    fn add(&self, table: &mut Table, key: StateKey, ell: u32) {
        let costs = table.entry(key).or_default();
        if self.clean {
            if costs.first().is_none_or(|&c| ell < c) {
                costs.clear();
                costs.insert(ell);
            }
        } else {
            costs.insert(ell);
        }
    }

    fn checked(&self, table: Table) -> Result<Table, SolveError> {
        let size: usize = table.values().map(BTreeSet::len).sum();
        if size > self.state_cap {
            return Err(SolveError::StateBudgetExceeded {
                size,
                cap: self.state_cap,
            });
        }
        Ok(table)
    }

    pub fn leaf(&self, engine: &mut dyn TypeEngine) -> Table {
        let mut t = Table::new();
        let key = StateKey {
            kappa: 0,
            t_prime: 0,
            a_set: 0,
            type_id: engine.empty(),
            f: Vec::new(),
        };
        self.add(&mut t, key, 0);
        t
    }

    /// Introduces `u`; `bag` is the new bag.
    pub fn introduce(
        &self,
        states: &Table,
        u: usize,
        bag: &[usize],
        engine: &mut dyn TypeEngine,
    ) -> Result<Table, SolveError> {
        let k = self.k as i64;
        let pos = bag.iter().position(|&v| v == u).expect("u in bag");
        let old_bag: Vec<usize> = bag.iter().copied().filter(|&v| v != u).collect();
        let nbrs: Vec<usize> = (0..old_bag.len())
            .filter(|&i| self.graph.has_edge(u, old_bag[i]))
            .collect();
        let u_start = self.in_start[u] as i64;
        let colors = self.graph.colors_of(u);
        let mut out = Table::new();
        for (key, costs) in states {
            for u_target in [false, true] {
                let kappa = key.kappa as usize + u_target as usize;
                if kappa > self.k {
                    continue;
                }
                let ty = engine.introduce(key.type_id, pos, label(&colors, u_target), &nbrs);
                let t_prime = insert_bit(key.t_prime, pos, u_target);
                for u_in_a in [false, true] {
                    if u_in_a && !u_target {
                        continue;
                    }
                    let a_set = insert_bit(key.a_set, pos, u_in_a);
                    // g(v) = f(v) - f'(v) is the flow from v into u over the new edge.
                    let mut new_f: Vec<i64> = key.f.iter().map(|&x| x as i64).collect();
                    let mut emit = |new_f: &[i64], sum_g: i64, cost: i64| {
                        let fu = sum_g - u_in_a as i64 + u_start;
                        if fu.abs() > k {
                            return;
                        }
                        let mut f: Vec<i8> = new_f.iter().map(|&x| x as i8).collect();
                        f.insert(pos, fu as i8);
                        let key2 = StateKey {
                            kappa: kappa as u8,
                            t_prime,
                            a_set,
                            type_id: ty,
                            f,
                        };
                        for &ell in costs {
                            let ell2 = ell as i64 + cost;
                            if ell2 <= self.budget as i64 {
                                self.add(&mut out, key2.clone(), ell2 as u32);
                            }
                        }
                    };
                    enumerate_flows(&key.f, &nbrs, k, 0, &mut new_f, 0, 0, &mut emit);
                }
            }
        }
        self.checked(out)
    }

    /// Forgets the vertex at bag position `pos`.
    pub fn forget(
        &self,
        states: &Table,
        pos: usize,
        engine: &mut dyn TypeEngine,
    ) -> Result<Table, SolveError> {
        let mut out = Table::new();
        for (key, costs) in states {
            let bit = 1u32 << pos;
            if key.f[pos] != 0 || (key.t_prime & bit) != (key.a_set & bit) {
                continue;
            }
            let mut f = key.f.clone();
            f.remove(pos);
            let key2 = StateKey {
                kappa: key.kappa,
                t_prime: remove_bit(key.t_prime, pos),
                a_set: remove_bit(key.a_set, pos),
                type_id: engine.forget(key.type_id, pos),
                f,
            };
            for &ell in costs {
                self.add(&mut out, key2.clone(), ell);
            }
        }
        self.checked(out)
    }

    /// Combines two tables over the same bag. The start token on a shared bag
    /// vertex is counted by both sides, so it is subtracted once.
    pub fn join(
        &self,
        left: &Table,
        right: &Table,
        bag: &[usize],
        engine: &mut dyn TypeEngine,
    ) -> Result<Table, SolveError> {
        let k = self.k as i64;
        let s_bag: Vec<i64> = bag.iter().map(|&v| self.in_start[v] as i64).collect();
        let mut by_t: HashMap<u32, Vec<(&StateKey, &BTreeSet<u32>)>> = HashMap::new();
        for (key, costs) in right {
            by_t.entry(key.t_prime).or_default().push((key, costs));
        }
        let mut out = Table::new();
        for (l, lc) in left {
            let Some(group) = by_t.get(&l.t_prime) else {
                continue;
            };
            let shared = l.t_prime.count_ones() as usize;
            for &(r, rc) in group {
                if l.a_set & r.a_set != 0 {
                    continue;
                }
                let kappa = l.kappa as usize + r.kappa as usize - shared;
                if kappa > self.k {
                    continue;
                }
                let f: Option<Vec<i8>> = (0..bag.len())
                    .map(|i| {
                        let x = l.f[i] as i64 + r.f[i] as i64 - s_bag[i];
                        (x.abs() <= k).then_some(x as i8)
                    })
                    .collect();
                let Some(f) = f else { continue };
                let key = StateKey {
                    kappa: kappa as u8,
                    t_prime: l.t_prime,
                    a_set: l.a_set | r.a_set,
                    type_id: engine.compose(l.type_id, r.type_id),
                    f,
                };
                for &a in lc {
                    for &b in rc {
                        let ell = a as usize + b as usize;
                        if ell <= self.budget {
                            self.add(&mut out, key.clone(), ell as u32);
                        }
                    }
                }
            }
        }
        self.checked(out)
    }

    /// Runs bottom-up; `keep` retains every node's table for inspection.
    pub fn run(
        &self,
        td: &NiceTreeDecomposition,
        engine: &mut dyn TypeEngine,
        keep: bool,
    ) -> Result<Vec<Option<Table>>, SolveError> {
        let mut tables: Vec<Option<Table>> = vec![None; td.nodes.len()];
        for x in td.postorder() {
            let node = &td.nodes[x];
            let take = |tables: &mut Vec<Option<Table>>, c: usize| -> Table {
                if keep {
                    tables[c].clone().expect("child done")
                } else {
                    tables[c].take().expect("child done")
                }
            };
            let table = match node.kind {
                NodeKind::Leaf => self.leaf(engine),
                NodeKind::Introduce(u) => {
                    let child = take(&mut tables, node.children[0]);
                    self.introduce(&child, u, &node.bag, engine)?
                }
                NodeKind::Forget(u) => {
                    let child = take(&mut tables, node.children[0]);
                    let pos = td.nodes[node.children[0]]
                        .bag
                        .iter()
                        .position(|&v| v == u)
                        .expect("u in child bag");
                    self.forget(&child, pos, engine)?
                }
                NodeKind::Join => {
                    let l = take(&mut tables, node.children[0]);
                    let r = take(&mut tables, node.children[1]);
                    self.join(&l, &r, &node.bag, engine)?
                }
            };
            tables[x] = Some(table);
        }
        Ok(tables)
    }
}

/// Enumerates new values `f'(v)` in `[-k, k]` for the neighbor positions, calling
/// `emit(f', sum of g, sum of |g|)` for each assignment.
#[allow(clippy::too_many_arguments)]
fn enumerate_flows(
    f: &[i8],
    nbrs: &[usize],
    k: i64,
    depth: usize,
    new_f: &mut Vec<i64>,
    sum_g: i64,
    cost: i64,
    emit: &mut dyn FnMut(&[i64], i64, i64),
) {
    if depth == nbrs.len() {
        emit(new_f, sum_g, cost);
        return;
    }
    let v = nbrs[depth];
    let old = f[v] as i64;
    for nv in -k..=k {
        let g = old - nv;
        new_f[v] = nv;
        enumerate_flows(
            f,
            nbrs,
            k,
            depth + 1,
            new_f,
            sum_g + g,
            cost + g.abs(),
            emit,
        );
    }
    new_f[v] = old;
}

/// Minimum root cost among accepted states with `kappa = k`.
pub fn root_cost(table: &Table, k: usize, engine: &mut dyn TypeEngine) -> Option<usize> {
    let mut best: Option<u32> = None;
    let mut keys: Vec<&StateKey> = table.keys().filter(|key| key.kappa as usize == k).collect();
    keys.sort();
    for key in keys {
        let c = *table[key].first().expect("nonempty");
        if best.map_or(true, |b| c < b) && engine.root_accepts(key.type_id) {
            best = Some(c);
        }
    }
    best.map(|c| c as usize)
}

/// Engine-B rounds: the quantifier rank of the formula.
pub fn ef_rounds(inst: &DiscoveryInstance) -> Result<usize, SolveError> {
    let st = stats(&inst.formula);
    if st.fragment != Fragment::FO {
        return Err(SolveError::FragmentUnsupported(st.fragment));
    }
    Ok(st.quantifier_rank)
}

pub fn make_engine(
    inst: &DiscoveryInstance,
    kind: EngineKind,
) -> Result<Box<dyn TypeEngine>, SolveError> {
    let names = inst.graph.color_names();
    Ok(match kind {
        EngineKind::Canonical => Box::new(CanonicalEngine::new(names, &inst.formula)),
        EngineKind::EfGame => Box::new(EfGameEngine::new(names, &inst.formula, ef_rounds(inst)?)),
    })
}

/// Decides the instance with the given decomposition and engine.
pub fn solve_tw_with(
    inst: &DiscoveryInstance,
    td: &NiceTreeDecomposition,
    engine: &mut dyn TypeEngine,
    opts: &TwOptions,
) -> Result<Verdict, SolveError> {
    td.validate(&inst.graph)?;
    if inst.k() > i8::MAX as usize || td.width() >= 31 {
        return Err(SolveError::InvalidDecomposition(
            "instance exceeds the DP's fixed-width encodings".into(),
        ));
    }
    crate::logic::ModelChecker::new(&inst.graph, &inst.formula, &[])?;
    let dp = Dp::new(inst, opts.clean, opts.state_cap);
    let tables = dp.run(td, engine, false)?;
    let root = tables[td.root].as_ref().expect("root computed");
    Ok(match root_cost(root, inst.k(), engine) {
        Some(cost) if cost <= inst.budget => Verdict::Yes(Solution {
            cost,
            target: None,
            sequence: None,
        }),
        _ => Verdict::No,
    })
}

/// Decides the instance, building the engine from `opts`.
pub fn solve_tw(
    inst: &DiscoveryInstance,
    td: &NiceTreeDecomposition,
    opts: &TwOptions,
) -> Result<Verdict, SolveError> {
    let mut engine = make_engine(inst, opts.engine)?;
    solve_tw_with(inst, td, engine.as_mut(), opts)
}
