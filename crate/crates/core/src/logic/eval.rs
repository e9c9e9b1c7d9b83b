//! Model checking over a fixed colored graph.
//!
//! Formulas are compiled to an arena with one slot per bound variable. Set
//! quantifiers are decided by backtracking over partial assignments evaluated
//! in three-valued (Kleene) logic: a branch is cut as soon as the body becomes
//! definite. While evaluating, every unknown set atom is recorded together with
//! whether flipping it alone could settle the enclosing body; the search
//! branches on such atoms first. Quantifier subformulas that do not depend on
//! `X` or on any set variable are memoized per assignment of their free vertex
//! variables, and the memo survives across calls on the same checker.

use std::collections::{BTreeSet, HashMap};

use super::ast::{Atom, BinOp, Formula, Quantifier, Sort};
use super::LogicError;
use crate::graph::{ColoredGraph, Configuration};

type Tri = Option<bool>;

const MAX_CACHE_ARITY: usize = 4;

#[derive(Debug, Clone, Copy)]
enum Guard {
    Neighbors(usize),
    Members(usize),
    Same(usize),
    Nothing,
    InX,
}

#[derive(Debug, Clone)]
enum Node {
    Const(bool),
    Edge(usize, usize),
    Eq(usize, usize),
    Color(Option<usize>, usize),
    InX(usize),
    InSet(usize, usize),
    InEdgeSet(usize, usize, usize),
    Not(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
    Implies(usize, usize),
    Iff(usize, usize),
    Vertex {
        exists: bool,
        slot: usize,
        body: usize,
        guards: Vec<Guard>,
    },
    VSet {
        exists: bool,
        slot: usize,
        body: usize,
    },
    ESet {
        exists: bool,
        slot: usize,
        body: usize,
    },
}

#[derive(Default, Clone)]
struct Deps {
    vertex: BTreeSet<usize>,
    sets: BTreeSet<(bool, usize)>,
    uses_x: bool,
}

struct Program {
    nodes: Vec<Node>,
    /// Free vertex slots of memoizable nodes.
    memo: Vec<Option<Vec<usize>>>,
    root: usize,
    vertex_slots: usize,
    set_slots: usize,
    edge_set_slots: usize,
}

struct Compiler<'a> {
    g: &'a ColoredGraph,
    nodes: Vec<Node>,
    memo: Vec<Option<Vec<usize>>>,
    scope: Vec<(String, Sort, usize)>,
    vertex_slots: usize,
    set_slots: usize,
    edge_set_slots: usize,
}

impl<'a> Compiler<'a> {
    fn push(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.memo.push(None);
        self.nodes.len() - 1
    }

    fn resolve(&self, name: &str, want: Sort) -> Result<usize, LogicError> {
        match self.scope.iter().rev().find(|(n, _, _)| n == name) {
            Some((_, sort, slot)) if *sort == want => Ok(*slot),
            _ => Err(LogicError::UnassignedFreeVariable(name.to_string())),
        }
    }

    fn vertex(&self, name: &str, deps: &mut Deps) -> Result<usize, LogicError> {
        let slot = self.resolve(name, Sort::Vertex)?;
        deps.vertex.insert(slot);
        Ok(slot)
    }

    fn compile(&mut self, f: &Formula) -> Result<(usize, Deps), LogicError> {
        let mut deps = Deps::default();
        let node = match f {
            Formula::Const(b) => Node::Const(*b),
            Formula::Atom(a) => match a {
                Atom::Edge(x, y) => {
                    Node::Edge(self.vertex(x, &mut deps)?, self.vertex(y, &mut deps)?)
                }
                Atom::Eq(x, y) => Node::Eq(self.vertex(x, &mut deps)?, self.vertex(y, &mut deps)?),
                Atom::Color(c, x) => Node::Color(self.g.color_index(c), self.vertex(x, &mut deps)?),
                Atom::FreeSet(x) => {
                    deps.uses_x = true;
                    Node::InX(self.vertex(x, &mut deps)?)
                }
                Atom::SetMember(s, x) => {
                    let slot = self.resolve(s, Sort::VertexSet)?;
                    deps.sets.insert((false, slot));
                    Node::InSet(slot, self.vertex(x, &mut deps)?)
                }
                Atom::EdgeSetMember(z, x, y) => {
                    let slot = self.resolve(z, Sort::EdgeSet)?;
                    deps.sets.insert((true, slot));
                    Node::InEdgeSet(slot, self.vertex(x, &mut deps)?, self.vertex(y, &mut deps)?)
                }
            },
            Formula::Not(inner) => {
                let (id, d) = self.compile(inner)?;
                deps = d;
                Node::Not(id)
            }
            Formula::Bin(op, a, b) => {
                let (ia, da) = self.compile(a)?;
                let (ib, db) = self.compile(b)?;
                deps = merge(da, db);
                match op {
                    BinOp::And => Node::And(
                        self.flatten(ia, true)
                            .into_iter()
                            .chain(self.flatten(ib, true))
                            .collect(),
                    ),
                    BinOp::Or => Node::Or(
                        self.flatten(ia, false)
                            .into_iter()
                            .chain(self.flatten(ib, false))
                            .collect(),
                    ),
                    BinOp::Implies => Node::Implies(ia, ib),
                    BinOp::Iff => Node::Iff(ia, ib),
                }
            }
            Formula::Quant(q, sort, name, body) => {
                let exists = *q == Quantifier::Exists;
                let slot = match sort {
                    Sort::Vertex => post_inc(&mut self.vertex_slots),
                    Sort::VertexSet => post_inc(&mut self.set_slots),
                    Sort::EdgeSet => post_inc(&mut self.edge_set_slots),
                };
                self.scope.push((name.clone(), *sort, slot));
                let compiled = self.compile(body);
                self.scope.pop();
                let (ib, mut d) = compiled?;
                let node = match sort {
                    Sort::Vertex => {
                        d.vertex.remove(&slot);
                        Node::Vertex {
                            exists,
                            slot,
                            body: ib,
                            guards: self.guards(exists, slot, ib),
                        }
                    }
                    Sort::VertexSet => {
                        d.sets.remove(&(false, slot));
                        Node::VSet {
                            exists,
                            slot,
                            body: ib,
                        }
                    }
                    Sort::EdgeSet => {
                        d.sets.remove(&(true, slot));
                        Node::ESet {
                            exists,
                            slot,
                            body: ib,
                        }
                    }
                };
                deps = d;
                let id = self.push(node);
                if !deps.uses_x && deps.sets.is_empty() && deps.vertex.len() <= MAX_CACHE_ARITY {
                    self.memo[id] = Some(deps.vertex.iter().copied().collect());
                }
                return Ok((id, deps));
            }
        };
        Ok((self.push(node), deps))
    }

    fn flatten(&self, id: usize, conj: bool) -> Vec<usize> {
        match (&self.nodes[id], conj) {
            (Node::And(list), true) | (Node::Or(list), false) => list.clone(),
            _ => vec![id],
        }
    }

    /// Atoms that every relevant witness of the quantified slot must satisfy.
    fn guards(&self, exists: bool, slot: usize, body: usize) -> Vec<Guard> {
        let conjuncts = if exists {
            self.flatten(body, true)
        } else {
            match &self.nodes[body] {
                Node::Implies(a, _) => self.flatten(*a, true),
                _ => Vec::new(),
            }
        };
        conjuncts
            .into_iter()
            .filter_map(|c| match self.nodes[c] {
                Node::Edge(a, b) if a == slot && b != slot => Some(Guard::Neighbors(b)),
                Node::Edge(a, b) if b == slot && a != slot => Some(Guard::Neighbors(a)),
                Node::Eq(a, b) if a == slot && b != slot => Some(Guard::Same(b)),
                Node::Eq(a, b) if b == slot && a != slot => Some(Guard::Same(a)),
                Node::Color(Some(c), s) if s == slot => Some(Guard::Members(c)),
                Node::Color(None, s) if s == slot => Some(Guard::Nothing),
                Node::InX(s) if s == slot => Some(Guard::InX),
                _ => None,
            })
            .collect()
    }
}

fn post_inc(x: &mut usize) -> usize {
    *x += 1;
    *x - 1
}

fn merge(mut a: Deps, b: Deps) -> Deps {
    a.vertex.extend(b.vertex);
    a.sets.extend(b.sets);
    a.uses_x |= b.uses_x;
    a
}

/// An unknown set atom met during evaluation. `t`/`f` say whether fixing this
/// atom alone can force the enclosing subformula to true/false.
#[derive(Debug, Clone, Copy)]
struct Pending {
    edge: bool,
    slot: usize,
    index: usize,
    t: bool,
    f: bool,
}

struct State {
    vals: Vec<usize>,
    sets: Vec<Vec<Tri>>,
    edge_sets: Vec<Vec<Tri>>,
    x: Vec<bool>,
    x_list: Vec<usize>,
    pending: Vec<Pending>,
    memo: HashMap<(u32, [u32; MAX_CACHE_ARITY]), bool>,
}

/// A formula compiled against one graph, reusable across many token sets.
pub struct ModelChecker<'g> {
    g: &'g ColoredGraph,
    prog: Program,
    st: State,
}

impl<'g> ModelChecker<'g> {
    /// Compiles `f`; `free` lists the free vertex variables in the order their
    /// values will be supplied to [`ModelChecker::check_with`].
    pub fn new(g: &'g ColoredGraph, f: &Formula, free: &[&str]) -> Result<Self, LogicError> {
        let mut c = Compiler {
            g,
            nodes: Vec::new(),
            memo: Vec::new(),
            scope: free
                .iter()
                .enumerate()
                .map(|(i, n)| (n.to_string(), Sort::Vertex, i))
                .collect(),
            vertex_slots: free.len(),
            set_slots: 0,
            edge_set_slots: 0,
        };
        let (root, _) = c.compile(f)?;
        let prog = Program {
            nodes: c.nodes,
            memo: c.memo,
            root,
            vertex_slots: c.vertex_slots,
            set_slots: c.set_slots,
            edge_set_slots: c.edge_set_slots,
        };
        let n = g.n();
        let st = State {
            vals: vec![0; prog.vertex_slots],
            sets: vec![vec![None; n]; prog.set_slots],
            edge_sets: vec![vec![None; g.edges().len()]; prog.edge_set_slots],
            x: vec![false; n],
            x_list: Vec::new(),
            pending: Vec::new(),
            memo: HashMap::new(),
        };
        Ok(ModelChecker { g, prog, st })
    }

    pub fn graph(&self) -> &'g ColoredGraph {
        self.g
    }

    /// Truth value with `X` interpreted as `x`.
    pub fn check(&mut self, x: &Configuration) -> bool {
        self.check_with(x, &[])
    }

    pub fn check_with(&mut self, x: &Configuration, vertex_values: &[usize]) -> bool {
        self.st.x.iter_mut().for_each(|b| *b = false);
        self.st.x_list.clear();
        for v in x.iter() {
            self.st.x[v] = true;
            self.st.x_list.push(v);
        }
        self.st.vals[..vertex_values.len()].copy_from_slice(vertex_values);
        self.st.pending.clear();
        let out = self.st.eval(&self.prog, self.g, self.prog.root);
        out.expect("fully assigned evaluation is two-valued")
    }
}

/// Evaluates `f` on `g` with `X := x` and the given values for free vertex variables.
pub fn model_check(
    g: &ColoredGraph,
    f: &Formula,
    x: &Configuration,
    vertex_assign: &[(&str, usize)],
) -> Result<bool, LogicError> {
    x.check_range(g.n())
        .map_err(|e| LogicError::Assignment(e.to_string()))?;
    let free = f.free_vertex_vars();
    for name in &free {
        if !vertex_assign.iter().any(|(n, _)| n == name) {
            return Err(LogicError::UnassignedFreeVariable(name.clone()));
        }
    }
    let names: Vec<&str> = vertex_assign.iter().map(|(n, _)| *n).collect();
    let values: Vec<usize> = vertex_assign.iter().map(|(_, v)| *v).collect();
    if let Some(&v) = values.iter().find(|&&v| v >= g.n()) {
        return Err(LogicError::Assignment(format!("vertex {v} out of range")));
    }
    let mut mc = ModelChecker::new(g, f, &names)?;
    Ok(mc.check_with(x, &values))
}

impl State {
    fn eval(&mut self, p: &Program, g: &ColoredGraph, id: usize) -> Tri {
        let key = p.memo[id].as_ref().map(|slots| {
            let mut k = [u32::MAX; MAX_CACHE_ARITY];
            for (i, &s) in slots.iter().enumerate() {
                k[i] = self.vals[s] as u32;
            }
            (id as u32, k)
        });
        if let Some(k) = key {
            if let Some(&b) = self.memo.get(&k) {
                return Some(b);
            }
        }
        let start = self.pending.len();
        let out = self.eval_node(p, g, id, start);
        if out.is_some() {
            self.pending.truncate(start);
        }
        if let (Some(k), Some(b)) = (key, out) {
            self.memo.insert(k, b);
        }
        out
    }

    fn eval_node(&mut self, p: &Program, g: &ColoredGraph, id: usize, start: usize) -> Tri {
        match &p.nodes[id] {
            Node::Const(b) => Some(*b),
            Node::Edge(a, b) => Some(g.has_edge(self.vals[*a], self.vals[*b])),
            Node::Eq(a, b) => Some(self.vals[*a] == self.vals[*b]),
            Node::Color(c, a) => Some(c.is_some_and(|c| g.has_color(c, self.vals[*a]))),
            Node::InX(a) => Some(self.x[self.vals[*a]]),
            Node::InSet(s, a) => {
                let v = self.vals[*a];
                let out = self.sets[*s][v];
                if out.is_none() {
                    self.pending.push(Pending {
                        edge: false,
                        slot: *s,
                        index: v,
                        t: true,
                        f: true,
                    });
                }
                out
            }
            Node::InEdgeSet(z, a, b) => match g.edge_index(self.vals[*a], self.vals[*b]) {
                None => Some(false),
                Some(e) => {
                    let out = self.edge_sets[*z][e];
                    if out.is_none() {
                        self.pending.push(Pending {
                            edge: true,
                            slot: *z,
                            index: e,
                            t: true,
                            f: true,
                        });
                    }
                    out
                }
            },
            Node::Not(a) => {
                let out = self.eval(p, g, *a).map(|b| !b);
                if out.is_none() {
                    self.swap(start);
                }
                out
            }
            Node::And(list) => {
                let mut unknown = 0;
                for &c in list {
                    match self.eval(p, g, c) {
                        Some(false) => return Some(false),
                        None => unknown += 1,
                        Some(true) => {}
                    }
                }
                self.fold(start, true, unknown)
            }
            Node::Or(list) => {
                let mut unknown = 0;
                for &c in list {
                    match self.eval(p, g, c) {
                        Some(true) => return Some(true),
                        None => unknown += 1,
                        Some(false) => {}
                    }
                }
                self.fold(start, false, unknown)
            }
            Node::Implies(a, b) => {
                let va = self.eval(p, g, *a);
                if va == Some(false) {
                    return Some(true);
                }
                let mid = self.pending.len();
                self.swap(start);
                let vb = self.eval(p, g, *b);
                match (va, vb) {
                    (_, Some(true)) => Some(true),
                    (Some(true), Some(false)) => Some(false),
                    _ => {
                        let unknown = usize::from(va.is_none()) + usize::from(vb.is_none());
                        debug_assert!(mid <= self.pending.len());
                        self.fold(start, false, unknown)
                    }
                }
            }
            Node::Iff(a, b) => {
                let va = self.eval(p, g, *a);
                let mid = self.pending.len();
                let vb = self.eval(p, g, *b);
                match (va, vb) {
                    (Some(x), Some(y)) => Some(x == y),
                    (None, None) => {
                        self.clear(start);
                        None
                    }
                    (None, Some(y)) => {
                        if !y {
                            self.swap_range(start, mid);
                        }
                        None
                    }
                    (Some(x), None) => {
                        if !x {
                            self.swap(mid);
                        }
                        None
                    }
                }
            }
            Node::Vertex {
                exists,
                slot,
                body,
                guards,
            } => {
                let (exists, slot, body) = (*exists, *slot, *body);
                let guard = self.pick_guard(g, guards);
                let count = self.guard_len(g, guard);
                let mut unknown = 0;
                for i in 0..count {
                    self.vals[slot] = self.guard_item(g, guard, i);
                    match self.eval(p, g, body) {
                        Some(b) if b == exists => return Some(exists),
                        Some(_) => {}
                        None => unknown += 1,
                    }
                }
                self.fold(start, !exists, unknown)
            }
            Node::VSet { exists, slot, body } => {
                self.search(p, g, false, *exists, *slot, *body, start)
            }
            Node::ESet { exists, slot, body } => {
                self.search(p, g, true, *exists, *slot, *body, start)
            }
        }
    }

    /// Combines pending flags after an unknown conjunction (`conj`) or disjunction.
    fn fold(&mut self, start: usize, conj: bool, unknown: usize) -> Tri {
        if unknown == 0 {
            return Some(conj);
        }
        for e in &mut self.pending[start..] {
            if conj {
                e.t &= unknown == 1;
            } else {
                e.f &= unknown == 1;
            }
        }
        None
    }

    fn swap(&mut self, start: usize) {
        let end = self.pending.len();
        self.swap_range(start, end);
    }

    fn swap_range(&mut self, start: usize, end: usize) {
        for e in &mut self.pending[start..end] {
            std::mem::swap(&mut e.t, &mut e.f);
        }
    }

    fn clear(&mut self, start: usize) {
        for e in &mut self.pending[start..] {
            e.t = false;
            e.f = false;
        }
    }

    fn pick_guard(&self, g: &ColoredGraph, guards: &[Guard]) -> Option<Guard> {
        guards
            .iter()
            .copied()
            .min_by_key(|&gd| self.guard_len(g, Some(gd)))
    }

    fn guard_len(&self, g: &ColoredGraph, guard: Option<Guard>) -> usize {
        match guard {
            None => g.n(),
            Some(Guard::Neighbors(s)) => g.degree(self.vals[s]),
            Some(Guard::Members(c)) => g.color_members(c).len(),
            Some(Guard::Same(_)) => 1,
            Some(Guard::Nothing) => 0,
            Some(Guard::InX) => self.x_list.len(),
        }
    }

    fn guard_item(&self, g: &ColoredGraph, guard: Option<Guard>, i: usize) -> usize {
        match guard {
            None => i,
            Some(Guard::Neighbors(s)) => g.neighbors(self.vals[s])[i],
            Some(Guard::Members(c)) => g.color_members(c)[i],
            Some(Guard::Same(s)) => self.vals[s],
            Some(Guard::Nothing) => unreachable!(),
            Some(Guard::InX) => self.x_list[i],
        }
    }

    fn set_value(&mut self, edge: bool, slot: usize, index: usize, value: Tri) {
        if edge {
            self.edge_sets[slot][index] = value;
        } else {
            self.sets[slot][index] = value;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &mut self,
        p: &Program,
        g: &ColoredGraph,
        edge: bool,
        exists: bool,
        slot: usize,
        body: usize,
        start: usize,
    ) -> Tri {
        let first = self.eval(p, g, body);
        if first.is_some() {
            return first;
        }
        // Atoms of enclosing set variables stay visible to the outer search.
        let outer: Vec<Pending> = self.pending[start..]
            .iter()
            .filter(|e| e.edge != edge || e.slot != slot)
            .map(|e| Pending {
                t: false,
                f: false,
                ..*e
            })
            .collect();
        let branch = self.branch_atom(start, edge, slot);
        self.pending.truncate(start);
        let out = match branch {
            None => None,
            Some(index) => self.branch(p, g, edge, exists, slot, body, index),
        };
        if out.is_none() {
            self.pending.extend(outer);
        }
        out
    }

    fn branch_atom(&self, start: usize, edge: bool, slot: usize) -> Option<usize> {
        let own = || {
            self.pending[start..]
                .iter()
                .filter(|e| e.edge == edge && e.slot == slot)
        };
        own()
            .find(|e| e.t || e.f)
            .or_else(|| own().next())
            .map(|e| e.index)
    }

    #[allow(clippy::too_many_arguments)]
    fn branch(
        &mut self,
        p: &Program,
        g: &ColoredGraph,
        edge: bool,
        exists: bool,
        slot: usize,
        body: usize,
        index: usize,
    ) -> Tri {
        let mut unknown = false;
        for value in [false, true] {
            self.set_value(edge, slot, index, Some(value));
            let start = self.pending.len();
            let out = match self.eval(p, g, body) {
                Some(b) => Some(b),
                None => match self.branch_atom(start, edge, slot) {
                    None => None,
                    Some(next) => {
                        self.pending.truncate(start);
                        self.branch(p, g, edge, exists, slot, body, next)
                    }
                },
            };
            self.pending.truncate(start);
            self.set_value(edge, slot, index, None);
            match out {
                Some(b) if b == exists => return Some(exists),
                Some(_) => {}
                None => unknown = true,
            }
        }
        if unknown {
            None
        } else {
            Some(!exists)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse, parse_with_free};

    fn mc(g: &ColoredGraph, text: &str, x: &[usize]) -> bool {
        model_check(
            g,
            &parse(text).unwrap(),
            &Configuration::new(x.iter().copied()),
            &[],
        )
        .unwrap()
    }

    #[test]
    fn spec_examples() {
        assert!(mc(
            &ColoredGraph::complete(3),
            "exists x. exists y. E(x,y)",
            &[]
        ));
        assert!(mc(
            &ColoredGraph::complete(2),
            "forall x. (X(x) -> exists y. E(x,y))",
            &[0]
        ));
        assert!(mc(
            &ColoredGraph::path(2),
            "existsE Z. exists x. exists y. Z(x,y)",
            &[]
        ));
        assert!(!mc(
            &ColoredGraph::path(2),
            "existsE Z. exists x. exists y. Z(x,y) & ~E(x,y)",
            &[]
        ));
    }

    #[test]
    fn set_quantifiers_cover_all_subsets() {
        let g = ColoredGraph::path(4);
        // Some set is independent and dominating.
        let text = "existsS Y. (forall x. forall y. (Y(x) & Y(y) -> ~E(x,y))) & forall x. (Y(x) | exists y. (E(x,y) & Y(y)))";
        assert!(mc(&g, text, &[]));
        assert!(!mc(&g, "forallS Y. exists x. Y(x)", &[]));
        assert!(mc(
            &g,
            "forallS Y. existsS Z. forall x. (Y(x) <-> ~Z(x))",
            &[]
        ));
        // Two-colorability of an odd cycle fails.
        let c5 = ColoredGraph::plain(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let bip = "existsS Y. forall x. forall y. (E(x,y) -> ~(Y(x) <-> Y(y)))";
        assert!(!mc(&c5, bip, &[]));
        assert!(mc(&ColoredGraph::path(5), bip, &[]));
    }

    #[test]
    fn connectivity_search_stays_polynomial() {
        let n = 400;
        let g = ColoredGraph::path(n);
        let con = "~(existsS S. S(x) & ~S(y) & forall u. forall v. (S(u) & E(u,v) -> S(v)))";
        let f = parse_with_free(con, &["x", "y"]).unwrap();
        let mut m = ModelChecker::new(&g, &f, &["x", "y"]).unwrap();
        assert!(m.check_with(&Configuration::empty(), &[0, n - 1]));
        let split = ColoredGraph::plain(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let mut m = ModelChecker::new(&split, &f, &["x", "y"]).unwrap();
        assert!(!m.check_with(&Configuration::empty(), &[0, 5]));
        assert!(m.check_with(&Configuration::empty(), &[3, 5]));
    }

    #[test]
    fn missing_assignment_is_reported() {
        let f = parse_with_free("E(x,y)", &["x", "y"]).unwrap();
        let g = ColoredGraph::path(2);
        let err = model_check(&g, &f, &Configuration::empty(), &[("x", 0)]).unwrap_err();
        assert_eq!(err, LogicError::UnassignedFreeVariable("y".into()));
        assert!(model_check(&g, &f, &Configuration::empty(), &[("x", 0), ("y", 1)]).unwrap());
    }

    #[test]
    fn unknown_colors_are_empty() {
        assert!(!mc(&ColoredGraph::path(3), "exists x. C9(x)", &[]));
        assert!(mc(
            &ColoredGraph::path(3),
            "forall x. (C9(x) -> false)",
            &[]
        ));
    }
}
