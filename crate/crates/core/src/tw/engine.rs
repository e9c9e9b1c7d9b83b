//! Type engines: handles for boundaried, token-marked structures that compose
//! along boundaries.

use std::collections::HashMap;

use crate::logic::{Formula, ModelChecker};

use super::structure::Structure;

pub type TypeId = u32;

/// Operations the DP needs on types. Every handle stands for a class of
/// structures; operations act on a stored representative.
pub trait TypeEngine {
    /// The structure with no vertices.
    fn empty(&mut self) -> TypeId;
    /// Adds a boundary vertex at position `pos` with label `lab`, adjacent to the
    /// listed positions of the old boundary.
    fn introduce(&mut self, t: TypeId, pos: usize, lab: u64, nbrs: &[usize]) -> TypeId;
    /// Moves boundary position `pos` to the interior.
    fn forget(&mut self, t: TypeId, pos: usize) -> TypeId;
    /// Glues two structures along equal boundaries.
    fn compose(&mut self, a: TypeId, b: TypeId) -> TypeId;
    /// Whether the formula holds in the represented structure (boundary ignored).
    fn root_accepts(&mut self, t: TypeId) -> bool;
    fn representative(&self, t: TypeId) -> &Structure;
    fn type_count(&self) -> usize;
}

/// Shared interning and operation caches.
struct Store {
    names: Vec<String>,
    formula: Formula,
    reps: Vec<Structure>,
    ids: HashMap<Structure, TypeId>,
    intro: HashMap<(TypeId, usize, u64, Vec<usize>), TypeId>,
    forget: HashMap<(TypeId, usize), TypeId>,
    compose: HashMap<(TypeId, TypeId), TypeId>,
    accepts: HashMap<TypeId, bool>,
}

impl Store {
    fn new(names: Vec<String>, formula: Formula) -> Self {
        Store {
            names,
            formula,
            reps: Vec::new(),
            ids: HashMap::new(),
            intro: HashMap::new(),
            forget: HashMap::new(),
            compose: HashMap::new(),
            accepts: HashMap::new(),
        }
    }

    fn accepts(&mut self, t: TypeId) -> bool {
        if let Some(&b) = self.accepts.get(&t) {
            return b;
        }
        let (g, x) = self.reps[t as usize].to_graph(&self.names);
        let b = ModelChecker::new(&g, &self.formula, &[])
            .expect("formula compiled for the host graph")
            .check(&x);
        self.accepts.insert(t, b);
        b
    }
}

/// Engine A: handles are canonical forms under boundary-fixing isomorphism.
pub struct CanonicalEngine {
    store: Store,
}

impl CanonicalEngine {
    pub fn new(color_names: &[String], formula: &Formula) -> Self {
        CanonicalEngine {
            store: Store::new(color_names.to_vec(), formula.clone()),
        }
    }

    pub fn intern(&mut self, s: &Structure) -> TypeId {
        let c = s.canonical();
        let st = &mut self.store;
        *st.ids.entry(c).or_insert_with_key(|c| {
            st.reps.push(c.clone());
            (st.reps.len() - 1) as TypeId
        })
    }
}

/// Engine B: handles are classes of the q-round Ehrenfeucht-Fraisse game with the boundary pinned.
pub struct EfGameEngine {
    store: Store,
    rounds: usize,
    /// `(kept handle, structure merged into it)` for every non-isomorphic merge.
    pub merges: Vec<(TypeId, Structure)>,
}

impl EfGameEngine {
    pub fn new(color_names: &[String], formula: &Formula, rounds: usize) -> Self {
        EfGameEngine {
            store: Store::new(color_names.to_vec(), formula.clone()),
            rounds,
            merges: Vec::new(),
        }
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn intern(&mut self, s: &Structure) -> TypeId {
        let c = s.canonical();
        if let Some(&id) = self.store.ids.get(&c) {
            return id;
        }
        let found = (0..self.store.reps.len()).find(|&i| {
            let r = &self.store.reps[i];
            r.boundary == c.boundary && ef_equivalent(r, &c, self.rounds)
        });
        let id = match found {
            Some(i) => {
                self.merges.push((i as TypeId, c.clone()));
                i as TypeId
            }
            None => {
                self.store.reps.push(c.clone());
                (self.store.reps.len() - 1) as TypeId
            }
        };
        self.store.ids.insert(c, id);
        id
    }
}

/// Duplicator wins the `q`-round game on `a` and `b` with boundaries pinned.
pub fn ef_equivalent(a: &Structure, b: &Structure, q: usize) -> bool {
    if a.boundary != b.boundary {
        return false;
    }
    let pa: Vec<usize> = (0..a.boundary).collect();
    let pb = pa.clone();
    if !(0..a.boundary)
        .all(|i| a.labels[i] == b.labels[i] && (0..i).all(|j| a.has_edge(i, j) == b.has_edge(i, j)))
    {
        return false;
    }
    duplicator_wins(a, b, &mut pa.clone(), &mut pb.clone(), q)
}

fn extends(a: &Structure, b: &Structure, pa: &[usize], pb: &[usize], x: usize, y: usize) -> bool {
    a.labels[x] == b.labels[y]
        && pa
            .iter()
            .zip(pb)
            .all(|(&u, &v)| (u == x) == (v == y) && a.has_edge(u, x) == b.has_edge(v, y))
}

fn duplicator_wins(
    a: &Structure,
    b: &Structure,
    pa: &mut Vec<usize>,
    pb: &mut Vec<usize>,
    q: usize,
) -> bool {
    if q == 0 {
        return true;
    }
    for side in 0..2 {
        let (s, d, ps, pd) = if side == 0 {
            (a, b, &mut *pa, &mut *pb)
        } else {
            (b, a, &mut *pb, &mut *pa)
        };
        for x in 0..s.len() {
            if ps.contains(&x) {
                continue;
            }
            let mut answered = false;
            for y in 0..d.len() {
                if !extends(s, d, ps, pd, x, y) {
                    continue;
                }
                ps.push(x);
                pd.push(y);
                let ok = if side == 0 {
                    duplicator_wins(a, b, ps, pd, q - 1)
                } else {
                    duplicator_wins(a, b, pd, ps, q - 1)
                };
                ps.pop();
                pd.pop();
                if ok {
                    answered = true;
                    break;
                }
            }
            if !answered {
                return false;
            }
        }
    }
    true
}

macro_rules! engine_ops {
    ($t:ty) => {
        impl TypeEngine for $t {
            fn empty(&mut self) -> TypeId {
                self.intern(&Structure::empty())
            }

            fn introduce(&mut self, t: TypeId, pos: usize, lab: u64, nbrs: &[usize]) -> TypeId {
                let key = (t, pos, lab, nbrs.to_vec());
                if let Some(&id) = self.store.intro.get(&key) {
                    return id;
                }
                let s = self.store.reps[t as usize].introduce(pos, lab, nbrs);
                let id = self.intern(&s);
                self.store.intro.insert(key, id);
                id
            }

            fn forget(&mut self, t: TypeId, pos: usize) -> TypeId {
                if let Some(&id) = self.store.forget.get(&(t, pos)) {
                    return id;
                }
                let s = self.store.reps[t as usize].forget(pos);
                let id = self.intern(&s);
                self.store.forget.insert((t, pos), id);
                id
            }

            fn compose(&mut self, a: TypeId, b: TypeId) -> TypeId {
                if let Some(&id) = self.store.compose.get(&(a, b)) {
                    return id;
                }
                let s = self.store.reps[a as usize].glue(&self.store.reps[b as usize]);
                let id = self.intern(&s);
                self.store.compose.insert((a, b), id);
                id
            }

            fn root_accepts(&mut self, t: TypeId) -> bool {
                self.store.accepts(t)
            }

            fn representative(&self, t: TypeId) -> &Structure {
                &self.store.reps[t as usize]
            }

            fn type_count(&self) -> usize {
                self.store.reps.len()
            }
        }
    };
}

engine_ops!(CanonicalEngine);
engine_ops!(EfGameEngine);
