use std::collections::BTreeSet;
use std::fmt;

/// Name of the distinguished free set variable.
pub const FREE_SET: &str = "X";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// What a bound variable ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Vertex,
    VertexSet,
    EdgeSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Implies,
    Iff,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&",
            BinOp::Or => "|",
            BinOp::Implies => "->",
            BinOp::Iff => "<->",
        }
    }

    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinOp::Iff => 1,
            BinOp::Implies => 2,
            BinOp::Or => 3,
            BinOp::And => 4,
        }
    }

    pub(crate) fn right_assoc(self) -> bool {
        matches!(self, BinOp::Implies | BinOp::Iff)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Edge(String, String),
    Eq(String, String),
    Color(String, String),
    /// `X(x)`
    FreeSet(String),
    /// `Y(x)` for a bound vertex-set variable `Y`
    SetMember(String, String),
    /// `Z(x,y)` for a bound edge-set variable `Z`
    EdgeSetMember(String, String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Atom(Atom),
    Not(Box<Formula>),
    Bin(BinOp, Box<Formula>, Box<Formula>),
    Quant(Quantifier, Sort, String, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn bin(op: BinOp, a: Formula, b: Formula) -> Formula {
        Formula::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Self::bin(BinOp::And, a, b)
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Self::bin(BinOp::Or, a, b)
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Self::bin(BinOp::Implies, a, b)
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Self::bin(BinOp::Iff, a, b)
    }

    pub fn quant(q: Quantifier, sort: Sort, var: &str, body: Formula) -> Formula {
        Formula::Quant(q, sort, var.to_string(), Box::new(body))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Const(true))
    }

    pub fn or_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Const(false))
    }

    /// Free vertex variables, ascending by name.
    pub fn free_vertex_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut note = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::Const(_) => {}
            Formula::Atom(a) => match a {
                Atom::Edge(x, y) | Atom::Eq(x, y) => {
                    note(x, bound);
                    note(y, bound);
                }
                Atom::Color(_, x) | Atom::FreeSet(x) | Atom::SetMember(_, x) => note(x, bound),
                Atom::EdgeSetMember(_, x, y) => {
                    note(x, bound);
                    note(y, bound);
                }
            },
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::Bin(_, a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant(_, sort, v, body) => {
                if *sort == Sort::Vertex {
                    bound.push(v.clone());
                    body.collect_free(bound, out);
                    bound.pop();
                } else {
                    body.collect_free(bound, out);
                }
            }
        }
    }

    /// Whether the free set variable `X` occurs.
    pub fn mentions_free_set(&self) -> bool {
        match self {
            Formula::Const(_) => false,
            Formula::Atom(a) => matches!(a, Atom::FreeSet(_)),
            Formula::Not(f) => f.mentions_free_set(),
            Formula::Bin(_, a, b) => a.mentions_free_set() || b.mentions_free_set(),
            Formula::Quant(_, _, _, body) => body.mentions_free_set(),
        }
    }

    /// Every identifier used as a variable or predicate name.
    pub fn identifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_identifiers(&mut out);
        out
    }

    fn collect_identifiers(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Const(_) => {}
            Formula::Atom(a) => {
                let names: Vec<&String> = match a {
                    Atom::Edge(x, y) | Atom::Eq(x, y) => vec![x, y],
                    Atom::Color(c, x) => vec![c, x],
                    Atom::FreeSet(x) => vec![x],
                    Atom::SetMember(s, x) => vec![s, x],
                    Atom::EdgeSetMember(z, x, y) => vec![z, x, y],
                };
                out.extend(names.into_iter().cloned());
            }
            Formula::Not(f) => f.collect_identifiers(out),
            Formula::Bin(_, a, b) => {
                a.collect_identifiers(out);
                b.collect_identifiers(out);
            }
            Formula::Quant(_, _, v, body) => {
                out.insert(v.clone());
                body.collect_identifiers(out);
            }
        }
    }

    /// Color names referenced by atoms.
    pub fn color_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            if let Atom::Color(c, _) = a {
                out.insert(c.clone());
            }
        });
        out
    }

    pub fn visit_atoms(&self, visit: &mut impl FnMut(&Atom)) {
        match self {
            Formula::Const(_) => {}
            Formula::Atom(a) => visit(a),
            Formula::Not(f) => f.visit_atoms(visit),
            Formula::Bin(_, a, b) => {
                a.visit_atoms(visit);
                b.visit_atoms(visit);
            }
            Formula::Quant(_, _, _, body) => body.visit_atoms(visit),
        }
    }

    /// Replaces every `X(x)` atom by `name(x)` for a bound set variable `name`.
    pub fn substitute_free_set(&self, name: &str) -> Formula {
        match self {
            Formula::Atom(Atom::FreeSet(x)) => {
                Formula::Atom(Atom::SetMember(name.to_string(), x.clone()))
            }
            Formula::Const(_) | Formula::Atom(_) => self.clone(),
            Formula::Not(f) => Formula::not(f.substitute_free_set(name)),
            Formula::Bin(op, a, b) => Formula::bin(
                *op,
                a.substitute_free_set(name),
                b.substitute_free_set(name),
            ),
            Formula::Quant(q, s, v, body) => {
                Formula::quant(*q, *s, v, body.substitute_free_set(name))
            }
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Atom(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::Bin(_, a, b) => 1 + a.size() + b.size(),
            Formula::Quant(_, _, _, body) => 1 + body.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Quant(..) => 0,
            Formula::Bin(op, _, _) => op.precedence(),
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            write!(f, "(")?;
        }
        match self {
            Formula::Const(true) => write!(f, "true")?,
            Formula::Const(false) => write!(f, "false")?,
            Formula::Atom(a) => write!(f, "{a}")?,
            Formula::Not(inner) => {
                write!(f, "~")?;
                inner.fmt_prec(f, 5)?;
            }
            Formula::Bin(op, a, b) => {
                let p = op.precedence();
                let (lmin, rmin) = if op.right_assoc() {
                    (p + 1, p)
                } else {
                    (p, p + 1)
                };
                a.fmt_prec(f, lmin)?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_prec(f, rmin)?;
            }
            Formula::Quant(q, sort, v, body) => {
                let word = match q {
                    Quantifier::Exists => "exists",
                    Quantifier::Forall => "forall",
                };
                let suffix = match sort {
                    Sort::Vertex => "",
                    Sort::VertexSet => "S",
                    Sort::EdgeSet => "E",
                };
                write!(f, "{word}{suffix} {v}. ")?;
                body.fmt_prec(f, 0)?;
            }
        }
        if wrap {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Edge(x, y) => write!(f, "E({x},{y})"),
            Atom::Eq(x, y) => write!(f, "eq({x},{y})"),
            Atom::Color(c, x) => write!(f, "{c}({x})"),
            Atom::FreeSet(x) => write!(f, "{FREE_SET}({x})"),
            Atom::SetMember(s, x) => write!(f, "{s}({x})"),
            Atom::EdgeSetMember(z, x, y) => write!(f, "{z}({x},{y})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
