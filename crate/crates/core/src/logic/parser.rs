//! Recursive-descent parser for the ASCII formula grammar.

use super::ast::{Atom, BinOp, Formula, Quantifier, Sort, FREE_SET};
use super::LogicError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Implies,
    Iff,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, LogicError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                return Err(LogicError::Syntax {
                    position: start,
                    message: format!(
                        "unexpected character {:?}",
                        text[start..].chars().next().unwrap()
                    ),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    scope: Vec<(String, Sort)>,
    free: &'a [&'a str],
}

const RESERVED: [&str; 5] = ["E", "eq", "X", "true", "false"];

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, LogicError> {
        Err(LogicError::Syntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), LogicError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            acc = Formula::bin(BinOp::Or, acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = Formula::bin(BinOp::And, acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(word) => {
                if let Some((q, sort)) = quantifier_keyword(&word) {
                    self.bump();
                    return self.quantified(q, sort);
                }
                match word.as_str() {
                    "true" => {
                        self.bump();
                        Ok(Formula::Const(true))
                    }
                    "false" => {
                        self.bump();
                        Ok(Formula::Const(false))
                    }
                    _ => self.atom(),
                }
            }
            Tok::End => self.error("unexpected end of input"),
            _ => self.error("expected a formula"),
        }
    }

    fn quantified(&mut self, q: Quantifier, sort: Sort) -> Result<Formula, LogicError> {
        let at = self.offset();
        let Tok::Ident(name) = self.bump() else {
            return Err(LogicError::Syntax {
                position: at,
                message: "expected a variable name".into(),
            });
        };
        if quantifier_keyword(&name).is_some() || RESERVED.contains(&name.as_str()) {
            return Err(LogicError::DuplicateBinder { name, position: at });
        }
        if self.scope.iter().any(|(n, _)| *n == name) || self.free.contains(&name.as_str()) {
            return Err(LogicError::DuplicateBinder { name, position: at });
        }
        self.expect(Tok::Dot, "'.' after the bound variable")?;
        self.scope.push((name.clone(), sort));
        let body = self.formula();
        self.scope.pop();
        Ok(Formula::quant(q, sort, &name, body?))
    }

    fn lookup(&self, name: &str) -> Option<Sort> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, s)| *s)
    }

    fn vertex_arg(&mut self) -> Result<String, LogicError> {
        let at = self.offset();
        let Tok::Ident(name) = self.bump() else {
            return Err(LogicError::Syntax {
                position: at,
                message: "expected a vertex variable".into(),
            });
        };
        match self.lookup(&name) {
            Some(Sort::Vertex) => Ok(name),
            Some(_) => Err(LogicError::Syntax {
                position: at,
                message: format!("{name} is a set variable, not a vertex variable"),
            }),
            None if self.free.contains(&name.as_str()) => Ok(name),
            None => Err(LogicError::UnboundVariable { name, position: at }),
        }
    }

    fn atom(&mut self) -> Result<Formula, LogicError> {
        let at = self.offset();
        let Tok::Ident(name) = self.bump() else {
            unreachable!()
        };
        self.expect(Tok::LParen, "'(' after a predicate name")?;
        let mut args = vec![self.vertex_arg()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.vertex_arg()?);
        }
        self.expect(Tok::RParen, "')'")?;
        let arity_error = |want: usize| LogicError::Syntax {
            position: at,
            message: format!("{name} expects {want} argument(s), got {}", args.len()),
        };
        let atom = match (name.as_str(), self.lookup(&name)) {
            (_, Some(Sort::VertexSet)) => match args.as_slice() {
                [x] => Atom::SetMember(name.clone(), x.clone()),
                _ => return Err(arity_error(1)),
            },
            (_, Some(Sort::EdgeSet)) => match args.as_slice() {
                [x, y] => Atom::EdgeSetMember(name.clone(), x.clone(), y.clone()),
                _ => return Err(arity_error(2)),
            },
            (_, Some(Sort::Vertex)) => {
                return Err(LogicError::Syntax {
                    position: at,
                    message: format!("{name} is a vertex variable"),
                })
            }
            ("E", None) => match args.as_slice() {
                [x, y] => Atom::Edge(x.clone(), y.clone()),
                _ => return Err(arity_error(2)),
            },
            ("eq", None) => match args.as_slice() {
                [x, y] => Atom::Eq(x.clone(), y.clone()),
                _ => return Err(arity_error(2)),
            },
            (FREE_SET, None) => match args.as_slice() {
                [x] => Atom::FreeSet(x.clone()),
                _ => return Err(arity_error(1)),
            },
            (_, None) => match args.as_slice() {
                [x] => Atom::Color(name.clone(), x.clone()),
                _ => return Err(arity_error(1)),
            },
        };
        Ok(Formula::Atom(atom))
    }
}

fn quantifier_keyword(word: &str) -> Option<(Quantifier, Sort)> {
    Some(match word {
        "exists" => (Quantifier::Exists, Sort::Vertex),
        "forall" => (Quantifier::Forall, Sort::Vertex),
        "existsS" => (Quantifier::Exists, Sort::VertexSet),
        "forallS" => (Quantifier::Forall, Sort::VertexSet),
        "existsE" => (Quantifier::Exists, Sort::EdgeSet),
        "forallE" => (Quantifier::Forall, Sort::EdgeSet),
        _ => return None,
    })
}

/// Parses a formula whose only free variable may be the set variable `X`.
pub fn parse(text: &str) -> Result<Formula, LogicError> {
    parse_with_free(text, &[])
}

/// Parses a formula that may also use the listed free vertex variables.
pub fn parse_with_free(text: &str, free: &[&str]) -> Result<Formula, LogicError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        scope: Vec::new(),
        free,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.error("trailing input");
    }
    Ok(f)
}
