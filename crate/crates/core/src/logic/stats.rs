use serde::Serialize;

use super::ast::{Formula, Sort};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Fragment {
    FO,
    MSO1,
    MSO2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FormulaStats {
    pub fragment: Fragment,
    /// Maximum nesting depth of quantifiers of any sort.
    pub quantifier_rank: usize,
    /// Number of set quantifiers (vertex-set and edge-set).
    pub set_quantifiers: usize,
    /// Number of vertex quantifiers.
    pub vertex_quantifiers: usize,
}

impl FormulaStats {
    /// The shape threshold `2^{q_s} * q_v`, saturating.
    pub fn q_phi(&self) -> u64 {
        let pow = if self.set_quantifiers >= 63 {
            u64::MAX
        } else {
            1u64 << self.set_quantifiers
        };
        pow.saturating_mul(self.vertex_quantifiers as u64)
    }
}

pub fn stats(f: &Formula) -> FormulaStats {
    let mut acc = FormulaStats {
        fragment: Fragment::FO,
        quantifier_rank: 0,
        set_quantifiers: 0,
        vertex_quantifiers: 0,
    };
    acc.quantifier_rank = walk(f, &mut acc);
    acc
}

fn walk(f: &Formula, acc: &mut FormulaStats) -> usize {
    match f {
        Formula::Const(_) | Formula::Atom(_) => 0,
        Formula::Not(g) => walk(g, acc),
        Formula::Bin(_, a, b) => walk(a, acc).max(walk(b, acc)),
        Formula::Quant(_, sort, _, body) => {
            match sort {
                Sort::Vertex => acc.vertex_quantifiers += 1,
                Sort::VertexSet => {
                    acc.set_quantifiers += 1;
                    acc.fragment = acc.fragment.max(Fragment::MSO1);
                }
                Sort::EdgeSet => {
                    acc.set_quantifiers += 1;
                    acc.fragment = Fragment::MSO2;
                }
            }
            1 + walk(body, acc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;

    #[test]
    fn counts_and_threshold() {
        let s = stats(&parse("existsS Y. exists x. (Y(x) & exists y. E(x,y))").unwrap());
        assert_eq!(
            (s.set_quantifiers, s.vertex_quantifiers, s.q_phi()),
            (1, 2, 4)
        );
        assert_eq!(s.quantifier_rank, 3);
        assert_eq!(s.fragment, Fragment::MSO1);
        let s = stats(&parse("true & ~false").unwrap());
        assert_eq!((s.quantifier_rank, s.q_phi()), (0, 0));
    }

    #[test]
    fn rank_is_depth_not_count() {
        let s = stats(&parse("(exists x. true) & (exists y. exists z. E(y,z))").unwrap());
        assert_eq!(s.quantifier_rank, 2);
        assert_eq!(s.vertex_quantifiers, 3);
        assert_eq!(
            stats(&parse("existsE Z. true").unwrap()).fragment,
            Fragment::MSO2
        );
    }
}
