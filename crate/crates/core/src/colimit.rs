//! Colimits of labelled trees: every term with vertex labels from several kinds, modulo the
//! equivalence generated by relabelling along maps, contracting an edge between two vertices of
//! the same operad kind, and deleting unit vertices.

use std::collections::HashMap;
use std::sync::Arc;

use crate::operad::Operad;
use crate::signature::SigmaGroupoid;
use crate::symseq::{SymSeq, SymSeqMap};
use crate::term::{Term, TermAlgebra};
use crate::unionfind::UnionFind;

/// A vertex label kind: a symmetric sequence, optionally with an operad structure, counted
/// against budget group `group`.
#[derive(Clone, Copy)]
pub struct LabelKind<'a> {
    pub seq: &'a SymSeq,
    pub operad: Option<&'a Operad>,
    pub group: usize,
}

/// Identifies a vertex of kind `from` labelled `x` with the vertex of kind `to` labelled `map(x)`.
#[derive(Clone, Copy)]
pub struct Relabel<'a> {
    pub from: usize,
    pub to: usize,
    pub map: &'a SymSeqMap,
}

/// Unit stripping, canonical forms and one-step rewrites for a fixed set of kinds.
pub struct Rewriter<'a> {
    pub alg: TermAlgebra<'a>,
    kinds: Vec<LabelKind<'a>>,
    relabels: Vec<Relabel<'a>>,
}

impl<'a> Rewriter<'a> {
    pub fn new(base: &'a SigmaGroupoid, kinds: &[LabelKind<'a>], relabels: &[Relabel<'a>]) -> Rewriter<'a> {
        let alg = TermAlgebra::new(base, kinds.iter().map(|k| k.seq).collect());
        Rewriter { alg, kinds: kinds.to_vec(), relabels: relabels.to_vec() }
    }

    /// Whether a label is a unit of an operad kind.
    pub fn is_unit(&self, kind: usize, sig: usize, elem: usize) -> bool {
        let Some(op) = self.kinds[kind].operad else { return false };
        let s = self.alg.base.signature(sig);
        s.arity() == 1 && s.inputs[0] == s.output && op.unit(s.output) == Some(elem)
    }

    /// Removes unit vertices and canonicalizes.
    pub fn normalize(&self, t: &Term) -> Term {
        self.alg.canonicalize(&self.strip(t))
    }

    fn strip(&self, t: &Term) -> Term {
        match t {
            Term::Leaf(i) => Term::Leaf(*i),
            Term::Node { kind, sig, elem, children } => {
                if self.is_unit(*kind, *sig, *elem) {
                    return self.strip(&children[0]);
                }
                Term::Node {
                    kind: *kind,
                    sig: *sig,
                    elem: *elem,
                    children: children.iter().map(|c| self.strip(c)).collect(),
                }
            }
        }
    }

    /// Every normalized term one relabelling or one edge contraction away from `t`.
    pub fn neighbors(&self, t: &Term) -> Vec<Term> {
        let mut out = Vec::new();
        self.rewrite_at(t, &mut |local| out.push(local));
        out.into_iter().map(|u| self.normalize(&u)).collect()
    }

    fn rewrite_at(&self, t: &Term, emit: &mut dyn FnMut(Term)) {
        let Term::Node { kind, sig, elem, children } = t else { return };
        let base = self.alg.base;
        for r in self.relabels.iter().filter(|r| r.from == *kind) {
            emit(Term::Node { kind: r.to, sig: *sig, elem: r.map.components[*sig][*elem], children: children.clone() });
        }
        if let Some(op) = self.kinds[*kind].operad {
            for (i, c) in children.iter().enumerate() {
                let Term::Node { kind: ck, sig: cs, elem: ce, children: cc } = c else { continue };
                if ck != kind {
                    continue;
                }
                let (Some(r), Some(z)) = (base.substitute(*sig, i, *cs), op.compose(*sig, i, *elem, *cs, *ce)) else {
                    continue;
                };
                let mut merged = children[..i].to_vec();
                merged.extend(cc.iter().cloned());
                merged.extend(children[i + 1..].iter().cloned());
                emit(Term::Node { kind: *kind, sig: r, elem: z, children: merged });
            }
        }
        for (i, c) in children.iter().enumerate() {
            self.rewrite_at(c, &mut |sub| {
                let mut ch = children.clone();
                ch[i] = sub;
                emit(Term::Node { kind: *kind, sig: *sig, elem: *elem, children: ch });
            });
        }
    }
}

/// The quotient of all unit-free terms within the budgets by the generated equivalence.
pub struct TreeColimit {
    base: Arc<SigmaGroupoid>,
    terms: Vec<Vec<Term>>,
    index: Vec<HashMap<Term, usize>>,
    class: Vec<Vec<usize>>,
    class_count: Vec<usize>,
}

impl TreeColimit {
    /// Generates every unit-free term whose vertex counts per budget group stay within `budgets`
    /// and whose leaves fit the arity range, then merges along all rewrites.
    pub fn compute(base: &Arc<SigmaGroupoid>, kinds: &[LabelKind], relabels: &[Relabel], budgets: &[usize]) -> TreeColimit {
        let rw = Rewriter::new(base, kinds, relabels);
        let groups: Vec<usize> = kinds.iter().map(|k| k.group).collect();
        let mut by_sig: HashMap<usize, Vec<Term>> = HashMap::new();
        for c in 0..base.colors().color_count() {
            let planar = rw.alg.planar_terms(c, &groups, budgets, base.max_arity(), &|k, s, x| !rw.is_unit(k, s, x));
            for (s, ts) in rw.alg.close_under_relabeling(&planar) {
                by_sig.entry(s).or_default().extend(ts);
            }
        }
        let terms: Vec<Vec<Term>> = (0..base.signature_count())
            .map(|s| {
                let mut v = by_sig.remove(&s).unwrap_or_default();
                v.sort();
                v.dedup();
                v
            })
            .collect();
        let index: Vec<HashMap<Term, usize>> =
            terms.iter().map(|ts| ts.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()).collect();
        let mut class = Vec::with_capacity(terms.len());
        let mut class_count = Vec::with_capacity(terms.len());
        for (s, ts) in terms.iter().enumerate() {
            let mut uf = UnionFind::new(ts.len());
            for (i, t) in ts.iter().enumerate() {
                for n in rw.neighbors(t) {
                    if let Some(&j) = index[s].get(&n) {
                        uf.union(i, j);
                    }
                }
            }
            let (labels, count) = uf.classes();
            class.push(labels);
            class_count.push(count);
        }
        TreeColimit { base: base.clone(), terms, index, class, class_count }
    }

    pub fn base(&self) -> &Arc<SigmaGroupoid> {
        &self.base
    }

    /// Number of classes at a signature.
    pub fn size(&self, s: usize) -> usize {
        self.class_count[s]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.class_count
    }

    pub fn terms(&self, s: usize) -> &[Term] {
        &self.terms[s]
    }

    /// Class of a normalized term, if it lies within the budgets.
    pub fn class_of(&self, s: usize, t: &Term) -> Option<usize> {
        self.index[s].get(t).map(|&i| self.class[s][i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::{GSet, Signature};

    #[test]
    fn single_operad_colimit_is_the_operad() {
        let base = Arc::new(SigmaGroupoid::new(GSet::single(), 3));
        let com = Operad::terminal(base.clone());
        let kinds = [LabelKind { seq: com.seq(), operad: Some(&com), group: 0 }];
        let col = TreeColimit::compute(&base, &kinds, &[], &[3]);
        for s in 0..base.signature_count() {
            assert_eq!(col.size(s), 1, "at {}", base.name(s));
        }
        let bin = base.index_of(&Signature::new(vec![0, 0], 0)).unwrap();
        assert!(col.terms(bin).len() > 1);
    }
}
