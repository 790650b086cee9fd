//! Labelled trees with numbered leaves, the elements of free and colimit operads.
//!
//! A term lives at a signature `C`: leaf `i` carries color `C_i`. Every vertex carries a label
//! `x ∈ X_k(D)` of some kind `k`, where `D` is the vertex corolla with inputs in child order.
//! Terms are kept canonical: children sorted, ties broken by the least label.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::perm::Perm;
use crate::signature::{SigmaGroupoid, Signature};
use crate::symseq::SymSeq;
use crate::tree::ColoredTree;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Leaf(usize),
    Node { kind: usize, sig: usize, elem: usize, children: Vec<Term> },
}

impl Term {
    /// The one-vertex term of `x ∈ X_kind(sig)` with leaves in order.
    pub fn corolla(kind: usize, sig: usize, elem: usize, arity: usize) -> Term {
        Term::Node { kind, sig, elem, children: (0..arity).map(Term::Leaf).collect() }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Term::Leaf(_))
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Term::Leaf(_) => 0,
            Term::Node { children, .. } => 1 + children.iter().map(Term::vertex_count).sum::<usize>(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Term::Leaf(_) => 1,
            Term::Node { children, .. } => children.iter().map(Term::leaf_count).sum(),
        }
    }

    /// Number of vertices of each kind.
    pub fn kind_counts(&self, kinds: usize) -> Vec<usize> {
        let mut out = vec![0; kinds];
        self.visit(&mut |t| {
            if let Term::Node { kind, .. } = t {
                out[*kind] += 1;
            }
        });
        out
    }

    /// Calls `f` on every subterm, root first.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        if let Term::Node { children, .. } = self {
            for c in children {
                c.visit(f);
            }
        }
    }

    /// Leaf labels in planar order.
    pub fn planar_leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let Term::Leaf(i) = t {
                out.push(*i);
            }
        });
        out
    }

    /// Renames leaves through `map`.
    pub fn relabel(&self, map: &impl Fn(usize) -> usize) -> Term {
        match self {
            Term::Leaf(i) => Term::Leaf(map(*i)),
            Term::Node { kind, sig, elem, children } => Term::Node {
                kind: *kind,
                sig: *sig,
                elem: *elem,
                children: children.iter().map(|c| c.relabel(map)).collect(),
            },
        }
    }

    /// Replaces every label through `f(kind, sig, elem) -> (kind, sig, elem)`.
    pub fn map_labels(&self, f: &impl Fn(usize, usize, usize) -> (usize, usize, usize)) -> Term {
        match self {
            Term::Leaf(i) => Term::Leaf(*i),
            Term::Node { kind, sig, elem, children } => {
                let (kind, sig, elem) = f(*kind, *sig, *elem);
                Term::Node { kind, sig, elem, children: children.iter().map(|c| c.map_labels(f)).collect() }
            }
        }
    }

    /// The underlying colored tree and the vertex labels `(kind, sig, elem)` in planar order.
    pub fn to_tree(&self, base: &SigmaGroupoid, root_color: usize) -> (ColoredTree, Vec<(usize, usize, usize)>) {
        let mut labels = Vec::new();
        let tree = self.to_tree_inner(base, root_color, &mut labels);
        (tree, labels)
    }

    fn to_tree_inner(&self, base: &SigmaGroupoid, color: usize, labels: &mut Vec<(usize, usize, usize)>) -> ColoredTree {
        match self {
            Term::Leaf(_) => ColoredTree::stick(color),
            Term::Node { kind, sig, elem, children } => {
                labels.push((*kind, *sig, *elem));
                let s = base.signature(*sig);
                let ch = children.iter().zip(&s.inputs).map(|(c, &col)| c.to_tree_inner(base, col, labels)).collect();
                ColoredTree::node(s.output, ch)
            }
        }
    }
}

/// The labelled structures a term may use, one symmetric sequence per kind over a common base.
#[derive(Clone)]
pub struct TermAlgebra<'a> {
    pub base: &'a SigmaGroupoid,
    pub kinds: Vec<&'a SymSeq>,
}

impl<'a> TermAlgebra<'a> {
    pub fn new(base: &'a SigmaGroupoid, kinds: Vec<&'a SymSeq>) -> TermAlgebra<'a> {
        TermAlgebra { base, kinds }
    }

    /// Output color of a node term.
    pub fn output_color(&self, t: &Term) -> Option<usize> {
        match t {
            Term::Leaf(_) => None,
            Term::Node { sig, .. } => Some(self.base.signature(*sig).output),
        }
    }

    /// The signature `C` of a term given its root color: `C_i` is the color of leaf `i`.
    pub fn signature_of(&self, t: &Term, root_color: usize) -> Signature {
        let mut colors = vec![usize::MAX; t.leaf_count()];
        self.leaf_colors(t, root_color, &mut colors);
        Signature::new(colors, root_color)
    }

    fn leaf_colors(&self, t: &Term, color: usize, out: &mut [usize]) {
        match t {
            Term::Leaf(i) => out[*i] = color,
            Term::Node { sig, children, .. } => {
                let s = self.base.signature(*sig);
                for (c, &col) in children.iter().zip(&s.inputs) {
                    self.leaf_colors(c, col, out);
                }
            }
        }
    }

    /// Sorts children at every vertex, moving the label along; ties take the least label.
    pub fn canonicalize(&self, t: &Term) -> Term {
        match t {
            Term::Leaf(i) => Term::Leaf(*i),
            Term::Node { kind, sig, elem, children } => {
                let children: Vec<Term> = children.iter().map(|c| self.canonicalize(c)).collect();
                let m = children.len();
                let mut order: Vec<usize> = (0..m).collect();
                order.sort_by(|&a, &b| children[a].cmp(&children[b]));
                let seq = self.kinds[*kind];
                let sorted: Vec<Term> = order.iter().map(|&j| children[j].clone()).collect();
                let has_ties = sorted.windows(2).any(|w| w[0] == w[1]);
                let base_perm = Perm::from_images(order).expect("ordering is a permutation");
                let best = if has_ties {
                    tie_permutations(&sorted)
                        .into_iter()
                        .map(|tau| {
                            let sigma = base_perm.compose(&tau);
                            let a = self.base.arrow(*sig, self.base.group().identity(), &sigma);
                            (self.base.groupoid().dst(a), seq.act(a, *elem))
                        })
                        .min()
                        .expect("identity is a tie permutation")
                } else {
                    let a = self.base.arrow(*sig, self.base.group().identity(), &base_perm);
                    (self.base.groupoid().dst(a), seq.act(a, *elem))
                };
                Term::Node { kind: *kind, sig: best.0, elem: best.1, children: sorted }
            }
        }
    }

    /// The action of `(g, σ)`: a term at `C` becomes a term at `gCσ`.
    pub fn act(&self, g: usize, sigma: &Perm, t: &Term) -> Term {
        let inv = sigma.inverse();
        let moved = self.act_labels(g, &t.relabel(&|i| inv.apply(i)));
        self.canonicalize(&moved)
    }

    fn act_labels(&self, g: usize, t: &Term) -> Term {
        if g == self.base.group().identity() {
            return t.clone();
        }
        t.map_labels(&|kind, sig, elem| {
            let n = self.base.signature(sig).arity();
            let a = self.base.arrow(sig, g, &Perm::identity(n));
            (kind, self.base.groupoid().dst(a), self.kinds[kind].act(a, elem))
        })
    }

    /// `s ∘_slot t` for `t` of arity `m`, canonicalized.
    pub fn graft(&self, s: &Term, slot: usize, t: &Term, m: usize) -> Term {
        let shifted = t.relabel(&|j| j + slot);
        self.canonicalize(&graft_raw(s, slot, m, &shifted))
    }

    /// Planar terms with at most `budget[group[k]]` vertices drawn from each budget group, at most
    /// `max_leaves` leaves, and output `color`. The stick is included. Leaves are numbered in
    /// planar order.
    pub fn planar_terms(
        &self,
        color: usize,
        groups: &[usize],
        budget: &[usize],
        max_leaves: usize,
        allow: &dyn Fn(usize, usize, usize) -> bool,
    ) -> Vec<PlanarTerm> {
        self.planar_terms_weighted(color, groups, budget, max_leaves, allow, &|_, _, _| 1)
    }

    /// [`TermAlgebra::planar_terms`] where a vertex labelled `(kind, signature, element)` uses
    /// `weight(kind, signature, element) ≥ 1` units of its group's budget.
    pub fn planar_terms_weighted(
        &self,
        color: usize,
        groups: &[usize],
        budget: &[usize],
        max_leaves: usize,
        allow: &dyn Fn(usize, usize, usize) -> bool,
        weight: &dyn Fn(usize, usize, usize) -> usize,
    ) -> Vec<PlanarTerm> {
        let mut gen = PlanarGenerator { alg: self, groups, max_leaves, allow, weight, memo: HashMap::new() };
        gen.generate(color, budget.to_vec()).as_ref().clone()
    }

    /// All canonical terms obtained from planar terms by renumbering leaves, grouped by signature.
    pub fn close_under_relabeling(&self, planar: &[PlanarTerm]) -> HashMap<usize, Vec<Term>> {
        let mut out: HashMap<usize, std::collections::HashSet<Term>> = HashMap::new();
        let e = self.base.group().identity();
        for p in planar {
            let Some(d) = self.base.index_of(&Signature::new(p.leaf_colors.clone(), p.root_color)) else {
                continue;
            };
            for sigma in self.base.perms(p.leaf_colors.len()) {
                let target = self.base.act(e, sigma, d);
                let t = self.act(e, sigma, &p.term);
                out.entry(target).or_default().insert(t);
            }
        }
        out.into_iter()
            .map(|(s, set)| {
                let mut v: Vec<Term> = set.into_iter().collect();
                v.sort();
                (s, v)
            })
            .collect()
    }
}

fn graft_raw(s: &Term, slot: usize, m: usize, t: &Term) -> Term {
    match s {
        Term::Leaf(i) if *i == slot => t.clone(),
        Term::Leaf(i) if *i > slot => Term::Leaf(i + m - 1),
        Term::Leaf(i) => Term::Leaf(*i),
        Term::Node { kind, sig, elem, children } => Term::Node {
            kind: *kind,
            sig: *sig,
            elem: *elem,
            children: children.iter().map(|c| graft_raw(c, slot, m, t)).collect(),
        },
    }
}

/// Permutations `τ` with `sorted[τ(i)] == sorted[i]` for every `i`.
fn tie_permutations(sorted: &[Term]) -> Vec<Perm> {
    let m = sorted.len();
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < m {
        let mut j = i + 1;
        while j < m && sorted[j] == sorted[i] {
            j += 1;
        }
        blocks.push((i, j));
        i = j;
    }
    let mut out = vec![vec![]];
    for (lo, hi) in blocks {
        let mut next = Vec::new();
        for prefix in &out {
            for p in Perm::all(hi - lo) {
                let mut images: Vec<usize> = prefix.clone();
                images.extend(p.images().iter().map(|&x| x + lo));
                next.push(images);
            }
        }
        out = next;
    }
    out.into_iter().map(|v| Perm::from_images(v).expect("block permutation")).collect()
}

/// A term with leaves numbered in planar order, its leaf colors and vertex usage per budget group.
#[derive(Clone, Debug)]
pub struct PlanarTerm {
    pub term: Term,
    pub root_color: usize,
    pub leaf_colors: Vec<usize>,
    pub usage: Vec<usize>,
}

struct PlanarGenerator<'a, 'b> {
    alg: &'b TermAlgebra<'a>,
    groups: &'b [usize],
    max_leaves: usize,
    allow: &'b dyn Fn(usize, usize, usize) -> bool,
    weight: &'b dyn Fn(usize, usize, usize) -> usize,
    memo: HashMap<(usize, Vec<usize>), Rc<Vec<PlanarTerm>>>,
}

impl PlanarGenerator<'_, '_> {
    fn generate(&mut self, color: usize, budget: Vec<usize>) -> Rc<Vec<PlanarTerm>> {
        let key = (color, budget.clone());
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let mut out = vec![PlanarTerm {
            term: Term::Leaf(0),
            root_color: color,
            leaf_colors: vec![color],
            usage: vec![0; budget.len()],
        }];
        let base = self.alg.base;
        for kind in 0..self.alg.kinds.len() {
            let grp = self.groups[kind];
            if budget[grp] == 0 {
                continue;
            }
            for s in 0..base.signature_count() {
                let sig = base.signature(s);
                if sig.output != color || self.alg.kinds[kind].size(s) == 0 {
                    continue;
                }
                let mut by_weight: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for x in (0..self.alg.kinds[kind].size(s)).filter(|&x| (self.allow)(kind, s, x)) {
                    let w = (self.weight)(kind, s, x).max(1);
                    if w <= budget[grp] {
                        by_weight.entry(w).or_default().push(x);
                    }
                }
                let inputs = sig.inputs.clone();
                for (w, elems) in by_weight {
                    let mut rest = budget.clone();
                    rest[grp] -= w;
                    for (children, leaves, usage) in self.children(&inputs, rest) {
                        let mut usage = usage;
                        usage[grp] += w;
                        for &x in &elems {
                            out.push(PlanarTerm {
                                term: Term::Node { kind, sig: s, elem: x, children: children.clone() },
                                root_color: color,
                                leaf_colors: leaves.clone(),
                                usage: usage.clone(),
                            });
                        }
                    }
                }
            }
        }
        let rc = Rc::new(out);
        self.memo.insert(key, rc.clone());
        rc
    }

    /// Sequences of subterms for the given input colors within a shared budget.
    fn children(&mut self, inputs: &[usize], budget: Vec<usize>) -> Vec<(Vec<Term>, Vec<usize>, Vec<usize>)> {
        let mut partial: Vec<(Vec<Term>, Vec<usize>, Vec<usize>)> = vec![(vec![], vec![], vec![0; budget.len()])];
        // Leaves still required by the remaining inputs, one each at least.
        for (idx, &c) in inputs.iter().enumerate() {
            let remaining_inputs = inputs.len() - idx - 1;
            let mut next = Vec::new();
            for (terms, leaves, used) in &partial {
                let avail: Vec<usize> = budget.iter().zip(used).map(|(b, u)| b - u).collect();
                let options = self.generate(c, avail);
                for opt in options.iter() {
                    if leaves.len() + opt.leaf_colors.len() + remaining_inputs > self.max_leaves {
                        continue;
                    }
                    let off = leaves.len();
                    let mut t = terms.clone();
                    t.push(opt.term.relabel(&|i| i + off));
                    let mut l = leaves.clone();
                    l.extend_from_slice(&opt.leaf_colors);
                    let u: Vec<usize> = used.iter().zip(&opt.usage).map(|(a, b)| a + b).collect();
                    next.push((t, l, u));
                }
            }
            partial = next;
        }
        partial
    }
}
