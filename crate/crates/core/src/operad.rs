//! Finite equivariant colored operads given by composition tables, their laws, evaluation of
//! labelled trees, operad maps, and change of colors.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functor::SetValuedFunctor;
use crate::perm::Perm;
use crate::signature::{SigmaGroupoid, Signature};
use crate::symseq::{color_change_functor, SymSeq, SymSeqMap};
use crate::term::Term;
use crate::tree::ColoredTree;

/// Key of a partial composition `x ∘_slot y`: `(outer signature, slot, x, inner signature, y)`.
pub type CompKey = (usize, usize, usize, usize, usize);

/// An operad on a symmetric sequence: units per color and a table of partial compositions.
///
/// A composite missing from the table is undefined; this happens only for operads computed up
/// to a bound, such as truncated free operads.
#[derive(Clone, Debug)]
pub struct Operad {
    seq: SymSeq,
    units: Vec<Option<usize>>,
    table: HashMap<CompKey, usize>,
    names: Option<Vec<Vec<String>>>,
}

impl Operad {
    pub fn from_parts(seq: SymSeq, units: Vec<Option<usize>>, table: HashMap<CompKey, usize>) -> Operad {
        Operad { seq, units, table, names: None }
    }

    /// The operad with only units.
    pub fn initial(base: Arc<SigmaGroupoid>) -> Operad {
        let g = base.groupoid();
        let is_unit = |s: usize| {
            let sig = base.signature(s);
            sig.arity() == 1 && sig.inputs[0] == sig.output
        };
        let sizes: Vec<usize> = (0..g.object_count()).map(|s| usize::from(is_unit(s))).collect();
        let action = (0..g.arrow_count()).map(|a| vec![0; sizes[g.src(a)]]).collect();
        let seq = SymSeq::new(base.clone(), SetValuedFunctor { sizes, action }).expect("units form a functor");
        let units = (0..base.colors().color_count())
            .map(|_| (base.max_arity() >= 1).then_some(0))
            .collect();
        let mut table = HashMap::new();
        if base.max_arity() >= 1 {
            for c in 0..base.colors().color_count() {
                let u = base.unit_signature(c);
                table.insert((u, 0, 0, u, 0), 0);
            }
        }
        Operad::from_parts(seq, units, table)
    }

    /// The operad with one element at every signature.
    pub fn terminal(base: Arc<SigmaGroupoid>) -> Operad {
        let seq = SymSeq::constant(base.clone(), 1);
        let units = (0..base.colors().color_count()).map(|_| (base.max_arity() >= 1).then_some(0)).collect();
        let table = full_table(&seq, |_, _, _, _, _, _| 0);
        Operad::from_parts(seq, units, table)
    }

    /// The operad with one element at every signature of positive arity.
    pub fn commutative(base: Arc<SigmaGroupoid>) -> Operad {
        let g = base.groupoid();
        let sizes: Vec<usize> = (0..g.object_count()).map(|s| usize::from(base.signature(s).arity() > 0)).collect();
        let action = (0..g.arrow_count()).map(|a| vec![0; sizes[g.src(a)]]).collect();
        let seq = SymSeq::new(base.clone(), SetValuedFunctor { sizes, action }).expect("constant on positive arities");
        let units = (0..base.colors().color_count()).map(|_| (base.max_arity() >= 1).then_some(0)).collect();
        let table = full_table(&seq, |_, _, _, _, _, _| 0);
        Operad::from_parts(seq, units, table)
    }

    /// The endomorphism operad of a family of finite sets indexed by colors. Point `p` has color
    /// `point_color[p]`; `point_action[g][p]` is a point of color `g·point_color[p]`.
    /// Elements at `(c_1, …, c_n; c)` are functions `A_{c_1} × ⋯ × A_{c_n} → A_c`, encoded by
    /// their value table in base `|A_c|` with the first input varying slowest.
    pub fn endomorphism(base: Arc<SigmaGroupoid>, point_color: &[usize], point_action: &[Vec<usize>]) -> Result<Operad> {
        let colors = base.colors();
        let k = colors.color_count();
        let mut points: Vec<Vec<usize>> = vec![vec![]; k];
        let mut local = vec![0; point_color.len()];
        for (p, &c) in point_color.iter().enumerate() {
            local[p] = points[c].len();
            points[c].push(p);
        }
        if point_action.len() != base.group().order() {
            return Err(Error::InvalidAction("one point permutation per group element".into()));
        }
        for (g, row) in point_action.iter().enumerate() {
            let ok = row.len() == point_color.len()
                && Perm::from_images(row.clone()).is_some()
                && row.iter().enumerate().all(|(p, &q)| point_color[q] == colors.act(g, point_color[p]));
            if !ok {
                return Err(Error::InvalidAction(format!("point action of group element {g}")));
            }
        }
        let space = EndSpace { base: &base, points: &points, local: &local, action: point_action };
        let sizes: Vec<usize> = base.signatures().iter().map(|s| space.function_count(s)).collect();
        let g = base.groupoid();
        let action = (0..g.arrow_count()).map(|a| space.act_all(a, sizes[g.src(a)])).collect();
        let seq = SymSeq::new(base.clone(), SetValuedFunctor { sizes, action })?;
        let units = (0..k)
            .map(|c| {
                (base.max_arity() >= 1).then(|| space.encode(&points[c].iter().map(|&p| local[p]).collect::<Vec<_>>(), points[c].len()))
            })
            .collect();
        let table = full_table(&seq, |outer, slot, x, inner, y, _| space.compose(outer, slot, x, inner, y));
        Ok(Operad::from_parts(seq, units, table))
    }

    /// Endomorphisms of `sizes[c]` points per color, the group moving points with their colors.
    /// Requires `sizes` to be constant on orbits of colors.
    pub fn endomorphism_following_colors(base: Arc<SigmaGroupoid>, sizes: &[usize]) -> Result<Operad> {
        let colors = base.colors();
        let mut point_color = Vec::new();
        let mut first = vec![0; sizes.len()];
        for (c, &n) in sizes.iter().enumerate() {
            first[c] = point_color.len();
            point_color.extend(std::iter::repeat_n(c, n));
        }
        let mut point_action = Vec::new();
        for g in 0..base.group().order() {
            let mut row = Vec::new();
            for (p, &c) in point_color.iter().enumerate() {
                let d = colors.act(g, c);
                if sizes[d] != sizes[c] {
                    return Err(Error::InvalidAction("sizes differ within an orbit of colors".into()));
                }
                row.push(first[d] + p - first[c]);
            }
            point_action.push(row);
        }
        Operad::endomorphism(base, &point_color, &point_action)
    }

    /// The suboperad of elements of positive arity.
    pub fn positive_part(&self) -> Operad {
        let base = self.base().clone();
        let nullary = |s: usize| base.signature(s).arity() == 0;
        let f = self.seq.functor();
        let g = base.groupoid();
        let sizes = (0..g.object_count()).map(|s| if nullary(s) { 0 } else { f.sizes[s] }).collect();
        let action = (0..g.arrow_count()).map(|a| if nullary(g.src(a)) { vec![] } else { f.action[a].clone() }).collect();
        let seq = SymSeq::new(base.clone(), SetValuedFunctor { sizes, action }).expect("restriction of a functor");
        let table = self.table.iter().filter(|(k, _)| !nullary(k.3)).map(|(&k, &v)| (k, v)).collect();
        let names = self.names.as_ref().map(|n| {
            n.iter().enumerate().map(|(s, v)| if nullary(s) { vec![] } else { v.clone() }).collect()
        });
        Operad { seq, units: self.units.clone(), table, names }
    }

    /// The same operad with only the Σ-action, over `forgotten` (same colors, trivial group).
    pub fn forget_group_to(&self, forgotten: &Arc<SigmaGroupoid>) -> Operad {
        Operad {
            seq: self.seq.forget_group_to(forgotten),
            units: self.units.clone(),
            table: self.table.clone(),
            names: self.names.clone(),
        }
    }

    pub fn with_names(mut self, names: Vec<Vec<String>>) -> Operad {
        self.names = Some(names);
        self
    }

    pub fn base(&self) -> &Arc<SigmaGroupoid> {
        self.seq.base()
    }

    pub fn seq(&self) -> &SymSeq {
        &self.seq
    }

    pub fn size(&self, s: usize) -> usize {
        self.seq.size(s)
    }

    pub fn unit(&self, color: usize) -> Option<usize> {
        self.units[color]
    }

    pub fn units(&self) -> &[Option<usize>] {
        &self.units
    }

    pub fn table(&self) -> &HashMap<CompKey, usize> {
        &self.table
    }

    pub fn compose(&self, outer: usize, slot: usize, x: usize, inner: usize, y: usize) -> Option<usize> {
        self.table.get(&(outer, slot, x, inner, y)).copied()
    }

    /// Display name of an element.
    pub fn element_name(&self, s: usize, x: usize) -> String {
        match &self.names {
            Some(n) if n[s].len() > x => n[s][x].clone(),
            _ => format!("{}#{x}", self.base().name(s)),
        }
    }

    /// Composes a term whose labels are elements of this operad (kinds are ignored).
    /// Returns the signature of the term and the composite, or `None` if some composite is undefined.
    pub fn eval_term(&self, t: &Term, root_color: usize) -> Option<(usize, usize)> {
        let base = self.base();
        match t {
            Term::Leaf(_) => {
                let x = self.unit(root_color)?;
                Some((base.unit_signature(root_color), x))
            }
            Term::Node { .. } => {
                let (d, x, labels) = self.eval_planar(t)?;
                let sigma = Perm::from_images(labels).expect("leaf labels are distinct").inverse();
                let a = base.arrow(d, base.group().identity(), &sigma);
                Some((base.groupoid().dst(a), self.seq.act(a, x)))
            }
        }
    }

    fn eval_planar(&self, t: &Term) -> Option<(usize, usize, Vec<usize>)> {
        let Term::Node { sig, elem, children, .. } = t else { unreachable!("called on a node") };
        let (mut s, mut x) = (*sig, *elem);
        let mut leaves: Vec<usize> = Vec::new();
        for (i, c) in children.iter().enumerate().rev() {
            match c {
                Term::Leaf(l) => leaves.insert(0, *l),
                Term::Node { .. } => {
                    let (cs, cx, cl) = self.eval_planar(c)?;
                    let r = self.base().substitute(s, i, cs)?;
                    x = self.compose(s, i, x, cs, cx)?;
                    s = r;
                    leaves.splice(0..0, cl);
                }
            }
        }
        Some((s, x, leaves))
    }

    /// Composes a tree labelled in planar vertex order; the result lives at the planar
    /// leaf-root signature. `Ok(None)` if some composite is undefined.
    pub fn eval_tree(&self, tree: &ColoredTree, labels: &[usize]) -> Result<Option<usize>> {
        let base = self.base().clone();
        if labels.len() != tree.vertex_count() {
            return Err(Error::ArityMismatch { expected: tree.vertex_count(), found: labels.len() });
        }
        let mut next_leaf = 0;
        let mut next_vertex = 0;
        let term = tree_to_term(&base, tree, labels, &mut next_leaf, &mut next_vertex, &|s, x| x < self.size(s))?;
        Ok(self.eval_term(&term, tree.color).map(|(_, x)| x))
    }
}

/// A labelled tree as a term with leaves numbered in planar order; `ok(sig, x)` validates labels.
pub fn tree_to_term(
    base: &SigmaGroupoid,
    tree: &ColoredTree,
    labels: &[usize],
    next_leaf: &mut usize,
    next_vertex: &mut usize,
    ok: &dyn Fn(usize, usize) -> bool,
) -> Result<Term> {
    match &tree.vertex {
        None => {
            *next_leaf += 1;
            Ok(Term::Leaf(*next_leaf - 1))
        }
        Some(ch) => {
            let sig = Signature::new(ch.iter().map(|c| c.color).collect(), tree.color);
            let s = base.require(&sig)?;
            let x = labels[*next_vertex];
            if !ok(s, x) {
                return Err(Error::OutOfRange(format!("label {x} at {}", base.name(s))));
            }
            *next_vertex += 1;
            let children =
                ch.iter().map(|c| tree_to_term(base, c, labels, next_leaf, next_vertex, ok)).collect::<Result<_>>()?;
            Ok(Term::Node { kind: 0, sig: s, elem: x, children })
        }
    }
}

/// Builds the table of every composite whose signature lies in the arity range.
pub fn full_table(
    seq: &SymSeq,
    f: impl Fn(usize, usize, usize, usize, usize, usize) -> usize,
) -> HashMap<CompKey, usize> {
    let base = seq.base();
    let by_output = signatures_by_output(base);
    let mut table = HashMap::new();
    for outer in 0..base.signature_count() {
        let sig = base.signature(outer);
        for slot in 0..sig.arity() {
            for &inner in &by_output[sig.inputs[slot]] {
                let Some(r) = base.substitute(outer, slot, inner) else { continue };
                for x in 0..seq.size(outer) {
                    for y in 0..seq.size(inner) {
                        table.insert((outer, slot, x, inner, y), f(outer, slot, x, inner, y, r));
                    }
                }
            }
        }
    }
    table
}

pub(crate) fn signatures_by_output(base: &SigmaGroupoid) -> Vec<Vec<usize>> {
    let mut by_output = vec![vec![]; base.colors().color_count()];
    for (s, sig) in base.signatures().iter().enumerate() {
        by_output[sig.output].push(s);
    }
    by_output
}

struct EndSpace<'a> {
    base: &'a SigmaGroupoid,
    points: &'a [Vec<usize>],
    local: &'a [usize],
    action: &'a [Vec<usize>],
}

impl EndSpace<'_> {
    fn domain_size(&self, inputs: &[usize]) -> usize {
        inputs.iter().map(|&c| self.points[c].len()).product()
    }

    fn function_count(&self, s: &Signature) -> usize {
        let dom = self.domain_size(&s.inputs);
        let cod = self.points[s.output].len();
        u32::try_from(dom).ok().and_then(|d| cod.checked_pow(d)).expect("endomorphism set too large")
    }

    fn decode(&self, x: usize, dom: usize, cod: usize) -> Vec<usize> {
        let mut v = vec![0; dom];
        let mut r = x;
        for slot in v.iter_mut().rev() {
            *slot = r % cod;
            r /= cod;
        }
        v
    }

    fn encode(&self, values: &[usize], cod: usize) -> usize {
        values.iter().fold(0, |acc, &v| acc * cod + v)
    }

    /// Mixed-radix index of an input tuple (local indices), first input slowest.
    fn tuple_index(&self, inputs: &[usize], tuple: &[usize]) -> usize {
        inputs.iter().zip(tuple).fold(0, |acc, (&c, &v)| acc * self.points[c].len() + v)
    }

    fn tuples(&self, inputs: &[usize]) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for &c in inputs {
            let n = self.points[c].len();
            out = out.into_iter().flat_map(|t| (0..n).map(move |v| [t.clone(), vec![v]].concat())).collect();
        }
        out
    }

    /// `((g,σ)·f)(b) = g·f(a)` where `a_{σ(i)} = g⁻¹·b_i`.
    fn act_all(&self, a: usize, count: usize) -> Vec<usize> {
        let base = self.base;
        let s = base.groupoid().src(a);
        let t = base.groupoid().dst(a);
        let (g, sigma) = base.arrow_data(a);
        let ginv = base.group().inv(g);
        let (src, dst) = (base.signature(s), base.signature(t));
        let move_point = |h: usize, c: usize, v: usize| self.local[self.action[h][self.points[c][v]]];
        let tuples = self.tuples(&dst.inputs);
        // For each target tuple b, the source tuple a it reads.
        let reads: Vec<usize> = tuples
            .iter()
            .map(|b| {
                let mut at = vec![0; b.len()];
                for (i, &bi) in b.iter().enumerate() {
                    at[sigma.apply(i)] = move_point(ginv, dst.inputs[i], bi);
                }
                self.tuple_index(&src.inputs, &at)
            })
            .collect();
        let dom = self.domain_size(&src.inputs);
        let cod = self.points[src.output].len();
        (0..count)
            .map(|x| {
                let f = self.decode(x, dom, cod);
                let values: Vec<usize> = reads.iter().map(|&r| move_point(g, src.output, f[r])).collect();
                self.encode(&values, self.points[dst.output].len())
            })
            .collect()
    }

    fn compose(&self, outer: usize, slot: usize, x: usize, inner: usize, y: usize) -> usize {
        let (o, i) = (self.base.signature(outer), self.base.signature(inner));
        let f = self.decode(x, self.domain_size(&o.inputs), self.points[o.output].len());
        let h = self.decode(y, self.domain_size(&i.inputs), self.points[i.output].len());
        let mut inputs = o.inputs[..slot].to_vec();
        inputs.extend_from_slice(&i.inputs);
        inputs.extend_from_slice(&o.inputs[slot + 1..]);
        let m = i.arity();
        let values: Vec<usize> = self
            .tuples(&inputs)
            .iter()
            .map(|t| {
                let inner_val = h[self.tuple_index(&i.inputs, &t[slot..slot + m])];
                let mut outer_tuple = t[..slot].to_vec();
                outer_tuple.push(inner_val);
                outer_tuple.extend_from_slice(&t[slot + m..]);
                f[self.tuple_index(&o.inputs, &outer_tuple)]
            })
            .collect();
        self.encode(&values, self.points[o.output].len())
    }
}

/// A failed operad axiom with a labelled tree exhibiting it.
#[derive(Clone, Debug)]
pub struct LawViolation {
    pub law: &'static str,
    pub tree: ColoredTree,
    /// Vertex labels in planar order.
    pub labels: Vec<String>,
    pub detail: String,
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails: {} (labels {})", self.law, self.detail, self.labels.join(", "))
    }
}

/// Checks units, sequential and parallel associativity, and equivariance for Σ and G
/// wherever all composites involved are defined.
pub fn check_operad_laws(op: &Operad) -> std::result::Result<(), LawViolation> {
    LawChecker::new(op).run()
}

struct LawChecker<'a> {
    op: &'a Operad,
    base: &'a SigmaGroupoid,
    by_output: Vec<Vec<usize>>,
}

impl<'a> LawChecker<'a> {
    fn new(op: &'a Operad) -> LawChecker<'a> {
        let base = op.base().as_ref();
        LawChecker { op, base, by_output: signatures_by_output(base) }
    }

    fn violation(&self, law: &'static str, term: &Term, root: usize, detail: String) -> LawViolation {
        let (tree, labels) = term.to_tree(self.base, root);
        let labels = labels.iter().map(|&(_, s, x)| self.op.element_name(s, x)).collect();
        LawViolation { law, tree, labels, detail }
    }

    fn corolla(&self, s: usize, x: usize) -> Term {
        Term::corolla(0, s, x, self.base.signature(s).arity())
    }

    fn run(&self) -> std::result::Result<(), LawViolation> {
        self.op.seq.validate().map_err(|e| LawViolation {
            law: "functoriality",
            tree: ColoredTree::stick(0),
            labels: vec![],
            detail: e.to_string(),
        })?;
        self.units()?;
        self.associativity()?;
        self.equivariance()
    }

    fn units(&self) -> std::result::Result<(), LawViolation> {
        if self.base.max_arity() == 0 {
            return Ok(());
        }
        for c in 0..self.base.colors().color_count() {
            if self.op.unit(c).is_none_or(|u| u >= self.op.size(self.base.unit_signature(c))) {
                return Err(LawViolation {
                    law: "unit",
                    tree: ColoredTree::stick(c),
                    labels: vec![],
                    detail: format!("no unit for color {}", self.base.colors().color_name(c)),
                });
            }
        }
        for s in 0..self.base.signature_count() {
            let sig = self.base.signature(s);
            let out_unit = self.base.unit_signature(sig.output);
            let u = self.op.unit(sig.output).expect("checked");
            for x in 0..self.op.size(s) {
                if let Some(r) = self.op.compose(out_unit, 0, u, s, x) {
                    if r != x {
                        let t = Term::Node { kind: 0, sig: out_unit, elem: u, children: vec![self.corolla(s, x)] };
                        return Err(self.violation("left unit", &t, sig.output, format!("1 ∘ x = #{r}, x = #{x}")));
                    }
                }
                for (i, &c) in sig.inputs.iter().enumerate() {
                    let us = self.base.unit_signature(c);
                    let uc = self.op.unit(c).expect("checked");
                    if let Some(r) = self.op.compose(s, i, x, us, uc) {
                        if r != x {
                            let mut t = self.corolla(s, x);
                            if let Term::Node { children, .. } = &mut t {
                                children[i] = Term::corolla(0, us, uc, 1).relabel(&|_| i);
                            }
                            return Err(self.violation("right unit", &t, sig.output, format!("x ∘_{i} 1 = #{r}, x = #{x}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn associativity(&self) -> std::result::Result<(), LawViolation> {
        let op = self.op;
        let base = self.base;
        for s in 0..base.signature_count() {
            let sig = base.signature(s);
            let n = sig.arity();
            for i in 0..n {
                for &d in &self.by_output[sig.inputs[i]] {
                    let Some(sd) = base.substitute(s, i, d) else { continue };
                    let m = base.signature(d).arity();
                    // Sequential: (x ∘_i y) ∘_{i+j} z = x ∘_i (y ∘_j z).
                    for j in 0..m {
                        for &e in &self.by_output[base.signature(d).inputs[j]] {
                            let (Some(sde), Some(de)) = (base.substitute(sd, i + j, e), base.substitute(d, j, e)) else {
                                continue;
                            };
                            debug_assert_eq!(Some(sde), base.substitute(s, i, de));
                            for x in 0..op.size(s) {
                                for y in 0..op.size(d) {
                                    let Some(xy) = op.compose(s, i, x, d, y) else { continue };
                                    for z in 0..op.size(e) {
                                        let l = op.compose(sd, i + j, xy, e, z);
                                        let r = op.compose(d, j, y, e, z).and_then(|yz| op.compose(s, i, x, de, yz));
                                        if let (Some(l), Some(r)) = (l, r) {
                                            if l != r {
                                                let k = base.signature(e).arity();
                                                let inner = graft_planar(&self.corolla(d, y), j, &self.corolla(e, z), k);
                                                let t = graft_planar(&self.corolla(s, x), i, &inner, m + k - 1);
                                                return Err(self.violation(
                                                    "sequential associativity",
                                                    &t,
                                                    sig.output,
                                                    format!("#{l} ≠ #{r}"),
                                                ));
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                    // Parallel: (x ∘_i y) ∘_{k+m-1} z = (x ∘_k z) ∘_i y for i < k.
                    for k in i + 1..n {
                        for &e in &self.by_output[sig.inputs[k]] {
                            let Some(se) = base.substitute(s, k, e) else { continue };
                            let Some(sde) = base.substitute(sd, k + m - 1, e) else { continue };
                            debug_assert_eq!(Some(sde), base.substitute(se, i, d));
                            for x in 0..op.size(s) {
                                for y in 0..op.size(d) {
                                    let Some(xy) = op.compose(s, i, x, d, y) else { continue };
                                    for z in 0..op.size(e) {
                                        let l = op.compose(sd, k + m - 1, xy, e, z);
                                        let r = op.compose(s, k, x, e, z).and_then(|xz| op.compose(se, i, xz, d, y));
                                        if let (Some(l), Some(r)) = (l, r) {
                                            if l != r {
                                                let p = base.signature(e).arity();
                                                let t = graft_planar(&self.corolla(s, x), k, &self.corolla(e, z), p);
                                                let t = graft_planar(&t, i, &self.corolla(d, y), m);
                                                return Err(self.violation(
                                                    "parallel associativity",
                                                    &t,
                                                    sig.output,
                                                    format!("#{l} ≠ #{r}"),
                                                ));
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn equivariance(&self) -> std::result::Result<(), LawViolation> {
        let op = self.op;
        let base = self.base;
        let e = base.group().identity();
        let dst = |a: usize| base.groupoid().dst(a);
        for s in 0..base.signature_count() {
            let sig = base.signature(s);
            let n = sig.arity();
            for i in 0..n {
                for &d in &self.by_output[sig.inputs[i]] {
                    let Some(sd) = base.substitute(s, i, d) else { continue };
                    let m = base.signature(d).arity();
                    let total = n + m - 1;
                    for x in 0..op.size(s) {
                        for y in 0..op.size(d) {
                            let t = || graft_planar(&self.corolla(s, x), i, &self.corolla(d, y), m);
                            let xy = op.compose(s, i, x, d, y);
                            // Outer: (xσ) ∘_i y = (x ∘_{σ(i)} y)·τ for adjacent transpositions σ.
                            for sw in 0..n.saturating_sub(1) {
                                let sigma = Perm::from_cycles(n, &[&[sw, sw + 1]]);
                                let a = base.arrow(s, e, &sigma);
                                let (s2, x2) = (dst(a), op.seq.act(a, x));
                                let Some(s2d) = base.substitute(s2, i, d) else { continue };
                                let p = sigma.apply(i);
                                let pos = |q: usize| if q < p { q } else { q + m - 1 };
                                let tau: Vec<usize> = (0..total)
                                    .map(|q| {
                                        if q < i {
                                            pos(sigma.apply(q))
                                        } else if q < i + m {
                                            p + (q - i)
                                        } else {
                                            pos(sigma.apply(q - m + 1))
                                        }
                                    })
                                    .collect();
                                let tau = Perm::from_images(tau).expect("block permutation");
                                let l = op.compose(s2, i, x2, d, y);
                                let r = op.compose(s, p, x, d, y).map(|c| {
                                    let sp = base.substitute(s, p, d).expect("same colors");
                                    op.seq.act(base.arrow(sp, e, &tau), c)
                                });
                                debug_assert!(l.is_none() || base.substitute(s, p, d).map(|sp| base.act(e, &tau, sp)) == Some(s2d));
                                if let (Some(l), Some(r)) = (l, r) {
                                    if l != r {
                                        return Err(self.violation(
                                            "equivariance in the outer permutation",
                                            &t(),
                                            sig.output,
                                            format!("σ = {sigma}: #{l} ≠ #{r}"),
                                        ));
                                    }
                                }
                            }
                            // Inner: x ∘_i (yρ) = (x ∘_i y)·(id ∘_i ρ).
                            for sw in 0..m.saturating_sub(1) {
                                let rho = Perm::from_cycles(m, &[&[sw, sw + 1]]);
                                let a = base.arrow(d, e, &rho);
                                let (d2, y2) = (dst(a), op.seq.act(a, y));
                                let tau = Perm::identity(n).substitute(i, &rho);
                                let l = op.compose(s, i, x, d2, y2);
                                let r = xy.map(|c| op.seq.act(base.arrow(sd, e, &tau), c));
                                if let (Some(l), Some(r)) = (l, r) {
                                    if l != r {
                                        return Err(self.violation(
                                            "equivariance in the inner permutation",
                                            &t(),
                                            sig.output,
                                            format!("ρ = {rho}: #{l} ≠ #{r}"),
                                        ));
                                    }
                                }
                            }
                            // Group: g(x ∘_i y) = gx ∘_i gy.
                            for g in 0..base.group().order() {
                                let ax = base.arrow(s, g, &Perm::identity(n));
                                let ay = base.arrow(d, g, &Perm::identity(m));
                                let l = op.compose(dst(ax), i, op.seq.act(ax, x), dst(ay), op.seq.act(ay, y));
                                let r = xy.map(|c| op.seq.act(base.arrow(sd, g, &Perm::identity(total)), c));
                                if let (Some(l), Some(r)) = (l, r) {
                                    if l != r {
                                        return Err(self.violation(
                                            "equivariance in the group",
                                            &t(),
                                            sig.output,
                                            format!("g = {}: #{l} ≠ #{r}", base.group().label(g)),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Grafts without canonicalizing: leaves of `s` after `slot` shift by `m - 1`.
pub fn graft_planar(s: &Term, slot: usize, t: &Term, m: usize) -> Term {
    fn go(s: &Term, slot: usize, m: usize, t: &Term) -> Term {
        match s {
            Term::Leaf(i) if *i == slot => t.clone(),
            Term::Leaf(i) if *i > slot => Term::Leaf(i + m - 1),
            Term::Leaf(i) => Term::Leaf(*i),
            Term::Node { kind, sig, elem, children } => Term::Node {
                kind: *kind,
                sig: *sig,
                elem: *elem,
                children: children.iter().map(|c| go(c, slot, m, t)).collect(),
            },
        }
    }
    go(s, slot, m, &t.relabel(&|j| j + slot))
}

/// Whether component maps form an operad map: natural, unit-preserving and compatible with every
/// composition defined in both operads.
pub fn is_operad_map(src: &Operad, dst: &Operad, f: &SymSeqMap) -> bool {
    if !f.is_natural(src.seq(), dst.seq()) {
        return false;
    }
    let base = src.base();
    for c in 0..base.colors().color_count() {
        if let (Some(u), Some(v)) = (src.unit(c), dst.unit(c)) {
            if f.components[base.unit_signature(c)][u] != v {
                return false;
            }
        }
    }
    src.table.iter().all(|(&(s, i, x, d, y), &r)| {
        let sd = base.substitute(s, i, d).expect("table entries have valid signatures");
        match dst.compose(s, i, f.components[s][x], d, f.components[d][y]) {
            Some(v) => f.components[sd][r] == v,
            None => true,
        }
    })
}

/// Unit-preserving operad maps `src → dst` agreeing with the given `(signature, element, image)`
/// assignments, at most `limit` of them, found by backtracking with propagation along arrows and
/// compositions.
pub fn operad_maps(src: &Operad, dst: &Operad, fixed: &[(usize, usize, usize)], limit: usize) -> Vec<SymSeqMap> {
    let mut search = MapSearch::new(src, dst);
    let mut out = Vec::new();
    let base = src.base();
    let units: Vec<(usize, usize, usize)> = (0..base.colors().color_count())
        .filter_map(|c| {
            let (u, v) = (src.unit(c)?, dst.unit(c)?);
            Some((base.unit_signature(c), u, v))
        })
        .collect();
    for &(s, x, v) in units.iter().chain(fixed) {
        if v >= dst.size(s) || !search.assign(search.offset[s] + x, v) {
            return out;
        }
    }
    if !search.propagate() {
        return out;
    }
    search.solve(limit, &mut out);
    out
}

/// Number of operad maps `src → dst`.
pub fn count_operad_maps(src: &Operad, dst: &Operad) -> usize {
    operad_maps(src, dst, &[], usize::MAX).len()
}

const UNSET: usize = usize::MAX;

struct MapSearch<'a> {
    src: &'a Operad,
    dst: &'a Operad,
    offset: Vec<usize>,
    var_sig: Vec<usize>,
    comps: Vec<(usize, usize, usize, usize)>,
    by_var: Vec<Vec<usize>>,
    value: Vec<usize>,
    trail: Vec<usize>,
    queue: Vec<usize>,
}

impl<'a> MapSearch<'a> {
    fn new(src: &'a Operad, dst: &'a Operad) -> MapSearch<'a> {
        let base = src.base();
        let mut offset = Vec::with_capacity(base.signature_count());
        let mut var_sig = Vec::new();
        for s in 0..base.signature_count() {
            offset.push(var_sig.len());
            var_sig.extend(std::iter::repeat_n(s, src.size(s)));
        }
        let mut comps = Vec::new();
        let mut by_var = vec![vec![]; var_sig.len()];
        let mut entries: Vec<(&CompKey, &usize)> = src.table.iter().collect();
        entries.sort();
        for (&(s, i, x, d, y), &r) in entries {
            let sd = base.substitute(s, i, d).expect("valid table");
            let (vx, vy, vr) = (offset[s] + x, offset[d] + y, offset[sd] + r);
            let id = comps.len();
            comps.push((vx, i, vy, vr));
            by_var[vx].push(id);
            if vy != vx {
                by_var[vy].push(id);
            }
        }
        let mut search = MapSearch {
            src,
            dst,
            offset,
            var_sig,
            comps,
            by_var,
            value: vec![],
            trail: vec![],
            queue: vec![],
        };
        search.value = vec![UNSET; search.var_sig.len()];
        search
    }

    fn assign(&mut self, var: usize, v: usize) -> bool {
        if self.value[var] != UNSET {
            return self.value[var] == v;
        }
        self.value[var] = v;
        self.trail.push(var);
        self.queue.push(var);
        true
    }

    fn propagate(&mut self) -> bool {
        let base = self.src.base().clone();
        let g = base.groupoid();
        while let Some(var) = self.queue.pop() {
            let s = self.var_sig[var];
            let x = var - self.offset[s];
            let v = self.value[var];
            for &a in g.arrows_from(s) {
                let t = self.offset[g.dst(a)] + self.src.seq().act(a, x);
                if !self.assign(t, self.dst.seq().act(a, v)) {
                    self.queue.clear();
                    return false;
                }
            }
            for k in 0..self.by_var[var].len() {
                let (vx, i, vy, vr) = self.comps[self.by_var[var][k]];
                let (a, b) = (self.value[vx], self.value[vy]);
                if a == UNSET || b == UNSET {
                    continue;
                }
                let (sx, sy) = (self.var_sig[vx], self.var_sig[vy]);
                if let Some(r) = self.dst.compose(sx, i, a, sy, b) {
                    if !self.assign(vr, r) {
                        self.queue.clear();
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, len: usize) {
        while self.trail.len() > len {
            let v = self.trail.pop().expect("nonempty trail");
            self.value[v] = UNSET;
        }
    }

    fn solve(&mut self, limit: usize, out: &mut Vec<SymSeqMap>) {
        if out.len() >= limit {
            return;
        }
        let Some(var) = self.value.iter().position(|&v| v == UNSET) else {
            let base = self.src.base();
            let components = (0..base.signature_count())
                .map(|s| self.value[self.offset[s]..self.offset[s] + self.src.size(s)].to_vec())
                .collect();
            out.push(SymSeqMap { components });
            return;
        };
        let s = self.var_sig[var];
        for v in 0..self.dst.size(s) {
            let mark = self.trail.len();
            if self.assign(var, v) && self.propagate() {
                self.solve(limit, out);
            }
            self.undo(mark);
            if out.len() >= limit {
                return;
            }
        }
    }
}

/// `φ*P`: the operad on C-signatures with `φ*P(C) = P(φC)`.
pub fn pullback_operad(p: &Operad, source_base: Arc<SigmaGroupoid>, color_map: &[usize]) -> Result<Operad> {
    let k = color_change_functor(&source_base, p.base(), color_map)?;
    let seq = p.seq().pullback(source_base.clone(), color_map)?;
    let units = color_map.iter().map(|&d| p.unit(d)).collect();
    let table = full_table(&seq, |s, i, x, d, y, _| {
        p.compose(k.object_map[s], i, x, k.object_map[d], y).expect("target operad is complete")
    });
    Ok(Operad::from_parts(seq, units, table))
}

/// `φ_!O` for an injective color map: `O(C)` at `φC`, a unit at `(d;d)` for colors outside the
/// image, and nothing elsewhere.
pub fn pushforward_operad_injective(o: &Operad, target_base: Arc<SigmaGroupoid>, color_map: &[usize]) -> Result<Operad> {
    let mut seen = vec![false; target_base.colors().color_count()];
    for &d in color_map {
        if std::mem::replace(&mut seen[d], true) {
            return Err(Error::NotInjective);
        }
    }
    let k = color_change_functor(o.base(), &target_base, color_map)?;
    let tg = target_base.groupoid();
    let mut preimage = vec![None; target_base.signature_count()];
    for (s, &t) in k.object_map.iter().enumerate() {
        preimage[t] = Some(s);
    }
    let mut arrow_pre = vec![None; tg.arrow_count()];
    for (a, &b) in k.arrow_map.iter().enumerate() {
        arrow_pre[b] = Some(a);
    }
    let extra_unit = |t: usize| {
        let sig = target_base.signature(t);
        preimage[t].is_none() && sig.arity() == 1 && sig.inputs[0] == sig.output && !seen[sig.output]
    };
    let sizes: Vec<usize> = (0..target_base.signature_count())
        .map(|t| match preimage[t] {
            Some(s) => o.size(s),
            None => usize::from(extra_unit(t)),
        })
        .collect();
    let action = (0..tg.arrow_count())
        .map(|b| match arrow_pre[b] {
            Some(a) => o.seq().functor().action[a].clone(),
            None => vec![0; sizes[tg.src(b)]],
        })
        .collect();
    let seq = SymSeq::new(target_base.clone(), SetValuedFunctor { sizes, action })?;
    let units = (0..target_base.colors().color_count())
        .map(|d| match color_map.iter().position(|&x| x == d) {
            Some(c) => o.unit(c),
            None => (target_base.max_arity() >= 1).then_some(0),
        })
        .collect();
    let table = full_table(&seq, |s, i, x, d, y, _| match (preimage[s], preimage[d]) {
        (Some(a), Some(b)) => o.compose(a, i, x, b, y).expect("source operad is complete"),
        _ => 0,
    });
    Ok(Operad::from_parts(seq, units, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::signature::GSet;

    #[test]
    fn endomorphism_operads_satisfy_the_laws() {
        let base = Arc::new(SigmaGroupoid::new(GSet::single(), 3));
        let end = Operad::endomorphism_following_colors(base.clone(), &[2]).unwrap();
        assert_eq!(end.size(base.index_of(&Signature::new(vec![0, 0], 0)).unwrap()), 16);
        check_operad_laws(&end).unwrap();

        let colors = GSet::new(FiniteGroup::cyclic(2), vec!["a".into(), "b".into()], vec![vec![0, 1], vec![1, 0]]).unwrap();
        let base = Arc::new(SigmaGroupoid::new(colors, 2));
        let end = Operad::endomorphism_following_colors(base, &[2, 2]).unwrap();
        check_operad_laws(&end).unwrap();
    }

    #[test]
    fn broken_table_is_caught() {
        let base = Arc::new(SigmaGroupoid::new(GSet::single(), 2));
        let end = Operad::endomorphism_following_colors(base.clone(), &[2]).unwrap();
        let mut table = end.table().clone();
        let bin = base.index_of(&Signature::new(vec![0, 0], 0)).unwrap();
        let nul = base.index_of(&Signature::new(vec![], 0)).unwrap();
        let key = (bin, 0, 6, nul, 1);
        let v = table[&key];
        table.insert(key, (v + 1) % 4);
        let broken = Operad::from_parts(end.seq().clone(), end.units().to_vec(), table);
        assert!(check_operad_laws(&broken).is_err());
    }

    #[test]
    fn non_equivariant_group_action_is_caught() {
        let colors = GSet::trivial_action(FiniteGroup::cyclic(2), vec!["c".into()]);
        let base = Arc::new(SigmaGroupoid::new(colors, 2));
        let end = Operad::endomorphism_following_colors(base.clone(), &[2]).unwrap();
        // The nontrivial element acts by post-composing with the swap of the two points only.
        let g = base.groupoid();
        let mut functor = end.seq().functor().clone();
        for a in 0..g.arrow_count() {
            let (h, _) = base.arrow_data(a);
            if h != base.group().identity() {
                let dom = 1usize << base.signature(g.src(a)).arity();
                let mask = (1usize << dom) - 1;
                for v in functor.action[a].iter_mut() {
                    *v ^= mask;
                }
            }
        }
        let seq = SymSeq::new(base, functor).unwrap();
        let twisted = Operad::from_parts(seq, end.units().to_vec(), end.table().clone());
        let err = check_operad_laws(&twisted).unwrap_err();
        assert_eq!(err.law, "equivariance in the group");
    }

    #[test]
    fn trivial_operads_and_maps() {
        let base = Arc::new(SigmaGroupoid::new(GSet::single(), 3));
        let init = Operad::initial(base.clone());
        let term = Operad::terminal(base.clone());
        check_operad_laws(&init).unwrap();
        check_operad_laws(&term).unwrap();
        assert_eq!(operad_maps(&init, &term, &[], 10).len(), 1);
        let end = Operad::endomorphism_following_colors(base.clone(), &[2]).unwrap();
        // Maps from the terminal operad into End(2) are commutative monoid structures with a
        // nullary element on a 2-element set compatible with all arities, i.e. idempotent ones.
        let maps = operad_maps(&term, &end, &[], 100);
        for f in &maps {
            assert!(is_operad_map(&term, &end, f));
        }
        assert!(!maps.is_empty());
    }

    #[test]
    fn eval_matches_table() {
        let base = Arc::new(SigmaGroupoid::new(GSet::single(), 3));
        let end = Operad::endomorphism_following_colors(base.clone(), &[2]).unwrap();
        let bin = base.index_of(&Signature::new(vec![0, 0], 0)).unwrap();
        let t = ColoredTree::node(0, vec![ColoredTree::stick(0), ColoredTree::corolla(&Signature::new(vec![0, 0], 0))]);
        let got = end.eval_tree(&t, &[6, 9]).unwrap().unwrap();
        let ter = base.index_of(&Signature::new(vec![0; 3], 0)).unwrap();
        assert_eq!(Some(got), end.compose(bin, 1, 6, bin, 9));
        assert!(got < end.size(ter));
    }
}
