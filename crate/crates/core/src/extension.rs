//! Free operad extensions `O[u]`: the pushout of `𝔽Y ← 𝔽X → O` for `u: X → Y` and `α: X → O`.
//!
//! Elements are alternating terms: active vertices labelled by `O`, inert vertices labelled by
//! `Y`, with the root and every vertex next to a leaf active. Stage `k` of the filtration uses
//! terms with at most `k` inert vertices; a term in which some inert labels come from `X`
//! identifies its image under `u` with its collapse, where `α` turns those vertices active and
//! adjacent active vertices are composed in `O`.

use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use crate::colimit::{LabelKind, Relabel, Rewriter, TreeColimit};
use crate::error::{Error, Result};
use crate::functor::SetValuedFunctor;
use crate::operad::{signatures_by_output, CompKey, Operad};
use crate::signature::SigmaGroupoid;
use crate::symseq::{same_base, symseq_hom_set, SymSeq, SymSeqMap};
use crate::term::{PlanarTerm, Term, TermAlgebra};
use crate::unionfind::UnionFind;

const ACTIVE: usize = 0;
const GENERATOR: usize = 1;
const ATTACHED: usize = 2;

/// A map of finite sets `{0..domain} → {0..codomain}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetMap {
    pub codomain: usize,
    pub images: Vec<usize>,
}

impl SetMap {
    pub fn new(codomain: usize, images: Vec<usize>) -> Result<SetMap> {
        if let Some(&bad) = images.iter().find(|&&y| y >= codomain) {
            return Err(Error::OutOfRange(format!("image {bad} of a map into {codomain} elements")));
        }
        Ok(SetMap { codomain, images })
    }

    pub fn identity(n: usize) -> SetMap {
        SetMap { codomain: n, images: (0..n).collect() }
    }

    pub fn domain(&self) -> usize {
        self.images.len()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain];
        self.images.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.domain() == self.codomain && self.is_injective()
    }
}

/// A source element of a pushout-product, named by a representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PushoutElement {
    /// `(a, d) ∈ A × D`.
    Left(usize, usize),
    /// `(b, c) ∈ B × C`.
    Right(usize, usize),
}

/// `f □ g`: the map from `A×D ⊔_{A×C} B×C` to `B×D`, with `(b, d)` encoded as `b·|D| + d`.
#[derive(Clone, Debug)]
pub struct PushoutProduct {
    pub map: SetMap,
    pub source: Vec<PushoutElement>,
}

/// The pushout-product of `f: A → B` and `g: C → D`.
pub fn pushout_product(f: &SetMap, g: &SetMap) -> PushoutProduct {
    let (a, b, c, d) = (f.domain(), f.codomain, g.domain(), g.codomain);
    let mut uf = UnionFind::new(a * d + b * c);
    for x in 0..a {
        for z in 0..c {
            uf.union(x * d + g.images[z], a * d + f.images[x] * c + z);
        }
    }
    let (labels, count) = uf.classes();
    let mut source = vec![PushoutElement::Left(0, 0); count];
    let mut images = vec![0; count];
    for i in (0..a * d + b * c).rev() {
        let (elem, image) = if i < a * d {
            let (x, w) = (i / d, i % d);
            (PushoutElement::Left(x, w), f.images[x] * d + w)
        } else {
            let j = i - a * d;
            let (y, z) = (j / c, j % c);
            (PushoutElement::Right(y, z), y * d + g.images[z])
        };
        source[labels[i]] = elem;
        images[labels[i]] = image;
    }
    PushoutProduct { map: SetMap { codomain: b * d, images }, source }
}

/// `f^□n` built as the quotient of tuples over `A ⊔ B` with at least one `A` entry, where an
/// `A` entry may be replaced by its image when another `A` entry remains. Tuples are encoded with
/// `A` entries as `0..|A|` and `B` entries as `|A|..|A|+|B|`.
#[derive(Clone, Debug)]
pub struct PushoutPower {
    pub map: SetMap,
    /// A representative tuple per source element.
    pub source: Vec<Vec<usize>>,
    class: HashMap<Vec<usize>, usize>,
    b: usize,
}

impl PushoutPower {
    pub fn new(f: &SetMap, n: usize) -> PushoutPower {
        let (a, b) = (f.domain(), f.codomain);
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            tuples = tuples.into_iter().flat_map(|t| (0..a + b).map(move |v| [t.clone(), vec![v]].concat())).collect();
        }
        tuples.retain(|t| t.iter().any(|&v| v < a));
        let pos: HashMap<Vec<usize>, usize> = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let mut uf = UnionFind::new(tuples.len());
        for (i, t) in tuples.iter().enumerate() {
            if t.iter().filter(|&&v| v < a).count() < 2 {
                continue;
            }
            for j in 0..n {
                if t[j] < a {
                    let mut s = t.clone();
                    s[j] = a + f.images[t[j]];
                    uf.union(i, pos[&s]);
                }
            }
        }
        let (labels, count) = uf.classes();
        let mut source = vec![vec![]; count];
        let mut images = vec![0; count];
        for (i, t) in tuples.iter().enumerate().rev() {
            source[labels[i]] = t.clone();
            images[labels[i]] = t.iter().fold(0, |acc, &v| acc * b + if v < a { f.images[v] } else { v - a });
        }
        let class = tuples.into_iter().zip(labels).collect();
        PushoutPower { map: SetMap { codomain: b.pow(n as u32), images }, source, class, b }
    }

    /// The action of a permutation of factors on the source: entry `i` moves to position `σ(i)`.
    pub fn permute_source(&self, sigma: &crate::perm::Perm) -> SetMap {
        let images = self
            .source
            .iter()
            .map(|t| {
                let mut s = t.clone();
                for (i, &v) in t.iter().enumerate() {
                    s[sigma.apply(i)] = v;
                }
                self.class[&s]
            })
            .collect();
        SetMap { codomain: self.source.len(), images }
    }

    /// The same action on the target `B^n`.
    pub fn permute_target(&self, sigma: &crate::perm::Perm) -> SetMap {
        let n = sigma.len();
        let images = (0..self.map.codomain)
            .map(|code| {
                let mut digits = vec![0; n];
                let mut r = code;
                for d in digits.iter_mut().rev() {
                    *d = r % self.b;
                    r /= self.b;
                }
                let mut moved = vec![0; n];
                for (i, &v) in digits.iter().enumerate() {
                    moved[sigma.apply(i)] = v;
                }
                moved.iter().fold(0, |acc, &v| acc * self.b + v)
            })
            .collect();
        SetMap { codomain: self.map.codomain, images }
    }
}

/// Data for attaching generators: an operad `O`, a map `u: X → Y` and an attaching map
/// `α: X → O`, with at most `bound` inert vertices per term.
#[derive(Clone, Debug)]
pub struct ExtensionProblem {
    pub operad: Operad,
    pub source: SymSeq,
    pub target: SymSeq,
    pub attachment: SymSeqMap,
    pub attaching_map: SymSeqMap,
    pub bound: usize,
}

impl ExtensionProblem {
    pub fn new(
        operad: Operad,
        source: SymSeq,
        target: SymSeq,
        attachment: SymSeqMap,
        attaching_map: SymSeqMap,
        bound: usize,
    ) -> Result<ExtensionProblem> {
        let base = operad.base();
        if !same_base(base, source.base()) || !same_base(base, target.base()) {
            return Err(Error::InvalidAction("operad, source and target need one base".into()));
        }
        if base.max_arity() == 0 || (0..base.colors().color_count()).any(|c| operad.unit(c).is_none()) {
            return Err(Error::InvalidAction("the operad needs a unit for every color".into()));
        }
        let shape_ok = |m: &SymSeqMap, src: &SymSeq, dst: &SymSeq| {
            m.components.len() == base.signature_count()
                && m.components.iter().enumerate().all(|(s, c)| c.len() == src.size(s) && c.iter().all(|&v| v < dst.size(s)))
        };
        if !shape_ok(&attachment, &source, &target) || !attachment.is_natural(&source, &target) {
            return Err(Error::InvalidAction("u is not a natural map X → Y".into()));
        }
        if !shape_ok(&attaching_map, &source, operad.seq()) || !attaching_map.is_natural(&source, operad.seq()) {
            return Err(Error::InvalidAction("α is not a natural map X → O".into()));
        }
        Ok(ExtensionProblem { operad, source, target, attachment, attaching_map, bound })
    }

    /// Attaching `Y` freely: `X = ∅`.
    pub fn free(operad: Operad, target: SymSeq, bound: usize) -> Result<ExtensionProblem> {
        let base = operad.base().clone();
        let source = SymSeq::empty(base.clone());
        let empty = SymSeqMap { components: vec![vec![]; base.signature_count()] };
        ExtensionProblem::new(operad, source, target, empty.clone(), empty, bound)
    }

    pub fn base(&self) -> &Arc<SigmaGroupoid> {
        self.operad.base()
    }

    /// The same problem with only the Σ-actions.
    pub fn forget_group(&self) -> ExtensionProblem {
        let base = self.base();
        let forgotten = Arc::new(SigmaGroupoid::new(base.colors().forget_group(), base.max_arity()));
        ExtensionProblem {
            operad: self.operad.forget_group_to(&forgotten),
            source: self.source.forget_group_to(&forgotten),
            target: self.target.forget_group_to(&forgotten),
            attachment: self.attachment.clone(),
            attaching_map: self.attaching_map.clone(),
            bound: self.bound,
        }
    }

    fn algebra(&self) -> TermAlgebra<'_> {
        TermAlgebra::new(self.base(), vec![self.operad.seq(), &self.target, &self.source])
    }
}

/// One stage `O_k` of the filtration with the map from `O_{k-1}`.
#[derive(Clone, Debug)]
pub struct FiltrationStage {
    pub k: usize,
    pub value: SymSeq,
    pub map_from_previous: Option<SymSeqMap>,
}

/// The computed extension: stages, the resulting operad and the canonical maps into it.
#[derive(Clone, Debug)]
pub struct Extension {
    pub operad: Operad,
    pub stages: Vec<FiltrationStage>,
    /// No alternating term with more than `bound` inert vertices fits the arity range.
    pub stabilized: bool,
    /// The least alternating term of each class.
    pub representatives: Vec<Vec<Term>>,
    pub include_operad: SymSeqMap,
    pub include_generators: Option<SymSeqMap>,
    /// Largest number of non-unit active plus attached vertices over the terms used; a budget
    /// under which the labelled-tree colimit sees every identification made here.
    pub active_budget: usize,
    terms: Vec<Vec<Term>>,
    index: Vec<HashMap<Term, usize>>,
    class: Vec<Vec<usize>>,
}

impl Extension {
    pub fn compute(problem: &ExtensionProblem) -> Result<Extension> {
        Builder { problem, alg: problem.algebra() }.run()
    }

    /// Alternating terms with generator labels at a signature, in (inert count, term) order.
    pub fn terms(&self, s: usize) -> &[Term] {
        &self.terms[s]
    }

    /// Class of an alternating term.
    pub fn class_of(&self, s: usize, t: &Term) -> Option<usize> {
        self.index[s].get(t).map(|&i| self.class[s][i])
    }

    /// Sizes of `O[u]` summed over signatures of each arity.
    pub fn level_counts(&self) -> Vec<(usize, usize)> {
        level_counts(self.operad.seq())
    }
}

/// Total size of a sequence at each arity.
pub fn level_counts(seq: &SymSeq) -> Vec<(usize, usize)> {
    let base = seq.base();
    (0..=base.max_arity()).map(|n| (n, base.of_arity(n).map(|s| seq.size(s)).sum())).collect()
}

#[derive(Clone)]
struct AltTerm {
    term: Term,
    leaf_colors: Vec<usize>,
    inert: usize,
}

struct AltGenerator<'a> {
    base: &'a SigmaGroupoid,
    kinds: [&'a SymSeq; 3],
    with_attached: bool,
    max_leaves: usize,
    memo: HashMap<(bool, usize, usize), Rc<Vec<AltTerm>>>,
}

impl AltGenerator<'_> {
    /// Alternating subterms rooted at an active (or inert) vertex with output `color`.
    fn rooted(&mut self, active: bool, color: usize, budget: usize) -> Rc<Vec<AltTerm>> {
        if let Some(r) = self.memo.get(&(active, color, budget)) {
            return r.clone();
        }
        let mut out = Vec::new();
        if active || budget > 0 {
            let kinds: &[usize] = match (active, self.with_attached) {
                (true, _) => &[ACTIVE],
                (false, false) => &[GENERATOR],
                (false, true) => &[GENERATOR, ATTACHED],
            };
            let rest = if active { budget } else { budget - 1 };
            for &kind in kinds {
                for s in 0..self.base.signature_count() {
                    let sig = self.base.signature(s);
                    let size = self.kinds[kind].size(s);
                    if sig.output != color || size == 0 {
                        continue;
                    }
                    let inputs = sig.inputs.clone();
                    for (children, leaves, inert) in self.children(active, &inputs, rest) {
                        for x in 0..size {
                            out.push(AltTerm {
                                term: Term::Node { kind, sig: s, elem: x, children: children.clone() },
                                leaf_colors: leaves.clone(),
                                inert: inert + usize::from(!active),
                            });
                        }
                    }
                }
            }
        }
        let rc = Rc::new(out);
        self.memo.insert((active, color, budget), rc.clone());
        rc
    }

    fn children(&mut self, parent_active: bool, inputs: &[usize], budget: usize) -> Vec<(Vec<Term>, Vec<usize>, usize)> {
        let max_leaves = self.max_leaves;
        let mut partial: Vec<(Vec<Term>, Vec<usize>, usize)> = vec![(vec![], vec![], 0)];
        for &c in inputs {
            let mut next = Vec::new();
            for (terms, leaves, used) in &partial {
                let options = self.rooted(!parent_active, c, budget - used);
                let mut push = |t: Term, l: &[usize], k: usize| {
                    if leaves.len() + l.len() <= max_leaves {
                        let off = leaves.len();
                        let mut ts = terms.clone();
                        ts.push(t.relabel(&|i| i + off));
                        let mut ls = leaves.clone();
                        ls.extend_from_slice(l);
                        next.push((ts, ls, used + k));
                    }
                };
                if parent_active {
                    push(Term::Leaf(0), &[c], 0);
                }
                for o in options.iter() {
                    push(o.term.clone(), &o.leaf_colors, o.inert);
                }
            }
            partial = next;
        }
        partial
    }
}

struct Builder<'a> {
    problem: &'a ExtensionProblem,
    alg: TermAlgebra<'a>,
}

impl<'a> Builder<'a> {
    fn op(&self) -> &'a Operad {
        &self.problem.operad
    }

    fn generate(&self, with_attached: bool, budget: usize) -> HashMap<usize, Vec<Term>> {
        let base = self.problem.base();
        let mut gen = AltGenerator {
            base,
            kinds: [self.op().seq(), &self.problem.target, &self.problem.source],
            with_attached,
            max_leaves: base.max_arity(),
            memo: HashMap::new(),
        };
        let mut planar = Vec::new();
        for c in 0..base.colors().color_count() {
            for t in gen.rooted(true, c, budget).iter() {
                planar.push(PlanarTerm {
                    term: t.term.clone(),
                    root_color: c,
                    leaf_colors: t.leaf_colors.clone(),
                    usage: vec![t.inert],
                });
            }
        }
        self.alg.close_under_relabeling(&planar)
    }

    /// Composes every maximal region of adjacent active vertices.
    fn merge(&self, t: &Term) -> Option<Term> {
        let Term::Node { sig, .. } = t else { return Some(t.clone()) };
        let color = self.alg.base.signature(*sig).output;
        let mut boundary = Vec::new();
        let region = region(t, &mut boundary);
        let (rs, x) = self.op().eval_term(&region, color)?;
        let children = boundary
            .into_iter()
            .map(|b| match b {
                Term::Leaf(i) => Some(Term::Leaf(i)),
                Term::Node { kind, sig, elem, children } => Some(Term::Node {
                    kind,
                    sig,
                    elem,
                    children: children.iter().map(|c| self.merge(c)).collect::<Option<Vec<_>>>()?,
                }),
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Term::Node { kind: ACTIVE, sig: rs, elem: x, children })
    }

    fn collapse(&self, piece: &Term) -> Option<Term> {
        let alpha = &self.problem.attaching_map;
        let t = piece.map_labels(&|k, s, x| if k == ATTACHED { (ACTIVE, s, alpha.components[s][x]) } else { (k, s, x) });
        Some(self.alg.canonicalize(&self.merge(&t)?))
    }

    fn push_forward(&self, piece: &Term) -> Term {
        let u = &self.problem.attachment;
        self.alg.canonicalize(&piece.map_labels(&|k, s, x| {
            if k == ATTACHED {
                (GENERATOR, s, u.components[s][x])
            } else {
                (k, s, x)
            }
        }))
    }

    fn run(&self) -> Result<Extension> {
        let problem = self.problem;
        let base = problem.base().clone();
        let bound = problem.bound;
        let mut all = self.generate(true, bound);
        let n_sig = base.signature_count();
        let counts = |t: &Term| t.kind_counts(3);
        let mut terms: Vec<Vec<Term>> = Vec::with_capacity(n_sig);
        let mut pieces: Vec<Vec<Term>> = Vec::with_capacity(n_sig);
        let mut active_budget = 0;
        for s in 0..n_sig {
            let list = all.remove(&s).unwrap_or_default();
            let (mut p, mut t): (Vec<Term>, Vec<Term>) = list.into_iter().partition(|t| counts(t)[ATTACHED] > 0);
            for x in p.iter().chain(&t) {
                let mut non_unit = counts(x)[ATTACHED];
                x.visit(&mut |n| {
                    if let Term::Node { kind: ACTIVE, sig, elem, .. } = n {
                        let sg = base.signature(*sig);
                        let unit = sg.arity() == 1 && sg.inputs[0] == sg.output && self.op().unit(sg.output) == Some(*elem);
                        non_unit += usize::from(!unit);
                    }
                });
                active_budget = active_budget.max(non_unit);
            }
            let inert = |t: &Term| {
                let c = counts(t);
                c[GENERATOR] + c[ATTACHED]
            };
            t.sort_by_cached_key(|x| (inert(x), x.clone()));
            p.sort_by_cached_key(|x| (inert(x), x.clone()));
            terms.push(t);
            pieces.push(p);
        }
        let index: Vec<HashMap<Term, usize>> =
            terms.iter().map(|ts| ts.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()).collect();
        let inert_of = |t: &Term| {
            let c = t.kind_counts(3);
            c[GENERATOR] + c[ATTACHED]
        };

        // Arrow action on terms, shared by every stage.
        let g = base.groupoid();
        let term_action: Vec<Vec<usize>> = (0..g.arrow_count())
            .map(|a| {
                let (h, sigma) = base.arrow_data(a);
                let dst = g.dst(a);
                terms[g.src(a)]
                    .iter()
                    .map(|t| {
                        let moved = self.alg.act(h, sigma, t);
                        *index[dst].get(&moved).expect("alternating terms are closed under the action")
                    })
                    .collect()
            })
            .collect();

        let mut ufs: Vec<UnionFind> = terms.iter().map(|t| UnionFind::new(t.len())).collect();
        let mut stages: Vec<FiltrationStage> = Vec::new();
        let mut prev_labels: Option<Vec<Vec<usize>>> = None;
        let mut labels_k: Vec<Vec<usize>> = vec![];
        for k in 0..=bound {
            for s in 0..n_sig {
                for p in pieces[s].iter().filter(|p| inert_of(p) == k) {
                    let img = self.push_forward(p);
                    let col = self
                        .collapse(p)
                        .ok_or_else(|| Error::BoundExceeded(format!("collapse leaves the arity range at {}", base.name(s))))?;
                    let (Some(&i), Some(&j)) = (index[s].get(&img), index[s].get(&col)) else {
                        return Err(Error::BoundExceeded(format!("relation outside the enumerated terms at {}", base.name(s))));
                    };
                    ufs[s].union(i, j);
                }
            }
            // Classes of terms with at most k inert vertices, numbered by first member.
            let present: Vec<usize> = terms.iter().map(|ts| ts.iter().take_while(|t| inert_of(t) <= k).count()).collect();
            labels_k = (0..n_sig)
                .map(|s| {
                    let mut of_root: HashMap<usize, usize> = HashMap::new();
                    (0..present[s])
                        .map(|i| {
                            let r = ufs[s].find(i);
                            let next = of_root.len();
                            *of_root.entry(r).or_insert(next)
                        })
                        .collect()
                })
                .collect();
            let sizes: Vec<usize> = labels_k.iter().map(|l| l.iter().copied().max().map_or(0, |m| m + 1)).collect();
            let firsts: Vec<Vec<usize>> = (0..n_sig)
                .map(|s| {
                    let mut f = vec![usize::MAX; sizes[s]];
                    for (i, &c) in labels_k[s].iter().enumerate() {
                        if f[c] == usize::MAX {
                            f[c] = i;
                        }
                    }
                    f
                })
                .collect();
            let action = (0..g.arrow_count())
                .map(|a| {
                    let (src, dst) = (g.src(a), g.dst(a));
                    firsts[src].iter().map(|&i| labels_k[dst][term_action[a][i]]).collect()
                })
                .collect();
            let value = SymSeq::new(base.clone(), SetValuedFunctor { sizes, action })?;
            let map_from_previous = prev_labels.as_ref().map(|prev| SymSeqMap {
                components: (0..n_sig)
                    .map(|s| {
                        let mut m = vec![0; stages.last().map_or(0, |st: &FiltrationStage| st.value.size(s))];
                        for (i, &c) in prev[s].iter().enumerate() {
                            m[c] = labels_k[s][i];
                        }
                        m
                    })
                    .collect(),
            });
            stages.push(FiltrationStage { k, value, map_from_previous });
            prev_labels = Some(labels_k.clone());
        }

        let final_seq = stages.last().expect("stage 0 exists").value.clone();
        let representatives: Vec<Vec<Term>> = (0..n_sig)
            .map(|s| {
                let mut reps: Vec<Option<Term>> = vec![None; final_seq.size(s)];
                for (i, &c) in labels_k[s].iter().enumerate() {
                    if reps[c].is_none() {
                        reps[c] = Some(terms[s][i].clone());
                    }
                }
                reps.into_iter().map(|r| r.expect("every class has a member")).collect()
            })
            .collect();
        let class: Vec<Vec<usize>> = labels_k;
        let class_of = |s: usize, t: &Term| index[s].get(t).map(|&i| class[s][i]);

        let by_output = signatures_by_output(&base);
        let mut table: HashMap<CompKey, usize> = HashMap::new();
        for s in 0..n_sig {
            let sig = base.signature(s);
            for i in 0..sig.arity() {
                for &d in &by_output[sig.inputs[i]] {
                    let Some(r) = base.substitute(s, i, d) else { continue };
                    let m = base.signature(d).arity();
                    for (x, tx) in representatives[s].iter().enumerate() {
                        for (y, ty) in representatives[d].iter().enumerate() {
                            let grafted = self.alg.graft(tx, i, ty, m);
                            let Some(merged) = self.merge(&grafted) else { continue };
                            if let Some(c) = class_of(r, &self.alg.canonicalize(&merged)) {
                                table.insert((s, i, x, d, y), c);
                            }
                        }
                    }
                }
            }
        }
        let colors = base.colors().color_count();
        let units: Vec<Option<usize>> = (0..colors)
            .map(|c| {
                let u = base.unit_signature(c);
                class_of(u, &Term::corolla(ACTIVE, u, self.op().unit(c)?, 1))
            })
            .collect();
        let include_operad = SymSeqMap {
            components: (0..n_sig)
                .map(|s| {
                    let n = base.signature(s).arity();
                    (0..self.op().size(s))
                        .map(|x| class_of(s, &Term::corolla(ACTIVE, s, x, n)).expect("corollas are alternating terms"))
                        .collect()
                })
                .collect(),
        };
        let include_generators = (bound >= 1)
            .then(|| {
                let comps: Option<Vec<Vec<usize>>> = (0..n_sig)
                    .map(|s| {
                        (0..problem.target.size(s))
                            .map(|y| class_of(s, &self.alg.canonicalize(&self.generator_term(s, y))))
                            .collect::<Option<Vec<usize>>>()
                    })
                    .collect();
                comps.map(|components| SymSeqMap { components })
            })
            .flatten();

        let stabilized = {
            let over = self.generate(false, bound + 1);
            !over.values().flatten().any(|t| inert_of(t) > bound)
        };
        let operad = Operad::from_parts(final_seq, units, table);
        Ok(Extension {
            operad,
            stages,
            stabilized,
            representatives,
            include_operad,
            include_generators,
            active_budget,
            terms,
            index,
            class,
        })
    }

    /// A generator `y` between unit vertices.
    fn generator_term(&self, s: usize, y: usize) -> Term {
        let base = self.alg.base;
        let sig = base.signature(s);
        let unit = |c: usize| self.op().unit(c).expect("validated units");
        let children = sig
            .inputs
            .iter()
            .enumerate()
            .map(|(i, &c)| Term::Node { kind: ACTIVE, sig: base.unit_signature(c), elem: unit(c), children: vec![Term::Leaf(i)] })
            .collect();
        Term::Node {
            kind: ACTIVE,
            sig: base.unit_signature(sig.output),
            elem: unit(sig.output),
            children: vec![Term::Node { kind: GENERATOR, sig: s, elem: y, children }],
        }
    }
}

/// The active region below `t` with its boundary (leaves and inert subterms) replaced by leaves
/// numbered in planar order.
fn region(t: &Term, boundary: &mut Vec<Term>) -> Term {
    match t {
        Term::Node { kind: ACTIVE, sig, elem, children } => Term::Node {
            kind: ACTIVE,
            sig: *sig,
            elem: *elem,
            children: children
                .iter()
                .map(|c| match c {
                    Term::Node { kind: ACTIVE, .. } => region(c, boundary),
                    _ => {
                        boundary.push(c.clone());
                        Term::Leaf(boundary.len() - 1)
                    }
                })
                .collect(),
        },
        _ => unreachable!("regions start at active vertices"),
    }
}

/// The extension as a colimit over all `{O, X, Y}`-labelled trees with at most `active_budget`
/// operad vertices and `problem.bound` vertices labelled by `X` or `Y`.
pub fn oracle_extension(problem: &ExtensionProblem, active_budget: usize) -> TreeColimit {
    let kinds = oracle_kinds(problem);
    let relabels = oracle_relabels(problem);
    TreeColimit::compute(problem.base(), &kinds, &relabels, &[active_budget, problem.bound])
}

fn oracle_kinds(problem: &ExtensionProblem) -> [LabelKind<'_>; 3] {
    [
        LabelKind { seq: problem.operad.seq(), operad: Some(&problem.operad), group: 0 },
        LabelKind { seq: &problem.target, operad: None, group: 1 },
        LabelKind { seq: &problem.source, operad: None, group: 1 },
    ]
}

fn oracle_relabels(problem: &ExtensionProblem) -> [Relabel<'_>; 2] {
    [
        Relabel { from: ATTACHED, to: GENERATOR, map: &problem.attachment },
        Relabel { from: ATTACHED, to: ACTIVE, map: &problem.attaching_map },
    ]
}

/// Outcome of comparing the filtration with the labelled-tree colimit.
#[derive(Clone, Debug)]
pub struct OracleComparison {
    pub agrees: bool,
    pub filtration_sizes: Vec<usize>,
    pub oracle_sizes: Vec<usize>,
    pub mismatch: Option<String>,
}

/// Checks that sending each alternating term to its class in the colimit is a well-defined
/// bijection at every signature.
pub fn compare_with_oracle(problem: &ExtensionProblem, ext: &Extension) -> OracleComparison {
    let oracle = oracle_extension(problem, ext.active_budget);
    let base = problem.base();
    let kinds = oracle_kinds(problem);
    let relabels = oracle_relabels(problem);
    let rw = Rewriter::new(base, &kinds, &relabels);
    let mut mismatch = None;
    'sigs: for s in 0..base.signature_count() {
        let mut to_oracle = vec![None; ext.operad.size(s)];
        let mut hit = vec![false; oracle.size(s)];
        for t in ext.terms(s) {
            let c = ext.class_of(s, t).expect("term has a class");
            let Some(o) = oracle.class_of(s, &rw.normalize(t)) else {
                mismatch = Some(format!("{}: a term lies outside the colimit budgets", base.name(s)));
                break 'sigs;
            };
            match to_oracle[c] {
                None => {
                    if hit[o] {
                        mismatch = Some(format!("{}: two classes meet in the colimit", base.name(s)));
                        break 'sigs;
                    }
                    to_oracle[c] = Some(o);
                    hit[o] = true;
                }
                Some(prev) if prev != o => {
                    mismatch = Some(format!("{}: one class splits in the colimit", base.name(s)));
                    break 'sigs;
                }
                Some(_) => {}
            }
        }
        if hit.iter().any(|h| !h) {
            mismatch = Some(format!("{}: a colimit class has no alternating representative", base.name(s)));
            break;
        }
    }
    OracleComparison {
        agrees: mismatch.is_none(),
        filtration_sizes: ext.operad.seq().sizes().to_vec(),
        oracle_sizes: oracle.sizes().to_vec(),
        mismatch,
    }
}

/// Both sides of the pushout property for one target operad.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalPropertyReport {
    pub maps_from_extension: usize,
    pub compatible_pairs: usize,
    pub restriction_injective: bool,
    pub holds: bool,
}

/// Compares operad maps `O[u] → P` with pairs of an operad map `f: O → P` and a natural map
/// `g: Y → P` satisfying `f ∘ α = g ∘ u`, through restriction along the two inclusions.
pub fn check_universal_property(problem: &ExtensionProblem, ext: &Extension, target: &Operad) -> UniversalPropertyReport {
    let from_ext = crate::operad::operad_maps(&ext.operad, target, &[], usize::MAX);
    let from_o = crate::operad::operad_maps(&problem.operad, target, &[], usize::MAX);
    let from_y = symseq_hom_set(&problem.target, target.seq(), usize::MAX);
    let compose = |a: &SymSeqMap, b: &SymSeqMap| a.then(b);
    let mut pairs = std::collections::HashSet::new();
    for f in &from_o {
        let left = compose(&problem.attaching_map, f);
        for g in &from_y {
            if compose(&problem.attachment, g) == left {
                pairs.insert((f.clone().components, g.clone().components));
            }
        }
    }
    let mut restrictions = std::collections::HashSet::new();
    let mut all_compatible = true;
    for h in &from_ext {
        let f = compose(&ext.include_operad, h);
        let g = match &ext.include_generators {
            Some(iy) => compose(iy, h),
            None => SymSeqMap { components: vec![vec![]; problem.base().signature_count()] },
        };
        all_compatible &= pairs.contains(&(f.components.clone(), g.components.clone()));
        restrictions.insert((f.components, g.components));
    }
    let restriction_injective = restrictions.len() == from_ext.len();
    UniversalPropertyReport {
        maps_from_extension: from_ext.len(),
        compatible_pairs: pairs.len(),
        restriction_injective,
        holds: restriction_injective && all_compatible && from_ext.len() == pairs.len(),
    }
}

/// A pushout of operads along an injective color map: `A → B` over colors `C`, an operad `O`
/// over `D ⊇ C`, and `f: A → φ*O` (elements of `O` at `φ` of each signature).
#[derive(Clone, Debug)]
pub struct ColorChangeInstance {
    pub small: Arc<SigmaGroupoid>,
    pub large: Arc<SigmaGroupoid>,
    pub color_map: Vec<usize>,
    pub a: Operad,
    pub b: Operad,
    pub g: SymSeqMap,
    pub o: Operad,
    pub f: SymSeqMap,
    /// Vertex budgets for the `O`, `A` and `B` labels.
    pub budgets: [usize; 3],
}

impl ColorChangeInstance {
    /// A two-color example: colors `{a}` inside `{a, b}` up to arity `max_arity`, with `O` the
    /// commutative operad on both colors. With `local_iso` false, `A` is initial and `B`
    /// commutative; otherwise `A` is commutative, `f` is the identity and `B` is the endomorphism
    /// operad of a two-element set restricted to positive arity. `B` gets one more vertex than
    /// `budget` so that a term with an `O` vertex between `B` vertices can be relabelled to `B`.
    pub fn example(local_iso: bool, max_arity: usize, budget: usize) -> Result<ColorChangeInstance> {
        use crate::group::FiniteGroup;
        use crate::signature::GSet;
        let large = Arc::new(SigmaGroupoid::new(
            GSet::trivial_action(FiniteGroup::trivial(), vec!["a".into(), "b".into()]),
            max_arity,
        ));
        let small = Arc::new(SigmaGroupoid::new(GSet::trivial_action(FiniteGroup::trivial(), vec!["a".into()]), max_arity));
        let o = Operad::commutative(large.clone());
        let (a, b) = if local_iso {
            (Operad::commutative(small.clone()), Operad::endomorphism_following_colors(small.clone(), &[2])?.positive_part())
        } else {
            (Operad::initial(small.clone()), Operad::commutative(small.clone()))
        };
        let first_map = |src: &Operad, dst: &Operad| {
            crate::operad::operad_maps(src, dst, &[], usize::MAX)
                .pop()
                .ok_or_else(|| Error::InvalidAction("no operad map between the example operads".into()))
        };
        let g = first_map(&a, &b)?;
        let small_o = crate::operad::pullback_operad(&o, small.clone(), &[0])?;
        let f = first_map(&a, &small_o)?;
        Ok(ColorChangeInstance { small, large, color_map: vec![0], a, b, g, o, f, budgets: [budget, budget, budget + 1] })
    }
}

#[derive(Clone, Debug)]
pub struct ColorChangeReport {
    /// `φ*(O ⊔_{φ_!A} φ_!B)` and `φ*O ⊔_A B` agree through the canonical map.
    pub agrees: bool,
    pub small_sizes: Vec<usize>,
    pub restricted_sizes: Vec<usize>,
    /// Whether `f: A → φ*O` is bijective at every signature.
    pub local_iso_hypothesis: bool,
    /// Whether `B → φ*P` is bijective at every signature.
    pub local_iso_conclusion: bool,
    pub mismatch: Option<String>,
}

/// Computes the pushout over `D` and restricts it to `C`, computes the pushout of the restricted
/// data over `C`, and compares them through the map sending a `C`-term to its image.
pub fn check_injective_colorchange_pushout(inst: &ColorChangeInstance) -> Result<ColorChangeReport> {
    use crate::operad::{pullback_operad, pushforward_operad_injective};
    use crate::symseq::color_change_functor;
    let phi = color_change_functor(&inst.small, &inst.large, &inst.color_map)?;
    let small_o = pullback_operad(&inst.o, inst.small.clone(), &inst.color_map)?;
    let pushed_a = pushforward_operad_injective(&inst.a, inst.large.clone(), &inst.color_map)?;
    let pushed_b = pushforward_operad_injective(&inst.b, inst.large.clone(), &inst.color_map)?;
    let mut pre = vec![None; inst.large.signature_count()];
    for (s, &t) in phi.object_map.iter().enumerate() {
        pre[t] = Some(s);
    }
    // Maps out of φ_!A: through the given maps on the image, unit to unit elsewhere.
    let extend = |m: &SymSeqMap, target: &Operad| SymSeqMap {
        components: (0..inst.large.signature_count())
            .map(|t| match pre[t] {
                Some(s) => m.components[s].clone(),
                None => {
                    let sig = inst.large.signature(t);
                    (0..pushed_a.size(t)).map(|_| target.unit(sig.output).expect("units")).collect()
                }
            })
            .collect(),
    };
    let f_large = extend(&inst.f, &inst.o);
    let g_large = extend(&inst.g, &pushed_b);
    let large_kinds = [
        LabelKind { seq: inst.o.seq(), operad: Some(&inst.o), group: 0 },
        LabelKind { seq: pushed_a.seq(), operad: Some(&pushed_a), group: 1 },
        LabelKind { seq: pushed_b.seq(), operad: Some(&pushed_b), group: 2 },
    ];
    let large_rel = [Relabel { from: 1, to: 0, map: &f_large }, Relabel { from: 1, to: 2, map: &g_large }];
    let large = TreeColimit::compute(&inst.large, &large_kinds, &large_rel, &inst.budgets);
    let small_kinds = [
        LabelKind { seq: small_o.seq(), operad: Some(&small_o), group: 0 },
        LabelKind { seq: inst.a.seq(), operad: Some(&inst.a), group: 1 },
        LabelKind { seq: inst.b.seq(), operad: Some(&inst.b), group: 2 },
    ];
    let small_rel = [Relabel { from: 1, to: 0, map: &inst.f }, Relabel { from: 1, to: 2, map: &inst.g }];
    let small = TreeColimit::compute(&inst.small, &small_kinds, &small_rel, &inst.budgets);
    let rw = Rewriter::new(&inst.large, &large_kinds, &large_rel);

    let mut mismatch = None;
    let mut conclusion = true;
    'sigs: for s in 0..inst.small.signature_count() {
        let t = phi.object_map[s];
        let mut image = vec![None; small.size(s)];
        let mut hit = vec![false; large.size(t)];
        for term in small.terms(s) {
            let c = small.class_of(s, term).expect("own term");
            let moved = rw.normalize(&term.map_labels(&|k, sg, x| (k, phi.object_map[sg], x)));
            let Some(o) = large.class_of(t, &moved) else {
                mismatch = Some(format!("{}: image outside the budgets", inst.small.name(s)));
                break 'sigs;
            };
            match image[c] {
                None => {
                    if hit[o] {
                        mismatch = Some(format!("{}: the comparison map is not injective", inst.small.name(s)));
                        break 'sigs;
                    }
                    image[c] = Some(o);
                    hit[o] = true;
                }
                Some(p) if p != o => {
                    mismatch = Some(format!("{}: the comparison map is not well defined", inst.small.name(s)));
                    break 'sigs;
                }
                Some(_) => {}
            }
        }
        if hit.iter().any(|h| !h) {
            mismatch = Some(format!("{}: the comparison map is not surjective", inst.small.name(s)));
            break;
        }
        let n = inst.small.signature(s).arity();
        let mut seen = vec![false; large.size(t)];
        for x in 0..inst.b.size(s) {
            let term = rw.normalize(&Term::corolla(2, t, x, n));
            match large.class_of(t, &term) {
                Some(o) if !seen[o] => seen[o] = true,
                _ => conclusion = false,
            }
        }
        conclusion &= seen.iter().all(|&h| h);
    }
    let hypothesis = (0..inst.small.signature_count()).all(|s| {
        let mut seen = vec![false; small_o.size(s)];
        inst.f.components[s].len() == small_o.size(s) && inst.f.components[s].iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    });
    Ok(ColorChangeReport {
        agrees: mismatch.is_none(),
        small_sizes: small.sizes().to_vec(),
        restricted_sizes: phi.object_map.iter().map(|&t| large.size(t)).collect(),
        local_iso_hypothesis: hypothesis,
        local_iso_conclusion: conclusion,
        mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::FreeOperad;
    use crate::operad::check_operad_laws;
    use crate::signature::{GSet, Signature};

    fn binary(base: &Arc<SigmaGroupoid>) -> SymSeq {
        let bin = base.index_of(&Signature::new(vec![0, 0], 0)).unwrap();
        SymSeq::orbit(base.clone(), bin, &base.groupoid().automorphisms(bin)).unwrap()
    }

    #[test]
    fn pushout_product_examples() {
        let inc = SetMap::new(2, vec![0]).unwrap();
        let p = pushout_product(&inc, &inc);
        assert_eq!(p.map.domain(), 3);
        assert_eq!(p.map.codomain, 4);
        assert!(p.map.is_injective());
        let pt = SetMap::new(1, vec![]).unwrap();
        let q = pushout_product(&pt, &pt);
        assert_eq!((q.map.domain(), q.map.codomain), (0, 1));
        let id = SetMap::identity(2);
        let r = pushout_product(&id, &SetMap::new(3, vec![0, 0]).unwrap());
        assert!(r.map.is_bijective());
        let pw = PushoutPower::new(&inc, 2);
        assert_eq!(pw.map.domain(), 3);
    }

    #[test]
    fn free_extension_matches_free_operad() {
        let base = Arc::new(SigmaGroupoid::new(GSet::single(), 4));
        let y = binary(&base);
        let problem = ExtensionProblem::free(Operad::initial(base.clone()), y.clone(), 3).unwrap();
        let ext = Extension::compute(&problem).unwrap();
        assert!(ext.stabilized);
        let counts: Vec<usize> = ext.level_counts().iter().map(|&(_, c)| c).collect();
        assert_eq!(counts, vec![0, 1, 1, 3, 15]);
        let free = FreeOperad::new(&y, 3);
        assert_eq!(ext.operad.seq().sizes(), free.operad.seq().sizes());
        check_operad_laws(&ext.operad).unwrap();
        let cmp = compare_with_oracle(&problem, &ext);
        assert!(cmp.agrees, "{:?}", cmp.mismatch);
    }

    #[test]
    fn stage_one_adds_corollas() {
        let base = Arc::new(SigmaGroupoid::new(GSet::single(), 4));
        let y = binary(&base);
        let problem = ExtensionProblem::free(Operad::initial(base.clone()), y.clone(), 3).unwrap();
        let ext = Extension::compute(&problem).unwrap();
        let one = FreeOperad::new(&y, 1);
        assert_eq!(ext.stages[1].value.sizes(), one.operad.seq().sizes());
        assert_eq!(ext.stages[0].value.sizes(), Operad::initial(base).seq().sizes());
    }

    #[test]
    fn small_bound_is_not_stabilized() {
        let base = Arc::new(SigmaGroupoid::new(GSet::single(), 4));
        let problem = ExtensionProblem::free(Operad::initial(base.clone()), binary(&base), 2).unwrap();
        assert!(!Extension::compute(&problem).unwrap().stabilized);
    }

    fn com_problem(max_arity: usize, attach: bool) -> ExtensionProblem {
        let base = Arc::new(SigmaGroupoid::new(GSet::single(), max_arity));
        let com = Operad::commutative(base.clone());
        let y = binary(&base);
        if !attach {
            return ExtensionProblem::free(com, y, max_arity - 1).unwrap();
        }
        let zero = |seq: &SymSeq| SymSeqMap { components: (0..base.signature_count()).map(|s| vec![0; seq.size(s)]).collect() };
        let (u, alpha) = (SymSeqMap::identity(&y), zero(&y));
        ExtensionProblem::new(com, y.clone(), y, u, alpha, max_arity - 1).unwrap()
    }

    #[test]
    fn identity_attachment_returns_the_operad() {
        let problem = com_problem(4, true);
        let ext = Extension::compute(&problem).unwrap();
        assert!(ext.stabilized);
        assert_eq!(ext.operad.seq().sizes(), problem.operad.seq().sizes());
        assert!(ext.include_operad.is_bijective(ext.operad.seq()));
        check_operad_laws(&ext.operad).unwrap();
        assert!(compare_with_oracle(&problem, &ext).agrees);
    }

    #[test]
    fn coproduct_with_free_generator_matches_oracle() {
        let problem = com_problem(3, false);
        let ext = Extension::compute(&problem).unwrap();
        check_operad_laws(&ext.operad).unwrap();
        let cmp = compare_with_oracle(&problem, &ext);
        assert!(cmp.agrees, "{:?} {:?} {:?}", cmp.mismatch, cmp.filtration_sizes, cmp.oracle_sizes);
        for st in &ext.stages[1..] {
            let m = st.map_from_previous.as_ref().unwrap();
            assert!(m.is_injective());
            assert!(m.is_natural(&ext.stages[st.k - 1].value, &st.value));
        }
        let forgotten = Extension::compute(&problem.forget_group()).unwrap();
        assert_eq!(forgotten.operad.seq().sizes(), ext.operad.seq().sizes());
    }

    #[test]
    fn universal_property_against_small_targets() {
        for attach in [false, true] {
            let problem = com_problem(3, attach);
            let ext = Extension::compute(&problem).unwrap();
            let base = problem.base().clone();
            let targets = [
                Operad::terminal(base.clone()),
                Operad::commutative(base.clone()),
                Operad::endomorphism_following_colors(base.clone(), &[2]).unwrap(),
            ];
            for p in &targets {
                let r = check_universal_property(&problem, &ext, p);
                assert!(r.holds, "{r:?}");
            }
        }
    }

    #[test]
    fn colorchange_orders_agree() {
        for local_iso in [false, true] {
            let inst = ColorChangeInstance::example(local_iso, 2, 3).unwrap();
            let r = check_injective_colorchange_pushout(&inst).unwrap();
            assert!(r.agrees, "{r:?}");
            assert_eq!(r.local_iso_hypothesis, local_iso);
            if local_iso {
                assert!(r.local_iso_conclusion);
            }
        }
    }
}
