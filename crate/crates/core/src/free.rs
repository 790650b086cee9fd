//! Free operads on symmetric sequences, truncated at a vertex bound, with an independent count
//! by orbits of tree automorphisms and the monad structure.

use std::collections::{BTreeSet, HashMap};

use crate::enumerate::{enumerate_trees, TreeQuery};
use crate::functor::SetValuedFunctor;
use crate::operad::{signatures_by_output, CompKey, Operad};
use crate::perm::Perm;
use crate::signature::Signature;
use crate::symseq::{SymSeq, SymSeqMap};
use crate::term::{Term, TermAlgebra};
use crate::tree::{isomorphisms, ColoredTree, TreeAut};
use crate::unionfind::UnionFind;

/// The free operad on `generators`, containing every term with at most `bound` vertices.
/// Composites of more than `bound` vertices are left undefined.
#[derive(Clone, Debug)]
pub struct FreeOperad {
    pub operad: Operad,
    pub generators: SymSeq,
    pub bound: usize,
    terms: Vec<Vec<Term>>,
    index: Vec<HashMap<Term, usize>>,
    weights: Vec<Vec<usize>>,
}

impl FreeOperad {
    pub fn new(generators: &SymSeq, bound: usize) -> FreeOperad {
        FreeOperad::build(generators, bound, &|_, _| 1, true)
    }

    /// The free operad on terms of total weight at most `bound`, where a vertex labelled by element
    /// `x` at signature `s` weighs `weight(s, x) ≥ 1`. The weight must be invariant under the action.
    pub fn weighted(generators: &SymSeq, bound: usize, weight: &dyn Fn(usize, usize) -> usize) -> FreeOperad {
        FreeOperad::build(generators, bound, weight, true)
    }

    /// Total weight of the term with index `t` at signature `s`.
    pub fn weight(&self, s: usize, t: usize) -> usize {
        self.weights[s][t]
    }

    fn build(generators: &SymSeq, bound: usize, weight: &dyn Fn(usize, usize) -> usize, with_table: bool) -> FreeOperad {
        let base = generators.base().clone();
        let alg = TermAlgebra::new(&base, vec![generators]);
        let mut by_sig: HashMap<usize, Vec<Term>> = HashMap::new();
        for c in 0..base.colors().color_count() {
            let planar = alg.planar_terms_weighted(c, &[0], &[bound], base.max_arity(), &|_, _, _| true, &|_, s, x| {
                weight(s, x)
            });
            by_sig.extend(alg.close_under_relabeling(&planar));
        }
        let terms: Vec<Vec<Term>> = (0..base.signature_count()).map(|s| by_sig.remove(&s).unwrap_or_default()).collect();
        let term_weight = |t: &Term| {
            let mut w = 0;
            t.visit(&mut |n| {
                if let Term::Node { sig, elem, .. } = n {
                    w += weight(*sig, *elem).max(1);
                }
            });
            w
        };
        let weights: Vec<Vec<usize>> = terms.iter().map(|ts| ts.iter().map(term_weight).collect()).collect();
        let index: Vec<HashMap<Term, usize>> =
            terms.iter().map(|ts| ts.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()).collect();
        let g = base.groupoid();
        let sizes = terms.iter().map(Vec::len).collect();
        let action = (0..g.arrow_count())
            .map(|a| {
                let (h, sigma) = base.arrow_data(a);
                let dst = g.dst(a);
                terms[g.src(a)].iter().map(|t| index[dst][&alg.act(h, sigma, t)]).collect()
            })
            .collect();
        let seq = SymSeq::new(base.clone(), SetValuedFunctor { sizes, action }).expect("term action is functorial");
        let units = (0..base.colors().color_count())
            .map(|c| (base.max_arity() >= 1).then(|| index[base.unit_signature(c)][&Term::Leaf(0)]))
            .collect();
        let by_output = signatures_by_output(&base);
        let mut table: HashMap<CompKey, usize> = HashMap::new();
        for s in (0..base.signature_count()).filter(|_| with_table) {
            let sig = base.signature(s);
            for i in 0..sig.arity() {
                for &d in &by_output[sig.inputs[i]] {
                    let Some(r) = base.substitute(s, i, d) else { continue };
                    let m = base.signature(d).arity();
                    for (x, tx) in terms[s].iter().enumerate() {
                        for (y, ty) in terms[d].iter().enumerate() {
                            if weights[s][x] + weights[d][y] > bound {
                                continue;
                            }
                            let t = alg.graft(tx, i, ty, m);
                            table.insert((s, i, x, d, y), index[r][&t]);
                        }
                    }
                }
            }
        }
        let names = terms
            .iter()
            .enumerate()
            .map(|(s, ts)| ts.iter().map(|t| term_name(generators, &base, s, t)).collect())
            .collect();
        let operad = Operad::from_parts(seq, units, table).with_names(names);
        FreeOperad { operad, generators: generators.clone(), bound, terms, index, weights }
    }

    pub fn terms(&self, s: usize) -> &[Term] {
        &self.terms[s]
    }

    pub fn index_of(&self, s: usize, t: &Term) -> Option<usize> {
        self.index[s].get(t).copied()
    }

    /// The inclusion `X → 𝔽X` of generators as one-vertex terms.
    pub fn unit_map(&self) -> SymSeqMap {
        let base = self.generators.base();
        SymSeqMap {
            components: (0..base.signature_count())
                .map(|s| {
                    let n = base.signature(s).arity();
                    (0..self.generators.size(s)).map(|x| self.index[s][&Term::corolla(0, s, x, n)]).collect()
                })
                .collect(),
        }
    }

    /// The operad map `𝔽X → P` extending a natural map `f: X → P`; `None` where a composite in
    /// `P` is undefined.
    pub fn extend(&self, target: &Operad, f: &SymSeqMap) -> Vec<Vec<Option<usize>>> {
        let base = self.generators.base();
        self.terms
            .iter()
            .enumerate()
            .map(|(s, ts)| {
                let root = base.signature(s).output;
                ts.iter()
                    .map(|t| {
                        let relabeled = t.map_labels(&|k, sig, x| (k, sig, f.components[sig][x]));
                        target.eval_term(&relabeled, root).map(|(rs, v)| {
                            debug_assert_eq!(rs, s);
                            v
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// `𝔽f: 𝔽X → 𝔽Y` for a natural map `f: X → Y`, with `self = 𝔽X` and `other = 𝔽Y` at the same bound.
    pub fn map_to(&self, other: &FreeOperad, f: &SymSeqMap) -> SymSeqMap {
        let base = self.generators.base();
        let alg = TermAlgebra::new(base, vec![&other.generators]);
        SymSeqMap {
            components: self
                .terms
                .iter()
                .enumerate()
                .map(|(s, ts)| {
                    ts.iter()
                        .map(|t| {
                            let moved = alg.canonicalize(&t.map_labels(&|k, sig, x| (k, sig, f.components[sig][x])));
                            other.index[s][&moved]
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// The multiplication `𝔽𝔽X → 𝔽X` evaluated on `outer = 𝔽(𝔽X)`; `None` beyond the bound.
    pub fn multiplication(&self, outer: &FreeOperad) -> Vec<Vec<Option<usize>>> {
        let id = SymSeqMap::identity(&self.operad.seq().clone());
        outer.extend(&self.operad, &id)
    }
}

fn term_name(gens: &SymSeq, base: &crate::signature::SigmaGroupoid, s: usize, t: &Term) -> String {
    fn go(t: &Term, out: &mut String) {
        match t {
            Term::Leaf(i) => out.push_str(&i.to_string()),
            Term::Node { sig, elem, children, .. } => {
                out.push_str(&format!("x{sig}.{elem}("));
                for (k, c) in children.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    go(c, out);
                }
                out.push(')');
            }
        }
    }
    let _ = (gens, base, s);
    let mut out = String::new();
    go(t, &mut out);
    out
}

/// `|𝔽X(C)|` up to `bound` vertices as a sum over isomorphism classes of trees `T` of the number
/// of Aut(T)-orbits on `∏_v X(T_v) × Σ(lr T, C)`.
pub fn free_count_by_trees(x: &SymSeq, s: usize, bound: usize) -> usize {
    let base = x.base();
    let target = base.signature(s).clone();
    let ok = nonempty_vertex(x);
    let classes = enumerate_trees(
        base.colors(),
        &target,
        TreeQuery { bound: Some(bound), max_vertex_arity: base.max_arity(), reduced: false },
        &ok,
    )
    .expect("bounded enumeration");
    let e = base.group().identity();
    classes
        .iter()
        .map(|class| {
            let auts: Vec<(usize, TreeAut)> = class.automorphisms.iter().map(|a| (e, a.clone())).collect();
            orbit_count(x, &class.tree, &auts, s, false)
        })
        .sum()
}

/// The same count over isomorphism classes of trees up to the group action, with orbits of
/// `{(g, ψ) : ψ: gT ≅ T}` on `∏_v X(T_v) × (G ⋉ Σ)(lr T, C)`.
pub fn free_count_by_trees_equivariant(x: &SymSeq, s: usize, bound: usize) -> usize {
    let base = x.base();
    let colors = base.colors();
    let ok = nonempty_vertex(x);
    let query = TreeQuery { bound: Some(bound), max_vertex_arity: base.max_arity(), reduced: false };
    let mut trees: BTreeSet<ColoredTree> = BTreeSet::new();
    let mut targets: BTreeSet<Signature> = BTreeSet::new();
    for g in 0..base.group().order() {
        targets.insert(base.signature(base.act(g, &Perm::identity(base.signature(s).arity()), s)).clone());
    }
    for t in &targets {
        for class in enumerate_trees(colors, t, query, &ok).expect("bounded enumeration") {
            trees.insert(class.tree);
        }
    }
    let mut seen: BTreeSet<ColoredTree> = BTreeSet::new();
    let mut total = 0;
    for t in &trees {
        if seen.contains(t) {
            continue;
        }
        let mut auts = Vec::new();
        for g in 0..base.group().order() {
            seen.insert(t.act(colors, g).canonical());
            for iso in isomorphisms(t, t, &colors.action_table()[g]) {
                auts.push((g, iso));
            }
        }
        total += orbit_count(x, t, &auts, s, true);
    }
    total
}

fn nonempty_vertex(x: &SymSeq) -> impl Fn(&Signature) -> bool + '_ {
    move |sig: &Signature| x.base().index_of(sig).is_some_and(|v| x.size(v) > 0)
}

/// Orbits of twisted automorphisms on vertex labels and arrows `lr T → C`.
fn orbit_count(x: &SymSeq, tree: &ColoredTree, auts: &[(usize, TreeAut)], s: usize, with_group: bool) -> usize {
    let base = x.base();
    let g = base.groupoid();
    let grp = base.group();
    let vertex_sigs: Vec<usize> = tree.vertex_corollas().iter().map(|c| base.index_of(c).expect("in range")).collect();
    let lr = base.index_of(&tree.leaf_root()).expect("in range");
    let homs: Vec<usize> = g
        .hom(lr, s)
        .into_iter()
        .filter(|&a| with_group || base.arrow_data(a).0 == grp.identity())
        .collect();
    if homs.is_empty() {
        return 0;
    }
    let hom_pos: HashMap<usize, usize> = homs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let radix: Vec<usize> = vertex_sigs.iter().map(|&v| x.size(v)).chain([homs.len()]).collect();
    let total: usize = radix.iter().product();
    if total == 0 {
        return 0;
    }
    let decode = |mut code: usize| {
        let mut digits = vec![0; radix.len()];
        for (d, &r) in digits.iter_mut().zip(&radix).rev() {
            *d = code % r;
            code /= r;
        }
        digits
    };
    let encode = |digits: &[usize]| digits.iter().zip(&radix).fold(0, |acc, (&d, &r)| acc * r + d);
    let nv = vertex_sigs.len();
    let mut uf = UnionFind::new(total);
    for code in 0..total {
        let digits = decode(code);
        for (h, phi) in auts {
            let mut next = vec![0; radix.len()];
            for v in 0..nv {
                let a = base.arrow(vertex_sigs[v], *h, &phi.input_perm[v].inverse());
                debug_assert_eq!(g.dst(a), vertex_sigs[phi.vertex_map[v]]);
                next[phi.vertex_map[v]] = x.act(a, digits[v]);
            }
            let (k, tau) = base.arrow_data(homs[digits[nv]]);
            let moved = base.arrow(lr, grp.mul(k, grp.inv(*h)), &phi.leaf_perm.compose(tau));
            next[nv] = hom_pos[&moved];
            uf.union(code, encode(&next));
        }
    }
    uf.classes().1
}

/// Checks the unit and associativity laws of the free-operad monad on `X` on every element of
/// `𝔽X`, `𝔽𝔽X` and `𝔽𝔽𝔽X` whose flattening has at most `bound` vertices, a vertex labelled by a
/// unit or a stick counting as one.
pub fn check_monad_laws(x: &SymSeq, bound: usize) -> Result<(), String> {
    let fx = FreeOperad::new(x, bound);
    let ffx = FreeOperad::weighted(fx.operad.seq(), bound, &|s, t| fx.weight(s, t).max(1));
    let mu = fx.multiplication(&ffx);
    let base = x.base();
    // μ ∘ η_{𝔽X} = id and μ ∘ 𝔽η_X = id.
    let eta_fx = ffx.unit_map();
    let f_eta = fx.map_to(&ffx, &fx.unit_map());
    for s in 0..base.signature_count() {
        for t in 0..fx.operad.size(s) {
            if mu[s][eta_fx.components[s][t]] != Some(t) {
                return Err(format!("μ ∘ η fails at {} element {t}", base.name(s)));
            }
            if mu[s][f_eta.components[s][t]] != Some(t) {
                return Err(format!("μ ∘ 𝔽η fails at {} element {t}", base.name(s)));
            }
        }
    }
    // μ ∘ μ_𝔽 = μ ∘ 𝔽μ on 𝔽𝔽𝔽X.
    let fffx = FreeOperad::build(ffx.operad.seq(), bound, &|s, t| ffx.weight(s, t).max(1), false);
    let mu_f = ffx.multiplication(&fffx);
    let alg = TermAlgebra::new(base, vec![fx.operad.seq()]);
    for s in 0..base.signature_count() {
        for (t, term) in fffx.terms(s).iter().enumerate() {
            let left = mu_f[s][t].and_then(|u| mu[s][u]);
            let mut defined = true;
            let pushed = term.map_labels(&|k, sig, y| match mu[sig][y] {
                Some(v) => (k, sig, v),
                None => (k, sig, usize::MAX),
            });
            pushed.visit(&mut |n| {
                if let Term::Node { elem, .. } = n {
                    defined &= *elem != usize::MAX;
                }
            });
            let right = if defined { ffx.index_of(s, &alg.canonicalize(&pushed)).and_then(|u| mu[s][u]) } else { None };
            match (left, right) {
                (Some(l), Some(r)) if l == r => {}
                (Some(_), Some(_)) => return Err(format!("μ associativity fails at {} element {t}", base.name(s))),
                _ => return Err(format!("a composite within the bound is undefined at {} element {t}", base.name(s))),
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::operad::{check_operad_laws, count_operad_maps};
    use crate::signature::{GSet, SigmaGroupoid};
    use crate::symseq::symseq_hom_count;
    use std::sync::Arc;

    fn binary_generator(max: usize) -> (Arc<SigmaGroupoid>, SymSeq) {
        let base = Arc::new(SigmaGroupoid::new(GSet::single(), max));
        let bin = base.index_of(&Signature::new(vec![0, 0], 0)).unwrap();
        let all = base.groupoid().automorphisms(bin);
        (base.clone(), SymSeq::orbit(base, bin, &all).unwrap())
    }

    #[test]
    fn commutative_binary_generator_counts() {
        let (base, x) = binary_generator(5);
        let free = FreeOperad::new(&x, 4);
        let sizes: Vec<usize> = (1..=5).map(|n| free.operad.size(base.index_of(&Signature::new(vec![0; n], 0)).unwrap())).collect();
        assert_eq!(sizes, vec![1, 1, 3, 15, 105]);
        for n in 1..=5 {
            let s = base.index_of(&Signature::new(vec![0; n], 0)).unwrap();
            assert_eq!(free_count_by_trees(&x, s, 4), sizes[n - 1]);
            assert_eq!(free_count_by_trees_equivariant(&x, s, 4), sizes[n - 1]);
        }
        check_operad_laws(&free.operad).unwrap();
    }

    #[test]
    fn equivariant_count_agrees_with_terms() {
        let colors = GSet::new(FiniteGroup::cyclic(2), vec!["a".into(), "b".into()], vec![vec![0, 1], vec![1, 0]]).unwrap();
        let base = Arc::new(SigmaGroupoid::new(colors, 3));
        let s = base.index_of(&Signature::new(vec![0, 1], 0)).unwrap();
        let x = SymSeq::representable(base.clone(), s);
        let free = FreeOperad::new(&x, 2);
        check_operad_laws(&free.operad).unwrap();
        for t in 0..base.signature_count() {
            let direct = free.operad.size(t);
            assert_eq!(free_count_by_trees(&x, t, 2), direct, "at {}", base.name(t));
            assert_eq!(free_count_by_trees_equivariant(&x, t, 2), direct, "at {}", base.name(t));
        }
    }

    #[test]
    fn adjunction_count() {
        let (base, x) = binary_generator(3);
        let free = FreeOperad::new(&x, 2);
        let end = Operad::endomorphism_following_colors(base, &[2]).unwrap();
        let maps = count_operad_maps(&free.operad, &end);
        assert_eq!(maps as u128, symseq_hom_count(&x, end.seq()));
    }

    #[test]
    fn monad_laws_hold() {
        let (_, x) = binary_generator(3);
        check_monad_laws(&x, 2).unwrap();
    }
}
