//! Equivariant colored symmetric sequences in finite sets: functors on G ⋉ Σ_C^op.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::family::GSigmaFamily;
use crate::functor::{hom_count, hom_set, is_natural, lan_along, SetValuedFunctor};
use crate::group::{FiniteGroup, Subgroup};
use crate::groupoid::GroupoidFunctor;
use crate::signature::{GSet, SigmaGroupoid};
use crate::unionfind::UnionFind;

/// A symmetric sequence: a finite set `X(C)` for every signature in the arity range, with the
/// action `X(C) → X(gCσ)` of every arrow `(g, σ)`.
#[derive(Clone, Debug)]
pub struct SymSeq {
    base: Arc<SigmaGroupoid>,
    functor: SetValuedFunctor,
}

/// A family of component maps `X(C) → Y(C)`, one per signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymSeqMap {
    pub components: Vec<Vec<usize>>,
}

impl SymSeq {
    /// Wraps a functor after checking functoriality.
    pub fn new(base: Arc<SigmaGroupoid>, functor: SetValuedFunctor) -> Result<SymSeq> {
        functor.validate(base.groupoid())?;
        Ok(SymSeq { base, functor })
    }

    pub fn empty(base: Arc<SigmaGroupoid>) -> SymSeq {
        let functor = SetValuedFunctor::empty(base.groupoid());
        SymSeq { base, functor }
    }

    /// The constant sequence with `n` fixed elements at every signature.
    pub fn constant(base: Arc<SigmaGroupoid>, n: usize) -> SymSeq {
        let functor = SetValuedFunctor::constant(base.groupoid(), n);
        SymSeq { base, functor }
    }

    /// The functor (G ⋉ Σ_C^op)(C, −); element `i` at `D` is the `i`-th arrow `C → D`.
    pub fn representable(base: Arc<SigmaGroupoid>, s: usize) -> SymSeq {
        let functor = SetValuedFunctor::representable(base.groupoid(), s);
        SymSeq { base, functor }
    }

    /// The representable at `s` divided by a subgroup of its automorphisms acting by precomposition;
    /// `lambda` lists arrows `s → s`.
    pub fn orbit(base: Arc<SigmaGroupoid>, s: usize, lambda: &[usize]) -> Result<SymSeq> {
        let g = base.groupoid();
        if lambda.iter().any(|&a| g.src(a) != s || g.dst(a) != s) {
            return Err(Error::NotStabilizer(base.name(s)));
        }
        let rep = SetValuedFunctor::representable(g, s);
        let homs: Vec<Vec<usize>> = (0..g.object_count()).map(|d| g.hom(s, d)).collect();
        let mut class_of = Vec::with_capacity(homs.len());
        let mut sizes = Vec::with_capacity(homs.len());
        for h in homs.iter() {
            let mut uf = UnionFind::new(h.len());
            let pos: std::collections::HashMap<usize, usize> = h.iter().enumerate().map(|(i, &a)| (a, i)).collect();
            for (i, &a) in h.iter().enumerate() {
                for &l in lambda {
                    uf.union(i, pos[&g.compose(l, a)]);
                }
            }
            let (labels, count) = uf.classes();
            class_of.push(labels);
            sizes.push(count);
        }
        let action = (0..g.arrow_count())
            .map(|f| {
                let (src, dst) = (g.src(f), g.dst(f));
                let mut row = vec![0; sizes[src]];
                for (i, &c) in class_of[src].iter().enumerate() {
                    row[c] = class_of[dst][rep.action[f][i]];
                }
                row
            })
            .collect();
        Ok(SymSeq { base, functor: SetValuedFunctor { sizes, action } })
    }

    /// The disjoint union; elements of part `k` at `C` are numbered after those of earlier parts.
    pub fn coproduct(base: Arc<SigmaGroupoid>, parts: &[SymSeq]) -> SymSeq {
        let g = base.groupoid();
        let sizes = (0..g.object_count()).map(|s| parts.iter().map(|p| p.size(s)).sum()).collect();
        let action = (0..g.arrow_count())
            .map(|f| {
                let (src, dst) = (g.src(f), g.dst(f));
                let (mut off_s, mut off_d) = (0, 0);
                let mut row = Vec::new();
                for p in parts {
                    row.extend(p.functor.action[f].iter().map(|&y| y + off_d));
                    off_s += p.size(src);
                    off_d += p.size(dst);
                }
                debug_assert_eq!(row.len(), off_s);
                row
            })
            .collect();
        SymSeq { base, functor: SetValuedFunctor { sizes, action } }
    }

    /// A coproduct of orbits `representable(s) / Λ`, one per listed pair.
    pub fn from_orbits(base: Arc<SigmaGroupoid>, orbits: &[(usize, Vec<usize>)]) -> Result<SymSeq> {
        let parts: Vec<SymSeq> =
            orbits.iter().map(|(s, l)| SymSeq::orbit(base.clone(), *s, l)).collect::<Result<_>>()?;
        Ok(SymSeq::coproduct(base, &parts))
    }

    pub fn base(&self) -> &Arc<SigmaGroupoid> {
        &self.base
    }

    pub fn functor(&self) -> &SetValuedFunctor {
        &self.functor
    }

    pub fn colors(&self) -> &GSet {
        self.base.colors()
    }

    pub fn size(&self, s: usize) -> usize {
        self.functor.sizes[s]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.functor.sizes
    }

    pub fn total_size(&self) -> usize {
        self.functor.total_size()
    }

    /// The image of `x ∈ X(src a)` under arrow `a`.
    pub fn act(&self, a: usize, x: usize) -> usize {
        self.functor.action[a][x]
    }

    pub fn validate(&self) -> Result<()> {
        self.functor.validate(self.base.groupoid())
    }

    /// Elements of `X(s)` fixed by every member of a stabilizing subgroup of G × Σ_n^op.
    pub fn fixed_points(&self, s: usize, lambda: &Subgroup) -> Result<Vec<usize>> {
        let n = self.base.signature(s).arity();
        let prod = self.base.sigma_product(n);
        let arrows = self.base.stabilizer_arrows(s, &prod, lambda)?;
        Ok((0..self.size(s)).filter(|&x| arrows.iter().all(|&a| self.act(a, x) == x)).collect())
    }

    /// Orbits of Aut(s) on `X(s)`: orbit index of each element and representatives.
    pub fn orbits_at(&self, s: usize) -> (Vec<usize>, Vec<usize>) {
        self.functor.orbits_at(self.base.groupoid(), s)
    }

    /// `Y ∘ φ`: the sequence on C-signatures with `φ*Y(C) = Y(φC)`.
    pub fn pullback(&self, source_base: Arc<SigmaGroupoid>, color_map: &[usize]) -> Result<SymSeq> {
        let k = color_change_functor(&source_base, &self.base, color_map)?;
        let functor = self.functor.precompose(&k);
        Ok(SymSeq { base: source_base, functor })
    }

    /// The left adjoint of pullback: the left Kan extension along the induced groupoid functor.
    pub fn pushforward(&self, target_base: Arc<SigmaGroupoid>, color_map: &[usize]) -> Result<SymSeq> {
        let k = color_change_functor(&self.base, &target_base, color_map)?;
        let lan = lan_along(self.base.groupoid(), target_base.groupoid(), &k, &self.functor);
        Ok(SymSeq { base: target_base, functor: lan.functor })
    }

    /// The same sets with only the Σ-action, over the trivial group.
    pub fn forget_group(&self) -> SymSeq {
        let forgotten = Arc::new(SigmaGroupoid::new(self.colors().forget_group(), self.base.max_arity()));
        self.forget_group_to(&forgotten)
    }

    /// [`SymSeq::forget_group`] onto a given base built from the same colors with the trivial group.
    pub fn forget_group_to(&self, forgotten: &Arc<SigmaGroupoid>) -> SymSeq {
        let forgotten = forgotten.clone();
        let e = self.base.group().identity();
        let k = GroupoidFunctor {
            object_map: (0..forgotten.signature_count()).collect(),
            arrow_map: (0..forgotten.groupoid().arrow_count())
                .map(|a| {
                    let s = forgotten.groupoid().src(a);
                    let (_, sigma) = forgotten.arrow_data(a);
                    self.base.arrow(s, e, sigma)
                })
                .collect(),
        };
        let functor = self.functor.precompose(&k);
        SymSeq { base: forgotten, functor }
    }
}

/// The functor G ⋉ Σ_C^op → G ⋉ Σ_D^op induced by an equivariant color map (same group and arity range).
pub fn color_change_functor(
    source: &SigmaGroupoid,
    target: &SigmaGroupoid,
    color_map: &[usize],
) -> Result<GroupoidFunctor> {
    if !same_group(source.group(), target.group()) || source.max_arity() != target.max_arity() {
        return Err(Error::InvalidAction("color change needs the same group and arity range".into()));
    }
    if !source.colors().is_equivariant_map(target.colors(), color_map) {
        return Err(Error::InvalidAction("color map is not equivariant".into()));
    }
    let object_map: Vec<usize> = source
        .signatures()
        .iter()
        .map(|s| {
            let mapped = crate::signature::Signature {
                inputs: s.inputs.iter().map(|&c| color_map[c]).collect(),
                output: color_map[s.output],
            };
            target.index_of(&mapped).expect("same arity range")
        })
        .collect();
    let arrow_map = (0..source.groupoid().arrow_count())
        .map(|a| {
            let s = source.groupoid().src(a);
            target.arrow_of_element(object_map[s], source.arrow_element(a))
        })
        .collect();
    Ok(GroupoidFunctor { object_map, arrow_map })
}

fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    a.order() == b.order() && a.table() == b.table()
}

/// Whether two bases have the same group, color action and arity range.
pub fn same_base(a: &SigmaGroupoid, b: &SigmaGroupoid) -> bool {
    std::ptr::eq(a, b)
        || (same_group(a.group(), b.group())
            && a.max_arity() == b.max_arity()
            && a.colors().action_table() == b.colors().action_table())
}

impl SymSeqMap {
    pub fn identity(x: &SymSeq) -> SymSeqMap {
        SymSeqMap { components: x.sizes().iter().map(|&n| (0..n).collect()).collect() }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SymSeqMap) -> SymSeqMap {
        SymSeqMap {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(f, g)| f.iter().map(|&x| g[x]).collect())
                .collect(),
        }
    }

    pub fn is_natural(&self, src: &SymSeq, dst: &SymSeq) -> bool {
        is_natural(src.base.groupoid(), &src.functor, &dst.functor, &self.components)
    }

    pub fn is_bijective(&self, dst: &SymSeq) -> bool {
        self.components.iter().enumerate().all(|(s, f)| {
            let mut seen = vec![false; dst.size(s)];
            f.len() == dst.size(s) && f.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|f| {
            let mut v = f.clone();
            v.sort_unstable();
            v.windows(2).all(|w| w[0] != w[1])
        })
    }
}

/// |Hom(X, Y)| for sequences over the same base.
pub fn symseq_hom_count(x: &SymSeq, y: &SymSeq) -> u128 {
    hom_count(x.base.groupoid(), &x.functor, &y.functor)
}

/// Up to `limit` natural maps X → Y.
pub fn symseq_hom_set(x: &SymSeq, y: &SymSeq, limit: usize) -> Vec<SymSeqMap> {
    hom_set(x.base.groupoid(), &x.functor, &y.functor, limit)
        .into_iter()
        .map(|components| SymSeqMap { components })
        .collect()
}

/// A signature and a stabilizing subgroup on whose fixed points a map is not bijective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FEquivalenceWitness {
    pub signature: usize,
    pub subgroup: Subgroup,
}

/// Whether `f` restricts to a bijection `X(C)^Λ → Y(C)^Λ` for every signature `C` with arity in
/// the family and every member `Λ` stabilizing `C`. Returns the first failure in signature order,
/// then canonical subgroup order. The components are not required to be natural: a fixed point
/// sent outside `Y(C)^Λ` also counts as a failure.
pub fn is_f_equivalence(
    x: &SymSeq,
    y: &SymSeq,
    f: &SymSeqMap,
    family: &GSigmaFamily,
) -> Result<Option<FEquivalenceWitness>> {
    let base = &x.base;
    for n in family.arities() {
        if n > base.max_arity() {
            return Err(Error::OutOfRange(format!("arity {n}")));
        }
        let prod = family.ambient(n)?;
        for s in base.of_arity(n) {
            for lambda in family.members(n)? {
                if !crate::signature::stabilizes(base.colors(), prod, lambda, base.signature(s)) {
                    continue;
                }
                let fx = x.fixed_points(s, lambda)?;
                let fy = y.fixed_points(s, lambda)?;
                let mut hit = vec![false; y.size(s)];
                let mut ok = fx.len() == fy.len();
                for &e in &fx {
                    let v = f.components[s][e];
                    if hit[v] || !fy.contains(&v) {
                        ok = false;
                    }
                    hit[v] = true;
                }
                if !ok {
                    return Ok(Some(FEquivalenceWitness { signature: s, subgroup: lambda.clone() }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Signature;

    fn single(max: usize) -> Arc<SigmaGroupoid> {
        Arc::new(SigmaGroupoid::new(GSet::single(), max))
    }

    #[test]
    fn representable_sizes() {
        let base = single(3);
        let s = base.index_of(&Signature::new(vec![0; 3], 0)).unwrap();
        let r = SymSeq::representable(base.clone(), s);
        r.validate().unwrap();
        assert_eq!(r.size(s), 6);
        assert_eq!(r.total_size(), 6);
    }

    #[test]
    fn yoneda_count() {
        let base = single(2);
        let s = base.index_of(&Signature::new(vec![0; 2], 0)).unwrap();
        let r = SymSeq::representable(base.clone(), s);
        let x = SymSeq::coproduct(base.clone(), &[SymSeq::constant(base.clone(), 2), r.clone()]);
        assert_eq!(symseq_hom_count(&r, &x), x.size(s) as u128);
    }

    #[test]
    fn orbit_quotients() {
        let base = single(2);
        let s = base.index_of(&Signature::new(vec![0; 2], 0)).unwrap();
        let same = SymSeq::orbit(base.clone(), s, &[base.arrow_of_element(s, 0)]).unwrap();
        assert_eq!(same.size(s), 2);
        let all: Vec<usize> = base.groupoid().automorphisms(s);
        let point = SymSeq::orbit(base.clone(), s, &all).unwrap();
        assert_eq!(point.size(s), 1);
        point.validate().unwrap();
    }
}
