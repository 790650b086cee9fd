//! Finite-set-valued functors on finite groupoids: natural transformations and
//! left Kan extension along a functor.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupoidFunctor};
use crate::unionfind::UnionFind;

/// A functor to finite sets: the value at object `x` is `{0, …, sizes[x]-1}` and
/// `action[f]` is the map `X(src f) → X(dst f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetValuedFunctor {
    pub sizes: Vec<usize>,
    pub action: Vec<Vec<usize>>,
}

/// A natural transformation given by one component map per object.
pub type NatTrans = Vec<Vec<usize>>;

impl SetValuedFunctor {
    pub fn empty(base: &FiniteGroupoid) -> SetValuedFunctor {
        SetValuedFunctor { sizes: vec![0; base.object_count()], action: vec![Vec::new(); base.arrow_count()] }
    }

    /// The constant functor with value `{0, …, n-1}`.
    pub fn constant(base: &FiniteGroupoid, n: usize) -> SetValuedFunctor {
        SetValuedFunctor {
            sizes: vec![n; base.object_count()],
            action: vec![(0..n).collect(); base.arrow_count()],
        }
    }

    /// The representable functor `base(x, -)`; the element `i` at `y` is the `i`-th arrow of `hom(x, y)`.
    pub fn representable(base: &FiniteGroupoid, x: usize) -> SetValuedFunctor {
        let homs: Vec<Vec<usize>> = (0..base.object_count()).map(|y| base.hom(x, y)).collect();
        let pos: HashMap<usize, usize> =
            homs.iter().flat_map(|h| h.iter().enumerate().map(|(i, &a)| (a, i))).collect();
        let action = (0..base.arrow_count())
            .map(|f| homs[base.src(f)].iter().map(|&a| pos[&base.compose(a, f)]).collect())
            .collect();
        SetValuedFunctor { sizes: homs.iter().map(|h| h.len()).collect(), action }
    }

    /// Functoriality, checked on every arrow and every composable pair.
    pub fn validate(&self, base: &FiniteGroupoid) -> Result<()> {
        if self.sizes.len() != base.object_count() || self.action.len() != base.arrow_count() {
            return Err(Error::InvalidAction("functor data has the wrong shape".into()));
        }
        for f in 0..base.arrow_count() {
            let (x, y) = (base.src(f), base.dst(f));
            if self.action[f].len() != self.sizes[x] || self.action[f].iter().any(|&v| v >= self.sizes[y]) {
                return Err(Error::InvalidAction(format!("map of arrow {} has the wrong shape", base.arrow_label(f))));
            }
        }
        for x in 0..base.object_count() {
            let id = base.identity(x);
            if self.action[id].iter().enumerate().any(|(i, &v)| i != v) {
                return Err(Error::InvalidAction(format!("identity of {} acts non-trivially", base.object_name(x))));
            }
        }
        for f in 0..base.arrow_count() {
            for &g in base.arrows_from(base.dst(f)) {
                let gf = base.compose(f, g);
                for i in 0..self.sizes[base.src(f)] {
                    if self.action[gf][i] != self.action[g][self.action[f][i]] {
                        return Err(Error::InvalidAction(format!(
                            "X({} ∘ {}) ≠ X({}) ∘ X({})",
                            base.arrow_label(g),
                            base.arrow_label(f),
                            base.arrow_label(g),
                            base.arrow_label(f)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `X ∘ k` for a functor `k` into the base of `self`.
    pub fn precompose(&self, k: &GroupoidFunctor) -> SetValuedFunctor {
        SetValuedFunctor {
            sizes: k.object_map.iter().map(|&x| self.sizes[x]).collect(),
            action: k.arrow_map.iter().map(|&f| self.action[f].clone()).collect(),
        }
    }

    /// Orbits of Aut(x) on X(x): orbit index of each element and one representative per orbit.
    pub fn orbits_at(&self, base: &FiniteGroupoid, x: usize) -> (Vec<usize>, Vec<usize>) {
        let mut uf = UnionFind::new(self.sizes[x]);
        for f in base.automorphisms(x) {
            for i in 0..self.sizes[x] {
                uf.union(i, self.action[f][i]);
            }
        }
        let (labels, count) = uf.classes();
        let mut reps = vec![usize::MAX; count];
        for (i, &c) in labels.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = i;
            }
        }
        (labels, reps)
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// Whether a family of component maps is natural.
pub fn is_natural(base: &FiniteGroupoid, x: &SetValuedFunctor, y: &SetValuedFunctor, eta: &NatTrans) -> bool {
    (0..base.object_count()).all(|o| eta[o].len() == x.sizes[o] && eta[o].iter().all(|&v| v < y.sizes[o]))
        && (0..base.arrow_count()).all(|f| {
            let (s, t) = (base.src(f), base.dst(f));
            (0..x.sizes[s]).all(|i| eta[t][x.action[f][i]] == y.action[f][eta[s][i]])
        })
}

/// The data that determines natural transformations: for each component representative,
/// the orbit representatives of X there and the admissible images of each.
struct HomPlan {
    reps: Vec<usize>,
    orbit_reps: Vec<Vec<usize>>,
    candidates: Vec<Vec<Vec<usize>>>,
}

fn hom_plan(base: &FiniteGroupoid, x: &SetValuedFunctor, y: &SetValuedFunctor) -> HomPlan {
    let (_, reps) = base.components();
    let mut orbit_reps = Vec::new();
    let mut candidates = Vec::new();
    for &r in &reps {
        let auts = base.automorphisms(r);
        let (_, o_reps) = x.orbits_at(base, r);
        let cands = o_reps
            .iter()
            .map(|&p| {
                let stab: Vec<usize> = auts.iter().copied().filter(|&a| x.action[a][p] == p).collect();
                (0..y.sizes[r]).filter(|&q| stab.iter().all(|&a| y.action[a][q] == q)).collect()
            })
            .collect();
        orbit_reps.push(o_reps);
        candidates.push(cands);
    }
    HomPlan { reps, orbit_reps, candidates }
}

/// |Hom(X, Y)|, computed as a product over components and orbits of fixed-point counts.
pub fn hom_count(base: &FiniteGroupoid, x: &SetValuedFunctor, y: &SetValuedFunctor) -> u128 {
    let plan = hom_plan(base, x, y);
    plan.candidates
        .iter()
        .flat_map(|c| c.iter())
        .map(|c| c.len() as u128)
        .product()
}

/// All natural transformations X → Y (at most `limit` of them), in a deterministic order.
pub fn hom_set(base: &FiniteGroupoid, x: &SetValuedFunctor, y: &SetValuedFunctor, limit: usize) -> Vec<NatTrans> {
    let plan = hom_plan(base, x, y);
    let transports = base.transports();
    let (comp, _) = base.components();
    let slots: Vec<(usize, usize)> = plan
        .candidates
        .iter()
        .enumerate()
        .flat_map(|(c, cs)| (0..cs.len()).map(move |k| (c, k)))
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; slots.len()];
    if slots.iter().any(|&(c, k)| plan.candidates[c][k].is_empty()) {
        return out;
    }
    loop {
        if out.len() >= limit {
            break;
        }
        // component maps at representatives
        let mut at_rep: Vec<Vec<usize>> = plan.reps.iter().map(|&r| vec![usize::MAX; x.sizes[r]]).collect();
        for (s, &(c, k)) in slots.iter().enumerate() {
            let r = plan.reps[c];
            let p = plan.orbit_reps[c][k];
            let q = plan.candidates[c][k][choice[s]];
            for a in base.automorphisms(r) {
                at_rep[c][x.action[a][p]] = y.action[a][q];
            }
        }
        let eta: NatTrans = (0..base.object_count())
            .map(|o| {
                let t = transports[o];
                let back = base.inverse(t);
                let c = comp[o];
                (0..x.sizes[o]).map(|i| y.action[t][at_rep[c][x.action[back][i]]]).collect()
            })
            .collect();
        out.push(eta);
        // advance the mixed-radix counter
        let mut s = 0;
        loop {
            if s == slots.len() {
                return out;
            }
            let (c, k) = slots[s];
            choice[s] += 1;
            if choice[s] < plan.candidates[c][k].len() {
                break;
            }
            choice[s] = 0;
            s += 1;
        }
    }
    out
}

/// An element of a Kan extension: the class of `(g, a: k(g) → ḡ, x ∈ X(g))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LanElement {
    pub object: usize,
    pub arrow: usize,
    pub value: usize,
}

/// The left Kan extension of `X` along `k`, with a canonical representative per element.
#[derive(Clone, Debug)]
pub struct Lan {
    pub functor: SetValuedFunctor,
    /// For every target object, the smallest triple of each class.
    pub representatives: Vec<Vec<LanElement>>,
}

/// `Lan_k X(ḡ) = (⨿_g Hom(k g, ḡ) × X(g)) / ~` with `(g', a', X(f)x) ~ (g, a' ∘ k(f), x)`,
/// computed by union–find over the explicit coend.
pub fn lan_along(
    source: &FiniteGroupoid,
    target: &FiniteGroupoid,
    k: &GroupoidFunctor,
    x: &SetValuedFunctor,
) -> Lan {
    let n_target = target.object_count();
    let mut triples: Vec<Vec<LanElement>> = vec![Vec::new(); n_target];
    for g in 0..source.object_count() {
        for &a in target.arrows_from(k.object_map[g]) {
            let t = target.dst(a);
            for v in 0..x.sizes[g] {
                triples[t].push(LanElement { object: g, arrow: a, value: v });
            }
        }
    }
    for t in triples.iter_mut() {
        t.sort();
    }
    let index: Vec<HashMap<LanElement, usize>> = triples
        .iter()
        .map(|ts| ts.iter().enumerate().map(|(i, &e)| (e, i)).collect())
        .collect();
    let mut class_of: Vec<Vec<usize>> = Vec::with_capacity(n_target);
    let mut representatives = Vec::with_capacity(n_target);
    for t in 0..n_target {
        let mut uf = UnionFind::new(triples[t].len());
        for f in 0..source.arrow_count() {
            let (g, g2) = (source.src(f), source.dst(f));
            let kf = k.arrow_map[f];
            for &a2 in target.arrows_from(k.object_map[g2]) {
                if target.dst(a2) != t {
                    continue;
                }
                let a = target.compose(kf, a2);
                for v in 0..x.sizes[g] {
                    let lhs = index[t][&LanElement { object: g2, arrow: a2, value: x.action[f][v] }];
                    let rhs = index[t][&LanElement { object: g, arrow: a, value: v }];
                    uf.union(lhs, rhs);
                }
            }
        }
        let (labels, count) = uf.classes();
        let mut reps = vec![None; count];
        for (i, &c) in labels.iter().enumerate() {
            if reps[c].is_none() {
                reps[c] = Some(triples[t][i]);
            }
        }
        class_of.push(labels);
        representatives.push(reps.into_iter().map(|r| r.expect("nonempty class")).collect::<Vec<_>>());
    }
    let sizes: Vec<usize> = representatives.iter().map(|r| r.len()).collect();
    let action = (0..target.arrow_count())
        .map(|b| {
            let (s, t) = (target.src(b), target.dst(b));
            representatives[s]
                .iter()
                .map(|e| {
                    let moved = LanElement { arrow: target.compose(e.arrow, b), ..*e };
                    class_of[t][index[t][&moved]]
                })
                .collect()
        })
        .collect();
    Lan { functor: SetValuedFunctor { sizes, action }, representatives }
}

/// Sizes of `Lan_k X` by the orbit formula: for each component of the source with
/// representative `g`, the orbits of Aut(g) on `Hom(k g, ḡ) × X(g)`.
pub fn lan_sizes_by_orbits(
    source: &FiniteGroupoid,
    target: &FiniteGroupoid,
    k: &GroupoidFunctor,
    x: &SetValuedFunctor,
) -> Vec<usize> {
    let (_, reps) = source.components();
    (0..target.object_count())
        .map(|t| {
            reps.iter()
                .map(|&g| {
                    let homs = target.hom(k.object_map[g], t);
                    let pos: HashMap<usize, usize> = homs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
                    let n = x.sizes[g];
                    let mut uf = UnionFind::new(homs.len() * n);
                    for f in source.automorphisms(g) {
                        let kinv = target.inverse(k.arrow_map[f]);
                        for (i, &a) in homs.iter().enumerate() {
                            let a2 = pos[&target.compose(kinv, a)];
                            for v in 0..n {
                                uf.union(i * n + v, a2 * n + x.action[f][v]);
                            }
                        }
                    }
                    uf.classes().1
                })
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn free_orbit(base: &FiniteGroupoid) -> SetValuedFunctor {
        SetValuedFunctor::representable(base, 0)
    }

    #[test]
    fn hom_examples() {
        let z2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2));
        let x = free_orbit(&z2);
        x.validate(&z2).unwrap();
        assert_eq!(hom_count(&z2, &x, &x), 2);
        let homs = hom_set(&z2, &x, &x, usize::MAX);
        assert_eq!(homs.len(), 2);
        assert!(homs.iter().all(|h| is_natural(&z2, &x, &x, h)));
        assert!(homs.contains(&vec![vec![0, 1]]));
        let empty = SetValuedFunctor::empty(&z2);
        assert_eq!(hom_count(&z2, &empty, &x), 1);
        assert_eq!(hom_set(&z2, &empty, &x, 10).len(), 1);
    }

    #[test]
    fn lan_examples() {
        let triv = FiniteGroupoid::from_group(&FiniteGroup::trivial());
        let z2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2));
        let inc = GroupoidFunctor::from_group_hom(&[0]);
        let point = SetValuedFunctor::constant(&triv, 1);
        let lan = lan_along(&triv, &z2, &inc, &point);
        assert_eq!(lan.functor.sizes, vec![2]);
        lan.functor.validate(&z2).unwrap();
        let collapse = GroupoidFunctor::from_group_hom(&[0, 0]);
        let lan = lan_along(&z2, &triv, &collapse, &free_orbit(&z2));
        assert_eq!(lan.functor.sizes, vec![1]);
        let id = GroupoidFunctor::identity(&z2);
        let x = free_orbit(&z2);
        let lan = lan_along(&z2, &z2, &id, &x);
        assert_eq!(lan.functor.sizes, x.sizes);
        assert_eq!(lan_sizes_by_orbits(&z2, &z2, &id, &x), x.sizes);
    }
}
