//! (G,Σ)-families: per-arity collections of subgroups of G × Σ_n^op.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom, Subgroup};
use crate::perm::Perm;

/// The group G × Σ_n^op. The pair `(g, σ)` has index `g * n! + rank(σ)` and
/// `(g, σ)(h, ρ) = (gh, ρ ∘ σ)`, so that `(g, σ)` acting by `C ↦ g C σ` is a left action.
#[derive(Clone, Debug)]
pub struct SigmaProduct {
    base: FiniteGroup,
    arity: usize,
    perms: Vec<Perm>,
    group: FiniteGroup,
}

impl SigmaProduct {
    pub fn new(base: &FiniteGroup, arity: usize) -> SigmaProduct {
        let perms = Perm::all(arity);
        let sigma_op = FiniteGroup::symmetric(arity).opposite();
        let group = base.product(&sigma_op);
        SigmaProduct { base: base.clone(), arity, perms, group }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn element(&self, g: usize, sigma: &Perm) -> usize {
        g * self.perms.len() + sigma.rank()
    }

    /// The pair `(g, σ)` named by an element index.
    pub fn split(&self, x: usize) -> (usize, &Perm) {
        let k = self.perms.len();
        (x / k, &self.perms[x % k])
    }

    pub fn perm_count(&self) -> usize {
        self.perms.len()
    }

    /// The subgroup {e} × Σ_n^op.
    pub fn sigma_part(&self) -> Subgroup {
        let e = self.base.identity();
        Subgroup::new((0..self.perms.len()).map(|p| e * self.perms.len() + p).collect())
    }

    /// Γ ∩ ({e} × Σ_n^op) = {(e, id)}.
    pub fn is_graph(&self, h: &Subgroup) -> bool {
        let e = self.base.identity();
        h.members().iter().all(|&x| {
            let (g, s) = self.split(x);
            g != e || s.is_identity()
        })
    }

    /// For a graph subgroup Γ, the pairs `(h, φ(h))` of its underlying homomorphism φ: H → Σ_n,
    /// recovered from the members `(h, φ(h)⁻¹)`. Returns `None` when Γ is not the graph of a homomorphism.
    pub fn graph_homomorphism(&self, h: &Subgroup) -> Option<Vec<(usize, Perm)>> {
        let mut phi: BTreeMap<usize, Perm> = BTreeMap::new();
        for &x in h.members() {
            let (g, s) = self.split(x);
            if phi.insert(g, s.inverse()).is_some() {
                return None;
            }
        }
        for (&a, pa) in &phi {
            for (&b, pb) in &phi {
                let ab = self.base.mul(a, b);
                match phi.get(&ab) {
                    Some(pab) if *pab == pa.compose(pb) => {}
                    _ => return None,
                }
            }
        }
        Some(phi.into_iter().collect())
    }

    pub fn describe(&self, x: usize) -> String {
        let (g, s) = self.split(x);
        format!("({},{})", self.base.label(g), s)
    }

    pub fn describe_subgroup(&self, h: &Subgroup) -> String {
        let items: Vec<String> = h.members().iter().map(|&x| self.describe(x)).collect();
        format!("{{{}}}", items.join(", "))
    }
}

/// All Γ ≤ G × Σ_n^op with Γ ∩ ({e} × Σ_n^op) trivial, in canonical subgroup order.
pub fn enumerate_graph_subgroups(base: &FiniteGroup, arity: usize) -> Vec<Subgroup> {
    let prod = SigmaProduct::new(base, arity);
    prod.group().subgroups().into_iter().filter(|h| prod.is_graph(h)).collect()
}

/// A (G,Σ)-family over a declared finite arity range.
#[derive(Clone, Debug)]
pub struct GSigmaFamily {
    base: FiniteGroup,
    ambient: BTreeMap<usize, SigmaProduct>,
    members: BTreeMap<usize, BTreeSet<Subgroup>>,
}

/// Why a candidate family fails to be a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyViolation {
    /// `sub ≤ member` with `member` in the family but `sub` not.
    MissingSubgroup { arity: usize, member: Subgroup, sub: Subgroup },
    /// `conjugator · member · conjugator⁻¹` is not in the family.
    MissingConjugate { arity: usize, member: Subgroup, conjugator: usize, conjugate: Subgroup },
    /// A listed member is not a subgroup.
    NotSubgroup { arity: usize, members: Vec<usize> },
}

impl fmt::Display for FamilyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyViolation::MissingSubgroup { arity, member, sub } => write!(
                f,
                "arity {arity}: subgroup {:?} of member {:?} is missing",
                sub.members(),
                member.members()
            ),
            FamilyViolation::MissingConjugate { arity, member, conjugator, conjugate } => write!(
                f,
                "arity {arity}: conjugate of {:?} by element {conjugator} is {:?}, which is missing",
                member.members(),
                conjugate.members()
            ),
            FamilyViolation::NotSubgroup { arity, members } => {
                write!(f, "arity {arity}: {members:?} is not a subgroup")
            }
        }
    }
}

impl GSigmaFamily {
    /// A candidate family taken verbatim (not closed); check it with [`GSigmaFamily::validate`].
    pub fn from_members(
        base: &FiniteGroup,
        members: BTreeMap<usize, Vec<Subgroup>>,
    ) -> GSigmaFamily {
        let ambient = members.keys().map(|&n| (n, SigmaProduct::new(base, n))).collect();
        let members = members.into_iter().map(|(n, v)| (n, v.into_iter().collect())).collect();
        GSigmaFamily { base: base.clone(), ambient, members }
    }

    /// The smallest family containing the given subgroups (closed under subgroups and conjugation).
    pub fn generated_by(base: &FiniteGroup, generators: BTreeMap<usize, Vec<Subgroup>>) -> GSigmaFamily {
        let mut fam = GSigmaFamily::from_members(base, BTreeMap::new());
        for (n, gens) in generators {
            let prod = SigmaProduct::new(base, n);
            let g = prod.group();
            let mut set = BTreeSet::new();
            for h in gens {
                for c in 0..g.order() {
                    let conj = g.conjugate_subgroup(c, &h);
                    for k in conj.subgroups_in(g) {
                        set.insert(k);
                    }
                }
            }
            fam.ambient.insert(n, prod);
            fam.members.insert(n, set);
        }
        fam
    }

    fn from_filter(
        base: &FiniteGroup,
        arities: impl IntoIterator<Item = usize>,
        keep: impl Fn(&SigmaProduct, &Subgroup) -> bool,
    ) -> GSigmaFamily {
        let mut ambient = BTreeMap::new();
        let mut members = BTreeMap::new();
        for n in arities {
            let prod = SigmaProduct::new(base, n);
            let set = prod.group().subgroups().into_iter().filter(|h| keep(&prod, h)).collect();
            members.insert(n, set);
            ambient.insert(n, prod);
        }
        GSigmaFamily { base: base.clone(), ambient, members }
    }

    /// Every subgroup of every G × Σ_n^op.
    pub fn all(base: &FiniteGroup, arities: impl IntoIterator<Item = usize>) -> GSigmaFamily {
        GSigmaFamily::from_filter(base, arities, |_, _| true)
    }

    /// Only the trivial subgroups.
    pub fn trivial(base: &FiniteGroup, arities: impl IntoIterator<Item = usize>) -> GSigmaFamily {
        GSigmaFamily::from_filter(base, arities, |_, h| h.is_trivial())
    }

    /// The graph subgroups Γ with Γ ∩ Σ_n^op trivial.
    pub fn graph(base: &FiniteGroup, arities: impl IntoIterator<Item = usize>) -> GSigmaFamily {
        GSigmaFamily::from_filter(base, arities, |p, h| p.is_graph(h))
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.keys().copied()
    }

    pub fn max_arity(&self) -> Option<usize> {
        self.members.keys().next_back().copied()
    }

    pub fn ambient(&self, arity: usize) -> Result<&SigmaProduct> {
        self.ambient
            .get(&arity)
            .ok_or_else(|| Error::OutOfRange(format!("arity {arity}")))
    }

    pub fn members(&self, arity: usize) -> Result<&BTreeSet<Subgroup>> {
        self.members
            .get(&arity)
            .ok_or_else(|| Error::OutOfRange(format!("arity {arity}")))
    }

    pub fn contains(&self, arity: usize, h: &Subgroup) -> Result<bool> {
        Ok(self.members(arity)?.contains(h))
    }

    /// Checks closure under subgroups and conjugation in every declared arity.
    pub fn validate(&self) -> std::result::Result<(), FamilyViolation> {
        for (&n, set) in &self.members {
            let prod = &self.ambient[&n];
            let g = prod.group();
            for h in set {
                if !g.is_subgroup(h.members()) {
                    return Err(FamilyViolation::NotSubgroup { arity: n, members: h.members().to_vec() });
                }
            }
            for h in set {
                for k in h.subgroups_in(g) {
                    if !set.contains(&k) {
                        return Err(FamilyViolation::MissingSubgroup { arity: n, member: h.clone(), sub: k });
                    }
                }
                for c in 0..g.order() {
                    let conj = g.conjugate_subgroup(c, h);
                    if !set.contains(&conj) {
                        return Err(FamilyViolation::MissingConjugate {
                            arity: n,
                            member: h.clone(),
                            conjugator: c,
                            conjugate: conj,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `(φ*F̄)_n = { H ≤ G × Σ_n^op : (φ × id)(H) ∈ F̄_n }` for a homomorphism φ: G → Ḡ.
    pub fn pullback(
        source: &FiniteGroup,
        phi: &GroupHom,
        target_family: &GSigmaFamily,
    ) -> Result<GSigmaFamily> {
        GroupHom::new(source, target_family.base(), phi.images().to_vec())?;
        let mut ambient = BTreeMap::new();
        let mut members = BTreeMap::new();
        for n in target_family.arities() {
            let prod = SigmaProduct::new(source, n);
            let target = target_family.ambient(n)?;
            let k = prod.perm_count();
            let bar = target_family.members(n)?;
            let set = prod
                .group()
                .subgroups()
                .into_iter()
                .filter(|h| {
                    let image = h.map(|x| phi.apply(x / k) * k + x % k);
                    debug_assert!(target.group().is_subgroup(image.members()));
                    bar.contains(&image)
                })
                .collect();
            members.insert(n, set);
            ambient.insert(n, prod);
        }
        Ok(GSigmaFamily { base: source.clone(), ambient, members })
    }

    /// `F_n ∩ Aut(C)`: the members that stabilize the entries of a signature, given as a predicate.
    pub fn restrict_to(&self, arity: usize, stabilizes: impl Fn(&Subgroup) -> bool) -> Result<Vec<Subgroup>> {
        Ok(self.members(arity)?.iter().filter(|h| stabilizes(h)).cloned().collect())
    }

    /// True when every member of `self` is a member of `other` in each shared arity.
    pub fn is_subfamily_of(&self, other: &GSigmaFamily) -> bool {
        self.members.iter().all(|(n, set)| match other.members.get(n) {
            Some(o) => set.is_subset(o),
            None => false,
        })
    }
}

/// Subgroups of a group with trivial projection to the first factor of a product `A × B`
/// (`(a, b)` indexed as `a * |B| + b`), the meet of the trivial family on `A` with all of `B`.
pub fn trivial_first_projection(a: &FiniteGroup, b: &FiniteGroup) -> Vec<Subgroup> {
    let prod = a.product(b);
    let m = b.order();
    prod.subgroups()
        .into_iter()
        .filter(|k| k.members().iter().all(|&x| x / m == a.identity()))
        .collect()
}

/// Number of graph subgroups predicted by counting pairs (H ≤ G, φ: H → Σ_n).
pub fn count_partial_homomorphisms(base: &FiniteGroup, arity: usize) -> usize {
    let sym = FiniteGroup::symmetric(arity);
    base.subgroups()
        .iter()
        .map(|h| {
            let hg = crate::group::restrict(base, h);
            count_homomorphisms(&hg, &sym)
        })
        .sum()
}

/// Number of homomorphisms between two finite groups, by backtracking over images of generators.
pub fn count_homomorphisms(source: &FiniteGroup, target: &FiniteGroup) -> usize {
    let n = source.order();
    let mut count = 0;
    let mut images = vec![usize::MAX; n];
    images[source.identity()] = target.identity();
    fn extend(
        source: &FiniteGroup,
        target: &FiniteGroup,
        images: &mut Vec<usize>,
        count: &mut usize,
    ) {
        let n = source.order();
        let next = (0..n).find(|&x| images[x] == usize::MAX);
        let Some(x) = next else {
            let ok = (0..n).all(|a| {
                (0..n).all(|b| images[source.mul(a, b)] == target.mul(images[a], images[b]))
            });
            if ok {
                *count += 1;
            }
            return;
        };
        for y in 0..target.order() {
            let saved = images.clone();
            if propagate(source, target, images, x, y) {
                extend(source, target, images, count);
            }
            *images = saved;
        }
    }
    fn propagate(
        source: &FiniteGroup,
        target: &FiniteGroup,
        images: &mut [usize],
        x: usize,
        y: usize,
    ) -> bool {
        images[x] = y;
        // close the partial map under products with already assigned elements
        let mut changed = true;
        while changed {
            changed = false;
            for a in 0..source.order() {
                if images[a] == usize::MAX {
                    continue;
                }
                for b in 0..source.order() {
                    if images[b] == usize::MAX {
                        continue;
                    }
                    let ab = source.mul(a, b);
                    let v = target.mul(images[a], images[b]);
                    if images[ab] == usize::MAX {
                        images[ab] = v;
                        changed = true;
                    } else if images[ab] != v {
                        return false;
                    }
                }
            }
        }
        true
    }
    extend(source, target, &mut images, &mut count);
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(enumerate_graph_subgroups(&z2, 2).len(), 3);
        assert_eq!(enumerate_graph_subgroups(&z2, 3).len(), 5);
        for n in 0..4 {
            assert_eq!(enumerate_graph_subgroups(&FiniteGroup::trivial(), n).len(), 1);
        }
    }

    #[test]
    fn graph_subgroups_are_graphs_of_homomorphisms() {
        let z4 = FiniteGroup::cyclic(4);
        for n in 0..4 {
            let prod = SigmaProduct::new(&z4, n);
            let graphs = enumerate_graph_subgroups(&z4, n);
            for g in &graphs {
                assert!(prod.graph_homomorphism(g).is_some());
            }
            assert_eq!(graphs.len(), count_partial_homomorphisms(&z4, n));
        }
    }

    #[test]
    fn families_validate() {
        let z2 = FiniteGroup::cyclic(2);
        assert!(GSigmaFamily::graph(&z2, 0..=3).validate().is_ok());
        assert!(GSigmaFamily::all(&z2, 0..=2).validate().is_ok());
        let prod = SigmaProduct::new(&z2, 1);
        let only_top = GSigmaFamily::from_members(&z2, BTreeMap::from([(1, vec![prod.group().whole()])]));
        match only_top.validate() {
            Err(FamilyViolation::MissingSubgroup { sub, .. }) => assert!(sub.is_trivial()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pullback_identity_and_collapse() {
        let z2 = FiniteGroup::cyclic(2);
        let graph = GSigmaFamily::graph(&z2, 0..=3);
        let same = GSigmaFamily::pullback(&z2, &GroupHom::identity(&z2), &graph).unwrap();
        for n in 0..=3 {
            assert_eq!(same.members(n).unwrap(), graph.members(n).unwrap());
        }
        let triv = FiniteGroup::trivial();
        let inc = GroupHom::new(&triv, &z2, vec![0]).unwrap();
        let pulled = GSigmaFamily::pullback(&triv, &inc, &graph).unwrap();
        let trivial = GSigmaFamily::trivial(&triv, 0..=3);
        for n in 0..=3 {
            assert_eq!(pulled.members(n).unwrap(), trivial.members(n).unwrap());
        }
        let all = GSigmaFamily::all(&triv, 0..=2);
        let to_triv = GroupHom::trivial(&z2, &triv);
        let pulled = GSigmaFamily::pullback(&z2, &to_triv, &all).unwrap();
        for n in 0..=2 {
            assert_eq!(pulled.members(n).unwrap().len(), SigmaProduct::new(&z2, n).group().subgroups().len());
        }
    }

    #[test]
    fn generated_family_is_closed() {
        let z2 = FiniteGroup::cyclic(2);
        let prod = SigmaProduct::new(&z2, 2);
        let tau = Perm::from_images(vec![1, 0]).unwrap();
        let gen = prod.group().generate(&[prod.element(1, &tau)]);
        let fam = GSigmaFamily::generated_by(&z2, BTreeMap::from([(2, vec![gen])]));
        assert!(fam.validate().is_ok());
        assert_eq!(fam.members(2).unwrap().len(), 2);
    }

    #[test]
    fn meet_with_trivial_first_factor() {
        let z2 = FiniteGroup::cyclic(2);
        let subs = trivial_first_projection(&z2, &z2);
        assert_eq!(subs.len(), 2);
    }
}
