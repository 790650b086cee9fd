//! Families of subgroups of finite groupoids: for every object a collection of subgroups of its
//! automorphism group closed under subgroups and under conjugation by arrows. Subgroups are sets
//! of automorphism arrows.

use std::collections::BTreeSet;

use crate::groupoid::{FiniteGroupoid, GroupoidFunctor, WreathGroupoid};
use crate::group::Subgroup;

/// Every subgroup of `Aut(x)`, as sorted arrow sets.
pub fn automorphism_subgroups(g: &FiniteGroupoid, x: usize) -> Vec<Subgroup> {
    let (group, auts) = g.automorphism_group(x);
    group.subgroups().into_iter().map(|h| Subgroup::new(h.members().iter().map(|&i| auts[i]).collect())).collect()
}

/// `f ∘ h ∘ f⁻¹` for every `h ∈ H`, with `f: x → y` and `H ≤ Aut(x)`.
pub fn conjugate_along(g: &FiniteGroupoid, f: usize, h: &Subgroup) -> Subgroup {
    let inv = g.inverse(f);
    Subgroup::new(h.members().iter().map(|&a| g.compose(g.compose(inv, a), f)).collect())
}

/// The image of a set of arrows under a functor.
pub fn image_under(phi: &GroupoidFunctor, h: &Subgroup) -> Subgroup {
    Subgroup::new(h.members().iter().map(|&a| phi.arrow_map[a]).collect())
}

/// A closure failure found by [`GroupoidFamily::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupoidFamilyViolation {
    NotSubgroupClosed { object: usize, member: Subgroup, missing: Subgroup },
    NotConjugationClosed { object: usize, member: Subgroup, arrow: usize, missing: Subgroup },
}

/// A family of subgroups of a finite groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidFamily {
    pub members: Vec<BTreeSet<Subgroup>>,
}

impl GroupoidFamily {
    /// The subgroups of each `Aut(x)` satisfying a predicate.
    pub fn from_predicate(g: &FiniteGroupoid, mut keep: impl FnMut(usize, &Subgroup) -> bool) -> GroupoidFamily {
        GroupoidFamily {
            members: (0..g.object_count())
                .map(|x| automorphism_subgroups(g, x).into_iter().filter(|h| keep(x, h)).collect())
                .collect(),
        }
    }

    pub fn all(g: &FiniteGroupoid) -> GroupoidFamily {
        GroupoidFamily::from_predicate(g, |_, _| true)
    }

    pub fn trivial(g: &FiniteGroupoid) -> GroupoidFamily {
        GroupoidFamily::from_predicate(g, |_, h| h.order() == 1)
    }

    pub fn contains(&self, x: usize, h: &Subgroup) -> bool {
        self.members[x].contains(h)
    }

    /// Closure under subgroups and under conjugation by every arrow out of each object.
    pub fn validate(&self, g: &FiniteGroupoid) -> Result<(), GroupoidFamilyViolation> {
        for x in 0..g.object_count() {
            let lattice = automorphism_subgroups(g, x);
            for h in &self.members[x] {
                for k in lattice.iter().filter(|k| k.members().iter().all(|a| h.contains(*a))) {
                    if !self.contains(x, k) {
                        return Err(GroupoidFamilyViolation::NotSubgroupClosed {
                            object: x,
                            member: h.clone(),
                            missing: k.clone(),
                        });
                    }
                }
                for &f in g.arrows_from(x) {
                    let c = conjugate_along(g, f, h);
                    if !self.contains(g.dst(f), &c) {
                        return Err(GroupoidFamilyViolation::NotConjugationClosed {
                            object: x,
                            member: h.clone(),
                            arrow: f,
                            missing: c,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `(φ*F̄)_x = { H ≤ Aut(x) : φ(H) ∈ F̄_{φ(x)} }`.
    pub fn pullback(source: &FiniteGroupoid, phi: &GroupoidFunctor, target: &GroupoidFamily) -> GroupoidFamily {
        GroupoidFamily::from_predicate(source, |x, h| target.contains(phi.object_map[x], &image_under(phi, h)))
    }

    /// `F ⊓ F̄` on the product groupoid: subgroups whose two projections lie in `F` and `F̄`.
    pub fn meet(
        first: &FiniteGroupoid,
        first_family: &GroupoidFamily,
        second: &FiniteGroupoid,
        second_family: &GroupoidFamily,
    ) -> (FiniteGroupoid, GroupoidFamily) {
        let product = first.product(second);
        let (no, na) = (second.object_count(), second.arrow_count());
        let family = GroupoidFamily::from_predicate(&product, |x, k| {
            let p = Subgroup::new(k.members().iter().map(|&a| a / na).collect());
            let q = Subgroup::new(k.members().iter().map(|&a| a % na).collect());
            first_family.contains(x / no, &p) && second_family.contains(x % no, &q)
        });
        (product, family)
    }
}

/// Membership in `F^⋉n` on `Σ_n ≀ 𝒢`: for each `i`, the part of `H` whose permutation fixes `i`,
/// projected to its `i`-th component, lies in `F_{x_i}`.
pub fn wreath_power_contains(w: &WreathGroupoid, family: &GroupoidFamily, x: usize, h: &Subgroup) -> bool {
    let tuple = &w.tuples[x];
    (0..w.size).all(|i| {
        let part = Subgroup::new(
            h.members()
                .iter()
                .filter(|&&a| w.arrows[a].0.apply(i) == i)
                .map(|&a| w.arrows[a].1[i])
                .collect(),
        );
        family.contains(tuple[i], &part)
    })
}

/// `F^⋉n` with every member listed.
pub fn wreath_power_family(w: &WreathGroupoid, family: &GroupoidFamily) -> GroupoidFamily {
    GroupoidFamily::from_predicate(&w.groupoid, |x, h| wreath_power_contains(w, family, x, h))
}

/// The block inclusion `(Σ_n ≀ 𝒢) × (Σ_m ≀ 𝒢) → Σ_{n+m} ≀ 𝒢`, with the product indexed as in
/// [`FiniteGroupoid::product`].
pub fn block_inclusion(left: &WreathGroupoid, right: &WreathGroupoid, sum: &WreathGroupoid) -> GroupoidFunctor {
    let mut object_map = Vec::new();
    for a in &left.tuples {
        for b in &right.tuples {
            object_map.push(sum.object_of(&[a.clone(), b.clone()].concat()).expect("concatenated tuple"));
        }
    }
    let mut arrow_map = Vec::new();
    for (s, fs) in &left.arrows {
        for (t, gs) in &right.arrows {
            arrow_map.push(sum.arrow_of(&s.block_sum(t), &[fs.clone(), gs.clone()].concat()).expect("block arrow"));
        }
    }
    GroupoidFunctor { object_map, arrow_map }
}

/// A member of `F^⋉n ⊓ F^⋉m` whose image under the block inclusion is not in `F^⋉(n+m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockInclusionWitness {
    pub object: usize,
    pub subgroup: Subgroup,
}

/// Checks `F^⋉n ⊓ F^⋉m ⊆ ι*F^⋉(n+m)` for a family on `𝒢`.
pub fn check_block_inclusion(
    g: &FiniteGroupoid,
    family: &GroupoidFamily,
    n: usize,
    m: usize,
) -> Result<usize, BlockInclusionWitness> {
    let (left, right, sum) = (WreathGroupoid::new(g, n), WreathGroupoid::new(g, m), WreathGroupoid::new(g, n + m));
    let (product, meet) = GroupoidFamily::meet(
        &left.groupoid,
        &wreath_power_family(&left, family),
        &right.groupoid,
        &wreath_power_family(&right, family),
    );
    let iota = block_inclusion(&left, &right, &sum);
    debug_assert!(iota.validate(&product, &sum.groupoid).is_ok());
    let mut checked = 0;
    for (x, members) in meet.members.iter().enumerate() {
        for h in members {
            if !wreath_power_contains(&sum, family, iota.object_map[x], &image_under(&iota, h)) {
                return Err(BlockInclusionWitness { object: x, subgroup: h.clone() });
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// `Σ_n ≀ φ` for a functor `φ: 𝒢̄ → 𝒢`.
pub fn wreath_functor(source: &WreathGroupoid, target: &WreathGroupoid, phi: &GroupoidFunctor) -> GroupoidFunctor {
    GroupoidFunctor {
        object_map: source
            .tuples
            .iter()
            .map(|t| target.object_of(&t.iter().map(|&x| phi.object_map[x]).collect::<Vec<_>>()).expect("tuple"))
            .collect(),
        arrow_map: source
            .arrows
            .iter()
            .map(|(s, fs)| target.arrow_of(s, &fs.iter().map(|&f| phi.arrow_map[f]).collect::<Vec<_>>()).expect("arrow"))
            .collect(),
    }
}

/// Compares `(Σ_n ≀ φ)*F^⋉n` with `(φ*F)^⋉n` objectwise; returns the first object where they differ.
pub fn check_wreath_pullback(
    source: &FiniteGroupoid,
    target: &FiniteGroupoid,
    phi: &GroupoidFunctor,
    family: &GroupoidFamily,
    n: usize,
) -> Result<(), usize> {
    let (ws, wt) = (WreathGroupoid::new(source, n), WreathGroupoid::new(target, n));
    let wphi = wreath_functor(&ws, &wt, phi);
    let lhs = GroupoidFamily::pullback(&ws.groupoid, &wphi, &wreath_power_family(&wt, family));
    let rhs = wreath_power_family(&ws, &GroupoidFamily::pullback(source, phi, family));
    match (0..ws.groupoid.object_count()).find(|&x| lhs.members[x] != rhs.members[x]) {
        Some(x) => Err(x),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::groupoid::{semidirect_groupoid, GroupoidAction};

    fn bz2() -> FiniteGroupoid {
        FiniteGroupoid::from_group(&FiniteGroup::cyclic(2))
    }

    #[test]
    fn closure_and_violations() {
        let g = bz2();
        assert!(GroupoidFamily::all(&g).validate(&g).is_ok());
        assert!(GroupoidFamily::trivial(&g).validate(&g).is_ok());
        let whole_only = GroupoidFamily::from_predicate(&g, |_, h| h.order() == 2);
        assert!(matches!(whole_only.validate(&g), Err(GroupoidFamilyViolation::NotSubgroupClosed { .. })));
    }

    #[test]
    fn wreath_power_of_all_is_all() {
        let g = bz2();
        let w = WreathGroupoid::new(&g, 2);
        assert_eq!(w.groupoid.automorphisms(0).len(), 8);
        let f = wreath_power_family(&w, &GroupoidFamily::all(&g));
        assert_eq!(f, GroupoidFamily::all(&w.groupoid));
        let t = wreath_power_family(&w, &GroupoidFamily::trivial(&g));
        t.validate(&w.groupoid).unwrap();
        // Members meet the arrows with identity permutation trivially: {e} and two swaps.
        let brute = automorphism_subgroups(&w.groupoid, 0)
            .into_iter()
            .filter(|h| h.members().iter().all(|&a| {
                let (s, fs) = &w.arrows[a];
                !(s.is_identity() && fs.iter().any(|&f| f != g.identity(0)))
            }))
            .count();
        assert_eq!(t.members[0].len(), brute);
        assert_eq!(brute, 3);
    }

    #[test]
    fn block_inclusion_over_z2() {
        let g = bz2();
        for family in [GroupoidFamily::all(&g), GroupoidFamily::trivial(&g)] {
            for n in 1..=3 {
                for m in 1..=(4 - n) {
                    assert!(check_block_inclusion(&g, &family, n, m).is_ok(), "n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn wreath_power_commutes_with_pullback() {
        let z2 = FiniteGroup::cyclic(2);
        let c = FiniteGroupoid::discrete(vec!["a".into(), "-a".into(), "b".into()]);
        let action = GroupoidAction::on_discrete(&z2, &c, &[vec![0, 1, 2], vec![1, 0, 2]]);
        let (semi, pairs) = semidirect_groupoid(&z2, &c, &action).unwrap();
        let target = bz2();
        let phi = GroupoidFunctor { object_map: vec![0; 3], arrow_map: pairs.iter().map(|&(g, _)| g).collect() };
        phi.validate(&semi, &target).unwrap();
        for family in [GroupoidFamily::all(&target), GroupoidFamily::trivial(&target)] {
            for n in 1..=2 {
                assert_eq!(check_wreath_pullback(&semi, &target, &phi, &family, n), Ok(()));
            }
        }
    }
}
