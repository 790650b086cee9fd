//! The pseudo-indexing-system condition, checked over all uncolored trees up to a vertex bound.

use crate::family::GSigmaFamily;
use crate::group::Subgroup;
use crate::enumerate::enumerate_all_trees;
use crate::tree::{automorphism_group, automorphisms, ColoredTree, TreeAut};

/// A tree and a subgroup of G × Aut(T) meeting every vertex condition but failing the leaf-root condition.
#[derive(Clone, Debug)]
pub struct PisViolation {
    pub tree: ColoredTree,
    /// Members as pairs of a group element and an automorphism.
    pub subgroup: Vec<(usize, TreeAut)>,
    /// Human-readable members `(g, leaf permutation)`.
    pub description: String,
}

/// Outcome of [`check_pseudo_indexing`]; `violation` is `None` when verified up to `bound`.
#[derive(Clone, Debug)]
pub struct PisReport {
    pub bound: usize,
    pub trees_checked: usize,
    pub subgroups_checked: usize,
    pub violation: Option<PisViolation>,
}

impl PisReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// For every uncolored tree `T` with at most `bound` vertices (vertex arities and leaf count in the
/// family's arity range) and every `Λ ≤ G × Aut(T)`: if for each vertex `v` the image of
/// `Λ ∩ (G × Aut_v(T))` in G × Σ_{|v|}^op lies in the family, then the image of `Λ` in
/// G × Σ_n^op (through the leaf permutation) lies in the family.
///
/// An automorphism `φ` with input permutation `π` at a fixed vertex and leaf permutation `λ`
/// is sent to `(g, π⁻¹)` and `(g, λ⁻¹)` respectively, which are homomorphisms.
pub fn check_pseudo_indexing(family: &GSigmaFamily, bound: usize) -> PisReport {
    let arities: Vec<usize> = family.arities().collect();
    let base = family.base();
    let trees = enumerate_all_trees(1, bound, &arities);
    let mut report = PisReport { bound, trees_checked: 0, subgroups_checked: 0, violation: None };
    for tree in trees {
        report.trees_checked += 1;
        let auts = automorphisms(&tree);
        let aut_group = automorphism_group(&auts);
        let k = auts.len();
        let product = base.product(&aut_group);
        let vertex_arities: Vec<usize> = tree.vertex_corollas().iter().map(|s| s.arity()).collect();
        let n = tree.leaf_count();
        for lambda in product.subgroups() {
            report.subgroups_checked += 1;
            let vertex_ok = vertex_arities.iter().enumerate().all(|(v, &m)| {
                let prod = family.ambient(m).expect("vertex arity in range");
                let image = Subgroup::new(
                    lambda
                        .members()
                        .iter()
                        .filter(|&&x| auts[x % k].vertex_map[v] == v)
                        .map(|&x| prod.element(x / k, &auts[x % k].input_perm[v].inverse()))
                        .collect(),
                );
                family.contains(m, &image).unwrap_or(false)
            });
            if !vertex_ok {
                continue;
            }
            let prod = family.ambient(n).expect("leaf count in range");
            let image = lambda.map(|x| prod.element(x / k, &auts[x % k].leaf_perm.inverse()));
            if !family.contains(n, &image).unwrap_or(false) {
                let members: Vec<(usize, TreeAut)> =
                    lambda.members().iter().map(|&x| (x / k, auts[x % k].clone())).collect();
                let description = prod.describe_subgroup(&image);
                report.violation = Some(PisViolation { tree, subgroup: members, description });
                return report;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::SigmaProduct;
    use crate::group::FiniteGroup;
    use std::collections::BTreeMap;

    #[test]
    fn all_and_graph_families_pass() {
        let z2 = FiniteGroup::cyclic(2);
        assert!(check_pseudo_indexing(&GSigmaFamily::all(&z2, 0..=3), 3).passed());
        assert!(check_pseudo_indexing(&GSigmaFamily::graph(&z2, 0..=3), 3).passed());
    }

    #[test]
    fn trivial_unary_level_fails_at_the_stick() {
        let z2 = FiniteGroup::cyclic(2);
        let mut members = BTreeMap::new();
        for n in 0..=3 {
            let prod = SigmaProduct::new(&z2, n);
            let subs = prod.group().subgroups();
            members.insert(n, if n == 1 { vec![prod.group().trivial_subgroup()] } else { subs });
        }
        let fam = GSigmaFamily::from_members(&z2, members);
        assert!(fam.validate().is_ok());
        let report = check_pseudo_indexing(&fam, 3);
        let v = report.violation.expect("violation");
        assert!(v.tree.is_stick());
    }
}
