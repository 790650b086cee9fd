//! Small worked examples with known answers: an orbit forest over the quartic roots of unity,
//! stabilizing graph subgroups over `ℤ/2`, and leaf-root corollas of two colored trees.

use crate::family::{enumerate_graph_subgroups, SigmaProduct};
use crate::group::FiniteGroup;
use crate::perm::Perm;
use crate::signature::{act_on_signature, stabilizes, GSet, Signature};
use crate::tree::{orbit_corolla_forest, sigma_isomorphic, ColoredTree};

/// Outcome of one replayed example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// `G = {1, i, -1, -i}` acting on `{a, -a, ia, -ia, b, ib}` by multiplication, with `-b = b`.
pub fn quartic_colors() -> GSet {
    let group = FiniteGroup::cyclic_labelled(&["1", "i", "-1", "-i"]);
    let colors = ["a", "-a", "ia", "-ia", "b", "ib"].iter().map(|s| s.to_string()).collect();
    // i: a → ia → -a → -ia → a, b → ib → b.
    let i_acts = [2, 3, 1, 0, 5, 4];
    let mut action = vec![(0..6).collect::<Vec<usize>>()];
    for k in 1..4 {
        let prev: &Vec<usize> = &action[k - 1];
        action.push(prev.iter().map(|&c| i_acts[c]).collect());
    }
    GSet::new(group, colors, action).expect("multiplication by i is an action")
}

/// The orbit forest of `(a, ib, ib, -a; b)` together with which components are isomorphic in
/// `Σ_C` and how many arrows `C → iC` exist in `G ⋉ Σ_C^op`.
#[derive(Clone, Debug)]
pub struct QuarticForest {
    pub components: Vec<(String, Signature)>,
    pub isomorphic_pairs: Vec<(usize, usize)>,
    pub arrows_to_i_component: usize,
}

pub fn quartic_forest() -> QuarticForest {
    let colors = quartic_colors();
    let sig = Signature::new(vec![0, 5, 5, 1], 4);
    let forest = orbit_corolla_forest(&colors, &sig);
    let mut pairs = Vec::new();
    for i in 0..forest.len() {
        for j in i + 1..forest.len() {
            if sigma_isomorphic(&forest[i].1, &forest[j].1) {
                pairs.push((i, j));
            }
        }
    }
    let target = &forest[1].1;
    let group = colors.group();
    let arrows = (0..group.order())
        .flat_map(|g| Perm::all(4).into_iter().map(move |s| (g, s)))
        .filter(|(g, s)| act_on_signature(&colors, *g, s, &sig).as_ref() == Ok(target))
        .count();
    QuarticForest {
        components: forest.into_iter().map(|(g, s)| (group.label(g).to_string(), s)).collect(),
        isomorphic_pairs: pairs,
        arrows_to_i_component: arrows,
    }
}

/// `ℤ/2` acting on `{a, -a, b}` by swapping `a` and `-a`.
pub fn sign_colors() -> GSet {
    let colors = ["a", "-a", "b"].iter().map(|s| s.to_string()).collect();
    GSet::new(FiniteGroup::cyclic(2), colors, vec![vec![0, 1, 2], vec![1, 0, 2]]).expect("swap is an action")
}

/// Number of non-trivial graph subgroups of `G × Σ_n^op` stabilizing a signature.
pub fn nontrivial_stabilizing_graph_subgroups(colors: &GSet, sig: &Signature) -> usize {
    let product = SigmaProduct::new(colors.group(), sig.arity());
    enumerate_graph_subgroups(colors.group(), sig.arity())
        .iter()
        .filter(|h| !h.is_trivial() && stabilizes(colors, &product, h, sig))
        .count()
}

/// The two signatures `(a, b, b, -a; b)` and `(a, a, -a, -a; b)` over [`sign_colors`].
pub fn sign_signatures() -> [Signature; 2] {
    [Signature::new(vec![0, 2, 2, 1], 2), Signature::new(vec![0, 0, 1, 1], 2)]
}

/// Colors `{a, b, c}` and two trees: one with leaves `b, c` and a nullary vertex, one with no
/// leaves at all.
pub fn leaf_root_trees() -> (GSet, ColoredTree, ColoredTree) {
    let colors = GSet::trivial_action(FiniteGroup::trivial(), vec!["a".into(), "b".into(), "c".into()]);
    let (a, b, c) = (0, 1, 2);
    let nullary_a = ColoredTree::node(a, vec![]);
    let left = ColoredTree::node(a, vec![ColoredTree::stick(b), nullary_a]);
    let right = ColoredTree::node(b, vec![ColoredTree::stick(c)]);
    let t = ColoredTree::node(a, vec![left, right]);
    let s = ColoredTree::node(a, vec![ColoredTree::node(b, vec![ColoredTree::node(c, vec![])])]);
    (colors, t, s)
}

/// Replays every example and compares with the expected facts.
pub fn replay_all() -> Vec<ExampleCheck> {
    let mut out = Vec::new();
    let q = quartic_forest();
    let colors = quartic_colors();
    let names: Vec<String> =
        q.components.iter().map(|(g, s)| format!("{g}: {}", s.display(&colors))).collect();
    out.push(ExampleCheck {
        name: "quartic orbit forest components",
        passed: q.components.len() == 4
            && q.components[0].1 == Signature::new(vec![0, 5, 5, 1], 4)
            && q.components[1].1 == Signature::new(vec![2, 4, 4, 3], 5),
        detail: names.join("; "),
    });
    out.push(ExampleCheck {
        name: "quartic isomorphic pairs",
        passed: q.isomorphic_pairs == vec![(0, 2), (1, 3)],
        detail: format!("{:?}", q.isomorphic_pairs),
    });
    out.push(ExampleCheck {
        name: "quartic arrows C -> iC",
        passed: q.arrows_to_i_component > 0,
        detail: format!("{} arrows, none with trivial group part", q.arrows_to_i_component),
    });
    let sign = sign_colors();
    for (name, sig) in ["sign stabilizers of (a,b,b,-a;b)", "sign stabilizers of (a,a,-a,-a;b)"]
        .into_iter()
        .zip(sign_signatures())
    {
        let n = nontrivial_stabilizing_graph_subgroups(&sign, &sig);
        out.push(ExampleCheck { name, passed: n == 2, detail: format!("{n} non-trivial") });
    }
    let (abc, t, s) = leaf_root_trees();
    let (lt, ls) = (t.leaf_root(), s.leaf_root());
    out.push(ExampleCheck {
        name: "leaf-root of the tree with leaves",
        passed: lt == Signature::new(vec![1, 2], 0),
        detail: lt.display(&abc).to_string(),
    });
    out.push(ExampleCheck {
        name: "leaf-root of the tree without leaves",
        passed: ls == Signature::new(vec![], 0),
        detail: ls.display(&abc).to_string(),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_replay() {
        for c in replay_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn quartic_arrows_need_group_part() {
        let colors = quartic_colors();
        let q = quartic_forest();
        let (c, ic) = (&q.components[0].1, &q.components[1].1);
        let pure = Perm::all(4).into_iter().any(|s| act_on_signature(&colors, 0, &s, c).as_ref() == Ok(ic));
        assert!(!pure);
        assert_eq!(q.arrows_to_i_component, 4);
    }

    #[test]
    fn tree_vertex_corollas() {
        let (_, t, s) = leaf_root_trees();
        assert_eq!(t.vertex_corollas().len(), 4);
        assert_eq!(s.vertex_corollas().len(), 3);
        assert_eq!(ColoredTree::stick(2).leaf_root(), Signature::new(vec![2], 2));
    }
}
