//! Enumeration of colored trees and alternating trees up to isomorphism.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::signature::{GSet, Signature};
use crate::tree::{automorphisms, sigma_isomorphic, ColoredTree, TreeAut};

/// Limits for tree enumeration.
#[derive(Clone, Copy, Debug)]
pub struct TreeQuery {
    /// Maximum number of vertices; `None` is only accepted for reduced enumeration.
    pub bound: Option<usize>,
    /// Largest allowed vertex arity.
    pub max_vertex_arity: usize,
    /// Exclude vertices of arity 0 and 1.
    pub reduced: bool,
}

/// One isomorphism class: a canonical representative and its automorphisms.
#[derive(Clone, Debug)]
pub struct TreeClass {
    pub tree: ColoredTree,
    pub automorphisms: Vec<TreeAut>,
}

impl TreeClass {
    pub fn aut_order(&self) -> usize {
        self.automorphisms.len()
    }
}

struct Generator<'a> {
    color_count: usize,
    max_vertex_arity: usize,
    reduced: bool,
    vertex_ok: &'a dyn Fn(&Signature) -> bool,
    memo: HashMap<(usize, usize, usize), Vec<ColoredTree>>,
}

impl Generator<'_> {
    /// Canonical trees with root color `c`, at most `budget` vertices and at most `leaves` leaves.
    fn rooted(&mut self, c: usize, budget: usize, leaves: usize) -> Vec<ColoredTree> {
        if let Some(v) = self.memo.get(&(c, budget, leaves)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if leaves >= 1 {
            out.push(ColoredTree::stick(c));
        }
        if budget >= 1 {
            let mut pool = Vec::new();
            for d in 0..self.color_count {
                pool.extend(self.rooted(d, budget - 1, leaves));
            }
            pool.sort();
            let pool_info: Vec<(usize, usize)> = pool.iter().map(|t| (t.vertex_count(), t.leaf_count())).collect();
            let min_arity = if self.reduced { 2 } else { 0 };
            for m in min_arity..=self.max_vertex_arity {
                let mut chosen = Vec::with_capacity(m);
                self.choose(&pool, &pool_info, 0, m, budget - 1, leaves, &mut chosen, c, &mut out);
            }
        }
        out.sort();
        self.memo.insert((c, budget, leaves), out.clone());
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &self,
        pool: &[ColoredTree],
        info: &[(usize, usize)],
        start: usize,
        remaining: usize,
        vertices_left: usize,
        leaves_left: usize,
        chosen: &mut Vec<usize>,
        color: usize,
        out: &mut Vec<ColoredTree>,
    ) {
        if remaining == 0 {
            let children: Vec<ColoredTree> = chosen.iter().map(|&i| pool[i].clone()).collect();
            let sig = Signature { inputs: children.iter().map(|t| t.color).collect(), output: color };
            if (self.vertex_ok)(&sig) {
                out.push(ColoredTree::node(color, children));
            }
            return;
        }
        for i in start..pool.len() {
            let (v, l) = info[i];
            if v <= vertices_left && l <= leaves_left {
                chosen.push(i);
                self.choose(pool, info, i, remaining - 1, vertices_left - v, leaves_left - l, chosen, color, out);
                chosen.pop();
            }
        }
    }
}

/// Isomorphism classes of trees `T` with `lr(T) ≅ target` in Σ_C, each vertex corolla accepted
/// by `vertex_ok` (which must be invariant under permuting inputs), in canonical order.
pub fn enumerate_trees(
    colors: &GSet,
    target: &Signature,
    query: TreeQuery,
    vertex_ok: &dyn Fn(&Signature) -> bool,
) -> Result<Vec<TreeClass>> {
    let bound = match (query.bound, query.reduced) {
        (Some(b), _) => b,
        (None, true) => target.arity().saturating_sub(1),
        (None, false) => {
            return Err(Error::Unbounded("tree enumeration without a vertex bound needs reduced vertices".into()))
        }
    };
    let mut gen = Generator {
        color_count: colors.color_count(),
        max_vertex_arity: query.max_vertex_arity,
        reduced: query.reduced,
        vertex_ok,
        memo: HashMap::new(),
    };
    let trees = gen.rooted(target.output, bound, target.arity());
    Ok(trees
        .into_iter()
        .filter(|t| sigma_isomorphic(&t.leaf_root(), target))
        .map(|t| {
            let automorphisms = automorphisms(&t);
            TreeClass { tree: t, automorphisms }
        })
        .collect())
}

/// All canonical trees with at most `bound` vertices, vertex arities and leaf counts in `arities`,
/// over the given number of colors, ordered by vertex count and then canonically.
pub fn enumerate_all_trees(color_count: usize, bound: usize, arities: &[usize]) -> Vec<ColoredTree> {
    let max_vertex_arity = arities.iter().copied().max().unwrap_or(0);
    let ok = |s: &Signature| arities.contains(&s.arity());
    let mut gen = Generator { color_count, max_vertex_arity, reduced: false, vertex_ok: &ok, memo: HashMap::new() };
    let mut out = Vec::new();
    for c in 0..color_count {
        out.extend(gen.rooted(c, bound, max_vertex_arity));
    }
    out.retain(|t| arities.contains(&t.leaf_count()));
    out.sort_by(|a, b| (a.vertex_count(), a).cmp(&(b.vertex_count(), b)));
    out
}

/// An alternating tree: vertices at even depth are active, at odd depth inert, and
/// every vertex touching a leaf or the root is active.
#[derive(Clone, Debug)]
pub struct AlternatingClass {
    pub tree: ColoredTree,
    /// Inert flag of every vertex in planar order.
    pub inert: Vec<bool>,
    pub automorphisms: Vec<TreeAut>,
}

impl AlternatingClass {
    pub fn inert_count(&self) -> usize {
        self.inert.iter().filter(|&&b| b).count()
    }
}

struct AltGenerator<'a> {
    color_count: usize,
    max_vertex_arity: usize,
    active_ok: &'a dyn Fn(&Signature) -> bool,
    inert_ok: &'a dyn Fn(&Signature) -> bool,
    memo: HashMap<(bool, usize, usize, usize), Vec<(ColoredTree, usize)>>,
}

impl AltGenerator<'_> {
    /// Canonical subtrees rooted at an active (or inert) vertex of color `c`, with exactly
    /// `k` inert vertices and at most `leaves` leaves, paired with their leaf counts.
    fn rooted(&mut self, inert: bool, c: usize, k: usize, leaves: usize) -> Vec<(ColoredTree, usize)> {
        if let Some(v) = self.memo.get(&(inert, c, k, leaves)) {
            return v.clone();
        }
        let own = usize::from(inert);
        let mut out = Vec::new();
        if k >= own {
            let rest = k - own;
            // pool entries: (tree, inert count, leaf count)
            let mut pool: Vec<(ColoredTree, usize, usize)> = Vec::new();
            for d in 0..self.color_count {
                if !inert {
                    pool.push((ColoredTree::stick(d), 0, 1));
                }
                for kk in 0..=rest {
                    if inert || kk >= 1 {
                        for (t, l) in self.rooted(!inert, d, kk, leaves) {
                            pool.push((t, kk, l));
                        }
                    }
                }
            }
            pool.sort_by(|a, b| a.0.cmp(&b.0));
            for m in 0..=self.max_vertex_arity {
                let mut chosen = Vec::new();
                self.choose(&pool, 0, m, rest, leaves, &mut chosen, inert, c, &mut out);
            }
        }
        out.sort();
        self.memo.insert((inert, c, k, leaves), out.clone());
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &self,
        pool: &[(ColoredTree, usize, usize)],
        start: usize,
        remaining: usize,
        inert_left: usize,
        leaves_left: usize,
        chosen: &mut Vec<usize>,
        inert: bool,
        color: usize,
        out: &mut Vec<(ColoredTree, usize)>,
    ) {
        if remaining == 0 {
            if inert_left != 0 {
                return;
            }
            let children: Vec<ColoredTree> = chosen.iter().map(|&i| pool[i].0.clone()).collect();
            let sig = Signature { inputs: children.iter().map(|t| t.color).collect(), output: color };
            let ok = if inert { (self.inert_ok)(&sig) } else { (self.active_ok)(&sig) };
            if ok {
                let leaves = chosen.iter().map(|&i| pool[i].2).sum();
                out.push((ColoredTree::node(color, children), leaves));
            }
            return;
        }
        for i in start..pool.len() {
            let (_, k, l) = &pool[i];
            if *k <= inert_left && *l <= leaves_left {
                chosen.push(i);
                self.choose(pool, i, remaining - 1, inert_left - k, leaves_left - l, chosen, inert, color, out);
                chosen.pop();
            }
        }
    }
}

/// Isomorphism classes of alternating trees with leaf-root isomorphic to `target` in Σ_C and
/// exactly `k` inert vertices. Active and inert vertex corollas are filtered separately.
pub fn enumerate_alternating(
    colors: &GSet,
    target: &Signature,
    k: usize,
    max_vertex_arity: usize,
    active_ok: &dyn Fn(&Signature) -> bool,
    inert_ok: &dyn Fn(&Signature) -> bool,
) -> Vec<AlternatingClass> {
    let mut gen = AltGenerator {
        color_count: colors.color_count(),
        max_vertex_arity,
        active_ok,
        inert_ok,
        memo: HashMap::new(),
    };
    gen.rooted(false, target.output, k, target.arity())
        .into_iter()
        .map(|(t, _)| t)
        .filter(|t| sigma_isomorphic(&t.leaf_root(), target))
        .map(|t| {
            let inert = t.vertex_depths().iter().map(|d| d % 2 == 1).collect();
            let automorphisms = automorphisms(&t);
            AlternatingClass { tree: t, inert, automorphisms }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_color() -> GSet {
        GSet::single()
    }

    fn binary_only(s: &Signature) -> bool {
        s.arity() == 2
    }

    #[test]
    fn binary_tree_classes() {
        let colors = one_color();
        let q = TreeQuery { bound: Some(4), max_vertex_arity: 2, reduced: false };
        let three = enumerate_trees(&colors, &Signature::new(vec![0; 3], 0), q, &binary_only).unwrap();
        assert_eq!(three.len(), 1);
        assert_eq!(three[0].aut_order(), 2);
        let four = enumerate_trees(&colors, &Signature::new(vec![0; 4], 0), q, &binary_only).unwrap();
        let mut orders: Vec<usize> = four.iter().map(|c| c.aut_order()).collect();
        orders.sort();
        assert_eq!(orders, vec![2, 8]);
        let labelings: usize = four.iter().map(|c| 24 / c.aut_order()).sum();
        assert_eq!(labelings, 15);
    }

    #[test]
    fn bound_zero_gives_the_stick() {
        let colors = GSet::trivial_action(crate::group::FiniteGroup::trivial(), vec!["a".into(), "b".into()]);
        let q = TreeQuery { bound: Some(0), max_vertex_arity: 2, reduced: false };
        let all = |_: &Signature| true;
        assert_eq!(enumerate_trees(&colors, &Signature::new(vec![0], 0), q, &all).unwrap().len(), 1);
        assert!(enumerate_trees(&colors, &Signature::new(vec![1], 0), q, &all).unwrap().is_empty());
        let unbounded = TreeQuery { bound: None, max_vertex_arity: 2, reduced: false };
        assert!(enumerate_trees(&colors, &Signature::new(vec![0], 0), unbounded, &all).is_err());
    }

    #[test]
    fn alternating_counts() {
        let colors = one_color();
        let all = |_: &Signature| true;
        let zero = enumerate_alternating(&colors, &Signature::new(vec![0; 2], 0), 0, 2, &all, &all);
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].tree.vertex_count(), 1);
        let binary = |s: &Signature| s.arity() == 2;
        let unary = |s: &Signature| s.arity() == 1;
        let one = enumerate_alternating(&colors, &Signature::new(vec![0; 2], 0), 1, 2, &unary, &binary);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].tree.vertex_count(), 4);
        assert!(one.iter().all(|c| c.inert_count() == 1));
    }
}
