//! Colored rooted trees: leaf-root and vertex corollas, grafting, canonical forms,
//! isomorphism tests and automorphisms.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Perm;
use crate::signature::{GSet, Signature};

/// A colored tree given by its root edge: the edge color and, unless the edge is a leaf,
/// the vertex on top of it with its ordered input subtrees.
///
/// The stick η_c is `ColoredTree { color: c, vertex: None }`. Vertices and leaves are ordered
/// root-first depth-first (planar order).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColoredTree {
    pub color: usize,
    pub vertex: Option<Vec<ColoredTree>>,
}

impl ColoredTree {
    pub fn stick(color: usize) -> ColoredTree {
        ColoredTree { color, vertex: None }
    }

    pub fn corolla(sig: &Signature) -> ColoredTree {
        ColoredTree {
            color: sig.output,
            vertex: Some(sig.inputs.iter().map(|&c| ColoredTree::stick(c)).collect()),
        }
    }

    /// A vertex of output color `color` on top of the given input subtrees.
    pub fn node(color: usize, inputs: Vec<ColoredTree>) -> ColoredTree {
        ColoredTree { color, vertex: Some(inputs) }
    }

    pub fn is_stick(&self) -> bool {
        self.vertex.is_none()
    }

    pub fn vertex_count(&self) -> usize {
        match &self.vertex {
            None => 0,
            Some(ch) => 1 + ch.iter().map(|c| c.vertex_count()).sum::<usize>(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match &self.vertex {
            None => 1,
            Some(ch) => ch.iter().map(|c| c.leaf_count()).sum(),
        }
    }

    /// Colors of the leaves in planar order.
    pub fn leaf_colors(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match &self.vertex {
            None => out.push(self.color),
            Some(ch) => ch.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// The leaf-root signature: leaves in planar order, root color as output.
    pub fn leaf_root(&self) -> Signature {
        Signature { inputs: self.leaf_colors(), output: self.color }
    }

    /// The corolla of every vertex, in planar order.
    pub fn vertex_corollas(&self) -> Vec<Signature> {
        let mut out = Vec::new();
        self.collect_corollas(&mut out);
        out
    }

    fn collect_corollas(&self, out: &mut Vec<Signature>) {
        if let Some(ch) = &self.vertex {
            out.push(Signature { inputs: ch.iter().map(|c| c.color).collect(), output: self.color });
            ch.iter().for_each(|c| c.collect_corollas(out));
        }
    }

    /// Recolors every edge by `g`.
    pub fn act(&self, colors: &GSet, g: usize) -> ColoredTree {
        ColoredTree {
            color: colors.act(g, self.color),
            vertex: self.vertex.as_ref().map(|ch| ch.iter().map(|c| c.act(colors, g)).collect()),
        }
    }

    /// The representative of the isomorphism class: every vertex's inputs sorted.
    pub fn canonical(&self) -> ColoredTree {
        ColoredTree {
            color: self.color,
            vertex: self.vertex.as_ref().map(|ch| {
                let mut v: Vec<ColoredTree> = ch.iter().map(|c| c.canonical()).collect();
                v.sort();
                v
            }),
        }
    }

    pub fn is_isomorphic(&self, other: &ColoredTree) -> bool {
        self.canonical() == other.canonical()
    }

    /// Replaces vertex `v` (planar order) by `assignment[v]`, for every vertex at once.
    /// Each `assignment[v]` must have leaf-root signature equal to the corolla of `v`.
    pub fn graft(&self, assignment: &[ColoredTree]) -> Result<ColoredTree> {
        if assignment.len() != self.vertex_count() {
            return Err(Error::InvalidTree(format!(
                "expected {} substituted trees, found {}",
                self.vertex_count(),
                assignment.len()
            )));
        }
        let mut next = 0;
        self.graft_from(assignment, &mut next)
    }

    fn graft_from(&self, assignment: &[ColoredTree], next: &mut usize) -> Result<ColoredTree> {
        let Some(ch) = &self.vertex else {
            return Ok(self.clone());
        };
        let v = *next;
        *next += 1;
        let corolla = Signature { inputs: ch.iter().map(|c| c.color).collect(), output: self.color };
        let inner = &assignment[v];
        if inner.leaf_root() != corolla {
            return Err(Error::LeafRootMismatch(format!("tree substituted at vertex {v}")));
        }
        let grafted: Vec<ColoredTree> = ch.iter().map(|c| c.graft_from(assignment, next)).collect::<Result<_>>()?;
        let mut it = grafted.into_iter();
        Ok(inner.replace_leaves(&mut it))
    }

    fn replace_leaves(&self, it: &mut impl Iterator<Item = ColoredTree>) -> ColoredTree {
        match &self.vertex {
            None => it.next().expect("leaf count matches"),
            Some(ch) => ColoredTree { color: self.color, vertex: Some(ch.iter().map(|c| c.replace_leaves(it)).collect()) },
        }
    }

    /// Grafts `inner` onto leaf `leaf` (planar order); the leaf color must equal the root color of `inner`.
    pub fn graft_at_leaf(&self, leaf: usize, inner: &ColoredTree) -> Result<ColoredTree> {
        let colors = self.leaf_colors();
        if leaf >= colors.len() || colors[leaf] != inner.color {
            return Err(Error::LeafRootMismatch(format!("leaf {leaf}")));
        }
        let mut count = 0;
        Ok(self.graft_leaf_from(leaf, inner, &mut count))
    }

    fn graft_leaf_from(&self, leaf: usize, inner: &ColoredTree, count: &mut usize) -> ColoredTree {
        match &self.vertex {
            None => {
                let here = *count;
                *count += 1;
                if here == leaf {
                    inner.clone()
                } else {
                    self.clone()
                }
            }
            Some(ch) => ColoredTree {
                color: self.color,
                vertex: Some(ch.iter().map(|c| c.graft_leaf_from(leaf, inner, count)).collect()),
            },
        }
    }

    /// Depth (in vertices) of each vertex in planar order; the root vertex has depth 0.
    pub fn vertex_depths(&self) -> Vec<usize> {
        fn walk(t: &ColoredTree, d: usize, out: &mut Vec<usize>) {
            if let Some(ch) = &t.vertex {
                out.push(d);
                ch.iter().for_each(|c| walk(c, d + 1, out));
            }
        }
        let mut out = Vec::new();
        walk(self, 0, &mut out);
        out
    }

    /// Whether the vertex of planar index `v` has a leaf among its inputs.
    pub fn vertices_touching_leaves(&self) -> Vec<bool> {
        fn walk(t: &ColoredTree, out: &mut Vec<bool>) {
            if let Some(ch) = &t.vertex {
                out.push(ch.iter().any(|c| c.is_stick()));
                ch.iter().for_each(|c| walk(c, out));
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn display<'a>(&'a self, colors: &'a GSet) -> TreeDisplay<'a> {
        TreeDisplay { tree: self, colors }
    }
}

pub struct TreeDisplay<'a> {
    tree: &'a ColoredTree,
    colors: &'a GSet,
}

impl fmt::Display for TreeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.colors.color_name(self.tree.color))?;
        if let Some(ch) = &self.tree.vertex {
            write!(f, "[")?;
            for (i, c) in ch.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", c.display(self.colors))?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Searches for a color-preserving isomorphism by trying every matching of inputs,
/// without using canonical forms.
pub fn brute_force_isomorphic(a: &ColoredTree, b: &ColoredTree) -> bool {
    if a.color != b.color {
        return false;
    }
    match (&a.vertex, &b.vertex) {
        (None, None) => true,
        (Some(x), Some(y)) if x.len() == y.len() => {
            fn assign(x: &[ColoredTree], y: &[ColoredTree], used: &mut Vec<bool>, i: usize) -> bool {
                if i == x.len() {
                    return true;
                }
                for j in 0..y.len() {
                    if !used[j] && brute_force_isomorphic(&x[i], &y[j]) {
                        used[j] = true;
                        if assign(x, y, used, i + 1) {
                            return true;
                        }
                        used[j] = false;
                    }
                }
                false
            }
            assign(x, y, &mut vec![false; y.len()], 0)
        }
        _ => false,
    }
}

/// An automorphism of a tree: vertex `v` goes to `vertex_map[v]`, input `j` of `v` goes to
/// input `input_perm[v](j)` of `vertex_map[v]`, and leaf `l` goes to `leaf_perm(l)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeAut {
    pub vertex_map: Vec<usize>,
    pub input_perm: Vec<Perm>,
    pub leaf_perm: Perm,
}

impl TreeAut {
    /// `self ∘ other`.
    pub fn compose(&self, other: &TreeAut) -> TreeAut {
        TreeAut {
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            input_perm: (0..other.vertex_map.len())
                .map(|v| self.input_perm[other.vertex_map[v]].compose(&other.input_perm[v]))
                .collect(),
            leaf_perm: self.leaf_perm.compose(&other.leaf_perm),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.leaf_perm.is_identity()
            && self.vertex_map.iter().enumerate().all(|(i, &v)| i == v)
            && self.input_perm.iter().all(|p| p.is_identity())
    }
}

/// Every automorphism of a tree preserving colors, computed from equal input subtrees.
/// The input should be canonical so that isomorphic inputs are literally equal.
pub fn automorphisms(tree: &ColoredTree) -> Vec<TreeAut> {
    let Some(ch) = &tree.vertex else {
        return vec![TreeAut { vertex_map: vec![], input_perm: vec![], leaf_perm: Perm::identity(1) }];
    };
    let m = ch.len();
    let child_auts: Vec<Vec<TreeAut>> = ch.iter().map(automorphisms).collect();
    let mut v_off = vec![1usize; m + 1];
    let mut l_off = vec![0usize; m + 1];
    for j in 0..m {
        v_off[j + 1] = v_off[j] + ch[j].vertex_count();
        l_off[j + 1] = l_off[j] + ch[j].leaf_count();
    }
    let n_v = v_off[m];
    let n_l = l_off[m];
    let mut out = Vec::new();
    for pi in Perm::all(m) {
        if (0..m).any(|j| ch[pi.apply(j)] != ch[j]) {
            continue;
        }
        let mut choice = vec![0usize; m];
        loop {
            let mut vertex_map = vec![0usize; n_v];
            let mut input_perm = vec![Perm::identity(0); n_v];
            let mut leaf = vec![0usize; n_l];
            input_perm[0] = pi.clone();
            for j in 0..m {
                let a = &child_auts[j][choice[j]];
                let k = pi.apply(j);
                for (v, &w) in a.vertex_map.iter().enumerate() {
                    vertex_map[v_off[j] + v] = v_off[k] + w;
                    input_perm[v_off[j] + v] = a.input_perm[v].clone();
                }
                for l in 0..ch[j].leaf_count() {
                    leaf[l_off[j] + l] = l_off[k] + a.leaf_perm.apply(l);
                }
            }
            out.push(TreeAut {
                vertex_map,
                input_perm,
                leaf_perm: Perm::from_images(leaf).expect("leaf map is a bijection"),
            });
            let mut j = 0;
            loop {
                if j == m {
                    break;
                }
                choice[j] += 1;
                if choice[j] < child_auts[j].len() {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
            if j == m {
                break;
            }
        }
    }
    out
}

/// Every isomorphism `a → b` carrying an edge of color `c` to an edge of color `color_map[c]`,
/// in the same format as [`TreeAut`]. With the identity map and `a == b` these are the automorphisms.
pub fn isomorphisms(a: &ColoredTree, b: &ColoredTree, color_map: &[usize]) -> Vec<TreeAut> {
    if color_map[a.color] != b.color {
        return vec![];
    }
    let (ca, cb) = match (&a.vertex, &b.vertex) {
        (None, None) => {
            return vec![TreeAut { vertex_map: vec![], input_perm: vec![], leaf_perm: Perm::identity(1) }]
        }
        (Some(ca), Some(cb)) if ca.len() == cb.len() => (ca, cb),
        _ => return vec![],
    };
    let m = ca.len();
    let offsets = |ch: &[ColoredTree]| {
        let mut v_off = vec![1usize; m + 1];
        let mut l_off = vec![0usize; m + 1];
        for j in 0..m {
            v_off[j + 1] = v_off[j] + ch[j].vertex_count();
            l_off[j + 1] = l_off[j] + ch[j].leaf_count();
        }
        (v_off, l_off)
    };
    let (va, la) = offsets(ca);
    let (vb, lb) = offsets(cb);
    if va[m] != vb[m] || la[m] != lb[m] {
        return vec![];
    }
    let pair: Vec<Vec<Vec<TreeAut>>> =
        (0..m).map(|j| (0..m).map(|k| isomorphisms(&ca[j], &cb[k], color_map)).collect()).collect();
    let mut out = Vec::new();
    for pi in Perm::all(m) {
        let parts: Vec<&Vec<TreeAut>> = (0..m).map(|j| &pair[j][pi.apply(j)]).collect();
        if parts.iter().any(|p| p.is_empty()) {
            continue;
        }
        let mut choice = vec![0usize; m];
        loop {
            let mut vertex_map = vec![0usize; va[m]];
            let mut input_perm = vec![Perm::identity(0); va[m]];
            let mut leaf = vec![0usize; la[m]];
            input_perm[0] = pi.clone();
            for j in 0..m {
                let iso = &parts[j][choice[j]];
                let k = pi.apply(j);
                for (v, &w) in iso.vertex_map.iter().enumerate() {
                    vertex_map[va[j] + v] = vb[k] + w;
                    input_perm[va[j] + v] = iso.input_perm[v].clone();
                }
                for l in 0..ca[j].leaf_count() {
                    leaf[la[j] + l] = lb[k] + iso.leaf_perm.apply(l);
                }
            }
            out.push(TreeAut {
                vertex_map,
                input_perm,
                leaf_perm: Perm::from_images(leaf).expect("leaf map is a bijection"),
            });
            let mut j = 0;
            while j < m {
                choice[j] += 1;
                if choice[j] < parts[j].len() {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
            if j == m {
                break;
            }
        }
    }
    out
}

/// The automorphism group as a [`FiniteGroup`] whose element `i` is `auts[i]`, with `i·j = auts[i] ∘ auts[j]`.
pub fn automorphism_group(auts: &[TreeAut]) -> FiniteGroup {
    let index: HashMap<&TreeAut, usize> = auts.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mul: Vec<Vec<usize>> = auts
        .iter()
        .map(|a| auts.iter().map(|b| index[&a.compose(b)]).collect())
        .collect();
    let id = auts.iter().position(|a| a.is_identity()).expect("identity automorphism");
    let labels = (0..auts.len()).map(|i| format!("φ{i}")).collect();
    FiniteGroup::from_table(labels, mul, id).expect("automorphisms form a group")
}

/// The orbit forest `⨿_{g ∈ G} g·C`: one component per group element, in element order.
pub fn orbit_corolla_forest(colors: &GSet, sig: &Signature) -> Vec<(usize, Signature)> {
    (0..colors.group().order())
        .map(|g| {
            (g, Signature { inputs: sig.inputs.iter().map(|&c| colors.act(g, c)).collect(), output: colors.act(g, sig.output) })
        })
        .collect()
}

/// Whether two signatures are isomorphic in Σ_C, that is related by a permutation of inputs.
pub fn sigma_isomorphic(a: &Signature, b: &Signature) -> bool {
    let (mut x, mut y) = (a.inputs.clone(), b.inputs.clone());
    x.sort_unstable();
    y.sort_unstable();
    a.output == b.output && x == y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary() -> ColoredTree {
        ColoredTree::corolla(&Signature::new(vec![0, 0], 0))
    }

    #[test]
    fn leaf_root_and_corollas() {
        let t = binary().graft_at_leaf(1, &binary()).unwrap();
        assert_eq!(t.leaf_root(), Signature::new(vec![0, 0, 0], 0));
        assert_eq!(t.vertex_corollas().len(), 2);
        assert_eq!(ColoredTree::stick(2).leaf_root(), Signature::new(vec![2], 2));
        assert!(ColoredTree::stick(2).vertex_corollas().is_empty());
    }

    #[test]
    fn grafting_corollas_is_identity() {
        let t = binary().graft_at_leaf(0, &binary()).unwrap();
        let corollas: Vec<ColoredTree> = t.vertex_corollas().iter().map(ColoredTree::corolla).collect();
        assert_eq!(t.graft(&corollas).unwrap(), t);
        let c = ColoredTree::corolla(&Signature::new(vec![0; 3], 0));
        assert_eq!(c.graft(std::slice::from_ref(&t)).unwrap(), t);
        assert!(c.graft(&[ColoredTree::stick(0)]).is_err());
    }

    #[test]
    fn automorphism_counts() {
        let cat = binary().graft_at_leaf(0, &binary()).unwrap().canonical();
        assert_eq!(automorphisms(&cat).len(), 2);
        let bal = ColoredTree::node(0, vec![binary(), binary()]);
        let auts = automorphisms(&bal);
        assert_eq!(auts.len(), 8);
        assert_eq!(automorphism_group(&auts).order(), 8);
    }
}
