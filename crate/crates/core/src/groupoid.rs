//! Finite groupoids with explicit arrow sets, functors between them, and the
//! semidirect, wreath, product and coproduct constructions.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Perm;
use crate::unionfind::UnionFind;

/// A finite groupoid. Arrows are numbered; `compose(f, g)` is `g ∘ f` for `f: x → y`, `g: y → z`.
#[derive(Clone, Debug)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    src: Vec<usize>,
    dst: Vec<usize>,
    labels: Vec<String>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
    out: Vec<Vec<usize>>,
    out_pos: Vec<usize>,
    comp: Vec<Vec<u32>>,
}

/// One arrow in a groupoid description.
#[derive(Clone, Debug)]
pub struct ArrowSpec {
    pub src: usize,
    pub dst: usize,
    pub label: String,
}

impl FiniteGroupoid {
    /// Builds a groupoid from objects, arrows and a composition rule `compose(f, g) = g ∘ f`.
    /// Identities and inverses are located from the composition; the category axioms are
    /// only checked by [`FiniteGroupoid::validate`].
    pub fn build(
        objects: Vec<String>,
        arrows: Vec<ArrowSpec>,
        mut compose: impl FnMut(usize, usize) -> usize,
    ) -> Result<FiniteGroupoid> {
        let n_obj = objects.len();
        let n_arr = arrows.len();
        let mut out = vec![Vec::new(); n_obj];
        let mut out_pos = vec![0; n_arr];
        for (i, a) in arrows.iter().enumerate() {
            if a.src >= n_obj || a.dst >= n_obj {
                return Err(Error::InvalidGroupoid(format!("arrow {i} has an unknown endpoint")));
            }
            out_pos[i] = out[a.src].len();
            out[a.src].push(i);
        }
        let mut comp = Vec::with_capacity(n_arr);
        for (f, a) in arrows.iter().enumerate() {
            let row: Vec<u32> = out[a.dst]
                .iter()
                .map(|&g| {
                    let h = compose(f, g);
                    u32::try_from(h).expect("arrow index fits in u32")
                })
                .collect();
            for (&g, &h) in out[a.dst].iter().zip(&row) {
                let h = h as usize;
                if h >= n_arr || arrows[h].src != a.src || arrows[h].dst != arrows[g].dst {
                    return Err(Error::InvalidGroupoid(format!(
                        "composite of arrows {f} and {g} has the wrong endpoints"
                    )));
                }
            }
            comp.push(row);
        }
        let src: Vec<usize> = arrows.iter().map(|a| a.src).collect();
        let dst: Vec<usize> = arrows.iter().map(|a| a.dst).collect();
        let labels = arrows.into_iter().map(|a| a.label).collect();
        let mut g = FiniteGroupoid {
            objects,
            src,
            dst,
            labels,
            identity: vec![usize::MAX; n_obj],
            inverse: vec![usize::MAX; n_arr],
            out,
            out_pos,
            comp,
        };
        for x in 0..n_obj {
            let id = g.out[x].iter().copied().find(|&e| {
                g.dst[e] == x && g.out[x].iter().all(|&f| g.compose(e, f) == f)
            });
            match id {
                Some(e) => g.identity[x] = e,
                None => {
                    return Err(Error::InvalidGroupoid(format!("object {} has no identity", g.objects[x])))
                }
            }
        }
        for f in 0..n_arr {
            let (x, y) = (g.src[f], g.dst[f]);
            let inv = g.out[y].iter().copied().find(|&h| g.dst[h] == x && g.compose(f, h) == g.identity[x]);
            match inv {
                Some(h) => g.inverse[f] = h,
                None => return Err(Error::InvalidGroupoid(format!("arrow {} is not invertible", g.labels[f]))),
            }
        }
        Ok(g)
    }

    /// A group as a one-object groupoid; the arrow for `a` is numbered `a` and `a ∘ b = ab`.
    pub fn from_group(group: &FiniteGroup) -> FiniteGroupoid {
        let arrows = (0..group.order())
            .map(|a| ArrowSpec { src: 0, dst: 0, label: group.label(a).to_string() })
            .collect();
        FiniteGroupoid::build(vec!["*".into()], arrows, |f, g| group.mul(g, f)).expect("group is a groupoid")
    }

    /// Objects with identity arrows only.
    pub fn discrete(objects: Vec<String>) -> FiniteGroupoid {
        let arrows = (0..objects.len())
            .map(|x| ArrowSpec { src: x, dst: x, label: format!("id_{}", objects[x]) })
            .collect();
        FiniteGroupoid::build(objects, arrows, |f, _| f).expect("discrete groupoid")
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.src.len()
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow_label(&self, f: usize) -> &str {
        &self.labels[f]
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn dst(&self, f: usize) -> usize {
        self.dst[f]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn inverse(&self, f: usize) -> usize {
        self.inverse[f]
    }

    /// Arrows with source `x`.
    pub fn arrows_from(&self, x: usize) -> &[usize] {
        &self.out[x]
    }

    /// `g ∘ f`.
    pub fn compose(&self, f: usize, g: usize) -> usize {
        debug_assert_eq!(self.dst[f], self.src[g]);
        self.comp[f][self.out_pos[g]] as usize
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        self.out[x].iter().copied().filter(|&f| self.dst[f] == y).collect()
    }

    /// Automorphisms of `x`, sorted by arrow number.
    pub fn automorphisms(&self, x: usize) -> Vec<usize> {
        self.hom(x, x)
    }

    /// Aut(x) as a group; element `i` is the arrow `auts[i]` and `i · j` is `auts[i] ∘ auts[j]`.
    pub fn automorphism_group(&self, x: usize) -> (FiniteGroup, Vec<usize>) {
        let auts = self.automorphisms(x);
        let pos: HashMap<usize, usize> = auts.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mul = auts
            .iter()
            .map(|&a| auts.iter().map(|&b| pos[&self.compose(b, a)]).collect())
            .collect();
        let labels = auts.iter().map(|&a| self.labels[a].clone()).collect();
        let id = pos[&self.identity[x]];
        let group = FiniteGroup::from_table(labels, mul, id).expect("automorphisms form a group");
        (group, auts)
    }

    /// Connected component index of every object, and one representative per component
    /// (the smallest object number in it).
    pub fn components(&self) -> (Vec<usize>, Vec<usize>) {
        let mut uf = UnionFind::new(self.object_count());
        for f in 0..self.arrow_count() {
            uf.union(self.src[f], self.dst[f]);
        }
        let (labels, count) = uf.classes();
        let mut reps = vec![usize::MAX; count];
        for (x, &c) in labels.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = x;
            }
        }
        (labels, reps)
    }

    /// For every object, an arrow from its component representative to it.
    pub fn transports(&self) -> Vec<usize> {
        let (comp, reps) = self.components();
        let mut t = vec![usize::MAX; self.object_count()];
        for &r in &reps {
            t[r] = self.identity[r];
            let mut queue = VecDeque::from([r]);
            while let Some(x) = queue.pop_front() {
                for &f in &self.out[x] {
                    let y = self.dst[f];
                    if t[y] == usize::MAX {
                        t[y] = self.compose(t[x], f);
                        queue.push_back(y);
                    }
                }
            }
        }
        debug_assert!(t.iter().enumerate().all(|(x, &a)| self.dst[a] == x && reps[comp[x]] == self.src[a]));
        t
    }

    /// Exhaustive check of the groupoid axioms.
    pub fn validate(&self) -> Result<()> {
        for f in 0..self.arrow_count() {
            let (x, y) = (self.src[f], self.dst[f]);
            if self.compose(self.identity[x], f) != f || self.compose(f, self.identity[y]) != f {
                return Err(Error::InvalidGroupoid(format!("unit law fails at {}", self.labels[f])));
            }
            let inv = self.inverse[f];
            if self.compose(f, inv) != self.identity[x] || self.compose(inv, f) != self.identity[y] {
                return Err(Error::InvalidGroupoid(format!("inverse law fails at {}", self.labels[f])));
            }
            for &g in &self.out[y] {
                let gf = self.compose(f, g);
                for &h in &self.out[self.dst[g]] {
                    if self.compose(gf, h) != self.compose(f, self.compose(g, h)) {
                        return Err(Error::InvalidGroupoid(format!(
                            "associativity fails at ({}, {}, {})",
                            self.labels[f], self.labels[g], self.labels[h]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The product groupoid; object `(x, y)` is `x * |B| + y` and arrow `(f, g)` is `f * |B₁| + g`.
    pub fn product(&self, other: &FiniteGroupoid) -> FiniteGroupoid {
        let (nb, mb) = (other.object_count(), other.arrow_count());
        let mut objects = Vec::new();
        for x in &self.objects {
            for y in &other.objects {
                objects.push(format!("({x},{y})"));
            }
        }
        let mut arrows = Vec::new();
        for f in 0..self.arrow_count() {
            for g in 0..mb {
                arrows.push(ArrowSpec {
                    src: self.src[f] * nb + other.src[g],
                    dst: self.dst[f] * nb + other.dst[g],
                    label: format!("({},{})", self.labels[f], other.labels[g]),
                });
            }
        }
        FiniteGroupoid::build(objects, arrows, |p, q| {
            self.compose(p / mb, q / mb) * mb + other.compose(p % mb, q % mb)
        })
        .expect("product of groupoids")
    }

    /// Disjoint union; returns the groupoid with the object and arrow offsets of each summand.
    pub fn coproduct(parts: &[FiniteGroupoid]) -> (FiniteGroupoid, Vec<usize>, Vec<usize>) {
        let mut obj_off = Vec::new();
        let mut arr_off = Vec::new();
        let (mut no, mut na) = (0, 0);
        for p in parts {
            obj_off.push(no);
            arr_off.push(na);
            no += p.object_count();
            na += p.arrow_count();
        }
        let mut objects = Vec::new();
        let mut arrows = Vec::new();
        let mut owner = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            objects.extend(p.objects.iter().cloned());
            for f in 0..p.arrow_count() {
                arrows.push(ArrowSpec {
                    src: p.src[f] + obj_off[k],
                    dst: p.dst[f] + obj_off[k],
                    label: p.labels[f].clone(),
                });
                owner.push(k);
            }
        }
        let g = FiniteGroupoid::build(objects, arrows, |f, h| {
            let k = owner[f];
            parts[k].compose(f - arr_off[k], h - arr_off[k]) + arr_off[k]
        })
        .expect("coproduct of groupoids");
        (g, obj_off, arr_off)
    }
}

/// An action of a group on a groupoid by functors: `objects[g][x]`, `arrows[g][f]`.
#[derive(Clone, Debug)]
pub struct GroupoidAction {
    pub objects: Vec<Vec<usize>>,
    pub arrows: Vec<Vec<usize>>,
}

impl GroupoidAction {
    /// The action on a discrete groupoid given by a permutation action on objects.
    pub fn on_discrete(group: &FiniteGroup, discrete: &FiniteGroupoid, act: &[Vec<usize>]) -> GroupoidAction {
        let arrows = (0..group.order())
            .map(|g| (0..discrete.object_count()).map(|x| discrete.identity(act[g][x])).collect())
            .collect();
        GroupoidAction { objects: act.to_vec(), arrows }
    }

    /// Each group element acts by a functor, the identity acts trivially and `(gh)·- = g·(h·-)`.
    pub fn validate(&self, group: &FiniteGroup, c: &FiniteGroupoid) -> Result<()> {
        if self.objects.len() != group.order() || self.arrows.len() != group.order() {
            return Err(Error::InvalidAction("one object and arrow map per group element is required".into()));
        }
        let e = group.identity();
        for x in 0..c.object_count() {
            if self.objects[e][x] != x {
                return Err(Error::InvalidAction("identity does not act trivially".into()));
            }
        }
        for g in 0..group.order() {
            let fun = GroupoidFunctor { object_map: self.objects[g].clone(), arrow_map: self.arrows[g].clone() };
            fun.validate(c, c)
                .map_err(|e| Error::InvalidAction(format!("element {}: {e}", group.label(g))))?;
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                for x in 0..c.object_count() {
                    if self.objects[gh][x] != self.objects[g][self.objects[h][x]] {
                        return Err(Error::InvalidAction("action is not compatible with multiplication".into()));
                    }
                }
                for f in 0..c.arrow_count() {
                    if self.arrows[gh][f] != self.arrows[g][self.arrows[h][f]] {
                        return Err(Error::InvalidAction("action is not compatible with multiplication".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The semidirect groupoid G ⋉ C: an arrow `c → c'` is a pair `(g, f: gc → c')`, and
/// `(h, f') ∘ (g, f) = (hg, f' ∘ h(f))`. Returns the groupoid and each arrow's pair `(g, f)`.
pub fn semidirect_groupoid(
    group: &FiniteGroup,
    c: &FiniteGroupoid,
    action: &GroupoidAction,
) -> Result<(FiniteGroupoid, Vec<(usize, usize)>)> {
    action.validate(group, c)?;
    let mut pairs = Vec::new();
    let mut arrows = Vec::new();
    let mut index = HashMap::new();
    for x in 0..c.object_count() {
        for g in 0..group.order() {
            let gx = action.objects[g][x];
            for &f in c.arrows_from(gx) {
                index.insert((g, f), pairs.len());
                pairs.push((g, f));
                arrows.push(ArrowSpec {
                    src: x,
                    dst: c.dst(f),
                    label: format!("({},{})", group.label(g), c.arrow_label(f)),
                });
            }
        }
    }
    let groupoid = FiniteGroupoid::build(c.objects().to_vec(), arrows, |a, b| {
        let (g, f) = pairs[a];
        let (h, f2) = pairs[b];
        let hf = action.arrows[h][f];
        index[&(group.mul(h, g), c.compose(hf, f2))]
    })?;
    Ok((groupoid, pairs))
}

/// The wreath groupoid Σ_n ≀ C with its tuple and arrow data.
#[derive(Clone, Debug)]
pub struct WreathGroupoid {
    pub groupoid: FiniteGroupoid,
    /// The tuple of C-objects behind every object.
    pub tuples: Vec<Vec<usize>>,
    /// `(σ, (f_i))` behind every arrow, with `f_i: c_i → d_{σ(i)}`.
    pub arrows: Vec<(Perm, Vec<usize>)>,
    pub size: usize,
    tuple_index: HashMap<Vec<usize>, usize>,
    arrow_index: HashMap<(Perm, Vec<usize>), usize>,
}

impl WreathGroupoid {
    pub fn new(c: &FiniteGroupoid, n: usize) -> WreathGroupoid {
        let base = c.object_count();
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..n {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..base).map(move |x| {
                        let mut t2 = t.clone();
                        t2.push(x);
                        t2
                    })
                })
                .collect();
        }
        let tuple_index: HashMap<Vec<usize>, usize> =
            tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let perms = Perm::all(n);
        let mut data = Vec::new();
        let mut specs = Vec::new();
        for (s, t) in tuples.iter().enumerate() {
            for sigma in &perms {
                // choices of f_i out of c_i
                let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
                for &ci in t {
                    choices = choices
                        .into_iter()
                        .flat_map(|fs| {
                            c.arrows_from(ci).iter().map(move |&f| {
                                let mut fs2 = fs.clone();
                                fs2.push(f);
                                fs2
                            })
                        })
                        .collect();
                }
                for fs in choices {
                    let mut d = vec![0; n];
                    for i in 0..n {
                        d[sigma.apply(i)] = c.dst(fs[i]);
                    }
                    let label = format!(
                        "({};{})",
                        sigma,
                        fs.iter().map(|&f| c.arrow_label(f)).collect::<Vec<_>>().join(",")
                    );
                    specs.push(ArrowSpec { src: s, dst: tuple_index[&d], label });
                    data.push((sigma.clone(), fs));
                }
            }
        }
        let arrow_index: HashMap<(Perm, Vec<usize>), usize> =
            data.iter().enumerate().map(|(i, d)| (d.clone(), i)).collect();
        let objects = tuples
            .iter()
            .map(|t| format!("({})", t.iter().map(|&x| c.object_name(x)).collect::<Vec<_>>().join(",")))
            .collect();
        let groupoid = FiniteGroupoid::build(objects, specs, |a, b| {
            let (sigma, fs) = &data[a];
            let (tau, gs) = &data[b];
            let hs: Vec<usize> = (0..n).map(|i| c.compose(fs[i], gs[sigma.apply(i)])).collect();
            arrow_index[&(tau.compose(sigma), hs)]
        })
        .expect("wreath groupoid");
        WreathGroupoid { groupoid, tuples, arrows: data, size: n, tuple_index, arrow_index }
    }

    pub fn object_of(&self, tuple: &[usize]) -> Option<usize> {
        self.tuple_index.get(tuple).copied()
    }

    pub fn arrow_of(&self, sigma: &Perm, fs: &[usize]) -> Option<usize> {
        self.arrow_index.get(&(sigma.clone(), fs.to_vec())).copied()
    }
}

/// A functor between finite groupoids given by object and arrow maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidFunctor {
    pub object_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl GroupoidFunctor {
    pub fn identity(g: &FiniteGroupoid) -> GroupoidFunctor {
        GroupoidFunctor {
            object_map: (0..g.object_count()).collect(),
            arrow_map: (0..g.arrow_count()).collect(),
        }
    }

    /// Preservation of endpoints, identities and composition, checked exhaustively.
    pub fn validate(&self, source: &FiniteGroupoid, target: &FiniteGroupoid) -> Result<()> {
        if self.object_map.len() != source.object_count() || self.arrow_map.len() != source.arrow_count() {
            return Err(Error::InvalidGroupoid("functor maps have the wrong length".into()));
        }
        for f in 0..source.arrow_count() {
            let kf = self.arrow_map[f];
            if kf >= target.arrow_count()
                || target.src(kf) != self.object_map[source.src(f)]
                || target.dst(kf) != self.object_map[source.dst(f)]
            {
                return Err(Error::InvalidGroupoid(format!("arrow {} is sent to a wrong hom-set", source.arrow_label(f))));
            }
        }
        for x in 0..source.object_count() {
            if self.arrow_map[source.identity(x)] != target.identity(self.object_map[x]) {
                return Err(Error::InvalidGroupoid(format!("identity of {} not preserved", source.object_name(x))));
            }
        }
        for f in 0..source.arrow_count() {
            for &g in source.arrows_from(source.dst(f)) {
                let lhs = self.arrow_map[source.compose(f, g)];
                let rhs = target.compose(self.arrow_map[f], self.arrow_map[g]);
                if lhs != rhs {
                    return Err(Error::InvalidGroupoid("composition not preserved".into()));
                }
            }
        }
        Ok(())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupoidFunctor) -> GroupoidFunctor {
        GroupoidFunctor {
            object_map: self.object_map.iter().map(|&x| other.object_map[x]).collect(),
            arrow_map: self.arrow_map.iter().map(|&f| other.arrow_map[f]).collect(),
        }
    }

    /// The functor induced by a group homomorphism between one-object groupoids.
    pub fn from_group_hom(images: &[usize]) -> GroupoidFunctor {
        GroupoidFunctor { object_map: vec![0], arrow_map: images.to_vec() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_on_three() -> (FiniteGroup, FiniteGroupoid, GroupoidAction) {
        let z2 = FiniteGroup::cyclic(2);
        let c = FiniteGroupoid::discrete(vec!["a".into(), "-a".into(), "b".into()]);
        let act = vec![vec![0, 1, 2], vec![1, 0, 2]];
        let action = GroupoidAction::on_discrete(&z2, &c, &act);
        (z2, c, action)
    }

    #[test]
    fn semidirect_examples() {
        let z2 = FiniteGroup::cyclic(2);
        let point = FiniteGroupoid::discrete(vec!["*".into()]);
        let action = GroupoidAction::on_discrete(&z2, &point, &[vec![0], vec![0]]);
        let (g, _) = semidirect_groupoid(&z2, &point, &action).unwrap();
        assert_eq!(g.arrow_count(), 2);
        g.validate().unwrap();
        let (z2, c, action) = z2_on_three();
        let (g, _) = semidirect_groupoid(&z2, &c, &action).unwrap();
        g.validate().unwrap();
        assert_eq!(g.arrow_count(), 6);
        assert_eq!(g.automorphisms(2).len(), 2);
        assert_eq!(g.hom(0, 1).len(), 1);
        let triv = FiniteGroup::trivial();
        let act = GroupoidAction::on_discrete(&triv, &c, &[vec![0, 1, 2]]);
        let (g, _) = semidirect_groupoid(&triv, &c, &act).unwrap();
        assert_eq!(g.arrow_count(), 3);
    }

    #[test]
    fn wreath_examples() {
        let z2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2));
        let w0 = WreathGroupoid::new(&z2, 0);
        assert_eq!((w0.groupoid.object_count(), w0.groupoid.arrow_count()), (1, 1));
        let w1 = WreathGroupoid::new(&z2, 1);
        assert_eq!(w1.groupoid.arrow_count(), 2);
        // two isomorphic objects x ≅ y, each with automorphism group Z/2
        let z2g = FiniteGroup::cyclic(2);
        let c = FiniteGroupoid::discrete(vec!["x".into(), "y".into()]);
        let swap = GroupoidAction::on_discrete(&z2g, &c, &[vec![0, 1], vec![1, 0]]);
        let (iso_pair, _) = semidirect_groupoid(&z2g, &c, &swap).unwrap();
        let two_iso = z2.product(&iso_pair);
        assert_eq!(two_iso.automorphisms(0).len(), 2);
        assert_eq!(two_iso.hom(0, 1).len(), 2);
        let w2 = WreathGroupoid::new(&two_iso, 2);
        w2.groupoid.validate().unwrap();
        let constant = w2.object_of(&[0, 0]).unwrap();
        assert_eq!(w2.groupoid.automorphisms(constant).len(), 8);
    }

    #[test]
    fn product_and_components() {
        let z2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2));
        let p = z2.product(&z2);
        p.validate().unwrap();
        assert_eq!(p.arrow_count(), 4);
        let (_, c, action) = z2_on_three();
        let (g, _) = semidirect_groupoid(&FiniteGroup::cyclic(2), &c, &action).unwrap();
        let (comp, reps) = g.components();
        assert_eq!(reps, vec![0, 2]);
        assert_eq!(comp, vec![0, 0, 1]);
        let t = g.transports();
        assert_eq!(g.src(t[1]), 0);
    }
}
