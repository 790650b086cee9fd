//! Finite groups as explicit multiplication tables, their subgroups and homomorphisms.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    id: usize,
}

impl FiniteGroup {
    /// Validates associativity, the unit and inverses exhaustively.
    pub fn from_table(labels: Vec<String>, mul: Vec<Vec<usize>>, id: usize) -> Result<FiniteGroup> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty element list".into()));
        }
        if id >= n {
            return Err(Error::InvalidGroup(format!("identity index {id} out of range")));
        }
        if mul.len() != n || mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("multiplication table is not n×n over the elements".into()));
        }
        for a in 0..n {
            if mul[id][a] != a || mul[a][id] != a {
                return Err(Error::InvalidGroup(format!("{} is not a two-sided unit", labels[id])));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails on ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mul[a][b] == id && mul[b][a] == id) {
                Some(b) => inv[a] = b,
                None => return Err(Error::InvalidGroup(format!("{} has no inverse", labels[a]))),
            }
        }
        Ok(FiniteGroup { labels, mul, inv, id })
    }

    /// Builds a group from a closed multiplication table without re-validating it.
    fn from_trusted(labels: Vec<String>, mul: Vec<Vec<usize>>, id: usize) -> FiniteGroup {
        let n = labels.len();
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n).find(|&b| mul[a][b] == id).expect("closed table");
        }
        FiniteGroup { labels, mul, inv, id }
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::from_trusted(vec!["e".into()], vec![vec![0]], 0)
    }

    /// The cyclic group of order `n`, elements labelled `0..n`.
    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n > 0);
        let labels = (0..n).map(|i| i.to_string()).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_trusted(labels, mul, 0)
    }

    /// The cyclic group of order `n` with custom element labels, generator at index 1.
    pub fn cyclic_labelled(labels: &[&str]) -> FiniteGroup {
        let mut g = FiniteGroup::cyclic(labels.len());
        g.labels = labels.iter().map(|s| s.to_string()).collect();
        g
    }

    /// The group generated by the given permutations, elements in lexicographic order.
    pub fn from_perms(n: usize, generators: &[Perm]) -> FiniteGroup {
        let (elements, _) = perm_closure(n, generators);
        let index: HashMap<&Perm, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mul = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&a.compose(b)]).collect())
            .collect();
        let labels = elements.iter().map(|p| p.to_string()).collect();
        let id = index[&Perm::identity(n)];
        FiniteGroup::from_trusted(labels, mul, id)
    }

    /// The symmetric group Σ_n with elements in lexicographic one-line order.
    pub fn symmetric(n: usize) -> FiniteGroup {
        let all = Perm::all(n);
        let mul = all
            .iter()
            .map(|a| all.iter().map(|b| a.compose(b).rank()).collect())
            .collect();
        let labels = all.iter().map(|p| p.to_string()).collect();
        FiniteGroup::from_trusted(labels, mul, 0)
    }

    /// Direct product; the pair `(a, b)` has index `a * |other| + b`.
    pub fn product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order(), other.order());
        let mut labels = Vec::with_capacity(n * m);
        for a in 0..n {
            for b in 0..m {
                labels.push(format!("({},{})", self.labels[a], other.labels[b]));
            }
        }
        let mul = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul[x / m][y / m] * m + other.mul[x % m][y % m])
                    .collect()
            })
            .collect();
        FiniteGroup::from_trusted(labels, mul, self.id * m + other.id)
    }

    /// The opposite group: same elements, `a ·op b = b · a`.
    pub fn opposite(&self) -> FiniteGroup {
        let n = self.order();
        let mul = (0..n).map(|a| (0..n).map(|b| self.mul[b][a]).collect()).collect();
        FiniteGroup::from_trusted(self.labels.clone(), mul, self.id)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.id
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.id {
            x = self.mul[x][a];
            k += 1;
        }
        k
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul[self.mul[g][x]][self.inv[g]]
    }

    /// The subgroup generated by `generators`.
    pub fn generate(&self, generators: &[usize]) -> Subgroup {
        let n = self.order();
        let mut member = vec![false; n];
        member[self.id] = true;
        let mut queue = VecDeque::from([self.id]);
        while let Some(x) = queue.pop_front() {
            for &g in generators {
                let y = self.mul[x][g];
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Subgroup::from_mask(&member)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { members: (0..self.order()).collect() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { members: vec![self.id] }
    }

    /// Checks that a subset is a subgroup: contains the identity, closed under products and inverses.
    pub fn is_subgroup(&self, members: &[usize]) -> bool {
        let mut mask = vec![false; self.order()];
        for &m in members {
            if m >= self.order() {
                return false;
            }
            mask[m] = true;
        }
        mask[self.id]
            && members.iter().all(|&a| mask[self.inv[a]])
            && members.iter().all(|&a| members.iter().all(|&b| mask[self.mul[a][b]]))
    }

    /// Every subgroup exactly once, ordered by size then by sorted member list.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut cyclic: BTreeSet<Subgroup> = BTreeSet::new();
        for a in 0..self.order() {
            cyclic.insert(self.generate(&[a]));
        }
        let cyclic: Vec<(usize, Subgroup)> = cyclic
            .into_iter()
            .map(|c| {
                let gen = *c
                    .members
                    .iter()
                    .find(|&&x| self.generate(&[x]).members == c.members)
                    .expect("cyclic subgroup has a generator");
                (gen, c)
            })
            .collect();
        let start = self.trivial_subgroup();
        let mut found: BTreeSet<Subgroup> = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([(start, Vec::<usize>::new())]);
        while let Some((h, gens)) = queue.pop_front() {
            let mask = h.mask(self.order());
            for (g, c) in &cyclic {
                if mask[*g] || c.members.iter().all(|&x| mask[x]) {
                    continue;
                }
                let mut next_gens = gens.clone();
                next_gens.push(*g);
                let k = self.generate(&next_gens);
                if found.insert(k.clone()) {
                    queue.push_back((k, next_gens));
                }
            }
        }
        found.into_iter().collect()
    }

    /// The image of a subgroup under conjugation by `g`.
    pub fn conjugate_subgroup(&self, g: usize, h: &Subgroup) -> Subgroup {
        Subgroup::new(h.members.iter().map(|&x| self.conjugate(g, x)).collect())
    }
}

/// A subgroup stored as its sorted member indices.
///
/// Ordered by size first, then lexicographically by members.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.members.len(), &self.members).cmp(&(other.members.len(), &other.members))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Subgroup {
    /// Wraps a member list; the caller guarantees closure (see [`FiniteGroup::is_subgroup`]).
    pub fn new(mut members: Vec<usize>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    fn from_mask(mask: &[bool]) -> Subgroup {
        Subgroup { members: (0..mask.len()).filter(|&i| mask[i]).collect() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &x in &self.members {
            m[x] = true;
        }
        m
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup { members: self.members.iter().copied().filter(|&x| other.contains(x)).collect() }
    }

    /// Image under an element map (for example a homomorphism or a projection).
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Subgroup {
        Subgroup::new(self.members.iter().map(|&x| f(x)).collect())
    }

    /// The subgroups of this subgroup, as subgroups of the ambient group.
    pub fn subgroups_in(&self, group: &FiniteGroup) -> Vec<Subgroup> {
        let sub = restrict(group, self);
        sub.subgroups().into_iter().map(|k| k.map(|i| self.members[i])).collect()
    }
}

/// The subgroup `h` as a group in its own right (element `i` is `h.members()[i]`).
pub fn restrict(group: &FiniteGroup, h: &Subgroup) -> FiniteGroup {
    let pos: HashMap<usize, usize> = h.members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mul = h
        .members
        .iter()
        .map(|&a| h.members.iter().map(|&b| pos[&group.mul(a, b)]).collect())
        .collect();
    let labels = h.members.iter().map(|&x| group.label(x).to_string()).collect();
    FiniteGroup::from_trusted(labels, mul, pos[&group.identity()])
}

/// A map of group elements checked to be a homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    images: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, images: Vec<usize>) -> Result<GroupHom> {
        if images.len() != source.order() || images.iter().any(|&y| y >= target.order()) {
            return Err(Error::NotHomomorphism("image list has the wrong shape".into()));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(Error::NotHomomorphism(format!(
                        "f({}·{}) ≠ f({})·f({})",
                        source.label(a),
                        source.label(b),
                        source.label(a),
                        source.label(b)
                    )));
                }
            }
        }
        Ok(GroupHom { images })
    }

    pub fn identity(group: &FiniteGroup) -> GroupHom {
        GroupHom { images: (0..group.order()).collect() }
    }

    pub fn trivial(source: &FiniteGroup, target: &FiniteGroup) -> GroupHom {
        GroupHom { images: vec![target.identity(); source.order()] }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

/// Closure of a set of permutations under composition, sorted lexicographically.
pub fn perm_closure(n: usize, generators: &[Perm]) -> (Vec<Perm>, HashMap<Perm, usize>) {
    let mut seen: BTreeSet<Perm> = BTreeSet::from([Perm::identity(n)]);
    let mut queue = VecDeque::from([Perm::identity(n)]);
    while let Some(p) = queue.pop_front() {
        for g in generators {
            let q = p.compose(g);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    let elements: Vec<Perm> = seen.into_iter().collect();
    let index = elements.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    (elements, index)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_subgroup_counts() {
        assert_eq!(FiniteGroup::trivial().subgroups().len(), 1);
        assert_eq!(FiniteGroup::cyclic(2).subgroups().len(), 2);
        let s3 = FiniteGroup::symmetric(3);
        let orders: Vec<usize> = s3.subgroups().iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
        let v4 = FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2));
        assert_eq!(v4.subgroups().len(), 5);
    }

    #[test]
    fn rejects_bad_table() {
        let bad = FiniteGroup::from_table(
            vec!["e".into(), "x".into()],
            vec![vec![0, 1], vec![1, 1]],
            0,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn homomorphism_check() {
        let z4 = FiniteGroup::cyclic(4);
        let z2 = FiniteGroup::cyclic(2);
        assert!(GroupHom::new(&z4, &z2, vec![0, 1, 0, 1]).is_ok());
        assert!(GroupHom::new(&z4, &z2, vec![0, 1, 1, 0]).is_err());
    }
}
