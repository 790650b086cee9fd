//! Permutations of `{0, …, n-1}` in one-line notation.

use std::fmt;

/// A permutation stored as the list of images `p[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    /// Builds a permutation from its images, rejecting non-bijective input.
    pub fn from_images(images: Vec<usize>) -> Option<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images))
    }

    /// Builds a permutation of `n` points from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Perm {
        let mut p: Vec<usize> = (0..n).collect();
        for c in cycles {
            for k in 0..c.len() {
                p[c[k]] = c[(k + 1) % c.len()];
            }
        }
        Perm(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.len(), other.len());
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut r = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            r[j] = i;
        }
        Perm(r)
    }

    /// Position of this permutation in the lexicographic list of all permutations.
    pub fn rank(&self) -> usize {
        let n = self.len();
        let mut rank = 0;
        for i in 0..n {
            let smaller = self.0[i + 1..].iter().filter(|&&x| x < self.0[i]).count();
            rank += smaller * factorial(n - 1 - i);
        }
        rank
    }

    /// Inverse of [`Perm::rank`].
    pub fn unrank(n: usize, mut rank: usize) -> Perm {
        let mut pool: Vec<usize> = (0..n).collect();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let f = factorial(n - 1 - i);
            let k = rank / f;
            rank %= f;
            out.push(pool.remove(k));
        }
        Perm(out)
    }

    /// All permutations of `n` points in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        (0..factorial(n)).map(|r| Perm::unrank(n, r)).collect()
    }

    /// The block sum `self ⊕ other` acting on `len(self) + len(other)` points.
    pub fn block_sum(&self, other: &Perm) -> Perm {
        let n = self.len();
        let mut v = self.0.clone();
        v.extend(other.0.iter().map(|&i| i + n));
        Perm(v)
    }

    /// The permutation obtained by replacing point `slot` with a block of `width`
    /// points permuted by `inner` (all other points move as blocks of size one).
    pub fn substitute(&self, slot: usize, inner: &Perm) -> Perm {
        let width = inner.len();
        let n = self.len();
        // the block at source position i lands at target position self(i)
        let block_len = |i: usize| if i == slot { width } else { 1 };
        let mut target_len = vec![0; n];
        for i in 0..n {
            target_len[self.0[i]] = block_len(i);
        }
        let mut target_start = vec![0; n];
        for j in 1..n {
            target_start[j] = target_start[j - 1] + target_len[j - 1];
        }
        let mut out = Vec::with_capacity(n + width.saturating_sub(1));
        for i in 0..n {
            let start = target_start[self.0[i]];
            if i == slot {
                out.extend(inner.0.iter().map(|&k| start + k));
            } else {
                out.push(start);
            }
        }
        Perm(out)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        let mut seen = vec![false; self.len()];
        for start in 0..self.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.0[i];
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_round_trip() {
        for n in 0..6 {
            for (r, p) in Perm::all(n).iter().enumerate() {
                assert_eq!(p.rank(), r);
            }
        }
    }

    #[test]
    fn compose_and_inverse() {
        let p = Perm::from_cycles(4, &[&[0, 1, 2]]);
        assert_eq!(p.compose(&p.inverse()), Perm::identity(4));
        assert_eq!(p.to_string(), "(1 2 3)");
    }

    #[test]
    fn substitute_blocks() {
        // swap of two points, first point expanded into a block of two
        let swap = Perm::from_images(vec![1, 0]).unwrap();
        let s = swap.substitute(0, &Perm::identity(2));
        assert_eq!(s.images(), &[1, 2, 0]);
        let id = Perm::identity(3).substitute(1, &Perm::from_images(vec![1, 0]).unwrap());
        assert_eq!(id.images(), &[0, 2, 1, 3]);
    }
}
