//! Seeded generators of small random instances for property suites.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::group::FiniteGroup;
use crate::perm::Perm;
use crate::signature::{GSet, SigmaGroupoid};
use crate::symseq::SymSeq;

pub use rand::SeedableRng;
pub type Rng64 = ChaCha8Rng;

/// A seeded generator.
pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One of the groups of order at most `max_order` among the trivial group, `ℤ/2`, `ℤ/3`, `ℤ/4` and
/// `ℤ/2 × ℤ/2`.
pub fn random_group(rng: &mut Rng64, max_order: usize) -> FiniteGroup {
    let z2 = FiniteGroup::cyclic(2);
    let all = [FiniteGroup::trivial(), z2.clone(), FiniteGroup::cyclic(3), FiniteGroup::cyclic(4), z2.product(&z2)];
    let fits: Vec<&FiniteGroup> = all.iter().filter(|g| g.order() <= max_order.max(1)).collect();
    (*fits.choose(rng).expect("the trivial group always fits")).clone()
}

/// Every action of `group` on `{0..k}`, as tables `action[g][c]`.
pub fn actions_on(group: &FiniteGroup, k: usize) -> Vec<Vec<Vec<usize>>> {
    let perms = Perm::all(k);
    let n = group.order();
    let id = group.identity();
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        if perms[choice[id]].is_identity() {
            let ok = (0..n).all(|a| {
                (0..n).all(|b| perms[choice[group.mul(a, b)]] == perms[choice[a]].compose(&perms[choice[b]]))
            });
            if ok {
                out.push(choice.iter().map(|&c| perms[c].images().to_vec()).collect());
            }
        }
        let mut i = 0;
        while i < n {
            choice[i] += 1;
            if choice[i] < perms.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
    }
}

/// A random action of a random small group on between 1 and `max_colors` colors.
pub fn random_colors(rng: &mut Rng64, max_order: usize, max_colors: usize) -> GSet {
    let group = random_group(rng, max_order);
    let k = rng.gen_range(1..=max_colors.max(1));
    let actions = actions_on(&group, k);
    let action = actions.choose(rng).expect("the trivial action exists").clone();
    let names = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    GSet::new(group, names, action).expect("enumerated actions are actions")
}

/// A coproduct of `orbits` random orbits `representable(s) / Λ` with `Λ` cyclic in `Aut(s)`.
pub fn random_symseq(rng: &mut Rng64, base: &Arc<SigmaGroupoid>, orbits: usize, arities: &[usize]) -> SymSeq {
    let g = base.groupoid();
    let candidates: Vec<usize> =
        (0..base.signature_count()).filter(|&s| arities.contains(&base.signature(s).arity())).collect();
    let mut parts = Vec::new();
    for _ in 0..orbits {
        let Some(&s) = candidates.choose(rng) else { break };
        let (group, auts) = g.automorphism_group(s);
        let x = rng.gen_range(0..group.order());
        let lambda: Vec<usize> = group.generate(&[x]).members().iter().map(|&i| auts[i]).collect();
        parts.push((s, lambda));
    }
    SymSeq::from_orbits(base.clone(), &parts).expect("cyclic subgroups of automorphisms")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn actions_of_z2_on_two_points() {
        assert_eq!(actions_on(&FiniteGroup::cyclic(2), 2).len(), 2);
        assert_eq!(actions_on(&FiniteGroup::cyclic(3), 3).len(), 3);
    }

    #[test]
    fn generators_are_deterministic() {
        let a = random_colors(&mut rng(7), 4, 3);
        let b = random_colors(&mut rng(7), 4, 3);
        assert_eq!(a.action_table(), b.action_table());
        let base = Arc::new(SigmaGroupoid::new(a, 2));
        let x = random_symseq(&mut rng(1), &base, 2, &[1, 2]);
        x.validate().unwrap();
    }
}
