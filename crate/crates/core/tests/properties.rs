use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use equivop::extension::{pushout_product, PushoutPower, SetMap};
use equivop::free::{free_count_by_trees, free_count_by_trees_equivariant, FreeOperad};
use equivop::functor::{lan_along, lan_sizes_by_orbits};
use equivop::group::FiniteGroup;
use equivop::perm::Perm;
use equivop::random::{random_colors, random_symseq, rng};
use equivop::signature::SigmaGroupoid;
use equivop::symseq::{color_change_functor, symseq_hom_count, SymSeq};
use equivop::tree::{automorphisms, brute_force_isomorphic, ColoredTree};

fn set_map() -> impl Strategy<Value = SetMap> {
    (0usize..4, 1usize..4).prop_flat_map(|(a, b)| {
        proptest::collection::vec(0..b, a).prop_map(move |images| SetMap::new(b, images).expect("images in range"))
    })
}

fn tree(colors: usize) -> impl Strategy<Value = ColoredTree> {
    let leaf = (0..colors).prop_map(ColoredTree::stick);
    leaf.prop_recursive(3, 10, 3, move |inner| {
        (0..colors, proptest::collection::vec(inner, 0..=3)).prop_map(|(c, ch)| ColoredTree::node(c, ch))
    })
}

/// Reverses the inputs of every vertex.
fn mirror(t: &ColoredTree) -> ColoredTree {
    match &t.vertex {
        None => t.clone(),
        Some(ch) => ColoredTree::node(t.color, ch.iter().rev().map(mirror).collect()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pushout_power_is_equivariant(f in set_map(), n in 1usize..=3, k in 0usize..6) {
        let p = PushoutPower::new(&f, n);
        let perms = Perm::all(n);
        let sigma = &perms[k % perms.len()];
        let src = p.permute_source(sigma);
        let dst = p.permute_target(sigma);
        for x in 0..p.map.domain() {
            prop_assert_eq!(p.map.images[src.images[x]], dst.images[p.map.images[x]]);
        }
    }

    #[test]
    fn pushout_square_agrees_with_product(f in set_map()) {
        let power = PushoutPower::new(&f, 2);
        let product = pushout_product(&f, &f);
        prop_assert_eq!(power.map.domain(), product.map.domain());
        let mut a = power.map.images.clone();
        let mut b = product.map.images.clone();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn pushout_product_size_and_injectivity(f in set_map(), g in set_map()) {
        let p = pushout_product(&f, &g);
        let (a, b, c, d) = (f.domain(), f.codomain, g.domain(), g.codomain);
        if g.is_injective() {
            prop_assert_eq!(p.map.domain(), a * d + b * c - a * c);
        }
        if f.is_injective() && g.is_injective() {
            prop_assert!(p.map.is_injective());
        }
        if f.is_bijective() {
            prop_assert!(p.map.is_bijective());
        }
    }

    #[test]
    fn canonical_forms_decide_isomorphism(s in tree(2), t in tree(2)) {
        prop_assert_eq!(s.canonical() == t.canonical(), brute_force_isomorphic(&s, &t));
        prop_assert_eq!(mirror(&s).canonical(), s.canonical());
        prop_assert_eq!(automorphisms(&s).len(), automorphisms(&mirror(&s)).len());
    }

    #[test]
    fn leaf_root_survives_grafting_corollas(t in tree(3)) {
        let corollas: Vec<ColoredTree> = t.vertex_corollas().iter().map(ColoredTree::corolla).collect();
        prop_assert_eq!(t.graft(&corollas).unwrap(), t.clone());
        prop_assert_eq!(t.leaf_root().arity(), t.leaf_count());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn free_counts_match_tree_orbit_counts(seed in any::<u64>()) {
        let mut r = rng(seed);
        let base = Arc::new(SigmaGroupoid::new(random_colors(&mut r, 4, 2), 3));
        let x = random_symseq(&mut r, &base, 2, &[0, 1, 2, 3]);
        let free = FreeOperad::new(&x, 2);
        for s in 0..base.signature_count() {
            prop_assert_eq!(free_count_by_trees(&x, s, 2), free.operad.size(s));
            prop_assert_eq!(free_count_by_trees_equivariant(&x, s, 2), free.operad.size(s));
        }
    }

    #[test]
    fn coend_and_orbit_formula_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let colors = random_colors(&mut r, 4, 3);
        let c = Arc::new(SigmaGroupoid::new(colors.clone(), 2));
        // Collapse every color onto one.
        let target_colors = equivop::signature::GSet::trivial_action(colors.group().clone(), vec!["z".into()]);
        let d = Arc::new(SigmaGroupoid::new(target_colors, 2));
        let phi = vec![0; colors.color_count()];
        let x = random_symseq(&mut r, &c, 3, &[0, 1, 2]);
        let k = color_change_functor(&c, &d, &phi).unwrap();
        let lan = lan_along(c.groupoid(), d.groupoid(), &k, x.functor());
        prop_assert_eq!(lan.functor.sizes.clone(), lan_sizes_by_orbits(c.groupoid(), d.groupoid(), &k, x.functor()));
        let y = random_symseq(&mut r, &d, 2, &[0, 1, 2]);
        let pushed = x.pushforward(d.clone(), &phi).unwrap();
        let pulled = y.pullback(c.clone(), &phi).unwrap();
        prop_assert_eq!(symseq_hom_count(&pushed, &y), symseq_hom_count(&x, &pulled));
    }

    #[test]
    fn yoneda_counts(seed in any::<u64>()) {
        let mut r = rng(seed);
        let base = Arc::new(SigmaGroupoid::new(random_colors(&mut r, 4, 2), 2));
        let x = random_symseq(&mut r, &base, 3, &[0, 1, 2]);
        for s in 0..base.signature_count() {
            prop_assert_eq!(symseq_hom_count(&SymSeq::representable(base.clone(), s), &x), x.size(s) as u128);
        }
    }
}

#[test]
fn cyclic_subgroups_match_divisors() {
    for n in 1..=12usize {
        let divisors = (1..=n).filter(|d| n % d == 0).count();
        let subs = FiniteGroup::cyclic(n).subgroups();
        assert_eq!(subs.len(), divisors, "Z/{n}");
        let mut by_order: BTreeMap<usize, usize> = BTreeMap::new();
        for h in &subs {
            *by_order.entry(h.order()).or_default() += 1;
        }
        assert!(by_order.values().all(|&c| c == 1));
    }
}
