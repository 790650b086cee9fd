//! Acceptance suite: ten criteria, each with an exact check, an independent oracle where one
//! applies, and a time limit. Prints one line per criterion and exits nonzero on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use equivop::enumerate::enumerate_all_trees;
use equivop::extension::{
    check_injective_colorchange_pushout, check_universal_property, compare_with_oracle, ColorChangeInstance,
    Extension, ExtensionProblem,
};
use equivop::family::{enumerate_graph_subgroups, GSigmaFamily, SigmaProduct};
use equivop::free::{check_monad_laws, FreeOperad};
use equivop::functor::lan_sizes_by_orbits;
use equivop::gfamily::{check_block_inclusion, check_wreath_pullback, GroupoidFamily};
use equivop::group::{FiniteGroup, Subgroup};
use equivop::groupoid::{semidirect_groupoid, FiniteGroupoid, GroupoidAction, GroupoidFunctor};
use equivop::operad::{check_operad_laws, count_operad_maps, Operad};
use equivop::pis::check_pseudo_indexing;
use equivop::random::{actions_on, random_group, random_symseq, rng, Rng64};
use equivop::signature::{GSet, SigmaGroupoid, Signature};
use equivop::symseq::{color_change_functor, is_f_equivalence, symseq_hom_count, SymSeq, SymSeqMap};
use equivop::tree::ColoredTree;
use equivop::worked::{
    leaf_root_trees, nontrivial_stabilizing_graph_subgroups, quartic_forest, replay_all, sign_colors,
    sign_signatures,
};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1. Graph subgroups against a brute-force filter of the subgroup lattice.

/// Every subset of `G × Σ_n^op` containing the identity, closed under multiplication and meeting
/// `{e} × Σ_n^op` only in the identity.
fn brute_force_graph_subgroups(base: &FiniteGroup, n: usize) -> BTreeSet<Vec<usize>> {
    let prod = SigmaProduct::new(base, n);
    let group = prod.group();
    let sigma = prod.sigma_part();
    let id = group.identity();
    let allowed: Vec<usize> = (0..group.order()).filter(|&x| x != id && !sigma.contains(x)).collect();
    let mut out = BTreeSet::new();
    for mask in 0u64..(1u64 << allowed.len()) {
        let mut members = vec![id];
        members.extend(allowed.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
        let mut inside = vec![false; group.order()];
        for &x in &members {
            inside[x] = true;
        }
        if members.iter().all(|&a| members.iter().all(|&b| inside[group.mul(a, b)])) {
            members.sort_unstable();
            out.insert(members);
        }
    }
    out
}

fn graph_subgroup_counts() -> Outcome {
    let z2 = FiniteGroup::cyclic(2);
    let cases = [
        (z2.clone(), 0..=3),
        (FiniteGroup::trivial(), 0..=4),
        (FiniteGroup::cyclic(3), 0..=3),
        (z2.product(&z2), 0..=2),
    ];
    let mut compared = 0;
    for (g, arities) in cases {
        for n in arities {
            let found: BTreeSet<Vec<usize>> =
                enumerate_graph_subgroups(&g, n).iter().map(|h| h.members().to_vec()).collect();
            let brute = brute_force_graph_subgroups(&g, n);
            ensure(found == brute, || format!("|G|={} n={n}: {} vs brute force {}", g.order(), found.len(), brute.len()))?;
            compared += 1;
        }
    }
    let count = |g: &FiniteGroup, n| enumerate_graph_subgroups(g, n).len();
    ensure(count(&z2, 2) == 3, || format!("(Z/2, 2) gave {}", count(&z2, 2)))?;
    ensure(count(&z2, 3) == 5, || format!("(Z/2, 3) gave {}", count(&z2, 3)))?;
    for n in 0..=4 {
        ensure(count(&FiniteGroup::trivial(), n) == 1, || format!("(trivial, {n}) is not 1"))?;
    }
    Ok(format!("(Z/2,2)=3, (Z/2,3)=5, trivial=1; {compared} cases equal to brute force"))
}

// 2. Worked examples.

fn worked_examples() -> Outcome {
    for c in replay_all() {
        ensure(c.passed, || format!("{}: {}", c.name, c.detail))?;
    }
    let q = quartic_forest();
    ensure(q.components.len() == 4, || format!("{} components", q.components.len()))?;
    ensure(q.isomorphic_pairs == vec![(0, 2), (1, 3)], || format!("pairs {:?}", q.isomorphic_pairs))?;
    let sign = sign_colors();
    for sig in sign_signatures() {
        let n = nontrivial_stabilizing_graph_subgroups(&sign, &sig);
        ensure(n == 2, || format!("{} has {n} non-trivial stabilizing graph subgroups", sig.display(&sign)))?;
    }
    let (abc, t, s) = leaf_root_trees();
    let (lt, ls) = (t.leaf_root(), s.leaf_root());
    ensure(lt.display(&abc).to_string() == "(b,c;a)", || format!("lr(T) = {}", lt.display(&abc)))?;
    ensure(ls.display(&abc).to_string() == "(;a)", || format!("lr(S) = {}", ls.display(&abc)))?;
    Ok("4 components with pairs {C,-C} {iC,-iC}; 2 and 2 stabilizers; lr = (b,c;a) and (;a)".into())
}

// 3. Free operad on one commutative binary generator against a labelled binary tree enumerator.

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Shape {
    Leaf(usize),
    Node(Box<Shape>, Box<Shape>),
}

/// All binary trees with the given leaf labels, unordered at each vertex: the part holding the
/// smallest label always goes left.
fn labelled_binary_trees(leaves: &[usize]) -> Vec<Shape> {
    if leaves.len() == 1 {
        return vec![Shape::Leaf(leaves[0])];
    }
    let rest = &leaves[1..];
    let mut out = Vec::new();
    for mask in 0u32..(1 << rest.len()) {
        if mask == (1 << rest.len()) - 1 {
            continue;
        }
        let mut left = vec![leaves[0]];
        let mut right = Vec::new();
        for (i, &x) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                left.push(x);
            } else {
                right.push(x);
            }
        }
        for l in labelled_binary_trees(&left) {
            for r in labelled_binary_trees(&right) {
                out.push(Shape::Node(Box::new(l.clone()), Box::new(r)));
            }
        }
    }
    out
}

fn free_binary_counts() -> Outcome {
    let oracle: Vec<usize> = (2..=5)
        .map(|n| {
            let all = labelled_binary_trees(&(0..n).collect::<Vec<_>>());
            let distinct: BTreeSet<Shape> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
            distinct.len()
        })
        .collect();
    ensure(oracle == vec![1, 3, 15, 105], || format!("oracle gave {oracle:?}"))?;
    let base = Arc::new(SigmaGroupoid::new(GSet::single(), 5));
    let bin = base.require(&Signature::new(vec![0, 0], 0)).map_err(|e| e.to_string())?;
    let x = SymSeq::orbit(base.clone(), bin, &base.groupoid().automorphisms(bin)).map_err(|e| e.to_string())?;
    let free = FreeOperad::new(&x, 4);
    let sizes: Vec<usize> =
        (2..=5).map(|n| free.operad.size(base.index_of(&Signature::new(vec![0; n], 0)).unwrap())).collect();
    ensure(sizes == oracle, || format!("free operad gave {sizes:?}, oracle {oracle:?}"))?;
    Ok(format!("levels {sizes:?} at arities 2..5 equal to the tree enumerator"))
}

// 4. Monad laws of the free operad and grafting laws of trees.

fn colors_over(rng: &mut Rng64, group: &FiniteGroup, max_colors: usize) -> GSet {
    let k = rng.gen_range(1..=max_colors);
    let action = actions_on(group, k).choose(rng).expect("trivial action").clone();
    let names = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    GSet::new(group.clone(), names, action).expect("enumerated action")
}

fn graft_laws(color_count: usize) -> Result<usize, String> {
    let trees = enumerate_all_trees(color_count, 2, &[0, 1, 2, 3]);
    let mut checked = 0;
    let fail = |what: &str, t: &ColoredTree| format!("{what} fails at a tree with {} vertices", t.vertex_count());
    for t in &trees {
        let corollas: Vec<ColoredTree> = t.vertex_corollas().iter().map(ColoredTree::corolla).collect();
        ensure(t.graft(&corollas).as_ref() == Ok(t), || fail("right vertex unit", t))?;
        if !t.is_stick() {
            let top = ColoredTree::corolla(&t.leaf_root());
            ensure(top.graft(std::slice::from_ref(t)).as_ref() == Ok(t), || fail("left vertex unit", t))?;
        }
        let leaves = t.leaf_colors();
        for (i, &c) in leaves.iter().enumerate() {
            ensure(t.graft_at_leaf(i, &ColoredTree::stick(c)).as_ref() == Ok(t), || fail("leaf unit", t))?;
        }
        ensure(ColoredTree::stick(t.color).graft_at_leaf(0, t).as_ref() == Ok(t), || fail("stick unit", t))?;
        for s in trees.iter().filter(|s| t.vertex_count() + s.vertex_count() <= 4) {
            for (i, _) in leaves.iter().enumerate().filter(|(_, &c)| c == s.color) {
                let ts = t.graft_at_leaf(i, s).map_err(|e| e.to_string())?;
                let s_leaves = s.leaf_colors();
                for r in trees.iter().filter(|r| ts.vertex_count() + r.vertex_count() <= 6) {
                    for (j, _) in s_leaves.iter().enumerate().filter(|(_, &c)| c == r.color) {
                        let left = ts.graft_at_leaf(i + j, r).map_err(|e| e.to_string())?;
                        let right = t.graft_at_leaf(i, &s.graft_at_leaf(j, r).map_err(|e| e.to_string())?);
                        ensure(right.as_ref() == Ok(&left), || fail("sequential associativity", t))?;
                        checked += 1;
                    }
                    for (j, _) in leaves.iter().enumerate().filter(|&(j, &c)| j > i && c == r.color) {
                        let left = ts.graft_at_leaf(j + s_leaves.len() - 1, r).map_err(|e| e.to_string())?;
                        let right = t.graft_at_leaf(j, r).and_then(|tr| tr.graft_at_leaf(i, s));
                        ensure(right.as_ref() == Ok(&left), || fail("parallel associativity", t))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

fn monad_and_graft_laws() -> Outcome {
    let mut instances = 0;
    // Grafting only sees the number of colors, so each count is checked once.
    let mut graft_checks: BTreeMap<usize, usize> = BTreeMap::new();
    let mut bounds = BTreeSet::new();
    for seed in [11u64, 12, 13] {
        let mut r = rng(seed);
        for _ in 0..5 {
            let group = random_group(&mut r, 4);
            let colors = colors_over(&mut r, &group, 2);
            let count = colors.color_count();
            let base = Arc::new(SigmaGroupoid::new(colors, 3));
            let x = random_symseq(&mut r, &base, 2, &[1, 2, 3]);
            // Unary generators make the number of terms exponential in the bound.
            let bound = if (0..base.signature_count()).any(|s| base.signature(s).arity() == 1 && x.size(s) > 0) { 4 } else { 5 };
            check_monad_laws(&x, bound).map_err(|e| format!("seed {seed}: {e}"))?;
            check_operad_laws(&FreeOperad::new(&x, bound).operad).map_err(|e| format!("seed {seed}: {e}"))?;
            if let std::collections::btree_map::Entry::Vacant(e) = graft_checks.entry(count) {
                e.insert(graft_laws(count)?);
            }
            bounds.insert(bound);
            instances += 1;
        }
    }
    let single = Arc::new(SigmaGroupoid::new(GSet::single(), 3));
    check_monad_laws(&binary(&single, 0), 6).map_err(|e| format!("binary generator at bound 6: {e}"))?;
    bounds.insert(6);
    instances += 1;
    let grafts: usize = graft_checks.values().sum();
    Ok(format!("{instances} sequences at bounds {bounds:?}, 0 violations; {grafts} graft associativity instances"))
}

// 5. Yoneda, color-change adjunction and free adjunction.

fn equivariant_maps(c: &GSet, d: &GSet) -> Vec<Vec<usize>> {
    let (k, l) = (c.color_count(), d.color_count());
    let mut out = Vec::new();
    for code in 0..l.pow(k as u32) {
        let map: Vec<usize> = (0..k).map(|i| code / l.pow(i as u32) % l).collect();
        if c.is_equivariant_map(d, &map) {
            out.push(map);
        }
    }
    out
}

fn yoneda_and_adjunctions() -> Outcome {
    let mut r = rng(5);
    let mut instances = 0;
    let mut checks = 0;
    while instances < 10 {
        let group = random_group(&mut r, 4);
        let c_colors = colors_over(&mut r, &group, 3);
        let d_colors = colors_over(&mut r, &group, 3);
        let Some(phi) = equivariant_maps(&c_colors, &d_colors).choose(&mut r).cloned() else { continue };
        let c = Arc::new(SigmaGroupoid::new(c_colors.clone(), 3));
        let d = Arc::new(SigmaGroupoid::new(d_colors, 3));
        let x = random_symseq(&mut r, &c, 3, &[0, 1, 2, 3]);
        let y = random_symseq(&mut r, &d, 3, &[0, 1, 2, 3]);
        for s in 0..c.signature_count() {
            let rep = SymSeq::representable(c.clone(), s);
            ensure(symseq_hom_count(&rep, &x) == x.size(s) as u128, || format!("Yoneda at {}", c.name(s)))?;
            checks += 1;
        }
        let pushed = x.pushforward(d.clone(), &phi).map_err(|e| e.to_string())?;
        let k = color_change_functor(&c, &d, &phi).map_err(|e| e.to_string())?;
        let by_orbits = lan_sizes_by_orbits(c.groupoid(), d.groupoid(), &k, x.functor());
        ensure(pushed.sizes() == by_orbits.as_slice(), || "pushforward sizes differ from the orbit formula".into())?;
        let pulled = y.pullback(c.clone(), &phi).map_err(|e| e.to_string())?;
        let (left, right) = (symseq_hom_count(&pushed, &y), symseq_hom_count(&x, &pulled));
        ensure(left == right, || format!("color-change adjunction: {left} vs {right}"))?;
        checks += 1;

        // Generators of arity 2 and 3 only, so the free operad is complete within arity 3.
        let single = Arc::new(SigmaGroupoid::new(
            GSet::new(group.clone(), c_colors.colors()[..1.min(c_colors.color_count())].to_vec(), vec![vec![0]; group.order()])
                .map_err(|e| e.to_string())?,
            3,
        ));
        let base = if c_colors.color_count() <= 2 { c.clone() } else { single };
        let gens = random_symseq(&mut r, &base, 2, &[2, 3]);
        let free = FreeOperad::new(&gens, 2);
        let sizes = vec![2; base.colors().color_count()];
        for p in [
            Operad::terminal(base.clone()),
            Operad::commutative(base.clone()),
            Operad::endomorphism_following_colors(base.clone(), &sizes).map_err(|e| e.to_string())?,
        ] {
            let (maps, homs) = (count_operad_maps(&free.operad, &p) as u128, symseq_hom_count(&gens, p.seq()));
            ensure(maps == homs, || format!("free adjunction: {maps} operad maps vs {homs} sequence maps"))?;
            checks += 1;
        }
        instances += 1;
    }
    Ok(format!("{instances} random instances, {checks} exact count comparisons"))
}

// 6. Filtration against the colimit oracle and the universal property.

fn binary(base: &Arc<SigmaGroupoid>, color: usize) -> SymSeq {
    let s = base.index_of(&Signature::new(vec![color, color], color)).expect("binary signature");
    SymSeq::orbit(base.clone(), s, &base.groupoid().automorphisms(s)).expect("full stabilizer")
}

fn zero_map(base: &SigmaGroupoid, seq: &SymSeq) -> SymSeqMap {
    SymSeqMap { components: (0..base.signature_count()).map(|s| vec![0; seq.size(s)]).collect() }
}

fn extension_instances() -> Result<Vec<(&'static str, ExtensionProblem)>, String> {
    let e = |r: equivop::Result<ExtensionProblem>| r.map_err(|e| e.to_string());
    let single = Arc::new(SigmaGroupoid::new(GSet::single(), 3));
    let com = Operad::commutative(single.clone());
    let y = binary(&single, 0);
    let two = SymSeq::coproduct(single.clone(), &[y.clone(), y.clone()]);
    let first_summand = SymSeqMap {
        components: (0..single.signature_count()).map(|s| (0..y.size(s)).collect()).collect(),
    };
    let sign = Arc::new(SigmaGroupoid::new(
        GSet::new(FiniteGroup::cyclic(2), vec!["a".into(), "-a".into()], vec![vec![0, 1], vec![1, 0]])
            .map_err(|e| e.to_string())?,
        3,
    ));
    Ok(vec![
        ("free binary", e(ExtensionProblem::free(Operad::initial(single.clone()), y.clone(), 2))?),
        ("commutative plus a free generator", e(ExtensionProblem::free(com.clone(), y.clone(), 2))?),
        (
            "identity attachment",
            e(ExtensionProblem::new(com.clone(), y.clone(), y.clone(), SymSeqMap::identity(&y), zero_map(&single, &y), 2))?,
        ),
        (
            "one of two generators attached",
            e(ExtensionProblem::new(com, y.clone(), two, first_summand, zero_map(&single, &y), 2))?,
        ),
        ("free over a swapped color pair", e(ExtensionProblem::free(Operad::initial(sign.clone()), binary(&sign, 0), 2))?),
    ])
}

fn filtration_against_oracle() -> Outcome {
    let mut lines = Vec::new();
    for (name, problem) in extension_instances()? {
        let ext = Extension::compute(&problem).map_err(|e| e.to_string())?;
        ensure(ext.stabilized, || format!("{name}: not stabilized"))?;
        check_operad_laws(&ext.operad).map_err(|v| format!("{name}: {v}"))?;
        let cmp = compare_with_oracle(&problem, &ext);
        ensure(cmp.agrees, || format!("{name}: {:?}", cmp.mismatch))?;
        let base = problem.base().clone();
        let sizes = vec![2; base.colors().color_count()];
        let targets = [
            Operad::terminal(base.clone()),
            Operad::commutative(base.clone()),
            Operad::endomorphism_following_colors(base.clone(), &sizes).map_err(|e| e.to_string())?,
        ];
        for (i, p) in targets.iter().enumerate() {
            let report = check_universal_property(&problem, &ext, p);
            ensure(report.holds, || format!("{name}: universal property fails against target {i}: {report:?}"))?;
        }
        lines.push(format!("{name} {:?}", ext.level_counts().iter().map(|&(_, c)| c).collect::<Vec<_>>()));
    }
    Ok(format!("{} instances agree with the colimit, 3 targets each: {}", lines.len(), lines.join("; ")))
}

// 7. Families of subgroups of a groupoid.

fn family_calculus() -> Outcome {
    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2))] {
        GSigmaFamily::graph(&g, 0..=3).validate().map_err(|v| format!("graph family of order {}: {v}", g.order()))?;
    }
    let bz2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2));
    let mut inclusions = 0;
    for family in [GroupoidFamily::all(&bz2), GroupoidFamily::trivial(&bz2)] {
        family.validate(&bz2).map_err(|v| format!("{v:?}"))?;
        for n in 1..=3 {
            for m in 1..=(4 - n) {
                inclusions += check_block_inclusion(&bz2, &family, n, m).map_err(|w| format!("n={n} m={m}: {w:?}"))?;
            }
        }
    }
    let z2 = FiniteGroup::cyclic(2);
    let c = FiniteGroupoid::discrete(vec!["a".into(), "-a".into(), "b".into()]);
    let action = GroupoidAction::on_discrete(&z2, &c, &[vec![0, 1, 2], vec![1, 0, 2]]);
    let (semi, pairs) = semidirect_groupoid(&z2, &c, &action).map_err(|e| e.to_string())?;
    let phi = GroupoidFunctor { object_map: vec![0; 3], arrow_map: pairs.iter().map(|&(g, _)| g).collect() };
    phi.validate(&semi, &bz2).map_err(|e| e.to_string())?;
    let mut pullbacks = 0;
    for family in [GroupoidFamily::all(&bz2), GroupoidFamily::trivial(&bz2)] {
        for n in 1..=2 {
            check_wreath_pullback(&semi, &bz2, &phi, &family, n).map_err(|x| format!("n={n}: object {x}"))?;
            pullbacks += 1;
        }
    }
    Ok(format!("graph families valid; {inclusions} block inclusions for n+m<=4; {pullbacks} pullback squares"))
}

// 8. Pseudo-indexing condition.

fn pseudo_indexing() -> Outcome {
    let z2 = FiniteGroup::cyclic(2);
    let report = check_pseudo_indexing(&GSigmaFamily::graph(&z2, 0..=3), 3);
    ensure(report.passed(), || format!("graph family fails: {:?}", report.violation.map(|v| v.description)))?;
    let mut failing = 0;
    for g in [z2.clone(), FiniteGroup::cyclic(3)] {
        let mut members: BTreeMap<usize, Vec<Subgroup>> = BTreeMap::new();
        for n in 0..=3 {
            let prod = SigmaProduct::new(&g, n);
            let subs = if n == 1 { vec![prod.group().trivial_subgroup()] } else { enumerate_graph_subgroups(&g, n) };
            members.insert(n, subs);
        }
        let candidates = [GSigmaFamily::from_members(&g, members), GSigmaFamily::trivial(&g, 0..=3)];
        for fam in candidates {
            fam.validate().map_err(|v| v.to_string())?;
            let r = check_pseudo_indexing(&fam, 3);
            let v = r.violation.ok_or("a family with non-full unary level passed")?;
            ensure(v.tree.is_stick(), || "the witness is not the stick".into())?;
            failing += 1;
        }
    }
    Ok(format!("graph family of Z/2 passes over {} trees; {failing} non-full unary families fail at the stick", report.trees_checked))
}

// 9. F-equivalence witness.

fn f_equivalence_witness() -> Outcome {
    let z2 = FiniteGroup::cyclic(2);
    let base = Arc::new(SigmaGroupoid::new(GSet::trivial_action(z2.clone(), vec!["c".into()]), 0));
    let s = base.require(&Signature::new(vec![], 0)).map_err(|e| e.to_string())?;
    let x = SymSeq::representable(base.clone(), s);
    let point = SymSeq::orbit(base.clone(), s, &base.groupoid().automorphisms(s)).map_err(|e| e.to_string())?;
    let y = SymSeq::coproduct(base.clone(), &[point.clone(), point]);
    let f = SymSeqMap { components: vec![vec![0, 1]] };
    ensure(f.is_bijective(&y), || "the map is not levelwise bijective".into())?;
    let trivial = GSigmaFamily::trivial(&z2, 0..=0);
    ensure(is_f_equivalence(&x, &y, &f, &trivial).map_err(|e| e.to_string())?.is_none(), || {
        "rejected by the trivial family".into()
    })?;
    let graph = GSigmaFamily::graph(&z2, 0..=0);
    let w = is_f_equivalence(&x, &y, &f, &graph).map_err(|e| e.to_string())?.ok_or("accepted by the graph family")?;
    // Fixed points by hand: the whole group fixes nothing in the free orbit and both points of Y.
    let whole = Subgroup::new(vec![0, 1]);
    ensure(w.signature == s && w.subgroup == whole, || format!("witness {:?}", w))?;
    Ok("levelwise bijective map rejected at (;c) with the whole group".into())
}

// 10. Injective color change.

fn color_change() -> Outcome {
    let mut parts = Vec::new();
    for local_iso in [false, true] {
        let inst = ColorChangeInstance::example(local_iso, 2, 3).map_err(|e| e.to_string())?;
        let r = check_injective_colorchange_pushout(&inst).map_err(|e| e.to_string())?;
        ensure(r.agrees, || format!("orders disagree: {:?}", r.mismatch))?;
        ensure(r.local_iso_hypothesis == local_iso, || "unexpected hypothesis".into())?;
        if local_iso {
            ensure(r.local_iso_conclusion, || "local isomorphism not preserved".into())?;
        }
        parts.push(format!("sizes {:?}", r.small_sizes));
    }
    Ok(format!("both orders agree ({})", parts.join(", ")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("graph-subgroup counts", 1, graph_subgroup_counts),
        ("worked examples", 1, worked_examples),
        ("free operad counts", 5, free_binary_counts),
        ("monad and graft laws", 60, monad_and_graft_laws),
        ("Yoneda and adjunctions", 60, yoneda_and_adjunctions),
        ("filtration vs oracle", 120, filtration_against_oracle),
        ("family calculus", 30, family_calculus),
        ("pseudo-indexing", 30, pseudo_indexing),
        ("F-equivalence witness", 1, f_equivalence_witness),
        ("injective color change", 30, color_change),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= Duration::from_secs(limit) => (true, d),
            Ok(d) => (false, format!("{d}; over the {limit} s limit")),
            Err(e) => (false, e),
        };
        failures += usize::from(!ok);
        println!(
            "criterion {:>2} {} {name} ({:.2} s, limit {limit} s): {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
