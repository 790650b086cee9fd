//! Colors with a group action, signatures `(c_1, …, c_n; c_0)`, and the groupoid
//! G ⋉ Σ_C^op of signatures truncated to a finite arity range.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::family::SigmaProduct;
use crate::group::{FiniteGroup, Subgroup};
use crate::groupoid::{ArrowSpec, FiniteGroupoid};
use crate::perm::{factorial, Perm};

/// A finite set of colors with an action of a finite group; `action[g][c] = g·c`.
#[derive(Clone, Debug)]
pub struct GSet {
    group: FiniteGroup,
    colors: Vec<String>,
    action: Vec<Vec<usize>>,
}

impl GSet {
    pub fn new(group: FiniteGroup, colors: Vec<String>, action: Vec<Vec<usize>>) -> Result<GSet> {
        let n = colors.len();
        if action.len() != group.order() || action.iter().any(|row| row.len() != n || row.iter().any(|&c| c >= n)) {
            return Err(Error::InvalidAction("color action table has the wrong shape".into()));
        }
        let id = group.identity();
        if action[id].iter().enumerate().any(|(c, &d)| c != d) {
            return Err(Error::InvalidAction("identity moves a color".into()));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                if (0..n).any(|c| action[gh][c] != action[g][action[h][c]]) {
                    return Err(Error::InvalidAction(format!(
                        "({})({}) does not act as the product",
                        group.label(g),
                        group.label(h)
                    )));
                }
            }
        }
        Ok(GSet { group, colors, action })
    }

    /// Colors with the trivial action.
    pub fn trivial_action(group: FiniteGroup, colors: Vec<String>) -> GSet {
        let n = colors.len();
        let action = vec![(0..n).collect(); group.order()];
        GSet { group, colors, action }
    }

    /// A single color under the trivial group.
    pub fn single() -> GSet {
        GSet::trivial_action(FiniteGroup::trivial(), vec!["c".into()])
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    pub fn color_name(&self, c: usize) -> &str {
        &self.colors[c]
    }

    pub fn color_by_name(&self, name: &str) -> Option<usize> {
        self.colors.iter().position(|c| c == name)
    }

    pub fn act(&self, g: usize, c: usize) -> usize {
        self.action[g][c]
    }

    pub fn action_table(&self) -> &[Vec<usize>] {
        &self.action
    }

    /// The same colors with the group replaced by the trivial group.
    pub fn forget_group(&self) -> GSet {
        GSet::trivial_action(FiniteGroup::trivial(), self.colors.clone())
    }

    /// Checks that a color map to another G-set (over the same group) is equivariant.
    pub fn is_equivariant_map(&self, target: &GSet, map: &[usize]) -> bool {
        map.len() == self.color_count()
            && map.iter().all(|&d| d < target.color_count())
            && (0..self.group.order())
                .all(|g| (0..self.color_count()).all(|c| map[self.act(g, c)] == target.act(g, map[c])))
    }
}

/// A signature `(c_1, …, c_n; c_0)` of color indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub inputs: Vec<usize>,
    pub output: usize,
}

impl Signature {
    pub fn new(inputs: Vec<usize>, output: usize) -> Signature {
        Signature { inputs, output }
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    /// Renders as `(a,b;c)` using the color names of `colors`.
    pub fn display<'a>(&'a self, colors: &'a GSet) -> SignatureDisplay<'a> {
        SignatureDisplay { sig: self, colors }
    }

    /// Parses `a,b;c` or `(a,b;c)`.
    pub fn parse(text: &str, colors: &GSet) -> Result<Signature> {
        let t = text.trim().trim_start_matches('(').trim_end_matches(')');
        let (ins, out) = t.split_once(';').ok_or_else(|| Error::Parse(format!("missing ';' in {text}")))?;
        let look = |name: &str| {
            colors.color_by_name(name.trim()).ok_or_else(|| Error::Parse(format!("unknown color {name}")))
        };
        let inputs = if ins.trim().is_empty() {
            Vec::new()
        } else {
            ins.split(',').map(look).collect::<Result<Vec<_>>>()?
        };
        Ok(Signature { inputs, output: look(out)? })
    }
}

pub struct SignatureDisplay<'a> {
    sig: &'a Signature,
    colors: &'a GSet,
}

impl fmt::Display for SignatureDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ins: Vec<&str> = self.sig.inputs.iter().map(|&c| self.colors.color_name(c)).collect();
        write!(f, "({};{})", ins.join(","), self.colors.color_name(self.sig.output))
    }
}

/// `(g, σ)·C = g C σ`, that is `(g·c_{σ(1)}, …, g·c_{σ(n)}; g·c_0)`.
pub fn act_on_signature(colors: &GSet, g: usize, sigma: &Perm, sig: &Signature) -> Result<Signature> {
    if sigma.len() != sig.arity() {
        return Err(Error::ArityMismatch { expected: sig.arity(), found: sigma.len() });
    }
    Ok(Signature {
        inputs: (0..sig.arity()).map(|i| colors.act(g, sig.inputs[sigma.apply(i)])).collect(),
        output: colors.act(g, sig.output),
    })
}

/// Whether every `(g, σ)` in a subgroup of G × Σ_n^op satisfies `g·c_{σ(i)} = c_i` for all `0 ≤ i ≤ n`.
pub fn stabilizes(colors: &GSet, product: &SigmaProduct, subgroup: &Subgroup, sig: &Signature) -> bool {
    product.arity() == sig.arity()
        && subgroup.members().iter().all(|&x| {
            let (g, sigma) = product.split(x);
            colors.act(g, sig.output) == sig.output
                && (0..sig.arity()).all(|i| colors.act(g, sig.inputs[sigma.apply(i)]) == sig.inputs[i])
        })
}

/// The groupoid G ⋉ Σ_C^op restricted to signatures of arity at most `max_arity`.
///
/// Arrows out of a signature `C` of arity `n` are the pairs `(g, σ): C → gCσ`, numbered
/// `arrow_offset(C) + g·n! + rank(σ)`, the same numbering as elements of G × Σ_n^op.
/// Composition is `(h, ρ) ∘ (g, σ) = (hg, σ ∘ ρ)`.
#[derive(Clone, Debug)]
pub struct SigmaGroupoid {
    colors: GSet,
    max_arity: usize,
    signatures: Vec<Signature>,
    index: HashMap<Signature, usize>,
    arity_start: Vec<usize>,
    arrow_offset: Vec<usize>,
    perms: Vec<Vec<Perm>>,
    groupoid: FiniteGroupoid,
}

impl SigmaGroupoid {
    pub fn new(colors: GSet, max_arity: usize) -> SigmaGroupoid {
        let k = colors.color_count();
        let mut signatures = Vec::new();
        let mut arity_start = Vec::new();
        for n in 0..=max_arity {
            arity_start.push(signatures.len());
            let count = k.pow(n as u32 + 1);
            for code in 0..count {
                let mut digits = Vec::with_capacity(n + 1);
                let mut c = code;
                for _ in 0..=n {
                    digits.push(c % k);
                    c /= k;
                }
                digits.reverse();
                let output = digits.pop().expect("nonempty");
                signatures.push(Signature { inputs: digits, output });
            }
        }
        arity_start.push(signatures.len());
        let index: HashMap<Signature, usize> = signatures.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let perms: Vec<Vec<Perm>> = (0..=max_arity).map(Perm::all).collect();
        let g_order = colors.group().order();
        let mut arrow_offset = Vec::with_capacity(signatures.len());
        let mut specs = Vec::new();
        let mut data: Vec<(usize, usize, usize)> = Vec::new();
        for (s, sig) in signatures.iter().enumerate() {
            arrow_offset.push(specs.len());
            let n = sig.arity();
            for g in 0..g_order {
                for (r, sigma) in perms[n].iter().enumerate() {
                    let target = act_on_signature(&colors, g, sigma, sig).expect("arity matches");
                    specs.push(ArrowSpec {
                        src: s,
                        dst: index[&target],
                        label: format!("({},{})", colors.group().label(g), sigma),
                    });
                    data.push((s, g, r));
                }
            }
        }
        let objects = signatures.iter().map(|s| s.display(&colors).to_string()).collect();
        let group = colors.group().clone();
        let groupoid = FiniteGroupoid::build(objects, specs, |a, b| {
            let (s, g, r) = data[a];
            let (_, h, q) = data[b];
            let n = signatures[s].arity();
            let composite = perms[n][r].compose(&perms[n][q]);
            arrow_offset[s] + group.mul(h, g) * perms[n].len() + composite.rank()
        })
        .expect("signature groupoid");
        SigmaGroupoid { colors, max_arity, signatures, index, arity_start, arrow_offset, perms, groupoid }
    }

    pub fn colors(&self) -> &GSet {
        &self.colors
    }

    pub fn group(&self) -> &FiniteGroup {
        self.colors.group()
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn signature_count(&self) -> usize {
        self.signatures.len()
    }

    pub fn signature(&self, s: usize) -> &Signature {
        &self.signatures[s]
    }

    pub fn signatures(&self) -> &[Signature] {
        &self.signatures
    }

    /// Signature indices of the given arity.
    pub fn of_arity(&self, n: usize) -> std::ops::Range<usize> {
        if n > self.max_arity {
            return 0..0;
        }
        self.arity_start[n]..self.arity_start[n + 1]
    }

    pub fn index_of(&self, sig: &Signature) -> Option<usize> {
        self.index.get(sig).copied()
    }

    /// Like [`SigmaGroupoid::index_of`] but reports signatures outside the range as errors.
    pub fn require(&self, sig: &Signature) -> Result<usize> {
        self.index_of(sig).ok_or_else(|| Error::OutOfRange(sig.display(&self.colors).to_string()))
    }

    pub fn name(&self, s: usize) -> String {
        self.signatures[s].display(&self.colors).to_string()
    }

    /// The signature `(c; c)`.
    pub fn unit_signature(&self, c: usize) -> usize {
        self.index[&Signature { inputs: vec![c], output: c }]
    }

    pub fn perms(&self, n: usize) -> &[Perm] {
        &self.perms[n]
    }

    /// The arrow `(g, σ)` out of signature `s`.
    pub fn arrow(&self, s: usize, g: usize, sigma: &Perm) -> usize {
        self.arrow_offset[s] + g * self.perms[self.signatures[s].arity()].len() + sigma.rank()
    }

    /// The arrow out of `s` named by an element index of G × Σ_n^op.
    pub fn arrow_of_element(&self, s: usize, x: usize) -> usize {
        self.arrow_offset[s] + x
    }

    /// The pair `(g, σ)` behind an arrow.
    pub fn arrow_data(&self, a: usize) -> (usize, &Perm) {
        let s = self.groupoid.src(a);
        let k = self.perms[self.signatures[s].arity()].len();
        let local = a - self.arrow_offset[s];
        (local / k, &self.perms[self.signatures[s].arity()][local % k])
    }

    /// The element index in G × Σ_n^op of an arrow.
    pub fn arrow_element(&self, a: usize) -> usize {
        a - self.arrow_offset[self.groupoid.src(a)]
    }

    pub fn act(&self, g: usize, sigma: &Perm, s: usize) -> usize {
        self.groupoid.dst(self.arrow(s, g, sigma))
    }

    /// The signature of `x ∘_slot y` for `x` of signature `outer` and `y` of signature `inner`,
    /// or `None` when the colors do not match or the result leaves the arity range.
    pub fn substitute(&self, outer: usize, slot: usize, inner: usize) -> Option<usize> {
        let (o, i) = (&self.signatures[outer], &self.signatures[inner]);
        if slot >= o.arity() || o.inputs[slot] != i.output {
            return None;
        }
        let mut inputs = o.inputs[..slot].to_vec();
        inputs.extend_from_slice(&i.inputs);
        inputs.extend_from_slice(&o.inputs[slot + 1..]);
        self.index_of(&Signature { inputs, output: o.output })
    }

    /// The subgroup of arrows at `s` corresponding to a stabilizing subgroup of G × Σ_n^op.
    pub fn stabilizer_arrows(&self, s: usize, product: &SigmaProduct, subgroup: &Subgroup) -> Result<Vec<usize>> {
        let sig = &self.signatures[s];
        if !stabilizes(&self.colors, product, subgroup, sig) {
            return Err(Error::NotStabilizer(self.name(s)));
        }
        Ok(subgroup.members().iter().map(|&x| self.arrow_of_element(s, x)).collect())
    }

    /// Cached G × Σ_n^op for the underlying group.
    pub fn sigma_product(&self, n: usize) -> SigmaProduct {
        SigmaProduct::new(self.group(), n)
    }

    /// Number of arrows out of any signature of arity `n`.
    pub fn arrows_per_signature(&self, n: usize) -> usize {
        self.group().order() * factorial(n)
    }
}
