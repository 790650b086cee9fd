//! JSON input and output formats for groups, colors, families, symmetric sequences, operads and
//! extension problems.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::ExtensionProblem;
use crate::family::GSigmaFamily;
use crate::free::FreeOperad;
use crate::functor::SetValuedFunctor;
use crate::group::{FiniteGroup, Subgroup};
use crate::operad::Operad;
use crate::signature::{GSet, SigmaGroupoid, Signature};
use crate::symseq::{SymSeq, SymSeqMap};

/// `{ "elements": [..], "mul": [[..]], "id": .. }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub elements: Vec<String>,
    pub mul: Vec<Vec<usize>>,
    pub id: usize,
}

impl GroupJson {
    pub fn from_group(g: &FiniteGroup) -> GroupJson {
        GroupJson { elements: g.labels().to_vec(), mul: g.table().to_vec(), id: g.identity() }
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        FiniteGroup::from_table(self.elements.clone(), self.mul.clone(), self.id)
    }
}

/// Colors with a group action; a missing action means the trivial one.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColorsJson {
    pub group: GroupJson,
    pub colors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<Vec<usize>>>,
}

impl ColorsJson {
    pub fn from_gset(c: &GSet) -> ColorsJson {
        ColorsJson {
            group: GroupJson::from_group(c.group()),
            colors: c.colors().to_vec(),
            action: Some(c.action_table().to_vec()),
        }
    }

    pub fn build(&self) -> Result<GSet> {
        let group = self.group.build()?;
        match &self.action {
            Some(a) => GSet::new(group, self.colors.clone(), a.clone()),
            None => Ok(GSet::trivial_action(group, self.colors.clone())),
        }
    }
}

/// `{ "group": .., "arities": { "n": [[member indices of G×Σ_n^op]] } }`, where `(g, σ)` has index
/// `g·n! + rank(σ)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyJson {
    pub group: GroupJson,
    pub arities: BTreeMap<String, Vec<Vec<usize>>>,
}

impl FamilyJson {
    pub fn from_family(f: &GSigmaFamily) -> Result<FamilyJson> {
        let mut arities = BTreeMap::new();
        for n in f.arities() {
            arities.insert(n.to_string(), f.members(n)?.iter().map(|h| h.members().to_vec()).collect());
        }
        Ok(FamilyJson { group: GroupJson::from_group(f.base()), arities })
    }

    /// The listed members taken verbatim.
    pub fn build(&self) -> Result<GSigmaFamily> {
        let group = self.group.build()?;
        let mut members = BTreeMap::new();
        for (n, list) in &self.arities {
            let n: usize = n.parse().map_err(|_| Error::Parse(format!("arity key {n:?}")))?;
            members.insert(n, list.iter().map(|m| Subgroup::new(m.clone())).collect());
        }
        Ok(GSigmaFamily::from_members(&group, members))
    }
}

/// One orbit `representable(C) / Λ`, with `Λ` generated by the listed element indices of
/// G × Σ_n^op; each must fix `C`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitJson {
    pub signature: String,
    #[serde(default)]
    pub stabilizer: Vec<usize>,
}

/// A symmetric sequence as a coproduct of orbits.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SymSeqJson {
    pub orbits: Vec<OrbitJson>,
}

impl SymSeqJson {
    pub fn build(&self, base: &Arc<SigmaGroupoid>) -> Result<SymSeq> {
        let mut parts = Vec::new();
        for o in &self.orbits {
            let s = base.require(&Signature::parse(&o.signature, base.colors())?)?;
            let order = base.group().order() * base.perms(base.signature(s).arity()).len();
            if let Some(&bad) = o.stabilizer.iter().find(|&&x| x >= order) {
                return Err(Error::Parse(format!("element {bad} out of range at {}", o.signature)));
            }
            let arrows: Vec<usize> = o.stabilizer.iter().map(|&x| base.arrow_of_element(s, x)).collect();
            parts.push((s, arrows));
        }
        SymSeq::from_orbits(base.clone(), &parts)
    }
}

/// An operad by construction, or by its full tables.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperadJson {
    Initial,
    Terminal,
    Commutative,
    /// Functions between sets of the given size per color.
    Endomorphism { sizes: Vec<usize> },
    /// The free operad on a sequence, up to `bound` vertices.
    Free { generators: SymSeqJson, bound: usize },
    /// Explicit data indexed by the signature order of the base.
    Table(OperadTable),
}

/// Sizes per signature, the map of every arrow, units per color and every composite as
/// `[outer, slot, x, inner, y, result]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperadTable {
    pub signatures: Vec<String>,
    pub sizes: Vec<usize>,
    pub action: Vec<Vec<usize>>,
    pub units: Vec<Option<usize>>,
    pub compositions: Vec<[usize; 6]>,
}

impl OperadTable {
    pub fn from_operad(op: &Operad) -> OperadTable {
        let base = op.base();
        let mut compositions: Vec<[usize; 6]> =
            op.table().iter().map(|(&(o, i, x, d, y), &r)| [o, i, x, d, y, r]).collect();
        compositions.sort_unstable();
        OperadTable {
            signatures: (0..base.signature_count()).map(|s| base.name(s)).collect(),
            sizes: op.seq().sizes().to_vec(),
            action: op.seq().functor().action.clone(),
            units: op.units().to_vec(),
            compositions,
        }
    }

    pub fn build(&self, base: &Arc<SigmaGroupoid>) -> Result<Operad> {
        let names: Vec<String> = (0..base.signature_count()).map(|s| base.name(s)).collect();
        if self.signatures != names {
            return Err(Error::Parse("signature list does not match the colors and arity range".into()));
        }
        let seq = SymSeq::new(base.clone(), SetValuedFunctor { sizes: self.sizes.clone(), action: self.action.clone() })?;
        if self.units.len() != base.colors().color_count() {
            return Err(Error::Parse("one unit entry per color is required".into()));
        }
        for (c, u) in self.units.iter().enumerate() {
            if u.is_some_and(|u| u >= seq.size(base.unit_signature(c))) {
                return Err(Error::Parse(format!("unit of color {c} is out of range")));
            }
        }
        for c in &self.compositions {
            let (o, i, x, d, y, r) = (c[0], c[1], c[2], c[3], c[4], c[5]);
            let count = base.signature_count();
            let shape_ok = o < count
                && d < count
                && i < base.signature(o).arity()
                && x < seq.size(o)
                && y < seq.size(d)
                && base.substitute(o, i, d).is_some_and(|t| r < seq.size(t));
            if !shape_ok {
                return Err(Error::Parse(format!("composition entry {c:?} is out of range")));
            }
        }
        let table = self.compositions.iter().map(|c| ((c[0], c[1], c[2], c[3], c[4]), c[5])).collect();
        Ok(Operad::from_parts(seq, self.units.clone(), table))
    }
}

impl OperadJson {
    pub fn build(&self, base: &Arc<SigmaGroupoid>) -> Result<Operad> {
        Ok(match self {
            OperadJson::Initial => Operad::initial(base.clone()),
            OperadJson::Terminal => Operad::terminal(base.clone()),
            OperadJson::Commutative => Operad::commutative(base.clone()),
            OperadJson::Endomorphism { sizes } => Operad::endomorphism_following_colors(base.clone(), sizes)?,
            OperadJson::Free { generators, bound } => FreeOperad::new(&generators.build(base)?, *bound).operad,
            OperadJson::Table(t) => t.build(base)?,
        })
    }
}

/// Colors, the arity range and an operad.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperadFile {
    pub colors: ColorsJson,
    pub max_arity: usize,
    pub operad: OperadJson,
}

impl OperadFile {
    pub fn build(&self) -> Result<Operad> {
        let base = Arc::new(SigmaGroupoid::new(self.colors.build()?, self.max_arity));
        self.operad.build(&base)
    }
}

/// An extension problem; a missing source means attaching the target freely.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionFile {
    pub colors: ColorsJson,
    pub max_arity: usize,
    pub operad: OperadJson,
    pub target: SymSeqJson,
    #[serde(default)]
    pub source: Option<SymSeqJson>,
    #[serde(default)]
    pub attachment: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub attaching_map: Option<Vec<Vec<usize>>>,
    pub bound: usize,
}

impl ExtensionFile {
    /// Builds the problem, with `bound` replacing the stored bound when given.
    pub fn build(&self, bound: Option<usize>) -> Result<ExtensionProblem> {
        let base = Arc::new(SigmaGroupoid::new(self.colors.build()?, self.max_arity));
        let operad = self.operad.build(&base)?;
        let target = self.target.build(&base)?;
        let bound = bound.unwrap_or(self.bound);
        match &self.source {
            None => ExtensionProblem::free(operad, target, bound),
            Some(src) => {
                let source = src.build(&base)?;
                let get = |m: &Option<Vec<Vec<usize>>>, what: &str| {
                    m.clone()
                        .map(|components| SymSeqMap { components })
                        .ok_or_else(|| Error::Parse(format!("{what} is required with a source")))
                };
                ExtensionProblem::new(operad, source, target, get(&self.attachment, "attachment")?, get(&self.attaching_map, "attaching_map")?, bound)
            }
        }
    }
}

/// A map of sequences to test against a family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FEquivalenceFile {
    pub colors: ColorsJson,
    pub max_arity: usize,
    pub family: FamilyJson,
    pub source: SymSeqJson,
    pub target: SymSeqJson,
    pub map: Vec<Vec<usize>>,
}

impl FEquivalenceFile {
    /// Source, target, the map and the family, with the map's shape checked.
    pub fn build(&self) -> Result<(SymSeq, SymSeq, SymSeqMap, GSigmaFamily)> {
        let base = Arc::new(SigmaGroupoid::new(self.colors.build()?, self.max_arity));
        let family = self.family.build()?;
        if family.base().order() != base.group().order() {
            return Err(Error::Parse("family and colors use different groups".into()));
        }
        let x = self.source.build(&base)?;
        let y = self.target.build(&base)?;
        if self.map.len() != base.signature_count() {
            return Err(Error::Parse(format!("map has {} components, expected {}", self.map.len(), base.signature_count())));
        }
        for (s, c) in self.map.iter().enumerate() {
            if c.len() != x.size(s) || c.iter().any(|&v| v >= y.size(s)) {
                return Err(Error::Parse(format!("map component at {} has the wrong shape", base.name(s))));
            }
        }
        Ok((x, y, SymSeqMap { components: self.map.clone() }, family))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operad_table_round_trip() {
        let base = Arc::new(SigmaGroupoid::new(GSet::single(), 2));
        let op = Operad::endomorphism_following_colors(base.clone(), &[2]).unwrap();
        let text = serde_json::to_string(&OperadJson::Table(OperadTable::from_operad(&op))).unwrap();
        let back: OperadJson = serde_json::from_str(&text).unwrap();
        let rebuilt = back.build(&base).unwrap();
        assert_eq!(rebuilt.seq().sizes(), op.seq().sizes());
        assert_eq!(rebuilt.table(), op.table());
    }

    #[test]
    fn free_extension_file() {
        let text = r#"{
            "colors": {"group": {"elements": ["e"], "mul": [[0]], "id": 0}, "colors": ["c"]},
            "max_arity": 4,
            "operad": {"kind": "initial"},
            "target": {"orbits": [{"signature": "c,c;c", "stabilizer": [0, 1]}]},
            "bound": 3
        }"#;
        let file: ExtensionFile = serde_json::from_str(text).unwrap();
        let problem = file.build(None).unwrap();
        assert_eq!(problem.target.size(problem.base().require(&Signature::new(vec![0, 0], 0)).unwrap()), 1);
    }

    #[test]
    fn family_round_trip() {
        let z2 = FiniteGroup::cyclic(2);
        let f = GSigmaFamily::graph(&z2, 0..=2);
        let j = FamilyJson::from_family(&f).unwrap();
        let g = j.build().unwrap();
        assert!(g.is_subfamily_of(&f) && f.is_subfamily_of(&g));
    }
}
