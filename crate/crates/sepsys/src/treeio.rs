//! Serialization of computed tree sets: a versioned JSON file pairing the
//! tree with the profiles it distinguishes and per-element certificates,
//! plus a DOT rendering of the tree's shape.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::profiles::{Profile, ProfileSet};
use crate::system::{SepId, SepView, Universe};
use crate::tangletree::{Certificate, TreeOfTangles};
use crate::{Error, Result};

pub const TREE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub members: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertRecord {
    pub sep: u32,
    pub p: usize,
    pub q: usize,
}

/// The on-disk form of a computed (or hand-written) tree set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeFile {
    pub version: u32,
    pub instance: String,
    pub profiles: Vec<ProfileRecord>,
    /// Both orientations of every tree element, ascending.
    pub tree: Vec<u32>,
    #[serde(default)]
    pub certificates: Vec<CertRecord>,
}

impl TreeFile {
    pub fn from_result(instance: &str, tot: &TreeOfTangles) -> TreeFile {
        TreeFile {
            version: TREE_FORMAT_VERSION,
            instance: instance.to_string(),
            profiles: tot
                .profiles
                .iter()
                .map(|p| ProfileRecord {
                    members: p.ids().iter().map(|s| s.0).collect(),
                    order: p.order(),
                })
                .collect(),
            tree: tot.tree.iter().map(|s| s.0).collect(),
            certificates: tot
                .certificates
                .iter()
                .map(|c| CertRecord { sep: c.sep.0, p: c.p, q: c.q })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<TreeFile> {
        let tf: TreeFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInstance(format!("bad tree JSON: {e}")))?;
        if tf.version != TREE_FORMAT_VERSION {
            return Err(Error::InvalidInstance(format!(
                "unsupported tree format version {} (expected {})",
                tf.version, TREE_FORMAT_VERSION
            )));
        }
        Ok(tf)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serialization")
    }

    /// Reads the file back against a universe: ids bounds-checked, the tree
    /// closed under inversion, profiles rebuilt with their order tags.
    pub fn decode(
        &self,
        u: &Universe,
    ) -> Result<(Vec<SepId>, ProfileSet, Vec<Certificate>)> {
        let check = |raw: u32| -> Result<SepId> {
            let s = SepId(raw);
            if !u.has(s) {
                return Err(Error::NotInSystem(s));
            }
            Ok(s)
        };
        let mut tree: BTreeSet<SepId> = BTreeSet::new();
        for &raw in &self.tree {
            let s = check(raw)?;
            tree.insert(s);
            tree.insert(u.inv_id(s));
        }
        let mut profiles = Vec::with_capacity(self.profiles.len());
        for rec in &self.profiles {
            let ids: Vec<SepId> =
                rec.members.iter().map(|&m| check(m)).collect::<Result<_>>()?;
            profiles.push(Profile::from_ids(u.len(), ids, rec.order));
        }
        let pset = ProfileSet::new(profiles);
        let mut certs = Vec::with_capacity(self.certificates.len());
        for rec in &self.certificates {
            if rec.p >= pset.len() || rec.q >= pset.len() {
                return Err(Error::InvalidInstance(format!(
                    "certificate names profile #{} of {}",
                    rec.p.max(rec.q),
                    pset.len()
                )));
            }
            certs.push(Certificate { sep: check(rec.sep)?, p: rec.p, q: rec.q });
        }
        Ok((tree.into_iter().collect(), pset, certs))
    }
}

/// Renders a tree set as DOT: one node per involution pair, an edge whenever
/// some orientation of one pair lies directly below an orientation of the
/// other with no third pair in between (the cover relation of the order).
pub fn tree_to_dot(u: &Universe, tree: &[SepId]) -> String {
    let mut closed: BTreeSet<SepId> = BTreeSet::new();
    for &t in tree {
        closed.insert(t);
        closed.insert(u.inv_id(t));
    }
    let reps: Vec<SepId> = closed
        .iter()
        .copied()
        .filter(|&s| s <= u.inv_id(s))
        .collect();
    let class_of = |x: SepId| -> SepId { x.min(u.inv_id(x)) };
    let mut out = String::from("graph tree {\n  node [shape=box];\n");
    for &r in &reps {
        out.push_str(&format!(
            "  \"{r}\" [label=\"{} | {}\"];\n",
            u.label(r),
            u.label(u.inv_id(r))
        ));
    }
    // covers: x <= y with nothing strictly between, classes distinct
    let all: Vec<SepId> = closed.iter().copied().collect();
    let mut edges: BTreeSet<(SepId, SepId)> = BTreeSet::new();
    for &x in &all {
        for &y in &all {
            if x == y || class_of(x) == class_of(y) || !u.leq(x, y) {
                continue;
            }
            let covered = all.iter().any(|&z| {
                class_of(z) != class_of(x)
                    && class_of(z) != class_of(y)
                    && u.leq(x, z)
                    && u.leq(z, y)
            });
            if !covered {
                let (a, b) = (class_of(x), class_of(y));
                edges.insert((a.min(b), a.max(b)));
            }
        }
    }
    for (a, b) in edges {
        out.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
    }
    out.push_str("}\n");
    out
}
