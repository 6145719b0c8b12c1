//! Universe builders and the versioned JSON instance format.
//!
//! Three kinds of instance are supported: bipartitions of a finite graph's
//! vertex set ordered by side containment, the powerset lattice of a finite
//! ground set, and explicit tables for hand-built examples (the only way to
//! ship deliberately pathological posets).

use serde::{Deserialize, Serialize};

use crate::bits::BitMat;
use crate::limits::Limits;
use crate::system::Universe;
use crate::{Error, Result};

pub const INSTANCE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InstanceKind {
    Graph {
        edges: Vec<(u32, u32)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertices: Option<u32>,
    },
    Powerset {
        n: u32,
    },
    Explicit {
        elements: Vec<String>,
        inv: Vec<u32>,
        /// Pairs (i, j) meaning element i lies below element j. The
        /// reflexive-transitive closure is taken on load.
        leq_pairs: Vec<(u32, u32)>,
        join: Vec<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ord: Option<Vec<u32>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub version: u32,
    pub name: String,
    #[serde(flatten)]
    pub kind: InstanceKind,
}

impl InstanceSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let spec: InstanceSpec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInstance(format!("bad instance JSON: {e}")))?;
        if spec.version != INSTANCE_FORMAT_VERSION {
            return Err(Error::InvalidInstance(format!(
                "unsupported instance format version {} (expected {})",
                spec.version, INSTANCE_FORMAT_VERSION
            )));
        }
        Ok(spec)
    }

    /// Canonical serialization: sorted edge/relation lists, stable key order.
    pub fn to_canonical_json(&self) -> String {
        let mut spec = self.clone();
        match &mut spec.kind {
            InstanceKind::Graph { edges, .. } => {
                for e in edges.iter_mut() {
                    if e.0 > e.1 {
                        *e = (e.1, e.0);
                    }
                }
                edges.sort_unstable();
                edges.dedup();
            }
            InstanceKind::Explicit { leq_pairs, inv, .. } => {
                if let Ok(closed) = closed_leq_pairs(inv.len(), leq_pairs) {
                    *leq_pairs = closed;
                }
            }
            InstanceKind::Powerset { .. } => {}
        }
        serde_json::to_string(&spec).expect("instance serialization")
    }

    pub fn build(&self, limits: &Limits) -> Result<Universe> {
        match &self.kind {
            InstanceKind::Graph { edges, vertices } => {
                graph_universe_named(self.name.clone(), edges, *vertices, limits)
            }
            InstanceKind::Powerset { n } => {
                Ok(powerset_universe(*n, limits)?.with_name(self.name.clone()))
            }
            InstanceKind::Explicit { elements, inv, leq_pairs, join, ord } => {
                explicit_universe(self.name.clone(), elements, inv, leq_pairs, join, ord.as_deref())
            }
        }
    }
}

/// Subsets of {1..n} ordered by inclusion; the inverse is the complement and
/// the order of a subset X is min(|X|, n - |X|). Element ids equal the
/// subset bitmasks, so id arithmetic is set arithmetic.
pub fn powerset_universe(n: u32, limits: &Limits) -> Result<Universe> {
    limits.check("powerset ground set", limits.powerset_n, n)?;
    let size = 1usize << n;
    let full = (size - 1) as u32;
    let mut inv = Vec::with_capacity(size);
    let mut leq = BitMat::new(size);
    let mut join = vec![0u32; size * size];
    let mut meet = vec![0u32; size * size];
    let mut ord = Vec::with_capacity(size);
    let mut labels = Vec::with_capacity(size);
    for x in 0..size as u32 {
        inv.push(full ^ x);
        let pop = x.count_ones();
        ord.push(pop.min(n - pop));
        labels.push(subset_label(x));
        for y in 0..size as u32 {
            if x & !y == 0 {
                leq.set(x as usize, y as usize, true);
            }
            join[x as usize * size + y as usize] = x | y;
            meet[x as usize * size + y as usize] = x & y;
        }
    }
    Ok(Universe::from_tables(
        format!("powerset-{n}"),
        inv,
        leq,
        join,
        meet,
        Some(ord),
        labels,
    ))
}

fn subset_label(mask: u32) -> String {
    let elems: Vec<String> = (0..32)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| (b + 1).to_string())
        .collect();
    format!("{{{}}}", elems.join(","))
}

/// Oriented bipartitions (A, B) with A∪B = V and no edge joining A∖B to
/// B∖A, ordered by (A,B) <= (C,D) iff A ⊆ C and B ⊇ D. Join and meet are
/// the side-wise union/intersection; the order of (A, B) is |A∩B|.
pub fn graph_universe(edges: &[(u32, u32)], vertices: Option<u32>, limits: &Limits) -> Result<Universe> {
    graph_universe_named(default_graph_name(edges), edges, vertices, limits)
}

fn default_graph_name(edges: &[(u32, u32)]) -> String {
    format!("graph-{}e", edges.len())
}

fn graph_universe_named(
    name: String,
    edges: &[(u32, u32)],
    vertices: Option<u32>,
    limits: &Limits,
) -> Result<Universe> {
    let implied = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    let n = vertices.unwrap_or(implied).max(implied);
    limits.check("graph vertices", limits.graph_vertices, n)?;
    if n == 0 {
        return Err(Error::InvalidInstance("graph has no vertices".into()));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut edge_masks = Vec::with_capacity(edges.len());
    for &(a, b) in edges {
        if a == b {
            return Err(Error::InvalidInstance(format!("self-loop at vertex {a}")));
        }
        let key = (a.min(b), a.max(b));
        if !seen.insert(key) {
            return Err(Error::InvalidInstance(format!(
                "duplicate edge ({}, {})",
                key.0, key.1
            )));
        }
        edge_masks.push((1u32 << a, 1u32 << b));
    }
    let fullmask = (1u32 << n) - 1;

    // Enumerate all legal (A, B): B must contain V \ A; extra overlap is free
    // as long as no edge crosses from A-only to B-only.
    let mut sides: Vec<(u32, u32)> = Vec::new();
    for a in 0..=fullmask {
        let rest = fullmask & !a;
        // B = rest | c for c a subset of a
        let mut c = a;
        loop {
            let b = rest | c;
            let a_only = a & !b;
            let b_only = b & !a;
            let crossing = edge_masks
                .iter()
                .any(|&(u, v)| (a_only & u != 0 && b_only & v != 0) || (a_only & v != 0 && b_only & u != 0));
            if !crossing {
                sides.push((a, b));
            }
            if c == 0 {
                break;
            }
            c = (c - 1) & a;
        }
    }
    sides.sort_unstable();

    let size = sides.len();
    let mut index = std::collections::HashMap::with_capacity(size);
    for (i, &ab) in sides.iter().enumerate() {
        index.insert(ab, i as u32);
    }
    let mut inv = Vec::with_capacity(size);
    let mut leq = BitMat::new(size);
    let mut join = vec![0u32; size * size];
    let mut meet = vec![0u32; size * size];
    let mut ord = Vec::with_capacity(size);
    let mut labels = Vec::with_capacity(size);
    for (i, &(a, b)) in sides.iter().enumerate() {
        inv.push(index[&(b, a)]);
        ord.push((a & b).count_ones());
        labels.push(format!("({},{})", vertex_set_label(a), vertex_set_label(b)));
        for (j, &(c, d)) in sides.iter().enumerate() {
            if a & !c == 0 && d & !b == 0 {
                leq.set(i, j, true);
            }
            join[i * size + j] = index[&(a | c, b & d)];
            meet[i * size + j] = index[&(a & c, b | d)];
        }
    }
    Ok(Universe::from_tables(name, inv, leq, join, meet, Some(ord), labels))
}

fn vertex_name(v: u32) -> String {
    if v < 26 {
        char::from(b'a' + v as u8).to_string()
    } else {
        format!("v{v}")
    }
}

fn vertex_set_label(mask: u32) -> String {
    let names: Vec<String> = (0..32).filter(|b| mask >> b & 1 == 1).map(vertex_name).collect();
    format!("{{{}}}", names.join(""))
}

fn closed_leq_pairs(n: usize, pairs: &[(u32, u32)]) -> Result<Vec<(u32, u32)>> {
    let mut leq = BitMat::new(n);
    for i in 0..n {
        leq.set(i, i, true);
    }
    for &(i, j) in pairs {
        if i as usize >= n || j as usize >= n {
            return Err(Error::InvalidInstance(format!(
                "leq pair ({i}, {j}) out of range for {n} elements"
            )));
        }
        leq.set(i as usize, j as usize, true);
    }
    // Warshall closure; n is tiny for explicit instances.
    for k in 0..n {
        for i in 0..n {
            if leq.get(i, k) {
                for j in 0..n {
                    if leq.get(k, j) {
                        leq.set(i, j, true);
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if leq.get(i, j) {
                out.push((i as u32, j as u32));
            }
        }
    }
    Ok(out)
}

pub(crate) fn explicit_universe(
    name: String,
    elements: &[String],
    inv: &[u32],
    leq_pairs: &[(u32, u32)],
    join: &[Vec<u32>],
    ord: Option<&[u32]>,
) -> Result<Universe> {
    let n = elements.len();
    if inv.len() != n {
        return Err(Error::InvalidInstance(format!(
            "inv table has {} entries for {} elements",
            inv.len(),
            n
        )));
    }
    if join.len() != n || join.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInstance("join table must be n x n".into()));
    }
    if inv.iter().any(|&i| i as usize >= n)
        || join.iter().flatten().any(|&i| i as usize >= n)
    {
        return Err(Error::InvalidInstance("table entry out of range".into()));
    }
    if let Some(o) = ord {
        if o.len() != n {
            return Err(Error::InvalidInstance("ord table length mismatch".into()));
        }
    }
    let closed = closed_leq_pairs(n, leq_pairs)?;
    let mut leq = BitMat::new(n);
    for (i, j) in closed {
        leq.set(i as usize, j as usize, true);
    }
    let mut join_flat = vec![0u32; n * n];
    let mut meet_flat = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            join_flat[i * n + j] = join[i][j];
            // meet is determined by duality
            meet_flat[i * n + j] = inv[join[inv[i] as usize][inv[j] as usize] as usize];
        }
    }
    Ok(Universe::from_tables(
        name,
        inv.to_vec(),
        leq,
        join_flat,
        meet_flat,
        ord.map(|o| o.to_vec()),
        elements.to_vec(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{classify, SepId, SepView};

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn powerset_sizes_and_orders() {
        let u = powerset_universe(4, &limits()).unwrap();
        assert_eq!(u.len(), 16);
        assert_eq!(u.ord(SepId(0)).unwrap(), 0);
        assert_eq!(u.ord(SepId(0b1111)).unwrap(), 0);
        assert_eq!(u.ord(SepId(0b0011)).unwrap(), 2);
        assert_eq!(u.label(SepId(0b0101)), "{1,3}");
        assert!(u.validate().is_ok());
    }

    #[test]
    fn powerset_limit_enforced() {
        let err = powerset_universe(13, &limits());
        assert!(matches!(err, Err(Error::LimitExceeded { .. })));
        let bigger = Limits { powerset_n: 13, ..limits() };
        assert!(powerset_universe(13, &bigger).is_ok());
    }

    #[test]
    fn triangle_graph_universe() {
        // single triangle: every bipartition must keep the triangle whole
        // unless the separator covers it
        let u = graph_universe(&[(0, 1), (0, 2), (1, 2)], None, &limits()).unwrap();
        assert!(u.validate().is_ok(), "{}", u.validate());
        // (emptyset, V) and (V, emptyset) exist with order 0
        let ids = u.ids();
        let bottom = ids
            .iter()
            .find(|&&s| u.label(s) == "({},{abc})")
            .copied()
            .unwrap();
        assert_eq!(u.ord(bottom).unwrap(), 0);
        let f = classify(&u, bottom);
        assert!(f.small && f.trivial);
        // the degenerate element (V, V) exists at order 3
        let degen = ids.iter().copied().find(|&s| u.inv_id(s) == s).unwrap();
        assert_eq!(u.ord(degen).unwrap(), 3);
    }

    #[test]
    fn graph_rejects_bad_edges() {
        assert!(graph_universe(&[(0, 0)], None, &limits()).is_err());
        assert!(graph_universe(&[(0, 1), (1, 0)], None, &limits()).is_err());
        assert!(graph_universe(&[(0, 9)], None, &limits()).is_err());
    }

    #[test]
    fn graph_join_meet_stay_legal() {
        let u = graph_universe(&[(0, 1), (1, 2), (2, 3)], None, &limits()).unwrap();
        assert!(u.validate().is_ok());
        // closure under join/meet is implied by the clean validate, but spot
        // check duality on a crossing pair
        for i in 0..u.len() as u32 {
            let s = SepId(i);
            assert_eq!(u.inv_id(u.join(s, SepId(0))), u.meet(u.inv_id(s), u.inv_id(SepId(0))));
        }
    }

    #[test]
    fn explicit_diamond_universe() {
        let spec = InstanceSpec {
            version: 1,
            name: "diamond".into(),
            kind: InstanceKind::Explicit {
                elements: vec!["b".into(), "x".into(), "y".into(), "t".into()],
                inv: vec![3, 2, 1, 0],
                leq_pairs: vec![(0, 1), (0, 2), (1, 3), (2, 3)],
                join: vec![
                    vec![0, 1, 2, 3],
                    vec![1, 1, 3, 3],
                    vec![2, 3, 2, 3],
                    vec![3, 3, 3, 3],
                ],
                ord: Some(vec![0, 1, 1, 0]),
            },
        };
        let u = spec.build(&limits()).unwrap();
        let rep = u.validate();
        assert!(rep.is_ok(), "{rep}");
        // transitive closure gave b <= t
        assert!(u.leq(SepId(0), SepId(3)));
        let f = classify(&u, SepId(0));
        assert!(f.small && f.trivial, "bottom is below both x and y");
    }

    #[test]
    fn instance_roundtrip_is_canonical() {
        let text = r#"{"version":1,"name":"t","kind":"graph","edges":[[2,1],[0,1],[2,1]]}"#;
        // duplicate edge is rejected at build time, not parse time
        let spec = InstanceSpec::parse(text).unwrap();
        assert!(spec.build(&limits()).is_err());
        let text2 = r#"{"version":1,"name":"t","kind":"graph","edges":[[2,1],[0,1]]}"#;
        let spec2 = InstanceSpec::parse(text2).unwrap();
        let canon = spec2.to_canonical_json();
        let reparsed = InstanceSpec::parse(&canon).unwrap();
        assert_eq!(reparsed.to_canonical_json(), canon);
        assert!(canon.find("[0,1]").unwrap() < canon.find("[1,2]").unwrap());
    }

    #[test]
    fn version_gate() {
        let text = r#"{"version":2,"name":"t","kind":"powerset","n":2}"#;
        assert!(InstanceSpec::parse(text).is_err());
    }
}
