//! Brute-force ground truth.
//!
//! Everything in here re-derives its answer from the raw tables and the
//! definitions, sharing no logic with the builders it checks. It is
//! deliberately naive: full orientation scans, quadratic pair loops,
//! first-witness reporting. Use it to certify outputs, not to compute them.

use std::fmt;
use std::time::Instant;

use crate::bits::Bits;
use crate::profiles::{Profile, ProfileSet};
use crate::regularization::RegularizationResult;
use crate::system::{CornerSystem, SepId, SepView, Universe};
use crate::{Error, Limits, Result};

/// Outcome of a verification run: which checks ran, how long they took, and
/// every violation found (witnesses reported in canonical scan order, so the
/// first witness per check is the minimal one).
pub struct VerificationReport {
    pub instance: String,
    pub checks: Vec<CheckRun>,
    pub violations: Vec<Violation>,
}

pub struct CheckRun {
    pub name: &'static str,
    pub millis: u128,
    pub violations: usize,
}

pub struct Violation {
    pub check: &'static str,
    pub witness: String,
}

impl VerificationReport {
    pub fn new(instance: impl Into<String>) -> Self {
        VerificationReport { instance: instance.into(), checks: Vec::new(), violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn run(&mut self, name: &'static str, f: impl FnOnce(&mut Self)) {
        let before = self.violations.len();
        let t0 = Instant::now();
        f(self);
        self.checks.push(CheckRun {
            name,
            millis: t0.elapsed().as_millis(),
            violations: self.violations.len() - before,
        });
        for v in &mut self.violations[before..] {
            v.check = name;
        }
    }

    fn violate(&mut self, witness: String) {
        self.violations.push(Violation { check: "", witness });
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        self.violations.extend(other.violations);
    }

    /// Record an externally computed check so mixed reports stay uniform.
    pub fn record(&mut self, name: &'static str, witnesses: Vec<String>) {
        self.checks.push(CheckRun { name, millis: 0, violations: witnesses.len() });
        self.violations
            .extend(witnesses.into_iter().map(|witness| Violation { check: name, witness }));
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verification of {}:", self.instance)?;
        for c in &self.checks {
            if c.violations == 0 {
                writeln!(f, "  {:<40} ok", c.name)?;
            } else {
                writeln!(f, "  {:<40} {} violation(s)", c.name, c.violations)?;
            }
        }
        for v in &self.violations {
            writeln!(f, "  VIOLATION [{}] {}", v.check, v.witness)?;
        }
        if self.passed() {
            writeln!(f, "  all checks passed")?;
        }
        Ok(())
    }
}

// Local definitional helpers over raw universe tables.

fn d_nested(u: &Universe, s: SepId, t: SepId) -> bool {
    let (si, ti) = (u.inv_id(s), u.inv_id(t));
    u.leq(s, t) || u.leq(s, ti) || u.leq(si, t) || u.leq(si, ti)
}

fn d_trivial(u: &Universe, s: SepId) -> Option<SepId> {
    let si = u.inv_id(s);
    for t in u.ids() {
        if t == s || t == si {
            continue;
        }
        if u.leq(s, t) && u.leq(s, u.inv_id(t)) {
            return Some(t);
        }
    }
    None
}

fn d_distinguishes(u: &Universe, s: SepId, p: &Profile, q: &Profile) -> bool {
    let si = u.inv_id(s);
    if s == si {
        return false;
    }
    (p.contains(s) && q.contains(si)) || (p.contains(si) && q.contains(s))
}

// Same helpers against a corner system's local tables.

fn d_nested_local(sys: &CornerSystem, i: usize, j: usize) -> bool {
    let (ii, ji) = (sys.inv_local(i), sys.inv_local(j));
    sys.leq_local(i, j) || sys.leq_local(i, ji) || sys.leq_local(ii, j) || sys.leq_local(ii, ji)
}

fn d_trivial_local(sys: &CornerSystem, i: usize) -> Option<usize> {
    let ii = sys.inv_local(i);
    for t in 0..sys.len() {
        if t == i || t == ii {
            continue;
        }
        if sys.leq_local(i, t) && sys.leq_local(i, sys.inv_local(t)) {
            return Some(t);
        }
    }
    None
}

/// `{P : inv(s) ∈ P}` as a bitset over profile indices, straight from the
/// definition. `None` when some profile orients neither side of `s`.
fn d_image(sys: &CornerSystem, i: usize, pset: &ProfileSet) -> Option<Bits> {
    let s = sys.elems()[i];
    let si = sys.elems()[sys.inv_local(i)];
    let mut out = Bits::new(pset.len());
    for (pi, p) in pset.iter().enumerate() {
        match (p.contains(s), p.contains(si)) {
            (false, true) => out.set(pi, true),
            (true, _) => {}
            (false, false) => return None,
        }
    }
    Some(out)
}

fn subset_nested(a: &Bits, b: &Bits) -> bool {
    let (ac, bc) = (a.complement(), b.complement());
    a.is_subset(b) || a.is_subset(&bc) || ac.is_subset(b) || ac.is_subset(&bc)
}

fn label(u: &Universe, s: SepId) -> String {
    format!("{s}={}", u.label(s))
}

/// Exhaustive profile enumeration: every one of the `2^pairs` orientations is
/// generated and filtered by the consistency and corner conditions verbatim.
/// Returns canonical sorted member lists.
pub fn brute_profiles(sys: &CornerSystem, limits: &Limits) -> Result<Vec<Vec<SepId>>> {
    let m = sys.len();
    let mut reps = Vec::new();
    let mut fixed = Vec::new();
    for i in 0..m {
        let ii = sys.inv_local(i);
        if ii == i {
            fixed.push(i);
        } else if i < ii {
            reps.push(i);
        }
    }
    limits.check("oracle involution pairs", limits.oracle_pairs, reps.len() as u32)?;
    let mut out = Vec::new();
    let mut o: Vec<usize> = Vec::with_capacity(reps.len() + fixed.len());
    for mask in 0u64..(1u64 << reps.len()) {
        o.clear();
        o.extend_from_slice(&fixed);
        for (b, &r) in reps.iter().enumerate() {
            o.push(if mask >> b & 1 == 1 { sys.inv_local(r) } else { r });
        }
        if orientation_is_profile(sys, &o) {
            let mut ids: Vec<SepId> = o.iter().map(|&i| sys.elems()[i]).collect();
            ids.sort_unstable();
            out.push(ids);
        }
    }
    out.sort();
    Ok(out)
}

/// Convenience wrapper packaging [`brute_profiles`] output as a ProfileSet.
pub fn brute_profile_set(sys: &CornerSystem, limits: &Limits) -> Result<ProfileSet> {
    Ok(ProfileSet::new(
        brute_profiles(sys, limits)?
            .into_iter()
            .map(|ids| Profile::from_ids(sys.id_space(), ids, None))
            .collect(),
    ))
}

fn orientation_is_profile(sys: &CornerSystem, o: &[usize]) -> bool {
    // consistency: no p, q from distinct pairs with inv(p) <= q
    for &p in o {
        let pi = sys.inv_local(p);
        for &q in o {
            if p == q || pi == q {
                continue;
            }
            if sys.leq_local(pi, q) {
                return false;
            }
        }
    }
    // corner condition: the inverse of a defined corner of two members is
    // not itself a member
    for &p in o {
        for &q in o {
            if let Some(c) = sys.corner_local(p, q) {
                if o.contains(&sys.inv_local(c)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Minimum order of any separation distinguishing two profiles, by full scan
/// of the universe. `None` when no separation splits them.
pub fn brute_min_order(u: &Universe, p: &Profile, q: &Profile) -> Result<Option<u32>> {
    let mut best = None;
    for s in u.ids() {
        if d_distinguishes(u, s, p, q) {
            let o = u.ord(s)?;
            best = Some(best.map_or(o, |b: u32| b.min(o)));
        }
    }
    Ok(best)
}

/// Re-checks a claimed tree of tangles against the definitions: the set is
/// nested and free of trivial, cotrivial and degenerate elements (judged in
/// the full universe), every distinguishable profile pair is split at its
/// brute-force minimum order, every element splits some pair at that pair's
/// minimum order, and within each profile every tree element lies below a
/// maximal one.
pub fn verify_tree(u: &Universe, tree: &[SepId], pset: &ProfileSet) -> Result<VerificationReport> {
    for &t in tree {
        if t.idx() >= u.len() {
            return Err(Error::NotInSystem(t));
        }
    }
    let mut closed: Vec<SepId> = tree.iter().flat_map(|&t| [t, u.inv_id(t)]).collect();
    closed.sort_unstable();
    closed.dedup();
    let mut rep = VerificationReport::new(u.name());

    rep.run("tree set: nested", |rep| {
        for (a, &s) in closed.iter().enumerate() {
            for &t in &closed[a + 1..] {
                if !d_nested(u, s, t) {
                    rep.violate(format!("{} crosses {}", label(u, s), label(u, t)));
                }
            }
        }
    });
    rep.run("tree set: no degenerate/trivial", |rep| {
        for &s in &closed {
            if u.inv_id(s) == s {
                rep.violate(format!("{} is degenerate", label(u, s)));
            }
            if let Some(w) = d_trivial(u, s) {
                rep.violate(format!("{} is trivial, witness {}", label(u, s), label(u, w)));
            }
            if let Some(w) = d_trivial(u, u.inv_id(s)) {
                rep.violate(format!("{} is cotrivial, witness {}", label(u, s), label(u, w)));
            }
        }
    });

    let mut min_order = vec![vec![None; pset.len()]; pset.len()];
    for (i, row) in min_order.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate().skip(i + 1) {
            *slot = brute_min_order(u, pset.get(i), pset.get(j))?;
        }
    }

    rep.run("efficient distinguishing", |rep| {
        for (i, row) in min_order.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate().skip(i + 1) {
                let Some(m) = entry else { continue };
                let hit = closed.iter().any(|&t| {
                    d_distinguishes(u, t, pset.get(i), pset.get(j))
                        && u.ord(t).map(|o| o == m).unwrap_or(false)
                });
                if !hit {
                    rep.violate(format!(
                        "profiles #{i} and #{j} are distinguishable at order {m} but no tree element does it"
                    ));
                }
            }
        }
    });
    rep.run("every element useful", |rep| {
        for &t in &closed {
            let used = (0..pset.len()).any(|i| {
                (i + 1..pset.len()).any(|j| {
                    min_order[i][j]
                        .map(|m| {
                            d_distinguishes(u, t, pset.get(i), pset.get(j))
                                && u.ord(t).map(|o| o == m).unwrap_or(false)
                        })
                        .unwrap_or(false)
                })
            });
            if !used {
                rep.violate(format!(
                    "{} distinguishes no profile pair at minimum order",
                    label(u, t)
                ));
            }
        }
    });
    rep.run("maximal element property", |rep| {
        for (pi, p) in pset.iter().enumerate() {
            let members: Vec<SepId> = closed.iter().copied().filter(|&t| p.contains(t)).collect();
            let maximal: Vec<SepId> = members
                .iter()
                .copied()
                .filter(|&m| members.iter().all(|&x| x == m || !(u.leq(m, x) && m != x)))
                .collect();
            for &x in &members {
                if !maximal.iter().any(|&m| u.leq(x, m)) {
                    rep.violate(format!(
                        "profile #{pi}: member {} lies below no maximal member",
                        label(u, x)
                    ));
                }
            }
        }
    });
    Ok(rep)
}

/// Recomputes the good image separations by definition (every image element
/// nested with every other, minus the empty and full sets) and compares with
/// a claimed set.
pub fn verify_good(
    sys: &CornerSystem,
    pset: &ProfileSet,
    claimed: &[Bits],
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("good image separations");
    let mut images = Vec::new();
    for i in 0..sys.len() {
        match d_image(sys, i, pset) {
            Some(b) => images.push(b),
            None => {
                return Err(Error::Precondition(format!(
                    "profile does not orient {}",
                    sys.elems()[i]
                )))
            }
        }
    }
    images.sort();
    images.dedup();
    let full = Bits::new(pset.len()).complement();
    let empty = Bits::new(pset.len());
    let mut good: Vec<Bits> = images
        .iter()
        .filter(|a| images.iter().all(|b| subset_nested(a, b)))
        .filter(|a| **a != empty && **a != full)
        .cloned()
        .collect();
    good.sort();
    let mut sorted_claim = claimed.to_vec();
    sorted_claim.sort();
    sorted_claim.dedup();
    rep.run("good set equality", |rep| {
        if sorted_claim != good {
            for b in &good {
                if !sorted_claim.contains(b) {
                    rep.violate(format!("missing good image {b:?}"));
                }
            }
            for b in &sorted_claim {
                if !good.contains(b) {
                    rep.violate(format!("claimed {b:?} is not good (or not an image)"));
                }
            }
        }
    });
    Ok(rep)
}

/// Definitional check that the image map is a homomorphism on the given local
/// index pairs (all pairs when empty): order preservation, and union/
/// intersection preservation over defined corners and dual corners.
pub fn check_hom(
    sys: &CornerSystem,
    pset: &ProfileSet,
    pairs: &[(usize, usize)],
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("image homomorphism");
    let mut images = Vec::with_capacity(sys.len());
    for i in 0..sys.len() {
        images.push(d_image(sys, i, pset).ok_or_else(|| {
            Error::Precondition(format!("profile does not orient {}", sys.elems()[i]))
        })?);
    }
    let all_pairs: Vec<(usize, usize)>;
    let pairs = if pairs.is_empty() {
        all_pairs = (0..sys.len())
            .flat_map(|i| (0..sys.len()).map(move |j| (i, j)))
            .collect();
        &all_pairs
    } else {
        pairs
    };
    rep.run("respects the order", |rep| {
        for &(i, j) in pairs {
            if sys.leq_local(i, j) && !images[i].is_subset(&images[j]) {
                rep.violate(format!(
                    "{} <= {} but images are not nested by inclusion",
                    sys.elems()[i],
                    sys.elems()[j]
                ));
            }
        }
    });
    rep.run("corner maps to union", |rep| {
        for &(i, j) in pairs {
            if let Some(c) = sys.corner_local(i, j) {
                if images[c] != images[i].union(&images[j]) {
                    rep.violate(format!(
                        "image of {} v {} differs from the union",
                        sys.elems()[i],
                        sys.elems()[j]
                    ));
                }
            }
        }
    });
    rep.run("dual corner maps to intersection", |rep| {
        for &(i, j) in pairs {
            if let Some(ci) = sys.corner_local(sys.inv_local(i), sys.inv_local(j)) {
                let m = sys.inv_local(ci);
                if images[m] != images[i].intersection(&images[j]) {
                    rep.violate(format!(
                        "image of {} ^ {} differs from the intersection",
                        sys.elems()[i],
                        sys.elems()[j]
                    ));
                }
            }
        }
    });
    Ok(rep)
}

/// On weakly submodular inputs, image inclusion must coincide with the
/// existence of order-related fiber members: `f(s) ⊆ f(t)` iff some `a` in
/// the fiber of `f(s)` and `b` in the fiber of `f(t)` satisfy `a <= b`.
/// Checked exhaustively in both directions for every element pair.
pub fn check_fiber_order_equivalence(
    sys: &CornerSystem,
    pset: &ProfileSet,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("fiber order equivalence");
    let mut images = Vec::with_capacity(sys.len());
    for i in 0..sys.len() {
        images.push(d_image(sys, i, pset).ok_or_else(|| {
            Error::Precondition(format!("profile does not orient {}", sys.elems()[i]))
        })?);
    }
    rep.run("weak submodularity hypothesis", |rep| {
        for i in 0..sys.len() {
            for j in 0..sys.len() {
                if images[i].is_subset(&images[j]) {
                    let dual = sys
                        .corner_local(sys.inv_local(i), sys.inv_local(j))
                        .is_some();
                    if sys.corner_local(i, j).is_none() && !dual {
                        rep.violate(format!(
                            "f({0}) ⊆ f({1}) but neither {0} v {1} nor {0} ^ {1} exists",
                            sys.elems()[i],
                            sys.elems()[j]
                        ));
                    }
                }
            }
        }
    });
    if !rep.passed() {
        return Ok(rep);
    }
    rep.run("inclusion iff ordered fiber members", |rep| {
        for i in 0..sys.len() {
            for j in 0..sys.len() {
                let incl = images[i].is_subset(&images[j]);
                let ordered = (0..sys.len()).any(|a| {
                    images[a] == images[i]
                        && (0..sys.len())
                            .any(|b| images[b] == images[j] && sys.leq_local(a, b))
                });
                if incl != ordered {
                    rep.violate(format!(
                        "f({0}) ⊆ f({1}) is {incl} but ordered fiber members exist = {ordered}",
                        sys.elems()[i],
                        sys.elems()[j]
                    ));
                }
            }
        }
    });
    Ok(rep)
}

/// The three guarantees of the quotient tree-set construction, re-derived
/// from definitions: the output is a tree set of `sys` whose elements each
/// split some profile pair, every distinct pair gets split, and inside each
/// profile every tree element sits below a maximal one.
pub fn verify_abstract_postconditions(
    sys: &CornerSystem,
    pset: &ProfileSet,
    tree: &[SepId],
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("quotient tree set");
    let mut closed: Vec<usize> = Vec::new();
    for &t in tree {
        let i = sys.pos(t).ok_or(Error::NotInSystem(t))?;
        closed.push(i);
        closed.push(sys.inv_local(i));
    }
    closed.sort_unstable();
    closed.dedup();

    rep.run("tree set in the system", |rep| {
        for (a, &i) in closed.iter().enumerate() {
            for &j in &closed[a + 1..] {
                if !d_nested_local(sys, i, j) {
                    rep.violate(format!("{} crosses {}", sys.elems()[i], sys.elems()[j]));
                }
            }
        }
        for &i in &closed {
            if sys.inv_local(i) == i {
                rep.violate(format!("{} is degenerate", sys.elems()[i]));
            }
            if let Some(w) = d_trivial_local(sys, i) {
                rep.violate(format!(
                    "{} is trivial, witness {}",
                    sys.elems()[i],
                    sys.elems()[w]
                ));
            }
            if let Some(w) = d_trivial_local(sys, sys.inv_local(i)) {
                rep.violate(format!(
                    "{} is cotrivial, witness {}",
                    sys.elems()[i],
                    sys.elems()[w]
                ));
            }
        }
    });
    rep.run("all pairs distinguished", |rep| {
        for i in 0..pset.len() {
            for j in i + 1..pset.len() {
                let (p, q) = (pset.get(i), pset.get(j));
                if p.ids() == q.ids() {
                    continue;
                }
                let split = closed.iter().any(|&t| {
                    let (s, si) = (sys.elems()[t], sys.elems()[sys.inv_local(t)]);
                    s != si && ((p.contains(s) && q.contains(si)) || (p.contains(si) && q.contains(s)))
                });
                if !split {
                    rep.violate(format!("profiles #{i} and #{j} not distinguished"));
                }
            }
        }
    });
    rep.run("every element distinguishes", |rep| {
        for &t in &closed {
            let (s, si) = (sys.elems()[t], sys.elems()[sys.inv_local(t)]);
            let used = (0..pset.len()).any(|i| {
                (0..pset.len()).any(|j| {
                    i != j && s != si && pset.get(i).contains(s) && pset.get(j).contains(si)
                })
            });
            if !used {
                rep.violate(format!("{s} distinguishes no pair"));
            }
        }
    });
    rep.run("maximal element property", |rep| {
        for (pi, p) in pset.iter().enumerate() {
            let members: Vec<usize> = closed
                .iter()
                .copied()
                .filter(|&t| p.contains(sys.elems()[t]))
                .collect();
            let maximal: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&m| members.iter().all(|&x| x == m || !(sys.leq_local(m, x) && m != x)))
                .collect();
            for &x in &members {
                if !maximal.iter().any(|&m| sys.leq_local(x, m)) {
                    rep.violate(format!(
                        "profile #{pi}: member {} below no maximal member",
                        sys.elems()[x]
                    ));
                }
            }
        }
    });
    Ok(rep)
}

/// Definitional re-check of the regularization contract: the core removed
/// exactly the degenerate/trivial/cotrivial elements, the regularized
/// relation dropped exactly the `s <= inv(s)`-shaped edges, corners are
/// genuine suprema for the new order, the output is regular, projected
/// profiles are profiles of it, and orderliness survives when it held.
pub fn check_regularization(
    sys: &CornerSystem,
    result: &RegularizationResult,
    pset: &ProfileSet,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("regularization");
    let core = &result.core;
    let reg = &result.regular;

    rep.run("core removes exactly the inessential", |rep| {
        for i in 0..sys.len() {
            let s = sys.elems()[i];
            let ii = sys.inv_local(i);
            let bad = ii == i || d_trivial_local(sys, i).is_some() || d_trivial_local(sys, ii).is_some();
            let kept = core.contains(s);
            if bad == kept {
                rep.violate(format!(
                    "{s} should be {} the core",
                    if bad { "outside" } else { "inside" }
                ));
            }
        }
    });
    rep.run("regularized order drops inverse edges", |rep| {
        for i in 0..reg.len() {
            for j in 0..reg.len() {
                let (s, t) = (reg.elems()[i], reg.elems()[j]);
                let (ci, cj) = (core.pos(s).unwrap(), core.pos(t).unwrap());
                let expect = core.leq_local(ci, cj) && core.inv_local(ci) != cj;
                if reg.leq_local(i, j) != expect {
                    rep.violate(format!("relation {s} <= {t} wrong after regularization"));
                }
            }
        }
    });
    rep.run("corners are suprema for the new order", |rep| {
        for i in 0..reg.len() {
            for j in 0..reg.len() {
                match reg.corner_local(i, j) {
                    Some(c) => {
                        if !(reg.leq_local(i, c) && reg.leq_local(j, c)) {
                            rep.violate(format!(
                                "corner of {} and {} is not an upper bound",
                                reg.elems()[i],
                                reg.elems()[j]
                            ));
                            continue;
                        }
                        for x in 0..reg.len() {
                            if reg.leq_local(i, x) && reg.leq_local(j, x) && !reg.leq_local(c, x) {
                                rep.violate(format!(
                                    "corner of {} and {} is not least",
                                    reg.elems()[i],
                                    reg.elems()[j]
                                ));
                                break;
                            }
                        }
                    }
                    None => {
                        // undefined is fine; but it must not be the case that
                        // the old corner survives in the core and is still
                        // the supremum
                        let (s, t) = (reg.elems()[i], reg.elems()[j]);
                        let (ci, cj) = (core.pos(s).unwrap(), core.pos(t).unwrap());
                        if let Some(c0) = core.corner_local(ci, cj) {
                            let cid = core.elems()[c0];
                            let c = reg.pos(cid).unwrap();
                            let ub = reg.leq_local(i, c) && reg.leq_local(j, c);
                            let least = ub
                                && (0..reg.len()).all(|x| {
                                    !(reg.leq_local(i, x) && reg.leq_local(j, x))
                                        || reg.leq_local(c, x)
                                });
                            if least {
                                rep.violate(format!(
                                    "corner of {s} and {t} was dropped although still the supremum"
                                ));
                            }
                        }
                    }
                }
            }
        }
    });
    rep.run("output is regular", |rep| {
        for i in 0..reg.len() {
            if reg.leq_local(i, reg.inv_local(i)) {
                rep.violate(format!("{} is still small", reg.elems()[i]));
            }
        }
    });
    rep.run("projected profiles are profiles", |rep| {
        let keep: Vec<SepId> = reg.elems().to_vec();
        let mut expected: Vec<Vec<SepId>> = pset
            .iter()
            .map(|p| {
                keep.iter()
                    .copied()
                    .filter(|&s| p.contains(s))
                    .collect::<Vec<_>>()
            })
            .collect();
        expected.sort();
        expected.dedup();
        let mut got: Vec<Vec<SepId>> =
            result.projected_profiles.iter().map(|p| p.ids().to_vec()).collect();
        got.sort();
        if got != expected {
            rep.violate("projected profile set differs from {P ∩ S'}".to_string());
        }
        for p in &result.projected_profiles {
            let local: Vec<usize> = p.ids().iter().map(|&s| reg.pos(s).unwrap()).collect();
            // full orientation
            for i in 0..reg.len() {
                let ii = reg.inv_local(i);
                let has_i = local.contains(&i);
                let has_ii = local.contains(&ii);
                if i == ii && !has_i {
                    rep.violate(format!("projection misses degenerate {}", reg.elems()[i]));
                } else if i != ii && has_i == has_ii {
                    rep.violate(format!(
                        "projection does not orient the pair of {}",
                        reg.elems()[i]
                    ));
                }
            }
            if !orientation_is_profile(reg, &local) {
                rep.violate(format!("projection {:?} is not a profile of S'", p.ids()));
            }
        }
    });
    rep.run("orderliness preserved", |rep| {
        if d_orderly(sys, pset) && !d_orderly(reg, &result.projected_profiles) {
            rep.violate("input system was orderly but the regularization is not".to_string());
        }
    });
    Ok(rep)
}

fn d_orderly(sys: &CornerSystem, pset: &ProfileSet) -> bool {
    for i in 0..sys.len() {
        for j in 0..sys.len() {
            let (s, t) = (sys.elems()[i], sys.elems()[j]);
            let (si, ti) = (sys.elems()[sys.inv_local(i)], sys.elems()[sys.inv_local(j)]);
            let fwd = pset.iter().any(|p| p.contains(s) && p.contains(t));
            let bwd = pset.iter().any(|p| p.contains(si) && p.contains(ti));
            if fwd && bwd {
                let has_join = sys.corner_local(i, j).is_some();
                let has_dual = sys
                    .corner_local(sys.inv_local(i), sys.inv_local(j))
                    .is_some();
                if !has_join || !has_dual {
                    return false;
                }
            }
        }
    }
    true
}

/// Checks that a tree set built for the regularized system still works in the
/// original one: its elements are pairwise nested under the original order,
/// none is trivial/cotrivial/degenerate there, and every profile pair whose
/// projections the tree distinguishes is still split.
pub fn check_treeset_preservation(
    sys: &CornerSystem,
    regular: &CornerSystem,
    pset: &ProfileSet,
    projected: &ProfileSet,
    tree: &[SepId],
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("tree set preservation");
    let mut closed: Vec<usize> = Vec::new();
    for &t in tree {
        let i = sys.pos(t).ok_or(Error::NotInSystem(t))?;
        if regular.pos(t).is_none() {
            return Err(Error::Precondition(format!("{t} is not in the regularization")));
        }
        closed.push(i);
        closed.push(sys.inv_local(i));
    }
    closed.sort_unstable();
    closed.dedup();
    rep.run("nested in the original system", |rep| {
        for (a, &i) in closed.iter().enumerate() {
            for &j in &closed[a + 1..] {
                if !d_nested_local(sys, i, j) {
                    rep.violate(format!("{} crosses {}", sys.elems()[i], sys.elems()[j]));
                }
            }
        }
    });
    rep.run("tree set of the original system", |rep| {
        for &i in &closed {
            if sys.inv_local(i) == i {
                rep.violate(format!("{} is degenerate", sys.elems()[i]));
            }
            if let Some(w) = d_trivial_local(sys, i) {
                rep.violate(format!(
                    "{} is trivial, witness {}",
                    sys.elems()[i],
                    sys.elems()[w]
                ));
            }
            if let Some(w) = d_trivial_local(sys, sys.inv_local(i)) {
                rep.violate(format!(
                    "{} is cotrivial, witness {}",
                    sys.elems()[i],
                    sys.elems()[w]
                ));
            }
        }
    });
    rep.run("distinguishing power carries over", |rep| {
        // only a tree that splits every distinct pair of projections promises
        // anything about the originals
        let splits = |a: &Profile, b: &Profile| {
            closed.iter().any(|&t| {
                let (s, si) = (sys.elems()[t], sys.elems()[sys.inv_local(t)]);
                (a.contains(s) && b.contains(si)) || (a.contains(si) && b.contains(s))
            })
        };
        let covers_projections = (0..projected.len()).all(|a| {
            (a + 1..projected.len()).all(|b| {
                let (pa, pb) = (projected.get(a), projected.get(b));
                pa.ids() == pb.ids() || splits(pa, pb)
            })
        });
        if !covers_projections {
            return;
        }
        for i in 0..pset.len() {
            for j in i + 1..pset.len() {
                let (p, q) = (pset.get(i), pset.get(j));
                if p.ids() != q.ids() && !splits(p, q) {
                    rep.violate(format!(
                        "original profiles #{i} and #{j} lost their distinguisher"
                    ));
                }
            }
        }
    });
    Ok(rep)
}

/// Definitional check of a finished construction: the certificates biject
/// with the tree's involution pairs, and each one names a pair of input
/// profiles split by its element at exactly their minimum distinguishing
/// order (recomputed by full scan).
pub fn verify_certificates(
    u: &Universe,
    tree: &[SepId],
    certificates: &[crate::tangletree::Certificate],
    profiles: &ProfileSet,
) -> Result<VerificationReport> {
    use std::collections::BTreeSet;
    let mut rep = VerificationReport::new("certificates");
    let mut mins = Vec::with_capacity(certificates.len());
    let mut ords = Vec::with_capacity(certificates.len());
    for c in certificates {
        if c.p >= profiles.len() || c.q >= profiles.len() || c.p == c.q {
            return Err(Error::Precondition(format!(
                "certificate of {} names profile indices {} and {}",
                c.sep, c.p, c.q
            )));
        }
        if !u.has(c.sep) {
            return Err(Error::NotInSystem(c.sep));
        }
        mins.push(brute_min_order(u, profiles.get(c.p), profiles.get(c.q))?);
        ords.push(u.ord(c.sep)?);
    }
    rep.run("certificates cover the tree", |rep| {
        let tree_reps: BTreeSet<SepId> =
            tree.iter().map(|&t| t.min(u.inv_id(t))).collect();
        let cert_reps: BTreeSet<SepId> = certificates
            .iter()
            .map(|c| c.sep.min(u.inv_id(c.sep)))
            .collect();
        for &t in tree_reps.difference(&cert_reps) {
            rep.violate(format!("tree pair of {} has no certificate", label(u, t)));
        }
        for &t in cert_reps.difference(&tree_reps) {
            rep.violate(format!("certificate element {} is not in the tree", label(u, t)));
        }
        if certificates.len() != cert_reps.len() {
            rep.violate("several certificates for one involution pair".to_string());
        }
    });
    rep.run("certified splits are efficient", |rep| {
        for (ci, c) in certificates.iter().enumerate() {
            let (p, q) = (profiles.get(c.p), profiles.get(c.q));
            if !d_distinguishes(u, c.sep, p, q) {
                rep.violate(format!(
                    "{} does not split profiles #{} and #{}",
                    label(u, c.sep),
                    c.p,
                    c.q
                ));
                continue;
            }
            if mins[ci] != Some(ords[ci]) {
                rep.violate(format!(
                    "{} splits #{} and #{} at order {} but their minimum is {:?}",
                    label(u, c.sep),
                    c.p,
                    c.q,
                    ords[ci],
                    mins[ci]
                ));
            }
        }
    });
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::powerset_universe;
    use crate::profiles::enumerate_profiles;

    fn pow(n: u32) -> Universe {
        powerset_universe(n, &Limits::default()).unwrap()
    }

    #[test]
    fn brute_matches_enumerator_on_powerset_slices() {
        let limits = Limits::default();
        for n in 1..=3u32 {
            let u = pow(n);
            for k in 0..=n {
                let sub = u.subsystem(k).unwrap();
                let sys = CornerSystem::induced(&u, sub.members().to_vec());
                let brute = brute_profiles(&sys, &limits).unwrap();
                let fast: Vec<Vec<SepId>> =
                    enumerate_profiles(&sys).iter().map(|p| p.ids().to_vec()).collect();
                assert_eq!(brute, fast, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn order_one_profile_count_in_powerset4_is_two() {
        // the subsystem of order-zero separations has members {}, {1,2,3,4}
        // and exactly two profiles, as the exhaustive scan confirms
        let u = pow(4);
        let sub = u.subsystem(1).unwrap();
        let sys = CornerSystem::induced(&u, sub.members().to_vec());
        let brute = brute_profiles(&sys, &Limits::default()).unwrap();
        assert_eq!(brute.len(), 2);
        assert_eq!(brute[0], vec![SepId(0)]);
        assert_eq!(brute[1], vec![SepId(15)]);
    }

    #[test]
    fn min_order_between_powerset2_profiles() {
        // both 2-profiles must orient the bottom pair towards the empty set
        // (the full set above a singleton is inconsistent), so they agree at
        // order 0 and first differ on the singleton pair at order 1
        let u = pow(2);
        let ps = crate::profiles::profiles_of_order(&u, 2).unwrap();
        assert_eq!(ps.len(), 2);
        let m = brute_min_order(&u, ps.get(0), ps.get(1)).unwrap();
        assert_eq!(m, Some(1));
    }

    #[test]
    fn verify_tree_flags_a_trivial_member() {
        let u = pow(4);
        let ps = crate::profiles::profiles_of_order(&u, 1).unwrap();
        // {} is trivial in the powerset universe, so a "tree" containing it
        // must be rejected even though it is nested with everything
        let rep = verify_tree(&u, &[SepId(0)], &ps).unwrap();
        assert!(!rep.passed());
        assert!(rep
            .violations
            .iter()
            .any(|v| v.check == "tree set: no degenerate/trivial"));
    }

    #[test]
    fn verify_tree_accepts_empty_tree_for_single_profile() {
        let u = pow(2);
        let ps = ProfileSet::new(vec![crate::profiles::profiles_of_order(&u, 1)
            .unwrap()
            .get(0)
            .clone()]);
        let rep = verify_tree(&u, &[], &ps).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn limit_guard_fires() {
        let limits = Limits { oracle_pairs: 1, ..Limits::default() };
        let u = pow(2);
        let sys = CornerSystem::induced(&u, u.full_subsystem().members().to_vec());
        assert!(matches!(
            brute_profiles(&sys, &limits),
            Err(Error::LimitExceeded { .. })
        ));
    }
}
