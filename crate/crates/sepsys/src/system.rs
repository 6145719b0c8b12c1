//! Separation systems: a finite universe with involution, partial order,
//! total join/meet and an optional integer order function, plus the two
//! derived views used everywhere else: subsystems of a universe and
//! stand-alone corner systems with a partial join.
//!
//! All values are immutable once built; every operation is a pure function
//! of its inputs.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{BitMat, Bits};
use crate::{Error, Result};

/// Identifier of an oriented separation within one id space (dense).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SepId(pub u32);

impl SepId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

impl fmt::Debug for SepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// Minimal read-only view shared by universes, subsystems and corner
/// systems: element enumeration, involution and the partial order.
/// Ids always refer to the owning id space, so mixing ids from different
/// structures is a bounds error, not a silent wrong answer.
pub trait SepView {
    /// Number of elements in this system.
    fn size(&self) -> usize;
    /// The i-th element in canonical (ascending id) order.
    fn id_at(&self, i: usize) -> SepId;
    fn has(&self, s: SepId) -> bool;
    fn inv_of(&self, s: SepId) -> SepId;
    fn leq_ids(&self, s: SepId, t: SepId) -> bool;
    /// Order function value, if the structure carries one.
    fn ord_opt(&self, s: SepId) -> Option<u32>;

    fn ids(&self) -> Vec<SepId> {
        (0..self.size()).map(|i| self.id_at(i)).collect()
    }
}

/// Classification flags of a single separation inside a system.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct SepFlags {
    pub small: bool,
    pub cosmall: bool,
    pub degenerate: bool,
    pub trivial: bool,
    pub cotrivial: bool,
}

/// `s <= t` or `s <= t*`.
pub fn points_towards(view: &impl SepView, s: SepId, t: SepId) -> bool {
    view.leq_ids(s, t) || view.leq_ids(s, view.inv_of(t))
}

/// One of `s <= t`, `s <= t*`, `s* <= t`, `s* <= t*`.
pub fn nested(view: &impl SepView, s: SepId, t: SepId) -> bool {
    points_towards(view, s, t) || points_towards(view, view.inv_of(s), t)
}

pub fn classify(view: &impl SepView, s: SepId) -> SepFlags {
    let si = view.inv_of(s);
    let mut flags = SepFlags {
        small: view.leq_ids(s, si),
        cosmall: view.leq_ids(si, s),
        degenerate: s == si,
        ..SepFlags::default()
    };
    for i in 0..view.size() {
        let t = view.id_at(i);
        let ti = view.inv_of(t);
        // strict: s < t and s < t*, witness pair distinct from {s, s*}
        if t == s || t == si {
            continue;
        }
        if view.leq_ids(s, t) && s != t && view.leq_ids(s, ti) && s != ti {
            flags.trivial = true;
        }
        if view.leq_ids(si, t) && si != t && view.leq_ids(si, ti) && si != ti {
            flags.cotrivial = true;
        }
        if flags.trivial && flags.cotrivial {
            break;
        }
    }
    flags
}

/// No element lies below its own inverse.
pub fn is_regular_system(view: &impl SepView) -> bool {
    (0..view.size()).all(|i| {
        let s = view.id_at(i);
        !view.leq_ids(s, view.inv_of(s))
    })
}

/// A set of oriented separations picking exactly one orientation per
/// involution pair of a system.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Orientation {
    pub chosen: Vec<SepId>,
}

impl Orientation {
    pub fn new(view: &impl SepView, mut chosen: Vec<SepId>) -> Result<Self> {
        chosen.sort_unstable();
        chosen.dedup();
        let set: BTreeSet<SepId> = chosen.iter().copied().collect();
        for &s in &chosen {
            if !view.has(s) {
                return Err(Error::NotInSystem(s));
            }
            let si = view.inv_of(s);
            if si != s && set.contains(&si) {
                return Err(Error::Precondition(format!(
                    "orientation contains both {s} and its inverse {si}"
                )));
            }
        }
        let mut pairs = 0usize;
        for i in 0..view.size() {
            let s = view.id_at(i);
            if s <= view.inv_of(s) {
                pairs += 1;
            }
        }
        if chosen.len() != pairs {
            return Err(Error::Precondition(format!(
                "orientation chooses {} of {} involution pairs",
                chosen.len(),
                pairs
            )));
        }
        Ok(Orientation { chosen })
    }
}

/// No two members from distinct involution pairs with `inv(p) <= q`.
pub fn is_consistent(view: &impl SepView, chosen: &[SepId]) -> bool {
    for (i, &p) in chosen.iter().enumerate() {
        let pi = view.inv_of(p);
        for &q in &chosen[i + 1..] {
            let qi = view.inv_of(q);
            if p == q || p == qi {
                continue; // same involution pair
            }
            if view.leq_ids(pi, q) || view.leq_ids(qi, p) {
                return false;
            }
        }
    }
    true
}

/// Nested, inversion-closed, and free of trivial, cotrivial and degenerate
/// elements (all judged inside `view`). The input is closed under inversion
/// before checking.
pub fn is_tree_set(view: &impl SepView, set: &[SepId]) -> bool {
    let mut closed: BTreeSet<SepId> = set.iter().copied().collect();
    let extra: Vec<SepId> = closed.iter().map(|&s| view.inv_of(s)).collect();
    closed.extend(extra);
    let elems: Vec<SepId> = closed.into_iter().collect();
    for (i, &s) in elems.iter().enumerate() {
        let f = classify(view, s);
        if f.trivial || f.cotrivial || f.degenerate {
            return false;
        }
        for &t in &elems[i + 1..] {
            if !nested(view, s, t) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum UniverseViolation {
    InvolutionNotPaired { s: SepId },
    LeqNotReflexive { s: SepId },
    LeqNotAntisymmetric { s: SepId, t: SepId },
    LeqNotTransitive { s: SepId, t: SepId },
    OrderNotReversed { s: SepId, t: SepId },
    JoinNotSupremum { s: SepId, t: SepId },
    MeetNotInfimum { s: SepId, t: SepId },
    JoinMeetNotDual { s: SepId, t: SepId },
    OrdNotInvolutionInvariant { s: SepId },
    OrdNotSubmodular { s: SepId, t: SepId },
}

/// Outcome of `Universe::validate`; one minimal witness per violated law.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<UniverseViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "universe ok");
        }
        for v in &self.violations {
            writeln!(f, "violation: {v:?}")?;
        }
        Ok(())
    }
}

/// A finite universe of oriented separations: involution, partial order
/// stored as a full bit matrix, total join/meet tables and an optional
/// submodular order function.
#[derive(Clone)]
pub struct Universe {
    name: String,
    inv: Vec<u32>,
    leq: BitMat,
    join: Vec<u32>,
    meet: Vec<u32>,
    ord: Option<Vec<u32>>,
    labels: Vec<String>,
}

impl Universe {
    pub fn from_tables(
        name: String,
        inv: Vec<u32>,
        leq: BitMat,
        join: Vec<u32>,
        meet: Vec<u32>,
        ord: Option<Vec<u32>>,
        labels: Vec<String>,
    ) -> Self {
        let n = inv.len();
        assert_eq!(leq.size(), n);
        assert_eq!(join.len(), n * n);
        assert_eq!(meet.len(), n * n);
        assert_eq!(labels.len(), n);
        if let Some(o) = &ord {
            assert_eq!(o.len(), n);
        }
        Universe { name, inv, leq, join, meet, ord, labels }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: String) -> Self {
        self.name = name;
        self
    }

    pub fn len(&self) -> usize {
        self.inv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv.is_empty()
    }

    pub fn label(&self, s: SepId) -> &str {
        &self.labels[s.idx()]
    }

    #[inline]
    pub fn inv_id(&self, s: SepId) -> SepId {
        SepId(self.inv[s.idx()])
    }

    #[inline]
    pub fn leq(&self, s: SepId, t: SepId) -> bool {
        self.leq.get(s.idx(), t.idx())
    }

    #[inline]
    pub fn join(&self, s: SepId, t: SepId) -> SepId {
        SepId(self.join[s.idx() * self.len() + t.idx()])
    }

    #[inline]
    pub fn meet(&self, s: SepId, t: SepId) -> SepId {
        SepId(self.meet[s.idx() * self.len() + t.idx()])
    }

    pub fn ord(&self, s: SepId) -> Result<u32> {
        self.ord
            .as_ref()
            .map(|o| o[s.idx()])
            .ok_or(Error::MissingOrderFunction)
    }

    pub fn has_ord(&self) -> bool {
        self.ord.is_some()
    }

    pub fn max_ord(&self) -> Result<u32> {
        let o = self.ord.as_ref().ok_or(Error::MissingOrderFunction)?;
        Ok(o.iter().copied().max().unwrap_or(0))
    }

    /// All separations of order strictly below `k`, as a subsystem.
    pub fn subsystem(&self, k: u32) -> Result<SubSystem<'_>> {
        let o = self.ord.as_ref().ok_or(Error::MissingOrderFunction)?;
        let members: Vec<SepId> = (0..self.len() as u32)
            .filter(|&i| o[i as usize] < k)
            .map(SepId)
            .collect();
        Ok(SubSystem::new(self, members))
    }

    /// The whole universe viewed as a subsystem of itself.
    pub fn full_subsystem(&self) -> SubSystem<'_> {
        SubSystem::new(self, (0..self.len() as u32).map(SepId).collect())
    }

    /// Check every structural law; reports one minimal witness per law.
    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let mut rep = ValidationReport::default();
        let mut push = |v: UniverseViolation, seen: &mut bool| {
            if !*seen {
                rep.violations.push(v);
                *seen = true;
            }
        };
        let (mut inv_bad, mut refl_bad, mut asym_bad, mut trans_bad) =
            (false, false, false, false);
        let (mut rev_bad, mut join_bad, mut meet_bad, mut dual_bad) =
            (false, false, false, false);
        let (mut oi_bad, mut sub_bad) = (false, false);

        for i in 0..n {
            let s = SepId(i as u32);
            if self.inv[self.inv[i] as usize] != i as u32 {
                push(UniverseViolation::InvolutionNotPaired { s }, &mut inv_bad);
            }
            if !self.leq.get(i, i) {
                push(UniverseViolation::LeqNotReflexive { s }, &mut refl_bad);
            }
            if let Some(o) = &self.ord {
                if o[i] != o[self.inv[i] as usize] {
                    push(UniverseViolation::OrdNotInvolutionInvariant { s }, &mut oi_bad);
                }
            }
        }
        for i in 0..n {
            let s = SepId(i as u32);
            for j in 0..n {
                let t = SepId(j as u32);
                if self.leq.get(i, j) {
                    if i != j && self.leq.get(j, i) {
                        push(UniverseViolation::LeqNotAntisymmetric { s, t }, &mut asym_bad);
                    }
                    // transitive: everything above j is above i
                    if !trans_bad && !self.leq.row_subset(j, i) {
                        push(UniverseViolation::LeqNotTransitive { s, t }, &mut trans_bad);
                    }
                    // order reversal: s <= t iff inv(t) <= inv(s)
                    if !self.leq.get(self.inv[j] as usize, self.inv[i] as usize) {
                        push(UniverseViolation::OrderNotReversed { s, t }, &mut rev_bad);
                    }
                }
            }
        }
        // join = supremum, meet = infimum, de Morgan duality, submodularity
        let row_words = self.leq.row(0).len();
        let mut ubuf = vec![0u64; row_words];
        for i in 0..n {
            let s = SepId(i as u32);
            for j in i..n {
                let t = SepId(j as u32);
                let jj = self.join[i * n + j] as usize;
                let mm = self.meet[i * n + j] as usize;
                if self.join[i * n + j] != self.join[j * n + i]
                    || self.meet[i * n + j] != self.meet[j * n + i]
                {
                    push(UniverseViolation::JoinNotSupremum { s, t }, &mut join_bad);
                }
                // upper bounds of {s, t}
                for (w, u) in ubuf.iter_mut().enumerate() {
                    *u = self.leq.row(i)[w] & self.leq.row(j)[w];
                }
                let jrow = self.leq.row(jj);
                let sup_ok = self.leq.get(i, jj)
                    && self.leq.get(j, jj)
                    && ubuf.iter().zip(jrow).all(|(ub, jr)| ub & !jr == 0);
                if !sup_ok {
                    push(UniverseViolation::JoinNotSupremum { s, t }, &mut join_bad);
                }
                // lower bounds of {s, t}: via reversal, use rows of inverses
                let (ii, ji) = (self.inv[i] as usize, self.inv[j] as usize);
                for (w, u) in ubuf.iter_mut().enumerate() {
                    *u = self.leq.row(ii)[w] & self.leq.row(ji)[w];
                }
                let mrow = self.leq.row(self.inv[mm] as usize);
                let inf_ok = self.leq.get(mm, i)
                    && self.leq.get(mm, j)
                    && ubuf.iter().zip(mrow).all(|(ub, mr)| ub & !mr == 0);
                if !inf_ok {
                    push(UniverseViolation::MeetNotInfimum { s, t }, &mut meet_bad);
                }
                if self.inv[jj] as usize != self.meet[ii * n + ji] as usize {
                    push(UniverseViolation::JoinMeetNotDual { s, t }, &mut dual_bad);
                }
                if let Some(o) = &self.ord {
                    if o[jj] + o[mm] > o[i] + o[j] {
                        push(UniverseViolation::OrdNotSubmodular { s, t }, &mut sub_bad);
                    }
                }
            }
        }
        rep
    }
}

impl SepView for Universe {
    fn size(&self) -> usize {
        self.len()
    }
    fn id_at(&self, i: usize) -> SepId {
        SepId(i as u32)
    }
    fn has(&self, s: SepId) -> bool {
        s.idx() < self.len()
    }
    fn inv_of(&self, s: SepId) -> SepId {
        self.inv_id(s)
    }
    fn leq_ids(&self, s: SepId, t: SepId) -> bool {
        self.leq(s, t)
    }
    fn ord_opt(&self, s: SepId) -> Option<u32> {
        self.ord.as_ref().map(|o| o[s.idx()])
    }
}

/// An inversion-closed subset of a universe, remembering where it came from.
#[derive(Clone)]
pub struct SubSystem<'a> {
    universe: &'a Universe,
    members: Vec<SepId>,
    mask: Bits,
}

impl<'a> SubSystem<'a> {
    pub fn new(universe: &'a Universe, mut members: Vec<SepId>) -> Self {
        members.sort_unstable();
        members.dedup();
        let mask = Bits::from_indices(universe.len(), members.iter().map(|s| s.idx()));
        let sub = SubSystem { universe, members, mask };
        debug_assert!(
            sub.members.iter().all(|&s| sub.mask.get(universe.inv_id(s).idx())),
            "subsystem must be closed under inversion"
        );
        sub
    }

    pub fn universe(&self) -> &'a Universe {
        self.universe
    }

    pub fn members(&self) -> &[SepId] {
        &self.members
    }

    pub fn contains(&self, s: SepId) -> bool {
        s.idx() < self.mask.len() && self.mask.get(s.idx())
    }

    /// Materialize as a stand-alone corner system under the given strategy.
    pub fn corner_system(&self, strategy: CornerStrategy) -> CornerSystem {
        make_corner_system(self, strategy)
    }
}

impl SepView for SubSystem<'_> {
    fn size(&self) -> usize {
        self.members.len()
    }
    fn id_at(&self, i: usize) -> SepId {
        self.members[i]
    }
    fn has(&self, s: SepId) -> bool {
        self.contains(s)
    }
    fn inv_of(&self, s: SepId) -> SepId {
        self.universe.inv_id(s)
    }
    fn leq_ids(&self, s: SepId, t: SepId) -> bool {
        self.universe.leq(s, t)
    }
    fn ord_opt(&self, s: SepId) -> Option<u32> {
        self.universe.ord_opt(s)
    }
}

/// How the partial join of a corner system derived from a subsystem is
/// populated. Every strategy defines the corner of two comparable elements.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CornerStrategy {
    /// Universe join, kept only when the result lies in the subsystem.
    Induced,
    /// Least upper bound within the subsystem's restricted order, when one
    /// exists.
    PosetSup,
    /// Only comparable pairs get a corner (their maximum).
    Comparable,
}

pub const NO_CORNER: u32 = u32::MAX;

/// A separation system with involution, partial order and a partial binary
/// join (`corner`). Elements keep the ids they had in whatever structure
/// they came from, so results can be read back against the original.
#[derive(Clone)]
pub struct CornerSystem {
    id_space: usize,
    elems: Vec<SepId>,
    inv: Vec<u32>,    // local indices
    leq: BitMat,      // local
    corner: Vec<u32>, // local, NO_CORNER when undefined
    ord: Option<Vec<u32>>,
}

impl CornerSystem {
    pub fn from_parts(
        id_space: usize,
        elems: Vec<SepId>,
        inv: Vec<u32>,
        leq: BitMat,
        corner: Vec<u32>,
        ord: Option<Vec<u32>>,
    ) -> Self {
        let m = elems.len();
        assert!(elems.windows(2).all(|w| w[0] < w[1]), "elems must be sorted");
        assert_eq!(inv.len(), m);
        assert_eq!(leq.size(), m);
        assert_eq!(corner.len(), m * m);
        if let Some(o) = &ord {
            assert_eq!(o.len(), m);
        }
        CornerSystem { id_space, elems, inv, leq, corner, ord }
    }

    /// Shorthand for the induced corner system on a member set.
    pub fn induced(universe: &Universe, members: Vec<SepId>) -> CornerSystem {
        SubSystem::new(universe, members).corner_system(CornerStrategy::Induced)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Size of the ambient id space the element ids live in.
    pub fn id_space(&self) -> usize {
        self.id_space
    }

    pub fn elems(&self) -> &[SepId] {
        &self.elems
    }

    #[inline]
    pub fn pos(&self, s: SepId) -> Option<usize> {
        self.elems.binary_search(&s).ok()
    }

    fn pos_req(&self, s: SepId) -> Result<usize> {
        self.pos(s).ok_or(Error::NotInSystem(s))
    }

    pub fn contains(&self, s: SepId) -> bool {
        self.pos(s).is_some()
    }

    #[inline]
    pub fn inv_local(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    #[inline]
    pub fn leq_local(&self, i: usize, j: usize) -> bool {
        self.leq.get(i, j)
    }

    #[inline]
    pub fn corner_local(&self, i: usize, j: usize) -> Option<usize> {
        let c = self.corner[i * self.len() + j];
        (c != NO_CORNER).then_some(c as usize)
    }

    /// Partial join on ids; `None` when undefined.
    pub fn corner_of(&self, s: SepId, t: SepId) -> Result<Option<SepId>> {
        let (i, j) = (self.pos_req(s)?, self.pos_req(t)?);
        Ok(self.corner_local(i, j).map(|c| self.elems[c]))
    }

    /// Dual partial meet: `inv(corner(inv s, inv t))`.
    pub fn dual_corner_of(&self, s: SepId, t: SepId) -> Result<Option<SepId>> {
        let (i, j) = (self.pos_req(s)?, self.pos_req(t)?);
        Ok(self
            .corner_local(self.inv_local(i), self.inv_local(j))
            .map(|c| self.elems[self.inv_local(c)]))
    }

    pub fn ord_of(&self, s: SepId) -> Option<u32> {
        self.ord.as_ref().and_then(|o| self.pos(s).map(|i| o[i]))
    }

    pub fn has_degenerate(&self) -> bool {
        (0..self.len()).any(|i| self.inv_local(i) == i)
    }

    pub fn is_regular(&self) -> bool {
        is_regular_system(self)
    }

    /// Involution pairs as (rep, coinv) local index pairs, rep <= coinv,
    /// sorted ascending by order function (when present), then by id.
    pub(crate) fn pairs_canonical(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = (0..self.len())
            .filter(|&i| i <= self.inv_local(i))
            .map(|i| (i, self.inv_local(i)))
            .collect();
        if let Some(o) = &self.ord {
            pairs.sort_by_key(|&(i, _)| (o[i], self.elems[i]));
        }
        pairs
    }
}

impl SepView for CornerSystem {
    fn size(&self) -> usize {
        self.len()
    }
    fn id_at(&self, i: usize) -> SepId {
        self.elems[i]
    }
    fn has(&self, s: SepId) -> bool {
        self.contains(s)
    }
    fn inv_of(&self, s: SepId) -> SepId {
        self.elems[self.inv_local(self.pos(s).expect("id not in system"))]
    }
    fn leq_ids(&self, s: SepId, t: SepId) -> bool {
        let (i, j) = (
            self.pos(s).expect("id not in system"),
            self.pos(t).expect("id not in system"),
        );
        self.leq.get(i, j)
    }
    fn ord_opt(&self, s: SepId) -> Option<u32> {
        self.ord_of(s)
    }
}

/// Build a corner system from a subsystem of a universe.
pub fn make_corner_system(sub: &SubSystem<'_>, strategy: CornerStrategy) -> CornerSystem {
    let u = sub.universe();
    let elems = sub.members().to_vec();
    let m = elems.len();
    let mut inv = vec![0u32; m];
    let mut leq = BitMat::new(m);
    for (i, &s) in elems.iter().enumerate() {
        inv[i] = elems
            .binary_search(&u.inv_id(s))
            .expect("subsystem closed under inversion") as u32;
        for (j, &t) in elems.iter().enumerate() {
            if u.leq(s, t) {
                leq.set(i, j, true);
            }
        }
    }
    let mut corner = vec![NO_CORNER; m * m];
    for i in 0..m {
        for j in i..m {
            let c = match strategy {
                CornerStrategy::Induced => {
                    let jn = u.join(elems[i], elems[j]);
                    elems.binary_search(&jn).ok()
                }
                CornerStrategy::PosetSup => poset_sup(&leq, m, i, j),
                CornerStrategy::Comparable => {
                    if leq.get(i, j) {
                        Some(j)
                    } else if leq.get(j, i) {
                        Some(i)
                    } else {
                        None
                    }
                }
            };
            let cv = c.map(|c| c as u32).unwrap_or(NO_CORNER);
            corner[i * m + j] = cv;
            corner[j * m + i] = cv;
        }
    }
    let ord = if u.has_ord() {
        Some(elems.iter().map(|&s| u.ord(s).unwrap()).collect())
    } else {
        None
    };
    CornerSystem::from_parts(u.len(), elems, inv, leq, corner, ord)
}

/// Least upper bound of {i, j} inside a local order, if it exists.
fn poset_sup(leq: &BitMat, m: usize, i: usize, j: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for u in 0..m {
        if leq.get(i, u) && leq.get(j, u) {
            best = match best {
                None => Some(u),
                Some(b) => {
                    if leq.get(u, b) {
                        Some(u)
                    } else {
                        Some(b)
                    }
                }
            };
        }
    }
    // best is a minimal candidate; confirm it is below every upper bound
    let b = best?;
    for u in 0..m {
        if leq.get(i, u) && leq.get(j, u) && !leq.get(b, u) {
            return None;
        }
    }
    Some(b)
}
