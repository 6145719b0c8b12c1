//! Profiles of separation systems.
//!
//! A profile is an orientation of a system that is consistent and never
//! contains the inverse of a corner of two of its members. Profiles are the
//! objects the quotient and tree construction operate on; this module owns
//! their representation, the enumerator, and the robustness predicates.

use crate::bits::Bits;
use crate::system::{is_consistent, CornerSystem, SepId, SepView, Universe};
use crate::{Error, Result};

/// One orientation of (a subset of) a system, stored as the set of chosen
/// sides. Ids refer to the ambient universe, so profiles of different
/// subsystems of the same universe can be compared directly.
#[derive(Clone, PartialEq, Eq)]
pub struct Profile {
    chosen: Vec<SepId>,
    mask: Bits,
    order: Option<u32>,
}

impl Profile {
    /// Builds a profile record from raw ids. Sorts and dedups; does not check
    /// the profile axioms (use [`is_profile`] for that).
    pub fn from_ids(id_space: usize, mut ids: Vec<SepId>, order: Option<u32>) -> Profile {
        ids.sort_unstable();
        ids.dedup();
        let mut mask = Bits::new(id_space);
        for &s in &ids {
            mask.set(s.idx(), true);
        }
        Profile { chosen: ids, mask, order }
    }

    pub fn contains(&self, s: SepId) -> bool {
        self.mask.get(s.idx())
    }

    /// Chosen sides, ascending by id.
    pub fn ids(&self) -> &[SepId] {
        &self.chosen
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    /// The order bound this profile orients, when it was built as a profile
    /// of all separations of order less than the bound.
    pub fn order(&self) -> Option<u32> {
        self.order
    }

    pub fn with_order(mut self, order: Option<u32>) -> Profile {
        self.order = order;
        self
    }

    /// Intersection with an id set, tagged with a new order bound.
    pub fn restrict_to(&self, keep: &Bits, order: Option<u32>) -> Profile {
        let ids = self
            .chosen
            .iter()
            .copied()
            .filter(|s| keep.get(s.idx()))
            .collect();
        Profile::from_ids(self.mask.len(), ids, order)
    }

    pub fn mask(&self) -> &Bits {
        &self.mask
    }
}

impl std::fmt::Debug for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Profile{:?}", self.chosen)?;
        if let Some(k) = self.order {
            write!(f, "@{k}")?;
        }
        Ok(())
    }
}

impl PartialOrd for Profile {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Profile {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.chosen
            .cmp(&other.chosen)
            .then(self.order.cmp(&other.order))
    }
}

/// A deduplicated, canonically ordered collection of profiles. Two profiles
/// with the same chosen set are merged (keeping the larger order tag, since
/// equal sets mean the extra orders added nothing new).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileSet {
    profiles: Vec<Profile>,
}

impl ProfileSet {
    pub fn new(mut profiles: Vec<Profile>) -> ProfileSet {
        profiles.sort();
        profiles.dedup_by(|b, a| {
            if a.chosen == b.chosen {
                a.order = a.order.max(b.order);
                true
            } else {
                false
            }
        });
        ProfileSet { profiles }
    }

    pub fn empty() -> ProfileSet {
        ProfileSet { profiles: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn get(&self, i: usize) -> &Profile {
        &self.profiles[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Profile> {
        self.profiles.iter()
    }

    pub fn position_of(&self, chosen: &[SepId]) -> Option<usize> {
        self.profiles
            .binary_search_by(|p| p.ids().cmp(chosen))
            .ok()
    }

    pub fn into_vec(self) -> Vec<Profile> {
        self.profiles
    }
}

impl<'a> IntoIterator for &'a ProfileSet {
    type Item = &'a Profile;
    type IntoIter = std::slice::Iter<'a, Profile>;
    fn into_iter(self) -> Self::IntoIter {
        self.profiles.iter()
    }
}

/// Checks the two profile axioms for a full orientation of `sys`:
/// consistency, and for any two members the inverse of their corner (when
/// defined) is not a member. `chosen` must orient every involution pair.
pub fn is_profile(sys: &CornerSystem, chosen: &[SepId]) -> bool {
    let n = sys.len();
    let mut local = Vec::with_capacity(chosen.len());
    for &s in chosen {
        match sys.pos(s) {
            Some(i) => local.push(i),
            None => return false,
        }
    }
    let mut picked = vec![false; n];
    for &i in &local {
        picked[i] = true;
    }
    // exactly one side of every pair
    for i in 0..n {
        let ii = sys.inv_local(i);
        if i == ii {
            if !picked[i] {
                return false;
            }
        } else if picked[i] == picked[ii] {
            return false;
        }
    }
    if !is_consistent(sys, chosen) {
        return false;
    }
    for &i in &local {
        for &j in &local {
            if let Some(c) = sys.corner_local(i, j) {
                // the inverse of a corner of two members must stay outside
                if picked[sys.inv_local(c)] {
                    return false;
                }
            }
        }
    }
    true
}

struct Enumerator<'a> {
    sys: &'a CornerSystem,
    pairs: Vec<(usize, usize)>,
    chosen: Vec<usize>,
    picked: Vec<bool>,
    banned: Vec<u32>,
    out: Vec<Profile>,
}

impl<'a> Enumerator<'a> {
    fn run(mut self) -> Vec<Profile> {
        self.descend(0);
        self.out
    }

    fn descend(&mut self, depth: usize) {
        if depth == self.pairs.len() {
            let ids: Vec<SepId> = self
                .chosen
                .iter()
                .map(|&i| self.sys.elems()[i])
                .collect();
            self.out
                .push(Profile::from_ids(self.sys.id_space(), ids, None));
            return;
        }
        let (rep, coinv) = self.pairs[depth];
        for e in [rep, coinv] {
            if self.admissible(e) {
                let undo = self.apply(e);
                self.descend(depth + 1);
                self.unapply(e, undo);
            }
        }
    }

    /// Would adding local element `e` keep the partial orientation extendable
    /// to a profile? Rejects consistency violations against already chosen
    /// elements and any element previously banned as a corner inverse.
    fn admissible(&self, e: usize) -> bool {
        if self.banned[e] > 0 {
            return false;
        }
        let ei = self.sys.inv_local(e);
        for &p in &self.chosen {
            let pi = self.sys.inv_local(p);
            // consistency: no member's inverse lies below another member
            if self.sys.leq_local(ei, p) || self.sys.leq_local(pi, e) {
                return false;
            }
            if let Some(c) = self.sys.corner_local(e, p) {
                let ci = self.sys.inv_local(c);
                if ci == e || self.picked[ci] {
                    return false;
                }
            }
        }
        if let Some(c) = self.sys.corner_local(e, e) {
            let ci = self.sys.inv_local(c);
            if ci == e {
                return false;
            }
        }
        true
    }

    fn apply(&mut self, e: usize) -> Vec<usize> {
        let mut banned_now = Vec::new();
        for &p in &self.chosen {
            if let Some(c) = self.sys.corner_local(e, p) {
                let ci = self.sys.inv_local(c);
                self.banned[ci] += 1;
                banned_now.push(ci);
            }
        }
        if let Some(c) = self.sys.corner_local(e, e) {
            let ci = self.sys.inv_local(c);
            self.banned[ci] += 1;
            banned_now.push(ci);
        }
        self.chosen.push(e);
        self.picked[e] = true;
        banned_now
    }

    fn unapply(&mut self, e: usize, banned_now: Vec<usize>) {
        self.chosen.pop();
        self.picked[e] = false;
        for ci in banned_now {
            self.banned[ci] -= 1;
        }
    }
}

/// Enumerates every profile of a corner system by backtracking over its
/// involution pairs in (order, id) order, pruning branches as soon as a
/// consistency or corner violation is forced. A system with a degenerate
/// element has no profiles; the empty system has exactly the empty profile.
pub fn enumerate_profiles(sys: &CornerSystem) -> ProfileSet {
    if sys.has_degenerate() {
        return ProfileSet::empty();
    }
    let pairs = sys.pairs_canonical();
    let e = Enumerator {
        sys,
        pairs,
        chosen: Vec::new(),
        picked: vec![false; sys.len()],
        banned: vec![0; sys.len()],
        out: Vec::new(),
    };
    ProfileSet::new(e.run())
}

/// All profiles of the subsystem of separations of order `< k`, tagged with
/// order `k`, using the induced corner operation.
pub fn profiles_of_order(u: &Universe, k: u32) -> Result<ProfileSet> {
    let sub = u.subsystem(k)?;
    let sys = CornerSystem::induced(u, sub.members().to_vec());
    let set = enumerate_profiles(&sys);
    Ok(ProfileSet::new(
        set.into_vec()
            .into_iter()
            .map(|p| p.with_order(Some(k)))
            .collect(),
    ))
}

/// All regular robust profiles of orders `1..=maxk`, deduplicated. This is
/// the profile set the tree-of-tangles pipeline distinguishes.
pub fn regular_robust_profiles(u: &Universe, maxk: u32) -> Result<ProfileSet> {
    let mut all = Vec::new();
    for k in 1..=maxk {
        for p in profiles_of_order(u, k)?.iter() {
            if is_regular_profile(u, p) && is_robust(u, p)? {
                all.push(p.clone());
            }
        }
    }
    Ok(ProfileSet::new(all))
}

/// The profile `p` induces on orders below `l`: its members of order `< l`.
/// Requires `l` not to exceed the order `p` already orients.
pub fn induced(u: &Universe, p: &Profile, l: u32) -> Result<Profile> {
    if let Some(k) = p.order() {
        if l > k {
            return Err(Error::Precondition(format!(
                "cannot induce an order-{l} profile from an order-{k} profile"
            )));
        }
    }
    let mut keep = Bits::new(u.len());
    for &s in p.ids() {
        if u.ord(s)? < l {
            keep.set(s.idx(), true);
        }
    }
    Ok(p.restrict_to(&keep, Some(l)))
}

/// A profile is regular when it contains no cosmall separation, i.e. no
/// member `s` with `s* <= s`.
pub fn is_regular_profile<V: SepView>(view: &V, p: &Profile) -> bool {
    p.ids()
        .iter()
        .all(|&s| !view.leq_ids(view.inv_of(s), s))
}

/// Every finite profile is closed: any nonempty chain in it has a maximum,
/// which is itself a member. The predicate is kept for API symmetry with the
/// infinite theory where closedness is a real restriction.
pub fn is_closed(_u: &Universe, _p: &Profile) -> bool {
    true
}

/// How a separation relates two orientations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distinguish {
    /// Neither side pattern splits the pair.
    No,
    /// Splits the pair, but a lower-order separation also does.
    Inefficient,
    /// Splits the pair at the minimum order over all splitters.
    Efficient,
}

/// Does `s` (or its inverse) lie in one profile while the other contains the
/// opposite side?
pub fn distinguishes(u: &Universe, s: SepId, p: &Profile, q: &Profile) -> bool {
    let si = u.inv_id(s);
    (p.contains(s) && q.contains(si)) || (p.contains(si) && q.contains(s))
}

/// Classifies how `s` relates `p` and `q`, comparing against every other
/// separation both profiles orient oppositely.
pub fn distinguish_class(
    u: &Universe,
    s: SepId,
    p: &Profile,
    q: &Profile,
) -> Result<Distinguish> {
    if !distinguishes(u, s, p, q) {
        return Ok(Distinguish::No);
    }
    let mine = u.ord(s)?;
    for t in u.ids() {
        if distinguishes(u, t, p, q) && u.ord(t)? < mine {
            return Ok(Distinguish::Inefficient);
        }
    }
    Ok(Distinguish::Efficient)
}

/// A profile `p` is robust when for every member `r` and every separation
/// `s`, whenever both meet corners `r* ∧ s` and `r* ∧ s*` undercut `r`'s
/// order, `p` does not contain both of them.
pub fn is_robust(u: &Universe, p: &Profile) -> Result<bool> {
    for &r in p.ids() {
        let ri = u.inv_id(r);
        let or = u.ord(r)?;
        for s in u.ids() {
            let si = u.inv_id(s);
            let c1 = u.meet(ri, s);
            let c2 = u.meet(ri, si);
            if u.ord(c1)? < or && u.ord(c2)? < or && p.contains(c1) && p.contains(c2) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Searches the four meet corners of `r` and `s` for one that efficiently
/// distinguishes `q1` and `q2`, in the fixed order
/// `r∧s, r∧s*, r*∧s, r*∧s*`. Preconditions checked: `ord(r) < ord(s)` and
/// `s` efficiently distinguishes the pair. With robust regular profiles a
/// qualifying corner always exists; if none does the hypothesis failure is
/// reported rather than silently absorbed.
pub fn robust_corner(
    u: &Universe,
    r: SepId,
    s: SepId,
    q1: &Profile,
    q2: &Profile,
) -> Result<SepId> {
    if u.ord(r)? >= u.ord(s)? {
        return Err(Error::Precondition(format!(
            "corner step needs ord({r}) < ord({s}), got {} >= {}",
            u.ord(r)?,
            u.ord(s)?
        )));
    }
    if distinguish_class(u, s, q1, q2)? != Distinguish::Efficient {
        return Err(Error::Precondition(format!(
            "corner step needs {s} to distinguish the two profiles efficiently"
        )));
    }
    let ri = u.inv_id(r);
    let si = u.inv_id(s);
    for c in [u.meet(r, s), u.meet(r, si), u.meet(ri, s), u.meet(ri, si)] {
        if distinguish_class(u, c, q1, q2)? == Distinguish::Efficient {
            return Ok(c);
        }
    }
    Err(Error::hypothesis(
        "robust corner step",
        format!(
            "no meet corner of {r} and {s} distinguishes the given profiles efficiently; \
             the profiles are not robust or not profiles at all"
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::powerset_universe;
    use crate::Limits;

    fn pow(n: u32) -> Universe {
        powerset_universe(n, &Limits::default()).unwrap()
    }

    #[test]
    fn order_one_profiles_of_powerset4() {
        // S_1 = {empty, full}; the two orientations are {empty} and {full},
        // both consistent, both trivially corner-free.
        let u = pow(4);
        let ps = profiles_of_order(&u, 1).unwrap();
        assert_eq!(ps.len(), 2);
        let bottom = SepId(0);
        let top = SepId(15);
        let sets: Vec<&[SepId]> = ps.iter().map(|p| p.ids()).collect();
        assert_eq!(sets, vec![&[bottom][..], &[top][..]]);
        // {empty} is regular (empty set is small, its inverse full is cosmall
        // and excluded); {full} contains the cosmall side.
        assert!(is_regular_profile(&u, ps.get(0)));
        assert!(!is_regular_profile(&u, ps.get(1)));
    }

    #[test]
    fn degenerate_element_kills_profiles() {
        // powerset of even size has a degenerate middle layer only at n/2
        // when a set equals its complement, which never happens; build an
        // explicit degenerate instead.
        use crate::instances::explicit_universe;
        let u = explicit_universe(
            "deg".into(),
            &["d".into()],
            &[0],
            &[(0, 0)],
            &[vec![0]],
            Some(&[0]),
        )
        .unwrap();
        let sys = CornerSystem::induced(&u, vec![SepId(0)]);
        assert!(sys.has_degenerate());
        assert!(enumerate_profiles(&sys).is_empty());
    }

    #[test]
    fn empty_system_has_exactly_the_empty_profile() {
        let u = pow(2);
        let sys = CornerSystem::induced(&u, vec![]);
        let ps = enumerate_profiles(&sys);
        assert_eq!(ps.len(), 1);
        assert!(ps.get(0).is_empty());
    }

    #[test]
    fn induced_profile_restricts_by_order() {
        let u = pow(3);
        let ps = profiles_of_order(&u, 2).unwrap();
        assert!(!ps.is_empty());
        for p in &ps {
            let q = induced(&u, p, 1).unwrap();
            assert_eq!(q.order(), Some(1));
            for &s in q.ids() {
                assert!(u.ord(s).unwrap() < 1);
                assert!(p.contains(s));
            }
        }
    }

    #[test]
    fn is_profile_matches_enumerator_on_small_system() {
        let u = pow(3);
        let sub = u.subsystem(2).unwrap();
        let sys = CornerSystem::induced(&u, sub.members().to_vec());
        let ps = enumerate_profiles(&sys);
        for p in &ps {
            assert!(is_profile(&sys, p.ids()), "{p:?}");
        }
    }

    #[test]
    fn distinguish_classes() {
        let u = pow(2);
        // Profiles of order 2 in powerset(2): orientations of
        // S_2 = all proper subsets' separations of order < 2 = everything
        // except nothing (max ord = 1), i.e. the full universe minus none.
        let ps = profiles_of_order(&u, 2).unwrap();
        assert!(ps.len() >= 2);
        let p = ps.get(0);
        let q = ps.get(1);
        let mut any_eff = false;
        for s in u.ids() {
            if distinguishes(&u, s, p, q) {
                any_eff |= distinguish_class(&u, s, p, q).unwrap() == Distinguish::Efficient;
            }
        }
        assert!(any_eff, "distinct profiles admit an efficient distinguisher");
    }
}
