//! The level-by-level construction of one nested tree set that efficiently
//! distinguishes every pair of robust regular profiles of a universe.
//!
//! Level `k` turns the tree built so far into, per induced k-profile `P`, a
//! scope of separations compatible with the maximal tree elements inside
//! `P`, restricts the refining (k+1)-profiles to the order-k slice of that
//! scope, and distinguishes them there with the quotient construction. The
//! union over all levels is the final tree; each element carries a
//! certificate naming a pair of input profiles it splits at their minimum
//! distinguishing order.

use std::collections::{BTreeMap, BTreeSet};

use crate::bits::Bits;
use crate::profiles::{self, robust_corner, Profile, ProfileSet};
use crate::regularization;
use crate::system::{points_towards, CornerSystem, SepId, SepView, Universe};
use crate::{Error, Result};

/// Snapshot after finishing level `k`: the tree distinguishes the induced
/// profiles, all its members have order below `k`.
#[derive(Clone, Debug)]
pub struct LevelState {
    pub k: u32,
    pub tree: BTreeSet<SepId>,
    pub profiles: ProfileSet,
}

/// Working data for one induced profile at one level.
#[derive(Clone, Debug)]
pub struct FocusContext {
    pub k: u32,
    /// The k-profile being refined.
    pub profile: Profile,
    /// The (k+1)-profiles inducing it.
    pub q_p: ProfileSet,
    /// Maximal elements of the profile's share of the tree.
    pub n_p: Vec<SepId>,
    /// Separations every element of `n_p` points towards; closed under
    /// inversion, join and meet.
    pub u_p: Vec<SepId>,
}

/// One tree element together with a pair of input profiles it splits at
/// exactly their minimum distinguishing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub sep: SepId,
    pub p: usize,
    pub q: usize,
}

/// The finished construction: the tree, one certificate per involution pair
/// of the tree, every intermediate level, and the input profiles.
#[derive(Clone, Debug)]
pub struct TreeOfTangles {
    pub tree: BTreeSet<SepId>,
    pub certificates: Vec<Certificate>,
    pub levels: Vec<LevelState>,
    pub profiles: ProfileSet,
}

/// Truncates every profile to order `k` (profiles of lower order stay as
/// they are) and deduplicates.
pub fn induced_set(u: &Universe, pset: &ProfileSet, k: u32) -> Result<ProfileSet> {
    let mut out = Vec::with_capacity(pset.len());
    for (pi, p) in pset.iter().enumerate() {
        let l = p.order().ok_or_else(|| {
            Error::Precondition(format!("profile #{pi} carries no order tag"))
        })?;
        out.push(if l <= k { p.clone() } else { profiles::induced(u, p, k)? });
    }
    Ok(ProfileSet::new(out))
}

fn image_over(u: &Universe, qs: &ProfileSet, x: SepId) -> Option<Bits> {
    let xi = u.inv_id(x);
    let mut img = Bits::new(qs.len());
    for (qi, q) in qs.iter().enumerate() {
        if q.contains(xi) {
            img.set(qi, true);
        } else if !q.contains(x) {
            return None;
        }
    }
    Some(img)
}

/// Computes the focus context of `p` at the state's level: which profiles of
/// the next level refine it, the maximal tree elements inside it, and the
/// scope those elements admit. The scope is verified to be closed under
/// inversion, join and meet.
pub fn focus(
    u: &Universe,
    p: &Profile,
    state: &LevelState,
    pset: &ProfileSet,
) -> Result<FocusContext> {
    let k = state.k;
    let next = induced_set(u, pset, k + 1)?;
    let sub = u.subsystem(k + 1)?;
    let pairs = sub.members().iter().filter(|&&s| s <= u.inv_id(s)).count();
    let mut qs = Vec::new();
    for q in &next {
        if q.len() != pairs {
            continue; // does not orient the whole next slice
        }
        let q = q.clone().with_order(Some(k + 1));
        if profiles::induced(u, &q, k)?.ids() == p.ids() {
            qs.push(q);
        }
    }
    let q_p = ProfileSet::new(qs);

    let members: Vec<SepId> = state.tree.iter().copied().filter(|&t| p.contains(t)).collect();
    let n_p: Vec<SepId> = members
        .iter()
        .copied()
        .filter(|&m| members.iter().all(|&x| x == m || !u.leq(m, x)))
        .collect();

    let mut u_p: Vec<SepId> = Vec::new();
    for i in 0..u.len() as u32 {
        let x = SepId(i);
        if n_p.iter().all(|&n| points_towards(u, n, x)) {
            u_p.push(x);
        }
    }
    let mask = Bits::from_indices(u.len(), u_p.iter().map(|s| s.idx()));
    for &a in &u_p {
        if !mask.get(u.inv_id(a).idx()) {
            return Err(Error::hypothesis(
                "focus scope",
                format!("{a} is in the scope but its inverse is not"),
            ));
        }
        for &b in &u_p {
            if !mask.get(u.join(a, b).idx()) || !mask.get(u.meet(a, b).idx()) {
                return Err(Error::hypothesis(
                    "focus scope",
                    format!("scope is not closed under join/meet of {a} and {b}"),
                ));
            }
        }
    }
    Ok(FocusContext { k, profile: p.clone(), q_p, n_p, u_p })
}

/// Given `r` whose image splits the refining profiles, produces an element
/// of the scope with the same image. Mirrors the refinement argument: take
/// the fiber of `r`, its smallest element `s`, the maximal tree elements
/// below `inv(s)`, the fiber members pointing away from all of those, and a
/// maximal one of them (smallest id on ties). Every maximal tree element
/// must point towards the result; a failure is pinned down with the corner
/// step and reported.
pub fn find_focus_distinguisher(
    u: &Universe,
    ctx: &FocusContext,
    r: SepId,
) -> Result<SepId> {
    if ctx.q_p.len() < 2 {
        return Err(Error::Precondition(
            "need at least two refining profiles to distinguish".into(),
        ));
    }
    let fr = image_over(u, &ctx.q_p, r).ok_or_else(|| {
        Error::Precondition(format!("some refining profile does not orient {r}"))
    })?;
    let empty = Bits::new(ctx.q_p.len());
    if fr == empty || fr == empty.complement() {
        return Err(Error::Precondition(format!(
            "{r} does not split the refining profiles"
        )));
    }
    if ctx.n_p.is_empty() {
        return Ok(r); // the scope is the whole universe
    }
    let fiber: Vec<SepId> = (0..u.len() as u32)
        .map(SepId)
        .filter(|&x| image_over(u, &ctx.q_p, x).as_ref() == Some(&fr))
        .collect();
    let mut s = r;
    for &x in &fiber {
        s = u.meet(s, x);
    }
    if image_over(u, &ctx.q_p, s).as_ref() != Some(&fr) {
        return Err(Error::hypothesis(
            "focus distinguisher",
            format!("the infimum {s} of the fiber of {r} left the fiber"),
        ));
    }
    let si = u.inv_id(s);
    let anchors: Vec<SepId> = ctx.n_p.iter().copied().filter(|&n| u.leq(n, si)).collect();
    let cand: Vec<SepId> = fiber
        .iter()
        .copied()
        .filter(|&x| anchors.iter().all(|&n| u.leq(n, u.inv_id(x))))
        .collect();
    let mut t: Option<SepId> = None;
    for &x in &cand {
        if cand.iter().all(|&y| y == x || !u.leq(x, y)) {
            t = Some(t.map_or(x, |b| b.min(x)));
        }
    }
    let t = t.ok_or_else(|| {
        Error::hypothesis(
            "focus distinguisher",
            "restricted fiber has no maximal element".to_string(),
        )
    })?;
    for &n in &ctx.n_p {
        if !points_towards(u, n, t) {
            let qa = (0..ctx.q_p.len()).find(|&i| fr.get(i)).unwrap();
            let qb = (0..ctx.q_p.len()).find(|&i| !fr.get(i)).unwrap();
            let detail = match robust_corner(u, n, t, ctx.q_p.get(qa), ctx.q_p.get(qb)) {
                Ok(c) => format!(
                    "{n} does not point towards {t} although corner {c} still \
                     distinguishes; fiber maximality failed"
                ),
                Err(e) => format!(
                    "{n} does not point towards {t} and the corner step fails: {e}"
                ),
            };
            return Err(Error::hypothesis("focus distinguisher", detail));
        }
    }
    Ok(t)
}

/// Index of the first input profile that induces `q` at order `k1`.
fn first_parent(u: &Universe, pset: &ProfileSet, q: &Profile, k1: u32) -> Result<usize> {
    'outer: for (ri, r) in pset.iter().enumerate() {
        for &x in q.ids() {
            if !r.contains(x) {
                continue 'outer;
            }
        }
        for &x in r.ids() {
            if u.ord(x)? < k1 && !q.contains(x) {
                continue 'outer;
            }
        }
        return Ok(ri);
    }
    Err(Error::hypothesis(
        "level construction",
        format!("a refining profile with {} members has no parent in the input", q.len()),
    ))
}

/// Runs one level of the induction: per induced profile with at least two
/// refinements, distinguish the refinements inside the order-k slice of its
/// scope and add the resulting tree elements. Returns the next state and
/// the certificates of the new elements.
pub fn build_level(
    u: &Universe,
    state: &LevelState,
    pset: &ProfileSet,
) -> Result<(LevelState, Vec<Certificate>)> {
    let k = state.k;
    let next = induced_set(u, pset, k + 1)?;
    let mut tree = state.tree.clone();
    let mut certs = Vec::new();
    for p in &state.profiles {
        let ctx = focus(u, p, state, pset)?;
        if ctx.q_p.len() < 2 {
            continue;
        }
        let elems: Vec<SepId> = ctx
            .u_p
            .iter()
            .copied()
            .filter(|&x| u.ord_opt(x) == Some(k))
            .collect();
        let level = CornerSystem::induced(u, elems.clone());
        let mut rs = Vec::with_capacity(ctx.q_p.len());
        for q in &ctx.q_p {
            let ids: Vec<SepId> = elems.iter().copied().filter(|&x| q.contains(x)).collect();
            rs.push(Profile::from_ids(u.len(), ids, None));
        }
        let restrictions = ProfileSet::new(rs);
        if restrictions.len() != ctx.q_p.len() {
            return Err(Error::hypothesis(
                "level construction",
                format!(
                    "level {k}: {} refining profiles share a restriction to the scope \
                     and cannot be distinguished there",
                    ctx.q_p.len()
                ),
            ));
        }
        let t_p =
            regularization::tree_set_nonregular(&level, &restrictions).map_err(|e| match e {
                Error::Hypothesis { context, detail } => Error::hypothesis(
                    "level construction",
                    format!("level {k}: {context}: {detail}"),
                ),
                other => other,
            })?;
        for &t in &t_p {
            if u.inv_id(t) < t {
                continue; // one certificate per involution pair
            }
            let img = image_over(u, &ctx.q_p, t).ok_or_else(|| {
                Error::hypothesis(
                    "level construction",
                    format!("tree element {t} is not oriented by every refinement"),
                )
            })?;
            let qa = (0..ctx.q_p.len()).find(|&i| img.get(i));
            let qb = (0..ctx.q_p.len()).find(|&i| !img.get(i));
            let (Some(qa), Some(qb)) = (qa, qb) else {
                return Err(Error::hypothesis(
                    "level construction",
                    format!("tree element {t} splits no pair of refinements"),
                ));
            };
            let pa = first_parent(u, pset, ctx.q_p.get(qa), k + 1)?;
            let pb = first_parent(u, pset, ctx.q_p.get(qb), k + 1)?;
            certs.push(Certificate { sep: t, p: pa.min(pb), q: pa.max(pb) });
        }
        for &t in &t_p {
            tree.insert(t);
            tree.insert(u.inv_id(t));
        }
    }
    Ok((LevelState { k: k + 1, tree, profiles: next }, certs))
}

/// Builds the whole tree for a set of robust regular profiles with order
/// tags. Validates the universe and every profile up front, then runs
/// `build_level` from order zero to the highest tag. One certificate is
/// kept per involution pair (the first found).
pub fn tree_of_tangles(u: &Universe, pset: &ProfileSet) -> Result<TreeOfTangles> {
    if !u.has_ord() {
        return Err(Error::MissingOrderFunction);
    }
    let v = u.validate();
    if !v.is_ok() {
        return Err(Error::Precondition(format!("universe fails validation: {v}")));
    }
    for (pi, p) in pset.iter().enumerate() {
        let k = p.order().ok_or_else(|| {
            Error::Precondition(format!("profile #{pi} carries no order tag"))
        })?;
        let sub = u.subsystem(k)?;
        let sys = CornerSystem::induced(u, sub.members().to_vec());
        if !profiles::is_profile(&sys, p.ids()) {
            return Err(Error::Precondition(format!(
                "input #{pi} is not an order-{k} profile"
            )));
        }
        if !profiles::is_regular_profile(u, p) {
            return Err(Error::Precondition(format!(
                "profile #{pi} is not regular (it contains a cosmall separation)"
            )));
        }
        if !profiles::is_robust(u, p)? {
            return Err(Error::Precondition(format!("profile #{pi} is not robust")));
        }
    }
    let max_k = pset.iter().filter_map(|p| p.order()).max().unwrap_or(0);
    let mut state = LevelState {
        k: 0,
        tree: BTreeSet::new(),
        profiles: induced_set(u, pset, 0)?,
    };
    let mut levels = Vec::new();
    let mut all_certs = Vec::new();
    while state.k < max_k {
        let (next, certs) = build_level(u, &state, pset)?;
        all_certs.extend(certs);
        levels.push(std::mem::replace(&mut state, next));
    }
    let tree = state.tree.clone();
    levels.push(state);
    let mut by_rep: BTreeMap<SepId, Certificate> = BTreeMap::new();
    for c in all_certs {
        by_rep.entry(c.sep.min(u.inv_id(c.sep))).or_insert(c);
    }
    Ok(TreeOfTangles {
        tree,
        certificates: by_rep.into_values().collect(),
        levels,
        profiles: pset.clone(),
    })
}
