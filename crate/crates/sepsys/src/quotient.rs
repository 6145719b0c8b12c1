//! Quotient of a separation system by a profile set.
//!
//! Every separation is sent to the set of profiles containing its inverse,
//! viewed as an element of the powerset separation system over the profile
//! set (order = inclusion, involution = complement). Distinguishing profiles
//! reduces to finding a tree set among the "good" images (those nested with
//! the whole image), then lifting it back through canonical fiber
//! representatives.

use std::collections::BTreeMap;

use crate::bits::Bits;
use crate::profiles::ProfileSet;
use crate::system::{CornerSystem, SepId};
use crate::{Error, Result};

/// An element of the powerset system over a profile set: bit `i` set means
/// the i-th profile is a member. Involution is complement, order inclusion.
pub type ImageSep = Bits;

/// All separations sharing one image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub image: ImageSep,
    pub members: Vec<SepId>,
}

fn image_local(sys: &CornerSystem, i: usize, pset: &ProfileSet) -> Result<Bits> {
    let s = sys.elems()[i];
    let si = sys.elems()[sys.inv_local(i)];
    let mut out = Bits::new(pset.len());
    for (pi, p) in pset.iter().enumerate() {
        if p.contains(si) {
            out.set(pi, true);
        } else if !p.contains(s) {
            return Err(Error::Precondition(format!(
                "profile #{pi} orients neither {s} nor {si}"
            )));
        }
    }
    Ok(out)
}

/// The image of `s`: profiles containing `inv(s)`. Errors when some profile
/// does not orient `s`.
pub fn f_image(sys: &CornerSystem, s: SepId, pset: &ProfileSet) -> Result<ImageSep> {
    let i = sys.pos(s).ok_or(Error::NotInSystem(s))?;
    image_local(sys, i, pset)
}

fn all_images(sys: &CornerSystem, pset: &ProfileSet) -> Result<Vec<Bits>> {
    (0..sys.len()).map(|i| image_local(sys, i, pset)).collect()
}

/// Groups the system by image, in canonical (bitset) order.
pub fn fibers(sys: &CornerSystem, pset: &ProfileSet) -> Result<Vec<Fiber>> {
    let images = all_images(sys, pset)?;
    let mut map: BTreeMap<Bits, Vec<SepId>> = BTreeMap::new();
    for (i, img) in images.into_iter().enumerate() {
        map.entry(img).or_default().push(sys.elems()[i]);
    }
    Ok(map
        .into_iter()
        .map(|(image, members)| Fiber { image, members })
        .collect())
}

/// Whenever one image contains another, at least one of the corner and the
/// dual corner of the underlying separations must exist in the system.
pub fn is_weakly_submodular(sys: &CornerSystem, pset: &ProfileSet) -> Result<bool> {
    let images = all_images(sys, pset)?;
    for i in 0..sys.len() {
        for j in 0..sys.len() {
            if images[i].is_subset(&images[j]) {
                let join = sys.corner_local(i, j).is_some();
                let meet = sys
                    .corner_local(sys.inv_local(i), sys.inv_local(j))
                    .is_some();
                if !join && !meet {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whenever some profile contains `{s,t}` and some other `{inv s, inv t}`,
/// both the corner of `s,t` and the corner of their inverses must exist.
pub fn is_orderly(sys: &CornerSystem, pset: &ProfileSet) -> bool {
    for i in 0..sys.len() {
        for j in i..sys.len() {
            let (s, t) = (sys.elems()[i], sys.elems()[j]);
            let (si, ti) = (sys.elems()[sys.inv_local(i)], sys.elems()[sys.inv_local(j)]);
            let fwd = pset.iter().any(|p| p.contains(s) && p.contains(t));
            if !fwd {
                continue;
            }
            let bwd = pset.iter().any(|p| p.contains(si) && p.contains(ti));
            if !bwd {
                continue;
            }
            if sys.corner_local(i, j).is_none()
                || sys
                    .corner_local(sys.inv_local(i), sys.inv_local(j))
                    .is_none()
            {
                return false;
            }
        }
    }
    true
}

fn image_nested(a: &Bits, b: &Bits) -> bool {
    let (ac, bc) = (a.complement(), b.complement());
    a.is_subset(b) || a.is_subset(&bc) || ac.is_subset(b) || ac.is_subset(&bc)
}

/// The good image separations: images nested with every image, minus the
/// empty set and the full profile set. Returned sorted; the set is closed
/// under complement.
pub fn good_image_tree_set(sys: &CornerSystem, pset: &ProfileSet) -> Result<Vec<ImageSep>> {
    let mut images = all_images(sys, pset)?;
    images.sort();
    images.dedup();
    let empty = Bits::new(pset.len());
    let full = empty.complement();
    Ok(images
        .iter()
        .filter(|a| images.iter().all(|b| image_nested(a, b)))
        .filter(|a| **a != empty && **a != full)
        .cloned()
        .collect())
}

/// A separation contained in the first profile but not the second whose image
/// is good. Realizes the chain argument finitely: the candidate set's maximal
/// elements are the suprema of its maximal chains, and one of them must be
/// good or the hypotheses were violated.
pub fn separator_for(
    sys: &CornerSystem,
    pset: &ProfileSet,
    p_idx: usize,
    q_idx: usize,
) -> Result<SepId> {
    let (p, q) = (pset.get(p_idx), pset.get(q_idx));
    if p.ids() == q.ids() {
        return Err(Error::Precondition("the two profiles are equal".into()));
    }
    if !is_orderly(sys, pset) {
        return Err(Error::hypothesis(
            "separator search",
            "system is not orderly with respect to the profiles".to_string(),
        ));
    }
    let cand: Vec<usize> = (0..sys.len())
        .filter(|&i| p.contains(sys.elems()[i]) && !q.contains(sys.elems()[i]))
        .collect();
    if cand.is_empty() {
        return Err(Error::Precondition(format!(
            "profiles #{p_idx} and #{q_idx} agree on the whole system"
        )));
    }
    let good = good_image_tree_set(sys, pset)?;
    // try every maximal candidate in canonical order; the chain argument says
    // each one works, but verify rather than assume
    let mut maximal: Vec<usize> = cand
        .iter()
        .copied()
        .filter(|&i| cand.iter().all(|&j| j == i || !sys.leq_local(i, j)))
        .collect();
    maximal.sort_by_key(|&i| sys.elems()[i]);
    for &i in &maximal {
        let img = image_local(sys, i, pset)?;
        if good.contains(&img) {
            return Ok(sys.elems()[i]);
        }
    }
    Err(Error::hypothesis(
        "separator search",
        format!(
            "no maximal element of P#{p_idx} minus P#{q_idx} has a good image; \
             profiles are not closed or the system is not orderly"
        ),
    ))
}

/// The unique greatest element of a fiber. Takes the single maximal element
/// and verifies it dominates every member; anything else means the
/// closedness/orderliness hypotheses were violated.
pub fn greatest_in_fiber(sys: &CornerSystem, fiber: &Fiber) -> Result<SepId> {
    if fiber.members.is_empty() {
        return Err(Error::Precondition("empty fiber".into()));
    }
    let pos: Vec<usize> = fiber
        .members
        .iter()
        .map(|&s| sys.pos(s).ok_or(Error::NotInSystem(s)))
        .collect::<Result<_>>()?;
    let mut greatest = pos[0];
    for &i in &pos[1..] {
        if sys.leq_local(greatest, i) {
            greatest = i;
        }
    }
    for &i in &pos {
        if !sys.leq_local(i, greatest) {
            return Err(Error::hypothesis(
                "greatest fiber element",
                format!(
                    "fiber of {} has incomparable maximal elements {} and {}",
                    fiber.members[0],
                    sys.elems()[i],
                    sys.elems()[greatest]
                ),
            ));
        }
    }
    Ok(sys.elems()[greatest])
}

/// A lifted tree set: the image tree, the orientation used to resolve
/// representative mismatches, the per-image representatives, and the
/// resulting separations.
#[derive(Clone, Debug)]
pub struct LiftedTreeSet {
    pub image_tree: Vec<ImageSep>,
    pub orientation: Vec<ImageSep>,
    pub lifted: Vec<(ImageSep, SepId)>,
    pub result: Vec<SepId>,
}

/// Lifts an image tree set back into the system. For each image `t` of the
/// inversion closure, the representative is the greatest element of the
/// fiber of `t`, except on the side of the fixed consistent orientation
/// `o = {A : anchor ∉ A}` where the inverse of the opposite representative
/// is used instead. Verifies that images round-trip and that the lift
/// preserves the order, so the image map restricts to an isomorphism.
pub fn lift_tree_set(
    sys: &CornerSystem,
    pset: &ProfileSet,
    t_img: &[ImageSep],
    anchor: usize,
) -> Result<LiftedTreeSet> {
    if anchor >= pset.len() {
        return Err(Error::Precondition(format!(
            "anchor profile index {anchor} out of range"
        )));
    }
    let empty = Bits::new(pset.len());
    let full = empty.complement();
    let mut closure: Vec<Bits> = Vec::new();
    for t in t_img {
        if t.len() != pset.len() {
            return Err(Error::Precondition(
                "image separation over a different profile set".into(),
            ));
        }
        closure.push(t.clone());
        closure.push(t.complement());
    }
    closure.sort();
    closure.dedup();
    for t in &closure {
        if *t == empty || *t == full {
            return Err(Error::Precondition(
                "image tree set contains the empty or full set".into(),
            ));
        }
    }
    for (a, s) in closure.iter().enumerate() {
        for t in &closure[a + 1..] {
            if !image_nested(s, t) {
                return Err(Error::Precondition(format!(
                    "image tree set is not nested: {s:?} crosses {t:?}"
                )));
            }
        }
    }
    let fiber_map: BTreeMap<Bits, Fiber> = fibers(sys, pset)?
        .into_iter()
        .map(|f| (f.image.clone(), f))
        .collect();
    let rep = |img: &Bits| -> Result<SepId> {
        let fib = fiber_map.get(img).ok_or_else(|| {
            Error::hypothesis(
                "tree set lift",
                format!("no separation has image {img:?}; fiber is empty"),
            )
        })?;
        greatest_in_fiber(sys, fib)
    };
    let mut orientation = Vec::new();
    let mut lifted = Vec::new();
    for t in &closure {
        let in_o = !t.get(anchor);
        if in_o {
            orientation.push(t.clone());
        }
        let m = if in_o {
            let m_opp = rep(&t.complement())?;
            let i = sys.pos(m_opp).expect("representative in system");
            sys.elems()[sys.inv_local(i)]
        } else {
            rep(t)?
        };
        let round = f_image(sys, m, pset)?;
        if round != *t {
            return Err(Error::hypothesis(
                "tree set lift",
                format!("representative {m} of {t:?} has image {round:?}"),
            ));
        }
        lifted.push((t.clone(), m));
    }
    for (t, mt) in &lifted {
        for (s, ms) in &lifted {
            if t.is_subset(s) {
                let (i, j) = (
                    sys.pos(*mt).expect("lift member"),
                    sys.pos(*ms).expect("lift member"),
                );
                if !sys.leq_local(i, j) {
                    return Err(Error::hypothesis(
                        "tree set lift",
                        format!(
                            "lift does not preserve the order: {t:?} ⊆ {s:?} but {mt} is not below {ms}"
                        ),
                    ));
                }
            }
        }
    }
    let mut result: Vec<SepId> = lifted.iter().map(|&(_, m)| m).collect();
    result.sort_unstable();
    result.dedup();
    Ok(LiftedTreeSet { image_tree: closure, orientation, lifted, result })
}

/// The quotient construction end to end: a tree set of the system splitting
/// every distinct pair of profiles, with every member useful and each
/// profile's share having a dominating maximal layer. The system must be
/// regular and orderly; non-regular systems go through the regularization
/// pipeline instead.
pub fn abstract_tree_set(sys: &CornerSystem, pset: &ProfileSet) -> Result<Vec<SepId>> {
    if pset.len() <= 1 {
        return Ok(Vec::new());
    }
    for (pi, p) in pset.iter().enumerate() {
        for i in 0..sys.len() {
            let s = sys.elems()[i];
            let si = sys.elems()[sys.inv_local(i)];
            let (a, b) = (p.contains(s), p.contains(si));
            let ok = if s == si { a } else { a != b };
            if !ok {
                return Err(Error::Precondition(format!(
                    "profile #{pi} does not orient the pair of {s}"
                )));
            }
        }
    }
    if !sys.is_regular() {
        return Err(Error::hypothesis(
            "quotient tree set",
            "system has small elements; regularize first (see the non-regular pipeline)"
                .to_string(),
        ));
    }
    if !is_orderly(sys, pset) {
        return Err(Error::hypothesis(
            "quotient tree set",
            "system is not orderly with respect to the given profiles".to_string(),
        ));
    }
    let good = good_image_tree_set(sys, pset)?;
    if good.is_empty() {
        return Err(Error::hypothesis(
            "quotient tree set",
            "distinct profiles exist but no image separation is good".to_string(),
        ));
    }
    Ok(lift_tree_set(sys, pset, &good, 0)?.result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::powerset_universe;
    use crate::profiles::{enumerate_profiles, profiles_of_order, Profile};
    use crate::system::Universe;
    use crate::Limits;

    fn pow(n: u32) -> Universe {
        powerset_universe(n, &Limits::default()).unwrap()
    }

    #[test]
    fn images_follow_the_definition() {
        let u = pow(2);
        let sys = CornerSystem::induced(&u, u.full_subsystem().members().to_vec());
        let ps = enumerate_profiles(&sys);
        // bottom = {}, top = {1,2}: the image of bottom is the set of
        // profiles containing top
        let img = f_image(&sys, SepId(0), &ps).unwrap();
        for (pi, p) in ps.iter().enumerate() {
            assert_eq!(img.get(pi), p.contains(SepId(3)));
        }
        let img_inv = f_image(&sys, SepId(3), &ps).unwrap();
        assert_eq!(img_inv, img.complement());
    }

    #[test]
    fn unoriented_profile_is_an_error() {
        let u = pow(2);
        let sys = CornerSystem::induced(&u, u.full_subsystem().members().to_vec());
        let ps = ProfileSet::new(vec![Profile::from_ids(u.len(), vec![SepId(0)], None)]);
        assert!(f_image(&sys, SepId(1), &ps).is_err());
    }

    #[test]
    fn fibers_partition_the_system() {
        let u = pow(3);
        let sys = CornerSystem::induced(&u, u.full_subsystem().members().to_vec());
        let ps = enumerate_profiles(&sys);
        let fs = fibers(&sys, &ps).unwrap();
        let total: usize = fs.iter().map(|f| f.members.len()).sum();
        assert_eq!(total, sys.len());
        for f in &fs {
            for &m in &f.members {
                assert_eq!(f_image(&sys, m, &ps).unwrap(), f.image);
            }
        }
    }

    #[test]
    fn full_powerset_is_orderly_for_its_profiles() {
        let u = pow(3);
        let sys = CornerSystem::induced(&u, u.full_subsystem().members().to_vec());
        let ps = enumerate_profiles(&sys);
        assert!(is_orderly(&sys, &ps));
        assert!(is_weakly_submodular(&sys, &ps).unwrap());
    }

    #[test]
    fn good_set_is_complement_closed_and_proper() {
        let u = pow(3);
        let sys = CornerSystem::induced(&u, u.full_subsystem().members().to_vec());
        let ps = enumerate_profiles(&sys);
        let good = good_image_tree_set(&sys, &ps).unwrap();
        let empty = Bits::new(ps.len());
        let full = empty.complement();
        for g in &good {
            assert_ne!(*g, empty);
            assert_ne!(*g, full);
            assert!(good.contains(&g.complement()));
        }
    }

    #[test]
    fn single_profile_gives_empty_tree() {
        let u = pow(2);
        let sub = u.subsystem(1).unwrap();
        let sys = CornerSystem::induced(&u, sub.members().to_vec());
        let ps = profiles_of_order(&u, 1).unwrap();
        let one = ProfileSet::new(vec![ps.get(0).clone()]);
        assert!(abstract_tree_set(&sys, &one).unwrap().is_empty());
    }

    #[test]
    fn powerset_slice_quotient_tree_distinguishes() {
        // S_1 of powerset(4) is {bottom, top}: not regular (bottom <= top),
        // so the quotient construction must refuse it
        let u = pow(4);
        let sub = u.subsystem(1).unwrap();
        let sys = CornerSystem::induced(&u, sub.members().to_vec());
        let ps = enumerate_profiles(&sys);
        assert_eq!(ps.len(), 2);
        assert!(matches!(
            abstract_tree_set(&sys, &ps),
            Err(Error::Hypothesis { .. })
        ));
    }
}
