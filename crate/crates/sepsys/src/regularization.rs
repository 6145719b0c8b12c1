//! Removing small separations from a system without losing its tree sets.
//!
//! Two steps: first delete every trivial, cotrivial and degenerate element
//! (the essential core), then weaken the partial order by removing every
//! relation of the shape `s <= inv(s)`. The result is a regular system whose
//! corners are re-verified suprema of the weakened order; profiles project
//! onto it member-wise, and tree sets found there remain tree sets of the
//! original system with the same distinguishing power.

use crate::bits::BitMat;
use crate::profiles::{self, Profile, ProfileSet};
use crate::system::{classify, CornerSystem, SepId, NO_CORNER};
use crate::{Error, Result};

/// Everything the regularization pipeline produces, kept together so callers
/// and verifiers can cross-check each stage.
#[derive(Clone)]
pub struct RegularizationResult {
    pub original: CornerSystem,
    /// The original minus trivial, cotrivial and degenerate elements.
    pub core: CornerSystem,
    /// The core with `s <= inv(s)` relations removed and corners re-verified.
    pub regular: CornerSystem,
    /// Elements surviving into `core` and `regular` (global ids).
    pub elem_map: Vec<SepId>,
    /// Member-wise projections of the supplied profiles, when any.
    pub projected_profiles: ProfileSet,
    /// Whether taking the core a second time removes nothing further.
    pub core_is_fixpoint: bool,
}

/// Deletes every trivial, cotrivial and degenerate element. Deletion cannot
/// create new such elements (witnesses only disappear), so the core is its
/// own core; `regularize` still records the re-check.
pub fn essential_core(sys: &CornerSystem) -> CornerSystem {
    let keep: Vec<usize> = (0..sys.len())
        .filter(|&i| {
            let f = classify(sys, sys.elems()[i]);
            !(f.trivial || f.cotrivial || f.degenerate)
        })
        .collect();
    restrict(sys, &keep)
}

fn restrict(sys: &CornerSystem, keep: &[usize]) -> CornerSystem {
    let m = keep.len();
    let mut old_to_new = vec![usize::MAX; sys.len()];
    for (new, &old) in keep.iter().enumerate() {
        old_to_new[old] = new;
    }
    let elems: Vec<SepId> = keep.iter().map(|&i| sys.elems()[i]).collect();
    let mut inv = vec![0u32; m];
    let mut leq = BitMat::new(m);
    let mut corner = vec![NO_CORNER; m * m];
    for (a, &i) in keep.iter().enumerate() {
        let ii = old_to_new[sys.inv_local(i)];
        assert_ne!(ii, usize::MAX, "restriction must be closed under inversion");
        inv[a] = ii as u32;
        for (b, &j) in keep.iter().enumerate() {
            if sys.leq_local(i, j) {
                leq.set(a, b, true);
            }
            if let Some(c) = sys.corner_local(i, j) {
                let cn = old_to_new[c];
                if cn != usize::MAX {
                    corner[a * m + b] = cn as u32;
                }
            }
        }
    }
    let ord = if m == 0 || sys.ord_of(elems[0]).is_some() {
        let o: Option<Vec<u32>> = elems.iter().map(|&s| sys.ord_of(s)).collect();
        o
    } else {
        None
    };
    CornerSystem::from_parts(sys.id_space(), elems, inv, leq, corner, ord)
}

/// Runs the full pipeline. When profiles are supplied they are projected
/// member-wise and re-validated against the regularized system; projections
/// of distinct profiles stay distinct because every profile contains every
/// deleted element or its inverse the same way.
pub fn regularize(
    sys: &CornerSystem,
    profiles: Option<&ProfileSet>,
) -> Result<RegularizationResult> {
    let core = essential_core(sys);
    let core_is_fixpoint = essential_core(&core).len() == core.len();
    let m = core.len();

    let mut leq = BitMat::new(m);
    for i in 0..m {
        for j in 0..m {
            if core.leq_local(i, j) && core.inv_local(i) != j {
                leq.set(i, j, true);
            }
        }
    }
    let mut corner = vec![NO_CORNER; m * m];
    for i in 0..m {
        for j in i..m {
            if let Some(c) = core.corner_local(i, j) {
                let upper = leq.get(i, c) && leq.get(j, c);
                let least = upper
                    && (0..m).all(|x| !(leq.get(i, x) && leq.get(j, x)) || leq.get(c, x));
                if least {
                    corner[i * m + j] = c as u32;
                    corner[j * m + i] = c as u32;
                }
            }
        }
    }
    let elems = core.elems().to_vec();
    let inv: Vec<u32> = (0..m).map(|i| core.inv_local(i) as u32).collect();
    let ord: Option<Vec<u32>> = if m == 0 || core.ord_of(elems[0]).is_some() {
        elems.iter().map(|&s| core.ord_of(s)).collect()
    } else {
        None
    };
    let regular =
        CornerSystem::from_parts(core.id_space(), elems.clone(), inv, leq, corner, ord);

    if !regular.is_regular() {
        return Err(Error::hypothesis(
            "regularization",
            "output still has a small element".to_string(),
        ));
    }

    let projected_profiles = match profiles {
        None => ProfileSet::new(Vec::new()),
        Some(pset) => {
            let projections: Vec<Profile> = pset
                .iter()
                .map(|p| {
                    let ids: Vec<SepId> =
                        elems.iter().copied().filter(|&s| p.contains(s)).collect();
                    Profile::from_ids(regular.id_space(), ids, p.order())
                })
                .collect();
            let out = ProfileSet::new(projections);
            if out.len() != pset.len() {
                return Err(Error::hypothesis(
                    "regularization",
                    format!(
                        "{} distinct profiles collapsed to {} projections; \
                         some input was not a profile",
                        pset.len(),
                        out.len()
                    ),
                ));
            }
            for (pi, p) in out.iter().enumerate() {
                if !profiles::is_profile(&regular, p.ids()) {
                    return Err(Error::hypothesis(
                        "regularization",
                        format!("projection #{pi} is not a profile of the regularized system"),
                    ));
                }
            }
            out
        }
    };

    Ok(RegularizationResult {
        original: sys.clone(),
        core,
        regular,
        elem_map: elems,
        projected_profiles,
        core_is_fixpoint,
    })
}

/// Tree set distinguishing the profiles of a possibly non-regular system:
/// regularize, distinguish the projections there, and return the result,
/// which is also a tree set of the original system splitting the original
/// profiles the same way.
pub fn tree_set_nonregular(sys: &CornerSystem, pset: &ProfileSet) -> Result<Vec<SepId>> {
    let reg = regularize(sys, Some(pset))?;
    crate::quotient::abstract_tree_set(&reg.regular, &reg.projected_profiles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{explicit_universe, powerset_universe};
    use crate::profiles::enumerate_profiles;
    use crate::system::{SepView, Universe};
    use crate::Limits;

    fn pow(n: u32) -> Universe {
        powerset_universe(n, &Limits::default()).unwrap()
    }

    fn full(u: &Universe) -> CornerSystem {
        CornerSystem::induced(u, u.full_subsystem().members().to_vec())
    }

    /// Four elements b < x, b < y = inv(x), t = inv(b): b is trivial with
    /// witness x, t cotrivial, x and y stay.
    fn diamond() -> Universe {
        explicit_universe(
            "diamond".into(),
            &["b".into(), "x".into(), "y".into(), "t".into()],
            &[3, 2, 1, 0],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
            &[
                vec![0, 1, 2, 3],
                vec![1, 1, 3, 3],
                vec![2, 3, 2, 3],
                vec![3, 3, 3, 3],
            ],
            Some(&[0, 1, 1, 0]),
        )
        .unwrap()
    }

    #[test]
    fn core_drops_trivial_and_cotrivial() {
        let u = diamond();
        let sys = full(&u);
        let core = essential_core(&sys);
        assert_eq!(core.elems(), &[SepId(1), SepId(2)]);
        // and is a fixpoint
        assert_eq!(essential_core(&core).len(), 2);
    }

    #[test]
    fn powerset_core_removes_bottom_and_top() {
        let u = pow(3);
        let sys = full(&u);
        let core = essential_core(&sys);
        assert!(!core.contains(SepId(0)));
        assert!(!core.contains(SepId(0b111)));
        assert_eq!(core.len(), sys.len() - 2);
    }

    #[test]
    fn regularized_powerset2_middle_pair_keeps_its_order() {
        let u = pow(2);
        let sys = full(&u);
        let reg = regularize(&sys, None).unwrap();
        assert!(reg.core_is_fixpoint);
        // {1} and {2} survive; neither is small, their relation is unchanged
        let r = &reg.regular;
        assert_eq!(r.elems(), &[SepId(1), SepId(2)]);
        assert!(r.is_regular());
        assert!(!r.leq_ids(SepId(1), SepId(2)));
        assert!(r.leq_ids(SepId(1), SepId(1)));
    }

    #[test]
    fn small_edges_are_dropped_but_reflexivity_stays() {
        // powerset(1): {} <= {1} with inv({}) = {1}: both are deleted by the
        // core (trivial? no: witness must be a distinct pair, and there is
        // only one pair). So the core keeps both and regularization drops
        // the small edge.
        let u = pow(1);
        let sys = full(&u);
        let core = essential_core(&sys);
        assert_eq!(core.len(), 2);
        let reg = regularize(&sys, None).unwrap();
        let r = &reg.regular;
        assert!(!r.leq_ids(SepId(0), SepId(1)));
        assert!(r.leq_ids(SepId(0), SepId(0)));
        assert!(r.is_regular());
    }

    #[test]
    fn profiles_project_and_stay_distinct() {
        let u = pow(3);
        let sys = full(&u);
        let ps = enumerate_profiles(&sys);
        assert!(ps.len() > 1);
        let reg = regularize(&sys, Some(&ps)).unwrap();
        assert_eq!(reg.projected_profiles.len(), ps.len());
        for p in &reg.projected_profiles {
            assert!(profiles::is_profile(&reg.regular, p.ids()));
        }
    }

    #[test]
    fn nonregular_pipeline_distinguishes_powerset3_profiles() {
        let u = pow(3);
        let sys = full(&u);
        let ps = enumerate_profiles(&sys);
        let tree = tree_set_nonregular(&sys, &ps).unwrap();
        assert!(!tree.is_empty());
        // every pair of profiles is split by some tree element
        for i in 0..ps.len() {
            for j in i + 1..ps.len() {
                let (p, q) = (ps.get(i), ps.get(j));
                assert!(
                    tree.iter().any(|&t| {
                        let ti = u.inv_id(t);
                        (p.contains(t) && q.contains(ti)) || (p.contains(ti) && q.contains(t))
                    }),
                    "profiles #{i} and #{j} not split"
                );
            }
        }
    }
}
