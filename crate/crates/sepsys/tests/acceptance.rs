//! End-to-end acceptance suite. Every test prints one PASS/FAIL line and
//! asserts the same condition, so `cargo test` is the gate and the printed
//! lines are the human summary. The lines go straight to the stdout handle,
//! past libtest's capture, so they show up in plain `cargo test` output too.

use std::io::Write;
use std::time::{Duration, Instant};

use sepsys::instances::{graph_universe, InstanceSpec};
use sepsys::oracle;
use sepsys::profiles::{self, is_regular_profile, regular_robust_profiles, ProfileSet};
use sepsys::quotient;
use sepsys::randgen::{
    random_connected_graph, random_corner_system, random_small_universe, random_tree_set,
    rng_from_seed,
};
use sepsys::regularization;
use sepsys::system::{is_regular_system, SepId};
use sepsys::{CornerSystem, Limits, Universe};

fn fixture(name: &str) -> Universe {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {path}: {e}"));
    InstanceSpec::parse(&text).unwrap().build(&Limits::default()).unwrap()
}

fn criterion(name: &str, ok: bool) {
    let line = format!("criterion {name}: {}\n", if ok { "PASS" } else { "FAIL" });
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
    assert!(ok, "criterion {name} failed");
}

/// The quotient machinery is stated for sets of regular profiles, so its
/// checks get the regular ones only.
fn regular_profiles_of(sys: &CornerSystem) -> ProfileSet {
    ProfileSet::new(
        profiles::enumerate_profiles(sys)
            .iter()
            .filter(|p| is_regular_profile(sys, p))
            .cloned()
            .collect(),
    )
}

/// Order-< k slices of an instance, one corner system per k, sizes capped so
/// the quadratic oracle scans stay proportionate.
fn slices(u: &Universe, max_len: usize) -> Vec<CornerSystem> {
    let mut out = Vec::new();
    for k in 1..=u.max_ord().unwrap() + 1 {
        let members = u.subsystem(k).unwrap().members().to_vec();
        if members.len() > max_len {
            break;
        }
        if members.is_empty() {
            continue;
        }
        out.push(CornerSystem::induced(u, members));
    }
    out.dedup_by(|a, b| a.elems() == b.elems());
    out
}

#[test]
fn c1_tree_of_tangles_suite() {
    let limits = Limits::default();
    let mut instances = vec![fixture("inst-2tri"), fixture("inst-k4pair")];
    let mut rng = rng_from_seed(0xC1);
    for _ in 0..50 {
        let (n, edges) = random_connected_graph(&mut rng, 3, 6);
        instances.push(graph_universe(&edges, Some(n), &limits).unwrap());
    }
    let mut ok = true;
    for u in &instances {
        let t0 = Instant::now();
        let maxk = u.max_ord().unwrap();
        let pset = regular_robust_profiles(u, maxk).unwrap();
        let tot = sepsys::tangletree::tree_of_tangles(u, &pset).unwrap();
        let tree: Vec<SepId> = tot.tree.iter().copied().collect();
        let mut rep = oracle::verify_tree(u, &tree, &tot.profiles).unwrap();
        rep.merge(
            oracle::verify_certificates(u, &tree, &tot.certificates, &tot.profiles).unwrap(),
        );
        if !rep.passed() {
            eprintln!("{} failed:\n{rep}", u.name());
            ok = false;
        }
        let elapsed = t0.elapsed();
        if elapsed >= Duration::from_secs(60) {
            eprintln!("{} took {elapsed:?}", u.name());
            ok = false;
        }
    }
    criterion("1 tree-of-tangles main suite (52 instances)", ok);
}

#[test]
fn c2_quotient_tree_sets_on_orderly_systems() {
    let limits = Limits::default();
    let mut rng = rng_from_seed(0xC2);
    let mut ok = true;
    let mut seen = 0u32;
    let mut attempts = 0u32;
    while seen < 100 {
        attempts += 1;
        assert!(attempts < 20_000, "orderly systems too rare: {seen} after {attempts}");
        let u = random_small_universe(&mut rng, &limits);
        let sys = random_corner_system(&mut rng, &u, 12);
        let fast = profiles::enumerate_profiles(&sys);
        if !quotient::is_orderly(&sys, &fast) {
            continue;
        }
        seen += 1;
        let pset = oracle::brute_profile_set(&sys, &limits).unwrap();
        if pset != fast {
            eprintln!("system #{seen}: enumerated profiles disagree with oracle");
            ok = false;
            continue;
        }
        if is_regular_system(&sys) {
            match quotient::abstract_tree_set(&sys, &pset) {
                Ok(tree) => {
                    let rep =
                        oracle::verify_abstract_postconditions(&sys, &pset, &tree).unwrap();
                    if !rep.passed() {
                        eprintln!("{rep}");
                        ok = false;
                    }
                }
                Err(e) => {
                    eprintln!("system #{seen} ({}): {e}", sys.len());
                    ok = false;
                }
            }
        } else {
            let reg = match regularization::regularize(&sys, Some(&pset)) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("system #{seen}: regularization failed: {e}");
                    ok = false;
                    continue;
                }
            };
            match quotient::abstract_tree_set(&reg.regular, &reg.projected_profiles) {
                Ok(tree) => {
                    let mut rep = oracle::verify_abstract_postconditions(
                        &reg.regular,
                        &reg.projected_profiles,
                        &tree,
                    )
                    .unwrap();
                    rep.merge(
                        oracle::check_treeset_preservation(
                            &sys,
                            &reg.regular,
                            &pset,
                            &reg.projected_profiles,
                            &tree,
                        )
                        .unwrap(),
                    );
                    if !rep.passed() {
                        eprintln!("{rep}");
                        ok = false;
                    }
                }
                Err(e) => {
                    eprintln!("system #{seen} (regularized, {}): {e}", reg.regular.len());
                    ok = false;
                }
            }
        }
    }
    criterion("2 quotient tree sets on 100 orderly systems", ok);
}

#[test]
fn c3_image_homomorphism_fuzz() {
    let limits = Limits::default();
    let mut ok = true;
    let mut pairs_checked = 0usize;
    for name in ["inst-set4", "inst-2tri", "inst-k4pair", "inst-diamond"] {
        let u = fixture(name);
        for sys in slices(&u, 40) {
            let pset = regular_profiles_of(&sys);
            let rep = oracle::check_hom(&sys, &pset, &[]).unwrap();
            pairs_checked += sys.len() * sys.len();
            if !rep.passed() {
                eprintln!("{name}:\n{rep}");
                ok = false;
            }
        }
    }
    let mut rng = rng_from_seed(0xC3);
    while pairs_checked < 1000 {
        let u = random_small_universe(&mut rng, &limits);
        let sys = random_corner_system(&mut rng, &u, 8);
        let pset = regular_profiles_of(&sys);
        let rep = oracle::check_hom(&sys, &pset, &[]).unwrap();
        pairs_checked += sys.len() * sys.len();
        if !rep.passed() {
            eprintln!("random system:\n{rep}");
            ok = false;
        }
    }
    criterion(&format!("3 image homomorphism on {pairs_checked} pairs"), ok);
}

#[test]
fn c4_fiber_order_equivalence() {
    let limits = Limits::default();
    let mut ok = true;
    let mut checked = 0u32;
    for name in ["inst-set4", "inst-2tri", "inst-k4pair", "inst-diamond"] {
        let u = fixture(name);
        for sys in slices(&u, 40) {
            let pset = regular_profiles_of(&sys);
            if !quotient::is_weakly_submodular(&sys, &pset).unwrap() {
                continue;
            }
            checked += 1;
            let rep = oracle::check_fiber_order_equivalence(&sys, &pset).unwrap();
            if !rep.passed() {
                eprintln!("{name}:\n{rep}");
                ok = false;
            }
        }
    }
    let mut rng = rng_from_seed(0xC4);
    let mut attempts = 0u32;
    while checked < 50 {
        attempts += 1;
        assert!(attempts < 20_000, "weakly submodular systems too rare");
        let u = random_small_universe(&mut rng, &limits);
        let sys = random_corner_system(&mut rng, &u, 8);
        let pset = regular_profiles_of(&sys);
        if !quotient::is_weakly_submodular(&sys, &pset).unwrap() {
            continue;
        }
        checked += 1;
        let rep = oracle::check_fiber_order_equivalence(&sys, &pset).unwrap();
        if !rep.passed() {
            eprintln!("random system:\n{rep}");
            ok = false;
        }
    }
    criterion(&format!("4 fiber order equivalence on {checked} systems"), ok);
}

#[test]
fn c5_regularization_suite() {
    let limits = Limits::default();
    let mut rng = rng_from_seed(0xC5);
    let mut ok = true;
    let mut seen = 0u32;
    let mut attempts = 0u32;
    while seen < 100 {
        attempts += 1;
        assert!(attempts < 20_000, "systems with profiles too rare");
        let u = random_small_universe(&mut rng, &limits);
        let sys = random_corner_system(&mut rng, &u, 8);
        let pset = profiles::enumerate_profiles(&sys);
        if pset.is_empty() {
            continue;
        }
        seen += 1;
        let reg = match regularization::regularize(&sys, Some(&pset)) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("system #{seen}: regularization failed: {e}");
                ok = false;
                continue;
            }
        };
        let rep = oracle::check_regularization(&sys, &reg, &pset).unwrap();
        if !rep.passed() {
            eprintln!("{rep}");
            ok = false;
        }
        // closedness survives projection (trivial on finite systems, but the
        // contract names it, so keep it visible)
        if !reg.projected_profiles.iter().all(|p| profiles::is_closed(&u, p)) {
            eprintln!("system #{seen}: a projected profile is not closed");
            ok = false;
        }
        let mut trees: Vec<Vec<SepId>> = Vec::new();
        if let Ok(tree) = regularization::tree_set_nonregular(&sys, &pset) {
            trees.push(tree);
        }
        for _ in 0..20 {
            trees.push(random_tree_set(&mut rng, &reg.regular, 6));
        }
        for tree in &trees {
            let rep = oracle::check_treeset_preservation(
                &sys,
                &reg.regular,
                &pset,
                &reg.projected_profiles,
                tree,
            )
            .unwrap();
            if !rep.passed() {
                eprintln!("{rep}");
                ok = false;
            }
        }
    }
    criterion("5 regularization on 100 systems with profiles", ok);
}

#[test]
fn c6_oracle_equality() {
    // exhaustive orientation scans: cap the oracle at 14 involution pairs
    let oracle_limits = Limits { oracle_pairs: 14, ..Limits::default() };
    let mut ok = true;
    let mut compared = 0u32;
    for name in ["inst-set4", "inst-2tri", "inst-k4pair", "inst-diamond"] {
        let u = fixture(name);
        for sys in slices(&u, 28) {
            let fast = profiles::enumerate_profiles(&sys);
            let brute = oracle::brute_profile_set(&sys, &oracle_limits).unwrap();
            compared += 1;
            if fast != brute {
                eprintln!(
                    "{name} ({} seps): fast {} profiles, oracle {}",
                    sys.len(),
                    fast.len(),
                    brute.len()
                );
                ok = false;
            }
        }
    }
    let mut rng = rng_from_seed(0xC6);
    while compared < 120 {
        let u = random_small_universe(&mut rng, &Limits::default());
        let sys = random_corner_system(&mut rng, &u, 8);
        let fast = profiles::enumerate_profiles(&sys);
        let brute = oracle::brute_profile_set(&sys, &oracle_limits).unwrap();
        compared += 1;
        if fast != brute {
            eprintln!(
                "random system ({} seps): fast {} profiles, oracle {}",
                sys.len(),
                fast.len(),
                brute.len()
            );
            ok = false;
        }
    }
    criterion(&format!("6 oracle equality on {compared} systems"), ok);
}

#[test]
fn c7_deterministic_tot() {
    let exe = env!("CARGO_BIN_EXE_sepsys");
    let mut ok = true;
    for name in ["inst-2tri", "inst-set4"] {
        let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
        let run = || {
            std::process::Command::new(exe)
                .args(["tot", &path])
                .output()
                .expect("run sepsys tot")
        };
        let (a, b) = (run(), run());
        if !(a.status.success() && b.status.success()) {
            eprintln!("{name}: tot exited nonzero");
            ok = false;
        }
        if a.stdout.is_empty() || a.stdout != b.stdout {
            eprintln!("{name}: two runs differ");
            ok = false;
        }
    }
    criterion("7 byte-identical tot runs", ok);
}
