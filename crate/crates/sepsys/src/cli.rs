//! The `sepsys` binary. Line-oriented, deterministic output for fixed input
//! and seed.
//!
//! Exit codes: 0 success, 1 a verification violation was found (witness
//! printed), 2 input or parse error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::instances::InstanceSpec;
use crate::limits::Limits;
use crate::oracle::{self, VerificationReport};
use crate::profiles::{
    self, enumerate_profiles, is_regular_profile, regular_robust_profiles, ProfileSet,
};
use crate::system::{is_regular_system, CornerStrategy, SepId, Universe};
use crate::treeio::{tree_to_dot, TreeFile};
use crate::{quotient, randgen, regularization, tangletree};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "sepsys",
    version,
    about = "finite separation systems: profiles, quotients and trees of tangles"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the profiles of each S_k, with regularity and robustness flags.
    Profiles {
        instance: PathBuf,
        /// Highest k to enumerate (default: max order + 1, i.e. everything).
        #[arg(long)]
        max_order: Option<u32>,
        #[arg(long)]
        regular_only: bool,
        #[arg(long)]
        robust_only: bool,
    },
    /// Build the tree of tangles for all regular robust profiles; JSON on
    /// stdout.
    Tot {
        instance: PathBuf,
        /// Highest profile order to include (default: max order + 1).
        #[arg(long)]
        max_order: Option<u32>,
        /// Also write a DOT rendering of the tree to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Re-check a tree file against the instance from definitions alone.
    Verify { instance: PathBuf, tree_file: PathBuf },
    /// Essential core and regularization of S_k, with profile projections.
    Regularize {
        instance: PathBuf,
        #[arg(long)]
        order: u32,
    },
    /// Quotient of S_k by its profile set: fibers, good images, lifted tree.
    Quotient {
        instance: PathBuf,
        #[arg(long)]
        order: u32,
    },
    /// Seeded random search for counterexamples to the library's guarantees.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: u32,
    },
}

pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let kind = e.kind();
            let _ = e.print();
            return if kind == ErrorKind::DisplayHelp || kind == ErrorKind::DisplayVersion {
                0
            } else {
                2
            };
        }
    };
    match dispatch(cli.cmd) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Profiles { instance, max_order, regular_only, robust_only } => {
            cmd_profiles(&instance, max_order, regular_only, robust_only)
        }
        Cmd::Tot { instance, max_order, dot } => cmd_tot(&instance, max_order, dot.as_deref()),
        Cmd::Verify { instance, tree_file } => cmd_verify(&instance, &tree_file),
        Cmd::Regularize { instance, order } => cmd_regularize(&instance, order),
        Cmd::Quotient { instance, order } => cmd_quotient(&instance, order),
        Cmd::Fuzz { seed, count } => cmd_fuzz(seed, count),
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInstance(format!("cannot read {}: {e}", path.display())))
}

fn load_universe(path: &Path) -> Result<Universe> {
    let spec = InstanceSpec::parse(&read_file(path)?)?;
    let u = spec.build(&Limits::from_env()?)?;
    let v = u.validate();
    if !v.is_ok() {
        return Err(Error::InvalidInstance(format!("{} fails validation: {v}", u.name())));
    }
    Ok(u)
}

/// One past the largest order, so S_k covers the whole universe.
fn default_max_order(u: &Universe) -> Result<u32> {
    Ok(u.max_ord()? + 1)
}

fn fmt_ids(ids: &[SepId]) -> String {
    let parts: Vec<String> = ids.iter().map(ToString::to_string).collect();
    parts.join(" ")
}

fn cmd_profiles(
    path: &Path,
    max_order: Option<u32>,
    regular_only: bool,
    robust_only: bool,
) -> Result<bool> {
    let u = load_universe(path)?;
    let maxk = match max_order {
        Some(k) => k,
        None => default_max_order(&u)?,
    };
    println!("# {}: {} separations, listing profiles of S_1..S_{}", u.name(), u.len(), maxk);
    for k in 1..=maxk {
        let pset = profiles::profiles_of_order(&u, k)?;
        let mut lines = Vec::new();
        for p in pset.iter() {
            let regular = is_regular_profile(&u, p);
            let robust = profiles::is_robust(&u, p)?;
            if regular_only && !regular || robust_only && !robust {
                continue;
            }
            lines.push(format!(
                "  [{}] regular={} robust={}: {}",
                lines.len(),
                regular,
                robust,
                fmt_ids(p.ids())
            ));
        }
        println!("order {k}: {} profiles", lines.len());
        for line in lines {
            println!("{line}");
        }
    }
    Ok(true)
}

fn cmd_tot(path: &Path, max_order: Option<u32>, dot: Option<&Path>) -> Result<bool> {
    let u = load_universe(path)?;
    let maxk = match max_order {
        Some(k) => k,
        None => default_max_order(&u)?,
    };
    let pset = regular_robust_profiles(&u, maxk)?;
    let tot = tangletree::tree_of_tangles(&u, &pset)?;
    println!("{}", TreeFile::from_result(u.name(), &tot).to_json());
    if let Some(dp) = dot {
        let tree: Vec<SepId> = tot.tree.iter().copied().collect();
        fs::write(dp, tree_to_dot(&u, &tree))
            .map_err(|e| Error::InvalidInstance(format!("cannot write {}: {e}", dp.display())))?;
    }
    Ok(true)
}

fn cmd_verify(inst: &Path, tree_file: &Path) -> Result<bool> {
    let u = load_universe(inst)?;
    let tf = TreeFile::parse(&read_file(tree_file)?)?;
    let (tree, pset, certs) = tf.decode(&u)?;
    let mut rep = oracle::verify_tree(&u, &tree, &pset)?;
    if !certs.is_empty() {
        rep.merge(oracle::verify_certificates(&u, &tree, &certs, &pset)?);
    }
    print!("{rep}");
    Ok(rep.passed())
}

fn cmd_regularize(inst: &Path, order: u32) -> Result<bool> {
    let u = load_universe(inst)?;
    let sys = u.subsystem(order)?.corner_system(CornerStrategy::Induced);
    let pset = enumerate_profiles(&sys);
    println!("# {} S_{}: {} separations, {} profiles", u.name(), order, sys.len(), pset.len());
    let reg = regularization::regularize(&sys, Some(&pset))?;
    let removed: Vec<SepId> =
        sys.elems().iter().copied().filter(|&s| !reg.core.contains(s)).collect();
    println!("core: {} separations, removed: {}", reg.core.len(), fmt_ids(&removed));
    println!("core is fixpoint: {}", reg.core_is_fixpoint);
    println!(
        "regularized: {} separations, regular system: {}",
        reg.regular.len(),
        is_regular_system(&reg.regular)
    );
    println!("projected profiles: {}", reg.projected_profiles.len());
    for (i, p) in reg.projected_profiles.iter().enumerate() {
        println!("  [{i}] {}", fmt_ids(p.ids()));
    }
    Ok(true)
}

fn cmd_quotient(inst: &Path, order: u32) -> Result<bool> {
    let u = load_universe(inst)?;
    let sys = u.subsystem(order)?.corner_system(CornerStrategy::Induced);
    let all = enumerate_profiles(&sys);
    // the quotient is defined over regular profiles; non-regular ones belong
    // to the regularize pipeline
    let pset = ProfileSet::new(
        all.iter().filter(|p| is_regular_profile(&sys, p)).cloned().collect(),
    );
    println!(
        "# {} S_{}: {} separations, {} profiles ({} regular, used here)",
        u.name(),
        order,
        sys.len(),
        all.len(),
        pset.len()
    );
    println!("weakly submodular: {}", quotient::is_weakly_submodular(&sys, &pset)?);
    println!("orderly: {}", quotient::is_orderly(&sys, &pset));
    for f in quotient::fibers(&sys, &pset)? {
        println!("fiber {:?}: {}", f.image, fmt_ids(&f.members));
    }
    let good = quotient::good_image_tree_set(&sys, &pset)?;
    println!("good images: {}", good.len());
    for g in &good {
        println!("  {g:?}");
    }
    match quotient::abstract_tree_set(&sys, &pset) {
        Ok(tree) => println!("abstract tree set: {}", fmt_ids(&tree)),
        Err(e) => println!("abstract tree set: unavailable ({e})"),
    }
    Ok(true)
}

/// Calls that legitimately fail on hypothesis violations count as found
/// counterexamples; anything else propagates as a hard error.
fn hypothesis_witness<T>(
    r: Result<T>,
) -> std::result::Result<Option<T>, (Option<String>, Error)> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ Error::Hypothesis { .. }) => Err((Some(e.to_string()), e)),
        Err(e) => Err((None, e)),
    }
}

fn cmd_fuzz(seed: u64, count: u32) -> Result<bool> {
    let limits = Limits::from_env()?;
    let mut rng = randgen::rng_from_seed(seed);
    let mut failures = 0usize;
    for i in 0..count {
        let u = randgen::random_small_universe(&mut rng, &limits);
        let sys = randgen::random_corner_system(&mut rng, &u, 8);
        let pset = enumerate_profiles(&sys);
        let mut rep =
            VerificationReport::new(format!("fuzz #{i} {} ({} seps)", u.name(), sys.len()));

        let brute = oracle::brute_profile_set(&sys, &limits)?;
        rep.record(
            "profile enumeration matches oracle",
            if brute == pset {
                Vec::new()
            } else {
                vec![format!("fast path found {}, oracle found {}", pset.len(), brute.len())]
            },
        );

        // the quotient machinery only behaves for regular profile sets
        let regs = ProfileSet::new(
            pset.iter().filter(|p| is_regular_profile(&sys, p)).cloned().collect(),
        );
        rep.merge(oracle::check_hom(&sys, &regs, &[])?);
        if quotient::is_weakly_submodular(&sys, &regs)? {
            rep.merge(oracle::check_fiber_order_equivalence(&sys, &regs)?);
        }

        match hypothesis_witness(regularization::regularize(&sys, Some(&pset))) {
            Ok(Some(reg)) => {
                rep.merge(oracle::check_regularization(&sys, &reg, &pset)?);
                for _ in 0..3 {
                    let tree = randgen::random_tree_set(&mut rng, &reg.regular, 4);
                    rep.merge(oracle::check_treeset_preservation(
                        &sys,
                        &reg.regular,
                        &pset,
                        &reg.projected_profiles,
                        &tree,
                    )?);
                }
            }
            Ok(None) => unreachable!(),
            Err((Some(witness), _)) => rep.record("regularization", vec![witness]),
            Err((None, e)) => return Err(e),
        }

        if pset.len() >= 2 && is_regular_system(&sys) && quotient::is_orderly(&sys, &pset) {
            match hypothesis_witness(quotient::abstract_tree_set(&sys, &pset)) {
                Ok(Some(tree)) => {
                    rep.merge(oracle::verify_abstract_postconditions(&sys, &pset, &tree)?)
                }
                Ok(None) => unreachable!(),
                Err((Some(witness), _)) => rep.record("quotient tree set", vec![witness]),
                Err((None, e)) => return Err(e),
            }
        }

        if rep.passed() {
            println!("[{i}] {} ({} seps, {} profiles): ok", u.name(), sys.len(), pset.len());
        } else {
            failures += 1;
            print!("{rep}");
        }
    }
    println!("fuzz: {count} systems, {failures} with violations");
    Ok(failures == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp(name: &str, contents: &str) -> PathBuf {
        let dir = std::env::temp_dir();
        let path = dir.join(format!("sepsys-cli-{}-{name}", std::process::id()));
        fs::write(&path, contents).unwrap();
        path
    }

    #[test]
    fn exit_codes_for_bad_input() {
        assert_eq!(run_cli(["sepsys", "--help"]), 0);
        assert_eq!(run_cli(["sepsys", "frobnicate"]), 2);
        assert_eq!(run_cli(["sepsys", "profiles", "/nonexistent.json"]), 2);
        let junk = write_temp("junk.json", "{\"version\": 9}");
        assert_eq!(run_cli(["sepsys", "profiles", junk.to_str().unwrap()]), 2);
    }

    #[test]
    fn verify_round_trip_and_corruption() {
        let inst = write_temp(
            "ps3.json",
            r#"{"version":1,"name":"ps3","kind":"powerset","n":3}"#,
        );
        let u = load_universe(&inst).unwrap();
        let pset = regular_robust_profiles(&u, u.max_ord().unwrap() + 1).unwrap();
        let tot = tangletree::tree_of_tangles(&u, &pset).unwrap();
        let good = write_temp("ps3-tree.json", &TreeFile::from_result("ps3", &tot).to_json());
        assert_eq!(
            run_cli(["sepsys", "verify", inst.to_str().unwrap(), good.to_str().unwrap()]),
            0
        );

        // dropping one tree element loses a required distinguisher
        let mut tf = TreeFile::from_result("ps3", &tot);
        tf.tree.truncate(1);
        tf.certificates.clear();
        let bad = write_temp("ps3-bad.json", &tf.to_json());
        assert_eq!(
            run_cli(["sepsys", "verify", inst.to_str().unwrap(), bad.to_str().unwrap()]),
            1
        );
    }

    #[test]
    fn reporting_commands_run_clean() {
        let inst = write_temp(
            "ps3b.json",
            r#"{"version":1,"name":"ps3b","kind":"powerset","n":3}"#,
        );
        let p = inst.to_str().unwrap();
        assert_eq!(run_cli(["sepsys", "profiles", p, "--regular-only"]), 0);
        assert_eq!(run_cli(["sepsys", "regularize", p, "--order", "1"]), 0);
        assert_eq!(run_cli(["sepsys", "quotient", p, "--order", "2"]), 0);
        assert_eq!(run_cli(["sepsys", "fuzz", "--seed", "5", "--count", "3"]), 0);
    }
}
