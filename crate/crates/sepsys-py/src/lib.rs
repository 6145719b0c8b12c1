//! Python bindings for the sepsys core: load an instance, enumerate
//! profiles, build a tree of tangles and verify it without leaving Python.
//! Separations are plain ints (the core ids), profiles plain id lists.

// the #[pymethods] expansion wraps every PyResult in a Self-conversion
#![allow(clippy::useless_conversion)]

use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sepsys::instances::InstanceSpec;
use sepsys::oracle;
use sepsys::profiles::{self, Profile};
use sepsys::system::{classify, is_regular_system};
use sepsys::tangletree::tree_of_tangles;
use sepsys::treeio::{tree_to_dot, TreeFile};
use sepsys::{Limits, SepId, Universe};

fn lift<T>(r: sepsys::Result<T>) -> PyResult<T> {
    r.map_err(|e| PyValueError::new_err(e.to_string()))
}

/// An orientation of a set of separations, given by the chosen ids.
#[pyclass(name = "Profile", frozen)]
#[derive(Clone)]
struct PyProfile {
    #[pyo3(get)]
    ids: Vec<u32>,
    #[pyo3(get)]
    order: Option<u32>,
}

impl PyProfile {
    fn from_core(p: &Profile) -> PyProfile {
        PyProfile { ids: p.ids().iter().map(|s| s.0).collect(), order: p.order() }
    }

    fn to_core(&self, u: &Universe) -> PyResult<Profile> {
        let mut ids = Vec::with_capacity(self.ids.len());
        for &i in &self.ids {
            let s = SepId(i);
            if !sepsys::system::SepView::has(u, s) {
                return Err(PyValueError::new_err(format!(
                    "separation {i} is not in the system"
                )));
            }
            ids.push(s);
        }
        Ok(Profile::from_ids(u.len(), ids, self.order))
    }
}

#[pymethods]
impl PyProfile {
    #[new]
    #[pyo3(signature = (ids, order=None))]
    fn new(mut ids: Vec<u32>, order: Option<u32>) -> PyProfile {
        ids.sort_unstable();
        ids.dedup();
        PyProfile { ids, order }
    }

    fn __len__(&self) -> usize {
        self.ids.len()
    }

    fn __contains__(&self, id: u32) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    fn __eq__(&self, other: &PyProfile) -> bool {
        self.ids == other.ids && self.order == other.order
    }

    fn __repr__(&self) -> String {
        match self.order {
            Some(k) => format!("Profile(order={k}, ids={:?})", self.ids),
            None => format!("Profile(ids={:?})", self.ids),
        }
    }
}

/// Outcome of a verification run.
#[pyclass(name = "Report", frozen)]
struct PyReport {
    #[pyo3(get)]
    passed: bool,
    #[pyo3(get)]
    violations: Vec<String>,
    text: String,
}

impl PyReport {
    fn from_core(rep: oracle::VerificationReport) -> PyReport {
        PyReport {
            passed: rep.passed(),
            violations: rep
                .violations
                .iter()
                .map(|v| format!("[{}] {}", v.check, v.witness))
                .collect(),
            text: rep.to_string(),
        }
    }
}

#[pymethods]
impl PyReport {
    fn __str__(&self) -> String {
        self.text.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(passed={}, violations={})",
            if self.passed { "True" } else { "False" },
            self.violations.len()
        )
    }
}

/// A computed tree set with the profiles it distinguishes and one
/// certificate (sep, p, q) per involution pair. Round-trips through the
/// same JSON the command line tool reads and writes.
#[pyclass(name = "TreeOfTangles", frozen)]
struct PyTree {
    file: TreeFile,
}

#[pymethods]
impl PyTree {
    #[getter]
    fn instance(&self) -> String {
        self.file.instance.clone()
    }

    #[getter]
    fn tree(&self) -> Vec<u32> {
        self.file.tree.clone()
    }

    #[getter]
    fn certificates(&self) -> Vec<(u32, usize, usize)> {
        self.file.certificates.iter().map(|c| (c.sep, c.p, c.q)).collect()
    }

    #[getter]
    fn profiles(&self) -> Vec<PyProfile> {
        self.file
            .profiles
            .iter()
            .map(|r| PyProfile { ids: r.members.clone(), order: r.order })
            .collect()
    }

    fn to_json(&self) -> String {
        self.file.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyTree> {
        Ok(PyTree { file: lift(TreeFile::parse(text))? })
    }

    fn __repr__(&self) -> String {
        format!(
            "TreeOfTangles(instance={:?}, pairs={}, profiles={})",
            self.file.instance,
            self.file.tree.len() / 2,
            self.file.profiles.len()
        )
    }
}

/// A finite universe of oriented separations built from an instance
/// description (graph, powerset or explicit tables).
#[pyclass(name = "Universe", frozen)]
struct PyUniverse {
    inner: Universe,
}

impl PyUniverse {
    fn sep(&self, id: u32) -> PyResult<SepId> {
        let s = SepId(id);
        if !sepsys::system::SepView::has(&self.inner, s) {
            return Err(PyValueError::new_err(format!(
                "separation {id} is not in the system"
            )));
        }
        Ok(s)
    }

    fn verify_file(&self, file: &TreeFile) -> PyResult<PyReport> {
        let (tree, pset, certs) = lift(file.decode(&self.inner))?;
        let mut rep = lift(oracle::verify_tree(&self.inner, &tree, &pset))?;
        if !certs.is_empty() {
            rep.merge(lift(oracle::verify_certificates(&self.inner, &tree, &certs, &pset))?);
        }
        Ok(PyReport::from_core(rep))
    }
}

#[pymethods]
impl PyUniverse {
    /// Parses instance JSON, builds the universe and validates its laws.
    /// Size limits honour the SEPSYS_LIMITS environment variable.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyUniverse> {
        let spec = lift(InstanceSpec::parse(text))?;
        let u = lift(spec.build(&lift(Limits::from_env())?))?;
        let v = u.validate();
        if !v.is_ok() {
            return Err(PyValueError::new_err(format!(
                "invalid instance: {} fails validation: {v}",
                u.name()
            )));
        }
        Ok(PyUniverse { inner: u })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Universe(name={:?}, separations={})", self.inner.name(), self.inner.len())
    }

    fn label(&self, id: u32) -> PyResult<String> {
        Ok(self.inner.label(self.sep(id)?).to_string())
    }

    fn inv(&self, id: u32) -> PyResult<u32> {
        Ok(self.inner.inv_id(self.sep(id)?).0)
    }

    fn leq(&self, a: u32, b: u32) -> PyResult<bool> {
        Ok(self.inner.leq(self.sep(a)?, self.sep(b)?))
    }

    fn join(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.join(self.sep(a)?, self.sep(b)?).0)
    }

    fn meet(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.meet(self.sep(a)?, self.sep(b)?).0)
    }

    fn order_of(&self, id: u32) -> PyResult<u32> {
        lift(self.inner.ord(self.sep(id)?))
    }

    fn max_order(&self) -> PyResult<u32> {
        lift(self.inner.max_ord())
    }

    /// True when no element is small, so every profile is regular.
    #[getter]
    fn is_regular(&self) -> bool {
        is_regular_system(&self.inner)
    }

    fn classify(&self, id: u32) -> PyResult<HashMap<&'static str, bool>> {
        let f = classify(&self.inner, self.sep(id)?);
        Ok(HashMap::from([
            ("small", f.small),
            ("cosmall", f.cosmall),
            ("degenerate", f.degenerate),
            ("trivial", f.trivial),
            ("cotrivial", f.cotrivial),
        ]))
    }

    /// All profiles of the subsystem of elements of order < k.
    fn profiles_of_order(&self, k: u32) -> PyResult<Vec<PyProfile>> {
        let ps = lift(profiles::profiles_of_order(&self.inner, k))?;
        Ok(ps.iter().map(PyProfile::from_core).collect())
    }

    /// The regular robust profiles of all orders 1..=max_order, deduplicated:
    /// the set the tree-of-tangles construction distinguishes.
    fn regular_robust_profiles(&self, max_order: u32) -> PyResult<Vec<PyProfile>> {
        let ps = lift(profiles::regular_robust_profiles(&self.inner, max_order))?;
        Ok(ps.iter().map(PyProfile::from_core).collect())
    }

    fn is_regular_profile(&self, p: &PyProfile) -> PyResult<bool> {
        Ok(profiles::is_regular_profile(&self.inner, &p.to_core(&self.inner)?))
    }

    fn is_robust(&self, p: &PyProfile) -> PyResult<bool> {
        lift(profiles::is_robust(&self.inner, &p.to_core(&self.inner)?))
    }

    /// Builds a tree set distinguishing every pair of regular robust
    /// profiles up to `max_order` (default: one past the largest order,
    /// so every profile of the full universe is covered).
    #[pyo3(signature = (max_order=None))]
    fn tree_of_tangles(&self, max_order: Option<u32>) -> PyResult<PyTree> {
        let maxk = match max_order {
            Some(k) => k,
            None => lift(self.inner.max_ord())? + 1,
        };
        let pset = lift(profiles::regular_robust_profiles(&self.inner, maxk))?;
        let tot = lift(tree_of_tangles(&self.inner, &pset))?;
        Ok(PyTree { file: TreeFile::from_result(self.inner.name(), &tot) })
    }

    /// Re-derives every claim a tree makes from the definitions alone.
    fn verify(&self, tree: PyRef<'_, PyTree>) -> PyResult<PyReport> {
        self.verify_file(&tree.file)
    }

    fn verify_json(&self, text: &str) -> PyResult<PyReport> {
        let file = lift(TreeFile::parse(text))?;
        self.verify_file(&file)
    }

    fn to_dot(&self, tree: Vec<u32>) -> PyResult<String> {
        let ids: Vec<SepId> = tree.into_iter().map(|i| self.sep(i)).collect::<PyResult<_>>()?;
        Ok(tree_to_dot(&self.inner, &ids))
    }
}

#[pymodule]
fn sepsys_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyUniverse>()?;
    m.add_class::<PyProfile>()?;
    m.add_class::<PyTree>()?;
    m.add_class::<PyReport>()?;
    Ok(())
}
