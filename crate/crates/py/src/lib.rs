//! Python bindings: permutations, groups, wreath towers, coset tables,
//! prime scans, the primitivity oracle and splitting certificates.
//! Exact rationals are returned as `"p/q"` strings, which
//! `fractions.Fraction` accepts.

use std::collections::BTreeMap;

use arboreal::dynamics::{self, DynamicalSystem, FpPoly, DEFAULT_BIT_CAP};
use arboreal::rational::{parse_rational, ratio_string};
use arboreal::ramification::{self, OracleMode};
use arboreal::splitting::{self, KernelKind, SplittingCertificate};
use arboreal::stats::{self, CountDistribution, Mode};
use arboreal::wreath::{self, WreathTower};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn big_int(py: Python<'_>, digits: String) -> PyResult<Py<PyAny>> {
    Ok(py.import("builtins")?.getattr("int")?.call1((digits,))?.unbind())
}

fn law(d: &CountDistribution) -> BTreeMap<usize, String> {
    d.probs.iter().map(|(&k, p)| (k, ratio_string(p))).collect()
}

#[pyclass(name = "Perm", module = "arboreal", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPerm(arboreal::Perm);

#[pymethods]
impl PyPerm {
    /// From the image list `[p(0), p(1), ...]`.
    #[new]
    fn new(images: Vec<usize>) -> PyResult<Self> {
        arboreal::Perm::from_images(images).map(PyPerm).map_err(err)
    }

    /// From cycle notation such as `"(0 1 2)(3 4)"`.
    #[staticmethod]
    fn parse(s: &str, degree: usize) -> PyResult<Self> {
        arboreal::Perm::parse(s, degree).map(PyPerm).map_err(err)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn images(&self) -> Vec<usize> {
        self.0.images().to_vec()
    }

    fn __call__(&self, x: usize) -> PyResult<usize> {
        if x >= self.0.degree() {
            return Err(err(format!("point {x} outside degree {}", self.0.degree())));
        }
        Ok(self.0.apply(x))
    }

    /// `self ∘ other`: `other` acts first.
    fn compose(&self, other: &PyPerm) -> PyResult<Self> {
        self.0.compose(&other.0).map(PyPerm).map_err(err)
    }

    fn __mul__(&self, other: &PyPerm) -> PyResult<Self> {
        self.compose(other)
    }

    fn inverse(&self) -> Self {
        PyPerm(self.0.inverse())
    }

    /// `self ∘ other ∘ self⁻¹`.
    fn conjugate(&self, other: &PyPerm) -> Self {
        PyPerm(self.0.conjugate(&other.0))
    }

    fn cycle_type(&self) -> Vec<usize> {
        self.0.cycle_type().parts().to_vec()
    }

    fn cycles(&self) -> Vec<Vec<usize>> {
        self.0.cycles()
    }

    fn fixed_points(&self) -> usize {
        self.0.fixed_points()
    }

    fn order(&self) -> u64 {
        self.0.order()
    }

    fn is_even(&self) -> bool {
        self.0.is_even()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Perm({:?})", self.0.images())
    }
}

#[pyclass(name = "PermGroup", module = "arboreal", frozen, from_py_object)]
#[derive(Clone)]
struct PyPermGroup(arboreal::PermGroup);

#[pymethods]
impl PyPermGroup {
    #[new]
    fn new(degree: usize, generators: Vec<PyPerm>) -> PyResult<Self> {
        arboreal::PermGroup::new(degree, generators.into_iter().map(|p| p.0).collect())
            .map(PyPermGroup)
            .map_err(err)
    }

    #[staticmethod]
    fn symmetric(n: usize) -> Self {
        PyPermGroup(arboreal::PermGroup::symmetric(n))
    }

    #[staticmethod]
    fn alternating(n: usize) -> Self {
        PyPermGroup(arboreal::PermGroup::alternating(n))
    }

    /// A catalog name, `S<n>` or `A<n>`, with its socle.
    #[staticmethod]
    fn catalog(name: &str) -> PyResult<(Self, Self)> {
        let catalog = arboreal::catalog::Catalog::from_env().map_err(err)?;
        let (g, s) = catalog.group_and_socle(name).map_err(err)?;
        Ok((PyPermGroup(g), PyPermGroup(s)))
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn generators(&self) -> Vec<PyPerm> {
        self.0.generators().iter().cloned().map(PyPerm).collect()
    }

    fn order(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        big_int(py, self.0.order().to_string())
    }

    fn __contains__(&self, p: &PyPerm) -> bool {
        self.0.contains(&p.0)
    }

    fn is_transitive(&self) -> bool {
        self.0.is_transitive()
    }

    fn is_primitive(&self) -> PyResult<bool> {
        self.0.is_primitive().map_err(err)
    }

    fn orbits(&self) -> Vec<Vec<usize>> {
        self.0.orbits()
    }

    fn is_subgroup_of(&self, other: &PyPermGroup) -> bool {
        self.0.is_subgroup_of(&other.0)
    }
}

#[pyclass(name = "WreathTower", module = "arboreal", frozen)]
struct PyWreathTower(WreathTower);

#[pymethods]
impl PyWreathTower {
    /// Such as `"S2^3"` or `"A5*A5"`, outermost level first.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        WreathTower::parse(spec).map(PyWreathTower).map_err(err)
    }

    #[getter]
    fn depth(&self) -> usize {
        self.0.depth()
    }

    fn degrees(&self) -> Vec<usize> {
        self.0.degrees()
    }

    fn leaf_count(&self) -> PyResult<usize> {
        self.0.leaf_count().map_err(err)
    }

    fn order(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        big_int(py, self.0.order().to_string())
    }

    fn group(&self) -> PyResult<PyPermGroup> {
        self.0.tower_group().map(PyPermGroup).map_err(err)
    }

    fn random_element(&self, seed: u64) -> PyResult<PyPerm> {
        wreath::uniform_element(&self.0, seed).map(PyPerm).map_err(err)
    }

    /// Exact law of the number of fixed leaves.
    fn fixed_point_distribution(&self) -> PyResult<BTreeMap<usize, String>> {
        stats::fixed_point_distribution(&self.0).map(|d| law(&d)).map_err(err)
    }

    /// Law of the number of cycles on the leaves; sampled when `samples` is given.
    #[pyo3(signature = (samples=None, seed=0))]
    fn cycle_count_distribution(&self, samples: Option<u64>, seed: u64) -> PyResult<BTreeMap<usize, String>> {
        let mode = samples.map_or(Mode::Exact, |samples| Mode::MonteCarlo { samples, seed });
        stats::cycle_count_distribution(&self.0, mode).map(|d| law(&d)).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Fixed-point-free proportion of each coset of `normal`, and their minimum.
#[pyfunction]
fn coset_fpf(group: &PyPermGroup, normal: &PyPermGroup) -> PyResult<(String, Vec<(String, String)>)> {
    let t = stats::coset_fpf_table(&group.0, &normal.0).map_err(err)?;
    let rows = t.rows.iter().map(|r| (r.label.clone(), ratio_string(&r.fpf))).collect();
    Ok((ratio_string(&t.alpha), rows))
}

/// Derangement proportions of the even and odd cosets of `A_n` in `S_n`.
#[pyfunction]
fn olds(n: usize) -> PyResult<(String, String)> {
    let (even, odd) = stats::olds_coset_formula(n).map_err(err)?;
    Ok((ratio_string(&even), ratio_string(&odd)))
}

/// The binomial tail and its closed-form bound, for `gamma` such as `"3/4"`.
#[pyfunction]
fn few_cycles_bound(n: u32, g: u32, gamma: &str) -> PyResult<(String, String)> {
    let gamma = parse_rational(gamma).map_err(err)?;
    let b = stats::few_cycles_bound(n, g, &gamma).map_err(err)?;
    Ok((ratio_string(&b.sum), ratio_string(&b.bound)))
}

/// Number of distinct monic irreducible factors over `F_p`, lowest coefficient first.
#[pyfunction]
fn factor_count_mod_p(coeffs: Vec<u64>, p: u64) -> PyResult<usize> {
    dynamics::factor_count_mod_p(&FpPoly::new(p, coeffs)).map_err(err)
}

/// The orbit points `a0, f(a0), …, f^n(a0)`.
#[pyfunction]
#[pyo3(signature = (f, a0, n, a="0"))]
fn orbit(f: &str, a0: &str, n: usize, a: &str) -> PyResult<Vec<String>> {
    let sys = DynamicalSystem::parse(f, a, a0).map_err(err)?;
    let points = dynamics::orbit(&sys, n, DEFAULT_BIT_CAP).map_err(err)?;
    Ok(points.iter().map(ratio_string).collect())
}

/// Least-hit scan over primes in `[lo, hi]`, as the report JSON.
#[pyfunction]
fn scan_hits(f: &str, a: &str, a0: &str, lo: u64, hi: u64) -> PyResult<String> {
    let sys = DynamicalSystem::parse(f, a, a0).map_err(err)?;
    dynamics::hit_scan(&sys, lo, hi).map(|r| r.to_json()).map_err(err)
}

/// The permutation joining the cycles of `sigma` into one long cycle.
#[pyfunction]
fn shabat_tau(sigma: &PyPerm) -> PyPerm {
    PyPerm(ramification::shabat_tau(&sigma.0))
}

/// Verdict JSON for all triples of the `(d, r, s, t)` family; sampled when `samples` is given.
#[pyfunction]
#[pyo3(signature = (d, r, s, t, samples=None, seed=0))]
fn triple_primitivity_oracle(d: usize, r: usize, s: usize, t: usize, samples: Option<u64>, seed: u64) -> PyResult<String> {
    let mode = samples.map_or(OracleMode::Exhaustive, |samples| OracleMode::Sampled { samples, seed });
    let v = ramification::triple_primitivity_oracle(d, r, s, t, mode).map_err(err)?;
    serde_json::to_string(&v).map_err(err)
}

/// Certificate JSON for kernel `trivial`, `diagonal`, `augmentation` or `full`.
#[pyfunction]
fn splitting_certificate(d: usize, kernel: &str) -> PyResult<String> {
    let kind = KernelKind::parse(kernel).map_err(err)?;
    let cert = splitting::splitting_certificate(d, kind).map_err(err)?;
    serde_json::to_string(&cert).map_err(err)
}

#[pyfunction]
fn verify_certificate(json: &str) -> PyResult<bool> {
    let cert: SplittingCertificate = serde_json::from_str(json).map_err(err)?;
    splitting::verify_certificate(&cert).map_err(err)
}

#[pymodule]
#[pyo3(name = "arboreal")]
fn arboreal_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPerm>()?;
    m.add_class::<PyPermGroup>()?;
    m.add_class::<PyWreathTower>()?;
    m.add_function(wrap_pyfunction!(coset_fpf, m)?)?;
    m.add_function(wrap_pyfunction!(olds, m)?)?;
    m.add_function(wrap_pyfunction!(few_cycles_bound, m)?)?;
    m.add_function(wrap_pyfunction!(factor_count_mod_p, m)?)?;
    m.add_function(wrap_pyfunction!(orbit, m)?)?;
    m.add_function(wrap_pyfunction!(scan_hits, m)?)?;
    m.add_function(wrap_pyfunction!(shabat_tau, m)?)?;
    m.add_function(wrap_pyfunction!(triple_primitivity_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(splitting_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    Ok(())
}
