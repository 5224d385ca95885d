//! Python bindings: exact counts, example construction, family predicates,
//! the search oracles, and the lemma grids, exposed as the `qekr_py`
//! extension module. Counts come back as Python ints of arbitrary size.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qekr::counting::{self, ExampleId, Form, Params};
use qekr::families::{self, Anchors, Family, Psi};
use qekr::geometry::{AmbientSpace, SpaceKind};
use qekr::grid::GridSpec;
use qekr::lemmas::{self, LemmaId, Verdict};
use qekr::search::{self, Seeding};

fn err(e: qekr::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_space(s: &str) -> PyResult<SpaceKind> {
    match s.to_ascii_lowercase().as_str() {
        "pg" => Ok(SpaceKind::Pg),
        "ag" => Ok(SpaceKind::Ag),
        _ => Err(PyValueError::new_err(format!("unknown space kind: {s}"))),
    }
}

fn params(q: u32, n: i64, k: i64, t: i64, x: Option<i64>) -> Params {
    let mut p = Params::new(q, n, k, t);
    p.x = x;
    p
}

/// A canonical set of k-spaces in PG(n,q) or AG(n,q).
#[pyclass(name = "Family", frozen)]
struct PyFamily {
    inner: Family,
}

#[pymethods]
impl PyFamily {
    /// Basis matrices of the members, in canonical order.
    fn members(&self) -> Vec<Vec<Vec<u8>>> {
        self.inner
            .members
            .iter()
            .map(|m| m.basis.clone())
            .collect()
    }

    #[getter]
    fn space(&self) -> String {
        self.inner.space.kind.to_string()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.space.q()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.space.n
    }

    #[getter]
    fn k(&self) -> i64 {
        self.inner.k
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Family({}({},{}), k={}, members={})",
            self.inner.space.kind,
            self.inner.space.n,
            self.inner.space.q(),
            self.inner.k,
            self.inner.len()
        )
    }

    fn to_json(&self) -> String {
        families::family_to_json(&self.inner)
    }

    /// Every member pair meets in dimension >= t; returns (holds, witness).
    fn is_pairwise_t_intersecting(
        &self,
        t: i64,
    ) -> (bool, Option<(Vec<Vec<u8>>, Vec<Vec<u8>>)>) {
        let r = families::is_pairwise_t_intersecting(&self.inner, t);
        (
            r.holds,
            r.witness.map(|(a, b)| (a.basis.clone(), b.basis.clone())),
        )
    }

    /// No k-space extends the family; returns (holds, extension).
    fn is_maximal(&self, t: i64) -> PyResult<(bool, Option<Vec<Vec<u8>>>)> {
        let r = families::is_maximal(&self.inner, t).map_err(err)?;
        Ok((r.holds, r.extension.map(|e| e.basis.clone())))
    }

    /// Minimum cover dimension and the covers; psi is None when no cover
    /// exists up to max_dim.
    #[pyo3(signature = (t, max_dim=None))]
    fn cover_analysis(
        &self,
        t: i64,
        max_dim: Option<i64>,
    ) -> PyResult<(Option<i64>, Vec<Vec<Vec<u8>>>)> {
        let max_dim = max_dim.unwrap_or(self.inner.space.n as i64);
        let r = families::cover_analysis(&self.inner, t, max_dim).map_err(err)?;
        let psi = match r.psi {
            Psi::Found(d) => Some(d),
            Psi::NotFound(_) => None,
        };
        Ok((
            psi,
            r.covers.members.iter().map(|c| c.basis.clone()).collect(),
        ))
    }
}

#[pyfunction]
fn gaussian(n: i64, k: i64, q: u32) -> PyResult<BigInt> {
    counting::gaussian(n, k, q).map_err(err)
}

#[pyfunction]
fn theta(n: i64, q: u32) -> PyResult<BigInt> {
    counting::theta(n, q).map_err(err)
}

#[pyfunction]
fn count_disjoint(n: i64, m: i64, j: i64, q: u32) -> PyResult<BigInt> {
    counting::count_disjoint(n, m, j, q).map_err(err)
}

#[pyfunction]
fn size_pencil(q: u32, n: i64, k: i64, t: i64) -> PyResult<BigInt> {
    counting::size_pencil(Params::new(q, n, k, t)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (example, form, q, n, k, t))]
fn size_example(example: &str, form: &str, q: u32, n: i64, k: i64, t: i64) -> PyResult<BigInt> {
    let id: ExampleId = example.parse().map_err(err)?;
    let form: Form = form.parse().map_err(err)?;
    counting::size_example(id, form, Params::new(q, n, k, t)).map_err(err)
}

/// (value, branch): f_p or f_a with the example attaining it.
#[pyfunction]
fn hm_threshold(space: &str, q: u32, n: i64, k: i64, t: i64) -> PyResult<(BigInt, String)> {
    let kind = parse_space(space)?;
    let th = counting::hm_threshold(kind, Params::new(q, n, k, t)).map_err(err)?;
    Ok((th.value, th.branch.to_string()))
}

#[pyfunction]
fn make_example(example: &str, q: u32, n: i64, k: i64, t: i64) -> PyResult<PyFamily> {
    let id: ExampleId = example.parse().map_err(err)?;
    let space = AmbientSpace::new(id.space_kind(), n as usize, q).map_err(err)?;
    let fam = families::make_example(id, &space, Params::new(q, n, k, t), None).map_err(err)?;
    Ok(PyFamily { inner: fam })
}

/// The t-pencil of k-spaces through the canonical t-space.
#[pyfunction]
fn make_pencil(space: &str, q: u32, n: i64, k: i64, t: i64) -> PyResult<PyFamily> {
    let kind = parse_space(space)?;
    let ambient = AmbientSpace::new(kind, n as usize, q).map_err(err)?;
    let seed = match kind {
        SpaceKind::Pg => ExampleId::P1,
        SpaceKind::Ag => ExampleId::A1,
    };
    let Anchors::OneType { delta, .. } =
        families::canonical_anchors(seed, &ambient, Params::new(q, n, k, t))
    else {
        unreachable!()
    };
    let fam = families::make_pencil(&ambient, &delta, k).map_err(err)?;
    Ok(PyFamily { inner: fam })
}

#[pyfunction]
fn family_from_json(text: &str) -> PyResult<PyFamily> {
    Ok(PyFamily {
        inner: families::family_from_json(text).map_err(err)?,
    })
}

/// (size, optimal, family): the exact maximum t-intersecting family.
#[pyfunction]
#[pyo3(signature = (space, q, n, k, t, budget=None))]
fn max_clique(
    space: &str,
    q: u32,
    n: i64,
    k: i64,
    t: i64,
    budget: Option<u64>,
) -> PyResult<(usize, bool, PyFamily)> {
    let kind = parse_space(space)?;
    let ambient = AmbientSpace::new(kind, n as usize, q).map_err(err)?;
    let r = search::max_clique(&ambient, k, t, budget).map_err(err)?;
    Ok((r.size, r.optimal, PyFamily { inner: r.witness }))
}

/// Heuristic probe for large non-pencil maximal families; returns
/// (histogram, max_size, witnesses as (size, span_dim, matches) tuples).
#[pyfunction]
#[pyo3(signature = (space, q, n, k, t, seeds="pairs", budget=None))]
#[allow(clippy::type_complexity)]
fn second_largest_probe(
    space: &str,
    q: u32,
    n: i64,
    k: i64,
    t: i64,
    seeds: &str,
    budget: Option<u64>,
) -> PyResult<(
    std::collections::BTreeMap<usize, usize>,
    usize,
    Vec<(usize, i64, Option<String>)>,
)> {
    let kind = parse_space(space)?;
    let seeding: Seeding = seeds.parse().map_err(err)?;
    let ambient = AmbientSpace::new(kind, n as usize, q).map_err(err)?;
    let r = search::second_largest_probe(&ambient, k, t, seeding, budget).map_err(err)?;
    let witnesses = r
        .witnesses
        .iter()
        .map(|w| (w.size, w.span_dim, w.matches_example.map(|e| e.to_string())))
        .collect();
    Ok((r.histogram, r.max_size, witnesses))
}

fn verdict_dict<'py>(py: Python<'py>, v: &Verdict) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("lemma", v.lemma.to_string())?;
    d.set_item("check", v.check)?;
    d.set_item("q", v.params.q)?;
    d.set_item("n", v.params.n)?;
    d.set_item("k", v.params.k)?;
    d.set_item("t", v.params.t)?;
    d.set_item("x", v.params.x)?;
    d.set_item("j", v.params.j)?;
    d.set_item("lhs", (v.lhs.numer().clone(), v.lhs.denom().clone()))?;
    d.set_item("rhs", (v.rhs.numer().clone(), v.rhs.denom().clone()))?;
    d.set_item("relation", v.relation.to_string())?;
    d.set_item("holds", v.holds)?;
    Ok(d)
}

/// Evaluate one lemma at one parameter tuple; list of verdict dicts with
/// exact (numerator, denominator) sides.
#[pyfunction]
#[pyo3(signature = (lemma, q, n, k, t, x=None))]
fn check_lemma<'py>(
    py: Python<'py>,
    lemma: &str,
    q: u32,
    n: i64,
    k: i64,
    t: i64,
    x: Option<i64>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let id: LemmaId = lemma.parse().map_err(err)?;
    let verdicts = lemmas::check_lemma(id, params(q, n, k, t, x)).map_err(err)?;
    verdicts.iter().map(|v| verdict_dict(py, v)).collect()
}

/// Evaluate a lemma over a grid (its default grid when None); returns
/// (verdicts, summary dict).
#[pyfunction]
#[pyo3(signature = (lemma, grid=None))]
fn run_grid<'py>(
    py: Python<'py>,
    lemma: &str,
    grid: Option<&str>,
) -> PyResult<(Vec<Bound<'py, PyDict>>, Bound<'py, PyDict>)> {
    let id: LemmaId = lemma.parse().map_err(err)?;
    let spec = GridSpec::parse(grid.unwrap_or(lemmas::default_grid(id))).map_err(err)?;
    let (verdicts, summary) = lemmas::run_grid(id, &spec).map_err(err)?;
    let items: PyResult<Vec<_>> = verdicts.iter().map(|v| verdict_dict(py, v)).collect();
    let s = PyDict::new(py);
    s.set_item("tuples", summary.tuples)?;
    s.set_item("checks", summary.checks)?;
    s.set_item("passed", summary.passed)?;
    s.set_item("failed", summary.failed)?;
    Ok((items?, s))
}

#[pymodule]
fn qekr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFamily>()?;
    m.add_function(wrap_pyfunction!(gaussian, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(count_disjoint, m)?)?;
    m.add_function(wrap_pyfunction!(size_pencil, m)?)?;
    m.add_function(wrap_pyfunction!(size_example, m)?)?;
    m.add_function(wrap_pyfunction!(hm_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(make_example, m)?)?;
    m.add_function(wrap_pyfunction!(make_pencil, m)?)?;
    m.add_function(wrap_pyfunction!(family_from_json, m)?)?;
    m.add_function(wrap_pyfunction!(max_clique, m)?)?;
    m.add_function(wrap_pyfunction!(second_largest_probe, m)?)?;
    m.add_function(wrap_pyfunction!(check_lemma, m)?)?;
    m.add_function(wrap_pyfunction!(run_grid, m)?)?;
    Ok(())
}
