//! Python bindings. Structured results (reports, verdicts, tables) come back
//! as plain dicts and lists decoded from the same JSON the CLI prints.
#![allow(clippy::useless_conversion)]

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use cwres::cli::run_args;
use cwres::construction::check_all_filtration_squares;
use cwres::io::{ComplexFile, CwFile};
use cwres::monomial::{
    cw_lattice_report, gpw_betti, homogenize_cellular, homogenize_d, is_lattice_linear, is_minimal,
    is_resolution, lyubeznik_complex, scarf_complex, taylor_complex, MultigradedComplex,
};
use cwres::{
    cellular_chain_complex, compare_complexes, d_construction, fixtures, incidence_numbers,
    lcm_lattice, sign_equivalence, ChainComplexOverField, CoverStrategy, DSequence, FieldConfig,
    FieldMatrix, MonomialIdeal, Poset, RegularCWComplex,
};

create_exception!(cwres_py, CwresError, PyException);

fn err(e: cwres::Error) -> PyErr {
    CwresError::new_err(format!("{}: {e}", e.kind()))
}

fn field(name: &str) -> PyResult<FieldConfig> {
    FieldConfig::parse(name).map_err(err)
}

fn strategy(name: &str) -> PyResult<CoverStrategy> {
    match name {
        "smallest-id" => Ok(CoverStrategy::SmallestId),
        "largest-id" => Ok(CoverStrategy::LargestId),
        other => Err(CwresError::new_err(format!("unknown strategy {other:?}"))),
    }
}

fn to_py(py: Python<'_>, value: &impl Serialize) -> PyResult<PyObject> {
    let text = serde_json::to_string(value).map_err(|e| CwresError::new_err(e.to_string()))?;
    Ok(py
        .import_bound("json")?
        .call_method1("loads", (text,))?
        .unbind())
}

fn from_py<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = obj
        .py()
        .import_bound("json")?
        .call_method1("dumps", (obj,))?
        .extract()?;
    serde_json::from_str(&text).map_err(|e| CwresError::new_err(format!("Json: {e}")))
}

fn matrix_rows(m: &FieldMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|s| s.to_string()).collect())
        .collect()
}

#[pyclass(name = "Poset", module = "cwres_py")]
#[derive(Clone)]
struct PyPoset {
    inner: Poset,
}

#[pymethods]
impl PyPoset {
    #[new]
    #[pyo3(signature = (elements, covers, labels = None))]
    fn new(
        elements: Vec<String>,
        covers: &Bound<'_, PyAny>,
        labels: Option<BTreeMap<String, String>>,
    ) -> PyResult<Self> {
        let covers: Vec<(String, String)> = from_py(covers)?;
        let labels = labels.unwrap_or_default().into_iter().collect();
        Ok(PyPoset {
            inner: Poset::build_labeled(&elements, &covers, &labels).map_err(err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Poset({} elements, {} covers)",
            self.inner.len(),
            self.inner.covers().len()
        )
    }

    fn elements(&self) -> Vec<String> {
        self.inner.ids().to_vec()
    }

    fn covers(&self) -> Vec<(String, String)> {
        let p = &self.inner;
        p.covers()
            .iter()
            .map(|&(a, b)| (p.id(a).to_string(), p.id(b).to_string()))
            .collect()
    }

    fn leq(&self, a: &str, b: &str) -> PyResult<bool> {
        Ok(self.inner.leq(
            self.inner.index_of(a).map_err(err)?,
            self.inner.index_of(b).map_err(err)?,
        ))
    }

    /// Facets of the order complex, as lists of element ids.
    fn order_complex(&self) -> Vec<Vec<String>> {
        let k = self.inner.order_complex();
        ComplexFile::from_complex(&k)
            .facets
            .iter()
            .map(|f| f.iter().map(|v| v.to_string()).collect())
            .collect()
    }

    #[pyo3(signature = (field = "q"))]
    fn is_cw_poset(&self, py: Python<'_>, field: &str) -> PyResult<PyObject> {
        to_py(py, &self.inner.is_cw_poset(self::field(field)?))
    }

    #[pyo3(signature = (field = "q", strategy = "smallest-id"))]
    fn d_construction(&self, field: &str, strategy: &str) -> PyResult<PyDSequence> {
        let d = d_construction(&self.inner, self::field(field)?, self::strategy(strategy)?)
            .map_err(err)?;
        Ok(PyDSequence {
            inner: d,
            poset: self.inner.clone(),
        })
    }
}

#[pyclass(name = "ChainComplex", module = "cwres_py")]
#[derive(Clone)]
struct PyChainComplex {
    inner: ChainComplexOverField,
}

#[pymethods]
impl PyChainComplex {
    #[getter]
    fn lo(&self) -> i32 {
        self.inner.lo()
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    fn labels(&self, degree: i32) -> Vec<String> {
        self.inner.labels(degree).to_vec()
    }

    /// The map out of `degree`, as rows of `"p/q"` strings.
    fn differential(&self, degree: i32) -> Vec<Vec<String>> {
        matrix_rows(&self.inner.diff(degree))
    }

    fn is_complex(&self) -> bool {
        self.inner.is_complex()
    }

    /// Betti numbers by degree.
    fn homology(&self) -> PyResult<BTreeMap<i32, usize>> {
        Ok(self
            .inner
            .homology()
            .map_err(err)?
            .betti_numbers()
            .into_iter()
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "ChainComplex(lo={}, dims={:?})",
            self.inner.lo(),
            self.inner.dims()
        )
    }
}

#[pyclass(name = "DSequence", module = "cwres_py")]
struct PyDSequence {
    inner: DSequence,
    poset: Poset,
}

#[pymethods]
impl PyDSequence {
    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims()
    }

    #[getter]
    fn is_complex(&self) -> bool {
        self.inner.is_complex
    }

    #[getter]
    fn complex(&self) -> PyChainComplex {
        PyChainComplex {
            inner: self.inner.complex.clone(),
        }
    }

    fn phi(&self, i: usize) -> PyResult<Vec<Vec<String>>> {
        if i == 0 || i > self.inner.max_degree() {
            return Err(CwresError::new_err(format!("phi_{i} is not defined")));
        }
        Ok(matrix_rows(&self.inner.phi(i)))
    }

    /// Checks every filtration square; returns the list of per-square results.
    fn check_filtration(&self, py: Python<'_>) -> PyResult<PyObject> {
        to_py(
            py,
            &check_all_filtration_squares(&self.poset, &self.inner).map_err(err)?,
        )
    }
}

#[pyclass(name = "CWComplex", module = "cwres_py")]
#[derive(Clone)]
struct PyCwComplex {
    inner: RegularCWComplex,
}

#[pymethods]
impl PyCwComplex {
    /// `cells` is a list of `{"id", "dim", "facets", "mdeg"?}` dicts.
    #[new]
    #[pyo3(signature = (cells, field = "q"))]
    fn new(cells: &Bound<'_, PyAny>, field: &str) -> PyResult<Self> {
        let file = CwFile {
            cells: from_py(cells)?,
        };
        Ok(PyCwComplex {
            inner: file.build(self::field(field)?).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_simplicial(facets: &Bound<'_, PyAny>) -> PyResult<Self> {
        let file = ComplexFile {
            facets: from_py(facets)?,
        };
        Ok(PyCwComplex {
            inner: RegularCWComplex::from_simplicial(&file.build()),
        })
    }

    #[staticmethod]
    #[pyo3(signature = (poset, field = "q"))]
    fn from_face_poset(poset: &PyPoset, field: &str) -> PyResult<Self> {
        Ok(PyCwComplex {
            inner: RegularCWComplex::from_face_poset(&poset.inner, self::field(field)?)
                .map_err(err)?,
        })
    }

    /// The triangle and square glued along two edges.
    #[staticmethod]
    fn triangle_square() -> Self {
        PyCwComplex {
            inner: fixtures::triangle_square_cw(),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("CWComplex(f_vector={:?})", self.inner.f_vector())
    }

    fn f_vector(&self) -> Vec<usize> {
        self.inner.f_vector()
    }

    fn cells(&self, py: Python<'_>) -> PyResult<PyObject> {
        to_py(py, &self.inner.to_specs())
    }

    fn face_poset(&self) -> PyPoset {
        PyPoset {
            inner: self.inner.poset().clone(),
        }
    }

    #[pyo3(signature = (field = "q"))]
    fn chain_complex(&self, field: &str) -> PyResult<PyChainComplex> {
        Ok(PyChainComplex {
            inner: cellular_chain_complex(&self.inner, self::field(field)?).map_err(err)?,
        })
    }

    /// `{(sigma, tau): c}` over facet pairs.
    #[pyo3(signature = (field = "q"))]
    fn incidence_numbers(&self, field: &str) -> PyResult<BTreeMap<(String, String), i8>> {
        let inc = incidence_numbers(&self.inner, self::field(field)?).map_err(err)?;
        let id = |i: usize| self.inner.cell(i).id.clone();
        Ok(inc
            .entries()
            .map(|((s, t), c)| ((id(s), id(t)), c))
            .collect())
    }

    /// Compares `C(X)` with `D(P_X)` one degree up.
    #[pyo3(signature = (field = "q"))]
    fn compare(&self, py: Python<'_>, field: &str) -> PyResult<PyObject> {
        let field = self::field(field)?;
        let c = cellular_chain_complex(&self.inner, field).map_err(err)?;
        let d =
            d_construction(self.inner.poset(), field, CoverStrategy::SmallestId).map_err(err)?;
        let cmp = compare_complexes(&c, &d.complex, 1);
        let value = serde_json::json!({
            "isomorphic": cmp.isomorphic,
            "dims": c.dims(),
            "sign_equivalent": sign_equivalence(&c, &d.complex, 1).is_some(),
        });
        to_py(py, &value)
    }

    #[pyo3(signature = (field = "q"))]
    fn homogenize(&self, field: &str) -> PyResult<PyResolution> {
        Ok(PyResolution {
            inner: homogenize_cellular(&self.inner, self::field(field)?).map_err(err)?,
        })
    }

    /// `F(η)` built from `D` of the face poset with the cell labels as grading.
    #[pyo3(signature = (field = "q"))]
    fn homogenize_poset(&self, field: &str) -> PyResult<PyResolution> {
        let p = self.inner.poset();
        let d = d_construction(p, self::field(field)?, CoverStrategy::SmallestId).map_err(err)?;
        let eta = self.inner.multidegrees().map_err(err)?;
        Ok(PyResolution {
            inner: homogenize_d(p, &d, &eta).map_err(err)?,
        })
    }
}

#[pyclass(name = "MonomialIdeal", module = "cwres_py")]
#[derive(Clone)]
struct PyMonomialIdeal {
    inner: MonomialIdeal,
}

#[pymethods]
impl PyMonomialIdeal {
    /// Generators as exponent vectors; non-minimal ones are dropped.
    #[new]
    fn new(generators: Vec<Vec<u32>>) -> PyResult<Self> {
        let nvars = generators.first().map_or(0, Vec::len);
        Ok(PyMonomialIdeal {
            inner: MonomialIdeal::from_exponents(nvars, &generators).map_err(err)?,
        })
    }

    fn generators(&self) -> Vec<Vec<u32>> {
        self.inner
            .generators()
            .iter()
            .map(|g| g.exponents().to_vec())
            .collect()
    }

    fn __repr__(&self) -> String {
        let gens: Vec<String> = self
            .inner
            .generators()
            .iter()
            .map(|g| g.to_string())
            .collect();
        format!("MonomialIdeal({})", gens.join(", "))
    }

    /// The lcm-lattice and the exponent vector of each element.
    fn lcm_lattice(&self) -> (PyPoset, Vec<Vec<u32>>) {
        let l = lcm_lattice(&self.inner);
        (
            PyPoset { inner: l.poset },
            l.monomials.iter().map(|m| m.exponents().to_vec()).collect(),
        )
    }

    #[pyo3(signature = (field = "q"))]
    fn betti(&self, py: Python<'_>, field: &str) -> PyResult<PyObject> {
        to_py(
            py,
            &gpw_betti(&self.inner, self::field(field)?).map_err(err)?,
        )
    }

    fn taylor(&self) -> PyCwComplex {
        PyCwComplex {
            inner: taylor_complex(&self.inner),
        }
    }

    fn scarf(&self) -> PyCwComplex {
        PyCwComplex {
            inner: scarf_complex(&self.inner),
        }
    }

    #[pyo3(signature = (order = None))]
    fn lyubeznik(&self, order: Option<Vec<usize>>) -> PyResult<PyCwComplex> {
        Ok(PyCwComplex {
            inner: lyubeznik_complex(&self.inner, order.as_deref()).map_err(err)?,
        })
    }

    /// `F(η)` on the lcm-lattice graded by its own monomials.
    #[pyo3(signature = (field = "q"))]
    fn poset_resolution(&self, field: &str) -> PyResult<PyResolution> {
        let l = lcm_lattice(&self.inner);
        let d = d_construction(&l.poset, self::field(field)?, CoverStrategy::SmallestId)
            .map_err(err)?;
        Ok(PyResolution {
            inner: homogenize_d(&l.poset, &d, &l.monomials).map_err(err)?,
        })
    }

    #[pyo3(signature = (field = "q"))]
    fn cw_lattice_report(&self, py: Python<'_>, field: &str) -> PyResult<PyObject> {
        to_py(
            py,
            &cw_lattice_report(&self.inner, self::field(field)?).map_err(err)?,
        )
    }
}

#[pyclass(name = "Resolution", module = "cwres_py")]
#[derive(Clone)]
struct PyResolution {
    inner: MultigradedComplex,
}

#[pymethods]
impl PyResolution {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let export =
            serde_json::from_str(text).map_err(|e| CwresError::new_err(format!("Json: {e}")))?;
        Ok(PyResolution {
            inner: MultigradedComplex::from_export(&export).map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_export())
            .map_err(|e| CwresError::new_err(e.to_string()))
    }

    fn ranks(&self) -> Vec<usize> {
        self.inner.ranks()
    }

    fn multidegrees(&self, i: usize) -> Vec<Vec<u32>> {
        self.inner
            .multidegrees(i)
            .iter()
            .map(|m| m.exponents().to_vec())
            .collect()
    }

    /// Nonzero entries of the map out of degree `i`.
    fn entries(&self, py: Python<'_>, i: usize) -> PyResult<PyObject> {
        to_py(py, &self.inner.entries(i))
    }

    fn frame(&self) -> PyChainComplex {
        PyChainComplex {
            inner: self.inner.frame().clone(),
        }
    }

    fn is_resolution(&self, py: Python<'_>, ideal: &PyMonomialIdeal) -> PyResult<PyObject> {
        to_py(py, &is_resolution(&self.inner, &ideal.inner).map_err(err)?)
    }

    fn is_minimal(&self) -> bool {
        is_minimal(&self.inner)
    }

    fn is_lattice_linear(&self, py: Python<'_>, ideal: &PyMonomialIdeal) -> PyResult<PyObject> {
        to_py(py, &is_lattice_linear(&self.inner, &ideal.inner))
    }

    fn __repr__(&self) -> String {
        format!("Resolution(ranks={:?})", self.inner.ranks())
    }
}

/// Runs a `cwres` command line; returns the JSON report and the exit code.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (String, i32) {
    run_args(std::iter::once("cwres".to_string()).chain(args))
}

#[pymodule]
fn cwres_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CwresError", m.py().get_type_bound::<CwresError>())?;
    m.add_class::<PyPoset>()?;
    m.add_class::<PyChainComplex>()?;
    m.add_class::<PyDSequence>()?;
    m.add_class::<PyCwComplex>()?;
    m.add_class::<PyMonomialIdeal>()?;
    m.add_class::<PyResolution>()?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
