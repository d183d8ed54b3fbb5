//! Python bindings: weight laws, point processes, graph sampling, the main
//! estimators and the theory constants.

use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

use sfperc::estimators::{self as est, TruncationParams};
use sfperc::weights::SlowlyVarying;
use sfperc::{theory, validation};

fn err(e: sfperc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn topology(name: &str) -> PyResult<sfperc::Topology> {
    name.parse().map_err(err)
}

/// Pareto weight law, optionally with a logarithmic slowly varying factor.
#[pyclass(frozen, name = "WeightLaw", module = "sfperc")]
struct PyWeightLaw(sfperc::WeightLaw);

#[pymethods]
impl PyWeightLaw {
    #[staticmethod]
    fn pareto(tau: f64) -> PyResult<Self> {
        sfperc::WeightLaw::pareto(tau).map(Self).map_err(err)
    }

    /// Tail `c w^{-(τ-1)} ln(e + w)^a` above its infimum.
    #[staticmethod]
    #[pyo3(signature = (tau, c = 1.0, a = 0.0))]
    fn slowly_varying(tau: f64, c: f64, a: f64) -> PyResult<Self> {
        sfperc::WeightLaw::slowly_varying(tau, SlowlyVarying::LogPower { c, a }).map(Self).map_err(err)
    }

    #[getter]
    fn tau(&self) -> f64 {
        self.0.tau()
    }

    #[getter]
    fn infimum(&self) -> f64 {
        self.0.infimum()
    }

    fn tail(&self, w: f64) -> f64 {
        self.0.tail(w)
    }

    fn inverse_tail(&self, u: f64) -> f64 {
        self.0.inverse_tail(u)
    }

    fn fractional_moment(&self, s: f64) -> f64 {
        self.0.fractional_moment(s)
    }

    fn psi(&self, theta: f64) -> f64 {
        self.0.psi(theta)
    }

    fn sample(&self, count: usize, seed: u64) -> Vec<f64> {
        sfperc::sample_weights(&self.0, count, seed).values().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("WeightLaw({:?})", self.0.spec())
    }
}

#[pyclass(frozen, name = "Model", module = "sfperc")]
struct PyModel(sfperc::ModelParams);

#[pymethods]
impl PyModel {
    #[new]
    #[pyo3(signature = (d, alpha, law, intensity = 1.0))]
    fn new(d: usize, alpha: f64, law: &PyWeightLaw, intensity: f64) -> PyResult<Self> {
        sfperc::ModelParams::new(d, alpha, law.0, intensity).map(Self).map_err(err)
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma()
    }

    /// `"infinite_degree_a"`, `"infinite_degree_b"` or `"power_law"`.
    fn regime(&self) -> &'static str {
        match theory::classify_regime(&self.0).regime {
            theory::Regime::InfiniteDegreeA => "infinite_degree_a",
            theory::Regime::InfiniteDegreeB => "infinite_degree_b",
            theory::Regime::PowerLaw { .. } => "power_law",
        }
    }

    fn c0(&self) -> PyResult<f64> {
        theory::c0(&self.0).map_err(err)
    }

    fn c1(&self) -> PyResult<f64> {
        theory::c1(&self.0).map_err(err)
    }

    /// Expected degree of a vertex of weight `w` at the center of a box of side `side`.
    #[pyo3(signature = (side, w, topology = "torus"))]
    fn annealed_mean_degree(&self, side: f64, w: f64, topology: &str) -> PyResult<f64> {
        let g = sfperc::BoxGeometry::new(self.0.d, side, self::topology(topology)?).map_err(err)?;
        Ok(theory::annealed_mean_degree(&self.0, &g, w))
    }

    fn __repr__(&self) -> String {
        format!("Model(d={}, alpha={}, tau={}, intensity={})", self.0.d, self.0.alpha, self.0.tau(), self.0.intensity)
    }
}

#[pyclass(frozen, name = "PointSet", module = "sfperc")]
struct PyPointSet(sfperc::PointSet);

#[pymethods]
impl PyPointSet {
    #[new]
    #[pyo3(signature = (coords, side, topology = "torus", intensity = 1.0))]
    fn new(coords: Vec<Vec<f64>>, side: f64, topology: &str, intensity: f64) -> PyResult<Self> {
        let dim = coords.first().map_or(1, Vec::len);
        let g = sfperc::BoxGeometry::new(dim, side, self::topology(topology)?).map_err(err)?;
        if coords.iter().any(|x| x.len() != dim) {
            return Err(PyValueError::new_err("all points must have the same dimension"));
        }
        sfperc::PointSet::from_coords(g, coords.concat(), intensity, 0).map(Self).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn side(&self) -> f64 {
        self.0.geometry().side()
    }

    fn point(&self, i: usize) -> PyResult<Vec<f64>> {
        if i >= self.0.len() {
            return Err(PyIndexError::new_err(i));
        }
        Ok(self.0.point(i).to_vec())
    }

    fn coords(&self) -> Vec<Vec<f64>> {
        self.0.iter().map(<[f64]>::to_vec).collect()
    }

    fn to_jsonl(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        sfperc::io::write_points(&mut buf, &self.0, None).map_err(err)?;
        Ok(String::from_utf8(buf).expect("utf-8 output"))
    }
}

#[pyclass(frozen, get_all, name = "TailFit", module = "sfperc")]
struct PyTailFit {
    gamma_hat: f64,
    k: usize,
    stderr: f64,
    sample_size: usize,
}

#[pyclass(frozen, get_all, name = "PalmEstimate", module = "sfperc")]
struct PyPalmEstimate {
    estimate: f64,
    stderr: f64,
    replicas: usize,
    ci95: (f64, f64),
}

#[pyclass(frozen, name = "Graph", module = "sfperc")]
struct PyGraph(sfperc::WeightedGraph);

impl PyGraph {
    fn vertex(&self, i: usize) -> PyResult<usize> {
        if i < self.0.len() {
            Ok(i)
        } else {
            Err(PyIndexError::new_err(i))
        }
    }
}

#[pymethods]
impl PyGraph {
    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn degrees(&self) -> Vec<usize> {
        self.0.degrees()
    }

    fn neighbors(&self, i: usize) -> PyResult<Vec<u32>> {
        Ok(self.0.neighbors(self.vertex(i)?).to_vec())
    }

    fn has_edge(&self, i: usize, j: usize) -> PyResult<bool> {
        Ok(self.0.has_edge(self.vertex(i)?, self.vertex(j)?))
    }

    /// Edge list with `i < j`.
    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().collect()
    }

    fn weights(&self) -> Vec<f64> {
        self.0.weights().values().to_vec()
    }

    fn triangle_counts(&self) -> Vec<u64> {
        est::triangle_counts(&self.0)
    }

    fn local_cc(&self, i: usize) -> PyResult<f64> {
        Ok(est::local_cc(&self.0, self.vertex(i)?))
    }

    /// Mean local clustering over the centered box of side `n` (default: whole box).
    #[pyo3(signature = (n = None))]
    fn averaged_cc(&self, n: Option<f64>) -> f64 {
        est::averaged_cc(&self.0, n.unwrap_or(self.0.points().geometry().side()))
    }

    fn truncated_cc(&self, m: f64, delta: f64) -> PyResult<f64> {
        let t = TruncationParams::new(m, delta).map_err(err)?;
        est::truncated_cc(&self.0, &t).map_err(err)
    }

    /// Component label of every vertex: the smallest index in its component.
    fn components(&self) -> Vec<usize> {
        est::connected_components(&self.0).labels
    }

    fn bfs_distance(&self, i: usize, j: usize) -> PyResult<Option<usize>> {
        Ok(est::bfs_distance(&self.0, self.vertex(i)?, self.vertex(j)?))
    }

    fn to_jsonl(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        sfperc::io::write_graph(&mut buf, &self.0).map_err(err)?;
        Ok(String::from_utf8(buf).expect("utf-8 output"))
    }

    #[staticmethod]
    fn from_jsonl(text: &str) -> PyResult<Self> {
        sfperc::io::read_graph(text.as_bytes()).map(Self).map_err(err)
    }
}

/// Homogeneous Poisson points in a box of side `side` centered at the origin.
#[pyfunction]
#[pyo3(signature = (dim, side, intensity, seed, topology = "torus"))]
fn sample_points(dim: usize, side: f64, intensity: f64, seed: u64, topology: &str) -> PyResult<PyPointSet> {
    let g = sfperc::BoxGeometry::new(dim, side, self::topology(topology)?).map_err(err)?;
    sfperc::sample_ppp(g, intensity, seed).map(PyPointSet).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (points, weights, model, seed, engine = "cell"))]
fn build_graph(points: &PyPointSet, weights: Vec<f64>, model: &PyModel, seed: u64, engine: &str) -> PyResult<PyGraph> {
    let wv = sfperc::WeightVector::from_values(weights, 0).map_err(err)?;
    let engine = engine.parse().map_err(err)?;
    sfperc::build_graph(&points.0, &wv, &model.0, seed, engine).map(PyGraph).map_err(err)
}

/// Samples points, weights and edges from one master seed.
#[pyfunction]
#[pyo3(signature = (model, side, seed, topology = "torus"))]
fn sample_graph(model: &PyModel, side: f64, seed: u64, topology: &str) -> PyResult<PyGraph> {
    let g = sfperc::BoxGeometry::new(model.0.d, side, self::topology(topology)?).map_err(err)?;
    let derive = |stage| sfperc::rng::derive_seed(seed, stage, 0);
    let ps = sfperc::sample_ppp(g, model.0.intensity, derive("points")).map_err(err)?;
    let wv = sfperc::sample_weights(&model.0.law, ps.len(), derive("weights"));
    sfperc::build_graph_cell(&ps, &wv, &model.0, derive("edges")).map(PyGraph).map_err(err)
}

#[pyfunction]
fn edge_prob(w_x: f64, w_y: f64, r: f64, alpha: f64) -> f64 {
    sfperc::edge_prob(w_x, w_y, r, alpha)
}

#[pyfunction]
#[pyo3(signature = (degrees, k = None))]
fn hill_gamma(degrees: Vec<usize>, k: Option<usize>) -> PyResult<PyTailFit> {
    let k = k.unwrap_or_else(|| est::degrees::default_k(degrees.len()));
    let f = est::hill_gamma(&degrees, k).map_err(err)?;
    Ok(PyTailFit { gamma_hat: f.gamma_hat, k: f.k, stderr: f.stderr, sample_size: f.sample_size })
}

#[pyfunction]
#[pyo3(signature = (model, side, replicas, seed, topology = "torus"))]
fn palm_cc_estimate(model: &PyModel, side: f64, replicas: usize, seed: u64, topology: &str) -> PyResult<PyPalmEstimate> {
    let g = sfperc::BoxGeometry::new(model.0.d, side, self::topology(topology)?).map_err(err)?;
    let e = est::palm_cc_estimate(&model.0, &g, replicas, seed).map_err(err)?;
    Ok(PyPalmEstimate { estimate: e.estimate, stderr: e.stderr, replicas: e.replicas, ci95: e.ci95() })
}

/// Runs the quick validation gate; returns `(id, title, passed, summary)` rows.
#[pyfunction]
#[pyo3(signature = (seed = 1))]
fn validate_fast(py: Python<'_>, seed: u64) -> Vec<(u32, String, bool, String)> {
    let outcomes = py.detach(|| validation::fast_suite(seed, false));
    outcomes.into_iter().map(|o| (o.id, o.title.clone(), o.passed(), o.summary())).collect()
}

#[pymodule(name = "sfperc")]
fn sfperc_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWeightLaw>()?;
    m.add_class::<PyModel>()?;
    m.add_class::<PyPointSet>()?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyTailFit>()?;
    m.add_class::<PyPalmEstimate>()?;
    m.add_function(wrap_pyfunction!(sample_points, m)?)?;
    m.add_function(wrap_pyfunction!(build_graph, m)?)?;
    m.add_function(wrap_pyfunction!(sample_graph, m)?)?;
    m.add_function(wrap_pyfunction!(edge_prob, m)?)?;
    m.add_function(wrap_pyfunction!(hill_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(palm_cc_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(validate_fast, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
