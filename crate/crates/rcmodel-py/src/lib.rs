//! Python bindings for the random-cluster toolkit: regions, events, exact
//! enumeration, and seeded Monte Carlo estimates.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use rcmodel as rc;

fn to_py(e: rc::Error) -> PyErr {
    match e {
        rc::Error::Config(_)
        | rc::Error::Geometry(_)
        | rc::Error::Params(_)
        | rc::Error::Schedule(_)
        | rc::Error::Event(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn parse_bc(s: &str) -> PyResult<rc::Bc> {
    s.parse::<rc::Bc>().map_err(to_py)
}

fn parse_algorithm(s: &str) -> PyResult<rc::Algorithm> {
    match s {
        "auto" => Ok(rc::Algorithm::Auto),
        "heatbath" => Ok(rc::Algorithm::HeatBath),
        "sw" => Ok(rc::Algorithm::SwendsenWang),
        other => Err(PyValueError::new_err(format!(
            "unknown algorithm {other:?}; expected auto, heatbath, or sw"
        ))),
    }
}

fn config_from_bools(open: &[bool], r: &rc::Region) -> PyResult<rc::Configuration> {
    if open.len() != r.n_edges() {
        return Err(PyValueError::new_err(format!(
            "open has {} entries, region has {} edges",
            open.len(),
            r.n_edges()
        )));
    }
    Ok(rc::Configuration::from_bools(open))
}

/// A finite rectangular sublattice of the square lattice.
#[pyclass(frozen, eq, module = "rcmodel_py")]
#[derive(PartialEq)]
struct Region {
    inner: rc::Region,
}

#[pymethods]
impl Region {
    #[new]
    fn new(x_min: i32, x_max: i32, y_min: i32, y_max: i32) -> PyResult<Self> {
        rc::Region::new(x_min, x_max, y_min, y_max)
            .map(|inner| Region { inner })
            .map_err(to_py)
    }

    /// The box [-a,a] x [-b,b].
    #[staticmethod]
    fn centered(a: i32, b: i32) -> PyResult<Self> {
        rc::Region::centered(a, b).map(|inner| Region { inner }).map_err(to_py)
    }

    #[getter]
    fn x_min(&self) -> i32 {
        self.inner.x_min()
    }

    #[getter]
    fn x_max(&self) -> i32 {
        self.inner.x_max()
    }

    #[getter]
    fn y_min(&self) -> i32 {
        self.inner.y_min()
    }

    #[getter]
    fn y_max(&self) -> i32 {
        self.inner.y_max()
    }

    #[getter]
    fn n_vertices(&self) -> usize {
        self.inner.n_vertices()
    }

    #[getter]
    fn n_edges(&self) -> usize {
        self.inner.n_edges()
    }

    /// Edge endpoints in canonical index order, as ((x1, y1), (x2, y2)).
    fn edges(&self) -> Vec<((i32, i32), (i32, i32))> {
        self.inner
            .edges()
            .map(|e| {
                let (a, b) = e.endpoints();
                ((a.x, a.y), (b.x, b.y))
            })
            .collect()
    }

    fn contains(&self, x: i32, y: i32) -> bool {
        self.inner.contains(rc::Vertex::new(x, y))
    }

    /// Concentric enlargement sized so that a margin of 1 is the region
    /// itself and each further unit adds half an extent on every side.
    fn margin_box(&self, margin: i32) -> PyResult<Self> {
        self.inner.margin_box(margin).map(|inner| Region { inner }).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Region({}, {}, {}, {})",
            self.inner.x_min(), self.inner.x_max(), self.inner.y_min(), self.inner.y_max()
        )
    }
}

/// An increasing event; detection looks only at open edges inside its
/// support box.
#[pyclass(frozen, eq, module = "rcmodel_py")]
#[derive(PartialEq)]
struct Event {
    inner: rc::EventSpec,
}

impl Event {
    fn build(spec: rc::EventSpec) -> PyResult<Self> {
        spec.validate().map_err(to_py)?;
        Ok(Event { inner: spec })
    }
}

#[pymethods]
impl Event {
    /// Left-right crossing of [-a,a] x [-b,b].
    #[staticmethod]
    fn crossing(a: i32, b: i32) -> PyResult<Self> {
        Event::build(rc::EventSpec::Crossing { a, b })
    }

    /// Left side of [-n,n]^2 joined to the right-side segment alpha<=y<=beta.
    #[staticmethod]
    fn targeted_crossing(n: i32, alpha: i32, beta: i32) -> PyResult<Self> {
        Event::build(rc::EventSpec::TargetedCrossing { n, alpha, beta })
    }

    /// One cluster touches all four side segments of [-n,n]^2 outside the
    /// middle band |y| < alpha.
    #[staticmethod]
    fn segment_touching(n: i32, alpha: i32) -> PyResult<Self> {
        Event::build(rc::EventSpec::SegmentTouching { n, alpha })
    }

    /// Origin joined to (x, y) inside [-n,n]^2.
    #[staticmethod]
    fn connection(x: i32, y: i32, n: i32) -> PyResult<Self> {
        Event::build(rc::EventSpec::Connection { x: rc::Vertex::new(x, y), n })
    }

    /// Left-right crossing of the strip [0,2n+1] x [0,2n].
    #[staticmethod]
    fn strip(n: i32) -> PyResult<Self> {
        Event::build(rc::EventSpec::Strip { n })
    }

    /// Bottom-top crossing of [0,2n] x [-1,2n].
    #[staticmethod]
    fn strip_dual(n: i32) -> PyResult<Self> {
        Event::build(rc::EventSpec::StripDual { n })
    }

    /// The single edge with the given lower-left anchor is open;
    /// orientation is "h" or "v".
    #[staticmethod]
    fn edge_open(x: i32, y: i32, orientation: &str) -> PyResult<Self> {
        let edge = match orientation {
            "h" => rc::Edge::horizontal(x, y),
            "v" => rc::Edge::vertical(x, y),
            other => {
                return Err(PyValueError::new_err(format!(
                    "orientation must be \"h\" or \"v\", got {other:?}"
                )))
            }
        };
        Event::build(rc::EventSpec::EdgeOpen { edge })
    }

    /// Some vertex of [-n,n]^2 reaches the boundary of [-m,m]^2.
    #[staticmethod]
    fn box_to_boundary(n: i32, m: i32) -> PyResult<Self> {
        Event::build(rc::EventSpec::BoxToBoundary { n, m })
    }

    /// Smallest box whose edges determine the event.
    fn support(&self) -> PyResult<Region> {
        self.inner.support().map(|inner| Region { inner }).map_err(to_py)
    }

    /// Whether the event holds for the given open-edge states on a region.
    fn detect(&self, region: &Region, open: Vec<bool>) -> PyResult<bool> {
        let c = config_from_bools(&open, &region.inner)?;
        self.inner.detect(&c, &region.inner).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("{}", self.inner)
    }
}

/// The exact random-cluster distribution on a small region, built by full
/// enumeration (at most 24 edges).
#[pyclass(frozen, module = "rcmodel_py")]
struct Exact {
    dist: rc::ExactDistribution,
}

impl Exact {
    fn event_hits(&self, ev: &Event) -> PyResult<Vec<bool>> {
        let r = self.dist.region();
        let sup = ev.inner.support().map_err(to_py)?;
        if !r.contains_region(&sup) {
            return Err(PyValueError::new_err(format!(
                "event support {sup} is not contained in region {r}"
            )));
        }
        rc::event_vector(r, |c| ev.inner.detect(c, r).expect("support checked")).map_err(to_py)
    }
}

#[pymethods]
impl Exact {
    #[new]
    fn new(region: &Region, p: f64, q: f64, bc: &str) -> PyResult<Self> {
        let params = rc::ModelParams::new(p, q, parse_bc(bc)?).map_err(to_py)?;
        rc::enumerate_measure(&region.inner, params).map(|dist| Exact { dist }).map_err(to_py)
    }

    #[getter]
    fn region(&self) -> Region {
        Region { inner: *self.dist.region() }
    }

    #[getter]
    fn log_z(&self) -> f64 {
        self.dist.log_z()
    }

    #[getter]
    fn n_configs(&self) -> usize {
        self.dist.n_configs()
    }

    /// Probability of the configuration given by an edge bitmask.
    fn prob(&self, mask: usize) -> PyResult<f64> {
        if mask >= self.dist.n_configs() {
            return Err(PyValueError::new_err(format!(
                "mask {mask} out of range for {} configurations",
                self.dist.n_configs()
            )));
        }
        Ok(self.dist.prob(mask))
    }

    /// Probability of an event whose support lies inside the region.
    fn probability(&self, event: &Event) -> PyResult<f64> {
        let hits = self.event_hits(event)?;
        self.dist.event_probability_vec(&hits).map_err(to_py)
    }

    /// Per-edge open-state marginals in canonical edge order.
    fn edge_marginals(&self) -> Vec<f64> {
        self.dist.edge_marginals()
    }

    /// Event probability together with the conditional influence of every
    /// edge, in canonical edge order.
    fn influence_profile(&self, event: &Event) -> PyResult<(f64, Vec<f64>)> {
        let hits = self.event_hits(event)?;
        self.dist.influence_profile_vec(&hits).map_err(to_py)
    }

    /// Total variation distance to another exact distribution on the same
    /// region.
    fn tv_distance(&self, other: &Exact) -> PyResult<f64> {
        self.dist.tv_distance(&other.dist).map_err(to_py)
    }
}

/// The self-dual parameter sqrt(q) / (1 + sqrt(q)).
#[pyfunction]
fn self_dual_point(q: f64) -> f64 {
    rc::self_dual_point(q)
}

/// The parameter of the dual model: p* with p*p* duality at fixed q.
#[pyfunction]
fn dual_parameter(p: f64, q: f64) -> PyResult<f64> {
    rc::dual_parameter(p, q).map_err(to_py)
}

/// Number of clusters of the open subgraph, with wired boundary merging
/// all boundary vertices first.
#[pyfunction]
fn cluster_count(region: &Region, open: Vec<bool>, bc: &str) -> PyResult<usize> {
    let c = config_from_bools(&open, &region.inner)?;
    Ok(rc::cluster_count(&c, &region.inner, parse_bc(bc)?))
}

/// Maximal number of edge-disjoint open left-right crossings of
/// [-a,a] x [-b,b] within the region.
#[pyfunction]
fn count_disjoint_crossings(region: &Region, open: Vec<bool>, a: i32, b: i32) -> PyResult<u32> {
    let c = config_from_bools(&open, &region.inner)?;
    rc::count_disjoint_crossings(&c, &region.inner, a, b).map_err(to_py)
}

/// Monte Carlo estimate of an event probability from a seeded chain.
///
/// Returns (estimate, stderr, n_samples); stderr comes from 20 batch
/// means over the thinned samples.
#[pyfunction]
#[pyo3(signature = (region, p, q, bc, event, sweeps, burnin, thin, seed, algorithm = "auto"))]
#[allow(clippy::too_many_arguments)]
fn estimate_event(
    py: Python<'_>,
    region: &Region,
    p: f64,
    q: f64,
    bc: &str,
    event: &Event,
    sweeps: u64,
    burnin: u64,
    thin: u64,
    seed: u64,
    algorithm: &str,
) -> PyResult<(f64, f64, u64)> {
    let params = rc::ModelParams::new(p, q, parse_bc(bc)?).map_err(to_py)?;
    let schedule = rc::Schedule::new(sweeps, burnin, thin).map_err(to_py)?;
    let alg = parse_algorithm(algorithm)?;
    let r = region.inner;
    let sup = event.inner.support().map_err(to_py)?;
    if !r.contains_region(&sup) {
        return Err(PyValueError::new_err(format!(
            "event support {sup} is not contained in region {r}"
        )));
    }
    let spec = event.inner;
    let est = py
        .detach(move || {
            rc::estimate_event(&r, params, schedule, seed, alg, |c| {
                spec.detect(c, &r).expect("support checked")
            })
        })
        .map_err(to_py)?;
    Ok((est.estimate, est.stderr, est.n_samples))
}

#[pymodule]
fn rcmodel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Region>()?;
    m.add_class::<Event>()?;
    m.add_class::<Exact>()?;
    m.add_function(wrap_pyfunction!(self_dual_point, m)?)?;
    m.add_function(wrap_pyfunction!(dual_parameter, m)?)?;
    m.add_function(wrap_pyfunction!(cluster_count, m)?)?;
    m.add_function(wrap_pyfunction!(count_disjoint_crossings, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_event, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
