//! Python bindings for the dilation-group toolkit.
//!
//! Exposes the core objects (groups, quasi-norms, settings, test
//! functions, quadrature budgets), the orbit-derivative operators, the
//! identity and inequality reporters, the sharp-constant probes, and the
//! config-driven suite runner. Reports come back as plain dictionaries
//! mirroring the JSON the command-line tool writes.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;

use hardygroups::calculus::{self, RadialOperatorMethod};
use hardygroups::config::RunConfig;
use hardygroups::group::{DilationGroup, QuasiNorm, Setting as CoreSetting};
use hardygroups::identities::{self, EvalPath, IdentityReport, InequalityMode};
use hardygroups::quadrature::QuadratureSpec;
use hardygroups::report::{self, SuiteSelection};
use hardygroups::sharpness::{self, SharpnessTarget};
use hardygroups::testfuncs::{RadialProfile, TestFunction};
use hardygroups::Error;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn check_dim(expected: usize, got: usize) -> PyResult<()> {
    if expected != got {
        return Err(PyValueError::new_err(format!(
            "point has dimension {got}, the group has dimension {expected}"
        )));
    }
    Ok(())
}

fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    match v {
        serde_json::Value::Null => Ok(py.None()),
        serde_json::Value::Bool(b) => b.into_py_any(py),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py_any(py)
            } else if let Some(u) = n.as_u64() {
                u.into_py_any(py)
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_py_any(py)
            }
        }
        serde_json::Value::String(s) => s.into_py_any(py),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_py_any(py)
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            dict.into_py_any(py)
        }
    }
}

fn to_py_dict<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

fn report_to_py(py: Python<'_>, r: &IdentityReport) -> PyResult<Py<PyAny>> {
    to_py_dict(py, r)
}

fn parse_method(method: &str, h: f64, order: usize, richardson: bool) -> PyResult<RadialOperatorMethod> {
    match method {
        "analytic" => Ok(RadialOperatorMethod::Analytic),
        "fd" => Ok(RadialOperatorMethod::FiniteDifference { h, order, richardson }),
        other => Err(PyValueError::new_err(format!(
            "method must be \"analytic\" or \"fd\", got {other:?}"
        ))),
    }
}

fn parse_path(
    path: &str,
    method: &str,
    h: f64,
    order: usize,
    richardson: bool,
) -> PyResult<EvalPath> {
    match path {
        "separable" => Ok(EvalPath::Separable),
        "general" => Ok(EvalPath::General(parse_method(method, h, order, richardson)?)),
        other => Err(PyValueError::new_err(format!(
            "path must be \"separable\" or \"general\", got {other:?}"
        ))),
    }
}

fn parse_mode(mode: &str) -> PyResult<InequalityMode> {
    match mode {
        "auto" => Ok(InequalityMode::Auto),
        "require" => Ok(InequalityMode::Require),
        other => Err(PyValueError::new_err(format!(
            "mode must be \"auto\" or \"require\", got {other:?}"
        ))),
    }
}

fn parse_target(
    inequality: &str,
    p: Option<f64>,
    alpha: Option<f64>,
    k: Option<usize>,
) -> PyResult<SharpnessTarget> {
    match inequality {
        "hardy" | "hardy_lp" => {
            let p = p.ok_or_else(|| PyValueError::new_err("hardy sharpness needs p"))?;
            Ok(SharpnessTarget::Hardy { p })
        }
        "weighted" | "weighted_l2" => {
            let alpha =
                alpha.ok_or_else(|| PyValueError::new_err("weighted sharpness needs alpha"))?;
            Ok(SharpnessTarget::Weighted { alpha })
        }
        "rellich" => Ok(SharpnessTarget::Rellich),
        "higher_order" => {
            let k = k.ok_or_else(|| PyValueError::new_err("higher_order sharpness needs k"))?;
            Ok(SharpnessTarget::HigherOrder { k, alpha: alpha.unwrap_or(0.0) })
        }
        other => Err(PyValueError::new_err(format!(
            "inequality must be one of hardy, weighted, rellich, higher_order; got {other:?}"
        ))),
    }
}

fn spec_of(quad: Option<&Quadrature>) -> QuadratureSpec {
    quad.map(|q| q.inner.clone()).unwrap_or_default()
}

// ---------------------------------------------------------------------------
// Core classes
// ---------------------------------------------------------------------------

/// R^n with the anisotropic dilations `D_lambda(x)_i = lambda^w_i x_i`.
#[pyclass(frozen, module = "hardygroups_py")]
#[derive(Clone)]
pub struct Group {
    inner: DilationGroup,
}

#[pymethods]
impl Group {
    #[new]
    fn new(weights: Vec<f64>) -> PyResult<Self> {
        DilationGroup::new(weights).map(|inner| Group { inner }).map_err(err)
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn homogeneous_dim(&self) -> f64 {
        self.inner.homogeneous_dim()
    }

    #[getter]
    fn is_isotropic(&self) -> bool {
        self.inner.is_isotropic()
    }

    fn dilate(&self, lam: f64, x: Vec<f64>) -> PyResult<Vec<f64>> {
        check_dim(self.inner.dim(), x.len())?;
        Ok(self.inner.dilate(lam, &x))
    }

    fn __repr__(&self) -> String {
        format!("Group(weights={:?})", self.inner.weights())
    }
}

/// A quasi-norm homogeneous of degree one under the group's dilations.
#[pyclass(frozen, module = "hardygroups_py")]
#[derive(Clone)]
pub struct Norm {
    inner: QuasiNorm,
}

#[pymethods]
impl Norm {
    /// `(sum_i |x_i|^(kappa / w_i))^(1 / kappa)`.
    #[staticmethod]
    fn anisotropic(kappa: f64) -> Self {
        Norm { inner: QuasiNorm::Anisotropic { kappa } }
    }

    /// `(|x'|^4 + c |x''|^2)^(1/4)` over the weight-1 block x' and the
    /// weight-2 block x''; needs every weight in {1, 2}.
    #[staticmethod]
    fn koranyi(c: f64) -> Self {
        Norm { inner: QuasiNorm::Koranyi { c } }
    }

    /// `(sum_i x_i^2)^(1 / (2 w))` on isotropic groups of common weight w.
    #[staticmethod]
    fn euclidean() -> Self {
        Norm { inner: QuasiNorm::Euclidean }
    }

    /// The smooth anisotropic norm with kappa = 2 * max weight (rounded up
    /// to an even integer).
    #[staticmethod]
    fn default_anisotropic(group: &Group) -> Self {
        Norm { inner: QuasiNorm::default_anisotropic(&group.inner) }
    }

    /// Errors when this norm is not usable on the group.
    fn validate(&self, group: &Group) -> PyResult<()> {
        self.inner.validate(&group.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Norm({:?})", self.inner)
    }
}

/// A group with a compatible quasi-norm: the ambient structure every
/// operator and integral is built on.
#[pyclass(frozen, module = "hardygroups_py")]
#[derive(Clone)]
pub struct Setting {
    inner: CoreSetting,
}

#[pymethods]
impl Setting {
    #[new]
    fn new(group: &Group, norm: &Norm) -> PyResult<Self> {
        CoreSetting::new(group.inner.clone(), norm.inner.clone())
            .map(|inner| Setting { inner })
            .map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn homogeneous_dim(&self) -> f64 {
        self.inner.homogeneous_dim()
    }

    fn norm_of(&self, x: Vec<f64>) -> PyResult<f64> {
        check_dim(self.inner.dim(), x.len())?;
        Ok(self.inner.norm_of(&x))
    }

    fn dilate(&self, lam: f64, x: Vec<f64>) -> PyResult<Vec<f64>> {
        check_dim(self.inner.dim(), x.len())?;
        Ok(self.inner.dilate(lam, &x))
    }

    /// Projection of x onto the unit quasi-sphere along its dilation orbit.
    fn sphere_project(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        check_dim(self.inner.dim(), x.len())?;
        if !(self.inner.norm_of(&x) > 0.0) {
            return Err(PyValueError::new_err("cannot project the origin onto the sphere"));
        }
        Ok(self.inner.sphere_project(&x))
    }

    /// Half-widths of an axis-aligned box containing the quasi-ball of
    /// radius r.
    fn ball_box(&self, r: f64) -> Vec<f64> {
        self.inner.norm().ball_box(self.inner.group(), r)
    }

    fn __repr__(&self) -> String {
        format!(
            "Setting(weights={:?}, norm={:?})",
            self.inner.group().weights(),
            self.inner.norm()
        )
    }
}

/// An admissible test function: smooth, compactly supported away from the
/// origin, with analytic radial derivatives on the separable constructors.
#[pyclass(frozen, module = "hardygroups_py")]
#[derive(Clone)]
pub struct Function {
    inner: TestFunction,
}

#[pymethods]
impl Function {
    /// Real radial bump supported on a < |x| < b.
    #[staticmethod]
    fn real_bump(a: f64, b: f64) -> PyResult<Self> {
        TestFunction::real_bump(a, b).map(|inner| Function { inner }).map_err(err)
    }

    /// Bump times (1 + i y_0): complex-valued, same support.
    #[staticmethod]
    fn complex_bump(a: f64, b: f64) -> PyResult<Self> {
        TestFunction::complex_bump(a, b).map(|inner| Function { inner }).map_err(err)
    }

    /// Near-extremizer r^gamma with smooth cutoffs inside the `inner`
    /// radius window and outside the `outer` one.
    #[staticmethod]
    fn extremizer(gamma: f64, inner: (f64, f64), outer: (f64, f64)) -> PyResult<Self> {
        let profile = RadialProfile::extremizer_gamma(gamma, inner, outer).map_err(err)?;
        Ok(Function {
            inner: TestFunction::separable(
                profile,
                hardygroups::testfuncs::AngularPart::one(),
            ),
        })
    }

    #[getter]
    fn is_real(&self) -> bool {
        self.inner.is_real()
    }

    /// (a, b) with the profile supported on a < r < b, or None for
    /// black-box functions.
    #[getter]
    fn radial_support(&self) -> Option<(f64, f64)> {
        self.inner.radial_support()
    }

    fn eval(&self, setting: &Setting, x: Vec<f64>) -> PyResult<Complex64> {
        check_dim(setting.inner.dim(), x.len())?;
        Ok(self.inner.eval(&setting.inner, &x))
    }

    fn __repr__(&self) -> String {
        format!("Function({:?})", self.inner)
    }
}

/// Quadrature budget used by every integral; defaults match the
/// command-line tool.
#[pyclass(frozen, module = "hardygroups_py")]
#[derive(Clone)]
pub struct Quadrature {
    inner: QuadratureSpec,
}

#[pymethods]
impl Quadrature {
    #[new]
    #[pyo3(signature = (radial_order=None, radial_panels=None, cubature_points_per_dim=None,
                        annulus_lambda=None, mc_samples=None, seed=None, tol_separable=None,
                        tol_general=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        radial_order: Option<usize>,
        radial_panels: Option<usize>,
        cubature_points_per_dim: Option<usize>,
        annulus_lambda: Option<f64>,
        mc_samples: Option<usize>,
        seed: Option<u64>,
        tol_separable: Option<f64>,
        tol_general: Option<f64>,
    ) -> PyResult<Self> {
        let mut inner = QuadratureSpec::default();
        if let Some(v) = radial_order {
            inner.radial_order = v;
        }
        if let Some(v) = radial_panels {
            inner.radial_panels = v;
        }
        if let Some(v) = cubature_points_per_dim {
            inner.cubature_points_per_dim = v;
        }
        if let Some(v) = annulus_lambda {
            inner.annulus_lambda = v;
        }
        if let Some(v) = mc_samples {
            inner.mc_samples = v;
        }
        if let Some(v) = seed {
            inner.seed = v;
        }
        if let Some(v) = tol_separable {
            inner.tol_separable = v;
        }
        if let Some(v) = tol_general {
            inner.tol_general = v;
        }
        inner.validate().map_err(err)?;
        Ok(Quadrature { inner })
    }

    fn __repr__(&self) -> String {
        format!("Quadrature({:?})", self.inner)
    }
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

/// k-th derivative of f along the dilation orbit through x.
#[pyfunction]
#[pyo3(signature = (setting, f, x, k=1, method="analytic", h=1e-3, order=4, richardson=true))]
#[allow(clippy::too_many_arguments)]
fn radial_derivative(
    setting: &Setting,
    f: &Function,
    x: Vec<f64>,
    k: usize,
    method: &str,
    h: f64,
    order: usize,
    richardson: bool,
) -> PyResult<Complex64> {
    check_dim(setting.inner.dim(), x.len())?;
    let m = parse_method(method, h, order, richardson)?;
    calculus::radial_derivative(&setting.inner, &f.inner, &x, k, &m).map_err(err)
}

/// |x| times the first orbit derivative; independent of the quasi-norm.
#[pyfunction]
#[pyo3(signature = (setting, f, x, method="analytic", h=1e-3, order=4, richardson=true))]
fn euler_apply(
    setting: &Setting,
    f: &Function,
    x: Vec<f64>,
    method: &str,
    h: f64,
    order: usize,
    richardson: bool,
) -> PyResult<Complex64> {
    check_dim(setting.inner.dim(), x.len())?;
    let m = parse_method(method, h, order, richardson)?;
    calculus::euler_apply(&setting.inner, &f.inner, &x, &m).map_err(err)
}

/// Worst relative residual of `f(D_lambda x) = lambda^nu f(x)` over the
/// given (point, lambda) samples; 0 exactly for homogeneous functions.
#[pyfunction]
fn check_homogeneity(
    setting: &Setting,
    f: &Function,
    nu: f64,
    samples: Vec<(Vec<f64>, f64)>,
) -> PyResult<f64> {
    for (x, _) in &samples {
        check_dim(setting.inner.dim(), x.len())?;
    }
    calculus::check_homogeneity(&setting.inner, &f.inner, nu, &samples).map_err(err)
}

// ---------------------------------------------------------------------------
// Identity and inequality reports
// ---------------------------------------------------------------------------

/// Exact Lp identity behind the first-order weighted-norm inequality.
#[pyfunction]
#[pyo3(signature = (setting, f, p, path="separable", method="fd", h=1e-3, order=4,
                    richardson=true, quad=None))]
#[allow(clippy::too_many_arguments)]
fn hardy_lp(
    py: Python<'_>,
    setting: &Setting,
    f: &Function,
    p: f64,
    path: &str,
    method: &str,
    h: f64,
    order: usize,
    richardson: bool,
    quad: Option<&Quadrature>,
) -> PyResult<Py<PyAny>> {
    let ep = parse_path(path, method, h, order, richardson)?;
    let spec = spec_of(quad);
    let rep = py
        .detach(|| identities::hardy_lp_report(&setting.inner, &f.inner, p, ep, &spec))
        .map_err(err)?;
    report_to_py(py, &rep)
}

/// L2 identity with the square-of-sum remainder.
#[pyfunction]
#[pyo3(signature = (setting, f, path="separable", method="fd", h=1e-3, order=4,
                    richardson=true, quad=None))]
#[allow(clippy::too_many_arguments)]
fn hardy_l2(
    py: Python<'_>,
    setting: &Setting,
    f: &Function,
    path: &str,
    method: &str,
    h: f64,
    order: usize,
    richardson: bool,
    quad: Option<&Quadrature>,
) -> PyResult<Py<PyAny>> {
    let ep = parse_path(path, method, h, order, richardson)?;
    let spec = spec_of(quad);
    let rep = py
        .detach(|| identities::hardy_l2_report(&setting.inner, &f.inner, ep, &spec))
        .map_err(err)?;
    report_to_py(py, &rep)
}

/// Power-weighted L2 identity; mode "require" errors when the constant
/// degenerates, "auto" reports the identity anyway.
#[pyfunction]
#[pyo3(signature = (setting, f, alpha, mode="auto", path="separable", method="fd", h=1e-3,
                    order=4, richardson=true, quad=None))]
#[allow(clippy::too_many_arguments)]
fn weighted_l2(
    py: Python<'_>,
    setting: &Setting,
    f: &Function,
    alpha: f64,
    mode: &str,
    path: &str,
    method: &str,
    h: f64,
    order: usize,
    richardson: bool,
    quad: Option<&Quadrature>,
) -> PyResult<Py<PyAny>> {
    let ep = parse_path(path, method, h, order, richardson)?;
    let im = parse_mode(mode)?;
    let spec = spec_of(quad);
    let rep = py
        .detach(|| identities::weighted_l2_report(&setting.inner, &f.inner, alpha, im, ep, &spec))
        .map_err(err)?;
    report_to_py(py, &rep)
}

/// Second-order identity controlling f/|x|^2; needs Q >= 5.
#[pyfunction]
#[pyo3(signature = (setting, f, path="separable", method="fd", h=1e-3, order=4,
                    richardson=true, quad=None))]
#[allow(clippy::too_many_arguments)]
fn rellich(
    py: Python<'_>,
    setting: &Setting,
    f: &Function,
    path: &str,
    method: &str,
    h: f64,
    order: usize,
    richardson: bool,
    quad: Option<&Quadrature>,
) -> PyResult<Py<PyAny>> {
    let ep = parse_path(path, method, h, order, richardson)?;
    let spec = spec_of(quad);
    let rep = py
        .detach(|| identities::rellich_report(&setting.inner, &f.inner, ep, &spec))
        .map_err(err)?;
    report_to_py(py, &rep)
}

/// Iterated k-th order weighted identity.
#[pyfunction]
#[pyo3(signature = (setting, f, k, alpha=0.0, mode="auto", path="separable", method="fd",
                    h=1e-3, order=4, richardson=true, quad=None))]
#[allow(clippy::too_many_arguments)]
fn higher_order(
    py: Python<'_>,
    setting: &Setting,
    f: &Function,
    k: usize,
    alpha: f64,
    mode: &str,
    path: &str,
    method: &str,
    h: f64,
    order: usize,
    richardson: bool,
    quad: Option<&Quadrature>,
) -> PyResult<Py<PyAny>> {
    let ep = parse_path(path, method, h, order, richardson)?;
    let im = parse_mode(mode)?;
    let spec = spec_of(quad);
    let rep = py
        .detach(|| {
            identities::higher_order_report(&setting.inner, &f.inner, k, alpha, im, ep, &spec)
        })
        .map_err(err)?;
    report_to_py(py, &rep)
}

/// Integration-by-parts identity for the |x|-weighted p-form.
#[pyfunction]
#[pyo3(signature = (setting, f, p, path="separable", method="fd", h=1e-3, order=4,
                    richardson=true, quad=None))]
#[allow(clippy::too_many_arguments)]
fn ibp(
    py: Python<'_>,
    setting: &Setting,
    f: &Function,
    p: f64,
    path: &str,
    method: &str,
    h: f64,
    order: usize,
    richardson: bool,
    quad: Option<&Quadrature>,
) -> PyResult<Py<PyAny>> {
    let ep = parse_path(path, method, h, order, richardson)?;
    let spec = spec_of(quad);
    let rep = py
        .detach(|| identities::ibp_report(&setting.inner, &f.inner, p, ep, &spec))
        .map_err(err)?;
    report_to_py(py, &rep)
}

/// Product bound: derivative norm times weighted norm controls the L2 mass.
#[pyfunction]
#[pyo3(signature = (setting, f, p, path="separable", method="fd", h=1e-3, order=4,
                    richardson=true, quad=None))]
#[allow(clippy::too_many_arguments)]
fn uncertainty(
    py: Python<'_>,
    setting: &Setting,
    f: &Function,
    p: f64,
    path: &str,
    method: &str,
    h: f64,
    order: usize,
    richardson: bool,
    quad: Option<&Quadrature>,
) -> PyResult<Py<PyAny>> {
    let ep = parse_path(path, method, h, order, richardson)?;
    let spec = spec_of(quad);
    let rep = py
        .detach(|| identities::uncertainty_report(&setting.inner, &f.inner, p, ep, &spec))
        .map_err(err)?;
    report_to_py(py, &rep)
}

/// Logarithmic-weight bound checked at each window radius in r_values.
#[pyfunction]
#[pyo3(signature = (setting, f, p, r_values, quad=None))]
fn log_hardy(
    py: Python<'_>,
    setting: &Setting,
    f: &Function,
    p: f64,
    r_values: Vec<f64>,
    quad: Option<&Quadrature>,
) -> PyResult<Py<PyAny>> {
    let spec = spec_of(quad);
    let rep = py
        .detach(|| identities::log_hardy_report(&setting.inner, &f.inner, p, &r_values, &spec))
        .map_err(err)?;
    report_to_py(py, &rep)
}

/// Pointwise check that |z|^p matches its two-term real representation.
#[pyfunction]
#[pyo3(signature = (z, p, tolerance=1e-12))]
fn complex_reduction(py: Python<'_>, z: Complex64, p: f64, tolerance: f64) -> PyResult<Py<PyAny>> {
    let rep = identities::complex_reduction_report(z, p, tolerance).map_err(err)?;
    report_to_py(py, &rep)
}

// ---------------------------------------------------------------------------
// Sharpness
// ---------------------------------------------------------------------------

/// Quotient of the two weighted norms of the chosen inequality on f; its
/// supremum over admissible f is the sharp constant.
#[pyfunction]
#[pyo3(signature = (setting, inequality, f, p=None, alpha=None, k=None, path="separable",
                    method="fd", h=1e-3, order=4, richardson=true, quad=None))]
#[allow(clippy::too_many_arguments)]
fn rayleigh_quotient(
    py: Python<'_>,
    setting: &Setting,
    inequality: &str,
    f: &Function,
    p: Option<f64>,
    alpha: Option<f64>,
    k: Option<usize>,
    path: &str,
    method: &str,
    h: f64,
    order: usize,
    richardson: bool,
    quad: Option<&Quadrature>,
) -> PyResult<f64> {
    let target = parse_target(inequality, p, alpha, k)?;
    let ep = parse_path(path, method, h, order, richardson)?;
    let spec = spec_of(quad);
    py.detach(|| sharpness::rayleigh_quotient(&setting.inner, &target, &f.inner, ep, &spec))
        .map_err(err)
}

/// Quotients of near-extremizers at each delta, approaching the sharp
/// constant from below as delta decreases.
#[pyfunction]
#[pyo3(signature = (setting, inequality, deltas, p=None, alpha=None, k=None, quad=None))]
#[allow(clippy::too_many_arguments)]
fn sharpness_sweep(
    py: Python<'_>,
    setting: &Setting,
    inequality: &str,
    deltas: Vec<f64>,
    p: Option<f64>,
    alpha: Option<f64>,
    k: Option<usize>,
    quad: Option<&Quadrature>,
) -> PyResult<Py<PyAny>> {
    let target = parse_target(inequality, p, alpha, k)?;
    let spec = spec_of(quad);
    let curve = py
        .detach(|| sharpness::sharpness_sweep(&setting.inner, &target, &deltas, &spec))
        .map_err(err)?;
    to_py_dict(py, &curve)
}

// ---------------------------------------------------------------------------
// Config-driven suite
// ---------------------------------------------------------------------------

/// Runs a TOML-configured suite (same format as the command-line tool)
/// and returns the full result as a dictionary. `select` is one of
/// "identities", "sharpness", "all".
#[pyfunction]
#[pyo3(signature = (text, select="all"))]
fn run_suite_toml(py: Python<'_>, text: &str, select: &str) -> PyResult<Py<PyAny>> {
    let selection = match select {
        "identities" => SuiteSelection::Identities,
        "sharpness" => SuiteSelection::Sharpness,
        "all" => SuiteSelection::All,
        other => {
            return Err(PyValueError::new_err(format!(
                "select must be identities, sharpness or all, got {other:?}"
            )))
        }
    };
    let cfg = RunConfig::from_toml(text).map_err(err)?.resolve();
    let result = py.detach(|| report::run_suite(&cfg, selection)).map_err(err)?;
    to_py_dict(py, &result)
}

#[pymodule]
fn hardygroups_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Group>()?;
    m.add_class::<Norm>()?;
    m.add_class::<Setting>()?;
    m.add_class::<Function>()?;
    m.add_class::<Quadrature>()?;
    m.add_function(wrap_pyfunction!(radial_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(euler_apply, m)?)?;
    m.add_function(wrap_pyfunction!(check_homogeneity, m)?)?;
    m.add_function(wrap_pyfunction!(hardy_lp, m)?)?;
    m.add_function(wrap_pyfunction!(hardy_l2, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_l2, m)?)?;
    m.add_function(wrap_pyfunction!(rellich, m)?)?;
    m.add_function(wrap_pyfunction!(higher_order, m)?)?;
    m.add_function(wrap_pyfunction!(ibp, m)?)?;
    m.add_function(wrap_pyfunction!(uncertainty, m)?)?;
    m.add_function(wrap_pyfunction!(log_hardy, m)?)?;
    m.add_function(wrap_pyfunction!(complex_reduction, m)?)?;
    m.add_function(wrap_pyfunction!(rayleigh_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(sharpness_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite_toml, m)?)?;
    Ok(())
}
