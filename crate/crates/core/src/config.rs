//! Declarative run configuration.
//!
//! A run file is a TOML tree with the blocks `group`, `norm`, `calculus`,
//! `quad`, `function`, `output`, the job arrays `identities` and
//! `sharpness`, plus top-level `seed` and `workers`. Unknown keys are
//! rejected. [`RunConfig::resolve`] fills every default and produces the
//! fully explicit [`ResolvedConfig`] that is echoed into the output;
//! [`ResolvedConfig::validate`] then checks every reporter precondition
//! up front and reports all violations at once, so no job ever starts
//! from an inadmissible parameter set.

use serde::{Deserialize, Serialize};

use crate::calculus::RadialOperatorMethod;
use crate::error::{Error, Result};
use crate::group::{DilationGroup, QuasiNorm, Setting};
use crate::identities::{EvalPath, InequalityMode};
use crate::quadrature::QuadratureSpec;
use crate::sharpness::{ProfileFamily, SharpnessTarget};
use crate::testfuncs::{RadialProfile, TestFunction};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub group: GroupConfig,
    #[serde(default)]
    pub norm: Option<NormConfig>,
    #[serde(default)]
    pub calculus: Option<CalculusConfig>,
    #[serde(default)]
    pub quad: Option<QuadConfig>,
    #[serde(default)]
    pub function: Option<FunctionConfig>,
    #[serde(default)]
    pub identities: Vec<IdentityJob>,
    #[serde(default)]
    pub sharpness: Vec<SharpnessJob>,
    #[serde(default)]
    pub output: Option<OutputConfig>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormConfig {
    pub kind: NormKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Anisotropic,
    Koranyi,
    Euclidean,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalculusConfig {
    #[serde(default)]
    pub mode: Option<CalculusMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub richardson: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalculusMode {
    Analytic,
    Fd,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadConfig {
    #[serde(default)]
    pub radial_order: Option<usize>,
    #[serde(default)]
    pub radial_panels: Option<usize>,
    #[serde(default)]
    pub cubature_points: Option<usize>,
    #[serde(default)]
    pub annulus_lambda: Option<f64>,
    #[serde(default)]
    pub mc_samples: Option<usize>,
    /// Target tolerance of the separable path.
    #[serde(default)]
    pub tol: Option<f64>,
    /// Target tolerance of the general path.
    #[serde(default)]
    pub tol_general: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionConfig {
    pub kind: FunctionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    Bump,
    ComplexBump,
    Extremizer,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityJob {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_values: Option<Vec<f64>>,
    #[serde(default)]
    pub path: Option<PathChoice>,
    #[serde(default)]
    pub inequality: Option<InequalityChoice>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathChoice {
    Separable,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityChoice {
    Auto,
    Require,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharpnessJob {
    pub inequality: String,
    #[serde(default)]
    pub mode: Option<SharpnessMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SharpnessMode {
    Sweep,
    Optimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Bump,
    Plateau,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub dir: Option<String>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    Both,
}

// ---------------------------------------------------------------------------
// Resolution
// ---------------------------------------------------------------------------

/// A run configuration with every default made explicit. Serializing this
/// echo reproduces the run exactly.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub group: GroupConfig,
    pub norm: NormConfig,
    pub calculus: CalculusConfig,
    pub quad: ResolvedQuad,
    pub function: FunctionConfig,
    pub identities: Vec<IdentityJob>,
    pub sharpness: Vec<SharpnessJob>,
    pub output: ResolvedOutput,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedQuad {
    pub radial_order: usize,
    pub radial_panels: usize,
    pub cubature_points: usize,
    pub annulus_lambda: f64,
    pub mc_samples: usize,
    pub tol: f64,
    pub tol_general: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedOutput {
    pub dir: String,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(format!("cannot parse run file: {e}")))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Fill in every default.
    pub fn resolve(&self) -> ResolvedConfig {
        let seed = self.seed.unwrap_or(0);
        let quad_defaults = QuadratureSpec::default();
        let quad = self.quad.clone().unwrap_or(QuadConfig {
            radial_order: None,
            radial_panels: None,
            cubature_points: None,
            annulus_lambda: None,
            mc_samples: None,
            tol: None,
            tol_general: None,
            seed: None,
        });
        let norm = self.norm.clone().unwrap_or(NormConfig {
            kind: NormKind::Anisotropic,
            kappa: None,
            c: None,
        });
        let norm = NormConfig {
            kind: norm.kind,
            kappa: match (norm.kind, norm.kappa) {
                (NormKind::Anisotropic, None) => {
                    match DilationGroup::new(self.group.weights.clone()) {
                        Ok(g) => match QuasiNorm::default_anisotropic(&g) {
                            QuasiNorm::Anisotropic { kappa } => Some(kappa),
                            _ => None,
                        },
                        Err(_) => None,
                    }
                }
                (_, k) => k,
            },
            c: match (norm.kind, norm.c) {
                (NormKind::Koranyi, None) => Some(1.0),
                (_, c) => c,
            },
        };
        let calculus = self.calculus.clone().unwrap_or(CalculusConfig {
            mode: None,
            h: None,
            order: None,
            richardson: None,
        });
        let calculus = CalculusConfig {
            mode: Some(calculus.mode.unwrap_or(CalculusMode::Fd)),
            h: Some(calculus.h.unwrap_or(1e-3)),
            order: Some(calculus.order.unwrap_or(4)),
            richardson: Some(calculus.richardson.unwrap_or(true)),
        };
        let function = self.function.clone().unwrap_or(FunctionConfig {
            kind: FunctionKind::Bump,
            support: None,
            p: None,
            eps: None,
            inner: None,
            outer: None,
        });
        let function = FunctionConfig {
            kind: function.kind,
            support: match function.kind {
                FunctionKind::Extremizer => function.support,
                _ => Some(function.support.unwrap_or([0.5, 2.0])),
            },
            p: function.p,
            eps: match function.kind {
                FunctionKind::Extremizer => Some(function.eps.unwrap_or(0.0)),
                _ => function.eps,
            },
            inner: match function.kind {
                FunctionKind::Extremizer => Some(function.inner.unwrap_or([1e-3, 1e-2])),
                _ => function.inner,
            },
            outer: match function.kind {
                FunctionKind::Extremizer => Some(function.outer.unwrap_or([1e2, 1e3])),
                _ => function.outer,
            },
        };
        let identities = self
            .identities
            .iter()
            .map(|j| IdentityJob {
                id: j.id.clone(),
                p: j.p,
                alpha: j.alpha,
                k: j.k,
                r_values: match j.id.as_str() {
                    "log_hardy" => Some(j.r_values.clone().unwrap_or(vec![0.5, 1.0, 2.0])),
                    _ => j.r_values.clone(),
                },
                path: Some(j.path.unwrap_or(PathChoice::Separable)),
                inequality: Some(j.inequality.unwrap_or(InequalityChoice::Auto)),
            })
            .collect();
        let sharpness = self
            .sharpness
            .iter()
            .map(|j| SharpnessJob {
                inequality: j.inequality.clone(),
                mode: Some(j.mode.unwrap_or(SharpnessMode::Sweep)),
                p: j.p,
                alpha: j.alpha,
                k: j.k,
                deltas: Some(j.deltas.clone().unwrap_or(vec![1e-1, 1e-2, 1e-3])),
                family: j.family,
                bounds: j.bounds.clone(),
                start: j.start.clone(),
                max_iterations: match j.mode {
                    Some(SharpnessMode::Optimize) => Some(j.max_iterations.unwrap_or(200)),
                    _ => j.max_iterations,
                },
            })
            .collect();
        let output = self.output.clone().unwrap_or(OutputConfig { dir: None, format: None });
        ResolvedConfig {
            group: self.group.clone(),
            norm,
            calculus,
            quad: ResolvedQuad {
                radial_order: quad.radial_order.unwrap_or(quad_defaults.radial_order),
                radial_panels: quad.radial_panels.unwrap_or(quad_defaults.radial_panels),
                cubature_points: quad
                    .cubature_points
                    .unwrap_or(quad_defaults.cubature_points_per_dim),
                annulus_lambda: quad.annulus_lambda.unwrap_or(quad_defaults.annulus_lambda),
                mc_samples: quad.mc_samples.unwrap_or(quad_defaults.mc_samples),
                tol: quad.tol.unwrap_or(quad_defaults.tol_separable),
                tol_general: quad.tol_general.unwrap_or(quad_defaults.tol_general),
                seed: quad.seed.unwrap_or(seed),
            },
            function,
            identities,
            sharpness,
            output: ResolvedOutput {
                dir: output.dir.unwrap_or_else(|| "out".into()),
                format: output.format.unwrap_or(OutputFormat::Both),
            },
            seed,
            workers: self.workers.unwrap_or(0),
        }
    }
}

impl ResolvedConfig {
    pub fn quadrature_spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            radial_order: self.quad.radial_order,
            radial_panels: self.quad.radial_panels,
            cubature_points_per_dim: self.quad.cubature_points,
            annulus_lambda: self.quad.annulus_lambda,
            mc_samples: self.quad.mc_samples,
            seed: self.quad.seed,
            tol_separable: self.quad.tol,
            tol_general: self.quad.tol_general,
        }
    }

    pub fn method(&self) -> RadialOperatorMethod {
        match self.calculus.mode.unwrap_or(CalculusMode::Fd) {
            CalculusMode::Analytic => RadialOperatorMethod::Analytic,
            CalculusMode::Fd => RadialOperatorMethod::FiniteDifference {
                h: self.calculus.h.unwrap_or(1e-3),
                order: self.calculus.order.unwrap_or(4),
                richardson: self.calculus.richardson.unwrap_or(true),
            },
        }
    }

    pub fn setting(&self) -> Result<Setting> {
        let group = DilationGroup::new(self.group.weights.clone())?;
        let norm = match self.norm.kind {
            NormKind::Anisotropic => match self.norm.kappa {
                Some(kappa) => QuasiNorm::Anisotropic { kappa },
                None => QuasiNorm::default_anisotropic(&group),
            },
            NormKind::Koranyi => QuasiNorm::Koranyi { c: self.norm.c.unwrap_or(1.0) },
            NormKind::Euclidean => QuasiNorm::Euclidean,
        };
        Setting::new(group, norm)
    }

    pub fn function(&self) -> Result<TestFunction> {
        let f = &self.function;
        match f.kind {
            FunctionKind::Bump => {
                let [a, b] = f.support.unwrap_or([0.5, 2.0]);
                TestFunction::real_bump(a, b)
            }
            FunctionKind::ComplexBump => {
                let [a, b] = f.support.unwrap_or([0.5, 2.0]);
                TestFunction::complex_bump(a, b)
            }
            FunctionKind::Extremizer => {
                let setting = self.setting()?;
                let q = setting.homogeneous_dim();
                let p = f.p.unwrap_or(2.0);
                let profile = RadialProfile::extremizer(
                    q,
                    p,
                    f.eps.unwrap_or(0.0),
                    f.inner.map(|[a, b]| (a, b)).unwrap_or((1e-3, 1e-2)),
                    f.outer.map(|[a, b]| (a, b)).unwrap_or((1e2, 1e3)),
                )?;
                Ok(TestFunction::separable(profile, crate::testfuncs::AngularPart::one()))
            }
        }
    }

    pub fn identity_path(&self, job: &IdentityJob) -> EvalPath {
        match job.path.unwrap_or(PathChoice::Separable) {
            PathChoice::Separable => EvalPath::Separable,
            PathChoice::General => EvalPath::General(self.method()),
        }
    }

    pub fn inequality_mode(&self, job: &IdentityJob) -> InequalityMode {
        match job.inequality.unwrap_or(InequalityChoice::Auto) {
            InequalityChoice::Auto => InequalityMode::Auto,
            InequalityChoice::Require => InequalityMode::Require,
        }
    }

    pub fn sharpness_target(&self, job: &SharpnessJob) -> Result<SharpnessTarget> {
        match job.inequality.as_str() {
            "hardy" | "hardy_lp" => Ok(SharpnessTarget::Hardy { p: job.p.unwrap_or(2.0) }),
            "weighted" | "weighted_l2" => {
                Ok(SharpnessTarget::Weighted { alpha: job.alpha.unwrap_or(0.0) })
            }
            "rellich" => Ok(SharpnessTarget::Rellich),
            "higher_order" => Ok(SharpnessTarget::HigherOrder {
                k: job.k.unwrap_or(1),
                alpha: job.alpha.unwrap_or(0.0),
            }),
            other => Err(Error::config(format!(
                "unknown sharpness inequality {other:?}; expected hardy, weighted, rellich \
                 or higher_order"
            ))),
        }
    }

    pub fn sharpness_family(
        &self,
        job: &SharpnessJob,
        target: &SharpnessTarget,
        q: f64,
    ) -> Result<ProfileFamily> {
        match job.family.unwrap_or(FamilyKind::Plateau) {
            FamilyKind::Plateau => {
                let bounds = job
                    .bounds
                    .as_ref()
                    .and_then(|b| b.first())
                    .map(|&[lo, hi]| (lo, hi))
                    .unwrap_or((1e-3, 0.25));
                ProfileFamily::plateau(*target, q, bounds)
            }
            FamilyKind::Bump => {
                let default = [[0.1, 1.0], [1.2, 8.0]];
                let bounds = job.bounds.as_deref().unwrap_or(&default);
                if bounds.len() != 2 {
                    return Err(Error::config(format!(
                        "bump family needs exactly 2 parameter bounds, got {}",
                        bounds.len()
                    )));
                }
                ProfileFamily::bump((bounds[0][0], bounds[0][1]), (bounds[1][0], bounds[1][1]))
            }
        }
    }

    /// Check every job precondition, returning all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut violations: Vec<String> = Vec::new();

        let setting = match self.setting() {
            Ok(s) => Some(s),
            Err(e) => {
                violations.push(format!("group/norm: {e}"));
                None
            }
        };
        let spec = self.quadrature_spec();
        if let Err(e) = spec.validate() {
            violations.push(format!("quad: {e}"));
        }
        if let Err(e) = self.method().validate() {
            violations.push(format!("calculus: {e}"));
        }
        let function = match self.function() {
            Ok(f) => Some(f),
            Err(e) => {
                violations.push(format!("function: {e}"));
                None
            }
        };

        if let (Some(setting), Some(function)) = (&setting, &function) {
            let q = setting.homogeneous_dim();
            let n = setting.dim();
            for (i, job) in self.identities.iter().enumerate() {
                for v in identity_job_violations(job, q, n, function) {
                    violations.push(format!("identities[{i}] ({}): {v}", job.id));
                }
            }
            for (i, job) in self.sharpness.iter().enumerate() {
                for v in self.sharpness_job_violations(job, q) {
                    violations.push(format!("sharpness[{i}] ({}): {v}", job.inequality));
                }
            }
        }

        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::config(violations.join("\n")))
        }
    }

    fn sharpness_job_violations(&self, job: &SharpnessJob, q: f64) -> Vec<String> {
        let mut out = Vec::new();
        let target = match self.sharpness_target(job) {
            Ok(t) => t,
            Err(e) => {
                out.push(e.to_string());
                return out;
            }
        };
        if let Err(e) = target.constant(q) {
            out.push(e.to_string());
            return out;
        }
        match job.mode.unwrap_or(SharpnessMode::Sweep) {
            SharpnessMode::Sweep => {
                let deltas = job.deltas.clone().unwrap_or_default();
                if deltas.is_empty() {
                    out.push("sweep needs a nonempty delta list".into());
                }
                if !deltas.iter().all(|&d| d > 0.0 && d < 0.5) {
                    out.push("every delta must lie in (0, 0.5)".into());
                }
                if deltas.windows(2).any(|w| !(w[1] < w[0])) {
                    out.push("delta list must be strictly decreasing".into());
                }
            }
            SharpnessMode::Optimize => {
                match self.sharpness_family(job, &target, q) {
                    Ok(family) => {
                        if let Some(start) = &job.start {
                            if start.len() != family.bounds().len() {
                                out.push(format!(
                                    "start point has {} coordinates, family has {}",
                                    start.len(),
                                    family.bounds().len()
                                ));
                            }
                        }
                    }
                    Err(e) => out.push(e.to_string()),
                }
                if job.max_iterations == Some(0) {
                    out.push("max_iterations must be at least 1".into());
                }
            }
        }
        out
    }
}

fn identity_job_violations(
    job: &IdentityJob,
    q: f64,
    n: usize,
    function: &TestFunction,
) -> Vec<String> {
    let mut out = Vec::new();
    let path = job.path.unwrap_or(PathChoice::Separable);
    let require = job.inequality == Some(InequalityChoice::Require);
    if path == PathChoice::General && n > 6 {
        out.push(format!("general path supports at most 6 dimensions, got {n}"));
    }
    let max_order = match function {
        TestFunction::Separable { profile, .. } => Some(profile.max_order()),
        TestFunction::General { .. } => None,
    };
    match job.id.as_str() {
        "hardy_lp" => {
            let p = job.p.unwrap_or(2.0);
            if !(p > 1.0 && p < q) {
                out.push(format!("1 < p < Q required, got p = {p}, Q = {q}"));
            }
            if !function.is_real() {
                out.push("hardy_lp needs a real-valued function; use hardy_l2".into());
            }
        }
        "hardy_l2" => {
            if q < 3.0 {
                out.push(format!("Q >= 3 required, got Q = {q}"));
            }
        }
        "weighted_l2" => {
            if q < 3.0 {
                out.push(format!("Q >= 3 required, got Q = {q}"));
            }
            let alpha = job.alpha.unwrap_or(0.0);
            if require && ((q - 2.0) / 2.0 - alpha).abs() < 1e-9 {
                out.push(format!(
                    "the inequality constant degenerates at alpha = {alpha} for Q = {q}"
                ));
            }
        }
        "rellich" => {
            if q < 5.0 {
                out.push(format!("Q >= 5 required, got Q = {q}"));
            }
            if max_order.is_some_and(|m| m < 2) {
                out.push("the function must supply second derivatives".into());
            }
        }
        "higher_order" => {
            let k = job.k.unwrap_or(1);
            let alpha = job.alpha.unwrap_or(0.0);
            if q < 3.0 {
                out.push(format!("Q >= 3 required, got Q = {q}"));
            }
            if k == 0 {
                out.push("k >= 1 required".into());
            }
            if max_order.is_some_and(|m| m < k) {
                out.push(format!("the function supplies derivatives up to {}, job needs {k}",
                    max_order.unwrap()));
            }
            if require {
                for l in 0..k {
                    if ((q - 2.0) / 2.0 - (alpha + l as f64)).abs() < 1e-9 {
                        out.push(format!(
                            "the inequality constant degenerates at Q = {q}, alpha = {alpha}, \
                             k = {k}: factor {l} of the coefficient product vanishes"
                        ));
                    }
                }
            }
        }
        "uncertainty" => {
            let p = job.p.unwrap_or(2.0);
            if !(p > 1.0 && p < q) {
                out.push(format!("1 < p < Q required, got p = {p}, Q = {q}"));
            }
        }
        "log_hardy" => {
            let p = job.p.unwrap_or(2.0);
            if !(p > 1.0) {
                out.push(format!("p > 1 required, got p = {p}"));
            }
            if path == PathChoice::General {
                out.push("log_hardy supports only the separable path".into());
            }
            let rs = job.r_values.clone().unwrap_or_default();
            if rs.is_empty() {
                out.push("r_values must be nonempty".into());
            }
            if !rs.iter().all(|&r| r > 0.0 && r.is_finite()) {
                out.push("every R must be positive and finite".into());
            }
        }
        "ibp" => {
            let p = job.p.unwrap_or(2.0);
            if !(p > 1.0 && p < q) {
                out.push(format!("1 < p < Q required, got p = {p}, Q = {q}"));
            }
        }
        "complex_reduction" => {
            let p = job.p.unwrap_or(2.0);
            if !(p >= 1.0) {
                out.push(format!("p >= 1 required, got p = {p}"));
            }
        }
        other => out.push(format!(
            "unknown identity {other:?}; expected hardy_lp, hardy_l2, weighted_l2, rellich, \
             higher_order, uncertainty, log_hardy, ibp or complex_reduction"
        )),
    }
    out
}
