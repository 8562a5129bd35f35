//! Shared evaluation machinery for the identity reporters.
//!
//! Every report integrates a handful of related quantities. Two paths exist:
//!
//! * separable path: for profile-times-angular functions each integral
//!   factors into a 1D radial integral against r^(Q-1) dr times a surface
//!   factor int |u|^p dsigma; all radial integrands are evaluated on one
//!   shared node set, so the errors of related terms cancel in residuals;
//! * general path: one full-dimensional cubature pass evaluates all the
//!   report's integrands together, with the radial-derivative jet computed
//!   once per node.

use crate::calculus::{orbit_jet, RadialOperatorMethod};
use crate::error::{Error, Result};
use crate::group::Setting;
use crate::quadrature::{
    integrate_lebesgue_many, panel_nodes, sphere_integrate, QuadratureSpec, Scale,
};
use crate::testfuncs::{AngularPart, RadialProfile, TestFunction};
use crate::util::{Accum, Tower};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Which evaluation strategy a reporter uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalPath {
    /// Profile-times-angular factorization with analytic derivatives.
    Separable,
    /// Pointwise evaluation over a full-dimensional cubature with the given
    /// derivative method.
    General(RadialOperatorMethod),
}

impl EvalPath {
    /// Pass tolerance associated with the path: ten times the target
    /// quadrature tolerance, since a residual combines several integrals.
    pub fn tolerance(&self, spec: &QuadratureSpec) -> f64 {
        match self {
            EvalPath::Separable => 10.0 * spec.tol_separable,
            EvalPath::General(_) => 10.0 * spec.tol_general,
        }
    }
}

/// |v|^e with 0^e = 0 also for negative e (the zero set is always removable
/// in the integrands we form).
pub(crate) fn abs_pow(v: f64, e: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.abs().powf(e)
    }
}

/// sgn(v) |v|^e with the same zero convention.
pub(crate) fn signed_pow(v: f64, e: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * v.abs().powf(e)
    }
}

/// A linear combination sum_i c_i |x|^(e_i) (R^(j_i) f)(x) of weighted
/// radial derivatives: the shape of every term in the L2 identities. For a
/// separable f the combination collapses to a radial function times the
/// angular part.
#[derive(Debug, Clone)]
pub struct RadialCombo {
    pub parts: Vec<(f64, f64, usize)>,
}

impl RadialCombo {
    pub fn new(parts: Vec<(f64, f64, usize)>) -> Self {
        RadialCombo { parts }
    }

    pub fn kmax(&self) -> usize {
        self.parts.iter().map(|&(_, _, j)| j).max().unwrap_or(0)
    }

    /// Radial value from a profile derivative tower.
    pub fn eval_tower(&self, r: f64, tw: &Tower) -> f64 {
        let mut s = 0.0;
        for &(c, e, j) in &self.parts {
            s += c * r.powf(e) * tw[j];
        }
        s
    }

    /// Pointwise value from a derivative jet at a point with |x| = r.
    pub fn eval_jet(&self, r: f64, jet: &[Complex64]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for &(c, e, j) in &self.parts {
            s += c * r.powf(e) * jet[j];
        }
        s
    }
}

/// Radial quadrature over a profile's support with precomputed derivative
/// towers on fine and coarse node sets (the coarse set drives the error
/// estimate). Integrands receive (r, tower) and must include any measure
/// factor such as r^(Q-1) themselves.
pub(crate) struct SeparableEngine {
    fine: Vec<(f64, f64)>,
    coarse: Vec<(f64, f64)>,
    tw_fine: Vec<Tower>,
    tw_coarse: Vec<Tower>,
}

impl SeparableEngine {
    pub fn new(profile: &RadialProfile, kmax: usize, spec: &QuadratureSpec) -> Result<Self> {
        let (a, b) = profile.support().ok_or_else(|| {
            Error::capability("integral reporters need a compactly supported profile")
        })?;
        if kmax > profile.max_order() {
            return Err(Error::capability(format!(
                "profile supplies derivatives up to order {}, report needs {kmax}",
                profile.max_order()
            )));
        }
        let fine = panel_nodes(a, b, Scale::Log, spec.radial_order, spec.radial_panels);
        let coarse_order = if spec.radial_order > 5 {
            spec.radial_order - 4
        } else {
            spec.radial_order + 1
        };
        let coarse = panel_nodes(a, b, Scale::Log, coarse_order, spec.radial_panels);
        let tw_fine =
            fine.iter().map(|&(r, _)| profile.tower(r, kmax)).collect::<Result<Vec<_>>>()?;
        let tw_coarse =
            coarse.iter().map(|&(r, _)| profile.tower(r, kmax)).collect::<Result<Vec<_>>>()?;
        Ok(SeparableEngine { fine, coarse, tw_fine, tw_coarse })
    }

    /// Integrate m radial components on the shared grid; returns values and
    /// per-component error estimates.
    pub fn integrate_many(
        &self,
        m: usize,
        eval: &dyn Fn(f64, &Tower, &mut [f64]),
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let pass = |nodes: &[(f64, f64)], towers: &[Tower]| -> Result<Vec<f64>> {
            let mut sums: Vec<Accum> = (0..m).map(|_| Accum::new()).collect();
            let mut vals = vec![0.0; m];
            for (&(r, w), tw) in nodes.iter().zip(towers) {
                eval(r, tw, &mut vals);
                for (c, (acc, &v)) in sums.iter_mut().zip(&vals).enumerate() {
                    if !v.is_finite() {
                        return Err(Error::integration(format!(
                            "radial integrand component {c} returned {v} at r = {r}"
                        )));
                    }
                    acc.add(w * v);
                }
            }
            Ok(sums.into_iter().map(|a| a.value()).collect())
        };
        let fine = pass(&self.fine, &self.tw_fine)?;
        let coarse = pass(&self.coarse, &self.tw_coarse)?;
        let errs = fine.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).collect();
        Ok((fine, errs))
    }
}

fn angular_key(a: &AngularPart) -> String {
    match a {
        AngularPart::Constant(c) => format!("c{:x};{:x}", c.re.to_bits(), c.im.to_bits()),
        AngularPart::CoordinateTrace { index, power } => format!("t{index}^{power}"),
        AngularPart::Combination(parts) => {
            let inner: Vec<String> = parts
                .iter()
                .map(|(c, a)| {
                    format!("({:x};{:x}){}", c.re.to_bits(), c.im.to_bits(), angular_key(a))
                })
                .collect();
            format!("[{}]", inner.join(","))
        }
    }
}

fn sphere_cache() -> &'static Mutex<HashMap<String, (f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<String, (f64, f64)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// int |u(y)|^p dsigma over the unit quasi-sphere, memoized: suites evaluate
/// the same angular factor for every report in a cell, and the surface
/// cubature is the expensive part of the separable path.
pub(crate) fn sphere_factor(
    setting: &Setting,
    angular: &AngularPart,
    p: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let key = format!(
        "{:?}|{:?}|{}|{:x}|{}|{:x}|{}|{}",
        setting.group().weights(),
        setting.norm(),
        angular_key(angular),
        p.to_bits(),
        spec.cubature_points_per_dim,
        spec.annulus_lambda.to_bits(),
        spec.mc_samples,
        spec.seed,
    );
    if let Some(hit) = sphere_cache().lock().unwrap().get(&key) {
        return Ok(*hit);
    }
    let value = sphere_integrate(setting, &|y| angular.eval(y).norm().powf(p), spec)?;
    sphere_cache().lock().unwrap().insert(key, value);
    Ok(value)
}

/// Full-dimensional evaluation context for the general path.
pub(crate) struct GeneralEngine<'a> {
    setting: &'a Setting,
    f: &'a TestFunction,
    method: RadialOperatorMethod,
    spec: &'a QuadratureSpec,
}

impl<'a> GeneralEngine<'a> {
    pub fn new(
        setting: &'a Setting,
        f: &'a TestFunction,
        method: RadialOperatorMethod,
        spec: &'a QuadratureSpec,
    ) -> Result<Self> {
        method.validate()?;
        Ok(GeneralEngine { setting, f, method, spec })
    }

    /// One cubature pass over m components. The callback receives the
    /// point, its quasi-norm r > 0, and the derivative jet
    /// [f, Rf, ..., R^kmax f] at the point.
    pub fn integrate_many(
        &self,
        kmax: usize,
        m: usize,
        eval: &dyn Fn(&[f64], f64, &[Complex64], &mut [f64]),
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let domain = self.f.support_box(self.setting)?;
        if !(domain.rho0 > 0.0) {
            return Err(Error::invalid(
                "general-path reports need support bounded away from the origin (rho0 > 0)",
            ));
        }
        // Outside the radial support (with a margin wide enough to cover
        // every stencil sample) the jet is identically zero and the
        // components vanish; skipping those points avoids most of the work
        // and any spurious arithmetic on empty regions.
        let skip_band = match (&self.method, self.f.radial_support()) {
            (RadialOperatorMethod::FiniteDifference { h, .. }, Some((a, b))) => {
                Some((a / (1.0 + 3.0 * h), b * (1.0 + 3.0 * h)))
            }
            (RadialOperatorMethod::Analytic, Some((a, b))) => Some((a, b)),
            _ => None,
        };
        let integrand = |x: &[f64], out: &mut [f64]| {
            let r = self.setting.norm_of(x);
            if let Some((lo, hi)) = skip_band {
                if r < lo || r > hi {
                    out.fill(0.0);
                    return;
                }
            }
            match orbit_jet(self.setting, self.f, x, kmax, &self.method) {
                Ok(jet) => eval(x, r, &jet, out),
                // NaN propagates to the cubature's finiteness check, which
                // reports the offending node.
                Err(_) => out.fill(f64::NAN),
            }
        };
        integrate_lebesgue_many(self.setting, m, &integrand, &domain, self.spec)
    }
}

/// Component integrals for a report, dispatched by path.
///
/// * `sphere_ps[i]` is the exponent p of the surface factor int |u|^p that
///   multiplies component i on the separable path.
/// * `sep_eval` computes the radial integrands (including measure factors)
///   from (r, tower).
/// * `gen_eval` computes the pointwise integrands from (x, r, jet).
///
/// Returns the component values and one aggregate quadrature-error
/// estimate.
#[allow(clippy::too_many_arguments)]
pub(crate) fn integrate_forms(
    setting: &Setting,
    f: &TestFunction,
    path: EvalPath,
    spec: &QuadratureSpec,
    kmax: usize,
    sphere_ps: &[f64],
    sep_eval: &dyn Fn(f64, &Tower, &mut [f64]),
    gen_eval: &dyn Fn(&[f64], f64, &[Complex64], &mut [f64]),
) -> Result<(Vec<f64>, f64)> {
    let m = sphere_ps.len();
    match path {
        EvalPath::Separable => {
            let (profile, angular) = match f {
                TestFunction::Separable { profile, angular } => (profile, angular),
                TestFunction::General { .. } => {
                    return Err(Error::capability(
                        "separable evaluation path needs a profile-times-angular function",
                    ))
                }
            };
            let se = SeparableEngine::new(profile, kmax, spec)?;
            let (ints, errs) = se.integrate_many(m, sep_eval)?;
            let mut values = Vec::with_capacity(m);
            let mut err_total = Accum::new();
            for i in 0..m {
                let (s, s_err) = sphere_factor(setting, angular, sphere_ps[i], spec)?;
                values.push(ints[i] * s);
                err_total.add(errs[i] * s + ints[i].abs() * s_err);
            }
            Ok((values, err_total.value()))
        }
        EvalPath::General(method) => {
            let ge = GeneralEngine::new(setting, f, method, spec)?;
            let (values, errs) = ge.integrate_many(kmax, m, gen_eval)?;
            Ok((values, errs.iter().sum()))
        }
    }
}

/// Squared-norm integrals of several derivative combinations: the workhorse
/// for the L2 identity family. Returns one value per combo (surface factor
/// included on the separable path) plus the aggregate error estimate.
pub(crate) fn norm_sq_terms(
    setting: &Setting,
    f: &TestFunction,
    combos: &[RadialCombo],
    path: EvalPath,
    spec: &QuadratureSpec,
) -> Result<(Vec<f64>, f64)> {
    let kmax = combos.iter().map(|c| c.kmax()).max().unwrap_or(0);
    let q = setting.homogeneous_dim();
    let sphere_ps = vec![2.0; combos.len()];
    integrate_forms(
        setting,
        f,
        path,
        spec,
        kmax,
        &sphere_ps,
        &|r, tw, out| {
            let w = r.powf(q - 1.0);
            for (slot, combo) in out.iter_mut().zip(combos) {
                let v = combo.eval_tower(r, tw);
                *slot = v * v * w;
            }
        },
        &|_x, r, jet, out| {
            for (slot, combo) in out.iter_mut().zip(combos) {
                *slot = combo.eval_jet(r, jet).norm_sqr();
            }
        },
    )
}
