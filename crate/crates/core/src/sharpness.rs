//! Sharp-constant probing.
//!
//! Each supported inequality has a closed-form best constant and a
//! one-parameter family of near-extremizers: a power-law plateau `r^gamma`
//! between smooth cutoffs whose logarithmic width grows as the parameter
//! `delta` shrinks. The plateau contributes mass proportional to
//! `log(1/delta)` to both sides of the inequality while the cutoff regions
//! stay O(1), so the Rayleigh quotient climbs toward the constant as
//! `delta -> 0` without ever attaining it. [`sharpness_sweep`] traces that
//! approach; [`optimize_constant`] searches a bounded profile family for the
//! best quotient with a derivative-free simplex.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Setting;
use crate::identities::engine::{GeneralEngine, SeparableEngine};
use crate::identities::{abs_pow, EvalPath, IdentityId, RadialCombo};
use crate::quadrature::QuadratureSpec;
use crate::testfuncs::{AngularPart, RadialProfile, TestFunction};

/// Inequality whose constant is being probed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SharpnessTarget {
    /// `|| f/|x| ||_p <= p/(Q-p) || Rf ||_p`.
    Hardy { p: f64 },
    /// `|| f/|x|^(alpha+1) ||_2 <= 2/|Q-2-2 alpha| * || |x|^-alpha Rf ||_2`.
    Weighted { alpha: f64 },
    /// `|| f/|x|^2 ||_2 <= 4/(Q(Q-4)) || R^2 f + (Q-1)/|x| Rf ||_2`.
    Rellich,
    /// `|| f/|x|^(k+alpha) ||_2 <= [prod_l |(Q-2)/2 - alpha - l|]^-1
    /// * || |x|^-alpha R^k f ||_2`.
    HigherOrder { k: usize, alpha: f64 },
}

impl SharpnessTarget {
    pub fn identity_id(&self) -> IdentityId {
        match self {
            SharpnessTarget::Hardy { .. } => IdentityId::HardyLp,
            SharpnessTarget::Weighted { .. } => IdentityId::WeightedL2,
            SharpnessTarget::Rellich => IdentityId::Rellich,
            SharpnessTarget::HigherOrder { .. } => IdentityId::HigherOrder,
        }
    }

    /// Lebesgue exponent of the two norms in the quotient.
    pub fn exponent(&self) -> f64 {
        match self {
            SharpnessTarget::Hardy { p } => *p,
            _ => 2.0,
        }
    }

    /// Highest derivative of the profile the quotient consumes.
    pub fn operator_order(&self) -> usize {
        match self {
            SharpnessTarget::Rellich => 2,
            SharpnessTarget::HigherOrder { k, .. } => *k,
            _ => 1,
        }
    }

    /// The closed-form best constant on a group of homogeneous dimension Q,
    /// or an error when the inequality does not apply there.
    pub fn constant(&self, q: f64) -> Result<f64> {
        match self {
            SharpnessTarget::Hardy { p } => {
                if !(*p > 1.0 && *p < q) {
                    return Err(Error::domain(format!(
                        "hardy sharpness requires 1 < p < Q = {q}, got p = {p}"
                    )));
                }
                Ok(p / (q - p))
            }
            SharpnessTarget::Weighted { alpha } => {
                if q < 3.0 {
                    return Err(Error::domain(format!(
                        "weighted sharpness requires Q >= 3, got Q = {q}"
                    )));
                }
                let c = (q - 2.0) / 2.0 - alpha;
                if c.abs() < 1e-9 {
                    return Err(Error::DegenerateConstant(format!(
                        "weighted constant degenerates at alpha = {alpha} for Q = {q}"
                    )));
                }
                Ok(1.0 / c.abs())
            }
            SharpnessTarget::Rellich => {
                if q < 5.0 {
                    return Err(Error::domain(format!(
                        "rellich sharpness requires Q >= 5, got Q = {q}"
                    )));
                }
                Ok(4.0 / (q * (q - 4.0)))
            }
            SharpnessTarget::HigherOrder { k, alpha } => {
                if q < 3.0 {
                    return Err(Error::domain(format!(
                        "higher-order sharpness requires Q >= 3, got Q = {q}"
                    )));
                }
                if *k == 0 {
                    return Err(Error::domain("higher-order sharpness requires k >= 1"));
                }
                let mut prod = 1.0;
                for l in 0..*k {
                    let c = (q - 2.0) / 2.0 - (alpha + l as f64);
                    if c.abs() < 1e-9 {
                        return Err(Error::DegenerateConstant(format!(
                            "higher-order constant degenerates at Q = {q}, alpha = {alpha}, \
                             k = {k}: factor {l} vanishes"
                        )));
                    }
                    prod *= c.abs();
                }
                Ok(1.0 / prod)
            }
        }
    }

    /// Homogeneity exponent of the formal extremizer: the power `r^gamma`
    /// whose weighted norms diverge logarithmically on both sides at once.
    pub fn extremizer_exponent(&self, q: f64) -> f64 {
        match self {
            SharpnessTarget::Hardy { p } => -(q - p) / p,
            SharpnessTarget::Weighted { alpha } => alpha + 1.0 - q / 2.0,
            SharpnessTarget::Rellich => 2.0 - q / 2.0,
            SharpnessTarget::HigherOrder { k, alpha } => *k as f64 + alpha - q / 2.0,
        }
    }

    /// Numerator and denominator of the quotient as weighted derivative
    /// combinations (coefficient, |x|-power, derivative order).
    fn combos(&self, q: f64) -> (RadialCombo, RadialCombo) {
        match self {
            SharpnessTarget::Hardy { .. } => (
                RadialCombo::new(vec![(1.0, -1.0, 0)]),
                RadialCombo::new(vec![(1.0, 0.0, 1)]),
            ),
            SharpnessTarget::Weighted { alpha } => (
                RadialCombo::new(vec![(1.0, -(alpha + 1.0), 0)]),
                RadialCombo::new(vec![(1.0, -alpha, 1)]),
            ),
            SharpnessTarget::Rellich => (
                RadialCombo::new(vec![(1.0, -2.0, 0)]),
                RadialCombo::new(vec![(1.0, 0.0, 2), (q - 1.0, -1.0, 1)]),
            ),
            SharpnessTarget::HigherOrder { k, alpha } => (
                RadialCombo::new(vec![(1.0, -(*k as f64 + alpha), 0)]),
                RadialCombo::new(vec![(1.0, -alpha, *k)]),
            ),
        }
    }

    fn params(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        match self {
            SharpnessTarget::Hardy { p } => {
                m.insert("p".into(), *p);
            }
            SharpnessTarget::Weighted { alpha } => {
                m.insert("alpha".into(), *alpha);
                m.insert("p".into(), 2.0);
            }
            SharpnessTarget::Rellich => {
                m.insert("p".into(), 2.0);
            }
            SharpnessTarget::HigherOrder { k, alpha } => {
                m.insert("k".into(), *k as f64);
                m.insert("alpha".into(), *alpha);
                m.insert("p".into(), 2.0);
            }
        }
        m
    }
}

/// Quotient of weighted norms whose supremum over admissible f is the sharp
/// constant. The angular factor of a separable function appears identically
/// in numerator and denominator and cancels; the general path integrates
/// both norms over the full space instead.
pub fn rayleigh_quotient(
    setting: &Setting,
    target: &SharpnessTarget,
    f: &TestFunction,
    path: EvalPath,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    let q = setting.homogeneous_dim();
    target.constant(q).or_else(|e| match e {
        // A degenerate constant makes the inequality vacuous but the
        // quotient itself is still well-defined; keep probing it.
        Error::DegenerateConstant(_) => Ok(0.0),
        other => Err(other),
    })?;
    let p = target.exponent();
    let kmax = target.operator_order();
    let (num, den) = target.combos(q);

    let (n_val, d_val) = match (&path, f) {
        (EvalPath::Separable, TestFunction::Separable { profile, angular }) => {
            angular.validate(setting.dim())?;
            if angular_vanishes(setting, angular) {
                return Err(Error::invalid(
                    "rayleigh quotient is undefined for the zero function",
                ));
            }
            let engine = SeparableEngine::new(profile, kmax, spec)?;
            let (vals, _) = engine.integrate_many(2, &|r, tw, out| {
                let meas = r.powf(q - 1.0);
                out[0] = abs_pow(num.eval_tower(r, tw), p) * meas;
                out[1] = abs_pow(den.eval_tower(r, tw), p) * meas;
            })?;
            (vals[0], vals[1])
        }
        (EvalPath::Separable, TestFunction::General { .. }) => {
            return Err(Error::capability(
                "separable path needs a separable test function",
            ));
        }
        (EvalPath::General(method), _) => {
            let engine = GeneralEngine::new(setting, f, *method, spec)?;
            let (vals, _) = engine.integrate_many(kmax, 2, &|_, r, jet, out| {
                out[0] = num.eval_jet(r, jet).norm().powf(p);
                out[1] = den.eval_jet(r, jet).norm().powf(p);
            })?;
            (vals[0], vals[1])
        }
    };

    if !(n_val.is_finite() && d_val.is_finite()) {
        return Err(Error::integration(format!(
            "rayleigh quotient produced non-finite norms {n_val} / {d_val}"
        )));
    }
    if d_val <= 0.0 {
        return Err(Error::invalid(
            "rayleigh quotient is undefined for the zero function",
        ));
    }
    Ok((n_val / d_val).powf(1.0 / p))
}

fn angular_vanishes(setting: &Setting, angular: &AngularPart) -> bool {
    // A handful of deterministic directions is enough for the angular
    // families we admit (constants, coordinate traces, combinations).
    let n = setting.dim();
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        dirs.push(e.clone());
        e[i] = -1.0;
        dirs.push(e);
    }
    dirs.push((0..n).map(|i| 1.0 + 0.25 * i as f64).collect());
    dirs.push((0..n).map(|i| if i % 2 == 0 { 0.7 } else { -0.4 }).collect());
    dirs.iter().all(|d| {
        let y = setting.sphere_project(d);
        angular.eval(&y).norm() < 1e-300
    })
}

/// One `delta`-indexed trace of the quotient on the plateau-extremizer
/// family, together with the closed-form target.
#[derive(Debug, Clone, Serialize)]
pub struct SharpnessCurve {
    pub inequality: IdentityId,
    pub params: BTreeMap<String, f64>,
    pub deltas: Vec<f64>,
    pub quotients: Vec<f64>,
    /// Whether the matching quotient evaluation succeeded; failed points
    /// keep their slot with a NaN quotient rather than disappearing.
    pub reliable: Vec<bool>,
    pub target_constant: f64,
    pub best_quotient: f64,
    /// target - best quotient; positive because the constant is approached,
    /// never attained.
    pub best_gap: f64,
    /// Quotients nondecreasing as delta shrinks (within quadrature noise).
    pub monotone: bool,
}

/// The plateau near-extremizer for a given delta: `r^gamma` on
/// [delta, 1/delta], taken smoothly to zero across [delta^3, delta] and
/// [1/delta, 1/delta^3] in logarithmic coordinates.
///
/// Cutoff windows whose width is fixed relative to the plateau edge (such as
/// [delta, 2*delta]) cost a fixed fraction of the quotient no matter how
/// small delta gets: the transition then has O(1) slope in log coordinates,
/// and a one-dimensional Dirichlet bound caps the quotient near 97% of the
/// constant. Widening the windows logarithmically (cubing the endpoints)
/// makes the transition cost vanish like 1/log(1/delta) instead.
pub fn plateau_extremizer(target: &SharpnessTarget, q: f64, delta: f64) -> Result<RadialProfile> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::domain(format!("delta must lie in (0, 0.5), got {delta}")));
    }
    let gamma = target.extremizer_exponent(q);
    RadialProfile::extremizer_gamma(gamma, (delta.powi(3), delta), (1.0 / delta, delta.powi(-3)))
}

/// Evaluate the quotient on the plateau family for each delta in a
/// decreasing list and report the approach to the sharp constant.
pub fn sharpness_sweep(
    setting: &Setting,
    target: &SharpnessTarget,
    deltas: &[f64],
    spec: &QuadratureSpec,
) -> Result<SharpnessCurve> {
    spec.validate()?;
    if deltas.is_empty() {
        return Err(Error::config("sharpness sweep needs at least one delta"));
    }
    for w in deltas.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::config(format!(
                "delta list must be strictly decreasing, got {} before {}",
                w[0], w[1]
            )));
        }
    }
    if !deltas.iter().all(|&d| d > 0.0 && d < 0.5) {
        return Err(Error::config("every delta must lie in (0, 0.5)"));
    }
    let q = setting.homogeneous_dim();
    let constant = target.constant(q)?;

    let mut quotients = Vec::with_capacity(deltas.len());
    let mut reliable = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let result = plateau_extremizer(target, q, delta).and_then(|profile| {
            let f = TestFunction::separable(profile, AngularPart::one());
            rayleigh_quotient(setting, target, &f, EvalPath::Separable, spec)
        });
        match result {
            Ok(v) => {
                quotients.push(v);
                reliable.push(true);
            }
            Err(_) => {
                quotients.push(f64::NAN);
                reliable.push(false);
            }
        }
    }
    let best_quotient = quotients
        .iter()
        .zip(&reliable)
        .filter(|(_, &ok)| ok)
        .map(|(&v, _)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    if !best_quotient.is_finite() {
        return Err(Error::integration(
            "every sweep point failed to evaluate; no quotient available",
        ));
    }
    let slack = 1e-9 * constant;
    let monotone = quotients
        .windows(2)
        .all(|w| !(w[0].is_finite() && w[1].is_finite()) || w[1] >= w[0] - slack);

    Ok(SharpnessCurve {
        inequality: target.identity_id(),
        params: target.params(),
        deltas: deltas.to_vec(),
        quotients,
        reliable,
        target_constant: constant,
        best_quotient,
        best_gap: constant - best_quotient,
        monotone,
    })
}

/// A profile family over a bounded parameter box, for quotient maximization.
#[derive(Clone)]
pub struct ProfileFamily {
    bounds: Vec<(f64, f64)>,
    build: Arc<dyn Fn(&[f64]) -> Result<RadialProfile> + Send + Sync>,
}

impl std::fmt::Debug for ProfileFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProfileFamily").field("bounds", &self.bounds).finish_non_exhaustive()
    }
}

impl ProfileFamily {
    pub fn new(
        bounds: Vec<(f64, f64)>,
        build: Arc<dyn Fn(&[f64]) -> Result<RadialProfile> + Send + Sync>,
    ) -> Result<Self> {
        if bounds.len() > 4 {
            return Err(Error::config(format!(
                "profile families support at most 4 parameters, got {}",
                bounds.len()
            )));
        }
        if !bounds.iter().all(|&(lo, hi)| lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::config("family parameter bounds must be finite with lo < hi"));
        }
        Ok(ProfileFamily { bounds, build })
    }

    /// Smooth bumps with free support endpoints (a, b).
    pub fn bump(a_range: (f64, f64), b_range: (f64, f64)) -> Result<Self> {
        Self::new(
            vec![a_range, b_range],
            Arc::new(|p: &[f64]| RadialProfile::smooth_bump(p[0], p[1])),
        )
    }

    /// The delta-indexed plateau family of [`plateau_extremizer`].
    pub fn plateau(
        target: SharpnessTarget,
        q: f64,
        delta_range: (f64, f64),
    ) -> Result<Self> {
        Self::new(
            vec![delta_range],
            Arc::new(move |p: &[f64]| plateau_extremizer(&target, q, p[0])),
        )
    }

    /// A single fixed profile with no free parameters.
    pub fn fixed(profile: RadialProfile) -> Self {
        ProfileFamily { bounds: vec![], build: Arc::new(move |_| Ok(profile.clone())) }
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn build(&self, params: &[f64]) -> Result<RadialProfile> {
        if params.len() != self.bounds.len() {
            return Err(Error::invalid(format!(
                "family expects {} parameters, got {}",
                self.bounds.len(),
                params.len()
            )));
        }
        (self.build)(params)
    }
}

/// Outcome of a simplex search over a profile family.
#[derive(Debug, Clone, Serialize)]
pub struct OptimizeResult {
    pub best_quotient: f64,
    pub best_params: Vec<f64>,
    pub target_constant: f64,
    pub gap: f64,
    pub evaluations: usize,
    pub iterations: usize,
}

/// Maximize the Rayleigh quotient over the family with a bounded, fully
/// deterministic Nelder-Mead search (at most `max_iterations` iterations —
/// 200 is the standard cap — terminating early when the simplex diameter
/// falls below 1e-6). Parameter points outside the box or yielding a
/// failed/non-finite quotient are rejected as +inf and the search continues
/// around them.
pub fn optimize_constant(
    setting: &Setting,
    target: &SharpnessTarget,
    family: &ProfileFamily,
    start: Option<&[f64]>,
    max_iterations: usize,
    spec: &QuadratureSpec,
) -> Result<OptimizeResult> {
    spec.validate()?;
    if max_iterations == 0 {
        return Err(Error::config("max_iterations must be at least 1"));
    }
    let q = setting.homogeneous_dim();
    let constant = target.constant(q)?;
    let m = family.bounds().len();

    let mut evaluations = 0usize;
    let mut objective = |params: &[f64]| -> f64 {
        evaluations += 1;
        for (v, &(lo, hi)) in params.iter().zip(family.bounds()) {
            if !(*v >= lo && *v <= hi) {
                return f64::INFINITY;
            }
        }
        let quotient = family.build(params).and_then(|profile| {
            let f = TestFunction::separable(profile, AngularPart::one());
            rayleigh_quotient(setting, target, &f, EvalPath::Separable, spec)
        });
        match quotient {
            Ok(v) if v.is_finite() => -v,
            _ => f64::INFINITY,
        }
    };

    if m == 0 {
        let v = objective(&[]);
        if !v.is_finite() {
            return Err(Error::invalid("the fixed profile has no finite quotient"));
        }
        return Ok(OptimizeResult {
            best_quotient: -v,
            best_params: vec![],
            target_constant: constant,
            gap: constant + v,
            evaluations,
            iterations: 0,
        });
    }

    // Initial simplex: the start point (box midpoint by default) plus one
    // vertex per coordinate, displaced a quarter of the box width toward
    // whichever side has room.
    let x0: Vec<f64> = match start {
        Some(s) => {
            if s.len() != m {
                return Err(Error::config(format!(
                    "start point has {} coordinates, family has {m}",
                    s.len()
                )));
            }
            s.to_vec()
        }
        None => family.bounds().iter().map(|&(lo, hi)| 0.5 * (lo + hi)).collect(),
    };
    let mut simplex: Vec<Vec<f64>> = vec![x0.clone()];
    for i in 0..m {
        let (lo, hi) = family.bounds()[i];
        let step = 0.25 * (hi - lo);
        let mut v = x0.clone();
        v[i] = if v[i] + step <= hi { v[i] + step } else { v[i] - step };
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| objective(v)).collect();

    let mut iterations = 0usize;
    for _ in 0..max_iterations {
        iterations += 1;
        // Order best to worst.
        let mut idx: Vec<usize> = (0..simplex.len()).collect();
        idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let ordered: Vec<Vec<f64>> = idx.iter().map(|&i| simplex[i].clone()).collect();
        let ordered_vals: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        simplex = ordered;
        values = ordered_vals;

        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if diameter < 1e-6 {
            break;
        }

        let centroid: Vec<f64> = (0..m)
            .map(|j| simplex[..m].iter().map(|v| v[j]).sum::<f64>() / m as f64)
            .collect();
        let worst = simplex[m].clone();
        let reflect: Vec<f64> =
            centroid.iter().zip(&worst).map(|(c, w)| c + (c - w)).collect();
        let f_r = objective(&reflect);

        if f_r < values[0] {
            let expand: Vec<f64> =
                centroid.iter().zip(&worst).map(|(c, w)| c + 2.0 * (c - w)).collect();
            let f_e = objective(&expand);
            if f_e < f_r {
                simplex[m] = expand;
                values[m] = f_e;
            } else {
                simplex[m] = reflect;
                values[m] = f_r;
            }
        } else if f_r < values[m - 1] {
            simplex[m] = reflect;
            values[m] = f_r;
        } else {
            let contract: Vec<f64> =
                centroid.iter().zip(&worst).map(|(c, w)| c + 0.5 * (w - c)).collect();
            let f_c = objective(&contract);
            if f_c < values[m] {
                simplex[m] = contract;
                values[m] = f_c;
            } else {
                // Shrink toward the best vertex.
                for i in 1..=m {
                    let shrunk: Vec<f64> = simplex[i]
                        .iter()
                        .zip(&simplex[0])
                        .map(|(v, b)| b + 0.5 * (v - b))
                        .collect();
                    values[i] = objective(&shrunk);
                    simplex[i] = shrunk;
                }
            }
        }
    }

    let (best_i, &best_v) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    if !best_v.is_finite() {
        return Err(Error::integration(
            "simplex search found no parameter point with a finite quotient",
        ));
    }
    Ok(OptimizeResult {
        best_quotient: -best_v,
        best_params: simplex[best_i].clone(),
        target_constant: constant,
        gap: constant + best_v,
        evaluations,
        iterations,
    })
}
