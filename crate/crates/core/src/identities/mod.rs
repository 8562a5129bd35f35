//! Reporters for the weighted-norm identities and inequalities attached to
//! the radial operator.
//!
//! Each reporter evaluates every named term of one identity by quadrature
//! and returns an [`IdentityReport`]: the two sides, the residual, and the
//! list of remainder terms whose nonnegativity carries the inequality
//! direction. Equalities are checked as |lhs - rhs|; inequality-only
//! reporters record the violation (zero when the inequality holds).

pub(crate) mod engine;

pub use engine::{EvalPath, RadialCombo};
pub(crate) use engine::{abs_pow, signed_pow};

use crate::error::{Error, Result};
use crate::group::Setting;
use crate::quadrature::{integrate_1d_with_breaks, QuadratureSpec, Scale};
use crate::testfuncs::TestFunction;
use engine::{integrate_forms, norm_sq_terms, sphere_factor, SeparableEngine};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Which identity a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    HardyLp,
    HardyL2,
    WeightedL2,
    Rellich,
    HigherOrder,
    Uncertainty,
    LogHardy,
    Ibp,
    ComplexReduction,
}

impl IdentityId {
    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::HardyLp => "hardy_lp",
            IdentityId::HardyL2 => "hardy_l2",
            IdentityId::WeightedL2 => "weighted_l2",
            IdentityId::Rellich => "rellich",
            IdentityId::HigherOrder => "higher_order",
            IdentityId::Uncertainty => "uncertainty",
            IdentityId::LogHardy => "log_hardy",
            IdentityId::Ibp => "ibp",
            IdentityId::ComplexReduction => "complex_reduction",
        }
    }
}

impl std::fmt::Display for IdentityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether a reporter must refuse when its inequality constant degenerates,
/// or may verify the identity alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityMode {
    #[default]
    Auto,
    Require,
}

/// Outcome of evaluating one identity on one function.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity: IdentityId,
    pub params: BTreeMap<String, f64>,
    pub terms: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub remainders: Vec<f64>,
    pub pass: bool,
    pub quad_error: f64,
    #[serde(skip)]
    pub tolerance: f64,
}

/// Claim direction: lhs = rhs, lhs >= rhs, or lhs <= rhs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Claim {
    Equal,
    GreaterEq,
    LessEq,
}

const REL_FLOOR: f64 = 1e-30;

#[allow(clippy::too_many_arguments)]
fn build_report(
    identity: IdentityId,
    params: BTreeMap<String, f64>,
    terms: BTreeMap<String, f64>,
    lhs: f64,
    rhs: f64,
    claim: Claim,
    remainders: Vec<f64>,
    quad_error: f64,
    tolerance: f64,
) -> IdentityReport {
    let abs_residual = match claim {
        Claim::Equal => (lhs - rhs).abs(),
        Claim::GreaterEq => (rhs - lhs).max(0.0),
        Claim::LessEq => (lhs - rhs).max(0.0),
    };
    let rel_residual = abs_residual / lhs.abs().max(rhs.abs()).max(REL_FLOOR);
    let pass = rel_residual < tolerance && remainders.iter().all(|&r| r >= -10.0 * tolerance);
    IdentityReport {
        identity,
        params,
        terms,
        lhs,
        rhs,
        abs_residual,
        rel_residual,
        remainders,
        pass,
        quad_error,
        tolerance,
    }
}

fn params_of(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

// ---------------------------------------------------------------------------
// The p-homogeneous interpolation weight
// ---------------------------------------------------------------------------

/// I_p(h, g) = (p - 1) int_0^1 |xi h + (1 - xi) g|^(p-2) xi dxi, evaluated
/// in closed form. The antiderivative of |s|^(p-2) (s - g) is
/// |s|^p / p - g sgn(s) |s|^(p-1) / (p - 1), which stays finite across a
/// sign change of the segment for every p > 1, so the integrable
/// singularity at p < 2 needs no special-casing. The closed form cancels
/// catastrophically when the segment is short relative to its distance from
/// zero; a binomial series around the midpoint takes over there.
pub fn i_p_weight(h: f64, g: f64, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::domain(format!("interpolation weight needs p > 1, got {p}")));
    }
    if !h.is_finite() || !g.is_finite() {
        return Err(Error::invalid("interpolation weight needs finite arguments"));
    }
    let scale = h.abs().max(g.abs());
    if scale == 0.0 {
        // Constant-zero segment: |0|^(p-2) is 1 at p = 2, 0 for p > 2, and
        // divergent below.
        return if p == 2.0 {
            Ok(0.5)
        } else if p > 2.0 {
            Ok(0.0)
        } else {
            Err(Error::domain("interpolation weight diverges at h = g = 0 for p < 2"))
        };
    }
    let d = h - g;
    let m = 0.5 * (h + g);
    if h * g > 0.0 && d.abs() <= 0.5 * m.abs() {
        // Same-sign short segment: with u = 2 xi - 1 and t = d / (2 m),
        //   I_p = (p-1) |m|^(p-2) / 4 * int_{-1}^{1} (1 + u t)^(p-2) (1 + u) du
        // and the integrand expands into sum_k C(p-2, k) t^k u^k (1 + u),
        // whose u-moments are 2/(k+1) for even k and 2/(k+2) for odd k.
        // |t| <= 1/4 here, so the tail decays at least geometrically.
        let t = 0.5 * d / m;
        let mut coeff = 1.0; // C(p-2, k)
        let mut tk = 1.0; // t^k
        let mut sum = 0.0;
        for k in 0..60u32 {
            let w = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 2.0 / (k as f64 + 2.0) };
            let term = coeff * tk * w;
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
            coeff *= (p - 2.0 - k as f64) / (k as f64 + 1.0);
            tk *= t;
        }
        return Ok((0.25 * (p - 1.0) * abs_pow(m, p - 2.0) * sum).max(0.0));
    }
    let anti = |y: f64| abs_pow(y, p) / p - g * signed_pow(y, p - 1.0) / (p - 1.0);
    let value = (p - 1.0) / (d * d) * (anti(h) - anti(g));
    Ok(value.max(0.0))
}

/// p I_p(v, u) (v - u)^2: the remainder density of the L^p identity.
///
/// Evaluated without ever dividing by (v - u)^2: multiplying the closed form
/// of I_p by the squared gap leaves p (p - 1) (anti(v) - anti(u)), which is
/// stable even where both arguments underflow near the support boundary.
fn remainder_density(v: f64, u: f64, p: f64) -> f64 {
    let d = v - u;
    if d == 0.0 {
        return 0.0;
    }
    let m = 0.5 * (v + u);
    if v * u > 0.0 && d.abs() <= 0.5 * m.abs() {
        // The series branch of the weight is relative-accurate here, and the
        // condition guarantees it never divides by the squared gap.
        return match i_p_weight(v, u, p) {
            Ok(w) => (p * w * d * d).max(0.0),
            Err(_) => f64::NAN,
        };
    }
    let anti = |y: f64| abs_pow(y, p) / p - u * signed_pow(y, p - 1.0) / (p - 1.0);
    (p * (p - 1.0) * (anti(v) - anti(u))).max(0.0)
}

// ---------------------------------------------------------------------------
// L^p Hardy identity
// ---------------------------------------------------------------------------

/// ||u||_p^p - ||v||_p^p = p int I_p(v, u) |v - u|^2 dx with
/// u = -(p/(Q-p)) Rf and v = f/|x|, for real-valued f; the nonnegative
/// right-hand side carries the L^p Hardy inequality with constant p/(Q-p).
pub fn hardy_lp_report(
    setting: &Setting,
    f: &TestFunction,
    p: f64,
    path: EvalPath,
    spec: &QuadratureSpec,
) -> Result<IdentityReport> {
    spec.validate()?;
    let q = setting.homogeneous_dim();
    if !(p > 1.0 && p < q) {
        return Err(Error::domain(format!("hardy_lp requires 1 < p < Q = {q}, got p = {p}")));
    }
    if !f.is_real() {
        return Err(Error::domain(
            "hardy_lp is stated for real-valued functions; use hardy_l2 for complex data",
        ));
    }
    let c = p / (q - p);
    let (vals, quad_error) = integrate_forms(
        setting,
        f,
        path,
        spec,
        1,
        &[p, p, p],
        &|r, tw, out| {
            let w = r.powf(q - 1.0);
            let u = -c * tw[1];
            let v = tw[0] / r;
            out[0] = abs_pow(u, p) * w;
            out[1] = abs_pow(v, p) * w;
            out[2] = remainder_density(v, u, p) * w;
        },
        &|_x, r, jet, out| {
            let u = -c * jet[1].re;
            let v = jet[0].re / r;
            out[0] = abs_pow(u, p);
            out[1] = abs_pow(v, p);
            out[2] = remainder_density(v, u, p);
        },
    )?;
    let lhs = vals[0] - vals[1];
    let rhs = vals[2];
    let terms = [
        ("norm_p_scaled_derivative", vals[0]),
        ("norm_p_weighted_function", vals[1]),
        ("remainder_integral", vals[2]),
        ("hardy_constant", c),
    ];
    Ok(build_report(
        IdentityId::HardyLp,
        params_of(&[("p", p), ("q_hom", q)]),
        terms.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        lhs,
        rhs,
        Claim::Equal,
        vec![vals[2], vals[0] - vals[1]],
        quad_error,
        path.tolerance(spec),
    ))
}

// ---------------------------------------------------------------------------
// L^2 Hardy identity
// ---------------------------------------------------------------------------

/// ||Rf||^2 = ((Q-2)/2)^2 ||f/|x|||^2 + ||Rf + ((Q-2)/2) f/|x|||^2 for
/// complex-valued f; the remainder norm carries the L^2 Hardy inequality.
pub fn hardy_l2_report(
    setting: &Setting,
    f: &TestFunction,
    path: EvalPath,
    spec: &QuadratureSpec,
) -> Result<IdentityReport> {
    spec.validate()?;
    let q = setting.homogeneous_dim();
    if q < 3.0 {
        return Err(Error::domain(format!("hardy_l2 requires Q >= 3, got Q = {q}")));
    }
    let c = (q - 2.0) / 2.0;
    let combos = [
        RadialCombo::new(vec![(1.0, 0.0, 1)]),
        RadialCombo::new(vec![(1.0, -1.0, 0)]),
        RadialCombo::new(vec![(1.0, 0.0, 1), (c, -1.0, 0)]),
    ];
    let (t, quad_error) = norm_sq_terms(setting, f, &combos, path, spec)?;
    let lhs = t[0];
    let rhs = c * c * t[1] + t[2];
    let terms = [
        ("norm_sq_derivative", t[0]),
        ("norm_sq_weighted_function", t[1]),
        ("norm_sq_remainder", t[2]),
        ("hardy_constant", 2.0 / (q - 2.0)),
    ];
    Ok(build_report(
        IdentityId::HardyL2,
        params_of(&[("p", 2.0), ("q_hom", q)]),
        terms.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        lhs,
        rhs,
        Claim::Equal,
        vec![t[2], t[0] - c * c * t[1]],
        quad_error,
        path.tolerance(spec),
    ))
}

// ---------------------------------------------------------------------------
// Weighted L^2 identity
// ---------------------------------------------------------------------------

/// || |x|^(-a) Rf ||^2 = ((Q-2)/2 - a)^2 || f/|x|^(a+1) ||^2 + remainder
/// norm; when Q - 2 - 2a != 0 the inequality constant is 2/|Q - 2 - 2a|.
pub fn weighted_l2_report(
    setting: &Setting,
    f: &TestFunction,
    alpha: f64,
    inequality: InequalityMode,
    path: EvalPath,
    spec: &QuadratureSpec,
) -> Result<IdentityReport> {
    spec.validate()?;
    let q = setting.homogeneous_dim();
    if q < 3.0 {
        return Err(Error::domain(format!("weighted_l2 requires Q >= 3, got Q = {q}")));
    }
    let c = (q - 2.0) / 2.0 - alpha;
    let degenerate = c.abs() < 1e-9;
    if degenerate && inequality == InequalityMode::Require {
        return Err(Error::DegenerateConstant(format!(
            "weighted inequality constant is undefined at alpha = (Q-2)/2 (Q = {q}, alpha = {alpha})"
        )));
    }
    let combos = [
        RadialCombo::new(vec![(1.0, -alpha, 1)]),
        RadialCombo::new(vec![(1.0, -alpha - 1.0, 0)]),
        RadialCombo::new(vec![(1.0, -alpha, 1), (c, -alpha - 1.0, 0)]),
    ];
    let (t, quad_error) = norm_sq_terms(setting, f, &combos, path, spec)?;
    let lhs = t[0];
    let rhs = c * c * t[1] + t[2];
    let mut terms: BTreeMap<String, f64> = [
        ("norm_sq_weighted_derivative", t[0]),
        ("norm_sq_weighted_function", t[1]),
        ("norm_sq_remainder", t[2]),
        ("coefficient", c),
    ]
    .iter()
    .map(|&(k, v)| (k.to_string(), v))
    .collect();
    if !degenerate {
        terms.insert("inequality_constant".to_string(), 1.0 / c.abs());
    }
    Ok(build_report(
        IdentityId::WeightedL2,
        params_of(&[("alpha", alpha), ("q_hom", q)]),
        terms,
        lhs,
        rhs,
        Claim::Equal,
        vec![t[2], t[0] - c * c * t[1]],
        quad_error,
        path.tolerance(spec),
    ))
}

// ---------------------------------------------------------------------------
// Rellich-type identity
// ---------------------------------------------------------------------------

/// Second-order identity: with L f = R^2 f + (Q-1)|x|^(-1) Rf,
///
/// ||Lf + (Q(Q-4)/4)|x|^(-2) f||^2 + (Q(Q-4)/2)||x|^(-1) Rf +
/// ((Q-4)/2)|x|^(-2) f||^2 = ||Lf||^2 - (Q(Q-4)/4)^2 ||f/|x|^2||^2,
///
/// carrying the inequality ||f/|x|^2|| <= 4/(Q(Q-4)) ||Lf|| for Q >= 5.
pub fn rellich_report(
    setting: &Setting,
    f: &TestFunction,
    path: EvalPath,
    spec: &QuadratureSpec,
) -> Result<IdentityReport> {
    spec.validate()?;
    let q = setting.homogeneous_dim();
    if q < 5.0 {
        return Err(Error::domain(format!("rellich requires Q >= 5, got Q = {q}")));
    }
    let m = q * (q - 4.0) / 4.0;
    let combos = [
        RadialCombo::new(vec![(1.0, 0.0, 2), (q - 1.0, -1.0, 1), (m, -2.0, 0)]),
        RadialCombo::new(vec![(1.0, -1.0, 1), ((q - 4.0) / 2.0, -2.0, 0)]),
        RadialCombo::new(vec![(1.0, 0.0, 2), (q - 1.0, -1.0, 1)]),
        RadialCombo::new(vec![(1.0, -2.0, 0)]),
    ];
    let (t, quad_error) = norm_sq_terms(setting, f, &combos, path, spec)?;
    let lhs = t[0] + 2.0 * m * t[1];
    let rhs = t[2] - m * m * t[3];
    let terms = [
        ("norm_sq_shifted_operator", t[0]),
        ("norm_sq_mixed_remainder", t[1]),
        ("norm_sq_core_operator", t[2]),
        ("norm_sq_weighted_function", t[3]),
        ("rellich_constant", 1.0 / m),
    ];
    Ok(build_report(
        IdentityId::Rellich,
        params_of(&[("q_hom", q)]),
        terms.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        lhs,
        rhs,
        Claim::Equal,
        vec![t[0], 2.0 * m * t[1], t[2] - m * m * t[3]],
        quad_error,
        path.tolerance(spec),
    ))
}

// ---------------------------------------------------------------------------
// Iterated (higher-order) identity
// ---------------------------------------------------------------------------

/// Telescoped k-th order identity: || |x|^(-a) R^k f ||^2 splits into the
/// product-coefficient bottom term plus k nonnegative remainder norms. The
/// inequality constant is prod_j |((Q-2)/2 - (a+j))|^(-1) when no factor
/// vanishes.
pub fn higher_order_report(
    setting: &Setting,
    f: &TestFunction,
    k: usize,
    alpha: f64,
    inequality: InequalityMode,
    path: EvalPath,
    spec: &QuadratureSpec,
) -> Result<IdentityReport> {
    spec.validate()?;
    let q = setting.homogeneous_dim();
    if q < 3.0 {
        return Err(Error::domain(format!("higher_order requires Q >= 3, got Q = {q}")));
    }
    if k == 0 {
        return Err(Error::invalid("derivative order k must be at least 1"));
    }
    let coeff: Vec<f64> = (0..k).map(|l| (q - 2.0) / 2.0 - (alpha + l as f64)).collect();
    let degenerate = coeff.iter().any(|c| c.abs() < 1e-9);
    if degenerate && inequality == InequalityMode::Require {
        let l = coeff.iter().position(|c| c.abs() < 1e-9).unwrap();
        return Err(Error::DegenerateConstant(format!(
            "inequality constant degenerates at Q = {q}, alpha = {alpha}, k = {k}: \
             factor {l} of the coefficient product vanishes"
        )));
    }
    let kf = k as f64;
    let mut combos = vec![
        RadialCombo::new(vec![(1.0, -alpha, k)]),
        RadialCombo::new(vec![(1.0, -(kf + alpha), 0)]),
        RadialCombo::new(vec![(1.0, -alpha, k), (coeff[0], -(1.0 + alpha), k - 1)]),
    ];
    for l in 1..k {
        let lf = l as f64;
        combos.push(RadialCombo::new(vec![
            (1.0, -(lf + alpha), k - l),
            (coeff[l], -(lf + 1.0 + alpha), k - l - 1),
        ]));
    }
    let (t, quad_error) = norm_sq_terms(setting, f, &combos, path, spec)?;
    let product_sq: f64 = coeff.iter().map(|c| c * c).product();
    let mut remainders = Vec::new();
    let mut rhs = product_sq * t[1];
    let mut terms: BTreeMap<String, f64> = BTreeMap::new();
    terms.insert("norm_sq_weighted_derivative".to_string(), t[0]);
    terms.insert("norm_sq_bottom_function".to_string(), t[1]);
    terms.insert("norm_sq_remainder_final".to_string(), t[2]);
    rhs += t[2];
    remainders.push(t[2]);
    for l in 1..k {
        let weight: f64 = coeff[..l].iter().map(|c| c * c).product();
        let val = weight * t[2 + l];
        terms.insert(format!("norm_sq_remainder_{l}"), val);
        rhs += val;
        remainders.push(val);
    }
    remainders.push(t[0] - product_sq * t[1]);
    terms.insert("product_coefficient_sq".to_string(), product_sq);
    if !degenerate {
        let constant: f64 = coeff.iter().map(|c| 1.0 / c.abs()).product();
        terms.insert("inequality_constant".to_string(), constant);
    }
    Ok(build_report(
        IdentityId::HigherOrder,
        params_of(&[("k", kf), ("alpha", alpha), ("q_hom", q)]),
        terms,
        t[0],
        rhs,
        Claim::Equal,
        remainders,
        quad_error,
        path.tolerance(spec),
    ))
}

// ---------------------------------------------------------------------------
// Uncertainty-type inequality
// ---------------------------------------------------------------------------

/// (int |Rf|^p)^(1/p) (int |x|^q |f|^q)^(1/q) >= ((Q-p)/p) int |f|^2 with
/// q the conjugate exponent of p.
pub fn uncertainty_report(
    setting: &Setting,
    f: &TestFunction,
    p: f64,
    path: EvalPath,
    spec: &QuadratureSpec,
) -> Result<IdentityReport> {
    spec.validate()?;
    let q = setting.homogeneous_dim();
    if !(p > 1.0 && p < q) {
        return Err(Error::domain(format!("uncertainty requires 1 < p < Q = {q}, got p = {p}")));
    }
    let qc = p / (p - 1.0);
    let (vals, quad_error) = integrate_forms(
        setting,
        f,
        path,
        spec,
        1,
        &[p, qc, 2.0],
        &|r, tw, out| {
            let w = r.powf(q - 1.0);
            out[0] = abs_pow(tw[1], p) * w;
            out[1] = r.powf(qc) * abs_pow(tw[0], qc) * w;
            out[2] = tw[0] * tw[0] * w;
        },
        &|_x, r, jet, out| {
            out[0] = jet[1].norm().powf(p);
            out[1] = r.powf(qc) * jet[0].norm().powf(qc);
            out[2] = jet[0].norm_sqr();
        },
    )?;
    let n1 = vals[0].powf(1.0 / p);
    let n2 = vals[1].powf(1.0 / qc);
    let n3 = vals[2];
    let constant = (q - p) / p;
    let lhs = n1 * n2;
    let rhs = constant * n3;
    let terms = [
        ("norm_p_derivative", n1),
        ("norm_q_weighted_function", n2),
        ("l2_mass", n3),
        ("constant", constant),
        ("slack", lhs - rhs),
    ];
    Ok(build_report(
        IdentityId::Uncertainty,
        params_of(&[("p", p), ("q_conj", qc), ("q_hom", q)]),
        terms.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        lhs,
        rhs,
        Claim::GreaterEq,
        vec![lhs - rhs],
        quad_error,
        path.tolerance(spec),
    ))
}

// ---------------------------------------------------------------------------
// Logarithmic Hardy inequality
// ---------------------------------------------------------------------------

/// For each R: ||(f - f_R) / (|x|^(Q/p) log(R/|x|))||_p <=
/// (p/(p-1)) || |x|^(1 - Q/p) Rf ||_p, where f_R(x) = f(D_(R/|x|) x).
///
/// Profile-times-angular functions only: in the log variable t = ln(r/R)
/// the left side becomes int |g(R e^t) - g(R)|^p |t|^(-p) dt plus an exact
/// tail where g vanishes, and the surface factor cancels against the right
/// side. The grid maximum over R is a lower bound for the supremum.
pub fn log_hardy_report(
    setting: &Setting,
    f: &TestFunction,
    p: f64,
    r_list: &[f64],
    spec: &QuadratureSpec,
) -> Result<IdentityReport> {
    spec.validate()?;
    if !(p > 1.0) {
        return Err(Error::domain(format!("log_hardy requires p > 1, got p = {p}")));
    }
    if r_list.is_empty() {
        return Err(Error::invalid("log_hardy needs at least one R value"));
    }
    for &r in r_list {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid(format!("R values must be positive, got {r}")));
        }
    }
    let (profile, angular) = match f {
        TestFunction::Separable { profile, angular } => (profile, angular),
        TestFunction::General { .. } => {
            return Err(Error::capability(
                "log_hardy is implemented for profile-times-angular functions only",
            ))
        }
    };
    let (a, b) = profile
        .support()
        .ok_or_else(|| Error::capability("log_hardy needs a compactly supported profile"))?;
    let q = setting.homogeneous_dim();
    let constant = p / (p - 1.0);
    let (s_p, s_p_err) = sphere_factor(setting, angular, p, spec)?;

    let se = SeparableEngine::new(profile, 1, spec)?;
    let (rv, rerr) = se.integrate_many(1, &|r, tw, out| {
        out[0] = abs_pow(tw[1], p) * r.powf(p - 1.0);
    })?;
    let rhs_norm = constant * (rv[0] * s_p).powf(1.0 / p);
    let mut quad_error = rerr[0] * s_p + rv[0].abs() * s_p_err;

    let mut terms: BTreeMap<String, f64> = BTreeMap::new();
    terms.insert("rhs_norm".to_string(), rhs_norm);
    terms.insert("constant".to_string(), constant);
    let mut remainders = Vec::new();
    let mut lhs_max = 0.0f64;
    for &r_val in r_list {
        let g_r = profile.eval(r_val);
        let t_min = (a / r_val).ln();
        let t_max = (b / r_val).ln();
        let mut breaks = vec![t_min, t_max];
        if t_min < 0.0 && t_max > 0.0 {
            breaks.insert(1, 0.0);
        }
        let core_fn =
            |t: f64| abs_pow(profile.eval(r_val * t.exp()) - g_r, p) * abs_pow(t, -p);
        let (core, core_err) = integrate_1d_with_breaks(
            &core_fn,
            &breaks,
            Scale::Linear,
            spec.radial_order,
            spec.radial_panels.max(8),
        )?;
        // Where g vanishes identically the integrand is |g(R)|^p |t|^(-p),
        // whose tails integrate in closed form; g(R) != 0 forces
        // a < R < b, so both tails are nonempty and finite.
        let tails = if g_r != 0.0 {
            abs_pow(g_r, p) * (abs_pow(-t_min, 1.0 - p) + abs_pow(t_max, 1.0 - p)) / (p - 1.0)
        } else {
            0.0
        };
        let lhs_norm = ((core + tails) * s_p).powf(1.0 / p);
        quad_error += core_err * s_p + (core + tails).abs() * s_p_err;
        terms.insert(format!("lhs_norm_R{r_val}"), lhs_norm);
        terms.insert(format!("slack_R{r_val}"), rhs_norm - lhs_norm);
        remainders.push(rhs_norm - lhs_norm);
        lhs_max = lhs_max.max(lhs_norm);
    }
    Ok(build_report(
        IdentityId::LogHardy,
        params_of(&[("p", p), ("q_hom", q), ("r_count", r_list.len() as f64)]),
        terms,
        lhs_max,
        rhs_norm,
        Claim::LessEq,
        remainders,
        quad_error,
        spec.tol_separable,
    ))
}

// ---------------------------------------------------------------------------
// Integration-by-parts formula
// ---------------------------------------------------------------------------

/// int |f|^p / |x|^p dx = -(p/(Q-p)) Re int |f|^(p-2) f / |x|^(p-1)
/// conj(Rf) dx.
pub fn ibp_report(
    setting: &Setting,
    f: &TestFunction,
    p: f64,
    path: EvalPath,
    spec: &QuadratureSpec,
) -> Result<IdentityReport> {
    spec.validate()?;
    let q = setting.homogeneous_dim();
    if !(p > 1.0 && p < q) {
        return Err(Error::domain(format!("ibp requires 1 < p < Q = {q}, got p = {p}")));
    }
    let c = p / (q - p);
    let (vals, quad_error) = integrate_forms(
        setting,
        f,
        path,
        spec,
        1,
        &[p, p],
        &|r, tw, out| {
            let w = r.powf(q - 1.0);
            out[0] = abs_pow(tw[0], p) * r.powf(-p) * w;
            out[1] = signed_pow(tw[0], p - 1.0) * tw[1] * r.powf(1.0 - p) * w;
        },
        &|_x, r, jet, out| {
            let f0 = jet[0];
            out[0] = abs_pow(f0.norm(), p) * r.powf(-p);
            out[1] = abs_pow(f0.norm(), p - 2.0) * (f0 * jet[1].conj()).re * r.powf(1.0 - p);
        },
    )?;
    let lhs = vals[0];
    let rhs = -c * vals[1];
    let terms = [
        ("weighted_mass", vals[0]),
        ("pairing_integral", vals[1]),
        ("constant", -c),
    ];
    Ok(build_report(
        IdentityId::Ibp,
        params_of(&[("p", p), ("q_hom", q)]),
        terms.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        lhs,
        rhs,
        Claim::Equal,
        Vec::new(),
        quad_error,
        path.tolerance(spec),
    ))
}

// ---------------------------------------------------------------------------
// Scalar reduction of |z|^p to a trigonometric average
// ---------------------------------------------------------------------------

fn complex_reduction_sides(z: Complex64, p: f64) -> Result<(f64, f64)> {
    if !(p >= 1.0) {
        return Err(Error::domain(format!("complex reduction requires p >= 1, got p = {p}")));
    }
    let order = 24;
    let panels = 16;
    let (denom, _) = integrate_1d_with_breaks(
        &|t| t.cos().abs().powf(p),
        &[-PI, -PI / 2.0, PI / 2.0, PI],
        Scale::Linear,
        order,
        panels,
    )?;
    let num = if z.norm() == 0.0 {
        0.0
    } else {
        let phi = z.im.atan2(z.re);
        let wrap = |t: f64| {
            let w = (t + PI).rem_euclid(2.0 * PI) - PI;
            if w <= -PI {
                w + 2.0 * PI
            } else {
                w
            }
        };
        let mut breaks = vec![-PI, PI];
        for cand in [wrap(phi - PI / 2.0), wrap(phi + PI / 2.0)] {
            if breaks.iter().all(|&b| (b - cand).abs() > 1e-12) {
                breaks.push(cand);
            }
        }
        breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let (v, _) = integrate_1d_with_breaks(
            &|t| (z.re * t.cos() + z.im * t.sin()).abs().powf(p),
            &breaks,
            Scale::Linear,
            order,
            panels,
        )?;
        v
    };
    Ok((z.norm().powf(p), num / denom))
}

/// Residual of |z|^p = (int |cos t|^p dt)^(-1) int |Re z cos t +
/// Im z sin t|^p dt over (-pi, pi), both integrals by panel quadrature with
/// splits at the integrands' kinks.
pub fn complex_reduction_check(z: Complex64, p: f64) -> Result<f64> {
    let (lhs, rhs) = complex_reduction_sides(z, p)?;
    Ok((lhs - rhs).abs())
}

/// Report wrapper around [`complex_reduction_check`].
pub fn complex_reduction_report(z: Complex64, p: f64, tolerance: f64) -> Result<IdentityReport> {
    let (lhs, rhs) = complex_reduction_sides(z, p)?;
    let terms = [("modulus_power", lhs), ("representation_value", rhs)];
    Ok(build_report(
        IdentityId::ComplexReduction,
        params_of(&[("p", p), ("re", z.re), ("im", z.im)]),
        terms.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        lhs,
        rhs,
        Claim::Equal,
        Vec::new(),
        0.0,
        tolerance,
    ))
}
