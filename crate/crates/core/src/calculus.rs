//! The radial operator: differentiation along dilation orbits.
//!
//! For x != 0 the orbit through x is s -> D_{s/|x|} x, parametrized so that
//! the quasi-norm of the moving point is exactly s. The radial derivative is
//! the k-th derivative of f along this orbit, evaluated at s = |x|:
//!
//! `(Rf)(x) = phi_x'(|x|)`, `phi_x(s) = f(D_{s/|x|} x)`.
//!
//! For profile-times-angular functions this reduces to differentiating the
//! profile: `R^k f = g^(k)(|x|) u(x/|x|)`. The Euler operator `|x| R` is
//! independent of which quasi-norm parametrizes the orbit.

use crate::error::{Error, Result};
use crate::group::Setting;
use crate::testfuncs::TestFunction;
use crate::util::{power_tower, product_tower, Tower, ZERO_TOWER};
use num_complex::Complex64;

/// How radial derivatives are computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialOperatorMethod {
    /// Closed-form profile derivatives; profile-times-angular functions only.
    Analytic,
    /// Central finite differences on the orbit with step h relative to |x|,
    /// stencil order in {2, 4, 6}, and optionally one Richardson
    /// extrapolation step.
    FiniteDifference { h: f64, order: usize, richardson: bool },
}

impl Default for RadialOperatorMethod {
    fn default() -> Self {
        RadialOperatorMethod::FiniteDifference { h: 1e-3, order: 4, richardson: true }
    }
}

impl RadialOperatorMethod {
    pub fn validate(&self) -> Result<()> {
        match self {
            RadialOperatorMethod::Analytic => Ok(()),
            RadialOperatorMethod::FiniteDifference { h, order, .. } => {
                if !(*h > 0.0 && *h <= 0.1) {
                    return Err(Error::invalid(format!(
                        "finite-difference step must lie in (0, 0.1], got {h}"
                    )));
                }
                if ![2, 4, 6].contains(order) {
                    return Err(Error::invalid(format!(
                        "stencil order must be 2, 4 or 6, got {order}"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Central-difference stencil: numerators, common denominator, offsets.
struct Stencil {
    offsets: &'static [i32],
    numerators: &'static [f64],
    denominator: f64,
}

/// Highest implemented stencil order for the k-th derivative.
fn max_stencil_order(k: usize) -> usize {
    match k {
        1 | 2 => 6,
        3 | 4 => 4,
        _ => 0,
    }
}

fn stencil(k: usize, order: usize) -> Option<Stencil> {
    let s = match (k, order) {
        (1, 2) => Stencil { offsets: &[-1, 1], numerators: &[-1.0, 1.0], denominator: 2.0 },
        (1, 4) => Stencil {
            offsets: &[-2, -1, 1, 2],
            numerators: &[1.0, -8.0, 8.0, -1.0],
            denominator: 12.0,
        },
        (1, 6) => Stencil {
            offsets: &[-3, -2, -1, 1, 2, 3],
            numerators: &[-1.0, 9.0, -45.0, 45.0, -9.0, 1.0],
            denominator: 60.0,
        },
        (2, 2) => Stencil { offsets: &[-1, 0, 1], numerators: &[1.0, -2.0, 1.0], denominator: 1.0 },
        (2, 4) => Stencil {
            offsets: &[-2, -1, 0, 1, 2],
            numerators: &[-1.0, 16.0, -30.0, 16.0, -1.0],
            denominator: 12.0,
        },
        (2, 6) => Stencil {
            offsets: &[-3, -2, -1, 0, 1, 2, 3],
            numerators: &[2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0],
            denominator: 180.0,
        },
        (3, 2) => Stencil {
            offsets: &[-2, -1, 1, 2],
            numerators: &[-1.0, 2.0, -2.0, 1.0],
            denominator: 2.0,
        },
        (3, 4) => Stencil {
            offsets: &[-3, -2, -1, 1, 2, 3],
            numerators: &[1.0, -8.0, 13.0, -13.0, 8.0, -1.0],
            denominator: 8.0,
        },
        (4, 2) => Stencil {
            offsets: &[-2, -1, 0, 1, 2],
            numerators: &[1.0, -4.0, 6.0, -4.0, 1.0],
            denominator: 1.0,
        },
        (4, 4) => Stencil {
            offsets: &[-3, -2, -1, 0, 1, 2, 3],
            numerators: &[-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0],
            denominator: 6.0,
        },
        _ => return None,
    };
    Some(s)
}

fn apply_stencil(
    phi: &dyn Fn(f64) -> Complex64,
    s0: f64,
    h: f64,
    k: usize,
    st: &Stencil,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (&o, &c) in st.offsets.iter().zip(st.numerators) {
        acc += c * phi(s0 + o as f64 * h);
    }
    acc / (st.denominator * h.powi(k as i32))
}

/// k-th derivative of phi at s0 by central differences with relative step
/// h_rel, optionally Richardson-extrapolated once.
pub fn orbit_derivative_fd(
    phi: &dyn Fn(f64) -> Complex64,
    s0: f64,
    k: usize,
    h_rel: f64,
    order: usize,
    richardson: bool,
) -> Result<Complex64> {
    if k == 0 || k > 4 {
        return Err(Error::capability(format!(
            "finite-difference orbit derivatives are implemented for orders 1..=4, got {k}"
        )));
    }
    let eff_order = order.min(max_stencil_order(k));
    let st = stencil(k, eff_order)
        .ok_or_else(|| Error::invalid(format!("no stencil for k = {k}, order = {eff_order}")))?;
    let h = h_rel * s0;
    let d1 = apply_stencil(phi, s0, h, k, &st);
    if !richardson {
        return Ok(d1);
    }
    let d2 = apply_stencil(phi, s0, h / 2.0, k, &st);
    let m = (2.0f64).powi(eff_order as i32);
    Ok((m * d2 - d1) / (m - 1.0))
}

/// Derivative tower of the profile of f divided by r^alpha, at radius r.
/// Helper for weighted analytic derivatives: (g / r^alpha)^(j), j <= k.
fn weighted_profile_tower(
    f: &TestFunction,
    r: f64,
    alpha: f64,
    k: usize,
) -> Result<(Tower, Complex64Picker)> {
    match f {
        TestFunction::Separable { profile, angular } => {
            let g = profile.tower(r, k)?;
            let t = if alpha == 0.0 {
                g
            } else {
                product_tower(&g, &power_tower(r, -alpha, k), k)
            };
            Ok((t, Complex64Picker::Angular(angular.clone())))
        }
        TestFunction::General { .. } => Err(Error::capability(
            "analytic radial derivatives need a profile-times-angular function",
        )),
    }
}

/// Small helper binding an angular part for later evaluation.
enum Complex64Picker {
    Angular(crate::testfuncs::AngularPart),
}

/// (R^k f)(x): the k-th orbit derivative of f at x.
pub fn radial_derivative(
    setting: &Setting,
    f: &TestFunction,
    x: &[f64],
    k: usize,
    method: &RadialOperatorMethod,
) -> Result<Complex64> {
    if k == 0 {
        return Err(Error::invalid("derivative order k must be at least 1"));
    }
    method.validate()?;
    let r = setting.norm_of(x);
    if !(r > 0.0) {
        return Err(Error::domain("radial derivative is undefined at the origin"));
    }
    match method {
        RadialOperatorMethod::Analytic => {
            let (tower, picker) = weighted_profile_tower(f, r, 0.0, k)?;
            let Complex64Picker::Angular(angular) = picker;
            let y = setting.sphere_project(x);
            Ok(tower[k] * angular.eval(&y))
        }
        RadialOperatorMethod::FiniteDifference { h, order, richardson } => {
            let phi = |s: f64| f.eval(setting, &setting.dilate(s / r, x));
            orbit_derivative_fd(&phi, r, k, *h, *order, *richardson)
        }
    }
}

/// (R^k of f / |x|^alpha)(x): radial derivative of the weighted function.
/// Along the orbit the weight is exactly s^(-alpha), so the general path
/// differentiates phi(s) / s^alpha.
pub fn radial_derivative_weighted(
    setting: &Setting,
    f: &TestFunction,
    x: &[f64],
    alpha: f64,
    k: usize,
    method: &RadialOperatorMethod,
) -> Result<Complex64> {
    if k == 0 {
        return Err(Error::invalid("derivative order k must be at least 1"));
    }
    method.validate()?;
    let r = setting.norm_of(x);
    if !(r > 0.0) {
        return Err(Error::domain("radial derivative is undefined at the origin"));
    }
    match method {
        RadialOperatorMethod::Analytic => {
            let (tower, picker) = weighted_profile_tower(f, r, alpha, k)?;
            let Complex64Picker::Angular(angular) = picker;
            let y = setting.sphere_project(x);
            Ok(tower[k] * angular.eval(&y))
        }
        RadialOperatorMethod::FiniteDifference { h, order, richardson } => {
            let phi = |s: f64| f.eval(setting, &setting.dilate(s / r, x)) * s.powf(-alpha);
            orbit_derivative_fd(&phi, r, k, *h, *order, *richardson)
        }
    }
}

/// Euler operator |x| (Rf)(x); independent of the quasi-norm used, because
/// reparametrizing the orbit rescales R by exactly the norm ratio.
pub fn euler_apply(
    setting: &Setting,
    f: &TestFunction,
    x: &[f64],
    method: &RadialOperatorMethod,
) -> Result<Complex64> {
    let r = setting.norm_of(x);
    Ok(radial_derivative(setting, f, x, 1, method)? * r)
}

/// Max over the samples of |f(D_lambda x) - lambda^nu f(x)| scaled by
/// max(|f(x)|, floor): zero exactly when f is positively homogeneous of
/// order nu along the sampled orbits.
pub fn check_homogeneity(
    setting: &Setting,
    f: &TestFunction,
    nu: f64,
    samples: &[(Vec<f64>, f64)],
) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid("homogeneity check needs at least one sample"));
    }
    let mut worst = 0.0f64;
    for (x, lambda) in samples {
        if !(*lambda > 0.0) {
            return Err(Error::invalid(format!("dilation factor must be positive, got {lambda}")));
        }
        if !(setting.norm_of(x) > 0.0) {
            return Err(Error::invalid("homogeneity samples must avoid the origin"));
        }
        let fx = f.eval(setting, x);
        let fdx = f.eval(setting, &setting.dilate(*lambda, x));
        let res = (fdx - lambda.powf(nu) * fx).norm() / fx.norm().max(1e-12);
        worst = worst.max(res);
    }
    Ok(worst)
}

/// Residual of the commutation identity
/// `|x|^(-alpha) (Rf)(x) = R(f/|x|^alpha)(x) + alpha f(x)/|x|^(alpha+1)`.
pub fn commutation_residual(
    setting: &Setting,
    f: &TestFunction,
    alpha: f64,
    x: &[f64],
    method: &RadialOperatorMethod,
) -> Result<f64> {
    let r = setting.norm_of(x);
    if !(r > 0.0) {
        return Err(Error::domain("commutation residual is undefined at the origin"));
    }
    let lhs = radial_derivative(setting, f, x, 1, method)? * r.powf(-alpha);
    let weighted = radial_derivative_weighted(setting, f, x, alpha, 1, method)?;
    let rhs = weighted + alpha * f.eval(setting, x) * r.powf(-alpha - 1.0);
    Ok((lhs - rhs).norm())
}

/// f(x) together with (R^1 f)(x) ... (R^kmax f)(x), sharing orbit samples
/// between the stencils of different orders. On the finite-difference path
/// each unique orbit point is evaluated once, so a k-term report pays far
/// less than k separate stencil applications.
pub fn orbit_jet(
    setting: &Setting,
    f: &TestFunction,
    x: &[f64],
    kmax: usize,
    method: &RadialOperatorMethod,
) -> Result<Vec<Complex64>> {
    method.validate()?;
    let r = setting.norm_of(x);
    if !(r > 0.0) {
        return Err(Error::domain("radial derivative is undefined at the origin"));
    }
    let mut jet = Vec::with_capacity(kmax + 1);
    jet.push(f.eval(setting, x));
    if kmax == 0 {
        return Ok(jet);
    }
    match method {
        RadialOperatorMethod::Analytic => match f {
            TestFunction::Separable { profile, angular } => {
                let tower = profile.tower(r, kmax)?;
                let u = angular.eval(&setting.sphere_project(x));
                for t in tower.iter().take(kmax + 1).skip(1) {
                    jet.push(t * u);
                }
                Ok(jet)
            }
            TestFunction::General { .. } => Err(Error::capability(
                "analytic radial derivatives need a profile-times-angular function",
            )),
        },
        RadialOperatorMethod::FiniteDifference { h, order, richardson } => {
            if kmax > 4 {
                return Err(Error::capability(format!(
                    "finite-difference orbit derivatives are implemented for orders 1..=4, got {kmax}"
                )));
            }
            // Orbit samples at s0 + m * (h_abs / 2); full-step stencils use
            // even m, the Richardson half-step pass uses odd m too.
            let half = 0.5 * h * r;
            let f0 = jet[0];
            let mut cache: [Option<Complex64>; 13] = [None; 13];
            let mut buf = vec![0.0; x.len()];
            let mut phi_at = |m: i32| -> Complex64 {
                let slot = (m + 6) as usize;
                if let Some(v) = cache[slot] {
                    return v;
                }
                let s = r + m as f64 * half;
                let v = if m == 0 {
                    f0
                } else {
                    setting.dilate_into(s / r, x, &mut buf);
                    f.eval(setting, &buf)
                };
                cache[slot] = Some(v);
                v
            };
            for k in 1..=kmax {
                let eff_order = (*order).min(max_stencil_order(k));
                let st = stencil(k, eff_order).ok_or_else(|| {
                    Error::invalid(format!("no stencil for k = {k}, order = {eff_order}"))
                })?;
                let mut sum_full = Complex64::new(0.0, 0.0);
                for (&o, &c) in st.offsets.iter().zip(st.numerators) {
                    sum_full += c * phi_at(2 * o);
                }
                let d_full = sum_full / (st.denominator * (h * r).powi(k as i32));
                if !richardson {
                    jet.push(d_full);
                    continue;
                }
                let mut sum_half = Complex64::new(0.0, 0.0);
                for (&o, &c) in st.offsets.iter().zip(st.numerators) {
                    sum_half += c * phi_at(o);
                }
                let d_half = sum_half / (st.denominator * half.powi(k as i32));
                let m = (2.0f64).powi(eff_order as i32);
                jet.push((m * d_half - d_full) / (m - 1.0));
            }
            Ok(jet)
        }
    }
}

/// Analytic tower of orbit derivatives for separable functions; used by the
/// reporting engine where whole towers are consumed at once.
pub fn profile_orbit_tower(f: &TestFunction, r: f64, k: usize) -> Result<Tower> {
    match f {
        TestFunction::Separable { profile, .. } => profile.tower(r, k),
        TestFunction::General { .. } => Err(Error::capability(
            "analytic radial derivatives need a profile-times-angular function",
        )),
    }
}

/// Zero tower helper re-exported for engine code working with towers.
pub fn zero_tower() -> Tower {
    ZERO_TOWER
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{DilationGroup, QuasiNorm};
    use crate::quadrature::SupportBox;
    use crate::testfuncs::{AngularPart, RadialProfile};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::sync::Arc;

    fn heis() -> Setting {
        Setting::new(
            DilationGroup::new(vec![1.0, 1.0, 2.0]).unwrap(),
            QuasiNorm::Anisotropic { kappa: 4.0 },
        )
        .unwrap()
    }

    fn fd(h: f64, order: usize, richardson: bool) -> RadialOperatorMethod {
        RadialOperatorMethod::FiniteDifference { h, order, richardson }
    }

    #[test]
    fn power_law_derivative() {
        // R |x|^nu = nu |x|^(nu-1), both modes.
        let s = heis();
        let nu = 2.5;
        let f = TestFunction::Separable {
            profile: RadialProfile::power(nu),
            angular: AngularPart::one(),
        };
        let x = [0.7, -0.3, 0.9];
        let r = s.norm_of(&x);
        let expect = nu * r.powf(nu - 1.0);
        let a = radial_derivative(&s, &f, &x, 1, &RadialOperatorMethod::Analytic).unwrap();
        assert_relative_eq!(a.re, expect, max_relative = 1e-13);
        let d = radial_derivative(&s, &f, &x, 1, &RadialOperatorMethod::default()).unwrap();
        assert_relative_eq!(d.re, expect, max_relative = 1e-10);
    }

    #[test]
    fn constant_function_derivative_is_zero() {
        let s = heis();
        let f = TestFunction::Separable {
            profile: RadialProfile::power(0.0),
            angular: AngularPart::one(),
        };
        let x = [0.4, 0.2, -0.5];
        let d = radial_derivative(&s, &f, &x, 1, &RadialOperatorMethod::default()).unwrap();
        assert_abs_diff_eq!(d.re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn origin_is_rejected() {
        let s = heis();
        let f = TestFunction::real_bump(0.5, 2.0).unwrap();
        assert!(radial_derivative(&s, &f, &[0.0, 0.0, 0.0], 1, &RadialOperatorMethod::default())
            .is_err());
    }

    #[test]
    fn analytic_mode_needs_profile_derivatives() {
        let s = heis();
        // Extremizer caps analytic derivatives at order 4.
        let f = TestFunction::Separable {
            profile: RadialProfile::extremizer_gamma(-1.0, (0.1, 0.2), (5.0, 10.0)).unwrap(),
            angular: AngularPart::one(),
        };
        let x = [1.0, 0.5, 0.2];
        assert!(radial_derivative(&s, &f, &x, 5, &RadialOperatorMethod::Analytic).is_err());
        assert!(radial_derivative(&s, &f, &x, 2, &RadialOperatorMethod::Analytic).is_ok());
    }

    #[test]
    fn fd_matches_analytic_on_bump() {
        let s = heis();
        let f = TestFunction::real_bump(0.5, 2.0).unwrap();
        let x = [0.8, -0.2, 0.6];
        // Roundoff scales like eps / h^k, so the attainable accuracy drops
        // with the derivative order.
        let tol = [1e-9, 1e-8, 1e-6, 1e-4];
        for k in 1..=4 {
            let a = radial_derivative(&s, &f, &x, k, &RadialOperatorMethod::Analytic).unwrap();
            let d = radial_derivative(&s, &f, &x, k, &RadialOperatorMethod::default()).unwrap();
            assert_relative_eq!(a.re, d.re, max_relative = tol[k - 1]);
        }
    }

    #[test]
    fn fd_convergence_slopes() {
        // |FD(h) - analytic| = O(h^order): fitted slope within +-0.2.
        let s = heis();
        let f = TestFunction::real_bump(0.5, 2.0).unwrap();
        let x = [0.8, -0.2, 0.6];
        let exact = radial_derivative(&s, &f, &x, 1, &RadialOperatorMethod::Analytic).unwrap();
        for order in [2usize, 4, 6] {
            let hs = [1e-2, 5e-3, 2.5e-3];
            let errs: Vec<f64> = hs
                .iter()
                .map(|&h| {
                    (radial_derivative(&s, &f, &x, 1, &fd(h, order, false)).unwrap() - exact)
                        .norm()
                })
                .collect();
            let slope = (errs[0] / errs[2]).ln() / (4.0f64).ln();
            assert!(
                (slope - order as f64).abs() <= 0.2,
                "order {order}: slope {slope}, errs {errs:?}"
            );
        }
    }

    #[test]
    fn general_function_fd_with_polynomial_fit_oracle() {
        // Non-separable smooth function. FD at two steps agree, and both
        // match a least-squares polynomial fit along the orbit.
        let s = heis();
        let c = [1.5, 0.3, 0.4];
        let callable = move |x: &[f64]| {
            let d2: f64 = x.iter().zip(&c).map(|(&a, &b)| (a - b) * (a - b)).sum();
            if d2 < 1.0 {
                Complex64::new((-1.0 / (1.0 - d2)).exp(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let f = TestFunction::general(
            Arc::new(callable),
            SupportBox::new(vec![0.5, -0.7, -0.6], vec![2.5, 1.3, 1.4], 0.0).unwrap(),
            true,
            true,
        );
        let x = [1.2, 0.1, 0.5];
        let d3 = radial_derivative(&s, &f, &x, 1, &fd(1e-3, 4, false)).unwrap();
        let d4 = radial_derivative(&s, &f, &x, 1, &fd(1e-4, 4, false)).unwrap();
        assert_abs_diff_eq!(d3.re, d4.re, epsilon = 1e-8 * d4.re.abs().max(1.0));

        // Dense-orbit fit: 13 samples, degree-6 least squares, derivative
        // of the fit at the center.
        let r = s.norm_of(&x);
        let h = 0.01;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in -6i32..=6 {
            let t = i as f64;
            let sarg = r * (1.0 + h * t);
            xs.push(t);
            ys.push(f.eval(&s, &s.dilate(sarg / r, &x)).re);
        }
        // Normal equations for degree-6 fit.
        let deg = 6;
        let mut ata = vec![vec![0.0f64; deg + 1]; deg + 1];
        let mut atb = vec![0.0f64; deg + 1];
        for (t, y) in xs.iter().zip(&ys) {
            let mut ti = 1.0;
            let mut pows = Vec::with_capacity(deg + 1);
            for _ in 0..=deg {
                pows.push(ti);
                ti *= t;
            }
            for i in 0..=deg {
                for j in 0..=deg {
                    ata[i][j] += pows[i] * pows[j];
                }
                atb[i] += pows[i] * y;
            }
        }
        // Gaussian elimination.
        for col in 0..=deg {
            let piv = (col..=deg)
                .max_by(|&a, &b| ata[a][col].abs().partial_cmp(&ata[b][col].abs()).unwrap())
                .unwrap();
            ata.swap(col, piv);
            atb.swap(col, piv);
            for row in col + 1..=deg {
                let fac = ata[row][col] / ata[col][col];
                for j in col..=deg {
                    ata[row][j] -= fac * ata[col][j];
                }
                atb[row] -= fac * atb[col];
            }
        }
        let mut coef = vec![0.0f64; deg + 1];
        for row in (0..=deg).rev() {
            let mut v = atb[row];
            for j in row + 1..=deg {
                v -= ata[row][j] * coef[j];
            }
            coef[row] = v / ata[row][row];
        }
        // d/ds = (d/dt) / (r h).
        let oracle = coef[1] / (r * h);
        assert_relative_eq!(d3.re, oracle, max_relative = 1e-6);
    }

    #[test]
    fn euler_on_homogeneous_functions() {
        // f = |x|^nu y_0^2 is homogeneous of order nu; Euler f = nu f.
        let s = heis();
        let nu = 1.75;
        let f = TestFunction::Separable {
            profile: RadialProfile::power(nu),
            angular: AngularPart::CoordinateTrace { index: 0, power: 2 },
        };
        let x = [0.9, 0.4, -0.7];
        let e = euler_apply(&s, &f, &x, &RadialOperatorMethod::Analytic).unwrap();
        let fx = f.eval(&s, &x);
        assert_relative_eq!(e.re, nu * fx.re, max_relative = 1e-12);
    }

    #[test]
    fn euler_is_norm_independent() {
        let group = DilationGroup::new(vec![1.0, 1.0, 2.0]).unwrap();
        let s1 = Setting::new(group.clone(), QuasiNorm::Anisotropic { kappa: 4.0 }).unwrap();
        let s2 = Setting::new(group, QuasiNorm::Koranyi { c: 16.0 }).unwrap();
        let c = [1.5, 0.3, 0.4];
        let callable = move |x: &[f64]| {
            let d2: f64 = x.iter().zip(&c).map(|(&a, &b)| (a - b) * (a - b)).sum();
            if d2 < 1.0 {
                Complex64::new((-1.0 / (1.0 - d2)).exp(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let f = TestFunction::general(
            Arc::new(callable),
            SupportBox::new(vec![0.5, -0.7, -0.6], vec![2.5, 1.3, 1.4], 0.0).unwrap(),
            true,
            true,
        );
        let x = [1.3, 0.25, 0.55];
        let m = RadialOperatorMethod::default();
        let e1 = euler_apply(&s1, &f, &x, &m).unwrap();
        let e2 = euler_apply(&s2, &f, &x, &m).unwrap();
        assert_abs_diff_eq!(e1.re, e2.re, epsilon = 1e-10 * e1.re.abs().max(1.0));
        // And the radial derivatives differ by exactly the norm ratio.
        let d1 = radial_derivative(&s1, &f, &x, 1, &m).unwrap() * s1.norm_of(&x);
        let d2 = radial_derivative(&s2, &f, &x, 1, &m).unwrap() * s2.norm_of(&x);
        assert_abs_diff_eq!(d1.re, d2.re, epsilon = 1e-10 * d1.re.abs().max(1.0));
    }

    #[test]
    fn homogeneity_check_both_ways() {
        let s = heis();
        let nu = -0.5;
        let hom = TestFunction::Separable {
            profile: RadialProfile::power(nu),
            angular: AngularPart::CoordinateTrace { index: 1, power: 1 },
        };
        let samples: Vec<(Vec<f64>, f64)> = vec![
            (vec![1.0, 0.3, 0.2], 2.0),
            (vec![-0.4, 0.8, -0.1], 0.5),
            (vec![0.2, -0.2, 1.4], 3.7),
        ];
        let res = check_homogeneity(&s, &hom, nu, &samples).unwrap();
        assert!(res < 1e-12, "residual {res}");

        // A bump is not homogeneous for any order: large residual.
        let bump = TestFunction::real_bump(0.5, 2.0).unwrap();
        let samples = vec![(vec![0.8, 0.3, 0.2], 1.5)];
        let res = check_homogeneity(&s, &bump, nu, &samples).unwrap();
        assert!(res > 0.1, "residual {res}");

        // Zero function: residual zero under the floor guard.
        let zero = TestFunction::Separable {
            profile: RadialProfile::power(1.0),
            angular: AngularPart::Constant(Complex64::new(0.0, 0.0)),
        };
        let res = check_homogeneity(&s, &zero, nu, &samples).unwrap();
        assert_eq!(res, 0.0);

        assert!(check_homogeneity(&s, &bump, nu, &[]).is_err());
    }

    #[test]
    fn radial_derivative_is_homogeneous_of_order_minus_one() {
        // For f homogeneous of order nu, Rf is homogeneous of order nu - 1.
        let s = heis();
        let nu = 1.2;
        let f = TestFunction::Separable {
            profile: RadialProfile::power(nu),
            angular: AngularPart::CoordinateTrace { index: 2, power: 1 },
        };
        let s2 = s.clone();
        let f2 = f.clone();
        let rf = TestFunction::general(
            Arc::new(move |x: &[f64]| {
                radial_derivative(&s2, &f2, x, 1, &RadialOperatorMethod::Analytic).unwrap()
            }),
            SupportBox::symmetric(&[10.0, 10.0, 10.0]),
            true,
            true,
        );
        let samples: Vec<(Vec<f64>, f64)> =
            vec![(vec![0.5, 0.4, 0.3], 2.0), (vec![-0.6, 0.1, 0.8], 0.7)];
        let res = check_homogeneity(&s, &rf, nu - 1.0, &samples).unwrap();
        assert!(res < 1e-10, "residual {res}");
    }

    #[test]
    fn orbit_characterization() {
        // (d/dr) f(D_r x) at r = r0 equals |x| (Rf)(D_r0 x).
        let s = heis();
        let f = TestFunction::real_bump(0.3, 3.0).unwrap();
        let x = [0.9, -0.1, 0.4];
        let r0 = 1.3;
        let h = 1e-5;
        let fd_orbit = (f.eval(&s, &s.dilate(r0 + h, &x)).re
            - f.eval(&s, &s.dilate(r0 - h, &x)).re)
            / (2.0 * h);
        let dilated = s.dilate(r0, &x);
        let rf =
            radial_derivative(&s, &f, &dilated, 1, &RadialOperatorMethod::Analytic).unwrap().re;
        assert_relative_eq!(fd_orbit, s.norm_of(&x) * rf, max_relative = 1e-8);
    }

    #[test]
    fn commutation_identity() {
        let s = heis();
        let f = TestFunction::real_bump(0.5, 2.0).unwrap();
        let x = [0.8, -0.2, 0.6];
        // alpha = 0: both sides are literally the same expression.
        let r0 = commutation_residual(&s, &f, 0.0, &x, &RadialOperatorMethod::Analytic).unwrap();
        assert_eq!(r0, 0.0);
        // Analytic, alpha = 1.
        let r1 = commutation_residual(&s, &f, 1.0, &x, &RadialOperatorMethod::Analytic).unwrap();
        assert!(r1 < 1e-12, "residual {r1}");
        // FD, alpha = (Q-2)/2 = 1.
        let q = s.homogeneous_dim();
        let rq =
            commutation_residual(&s, &f, (q - 2.0) / 2.0, &x, &RadialOperatorMethod::default())
                .unwrap();
        assert!(rq < 1e-6, "residual {rq}");
    }

    #[test]
    fn jet_matches_single_derivatives() {
        let s = heis();
        let f = TestFunction::complex_bump(0.5, 2.0).unwrap();
        let x = [0.8, -0.2, 0.6];
        for method in
            [RadialOperatorMethod::Analytic, RadialOperatorMethod::default(), fd(1e-3, 6, false)]
        {
            let jet = orbit_jet(&s, &f, &x, 3, &method).unwrap();
            assert_eq!(jet[0], f.eval(&s, &x));
            for k in 1..=3 {
                let single = radial_derivative(&s, &f, &x, k, &method).unwrap();
                assert_relative_eq!(jet[k].re, single.re, max_relative = 1e-13);
                assert_relative_eq!(jet[k].im, single.im, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn scaled_profile_under_dilation() {
        // phi_x(s) for separable f equals g(s) u(x/|x|): iterated orbit
        // derivatives match profile derivatives of any order.
        let s = heis();
        let f = TestFunction::real_bump(0.5, 2.0).unwrap();
        let x = [0.8, -0.2, 0.6];
        let r = s.norm_of(&x);
        for k in 2..=3 {
            let a = radial_derivative(&s, &f, &x, k, &RadialOperatorMethod::Analytic).unwrap();
            let g = RadialProfile::smooth_bump(0.5, 2.0).unwrap();
            assert_relative_eq!(a.re, g.derivative(r, k).unwrap(), max_relative = 1e-12);
        }
    }
}
