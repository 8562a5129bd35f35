//! Admissible test functions: smooth compactly supported radial profiles
//! (with analytic derivatives to moderate order), bounded angular parts on
//! the unit quasi-sphere, and their separable or general combinations.

use crate::error::{Error, Result};
use crate::group::{DilationGroup, Setting};
use crate::quadrature::SupportBox;
use crate::util::{
    self, exp_neg_recip_tower, fast_pow, log_compose_tower, poly_derivative, poly_eval,
    poly_mul, power_tower, product_tower, smooth_step_tower, Tower, TOWER_LEN, ZERO_TOWER,
};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

/// Radial profile g: (0, inf) -> R with analytic derivatives up to
/// `max_order()`.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    kind: ProfileKind,
    k_max: usize,
}

#[derive(Debug, Clone)]
enum ProfileKind {
    /// exp(-1/((r-a)(b-r))) on (a, b), zero outside.
    SmoothBump { a: f64, b: f64 },
    /// [(r-a)(b-r)]^degree, normalized to 1 at the midpoint; polynomial
    /// inside the support, identically zero outside (C^{degree-1} overall).
    PolyCutoff { a: f64, b: f64, derivs: Vec<Vec<f64>> },
    /// chi(r) * r^gamma where chi is a smooth plateau: it rises from 0 to 1
    /// across [a1, a2], stays 1 on [a2, b1], and falls back to 0 across
    /// [b1, b2]. The transitions are smooth in ln r, which keeps every
    /// derivative of chi uniformly small per logarithmic length.
    Extremizer { gamma: f64, a1: f64, a2: f64, b1: f64, b2: f64 },
    /// r^e on all of (0, inf); not compactly supported, for operator tests
    /// only (integral reporters reject it).
    Power { e: f64 },
}

impl RadialProfile {
    pub fn smooth_bump(a: f64, b: f64) -> Result<Self> {
        if !(0.0 < a && a < b && b.is_finite()) {
            return Err(Error::invalid(format!(
                "bump support needs 0 < a < b, got [{a}, {b}]"
            )));
        }
        Ok(RadialProfile { kind: ProfileKind::SmoothBump { a, b }, k_max: 6 })
    }

    pub fn poly_cutoff(a: f64, b: f64, degree: usize) -> Result<Self> {
        if !(0.0 < a && a < b && b.is_finite()) {
            return Err(Error::invalid(format!(
                "cutoff support needs 0 < a < b, got [{a}, {b}]"
            )));
        }
        if degree < 2 {
            return Err(Error::invalid("cutoff degree must be at least 2"));
        }
        // ((r-a)(b-r)/m)^degree with m the maximum of (r-a)(b-r).
        let m = (b - a) * (b - a) / 4.0;
        let base = poly_mul(&[-a, 1.0], &[b, -1.0]);
        let mut poly = vec![1.0 / m.powi(degree as i32)];
        for _ in 0..degree {
            poly = poly_mul(&poly, &base);
        }
        let mut derivs = vec![poly];
        for _ in 0..TOWER_LEN - 1 {
            derivs.push(poly_derivative(derivs.last().unwrap()));
        }
        Ok(RadialProfile { kind: ProfileKind::PolyCutoff { a, b, derivs }, k_max: 6 })
    }

    /// Near-extremizer profile chi(r) * r^gamma with
    /// gamma = -(Q - p)/p + eps.
    pub fn extremizer(q: f64, p: f64, eps: f64, inner: (f64, f64), outer: (f64, f64)) -> Result<Self> {
        if !(p > 1.0 && p < q) {
            return Err(Error::invalid(format!("need 1 < p < Q, got p = {p}, Q = {q}")));
        }
        if eps < 0.0 {
            return Err(Error::invalid(format!("eps must be nonnegative, got {eps}")));
        }
        Self::extremizer_gamma(-(q - p) / p + eps, inner, outer)
    }

    /// Same profile with the homogeneity exponent given directly.
    pub fn extremizer_gamma(gamma: f64, inner: (f64, f64), outer: (f64, f64)) -> Result<Self> {
        let (a1, a2) = inner;
        let (b1, b2) = outer;
        if !(0.0 < a1 && a1 < a2 && a2 <= b1 && b1 < b2 && b2.is_finite()) {
            return Err(Error::invalid(format!(
                "cutoff intervals must satisfy 0 < a1 < a2 <= b1 < b2, got [{a1}, {a2}] and [{b1}, {b2}]"
            )));
        }
        Ok(RadialProfile { kind: ProfileKind::Extremizer { gamma, a1, a2, b1, b2 }, k_max: 4 })
    }

    /// Pure power r^e, for operator tests (homogeneous, no compact support).
    pub fn power(e: f64) -> Self {
        RadialProfile { kind: ProfileKind::Power { e }, k_max: 6 }
    }

    /// Support interval, if the profile is compactly supported.
    pub fn support(&self) -> Option<(f64, f64)> {
        match &self.kind {
            ProfileKind::SmoothBump { a, b } => Some((*a, *b)),
            ProfileKind::PolyCutoff { a, b, .. } => Some((*a, *b)),
            ProfileKind::Extremizer { a1, b2, .. } => Some((*a1, *b2)),
            ProfileKind::Power { .. } => None,
        }
    }

    /// Highest derivative order available analytically.
    pub fn max_order(&self) -> usize {
        self.k_max
    }

    /// The plateau region where the cutoffs are identically one: [a2, b1]
    /// for the extremizer, absent for other profiles.
    pub fn plateau(&self) -> Option<(f64, f64)> {
        match &self.kind {
            ProfileKind::Extremizer { a2, b1, .. } => Some((*a2, *b1)),
            _ => None,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.tower_unchecked(r, 0)[0]
    }

    /// Value and derivatives g, g', ..., g^{(k)} at r.
    pub fn tower(&self, r: f64, k: usize) -> Result<Tower> {
        if k > self.k_max {
            return Err(Error::capability(format!(
                "profile provides analytic derivatives up to order {}, requested {k}",
                self.k_max
            )));
        }
        Ok(self.tower_unchecked(r, k))
    }

    pub fn derivative(&self, r: f64, k: usize) -> Result<f64> {
        Ok(self.tower(r, k)?[k])
    }

    fn tower_unchecked(&self, r: f64, k: usize) -> Tower {
        match &self.kind {
            ProfileKind::SmoothBump { a, b } => {
                if r <= *a || r >= *b {
                    return ZERO_TOWER;
                }
                let mut w = ZERO_TOWER;
                w[0] = (r - a) * (b - r);
                w[1] = a + b - 2.0 * r;
                w[2] = -2.0;
                exp_neg_recip_tower(&w, k)
            }
            ProfileKind::PolyCutoff { a, b, derivs } => {
                if r <= *a || r >= *b {
                    return ZERO_TOWER;
                }
                let mut t = ZERO_TOWER;
                for (j, slot) in t.iter_mut().enumerate().take(k + 1) {
                    *slot = poly_eval(&derivs[j], r);
                }
                t
            }
            ProfileKind::Extremizer { gamma, a1, a2, b1, b2 } => {
                if r <= *a1 || r >= *b2 {
                    return ZERO_TOWER;
                }
                let s = r.ln();
                let rise = scaled_step_tower(s, a1.ln(), a2.ln(), k);
                let fall = scaled_step_tower(s, b1.ln(), b2.ln(), k);
                let mut chi_s = ZERO_TOWER;
                // chi = rise * (1 - fall)
                let mut one_minus_fall = ZERO_TOWER;
                one_minus_fall[0] = 1.0 - fall[0];
                for j in 1..=k {
                    one_minus_fall[j] = -fall[j];
                }
                let prod = product_tower(&rise, &one_minus_fall, k);
                chi_s[..=k].copy_from_slice(&prod[..=k]);
                let chi_r = log_compose_tower(&chi_s, r, k);
                let pow = power_tower(r, *gamma, k);
                product_tower(&chi_r, &pow, k)
            }
            ProfileKind::Power { e } => {
                if r <= 0.0 {
                    return ZERO_TOWER;
                }
                power_tower(r, *e, k)
            }
        }
    }
}

/// Smooth step in s running from 0 at s0 to 1 at s1, as a derivative tower
/// in s.
fn scaled_step_tower(s: f64, s0: f64, s1: f64, k: usize) -> Tower {
    let scale = 1.0 / (s1 - s0);
    let t = (s - s0) * scale;
    let mut tower = smooth_step_tower(t, k);
    let mut factor = 1.0;
    for j in 1..=k {
        factor *= scale;
        tower[j] *= factor;
    }
    tower
}

/// Bounded angular factor evaluated at points of the unit quasi-sphere.
#[derive(Debug, Clone)]
pub enum AngularPart {
    Constant(Complex64),
    /// y_i^power (power >= 0, so the factor stays bounded on the sphere).
    CoordinateTrace { index: usize, power: u32 },
    /// Complex linear combination of simpler parts, e.g. u1 + i*u2.
    Combination(Vec<(Complex64, AngularPart)>),
}

impl AngularPart {
    pub fn one() -> Self {
        AngularPart::Constant(Complex64::new(1.0, 0.0))
    }

    pub fn eval(&self, y: &[f64]) -> Complex64 {
        match self {
            AngularPart::Constant(c) => *c,
            AngularPart::CoordinateTrace { index, power } => {
                Complex64::new(y[*index].powi(*power as i32), 0.0)
            }
            AngularPart::Combination(terms) => {
                terms.iter().map(|(c, u)| c * u.eval(y)).sum()
            }
        }
    }

    /// [`eval`](Self::eval) at the sphere projection of x (quasi-norm r),
    /// computing only the projected coordinates actually referenced instead
    /// of materializing the projection.
    fn eval_projected(&self, group: &DilationGroup, x: &[f64], r: f64) -> Complex64 {
        match self {
            AngularPart::Constant(c) => *c,
            AngularPart::CoordinateTrace { index, power } => {
                let w = group.weights()[*index];
                let y = fast_pow(r.recip(), w) * x[*index];
                Complex64::new(y.powi(*power as i32), 0.0)
            }
            AngularPart::Combination(terms) => {
                terms.iter().map(|(c, u)| c * u.eval_projected(group, x, r)).sum()
            }
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            AngularPart::Constant(c) => c.im == 0.0,
            AngularPart::CoordinateTrace { .. } => true,
            AngularPart::Combination(terms) => {
                terms.iter().all(|(c, u)| c.im == 0.0 && u.is_real())
            }
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            AngularPart::Constant(_) => Ok(()),
            AngularPart::CoordinateTrace { index, .. } => {
                if *index >= dim {
                    Err(Error::invalid(format!(
                        "angular coordinate index {index} out of range for dimension {dim}"
                    )))
                } else {
                    Ok(())
                }
            }
            AngularPart::Combination(terms) => {
                for (_, u) in terms {
                    u.validate(dim)?;
                }
                Ok(())
            }
        }
    }
}

/// A test function on the group: either profile-times-angular (the form all
/// closed-form reductions apply to) or a black-box callable with a declared
/// support box.
#[derive(Clone)]
pub enum TestFunction {
    Separable { profile: RadialProfile, angular: AngularPart },
    General {
        f: Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>,
        support: SupportBox,
        smooth: bool,
        real_valued: bool,
    },
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Separable { profile, angular } => fm
                .debug_struct("Separable")
                .field("profile", profile)
                .field("angular", angular)
                .finish(),
            TestFunction::General { support, smooth, real_valued, .. } => fm
                .debug_struct("General")
                .field("support", support)
                .field("smooth", smooth)
                .field("real_valued", real_valued)
                .finish_non_exhaustive(),
        }
    }
}

impl TestFunction {
    pub fn separable(profile: RadialProfile, angular: AngularPart) -> Self {
        TestFunction::Separable { profile, angular }
    }

    /// Real bump times constant angular part.
    pub fn real_bump(a: f64, b: f64) -> Result<Self> {
        Ok(TestFunction::Separable {
            profile: RadialProfile::smooth_bump(a, b)?,
            angular: AngularPart::one(),
        })
    }

    /// Bump times (1 + i y_0): complex-valued with independent real and
    /// imaginary angular parts.
    pub fn complex_bump(a: f64, b: f64) -> Result<Self> {
        Ok(TestFunction::Separable {
            profile: RadialProfile::smooth_bump(a, b)?,
            angular: AngularPart::Combination(vec![
                (Complex64::new(1.0, 0.0), AngularPart::one()),
                (Complex64::new(0.0, 1.0), AngularPart::CoordinateTrace { index: 0, power: 1 }),
            ]),
        })
    }

    pub fn general(
        f: Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>,
        support: SupportBox,
        smooth: bool,
        real_valued: bool,
    ) -> Self {
        TestFunction::General { f, support, smooth, real_valued }
    }

    pub fn is_real(&self) -> bool {
        match self {
            TestFunction::Separable { angular, .. } => angular.is_real(),
            TestFunction::General { real_valued, .. } => *real_valued,
        }
    }

    /// Radial support, when the function is separable and compactly
    /// supported.
    pub fn radial_support(&self) -> Option<(f64, f64)> {
        match self {
            TestFunction::Separable { profile, .. } => profile.support(),
            TestFunction::General { .. } => None,
        }
    }

    /// Bounding box for integration; errors for profiles without compact
    /// support.
    pub fn support_box(&self, setting: &Setting) -> Result<SupportBox> {
        match self {
            TestFunction::Separable { profile, .. } => {
                let (a, b) = profile.support().ok_or_else(|| {
                    Error::capability(
                        "profile has no compact support; integral reporters need one",
                    )
                })?;
                let half = setting.norm().ball_box(setting.group(), b);
                let mut domain = SupportBox::symmetric(&half);
                domain.rho0 = a;
                Ok(domain)
            }
            TestFunction::General { support, .. } => Ok(support.clone()),
        }
    }

    /// Evaluates the function; points outside the support yield 0 without
    /// touching the profile or callable.
    pub fn eval(&self, setting: &Setting, x: &[f64]) -> Complex64 {
        match self {
            TestFunction::Separable { profile, angular } => {
                let r = setting.norm_of(x);
                if r <= 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                if let Some((a, b)) = profile.support() {
                    if r <= a || r >= b {
                        return Complex64::new(0.0, 0.0);
                    }
                }
                Complex64::new(profile.eval(r), 0.0)
                    * angular.eval_projected(setting.group(), x, r)
            }
            TestFunction::General { f, support, .. } => {
                let inside_box =
                    x.iter().zip(&support.lo).zip(&support.hi).all(|((&xi, &lo), &hi)| {
                        xi >= lo && xi <= hi
                    });
                if !inside_box {
                    return Complex64::new(0.0, 0.0);
                }
                if support.rho0 > 0.0 && setting.norm_of(x) < support.rho0 {
                    return Complex64::new(0.0, 0.0);
                }
                f(x)
            }
        }
    }
}

/// Re-export of the coefficient table used to turn log-parametrized towers
/// into radial ones (used by tests).
pub use util::LOG_CHAIN;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{DilationGroup, QuasiNorm};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn euclid(n: usize) -> Setting {
        Setting::new(DilationGroup::new(vec![1.0; n]).unwrap(), QuasiNorm::Euclidean).unwrap()
    }

    #[test]
    fn bump_basics() {
        let g = RadialProfile::smooth_bump(1.0, 3.0).unwrap();
        assert_eq!(g.eval(1.0), 0.0);
        assert_eq!(g.eval(3.0), 0.0);
        assert_eq!(g.eval(0.5), 0.0);
        assert_eq!(g.eval(4.0), 0.0);
        // Midpoint value exp(-4/(b-a)^2).
        assert_relative_eq!(g.eval(2.0), (-1.0f64).exp(), max_relative = 1e-15);
        // Flat contact: all derivatives vanish as r -> a+.
        let t = g.tower(1.0 + 1e-9, 6).unwrap();
        for v in t {
            assert_eq!(v, 0.0); // underflows exactly to zero
        }
        let t = g.tower(1.0 + 1e-3, 6).unwrap();
        for v in t.iter() {
            assert!(v.is_finite());
        }
    }

    #[test]
    fn bump_derivative_matches_fd() {
        let g = RadialProfile::smooth_bump(0.5, 2.0).unwrap();
        let r = 1.1;
        let exact = g.derivative(r, 1).unwrap();
        // O(h^2) centered differences: fitted slope should be ~2.
        let errs: Vec<f64> = [1e-3, 5e-4, 2.5e-4]
            .iter()
            .map(|&h| ((g.eval(r + h) - g.eval(r - h)) / (2.0 * h) - exact).abs())
            .collect();
        let slope = (errs[0] / errs[2]).ln() / (4.0f64).ln();
        assert!((1.8..=2.2).contains(&slope), "slope {slope}, errs {errs:?}");
    }

    #[test]
    fn bump_higher_derivatives_match_fd() {
        let g = RadialProfile::smooth_bump(0.5, 2.0).unwrap();
        let r = 0.9;
        let h = 1e-4;
        let d2 = (g.eval(r + h) - 2.0 * g.eval(r) + g.eval(r - h)) / (h * h);
        assert_relative_eq!(g.derivative(r, 2).unwrap(), d2, max_relative = 1e-6);
        let h = 1e-3;
        let d3 = (g.eval(r + 2.0 * h) - 2.0 * g.eval(r + h) + 2.0 * g.eval(r - h)
            - g.eval(r - 2.0 * h))
            / (2.0 * h * h * h);
        assert_relative_eq!(g.derivative(r, 3).unwrap(), d3, max_relative = 5e-4);
    }

    #[test]
    fn poly_cutoff_profile() {
        let g = RadialProfile::poly_cutoff(1.0, 2.0, 4).unwrap();
        assert_eq!(g.eval(0.9), 0.0);
        assert_eq!(g.eval(2.1), 0.0);
        assert_relative_eq!(g.eval(1.5), 1.0, max_relative = 1e-13);
        // ((r-1)(2-r))^4 / (1/2)^8 at r = 1.25: (0.25*0.75)^4 * 256
        let expect = (0.25f64 * 0.75).powi(4) * 256.0;
        assert_relative_eq!(g.eval(1.25), expect, max_relative = 1e-13);
        let d1 = g.derivative(1.25, 1).unwrap();
        let h = 1e-4;
        let fd = (g.eval(1.25 + h) - g.eval(1.25 - h)) / (2.0 * h);
        assert_relative_eq!(d1, fd, max_relative = 1e-6);
    }

    #[test]
    fn extremizer_plateau_and_euler_ratio() {
        // Q=4, p=2 -> gamma = -1.
        let g = RadialProfile::extremizer(4.0, 2.0, 0.0, (1e-3, 1e-2), (1e2, 1e3)).unwrap();
        for &r in &[0.1, 1.0, 10.0] {
            assert_relative_eq!(g.eval(r) * r, 1.0, max_relative = 1e-13);
            let t = g.tower(r, 1).unwrap();
            // Euler ratio r g'/g = gamma on the plateau.
            assert_relative_eq!(r * t[1] / t[0], -1.0, max_relative = 1e-12);
        }
        assert_eq!(g.eval(1e-4), 0.0);
        assert_eq!(g.eval(1e4), 0.0);
        // Inside the rise the profile is between 0 and r^gamma.
        let r = 3e-3;
        assert!(g.eval(r) > 0.0 && g.eval(r) < r.powf(-1.0));
    }

    #[test]
    fn extremizer_tower_matches_fd() {
        let g = RadialProfile::extremizer_gamma(-0.5, (0.01, 0.1), (10.0, 100.0)).unwrap();
        // Inside the rising transition, where chi varies.
        for &r in &[0.05, 0.3, 1.0, 20.0] {
            let t = g.tower(r, 2).unwrap();
            let h = r * 1e-5;
            let fd1 = (g.eval(r + h) - g.eval(r - h)) / (2.0 * h);
            let fd2 = (g.eval(r + h) - 2.0 * g.eval(r) + g.eval(r - h)) / (h * h);
            assert_relative_eq!(t[1], fd1, max_relative = 1e-7);
            assert_relative_eq!(t[2], fd2, max_relative = 1e-4);
        }
    }

    #[test]
    fn power_profile() {
        let g = RadialProfile::power(2.5);
        assert_relative_eq!(g.eval(4.0), 32.0, max_relative = 1e-14);
        assert_relative_eq!(g.derivative(4.0, 1).unwrap(), 2.5 * 4.0f64.powf(1.5), max_relative = 1e-14);
        assert!(g.support().is_none());
    }

    #[test]
    fn derivative_order_cap() {
        let g = RadialProfile::extremizer_gamma(-1.0, (0.1, 0.2), (5.0, 10.0)).unwrap();
        assert!(g.tower(1.0, 5).is_err());
        let b = RadialProfile::smooth_bump(1.0, 2.0).unwrap();
        assert!(b.tower(1.5, 6).is_ok());
    }

    #[test]
    fn coordinate_trace_example() {
        // Abelian n=2, Euclidean: x = r0 * (0.6, 0.8).
        let s = euclid(2);
        let f = TestFunction::Separable {
            profile: RadialProfile::smooth_bump(1.0, 3.0).unwrap(),
            angular: AngularPart::CoordinateTrace { index: 0, power: 1 },
        };
        let r0 = 2.0;
        let v = f.eval(&s, &[0.6 * r0, 0.8 * r0]);
        let g = RadialProfile::smooth_bump(1.0, 3.0).unwrap();
        assert_relative_eq!(v.re, g.eval(r0) * 0.6, max_relative = 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn eval_outside_support_is_zero() {
        let s = euclid(3);
        let f = TestFunction::real_bump(1.0, 2.0).unwrap();
        assert_eq!(f.eval(&s, &[0.0, 0.0, 0.0]), Complex64::new(0.0, 0.0));
        assert_eq!(f.eval(&s, &[0.3, 0.0, 0.0]), Complex64::new(0.0, 0.0));
        assert_eq!(f.eval(&s, &[5.0, 0.0, 0.0]), Complex64::new(0.0, 0.0));
        // Vanishing on |x| < a/2 in particular.
        assert_eq!(f.eval(&s, &[0.49, 0.1, 0.0]), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn complex_bump_parts() {
        let s = euclid(2);
        let f = TestFunction::complex_bump(1.0, 3.0).unwrap();
        assert!(!f.is_real());
        let x = [1.2, 1.6]; // |x| = 2
        let v = f.eval(&s, &x);
        let g = RadialProfile::smooth_bump(1.0, 3.0).unwrap();
        assert_relative_eq!(v.re, g.eval(2.0), max_relative = 1e-14);
        assert_relative_eq!(v.im, g.eval(2.0) * 0.6, max_relative = 1e-14);
    }

    #[test]
    fn support_box_has_inner_exclusion() {
        let s = euclid(3);
        let f = TestFunction::real_bump(0.5, 2.0).unwrap();
        let domain = f.support_box(&s).unwrap();
        assert_eq!(domain.rho0, 0.5);
        assert_eq!(domain.hi, vec![2.0, 2.0, 2.0]);
        let p = TestFunction::Separable {
            profile: RadialProfile::power(1.0),
            angular: AngularPart::one(),
        };
        assert!(p.support_box(&s).is_err());
    }

    proptest! {
        #[test]
        fn separable_orbit_law(
            r in 0.05f64..5.0,
            x0 in -3.0f64..3.0,
            x1 in -3.0f64..3.0,
        ) {
            // eval(f, D_r x) = g(r |x|) u(x/|x|)
            let s = euclid(2);
            let f = TestFunction::Separable {
                profile: RadialProfile::smooth_bump(0.5, 2.0).unwrap(),
                angular: AngularPart::CoordinateTrace { index: 1, power: 2 },
            };
            let x = [x0, x1];
            let nx = s.norm_of(&x);
            prop_assume!(nx > 1e-3);
            let dx = s.dilate(r, &x);
            let lhs = f.eval(&s, &dx);
            let g = RadialProfile::smooth_bump(0.5, 2.0).unwrap();
            let y = s.sphere_project(&x);
            let rhs = Complex64::new(g.eval(r * nx) * y[1] * y[1], 0.0);
            prop_assert!((lhs - rhs).norm() <= 1e-14 * rhs.norm().max(1.0));
        }

        #[test]
        fn extremizer_monotone_transitions(r in 0.0011f64..0.0099) {
            let g = RadialProfile::extremizer_gamma(0.0, (1e-3, 1e-2), (1e2, 1e3)).unwrap();
            // gamma = 0: profile equals chi, which must lie in [0, 1].
            let v = g.eval(r);
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }
}
