//! Quadrature: Gauss-Legendre panels in 1D (linear or logarithmic scale),
//! tensor-product cubature up to dimension 3, scrambled Sobol integration
//! for dimensions 4 to 6, quasi-sphere surface integrals via a smoothly
//! windowed annulus, polar-form integration, and a scaling check for
//! Lebesgue measure under dilations.

use crate::error::{Error, Result};
use crate::group::Setting;
use crate::util::{smooth_step, Accum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Tuning knobs for every integral in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss-Legendre order used on each 1D panel.
    pub radial_order: usize,
    /// Number of panels across a 1D integration range.
    pub radial_panels: usize,
    /// Nodes per dimension for tensor cubature (dimensions <= 3).
    pub cubature_points_per_dim: usize,
    /// Outer radius of the annulus used for quasi-sphere surface integrals.
    pub annulus_lambda: f64,
    /// Sample budget for the scrambled Sobol rule (dimensions 4 to 6);
    /// rounded down to a power of two.
    pub mc_samples: usize,
    /// Seed for the scrambling of the Sobol rule.
    pub seed: u64,
    /// Residual tolerance when profiles and angular parts are integrated
    /// separately (1D quadrature only).
    pub tol_separable: f64,
    /// Residual tolerance for full n-dimensional evaluation.
    pub tol_general: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radial_order: 16,
            radial_panels: 32,
            cubature_points_per_dim: 96,
            annulus_lambda: 2.0,
            mc_samples: 65536,
            seed: 0,
            tol_separable: 1e-8,
            tol_general: 1e-4,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.radial_order < 4 {
            return Err(Error::invalid(format!(
                "radial_order must be at least 4, got {}",
                self.radial_order
            )));
        }
        if self.radial_panels == 0 {
            return Err(Error::invalid("radial_panels must be positive"));
        }
        if self.cubature_points_per_dim < 4 {
            return Err(Error::invalid(format!(
                "cubature_points_per_dim must be at least 4, got {}",
                self.cubature_points_per_dim
            )));
        }
        if !(self.annulus_lambda > 1.0 && self.annulus_lambda <= 8.0) {
            return Err(Error::invalid(format!(
                "annulus_lambda must lie in (1, 8], got {}",
                self.annulus_lambda
            )));
        }
        if self.mc_samples < 16 {
            return Err(Error::invalid("mc_samples must be at least 16"));
        }
        if !(self.tol_separable > 0.0 && self.tol_general > 0.0) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        Ok(())
    }
}

/// Axis-aligned integration domain with an optional punctured quasi-ball
/// around the origin (integrands with negative powers of |x| are masked to
/// zero on {|x| < rho0}).
#[derive(Debug, Clone, PartialEq)]
pub struct SupportBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub rho0: f64,
}

impl SupportBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, rho0: f64) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::invalid("box bounds must be nonempty and of equal length"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::invalid(format!("box bounds must satisfy lo < hi: {lo:?}, {hi:?}")));
        }
        if !(rho0 >= 0.0) {
            return Err(Error::invalid(format!("rho0 must be nonnegative, got {rho0}")));
        }
        Ok(SupportBox { lo, hi, rho0 })
    }

    /// Symmetric box [-h_i, h_i] with no excluded ball.
    pub fn symmetric(half: &[f64]) -> Self {
        SupportBox {
            lo: half.iter().map(|&h| -h).collect(),
            hi: half.to_vec(),
            rho0: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    /// Panels spaced uniformly in ln r; the returned weights absorb the
    /// Jacobian so sums still approximate integrals in dr.
    Log,
}

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes
// ---------------------------------------------------------------------------

fn gl_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Legendre P_n(x) and its derivative by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights of the n-point Gauss-Legendre rule on (-1, 1),
/// computed by Newton iteration and cached per order.
pub fn gauss_legendre(n: usize) -> Arc<Vec<(f64, f64)>> {
    assert!(n >= 1, "quadrature order must be at least 1");
    if let Some(v) = gl_cache().lock().unwrap().get(&n) {
        return v.clone();
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let arc = Arc::new(out);
    gl_cache().lock().unwrap().insert(n, arc.clone());
    arc
}

/// Nodes (t, weight) over [a, b] with `panels` Gauss-Legendre panels of the
/// given order, spaced linearly or logarithmically. Weights include the
/// change-of-variable Jacobian, so `sum_i w_i f(t_i) ~ int_a^b f(t) dt`.
pub fn panel_nodes(a: f64, b: f64, scale: Scale, order: usize, panels: usize) -> Vec<(f64, f64)> {
    assert!(b > a, "empty integration range [{a}, {b}]");
    let rule = gauss_legendre(order);
    let mut out = Vec::with_capacity(order * panels);
    match scale {
        Scale::Linear => {
            let h = (b - a) / panels as f64;
            for p in 0..panels {
                let lo = a + h * p as f64;
                let mid = lo + 0.5 * h;
                for &(x, w) in rule.iter() {
                    out.push((mid + 0.5 * h * x, 0.5 * h * w));
                }
            }
        }
        Scale::Log => {
            assert!(a > 0.0, "log-scale panels need a positive lower bound, got {a}");
            let (la, lb) = (a.ln(), b.ln());
            let h = (lb - la) / panels as f64;
            for p in 0..panels {
                let lo = la + h * p as f64;
                let mid = lo + 0.5 * h;
                for &(x, w) in rule.iter() {
                    let t = (mid + 0.5 * h * x).exp();
                    out.push((t, 0.5 * h * w * t));
                }
            }
        }
    }
    out
}

/// Compensated sum of f over the nodes; errors out on a non-finite value.
pub fn integrate_nodes(f: &dyn Fn(f64) -> f64, nodes: &[(f64, f64)]) -> Result<f64> {
    let mut acc = Accum::new();
    for &(t, w) in nodes {
        let v = f(t);
        if !v.is_finite() {
            return Err(Error::integration(format!("integrand returned {v} at t = {t}")));
        }
        acc.add(w * v);
    }
    Ok(acc.value())
}

/// Complex compensated sum over shared nodes.
pub fn integrate_nodes_complex(
    f: &dyn Fn(f64) -> Complex64,
    nodes: &[(f64, f64)],
) -> Result<Complex64> {
    let mut re = Accum::new();
    let mut im = Accum::new();
    for &(t, w) in nodes {
        let v = f(t);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::integration(format!("integrand returned {v} at t = {t}")));
        }
        re.add(w * v.re);
        im.add(w * v.im);
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// 1D integral with an error estimate from re-evaluating the same panels at
/// a lower order.
pub fn integrate_1d(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    scale: Scale,
    order: usize,
    panels: usize,
) -> Result<(f64, f64)> {
    let fine = integrate_nodes(f, &panel_nodes(a, b, scale, order, panels))?;
    let coarse_order = if order > 5 { order - 4 } else { (order + 1).max(2) };
    let coarse = integrate_nodes(f, &panel_nodes(a, b, scale, coarse_order, panels))?;
    Ok((fine, (fine - coarse).abs()))
}

/// 1D integral over consecutive segments given by `breaks` (at least two
/// entries, strictly increasing); each segment is paneled independently so
/// integrable kinks at the breakpoints do not spoil convergence.
pub fn integrate_1d_with_breaks(
    f: &dyn Fn(f64) -> f64,
    breaks: &[f64],
    scale: Scale,
    order: usize,
    panels_per_segment: usize,
) -> Result<(f64, f64)> {
    if breaks.len() < 2 {
        return Err(Error::invalid("need at least two breakpoints"));
    }
    let mut value = Accum::new();
    let mut err = Accum::new();
    for pair in breaks.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::invalid(format!(
                "breakpoints must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
        let (v, e) = integrate_1d(f, pair[0], pair[1], scale, order, panels_per_segment)?;
        value.add(v);
        err.add(e);
    }
    Ok((value.value(), err.value()))
}

// ---------------------------------------------------------------------------
// Box cubature
// ---------------------------------------------------------------------------

/// Per-dimension composite Gauss-Legendre nodes over [lo, hi] with roughly
/// `points` nodes split into panels of order at most 16.
fn axis_nodes(lo: f64, hi: f64, points: usize) -> Vec<(f64, f64)> {
    let panels = (points / 16).max(1);
    let order = points.div_ceil(panels);
    panel_nodes(lo, hi, Scale::Linear, order, panels)
}

fn tensor_pass(
    f: &dyn Fn(&[f64]) -> Complex64,
    axes: &[Vec<(f64, f64)>],
) -> Result<Complex64> {
    let dims: Vec<usize> = axes.iter().map(|a| a.len()).collect();
    let total: usize = dims.iter().product();
    let n = axes.len();
    let mut point = vec![0.0; n];
    let mut re = Accum::new();
    let mut im = Accum::new();
    for flat in 0..total {
        let mut rem = flat;
        let mut weight = 1.0;
        for d in 0..n {
            let i = rem % dims[d];
            rem /= dims[d];
            let (x, w) = axes[d][i];
            point[d] = x;
            weight *= w;
        }
        let v = f(&point);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::integration(format!("integrand returned {v} at {point:?}")));
        }
        re.add(weight * v.re);
        im.add(weight * v.im);
    }
    Ok(Complex64::new(re.value(), im.value()))
}

fn tensor_integrate(
    f: &dyn Fn(&[f64]) -> Complex64,
    domain: &SupportBox,
    points_per_dim: usize,
) -> Result<(Complex64, f64)> {
    let fine: Vec<Vec<(f64, f64)>> = domain
        .lo
        .iter()
        .zip(&domain.hi)
        .map(|(&a, &b)| axis_nodes(a, b, points_per_dim))
        .collect();
    let value = tensor_pass(f, &fine)?;
    let coarse: Vec<Vec<(f64, f64)>> = domain
        .lo
        .iter()
        .zip(&domain.hi)
        .map(|(&a, &b)| axis_nodes(a, b, (points_per_dim / 2).max(4)))
        .collect();
    let rough = tensor_pass(f, &coarse)?;
    Ok((value, (value - rough).norm()))
}

// ---------------------------------------------------------------------------
// Scrambled Sobol rule for moderate dimensions
// ---------------------------------------------------------------------------

/// Primitive-polynomial data for Sobol directions in dimensions 2..=6
/// (dimension 1 is the van der Corput sequence in base 2): polynomial
/// degree, interior coefficient bits, and initial direction integers.
const SOBOL_INIT: [(u32, u32, &[u32]); 5] = [
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
];

/// 32-bit direction integers for each of d dimensions.
fn sobol_directions(d: usize) -> Vec<[u32; 32]> {
    let mut dirs = Vec::with_capacity(d);
    let mut v0 = [0u32; 32];
    for (k, slot) in v0.iter_mut().enumerate() {
        *slot = 1 << (31 - k);
    }
    dirs.push(v0);
    for &(s, a, m) in SOBOL_INIT.iter().take(d.saturating_sub(1)) {
        let s = s as usize;
        let mut v = [0u32; 32];
        for k in 0..s.min(32) {
            v[k] = m[k] << (31 - k);
        }
        for k in s..32 {
            let mut vk = v[k - s] ^ (v[k - s] >> s);
            for i in 1..s {
                if (a >> (s - 1 - i)) & 1 == 1 {
                    vk ^= v[k - i];
                }
            }
            v[k] = vk;
        }
        dirs.push(v);
    }
    dirs
}

/// Random lower-triangular bit matrix (ones on the diagonal) applied to the
/// binary digits of v: linear matrix scrambling. Row k holds the matrix row
/// for output digit k, stored with digit m in bit position 31 - m.
fn lms_apply(rows: &[u32; 32], v: u32) -> u32 {
    let mut out = 0u32;
    for (k, &row) in rows.iter().enumerate() {
        let bit = (row & v).count_ones() & 1;
        out |= bit << (31 - k);
    }
    out
}

fn lms_rows(rng: &mut ChaCha8Rng) -> [u32; 32] {
    let mut rows = [0u32; 32];
    for (k, row) in rows.iter_mut().enumerate() {
        let diag = 1u32 << (31 - k);
        let above = if k == 0 { 0 } else { rng.random::<u32>() & (!0u32 << (32 - k)) };
        *row = diag | above;
    }
    rows
}

/// Digitally shifted, linearly scrambled Sobol rule over a box. The sample
/// count is rounded down to a power of two so prefixes stay balanced; the
/// error estimate compares the first half of the sequence with the whole.
fn qmc_integrate(
    f: &dyn Fn(&[f64]) -> Complex64,
    domain: &SupportBox,
    samples: usize,
    seed: u64,
) -> Result<(Complex64, f64)> {
    let d = domain.dim();
    let n = if samples < 16 { 16 } else { 1usize << (usize::BITS - 1 - samples.leading_zeros()) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scramble: Vec<[u32; 32]> = (0..d).map(|_| lms_rows(&mut rng)).collect();
    let shift: Vec<u32> = (0..d).map(|_| rng.random::<u32>()).collect();
    let mut dirs = sobol_directions(d);
    for (dir, rows) in dirs.iter_mut().zip(&scramble) {
        for v in dir.iter_mut() {
            *v = lms_apply(rows, *v);
        }
    }
    let mut state = shift;
    let widths: Vec<f64> = domain.lo.iter().zip(&domain.hi).map(|(&a, &b)| b - a).collect();
    let volume: f64 = widths.iter().product();
    let mut re = Accum::new();
    let mut im = Accum::new();
    let mut first_half = Complex64::new(0.0, 0.0);
    let mut point = vec![0.0; d];
    let scale = (2.0f64).powi(-32);
    for k in 0..n {
        if k > 0 {
            // Gray-code step: flip the direction of the lowest zero bit
            // of k - 1.
            let c = (!(k as u64 - 1)).trailing_zeros() as usize;
            for (st, dir) in state.iter_mut().zip(&dirs) {
                *st ^= dir[c];
            }
        }
        for j in 0..d {
            let u = state[j] as f64 * scale;
            point[j] = domain.lo[j] + u * widths[j];
        }
        let v = f(&point);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::integration(format!("integrand returned {v} at {point:?}")));
        }
        re.add(v.re);
        im.add(v.im);
        if k + 1 == n / 2 {
            first_half =
                Complex64::new(re.value(), im.value()) / (n / 2) as f64;
        }
    }
    let mean = Complex64::new(re.value(), im.value()) / n as f64;
    let err = (mean - first_half).norm() * volume;
    Ok((mean * volume, err))
}

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

/// Integral of F over the box (minus the excluded quasi-ball of radius
/// rho0, where the integrand is masked to zero). Dimensions 1 to 3 use
/// tensor Gauss-Legendre cubature; 4 to 6 use the scrambled Sobol rule;
/// higher dimensions are rejected.
pub fn integrate_lebesgue(
    setting: &Setting,
    f: &dyn Fn(&[f64]) -> Complex64,
    domain: &SupportBox,
    spec: &QuadratureSpec,
) -> Result<(Complex64, f64)> {
    if domain.dim() != setting.dim() {
        return Err(Error::invalid(format!(
            "box dimension {} does not match group dimension {}",
            domain.dim(),
            setting.dim()
        )));
    }
    let rho0 = domain.rho0;
    let masked = |x: &[f64]| {
        if rho0 > 0.0 && setting.norm_of(x) < rho0 {
            Complex64::new(0.0, 0.0)
        } else {
            f(x)
        }
    };
    match domain.dim() {
        1..=3 => tensor_integrate(&masked, domain, spec.cubature_points_per_dim),
        4..=6 => qmc_integrate(&masked, domain, spec.mc_samples, spec.seed),
        n => Err(Error::capability(format!(
            "full-dimensional integration supports up to 6 dimensions, got {n}"
        ))),
    }
}

/// Real-valued convenience wrapper for [`integrate_lebesgue`].
pub fn integrate_lebesgue_real(
    setting: &Setting,
    f: &dyn Fn(&[f64]) -> f64,
    domain: &SupportBox,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let (v, e) = integrate_lebesgue(setting, &|x| Complex64::new(f(x), 0.0), domain, spec)?;
    Ok((v.re, e))
}

/// Several real integrands evaluated on shared cubature nodes: the callback
/// fills `out` with all component values at a point. Sharing nodes keeps
/// the components' quadrature errors correlated, which matters when their
/// difference is the quantity of interest. Returns per-component values and
/// error estimates; the rho0 mask applies to every component.
pub fn integrate_lebesgue_many(
    setting: &Setting,
    m: usize,
    f: &dyn Fn(&[f64], &mut [f64]),
    domain: &SupportBox,
    spec: &QuadratureSpec,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if domain.dim() != setting.dim() {
        return Err(Error::invalid(format!(
            "box dimension {} does not match group dimension {}",
            domain.dim(),
            setting.dim()
        )));
    }
    if m == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let rho0 = domain.rho0;
    let masked = |x: &[f64], out: &mut [f64]| {
        if rho0 > 0.0 && setting.norm_of(x) < rho0 {
            out.fill(0.0);
        } else {
            f(x, out);
        }
    };
    match domain.dim() {
        1..=3 => tensor_integrate_many(&masked, m, domain, spec.cubature_points_per_dim),
        4..=6 => qmc_integrate_many(&masked, m, domain, spec.mc_samples, spec.seed),
        n => Err(Error::capability(format!(
            "full-dimensional integration supports up to 6 dimensions, got {n}"
        ))),
    }
}

fn tensor_pass_many(
    f: &dyn Fn(&[f64], &mut [f64]),
    m: usize,
    axes: &[Vec<(f64, f64)>],
) -> Result<Vec<f64>> {
    let dims: Vec<usize> = axes.iter().map(|a| a.len()).collect();
    let total: usize = dims.iter().product();
    let n = axes.len();
    let mut point = vec![0.0; n];
    let mut vals = vec![0.0; m];
    let mut sums: Vec<Accum> = (0..m).map(|_| Accum::new()).collect();
    for flat in 0..total {
        let mut rem = flat;
        let mut weight = 1.0;
        for d in 0..n {
            let i = rem % dims[d];
            rem /= dims[d];
            let (x, w) = axes[d][i];
            point[d] = x;
            weight *= w;
        }
        f(&point, &mut vals);
        for (c, (acc, &v)) in sums.iter_mut().zip(&vals).enumerate() {
            if !v.is_finite() {
                return Err(Error::integration(format!(
                    "integrand component {c} returned {v} at {point:?}"
                )));
            }
            acc.add(weight * v);
        }
    }
    Ok(sums.into_iter().map(|a| a.value()).collect())
}

fn tensor_integrate_many(
    f: &dyn Fn(&[f64], &mut [f64]),
    m: usize,
    domain: &SupportBox,
    points_per_dim: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let fine: Vec<Vec<(f64, f64)>> = domain
        .lo
        .iter()
        .zip(&domain.hi)
        .map(|(&a, &b)| axis_nodes(a, b, points_per_dim))
        .collect();
    let values = tensor_pass_many(f, m, &fine)?;
    let coarse: Vec<Vec<(f64, f64)>> = domain
        .lo
        .iter()
        .zip(&domain.hi)
        .map(|(&a, &b)| axis_nodes(a, b, (points_per_dim / 2).max(4)))
        .collect();
    let rough = tensor_pass_many(f, m, &coarse)?;
    let errs = values.iter().zip(&rough).map(|(v, r)| (v - r).abs()).collect();
    Ok((values, errs))
}

fn qmc_integrate_many(
    f: &dyn Fn(&[f64], &mut [f64]),
    m: usize,
    domain: &SupportBox,
    samples: usize,
    seed: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = domain.dim();
    let n = if samples < 16 { 16 } else { 1usize << (usize::BITS - 1 - samples.leading_zeros()) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scramble: Vec<[u32; 32]> = (0..d).map(|_| lms_rows(&mut rng)).collect();
    let shift: Vec<u32> = (0..d).map(|_| rng.random::<u32>()).collect();
    let mut dirs = sobol_directions(d);
    for (dir, rows) in dirs.iter_mut().zip(&scramble) {
        for v in dir.iter_mut() {
            *v = lms_apply(rows, *v);
        }
    }
    let mut state = shift;
    let widths: Vec<f64> = domain.lo.iter().zip(&domain.hi).map(|(&a, &b)| b - a).collect();
    let volume: f64 = widths.iter().product();
    let mut sums: Vec<Accum> = (0..m).map(|_| Accum::new()).collect();
    let mut first_half = vec![0.0; m];
    let mut point = vec![0.0; d];
    let mut vals = vec![0.0; m];
    let scale = (2.0f64).powi(-32);
    for k in 0..n {
        if k > 0 {
            let c = (!(k as u64 - 1)).trailing_zeros() as usize;
            for (st, dir) in state.iter_mut().zip(&dirs) {
                *st ^= dir[c];
            }
        }
        for j in 0..d {
            let u = state[j] as f64 * scale;
            point[j] = domain.lo[j] + u * widths[j];
        }
        f(&point, &mut vals);
        for (c, (acc, &v)) in sums.iter_mut().zip(&vals).enumerate() {
            if !v.is_finite() {
                return Err(Error::integration(format!(
                    "integrand component {c} returned {v} at {point:?}"
                )));
            }
            acc.add(v);
        }
        if k + 1 == n / 2 {
            for (fh, acc) in first_half.iter_mut().zip(&sums) {
                *fh = acc.value() / (n / 2) as f64;
            }
        }
    }
    let mut values = Vec::with_capacity(m);
    let mut errs = Vec::with_capacity(m);
    for (acc, fh) in sums.iter().zip(&first_half) {
        let mean = acc.value() / n as f64;
        values.push(mean * volume);
        errs.push((mean - fh).abs() * volume);
    }
    Ok((values, errs))
}

/// Smooth window equal to 1 on [1, lambda], supported on
/// [1 - tau, lambda + tau] with tau = (lambda - 1)/4.
pub fn annulus_window(r: f64, lambda: f64) -> f64 {
    let tau = (lambda - 1.0) / 4.0;
    if r <= 1.0 - tau || r >= lambda + tau {
        0.0
    } else if r < 1.0 {
        smooth_step((r - (1.0 - tau)) / tau)
    } else if r <= lambda {
        1.0
    } else {
        1.0 - smooth_step((r - lambda) / tau)
    }
}

/// Surface integral of u over the unit quasi-sphere {|x| = 1}, with respect
/// to the measure for which integrals in polar form satisfy
/// `int f dx = int_0^inf int_sphere f(D_r y) dsigma(y) r^(Q-1) dr`.
///
/// Computed volumetrically: u is spread over an annulus around the sphere
/// with the radial factor r^(-Q), which integrates to
/// `(int w(r) dr/r) * int u dsigma`; a smooth window w replaces the sharp
/// annulus indicator so the full-dimensional integrand stays smooth.
pub fn sphere_integrate(
    setting: &Setting,
    u: &dyn Fn(&[f64]) -> f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let lambda = spec.annulus_lambda;
    if !(lambda > 1.0 && lambda <= 8.0) {
        return Err(Error::invalid(format!("annulus_lambda must lie in (1, 8], got {lambda}")));
    }
    let tau = (lambda - 1.0) / 4.0;
    let q = setting.homogeneous_dim();
    let mass = integrate_1d_with_breaks(
        &|r| annulus_window(r, lambda) / r,
        &[1.0 - tau, 1.0, lambda, lambda + tau],
        Scale::Linear,
        16,
        8,
    )?
    .0;
    let half = setting.norm().ball_box(setting.group(), lambda + tau);
    let domain = SupportBox::symmetric(&half);
    let integrand = |x: &[f64]| {
        let r = setting.norm_of(x);
        let w = annulus_window(r, lambda);
        if w == 0.0 {
            return 0.0;
        }
        let y = setting.sphere_project(x);
        u(&y) * w * r.powf(-q)
    };
    let (v, e) = integrate_lebesgue_real(setting, &integrand, &domain, spec)?;
    Ok((v / mass, e / mass))
}

/// Integral of the product function g(|x|) u(x/|x|) in polar form:
/// `(int_a^b g(r) r^(Q-1) dr) * (int_sphere u dsigma)`.
/// The radial support [a, b] must stay away from the origin.
pub fn polar_integrate(
    setting: &Setting,
    g: &dyn Fn(f64) -> Complex64,
    support: (f64, f64),
    u: &dyn Fn(&[f64]) -> f64,
    spec: &QuadratureSpec,
) -> Result<(Complex64, f64)> {
    let (a, b) = support;
    if !(a > 0.0 && b > a) {
        return Err(Error::domain(format!(
            "radial support must satisfy 0 < a < b, got [{a}, {b}]"
        )));
    }
    let q = setting.homogeneous_dim();
    let nodes = panel_nodes(a, b, Scale::Linear, spec.radial_order, spec.radial_panels);
    let radial = integrate_nodes_complex(&|r| g(r) * r.powf(q - 1.0), &nodes)?;
    let coarse_order =
        if spec.radial_order > 5 { spec.radial_order - 4 } else { spec.radial_order + 1 };
    let coarse_nodes = panel_nodes(a, b, Scale::Linear, coarse_order, spec.radial_panels);
    let radial_coarse = integrate_nodes_complex(&|r| g(r) * r.powf(q - 1.0), &coarse_nodes)?;
    let (surface, surf_err) = sphere_integrate(setting, u, spec)?;
    let value = radial * surface;
    let err = (radial - radial_coarse).norm() * surface.abs() + radial.norm() * surf_err;
    Ok((value, err))
}

/// Residual of the scaling law
/// `int f(D_lambda x) dx = lambda^(-Q) int f(x) dx`
/// for a function supported inside the given box: relative when the
/// integral of f is away from zero, absolute otherwise.
pub fn haar_scaling_residual(
    setting: &Setting,
    f: &dyn Fn(&[f64]) -> f64,
    domain: &SupportBox,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::invalid(format!("scaling factor must be positive, got {lambda}")));
    }
    let q = setting.homogeneous_dim();
    let (plain, _) = integrate_lebesgue_real(setting, f, domain, spec)?;
    // f(D_lambda x) is supported inside D_{1/lambda} of the original box.
    let weights = setting.group().weights().to_vec();
    let shrunk = SupportBox {
        lo: weights.iter().zip(&domain.lo).map(|(&w, &a)| a / lambda.powf(w)).collect(),
        hi: weights.iter().zip(&domain.hi).map(|(&w, &b)| b / lambda.powf(w)).collect(),
        rho0: domain.rho0 / lambda,
    };
    let group = setting.group().clone();
    let dilated_f = move |x: &[f64]| f(&group.dilate(lambda, x));
    let (scaled, _) = integrate_lebesgue_real(setting, &dilated_f, &shrunk, spec)?;
    let target = lambda.powf(-q) * plain;
    let abs_res = (scaled - target).abs();
    if target.abs() < 1e-12 {
        Ok(abs_res)
    } else {
        Ok(abs_res / target.abs())
    }
}
