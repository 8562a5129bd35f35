//! End-to-end acceptance suite.
//!
//! Eight checks cover the library's headline guarantees: the identity
//! matrix on both evaluation paths, remainder nonnegativity, the approach
//! to every sharp constant, the even/odd parity gate, measure consistency,
//! operator fidelity, the uncertainty and logarithmic bounds, and
//! byte-level determinism of the CLI outputs. Each test prints one
//! pass line on success; failures carry the offending row's label.

use std::process::Command;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use hardygroups::calculus::{
    check_homogeneity, euler_apply, radial_derivative, RadialOperatorMethod,
};
use hardygroups::group::{DilationGroup, QuasiNorm, Setting};
use hardygroups::identities::{
    hardy_l2_report, hardy_lp_report, higher_order_report, ibp_report, log_hardy_report,
    rellich_report, uncertainty_report, weighted_l2_report, EvalPath, IdentityReport,
    InequalityMode,
};
use hardygroups::quadrature::{
    integrate_lebesgue, polar_integrate, sphere_integrate, QuadratureSpec, SupportBox,
};
use hardygroups::sharpness::{sharpness_sweep, SharpnessTarget};
use hardygroups::testfuncs::{AngularPart, RadialProfile, TestFunction};
use hardygroups::Error;

// ---------------------------------------------------------------------------
// Shared matrix of settings, functions and identity rows
// ---------------------------------------------------------------------------

/// The five weight vectors under test, paired with every quasi-norm each
/// one admits.
fn matrix_settings() -> Vec<(String, Setting)> {
    let groups: [(&str, Vec<f64>); 5] = [
        ("111", vec![1.0, 1.0, 1.0]),
        ("112", vec![1.0, 1.0, 2.0]),
        ("1112", vec![1.0, 1.0, 1.0, 2.0]),
        ("11122", vec![1.0, 1.0, 1.0, 2.0, 2.0]),
        ("11111", vec![1.0, 1.0, 1.0, 1.0, 1.0]),
    ];
    let mut out = Vec::new();
    for (name, weights) in groups {
        let group = DilationGroup::new(weights).unwrap();
        let mut norms: Vec<(&str, QuasiNorm)> =
            vec![("aniso", QuasiNorm::default_anisotropic(&group))];
        let koranyi = QuasiNorm::Koranyi { c: 4.0 };
        if koranyi.validate(&group).is_ok() {
            norms.push(("koranyi", koranyi));
        }
        if QuasiNorm::Euclidean.validate(&group).is_ok() {
            norms.push(("euclid", QuasiNorm::Euclidean));
        }
        for (nname, norm) in norms {
            out.push((
                format!("{name}/{nname}"),
                Setting::new(group.clone(), norm).unwrap(),
            ));
        }
    }
    out
}

fn test_functions() -> Vec<(&'static str, TestFunction)> {
    vec![
        ("real", TestFunction::real_bump(0.5, 2.0).unwrap()),
        ("complex", TestFunction::complex_bump(0.5, 2.0).unwrap()),
    ]
}

struct Row {
    label: String,
    report: IdentityReport,
}

/// Every identity report of the acceptance matrix on one combination:
/// each reporter runs at every admissible parameter of its published grid.
fn combo_rows(
    label: &str,
    setting: &Setting,
    fname: &str,
    f: &TestFunction,
    path: EvalPath,
    spec: &QuadratureSpec,
) -> Vec<Row> {
    let q = setting.homogeneous_dim();
    let auto = InequalityMode::Auto;
    let mut rows: Vec<Row> = Vec::new();
    let mut push = |name: String, r: Result<IdentityReport, Error>| {
        let report = r.unwrap_or_else(|e| panic!("{label} {fname} {name}: {e}"));
        rows.push(Row { label: format!("{label} {fname} {name}"), report });
    };

    if f.is_real() {
        for p in [1.5, 2.0, 3.0] {
            if p < q {
                push(format!("hardy_lp p={p}"), hardy_lp_report(setting, f, p, path, spec));
            }
        }
    }
    push("hardy_l2".into(), hardy_l2_report(setting, f, path, spec));
    for alpha in [-1.0, 0.0, 1.0, (q - 2.0) / 2.0 + 0.3] {
        push(
            format!("weighted_l2 alpha={alpha}"),
            weighted_l2_report(setting, f, alpha, auto, path, spec),
        );
    }
    if q >= 5.0 {
        push("rellich".into(), rellich_report(setting, f, path, spec));
    }
    for k in [1usize, 2, 3] {
        for alpha in [0.0, 0.5] {
            push(
                format!("higher_order k={k} alpha={alpha}"),
                higher_order_report(setting, f, k, alpha, auto, path, spec),
            );
        }
    }
    for p in [2.0, 2.5] {
        push(format!("ibp p={p}"), ibp_report(setting, f, p, path, spec));
    }
    rows
}

fn matrix_rows(path: EvalPath, spec_for: &(dyn Fn(&Setting) -> QuadratureSpec + Sync)) -> Vec<Row> {
    let settings = matrix_settings();
    let functions = test_functions();
    let combos: Vec<(String, &Setting, &str, &TestFunction)> = settings
        .iter()
        .flat_map(|(sname, setting)| {
            functions
                .iter()
                .map(move |(fname, f)| (sname.clone(), setting, *fname, f))
        })
        .collect();
    combos
        .par_iter()
        .flat_map(|(sname, setting, fname, f)| {
            combo_rows(sname, setting, fname, f, path, &spec_for(setting))
        })
        .collect()
}

static SEPARABLE_MATRIX: OnceLock<(Vec<Row>, Duration)> = OnceLock::new();
static GENERAL_MATRIX: OnceLock<(Vec<Row>, Duration)> = OnceLock::new();

fn separable_matrix() -> &'static (Vec<Row>, Duration) {
    SEPARABLE_MATRIX.get_or_init(|| {
        let t0 = Instant::now();
        let rows = matrix_rows(EvalPath::Separable, &|_| QuadratureSpec::default());
        (rows, t0.elapsed())
    })
}

fn general_matrix() -> &'static (Vec<Row>, Duration) {
    GENERAL_MATRIX.get_or_init(|| {
        let t0 = Instant::now();
        // The quadrature budget scales with dimension: a moderate tensor
        // grid covers three dimensions, while the sampled path needs more
        // points per extra dimension to stay inside the 1e-3 gate.
        let spec_for = |setting: &Setting| QuadratureSpec {
            cubature_points_per_dim: 64,
            mc_samples: if setting.dim() >= 5 { 1 << 21 } else { 1 << 18 },
            ..QuadratureSpec::default()
        };
        let fd = RadialOperatorMethod::FiniteDifference { h: 1e-3, order: 4, richardson: false };
        let rows = matrix_rows(EvalPath::General(fd), &spec_for);
        (rows, t0.elapsed())
    })
}

fn aniso(weights: &[f64]) -> Setting {
    Setting::new(
        DilationGroup::new(weights.to_vec()).unwrap(),
        QuasiNorm::Anisotropic { kappa: 4.0 },
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// 1. Identity residual matrix
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_identity_residuals() {
    let (sep, t_sep) = separable_matrix();
    assert!(!sep.is_empty());
    let (gen, t_gen) = general_matrix();
    assert_eq!(gen.len(), sep.len());
    let mut bad: Vec<String> = Vec::new();
    for (path, rows, tol) in [("separable", sep, 1e-6), ("general", gen, 1e-3)] {
        for row in rows {
            if !(row.report.rel_residual < tol) {
                bad.push(format!(
                    "{} [{path}]: rel_residual = {:.3e} (tol {tol:.0e})",
                    row.label, row.report.rel_residual
                ));
            }
        }
    }
    assert!(bad.is_empty(), "rows over tolerance:\n{}", bad.join("\n"));
    let total = *t_sep + *t_gen;
    assert!(total < Duration::from_secs(180), "matrix took {total:.1?}");
    println!(
        "[acceptance 1] identity residuals: pass \
         ({} separable rows < 1e-6, {} general rows < 1e-3, {:.1?})",
        sep.len(),
        gen.len(),
        total
    );
}

// ---------------------------------------------------------------------------
// 2. Remainder nonnegativity
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_remainders_nonnegative() {
    let mut count = 0usize;
    for (path, (rows, _)) in
        [("separable", separable_matrix()), ("general", general_matrix())]
    {
        for row in rows {
            for (i, &rem) in row.report.remainders.iter().enumerate() {
                assert!(
                    rem >= -1e-8,
                    "{} [{path}] remainder {i} = {rem:.3e}",
                    row.label
                );
                count += 1;
            }
        }
    }
    assert!(count > 0);
    println!("[acceptance 2] remainder nonnegativity: pass ({count} terms >= -1e-8)");
}

// ---------------------------------------------------------------------------
// 3. Sharp constants by approach
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_sharp_constant_approach() {
    let t0 = Instant::now();
    let spec = QuadratureSpec::default();
    let deltas = [1e-2, 1e-3];
    // (label, setting, target, required fraction of the constant at 1e-3)
    let cases: Vec<(String, Setting, SharpnessTarget, f64)> = vec![
        ("hardy Q=4 p=2".into(), aniso(&[1.0, 1.0, 2.0]), SharpnessTarget::Hardy { p: 2.0 }, 0.98),
        (
            "hardy Q=5 p=2".into(),
            aniso(&[1.0, 1.0, 1.0, 2.0]),
            SharpnessTarget::Hardy { p: 2.0 },
            0.98,
        ),
        (
            "hardy Q=5 p=3".into(),
            aniso(&[1.0, 1.0, 1.0, 2.0]),
            SharpnessTarget::Hardy { p: 3.0 },
            0.98,
        ),
        ("rellich Q=5".into(), aniso(&[1.0, 1.0, 1.0, 2.0]), SharpnessTarget::Rellich, 0.95),
        ("rellich Q=6".into(), aniso(&[1.0, 1.0, 2.0, 2.0]), SharpnessTarget::Rellich, 0.95),
        (
            "higher_order Q=7 k=2".into(),
            aniso(&[1.0, 1.0, 1.0, 2.0, 2.0]),
            SharpnessTarget::HigherOrder { k: 2, alpha: 0.0 },
            0.95,
        ),
    ];
    for (label, setting, target, fraction) in &cases {
        let curve = sharpness_sweep(setting, target, &deltas, &spec)
            .unwrap_or_else(|e| panic!("{label}: {e}"));
        assert!(curve.reliable.iter().all(|&r| r), "{label}: unreliable point");
        let at_final = curve.quotients[1];
        assert!(
            at_final >= fraction * curve.target_constant,
            "{label}: quotient {at_final:.6} < {fraction} * {:.6}",
            curve.target_constant
        );
        for &v in &curve.quotients {
            assert!(
                v <= curve.target_constant * (1.0 + 1e-6),
                "{label}: quotient {v} exceeds target {}",
                curve.target_constant
            );
        }
        if *label == "higher_order Q=7 k=2" {
            let expected = 4.0 / 15.0;
            assert!(
                (curve.target_constant - expected).abs() <= 1e-12 * expected,
                "{label}: target {} != 4/15",
                curve.target_constant
            );
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(120), "sweeps took {elapsed:.1?}");
    println!(
        "[acceptance 3] sharp-constant approach: pass ({} sweeps, {:.1?})",
        cases.len(),
        elapsed
    );
}

// ---------------------------------------------------------------------------
// 4. Even/odd parity gate for the iterated inequality
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_parity_gate() {
    let spec = QuadratureSpec::default();
    let f = TestFunction::real_bump(0.5, 2.0).unwrap();
    let require = InequalityMode::Require;
    let path = EvalPath::Separable;

    let even = aniso(&[1.0, 1.0, 2.0, 2.0]); // Q = 6
    for k in [1usize, 2] {
        let report = higher_order_report(&even, &f, k, 0.0, require, path, &spec).unwrap();
        assert!(report.pass, "Q=6 k={k} should be accepted");
    }
    match higher_order_report(&even, &f, 3, 0.0, require, path, &spec) {
        Err(Error::DegenerateConstant(_)) => {}
        other => panic!("Q=6 k=3 must refuse with a degenerate constant, got {other:?}"),
    }

    let odd = aniso(&[1.0, 1.0, 1.0, 2.0, 2.0]); // Q = 7
    for k in [1usize, 2, 3, 4] {
        let report = higher_order_report(&odd, &f, k, 0.0, require, path, &spec).unwrap();
        assert!(report.pass, "Q=7 k={k} should be accepted");
    }
    println!(
        "[acceptance 4] parity gate: pass (Q=6 accepts k<=2, rejects k=3; Q=7 accepts k<=4)"
    );
}

// ---------------------------------------------------------------------------
// 5. Measure consistency
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_measure_consistency() {
    let spec = QuadratureSpec::default();
    let three_d: Vec<Setting> = vec![
        Setting::new(
            DilationGroup::new(vec![1.0, 1.0, 1.0]).unwrap(),
            QuasiNorm::Euclidean,
        )
        .unwrap(),
        aniso(&[1.0, 1.0, 2.0]),
    ];

    // Polar versus Lebesgue on randomized separable functions.
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for trial in 0..10 {
        let setting = &three_d[trial % three_d.len()];
        let a = rng.random_range(0.3..0.6);
        let b = rng.random_range(1.3..2.4);
        let c0 = rng.random_range(0.5..1.5);
        let index = rng.random_range(0..setting.dim());
        let power = rng.random_range(1..=2) * 2 - 2; // 0 or 2
        let profile = RadialProfile::smooth_bump(a, b).unwrap();
        let angular = move |y: &[f64]| c0 + y[index].powi(power);

        let polar = {
            let g = |r: f64| Complex64::new(profile.eval(r), 0.0);
            let u = angular;
            polar_integrate(setting, &g, (a, b), &u, &spec).unwrap().0.re
        };
        let lebesgue = {
            let half = setting.norm().ball_box(setting.group(), b);
            let domain = SupportBox::symmetric(&half);
            let f = |x: &[f64]| {
                let r = setting.norm_of(x);
                if r <= a || r >= b {
                    return Complex64::new(0.0, 0.0);
                }
                let y = setting.sphere_project(x);
                Complex64::new(profile.eval(r) * angular(&y), 0.0)
            };
            integrate_lebesgue(setting, &f, &domain, &spec).unwrap().0.re
        };
        let rel = (polar - lebesgue).abs() / lebesgue.abs().max(1e-12);
        assert!(
            rel < 1e-3,
            "trial {trial}: polar {polar:.8} vs lebesgue {lebesgue:.8} (rel {rel:.2e})"
        );
    }

    // Annulus-width independence of the surface measure.
    let heis = aniso(&[1.0, 1.0, 2.0]);
    let u = |y: &[f64]| 1.0 + y[0] * y[0];
    let narrow = QuadratureSpec { annulus_lambda: 2.0, ..QuadratureSpec::default() };
    let wide = QuadratureSpec { annulus_lambda: 4.0, ..QuadratureSpec::default() };
    let (v2, _) = sphere_integrate(&heis, &u, &narrow).unwrap();
    let (v4, _) = sphere_integrate(&heis, &u, &wide).unwrap();
    let rel = (v2 - v4).abs() / v2.abs();
    assert!(rel < 1e-3, "lambda 2 vs 4: {v2:.8} vs {v4:.8} (rel {rel:.2e})");

    // Unit-sphere area in the isotropic three-dimensional case.
    let (area, _) = sphere_integrate(&three_d[0], &|_y: &[f64]| 1.0, &spec).unwrap();
    let expected = 4.0 * std::f64::consts::PI;
    assert!(
        (area - expected).abs() < 1e-3,
        "sphere area {area:.8} != 4*pi = {expected:.8}"
    );
    println!(
        "[acceptance 5] measure consistency: pass \
         (10 polar/Lebesgue trials, annulus widths agree, area = 4*pi)"
    );
}

// ---------------------------------------------------------------------------
// 6. Operator fidelity
// ---------------------------------------------------------------------------

/// Least-squares slope of ln(err) against ln(h).
fn fitted_slope(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(h, e) in samples {
        let (x, y) = (h.ln(), e.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[test]
fn criterion_6_operator_fidelity() {
    let heis = aniso(&[1.0, 1.0, 2.0]);
    let f = TestFunction::real_bump(0.5, 2.0).unwrap();
    let x = [0.8, 0.33, 0.5];

    // Finite differences converge at their stencil order.
    for (k, order) in [(1usize, 2usize), (1, 4), (2, 2), (2, 4)] {
        let exact = radial_derivative(&heis, &f, &x, k, &RadialOperatorMethod::Analytic)
            .unwrap()
            .re;
        let samples: Vec<(f64, f64)> = [0.04, 0.02, 0.01, 0.005]
            .iter()
            .map(|&h| {
                let m = RadialOperatorMethod::FiniteDifference { h, order, richardson: false };
                let v = radial_derivative(&heis, &f, &x, k, &m).unwrap().re;
                (h, (v - exact).abs())
            })
            .collect();
        let slope = fitted_slope(&samples);
        assert!(
            (slope - order as f64).abs() <= 0.2,
            "k={k} order={order}: fitted slope {slope:.3}"
        );
    }

    // The scale-derivative operator is independent of the quasi-norm.
    let group = DilationGroup::new(vec![1.0, 1.0, 2.0]).unwrap();
    let norms = [
        QuasiNorm::Anisotropic { kappa: 4.0 },
        QuasiNorm::Anisotropic { kappa: 2.0 },
        QuasiNorm::Koranyi { c: 16.0 },
    ];
    let center = [1.5, 0.3, 0.4];
    let callable = move |x: &[f64]| {
        let d2: f64 = x.iter().zip(&center).map(|(&a, &b)| (a - b) * (a - b)).sum();
        if d2 < 1.0 {
            Complex64::new((-1.0 / (1.0 - d2)).exp(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let black_box = TestFunction::general(
        Arc::new(callable),
        SupportBox::new(vec![0.5, -0.7, -0.6], vec![2.5, 1.3, 1.4], 0.0).unwrap(),
        true,
        true,
    );
    let probe = [1.3, 0.25, 0.55];
    let method = RadialOperatorMethod::default();
    let values: Vec<f64> = norms
        .iter()
        .map(|norm| {
            let s = Setting::new(group.clone(), norm.clone()).unwrap();
            euler_apply(&s, &black_box, &probe, &method).unwrap().re
        })
        .collect();
    let scale = values[0].abs().max(1.0);
    for v in &values[1..] {
        assert!(
            (v - values[0]).abs() <= 1e-10 * scale,
            "norm-dependent scale derivative: {values:?}"
        );
    }

    // Homogeneous functions are eigenfunctions of the scale derivative;
    // compactly supported bumps are far from any eigenvalue.
    let nu = 0.8;
    let homogeneous = TestFunction::separable(
        RadialProfile::power(nu),
        AngularPart::CoordinateTrace { index: 0, power: 2 },
    );
    let samples: Vec<(Vec<f64>, f64)> = vec![
        (vec![1.0, 0.3, 0.2], 2.0),
        (vec![-0.4, 0.8, -0.1], 0.5),
        (vec![0.2, -0.2, 1.4], 3.7),
    ];
    let res = check_homogeneity(&heis, &homogeneous, nu, &samples).unwrap();
    assert!(res <= 1e-10, "homogeneous family residual {res:.3e}");
    for (pt, _) in &samples {
        let e = euler_apply(&heis, &homogeneous, pt, &RadialOperatorMethod::Analytic)
            .unwrap()
            .re;
        let v = homogeneous.eval(&heis, pt).re;
        assert!(
            (e - nu * v).abs() <= 1e-10 * v.abs().max(1e-12),
            "eigen relation fails at {pt:?}"
        );
    }
    for candidate in [0.0, 0.5, 1.0] {
        let res = check_homogeneity(&heis, &f, candidate, &samples).unwrap();
        assert!(res > 0.1, "bump looks homogeneous of order {candidate}: residual {res:.3e}");
    }
    let e = euler_apply(&heis, &f, &x, &RadialOperatorMethod::Analytic).unwrap().re;
    let v = f.eval(&heis, &x).re;
    for candidate in [0.0, 0.5, 1.0] {
        assert!(
            (e - candidate * v).abs() / v.abs() > 0.1,
            "bump close to eigenvalue {candidate}"
        );
    }
    println!(
        "[acceptance 6] operator fidelity: pass \
         (FD slopes within 0.2, norm-independent to 1e-10, eigen relation both ways)"
    );
}

// ---------------------------------------------------------------------------
// 7. Uncertainty and logarithmic bounds
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_uncertainty_and_log_bounds() {
    let spec = QuadratureSpec::default();

    // Product bound slack is nonnegative across the whole matrix.
    let mut slack_rows = 0usize;
    for (label, setting) in matrix_settings() {
        let q = setting.homogeneous_dim();
        for (fname, f) in test_functions() {
            for p in [1.5, 2.0, 3.0] {
                if p >= q {
                    continue;
                }
                let report =
                    uncertainty_report(&setting, &f, p, EvalPath::Separable, &spec)
                        .unwrap_or_else(|e| panic!("{label} {fname} p={p}: {e}"));
                let slack = report.terms["slack"];
                assert!(slack >= 0.0, "{label} {fname} p={p}: slack {slack:.3e}");
                assert!(report.pass, "{label} {fname} p={p}: report failed");
                slack_rows += 1;
            }
        }
    }

    // In the isotropic three-dimensional case the squared quotient
    // reproduces 1/4 as its bound: (N1 N2)^2 >= (1/4) N3^2.
    let abelian = Setting::new(
        DilationGroup::new(vec![1.0, 1.0, 1.0]).unwrap(),
        QuasiNorm::Euclidean,
    )
    .unwrap();
    for (a, b) in [(0.5, 2.0), (0.3, 3.0), (0.8, 1.6)] {
        let f = TestFunction::real_bump(a, b).unwrap();
        let report = uncertainty_report(&abelian, &f, 2.0, EvalPath::Separable, &spec).unwrap();
        let n1 = report.terms["norm_p_derivative"];
        let n2 = report.terms["norm_q_weighted_function"];
        let n3 = report.terms["l2_mass"];
        assert!((report.terms["constant"] - 0.5).abs() < 1e-15);
        assert!(
            (n1 * n2).powi(2) >= 0.25 * n3 * n3 * (1.0 - 1e-9),
            "support [{a}, {b}]: squared quotient violates the 1/4 bound"
        );
    }

    // Logarithmic bound at several window radii, with its p/(p-1) constant.
    for setting in [aniso(&[1.0, 1.0, 2.0]), abelian.clone()] {
        let f = TestFunction::real_bump(0.5, 2.0).unwrap();
        for p in [2.0, 3.0] {
            let report =
                log_hardy_report(&setting, &f, p, &[0.5, 1.0, 2.0], &spec).unwrap();
            assert!(report.pass, "log bound p={p} failed");
            let expected = p / (p - 1.0);
            assert!((report.terms["constant"] - expected).abs() < 1e-15);
            for r in [0.5, 1.0, 2.0] {
                let slack = report.terms[&format!("slack_R{r}")];
                assert!(slack >= 0.0, "p={p} R={r}: slack {slack:.3e}");
            }
        }
    }
    println!(
        "[acceptance 7] uncertainty and log bounds: pass \
         ({slack_rows} slack rows >= 0, quarter bound holds, log constant p/(p-1))"
    );
}

// ---------------------------------------------------------------------------
// 8. Determinism of the CLI outputs
// ---------------------------------------------------------------------------

#[test]
fn criterion_8_byte_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.toml");
    std::fs::write(
        &config_path,
        "seed = 42\n\
         [group]\nweights = [1.0, 1.0, 2.0]\n\n\
         [[identities]]\nid = \"hardy_l2\"\n\n\
         [[identities]]\nid = \"hardy_l2\"\npath = \"general\"\n\n\
         [[identities]]\nid = \"hardy_lp\"\np = 1.5\n\n\
         [[identities]]\nid = \"weighted_l2\"\nalpha = 0.5\n\n\
         [[identities]]\nid = \"complex_reduction\"\np = 2.5\n\n\
         [[sharpness]]\ninequality = \"hardy\"\np = 2.0\ndeltas = [1e-1, 1e-2]\n\n\
         [[sharpness]]\ninequality = \"hardy\"\nmode = \"optimize\"\np = 2.0\n",
    )
    .unwrap();

    let run = |out: &str| {
        let out_dir = dir.path().join(out);
        let status = Command::new(env!("CARGO_BIN_EXE_hardygroups"))
            .arg("all")
            .arg(&config_path)
            .arg("--out")
            .arg(&out_dir)
            .arg("--format")
            .arg("both")
            .output()
            .unwrap();
        assert!(
            status.status.success(),
            "run failed:\n{}\n{}",
            String::from_utf8_lossy(&status.stdout),
            String::from_utf8_lossy(&status.stderr)
        );
        std::fs::read(out_dir.join("report.csv")).unwrap()
    };
    let first = run("a");
    let second = run("b");
    assert!(!first.is_empty());
    assert_eq!(first, second, "CSV outputs differ between identical runs");
    println!(
        "[acceptance 8] determinism: pass (two runs, {} byte CSV identical)",
        first.len()
    );
}
