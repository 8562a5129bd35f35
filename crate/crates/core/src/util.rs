//! Small numeric helpers: compensated summation, derivative towers for the
//! building-block functions exp(-1/w) and the smooth step, and polynomial
//! utilities.

/// Maximum derivative order carried by a tower (value + 6 derivatives).
pub const TOWER_LEN: usize = 7;

pub type Tower = [f64; TOWER_LEN];

pub const ZERO_TOWER: Tower = [0.0; TOWER_LEN];

/// Below this argument, exp(-1/w) and every derivative we form from it are
/// far below machine underflow; evaluating the recurrences there risks
/// overflow in the intermediate 1/w powers instead.
const W_FLOOR: f64 = 1e-40;

/// Neumaier-compensated accumulator. Deterministic for a fixed evaluation
/// order and accurate enough that quadrature sums are reproducible to the
/// last bit regardless of panel count.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accum {
    sum: f64,
    comp: f64,
}

impl Accum {
    pub fn new() -> Self {
        Accum::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of a slice.
pub fn neumaier_sum(values: &[f64]) -> f64 {
    let mut acc = Accum::new();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}

/// `b^e` dispatching the exponents that dominate the hot paths (small
/// integers from dilation weights, halves and quarters from norm roots) to
/// multiplications and square roots; everything else falls back to `powf`.
#[inline]
pub fn fast_pow(b: f64, e: f64) -> f64 {
    if e == 1.0 {
        b
    } else if e == 2.0 {
        b * b
    } else if e == 4.0 {
        let s = b * b;
        s * s
    } else if e == 3.0 {
        b * b * b
    } else if e == 0.5 {
        b.sqrt()
    } else if e == 0.25 {
        b.sqrt().sqrt()
    } else if e == -1.0 {
        b.recip()
    } else if e == -2.0 {
        (b * b).recip()
    } else if e.fract() == 0.0 && e.abs() <= 32.0 {
        b.powi(e as i32)
    } else {
        b.powf(e)
    }
}

/// Binomial coefficient for the small orders used by the towers.
#[inline]
pub fn binom(n: usize, k: usize) -> f64 {
    const TABLE: [[f64; TOWER_LEN]; TOWER_LEN] = [
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 3.0, 3.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 4.0, 6.0, 4.0, 1.0, 0.0, 0.0],
        [1.0, 5.0, 10.0, 10.0, 5.0, 1.0, 0.0],
        [1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0],
    ];
    TABLE[n][k]
}

/// Tower of u = -1/w given the tower of w (requires w > 0).
/// Uses the identity u*w = -1, differentiated k times.
fn neg_recip_tower(w: &Tower, k_max: usize) -> Tower {
    let mut u = ZERO_TOWER;
    u[0] = -1.0 / w[0];
    for k in 1..=k_max {
        let mut s = 0.0;
        for j in 0..k {
            s += binom(k, j) * u[j] * w[k - j];
        }
        u[k] = -s / w[0];
    }
    u
}

/// Tower of exp(u) given the tower of u, via g' = u' g.
fn exp_tower(u: &Tower, k_max: usize) -> Tower {
    let mut g = ZERO_TOWER;
    g[0] = u[0].exp();
    for k in 0..k_max {
        // g^{(k+1)} = sum_j C(k,j) u^{(j+1)} g^{(k-j)}
        let mut s = 0.0;
        for j in 0..=k {
            s += binom(k, j) * u[j + 1] * g[k - j];
        }
        g[k + 1] = s;
    }
    g
}

/// Tower of exp(-1/w) for a positive w given by its own tower.
/// Returns the zero tower once w is small enough that the value (and all
/// derivatives up to order 6) are indistinguishable from zero in f64.
pub fn exp_neg_recip_tower(w: &Tower, k_max: usize) -> Tower {
    if w[0] <= W_FLOOR {
        return ZERO_TOWER;
    }
    let u = neg_recip_tower(w, k_max);
    exp_tower(&u, k_max)
}

/// Tower of n/d given both towers (requires d != 0).
fn quotient_tower(n: &Tower, d: &Tower, k_max: usize) -> Tower {
    let mut s = ZERO_TOWER;
    s[0] = n[0] / d[0];
    for k in 1..=k_max {
        let mut acc = n[k];
        for j in 0..k {
            acc -= binom(k, j) * s[j] * d[k - j];
        }
        s[k] = acc / d[0];
    }
    s
}

/// Leibniz product of two towers.
pub fn product_tower(a: &Tower, b: &Tower, k_max: usize) -> Tower {
    let mut p = ZERO_TOWER;
    for k in 0..=k_max {
        let mut s = 0.0;
        for j in 0..=k {
            s += binom(k, j) * a[j] * b[k - j];
        }
        p[k] = s;
    }
    p
}

/// Smooth step S with S = 0 for t <= 0, S = 1 for t >= 1, C-infinity in
/// between: S(t) = B(t) / (B(t) + B(1-t)) with B(t) = exp(-1/t).
/// Returns the tower of derivatives with respect to t.
pub fn smooth_step_tower(t: f64, k_max: usize) -> Tower {
    if t <= 0.0 {
        return ZERO_TOWER;
    }
    if t >= 1.0 {
        let mut s = ZERO_TOWER;
        s[0] = 1.0;
        return s;
    }
    // Tower of w1 = t and w2 = 1 - t.
    let mut w1 = ZERO_TOWER;
    w1[0] = t;
    w1[1] = 1.0;
    let mut w2 = ZERO_TOWER;
    w2[0] = 1.0 - t;
    w2[1] = -1.0;
    let n = exp_neg_recip_tower(&w1, k_max);
    let m = exp_neg_recip_tower(&w2, k_max);
    let mut d = ZERO_TOWER;
    for k in 0..=k_max {
        d[k] = n[k] + m[k];
    }
    // The denominator is bounded below by B(1/2) = e^-2 on (0,1), so the
    // quotient recurrence is well conditioned.
    quotient_tower(&n, &d, k_max)
}

/// Plain smooth-step value.
pub fn smooth_step(t: f64) -> f64 {
    smooth_step_tower(t, 0)[0]
}

/// Signed Stirling numbers of the first kind: d^k/dr^k F(ln r) =
/// r^{-k} * sum_j STIRLING[k][j-1] * F^{(j)}(ln r) for k >= 1.
pub const LOG_CHAIN: [[f64; 6]; 6] = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    [2.0, -3.0, 1.0, 0.0, 0.0, 0.0],
    [-6.0, 11.0, -6.0, 1.0, 0.0, 0.0],
    [24.0, -50.0, 35.0, -10.0, 1.0, 0.0],
    [-120.0, 274.0, -225.0, 85.0, -15.0, 1.0],
];

/// Tower (in r) of F(ln r) given the tower (in s) of F at s = ln r.
pub fn log_compose_tower(f_in_s: &Tower, r: f64, k_max: usize) -> Tower {
    let mut out = ZERO_TOWER;
    out[0] = f_in_s[0];
    let mut rk = 1.0;
    for k in 1..=k_max {
        rk *= r;
        let row = &LOG_CHAIN[k - 1];
        let mut s = 0.0;
        for (j, &c) in row.iter().enumerate().take(k) {
            s += c * f_in_s[j + 1];
        }
        out[k] = s / rk;
    }
    out
}

/// Falling factorial e (e-1) ... (e-j+1).
pub fn falling_factorial(e: f64, j: usize) -> f64 {
    let mut p = 1.0;
    for i in 0..j {
        p *= e - i as f64;
    }
    p
}

/// Tower of r^e (for r > 0).
pub fn power_tower(r: f64, e: f64, k_max: usize) -> Tower {
    let mut t = ZERO_TOWER;
    for k in 0..=k_max {
        t[k] = falling_factorial(e, k) * r.powf(e - k as f64);
    }
    t
}

// ---------------------------------------------------------------------------
// Dense polynomial helpers (coefficients in increasing degree order).
// ---------------------------------------------------------------------------

pub fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub fn poly_derivative(a: &[f64]) -> Vec<f64> {
    if a.len() <= 1 {
        return vec![0.0];
    }
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect()
}

pub fn poly_eval(a: &[f64], x: f64) -> f64 {
    let mut v = 0.0;
    for &c in a.iter().rev() {
        v = v * x + c;
    }
    v
}
