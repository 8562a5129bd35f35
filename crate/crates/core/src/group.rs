//! Dilation groups on R^n with anisotropic scalings, and the quasi-norms
//! that are homogeneous with respect to them.
//!
//! A group is R^n equipped with the family of dilations
//! `D_lambda(x)_i = lambda^{w_i} x_i` for positive weights `w_i`. Lebesgue
//! measure is invariant under translations and scales as `lambda^Q` under
//! `D_lambda`, where `Q = sum_i w_i` is the homogeneous dimension.

use crate::error::{Error, Result};
use crate::util::fast_pow;
use std::sync::Arc;

pub type Point = Vec<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct DilationGroup {
    weights: Vec<f64>,
}

impl DilationGroup {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("dilation weights must be nonempty"));
        }
        if weights.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
            return Err(Error::invalid(format!(
                "dilation weights must be positive and finite, got {weights:?}"
            )));
        }
        Ok(DilationGroup { weights })
    }

    /// Ambient (topological) dimension n.
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Homogeneous dimension Q = sum of the weights.
    pub fn homogeneous_dim(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_isotropic(&self) -> bool {
        self.weights.iter().all(|&w| w == self.weights[0])
    }

    /// Applies the dilation D_lambda componentwise.
    pub fn dilate(&self, lambda: f64, x: &[f64]) -> Point {
        let mut out = vec![0.0; x.len()];
        self.dilate_into(lambda, x, &mut out);
        out
    }

    /// [`dilate`](Self::dilate) writing into a caller-provided buffer;
    /// avoids the allocation in per-sample loops.
    pub fn dilate_into(&self, lambda: f64, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(out.len(), self.dim());
        for ((slot, &w), &xi) in out.iter_mut().zip(&self.weights).zip(x) {
            *slot = fast_pow(lambda, w) * xi;
        }
    }
}

/// Quasi-norms |x| satisfying |D_lambda x| = lambda |x|, |-x| = |x|, and
/// |x| = 0 iff x = 0.
#[derive(Debug, Clone, PartialEq)]
pub enum QuasiNorm {
    /// `(sum_i |x_i|^{kappa / w_i})^{1/kappa}`. Smooth away from the origin
    /// when kappa / w_i is an even integer for every i.
    Anisotropic { kappa: f64 },
    /// `(|x'|^4 + c |x''|^2)^{1/4}` where x' collects the weight-1
    /// coordinates and x'' the weight-2 coordinates. Requires every weight
    /// to be 1 or 2.
    Koranyi { c: f64 },
    /// `(sum_i x_i^2)^{1/(2 w)}` on isotropic groups with common weight w;
    /// the exponent makes the homogeneity exact for any w. Coincides with
    /// the Euclidean norm when w = 1.
    Euclidean,
}

impl QuasiNorm {
    /// Default smooth anisotropic norm: kappa = 2 * max weight, rounded up
    /// to an even integer, so each exponent kappa / w_i is >= 2 (and even
    /// for integer weights dividing kappa).
    pub fn default_anisotropic(group: &DilationGroup) -> Self {
        let wmax = group.weights().iter().cloned().fold(f64::MIN, f64::max);
        let mut kappa = (2.0 * wmax).ceil();
        if (kappa as i64) % 2 != 0 {
            kappa += 1.0;
        }
        QuasiNorm::Anisotropic { kappa }
    }

    /// Checks that this norm is usable on the given group.
    pub fn validate(&self, group: &DilationGroup) -> Result<()> {
        match self {
            QuasiNorm::Anisotropic { kappa } => {
                if !(kappa.is_finite() && *kappa > 0.0) {
                    return Err(Error::invalid(format!("kappa must be positive, got {kappa}")));
                }
                Ok(())
            }
            QuasiNorm::Koranyi { c } => {
                if !(c.is_finite() && *c > 0.0) {
                    return Err(Error::invalid(format!(
                        "Koranyi constant must be positive, got {c}"
                    )));
                }
                if group.weights().iter().any(|&w| w != 1.0 && w != 2.0) {
                    return Err(Error::capability(format!(
                        "Koranyi norm needs weights in {{1, 2}}, got {:?}",
                        group.weights()
                    )));
                }
                Ok(())
            }
            QuasiNorm::Euclidean => {
                if !group.is_isotropic() {
                    return Err(Error::capability(format!(
                        "Euclidean-type norm needs equal weights, got {:?}",
                        group.weights()
                    )));
                }
                Ok(())
            }
        }
    }

    /// Evaluates |x|.
    pub fn evaluate(&self, group: &DilationGroup, x: &[f64]) -> f64 {
        match self {
            QuasiNorm::Anisotropic { kappa } => {
                let mut s = 0.0;
                for (&w, &xi) in group.weights().iter().zip(x) {
                    s += fast_pow(xi.abs(), kappa / w);
                }
                fast_pow(s, 1.0 / kappa)
            }
            QuasiNorm::Koranyi { c } => {
                let mut a = 0.0; // |x'|^2 over weight-1 coordinates
                let mut b = 0.0; // |x''|^2 over weight-2 coordinates
                for (&w, &xi) in group.weights().iter().zip(x) {
                    if w == 1.0 {
                        a += xi * xi;
                    } else {
                        b += xi * xi;
                    }
                }
                (a * a + c * b).sqrt().sqrt()
            }
            QuasiNorm::Euclidean => {
                let s: f64 = x.iter().map(|&xi| xi * xi).sum();
                let w = group.weights()[0];
                fast_pow(s, 0.5 / w)
            }
        }
    }

    /// Projects x onto the unit quasi-sphere along its dilation orbit:
    /// `D_{1/|x|}(x)`.
    pub fn sphere_project(&self, group: &DilationGroup, x: &[f64]) -> Point {
        let r = self.evaluate(group, x);
        group.dilate(1.0 / r, x)
    }

    /// Componentwise half-widths of an axis-aligned box containing the
    /// quasi-ball {|x| <= r}. Used to bound integration domains.
    pub fn ball_box(&self, group: &DilationGroup, r: f64) -> Vec<f64> {
        match self {
            QuasiNorm::Anisotropic { kappa: _ } => {
                // |x_i|^{kappa/w_i} <= r^kappa componentwise.
                group.weights().iter().map(|&w| r.powf(w)).collect()
            }
            QuasiNorm::Koranyi { c } => group
                .weights()
                .iter()
                .map(|&w| if w == 1.0 { r } else { r * r / c.sqrt() })
                .collect(),
            QuasiNorm::Euclidean => {
                // sum x_i^2 <= r^{2w} inside the ball.
                let w = group.weights()[0];
                group.weights().iter().map(|_| r.powf(w)).collect()
            }
        }
    }
}

/// A group together with a compatible quasi-norm; the ambient structure all
/// operators and integrals are built on.
#[derive(Debug, Clone)]
pub struct Setting {
    group: Arc<DilationGroup>,
    norm: QuasiNorm,
}

impl Setting {
    pub fn new(group: DilationGroup, norm: QuasiNorm) -> Result<Self> {
        norm.validate(&group)?;
        Ok(Setting { group: Arc::new(group), norm })
    }

    pub fn group(&self) -> &DilationGroup {
        &self.group
    }

    pub fn norm(&self) -> &QuasiNorm {
        &self.norm
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    pub fn homogeneous_dim(&self) -> f64 {
        self.group.homogeneous_dim()
    }

    pub fn norm_of(&self, x: &[f64]) -> f64 {
        self.norm.evaluate(&self.group, x)
    }

    pub fn dilate(&self, lambda: f64, x: &[f64]) -> Point {
        self.group.dilate(lambda, x)
    }

    pub fn dilate_into(&self, lambda: f64, x: &[f64], out: &mut [f64]) {
        self.group.dilate_into(lambda, x, out)
    }

    pub fn sphere_project(&self, x: &[f64]) -> Point {
        self.norm.sphere_project(&self.group, x)
    }
}
