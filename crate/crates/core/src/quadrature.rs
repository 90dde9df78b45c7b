//! Gauss-Legendre quadrature with panel refinement.
//!
//! Every integral in the crate is evaluated on a fixed-order Gauss-Legendre
//! rule. A panel is accepted when the `n`-node and `n/2`-node estimates
//! agree to the requested tolerance; otherwise it is bisected. Smooth
//! integrands are accepted on the first panel, so refinement only kicks in
//! for near-singular cases such as turning points close to a horizon.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};

/// Endpoint treatment for turning-point integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Substitution {
    /// `z = z* sin(theta)` near the turning point.
    #[default]
    TrigEndpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    pub node_count: usize,
    pub substitution: Substitution,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            node_count: 256,
            substitution: Substitution::TrigEndpoint,
            rel_tol: 1e-9,
        }
    }
}

/// Maximum bisection depth of a single panel.
const MAX_DEPTH: u32 = 48;

impl QuadratureSpec {
    pub fn new(node_count: usize, rel_tol: f64) -> Result<Self> {
        let spec = Self {
            node_count,
            substitution: Substitution::TrigEndpoint,
            rel_tol,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_count < 16 {
            return Err(HoloError::Config(format!(
                "quadrature node_count must be at least 16, got {}",
                self.node_count
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(HoloError::Config(format!(
                "quadrature rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F>(&self, a: f64, b: f64, f: F) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        if a == b {
            return Ok(0.0);
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(HoloError::numerics(format!(
                "non-finite integration limits [{a}, {b}]"
            )));
        }
        let fine = rule(self.node_count);
        let coarse = rule(self.node_count / 2);
        let whole = fine.apply(a, b, &f);
        if !whole.is_finite() {
            return Err(HoloError::numerics(format!(
                "integrand is not finite on [{a}, {b}]"
            )));
        }
        let scale = whole.abs().max(f64::MIN_POSITIVE);
        let abs_tol = self.rel_tol * scale;
        let mut total = 0.0;
        refine(
            &f,
            a,
            b,
            whole,
            &fine,
            &coarse,
            abs_tol,
            (b - a).abs(),
            0,
            &mut total,
        )?;
        Ok(total)
    }
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fine_est: f64,
    fine: &GaussLegendre,
    coarse: &GaussLegendre,
    abs_tol: f64,
    span: f64,
    depth: u32,
    total: &mut f64,
) -> Result<()> {
    let coarse_est = coarse.apply(a, b, f);
    let share = abs_tol * ((b - a).abs() / span).max(1e-3);
    if (fine_est - coarse_est).abs() <= share {
        *total += fine_est;
        return Ok(());
    }
    if depth >= MAX_DEPTH {
        return Err(HoloError::numerics(format!(
            "quadrature did not converge on [{a:.6e}, {b:.6e}]"
        )));
    }
    let mid = 0.5 * (a + b);
    let left = fine.apply(a, mid, f);
    let right = fine.apply(mid, b, f);
    if !(left.is_finite() && right.is_finite()) {
        return Err(HoloError::numerics(format!(
            "integrand is not finite on [{a:.6e}, {b:.6e}]"
        )));
    }
    refine(
        f,
        a,
        mid,
        left,
        fine,
        coarse,
        abs_tol,
        span,
        depth + 1,
        total,
    )?;
    refine(
        f,
        mid,
        b,
        right,
        fine,
        coarse,
        abs_tol,
        span,
        depth + 1,
        total,
    )
}

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "Gauss-Legendre rule needs at least two nodes");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule on `[a, b]`.
    pub fn apply<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: &F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        half * sum
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared, lazily built rule of order `n`.
pub fn rule(n: usize) -> Arc<GaussLegendre> {
    static RULES: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let rules = RULES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = rules.lock().expect("quadrature rule table poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(GaussLegendre::new(n)))
        .clone()
}
