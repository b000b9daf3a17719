//! Exact probabilities of `k`-determined events.
//!
//! `P_λ(x ∈ B) = Σ_{x ∈ B} Π e^{-λ} λ^{x_i} / x_i!` is computed by a layered
//! dynamic programme over breadth-first positions; the same programme run
//! with other per-node weights gives the power-series coefficients and the
//! complex continuation (see [`series`] and [`disc`]).

mod dp;
pub mod disc;
pub mod series;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::property::TautProperty;
use dp::Measure;

pub use disc::{complex_decay, disc_bound_check, disc_radius, DISC_SAMPLES, ComplexDecayRow, DiscPoint, DiscReport};
pub use series::{eval_series, remainder_bound, series_coeffs, series_nmax_for, SeriesCoeffs, SeriesValue};

/// Whether the per-node cap left enough mass for a useful interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Ok,
    /// More than half of the probability lies outside the capped box.
    CapTooSmall,
}

/// Rigorous enclosure `[lower, upper]` of a probability.
///
/// `tail_mass` bounds the mass outside the capped box (`k · P(X > cap)`);
/// `rounding` bounds the floating-point error of the summation. The width
/// never exceeds `tail_mass + 2 · rounding`, up to one ulp per endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbInterval {
    pub lower: f64,
    pub upper: f64,
    pub tail_mass: f64,
    pub rounding: f64,
    pub precision: Precision,
}

impl ProbInterval {
    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// `max(20, ⌈3λ⌉ + 10⌈√(3λ)⌉)`
pub fn default_cap(lambda: f64) -> u32 {
    let three = 3.0 * lambda;
    (three.ceil() + 10.0 * three.sqrt().ceil()).max(20.0) as u32
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidLambda(lambda))
    }
}

/// `ln(m!)` for `m = 0..=n`.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0f64;
    out.push(0.0);
    for m in 1..=n {
        acc += (m as f64).ln();
        out.push(acc);
    }
    out
}

/// `P(Poisson(λ) = m)` for `m = 0..=cap`, through log-factorials.
pub(crate) fn poisson_weights(lambda: f64, cap: u32) -> Vec<f64> {
    let lf = ln_factorials(cap as usize);
    let ln_l = lambda.ln();
    (0..=cap as usize)
        .map(|m| (m as f64 * ln_l - lambda - lf[m]).exp())
        .collect()
}

/// Upper bound on `Σ_{m > n} e^{-μ} μ^m / m!`.
///
/// Terms are summed until their ratio `μ/(m+1)` drops below 1/2, after
/// which the rest is bounded by a geometric series.
pub(crate) fn poisson_tail(mu: f64, n: u32) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    let ln_mu = mu.ln();
    let mut m = n as f64 + 1.0;
    let mut ln_term = m * ln_mu - mu - ln_gamma_int(n as u64 + 1);
    let mut total = 0.0f64;
    loop {
        let ratio = mu / (m + 1.0);
        let term = ln_term.exp();
        if ratio <= 0.5 {
            total += term / (1.0 - ratio);
            break;
        }
        total += term;
        ln_term += ln_mu - (m + 1.0).ln();
        m += 1.0;
    }
    (total * (1.0 + 1e-12)).min(1.0)
}

/// `ln(n!)` by direct summation.
fn ln_gamma_int(n: u64) -> f64 {
    (2..=n).map(|j| (j as f64).ln()).sum()
}

/// `Σ_m w(m) · rel(m)`, where `rel(m)` bounds the relative error of the
/// computed weight `w(m)`: `exp` of an argument with absolute error
/// `ε · Σ|terms|`, the log-factorial carrying `m` roundings.
fn weight_error(lambda: f64, weights: &[f64]) -> f64 {
    let lf = ln_factorials(weights.len() - 1);
    let ln_l = lambda.ln().abs();
    weights
        .iter()
        .enumerate()
        .map(|(m, w)| w * (m as f64 * ln_l + lambda + (m as f64 + 2.0) * lf[m] + 4.0) * f64::EPSILON)
        .sum()
}

struct RealMeasure {
    weights: Vec<f64>,
    total: f64,
}

impl RealMeasure {
    fn new(weights: Vec<f64>) -> Self {
        let total = weights.iter().sum();
        Self { weights, total }
    }
}

impl Measure for RealMeasure {
    type W = f64;

    fn zero(&self) -> f64 {
        0.0
    }

    fn one(&self) -> f64 {
        1.0
    }

    fn max_children(&self) -> u32 {
        (self.weights.len() - 1) as u32
    }

    fn add(&self, acc: &mut f64, x: &f64) {
        *acc += x;
    }

    fn add_child(&self, acc: &mut f64, src: &f64, m: u32) {
        *acc += src * self.weights[m as usize];
    }

    fn extend_free(&self, x: &f64, nodes: usize) -> f64 {
        x * self.total.powi(nodes as i32)
    }
}

struct ComplexMeasure {
    weights: Vec<Complex64>,
    total: Complex64,
}

impl Measure for ComplexMeasure {
    type W = Complex64;

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn max_children(&self) -> u32 {
        (self.weights.len() - 1) as u32
    }

    fn add(&self, acc: &mut Complex64, x: &Complex64) {
        *acc += x;
    }

    fn add_child(&self, acc: &mut Complex64, src: &Complex64, m: u32) {
        *acc += src * self.weights[m as usize];
    }

    fn extend_free(&self, x: &Complex64, nodes: usize) -> Complex64 {
        x * self.total.powi(nodes as i32)
    }
}

fn check_cap(cap: u32) -> Result<()> {
    if cap == 0 {
        return Err(Error::InvalidArgument("per-node cap must be >= 1".into()));
    }
    Ok(())
}

/// Rigorous enclosure of `P_λ(p)`, summing exactly over child counts
/// `0..=cap` at each of the `k` positions.
pub fn exact_prob(p: &TautProperty, lambda: f64, cap: u32) -> Result<ProbInterval> {
    check_lambda(lambda)?;
    check_cap(cap)?;
    let k = p.k();
    let weights = poisson_weights(lambda, cap);
    // every path's error is the sum of its per-node weight errors; summed
    // over all of N^k this is k · W^{k-1} · Σ_m w(m) rel(m)
    let weight_err = k as f64
        * RealMeasure::new(weights.clone()).total.max(1.0).powi(k as i32 - 1)
        * weight_error(lambda, &weights);
    let measure = RealMeasure::new(weights);
    let out = dp::explore(p.automaton(), k, &measure);
    debug_assert!(out.holds + out.fails + out.open <= 1.0 + 1e-9);

    let tail_mass = (k as f64 * poisson_tail(lambda, cap)).min(1.0);
    let products = (out.chain as f64 + 2.0 * k as f64) * f64::EPSILON * (out.holds + out.open);
    let rounding = 1.1 * (products + weight_err) + f64::MIN_POSITIVE;
    let lower = (out.holds - rounding).max(0.0);
    let upper = (out.holds + out.open + tail_mass + rounding).min(1.0);
    Ok(ProbInterval {
        lower,
        upper,
        tail_mass,
        rounding,
        precision: if tail_mass > 0.5 {
            Precision::CapTooSmall
        } else {
            Precision::Ok
        },
    })
}

/// `Σ_{x ∈ B} Π e^{-λ} (λ t)^{x_i} / x_i! = Σ_ℓ t^ℓ P_λ(x ∈ B, Σx = ℓ)`,
/// summed over the capped box (a lower bound of the full sum).
pub fn degree_weighted_mass(p: &TautProperty, lambda: f64, tilt: f64, cap: u32) -> Result<f64> {
    check_lambda(lambda)?;
    check_cap(cap)?;
    let lf = ln_factorials(cap as usize);
    let ln_lt = (lambda * tilt).ln();
    let weights = (0..=cap as usize)
        .map(|m| (m as f64 * ln_lt - lambda - lf[m]).exp())
        .collect();
    let out = dp::explore(p.automaton(), p.k(), &RealMeasure::new(weights));
    Ok(out.holds)
}

/// `Σ_{x ∈ B} Π e^{-z} z^{x_i} / x_i!` evaluated directly in the product
/// form over the capped box, with a bound on the omitted terms.
pub fn eval_direct(p: &TautProperty, z: Complex64, cap: u32) -> Result<SeriesValue> {
    check_cap(cap)?;
    let lf = ln_factorials(cap as usize);
    let e = (-z).exp();
    let mut weights = Vec::with_capacity(cap as usize + 1);
    let mut power = Complex64::new(1.0, 0.0);
    for (m, &lfm) in lf.iter().enumerate() {
        if m > 0 {
            power *= z;
        }
        weights.push(e * power * (-lfm).exp());
    }
    let total = weights.iter().sum();
    let measure = ComplexMeasure { weights, total };
    let out = dp::explore(p.automaton(), p.k(), &measure);

    // |Σ over the complement of the box| <= Σ_{x outside} Π |w(x_i)|
    //   <= k · (Σ_m |w(m)|)^{k-1} · Σ_{m > cap} |w(m)|
    let r = z.norm();
    let abs_total = (-z.re).exp() * r.exp();
    let abs_tail = if r == 0.0 {
        0.0
    } else {
        (-z.re + r).exp() * poisson_tail(r, cap)
    };
    let k = p.k() as f64;
    let remainder = k * abs_total.powf(k - 1.0) * abs_tail;
    Ok(SeriesValue {
        value: out.holds,
        remainder,
    })
}
