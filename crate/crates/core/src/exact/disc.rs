//! Complex-disc checks around a real `λ`.
//!
//! On `|z - λ| <= δ` with `δ = min(λε/2, ln((1+ε)/(1+ε/2)))` each factor
//! `|e^{-z} z^r / r!|` is compared against `(1+ε)^r e^{-λ} λ^r / r!`, so
//! `|f(z)|` can be checked against the degree-weighted mass
//! `Σ_ℓ (1+ε)^ℓ P_λ(B, Σx = ℓ)`.
//!
//! The per-factor comparison only holds for `r >= 1`: at `r = 0` the left
//! side is `e^{-Re z} <= e^{δ - λ}`, which exceeds `e^{-λ}`. The report
//! therefore also carries the bound `e^{kδ} Σ_ℓ (1 + δ/λ)^ℓ P_λ(B, ℓ)`,
//! which follows from `|z| <= λ + δ` and `Re z >= λ - δ` alone.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::series::{eval_series, series_coeffs, series_nmax_for};
use super::{check_lambda, default_cap, degree_weighted_mass, exact_prob, ProbInterval};
use crate::error::{Error, Result};
use crate::property::{combine, Combine, TautProperty};

/// Sample points on the disc boundary.
pub const DISC_SAMPLES: usize = 64;

const SERIES_TOL: f64 = 1e-15;

/// `δ = min(λε/2, ln((1+ε)/(1+ε/2)))`
pub fn disc_radius(lambda: f64, epsilon: f64) -> f64 {
    (lambda * epsilon / 2.0).min(((1.0 + epsilon) / (1.0 + epsilon / 2.0)).ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint {
    pub z: Complex64,
    pub value: Complex64,
    pub remainder: f64,
    /// `(|f(z)| + remainder) / bound`, 0 when `f` and the bound vanish.
    pub ratio: f64,
    /// `(|f(z)| + remainder) / rigorous_bound`
    pub rigorous_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscReport {
    pub lambda: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub nmax: usize,
    /// `Σ_ℓ (1+ε)^ℓ P_λ(B, ℓ)` over the capped box (a lower bound).
    pub bound: f64,
    /// `e^{kδ} Σ_ℓ (1+δ/λ)^ℓ P_λ(B, ℓ)` over the capped box.
    pub rigorous_bound: f64,
    pub points: Vec<DiscPoint>,
    pub max_ratio: f64,
    pub max_rigorous_ratio: f64,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")))
    }
}

fn circle(lambda: f64, delta: f64, samples: usize) -> impl Iterator<Item = Complex64> {
    (0..samples).map(move |j| {
        let theta = 2.0 * PI * j as f64 / samples as f64;
        Complex64::new(lambda, 0.0) + Complex64::from_polar(delta, theta)
    })
}

/// Samples `|f_p(z)|` on `|z - λ| = δ` and compares it with the
/// degree-weighted real mass.
pub fn disc_bound_check(p: &TautProperty, lambda: f64, epsilon: f64, samples: usize) -> Result<DiscReport> {
    check_lambda(lambda)?;
    check_epsilon(epsilon)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one disc sample".into()));
    }
    let k = p.k();
    let delta = disc_radius(lambda, epsilon);

    let tilt = 1.0 + epsilon;
    let bound = degree_weighted_mass(p, lambda, tilt, default_cap(lambda * tilt))?;
    let rtilt = 1.0 + delta / lambda;
    let rigorous_bound =
        (k as f64 * delta).exp() * degree_weighted_mass(p, lambda, rtilt, default_cap(lambda * rtilt))?;

    let nmax = series_nmax_for(k, lambda, delta, SERIES_TOL * bound.max(f64::MIN_POSITIVE));
    let coeffs = series_coeffs(p, nmax)?;

    let points: Vec<DiscPoint> = circle(lambda, delta, samples)
        .map(|z| {
            let v = eval_series(&coeffs, z);
            // an event without mass in the box has f = 0 and nothing to bound
            let lhs = if bound == 0.0 && v.value.norm() == 0.0 {
                0.0
            } else {
                v.value.norm() + v.remainder
            };
            DiscPoint {
                z,
                value: v.value,
                remainder: v.remainder,
                ratio: ratio(lhs, bound),
                rigorous_ratio: ratio(lhs, rigorous_bound),
            }
        })
        .collect();
    let max_ratio = points.iter().map(|pt| pt.ratio).fold(0.0, f64::max);
    let max_rigorous_ratio = points.iter().map(|pt| pt.rigorous_ratio).fold(0.0, f64::max);
    Ok(DiscReport {
        lambda,
        epsilon,
        delta,
        nmax,
        bound,
        rigorous_bound,
        points,
        max_ratio,
        max_rigorous_ratio,
    })
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexDecayRow {
    pub k: usize,
    /// `sup |f_{A_k \ A_{k-1}}(z)|` over the sampled circle.
    pub sup_abs: f64,
    /// Largest remainder bound among the sampled points.
    pub remainder: f64,
    /// Series value at `z = λ`.
    pub real_value: f64,
    /// Exact enclosure of `P_λ(A_k \ A_{k-1})`.
    pub exact: ProbInterval,
}

/// For each `k`, the sup over the disc boundary of the continuation of
/// `P(A_k \ A_{k-1})`, where `family(k)` yields `A_k` (and `A_0 = ∅`).
pub fn complex_decay<F>(family: F, lambda: f64, epsilon: f64, ks: &[usize]) -> Result<Vec<ComplexDecayRow>>
where
    F: Fn(usize) -> Result<TautProperty>,
{
    check_lambda(lambda)?;
    check_epsilon(epsilon)?;
    let delta = disc_radius(lambda, epsilon);
    ks.iter()
        .map(|&k| {
            let current = family(k)?;
            let diff = if k >= 2 {
                combine(Combine::Diff, &current, &family(k - 1)?)
            } else {
                current
            };
            let nmax = series_nmax_for(diff.k(), lambda, delta, SERIES_TOL);
            let coeffs = series_coeffs(&diff, nmax)?;
            let mut sup_abs = 0.0f64;
            let mut remainder = 0.0f64;
            for z in circle(lambda, delta, DISC_SAMPLES) {
                let v = eval_series(&coeffs, z);
                sup_abs = sup_abs.max(v.value.norm());
                remainder = remainder.max(v.remainder);
            }
            let real_value = eval_series(&coeffs, Complex64::new(lambda, 0.0)).value.re;
            let exact = exact_prob(&diff, lambda, default_cap(lambda))?;
            Ok(ComplexDecayRow {
                k,
                sup_abs,
                remainder,
                real_value,
                exact,
            })
        })
        .collect()
}
