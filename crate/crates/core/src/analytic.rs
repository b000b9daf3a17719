//! Closed-form reference values: the principal Lambert W branch, the
//! survival probability of the Poisson tree, and `P(X_1 = 1)`.

use std::f64::consts::E;

use crate::error::{Error, Result};

const INV_E: f64 = 1.0 / E;

/// Principal branch `W_0(x)`: the solution of `w e^w = x` with `w >= -1`.
///
/// Halley iteration from a branch-point series near `-1/e`, a rational
/// guess around the origin and `ln x - ln ln x` for large arguments.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() || x < -INV_E {
        return Err(Error::LambertDomain(x));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }

    // p = sqrt(2(ex + 1)), with ex + 1 split to keep the digits of x + 1/e
    let q = (x + INV_E) - 1.2428753672788363e-17;
    let p = (2.0 * E * q.max(0.0)).sqrt();
    if p < 1e-3 {
        // series about the branch point: error O(p^4)
        return Ok(-1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p);
    }

    let mut w = if x < -0.25 {
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        // Padé-style guess accurate near the origin
        x * (1.0 + 4.0 / 3.0 * x) / (1.0 + 7.0 / 3.0 * x + 5.0 / 6.0 * x * x)
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };

    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        let next = w - step;
        if !next.is_finite() {
            break;
        }
        w = next.max(-1.0);
        if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(1e-300) {
            break;
        }
    }
    Ok(w)
}

/// Both routes to the survival probability `s(λ) = P(|T| = ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalResult {
    pub lambda: f64,
    /// Root of `s = 1 - e^{-λs}` selected by bracketing (0 for `λ <= 1`).
    pub s_fixed_point: f64,
    /// `1 + W_0(-λe^{-λ})/λ`.
    pub s_lambert: f64,
    /// `|s - 1 + e^{-λs}|` at the fixed-point value.
    pub residual: f64,
}

impl SurvivalResult {
    /// The reported survival probability.
    pub fn value(&self) -> f64 {
        self.s_fixed_point
    }
}

/// `s - 1 + e^{-λs}` without cancellation near `s = 0`.
fn survival_gap(lambda: f64, s: f64) -> f64 {
    s + (-lambda * s).exp_m1()
}

fn fixed_point_survival(lambda: f64) -> f64 {
    if lambda <= 1.0 {
        return 0.0;
    }
    // gap < 0 just above 0 and gap(1) = e^{-λ} > 0
    let (mut lo, mut hi) = (f64::MIN_POSITIVE, 1.0f64);
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        if survival_gap(lambda, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut s = 0.5 * (lo + hi);
    // Newton polish, skipped near the double root at λ = 1
    if lambda > 1.05 {
        for _ in 0..4 {
            let g = survival_gap(lambda, s);
            let dg = 1.0 - lambda * (-lambda * s).exp();
            let next = s - g / dg;
            if !(lo * 0.5..=hi * 2.0).contains(&next) || survival_gap(lambda, next).abs() > g.abs() {
                break;
            }
            s = next;
        }
    }
    s
}

pub(crate) fn check_positive(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidLambda(lambda))
    }
}

pub fn survival_prob(lambda: f64) -> Result<SurvivalResult> {
    check_positive(lambda)?;
    let s_fixed_point = fixed_point_survival(lambda);
    // -λe^{-λ} >= -1/e; rounding may push it a hair below
    let x = (-lambda * (-lambda).exp()).max(-INV_E);
    let s_lambert = 1.0 + lambert_w0(x)? / lambda;
    Ok(SurvivalResult {
        lambda,
        s_fixed_point,
        s_lambert,
        residual: survival_gap(lambda, s_fixed_point).abs(),
    })
}

/// `P(X_1 = 1) = λe^{-λ}`.
pub fn one_child_prob(lambda: f64) -> f64 {
    lambda * (-lambda).exp()
}

/// `P(extinct by generation g)`: `g` iterates of `φ(s) = e^{λ(s-1)}` from 0.
pub fn extinction_by_generation(lambda: f64, generations: usize) -> f64 {
    (0..generations).fold(0.0, |s, _| (lambda * (s - 1.0)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_error(x: f64) -> f64 {
        let w = lambert_w0(x).unwrap();
        (w * w.exp() - x).abs() / x.abs().max(1.0)
    }

    #[test]
    fn lambert_special_values() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert!((lambert_w0(E).unwrap() - 1.0).abs() < 1e-15);
        assert!((lambert_w0(-INV_E).unwrap() + 1.0).abs() < 1e-7);
        assert!(matches!(lambert_w0(-0.5), Err(Error::LambertDomain(_))));
        assert!(lambert_w0(f64::NAN).is_err());
    }

    #[test]
    fn lambert_identity_on_log_grid() {
        // negative side: x = -1/e + 10^t
        for i in 0..=200 {
            let t = -9.0 + (INV_E.log10() + 9.0) * i as f64 / 200.0;
            let x = -INV_E + 10f64.powf(t);
            if x < 0.0 {
                assert!(identity_error(x) <= 1e-14, "x = {x}: {}", identity_error(x));
            }
        }
        for i in 0..=400 {
            let x = 10f64.powf(-12.0 + 18.0 * i as f64 / 400.0);
            assert!(identity_error(x) <= 1e-14, "x = {x}: {}", identity_error(x));
        }
    }

    #[test]
    fn survival_examples() {
        let r = survival_prob(0.7).unwrap();
        assert_eq!(r.s_fixed_point, 0.0);
        assert!(r.s_lambert.abs() < 1e-12);

        // bisection oracle on s - 1 + e^{-2s} over [0.5, 1]
        let (mut lo, mut hi) = (0.5f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid - 1.0 + (-2.0 * mid).exp() < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = survival_prob(2.0).unwrap();
        assert!((r.value() - lo).abs() < 1e-12);
        assert!((r.value() - 0.7968).abs() < 5e-5);

        let s = |l: f64| survival_prob(l).unwrap().value();
        assert!(s(5.0) > s(2.0) && s(2.0) > s(1.1));
        assert_eq!(s(1.0), 0.0);
        assert!(survival_prob(0.0).is_err());
    }

    #[test]
    fn extinction_iterates_converge() {
        let s = survival_prob(2.0).unwrap().value();
        assert!((extinction_by_generation(2.0, 30) - (1.0 - s)).abs() < 1e-6);
        let mut prev = 0.0;
        for g in 1..10 {
            let q = extinction_by_generation(2.0, g);
            assert!(q > prev);
            prev = q;
        }
    }

    #[test]
    fn one_child_shape() {
        assert!((one_child_prob(1.0) - 0.36787944117144233).abs() < 1e-16);
        assert!(one_child_prob(1e-12) < 1e-11);
        assert!(one_child_prob(1.0) >= one_child_prob(0.9));
        assert!(one_child_prob(1.0) >= one_child_prob(1.1));
    }
}
