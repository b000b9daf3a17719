//! Power-series form `P_λ(B) = e^{-kλ} Σ_n a_n λ^n / n!` with
//! `a_n = Σ_{x ∈ B, Σx = n} multinomial(n; x)`.
//!
//! Coefficients are integers. They are computed in `u128` whenever
//! `k^nmax` fits, and in `f64` otherwise.

use num_complex::Complex64;

use super::dp::{self, Measure};
use super::ln_factorials;
use crate::error::{Error, Result};
use crate::property::TautProperty;

/// Coefficient arithmetic for the exponential-generating-function DP.
trait Coef: Copy {
    const ZERO: Self;
    const ONE: Self;
    fn add(self, other: Self) -> Self;
    fn mul(self, other: Self) -> Self;
    fn is_zero(self) -> bool;
}

impl Coef for u128 {
    const ZERO: Self = 0;
    const ONE: Self = 1;
    fn add(self, other: Self) -> Self {
        self.checked_add(other).expect("coefficient exceeds k^n bound")
    }
    fn mul(self, other: Self) -> Self {
        self.checked_mul(other).expect("coefficient exceeds k^n bound")
    }
    fn is_zero(self) -> bool {
        self == 0
    }
}

impl Coef for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn mul(self, other: Self) -> Self {
        self * other
    }
    fn is_zero(self) -> bool {
        self == 0.0
    }
}

/// Weight `x^m / m!` per node, carried as a truncated EGF: entry `n` of a
/// weight vector is the partial `a_n`. Adding a node with `m` children maps
/// `a_n` to `a_{n+m}` times `C(n+m, m)`.
struct EgfMeasure<T> {
    nmax: usize,
    binom: Vec<Vec<T>>,
}

impl<T: Coef> EgfMeasure<T> {
    fn new(nmax: usize) -> Self {
        let mut binom: Vec<Vec<T>> = Vec::with_capacity(nmax + 1);
        for n in 0..=nmax {
            let mut row = vec![T::ONE; n + 1];
            for m in 1..n {
                row[m] = binom[n - 1][m - 1].add(binom[n - 1][m]);
            }
            binom.push(row);
        }
        Self { nmax, binom }
    }
}

impl<T: Coef> Measure for EgfMeasure<T> {
    type W = Vec<T>;

    fn zero(&self) -> Vec<T> {
        vec![T::ZERO; self.nmax + 1]
    }

    fn one(&self) -> Vec<T> {
        let mut v = self.zero();
        v[0] = T::ONE;
        v
    }

    fn max_children(&self) -> u32 {
        self.nmax as u32
    }

    fn add(&self, acc: &mut Vec<T>, x: &Vec<T>) {
        for (a, &b) in acc.iter_mut().zip(x) {
            *a = a.add(b);
        }
    }

    fn add_child(&self, acc: &mut Vec<T>, src: &Vec<T>, m: u32) {
        let m = m as usize;
        for n in 0..=self.nmax - m {
            let s = src[n];
            if !s.is_zero() {
                acc[n + m] = acc[n + m].add(s.mul(self.binom[n + m][m]));
            }
        }
    }

    fn extend_free(&self, x: &Vec<T>, nodes: usize) -> Vec<T> {
        if nodes == 0 {
            return x.clone();
        }
        // EGF of e^{nodes · t}: coefficients nodes^n
        let j = {
            let mut v = T::ZERO;
            for _ in 0..nodes {
                v = v.add(T::ONE);
            }
            v
        };
        let mut powers = Vec::with_capacity(self.nmax + 1);
        let mut p = T::ONE;
        for n in 0..=self.nmax {
            if n > 0 {
                p = p.mul(j);
            }
            powers.push(p);
        }
        let mut out = self.zero();
        for (n, o) in out.iter_mut().enumerate() {
            let mut acc = T::ZERO;
            for m in 0..=n {
                acc = acc.add(self.binom[n][m].mul(x[n - m]).mul(powers[m]));
            }
            *o = acc;
        }
        out
    }
}

/// Coefficients `a_0..=a_nmax` of a `k`-determined event.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoeffs {
    k: usize,
    a: Vec<f64>,
    exact: Option<Vec<u128>>,
}

impl SeriesCoeffs {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn nmax(&self) -> usize {
        self.a.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.a
    }

    pub fn coefficient(&self, n: usize) -> f64 {
        self.a[n]
    }

    /// Integer coefficients, when they were computed exactly.
    pub fn exact(&self) -> Option<&[u128]> {
        self.exact.as_deref()
    }

    /// First `n` with `a_n > k^n`. Exact for integer coefficients; for
    /// floating coefficients a relative rounding allowance of
    /// `(4n + 16)ε` applies.
    pub fn bound_violation(&self) -> Option<usize> {
        match &self.exact {
            Some(exact) => exact.iter().enumerate().find_map(|(n, &a)| {
                let bound = (self.k as u128).checked_pow(n as u32);
                matches!(bound, Some(b) if a > b).then_some(n)
            }),
            None => self.a.iter().enumerate().find_map(|(n, &a)| {
                let bound = (self.k as f64).powi(n as i32);
                let slack = 1.0 + (4.0 * n as f64 + 16.0) * f64::EPSILON;
                (a < 0.0 || a > bound * slack).then_some(n)
            }),
        }
    }
}

/// `f(z)` with a bound on the omitted tail of the series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub remainder: f64,
}

fn exact_fits(k: usize, nmax: usize) -> bool {
    nmax <= 126 && (k <= 1 || nmax as f64 * (k as f64).log2() < 127.0)
}

/// Series coefficients of `p` up to degree `nmax`.
pub fn series_coeffs(p: &TautProperty, nmax: usize) -> Result<SeriesCoeffs> {
    let k = p.k();
    if nmax as f64 * (k as f64).ln() > 700.0 {
        return Err(Error::CoefficientOverflow { k, nmax });
    }
    if exact_fits(k, nmax) {
        let out = dp::explore(p.automaton(), k, &EgfMeasure::<u128>::new(nmax));
        let a = out.holds.iter().map(|&v| v as f64).collect();
        Ok(SeriesCoeffs {
            k,
            a,
            exact: Some(out.holds),
        })
    } else {
        let out = dp::explore(p.automaton(), k, &EgfMeasure::<f64>::new(nmax));
        Ok(SeriesCoeffs {
            k,
            a: out.holds,
            exact: None,
        })
    }
}

/// `e^{-k Re z} Σ_{n > nmax} (k|z|)^n / n!`, which bounds the omitted part
/// of the series because `a_n <= k^n`.
pub fn remainder_bound(k: usize, z: Complex64, nmax: usize) -> f64 {
    let r = k as f64 * z.norm();
    if r == 0.0 {
        return 0.0;
    }
    let shift = -(k as f64) * z.re;
    let ln_r = r.ln();
    let mut n = nmax as f64 + 1.0;
    let mut ln_term = n * ln_r - ln_factorials(nmax + 1)[nmax + 1] + shift;
    let mut total = 0.0;
    loop {
        // terms after this one shrink at least geometrically by `ratio`
        let ratio = r / (n + 1.0);
        let term = ln_term.exp();
        if ratio < 1.0 && term * ratio <= 1e-6 * (1.0 - ratio) * (total + term) {
            total += term / (1.0 - ratio);
            break;
        }
        total += term;
        ln_term += ln_r - (n + 1.0).ln();
        n += 1.0;
    }
    total * (1.0 + 1e-12)
}

/// Smallest degree whose remainder bound is at most `tol` everywhere on the
/// closed disc of radius `radius` around `center` (real).
pub fn series_nmax_for(k: usize, center: f64, radius: f64, tol: f64) -> usize {
    // the bound grows with |z| and shrinks with Re z; take both extremes at once
    let far = center + radius;
    let widen = (k as f64 * (far - (center - radius))).exp();
    let worst = |n: usize| remainder_bound(k, Complex64::new(far, 0.0), n) * widen;
    let mut n = (k as f64 * far).ceil() as usize;
    while worst(n) > tol {
        n += 1;
    }
    n
}

/// `e^{-kz} Σ_{n <= nmax} a_n z^n / n!` and its remainder bound.
pub fn eval_series(c: &SeriesCoeffs, z: Complex64) -> SeriesValue {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for (n, &a) in c.a.iter().enumerate() {
        if n > 0 {
            term = term * z / n as f64;
        }
        if a != 0.0 {
            sum += term * a;
        }
    }
    SeriesValue {
        value: sum * (-(c.k as f64) * z).exp(),
        remainder: remainder_bound(c.k, z, c.nmax()),
    }
}
