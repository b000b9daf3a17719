//! Monte Carlo estimates on sampled seeds.
//!
//! Samples are split into fixed batches of [`BATCH_SIZE`]; batch `b` draws
//! from ChaCha8 stream `b` of the master seed. Batches are tallied in
//! integers and summed, so a result depends only on the seed and the
//! parameters, never on how many workers ran it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::check_lambda;
use crate::fit::DecayFit;
use crate::property::{truncate, truncated_verdict, Property, TautProperty, Truncation, Verdict};
use crate::seed::{Explorer, SeedPrefix, Status};

pub const BATCH_SIZE: u64 = 4096;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959963984540054;

/// How batches are scheduled. `Parallel` falls back to sequential when the
/// crate is built without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// RNG for batch `stream` of master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Poisson(λ) draws: inversion on a cached CDF for `λ < 10`,
/// `rand_distr`'s rejection sampler above.
#[derive(Debug, Clone)]
pub enum PoissonSampler {
    Inversion { cdf: Vec<f64>, lambda: f64 },
    Rejection(Poisson<f64>),
}

impl PoissonSampler {
    pub fn new(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        if lambda < 10.0 {
            let mut cdf = Vec::new();
            let mut pmf = (-lambda).exp();
            let mut acc = 0.0;
            let mut m = 0u32;
            while acc < 1.0 - 1e-15 && m < 200 {
                acc += pmf;
                cdf.push(acc);
                m += 1;
                pmf *= lambda / m as f64;
            }
            Ok(PoissonSampler::Inversion { cdf, lambda })
        } else {
            Poisson::new(lambda)
                .map(PoissonSampler::Rejection)
                .map_err(|_| Error::InvalidLambda(lambda))
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        match self {
            PoissonSampler::Inversion { cdf, lambda } => {
                let u: f64 = rng.random();
                if let Some(m) = cdf.iter().position(|&c| u < c) {
                    return m as u32;
                }
                // beyond the table: keep walking the pmf
                let mut m = cdf.len() as u32 - 1;
                let mut acc = *cdf.last().unwrap();
                let mut pmf = (m as f64 * lambda.ln() - lambda - ln_factorial(m)).exp();
                while u >= acc && pmf > 0.0 {
                    m += 1;
                    pmf *= lambda / m as f64;
                    acc += pmf;
                }
                m
            }
            PoissonSampler::Rejection(p) => p.sample(rng) as u32,
        }
    }
}

fn ln_factorial(m: u32) -> f64 {
    (2..=m).map(|j| (j as f64).ln()).sum()
}

/// `k` i.i.d. Poisson(λ) counts.
pub fn sample_seed<R: Rng + ?Sized>(lambda: f64, k: usize, rng: &mut R) -> Result<SeedPrefix> {
    if k == 0 {
        return Err(Error::EmptySeed);
    }
    let sampler = PoissonSampler::new(lambda)?;
    SeedPrefix::new((0..k).map(|_| sampler.draw(rng)).collect())
}

/// Runs `per_sample` on `n_samples` draws and sums its `width` counters.
pub fn tally<F>(n_samples: u64, seed: u64, width: usize, exec: Execution, per_sample: F) -> Vec<u64>
where
    F: Fn(&mut ChaCha8Rng, &mut [u64]) + Sync,
{
    let batches = n_samples.div_ceil(BATCH_SIZE);
    let run_batch = |b: u64| {
        let mut rng = stream_rng(seed, b);
        let mut counts = vec![0u64; width];
        let end = ((b + 1) * BATCH_SIZE).min(n_samples);
        for _ in b * BATCH_SIZE..end {
            per_sample(&mut rng, &mut counts);
        }
        counts
    };
    let add = |mut a: Vec<u64>, b: Vec<u64>| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    };
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..batches)
            .into_par_iter()
            .map(run_batch)
            .reduce(|| vec![0u64; width], add),
        _ => (0..batches).map(run_batch).fold(vec![0u64; width], add),
    }
}

/// A proportion with its 95% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub p_hat: f64,
    pub successes: u64,
    pub n_samples: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub rng_seed: u64,
}

impl MCEstimate {
    pub fn from_counts(successes: u64, n_samples: u64, rng_seed: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, n_samples);
        let p_hat = successes as f64 / n_samples as f64;
        Self {
            p_hat,
            successes,
            n_samples,
            ci_low: ci_low.min(p_hat),
            ci_high: ci_high.max(p_hat),
            rng_seed,
        }
    }

    /// Binomial standard error at `p_hat`.
    pub fn std_error(&self) -> f64 {
        (self.p_hat * (1.0 - self.p_hat) / self.n_samples as f64).sqrt()
    }
}

/// 95% Wilson score interval for `successes` out of `n`.
pub fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if successes as f64 == n { 1.0 } else { (center + half).min(1.0) };
    (low, high)
}

fn check_samples(n_samples: u64) -> Result<()> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    Ok(())
}

/// Draws counts on demand and stops once `p` is decided.
fn sample_verdict<R: Rng>(p: &TautProperty, sampler: &PoissonSampler, rng: &mut R) -> Verdict {
    let auto = p.automaton();
    let mut explorer = Explorer::new();
    let mut state = auto.initial();
    for _ in 0..p.k() {
        if explorer.is_complete() {
            break;
        }
        let node = explorer.visit(sampler.draw(rng));
        state = auto.step(state, &node);
        if let Some(v) = auto.settled(state) {
            return Verdict::from_bool(v);
        }
    }
    auto.classify(state, explorer.status())
}

/// Fraction of sampled seeds on which `p` holds.
pub fn estimate_prob(p: &TautProperty, lambda: f64, n_samples: u64, rng_seed: u64, exec: Execution) -> Result<MCEstimate> {
    check_samples(n_samples)?;
    let sampler = PoissonSampler::new(lambda)?;
    let counts = tally(n_samples, rng_seed, 1, exec, |rng, c| {
        if sample_verdict(p, &sampler, rng).is_true() {
            c[0] += 1;
        }
    });
    Ok(MCEstimate::from_counts(counts[0], n_samples, rng_seed))
}

/// Estimated `P(A_k △ A_{K*})` per `k`, with the `K*` verdict standing in
/// for `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymDiffDecay {
    pub rows: Vec<(usize, MCEstimate)>,
    pub horizon: usize,
    /// Estimate of `P(A_{K*})`.
    pub horizon_mass: MCEstimate,
    pub fit: Result<DecayFit>,
}

impl SymDiffDecay {
    /// Extrapolated `C e^{-c K*}`: the scale of the bias from using the
    /// horizon verdict as ground truth.
    pub fn horizon_bias(&self) -> Option<f64> {
        self.fit
            .as_ref()
            .ok()
            .map(|f| f.big_c_hat * (-f.c_hat * self.horizon as f64).exp())
    }
}

/// First checkpoint (index into `checkpoints`) at which the truncated
/// verdict is true, or `checkpoints.len()`. Truncated verdicts are monotone
/// in the horizon for both truncation modes.
fn first_true_checkpoint<R: Rng>(
    base: &Property,
    mode: Truncation,
    checkpoints: &[usize],
    sampler: &PoissonSampler,
    rng: &mut R,
) -> usize {
    let auto = base.automaton();
    let mut explorer = Explorer::new();
    let mut state = auto.initial();
    let mut next = 0;
    while next < checkpoints.len() {
        let c = checkpoints[next];
        if explorer.is_complete() {
            let status = explorer.status();
            let base_verdict = auto.classify(state, status);
            return checkpoints[next..]
                .iter()
                .position(|&k| truncated_verdict(mode, base_verdict, status, k))
                .map_or(checkpoints.len(), |p| next + p);
        }
        if explorer.explored() == c {
            let status = Status::Incomplete { explored: c };
            if truncated_verdict(mode, auto.classify(state, status), status, c) {
                return next;
            }
            next += 1;
            continue;
        }
        let node = explorer.visit(sampler.draw(rng));
        state = auto.step(state, &node);
        if mode == Truncation::Witness {
            match auto.settled(state) {
                Some(true) => return next,
                Some(false) => return checkpoints.len(),
                None => {}
            }
        }
    }
    checkpoints.len()
}

/// Decay of `P(A_k △ A_{K*})` for the `mode` truncations of `base`.
#[allow(clippy::too_many_arguments)]
pub fn sym_diff_decay(
    base: &Property,
    mode: Truncation,
    lambda: f64,
    ks: &[usize],
    horizon: usize,
    n_samples: u64,
    rng_seed: u64,
    exec: Execution,
) -> Result<SymDiffDecay> {
    check_samples(n_samples)?;
    if ks.is_empty() || ks[0] == 0 || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("ks must be positive and strictly increasing".into()));
    }
    if horizon < *ks.last().unwrap() {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} is below the largest k {}",
            ks.last().unwrap()
        )));
    }
    // same preconditions as the per-k truncations
    truncate(base, ks[0], mode)?;
    let sampler = PoissonSampler::new(lambda)?;
    let mut checkpoints = ks.to_vec();
    if horizon > *ks.last().unwrap() {
        checkpoints.push(horizon);
    }
    let last = checkpoints.len() - 1;

    // counter j < ks.len(): verdict differs at ks[j]; counter ks.len(): A_{K*}
    let counts = tally(n_samples, rng_seed, ks.len() + 1, exec, |rng, c| {
        let first = first_true_checkpoint(base, mode, &checkpoints, &sampler, rng);
        if first <= last {
            c[ks.len()] += 1;
            for slot in c.iter_mut().take(first.min(ks.len())) {
                *slot += 1;
            }
        }
    });

    let rows: Vec<(usize, MCEstimate)> = ks
        .iter()
        .zip(&counts)
        .map(|(&k, &n)| (k, MCEstimate::from_counts(n, n_samples, rng_seed)))
        .collect();
    let estimates: Vec<f64> = rows.iter().map(|r| r.1.p_hat).collect();
    Ok(SymDiffDecay {
        fit: DecayFit::fit(ks, &estimates),
        rows,
        horizon,
        horizon_mass: MCEstimate::from_counts(counts[ks.len()], n_samples, rng_seed),
    })
}

/// `P(|E_k| <= ⌊k/(2λ+1)⌋, |T| >= k)` alongside `P(|T| >= k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvenLevelTail {
    pub k: usize,
    pub threshold: usize,
    pub tail: MCEstimate,
    pub reaches_k: MCEstimate,
}

pub fn even_level_tail(lambda: f64, k: usize, n_samples: u64, rng_seed: u64, exec: Execution) -> Result<EvenLevelTail> {
    check_samples(n_samples)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    let sampler = PoissonSampler::new(lambda)?;
    let threshold = (k as f64 / (2.0 * lambda + 1.0)).floor() as usize;
    let counts = tally(n_samples, rng_seed, 2, exec, |rng, c| {
        let mut explorer = Explorer::new();
        let mut even = 0usize;
        for i in 1..=k {
            if explorer.is_complete() {
                return;
            }
            if explorer.peek_level().is_multiple_of(2) {
                even += 1;
            }
            // node k exists; its own count is not needed
            if i < k {
                explorer.visit(sampler.draw(rng));
            }
        }
        c[1] += 1;
        if even <= threshold {
            c[0] += 1;
        }
    });
    Ok(EvenLevelTail {
        k,
        threshold,
        tail: MCEstimate::from_counts(counts[0], n_samples, rng_seed),
        reaches_k: MCEstimate::from_counts(counts[1], n_samples, rng_seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::property::{truncate_by_size, truncate_by_witness, LevelConvention, SizeRelation};

    #[test]
    fn seeds_are_reproducible() {
        let a = sample_seed(1.0, 50, &mut stream_rng(42, 0)).unwrap();
        let b = sample_seed(1.0, 50, &mut stream_rng(42, 0)).unwrap();
        assert_eq!(a, b);
        let c = sample_seed(1.0, 50, &mut stream_rng(42, 1)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sample_mean_and_zero_frequency() {
        let k = 100_000;
        let s = sample_seed(1.0, k, &mut stream_rng(1, 0)).unwrap();
        let mean = s.counts().iter().map(|&c| c as f64).sum::<f64>() / k as f64;
        assert!((mean - 1.0).abs() < 4.0 * (1.0 / k as f64).sqrt());

        let s = sample_seed(0.5, k, &mut stream_rng(2, 0)).unwrap();
        let zeros = s.counts().iter().filter(|&&c| c == 0).count() as u64;
        let (lo, hi) = wilson_interval(zeros, k as u64);
        // 99.9% slack around the 95% interval
        let p0 = (-0.5f64).exp();
        let pad = 1.0 * (hi - lo);
        assert!(lo - pad <= p0 && p0 <= hi + pad, "{lo} {hi}");
    }

    #[test]
    fn large_lambda_uses_rejection() {
        let sampler = PoissonSampler::new(25.0).unwrap();
        assert!(matches!(sampler, PoissonSampler::Rejection(_)));
        let mut rng = stream_rng(3, 0);
        let n = 50_000;
        let mean = (0..n).map(|_| sampler.draw(&mut rng) as f64).sum::<f64>() / n as f64;
        assert!((mean - 25.0).abs() < 4.0 * (25.0 / n as f64).sqrt());
    }

    #[test]
    fn wilson_properties() {
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson_interval(100, 100);
        assert!(lo > 0.95 && hi == 1.0);
        let e = MCEstimate::from_counts(37, 100, 0);
        assert!(e.ci_low <= e.p_hat && e.p_hat <= e.ci_high);
    }

    #[test]
    fn always_false_is_zero() {
        let p = TautProperty::constant(false, 5).unwrap();
        let e = estimate_prob(&p, 1.0, 10_000, 9, Execution::default()).unwrap();
        assert_eq!(e.p_hat, 0.0);
    }

    #[test]
    fn independent_of_execution_mode() {
        let p = truncate_by_witness(&Property::even_level_one_child(LevelConvention::RootZero), 20).unwrap();
        let a = estimate_prob(&p, 2.0, 20_000, 11, Execution::Sequential).unwrap();
        let b = estimate_prob(&p, 2.0, 20_000, 11, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn size_three_matches_closed_form() {
        let p = truncate_by_size(&Property::size(SizeRelation::Eq(3)), 4).unwrap();
        let e = estimate_prob(&p, 0.5, 200_000, 5, Execution::default()).unwrap();
        let exact = 1.5 * 0.25 * (-1.5f64).exp();
        let pad = 0.5 * (e.ci_high - e.ci_low);
        assert!(e.ci_low - pad <= exact && exact <= e.ci_high + pad);
    }

    #[test]
    fn horizon_row_is_zero() {
        let p = Property::even_level_one_child(LevelConvention::RootZero);
        let d = sym_diff_decay(&p, Truncation::Witness, 2.0, &[5, 10, 40], 40, 5_000, 3, Execution::default()).unwrap();
        assert_eq!(d.rows.last().unwrap().1.p_hat, 0.0);
        assert!(d.rows[0].1.p_hat >= d.rows[1].1.p_hat);
    }

    #[test]
    fn first_checkpoint_matches_per_k_evaluation() {
        // every truncated verdict recomputed from scratch on the same seed
        let base = Property::even_level_one_child(LevelConvention::RootZero)
            .or(&Property::level_two_children(crate::property::LevelSet::Prime, LevelConvention::RootZero));
        let size_base = Property::size(SizeRelation::Lt(6));
        let ks = [1, 2, 3, 5, 8, 13, 21];
        let sampler = PoissonSampler::new(1.2).unwrap();
        for s in 0..300 {
            for (prop, mode) in [(&base, Truncation::Witness), (&size_base, Truncation::Size)] {
                let mut rng = stream_rng(s, 7);
                let first = first_true_checkpoint(prop, mode, &ks, &sampler, &mut rng);
                let mut rng = stream_rng(s, 7);
                let seed = sample_seed(1.2, 21, &mut rng).unwrap();
                let expected = ks
                    .iter()
                    .position(|&k| {
                        truncate(prop, k, mode)
                            .unwrap()
                            .evaluate(&seed)
                            .is_true()
                    })
                    .unwrap_or(ks.len());
                assert_eq!(first, expected, "seed {seed}");
            }
        }
    }

    #[test]
    fn even_level_tail_at_one_is_zero() {
        let r = even_level_tail(1.0, 1, 10_000, 4, Execution::default()).unwrap();
        assert_eq!(r.threshold, 0);
        assert_eq!(r.tail.p_hat, 0.0);
        assert_eq!(r.reaches_k.p_hat, 1.0);
    }
}
