use std::collections::BTreeMap;

use crate::property::{Automaton, LevelNeed, State, Verdict};
use crate::seed::{Explorer, Status};

/// Per-node weights `w(m)` attached to a child count `m`, and the algebra
/// they live in. The engine computes `Σ_{x ∈ B} Π_i w(x_i)` over the capped
/// box `x_i <= max_children()`.
pub(crate) trait Measure {
    type W: Clone;

    fn zero(&self) -> Self::W;
    fn one(&self) -> Self::W;
    fn max_children(&self) -> u32;
    fn add(&self, acc: &mut Self::W, x: &Self::W);
    /// `acc += src * w(m)`
    fn add_child(&self, acc: &mut Self::W, src: &Self::W, m: u32);
    /// `x * (Σ_m w(m))^nodes`
    fn extend_free(&self, x: &Self::W, nodes: usize) -> Self::W;
}

pub(crate) struct Outcome<W> {
    pub holds: W,
    pub fails: W,
    /// Mass classified `Undetermined` at the horizon.
    pub open: W,
    /// Sum over layers of the largest number of contributions merged into a
    /// single bucket; bounds the depth of every floating-point sum.
    pub chain: usize,
}

type Key = (Explorer, State);

struct Bucket<W> {
    weight: W,
    fan_in: usize,
}

struct Settled<W> {
    // indexed by the number of nodes still to come
    holds: Vec<Option<Bucket<W>>>,
    fails: Vec<Option<Bucket<W>>>,
}

impl<W: Clone> Settled<W> {
    fn push<M: Measure<W = W>>(&mut self, m: &M, verdict: bool, remaining: usize, w: W) {
        let slot = if verdict {
            &mut self.holds[remaining]
        } else {
            &mut self.fails[remaining]
        };
        match slot {
            Some(b) => {
                m.add(&mut b.weight, &w);
                b.fan_in += 1;
            }
            None => *slot = Some(Bucket { weight: w, fan_in: 1 }),
        }
    }

    fn max_fan_in(&self) -> usize {
        self.holds
            .iter()
            .chain(&self.fails)
            .flatten()
            .map(|b| b.fan_in)
            .max()
            .unwrap_or(0)
    }

    fn finish<M: Measure<W = W>>(self, m: &M) -> (W, W) {
        let collapse = |buckets: Vec<Option<Bucket<W>>>| {
            let mut total = m.zero();
            for (remaining, b) in buckets.into_iter().enumerate() {
                if let Some(b) = b {
                    m.add(&mut total, &m.extend_free(&b.weight, remaining));
                }
            }
            total
        };
        (collapse(self.holds), collapse(self.fails))
    }
}

fn reduce_level(need: LevelNeed, level: u32) -> u32 {
    match need {
        LevelNeed::None => 0,
        LevelNeed::Parity => level % 2,
        LevelNeed::Full => level,
    }
}

/// Layered dynamic programme over breadth-first positions `1..=k`.
///
/// Layer `i` holds the exploration state before node `i` (labels handed
/// out, end of the current level, the level itself reduced to what the
/// automaton reads) together with the automaton state. Label counts are
/// saturated at `k + 1`: beyond that the first `k` nodes can neither
/// complete the tree nor start a new level. Paths whose verdict is fixed
/// (complete trees, settled automata) leave the layers and are multiplied
/// by the free mass of the remaining positions.
pub(crate) fn explore<M: Measure>(auto: &dyn Automaton, k: usize, measure: &M) -> Outcome<M::W> {
    let need = auto.level_need();
    let limit = k + 1;
    let mut settled = Settled {
        holds: (0..=k).map(|_| None).collect(),
        fails: (0..=k).map(|_| None).collect(),
    };
    let mut chain = 0usize;

    let start = auto.initial();
    let mut layer: BTreeMap<Key, Bucket<M::W>> = BTreeMap::new();
    match auto.settled(start) {
        Some(v) => settled.push(measure, v, k, measure.one()),
        None => {
            layer.insert(
                (Explorer::new(), start),
                Bucket {
                    weight: measure.one(),
                    fan_in: 1,
                },
            );
        }
    }

    for i in 1..=k {
        let remaining = k - i;
        let mut next: BTreeMap<Key, Bucket<M::W>> = BTreeMap::new();
        for ((explorer, state), bucket) in &layer {
            for m in 0..=measure.max_children() {
                let mut ex = *explorer;
                let mut node = ex.visit(m);
                node.level = reduce_level(need, node.level);
                ex.map_level(|l| reduce_level(need, l));
                ex.saturate(limit);
                node.generated = node.generated.min(limit);
                let s = auto.step(*state, &node);

                let verdict = if ex.is_complete() {
                    match auto.classify(s, Status::Complete(ex.generated())) {
                        Verdict::True => Some(true),
                        _ => Some(false),
                    }
                } else {
                    auto.settled(s)
                };
                match verdict {
                    Some(v) => {
                        let mut w = measure.zero();
                        measure.add_child(&mut w, &bucket.weight, m);
                        settled.push(measure, v, remaining, w);
                    }
                    None => match next.get_mut(&(ex, s)) {
                        Some(b) => {
                            measure.add_child(&mut b.weight, &bucket.weight, m);
                            b.fan_in += 1;
                        }
                        None => {
                            let mut w = measure.zero();
                            measure.add_child(&mut w, &bucket.weight, m);
                            next.insert((ex, s), Bucket { weight: w, fan_in: 1 });
                        }
                    },
                }
            }
        }
        let layer_fan_in = next.values().map(|b| b.fan_in).max().unwrap_or(0);
        chain += layer_fan_in.max(settled.max_fan_in()) + 2;
        layer = next;
    }

    let mut open = measure.zero();
    for ((explorer, state), bucket) in layer {
        match auto.classify(state, explorer.status()) {
            Verdict::True => settled.push(measure, true, 0, bucket.weight),
            Verdict::False => settled.push(measure, false, 0, bucket.weight),
            Verdict::Undetermined => measure.add(&mut open, &bucket.weight),
        }
    }
    chain += settled.max_fan_in() + k + 2;
    let (holds, fails) = settled.finish(measure);
    Outcome {
        holds,
        fails,
        open,
        chain,
    }
}
