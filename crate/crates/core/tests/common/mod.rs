//! Oracles shared by the integration tests. Everything here works from the
//! reconstructed tree or from explicit enumeration, never from the
//! automata under test.
#![allow(dead_code)]

use gwtree::property::{combine, parse_property, truncate, Combine, TautProperty, Truncation};
use gwtree::seed::{build_tree, SeedPrefix, Status, TreeView};

pub const SMALL_PRIMES: [u32; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Built-in properties, described independently of the automata.
#[derive(Debug, Clone)]
pub enum Base {
    Root1,
    Even1,
    /// A node on a prime level with two children.
    Prime2,
    /// A node on an odd level with two children.
    Odd2,
    SizeLt(usize),
    SizeEq(usize),
    SizeGe(usize),
    Or(Box<Base>, Box<Base>),
}

impl Base {
    pub fn spec(&self) -> String {
        match self {
            Base::Root1 => "root1".into(),
            Base::Even1 => "even1".into(),
            Base::Prime2 => "flevel2:prime".into(),
            Base::Odd2 => "flevel2:odd".into(),
            Base::SizeLt(n) => format!("size-lt:{n}"),
            Base::SizeEq(n) => format!("size-eq:{n}"),
            Base::SizeGe(n) => format!("size-ge:{n}"),
            Base::Or(a, b) => format!("{}+{}", a.spec(), b.spec()),
        }
    }

    fn has_witness(&self, tree: &TreeView) -> bool {
        match self {
            Base::Root1 => tree.children(1) == Some(1),
            Base::Even1 => tree.nodes().any(|(_, l, c)| l % 2 == 0 && c == 1),
            Base::Prime2 => tree.nodes().any(|(_, l, c)| SMALL_PRIMES.contains(&l) && c == 2),
            Base::Odd2 => tree.nodes().any(|(_, l, c)| l % 2 == 1 && c == 2),
            Base::SizeGe(m) => match tree.status() {
                Status::Complete(n) => n >= *m,
                Status::Incomplete { explored } => explored + 1 >= *m,
            },
            Base::SizeLt(_) | Base::SizeEq(_) => false,
            Base::Or(a, b) => a.has_witness(tree) || b.has_witness(tree),
        }
    }

    /// Truth on a complete tree.
    fn on_complete(&self, tree: &TreeView, n: usize) -> bool {
        match self {
            Base::SizeLt(m) => n < *m,
            Base::SizeEq(m) => n == *m,
            Base::SizeGe(m) => n >= *m,
            Base::Or(a, b) => a.on_complete(tree, n) || b.on_complete(tree, n),
            _ => self.has_witness(tree),
        }
    }

    /// Truth when the first `k` nodes exist and the tree is larger than `k`.
    fn on_large(&self, tree: &TreeView, k: usize) -> Option<bool> {
        match self {
            Base::Root1 => Some(tree.children(1) == Some(1)),
            Base::SizeLt(m) => (k + 1 >= *m).then_some(false),
            Base::SizeEq(m) => (k >= *m).then_some(false),
            Base::SizeGe(m) => (k + 1 >= *m).then_some(true),
            Base::Or(a, b) => Some(a.on_large(tree, k)? || b.on_large(tree, k)?),
            _ => None,
        }
    }

    pub fn is_monotone(&self) -> bool {
        match self {
            Base::SizeLt(_) | Base::SizeEq(_) => false,
            Base::Or(a, b) => a.is_monotone() && b.is_monotone(),
            _ => true,
        }
    }
}

/// A truncated or combined event together with its oracle.
#[derive(Debug, Clone)]
pub enum Event {
    Trunc(Base, Truncation, usize),
    Combine(Combine, Box<Event>, Box<Event>),
}

impl Event {
    pub fn k(&self) -> usize {
        match self {
            Event::Trunc(_, _, k) => *k,
            Event::Combine(_, a, b) => a.k().max(b.k()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Event::Trunc(b, mode, k) => format!("{mode:?}({},{k})", b.spec()),
            Event::Combine(op, a, b) => format!("{op:?}({},{})", a.label(), b.label()),
        }
    }

    pub fn build(&self) -> TautProperty {
        match self {
            Event::Trunc(b, mode, k) => {
                let prop = parse_property(&b.spec(), Default::default()).unwrap();
                truncate(&prop, *k, *mode).unwrap()
            }
            Event::Combine(op, a, b) => combine(*op, &a.build(), &b.build()),
        }
    }

    /// Membership of `counts` (at least `k` of them) in the event's set.
    pub fn oracle(&self, counts: &[u32]) -> bool {
        match self {
            Event::Trunc(base, mode, k) => {
                let tree = build_tree(&SeedPrefix::new(counts[..*k].to_vec()).unwrap());
                match (mode, tree.status()) {
                    (Truncation::Witness, _) => base.has_witness(&tree),
                    (Truncation::Size, Status::Complete(n)) => n < *k && base.on_complete(&tree, n),
                    (Truncation::Size, Status::Incomplete { .. }) => false,
                    (Truncation::Determined, Status::Complete(n)) => base.on_complete(&tree, n),
                    (Truncation::Determined, Status::Incomplete { .. }) => {
                        base.on_large(&tree, *k).expect("event decided within k")
                    }
                }
            }
            Event::Combine(op, a, b) => {
                let (x, y) = (a.oracle(counts), b.oracle(counts));
                match op {
                    Combine::And => x && y,
                    Combine::Or => x || y,
                    Combine::Diff => x && !y,
                }
            }
        }
    }
}

/// Truncated built-ins with horizon `k`.
pub fn builtins_at(k: usize) -> Vec<Event> {
    use Truncation::*;
    let union = Base::Or(Box::new(Base::Even1), Box::new(Base::Prime2));
    vec![
        Event::Trunc(Base::Root1, Witness, k),
        Event::Trunc(Base::Even1, Witness, k),
        Event::Trunc(Base::Prime2, Witness, k),
        Event::Trunc(Base::Odd2, Witness, k),
        Event::Trunc(union, Witness, k),
        Event::Trunc(Base::SizeGe(k), Witness, k),
        Event::Trunc(Base::Root1, Size, k),
        Event::Trunc(Base::Even1, Size, k),
        Event::Trunc(Base::SizeLt(k + 1), Determined, k),
        Event::Trunc(Base::SizeEq(k), Determined, k),
        Event::Trunc(Base::SizeGe(k + 1), Determined, k),
        Event::Trunc(Base::Root1, Determined, k),
    ]
}

/// Built-ins plus a few combinations, horizon `k`.
pub fn events_at(k: usize) -> Vec<Event> {
    use Truncation::*;
    let mut out = builtins_at(k);
    if k >= 2 {
        out.push(Event::Combine(
            Combine::Diff,
            Box::new(Event::Trunc(Base::Even1, Witness, k)),
            Box::new(Event::Trunc(Base::Even1, Witness, k - 1)),
        ));
    }
    out.push(Event::Combine(
        Combine::And,
        Box::new(Event::Trunc(Base::Odd2, Witness, k)),
        Box::new(Event::Trunc(Base::SizeLt(k + 1), Determined, k)),
    ));
    out.push(Event::Combine(
        Combine::Or,
        Box::new(Event::Trunc(Base::Root1, Size, k)),
        Box::new(Event::Trunc(Base::Prime2, Witness, k)),
    ));
    out
}

pub fn pmf(lambda: f64, m: u32) -> f64 {
    let mut p = (-lambda).exp();
    for j in 1..=m {
        p *= lambda / j as f64;
    }
    p
}

/// All count vectors in `{0..=max}^k`.
pub fn all_prefixes(k: usize, max: u32) -> impl Iterator<Item = Vec<u32>> {
    let base = max as usize + 1;
    (0..base.pow(k as u32)).map(move |mut code| {
        (0..k)
            .map(|_| {
                let c = (code % base) as u32;
                code /= base;
                c
            })
            .collect()
    })
}

/// `Σ_{x ∈ B, x_i <= max} Π pmf(x_i)` by enumeration.
pub fn brute_force_prob(event: &Event, lambda: f64, max: u32) -> f64 {
    all_prefixes(event.k(), max)
        .filter(|x| event.oracle(x))
        .map(|x| x.iter().map(|&m| pmf(lambda, m)).product::<f64>())
        .sum()
}
