//! Tree properties as finite-state observers of the breadth-first walk.
//!
//! An [`Automaton`] consumes nodes in label order and classifies its state
//! against the exploration [`Status`]. States are packed into a `u64` so that
//! products of automata stay cheap to hash in the exact engine.
//!
//! A [`TautProperty`] is an automaton with a horizon `k` whose verdict is
//! fixed by the first `k` counts of the seed.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::seed::{Explorer, Node, SeedPrefix, Status};

pub type State = u64;

/// Three-valued verdict of a property on a seed prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Undetermined,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Verdict::True
    }

    fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Undetermined,
        }
    }

    fn or(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::True, _) | (_, Verdict::True) => Verdict::True,
            (Verdict::False, Verdict::False) => Verdict::False,
            _ => Verdict::Undetermined,
        }
    }

    fn not(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Undetermined => Verdict::Undetermined,
        }
    }
}

/// How much of a node's level an automaton reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LevelNeed {
    None,
    Parity,
    Full,
}

/// Where level numbering starts. Even/odd and level-set predicates see
/// `level + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LevelConvention {
    #[default]
    RootZero,
    RootOne,
}

impl LevelConvention {
    fn offset(self) -> u32 {
        match self {
            LevelConvention::RootZero => 0,
            LevelConvention::RootOne => 1,
        }
    }
}

/// A finite-state observer of the breadth-first exploration.
///
/// `step` and `classify` must be pure. `classify` must not return
/// `Undetermined` on a complete status for any reachable state. If
/// `settled` returns a verdict for a state, every continuation of the walk
/// (including completion) classifies to that verdict.
pub trait Automaton: Send + Sync + fmt::Debug {
    fn initial(&self) -> State {
        0
    }

    fn step(&self, state: State, node: &Node) -> State;

    fn classify(&self, state: State, status: Status) -> Verdict;

    fn settled(&self, _state: State) -> Option<bool> {
        None
    }

    /// Once `True` on a prefix, `True` on every extension.
    fn is_monotone(&self) -> bool {
        false
    }

    /// A horizon after which every walk is classified `True` or `False`,
    /// when the automaton knows one.
    fn horizon(&self) -> Option<usize> {
        None
    }

    /// Bits used by the packed state.
    fn state_bits(&self) -> u32;

    fn level_need(&self) -> LevelNeed;

    fn describe(&self) -> String;
}

/// A shareable property automaton.
#[derive(Clone)]
pub struct Property(Arc<dyn Automaton>);

impl fmt::Debug for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.describe())
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.describe())
    }
}

impl Property {
    pub fn new(automaton: impl Automaton + 'static) -> Self {
        Self(Arc::new(automaton))
    }

    pub fn automaton(&self) -> &dyn Automaton {
        self.0.as_ref()
    }

    /// See [`Automaton::horizon`].
    pub fn horizon(&self) -> Option<usize> {
        self.0.horizon()
    }

    pub fn is_monotone(&self) -> bool {
        self.0.is_monotone()
    }

    /// `{X_1 = 1}`.
    pub fn root_one_child() -> Self {
        Self::new(RootOneChild)
    }

    /// Some node on an even level has exactly one child.
    pub fn even_level_one_child(convention: LevelConvention) -> Self {
        Self::new(LevelChildren {
            levels: LevelSet::Even,
            children: 1,
            convention,
        })
    }

    /// Some node on a level in `levels` has exactly two children.
    pub fn level_two_children(levels: LevelSet, convention: LevelConvention) -> Self {
        Self::new(LevelChildren {
            levels,
            children: 2,
            convention,
        })
    }

    pub fn size(relation: SizeRelation) -> Self {
        Self::new(TreeSize(relation))
    }

    pub fn constant(value: bool) -> Self {
        Self::new(Constant(value))
    }

    pub fn or(&self, other: &Property) -> Self {
        Self::new(Product {
            op: Combine::Or,
            left: self.clone(),
            right: other.clone(),
        })
    }

    pub fn and(&self, other: &Property) -> Self {
        Self::new(Product {
            op: Combine::And,
            left: self.clone(),
            right: other.clone(),
        })
    }
}

/// Runs `automaton` over the known nodes of `seed` and classifies the result.
pub fn run(automaton: &dyn Automaton, seed: &SeedPrefix) -> Verdict {
    let mut explorer = Explorer::new();
    let mut state = automaton.initial();
    for &count in seed.counts() {
        if explorer.is_complete() {
            break;
        }
        let node = explorer.visit(count);
        state = automaton.step(state, &node);
    }
    automaton.classify(state, explorer.status())
}

/// Three-valued evaluation of `prop` on the prefix.
pub fn evaluate(prop: &Property, seed: &SeedPrefix) -> Verdict {
    run(prop.automaton(), seed)
}

/// Level sets for level-restricted properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelSet {
    Even,
    Odd,
    Prime,
    List(Vec<u32>),
}

impl LevelSet {
    pub fn contains(&self, level: u32) -> bool {
        match self {
            LevelSet::Even => level.is_multiple_of(2),
            LevelSet::Odd => level % 2 == 1,
            LevelSet::Prime => is_prime(level),
            LevelSet::List(levels) => levels.contains(&level),
        }
    }

    fn need(&self) -> LevelNeed {
        match self {
            LevelSet::Even | LevelSet::Odd => LevelNeed::Parity,
            LevelSet::Prime | LevelSet::List(_) => LevelNeed::Full,
        }
    }
}

impl fmt::Display for LevelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelSet::Even => f.write_str("even"),
            LevelSet::Odd => f.write_str("odd"),
            LevelSet::Prime => f.write_str("prime"),
            LevelSet::List(levels) => {
                f.write_str("list:")?;
                for (i, l) in levels.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{l}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for LevelSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::PropertySpec {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        match s {
            "even" => Ok(LevelSet::Even),
            "odd" => Ok(LevelSet::Odd),
            "prime" => Ok(LevelSet::Prime),
            _ => {
                let list = s
                    .strip_prefix("list:")
                    .ok_or_else(|| bad("expected even, odd, prime or list:<levels>"))?;
                let levels = list
                    .split(',')
                    .map(|v| v.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| bad("levels must be non-negative integers"))?;
                Ok(LevelSet::List(levels))
            }
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug)]
struct RootOneChild;

impl Automaton for RootOneChild {
    // 0: root unseen, 1: X_1 = 1, 2: X_1 != 1
    fn step(&self, state: State, node: &Node) -> State {
        if node.index == 1 {
            if node.children == 1 {
                1
            } else {
                2
            }
        } else {
            state
        }
    }

    fn classify(&self, state: State, _status: Status) -> Verdict {
        match state {
            1 => Verdict::True,
            2 => Verdict::False,
            _ => Verdict::Undetermined,
        }
    }

    fn settled(&self, state: State) -> Option<bool> {
        match state {
            1 => Some(true),
            2 => Some(false),
            _ => None,
        }
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn state_bits(&self) -> u32 {
        2
    }

    fn level_need(&self) -> LevelNeed {
        LevelNeed::None
    }

    fn horizon(&self) -> Option<usize> {
        Some(1)
    }

    fn describe(&self) -> String {
        "root1".into()
    }
}

/// "Some node on a level in `levels` has exactly `children` children."
#[derive(Debug)]
struct LevelChildren {
    levels: LevelSet,
    children: u32,
    convention: LevelConvention,
}

impl Automaton for LevelChildren {
    fn step(&self, state: State, node: &Node) -> State {
        if state == 0
            && node.children == self.children
            && self.levels.contains(node.level + self.convention.offset())
        {
            1
        } else {
            state
        }
    }

    fn classify(&self, state: State, status: Status) -> Verdict {
        if state == 1 {
            Verdict::True
        } else if status.is_complete() {
            Verdict::False
        } else {
            Verdict::Undetermined
        }
    }

    fn settled(&self, state: State) -> Option<bool> {
        (state == 1).then_some(true)
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn state_bits(&self) -> u32 {
        1
    }

    fn level_need(&self) -> LevelNeed {
        self.levels.need()
    }

    fn describe(&self) -> String {
        match (self.children, &self.levels) {
            (1, LevelSet::Even) => "even1".into(),
            (2, levels) => format!("flevel2:{levels}"),
            (c, levels) => format!("level{c}:{levels}"),
        }
    }
}

/// Comparisons on the total number of nodes `|T|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeRelation {
    Lt(usize),
    Eq(usize),
    Ge(usize),
}

#[derive(Debug)]
struct TreeSize(SizeRelation);

impl Automaton for TreeSize {
    fn step(&self, state: State, _node: &Node) -> State {
        state
    }

    fn classify(&self, _state: State, status: Status) -> Verdict {
        match status {
            Status::Complete(n) => Verdict::from_bool(match self.0 {
                SizeRelation::Lt(m) => n < m,
                SizeRelation::Eq(m) => n == m,
                SizeRelation::Ge(m) => n >= m,
            }),
            // an incomplete prefix of length e means |T| >= e + 1
            Status::Incomplete { explored } => {
                let at_least = explored + 1;
                match self.0 {
                    SizeRelation::Lt(m) if at_least >= m => Verdict::False,
                    SizeRelation::Eq(m) if at_least > m => Verdict::False,
                    SizeRelation::Ge(m) if at_least >= m => Verdict::True,
                    _ => Verdict::Undetermined,
                }
            }
        }
    }

    fn is_monotone(&self) -> bool {
        matches!(self.0, SizeRelation::Ge(_))
    }

    fn horizon(&self) -> Option<usize> {
        Some(match self.0 {
            SizeRelation::Lt(m) | SizeRelation::Ge(m) => m.saturating_sub(1).max(1),
            SizeRelation::Eq(m) => m,
        })
    }

    fn state_bits(&self) -> u32 {
        0
    }

    fn level_need(&self) -> LevelNeed {
        LevelNeed::None
    }

    fn describe(&self) -> String {
        match self.0 {
            SizeRelation::Lt(m) => format!("size-lt:{m}"),
            SizeRelation::Eq(m) => format!("size-eq:{m}"),
            SizeRelation::Ge(m) => format!("size-ge:{m}"),
        }
    }
}

#[derive(Debug)]
struct Constant(bool);

impl Automaton for Constant {
    fn step(&self, state: State, _node: &Node) -> State {
        state
    }

    fn classify(&self, _state: State, _status: Status) -> Verdict {
        Verdict::from_bool(self.0)
    }

    fn settled(&self, _state: State) -> Option<bool> {
        Some(self.0)
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn state_bits(&self) -> u32 {
        0
    }

    fn level_need(&self) -> LevelNeed {
        LevelNeed::None
    }

    fn horizon(&self) -> Option<usize> {
        Some(1)
    }

    fn describe(&self) -> String {
        if self.0 { "true" } else { "false" }.into()
    }
}

/// Boolean operators for product automata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    And,
    Or,
    /// `p AND NOT q`
    Diff,
}

#[derive(Debug)]
struct Product {
    op: Combine,
    left: Property,
    right: Property,
}

impl Product {
    fn split(&self, state: State) -> (State, State) {
        let bits = self.left.0.state_bits();
        let mask = if bits == 0 { 0 } else { (1u64 << bits) - 1 };
        (state & mask, state >> bits)
    }

    fn join(&self, left: State, right: State) -> State {
        left | (right << self.left.0.state_bits())
    }

    fn apply(&self, a: Verdict, b: Verdict) -> Verdict {
        match self.op {
            Combine::And => a.and(b),
            Combine::Or => a.or(b),
            Combine::Diff => a.and(b.not()),
        }
    }
}

impl Automaton for Product {
    fn initial(&self) -> State {
        self.join(self.left.0.initial(), self.right.0.initial())
    }

    fn step(&self, state: State, node: &Node) -> State {
        let (a, b) = self.split(state);
        self.join(self.left.0.step(a, node), self.right.0.step(b, node))
    }

    fn classify(&self, state: State, status: Status) -> Verdict {
        let (a, b) = self.split(state);
        self.apply(
            self.left.0.classify(a, status),
            self.right.0.classify(b, status),
        )
    }

    fn settled(&self, state: State) -> Option<bool> {
        let (a, b) = self.split(state);
        let (sa, sb) = (self.left.0.settled(a), self.right.0.settled(b));
        match self.op {
            Combine::And => match (sa, sb) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Combine::Or => match (sa, sb) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            Combine::Diff => match (sa, sb) {
                (Some(false), _) | (_, Some(true)) => Some(false),
                (Some(true), Some(false)) => Some(true),
                _ => None,
            },
        }
    }

    fn is_monotone(&self) -> bool {
        self.op != Combine::Diff && self.left.is_monotone() && self.right.is_monotone()
    }

    fn horizon(&self) -> Option<usize> {
        Some(self.left.0.horizon()?.max(self.right.0.horizon()?))
    }

    fn state_bits(&self) -> u32 {
        let bits = self.left.0.state_bits() + self.right.0.state_bits();
        assert!(bits <= 64, "product automaton state exceeds 64 bits");
        bits
    }

    fn level_need(&self) -> LevelNeed {
        self.left.0.level_need().max(self.right.0.level_need())
    }

    fn describe(&self) -> String {
        let op = match self.op {
            Combine::And => "and",
            Combine::Or => "or",
            Combine::Diff => "diff",
        };
        format!("{op}({},{})", self.left, self.right)
    }
}

/// How a property is cut down to a `k`-determined event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// `A ∩ {|T| < k}`.
    Size,
    /// A witness among the first `k` known nodes (monotone properties only).
    Witness,
    /// The property itself, when it is decided within `k` nodes.
    Determined,
}

/// Verdict of the `mode`-truncation at horizon `k`, given the base verdict
/// and the status after at most `k` nodes.
pub(crate) fn truncated_verdict(mode: Truncation, base: Verdict, status: Status, k: usize) -> bool {
    match mode {
        Truncation::Witness | Truncation::Determined => base.is_true(),
        Truncation::Size => matches!(status, Status::Complete(n) if n < k) && base.is_true(),
    }
}

/// Horizon wrapper. Packed state: base bits, then two bits of resolution
/// (0 open, 1 true, 2 false).
#[derive(Debug)]
struct Truncated {
    base: Property,
    k: usize,
    mode: Truncation,
}

impl Truncated {
    fn base_mask(&self) -> State {
        let bits = self.base.0.state_bits();
        if bits == 0 {
            0
        } else {
            (1u64 << bits) - 1
        }
    }

    fn resolved(&self, state: State) -> Option<bool> {
        match state >> self.base.0.state_bits() {
            1 => Some(true),
            2 => Some(false),
            _ => None,
        }
    }

    fn with_resolution(&self, base_state: State, verdict: bool) -> State {
        base_state | ((if verdict { 1 } else { 2 }) << self.base.0.state_bits())
    }
}

impl Automaton for Truncated {
    fn initial(&self) -> State {
        self.base.0.initial()
    }

    fn step(&self, state: State, node: &Node) -> State {
        if self.resolved(state).is_some() || node.index > self.k {
            return state;
        }
        let base_state = self.base.0.step(state & self.base_mask(), node);
        if let Some(v) = self.base.0.settled(base_state) {
            match (self.mode, v) {
                (Truncation::Witness | Truncation::Determined, v) | (Truncation::Size, v @ false) => {
                    return self.with_resolution(base_state, v)
                }
                _ => {}
            }
        }
        if node.index == self.k && node.generated > self.k {
            let status = Status::Incomplete { explored: self.k };
            let base = self.base.0.classify(base_state, status);
            return self.with_resolution(
                base_state,
                truncated_verdict(self.mode, base, status, self.k),
            );
        }
        base_state
    }

    fn classify(&self, state: State, status: Status) -> Verdict {
        if let Some(v) = self.resolved(state) {
            return Verdict::from_bool(v);
        }
        let base_state = state & self.base_mask();
        let status = match status {
            Status::Complete(n) if n <= self.k => status,
            Status::Incomplete { explored } if explored < self.k => {
                return Verdict::Undetermined;
            }
            _ => Status::Incomplete { explored: self.k },
        };
        let base = self.base.0.classify(base_state, status);
        Verdict::from_bool(truncated_verdict(self.mode, base, status, self.k))
    }

    fn settled(&self, state: State) -> Option<bool> {
        self.resolved(state)
    }

    fn is_monotone(&self) -> bool {
        self.mode != Truncation::Size && self.base.is_monotone()
    }

    fn horizon(&self) -> Option<usize> {
        Some(self.k)
    }

    fn state_bits(&self) -> u32 {
        self.base.0.state_bits() + 2
    }

    fn level_need(&self) -> LevelNeed {
        self.base.0.level_need()
    }

    fn describe(&self) -> String {
        match self.mode {
            Truncation::Size => format!("size_trunc({},{})", self.base, self.k),
            Truncation::Witness => format!("witness({},{})", self.base, self.k),
            Truncation::Determined => format!("determined({},{})", self.base, self.k),
        }
    }
}

/// A `k`-tautologically determined event: its verdict is a function of the
/// first `k` seed counts.
#[derive(Debug, Clone)]
pub struct TautProperty {
    automaton: Property,
    k: usize,
}

impl fmt::Display for TautProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.automaton)
    }
}

impl TautProperty {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn automaton(&self) -> &dyn Automaton {
        self.automaton.automaton()
    }

    pub fn as_property(&self) -> &Property {
        &self.automaton
    }

    /// The constant event (`B = N^k` or `B = ∅`) at horizon `k`.
    pub fn constant(value: bool, k: usize) -> Result<Self> {
        truncate_by_witness(&Property::constant(value), k)
    }

    /// Verdict on the first `k` counts of `seed`. `Undetermined` only when
    /// the seed is shorter than `k` and does not already decide the event.
    pub fn evaluate(&self, seed: &SeedPrefix) -> Verdict {
        run(self.automaton(), &seed.truncated(self.k))
    }

    /// Whether `counts` (of length `k`) lies in the membership set `B`.
    pub fn contains(&self, counts: &[u32]) -> bool {
        debug_assert_eq!(counts.len(), self.k);
        match SeedPrefix::new(counts.to_vec()) {
            Ok(seed) => self.evaluate(&seed).is_true(),
            Err(_) => false,
        }
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("truncation horizon k must be >= 1".into()));
    }
    Ok(())
}

/// `A ∩ {|T| < k}`.
pub fn truncate_by_size(prop: &Property, k: usize) -> Result<TautProperty> {
    check_k(k)?;
    Ok(TautProperty {
        automaton: Property::new(Truncated {
            base: prop.clone(),
            k,
            mode: Truncation::Size,
        }),
        k,
    })
}

/// "A witness for `prop` occurs among the first `k` known nodes."
pub fn truncate_by_witness(prop: &Property, k: usize) -> Result<TautProperty> {
    check_k(k)?;
    if !prop.is_monotone() {
        return Err(Error::NotMonotone(prop.to_string()));
    }
    Ok(TautProperty {
        automaton: Property::new(Truncated {
            base: prop.clone(),
            k,
            mode: Truncation::Witness,
        }),
        k,
    })
}

/// `prop` itself, as a `k`-determined event. Requires the automaton to
/// declare a horizon of at most `k`.
pub fn truncate_determined(prop: &Property, k: usize) -> Result<TautProperty> {
    check_k(k)?;
    match prop.0.horizon() {
        Some(h) if h <= k => Ok(TautProperty {
            automaton: Property::new(Truncated {
                base: prop.clone(),
                k,
                mode: Truncation::Determined,
            }),
            k,
        }),
        Some(h) => Err(Error::InvalidArgument(format!("`{prop}` is decided only after {h} nodes, not {k}"))),
        None => Err(Error::InvalidArgument(format!("`{prop}` is not decided by a bounded prefix"))),
    }
}

pub fn truncate(prop: &Property, k: usize, mode: Truncation) -> Result<TautProperty> {
    match mode {
        Truncation::Size => truncate_by_size(prop, k),
        Truncation::Witness => truncate_by_witness(prop, k),
        Truncation::Determined => truncate_determined(prop, k),
    }
}

/// Product construction; the horizon is the larger of the two.
pub fn combine(op: Combine, p: &TautProperty, q: &TautProperty) -> TautProperty {
    TautProperty {
        automaton: Property::new(Product {
            op,
            left: p.automaton.clone(),
            right: q.automaton.clone(),
        }),
        k: p.k.max(q.k),
    }
}

/// Parses the property names used on the command line:
/// `root1`, `even1`, `flevel2:<levels>`, `size-lt:<k>`, `size-eq:<n>`,
/// `size-ge:<k>`, `true`, `false`, and unions joined by `+`.
pub fn parse_property(spec: &str, convention: LevelConvention) -> Result<Property> {
    let bad = |reason: &str| Error::PropertySpec {
        spec: spec.to_string(),
        reason: reason.to_string(),
    };
    if spec.contains('+') {
        let mut parts = spec.split('+').map(|p| parse_property(p.trim(), convention));
        let first = parts.next().ok_or_else(|| bad("empty union"))??;
        return parts.try_fold(first, |acc, p| Ok(acc.or(&p?)));
    }
    let size = |arg: &str| -> Result<usize> {
        arg.parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| bad("size bound must be a positive integer"))
    };
    match spec.split_once(':') {
        None => match spec {
            "root1" => Ok(Property::root_one_child()),
            "even1" => Ok(Property::even_level_one_child(convention)),
            "true" => Ok(Property::constant(true)),
            "false" => Ok(Property::constant(false)),
            _ => Err(bad("unknown property name")),
        },
        Some(("flevel2", levels)) => Ok(Property::level_two_children(levels.parse()?, convention)),
        Some(("size-lt", n)) => Ok(Property::size(SizeRelation::Lt(size(n)?))),
        Some(("size-eq", n)) => Ok(Property::size(SizeRelation::Eq(size(n)?))),
        Some(("size-ge", n)) => Ok(Property::size(SizeRelation::Ge(size(n)?))),
        Some(_) => Err(bad("unknown property name")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::build_tree;

    fn seed(s: &str) -> SeedPrefix {
        s.parse().unwrap()
    }

    fn even1() -> Property {
        Property::even_level_one_child(LevelConvention::RootZero)
    }

    #[test]
    fn base_evaluations() {
        assert_eq!(evaluate(&Property::root_one_child(), &seed("1,0")), Verdict::True);
        assert_eq!(evaluate(&even1(), &seed("3,0,2,1,0,0,0")), Verdict::False);
        assert_eq!(evaluate(&even1(), &seed("1,1,1")), Verdict::True);
        assert_eq!(evaluate(&even1(), &seed("2,0")), Verdict::Undetermined);
    }

    #[test]
    fn size_truncation() {
        let root1 = Property::root_one_child();
        let t2 = truncate_by_size(&root1, 2).unwrap();
        assert_eq!(t2.evaluate(&seed("1,0")), Verdict::False);
        let t3 = truncate_by_size(&root1, 3).unwrap();
        assert_eq!(t3.evaluate(&seed("1,0")), Verdict::True);
        assert_eq!(t3.evaluate(&seed("1,1,1")), Verdict::False);
    }

    #[test]
    fn witness_truncation() {
        let w3 = truncate_by_witness(&even1(), 3).unwrap();
        assert_eq!(w3.evaluate(&seed("1,1,1")), Verdict::True);
        let w7 = truncate_by_witness(&even1(), 7).unwrap();
        assert_eq!(w7.evaluate(&seed("3,0,2,1,0,0,0")), Verdict::False);
        let w1 = truncate_by_witness(&even1(), 1).unwrap();
        assert_eq!(w1.evaluate(&seed("1,4,2")), Verdict::True);
        assert_eq!(w1.evaluate(&seed("2,1,1")), Verdict::False);
    }

    #[test]
    fn witness_rejects_non_monotone() {
        let lt = Property::size(SizeRelation::Lt(4));
        assert!(matches!(truncate_by_witness(&lt, 3), Err(Error::NotMonotone(_))));
        assert!(truncate_by_size(&lt, 0).is_err());
    }

    #[test]
    fn short_prefix_is_undetermined() {
        let w5 = truncate_by_witness(&even1(), 5).unwrap();
        assert_eq!(w5.evaluate(&seed("2,1")), Verdict::Undetermined);
        assert_eq!(w5.evaluate(&seed("2,0,0")), Verdict::False);
    }

    #[test]
    fn level_convention_flips_parity() {
        let odd_root = Property::even_level_one_child(LevelConvention::RootOne);
        assert_eq!(evaluate(&odd_root, &seed("1,0")), Verdict::False);
        assert_eq!(evaluate(&odd_root, &seed("2,1,0,0")), Verdict::True);
    }

    #[test]
    fn prime_levels() {
        let primes: Vec<u32> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        let p = Property::level_two_children(LevelSet::Prime, LevelConvention::RootZero);
        // node 3 is on level 2 with two children
        assert_eq!(evaluate(&p, &seed("1,1,2,0,0")), Verdict::True);
        assert_eq!(evaluate(&p, &seed("2,2,0,0,0")), Verdict::False);
    }

    #[test]
    fn parse_specs() {
        let c = LevelConvention::RootZero;
        for spec in ["root1", "even1", "flevel2:prime", "flevel2:list:3,5,7", "size-lt:4", "size-eq:3"] {
            assert_eq!(parse_property(spec, c).unwrap().to_string(), spec);
        }
        assert_eq!(
            parse_property("even1+flevel2:prime", c).unwrap().to_string(),
            "or(even1,flevel2:prime)"
        );
        for bad in ["root2", "flevel2:", "flevel2:list:a", "size-lt:0", "size-eq:x", ""] {
            assert!(parse_property(bad, c).is_err(), "{bad}");
        }
    }

    #[test]
    fn combine_identities() {
        let a = truncate_by_witness(&even1(), 4).unwrap();
        let b = truncate_by_size(&Property::size(SizeRelation::Eq(3)), 4).unwrap();
        let diff = combine(Combine::Diff, &a, &a);
        let and = combine(Combine::And, &a, &a);
        let or = combine(Combine::Or, &a, &b);
        for code in 0..256u32 {
            let counts: Vec<u32> = (0..4).map(|i| (code >> (2 * i)) & 3).collect();
            let s = SeedPrefix::new(counts).unwrap();
            assert_eq!(diff.evaluate(&s), Verdict::False);
            assert_eq!(and.evaluate(&s), a.evaluate(&s));
            assert_eq!(
                or.evaluate(&s).is_true(),
                a.evaluate(&s).is_true() || b.evaluate(&s).is_true()
            );
        }
    }

    #[test]
    fn witness_agrees_with_tree_view() {
        // independent route: scan the reconstructed tree directly
        for k in 1..=5usize {
            let w = truncate_by_witness(&even1(), k).unwrap();
            for code in 0..4u32.pow(k as u32) {
                let counts: Vec<u32> = (0..k).map(|i| (code >> (2 * i)) & 3).collect();
                let tree = build_tree(&SeedPrefix::new(counts.clone()).unwrap());
                let expected = tree.nodes().any(|(_, l, c)| l % 2 == 0 && c == 1);
                assert_eq!(w.contains(&counts), expected, "{counts:?}");
            }
        }
    }
}
