//! Counter instructions, capped valuations, and values of finite words.
//!
//! Every edge of a `k`-counter arena carries one [`Op`] per counter. A play
//! accumulates these instructions; the *value* of a play is the supremum of
//! all counter values ever reached. Solvers never track unbounded integers:
//! they work with [`CounterValuation`]s capped at a bound `N`, where any
//! counter pushed past the cap collapses to the absorbing [`CounterValue::Exceeded`].
//! Exact (uncapped) arithmetic is only needed for finite words and is provided
//! by [`word_value`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A single counter instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    /// Leave the counter unchanged.
    Skip,
    /// Increment the counter by one.
    Inc,
    /// Reset the counter to zero.
    Reset,
}

impl Op {
    /// One-letter form used in file formats and vertex labels.
    pub fn symbol(self) -> char {
        match self {
            Op::Skip => 'e',
            Op::Inc => 'i',
            Op::Reset => 'r',
        }
    }

    /// Inverse of [`Op::symbol`]; accepts only `e`, `i`, `r`.
    pub fn from_symbol(c: char) -> Option<Op> {
        match c {
            'e' => Some(Op::Skip),
            'i' => Some(Op::Inc),
            'r' => Some(Op::Reset),
            _ => None,
        }
    }
}

/// The instruction vector carried by one edge: one [`Op`] per counter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CounterAction(pub Vec<Op>);

impl CounterAction {
    /// The action that leaves all `k` counters unchanged.
    pub fn epsilon(k: usize) -> Self {
        CounterAction(vec![Op::Skip; k])
    }

    /// Convenience constructor for one-counter arenas.
    pub fn single(op: Op) -> Self {
        CounterAction(vec![op])
    }

    /// Number of counters this action addresses.
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// True if no counter is touched.
    pub fn is_epsilon(&self) -> bool {
        self.0.iter().all(|&op| op == Op::Skip)
    }

    /// The instruction for counter `i`.
    pub fn op(&self, i: usize) -> Op {
        self.0[i]
    }
}

impl fmt::Debug for CounterAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for op in &self.0 {
            write!(f, "{}", op.symbol())?;
        }
        write!(f, "]")
    }
}

/// Mismatch between an action's arity and the arena's counter count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArityMismatch {
    /// Counters expected (the arena's `k`).
    pub expected: usize,
    /// Counters found in the offending action.
    pub found: usize,
}

impl fmt::Display for ArityMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "counter action has arity {} but the arena has {} counters",
            self.found, self.expected
        )
    }
}

impl core::error::Error for ArityMismatch {}

/// A single capped counter value: either a concrete value `<= cap`, or the
/// absorbing overflow marker.
///
/// `Exceeded` is absorbing even under resets: once a counter has passed the
/// cap, the supremum of the play's counter values has passed it for good, so
/// no later instruction can repair the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CounterValue {
    /// A concrete value, guaranteed `<= cap` of the owning valuation.
    Within(u32),
    /// The counter was pushed past the cap at some point.
    Exceeded,
}

impl CounterValue {
    /// The concrete value, if not exceeded.
    pub fn finite(self) -> Option<u32> {
        match self {
            CounterValue::Within(v) => Some(v),
            CounterValue::Exceeded => None,
        }
    }
}

impl fmt::Display for CounterValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CounterValue::Within(v) => write!(f, "{v}"),
            CounterValue::Exceeded => write!(f, "!"),
        }
    }
}

/// The joint state of all `k` counters, capped at `cap`.
///
/// The valuation space for cap `N` has `(N + 2)^k` elements (values `0..=N`
/// plus `Exceeded`, per counter); [`CounterValuation::code`] enumerates it,
/// which solvers use to index configurations densely.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CounterValuation {
    values: Vec<CounterValue>,
    cap: u32,
}

impl CounterValuation {
    /// All counters at zero.
    pub fn zero(k: usize, cap: u32) -> Self {
        CounterValuation {
            values: vec![CounterValue::Within(0); k],
            cap,
        }
    }

    /// Number of counters.
    pub fn arity(&self) -> usize {
        self.values.len()
    }

    /// The cap this valuation saturates at.
    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Per-counter values.
    pub fn values(&self) -> &[CounterValue] {
        &self.values
    }

    /// Apply one edge action. Increments past the cap yield `Exceeded`;
    /// `Exceeded` absorbs every instruction including resets.
    pub fn apply(&self, action: &CounterAction) -> Result<CounterValuation, ArityMismatch> {
        if action.arity() != self.values.len() {
            return Err(ArityMismatch {
                expected: self.values.len(),
                found: action.arity(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(action.0.iter())
            .map(|(&v, &op)| match (v, op) {
                (CounterValue::Exceeded, _) => CounterValue::Exceeded,
                (v, Op::Skip) => v,
                (_, Op::Reset) => CounterValue::Within(0),
                (CounterValue::Within(v), Op::Inc) => {
                    if v < self.cap {
                        CounterValue::Within(v + 1)
                    } else {
                        CounterValue::Exceeded
                    }
                }
            })
            .collect();
        Ok(CounterValuation {
            values,
            cap: self.cap,
        })
    }

    /// True if any counter has passed the cap.
    pub fn any_exceeded(&self) -> bool {
        self.values.contains(&CounterValue::Exceeded)
    }

    /// The largest per-counter value. `Within(0)` when there are no counters.
    pub fn max_value(&self) -> CounterValue {
        self.values
            .iter()
            .copied()
            .max()
            .unwrap_or(CounterValue::Within(0))
    }

    /// Dense index of this valuation in the `(cap + 2)^k` valuation space.
    ///
    /// Mixed-radix encoding, counter 0 most significant; `Exceeded` is the
    /// top digit. The zero valuation has code 0.
    pub fn code(&self) -> u64 {
        let radix = u64::from(self.cap) + 2;
        let mut code = 0u64;
        for &v in &self.values {
            let digit = match v {
                CounterValue::Within(x) => u64::from(x),
                CounterValue::Exceeded => radix - 1,
            };
            code = code * radix + digit;
        }
        code
    }

    /// Inverse of [`CounterValuation::code`].
    pub fn from_code(mut code: u64, k: usize, cap: u32) -> CounterValuation {
        let radix = u64::from(cap) + 2;
        let mut values = vec![CounterValue::Within(0); k];
        for slot in values.iter_mut().rev() {
            let digit = code % radix;
            code /= radix;
            *slot = if digit == radix - 1 {
                CounterValue::Exceeded
            } else {
                CounterValue::Within(digit as u32)
            };
        }
        debug_assert_eq!(code, 0, "code out of range for arity/cap");
        CounterValuation { values, cap }
    }

    /// Number of distinct valuations for `k` counters capped at `cap`,
    /// i.e. `(cap + 2)^k`. `None` on overflow.
    pub fn space_size(k: usize, cap: u32) -> Option<u64> {
        let radix = u64::from(cap) + 2;
        let mut size = 1u64;
        for _ in 0..k {
            size = size.checked_mul(radix)?;
        }
        Some(size)
    }
}

impl fmt::Debug for CounterValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A play or word value: a natural number or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Value {
    /// The supremum of counter values is this finite number.
    Finite(u32),
    /// Some counter grows without bound (or the objective fails outright).
    Infinite,
}

impl Value {
    /// The finite payload, if any.
    pub fn finite(self) -> Option<u32> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Infinite => None,
        }
    }

    /// True iff `self <= bound` (infinity exceeds every bound).
    pub fn at_most(self, bound: u32) -> bool {
        match self {
            Value::Finite(v) => v <= bound,
            Value::Infinite => false,
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        use Value::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinite) => core::cmp::Ordering::Less,
            (Infinite, Finite(_)) => core::cmp::Ordering::Greater,
            (Infinite, Infinite) => core::cmp::Ordering::Equal,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infinite => write!(f, "inf"),
        }
    }
}

/// Exact value of a finite word of actions: the supremum, over all prefixes
/// and counters, of the counter value after the prefix (starting from zero).
///
/// Uncapped; a word of length `n` has value at most `n`.
pub fn word_value(k: usize, word: &[CounterAction]) -> Result<u32, ArityMismatch> {
    let mut current = vec![0u32; k];
    let mut sup = 0u32;
    for action in word {
        if action.arity() != k {
            return Err(ArityMismatch {
                expected: k,
                found: action.arity(),
            });
        }
        for (value, &op) in current.iter_mut().zip(action.0.iter()) {
            match op {
                Op::Skip => {}
                Op::Reset => *value = 0,
                Op::Inc => {
                    *value += 1;
                    sup = sup.max(*value);
                }
            }
        }
    }
    Ok(sup)
}

/// Collapse a word of actions into a single equivalent action, per counter:
/// if the counter is reset anywhere in the word the summary is a reset, else
/// if it is incremented anywhere the summary is an increment, else a skip.
///
/// The summary records the *kind* of net effect, not its magnitude: it is the
/// abstraction under which block decompositions of long words can be analyzed
/// one block at a time.
pub fn summarize(k: usize, word: &[CounterAction]) -> Result<CounterAction, ArityMismatch> {
    let mut ops = vec![Op::Skip; k];
    for action in word {
        if action.arity() != k {
            return Err(ArityMismatch {
                expected: k,
                found: action.arity(),
            });
        }
        for (summary, &op) in ops.iter_mut().zip(action.0.iter()) {
            match op {
                Op::Skip => {}
                // Later resets override earlier increments: what matters for
                // the suffix is whether the counter leaves the block re-armed.
                Op::Reset => *summary = Op::Reset,
                Op::Inc => {
                    if *summary != Op::Reset {
                        *summary = Op::Inc;
                    }
                }
            }
        }
    }
    Ok(CounterAction(ops))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(k: usize, spec: &str) -> Vec<CounterAction> {
        // One action per whitespace-separated token, one op per char.
        spec.split_whitespace()
            .map(|tok| {
                let ops: Vec<Op> = tok.chars().map(|c| Op::from_symbol(c).unwrap()).collect();
                assert_eq!(ops.len(), k);
                CounterAction(ops)
            })
            .collect()
    }

    #[test]
    fn apply_caps_and_absorbs() {
        let v = CounterValuation::zero(2, 1);
        let v = v.apply(&word(2, "ie")[0]).unwrap();
        assert_eq!(
            v.values(),
            &[CounterValue::Within(1), CounterValue::Within(0)]
        );
        let v = v.apply(&word(2, "ii")[0]).unwrap();
        assert_eq!(
            v.values(),
            &[CounterValue::Exceeded, CounterValue::Within(1)]
        );
        // Exceeded absorbs resets.
        let v = v.apply(&word(2, "rr")[0]).unwrap();
        assert_eq!(
            v.values(),
            &[CounterValue::Exceeded, CounterValue::Within(0)]
        );
        assert!(v.any_exceeded());
        assert_eq!(v.max_value(), CounterValue::Exceeded);
    }

    #[test]
    fn apply_rejects_arity_mismatch() {
        let v = CounterValuation::zero(2, 3);
        let err = v.apply(&CounterAction::single(Op::Inc)).unwrap_err();
        assert_eq!(
            err,
            ArityMismatch {
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn code_round_trips_entire_space() {
        for k in 0..=3usize {
            for cap in 0..=2u32 {
                let space = CounterValuation::space_size(k, cap).unwrap();
                for code in 0..space {
                    let v = CounterValuation::from_code(code, k, cap);
                    assert_eq!(v.code(), code);
                    assert_eq!(v.arity(), k);
                }
            }
        }
        assert_eq!(CounterValuation::zero(3, 5).code(), 0);
    }

    #[test]
    fn word_value_tracks_sup_not_final() {
        // Counter climbs to 3, resets, climbs to 2: sup is 3.
        assert_eq!(word_value(1, &word(1, "i i i r i i")).unwrap(), 3);
        // Empty and all-skip words have value 0.
        assert_eq!(word_value(1, &[]).unwrap(), 0);
        assert_eq!(word_value(2, &word(2, "ee ee")).unwrap(), 0);
        // Independent counters: sup over both.
        assert_eq!(word_value(2, &word(2, "ie ie ei ri")).unwrap(), 2);
    }

    #[test]
    fn summarize_per_counter() {
        // Counter 0: inc then reset -> reset. Counter 1: inc only -> inc.
        let s = summarize(2, &word(2, "ie ei re")).unwrap();
        assert_eq!(s, CounterAction(vec![Op::Reset, Op::Inc]));
        // A reset anywhere wins, regardless of order relative to increments.
        let s = summarize(1, &word(1, "r i")).unwrap();
        assert_eq!(s, CounterAction::single(Op::Reset));
        let s = summarize(1, &word(1, "i r")).unwrap();
        assert_eq!(s, CounterAction::single(Op::Reset));
        // Untouched counter stays skip.
        let s = summarize(1, &[]).unwrap();
        assert!(s.is_epsilon());
    }

    /// Value of the word formed by summarizing each block.
    fn summary_word_value(k: usize, blocks: &[Vec<CounterAction>]) -> u32 {
        let u: Vec<CounterAction> = blocks.iter().map(|b| summarize(k, b).unwrap()).collect();
        word_value(k, &u).unwrap()
    }

    #[test]
    fn recomposition_constants_pinned() {
        // Block decompositions bound the full word's value via the summary
        // word value N and the per-block value bound N' as
        // val(w) <= (N+2)*N'. The two decompositions below show the smaller
        // constants N*N' and (N+1)*N' both fail, so the tests elsewhere
        // assert the (N+2)*N' bound only.
        let blocks = [word(1, "i"), word(1, "i r")];
        let w: Vec<CounterAction> = blocks.iter().flatten().cloned().collect();
        let n = summary_word_value(1, &blocks);
        let n_prime = blocks
            .iter()
            .map(|b| word_value(1, b).unwrap())
            .max()
            .unwrap();
        assert_eq!((n, n_prime), (1, 1));
        assert_eq!(word_value(1, &w).unwrap(), 2); // > N*N' = 1

        let blocks = [word(1, "r i"), word(1, "i"), word(1, "i r")];
        let w: Vec<CounterAction> = blocks.iter().flatten().cloned().collect();
        let n = summary_word_value(1, &blocks);
        let n_prime = blocks
            .iter()
            .map(|b| word_value(1, b).unwrap())
            .max()
            .unwrap();
        assert_eq!((n, n_prime), (1, 1));
        assert_eq!(word_value(1, &w).unwrap(), 3); // > (N+1)*N' = 2, = (N+2)*N'
    }

    #[test]
    fn value_ordering() {
        assert!(Value::Finite(3) < Value::Finite(4));
        assert!(Value::Finite(u32::MAX) < Value::Infinite);
        assert!(Value::Infinite.at_most(u32::MAX) == false);
        assert!(Value::Finite(5).at_most(5));
        assert!(!Value::Finite(6).at_most(5));
    }
}
