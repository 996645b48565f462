//! Closed-form arithmetic behind the game families: column step sizes,
//! suffix lengths, and the bound/memory trade-off recurrences.
//!
//! All functions use checked `u64` arithmetic and report [`FamilyError::Overflow`]
//! instead of wrapping; the recurrences grow fast enough that silent overflow
//! would otherwise be easy to hit.

use super::FamilyError;

fn checked_pow(base: u64, exp: u32) -> Result<u64, FamilyError> {
    base.checked_pow(exp).ok_or(FamilyError::Overflow)
}

fn checked_mul(a: u64, b: u64) -> Result<u64, FamilyError> {
    a.checked_mul(b).ok_or(FamilyError::Overflow)
}

fn checked_add(a: u64, b: u64) -> Result<u64, FamilyError> {
    a.checked_add(b).ok_or(FamilyError::Overflow)
}

/// Distance between consecutive increment columns on level `level` of the
/// layered family: `(bound + 1)^(level - 1)`.
///
/// Level 1 steps a single column at a time; each further level multiplies the
/// step by `bound + 1`.
pub fn level_step(level: u32, bound: u32) -> Result<u64, FamilyError> {
    if level < 1 {
        return Err(FamilyError::OutOfRange("level must be at least 1"));
    }
    if bound < 1 {
        return Err(FamilyError::OutOfRange("bound must be at least 1"));
    }
    checked_pow(u64::from(bound) + 1, level - 1)
}

/// Number of the topmost column in the layered family with `levels` levels
/// and target bound `bound`.
///
/// One level needs `2 * bound` columns; each added level multiplies the
/// previous length by `bound + 1` and adds `(bound + 1)^levels` fresh columns:
/// with two levels and bound 2 this is `3^2 + 3 * 4 = 21`.
pub fn suffix_length(levels: u32, bound: u32) -> Result<u64, FamilyError> {
    if levels < 1 {
        return Err(FamilyError::OutOfRange("levels must be at least 1"));
    }
    if bound < 1 {
        return Err(FamilyError::OutOfRange("bound must be at least 1"));
    }
    let base = u64::from(bound) + 1;
    let mut length = checked_mul(2, u64::from(bound))?;
    for grown in 1..levels {
        let fresh = checked_pow(base, grown + 1)?;
        length = checked_add(fresh, checked_mul(base, length)?)?;
    }
    Ok(length)
}

/// Counter bound reachable with the fixed memory of [`tradeoff_memory`] on
/// arenas with `colors` colors (odd), `counters` counters, `width` vertices,
/// and optimal value `value`.
///
/// Each two-color reduction multiplies the width by six, adds a counter, and
/// rescales the value by `width * (value + 1)^counters`, using the width from
/// before the step as the scale factor; the base case is twice the value. See
/// [`tradeoff_bound_with`] to pin the scale factor to a constant instead.
pub fn tradeoff_bound(
    colors: u32,
    counters: u32,
    width: u64,
    value: u64,
) -> Result<u64, FamilyError> {
    tradeoff_bound_step(colors, counters, width, value, None)
}

/// [`tradeoff_bound`] with the per-step scale factor pinned to `multiplier`
/// instead of the current width.
pub fn tradeoff_bound_with(
    colors: u32,
    counters: u32,
    width: u64,
    value: u64,
    multiplier: u64,
) -> Result<u64, FamilyError> {
    tradeoff_bound_step(colors, counters, width, value, Some(multiplier))
}

fn tradeoff_bound_step(
    colors: u32,
    counters: u32,
    width: u64,
    value: u64,
    multiplier: Option<u64>,
) -> Result<u64, FamilyError> {
    if colors % 2 == 0 || colors < 1 {
        return Err(FamilyError::OutOfRange("colors must be odd and positive"));
    }
    let mut colors = colors;
    let mut counters = counters;
    let mut width = width;
    let mut value = value;
    while colors > 1 {
        let scale = multiplier.unwrap_or(width);
        let grown = checked_pow(checked_add(value, 1)?, counters)?;
        value = checked_mul(scale, grown)?;
        width = checked_mul(6, width)?;
        counters = counters.checked_add(1).ok_or(FamilyError::Overflow)?;
        colors -= 2;
    }
    checked_mul(2, value)
}

/// Memory sufficient for Eve on arenas with `colors` colors (odd) and
/// `counters` counters, under the bound of [`tradeoff_bound`].
///
/// One color pair costs `2 * counters!` states; each further pair quadruples
/// the count while the reduction adds a counter: `mem(3, 1) = 4 * mem(1, 2) = 16`.
pub fn tradeoff_memory(colors: u32, counters: u32) -> Result<u64, FamilyError> {
    if colors % 2 == 0 || colors < 1 {
        return Err(FamilyError::OutOfRange("colors must be odd and positive"));
    }
    let mut colors = colors;
    let mut counters = counters;
    let mut factor: u64 = 1;
    while colors > 1 {
        factor = checked_mul(factor, 4)?;
        counters = counters.checked_add(1).ok_or(FamilyError::Overflow)?;
        colors -= 2;
    }
    let mut factorial: u64 = 1;
    for i in 2..=u64::from(counters) {
        factorial = checked_mul(factorial, i)?;
    }
    checked_mul(factor, checked_mul(2, factorial)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_level_steps_one_column() {
        for bound in 1..6 {
            assert_eq!(level_step(1, bound), Ok(1));
        }
        assert_eq!(level_step(2, 2), Ok(3));
        assert_eq!(level_step(3, 2), Ok(9));
        assert_eq!(level_step(2, 4), Ok(5));
    }

    #[test]
    fn suffix_length_follows_the_recurrence() {
        assert_eq!(suffix_length(1, 2), Ok(4));
        assert_eq!(suffix_length(1, 5), Ok(10));
        // 3^2 + 3 * 4
        assert_eq!(suffix_length(2, 2), Ok(21));
        // 3^3 + 3 * 21
        assert_eq!(suffix_length(3, 2), Ok(90));
    }

    #[test]
    fn one_color_pair_doubles_the_value() {
        assert_eq!(tradeoff_bound(1, 1, 7, 5), Ok(10));
        assert_eq!(tradeoff_bound(1, 3, 100, 4), Ok(8));
    }

    #[test]
    fn each_reduction_rescales_before_doubling() {
        // One step from (3, 1, 5, 2): value becomes 5 * 3^1 = 15, then doubled.
        assert_eq!(tradeoff_bound(3, 1, 5, 2), Ok(30));
        // Two steps from (5, 1, 2, 1): 2 * 2^1 = 4, then 12 * 5^2 = 300, doubled.
        assert_eq!(tradeoff_bound(5, 1, 2, 1), Ok(600));
    }

    #[test]
    fn pinned_multiplier_overrides_the_width() {
        assert_eq!(tradeoff_bound_with(3, 1, 5, 2, 10), Ok(60));
        assert_eq!(
            tradeoff_bound_with(3, 1, 5, 2, 5),
            tradeoff_bound(3, 1, 5, 2)
        );
    }

    #[test]
    fn memory_matches_the_recurrence() {
        assert_eq!(tradeoff_memory(1, 1), Ok(2));
        assert_eq!(tradeoff_memory(1, 3), Ok(12));
        assert_eq!(tradeoff_memory(3, 1), Ok(16));
        // 4 * mem(3, 2) = 16 * mem(1, 3).
        assert_eq!(tradeoff_memory(5, 1), Ok(192));
    }

    #[test]
    fn even_color_counts_are_rejected() {
        assert_eq!(
            tradeoff_bound(2, 1, 1, 1),
            Err(FamilyError::OutOfRange("colors must be odd and positive"))
        );
        assert_eq!(
            tradeoff_memory(4, 1),
            Err(FamilyError::OutOfRange("colors must be odd and positive"))
        );
    }

    #[test]
    fn overflow_is_reported_not_wrapped() {
        assert_eq!(level_step(64, u32::MAX), Err(FamilyError::Overflow));
        assert_eq!(tradeoff_bound(61, 1, 2, 1), Err(FamilyError::Overflow));
    }
}
