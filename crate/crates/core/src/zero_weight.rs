//! Packing when items weigh nothing: only the adjacency rule binds.
//!
//! If the most frequent color (MaxColor) has no more items than all other
//! colors together, everything fits in one bin. Otherwise the first bin uses
//! every other item as a separator between MaxColor items and each leftover
//! MaxColor item needs a bin of its own, so the bin count is the discrepancy.

use thiserror::Error;

use crate::model::{color_stats, BinContent, ColorCounts, ColorId, Packing};
use crate::pool::ColorPool;

/// Result of alternating among the non-max colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleavePlan {
    /// Others-only run with no two equal neighbours.
    pub prefix: Vec<ColorId>,
    /// Items of `other_counts` not used by `prefix`.
    pub remainder_counts: ColorCounts,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeroWeightError {
    #[error("cannot leave {target} items when only {available} are present")]
    TargetTooLarge { target: usize, available: usize },
    #[error("alternation stuck after {emitted} items: only {color} remains ({remaining} left, target {target})")]
    Stuck {
        emitted: usize,
        color: ColorId,
        remaining: usize,
        target: usize,
    },
}

/// Emits other-color items, each differing from the previous one, until
/// exactly `target_remaining` remain. Picks the most plentiful color that
/// differs from the last emitted one, ties to the smallest id.
pub fn interleave_others(
    other_counts: &ColorCounts,
    target_remaining: usize,
) -> Result<InterleavePlan, ZeroWeightError> {
    let available = other_counts.total();
    if target_remaining > available {
        return Err(ZeroWeightError::TargetTooLarge {
            target: target_remaining,
            available,
        });
    }
    let mut pool = ColorPool::new(other_counts);
    let mut prefix = Vec::with_capacity(available - target_remaining);
    while pool.total() > target_remaining {
        let last = prefix.last().copied();
        match pool.take(last) {
            Some(c) => prefix.push(c),
            None => {
                return Err(ZeroWeightError::Stuck {
                    emitted: prefix.len(),
                    color: last.expect("an empty prefix never excludes a color"),
                    remaining: pool.total(),
                    target: target_remaining,
                })
            }
        }
    }
    Ok(InterleavePlan {
        prefix,
        remainder_counts: pool.to_counts(),
    })
}

/// Minimum-bin packing of zero-weight items.
pub fn zero_weight_pack(counts: &ColorCounts) -> Packing {
    let stats = color_stats(counts);
    let Some(max_color) = stats.max_color else {
        return Packing::default();
    };
    let others = counts.without(max_color);

    if stats.discrepancy <= 0 {
        // Others first, until one fewer than MaxCount remain; then Max/Other
        // alternation finishing on Max.
        let plan = interleave_others(&others, stats.max_count - 1)
            .expect("most-frequent-first alternation cannot stall when MaxCount <= OtherCount");
        let mut items = plan.prefix;
        items.reserve(2 * stats.max_count - 1);
        let mut pool = ColorPool::new(&plan.remainder_counts);
        items.push(max_color);
        while let Some(c) = pool.take(None) {
            items.push(c);
            items.push(max_color);
        }
        return Packing::new(vec![BinContent::new(items)]);
    }

    let mut first = Vec::with_capacity(2 * stats.other_count + 1);
    let mut pool = ColorPool::new(&others);
    first.push(max_color);
    while let Some(c) = pool.take(None) {
        first.push(c);
        first.push(max_color);
    }
    let mut bins = Vec::with_capacity(stats.discrepancy as usize);
    bins.push(BinContent::new(first));
    bins.extend((1..stats.discrepancy).map(|_| BinContent::new(vec![max_color])));
    Packing::new(bins)
}
