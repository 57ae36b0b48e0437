//! Packing unit-weight items into bins holding at most `L` items.
//!
//! Dispatch on the discrepancy `D = MaxCount - OtherCount`:
//!
//! * `D <= 0`: order everything as for zero-weight items and cut the sequence
//!   into runs of `L` ([`split`]).
//! * `D > 0`, `L` even: fill bins Max/Other/Max/Other..., put leftover Max
//!   items in singleton bins, then [`condense`] singletons into the others.
//! * `D > 0`, `L` odd: every full alternating bin holds one more Max than
//!   Other item. If `D` such bins can be formed the rest has zero
//!   discrepancy and is split; otherwise alternate until the others run out
//!   and give each remaining Max item its own bin.

use std::collections::VecDeque;

use thiserror::Error;

use crate::model::{color_stats, BinContent, ColorCounts, ColorId, Packing};
use crate::pool::ColorPool;
use crate::zero_weight::zero_weight_pack;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("split needs discrepancy <= 0, got {0}")]
    PositiveDiscrepancy(i64),
    #[error("condense needs an even capacity, got {0}")]
    OddCapacity(usize),
    #[error("capacity must be positive")]
    ZeroCapacity,
}

/// Role of a bin inside [`condense`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinClass {
    /// A single MaxColor item.
    MBin,
    /// Max-topped, holds at least one other item, room for two more.
    PBin,
    /// Full and topped with a non-max item.
    FBin,
    /// Anything else; never touched.
    Finalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopRule {
    OthersExhausted,
    AfterKBins(usize),
}

/// Cuts the one-bin zero-weight ordering into consecutive runs of `capacity`.
pub fn split(counts: &ColorCounts, capacity: usize) -> Result<Packing, ContractError> {
    if capacity == 0 {
        return Err(ContractError::ZeroCapacity);
    }
    let d = color_stats(counts).discrepancy;
    if d > 0 {
        return Err(ContractError::PositiveDiscrepancy(d));
    }
    let sequence = zero_weight_pack(counts)
        .into_bins()
        .pop()
        .map(|b| b.0)
        .unwrap_or_default();
    Ok(Packing::new(
        sequence
            .chunks(capacity)
            .map(|chunk| BinContent::new(chunk.to_vec()))
            .collect(),
    ))
}

/// Fills bins starting with MaxColor and alternating with the most frequent
/// remaining other color. A bin whose others ran out on an other-topped item
/// gets one more MaxColor item if any is left.
///
/// Returns the bins and the counts not packed.
pub fn initial_alternating_pack(
    counts: &ColorCounts,
    capacity: usize,
    stop: StopRule,
) -> (Packing, ColorCounts) {
    let stats = color_stats(counts);
    let Some(max_color) = stats.max_color else {
        return (Packing::default(), ColorCounts::new());
    };
    let mut max_left = stats.max_count;
    let mut others = ColorPool::new(&counts.without(max_color));
    let mut bins = Vec::new();

    while !others.is_empty() {
        if let StopRule::AfterKBins(k) = stop {
            if bins.len() >= k {
                break;
            }
        }
        let mut bin = Vec::with_capacity(capacity);
        while bin.len() < capacity {
            if bin.len() % 2 == 0 {
                if max_left == 0 {
                    break;
                }
                max_left -= 1;
                bin.push(max_color);
            } else {
                match others.take(None) {
                    Some(c) => bin.push(c),
                    None => break,
                }
            }
        }
        if bin.is_empty() {
            break;
        }
        bins.push(BinContent::new(bin));
    }

    let mut rest = others.to_counts();
    rest.add(max_color, max_left);
    (Packing::new(bins), rest)
}

pub fn classify_bin(bin: &BinContent, max_color: ColorId, capacity: usize) -> BinClass {
    let Some(top) = bin.top() else {
        return BinClass::Finalized;
    };
    if bin.len() == 1 && top == max_color {
        BinClass::MBin
    } else if bin.len() == capacity && top != max_color {
        BinClass::FBin
    } else if top == max_color
        && bin.len() + 2 <= capacity
        && bin.items().iter().any(|&c| c != max_color)
    {
        BinClass::PBin
    } else {
        BinClass::Finalized
    }
}

/// State of the pair-moving loop when it stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondenseTrace {
    pub packing: Packing,
    /// F-bins never used as a pair source.
    pub f_bins_left: usize,
    /// M-bins neither emptied nor taken as the current bin.
    pub m_bins_left: usize,
    /// Number of (other, max) pairs moved; each removes one bin.
    pub moves: usize,
}

/// Repeatedly moves the top other item of an F-bin and the item of an M-bin
/// onto a current bin, deleting the emptied M-bin. The current bin starts as
/// the P-bin if there is one, otherwise an M-bin, and is replaced by a fresh
/// M-bin once it cannot take another pair.
pub fn condense(
    packing: &Packing,
    max_color: ColorId,
    capacity: usize,
) -> Result<Packing, ContractError> {
    condense_traced(packing, max_color, capacity).map(|t| t.packing)
}

pub fn condense_traced(
    packing: &Packing,
    max_color: ColorId,
    capacity: usize,
) -> Result<CondenseTrace, ContractError> {
    if capacity % 2 == 1 {
        return Err(ContractError::OddCapacity(capacity));
    }
    if capacity == 0 {
        return Err(ContractError::ZeroCapacity);
    }
    let mut state = CondenseState::new(packing, max_color, capacity);
    state.run();
    Ok(state.finish())
}

struct CondenseState {
    bins: Vec<BinContent>,
    capacity: usize,
    current: Option<usize>,
    m_bins: VecDeque<usize>,
    f_bins: Vec<usize>,
    moves: usize,
}

impl CondenseState {
    fn new(packing: &Packing, max_color: ColorId, capacity: usize) -> Self {
        let bins = packing.bins().to_vec();
        let mut m_bins = VecDeque::new();
        let mut f_bins = Vec::new();
        let mut p_bin = None;
        for (i, bin) in bins.iter().enumerate() {
            match classify_bin(bin, max_color, capacity) {
                BinClass::MBin => m_bins.push_back(i),
                BinClass::FBin => f_bins.push(i),
                BinClass::PBin if p_bin.is_none() => p_bin = Some(i),
                BinClass::PBin | BinClass::Finalized => {}
            }
        }
        let current = p_bin.or_else(|| m_bins.pop_front());
        Self {
            bins,
            capacity,
            current,
            m_bins,
            f_bins,
            moves: 0,
        }
    }

    fn run(&mut self) {
        while !self.f_bins.is_empty() && !self.m_bins.is_empty() {
            let cur = match self.current {
                Some(i) if self.bins[i].len() + 2 <= self.capacity => i,
                _ => {
                    self.current = self.m_bins.pop_front();
                    continue;
                }
            };
            let source = self.f_bins.pop().expect("loop guard");
            let x = self.bins[source].pop().expect("F-bins are full");
            let single = self.m_bins.pop_front().expect("loop guard");
            let y = self.bins[single].pop().expect("M-bins hold one item");
            self.bins[cur].push(x);
            self.bins[cur].push(y);
            self.moves += 1;
        }
    }

    fn finish(self) -> CondenseTrace {
        CondenseTrace {
            f_bins_left: self.f_bins.len(),
            m_bins_left: self.m_bins.len(),
            moves: self.moves,
            packing: Packing::new(self.bins),
        }
    }
}

/// `ceil(other_count / floor(L/2))`, the number of alternating bins the
/// other items can fill. Requires `L >= 2`.
pub fn odd_case_threshold(other_count: usize, capacity: usize) -> usize {
    let per_bin = capacity / 2;
    assert!(per_bin > 0, "threshold undefined for L < 2");
    other_count.div_ceil(per_bin)
}

fn with_singletons(packing: Packing, rest: &ColorCounts, max_color: ColorId) -> Vec<BinContent> {
    debug_assert_eq!(rest.total(), rest.get(max_color));
    let mut bins = packing.into_bins();
    bins.extend((0..rest.get(max_color)).map(|_| BinContent::new(vec![max_color])));
    bins
}

/// Packs unit-weight items into bins of `capacity`.
pub fn unit_weight_pack(counts: &ColorCounts, capacity: usize) -> Result<Packing, ContractError> {
    if capacity == 0 {
        return Err(ContractError::ZeroCapacity);
    }
    let stats = color_stats(counts);
    let Some(max_color) = stats.max_color else {
        return Ok(Packing::default());
    };
    if capacity == 1 {
        let singles = counts
            .iter()
            .flat_map(|(c, k)| std::iter::repeat_n(c, k))
            .map(|c| BinContent::new(vec![c]))
            .collect();
        return Ok(Packing::new(singles));
    }
    if stats.discrepancy <= 0 {
        return split(counts, capacity);
    }
    let d = stats.discrepancy as usize;

    if capacity.is_multiple_of(2) {
        let (initial, rest) = initial_alternating_pack(counts, capacity, StopRule::OthersExhausted);
        let initial = Packing::new(with_singletons(initial, &rest, max_color));
        return condense(&initial, max_color, capacity);
    }

    if d <= odd_case_threshold(stats.other_count, capacity) {
        let (head, rest) = initial_alternating_pack(counts, capacity, StopRule::AfterKBins(d));
        assert!(
            color_stats(&rest).discrepancy == 0,
            "remainder {{{rest}}} of {{{counts}}} should have zero discrepancy"
        );
        let mut bins = head.into_bins();
        bins.extend(split(&rest, capacity)?.into_bins());
        Ok(Packing::new(bins))
    } else {
        let (initial, rest) = initial_alternating_pack(counts, capacity, StopRule::OthersExhausted);
        Ok(Packing::new(with_singletons(initial, &rest, max_color)))
    }
}
