//! Exact minimum bin counts by exhaustive search, plus simple lower bounds.
//!
//! None of this uses the constructive solvers: a bin is feasible iff it fits
//! the capacity and no color takes more than half of it (rounded up), and
//! the search partitions the multiset into feasible bins.

use std::collections::HashMap;

use crate::model::{color_stats, BinContent, Capacity, ColorCounts, ColorId, Packing};
use crate::pool::ColorPool;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LowerBounds {
    /// `ceil(n / L)`.
    pub weight_lb: usize,
    /// `max(D, 1)` for a non-empty instance.
    pub discrepancy_lb: usize,
    /// `ceil(MaxCount / ceil(L/2))`: a bin of length `l` holds at most
    /// `ceil(l/2)` items of one color.
    pub per_color_lb: usize,
}

impl LowerBounds {
    pub fn max(&self) -> usize {
        self.weight_lb
            .max(self.discrepancy_lb)
            .max(self.per_color_lb)
    }
}

pub fn lower_bounds(counts: &ColorCounts, capacity: Capacity) -> LowerBounds {
    let n = counts.total();
    let stats = color_stats(counts);
    let (weight_lb, per_color_lb) = match capacity {
        Capacity::Bounded(l) => (n.div_ceil(l), stats.max_count.div_ceil(l.div_ceil(2))),
        Capacity::Unbounded => (usize::from(n > 0), usize::from(n > 0)),
    };
    let discrepancy_lb = if n == 0 {
        0
    } else {
        stats.discrepancy.max(1) as usize
    };
    LowerBounds {
        weight_lb,
        discrepancy_lb,
        per_color_lb,
    }
}

/// Whether a single bin can hold exactly these items.
pub fn bin_feasible(bin_counts: &ColorCounts, capacity: Capacity) -> bool {
    fits(bin_counts.total(), bin_counts.max_count(), capacity)
}

fn fits(size: usize, max: usize, capacity: Capacity) -> bool {
    capacity.admits(size) && max <= size.div_ceil(2)
}

/// Arranges a feasible bin with no equal neighbours: repeatedly place the
/// most plentiful color that differs from the previous item.
pub fn arrange_bin(bin_counts: &ColorCounts) -> Option<BinContent> {
    let mut pool = ColorPool::new(bin_counts);
    let mut items = Vec::with_capacity(bin_counts.total());
    while !pool.is_empty() {
        items.push(pool.take(items.last().copied())?);
    }
    Some(BinContent::new(items))
}

/// Smallest number of bins any valid packing of `counts` uses.
pub fn min_bins_exact(counts: &ColorCounts, capacity: Capacity) -> usize {
    Search::new(counts, capacity).min_bins()
}

/// An optimal packing found by the exact search.
pub fn min_packing_exact(counts: &ColorCounts, capacity: Capacity) -> Packing {
    let mut search = Search::new(counts, capacity);
    let bins = search.min_bins();
    let mut state = search.start.clone();
    let mut chosen = Vec::with_capacity(bins);
    assert!(search.feasible(&mut state, bins, Some(&mut chosen)));
    Packing::new(
        chosen
            .into_iter()
            .map(|sub| {
                let c = ColorCounts::from_pairs(search.colors.iter().copied().zip(sub));
                arrange_bin(&c).expect("chosen bins are feasible")
            })
            .collect(),
    )
}

struct Search {
    capacity: Capacity,
    colors: Vec<ColorId>,
    start: Vec<usize>,
    /// Canonical state -> largest bin budget known to be insufficient.
    failed: HashMap<Vec<usize>, usize>,
}

impl Search {
    fn new(counts: &ColorCounts, capacity: Capacity) -> Self {
        let (colors, start) = counts.iter().unzip();
        Self {
            capacity,
            colors,
            start,
            failed: HashMap::new(),
        }
    }

    fn min_bins(&mut self) -> usize {
        let mut state = self.start.clone();
        let lb = lower_bounds(&ColorCounts::from_count_vector(&state), self.capacity).max();
        (lb..)
            .find(|&b| self.feasible(&mut state, b, None))
            .expect("singleton bins always work")
    }

    fn feasible(
        &mut self,
        state: &mut Vec<usize>,
        budget: usize,
        mut witness: Option<&mut Vec<Vec<usize>>>,
    ) -> bool {
        let total: usize = state.iter().sum();
        if total == 0 {
            return true;
        }
        if budget == 0 {
            return false;
        }
        if lower_bounds(&ColorCounts::from_count_vector(state), self.capacity).max() > budget {
            return false;
        }
        let mut key = state.clone();
        key.sort_unstable_by(|a, b| b.cmp(a));
        if self.failed.get(&key).is_some_and(|&b| b >= budget) {
            return false;
        }

        let anchor = state.iter().position(|&k| k > 0).expect("non-empty");
        let mut candidates = Vec::new();
        let mut sub = vec![0; state.len()];
        sub[anchor] = 1;
        self.subsets(state, anchor, 1, &mut sub, &mut candidates);

        for sub in candidates {
            for (s, k) in state.iter_mut().zip(&sub) {
                *s -= k;
            }
            let ok = self.feasible(state, budget - 1, witness.as_deref_mut());
            for (s, k) in state.iter_mut().zip(&sub) {
                *s += k;
            }
            if ok {
                if let Some(w) = witness {
                    w.push(sub);
                }
                return true;
            }
        }
        let entry = self.failed.entry(key).or_insert(0);
        *entry = (*entry).max(budget);
        false
    }

    /// All feasible bins `sub <= state` that contain one item of `anchor`,
    /// largest first.
    fn subsets(
        &self,
        state: &[usize],
        index: usize,
        size: usize,
        sub: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if index == state.len() {
            let max = sub.iter().copied().max().unwrap_or(0);
            if fits(size, max, self.capacity) {
                out.push(sub.clone());
            }
            return;
        }
        let floor = sub[index];
        let room = self
            .capacity
            .limit()
            .map_or(usize::MAX, |l| l - size + floor);
        let top = state[index].min(room);
        for k in (floor..=top).rev() {
            sub[index] = k;
            self.subsets(state, index + 1, size - floor + k, sub, out);
        }
        sub[index] = floor;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_packing, Instance};
    use proptest::prelude::*;

    const W: ColorId = ColorId(0);
    const B: ColorId = ColorId(1);
    const Y: ColorId = ColorId(2);
    const G: ColorId = ColorId(3);

    fn counts(pairs: &[(ColorId, usize)]) -> ColorCounts {
        ColorCounts::from_pairs(pairs.iter().copied())
    }

    /// True iff some ordering of the items has no equal neighbours.
    fn any_arrangement_valid(c: &ColorCounts) -> bool {
        fn go(c: &mut ColorCounts, last: Option<ColorId>) -> bool {
            if c.is_empty() {
                return true;
            }
            let colors: Vec<ColorId> = c.iter().map(|(k, _)| k).collect();
            colors.into_iter().any(|color| {
                if Some(color) == last {
                    return false;
                }
                c.remove(color, 1);
                let ok = go(c, Some(color));
                c.add(color, 1);
                ok
            })
        }
        go(&mut c.clone(), None)
    }

    /// Minimum bins by trying every assignment of items to bin labels.
    fn brute_force_min_bins(c: &ColorCounts, capacity: Capacity) -> usize {
        let items: Vec<ColorId> = c
            .iter()
            .flat_map(|(k, n)| std::iter::repeat_n(k, n))
            .collect();
        fn assign(
            items: &[ColorId],
            bins: &mut Vec<ColorCounts>,
            capacity: Capacity,
            best: &mut usize,
        ) {
            if bins.len() >= *best {
                return;
            }
            let Some((&item, rest)) = items.split_first() else {
                if bins
                    .iter()
                    .all(|b| capacity.admits(b.total()) && any_arrangement_valid(b))
                {
                    *best = bins.len();
                }
                return;
            };
            for i in 0..bins.len() {
                bins[i].add(item, 1);
                assign(rest, bins, capacity, best);
                bins[i].remove(item, 1);
            }
            bins.push(ColorCounts::from_pairs([(item, 1)]));
            assign(rest, bins, capacity, best);
            bins.pop();
        }
        let mut best = items.len() + 1;
        assign(&items, &mut Vec::new(), capacity, &mut best);
        if items.is_empty() {
            0
        } else {
            best
        }
    }

    #[test]
    fn feasibility_examples() {
        assert!(bin_feasible(
            &counts(&[(W, 2), (B, 1)]),
            Capacity::Bounded(3)
        ));
        assert!(!any_arrangement_valid(&counts(&[(W, 3), (B, 1)])));
        assert!(!bin_feasible(
            &counts(&[(W, 3), (B, 1)]),
            Capacity::Bounded(4)
        ));
        assert!(bin_feasible(&ColorCounts::new(), Capacity::Bounded(1)));
        assert!(!bin_feasible(
            &counts(&[(W, 2), (B, 2)]),
            Capacity::Bounded(3)
        ));
    }

    #[test]
    fn feasibility_matches_enumeration_up_to_eight_items() {
        for total in 0..=8usize {
            for v in crate::gen::count_vectors_of(total, 4) {
                let c = ColorCounts::from_count_vector(&v);
                assert_eq!(
                    bin_feasible(&c, Capacity::Unbounded),
                    any_arrangement_valid(&c),
                    "{c}"
                );
            }
        }
    }

    #[test]
    fn exact_examples() {
        let c = counts(&[(W, 12), (B, 3), (Y, 2), (G, 2)]);
        assert_eq!(min_bins_exact(&c, Capacity::Bounded(4)), 6);
        assert_eq!(
            min_bins_exact(&counts(&[(W, 8), (B, 2), (Y, 2)]), Capacity::Unbounded),
            4
        );
        assert_eq!(min_bins_exact(&counts(&[(W, 1)]), Capacity::Bounded(1)), 1);
        assert_eq!(min_bins_exact(&ColorCounts::new(), Capacity::Bounded(3)), 0);
    }

    #[test]
    fn lower_bound_examples() {
        let c = counts(&[(W, 12), (B, 3), (Y, 2), (G, 2)]);
        assert_eq!(
            lower_bounds(&c, Capacity::Bounded(4)),
            LowerBounds {
                weight_lb: 5,
                discrepancy_lb: 5,
                per_color_lb: 6
            }
        );
        assert_eq!(
            lower_bounds(&ColorCounts::new(), Capacity::Bounded(3)),
            LowerBounds {
                weight_lb: 0,
                discrepancy_lb: 0,
                per_color_lb: 0
            }
        );
        assert_eq!(
            lower_bounds(&counts(&[(B, 5), (W, 3)]), Capacity::Bounded(100)),
            LowerBounds {
                weight_lb: 1,
                discrepancy_lb: 2,
                per_color_lb: 1
            }
        );
    }

    #[test]
    fn witness_is_valid_and_optimal() {
        let c = counts(&[(W, 12), (B, 3), (Y, 2), (G, 2)]);
        let p = min_packing_exact(&c, Capacity::Bounded(4));
        assert_eq!(p.bin_count(), 6);
        assert!(validate_packing(&Instance::new(c, Capacity::Bounded(4)), &p).valid);
    }

    #[test]
    fn a_separator_can_save_a_bin() {
        // The optimum is not monotone in the item multiset.
        let l3 = Capacity::Bounded(3);
        assert_eq!(min_bins_exact(&counts(&[(W, 2)]), l3), 2);
        assert_eq!(min_bins_exact(&counts(&[(W, 2), (B, 1)]), l3), 1);
    }

    fn small_counts(max_total: usize) -> impl Strategy<Value = ColorCounts> {
        prop::collection::vec(0usize..5, 0..4)
            .prop_filter("small", move |v| v.iter().sum::<usize>() <= max_total)
            .prop_map(|v| ColorCounts::from_count_vector(&v))
    }

    fn capacity() -> impl Strategy<Value = Capacity> {
        prop_oneof![
            (1usize..6).prop_map(Capacity::Bounded),
            Just(Capacity::Unbounded)
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn exact_matches_brute_force(c in small_counts(7), cap in capacity()) {
            prop_assert_eq!(min_bins_exact(&c, cap), brute_force_min_bins(&c, cap));
        }

        #[test]
        fn exact_respects_bounds_and_witness(c in small_counts(10), cap in capacity()) {
            let best = min_bins_exact(&c, cap);
            let lb = lower_bounds(&c, cap);
            prop_assert!(best >= lb.weight_lb && best >= lb.discrepancy_lb && best >= lb.per_color_lb);
            let p = min_packing_exact(&c, cap);
            prop_assert_eq!(p.bin_count(), best);
            prop_assert!(validate_packing(&Instance::new(c, cap), &p).valid);
        }

        #[test]
        fn one_more_item_costs_at_most_one_bin(c in small_counts(9), color in 0u32..4, cap in capacity()) {
            let mut bigger = c.clone();
            bigger.add(ColorId(color), 1);
            prop_assert!(min_bins_exact(&bigger, cap) <= min_bins_exact(&c, cap) + 1);
        }

        #[test]
        fn unbounded_optimum_is_discrepancy(c in small_counts(10)) {
            let s = color_stats(&c);
            let expected = if c.is_empty() { 0 } else { s.discrepancy.max(1) as usize };
            prop_assert_eq!(min_bins_exact(&c, Capacity::Unbounded), expected);
        }
    }
}
