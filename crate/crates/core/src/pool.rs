use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::model::{ColorCounts, ColorId};

/// Remaining items of a set of colors, handed out most-frequent first with
/// ties going to the smallest id.
#[derive(Debug, Clone)]
pub(crate) struct ColorPool {
    heap: BinaryHeap<(usize, Reverse<ColorId>)>,
    total: usize,
}

impl ColorPool {
    pub(crate) fn new(counts: &ColorCounts) -> Self {
        Self {
            heap: counts.iter().map(|(c, k)| (k, Reverse(c))).collect(),
            total: counts.total(),
        }
    }

    pub(crate) fn total(&self) -> usize {
        self.total
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Takes one item of the most frequent color other than `exclude`.
    pub(crate) fn take(&mut self, exclude: Option<ColorId>) -> Option<ColorId> {
        let first = self.heap.pop()?;
        let (count, Reverse(color)) = if Some(first.1 .0) == exclude {
            match self.heap.pop() {
                Some(second) => {
                    self.heap.push(first);
                    second
                }
                None => {
                    self.heap.push(first);
                    return None;
                }
            }
        } else {
            first
        };
        if count > 1 {
            self.heap.push((count - 1, Reverse(color)));
        }
        self.total -= 1;
        Some(color)
    }

    pub(crate) fn to_counts(&self) -> ColorCounts {
        ColorCounts::from_pairs(self.heap.iter().map(|&(k, Reverse(c))| (c, k)))
    }
}
