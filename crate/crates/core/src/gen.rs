//! Reproducible instance generation: seeded random corpora and exhaustive
//! enumeration of small instances.
//!
//! The random source is SplitMix64 (Steele, Lea and Flood), chosen because it
//! is fully specified by three constants and trivial to port:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! return z ^ (z >> 31)
//! ```
//!
//! Draw `index` of a corpus seeds its own generator with
//! `seed ^ (index * 0xD1B54A32D192ED03)` (wrapping), and bounded integers
//! are taken as the high 64 bits of `next() * bound`.

use std::collections::BTreeSet;

use crate::model::{Capacity, ColorCounts, Instance};

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish integer in `0..bound`; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub seed: u64,
    pub max_n: usize,
    pub max_colors: usize,
    pub l_min: usize,
    pub l_max: usize,
    /// Probability that an item is forced to color 0.
    pub skew: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            seed: 0,
            max_n: 60,
            max_colors: 6,
            l_min: 1,
            l_max: 10,
            skew: 0.0,
        }
    }
}

impl GenParams {
    pub fn check(&self) -> Result<(), String> {
        if self.max_colors == 0 {
            return Err("max_colors must be at least 1".into());
        }
        if self.l_min == 0 || self.l_min > self.l_max {
            return Err(format!(
                "need 1 <= l_min <= l_max, got {}..{}",
                self.l_min, self.l_max
            ));
        }
        if !(0.0..=1.0).contains(&self.skew) {
            return Err(format!("skew must lie in [0, 1], got {}", self.skew));
        }
        Ok(())
    }
}

fn draw_rng(seed: u64, index: u64) -> SplitMix64 {
    SplitMix64::new(seed ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

fn fill_counts(rng: &mut SplitMix64, n: usize, colors: usize, skew: f64) -> ColorCounts {
    let mut tally = vec![0usize; colors];
    for _ in 0..n {
        let c = if skew > 0.0 && rng.unit() < skew {
            0
        } else {
            rng.below(colors as u64) as usize
        };
        tally[c] += 1;
    }
    ColorCounts::from_count_vector(&tally)
}

/// Draw `index` of the corpus described by `params`.
pub fn random_instance(params: &GenParams, index: u64) -> Instance {
    let mut rng = draw_rng(params.seed, index);
    let n = rng.below(params.max_n as u64 + 1) as usize;
    let colors = 1 + rng.below(params.max_colors as u64) as usize;
    let l = params.l_min + rng.below((params.l_max - params.l_min) as u64 + 1) as usize;
    let counts = fill_counts(&mut rng, n, colors, params.skew);
    Instance::new(counts, Capacity::Bounded(l))
}

/// Exactly `n` items over `colors` colors, for timing runs.
pub fn random_counts_of_size(
    seed: u64,
    index: u64,
    n: usize,
    colors: usize,
    skew: f64,
) -> ColorCounts {
    let mut rng = draw_rng(seed, index);
    fill_counts(&mut rng, n, colors.max(1), skew)
}

/// Non-increasing vectors of positive parts summing to `total` with at most
/// `max_parts` parts, in reverse lexicographic order.
pub fn count_vectors_of(total: usize, max_parts: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, cap: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        if parts == 0 {
            return;
        }
        for k in (1..=cap.min(left)).rev() {
            cur.push(k);
            go(left - k, k, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, max_parts, &mut Vec::new(), &mut out);
    out
}

/// Every canonical count vector with total at most `max_n`, by increasing total.
pub fn count_vectors(max_n: usize, max_colors: usize) -> Vec<Vec<usize>> {
    (0..=max_n)
        .flat_map(|total| count_vectors_of(total, max_colors))
        .collect()
}

/// Every canonical instance with at most `max_n` items and `max_colors`
/// colors, for each capacity in `l_values`. Color `i` of a vector is
/// `ColorId(i)`, so the most frequent color is always `W`.
pub fn enumerate_instances(
    max_n: usize,
    max_colors: usize,
    l_values: &BTreeSet<usize>,
) -> impl Iterator<Item = Instance> + '_ {
    enumerate_with_capacities(
        max_n,
        max_colors,
        l_values.iter().map(|&l| Capacity::Bounded(l)).collect(),
    )
}

/// Like [`enumerate_instances`] but over arbitrary capacities, including
/// [`Capacity::Unbounded`].
pub fn enumerate_with_capacities(
    max_n: usize,
    max_colors: usize,
    capacities: Vec<Capacity>,
) -> impl Iterator<Item = Instance> {
    let vectors = count_vectors(max_n, max_colors);
    vectors.into_iter().flat_map(move |v| {
        let counts = ColorCounts::from_count_vector(&v);
        capacities
            .clone()
            .into_iter()
            .map(move |cap| Instance::new(counts.clone(), cap))
    })
}
