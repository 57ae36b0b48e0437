//! Colored bin packing with reordering allowed.
//!
//! Items carry a color; no two neighbouring items in a bin may share a color.
//! [`zero_weight`] packs weightless items (only the color rule binds),
//! [`unit_weight`] packs unit items into bins of capacity `L`. [`oracle`]
//! computes exact optima on small instances, independently of both solvers,
//! and [`gen`] produces reproducible test corpora.

pub mod gen;
pub mod model;
pub mod oracle;
mod pool;
pub mod unit_weight;
pub mod zero_weight;

pub use model::{
    color_stats, parse_instance, validate_packing, BinContent, Capacity, ColorCounts, ColorId,
    ColorStats, Instance, Packing, ParseError, ValidationReport, Violation, ViolationKind,
};
pub use oracle::{bin_feasible, lower_bounds, min_bins_exact, min_packing_exact, LowerBounds};
pub use unit_weight::{unit_weight_pack, ContractError};
pub use zero_weight::zero_weight_pack;

/// Packs an instance with the solver matching its capacity.
pub fn solve(instance: &Instance) -> Packing {
    match instance.capacity {
        Capacity::Unbounded => zero_weight_pack(&instance.counts),
        Capacity::Bounded(l) => {
            unit_weight_pack(&instance.counts, l).expect("bounded capacities are positive")
        }
    }
}
