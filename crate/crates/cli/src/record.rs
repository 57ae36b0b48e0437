use std::fmt;

use chromapack_core::Capacity;

pub const COMPARE_HEADER: &str =
    "instance_id,n,colors,L,D,algorithm,bins,oracle_bins,lb_weight,lb_disc,lb_percolor,elapsed_ns";

/// One CSV row of `compare`. Columns are in field order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareRecord {
    pub instance_id: usize,
    pub n: usize,
    pub colors: usize,
    pub capacity: Capacity,
    pub discrepancy: i64,
    pub algorithm: &'static str,
    pub bins: usize,
    pub oracle_bins: Option<usize>,
    pub lb_weight: usize,
    pub lb_disc: usize,
    pub lb_percolor: usize,
    pub elapsed_ns: u128,
}

impl CompareRecord {
    pub fn max_lower_bound(&self) -> usize {
        self.lb_weight.max(self.lb_disc).max(self.lb_percolor)
    }
}

impl fmt::Display for CompareRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let oracle = self.oracle_bins.map(|b| b.to_string()).unwrap_or_default();
        write!(
            f,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.instance_id,
            self.n,
            self.colors,
            self.capacity,
            self.discrepancy,
            self.algorithm,
            self.bins,
            oracle,
            self.lb_weight,
            self.lb_disc,
            self.lb_percolor,
            self.elapsed_ns
        )
    }
}

pub const BENCH_HEADER: &str = "n,colors,L,algorithm,bins,elapsed_ns";
