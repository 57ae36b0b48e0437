//! Acceptance criteria. Each test prints one PASS/FAIL line.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use chromapack_core::gen::{
    enumerate_instances, enumerate_with_capacities, random_counts_of_size, random_instance,
    GenParams,
};
use chromapack_core::model::{
    color_stats, validate_packing, Capacity, ColorCounts, Instance, Packing,
};
use chromapack_core::oracle::{lower_bounds, min_bins_exact, min_packing_exact};
use chromapack_core::unit_weight::{
    condense_traced, initial_alternating_pack, odd_case_threshold, unit_weight_pack, StopRule,
};
use chromapack_core::zero_weight::zero_weight_pack;
use chromapack_core::{parse_instance, BinContent};

fn report(criterion: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("[PASS] {criterion}");
    } else {
        println!("[FAIL] {criterion}: {} failure(s)", failures.len());
        for f in failures.iter().take(10) {
            println!("       {f}");
        }
        panic!("{criterion} failed: {}", failures[0]);
    }
}

fn counts(text: &str) -> ColorCounts {
    parse_instance(text).unwrap().counts
}

fn check_valid(inst: &Instance, packing: &Packing, failures: &mut Vec<String>) {
    let r = validate_packing(inst, packing);
    if !r.valid {
        failures.push(format!("{inst}: {packing} invalid: {:?}", r.violations));
    }
}

#[test]
fn criterion_1_worked_examples() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let unit = [
        ("W:4,B:3,Y:2", 3, 3),
        ("W:12,B:3,Y:2,G:2", 4, 6),
        ("W:8,B:3,Y:2,G:2", 5, 3),
        ("W:15,B:3,Y:2,G:2", 5, 8),
    ];
    for (text, l, expected) in unit {
        let inst = Instance::new(counts(text), Capacity::Bounded(l));
        let p = unit_weight_pack(&inst.counts, l).unwrap();
        if p.bin_count() != expected {
            failures.push(format!(
                "{inst}: {} bins, expected {expected}",
                p.bin_count()
            ));
        }
        check_valid(&inst, &p, &mut failures);
    }
    for (text, expected) in [("W:8,B:2,Y:2", 4), ("B:5,W:3", 2)] {
        let inst = Instance::new(counts(text), Capacity::Unbounded);
        let p = zero_weight_pack(&inst.counts);
        if p.bin_count() != expected {
            failures.push(format!(
                "{inst}: {} bins, expected {expected}",
                p.bin_count()
            ));
        }
        check_valid(&inst, &p, &mut failures);
    }
    if start.elapsed() >= Duration::from_secs(1) {
        failures.push(format!("took {:?}", start.elapsed()));
    }
    report(
        "1 worked examples reproduce exact bin counts (< 1 s)",
        &failures,
    );
}

fn mismatch(inst: &Instance, got: &Packing) -> String {
    let witness = min_packing_exact(&inst.counts, inst.capacity);
    format!(
        "{inst}: solver {} bins [{got}] vs optimum {} [{witness}]",
        got.bin_count(),
        witness.bin_count()
    )
}

#[test]
fn criterion_2_oracle_sweep() {
    let mut failures = Vec::new();
    let ls: BTreeSet<usize> = (1..=6).collect();
    let mut checked = 0;
    // Enumeration runs by increasing n, so the first mismatch is a smallest one.
    for inst in enumerate_instances(8, 3, &ls) {
        let l = inst.capacity.limit().unwrap();
        let p = unit_weight_pack(&inst.counts, l).unwrap();
        if p.bin_count() != min_bins_exact(&inst.counts, inst.capacity) {
            failures.push(mismatch(&inst, &p));
        }
        checked += 1;
    }
    for inst in enumerate_with_capacities(10, 4, vec![Capacity::Unbounded]) {
        let p = zero_weight_pack(&inst.counts);
        if p.bin_count() != min_bins_exact(&inst.counts, Capacity::Unbounded) {
            failures.push(mismatch(&inst, &p));
        }
        checked += 1;
    }
    println!("       {checked} instances checked against the exact optimum");
    report(
        "2 exhaustive oracle equality (unit n<=8 c<=3 L<=6; zero n<=10 c<=4)",
        &failures,
    );
}

fn property_corpus() -> Vec<Instance> {
    let params = GenParams {
        seed: 0x5EED,
        max_n: 60,
        max_colors: 6,
        l_min: 1,
        l_max: 10,
        skew: 0.0,
    };
    let skewed = GenParams {
        seed: 0x5EED + 1,
        skew: 0.6,
        ..params.clone()
    };
    (0..5_000)
        .map(|i| random_instance(&params, i))
        .chain((0..5_000).map(|i| random_instance(&skewed, i)))
        .collect()
}

#[test]
fn criterion_3_property_suite() {
    let mut failures = Vec::new();
    for inst in property_corpus() {
        let l = inst.capacity.limit().unwrap();
        let p = unit_weight_pack(&inst.counts, l).unwrap();
        check_valid(&inst, &p, &mut failures);
        let stats = color_stats(&inst.counts);
        if stats.discrepancy <= 0 && p.bin_count() != inst.n().div_ceil(l) {
            failures.push(format!(
                "{inst}: D<=0 but {} bins != ceil(n/L)",
                p.bin_count()
            ));
        }
        if stats.discrepancy <= 0 || l == 1 {
            continue;
        }
        let max_color = stats.max_color.unwrap();
        let d = stats.discrepancy as usize;
        if l % 2 == 0 {
            let (initial, rest) =
                initial_alternating_pack(&inst.counts, l, StopRule::OthersExhausted);
            let mut bins = initial.into_bins();
            bins.extend((0..rest.get(max_color)).map(|_| BinContent::new(vec![max_color])));
            let initial = Packing::new(bins);
            let trace = condense_traced(&initial, max_color, l).unwrap();
            if trace.packing.bin_count() > initial.bin_count() {
                failures.push(format!("{inst}: condense grew the packing"));
            }
            if trace.f_bins_left > 0 && trace.m_bins_left > 0 {
                failures.push(format!("{inst}: condense stopped with F- and M-bins left"));
            }
            if trace.packing != p {
                failures.push(format!("{inst}: condense trace disagrees with solver"));
            }
        } else if d > odd_case_threshold(stats.other_count, l)
            && p.bins().iter().any(|b| b.top() != Some(max_color))
        {
            failures.push(format!(
                "{inst}: over-threshold output not all Max-topped: {p}"
            ));
        }
    }
    report("3 property suite over 10,000 seeded instances", &failures);
}

#[test]
fn criterion_4_lower_bounds() {
    let mut failures = Vec::new();
    let ls: BTreeSet<usize> = (1..=6).collect();
    let mut check = |inst: &Instance, bins: usize| {
        let lb = lower_bounds(&inst.counts, inst.capacity);
        if bins < lb.weight_lb || bins < lb.discrepancy_lb || bins < lb.per_color_lb {
            failures.push(format!("{inst}: {bins} bins below {lb:?}"));
        }
    };
    for inst in enumerate_instances(8, 3, &ls).chain(property_corpus()) {
        let l = inst.capacity.limit().unwrap();
        check(
            &inst,
            unit_weight_pack(&inst.counts, l).unwrap().bin_count(),
        );
    }
    for inst in enumerate_with_capacities(10, 4, vec![Capacity::Unbounded]) {
        check(&inst, zero_weight_pack(&inst.counts).bin_count());
    }
    report("4 solver bin counts respect every lower bound", &failures);
}

fn best_time(counts: &ColorCounts, l: usize, repeats: usize) -> (Duration, Packing) {
    let mut best = Duration::MAX;
    let mut last = Packing::default();
    for _ in 0..repeats {
        let t = Instant::now();
        last = unit_weight_pack(counts, l).unwrap();
        best = best.min(t.elapsed());
    }
    (best, last)
}

#[test]
fn criterion_5_performance_smoke() {
    let mut failures = Vec::new();
    let big = random_counts_of_size(42, 0, 1_000_000, 4, 0.0);
    let small = random_counts_of_size(42, 1, 100_000, 4, 0.0);
    // Skewed inputs exercise the alternating and condense paths.
    let big_skew = random_counts_of_size(42, 2, 1_000_000, 4, 0.7);
    let small_skew = random_counts_of_size(42, 3, 100_000, 4, 0.7);
    for (label, big, small) in [
        ("balanced", &big, &small),
        ("skewed", &big_skew, &small_skew),
    ] {
        let (t_big, p) = best_time(big, 10, 3);
        let (t_small, _) = best_time(small, 10, 5);
        let ratio = t_big.as_secs_f64() / t_small.as_secs_f64().max(1e-9);
        println!("       {label}: n=1e5 {t_small:?}, n=1e6 {t_big:?}, ratio {ratio:.1}");
        if t_big >= Duration::from_secs(1) {
            failures.push(format!("{label}: n=1e6 took {t_big:?}"));
        }
        if ratio > 20.0 {
            failures.push(format!("{label}: 1e6/1e5 time ratio {ratio:.1} > 20"));
        }
        if p.item_counts() != *big {
            failures.push(format!("{label}: items not conserved"));
        }
    }
    report(
        "5 n=1e6, 4 colors, L=10 in < 1 s; 1e6/1e5 ratio <= 20",
        &failures,
    );
}
