use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::Args;
use rayon::prelude::*;
use thiserror::Error;

use chromapack_core::gen::{
    enumerate_with_capacities, random_counts_of_size, random_instance, GenParams,
};
use chromapack_core::{
    color_stats, lower_bounds, min_bins_exact, parse_instance, unit_weight_pack, validate_packing,
    zero_weight_pack, Capacity, Instance, Packing,
};

use crate::record::{CompareRecord, BENCH_HEADER, COMPARE_HEADER};
use crate::{Algorithm, Format, Shared};

/// Caps the worker count of `compare`.
pub const THREADS_ENV: &str = "CHROMAPACK_THREADS";

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0:#}")]
    Input(anyhow::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("optimality mismatch: {0}")]
    Mismatch(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Mismatch(_) => 3,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn parse_capacity(text: &str) -> Result<Capacity, String> {
    match text.trim() {
        "inf" | "unbounded" => Ok(Capacity::Unbounded),
        t => t
            .parse::<usize>()
            .ok()
            .and_then(Capacity::bounded)
            .ok_or_else(|| format!("`{t}` is not a positive capacity or `inf`")),
    }
}

/// The instance actually solved and the solver used for it.
fn resolve(
    instance: &Instance,
    algorithm: Algorithm,
    ignore_capacity: bool,
) -> anyhow::Result<(Instance, &'static str)> {
    match (algorithm, instance.capacity) {
        (Algorithm::Auto, Capacity::Unbounded) | (Algorithm::Zero, Capacity::Unbounded) => {
            Ok((instance.clone(), "zero"))
        }
        (Algorithm::Auto, Capacity::Bounded(_)) | (Algorithm::Unit, Capacity::Bounded(_)) => {
            Ok((instance.clone(), "unit"))
        }
        (Algorithm::Zero, Capacity::Bounded(l)) => {
            if ignore_capacity {
                Ok((
                    Instance::new(instance.counts.clone(), Capacity::Unbounded),
                    "zero",
                ))
            } else {
                bail!("--algorithm zero conflicts with capacity L={l} (pass --ignore-capacity to drop it)")
            }
        }
        (Algorithm::Unit, Capacity::Unbounded) => {
            bail!("--algorithm unit needs a capacity prefix such as `L=4;`")
        }
    }
}

fn run(instance: &Instance, solver: &str) -> Packing {
    match (solver, instance.capacity) {
        ("unit", Capacity::Bounded(l)) => {
            unit_weight_pack(&instance.counts, l).expect("positive capacity")
        }
        _ => zero_weight_pack(&instance.counts),
    }
}

#[derive(Debug, Args)]
pub struct PackArgs {
    /// Instance text, e.g. `L=4;W:12,B:3,Y:2,G:2` or `WWWWBBYY`.
    instance: String,
    #[arg(long, value_enum, default_value_t = Algorithm::Auto)]
    algorithm: Algorithm,
    /// With `--algorithm zero`, solve a bounded instance as if unbounded.
    #[arg(long)]
    ignore_capacity: bool,
}

pub fn pack(shared: &Shared, args: &PackArgs, out: &mut dyn Write) -> Outcome {
    let instance = parse_instance(&args.instance).context("cannot parse instance")?;
    let (instance, solver) = resolve(&instance, args.algorithm, args.ignore_capacity)?;
    let packing = run(&instance, solver);
    let report = validate_packing(&instance, &packing);
    if !report.valid {
        let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        return Err(Failure::Invalid(format!(
            "solver produced an invalid packing for {instance}: {}",
            lines.join("; ")
        )));
    }
    match shared.format {
        Format::Text => writeln!(out, "{packing}")?,
        Format::Json => writeln!(out, "{}", packing.to_json())?,
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    instance: String,
    /// Packing file; `-` reads stdin.
    packing_file: PathBuf,
}

fn read_source(path: &PathBuf) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
    }
}

fn parse_packing(text: &str) -> anyhow::Result<Packing> {
    if text.trim_start().starts_with('{') {
        Packing::from_json(text).context("malformed packing JSON")
    } else {
        Packing::parse_text(text).context("malformed packing text")
    }
}

pub fn verify(shared: &Shared, args: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    let instance = parse_instance(&args.instance).context("cannot parse instance")?;
    let packing = parse_packing(&read_source(&args.packing_file)?)?;
    let report = validate_packing(&instance, &packing);
    match shared.format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        )?,
        Format::Text if report.valid => writeln!(out, "OK")?,
        Format::Text => {
            for v in &report.violations {
                writeln!(out, "{v}")?;
            }
        }
    }
    if report.valid {
        Ok(())
    } else {
        Err(Failure::Invalid(format!(
            "{} violation(s) in {}",
            report.violations.len(),
            args.packing_file.display()
        )))
    }
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Corpus file with one instance per line; `-` reads stdin.
    #[arg(required_unless_present = "exhaustive", conflicts_with = "exhaustive")]
    corpus: Option<PathBuf>,
    /// Every canonical instance up to MAX_N items and MAX_COLORS colors for
    /// each capacity in the comma-separated list (`inf` for unbounded).
    #[arg(long, num_args = 3, value_names = ["MAX_N", "MAX_COLORS", "L_LIST"])]
    exhaustive: Option<Vec<String>>,
    /// Also compute the exact optimum and fail with exit code 3 on any gap.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value_t = Algorithm::Auto)]
    algorithm: Algorithm,
}

fn load_corpus(args: &CompareArgs) -> anyhow::Result<Vec<Instance>> {
    if let Some(spec) = &args.exhaustive {
        let max_n: usize = spec[0]
            .parse()
            .with_context(|| format!("bad MAX_N `{}`", spec[0]))?;
        let max_colors: usize = spec[1]
            .parse()
            .with_context(|| format!("bad MAX_COLORS `{}`", spec[1]))?;
        let capacities = spec[2]
            .split(',')
            .map(parse_capacity)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| anyhow!(e))?;
        return Ok(enumerate_with_capacities(max_n, max_colors, capacities).collect());
    }
    let path = args.corpus.as_ref().expect("clap requires a corpus");
    let text = read_source(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty() && !line.trim_start().starts_with('#'))
        .map(|(i, line)| {
            parse_instance(line)
                .with_context(|| format!("{}:{}: cannot parse instance", path.display(), i + 1))
        })
        .collect()
}

fn thread_pool() -> anyhow::Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let n: usize =
            value.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
                anyhow!("{THREADS_ENV} must be a positive integer, got `{value}`")
            })?;
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

struct Evaluated {
    record: CompareRecord,
    instance: Instance,
    violations: Vec<String>,
}

fn evaluate(
    id: usize,
    original: &Instance,
    algorithm: Algorithm,
    oracle: bool,
) -> anyhow::Result<Evaluated> {
    let (instance, solver) = resolve(original, algorithm, false)
        .with_context(|| format!("instance {id} ({original})"))?;
    let start = Instant::now();
    let packing = run(&instance, solver);
    let elapsed_ns = start.elapsed().as_nanos();
    let stats = color_stats(&instance.counts);
    let lb = lower_bounds(&instance.counts, instance.capacity);
    let record = CompareRecord {
        instance_id: id,
        n: instance.n(),
        colors: instance.counts.distinct(),
        capacity: instance.capacity,
        discrepancy: stats.discrepancy,
        algorithm: solver,
        bins: packing.bin_count(),
        oracle_bins: oracle.then(|| min_bins_exact(&instance.counts, instance.capacity)),
        lb_weight: lb.weight_lb,
        lb_disc: lb.discrepancy_lb,
        lb_percolor: lb.per_color_lb,
        elapsed_ns,
    };
    let violations = validate_packing(&instance, &packing)
        .violations
        .iter()
        .map(ToString::to_string)
        .collect();
    Ok(Evaluated {
        record,
        instance,
        violations,
    })
}

pub fn compare(args: &CompareArgs, out: &mut dyn Write) -> Outcome {
    let corpus = load_corpus(args)?;
    let pool = thread_pool()?;
    // par_iter + collect keeps input order.
    let evaluated: Vec<Evaluated> = pool.install(|| {
        corpus
            .par_iter()
            .enumerate()
            .map(|(id, inst)| evaluate(id, inst, args.algorithm, args.oracle))
            .collect::<anyhow::Result<_>>()
    })?;

    writeln!(out, "{COMPARE_HEADER}")?;
    for e in &evaluated {
        writeln!(out, "{}", e.record)?;
    }

    check_records(&evaluated)
}

fn check_records(evaluated: &[Evaluated]) -> Outcome {
    for e in evaluated {
        let r = &e.record;
        if !e.violations.is_empty() {
            return Err(Failure::Invalid(format!(
                "instance {} ({}): {}",
                r.instance_id,
                e.instance,
                e.violations.join("; ")
            )));
        }
        if r.bins < r.max_lower_bound() || r.oracle_bins.is_some_and(|o| o < r.max_lower_bound()) {
            return Err(Failure::Invalid(format!(
                "instance {} ({}): lower bound exceeds a bin count",
                r.instance_id, e.instance
            )));
        }
    }
    if let Some(e) = evaluated
        .iter()
        .find(|e| e.record.oracle_bins.is_some_and(|o| o != e.record.bins))
    {
        return Err(Failure::Mismatch(format!(
            "instance {} ({}): {} bins, optimum {}",
            e.record.instance_id,
            e.instance,
            e.record.bins,
            e.record.oracle_bins.unwrap()
        )));
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 100)]
    count: u64,
    #[arg(long, default_value_t = 60)]
    max_n: usize,
    #[arg(long, default_value_t = 6)]
    max_colors: usize,
    #[arg(long, default_value_t = 1)]
    l_min: usize,
    #[arg(long, default_value_t = 10)]
    l_max: usize,
    /// Probability in [0, 1] that an item is forced to the first color.
    #[arg(long, default_value_t = 0.0)]
    skew: f64,
}

pub fn gen(shared: &Shared, args: &GenArgs, out: &mut dyn Write) -> Outcome {
    let params = GenParams {
        seed: shared.seed,
        max_n: args.max_n,
        max_colors: args.max_colors,
        l_min: args.l_min,
        l_max: args.l_max,
        skew: args.skew,
    };
    params.check().map_err(|e| anyhow!(e))?;
    for i in 0..args.count {
        writeln!(out, "{}", random_instance(&params, i))?;
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated item counts.
    #[arg(long, value_delimiter = ',', default_values_t = [1_000usize, 10_000, 100_000])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    colors: usize,
    /// Bin capacity, or `inf` for zero-weight items.
    #[arg(long, value_parser = parse_capacity, default_value = "10")]
    capacity: Capacity,
    #[arg(long, value_enum, default_value_t = Algorithm::Auto)]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 0.0)]
    skew: f64,
    /// Runs per size; the fastest is reported.
    #[arg(long, default_value_t = 3)]
    repeats: usize,
}

/// Expect roughly linear growth of `elapsed_ns` with `n`.
pub fn bench(shared: &Shared, args: &BenchArgs, out: &mut dyn Write) -> Outcome {
    if !(0.0..=1.0).contains(&args.skew) {
        return Err(anyhow!("--skew must lie in [0, 1]").into());
    }
    let probe = Instance::new(Default::default(), args.capacity);
    resolve(&probe, args.algorithm, false)?;
    let mut sizes = args.sizes.clone();
    sizes.sort_unstable();
    writeln!(out, "{BENCH_HEADER}")?;
    for (i, &n) in sizes.iter().enumerate() {
        let counts = random_counts_of_size(shared.seed, i as u64, n, args.colors, args.skew);
        let (instance, solver) =
            resolve(&Instance::new(counts, args.capacity), args.algorithm, false)?;
        let mut best = u128::MAX;
        let mut bins = 0;
        for _ in 0..args.repeats.max(1) {
            let start = Instant::now();
            let packing = run(&instance, solver);
            best = best.min(start.elapsed().as_nanos());
            bins = packing.bin_count();
        }
        writeln!(
            out,
            "{n},{},{},{solver},{bins},{best}",
            instance.counts.distinct(),
            instance.capacity
        )?;
    }
    Ok(())
}
