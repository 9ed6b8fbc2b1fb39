mod output;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nrs_core::bench::{
    binary_sweep, density_histogram, dynamic_range, golden_zone_count, throughput, unary_sweep, Convention,
    PreparedFormat, ReferenceMode, Subsample, SweepOptions, SweepSummary, BINARY_WIDTH_CAP,
};
use nrs_core::exact::{ArithOp, ExactRational};
use nrs_core::float::RoundingMode;
use nrs_core::formats::{BitPattern, Codec, FormatError, Num, ValueClass, DEFAULT_WIDTH_CAP};
use nrs_core::litbench::{
    table4_row, table5_row, BenchRow, Oracle, References, RumpInput, TABLE4_SYSTEMS, TABLE5_SYSTEMS,
};
use nrs_core::math::UnaryFn;
use nrs_core::par::{self, Exec};

use output::{trunc3, Field, OutputFormat, Table};

/// Width accepted by every verb once `--allow-large` is given.
const LARGE_CAP: u32 = 32;

#[derive(Parser, Debug)]
#[command(name = "nrs", version, about = "Number representation systems: decode, convert and measure accuracy")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format of the result table.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write the result table here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: NRS_WORKERS, else all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Run sweeps on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Lift the width cap (16 bits for enumerations, 12 for binary sweeps).
    #[arg(long, global = true)]
    allow_large: bool,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Field breakdown and exact value of a bit pattern.
    Decode { desc: String, pattern: String },
    /// Bit pattern of a decimal, `p/q` or special value (inf, nan).
    Encode {
        desc: String,
        #[arg(allow_hyphen_values = true)]
        value: String,
        /// Override the descriptor's rounding mode.
        #[arg(long)]
        rounding: Option<String>,
    },
    /// Re-encode a pattern of one system in another.
    Convert { from: String, pattern: String, to: String },
    /// Every pattern with its value.
    Enumerate { desc: String },
    /// Smallest and three largest magnitudes, and log10 of their ratio.
    DynamicRange {
        #[arg(required = true)]
        descs: Vec<String>,
    },
    /// Distinct magnitudes per decade.
    Density { desc: String },
    /// Distinct magnitudes strictly inside (lo, hi).
    GoldenZone {
        #[arg(required = true)]
        descs: Vec<String>,
        #[arg(long, default_value = "1e-3")]
        lo: String,
        #[arg(long, default_value = "1e3")]
        hi: String,
    },
    /// Distribution of decimal accuracy of unary functions.
    UnaryCdf {
        #[arg(required = true)]
        descs: Vec<String>,
        /// sqrt, cbrt, rootN, inverse, exp, ln, sin, powY (default: all six of the sweep set).
        #[arg(long = "fun", value_delimiter = ',')]
        funs: Vec<String>,
        #[arg(long, value_enum, default_value_t = Reference::Taylor30)]
        reference: Reference,
        /// Spacing of the digit grid from 0 to 16.
        #[arg(long, default_value_t = 0.5)]
        step: f64,
    },
    /// Exhaustive (or sampled) accuracy over all operand pairs.
    BinarySweep {
        #[arg(required = true)]
        descs: Vec<String>,
        #[arg(long = "op", value_delimiter = ',', default_values = ["add", "mul", "div"])]
        ops: Vec<String>,
        #[arg(long, value_enum, default_value_t = Conv::Strict)]
        convention: Conv,
        /// Directory for one PGM accuracy map per descriptor and op.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Evaluate this many random pairs instead of all of them.
        #[arg(long)]
        subsample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Literature benchmarks on 32-bit systems.
    Litbench {
        /// Which table: 4 (recurrences, Rump, quadratic, linear system) or 5 (geometry, powers, constants).
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(4..=5))]
        table: u8,
        /// Systems to evaluate; `rational` is the exact oracle.
        #[arg(long = "system")]
        systems: Vec<String>,
        /// Rump's polynomial with 333.74 and x = 77517.
        #[arg(long)]
        rump_variant: bool,
    },
    /// Operations per second on random operands.
    Throughput {
        #[arg(required = true)]
        descs: Vec<String>,
        #[arg(long = "op", value_delimiter = ',', default_values = ["add"])]
        ops: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        millis: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Reference {
    Taylor30,
    Precise,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Conv {
    Strict,
    Lenient,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Refused(String),
    Io { path: String, err: io::Error },
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::WidthOverCap { .. } => Failure::Refused(format!("{e} (use --allow-large)")),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(Table, String), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn io_failure(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |err| Failure::Io { path: path.display().to_string(), err }
}

fn codecs(descs: &[String]) -> Result<Vec<Codec>, Failure> {
    descs.iter().map(|d| Codec::parse(d).map_err(Failure::from)).collect()
}

fn ops(names: &[String]) -> Result<Vec<ArithOp>, Failure> {
    names.iter().map(|n| n.parse::<ArithOp>().map_err(usage)).collect()
}

fn class_name(n: &Num) -> &'static str {
    match n.class() {
        ValueClass::Finite => "finite",
        ValueClass::Zero { .. } => "zero",
        ValueClass::Inf { .. } => "infinite",
        ValueClass::QNaN => "qnan",
        ValueClass::SNaN => "snan",
        ValueClass::NaR => "nar",
        ValueClass::NR => "nr",
    }
}

fn exact_text(n: &Num) -> String {
    n.to_rational().map(|r| r.to_string()).unwrap_or_else(|| n.to_string())
}

fn field_bits(v: u64, width: u32) -> String {
    if width == 0 {
        String::new()
    } else {
        format!("{v:0w$b}", w = width as usize)
    }
}

fn decode(desc: &str, pattern: &str) -> Outcome {
    let codec = Codec::parse(desc)?;
    let p = BitPattern::parse(pattern, codec.width())?;
    let d = codec.decode_full(p);
    let num = codec.decode(p.bits);
    let f = &d.fields;
    let mut t = Table::new(&["field", "value"]);
    let mut row = |k: &str, v: Field| t.push(vec![k.into(), v]);
    row("descriptor", codec.desc().to_string().into());
    row("pattern", p.to_hex().into());
    row("binary", p.to_binary().into());
    row("class", class_name(&num).into());
    row("sign", (f.sign as u64).into());
    if let Some(k) = f.size_field {
        row("size_field", k.into());
    }
    if let Some(s) = f.exponent_sign {
        row("exponent_sign", (s as u64).into());
    }
    if let Some(es) = f.exponent_size {
        row("exponent_size", es.into());
    }
    if let Some((bits, n)) = f.exponent_bits {
        row("exponent_bits", field_bits(bits, n).into());
    }
    if let Some(b) = f.binary_exponent {
        row("binary_exponent", b.into());
    }
    if let Some(e) = f.exponent {
        row("exponent", e.into());
    }
    row("fraction_size", (f.fraction_size as u64).into());
    row("fraction", field_bits(f.fraction, f.fraction_size).into());
    row("exact", exact_text(&num).into());
    row("value", num.to_string().into());
    let summary = format!("{} {} = {}", codec.desc(), p.to_hex(), num);
    Ok((t, summary))
}

fn parse_value(text: &str) -> Result<Result<ExactRational, Num>, Failure> {
    let t = text.trim();
    let special = match t.to_ascii_lowercase().as_str() {
        "inf" | "+inf" => Some(Num::Inf { neg: false }),
        "-inf" => Some(Num::Inf { neg: true }),
        "nan" | "qnan" => Some(Num::QNaN),
        "snan" => Some(Num::SNaN),
        "nar" => Some(Num::NaR),
        "nr" => Some(Num::NR),
        _ => None,
    };
    if let Some(s) = special {
        return Ok(Err(s));
    }
    let r: ExactRational = t.parse().map_err(|_| usage(format!("cannot parse value {text:?}")))?;
    if r.is_zero() {
        return Ok(Err(Num::Zero { neg: t.starts_with('-') }));
    }
    Ok(Ok(r))
}

fn encode(desc: &str, value: &str, rounding: Option<&str>) -> Outcome {
    let codec = Codec::parse(desc)?;
    let mode = match rounding {
        Some(r) => r.parse::<RoundingMode>().map_err(usage)?,
        None => codec.rounding(),
    };
    let bits = match parse_value(value)? {
        Ok(r) => codec.encode_rational_with(&r, mode),
        Err(special) => codec.encode(&special),
    };
    let p = codec.pattern(bits);
    let num = codec.decode(bits);
    let mut t = Table::new(&["descriptor", "input", "pattern", "binary", "class", "exact", "value"]);
    t.push(vec![
        codec.desc().to_string().into(),
        value.into(),
        p.to_hex().into(),
        p.to_binary().into(),
        class_name(&num).into(),
        exact_text(&num).into(),
        num.to_string().into(),
    ]);
    let summary = format!("{} {} -> {} = {}", codec.desc(), value, p.to_hex(), num);
    Ok((t, summary))
}

fn convert(from: &str, pattern: &str, to: &str) -> Outcome {
    let src = Codec::parse(from)?;
    let dst = Codec::parse(to)?;
    let p = BitPattern::parse(pattern, src.width())?;
    let x = src.decode(p.bits);
    let q = dst.pattern(dst.encode(&x));
    let y = dst.decode(q.bits);
    let mut t = Table::new(&["from", "pattern", "value", "to", "result", "result_value"]);
    t.push(vec![
        src.desc().to_string().into(),
        p.to_hex().into(),
        x.to_string().into(),
        dst.desc().to_string().into(),
        q.to_hex().into(),
        y.to_string().into(),
    ]);
    let summary = format!("{} {} ({}) -> {} {} ({})", src.desc(), p.to_hex(), x, dst.desc(), q.to_hex(), y);
    Ok((t, summary))
}

fn enumerate(desc: &str, cap: u32) -> Outcome {
    let codec = Codec::parse(desc)?;
    let mut t = Table::new(&["pattern", "binary", "class", "value"]);
    let mut counts = [0u64; 4];
    for (bits, n) in codec.enumerate(cap)? {
        let p = codec.pattern(bits);
        let k = match n.class() {
            ValueClass::Finite => 0,
            ValueClass::Zero { .. } => 1,
            ValueClass::Inf { .. } => 2,
            _ => 3,
        };
        counts[k] += 1;
        t.push(vec![p.to_hex().into(), p.to_binary().into(), class_name(&n).into(), n.to_string().into()]);
    }
    let summary = format!(
        "{}: {} patterns, {} finite nonzero, {} zero, {} infinite, {} error",
        codec.desc(),
        t.rows.len(),
        counts[0],
        counts[1],
        counts[2],
        counts[3]
    );
    Ok((t, summary))
}

fn dynamic_ranges(descs: &[String], cap: u32) -> Outcome {
    let cs = codecs(descs)?;
    let mut t = Table::new(&["descriptor", "min_abs", "max1", "max2", "max3", "dr"]);
    for c in &cs {
        let r = dynamic_range(c, cap)?;
        let mut row: Vec<Field> = vec![c.desc().to_string().into(), r.min_abs.to_sci_truncated(3).into()];
        for i in 0..3 {
            row.push(r.max.get(i).map(|m| m.to_sci_truncated(3)).unwrap_or_default().into());
        }
        row.push(r.dr.into());
        t.push(row);
    }
    let summary = format!("dynamic range of {} format(s)", cs.len());
    Ok((t, summary))
}

fn density(desc: &str, cap: u32) -> Outcome {
    let codec = Codec::parse(desc)?;
    let h = density_histogram(&codec, cap)?;
    let mut t = Table::new(&["decade", "count"]);
    for (k, n) in &h {
        t.push(vec![(*k).into(), (*n).into()]);
    }
    let total: u64 = h.values().sum();
    let summary = format!("{}: {} distinct magnitudes over {} decades", codec.desc(), total, h.len());
    Ok((t, summary))
}

fn golden_zone(descs: &[String], lo: &str, hi: &str, cap: u32) -> Outcome {
    let cs = codecs(descs)?;
    let parse = |s: &str| s.parse::<ExactRational>().map_err(|_| usage(format!("cannot parse bound {s:?}")));
    let (l, h) = (parse(lo)?, parse(hi)?);
    if l.is_negative() || l >= h {
        return Err(usage("bounds must satisfy 0 <= lo < hi"));
    }
    let mut t = Table::new(&["descriptor", "lo", "hi", "count"]);
    let mut parts = Vec::new();
    for c in &cs {
        let n = golden_zone_count(c, &l, &h, cap)?;
        parts.push(format!("{}: {}", c.desc(), n));
        t.push(vec![c.desc().to_string().into(), lo.into(), hi.into(), n.into()]);
    }
    let summary = format!("distinct magnitudes in ({lo}, {hi}): {}", parts.join(", "));
    Ok((t, summary))
}

fn unary_cdf(descs: &[String], funs: &[String], reference: Reference, step: f64, exec: Exec, cap: u32) -> Outcome {
    let cs = codecs(descs)?;
    let funs: Vec<UnaryFn> = if funs.is_empty() {
        UnaryFn::sweep_set()
    } else {
        funs.iter().map(|f| f.parse().map_err(usage)).collect::<Result<_, _>>()?
    };
    if !(step > 0.0 && step <= 16.0) {
        return Err(usage("--step must be in (0, 16]"));
    }
    let mode = match reference {
        Reference::Taylor30 => ReferenceMode::Taylor30,
        Reference::Precise => ReferenceMode::Precise,
    };
    let n = (16.0 / step).floor() as usize;
    let points: Vec<f64> = (0..=n).map(|i| i as f64 * step).collect();
    let mut t = Table::new(&["descriptor", "function", "digits", "fraction_at_most"]);
    let mut runs = 0;
    for c in &cs {
        for f in &funs {
            let r = unary_sweep(c, f, mode, exec, cap)?;
            for (d, frac) in r.cdf(&points) {
                t.push(vec![c.desc().to_string().into(), f.name().into(), d.into(), frac.into()]);
            }
            runs += 1;
        }
    }
    let summary = format!("{runs} accuracy distribution(s) over {} digit points", points.len());
    Ok((t, summary))
}

struct SweepArgs<'a> {
    descs: &'a [String],
    ops: &'a [String],
    convention: Conv,
    grid: Option<&'a Path>,
    subsample: Option<u64>,
    seed: u64,
}

fn grid_name(desc: &str, op: ArithOp) -> String {
    format!("{}_{}.pgm", desc.replace(':', "_"), op.name())
}

fn sweep(a: SweepArgs, exec: Exec, allow_large: bool) -> Outcome {
    let cs = codecs(a.descs)?;
    let ops = ops(a.ops)?;
    let conv = match a.convention {
        Conv::Strict => Convention::Strict,
        Conv::Lenient => Convention::Lenient,
    };
    let cap = if allow_large { LARGE_CAP } else { BINARY_WIDTH_CAP };
    if a.subsample.is_none() {
        if let Some(c) = cs.iter().find(|c| c.width() > cap) {
            return Err(FormatError::WidthOverCap { width: c.width(), cap }.into());
        }
    }
    if a.grid.is_some() && a.subsample.is_some() {
        return Err(usage("--grid needs an exhaustive sweep"));
    }
    if let Some(dir) = a.grid {
        fs::create_dir_all(dir).map_err(io_failure(dir))?;
    }
    let mut t = Table::new(&[
        "descriptor",
        "op",
        "convention",
        "pairs",
        "exact_pct",
        "special_pct",
        "special_operand_pct",
        "avg_digits",
    ]);
    let mut kops = Vec::new();
    for c in cs {
        let desc = c.desc().to_string();
        let fmt = PreparedFormat::new(c);
        for &op in &ops {
            let opts = SweepOptions {
                exec,
                grid: a.grid.is_some(),
                cap,
                subsample: a.subsample.map(|pairs| Subsample { pairs, seed: a.seed }),
            };
            let res = binary_sweep(&fmt, op, &opts)?;
            if let (Some(dir), Some(g)) = (a.grid, &res.grid) {
                let path = dir.join(grid_name(&desc, op));
                fs::write(&path, g.to_pgm()).map_err(io_failure(&path))?;
            }
            let s = SweepSummary::new(&desc, &res.stats, conv);
            kops.push(s.kops);
            t.push(vec![
                s.desc.into(),
                s.op.into(),
                a.convention.to_possible_value().unwrap().get_name().into(),
                s.total.into(),
                s.exact_pct.into(),
                s.special_pct.into(),
                s.special_operand_pct.into(),
                s.avg_digits.into(),
            ]);
        }
    }
    let mean = kops.iter().sum::<f64>() / kops.len().max(1) as f64;
    let summary = format!("{} sweep(s), {} Kops/s mean", t.rows.len(), trunc3(mean));
    Ok((t, summary))
}

enum System {
    Exact,
    Codec(Codec),
}

fn litbench(table: u8, systems: &[String], rump_variant: bool) -> Outcome {
    let names: Vec<String> = if systems.is_empty() {
        let base: &[&str] = if table == 4 { &TABLE4_SYSTEMS } else { &TABLE5_SYSTEMS };
        base.iter().map(|s| s.to_string()).chain(["rational".to_string()]).collect()
    } else {
        systems.to_vec()
    };
    let parsed: Vec<System> = names
        .iter()
        .map(|n| {
            if n.trim() == "rational" {
                Ok(System::Exact)
            } else {
                Codec::parse(n).map(System::Codec).map_err(Failure::from)
            }
        })
        .collect::<Result<_, _>>()?;
    let refs = References::compute();
    let rump = if rump_variant { RumpInput::variant() } else { RumpInput::default() };
    let rows: Vec<BenchRow> = parsed
        .iter()
        .map(|s| match (s, table) {
            (System::Exact, 4) => table4_row(&Oracle, &refs, &rump),
            (System::Exact, _) => table5_row(&Oracle, &refs),
            (System::Codec(c), 4) => table4_row(c, &refs, &rump),
            (System::Codec(c), _) => table5_row(c, &refs),
        })
        .collect();
    let mut cols = vec!["system".to_string()];
    cols.extend(rows[0].cells.iter().map(|c| c.column.clone()));
    let mut t = Table { columns: cols, rows: Vec::new() };
    for r in &rows {
        let mut row: Vec<Field> = vec![r.system.clone().into()];
        row.extend(r.cells.iter().map(|c| Field::Text(c.text.clone())));
        t.push(row);
    }
    let summary = format!("benchmark table {table}: {} system(s)", rows.len());
    Ok((t, summary))
}

fn throughputs(descs: &[String], ops_: &[String], millis: u64, seed: u64) -> Outcome {
    let cs = codecs(descs)?;
    let ops = ops(ops_)?;
    let mut t = Table::new(&["descriptor", "op", "kops"]);
    for c in &cs {
        for &op in &ops {
            let k = throughput(c, op, Duration::from_millis(millis), seed);
            t.push(vec![c.desc().to_string().into(), op.name().into(), k.into()]);
        }
    }
    let summary = format!("{} throughput measurement(s)", t.rows.len());
    Ok((t, summary))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    par::init_workers(g.workers);
    let exec = if g.sequential { Exec::Sequential } else { Exec::Parallel };
    let cap = if g.allow_large { LARGE_CAP } else { DEFAULT_WIDTH_CAP };
    let (table, summary) = match &cli.verb {
        Verb::Decode { desc, pattern } => decode(desc, pattern),
        Verb::Encode { desc, value, rounding } => encode(desc, value, rounding.as_deref()),
        Verb::Convert { from, pattern, to } => convert(from, pattern, to),
        Verb::Enumerate { desc } => enumerate(desc, cap),
        Verb::DynamicRange { descs } => dynamic_ranges(descs, cap),
        Verb::Density { desc } => density(desc, cap),
        Verb::GoldenZone { descs, lo, hi } => golden_zone(descs, lo, hi, cap),
        Verb::UnaryCdf { descs, funs, reference, step } => unary_cdf(descs, funs, *reference, *step, exec, cap),
        Verb::BinarySweep { descs, ops, convention, grid, subsample, seed } => sweep(
            SweepArgs {
                descs,
                ops,
                convention: *convention,
                grid: grid.as_deref(),
                subsample: *subsample,
                seed: *seed,
            },
            exec,
            g.allow_large,
        ),
        Verb::Litbench { table, systems, rump_variant } => litbench(*table, systems, *rump_variant),
        Verb::Throughput { descs, ops, millis, seed } => throughputs(descs, ops, *millis, *seed),
    }?;
    match &g.output {
        Some(path) => {
            let file = File::create(path).map_err(io_failure(path))?;
            let mut w = BufWriter::new(file);
            table.write(g.format, &mut w).and_then(|_| w.flush()).map_err(io_failure(path))?;
            println!("{summary}");
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            let stdout_path = Path::new("<stdout>");
            table.write(g.format, &mut out).map_err(io_failure(stdout_path))?;
            if g.format == OutputFormat::Text {
                writeln!(out, "{summary}").map_err(io_failure(stdout_path))?;
            } else {
                eprintln!("{summary}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Refused(m)) => {
            eprintln!("refused: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io { path, err }) => {
            eprintln!("error: {path}: {err}");
            ExitCode::from(2)
        }
    }
}
