//! `pwpolar` command-line front end.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 target BLER
//! not bracketed by the sweep.

mod hex;

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pwpolar::codec::{decode, encode_message, CrcSpec, DecoderKind};
use pwpolar::construction::Method;
use pwpolar::reliability::{discordant_pairs, extract_nested, log2_exact, select_code, CodeSpec};
use pwpolar::seqfile::SequenceFile;
use pwpolar::simulator::{
    compare_methods, comparison_csv, format_db, format_sig6, k_grid, parse_config, run_sweep,
    sweep_csv, DecoderSpec, EarlyExit, RateFloor, SimConfig, SnrGrid, SweepResult,
};

#[derive(Parser)]
#[command(
    name = "pwpolar",
    version,
    about = "Polar code construction, coding and BLER simulation"
)]
struct Cli {
    /// Worker threads for simulations (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the reliability sequence of a method.
    Construct {
        /// Method descriptor, e.g. `pw`, `hpw:beta=1.2`, `ga:snr=2.0`.
        method: String,
        #[arg(long, default_value_t = 1024)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = SeqFormat::Text)]
        format: SeqFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the per-index weights of a method as `index,weight` CSV.
    Weights {
        method: String,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode hex messages read line by line from standard input.
    Encode(CodeArgs),
    /// Decode hard-decision hex words (or LLR lines) from standard input.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        dec: DecoderArgs,
        /// Read whitespace-separated LLRs (positive favours 0) instead of hex.
        #[arg(long)]
        llr: bool,
        /// Print one JSON object per word with metric and CRC status.
        #[arg(long)]
        json: bool,
    },
    /// Monte-Carlo BLER at a single SNR.
    Simulate {
        #[command(flatten)]
        sim: SimArgs,
        /// Es/N0 in dB.
        #[arg(long)]
        snr: f64,
    },
    /// BLER over an SNR grid with the required SNR at the target BLER.
    Sweep {
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Required SNR per (K, method) as a CSV table.
    Compare {
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Comma-separated method descriptors.
        #[arg(long, default_value = "pw,hpw,epw,ga")]
        methods: String,
        /// Comma-separated K values (default: the K grid for N).
        #[arg(long, value_delimiter = ',')]
        ks: Option<Vec<usize>>,
        /// Apply the rate-1/8 floor to the second K segment only.
        #[arg(long)]
        floor_second_segment: bool,
    },
    /// Report index pairs ordered differently by two sequence files.
    DiffSeq {
        a: PathBuf,
        b: PathBuf,
        /// Compare the nested sequences of this length (default: common length).
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SeqFormat {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct CodeArgs {
    #[arg(long)]
    n: usize,
    /// Message bits per block (CRC parity excluded).
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "pw")]
    method: String,
    /// Attach the 19-bit CRC.
    #[arg(long)]
    crc19: bool,
}

#[derive(Args, Clone)]
struct DecoderArgs {
    /// `sc`, `scl<L>` (CRC-aided when --crc19 is set) or `stub`.
    #[arg(long, default_value = "sc")]
    dec: String,
    /// Candidates checked by CRC-aided list decoding (default min(8, L)).
    #[arg(long)]
    check_depth: Option<usize>,
}

#[derive(Args, Clone)]
struct SimArgs {
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    method: Option<String>,
    #[arg(long, overrides_with = "no_crc")]
    crc19: bool,
    #[arg(long)]
    no_crc: bool,
    #[arg(long)]
    dec: Option<String>,
    #[arg(long)]
    check_depth: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    min_errors: Option<u64>,
    #[arg(long)]
    max_blocks: Option<u64>,
    /// Target BLER for the required-SNR readout.
    #[arg(long)]
    target: Option<f64>,
    /// `off`, `decade` or `crossing`.
    #[arg(long)]
    early_exit: Option<String>,
    /// 2000 error blocks, no block cap, 0.1 dB step, no early exit.
    #[arg(long)]
    paper_fidelity: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write JSON instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Clone)]
struct GridArgs {
    #[arg(long)]
    snr_start: Option<f64>,
    #[arg(long)]
    snr_stop: Option<f64>,
    #[arg(long)]
    snr_step: Option<f64>,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Unreached(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Runtime(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Unreached(_) => 3,
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl ToString) -> Failure {
    Failure::Runtime(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Usage(m) | Failure::Runtime(m) | Failure::Unreached(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Construct {
            method,
            nmax,
            format,
            out,
        } => construct(&method, nmax, format, out),
        Command::Weights { method, n, out } => weights(&method, n, out),
        Command::Encode(code) => encode_stream(&code),
        Command::Decode {
            code,
            dec,
            llr,
            json,
        } => decode_stream(&code, &dec, llr, json),
        Command::Simulate { sim, snr } => {
            let mut config = sim_config(&sim, None)?;
            config.snr = SnrGrid::single(snr);
            let result = run_sweep(&config).map_err(runtime)?;
            emit_sweep(&sim, &result)
        }
        Command::Sweep { sim, grid } => {
            let config = sim_config(&sim, Some(&grid))?;
            let result = run_sweep(&config).map_err(runtime)?;
            emit_sweep(&sim, &result)?;
            match result.required_snr_db {
                Some(_) => Ok(()),
                None => Err(Failure::Unreached(
                    result
                        .note
                        .unwrap_or_else(|| "target BLER not bracketed".into()),
                )),
            }
        }
        Command::Compare {
            sim,
            grid,
            methods,
            ks,
            floor_second_segment,
        } => compare(&sim, &grid, &methods, ks, floor_second_segment),
        Command::DiffSeq { a, b, n } => diff_seq(&a, &b, n),
    }
}

fn write_output(out: Option<&PathBuf>, text: &str) -> CliResult {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| runtime(format!("{}: {e}", path.display())))
        }
        None => io::stdout().write_all(text.as_bytes()).map_err(runtime),
    }
}

fn parse_method(desc: &str) -> CliResult<Method> {
    desc.parse::<Method>().map_err(usage)
}

fn construct(desc: &str, nmax: usize, format: SeqFormat, out: Option<PathBuf>) -> CliResult {
    let method = parse_method(desc)?;
    let n = log2_exact(nmax).map_err(usage)?;
    let seq = method.sequence(n).map_err(runtime)?;
    let file = SequenceFile::new(desc.trim(), seq);
    let text = match format {
        SeqFormat::Text => file.to_text(),
        SeqFormat::Json => file.to_json(),
    };
    write_output(out.as_ref(), &text)
}

fn weights(desc: &str, len: usize, out: Option<PathBuf>) -> CliResult {
    let method = parse_method(desc)?;
    let table = method
        .weight_table(log2_exact(len).map_err(usage)?)
        .map_err(runtime)?;
    let mut text = String::from("index,weight\n");
    for (i, w) in table.weights().iter().enumerate() {
        text.push_str(&format!("{i},{}\n", format_sig6(*w)));
    }
    write_output(out.as_ref(), &text)
}

fn build_code(args: &CodeArgs) -> CliResult<CodeSpec> {
    let method = parse_method(&args.method)?;
    let n = log2_exact(args.n).map_err(usage)?;
    let crc = CrcSpec::table_i();
    let extra = if args.crc19 { crc.width() } else { 0 };
    let seq = method.sequence(n).map_err(runtime)?;
    let code = select_code(&seq, args.n, args.k + extra).map_err(usage)?;
    if args.crc19 {
        code.with_crc(crc).map_err(usage)
    } else {
        Ok(code)
    }
}

fn for_each_input_line(mut f: impl FnMut(usize, &str) -> CliResult) -> CliResult {
    let stdin = io::stdin();
    for (lineno, line) in stdin.lock().lines().enumerate() {
        let line = line.map_err(runtime)?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        f(lineno + 1, trimmed)?;
    }
    Ok(())
}

fn encode_stream(args: &CodeArgs) -> CliResult {
    let code = build_code(args)?;
    let mut out = io::stdout().lock();
    for_each_input_line(|lineno, line| {
        let msg = hex::decode_bits(line, code.payload_length())
            .map_err(|e| usage(format!("line {lineno}: {e}")))?;
        let x = encode_message(&code, &msg).map_err(runtime)?;
        writeln!(out, "{}", hex::encode_bits(&x)).map_err(runtime)
    })
}

fn decoder_spec(dec: &str, crc: bool, check_depth: Option<usize>) -> CliResult<DecoderSpec> {
    let spec: DecoderSpec = dec.parse().map_err(usage)?;
    Ok(match spec {
        DecoderSpec::Scl { list } if crc => DecoderSpec::CaScl {
            list,
            check: check_depth.unwrap_or(list.min(8)),
        },
        other => {
            if check_depth.is_some() && !matches!(other, DecoderSpec::CaScl { .. }) {
                return Err(usage("--check-depth needs a list decoder with --crc19"));
            }
            other
        }
    })
}

fn decode_stream(args: &CodeArgs, dec: &DecoderArgs, llr_mode: bool, json: bool) -> CliResult {
    let code = build_code(args)?;
    let kind = decoder_spec(&dec.dec, args.crc19, dec.check_depth)?
        .kind()
        .ok_or_else(|| usage("the stub decoder only drives simulations"))?;
    if let DecoderKind::CaScl { list, check } = kind {
        if check > list || check == 0 {
            return Err(usage(format!("check depth {check} must lie in 1..={list}")));
        }
    }
    let mut out = io::stdout().lock();
    for_each_input_line(|lineno, line| {
        let llr: Vec<f64> = if llr_mode {
            line.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| usage(format!("line {lineno}: {e}")))?
        } else {
            hex::decode_bits(line, code.block_length())
                .map_err(|e| usage(format!("line {lineno}: {e}")))?
                .into_iter()
                .map(|b| if b == 0 { 1.0 } else { -1.0 })
                .collect()
        };
        let result = decode(&llr, &code, kind).map_err(|e| usage(format!("line {lineno}: {e}")))?;
        let sel = &result.selected;
        let payload = hex::encode_bits(sel.payload(&code));
        if json {
            let obj = serde_json::json!({
                "message": payload,
                "path_metric": sel.path_metric,
                "crc_pass": sel.crc_pass,
            });
            writeln!(out, "{obj}").map_err(runtime)
        } else {
            writeln!(out, "{payload}").map_err(runtime)
        }
    })
}

fn sim_config(args: &SimArgs, grid: Option<&GridArgs>) -> CliResult<SimConfig> {
    // Precedence: defaults, then the preset, then the file, then flags.
    let mut c = SimConfig::default();
    if args.paper_fidelity {
        c = c.paper_fidelity();
    }
    if let Some(path) = &args.config {
        let text =
            fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        c = parse_config(&text, c).map_err(usage)?;
    }
    if let Some(v) = args.n {
        c.n = v;
    }
    if let Some(v) = args.k {
        c.k = v;
    }
    if let Some(v) = &args.method {
        c.method = v.clone();
    }
    if args.crc19 {
        c.crc = true;
    }
    if args.no_crc {
        c.crc = false;
    }
    if let Some(d) = &args.dec {
        c.decoder = decoder_spec(d, c.crc, args.check_depth)?;
    } else if let Some(t) = args.check_depth {
        match &mut c.decoder {
            DecoderSpec::CaScl { check, .. } => *check = t,
            _ => return Err(usage("--check-depth needs a list decoder with --crc19")),
        }
    }
    if let Some(v) = args.seed {
        c.seed = v;
    }
    if let Some(v) = args.min_errors {
        c.min_errors = v;
    }
    if let Some(v) = args.max_blocks {
        c.max_blocks = v;
    }
    if let Some(v) = args.target {
        c.target_bler = v;
    }
    if let Some(v) = &args.early_exit {
        c.early_exit = v.parse::<EarlyExit>().map_err(usage)?;
    }
    if let Some(g) = grid {
        if let Some(v) = g.snr_start {
            c.snr.start = v;
        }
        if let Some(v) = g.snr_stop {
            c.snr.stop = v;
        }
        if let Some(v) = g.snr_step {
            c.snr.step = v;
        }
    }
    if !(c.target_bler > 0.0 && c.target_bler < 1.0) {
        return Err(usage(format!(
            "target BLER {} outside (0, 1)",
            c.target_bler
        )));
    }
    c.method().map_err(usage)?;
    c.validate().map_err(usage)?;
    Ok(c)
}

fn emit_sweep(args: &SimArgs, result: &SweepResult) -> CliResult {
    let text = if args.json {
        let mut s = serde_json::to_string_pretty(result).map_err(runtime)?;
        s.push('\n');
        s
    } else {
        sweep_csv(result)
    };
    let summary = match result.required_snr_db {
        Some(v) => format!(
            "required_snr_db={} at bler={}",
            format_db(v),
            format_sig6(result.config.target_bler)
        ),
        None => format!(
            "required_snr_db=NA ({})",
            result.note.as_deref().unwrap_or("not bracketed")
        ),
    };
    write_output(args.out.as_ref(), &text)?;
    if args.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

const METHOD_NAMES: [&str; 5] = ["pw", "hpw", "epw", "ga", "bec"];

/// Splits on commas, re-joining tokens that do not start a new method
/// descriptor (e.g. the parameter lists of `hpw:orders=0,1`).
fn split_methods(list: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for tok in list.split(',') {
        let name = tok
            .split(':')
            .next()
            .unwrap_or("")
            .trim()
            .to_ascii_lowercase();
        let starts_method =
            METHOD_NAMES.contains(&name.as_str()) && (tok.contains(':') || !tok.contains('='));
        match out.last_mut() {
            Some(prev) if !starts_method => {
                prev.push(',');
                prev.push_str(tok);
            }
            _ => out.push(tok.trim().to_string()),
        }
    }
    out.retain(|m| !m.is_empty());
    out
}

fn compare(
    args: &SimArgs,
    grid: &GridArgs,
    methods: &str,
    ks: Option<Vec<usize>>,
    floor_second_segment: bool,
) -> CliResult {
    let methods = split_methods(methods);
    if methods.is_empty() {
        return Err(usage("no methods given"));
    }
    for m in &methods {
        parse_method(m)?;
    }
    let mut base = sim_config(
        &SimArgs {
            k: Some(args.k.unwrap_or(1)),
            ..args.clone()
        },
        Some(grid),
    )?;
    let ks = match ks {
        Some(ks) => ks,
        None => {
            let crc_bits = if base.crc {
                CrcSpec::table_i().width()
            } else {
                0
            };
            let floor = if floor_second_segment {
                RateFloor::SecondSegment
            } else {
                RateFloor::WholeGrid
            };
            k_grid(base.n, crc_bits, floor)
        }
    };
    if ks.is_empty() {
        return Err(usage(format!("empty K grid for N = {}", base.n)));
    }
    for &k in &ks {
        SimConfig { k, ..base.clone() }.validate().map_err(usage)?;
    }
    base.k = ks[0];
    let table = compare_methods(&base, &ks, &methods).map_err(runtime)?;
    let text = if args.json {
        let mut s = serde_json::to_string_pretty(&table).map_err(runtime)?;
        s.push('\n');
        s
    } else {
        comparison_csv(&table)
    };
    write_output(args.out.as_ref(), &text)?;
    let missing = table
        .required
        .iter()
        .flatten()
        .filter(|c| c.is_none())
        .count();
    if args.out.is_some() {
        println!("cells={} unbracketed={missing}", ks.len() * methods.len());
    }
    if missing > 0 {
        return Err(Failure::Unreached(format!(
            "{missing} cell(s) did not bracket the target BLER"
        )));
    }
    Ok(())
}

fn read_sequence(path: &PathBuf) -> CliResult<SequenceFile> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    SequenceFile::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn diff_seq(a: &PathBuf, b: &PathBuf, n: Option<usize>) -> CliResult {
    let fa = read_sequence(a)?;
    let fb = read_sequence(b)?;
    let common = fa.n_max().min(fb.n_max());
    let len = n.unwrap_or(common);
    if len > common {
        return Err(usage(format!(
            "N = {len} exceeds a sequence length ({} vs {})",
            fa.n_max(),
            fb.n_max()
        )));
    }
    log2_exact(len).map_err(usage)?;
    extract_nested(&fa.sequence, len).map_err(usage)?;
    let pairs = discordant_pairs(&fa.sequence, &fb.sequence, len).map_err(usage)?;
    let mut out = io::stdout().lock();
    let write = |out: &mut io::StdoutLock, s: String| writeln!(out, "{s}").map_err(runtime);
    write(
        &mut out,
        format!("# a={} b={} n={len}", fa.method, fb.method),
    )?;
    for (i, j) in &pairs {
        write(&mut out, format!("{i},{j}"))?;
    }
    write(&mut out, format!("discordant_pairs={}", pairs.len()))
}
