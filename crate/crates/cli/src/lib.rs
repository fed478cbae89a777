//! `cdna` command-line tool.
//!
//! All logic lives in [`run`] so it can be driven in-process with in-memory
//! streams.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use cdna_core::alphabet::{self, CompositeAlphabet, Seq, Symbol};
use cdna_core::capacity::{self, Constraint, PowerOptions};
use cdna_core::combined_codec::CombinedCodec;
use cdna_core::gc_codec::{GcCodec, GridMode};
use cdna_core::rll_codec::RllCodec;
use cdna_core::verifier::{self, BalanceMode, Epsilon};
use clap::{Args, Parser, Subcommand, ValueEnum};

const TABLE_ONE: [&str; 3] = ["M=AC", "M=ATC", "M=ATCG"];
const TABLE_TWO: [&str; 5] = ["M=AT,N=CG", "M=AT,N=AG", "M=AT,N=ACG", "M=AT,N=ATG", "M=ATC,N=ATG"];
const DEFAULT_ALPHABET: &str = "M=AC";
const BOUND_ALPHABETS: [&str; 2] = ["M=AC", "M=AT~N=CG"];

#[derive(Parser, Debug)]
#[command(name = "cdna", version, about = "Constrained codes for composite DNA alphabets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the capacity tables and the one-redundancy length bounds
    Tables(TablesArgs),
    /// Capacity of the l-RLL constraint over one alphabet
    Capacity(CapacityArgs),
    /// Largest codeword length for the one-redundancy run-length encoder
    Bound(BoundArgs),
    /// Encode newline-delimited messages
    Encode(CodecArgs),
    /// Decode the output of `encode`
    Decode(CodecArgs),
    /// Check each input word against the run-length and balance constraints
    Verify(VerifyArgs),
    /// Count constrained words exactly and by brute force
    Enumerate(EnumerateArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
enum Format {
    #[default]
    Text,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CodecKind {
    Rll,
    Gc,
    Combined,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
enum GridArg {
    #[default]
    Full,
    Lset,
}

#[derive(Args, Debug)]
struct NumericArgs {
    /// Power-iteration stopping tolerance
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Power-iteration step limit
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    /// Decimal places in printed values
    #[arg(long, default_value_t = 3)]
    precision: usize,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

impl NumericArgs {
    fn power(&self) -> PowerOptions {
        PowerOptions { tol: self.tol, max_iter: self.max_iter }
    }
}

#[derive(Args, Debug)]
struct TablesArgs {
    #[command(flatten)]
    numeric: NumericArgs,
    /// Largest run length in the capacity tables
    #[arg(long, default_value_t = 6)]
    max_l: usize,
}

#[derive(Args, Debug)]
struct CapacityArgs {
    #[arg(long, default_value = DEFAULT_ALPHABET)]
    alphabet: String,
    #[arg(long)]
    l: usize,
    #[command(flatten)]
    numeric: NumericArgs,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long, default_value = DEFAULT_ALPHABET)]
    alphabet: String,
    #[arg(long)]
    l: usize,
    /// Round the pointer quotient up instead of down
    #[arg(long)]
    ceil: bool,
}

#[derive(Args, Debug)]
struct CodecArgs {
    #[arg(long, value_enum)]
    codec: CodecKind,
    #[arg(long)]
    alphabet: Option<String>,
    #[arg(long)]
    l: Option<usize>,
    /// Balance tolerance as a fraction, e.g. 1/10 or 0.1
    #[arg(long)]
    eps: Option<Epsilon>,
    /// Codeword (block) length
    #[arg(long)]
    n: Option<usize>,
    /// Flip-index grid for the GC codec
    #[arg(long, value_enum, default_value_t)]
    grid: GridArg,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long = "out")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = DEFAULT_ALPHABET)]
    alphabet: String,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    eps: Option<Epsilon>,
    #[arg(long, default_value_t)]
    mode: BalanceMode,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long = "out")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long, default_value = DEFAULT_ALPHABET)]
    alphabet: String,
    /// Largest word length
    #[arg(long)]
    n: usize,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    eps: Option<Epsilon>,
    #[arg(long, default_value_t)]
    mode: BalanceMode,
    /// Skip brute force above this many words
    #[arg(long, default_value_t = capacity::DEFAULT_BRUTE_CAP)]
    brute_cap: u64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

/// Failure classes, each with its own exit status and diagnostic code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Input(String),
    Codec(String),
    Compute(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "E_USAGE",
            CliError::Io(_) => "E_IO",
            CliError::Input(_) => "E_INPUT",
            CliError::Codec(_) => "E_CODEC",
            CliError::Compute(_) => "E_COMPUTE",
        }
    }

    pub fn exit_status(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Input(_) => 4,
            CliError::Codec(_) => 5,
            CliError::Compute(_) => 6,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Io(m)
            | CliError::Input(m)
            | CliError::Codec(m)
            | CliError::Compute(m) => m,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn io_err(e: io::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status. Diagnostics go to `stderr` as `error[CODE]: message`.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let text = e.to_string();
            let summary: Vec<&str> = text
                .lines()
                .take_while(|line| !line.starts_with("Usage:"))
                .map(str::trim)
                .filter(|line| !line.is_empty())
                .collect();
            let _ = writeln!(stderr, "error[E_USAGE]: {}", summary.join(" ").trim_start_matches("error: "));
            return 2;
        }
    };
    match dispatch(cli.command, stdin, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {}", e.code(), e.message());
            e.exit_status()
        }
    }
}

fn dispatch(command: Command, stdin: &mut dyn BufRead, stdout: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Tables(a) => emit(stdout, &None, &tables(&a)?),
        Command::Capacity(a) => emit(stdout, &None, &capacity_cmd(&a)?),
        Command::Bound(a) => emit(stdout, &None, &bound_cmd(&a)?),
        Command::Encode(a) => {
            let text = read_input(&a.input, stdin)?;
            let out = encode_cmd(&a, &text)?;
            emit(stdout, &a.output, &out)
        }
        Command::Decode(a) => {
            let text = read_input(&a.input, stdin)?;
            let out = decode_cmd(&a, &text)?;
            emit(stdout, &a.output, &out)
        }
        Command::Verify(a) => {
            let text = read_input(&a.input, stdin)?;
            let out = verify_cmd(&a, &text)?;
            emit(stdout, &a.output, &out)
        }
        Command::Enumerate(a) => emit(stdout, &None, &enumerate_cmd(&a)?),
    }
}

fn read_input(path: &Option<PathBuf>, stdin: &mut dyn BufRead) -> CliResult<String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(io_err)?;
            Ok(s)
        }
    }
}

fn emit(stdout: &mut dyn Write, path: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(io_err),
    }
}

fn parse_alphabet(spec: &str) -> CliResult<CompositeAlphabet> {
    CompositeAlphabet::parse(spec).map_err(|e| CliError::Input(format!("alphabet `{spec}`: {e}")))
}

fn capacity_value(
    l: usize,
    a: &CompositeAlphabet,
    opts: PowerOptions,
) -> CliResult<capacity::CapacityResult> {
    capacity::rll_capacity(l, a, opts).map_err(|e| CliError::Compute(e.to_string()))
}

fn tables(args: &TablesArgs) -> CliResult<String> {
    let n = &args.numeric;
    let p = n.precision;
    let ls: Vec<usize> = (1..=args.max_l).collect();
    let mut out = String::new();
    let groups = [("capacity_one_composite", &TABLE_ONE[..]), ("capacity_two_composites", &TABLE_TWO[..])];
    if n.format == Format::Csv {
        out.push_str("table,alphabet,l,value\n");
    }
    for (name, specs) in groups {
        if n.format == Format::Text {
            let _ = writeln!(out, "{name} (bits/symbol)");
            let _ = write!(out, "{:<12}", "alphabet");
            for l in &ls {
                let _ = write!(out, " {:>w$}", format!("l={l}"), w = p + 3);
            }
            out.push('\n');
        }
        for spec in specs {
            let a = parse_alphabet(spec)?;
            if n.format == Format::Text {
                let _ = write!(out, "{spec:<12}");
            }
            for &l in &ls {
                let c = capacity_value(l, &a, n.power())?.capacity_bits;
                match n.format {
                    Format::Text => {
                        let _ = write!(out, " {c:>w$.p$}", w = p + 3);
                    }
                    Format::Csv => {
                        let _ = writeln!(out, "{name},{spec},{l},{c:.p$}");
                    }
                }
            }
            if n.format == Format::Text {
                out.push('\n');
            }
        }
        if n.format == Format::Text {
            out.push('\n');
        }
    }
    if n.format == Format::Text {
        out.push_str("one_redundancy_bound (largest n)\n");
        let _ = writeln!(out, "{:>2} {:>12} {:>12} {:>12}", "l", "M=AC", "M=AC (ceil)", "M=AT~N=CG");
    }
    for l in 3..=6 {
        let mut vals = Vec::new();
        for spec in BOUND_ALPHABETS {
            let a = parse_alphabet(spec)?;
            let floor =
                capacity::one_redundancy_bound(l, &a).map_err(|e| CliError::Compute(e.to_string()))?;
            let ceil =
                capacity::one_redundancy_bound_ceil(l, &a).map_err(|e| CliError::Compute(e.to_string()))?;
            vals.push((spec, floor, ceil));
        }
        match n.format {
            Format::Text => {
                let _ = writeln!(out, "{l:>2} {:>12} {:>12} {:>12}", vals[0].1, vals[0].2, vals[1].1);
            }
            Format::Csv => {
                for (spec, floor, ceil) in vals {
                    let _ = writeln!(out, "bound_floor,{spec},{l},{floor}");
                    let _ = writeln!(out, "bound_ceil,{spec},{l},{ceil}");
                }
            }
        }
    }
    Ok(out)
}

fn capacity_cmd(args: &CapacityArgs) -> CliResult<String> {
    let a = parse_alphabet(&args.alphabet)?;
    let n = &args.numeric;
    match n.format {
        Format::Text => {
            let r = capacity_value(args.l, &a, n.power())?;
            Ok(format!("{:.p$}\n", r.capacity_bits, p = n.precision))
        }
        Format::Csv => {
            let rows = capacity::capacity_sweep(&a, [args.l], n.power())
                .map_err(|e| CliError::Compute(e.to_string()))?;
            Ok(capacity::rows_to_csv(&rows, n.precision))
        }
    }
}

fn bound_cmd(args: &BoundArgs) -> CliResult<String> {
    let a = parse_alphabet(&args.alphabet)?;
    let b = if args.ceil {
        capacity::one_redundancy_bound_ceil(args.l, &a)
    } else {
        capacity::one_redundancy_bound(args.l, &a)
    }
    .map_err(|e| CliError::Compute(e.to_string()))?;
    Ok(format!("{b}\n"))
}

/// Parameters carried in the first line of an encoded file.
#[derive(Debug, Clone, PartialEq)]
struct Header {
    n: usize,
    l: usize,
    eps: Epsilon,
    alphabet: String,
}

impl Header {
    fn line(&self) -> String {
        format!("n={} l={} eps={} alphabet={}", self.n, self.l, self.eps, self.alphabet)
    }

    fn parse(line: &str) -> CliResult<Self> {
        let bad = || CliError::Input(format!("malformed header `{line}`"));
        let (mut n, mut l, mut eps, mut alphabet) = (None, None, None, None);
        for field in line.split_whitespace() {
            let (k, v) = field.split_once('=').ok_or_else(bad)?;
            match k {
                "n" => n = v.parse().ok(),
                "l" => l = v.parse().ok(),
                "eps" => eps = v.parse().ok(),
                "alphabet" => alphabet = Some(v.to_string()),
                _ => return Err(bad()),
            }
        }
        Ok(Header {
            n: n.ok_or_else(bad)?,
            l: l.ok_or_else(bad)?,
            eps: eps.ok_or_else(bad)?,
            alphabet: alphabet.ok_or_else(bad)?,
        })
    }
}

enum Codec {
    Rll(RllCodec),
    Gc(GcCodec),
    Combined(CombinedCodec),
}

impl Codec {
    fn build(kind: CodecKind, grid: GridArg, h: &Header) -> CliResult<(Codec, CompositeAlphabet)> {
        let a = parse_alphabet(&h.alphabet)?;
        let codec_err = |e: String| CliError::Codec(e);
        let codec = match kind {
            CodecKind::Rll => Codec::Rll(RllCodec::new(&a, h.l, h.n).map_err(|e| codec_err(e.to_string()))?),
            CodecKind::Gc => {
                let grid = match grid {
                    GridArg::Full => GridMode::Full,
                    GridArg::Lset => GridMode::Lset,
                };
                Codec::Gc(GcCodec::new(&a, h.n, h.eps, grid).map_err(|e| codec_err(e.to_string()))?)
            }
            CodecKind::Combined => Codec::Combined(
                CombinedCodec::new(&a, h.n, h.l, h.eps).map_err(|e| codec_err(e.to_string()))?,
            ),
        };
        Ok((codec, a))
    }

    fn chunk_len(&self) -> usize {
        match self {
            Codec::Rll(c) => c.message_len(),
            Codec::Gc(c) => c.payload_len(),
            Codec::Combined(c) => c.params().payload_len,
        }
    }

    fn encode_line(&self, a: &CompositeAlphabet, x: &[Symbol]) -> Result<String, String> {
        if let Codec::Rll(c) = self {
            return c.encode_stream(x).map(|w| a.format(&w)).map_err(|e| e.to_string());
        }
        let chunks = alphabet::frame_message(x, self.chunk_len()).map_err(|e| e.to_string())?;
        let words = chunks
            .iter()
            .map(|chunk| match self {
                Codec::Gc(c) => c.encode(chunk).map_err(|e| e.to_string()),
                Codec::Combined(c) => c.encode(chunk).map_err(|e| e.to_string()),
                Codec::Rll(_) => unreachable!(),
            })
            .collect::<Result<Vec<Seq>, String>>()?;
        Ok(words.iter().map(|w| a.format(w)).collect::<Vec<_>>().join(" "))
    }

    fn decode_line(&self, a: &CompositeAlphabet, line: &str) -> Result<Seq, String> {
        let words = line
            .split_whitespace()
            .map(|tok| a.parse_word(tok).map_err(|e| e.to_string()))
            .collect::<Result<Vec<Seq>, String>>()?;
        if let Codec::Rll(c) = self {
            let word = words.first().ok_or("empty line")?;
            if words.len() != 1 {
                return Err("expected one codeword per line".into());
            }
            return c.decode_stream(word).map_err(|e| e.to_string());
        }
        let chunks = words
            .iter()
            .map(|w| match self {
                Codec::Gc(c) => c.decode(w).map_err(|e| e.to_string()),
                Codec::Combined(c) => c.decode(w).map_err(|e| e.to_string()),
                Codec::Rll(_) => unreachable!(),
            })
            .collect::<Result<Vec<Seq>, String>>()?;
        if chunks.is_empty() {
            return Err("empty line".into());
        }
        alphabet::unframe_message(&chunks, self.chunk_len()).map_err(|e| e.to_string())
    }
}

fn require<T: Clone>(v: &Option<T>, flag: &str, codec: CodecKind) -> CliResult<T> {
    v.clone()
        .ok_or_else(|| CliError::Usage(format!("--{flag} is required for --codec {codec:?}").to_lowercase()))
}

fn encode_cmd(args: &CodecArgs, text: &str) -> CliResult<String> {
    let alphabet = args.alphabet.clone().ok_or_else(|| CliError::Usage("--alphabet is required".into()))?;
    let n = require(&args.n, "n", args.codec)?;
    let (l, eps) = match args.codec {
        CodecKind::Rll => (require(&args.l, "l", args.codec)?, Epsilon::zero()),
        CodecKind::Gc => (0, args.eps.unwrap_or_else(Epsilon::zero)),
        CodecKind::Combined => (require(&args.l, "l", args.codec)?, require(&args.eps, "eps", args.codec)?),
    };
    let canonical = parse_alphabet(&alphabet)?.spec();
    let header = Header { n, l, eps, alphabet: canonical };
    let (codec, a) = Codec::build(args.codec, args.grid, &header)?;
    let mut out = header.line();
    out.push('\n');
    for (i, line) in text.lines().enumerate() {
        let x = a.parse_word(line).map_err(|e| CliError::Input(format!("line {}: {e}", i + 1)))?;
        let encoded =
            codec.encode_line(&a, &x).map_err(|e| CliError::Codec(format!("line {}: {e}", i + 1)))?;
        out.push_str(&encoded);
        out.push('\n');
    }
    Ok(out)
}

fn decode_cmd(args: &CodecArgs, text: &str) -> CliResult<String> {
    let mut lines = text.lines().enumerate().peekable();
    let from_file = match lines.peek() {
        Some((_, first)) if first.starts_with("n=") => {
            let h = Header::parse(first)?;
            lines.next();
            Some(h)
        }
        _ => None,
    };
    let header = match from_file {
        Some(h) => {
            let clash = args.n.is_some_and(|n| n != h.n)
                || args.l.is_some_and(|l| l != h.l)
                || args.eps.is_some_and(|e| e != h.eps)
                || args
                    .alphabet
                    .as_ref()
                    .is_some_and(|s| parse_alphabet(s).map(|a| a.spec()).ok() != Some(h.alphabet.clone()));
            if clash {
                return Err(CliError::Usage(format!("flags disagree with header `{}`", h.line())));
            }
            h
        }
        None => Header {
            n: require(&args.n, "n", args.codec)?,
            l: args.l.unwrap_or(0),
            eps: args.eps.unwrap_or_else(Epsilon::zero),
            alphabet: args
                .alphabet
                .clone()
                .ok_or_else(|| CliError::Usage("--alphabet is required without a header".into()))?,
        },
    };
    let (codec, a) = Codec::build(args.codec, args.grid, &header)?;
    let mut out = String::new();
    for (i, line) in lines {
        let x = codec.decode_line(&a, line).map_err(|e| CliError::Codec(format!("line {}: {e}", i + 1)))?;
        out.push_str(&a.format(&x));
        out.push('\n');
    }
    Ok(out)
}

fn verify_cmd(args: &VerifyArgs, text: &str) -> CliResult<String> {
    if args.l.is_none() && args.eps.is_none() {
        return Err(CliError::Usage("verify needs --l, --eps or both".into()));
    }
    let a = parse_alphabet(&args.alphabet)?;
    let mut out = String::new();
    for (i, line) in text.lines().enumerate() {
        let word = line.trim();
        let x = a.parse_word(word).map_err(|e| CliError::Input(format!("line {}: {e}", i + 1)))?;
        let mut failures = Vec::new();
        if let Some(l) = args.l {
            if let Some(v) = verifier::rll_violation(&a, &x, l) {
                failures.push(format!(
                    "rll(l={l}): positions {}-{} `{}` all admit {}",
                    v.start + 1,
                    v.start + l + 1,
                    a.format(&x[v.start..v.start + l + 1]),
                    v.base.as_char()
                ));
            }
        }
        if let Some(eps) = args.eps {
            let b = verifier::gc_bounds(&a, &x);
            let w = verifier::GcWindow::new(x.len(), eps, args.mode);
            if !w.contains(b) {
                failures.push(format!(
                    "balance(eps={eps}, {}): gc count range [{}, {}] outside [{}, {}]",
                    args.mode, b.min_gc, b.max_gc, w.lo, w.hi
                ));
            }
        }
        if failures.is_empty() {
            let _ = writeln!(out, "PASS {word}");
        } else {
            let _ = writeln!(out, "FAIL {word} {}", failures.join("; "));
        }
    }
    Ok(out)
}

fn enumerate_cmd(args: &EnumerateArgs) -> CliResult<String> {
    let a = parse_alphabet(&args.alphabet)?;
    let constraint = match (args.l, args.eps) {
        (Some(l), Some(e)) => Constraint::Both(l, e, args.mode),
        (Some(l), None) => Constraint::Rll(l),
        (None, Some(e)) => Constraint::Balanced(e, args.mode),
        (None, None) => return Err(CliError::Usage("enumerate needs --l, --eps or both".into())),
    };
    let mut out = match args.format {
        Format::Text => format!("{:>3} {:>24} {:>24}\n", "n", "exact", "brute"),
        Format::Csv => "n,exact,brute\n".to_string(),
    };
    for n in 1..=args.n {
        let exact = capacity::count_exact(n, constraint, &a).map_err(|e| CliError::Compute(e.to_string()))?;
        let brute = match capacity::brute_count(n, constraint, &a, args.brute_cap) {
            Ok(b) => b.to_string(),
            Err(_) => "-".to_string(),
        };
        let _ = match args.format {
            Format::Text => writeln!(out, "{n:>3} {exact:>24} {brute:>24}"),
            Format::Csv => writeln!(out, "{n},{exact},{brute}"),
        };
    }
    Ok(out)
}
