//! `qaloco` command-line tool.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use num_bigint::BigUint;
use qaloco::analysis::{self, reference_grid};
use qaloco::oracle;
use qaloco::stream::{self, read_binary, run_bound, write_binary, SymbolStream};
use qaloco::{
    build_fstd, codeword_of_index, index_of_codeword, max_run, scan_forbidden, BitMessage,
    CardinalityTable, Code, CodeParams, Codeword,
};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qaloco",
    version,
    about = "QA-LOCO constrained codes for multi-level Flash"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode lines of binary messages into symbol streams.
    Encode(StreamArgs),
    /// Decode symbol streams back into binary messages.
    Decode(StreamArgs),
    /// Print cardinality, message length and rate of a code.
    Params(CodeArgs),
    /// Print rate tables.
    Tables(TablesArgs),
    /// Print the capacity of the constraint for (q, x).
    Capacity(CapacityArgs),
    /// Validate a stream file, or cross-check a small code against brute force.
    Check(CheckArgs),
}

#[derive(Args, Clone, Copy)]
struct CodeArgs {
    /// Levels per cell.
    #[arg(long)]
    q: u32,
    /// Codeword length in symbols.
    #[arg(long)]
    m: usize,
    /// Longest forbidden gap.
    #[arg(long)]
    x: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Binary,
}

#[derive(Args)]
struct StreamArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Also verify every bridging pattern while decoding.
    #[arg(long)]
    strict: bool,
    /// Input file (default: stdin).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long = "out")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TablesArgs {
    /// Forbidden gap length; both tabulated values when omitted.
    #[arg(long)]
    x: Option<usize>,
    /// Alphabet sizes, overriding the reference grid (requires --ms).
    #[arg(long, value_delimiter = ',', requires = "ms")]
    q: Vec<u32>,
    /// Code lengths used for every --q value.
    #[arg(long, value_delimiter = ',', requires = "q")]
    ms: Vec<usize>,
    /// Emit CSV instead of aligned text.
    #[arg(long)]
    csv: bool,
    #[arg(long = "out")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CapacityArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    x: usize,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Run brute-force cross-checks instead of validating a stream.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    strict: bool,
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::data(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn open_input(path: &Option<PathBuf>) -> Result<Box<dyn BufRead>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufReader::new(
            File::open(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufReader::new(io::stdin())),
    })
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn build_code(args: CodeArgs) -> Result<Code, Failure> {
    let params =
        CodeParams::new(args.q, args.m, args.x).map_err(|e| Failure::usage(e.to_string()))?;
    Code::new(params).map_err(|e| Failure::usage(e.to_string()))
}

fn lines(input: Box<dyn BufRead>) -> impl Iterator<Item = io::Result<String>> {
    input
        .lines()
        .map(|l| l.map(|s| s.strip_suffix('\r').map(str::to_owned).unwrap_or(s)))
}

fn cmd_encode(args: StreamArgs) -> CliResult {
    let code = build_code(args.code)?;
    let s = code.message_bits() as usize;
    let input = open_input(&args.input)?;
    let mut out = open_output(&args.output)?;
    let mut codewords = 0usize;
    for (n, line) in lines(input).enumerate() {
        let line = line?;
        let lineno = n + 1;
        let bits: BitMessage = line
            .parse()
            .map_err(|e| Failure::data(format!("line {lineno}: {e}")))?;
        if !bits.len().is_multiple_of(s) {
            return Err(Failure::data(format!(
                "line {lineno}: length {} is not a multiple of s^c = {s}",
                bits.len()
            )));
        }
        let msgs: Vec<BitMessage> = bits
            .bits()
            .chunks(s)
            .map(|c| BitMessage::new(c.to_vec()))
            .collect();
        let stream = stream::encode_stream(&msgs, code.table(), code.m())
            .map_err(|e| Failure::data(format!("line {lineno}: {e}")))?;
        codewords += msgs.len();
        match args.format {
            Format::Text => writeln!(out, "{}", stream.to_text())?,
            Format::Binary => write_binary(&stream, &mut out)?,
        }
    }
    out.flush()?;
    let report =
        analysis::rate(code.params(), code.table()).map_err(|e| Failure::data(e.to_string()))?;
    eprintln!(
        "s^c = {s}, rate = {:.4}, codewords = {codewords}",
        report.rate
    );
    Ok(())
}

/// A stream, or its parse error, tagged with a 1-based line or record number.
type TaggedStream = (usize, Result<SymbolStream, String>);

/// Reads all streams from the input.
fn read_streams(
    format: Format,
    input: Box<dyn BufRead>,
    params: CodeParams,
) -> Result<Vec<TaggedStream>, Failure> {
    let mut streams = Vec::new();
    match format {
        Format::Text => {
            for (n, line) in lines(input).enumerate() {
                let line = line?;
                streams.push((
                    n + 1,
                    SymbolStream::parse_text(&line, params).map_err(|e| e.to_string()),
                ));
            }
        }
        Format::Binary => {
            let mut input = input;
            let mut n = 0;
            loop {
                n += 1;
                match read_binary(&mut input) {
                    Ok(None) => break,
                    Ok(Some(s)) if s.params() != &params => {
                        streams.push((
                            n,
                            Err(format!(
                                "record written for {} but decoding {}",
                                s.params(),
                                params
                            )),
                        ));
                    }
                    Ok(Some(s)) => streams.push((n, Ok(s))),
                    Err(e) => {
                        streams.push((n, Err(e.to_string())));
                        break;
                    }
                }
            }
        }
    }
    Ok(streams)
}

fn unit(format: Format) -> &'static str {
    match format {
        Format::Text => "line",
        Format::Binary => "record",
    }
}

fn cmd_decode(args: StreamArgs) -> CliResult {
    let code = build_code(args.code)?;
    let input = open_input(&args.input)?;
    let mut out = open_output(&args.output)?;
    let streams = read_streams(args.format, input, *code.params())?;
    for (n, stream) in streams {
        let label = unit(args.format);
        let stream = stream.map_err(|e| Failure::data(format!("{label} {n}: {e}")))?;
        let decode = if args.strict {
            stream::decode_stream_strict
        } else {
            stream::decode_stream
        };
        let msgs = decode(stream.levels(), code.table(), code.m())
            .map_err(|e| Failure::data(format!("{label} {n}: {e}")))?;
        let line: String = msgs.iter().map(|b| b.to_string()).collect();
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_params(args: CodeArgs) -> CliResult {
    let code = build_code(args)?;
    let report =
        analysis::rate(code.params(), code.table()).map_err(|e| Failure::data(e.to_string()))?;
    let n = code.size();
    println!("q = {}, m = {}, x = {}", args.q, args.m, args.x);
    println!("N = {n}");
    println!("N - 2 = {}", n - 2u32);
    println!("s^c = {}", report.message_bits);
    println!("rate = {:.4}", report.rate_rounded());
    println!("normalized rate = {:.4}", report.normalized_rate_rounded());
    println!("k_eff = {}", run_bound(code.params()));
    Ok(())
}

fn cmd_tables(args: TablesArgs) -> CliResult {
    let xs: Vec<usize> = match args.x {
        Some(x) => vec![x],
        None => vec![1, 2],
    };
    let mut out = open_output(&args.output)?;
    for (k, x) in xs.into_iter().enumerate() {
        let grid = if args.q.is_empty() {
            reference_grid(x).ok_or_else(|| {
                Failure::usage(format!("no reference grid for x = {x}; pass --q and --ms"))
            })?
        } else {
            args.q.iter().map(|&q| (q, args.ms.clone())).collect()
        };
        let table =
            analysis::generate_rate_table(x, &grid).map_err(|e| Failure::usage(e.to_string()))?;
        if args.csv {
            let csv = table.to_csv();
            // one header for the whole output
            let body = if k == 0 {
                csv.as_str()
            } else {
                csv.split_once('\n').map_or("", |(_, b)| b)
            };
            write!(out, "{body}")?;
        } else {
            if k > 0 {
                writeln!(out)?;
            }
            write!(out, "{}", table.to_text())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_capacity(args: CapacityArgs) -> CliResult {
    let params = CodeParams::new(args.q, 1, args.x).map_err(|e| Failure::usage(e.to_string()))?;
    let c = analysis::capacity(&params).map_err(|e| Failure::data(e.to_string()))?;
    println!("{:.4}", c);
    eprintln!("normalized = {:.4}", c / f64::from(args.q).log2());
    Ok(())
}

fn cmd_check(args: CheckArgs) -> CliResult {
    if args.oracle {
        return check_oracle(args.code);
    }
    let code = build_code(args.code)?;
    let params = *code.params();
    let input = open_input(&args.input)?;
    let streams = read_streams(args.format, input, params)?;
    let label = unit(args.format);
    let bound = run_bound(&params);
    let mut violations = 0usize;
    let mut report = |msg: String| {
        violations += 1;
        eprintln!("{msg}");
    };
    for (n, stream) in &streams {
        let stream = match stream {
            Ok(s) => s,
            Err(e) => {
                report(format!("{label} {n}: {e}"));
                continue;
            }
        };
        for v in scan_forbidden(stream.levels(), &params).expect("levels validated") {
            report(format!(
                "{label} {n}: forbidden pattern with gap {} at offset {}",
                v.gap, v.start
            ));
        }
        if !stream.is_empty() {
            let (level, run) = max_run(stream.levels()).expect("nonempty");
            if run > bound {
                report(format!(
                    "{label} {n}: run of {run} x level {level} exceeds k_eff = {bound}"
                ));
            }
        }
        let x = params.x();
        for (k, frame) in stream.frames().enumerate() {
            if args.strict && k > 0 {
                let found = stream.bridge(k);
                let prev = stream.levels()[k * (code.m() + x) - x - 1];
                let expected = stream::bridging_pattern(prev, frame[0], &params);
                if found != expected.as_slice() {
                    report(format!(
                        "{label} {n}: bridge before frame {k} does not match the bridging rule"
                    ));
                }
            }
            let cw = Codeword::new(frame.to_vec(), &params).expect("levels validated");
            if let Err(e) = code.decode(&cw) {
                report(format!("{label} {n}: frame {k}: {e}"));
            }
        }
    }
    if violations > 0 {
        eprintln!("{violations} violation(s)");
        return Err(Failure {
            code: EXIT_VERIFY,
            message: String::new(),
        });
    }
    eprintln!("ok: {} stream(s) checked", streams.len());
    Ok(())
}

fn check_oracle(args: CodeArgs) -> CliResult {
    let params =
        CodeParams::new(args.q, args.m, args.x).map_err(|e| Failure::usage(e.to_string()))?;
    let table = CardinalityTable::for_params(params).map_err(|e| Failure::usage(e.to_string()))?;
    let code = oracle::enumerate(&params).map_err(|e| Failure::usage(e.to_string()))?;
    let mut problems = Vec::new();
    let n = table.count(params.m()).expect("in range");
    if BigUint::from(code.len()) != n {
        problems.push(format!(
            "enumerated {} words, recursion gives {n}",
            code.len()
        ));
    }
    let fstd = build_fstd(&params).count_strings(params.m());
    if fstd != n {
        problems.push(format!(
            "transfer matrix counts {fstd}, recursion gives {n}"
        ));
    }
    for (rank, w) in code.words().iter().enumerate() {
        match index_of_codeword(w, &table) {
            Ok(g) if g == BigUint::from(rank) => {}
            Ok(g) => problems.push(format!("word {w}: rule gives {g}, brute force {rank}")),
            Err(e) => problems.push(format!("word {w}: {e}")),
        }
        match codeword_of_index(&BigUint::from(rank), &table, params.m()) {
            Ok(back) if &back == w => {}
            Ok(back) => problems.push(format!("index {rank}: unranks to {back}, expected {w}")),
            Err(e) => problems.push(format!("index {rank}: {e}")),
        }
        if problems.len() > 20 {
            break;
        }
    }
    for p in &problems {
        eprintln!("{p}");
    }
    if problems.is_empty() {
        println!(
            "ok: {} words of {params} agree with brute force",
            code.len()
        );
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VERIFY,
            message: format!("{} mismatch(es)", problems.len()),
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Params(a) => cmd_params(a),
        Command::Tables(a) => cmd_tables(a),
        Command::Capacity(a) => cmd_capacity(a),
        Command::Check(a) => cmd_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
