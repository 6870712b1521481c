//! Command-line front end: the encoder file format, the report printers,
//! and the subcommand implementations.
//!
//! Exit codes are stable: 0 means the command ran and the encoder is
//! non-catastrophic (or the command has no verdict), 2 means it ran and the
//! encoder is catastrophic, and 1 is any error. Every report has a
//! `--machine` mode printing one `key=value` line per field.
//!
//! Encoder file format, line oriented with `#` comments and blank lines
//! ignored:
//!
//! ```text
//! p k n
//! <k lines of n binary polynomials>   (constituent 1)
//! ...                                  (through constituent p)
//! den <binary polynomial>              (optional, rational encoders)
//! ```
//!
//! Polynomials are little-endian by degree: `11` is `1 + D`, `101` is
//! `1 + D^2`, `0` is zero.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::catastrophic::{
    convert, periodic_check, verify_same_code, CatastrophicError, CatastrophicReport, Verdict,
};
use crate::encoder::{BitStream, PeriodicEncoder, RationalPeriodicEncoder, TimeInvariantEncoder};
use crate::gf2poly::{coeff_op_count, Poly};
use crate::oracle::{oracle_check, realize_periodic, realize_rational, OracleVerdict, StateGraph};
use crate::polymatrix::PolyMatrix;
use crate::tvece::build_tvece;

/// A parsed encoder file: either purely polynomial or over a denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedEncoder {
    Periodic(PeriodicEncoder),
    Rational(RationalPeriodicEncoder),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}, column {column}: {msg}")]
    SyntaxAt {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("line {line}: {msg}")]
    Semantic { line: usize, msg: String },
}

/// Whitespace-separated tokens of one line with their 1-based start columns,
/// after stripping any `#` comment.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let body = match line.find('#') {
        Some(at) => &line[..at],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push((s + 1, &body[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push((s + 1, &body[s..]));
    }
    tokens
}

fn parse_poly(line: usize, column: usize, token: &str) -> Result<Poly, FileError> {
    token.parse().map_err(|e| match e {
        crate::gf2poly::ParsePolyError::Empty => FileError::SyntaxAt {
            line,
            column,
            msg: "empty polynomial".into(),
        },
        crate::gf2poly::ParsePolyError::BadChar { ch, pos } => FileError::SyntaxAt {
            line,
            column: column + pos,
            msg: format!("invalid character {ch:?} in polynomial, expected '0' or '1'"),
        },
    })
}

fn parse_count(line: usize, column: usize, token: &str, what: &str) -> Result<usize, FileError> {
    let v: usize = token.parse().map_err(|_| FileError::SyntaxAt {
        line,
        column,
        msg: format!("{what} must be a positive integer, got {token:?}"),
    })?;
    if v == 0 {
        return Err(FileError::SyntaxAt {
            line,
            column,
            msg: format!("{what} must be at least 1"),
        });
    }
    Ok(v)
}

/// Parse the encoder file format.
pub fn parse_encoder_str(text: &str) -> Result<ParsedEncoder, FileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokenize(l)))
        .filter(|(_, toks)| !toks.is_empty());

    let (header_line, header) = lines.next().ok_or(FileError::Syntax {
        line: 1,
        msg: "missing header line `p k n`".into(),
    })?;
    if header.len() != 3 {
        return Err(FileError::Syntax {
            line: header_line,
            msg: format!("header must be `p k n`, got {} tokens", header.len()),
        });
    }
    let p = parse_count(header_line, header[0].0, header[0].1, "period p")?;
    let k = parse_count(header_line, header[1].0, header[1].1, "input count k")?;
    let n = parse_count(header_line, header[2].0, header[2].1, "output count n")?;
    if k >= n {
        return Err(FileError::Semantic {
            line: header_line,
            msg: format!("encoder rate requires k < n, got k={k}, n={n}"),
        });
    }

    let mut constituents = Vec::with_capacity(p);
    for c in 0..p {
        let mut rows = Vec::with_capacity(k);
        for r in 0..k {
            let (line, tokens) = lines.next().ok_or(FileError::Syntax {
                line: header_line,
                msg: format!(
                    "missing row {} of constituent {}: expected {} rows of {} polynomials",
                    r + 1,
                    c + 1,
                    k * p,
                    n
                ),
            })?;
            if tokens.len() != n {
                return Err(FileError::Syntax {
                    line,
                    msg: format!(
                        "constituent {} row {} must have {} polynomials, got {}",
                        c + 1,
                        r + 1,
                        n,
                        tokens.len()
                    ),
                });
            }
            let mut row = Vec::with_capacity(n);
            for (col, tok) in tokens {
                row.push(parse_poly(line, col, tok)?);
            }
            rows.push(row);
        }
        let matrix = PolyMatrix::from_rows(rows).expect("shape enforced above");
        let enc = TimeInvariantEncoder::new(matrix).expect("k < n checked above");
        constituents.push(enc);
    }
    let base = PeriodicEncoder::new(constituents).expect("uniform shape by construction");

    let mut den = None;
    if let Some((line, tokens)) = lines.next() {
        if tokens[0].1 != "den" {
            return Err(FileError::Syntax {
                line,
                msg: format!(
                    "unexpected content after the {} constituent rows (only a `den` line may follow)",
                    p * k
                ),
            });
        }
        if tokens.len() != 2 {
            return Err(FileError::Syntax {
                line,
                msg: "`den` line must be `den <polynomial>`".into(),
            });
        }
        let d = parse_poly(line, tokens[1].0, tokens[1].1)?;
        if !d.constant_term() {
            return Err(FileError::Semantic {
                line,
                msg: "denominator constant term must be 1 (causal feedback)".into(),
            });
        }
        den = Some(d);
    }
    if let Some((line, _)) = lines.next() {
        return Err(FileError::Syntax {
            line,
            msg: "unexpected content after encoder definition".into(),
        });
    }

    Ok(match den {
        None => ParsedEncoder::Periodic(base),
        Some(d) => ParsedEncoder::Rational(
            RationalPeriodicEncoder::new(base, d).expect("constant term checked"),
        ),
    })
}

/// Canonical file text for a polynomial periodic encoder.
pub fn print_periodic(e: &PeriodicEncoder) -> String {
    let mut out = format!("{} {} {}\n", e.period(), e.k(), e.n());
    for c in e.constituents() {
        for r in 0..c.k() {
            let row: Vec<String> = (0..c.n())
                .map(|j| c.matrix().get(r, j).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Canonical file text for a rational periodic encoder; always carries the
/// `den` line so the variant round-trips.
pub fn print_rational(e: &RationalPeriodicEncoder) -> String {
    format!("{}den {}\n", print_periodic(e.base()), e.den())
}

pub fn print_encoder(e: &ParsedEncoder) -> String {
    match e {
        ParsedEncoder::Periodic(p) => print_periodic(p),
        ParsedEncoder::Rational(r) => print_rational(r),
    }
}

/// Conventional octal rendering of generator taps: the coefficient string
/// `c0 c1 ... cm` read most-significant-first, left-padded with zeros to a
/// multiple of three. `1+D` is `3`, `1+D^2` is `5`.
pub fn poly_to_octal(p: &Poly) -> String {
    let bits: Vec<u8> = match p.degree().finite() {
        None => return "0".into(),
        Some(d) => (0..=d).map(|i| p.coeff(i) as u8).collect(),
    };
    let pad = (3 - bits.len() % 3) % 3;
    let mut padded = vec![0u8; pad];
    padded.extend(bits);
    padded
        .chunks(3)
        .map(|c| char::from_digit((c[0] * 4 + c[1] * 2 + c[2]) as u32, 8).expect("octal digit"))
        .collect()
}

#[derive(Parser)]
#[command(
    name = "tvcc",
    about = "Catastrophicity analysis for periodically time-varying convolutional encoders",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MachineFlag {
    /// Emit one key=value line per report field
    #[arg(long)]
    machine: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Divisor test: decide whether an encoder is catastrophic
    Check {
        file: PathBuf,
        #[command(flatten)]
        machine: MachineFlag,
        /// Also show polynomials in conventional octal tap notation
        #[arg(long)]
        octal: bool,
    },
    /// Build the blocked time-invariant equivalent encoder
    Tvece {
        file: PathBuf,
        /// Write the equivalent encoder file here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        machine: MachineFlag,
    },
    /// Convert a catastrophic encoder into a non-catastrophic one
    Convert {
        file: PathBuf,
        /// Where to write the converted encoder file
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        machine: MachineFlag,
        /// Random trials for the same-code verification (0 skips it)
        #[arg(long, default_value_t = 100)]
        verify_trials: usize,
        /// Epochs per verification trial
        #[arg(long, default_value_t = 64)]
        verify_len: usize,
        /// Seed for the randomized verification
        #[arg(long, default_value_t = 0xC0FFEE)]
        seed: u64,
    },
    /// Encode an input bit stream
    Encode {
        file: PathBuf,
        /// Input bits, width k per epoch (whitespace and commas ignored)
        #[arg(long)]
        input: String,
        /// Output length in epochs (default: input length)
        #[arg(long)]
        len: Option<usize>,
        /// Append m zero tail epochs to drain the registers
        #[arg(long)]
        tail: bool,
        #[command(flatten)]
        machine: MachineFlag,
    },
    /// State-graph search: the brute-force catastrophicity verdict
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        machine: MachineFlag,
    },
    /// Compare divisor-test cost against state-graph cost over a family of
    /// growing memory
    Bench {
        #[arg(long, default_value_t = 2)]
        m_min: usize,
        #[arg(long, default_value_t = 14)]
        m_max: usize,
        #[command(flatten)]
        machine: MachineFlag,
    },
}

/// Run the CLI on explicit arguments (argv\[0\] included); returns the exit code.
pub fn main_with_args<I>(args: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage text; keep every failure on
            // exit code 1 so 2 stays reserved for the catastrophic verdict
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { 0 } else { 1 };
        }
    };
    let result = match cli.command {
        Command::Check {
            file,
            machine,
            octal,
        } => cmd_check(&file, machine.machine, octal),
        Command::Tvece {
            file,
            output,
            machine,
        } => cmd_tvece(&file, output.as_deref(), machine.machine),
        Command::Convert {
            file,
            output,
            machine,
            verify_trials,
            verify_len,
            seed,
        } => cmd_convert(
            &file,
            &output,
            machine.machine,
            verify_trials,
            verify_len,
            seed,
        ),
        Command::Encode {
            file,
            input,
            len,
            tail,
            machine,
        } => cmd_encode(&file, &input, len, tail, machine.machine),
        Command::Oracle { file, machine } => cmd_oracle(&file, machine.machine),
        Command::Bench {
            m_min,
            m_max,
            machine,
        } => cmd_bench(m_min, m_max, machine.machine),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn load(path: &std::path::Path) -> Result<ParsedEncoder, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_encoder_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// The divisor test needs a polynomial encoder; a denominator of 1 is
/// already polynomial, anything else is redirected to the oracle.
fn require_polynomial(parsed: ParsedEncoder) -> Result<PeriodicEncoder, String> {
    match parsed {
        ParsedEncoder::Periodic(e) => Ok(e),
        ParsedEncoder::Rational(r) if r.den().is_one() => Ok(r.base().clone()),
        ParsedEncoder::Rational(_) => Err(
            "encoder has a non-trivial denominator; the divisor test applies to polynomial \
             encoders (use the oracle command instead)"
                .into(),
        ),
    }
}

fn write_or_stdout(path: Option<&std::path::Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report_lines(report: &CatastrophicReport, machine: bool, octal: bool) -> String {
    if machine {
        let verdict = match report.verdict {
            Verdict::Catastrophic => "CATASTROPHIC",
            Verdict::NonCatastrophic => "NON-CATASTROPHIC",
        };
        format!(
            "verdict={verdict}\nf={}\nl={}\ng={}\n",
            report.f, report.delay_l, report.g
        )
    } else {
        let oct = |p: &Poly| {
            if octal {
                format!(" (oct {})", poly_to_octal(p))
            } else {
                String::new()
            }
        };
        match report.verdict {
            Verdict::Catastrophic => format!(
                "CATASTROPHIC f={}{} l={} g={}{}\n",
                report.f,
                oct(&report.f),
                report.delay_l,
                report.g,
                oct(&report.g)
            ),
            Verdict::NonCatastrophic => format!(
                "NON-CATASTROPHIC f={}{} l={}\n",
                report.f,
                oct(&report.f),
                report.delay_l
            ),
        }
    }
}

fn cmd_check(file: &std::path::Path, machine: bool, octal: bool) -> Result<i32, String> {
    let encoder = require_polynomial(load(file)?)?;
    let report = periodic_check(&encoder).map_err(|e| e.to_string())?;
    print!("{}", report_lines(&report, machine, octal));
    Ok(match report.verdict {
        Verdict::Catastrophic => 2,
        Verdict::NonCatastrophic => 0,
    })
}

fn cmd_tvece(
    file: &std::path::Path,
    output: Option<&std::path::Path>,
    machine: bool,
) -> Result<i32, String> {
    let encoder = require_polynomial(load(file)?)?;
    let t = build_tvece(&encoder);
    let blocked = t.encoder();
    if machine {
        let mut out = String::new();
        let _ = writeln!(out, "source_p={}", t.source_p());
        let _ = writeln!(out, "k={}", blocked.k());
        let _ = writeln!(out, "n={}", blocked.n());
        let _ = writeln!(out, "m={}", blocked.memory());
        for r in 0..blocked.k() {
            for c in 0..blocked.n() {
                let _ = writeln!(out, "g_{r}_{c}={}", blocked.matrix().get(r, c));
            }
        }
        print!("{out}");
        return Ok(0);
    }
    let text = format!(
        "# blocked equivalent: p={} k={} n={} m={} -> k'={} n'={} m'={}\n{}",
        t.source_p(),
        encoder.k(),
        encoder.n(),
        encoder.memory(),
        blocked.k(),
        blocked.n(),
        blocked.memory(),
        print_periodic(&PeriodicEncoder::from_time_invariant(blocked.clone()))
    );
    write_or_stdout(output, &text)?;
    Ok(0)
}

fn cmd_convert(
    file: &std::path::Path,
    output: &std::path::Path,
    machine: bool,
    verify_trials: usize,
    verify_len: usize,
    seed: u64,
) -> Result<i32, String> {
    let encoder = require_polynomial(load(file)?)?;
    let report = periodic_check(&encoder).map_err(|e| e.to_string())?;
    let converted = convert(&encoder).map_err(|e| match e {
        CatastrophicError::NotCatastrophic => {
            "encoder is not catastrophic; nothing to convert".into()
        }
        other => other.to_string(),
    })?;
    if report.delay_l > 0 {
        eprintln!(
            "note: minor gcd carries the delay factor D^{}; dividing by the delay-free part only",
            report.delay_l
        );
    }
    let exact = converted.den().is_one();

    let verify = if verify_trials > 0 {
        let ok = verify_same_code(&encoder, &converted, verify_trials, verify_len, seed)
            .map_err(|e| e.to_string())?;
        if !ok {
            return Err("same-code verification failed on the converted encoder".into());
        }
        "pass"
    } else {
        "skipped"
    };
    let oracle = match realize_rational(&converted) {
        Ok(graph) => {
            if oracle_check(&graph).is_catastrophic() {
                return Err("state-graph check found the converted encoder catastrophic".into());
            }
            "NON-CATASTROPHIC"
        }
        Err(_) => "skipped",
    };

    std::fs::write(output, print_rational(&converted))
        .map_err(|e| format!("{}: {e}", output.display()))?;

    if machine {
        print!(
            "f={}\nl={}\ng={}\nden={}\nexact={exact}\nverify={verify}\noracle={oracle}\n",
            report.f,
            report.delay_l,
            report.g,
            converted.den()
        );
    } else {
        println!(
            "CONVERTED f={} l={} g={} den={} exact={} verify={} oracle={}",
            report.f,
            report.delay_l,
            report.g,
            converted.den(),
            if exact { "yes" } else { "no" },
            verify,
            oracle
        );
    }
    Ok(0)
}

fn parse_input_bits(input: &str, width: usize) -> Result<BitStream, String> {
    let mut bits = Vec::new();
    for ch in input.chars() {
        match ch {
            '0' => bits.push(0u8),
            '1' => bits.push(1u8),
            c if c.is_whitespace() || c == ',' => {}
            c => {
                return Err(format!(
                    "invalid input character {c:?}, expected '0' or '1'"
                ))
            }
        }
    }
    BitStream::from_bits(width, &bits).map_err(|e| e.to_string())
}

fn cmd_encode(
    file: &std::path::Path,
    input: &str,
    len: Option<usize>,
    tail: bool,
    machine: bool,
) -> Result<i32, String> {
    let parsed = load(file)?;
    let (k, memory) = match &parsed {
        ParsedEncoder::Periodic(e) => (e.k(), e.memory()),
        ParsedEncoder::Rational(r) => (r.k(), r.base().memory()),
    };
    let u = parse_input_bits(input, k)?;
    let out_len = len.unwrap_or(u.len()) + if tail { memory } else { 0 };
    let out = match &parsed {
        ParsedEncoder::Periodic(e) => e
            .encode_serial(&u.zero_extended(out_len).truncated(out_len))
            .map_err(|e| e.to_string())?,
        ParsedEncoder::Rational(r) => r.encode(&u, out_len).map_err(|e| e.to_string())?,
    };
    if machine {
        let flat: String = out
            .bits()
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect();
        print!("epochs={}\nout={flat}\n", out.len());
    } else {
        println!("{out}");
    }
    Ok(0)
}

fn cmd_oracle(file: &std::path::Path, machine: bool) -> Result<i32, String> {
    let parsed = load(file)?;
    let graph: StateGraph = match &parsed {
        ParsedEncoder::Periodic(e) => realize_periodic(e).map_err(|e| e.to_string())?,
        ParsedEncoder::Rational(r) => realize_rational(r).map_err(|e| e.to_string())?,
    };
    let verdict = oracle_check(&graph);
    if machine {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "verdict={}",
            if verdict.is_catastrophic() {
                "CATASTROPHIC"
            } else {
                "NON-CATASTROPHIC"
            }
        );
        let _ = writeln!(out, "state_bits={}", graph.state_bits());
        let _ = writeln!(out, "edges={}", graph.edge_count());
        if let OracleVerdict::Catastrophic(w) = &verdict {
            let _ = writeln!(out, "witness_len={}", w.len());
            for (i, line) in w.to_string().lines().enumerate() {
                let _ = writeln!(out, "witness_{i}={line}");
            }
        }
        print!("{out}");
    } else {
        match &verdict {
            OracleVerdict::Catastrophic(w) => {
                println!(
                    "CATASTROPHIC (oracle) state_bits={} edges={}",
                    graph.state_bits(),
                    graph.edge_count()
                );
                println!("witness cycle (phase state input -> next / output):");
                println!("{w}");
            }
            OracleVerdict::NonCatastrophic => {
                println!(
                    "NON-CATASTROPHIC (oracle) state_bits={} edges={}",
                    graph.state_bits(),
                    graph.edge_count()
                );
            }
        }
    }
    Ok(if verdict.is_catastrophic() { 2 } else { 0 })
}

/// Benchmark family: `[1 + D^m, (1 + D^m)(1 + D)]`, catastrophic for every
/// m, with divisor-test cost flat-to-linear in m and state-graph cost
/// doubling per unit m.
fn bench_encoder(m: usize) -> PeriodicEncoder {
    let a = &Poly::one() + &Poly::monomial(m);
    let b = &a * &(&Poly::one() + &Poly::monomial(1));
    let g = PolyMatrix::from_rows(vec![vec![a, b]]).expect("one row");
    PeriodicEncoder::from_time_invariant(TimeInvariantEncoder::new(g).expect("rate 1/2"))
}

fn cmd_bench(m_min: usize, m_max: usize, machine: bool) -> Result<i32, String> {
    if m_min < 1 || m_min > m_max {
        return Err(format!("need 1 <= m-min <= m-max, got {m_min}..{m_max}"));
    }
    if !machine {
        println!(
            "{:>3} {:>10} {:>12} {:>13} {:>12}",
            "m", "gcd_ops", "gcd_ns", "oracle_edges", "oracle_ns"
        );
    }
    for m in m_min..=m_max {
        let e = bench_encoder(m);

        let ops_before = coeff_op_count();
        let t0 = Instant::now();
        let report = periodic_check(&e).map_err(|e| e.to_string())?;
        let gcd_ns = t0.elapsed().as_nanos();
        let gcd_ops = coeff_op_count() - ops_before;

        let t1 = Instant::now();
        let graph = realize_periodic(&e).map_err(|e| e.to_string())?;
        let oracle_verdict = oracle_check(&graph);
        let oracle_ns = t1.elapsed().as_nanos();
        let oracle_edges = graph.edge_count();

        if (report.verdict == Verdict::Catastrophic) != oracle_verdict.is_catastrophic() {
            return Err(format!("verdict disagreement at m={m}"));
        }

        if machine {
            print!(
                "gcd_ops_m{m}={gcd_ops}\ngcd_ns_m{m}={gcd_ns}\noracle_edges_m{m}={oracle_edges}\noracle_ns_m{m}={oracle_ns}\n"
            );
        } else {
            println!("{m:>3} {gcd_ops:>10} {gcd_ns:>12} {oracle_edges:>13} {oracle_ns:>12}");
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn parses_the_classic_file() {
        let parsed = parse_encoder_str("1 1 2\n11 101\n").unwrap();
        match parsed {
            ParsedEncoder::Periodic(e) => {
                assert_eq!(e.period(), 1);
                assert_eq!(e.k(), 1);
                assert_eq!(e.n(), 2);
                assert_eq!(e.memory(), 2);
                assert_eq!(e.constituent(0).matrix().get(0, 0), &p("11"));
                assert_eq!(e.constituent(0).matrix().get(0, 1), &p("101"));
            }
            ParsedEncoder::Rational(_) => panic!("expected periodic"),
        }
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let text = "# rate 1/2, period 2\n\n2 1 2\n11 101 # first constituent\n\n1 11\n";
        let parsed = parse_encoder_str(text).unwrap();
        match parsed {
            ParsedEncoder::Periodic(e) => assert_eq!(e.period(), 2),
            ParsedEncoder::Rational(_) => panic!("expected periodic"),
        }
    }

    #[test]
    fn parses_rational_files() {
        let parsed = parse_encoder_str("1 1 2\n11 101\nden 11\n").unwrap();
        match parsed {
            ParsedEncoder::Rational(r) => assert_eq!(r.den(), &p("11")),
            ParsedEncoder::Periodic(_) => panic!("expected rational"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_encoder_str("1 1 2\n11 1x1\n").unwrap_err();
        assert_eq!(
            err,
            FileError::SyntaxAt {
                line: 2,
                column: 5,
                msg: "invalid character 'x' in polynomial, expected '0' or '1'".into()
            }
        );

        let err = parse_encoder_str("1 1\n").unwrap_err();
        assert!(matches!(err, FileError::Syntax { line: 1, .. }));

        let err = parse_encoder_str("1 1 2\n11\n").unwrap_err();
        assert!(matches!(err, FileError::Syntax { line: 2, .. }));

        let err = parse_encoder_str("1 1 2\n11 101\n11 101\n").unwrap_err();
        assert!(matches!(err, FileError::Syntax { line: 3, .. }));
    }

    #[test]
    fn semantic_errors() {
        let err = parse_encoder_str("1 2 2\n1 1\n1 1\n").unwrap_err();
        assert!(matches!(err, FileError::Semantic { line: 1, .. }));

        let err = parse_encoder_str("1 1 2\n11 101\nden 01\n").unwrap_err();
        assert!(matches!(err, FileError::Semantic { line: 3, .. }));
    }

    #[test]
    fn print_round_trips_by_hand() {
        let text = "2 1 2\n11 101\n1 11\n";
        let parsed = parse_encoder_str(text).unwrap();
        assert_eq!(print_encoder(&parsed), text);

        let rational = "1 1 2\n11 101\nden 111\n";
        let parsed = parse_encoder_str(rational).unwrap();
        assert_eq!(print_encoder(&parsed), rational);
    }

    #[test]
    fn octal_rendering() {
        assert_eq!(poly_to_octal(&p("11")), "3");
        assert_eq!(poly_to_octal(&p("101")), "5");
        assert_eq!(poly_to_octal(&p("1")), "1");
        assert_eq!(poly_to_octal(&Poly::zero()), "0");
        // 1 + D + D^2 + D^3 + D^6: bits 1111001 -> 171 in the classic notation
        assert_eq!(poly_to_octal(&p("1111001")), "171");
    }

    #[test]
    fn input_bit_parsing() {
        let u = parse_input_bits("1 0, 1", 1).unwrap();
        assert_eq!(u.bits(), &[1, 0, 1]);
        assert!(parse_input_bits("102", 1).is_err());
        assert!(parse_input_bits("101", 2).is_err());
    }
}
