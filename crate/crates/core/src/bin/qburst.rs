//! Command-line front end: parameter derivation, stream encode/decode over
//! the one-word-per-line text format, and seeded verification campaigns.
//!
//! Exit codes: 0 on success, 2 on usage errors, 3 when a decode or campaign
//! trial fails, 1 on any other error.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qburst::harness::{run_campaign, BurstPlan, CampaignReport, CampaignSpec};
use qburst::params::{ParamMode, Params, SketchMode};
use qburst::sketch::SketchCache;
use qburst::Word;

#[derive(Parser)]
#[command(
    name = "qburst",
    version,
    about = "q-ary codes correcting a single burst of up to t deletions"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Derive code parameters and print them as key=value lines
    Params(CodeArgs),
    /// Encode messages read from stdin, one word per line, to codewords
    Encode(CodeArgs),
    /// Decode received words read from stdin, one word per line
    Decode(CodeArgs),
    /// Inject bursts into seeded random codewords and verify every decode
    Verify(CampaignArgs),
    /// Run a campaign and report per-stage timings
    Bench(CampaignArgs),
}

#[derive(Args)]
struct CodeArgs {
    /// Alphabet size
    #[arg(long)]
    q: u32,
    /// Maximum burst length the code corrects
    #[arg(long)]
    t: usize,
    /// Codeword payload length
    #[arg(long)]
    n: usize,
    /// Density threshold selection: compact | paper
    #[arg(long, default_value = "compact", value_parser = parse_mode)]
    mode: ParamMode,
    /// Window checksum layout: compressed | raw
    #[arg(long = "sketch-mode", default_value = "compressed", value_parser = parse_sketch_mode)]
    sketch_mode: SketchMode,
}

#[derive(Args)]
struct CampaignArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Campaign RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random messages to encode
    #[arg(long, default_value_t = 1)]
    messages: usize,
    /// Bursts per codeword: exhaustive | sample:<k>
    #[arg(long, default_value = "sample:32", value_parser = parse_burst_plan)]
    bursts: BurstPlan,
    /// Write the full JSON report to this path
    #[arg(long)]
    report: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<ParamMode, String> {
    match s {
        "compact" => Ok(ParamMode::Compact),
        "paper" => Ok(ParamMode::Paper),
        _ => Err(format!("'{s}' is neither 'compact' nor 'paper'")),
    }
}

fn parse_sketch_mode(s: &str) -> Result<SketchMode, String> {
    match s {
        "compressed" => Ok(SketchMode::Compressed),
        "raw" => Ok(SketchMode::Raw),
        _ => Err(format!("'{s}' is neither 'compressed' nor 'raw'")),
    }
}

fn parse_burst_plan(s: &str) -> Result<BurstPlan, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> qburst::Result<ExitCode> {
    match cli.cmd {
        Cmd::Params(args) => {
            let params = derive(&args)?;
            let mut out = std::io::stdout().lock();
            for (k, v) in params.to_kv_pairs() {
                writeln!(out, "{k}={v}").expect("stdout");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Encode(args) => {
            let params = derive(&args)?;
            let words = read_words(params.q)?;
            let mut cache = SketchCache::new();
            let mut out = std::io::BufWriter::new(std::io::stdout().lock());
            for u in &words {
                let z = qburst::codec::encode_with_cache(u, &params, &mut cache)?;
                writeln!(out, "{}", z.to_line()).expect("stdout");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Decode(args) => {
            let params = derive(&args)?;
            let words = read_words(params.q)?;
            let mut cache = SketchCache::new();
            let mut out = std::io::BufWriter::new(std::io::stdout().lock());
            for (i, y) in words.iter().enumerate() {
                match qburst::codec::decode_with_cache(y, &params, &mut cache) {
                    Ok(u) => writeln!(out, "{}", u.to_line()).expect("stdout"),
                    Err(e) => {
                        drop(out);
                        eprintln!("decode failed on line {}: {e}", i + 1);
                        return Ok(ExitCode::from(3));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify(args) => {
            let report = campaign(&args)?;
            print_summary(&report, false);
            finish(&args, &report)
        }
        Cmd::Bench(args) => {
            let report = campaign(&args)?;
            print_summary(&report, true);
            finish(&args, &report)
        }
    }
}

fn derive(args: &CodeArgs) -> qburst::Result<Params> {
    Params::derive(args.q, args.t, args.n, args.mode, args.sketch_mode)
}

fn campaign(args: &CampaignArgs) -> qburst::Result<CampaignReport> {
    run_campaign(&CampaignSpec {
        q: args.code.q,
        t: args.code.t,
        n: args.code.n,
        mode: args.code.mode,
        sketch_mode: args.code.sketch_mode,
        seed: args.seed,
        messages: args.messages,
        bursts: args.bursts,
    })
}

fn print_summary(report: &CampaignReport, timings: bool) {
    println!(
        "campaign: q={} t={} n={} mode={:?} sketch_mode={:?} seed={} messages={}",
        report.spec.q,
        report.spec.t,
        report.spec.n,
        report.spec.mode,
        report.spec.sketch_mode,
        report.spec.seed,
        report.spec.messages
    );
    println!(
        "trials={} failures={} passed={}",
        report.trials,
        report.failures.len(),
        report.passed
    );
    println!(
        "redundancy_symbols={} sketch_width={} slack_bits={:.3}",
        report.redundancy.redundancy_symbols,
        report.redundancy.sketch_width,
        report.redundancy.slack_bits
    );
    if timings {
        println!(
            "derive_ms={:.1} encode_ms={:.1} decode_ms={:.1} total_ms={:.1}",
            report.timings_ms.derive_ms,
            report.timings_ms.encode_ms,
            report.timings_ms.decode_ms,
            report.timings_ms.total_ms
        );
    }
    for f in report.failures.iter().take(10) {
        println!(
            "failure: message={} seed={} pos={} len={} stage={}",
            f.message_index, f.message_seed, f.burst_pos, f.burst_len, f.stage
        );
    }
    if report.failures.len() > 10 {
        println!("... and {} more failures", report.failures.len() - 10);
    }
}

fn finish(args: &CampaignArgs, report: &CampaignReport) -> qburst::Result<ExitCode> {
    if let Some(path) = &args.report {
        std::fs::write(path, report.to_json())
            .map_err(|e| qburst::Error::CampaignConfig(format!("writing {path:?}: {e}")))?;
    }
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn read_words(q: u32) -> qburst::Result<Vec<Word>> {
    let mut text = String::new();
    std::io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| qburst::Error::WordParse(format!("reading stdin: {e}")))?;
    Word::parse_words(q, &text)
}
