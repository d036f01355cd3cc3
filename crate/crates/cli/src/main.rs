//! `wcf`: batch front end for the exact polygon and function-representation
//! library. Exit codes: 0 success or audit pass, 1 usage or input error,
//! 2 audit counterexample.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use wcf_core::diagonalizer::{self, AdversarySpec};
use wcf_core::exact::{constant_name, Name, Rational};
use wcf_core::exec::Exec;
use wcf_core::function_reps::catalog::PolySeqSpec;
use wcf_core::function_reps::{
    classify_constant, lsc_to_machine, machine_to_lsc_stages, machine_to_uwc_polyseq, max_of_lsc,
    uwc_polyseq_to_machine, PolygonSequence, StreamTransformer,
};
use wcf_core::polygon::{dyadic_grid, Polygon};
use wcf_core::sequences::catalog::SequenceSpec;
use wcf_core::sequences::{audit, CertifiedSequence, ConvergenceCertificate, HBound};

#[derive(Parser)]
#[command(name = "wcf", version, about = "Exact tools for weakly computable functions on [0, 1]")]
struct Cli {
    /// Run library loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a polygon at a rational point.
    Eval { polygon: PathBuf, x: Rational },
    /// Sup distance between two polygons.
    Dist { a: PathBuf, b: PathBuf },
    /// Audit a sequence file against a certificate.
    AuditSeq {
        sequence: PathBuf,
        #[command(flatten)]
        cert: CertArgs,
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
    /// Conversions between polygon sequences and machines.
    #[command(subcommand)]
    Convert(Convert),
    /// Maxima of an increasing polygon sequence.
    Maxof {
        polyseq: PathBuf,
        #[arg(long, default_value_t = 16)]
        terms: usize,
    },
    /// Class of the constant function given by a certified sequence.
    ClassifyConst {
        sequence: PathBuf,
        #[command(flatten)]
        cert: CertArgs,
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
    /// Run the diagonal construction against an adversary file.
    Diagonalize {
        #[arg(long)]
        adversaries: PathBuf,
        #[arg(long, default_value_t = 200)]
        stages: usize,
        /// Write the full report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate a polygon sequence on a dyadic grid.
    Emit {
        polyseq: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: u32,
        /// Emit stages `0..stages`.
        #[arg(long, default_value_t = 1)]
        stages: usize,
        #[arg(long, default_value = "csv")]
        format: String,
    },
}

#[derive(Subcommand)]
enum Convert {
    /// Outputs of the machine built from an increasing polygon sequence.
    LscToMachine {
        polyseq: PathBuf,
        #[command(flatten)]
        name: NameArgs,
        #[arg(long, default_value_t = 16)]
        outputs: usize,
    },
    /// Recover increasing polygons from the machine of a polygon sequence.
    MachineToLsc {
        polyseq: PathBuf,
        #[arg(long)]
        stage: usize,
        #[arg(long, default_value_t = 16)]
        grid_limit: u32,
    },
    /// Uniformly weakly computable conversions.
    Uwc {
        polyseq: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
        #[command(flatten)]
        name: NameArgs,
        #[arg(long, default_value_t = 16)]
        outputs: usize,
        /// Last recovered stage (to-polygons).
        #[arg(long, default_value_t = 4)]
        stage: usize,
        #[arg(long, default_value_t = 16)]
        grid_limit: u32,
        /// Stages audited for the 1/2 input budget (to-machine).
        #[arg(long, default_value_t = 64)]
        audit_depth: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    ToMachine,
    ToPolygons,
}

#[derive(Clone, Copy, ValueEnum)]
enum NameKind {
    Constant,
    Alternating,
    Truncations,
}

#[derive(Args)]
struct NameArgs {
    /// The point whose name is fed to the machine.
    #[arg(long)]
    x: Option<Rational>,
    #[arg(long, value_enum, default_value = "constant")]
    name: NameKind,
}

impl NameArgs {
    fn build(&self) -> Result<Name> {
        let x = self.x.clone().context("this conversion needs --x")?;
        if x.is_negative() || x > Rational::one() {
            bail!("x = {x} lies outside [0, 1]");
        }
        Ok(match self.name {
            NameKind::Constant => constant_name(x),
            NameKind::Alternating => Name::alternating(x),
            NameKind::Truncations => Name::dyadic_truncations(x),
        })
    }
}

#[derive(Args)]
struct CertArgs {
    /// effective, increasing, decreasing, weakly-effective, h-bounded, plain,
    /// or an inline certificate JSON object.
    #[arg(long)]
    cert: String,
    /// Budget for weakly-effective.
    #[arg(long)]
    budget: Option<Rational>,
    /// Comma-separated table for h-bounded.
    #[arg(long, value_delimiter = ',')]
    h: Vec<u64>,
}

impl CertArgs {
    fn build(&self) -> Result<ConvergenceCertificate> {
        if self.cert.trim_start().starts_with('{') {
            let c: ConvergenceCertificate = serde_json::from_str(&self.cert).context("certificate JSON")?;
            c.validate()?;
            return Ok(c);
        }
        Ok(match self.cert.replace('_', "-").as_str() {
            "effective" => ConvergenceCertificate::Effective,
            "increasing" => ConvergenceCertificate::Increasing,
            "decreasing" => ConvergenceCertificate::Decreasing,
            "plain" => ConvergenceCertificate::Plain,
            "weakly-effective" => {
                let b = self.budget.clone().context("weakly-effective needs --budget")?;
                ConvergenceCertificate::weakly_effective(b)?
            }
            "h-bounded" => ConvergenceCertificate::HBounded { h: HBound::new(self.h.clone())? },
            other => bail!("unknown certificate {other:?}"),
        })
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_polyseq(path: &Path) -> Result<PolygonSequence> {
    Ok(read_json::<PolySeqSpec>(path)?.build()?)
}

fn read_certified(path: &Path, cert: &CertArgs) -> Result<CertifiedSequence> {
    let seq = read_json::<SequenceSpec>(path)?.build()?;
    Ok(CertifiedSequence::new(seq, cert.build()?)?)
}

fn print_line(line: impl std::fmt::Display) -> Result<()> {
    writeln!(std::io::stdout().lock(), "{line}")?;
    Ok(())
}

fn print_json(value: &impl Serialize) -> Result<()> {
    print_line(serde_json::to_string_pretty(value)?)
}

fn text(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn machine_run(m: &StreamTransformer, name: &Name, outputs: usize) -> serde_json::Value {
    let usage: Vec<usize> = (1..=outputs).map(|n| m.usage(n)).collect();
    json!({ "outputs": text(&m.run(&name.seq, outputs)), "usage": usage })
}

fn polyseq_json(mode: serde_json::Value, polygons: &[Polygon]) -> serde_json::Value {
    let mut obj = mode;
    obj["polygons"] = serde_json::to_value(polygons).expect("polygons serialize");
    obj
}

fn convert(cmd: Convert, exec: Exec) -> Result<ExitCode> {
    match cmd {
        Convert::LscToMachine { polyseq, name, outputs } => {
            let m = lsc_to_machine(&read_polyseq(&polyseq)?)?;
            print_json(&machine_run(&m, &name.build()?, outputs))?;
        }
        Convert::MachineToLsc { polyseq, stage, grid_limit } => {
            let m = lsc_to_machine(&read_polyseq(&polyseq)?)?;
            let stages = machine_to_lsc_stages(&m, stage, grid_limit, exec)?;
            print_json(&polyseq_json(json!({ "mode": "increasing" }), &stages))?;
        }
        Convert::Uwc { polyseq, direction, name, outputs, stage, grid_limit, audit_depth } => {
            let ps = read_polyseq(&polyseq)?;
            let m = uwc_polyseq_to_machine(&ps, audit_depth)?;
            match direction {
                Direction::ToMachine => print_json(&machine_run(&m, &name.build()?, outputs))?,
                Direction::ToPolygons => {
                    let rec = machine_to_uwc_polyseq(&m, stage, grid_limit, exec)?;
                    let mode = serde_json::to_value(&rec.mode)?;
                    print_json(&polyseq_json(mode, &rec.gen.prefix(stage + 1)))?;
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn emit(polyseq: &Path, depth: u32, stages: usize, format: &str) -> Result<()> {
    if format != "csv" && format != "json" {
        bail!("unsupported format {format:?} (expected csv or json)");
    }
    let ps = read_polyseq(polyseq)?;
    let grid = dyadic_grid(depth);
    let rows: Vec<(usize, &Rational, Rational)> = (0..stages)
        .flat_map(|s| {
            let pg = ps.at(s);
            grid.iter().zip(pg.values_on(&grid)).map(move |(x, y)| (s, x, y))
        })
        .collect();
    let mut out = std::io::stdout().lock();
    if format == "csv" {
        writeln!(out, "s,x,y")?;
        for (s, x, y) in rows {
            writeln!(out, "{s},{x},{y}")?;
        }
    } else {
        let rows: Vec<_> = rows
            .into_iter()
            .map(|(s, x, y)| json!({ "s": s, "x": x.to_string(), "y": y.to_string() }))
            .collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match cli.command {
        Command::Eval { polygon, x } => {
            let pg: Polygon = read_json(&polygon)?;
            print_line(pg.eval(&x)?)?;
        }
        Command::Dist { a, b } => {
            let (a, b): (Polygon, Polygon) = (read_json(&a)?, read_json(&b)?);
            print_line(a.sup_distance(&b))?;
        }
        Command::AuditSeq { sequence, cert, depth } => {
            let report = audit(&read_certified(&sequence, &cert)?, depth);
            print_json(&report)?;
            if !report.pass {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Convert(c) => return convert(c, exec),
        Command::Maxof { polyseq, terms } => {
            let m = max_of_lsc(&read_polyseq(&polyseq)?)?;
            print_json(&json!({ "certificate": m.cert, "terms": text(&m.seq.prefix(terms)) }))?;
        }
        Command::ClassifyConst { sequence, cert, depth } => {
            let cs = read_certified(&sequence, &cert)?;
            let report = audit(&cs, depth);
            print_json(&json!({ "class": classify_constant(&cs), "audit": report }))?;
            if !report.pass {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Diagonalize { adversaries, stages, out } => {
            let advs = AdversarySpec::resolve(read_json(&adversaries)?);
            let (_, report) = diagonalizer::run(&advs, stages, exec)?;
            let verdicts = diagonalizer::verify_report(&report);
            let doc = json!({ "verdicts": verdicts, "report": report });
            match out {
                Some(path) => {
                    fs::write(&path, serde_json::to_string_pretty(&doc)?)
                        .with_context(|| format!("writing {}", path.display()))?;
                    for v in &verdicts {
                        let verdict = serde_json::to_value(v.verdict)?;
                        print_line(format!("e={} {}", v.e, verdict.as_str().unwrap_or("?")))?;
                    }
                }
                None => print_json(&doc)?,
            }
        }
        Command::Emit { polyseq, depth, stages, format } => emit(&polyseq, depth, stages, &format)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
