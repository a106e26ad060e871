use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use gstar::homology::h1;
use gstar::knots::{dehn_fill, wirtinger, FillingSlope, KnotTable};
use gstar::normalform::FiniteOracle;
use gstar::pipeline::{
    build_gstar, construct_f1_f2, default_l_words, hypothesis_audit, parse_report, OracleChoice, Status, VertexInput,
};
use gstar::{smith_normal_form, FinitePresentation, IntMatrix, Word};

#[derive(Parser)]
#[command(name = "gstar", version, about = "Presentations, knot fillings and the enveloping amalgam G*")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Adjoin x, a_i = x b_i, s, t and print the prepared group with F1 and F2.
    Prepare { group: PathBuf },
    /// Wirtinger presentation and peripheral words of a tabulated knot.
    Wirtinger { table: PathBuf, name: String },
    /// Dehn filling of a tabulated knot along p/q.
    Fill {
        table: PathBuf,
        name: String,
        #[arg(short, allow_hyphen_values = true)]
        p: i64,
        #[arg(short, default_value_t = 1, allow_hyphen_values = true)]
        q: i64,
    },
    /// Build G* and print its report (audit not run).
    Embed {
        group: PathBuf,
        #[arg(long)]
        knot1: String,
        #[arg(long)]
        slope1: String,
        /// Generating words of L1 in A1; placeholder words when omitted.
        #[arg(long = "L1")]
        l1: Option<PathBuf>,
        #[arg(long)]
        knot2: String,
        #[arg(long)]
        slope2: String,
        #[arg(long = "L2")]
        l2: Option<PathBuf>,
        /// none | free | finite:<table-file> | abelian:<matrix-file>
        #[arg(long, default_value = "none")]
        oracle: String,
        /// Knot table; the bundled table when omitted.
        #[arg(long)]
        knots: Option<PathBuf>,
    },
    /// Rebuild G* from a report and run the hypothesis audit.
    Audit {
        report: PathBuf,
        #[arg(long, default_value_t = 8)]
        bound: usize,
        #[arg(long)]
        knots: Option<PathBuf>,
    },
    /// First homology of a presentation.
    H1 { group: PathBuf },
    /// Invariant factors of an integer matrix.
    Snf { matrix: PathBuf },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_group(path: &Path) -> Result<FinitePresentation> {
    FinitePresentation::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_table(path: Option<&Path>) -> Result<KnotTable> {
    match path {
        None => Ok(KnotTable::bundled()),
        Some(p) => KnotTable::parse(&read(p)?).with_context(|| format!("parsing {}", p.display())),
    }
}

/// One word per line, optionally prefixed by `word:`; `1` is the empty word.
fn read_words(path: &Path, p: &FinitePresentation) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for (i, raw) in read(path)?.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        let line = line.strip_prefix("word:").unwrap_or(line).trim();
        if line.is_empty() {
            continue;
        }
        let w = if line == "1" {
            Word::identity()
        } else {
            p.parse_word(line).with_context(|| format!("{}:{}", path.display(), i + 1))?
        };
        out.push(w);
    }
    Ok(out)
}

fn parse_oracle(arg: &str, g: &FinitePresentation) -> Result<OracleChoice> {
    let (kind, file) = match arg.split_once(':') {
        Some((k, f)) => (k, Some(Path::new(f))),
        None => (arg, None),
    };
    Ok(match (kind, file) {
        ("none", None) => OracleChoice::None,
        ("free", None) => OracleChoice::Free,
        ("finite", Some(f)) => OracleChoice::Finite(FiniteOracle::parse(&read(f)?, g.alphabet())?),
        ("abelian", Some(f)) => OracleChoice::Abelian(IntMatrix::parse(&read(f)?)?),
        _ => bail!("unrecognised oracle `{arg}`; expected none, free, finite:<file> or abelian:<file>"),
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Prepare { group } => {
            let g = read_group(&group)?;
            let pg = construct_f1_f2(&g, &OracleChoice::None)?;
            print!("{}", pg.prepared);
            for w in &pg.f1.words {
                println!("F1: {}", pg.prepared.format_word(w));
            }
            for w in &pg.f2.words {
                println!("F2: {}", pg.prepared.format_word(w));
            }
            for r in &pg.rename_log {
                println!("rename: {r}");
            }
        }
        Command::Wirtinger { table, name } => {
            let t = read_table(Some(&table))?;
            let w = wirtinger(t.get(&name)?);
            let p = &w.presentation;
            print!("{p}");
            println!("meridian: {}", p.format_word(&w.peripheral.meridian));
            println!("longitude: {}", p.format_word(&w.peripheral.longitude));
        }
        Command::Fill { table, name, p, q } => {
            let t = read_table(Some(&table))?;
            let w = wirtinger(t.get(&name)?);
            print!("{}", dehn_fill(&w.presentation, &w.peripheral, FillingSlope::new(p, q)?));
        }
        Command::Embed { group, knot1, slope1, l1, knot2, slope2, l2, oracle, knots } => {
            let g = read_group(&group)?;
            let table = read_table(knots.as_deref())?;
            let choice = parse_oracle(&oracle, &g)?;
            let pg = construct_f1_f2(&g, &choice)?;
            let a1 = VertexInput::from_knot(&table, &knot1, FillingSlope::parse(&slope1)?)?;
            let a2 = VertexInput::from_knot(&table, &knot2, FillingSlope::parse(&slope2)?)?;
            let l1 = match l1 {
                Some(f) => read_words(&f, &a1.presentation)?,
                None => default_l_words(&a1.presentation, pg.f1.rank),
            };
            let l2 = match l2 {
                Some(f) => read_words(&f, &a2.presentation)?,
                None => default_l_words(&a2.presentation, pg.f2.rank),
            };
            print!("{}", build_gstar(pg, a1, l1, a2, l2)?);
        }
        Command::Audit { report, bound, knots } => {
            let table = read_table(knots.as_deref())?;
            let mut r = parse_report(&read(&report)?, &table)?.report;
            let (audit, details) = hypothesis_audit(&r, bound);
            r.audit = audit;
            r.details = details;
            print!("{r}");
            if r.audit.iter().any(|e| e.status == Status::Falsified) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::H1 { group } => println!("{}", h1(&read_group(&group)?)),
        Command::Snf { matrix } => {
            let m = IntMatrix::parse(&read(&matrix)?)?;
            let d: Vec<String> = smith_normal_form(&m).iter().map(|x| x.to_string()).collect();
            println!("{}", d.join(" "));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
