use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use km3_core::fm_lattices::{self, transcendental_index};
use km3_core::isometry_search::{compute_aut_d2, search};
use km3_core::kummer_structures::{construct, cross_check, decide, scan, DecisionReport, KummerError};
use km3_core::ns_lattice::{
    build_ns, min_ample_u, root_system_of_orthogonal, support_histogram, three_divisible_classes, Case,
    Configuration, DivisorClass, NSModel,
};
use km3_core::pell::{fundamental_solution, PellError};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "km3", version, about = "Lattice computations on generalized Kummer surfaces of order 3")]
struct Cli {
    /// Output format; csv is available for `pell` and `scan`.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for scan and search.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Fundamental solution of x^2 - D y^2 = 1.
    Pell {
        #[arg(value_name = "D")]
        d: u64,
    },
    /// The Neron-Severi lattice for a polarization.
    Ns {
        #[arg(value_name = "L2")]
        l2: u64,
    },
    /// Construct B1' and L' and apply the modular criterion.
    Decide {
        #[arg(value_name = "L2")]
        l2: u64,
        /// Also run the isometry search (skipped when L2 = 0 mod 18).
        #[arg(long)]
        search: bool,
    },
    /// Decide every admissible L2 in a range.
    Scan {
        min: u64,
        max: u64,
        /// Also run the isometry search (skipped when L2 = 0 mod 18).
        #[arg(long)]
        search: bool,
    },
    /// Isometries taking the standard configuration to the constructed one.
    Search {
        #[arg(value_name = "L2")]
        l2: u64,
    },
    /// The group preserving D2 and its 36 curves, for L2 = 20.
    Aut20,
    /// Lattice checks for the quotient map, with L_X = n1 z1 + ... + n4 z4.
    Fm {
        #[arg(num_args = 4, value_names = ["N1", "N2", "N3", "N4"], allow_negative_numbers = true)]
        n: Vec<i64>,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<KummerError> for Failure {
    fn from(e: KummerError) -> Self {
        match e {
            KummerError::Lattice(e) => Failure::Usage(e.to_string()),
            e => Failure::Domain(e.to_string()),
        }
    }
}

enum Output {
    Json(Value),
    Csv(Vec<u8>),
}

fn report(command: &str, case: Option<&str>, payload: impl Serialize) -> Value {
    let mut m = Map::new();
    m.insert("tool_version".into(), json!(TOOL_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("case".into(), json!(case));
    match serde_json::to_value(payload).expect("reports serialize") {
        Value::Object(p) => m.extend(p),
        other => {
            m.insert("rows".into(), other);
        }
    }
    Value::Object(m)
}

fn model(l2: u64) -> Result<NSModel, Failure> {
    build_ns(l2).map_err(|e| Failure::Usage(e.to_string()))
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Always)
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory write")
}

fn cmd_pell(d: u64, format: Format) -> Result<Output, Failure> {
    let f = fundamental_solution(d).map_err(|e| match e {
        PellError::InvalidD(_) => Failure::Usage(e.to_string()),
        e => Failure::Domain(e.to_string()),
    })?;
    Ok(match format {
        Format::Json => Output::Json(report("pell", None, &f)),
        Format::Csv => Output::Csv(csv_bytes(
            &["D", "x0", "y0", "tool_version"],
            [vec![d.to_string(), f.x0.to_string(), f.y0.to_string(), TOOL_VERSION.into()]],
        )),
    })
}

fn cmd_ns(l2: u64) -> Result<Output, Failure> {
    let ns = model(l2)?;
    let hist = support_histogram(&three_divisible_classes(&ns));
    let roots = root_system_of_orthogonal(&ns, &DivisorClass::l()).map_err(|e| Failure::Domain(e.to_string()))?;
    let payload = json!({
        "model": ns,
        "three_divisible_supports": hist,
        "roots_orthogonal_to_L": roots.types(),
        "min_ample_u": min_ample_u(&ns),
    });
    Ok(Output::Json(report("ns", Some(ns.case.tag()), payload)))
}

fn cmd_decide(l2: u64, with_search: bool) -> Result<Output, Failure> {
    let ns = model(l2)?;
    let mut r = decide(&ns)?;
    if with_search && ns.case != Case::ZeroMod18 {
        cross_check(&ns, &mut r)?;
    }
    Ok(Output::Json(report("decide", Some(ns.case.tag()), &r)))
}

fn scan_row(r: &DecisionReport) -> Vec<String> {
    vec![
        r.l2.to_string(),
        r.case.tag().into(),
        r.pell.x0.to_string(),
        r.pell.y0.to_string(),
        r.modulus.to_string(),
        r.residue.to_string(),
        r.two_structures.to_string(),
        r.search.map(|s| s.agrees.to_string()).unwrap_or_default(),
        TOOL_VERSION.into(),
    ]
}

fn cmd_scan(min: u64, max: u64, with_search: bool, format: Format) -> Result<Output, Failure> {
    if min > max {
        return Err(Failure::Usage(format!("empty range {min}..{max}")));
    }
    let rows = scan(min, max, with_search);
    Ok(match format {
        Format::Json => Output::Json(report("scan", None, json!({ "min": min, "max": max, "rows": rows }))),
        Format::Csv => Output::Csv(csv_bytes(
            &[
                "L2",
                "case",
                "x0",
                "y0",
                "modulus",
                "residue",
                "two_structures",
                "search_agrees",
                "tool_version",
            ],
            rows.iter().map(scan_row),
        )),
    })
}

fn cmd_search(l2: u64) -> Result<Output, Failure> {
    let ns = model(l2)?;
    let c = construct(&ns)?;
    let out = search(&ns, &Configuration::standard(), &c.configuration()).map_err(|e| Failure::Domain(e.to_string()))?;
    let mut payload = serde_json::to_value(&out).expect("reports serialize");
    payload["L2"] = json!(l2);
    payload["construction"] = serde_json::to_value(&c).expect("reports serialize");
    Ok(Output::Json(report("search", Some(ns.case.tag()), payload)))
}

fn cmd_aut20() -> Result<Output, Failure> {
    let ns = model(20)?;
    let g = compute_aut_d2(&ns).map_err(|e| Failure::Domain(e.to_string()))?;
    Ok(Output::Json(report("aut20", Some(ns.case.tag()), &g)))
}

fn cmd_fm(n: &[i64]) -> Result<Output, Failure> {
    let pol = [n[0], n[1], n[2], n[3]];
    let m = fm_lattices::build(pol).map_err(|e| Failure::Usage(e.to_string()))?;
    let case = if m.lx_square % 6 == 2 { "TWO_MOD6" } else { "ZERO_MOD6" };
    let mut payload = serde_json::to_value(&m).expect("reports serialize");
    payload["transcendental_index"] = json!(transcendental_index(&m));
    Ok(Output::Json(report("fm", Some(case), payload)))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let csv_ok = matches!(cli.command, Command::Pell { .. } | Command::Scan { .. });
    if cli.format == Format::Csv && !csv_ok {
        return Err(Failure::Usage("csv output is only available for pell and scan".into()));
    }
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.into())
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Pell { d } => cmd_pell(*d, cli.format),
        Command::Ns { l2 } => cmd_ns(*l2),
        Command::Decide { l2, search } => cmd_decide(*l2, *search),
        Command::Scan { min, max, search } => cmd_scan(*min, *max, *search, cli.format),
        Command::Search { l2 } => cmd_search(*l2),
        Command::Aut20 => cmd_aut20(),
        Command::Fm { n } => cmd_fm(n),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let bytes = match run(&cli) {
        Ok(Output::Json(v)) => {
            let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
            s.push('\n');
            s.into_bytes()
        }
        Ok(Output::Csv(b)) => b,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &bytes),
        None => io::stdout().lock().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
