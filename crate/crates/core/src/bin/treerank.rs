use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use treerank::experiments::{
    self, check_assertion_h, check_assertion_r, oracle_check, question_qbe2_evidence,
    verify_prop_be1, verify_prop_fe1, verify_prop_fe2_genus0, verify_theorem_be2,
    verify_theorem_eb1, AssertionROptions, CellOutcome, CellRow, CellStatus, EvidenceOptions,
    ExperimentConfig, ExperimentReport, WitnessCertificate,
};
use treerank::field::PrimeField;
use treerank::trees::TreeType;
use treerank::Result;

#[derive(Parser)]
#[command(
    name = "treerank",
    version,
    about = "Maximal-rank witnesses for trees of lines on hypersurfaces over F_p"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Field characteristic.
    #[arg(long, global = true, default_value_t = experiments::DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Attempt budget per cell.
    #[arg(long, global = true, default_value_t = experiments::DEFAULT_ATTEMPTS)]
    attempts: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write every certificate as its own JSON file in this directory.
    #[arg(long, global = true)]
    cert_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    t_min: Option<u32>,
    #[arg(long, global = true)]
    t_max: Option<u32>,
    /// Comma-separated primes for cross-prime runs.
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Vec<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal-rank witnesses on a random cubic surface, with the small-degree exceptions.
    Be2 {
        #[arg(long, default_value_t = 1)]
        d_min: usize,
        #[arg(long, default_value_t = 12)]
        d_max: usize,
    },
    /// Bamboo-only evidence sweep, optionally across several primes.
    Qbe2 {
        #[arg(long, default_value_t = 5)]
        d_min: usize,
        #[arg(long, default_value_t = 10)]
        d_max: usize,
        /// Minimum bamboos per degree and prime.
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Bamboo witness on a quadric of given rank.
    Eb1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rho: usize,
        #[arg(long)]
        d: usize,
    },
    /// Half-degree bamboo on a smooth quadric, with a linking point in the odd case.
    AssertR {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: u32,
        /// Allow n = 3.
        #[arg(long)]
        allow_n3: bool,
    },
    /// Critical-degree tree on a cubic surface with (h0, h1) = (1, 0).
    AssertH {
        #[arg(long)]
        t: u32,
    },
    /// Points of trees on a smooth quadric against bidegree (a, b) forms.
    Be1Bigraded {
        #[arg(long, default_value_t = 4)]
        a_max: u32,
        #[arg(long, default_value_t = 4)]
        b_max: u32,
        #[arg(long, default_value_t = 12)]
        d_max: usize,
        /// Types sampled per cell.
        #[arg(long, default_value_t = 5)]
        types: usize,
    },
    /// Vanishing ranges for trees, on random W and on a multiple hyperplane.
    Fe1 {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: u32,
        /// Sweep t = 1..=t_upto; --t-min/--t-max override.
        #[arg(long, default_value_t = 6)]
        t_upto: u32,
        /// Comma-separated degrees; defaults depend on the bounds.
        #[arg(long, value_delimiter = ',')]
        d: Vec<usize>,
        /// A fixed type as comma-separated parents of lines 2..=d.
        #[arg(long, value_delimiter = ',')]
        tau: Vec<usize>,
        #[arg(long, default_value_t = experiments::ranges::FE_SAMPLES)]
        samples: usize,
    },
    /// Vanishing ranges for random rational curves.
    Fe2G0 {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, value_delimiter = ',', default_value = "1,3,12")]
        d: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        t: Vec<u32>,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Recompute a stored certificate and compare.
    Replay { path: PathBuf },
    /// Divisibility route against direct point evaluation.
    OracleCheck {
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

fn config(c: &Common) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(PrimeField::new(c.prime)?, c.seed);
    cfg.attempts = c.attempts;
    cfg.primes = c.primes.clone();
    cfg.t_range = match (c.t_min, c.t_max) {
        (None, None) => None,
        (a, b) => Some((a.unwrap_or(1), b.unwrap_or(a.unwrap_or(1)))),
    };
    Ok(cfg)
}

fn single(
    name: &str,
    cfg: &ExperimentConfig,
    params: &[(&str, u64)],
    cert: WitnessCertificate,
) -> ExperimentReport {
    let mut report = ExperimentReport::new(name, cfg.seed, vec![cfg.field.p()]);
    for (k, v) in params {
        report.parameter(k, v);
    }
    let mut cell = CellOutcome::new(params, CellStatus::WitnessFound);
    cell.rows = cert.profile.rows.iter().map(CellRow::from).collect();
    if let Some(l) = &cert.linking {
        cell.note = Some(format!(
            "linking point on line {}: {:?} -> {:?}",
            l.line,
            l.before.pair(),
            l.after.pair()
        ));
    }
    report.push(cell, Some(cert));
    report.finish(true);
    report
}

fn twists(c: &Common, upto: u32) -> Vec<u32> {
    let lo = c.t_min.unwrap_or(1);
    let hi = c.t_max.unwrap_or(upto);
    (lo..=hi).collect()
}

fn run(cli: &Cli) -> Result<Option<ExperimentReport>> {
    let c = &cli.common;
    let cfg = config(c)?;
    Ok(Some(match &cli.command {
        Command::Be2 { d_min, d_max } => {
            let ds: Vec<usize> = (*d_min..=*d_max).collect();
            verify_theorem_be2(&cfg, &ds)?
        }
        Command::Qbe2 {
            d_min,
            d_max,
            samples,
        } => {
            let ds: Vec<usize> = (*d_min..=*d_max).collect();
            question_qbe2_evidence(&cfg, &ds, &EvidenceOptions { samples: *samples })?
        }
        Command::Eb1 { n, rho, d } => {
            let cert = verify_theorem_eb1(&cfg, *n, *rho, *d)?;
            single(
                "eb1",
                &cfg,
                &[("n", *n as u64), ("rho", *rho as u64), ("d", *d as u64)],
                cert,
            )
        }
        Command::AssertR { n, t, allow_n3 } => {
            let opts = AssertionROptions {
                allow_n3: *allow_n3,
                ..Default::default()
            };
            let cert = check_assertion_r(&cfg, *n, *t, &opts)?;
            single(
                "assert-r",
                &cfg,
                &[("n", *n as u64), ("t", *t as u64)],
                cert,
            )
        }
        Command::AssertH { t } => {
            let cert = check_assertion_h(&cfg, *t)?;
            single("assert-h", &cfg, &[("t", *t as u64)], cert)
        }
        Command::Be1Bigraded {
            a_max,
            b_max,
            d_max,
            types,
        } => verify_prop_be1(&cfg, *a_max, *b_max, *d_max, *types)?,
        Command::Fe1 {
            n,
            k,
            t_upto,
            d,
            tau,
            samples,
        } => {
            let ttype = if tau.is_empty() {
                None
            } else {
                Some(TreeType::new(tau.len() + 1, tau.clone())?)
            };
            let ds = (!d.is_empty()).then_some(d.as_slice());
            verify_prop_fe1(
                &cfg,
                *n,
                *k,
                &twists(c, *t_upto),
                ds,
                ttype.as_ref(),
                *samples,
            )?
        }
        Command::Fe2G0 {
            n,
            k,
            d,
            t,
            samples,
        } => verify_prop_fe2_genus0(&cfg, *n, *k, d, t, *samples)?,
        Command::Replay { path } => {
            let cert = WitnessCertificate::load(path)?;
            let verdict = cert.replay()?;
            println!(
                "replayed {} ({}): {verdict}, profile identical",
                path.display(),
                cert.label
            );
            return Ok(None);
        }
        Command::OracleCheck { count } => oracle_check(&cfg, *count)?,
    }))
}

fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|ch| {
            if ch.is_ascii_alphanumeric() || ch == '-' {
                ch
            } else {
                '_'
            }
        })
        .collect()
}

fn emit(c: &Common, report: &ExperimentReport) -> Result<()> {
    let mut buf = Vec::new();
    match c.format {
        Format::Json => {
            buf.extend_from_slice(report.to_json()?.as_bytes());
            buf.push(b'\n');
        }
        Format::Csv => report.write_csv(&mut buf)?,
    }
    match &c.out {
        Some(path) => fs::write(path, buf)?,
        None => io::stdout().write_all(&buf)?,
    }
    if let Some(dir) = &c.cert_dir {
        fs::create_dir_all(dir)?;
        for (i, cert) in report.certificates.iter().enumerate() {
            let name = format!("{:03}_{}.json", i, file_stem(&cert.label));
            cert.save(&Path::new(dir).join(name))?;
        }
    }
    eprint!("{}", report.render_summary());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|r| {
        if let Some(report) = &r {
            emit(&cli.common, report)?;
        }
        Ok(r)
    }) {
        Ok(Some(report)) if !report.red_flags.is_empty() => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
