//! Command-line surface: series dumps, basis solving, and the verification
//! harness.
//!
//! Exit codes: 0 when every requested verdict passes, 1 when a verification
//! fails, 2 for malformed flags or out-of-domain parameters.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use eiscong_core::basis::{basis_exponents, solve_mod_pm};
use eiscong_core::bernoulli::{bernoulli, is_irregular_pair};
use eiscong_core::cache::SeriesCache;
use eiscong_core::eisenstein::{delta_series, EisensteinKind, EisensteinSpec};
use eiscong_core::error::Error;
use eiscong_core::operators::{ramanujan_serre, theta, WeightedSeries};
use eiscong_core::series::{padic_valuation, reduce_mod, QSeries};
use eiscong_core::text::{parse_series, write_qseries, write_residue, AnySeries};
use eiscong_core::verify::{
    sort_reports, verify_classical, verify_lemma, verify_product_identity, verify_theorem1,
    verify_theorem1_batch, verify_theorem2, verify_theorem3, CheckReport, ClassicalCheck,
    LemmaCheck, VerifyConfig, WitnessReport,
};

#[derive(Parser)]
#[command(name = "eiscong", version, about = "Exact verification of Eisenstein-series congruences modulo prime powers")]
struct Cli {
    /// Emit machine-readable JSON (one object per report line)
    #[arg(long, global = true)]
    json: bool,

    /// Directory holding cached series in the plain-text format
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy, Default)]
struct PolicyArgs {
    /// Override the number of q-coefficients checked
    #[arg(long)]
    prec: Option<usize>,

    /// Extra coefficients above the floor(w/12)+1 bound (default 8)
    #[arg(long)]
    margin: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print an exact Bernoulli number, optionally with its p-adic data
    Bernoulli {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Print a weight-k Eisenstein expansion in the series text format
    Eis {
        /// G (constant term -B_k/2k) or E (constant term 1)
        #[arg(long)]
        kind: String,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        prec: usize,
        /// Reduce modulo a prime power, written P^M (or a bare prime)
        #[arg(long, value_name = "P^M")]
        r#mod: Option<String>,
        /// Write the series to a file instead of stdout
        #[arg(long, value_name = "FILE")]
        dump: Option<PathBuf>,
    },
    /// Apply the theta operator or the weight-raising derivative
    Op {
        #[arg(long, conflicts_with = "partial", required_unless_present = "partial")]
        theta: bool,
        #[arg(long)]
        partial: bool,
        /// E, G, or Delta
        #[arg(long)]
        kind: String,
        /// Weight (ignored for Delta)
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        prec: usize,
        #[arg(long, value_name = "FILE")]
        dump: Option<PathBuf>,
    },
    /// List the monomial basis exponents of a weight
    Basis {
        #[arg(long)]
        w: u64,
    },
    /// Solve a target series against the weight-w monomial basis over Z/p^m
    Solve {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        w: u64,
        /// Series file in the text format (rational input is reduced first)
        #[arg(long, value_name = "FILE")]
        target: PathBuf,
    },
    /// Check the weighted Eisenstein-product identities for weight 2k
    Popa {
        #[arg(long)]
        k: u64,
        /// Single index; omit to sweep all 1 <= m <= 2k-3
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        prec: Option<usize>,
    },
    /// Run a named verification and report verdicts
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Low-weight witness congruence; omit --k0/--n to sweep the batch ranges
    Thm1 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k0: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// The weight-(p+1) description of E_2 modulo p^2
    Thm2 {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// E_{r p^{k-1}(p-1)} against E_{p-1}^{r p^{k-1}} modulo p^{k+1}
    Thm3 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u64,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// A classical congruence family by name
    Classical {
        #[arg(long)]
        p: u64,
        /// modp-weights, ek-one, par-epm1, chen-kiming, gp2, eisp2, gk-integrality
        #[arg(long)]
        which: String,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// A lemma-level check by name
    Lemma {
        /// eptheta, gprod, A4, partialE, binom-4bonus
        #[arg(long)]
        name: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k0: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// The weight-2k product identity sweep
    Popa {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        m: Option<u64>,
        #[command(flatten)]
        policy: PolicyArgs,
    },
}

fn parse_kind(text: &str) -> Result<EisensteinKind, Error> {
    match text {
        "G" | "g" => Ok(EisensteinKind::G),
        "E" | "e" => Ok(EisensteinKind::E),
        other => Err(Error::Parse(format!("kind must be G or E, got {other:?}"))),
    }
}

fn parse_prime_power(text: &str) -> Result<(u64, u32), Error> {
    let bad = || Error::Parse(format!("modulus must look like P^M, got {text:?}"));
    match text.split_once('^') {
        Some((p, m)) => {
            let p = p.parse().map_err(|_| bad())?;
            let m = m.parse().map_err(|_| bad())?;
            Ok((p, m))
        }
        None => Ok((text.parse().map_err(|_| bad())?, 1)),
    }
}

fn config(cache: &Option<PathBuf>, policy: PolicyArgs) -> VerifyConfig {
    let mut cfg = VerifyConfig::default();
    if let Some(dir) = cache {
        cfg.cache = SeriesCache::at_dir(dir);
    }
    if let Some(margin) = policy.margin {
        cfg.margin = margin;
    }
    cfg.precision = policy.prec;
    cfg
}

fn emit(out: &str, dump: &Option<PathBuf>) -> Result<(), Error> {
    match dump {
        Some(path) => fs::write(path, out)?,
        None => print!("{out}"),
    }
    Ok(())
}

fn human_params(report: &CheckReport) -> String {
    report
        .params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn print_reports(reports: &[CheckReport], json: bool) -> bool {
    let mut all_pass = true;
    for report in reports {
        all_pass &= report.passed();
        if json {
            println!("{}", report.to_json());
        } else {
            println!(
                "check={} {} verdict={} precision={} ({} ms)",
                report.check,
                human_params(report),
                if report.passed() { "pass" } else { "fail" },
                report.precision,
                report.elapsed_ms,
            );
        }
    }
    all_pass
}

fn run(cli: Cli) -> Result<bool, Error> {
    let store = cli
        .cache
        .as_ref()
        .map(SeriesCache::at_dir)
        .unwrap_or_else(SeriesCache::disabled);

    match cli.command {
        Command::Bernoulli { k, p } => {
            let value = bernoulli(k);
            if cli.json {
                let mut obj = serde_json::Map::new();
                obj.insert("k".into(), k.into());
                obj.insert("value".into(), format!("{}/{}", value.numer(), value.denom()).into());
                if let Some(p) = p {
                    obj.insert("p".into(), p.into());
                    obj.insert(
                        "vp".into(),
                        padic_valuation(&value, p).map(serde_json::Value::from).unwrap_or(serde_json::Value::Null),
                    );
                    if let Ok(irregular) = is_irregular_pair(p, k) {
                        obj.insert("pair".into(), if irregular { "irregular" } else { "regular" }.into());
                    }
                }
                println!("{}", serde_json::Value::Object(obj));
            } else {
                println!("B_{k} = {}/{}", value.numer(), value.denom());
                if let Some(p) = p {
                    match padic_valuation(&value, p) {
                        Some(v) => println!("v_{p}(B_{k}) = {v}"),
                        None => println!("v_{p}(B_{k}) is infinite (B_{k} = 0)"),
                    }
                    if let Ok(irregular) = is_irregular_pair(p, k) {
                        println!("pair ({p}, {k}): {}", if irregular { "irregular" } else { "regular" });
                    }
                }
            }
            Ok(true)
        }
        Command::Eis { kind, k, prec, r#mod, dump } => {
            let spec = EisensteinSpec { kind: parse_kind(&kind)?, weight: k, precision: prec };
            let series = match spec.kind {
                EisensteinKind::G => store.g_series(k, prec)?,
                EisensteinKind::E => store.e_series(k, prec)?,
            };
            let text = match r#mod {
                Some(modulus) => {
                    let (p, m) = parse_prime_power(&modulus)?;
                    write_residue(&reduce_mod(&series, p, m)?)
                }
                None => write_qseries(&series),
            };
            emit(&text, &dump)?;
            Ok(true)
        }
        Command::Op { theta: use_theta, partial, kind, k, prec, dump } => {
            let (series, weight): (QSeries, u64) = match kind.as_str() {
                "Delta" | "delta" => (delta_series(prec)?, 12),
                "E" | "e" | "G" | "g" => {
                    let k = k.ok_or_else(|| Error::Parse("--k is required for E and G".into()))?;
                    let spec = EisensteinSpec { kind: parse_kind(&kind)?, weight: k, precision: prec };
                    (spec.expand()?, k)
                }
                other => return Err(Error::Parse(format!("kind must be E, G or Delta, got {other:?}"))),
            };
            let out = if use_theta && !partial {
                theta(&series)
            } else {
                ramanujan_serre(&WeightedSeries::new(series, weight)?)?
            };
            emit(&write_qseries(&out), &dump)?;
            Ok(true)
        }
        Command::Basis { w } => {
            let elements = basis_exponents(w)?;
            if cli.json {
                println!("{}", serde_json::to_string(&elements).unwrap());
            } else {
                for el in &elements {
                    println!("a={} b={} c={}  (E4^{} E6^{} Delta^{})", el.a, el.b, el.c, el.a, el.b, el.c);
                }
            }
            Ok(true)
        }
        Command::Solve { p, m, w, target } => {
            let text = fs::read_to_string(&target)?;
            let target = match parse_series(&text)? {
                AnySeries::Rational(series) => reduce_mod(&series, p, m)?,
                AnySeries::Residue(series) => {
                    let expected = p.checked_pow(m).unwrap_or(0);
                    if series.modulus() != expected {
                        return Err(Error::ModulusMismatch(series.modulus(), expected));
                    }
                    series
                }
            };
            let witness = solve_mod_pm(&target, w)?;
            let report: WitnessReport = (&witness).into();
            println!("{}", serde_json::to_string(&report).unwrap());
            Ok(witness.passed())
        }
        Command::Popa { k, m, prec } => {
            let cfg = config(&cli.cache, PolicyArgs { prec, margin: None });
            let reports = verify_product_identity(k, m, &cfg)?;
            Ok(print_reports(&reports, cli.json))
        }
        Command::Verify { what } => {
            let mut reports: Vec<CheckReport> = Vec::new();
            match what {
                VerifyCommand::Thm1 { p, k0, n, policy } => {
                    let cfg = config(&cli.cache, policy);
                    match (k0, n) {
                        (Some(k0), Some(n)) => reports.push(verify_theorem1(p, k0, n, &cfg)?),
                        (None, None) => reports.extend(verify_theorem1_batch(p, &cfg)?),
                        (Some(k0), None) => {
                            for n in 0..=p - 1 {
                                reports.push(verify_theorem1(p, k0, n, &cfg)?);
                            }
                        }
                        (None, Some(n)) => {
                            for k0 in (2..=p - 3).step_by(2) {
                                reports.push(verify_theorem1(p, k0, n, &cfg)?);
                            }
                        }
                    }
                }
                VerifyCommand::Thm2 { p, policy } => {
                    reports.push(verify_theorem2(p, &config(&cli.cache, policy))?);
                }
                VerifyCommand::Thm3 { p, k, r, policy } => {
                    reports.push(verify_theorem3(p, k, r, &config(&cli.cache, policy))?);
                }
                VerifyCommand::Classical { p, which, policy } => {
                    let check = ClassicalCheck::from_name(&which)?;
                    reports.extend(verify_classical(p, check, &config(&cli.cache, policy))?);
                }
                VerifyCommand::Lemma { name, p, k0, n, policy } => {
                    let cfg = config(&cli.cache, policy);
                    let check = match name.as_str() {
                        "eptheta" => LemmaCheck::EpTheta,
                        "gprod" => LemmaCheck::GProd {
                            k0: k0.ok_or_else(|| Error::Parse("gprod needs --k0".into()))?,
                            n: n.ok_or_else(|| Error::Parse("gprod needs --n".into()))?,
                        },
                        "A4" => LemmaCheck::A4 {
                            n: n.ok_or_else(|| Error::Parse("A4 needs --n".into()))?,
                        },
                        "partialE" => LemmaCheck::PartialE,
                        "binom-4bonus" => LemmaCheck::Binom4Bonus {
                            n: n.ok_or_else(|| Error::Parse("binom-4bonus needs --n".into()))?,
                        },
                        other => return Err(Error::Parse(format!("unknown lemma {other:?}"))),
                    };
                    reports.push(verify_lemma(p, check, &cfg)?);
                }
                VerifyCommand::Popa { k, m, policy } => {
                    reports.extend(verify_product_identity(k, m, &config(&cli.cache, policy))?);
                }
            }
            sort_reports(&mut reports);
            Ok(print_reports(&reports, cli.json))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
