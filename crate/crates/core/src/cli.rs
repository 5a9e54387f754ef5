//! The `tvoa` command line: argument parsing, suite orchestration and exit
//! codes.
//!
//! Exit codes: 0 when every check passes, 1 for usage, parse and ceiling
//! errors, 2 when a mathematical check fails.
//!
//! Bounds are capped by ceilings that can be raised through the environment
//! variable `TVOA_CEILINGS`, a comma-separated list of `weight=<n>`,
//! `degree=<n>` and `block=<n>`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::report::{AxiomReport, Bounds, Report, Section, Status};
use crate::scalar::{format_scalar, parse_scalar};
use crate::sewing::ScaleReading;
use crate::suite::{self, Context, InstanceSource, SewingOptions};
use crate::tvoa::TvoaInstance;

/// Name of the ceiling override variable.
pub const CEILINGS_VAR: &str = "TVOA_CEILINGS";

/// Upper limits on the truncation bounds accepted from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ceilings {
    /// Largest `--max-weight`.
    pub weight: i64,
    /// Largest sewing `--order`.
    pub degree: i64,
    /// Largest weight block enumerated by the grading-restriction checks.
    pub block: i64,
}

impl Default for Ceilings {
    fn default() -> Self {
        Ceilings {
            weight: 10,
            degree: 8,
            block: 100_000,
        }
    }
}

impl Ceilings {
    /// Defaults overridden by `spec`, e.g. `weight=12,block=500000`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut c = Ceilings::default();
        for (k, part) in spec.split(',').map(str::trim).filter(|p| !p.is_empty()).enumerate() {
            let bad = || Error::Parse {
                line: 1,
                column: spec.find(part).unwrap_or(0) + 1,
                message: format!("{CEILINGS_VAR}: entry {k} `{part}` is not of the form name=<positive integer>"),
            };
            let (name, value) = part.split_once('=').ok_or_else(bad)?;
            let value: i64 = value.trim().parse().ok().filter(|v| *v > 0).ok_or_else(bad)?;
            match name.trim() {
                "weight" => c.weight = value,
                "degree" => c.degree = value,
                "block" => c.block = value,
                _ => return Err(bad()),
            }
        }
        Ok(c)
    }

    pub fn from_env() -> Result<Self> {
        match std::env::var(CEILINGS_VAR) {
            Ok(s) => Self::parse(&s),
            Err(_) => Ok(Self::default()),
        }
    }

    fn check(&self, what: &'static str, value: i64, ceiling: i64) -> Result<()> {
        if value > ceiling {
            Err(Error::Ceiling { what, value, ceiling })
        } else if value < 0 {
            Err(Error::NegativeWeight(value))
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tvoa", version, about = "Exact checks for vertex algebras, BRST complexes and sewing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Record wall-clock times in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reading {
    Full,
    BareA0,
}

impl From<Reading> for ScaleReading {
    fn from(r: Reading) -> Self {
        match r {
            Reading::Full => ScaleReading::Full,
            Reading::BareA0 => ScaleReading::BareA0,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ghost anticommutators, the L_∧ Virasoro relations, normal ordering and field identities.
    CheckGhost {
        #[arg(long, default_value_t = 8)]
        max_weight: i64,
        #[arg(long, default_value_t = 4)]
        index_range: i64,
    },
    /// Nilpotency of the BRST differential, its dual and the cohomology table.
    CheckBrst {
        #[arg(long, default_value = "26", allow_hyphen_values = true)]
        central_charge: String,
        #[arg(long, default_value_t = 6)]
        max_weight: i64,
        /// Pass when δ² is nonzero and matches the symbolic anomaly.
        #[arg(long)]
        expect_anomaly: bool,
        /// Weight of the cohomology classes for the algebra axioms (c = 26 only; 0 disables).
        #[arg(long, default_value_t = 2)]
        class_weight: i64,
        /// Weight of the closed vectors paired with those classes.
        #[arg(long, default_value_t = 1)]
        closed_weight: i64,
    },
    /// Axioms and derived identities of an instance: a declaration file or a built-in name.
    CheckTvoa {
        /// `tensor-<c>`, `tensor-<c>-bare`, `n2-twist-<c>` or a path to a declaration.
        #[arg(default_value = "tensor-26")]
        spec: String,
        #[arg(long, default_value_t = 5)]
        max_weight: i64,
        #[arg(long, default_value_t = 4)]
        index_range: i64,
        /// Check every n-th operator triple of the Poisson laws.
        #[arg(long, default_value_t = 11)]
        poisson_stride: usize,
    },
    /// The N=2 relations, the twisted Virasoro algebra and the twisted instance.
    TwistN2 {
        #[arg(long, default_value = "9", allow_hyphen_values = true)]
        central_charge: String,
        #[arg(long, default_value_t = 4)]
        max_weight: i64,
        #[arg(long, default_value_t = 3)]
        index_range: i64,
        #[arg(long, default_value_t = 11)]
        poisson_stride: usize,
    },
    /// The sewing calculus and the Virasoro relations of its vector fields.
    Sew {
        #[arg(long, default_value_t = 5)]
        order: i64,
        #[arg(long, default_value_t = 3)]
        witt_range: i64,
        #[arg(long, default_value = "26", allow_hyphen_values = true)]
        central_charge: String,
        #[arg(long, value_enum, default_value_t = Reading::Full)]
        reading: Reading,
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
    /// Re-evaluates every counterexample stored in a report.
    Replay { report: PathBuf },
}

/// Runs sections on scoped threads and returns them in the given order.
fn run_parallel<'a>(jobs: Vec<(&'a str, Box<dyn FnOnce() -> Result<Section> + Send + 'a>)>) -> Result<Vec<(String, Section, u64)>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .into_iter()
            .map(|(name, job)| {
                (
                    name,
                    s.spawn(move || {
                        let t = Instant::now();
                        job().map(|sec| (sec, t.elapsed().as_millis() as u64))
                    }),
                )
            })
            .collect();
        handles
            .into_iter()
            .map(|(name, h)| {
                let (sec, ms) = h.join().expect("suite panicked")?;
                Ok((name.to_string(), sec, ms))
            })
            .collect()
    })
}

fn push_all(report: &mut Report, sections: Vec<(String, Section, u64)>) {
    for (name, sec, ms) in sections {
        report.record_time(&name, ms);
        report.push(sec);
    }
}

fn params(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Axioms, derived identities, Poisson laws and, when the algebra has `L`,
/// `b` and `c`, the BRST consistency checks.
fn instance_sections(
    source: &InstanceSource,
    inst: &TvoaInstance,
    bounds: Bounds,
    stride: usize,
    block: usize,
) -> Result<Vec<(String, Section, u64)>> {
    let ctx = || Context::Instance { source: source.clone() };
    let has_brst = ["L", "b", "c"].iter().all(|s| inst.algebra.table().symbol_id(s).is_ok());
    let mut jobs: Vec<(&str, Box<dyn FnOnce() -> Result<Section> + Send + '_>)> = vec![
        (
            "axioms",
            Box::new(move || Ok(Section::new("axioms", ctx(), inst.check_axioms_with_ceiling(bounds, block)?))),
        ),
        (
            "derived",
            Box::new(move || Ok(Section::new("derived", ctx(), inst.derived_identities(bounds)?))),
        ),
        (
            "poisson",
            Box::new(move || Ok(Section::new("poisson", ctx(), inst.poisson_laws(bounds, stride)?))),
        ),
    ];
    if has_brst {
        jobs.push((
            "brst",
            Box::new(move || Ok(Section::new("brst", ctx(), inst.brst_consistency(bounds.max_weight)?))),
        ));
    }
    run_parallel(jobs)
}

/// Executes a command and returns its report.
pub fn execute(command: &Command, ceilings: &Ceilings) -> Result<Report> {
    let block = ceilings.block as usize;
    Ok(match command {
        Command::CheckGhost { max_weight, index_range } => {
            ceilings.check("max-weight", *max_weight, ceilings.weight)?;
            ceilings.check("index-range", *index_range, i64::MAX)?;
            let mut r = Report::new(
                "check-ghost",
                params(&[("max-weight", max_weight.to_string()), ("index-range", index_range.to_string())]),
                &[],
            );
            let t = Instant::now();
            let rep = suite::ghost_suite(*max_weight, *index_range)?;
            r.record_time("ghost", t.elapsed().as_millis() as u64);
            r.push(Section::new("ghost", Context::Ghost, rep));
            r
        }
        Command::CheckBrst {
            central_charge,
            max_weight,
            expect_anomaly,
            class_weight,
            closed_weight,
        } => {
            ceilings.check("max-weight", *max_weight, ceilings.weight)?;
            ceilings.check("class-weight", *class_weight, ceilings.weight)?;
            ceilings.check("closed-weight", *closed_weight, ceilings.weight)?;
            let c = parse_scalar(central_charge)?;
            let cs = format_scalar(&c);
            let mut r = Report::new(
                "check-brst",
                params(&[
                    ("central-charge", cs.clone()),
                    ("max-weight", max_weight.to_string()),
                    ("expect-anomaly", expect_anomaly.to_string()),
                    ("class-weight", class_weight.to_string()),
                    ("closed-weight", closed_weight.to_string()),
                ]),
                &[],
            );
            let critical = c == crate::scalar::qi(26);
            let ctx = Context::Brst { central_charge: cs };
            let t = Instant::now();
            let out = suite::brst_suite(&c, *max_weight, *expect_anomaly)?;
            r.record_time("brst", t.elapsed().as_millis() as u64);
            r.push(Section::new("brst", ctx.clone(), out.report));
            if let Some(table) = out.table {
                r.insert_data("cohomology", table)?;
            }
            if critical && !expect_anomaly && *class_weight > 0 {
                let t = Instant::now();
                let rep = suite::gerstenhaber_suite(*class_weight, *closed_weight)?;
                r.record_time("gerstenhaber", t.elapsed().as_millis() as u64);
                r.push(Section::new("gerstenhaber", ctx, rep));
            }
            r
        }
        Command::CheckTvoa {
            spec,
            max_weight,
            index_range,
            poisson_stride,
        } => {
            ceilings.check("max-weight", *max_weight, ceilings.weight)?;
            ceilings.check("index-range", *index_range, i64::MAX)?;
            let path = std::path::Path::new(spec);
            let (source, bytes) = if path.is_file() {
                let text = std::fs::read_to_string(path)?;
                let bytes = text.clone().into_bytes();
                (InstanceSource::Declaration { text }, bytes)
            } else {
                let s = InstanceSource::builtin(spec).ok_or_else(|| {
                    Error::Declaration(format!("`{spec}` is neither a declaration file nor a built-in instance"))
                })?;
                (s, Vec::new())
            };
            let inst = source.build()?;
            let mut r = Report::new(
                "check-tvoa",
                params(&[
                    ("instance", inst.name.clone()),
                    ("max-weight", max_weight.to_string()),
                    ("index-range", index_range.to_string()),
                    ("poisson-stride", poisson_stride.to_string()),
                ]),
                &bytes,
            );
            let bounds = Bounds::new(*max_weight, *index_range);
            push_all(&mut r, instance_sections(&source, &inst, bounds, *poisson_stride, block)?);
            r
        }
        Command::TwistN2 {
            central_charge,
            max_weight,
            index_range,
            poisson_stride,
        } => {
            ceilings.check("max-weight", *max_weight, ceilings.weight)?;
            ceilings.check("index-range", *index_range, i64::MAX)?;
            let c = parse_scalar(central_charge)?;
            let cs = format_scalar(&c);
            let (w, ir) = (*max_weight, *index_range);
            let mut r = Report::new(
                "twist-n2",
                params(&[
                    ("central-charge", cs.clone()),
                    ("max-weight", w.to_string()),
                    ("index-range", ir.to_string()),
                    ("poisson-stride", poisson_stride.to_string()),
                ]),
                &[],
            );
            let n2 = |c: &str| Context::N2 { central_charge: c.to_string() };
            let cs2 = cs.clone();
            let cs3 = cs.clone();
            let jobs: Vec<(&str, Box<dyn FnOnce() -> Result<Section> + Send>)> = vec![
                (
                    "ns-relations-symbolic",
                    Box::new(move || Ok(Section::new("ns-relations-symbolic", n2("c"), suite::ns_relations_suite("c", ir)?))),
                ),
                (
                    "ns-relations",
                    Box::new(move || Ok(Section::new("ns-relations", n2(&cs2), suite::ns_relations_suite(&cs2, ir)?))),
                ),
                (
                    "twisted-virasoro-symbolic",
                    Box::new(move || {
                        Ok(Section::new("twisted-virasoro-symbolic", n2("c"), suite::twisted_virasoro_suite("c", w, ir)?))
                    }),
                ),
                (
                    "twisted-virasoro",
                    Box::new(move || {
                        Ok(Section::new("twisted-virasoro", n2(&cs3), suite::twisted_virasoro_suite(&cs3, w, ir)?))
                    }),
                ),
            ];
            push_all(&mut r, run_parallel(jobs)?);
            let source = InstanceSource::Twist {
                central_charge: cs,
                g: crate::n2::TwistedG::Half,
            };
            let inst = source.build()?;
            let bounds = Bounds::new(w, ir);
            let sections = instance_sections(&source, &inst, bounds, *poisson_stride, block)?;
            push_all(
                &mut r,
                sections
                    .into_iter()
                    .map(|(n, mut s, ms)| {
                        s.name = format!("twist-{n}");
                        (format!("twist-{n}"), s, ms)
                    })
                    .collect(),
            );
            r
        }
        Command::Sew {
            order,
            witt_range,
            central_charge,
            reading,
            samples,
        } => {
            ceilings.check("order", *order, ceilings.degree)?;
            ceilings.check("witt-range", *witt_range, ceilings.degree)?;
            let c = parse_scalar(central_charge)?;
            let cs = format_scalar(&c);
            let reading = ScaleReading::from(*reading);
            let mut r = Report::new(
                "sew",
                params(&[
                    ("order", order.to_string()),
                    ("witt-range", witt_range.to_string()),
                    ("central-charge", cs.clone()),
                    ("reading", serde_json::to_value(reading).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()),
                    ("samples", samples.to_string()),
                ]),
                &[],
            );
            let t = Instant::now();
            let out = suite::sewing_suite(SewingOptions {
                degree: *order as i32,
                witt_range: *witt_range,
                central_charge: c,
                reading,
                samples: *samples,
            })?;
            r.record_time("sewing", t.elapsed().as_millis() as u64);
            let ctx = Context::Sewing {
                degree: *order as i32,
                range: *witt_range,
                central_charge: cs,
                reading,
            };
            r.push(Section::new("sewing", ctx, out.report));
            r.insert_data("witt", &out.witt)?;
            r
        }
        Command::Replay { report } => {
            let text = std::fs::read_to_string(report)?;
            let stored = Report::from_json(&text)?;
            replay(&stored, text.as_bytes())?
        }
    })
}

/// One re-evaluated counterexample.
#[derive(serde::Serialize)]
struct Replayed {
    section: String,
    entry: String,
    check: crate::report::Check,
    params: Vec<i64>,
    stored: String,
    recomputed: Option<String>,
    reproduced: bool,
}

fn replay(stored: &Report, bytes: &[u8]) -> Result<Report> {
    let mut r = Report::new("replay", params(&[("command", stored.command.clone())]), bytes);
    let mut out = Vec::new();
    let mut entries = Vec::new();
    for sec in &stored.sections {
        for e in &sec.report.entries {
            let Status::Fail { counterexample: cx } = &e.status else {
                continue;
            };
            let recomputed = sec.context.evaluate(cx)?;
            let reproduced = recomputed.as_deref() == Some(cx.residual.as_str());
            let mut b = crate::report::EntryBuilder::new(format!("{}/{}", sec.name, e.id), e.description.clone());
            b.count(1);
            if !reproduced {
                b.fail_with(cx.clone());
            }
            entries.push(b.finish());
            out.push(Replayed {
                section: sec.name.clone(),
                entry: e.id.clone(),
                check: cx.check,
                params: cx.params.clone(),
                stored: cx.residual.clone(),
                recomputed,
                reproduced,
            });
        }
    }
    r.insert_data("replays", &out)?;
    r.push(Section::new(
        "replay",
        stored.sections.first().map_or(Context::Ghost, |s| s.context.clone()),
        AxiomReport {
            instance: stored.command.clone(),
            bounds: Bounds::new(0, 0),
            entries,
        },
    ));
    Ok(r)
}

/// One line per entry, for the terminal.
pub fn summary(report: &Report) -> String {
    let mut s = String::new();
    for sec in &report.sections {
        for e in &sec.report.entries {
            let status = match &e.status {
                Status::Pass | Status::VerifiedUpToBound { .. } => "pass".to_string(),
                Status::Fail { counterexample } => format!("FAIL at {}: {}", counterexample.input, counterexample.residual),
                Status::Skipped { reason } => format!("skipped ({reason})"),
            };
            s.push_str(&format!("{}/{} [{} cases]: {status}\n", sec.name, e.id, e.cases));
        }
    }
    s.push_str(if report.passed { "all checks passed\n" } else { "some checks failed\n" });
    s
}

/// Parses `args`, runs the command and writes the report. Returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = Ceilings::from_env().and_then(|c| execute(&cli.command, &c));
    let mut report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    if !cli.timing {
        report.timing_ms = None;
    }
    let json = report.to_json();
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{json}"),
    }
    eprint!("{}", summary(&report));
    if report.passed {
        0
    } else {
        2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceilings_parse_and_reject() {
        let c = Ceilings::parse("weight=12, block=7").unwrap();
        assert_eq!((c.weight, c.degree, c.block), (12, 8, 7));
        assert!(matches!(Ceilings::parse("weight=x"), Err(Error::Parse { column: 1, .. })));
        assert!(Ceilings::parse("depth=3").is_err());
        assert_eq!(Ceilings::parse("").unwrap(), Ceilings::default());
    }

    #[test]
    fn bounds_above_the_ceiling_are_usage_errors() {
        let cmd = Command::CheckGhost {
            max_weight: 11,
            index_range: 1,
        };
        assert!(matches!(execute(&cmd, &Ceilings::default()), Err(Error::Ceiling { .. })));
    }

    #[test]
    fn malformed_flags_exit_with_one() {
        assert_eq!(run(["tvoa", "check-ghost", "--max-weight", "x"]), 1);
        assert_eq!(run(["tvoa", "frobnicate"]), 1);
    }

    #[test]
    fn small_ghost_run_is_deterministic() {
        let cmd = Command::CheckGhost {
            max_weight: 1,
            index_range: 1,
        };
        let mut a = execute(&cmd, &Ceilings::default()).unwrap();
        let mut b = execute(&cmd, &Ceilings::default()).unwrap();
        a.timing_ms = None;
        b.timing_ms = None;
        assert!(a.passed);
        assert_eq!(a.to_json(), b.to_json());
    }
}
