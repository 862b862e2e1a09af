//! `chargroup`: build supersingular graph modules for `N = pq`, cache them,
//! and run the character-group checks with machine-readable reports.

mod cache;
mod config;
mod exit;
mod report;

use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use chargroup::galois::FieldTower;
use chargroup::shimura::{
    chargp_modules, controllability_report, globalmult1_modules, verify_chargp, verify_component_eisenstein,
    verify_globalmult1, verify_ribexact2, verify_thm_main, CaseData, CaseGraphs, CheckResult, Side, Verdict,
};
use chargroup::ssmod::{enumerate_ss, load_modular_polynomial, GraphModule};
use chargroup::tmod::SearchBudget;
use chargroup::Error;
use clap::{Parser, Subcommand};
use serde::Serialize;

use config::{check_prime, CaseArgs, Check, Format, RunConfig, SearchArgs};
use exit::{code, CliError};
use report::{CheckEntry, IdealReport, IdealRow, VerifyReport, SCHEMA_VERSION};

#[derive(Parser, Debug)]
#[command(name = "chargroup", version, about = "Character groups at bad primes from supersingular isogeny graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List supersingular j-invariants mod p with weights and the mass check.
    Enumerate {
        /// Characteristic, a prime >= 5.
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Build (or load from cache) the graph modules for (p, q).
    Build {
        #[command(flatten)]
        case: CaseArgs,
    },
    /// Run the selected checks and print a report.
    Verify {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Controllability and multiplicity data per maximal ideal.
    Report {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { code::USAGE } else { code::OK };
            let _ = e.print();
            return ExitCode::from(status as u8);
        }
    };
    let result = match cli.command {
        Command::Enumerate { p, format } => cmd_enumerate(p, format),
        Command::Build { case } => RunConfig::new(&case, None, Format::Table).and_then(|cfg| cmd_build(&cfg)),
        Command::Verify { case, search, format } => {
            RunConfig::new(&case, Some(&search), format).and_then(|cfg| cmd_verify(&cfg))
        }
        Command::Report { case, format } => RunConfig::new(&case, None, format).and_then(|cfg| cmd_report(&cfg)),
    };
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("chargroup: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(format!("serializing report: {e}")))?;
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct EnumeratedPoint {
    j: String,
    weight: u32,
}

#[derive(Serialize)]
struct Enumeration {
    p: u64,
    points: Vec<EnumeratedPoint>,
    mass: String,
    expected: String,
    ok: bool,
}

fn cmd_enumerate(p: u64, format: Format) -> Result<i32, CliError> {
    check_prime("p", p)?;
    let points = enumerate_ss(p)?;
    let mut tower = FieldTower::new(p);
    let level = tower.build_level(2)?;
    let twelfths: u64 = points.iter().map(|v| 12 / v.weight as u64).sum();
    let ok = twelfths == p - 1;
    let out = Enumeration {
        p,
        points: points.iter().map(|v| EnumeratedPoint { j: level.format(&v.j), weight: v.weight }).collect(),
        mass: format!("{twelfths}/12"),
        expected: format!("{}/12", p - 1),
        ok,
    };
    match format {
        Format::Json => print_json(&out)?,
        Format::Table => {
            println!("{:<12}  weight", "j");
            for pt in &out.points {
                println!("{:<12}  {}", pt.j, pt.weight);
            }
            println!("mass {} {}", out.mass, if ok { "OK" } else { "MISMATCH" });
        }
    }
    Ok(if ok { code::OK } else { code::MASS_VIOLATION })
}

/// Re-checks the mass formulas of graphs that may come from disk.
fn check_masses(g: &CaseGraphs) -> Result<(), CliError> {
    for m in [&g.pside, &g.qside, &g.vertex_p, &g.vertex_q] {
        let expected = (m.p - 1) * m.q.map_or(1, |q| q + 1);
        if m.mass_twelfths() != expected {
            return Err(Error::MassFormulaViolation {
                context: format!("graph p = {}, q = {:?}", m.p, m.q),
                got: m.mass_twelfths(),
                expected,
            }
            .into());
        }
    }
    Ok(())
}

fn modpoly_crosscheck(dir: &Path, g: &CaseGraphs) -> Result<BTreeMap<String, String>, CliError> {
    if !dir.is_dir() {
        return Err(CliError::Io(format!("modular polynomial directory {} does not exist", dir.display())));
    }
    let mut out = BTreeMap::new();
    for (name, graph) in [("edge_p", &g.pside), ("edge_q", &g.qside)] {
        let ell = graph.q.expect("edge module");
        let path = dir.join(format!("phi_{ell}.txt"));
        let note = if path.exists() {
            let phi = load_modular_polynomial(&path)?;
            let n = graph.modular_polynomial_shortcut(&phi)?;
            format!("agrees at {n} of {} vertices", graph.vertices.len())
        } else {
            format!("phi_{ell}.txt not present")
        };
        out.insert(name.to_string(), note);
    }
    Ok(out)
}

struct Loaded {
    artifact: cache::Artifact,
    modpoly: Option<BTreeMap<String, String>>,
}

fn load_graphs(cfg: &RunConfig) -> Result<Loaded, CliError> {
    let artifact = cache::load_or_build(&cfg.cache_dir, cfg.p, cfg.q, cfg.generator_bound())?;
    check_masses(&artifact.graphs)?;
    let modpoly = cfg.modpoly_dir.as_deref().map(|d| modpoly_crosscheck(d, &artifact.graphs)).transpose()?;
    Ok(Loaded { artifact, modpoly })
}

fn graph_line(name: &str, g: &GraphModule) -> String {
    let expected = (g.p - 1) * g.q.map_or(1, |q| q + 1);
    format!("{name:<9} size {:>3}  mass {}/12 (expected {expected}/12)", g.size(), g.mass_twelfths())
}

fn cmd_build(cfg: &RunConfig) -> Result<i32, CliError> {
    let loaded = load_graphs(cfg)?;
    let a = &loaded.artifact;
    println!("artifact  {}", a.path.display());
    println!("sha256    {}", a.hash);
    println!("status    {}", a.status.describe());
    println!("ell_max   {}", cfg.generator_bound());
    let g = &a.graphs;
    for (name, m) in [("edge_p", &g.pside), ("edge_q", &g.qside), ("vertex_p", &g.vertex_p), ("vertex_q", &g.vertex_q)] {
        println!("{}", graph_line(name, m));
    }
    if let Some(m) = &loaded.modpoly {
        for (k, v) in m {
            println!("modpoly   {k}: {v}");
        }
    }
    Ok(code::OK)
}

fn load_case(cfg: &RunConfig) -> Result<(CaseData, Option<BTreeMap<String, String>>), CliError> {
    let loaded = load_graphs(cfg)?;
    eprintln!("cache: {} ({})", loaded.artifact.path.display(), loaded.artifact.status.describe());
    Ok((CaseData::from_graphs(loaded.artifact.graphs)?, loaded.modpoly))
}

fn ideal_rows(case: &CaseData, ell_max: u64) -> Result<Vec<IdealRow>, CliError> {
    Ok(controllability_report(case, ell_max)?.iter().map(|r| IdealRow::from_record(r, case.p, case.q)).collect())
}

/// Both role assignments of the second Ribet sequence, reported as one check.
fn ribexact2_both(case: &CaseData) -> chargroup::Result<CheckResult> {
    let mut details = BTreeMap::new();
    let mut failing = Vec::new();
    for (side, tag) in [(Side::Q, "q1=q"), (Side::P, "q1=p")] {
        let r = verify_ribexact2(case, side)?;
        for (k, v) in r.details {
            details.insert(format!("{tag}.{k}"), v);
        }
        if let Verdict::FailsAt(list) = r.verdict {
            failing.extend(list.into_iter().map(|x| format!("{tag}: {x}")));
        }
    }
    let verdict = if failing.is_empty() { Verdict::Verified } else { Verdict::FailsAt(failing) };
    Ok(CheckResult { verdict, certificate: None, details })
}

fn run_check(case: &CaseData, check: Check, budget: &SearchBudget) -> chargroup::Result<CheckEntry> {
    Ok(match check {
        Check::Chargp => {
            let r = verify_chargp(case, budget)?;
            let revalidated = match &r.certificate {
                Some(c) => {
                    let (m, n) = chargp_modules(case)?;
                    Some(c.validate(&m, &n, &case.t_new, &case.s)?)
                }
                None => None,
            };
            CheckEntry::new(&r, revalidated)
        }
        Check::ComponentEisenstein => CheckEntry::new(&verify_component_eisenstein(case)?, None),
        Check::Ribexact2 => CheckEntry::new(&ribexact2_both(case)?, None),
        Check::ThmMainP => CheckEntry::new(&verify_thm_main(case, Side::P)?, None),
        Check::ThmMainQ => CheckEntry::new(&verify_thm_main(case, Side::Q)?, None),
        Check::Globalmult1 => {
            let r = verify_globalmult1(case, budget)?;
            let revalidated = match &r.certificate {
                Some(c) => {
                    let pair = globalmult1_modules(case)?;
                    Some(c.validate(&pair.lhs, &pair.rhs, &case.t_new, &case.s)?)
                }
                None => None,
            };
            CheckEntry::new(&r, revalidated)
        }
    })
}

fn cmd_verify(cfg: &RunConfig) -> Result<i32, CliError> {
    let start = Instant::now();
    let (case, modpoly) = load_case(cfg)?;
    let mut timings = BTreeMap::new();
    timings.insert("build".to_string(), start.elapsed().as_secs_f64());
    let mut modules = report::modules_section(&case)?;
    modules.modpoly_crosscheck = modpoly;
    let hecke = report::hecke_section(&case)?;
    let t0 = Instant::now();
    let ideals = ideal_rows(&case, cfg.ell_max)?;
    timings.insert("ideals".to_string(), t0.elapsed().as_secs_f64());

    let outcomes: Vec<(Check, chargroup::Result<CheckEntry>, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = cfg
            .checks
            .iter()
            .map(|&check| {
                let case = &case;
                s.spawn(move || {
                    let t = Instant::now();
                    let r = run_check(case, check, &cfg.budget);
                    (check, r, t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    });

    let mut checks = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut failed = false;
    for (check, result, secs) in outcomes {
        let entry = result?;
        eprintln!("{check}: {} ({secs:.2}s)", entry.verdict);
        timings.insert(check.name().to_string(), secs);
        match entry.verdict.as_str() {
            "FailsAt" => failed = true,
            "Inconclusive" => {
                let tried = entry.details.get("candidates_tried").cloned().unwrap_or_else(|| "0".into());
                warnings.push(format!("{check}: inconclusive after {tried} candidates"));
            }
            _ => {}
        }
        checks.insert(check.name().to_string(), entry);
    }
    for row in ideals.iter().filter(|r| r.has_violation()) {
        warnings.push(format!("controllability violation at {}", row.ideal));
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let report = VerifyReport {
        schema_version: SCHEMA_VERSION,
        p: cfg.p,
        q: cfg.q,
        ell_max: cfg.generator_bound(),
        seed: cfg.seed,
        budget: (&cfg.budget).into(),
        modules,
        hecke,
        ideals,
        checks,
        warnings,
        timings: cfg.timings.then_some(timings),
    };
    match cfg.format {
        Format::Json => print_json(&report)?,
        Format::Table => {
            for (name, entry) in &report.checks {
                println!("{name:<22} {}", entry.verdict);
            }
            println!();
            print!("{}", report::ideal_table(&report.ideals));
        }
    }
    eprintln!("verify: done in {:.2}s", start.elapsed().as_secs_f64());
    Ok(if failed { code::FAILS_AT } else { code::OK })
}

fn cmd_report(cfg: &RunConfig) -> Result<i32, CliError> {
    let (case, _) = load_case(cfg)?;
    let rows = ideal_rows(&case, cfg.ell_max)?;
    match cfg.format {
        Format::Json => print_json(&IdealReport {
            schema_version: SCHEMA_VERSION,
            p: cfg.p,
            q: cfg.q,
            ell_max: cfg.ell_max,
            ideals: rows,
        })?,
        Format::Table => print!("{}", report::ideal_table(&rows)),
    }
    Ok(code::OK)
}
