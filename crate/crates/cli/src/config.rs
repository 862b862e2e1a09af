use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use chargroup::exactlin::is_prime;
use chargroup::tmod::SearchBudget;
use clap::{Args, ValueEnum};

use crate::exit::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// A check that `verify` can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Chargp,
    ComponentEisenstein,
    Ribexact2,
    ThmMainP,
    ThmMainQ,
    Globalmult1,
}

impl Check {
    pub const ALL: [Check; 6] =
        [Check::Chargp, Check::ComponentEisenstein, Check::Ribexact2, Check::ThmMainP, Check::ThmMainQ, Check::Globalmult1];

    pub fn name(self) -> &'static str {
        match self {
            Check::Chargp => "chargp",
            Check::ComponentEisenstein => "component_eisenstein",
            Check::Ribexact2 => "ribexact2",
            Check::ThmMainP => "thm_main_p",
            Check::ThmMainQ => "thm_main_q",
            Check::Globalmult1 => "globalmult1",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses a comma-separated selection such as `all` or `chargp,main`.
pub fn parse_checks(s: &str) -> Result<BTreeSet<Check>, String> {
    let mut out = BTreeSet::new();
    for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match token {
            "all" => out.extend(Check::ALL),
            "main" | "thm_main" => {
                out.insert(Check::ThmMainP);
                out.insert(Check::ThmMainQ);
            }
            "component" => {
                out.insert(Check::ComponentEisenstein);
            }
            other => match Check::ALL.iter().find(|c| c.name() == other) {
                Some(c) => {
                    out.insert(*c);
                }
                None => return Err(format!("unknown check {other:?}")),
            },
        }
    }
    if out.is_empty() {
        return Err("no checks selected".into());
    }
    Ok(out)
}

#[derive(Args, Clone, Debug)]
pub struct CaseArgs {
    /// Prime at which the character group is taken (>= 5).
    #[arg(long)]
    pub p: u64,
    /// Second prime dividing the level (>= 5, distinct from p).
    #[arg(long)]
    pub q: u64,
    /// Largest prime l with T_l among the generators (raised to the Sturm bound if smaller).
    #[arg(long, default_value_t = 13)]
    pub ell_max: u64,
    /// Replaces the Sturm bound for N = pq.
    #[arg(long)]
    pub sturm: Option<u64>,
    /// Directory holding cached graph modules.
    #[arg(long, env = "CHARGROUP_CACHE_DIR", default_value = "chargroup-cache")]
    pub cache_dir: PathBuf,
    /// Directory with phi_<l>.txt modular polynomial files for the edge cross-check.
    #[arg(long)]
    pub modpoly_dir: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
pub struct SearchArgs {
    /// Comma-separated checks: all, chargp, component_eisenstein, ribexact2, main, thm_main_p, thm_main_q, globalmult1.
    #[arg(long, default_value = "all", value_parser = parse_checks)]
    pub checks: BTreeSet<Check>,
    /// Random draws for the isomorphism search; 0 disables the search.
    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,
    /// Seed of the random phase of the search.
    #[arg(long, default_value_t = chargroup::galois::DEFAULT_SEED)]
    pub seed: u64,
    /// Adds wall-clock timings to the report (which then differs between runs).
    #[arg(long)]
    pub timings: bool,
}

/// Validated settings for one run on a pair `(p, q)`.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub p: u64,
    pub q: u64,
    pub ell_max: u64,
    pub sturm: Option<u64>,
    pub cache_dir: PathBuf,
    pub modpoly_dir: Option<PathBuf>,
    pub budget: SearchBudget,
    pub seed: u64,
    pub format: Format,
    pub checks: BTreeSet<Check>,
    pub timings: bool,
}

pub fn check_prime(name: &str, p: u64) -> Result<(), CliError> {
    if p < 5 || !is_prime(p) {
        return Err(CliError::Usage(format!("--{name} {p} is not a prime >= 5")));
    }
    Ok(())
}

impl RunConfig {
    pub fn new(case: &CaseArgs, search: Option<&SearchArgs>, format: Format) -> Result<Self, CliError> {
        check_prime("p", case.p)?;
        check_prime("q", case.q)?;
        if case.p == case.q {
            return Err(CliError::Usage("--p and --q must differ".into()));
        }
        let seed = search.map_or(chargroup::galois::DEFAULT_SEED, |s| s.seed);
        let budget = match search.map(|s| s.budget) {
            Some(0) => SearchBudget::zero(),
            Some(n) => SearchBudget { random_draws: n, ..SearchBudget::default() }.with_seed(seed),
            None => SearchBudget::default(),
        };
        Ok(RunConfig {
            p: case.p,
            q: case.q,
            ell_max: case.ell_max,
            sturm: case.sturm,
            cache_dir: case.cache_dir.clone(),
            modpoly_dir: case.modpoly_dir.clone(),
            budget,
            seed,
            format,
            checks: search.map_or_else(|| Check::ALL.into_iter().collect(), |s| s.checks.clone()),
            timings: search.is_some_and(|s| s.timings),
        })
    }

    /// The generator bound actually used for this case.
    pub fn generator_bound(&self) -> u64 {
        chargroup::shimura::generator_bound(self.p, self.q, self.ell_max, self.sturm)
    }
}
