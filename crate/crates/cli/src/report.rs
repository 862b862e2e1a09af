use std::collections::BTreeMap;
use std::fmt::Write as _;

use chargroup::exactlin::format_int_poly;
use chargroup::shimura::{CaseData, CheckResult, IdealRecord, Side, Verdict};
use chargroup::ssmod::GraphModule;
use chargroup::tmod::{Certificate, SearchBudget};
use chargroup::Label;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// One maximal ideal of the new quotient. Rows inside `S` carry "in S" in every verdict column except `range`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealRow {
    pub ell: u64,
    pub degree: usize,
    pub eisenstein: bool,
    pub in_s: bool,
    pub d_p: usize,
    pub d_q: usize,
    pub h_m: usize,
    pub predicted_torsion_dim: usize,
    pub verdicts: RowVerdicts,
    pub ideal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowVerdicts {
    /// `d_r` lies in `{1, 2}` for both primes.
    pub range: String,
    /// Every `r` with `d_r = 2` satisfies `r = 1 mod ell`.
    pub congruence: String,
    /// `h_m <= 2^k` with `k` the number of `r` with `d_r = 2`.
    pub bound: String,
    /// `h_m = 1` when `d_p = d_q = 1`.
    pub mult_one: String,
}

fn verdict_word(ok: bool) -> String {
    if ok { "ok" } else { "violated" }.to_string()
}

impl IdealRow {
    pub fn from_record(r: &IdealRecord, p: u64, q: u64) -> Self {
        let ell = r.ideal.ell;
        let ds = [(p, r.d_p), (q, r.d_q)];
        let range = verdict_word(ds.iter().all(|(_, d)| (1..=2).contains(d)));
        let verdicts = if r.in_s {
            let s = || "in S".to_string();
            RowVerdicts { range, congruence: s(), bound: s(), mult_one: s() }
        } else {
            let uncontrollable: Vec<u64> = ds.iter().filter(|(_, d)| *d == 2).map(|(r, _)| *r).collect();
            RowVerdicts {
                range,
                congruence: if uncontrollable.is_empty() {
                    "n/a".into()
                } else {
                    verdict_word(uncontrollable.iter().all(|r| r % ell == 1))
                },
                bound: verdict_word(r.h_m <= 1 << r.uncontrollable),
                mult_one: if r.d_p == 1 && r.d_q == 1 { verdict_word(r.h_m == 1) } else { "n/a".into() },
            }
        };
        IdealRow {
            ell,
            degree: r.ideal.degree,
            eisenstein: r.ideal.eisenstein,
            in_s: r.in_s,
            d_p: r.d_p,
            d_q: r.d_q,
            h_m: r.h_m,
            predicted_torsion_dim: r.predicted_torsion_dim(),
            verdicts,
            ideal: r.ideal.describe(),
        }
    }

    pub fn has_violation(&self) -> bool {
        let v = &self.verdicts;
        [&v.range, &v.congruence, &v.bound, &v.mult_one].iter().any(|s| *s == "violated")
    }
}

pub const TABLE_HEADER: [&str; 13] =
    ["ell", "deg", "eis", "in_s", "d_p", "d_q", "h_m", "2h_m", "range", "congruence", "bound", "mult_one", "ideal"];

/// Whitespace-aligned table; "in S" is written as `in_S` so every column is one token except the last.
pub fn ideal_table(rows: &[IdealRow]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let v = &r.verdicts;
            vec![
                r.ell.to_string(),
                r.degree.to_string(),
                r.eisenstein.to_string(),
                r.in_s.to_string(),
                r.d_p.to_string(),
                r.d_q.to_string(),
                r.h_m.to_string(),
                r.predicted_torsion_dim.to_string(),
                v.range.replace(' ', "_"),
                v.congruence.replace(' ', "_"),
                v.bound.replace(' ', "_"),
                v.mult_one.replace(' ', "_"),
                r.ideal.clone(),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = TABLE_HEADER.iter().map(|h| h.len()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, row: Vec<&str>| {
        let n = row.len();
        for (i, c) in row.into_iter().enumerate() {
            if i + 1 == n {
                out.push_str(c);
            } else {
                let _ = write!(out, "{c:<w$}  ", w = widths[i]);
            }
        }
        out.push('\n');
    };
    line(&mut out, TABLE_HEADER.to_vec());
    for row in &cells {
        line(&mut out, row.iter().map(String::as_str).collect());
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdealReport {
    pub schema_version: u32,
    pub p: u64,
    pub q: u64,
    pub ell_max: u64,
    pub ideals: Vec<IdealRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Modules {
    pub ranks: BTreeMap<String, usize>,
    pub masses: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modpoly_crosscheck: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharpolyPair {
    pub p_side: String,
    pub q_side: String,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Hecke {
    pub algebra_rank: BTreeMap<String, usize>,
    pub charpolys: BTreeMap<String, CharpolyPair>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateJson {
    pub determinant: String,
    pub coker_invariants: Vec<String>,
    pub coker_support: Vec<String>,
    pub coefficients: Vec<String>,
    pub map: Vec<Vec<String>>,
    pub revalidated: bool,
}

impl CertificateJson {
    pub fn new(c: &Certificate, revalidated: bool) -> Self {
        let strs = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        CertificateJson {
            determinant: c.determinant.to_string(),
            coker_invariants: strs(&c.coker_invariants),
            coker_support: c.coker_support.clone(),
            coefficients: strs(&c.coefficients),
            map: c.map.row_vecs().iter().map(|r| strs(r)).collect(),
            revalidated,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_ideals: Option<Vec<String>>,
    pub details: BTreeMap<String, String>,
}

impl CheckEntry {
    /// `revalidated` is the outcome of re-checking the certificate, when there is one.
    pub fn new(r: &CheckResult, revalidated: Option<bool>) -> Self {
        let certificate = r.certificate.as_ref().map(|c| CertificateJson::new(c, revalidated.unwrap_or(false)));
        let verdict = match (&r.verdict, revalidated) {
            (Verdict::Verified, Some(false)) => "FailsAt".to_string(),
            (v, _) => v.name().to_string(),
        };
        let failing_ideals = match (&r.verdict, revalidated) {
            (Verdict::FailsAt(list), _) => Some(list.clone()),
            (Verdict::Verified, Some(false)) => Some(vec!["certificate did not re-validate".into()]),
            _ => None,
        };
        CheckEntry { verdict, certificate, failing_ideals, details: r.details.clone() }
    }
}

/// The isomorphism-search budget a report was produced with.
#[derive(Clone, Debug, Serialize)]
pub struct BudgetJson {
    pub sweep_bound: i64,
    pub sweep_max_rank: usize,
    pub random_draws: u64,
    pub random_bound: i64,
}

impl From<&SearchBudget> for BudgetJson {
    fn from(b: &SearchBudget) -> Self {
        BudgetJson {
            sweep_bound: b.sweep_bound,
            sweep_max_rank: b.sweep_max_rank,
            random_draws: b.random_draws,
            random_bound: b.random_bound,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub p: u64,
    pub q: u64,
    pub ell_max: u64,
    pub seed: u64,
    pub budget: BudgetJson,
    pub modules: Modules,
    pub hecke: Hecke,
    pub ideals: Vec<IdealRow>,
    pub checks: BTreeMap<String, CheckEntry>,
    pub warnings: Vec<String>,
    pub timings: Option<BTreeMap<String, f64>>,
}

fn mass(g: &GraphModule) -> String {
    format!("{}/12", g.mass_twelfths())
}

pub fn modules_section(case: &CaseData) -> chargroup::Result<Modules> {
    let mut ranks = BTreeMap::new();
    ranks.insert("edge_p".to_string(), case.pside.size());
    ranks.insert("edge_q".to_string(), case.qside.size());
    ranks.insert("vertex_p".to_string(), case.vertex_p.size());
    ranks.insert("vertex_q".to_string(), case.vertex_q.size());
    ranks.insert("x_p".to_string(), case.x_p_full.rank());
    ranks.insert("x_q".to_string(), case.x_q_full.rank());
    ranks.insert("x_p_new".to_string(), case.x_new(Side::P)?.rank());
    ranks.insert("x_q_new".to_string(), case.x_new(Side::Q)?.rank());
    ranks.insert("y_p".to_string(), case.y_p.rank());
    ranks.insert("y_q".to_string(), case.y_q.rank());
    ranks.insert("shimura_genus".to_string(), case.shimura_genus());
    let mut masses = BTreeMap::new();
    masses.insert("edge_p".to_string(), mass(&case.pside));
    masses.insert("edge_q".to_string(), mass(&case.qside));
    masses.insert("vertex_p".to_string(), mass(&case.vertex_p));
    masses.insert("vertex_q".to_string(), mass(&case.vertex_q));
    Ok(Modules { ranks, masses, modpoly_crosscheck: None })
}

pub fn hecke_section(case: &CaseData) -> chargroup::Result<Hecke> {
    let mut algebra_rank = BTreeMap::new();
    algebra_rank.insert("full_p".to_string(), case.t_full_pside.rank());
    algebra_rank.insert("full_q".to_string(), case.t_full_qside.rank());
    algebra_rank.insert("new".to_string(), case.t_new.rank());
    let mut charpolys = BTreeMap::new();
    for label in case.y_q.labels() {
        if let Label::T(ell) = label {
            let (a, b) = case.jl_charpolys(ell)?;
            let pair = CharpolyPair { p_side: format_int_poly(&a), q_side: format_int_poly(&b), agree: a == b };
            charpolys.insert(label.to_string(), pair);
        }
    }
    Ok(Hecke { algebra_rank, charpolys })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(in_s: bool, d_p: usize, d_q: usize, h_m: usize) -> IdealRow {
        let s = |x: &str| x.to_string();
        IdealRow {
            ell: 5,
            degree: 1,
            eisenstein: false,
            in_s,
            d_p,
            d_q,
            h_m,
            predicted_torsion_dim: 2 * h_m,
            verdicts: RowVerdicts { range: s("ok"), congruence: s("n/a"), bound: s("ok"), mult_one: s("ok") },
            ideal: s("(ell=5, deg=1; T2=1)"),
        }
    }

    #[test]
    fn table_has_one_line_per_row() {
        let t = ideal_table(&[row(false, 1, 1, 1), row(true, 2, 1, 3)]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("ell"));
        assert!(lines[2].ends_with("(ell=5, deg=1; T2=1)"));
    }

    #[test]
    fn violations_are_detected() {
        let mut r = row(false, 1, 1, 2);
        assert!(!r.has_violation());
        r.verdicts.mult_one = "violated".into();
        assert!(r.has_violation());
    }
}
