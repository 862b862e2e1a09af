use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::case::{CaseData, Side};
use crate::error::Result;
use crate::exactlin::{prime_factors, valuation, IntegerMatrix, Lattice};
use crate::hecke::HeckeAlgebra;
use crate::label::Label;
use crate::tmod::{
    build_l, dual, evaluation, old_part_action, s_isomorphism_search, tensor_mod_torsion, Certificate, FiniteTModule,
    LModule, SearchBudget, SearchOutcome, SupportSet, TModule,
};

/// Outcome of one check. `Inconclusive` proves nothing either way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    /// The check failed; the entries name the offending maximal ideals or quantities.
    FailsAt(Vec<String>),
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Verified => "Verified",
            Verdict::FailsAt(_) => "FailsAt",
            Verdict::Inconclusive => "Inconclusive",
        }
    }

    pub fn is_verified(&self) -> bool {
        *self == Verdict::Verified
    }
}

/// A verdict with its certificate (when one was found) and named quantities for the report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
    pub details: BTreeMap<String, String>,
}

impl CheckResult {
    fn new(verdict: Verdict) -> Self {
        CheckResult { verdict, certificate: None, details: BTreeMap::new() }
    }

    fn detail(mut self, key: &str, value: impl ToString) -> Self {
        self.details.insert(key.to_string(), value.to_string());
        self
    }

    fn from_search(outcome: SearchOutcome) -> Self {
        match outcome {
            SearchOutcome::Verified(c) => CheckResult { certificate: Some(c), ..CheckResult::new(Verdict::Verified) },
            SearchOutcome::Inconclusive { tried } => CheckResult::new(Verdict::Inconclusive).detail("candidates_tried", tried),
        }
    }
}

fn invariants(f: &FiniteTModule) -> String {
    let v: Vec<String> = f.group().invariant_factors.iter().map(|d| d.to_string()).collect();
    format!("[{}]", v.join(", "))
}

/// `Y* / Y` for the Ribet kernel on `side`, through the monodromy pairing of its graph.
pub fn component_group_shimura(case: &CaseData, side: Side) -> Result<FiniteTModule> {
    let (graph, y) = match side {
        Side::Q => (&case.pside, &case.y_q),
        Side::P => (&case.qside, &case.y_p),
    };
    let gram = graph.monodromy_gram(y)?;
    FiniteTModule::from_pairing(&y.clone().with_embedding(None), &gram)
}

/// `Verified` when every maximal ideal in the support is Eisenstein.
pub fn eisenstein_support_verdict(f: &FiniteTModule, t: &HeckeAlgebra) -> Result<CheckResult> {
    let support = f.support(t)?;
    let bad: Vec<String> = support.iter().filter(|m| !m.eisenstein).map(|m| m.describe()).collect();
    let listed: Vec<String> = support.iter().map(|m| m.describe()).collect();
    let verdict = if bad.is_empty() { Verdict::Verified } else { Verdict::FailsAt(bad) };
    Ok(CheckResult::new(verdict).detail("order", f.order()).detail("invariants", invariants(f)).detail("support", listed.join(" ")))
}

/// The component group `X_p* / X_p` of `J_0(pq)` at `p` is supported on Eisenstein ideals.
pub fn verify_component_eisenstein(case: &CaseData) -> Result<CheckResult> {
    let x = case.x_p_full.clone().with_embedding(None);
    let gram = case.pside.monodromy_gram(&case.x_p_full)?;
    let f = FiniteTModule::from_pairing(&x, &gram)?;
    eisenstein_support_verdict(&f, &case.t_full_pside)
}

/// The two sides `(X_p ⊗ T_new, Hom(Y_q, Z))` compared by [`verify_chargp`].
pub fn chargp_modules(case: &CaseData) -> Result<(TModule, TModule)> {
    Ok((case.x_new(Side::P)?, dual(&case.y_q.clone().with_embedding(None))))
}

/// `X_p ⊗ T_new ≅_S Hom(Y_q, Z)` over the new quotient.
pub fn verify_chargp(case: &CaseData, budget: &SearchBudget) -> Result<CheckResult> {
    let (x, y) = chargp_modules(case)?;
    let out = s_isomorphism_search(&x, &y, &case.t_new, &case.s, budget)?;
    Ok(CheckResult::from_search(out).detail("rank", x.rank()))
}

/// Generators `T_l` with `l` prime to the level.
fn good_labels(m: &TModule, level: u64) -> Vec<Label> {
    m.labels().into_iter().filter(|l| matches!(l, Label::T(r) if !level.is_multiple_of(*r))).collect()
}

/// Invariant factors of the S-free part of `f`, as a module over the algebra its own lifts generate.
fn s_free_invariants(f: &FiniteTModule, level: u64, s: &SupportSet) -> Result<(FiniteTModule, Vec<BigInt>)> {
    if f.lifts().rank() == 0 || f.is_trivial() {
        return Ok((f.clone(), Vec::new()));
    }
    let t = HeckeAlgebra::from_module(f.lifts())?.with_level(level);
    let free = f.s_free_part(&t, s)?;
    let inv = free.group().invariant_factors;
    Ok((free, inv))
}

/// Per-prime invariant factors: for each prime, the list of its exponents.
fn by_prime(inv: &[BigInt]) -> BTreeMap<u64, Vec<u32>> {
    let mut out: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for d in inv {
        for l in prime_factors(d) {
            out.entry(l).or_default().push(valuation(d, l));
        }
    }
    for v in out.values_mut() {
        v.sort_unstable();
    }
    out
}

/// `Y_{q1}* / Y_{q1}` agrees up to `S` with `X² / (T_{q1}² - 1) X²`, where
/// `X` is the character group of `J_0(q2)` at `q2` and `T_{q1}` acts on the
/// two old copies through [`old_part_action`].
pub fn verify_ribexact2(case: &CaseData, q1: Side) -> Result<CheckResult> {
    let level = case.level();
    let (r1, vertex) = match q1 {
        Side::Q => (case.q, &case.vertex_p),
        Side::P => (case.p, &case.vertex_q),
    };
    let lhs_full = component_group_shimura(case, q1)?;
    let lhs_lifts = lhs_full.lifts().select(&good_labels(lhs_full.lifts(), level))?;
    let lhs = FiniteTModule::new(lhs_lifts, lhs_full.relations().clone())?;

    let vt = vertex.as_tmodule();
    let nv = vertex.size();
    let ones = IntegerMatrix::from_rows(vec![vec![BigInt::from(1); nv]], nv);
    let deg0 = crate::exactlin::kernel_basis(&ones);
    let x = TModule::restrict(vt.actions(), deg0.basis())?;
    let n = x.rank();
    let tau = x.action(Label::T(r1)).cloned().unwrap_or_else(|| IntegerMatrix::zeros(n, n));
    let t_r = old_part_action(&tau, r1);
    let labels = good_labels(&x, level);
    let doubled = x.select(&labels)?.direct_sum(&x.select(&labels)?)?;
    let rel = t_r.mul(&t_r).sub(&IntegerMatrix::identity(2 * n));
    let rhs = FiniteTModule::new(doubled, Lattice::from_rows(2 * n, rel))?;

    let (_, lhs_inv) = s_free_invariants(&lhs, level, &case.s)?;
    let (_, rhs_inv) = s_free_invariants(&rhs, level, &case.s)?;
    let (a, b) = (by_prime(&lhs_inv), by_prime(&rhs_inv));
    let mut bad = Vec::new();
    for l in a.keys().chain(b.keys()) {
        if a.get(l) != b.get(l) && !bad.contains(&format!("ell={l}")) {
            bad.push(format!("ell={l}"));
        }
    }
    let verdict = if bad.is_empty() { Verdict::Verified } else { Verdict::FailsAt(bad) };
    let fmt = |v: &[BigInt]| format!("[{}]", v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "));
    Ok(CheckResult::new(verdict)
        .detail("lhs_order", lhs.order())
        .detail("rhs_order", rhs.order())
        .detail("lhs_invariants", invariants(&lhs))
        .detail("rhs_invariants", invariants(&rhs))
        .detail("lhs_s_free", fmt(&lhs_inv))
        .detail("rhs_s_free", fmt(&rhs_inv)))
}

/// The evaluation `X_r(J_0(pq)^new) ⊗ Hom(X_r(J_0(pq)^new), Y_r) -> Y_r` is
/// injective with cokernel supported in `S`.
pub fn verify_thm_main(case: &CaseData, r: Side) -> Result<CheckResult> {
    let x = case.x_new(r)?;
    let y = case.ribet_kernel(r).clone().with_embedding(None);
    let ev = evaluation(&x, &y)?;
    let rank = crate::exactlin::rank(&ev.map);
    let base = CheckResult::new(Verdict::Verified).detail("hom_rank", ev.hom.rank()).detail("tensor_rank", ev.tensor.module.rank());
    if rank < ev.map.rows() {
        return Ok(CheckResult { verdict: Verdict::FailsAt(vec!["evaluation is not injective".into()]), ..base });
    }
    if rank < y.rank() {
        return Ok(CheckResult { verdict: Verdict::FailsAt(vec!["cokernel is infinite".into()]), ..base });
    }
    let coker = FiniteTModule::cokernel(&ev.map, &y)?;
    let outside = coker.support_outside(&case.t_new, &case.s)?;
    let verdict = if outside.is_empty() {
        Verdict::Verified
    } else {
        Verdict::FailsAt(outside.iter().map(|m| m.describe()).collect())
    };
    Ok(CheckResult { verdict, ..base.detail("coker_invariants", invariants(&coker)) })
}

/// The two sides compared by [`verify_globalmult1`], with the module `L`.
pub struct GlobalMultOneModules {
    pub lhs: TModule,
    pub rhs: TModule,
    pub l: LModule,
}

pub fn globalmult1_modules(case: &CaseData) -> Result<GlobalMultOneModules> {
    let xp = case.x_new(Side::P)?;
    let xq = case.x_new(Side::Q)?;
    let y = case.y_p.clone().with_embedding(None);
    let lhs = crate::tmod::hom_module(&xp, &y)?.with_embedding(None);
    let l = build_l(&case.t_full_pside, &case.t_new, &case.k_p, &case.s)?;
    let rhs = tensor_mod_torsion(&tensor_mod_torsion(&l.module.clone().with_embedding(None), &xp)?, &xq)?;
    Ok(GlobalMultOneModules { lhs, rhs, l })
}

/// `Hom(X_p(J_0(pq)^new), Y_p) ≅_S L ⊗ X_p(J_0(pq)^new) ⊗ X_q(J_0(pq)^new)`.
pub fn verify_globalmult1(case: &CaseData, budget: &SearchBudget) -> Result<CheckResult> {
    let GlobalMultOneModules { lhs, rhs, l } = globalmult1_modules(case)?;
    let base_details = |r: CheckResult| {
        let bad: Vec<String> = l.not_locally_free_at.iter().map(|x| x.to_string()).collect();
        r.detail("lhs_rank", lhs.rank()).detail("rhs_rank", rhs.rank()).detail("l_not_locally_free_at", format!("[{}]", bad.join(", ")))
    };
    if lhs.rank() != case.t_new.rank() || rhs.rank() != case.t_new.rank() {
        return Ok(base_details(CheckResult::new(Verdict::FailsAt(vec!["rank differs from the new quotient".into()]))));
    }
    let out = s_isomorphism_search(&lhs, &rhs, &case.t_new, &case.s, budget)?;
    Ok(base_details(CheckResult::from_search(out)))
}
