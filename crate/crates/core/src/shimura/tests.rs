use std::sync::OnceLock;

use num_bigint::BigInt;

use super::*;
use crate::exactlin::{IntegerMatrix, Lattice};
use crate::label::Label;
use crate::tmod::{build_l, dual, hom_module, ideal_times, tensor_mod_torsion, FiniteTModule, SearchBudget};

fn case(p: u64, q: u64) -> &'static CaseData {
    static CELLS: [OnceLock<CaseData>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let i = match (p, q) {
        (11, 7) => 0,
        (5, 7) => 1,
        (7, 5) => 2,
        (7, 11) => 3,
        _ => unreachable!(),
    };
    CELLS[i].get_or_init(|| CaseData::build(p, q, 13).unwrap())
}

const CASES: [(u64, u64); 4] = [(11, 7), (5, 7), (7, 5), (7, 11)];

/// Kronecker symbol `(d / p)` for an odd prime `p` and `d` in `{-3, -4}`.
fn kronecker(d: i64, p: u64) -> i64 {
    match d {
        -4 => if p % 4 == 1 { 1 } else { -1 },
        -3 => match p % 3 {
            0 => 0,
            1 => 1,
            _ => -1,
        },
        _ => unreachable!(),
    }
}

/// Genus of `X_0(N)` for squarefree `N`, as a multiple of 12 to stay integral.
fn genus_x0(primes: &[u64]) -> i64 {
    let mu: i64 = primes.iter().map(|p| *p as i64 + 1).product();
    let nu2: i64 = primes.iter().map(|p| 1 + kronecker(-4, *p)).product();
    let nu3: i64 = primes.iter().map(|p| 1 + kronecker(-3, *p)).product();
    let cusps = 1i64 << primes.len();
    let twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps;
    assert_eq!(twelve_g % 12, 0);
    twelve_g / 12
}

/// Genus of the Shimura curve of discriminant `pq`.
fn genus_shimura(p: u64, q: u64) -> i64 {
    let e2: i64 = [p, q].iter().map(|r| 1 - kronecker(-4, *r)).product();
    let e3: i64 = [p, q].iter().map(|r| 1 - kronecker(-3, *r)).product();
    let twelve_g = 12 + (p as i64 - 1) * (q as i64 - 1) - 3 * e2 - 4 * e3;
    assert_eq!(twelve_g % 12, 0);
    twelve_g / 12
}

#[test]
fn genus_oracles() {
    assert_eq!(genus_x0(&[11]), 1);
    assert_eq!(genus_x0(&[7]), 0);
    assert_eq!(genus_x0(&[7, 11]), 7);
    assert_eq!(genus_x0(&[5, 7]), 3);
    assert_eq!(genus_shimura(7, 11), 5);
    assert_eq!(genus_shimura(3, 5), 1);
    assert_eq!(genus_shimura(5, 7), 3);
}

#[test]
fn ranks_match_genus_formulas() {
    for (p, q) in CASES {
        let c = case(p, q);
        let (gpq, gp, gq) = (genus_x0(&[p, q]), genus_x0(&[p]), genus_x0(&[q]));
        assert_eq!(c.shimura_genus() as i64, genus_shimura(p, q), "({p},{q})");
        assert_eq!(c.y_q.rank() as i64, gpq - 2 * gp - 2 * gq);
        assert_eq!(c.y_p.rank(), c.y_q.rank());
        assert_eq!(c.x_p_full.rank() as i64, gpq - 2 * gq);
        assert_eq!(c.x_q_full.rank() as i64, gpq - 2 * gp);
        assert_eq!(c.t_new.rank(), c.y_q.rank());
        assert_eq!(c.x_new(Side::P).unwrap().rank(), c.t_new.rank());
        assert_eq!(c.x_new(Side::Q).unwrap().rank(), c.t_new.rank());
    }
    assert_eq!(case(11, 7).shimura_genus(), 5);
    assert_eq!(case(5, 7).shimura_genus(), 3);
}

#[test]
fn ribet_sequences_are_exact_up_to_s() {
    for (p, q) in CASES {
        let c = case(p, q);
        for side in [Side::P, Side::Q] {
            let seq = c.ribet_sequence(side).unwrap();
            assert_eq!(seq.source_rank, seq.kernel.rank() + seq.target_rank, "({p},{q}) {side:?}");
            assert!(seq.cokernel.is_some());
            assert!(seq.cokernel_in_s);
        }
    }
    let seq = case(11, 7).ribet_sequence(Side::Q).unwrap();
    assert_eq!((seq.source_rank, seq.kernel.rank(), seq.target_rank), (7, 5, 2));
}

#[test]
fn jacquet_langlands_witness() {
    for (p, q) in [(11, 7), (5, 7)] {
        let c = case(p, q);
        for ell in [2, 3, 13] {
            let (a, b) = c.jl_charpolys(ell).unwrap();
            assert_eq!(a, b, "({p},{q}) T{ell}");
            assert_eq!(a.len(), c.shimura_genus() + 1);
        }
    }
    let (a, _) = case(5, 7).jl_charpolys(2).unwrap();
    let expect: Vec<BigInt> = [0, -4, 1, 1].iter().map(|x| BigInt::from(*x)).collect();
    assert_eq!(a, expect);
}

#[test]
fn q_side_signs_are_fixed() {
    assert_eq!(case(5, 7).signs, (-1, -1));
    assert_eq!(case(7, 11).signs, (-1, -1));
    for (p, q) in CASES {
        let c = case(p, q);
        assert_eq!(c.y_p.labels(), c.y_q.labels());
        let wp = c.y_p.action(Label::Wp).unwrap();
        assert_eq!(wp.mul(wp), IntegerMatrix::identity(c.y_p.rank()));
    }
}

#[test]
fn component_groups_are_eisenstein() {
    let orders = [60, 24, 12, 6];
    for ((p, q), order) in CASES.into_iter().zip(orders) {
        let r = verify_component_eisenstein(case(p, q)).unwrap();
        assert_eq!(r.verdict, Verdict::Verified, "({p},{q})");
        assert_eq!(r.details["order"], order.to_string());
    }
    assert_eq!(verify_component_eisenstein(case(11, 7)).unwrap().details["invariants"], "[60]");
}

#[test]
fn non_eisenstein_support_fails() {
    let c = case(11, 7);
    let x = c.x_new(Side::P).unwrap();
    let m = c.t_new.maximal_ideals_above(5).into_iter().find(|m| !m.eisenstein).unwrap();
    let on = c.t_new.basis_on(&x).unwrap();
    let n = x.rank();
    let mx = Lattice::from_rows(n, ideal_times(&IntegerMatrix::identity(n), &on, &m.ideal, n));
    let f = FiniteTModule::new(x, mx).unwrap();
    let r = eisenstein_support_verdict(&f, &c.t_new).unwrap();
    assert_eq!(r.verdict, Verdict::FailsAt(vec![m.describe()]));
}

#[test]
fn chargp_certificates_revalidate() {
    for (p, q) in [(11, 7), (5, 7)] {
        let c = case(p, q);
        let r = verify_chargp(c, &SearchBudget::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Verified, "({p},{q})");
        let cert = r.certificate.unwrap();
        let x = c.x_new(Side::P).unwrap();
        let y = dual(&c.y_q.clone().with_embedding(None));
        assert_eq!(chargp_modules(c).unwrap(), (x.clone(), y.clone()));
        assert!(cert.validate(&x, &y, &c.t_new, &c.s).unwrap());
    }
}

#[test]
fn zero_budget_is_inconclusive() {
    let c = case(5, 7);
    assert_eq!(verify_chargp(c, &SearchBudget::zero()).unwrap().verdict, Verdict::Inconclusive);
    assert_eq!(verify_globalmult1(c, &SearchBudget::zero()).unwrap().verdict, Verdict::Inconclusive);
}

#[test]
fn ribexact2_in_both_roles() {
    let c = case(11, 7);
    let q = verify_ribexact2(c, Side::Q).unwrap();
    assert_eq!(q.verdict, Verdict::Verified);
    assert_eq!(q.details["lhs_invariants"], "[2, 6, 12]");
    assert_eq!(q.details["rhs_invariants"], "[2, 30]");
    let p = verify_ribexact2(c, Side::P).unwrap();
    assert_eq!(p.verdict, Verdict::Verified);
    assert_eq!(p.details["lhs_invariants"], "[6]");
    for (pp, qq) in [(5, 7), (7, 5), (7, 11)] {
        for side in [Side::P, Side::Q] {
            assert!(verify_ribexact2(case(pp, qq), side).unwrap().verdict.is_verified());
        }
    }
}

#[test]
fn main_theorem_and_global_multiplicity_one() {
    for (p, q) in [(11, 7), (5, 7)] {
        let c = case(p, q);
        for side in [Side::P, Side::Q] {
            assert_eq!(verify_thm_main(c, side).unwrap().verdict, Verdict::Verified, "({p},{q}) {side:?}");
        }
        let r = verify_globalmult1(c, &SearchBudget::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Verified, "({p},{q})");
        let xp = c.x_new(Side::P).unwrap();
        let xq = c.x_new(Side::Q).unwrap();
        let lhs = hom_module(&xp, &c.y_p.clone().with_embedding(None)).unwrap().with_embedding(None);
        let l = build_l(&c.t_full_pside, &c.t_new, &c.k_p, &c.s).unwrap();
        let rhs = tensor_mod_torsion(&tensor_mod_torsion(&l.module.clone().with_embedding(None), &xp).unwrap(), &xq).unwrap();
        let cert = r.certificate.unwrap();
        assert!(cert.validate(&lhs, &rhs, &c.t_new, &c.s).unwrap());
        let pair = globalmult1_modules(c).unwrap();
        assert!(cert.validate(&pair.lhs, &pair.rhs, &c.t_new, &c.s).unwrap());
    }
    assert_eq!(verify_thm_main(case(11, 7), Side::P).unwrap().details["coker_invariants"], "[2]");
}

#[test]
fn controllability_has_no_violations() {
    for (p, q) in CASES {
        let records = controllability_report(case(p, q), 13).unwrap();
        assert!(!records.is_empty());
        for r in &records {
            assert!(r.violations.is_empty(), "({p},{q}) {}: {:?}", r.ideal.describe(), r.violations);
            assert_eq!(r.ideal.controllability[&p], r.d_p);
            assert_eq!(r.predicted_torsion_dim(), 2 * r.h_m);
        }
    }
    let eis2 = controllability_report(case(11, 7), 2).unwrap().into_iter().find(|r| r.ideal.eisenstein).unwrap();
    assert!(eis2.in_s);
    assert_eq!((eis2.d_p, eis2.d_q, eis2.h_m), (2, 1, 3));
}

#[test]
fn higher_multiplicity_hits_satisfy_congruences() {
    let hits = find_higher_multiplicity(&[(5, 7)], 13).unwrap();
    for h in &hits {
        assert!(h.satisfies_congruences());
        assert!(h.record.ideal.ell >= 5 && !h.record.ideal.eisenstein);
    }
    assert!(hits.is_empty());
}
