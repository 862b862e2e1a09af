use super::case::{CaseData, Side};
use crate::error::Result;
use crate::exactlin::{index, primes_up_to, valuation, IntegerMatrix, Lattice};
use crate::hecke::{HeckeAlgebra, MaximalIdeal};
use crate::tmod::{hom_module, ideal_times, TModule};

/// Controllability and multiplicity data for one maximal ideal of the new quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealRecord {
    /// The ideal, with `controllability` filled in for `p` and `q`.
    pub ideal: MaximalIdeal,
    pub in_s: bool,
    pub d_p: usize,
    pub d_q: usize,
    /// Dimension of `Hom(X_p(J_0(pq)^new), Y_p) / m` over the residue field.
    pub h_m: usize,
    /// Number of primes `r` with `d_r = 2`.
    pub uncontrollable: usize,
    pub violations: Vec<String>,
}

impl IdealRecord {
    /// Predicted dimension of the `m`-torsion of the Shimura-curve Jacobian.
    pub fn predicted_torsion_dim(&self) -> usize {
        2 * self.h_m
    }

    pub fn controllable_at(&self, side: Side) -> bool {
        match side {
            Side::P => self.d_p == 1,
            Side::Q => self.d_q == 1,
        }
    }
}

/// `dim M / mM` over the residue field of `m`.
pub fn residue_dim(module: &TModule, t: &HeckeAlgebra, m: &MaximalIdeal) -> Result<usize> {
    let n = module.rank();
    if n == 0 {
        return Ok(0);
    }
    let on = t.basis_on(module)?;
    let mm = Lattice::from_rows(n, ideal_times(&IntegerMatrix::identity(n), &on, &m.ideal, n));
    let idx = index(&Lattice::full(n), &mm).expect("m contains ell, so mM has finite index");
    Ok(valuation(&idx, m.ell) as usize / m.degree)
}

/// One record per maximal ideal of the new quotient with residue characteristic at most `ell_max`.
///
/// The bound `h_m <= 2^k` is checked only for ideals outside `S`; inside `S`
/// the localized modules need not be generated by two elements.
pub fn controllability_report(case: &CaseData, ell_max: u64) -> Result<Vec<IdealRecord>> {
    let xp = case.x_new(Side::P)?;
    let xq = case.x_new(Side::Q)?;
    let hom = hom_module(&xp, &case.y_p.clone().with_embedding(None))?;
    let mut out = Vec::new();
    for ell in primes_up_to(ell_max) {
        for mut m in case.t_new.maximal_ideals_above(ell) {
            let d_p = residue_dim(&xp, &case.t_new, &m)?;
            let d_q = residue_dim(&xq, &case.t_new, &m)?;
            let h_m = residue_dim(&hom, &case.t_new, &m)?;
            m.controllability.insert(case.p, d_p);
            m.controllability.insert(case.q, d_q);
            let in_s = case.s.contains(&m);
            let mut violations = Vec::new();
            for (r, d) in [(case.p, d_p), (case.q, d_q)] {
                if !(1..=2).contains(&d) {
                    violations.push(format!("d_{r} = {d} is outside [1, 2]"));
                }
                if d == 2 && !m.eisenstein && ell >= 5 && r % ell != 1 {
                    violations.push(format!("d_{r} = 2 but {r} is not 1 mod {ell}"));
                }
            }
            let k = [d_p, d_q].iter().filter(|d| **d == 2).count();
            if !in_s && h_m > 1 << k {
                violations.push(format!("h_m = {h_m} exceeds 2^{k}"));
            }
            if !m.eisenstein && ell >= 5 && d_p == 1 && d_q == 1 && h_m != 1 {
                violations.push(format!("controllable at both primes but h_m = {h_m}"));
            }
            out.push(IdealRecord { ideal: m, in_s, d_p, d_q, h_m, uncontrollable: k, violations });
        }
    }
    Ok(out)
}

/// A non-Eisenstein ideal with residue characteristic at least 5 whose
/// Shimura-side torsion is predicted to have dimension four.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityHit {
    pub p: u64,
    pub q: u64,
    pub record: IdealRecord,
}

impl MultiplicityHit {
    /// Every uncontrollable prime `r` satisfies `r = 1 mod ell`.
    pub fn satisfies_congruences(&self) -> bool {
        let ell = self.record.ideal.ell;
        [(self.p, self.record.d_p), (self.q, self.record.d_q)].iter().all(|(r, d)| *d != 2 || r % ell == 1)
    }
}

/// Scans cases for ideals with `h_m = 2`.
pub fn find_higher_multiplicity(cases: &[(u64, u64)], ell_max: u64) -> Result<Vec<MultiplicityHit>> {
    let mut hits = Vec::new();
    for &(p, q) in cases {
        let case = CaseData::build(p, q, 0)?;
        for record in controllability_report(&case, ell_max)? {
            if !record.ideal.eisenstein && record.ideal.ell >= 5 && record.h_m == 2 {
                hits.push(MultiplicityHit { p, q, record });
            }
        }
    }
    Ok(hits)
}
