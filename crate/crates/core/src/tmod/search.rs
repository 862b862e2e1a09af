use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::finite::{FiniteTModule, SupportSet};
use super::module::TModule;
use super::ops::{base_change_new, combine, dual, evaluation, hom_maps, hom_module};
use crate::error::{Error, Result};
use crate::exactlin::{rank, BasisSolver, IntegerMatrix, Lattice};
use crate::hecke::{HeckeAlgebra, IdealInT};

/// Limits for [`s_isomorphism_search`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Coefficient bound of the exhaustive sweep.
    pub sweep_bound: i64,
    /// The sweep runs only when the Hom module has at most this rank.
    pub sweep_max_rank: usize,
    pub random_draws: u64,
    pub random_bound: i64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { sweep_bound: 2, sweep_max_rank: 6, random_draws: 10_000, random_bound: 8, seed: crate::galois::DEFAULT_SEED }
    }
}

impl SearchBudget {
    /// A budget that tries nothing.
    pub fn zero() -> Self {
        SearchBudget { sweep_bound: 0, sweep_max_rank: 0, random_draws: 0, random_bound: 0, seed: crate::galois::DEFAULT_SEED }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.random_draws == 0 && (self.sweep_bound == 0 || self.sweep_max_rank == 0)
    }
}

/// A `T`-equivariant map `h: M -> N` (row convention, `x -> x h`) with
/// nonzero determinant whose cokernel is supported in `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub map: IntegerMatrix,
    /// Coefficients of `map` in the Hom basis used by the search.
    pub coefficients: Vec<BigInt>,
    pub determinant: BigInt,
    pub coker_invariants: Vec<BigInt>,
    /// Descriptions of the maximal ideals in the support of the cokernel.
    pub coker_support: Vec<String>,
}

impl Certificate {
    /// Re-checks the certificate from the modules alone: equivariance,
    /// determinant, cokernel structure and its support.
    pub fn validate(&self, m: &TModule, n: &TModule, t: &HeckeAlgebra, s: &SupportSet) -> Result<bool> {
        let h = &self.map;
        if h.rows() != m.rank() || h.cols() != n.rank() || m.labels() != n.labels() {
            return Ok(false);
        }
        for (l, a) in m.actions() {
            let b = n.action(*l).expect("same labels");
            if a.mul(h) != h.mul(b) {
                return Ok(false);
            }
        }
        let det = h.det();
        if det.is_zero() || det != self.determinant {
            return Ok(false);
        }
        let coker = FiniteTModule::cokernel(h, n)?;
        if coker.group().invariant_factors != self.coker_invariants {
            return Ok(false);
        }
        let support = coker.support(t)?;
        Ok(support.iter().all(|m| s.contains(m)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Verified(Certificate),
    Inconclusive { tried: u64 },
}

impl SearchOutcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, SearchOutcome::Verified(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            SearchOutcome::Verified(c) => Some(c),
            SearchOutcome::Inconclusive { .. } => None,
        }
    }
}

const TRIAL_BOUND: u64 = 100_000;

/// Prime factors of `n`, or `None` when a cofactor beyond trial division remains.
fn factor_by_trial(n: &BigInt) -> Option<Vec<u64>> {
    let mut n = n.abs().to_u128()?;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_BOUND && (d as u128) * (d as u128) <= n {
        if n % d as u128 == 0 {
            out.push(d);
            while n % d as u128 == 0 {
                n /= d as u128;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        if n > (TRIAL_BOUND as u128) * (TRIAL_BOUND as u128) {
            return None;
        }
        out.push(n as u64);
    }
    Some(out)
}

struct Searcher<'a> {
    m: &'a TModule,
    n: &'a TModule,
    t: &'a HeckeAlgebra,
    s: &'a SupportSet,
    maps: Vec<IntegerMatrix>,
}

impl Searcher<'_> {
    fn try_coefficients(&self, c: &[BigInt]) -> Result<Option<Certificate>> {
        let h = combine(&self.maps, c, self.m.rank(), self.n.rank());
        let det = h.det();
        if det.is_zero() {
            return Ok(None);
        }
        let Some(primes) = factor_by_trial(&det) else { return Ok(None) };
        let open: Vec<u64> = primes
            .into_iter()
            .filter(|l| {
                !self.s.small_primes.contains(l) && !self.t.maximal_ideals_above(*l).iter().all(|m| self.s.contains(m))
            })
            .collect();
        let coker = FiniteTModule::cokernel(&h, self.n)?;
        for l in open {
            for m in self.t.maximal_ideals_above(l) {
                if !self.s.contains(&m) && coker.is_supported_at(self.t, &m)? {
                    return Ok(None);
                }
            }
        }
        let coker_support = coker.support(self.t)?.iter().map(|m| m.describe()).collect();
        Ok(Some(Certificate {
            map: h,
            coefficients: c.to_vec(),
            determinant: det,
            coker_invariants: coker.group().invariant_factors,
            coker_support,
        }))
    }
}

/// Nonzero coefficient vectors of length `k` with entries in `[-b, b]`, at
/// most `support` of them nonzero, ordered by sup norm, then by absolute sum.
fn sweep(k: usize, b: i64, support: usize) -> Vec<Vec<i64>> {
    fn extend(out: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>, k: usize, b: i64, left: usize) {
        if cur.len() == k {
            if cur.iter().any(|x| *x != 0) {
                out.push(cur.clone());
            }
            return;
        }
        cur.push(0);
        extend(out, cur, k, b, left);
        cur.pop();
        if left > 0 {
            for c in (1..=b).flat_map(|c| [c, -c]) {
                cur.push(c);
                extend(out, cur, k, b, left - 1);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut out, &mut Vec::with_capacity(k), k, b, support);
    out.sort_by_key(|v| {
        let inf = v.iter().map(|x| x.abs()).max().unwrap_or(0);
        let l1: i64 = v.iter().map(|x| x.abs()).sum();
        (inf, l1)
    });
    out
}

/// Searches `Hom_T(M, N)` for a map certifying `M ≅_S N`.
///
/// A positive answer carries a certificate that [`Certificate::validate`]
/// re-checks; `Inconclusive` proves nothing.
pub fn s_isomorphism_search(
    m: &TModule,
    n: &TModule,
    t: &HeckeAlgebra,
    s: &SupportSet,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    if m.rank() != n.rank() {
        return Err(Error::RankMismatch(m.rank(), n.rank()));
    }
    if budget.is_zero() {
        return Ok(SearchOutcome::Inconclusive { tried: 0 });
    }
    let hom = hom_module(m, n)?;
    let k = hom.rank();
    let searcher = Searcher { m, n, t, s, maps: hom_maps(&hom, m.rank(), n.rank()) };
    if m.rank() == 0 {
        return Ok(searcher.try_coefficients(&[])?.map_or(SearchOutcome::Inconclusive { tried: 1 }, SearchOutcome::Verified));
    }
    let mut tried = 0u64;
    let id = IntegerMatrix::identity(m.rank()).flatten();
    if let Some(e) = hom.embedding().filter(|e| e.rows() > 0) {
        if let Some(c) = BasisSolver::new(e).coords(&id) {
            tried += 1;
            if let Some(cert) = searcher.try_coefficients(&c)? {
                return Ok(SearchOutcome::Verified(cert));
            }
        }
    }
    // Unit determinants win outright; otherwise the first certificate of the sweep is kept.
    let mut first = None;
    if budget.sweep_bound > 0 && budget.sweep_max_rank > 0 {
        let support = if k <= budget.sweep_max_rank { k } else { 2 };
        for c in sweep(k, budget.sweep_bound, support) {
            tried += 1;
            let c: Vec<BigInt> = c.into_iter().map(BigInt::from).collect();
            if let Some(cert) = searcher.try_coefficients(&c)? {
                if cert.determinant.abs().is_one() {
                    return Ok(SearchOutcome::Verified(cert));
                }
                first.get_or_insert(cert);
            }
        }
    }
    if let Some(cert) = first {
        return Ok(SearchOutcome::Verified(cert));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let b = budget.random_bound.max(1);
    for _ in 0..budget.random_draws {
        tried += 1;
        let c: Vec<BigInt> = (0..k).map(|_| BigInt::from(rng.gen_range(-b..=b))).collect();
        if let Some(cert) = searcher.try_coefficients(&c)? {
            return Ok(SearchOutcome::Verified(cert));
        }
    }
    Ok(SearchOutcome::Inconclusive { tried })
}

/// The module `L = Hom_{T'}((T*) ⊗_T T', T')` over a flat quotient `T' = T / K`.
#[derive(Clone, Debug)]
pub struct LModule {
    pub module: TModule,
    /// Residue characteristics outside `S` where the evaluation
    /// `L ⊗ (T* ⊗ T') -> T'` fails to be surjective.
    pub not_locally_free_at: Vec<u64>,
}

pub fn build_l(t_full: &HeckeAlgebra, t_new: &HeckeAlgebra, k: &IdealInT, s: &SupportSet) -> Result<LModule> {
    let (tstar_new, _) = base_change_new(&dual(&t_full.regular_module()), t_full, k)?;
    let target = t_new.regular_module();
    let ev = evaluation(&tstar_new, &target)?;
    let module = ev.hom.clone().with_rank_one(true);
    if module.rank() != t_new.rank() {
        return Err(Error::RankMismatch(module.rank(), t_new.rank()));
    }
    let r = rank(&ev.map);
    if r < target.rank() {
        return Err(Error::RankMismatch(r, target.rank()));
    }
    let mut bad = Vec::new();
    let image = Lattice::from_rows(target.rank(), ev.map.clone());
    let coker = FiniteTModule::cokernel(image.basis(), &target)?;
    for m in coker.support_outside(t_new, s)? {
        if !bad.contains(&m.ell) {
            bad.push(m.ell);
        }
    }
    Ok(LModule { module, not_locally_free_at: bad })
}
