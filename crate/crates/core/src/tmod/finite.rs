use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;

use super::module::TModule;
use super::ops::{dual, ideal_times};
use crate::error::{Error, Result};
use crate::exactlin::{prime_factors, quotient_group, FiniteAbelianGroup, IntegerMatrix, Lattice};
use crate::hecke::{HeckeAlgebra, MaximalIdeal};

/// Membership rule for a set of maximal ideals: every ideal of residue
/// characteristic in `small_primes`, every Eisenstein ideal when `eisenstein`
/// is set, and any ideal listed explicitly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupportSet {
    pub small_primes: BTreeSet<u64>,
    pub eisenstein: bool,
    pub ideals: Vec<MaximalIdeal>,
}

impl SupportSet {
    pub fn empty() -> Self {
        SupportSet::default()
    }

    /// Eisenstein ideals together with every ideal above 2 and 3.
    pub fn standard() -> Self {
        SupportSet { small_primes: [2, 3].into(), eisenstein: true, ideals: Vec::new() }
    }

    pub fn eisenstein_only() -> Self {
        SupportSet { eisenstein: true, ..SupportSet::default() }
    }

    pub fn with_ideal(mut self, m: MaximalIdeal) -> Self {
        self.ideals.push(m);
        self
    }

    pub fn contains(&self, m: &MaximalIdeal) -> bool {
        self.small_primes.contains(&m.ell) || (self.eisenstein && m.eisenstein) || self.ideals.contains(m)
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.small_primes.iter().map(|l| format!("ell={l}")).collect();
        if self.eisenstein {
            parts.push("eisenstein".into());
        }
        parts.extend(self.ideals.iter().map(|m| m.describe()));
        format!("{{{}}}", parts.join(", "))
    }
}

/// A finite module `Z^r / R`: the lattice `Z^r` carries lifted actions (row
/// convention) that preserve the full-rank relation lattice `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTModule {
    lifts: TModule,
    relations: Lattice,
}

impl FiniteTModule {
    pub fn new(lifts: TModule, relations: Lattice) -> Result<Self> {
        if relations.ambient_rank() != lifts.rank() {
            return Err(Error::RankMismatch(relations.ambient_rank(), lifts.rank()));
        }
        if relations.rank() != lifts.rank() {
            return Err(Error::InfiniteIndex);
        }
        for (l, a) in lifts.actions() {
            let img = relations.basis().mul(a);
            if !(0..img.rows()).all(|i| relations.contains(img.row(i))) {
                return Err(Error::OperatorDoesNotRestrict(l.to_string()));
            }
        }
        Ok(FiniteTModule { lifts, relations })
    }

    /// `N / image`, where the rows of `image` (in the coordinates of `N`) span a stable full-rank sublattice.
    pub fn cokernel(image: &IntegerMatrix, target: &TModule) -> Result<Self> {
        let rel = Lattice::from_rows(target.rank(), image.clone());
        FiniteTModule::new(target.clone().with_embedding(None), rel)
    }

    /// `X* / X` for a lattice with a nondegenerate symmetric pairing `gram`
    /// (the image of `x` is `x * gram`), with transposed actions on `X*`.
    pub fn from_pairing(x: &TModule, gram: &IntegerMatrix) -> Result<Self> {
        FiniteTModule::new(dual(x), Lattice::from_rows(x.rank(), gram.clone()))
    }

    pub fn lifts(&self) -> &TModule {
        &self.lifts
    }

    pub fn relations(&self) -> &Lattice {
        &self.relations
    }

    pub fn group(&self) -> FiniteAbelianGroup {
        quotient_group(&Lattice::full(self.lifts.rank()), &self.relations).expect("relations have full rank")
    }

    pub fn order(&self) -> BigInt {
        self.relations.basis().det().abs()
    }

    pub fn is_trivial(&self) -> bool {
        self.relations == Lattice::full(self.lifts.rank())
    }

    fn ideal_times(&self, t: &HeckeAlgebra, m: &MaximalIdeal, basis: &IntegerMatrix) -> Result<Lattice> {
        let n = self.lifts.rank();
        let on = t.basis_on(&self.lifts)?;
        Ok(Lattice::from_rows(n, ideal_times(basis, &on, &m.ideal, n)))
    }

    /// Whether `f / m f` is nonzero.
    pub fn is_supported_at(&self, t: &HeckeAlgebra, m: &MaximalIdeal) -> Result<bool> {
        let n = self.lifts.rank();
        let mf = self.ideal_times(t, m, &IntegerMatrix::identity(n))?.sum(&self.relations);
        Ok(mf != Lattice::full(n))
    }

    /// Maximal ideals `m` of `t` with `f[m] != 0`.
    pub fn support(&self, t: &HeckeAlgebra) -> Result<Vec<MaximalIdeal>> {
        let mut out = Vec::new();
        for ell in prime_factors(&self.order()) {
            out.extend(self.support_above(t, ell)?);
        }
        Ok(out)
    }

    pub fn support_above(&self, t: &HeckeAlgebra, ell: u64) -> Result<Vec<MaximalIdeal>> {
        let mut out = Vec::new();
        for m in t.maximal_ideals_above(ell) {
            if self.is_supported_at(t, &m)? {
                out.push(m);
            }
        }
        Ok(out)
    }

    /// Maximal ideals in the support and outside `s`.
    pub fn support_outside(&self, t: &HeckeAlgebra, s: &SupportSet) -> Result<Vec<MaximalIdeal>> {
        let mut out = Vec::new();
        for ell in prime_factors(&self.order()) {
            if s.small_primes.contains(&ell) {
                continue;
            }
            for m in t.maximal_ideals_above(ell) {
                if !s.contains(&m) && self.is_supported_at(t, &m)? {
                    out.push(m);
                }
            }
        }
        Ok(out)
    }

    /// `m^k f + R` for `k` large, in `Z^r`.
    fn primary_relations(&self, t: &HeckeAlgebra, m: &MaximalIdeal) -> Result<Lattice> {
        let mut cur = Lattice::full(self.lifts.rank());
        loop {
            let next = self.ideal_times(t, m, cur.basis())?.sum(&self.relations);
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// The `m`-primary summand `f_m = f / m^k f`.
    pub fn localize(&self, t: &HeckeAlgebra, m: &MaximalIdeal) -> Result<FiniteTModule> {
        FiniteTModule::new(self.lifts.clone(), self.primary_relations(t, m)?)
    }

    /// The sum of the `m`-primary summands over `m` outside `s`.
    pub fn s_free_part(&self, t: &HeckeAlgebra, s: &SupportSet) -> Result<FiniteTModule> {
        let mut rel = Lattice::full(self.lifts.rank());
        for m in self.support_outside(t, s)? {
            rel = rel.intersect(&self.primary_relations(t, &m)?);
        }
        FiniteTModule::new(self.lifts.clone(), rel)
    }

    pub fn is_supported_in(&self, t: &HeckeAlgebra, s: &SupportSet) -> Result<bool> {
        Ok(self.support_outside(t, s)?.is_empty())
    }
}
