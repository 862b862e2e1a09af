use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactlin::{inverse_unimodular, snf, BasisSolver, IntegerMatrix, Lattice};
use crate::label::Label;

/// A lattice with commuting operators.
///
/// Actions use the row convention: the image of basis vector `i` under a
/// generator is row `i` of its matrix, so a coordinate vector `x` maps to
/// `x * A`. When the module sits inside an ambient lattice, `embedding` holds
/// its basis vectors as rows in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TModule {
    rank: usize,
    actions: BTreeMap<Label, IntegerMatrix>,
    embedding: Option<IntegerMatrix>,
    rank_one: bool,
}

impl TModule {
    pub fn new(rank: usize, actions: BTreeMap<Label, IntegerMatrix>) -> Self {
        for (l, a) in &actions {
            assert!(a.rows() == rank && a.cols() == rank, "action {l} has the wrong shape");
        }
        TModule { rank, actions, embedding: None, rank_one: false }
    }

    /// The zero module carrying the given labels.
    pub fn zero(labels: impl IntoIterator<Item = Label>) -> Self {
        TModule::new(0, labels.into_iter().map(|l| (l, IntegerMatrix::zeros(0, 0))).collect())
    }

    /// Submodule spanned by the rows of `basis` (independent, in ambient
    /// coordinates), with ambient actions in the row convention.
    pub fn restrict(ambient: &BTreeMap<Label, IntegerMatrix>, basis: &IntegerMatrix) -> Result<Self> {
        let r = basis.rows();
        if r == 0 {
            let mut m = TModule::zero(ambient.keys().copied());
            m.embedding = Some(basis.clone());
            return Ok(m);
        }
        let solver = BasisSolver::new(basis);
        let mut actions = BTreeMap::new();
        for (l, a) in ambient {
            let img = basis.mul(a);
            let c = solver.coords_matrix(&img).ok_or_else(|| Error::OperatorDoesNotRestrict(l.to_string()))?;
            actions.insert(*l, c);
        }
        Ok(TModule { rank: r, actions, embedding: Some(basis.clone()), rank_one: false })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_rank_one(&self) -> bool {
        self.rank_one
    }

    pub fn with_rank_one(mut self, flag: bool) -> Self {
        self.rank_one = flag;
        self
    }

    pub fn embedding(&self) -> Option<&IntegerMatrix> {
        self.embedding.as_ref()
    }

    pub fn with_embedding(mut self, e: Option<IntegerMatrix>) -> Self {
        self.embedding = e;
        self
    }

    pub fn actions(&self) -> &BTreeMap<Label, IntegerMatrix> {
        &self.actions
    }

    pub fn labels(&self) -> Vec<Label> {
        self.actions.keys().copied().collect()
    }

    pub fn action(&self, l: Label) -> Option<&IntegerMatrix> {
        self.actions.get(&l)
    }

    /// Keeps only the named generators.
    pub fn select(&self, labels: &[Label]) -> Result<Self> {
        let actions = labels
            .iter()
            .map(|l| self.actions.get(l).map(|a| (*l, a.clone())).ok_or_else(|| Error::Invalid(format!("no action {l}"))))
            .collect::<Result<_>>()?;
        Ok(TModule { actions, ..self.clone() })
    }

    /// Renames and rescales generators: each output label is `sign * action(input label)`.
    pub fn relabel(&self, map: &[(Label, Label, i64)]) -> Result<Self> {
        let mut actions = BTreeMap::new();
        for (to, from, sign) in map {
            let a = self.actions.get(from).ok_or_else(|| Error::Invalid(format!("no action {from}")))?;
            actions.insert(*to, a.scale(&BigInt::from(*sign)));
        }
        Ok(TModule { actions, ..self.clone() })
    }

    /// Checks pairwise commutation of the generators.
    pub fn check_commuting(&self) -> Result<()> {
        let v: Vec<_> = self.actions.iter().collect();
        for (i, (la, a)) in v.iter().enumerate() {
            for (lb, b) in &v[i + 1..] {
                if !a.commutes_with(b) {
                    return Err(Error::NonCommuting(la.to_string(), lb.to_string()));
                }
            }
        }
        Ok(())
    }

    /// Submodule spanned by rows of `basis` in this module's coordinates.
    pub fn submodule(&self, basis: &IntegerMatrix) -> Result<Self> {
        let mut m = TModule::restrict(&self.actions, basis)?;
        m.embedding = Some(match &self.embedding {
            Some(e) => basis.mul(e),
            None => basis.clone(),
        });
        Ok(m)
    }

    /// Whether the sublattice spanned by `basis` is stable under every generator.
    pub fn is_stable(&self, basis: &IntegerMatrix) -> bool {
        let lat = Lattice::from_rows(self.rank, basis.clone());
        self.actions.values().all(|a| {
            let img = basis.mul(a);
            (0..img.rows()).all(|i| lat.contains(img.row(i)))
        })
    }

    /// Quotient by a saturated stable sublattice, with the projection
    /// (rank x quotient rank, row convention) to the quotient coordinates.
    pub fn quotient(&self, sub: &Lattice) -> Result<(Self, IntegerMatrix)> {
        let r = self.rank;
        let s = sub.rank();
        if !sub.is_saturated() {
            return Err(Error::Invalid("quotient by a non-saturated sublattice".into()));
        }
        let (section, proj) = complement(sub, r);
        let mut actions = BTreeMap::new();
        for (l, a) in &self.actions {
            let img = section.mul(a).mul(&proj);
            actions.insert(*l, img);
        }
        // Stability: the sublattice must map into itself.
        for (l, a) in &self.actions {
            let img = sub.basis().mul(a).mul(&proj);
            if !img.is_zero() {
                return Err(Error::OperatorDoesNotRestrict(l.to_string()));
            }
        }
        Ok((TModule { rank: r - s, actions, embedding: None, rank_one: false }, proj))
    }

    /// Direct sum with another module carrying the same labels.
    pub fn direct_sum(&self, other: &TModule) -> Result<Self> {
        let mut actions = BTreeMap::new();
        for (l, a) in &self.actions {
            let b = other.actions.get(l).ok_or_else(|| Error::Invalid(format!("no action {l} on summand")))?;
            actions.insert(*l, a.direct_sum(b));
        }
        Ok(TModule { rank: self.rank + other.rank, actions, embedding: None, rank_one: false })
    }

    /// Matrix of a product of generator powers.
    pub fn eval_monomial(&self, exps: &[(Label, u32)]) -> Result<IntegerMatrix> {
        let mut m = IntegerMatrix::identity(self.rank);
        for (l, e) in exps {
            let a = self.actions.get(l).ok_or_else(|| Error::Invalid(format!("no action {l}")))?;
            m = m.mul(&a.pow(*e));
        }
        Ok(m)
    }
}

/// For a saturated sublattice `L` of `Z^r` of rank `s`: a section
/// `((r - s) x r)` and projection `(r x (r - s))` of the quotient `Z^r / L`,
/// with `section * proj = I` and `L * proj = 0`.
pub fn complement(sub: &Lattice, r: usize) -> (IntegerMatrix, IntegerMatrix) {
    let s = sub.rank();
    if s == 0 {
        return (IntegerMatrix::identity(r), IntegerMatrix::identity(r));
    }
    let f = snf(sub.basis());
    let rinv = inverse_unimodular(&f.right).expect("snf transform is unimodular");
    debug_assert!(f.diagonal().iter().all(|d| d.is_one()), "sublattice must be saturated");
    let section = rinv.block(s, 0, r - s, r);
    let proj = f.right.block(0, s, r, r - s);
    (section, proj)
}
