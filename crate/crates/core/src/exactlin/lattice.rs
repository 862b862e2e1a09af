use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::IntegerMatrix;
use super::normal::{echelon_coords, hnf_core_pivots, inverse_unimodular, kernel_basis, snf};
use crate::error::{Error, Result};

/// Subgroup of `Z^n` stored by its row Hermite normal form basis, so equal
/// lattices have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    ambient: usize,
    basis: IntegerMatrix,
    pivots: Vec<usize>,
}

impl Lattice {
    /// Span of the rows of `gens` inside `Z^ambient`.
    pub fn from_rows(ambient: usize, gens: IntegerMatrix) -> Self {
        assert_eq!(gens.cols(), ambient);
        let (basis, pivots) = hnf_core_pivots(&gens);
        Lattice { ambient, basis, pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Lattice { ambient, basis: IntegerMatrix::zeros(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Lattice { ambient, basis: IntegerMatrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        echelon_coords(&self.basis, &self.pivots, v).is_some()
    }

    /// Coordinates of `v` in the stored basis.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        echelon_coords(&self.basis, &self.pivots, v)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        (0..other.rank()).all(|i| self.contains(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::from_rows(self.ambient, self.basis.vstack(&other.basis))
    }

    pub fn scale(&self, c: &BigInt) -> Lattice {
        Lattice::from_rows(self.ambient, self.basis.scale(c))
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        // x = a*A = b*B  <=>  (a, b) in left kernel of [A; -B]
        let stacked = self.basis.vstack(&other.basis.neg());
        let ker = kernel_basis(&stacked.transpose());
        let k = self.rank();
        let rows: Vec<Vec<BigInt>> = (0..ker.rank())
            .map(|i| {
                let a = &ker.basis().row(i)[..k];
                self.basis.left_mul_vec(a)
            })
            .collect();
        Lattice::from_rows(self.ambient, IntegerMatrix::from_rows(rows, self.ambient))
    }

    /// Vectors of the ambient module with a nonzero multiple in this lattice.
    pub fn saturate(&self) -> Lattice {
        let ann = kernel_basis(&self.basis);
        kernel_basis(ann.basis())
    }

    pub fn is_saturated(&self) -> bool {
        self.saturate() == *self
    }

    /// Orthogonal complement `{v : <b, v> = 0 for all basis rows b}`.
    pub fn annihilator(&self) -> Lattice {
        kernel_basis(&self.basis)
    }
}

/// Finite abelian group given by invariant factors and ambient lifts of generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteAbelianGroup {
    pub invariant_factors: Vec<BigInt>,
    pub generator_lifts: IntegerMatrix,
}

impl FiniteAbelianGroup {
    pub fn trivial(ambient: usize) -> Self {
        FiniteAbelianGroup { invariant_factors: Vec::new(), generator_lifts: IntegerMatrix::zeros(0, ambient) }
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().fold(BigInt::one(), |a, b| a * b)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn exponent(&self) -> BigInt {
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }
}

/// Structure of `outer / inner` for lattices of equal rank with `inner ⊆ outer`.
pub fn quotient_group(outer: &Lattice, inner: &Lattice) -> Result<FiniteAbelianGroup> {
    if outer.ambient_rank() != inner.ambient_rank() {
        return Err(Error::NotSublattice);
    }
    let k = outer.rank();
    let rows = (0..inner.rank())
        .map(|i| outer.coords(inner.basis().row(i)))
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::NotSublattice)?;
    if inner.rank() != k {
        return Err(Error::InfiniteIndex);
    }
    if k == 0 {
        return Ok(FiniteAbelianGroup::trivial(outer.ambient_rank()));
    }
    let c = IntegerMatrix::from_rows(rows, k);
    let s = snf(&c);
    let rinv = inverse_unimodular(&s.right).expect("snf transform is unimodular");
    let gens = rinv.mul(outer.basis());
    let mut factors = Vec::new();
    let mut lifts = Vec::new();
    for i in 0..k {
        let d = s.d[(i, i)].clone();
        if d.is_zero() {
            return Err(Error::InfiniteIndex);
        }
        if !d.is_one() {
            factors.push(d);
            lifts.push(gens.row(i).to_vec());
        }
    }
    Ok(FiniteAbelianGroup {
        invariant_factors: factors,
        generator_lifts: IntegerMatrix::from_rows(lifts, outer.ambient_rank()),
    })
}

/// Index `[outer : inner]`, or `None` when it is infinite or `inner` is not contained.
pub fn index(outer: &Lattice, inner: &Lattice) -> Option<BigInt> {
    quotient_group(outer, inner).ok().map(|g| g.order())
}
