//! The Hecke algebra generated by a commuting family of operators, kept as an
//! exact `Z`-order with an integral basis and multiplication table, together
//! with its ideals and its maximal ideals above a rational prime.

mod maximal;

use std::collections::{BTreeMap, VecDeque};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{hnf_with_transform, left_kernel, prime_factors, IntegerMatrix, Lattice};
use crate::label::Label;
use crate::tmod::TModule;

pub use maximal::{is_eisenstein, MaximalIdeal};

/// `ceil((N / 6) * prod_{r | N} (1 + 1/r))` for squarefree `N`.
pub fn sturm_generator_bound(n: u64) -> u64 {
    let primes = prime_factors(&BigInt::from(n));
    let num: u64 = n * primes.iter().map(|r| r + 1).product::<u64>();
    let den: u64 = 6 * primes.iter().product::<u64>();
    num.div_ceil(den)
}

/// An ideal of a Hecke algebra, as a sublattice of the algebra in its integral basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealInT {
    pub basis: Lattice,
}

impl IdealInT {
    pub fn zero(rank: usize) -> Self {
        IdealInT { basis: Lattice::zero(rank) }
    }

    pub fn unit(rank: usize) -> Self {
        IdealInT { basis: Lattice::full(rank) }
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn contains(&self, a: &[BigInt]) -> bool {
        self.basis.contains(a)
    }

    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        self.basis.basis().row_vecs()
    }
}

/// The commutative ring generated by labelled operators on a reference module.
#[derive(Clone, Debug)]
pub struct HeckeAlgebra {
    labels: Vec<Label>,
    reference: TModule,
    /// Exponent vectors (indexed like `labels`) spanning the algebra.
    monomials: Vec<Vec<u32>>,
    /// Basis element `k` is `sum_j coeffs[k][j] * monomial_j`.
    coeffs: IntegerMatrix,
    /// Basis elements as flattened matrices on the reference module.
    zbasis: Lattice,
    /// `mult[i]` has row `j` equal to the coordinates of `b_j * b_i`.
    mult: Vec<IntegerMatrix>,
    generators: BTreeMap<Label, Vec<BigInt>>,
    one: Vec<BigInt>,
    level: Option<u64>,
    ideal_cache: Arc<Mutex<BTreeMap<u64, Vec<MaximalIdeal>>>>,
}

/// Algebra generated by `ops` (row convention, on the ambient lattice) acting on `reference`.
pub fn algebra_from_operators(ops: &BTreeMap<Label, IntegerMatrix>, reference: &Lattice) -> Result<HeckeAlgebra> {
    let m = TModule::restrict(ops, reference.basis()).map_err(|_| Error::NotStable)?;
    HeckeAlgebra::from_module(&m)
}

impl HeckeAlgebra {
    /// The algebra generated by the actions of a module.
    pub fn from_module(module: &TModule) -> Result<Self> {
        module.check_commuting()?;
        let n = module.rank();
        let labels = module.labels();
        let gens: Vec<&IntegerMatrix> = labels.iter().map(|l| module.action(*l).expect("label")).collect();
        let mut monomials = vec![vec![0u32; labels.len()]];
        let mut mats = vec![IntegerMatrix::identity(n)];
        let ident_flat = IntegerMatrix::from_rows(vec![mats[0].flatten()], n * n);
        let mut lat = Lattice::from_rows(n * n, ident_flat.clone());
        let mut flats = ident_flat;
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (gi, g) in gens.iter().enumerate() {
                let prod = mats[i].mul(g);
                let flat = prod.flatten();
                if lat.contains(&flat) {
                    continue;
                }
                let row = IntegerMatrix::from_rows(vec![flat], n * n);
                lat = lat.sum(&Lattice::from_rows(n * n, row.clone()));
                flats = flats.vstack(&row);
                let mut mono = monomials[i].clone();
                mono[gi] += 1;
                monomials.push(mono);
                mats.push(prod);
                queue.push_back(mats.len() - 1);
            }
        }
        let h = hnf_with_transform(&flats);
        let r = h.pivots.len();
        debug_assert_eq!(h.h, *lat.basis());
        let coeffs = h.u.block(0, 0, r, monomials.len());
        let zbasis = lat;
        let elems: Vec<IntegerMatrix> = (0..r).map(|k| IntegerMatrix::from_flat(n, n, zbasis.basis().row(k))).collect();
        let coords = |m: &IntegerMatrix| -> Vec<BigInt> {
            let v: Vec<BigInt> = zbasis.pivots().iter().map(|&c| m[(c / n, c % n)].clone()).collect();
            pivot_solve(&zbasis, &v)
        };
        let mut table = vec![vec![Vec::new(); r]; r];
        for i in 0..r {
            for j in i..r {
                let v: Vec<BigInt> = zbasis
                    .pivots()
                    .iter()
                    .map(|&c| {
                        let (a, b) = (c / n, c % n);
                        (0..n).map(|t| &elems[i][(a, t)] * &elems[j][(t, b)]).sum()
                    })
                    .collect();
                let c = pivot_solve(&zbasis, &v);
                table[i][j] = c.clone();
                table[j][i] = c;
            }
        }
        let mult = (0..r).map(|i| IntegerMatrix::from_rows((0..r).map(|j| table[j][i].clone()).collect(), r)).collect();
        let generators = labels.iter().zip(&gens).map(|(l, g)| (*l, coords(g))).collect();
        let one = coords(&IntegerMatrix::identity(n));
        let alg = HeckeAlgebra {
            labels,
            reference: module.clone(),
            monomials,
            coeffs,
            zbasis,
            mult,
            generators,
            one,
            level: None,
            ideal_cache: Arc::default(),
        };
        debug_assert!(alg.verify_table());
        Ok(alg)
    }

    /// Records the level `N`, used to classify Eisenstein ideals.
    pub fn with_level(mut self, n: u64) -> Self {
        self.level = Some(n);
        self.ideal_cache = Arc::default();
        self
    }

    pub fn level(&self) -> Option<u64> {
        self.level
    }

    pub fn rank(&self) -> usize {
        self.zbasis.rank()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn reference(&self) -> &TModule {
        &self.reference
    }

    pub fn one(&self) -> Vec<BigInt> {
        self.one.clone()
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.rank()]
    }

    pub fn generator(&self, l: Label) -> Option<&[BigInt]> {
        self.generators.get(&l).map(|v| v.as_slice())
    }

    pub fn generators(&self) -> &BTreeMap<Label, Vec<BigInt>> {
        &self.generators
    }

    /// Row `j` is the coordinate vector of `b_j * a`.
    pub fn mult_matrix(&self, a: &[BigInt]) -> IntegerMatrix {
        let r = self.rank();
        let mut out = IntegerMatrix::zeros(r, r);
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out.add_scaled(&self.mult[i], c);
            }
        }
        out
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        self.mult_matrix(b).left_mul_vec(a)
    }

    /// Multiplication table: `table()[i]` has row `j` equal to `b_j * b_i`.
    pub fn table(&self) -> &[IntegerMatrix] {
        &self.mult
    }

    /// Re-derives every table entry, in both orders, from the reference matrices.
    pub fn verify_table(&self) -> bool {
        let r = self.rank();
        let elems: Vec<IntegerMatrix> = (0..r).map(|k| self.element_matrix(&unit_vec(r, k))).collect();
        (0..r).all(|i| {
            (0..r).all(|j| {
                let prod = elems[j].mul(&elems[i]);
                self.zbasis.coords(&prod.flatten()).as_deref() == Some(self.mult[i].row(j))
            })
        })
    }

    /// Matrix of an algebra element on the reference module.
    pub fn element_matrix(&self, a: &[BigInt]) -> IntegerMatrix {
        let n = self.reference.rank();
        let flat = self.zbasis.basis().left_mul_vec(a);
        IntegerMatrix::from_flat(n, n, &flat)
    }

    /// Coordinates of a reference-module endomorphism lying in the algebra.
    pub fn coords_of_matrix(&self, m: &IntegerMatrix) -> Option<Vec<BigInt>> {
        self.zbasis.coords(&m.flatten())
    }

    pub fn contains_operator(&self, m: &IntegerMatrix) -> bool {
        self.coords_of_matrix(m).is_some()
    }

    /// Matrices of the basis elements on another module carrying the same labels.
    pub fn basis_on(&self, module: &TModule) -> Result<Vec<IntegerMatrix>> {
        let n = module.rank();
        let monos: Vec<IntegerMatrix> = self
            .monomials
            .iter()
            .map(|e| {
                let exps: Vec<(Label, u32)> = self.labels.iter().copied().zip(e.iter().copied()).collect();
                module.eval_monomial(&exps)
            })
            .collect::<Result<_>>()?;
        Ok((0..self.rank())
            .map(|k| {
                let mut m = IntegerMatrix::zeros(n, n);
                for (j, mono) in monos.iter().enumerate() {
                    let c = &self.coeffs[(k, j)];
                    if !c.is_zero() {
                        m.add_scaled(mono, c);
                    }
                }
                m
            })
            .collect())
    }

    /// Matrix of an element on another module, given the basis matrices there.
    pub fn element_on(basis: &[IntegerMatrix], a: &[BigInt], n: usize) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(n, n);
        for (b, c) in basis.iter().zip(a) {
            if !c.is_zero() {
                m.add_scaled(b, c);
            }
        }
        m
    }

    /// The algebra as a module over itself.
    pub fn regular_module(&self) -> TModule {
        let actions = self.generators.iter().map(|(l, g)| (*l, self.mult_matrix(g))).collect();
        TModule::new(self.rank(), actions).with_rank_one(true)
    }

    /// Ideal generated by the given elements.
    pub fn ideal_generated(&self, elems: &[Vec<BigInt>]) -> IdealInT {
        let r = self.rank();
        let mut rows = IntegerMatrix::zeros(0, r);
        for e in elems {
            rows = rows.vstack(&self.mult_matrix(e));
        }
        IdealInT { basis: Lattice::from_rows(r, rows) }
    }

    /// Whether a sublattice is closed under multiplication by the algebra.
    pub fn is_ideal(&self, i: &IdealInT) -> bool {
        let r = self.rank();
        i.elements().iter().all(|x| (0..r).all(|k| i.contains(&self.mul(x, &unit_vec(r, k)))))
    }

    pub fn ideal_product(&self, a: &IdealInT, b: &IdealInT) -> IdealInT {
        let r = self.rank();
        let mut rows = Vec::new();
        for x in a.elements() {
            for y in b.elements() {
                rows.push(self.mul(&x, &y));
            }
        }
        IdealInT { basis: Lattice::from_rows(r, IntegerMatrix::from_rows(rows, r)) }
    }

    /// `{a : a * i = 0}`.
    pub fn annihilator(&self, i: &IdealInT) -> IdealInT {
        let r = self.rank();
        if i.rank() == 0 {
            return IdealInT::unit(r);
        }
        let mut m = IntegerMatrix::zeros(r, 0);
        for x in i.elements() {
            m = m.hstack(&self.mult_matrix(&x));
        }
        IdealInT { basis: left_kernel(&m) }
    }

    pub fn perp(&self, i: &IdealInT) -> IdealInT {
        self.annihilator(i)
    }

    /// Image algebra on an operator-stable sublattice of the reference
    /// module, and the kernel of the restriction map.
    pub fn new_quotient(&self, target: &Lattice) -> Result<(HeckeAlgebra, IdealInT)> {
        let sub = self.reference.submodule(target.basis()).map_err(|_| Error::NotStable)?;
        let mut quotient = HeckeAlgebra::from_module(&sub)?;
        quotient.level = self.level;
        let k = self.kernel_on(&sub)?;
        Ok((quotient, k))
    }

    /// `{a : a acts as zero on module}`.
    pub fn kernel_on(&self, module: &TModule) -> Result<IdealInT> {
        let basis = self.basis_on(module)?;
        let rows: Vec<Vec<BigInt>> = basis.iter().map(|b| b.flatten()).collect();
        let cols = module.rank() * module.rank();
        let m = IntegerMatrix::from_rows(rows, cols);
        Ok(IdealInT { basis: left_kernel(&m) })
    }
}

pub(crate) fn unit_vec(r: usize, k: usize) -> Vec<BigInt> {
    (0..r).map(|i| if i == k { BigInt::one() } else { BigInt::zero() }).collect()
}

/// Coordinates of a lattice vector from its entries at the pivot columns.
fn pivot_solve(lat: &Lattice, v: &[BigInt]) -> Vec<BigInt> {
    let h = lat.basis();
    let piv = lat.pivots();
    let mut c: Vec<BigInt> = Vec::with_capacity(piv.len());
    for (i, &pc) in piv.iter().enumerate() {
        let mut rest = v[i].clone();
        for (k, ck) in c.iter().enumerate() {
            let hv = &h[(k, pc)];
            if !hv.is_zero() && !ck.is_zero() {
                rest -= ck * hv;
            }
        }
        let (q, rem) = rest.div_rem(&h[(i, pc)]);
        debug_assert!(rem.is_zero(), "product left the algebra lattice");
        c.push(q);
    }
    c
}
