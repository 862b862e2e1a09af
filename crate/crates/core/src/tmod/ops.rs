use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::module::{complement, TModule};
use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, left_kernel, IntegerMatrix, Lattice};
use crate::hecke::{HeckeAlgebra, IdealInT};
use crate::label::Label;

fn same_labels(m: &TModule, n: &TModule) -> Result<Vec<Label>> {
    let (a, b) = (m.labels(), n.labels());
    if a != b {
        return Err(Error::Invalid(format!("operator labels differ: {a:?} vs {b:?}")));
    }
    Ok(a)
}

/// The `Z`-dual with transposed actions.
pub fn dual(m: &TModule) -> TModule {
    let actions = m.actions().iter().map(|(l, a)| (*l, a.transpose())).collect();
    TModule::new(m.rank(), actions).with_rank_one(m.is_rank_one())
}

/// `M ⊗_T N` modulo `Z`-torsion, with the maps relating it to `M ⊗_Z N`.
///
/// The pure tensor `e_i ⊗ f_j` has index `i * rank(N) + j` in `M ⊗_Z N`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub module: TModule,
    /// `(rank M * rank N) x rank`: image of each pure tensor.
    pub projection: IntegerMatrix,
    /// `rank x (rank M * rank N)`: a lift of each basis vector.
    pub section: IntegerMatrix,
}

impl TensorProduct {
    /// Matrix of the map out of the tensor product induced by a map defined on pure tensors.
    pub fn induced(&self, on_pure: &IntegerMatrix) -> IntegerMatrix {
        self.section.mul(on_pure)
    }
}

pub fn tensor_with_maps(m: &TModule, n: &TModule) -> Result<TensorProduct> {
    let labels = same_labels(m, n)?;
    let (rm, rn) = (m.rank(), n.rank());
    let r = rm * rn;
    let (im, inn) = (IntegerMatrix::identity(rm), IntegerMatrix::identity(rn));
    let mut rel = IntegerMatrix::zeros(0, r);
    let mut ambient = BTreeMap::new();
    for l in &labels {
        let a = m.action(*l).expect("label").kronecker(&inn);
        let b = im.kronecker(n.action(*l).expect("label"));
        rel = rel.vstack(&a.sub(&b));
        ambient.insert(*l, a);
    }
    let sub = Lattice::from_rows(r, rel).saturate();
    let (section, projection) = complement(&sub, r);
    let (q, _) = TModule::new(r, ambient).quotient(&sub)?;
    let module = q.with_rank_one(m.is_rank_one() && n.is_rank_one());
    Ok(TensorProduct { module, projection, section })
}

pub fn tensor_mod_torsion(m: &TModule, n: &TModule) -> Result<TModule> {
    Ok(tensor_with_maps(m, n)?.module)
}

/// `Hom_T(M, N)`: matrices `H` with `A_M H = H A_N` for every generator, acting
/// by post-composition. The embedding holds each basis map flattened row-major.
pub fn hom_module(m: &TModule, n: &TModule) -> Result<TModule> {
    let labels = same_labels(m, n)?;
    let (rm, rn) = (m.rank(), n.rank());
    let r = rm * rn;
    let (im, inn) = (IntegerMatrix::identity(rm), IntegerMatrix::identity(rn));
    let mut system = IntegerMatrix::zeros(0, r);
    let mut ambient = BTreeMap::new();
    for l in &labels {
        let a = m.action(*l).expect("label");
        let b = n.action(*l).expect("label");
        system = system.vstack(&a.kronecker(&inn).sub(&im.kronecker(&b.transpose())));
        ambient.insert(*l, im.kronecker(b));
    }
    let basis = if labels.is_empty() { Lattice::full(r) } else { kernel_basis(&system) };
    let h = TModule::restrict(&ambient, basis.basis())?;
    Ok(h.with_rank_one(m.is_rank_one() && n.is_rank_one()))
}

/// The basis maps of a module built by [`hom_module`].
pub fn hom_maps(h: &TModule, rm: usize, rn: usize) -> Vec<IntegerMatrix> {
    let e = h.embedding().expect("hom module keeps its embedding");
    (0..e.rows()).map(|k| IntegerMatrix::from_flat(rm, rn, e.row(k))).collect()
}

/// `sum_k c_k H_k`.
pub fn combine(maps: &[IntegerMatrix], c: &[BigInt], rm: usize, rn: usize) -> IntegerMatrix {
    let mut out = IntegerMatrix::zeros(rm, rn);
    for (h, x) in maps.iter().zip(c) {
        out.add_scaled(h, x);
    }
    out
}

/// Rows `x * E_a` for every row `x` of `basis` and every basis element `a` of the ideal.
pub(crate) fn ideal_times(basis: &IntegerMatrix, on_module: &[IntegerMatrix], i: &IdealInT, n: usize) -> IntegerMatrix {
    let mut rows = IntegerMatrix::zeros(0, n);
    for a in i.elements() {
        let e = HeckeAlgebra::element_on(on_module, &a, n);
        rows = rows.vstack(&basis.mul(&e));
    }
    rows
}

fn torsion_lattice(m: &TModule, t: &HeckeAlgebra, i: &IdealInT) -> Result<Lattice> {
    let n = m.rank();
    if i.rank() == 0 {
        return Ok(Lattice::full(n));
    }
    let on = t.basis_on(m)?;
    let mut cols = IntegerMatrix::zeros(n, 0);
    for a in i.elements() {
        cols = cols.hstack(&HeckeAlgebra::element_on(&on, &a, n));
    }
    Ok(left_kernel(&cols))
}

/// `M[I] = {x : x * a = 0 for all a in I}`.
pub fn ideal_torsion(m: &TModule, t: &HeckeAlgebra, i: &IdealInT) -> Result<TModule> {
    m.submodule(torsion_lattice(m, t, i)?.basis())
}

/// `M / IM` modulo `Z`-torsion, with the projection.
pub fn ideal_quotient(m: &TModule, t: &HeckeAlgebra, i: &IdealInT) -> Result<(TModule, IntegerMatrix)> {
    let n = m.rank();
    let on = t.basis_on(m)?;
    let im = Lattice::from_rows(n, ideal_times(&IntegerMatrix::identity(n), &on, i, n)).saturate();
    m.quotient(&im)
}

/// `X ⊗_T T/K` realized as `X / X[K^⊥]`, with the projection.
pub fn base_change_new(x: &TModule, t: &HeckeAlgebra, k: &IdealInT) -> Result<(TModule, IntegerMatrix)> {
    let kp = t.perp(k);
    let (q, proj) = x.quotient(&torsion_lattice(x, t, &kp)?)?;
    Ok((q.with_rank_one(x.is_rank_one()), proj))
}

/// `[[tau, r I], [-I, 0]]` on `M ⊕ M`: the operator at `r` on the two
/// copies of an `r`-old module, with trivial diamond action.
pub fn old_part_action(tau: &IntegerMatrix, r: u64) -> IntegerMatrix {
    let n = tau.rows();
    IntegerMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => tau[(i, j)].clone(),
        (true, false) => BigInt::from(if i == j - n { r as i64 } else { 0 }),
        (false, true) => BigInt::from(if i - n == j { -1 } else { 0 }),
        (false, false) => BigInt::from(0),
    })
}

/// The evaluation `Hom(A, B) ⊗ A -> B`, `h ⊗ x -> h(x)`.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub hom: TModule,
    pub tensor: TensorProduct,
    /// `rank(tensor) x rank(B)`.
    pub map: IntegerMatrix,
}

pub fn evaluation(a: &TModule, b: &TModule) -> Result<Evaluation> {
    let hom = hom_module(a, b)?;
    let maps = hom_maps(&hom, a.rank(), b.rank());
    let tensor = tensor_with_maps(&hom, a)?;
    let rows: Vec<Vec<BigInt>> =
        maps.iter().flat_map(|h| (0..a.rank()).map(move |i| h.row(i).to_vec())).collect();
    let on_pure = IntegerMatrix::from_rows(rows, b.rank());
    let map = tensor.induced(&on_pure);
    Ok(Evaluation { hom, tensor, map })
}

/// Matrix of `T ⊗ M -> M`, `a ⊗ x -> a x`, on the tensor product basis.
pub fn unit_map(t: &HeckeAlgebra, m: &TModule) -> Result<(TensorProduct, IntegerMatrix)> {
    let reg = t.regular_module();
    let tensor = tensor_with_maps(&reg, m)?;
    let on = t.basis_on(m)?;
    let rows: Vec<Vec<BigInt>> = on.iter().flat_map(|b| (0..m.rank()).map(move |i| b.row(i).to_vec())).collect();
    let map = tensor.induced(&IntegerMatrix::from_rows(rows, m.rank()));
    Ok((tensor, map))
}

/// Determinants of the canonical maps `M* -> Hom(M, T*)`, `(M ⊗ N)* -> Hom(M, N*)`
/// and `M ⊗ N* -> Hom(M, N)*`; `None` when the two sides have different ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityMaps {
    pub dual_as_hom: Option<BigInt>,
    pub tensor_dual_as_hom: Option<BigInt>,
    pub hom_dual_as_tensor: Option<BigInt>,
}

fn square_det(m: &IntegerMatrix) -> Option<BigInt> {
    m.is_square().then(|| m.det())
}

fn coords_rows(h: &TModule, flats: Vec<Vec<BigInt>>) -> Result<IntegerMatrix> {
    let e = h.embedding().expect("hom module keeps its embedding");
    let cols = e.cols();
    let m = IntegerMatrix::from_rows(flats, cols);
    if e.rows() == 0 {
        return Ok(IntegerMatrix::zeros(m.rows(), 0));
    }
    crate::exactlin::BasisSolver::new(e)
        .coords_matrix(&m)
        .ok_or_else(|| Error::Internal("canonical map is not equivariant".into()))
}

pub fn duality_maps(t: &HeckeAlgebra, m: &TModule, n: &TModule) -> Result<DualityMaps> {
    let (rm, rn) = (m.rank(), n.rank());
    // M* -> Hom(M, T*): dual basis vector j goes to H[i][k] = B_k[i][j].
    let tstar = dual(&t.regular_module());
    let h1 = hom_module(m, &tstar)?;
    let on = t.basis_on(m)?;
    let flats = (0..rm).map(|j| (0..rm).flat_map(|i| on.iter().map(move |b| b[(i, j)].clone())).collect()).collect();
    let dual_as_hom = square_det(&coords_rows(&h1, flats)?);
    // (M ⊗ N)* -> Hom(M, N*): dual basis vector k goes to H[i][j] = P[i rn + j][k].
    let tp = tensor_with_maps(m, n)?;
    let h2 = hom_module(m, &dual(n))?;
    let s = tp.module.rank();
    let flats = (0..s).map(|k| tp.projection.column(k)).collect();
    let tensor_dual_as_hom = square_det(&coords_rows(&h2, flats)?);
    // M ⊗ N* -> Hom(M, N)*: e_i ⊗ g_j goes to (H_k -> H_k[i][j]).
    let h3 = hom_module(m, n)?;
    let maps = hom_maps(&h3, rm, rn);
    let tn = tensor_with_maps(m, &dual(n))?;
    let rows = (0..rm * rn).map(|c| maps.iter().map(|h| h[(c / rn, c % rn)].clone()).collect()).collect();
    let map = tn.induced(&IntegerMatrix::from_rows(rows, maps.len()));
    let hom_dual_as_tensor = square_det(&map);
    Ok(DualityMaps { dual_as_hom, tensor_dual_as_hom, hom_dual_as_tensor })
}
