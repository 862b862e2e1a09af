use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, quotient_group, BasisSolver, FiniteAbelianGroup, IntegerMatrix, Lattice};
use crate::hecke::{sturm_generator_bound, HeckeAlgebra, IdealInT};
use crate::label::Label;
use crate::ssmod::GraphModule;
use crate::tmod::{base_change_new, FiniteTModule, SupportSet, TModule};

/// Which prime of the level a construction is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    P,
    Q,
}

/// Everything computed for one pair `(p, q)`.
///
/// The p-side graph is the supersingular graph in characteristic `p` with
/// level `q` structure; the q-side graph swaps the roles. Operators on the
/// q-side are renamed so that both sides carry the same labels: its
/// reversal involution becomes `w_p` and its Frobenius becomes `w_q`, each up
/// to the sign recorded in `signs`.
#[derive(Clone, Debug)]
pub struct CaseData {
    pub p: u64,
    pub q: u64,
    /// Largest prime `l` with `T_l` among the generators.
    pub ell_max: u64,
    pub pside: GraphModule,
    pub qside: GraphModule,
    pub vertex_p: GraphModule,
    pub vertex_q: GraphModule,
    /// Degree-zero edge modules: character groups of `J_0(pq)` at `p` and at `q`.
    pub x_p_full: TModule,
    pub x_q_full: TModule,
    /// Degeneracy kernels: the character groups of the Shimura-curve Jacobian at `q` and at `p`.
    pub y_q: TModule,
    pub y_p: TModule,
    pub y_q_in_x: Lattice,
    pub y_p_in_x: Lattice,
    pub t_full_pside: HeckeAlgebra,
    pub t_full_qside: HeckeAlgebra,
    pub t_new: HeckeAlgebra,
    pub k_p: IdealInT,
    pub k_q: IdealInT,
    /// Signs `(s_p, s_q)` with `w_p = s_p * reversal` and `w_q = s_q * Frobenius` on the q-side.
    pub signs: (i64, i64),
    pub s: SupportSet,
}

/// Exactness data of the degeneracy pair on degree-zero parts.
#[derive(Clone, Debug)]
pub struct RibetSequence {
    pub kernel: TModule,
    pub source_rank: usize,
    pub target_rank: usize,
    /// `target / image`, or `None` when the image has lower rank.
    pub cokernel: Option<FiniteAbelianGroup>,
    /// Whether the cokernel is supported in `S` (as a module over the `T_l`, `l` prime to `pq`).
    pub cokernel_in_s: bool,
}

fn side_labels(m: &TModule) -> Vec<Label> {
    m.labels().into_iter().filter(|l| matches!(l, Label::T(_))).collect()
}

fn relabel_qside(m: &TModule, signs: (i64, i64)) -> Result<TModule> {
    let mut map: Vec<(Label, Label, i64)> = side_labels(m).into_iter().map(|l| (l, l, 1)).collect();
    map.push((Label::Wp, Label::Wq, signs.0));
    map.push((Label::Wq, Label::Wp, signs.1));
    Ok(m.relabel(&map)?.with_embedding(m.embedding().cloned()))
}

fn coords_in(outer: &TModule, inner: &TModule) -> Result<Lattice> {
    let (o, i) = match (outer.embedding(), inner.embedding()) {
        (Some(o), Some(i)) => (o, i),
        _ => return Err(Error::Invalid("modules need embeddings".into())),
    };
    if i.rows() == 0 {
        return Ok(Lattice::zero(outer.rank()));
    }
    let c = BasisSolver::new(o).coords_matrix(i).ok_or(Error::NotSublattice)?;
    Ok(Lattice::from_rows(outer.rank(), c))
}

/// The four supersingular graph modules a case is computed from.
#[derive(Clone, Debug)]
pub struct CaseGraphs {
    pub pside: GraphModule,
    pub qside: GraphModule,
    pub vertex_p: GraphModule,
    pub vertex_q: GraphModule,
}

impl CaseGraphs {
    /// Builds both edge graphs with `T_l` for primes `l <= ell`, and the vertex
    /// graphs with `T_l` up to `max(ell, other prime)`.
    pub fn build(p: u64, q: u64, ell: u64) -> Result<Self> {
        Ok(CaseGraphs {
            pside: GraphModule::edge(p, q, ell)?,
            qside: GraphModule::edge(q, p, ell)?,
            vertex_p: GraphModule::vertex(p, ell.max(q))?,
            vertex_q: GraphModule::vertex(q, ell.max(p))?,
        })
    }
}

/// Largest `T_l` index used for `(p, q)`: `ell_max` or the Sturm bound for
/// `pq` (or `sturm` when given), whichever is larger.
pub fn generator_bound(p: u64, q: u64, ell_max: u64, sturm: Option<u64>) -> u64 {
    ell_max.max(sturm.unwrap_or_else(|| sturm_generator_bound(p * q)))
}

impl CaseData {
    /// Builds a case with `T_l` for all primes `l <= generator_bound(p, q, ell_max, None)`.
    pub fn build(p: u64, q: u64, ell_max: u64) -> Result<Self> {
        Self::from_graphs(CaseGraphs::build(p, q, generator_bound(p, q, ell_max, None))?)
    }

    /// Assembles the case from already built graphs.
    pub fn from_graphs(graphs: CaseGraphs) -> Result<Self> {
        let CaseGraphs { pside, qside, vertex_p, vertex_q } = graphs;
        let (p, q) = match pside.q {
            Some(q) if qside.p == q && qside.q == Some(pside.p) => (pside.p, q),
            _ => return Err(Error::Invalid("graphs do not form a (p, q) pair".into())),
        };
        if vertex_p.p != p || vertex_q.p != q || vertex_p.is_edge_module() || vertex_q.is_edge_module() {
            return Err(Error::Invalid("vertex graphs do not match the edge graphs".into()));
        }
        let n = p * q;
        let ell = pside.ell_max;
        let x_p_full = pside.degree_zero_submodule()?.with_rank_one(true);
        let y_q = pside.degeneracy_kernel()?.with_rank_one(true);
        let y_q_in_x = coords_in(&x_p_full, &y_q)?;
        let x_q_raw = qside.degree_zero_submodule()?;
        let y_p_raw = qside.degeneracy_kernel()?;

        let signs = match_signs(&y_q, &y_p_raw)?;
        let x_q_full = relabel_qside(&x_q_raw, signs)?.with_rank_one(true);
        let y_p = relabel_qside(&y_p_raw, signs)?.with_rank_one(true);
        let y_p_in_x = coords_in(&x_q_full, &y_p)?;

        let t_full_pside = HeckeAlgebra::from_module(&x_p_full)?.with_level(n);
        let t_full_qside = HeckeAlgebra::from_module(&x_q_full)?.with_level(n);
        let (t_new, k_p) = t_full_pside.new_quotient(&y_q_in_x)?;
        let y_p_in_xq = x_q_full.submodule(y_p_in_x.basis())?;
        let k_q = t_full_qside.kernel_on(&y_p_in_xq)?;
        Ok(CaseData {
            p,
            q,
            ell_max: ell,
            pside,
            qside,
            vertex_p,
            vertex_q,
            x_p_full,
            x_q_full,
            y_q,
            y_p,
            y_q_in_x,
            y_p_in_x,
            t_full_pside,
            t_full_qside,
            t_new,
            k_p,
            k_q,
            signs,
            s: SupportSet::standard(),
        })
    }

    pub fn level(&self) -> u64 {
        self.p * self.q
    }

    /// Genus of the Shimura curve of discriminant `pq`.
    pub fn shimura_genus(&self) -> usize {
        self.y_q.rank()
    }

    pub fn prime(&self, side: Side) -> u64 {
        match side {
            Side::P => self.p,
            Side::Q => self.q,
        }
    }

    /// The Ribet kernel attached to `side`: `Y_q` from the p-side graph, `Y_p` from the q-side graph.
    pub fn ribet_kernel(&self, side: Side) -> &TModule {
        match side {
            Side::Q => &self.y_q,
            Side::P => &self.y_p,
        }
    }

    /// `X_r(J_0(pq))` at `r`.
    pub fn x_full(&self, side: Side) -> &TModule {
        match side {
            Side::P => &self.x_p_full,
            Side::Q => &self.x_q_full,
        }
    }

    /// The character group at `r` of the new quotient: `X_r(J_0(pq)) ⊗ T_new`.
    pub fn x_new(&self, side: Side) -> Result<TModule> {
        let (bc, _) = match side {
            Side::P => base_change_new(&self.x_p_full, &self.t_full_pside, &self.k_p)?,
            Side::Q => base_change_new(&self.x_q_full, &self.t_full_qside, &self.k_q)?,
        };
        Ok(bc)
    }

    /// Exactness data of `(alpha, beta)` from the degree-zero edge module of
    /// the graph producing the kernel on `side`.
    pub fn ribet_sequence(&self, side: Side) -> Result<RibetSequence> {
        let (graph, vertex, x, kernel) = match side {
            Side::Q => (&self.pside, &self.vertex_p, &self.x_p_full, &self.y_q),
            Side::P => (&self.qside, &self.vertex_q, &self.x_q_full, &self.y_p),
        };
        if graph.vertices != vertex.vertices {
            return Err(Error::Internal("vertex orderings differ".into()));
        }
        let (a, b) = (graph.alpha.as_ref().expect("edge module"), graph.beta.as_ref().expect("edge module"));
        let e = x.embedding().expect("degree-zero module has an embedding");
        let image = e.mul(&a.transpose()).hstack(&e.mul(&b.transpose()));
        let nv = vertex.size();
        let ones = IntegerMatrix::from_rows(vec![vec![BigInt::one(); nv]], nv);
        let deg0 = kernel_basis(&ones);
        let target_basis = deg0.basis().direct_sum(deg0.basis());
        let target = Lattice::from_rows(2 * nv, target_basis.clone());
        let image_lat = Lattice::from_rows(2 * nv, image);
        let cokernel = quotient_group(&target, &image_lat).ok();
        let mut cokernel_in_s = cokernel.is_some();
        if let Some(group) = &cokernel {
            if !group.is_trivial() {
                let labels = side_labels(&vertex.as_tmodule());
                let labels: Vec<Label> =
                    labels.into_iter().filter(|l| matches!(l, Label::T(r) if !self.level().is_multiple_of(*r))).collect();
                let deg0_mod = TModule::restrict(vertex.as_tmodule().actions(), deg0.basis())?.select(&labels)?;
                let doubled = deg0_mod.direct_sum(&deg0_mod)?;
                let solver = BasisSolver::new(&target_basis);
                let rel = solver.coords_matrix(image_lat.basis()).ok_or(Error::NotSublattice)?;
                let f = FiniteTModule::cokernel(&rel, &doubled)?;
                let t = HeckeAlgebra::from_module(&doubled)?.with_level(self.level());
                cokernel_in_s = f.is_supported_in(&t, &self.s)?;
            }
        }
        Ok(RibetSequence {
            kernel: kernel.clone(),
            source_rank: x.rank(),
            target_rank: target.rank(),
            cokernel,
            cokernel_in_s,
        })
    }

    /// Characteristic polynomials of `T_l` on `Y_q` (p-side) and `Y_p` (q-side).
    pub fn jl_charpolys(&self, ell: u64) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
        let label = Label::T(ell);
        let a = self.y_q.action(label).ok_or_else(|| Error::Invalid(format!("no generator {label}")))?;
        let b = self.y_p.action(label).ok_or_else(|| Error::Invalid(format!("no generator {label}")))?;
        Ok((a.charpoly(), b.charpoly()))
    }
}

/// The unique signs making the q-side kernel a module over the same
/// algebra as the p-side kernel: the algebra generated on `Y_q ⊕ Y_p` has
/// the rank of the one on `Y_q`.
fn match_signs(y_q: &TModule, y_p_raw: &TModule) -> Result<(i64, i64)> {
    if y_q.rank() != y_p_raw.rank() {
        return Err(Error::RankMismatch(y_q.rank(), y_p_raw.rank()));
    }
    if y_q.rank() == 0 {
        return Ok((1, 1));
    }
    let base = HeckeAlgebra::from_module(y_q)?.rank();
    let mut found = Vec::new();
    for signs in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let yp = relabel_qside(y_p_raw, signs)?.with_embedding(None);
        let joint = y_q.clone().with_embedding(None).direct_sum(&yp)?;
        if HeckeAlgebra::from_module(&joint)?.rank() == base {
            found.push(signs);
        }
    }
    match found.as_slice() {
        [one] => Ok(*one),
        [] => Err(Error::Internal("no sign choice identifies the two Hecke actions".into())),
        _ => Err(Error::Internal(format!("ambiguous sign choices {found:?}"))),
    }
}
