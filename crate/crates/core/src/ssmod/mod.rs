//! Supersingular vertex and edge modules in characteristic `p`.
//!
//! The vertex module is `Z[SS_p]`, free on supersingular j-invariants. The edge
//! module is free on pairs `(E, C)` with `E` supersingular and `C` cyclic of
//! order `q`, up to isomorphism. Operator matrices use the column convention:
//! column `i` is the image of basis point `i`.

mod modpoly;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use modpoly::{load_modular_polynomial, ModularPolynomial};

use crate::error::{Error, Result};
use crate::exactlin::{is_prime, kernel_basis, IntegerMatrix};
use crate::galois::{FPoly, Fe, FieldTower, Level};
use crate::isogeny::{
    automorphism_count, canonicalize, cyclic_subgroups, push_subgroup, transport_to_canonical, velu, Curve,
    CyclicSubgroup, XMap,
};
use crate::label::Label;
use crate::tmod::TModule;

/// A supersingular j-invariant with weight `|Aut(E)| / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPoint {
    pub j: Fe,
    pub weight: u32,
}

/// A supersingular curve with a cyclic subgroup of order `q`, stored on the
/// canonical model with the least kernel polynomial in its automorphism orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePoint {
    pub j: Fe,
    pub kernel: FPoly,
    pub weight: u32,
}

/// Per-curve data for one Hecke prime: each subgroup with its quotient.
struct Neighbour {
    sub: CyclicSubgroup,
    image: Curve,
    xmap: XMap,
    target: usize,
}

/// Module free on supersingular points, with operators and weights.
#[derive(Clone, Debug)]
pub struct GraphModule {
    pub p: u64,
    pub q: Option<u64>,
    pub ell_max: u64,
    pub vertices: Vec<VertexPoint>,
    pub edges: Vec<EdgePoint>,
    /// Endomorphisms in the column convention.
    pub operators: BTreeMap<Label, IntegerMatrix>,
    /// Source and target maps from edges to vertices (edge modules only).
    pub alpha: Option<IntegerMatrix>,
    pub beta: Option<IntegerMatrix>,
    /// `U_q(E, C) = sum over D != C of (E/D, image of C)`, column convention.
    pub u_q: Option<IntegerMatrix>,
    pub tower: FieldTower,
}

fn check_prime(p: u64) -> Result<()> {
    if p < 5 || !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not a prime >= 5")));
    }
    Ok(())
}

fn hecke_primes(ell_max: u64, bad: &[u64]) -> Vec<u64> {
    crate::exactlin::primes_up_to(ell_max).into_iter().filter(|l| !bad.contains(l)).collect()
}

/// Supersingular j-invariants in characteristic `p`, certified by the mass formula.
pub fn enumerate_ss(p: u64) -> Result<Vec<VertexPoint>> {
    check_prime(p)?;
    let mut tower = FieldTower::new(p);
    let l = tower.build_level(2)?;
    Ok(enumerate_in(&mut tower, &l)?.into_iter().map(|(v, _)| v).collect())
}

fn vertex_weight(curve: &Curve) -> Result<u32> {
    Ok((automorphism_count(curve, None)? / 2) as u32)
}

fn enumerate_in(tower: &mut FieldTower, l: &Arc<Level>) -> Result<Vec<(VertexPoint, Curve)>> {
    let p = l.p();
    let seed = (0..p)
        .map(|j| l.from_u64(j))
        .find(|j| Curve::from_j(l.clone(), j).is_supersingular())
        .ok_or_else(|| Error::Internal(format!("no supersingular j in F_{p}")))?;
    let mut seen: BTreeSet<Fe> = BTreeSet::new();
    let mut queue = VecDeque::from([seed.clone()]);
    seen.insert(seed);
    while let Some(j) = queue.pop_front() {
        let e = Curve::from_j(l.clone(), &j);
        for c in cyclic_subgroups(tower, &e, 2)? {
            let (img, _) = velu(&e, &c)?;
            let j2 = img.j_invariant();
            if seen.insert(j2.clone()) {
                queue.push_back(j2);
            }
        }
    }
    let mut out = Vec::new();
    let mut twelfths = 0u64;
    for j in seen {
        let e = Curve::from_j(l.clone(), &j);
        let w = vertex_weight(&e)?;
        twelfths += 12 / w as u64;
        out.push((VertexPoint { j, weight: w }, e));
    }
    if twelfths != p - 1 {
        return Err(Error::MassFormulaViolation { context: format!("vertices mod {p}"), got: twelfths, expected: p - 1 });
    }
    Ok(out)
}

impl GraphModule {
    /// The vertex module `Z[SS_p]` with `T_l` for primes `l <= ell_max`, `l != p`, and `w_p`.
    pub fn vertex(p: u64, ell_max: u64) -> Result<Self> {
        check_prime(p)?;
        let primes = hecke_primes(ell_max, &[p]);
        let cap = FieldTower::cap_for(primes.iter().copied().max().unwrap_or(2).max(2));
        let mut tower = FieldTower::with_cap(p, cap);
        let l = tower.build_level(2)?;
        let verts = enumerate_in(&mut tower, &l)?;
        let index: HashMap<Fe, usize> = verts.iter().enumerate().map(|(i, (v, _))| (v.j.clone(), i)).collect();
        let n = verts.len();
        let mut operators = BTreeMap::new();
        for &ell in &primes {
            let mut t = IntegerMatrix::zeros(n, n);
            for (col, (_, e)) in verts.iter().enumerate() {
                for c in cyclic_subgroups(&mut tower, e, ell)? {
                    let (img, _) = velu(e, &c)?;
                    let row = lookup(&index, &img.j_invariant(), "vertex")?;
                    t[(row, col)] += 1;
                }
            }
            operators.insert(Label::T(ell), t);
        }
        let mut wp = IntegerMatrix::zeros(n, n);
        for (col, (v, _)) in verts.iter().enumerate() {
            wp[(lookup(&index, &l.frobenius(&v.j), "vertex")?, col)] = BigInt::one();
        }
        operators.insert(Label::Wp, wp);
        Ok(GraphModule {
            p,
            q: None,
            ell_max,
            vertices: verts.into_iter().map(|(v, _)| v).collect(),
            edges: Vec::new(),
            operators,
            alpha: None,
            beta: None,
            u_q: None,
            tower,
        })
    }

    /// The edge module for `(p, q)` with `T_l` (`l <= ell_max`, `l` not in `{p, q}`),
    /// `w_p`, `w_q`, the degeneracy maps and `U_q`.
    pub fn edge(p: u64, q: u64, ell_max: u64) -> Result<Self> {
        check_prime(p)?;
        check_prime(q)?;
        if p == q {
            return Err(Error::Invalid("p and q must differ".into()));
        }
        let primes = hecke_primes(ell_max, &[p, q]);
        let cap = FieldTower::cap_for(primes.iter().copied().chain([q]).max().unwrap_or(q));
        let mut tower = FieldTower::with_cap(p, cap);
        let l = tower.build_level(2)?;
        let seed = tower.seed();
        let verts = enumerate_in(&mut tower, &l)?;
        let vindex: HashMap<Fe, usize> = verts.iter().enumerate().map(|(i, (v, _))| (v.j.clone(), i)).collect();

        // q-subgroups and their quotients for every vertex.
        let mut qdata: Vec<Vec<Neighbour>> = Vec::new();
        for (_, e) in &verts {
            qdata.push(neighbours(&mut tower, e, q, &vindex)?);
        }

        let mut edges: Vec<EdgePoint> = Vec::new();
        for (vi, (v, _)) in verts.iter().enumerate() {
            let mut here: BTreeMap<Vec<Fe>, (FPoly, usize)> = BTreeMap::new();
            for nb in &qdata[vi] {
                let (h, stab) = canonicalize(&l, &v.j, &nb.sub.kernel, seed);
                here.entry(key(&h)).or_insert((h, stab));
            }
            for (_, (h, stab)) in here {
                edges.push(EdgePoint { j: v.j.clone(), kernel: h, weight: stab as u32 });
            }
        }
        edges.sort_by(|a, b| a.j.cmp(&b.j).then_with(|| a.kernel.canonical_cmp(&b.kernel)));
        let twelfths: u64 = edges.iter().map(|e| 12 / e.weight as u64).sum();
        if twelfths != (p - 1) * (q + 1) {
            return Err(Error::MassFormulaViolation {
                context: format!("edges for (p, q) = ({p}, {q})"),
                got: twelfths,
                expected: (p - 1) * (q + 1),
            });
        }
        let eindex: HashMap<(Fe, Vec<Fe>), usize> =
            edges.iter().enumerate().map(|(i, e)| ((e.j.clone(), key(&e.kernel)), i)).collect();
        let find_edge = |curve: &Curve, c: &CyclicSubgroup| -> Result<usize> {
            let (j, h, _) = transport_to_canonical(curve, c, seed)?;
            eindex.get(&(j, key(&h))).copied().ok_or_else(|| Error::Internal("image point missing from edge basis".into()))
        };
        // The q-subgroup of E_v with the same canonical kernel as an edge.
        let position = |vi: usize, e: &EdgePoint| -> Result<usize> {
            qdata[vi]
                .iter()
                .position(|nb| nb.sub.kernel == e.kernel)
                .ok_or_else(|| Error::Internal("edge kernel not among the subgroups of its curve".into()))
        };

        let n = edges.len();
        let nv = verts.len();
        let mut alpha = IntegerMatrix::zeros(nv, n);
        let mut beta = IntegerMatrix::zeros(nv, n);
        let mut wq = IntegerMatrix::zeros(n, n);
        let mut uq = IntegerMatrix::zeros(n, n);
        let mut wp = IntegerMatrix::zeros(n, n);
        for (col, e) in edges.iter().enumerate() {
            let vi = vindex[&e.j];
            let own = &qdata[vi][position(vi, e)?];
            alpha[(vi, col)] = BigInt::one();
            beta[(own.target, col)] = BigInt::one();
            // Reversal: (E/C, image of any other q-subgroup).
            let other = qdata[vi].iter().find(|nb| nb.sub != own.sub).expect("q + 1 > 1 subgroups");
            let rev = push_subgroup(&own.xmap, &other.sub, &own.image)?;
            wq[(find_edge(&own.image, &rev)?, col)] = BigInt::one();
            let cq = CyclicSubgroup { order: q, kernel: e.kernel.clone() };
            for nb in qdata[vi].iter().filter(|nb| nb.sub != own.sub) {
                let img = push_subgroup(&nb.xmap, &cq, &nb.image)?;
                uq[(find_edge(&nb.image, &img)?, col)] += 1;
            }
            let fj = l.frobenius(&e.j);
            let (fh, _) = canonicalize(&l, &fj, &l.poly_frobenius(&e.kernel), seed);
            let frow = eindex
                .get(&(fj, key(&fh)))
                .copied()
                .ok_or_else(|| Error::Internal("Frobenius image missing from edge basis".into()))?;
            wp[(frow, col)] = BigInt::one();
        }

        let mut operators = BTreeMap::new();
        for &ell in &primes {
            let mut t = IntegerMatrix::zeros(n, n);
            let mut cache: HashMap<usize, Vec<Neighbour>> = HashMap::new();
            for (col, e) in edges.iter().enumerate() {
                let vi = vindex[&e.j];
                if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(vi) {
                    let nb = neighbours(&mut tower, &verts[vi].1, ell, &vindex)?;
                    e.insert(nb);
                }
                let cq = CyclicSubgroup { order: q, kernel: e.kernel.clone() };
                for nb in &cache[&vi] {
                    let img = push_subgroup(&nb.xmap, &cq, &nb.image)?;
                    t[(find_edge(&nb.image, &img)?, col)] += 1;
                }
            }
            operators.insert(Label::T(ell), t);
        }
        operators.insert(Label::Wp, wp);
        operators.insert(Label::Wq, wq);
        Ok(GraphModule {
            p,
            q: Some(q),
            ell_max,
            vertices: verts.into_iter().map(|(v, _)| v).collect(),
            edges,
            operators,
            alpha: Some(alpha),
            beta: Some(beta),
            u_q: Some(uq),
            tower,
        })
    }

    pub fn is_edge_module(&self) -> bool {
        self.q.is_some()
    }

    pub fn size(&self) -> usize {
        if self.is_edge_module() {
            self.edges.len()
        } else {
            self.vertices.len()
        }
    }

    pub fn weights(&self) -> Vec<u32> {
        if self.is_edge_module() {
            self.edges.iter().map(|e| e.weight).collect()
        } else {
            self.vertices.iter().map(|v| v.weight).collect()
        }
    }

    /// Sum of `12 / w` over the basis.
    pub fn mass_twelfths(&self) -> u64 {
        self.weights().iter().map(|&w| 12 / w as u64).sum()
    }

    /// Diagonal matrix of weights: the monodromy pairing on the full module.
    pub fn gram(&self) -> IntegerMatrix {
        IntegerMatrix::diagonal(&self.weights().iter().map(|&w| BigInt::from(w)).collect::<Vec<_>>())
    }

    pub fn hecke_primes(&self) -> Vec<u64> {
        self.operators.keys().filter_map(|l| if let Label::T(x) = l { Some(*x) } else { None }).collect()
    }

    pub fn operator(&self, label: Label) -> Option<&IntegerMatrix> {
        self.operators.get(&label)
    }

    pub fn hecke_operator(&self, ell: u64) -> Result<&IntegerMatrix> {
        self.operators.get(&Label::T(ell)).ok_or_else(|| Error::Invalid(format!("T{ell} not built")))
    }

    /// `w_p` (Frobenius) or `w_q` (reversal of the isogeny).
    pub fn atkin_lehner(&self, label: Label) -> Result<&IntegerMatrix> {
        match label {
            Label::Wp | Label::Wq => {
                self.operators.get(&label).ok_or_else(|| Error::Invalid(format!("{label} not defined on this module")))
            }
            _ => Err(Error::Invalid(format!("{label} is not an Atkin-Lehner label"))),
        }
    }

    /// `T_q := -w_q`, the action of `T_q` on the `q`-new quotient.
    pub fn t_q_new(&self) -> Option<IntegerMatrix> {
        self.operators.get(&Label::Wq).map(|w| w.neg())
    }

    /// Operators in the row convention, as a module over themselves.
    pub fn as_tmodule(&self) -> TModule {
        TModule::new(self.size(), self.operators.iter().map(|(l, m)| (*l, m.transpose())).collect())
    }

    /// The sublattice of vectors with coordinate sum zero, with restricted operators.
    pub fn degree_zero_submodule(&self) -> Result<TModule> {
        let ones = IntegerMatrix::from_rows(vec![vec![BigInt::one(); self.size()]], self.size());
        let basis = kernel_basis(&ones);
        TModule::restrict(&self.as_tmodule().actions().clone(), basis.basis())
    }

    /// Kernel of the degeneracy pair `(alpha, beta)` on the edge module.
    pub fn degeneracy_kernel(&self) -> Result<TModule> {
        let (a, b) = match (&self.alpha, &self.beta) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Invalid("degeneracy maps exist only on edge modules".into())),
        };
        let basis = kernel_basis(&a.vstack(b));
        TModule::restrict(&self.as_tmodule().actions().clone(), basis.basis())
    }

    /// Gram matrix of the weight pairing on a submodule with an embedding.
    pub fn monodromy_gram(&self, sub: &TModule) -> Result<IntegerMatrix> {
        let e = sub.embedding().ok_or_else(|| Error::Invalid("submodule has no embedding".into()))?;
        if e.cols() != self.size() {
            return Err(Error::Invalid("submodule lives in a different ambient module".into()));
        }
        Ok(e.mul(&self.gram()).mul(&e.transpose()))
    }

    /// Checks the operator laws: commutation, column sums `l + 1`, weighted
    /// self-adjointness, involutions and the degeneracy identities.
    pub fn check_laws(&self) -> Result<()> {
        let g = self.gram();
        let ops: Vec<(&Label, &IntegerMatrix)> = self.operators.iter().collect();
        for (i, (la, a)) in ops.iter().enumerate() {
            for (lb, b) in &ops[i + 1..] {
                if !a.commutes_with(b) {
                    return Err(Error::NonCommuting(la.to_string(), lb.to_string()));
                }
            }
            if let Label::T(ell) = la {
                for j in 0..a.cols() {
                    let s: BigInt = a.column(j).iter().sum();
                    if s != BigInt::from(*ell + 1) {
                        return Err(Error::Internal(format!("column {j} of {la} has mass {s}")));
                    }
                }
            }
            if g.mul(a) != a.transpose().mul(&g) {
                return Err(Error::Internal(format!("{la} is not self-adjoint for the weight pairing")));
            }
        }
        for w in [Label::Wp, Label::Wq] {
            if let Some(m) = self.operators.get(&w) {
                if !m.mul(m).is_identity() {
                    return Err(Error::Internal(format!("{w} is not an involution")));
                }
            }
        }
        if let (Some(a), Some(b), Some(w)) = (&self.alpha, &self.beta, self.operators.get(&Label::Wq)) {
            if a.mul(w) != *b || b.mul(w) != *a {
                return Err(Error::Internal("reversal does not swap the degeneracy maps".into()));
            }
            for m in [a, b] {
                if (0..m.cols()).any(|j| m.column(j).iter().sum::<BigInt>() != BigInt::one()) {
                    return Err(Error::Internal("degeneracy map column sum differs from 1".into()));
                }
            }
        }
        Ok(())
    }

    /// For vertices where `Phi_q(j, Y)` has only simple roots in the quadratic
    /// level, checks that the targets of the edges at `j` are exactly those roots.
    /// Returns the number of vertices where the shortcut applies.
    pub fn modular_polynomial_shortcut(&self, phi: &ModularPolynomial) -> Result<usize> {
        let q = self.q.ok_or_else(|| Error::Invalid("edge module required".into()))?;
        if phi.ell != q {
            return Err(Error::Invalid(format!("modular polynomial of level {} for q = {q}", phi.ell)));
        }
        let l = self.tower.level(2).expect("quadratic level");
        let beta = self.beta.as_ref().expect("edge module");
        let mut applied = 0;
        for (vi, v) in self.vertices.iter().enumerate() {
            let f = phi.specialize(&l, &v.j);
            let roots = l.roots(&f, self.tower.seed());
            if roots.iter().map(|(_, m)| m).sum::<usize>() != q as usize + 1 || roots.iter().any(|(_, m)| *m > 1) {
                continue;
            }
            applied += 1;
            let mut from_edges: Vec<Fe> = Vec::new();
            for (col, e) in self.edges.iter().enumerate() {
                if e.j == v.j {
                    let t = (0..beta.rows()).find(|&r| !beta[(r, col)].is_zero()).expect("beta column");
                    from_edges.push(self.vertices[t].j.clone());
                }
            }
            from_edges.sort();
            let mut from_phi: Vec<Fe> = roots.into_iter().map(|(r, _)| r).collect();
            from_phi.sort();
            if from_edges != from_phi {
                return Err(Error::Internal(format!("edge targets at vertex {vi} disagree with the modular polynomial")));
            }
        }
        Ok(applied)
    }
}

fn key(h: &FPoly) -> Vec<Fe> {
    h.0.clone()
}

fn lookup(index: &HashMap<Fe, usize>, j: &Fe, what: &str) -> Result<usize> {
    index.get(j).copied().ok_or_else(|| Error::Internal(format!("{what} image is not supersingular")))
}

fn neighbours(tower: &mut FieldTower, e: &Curve, ell: u64, vindex: &HashMap<Fe, usize>) -> Result<Vec<Neighbour>> {
    let mut out = Vec::new();
    for sub in cyclic_subgroups(tower, e, ell)? {
        let (image, xmap) = velu(e, &sub)?;
        let target = lookup(vindex, &image.j_invariant(), "isogeny")?;
        out.push(Neighbour { sub, image, xmap, target });
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
