use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use super::{HeckeAlgebra, IdealInT};
use crate::exactlin::modp::{inv_mod, mul_mod, reduce, ModMatrix, Subspace};
use crate::exactlin::{IntegerMatrix, Lattice};
use crate::galois::{Fe, Level};
use crate::label::Label;

/// A maximal ideal of a Hecke algebra with its residue field data.
#[derive(Clone, Debug)]
pub struct MaximalIdeal {
    pub ell: u64,
    pub degree: usize,
    /// Length of the local factor of `T / ell T` (its dimension over the residue field).
    pub length: usize,
    pub residue: Arc<Level>,
    /// Image of each generator in the residue field.
    pub images: BTreeMap<Label, Fe>,
    /// `Z`-basis of the ideal, in algebra coordinates; contains `ell T`.
    pub ideal: IdealInT,
    pub eisenstein: bool,
    /// Dimension of `X_r / m X_r` over the residue field, per prime `r | N`.
    pub controllability: BTreeMap<u64, usize>,
}

impl MaximalIdeal {
    /// Short human-readable name: residue characteristic, degree and generator images.
    pub fn describe(&self) -> String {
        let imgs: Vec<String> =
            self.images.iter().map(|(l, v)| format!("{l}={}", self.residue.format(v))).collect();
        format!("(ell={}, deg={}; {})", self.ell, self.degree, imgs.join(", "))
    }

    pub fn image(&self, l: Label) -> Option<&Fe> {
        self.images.get(&l)
    }
}

impl PartialEq for MaximalIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell && self.ideal == other.ideal
    }
}

impl Eq for MaximalIdeal {}

/// `T_l = l + 1` in the residue field for every generator `T_l` with `l` prime to `n`.
pub fn is_eisenstein(m: &MaximalIdeal, n: u64) -> bool {
    if m.degree > 1 {
        return false;
    }
    m.images.iter().all(|(label, img)| match label {
        Label::T(l) if !n.is_multiple_of(*l) => *img == m.residue.from_u64(l + 1),
        _ => true,
    })
}

/// `T / l T` with its structure constants.
struct ModAlgebra {
    l: u64,
    r: usize,
    mult: Vec<ModMatrix>,
}

impl ModAlgebra {
    fn new(t: &HeckeAlgebra, l: u64) -> Self {
        ModAlgebra { l, r: t.rank(), mult: t.table().iter().map(|m| ModMatrix::from_int(m, l)).collect() }
    }

    fn mult_matrix(&self, a: &[u64]) -> ModMatrix {
        let mut out = ModMatrix::zeros(self.l, self.r, self.r);
        for (i, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.data.iter_mut().zip(&self.mult[i].data) {
                *o = (*o + mul_mod(c, x, self.l)) % self.l;
            }
        }
        out
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.mult_matrix(b).left_apply(a)
    }

    fn pow(&self, a: &[u64], mut e: u64, one: &[u64]) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = one.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.l - y) % self.l).collect()
    }

    fn scale(&self, a: &[u64], c: u64) -> Vec<u64> {
        a.iter().map(|x| mul_mod(*x, c, self.l)).collect()
    }

    /// Matrix of `x -> x^l`, which is `F_l`-linear.
    fn frobenius(&self, one: &[u64]) -> ModMatrix {
        let mut f = ModMatrix::zeros(self.l, self.r, self.r);
        for j in 0..self.r {
            let e: Vec<u64> = (0..self.r).map(|i| u64::from(i == j)).collect();
            let img = self.pow(&e, self.l, one);
            for (k, v) in img.into_iter().enumerate() {
                f.set(j, k, v);
            }
        }
        f
    }

    /// Monic minimal polynomial (lowest coefficient first) of `c` in the
    /// subalgebra with unit `e`.
    fn minpoly(&self, c: &[u64], e: &[u64]) -> Vec<u64> {
        let mut powers = vec![e.to_vec()];
        let mut space = Subspace::new(self.l, self.r);
        space.insert(e.to_vec());
        loop {
            let next = self.mul(powers.last().unwrap(), c);
            let dependent = space.contains(&next);
            powers.push(next.clone());
            if dependent {
                break;
            }
            space.insert(next);
        }
        let d = powers.len() - 1;
        let mut m = ModMatrix::zeros(self.l, d + 1, self.r);
        for (i, p) in powers.iter().enumerate() {
            for (k, &v) in p.iter().enumerate() {
                m.set(i, k, v);
            }
        }
        let ker = m.left_kernel();
        let v = ker.into_iter().find(|v| v[d] != 0).expect("dependency involves the top power");
        let inv = inv_mod(v[d], self.l);
        v.iter().map(|x| mul_mod(*x, inv, self.l)).collect()
    }
}

impl HeckeAlgebra {
    /// All maximal ideals of residue characteristic `ell`.
    pub fn maximal_ideals_above(&self, ell: u64) -> Vec<MaximalIdeal> {
        if let Some(found) = self.ideal_cache.lock().expect("ideal cache").get(&ell) {
            return found.clone();
        }
        let out = self.compute_maximal_ideals(ell);
        self.ideal_cache.lock().expect("ideal cache").insert(ell, out.clone());
        out
    }

    fn compute_maximal_ideals(&self, ell: u64) -> Vec<MaximalIdeal> {
        let r = self.rank();
        if r == 0 {
            return Vec::new();
        }
        let a = ModAlgebra::new(self, ell);
        let one: Vec<u64> = self.one.iter().map(|x| reduce(x, ell)).collect();
        let frob = a.frobenius(&one);
        let mut fixed_map = frob.clone();
        for i in 0..r {
            let v = (fixed_map.get(i, i) + ell - 1) % ell;
            fixed_map.set(i, i, v);
        }
        let fixed = fixed_map.left_kernel();
        let prime = Level::prime(ell);
        let mut idems = vec![one.clone()];
        for b in &fixed {
            let mut next = Vec::new();
            for e in &idems {
                let c = a.mul(b, e);
                let mp = a.minpoly(&c, e);
                let f = prime.poly_from_u64(&mp);
                for (lam, _) in prime.roots(&f, 0) {
                    let lam = lam.0[0];
                    let shifted = a.sub(&c, &a.scale(e, lam));
                    let supp = a.pow(&shifted, ell - 1, &one);
                    let piece = a.sub(e, &supp);
                    if piece.iter().any(|x| *x != 0) {
                        next.push(piece);
                    }
                }
            }
            idems = next;
        }
        debug_assert_eq!(idems.len(), fixed.len());
        let mut k = 0u32;
        let mut lk: u128 = 1;
        while lk < r as u128 {
            lk *= ell as u128;
            k += 1;
        }
        let mut fk = frob.clone();
        for _ in 1..k.max(1) {
            fk = fk.mul(&frob);
        }
        let mut out: Vec<MaximalIdeal> = idems.iter().map(|e| self.ideal_from_idempotent(&a, e, &fk)).collect();
        out.sort_by_key(|m| {
            let key: Vec<u128> = m.images.values().map(|v| v.index(ell)).collect();
            (m.degree, key)
        });
        out
    }

    fn ideal_from_idempotent(&self, a: &ModAlgebra, e: &[u64], fk: &ModMatrix) -> MaximalIdeal {
        let ell = a.l;
        let r = a.r;
        let me = a.mult_matrix(e);
        let local_dim = me.rank();
        let phi = me.mul(fk);
        let degree = phi.rank();
        let kernel = phi.left_kernel();
        let mut rows: Vec<Vec<BigInt>> = kernel.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
        for i in 0..r {
            rows.push((0..r).map(|j| BigInt::from(if i == j { ell } else { 0 })).collect());
        }
        let ideal = IdealInT { basis: Lattice::from_rows(r, IntegerMatrix::from_rows(rows, r)) };
        let gens: Vec<(Label, Vec<u64>)> = self
            .generators
            .iter()
            .map(|(l, g)| {
                let g: Vec<u64> = g.iter().map(|x| reduce(x, ell)).collect();
                (*l, phi.left_apply(&g))
            })
            .collect();
        let (residue, images) = residue_images(a, e, degree, &gens);
        let mut m = MaximalIdeal {
            ell,
            degree,
            length: local_dim / degree,
            residue,
            images,
            ideal,
            eisenstein: false,
            controllability: BTreeMap::new(),
        };
        if let Some(n) = self.level {
            m.eisenstein = is_eisenstein(&m, n);
        }
        m
    }
}

/// Realizes the residue field (the image of `x -> (x e)^(l^k)`, with unit
/// `e`) inside the standard field of its size, and maps the generators there.
fn residue_images(a: &ModAlgebra, e: &[u64], degree: usize, gens: &[(Label, Vec<u64>)]) -> (Arc<Level>, BTreeMap<Label, Fe>) {
    let ell = a.l;
    let piv = e.iter().position(|x| *x != 0).expect("nonzero idempotent");
    if degree == 1 {
        let level = Arc::new(Level::prime(ell));
        let inv = inv_mod(e[piv], ell);
        let images = gens.iter().map(|(l, g)| (*l, level.from_u64(mul_mod(g[piv], inv, ell)))).collect();
        return (level, images);
    }
    let level = Arc::new(Level::new(ell, Level::lex_least_irreducible(ell, degree)));
    // A primitive element: a generator image, else a small combination of two.
    let mut candidates: Vec<Vec<u64>> = gens.iter().map(|(_, g)| g.clone()).collect();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            for c in 1..ell.min(8) {
                candidates.push(
                    gens[i].1.iter().zip(&gens[j].1).map(|(x, y)| (x + mul_mod(c, *y, ell)) % ell).collect(),
                );
            }
        }
    }
    let (theta, mp) = candidates
        .into_iter()
        .find_map(|c| {
            let mp = a.minpoly(&c, e);
            (mp.len() == degree + 1).then_some((c, mp))
        })
        .expect("the generators generate the residue field");
    let rho = level.roots(&level.poly_from_u64(&mp), 0)[0].0.clone();
    let mut powers = vec![e.to_vec()];
    for _ in 1..degree {
        powers.push(a.mul(powers.last().unwrap(), &theta));
    }
    let images = gens
        .iter()
        .map(|(l, g)| {
            let mut m = ModMatrix::zeros(ell, degree + 1, a.r);
            for (i, p) in powers.iter().chain(std::iter::once(g)).enumerate() {
                for (k, &v) in p.iter().enumerate() {
                    m.set(i, k, v);
                }
            }
            let ker = m.left_kernel();
            let v = ker.into_iter().find(|v| v[degree] != 0).expect("image lies in the residue field");
            let s = ell - inv_mod(v[degree], ell);
            let mut img = level.zero();
            let mut rp = level.one();
            for c in &v[..degree] {
                img = level.add(&img, &level.scale(&rp, mul_mod(*c, s, ell)));
                rp = level.mul(&rp, &rho);
            }
            (*l, img)
        })
        .collect();
    (level, images)
}
