//! Elliptic curves over the field tower: supersingularity, cyclic subgroups
//! from division polynomials, Vélu isogenies, and canonical forms of
//! (curve, subgroup) pairs up to geometric isomorphism.
//!
//! Every pair is stored on the canonical model of its j-invariant (see
//! [`Curve::from_j`]); isomorphic pairs then differ only by an automorphism
//! `x -> u^2 x`, and the stored kernel polynomial is the least one in its
//! automorphism orbit.

mod curve;
mod divpoly;
mod velu;

use std::cmp::Ordering;

pub use curve::Curve;
pub use divpoly::division_polynomials;
pub use velu::{push_subgroup, velu, XMap};

use crate::error::{Error, Result};
use crate::galois::{FPoly, Fe, FieldTower, Level};

/// A cyclic subgroup of prime order, given by the monic polynomial whose roots
/// are the x-coordinates of its nonzero points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicSubgroup {
    pub order: u64,
    pub kernel: FPoly,
}

impl CyclicSubgroup {
    pub fn cmp_kernel(&self, other: &Self) -> Ordering {
        self.kernel.canonical_cmp(&other.kernel)
    }
}

/// All `n + 1` cyclic subgroups of order `n` of a curve defined over level 2.
///
/// Odd `n`: the x-only `n`-division polynomial is factored over the curve's
/// level; one root of each factor is taken in a large enough level, and the
/// factors vanishing at the x-coordinates of its multiples form one subgroup.
pub fn cyclic_subgroups(tower: &mut FieldTower, curve: &Curve, n: u64) -> Result<Vec<CyclicSubgroup>> {
    let l = curve.level().clone();
    let k0 = l.degree();
    if n == l.p() {
        return Err(Error::Invalid(format!("subgroup order {n} equals the characteristic")));
    }
    let seed = tower.seed();
    let mut out = Vec::new();
    if n == 2 {
        for (r, _) in l.roots(&curve.rhs(), seed) {
            out.push(CyclicSubgroup { order: 2, kernel: l.poly_linear(&r) });
        }
    } else {
        let d = ((n - 1) / 2) as usize;
        let f = division_polynomials(curve, d + 2);
        let psi = division_polynomials(curve, n as usize).pop().expect("nonempty");
        let factors: Vec<FPoly> = l.factor_squarefree(&psi, seed).into_iter().map(|(g, _)| g).collect();
        let lcm = factors.iter().fold(1usize, |acc, g| lcm(acc, g.deg()));
        let big = tower.build_level(k0 * lcm)?;
        let kb = big.degree();
        let emb = |p: &FPoly| tower.embed_poly(k0, kb, p);
        let f_big: Vec<FPoly> = f.iter().map(emb).collect::<Result<_>>()?;
        let rhs_big = emb(&curve.rhs())?;
        let fac_big: Vec<FPoly> = factors.iter().map(emb).collect::<Result<_>>()?;
        let mut used = vec![false; factors.len()];
        for i in 0..factors.len() {
            if used[i] {
                continue;
            }
            let x0 = big
                .roots(&fac_big[i], seed)
                .into_iter()
                .next()
                .ok_or_else(|| Error::Internal("factor without roots in splitting level".into()))?
                .0;
            let xs = divpoly::multiples_x(&big, &f_big, &rhs_big, &x0, d);
            let mut kernel = l.poly_one();
            for j in 0..factors.len() {
                if xs.iter().any(|x| big.is_zero(&big.poly_eval(&fac_big[j], x))) {
                    if used[j] {
                        return Err(Error::Internal("division polynomial factor shared by two subgroups".into()));
                    }
                    used[j] = true;
                    kernel = l.poly_mul(&kernel, &factors[j]);
                }
            }
            if kernel.deg() != d {
                return Err(Error::Internal(format!("subgroup kernel of degree {} instead of {d}", kernel.deg())));
            }
            out.push(CyclicSubgroup { order: n, kernel });
        }
    }
    if out.len() as u64 != n + 1 {
        return Err(Error::Internal(format!("found {} subgroups of order {n}, expected {}", out.len(), n + 1)));
    }
    out.sort_by(|a, b| a.cmp_kernel(b));
    Ok(out)
}

fn lcm(a: usize, b: usize) -> usize {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// `sum c_k s^(d-k) X^k`: the kernel polynomial after the coordinate change `x -> s x`.
pub fn scale_kernel(level: &Level, h: &FPoly, s: &Fe) -> FPoly {
    let d = h.deg();
    let mut out = vec![level.zero(); d + 1];
    let mut pw = level.one();
    for k in (0..=d).rev() {
        out[k] = level.mul(&h.0[k], &pw);
        pw = level.mul(&pw, s);
    }
    level.poly_trim(out)
}

/// The multipliers `u^2` of the automorphisms `x -> u^2 x` of a curve with the
/// given j-invariant, modulo `-1`.
pub fn automorphism_scalars(level: &Level, j: &Fe, seed: u64) -> Vec<Fe> {
    if level.is_zero(j) {
        let mut r: Vec<Fe> = level.roots(&level.poly_from_u64(&[1, 1, 1]), seed).into_iter().map(|(z, _)| z).collect();
        r.insert(0, level.one());
        r
    } else if *j == level.from_u64(1728) {
        vec![level.one(), level.from_i64(-1)]
    } else {
        vec![level.one()]
    }
}

/// `|Aut(E)|`, or `|Aut(E, C)|` when a subgroup is given.
pub fn automorphism_count(curve: &Curve, c: Option<&CyclicSubgroup>) -> Result<usize> {
    let l = curve.level();
    let scalars = automorphism_scalars(l, &curve.j_invariant(), 0x5eed);
    if l.is_zero(&curve.j_invariant()) && scalars.len() != 3 {
        return Err(Error::Internal("cube roots of unity missing from the curve's level".into()));
    }
    Ok(match c {
        None => 2 * scalars.len(),
        Some(c) => 2 * scalars.iter().filter(|u| scale_kernel(l, &c.kernel, u) == c.kernel).count(),
    })
}

/// Least kernel polynomial in the automorphism orbit of `h` on the canonical
/// model of `j`, and the number of automorphisms modulo `-1` fixing it.
pub fn canonicalize(level: &Level, j: &Fe, h: &FPoly, seed: u64) -> (FPoly, usize) {
    let orbit: Vec<FPoly> = automorphism_scalars(level, j, seed).iter().map(|u| scale_kernel(level, h, u)).collect();
    let stab = orbit.iter().filter(|g| *g == h).count();
    let least = orbit.into_iter().min_by(|a, b| a.canonical_cmp(b)).expect("orbit is nonempty");
    (least, stab)
}

/// Moves a subgroup on an arbitrary curve to the canonical model of its
/// j-invariant and canonicalizes it. Returns `(j, kernel, stabilizer size)`.
pub fn transport_to_canonical(curve: &Curve, c: &CyclicSubgroup, seed: u64) -> Result<(Fe, FPoly, usize)> {
    let l = curve.level();
    let j = curve.j_invariant();
    let canon = Curve::from_j(curve.level().clone(), &j);
    // Isomorphism (x, y) -> (u^2 x, u^3 y) with s = u^2: a_c = s^2 a, b_c = s^3 b.
    let s = if l.is_zero(&j) {
        let c3 = l.div(&canon.b, &curve.b);
        let cube = l.poly_trim(vec![l.neg(&c3), l.zero(), l.zero(), l.one()]);
        l.roots(&cube, seed).into_iter().next().map(|(r, _)| r)
    } else if l.is_zero(&curve.b) {
        l.sqrt(&l.div(&canon.a, &curve.a))
    } else {
        Some(l.div(&l.mul(&canon.b, &curve.a), &l.mul(&curve.b, &canon.a)))
    }
    .ok_or_else(|| Error::Internal("no isomorphism to the canonical model over the curve's level".into()))?;
    let moved = scale_kernel(l, &c.kernel, &s);
    let (kernel, stab) = canonicalize(l, &j, &moved, seed);
    Ok((j, kernel, stab))
}

#[cfg(test)]
mod tests;
