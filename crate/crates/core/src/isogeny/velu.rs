use crate::error::{Error, Result};
use crate::galois::{FPoly, Fe};

use super::{Curve, CyclicSubgroup};

/// The x-coordinate map `X = num / den` of an isogeny.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XMap {
    pub num: FPoly,
    pub den: FPoly,
}

impl XMap {
    pub fn identity(curve: &Curve) -> Self {
        let l = curve.level();
        XMap { num: l.poly_x(), den: l.poly_one() }
    }

    /// Degree of the map as a rational function.
    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    pub fn eval(&self, curve: &Curve, x: &Fe) -> Option<Fe> {
        let l = curve.level();
        let d = l.poly_eval(&self.den, x);
        (!l.is_zero(&d)).then(|| l.div(&l.poly_eval(&self.num, x), &d))
    }
}

/// Vélu's quotient of `curve` by a cyclic subgroup of prime order, with the
/// normalized x-coordinate map.
pub fn velu(curve: &Curve, c: &CyclicSubgroup) -> Result<(Curve, XMap)> {
    let l = curve.level().clone();
    let (a, b) = (&curve.a, &curve.b);
    let h = &c.kernel;
    if c.order == 2 {
        let x0 = l.neg(&h.0[0]);
        let t = l.add(&l.scale(&l.sqr(&x0), 3), a);
        let w = l.mul(&x0, &t);
        let image = Curve::new(l.clone(), l.sub(a, &l.scale(&t, 5)), l.sub(b, &l.scale(&w, 7)))?;
        // X = x + t / (x - x0)
        let den = l.poly_linear(&x0);
        let num = l.poly_add(&l.poly_mul(&l.poly_x(), &den), &l.poly_const(t));
        return Ok((image, XMap { num, den }));
    }
    let d = h.deg();
    if 2 * d + 1 != c.order as usize {
        return Err(Error::Invalid(format!("kernel polynomial of degree {d} for order {}", c.order)));
    }
    let coeff = |k: usize| -> Fe { if k <= d { h.0[k].clone() } else { l.zero() } };
    let top = |i: usize| -> Fe { if i <= d { coeff(d - i) } else { l.zero() } };
    // Power sums of the roots from the elementary symmetric functions.
    let s1 = l.neg(&top(1));
    let s2 = top(2);
    let s3 = l.neg(&top(3));
    let p2 = l.sub(&l.sqr(&s1), &l.scale(&s2, 2));
    let p3 = l.add(&l.sub(&l.mul(&l.sqr(&s1), &s1), &l.scale(&l.mul(&s1, &s2), 3)), &l.scale(&s3, 3));
    let du = d as u64;
    let t = l.add(&l.scale(&p2, 6), &l.scale(a, 2 * du));
    let w = l.add(&l.add(&l.scale(&p3, 10), &l.scale(&l.mul(a, &s1), 6)), &l.scale(b, 4 * du));
    let image = Curve::new(l.clone(), l.sub(a, &l.scale(&t, 5)), l.sub(b, &l.scale(&w, 7)))?;

    // X = [(n x - 2 s1) h^2 - 2 f' h' h - 4 f (h'' h - h'^2)] / h^2
    let f = curve.rhs();
    let df = l.poly_derivative(&f);
    let dh = l.poly_derivative(h);
    let ddh = l.poly_derivative(&dh);
    let h2 = l.poly_sqr(h);
    let lin = l.poly_trim(vec![l.neg(&l.scale(&s1, 2)), l.from_u64(c.order)]);
    let mut num = l.poly_mul(&lin, &h2);
    num = l.poly_sub(&num, &l.poly_scale_u64(&l.poly_mul(&l.poly_mul(&df, &dh), h), 2));
    let inner = l.poly_sub(&l.poly_mul(&ddh, h), &l.poly_sqr(&dh));
    num = l.poly_sub(&num, &l.poly_scale_u64(&l.poly_mul(&f, &inner), 4));
    Ok((image, XMap { num, den: h2 }))
}

/// Image of a subgroup under an isogeny of coprime degree.
///
/// The image kernel polynomial is the characteristic polynomial of `X(x)`
/// acting on `F[x]/(h_C)`, whose roots are the images of the roots of `h_C`.
pub fn push_subgroup(xmap: &XMap, c: &CyclicSubgroup, target: &Curve) -> Result<CyclicSubgroup> {
    let l = target.level();
    let m = &c.kernel;
    let inv = l
        .poly_inv_mod(&xmap.den, m)
        .ok_or_else(|| Error::Invalid("subgroup meets the isogeny kernel".into()))?;
    let theta = l.poly_mulmod(&l.poly_rem(&xmap.num, m), &inv, m);
    let kernel = l.poly_charpoly_mod(&theta, m);
    Ok(CyclicSubgroup { order: c.order, kernel })
}
