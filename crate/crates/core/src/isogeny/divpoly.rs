use crate::galois::{FPoly, Fe, Level};

use super::Curve;

/// The x-only division polynomials `f_0, ..., f_n` of a curve.
///
/// `f_m = psi_m` for odd `m` and `f_m = psi_m / (2y)` for even `m`, so every
/// `f_m` is a polynomial in `x` alone. Odd `f_m` has degree `(m^2 - 1)/2` and
/// leading coefficient `m`.
pub fn division_polynomials(curve: &Curve, n: usize) -> Vec<FPoly> {
    let l = curve.level();
    let (a, b) = (&curve.a, &curve.b);
    let a2 = l.sqr(a);
    let mut f: Vec<FPoly> = Vec::with_capacity(n.max(4) + 1);
    f.push(FPoly::zero());
    f.push(l.poly_one());
    f.push(l.poly_one());
    // 3x^4 + 6ax^2 + 12bx - a^2
    f.push(l.poly_trim(vec![l.neg(&a2), l.scale(b, 12), l.scale(a, 6), l.zero(), l.from_u64(3)]));
    // 2(x^6 + 5ax^4 + 20bx^3 - 5a^2x^2 - 4abx - 8b^2 - a^3)
    let a3 = l.mul(&a2, a);
    let c0 = l.neg(&l.add(&l.scale(&l.sqr(b), 8), &a3));
    let g4 = l.poly_trim(vec![
        c0,
        l.neg(&l.scale(&l.mul(a, b), 4)),
        l.neg(&l.scale(&a2, 5)),
        l.scale(b, 20),
        l.scale(a, 5),
        l.zero(),
        l.one(),
    ]);
    f.push(l.poly_scale_u64(&g4, 2));
    let rhs = curve.rhs();
    let ff = l.poly_scale_u64(&l.poly_sqr(&rhs), 16);
    for k in 5..=n {
        let m = k / 2;
        let next = if k % 2 == 1 {
            let left = l.poly_mul(&f[m + 2], &l.poly_pow_u64(&f[m], 3));
            let right = l.poly_mul(&f[m - 1], &l.poly_pow_u64(&f[m + 1], 3));
            if m % 2 == 0 {
                l.poly_sub(&l.poly_mul(&ff, &left), &right)
            } else {
                l.poly_sub(&left, &l.poly_mul(&ff, &right))
            }
        } else {
            let t1 = l.poly_mul(&f[m + 2], &l.poly_sqr(&f[m - 1]));
            let t2 = l.poly_mul(&f[m - 2], &l.poly_sqr(&f[m + 1]));
            l.poly_mul(&f[m], &l.poly_sub(&t1, &t2))
        };
        f.push(next);
    }
    f.truncate(n + 1);
    f
}

/// x-coordinates of `P, 2P, ..., dP` given `x(P)`, using division polynomials
/// `f_0, ..., f_{d+1}` already moved into the level of `x`.
pub(crate) fn multiples_x(level: &Level, f: &[FPoly], rhs: &FPoly, x: &Fe, d: usize) -> Vec<Fe> {
    let vals: Vec<Fe> = f.iter().take(d + 2).map(|g| level.poly_eval(g, x)).collect();
    let fx = level.poly_eval(rhs, x);
    (1..=d)
        .map(|m| {
            let num = level.mul(&vals[m - 1], &vals[m + 1]);
            let den = level.sqr(&vals[m]);
            let corr = if m % 2 == 1 {
                level.div(&level.scale(&level.mul(&fx, &num), 4), &den)
            } else {
                level.div(&num, &level.scale(&level.mul(&fx, &den), 4))
            };
            level.sub(x, &corr)
        })
        .collect()
}
