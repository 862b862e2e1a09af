use std::cmp::Ordering;

use num_bigint::BigUint;

use super::level::{Fe, Level};

/// Univariate polynomial over a level, lowest coefficient first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FPoly(pub Vec<Fe>);

impl FPoly {
    pub fn zero() -> Self {
        FPoly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> Option<&Fe> {
        self.0.get(i)
    }

    pub fn leading(&self) -> &Fe {
        self.0.last().expect("leading coefficient of zero polynomial")
    }

    /// Canonical order: degree first, then coefficients from the top down.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl Level {
    pub fn poly_trim(&self, mut v: Vec<Fe>) -> FPoly {
        while v.last().is_some_and(|c| self.is_zero(c)) {
            v.pop();
        }
        FPoly(v)
    }

    pub fn poly_const(&self, c: Fe) -> FPoly {
        self.poly_trim(vec![c])
    }

    pub fn poly_one(&self) -> FPoly {
        FPoly(vec![self.one()])
    }

    /// The polynomial `x`.
    pub fn poly_x(&self) -> FPoly {
        FPoly(vec![self.zero(), self.one()])
    }

    /// `x - r`.
    pub fn poly_linear(&self, r: &Fe) -> FPoly {
        FPoly(vec![self.neg(r), self.one()])
    }

    /// Monic polynomial with the given roots.
    pub fn poly_from_roots(&self, roots: &[Fe]) -> FPoly {
        roots.iter().fold(self.poly_one(), |acc, r| self.poly_mul(&acc, &self.poly_linear(r)))
    }

    pub fn poly_from_u64(&self, c: &[u64]) -> FPoly {
        self.poly_trim(c.iter().map(|&x| self.from_u64(x)).collect())
    }

    pub fn poly_from_i64(&self, c: &[i64]) -> FPoly {
        self.poly_trim(c.iter().map(|&x| self.from_i64(x)).collect())
    }

    pub fn poly_add(&self, a: &FPoly, b: &FPoly) -> FPoly {
        let n = a.0.len().max(b.0.len());
        let z = self.zero();
        self.poly_trim(
            (0..n).map(|i| self.add(a.0.get(i).unwrap_or(&z), b.0.get(i).unwrap_or(&z))).collect(),
        )
    }

    pub fn poly_sub(&self, a: &FPoly, b: &FPoly) -> FPoly {
        let n = a.0.len().max(b.0.len());
        let z = self.zero();
        self.poly_trim(
            (0..n).map(|i| self.sub(a.0.get(i).unwrap_or(&z), b.0.get(i).unwrap_or(&z))).collect(),
        )
    }

    pub fn poly_neg(&self, a: &FPoly) -> FPoly {
        FPoly(a.0.iter().map(|c| self.neg(c)).collect())
    }

    pub fn poly_scale(&self, a: &FPoly, c: &Fe) -> FPoly {
        self.poly_trim(a.0.iter().map(|x| self.mul(x, c)).collect())
    }

    pub fn poly_scale_u64(&self, a: &FPoly, c: u64) -> FPoly {
        self.poly_trim(a.0.iter().map(|x| self.scale(x, c)).collect())
    }

    pub fn poly_mul(&self, a: &FPoly, b: &FPoly) -> FPoly {
        if a.is_zero() || b.is_zero() {
            return FPoly::zero();
        }
        let mut out = vec![self.zero(); a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if !self.is_zero(y) {
                    out[i + j] = self.add(&out[i + j], &self.mul(x, y));
                }
            }
        }
        self.poly_trim(out)
    }

    pub fn poly_sqr(&self, a: &FPoly) -> FPoly {
        self.poly_mul(a, a)
    }

    pub fn poly_pow_u64(&self, a: &FPoly, e: u64) -> FPoly {
        let mut r = self.poly_one();
        for i in (0..64 - e.leading_zeros()).rev() {
            r = self.poly_sqr(&r);
            if (e >> i) & 1 == 1 {
                r = self.poly_mul(&r, a);
            }
        }
        r
    }

    pub fn poly_divrem(&self, a: &FPoly, b: &FPoly) -> (FPoly, FPoly) {
        assert!(!b.is_zero(), "polynomial division by zero");
        if a.0.len() < b.0.len() {
            return (FPoly::zero(), a.clone());
        }
        let db = b.deg();
        let inv = self.inv(b.leading());
        let mut r = a.0.clone();
        let mut q = vec![self.zero(); a.0.len() - db];
        for top in (db..a.0.len()).rev() {
            let c = self.mul(&r[top], &inv);
            if self.is_zero(&c) {
                continue;
            }
            let shift = top - db;
            for (j, bj) in b.0.iter().enumerate() {
                if !self.is_zero(bj) {
                    r[shift + j] = self.sub(&r[shift + j], &self.mul(&c, bj));
                }
            }
            q[shift] = c;
        }
        r.truncate(db);
        (self.poly_trim(q), self.poly_trim(r))
    }

    pub fn poly_rem(&self, a: &FPoly, b: &FPoly) -> FPoly {
        self.poly_divrem(a, b).1
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn poly_div_exact(&self, a: &FPoly, b: &FPoly) -> FPoly {
        let (q, r) = self.poly_divrem(a, b);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn poly_monic(&self, a: &FPoly) -> FPoly {
        if a.is_zero() {
            return a.clone();
        }
        let inv = self.inv(a.leading());
        self.poly_scale(a, &inv)
    }

    /// Monic greatest common divisor.
    pub fn poly_gcd(&self, a: &FPoly, b: &FPoly) -> FPoly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = self.poly_rem(&x, &y);
            x = std::mem::replace(&mut y, r);
        }
        self.poly_monic(&x)
    }

    /// Returns `(g, s)` with `g = gcd(a, m)` monic and `s*a = g (mod m)`.
    pub fn poly_xgcd_mod(&self, a: &FPoly, m: &FPoly) -> (FPoly, FPoly) {
        let mut r0 = m.clone();
        let mut r1 = self.poly_rem(a, m);
        let mut s0 = FPoly::zero();
        let mut s1 = self.poly_one();
        while !r1.is_zero() {
            let (q, r) = self.poly_divrem(&r0, &r1);
            let s2 = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.is_zero() {
            return (r0, s0);
        }
        let inv = self.inv(r0.leading());
        (self.poly_scale(&r0, &inv), self.poly_scale(&s0, &inv))
    }

    /// Inverse of `a` modulo `m`, if it exists.
    pub fn poly_inv_mod(&self, a: &FPoly, m: &FPoly) -> Option<FPoly> {
        let (g, s) = self.poly_xgcd_mod(a, m);
        if g.degree() == Some(0) {
            Some(self.poly_rem(&s, m))
        } else {
            None
        }
    }

    pub fn poly_mulmod(&self, a: &FPoly, b: &FPoly, m: &FPoly) -> FPoly {
        self.poly_rem(&self.poly_mul(a, b), m)
    }

    pub fn poly_powmod(&self, a: &FPoly, e: &BigUint, m: &FPoly) -> FPoly {
        let base = self.poly_rem(a, m);
        let mut r = self.poly_rem(&self.poly_one(), m);
        for i in (0..e.bits()).rev() {
            r = self.poly_mulmod(&r, &r, m);
            if e.bit(i) {
                r = self.poly_mulmod(&r, &base, m);
            }
        }
        r
    }

    pub fn poly_derivative(&self, a: &FPoly) -> FPoly {
        if a.0.len() <= 1 {
            return FPoly::zero();
        }
        self.poly_trim(a.0.iter().enumerate().skip(1).map(|(i, c)| self.scale(c, i as u64)).collect())
    }

    pub fn poly_eval(&self, a: &FPoly, x: &Fe) -> Fe {
        a.0.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    /// Coefficientwise Frobenius.
    pub fn poly_frobenius(&self, a: &FPoly) -> FPoly {
        FPoly(a.0.iter().map(|c| self.frobenius(c)).collect())
    }

    /// `a(c * x)`.
    pub fn poly_rescale(&self, a: &FPoly, c: &Fe) -> FPoly {
        let mut pw = self.one();
        let mut out = Vec::with_capacity(a.0.len());
        for x in &a.0 {
            out.push(self.mul(x, &pw));
            pw = self.mul(&pw, c);
        }
        self.poly_trim(out)
    }

    /// Characteristic polynomial of multiplication by `theta` on `F[x]/(m)`.
    pub fn poly_charpoly_mod(&self, theta: &FPoly, m: &FPoly) -> FPoly {
        let d = m.deg();
        let mut rows = Vec::with_capacity(d);
        let mut basis = self.poly_one();
        for _ in 0..d {
            let img = self.poly_mulmod(&basis, theta, m);
            let mut row = img.0.clone();
            row.resize(d, self.zero());
            rows.push(row);
            basis = self.poly_mul(&basis, &self.poly_x());
        }
        self.charpoly_matrix(rows)
    }

    /// Characteristic polynomial `det(xI - A)` via Hessenberg reduction.
    pub fn charpoly_matrix(&self, mut a: Vec<Vec<Fe>>) -> FPoly {
        let n = a.len();
        // Reduce to upper Hessenberg form by similarity transforms.
        for m in 1..n.saturating_sub(1) {
            let Some(piv) = (m..n).find(|&i| !self.is_zero(&a[i][m - 1])) else { continue };
            if piv != m {
                a.swap(piv, m);
                for row in a.iter_mut() {
                    row.swap(piv, m);
                }
            }
            let inv = self.inv(&a[m][m - 1]);
            for i in m + 1..n {
                let u = self.mul(&a[i][m - 1], &inv);
                if self.is_zero(&u) {
                    continue;
                }
                let (top, bottom) = a.split_at_mut(i);
                for (x, y) in bottom[0].iter_mut().zip(&top[m]) {
                    let v = self.mul(&u, y);
                    *x = self.sub(x, &v);
                }
                for row in a.iter_mut() {
                    let v = self.mul(&u, &row[i]);
                    row[m] = self.add(&row[m], &v);
                }
            }
        }
        // Recurrence on leading principal submatrices.
        let mut ps: Vec<FPoly> = vec![self.poly_one()];
        for k in 0..n {
            let xk = self.poly_trim(vec![self.neg(&a[k][k]), self.one()]);
            let mut pk = self.poly_mul(&xk, &ps[k]);
            let mut prod = self.one();
            for i in (0..k).rev() {
                prod = self.mul(&prod, &a[i + 1][i]);
                let coef = self.mul(&prod, &a[i][k]);
                if !self.is_zero(&coef) {
                    pk = self.poly_sub(&pk, &self.poly_scale(&ps[i], &coef));
                }
            }
            ps.push(pk);
        }
        ps.pop().unwrap()
    }

    pub fn poly_format(&self, a: &FPoly) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let terms: Vec<String> = a
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !self.is_zero(c))
            .map(|(k, c)| {
                let cs = self.format(c);
                let cs = if cs.contains('+') { format!("({cs})") } else { cs };
                match k {
                    0 => cs,
                    1 if self.is_one(c) => "x".to_string(),
                    1 => format!("{cs}*x"),
                    _ if self.is_one(c) => format!("x^{k}"),
                    _ => format!("{cs}*x^{k}"),
                }
            })
            .collect();
        terms.join(" + ")
    }
}
