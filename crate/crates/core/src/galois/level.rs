use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use rand::Rng;

use crate::exactlin::modp::{inv_mod, mul_mod};

/// Element of a finite field `F_p[t]/(m(t))`, coefficients of `1, t, ..., t^(k-1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Fe(pub Vec<u64>);

impl Fe {
    /// Index `sum c_j p^j`; the ordering below agrees with it.
    pub fn index(&self, p: u64) -> u128 {
        self.0.iter().rev().fold(0u128, |acc, &c| acc * p as u128 + c as u128)
    }
}

impl Ord for Fe {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Fe {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The finite field with `p^k` elements, presented by a monic irreducible modulus over `F_p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Level {
    p: u64,
    modulus: Vec<u64>,
}

impl Level {
    /// Builds a level from a monic irreducible modulus (lowest coefficient first).
    pub fn new(p: u64, modulus: Vec<u64>) -> Self {
        assert!(modulus.len() >= 2 && *modulus.last().unwrap() == 1, "modulus must be monic of degree >= 1");
        Level { p, modulus }
    }

    /// The prime field, with modulus `t`.
    pub fn prime(p: u64) -> Self {
        Level { p, modulus: vec![0, 1] }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree() as u32)
    }

    pub fn zero(&self) -> Fe {
        Fe(vec![0; self.degree()])
    }

    pub fn one(&self) -> Fe {
        self.from_u64(1)
    }

    pub fn from_u64(&self, c: u64) -> Fe {
        let mut v = vec![0; self.degree()];
        v[0] = c % self.p;
        Fe(v)
    }

    pub fn from_i64(&self, c: i64) -> Fe {
        self.from_u64(c.rem_euclid(self.p as i64) as u64)
    }

    /// Element from coefficients of `1, t, t^2, ...`; extra coefficients are reduced.
    pub fn from_coeffs(&self, c: &[u64]) -> Fe {
        let mut acc = self.zero();
        let mut pw = self.one();
        let t = self.generator();
        for &x in c {
            acc = self.add(&acc, &self.scale(&pw, x));
            pw = self.mul(&pw, &t);
        }
        acc
    }

    /// The class of `t`.
    pub fn generator(&self) -> Fe {
        if self.degree() == 1 {
            Fe(vec![(self.p - self.modulus[0]) % self.p])
        } else {
            let mut v = vec![0; self.degree()];
            v[1] = 1;
            Fe(v)
        }
    }

    pub fn from_index(&self, mut idx: u128) -> Fe {
        let mut v = vec![0; self.degree()];
        for c in v.iter_mut() {
            *c = (idx % self.p as u128) as u64;
            idx /= self.p as u128;
        }
        Fe(v)
    }

    pub fn is_zero(&self, a: &Fe) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &Fe) -> bool {
        a.0[0] == 1 && a.0[1..].iter().all(|&c| c == 0)
    }

    /// Whether the element lies in the prime field.
    pub fn in_prime_field(&self, a: &Fe) -> bool {
        a.0[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Fe, b: &Fe) -> Fe {
        let p = self.p;
        Fe(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % p).collect())
    }

    pub fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        let p = self.p;
        Fe(a.0.iter().zip(&b.0).map(|(x, y)| (x + p - y) % p).collect())
    }

    pub fn neg(&self, a: &Fe) -> Fe {
        let p = self.p;
        Fe(a.0.iter().map(|x| (p - x) % p).collect())
    }

    pub fn scale(&self, a: &Fe, c: u64) -> Fe {
        let p = self.p;
        let c = c % p;
        Fe(a.0.iter().map(|&x| mul_mod(x, c, p)).collect())
    }

    pub fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        let p = self.p;
        let k = self.degree();
        if k == 1 {
            return Fe(vec![mul_mod(a.0[0], b.0[0], p)]);
        }
        let pp = p as u128;
        let mut acc = vec![0u128; 2 * k - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                acc[i + j] += x as u128 * y as u128;
            }
        }
        let mut r: Vec<u64> = acc.iter().map(|&x| (x % pp) as u64).collect();
        for top in (k..2 * k - 1).rev() {
            let c = r[top];
            if c == 0 {
                continue;
            }
            r[top] = 0;
            for j in 0..k {
                let m = self.modulus[j];
                if m != 0 {
                    let idx = top - k + j;
                    r[idx] = (r[idx] + p - mul_mod(c, m, p)) % p;
                }
            }
        }
        r.truncate(k);
        Fe(r)
    }

    pub fn sqr(&self, a: &Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &Fe, e: &BigUint) -> Fe {
        let mut r = self.one();
        for i in (0..e.bits()).rev() {
            r = self.sqr(&r);
            if e.bit(i) {
                r = self.mul(&r, a);
            }
        }
        r
    }

    pub fn pow_u64(&self, a: &Fe, e: u64) -> Fe {
        self.pow(a, &BigUint::from(e))
    }

    /// The p-power Frobenius automorphism.
    pub fn frobenius(&self, a: &Fe) -> Fe {
        self.pow_u64(a, self.p)
    }

    pub fn inv(&self, a: &Fe) -> Fe {
        assert!(!self.is_zero(a), "inverse of zero");
        if self.degree() == 1 {
            return Fe(vec![inv_mod(a.0[0], self.p)]);
        }
        // Extended Euclid in F_p[t] between a(t) and the modulus.
        let p = self.p;
        let mut r0 = self.modulus.clone();
        let mut r1 = trim(a.0.clone());
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (q, r) = fp_divrem(&r0, &r1, p);
            let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        assert_eq!(r0.len(), 1, "modulus not irreducible");
        let c = inv_mod(r0[0], p);
        let mut v: Vec<u64> = s0.iter().map(|&x| mul_mod(x, c, p)).collect();
        v.resize(self.degree(), 0);
        Fe(v)
    }

    pub fn div(&self, a: &Fe, b: &Fe) -> Fe {
        self.mul(a, &self.inv(b))
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> Fe {
        Fe((0..self.degree()).map(|_| rng.gen_range(0..self.p)).collect())
    }

    /// Square root if one exists in this level.
    pub fn sqrt(&self, a: &Fe) -> Option<Fe> {
        let f = crate::galois::FPoly(vec![self.neg(a), self.zero(), self.one()]);
        self.roots(&f, 0x5eed).into_iter().next().map(|(r, _)| r)
    }

    pub fn format(&self, a: &Fe) -> String {
        let mut terms = Vec::new();
        for (k, &c) in a.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            terms.push(match (k, c) {
                (0, _) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{c}t"),
                (_, 1) => format!("t^{k}"),
                _ => format!("{c}t^{k}"),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// Exhaustive list of elements, for small fields only.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        let n = self.order();
        let n: u128 = n.try_into().expect("field too large to enumerate");
        (0..n).map(move |i| self.from_index(i))
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.degree())
    }
}

pub(crate) fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub(crate) fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

pub(crate) fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = mul_mod(*r.last().unwrap(), inv, p);
        q[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - mul_mod(c, bj, p)) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}
