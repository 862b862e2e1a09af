use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::level::{Fe, Level};
use super::poly::FPoly;
use crate::exactlin::prime_factors;

impl Level {
    /// Number of elements as a big integer raised to `e`.
    fn order_pow(&self, e: usize) -> BigUint {
        BigUint::from(self.p()).pow((self.degree() * e) as u32)
    }

    /// `x^(Q^e) mod f` where `Q` is the order of this level.
    fn x_frob_pow(&self, f: &FPoly, e: usize) -> FPoly {
        let q = self.order();
        let mut h = self.poly_rem(&self.poly_x(), f);
        for _ in 0..e {
            h = self.poly_powmod(&h, &q, f);
        }
        h
    }

    /// The unique `p`-th root of an element.
    pub fn pth_root(&self, a: &Fe) -> Fe {
        let e = BigUint::from(self.p()).pow(self.degree() as u32 - 1);
        self.pow(a, &e)
    }

    /// Rabin irreducibility test over this level.
    pub fn is_irreducible(&self, f: &FPoly) -> bool {
        let Some(n) = f.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.poly_monic(f);
        let x = self.poly_x();
        let q = self.order();
        // Powers x^(Q^i) for i = 1..n, computed once.
        let mut pows = Vec::with_capacity(n + 1);
        let mut h = self.poly_rem(&x, &f);
        pows.push(h.clone());
        for _ in 0..n {
            h = self.poly_powmod(&h, &q, &f);
            pows.push(h.clone());
        }
        if !self.poly_sub(&pows[n], &x).is_zero() {
            return false;
        }
        for r in prime_factors(&(n as u64).into()) {
            let k = n / r as usize;
            let g = self.poly_gcd(&self.poly_sub(&pows[k], &x), &f);
            if g.deg() != 0 {
                return false;
            }
        }
        true
    }

    /// Squarefree decomposition: monic pairs `(g, m)` with `f = c * prod g^m`.
    pub fn squarefree_decomposition(&self, f: &FPoly) -> Vec<(FPoly, usize)> {
        let mut out = Vec::new();
        self.sqf_rec(&self.poly_monic(f), 1, &mut out);
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.canonical_cmp(&b.0)));
        out
    }

    fn sqf_rec(&self, f: &FPoly, mult: usize, out: &mut Vec<(FPoly, usize)>) {
        if f.deg() == 0 {
            return;
        }
        let p = self.p() as usize;
        let df = self.poly_derivative(f);
        if df.is_zero() {
            // f is a p-th power.
            let root = self.poly_pth_root(f);
            self.sqf_rec(&root, mult * p, out);
            return;
        }
        let mut c = self.poly_gcd(f, &df);
        let mut w = self.poly_div_exact(f, &c);
        let mut i = 1;
        while w.deg() > 0 {
            let y = self.poly_gcd(&w, &c);
            let z = self.poly_div_exact(&w, &y);
            if z.deg() > 0 {
                push_factor(out, z, i * mult);
            }
            w = y;
            c = self.poly_div_exact(&c, &w);
            i += 1;
        }
        if c.deg() > 0 {
            let root = self.poly_pth_root(&c);
            self.sqf_rec(&root, mult * p, out);
        }
    }

    /// For a polynomial in `x^p`, the polynomial whose `p`-th power it is.
    fn poly_pth_root(&self, f: &FPoly) -> FPoly {
        let p = self.p() as usize;
        let coeffs = f.0.iter().step_by(p).map(|c| self.pth_root(c)).collect();
        self.poly_trim(coeffs)
    }

    /// Distinct-degree split of a monic squarefree polynomial: `(product of degree-d factors, d)`.
    pub fn distinct_degree(&self, f: &FPoly) -> Vec<(FPoly, usize)> {
        let mut out = Vec::new();
        let mut rest = self.poly_monic(f);
        let x = self.poly_x();
        let q = self.order();
        let mut h = self.poly_rem(&x, &rest);
        let mut d = 0;
        while rest.deg() > 0 {
            d += 1;
            if 2 * d > rest.deg() {
                out.push((rest.clone(), rest.deg()));
                break;
            }
            h = self.poly_powmod(&h, &q, &rest);
            let g = self.poly_gcd(&self.poly_sub(&h, &x), &rest);
            if g.deg() > 0 {
                rest = self.poly_div_exact(&rest, &g);
                h = self.poly_rem(&h, &rest);
                out.push((g, d));
            }
        }
        out
    }

    /// Splits a monic squarefree product of irreducibles of degree `d`.
    pub fn equal_degree(&self, f: &FPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FPoly> {
        let n = f.deg();
        if n == d {
            return vec![f.clone()];
        }
        loop {
            let a = self.poly_trim((0..n).map(|_| self.random(rng)).collect());
            if a.degree().is_none_or(|k| k == 0) {
                continue;
            }
            let b = if self.p() == 2 {
                // Absolute trace to F_2 of the residue ring.
                let steps = self.degree() * d;
                let mut t = self.poly_rem(&a, f);
                let mut acc = t.clone();
                for _ in 1..steps {
                    t = self.poly_mulmod(&t, &t, f);
                    acc = self.poly_add(&acc, &t);
                }
                acc
            } else {
                let e = (self.order_pow(d) - 1u32) / 2u32;
                let t = self.poly_powmod(&a, &e, f);
                self.poly_sub(&t, &self.poly_one())
            };
            let g = self.poly_gcd(&b, f);
            if g.deg() > 0 && g.deg() < n {
                let h = self.poly_div_exact(f, &g);
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&h, d, rng));
                return out;
            }
        }
    }

    /// Full factorization into monic irreducibles with multiplicities, canonically sorted.
    ///
    /// The seed drives the equal-degree splitting; the output does not depend on it.
    pub fn factor_squarefree(&self, f: &FPoly, seed: u64) -> Vec<(FPoly, usize)> {
        assert!(!f.is_zero(), "factoring the zero polynomial");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (g, m) in self.squarefree_decomposition(f) {
            for (h, d) in self.distinct_degree(&g) {
                for irr in self.equal_degree(&h, d, &mut rng) {
                    out.push((irr, m));
                }
            }
        }
        out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
        out
    }

    /// Roots in this level with multiplicities, sorted by element order.
    pub fn roots(&self, f: &FPoly, seed: u64) -> Vec<(Fe, usize)> {
        if f.degree().is_none_or(|d| d == 0) {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (g, m) in self.squarefree_decomposition(f) {
            // Product of the linear factors of g.
            let x = self.poly_x();
            let h = self.x_frob_pow(&g, 1);
            let lin = self.poly_gcd(&self.poly_sub(&h, &x), &g);
            if lin.deg() == 0 {
                continue;
            }
            for l in self.equal_degree(&lin, 1, &mut rng) {
                out.push((self.neg(&l.0[0]), m));
            }
        }
        out.sort();
        out
    }

    /// Lowest monic irreducible polynomial of degree `k` over `F_p`, by index order.
    pub fn lex_least_irreducible(p: u64, k: usize) -> Vec<u64> {
        let base = Level::prime(p);
        let mut idx: u128 = 0;
        loop {
            let mut coeffs = Vec::with_capacity(k + 1);
            let mut n = idx;
            for _ in 0..k {
                coeffs.push((n % p as u128) as u64);
                n /= p as u128;
            }
            coeffs.push(1);
            let f = base.poly_from_u64(&coeffs);
            if base.is_irreducible(&f) {
                return coeffs;
            }
            idx += 1;
        }
    }
}

fn push_factor(out: &mut Vec<(FPoly, usize)>, g: FPoly, m: usize) {
    if let Some(slot) = out.iter_mut().find(|(h, _)| *h == g) {
        slot.1 += m;
    } else {
        out.push((g, m));
    }
}
