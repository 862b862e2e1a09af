//! Finite fields `F_{p^k}` presented by lowest monic irreducible moduli, with
//! compatible embeddings between levels and univariate polynomial
//! factorization (squarefree, distinct-degree and Cantor–Zassenhaus splitting).

mod factor;
mod level;
mod poly;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use level::{Fe, Level};
pub use poly::FPoly;

use crate::error::{Error, Result};

/// Seed for the equal-degree splitting stream used by default.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// A family of extensions of `F_p` indexed by degree, with embeddings `F_{p^a} -> F_{p^b}` for `a | b`.
#[derive(Clone, Debug)]
pub struct FieldTower {
    p: u64,
    cap: Option<usize>,
    seed: u64,
    levels: BTreeMap<usize, Arc<Level>>,
    // Image of the generator of level `a` inside level `b`.
    embeddings: BTreeMap<(usize, usize), Fe>,
}

impl FieldTower {
    pub fn new(p: u64) -> Self {
        let mut levels = BTreeMap::new();
        levels.insert(1, Arc::new(Level::prime(p)));
        FieldTower { p, cap: None, seed: DEFAULT_SEED, levels, embeddings: BTreeMap::new() }
    }

    /// Tower whose levels may not exceed degree `cap`.
    pub fn with_cap(p: u64, cap: usize) -> Self {
        FieldTower { cap: Some(cap), ..Self::new(p) }
    }

    /// The degree cap `2q(q-1)` for the largest auxiliary prime `q`.
    pub fn cap_for(q: u64) -> usize {
        (2 * q * (q - 1)) as usize
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    pub fn prime_field(&self) -> Arc<Level> {
        self.levels[&1].clone()
    }

    pub fn level(&self, k: usize) -> Option<Arc<Level>> {
        self.levels.get(&k).cloned()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.levels.keys().copied().collect()
    }

    /// `(degree, modulus)` pairs of every built level, for cache headers.
    pub fn moduli(&self) -> Vec<(usize, Vec<u64>)> {
        self.levels.iter().map(|(&k, l)| (k, l.modulus().to_vec())).collect()
    }

    /// Returns the level of degree `k`, building it (and its embeddings) if needed.
    pub fn build_level(&mut self, k: usize) -> Result<Arc<Level>> {
        assert!(k >= 1, "level degree must be positive");
        if let Some(l) = self.levels.get(&k) {
            return Ok(l.clone());
        }
        if let Some(cap) = self.cap {
            if k > cap {
                return Err(Error::DegreeCapExceeded { requested: k, cap });
            }
        }
        let level = Arc::new(Level::new(self.p, Level::lex_least_irreducible(self.p, k)));
        let divisors: Vec<usize> = self.levels.keys().copied().filter(|&a| a > 1 && k.is_multiple_of(a)).collect();
        for a in divisors {
            let src = self.levels[&a].clone();
            let m = level.poly_from_u64(src.modulus());
            let roots = level.roots(&m, self.seed);
            let chosen = roots
                .into_iter()
                .map(|(r, _)| r)
                .find(|r| self.compatible(&src, &level, a, k, r))
                .ok_or_else(|| Error::Internal(format!("no compatible embedding of degree {a} into {k}")))?;
            self.embeddings.insert((a, k), chosen);
        }
        self.levels.insert(k, level.clone());
        Ok(level)
    }

    fn compatible(&self, src: &Level, dst: &Level, a: usize, k: usize, r: &Fe) -> bool {
        self.embeddings.iter().filter(|((s, t), _)| *t == a && self.embeddings.contains_key(&(*s, k))).all(
            |((s, _), img_in_a)| {
                let via = embed_with(src, dst, r, img_in_a);
                via == self.embeddings[&(*s, k)]
            },
        )
    }

    /// Embeds an element of level `a` into level `b`.
    pub fn embed(&self, a: usize, b: usize, x: &Fe) -> Result<Fe> {
        let dst = self.levels.get(&b).ok_or_else(|| Error::Invalid(format!("level {b} not built")))?;
        if a == b {
            return Ok(x.clone());
        }
        if a == 1 {
            return Ok(dst.from_u64(x.0[0]));
        }
        let src = self.levels.get(&a).ok_or_else(|| Error::Invalid(format!("level {a} not built")))?;
        let r = self
            .embeddings
            .get(&(a, b))
            .ok_or_else(|| Error::Invalid(format!("no embedding from level {a} into level {b}")))?;
        Ok(embed_with(src, dst, r, x))
    }

    pub fn embed_poly(&self, a: usize, b: usize, f: &FPoly) -> Result<FPoly> {
        Ok(FPoly(f.0.iter().map(|c| self.embed(a, b, c)).collect::<Result<_>>()?))
    }

    /// Factorization of `f` over level `k`.
    pub fn factor_squarefree(&self, k: usize, f: &FPoly) -> Result<Vec<(FPoly, usize)>> {
        let level = self.levels.get(&k).ok_or_else(|| Error::Invalid(format!("level {k} not built")))?;
        Ok(level.factor_squarefree(f, self.seed))
    }

    /// Roots in level `b` of a polynomial with coefficients in level `a`.
    pub fn roots_in_level(&mut self, f: &FPoly, a: usize, b: usize) -> Result<Vec<(Fe, usize)>> {
        if !b.is_multiple_of(a) {
            return Err(Error::Invalid(format!("level {a} does not embed in level {b}")));
        }
        let dst = self.build_level(b)?;
        let g = self.embed_poly(a, b, f)?;
        Ok(dst.roots(&g, self.seed))
    }

    /// The `p`-power Frobenius on level `k`.
    pub fn frobenius(&self, k: usize, x: &Fe) -> Result<Fe> {
        let level = self.levels.get(&k).ok_or_else(|| Error::Invalid(format!("level {k} not built")))?;
        Ok(level.frobenius(x))
    }
}

fn embed_with(src: &Level, dst: &Level, r: &Fe, x: &Fe) -> Fe {
    debug_assert_eq!(x.0.len(), src.degree());
    let mut acc = dst.zero();
    for c in x.0.iter().rev() {
        acc = dst.add(&dst.mul(&acc, r), &dst.from_u64(*c));
    }
    acc
}
