use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::galois::{FPoly, Fe, Level};

/// A classical modular polynomial `Phi_l(X, Y)`, symmetric in `X` and `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPolynomial {
    pub ell: u64,
    /// Coefficients of `X^i Y^j` for `i >= j`.
    coeffs: BTreeMap<(usize, usize), BigInt>,
}

impl ModularPolynomial {
    /// Parses the text format: a header `ell <l>`, then lines `<i> <j> <coeff>`.
    pub fn parse(text: &str, context: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::parse(context, "empty file"))?;
        let ell: u64 = header
            .strip_prefix("ell")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::parse(context, &format!("bad header {header:?}")))?;
        let mut coeffs: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::parse(context, &format!("bad line {line:?}"));
            if parts.len() != 3 {
                return Err(bad());
            }
            let i: usize = parts[0].parse().map_err(|_| bad())?;
            let j: usize = parts[1].parse().map_err(|_| bad())?;
            let c: BigInt = parts[2].parse().map_err(|_| bad())?;
            let k = (i.max(j), i.min(j));
            match coeffs.get(&k) {
                Some(prev) if *prev != c => {
                    return Err(Error::Asymmetry(format!("X^{i} Y^{j} has coefficient {c}, mirror has {prev}")));
                }
                _ => {
                    coeffs.insert(k, c);
                }
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        let top = ell as usize + 1;
        if coeffs.keys().any(|&(i, _)| i > top) {
            return Err(Error::parse(context, &format!("degree exceeds {top}")));
        }
        if coeffs.get(&(top, 0)).is_none_or(|c| !c.is_one()) {
            return Err(Error::parse(context, &format!("coefficient of X^{top} must be 1")));
        }
        Ok(ModularPolynomial { ell, coeffs })
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigInt {
        self.coeffs.get(&(i.max(j), i.min(j))).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Degree in each variable.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    /// `Phi(x, Y)` as a polynomial in `Y` over the level.
    pub fn specialize(&self, level: &Level, x: &Fe) -> FPoly {
        let p = BigInt::from(level.p());
        let n = self.degree();
        let xp: Vec<Fe> =
            std::iter::successors(Some(level.one()), |acc| Some(level.mul(acc, x))).take(n + 1).collect();
        let mut out = vec![level.zero(); n + 1];
        for (i, xi) in xp.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                let c = self.coeff(i, j);
                if c.is_zero() {
                    continue;
                }
                let r: BigInt = ((c % &p) + &p) % &p;
                let r = u64::try_from(r).expect("reduced coefficient fits");
                *o = level.add(o, &level.scale(xi, r));
            }
        }
        level.poly_trim(out)
    }
}

/// Reads a modular polynomial file.
pub fn load_modular_polynomial(path: &Path) -> Result<ModularPolynomial> {
    let ctx = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::parse(&ctx, &e.to_string()))?;
    ModularPolynomial::parse(&text, &ctx)
}
