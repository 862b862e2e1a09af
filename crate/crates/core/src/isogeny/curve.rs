use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::{FPoly, Fe, Level};

/// Short Weierstrass curve `y^2 = x^3 + a x + b` over a field level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    level: Arc<Level>,
    pub a: Fe,
    pub b: Fe,
}

impl Curve {
    /// Builds a curve, rejecting a vanishing discriminant `4a^3 + 27b^2`.
    pub fn new(level: Arc<Level>, a: Fe, b: Fe) -> Result<Self> {
        let c = Curve { level, a, b };
        if c.level.is_zero(&c.disc_part()) {
            return Err(Error::Invalid("singular curve".into()));
        }
        Ok(c)
    }

    /// The canonical model with the given j-invariant.
    ///
    /// `j = 0` gives `y^2 = x^3 + 1`, `j = 1728` gives `y^2 = x^3 + x`, otherwise
    /// `a = 3j(1728 - j)` and `b = 2j(1728 - j)^2`.
    pub fn from_j(level: Arc<Level>, j: &Fe) -> Self {
        let l = &level;
        let k1728 = l.from_u64(1728);
        let (a, b) = if l.is_zero(j) {
            (l.zero(), l.one())
        } else if *j == k1728 {
            (l.one(), l.zero())
        } else {
            let m = l.sub(&k1728, j);
            let jm = l.mul(j, &m);
            (l.scale(&jm, 3), l.scale(&l.mul(&jm, &m), 2))
        };
        Curve { level, a, b }
    }

    pub fn level(&self) -> &Arc<Level> {
        &self.level
    }

    fn disc_part(&self) -> Fe {
        let l = &self.level;
        let a3 = l.mul(&l.sqr(&self.a), &self.a);
        l.add(&l.scale(&a3, 4), &l.scale(&l.sqr(&self.b), 27))
    }

    /// `j = 1728 * 4a^3 / (4a^3 + 27b^2)`.
    pub fn j_invariant(&self) -> Fe {
        let l = &self.level;
        let a3 = l.mul(&l.sqr(&self.a), &self.a);
        l.div(&l.scale(&a3, 4 * 1728), &self.disc_part())
    }

    /// `x^3 + a x + b`.
    pub fn rhs(&self) -> FPoly {
        let l = &self.level;
        l.poly_trim(vec![self.b.clone(), self.a.clone(), l.zero(), l.one()])
    }

    pub fn contains(&self, x: &Fe, y: &Fe) -> bool {
        let l = &self.level;
        l.sqr(y) == l.poly_eval(&self.rhs(), x)
    }

    /// Hasse invariant test: the coefficient of `x^(p-1)` in `(x^3 + ax + b)^((p-1)/2)` vanishes.
    pub fn is_supersingular(&self) -> bool {
        let l = &self.level;
        let p = l.p();
        let h = l.poly_pow_u64(&self.rhs(), (p - 1) / 2);
        h.coeff(p as usize - 1).is_none_or(|c| l.is_zero(c))
    }

    /// Coefficientwise `p`-power Frobenius twist.
    pub fn frobenius(&self) -> Self {
        let l = &self.level;
        Curve { level: self.level.clone(), a: l.frobenius(&self.a), b: l.frobenius(&self.b) }
    }

    /// Same curve with coefficients moved into a larger level by `embed`.
    pub fn map_level(&self, level: Arc<Level>, embed: impl Fn(&Fe) -> Fe) -> Self {
        Curve { a: embed(&self.a), b: embed(&self.b), level }
    }
}
