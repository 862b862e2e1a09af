//! Exact integer linear algebra: Hermite and Smith normal forms, integer
//! kernels, saturation and finite quotient groups, plus a small prime-field
//! toolkit used for reductions modulo maximal ideals.

mod lattice;
mod matrix;
pub mod modp;
mod normal;

pub use lattice::{index, quotient_group, FiniteAbelianGroup, Lattice};
pub use matrix::{format_int_poly, IntegerMatrix};
pub use normal::{
    gcd_all, hnf, hnf_with_transform, inverse_unimodular, is_unit, kernel_basis, left_kernel, rank, snf,
    BasisSolver, HnfResult, Snf,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Prime factors of a nonzero integer, ascending, by trial division.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d: u64 = 2;
    while BigInt::from(d) * BigInt::from(d) <= n {
        let bd = BigInt::from(d);
        if (&n % &bd).is_zero() {
            out.push(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        out.push(n.to_u64().expect("prime factor beyond trial-division range"));
    }
    out
}

/// Exponent of the prime `l` in `n`.
pub fn valuation(n: &BigInt, l: u64) -> u32 {
    let mut n = n.abs();
    if n.is_zero() {
        return u32::MAX;
    }
    let bl = BigInt::from(l);
    let mut v = 0;
    while (&n % &bl).is_zero() {
        n /= &bl;
        v += 1;
    }
    v
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

#[cfg(test)]
mod tests;
