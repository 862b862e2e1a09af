#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub const BIN: &str = env!("CARGO_BIN_EXE_chargroup");

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl From<Output> for Run {
    fn from(o: Output) -> Self {
        Run {
            code: o.status.code().expect("terminated by signal"),
            stdout: String::from_utf8(o.stdout).unwrap(),
            stderr: String::from_utf8(o.stderr).unwrap(),
        }
    }
}

/// Runs the binary with `args`, using `cache` as the cache directory.
pub fn run(cache: &Path, args: &[&str]) -> Run {
    Command::new(BIN).args(args).env("CHARGROUP_CACHE_DIR", cache).output().expect("spawn chargroup").into()
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Coefficient of `x^(p-1)` in `(x^3 + a x + b)^((p-1)/2)` over `F_p`.
pub fn hasse_invariant(a: u64, b: u64, p: u64) -> u64 {
    let f = [b % p, a % p, 0, 1];
    let mut acc = vec![1];
    for _ in 0..(p - 1) / 2 {
        acc = poly_mul(&acc, &f, p);
    }
    acc[(p - 1) as usize]
}

/// Supersingular `j` in `F_p` with weights `|Aut| / 2`, by scanning every `j`.
pub fn supersingular_by_hasse(p: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for j in 0..p {
        let (a, b) = match (j, (1728 + p - j) % p) {
            (0, _) => (0, 1),
            (_, 0) => (1, 0),
            (j, d) => {
                let k = j * pow_mod(d, p - 2, p) % p;
                (3 * k % p, 2 * k % p)
            }
        };
        if hasse_invariant(a, b, p) == 0 {
            let weight = if j == 0 { 3 } else if j == 1728 % p { 2 } else { 1 };
            out.push((j, weight));
        }
    }
    out
}

/// Kronecker symbol `(d / p)` for an odd prime `p` and `d` in `{-3, -4}`.
fn kronecker(d: i64, p: u64) -> i64 {
    match d {
        -4 => if p % 4 == 1 { 1 } else { -1 },
        -3 => match p % 3 {
            0 => 0,
            1 => 1,
            _ => -1,
        },
        _ => unreachable!(),
    }
}

/// Genus of `X_0(N)` for squarefree `N` given by its prime factors.
pub fn genus_x0(primes: &[u64]) -> i64 {
    let mu: i64 = primes.iter().map(|p| *p as i64 + 1).product();
    let nu2: i64 = primes.iter().map(|p| 1 + kronecker(-4, *p)).product();
    let nu3: i64 = primes.iter().map(|p| 1 + kronecker(-3, *p)).product();
    let twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * (1i64 << primes.len());
    assert_eq!(twelve_g % 12, 0);
    twelve_g / 12
}

/// Genus of the Shimura curve attached to the quaternion algebra of discriminant `pq`.
pub fn genus_shimura(p: u64, q: u64) -> i64 {
    let e2: i64 = [p, q].iter().map(|r| 1 - kronecker(-4, *r)).product();
    let e3: i64 = [p, q].iter().map(|r| 1 - kronecker(-3, *r)).product();
    let twelve_g = 12 + (p as i64 - 1) * (q as i64 - 1) - 3 * e2 - 4 * e3;
    assert_eq!(twelve_g % 12, 0);
    twelve_g / 12
}
