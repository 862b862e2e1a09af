//! Linear algebra over a prime field `F_l` with machine-word entries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::matrix::IntegerMatrix;

pub fn reduce(x: &BigInt, l: u64) -> u64 {
    x.mod_floor(&BigInt::from(l)).to_u64().expect("reduced value fits")
}

pub fn inv_mod(a: u64, l: u64) -> u64 {
    let a = a % l;
    assert!(a != 0, "inverse of zero mod {l}");
    let g = (a as i128).extended_gcd(&(l as i128));
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(l as i128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, l: u64) -> u64 {
    let mut r = 1 % l;
    b %= l;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, l);
        }
        b = mul_mod(b, b, l);
        e >>= 1;
    }
    r
}

#[inline]
pub fn mul_mod(a: u64, b: u64, l: u64) -> u64 {
    ((a as u128 * b as u128) % l as u128) as u64
}

/// Subspace of `F_l^n` kept in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    l: u64,
    n: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(l: u64, n: usize) -> Self {
        Subspace { l, n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn spanned_by(l: u64, n: usize, vecs: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let mut s = Self::new(l, n);
        for v in vecs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.l
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the echelon basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let l = self.l;
        let mut w: Vec<u64> = v.iter().map(|x| x % l).collect();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if c != 0 {
                for (x, r) in w.iter_mut().zip(row) {
                    if *r != 0 {
                        *x = (*x + l - mul_mod(c, *r, l)) % l;
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Inserts a vector; returns true when the dimension grew.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        assert_eq!(v.len(), self.n);
        let l = self.l;
        let mut w = self.reduce(&v);
        let Some(pc) = w.iter().position(|&x| x != 0) else { return false };
        let inv = inv_mod(w[pc], l);
        for x in w.iter_mut() {
            *x = mul_mod(*x, inv, l);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                for (x, y) in row.iter_mut().zip(&w) {
                    if *y != 0 {
                        *x = (*x + l - mul_mod(c, *y, l)) % l;
                    }
                }
            }
        }
        let pos = self.pivots.iter().position(|&p| p > pc).unwrap_or(self.pivots.len());
        self.rows.insert(pos, w);
        self.pivots.insert(pos, pc);
        true
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the span.
    pub fn coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        let c: Vec<u64> = self.pivots.iter().map(|&pc| v[pc] % self.l).collect();
        let mut recon = vec![0u64; self.n];
        for (ci, row) in c.iter().zip(&self.rows) {
            for (x, r) in recon.iter_mut().zip(row) {
                *x = (*x + mul_mod(*ci, *r, self.l)) % self.l;
            }
        }
        if recon.iter().zip(v).all(|(a, b)| *a == b % self.l) {
            Some(c)
        } else {
            None
        }
    }

    /// Basis of a complement: the standard vectors at non-pivot positions.
    pub fn complement_positions(&self) -> Vec<usize> {
        (0..self.n).filter(|i| !self.pivots.contains(i)).collect()
    }
}

/// Dense matrix over `F_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    pub l: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(l: u64, rows: usize, cols: usize) -> Self {
        ModMatrix { l, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_int(m: &IntegerMatrix, l: u64) -> Self {
        ModMatrix { l, rows: m.rows(), cols: m.cols(), data: m.entries().iter().map(|x| reduce(x, l)).collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.l;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::spanned_by(self.l, self.cols, (0..self.rows).map(|i| self.row(i).to_vec()))
    }

    pub fn rank(&self) -> usize {
        self.row_space().dim()
    }

    /// `v * self` for a row vector `v`.
    pub fn left_apply(&self, v: &[u64]) -> Vec<u64> {
        let l = self.l;
        let mut out = vec![0u64; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(i, j);
                if b != 0 {
                    *o = (*o + mul_mod(a, b, l)) % l;
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ModMatrix::zeros(self.l, self.rows, other.cols);
        for i in 0..self.rows {
            let r = other.left_apply(self.row(i));
            out.data[i * other.cols..(i + 1) * other.cols].copy_from_slice(&r);
        }
        out
    }

    /// Basis of `{x : x * self = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<u64>> {
        let l = self.l;
        // Row-reduce [self | I] and read off rows whose left block vanishes.
        let n = self.rows;
        let mut rows: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|k| u64::from(k == i)));
                r
            })
            .collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(piv) = (rank..n).find(|&i| rows[i][c] != 0) else { continue };
            rows.swap(rank, piv);
            let inv = inv_mod(rows[rank][c], l);
            for x in rows[rank].iter_mut() {
                *x = mul_mod(*x, inv, l);
            }
            for i in 0..n {
                if i != rank && rows[i][c] != 0 {
                    let f = rows[i][c];
                    let pr = rows[rank].clone();
                    for (x, y) in rows[i].iter_mut().zip(&pr) {
                        *x = (*x + l - mul_mod(f, *y, l)) % l;
                    }
                }
            }
            rank += 1;
        }
        rows[rank..].iter().map(|r| r[self.cols..].to_vec()).collect()
    }
}
