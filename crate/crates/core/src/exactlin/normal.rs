use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lattice::Lattice;
use super::matrix::IntegerMatrix;

/// Row Hermite normal form together with the unimodular transform.
#[derive(Clone, Debug)]
pub struct HnfResult {
    /// Nonzero rows of the normal form.
    pub h: IntegerMatrix,
    /// Unimodular matrix with `u * m = [h; 0]`.
    pub u: IntegerMatrix,
    /// Pivot column of each row of `h`.
    pub pivots: Vec<usize>,
}

fn sub_row_multiple(a: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt, from: usize) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for k in from..s.len() {
        if !s[k].is_zero() {
            t[k] -= q * &s[k];
        }
    }
}

fn negate_row(a: &mut [BigInt]) {
    for x in a.iter_mut() {
        *x = -std::mem::take(x);
    }
}

fn hnf_core(m: &IntegerMatrix, track: bool) -> HnfResult {
    let nrows = m.rows();
    let ncols = m.cols();
    let mut a = m.row_vecs();
    let mut u: Vec<Vec<BigInt>> = if track { IntegerMatrix::identity(nrows).row_vecs() } else { Vec::new() };
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..nrows {
                if !a[i][c].is_zero() && best.is_none_or(|b| a[i][c].abs() < a[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(r, b);
            if track {
                u.swap(r, b);
            }
            let mut clean = true;
            for i in r + 1..nrows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                sub_row_multiple(&mut a, i, r, &q, c);
                if track {
                    sub_row_multiple(&mut u, i, r, &q, 0);
                }
                if !a[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            negate_row(&mut a[r]);
            if track {
                negate_row(&mut u[r]);
            }
        }
        for i in 0..r {
            if a[i][c].is_zero() {
                continue;
            }
            let q = a[i][c].div_floor(&a[r][c]);
            sub_row_multiple(&mut a, i, r, &q, c);
            if track {
                sub_row_multiple(&mut u, i, r, &q, 0);
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    HnfResult {
        h: IntegerMatrix::from_rows(a, ncols),
        u: if track { IntegerMatrix::from_rows(u, nrows) } else { IntegerMatrix::zeros(0, nrows) },
        pivots,
    }
}

/// Row Hermite normal form: upper echelon, positive pivots, entries above each
/// pivot reduced into `[0, pivot)`, zero rows dropped.
pub fn hnf(m: &IntegerMatrix) -> IntegerMatrix {
    hnf_core(m, false).h
}

pub fn hnf_with_transform(m: &IntegerMatrix) -> HnfResult {
    hnf_core(m, true)
}

pub(crate) fn hnf_core_pivots(m: &IntegerMatrix) -> (IntegerMatrix, Vec<usize>) {
    let r = hnf_core(m, false);
    (r.h, r.pivots)
}

pub fn rank(m: &IntegerMatrix) -> usize {
    hnf_core(m, false).pivots.len()
}

/// Smith normal form with unimodular transforms: `left * m * right = d`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntegerMatrix,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl Snf {
    /// Diagonal entries, including zeros, up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }
}

fn col_sub_multiple(a: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        if !row[src].is_zero() {
            let v = q * &row[src];
            row[target] -= v;
        }
    }
}

fn col_swap(a: &mut [Vec<BigInt>], x: usize, y: usize) {
    if x != y {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
    }
}

pub fn snf(m: &IntegerMatrix) -> Snf {
    let nr = m.rows();
    let nc = m.cols();
    let mut a = m.row_vecs();
    let mut l = IntegerMatrix::identity(nr).row_vecs();
    let mut r = IntegerMatrix::identity(nc).row_vecs();
    let mut t = 0;
    while t < nr.min(nc) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        l.swap(t, bi);
        col_swap(&mut a, t, bj);
        col_swap(&mut r, t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                sub_row_multiple(&mut a, i, t, &q, t);
                sub_row_multiple(&mut l, i, t, &q, 0);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_sub_multiple(&mut a, j, t, &q);
                col_sub_multiple(&mut r, j, t, &q);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let mut best = (t, t);
                for i in t..nr {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..nc {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                    l.swap(t, best.0);
                }
                if best.1 != t {
                    col_swap(&mut a, t, best.1);
                    col_swap(&mut r, t, best.1);
                }
                continue;
            }
            let bad = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            if let Some(i) = bad {
                let (lo, hi) = a.split_at_mut(i);
                for k in t..nc {
                    let v = hi[0][k].clone();
                    lo[t][k] += v;
                }
                let (lo, hi) = l.split_at_mut(i);
                for k in 0..nr {
                    let v = hi[0][k].clone();
                    lo[t][k] += v;
                }
                continue;
            }
            break;
        }
        if a[t][t].is_negative() {
            negate_row(&mut a[t]);
            negate_row(&mut l[t]);
        }
        t += 1;
    }
    Snf {
        d: IntegerMatrix::from_rows(a, nc),
        left: IntegerMatrix::from_rows(l, nr),
        right: IntegerMatrix::from_rows(r, nc),
    }
}

/// Lattice of integer vectors `x` with `m * x = 0`.
pub fn kernel_basis(m: &IntegerMatrix) -> Lattice {
    let t = m.transpose();
    let res = hnf_with_transform(&t);
    let k = res.pivots.len();
    let rows: Vec<Vec<BigInt>> = (k..t.rows()).map(|i| res.u.row(i).to_vec()).collect();
    Lattice::from_rows(m.cols(), IntegerMatrix::from_rows(rows, m.cols()))
}

/// Lattice of integer row vectors `x` with `x * m = 0`.
pub fn left_kernel(m: &IntegerMatrix) -> Lattice {
    kernel_basis(&m.transpose())
}

/// Inverse of a unimodular matrix.
pub fn inverse_unimodular(m: &IntegerMatrix) -> Option<IntegerMatrix> {
    if !m.is_square() {
        return None;
    }
    let res = hnf_with_transform(m);
    if res.h.is_identity() {
        Some(res.u)
    } else {
        None
    }
}

/// Solves coordinates of vectors in the row span of a fixed matrix with
/// linearly independent rows.
#[derive(Clone, Debug)]
pub struct BasisSolver {
    res: HnfResult,
    nrows: usize,
}

impl BasisSolver {
    pub fn new(basis: &IntegerMatrix) -> Self {
        let res = hnf_with_transform(basis);
        assert_eq!(res.pivots.len(), basis.rows(), "basis rows must be independent");
        BasisSolver { res, nrows: basis.rows() }
    }

    /// Coordinates `c` with `c * basis = v`, or `None` if `v` is not an integral combination.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = echelon_coords(&self.res.h, &self.res.pivots, v)?;
        let k = self.res.pivots.len();
        let mut out = vec![BigInt::zero(); self.nrows];
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let u = &self.res.u[(i, j)];
                if !u.is_zero() {
                    *o += ci * u;
                }
            }
        }
        debug_assert!(k <= self.nrows);
        Some(out)
    }

    pub fn coords_matrix(&self, m: &IntegerMatrix) -> Option<IntegerMatrix> {
        let rows = (0..m.rows()).map(|i| self.coords(m.row(i))).collect::<Option<Vec<_>>>()?;
        Some(IntegerMatrix::from_rows(rows, self.nrows))
    }
}

/// Coordinates of `v` with respect to the rows of an echelon matrix `h`.
pub(crate) fn echelon_coords(h: &IntegerMatrix, pivots: &[usize], v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(v.len(), h.cols());
    let mut rest = v.to_vec();
    let mut c = Vec::with_capacity(pivots.len());
    for (i, &pc) in pivots.iter().enumerate() {
        if rest[..pc].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = rest[pc].div_rem(&h[(i, pc)]);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (k, x) in rest.iter_mut().enumerate().skip(pc) {
                let hv = &h[(i, k)];
                if !hv.is_zero() {
                    *x -= &q * hv;
                }
            }
        }
        c.push(q);
    }
    if rest.iter().all(|x| x.is_zero()) {
        Some(c)
    } else {
        None
    }
}

/// Greatest common divisor of a list, nonnegative.
pub fn gcd_all<'a>(vals: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    vals.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}
