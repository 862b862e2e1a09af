use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use super::*;

fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
    IntegerMatrix::from_i64(rows)
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|x| BigInt::from(*x)).collect()
}

/// Determinant by cofactor expansion.
fn cofactor_det(a: &IntegerMatrix) -> BigInt {
    let n = a.rows();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        let minor = IntegerMatrix::from_fn(n - 1, n - 1, |r, c| a[(r + 1, if c < j { c } else { c + 1 })].clone());
        let term = &a[(0, j)] * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn is_upper_hnf(h: &IntegerMatrix) -> bool {
    let mut last: Option<usize> = None;
    for i in 0..h.rows() {
        let Some(p) = (0..h.cols()).find(|j| !h[(i, *j)].is_zero()) else { return false };
        if last.is_some_and(|l| p <= l) || !h[(i, p)].is_positive() {
            return false;
        }
        for k in 0..i {
            if h[(k, p)].is_negative() || h[(k, p)] >= h[(i, p)] {
                return false;
            }
        }
        last = Some(p);
    }
    true
}

#[test]
fn hnf_examples() {
    assert_eq!(hnf(&m(&[vec![1, 1], vec![0, 0]])), m(&[vec![1, 1]]));
    assert_eq!(hnf(&IntegerMatrix::identity(3)), IntegerMatrix::identity(3));
    let a = m(&[vec![2, 4], vec![6, 8]]);
    let h = hnf(&a);
    assert!(is_upper_hnf(&h));
    assert_eq!(h.det().abs(), cofactor_det(&a).abs());
    assert_eq!(cofactor_det(&a), BigInt::from(-8));
}

#[test]
fn snf_examples() {
    assert_eq!(snf(&IntegerMatrix::diagonal(&ints(&[2, 3]))).diagonal(), ints(&[1, 6]));
    assert_eq!(snf(&IntegerMatrix::zeros(2, 3)).diagonal(), ints(&[0, 0]));
    assert_eq!(snf(&IntegerMatrix::diagonal(&ints(&[2, 2]))).diagonal(), ints(&[2, 2]));
}

#[test]
fn kernel_examples() {
    let k = kernel_basis(&m(&[vec![1, 1]]));
    assert_eq!(k, Lattice::from_rows(2, m(&[vec![1, -1]])));
    assert_eq!(kernel_basis(&IntegerMatrix::identity(3)).rank(), 0);
    let a = m(&[vec![2, 4]]);
    let k = kernel_basis(&a);
    assert_eq!(k, Lattice::from_rows(2, m(&[vec![2, -1]])));
    for x in -6i64..=6 {
        for y in -6i64..=6 {
            if 2 * x + 4 * y == 0 {
                assert!(k.contains(&ints(&[x, y])));
            }
        }
    }
}

#[test]
fn saturation_examples() {
    let l = Lattice::from_rows(2, m(&[vec![2, 0]]));
    assert_eq!(l.saturate(), Lattice::from_rows(2, m(&[vec![1, 0]])));
    let u = Lattice::from_rows(2, m(&[vec![2, 1], vec![1, 1]]));
    assert_eq!(u.saturate(), u);
    assert_eq!(u, Lattice::full(2));
    assert_eq!(Lattice::from_rows(2, m(&[vec![2, 2]])).saturate(), Lattice::from_rows(2, m(&[vec![1, 1]])));
}

#[test]
fn quotient_examples() {
    let z2 = Lattice::full(2);
    let two = z2.scale(&BigInt::from(2));
    assert_eq!(quotient_group(&z2, &two).unwrap().invariant_factors, ints(&[2, 2]));
    assert!(quotient_group(&z2, &z2).unwrap().is_trivial());
    let inner = Lattice::from_rows(2, m(&[vec![2, 0], vec![0, 3]]));
    let g = quotient_group(&z2, &inner).unwrap();
    assert_eq!(g.invariant_factors, ints(&[6]));
    assert_eq!(g.order(), BigInt::from(6));
    assert_eq!(quotient_group(&inner, &z2).unwrap_err(), crate::Error::NotSublattice);
    let line = Lattice::from_rows(2, m(&[vec![1, 0]]));
    assert_eq!(quotient_group(&z2, &line).unwrap_err(), crate::Error::InfiniteIndex);
}

#[test]
fn matrix_text_round_trip() {
    let a = m(&[vec![1, -2, 3], vec![0, 40, -5]]);
    let text = a.to_text();
    assert!(text.starts_with("2 3\n"));
    assert_eq!(IntegerMatrix::parse_text(&text).unwrap(), a);
    assert!(IntegerMatrix::parse_text("2 2\n1 2\n3").is_err());
}

#[test]
fn arithmetic_helpers() {
    assert_eq!(prime_factors(&BigInt::from(360)), vec![2, 3, 5]);
    assert_eq!(prime_factors(&BigInt::from(-97)), vec![97]);
    assert_eq!(valuation(&BigInt::from(360), 2), 3);
    assert_eq!(primes_up_to(13), vec![2, 3, 5, 7, 11, 13]);
    assert_eq!(format_int_poly(&ints(&[-1, 0, 1])), "x^2 - 1");
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntegerMatrix> {
    proptest::collection::vec(-6i64..=6, rows * cols)
        .prop_map(move |v| IntegerMatrix::from_fn(rows, cols, |i, j| BigInt::from(v[i * cols + j])))
}

fn any_matrix() -> impl Strategy<Value = IntegerMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| small_matrix(r, c))
}

fn square_matrix() -> impl Strategy<Value = IntegerMatrix> {
    (1usize..=5).prop_flat_map(|n| small_matrix(n, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_is_idempotent_and_spans(a in any_matrix()) {
        let h = hnf(&a);
        prop_assert_eq!(hnf(&h), h.clone());
        prop_assert!(h.rows() == 0 || is_upper_hnf(&h));
        let la = Lattice::from_rows(a.cols(), a.clone());
        let lh = Lattice::from_rows(a.cols(), h.clone());
        for i in 0..a.rows() {
            prop_assert!(lh.contains(a.row(i)));
        }
        prop_assert_eq!(la, lh);
        let t = hnf_with_transform(&a);
        prop_assert!(is_unit(&t.u.det()));
        prop_assert_eq!(t.u.mul(&a).block(0, 0, h.rows(), a.cols()), h);
    }

    #[test]
    fn snf_is_a_unimodular_diagonalization(a in any_matrix()) {
        let s = snf(&a);
        prop_assert!(is_unit(&s.left.det()));
        prop_assert!(is_unit(&s.right.det()));
        prop_assert_eq!(s.left.mul(&a).mul(&s.right), s.d.clone());
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            } else {
                prop_assert!(w[1].is_zero());
            }
        }
        let li = inverse_unimodular(&s.left).unwrap();
        let ri = inverse_unimodular(&s.right).unwrap();
        prop_assert_eq!(li.mul(&s.d).mul(&ri), a);
    }

    #[test]
    fn kernel_rank_nullity(a in any_matrix()) {
        let k = kernel_basis(&a);
        prop_assert_eq!(k.rank() + rank(&a), a.cols());
        prop_assert!(a.mul(&k.basis().transpose()).is_zero());
        prop_assert!(k.is_saturated());
    }

    #[test]
    fn det_matches_cofactor_expansion(a in square_matrix()) {
        prop_assert_eq!(a.det(), cofactor_det(&a));
    }

    #[test]
    fn charpoly_matches_determinants(a in square_matrix(), t in -4i64..=4) {
        let cp = a.charpoly();
        let n = a.rows();
        let value: BigInt = cp.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c);
        let shifted = IntegerMatrix::scalar(n, &BigInt::from(t)).sub(&a);
        prop_assert_eq!(value, cofactor_det(&shifted));
    }

    #[test]
    fn quotient_orders_multiply_along_chains(a in square_matrix(), b_seed in proptest::collection::vec(-4i64..=4, 25)) {
        let n = a.rows();
        let b = IntegerMatrix::from_fn(n, n, |i, j| BigInt::from(b_seed[i * 5 + j]));
        prop_assume!(!a.det().is_zero() && !b.det().is_zero());
        let outer = Lattice::full(n);
        let mid = Lattice::from_rows(n, a.clone());
        let inner = Lattice::from_rows(n, b.mul(&a));
        let whole = quotient_group(&outer, &inner).unwrap().order();
        let parts = quotient_group(&outer, &mid).unwrap().order() * quotient_group(&mid, &inner).unwrap().order();
        prop_assert_eq!(whole.clone(), parts);
        prop_assert_eq!(whole, b.mul(&a).det().abs());
    }

    #[test]
    fn saturation_contains_with_finite_index(a in any_matrix()) {
        let l = Lattice::from_rows(a.cols(), a);
        let s = l.saturate();
        prop_assert!(s.contains_lattice(&l));
        prop_assert!(s.is_saturated());
        prop_assert_eq!(s.rank(), l.rank());
        prop_assert!(index(&s, &l).is_some());
    }

    #[test]
    fn text_format_round_trips(a in any_matrix()) {
        prop_assert_eq!(IntegerMatrix::parse_text(&a.to_text()).unwrap(), a);
    }
}
