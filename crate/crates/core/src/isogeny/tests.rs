use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;

use super::*;
use crate::galois::FieldTower;

fn tower2(p: u64) -> (FieldTower, Arc<Level>) {
    let mut t = FieldTower::new(p);
    let l = t.build_level(2).unwrap();
    (t, l)
}

/// Number of affine points plus the point at infinity, by exhaustion.
fn count_points(level: &Level, curve: &Curve) -> usize {
    let elems: Vec<Fe> = level.elements().collect();
    let mut sq = std::collections::HashMap::new();
    for y in &elems {
        *sq.entry(level.sqr(y)).or_insert(0usize) += 1;
    }
    let rhs = curve.rhs();
    1 + elems.iter().map(|x| sq.get(&level.poly_eval(&rhs, x)).copied().unwrap_or(0)).sum::<usize>()
}

fn product(level: &Level, fs: &[FPoly]) -> FPoly {
    fs.iter().fold(level.poly_one(), |acc, f| level.poly_mul(&acc, f))
}

#[test]
fn j_invariant_examples() {
    let (_, l) = tower2(13);
    let e = Curve::new(l.clone(), l.zero(), l.one()).unwrap();
    assert!(l.is_zero(&e.j_invariant()));
    let e = Curve::new(l.clone(), l.one(), l.zero()).unwrap();
    assert_eq!(e.j_invariant(), l.from_u64(1728));
    let j = l.from_u64(5);
    assert_eq!(Curve::from_j(l.clone(), &j).j_invariant(), j);
    for x in l.elements().step_by(7) {
        assert_eq!(Curve::from_j(l.clone(), &x).j_invariant(), x);
    }
}

#[test]
fn supersingular_examples() {
    let f11 = Arc::new(Level::prime(11));
    assert!(Curve::from_j(f11.clone(), &f11.from_u64(0)).is_supersingular());
    assert!(Curve::from_j(f11.clone(), &f11.from_u64(1)).is_supersingular());
    assert!(!Curve::from_j(f11.clone(), &f11.from_u64(2)).is_supersingular());
    assert_eq!(count_points(&f11, &Curve::from_j(f11.clone(), &f11.from_u64(0))), 12);
    assert_eq!(count_points(&f11, &Curve::from_j(f11.clone(), &f11.from_u64(1))), 12);
    let f13 = Arc::new(Level::prime(13));
    let ss: Vec<u64> = (0..13).filter(|&j| Curve::from_j(f13.clone(), &f13.from_u64(j)).is_supersingular()).collect();
    assert_eq!(ss, vec![5]);
}

#[test]
fn hasse_invariant_matches_point_counts_over_prime_fields() {
    for p in crate::exactlin::primes_up_to(31).into_iter().filter(|&p| p >= 5) {
        let l = Arc::new(Level::prime(p));
        for j in 0..p {
            let e = Curve::from_j(l.clone(), &l.from_u64(j));
            let trace = p as i64 + 1 - count_points(&l, &e) as i64;
            assert_eq!(e.is_supersingular(), trace.rem_euclid(p as i64) == 0, "p={p} j={j}");
        }
    }
}

#[test]
fn hasse_invariant_matches_point_counts_over_quadratic_fields() {
    for p in [5u64, 7, 11, 13] {
        let (_, l) = tower2(p);
        for j in l.elements() {
            let e = Curve::from_j(l.clone(), &j);
            let trace = (p * p) as i64 + 1 - count_points(&l, &e) as i64;
            assert_eq!(e.is_supersingular(), trace.rem_euclid(p as i64) == 0, "p={p} j={}", l.format(&j));
        }
    }
}

#[test]
fn supersingular_mass_formula() {
    for p in crate::exactlin::primes_up_to(31).into_iter().filter(|&p| p >= 5) {
        let (_, l) = tower2(p);
        let mut twelfths = 0usize;
        for j in l.elements() {
            let e = Curve::from_j(l.clone(), &j);
            if e.is_supersingular() {
                twelfths += 24 / automorphism_count(&e, None).unwrap();
            }
        }
        assert_eq!(twelfths as u64, p - 1, "p={p}");
    }
}

#[test]
fn division_polynomial_shape() {
    let (_, l) = tower2(13);
    let e = Curve::from_j(l.clone(), &l.from_u64(5));
    let f = division_polynomials(&e, 9);
    for (n, g) in f.iter().enumerate().skip(1) {
        if n % 2 == 1 {
            assert_eq!(g.deg(), (n * n - 1) / 2);
            assert_eq!(*g.leading(), l.from_u64(n as u64));
        } else {
            assert_eq!(g.deg(), (n * n - 4) / 2);
            assert_eq!(*g.leading(), l.from_u64(n as u64 / 2));
        }
    }
}

#[test]
fn two_subgroups_of_j1728() {
    let (mut t, l) = tower2(11);
    let e = Curve::new(l.clone(), l.one(), l.zero()).unwrap();
    let subs = cyclic_subgroups(&mut t, &e, 2).unwrap();
    assert_eq!(subs.len(), 3);
    let alpha = l.sqrt(&l.from_i64(-1)).unwrap();
    let expect: HashSet<FPoly> =
        [l.poly_x(), l.poly_linear(&alpha), l.poly_linear(&l.neg(&alpha))].into_iter().collect();
    assert_eq!(subs.into_iter().map(|c| c.kernel).collect::<HashSet<_>>(), expect);
}

/// The same curve over the level where `f` splits completely.
fn split_curve(t: &mut FieldTower, j: u64, f_of: impl Fn(&Curve) -> FPoly) -> Curve {
    let base = t.prime_field();
    let e = Curve::from_j(base.clone(), &base.from_u64(j));
    let k = base.factor_squarefree(&f_of(&e), 0).iter().fold(1, |a, (g, _)| lcm(a, g.deg()));
    let big = t.build_level(k).unwrap();
    e.map_level(big.clone(), |x| t.embed(1, k, x).unwrap())
}

#[test]
fn three_and_seven_subgroups() {
    let (mut t, l) = tower2(11);
    for j in [0u64, 1, 5] {
        let e = split_curve(&mut t, j, |e| division_polynomials(e, 3).pop().unwrap());
        let s3 = cyclic_subgroups(&mut t, &e, 3).unwrap();
        assert_eq!(s3.len(), 4);
        assert!(s3.iter().all(|c| c.kernel.deg() == 1));
    }
    let e = Curve::from_j(l.clone(), &l.zero());
    let s7 = cyclic_subgroups(&mut t, &e, 7).unwrap();
    assert_eq!(s7.len(), 8);
    assert!(s7.iter().all(|c| c.kernel.deg() == 3));
    let prod = product(&l, &s7.iter().map(|c| c.kernel.clone()).collect::<Vec<_>>());
    assert_eq!(prod.deg(), 24);
    let psi = division_polynomials(&e, 7).pop().unwrap();
    assert_eq!(prod, l.poly_monic(&psi));
}

#[test]
fn subgroups_are_closed_under_multiples() {
    let (mut t, l) = tower2(7);
    let e = Curve::from_j(l.clone(), &l.from_u64(6));
    assert!(e.is_supersingular());
    for n in [5u64, 11, 13] {
        let d = ((n - 1) / 2) as usize;
        let f = division_polynomials(&e, d + 2);
        for c in cyclic_subgroups(&mut t, &e, n).unwrap() {
            // Work in a level where the kernel splits.
            let k = l.factor_squarefree(&c.kernel, 1).iter().fold(1, |a, (g, _)| lcm(a, g.deg()));
            let big = t.build_level(2 * k).unwrap();
            let emb = |p: &FPoly| t.embed_poly(2, big.degree(), p).unwrap();
            let h = emb(&c.kernel);
            let fb: Vec<FPoly> = f.iter().map(emb).collect();
            let rhs = emb(&e.rhs());
            let roots = big.roots(&h, 3);
            assert_eq!(roots.len(), d);
            for (x, _) in &roots {
                for m in divpoly::multiples_x(&big, &fb, &rhs, x, d) {
                    assert!(big.is_zero(&big.poly_eval(&h, &m)));
                }
            }
        }
    }
}

fn phi2(x: &BigInt, y: &BigInt) -> BigInt {
    let c = |s: &str| s.parse::<BigInt>().unwrap();
    x.pow(3) + y.pow(3) - x.pow(2) * y.pow(2) + c("1488") * (x.pow(2) * y + x * y.pow(2))
        - c("162000") * (x.pow(2) + y.pow(2))
        + c("40773375") * x * y
        + c("8748000000") * (x + y)
        - c("157464000000000")
}

fn fe_to_int(level: &Level, a: &Fe) -> BigInt {
    assert!(level.in_prime_field(a));
    BigInt::from(a.0[0])
}

#[test]
fn two_isogeny_satisfies_modular_equation() {
    let p = 11u64;
    let (mut t, l) = tower2(p);
    let e = Curve::new(l.clone(), l.one(), l.zero()).unwrap();
    let c = CyclicSubgroup { order: 2, kernel: l.poly_x() };
    let (img, _) = velu(&e, &c).unwrap();
    let v = phi2(&fe_to_int(&l, &e.j_invariant()), &fe_to_int(&l, &img.j_invariant()));
    assert_eq!(((v % p) + p) % p, BigInt::from(0));
    // Every 2-isogenous j of a prime-field curve satisfies the equation.
    for j in 0..p {
        let e = split_curve(&mut t, j, |e| e.rhs());
        let lk = e.level().clone();
        let coeffs = phi2_coeffs_in(&lk, &lk.from_u64(j));
        for c in cyclic_subgroups(&mut t, &e, 2).unwrap() {
            let (img, _) = velu(&e, &c).unwrap();
            assert!(lk.is_zero(&lk.poly_eval(&coeffs, &img.j_invariant())), "j={j}");
        }
    }
}

fn phi2_coeffs_in(level: &Level, x: &Fe) -> FPoly {
    let big = |s: &str| {
        let v: BigInt = s.parse().unwrap();
        let r = ((v % level.p()) + level.p()) % level.p();
        level.from_u64(u64::try_from(r).unwrap())
    };
    let x2 = level.sqr(x);
    let x3 = level.mul(&x2, x);
    let c0 = level.add(
        &level.add(&level.sub(&x3, &level.mul(&big("162000"), &x2)), &level.mul(&big("8748000000"), x)),
        &level.neg(&big("157464000000000")),
    );
    let c1 = level.add(
        &level.add(&level.mul(&big("1488"), &x2), &level.mul(&big("40773375"), x)),
        &big("8748000000"),
    );
    let c2 = level.sub(&level.sub(&level.mul(&big("1488"), x), &x2), &big("162000"));
    level.poly_trim(vec![c0, c1, c2, level.one()])
}

/// `den (num^3 + A num den^2 + B den^3) = f (num' den - num den')^2`: the
/// image of a point of `E` lies on `E'` with `Y = y dX/dx`.
fn assert_xmap_is_isogeny(e: &Curve, img: &Curve, x: &XMap) {
    let l = e.level();
    let (n, d) = (&x.num, &x.den);
    let n3 = l.poly_mul(&l.poly_sqr(n), n);
    let d2 = l.poly_sqr(d);
    let inner = l.poly_add(
        &l.poly_add(&n3, &l.poly_scale(&l.poly_mul(n, &d2), &img.a)),
        &l.poly_scale(&l.poly_mul(&d2, d), &img.b),
    );
    let lhs = l.poly_mul(d, &inner);
    let wr = l.poly_sub(&l.poly_mul(&l.poly_derivative(n), d), &l.poly_mul(n, &l.poly_derivative(d)));
    let rhs = l.poly_mul(&e.rhs(), &l.poly_sqr(&wr));
    assert_eq!(lhs, rhs);
}

#[test]
fn velu_maps_points_onto_the_image() {
    let (mut t, l) = tower2(11);
    for j in [0u64, 1] {
        let e = Curve::from_j(l.clone(), &l.from_u64(j));
        for n in [2u64, 3, 5, 7] {
            for c in cyclic_subgroups(&mut t, &e, n).unwrap() {
                let (img, x) = velu(&e, &c).unwrap();
                assert_eq!(x.degree(), n as usize);
                assert_xmap_is_isogeny(&e, &img, &x);
                assert!(img.is_supersingular());
            }
        }
    }
}

/// Reduced composite `x2 o x1`.
fn compose(level: &Level, x2: &XMap, x1: &XMap) -> XMap {
    let e = x2.degree();
    let hom = |p: &FPoly| {
        let mut acc = FPoly::zero();
        for (k, c) in p.0.iter().enumerate() {
            let term = level.poly_mul(&level.poly_pow_u64(&x1.num, k as u64), &level.poly_pow_u64(&x1.den, (e - k) as u64));
            acc = level.poly_add(&acc, &level.poly_scale(&term, c));
        }
        acc
    };
    let (n, d) = (hom(&x2.num), hom(&x2.den));
    let g = level.poly_gcd(&n, &d);
    XMap { num: level.poly_div_exact(&n, &g), den: level.poly_div_exact(&d, &g) }
}

#[test]
fn isogeny_then_complementary_quotient_is_multiplication() {
    let (mut t, l) = tower2(11);
    let e = Curve::from_j(l.clone(), &l.zero());
    for n in [3u64, 5] {
        let subs = cyclic_subgroups(&mut t, &e, n).unwrap();
        let (c, c2) = (&subs[0], &subs[1]);
        let (e1, x1) = velu(&e, c).unwrap();
        let pushed = push_subgroup(&x1, c2, &e1).unwrap();
        let (e2, x2) = velu(&e1, &pushed).unwrap();
        assert_eq!(compose(&l, &x2, &x1).degree(), (n * n) as usize);
        assert_eq!(e2.j_invariant(), e.j_invariant());
        // Pushing C along the same composite returns C up to automorphism.
        let back = push_subgroup(&x2, &push_subgroup(&x1, c2, &e1).unwrap(), &e2);
        assert!(back.is_err(), "the complement itself lies in the second kernel");
        let seven = &cyclic_subgroups(&mut t, &e, 7).unwrap()[2];
        let mid = push_subgroup(&x1, seven, &e1).unwrap();
        let end = push_subgroup(&x2, &mid, &e2).unwrap();
        let (_, got, _) = transport_to_canonical(&e2, &end, 1).unwrap();
        let (want, _) = canonicalize(&l, &e.j_invariant(), &seven.kernel, 1);
        assert_eq!(got, want);
    }
}

#[test]
fn push_through_identity() {
    let (mut t, l) = tower2(13);
    let e = Curve::from_j(l.clone(), &l.from_u64(5));
    for c in cyclic_subgroups(&mut t, &e, 7).unwrap() {
        let pushed = push_subgroup(&XMap::identity(&e), &c, &e).unwrap();
        assert_eq!(pushed, c);
    }
}

#[test]
fn automorphism_counts() {
    let (mut t, l) = tower2(11);
    let generic = Curve::from_j(l.clone(), &l.from_u64(3));
    assert_eq!(automorphism_count(&generic, None).unwrap(), 2);
    let e0 = Curve::from_j(l.clone(), &l.zero());
    assert_eq!(automorphism_count(&e0, None).unwrap(), 6);
    let e1728 = Curve::from_j(l.clone(), &l.from_u64(1728));
    assert_eq!(automorphism_count(&e1728, None).unwrap(), 4);

    // Stabilizers by direct action on the roots.
    let zeta = l.roots(&l.poly_from_u64(&[1, 1, 1]), 0)[0].0.clone();
    let subs = cyclic_subgroups(&mut t, &e0, 7).unwrap();
    let mut saw_two = false;
    for c in &subs {
        let big = t.build_level(6).unwrap();
        let h = t.embed_poly(2, 6, &c.kernel).unwrap();
        let z = t.embed(2, 6, &zeta).unwrap();
        let roots: HashSet<Fe> = big.roots(&h, 0).into_iter().map(|(r, _)| r).collect();
        assert_eq!(roots.len(), 3);
        let fixed = [big.one(), z.clone(), big.sqr(&z)]
            .iter()
            .filter(|u| roots.iter().map(|r| big.mul(r, u)).collect::<HashSet<_>>() == roots)
            .count();
        let count = automorphism_count(&e0, Some(c)).unwrap();
        assert_eq!(count, 2 * fixed);
        saw_two |= count == 2;
    }
    assert!(saw_two);
}

#[test]
fn quotient_commutes_with_frobenius() {
    let (mut t, l) = tower2(13);
    let e = Curve::from_j(l.clone(), &l.from_u64(5));
    let ef = e.frobenius();
    for n in [2u64, 3, 7] {
        for c in cyclic_subgroups(&mut t, &e, n).unwrap() {
            let cf = CyclicSubgroup { order: n, kernel: l.poly_frobenius(&c.kernel) };
            let (img, _) = velu(&e, &c).unwrap();
            let (imgf, _) = velu(&ef, &cf).unwrap();
            assert_eq!(l.frobenius(&img.j_invariant()), imgf.j_invariant());
        }
    }
}

#[test]
fn transport_is_invariant_under_isomorphism() {
    let (mut t, l) = tower2(11);
    let e = Curve::from_j(l.clone(), &l.from_u64(1));
    let u = l.from_coeffs(&[3, 2]);
    let s = l.sqr(&u);
    // Model with a' = a / s^2, b' = b / s^3, kernel moved by x -> x / s.
    let iso = Curve::new(l.clone(), l.div(&e.a, &l.sqr(&s)), l.div(&e.b, &l.mul(&l.sqr(&s), &s))).unwrap();
    let sinv = l.inv(&s);
    for c in cyclic_subgroups(&mut t, &e, 5).unwrap() {
        let moved = CyclicSubgroup { order: 5, kernel: scale_kernel(&l, &c.kernel, &sinv) };
        let (j, got, _) = transport_to_canonical(&iso, &moved, 0).unwrap();
        assert_eq!(j, e.j_invariant());
        assert_eq!(got, canonicalize(&l, &j, &c.kernel, 0).0);
    }
}
