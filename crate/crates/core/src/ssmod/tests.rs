use std::path::PathBuf;

use num_bigint::BigInt;

use super::*;
use crate::exactlin::{quotient_group, snf, Lattice};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/modpoly").join(name)
}

fn js(vs: &[VertexPoint]) -> Vec<(u64, u32)> {
    vs.iter().map(|v| (v.j.index(13) as u64, v.weight)).collect()
}

#[test]
fn enumeration_examples() {
    let v11 = enumerate_ss(11).unwrap();
    assert_eq!(v11.iter().map(|v| (v.j.0.clone(), v.weight)).collect::<Vec<_>>(), vec![(vec![0, 0], 3), (vec![1, 0], 2)]);
    assert_eq!(js(&enumerate_ss(13).unwrap()), vec![(5, 1)]);
    assert_eq!(enumerate_ss(5).unwrap().iter().map(|v| v.weight).collect::<Vec<_>>(), vec![3]);
    assert!(enumerate_ss(4).is_err());
}

#[test]
fn vertex_mass_formula() {
    for p in crate::exactlin::primes_up_to(31).into_iter().filter(|&p| p >= 5) {
        let vs = enumerate_ss(p).unwrap();
        assert_eq!(vs.iter().map(|v| 12 / v.weight as u64).sum::<u64>(), p - 1);
        // Every vertex really is supersingular.
        let mut t = FieldTower::new(p);
        let l = t.build_level(2).unwrap();
        assert!(vs.iter().all(|v| Curve::from_j(l.clone(), &v.j).is_supersingular()));
    }
}

#[test]
fn edge_basis_sizes() {
    let m = GraphModule::edge(11, 7, 0).unwrap();
    assert_eq!(m.size(), 8);
    assert_eq!(m.degree_zero_submodule().unwrap().rank(), 7);
    assert_eq!(m.mass_twelfths(), 10 * 8);
    let m = GraphModule::edge(5, 7, 0).unwrap();
    let mut w = m.weights();
    w.sort();
    assert_eq!(w, vec![1, 1, 3, 3]);
    assert_eq!(m.degree_zero_submodule().unwrap().rank(), 3);
    let m = GraphModule::edge(7, 11, 0).unwrap();
    assert_eq!(m.size(), 6);
    assert!(m.weights().iter().all(|&w| w == 1));
}

#[test]
fn edge_mass_formula_small_pairs() {
    for p in [5u64, 7, 11, 13] {
        for q in [5u64, 7, 11, 13] {
            if p != q {
                let m = GraphModule::edge(p, q, 0).unwrap();
                assert_eq!(m.mass_twelfths(), (p - 1) * (q + 1), "({p}, {q})");
            }
        }
    }
}

#[test]
fn operator_laws_hold() {
    for (p, q) in [(5u64, 7u64), (11, 7)] {
        let m = GraphModule::edge(p, q, 13).unwrap();
        m.check_laws().unwrap();
        let a = m.alpha.as_ref().unwrap();
        let b = m.beta.as_ref().unwrap();
        for j in 0..m.size() {
            assert_eq!(a.column(j).iter().sum::<BigInt>(), BigInt::from(1));
            assert_eq!(b.column(j).iter().sum::<BigInt>(), BigInt::from(1));
        }
    }
    GraphModule::vertex(11, 13).unwrap().check_laws().unwrap();
}

#[test]
fn frobenius_fixes_prime_field_edges() {
    let m = GraphModule::edge(11, 7, 0).unwrap();
    let wp = m.atkin_lehner(Label::Wp).unwrap();
    let l = m.tower.level(2).unwrap();
    for (i, e) in m.edges.iter().enumerate() {
        if l.in_prime_field(&e.j) && e.kernel.0.iter().all(|c| l.in_prime_field(c)) {
            assert_eq!(wp[(i, i)], BigInt::from(1));
        }
    }
}

#[test]
fn degeneracy_kernel_ranks() {
    assert_eq!(GraphModule::edge(11, 7, 0).unwrap().degeneracy_kernel().unwrap().rank(), 5);
    assert_eq!(GraphModule::edge(5, 7, 0).unwrap().degeneracy_kernel().unwrap().rank(), 3);
    assert_eq!(GraphModule::edge(7, 11, 0).unwrap().degeneracy_kernel().unwrap().rank(), 5);
}

#[test]
fn u_q_plus_w_q_kills_the_degeneracy_kernel() {
    let m = GraphModule::edge(11, 7, 2).unwrap();
    let y = m.degeneracy_kernel().unwrap();
    let e = y.embedding().unwrap();
    let s = m.u_q.as_ref().unwrap().add(m.atkin_lehner(Label::Wq).unwrap());
    assert!(e.mul(&s.transpose()).is_zero());
}

#[test]
fn monodromy_gram_properties() {
    let m = GraphModule::edge(7, 11, 0).unwrap();
    let full = TModule::new(m.size(), BTreeMap::new()).with_embedding(Some(IntegerMatrix::identity(m.size())));
    assert!(m.monodromy_gram(&full).unwrap().is_identity());
    let m = GraphModule::edge(11, 7, 0).unwrap();
    let x = m.degree_zero_submodule().unwrap();
    let g = m.monodromy_gram(&x).unwrap();
    assert_eq!(g, g.transpose());
    assert!(g.det() > BigInt::from(0));
    // Component group as the cokernel of the pairing, two ways.
    let coker = quotient_group(&Lattice::full(7), &Lattice::from_rows(7, g.clone())).unwrap();
    let d: BigInt = snf(&g).diagonal().iter().product();
    assert_eq!(coker.order(), d.clone());
    assert_eq!(coker.order(), g.det());
}

#[test]
fn modular_polynomial_files() {
    let phi2 = load_modular_polynomial(&fixture("phi_2.txt")).unwrap();
    assert_eq!(phi2.degree(), 3);
    assert_eq!(phi2.coeff(3, 3), BigInt::from(0));
    assert_eq!(phi2.coeff(3, 0), BigInt::from(1));
    assert_eq!(phi2.coeff(0, 3), BigInt::from(1));
    match load_modular_polynomial(&fixture("missing.txt")) {
        Err(Error::Parse { context, .. }) => assert!(context.ends_with("missing.txt")),
        other => panic!("expected a parse error, got {other:?}"),
    }
    let asym = "ell 2\n3 0 1\n2 1 5\n1 2 6\n";
    assert!(matches!(ModularPolynomial::parse(asym, "inline"), Err(Error::Asymmetry(_))));
}

#[test]
fn modular_polynomial_roots_match_isogenies() {
    let phi3 = load_modular_polynomial(&fixture("phi_3.txt")).unwrap();
    let phi2 = load_modular_polynomial(&fixture("phi_2.txt")).unwrap();
    let mut t = FieldTower::new(11);
    let l = t.build_level(2).unwrap();
    for v in enumerate_ss(11).unwrap() {
        let e = Curve::from_j(l.clone(), &v.j);
        for (phi, n) in [(&phi2, 2u64), (&phi3, 3)] {
            let mut from_phi: Vec<Fe> =
                l.roots(&phi.specialize(&l, &v.j), 0).into_iter().flat_map(|(r, m)| std::iter::repeat_n(r, m)).collect();
            let mut from_velu: Vec<Fe> = cyclic_subgroups(&mut t, &e, n)
                .unwrap()
                .iter()
                .map(|c| velu(&e, c).unwrap().0.j_invariant())
                .collect();
            from_phi.sort();
            from_velu.sort();
            assert_eq!(from_phi, from_velu);
        }
    }
}

/// Power series `q * j(q)` to `n` terms, from `E4^3 / (Delta / q)`.
fn qj_series(n: usize) -> Vec<BigInt> {
    let mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::from(0); n];
        for (i, x) in a.iter().enumerate() {
            for (k, y) in b.iter().take(n - i).enumerate() {
                out[i + k] += x * y;
            }
        }
        out
    };
    let e4: Vec<BigInt> = (0..n)
        .map(|k| {
            if k == 0 {
                BigInt::from(1)
            } else {
                BigInt::from(240 * (1..=k as u64).filter(|d| (k as u64).is_multiple_of(*d)).map(|d| d * d * d).sum::<u64>())
            }
        })
        .collect();
    let mut delta = vec![BigInt::from(0); n];
    delta[0] = BigInt::from(1);
    for m in 1..n {
        for _ in 0..24 {
            for k in (m..n).rev() {
                let t = delta[k - m].clone();
                delta[k] -= t;
            }
        }
    }
    // Inverse of a series with constant term 1.
    let mut inv = vec![BigInt::from(0); n];
    inv[0] = BigInt::from(1);
    for k in 1..n {
        let s: BigInt = (1..=k).map(|i| &delta[i] * &inv[k - i]).sum();
        inv[k] = -s;
    }
    mul(&mul(&mul(&e4, &e4), &e4), &inv)
}

/// `Phi_l` in the fixture text format, recovered as the integer relation
/// between `j(q)` and `j(q^l)` among monomials of degree at most `l + 1`.
fn phi_from_q_expansion(ell: usize) -> String {
    let top = ell + 1;
    let max_pole = top + ell * top;
    let extra = 30;
    let n = max_pole + extra;
    let a = qj_series(n);
    let mut b = vec![BigInt::from(0); n];
    for (k, c) in a.iter().enumerate() {
        if k * ell < n {
            b[k * ell] = c.clone();
        }
    }
    let powers = |s: &[BigInt]| {
        let mut out = vec![{
            let mut one = vec![BigInt::from(0); n];
            one[0] = BigInt::from(1);
            one
        }];
        for _ in 0..top {
            let prev = out.last().unwrap();
            let mut nx = vec![BigInt::from(0); n];
            for (i, x) in prev.iter().enumerate() {
                for (k, y) in s.iter().take(n - i).enumerate() {
                    nx[i + k] += x * y;
                }
            }
            out.push(nx);
        }
        out
    };
    let (pa, pb) = (powers(&a), powers(&b));
    let monos: Vec<(usize, usize)> = (0..=top).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
    // Column for each symmetric monomial: coefficients of q^(e - max_pole), e < n.
    let column = |i: usize, j: usize| -> Vec<BigInt> {
        let mut col = vec![BigInt::from(0); n];
        let mut add = |x: usize, y: usize| {
            let shift = max_pole - (x + ell * y);
            for k in 0..n - shift {
                let c: BigInt = (0..=k).map(|t| &pa[x][t] * &pb[y][k - t]).sum();
                col[k + shift] += c;
            }
        };
        add(i, j);
        if i != j {
            add(j, i);
        }
        col
    };
    let cols: Vec<Vec<BigInt>> = monos.iter().map(|&(i, j)| column(i, j)).collect();
    let m = IntegerMatrix::from_fn(n - extra / 2, monos.len(), |r, c| cols[c][r].clone());
    let ker = crate::exactlin::kernel_basis(&m);
    assert_eq!(ker.rank(), 1, "relation is unique");
    let v = ker.basis().row(0).to_vec();
    let lead = monos.iter().position(|&m| m == (top, 0)).unwrap();
    let sign = v[lead].clone();
    assert!(sign == BigInt::from(1) || sign == BigInt::from(-1));
    let mut text = format!("ell {ell}\n");
    for (k, &(i, j)) in monos.iter().enumerate() {
        let c = &v[k] * &sign;
        if c != BigInt::from(0) {
            text.push_str(&format!("{i} {j} {c}\n"));
        }
    }
    text
}

#[test]
fn fixtures_match_q_expansion() {
    for (ell, file) in [(2, "phi_2.txt"), (3, "phi_3.txt")] {
        let derived = ModularPolynomial::parse(&phi_from_q_expansion(ell), "derived").unwrap();
        assert_eq!(load_modular_polynomial(&fixture(file)).unwrap(), derived, "Phi_{ell}");
    }
}

#[test]
fn modular_polynomial_shortcut_agrees() {
    let phi5 = ModularPolynomial::parse(&phi_from_q_expansion(5), "derived").unwrap();
    let mut applied = 0;
    for p in [13u64, 97, 101] {
        let m = GraphModule::edge(p, 5, 0).unwrap();
        applied += m.modular_polynomial_shortcut(&phi5).unwrap();
    }
    assert!(applied > 0);
    let m = GraphModule::edge(7, 11, 0).unwrap();
    assert!(m.modular_polynomial_shortcut(&phi5).is_err());
}
