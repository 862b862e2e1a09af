use std::path::Path;

use chargroup::galois::DEFAULT_SEED;
use chargroup::ssmod::load_modular_polynomial;
use chargroup::{GraphModule, Label};
use num_bigint::BigInt;

fn fixture(ell: u64) -> chargroup::ssmod::ModularPolynomial {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("fixtures/modpoly/phi_{ell}.txt"));
    load_modular_polynomial(&path).unwrap()
}

/// Column `i` of `T_l` counts, for each supersingular `j_k`, the subgroups of
/// order `l` of `E_i` with quotient `j_k`; these are the roots of `Phi_l(j_i, Y)`.
#[test]
fn hecke_columns_are_modular_polynomial_roots() {
    for ell in [2, 3] {
        let phi = fixture(ell);
        for p in [5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            if p == ell {
                continue;
            }
            let g = GraphModule::vertex(p, 3).unwrap();
            let level = g.tower.level(2).unwrap();
            let t = g.operator(Label::T(ell)).unwrap();
            for (i, v) in g.vertices.iter().enumerate() {
                let roots = level.roots(&phi.specialize(&level, &v.j), DEFAULT_SEED);
                let mut column = vec![BigInt::from(0); g.size()];
                for (root, mult) in roots {
                    let k = g.vertices.iter().position(|w| w.j == root).unwrap_or_else(|| {
                        panic!("p = {p}: root {} of Phi_{ell} is not supersingular", level.format(&root))
                    });
                    column[k] += mult;
                }
                assert_eq!(column, t.column(i), "p = {p}, l = {ell}, vertex {}", level.format(&v.j));
            }
        }
    }
}
