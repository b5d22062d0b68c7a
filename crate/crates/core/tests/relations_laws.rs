//! Algebraic laws of linear relations and the torsion of graphs.

use diracwb_core::geometry::{AlgebroidStructure, Endomorphism};
use diracwb_core::linalg::{inverse, Matrix};
use diracwb_core::corpus::small_lie_algebras;
use diracwb_core::relations::{
    basis_tuples, compose, is_nijenhuis_relation, torsion_eval, torsion_value, LinearRelation, RelationChainTuple, SamplingOptions,
};
use diracwb_core::Poly;
use proptest::prelude::*;

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2i64..=2, rows * cols).prop_map(move |v| {
        let rows_v: Vec<Vec<Poly>> = v.chunks(cols.max(1)).take(rows).map(|r| r.iter().map(|&n| Poly::from_int(n)).collect()).collect();
        if cols == 0 {
            Matrix::zeros(rows, 0)
        } else {
            Matrix::from_rows(rows_v)
        }
    })
}

fn relation(dom: usize, cod: usize) -> impl Strategy<Value = LinearRelation> {
    (0..=dom + cod).prop_flat_map(move |k| int_matrix(dom + cod, k)).prop_map(move |g| LinearRelation::new(dom, cod, &g).unwrap())
}

/// Relations with one polynomial entry in each generator.
fn polynomial_relation(dom: usize, cod: usize) -> impl Strategy<Value = LinearRelation> {
    (relation(dom, cod), 0usize..dom + cod).prop_map(move |(r, row)| {
        let mut g = r.generators().clone();
        for c in 0..g.ncols() {
            let v = &g.get(row, c).clone() + &Poly::var(0);
            g.set(row, c, v);
        }
        LinearRelation::new(dom, cod, &g).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn composition_is_associative(a in relation(2, 3), b in relation(3, 2), c in relation(2, 3)) {
        let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_reverses_composition(a in relation(2, 3), b in relation(3, 3)) {
        let lhs = compose(&a, &b).unwrap().inverse();
        let rhs = compose(&b.inverse(), &a.inverse()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dual_is_an_involution(a in relation(3, 2)) {
        prop_assert_eq!(a.dual().dual(), a.clone());
        prop_assert_eq!(a.dual().dim(), 5 - a.dim());
    }

    #[test]
    fn dual_commutes_with_inverse(a in relation(2, 3)) {
        prop_assert_eq!(a.inverse().dual(), a.dual().inverse());
    }

    #[test]
    fn dual_reverses_composition(a in relation(2, 3), b in relation(3, 2)) {
        let lhs = compose(&a, &b).unwrap().dual();
        let rhs = compose(&b.dual(), &a.dual()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dual_laws_over_rational_functions(a in polynomial_relation(2, 2), b in polynomial_relation(2, 2)) {
        prop_assert_eq!(a.dual().dual(), a.clone());
        prop_assert_eq!(a.inverse().dual(), a.dual().inverse());
        prop_assert_eq!(compose(&a, &b).unwrap().dual(), compose(&b.dual(), &a.dual()).unwrap());
    }

    #[test]
    fn graphs_compose_as_matrix_products(m in int_matrix(3, 2), n in int_matrix(2, 3)) {
        // graph(m): R² → R³, graph(n): R³ → R².
        let composed = compose(&LinearRelation::graph(&m), &LinearRelation::graph(&n)).unwrap();
        prop_assert_eq!(composed, LinearRelation::graph(&n.mul(&m)));
    }

    #[test]
    fn dual_of_a_graph_is_the_graph_of_the_transpose(m in int_matrix(3, 2)) {
        prop_assert_eq!(LinearRelation::graph(&m).dual(), LinearRelation::graph(&m.transpose()));
    }

    #[test]
    fn membership_matches_the_generator_span(a in relation(2, 2), coeffs in prop::collection::vec(-3i64..=3, 4)) {
        let g = a.generators();
        let mut u = vec![Poly::zero(); 2];
        let mut v = vec![Poly::zero(); 2];
        for k in 0..g.ncols() {
            let (gu, gv) = a.generator(k);
            let c = Poly::from_int(coeffs[k]);
            for i in 0..2 {
                u[i] = &u[i] + &(&gu[i] * &c);
                v[i] = &v[i] + &(&gv[i] * &c);
            }
        }
        prop_assert!(a.contains(&u, &v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn torsion_of_the_inverse_relation(which in 0usize..11, seed in prop::collection::vec(-1i64..=1, 36), k in 1usize..=4) {
        // T(N)(u1,v1,u2,v2,α,α',α'') = T(N̄)(v1,u1,v2,u2,α'',α',α).
        let algebras = small_lie_algebras();
        let (_, g) = &algebras[which % algebras.len()];
        let r = g.rank();
        let k = k.min(2 * r);
        let gens = Matrix::from_rows((0..2 * r).map(|i| (0..k).map(|j| Poly::from_int(seed[(i * k + j) % seed.len()])).collect()).collect());
        let n = LinearRelation::new(r, r, &gens).unwrap();
        let bar = n.inverse();
        for t in basis_tuples(&n).unwrap() {
            let swapped = RelationChainTuple {
                u1: t.v1.clone(), v1: t.u1.clone(), u2: t.v2.clone(), v2: t.u2.clone(),
                alpha: t.alpha2.clone(), alpha1: t.alpha1.clone(), alpha2: t.alpha.clone(),
            };
            prop_assert_eq!(torsion_eval(&bar, g, &swapped).unwrap(), torsion_value(g, &t));
        }
        let a = is_nijenhuis_relation(&n, g, &SamplingOptions::default()).unwrap();
        let b = is_nijenhuis_relation(&bar, g, &SamplingOptions::default()).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
    }
}

fn endo(rows: &[&[i64]], poly_entry: Option<(usize, usize, Poly)>) -> Matrix {
    let mut m = Matrix::from_int_rows(rows);
    if let Some((i, j, p)) = poly_entry {
        m.set(i, j, p);
    }
    m
}

#[test]
fn torsion_of_a_graph_and_its_inverse_agree_with_the_classical_torsion() {
    let opts = SamplingOptions::default();
    let alg = AlgebroidStructure::tangent(2);
    let x = |i| Poly::var(i);
    let cases = [
        endo(&[&[1, 0], &[0, 2]], Some((0, 0, &x(0) + &Poly::one()))),
        endo(&[&[1, 0], &[0, 2]], Some((0, 0, &x(1) + &Poly::one()))),
        endo(&[&[1, 1], &[0, 1]], Some((0, 1, x(0)))),
        endo(&[&[2, 0], &[0, 1]], Some((0, 1, x(1)))),
        endo(&[&[1, 2], &[3, 1]], None),
    ];
    let mut verdicts = Vec::new();
    for m in cases {
        let graph = LinearRelation::graph(&m);
        let direct = is_nijenhuis_relation(&graph, &alg, &opts).unwrap().passed();
        let classical = alg.is_nijenhuis(&Endomorphism::new(m.clone()));
        let inverse_rel = is_nijenhuis_relation(&graph.inverse(), &alg, &opts).unwrap().passed();
        assert_eq!(direct, classical);
        assert_eq!(direct, inverse_rel);
        if let Some(inv) = inverse(&m) {
            assert_eq!(graph.inverse(), LinearRelation::graph(&inv));
        }
        verdicts.push(direct);
    }
    assert!(verdicts.contains(&true) && verdicts.contains(&false), "{verdicts:?}");
}
