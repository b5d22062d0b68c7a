//! Derived calculus against classical coordinate formulas.

use diracwb_core::corpus::{heisenberg, perturbed_so3, sl2, sl2_bialgebra, so3};
use diracwb_core::geometry::{
    i_n, interior, trivector_on_forms, unit, AlgebroidStructure, Bivector, Endomorphism, TwoForm,
};
use diracwb_core::kernel::{form_components, one_form, vector_components, vector_field};
use diracwb_core::linalg::{inverse, Matrix};
use diracwb_core::proto::check_proto;
use diracwb_core::{int, Poly, Superfunction as S};
use proptest::prelude::*;

fn poly(n: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..=1, n), -2i64..=2), 0..=3).prop_map(|terms| {
        let mut p = Poly::zero();
        for (e, c) in terms {
            p.add_term(e, int(c));
        }
        p
    })
}

fn field(n: usize) -> impl Strategy<Value = Vec<Poly>> {
    prop::collection::vec(poly(n), n)
}

/// `[X, Y]^j = X^i ∂_i Y^j - Y^i ∂_i X^j`.
fn classical_bracket(x: &[Poly], y: &[Poly]) -> Vec<Poly> {
    let n = x.len();
    (0..n)
        .map(|j| {
            let mut out = Poly::zero();
            for i in 0..n {
                out = &out + &(&x[i] * &y[j].derivative(i));
                out = &out - &(&y[i] * &x[j].derivative(i));
            }
            out
        })
        .collect()
}

/// Jacobiator of structure constants on basis triples.
fn jacobi_holds(g: &AlgebroidStructure) -> bool {
    let r = g.rank();
    let c = |k: usize, a: usize, b: usize| g.structure_function(k, a, b).constant_term();
    for a in 0..r {
        for b in 0..r {
            for d in 0..r {
                for out in 0..r {
                    let mut total = int(0);
                    for (x, y, z) in [(a, b, d), (b, d, a), (d, a, b)] {
                        for k in 0..r {
                            total += c(k, x, y) * c(out, k, z);
                        }
                    }
                    if total != int(0) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[test]
fn mu_squared_vanishes_iff_jacobi() {
    for g in [so3(), sl2(), heisenberg(), perturbed_so3()] {
        assert_eq!(g.check().passed(), jacobi_holds(&g));
    }
    assert!(!jacobi_holds(&perturbed_so3()));
    for n in 1..=3 {
        assert!(AlgebroidStructure::tangent(n).check().passed());
    }
}

/// Skew matrices `D_c` of the cobracket `δ(e_c) = Σ D_c[a][b] e_a ⊗ e_b`.
fn cobracket(gamma: &S, r: usize) -> Vec<Matrix> {
    (0..r)
        .map(|c| {
            let mut m = Matrix::zeros(r, r);
            for a in 0..r {
                for b in a + 1..r {
                    let v = gamma.odd_coefficient(&[c], &[a, b]);
                    m.set(a, b, v.clone());
                    m.set(b, a, -&v);
                }
            }
            m
        })
        .collect()
}

fn ad(g: &AlgebroidStructure, x: usize) -> Matrix {
    let r = g.rank();
    let mut m = Matrix::zeros(r, r);
    for a in 0..r {
        for c in 0..r {
            m.set(c, a, g.structure_function(c, x, a));
        }
    }
    m
}

/// `δ[x,y] = ad_x δy - ad_y δx` and Jacobi for the dual bracket.
fn is_lie_bialgebra(g: &AlgebroidStructure, d: &[Matrix]) -> bool {
    let r = g.rank();
    let act = |x: usize, m: &Matrix| {
        let a = ad(g, x);
        a.mul(m).add(&m.mul(&a.transpose()))
    };
    for x in 0..r {
        for y in 0..r {
            let mut lhs = Matrix::zeros(r, r);
            for c in 0..r {
                lhs = lhs.add(&d[c].scale(&g.structure_function(c, x, y)));
            }
            if lhs != act(x, &d[y]).sub(&act(y, &d[x])) {
                return false;
            }
        }
    }
    let dual = AlgebroidStructure::lie_algebra(r, |a, b| {
        (0..r).map(|c| d[c].get(a, b).constant_term()).collect()
    });
    jacobi_holds(&dual)
}

#[test]
fn sl2_bialgebra_cocycle_and_perturbations() {
    let p = sl2_bialgebra();
    let g = sl2();
    assert!(is_lie_bialgebra(&g, &cobracket(&p.gamma, 3)));
    assert!(check_proto(&p).passed());
    let mut disagreements = 0;
    let mut failures = 0;
    for a in 0..3 {
        for b in a + 1..3 {
            for c in 0..3 {
                let bump = (&(&S::theta(a) * &S::theta(b)) * &S::xi(c)).scale(&int(1));
                let mut q = p.clone();
                q.gamma = &q.gamma + &bump;
                let oracle = is_lie_bialgebra(&g, &cobracket(&q.gamma, 3));
                let kernel = check_proto(&q).passed();
                if oracle != kernel {
                    disagreements += 1;
                }
                if !kernel {
                    failures += 1;
                }
            }
        }
    }
    assert_eq!(disagreements, 0);
    assert!(failures > 0);
}

#[test]
fn unit_matrix_identities() {
    // {Id, α} = kα on k-forms.
    let id = Endomorphism::identity(3);
    let forms = [
        S::xi(0),
        &S::xi(0) * &S::xi(2),
        &(&S::xi(0) * &S::xi(1)) * &S::xi(2),
    ];
    for (k, alpha) in forms.iter().enumerate() {
        assert_eq!(i_n(&id, alpha), alpha.scale(&int(k as i64 + 1)));
    }
    // With W = P^{-1} the bracket {σ, π} is +Id in these conventions, so
    // {σ, {π, α}} = kα on k-forms.
    let p = Matrix::from_int_rows(&[&[0, 1, 0, 2], &[-1, 0, 3, 0], &[0, -3, 0, 1], &[-2, 0, -1, 0]]);
    let pi = Bivector::from_matrix(&p);
    let sigma = TwoForm::from_matrix(&inverse(&p).unwrap());
    assert_eq!(sigma.element.bracket(&pi.element), Endomorphism::identity(4).element());
    let forms = [S::xi(3), &S::xi(0) * &S::xi(2), &(&S::xi(0) * &S::xi(1)) * &S::xi(3)];
    for (k, alpha) in forms.iter().enumerate() {
        let got = sigma.element.bracket(&pi.element.bracket(alpha));
        assert_eq!(got, alpha.scale(&int(k as i64 + 1)));
    }
}

#[test]
fn i_n_of_a_two_form_is_twice_the_composed_form() {
    let w = TwoForm::from_matrix(&Matrix::from_int_rows(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]]));
    let n = Endomorphism::new(Matrix::from_int_rows(&[&[2, 0, 0], &[0, 2, 0], &[1, 3, 5]]));
    let wn = w.compose(&n).unwrap();
    assert_eq!(i_n(&n, &w.element), wn.element.scale(&int(2)));
}

#[test]
fn d_n_of_closed_form_is_minus_twice_d_of_composed_form() {
    let alg = AlgebroidStructure::tangent(3);
    let w = TwoForm::from_matrix(&Matrix::from_int_rows(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]]));
    let mut m = Matrix::zeros(3, 3);
    m.set(0, 0, Poly::var(2));
    m.set(1, 1, Poly::var(2));
    m.set(2, 0, Poly::var(1));
    let n = Endomorphism::new(m);
    let wn = w.compose(&n).unwrap();
    assert!(!alg.d(&wn.element).is_zero());
    assert_eq!(alg.d_n(&n, &w.element), alg.d(&wn.element).scale(&int(-2)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schouten_of_vector_fields_is_the_classical_bracket(x in field(3), y in field(3)) {
        let alg = AlgebroidStructure::tangent(3);
        let got = vector_components(&alg.schouten(&vector_field(&x), &vector_field(&y)), 3);
        prop_assert_eq!(got, classical_bracket(&x, &y));
    }

    #[test]
    fn d_of_functions_is_the_gradient(f in poly(3)) {
        let alg = AlgebroidStructure::tangent(3);
        let got = form_components(&alg.d(&S::from_poly(&f)), 3);
        let grad: Vec<Poly> = (0..3).map(|i| f.derivative(i)).collect();
        prop_assert_eq!(got, grad);
    }

    #[test]
    fn d_of_one_forms_is_the_curl(a in field(3), x in field(3), y in field(3)) {
        // dα(X, Y) = X α(Y) - Y α(X) - α([X, Y]) with α(X) = <α, X>.
        let alg = AlgebroidStructure::tangent(3);
        let alpha = one_form(&a);
        let pairing = |v: &[Poly]| interior(&vector_field(v), &alpha).coefficient(&Default::default());
        let deriv = |v: &[Poly], f: &Poly| (0..3).fold(Poly::zero(), |acc, i| &acc + &(&v[i] * &f.derivative(i)));
        let expected = &(&deriv(&x, &pairing(&y)) - &deriv(&y, &pairing(&x))) - &pairing(&classical_bracket(&x, &y));
        let got = diracwb_core::geometry::evaluate_form(&alg.d(&alpha), &[x.clone(), y.clone()]);
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn schouten_square_against_bracket_of_forms(p in prop::collection::vec(poly(3), 3), a in 0usize..3, b in 0usize..3) {
        // ½[π,π](ξ1, ξ2) = [πξ1, πξ2] - π[ξ1, ξ2]_π
        let alg = AlgebroidStructure::tangent(3);
        let mut m = Matrix::zeros(3, 3);
        for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            m.set(i, j, p[k].clone());
            m.set(j, i, -&p[k]);
        }
        let pi = Bivector::from_matrix(&m);
        let (xi1, xi2) = (unit(3, a), unit(3, b));
        let sq = alg.schouten(&pi.element, &pi.element);
        let lhs: Vec<Poly> = trivector_on_forms(&sq, &xi1, &xi2, 3).iter().map(|v| v.scale(&diracwb_core::rat(1, 2))).collect();
        let bracket_forms = form_components(&alg.bracket_pi(&pi, &one_form(&xi1), &one_form(&xi2)), 3);
        let first = alg.section_bracket(&pi.map(&xi1), &pi.map(&xi2));
        let second = pi.map(&bracket_forms);
        let rhs: Vec<Poly> = first.iter().zip(&second).map(|(u, v)| u - v).collect();
        prop_assert_eq!(lhs, rhs);
    }
}
