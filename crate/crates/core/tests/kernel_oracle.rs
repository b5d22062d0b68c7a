//! The big bracket against an independent recursive Leibniz expansion, and
//! its algebraic laws on random homogeneous monomials.

use diracwb_core::kernel::Monomial;
use diracwb_core::{int, Superfunction as S};
use proptest::prelude::*;

/// Generators of a monomial in canonical order: x powers, p powers, then
/// ξ ascending, then θ ascending.
fn factors(m: &Monomial) -> Vec<S> {
    let mut out = Vec::new();
    for (i, &e) in m.x_exponents().iter().enumerate() {
        out.extend((0..e).map(|_| S::x(i)));
    }
    for (i, &e) in m.p_exponents().iter().enumerate() {
        out.extend((0..e).map(|_| S::p(i)));
    }
    out.extend(m.xi_indices().into_iter().map(S::xi));
    out.extend(m.theta_indices().into_iter().map(S::theta));
    out
}

fn product(fs: &[S]) -> S {
    fs.iter().fold(S::one(), |acc, f| &acc * f)
}

fn parity(fs: &[S]) -> u32 {
    fs.iter().map(|f| f.parity().unwrap_or(0)).sum::<u32>() % 2
}

fn sign(k: u32) -> S {
    S::constant(int(if k % 2 == 0 { 1 } else { -1 }))
}

/// `{x_i, p_j} = δ_ij = -{p_j, x_i}` and `{ξ^a, θ_b} = δ_ab = {θ_b, ξ^a}`.
fn generator_bracket(a: &S, b: &S) -> S {
    let one = |ok: bool| if ok { S::one() } else { S::zero() };
    for i in 0..4 {
        for j in 0..4 {
            if *a == S::x(i) && *b == S::p(j) {
                return one(i == j);
            }
            if *a == S::p(j) && *b == S::x(i) {
                return if i == j { -S::one() } else { S::zero() };
            }
            if (*a == S::xi(i) && *b == S::theta(j)) || (*a == S::theta(j) && *b == S::xi(i)) {
                return one(i == j);
            }
        }
    }
    S::zero()
}

fn oracle_monomials(u: &[S], v: &[S]) -> S {
    if u.is_empty() || v.is_empty() {
        return S::zero();
    }
    if v.len() > 1 {
        // {u, g w} = {u, g} w + (-1)^{|u||g|} g {u, w}
        let (g, w) = (&v[..1], &v[1..]);
        let first = &oracle_monomials(u, g) * &product(w);
        let second = &(&sign(parity(u) * parity(g)) * &product(g)) * &oracle_monomials(u, w);
        return &first + &second;
    }
    if u.len() > 1 {
        // {g w, v} = g {w, v} + (-1)^{|w||v|} {g, v} w
        let (g, w) = (&u[..1], &u[1..]);
        let first = &product(g) * &oracle_monomials(w, v);
        let second = &(&sign(parity(w) * parity(v)) * &oracle_monomials(g, v)) * &product(w);
        return &first + &second;
    }
    generator_bracket(&u[0], &v[0])
}

fn oracle(u: &S, v: &S) -> S {
    let mut out = S::zero();
    for (m1, c1) in u.terms() {
        for (m2, c2) in v.terms() {
            let b = oracle_monomials(&factors(m1), &factors(m2));
            out += &b.scale(&(c1 * c2));
        }
    }
    out
}

fn monomial(base: usize, rank: usize) -> impl Strategy<Value = S> {
    (
        prop::collection::vec(0u32..=1, base),
        prop::collection::vec(0u32..=1, base),
        0u32..(1 << rank),
        0u32..(1 << rank),
        -3i64..=3,
    )
        .prop_map(|(x, p, xi, th, c)| {
            let c = if c == 0 { 1 } else { c };
            S::from_monomial(Monomial::new(x, p, xi, th), int(c))
        })
}

fn triple() -> impl Strategy<Value = (S, S, S)> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(n, r)| (monomial(n, r), monomial(n, r), monomial(n, r)))
}

fn par(s: &S) -> u32 {
    s.parity().unwrap_or(0)
}

#[test]
fn canonical_factorization_round_trips() {
    let m = Monomial::new(vec![2, 1], vec![0, 1], 0b101, 0b110);
    let s = S::from_monomial(m.clone(), int(5));
    assert_eq!(product(&factors(&m)).scale(&int(5)), s);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn bracket_matches_leibniz_oracle((u, v, _w) in triple()) {
        prop_assert_eq!(u.bracket(&v), oracle(&u, &v));
    }

    #[test]
    fn graded_skew_symmetry((u, v, _w) in triple()) {
        let back = v.bracket(&u).scale(&int(if par(&u) * par(&v) % 2 == 0 { -1 } else { 1 }));
        prop_assert_eq!(u.bracket(&v), back);
    }

    #[test]
    fn jacobi_identity((u, v, w) in triple()) {
        let lhs = u.bracket(&v.bracket(&w));
        let s = if par(&u) * par(&v) % 2 == 0 { 1 } else { -1 };
        let rhs = &u.bracket(&v).bracket(&w) + &v.bracket(&u.bracket(&w)).scale(&int(s));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bidegree_law((u, v, _w) in triple()) {
        let b = u.bracket(&v);
        if !b.is_zero() {
            let (bu, bv) = (u.bidegree().unwrap(), v.bidegree().unwrap());
            let got = b.bidegree().unwrap();
            prop_assert_eq!((got.p + 1, got.q + 1), (bu.p + bv.p, bu.q + bv.q));
        }
    }

    #[test]
    fn biderivation((u, v, w) in triple()) {
        let s = if par(&u) * par(&v) % 2 == 0 { 1 } else { -1 };
        let lhs = u.bracket(&(&v * &w));
        let rhs = &(&u.bracket(&v) * &w) + &(&v * &u.bracket(&w)).scale(&int(s));
        prop_assert_eq!(lhs, rhs);
    }
}
