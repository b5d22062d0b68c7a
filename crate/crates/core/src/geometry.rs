//! Lie algebroids and their calculus, all derived from the structure element
//! `mu` of bidegree (1,2) through the big bracket.

use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{
    form_components, one_form, vector_components, vector_field, Bidegree, Monomial, Superfunction,
};
use crate::linalg::Matrix;
use crate::poly::{int, rat, Poly, Rational};
use crate::report::{CheckReport, Regime};

pub const STRUCTURE: Bidegree = Bidegree::new(1, 2);
pub const SECTION: Bidegree = Bidegree::new(1, 0);
pub const ONE_FORM: Bidegree = Bidegree::new(0, 1);
pub const BIVECTOR: Bidegree = Bidegree::new(2, 0);
pub const TWO_FORM: Bidegree = Bidegree::new(0, 2);

type S = Superfunction;

/// A Lie algebroid structure (or a candidate one) on a vector bundle of rank
/// `rank` over `R^base_dim`.
///
/// With the generator table `{x, p} = 1`, `{xi, theta} = 1`, the element
/// `mu = -rho^i_a xi^a p_i - 1/2 c^c_ab xi^a xi^b theta_c` has anchor
/// `rho` and bracket `[e_a, e_b] = c^c_ab e_c` under the derived bracket
/// `[X,Y] = {{X,mu},Y}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebroidStructure {
    base_dim: usize,
    rank: usize,
    mu: Superfunction,
}

impl AlgebroidStructure {
    pub fn from_mu(base_dim: usize, rank: usize, mu: Superfunction) -> Result<Self> {
        mu.expect_bidegree("mu", STRUCTURE)?;
        if mu.base_arity() > base_dim {
            return Err(Error::DimensionMismatch {
                expected: base_dim,
                found: mu.base_arity(),
            });
        }
        let momenta = mu
            .terms()
            .map(|(m, _)| m.p_exponents().len())
            .max()
            .unwrap_or(0);
        if momenta > base_dim {
            return Err(Error::DimensionMismatch {
                expected: base_dim,
                found: momenta,
            });
        }
        if mu.fiber_arity() > rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: mu.fiber_arity(),
            });
        }
        Ok(Self { base_dim, rank, mu })
    }

    /// `anchor` is `base_dim x rank`; `bracket(a, b)` gives the components
    /// of `[e_a, e_b]` and is only consulted for `a < b`.
    pub fn from_anchor_and_brackets(
        base_dim: usize,
        rank: usize,
        anchor: &Matrix,
        bracket: impl Fn(usize, usize) -> Vec<Poly>,
    ) -> Self {
        assert_eq!((anchor.nrows(), anchor.ncols()), (base_dim, rank));
        let mut mu = S::zero();
        for i in 0..base_dim {
            for a in 0..rank {
                let r = anchor.get(i, a);
                if !r.is_zero() {
                    mu -= &(&S::xi(a) * &S::p(i)).scale_poly(r);
                }
            }
        }
        for a in 0..rank {
            for b in a + 1..rank {
                let comps = bracket(a, b);
                for (c, coeff) in comps.iter().enumerate() {
                    if !coeff.is_zero() {
                        let t = &(&S::xi(a) * &S::xi(b)) * &S::theta(c);
                        mu -= &t.scale_poly(coeff);
                    }
                }
            }
        }
        Self { base_dim, rank, mu }
    }

    /// The tangent bundle of `R^n` with coordinate frames.
    pub fn tangent(n: usize) -> Self {
        Self::from_anchor_and_brackets(n, n, &Matrix::identity(n), |_, _| vec![])
    }

    /// A Lie algebra over a point from `[e_a, e_b] = Σ_c constants[a][b][c] e_c`.
    pub fn lie_algebra(rank: usize, constants: impl Fn(usize, usize) -> Vec<Rational>) -> Self {
        Self::from_anchor_and_brackets(0, rank, &Matrix::zeros(0, rank), |a, b| {
            constants(a, b).into_iter().map(Poly::constant).collect()
        })
    }

    /// Lie algebra given by the nonzero brackets `(a, b, [c...])` with `a < b`.
    pub fn lie_algebra_from_table(rank: usize, table: &[(usize, usize, Vec<i64>)]) -> Self {
        Self::lie_algebra(rank, |a, b| {
            table
                .iter()
                .find(|(i, j, _)| *i == a && *j == b)
                .map(|(_, _, v)| v.iter().map(|&n| int(n)).collect())
                .unwrap_or_default()
        })
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mu(&self) -> &Superfunction {
        &self.mu
    }

    /// `rho^i_a`, a `base_dim x rank` matrix.
    pub fn anchor_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.base_dim, self.rank);
        for i in 0..self.base_dim {
            for a in 0..self.rank {
                let mut key = vec![0; i + 1];
                key[i] = 1;
                let fiber = Monomial::new(vec![], key, 1 << a, 0);
                m.set(i, a, -self.mu.coefficient(&fiber));
            }
        }
        m
    }

    /// `c^c_ab`, the structure functions.
    pub fn structure_function(&self, c: usize, a: usize, b: usize) -> Poly {
        -self.mu.odd_coefficient(&[a, b], &[c])
    }

    pub fn has_constant_coefficients(&self) -> bool {
        !self.mu.has_base_dependence()
    }

    pub fn check(&self) -> CheckReport {
        check_lie_algebroid(&self.mu).expect("validated bidegree")
    }

    /// Schouten bracket `{{X,mu},Y}` of multivectors.
    pub fn schouten(&self, x: &S, y: &S) -> S {
        schouten(&self.mu, x, y)
    }

    pub fn anchor_apply(&self, x: &S, f: &Poly) -> Poly {
        anchor_apply(&self.mu, x, f)
    }

    pub fn d(&self, alpha: &S) -> S {
        differential(&self.mu, alpha)
    }

    pub fn lie_derivative(&self, x: &S, alpha: &S) -> S {
        lie_derivative(&self.mu, x, alpha)
    }

    pub fn d_n(&self, n: &Endomorphism, alpha: &S) -> S {
        d_n(&self.mu, n, alpha)
    }

    /// Bracket of sections given by components.
    pub fn section_bracket(&self, u: &[Poly], v: &[Poly]) -> Vec<Poly> {
        vector_components(&self.schouten(&vector_field(u), &vector_field(v)), self.rank)
    }

    pub fn nijenhuis_torsion(&self, n: &Endomorphism, u1: &[Poly], u2: &[Poly]) -> Vec<Poly> {
        nijenhuis_torsion(self, n, u1, u2)
    }

    /// `TN(e_a, e_b)` for all `a < b`, omitting zero values.
    pub fn torsion_on_basis(&self, n: &Endomorphism) -> Vec<((usize, usize), Vec<Poly>)> {
        let mut out = Vec::new();
        for a in 0..self.rank {
            for b in a + 1..self.rank {
                let t = self.nijenhuis_torsion(n, &unit(self.rank, a), &unit(self.rank, b));
                if t.iter().any(|p| !p.is_zero()) {
                    out.push(((a, b), t));
                }
            }
        }
        out
    }

    pub fn is_nijenhuis(&self, n: &Endomorphism) -> bool {
        self.torsion_on_basis(n).is_empty()
    }

    pub fn bracket_pi(&self, pi: &Bivector, xi1: &S, xi2: &S) -> S {
        bracket_pi(&self.mu, pi, xi1, xi2)
    }

    /// Verdict on `TN = 0` with the nonzero basis values as witnesses.
    pub fn torsion_report(&self, n: &Endomorphism) -> CheckReport {
        let mut r = CheckReport::new("nijenhuis-torsion");
        if !(self.has_constant_coefficients() && n.matrix.is_constant()) {
            r.regime = Regime::SampledPolynomial;
            r.note("torsion is tensorial: basis values over Q(x) decide it");
        }
        let nonzero = self.torsion_on_basis(n);
        let pairs = self.rank * self.rank.saturating_sub(1) / 2;
        r.condition("TN(e_a, e_b) = 0 for a < b", nonzero.is_empty(), || format!("{} of {pairs} pairs nonzero", nonzero.len()));
        for ((a, b), t) in nonzero {
            r.witness(format!("TN(e{}, e{}) = {}", a + 1, b + 1, render_vector(&t)));
        }
        if r.passed() {
            r.note(format!("TN = 0 on all {pairs} basis pairs"));
        }
        r
    }
}

pub fn unit(n: usize, i: usize) -> Vec<Poly> {
    let mut v = vec![Poly::zero(); n];
    v[i] = Poly::one();
    v
}

pub fn render_vector(v: &[Poly]) -> String {
    let parts: Vec<String> = v.iter().map(|p| p.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// `{mu, mu} = 0`. On failure also searches `d∘d` on coordinates and the
/// coframe for a nonzero witness.
pub fn check_lie_algebroid(mu: &S) -> Result<CheckReport> {
    mu.expect_bidegree("mu", STRUCTURE)?;
    let mut r = CheckReport::new("lie-algebroid");
    if mu.has_base_dependence() {
        r.regime = Regime::SampledPolynomial;
        r.note("polynomial coefficients: the residual is compared to zero identically");
    }
    let residual = mu.bracket(mu);
    let holds = r.condition("{mu,mu} = 0", residual.is_zero(), || residual.to_string());
    if !holds {
        let n = mu.base_arity().max(
            mu.terms()
                .map(|(m, _)| m.p_exponents().len())
                .max()
                .unwrap_or(0),
        );
        let candidates = (0..n)
            .map(S::x)
            .chain((0..mu.fiber_arity()).map(S::xi));
        for f in candidates {
            let dd = differential(mu, &differential(mu, &f));
            if !dd.is_zero() {
                r.witness(format!("d(d({f})) = {dd}"));
                break;
            }
        }
    }
    Ok(r)
}

pub fn schouten(mu: &S, x: &S, y: &S) -> S {
    x.bracket(mu).bracket(y)
}

/// `rho(X) f = {{X, mu}, f}`.
pub fn anchor_apply(mu: &S, x: &S, f: &Poly) -> Poly {
    let v = schouten(mu, x, &S::from_poly(f));
    v.coefficient(&Monomial::one())
}

/// `d = {mu, .}`.
pub fn differential(mu: &S, alpha: &S) -> S {
    mu.bracket(alpha)
}

/// `i_X alpha = {X, alpha}`.
pub fn interior(x: &S, alpha: &S) -> S {
    x.bracket(alpha)
}

/// `L_X = i_X d + d i_X`.
pub fn lie_derivative(mu: &S, x: &S, alpha: &S) -> S {
    &interior(x, &differential(mu, alpha)) + &differential(mu, &interior(x, alpha))
}

/// `i_N = {N, .}` on forms.
pub fn i_n(n: &Endomorphism, alpha: &S) -> S {
    n.element().bracket(alpha)
}

/// `d_N = [i_N, d] = i_N d - d i_N`.
pub fn d_n(mu: &S, n: &Endomorphism, alpha: &S) -> S {
    &i_n(n, &differential(mu, alpha)) - &differential(mu, &i_n(n, alpha))
}

/// `TN(u1,u2) = [Nu1,Nu2] - N[Nu1,u2] - N[u1,Nu2] + N^2[u1,u2]`.
pub fn nijenhuis_torsion(alg: &AlgebroidStructure, n: &Endomorphism, u1: &[Poly], u2: &[Poly]) -> Vec<Poly> {
    let nu1 = n.apply(u1);
    let nu2 = n.apply(u2);
    let b = |x: &[Poly], y: &[Poly]| alg.section_bracket(x, y);
    let t1 = b(&nu1, &nu2);
    let t2 = n.apply(&b(&nu1, u2));
    let t3 = n.apply(&b(u1, &nu2));
    let t4 = n.apply(&n.apply(&b(u1, u2)));
    (0..t1.len())
        .map(|i| &(&(&t1[i] - &t2[i]) - &t3[i]) + &t4[i])
        .collect()
}

/// `pi xi = {pi, xi}` as a section.
pub fn map_of_bivector(pi: &S, xi: &S) -> S {
    pi.bracket(xi)
}

/// `omega x = {omega, x} = -i_x omega` as a one-form.
pub fn map_of_form(omega: &S, x: &S) -> S {
    omega.bracket(x)
}

/// `[xi1, xi2]_pi = L_{pi xi1} xi2 - L_{pi xi2} xi1 - d(pi(xi1, xi2))`.
pub fn bracket_pi(mu: &S, pi: &Bivector, xi1: &S, xi2: &S) -> S {
    let p1 = map_of_bivector(&pi.element, xi1);
    let p2 = map_of_bivector(&pi.element, xi2);
    let value = S::from_poly(&pi.evaluate_elements(xi1, xi2));
    &(&lie_derivative(mu, &p1, xi2) - &lie_derivative(mu, &p2, xi1)) - &differential(mu, &value)
}

/// Successive contraction `{...{{m, a1}, a2}..., ak}`: the value of a
/// multivector on forms (or of a form on vectors with the roles swapped).
pub fn contract(m: &S, args: &[S]) -> S {
    args.iter().fold(m.clone(), |acc, a| acc.bracket(a))
}

/// `alpha(X1, ..., Xk) = i_{Xk} ... i_{X1} alpha`.
pub fn evaluate_form(alpha: &S, vectors: &[Vec<Poly>]) -> Poly {
    let mut acc = alpha.clone();
    for v in vectors {
        acc = interior(&vector_field(v), &acc);
    }
    acc.coefficient(&Monomial::one())
}

/// The vector `P(xi1, xi2) = {{P, xi2}, xi1}` of a trivector on two
/// one-forms. With this order `½[pi,pi](xi1, xi2) = [pi xi1, pi xi2] -
/// pi[xi1, xi2]_pi` holds for the Schouten bracket `{{X,mu},Y}`.
pub fn trivector_on_forms(p: &S, xi1: &[Poly], xi2: &[Poly], rank: usize) -> Vec<Poly> {
    vector_components(&contract(p, &[one_form(xi2), one_form(xi1)]), rank)
}

/// A bivector `pi = Σ_{a<b} P_ab theta_a theta_b`; its map `xi -> pi xi`
/// has matrix `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivector {
    pub rank: usize,
    pub element: Superfunction,
}

impl Bivector {
    pub fn new(rank: usize, element: S) -> Result<Self> {
        element.expect_bidegree("bivector", BIVECTOR)?;
        if element.fiber_arity() > rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: element.fiber_arity(),
            });
        }
        Ok(Self { rank, element })
    }

    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            element: S::zero(),
        }
    }

    /// From the upper triangle of a skew matrix.
    pub fn from_matrix(p: &Matrix) -> Self {
        let r = p.nrows();
        let mut element = S::zero();
        for a in 0..r {
            for b in a + 1..r {
                let c = p.get(a, b);
                if !c.is_zero() {
                    element += &(&S::theta(a) * &S::theta(b)).scale_poly(c);
                }
            }
        }
        Self { rank: r, element }
    }

    pub fn matrix(&self) -> Matrix {
        skew_matrix(self.rank, |a, b| self.element.odd_coefficient(&[], &[a, b]))
    }

    pub fn map(&self, xi: &[Poly]) -> Vec<Poly> {
        vector_components(&map_of_bivector(&self.element, &one_form(xi)), self.rank)
    }

    /// `pi(xi1, xi2) = <xi2, pi xi1>`.
    pub fn evaluate(&self, xi1: &[Poly], xi2: &[Poly]) -> Poly {
        self.evaluate_elements(&one_form(xi1), &one_form(xi2))
    }

    fn evaluate_elements(&self, xi1: &S, xi2: &S) -> Poly {
        contract(&self.element, &[xi1.clone(), xi2.clone()]).coefficient(&Monomial::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rank: self.rank,
            element: self.element.scale(c),
        }
    }

    pub fn add(&self, other: &Bivector) -> Self {
        Self {
            rank: self.rank,
            element: &self.element + &other.element,
        }
    }
}

/// A two-form `omega = Σ_{a<b} W_ab xi^a xi^b`; its map `x -> omega x`
/// has matrix `W` and `omega(x, y) = x^T W y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoForm {
    pub rank: usize,
    pub element: Superfunction,
}

impl TwoForm {
    pub fn new(rank: usize, element: S) -> Result<Self> {
        element.expect_bidegree("two-form", TWO_FORM)?;
        if element.fiber_arity() > rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: element.fiber_arity(),
            });
        }
        Ok(Self { rank, element })
    }

    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            element: S::zero(),
        }
    }

    pub fn from_matrix(w: &Matrix) -> Self {
        let r = w.nrows();
        let mut element = S::zero();
        for a in 0..r {
            for b in a + 1..r {
                let c = w.get(a, b);
                if !c.is_zero() {
                    element += &(&S::xi(a) * &S::xi(b)).scale_poly(c);
                }
            }
        }
        Self { rank: r, element }
    }

    pub fn matrix(&self) -> Matrix {
        skew_matrix(self.rank, |a, b| self.element.odd_coefficient(&[a, b], &[]))
    }

    pub fn map(&self, x: &[Poly]) -> Vec<Poly> {
        form_components(&map_of_form(&self.element, &vector_field(x)), self.rank)
    }

    pub fn evaluate(&self, x: &[Poly], y: &[Poly]) -> Poly {
        evaluate_form(&self.element, &[x.to_vec(), y.to_vec()])
    }

    /// `omega_N` with coefficient matrix `W N`; a two-form when `W N` is skew.
    pub fn compose(&self, n: &Endomorphism) -> Result<TwoForm> {
        let wn = self.matrix().mul(&n.matrix);
        if !wn.is_skew() {
            return Err(Error::NotSkew);
        }
        Ok(TwoForm::from_matrix(&wn))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rank: self.rank,
            element: self.element.scale(c),
        }
    }
}

fn skew_matrix(r: usize, coeff: impl Fn(usize, usize) -> Poly) -> Matrix {
    let mut m = Matrix::zeros(r, r);
    for a in 0..r {
        for b in a + 1..r {
            let c = coeff(a, b);
            m.set(b, a, -&c);
            m.set(a, b, c);
        }
    }
    m
}

/// A (1,1)-tensor stored by its row-major coefficient matrix `N[a][b] = N^a_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    pub matrix: Matrix,
}

impl Endomorphism {
    pub fn new(matrix: Matrix) -> Self {
        assert!(matrix.is_square(), "endomorphism matrix must be square");
        Self { matrix }
    }

    pub fn identity(r: usize) -> Self {
        Self::new(Matrix::identity(r))
    }

    pub fn rank(&self) -> usize {
        self.matrix.nrows()
    }

    /// The embedded element `N^a_b xi^b theta_a` of bidegree (1,1).
    pub fn element(&self) -> S {
        let mut e = S::zero();
        for a in 0..self.rank() {
            for b in 0..self.rank() {
                let c = self.matrix.get(a, b);
                if !c.is_zero() {
                    e += &(&S::xi(b) * &S::theta(a)).scale_poly(c);
                }
            }
        }
        e
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        self.matrix.apply(v)
    }

    pub fn compose(&self, other: &Endomorphism) -> Self {
        Self::new(self.matrix.mul(&other.matrix))
    }

    pub fn pow(&self, k: u32) -> Self {
        Self::new(self.matrix.pow(k))
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.matrix.transpose())
    }
}

/// `N = pi ∘ omega`, matrix `P W`.
pub fn compose_bivector_form(pi: &Bivector, omega: &TwoForm) -> Endomorphism {
    Endomorphism::new(pi.matrix().mul(&omega.matrix()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeometricTensor {
    Bivector(Bivector),
    TwoForm(TwoForm),
    Endo(Endomorphism),
    KForm(Superfunction),
    KVector(Superfunction),
}

impl GeometricTensor {
    pub fn kind(&self) -> &'static str {
        match self {
            GeometricTensor::Bivector(_) => "bivector",
            GeometricTensor::TwoForm(_) => "twoform",
            GeometricTensor::Endo(_) => "endo",
            GeometricTensor::KForm(_) => "form",
            GeometricTensor::KVector(_) => "multivector",
        }
    }
}

impl fmt::Display for GeometricTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometricTensor::Bivector(b) => write!(f, "{}", b.element),
            GeometricTensor::TwoForm(w) => write!(f, "{}", w.element),
            GeometricTensor::Endo(n) => write!(f, "{}", n.matrix),
            GeometricTensor::KForm(s) | GeometricTensor::KVector(s) => write!(f, "{s}"),
        }
    }
}

/// `½` as a rational, for formulas that need it.
pub fn half() -> Rational {
    rat(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    fn so3() -> AlgebroidStructure {
        AlgebroidStructure::lie_algebra_from_table(
            3,
            &[(0, 1, vec![0, 0, 1]), (1, 2, vec![1, 0, 0]), (0, 2, vec![0, -1, 0])],
        )
    }

    #[test]
    fn tangent_and_so3_are_lie_algebroids() {
        for n in 1..=3 {
            assert!(AlgebroidStructure::tangent(n).check().passed());
        }
        assert!(so3().check().passed());
    }

    #[test]
    fn structure_round_trips() {
        let g = so3();
        assert_eq!(g.structure_function(2, 0, 1), Poly::one());
        assert_eq!(g.structure_function(2, 1, 0), Poly::from_int(-1));
        assert_eq!(g.structure_function(1, 0, 2), Poly::from_int(-1));
        assert_eq!(AlgebroidStructure::tangent(2).anchor_matrix(), Matrix::identity(2));
        assert_eq!(g.schouten(&S::theta(0), &S::theta(1)), S::theta(2));
    }

    #[test]
    fn differentials() {
        let t = AlgebroidStructure::tangent(1);
        assert_eq!(t.d(&S::x(0)), S::xi(0));
        let g = so3();
        assert_eq!(g.d(&S::xi(2)), -(&S::xi(0) * &S::xi(1)));
    }

    #[test]
    fn anchor_and_brackets_on_the_plane() {
        let t = AlgebroidStructure::tangent(2);
        assert!(t.schouten(&S::theta(0), &S::theta(1)).is_zero());
        let y = S::theta(1).scale_poly(&x(0));
        assert_eq!(t.schouten(&S::theta(0), &y), S::theta(1));
        let xf = S::theta(0).scale_poly(&x(1));
        assert_eq!(t.anchor_apply(&xf, &x(0).pow(2)), (&x(0) * &x(1)).scale(&int(2)));
        assert_eq!(t.anchor_apply(&S::theta(0), &x(0)), Poly::one());
        assert!(so3().anchor_apply(&S::theta(0), &Poly::from_int(5)).is_zero());
    }

    #[test]
    fn lie_derivative_of_a_one_form() {
        let t = AlgebroidStructure::tangent(1);
        let a = S::xi(0).scale_poly(&x(0));
        assert_eq!(t.lie_derivative(&S::theta(0), &a), S::xi(0));
        assert!(t.lie_derivative(&S::zero(), &a).is_zero());
    }

    #[test]
    fn identity_scales_forms_by_degree() {
        let id = Endomorphism::identity(3);
        let w = &S::xi(0) * &S::xi(2);
        assert_eq!(i_n(&id, &w), w.scale(&int(2)));
        assert_eq!(i_n(&id, &S::xi(1)), S::xi(1));
    }

    #[test]
    fn maps_have_the_stored_matrices() {
        let p = Matrix::from_int_rows(&[&[0, 2, -1], &[-2, 0, 3], &[1, -3, 0]]);
        let pi = Bivector::from_matrix(&p);
        assert_eq!(pi.matrix(), p);
        let xi = vec![Poly::from_int(1), Poly::from_int(4), Poly::from_int(-2)];
        assert_eq!(pi.map(&xi), p.apply(&xi));
        let w = TwoForm::from_matrix(&p);
        assert_eq!(w.map(&xi), p.apply(&xi));
        let y = vec![Poly::from_int(3), Poly::zero(), Poly::one()];
        let expected = crate::kernel::pair(&xi, &p.apply(&y));
        assert_eq!(w.evaluate(&xi, &y), expected);
        assert_eq!(pi.evaluate(&xi, &y), crate::kernel::pair(&y, &p.apply(&xi)));
    }

    #[test]
    fn torsion_of_identity_vanishes() {
        let t = AlgebroidStructure::tangent(2);
        assert!(t.is_nijenhuis(&Endomorphism::identity(2)));
    }
}
