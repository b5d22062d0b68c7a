//! The bigraded supercommutative algebra of functions on `T*[2]A[1]` and its
//! canonical even Poisson bracket (the big bracket).
//!
//! Generators and bidegrees:
//!
//! | generator | role                 | bidegree |
//! |-----------|----------------------|----------|
//! | `x^i`     | base coordinate      | (0,0)    |
//! | `xi^a`    | fiber coframe (form) | (0,1)    |
//! | `p_i`     | base momentum        | (1,1)    |
//! | `theta_a` | fiber frame (vector) | (1,0)    |
//!
//! `{x^i, p_j} = δ^i_j` and `{xi^a, theta_b} = δ^a_b`. The bracket has
//! bidegree (-1,-1) and its sign rules use the total degree mod 2.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{add_exponents, int, trim, Exponents, Poly, Rational};

/// Upper bound on the fiber rank (odd generators are stored as bit masks).
pub const MAX_RANK: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Bidegree {
    pub p: u32,
    pub q: u32,
}

impl Bidegree {
    pub const fn new(p: u32, q: u32) -> Self {
        Self { p, q }
    }

    pub fn total(&self) -> u32 {
        self.p + self.q
    }

    pub fn parity(&self) -> u32 {
        self.total() % 2
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Homogeneity of a superfunction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Homogeneous(Bidegree),
    Inhomogeneous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    X(usize),
    Xi(usize),
    P(usize),
    Theta(usize),
}

impl Generator {
    pub fn bidegree(&self) -> Bidegree {
        match self {
            Generator::X(_) => Bidegree::new(0, 0),
            Generator::Xi(_) => Bidegree::new(0, 1),
            Generator::P(_) => Bidegree::new(1, 1),
            Generator::Theta(_) => Bidegree::new(1, 0),
        }
    }
}

/// A canonical monomial: even exponents and ascending odd index sets, with
/// every `xi` factor written before every `theta` factor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    xi: u32,
    theta: u32,
    p: Exponents,
    x: Exponents,
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..MAX_RANK).filter(move |i| mask & (1 << i) != 0)
}

/// Sign of sorting the concatenation of two ascending index sets.
fn merge_sign(a: u32, b: u32) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0;
    for j in bits(b) {
        inversions += (a >> (j + 1)).count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn odd_sign(n: u32) -> i32 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn generator(g: Generator) -> Self {
        let mut m = Self::one();
        match g {
            Generator::X(i) => {
                m.x = vec![0; i + 1];
                m.x[i] = 1;
            }
            Generator::P(i) => {
                m.p = vec![0; i + 1];
                m.p[i] = 1;
            }
            Generator::Xi(a) => {
                assert!(a < MAX_RANK, "fiber index out of range");
                m.xi = 1 << a;
            }
            Generator::Theta(a) => {
                assert!(a < MAX_RANK, "fiber index out of range");
                m.theta = 1 << a;
            }
        }
        m
    }

    pub fn new(x: Exponents, p: Exponents, xi: u32, theta: u32) -> Self {
        Self {
            xi,
            theta,
            p: trim(p),
            x: trim(x),
        }
    }

    pub fn x_exponents(&self) -> &[u32] {
        &self.x
    }

    pub fn p_exponents(&self) -> &[u32] {
        &self.p
    }

    pub fn xi_mask(&self) -> u32 {
        self.xi
    }

    pub fn theta_mask(&self) -> u32 {
        self.theta
    }

    pub fn xi_indices(&self) -> Vec<usize> {
        bits(self.xi).collect()
    }

    pub fn theta_indices(&self) -> Vec<usize> {
        bits(self.theta).collect()
    }

    fn odd_count(&self) -> u32 {
        self.xi.count_ones() + self.theta.count_ones()
    }

    pub fn bidegree(&self) -> Bidegree {
        let np: u32 = self.p.iter().sum();
        Bidegree::new(np + self.theta.count_ones(), np + self.xi.count_ones())
    }

    pub fn parity(&self) -> u32 {
        self.odd_count() % 2
    }

    /// The odd and momentum part, with the base-coordinate exponents dropped.
    pub fn fiber_part(&self) -> Monomial {
        Monomial {
            x: Vec::new(),
            ..self.clone()
        }
    }

    /// Product with the reordering sign; `None` when an odd generator repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(i32, Monomial)> {
        let s_xi = merge_sign(self.xi, other.xi);
        let s_th = merge_sign(self.theta, other.theta);
        if s_xi == 0 || s_th == 0 {
            return None;
        }
        let cross = odd_sign(self.theta.count_ones() * other.xi.count_ones());
        Some((
            s_xi * s_th * cross,
            Monomial {
                xi: self.xi | other.xi,
                theta: self.theta | other.theta,
                p: add_exponents(&self.p, &other.p),
                x: add_exponents(&self.x, &other.x),
            },
        ))
    }

    fn even_derivative(exps: &[u32], i: usize) -> Option<(u32, Exponents)> {
        let k = exps.get(i).copied().unwrap_or(0);
        if k == 0 {
            return None;
        }
        let mut e = exps.to_vec();
        e[i] -= 1;
        Some((k, trim(e)))
    }

    fn d_x(&self, i: usize) -> Option<(i64, Monomial)> {
        let (k, x) = Self::even_derivative(&self.x, i)?;
        Some((k as i64, Monomial { x, ..self.clone() }))
    }

    fn d_p(&self, i: usize) -> Option<(i64, Monomial)> {
        let (k, p) = Self::even_derivative(&self.p, i)?;
        Some((k as i64, Monomial { p, ..self.clone() }))
    }

    /// Right derivative with respect to `xi^a`.
    fn dr_xi(&self, a: usize) -> Option<(i64, Monomial)> {
        let bit = 1u32 << a;
        if self.xi & bit == 0 {
            return None;
        }
        let passes = (self.xi >> (a + 1)).count_ones() + self.theta.count_ones();
        Some((
            odd_sign(passes) as i64,
            Monomial {
                xi: self.xi & !bit,
                ..self.clone()
            },
        ))
    }

    /// Left derivative with respect to `xi^a`.
    fn dl_xi(&self, a: usize) -> Option<(i64, Monomial)> {
        let bit = 1u32 << a;
        if self.xi & bit == 0 {
            return None;
        }
        let passes = (self.xi & (bit - 1)).count_ones();
        Some((
            odd_sign(passes) as i64,
            Monomial {
                xi: self.xi & !bit,
                ..self.clone()
            },
        ))
    }

    /// Right derivative with respect to `theta_a`.
    fn dr_theta(&self, a: usize) -> Option<(i64, Monomial)> {
        let bit = 1u32 << a;
        if self.theta & bit == 0 {
            return None;
        }
        let passes = (self.theta >> (a + 1)).count_ones();
        Some((
            odd_sign(passes) as i64,
            Monomial {
                theta: self.theta & !bit,
                ..self.clone()
            },
        ))
    }

    /// Left derivative with respect to `theta_a`.
    fn dl_theta(&self, a: usize) -> Option<(i64, Monomial)> {
        let bit = 1u32 << a;
        if self.theta & bit == 0 {
            return None;
        }
        let passes = self.xi.count_ones() + (self.theta & (bit - 1)).count_ones();
        Some((
            odd_sign(passes) as i64,
            Monomial {
                theta: self.theta & !bit,
                ..self.clone()
            },
        ))
    }
}

/// Names used when rendering superfunctions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Names {
    pub base: Vec<String>,
    pub momenta: Vec<String>,
    pub frames: Vec<String>,
    pub coframes: Vec<String>,
}

impl Names {
    pub fn base_name(&self, i: usize) -> String {
        self.base.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1))
    }
    pub fn momentum_name(&self, i: usize) -> String {
        self.momenta.get(i).cloned().unwrap_or_else(|| format!("p{}", i + 1))
    }
    pub fn frame_name(&self, a: usize) -> String {
        self.frames.get(a).cloned().unwrap_or_else(|| format!("theta{}", a + 1))
    }
    pub fn coframe_name(&self, a: usize) -> String {
        self.coframes.get(a).cloned().unwrap_or_else(|| format!("xi{}", a + 1))
    }
}

/// An element of the bigraded algebra: a finite sum of canonical monomials
/// with nonzero rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Superfunction {
    terms: BTreeMap<Monomial, Rational>,
}

impl Superfunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_monomial(Monomial::one(), c)
    }

    pub fn from_monomial(m: Monomial, c: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(m, c);
        s
    }

    pub fn generator(g: Generator) -> Self {
        Self::from_monomial(Monomial::generator(g), Rational::one())
    }

    pub fn x(i: usize) -> Self {
        Self::generator(Generator::X(i))
    }

    pub fn xi(a: usize) -> Self {
        Self::generator(Generator::Xi(a))
    }

    pub fn p(i: usize) -> Self {
        Self::generator(Generator::P(i))
    }

    pub fn theta(a: usize) -> Self {
        Self::generator(Generator::Theta(a))
    }

    pub fn from_poly(f: &Poly) -> Self {
        let mut s = Self::zero();
        for (e, c) in f.terms() {
            s.add_term(
                Monomial {
                    x: e.clone(),
                    ..Monomial::one()
                },
                c.clone(),
            );
        }
        s
    }

    /// Insert one term, merging with an existing equal monomial.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiplication by a base function.
    pub fn scale_poly(&self, f: &Poly) -> Self {
        &Self::from_poly(f) * self
    }

    pub fn degree(&self) -> Degree {
        let mut it = self.terms.keys().map(Monomial::bidegree);
        let Some(first) = it.next() else {
            return Degree::Zero;
        };
        if it.all(|b| b == first) {
            Degree::Homogeneous(first)
        } else {
            Degree::Inhomogeneous
        }
    }

    /// The common bidegree, or `None` for zero and inhomogeneous elements.
    pub fn bidegree(&self) -> Option<Bidegree> {
        match self.degree() {
            Degree::Homogeneous(b) => Some(b),
            _ => None,
        }
    }

    /// `true` when the element is zero or homogeneous of bidegree `b`.
    pub fn has_bidegree(&self, b: Bidegree) -> bool {
        self.terms.keys().all(|m| m.bidegree() == b)
    }

    pub fn expect_bidegree(&self, what: &str, b: Bidegree) -> Result<()> {
        if self.has_bidegree(b) {
            Ok(())
        } else {
            Err(Error::WrongBidegree {
                what: what.to_string(),
                expected: b,
                found: match self.degree() {
                    Degree::Homogeneous(d) => d.to_string(),
                    _ => "inhomogeneous".to_string(),
                },
            })
        }
    }

    /// Parity of a homogeneous-parity element; `None` when mixed or zero.
    pub fn parity(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn component(&self, b: Bidegree) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.bidegree() == b)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn components(&self) -> BTreeMap<Bidegree, Superfunction> {
        let mut out: BTreeMap<Bidegree, Superfunction> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.bidegree()).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    /// Whether any coefficient depends on the base coordinates.
    pub fn has_base_dependence(&self) -> bool {
        self.terms.keys().any(|m| !m.x.is_empty())
    }

    pub fn base_arity(&self) -> usize {
        self.terms.keys().map(|m| m.x.len()).max().unwrap_or(0)
    }

    pub fn fiber_arity(&self) -> usize {
        self.terms
            .keys()
            .map(|m| (32 - (m.xi | m.theta).leading_zeros()) as usize)
            .max()
            .unwrap_or(0)
    }

    /// Polynomial coefficient of the fiber monomial `fiber` (whose base
    /// exponents are ignored).
    pub fn coefficient(&self, fiber: &Monomial) -> Poly {
        let key = fiber.fiber_part();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.xi == key.xi && m.theta == key.theta && m.p == key.p {
                out.add_term(m.x.clone(), c.clone());
            }
        }
        out
    }

    /// Coefficient of `xi^{xi[0]} ... xi^{xi[k]} theta_{theta[0]} ...` in
    /// the order given, i.e. including the sign of sorting the indices.
    pub fn odd_coefficient(&self, xi: &[usize], theta: &[usize]) -> Poly {
        let mut sign = 1;
        let mut xm = 0u32;
        for &a in xi {
            let s = merge_sign(xm, 1 << a);
            if s == 0 {
                return Poly::zero();
            }
            sign *= s;
            xm |= 1 << a;
        }
        let mut tm = 0u32;
        for &a in theta {
            let s = merge_sign(tm, 1 << a);
            if s == 0 {
                return Poly::zero();
            }
            sign *= s;
            tm |= 1 << a;
        }
        let m = Monomial {
            xi: xm,
            theta: tm,
            ..Monomial::one()
        };
        self.coefficient(&m).scale(&int(sign as i64))
    }

    /// Specializes the base coordinates at `point`.
    pub fn evaluate(&self, base_dim: usize, point: &[Rational]) -> Result<Self> {
        if point.len() != base_dim {
            return Err(Error::DimensionMismatch {
                expected: base_dim,
                found: point.len(),
            });
        }
        if self.base_arity() > base_dim {
            return Err(Error::DimensionMismatch {
                expected: base_dim,
                found: self.base_arity(),
            });
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let v = Poly::monomial(m.x.clone(), c.clone()).eval(point);
            out.add_term(m.fiber_part(), v);
        }
        Ok(out)
    }

    /// Applies `f` to every polynomial coefficient of a fiber monomial.
    pub fn map_coefficients(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut grouped: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            grouped
                .entry(m.fiber_part())
                .or_default()
                .add_term(m.x.clone(), c.clone());
        }
        let mut out = Self::zero();
        for (fiber, coeff) in grouped {
            out += &(&Self::from_poly(&f(&coeff)) * &Self::from_monomial(fiber, Rational::one()));
        }
        out
    }

    /// The big bracket `{self, other}`.
    pub fn bracket(&self, other: &Superfunction) -> Superfunction {
        let mut out = Superfunction::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                bracket_monomials(m1, m2, &(c1 * c2), &mut out);
            }
        }
        out
    }

    pub fn render(&self, names: &Names) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            let power = |name: String, k: u32| {
                if k == 1 {
                    name
                } else {
                    format!("{name}^{k}")
                }
            };
            for (i, &k) in m.x.iter().enumerate() {
                if k > 0 {
                    factors.push(power(names.base_name(i), k));
                }
            }
            for (i, &k) in m.p.iter().enumerate() {
                if k > 0 {
                    factors.push(power(names.momentum_name(i), k));
                }
            }
            factors.extend(bits(m.xi).map(|a| names.coframe_name(a)));
            factors.extend(bits(m.theta).map(|a| names.frame_name(a)));
            if factors.is_empty() {
                s.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    s.push_str(&mag.to_string());
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

fn push(out: &mut Superfunction, c: &Rational, left: Option<(i64, Monomial)>, right: Option<(i64, Monomial)>, sign: i64) {
    let (Some((s1, a)), Some((s2, b))) = (left, right) else {
        return;
    };
    if let Some((s, m)) = a.mul(&b) {
        out.add_term(m, c * int(sign * s1 * s2 * s as i64));
    }
}

/// `{m1, m2}` accumulated into `out`, as the canonical bracket written with
/// right derivatives on the left factor and left derivatives on the right:
/// `Σ ∂x·∂p − ∂p·∂x + Σ ∂xi·∂theta + ∂theta·∂xi`.
fn bracket_monomials(m1: &Monomial, m2: &Monomial, c: &Rational, out: &mut Superfunction) {
    let n_even = m1.x.len().max(m1.p.len()).max(m2.x.len()).max(m2.p.len());
    for i in 0..n_even {
        push(out, c, m1.d_x(i), m2.d_p(i), 1);
        push(out, c, m1.d_p(i), m2.d_x(i), -1);
    }
    for a in bits(m1.xi & m2.theta) {
        push(out, c, m1.dr_xi(a), m2.dl_theta(a), 1);
    }
    for a in bits(m1.theta & m2.xi) {
        push(out, c, m1.dr_theta(a), m2.dl_xi(a), 1);
    }
}

impl fmt::Display for Superfunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&Names::default()))
    }
}

impl From<&Poly> for Superfunction {
    fn from(p: &Poly) -> Self {
        Self::from_poly(p)
    }
}

impl AddAssign<&Superfunction> for Superfunction {
    fn add_assign(&mut self, rhs: &Superfunction) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Superfunction> for Superfunction {
    fn sub_assign(&mut self, rhs: &Superfunction) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Superfunction {
    type Output = Superfunction;
    fn add(self, rhs: &Superfunction) -> Superfunction {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Superfunction {
    type Output = Superfunction;
    fn sub(self, rhs: &Superfunction) -> Superfunction {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &Superfunction {
    type Output = Superfunction;
    fn mul(self, rhs: &Superfunction) -> Superfunction {
        let mut out = Superfunction::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                if let Some((s, m)) = m1.mul(m2) {
                    out.add_term(m, c1 * c2 * int(s as i64));
                }
            }
        }
        out
    }
}

impl Neg for &Superfunction {
    type Output = Superfunction;
    fn neg(self) -> Superfunction {
        self.scale(&int(-1))
    }
}

macro_rules! owned_ops {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Superfunction {
            type Output = Superfunction;
            fn $m(self, rhs: Superfunction) -> Superfunction {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Superfunction> for Superfunction {
            type Output = Superfunction;
            fn $m(self, rhs: &Superfunction) -> Superfunction {
                (&self).$m(rhs)
            }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for Superfunction {
    type Output = Superfunction;
    fn neg(self) -> Superfunction {
        -&self
    }
}

pub fn product(u: &Superfunction, v: &Superfunction) -> Superfunction {
    u * v
}

pub fn big_bracket(u: &Superfunction, v: &Superfunction) -> Superfunction {
    u.bracket(v)
}

pub fn bidegree_of(u: &Superfunction) -> Degree {
    u.degree()
}

/// `Σ c_a theta_a`: a section of `A`.
pub fn vector_field(components: &[Poly]) -> Superfunction {
    let mut out = Superfunction::zero();
    for (a, c) in components.iter().enumerate() {
        out += &Superfunction::theta(a).scale_poly(c);
    }
    out
}

/// `Σ c_a xi^a`: a section of `A*`.
pub fn one_form(components: &[Poly]) -> Superfunction {
    let mut out = Superfunction::zero();
    for (a, c) in components.iter().enumerate() {
        out += &Superfunction::xi(a).scale_poly(c);
    }
    out
}

/// Components of the bidegree-(1,0) part in the frame `theta_1..theta_rank`.
pub fn vector_components(u: &Superfunction, rank: usize) -> Vec<Poly> {
    (0..rank).map(|a| u.odd_coefficient(&[], &[a])).collect()
}

/// Components of the bidegree-(0,1) part in the coframe `xi^1..xi^rank`.
pub fn form_components(u: &Superfunction, rank: usize) -> Vec<Poly> {
    (0..rank).map(|a| u.odd_coefficient(&[a], &[])).collect()
}

/// Pairing of a one-form with a vector, given by components.
pub fn pair(alpha: &[Poly], v: &[Poly]) -> Poly {
    let mut acc = Poly::zero();
    for (a, x) in alpha.iter().zip(v) {
        if !a.is_zero() && !x.is_zero() {
            acc += &(a * x);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    type S = Superfunction;

    #[test]
    fn odd_generators_anticommute() {
        assert_eq!(&S::xi(1) * &S::xi(0), -(&S::xi(0) * &S::xi(1)));
        assert!((&S::xi(0) * &S::xi(0)).is_zero());
        assert_eq!(&S::p(0) * &S::p(1), &S::p(1) * &S::p(0));
        let a = &S::x(0) * &S::xi(0);
        let b = &S::x(0) * &S::theta(0);
        let expected = S::from_monomial(Monomial::new(vec![2], vec![], 1, 1), Rational::one());
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn generator_table() {
        assert_eq!(S::x(0).bracket(&S::p(0)), S::one());
        assert_eq!(S::xi(0).bracket(&S::theta(0)), S::one());
        assert_eq!(S::theta(0).bracket(&S::xi(0)), S::one());
        assert_eq!(S::p(0).bracket(&S::x(0)), -S::one());
        assert!(S::x(0).bracket(&S::p(1)).is_zero());
        assert!(S::xi(0).bracket(&S::theta(1)).is_zero());
    }

    #[test]
    fn bidegrees() {
        let u = &(&S::xi(0) * &S::xi(1)) * &S::theta(0);
        assert_eq!(u.degree(), Degree::Homogeneous(Bidegree::new(1, 2)));
        assert_eq!(S::p(0).degree(), Degree::Homogeneous(Bidegree::new(1, 1)));
        assert_eq!((&S::x(0) + &S::xi(0)).degree(), Degree::Inhomogeneous);
        assert_eq!(S::zero().degree(), Degree::Zero);
    }

    #[test]
    fn evaluation() {
        let u = &S::x(0) * &S::xi(0);
        assert_eq!(u.evaluate(1, &[int(2)]).unwrap(), S::xi(0).scale(&int(2)));
        let v = &(&S::x(0) * &S::x(1)) * &S::p(0);
        assert!(v.evaluate(2, &[int(1), int(0)]).unwrap().is_zero());
        let f = Poly::var(0).pow(2) - Poly::one();
        let w = S::theta(0).scale_poly(&f);
        assert_eq!(w.evaluate(1, &[int(3)]).unwrap(), S::theta(0).scale(&int(8)));
        assert!(matches!(
            u.evaluate(2, &[int(1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rendering_is_canonical() {
        let u = &(&S::xi(1) * &S::xi(0)).scale(&rat(-1, 2)) + &S::theta(0).scale_poly(&Poly::var(0));
        assert_eq!(u.to_string(), "x1*theta1 + 1/2*xi1*xi2");
    }

    #[test]
    fn odd_coefficient_respects_order() {
        let u = &S::xi(0) * &S::xi(1);
        assert_eq!(u.odd_coefficient(&[0, 1], &[]), Poly::one());
        assert_eq!(u.odd_coefficient(&[1, 0], &[]), Poly::from_int(-1));
    }
}
