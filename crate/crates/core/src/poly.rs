//! Sparse multivariate polynomials over the rationals.
//!
//! These are the coefficient functions of every structure in the crate: the
//! base coordinates `x1..xn` of a Lie algebroid enter only polynomially.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Exponent vector with trailing zeros trimmed, so that equal monomials
/// always have equal keys.
pub type Exponents = Vec<u32>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn trim(mut e: Exponents) -> Exponents {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

pub(crate) fn add_exponents(a: &[u32], b: &[u32]) -> Exponents {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.len() <= b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

fn sub_exponents(b: &[u32], a: &[u32]) -> Exponents {
    trim(
        b.iter()
            .enumerate()
            .map(|(i, y)| y - a.get(i).copied().unwrap_or(0))
            .collect(),
    )
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Exponents, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(int(n))
    }

    /// The coordinate function `x_{i+1}` (zero-based index).
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exponents: Exponents, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(trim(exponents), c);
        p
    }

    pub fn add_term(&mut self, exponents: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = trim(exponents);
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_empty())
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Number of variables the polynomial actually depends on (highest index + 1).
    pub fn arity(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    /// Leading term in lexicographic order with `x1 > x2 > ...`.
    pub fn leading_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let k = e.get(var).copied().unwrap_or(0);
            if k == 0 {
                continue;
            }
            let mut d = e.clone();
            d[var] -= 1;
            out.add_term(d, c * int(k as i64));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, k) in e.iter().enumerate() {
                if *k > 0 {
                    let x = point.get(i).cloned().unwrap_or_else(Rational::zero);
                    t *= num_traits::pow(x, *k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `x_i -> subs[i]`; variables beyond `subs.len()` are kept.
    pub fn compose(&self, subs: &[Poly]) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (i, k) in e.iter().enumerate() {
                let base = subs.get(i).cloned().unwrap_or_else(|| Self::var(i));
                for _ in 0..*k {
                    t = &t * &base;
                }
            }
            out += &t;
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lead_e, lead_c) = divisor.leading_term()?;
        if divisor.num_terms() == 1 {
            let mut q = Self::zero();
            for (e, c) in &self.terms {
                if !divides(lead_e, e) {
                    return None;
                }
                q.add_term(sub_exponents(e, lead_e), c / lead_c);
            }
            return Some(q);
        }
        let mut quotient = Self::zero();
        let mut rem = self.clone();
        while let Some((e, c)) = rem.leading_term() {
            if !divides(lead_e, e) {
                return None;
            }
            let t = Self::monomial(sub_exponents(e, lead_e), c / lead_c);
            rem -= &(&t * divisor);
            quotient += &t;
        }
        Some(quotient)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e.get(var).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    /// `self = Σ_k c_k x_var^k`, returning the `c_k` (free of `x_var`).
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            let k = e.get(var).copied().unwrap_or(0);
            let mut rest = e.clone();
            if var < rest.len() {
                rest[var] = 0;
            }
            out[k as usize].add_term(rest, c.clone());
        }
        out
    }

    fn lowest_variable(&self) -> Option<usize> {
        self.terms.keys().filter_map(|e| e.iter().position(|&k| k > 0)).min()
    }

    /// Monic greatest common divisor, by primitive pseudo-remainder
    /// sequences recursively in the lowest variable. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one();
        }
        let var = match (self.lowest_variable(), other.lowest_variable()) {
            (Some(a), Some(b)) => a.min(b),
            _ => return Poly::one(),
        };
        if self.degree_in(var) == 0 {
            return self.gcd(&other.content_in(var));
        }
        if other.degree_in(var) == 0 {
            return self.content_in(var).gcd(other);
        }
        let (ca, cb) = (self.content_in(var), other.content_in(var));
        let content = ca.gcd(&cb);
        let mut a = self.div_exact(&ca).expect("content divides");
        let mut b = other.div_exact(&cb).expect("content divides");
        if a.degree_in(var) < b.degree_in(var) {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.pseudo_remainder(&b, var);
            if r.is_zero() {
                break;
            }
            if r.degree_in(var) == 0 {
                return content;
            }
            a = b;
            b = r.div_exact(&r.content_in(var)).expect("content divides");
        }
        (&content * &b).monic()
    }

    /// Gcd of the coefficients in `x_var`.
    fn content_in(&self, var: usize) -> Poly {
        self.coefficients_in(var)
            .iter()
            .fold(Poly::zero(), |g, c| if g == Poly::one() { g } else { g.gcd(c) })
    }

    /// Remainder of `a` modulo `b` after scaling `a` by powers of the
    /// leading coefficient of `b` in `x_var`.
    fn pseudo_remainder(&self, b: &Poly, var: usize) -> Poly {
        let db = b.degree_in(var);
        let lb = b.coefficients_in(var).pop().expect("nonzero");
        let mut a = self.clone();
        while !a.is_zero() && a.degree_in(var) >= db {
            let da = a.degree_in(var);
            let la = a.coefficients_in(var).pop().expect("nonzero");
            let mut shift = vec![0u32; var + 1];
            shift[var] = da - db;
            let t = &la * &Poly::monomial(shift, Rational::one());
            a = &(&lb * &a) - &(&t * b);
        }
        a
    }

    pub fn monic(&self) -> Poly {
        match self.monic_factor() {
            Some(f) => self.scale(&f),
            None => Poly::zero(),
        }
    }

    /// Rational scaling that makes the leading coefficient one.
    pub fn monic_factor(&self) -> Option<Rational> {
        self.leading_term().map(|(_, c)| c.recip())
    }

    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| {
                    if *k == 1 {
                        names(i)
                    } else {
                        format!("{}^{}", names(i), k)
                    }
                })
                .collect();
            if vars.is_empty() {
                s.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    s.push_str(&mag.to_string());
                    s.push('*');
                }
                s.push_str(&vars.join("*"));
            }
        }
        s
    }
}

pub fn default_var_name(i: usize) -> String {
    format!("x{}", i + 1)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_var_name))
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(add_exponents(ea, eb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn zero_terms_are_pruned() {
        let p = &x(0) - &x(0);
        assert!(p.is_zero());
        assert_eq!(p, Poly::zero());
    }

    #[test]
    fn evaluation_of_shifted_square() {
        // (x1^2 - 1) at x1 = 3
        let p = &x(0).pow(2) - &Poly::one();
        assert_eq!(p.eval(&[int(3)]), int(8));
    }

    #[test]
    fn exact_division() {
        let a = &x(0) + &x(1);
        let b = &x(0) - &Poly::from_int(2);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a));
        assert_eq!((&prod + &Poly::one()).div_exact(&b), None);
        assert_eq!(Poly::one().div_exact(&Poly::zero()), None);
    }

    #[test]
    fn derivative_and_render() {
        let p = &(&x(0).pow(2) * &x(1)).scale(&rat(1, 2)) - &x(2);
        assert_eq!(p.derivative(0), &x(0) * &x(1));
        assert_eq!(p.to_string(), "1/2*x1^2*x2 - x3");
    }

    #[test]
    fn compose_linear_substitution() {
        let p = &x(0) * &x(1);
        let q = p.compose(&[&x(0) + &x(1), x(1)]);
        assert_eq!(q, &(&x(0) * &x(1)) + &x(1).pow(2));
    }

    #[test]
    fn gcd_of_known_factorizations() {
        let f = &(&x(0) - &x(2).scale(&int(2))).pow(3) * &x(2);
        let g = &f * &(&x(1) + &Poly::one());
        let h = &f * &(&x(0) * &x(1) - &Poly::from_int(3));
        assert_eq!(g.gcd(&h), f.monic());
        assert_eq!(x(0).gcd(&x(1)), Poly::one());
        assert_eq!(Poly::zero().gcd(&g.scale(&int(5))), g.monic());
    }

    fn small_poly() -> impl proptest::strategy::Strategy<Value = Poly> {
        use proptest::prelude::*;
        prop::collection::vec((prop::collection::vec(0u32..=2, 3), -3i64..=3), 1..=3).prop_map(|terms| {
            let mut p = Poly::zero();
            for (e, c) in terms {
                p.add_term(e, int(c));
            }
            p
        })
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        #[test]
        fn gcd_divides_both_and_contains_common_factor(f in small_poly(), g in small_poly(), h in small_poly()) {
            let (a, b) = (&f * &g, &f * &h);
            let d = a.gcd(&b);
            if a.is_zero() && b.is_zero() {
                proptest::prop_assert!(d.is_zero());
            } else {
                proptest::prop_assert!(a.div_exact(&d).is_some());
                proptest::prop_assert!(b.div_exact(&d).is_some());
                if !f.is_zero() {
                    proptest::prop_assert!(d.div_exact(&f).is_some());
                }
            }
        }
    }
}
