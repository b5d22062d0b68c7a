//! Exact linear algebra over the fraction field of polynomials.
//!
//! Matrices hold polynomial entries and every elimination is fraction-free
//! (Bareiss-style Gauss-Jordan), so all intermediate entries stay polynomial
//! and every division is exact. Ranks and spans are generic ranks over
//! `Q(x1..xn)`; the pivot value records where the rank may drop.

use std::fmt;

use num_traits::One;

use crate::poly::{Poly, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|v| Poly::from_int(*v)).collect())
                .collect(),
        )
    }

    pub fn from_rational_rows(rows: Vec<Vec<Rational>>) -> Self {
        Self::from_rows(
            rows.into_iter()
                .map(|row| row.into_iter().map(Poly::constant).collect())
                .collect(),
        )
    }

    /// Builds a `len x k` matrix whose columns are the given vectors.
    pub fn from_columns(len: usize, columns: &[Vec<Poly>]) -> Self {
        let mut m = Self::zeros(len, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), len, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Poly> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Poly> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.data.iter().all(Poly::is_constant)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &(self.get(i, j) * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Poly, &Poly) -> Poly) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &Poly) -> Matrix {
        self.map(|a| a * c)
    }

    pub fn neg(&self) -> Matrix {
        self.map(|a| -a)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Matrix {
        assert!(self.is_square());
        let mut out = Matrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Matrix {
        self.map(|a| Poly::constant(a.eval(point)))
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Rows `range` as a new matrix.
    pub fn row_block(&self, start: usize, end: usize) -> Matrix {
        Matrix {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    pub fn column_block(&self, start: usize, end: usize) -> Matrix {
        let cols: Vec<Vec<Poly>> = (start..end).map(|j| self.column(j)).collect();
        Matrix::from_columns(self.rows, &cols)
    }

    pub fn is_skew(&self) -> bool {
        self.is_square() && *self == self.transpose().neg()
    }

    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|p| p.render(names)).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&crate::poly::default_var_name))
    }
}

/// Fraction-free reduced row echelon form.
///
/// Every pivot entry equals `pivot_value`, and `reduced / pivot_value` is the
/// reduced row echelon form over the fraction field.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
    pub pivot_value: Poly,
    /// Sign of the row permutation, for determinants.
    pub swap_sign: i32,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn pivot_cost(p: &Poly) -> (usize, u32, usize) {
    (
        usize::from(!p.is_constant()),
        p.total_degree().unwrap_or(0),
        p.num_terms(),
    )
}

pub fn ff_rref(m: &Matrix) -> Echelon {
    let mut a = m.clone();
    let mut prev = Poly::one();
    let mut pivots = Vec::new();
    let mut swap_sign = 1;
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let candidate = (r..a.rows)
            .filter(|&i| !a.get(i, c).is_zero())
            .min_by_key(|&i| pivot_cost(a.get(i, c)));
        let Some(p) = candidate else { continue };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
            swap_sign = -swap_sign;
        }
        let piv = a.get(r, c).clone();
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in 0..a.cols {
                let num = &(&piv * a.get(i, j)) - &(&factor * a.get(r, j));
                let v = num
                    .div_exact(&prev)
                    .expect("fraction-free elimination produced an inexact division");
                a.set(i, j, v);
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    // Rows past the rank are zero; pivots of earlier rows were rescaled to
    // the last pivot along the way.
    Echelon {
        reduced: a,
        pivots,
        pivot_value: prev,
        swap_sign,
    }
}

pub fn rank(m: &Matrix) -> usize {
    ff_rref(m).rank()
}

/// Divides out the polynomial gcd of the entries and makes the first
/// nonzero entry's leading coefficient one.
pub fn normalize_vector(v: &mut [Poly]) {
    if v.iter().any(|p| !p.is_constant()) {
        let g = v.iter().fold(Poly::zero(), |g, p| if g == Poly::one() { g } else { g.gcd(p) });
        if !g.is_constant() {
            for p in v.iter_mut() {
                *p = p.div_exact(&g).expect("gcd divides");
            }
        }
    }
    if let Some(first) = v.iter().find(|p| !p.is_zero()) {
        let f = first.monic_factor().unwrap_or_else(Rational::one);
        if !f.is_one() {
            for p in v.iter_mut() {
                *p = p.scale(&f);
            }
        }
    }
}

/// Basis (as columns) of the right kernel `{x | m x = 0}` over `Q(x)`.
pub fn kernel(m: &Matrix) -> Matrix {
    let ech = ff_rref(m);
    let n = m.ncols();
    let mut cols = Vec::new();
    for f in 0..n {
        if ech.pivots.contains(&f) {
            continue;
        }
        let mut v = vec![Poly::zero(); n];
        v[f] = ech.pivot_value.clone();
        for (k, &pc) in ech.pivots.iter().enumerate() {
            v[pc] = -ech.reduced.get(k, f);
        }
        normalize_vector(&mut v);
        cols.push(v);
    }
    Matrix::from_columns(n, &cols)
}

/// A basis of the column span, in a canonical reduced form when the
/// elimination pivot is constant.
pub fn column_basis(m: &Matrix) -> Matrix {
    let ech = ff_rref(&m.transpose());
    let mut cols = Vec::new();
    for k in 0..ech.rank() {
        let mut v = ech.reduced.row(k);
        if let Some(c) = ech.pivot_value.constant_value() {
            let inv = c.recip();
            for p in v.iter_mut() {
                *p = p.scale(&inv);
            }
        } else {
            normalize_vector(&mut v);
        }
        cols.push(v);
    }
    Matrix::from_columns(m.nrows(), &cols)
}

pub fn same_column_span(a: &Matrix, b: &Matrix) -> bool {
    assert_eq!(a.nrows(), b.nrows());
    let ra = rank(a);
    ra == rank(b) && ra == rank(&a.hstack(b))
}

pub fn in_column_span(a: &Matrix, v: &[Poly]) -> bool {
    let col = Matrix::from_columns(a.nrows(), &[v.to_vec()]);
    rank(a) == rank(&a.hstack(&col))
}

/// `span(a) ⊆ span(b)`.
pub fn span_contains(b: &Matrix, a: &Matrix) -> bool {
    rank(b) == rank(&b.hstack(a))
}

/// Basis of `span(a) ∩ span(b)`.
pub fn intersect_column_spans(a: &Matrix, b: &Matrix) -> Matrix {
    let k = kernel(&a.hstack(&b.neg()));
    let coeffs = k.row_block(0, a.ncols());
    column_basis(&a.mul(&coeffs))
}

/// Annihilator in the dual space of the span of the columns of `gens`.
pub fn annihilator(gens: &Matrix) -> Matrix {
    kernel(&gens.transpose())
}

pub fn determinant(m: &Matrix) -> Poly {
    assert!(m.is_square(), "determinant of a non-square matrix");
    if m.nrows() == 0 {
        return Poly::one();
    }
    let ech = ff_rref(m);
    if ech.rank() < m.nrows() {
        return Poly::zero();
    }
    ech.pivot_value.scale(&crate::poly::int(ech.swap_sign as i64))
}

/// Returns `(adj, det)` with `m * adj = det * I`; `None` when singular over `Q(x)`.
pub fn inverse_fraction(m: &Matrix) -> Option<(Matrix, Poly)> {
    assert!(m.is_square());
    let n = m.nrows();
    let ech = ff_rref(&m.hstack(&Matrix::identity(n)));
    if ech.pivots.iter().take(n).copied().ne(0..n) || ech.rank() < n {
        return None;
    }
    let adj = ech.reduced.column_block(n, 2 * n);
    Some((adj, ech.pivot_value))
}

/// Inverse with polynomial entries, when it exists.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let (adj, d) = inverse_fraction(m)?;
    let data: Option<Vec<Poly>> = adj.data.iter().map(|p| p.div_exact(&d)).collect();
    Some(Matrix {
        rows: adj.rows,
        cols: adj.cols,
        data: data?,
    })
}
