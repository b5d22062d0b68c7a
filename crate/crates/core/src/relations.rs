//! Linear relations `R ⊂ V × W` over the field of rational functions of the
//! base coordinates, their calculus (composition, inverse, dual, fibered
//! products) and the torsion of a relation in a Lie algebroid.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{render_vector, AlgebroidStructure, Bivector};
use crate::kernel::pair;
use crate::linalg::{self, Matrix};
use crate::poly::{int, Poly};
use crate::report::{CheckReport, Regime};

/// How a relation was produced; informational only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Generators,
    Graph,
    MapPair,
    Composition,
    Inverse,
    Dual,
}

/// A subspace of `V × W`, stored as a reduced basis of column generators
/// whose first `dom_dim` rows are the `V` part.
#[derive(Clone, Debug)]
pub struct LinearRelation {
    dom_dim: usize,
    cod_dim: usize,
    gens: Matrix,
    pub construction: Construction,
}

impl PartialEq for LinearRelation {
    fn eq(&self, other: &Self) -> bool {
        self.dom_dim == other.dom_dim
            && self.cod_dim == other.cod_dim
            && linalg::same_column_span(&self.gens, &other.gens)
    }
}

impl LinearRelation {
    pub fn new(dom_dim: usize, cod_dim: usize, gens: &Matrix) -> Result<Self> {
        if gens.nrows() != dom_dim + cod_dim {
            return Err(Error::DimensionMismatch {
                expected: dom_dim + cod_dim,
                found: gens.nrows(),
            });
        }
        Ok(Self {
            dom_dim,
            cod_dim,
            gens: linalg::column_basis(gens),
            construction: Construction::Generators,
        })
    }

    fn built(dom_dim: usize, cod_dim: usize, gens: &Matrix, construction: Construction) -> Self {
        let mut r = Self::new(dom_dim, cod_dim, gens).expect("consistent dimensions");
        r.construction = construction;
        r
    }

    /// `graph φ = {(u, φu)}` for `φ` given as a `cod x dom` matrix.
    pub fn graph(map: &Matrix) -> Self {
        let dom = map.ncols();
        Self::built(dom, map.nrows(), &Matrix::identity(dom).vstack(map), Construction::Graph)
    }

    /// `V0 × W0` from generators of each factor.
    pub fn product(v0: &Matrix, w0: &Matrix) -> Self {
        let top = v0.hstack(&Matrix::zeros(v0.nrows(), w0.ncols()));
        let bottom = Matrix::zeros(w0.nrows(), v0.ncols()).hstack(w0);
        Self::built(v0.nrows(), w0.nrows(), &top.vstack(&bottom), Construction::Generators)
    }

    pub fn dom_dim(&self) -> usize {
        self.dom_dim
    }

    pub fn cod_dim(&self) -> usize {
        self.cod_dim
    }

    pub fn generators(&self) -> &Matrix {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        self.gens.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_constant(&self) -> bool {
        self.gens.is_constant()
    }

    pub fn dom_part(&self) -> Matrix {
        self.gens.row_block(0, self.dom_dim)
    }

    pub fn cod_part(&self) -> Matrix {
        self.gens.row_block(self.dom_dim, self.dom_dim + self.cod_dim)
    }

    /// The `k`-th generator split as `(u, v)`.
    pub fn generator(&self, k: usize) -> (Vec<Poly>, Vec<Poly>) {
        let col = self.gens.column(k);
        (col[..self.dom_dim].to_vec(), col[self.dom_dim..].to_vec())
    }

    pub fn contains(&self, u: &[Poly], v: &[Poly]) -> bool {
        let col: Vec<Poly> = u.iter().chain(v).cloned().collect();
        linalg::in_column_span(&self.gens, &col)
    }

    /// The polynomial whose zero set may lower the rank of the generators,
    /// when it is not a constant.
    pub fn rank_drop_locus(&self) -> Option<Poly> {
        rank_drop_locus(&self.gens)
    }

    pub fn inverse(&self) -> Self {
        let swapped = self.cod_part().vstack(&self.dom_part());
        Self::built(self.cod_dim, self.dom_dim, &swapped, Construction::Inverse)
    }

    /// `R* = {(β, α) | <α,u> = <β,v> for all (u,v) ∈ R}`.
    pub fn dual(&self) -> Self {
        let constraint = self.cod_part().neg().transpose().hstack(&self.dom_part().transpose());
        let gens = if self.is_zero() {
            Matrix::identity(self.dom_dim + self.cod_dim)
        } else {
            linalg::kernel(&constraint)
        };
        Self::built(self.cod_dim, self.dom_dim, &gens, Construction::Dual)
    }

    pub fn render(&self) -> String {
        let cols: Vec<String> = self
            .gens
            .columns()
            .iter()
            .map(|c| render_vector(c))
            .collect();
        format!("span{{{}}} in {}x{}", cols.join(", "), self.dom_dim, self.cod_dim)
    }
}

impl fmt::Display for LinearRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn rank_drop_locus(m: &Matrix) -> Option<Poly> {
    if m.is_constant() {
        return None;
    }
    let ech = linalg::ff_rref(&m.transpose());
    (!ech.pivot_value.is_constant()).then_some(ech.pivot_value)
}

fn coefficient_pairs(r: &LinearRelation, next: &LinearRelation) -> Result<Matrix> {
    if r.cod_dim != next.dom_dim {
        return Err(Error::DimensionMismatch {
            expected: r.cod_dim,
            found: next.dom_dim,
        });
    }
    Ok(linalg::kernel(&r.cod_part().hstack(&next.dom_part().neg())))
}

/// `next ∗ r = {(u, w) | ∃v, (u,v) ∈ r, (v,w) ∈ next}`.
pub fn compose(r: &LinearRelation, next: &LinearRelation) -> Result<LinearRelation> {
    let k = coefficient_pairs(r, next)?;
    let a = k.row_block(0, r.dim());
    let b = k.row_block(r.dim(), r.dim() + next.dim());
    let gens = r.dom_part().mul(&a).vstack(&next.cod_part().mul(&b));
    Ok(LinearRelation::built(
        r.dom_dim,
        next.cod_dim,
        &gens,
        Construction::Composition,
    ))
}

/// A subspace of `U × V × W`.
#[derive(Clone, Debug)]
pub struct FiberedRelation {
    pub dims: [usize; 3],
    pub gens: Matrix,
}

impl FiberedRelation {
    pub fn dim(&self) -> usize {
        self.gens.ncols()
    }

    /// The `k`-th generator split into its three parts.
    pub fn generator(&self, k: usize) -> [Vec<Poly>; 3] {
        let c = self.gens.column(k);
        let [a, b, _] = self.dims;
        [c[..a].to_vec(), c[a..a + b].to_vec(), c[a + b..].to_vec()]
    }

    /// Projection to the first and last factors.
    pub fn project_outer(&self) -> LinearRelation {
        let [a, b, c] = self.dims;
        let gens = self.gens.row_block(0, a).vstack(&self.gens.row_block(a + b, a + b + c));
        LinearRelation::built(a, c, &gens, Construction::Composition)
    }

    pub fn contains(&self, parts: &[Vec<Poly>; 3]) -> bool {
        let col: Vec<Poly> = parts.iter().flatten().cloned().collect();
        linalg::in_column_span(&self.gens, &col)
    }
}

/// `next ⋄ r = {(u, v, w) | (u,v) ∈ r, (v,w) ∈ next}`.
pub fn diamond(r: &LinearRelation, next: &LinearRelation) -> Result<FiberedRelation> {
    let k = coefficient_pairs(r, next)?;
    let a = k.row_block(0, r.dim());
    let b = k.row_block(r.dim(), r.dim() + next.dim());
    let gens = r
        .dom_part()
        .mul(&a)
        .vstack(&r.cod_part().mul(&a))
        .vstack(&next.cod_part().mul(&b));
    Ok(FiberedRelation {
        dims: [r.dom_dim, r.cod_dim, next.cod_dim],
        gens: linalg::column_basis(&gens),
    })
}

/// `R^(2) = R ⋄ R`.
pub fn square(r: &LinearRelation) -> Result<FiberedRelation> {
    diamond(r, r)
}

/// `N(π, π') = {(π'ξ, πξ) | ξ ∈ A*}`.
pub fn relation_from_bivectors(pi: &Bivector, pi_prime: &Bivector) -> LinearRelation {
    let gens = pi_prime.matrix().vstack(&pi.matrix());
    LinearRelation::built(pi.rank, pi.rank, &gens, Construction::MapPair)
}

/// `N_{L,L'} = L̄ ∗ L'` for `L, L' ⊂ A × A*`.
pub fn relation_of_subbundles(l: &LinearRelation, l_prime: &LinearRelation) -> Result<LinearRelation> {
    compose(l_prime, &l.inverse())
}

/// A bracket on sections of a vector bundle over `R^base_dim`, by components.
pub trait SectionBracket {
    fn dim(&self) -> usize;
    fn base_dim(&self) -> usize;
    fn has_constant_coefficients(&self) -> bool;
    fn bracket(&self, u: &[Poly], v: &[Poly]) -> Vec<Poly>;
}

impl SectionBracket for AlgebroidStructure {
    fn dim(&self) -> usize {
        self.rank()
    }

    fn base_dim(&self) -> usize {
        AlgebroidStructure::base_dim(self)
    }

    fn has_constant_coefficients(&self) -> bool {
        AlgebroidStructure::has_constant_coefficients(self)
    }

    fn bracket(&self, u: &[Poly], v: &[Poly]) -> Vec<Poly> {
        self.section_bracket(u, v)
    }
}

/// Arguments of the torsion: `(u1,v1), (u2,v2) ∈ N` and
/// `(α, α'), (α', α'') ∈ N*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationChainTuple {
    pub u1: Vec<Poly>,
    pub v1: Vec<Poly>,
    pub u2: Vec<Poly>,
    pub v2: Vec<Poly>,
    pub alpha: Vec<Poly>,
    pub alpha1: Vec<Poly>,
    pub alpha2: Vec<Poly>,
}

impl RelationChainTuple {
    pub fn render(&self) -> String {
        format!(
            "u1={} v1={} u2={} v2={} alpha={} alpha'={} alpha''={}",
            render_vector(&self.u1),
            render_vector(&self.v1),
            render_vector(&self.u2),
            render_vector(&self.v2),
            render_vector(&self.alpha),
            render_vector(&self.alpha1),
            render_vector(&self.alpha2)
        )
    }

    pub fn scale_slots(&self, f1: &Poly, f2: &Poly, g: &Poly) -> Self {
        let s = |v: &[Poly], f: &Poly| v.iter().map(|p| p * f).collect::<Vec<_>>();
        Self {
            u1: s(&self.u1, f1),
            v1: s(&self.v1, f1),
            u2: s(&self.u2, f2),
            v2: s(&self.v2, f2),
            alpha: s(&self.alpha, g),
            alpha1: s(&self.alpha1, g),
            alpha2: s(&self.alpha2, g),
        }
    }
}

fn add_vec(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `<α,[v1,v2]> - <α',[v1,u2] + [u1,v2]> + <α'',[u1,u2]>`, without
/// checking membership.
pub fn torsion_value(bracket: &dyn SectionBracket, t: &RelationChainTuple) -> Poly {
    let first = pair(&t.alpha, &bracket.bracket(&t.v1, &t.v2));
    let middle = add_vec(&bracket.bracket(&t.v1, &t.u2), &bracket.bracket(&t.u1, &t.v2));
    let last = pair(&t.alpha2, &bracket.bracket(&t.u1, &t.u2));
    &(&first - &pair(&t.alpha1, &middle)) + &last
}

/// The torsion of `n` at an admissible tuple.
pub fn torsion_eval(n: &LinearRelation, bracket: &dyn SectionBracket, t: &RelationChainTuple) -> Result<Poly> {
    if n.dom_dim != bracket.dim() || n.cod_dim != bracket.dim() {
        return Err(Error::DimensionMismatch {
            expected: bracket.dim(),
            found: n.dom_dim,
        });
    }
    let dual = n.dual();
    let checks = [
        (n.contains(&t.u1, &t.v1), "(u1, v1) not in N"),
        (n.contains(&t.u2, &t.v2), "(u2, v2) not in N"),
        (dual.contains(&t.alpha, &t.alpha1), "(alpha, alpha') not in N*"),
        (dual.contains(&t.alpha1, &t.alpha2), "(alpha', alpha'') not in N*"),
    ];
    for (ok, msg) in checks {
        if !ok {
            return Err(Error::ConstraintViolation(msg.to_string()));
        }
    }
    Ok(torsion_value(bracket, t))
}

/// Controls the randomized supplement of the polynomial regime.
#[derive(Clone, Copy, Debug)]
pub struct SamplingOptions {
    pub seed: u64,
    pub samples: usize,
    pub max_degree: u32,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 8,
            max_degree: 2,
        }
    }
}

/// A random polynomial in `n` variables with small integer coefficients.
pub fn random_poly(rng: &mut impl Rng, n: usize, max_degree: u32) -> Poly {
    let mut p = Poly::constant(int(rng.random_range(1..=3)));
    if n == 0 {
        return p;
    }
    for _ in 0..rng.random_range(0..=2) {
        let mut e = vec![0u32; n];
        for _ in 0..rng.random_range(1..=max_degree.max(1)) {
            e[rng.random_range(0..n)] += 1;
        }
        p.add_term(e, int(rng.random_range(-2..=2)));
    }
    if p.is_zero() {
        Poly::one()
    } else {
        p
    }
}

/// Basis tuples: pairs of generators of `N` and generators of `(N*)^(2)`.
pub fn basis_tuples(n: &LinearRelation) -> Result<Vec<RelationChainTuple>> {
    let chains = square(&n.dual())?;
    let mut out = Vec::new();
    for i in 0..n.dim() {
        for j in 0..n.dim() {
            for c in 0..chains.dim() {
                let (u1, v1) = n.generator(i);
                let (u2, v2) = n.generator(j);
                let [alpha, alpha1, alpha2] = chains.generator(c);
                out.push(RelationChainTuple {
                    u1,
                    v1,
                    u2,
                    v2,
                    alpha,
                    alpha1,
                    alpha2,
                });
            }
        }
    }
    Ok(out)
}

/// Whether the torsion of `n` vanishes.
///
/// With constant coefficients the torsion is trilinear on the constraint
/// subspaces, so basis tuples are exhaustive. With polynomial coefficients
/// the basis tuples are taken over the function field (the torsion is
/// function-linear in each slot), random polynomial multiples are added,
/// and loci where the generic rank may drop are reported.
pub fn is_nijenhuis_relation(
    n: &LinearRelation,
    bracket: &dyn SectionBracket,
    opts: &SamplingOptions,
) -> Result<CheckReport> {
    if n.dom_dim != bracket.dim() || n.cod_dim != bracket.dim() {
        return Err(Error::DimensionMismatch {
            expected: bracket.dim(),
            found: n.dom_dim.max(n.cod_dim),
        });
    }
    let mut r = CheckReport::new("nijenhuis-relation");
    let constant = n.is_constant() && bracket.has_constant_coefficients();
    if !constant {
        r.regime = Regime::SampledPolynomial;
        r.note("verified over polynomial sections");
    }
    let dual = n.dual();
    let chains = square(&dual)?;
    for (what, locus) in [("N", n.rank_drop_locus()), ("N*", dual.rank_drop_locus())] {
        if let Some(p) = locus {
            r.warn(format!("rank of {what} may drop where {p} = 0"));
        }
    }
    if n.is_zero() || chains.dim() == 0 {
        r.vacuous(format!(
            "no admissible tuples: dim N = {}, dim N* = {}, dim (N*)^(2) = {}",
            n.dim(),
            dual.dim(),
            chains.dim()
        ));
        return Ok(r);
    }
    let tuples = basis_tuples(n)?;
    let mut checked = 0usize;
    for t in &tuples {
        let v = torsion_value(bracket, t);
        checked += 1;
        if !v.is_zero() {
            r.fail(format!("T = {v} at {}", t.render()));
            if r.witnesses.len() >= 4 {
                break;
            }
        }
    }
    if !constant && !r.failed() {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.samples {
            let t = &tuples[rng.random_range(0..tuples.len())];
            let f1 = random_poly(&mut rng, bracket.base_dim(), opts.max_degree);
            let f2 = random_poly(&mut rng, bracket.base_dim(), opts.max_degree);
            let g = random_poly(&mut rng, bracket.base_dim(), opts.max_degree);
            let s = t.scale_slots(&f1, &f2, &g);
            let v = torsion_value(bracket, &s);
            checked += 1;
            if !v.is_zero() {
                r.fail(format!("T = {v} at {}", s.render()));
                break;
            }
        }
    }
    r.note(format!("{checked} tuples evaluated"));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Endomorphism;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_int_rows(rows)
    }

    #[test]
    fn graph_composition_is_matrix_product() {
        let a = m(&[&[1, 2], &[0, 1], &[3, -1]]);
        let b = m(&[&[2, 0, 1], &[1, 1, 1]]);
        let composed = compose(&LinearRelation::graph(&a), &LinearRelation::graph(&b)).unwrap();
        assert_eq!(composed, LinearRelation::graph(&b.mul(&a)));
    }

    #[test]
    fn dual_of_graph_is_graph_of_transpose() {
        let a = m(&[&[1, 2, 0], &[0, 1, -1]]);
        assert_eq!(LinearRelation::graph(&a).dual(), LinearRelation::graph(&a.transpose()));
    }

    #[test]
    fn kernel_type_relations_compose_to_zero() {
        let v0 = m(&[&[1], &[0]]);
        let w0 = m(&[&[0], &[1]]);
        // {0} x W0 followed by V0 x {0}
        let r = LinearRelation::product(&Matrix::zeros(2, 0), &w0);
        let next = LinearRelation::product(&v0, &Matrix::zeros(2, 0));
        assert!(compose(&r, &next).unwrap().is_zero());
        assert_eq!(diamond(&r, &next).unwrap().dim(), 0);
    }

    #[test]
    fn torsion_on_identity_graph_with_abelian_bracket() {
        let abelian = AlgebroidStructure::lie_algebra(2, |_, _| vec![]);
        let n = LinearRelation::graph(&Matrix::identity(2));
        let report = is_nijenhuis_relation(&n, &abelian, &SamplingOptions::default()).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn membership_is_enforced() {
        let t = AlgebroidStructure::tangent(2);
        let n = LinearRelation::graph(&Endomorphism::identity(2).matrix);
        let one = vec![Poly::one(), Poly::zero()];
        let bad = RelationChainTuple {
            u1: one.clone(),
            v1: vec![Poly::zero(), Poly::one()],
            u2: one.clone(),
            v2: one.clone(),
            alpha: one.clone(),
            alpha1: one.clone(),
            alpha2: one,
        };
        assert!(matches!(
            torsion_eval(&n, &t, &bad),
            Err(Error::ConstraintViolation(_))
        ));
    }
}
