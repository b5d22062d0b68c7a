//! Built-in structures and seeded generators of random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{AlgebroidStructure, Bivector, Endomorphism, TwoForm};
use crate::kernel::Superfunction;
use crate::linalg::{self, Matrix};
use crate::pairs::{self, k_subspace, omegan_check, weak_omegan_check};
use crate::poly::{int, Poly};
use crate::proto::{check_proto, twist_by_bivector, twist_by_form, ProtoStructure};
use crate::relations::{is_nijenhuis_relation, relation_from_bivectors, SamplingOptions};

type S = Superfunction;

pub fn so3() -> AlgebroidStructure {
    AlgebroidStructure::lie_algebra_from_table(3, &[(0, 1, vec![0, 0, 1]), (1, 2, vec![1, 0, 0]), (0, 2, vec![0, -1, 0])])
}

/// Basis `(e, f, h)` with `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`.
pub fn sl2() -> AlgebroidStructure {
    AlgebroidStructure::lie_algebra_from_table(3, &[(0, 1, vec![0, 0, 1]), (0, 2, vec![-2, 0, 0]), (1, 2, vec![0, 2, 0])])
}

/// `[e1, e2] = e3`.
pub fn heisenberg() -> AlgebroidStructure {
    AlgebroidStructure::lie_algebra_from_table(3, &[(0, 1, vec![0, 0, 1])])
}

/// so(3) with `[e1, e2] = e3 + e1`; violates Jacobi.
pub fn perturbed_so3() -> AlgebroidStructure {
    AlgebroidStructure::lie_algebra_from_table(3, &[(0, 1, vec![1, 0, 1]), (1, 2, vec![1, 0, 0]), (0, 2, vec![0, -1, 0])])
}

/// `[e1, e2] = e2`.
pub fn affine2() -> AlgebroidStructure {
    AlgebroidStructure::lie_algebra_from_table(2, &[(0, 1, vec![0, 1])])
}

/// gl(2) in the basis `E11, E12, E22, E21`.
pub fn gl2() -> AlgebroidStructure {
    AlgebroidStructure::lie_algebra_from_table(
        4,
        &[
            (0, 1, vec![0, 1, 0, 0]),
            (0, 3, vec![0, 0, 0, -1]),
            (1, 2, vec![0, 1, 0, 0]),
            (1, 3, vec![1, 0, -1, 0]),
            (2, 3, vec![0, 0, 0, 1]),
        ],
    )
}

/// `[e4, e1] = e2`, `[e4, e2] = -e1`, `[e1, e2] = e3`.
pub fn oscillator() -> AlgebroidStructure {
    AlgebroidStructure::lie_algebra_from_table(
        4,
        &[(0, 1, vec![0, 0, 1, 0]), (0, 3, vec![0, -1, 0, 0]), (1, 3, vec![1, 0, 0, 0])],
    )
}

/// `[e4, e_i] = e_i` for `i ≤ 3`.
pub fn dilation4() -> AlgebroidStructure {
    AlgebroidStructure::lie_algebra_from_table(
        4,
        &[(0, 3, vec![-1, 0, 0, 0]), (1, 3, vec![0, -1, 0, 0]), (2, 3, vec![0, 0, -1, 0])],
    )
}

pub fn abelian(r: usize) -> AlgebroidStructure {
    AlgebroidStructure::lie_algebra(r, |_, _| Vec::new())
}

/// `g ⊕ R`.
pub fn with_center(g: &AlgebroidStructure) -> AlgebroidStructure {
    let r = g.rank();
    AlgebroidStructure::lie_algebra(r + 1, |a, b| {
        if b < r {
            (0..r)
                .map(|c| g.structure_function(c, a, b).constant_term())
                .chain(std::iter::once(int(0)))
                .collect()
        } else {
            Vec::new()
        }
    })
}

/// Lie algebras of dimension at most four used by the randomized suites.
pub fn small_lie_algebras() -> Vec<(&'static str, AlgebroidStructure)> {
    vec![
        ("abelian-2", abelian(2)),
        ("affine-2", affine2()),
        ("abelian-3", abelian(3)),
        ("so3", so3()),
        ("sl2", sl2()),
        ("heisenberg", heisenberg()),
        ("so3+R", with_center(&so3())),
        ("heisenberg+R", with_center(&heisenberg())),
        ("gl2", gl2()),
        ("oscillator", oscillator()),
        ("dilation-4", dilation4()),
    ]
}

/// The standard Lie bialgebra on sl(2): cobracket `γ = -{μ, e∧f}`.
pub fn sl2_bialgebra() -> ProtoStructure {
    let alg = sl2();
    let r = &S::theta(0) * &S::theta(1);
    let gamma = -alg.mu().bracket(&r);
    ProtoStructure::new(0, 3, S::zero(), gamma, alg.mu().clone(), S::zero()).expect("bidegrees")
}

/// Linear Poisson structure on the dual of `g`: `P_ab = Σ c^c_ab x_c`.
pub fn linear_poisson(g: &AlgebroidStructure) -> Bivector {
    let r = g.rank();
    let mut m = Matrix::zeros(r, r);
    for a in 0..r {
        for b in 0..r {
            let mut p = Poly::zero();
            for c in 0..r {
                p = &p + &(&g.structure_function(c, a, b) * &Poly::var(c));
            }
            m.set(a, b, p);
        }
    }
    Bivector::from_matrix(&m)
}

/// Constant Poisson structure `P_ab = Σ c^c_ab a_c` on the dual of `g`.
pub fn frozen_poisson(g: &AlgebroidStructure, point: &[i64]) -> Bivector {
    let r = g.rank();
    let mut m = Matrix::zeros(r, r);
    for a in 0..r {
        for b in 0..r {
            let mut p = Poly::zero();
            for c in 0..r {
                p = &p + &g.structure_function(c, a, b).scale(&int(point[c]));
            }
            m.set(a, b, p);
        }
    }
    Bivector::from_matrix(&m)
}

pub fn skew_from_entries(r: usize, entries: &[Poly]) -> Matrix {
    let mut m = Matrix::zeros(r, r);
    let mut k = 0;
    for a in 0..r {
        for b in a + 1..r {
            m.set(a, b, entries[k].clone());
            m.set(b, a, -&entries[k]);
            k += 1;
        }
    }
    m
}

pub fn random_constant_skew(rng: &mut impl Rng, r: usize, bound: i64) -> Matrix {
    let entries: Vec<Poly> = (0..r * (r - 1) / 2)
        .map(|_| Poly::from_int(rng.random_range(-bound..=bound)))
        .collect();
    skew_from_entries(r, &entries)
}

pub fn random_bivector(rng: &mut impl Rng, r: usize, bound: i64) -> Bivector {
    Bivector::from_matrix(&random_constant_skew(rng, r, bound))
}

pub fn random_two_form(rng: &mut impl Rng, r: usize, bound: i64) -> TwoForm {
    TwoForm::from_matrix(&random_constant_skew(rng, r, bound))
}

/// A random polynomial bivector on `R²` (always Poisson there).
pub fn random_plane_bivector(rng: &mut impl Rng) -> Bivector {
    let mut p = Poly::from_int(rng.random_range(-2..=2));
    for _ in 0..rng.random_range(0..=2) {
        let e = vec![rng.random_range(0..=2), rng.random_range(0..=1)];
        p.add_term(e, int(rng.random_range(-2..=2)));
    }
    Bivector::from_matrix(&skew_from_entries(2, &[p]))
}

/// A pair of bivectors for the torsion identity suite.
#[derive(Clone, Debug)]
pub struct BivectorPairInstance {
    pub algebra: &'static str,
    pub algebroid: AlgebroidStructure,
    pub pi: Bivector,
    pub pi_prime: Bivector,
}

/// `count` random constant bivector pairs over the small Lie algebras.
pub fn random_bivector_pairs(seed: u64, count: usize) -> Vec<BivectorPairInstance> {
    let algebras = small_lie_algebras();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let (name, alg) = &algebras[k % algebras.len()];
            let r = alg.rank();
            BivectorPairInstance {
                algebra: name,
                algebroid: alg.clone(),
                pi: random_bivector(&mut rng, r, 2),
                pi_prime: random_bivector(&mut rng, r, 2),
            }
        })
        .collect()
}

/// Pairs `f ∂a∧∂b`, `g ∂c∧∂d` on `R³` with `f, g ∈ {1, x1, x2, x3}`.
/// Every such bivector is Poisson; about a third of the pairs are not
/// Poisson pairs.
pub fn rank_two_pairs() -> Vec<BivectorPairInstance> {
    let coefficients = [Poly::one(), Poly::var(0), Poly::var(1), Poly::var(2)];
    let single = |slot: usize, f: &Poly| {
        let mut e = vec![Poly::zero(); 3];
        e[slot] = f.clone();
        Bivector::from_matrix(&skew_from_entries(3, &e))
    };
    let mut out = Vec::new();
    for a in 0..3 {
        for b in a + 1..3 {
            for f in &coefficients {
                for g in &coefficients {
                    out.push(BivectorPairInstance {
                        algebra: "R3",
                        algebroid: AlgebroidStructure::tangent(3),
                        pi: single(a, f),
                        pi_prime: single(b, g),
                    });
                }
            }
        }
    }
    out
}

/// Hamiltonian pairs: argument-shift pairs on duals of Lie algebras,
/// constant pairs on abelian algebras, random pairs on `R²`, constant
/// pairs filtered by `[π,π] = [π',π'] = [π,π'] = 0` on small Lie algebras,
/// and the pairs of Poisson bivectors inverse to the Monge-Ampère forms.
pub fn hamiltonian_pairs(seed: u64, count: usize) -> Vec<BivectorPairInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (name, g) in [("so3*", so3()), ("sl2*", sl2()), ("heisenberg*", heisenberg())] {
        for _ in 0..3 {
            let point: Vec<i64> = (0..3).map(|_| rng.random_range(-2..=2)).collect();
            out.push(BivectorPairInstance {
                algebra: name,
                algebroid: AlgebroidStructure::tangent(3),
                pi: linear_poisson(&g),
                pi_prime: frozen_poisson(&g, &point),
            });
        }
    }
    for _ in 0..4 {
        out.push(BivectorPairInstance {
            algebra: "R2",
            algebroid: AlgebroidStructure::tangent(2),
            pi: random_plane_bivector(&mut rng),
            pi_prime: random_plane_bivector(&mut rng),
        });
    }
    {
        use crate::pairs::monge_ampere::*;
        for w in [omega_h(), omega_e()] {
            out.push(BivectorPairInstance {
                algebra: "T*R2",
                algebroid: algebroid(),
                pi: pi_omega(),
                pi_prime: Bivector::from_matrix(&linalg::inverse(&w.matrix()).expect("symplectic")),
            });
        }
    }
    let algebras = small_lie_algebras();
    let mut attempts = 0;
    while out.len() < count && attempts < 200 * count {
        attempts += 1;
        let (name, g) = &algebras[rng.random_range(0..algebras.len())];
        let r = g.rank();
        let pi = random_bivector(&mut rng, r, 1);
        let pi_prime = random_bivector(&mut rng, r, 1);
        let zero = |a: &Bivector, b: &Bivector| g.schouten(&a.element, &b.element).is_zero();
        if zero(&pi, &pi) && zero(&pi_prime, &pi_prime) && zero(&pi, &pi_prime) {
            out.push(BivectorPairInstance {
                algebra: name,
                algebroid: g.clone(),
                pi,
                pi_prime,
            });
        }
    }
    out
}

/// Poisson pairs on small Lie algebras with `[π,π'] ≠ 0`, constant
/// bivectors with entries in `{-1, 0, 1}` built from at most two basis
/// bivectors. Returns the instances whose relation `N(π,π')` is Nijenhuis.
pub fn degenerate_poisson_pair_sweep(limit: usize) -> Vec<BivectorPairInstance> {
    let opts = SamplingOptions::default();
    let mut found = Vec::new();
    for (name, g) in small_lie_algebras() {
        let r = g.rank();
        let pairs_idx: Vec<(usize, usize)> = (0..r).flat_map(|a| (a + 1..r).map(move |b| (a, b))).collect();
        let mut candidates = Vec::new();
        for i in 0..pairs_idx.len() {
            for j in i..pairs_idx.len() {
                for sign in [1i64, -1] {
                    let mut entries = vec![Poly::zero(); pairs_idx.len()];
                    entries[i] = Poly::one();
                    if j != i {
                        entries[j] = Poly::from_int(sign);
                    } else if sign == -1 {
                        continue;
                    }
                    let pi = Bivector::from_matrix(&skew_from_entries(r, &entries));
                    if g.schouten(&pi.element, &pi.element).is_zero() {
                        candidates.push(pi);
                    }
                }
            }
        }
        for a in &candidates {
            for b in &candidates {
                if g.schouten(&a.element, &b.element).is_zero() {
                    continue;
                }
                let n = relation_from_bivectors(a, b);
                let rep = is_nijenhuis_relation(&n, &g, &opts).expect("dimensions");
                if rep.passed() {
                    found.push(BivectorPairInstance {
                        algebra: name,
                        algebroid: g.clone(),
                        pi: a.clone(),
                        pi_prime: b.clone(),
                    });
                    if found.len() >= limit {
                        return found;
                    }
                }
            }
        }
    }
    found
}

/// The degenerate Poisson pair on gl(2) found by the sweep:
/// `π = E11∧E12`, `π' = E22∧E21`, with `K = 0` and `[π,π'] ≠ 0`.
pub fn degenerate_poisson_pair() -> BivectorPairInstance {
    let mut p = vec![Poly::zero(); 6];
    p[0] = Poly::one();
    let mut q = vec![Poly::zero(); 6];
    q[5] = Poly::one();
    BivectorPairInstance {
        algebra: "gl2",
        algebroid: gl2(),
        pi: Bivector::from_matrix(&skew_from_entries(4, &p)),
        pi_prime: Bivector::from_matrix(&skew_from_entries(4, &q)),
    }
}

/// Dimension of `K` for a pair.
pub fn k_dimension(inst: &BivectorPairInstance) -> usize {
    k_subspace(&inst.pi.matrix(), &inst.pi_prime.matrix()).ncols()
}

/// Searches `N = [[a,0,0],[0,a,0],[b,c,d]]` (the endomorphisms with
/// `ω∘N` skew for `ω = dx1∧dx2` on `R³`), entries in `{0, 1, x1, x2, x3}`,
/// for weak ΩN-structures that are not ΩN-structures.
pub fn weak_omegan_sweep(limit: usize) -> Vec<(TwoForm, Endomorphism)> {
    let alg = AlgebroidStructure::tangent(3);
    let omega = TwoForm::from_matrix(&skew_from_entries(3, &[Poly::one(), Poly::zero(), Poly::zero()]));
    let values = [Poly::zero(), Poly::one(), Poly::var(0), Poly::var(1), Poly::var(2)];
    let mut found = Vec::new();
    for a in &values {
        for b in &values {
            for c in &values {
                for d in &values {
                    let mut m = Matrix::zeros(3, 3);
                    m.set(0, 0, a.clone());
                    m.set(1, 1, a.clone());
                    m.set(2, 0, b.clone());
                    m.set(2, 1, c.clone());
                    m.set(2, 2, d.clone());
                    let n = Endomorphism::new(m);
                    let weak = weak_omegan_check(&alg, &omega, &n).expect("skew by construction");
                    if weak.passed() && omegan_check(&alg, &omega, &n).expect("skew").failed() {
                        found.push((omega.clone(), n));
                        if found.len() >= limit {
                            return found;
                        }
                    }
                }
            }
        }
    }
    found
}

/// `ω = dx1∧dx2` on `R³` with `N∂1 = x2∂3`, `N∂3 = ∂3`: weak ΩN, not ΩN.
pub fn weak_omegan_instance() -> (AlgebroidStructure, TwoForm, Endomorphism) {
    let omega = TwoForm::from_matrix(&skew_from_entries(3, &[Poly::one(), Poly::zero(), Poly::zero()]));
    let mut m = Matrix::zeros(3, 3);
    m.set(2, 0, Poly::var(1));
    m.set(2, 2, Poly::one());
    (AlgebroidStructure::tangent(3), omega, Endomorphism::new(m))
}

/// `Ω = dq1∧dp1 + dq2∧dp2` with `N = diag(q1, q2², q1, q2²)` in the order
/// `(q1, q2, p1, p2)`: an ΩN-structure with polynomial coefficients.
pub fn polynomial_omegan() -> (AlgebroidStructure, TwoForm, Endomorphism) {
    let mut m = Matrix::zeros(4, 4);
    let q1 = Poly::var(0);
    let q2sq = &Poly::var(1) * &Poly::var(1);
    m.set(0, 0, q1.clone());
    m.set(1, 1, q2sq.clone());
    m.set(2, 2, q1);
    m.set(3, 3, q2sq);
    (AlgebroidStructure::tangent(4), pairs::monge_ampere::omega(), Endomorphism::new(m))
}

/// Proto-bialgebroids on a point with `{Θ,Θ} = 0`: Lie algebras of
/// dimension at most four with random closed cubic terms, the sl(2)
/// bialgebra, and random bivector and form twists of these.
pub fn random_proto_structures(seed: u64, count: usize) -> Vec<ProtoStructure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seeds = vec![sl2_bialgebra()];
    for (_, g) in small_lie_algebras() {
        let r = g.rank();
        seeds.push(ProtoStructure::trivial(&g));
        if r >= 3 {
            for _ in 0..2 {
                let psi = random_cubic(&mut rng, r, false);
                let phi = random_cubic(&mut rng, r, true);
                let quasi = ProtoStructure::new(0, r, S::zero(), S::zero(), g.mu().clone(), psi).expect("bidegrees");
                if check_proto(&quasi).passed() {
                    seeds.push(quasi);
                }
                let dual = ProtoStructure::new(0, r, phi, S::zero(), g.mu().clone(), S::zero()).expect("bidegrees");
                if check_proto(&dual).passed() {
                    seeds.push(dual);
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut k = 0;
    while out.len() < count {
        let base = &seeds[k % seeds.len()];
        k += 1;
        let r = base.rank;
        let twisted = match k % 3 {
            0 => twist_by_bivector(base, &random_bivector(&mut rng, r, 1)),
            1 => twist_by_form(base, &random_two_form(&mut rng, r, 1)),
            _ => twist_by_bivector(base, &random_bivector(&mut rng, r, 1))
                .and_then(|t| twist_by_form(&t, &random_two_form(&mut rng, r, 1))),
        }
        .expect("bidegrees");
        out.push(if k <= seeds.len() { base.clone() } else { twisted });
    }
    out
}

/// A random element of `∧³A` (`vectors`) or `∧³A*` with small coefficients.
pub fn random_cubic(rng: &mut impl Rng, r: usize, vectors: bool) -> S {
    let mut s = S::zero();
    for a in 0..r {
        for b in a + 1..r {
            for c in b + 1..r {
                let k = rng.random_range(-1..=1);
                if k != 0 {
                    let g = |i| if vectors { S::theta(i) } else { S::xi(i) };
                    s += &(&(&g(a) * &g(b)) * &g(c)).scale(&int(k));
                }
            }
        }
    }
    s
}
