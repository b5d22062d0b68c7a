//! Compatibility of pairs of structures on a Lie algebroid: Hamiltonian,
//! Poisson and Dirac pairs, presymplectic pairs, PΩ- and ΩN-structures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{
    evaluate_form, render_vector, trivector_on_forms, unit, AlgebroidStructure, Bivector, Endomorphism,
    GeometricTensor, TwoForm,
};
use crate::kernel::{pair, Superfunction};
use crate::linalg::{self, Matrix};
use crate::poly::{int, Poly};
use crate::proto::{is_dirac, DoubleSubbundle, ProtoStructure};
use crate::relations::{
    is_nijenhuis_relation, random_poly, relation_from_bivectors, relation_of_subbundles, torsion_value,
    LinearRelation, RelationChainTuple, SamplingOptions,
};
use crate::report::{CheckReport, Regime};

type S = Superfunction;

/// Two structures on one algebroid, with the derived subspaces used by the
/// pair checks.
#[derive(Clone, Debug)]
pub struct PairContext {
    pub algebroid: AlgebroidStructure,
    pub first: GeometricTensor,
    pub second: GeometricTensor,
}

impl PairContext {
    pub fn new(algebroid: AlgebroidStructure, first: GeometricTensor, second: GeometricTensor) -> Self {
        Self {
            algebroid,
            first,
            second,
        }
    }

    fn bivectors(&self) -> Result<(&Bivector, &Bivector)> {
        match (&self.first, &self.second) {
            (GeometricTensor::Bivector(a), GeometricTensor::Bivector(b)) => Ok((a, b)),
            _ => Err(Error::Precondition("expected two bivectors".into())),
        }
    }

    /// `N(π, π')`, or `N_{L,L'}` for the graphs of two forms.
    pub fn relation(&self) -> Result<LinearRelation> {
        match (&self.first, &self.second) {
            (GeometricTensor::Bivector(a), GeometricTensor::Bivector(b)) => Ok(relation_from_bivectors(a, b)),
            (GeometricTensor::TwoForm(a), GeometricTensor::TwoForm(b)) => relation_of_subbundles(
                &DoubleSubbundle::graph_of_form(a).as_relation(),
                &DoubleSubbundle::graph_of_form(b).as_relation(),
            ),
            _ => Err(Error::Precondition("relation of mixed tensors".into())),
        }
    }

    /// `K = π⁻¹(Im π') ∩ π'⁻¹(Im π) ⊂ A*`.
    pub fn k_subspace(&self) -> Result<Matrix> {
        let (pi, pi_prime) = self.bivectors()?;
        Ok(k_subspace(&pi.matrix(), &pi_prime.matrix()))
    }

    pub fn k_perp(&self) -> Result<Matrix> {
        Ok(linalg::annihilator(&self.k_subspace()?))
    }

    /// `N⁺ = {(ωx, ω_N x)}` for a form and an endomorphism.
    pub fn n_plus(&self) -> Result<LinearRelation> {
        match (&self.first, &self.second) {
            (GeometricTensor::TwoForm(w), GeometricTensor::Endo(n)) => n_plus(w, n),
            _ => Err(Error::Precondition("N⁺ needs a two-form and an endomorphism".into())),
        }
    }
}

/// Preimage `{ξ | Pξ ∈ span(image)}`.
fn preimage(p: &Matrix, image: &Matrix) -> Matrix {
    let ann = linalg::annihilator(image);
    if ann.ncols() == 0 {
        return Matrix::identity(p.ncols());
    }
    linalg::kernel(&ann.transpose().mul(p))
}

pub fn k_subspace(p: &Matrix, p_prime: &Matrix) -> Matrix {
    let a = preimage(p, p_prime);
    let b = preimage(p_prime, p);
    linalg::intersect_column_spans(&a, &b)
}

fn regime_of(alg: &AlgebroidStructure, constant: bool) -> Regime {
    if alg.has_constant_coefficients() && constant {
        Regime::ExactBasis
    } else {
        Regime::SampledPolynomial
    }
}

/// `[π, π] = 0`.
pub fn is_poisson(alg: &AlgebroidStructure, pi: &Bivector) -> CheckReport {
    let mut r = CheckReport::new("poisson").with_regime(regime_of(alg, pi.matrix().is_constant()));
    let s = alg.schouten(&pi.element, &pi.element);
    r.condition("[pi,pi] = 0", s.is_zero(), || s.to_string());
    r
}

fn require_poisson(alg: &AlgebroidStructure, pi: &Bivector, what: &str) -> Result<()> {
    let s = alg.schouten(&pi.element, &pi.element);
    if s.is_zero() {
        Ok(())
    } else {
        Err(Error::NotPoisson(format!("{what}: [pi,pi] = {s}")))
    }
}

/// `[π, π'] = 0`, cross-checked against `π + π'` being Poisson.
pub fn is_hamiltonian_pair(alg: &AlgebroidStructure, pi: &Bivector, pi_prime: &Bivector) -> Result<CheckReport> {
    require_poisson(alg, pi, "first")?;
    require_poisson(alg, pi_prime, "second")?;
    let constant = pi.matrix().is_constant() && pi_prime.matrix().is_constant();
    let mut r = CheckReport::new("hamiltonian-pair").with_regime(regime_of(alg, constant));
    let mixed = alg.schouten(&pi.element, &pi_prime.element);
    let sum = pi.add(pi_prime);
    let sum_poisson = alg.schouten(&sum.element, &sum.element).is_zero();
    r.condition("[pi,pi'] = 0", mixed.is_zero(), || mixed.to_string());
    r.condition("[pi,pi'] = 0 iff pi + pi' is Poisson", mixed.is_zero() == sum_poisson, || {
        format!("sum Poisson: {sum_poisson}")
    });
    Ok(r)
}

/// Admissible chains `(ξ, ξ', ξ'')` with `πξ = π'ξ'` and `πξ' = π'ξ''`.
pub fn admissible_chains(pi: &Bivector, pi_prime: &Bivector) -> Vec<[Vec<Poly>; 3]> {
    let r = pi.rank;
    let p = pi.matrix();
    let q = pi_prime.matrix().neg();
    let z = Matrix::zeros(r, r);
    let system = p.hstack(&q).hstack(&z).vstack(&z.hstack(&p).hstack(&q));
    linalg::kernel(&system)
        .columns()
        .into_iter()
        .map(|c| [c[..r].to_vec(), c[r..2 * r].to_vec(), c[2 * r..].to_vec()])
        .collect()
}

fn add_vec(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Both sides of the torsion identity for `N(π, π')`:
/// `2T = <ξ,[π,π](ξ1,ξ2)> + <ξ'',[π',π'](ξ1,ξ2)> - 2<ξ',[π,π'](ξ1,ξ2)>`.
pub fn torsion_identity_sides(
    alg: &AlgebroidStructure,
    pi: &Bivector,
    pi_prime: &Bivector,
    xi1: &[Poly],
    xi2: &[Poly],
    chain: &[Vec<Poly>; 3],
) -> (Poly, Poly) {
    let rank = alg.rank();
    let tuple = RelationChainTuple {
        u1: pi_prime.map(xi1),
        v1: pi.map(xi1),
        u2: pi_prime.map(xi2),
        v2: pi.map(xi2),
        alpha: chain[0].clone(),
        alpha1: chain[1].clone(),
        alpha2: chain[2].clone(),
    };
    let lhs = torsion_value(alg, &tuple).scale(&int(2));
    let pp = alg.schouten(&pi.element, &pi.element);
    let qq = alg.schouten(&pi_prime.element, &pi_prime.element);
    let pq = alg.schouten(&pi.element, &pi_prime.element);
    let rhs = &(&pair(&chain[0], &trivector_on_forms(&pp, xi1, xi2, rank))
        + &pair(&chain[2], &trivector_on_forms(&qq, xi1, xi2, rank)))
        - &pair(&chain[1], &trivector_on_forms(&pq, xi1, xi2, rank)).scale(&int(2));
    (lhs, rhs)
}

/// Evaluates both sides of the torsion identity on basis forms and a basis
/// of admissible chains; vacuous when the only chain is zero.
pub fn torsion_identity_check(
    alg: &AlgebroidStructure,
    pi: &Bivector,
    pi_prime: &Bivector,
    opts: &SamplingOptions,
) -> CheckReport {
    let constant = pi.matrix().is_constant() && pi_prime.matrix().is_constant();
    let mut r = CheckReport::new("torsion-identity").with_regime(regime_of(alg, constant));
    let chains = admissible_chains(pi, pi_prime);
    if chains.is_empty() {
        r.vacuous("no admissible chains");
        return r;
    }
    let n = alg.rank();
    let mut evaluated = 0usize;
    let mut mismatch = None;
    for a in 0..n {
        for b in 0..n {
            for c in &chains {
                let (lhs, rhs) = torsion_identity_sides(alg, pi, pi_prime, &unit(n, a), &unit(n, b), c);
                evaluated += 1;
                if lhs != rhs && mismatch.is_none() {
                    mismatch = Some(format!("e{} e{}: 2T = {lhs}, right side = {rhs}", a + 1, b + 1));
                }
            }
        }
    }
    if r.regime == Regime::SampledPolynomial {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.samples {
            let xi1: Vec<Poly> = (0..n).map(|_| random_poly(&mut rng, alg.base_dim(), opts.max_degree)).collect();
            let xi2: Vec<Poly> = (0..n).map(|_| random_poly(&mut rng, alg.base_dim(), opts.max_degree)).collect();
            let f = random_poly(&mut rng, alg.base_dim(), opts.max_degree);
            let c = &chains[rng.random_range(0..chains.len())];
            let scaled = [0, 1, 2].map(|i| c[i].iter().map(|p| p * &f).collect::<Vec<_>>());
            let (lhs, rhs) = torsion_identity_sides(alg, pi, pi_prime, &xi1, &xi2, &scaled);
            evaluated += 1;
            if lhs != rhs && mismatch.is_none() {
                mismatch = Some(format!("sampled: 2T = {lhs}, right side = {rhs}"));
            }
        }
    }
    r.condition("both sides agree", mismatch.is_none(), || mismatch.clone().unwrap_or_default());
    r.note(format!("verified on {evaluated} chain tuples"));
    r
}

/// `N(π, π')` is a Nijenhuis relation; symmetric in the two bivectors.
/// On success, `[π, π']` on basis forms is checked to annihilate `K`.
pub fn is_poisson_pair(
    alg: &AlgebroidStructure,
    pi: &Bivector,
    pi_prime: &Bivector,
    opts: &SamplingOptions,
) -> Result<CheckReport> {
    require_poisson(alg, pi, "first")?;
    require_poisson(alg, pi_prime, "second")?;
    let mut r = CheckReport::new("poisson-pair");
    let forward = is_nijenhuis_relation(&relation_from_bivectors(pi, pi_prime), alg, opts)?;
    let backward = is_nijenhuis_relation(&relation_from_bivectors(pi_prime, pi), alg, opts)?;
    r.absorb(&forward);
    r.condition("symmetric in the two bivectors", forward.verdict == backward.verdict, || {
        format!("reversed pair gives {}", backward.verdict)
    });
    r.notes.extend(forward.notes.iter().cloned());
    if forward.failed() {
        return Ok(r);
    }
    let k = k_subspace(&pi.matrix(), &pi_prime.matrix());
    let mixed = alg.schouten(&pi.element, &pi_prime.element);
    let n = alg.rank();
    let mut outside = None;
    'outer: for a in 0..n {
        for b in a + 1..n {
            let v = trivector_on_forms(&mixed, &unit(n, a), &unit(n, b), n);
            for kv in k.columns() {
                let p = pair(&kv, &v);
                if !p.is_zero() {
                    outside = Some(format!("[pi,pi'](e{}, e{}) = {}", a + 1, b + 1, render_vector(&v)));
                    break 'outer;
                }
            }
        }
    }
    r.condition("[pi,pi'] takes values in K⊥", outside.is_none(), || outside.clone().unwrap_or_default());
    r.note(format!("dim K = {} of {}", k.ncols(), n));
    if !mixed.is_zero() {
        r.note("not a Hamiltonian pair");
    }
    if k.ncols() == n {
        r.condition("K = A* forces a Hamiltonian pair", mixed.is_zero(), || mixed.to_string());
    }
    Ok(r)
}

/// `N = π'π⁻¹`, possibly with a polynomial denominator.
#[derive(Clone, Debug)]
pub struct PairEndomorphism {
    pub numerator: Matrix,
    pub denominator: Poly,
    pub report: CheckReport,
}

impl PairEndomorphism {
    /// The endomorphism, when its entries are polynomials.
    pub fn endomorphism(&self) -> Option<Endomorphism> {
        let c = self.denominator.constant_value()?;
        Some(Endomorphism::new(self.numerator.scale(&Poly::constant(c.recip()))))
    }
}

/// `N = π'π⁻¹` with its torsion verdict, computed as `TN` when `N` is
/// polynomial and always as the torsion of `N(π', π) = graph N`.
pub fn nijenhuis_from_pair(
    alg: &AlgebroidStructure,
    pi: &Bivector,
    pi_prime: &Bivector,
    opts: &SamplingOptions,
) -> Result<PairEndomorphism> {
    let p = pi.matrix();
    let (adj, det) = linalg::inverse_fraction(&p).ok_or_else(|| Error::Singular("first bivector".into()))?;
    let numerator = pi_prime.matrix().mul(&adj);
    let mut r = CheckReport::new("nijenhuis-from-pair");
    let relation = relation_from_bivectors(pi_prime, pi);
    let graph = LinearRelation::new(alg.rank(), alg.rank(), &Matrix::identity(alg.rank()).scale(&det).vstack(&numerator))?;
    r.condition("N(pi', pi) = graph N", relation == graph, || relation.render());
    let via_relation = is_nijenhuis_relation(&relation, alg, opts)?;
    r.merge_regime(via_relation.regime);
    let mut out = PairEndomorphism {
        numerator,
        denominator: det.clone(),
        report: CheckReport::new(""),
    };
    let torsion_free = match out.endomorphism() {
        Some(n) => {
            let direct = alg.torsion_report(&n);
            r.merge_regime(direct.regime);
            r.condition("TN = 0 iff N(pi', pi) is Nijenhuis", direct.passed() == via_relation.passed(), || {
                format!("direct {}, relation {}", direct.verdict, via_relation.verdict)
            });
            for w in &direct.witnesses {
                r.witness(w.clone());
            }
            direct.passed()
        }
        None => {
            r.note(format!("N has denominator {det}"));
            via_relation.passed()
        }
    };
    r.condition("TN = 0", torsion_free, || via_relation.witnesses.join("; "));
    let both_poisson = require_poisson(alg, pi, "").is_ok() && require_poisson(alg, pi_prime, "").is_ok();
    if both_poisson && linalg::inverse_fraction(&pi_prime.matrix()).is_some() {
        let hamiltonian = alg.schouten(&pi.element, &pi_prime.element).is_zero();
        r.condition(
            "for non-degenerate Poisson bivectors, TN = 0 iff Hamiltonian pair",
            hamiltonian == torsion_free,
            || format!("hamiltonian {hamiltonian}, torsion-free {torsion_free}"),
        );
    }
    out.report = r;
    Ok(out)
}

fn trivial_proto(alg: &AlgebroidStructure) -> ProtoStructure {
    ProtoStructure::trivial(alg)
}

/// `N_{L,L'} = L̄ ∗ L'` is a Nijenhuis relation, for Dirac structures `L, L'`.
pub fn dirac_pair_check(
    alg: &AlgebroidStructure,
    l: &DoubleSubbundle,
    l_prime: &DoubleSubbundle,
    opts: &SamplingOptions,
) -> Result<CheckReport> {
    let proto = trivial_proto(alg);
    for (which, sub) in [("first", l), ("second", l_prime)] {
        let d = is_dirac(&proto, sub, opts);
        if d.failed() {
            return Err(Error::NotDirac(format!("{which}: {}", d.witnesses.join("; "))));
        }
    }
    let mut r = CheckReport::new("dirac-pair");
    let n = relation_of_subbundles(&l.as_relation(), &l_prime.as_relation())?;
    let reversed = relation_of_subbundles(&l_prime.as_relation(), &l.as_relation())?;
    r.condition("N_{L',L} is the inverse of N_{L,L'}", reversed == n.inverse(), || reversed.render());
    let nij = is_nijenhuis_relation(&n, alg, opts)?;
    r.absorb(&nij);
    if nij.verdict == crate::report::Verdict::Vacuous {
        r.vacuous(nij.notes.join("; "));
    }
    r.notes.extend(nij.notes.iter().cloned());
    Ok(r)
}

fn require_closed(alg: &AlgebroidStructure, w: &TwoForm, what: &str) -> Result<()> {
    let d = alg.d(&w.element);
    if d.is_zero() {
        Ok(())
    } else {
        Err(Error::NotClosed(format!("{what}: d omega = {d}")))
    }
}

/// The graphs of two closed forms constitute a Dirac pair.
pub fn presymplectic_pair_check(
    alg: &AlgebroidStructure,
    omega: &TwoForm,
    omega_prime: &TwoForm,
    opts: &SamplingOptions,
) -> Result<CheckReport> {
    require_closed(alg, omega, "first")?;
    require_closed(alg, omega_prime, "second")?;
    let mut r = dirac_pair_check(
        alg,
        &DoubleSubbundle::graph_of_form(omega),
        &DoubleSubbundle::graph_of_form(omega_prime),
        opts,
    )?;
    r.check = "presymplectic-pair".into();
    Ok(r)
}

/// `N(π, π')` for `π = ω⁻¹`, `π' = ω'⁻¹`, with denominators cleared.
fn relation_of_inverses(w: &Matrix, w_prime: &Matrix) -> Option<LinearRelation> {
    let (a, d) = linalg::inverse_fraction(w)?;
    let (b, e) = linalg::inverse_fraction(w_prime)?;
    let gens = b.scale(&d).vstack(&a.scale(&e));
    LinearRelation::new(w.nrows(), w.nrows(), &gens).ok()
}

/// A presymplectic pair of non-degenerate forms, cross-checked against the
/// Poisson pair of their inverses.
pub fn symplectic_pair_check(
    alg: &AlgebroidStructure,
    omega: &TwoForm,
    omega_prime: &TwoForm,
    opts: &SamplingOptions,
) -> Result<CheckReport> {
    let pre = presymplectic_pair_check(alg, omega, omega_prime, opts)?;
    let mut r = CheckReport::new("symplectic-pair");
    r.absorb(&pre);
    let (w, w_prime) = (omega.matrix(), omega_prime.matrix());
    let Some(inverse_relation) = relation_of_inverses(&w, &w_prime) else {
        r.fail("a form is degenerate");
        return Ok(r);
    };
    let n = relation_of_subbundles(
        &DoubleSubbundle::graph_of_form(omega).as_relation(),
        &DoubleSubbundle::graph_of_form(omega_prime).as_relation(),
    )?;
    r.condition("N_{L,L'} = N(pi, pi') for the inverse bivectors", n == inverse_relation, || {
        inverse_relation.render()
    });
    let poisson_route = is_nijenhuis_relation(&inverse_relation, alg, opts)?;
    r.condition(
        "symplectic-pair verdict equals Poisson-pair verdict of the inverses",
        poisson_route.verdict == pre.verdict,
        || format!("Poisson route gives {}", poisson_route.verdict),
    );
    if let (Some(p), Some(q)) = (linalg::inverse(&w), linalg::inverse(&w_prime)) {
        let pp = is_poisson_pair(alg, &Bivector::from_matrix(&p), &Bivector::from_matrix(&q), opts)?;
        r.condition("is_poisson_pair agrees", pp.verdict == pre.verdict, || pp.verdict.to_string());
    }
    Ok(r)
}

/// `N = π∘ω`.
pub fn pi_omega_endomorphism(pi: &Bivector, omega: &TwoForm) -> Endomorphism {
    crate::geometry::compose_bivector_form(pi, omega)
}

/// PΩ-structure: `[π,π] = 0`, `dω = 0`, `d_N ω = 0` for `N = π∘ω`; on
/// success `N` must be Nijenhuis and the graphs a Dirac pair. When `π` is
/// invertible with polynomial inverse the converse is also checked.
pub fn pomega_check(
    alg: &AlgebroidStructure,
    pi: &Bivector,
    omega: &TwoForm,
    opts: &SamplingOptions,
) -> Result<CheckReport> {
    let constant = pi.matrix().is_constant() && omega.matrix().is_constant();
    let mut r = CheckReport::new("p-omega").with_regime(regime_of(alg, constant));
    let n = pi_omega_endomorphism(pi, omega);
    let pp = alg.schouten(&pi.element, &pi.element);
    let d_omega = alg.d(&omega.element);
    let dn_omega = alg.d_n(&n, &omega.element);
    let poisson = r.condition("[pi,pi] = 0", pp.is_zero(), || pp.to_string());
    let closed = r.condition("d omega = 0", d_omega.is_zero(), || d_omega.to_string());
    let dn_zero = dn_omega.is_zero();
    let omega_n = omega.compose(&n)?;
    let d_omega_n = alg.d(&omega_n.element);
    if closed {
        r.condition("d_N omega = 0 iff d omega_N = 0", dn_zero == d_omega_n.is_zero(), || {
            format!("d_N omega = {dn_omega}, d omega_N = {d_omega_n}")
        });
    }
    let core = r.condition("d_N omega = 0", dn_zero, || dn_omega.to_string());
    let torsion = alg.torsion_report(&n);
    if poisson && closed && core {
        r.absorb(&torsion);
        let dirac = dirac_pair_check(
            alg,
            &DoubleSubbundle::graph_of_bivector(pi),
            &DoubleSubbundle::graph_of_form(omega),
            opts,
        )?;
        r.absorb(&dirac);
    } else if poisson && closed && torsion.passed() {
        if linalg::inverse(&pi.matrix()).is_some() {
            r.condition("non-degenerate pi with TN = 0 forces d_N omega = 0", false, || {
                dn_omega.to_string()
            });
        }
    }
    Ok(r)
}

/// `N⁺ = {(ωx, ω_N x) | x ∈ A} ⊂ A* × A*`.
pub fn n_plus(omega: &TwoForm, n: &Endomorphism) -> Result<LinearRelation> {
    let w = omega.matrix();
    let wn = omega.compose(n)?.matrix();
    LinearRelation::new(w.nrows(), w.nrows(), &w.vstack(&wn))
}

/// `N = {(x, y) | ω_N x = ω y}`.
pub fn omega_relation(omega: &TwoForm, n: &Endomorphism) -> Result<LinearRelation> {
    let omega_n = omega.compose(n)?;
    relation_of_subbundles(
        &DoubleSubbundle::graph_of_form(omega).as_relation(),
        &DoubleSubbundle::graph_of_form(&omega_n).as_relation(),
    )
}

/// Compares `N⁺` with the dual of `N = {(x,y) | ω_N x = ωy}` exactly over
/// the field of rational functions; rank-drop loci are reported.
pub fn nplus_equals_nstar(omega: &TwoForm, n: &Endomorphism) -> Result<CheckReport> {
    let mut r = CheckReport::new("n-plus-equals-n-star");
    let plus = n_plus(omega, n)?;
    let star = omega_relation(omega, n)?.dual();
    if !plus.is_constant() {
        r.regime = Regime::SampledPolynomial;
    }
    if let Some(p) = plus.rank_drop_locus() {
        r.warn(format!("rank of N⁺ may drop where {p} = 0"));
    }
    r.condition("N⁺ ⊂ N*", linalg::span_contains(star.generators(), plus.generators()), || plus.render());
    r.condition("N⁺ = N*", plus == star, || format!("dim N⁺ = {}, dim N* = {}", plus.dim(), star.dim()));
    Ok(r)
}

/// ΩN-structure: `ω∘N` skew, `TN = 0`, `dω = 0`, `dω_N = 0`.
pub fn omegan_check(alg: &AlgebroidStructure, omega: &TwoForm, n: &Endomorphism) -> Result<CheckReport> {
    let omega_n = omega.compose(n)?;
    let constant = omega.matrix().is_constant() && n.matrix.is_constant();
    let mut r = CheckReport::new("omega-n").with_regime(regime_of(alg, constant));
    let torsion = alg.torsion_report(n);
    r.absorb(&torsion);
    for w in &torsion.witnesses {
        r.witness(w.clone());
    }
    let d1 = alg.d(&omega.element);
    let d2 = alg.d(&omega_n.element);
    r.condition("d omega = 0", d1.is_zero(), || d1.to_string());
    r.condition("d omega_N = 0", d2.is_zero(), || d2.to_string());
    Ok(r)
}

/// Weak ΩN-structure: `dω = 0`, `dω_N = 0` and `ω(TN(x1, x2)) = 0`.
pub fn weak_omegan_check(alg: &AlgebroidStructure, omega: &TwoForm, n: &Endomorphism) -> Result<CheckReport> {
    let omega_n = omega.compose(n)?;
    let constant = omega.matrix().is_constant() && n.matrix.is_constant();
    let mut r = CheckReport::new("weak-omega-n").with_regime(regime_of(alg, constant));
    let d1 = alg.d(&omega.element);
    let d2 = alg.d(&omega_n.element);
    r.condition("d omega = 0", d1.is_zero(), || d1.to_string());
    r.condition("d omega_N = 0", d2.is_zero(), || d2.to_string());
    let mut bad = None;
    for ((a, b), t) in alg.torsion_on_basis(n) {
        let v = omega.map(&t);
        if v.iter().any(|p| !p.is_zero()) && bad.is_none() {
            bad = Some(format!("omega(TN(e{}, e{})) = {}", a + 1, b + 1, render_vector(&v)));
        }
    }
    r.condition("torsion takes values in ker omega", bad.is_none(), || bad.clone().unwrap_or_default());
    Ok(r)
}

/// Runs ΩN, weak ΩN, `N⁺ = N*` and the Dirac-pair check of
/// `(graph ω, graph ω_N)`, and checks the implications between them:
/// ΩN with `N⁺ = N*` gives a Dirac pair, a Dirac pair gives weak ΩN, and
/// for non-degenerate `ω` ΩN is equivalent to the Dirac pair.
pub fn omegan_implications(
    alg: &AlgebroidStructure,
    omega: &TwoForm,
    n: &Endomorphism,
    opts: &SamplingOptions,
) -> Result<CheckReport> {
    let full = omegan_check(alg, omega, n)?;
    let weak = weak_omegan_check(alg, omega, n)?;
    let nplus = nplus_equals_nstar(omega, n)?;
    let omega_n = omega.compose(n)?;
    let closed = alg.d(&omega.element).is_zero() && alg.d(&omega_n.element).is_zero();
    let mut r = CheckReport::new("omega-n-implications");
    r.merge_regime(full.regime);
    let dirac = if closed {
        Some(dirac_pair_check(
            alg,
            &DoubleSubbundle::graph_of_form(omega),
            &DoubleSubbundle::graph_of_form(&omega_n),
            opts,
        )?)
    } else {
        None
    };
    let dirac_pass = dirac.as_ref().is_some_and(|d| !d.failed());
    r.note(format!(
        "omega-n {}, weak {}, N⁺ = N* {}, dirac pair {}",
        full.verdict,
        weak.verdict,
        nplus.verdict,
        dirac.as_ref().map_or("n/a".to_string(), |d| d.verdict.to_string())
    ));
    r.condition("omega-n and N⁺ = N* imply Dirac pair", !(full.passed() && nplus.passed()) || dirac_pass, || {
        "implication violated".into()
    });
    r.condition("Dirac pair implies weak omega-n", !dirac_pass || weak.passed(), || {
        weak.witnesses.join("; ")
    });
    if linalg::determinant(&omega.matrix()) != Poly::zero() {
        r.condition("non-degenerate omega: omega-n iff Dirac pair", full.passed() == dirac_pass, || {
            format!("omega-n {}, dirac {dirac_pass}", full.verdict)
        });
    }
    Ok(r)
}

/// Closedness of `ω∘N^k` for `k = 2..=p_max`, after checking `dω = 0`,
/// `d(ω∘N) = 0` and `TN = 0`.
pub fn lenard_chain(
    alg: &AlgebroidStructure,
    omega: &TwoForm,
    n: &Endomorphism,
    p_max: u32,
) -> Result<Vec<CheckReport>> {
    let pre = omegan_check(alg, omega, n)?;
    if pre.failed() {
        return Err(Error::Precondition(format!("chain hypotheses fail: {}", pre.witnesses.join("; "))));
    }
    let mut out = vec![pre];
    for k in 2..=p_max {
        let form = omega.compose(&n.pow(k))?;
        let mut r = CheckReport::new(format!("lenard-{k}")).with_regime(out[0].regime);
        let d = alg.d(&form.element);
        r.condition(format!("d(omega N^{k}) = 0"), d.is_zero(), || d.to_string());
        if form.element.is_zero() {
            r.note(format!("omega N^{k} = 0"));
        }
        out.push(r);
    }
    Ok(out)
}

/// The alternating combination of `dω, dω', dω''` on `(y1,y2,x), (y1,x2,x),
/// (x1,y2,x), (x1,x2,x)` and the bracket pairing
/// `<ωx,[y1,y2]> - <ω'x,[y1,x2] + [x1,y2]> + <ω''x,[x1,x2]>`, with
/// `ω' = ω∘N` and `ω'' = ω∘N²`.
pub fn chain_identity_sides(
    alg: &AlgebroidStructure,
    omega: &TwoForm,
    n: &Endomorphism,
    x1: &[Poly],
    y1: &[Poly],
    x2: &[Poly],
    y2: &[Poly],
    x: &[Poly],
) -> Result<(Poly, Poly)> {
    let w1 = omega.compose(n)?;
    let w2 = omega.compose(&n.pow(2))?;
    let d0 = alg.d(&omega.element);
    let d1 = alg.d(&w1.element);
    let d2 = alg.d(&w2.element);
    let ev = |f: &S, a: &[Poly], b: &[Poly]| evaluate_form(f, &[a.to_vec(), b.to_vec(), x.to_vec()]);
    let lhs = &(&(&ev(&d0, y1, y2) - &ev(&d1, y1, x2)) - &ev(&d1, x1, y2)) + &ev(&d2, x1, x2);
    let br = |a: &[Poly], b: &[Poly]| alg.section_bracket(a, b);
    let middle = add_vec(&br(y1, x2), &br(x1, y2));
    let rhs = &(&pair(&omega.map(x), &br(y1, y2)) - &pair(&w1.map(x), &middle)) + &pair(&w2.map(x), &br(x1, x2));
    Ok((lhs, rhs))
}

/// The chain identity on random polynomial sections of `N`, and its
/// specialization `y_i = N x_i` against `<ωx, TN(x1, x2)>`.
pub fn chain_identity_check(
    alg: &AlgebroidStructure,
    omega: &TwoForm,
    n: &Endomorphism,
    opts: &SamplingOptions,
) -> Result<CheckReport> {
    let relation = omega_relation(omega, n)?;
    let mut r = CheckReport::new("chain-identity").with_regime(Regime::SampledPolynomial);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let rank = alg.rank();
    let base = alg.base_dim();
    let rand_vec = |rng: &mut ChaCha8Rng| -> Vec<Poly> {
        (0..rank).map(|_| random_poly(rng, base, opts.max_degree)).collect()
    };
    let mut general = None;
    let mut special = None;
    for _ in 0..opts.samples.max(1) {
        let section = |rng: &mut ChaCha8Rng| {
            let mut u = vec![Poly::zero(); rank];
            let mut v = vec![Poly::zero(); rank];
            for k in 0..relation.dim() {
                let f = random_poly(rng, base, opts.max_degree);
                let (a, b) = relation.generator(k);
                for i in 0..rank {
                    u[i] = &u[i] + &(&a[i] * &f);
                    v[i] = &v[i] + &(&b[i] * &f);
                }
            }
            (u, v)
        };
        let (x1, y1) = section(&mut rng);
        let (x2, y2) = section(&mut rng);
        let x = rand_vec(&mut rng);
        let (lhs, rhs) = chain_identity_sides(alg, omega, n, &x1, &y1, &x2, &y2, &x)?;
        if lhs != rhs && general.is_none() {
            general = Some(format!("{lhs} vs {rhs}"));
        }
        let (a, b) = (rand_vec(&mut rng), rand_vec(&mut rng));
        let (na, nb) = (n.apply(&a), n.apply(&b));
        let (lhs, _) = chain_identity_sides(alg, omega, n, &a, &na, &b, &nb, &x)?;
        let t = alg.nijenhuis_torsion(n, &a, &b);
        let expected = pair(&omega.map(&x), &t);
        if lhs != expected && special.is_none() {
            special = Some(format!("{lhs} vs {expected}"));
        }
    }
    r.condition("alternating combination equals bracket pairing", general.is_none(), || {
        general.clone().unwrap_or_default()
    });
    r.condition("with y = N x it equals <omega x, TN(x1, x2)>", special.is_none(), || {
        special.clone().unwrap_or_default()
    });
    Ok(r)
}

/// Forms and endomorphisms on `T*R²` in coordinates `(q1, q2, p1, p2)`.
pub mod monge_ampere {
    use super::*;

    pub const Q1: usize = 0;
    pub const Q2: usize = 1;
    pub const P1: usize = 2;
    pub const P2: usize = 3;

    fn form(terms: &[(usize, usize, i64)]) -> TwoForm {
        let mut w = Matrix::zeros(4, 4);
        for &(a, b, c) in terms {
            w.set(a, b, Poly::from_int(c));
            w.set(b, a, Poly::from_int(-c));
        }
        TwoForm::from_matrix(&w)
    }

    pub fn algebroid() -> AlgebroidStructure {
        AlgebroidStructure::tangent(4)
    }

    /// `dq1∧dp1 + dq2∧dp2`.
    pub fn omega() -> TwoForm {
        form(&[(Q1, P1, 1), (Q2, P2, 1)])
    }

    /// `dq1∧dp1 - dq2∧dp2`.
    pub fn omega_h() -> TwoForm {
        form(&[(Q1, P1, 1), (Q2, P2, -1)])
    }

    /// `dq1∧dp2 - dq2∧dp1`.
    pub fn omega_e() -> TwoForm {
        form(&[(Q1, P2, 1), (Q2, P1, -1)])
    }

    /// `dq1∧dp2`.
    pub fn omega_p() -> TwoForm {
        form(&[(Q1, P2, 1)])
    }

    /// `Ω⁻¹∘ω`.
    pub fn recursion_operator(w: &TwoForm) -> Endomorphism {
        let inv = linalg::inverse(&omega().matrix()).expect("symplectic");
        Endomorphism::new(inv.mul(&w.matrix()))
    }

    /// The bivector `π_Ω` inverse to `Ω`.
    pub fn pi_omega() -> Bivector {
        Bivector::from_matrix(&linalg::inverse(&omega().matrix()).expect("symplectic"))
    }

    /// The 4-form `α∧β`.
    pub fn wedge(a: &TwoForm, b: &TwoForm) -> S {
        &a.element * &b.element
    }

    /// `Pf` with `ω∧ω = Pf(ω) Ω∧Ω`.
    pub fn pfaffian(w: &TwoForm) -> Poly {
        let top = wedge(&omega(), &omega());
        let mask = crate::kernel::Monomial::new(vec![], vec![], 0b1111, 0);
        let scale = top.coefficient(&mask).constant_value().expect("constant");
        wedge(w, w).coefficient(&mask).scale(&scale.recip())
    }
}

/// Wedge identities and pair verdicts for the Monge-Ampère forms on `T*R²`.
pub fn monge_ampere_suite(opts: &SamplingOptions) -> Result<CheckReport> {
    use monge_ampere::*;
    let alg = algebroid();
    let (big, h, e, p) = (omega(), omega_h(), omega_e(), omega_p());
    let mut r = CheckReport::new("monge-ampere");
    let vol = wedge(&big, &big);
    for (name, w) in [("omega_H", &h), ("omega_E", &e), ("omega_P", &p)] {
        let eff = wedge(w, &big);
        r.condition(format!("{name} ∧ Omega = 0"), eff.is_zero(), || eff.to_string());
    }
    let hh = &wedge(&h, &h) + &vol;
    r.condition("omega_H ∧ omega_H = -Omega ∧ Omega", hh.is_zero(), || hh.to_string());
    let ee = &wedge(&e, &e) - &vol;
    r.condition("omega_E ∧ omega_E = Omega ∧ Omega", ee.is_zero(), || ee.to_string());
    let pp = wedge(&p, &p);
    r.condition("omega_P ∧ omega_P = 0", pp.is_zero(), || pp.to_string());
    for (name, w, expected) in [("omega_H", &h, -1), ("omega_E", &e, 1), ("omega_P", &p, 0)] {
        let pf = pfaffian(w);
        r.condition(format!("Pf({name}) = {expected}"), pf == Poly::from_int(expected), || pf.to_string());
    }
    r.absorb(&symplectic_pair_check(&alg, &big, &h, opts)?);
    r.absorb(&symplectic_pair_check(&alg, &big, &e, opts)?);
    r.absorb(&presymplectic_pair_check(&alg, &big, &p, opts)?);
    let n_p = pi_omega_endomorphism(&pi_omega(), &p);
    r.absorb(&alg.torsion_report(&n_p));
    for w in [&h, &e, &p] {
        r.absorb(&omegan_check(&alg, &big, &recursion_operator(w))?);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::monge_ampere::*;
    use super::*;
    use crate::report::Verdict;

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    fn c(n: i64) -> Poly {
        Poly::from_int(n)
    }

    fn opts() -> SamplingOptions {
        SamplingOptions::default()
    }

    fn skew(entries: &[(usize, usize, Poly)], r: usize) -> Matrix {
        let mut m = Matrix::zeros(r, r);
        for (a, b, v) in entries {
            m.set(*a, *b, v.clone());
            m.set(*b, *a, -v);
        }
        m
    }

    fn so3() -> AlgebroidStructure {
        AlgebroidStructure::lie_algebra_from_table(
            3,
            &[(0, 1, vec![0, 0, 1]), (1, 2, vec![1, 0, 0]), (0, 2, vec![0, -1, 0])],
        )
    }

    #[test]
    fn recursion_operators_match_printed_matrices() {
        let n_h = Matrix::from_int_rows(&[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, -1]]);
        let n_e = Matrix::from_int_rows(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]);
        let n_p = Matrix::from_int_rows(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 0, 0]]);
        assert_eq!(recursion_operator(&omega_h()).matrix, n_h);
        assert_eq!(recursion_operator(&omega_e()).matrix, n_e);
        assert_eq!(recursion_operator(&omega_p()).matrix, n_p);
        assert_eq!(n_h.pow(2), Matrix::identity(4));
        assert_eq!(n_e.pow(2), Matrix::identity(4).neg());
        assert!(n_p.pow(2).is_zero());
    }

    #[test]
    fn monge_ampere_suite_passes() {
        let r = monge_ampere_suite(&opts()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn linear_poisson_structure_and_a_failure() {
        let alg = AlgebroidStructure::tangent(3);
        let lin = skew(&[(0, 1, x(2)), (1, 2, x(0)), (2, 0, x(1))], 3);
        assert!(is_poisson(&alg, &Bivector::from_matrix(&lin)).passed());
        let bad = skew(&[(0, 1, c(1)), (0, 2, x(0))], 3);
        let r = is_poisson(&alg, &Bivector::from_matrix(&bad));
        assert!(r.failed());
        assert!(!r.witnesses.is_empty());
    }

    #[test]
    fn hamiltonian_pairs() {
        let alg = algebroid();
        let pi = pi_omega();
        let pi_h = Bivector::from_matrix(&linalg::inverse(&omega_h().matrix()).unwrap());
        assert!(is_hamiltonian_pair(&alg, &pi, &pi_h).unwrap().passed());
        assert!(is_hamiltonian_pair(&alg, &pi, &Bivector::zero(4)).unwrap().passed());
        let bad = Bivector::from_matrix(&skew(&[(0, 1, c(1)), (0, 2, x(0))], 3));
        assert!(matches!(
            is_hamiltonian_pair(&AlgebroidStructure::tangent(3), &bad, &bad),
            Err(Error::NotPoisson(_))
        ));
    }

    #[test]
    fn torsion_identity_on_so3() {
        let alg = so3();
        let pi = Bivector::from_matrix(&Matrix::from_int_rows(&[&[0, 1, 2], &[-1, 0, -1], &[-2, 1, 0]]));
        let pi2 = Bivector::from_matrix(&Matrix::from_int_rows(&[&[0, 3, 0], &[-3, 0, 1], &[0, -1, 0]]));
        let r = torsion_identity_check(&alg, &pi, &pi2, &opts());
        assert!(r.passed(), "{r}");
        let r = torsion_identity_check(&alg, &pi, &Bivector::zero(3), &opts());
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn torsion_identity_with_polynomial_bivectors() {
        let alg = AlgebroidStructure::tangent(3);
        let pi = Bivector::from_matrix(&skew(&[(0, 1, x(2)), (1, 2, c(1))], 3));
        let pi2 = Bivector::from_matrix(&skew(&[(0, 2, x(0)), (0, 1, c(1))], 3));
        let r = torsion_identity_check(&alg, &pi, &pi2, &opts());
        assert!(r.passed(), "{r}");
        assert_eq!(r.regime, Regime::SampledPolynomial);
    }

    #[test]
    fn nijenhuis_from_symplectic_pair() {
        let alg = algebroid();
        let pi_h = Bivector::from_matrix(&linalg::inverse(&omega_h().matrix()).unwrap());
        let out = nijenhuis_from_pair(&alg, &pi_omega(), &pi_h, &opts()).unwrap();
        assert!(out.report.passed(), "{}", out.report);
        assert_eq!(out.endomorphism().unwrap().matrix, recursion_operator(&omega_h()).matrix);
        let same = nijenhuis_from_pair(&alg, &pi_omega(), &pi_omega(), &opts()).unwrap();
        assert_eq!(same.endomorphism().unwrap().matrix, Matrix::identity(4));
    }

    #[test]
    fn nijenhuis_from_pair_with_denominator() {
        let alg = AlgebroidStructure::tangent(2);
        let pi = Bivector::from_matrix(&skew(&[(0, 1, &x(0) * &x(0) + c(1))], 2));
        let pi2 = Bivector::from_matrix(&skew(&[(0, 1, c(1))], 2));
        let out = nijenhuis_from_pair(&alg, &pi, &pi2, &opts()).unwrap();
        assert!(out.endomorphism().is_none());
        assert!(out.report.passed(), "{}", out.report);
    }

    #[test]
    fn poisson_pair_is_symmetric_and_reports_k() {
        let alg = algebroid();
        let pi_e = Bivector::from_matrix(&linalg::inverse(&omega_e().matrix()).unwrap());
        let r = is_poisson_pair(&alg, &pi_omega(), &pi_e, &opts()).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.notes.iter().any(|n| n == "dim K = 4 of 4"));
    }

    #[test]
    fn pomega_structures() {
        let alg = algebroid();
        let r = pomega_check(&alg, &pi_omega(), &omega_h(), &opts()).unwrap();
        assert!(r.passed(), "{r}");
        let r = pomega_check(&alg, &pi_omega(), &TwoForm::zero(4), &opts()).unwrap();
        assert_ne!(r.verdict, Verdict::Fail, "{r}");
    }

    #[test]
    fn identity_is_omega_n_for_closed_forms() {
        let alg = AlgebroidStructure::tangent(3);
        let w = TwoForm::from_matrix(&skew(&[(0, 2, x(1)), (1, 2, x(0))], 3));
        assert!(alg.d(&w.element).is_zero());
        assert!(omegan_check(&alg, &w, &Endomorphism::identity(3)).unwrap().passed());
    }

    #[test]
    fn weak_but_not_full_omega_n() {
        let alg = AlgebroidStructure::tangent(3);
        let w = TwoForm::from_matrix(&skew(&[(0, 1, c(1))], 3));
        let mut m = Matrix::zeros(3, 3);
        m.set(2, 0, x(1));
        m.set(2, 2, c(1));
        let n = Endomorphism::new(m);
        assert!(weak_omegan_check(&alg, &w, &n).unwrap().passed());
        assert!(omegan_check(&alg, &w, &n).unwrap().failed());
        let imp = omegan_implications(&alg, &w, &n, &opts()).unwrap();
        assert!(!imp.failed(), "{imp}");
    }

    #[test]
    fn n_plus_is_n_star_over_rational_functions() {
        let w = omega();
        assert!(nplus_equals_nstar(&w, &recursion_operator(&omega_p())).unwrap().passed());
        let deg = TwoForm::from_matrix(&skew(&[(0, 1, c(1))], 3));
        let mut m = Matrix::zeros(3, 3);
        m.set(2, 0, x(1));
        m.set(2, 2, c(1));
        assert!(nplus_equals_nstar(&deg, &Endomorphism::new(m)).unwrap().passed());
    }

    #[test]
    fn non_skew_composition_is_an_error() {
        let alg = AlgebroidStructure::tangent(2);
        let w = TwoForm::from_matrix(&skew(&[(0, 1, c(1))], 2));
        let n = Endomorphism::new(Matrix::from_int_rows(&[&[1, 0], &[0, 2]]));
        assert!(matches!(omegan_check(&alg, &w, &n), Err(Error::NotSkew)));
    }

    #[test]
    fn lenard_chains() {
        let alg = algebroid();
        let reps = lenard_chain(&alg, &omega(), &recursion_operator(&omega_h()), 5).unwrap();
        assert_eq!(reps.len(), 5);
        assert!(reps.iter().all(|r| r.passed()));
        let reps = lenard_chain(&alg, &omega(), &recursion_operator(&omega_p()), 3).unwrap();
        assert!(reps.iter().all(|r| r.passed()));
        assert!(reps[1].notes.iter().any(|n| n.contains("= 0")));
    }

    #[test]
    fn chain_identity_holds_symbolically() {
        let alg = AlgebroidStructure::tangent(3);
        let w = TwoForm::from_matrix(&skew(&[(0, 1, c(1))], 3));
        let mut m = Matrix::zeros(3, 3);
        m.set(2, 0, x(1));
        m.set(2, 2, c(1));
        let r = chain_identity_check(&alg, &w, &Endomorphism::new(m), &opts()).unwrap();
        assert!(r.passed(), "{r}");
        let r = chain_identity_check(&algebroid(), &omega(), &recursion_operator(&omega_e()), &opts()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn dirac_pair_of_graph_with_itself() {
        let alg = algebroid();
        let l = DoubleSubbundle::graph_of_form(&omega());
        assert!(!dirac_pair_check(&alg, &l, &l, &opts()).unwrap().failed());
        let bad = DoubleSubbundle::graph_of_form(&TwoForm::from_matrix(&skew(&[(1, 2, x(0))], 4)));
        assert!(matches!(dirac_pair_check(&alg, &bad, &l, &opts()), Err(Error::NotDirac(_))));
    }
}
