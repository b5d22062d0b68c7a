//! Poisson, Hamiltonian, Dirac and symplectic pairs on seeded corpora.

use diracwb_core::corpus::{
    degenerate_poisson_pair, hamiltonian_pairs, k_dimension, random_bivector_pairs, rank_two_pairs, BivectorPairInstance,
};
use diracwb_core::geometry::{AlgebroidStructure, Bivector, TwoForm};
use diracwb_core::kernel::one_form;
use diracwb_core::linalg::{inverse, Matrix};
use diracwb_core::pairs::{
    dirac_pair_check, is_hamiltonian_pair, is_poisson_pair, symplectic_pair_check, torsion_identity_check,
};
use diracwb_core::proto::DoubleSubbundle;
use diracwb_core::relations::{is_nijenhuis_relation, relation_from_bivectors, relation_of_subbundles, SamplingOptions};
use diracwb_core::{int, Poly, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn opts() -> SamplingOptions {
    SamplingOptions::default()
}

fn is_poisson(alg: &AlgebroidStructure, pi: &Bivector) -> bool {
    alg.schouten(&pi.element, &pi.element).is_zero()
}

/// Constant pairs on Lie algebras plus polynomial pairs on `R³`.
fn mixed_corpus(seed: u64) -> Vec<BivectorPairInstance> {
    let mut v = random_bivector_pairs(seed, 40);
    v.extend(rank_two_pairs());
    v
}

#[test]
fn torsion_identity_holds_for_arbitrary_bivectors() {
    let mut checked = 0;
    for inst in random_bivector_pairs(101, 60) {
        let r = torsion_identity_check(&inst.algebroid, &inst.pi, &inst.pi_prime, &opts());
        assert_ne!(r.verdict, Verdict::Fail, "{}: {r}", inst.algebra);
        if r.verdict == Verdict::Pass {
            checked += 1;
        }
    }
    assert!(checked >= 40, "{checked}");
}

#[test]
fn torsion_is_symmetric_in_the_bivectors() {
    for inst in random_bivector_pairs(7, 40) {
        let alg = &inst.algebroid;
        let forward = relation_from_bivectors(&inst.pi, &inst.pi_prime);
        let backward = relation_from_bivectors(&inst.pi_prime, &inst.pi);
        assert_eq!(backward, forward.inverse());
        let a = is_nijenhuis_relation(&forward, alg, &opts()).unwrap();
        let b = is_nijenhuis_relation(&backward, alg, &opts()).unwrap();
        assert_eq!(a.verdict, b.verdict, "{}", inst.algebra);
    }
}

#[test]
fn hamiltonian_pairs_are_poisson_pairs() {
    let pairs = hamiltonian_pairs(13, 30);
    assert!(pairs.len() >= 20);
    for inst in pairs {
        let alg = &inst.algebroid;
        assert!(is_hamiltonian_pair(alg, &inst.pi, &inst.pi_prime).unwrap().passed());
        let r = is_poisson_pair(alg, &inst.pi, &inst.pi_prime, &opts()).unwrap();
        assert!(r.passed(), "{}: {r}", inst.algebra);
    }
}

#[test]
fn poisson_pairs_have_mixed_bracket_in_k_perp() {
    let mut poisson_pairs = 0;
    let mut rejected = 0;
    for inst in mixed_corpus(29) {
        let alg = &inst.algebroid;
        if !is_poisson(alg, &inst.pi) || !is_poisson(alg, &inst.pi_prime) {
            continue;
        }
        let r = is_poisson_pair(alg, &inst.pi, &inst.pi_prime, &opts()).unwrap();
        if r.passed() {
            poisson_pairs += 1;
            if k_dimension(&inst) == alg.rank() {
                assert!(alg.schouten(&inst.pi.element, &inst.pi_prime.element).is_zero());
            }
        } else {
            rejected += 1;
            assert!(!alg.schouten(&inst.pi.element, &inst.pi_prime.element).is_zero());
        }
    }
    assert!(poisson_pairs > 0 && rejected > 0, "{poisson_pairs} {rejected}");
}

#[test]
fn degenerate_poisson_pair_need_not_be_hamiltonian() {
    let inst = degenerate_poisson_pair();
    let alg = &inst.algebroid;
    assert!(is_poisson(alg, &inst.pi) && is_poisson(alg, &inst.pi_prime));
    assert!(!alg.schouten(&inst.pi.element, &inst.pi_prime.element).is_zero());
    assert!(k_dimension(&inst) < alg.rank());
    let r = is_poisson_pair(alg, &inst.pi, &inst.pi_prime, &opts()).unwrap();
    assert!(r.passed(), "{r}");
    assert!(r.notes.iter().any(|n| n == "not a Hamiltonian pair"));
}

#[test]
fn graphs_of_bivectors_give_the_pair_relation_and_verdict() {
    let mut verdicts = [0usize; 2];
    for inst in mixed_corpus(43) {
        let alg = &inst.algebroid;
        let (l, l_prime) = (DoubleSubbundle::graph_of_bivector(&inst.pi), DoubleSubbundle::graph_of_bivector(&inst.pi_prime));
        let n = relation_of_subbundles(&l.as_relation(), &l_prime.as_relation()).unwrap();
        assert_eq!(n, relation_from_bivectors(&inst.pi, &inst.pi_prime));
        if !is_poisson(alg, &inst.pi) || !is_poisson(alg, &inst.pi_prime) {
            assert!(dirac_pair_check(alg, &l, &l_prime, &opts()).is_err());
            continue;
        }
        let dirac = dirac_pair_check(alg, &l, &l_prime, &opts()).unwrap();
        let poisson = is_poisson_pair(alg, &inst.pi, &inst.pi_prime, &opts()).unwrap();
        assert_eq!(dirac.passed(), poisson.passed(), "{}", inst.algebra);
        verdicts[dirac.passed() as usize] += 1;
        let non_degenerate = inverse(&inst.pi.matrix()).is_some() && inverse(&inst.pi_prime.matrix()).is_some();
        if dirac.passed() && non_degenerate {
            assert!(alg.schouten(&inst.pi.element, &inst.pi_prime.element).is_zero());
        }
    }
    assert!(verdicts[0] > 0 && verdicts[1] > 0, "{verdicts:?}");
}

#[test]
fn poisson_pair_verdict_is_invariant_under_scaling() {
    for inst in random_bivector_pairs(59, 40) {
        let alg = &inst.algebroid;
        if !is_poisson(alg, &inst.pi) || !is_poisson(alg, &inst.pi_prime) {
            continue;
        }
        let base = is_poisson_pair(alg, &inst.pi, &inst.pi_prime, &opts()).unwrap().verdict;
        for (l, m) in [(2, 1), (-1, 3), (1, -2), (3, 5)] {
            let scaled = is_poisson_pair(alg, &inst.pi.scale(&int(l)), &inst.pi_prime.scale(&int(m)), &opts()).unwrap();
            assert_eq!(scaled.verdict, base, "{} with ({l}, {m})", inst.algebra);
        }
    }
}

/// `aff(1) ⊕ aff(1)`, which carries exact symplectic forms.
fn double_affine() -> AlgebroidStructure {
    AlgebroidStructure::lie_algebra_from_table(4, &[(0, 1, vec![0, 1, 0, 0]), (2, 3, vec![0, 0, 0, 1])])
}

fn exact_form(alg: &AlgebroidStructure, rng: &mut impl Rng) -> TwoForm {
    let alpha: Vec<Poly> = (0..alg.rank()).map(|_| Poly::from_int(rng.random_range(-2..=2))).collect();
    TwoForm::new(alg.rank(), alg.d(&one_form(&alpha))).unwrap()
}

#[test]
fn symplectic_pairs_match_poisson_pairs_of_inverses() {
    let alg = double_affine();
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut tally = [0usize; 2];
    let mut tried = 0;
    while tally[0] + tally[1] < 20 && tried < 400 {
        tried += 1;
        let (w, w2) = (exact_form(&alg, &mut rng), exact_form(&alg, &mut rng));
        if inverse(&w.matrix()).is_none() || inverse(&w2.matrix()).is_none() {
            continue;
        }
        let r = symplectic_pair_check(&alg, &w, &w2, &opts()).unwrap();
        let cross = r.conditions.iter().filter(|c| c.name.contains("agree") || c.name.contains("equals") || c.name.contains("N_{L,L'}"));
        for c in cross {
            assert!(c.holds, "{r}");
        }
        tally[r.passed() as usize] += 1;
    }
    assert!(tally[1] > 0, "{tally:?}");
}

#[test]
fn constant_symplectic_forms_on_a_vector_space() {
    let alg = AlgebroidStructure::tangent(4);
    let w = TwoForm::from_matrix(&Matrix::from_int_rows(&[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]));
    let w2 = TwoForm::from_matrix(&Matrix::from_int_rows(&[&[0, 2, 1, 0], &[-2, 0, 0, 1], &[-1, 0, 0, 3], &[0, -1, -3, 0]]));
    assert!(symplectic_pair_check(&alg, &w, &w2, &opts()).unwrap().passed());
}
