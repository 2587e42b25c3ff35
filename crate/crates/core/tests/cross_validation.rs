//! Cross-validation of the decision procedures against independent
//! evaluation oracles beyond the dimension-2 diagonal-free corpus.

use tasa_core::bits::Bits;
use tasa_core::config::Config;
use tasa_core::decide::{
    brute_force_check, decide_equation, decide_with_diagonals, Check, ValidityResult,
};
use tasa_core::perm::{generators, Letter, SigKind};
use tasa_core::rng::SweepRng;
use tasa_core::set::SetAlgebra;
use tasa_core::term::{eval_equation, Assignment, Equation, Signature, Term};

fn random_term(rng: &mut SweepRng, sig: &Signature, vars: usize, depth: usize) -> Term {
    if depth == 0 {
        return match rng.below(5) {
            0 => Term::Top,
            1 => Term::Bottom,
            2 if sig.kind == SigKind::Sad => {
                let i = rng.below(sig.dim);
                let j = rng.below(sig.dim);
                Term::Diag(i, j)
            }
            _ => Term::Var(rng.below(vars)),
        };
    }
    let letters = generators(sig.dim, sig.kind);
    match rng.below(5) {
        0 => Term::not(random_term(rng, sig, vars, depth - 1)),
        1 => Term::and(
            random_term(rng, sig, vars, depth - 1),
            random_term(rng, sig, vars, depth - 1),
        ),
        2 => Term::or(
            random_term(rng, sig, vars, depth - 1),
            random_term(rng, sig, vars, depth - 1),
        ),
        _ => {
            let l = letters[rng.below(letters.len())];
            let sub = random_term(rng, sig, vars, depth - 1);
            match l {
                Letter::Transpose(i, j) => Term::st(i, j, sub),
                Letter::Replace(i, j) => Term::sr(i, j, sub),
            }
        }
    }
}

/// At n = 2 an exhaustive sweep over A_22 with diagonals is a complete
/// oracle for validity over all square units: any failing witness point
/// has a range of at most two base elements, and relativizing to that
/// range is a homomorphism preserving the diagonal constants.
#[test]
fn diagonal_decision_agrees_with_the_exhaustive_a22_oracle() {
    let config = Config::default();
    let sig = Signature::sad(2).unwrap();
    let alg = SetAlgebra::small(2, 2, SigKind::Sad, &config).unwrap();
    let mut rng = SweepRng::new(config.seed, 0xd1a6);
    for case in 0..150 {
        let eq = Equation::new(
            random_term(&mut rng, &sig, 2, 4),
            random_term(&mut rng, &sig, 2, 4),
        );
        let sweep = decide_with_diagonals(&eq, &sig, &config).unwrap();
        let oracle = brute_force_check(&Check::Equation(&eq), &alg, &config).unwrap();
        assert!(
            matches!(
                oracle,
                ValidityResult::Valid { .. } | ValidityResult::Invalid { .. }
            ),
            "oracle must be exhaustive on A_22"
        );
        assert_eq!(
            sweep.is_valid(),
            oracle.is_valid(),
            "case {case}: disagreement on {eq}"
        );
        if let Some(cm) = sweep.countermodel() {
            assert!(cm.replay_equation(&eq, &config).unwrap(), "case {case}");
        }
    }
}

/// Sampled agreement at n = 3: a verdict of valid must never be refuted
/// by random evaluation in A_33, and invalid verdicts must replay.
#[test]
fn dimension_three_verdicts_survive_sampling() {
    let config = Config {
        samples: 300,
        ..Config::default()
    };
    for kind in [SigKind::Ta, SigKind::Sa] {
        let sig = Signature::new(3, kind).unwrap();
        let alg = SetAlgebra::small(3, 3, kind, &config).unwrap();
        let points = alg.unit().points();
        let mut rng = SweepRng::new(config.seed, 0xd1b7 ^ kind.name().len() as u64);
        for case in 0..40 {
            let eq = Equation::new(
                random_term(&mut rng, &sig, 2, 5),
                random_term(&mut rng, &sig, 2, 5),
            );
            match decide_equation(&eq, &sig, &config).unwrap() {
                ValidityResult::Valid { .. } => {
                    for _ in 0..config.samples {
                        let mut assignment = Assignment::new();
                        for v in eq.vars() {
                            assignment
                                .insert(v, alg.from_bits(rng.bits(points)).unwrap());
                        }
                        let (l, r) = eval_equation(&eq, &assignment, &alg).unwrap();
                        assert_eq!(l, r, "case {case} ({kind:?}): valid verdict refuted");
                    }
                }
                ValidityResult::Invalid { countermodel, .. } => {
                    assert!(
                        countermodel.replay_equation(&eq, &config).unwrap(),
                        "case {case} ({kind:?})"
                    );
                }
                ValidityResult::Unknown { .. } => {
                    panic!("case {case}: the corpus stays under the variable cap")
                }
            }
        }
    }
}

/// Transposition substitutions are complete Boolean endomorphisms on
/// A_22: meets and joins of arbitrary element families are preserved,
/// exhaustively over all 2^16 families.
#[test]
fn transpositions_preserve_arbitrary_meets_and_joins_on_a22() {
    let config = Config::default();
    let alg = SetAlgebra::small(2, 2, SigKind::Ta, &config).unwrap();
    let swap = tasa_core::perm::Transformation::transposition(2, 0, 1).unwrap();
    let elements: Vec<_> = (0..16usize)
        .map(|m| {
            let pts: Vec<usize> = (0..4).filter(|i| m >> i & 1 == 1).collect();
            alg.from_bits(Bits::from_indices(4, &pts)).unwrap()
        })
        .collect();
    let images: Vec<_> = elements
        .iter()
        .map(|x| alg.apply_subst(x, &swap).unwrap())
        .collect();
    for family in 0..1u32 << 16 {
        let mut meet = alg.top();
        let mut join = alg.bottom();
        let mut meet_img = alg.top();
        let mut join_img = alg.bottom();
        for k in 0..16 {
            if family >> k & 1 == 1 {
                meet = alg.meet(&meet, &elements[k]);
                join = alg.join(&join, &elements[k]);
                meet_img = alg.meet(&meet_img, &images[k]);
                join_img = alg.join(&join_img, &images[k]);
            }
        }
        assert_eq!(alg.apply_subst(&meet, &swap).unwrap(), meet_img);
        assert_eq!(alg.apply_subst(&join, &swap).unwrap(), join_img);
    }
}
