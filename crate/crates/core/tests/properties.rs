//! Property tests for the algebraic core.

use proptest::prelude::*;

use tasa_core::config::Config;
use tasa_core::decide::{
    brute_force_check, decide_equation, normalize, Check, DecoratedVar, ValidityResult,
};
use tasa_core::free::term_of_normal_form;
use tasa_core::perm::{compose, coxeter_normal_form, generators, hat, Letter, SigKind, SubstWord};
use tasa_core::set::SetAlgebra;
use tasa_core::term::{eval_term, parse_term, Assignment, Equation, Signature, Term};

fn letter_strategy(dim: usize, sig: SigKind) -> impl Strategy<Value = Letter> {
    let gens = generators(dim, sig);
    proptest::sample::select(gens)
}

fn word_strategy(dim: usize, sig: SigKind) -> impl Strategy<Value = SubstWord> {
    proptest::collection::vec(letter_strategy(dim, sig), 0..8)
        .prop_map(move |letters| SubstWord::new(dim, letters).expect("generated letters"))
}

fn term_strategy(dim: usize, sig: SigKind, vars: usize) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0..vars).prop_map(Term::Var),
        Just(Term::Top),
        Just(Term::Bottom),
    ];
    leaf.prop_recursive(5, 32, 2, move |inner| {
        let subst = letter_strategy(dim, sig).prop_flat_map({
            let inner = inner.clone();
            move |l| {
                inner.clone().prop_map(move |t| match l {
                    Letter::Transpose(i, j) => Term::st(i, j, t),
                    Letter::Replace(i, j) => Term::sr(i, j, t),
                })
            }
        });
        prop_oneof![
            inner.clone().prop_map(Term::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::or(a, b)),
            subst,
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hat_is_a_monoid_homomorphism(
        w1 in word_strategy(4, SigKind::Sa),
        w2 in word_strategy(4, SigKind::Sa),
    ) {
        let both = w1.concat(&w2).unwrap();
        prop_assert_eq!(hat(&both), compose(&hat(&w1), &hat(&w2)).unwrap());
    }

    #[test]
    fn coxeter_traces_replay(w in word_strategy(4, SigKind::Ta)) {
        let config = Config::default();
        let (canon, trace) = coxeter_normal_form(&w, &config).unwrap();
        prop_assert_eq!(hat(&canon), hat(&w));
        prop_assert!(trace.replay().is_ok());
    }

    #[test]
    fn printer_round_trips(t in term_strategy(3, SigKind::Sa, 3)) {
        let sig = Signature::sa(3).unwrap();
        let printed = format!("{t}");
        let reparsed = parse_term(&printed, &sig).unwrap();
        prop_assert_eq!(reparsed, t);
    }

    #[test]
    fn normalize_preserves_semantics(
        t in term_strategy(2, SigKind::Sa, 2),
        code in 0u32..256,
    ) {
        // round trip through the canonical Boolean function and back
        let sig = Signature::sa(2).unwrap();
        let config = Config::default();
        let alg = SetAlgebra::small(2, 2, SigKind::Sa, &config).unwrap();
        let mut assignment = Assignment::new();
        for v in 0..2usize {
            let pts: Vec<usize> = (0..4).filter(|i| code >> (v * 4 + i) & 1 == 1).collect();
            assignment.insert(v, alg.from_points(&pts).unwrap());
        }
        let nf = normalize(&t, &sig, &config).unwrap();
        let back = term_of_normal_form(&nf, &sig, &config).unwrap();
        let lhs = eval_term(&t, &assignment, &alg).unwrap();
        let rhs = eval_term(&back, &assignment, &alg).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn decide_agrees_with_brute_force_on_a22(
        l in term_strategy(2, SigKind::Ta, 2),
        r in term_strategy(2, SigKind::Ta, 2),
    ) {
        let sig = Signature::ta(2).unwrap();
        let config = Config::default();
        let alg = SetAlgebra::small(2, 2, SigKind::Ta, &config).unwrap();
        let eq = Equation::new(l, r);
        let fast = decide_equation(&eq, &sig, &config).unwrap();
        let slow = brute_force_check(&Check::Equation(&eq), &alg, &config).unwrap();
        prop_assert_eq!(fast.is_valid(), slow.is_valid());
        if let ValidityResult::Invalid { countermodel, .. } = &fast {
            prop_assert!(countermodel.replay_equation(&eq, &config).unwrap());
        }
    }

    #[test]
    fn subst_action_is_a_relabeling(
        t in term_strategy(2, SigKind::Sa, 2),
        l in letter_strategy(2, SigKind::Sa),
    ) {
        // normalize(s_g t) equals the relabeling action of g on
        // normalize(t)'s decorated variables
        let sig = Signature::sa(2).unwrap();
        let config = Config::default();
        let wrapped = match l {
            Letter::Transpose(i, j) => Term::st(i, j, t.clone()),
            Letter::Replace(i, j) => Term::sr(i, j, t.clone()),
        };
        let direct = normalize(&wrapped, &sig, &config).unwrap();
        let g = l.transformation(2).unwrap();
        let acted =
            tasa_core::decide::apply_transformation(&normalize(&t, &sig, &config).unwrap(), &g, &config)
                .unwrap();
        prop_assert_eq!(direct.vars(), acted.vars());
        prop_assert_eq!(direct.table(), acted.table());
    }

    #[test]
    fn countermodel_variables_are_monoid_points(
        l in term_strategy(2, SigKind::Sa, 2),
        r in term_strategy(2, SigKind::Sa, 2),
    ) {
        let sig = Signature::sa(2).unwrap();
        let config = Config::default();
        let eq = Equation::new(l, r);
        if let ValidityResult::Invalid { countermodel, .. } =
            decide_equation(&eq, &sig, &config).unwrap()
        {
            prop_assert!(countermodel.replay_equation(&eq, &config).unwrap());
            for points in countermodel.assignment.values() {
                for &p in points {
                    prop_assert!(p < 4);
                }
            }
        }
    }
}

#[test]
fn decorated_var_order_is_var_then_tau_then_diag() {
    use tasa_core::perm::Transformation;
    let id = Transformation::identity(2);
    let swap = Transformation::transposition(2, 0, 1).unwrap();
    let a = DecoratedVar::Subst { var: 0, tau: swap };
    let b = DecoratedVar::Subst {
        var: 0,
        tau: id.clone(),
    };
    let c = DecoratedVar::Subst { var: 1, tau: id };
    let d = DecoratedVar::Diag(0, 1);
    assert!(b < a, "identity precedes the swap lexicographically");
    assert!(a < c, "variable index dominates");
    assert!(c < d, "diagonals come last");
}
