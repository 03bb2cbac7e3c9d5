use std::collections::BTreeSet;

use proptest::prelude::*;

use occur_core::iterms::{has_i_solution, solve_rational, unfold};
use occur_core::mma::{self, enumerate_runs, run, ActionKind, Outcome, StrategyKind, DEFAULT_FUEL};
use occur_core::mma_minus::{is_semi_solved, replay_minus, run_minus, unifies, Mode};
use occur_core::parser::{parse_equations, Reader};
use occur_core::robinson::{disagreement_pairs, unify_robinson, Robinson, ScriptedPairs, Step};
use occur_core::terms::{
    is_linear, occurrences, rename_apart, substitutions_variant, vars_of, Atom, Equation, EquationSet, Substitutable,
    Substitution, Term, Var, VarGen,
};

const VARS: [&str; 4] = ["X", "Y", "Z", "W"];

fn term(depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        3 => prop::sample::select(&VARS[..]).prop_map(Term::var),
        1 => prop::sample::select(&["a", "b"][..]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("f", vec![t])),
            (inner.clone(), inner).prop_map(|(s, t)| Term::app("h", vec![s, t])),
        ]
    })
}

fn equation_set() -> impl Strategy<Value = EquationSet> {
    prop::collection::vec((term(3), term(3)), 1..5)
        .prop_map(|v| v.into_iter().map(|(l, r)| Equation::new(l, r)).collect())
}

/// Replaces every variable leaf by a distinct `Prefix<n>` variable.
fn linearize(t: &Term, prefix: &str, next: &mut usize) -> Term {
    match t {
        Term::Var(_) => {
            *next += 1;
            Term::var(&format!("{prefix}{next}"))
        }
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| linearize(a, prefix, next)).collect()),
    }
}

fn atom_of(args: &[Term]) -> Atom {
    Atom::new("p", args.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mgus_are_idempotent_and_unify(e in equation_set()) {
        if let Some(s) = mma::mgu(&e) {
            prop_assert!(s.is_idempotent());
            prop_assert!(unifies(&s, &e));
            prop_assert_eq!(e.apply(&s).apply(&s), e.apply(&s));
        }
    }

    #[test]
    fn size_after_binding(u in term(4), t in term(3), x in prop::sample::select(&VARS[..])) {
        let x = Var::new(x);
        let k = u.occurrences_of(&x);
        let after = u.apply(&Substitution::singleton(x.clone(), t.clone()));
        // identity bindings are dropped, so X/X leaves u unchanged
        let expected = if t == Term::Var(x) { u.size() } else { u.size() + k * (t.size() - 1) };
        prop_assert_eq!(after.size(), expected);
    }

    #[test]
    fn rename_apart_is_disjoint(e in equation_set(), extra in prop::collection::vec(prop::sample::select(&VARS[..]), 0..4)) {
        let mut forbidden: BTreeSet<Var> = vars_of(&e).into_iter().collect();
        forbidden.extend(extra.iter().map(|v| Var::new(v)));
        let mut gen = VarGen::new();
        let (renamed, ren) = rename_apart(&e, &forbidden, &mut gen);
        prop_assert!(vars_of(&renamed).iter().all(|v| !forbidden.contains(v)));
        prop_assert_eq!(vars_of(&renamed).len(), vars_of(&e).len());
        prop_assert_eq!(ren.len(), vars_of(&e).len());
    }

    #[test]
    fn render_then_parse_is_identity(e in equation_set()) {
        let text = e.to_string();
        let back = parse_equations(&text).unwrap();
        prop_assert_eq!(&back, &e);
        // generated names survive a round trip once reserved names are allowed
        let mut gen = VarGen::new();
        let (renamed, _) = rename_apart(&e, &BTreeSet::new(), &mut gen);
        let mut gen2 = VarGen::new();
        let back = Reader::new(&mut gen2).allow_reserved(true).equations(&renamed.to_string()).unwrap();
        prop_assert_eq!(back, renamed);
    }

    #[test]
    fn linear_pairs_stay_linear_at_every_step(
        a in prop::collection::vec(term(3), 3),
        h in prop::collection::vec(term(3), 3),
        b in prop::collection::vec(term(2), 2),
        share in prop::collection::vec(any::<bool>(), 2),
        script in prop::collection::vec(0usize..8, 0..20),
    ) {
        let mut n = 0;
        let a: Vec<Term> = a.iter().map(|t| linearize(t, "A", &mut n)).collect();
        let h: Vec<Term> = h.iter().map(|t| linearize(t, "H", &mut n)).collect();
        // B may reuse variables of A but never of H
        let a_vars = vars_of(&a);
        let mut used = BTreeSet::new();
        let b: Vec<Term> = b.iter().zip(&share).map(|(t, &s)| {
            let lin = linearize(t, "B", &mut n);
            if !s { return lin; }
            let ren: Substitution = vars_of(&lin).into_iter()
                .zip(a_vars.iter().filter(|v| !used.contains(*v)).cloned().collect::<Vec<_>>())
                .map(|(v, w)| { used.insert(w.clone()); (v, Term::Var(w)) })
                .collect();
            lin.apply(&ren)
        }).collect();
        let (aa, ha, ba) = (atom_of(&a), atom_of(&h), atom_of(&b));
        prop_assert!(is_linear(&vec![aa.to_term(), ha.to_term()]));
        prop_assert!(is_linear(&vec![ba.to_term(), ha.to_term()]));

        let mut run = Robinson::new(&aa, &ha, std::slice::from_ref(&ba));
        let mut chooser = ScriptedPairs::new(script);
        loop {
            let st = run.state().clone();
            let pair_vars: BTreeSet<Var> = disagreement_pairs(&st.a_inst, &st.h_inst)
                .iter()
                .flat_map(|(s, t)| vars_of(s).into_iter().chain(vars_of(t)))
                .collect();
            prop_assert!(is_linear(&st.a_inst) && is_linear(&st.h_inst) && is_linear(&st.observers[0]));
            for (x, y) in [(&st.a_inst, &st.h_inst), (&st.observers[0], &st.h_inst)] {
                let xs: BTreeSet<Var> = vars_of(x).into_iter().collect();
                for v in vars_of(y).iter().filter(|v| xs.contains(v)) {
                    prop_assert!(!pair_vars.contains(v), "{} shared and in a disagreement pair", v);
                }
            }
            match run.step(&mut chooser) {
                Step::Bound => {}
                Step::Done(out) => {
                    if let Some(theta) = out.mgu() {
                        prop_assert!(is_linear(&aa.apply(theta)));
                        prop_assert!(is_linear(&ba.apply(theta)));
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn mma_agrees_with_robinson(a in prop::collection::vec(term(3), 2), h in prop::collection::vec(term(3), 2)) {
        let mut n = 0;
        let h: Vec<Term> = h.iter().map(|t| {
            let ren: Substitution = vars_of(t).into_iter().map(|v| { n += 1; (v, Term::var(&format!("R{n}"))) }).collect();
            t.apply(&ren)
        }).collect();
        let (aa, ha) = (atom_of(&a), atom_of(&h));
        let rob = unify_robinson(&aa, &ha, &[], &mut occur_core::robinson::FirstPair);
        let e = EquationSet::single(aa.to_term(), ha.to_term());
        for s in StrategyKind::NAMED {
            let t = run(&e, &mut s.build(), DEFAULT_FUEL);
            prop_assert_eq!(t.outcome == Outcome::Solved, rob.is_success());
            if let (Some(m), Some(r)) = (t.mgu(), rob.mgu()) {
                prop_assert!(substitutions_variant(&m, r), "{} vs {}", m, r);
            }
        }
    }

    #[test]
    fn successful_schedules_agree(e in equation_set()) {
        let s = enumerate_runs(&e, 20_000);
        for m in &s.mgus {
            prop_assert!(substitutions_variant(m, &s.mgus[0]));
        }
    }

    #[test]
    fn occur_check_free_mma_runs_are_variant_runs(e in equation_set(), seed in any::<u64>()) {
        let t = run(&e, &mut StrategyKind::Random(seed).build(), DEFAULT_FUEL);
        if t.outcome.is_terminated() && !t.performs(ActionKind::OccurHalt) {
            let s = replay_minus(&t, Mode::Unrestricted);
            prop_assert!(s.is_ok(), "{:?}", s.err());
        }
    }

    #[test]
    fn variant_runs_without_cyclic_bindings_are_mma_runs(e in equation_set(), seed in any::<u64>()) {
        let t = run_minus(&e, &mut StrategyKind::Random(seed).build(), Mode::Unrestricted, 200);
        let cyclic = t.steps.iter().any(|s| {
            s.action.kind == ActionKind::Eliminate
                && s.action.binding.as_ref().is_some_and(|(x, t)| t.contains_var(x))
        });
        if !cyclic {
            prop_assert!(!t.performs(ActionKind::PartialEliminate));
            prop_assert!(occur_core::mma_minus::replay_mma(&t).is_ok());
        }
    }

    #[test]
    fn partial_steps_follow_an_elimination(e in equation_set(), seed in any::<u64>()) {
        for mode in [Mode::Restricted, Mode::Unrestricted] {
            let t = run_minus(&e, &mut StrategyKind::Random(seed).build(), mode, 200);
            let mut eliminated = BTreeSet::new();
            for s in &t.steps {
                if let Some((x, _)) = &s.action.binding {
                    match s.action.kind {
                        ActionKind::Eliminate => { eliminated.insert(x.clone()); }
                        ActionKind::PartialEliminate => prop_assert!(eliminated.contains(x)),
                        _ => {}
                    }
                }
            }
        }
    }

    #[test]
    fn semi_solved_sets_have_i_solutions(e in equation_set(), seed in any::<u64>()) {
        for mode in [Mode::Restricted, Mode::Unrestricted] {
            let t = run_minus(&e, &mut StrategyKind::Random(seed).build(), mode, 200);
            for st in t.states() {
                if is_semi_solved(st) {
                    prop_assert!(has_i_solution(st));
                }
            }
        }
    }

    #[test]
    fn rational_solution_extends_finite_mgu(e in equation_set()) {
        if let Some(m) = mma::mgu(&e) {
            let s = solve_rational(&e).expect("unifiable sets have i-solutions");
            for v in vars_of(&e) {
                let finite = Term::Var(v.clone()).apply(&m);
                let rational = s.apply(&Term::Var(v));
                prop_assert!(rational.is_finite());
                prop_assert_eq!(unfold(&rational, finite.height() + 1), finite);
            }
        }
    }

    #[test]
    fn bisimilar_terms_unfold_alike(e in equation_set(), x in prop::sample::select(&VARS[..]), y in prop::sample::select(&VARS[..])) {
        if let Some(s) = solve_rational(&e) {
            let (a, b) = (s.apply(&Term::var(x)), s.apply(&Term::var(y)));
            if a.bisimilar(&b) {
                for d in 0..10 {
                    prop_assert_eq!(unfold(&a, d), unfold(&b, d));
                }
            }
        }
    }
}

#[test]
fn anonymous_variables_occur_once() {
    let e = parse_equations("f(_, _, X) = f(X, _, _)").unwrap();
    for v in vars_of(&e).iter().filter(|v| v.name().starts_with('_')) {
        assert_eq!(occurrences(&e, v), 1);
    }
    assert_eq!(vars_of(&e).len(), 5);
}
