mod common;

use proptest::prelude::*;

use kuroda::holtheory::{hol_base, validate_hol_encoded};
use kuroda::kernel::{Context, Name, Term, TermKind};
use kuroda::kuroda::{kuroda_term, kuroda_theory, tidy, WitnessTable};
use kuroda::reduction::conv;
use kuroda::typing::{check, infer};

use common::*;

fn mentions_pem(t: &Term) -> bool {
    let mut found = false;
    t.visit(&mut |s| {
        if s.as_const().is_some_and(|c| &**c == "pem") {
            found = true;
        }
        !found
    });
    found
}

#[test]
fn raw_and_tidy_translations_check_and_agree() {
    for name in ALL_CLASSICAL {
        let (_, elab) = load(name, true);
        assert!(elab.is_ok(), "{name}");
        let tidy_out = kuroda_theory(&elab.theory, &elab.theorems, false).unwrap();
        let raw_out = kuroda_theory(&elab.theory, &elab.theorems, true).unwrap();
        let th = &tidy_out.theory;
        assert!(validate_hol_encoded(th, false).is_valid(), "{name}");
        assert!(validate_hol_encoded(&raw_out.theory, false).is_valid(), "{name} raw");
        for (t, r) in tidy_out.entries.iter().zip(&raw_out.entries) {
            let ctx = Context::new();
            check(th, &ctx, &t.proof, &t.statement)
                .unwrap_or_else(|e| panic!("{name}/{}: {e}", t.name));
            check(&raw_out.theory, &ctx, &r.proof, &r.statement)
                .unwrap_or_else(|e| panic!("{name}/{} raw: {e}", t.name));
            assert!(conv(th, &t.statement, &r.statement).unwrap(), "{}", t.name);
            assert!(conv(th, &t.proof, &r.proof).unwrap(), "{}", t.name);
            assert!(!mentions_pem(&t.proof) && !mentions_pem(&t.statement));
            assert!(!mentions_pem(&r.proof));
        }
        for (c, e) in th.user_consts() {
            assert!(!mentions_pem(&e.ty), "{name}: {c}");
        }
    }
}

#[test]
fn leibniz_is_hol_encoded_on_both_bases() {
    for classical in [true, false] {
        let (_, elab) = load("leibniz", classical);
        assert!(elab.is_ok());
        let report = validate_hol_encoded(&elab.theory, false);
        assert!(report.is_valid(), "{:?}", report.violations);
        assert!(!validate_hol_encoded(&elab.theory, true).is_valid());
    }
}

#[test]
fn witnesses_avoid_pem_and_have_translated_types() {
    let base = hol_base(false);
    let table = WitnessTable::standard();
    assert_eq!(table.len(), 17);
    for (c, w) in table.iter() {
        assert!(!mentions_pem(w), "{c}");
        let original = hol_base(true).const_type(c).unwrap().clone();
        let expected = tidy(&kuroda_term(&original));
        let got = infer(&base, &Context::new(), w).unwrap();
        assert!(conv(&base, &got, &expected).unwrap(), "{c}");
    }
}

#[test]
fn tidy_is_idempotent_on_translations() {
    for name in LIBRARY {
        let (_, elab) = load(name, true);
        for t in &elab.theorems {
            for root in [&t.statement, &t.proof] {
                let once = tidy(&kuroda_term(root));
                assert_eq!(tidy(&once), once, "{name}/{}", t.name);
            }
        }
    }
}

const PROPS: [&str; 6] = ["top", "bot", "imp top bot", "and top (not bot)", "or bot top", "all o (x : El o => x)"];

fn prop(i: usize) -> Term {
    kuroda::frontend::parse_term(PROPS[i % PROPS.len()], &hol_base(true).signature, &[]).unwrap()
}

fn schematic(name: &str) -> Term {
    let src = match name {
        "imp" => "p : Prop => imp p p",
        "all" => "p : Prop => all o (x : El o => imp x p)",
        "ex" => "p : Prop => ex o (x : El o => and x p)",
        _ => "p : Prop => or p (not p)",
    };
    kuroda::frontend::parse_term(src, &hol_base(true).signature, &[]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    /// On schematic formulas, translating then substituting equals
    /// substituting then translating.
    #[test]
    fn substitution_commutes(i in 0usize..6, k in 0usize..4) {
        let kind = ["imp", "all", "ex", "or"][k];
        let lam = schematic(kind);
        let TermKind::Lam(b) = lam.kind() else { unreachable!() };
        let body = b.body.open(&Name::from("p"));
        let u = prop(i);
        let lhs = kuroda_term(&body.substitute(&Name::from("p"), &u));
        let rhs = kuroda_term(&body).substitute(&Name::from("p"), &kuroda_term(&u));
        prop_assert_eq!(tidy(&lhs), tidy(&rhs));
    }

    #[test]
    fn translated_props_have_type_prop(i in 0usize..6, k in 0usize..4) {
        let base = hol_base(false);
        let app = Term::app(schematic(["imp", "all", "ex", "or"][k]), prop(i));
        let t = tidy(&kuroda_term(&app));
        let ty = infer(&base, &Context::new(), &t).unwrap();
        prop_assert!(conv(&base, &ty, &Term::cnst("Prop")).unwrap());
    }
}
