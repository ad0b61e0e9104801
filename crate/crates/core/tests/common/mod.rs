#![allow(dead_code)]

use std::path::PathBuf;

use proptest::prelude::*;
use proptest::test_runner::TestRng;

use kuroda::elaborate::{elaborate, Elaboration};
use kuroda::frontend::{parse, SourceFile};
use kuroda::holtheory::{hol_base, validate_hol_encoded};
use kuroda::kernel::{Term, TermKind};
use kuroda::reduction::{one_step_reducts, Theory};

/// The five library categories.
pub const LIBRARY: [&str; 5] = [
    "basic_logic",
    "classical",
    "de_morgan",
    "equality",
    "arithmetic",
];

/// Every classical fixture, including the worked examples.
pub const ALL_CLASSICAL: [&str; 7] = [
    "basic_logic",
    "classical",
    "de_morgan",
    "equality",
    "arithmetic",
    "leibniz",
    "nat_rules",
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.dk"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture exists")
}

pub fn load(name: &str, classical: bool) -> (SourceFile, Elaboration) {
    let base = hol_base(classical);
    let file = parse(&fixture_text(name), &base.signature).expect("fixture parses");
    let elab = elaborate(&base, &file);
    (file, elab)
}

/// Class of the first error reported for `src`, from parsing, checking or
/// HOL validation, in that order.
pub fn first_error_class(src: &str, classical: bool) -> Option<String> {
    let base = hol_base(classical);
    let file = match parse(src, &base.signature) {
        Ok(f) => f,
        Err(e) => return Some(e.kind.class().to_string()),
    };
    let elab = elaborate(&base, &file);
    if let Some((_, e)) = elab.errors().next() {
        return Some(e.class().to_string());
    }
    validate_hol_encoded(&elab.theory, false)
        .violations
        .first()
        .map(|v| v.class().to_string())
}

/// Ill-formed inputs and the error class each must produce.
pub const CONFORMANCE: &[(&str, &str)] = &[
    ("thm t : Prf top := foo.", "UnboundIdentifier"),
    ("f : nat -> Prop.", "UnboundIdentifier"),
    ("thm t : Prf top := x : Prf top => y.", "UnboundIdentifier"),
    ("top : Prop.", "DuplicateName"),
    ("pem : Prop.", "DuplicateName"),
    ("c : Prop. c : Prop.", "DuplicateName"),
    ("c : Prop", "SyntaxError"),
    ("c : (Prop.", "SyntaxError"),
    ("thm : Prf top := top_i.", "SyntaxError"),
    ("def : Prop.", "SyntaxError"),
    ("c : Prop $ Prop.", "LexError"),
    ("(; open comment", "LexError"),
    ("def f : Prop -> Prop. [x, y] f x --> x.", "RuleVariable"),
    ("def f : Prop -> Prop. [x, x] f x --> x.", "RuleVariable"),
    ("f : Type -> Type.", "SortMismatch"),
    ("thm t : Prf top := x : Type => top_i.", "SortMismatch"),
    ("c : Prop -> Type. d : c.", "SortMismatch"),
    ("thm t : Type := Prop.", "SortMismatch"),
    ("c : top.", "SortMismatch"),
    ("f : x : Prop -> x.", "SortMismatch"),
    ("c : Prop -> Type -> Prop.", "SortMismatch"),
    ("thm t : Prf top := top_i top_i.", "NotAProduct"),
    ("c : Prop. d : Prop := c c.", "SyntaxError"),
    ("c : Prop. thm t : Prop := c c.", "NotAProduct"),
    ("thm bad : Prf bot := top_i.", "TypeMismatch"),
    ("thm t : Prf top := imp_i top.", "TypeMismatch"),
    ("thm t : Prf (imp top top) := imp_i top top top_i.", "TypeMismatch"),
    ("c : Prop. [] c --> top.", "HeadNotDefinable"),
    ("[a, p] all a p --> top.", "HeadNotDefinable"),
    ("def f : Prop. [] f --> Prop.", "TypeMismatch"),
    ("def f : Prop -> Prop. [x] f x --> f.", "TypeMismatch"),
    ("f : Prop -> Set.", "KappaViolation"),
    ("g : Prf top -> Prop.", "KappaViolation"),
    ("h : p : Prop -> Prf p -> Set.", "KappaViolation"),
    ("def prf_rw : Prf top. [] prf_rw --> top_i.", "ProofLevelRule"),
    ("def d : p : Prop -> Prf p -> Prf p. [p, h] d p h --> h.", "ProofLevelRule"),
    ("[] Prf --> p : Prop => Prf p.", "ForbiddenRuleHead"),
    ("def pr : Prop -> Prop. [p] pr p --> x.", "UnboundIdentifier"),
];

/// `Kind` has no surface syntax; its misuses are built directly.
pub fn kind_cases() -> Vec<(Term, &'static str)> {
    let kind = Term::kind_sort();
    vec![
        (kind.clone(), "Untypable"),
        (Term::lam_raw("x", kind.clone(), Term::bvar(0)), "KindAsDomain"),
        (Term::pi_raw("x", kind.clone(), Term::typ()), "KindAsDomain"),
        (Term::app(Term::cnst("Prf"), kind), "Untypable"),
    ]
}

pub fn kind_case_class(t: &Term) -> Option<String> {
    kuroda::typing::infer(&hol_base(true), &kuroda::kernel::Context::new(), t)
        .err()
        .map(|e| e.class().to_string())
}

#[derive(Clone, Debug)]
pub enum Shape {
    Var(u8),
    Bound(u8),
    Const(u8),
    Sort,
    Lam(Box<Shape>, Box<Shape>),
    Pi(Box<Shape>, Box<Shape>),
    App(Box<Shape>, Box<Shape>),
}

pub const VARS: [&str; 3] = ["z", "x", "y"];

pub const CONSTS: [&str; 18] = [
    "Prf", "all", "imp", "not", "top", "imp_i", "all_i", "pem", "top_i", "or_e", "eq", "nat",
    "0", "S", "add", "El", "Prop", "o",
];

pub fn shape() -> impl Strategy<Value = Shape> {
    let leaf = prop_oneof![
        any::<u8>().prop_map(Shape::Var),
        any::<u8>().prop_map(Shape::Bound),
        any::<u8>().prop_map(Shape::Const),
        Just(Shape::Sort),
    ];
    leaf.prop_recursive(6, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Shape::Lam(a.into(), b.into())),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Shape::Pi(a.into(), b.into())),
            (inner.clone(), inner).prop_map(|(a, b)| Shape::App(a.into(), b.into())),
        ]
    })
}

/// Builds a locally closed term: bound indices are reduced modulo the
/// number of enclosing binders.
pub fn build(s: &Shape, depth: usize) -> Term {
    match s {
        Shape::Var(i) => Term::var(VARS[*i as usize % VARS.len()]),
        Shape::Bound(i) if depth > 0 => Term::bvar(*i as usize % depth),
        Shape::Bound(i) => Term::var(VARS[*i as usize % VARS.len()]),
        Shape::Const(i) => Term::cnst(CONSTS[*i as usize % CONSTS.len()]),
        Shape::Sort => Term::typ(),
        Shape::Lam(a, b) => Term::lam_raw("v", build(a, depth), build(b, depth + 1)),
        Shape::Pi(a, b) => Term::pi_raw("v", build(a, depth), build(b, depth + 1)),
        Shape::App(a, b) => Term::app(build(a, depth), build(b, depth)),
    }
}

/// Closed terms of `th` worth reducing: statements and proofs, plus every
/// application subterm of those.
pub fn seed_terms(elab: &Elaboration) -> Vec<Term> {
    let mut out = Vec::new();
    for t in &elab.theorems {
        for root in [&t.statement, &t.proof] {
            root.visit(&mut |s| {
                if s.is_locally_closed() && matches!(s.kind(), TermKind::App(..)) {
                    out.push(s.clone());
                }
                true
            });
        }
    }
    out
}

/// Wraps a random locally closed subterm `u` as `(λw:Prop. w) u`.
pub fn beta_expand(t: &Term, rng: &mut TestRng) -> Term {
    let mut candidates = 0usize;
    t.visit(&mut |s| {
        if s.is_locally_closed() {
            candidates += 1;
        }
        true
    });
    let target = rng.random_range(0..candidates.max(1));
    let mut seen = 0usize;
    expand_at(t, target, &mut seen)
}

fn expand_at(t: &Term, target: usize, seen: &mut usize) -> Term {
    if t.is_locally_closed() {
        if *seen == target {
            *seen += 1;
            let id = Term::lam_raw("w", Term::cnst("Prop"), Term::bvar(0));
            return Term::app(id, t.clone());
        }
        *seen += 1;
    }
    match t.kind() {
        TermKind::Pi(b) => Term::pi_raw(
            b.name.clone(),
            expand_at(&b.ty, target, seen),
            expand_at(&b.body, target, seen),
        ),
        TermKind::Lam(b) => Term::lam_raw(
            b.name.clone(),
            expand_at(&b.ty, target, seen),
            expand_at(&b.body, target, seen),
        ),
        TermKind::App(f, u) => Term::app(expand_at(f, target, seen), expand_at(u, target, seen)),
        _ => t.clone(),
    }
}

/// Follows up to `steps` random one-step reductions.
pub fn random_reduce(th: &Theory, t: &Term, steps: usize, rng: &mut TestRng) -> Term {
    let mut t = t.clone();
    for _ in 0..steps {
        let next = one_step_reducts(th, &t);
        if next.is_empty() {
            break;
        }
        t = next[rng.random_range(0..next.len())].clone();
    }
    t
}

/// Random arithmetic expressions over `0`, `S`, `add` and `mul`.
pub fn random_nat(rng: &mut TestRng, depth: usize) -> Term {
    let leaf = depth == 0 || rng.random_range(0..4) == 0;
    if leaf {
        return Term::cnst("0");
    }
    match rng.random_range(0..3) {
        0 => Term::app(Term::cnst("S"), random_nat(rng, depth - 1)),
        1 => Term::apps(
            Term::cnst("add"),
            [random_nat(rng, depth - 1), random_nat(rng, depth - 1)],
        ),
        _ => Term::apps(
            Term::cnst("mul"),
            [random_nat(rng, depth - 1), random_nat(rng, depth - 1)],
        ),
    }
}

/// Convertible pairs obtained by random reduction and β-expansion of terms
/// from the theory's fixture.
pub fn conv_pairs(th: &Theory, seeds: &[Term], n: usize, rng: &mut TestRng) -> Vec<(Term, Term)> {
    let mut pairs = Vec::with_capacity(n);
    while pairs.len() < n {
        let t = seeds[rng.random_range(0..seeds.len())].clone();
        let a = random_reduce(th, &t, rng.random_range(0..3), rng);
        let b = random_reduce(th, &t, rng.random_range(1..5), rng);
        let b = if rng.random_range(0..2) == 0 {
            beta_expand(&b, rng)
        } else {
            b
        };
        pairs.push((a, b));
    }
    pairs
}

pub fn rng(seed: u8) -> TestRng {
    TestRng::from_seed(proptest::test_runner::RngAlgorithm::ChaCha, &[seed; 32])
}
