//! Kuroda's double-negation translation of HOL-encoded theories.
//!
//! `Prf` becomes `λp:Prop. Prf (¬¬p)`, `all` becomes
//! `λa:Set. λp:El a → Prop. all a (λz:El a. ¬¬(p z))`, and every inference
//! constant is replaced by a closed intuitionistic proof of its translated
//! type. Everything else is mapped structurally.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::elaborate::{elaborate, Theorem};
use crate::frontend::{parse, Declaration, Item, SourceFile};
use crate::holtheory::{hol_base, is_inference_constant, validate_hol_encoded, Violation};
use crate::kernel::{Name, Term, TermKind};
use crate::reduction::{RewriteRule, Theory};

const WITNESSES_SRC: &str = include_str!("witnesses.dk");

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TranslateError {
    #[error("no witness for `{0}`")]
    UnknownWitness(Name),
    #[error("translated rule left-hand side `{0}` is not headed by a constant")]
    InvalidTranslatedRule(Term),
    #[error("theory is not HOL-encoded: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    NotHolEncoded(Vec<Violation>),
}

/// Closed intuitionistic proofs `c^i` together with the statements they were
/// checked against.
#[derive(Clone, Debug)]
pub struct WitnessTable {
    entries: BTreeMap<Name, (Term, Term)>,
}

impl WitnessTable {
    /// The table loaded from the bundled proofs. Helper lemmas are inlined and
    /// the result β-normalized, so each witness mentions base constants only.
    pub fn standard() -> &'static WitnessTable {
        static TABLE: OnceLock<WitnessTable> = OnceLock::new();
        TABLE.get_or_init(build_witnesses)
    }

    pub fn get(&self, c: &str) -> Option<&Term> {
        self.entries.get(c).map(|(t, _)| t)
    }

    /// The statement the witness of `c` proves.
    pub fn statement(&self, c: &str) -> Option<&Term> {
        self.entries.get(c).map(|(_, s)| s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.entries.iter().map(|(c, (t, _))| (c, t))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn build_witnesses() -> WitnessTable {
    let base = hol_base(false);
    let file = parse(WITNESSES_SRC, &base.signature).expect("witness file parses");
    let elab = elaborate(&base, &file);
    if let Some((i, e)) = elab.errors().next() {
        panic!("witness item {i} fails to check: {e}");
    }
    let beta_only = Theory::default().with_budget(usize::MAX);
    let mut inlined: BTreeMap<Name, Term> = BTreeMap::new();
    let mut statements = BTreeMap::new();
    for thm in &elab.theorems {
        let proof = thm.proof.replace_consts(&inlined);
        let proof = beta_only.reducer().normalize(&proof).expect("β-normalization");
        inlined.insert(thm.name.clone(), proof);
        statements.insert(thm.name.clone(), thm.statement.clone());
    }
    let mut entries = BTreeMap::new();
    for (c, _) in hol_base(true).signature.iter() {
        if is_inference_constant(c) {
            let w = Name::from(format!("{c}_i"));
            let proof = inlined.get(&w).expect("witness present").clone();
            entries.insert(c.clone(), (proof, statements[&w].clone()));
        }
    }
    WitnessTable { entries }
}

pub fn nd_witness(c: &str) -> Result<Term, TranslateError> {
    WitnessTable::standard()
        .get(c)
        .cloned()
        .ok_or_else(|| TranslateError::UnknownWitness(Name::from(c)))
}

/// `λp:Prop. Prf (not (not p))`
pub fn prf_ku() -> Term {
    static T: OnceLock<Term> = OnceLock::new();
    T.get_or_init(|| {
        let p = Term::var("p");
        Term::lam("p", Term::cnst("Prop"), Term::app(Term::cnst("Prf"), nn(p)))
    })
    .clone()
}

/// `λa:Set. λp:El a → Prop. all a (λz:El a. not (not (p z)))`
pub fn forall_ku() -> Term {
    static T: OnceLock<Term> = OnceLock::new();
    T.get_or_init(|| {
        let (a, p, z) = (Term::var("a"), Term::var("p"), Term::var("z"));
        let el_a = Term::app(Term::cnst("El"), a.clone());
        let pred = Term::lam("z", el_a.clone(), nn(Term::app(p, z)));
        let body = Term::apps(Term::cnst("all"), [a, pred]);
        Term::lam(
            "a",
            Term::cnst("Set"),
            Term::lam("p", Term::arrow(el_a, Term::cnst("Prop")), body),
        )
    })
    .clone()
}

fn nn(t: Term) -> Term {
    let not = Term::cnst("not");
    Term::app(not.clone(), Term::app(not, t))
}

/// The translation `t^Ku`.
pub fn kuroda_term(t: &Term) -> Term {
    translate_with(WitnessTable::standard(), t)
}

fn translate_with(table: &WitnessTable, t: &Term) -> Term {
    match t.kind() {
        TermKind::Const(c) => match &**c {
            "Prf" => prf_ku(),
            "all" => forall_ku(),
            _ => table.get(c).cloned().unwrap_or_else(|| t.clone()),
        },
        TermKind::Sort(_) | TermKind::BVar(_) | TermKind::FVar(_) => t.clone(),
        TermKind::Pi(b) => Term::pi_raw(
            b.name.clone(),
            translate_with(table, &b.ty),
            translate_with(table, &b.body),
        ),
        TermKind::Lam(b) => Term::lam_raw(
            b.name.clone(),
            translate_with(table, &b.ty),
            translate_with(table, &b.body),
        ),
        TermKind::App(f, u) => Term::app(translate_with(table, f), translate_with(table, u)),
    }
}

enum Marker {
    Prf,
    Forall,
}

fn marker(t: &Term) -> Option<Marker> {
    if !matches!(t.kind(), TermKind::Lam(_)) {
        None
    } else if t.alpha_eq(&prf_ku()) {
        Some(Marker::Prf)
    } else if t.alpha_eq(&forall_ku()) {
        Some(Marker::Forall)
    } else {
        None
    }
}

/// β-reduces every application of the `Prf` and `all` translations, and
/// nothing else. `∀^Ku a (λx:A. b)` becomes `all a (λx:A. ¬¬b)`.
pub fn tidy(t: &Term) -> Term {
    match t.kind() {
        TermKind::Sort(_) | TermKind::BVar(_) | TermKind::FVar(_) | TermKind::Const(_) => {
            t.clone()
        }
        TermKind::Pi(b) => Term::pi_raw(b.name.clone(), tidy(&b.ty), tidy(&b.body)),
        TermKind::Lam(b) => Term::lam_raw(b.name.clone(), tidy(&b.ty), tidy(&b.body)),
        TermKind::App(..) => {
            let (head, args) = t.spine();
            let args: Vec<Term> = args.iter().map(tidy).collect();
            let Some(m) = marker(&head) else {
                return Term::apps(tidy(&head), args);
            };
            match (m, args.as_slice()) {
                (Marker::Prf, [p, rest @ ..]) => Term::apps(
                    Term::app(Term::cnst("Prf"), nn(p.clone())),
                    rest.iter().cloned(),
                ),
                (Marker::Forall, [a, p, rest @ ..]) => {
                    let pred = match p.kind() {
                        TermKind::Lam(b) => {
                            Term::lam_raw(b.name.clone(), b.ty.clone(), nn(b.body.clone()))
                        }
                        _ => {
                            let el_a = Term::app(Term::cnst("El"), a.clone());
                            Term::lam_raw(
                                "z",
                                el_a,
                                nn(Term::app(p.shift(1), Term::bvar(0))),
                            )
                        }
                    };
                    Term::apps(
                        Term::apps(Term::cnst("all"), [a.clone(), pred]),
                        rest.iter().cloned(),
                    )
                }
                (Marker::Forall, [a]) => beta(&head, a),
                _ => Term::apps(head, args),
            }
        }
    }
}

fn beta(f: &Term, u: &Term) -> Term {
    match f.kind() {
        TermKind::Lam(b) => b.body.instantiate(u),
        _ => Term::app(f.clone(), u.clone()),
    }
}

/// `⌊t⌋`: when `t` is headed by the `Prf` or `all` translation, β-reduces the
/// head until it is a constant.
pub fn floor_head(t: &Term) -> Term {
    let (head, args) = t.spine();
    if marker(&head).is_none() {
        return t.clone();
    }
    let mut head = head;
    let mut args = args.into_iter();
    while let TermKind::Lam(_) = head.kind() {
        match args.next() {
            Some(a) => head = beta(&head, &a),
            None => break,
        }
    }
    Term::apps(head, args)
}

/// Translates the context entrywise, floors the left-hand side and tidies the
/// right-hand side.
pub fn kuroda_rule(r: &RewriteRule, raw: bool) -> Result<RewriteRule, TranslateError> {
    let finish = |t: &Term| {
        let t = kuroda_term(t);
        if raw {
            t
        } else {
            tidy(&t)
        }
    };
    let lhs = floor_head(&kuroda_term(&r.lhs));
    if lhs.head_const().is_none() {
        return Err(TranslateError::InvalidTranslatedRule(lhs));
    }
    Ok(RewriteRule {
        ctx: r.ctx.map_types(finish),
        lhs,
        rhs: finish(&r.rhs),
    })
}

#[derive(Clone, Debug)]
pub struct TranslationOutput {
    pub theory: Theory,
    pub entries: Vec<Theorem>,
}

/// Translates a validated theory and its theorems onto the intuitionistic base.
pub fn kuroda_theory(
    th: &Theory,
    theorems: &[Theorem],
    raw: bool,
) -> Result<TranslationOutput, TranslateError> {
    let report = validate_hol_encoded(th, false);
    if !report.is_valid() {
        return Err(TranslateError::NotHolEncoded(report.violations));
    }
    let finish = |t: &Term| {
        let t = kuroda_term(t);
        if raw {
            t
        } else {
            tidy(&t)
        }
    };
    let mut out = hol_base(false).with_budget(th.budget);
    for (c, e) in th.user_consts() {
        out.add_const(c.clone(), finish(&e.ty), e.definable);
    }
    for r in th.user_rules() {
        out.add_rule(kuroda_rule(r, raw)?);
    }
    let entries = theorems
        .iter()
        .map(|t| Theorem {
            name: t.name.clone(),
            statement: finish(&t.statement),
            proof: finish(&t.proof),
        })
        .collect();
    Ok(TranslationOutput {
        theory: out,
        entries,
    })
}

/// Translates a source file declaration by declaration, for printing.
pub fn kuroda_file(file: &SourceFile, raw: bool) -> Result<SourceFile, TranslateError> {
    let finish = |t: &Term| {
        let t = kuroda_term(t);
        if raw {
            t
        } else {
            tidy(&t)
        }
    };
    let mut items = Vec::with_capacity(file.items.len());
    for item in &file.items {
        let decl = match &item.decl {
            Declaration::Const {
                name,
                ty,
                definable,
            } => Declaration::Const {
                name: name.clone(),
                ty: finish(ty),
                definable: *definable,
            },
            Declaration::Rule { vars, lhs, rhs } => {
                let lhs = floor_head(&kuroda_term(lhs));
                if lhs.head_const().is_none() {
                    return Err(TranslateError::InvalidTranslatedRule(lhs));
                }
                Declaration::Rule {
                    vars: vars.clone(),
                    lhs,
                    rhs: finish(rhs),
                }
            }
            Declaration::Theorem {
                name,
                statement,
                proof,
            } => Declaration::Theorem {
                name: name.clone(),
                statement: finish(statement),
                proof: finish(proof),
            },
        };
        items.push(Item {
            decl,
            span: item.span,
        });
    }
    Ok(SourceFile { items })
}
