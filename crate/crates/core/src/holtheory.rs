//! The higher-order logic base theories, the κ-classification of types, and
//! the check that a user theory is a conservative HOL encoding.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::elaborate::elaborate;
use crate::frontend::parse;
use crate::kernel::{Context, Name, Term, TermKind};
use crate::reduction::{Base, Theory};
use crate::typing::{infer, rule_kappa};

const HOL_BASE_SRC: &str = include_str!("hol_base.dk");
const PEM_SRC: &str = "pem : p : Prop -> Prf (or p (not p)).\n";

/// Connectives, quantifiers and the type-level constants, in declaration order.
pub const LOGICAL_CONSTANTS: [&str; 15] = [
    "Set", "El", "arrow", "o", "Prop", "Prf", "imp", "and", "or", "not", "top", "bot", "all",
    "ex", "iff",
];

/// Natural-deduction rule constants.
pub const ND_CONSTANTS: [&str; 16] = [
    "imp_i", "imp_e", "and_i", "and_el", "and_er", "or_il", "or_ir", "or_e", "neg_i", "neg_e",
    "top_i", "bot_e", "all_i", "all_e", "ex_i", "ex_e",
];

pub const PEM: &str = "pem";

/// Names user theories may not declare.
pub fn is_reserved(c: &str) -> bool {
    c == PEM || LOGICAL_CONSTANTS.contains(&c) || ND_CONSTANTS.contains(&c)
}

/// ND constants plus `pem`: the constants replaced by witnesses.
pub fn is_inference_constant(c: &str) -> bool {
    c == PEM || ND_CONSTANTS.contains(&c)
}

fn build(classical: bool) -> Theory {
    let mut th = Theory::new(Base::Bare);
    let load = |src: &str, th: &mut Theory| {
        let file = parse(src, &th.signature).expect("base theory parses");
        let elab = elaborate(th, &file);
        if let Some((i, e)) = elab.errors().next() {
            panic!("base theory item {i} fails to check: {e}");
        }
        *th = elab.theory;
    };
    load(HOL_BASE_SRC, &mut th);
    if classical {
        load(PEM_SRC, &mut th);
    }
    th.seal_base(if classical {
        Base::ClassicalHol
    } else {
        Base::IntuitionisticHol
    });
    th
}

/// Intuitionistic HOL, or classical HOL when `classical` (adds `pem`).
pub fn hol_base(classical: bool) -> Theory {
    static CLASSICAL: OnceLock<Theory> = OnceLock::new();
    static INTUITIONISTIC: OnceLock<Theory> = OnceLock::new();
    let cell = if classical {
        &CLASSICAL
    } else {
        &INTUITIONISTIC
    };
    cell.get_or_init(|| build(classical)).clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KappaClass {
    K1,
    K2,
    K3,
    K4,
    K5,
    None,
}

impl fmt::Display for KappaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            KappaClass::K1 => "κ1",
            KappaClass::K2 => "κ2",
            KappaClass::K3 => "κ3",
            KappaClass::K4 => "κ4",
            KappaClass::K5 => "κ5",
            KappaClass::None => "none",
        };
        f.write_str(s)
    }
}

/// [`kappa_class`] of the β-normal form, so that unreduced `Prf^Ku` and
/// `∀^Ku` markers classify like their reducts.
pub fn beta_kappa_class(t: &Term) -> KappaClass {
    match kappa_class(t) {
        KappaClass::None => Theory::default()
            .reducer()
            .normalize(t)
            .map(|n| kappa_class(&n))
            .unwrap_or(KappaClass::None),
        k => k,
    }
}

/// Syntactic classification, without reduction:
///
/// ```text
/// κ1 ::= Set | κ1 → κ1
/// κ2 ::= Prop | El a | Πx:κ1|κ2. κ2
/// κ3 ::= Prf p | κ3 → κ3 | Πx:κ1|κ2. κ3
/// κ4 ::= Type | Πx:κ1|κ2. κ4
/// κ5 ::= Kind
/// ```
pub fn kappa_class(t: &Term) -> KappaClass {
    use KappaClass::*;
    match t.kind() {
        TermKind::Sort(crate::kernel::Sort::Type) => K4,
        TermKind::Sort(crate::kernel::Sort::Kind) => K5,
        TermKind::Const(c) if &**c == "Set" => K1,
        TermKind::Const(c) if &**c == "Prop" => K2,
        TermKind::App(f, _) => match f.as_const().map(|c| &**c) {
            Some("El") => K2,
            Some("Prf") => K3,
            _ => None,
        },
        TermKind::Pi(b) => {
            let dom = kappa_class(&b.ty);
            let body = kappa_class(&b.body);
            let arrow = !b.body.mentions_bvar(0);
            let object_dom = matches!(dom, K1 | K2);
            match body {
                K1 if dom == K1 && arrow => K1,
                K2 if object_dom => K2,
                K3 if object_dom || (dom == K3 && arrow) => K3,
                K4 if object_dom => K4,
                _ => None,
            }
        }
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// The theory does not extend a HOL base.
    MissingBase,
    /// A base constant is absent or has the wrong type.
    BaseConstant(Name),
    /// A base rule is absent.
    BaseRule(usize),
    /// A user constant reuses a reserved base name.
    ReservedName(Name),
    /// A user rule duplicates a base rule.
    DuplicateBaseRule(usize),
    /// A user constant's type is generated by no κ grammar.
    Kappa { name: Name, ty: Term },
    /// A user rule's left-hand side is `Prf` or `all` (or, in pedantic mode,
    /// headed by one of them).
    ForbiddenHead { rule: usize, head: Name },
    /// A user rule rewrites terms whose type is a formula.
    ProofLevelRule { rule: usize, ty: Term },
    /// The left-hand side type of a user rule could not be inferred.
    IllTypedRule { rule: usize, message: String },
}

impl Violation {
    /// Stable name of the violation class.
    pub fn class(&self) -> &'static str {
        match self {
            Violation::MissingBase | Violation::BaseConstant(_) | Violation::BaseRule(_) => {
                "BaseMismatch"
            }
            Violation::ReservedName(_) => "ReservedName",
            Violation::DuplicateBaseRule(_) => "DuplicateBaseRule",
            Violation::Kappa { .. } => "KappaViolation",
            Violation::ForbiddenHead { .. } => "ForbiddenRuleHead",
            Violation::ProofLevelRule { .. } => "ProofLevelRule",
            Violation::IllTypedRule { .. } => "IllTypedRule",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingBase => write!(f, "theory does not extend a HOL base"),
            Violation::BaseConstant(c) => write!(f, "base constant `{c}` is missing or altered"),
            Violation::BaseRule(i) => write!(f, "base rule #{i} is missing"),
            Violation::ReservedName(c) => write!(f, "`{c}` is a reserved base name"),
            Violation::DuplicateBaseRule(i) => write!(f, "user rule #{i} duplicates a base rule"),
            Violation::Kappa { name, ty } => {
                write!(f, "type of `{name}` violates the κ-property: {ty}")
            }
            Violation::ForbiddenHead { rule, head } => {
                write!(f, "user rule #{rule} has forbidden left-hand side head `{head}`")
            }
            Violation::ProofLevelRule { rule, ty } => {
                write!(f, "user rule #{rule} rewrites proofs of type {ty}")
            }
            Violation::IllTypedRule { rule, message } => {
                write!(f, "user rule #{rule} is ill-typed: {message}")
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Informational messages (e.g. rule heads with several rules, whose
    /// confluence is assumed rather than checked).
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `th` is a HOL base extended by κ-respecting user constants and
/// rules whose left-hand sides survive the translation. `pedantic` rejects
/// every rule headed by `Prf` or `all`, not only the bare constants.
pub fn validate_hol_encoded(th: &Theory, pedantic: bool) -> ValidationReport {
    let mut report = ValidationReport::default();
    let reference = match th.base {
        Base::Bare => {
            report.violations.push(Violation::MissingBase);
            return report;
        }
        Base::ClassicalHol => hol_base(true),
        Base::IntuitionisticHol => hol_base(false),
    };

    let base: BTreeMap<&Name, &Term> = th.base_consts().map(|(n, e)| (n, &e.ty)).collect();
    for (c, e) in reference.signature.iter() {
        if base.get(c).is_none_or(|ty| **ty != e.ty) {
            report.violations.push(Violation::BaseConstant(c.clone()));
        }
    }
    for (i, r) in reference.rules().iter().enumerate() {
        if !th
            .base_rules()
            .iter()
            .any(|s| s.lhs == r.lhs && s.rhs == r.rhs)
        {
            report.violations.push(Violation::BaseRule(i));
        }
    }

    for (c, e) in th.user_consts() {
        if is_reserved(c) {
            report.violations.push(Violation::ReservedName(c.clone()));
        }
        if beta_kappa_class(&e.ty) == KappaClass::None {
            report.violations.push(Violation::Kappa {
                name: c.clone(),
                ty: e.ty.clone(),
            });
        }
    }

    let mut heads: BTreeMap<Name, usize> = BTreeMap::new();
    for (i, r) in th.user_rules().iter().enumerate() {
        if reference
            .rules()
            .iter()
            .any(|s| s.lhs == r.lhs && s.rhs == r.rhs)
        {
            report.violations.push(Violation::DuplicateBaseRule(i));
        }
        let head = r.head().cloned();
        if let Some(h) = &head {
            *heads.entry(h.clone()).or_default() += 1;
            let bare = r.lhs.as_const().is_some();
            if (h.as_ref() == "Prf" || h.as_ref() == "all") && (bare || pedantic) {
                report.violations.push(Violation::ForbiddenHead {
                    rule: i,
                    head: h.clone(),
                });
            }
        }
        match infer(th, &r.ctx, &r.lhs) {
            Ok(ty) => {
                if rule_kappa(th, &ty) == KappaClass::K3 {
                    report
                        .violations
                        .push(Violation::ProofLevelRule { rule: i, ty });
                }
            }
            Err(e) => report.violations.push(Violation::IllTypedRule {
                rule: i,
                message: e.to_string(),
            }),
        }
    }
    for (h, n) in heads {
        let base_rules = th.base_rules().iter().filter(|r| r.head() == Some(&h)).count();
        if n + base_rules > 1 {
            report.notes.push(format!(
                "{} rules share head `{h}`; their confluence is assumed, not checked",
                n + base_rules
            ));
        }
    }
    report
}

/// Context entries must be κ-respecting too; used for rule contexts.
pub fn context_respects_kappa(ctx: &Context) -> bool {
    ctx.iter()
        .all(|(_, ty)| kappa_class(ty) != KappaClass::None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_term;
    use crate::typing::check_theory;

    fn ty(src: &str) -> Term {
        let mut sig = hol_base(true).signature;
        for c in ["nat", "eq"] {
            sig.insert(Name::from(c), Term::typ(), false);
        }
        parse_term(src, &sig, &[]).unwrap()
    }

    #[test]
    fn base_sizes() {
        let i = hol_base(false);
        assert_eq!(i.signature.len(), 31);
        assert_eq!(i.rules().len(), 3);
        assert!(!i.signature.contains("pem"));
        let c = hol_base(true);
        assert_eq!(c.signature.len(), 32);
        assert!(c.signature.contains("pem"));
        assert_eq!(c.base, Base::ClassicalHol);
        assert!(check_theory(&c).is_ok());
        assert!(check_theory(&i).is_ok());
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_class(&ty("Set")), KappaClass::K1);
        assert_eq!(kappa_class(&ty("El nat")), KappaClass::K2);
        assert_eq!(kappa_class(&ty("Prf top")), KappaClass::K3);
        assert_eq!(kappa_class(&ty("Type")), KappaClass::K4);
        assert_eq!(kappa_class(&Term::kind_sort()), KappaClass::K5);
        assert_eq!(
            kappa_class(&ty("a : Set -> Prf (all a (x : El a => eq a x x))")),
            KappaClass::K3
        );
        assert_eq!(kappa_class(&ty("Prop -> Set")), KappaClass::None);
        assert_eq!(kappa_class(&ty("p : Prop -> Prf p -> Prop")), KappaClass::None);
        assert_eq!(kappa_class(&ty("Set -> Set")), KappaClass::K1);
        assert_eq!(kappa_class(&ty("Prf top -> Prf bot")), KappaClass::K3);
    }

    #[test]
    fn base_constants_classify_as_expected() {
        let th = hol_base(true);
        for (c, e) in th.signature.iter() {
            let k = kappa_class(&e.ty);
            if is_inference_constant(c) {
                assert_eq!(k, KappaClass::K3, "{c}");
            } else {
                assert!(
                    matches!(k, KappaClass::K1 | KappaClass::K2 | KappaClass::K4),
                    "{c}: {k}"
                );
            }
        }
    }

    #[test]
    fn bare_theory_is_not_hol_encoded() {
        let r = validate_hol_encoded(&Theory::default(), false);
        assert_eq!(r.violations, vec![Violation::MissingBase]);
    }
}
