//! Type inference and checking for the λΠ-calculus modulo theory.
//!
//! Inference is syntax-directed. Conversion is used at application arguments
//! and at explicit `check` boundaries; the type of an applied function is
//! head-normalized to expose its product.

use std::fmt;

use thiserror::Error;

use crate::holtheory::{kappa_class, KappaClass};
use crate::kernel::{Context, Name, Sort, Term, TermKind};
use crate::reduction::{ReduceError, Reducer, RewriteRule, Theory};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Name),
    #[error("unbound constant `{0}`")]
    UnboundConstant(Name),
    #[error("dangling de Bruijn index {0}")]
    LooseBoundVariable(usize),
    #[error("`{term}` is applied but its type `{ty}` is not a product")]
    NotAProduct { term: Term, ty: Term },
    #[error("`{term}` has type `{found}`, expected {expected}")]
    SortMismatch {
        term: Term,
        found: Term,
        expected: &'static str,
    },
    #[error("Kind cannot annotate a binder")]
    KindAsDomain,
    #[error("Kind has no type")]
    KindUntypable,
    #[error("type mismatch for `{term}`: expected `{expected}`, found `{found}`")]
    TypeMismatch {
        term: Term,
        expected: Term,
        found: Term,
    },
    #[error("`{0}` is declared twice")]
    DuplicateName(Name),
    #[error("the type of constant `{0}` is not closed")]
    NotClosed(Name),
    #[error("rule head `{0}` is not declared definable")]
    HeadNotDefinable(Name),
    #[error("rule left-hand side `{0}` is not headed by a constant")]
    InvalidRuleHead(Term),
    #[error("rule variable `{0}` occurs in the right-hand side only")]
    UnboundRuleVariable(Name),
    #[error("cannot infer the type of rule variable `{0}`")]
    CannotInferRuleVar(Name),
    #[error("rule rewrites proofs: its type `{0}` is a formula")]
    ProofLevelRule(Term),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
}

impl TypeError {
    /// Stable name of the error class.
    pub fn class(&self) -> &'static str {
        match self {
            TypeError::UnboundVariable(_) => "UnboundVariable",
            TypeError::UnboundConstant(_) => "UnboundConstant",
            TypeError::LooseBoundVariable(_) => "LooseBoundVariable",
            TypeError::NotAProduct { .. } => "NotAProduct",
            TypeError::SortMismatch { .. } => "SortMismatch",
            TypeError::KindAsDomain => "KindAsDomain",
            TypeError::KindUntypable => "Untypable",
            TypeError::TypeMismatch { .. } => "TypeMismatch",
            TypeError::DuplicateName(_) => "DuplicateName",
            TypeError::NotClosed(_) => "NotClosed",
            TypeError::HeadNotDefinable(_) => "HeadNotDefinable",
            TypeError::InvalidRuleHead(_) => "InvalidRuleHead",
            TypeError::UnboundRuleVariable(_) => "UnboundRuleVariable",
            TypeError::CannotInferRuleVar(_) => "CannotInferRuleVar",
            TypeError::ProofLevelRule(_) => "ProofLevelRule",
            TypeError::Reduce(_) => "BudgetExhausted",
        }
    }
}

/// A derived typing judgment `ctx ⊢ subject : ty`.
#[derive(Clone, Debug)]
pub struct Judgment {
    pub ctx: Context,
    pub subject: Term,
    pub ty: Term,
}

pub fn derive(th: &Theory, ctx: &Context, t: &Term) -> Result<Judgment, TypeError> {
    let ty = infer(th, ctx, t)?;
    Ok(Judgment {
        ctx: ctx.clone(),
        subject: t.clone(),
        ty,
    })
}

pub fn infer(th: &Theory, ctx: &Context, t: &Term) -> Result<Term, TypeError> {
    Checker { th }.infer(&mut ctx.clone(), t)
}

pub fn check(th: &Theory, ctx: &Context, t: &Term, ty: &Term) -> Result<(), TypeError> {
    Checker { th }.check(&mut ctx.clone(), t, ty)
}

/// Infers the type of `ty` and requires it to be a sort.
pub fn infer_sort(th: &Theory, ctx: &Context, ty: &Term) -> Result<Sort, TypeError> {
    Checker { th }.sort_of(&mut ctx.clone(), ty)
}

pub fn check_context(th: &Theory, ctx: &Context) -> Result<(), TypeError> {
    let checker = Checker { th };
    let mut prefix = Context::new();
    for (x, ty) in ctx.iter() {
        if prefix.contains(x) {
            return Err(TypeError::DuplicateName(x.clone()));
        }
        checker.sort_of(&mut prefix, ty)?;
        prefix.push(x.clone(), ty.clone());
    }
    Ok(())
}

struct Checker<'a> {
    th: &'a Theory,
}

impl Checker<'_> {
    fn reducer(&self) -> Reducer<'_> {
        self.th.reducer()
    }

    fn whnf(&self, t: &Term) -> Result<Term, TypeError> {
        Ok(self.reducer().whnf(t)?)
    }

    fn infer(&self, ctx: &mut Context, t: &Term) -> Result<Term, TypeError> {
        match t.kind() {
            TermKind::Sort(Sort::Type) => Ok(Term::kind_sort()),
            TermKind::Sort(Sort::Kind) => Err(TypeError::KindUntypable),
            TermKind::BVar(i) => Err(TypeError::LooseBoundVariable(*i)),
            TermKind::FVar(x) => ctx
                .lookup(x)
                .cloned()
                .ok_or_else(|| TypeError::UnboundVariable(x.clone())),
            TermKind::Const(c) => self
                .th
                .const_type(c)
                .cloned()
                .ok_or_else(|| TypeError::UnboundConstant(c.clone())),
            TermKind::Pi(b) => {
                self.check_domain(ctx, &b.ty)?;
                let x = ctx.fresh(&b.name);
                let body = b.body.open(&x);
                self.under(ctx, x, b.ty.clone(), |ctx| {
                    self.sort_of(ctx, &body).map(Term::sort)
                })
            }
            TermKind::Lam(b) => {
                self.check_domain(ctx, &b.ty)?;
                let x = ctx.fresh(&b.name);
                let body = b.body.open(&x);
                let body_ty = self.under(ctx, x.clone(), b.ty.clone(), |ctx| {
                    let ty = self.infer(ctx, &body)?;
                    // The product formed by this abstraction must be well-sorted.
                    self.sort_of(ctx, &ty)?;
                    Ok(ty)
                })?;
                Ok(Term::pi(x, b.ty.clone(), body_ty))
            }
            TermKind::App(f, u) => {
                let fty = self.infer(ctx, f)?;
                let fty = self.whnf(&fty)?;
                match fty.kind() {
                    TermKind::Pi(b) => {
                        self.check(ctx, u, &b.ty)?;
                        Ok(b.body.instantiate(u))
                    }
                    _ => Err(TypeError::NotAProduct {
                        term: f.clone(),
                        ty: fty,
                    }),
                }
            }
        }
    }

    fn under<T>(
        &self,
        ctx: &mut Context,
        x: Name,
        ty: Term,
        f: impl FnOnce(&mut Context) -> Result<T, TypeError>,
    ) -> Result<T, TypeError> {
        let len = ctx.len();
        ctx.push(x, ty);
        let r = f(ctx);
        ctx.truncate(len);
        r
    }

    fn check_domain(&self, ctx: &mut Context, ty: &Term) -> Result<(), TypeError> {
        if ty.is_sort(Sort::Kind) {
            return Err(TypeError::KindAsDomain);
        }
        let s = self.infer(ctx, ty)?;
        let s = self.whnf(&s)?;
        if s.is_sort(Sort::Type) {
            Ok(())
        } else {
            Err(TypeError::SortMismatch {
                term: ty.clone(),
                found: s,
                expected: "Type",
            })
        }
    }

    fn sort_of(&self, ctx: &mut Context, ty: &Term) -> Result<Sort, TypeError> {
        let s = self.infer(ctx, ty)?;
        let s = self.whnf(&s)?;
        match s.kind() {
            TermKind::Sort(s) => Ok(*s),
            _ => Err(TypeError::SortMismatch {
                term: ty.clone(),
                found: s,
                expected: "a sort",
            }),
        }
    }

    fn check(&self, ctx: &mut Context, t: &Term, expected: &Term) -> Result<(), TypeError> {
        let found = self.infer(ctx, t)?;
        if self.reducer().conv(&found, expected)? {
            return Ok(());
        }
        let nf = |x: &Term| self.reducer().normalize(x).unwrap_or_else(|_| x.clone());
        Err(TypeError::TypeMismatch {
            term: t.clone(),
            expected: nf(expected),
            found: nf(&found),
        })
    }
}

/// Recovers the types of rule variables from the positions they occupy as
/// arguments in the left-hand side. Variables are returned in dependency
/// order (first occurrence).
pub fn infer_rule_context(th: &Theory, lhs: &Term, vars: &[Name]) -> Result<Context, TypeError> {
    fn walk(th: &Theory, pat: &Term, ctx: &mut Context) -> Result<(), TypeError> {
        let (head, args) = pat.spine();
        let mut ty = match head.kind() {
            TermKind::Const(c) => th
                .const_type(c)
                .cloned()
                .ok_or_else(|| TypeError::UnboundConstant(c.clone()))?,
            _ => return Ok(()),
        };
        for arg in &args {
            let w = th.reducer().whnf(&ty)?;
            let TermKind::Pi(b) = w.kind() else {
                return Err(TypeError::NotAProduct {
                    term: head.clone(),
                    ty: w,
                });
            };
            match arg.kind() {
                TermKind::FVar(v) => {
                    if !ctx.contains(v) {
                        ctx.push(v.clone(), b.ty.clone());
                    }
                }
                _ => walk(th, arg, ctx)?,
            }
            ty = b.body.instantiate(arg);
        }
        Ok(())
    }
    let mut ctx = Context::new();
    walk(th, lhs, &mut ctx)?;
    if let Some(v) = vars.iter().find(|v| !ctx.contains(v)) {
        return Err(TypeError::CannotInferRuleVar(v.clone()));
    }
    Ok(ctx)
}

/// Checks a rewrite rule: definable constant head, right-hand side variables
/// bound by the left-hand side, well-formed variable context, both sides of
/// a common type, and for HOL-encoded theories, a type that is not a formula.
pub fn check_rule(th: &Theory, rule: &RewriteRule) -> Result<(), TypeError> {
    let head = rule
        .head()
        .ok_or_else(|| TypeError::InvalidRuleHead(rule.lhs.clone()))?;
    let entry = th
        .signature
        .get(head)
        .ok_or_else(|| TypeError::UnboundConstant(head.clone()))?;
    if !entry.definable {
        return Err(TypeError::HeadNotDefinable(head.clone()));
    }
    let lhs_vars = rule.lhs.free_vars();
    if let Some(v) = rule.rhs.free_vars().difference(&lhs_vars).next() {
        return Err(TypeError::UnboundRuleVariable(v.clone()));
    }
    check_context(th, &rule.ctx)?;
    let lhs_ty = infer(th, &rule.ctx, &rule.lhs)?;
    check(th, &rule.ctx, &rule.rhs, &lhs_ty)?;
    if th.base != crate::reduction::Base::Bare && rule_kappa(th, &lhs_ty) == KappaClass::K3 {
        return Err(TypeError::ProofLevelRule(lhs_ty));
    }
    Ok(())
}

/// κ-class of a rule type, normalizing first when the raw type is unclassified.
pub(crate) fn rule_kappa(th: &Theory, ty: &Term) -> KappaClass {
    match kappa_class(ty) {
        KappaClass::None => th
            .reducer()
            .normalize(ty)
            .map(|n| kappa_class(&n))
            .unwrap_or(KappaClass::None),
        k => k,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ItemId {
    Const(Name),
    Rule(usize),
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ItemId::Const(c) => write!(f, "constant {c}"),
            ItemId::Rule(i) => write!(f, "rule #{i}"),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct TheoryReport {
    pub items: Vec<(ItemId, Result<(), TypeError>)>,
}

impl TheoryReport {
    pub fn is_ok(&self) -> bool {
        self.items.iter().all(|(_, r)| r.is_ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = (&ItemId, &TypeError)> {
        self.items
            .iter()
            .filter_map(|(i, r)| r.as_ref().err().map(|e| (i, e)))
    }
}

pub fn check_const_type(th: &Theory, c: &Name, ty: &Term) -> Result<(), TypeError> {
    if !ty.is_closed() {
        return Err(TypeError::NotClosed(c.clone()));
    }
    infer_sort(th, &Context::new(), ty).map(|_| ())
}

/// Checks every constant type and every rule in declaration order.
pub fn check_theory(th: &Theory) -> TheoryReport {
    let mut report = TheoryReport::default();
    for (c, entry) in th.signature.iter() {
        report
            .items
            .push((ItemId::Const(c.clone()), check_const_type(th, c, &entry.ty)));
    }
    for (i, rule) in th.rules().iter().enumerate() {
        report.items.push((ItemId::Rule(i), check_rule(th, rule)));
    }
    report
}
