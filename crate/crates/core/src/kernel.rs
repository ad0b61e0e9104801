//! Terms of the λΠ-calculus modulo theory.
//!
//! Terms use a locally nameless representation: bound variables are de Bruijn
//! indices, free variables (context entries and rule variables) are names.
//! Binders keep their source name as a printing hint only, so structural
//! equality ignoring hints is exactly α-equivalence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Type,
    Kind,
}

#[derive(Clone, Debug)]
pub struct Binder {
    /// Printing hint, irrelevant to equality.
    pub name: Name,
    pub ty: Term,
    /// Body with the bound variable at index 0.
    pub body: Term,
}

#[derive(Clone, Debug)]
pub enum TermKind {
    Sort(Sort),
    BVar(usize),
    FVar(Name),
    Const(Name),
    Pi(Binder),
    Lam(Binder),
    App(Term, Term),
}

#[derive(Debug)]
struct Node {
    kind: TermKind,
    /// One more than the largest loose de Bruijn index, 0 if locally closed.
    loose: usize,
    has_fvars: bool,
}

/// A shared, immutable term.
#[derive(Clone)]
pub struct Term(Arc<Node>);

impl Term {
    fn mk(kind: TermKind) -> Term {
        let (loose, has_fvars) = match &kind {
            TermKind::Sort(_) | TermKind::Const(_) => (0, false),
            TermKind::BVar(i) => (i + 1, false),
            TermKind::FVar(_) => (0, true),
            TermKind::Pi(b) | TermKind::Lam(b) => (
                b.ty.loose().max(b.body.loose().saturating_sub(1)),
                b.ty.has_free_vars() || b.body.has_free_vars(),
            ),
            TermKind::App(f, a) => (
                f.loose().max(a.loose()),
                f.has_free_vars() || a.has_free_vars(),
            ),
        };
        Term(Arc::new(Node {
            kind,
            loose,
            has_fvars,
        }))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn sort(s: Sort) -> Term {
        Term::mk(TermKind::Sort(s))
    }

    pub fn typ() -> Term {
        Term::sort(Sort::Type)
    }

    pub fn kind_sort() -> Term {
        Term::sort(Sort::Kind)
    }

    pub fn bvar(i: usize) -> Term {
        Term::mk(TermKind::BVar(i))
    }

    pub fn var(x: impl Into<Name>) -> Term {
        Term::mk(TermKind::FVar(x.into()))
    }

    pub fn cnst(c: impl Into<Name>) -> Term {
        Term::mk(TermKind::Const(c.into()))
    }

    /// Product whose body is already in de Bruijn form.
    pub fn pi_raw(x: impl Into<Name>, ty: Term, body: Term) -> Term {
        Term::mk(TermKind::Pi(Binder {
            name: x.into(),
            ty,
            body,
        }))
    }

    /// Abstraction whose body is already in de Bruijn form.
    pub fn lam_raw(x: impl Into<Name>, ty: Term, body: Term) -> Term {
        Term::mk(TermKind::Lam(Binder {
            name: x.into(),
            ty,
            body,
        }))
    }

    /// `Πx:ty. body`, binding the free variable `x` of `body`.
    pub fn pi(x: impl Into<Name>, ty: Term, body: Term) -> Term {
        let x = x.into();
        let body = body.abstract_var(&x);
        Term::pi_raw(x, ty, body)
    }

    /// `λx:ty. body`, binding the free variable `x` of `body`.
    pub fn lam(x: impl Into<Name>, ty: Term, body: Term) -> Term {
        let x = x.into();
        let body = body.abstract_var(&x);
        Term::lam_raw(x, ty, body)
    }

    /// Non-dependent product `a → b`.
    pub fn arrow(a: Term, b: Term) -> Term {
        Term::pi_raw("_", a, b.shift(1))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::mk(TermKind::App(f, a))
    }

    pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn loose(&self) -> usize {
        self.0.loose
    }

    pub fn is_locally_closed(&self) -> bool {
        self.0.loose == 0
    }

    pub fn has_free_vars(&self) -> bool {
        self.0.has_fvars
    }

    /// No free variables and no dangling indices.
    pub fn is_closed(&self) -> bool {
        self.is_locally_closed() && !self.has_free_vars()
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn as_const(&self) -> Option<&Name> {
        match self.kind() {
            TermKind::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_fvar(&self) -> Option<&Name> {
        match self.kind() {
            TermKind::FVar(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_sort(&self, s: Sort) -> bool {
        matches!(self.kind(), TermKind::Sort(t) if *t == s)
    }

    /// Splits `h a1 … an` into `h` and `[a1, …, an]`.
    pub fn spine(&self) -> (Term, Vec<Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let TermKind::App(f, a) = t.kind() {
            args.push(a.clone());
            t = f;
        }
        args.reverse();
        (t.clone(), args)
    }

    pub fn head(&self) -> &Term {
        let mut t = self;
        while let TermKind::App(f, _) = t.kind() {
            t = f;
        }
        t
    }

    pub fn head_const(&self) -> Option<&Name> {
        self.head().as_const()
    }

    /// Rebuilds the term bottom-up. `f` sees each subterm with the number of
    /// binders crossed; returning `Some` replaces it without descending.
    fn replace<F>(&self, depth: usize, f: &F) -> Term
    where
        F: Fn(&Term, usize) -> Option<Term>,
    {
        if let Some(t) = f(self, depth) {
            return t;
        }
        match self.kind() {
            TermKind::Sort(_) | TermKind::BVar(_) | TermKind::FVar(_) | TermKind::Const(_) => {
                self.clone()
            }
            TermKind::Pi(b) => Term::pi_raw(
                b.name.clone(),
                b.ty.replace(depth, f),
                b.body.replace(depth + 1, f),
            ),
            TermKind::Lam(b) => Term::lam_raw(
                b.name.clone(),
                b.ty.replace(depth, f),
                b.body.replace(depth + 1, f),
            ),
            TermKind::App(g, a) => Term::app(g.replace(depth, f), a.replace(depth, f)),
        }
    }

    /// Adds `by` to every loose index.
    pub fn shift(&self, by: isize) -> Term {
        self.shift_from(0, by)
    }

    fn shift_from(&self, cutoff: usize, by: isize) -> Term {
        if by == 0 {
            return self.clone();
        }
        self.replace(cutoff, &|t, depth| {
            if t.loose() <= depth {
                return Some(t.clone());
            }
            match t.kind() {
                TermKind::BVar(i) => {
                    let j = *i as isize + by;
                    assert!(j >= 0, "negative de Bruijn index after shift");
                    Some(Term::bvar(j as usize))
                }
                _ => None,
            }
        })
    }

    /// Replaces index 0 by `u` in a binder body, lowering the other loose
    /// indices by one.
    pub fn instantiate(&self, u: &Term) -> Term {
        if self.loose() == 0 {
            return self.clone();
        }
        self.replace(0, &|t, depth| {
            if t.loose() <= depth {
                return Some(t.clone());
            }
            match t.kind() {
                TermKind::BVar(i) if *i == depth => Some(u.shift(depth as isize)),
                TermKind::BVar(i) if *i > depth => Some(Term::bvar(i - 1)),
                _ => None,
            }
        })
    }

    /// Opens a binder body with the free variable `x`.
    pub fn open(&self, x: &Name) -> Term {
        self.instantiate(&Term::var(x.clone()))
    }

    /// Turns the free variable `x` into index 0 of a new binder.
    pub fn abstract_var(&self, x: &Name) -> Term {
        self.replace(0, &|t, depth| {
            if !t.has_free_vars() && t.loose() <= depth {
                return Some(t.clone());
            }
            match t.kind() {
                TermKind::FVar(y) if y == x => Some(Term::bvar(depth)),
                TermKind::BVar(i) if *i >= depth => Some(Term::bvar(i + 1)),
                _ => None,
            }
        })
    }

    /// Capture-avoiding substitution `self[x ← u]`.
    pub fn substitute(&self, x: &Name, u: &Term) -> Term {
        if !self.has_free_vars() {
            return self.clone();
        }
        self.replace(0, &|t, depth| {
            if !t.has_free_vars() {
                return Some(t.clone());
            }
            match t.kind() {
                TermKind::FVar(y) if y == x => Some(u.shift(depth as isize)),
                _ => None,
            }
        })
    }

    /// Simultaneous substitution of free variables.
    pub fn subst_many(&self, map: &BTreeMap<Name, Term>) -> Term {
        if !self.has_free_vars() || map.is_empty() {
            return self.clone();
        }
        self.replace(0, &|t, depth| {
            if !t.has_free_vars() {
                return Some(t.clone());
            }
            match t.kind() {
                TermKind::FVar(y) => map.get(y).map(|u| u.shift(depth as isize)),
                _ => None,
            }
        })
    }

    /// Replaces constants by closed terms.
    pub fn replace_consts(&self, map: &BTreeMap<Name, Term>) -> Term {
        self.replace(0, &|t, _| match t.kind() {
            TermKind::Const(c) => map.get(c).cloned(),
            _ => None,
        })
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if !t.has_free_vars() {
                return false;
            }
            if let TermKind::FVar(x) = t.kind() {
                out.insert(x.clone());
            }
            true
        });
        out
    }

    pub fn has_free_var(&self, x: &Name) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            if found || !t.has_free_vars() {
                return false;
            }
            if matches!(t.kind(), TermKind::FVar(y) if y == x) {
                found = true;
            }
            true
        });
        found
    }

    pub fn constants(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let TermKind::Const(c) = t.kind() {
                out.insert(c.clone());
            }
            true
        });
        out
    }

    pub fn mentions_const(&self, c: &str) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            if found {
                return false;
            }
            if matches!(t.kind(), TermKind::Const(d) if &**d == c) {
                found = true;
            }
            true
        });
        found
    }

    /// Whether index `i` (relative to this term) occurs.
    pub fn mentions_bvar(&self, i: usize) -> bool {
        fn go(t: &Term, i: usize) -> bool {
            if t.loose() <= i {
                return false;
            }
            match t.kind() {
                TermKind::BVar(j) => *j == i,
                TermKind::Pi(b) | TermKind::Lam(b) => go(&b.ty, i) || go(&b.body, i + 1),
                TermKind::App(f, a) => go(f, i) || go(a, i),
                _ => false,
            }
        }
        go(self, i)
    }

    /// True if some loose index lies in `0..depth`.
    pub fn has_loose_below(&self, depth: usize) -> bool {
        (0..depth.min(self.loose())).any(|i| self.mentions_bvar(i))
    }

    /// Pre-order traversal; the callback returns whether to descend.
    pub fn visit<F: FnMut(&Term) -> bool>(&self, f: &mut F) {
        if !f(self) {
            return;
        }
        match self.kind() {
            TermKind::Pi(b) | TermKind::Lam(b) => {
                b.ty.visit(f);
                b.body.visit(f);
            }
            TermKind::App(g, a) => {
                g.visit(f);
                a.visit(f);
            }
            _ => {}
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| {
            n += 1;
            true
        });
        n
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        match (self.kind(), other.kind()) {
            (TermKind::Sort(a), TermKind::Sort(b)) => a == b,
            (TermKind::BVar(a), TermKind::BVar(b)) => a == b,
            (TermKind::FVar(a), TermKind::FVar(b)) => a == b,
            (TermKind::Const(a), TermKind::Const(b)) => a == b,
            (TermKind::Pi(a), TermKind::Pi(b)) | (TermKind::Lam(a), TermKind::Lam(b)) => {
                a.ty.alpha_eq(&b.ty) && a.body.alpha_eq(&b.body)
            }
            (TermKind::App(f, a), TermKind::App(g, b)) => f.alpha_eq(g) && a.alpha_eq(b),
            _ => false,
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        self.alpha_eq(other)
    }
}

impl Eq for Term {}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::frontend::print_term(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::frontend::print_term(self))
    }
}

pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    a.alpha_eq(b)
}

pub fn substitute(t: &Term, x: &Name, u: &Term) -> Term {
    t.substitute(x, u)
}

pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    t.free_vars()
}

/// Picks `hint`, or `hint` followed by a counter, avoiding `taken`.
pub fn fresh_name(hint: &str, taken: impl Fn(&str) -> bool) -> Name {
    let base = if hint.is_empty() || hint == "_" {
        "x"
    } else {
        hint
    };
    if !taken(base) {
        return name(base);
    }
    (0..)
        .map(|i| format!("{base}{i}"))
        .find(|c| !taken(c))
        .map(|c| name(&c))
        .expect("unbounded counter")
}

/// Typing context: an ordered list of variable declarations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Context {
    entries: Vec<(Name, Term)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn from_entries(entries: Vec<(Name, Term)>) -> Context {
        Context { entries }
    }

    pub fn push(&mut self, x: Name, ty: Term) {
        self.entries.push((x, ty));
    }

    pub fn pop(&mut self) -> Option<(Name, Term)> {
        self.entries.pop()
    }

    pub fn with(mut self, x: impl Into<Name>, ty: Term) -> Context {
        self.push(x.into(), ty);
        self
    }

    pub fn lookup(&self, x: &str) -> Option<&Term> {
        self.entries
            .iter()
            .rev()
            .find(|(y, _)| &**y == x)
            .map(|(_, t)| t)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.lookup(x).is_some()
    }

    pub fn fresh(&self, hint: &str) -> Name {
        fresh_name(hint, |c| self.contains(c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn truncate(&mut self, n: usize) {
        self.entries.truncate(n);
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, Term)> {
        self.entries.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.entries.iter().map(|(x, _)| x)
    }

    pub fn map_types(&self, f: impl Fn(&Term) -> Term) -> Context {
        Context {
            entries: self
                .entries
                .iter()
                .map(|(x, t)| (x.clone(), f(t)))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstEntry {
    pub ty: Term,
    pub definable: bool,
}

/// Ordered constant declarations.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    entries: IndexMap<Name, ConstEntry>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    /// Returns false if the name is already declared.
    pub fn insert(&mut self, c: Name, ty: Term, definable: bool) -> bool {
        if self.entries.contains_key(&c) {
            return false;
        }
        self.entries.insert(c, ConstEntry { ty, definable });
        true
    }

    pub fn get(&self, c: &str) -> Option<&ConstEntry> {
        self.entries.get(c)
    }

    pub fn contains(&self, c: &str) -> bool {
        self.entries.contains_key(c)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &ConstEntry)> {
        self.entries.iter()
    }

    pub fn get_index(&self, i: usize) -> Option<(&Name, &ConstEntry)> {
        self.entries.get_index(i)
    }
}
