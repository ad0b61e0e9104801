//! β-reduction and rewriting: weak-head normalization, full normalization and
//! the conversion test used by the typing rules.
//!
//! Rule left-hand sides are first-order patterns: free variables of the lhs
//! are pattern variables, everything else must match syntactically after
//! head-normalizing the candidate subterm. Non-linear variables are compared
//! by conversion.

use std::cell::Cell;
use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::kernel::{Context, Name, Signature, Term, TermKind};

pub const DEFAULT_BUDGET: usize = 100_000;

pub type Subst = BTreeMap<Name, Term>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("reduction exceeded the budget of {0} steps; the rewrite system may not terminate")]
    BudgetExhausted(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewriteRule {
    /// Types of the pattern variables.
    pub ctx: Context,
    pub lhs: Term,
    pub rhs: Term,
}

impl RewriteRule {
    pub fn head(&self) -> Option<&Name> {
        self.lhs.head_const()
    }

    pub fn arity(&self) -> usize {
        self.lhs.spine().1.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    ClassicalHol,
    IntuitionisticHol,
    Bare,
}

/// A signature with its rewrite system. The first `base_consts` constants and
/// `base_rules` rules form the base theory the user extends.
#[derive(Clone, Debug)]
pub struct Theory {
    pub signature: Signature,
    rules: Vec<RewriteRule>,
    by_head: HashMap<Name, Vec<usize>>,
    pub base: Base,
    base_consts: usize,
    base_rules: usize,
    pub budget: usize,
}

impl Default for Theory {
    fn default() -> Self {
        Theory::new(Base::Bare)
    }
}

impl Theory {
    pub fn new(base: Base) -> Theory {
        Theory {
            signature: Signature::new(),
            rules: Vec::new(),
            by_head: HashMap::new(),
            base,
            base_consts: 0,
            base_rules: 0,
            budget: DEFAULT_BUDGET,
        }
    }

    /// Marks everything declared so far as base material.
    pub fn seal_base(&mut self, base: Base) {
        self.base = base;
        self.base_consts = self.signature.len();
        self.base_rules = self.rules.len();
    }

    pub fn with_budget(mut self, budget: usize) -> Theory {
        self.budget = budget;
        self
    }

    /// Returns false if `c` is already declared.
    pub fn add_const(&mut self, c: Name, ty: Term, definable: bool) -> bool {
        self.signature.insert(c, ty, definable)
    }

    pub fn add_rule(&mut self, rule: RewriteRule) {
        if let Some(h) = rule.head() {
            self.by_head
                .entry(h.clone())
                .or_default()
                .push(self.rules.len());
        }
        self.rules.push(rule);
    }

    pub fn const_type(&self, c: &str) -> Option<&Term> {
        self.signature.get(c).map(|e| &e.ty)
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn rules_for(&self, c: &str) -> impl Iterator<Item = &RewriteRule> {
        self.by_head
            .get(c)
            .into_iter()
            .flatten()
            .map(move |&i| &self.rules[i])
    }

    pub fn base_consts(&self) -> impl Iterator<Item = (&Name, &crate::kernel::ConstEntry)> {
        self.signature.iter().take(self.base_consts)
    }

    pub fn user_consts(&self) -> impl Iterator<Item = (&Name, &crate::kernel::ConstEntry)> {
        self.signature.iter().skip(self.base_consts)
    }

    pub fn base_rules(&self) -> &[RewriteRule] {
        &self.rules[..self.base_rules]
    }

    pub fn user_rules(&self) -> &[RewriteRule] {
        &self.rules[self.base_rules..]
    }

    pub fn is_base_const(&self, c: &str) -> bool {
        self.signature
            .iter()
            .take(self.base_consts)
            .any(|(n, _)| &**n == c)
    }

    pub fn reducer(&self) -> Reducer<'_> {
        Reducer::new(self)
    }
}

/// Reduction engine with a step counter shared by one top-level call.
pub struct Reducer<'a> {
    th: &'a Theory,
    steps: Cell<usize>,
}

impl<'a> Reducer<'a> {
    pub fn new(th: &'a Theory) -> Reducer<'a> {
        Reducer {
            th,
            steps: Cell::new(0),
        }
    }

    fn tick(&self) -> Result<(), ReduceError> {
        let n = self.steps.get() + 1;
        if n > self.th.budget {
            return Err(ReduceError::BudgetExhausted(self.th.budget));
        }
        self.steps.set(n);
        Ok(())
    }

    pub fn steps(&self) -> usize {
        self.steps.get()
    }

    pub fn whnf(&self, t: &Term) -> Result<Term, ReduceError> {
        let mut t = t.clone();
        loop {
            let (head, args) = t.spine();
            match head.kind() {
                TermKind::Lam(b) if !args.is_empty() => {
                    self.tick()?;
                    t = Term::apps(b.body.instantiate(&args[0]), args[1..].iter().cloned());
                }
                TermKind::Const(c) => match self.rewrite_head(c, &args)? {
                    Some(r) => {
                        self.tick()?;
                        t = r;
                    }
                    None => return Ok(t),
                },
                _ => return Ok(t),
            }
        }
    }

    /// Tries the rules of `c` on `c args`, in declaration order.
    fn rewrite_head(&self, c: &Name, args: &[Term]) -> Result<Option<Term>, ReduceError> {
        for rule in self.th.rules_for(c) {
            let (_, pats) = rule.lhs.spine();
            if pats.len() > args.len() {
                continue;
            }
            let mut theta = Subst::new();
            let mut ok = true;
            for (p, a) in pats.iter().zip(args) {
                if !self.match_at(p, a, 0, &mut theta)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                let rhs = rule.rhs.subst_many(&theta);
                return Ok(Some(Term::apps(rhs, args[pats.len()..].iter().cloned())));
            }
        }
        Ok(None)
    }

    /// Matches `pat` against `cand` under `depth` pattern binders.
    fn match_at(
        &self,
        pat: &Term,
        cand: &Term,
        depth: usize,
        theta: &mut Subst,
    ) -> Result<bool, ReduceError> {
        if let TermKind::FVar(x) = pat.kind() {
            if cand.has_loose_below(depth) {
                return Ok(false);
            }
            let v = cand.shift(-(depth as isize));
            return match theta.get(x) {
                Some(prev) => {
                    let prev = prev.clone();
                    self.conv_inner(&prev, &v)
                }
                None => {
                    theta.insert(x.clone(), v);
                    Ok(true)
                }
            };
        }
        if !pat.has_free_vars() && pat.alpha_eq(cand) {
            return Ok(true);
        }
        let cand = self.whnf(cand)?;
        match (pat.kind(), cand.kind()) {
            (TermKind::Sort(a), TermKind::Sort(b)) => Ok(a == b),
            (TermKind::Const(a), TermKind::Const(b)) => Ok(a == b),
            (TermKind::BVar(i), TermKind::BVar(j)) => Ok(i == j),
            (TermKind::Pi(a), TermKind::Pi(b)) | (TermKind::Lam(a), TermKind::Lam(b)) => {
                Ok(self.match_at(&a.ty, &b.ty, depth, theta)?
                    && self.match_at(&a.body, &b.body, depth + 1, theta)?)
            }
            (TermKind::App(..), TermKind::App(..)) => {
                let (ph, pargs) = pat.spine();
                let (ch, cargs) = cand.spine();
                if pargs.len() != cargs.len() || !self.match_at(&ph, &ch, depth, theta)? {
                    return Ok(false);
                }
                for (p, a) in pargs.iter().zip(&cargs) {
                    if !self.match_at(p, a, depth, theta)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    /// Leftmost-outermost normal form.
    pub fn normalize(&self, t: &Term) -> Result<Term, ReduceError> {
        let t = self.whnf(t)?;
        Ok(match t.kind() {
            TermKind::Pi(b) => Term::pi_raw(
                b.name.clone(),
                self.normalize(&b.ty)?,
                self.normalize(&b.body)?,
            ),
            TermKind::Lam(b) => Term::lam_raw(
                b.name.clone(),
                self.normalize(&b.ty)?,
                self.normalize(&b.body)?,
            ),
            TermKind::App(..) => {
                let (head, args) = t.spine();
                let args = args
                    .iter()
                    .map(|a| self.normalize(a))
                    .collect::<Result<Vec<_>, _>>()?;
                Term::apps(head, args)
            }
            _ => t,
        })
    }

    pub fn conv(&self, a: &Term, b: &Term) -> Result<bool, ReduceError> {
        self.conv_inner(a, b)
    }

    /// Alternates weak-head normalization with structural descent.
    fn conv_inner(&self, a: &Term, b: &Term) -> Result<bool, ReduceError> {
        let mut work = vec![(a.clone(), b.clone())];
        while let Some((a, b)) = work.pop() {
            if a.alpha_eq(&b) {
                continue;
            }
            let a = self.whnf(&a)?;
            let b = self.whnf(&b)?;
            match (a.kind(), b.kind()) {
                (TermKind::Sort(x), TermKind::Sort(y)) if x == y => {}
                (TermKind::BVar(x), TermKind::BVar(y)) if x == y => {}
                (TermKind::FVar(x), TermKind::FVar(y)) if x == y => {}
                (TermKind::Const(x), TermKind::Const(y)) if x == y => {}
                (TermKind::Pi(x), TermKind::Pi(y)) => {
                    work.push((x.ty.clone(), y.ty.clone()));
                    work.push((x.body.clone(), y.body.clone()));
                }
                (TermKind::Lam(x), TermKind::Lam(y)) => {
                    work.push((x.body.clone(), y.body.clone()));
                }
                (TermKind::App(..), TermKind::App(..)) => {
                    let (ha, aa) = a.spine();
                    let (hb, ab) = b.spine();
                    if aa.len() != ab.len() {
                        return Ok(false);
                    }
                    work.push((ha, hb));
                    work.extend(aa.into_iter().zip(ab));
                }
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    /// Matches a rule lhs against a term: the head is compared as is, argument
    /// subterms are head-normalized on demand.
    pub fn match_pattern(&self, lhs: &Term, cand: &Term) -> Result<Option<Subst>, ReduceError> {
        let mut theta = Subst::new();
        let (ph, pargs) = lhs.spine();
        let (ch, cargs) = cand.spine();
        if pargs.len() != cargs.len() || !ph.alpha_eq(&ch) {
            return Ok(None);
        }
        for (p, a) in pargs.iter().zip(&cargs) {
            if !self.match_at(p, a, 0, &mut theta)? {
                return Ok(None);
            }
        }
        Ok(Some(theta))
    }
}

pub fn whnf(th: &Theory, t: &Term) -> Result<Term, ReduceError> {
    th.reducer().whnf(t)
}

pub fn normalize(th: &Theory, t: &Term) -> Result<Term, ReduceError> {
    th.reducer().normalize(t)
}

pub fn conv(th: &Theory, a: &Term, b: &Term) -> Result<bool, ReduceError> {
    th.reducer().conv(a, b)
}

pub fn match_pattern(th: &Theory, lhs: &Term, cand: &Term) -> Result<Option<Subst>, ReduceError> {
    th.reducer().match_pattern(lhs, cand)
}

/// Syntactic one-step matching with α-equality for repeated variables.
fn match_syntactic(pat: &Term, cand: &Term, depth: usize, theta: &mut Subst) -> bool {
    match (pat.kind(), cand.kind()) {
        (TermKind::FVar(x), _) => {
            if cand.has_loose_below(depth) {
                return false;
            }
            let v = cand.shift(-(depth as isize));
            match theta.get(x) {
                Some(prev) => prev.alpha_eq(&v),
                None => {
                    theta.insert(x.clone(), v);
                    true
                }
            }
        }
        (TermKind::Pi(a), TermKind::Pi(b)) | (TermKind::Lam(a), TermKind::Lam(b)) => {
            match_syntactic(&a.ty, &b.ty, depth, theta)
                && match_syntactic(&a.body, &b.body, depth + 1, theta)
        }
        (TermKind::App(f, a), TermKind::App(g, b)) => {
            match_syntactic(f, g, depth, theta) && match_syntactic(a, b, depth, theta)
        }
        _ => pat.alpha_eq(cand),
    }
}

/// Every term reachable from `t` by one β-step or one syntactic rule step at
/// any position, in pre-order.
pub fn one_step_reducts(th: &Theory, t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    // Redexes at the root.
    if let TermKind::App(f, a) = t.kind() {
        if let TermKind::Lam(b) = f.kind() {
            out.push(b.body.instantiate(a));
        }
    }
    if let Some(c) = t.head_const() {
        let (_, args) = t.spine();
        for rule in th.rules_for(c) {
            if rule.arity() != args.len() {
                continue;
            }
            let mut theta = Subst::new();
            if match_syntactic(&rule.lhs, t, 0, &mut theta) {
                out.push(rule.rhs.subst_many(&theta));
            }
        }
    }
    match t.kind() {
        TermKind::Pi(b) | TermKind::Lam(b) => {
            let lam = matches!(t.kind(), TermKind::Lam(_));
            let mk = |ty: Term, body: Term| {
                if lam {
                    Term::lam_raw(b.name.clone(), ty, body)
                } else {
                    Term::pi_raw(b.name.clone(), ty, body)
                }
            };
            for ty in one_step_reducts(th, &b.ty) {
                out.push(mk(ty, b.body.clone()));
            }
            for body in one_step_reducts(th, &b.body) {
                out.push(mk(b.ty.clone(), body));
            }
        }
        TermKind::App(f, a) => {
            for g in one_step_reducts(th, f) {
                out.push(Term::app(g, a.clone()));
            }
            for b in one_step_reducts(th, a) {
                out.push(Term::app(f.clone(), b));
            }
        }
        _ => {}
    }
    out
}
