//! Declaration-by-declaration elaboration of a parsed file into a theory.

use crate::frontend::{Declaration, SourceFile};
use crate::kernel::{Context, Name, Sort, Term};
use crate::reduction::{RewriteRule, Theory};
use crate::typing::{self, TypeError};

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem {
    pub name: Name,
    pub statement: Term,
    pub proof: Term,
}

#[derive(Clone, Debug)]
pub struct Elaboration {
    pub theory: Theory,
    pub theorems: Vec<Theorem>,
    /// One status per item of the source file, in order.
    pub statuses: Vec<Result<(), TypeError>>,
}

impl Elaboration {
    pub fn is_ok(&self) -> bool {
        self.statuses.iter().all(Result::is_ok)
    }

    pub fn errors(&self) -> impl Iterator<Item = (usize, &TypeError)> {
        self.statuses
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().err().map(|e| (i, e)))
    }
}

/// Elaborates `file` on top of `base`. Declarations that fail to check are
/// reported and skipped; a theorem whose statement is well-formed is added to
/// the signature even if its proof fails, so later items still resolve.
pub fn elaborate(base: &Theory, file: &SourceFile) -> Elaboration {
    let mut th = base.clone();
    let mut theorems = Vec::new();
    let mut statuses = Vec::with_capacity(file.items.len());
    for decl in file.decls() {
        let status = match decl {
            Declaration::Const {
                name,
                ty,
                definable,
            } => typing::check_const_type(&th, name, ty).and_then(|()| {
                if th.add_const(name.clone(), ty.clone(), *definable) {
                    Ok(())
                } else {
                    Err(TypeError::DuplicateName(name.clone()))
                }
            }),
            Declaration::Rule { vars, lhs, rhs } => elaborate_rule(&th, vars, lhs, rhs).map(|r| {
                th.add_rule(r);
            }),
            Declaration::Theorem {
                name,
                statement,
                proof,
            } => {
                let stmt_ok = check_statement(&th, name, statement);
                match stmt_ok {
                    Err(e) => Err(e),
                    Ok(()) => {
                        let r = typing::check(&th, &Context::new(), proof, statement);
                        if !th.add_const(name.clone(), statement.clone(), false) {
                            Err(TypeError::DuplicateName(name.clone()))
                        } else {
                            theorems.push(Theorem {
                                name: name.clone(),
                                statement: statement.clone(),
                                proof: proof.clone(),
                            });
                            r
                        }
                    }
                }
            }
        };
        statuses.push(status);
    }
    Elaboration {
        theory: th,
        theorems,
        statuses,
    }
}

pub fn elaborate_rule(
    th: &Theory,
    vars: &[Name],
    lhs: &Term,
    rhs: &Term,
) -> Result<RewriteRule, TypeError> {
    let ctx = typing::infer_rule_context(th, lhs, vars)?;
    let rule = RewriteRule {
        ctx,
        lhs: lhs.clone(),
        rhs: rhs.clone(),
    };
    typing::check_rule(th, &rule)?;
    Ok(rule)
}

fn check_statement(th: &Theory, name: &Name, statement: &Term) -> Result<(), TypeError> {
    if !statement.is_closed() {
        return Err(TypeError::NotClosed(name.clone()));
    }
    match typing::infer_sort(th, &Context::new(), statement)? {
        Sort::Type => Ok(()),
        Sort::Kind => Err(TypeError::SortMismatch {
            term: statement.clone(),
            found: Term::kind_sort(),
            expected: "Type",
        }),
    }
}
