use std::collections::BTreeSet;

use super::lexer::{is_ident_char, KEYWORDS};
use super::{Declaration, SourceFile};
use crate::kernel::{fresh_name, Binder, Name, Sort, Term, TermKind};

/// Prints one declaration per line, each terminated by `.`.
pub fn print(file: &SourceFile) -> String {
    let mut out = String::new();
    for d in file.decls() {
        out.push_str(&print_declaration(d));
        out.push('\n');
    }
    out
}

pub fn print_declaration(d: &Declaration) -> String {
    match d {
        Declaration::Const {
            name,
            ty,
            definable,
        } => {
            let kw = if *definable { "def " } else { "" };
            format!("{kw}{name} : {}.", print_term(ty))
        }
        Declaration::Rule { vars, lhs, rhs } => {
            let vs: Vec<&str> = vars.iter().map(|v| &**v).collect();
            format!(
                "[{}] {} --> {}.",
                vs.join(", "),
                print_term(lhs),
                print_term(rhs)
            )
        }
        Declaration::Theorem {
            name,
            statement,
            proof,
        } => format!(
            "thm {name} : {} := {}.",
            print_term(statement),
            print_term(proof)
        ),
    }
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    Printer { names: Vec::new() }.term(t, Prec::Top, &mut out);
    out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Top,
    App,
    Arg,
}

struct Printer {
    names: Vec<Name>,
}

impl Printer {
    fn bvar_name(&self, i: usize) -> Option<&Name> {
        self.names.len().checked_sub(i + 1).map(|k| &self.names[k])
    }

    /// Chooses a printable binder name that neither captures nor is captured:
    /// it must differ from the free variables, constants, and outer binder
    /// names visible in the body.
    fn binder_name(&self, b: &Binder) -> Name {
        let mut avoid: BTreeSet<Name> = b.body.free_vars();
        avoid.extend(b.body.constants());
        for i in 1..b.body.loose() {
            if b.body.mentions_bvar(i) {
                if let Some(n) = self.bvar_name(i - 1) {
                    avoid.insert(n.clone());
                }
            }
        }
        let hint = if is_ident(&b.name) { &*b.name } else { "x" };
        fresh_name(hint, |c| avoid.contains(c) || KEYWORDS.contains(&c))
    }

    fn term(&mut self, t: &Term, prec: Prec, out: &mut String) {
        match t.kind() {
            TermKind::Sort(Sort::Type) => out.push_str("Type"),
            TermKind::Sort(Sort::Kind) => out.push_str("Kind"),
            TermKind::Const(c) | TermKind::FVar(c) => out.push_str(c),
            TermKind::BVar(i) => match self.bvar_name(*i) {
                Some(n) => out.push_str(n),
                None => out.push_str(&format!("#{i}")),
            },
            TermKind::App(..) => {
                let (head, args) = t.spine();
                if prec == Prec::Arg {
                    out.push('(');
                }
                self.term(&head, Prec::App, out);
                for a in &args {
                    out.push(' ');
                    self.term(a, Prec::Arg, out);
                }
                if prec == Prec::Arg {
                    out.push(')');
                }
            }
            TermKind::Pi(b) | TermKind::Lam(b) => {
                let lam = matches!(t.kind(), TermKind::Lam(_));
                if prec > Prec::Top {
                    out.push('(');
                }
                let dependent = lam || b.body.mentions_bvar(0);
                let x = if dependent {
                    self.binder_name(b)
                } else {
                    Name::from("")
                };
                if dependent {
                    out.push_str(&x);
                    out.push_str(" : ");
                }
                self.term(&b.ty, Prec::App, out);
                out.push_str(if lam { " => " } else { " -> " });
                self.names.push(x);
                self.term(&b.body, Prec::Top, out);
                self.names.pop();
                if prec > Prec::Top {
                    out.push(')');
                }
            }
        }
    }
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(is_ident_char) && !KEYWORDS.contains(&s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_term;
    use crate::kernel::{name, Signature};

    fn sig() -> Signature {
        let mut s = Signature::new();
        for n in ["Prop", "Prf", "El", "Set", "all", "not", "x"] {
            s.insert(name(n), Term::typ(), false);
        }
        s
    }

    #[test]
    fn prints_canonical_forms() {
        let s = sig();
        for src in [
            "p : Prop -> Prf p -> Prf p",
            "Prop -> Prop",
            "(Prop -> Prop) -> Prop",
            "P : (El Set -> Prop) -> Prf (P Set)",
            "all Set (z : El Set => not (not z))",
            "Type",
        ] {
            let t = parse_term(src, &s, &[]).unwrap();
            assert_eq!(print_term(&t), src);
        }
    }

    #[test]
    fn renames_on_clash() {
        // λp:Prop. p' where p' is a free variable named p.
        let t = Term::lam_raw("p", Term::cnst("Prop"), Term::var("p"));
        assert_eq!(print_term(&t), "p0 : Prop => p");
        // A binder named like a constant used in its body.
        let t = Term::lam_raw("x", Term::cnst("Prop"), Term::app(Term::cnst("x"), Term::bvar(0)));
        let printed = print_term(&t);
        assert_eq!(printed, "x0 : Prop => x x0");
        assert_eq!(parse_term(&printed, &sig(), &[]).unwrap(), t);
    }

    #[test]
    fn inner_binder_does_not_capture_outer() {
        // λy. λy. (outer y): the inner binder must be renamed.
        let t = Term::lam_raw(
            "y",
            Term::cnst("Prop"),
            Term::lam_raw("y", Term::cnst("Prop"), Term::bvar(1)),
        );
        let printed = print_term(&t);
        assert_eq!(printed, "y : Prop => y0 : Prop => y");
        assert_eq!(parse_term(&printed, &sig(), &[]).unwrap(), t);
    }
}
