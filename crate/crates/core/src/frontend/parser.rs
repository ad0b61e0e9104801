use std::collections::HashSet;

use super::lexer::{lex, Tok};
use super::{Declaration, Item, ParseError, ParseErrorKind, SourceFile, Span};
use crate::kernel::{name, Name, Signature, Term};

/// Parses a file against the constants already declared in `base`.
/// Identifiers resolve to binders first, then rule variables, then constants;
/// anything else is an error at the identifier's position.
pub fn parse(text: &str, base: &Signature) -> Result<SourceFile, ParseError> {
    let mut p = Parser::new(text, base)?;
    let mut items = Vec::new();
    while p.peek() != &Tok::Eof {
        let span = p.span();
        let decl = p.declaration()?;
        items.push(Item {
            decl,
            span: Some(span),
        });
    }
    Ok(SourceFile { items })
}

/// Parses a single term; `free` lists identifiers to read as free variables.
pub fn parse_term(text: &str, base: &Signature, free: &[&str]) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, base)?;
    p.rule_vars = free.iter().map(|s| name(s)).collect();
    let t = p.term()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

struct Parser<'s> {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    base: &'s Signature,
    declared: HashSet<String>,
    /// Binder names, innermost last. Anonymous arrow binders are empty.
    locals: Vec<Name>,
    rule_vars: Vec<Name>,
}

impl<'s> Parser<'s> {
    fn new(text: &str, base: &'s Signature) -> Result<Parser<'s>, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            base,
            declared: HashSet::new(),
            locals: Vec::new(),
            rule_vars: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            kind: ParseErrorKind::Unexpected {
                expected: expected.to_string(),
                found: self.peek().describe(),
            },
            span: self.span(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.error(&tok.describe())
        }
    }

    fn ident(&mut self) -> Result<(Name, Span), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let (_, sp) = self.bump();
                Ok((name(&s), sp))
            }
            Tok::Def | Tok::Thm | Tok::Type => Err(ParseError {
                kind: ParseErrorKind::Keyword(self.peek().describe()),
                span: self.span(),
            }),
            _ => self.error("identifier"),
        }
    }

    fn is_const(&self, s: &str) -> bool {
        self.base.contains(s) || self.declared.contains(s)
    }

    fn declare(&mut self, n: &Name, span: Span) -> Result<(), ParseError> {
        if self.is_const(n) {
            return Err(ParseError {
                kind: ParseErrorKind::Duplicate(n.to_string()),
                span,
            });
        }
        self.declared.insert(n.to_string());
        Ok(())
    }

    fn declaration(&mut self) -> Result<Declaration, ParseError> {
        match self.peek() {
            Tok::LBrack => self.rule(),
            Tok::Thm => {
                self.bump();
                let (n, sp) = self.ident()?;
                self.expect(Tok::Colon)?;
                let statement = self.term()?;
                self.expect(Tok::ColonEq)?;
                let proof = self.term()?;
                self.expect(Tok::Dot)?;
                // Declared after the proof: a theorem cannot refer to itself.
                self.declare(&n, sp)?;
                Ok(Declaration::Theorem {
                    name: n,
                    statement,
                    proof,
                })
            }
            _ => {
                let definable = if *self.peek() == Tok::Def {
                    self.bump();
                    true
                } else {
                    false
                };
                let (n, sp) = self.ident()?;
                self.expect(Tok::Colon)?;
                let ty = self.term()?;
                self.expect(Tok::Dot)?;
                self.declare(&n, sp)?;
                Ok(Declaration::Const {
                    name: n,
                    ty,
                    definable,
                })
            }
        }
    }

    fn rule(&mut self) -> Result<Declaration, ParseError> {
        self.expect(Tok::LBrack)?;
        let mut vars: Vec<(Name, Span)> = Vec::new();
        if *self.peek() != Tok::RBrack {
            loop {
                let (v, sp) = self.ident()?;
                if vars.iter().any(|(w, _)| *w == v) {
                    return Err(ParseError {
                        kind: ParseErrorKind::DuplicateRuleVar(v.to_string()),
                        span: sp,
                    });
                }
                vars.push((v, sp));
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrack)?;
        self.rule_vars = vars.iter().map(|(v, _)| v.clone()).collect();
        let result = (|| {
            let lhs = self.term()?;
            self.expect(Tok::LongArrow)?;
            let rhs = self.term()?;
            self.expect(Tok::Dot)?;
            Ok((lhs, rhs))
        })();
        self.rule_vars.clear();
        let (lhs, rhs) = result?;
        let fv = lhs.free_vars();
        if let Some((v, sp)) = vars.iter().find(|(v, _)| !fv.contains(v)) {
            return Err(ParseError {
                kind: ParseErrorKind::UnusedRuleVar(v.to_string()),
                span: *sp,
            });
        }
        Ok(Declaration::Rule {
            vars: vars.into_iter().map(|(v, _)| v).collect(),
            lhs,
            rhs,
        })
    }

    /// term ::= x : app (=> | ->) term | app (-> term)?
    fn term(&mut self) -> Result<Term, ParseError> {
        if matches!(self.peek(), Tok::Ident(_)) && *self.peek2() == Tok::Colon {
            let (x, _) = self.ident()?;
            self.bump();
            let ty = self.app()?;
            let lam = match self.peek() {
                Tok::FatArrow => true,
                Tok::Arrow => false,
                _ => return self.error("`=>` or `->`"),
            };
            self.bump();
            self.locals.push(x.clone());
            let body = self.term();
            self.locals.pop();
            let body = body?;
            return Ok(if lam {
                Term::lam_raw(x, ty, body)
            } else {
                Term::pi_raw(x, ty, body)
            });
        }
        let a = self.app()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            self.locals.push(name(""));
            let b = self.term();
            self.locals.pop();
            return Ok(Term::pi_raw("_", a, b?));
        }
        Ok(a)
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while matches!(self.peek(), Tok::Ident(_) | Tok::LParen | Tok::Type) {
            let a = self.atom()?;
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Type => {
                self.bump();
                Ok(Term::typ())
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) => {
                let (_, sp) = self.bump();
                if let Some(i) = self.locals.iter().rev().position(|x| **x == *s) {
                    Ok(Term::bvar(i))
                } else if self.rule_vars.iter().any(|v| **v == *s) {
                    Ok(Term::var(name(&s)))
                } else if self.is_const(&s) {
                    Ok(Term::cnst(name(&s)))
                } else {
                    Err(ParseError {
                        kind: ParseErrorKind::Unbound(s),
                        span: sp,
                    })
                }
            }
            _ => self.error("term"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(names: &[&str]) -> Signature {
        let mut s = Signature::new();
        for n in names {
            s.insert(name(n), Term::typ(), false);
        }
        s
    }

    #[test]
    fn addition_listing() {
        let src = "nat : Set.\n0 : El nat.\nS : El nat -> El nat.\n\
                   def add : El nat -> El nat -> El nat.\n\
                   [x] add x 0 --> x.\n[x, y] add x (S y) --> S (add x y).\n";
        let f = parse(src, &sig(&["Set", "El"])).unwrap();
        assert_eq!(f.items.len(), 6);
        match &f.items[3].decl {
            Declaration::Const {
                name, definable, ..
            } => {
                assert_eq!(&**name, "add");
                assert!(*definable);
            }
            d => panic!("{d:?}"),
        }
        match &f.items[5].decl {
            Declaration::Rule { vars, lhs, .. } => {
                assert_eq!(vars.len(), 2);
                assert_eq!(lhs.free_vars().len(), 2);
            }
            d => panic!("{d:?}"),
        }
    }

    #[test]
    fn binders_and_arrows() {
        let s = sig(&["Prop", "Prf"]);
        let t = parse_term("p : Prop -> Prf p -> Prf p", &s, &[]).unwrap();
        let expect = Term::pi(
            "p",
            Term::cnst("Prop"),
            Term::arrow(
                Term::app(Term::cnst("Prf"), Term::var("p")),
                Term::app(Term::cnst("Prf"), Term::var("p")),
            ),
        );
        assert_eq!(t, expect);
        let l = parse_term("x : Prop => x", &s, &[]).unwrap();
        assert_eq!(l, Term::lam("y", Term::cnst("Prop"), Term::var("y")));
    }

    #[test]
    fn errors_carry_positions() {
        let s = sig(&["Prop"]);
        let e = parse("c : Prop.\nd : Prp.", &s).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Unbound("Prp".into()));
        assert_eq!((e.span.line, e.span.col), (2, 5));
        let e = parse("Prop : Type.", &s).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Duplicate("Prop".into()));
        let e = parse("[x, y] f x --> x.", &sig(&["f"])).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnusedRuleVar("y".into()));
        let e = parse("c : Prop", &s).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Unexpected { .. }));
    }

    #[test]
    fn forward_reference_is_unbound() {
        let e = parse("a : b.\nb : Type.", &Signature::new()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Unbound("b".into()));
    }

    #[test]
    fn theorem_cannot_use_itself() {
        let e = parse("thm t : Type := t.", &Signature::new()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Unbound("t".into()));
    }
}
