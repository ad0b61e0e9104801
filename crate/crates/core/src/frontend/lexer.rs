use super::{ParseError, ParseErrorKind, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Tok {
    Ident(String),
    Def,
    Thm,
    Type,
    Colon,
    ColonEq,
    Dot,
    Comma,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Arrow,
    FatArrow,
    LongArrow,
    Eof,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Def => "`def`".into(),
            Tok::Thm => "`thm`".into(),
            Tok::Type => "`Type`".into(),
            Tok::Colon => "`:`".into(),
            Tok::ColonEq => "`:=`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::LongArrow => "`-->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub(super) const KEYWORDS: [&str; 3] = ["def", "thm", "Type"];

pub(super) fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

pub(super) fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut line_start = 0;
    let span = |start: usize, end: usize, line: usize, line_start: usize| Span {
        line,
        col: src[line_start..start].chars().count() + 1,
        start,
        end,
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            i += 1;
            line += 1;
            line_start = i;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if src[i..].starts_with("(;") {
            let open = span(i, i + 2, line, line_start);
            let mut depth = 0usize;
            loop {
                if i >= bytes.len() {
                    return Err(ParseError {
                        kind: ParseErrorKind::UnterminatedComment,
                        span: open,
                    });
                }
                if src[i..].starts_with("(;") {
                    depth += 1;
                    i += 2;
                } else if src[i..].starts_with(";)") {
                    depth -= 1;
                    i += 2;
                    if depth == 0 {
                        break;
                    }
                } else {
                    if bytes[i] == b'\n' {
                        line += 1;
                        line_start = i + 1;
                    }
                    i += 1;
                }
            }
            continue;
        }
        let start = i;
        let tok = if is_ident_char(c) {
            while i < bytes.len() && is_ident_char(bytes[i]) {
                i += 1;
            }
            match &src[start..i] {
                "def" => Tok::Def,
                "thm" => Tok::Thm,
                "Type" => Tok::Type,
                s => Tok::Ident(s.to_string()),
            }
        } else {
            let rest = &src[i..];
            let (tok, len) = if rest.starts_with("-->") {
                (Tok::LongArrow, 3)
            } else if rest.starts_with("->") {
                (Tok::Arrow, 2)
            } else if rest.starts_with("=>") {
                (Tok::FatArrow, 2)
            } else if rest.starts_with(":=") {
                (Tok::ColonEq, 2)
            } else {
                let t = match c {
                    b':' => Tok::Colon,
                    b'.' => Tok::Dot,
                    b',' => Tok::Comma,
                    b'[' => Tok::LBrack,
                    b']' => Tok::RBrack,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    _ => {
                        let ch = rest.chars().next().unwrap_or('\0');
                        return Err(ParseError {
                            kind: ParseErrorKind::BadChar(ch),
                            span: span(i, i + ch.len_utf8(), line, line_start),
                        });
                    }
                };
                (t, 1)
            };
            i += len;
            tok
        };
        out.push((tok, span(start, i, line, line_start)));
    }
    out.push((Tok::Eof, span(i, i, line, line_start)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrows_and_comments() {
        let toks: Vec<Tok> = lex("[x] f x --> (; c (; nested ;) ;) x -> y => z := .")
            .unwrap()
            .into_iter()
            .map(|(t, _)| t)
            .collect();
        assert_eq!(
            toks,
            vec![
                Tok::LBrack,
                Tok::Ident("x".into()),
                Tok::RBrack,
                Tok::Ident("f".into()),
                Tok::Ident("x".into()),
                Tok::LongArrow,
                Tok::Ident("x".into()),
                Tok::Arrow,
                Tok::Ident("y".into()),
                Tok::FatArrow,
                Tok::Ident("z".into()),
                Tok::ColonEq,
                Tok::Dot,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_are_line_and_column() {
        let toks = lex("a\n  bc").unwrap();
        assert_eq!((toks[1].1.line, toks[1].1.col), (2, 3));
        let err = lex("a\n ∀").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::BadChar('∀'));
        assert_eq!((err.span.line, err.span.col), (2, 2));
    }
}
