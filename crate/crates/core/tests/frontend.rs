mod common;

use kuroda::frontend::{parse, print, ParseErrorKind};
use kuroda::holtheory::hol_base;

use common::*;

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Byte offsets of whole-word occurrences of `word` in `src` from `from` on.
fn occurrences(src: &str, word: &str, from: usize) -> Vec<usize> {
    src.match_indices(word)
        .map(|(i, _)| i)
        .filter(|&i| i >= from)
        .filter(|&i| {
            let before = src[..i].chars().next_back().is_none_or(|c| !is_ident_char(c));
            let after = src[i + word.len()..]
                .chars()
                .next()
                .is_none_or(|c| !is_ident_char(c));
            before && after
        })
        .collect()
}

#[test]
fn print_parse_round_trip() {
    for name in ALL_CLASSICAL.iter().chain(["leibniz_ku"].iter()) {
        let base = hol_base(true);
        let file = parse(&fixture_text(name), &base.signature).unwrap();
        let printed = print(&file);
        let again = parse(&printed, &base.signature).unwrap();
        assert_eq!(again.decls().collect::<Vec<_>>(), file.decls().collect::<Vec<_>>());
        assert_eq!(print(&again), printed, "{name}");
    }
}

#[test]
fn unbound_identifier_spans_cover_the_mutated_token() {
    let base = hol_base(true);
    let mut checked = 0;
    for name in LIBRARY {
        let src = fixture_text(name);
        let from = src.find(":=").unwrap();
        for word in ["imp_i", "not", "top", "or_e", "all_i", "eq", "add", "S"] {
            for pos in occurrences(&src, word, from).into_iter().take(3) {
                let mutated = format!("{}undeclared_q{}", &src[..pos], &src[pos + word.len()..]);
                let err = parse(&mutated, &base.signature).unwrap_err();
                assert_eq!(err.kind, ParseErrorKind::Unbound("undeclared_q".into()));
                assert_eq!(err.span.start, pos, "{name}: {word}");
                assert_eq!(err.span.end, pos + "undeclared_q".len());
                let line = src[..pos].matches('\n').count() + 1;
                assert_eq!(err.span.line, line);
                checked += 1;
            }
        }
    }
    assert!(checked > 40, "{checked}");
}

#[test]
fn bad_characters_are_reported_where_they_are() {
    let base = hol_base(true);
    for name in LIBRARY {
        let src = fixture_text(name);
        let from = src.find(":=").unwrap();
        for pos in (from..src.len()).step_by(13) {
            if !src.is_char_boundary(pos) {
                continue;
            }
            let in_comment = src[..pos].matches("(;").count() > src[..pos].matches(";)").count();
            if !src[pos..].starts_with(' ') || in_comment {
                continue;
            }
            let mutated = format!("{}${}", &src[..pos], &src[pos..]);
            let err = parse(&mutated, &base.signature).unwrap_err();
            assert_eq!(err.kind, ParseErrorKind::BadChar('$'), "{name}@{pos}");
            assert_eq!(err.span.start, pos);
        }
    }
}

#[test]
fn rule_variables_do_not_capture_constants() {
    let base = hol_base(true);
    // `top` is a rule variable here, shadowing the constant.
    let src = "def f : Prop -> Prop. [top] f top --> imp top top.";
    let file = parse(src, &base.signature).unwrap();
    let printed = print(&file);
    assert!(printed.contains("[top]"), "{printed}");
    let elab = kuroda::elaborate::elaborate(&base, &file);
    assert!(elab.is_ok());
    let r = elab.theory.user_rules().first().unwrap();
    assert!(r.lhs.free_vars().iter().any(|v| &**v == "top"));
}

#[test]
fn conformance_classes() {
    for (src, class) in CONFORMANCE {
        assert_eq!(first_error_class(src, true).as_deref(), Some(*class), "{src}");
    }
    for (t, class) in kind_cases() {
        assert_eq!(kind_case_class(&t).as_deref(), Some(class), "{t}");
    }
}
