//! Concrete syntax for theories (`.dl` files) and tagged conclusions.
//!
//! ```text
//! theory    = { statement } ;
//! statement = fact | rule | sup ;
//! fact      = literal "." ;
//! rule      = [ label ":" ] [ body ] arrow literal "." ;
//! body      = literal { "," literal } ;
//! arrow     = "->" | "=>" | "~>" ;
//! sup       = label ">" label "." ;
//! literal   = [ "~" ] atom ;
//! atom      = lident [ "(" term { "," term } ")" ] ;
//! term      = lident | Uident ;
//! ```
//!
//! `%` starts a line comment. Unlabelled rules are named `_r<N>`, where `N` is
//! the rule's 1-based position among the file's rules.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::conclusion::{Tag, TaggedConclusion};
use crate::syntax::{Atom, Literal, Rule, RuleKind, SourceTheory, Term};

/// A located syntax error. Line and column are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message} (at `{token}`)")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Gt,
    Tilde,
    Arrow(RuleKind),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
    text: String,
}

fn tokenize(text: &str, mut line: usize, mut column: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    // Position of the last character seen, so EOF errors point inside the input.
    let mut last = (line, column.saturating_sub(1).max(1));
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let advance = |ch: char, line: &mut usize, column: &mut usize| {
            if ch == '\n' {
                *line += 1;
                *column = 1;
            } else {
                *column += 1;
            }
        };
        if c == '%' {
            while let Some(&ch) = chars.peek() {
                if ch == '\n' {
                    break;
                }
                chars.next();
                advance(ch, &mut line, &mut column);
            }
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            advance(c, &mut line, &mut column);
            continue;
        }
        last = (l, col);
        let push = |out: &mut Vec<Token>, tok: Tok, text: &str| {
            out.push(Token {
                tok,
                line: l,
                column: col,
                text: text.to_string(),
            })
        };
        if c.is_ascii_alphanumeric() || c == '_' {
            let mut ident = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_ascii_alphanumeric() || ch == '_' {
                    ident.push(ch);
                    chars.next();
                    advance(ch, &mut line, &mut column);
                } else {
                    break;
                }
            }
            last = (line, column - 1);
            push(&mut out, Tok::Ident(ident.clone()), &ident);
            continue;
        }
        chars.next();
        advance(c, &mut line, &mut column);
        let two = |chars: &mut std::iter::Peekable<std::str::Chars>, next: char| {
            if chars.peek() == Some(&next) {
                chars.next();
                true
            } else {
                false
            }
        };
        match c {
            '(' => push(&mut out, Tok::LParen, "("),
            ')' => push(&mut out, Tok::RParen, ")"),
            ',' => push(&mut out, Tok::Comma, ","),
            '.' => push(&mut out, Tok::Dot, "."),
            ':' => push(&mut out, Tok::Colon, ":"),
            '>' => push(&mut out, Tok::Gt, ">"),
            '~' if two(&mut chars, '>') => {
                column += 1;
                push(&mut out, Tok::Arrow(RuleKind::Defeater), "~>")
            }
            '~' => push(&mut out, Tok::Tilde, "~"),
            '-' if two(&mut chars, '>') => {
                column += 1;
                push(&mut out, Tok::Arrow(RuleKind::Strict), "->")
            }
            '=' if two(&mut chars, '>') => {
                column += 1;
                push(&mut out, Tok::Arrow(RuleKind::Defeasible), "=>")
            }
            other => {
                return Err(ParseError {
                    line: l,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                    token: other.to_string(),
                })
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line: last.0,
        column: last.1,
        text: "end of input".to_string(),
    });
    Ok(out)
}

fn starts_lower(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_lowercase())
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    arities: HashMap<String, usize>,
}

/// A parsed literal plus the first variable token in it, if any.
struct ParsedLiteral {
    literal: Literal,
    first_var: Option<Token>,
}

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        Parser {
            tokens,
            pos: 0,
            arities: HashMap::new(),
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek2(&self) -> &Tok {
        &self.tokens[(self.pos + 1).min(self.tokens.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(token: &Token, message: impl Into<String>) -> ParseError {
        ParseError {
            line: token.line,
            column: token.column,
            message: message.into(),
            token: token.text.clone(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(Self::error_at(self.peek(), format!("expected {what}")))
        }
    }

    fn theory(&mut self) -> Result<SourceTheory, ParseError> {
        let mut theory = SourceTheory::default();
        while self.peek().tok != Tok::Eof {
            self.statement(&mut theory)?;
        }
        Ok(theory)
    }

    fn statement(&mut self, theory: &mut SourceTheory) -> Result<(), ParseError> {
        let default_label = || format!("_r{}", theory.rules.len() + 1);
        match (&self.peek().tok, self.peek2()) {
            (Tok::Arrow(_), _) => {
                let rule = self.rule_rest(default_label(), Vec::new())?;
                theory.rules.push(rule);
            }
            (Tok::Ident(label), Tok::Colon) => {
                let label = label.clone();
                self.next();
                self.next();
                let body = if matches!(self.peek().tok, Tok::Arrow(_)) {
                    Vec::new()
                } else {
                    self.body()?
                };
                theory.rules.push(self.rule_rest(label, body)?);
            }
            (Tok::Ident(hi), Tok::Gt) => {
                let hi = hi.clone();
                self.next();
                self.next();
                let lo = self.next();
                let Tok::Ident(lo) = lo.tok else {
                    return Err(Self::error_at(&lo, "expected a rule label after `>`"));
                };
                self.expect(Tok::Dot, "`.` after superiority statement")?;
                theory.superiority.push((hi, lo));
            }
            _ => {
                let body = self.body()?;
                if body.len() == 1 && self.peek().tok == Tok::Dot {
                    self.next();
                    let parsed = body.into_iter().next().expect("one literal");
                    if let Some(v) = parsed.first_var {
                        return Err(Self::error_at(&v, "facts must not contain variables"));
                    }
                    theory.facts.push(parsed.literal);
                } else if matches!(self.peek().tok, Tok::Arrow(_)) {
                    let rule = self.rule_rest(default_label(), body)?;
                    theory.rules.push(rule);
                } else {
                    let what = if body.len() == 1 { "`.` or a rule arrow" } else { "a rule arrow" };
                    return Err(Self::error_at(self.peek(), format!("expected {what}")));
                }
            }
        }
        Ok(())
    }

    fn rule_rest(&mut self, label: String, body: Vec<ParsedLiteral>) -> Result<Rule, ParseError> {
        let arrow = self.next();
        let Tok::Arrow(kind) = arrow.tok else {
            return Err(Self::error_at(&arrow, "expected `->`, `=>` or `~>`"));
        };
        let head = self.literal()?;
        self.expect(Tok::Dot, "`.` at end of rule")?;
        Ok(Rule::new(
            label,
            kind,
            body.into_iter().map(|p| p.literal).collect(),
            head.literal,
        ))
    }

    fn body(&mut self) -> Result<Vec<ParsedLiteral>, ParseError> {
        let mut lits = vec![self.literal()?];
        while self.peek().tok == Tok::Comma {
            self.next();
            lits.push(self.literal()?);
        }
        Ok(lits)
    }

    fn literal(&mut self) -> Result<ParsedLiteral, ParseError> {
        let negated = if self.peek().tok == Tok::Tilde {
            self.next();
            true
        } else {
            false
        };
        let pred_tok = self.next();
        let predicate = match &pred_tok.tok {
            Tok::Ident(name) if starts_lower(name) => name.clone(),
            Tok::Ident(_) => {
                return Err(Self::error_at(
                    &pred_tok,
                    "predicate names must start with a lowercase letter",
                ))
            }
            _ => return Err(Self::error_at(&pred_tok, "expected a literal")),
        };
        let mut args = Vec::new();
        let mut first_var = None;
        if self.peek().tok == Tok::LParen {
            self.next();
            loop {
                let t = self.next();
                match &t.tok {
                    Tok::Ident(name) if starts_lower(name) => args.push(Term::Const(name.clone())),
                    Tok::Ident(name) if !name.starts_with(|c: char| c.is_ascii_digit()) => {
                        args.push(Term::Var(name.clone()));
                        first_var.get_or_insert(t.clone());
                    }
                    _ => return Err(Self::error_at(&t, "expected a constant or variable")),
                }
                let sep = self.next();
                match sep.tok {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    _ => return Err(Self::error_at(&sep, "expected `,` or `)`")),
                }
            }
        }
        match self.arities.get(&predicate) {
            Some(&a) if a != args.len() => {
                return Err(Self::error_at(
                    &pred_tok,
                    format!(
                        "predicate `{predicate}` used with arity {} but earlier with arity {a}",
                        args.len()
                    ),
                ))
            }
            Some(_) => {}
            None => {
                self.arities.insert(predicate.clone(), args.len());
            }
        }
        let atom = Atom::new(predicate, args);
        Ok(ParsedLiteral {
            literal: Literal { atom, negated },
            first_var,
        })
    }
}

/// Parses a theory document.
pub fn parse_theory(text: &str) -> Result<SourceTheory, ParseError> {
    Parser::new(tokenize(text, 1, 1)?).theory()
}

/// Parses a single ground literal such as `~flies(tweety)`.
pub fn parse_literal(text: &str) -> Result<Literal, ParseError> {
    parse_literal_at(text, 1, 1)
}

fn parse_literal_at(text: &str, line: usize, column: usize) -> Result<Literal, ParseError> {
    let mut p = Parser::new(tokenize(text, line, column)?);
    let parsed = p.literal()?;
    if let Some(v) = parsed.first_var {
        return Err(Parser::error_at(&v, "conclusions must be ground"));
    }
    if p.peek().tok != Tok::Eof {
        return Err(Parser::error_at(p.peek(), "unexpected input after literal"));
    }
    Ok(parsed.literal)
}

/// Parses `TAG literal`, e.g. `+d flies(tweety)` or `-D ~flies(tweety)`.
pub fn parse_conclusion(text: &str) -> Result<TaggedConclusion, ParseError> {
    let trimmed = text.trim_start();
    let lead = text[..text.len() - trimmed.len()].chars().count();
    let tag_text: String = trimmed.chars().take_while(|c| !c.is_whitespace()).collect();
    let tag: Tag = tag_text.parse().map_err(|e: crate::conclusion::UnknownTag| ParseError {
        line: 1,
        column: lead + 1,
        message: e.to_string(),
        token: if tag_text.is_empty() { "end of input".into() } else { tag_text.clone() },
    })?;
    let rest = &trimmed[tag_text.len()..];
    let column = lead + tag_text.chars().count() + 1;
    if rest.trim().is_empty() {
        return Err(ParseError {
            line: 1,
            column: column - 1,
            message: "expected a literal after the tag".into(),
            token: tag_text,
        });
    }
    let literal = parse_literal_at(rest, 1, column)?;
    Ok(TaggedConclusion::new(tag, literal))
}

/// Canonical text: facts, then rules, then superiority, one statement per line.
pub fn render_theory(theory: &SourceTheory) -> String {
    let mut out = String::new();
    for f in &theory.facts {
        out.push_str(&format!("{f}.\n"));
    }
    for r in &theory.rules {
        out.push_str(&format!("{r}\n"));
    }
    for (hi, lo) in &theory.superiority {
        out.push_str(&format!("{hi} > {lo}.\n"));
    }
    out
}

/// Display adaptor that renders a theory in canonical form.
pub struct Rendered<'a>(pub &'a SourceTheory);

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_theory(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BIRD: &str = include_str!("../tests/fixtures/bird.dl");

    #[test]
    fn bird_has_expected_shape() {
        let t = parse_theory(BIRD).unwrap();
        assert_eq!(t.facts.len(), 2);
        assert_eq!(t.rules.len(), 5);
        assert_eq!(t.superiority, vec![("r4".to_string(), "r2".to_string())]);
        let kinds: Vec<RuleKind> = t.rules.iter().map(|r| r.kind).collect();
        assert_eq!(
            kinds,
            vec![
                RuleKind::Strict,
                RuleKind::Defeasible,
                RuleKind::Defeater,
                RuleKind::Defeasible,
                RuleKind::Defeasible
            ]
        );
        assert!(t.rules[4].body.is_empty());
        assert!(t.rules[2].head.negated);
    }

    #[test]
    fn empty_input_is_empty_theory() {
        assert!(parse_theory("").unwrap().is_empty());
        assert!(parse_theory("  % just a comment\n").unwrap().is_empty());
        assert_eq!(render_theory(&SourceTheory::default()), "");
    }

    #[test]
    fn arity_clash_is_located() {
        let err = parse_theory("r: p(X) -> q(X,X).\nq(a).").unwrap_err();
        assert_eq!((err.line, err.column), (2, 1));
        assert_eq!(err.token, "q");
        assert!(err.message.contains("arity"));
    }

    #[test]
    fn fact_with_variable_rejected() {
        let err = parse_theory("p(a).\np(X).").unwrap_err();
        assert_eq!((err.line, err.column, err.token.as_str()), (2, 3, "X"));
    }

    #[test]
    fn unlabelled_rules_get_generated_labels() {
        let t = parse_theory("a => b. named: b -> c. -> d.").unwrap();
        let labels: Vec<&str> = t.rules.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, vec!["_r1", "named", "_r3"]);
    }

    #[test]
    fn syntax_errors_are_located() {
        for (src, line, col) in [
            ("p(a", 1, 3),
            ("p(a) q.", 1, 6),
            ("r: p =>", 1, 6),
            ("p.\n  $", 2, 3),
            ("a > .", 1, 5),
            ("P.", 1, 1),
            ("p().", 1, 3),
        ] {
            let err = parse_theory(src).unwrap_err();
            assert_eq!((err.line, err.column), (line, col), "{src:?}: {err}");
        }
    }

    #[test]
    fn conclusions() {
        let c = parse_conclusion("+d flies(tweety)").unwrap();
        assert_eq!(c.tag, Tag::PlusPartial);
        assert_eq!(c.literal.to_string(), "flies(tweety)");
        let c = parse_conclusion("-D ~flies(tweety)").unwrap();
        assert_eq!(c.tag, Tag::MinusDelta);
        assert!(c.literal.negated);
        let c = parse_conclusion("-d ~flies(ethel)").unwrap();
        assert_eq!(c.to_string(), "-d ~flies(ethel)");
        assert!(parse_conclusion("+x p").is_err());
        let err = parse_conclusion("+d p(X)").unwrap_err();
        assert_eq!((err.column, err.token.as_str()), (6, "X"));
        assert!(parse_conclusion("+d").is_err());
        assert!(parse_conclusion("+d p q").is_err());
    }

    #[test]
    fn render_round_trip_bird() {
        let t = parse_theory(BIRD).unwrap();
        let text = render_theory(&t);
        assert!(text.contains("r5: => heavy(ethel).\n"));
        assert!(text.contains("r3: heavy(X) ~> ~flies(X).\n"));
        assert_eq!(parse_theory(&text).unwrap(), t);
    }
}
