//! Text format for presentations.
//!
//! ```text
//! field Q                      # or F5 / F 5
//! quiver {
//!   vertex x, y;
//!   arrow a: x -> y;
//!   arrow b: y -> x;
//! }
//! relations {
//!   a b;
//!   r2: b a - 2 b a;           # optional label
//! }
//! ```
//!
//! A term is an optional scalar (`3`, `-1/2`) followed by one or more arrow
//! names composed left to right. Unlabelled relations are named `r1`, `r2`,
//! ... by position. `#` starts a comment.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::quiver::{FreeElement, Presentation, Quiver};

const KEYWORDS: [&str; 5] = ["field", "quiver", "vertex", "arrow", "relations"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Slash,
    Plus,
    Minus,
    LBrace,
    RBrace,
    Semi,
    Comma,
    Colon,
    Arrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::Slash => "`/`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            Tok::Int(s)
        } else {
            bump(&mut chars);
            match c {
                '/' => Tok::Slash,
                '+' => Tok::Plus,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ';' => Tok::Semi,
                ',' => Tok::Comma,
                ':' => Tok::Colon,
                '-' => {
                    if chars.peek() == Some(&'>') {
                        bump(&mut chars);
                        Tok::Arrow
                    } else {
                        Tok::Minus
                    }
                }
                other => {
                    return Err(Error::Syntax { line: l, column: col, message: format!("unexpected character `{other}`") })
                }
            }
        };
        out.push(Spanned { tok, line: l, column: col });
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = self.peek();
        Err(Error::Syntax { line: t.line, column: t.column, message: message.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.peek().tok == tok {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected {}, found {}", tok.describe(), self.peek().tok.describe()))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match &self.peek().tok {
            Tok::Ident(s) if s == kw => {
                self.next();
                Ok(())
            }
            other => self.err(format!("expected `{kw}`, found {}", other.describe())),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn name(&mut self) -> Result<(String, usize, usize)> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok((s, t.line, t.column))
            }
            Tok::Ident(s) => self.err(format!("keyword `{s}` cannot be used as a name")),
            other => self.err(format!("expected a name, found {}", other.describe())),
        }
    }

    fn field(&mut self) -> Result<FieldSpec> {
        self.keyword("field")?;
        let t = self.next();
        let bad = |msg: String| Error::Syntax { line: t.line, column: t.column, message: msg };
        match &t.tok {
            Tok::Ident(s) if s == "Q" => Ok(FieldSpec::Rationals),
            Tok::Ident(s) if s == "F" => {
                let n = self.next();
                match n.tok {
                    Tok::Int(p) => FieldSpec::parse_label(&format!("F{p}")).map_err(|e| bad(e.to_string())),
                    other => Err(bad(format!("expected a prime after `F`, found {}", other.describe()))),
                }
            }
            Tok::Ident(s) if s.starts_with('F') && s[1..].chars().all(|c| c.is_ascii_digit()) && s.len() > 1 => {
                FieldSpec::parse_label(s).map_err(|e| bad(e.to_string()))
            }
            other => Err(bad(format!("expected `Q` or `F<p>`, found {}", other.describe()))),
        }
    }

    fn scalar(&mut self, field: FieldSpec) -> Result<Option<Scalar>> {
        let start = self.peek().clone();
        let Tok::Int(num) = &start.tok else { return Ok(None) };
        let num = num.clone();
        self.next();
        let text = if self.peek().tok == Tok::Slash {
            self.next();
            match self.next().tok {
                Tok::Int(den) => format!("{num}/{den}"),
                other => return self.err(format!("expected a denominator, found {}", other.describe())),
            }
        } else {
            num
        };
        field
            .parse_literal(&text)
            .map(Some)
            .map_err(|e| Error::Syntax { line: start.line, column: start.column, message: e.to_string() })
    }

    fn relation(&mut self, field: FieldSpec, quiver: &Quiver) -> Result<FreeElement> {
        let mut element = FreeElement::zero();
        let mut negative = false;
        match self.peek().tok {
            Tok::Minus => {
                negative = true;
                self.next();
            }
            Tok::Plus => {
                self.next();
            }
            _ => {}
        }
        loop {
            let term_start = self.peek().clone();
            let coeff = self.scalar(field)?.unwrap_or_else(|| field.one());
            let mut arrows = Vec::new();
            while let Tok::Ident(_) = &self.peek().tok {
                let (name, line, column) = self.name()?;
                let id = quiver.arrow_id(&name).ok_or(Error::UnknownIdentifier { name, line, column })?;
                arrows.push(id);
            }
            if arrows.is_empty() {
                return self.err(format!("expected an arrow name, found {}", self.peek().tok.describe()));
            }
            let path = quiver.path(&arrows).ok_or_else(|| {
                Error::Validation(format!(
                    "line {}, column {}: arrows do not compose",
                    term_start.line, term_start.column
                ))
            })?;
            element.add_term(path, if negative { -coeff } else { coeff });
            match self.peek().tok {
                Tok::Plus => negative = false,
                Tok::Minus => negative = true,
                _ => break,
            }
            self.next();
        }
        Ok(element)
    }

    fn presentation(&mut self, over: Option<FieldSpec>) -> Result<Presentation> {
        let declared = self.field()?;
        let field = over.unwrap_or(declared);
        self.keyword("quiver")?;
        self.expect(Tok::LBrace)?;
        let mut vertices = Vec::new();
        let mut arrows = Vec::new();
        let mut seen = std::collections::HashSet::new();
        loop {
            if self.is_keyword("vertex") {
                self.next();
                loop {
                    let (v, line, column) = self.name()?;
                    if !seen.insert(v.clone()) {
                        return Err(Error::Syntax { line, column, message: format!("`{v}` declared twice") });
                    }
                    vertices.push(v);
                    if self.peek().tok == Tok::Comma {
                        self.next();
                    } else {
                        break;
                    }
                }
                self.expect(Tok::Semi)?;
            } else if self.is_keyword("arrow") {
                self.next();
                let (a, line, column) = self.name()?;
                if !seen.insert(a.clone()) {
                    return Err(Error::Syntax { line, column, message: format!("`{a}` declared twice") });
                }
                self.expect(Tok::Colon)?;
                let (s, sl, sc) = self.name()?;
                self.expect(Tok::Arrow)?;
                let (t, tl, tc) = self.name()?;
                for (v, l, c) in [(&s, sl, sc), (&t, tl, tc)] {
                    if !vertices.contains(v) {
                        return Err(Error::UnknownIdentifier { name: v.clone(), line: l, column: c });
                    }
                }
                self.expect(Tok::Semi)?;
                arrows.push((a, s, t));
            } else {
                break;
            }
        }
        self.expect(Tok::RBrace)?;
        if vertices.is_empty() {
            return Err(Error::Validation("quiver has no vertices".into()));
        }
        let quiver = Quiver::new(vertices, arrows)?;
        let mut relations = Vec::new();
        let mut labels: Vec<Option<String>> = Vec::new();
        if self.is_keyword("relations") {
            self.next();
            self.expect(Tok::LBrace)?;
            while self.peek().tok != Tok::RBrace {
                let label = match (self.peek_at(0), self.peek_at(1)) {
                    (Tok::Ident(_), Tok::Colon) => {
                        let (l, _, _) = self.name()?;
                        self.next();
                        Some(l)
                    }
                    _ => None,
                };
                relations.push(self.relation(field, &quiver)?);
                labels.push(label);
                self.expect(Tok::Semi)?;
            }
            self.expect(Tok::RBrace)?;
        }
        if self.peek().tok != Tok::Eof {
            return self.err(format!("unexpected {}", self.peek().tok.describe()));
        }
        let labels: Vec<String> =
            labels.into_iter().enumerate().map(|(i, l)| l.unwrap_or_else(|| format!("r{}", i + 1))).collect();
        let mut uniq = std::collections::HashSet::new();
        for l in &labels {
            if !uniq.insert(l) {
                return Err(Error::Validation(format!("relation label `{l}` used twice")));
            }
        }
        Presentation::new(field, quiver, relations, labels)
    }
}

/// Parses and validates a presentation.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    parse_presentation_over(text, None)
}

/// As [`parse_presentation`], but reading coefficients in `field` instead
/// of the declared field when one is given.
pub fn parse_presentation_over(text: &str, field: Option<FieldSpec>) -> Result<Presentation> {
    let mut parser = Parser { toks: lex(text)?, pos: 0 };
    parser.presentation(field)
}

/// Canonical text of a presentation; [`parse_presentation`] inverts it.
pub fn print_presentation(pres: &Presentation) -> String {
    let q = &pres.quiver;
    let mut out = format!("field {}\nquiver {{\n", pres.field.label());
    out.push_str(&format!("  vertex {};\n", q.vertices().join(", ")));
    for a in q.arrows() {
        out.push_str(&format!("  arrow {}: {} -> {};\n", a.name, q.vertex_name(a.source), q.vertex_name(a.target)));
    }
    out.push_str("}\nrelations {\n");
    for (rel, label) in pres.relations.iter().zip(&pres.labels) {
        out.push_str(&format!("  {label}: {};\n", rel.element().format(q)));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const DUAL: &str = "field Q\nquiver {\n  vertex v;\n  arrow a: v -> v;\n}\nrelations {\n  a a;\n}\n";

    #[test]
    fn dual_numbers() {
        let p = parse_presentation(DUAL).unwrap();
        assert_eq!(p.quiver.vertex_count(), 1);
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.labels, vec!["r1".to_string()]);
    }

    #[test]
    fn scalars_and_labels() {
        let text = "field F 7 # seven\nquiver { vertex x, y; arrow a: x -> y; arrow b: y -> x; arrow c: x -> x; }\n\
                    relations { comm: a b - 3/2 c c; -c c c; }";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.field, FieldSpec::Prime(7));
        assert_eq!(p.labels, vec!["comm".to_string(), "r2".to_string()]);
        let again = parse_presentation(&print_presentation(&p)).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn no_arrows_no_relations() {
        let p = parse_presentation("field Q quiver { vertex pt; }").unwrap();
        assert_eq!(p.quiver.arrow_count(), 0);
        assert!(p.relations.is_empty());
    }

    #[test]
    fn non_uniform_relation() {
        let text = "field Q quiver { vertex x, y; arrow a: x -> y; arrow b: y -> x; } relations { a b - b a; }";
        assert!(matches!(parse_presentation(text), Err(Error::NonUniform(_))));
    }

    #[test]
    fn short_relation() {
        let text = "field Q quiver { vertex x; arrow a: x -> x; } relations { a - a a; }";
        assert!(matches!(parse_presentation(text), Err(Error::RelationTooShort(_))));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_presentation("field Q\nquiver {\n  vertex v;\n  arrow a v -> v;\n}") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (4, 11)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_presentation("field Q quiver { vertex v; arrow a: v -> v; }\nrelations { a z; }") {
            Err(Error::UnknownIdentifier { name, line, .. }) => {
                assert_eq!(name, "z");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_presentation("field F4 quiver { vertex v; }"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn field_override() {
        let text = "field Q quiver { vertex v; arrow x: v -> v; } relations { 3 x x; }";
        let p = parse_presentation_over(text, Some(FieldSpec::Prime(5))).unwrap();
        assert_eq!(p.field, FieldSpec::Prime(5));
        assert!(matches!(parse_presentation_over(text, Some(FieldSpec::Prime(3))), Err(Error::Validation(_))));
    }

    #[test]
    fn arrows_must_compose() {
        let text = "field Q quiver { vertex x, y; arrow a: x -> y; } relations { a a; }";
        assert!(matches!(parse_presentation(text), Err(Error::Validation(_))));
    }
}
