use std::fmt;

use crate::dsl::lexer::{tokenize, Span, Tok, Token};
use crate::numtheory::prime_power;

/// Largest accepted source text.
pub const MAX_SOURCE_BYTES: usize = 64 * 1024;
/// Nesting limit, keeps recursion bounded on hostile input.
const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone)]
pub struct RingExpr {
    pub kind: RingKind,
    pub span: Span,
}

/// Equality ignores spans.
impl PartialEq for RingExpr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RingKind {
    Integers,
    Zmod(u64),
    Gf(u64),
    Matrix(usize, Box<RingExpr>),
    Triangular(usize, Box<RingExpr>),
    FormalTriangular(Box<RingExpr>, Box<RingExpr>),
    Ks(Box<RingExpr>, i64),
    TrivExt(Box<RingExpr>),
    Poly(Box<RingExpr>, usize),
    Prod(Vec<RingExpr>),
    GroupRing(Box<RingExpr>, GroupExpr),
    Corner(Box<RingExpr>, u64),
    Quot(Box<RingExpr>, Vec<u64>),
}

#[derive(Debug, Clone)]
pub struct GroupExpr {
    pub kind: GroupKind,
    pub span: Span,
}

impl PartialEq for GroupExpr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroupKind {
    Cyclic(usize),
    Dihedral(usize),
    Quaternion,
    Symmetric(usize),
    Product(Box<GroupExpr>, Box<GroupExpr>),
    File(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Range,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Range => "range error",
        };
        write!(
            f,
            "{what} at line {}, column {} (offset {}): {}",
            self.line, self.column, self.offset, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, "; expected {}", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

const RING_HEADS: [&str; 13] = [
    "Z", "GF", "M", "T", "FT", "Ks", "TrivExt", "Poly", "Prod", "GR", "Corner", "Quot", "Z(",
];
const GROUP_HEADS: [&str; 6] = ["C", "D", "Q8", "S", "GxG", "@path"];

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, kind: ParseErrorKind, span: Span, expected: &[&str], message: String) -> ParseError {
        let (line, column) = line_col(self.src, span.start);
        ParseError {
            kind,
            offset: span.start,
            line,
            column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            message,
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        self.error(ParseErrorKind::Syntax, t.span, expected, format!("unexpected {}", t.tok))
    }

    fn expect(&mut self, tok: Tok, shown: &str) -> Result<Span, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&[shown]))
        }
    }

    fn int(&mut self) -> Result<(u64, Span), ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(s) => {
                self.bump();
                let v = s.parse::<u64>().map_err(|_| {
                    self.error(ParseErrorKind::Range, t.span, &[], format!("integer {s} is too large"))
                })?;
                Ok((v, t.span))
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn signed_int(&mut self) -> Result<(i64, Span), ParseError> {
        let neg = if self.peek().tok == Tok::Minus {
            Some(self.bump().span)
        } else {
            None
        };
        let (v, span) = match self.peek().tok {
            Tok::Int(_) => self.int()?,
            _ => return Err(self.unexpected(&["integer"])),
        };
        let full = neg.map_or(span, |s| s.to(span));
        let v = i64::try_from(v)
            .map_err(|_| self.error(ParseErrorKind::Range, full, &[], format!("integer {v} is too large")))?;
        Ok((if neg.is_some() { -v } else { v }, full))
    }

    fn ranged(&self, v: u64, span: Span, ok: bool, what: &str) -> Result<u64, ParseError> {
        if ok {
            Ok(v)
        } else {
            Err(self.error(ParseErrorKind::Range, span, &[], format!("{what}, got {v}")))
        }
    }

    fn element_ref(&mut self) -> Result<u64, ParseError> {
        self.expect(Tok::Hash, "'#'")?;
        Ok(self.int()?.0)
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let span = self.peek().span;
            return Err(self.error(ParseErrorKind::Range, span, &[], "expression nested too deeply".into()));
        }
        Ok(())
    }

    fn ring(&mut self) -> Result<RingExpr, ParseError> {
        self.enter()?;
        let head = self.peek().clone();
        let name = match &head.tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.unexpected(&RING_HEADS[..12])),
        };
        self.bump();
        if name == "Z" && self.peek().tok != Tok::LParen {
            self.depth -= 1;
            return Ok(RingExpr {
                kind: RingKind::Integers,
                span: head.span,
            });
        }
        if !RING_HEADS[..12].contains(&name.as_str()) {
            let span = head.span;
            return Err(self.error(
                ParseErrorKind::Syntax,
                span,
                &RING_HEADS[..12],
                format!("unknown ring constructor '{name}'"),
            ));
        }
        self.expect(Tok::LParen, "'('")?;
        let kind = match name.as_str() {
            "Z" => {
                let (n, s) = self.int()?;
                RingKind::Zmod(self.ranged(n, s, n >= 2, "Z(n) needs n >= 2")?)
            }
            "GF" => {
                let (q, s) = self.int()?;
                RingKind::Gf(self.ranged(q, s, prime_power(q).is_some(), "GF(q) needs a prime power")?)
            }
            "M" | "T" => {
                let (k, s) = self.int()?;
                let min = if name == "M" { 1 } else { 2 };
                let k = self.ranged(k, s, k >= min && k <= 16, &format!("{name}(k, R) needs {min} <= k <= 16"))?;
                self.expect(Tok::Comma, "','")?;
                let base = Box::new(self.ring()?);
                if name == "M" {
                    RingKind::Matrix(k as usize, base)
                } else {
                    RingKind::Triangular(k as usize, base)
                }
            }
            "FT" => {
                let a = self.ring()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.ring()?;
                RingKind::FormalTriangular(Box::new(a), Box::new(b))
            }
            "Ks" => {
                let base = self.ring()?;
                self.expect(Tok::Comma, "','")?;
                let (s, _) = self.signed_int()?;
                RingKind::Ks(Box::new(base), s)
            }
            "TrivExt" => RingKind::TrivExt(Box::new(self.ring()?)),
            "Poly" => {
                let base = self.ring()?;
                self.expect(Tok::Comma, "','")?;
                let (k, s) = self.int()?;
                let k = self.ranged(k, s, (1..=16).contains(&k), "Poly(R, k) needs 1 <= k <= 16")?;
                RingKind::Poly(Box::new(base), k as usize)
            }
            "Prod" => {
                let mut parts = vec![self.ring()?];
                while self.peek().tok == Tok::Comma {
                    self.bump();
                    parts.push(self.ring()?);
                }
                RingKind::Prod(parts)
            }
            "GR" => {
                let base = self.ring()?;
                self.expect(Tok::Comma, "','")?;
                let group = self.group()?;
                RingKind::GroupRing(Box::new(base), group)
            }
            "Corner" => {
                let base = self.ring()?;
                self.expect(Tok::Comma, "','")?;
                RingKind::Corner(Box::new(base), self.element_ref()?)
            }
            "Quot" => {
                let base = self.ring()?;
                let mut gens = Vec::new();
                self.expect(Tok::Comma, "','")?;
                gens.push(self.element_ref()?);
                while self.peek().tok == Tok::Comma {
                    self.bump();
                    gens.push(self.element_ref()?);
                }
                RingKind::Quot(Box::new(base), gens)
            }
            _ => unreachable!(),
        };
        let close = self.expect(Tok::RParen, if name == "Prod" || name == "Quot" { "',' or ')'" } else { "')'" })?;
        self.depth -= 1;
        Ok(RingExpr {
            kind,
            span: head.span.to(close),
        })
    }

    fn group(&mut self) -> Result<GroupExpr, ParseError> {
        self.enter()?;
        let head = self.peek().clone();
        let (kind, span) = match &head.tok {
            Tok::Path(p) => {
                self.bump();
                if p.is_empty() {
                    return Err(self.error(ParseErrorKind::Syntax, head.span, &["file path"], "empty group file path".into()));
                }
                (GroupKind::File(p.clone()), head.span)
            }
            Tok::Ident(s) if s == "Q8" => {
                self.bump();
                (GroupKind::Quaternion, head.span)
            }
            Tok::Ident(s) if ["C", "D", "S", "GxG"].contains(&s.as_str()) => {
                let name = s.clone();
                self.bump();
                self.expect(Tok::LParen, "'('")?;
                let kind = if name == "GxG" {
                    let a = self.group()?;
                    self.expect(Tok::Comma, "','")?;
                    let b = self.group()?;
                    GroupKind::Product(Box::new(a), Box::new(b))
                } else {
                    let (n, s) = self.int()?;
                    match name.as_str() {
                        "C" => GroupKind::Cyclic(self.ranged(n, s, (1..=4096).contains(&n), "C(n) needs 1 <= n <= 4096")? as usize),
                        "D" => GroupKind::Dihedral(self.ranged(n, s, (1..=2048).contains(&n), "D(n) needs 1 <= n <= 2048")? as usize),
                        _ => GroupKind::Symmetric(self.ranged(n, s, (1..=6).contains(&n), "S(n) needs 1 <= n <= 6")? as usize),
                    }
                };
                let close = self.expect(Tok::RParen, "')'")?;
                (kind, head.span.to(close))
            }
            _ => return Err(self.unexpected(&GROUP_HEADS)),
        };
        self.depth -= 1;
        Ok(GroupExpr { kind, span })
    }
}

pub fn parse_ring_expr(src: &str) -> Result<RingExpr, ParseError> {
    if src.len() > MAX_SOURCE_BYTES {
        return Err(ParseError {
            kind: ParseErrorKind::Range,
            offset: MAX_SOURCE_BYTES,
            line: 1,
            column: 1,
            expected: Vec::new(),
            message: format!("input longer than {MAX_SOURCE_BYTES} bytes"),
        });
    }
    let mut p = Parser {
        src,
        tokens: tokenize(src),
        pos: 0,
        depth: 0,
    };
    let expr = p.ring()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(expr)
}

/// Parses a group expression on its own.
pub fn parse_group_expr(src: &str) -> Result<GroupExpr, ParseError> {
    let mut p = Parser {
        src,
        tokens: tokenize(src),
        pos: 0,
        depth: 0,
    };
    let g = p.group()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(g)
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RingKind::Integers => f.write_str("Z"),
            RingKind::Zmod(n) => write!(f, "Z({n})"),
            RingKind::Gf(q) => write!(f, "GF({q})"),
            RingKind::Matrix(k, r) => write!(f, "M({k},{r})"),
            RingKind::Triangular(k, r) => write!(f, "T({k},{r})"),
            RingKind::FormalTriangular(a, b) => write!(f, "FT({a},{b})"),
            RingKind::Ks(r, s) => write!(f, "Ks({r},{s})"),
            RingKind::TrivExt(r) => write!(f, "TrivExt({r})"),
            RingKind::Poly(r, k) => write!(f, "Poly({r},{k})"),
            RingKind::Prod(parts) => {
                let p: Vec<String> = parts.iter().map(|r| r.to_string()).collect();
                write!(f, "Prod({})", p.join(","))
            }
            RingKind::GroupRing(r, g) => write!(f, "GR({r},{g})"),
            RingKind::Corner(r, e) => write!(f, "Corner({r},#{e})"),
            RingKind::Quot(r, gens) => {
                write!(f, "Quot({r}")?;
                for g in gens {
                    write!(f, ",#{g}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GroupKind::Cyclic(n) => write!(f, "C({n})"),
            GroupKind::Dihedral(n) => write!(f, "D({n})"),
            GroupKind::Quaternion => f.write_str("Q8"),
            GroupKind::Symmetric(n) => write!(f, "S({n})"),
            GroupKind::Product(a, b) => write!(f, "GxG({a},{b})"),
            GroupKind::File(p) => write!(f, "@{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ok(s: &str) -> RingExpr {
        parse_ring_expr(s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    fn err(s: &str) -> ParseError {
        parse_ring_expr(s).expect_err(s)
    }

    #[test]
    fn spec_examples() {
        let e = ok("M(2, Z(2))");
        match &e.kind {
            RingKind::Matrix(2, base) => assert_eq!(base.kind, RingKind::Zmod(2)),
            k => panic!("{k:?}"),
        }
        assert_eq!(e.span, Span::new(0, 10));
        let e = ok("GR(Z(2), Q8)");
        assert!(matches!(e.kind, RingKind::GroupRing(_, GroupExpr { kind: GroupKind::Quaternion, .. })));
        let e = err("M(2 Z(2))");
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!(e.offset, 4);
        assert_eq!(e.expected, vec!["','"]);
        assert_eq!((e.line, e.column), (1, 5));
    }

    #[test]
    fn every_production_accepts() {
        for s in [
            "Z",
            "Z(12)",
            "GF(9)",
            "M(1,Z(5))",
            "T(3, Z(2))",
            "FT(Z(2),Z(4))",
            "Ks(Z(4),2)",
            "Ks(Z(4),-2)",
            "TrivExt(Z(4))",
            "Poly(Z(2),3)",
            "Prod(Z(2),Z(3),Z(5))",
            "Prod(Z(2))",
            "GR(Z(2),C(4))",
            "GR(Z(2),D(3))",
            "GR(Z(2),S(3))",
            "GR(Z(2),GxG(C(2),C(2)))",
            "GR(Z(2),@k4.json)",
            "Corner(M(2,Z(2)),#1)",
            "Quot(Z(12),#6)",
            "Quot(Z(12),#4,#6)",
            " \n M (\t2 ,Z( 2 ) ) ",
        ] {
            ok(s);
        }
    }

    #[test]
    fn every_production_rejects() {
        let cases: &[(&str, ParseErrorKind)] = &[
            ("Z(", ParseErrorKind::Syntax),
            ("Z(1)", ParseErrorKind::Range),
            ("GF(6)", ParseErrorKind::Range),
            ("M(0,Z(2))", ParseErrorKind::Range),
            ("M(2)", ParseErrorKind::Syntax),
            ("T(1,Z(2))", ParseErrorKind::Range),
            ("FT(Z(2))", ParseErrorKind::Syntax),
            ("Ks(Z(4))", ParseErrorKind::Syntax),
            ("Ks(Z(4),x)", ParseErrorKind::Syntax),
            ("TrivExt()", ParseErrorKind::Syntax),
            ("Poly(Z(2),0)", ParseErrorKind::Range),
            ("Prod()", ParseErrorKind::Syntax),
            ("Prod(Z(2),)", ParseErrorKind::Syntax),
            ("GR(Z(2),C(0))", ParseErrorKind::Range),
            ("GR(Z(2),D(0))", ParseErrorKind::Range),
            ("GR(Z(2),S(7))", ParseErrorKind::Range),
            ("GR(Z(2),Q(8))", ParseErrorKind::Syntax),
            ("GR(Z(2),GxG(C(2)))", ParseErrorKind::Syntax),
            ("GR(Z(2),@)", ParseErrorKind::Syntax),
            ("Corner(M(2,Z(2)),1)", ParseErrorKind::Syntax),
            ("Quot(Z(12))", ParseErrorKind::Syntax),
            ("Quot(Z(12),#6,)", ParseErrorKind::Syntax),
            ("Foo(2)", ParseErrorKind::Syntax),
            ("Z(2) Z(3)", ParseErrorKind::Syntax),
            ("Z(99999999999999999999999)", ParseErrorKind::Range),
            ("", ParseErrorKind::Syntax),
            ("z(2)", ParseErrorKind::Syntax),
        ];
        for (s, kind) in cases {
            assert_eq!(err(s).kind, *kind, "{s}");
        }
    }

    #[test]
    fn line_and_column_on_later_lines() {
        let e = err("Prod(Z(2),\n  Z(3)\n  Q)");
        assert_eq!((e.line, e.column), (3, 3));
    }

    #[test]
    fn depth_and_size_limits() {
        let deep = "M(1,".repeat(100) + "Z(2)" + &")".repeat(100);
        assert_eq!(err(&deep).kind, ParseErrorKind::Range);
        let long = " ".repeat(MAX_SOURCE_BYTES + 1);
        assert_eq!(err(&long).kind, ParseErrorKind::Range);
    }

    #[test]
    fn printer_is_canonical() {
        assert_eq!(ok(" M( 2 , Z( 2 ) ) ").to_string(), "M(2,Z(2))");
        assert_eq!(ok("Quot(Z(12), #4, #6)").to_string(), "Quot(Z(12),#4,#6)");
        assert_eq!(ok("GR(Z(2),GxG(C(2), Q8))").to_string(), "GR(Z(2),GxG(C(2),Q8))");
    }

    fn group_strategy() -> impl Strategy<Value = GroupExpr> {
        let leaf = prop_oneof![
            (1usize..9).prop_map(GroupKind::Cyclic),
            (1usize..5).prop_map(GroupKind::Dihedral),
            Just(GroupKind::Quaternion),
            (1usize..5).prop_map(GroupKind::Symmetric),
            "[a-z]{1,6}\\.json".prop_map(GroupKind::File),
        ]
        .prop_map(|kind| GroupExpr { kind, span: Span::default() });
        leaf.prop_recursive(2, 4, 2, |inner| {
            (inner.clone(), inner).prop_map(|(a, b)| GroupExpr {
                kind: GroupKind::Product(Box::new(a), Box::new(b)),
                span: Span::default(),
            })
        })
    }

    fn ring_strategy() -> impl Strategy<Value = RingExpr> {
        let leaf = prop_oneof![
            Just(RingKind::Integers),
            (2u64..50).prop_map(RingKind::Zmod),
            prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27]).prop_map(RingKind::Gf),
        ]
        .prop_map(|kind| RingExpr { kind, span: Span::default() });
        leaf.prop_recursive(4, 24, 3, |inner| {
            let b = |e: RingExpr| Box::new(e);
            prop_oneof![
                (1usize..4, inner.clone()).prop_map(move |(k, r)| RingKind::Matrix(k, b(r))),
                (2usize..4, inner.clone()).prop_map(move |(k, r)| RingKind::Triangular(k, b(r))),
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| RingKind::FormalTriangular(b(x), b(y))),
                (inner.clone(), -5i64..5).prop_map(move |(r, s)| RingKind::Ks(b(r), s)),
                inner.clone().prop_map(move |r| RingKind::TrivExt(b(r))),
                (inner.clone(), 1usize..5).prop_map(move |(r, k)| RingKind::Poly(b(r), k)),
                prop::collection::vec(inner.clone(), 1..4).prop_map(RingKind::Prod),
                (inner.clone(), group_strategy()).prop_map(move |(r, g)| RingKind::GroupRing(b(r), g)),
                (inner.clone(), 0u64..100).prop_map(move |(r, e)| RingKind::Corner(b(r), e)),
                (inner.clone(), prop::collection::vec(0u64..100, 1..4)).prop_map(move |(r, g)| RingKind::Quot(b(r), g)),
            ]
            .prop_map(|kind| RingExpr { kind, span: Span::default() })
        })
    }

    /// Re-spaces canonical text at token boundaries.
    fn respace(text: &str, seed: u64) -> String {
        let mut out = String::new();
        let mut s = seed;
        for c in text.chars() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            if matches!(c, '(' | ')' | ',') {
                match s >> 62 {
                    0 => out.push(' '),
                    1 => out.push('\n'),
                    _ => {}
                }
            }
            out.push(c);
        }
        out
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in ring_strategy(), seed in any::<u64>()) {
            let text = respace(&e.to_string(), seed);
            let parsed = parse_ring_expr(&text).unwrap();
            prop_assert_eq!(&parsed, &e);
            let reparsed = parse_ring_expr(&parsed.to_string()).unwrap();
            prop_assert_eq!(&reparsed, &parsed);
            prop_assert_eq!(parsed.span, Span::new(text.find(|c: char| !c.is_whitespace()).unwrap(), text.trim_end().len()));
        }
    }
}
