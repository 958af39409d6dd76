use super::ast::*;
use super::lexer::{lex, Line, Tok, Token};
use super::ParseError;

const KEYWORDS: &[&str] = &[
    "def", "main", "bit", "if", "new", "measure", "return", "qrand", "qrand_bit", "qneg",
    "qnegate", "rand_bit", "not", "and", "or", "xor",
];

/// Parse a `.qppl` source text into a desugared [`Program`].
pub fn parse(src: &str) -> Result<Program, ParseError> {
    let lines = lex(src)?;
    let mut parser = Parser { lines, pos: 0 };
    parser.program()
}

struct Parser {
    lines: Vec<Line>,
    pos: usize,
}

/// Cursor over the tokens of a single line.
struct Cursor<'a> {
    line: &'a Line,
    i: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: &'a Line) -> Self {
        Cursor { line, i: 0 }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.line.tokens.get(self.i)
    }

    fn here(&self) -> Span {
        self.peek().map(|t| t.span).unwrap_or(self.line.end)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.line.tokens.get(self.i);
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn at(&self, tok: &Tok) -> bool {
        self.peek().map(|t| &t.tok == tok).unwrap_or(false)
    }

    fn at_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Ident(s), .. }) if s == word)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.at(tok) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(
                t.span,
                format!("expected {wanted}, found {}", t.tok.describe()),
            ),
            None => ParseError::new(self.line.end, format!("expected {wanted}, found end of line")),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn expect_keyword(&mut self, word: &str) -> Result<(), ParseError> {
        if self.at_ident(word) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{word}`")))
        }
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s),
                span,
            }) => {
                if KEYWORDS.contains(&s.as_str()) {
                    return Err(ParseError::new(
                        *span,
                        format!("`{s}` is a keyword and cannot be used as a variable name"),
                    ));
                }
                self.i += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected("a variable name")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(ParseError::new(
                t.span,
                format!("unexpected {} at end of statement", t.tok.describe()),
            )),
        }
    }

    /// `a, b, c` or `(a, b, c)`; may be empty only when parenthesised or
    /// when `allow_empty` is set.
    fn name_list(&mut self, allow_empty: bool) -> Result<Vec<String>, ParseError> {
        let mut names = Vec::new();
        if self.eat(&Tok::LParen) {
            if !self.eat(&Tok::RParen) {
                loop {
                    names.push(self.name()?);
                    if self.eat(&Tok::RParen) {
                        break;
                    }
                    self.expect(Tok::Comma)?;
                }
            }
            return Ok(names);
        }
        if self.peek().is_none() || self.at(&Tok::Walrus) {
            if allow_empty {
                return Ok(names);
            }
            return Err(self.unexpected("a variable name"));
        }
        loop {
            names.push(self.name()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(names)
    }

    // Expression grammar, loosest first:
    //   cmp := or (("==" | "!=" | "^") or)*
    //   or  := and ("or" and)*
    //   and := not ("and" not)*
    //   not := "not" not | atom
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.or_expr()?;
        loop {
            if self.eat(&Tok::EqEq) {
                lhs = Expr::equiv(lhs, self.or_expr()?);
            } else if self.eat(&Tok::NotEq) || self.eat(&Tok::Xor) {
                lhs = Expr::xor(lhs, self.or_expr()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn or_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.and_expr()?;
        while self.eat(&Tok::Or) {
            lhs = Expr::or(lhs, self.and_expr()?);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.not_expr()?;
        while self.eat(&Tok::And) {
            lhs = Expr::and(lhs, self.not_expr()?);
        }
        Ok(lhs)
    }

    fn not_expr(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Not) {
            return Ok(Expr::not(self.not_expr()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().map(|t| &t.tok) {
            Some(Tok::Bit(b)) => {
                let b = *b;
                self.i += 1;
                Ok(Expr::Const(b))
            }
            Some(Tok::LParen) => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(_)) => Ok(Expr::Var(self.name()?)),
            _ => Err(self.unexpected("an expression")),
        }
    }
}

enum TopItem {
    Stmts(Vec<Stmt>),
    Return(Return),
}

impl Parser {
    fn program(&mut self) -> Result<Program, ParseError> {
        let Some(header) = self.lines.first() else {
            return Err(ParseError::new(Span::new(1, 1), "empty program: expected `def main(...):`"));
        };
        let header_indent = header.indent;
        let mut c = Cursor::new(header);
        let span = c.here();
        c.expect_keyword("def")?;
        c.expect_keyword("main")?;
        c.expect(Tok::LParen)?;
        let mut inputs = Vec::new();
        if !c.eat(&Tok::RParen) {
            loop {
                inputs.push(c.name()?);
                if c.eat(&Tok::Colon) {
                    c.expect_keyword("bit")?;
                }
                if c.eat(&Tok::RParen) {
                    break;
                }
                c.expect(Tok::Comma)?;
            }
        }
        c.expect(Tok::Colon)?;
        c.finish()?;
        self.pos = 1;

        let Some(first) = self.lines.get(1) else {
            return Err(ParseError::new(
                Line::after(header),
                "expected an indented program body",
            ));
        };
        if first.indent <= header_indent {
            return Err(ParseError::new(
                Span::new(first.number, first.indent + 1),
                "expected an indented program body",
            ));
        }
        let indent = first.indent;

        let mut body = Vec::new();
        let mut returns = None;
        while let Some(line) = self.lines.get(self.pos) {
            if line.indent != indent {
                let at = Span::new(line.number, line.indent + 1);
                return Err(if line.indent > indent {
                    ParseError::new(at, "unexpected indent")
                } else if line.indent > header_indent {
                    ParseError::new(at, "inconsistent indentation: dedent does not match any enclosing block")
                } else {
                    ParseError::new(at, "unexpected content after the program body")
                });
            }
            if let Some(ret) = &returns {
                let ret: &Return = ret;
                return Err(ParseError::new(
                    Span::new(line.number, line.indent + 1),
                    format!("`return` (line {}) must be the final statement", ret.span.line),
                ));
            }
            match self.top_statement(indent)? {
                TopItem::Stmts(s) => body.extend(s),
                TopItem::Return(r) => returns = Some(r),
            }
        }

        Ok(Program {
            inputs,
            body,
            returns,
            span,
        })
    }

    fn top_statement(&mut self, indent: usize) -> Result<TopItem, ParseError> {
        let line = self.lines[self.pos].clone();
        let mut c = Cursor::new(&line);
        let span = c.here();
        if c.at_ident("new") {
            c.next();
            let names = c.name_list(false)?;
            let mut out = vec![Stmt::New {
                names: names.clone(),
                span,
            }];
            if c.eat(&Tok::Walrus) {
                if names.len() != 1 {
                    return Err(ParseError::new(
                        span,
                        "`new ... := E` initializes exactly one variable",
                    ));
                }
                let rhs = c.expr()?;
                out.push(Stmt::Comp(Comp::at(
                    CompKind::XorAssign {
                        target: names[0].clone(),
                        rhs,
                    },
                    span,
                )));
            }
            c.finish()?;
            self.pos += 1;
            return Ok(TopItem::Stmts(out));
        }
        if c.at_ident("measure") {
            c.next();
            let names = c.name_list(false)?;
            c.finish()?;
            self.pos += 1;
            return Ok(TopItem::Stmts(vec![Stmt::Measure { names, span }]));
        }
        if c.at_ident("return") {
            c.next();
            let names = c.name_list(true)?;
            c.finish()?;
            self.pos += 1;
            return Ok(TopItem::Return(Return { names, span }));
        }
        let comp = self.comp_statement(indent)?;
        Ok(TopItem::Stmts(vec![Stmt::Comp(comp)]))
    }

    fn comp_statement(&mut self, indent: usize) -> Result<Comp, ParseError> {
        let line = self.lines[self.pos].clone();
        let mut c = Cursor::new(&line);
        let span = c.here();

        for word in ["new", "measure", "return"] {
            if c.at_ident(word) {
                let why = match word {
                    "measure" => "conditional measurement is not permitted",
                    "new" => "conditional allocation is not permitted",
                    _ => "`return` may only end the program",
                };
                return Err(ParseError::new(
                    span,
                    format!("`{word}` is only allowed at the top level of `main`: {why}"),
                ));
            }
        }

        if c.at_ident("if") {
            c.next();
            let cond = c.expr()?;
            c.expect(Tok::Colon)?;
            c.finish()?;
            self.pos += 1;
            let body = self.block(indent, &line)?;
            return Ok(Comp::at(CompKind::If { cond, body }, span));
        }

        let kind = if c.at_ident("qrand") || c.at_ident("qrand_bit") {
            c.next();
            c.expect(Tok::LParen)?;
            let target = c.name()?;
            c.expect(Tok::RParen)?;
            CompKind::QRand { target }
        } else if c.at_ident("qneg") || c.at_ident("qnegate") {
            c.next();
            c.expect(Tok::LParen)?;
            c.expect(Tok::RParen)?;
            CompKind::QNeg
        } else {
            let target = c.name()?;
            if c.eat(&Tok::XorEq) {
                CompKind::XorAssign {
                    target,
                    rhs: c.expr()?,
                }
            } else if c.eat(&Tok::Walrus) {
                if c.at_ident("rand_bit") {
                    c.next();
                    c.expect(Tok::LParen)?;
                    c.expect(Tok::RParen)?;
                    CompKind::RandBit { target }
                } else {
                    CompKind::Assign {
                        target,
                        rhs: c.expr()?,
                    }
                }
            } else {
                return Err(c.unexpected("`^=` or `:=`"));
            }
        };
        c.finish()?;
        self.pos += 1;
        Ok(Comp::at(kind, span))
    }

    /// Indented body of an `if` whose header sits at `outer` indentation.
    fn block(&mut self, outer: usize, header: &Line) -> Result<Vec<Comp>, ParseError> {
        let indent = match self.lines.get(self.pos) {
            Some(l) if l.indent > outer => l.indent,
            Some(l) => {
                return Err(ParseError::new(
                    Span::new(l.number, l.indent + 1),
                    "expected an indented block after `if ...:`",
                ))
            }
            None => {
                return Err(ParseError::new(
                    Line::after(header),
                    "expected an indented block after `if ...:`",
                ))
            }
        };
        let mut body = Vec::new();
        while let Some(line) = self.lines.get(self.pos) {
            if line.indent < indent {
                if line.indent > outer {
                    return Err(ParseError::new(
                        Span::new(line.number, line.indent + 1),
                        "inconsistent indentation: dedent does not match any enclosing block",
                    ));
                }
                break;
            }
            if line.indent > indent {
                return Err(ParseError::new(
                    Span::new(line.number, line.indent + 1),
                    "unexpected indent",
                ));
            }
            body.push(self.comp_statement(indent)?);
        }
        Ok(body)
    }
}

impl Line {
    fn after(line: &Line) -> Span {
        Span::new(line.number + 1, 1)
    }
}
