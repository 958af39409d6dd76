use super::ast::Span;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Bit(bool),
    LParen,
    RParen,
    Comma,
    Colon,
    Walrus,
    XorEq,
    EqEq,
    NotEq,
    Xor,
    Not,
    And,
    Or,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Bit(b) => format!("`{}`", u8::from(*b)),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Walrus => "`:=`".into(),
            Tok::XorEq => "`^=`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::NotEq => "`!=`".into(),
            Tok::Xor => "`^`".into(),
            Tok::Not => "`not`".into(),
            Tok::And => "`and`".into(),
            Tok::Or => "`or`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// One non-blank source line after comment stripping.
#[derive(Debug, Clone)]
pub(crate) struct Line {
    pub number: usize,
    pub indent: usize,
    pub tokens: Vec<Token>,
    /// Position just past the last token, for end-of-line errors.
    pub end: Span,
}

pub(crate) fn lex(src: &str) -> Result<Vec<Line>, ParseError> {
    let mut lines = Vec::new();
    for (idx, raw) in src.split('\n').enumerate() {
        let number = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let chars: Vec<char> = raw.chars().collect();

        let mut indent = 0;
        while indent < chars.len() && (chars[indent] == ' ' || chars[indent] == '\t') {
            if chars[indent] == '\t' {
                return Err(ParseError::new(
                    Span::new(number, indent + 1),
                    "tab character in indentation",
                ));
            }
            indent += 1;
        }

        let tokens = lex_line(&chars, indent, number)?;
        if tokens.is_empty() {
            continue;
        }
        let end = Span::new(number, chars.len() + 1);
        lines.push(Line {
            number,
            indent,
            tokens,
            end,
        });
    }
    Ok(lines)
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex_line(chars: &[char], start: usize, line: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut i = start;
    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line, i + 1);
        let next = chars.get(i + 1).copied();
        let mut push = |tok: Tok, width: usize| {
            out.push(Token { tok, span });
            width
        };
        let width = match c {
            '#' => break,
            ' ' | '\t' => 1,
            '(' => push(Tok::LParen, 1),
            ')' => push(Tok::RParen, 1),
            ',' => push(Tok::Comma, 1),
            ':' if next == Some('=') => push(Tok::Walrus, 2),
            ':' => push(Tok::Colon, 1),
            '^' if next == Some('=') => push(Tok::XorEq, 2),
            '^' | '⊕' => push(Tok::Xor, 1),
            '=' if next == Some('=') => push(Tok::EqEq, 2),
            '!' if next == Some('=') => push(Tok::NotEq, 2),
            '≠' => push(Tok::NotEq, 1),
            '!' | '¬' => push(Tok::Not, 1),
            '&' if next == Some('&') => push(Tok::And, 2),
            '&' | '∧' => push(Tok::And, 1),
            '|' if next == Some('|') => push(Tok::Or, 2),
            '|' | '∨' => push(Tok::Or, 1),
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let bit = match text.as_str() {
                    "0" => false,
                    "1" => true,
                    _ if text.chars().all(|c| c.is_ascii_digit()) => {
                        return Err(ParseError::new(
                            span,
                            format!("bit literal must be 0 or 1, found `{text}`"),
                        ))
                    }
                    _ => {
                        return Err(ParseError::new(
                            span,
                            format!("invalid identifier `{text}`: identifiers cannot start with a digit"),
                        ))
                    }
                };
                push(Tok::Bit(bit), j - i)
            }
            c if is_ident_start(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                if j < chars.len() && !chars[j].is_ascii() && chars[j].is_alphanumeric() {
                    let mut k = j;
                    while k < chars.len() && chars[k].is_alphanumeric() {
                        k += 1;
                    }
                    let text: String = chars[i..k].iter().collect();
                    return Err(ParseError::new(
                        span,
                        format!("invalid identifier `{text}`: only ASCII letters, digits and `_` are allowed"),
                    ));
                }
                let text: String = chars[i..j].iter().collect();
                let tok = match text.as_str() {
                    "not" => Tok::Not,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "xor" => Tok::Xor,
                    _ => Tok::Ident(text),
                };
                push(tok, j - i)
            }
            other => {
                return Err(ParseError::new(
                    span,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        i += width;
    }
    Ok(out)
}
