//! Expression grammar for polynomials on the command line.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' ['-'] int)?
//! atom   := literal | 'mu' | variable | '(' expr ')'
//! ```
//!
//! Literals are rationals (`3`, `3/4`) optionally suffixed with `i`
//! (`2i`, `1/3i`), or a bare `i`. Multiplication is always explicit; there
//! is no implicit juxtaposition. Negative exponents are accepted on `mu`
//! only. Errors carry a 1-based byte offset and the set of tokens that
//! would have been accepted.

use std::fmt;

use projstar_core::{GaussRational, HomPoly, MuScalar};

const MAX_EXPONENT: i64 = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// 1-based byte offset into the source string.
    pub offset: usize,
    pub message: String,
    pub expected: Vec<&'static str>,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>, expected: Vec<&'static str>) -> Self {
        ParseError {
            offset,
            message: message.into(),
            expected,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.message, self.offset)?;
        if !self.expected.is_empty() {
            write!(f, "; expected one of: {}", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Literal(GaussRational),
    Mu,
    Var(String),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize, // 1-based
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i];
        let offset = i + 1;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
            }
            b'+' => {
                tokens.push(Token { kind: TokenKind::Plus, offset });
                i += 1;
            }
            b'-' => {
                tokens.push(Token { kind: TokenKind::Minus, offset });
                i += 1;
            }
            b'*' => {
                tokens.push(Token { kind: TokenKind::Star, offset });
                i += 1;
            }
            b'^' => {
                tokens.push(Token { kind: TokenKind::Caret, offset });
                i += 1;
            }
            b'(' => {
                tokens.push(Token { kind: TokenKind::LParen, offset });
                i += 1;
            }
            b')' => {
                tokens.push(Token { kind: TokenKind::RParen, offset });
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let mut text = src[start..i].to_string();
                if i < bytes.len() && bytes[i] == b'/' {
                    let slash = i;
                    i += 1;
                    let den_start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if den_start == i {
                        return Err(ParseError::new(
                            slash + 2,
                            "missing denominator digits",
                            vec!["integer"],
                        ));
                    }
                    text.push('/');
                    text.push_str(&src[den_start..i]);
                }
                let imaginary = i < bytes.len() && bytes[i] == b'i';
                if imaginary {
                    i += 1;
                    text.push('i');
                }
                let value: GaussRational = text.parse().map_err(|_| {
                    ParseError::new(offset, format!("invalid number `{text}`"), vec![])
                })?;
                tokens.push(Token { kind: TokenKind::Literal(value), offset });
            }
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit())
                {
                    i += 1;
                }
                let word = &src[start..i];
                let kind = match word {
                    "mu" => TokenKind::Mu,
                    "i" => TokenKind::Literal(GaussRational::i()),
                    _ => TokenKind::Var(word.to_string()),
                };
                tokens.push(Token { kind, offset });
            }
            _ => {
                return Err(ParseError::new(
                    offset,
                    format!("unexpected character `{}`", c as char),
                    vec![],
                ));
            }
        }
    }
    tokens.push(Token { kind: TokenKind::Eof, offset: src.len() + 1 });
    Ok(tokens)
}

/// Abstract syntax of an expression; variables keep their source offsets
/// for later resolution errors.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(GaussRational),
    Mu,
    Var { name: String, offset: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow { base: Box<Expr>, exp: i64, offset: usize },
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

const ATOM_EXPECTED: &[&str] = &["literal", "'mu'", "variable", "'('"];

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let negated = matches!(self.peek().kind, TokenKind::Minus);
        if negated {
            self.bump();
        }
        let mut acc = self.term()?;
        if negated {
            acc = Expr::Neg(Box::new(acc));
        }
        loop {
            match self.peek().kind {
                TokenKind::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = Expr::Add(Box::new(acc), Box::new(rhs));
                }
                TokenKind::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = Expr::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek().kind, TokenKind::Star) {
            self.bump();
            let rhs = self.factor()?;
            acc = Expr::Mul(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !matches!(self.peek().kind, TokenKind::Caret) {
            return Ok(base);
        }
        let caret = self.bump();
        let negative = matches!(self.peek().kind, TokenKind::Minus);
        if negative {
            self.bump();
        }
        let tok = self.bump();
        let exp_value = match &tok.kind {
            TokenKind::Literal(v) if v.is_real() && v.re().is_integer() => {
                i64::try_from(v.re().to_integer()).ok().filter(|&e| e >= 0)
            }
            _ => None,
        };
        let Some(mut exp) = exp_value else {
            return Err(ParseError::new(
                tok.offset,
                "invalid exponent",
                vec!["integer"],
            ));
        };
        if exp > MAX_EXPONENT {
            return Err(ParseError::new(tok.offset, "exponent too large", vec![]));
        }
        if negative {
            exp = -exp;
            if !matches!(base, Expr::Mu) {
                return Err(ParseError::new(
                    caret.offset,
                    "negative exponents are allowed on `mu` only",
                    vec![],
                ));
            }
        }
        Ok(Expr::Pow {
            base: Box::new(base),
            exp,
            offset: caret.offset,
        })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let tok = self.bump();
        match tok.kind {
            TokenKind::Literal(v) => Ok(Expr::Literal(v)),
            TokenKind::Mu => Ok(Expr::Mu),
            TokenKind::Var(name) => Ok(Expr::Var { name, offset: tok.offset }),
            TokenKind::LParen => {
                let inner = self.expr()?;
                let closing = self.bump();
                if matches!(closing.kind, TokenKind::RParen) {
                    Ok(inner)
                } else {
                    Err(ParseError::new(
                        closing.offset,
                        unexpected_name(&closing.kind),
                        vec!["')'", "'+'", "'-'", "'*'", "'^'"],
                    ))
                }
            }
            other => Err(ParseError::new(
                tok.offset,
                unexpected_name(&other),
                ATOM_EXPECTED.to_vec(),
            )),
        }
    }
}

fn unexpected_name(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Eof => "unexpected end of input".to_string(),
        TokenKind::Literal(v) => format!("unexpected literal `{v}`"),
        TokenKind::Var(name) => format!("unexpected variable `{name}`"),
        TokenKind::Mu => "unexpected `mu`".to_string(),
        TokenKind::Plus => "unexpected `+`".to_string(),
        TokenKind::Minus => "unexpected `-`".to_string(),
        TokenKind::Star => "unexpected `*`".to_string(),
        TokenKind::Caret => "unexpected `^`".to_string(),
        TokenKind::LParen => "unexpected `(`".to_string(),
        TokenKind::RParen => "unexpected `)`".to_string(),
    }
}

/// Parse a complete source string into an expression tree.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let tokens = lex(src)?;
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.expr()?;
    let trailing = parser.bump();
    if matches!(trailing.kind, TokenKind::Eof) {
        Ok(expr)
    } else {
        Err(ParseError::new(
            trailing.offset,
            unexpected_name(&trailing.kind),
            vec!["'+'", "'-'", "'*'", "'^'", "end of input"],
        ))
    }
}

/// Evaluate an expression in the polynomial ring with `nvars` variables;
/// `resolve` maps a variable name to its slot.
pub fn eval(
    expr: &Expr,
    nvars: usize,
    resolve: &impl Fn(&str) -> Option<usize>,
) -> Result<HomPoly, ParseError> {
    match expr {
        Expr::Literal(v) => Ok(HomPoly::constant(nvars, MuScalar::from_gauss(v.clone()))),
        Expr::Mu => Ok(HomPoly::constant(nvars, MuScalar::mu_pow(1))),
        Expr::Var { name, offset } => match resolve(name) {
            Some(slot) => Ok(HomPoly::var(nvars, slot)),
            None => Err(ParseError::new(
                *offset,
                format!("unknown variable `{name}`"),
                vec![],
            )),
        },
        Expr::Neg(inner) => Ok(-eval(inner, nvars, resolve)?),
        Expr::Add(a, b) => Ok(eval(a, nvars, resolve)? + eval(b, nvars, resolve)?),
        Expr::Sub(a, b) => Ok(eval(a, nvars, resolve)? - eval(b, nvars, resolve)?),
        Expr::Mul(a, b) => Ok(eval(a, nvars, resolve)? * eval(b, nvars, resolve)?),
        Expr::Pow { base, exp, .. } => {
            if *exp < 0 {
                // parser guarantees the base is `mu` here
                Ok(HomPoly::constant(nvars, MuScalar::mu_pow(*exp)))
            } else {
                Ok(eval(base, nvars, resolve)?.pow(*exp as u32))
            }
        }
    }
}

/// Parse and evaluate in one step.
pub fn parse_poly(
    src: &str,
    nvars: usize,
    resolve: &impl Fn(&str) -> Option<usize>,
) -> Result<HomPoly, ParseError> {
    eval(&parse(src)?, nvars, resolve)
}

/// Variable names appearing in an expression, with offsets.
pub fn variables(expr: &Expr, out: &mut Vec<(String, usize)>) {
    match expr {
        Expr::Literal(_) | Expr::Mu => {}
        Expr::Var { name, offset } => out.push((name.clone(), *offset)),
        Expr::Neg(a) => variables(a, out),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            variables(a, out);
            variables(b, out);
        }
        Expr::Pow { base, .. } => variables(base, out),
    }
}
