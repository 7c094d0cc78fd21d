use std::fmt;

use super::ast::{BinOp, Expr, Factor, Located, ProblemSpec, FUNCTIONS, KEYWORDS};
use super::lexer::{lex, Pos, Tok, Token};

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub pos: Pos,
    pub found: String,
    pub expected: Vec<String>,
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.pos)?;
        if let Some(m) = &self.message {
            write!(f, "{m}; ")?;
        }
        write!(f, "expected {}, found {}", self.expected.join(" or "), self.found)
    }
}

impl std::error::Error for ParseError {}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

type PResult<T> = Result<T, ParseError>;

const EXPR_START: [&str; 5] = ["number", "identifier", "`(`", "`-`", "`+`"];

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<S: AsRef<str>>(&self, expected: &[S]) -> ParseError {
        let t = self.peek();
        ParseError {
            pos: t.pos,
            found: t.tok.describe(),
            expected: expected.iter().map(|s| s.as_ref().to_string()).collect(),
            message: None,
        }
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.at_sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> PResult<Pos> {
        if self.at_sym(c) {
            Ok(self.bump().pos)
        } else {
            Err(self.error(&[format!("`{c}`")]))
        }
    }

    fn name(&mut self) -> PResult<Located<String>> {
        match self.peek().tok.clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let pos = self.bump().pos;
                Ok(Located::new(s, pos))
            }
            Tok::Ident(s) => {
                let mut e = self.error(&["a name"]);
                e.message = Some(format!("`{s}` is reserved"));
                Err(e)
            }
            _ => Err(self.error(&["a name"])),
        }
    }

    fn problem(&mut self) -> PResult<ProblemSpec> {
        let mut spec = ProblemSpec::default();
        loop {
            let t = self.peek().clone();
            let kw = match &t.tok {
                Tok::Eof => return Ok(spec),
                Tok::Ident(s) => s.clone(),
                _ => return Err(self.error(&["`vars`", "`cone`", "`param`", "`num`", "`den`", "end of input"])),
            };
            match kw.as_str() {
                "vars" => {
                    self.bump();
                    loop {
                        spec.vars.push(self.name()?);
                        if self.at_sym(';') {
                            break;
                        }
                    }
                }
                "cone" => {
                    self.bump();
                    let mut gens = spec.cone.take().unwrap_or_default();
                    loop {
                        let pos = self.expect_sym('(')?;
                        let mut v = vec![self.expr()?];
                        while self.eat_sym(',') {
                            v.push(self.expr()?);
                        }
                        self.expect_sym(')')?;
                        gens.push(Located::new(v, pos));
                        if !self.at_sym('(') {
                            break;
                        }
                    }
                    spec.cone = Some(gens);
                }
                "param" => {
                    self.bump();
                    loop {
                        let name = self.name()?;
                        self.expect_sym('=')?;
                        let value = self.expr()?;
                        spec.params.push((name, value));
                        self.eat_sym(',');
                        if self.at_sym(';') {
                            break;
                        }
                    }
                }
                "num" => {
                    self.bump();
                    if spec.num.is_some() {
                        return Err(ParseError {
                            pos: t.pos,
                            found: "a second `num` statement".into(),
                            expected: vec!["a single numerator".into()],
                            message: None,
                        });
                    }
                    let pos = self.peek().pos;
                    spec.num = Some(Located::new(self.expr()?, pos));
                }
                "den" => {
                    self.bump();
                    loop {
                        let pos = self.expect_sym('(')?;
                        let expr = self.expr()?;
                        self.expect_sym(')')?;
                        let mut power = 1;
                        if self.eat_sym('^') {
                            power = self.exponent()?;
                        }
                        spec.den.push(Located::new(Factor { expr, power }, pos));
                        if !self.at_sym('(') {
                            break;
                        }
                    }
                }
                _ => return Err(self.error(&["`vars`", "`cone`", "`param`", "`num`", "`den`", "end of input"])),
            }
            if !self.eat_sym(';') {
                return Err(self.error(&["`;`"]));
            }
        }
    }

    fn exponent(&mut self) -> PResult<u32> {
        match self.peek().tok.clone() {
            Tok::Number(s) => match s.parse::<u32>() {
                Ok(n) if n >= 1 => {
                    self.bump();
                    Ok(n)
                }
                _ => Err(self.error(&["a positive integer exponent"])),
            },
            _ => Err(self.error(&["a positive integer exponent"])),
        }
    }

    // expr = term { ("+" | "-") term }
    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat_sym('+') {
                BinOp::Add
            } else if self.eat_sym('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    // term = unary { ("*" | "/") unary }
    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat_sym('*') {
                BinOp::Mul
            } else if self.eat_sym('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    // unary = ("-" | "+") unary | power
    fn unary(&mut self) -> PResult<Expr> {
        if self.eat_sym('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        self.power()
    }

    // power = atom [ "^" unary ]
    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if self.eat_sym('^') {
            let exp = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek().tok.clone() {
            Tok::Number(s) => {
                self.bump();
                Ok(Expr::Number(s))
            }
            Tok::Ident(s) => {
                self.bump();
                if FUNCTIONS.contains(&s.as_str()) {
                    self.expect_sym('(')?;
                    let arg = self.expr()?;
                    self.expect_sym(')')?;
                    return Ok(Expr::Call(s, Box::new(arg)));
                }
                if self.at_sym('(') {
                    let mut e = self.error(&FUNCTIONS.iter().map(|f| format!("`{f}`")).collect::<Vec<_>>());
                    e.message = Some(format!("unknown function `{s}`"));
                    return Err(e);
                }
                Ok(Expr::Ident(s))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            _ => Err(self.error(&EXPR_START)),
        }
    }
}

pub fn parse(src: &str) -> Result<ProblemSpec, ParseError> {
    let toks = lex(src).map_err(|e| ParseError {
        pos: e.pos,
        found: format!("`{}`", e.found),
        expected: vec!["a token".into()],
        message: Some("unrecognized character".into()),
    })?;
    Parser { toks, at: 0 }.problem()
}

/// Parse a single expression (used for parameter overrides).
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src).map_err(|e| ParseError {
        pos: e.pos,
        found: format!("`{}`", e.found),
        expected: vec!["a token".into()],
        message: Some("unrecognized character".into()),
    })?;
    let mut p = Parser { toks, at: 0 };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error(&["end of input"]));
    }
    Ok(e)
}
