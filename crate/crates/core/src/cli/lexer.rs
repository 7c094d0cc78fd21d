use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(String),
    Sym(char),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LexError {
    pub pos: Pos,
    pub found: char,
}

const SYMBOLS: &str = "(),;=+-*/^";

pub fn lex(src: &str) -> Result<Vec<Token>, LexError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut pos = Pos { line: 1, col: 1 };
    let advance = |c: char, pos: &mut Pos| {
        if c == '\n' {
            pos.line += 1;
            pos.col = 1;
        } else {
            pos.col += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let start = pos;
        if c.is_whitespace() {
            chars.next();
            advance(c, &mut pos);
        } else if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                advance(c, &mut pos);
            }
        } else if c.is_ascii_digit() || c == '.' {
            let mut s = String::new();
            let mut seen_dot = false;
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() || (d == '.' && !seen_dot) {
                    seen_dot |= d == '.';
                    s.push(d);
                    chars.next();
                    advance(d, &mut pos);
                } else {
                    break;
                }
            }
            if s == "." || s.ends_with('.') {
                return Err(LexError { pos: start, found: '.' });
            }
            out.push(Token { tok: Tok::Number(s), pos: start });
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_alphanumeric() || d == '_' {
                    s.push(d);
                    chars.next();
                    advance(d, &mut pos);
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Ident(s), pos: start });
        } else if SYMBOLS.contains(c) {
            chars.next();
            advance(c, &mut pos);
            out.push(Token { tok: Tok::Sym(c), pos: start });
        } else {
            return Err(LexError { pos: start, found: c });
        }
    }
    out.push(Token { tok: Tok::Eof, pos });
    Ok(out)
}
