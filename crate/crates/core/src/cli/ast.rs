use super::lexer::Pos;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// Decimal literal as written.
    Number(String),
    Ident(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(String, Box<Expr>),
}

pub const FUNCTIONS: [&str; 2] = ["exp", "ln"];
pub const KEYWORDS: [&str; 9] = ["vars", "cone", "param", "num", "den", "i", "pi", "exp", "ln"];

/// A value with its source position; equality ignores the position.
#[derive(Clone, Debug)]
pub struct Located<T> {
    pub value: T,
    pub pos: Pos,
}

impl<T: PartialEq> PartialEq for Located<T> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl<T> Located<T> {
    pub fn new(value: T, pos: Pos) -> Self {
        Self { value, pos }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub expr: Expr,
    pub power: u32,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ProblemSpec {
    pub vars: Vec<Located<String>>,
    /// Ordered cone generators; `None` means the standard basis.
    pub cone: Option<Vec<Located<Vec<Expr>>>>,
    pub params: Vec<(Located<String>, Expr)>,
    pub num: Option<Located<Expr>>,
    pub den: Vec<Located<Factor>>,
}
