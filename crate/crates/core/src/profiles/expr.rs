//! Closed-form coefficient expressions in one variable `x`.
//!
//! Grammar, whitespace insignificant:
//!
//! ```text
//! expr   := term { ("+"|"-") term } ;
//! term   := factor { ("*"|"/") factor } ;
//! factor := unary ;
//! unary  := [ "-" ] power ;
//! power  := atom [ "^" unary ] ;
//! atom   := NUMBER | "x" | IDENT "(" expr ")" | "(" expr ")" ;
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-x^2`
//! is `-(x^2)` and `2^-x` is `2^(-x)`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Abs,
}

impl Function {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Function::Sin,
            "cos" => Function::Cos,
            "tan" => Function::Tan,
            "exp" => Function::Exp,
            "log" => Function::Log,
            "sqrt" => Function::Sqrt,
            "sinh" => Function::Sinh,
            "cosh" => Function::Cosh,
            "abs" => Function::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Function::Sin => "sin",
            Function::Cos => "cos",
            Function::Tan => "tan",
            Function::Exp => "exp",
            Function::Log => "log",
            Function::Sqrt => "sqrt",
            Function::Sinh => "sinh",
            Function::Cosh => "cosh",
            Function::Abs => "abs",
        }
    }

    fn apply(self, arg: f64, x: f64) -> Result<f64> {
        let value = match self {
            Function::Sin => arg.sin(),
            Function::Cos => arg.cos(),
            Function::Tan => arg.tan(),
            Function::Exp => arg.exp(),
            Function::Log => {
                if arg <= 0.0 {
                    return Err(domain(x, format!("log of non-positive value {arg}")));
                }
                arg.ln()
            }
            Function::Sqrt => {
                if arg < 0.0 {
                    return Err(domain(x, format!("sqrt of negative value {arg}")));
                }
                arg.sqrt()
            }
            Function::Sinh => arg.sinh(),
            Function::Cosh => arg.cosh(),
            Function::Abs => arg.abs(),
        };
        Ok(value)
    }
}

/// Expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Number(f64),
    Variable,
    Neg(Box<Expression>),
    Binary(BinaryOp, Box<Expression>, Box<Expression>),
    Call(Function, Box<Expression>),
}

fn domain(x: f64, message: String) -> Error {
    Error::Domain { x, message }
}

impl Expression {
    pub fn constant(value: f64) -> Self {
        Expression::Number(value)
    }

    pub fn binary(op: BinaryOp, lhs: Expression, rhs: Expression) -> Self {
        Expression::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// Evaluates the tree at `x`.
    ///
    /// Non-finite intermediate results (overflow, `0^-1`, negative base with
    /// fractional exponent) are reported as domain errors.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let value = match self {
            Expression::Number(v) => *v,
            Expression::Variable => x,
            Expression::Neg(inner) => -inner.eval(x)?,
            Expression::Binary(op, lhs, rhs) => {
                let l = lhs.eval(x)?;
                let r = rhs.eval(x)?;
                match op {
                    BinaryOp::Add => l + r,
                    BinaryOp::Sub => l - r,
                    BinaryOp::Mul => l * r,
                    BinaryOp::Div => {
                        if r == 0.0 {
                            return Err(domain(x, "division by zero".into()));
                        }
                        l / r
                    }
                    BinaryOp::Pow => l.powf(r),
                }
            }
            Expression::Call(func, arg) => func.apply(arg.eval(x)?, x)?,
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(domain(x, format!("non-finite result in `{self}`")))
        }
    }

    /// True when the tree does not reference `x`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expression::Number(_) => true,
            Expression::Variable => false,
            Expression::Neg(inner) | Expression::Call(_, inner) => inner.is_constant(),
            Expression::Binary(_, lhs, rhs) => lhs.is_constant() && rhs.is_constant(),
        }
    }
}

impl fmt::Display for Expression {
    // Fully parenthesised; re-parses to a tree with identical evaluation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Number(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => {
                write!(f, "(-{:?})", -v)
            }
            Expression::Number(v) => write!(f, "{v:?}"),
            Expression::Variable => f.write_str("x"),
            Expression::Neg(inner) => write!(f, "(-{inner})"),
            Expression::Binary(op, lhs, rhs) => write!(f, "({lhs} {} {rhs})", op.symbol()),
            Expression::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

impl std::str::FromStr for Expression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_expression(s)
    }
}

/// Parses expression text into a tree.
pub fn parse_expression(text: &str) -> Result<Expression> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0 };
    parser.skip_ws();
    if parser.at_end() {
        return Err(Error::Syntax { offset: 0, message: "empty expression".into() });
    }
    let expr = parser.expr()?;
    parser.skip_ws();
    if !parser.at_end() {
        return Err(parser.error(format!("unexpected `{}`", parser.peek_char())));
    }
    Ok(expr)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
            .unwrap_or('\u{fffd}')
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: String) -> Error {
        Error::Syntax { offset: self.pos, message }
    }

    fn eat(&mut self, byte: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expression> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(b'+') {
                BinaryOp::Add
            } else if self.eat(b'-') {
                BinaryOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expression::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expression> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(b'*') {
                BinaryOp::Mul
            } else if self.eat(b'/') {
                BinaryOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expression::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expression> {
        if self.eat(b'-') {
            Ok(Expression::Neg(Box::new(self.power()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expression> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.unary()?;
            Ok(Expression::binary(BinaryOp::Pow, base, exponent))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expression> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("unexpected end of input".into())),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    self.skip_ws();
                    return Err(self.error("expected `)`".into()));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(_) => Err(self.error(format!("unexpected `{}`", self.peek_char()))),
        }
    }

    fn number(&mut self) -> Result<Expression> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let from = p.pos;
            while matches!(p.peek(), Some(c) if c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos - from
        };
        let mut mantissa = digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            mantissa += digits(self);
        }
        if mantissa == 0 {
            return Err(Error::Syntax { offset: start, message: "malformed number".into() });
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
                return Err(self.error("malformed exponent".into()));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<f64>()
            .map(Expression::Number)
            .map_err(|e| Error::Syntax { offset: start, message: e.to_string() })
    }

    fn identifier(&mut self) -> Result<Expression> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        if name == "x" {
            return Ok(Expression::Variable);
        }
        self.skip_ws();
        if self.peek() != Some(b'(') {
            return Err(Error::Syntax {
                offset: start,
                message: format!("unknown identifier `{name}`"),
            });
        }
        let func = Function::from_name(name)
            .ok_or_else(|| Error::UnknownFunction { name: name.to_string(), offset: start })?;
        self.pos += 1;
        let arg = self.expr()?;
        if !self.eat(b')') {
            self.skip_ws();
            return Err(self.error("expected `)`".into()));
        }
        Ok(Expression::Call(func, Box::new(arg)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eval(text: &str, x: f64) -> f64 {
        parse_expression(text).unwrap().eval(x).unwrap()
    }

    #[test]
    fn evaluates_examples() {
        assert_eq!(eval("x", 3.0), 3.0);
        assert_eq!(eval("x^2 + sin(x)", 0.0), 0.0);
        assert_eq!(eval("2*x^3", 2.0), 16.0);
        assert_eq!(eval("cos(x)", 0.0), 1.0);
        assert_eq!(eval("sqrt(x)", 4.0), 2.0);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("2^3^2", 0.0), 512.0);
        assert_eq!(eval("-x^2", 3.0), -9.0);
        assert_eq!(eval("2^-1", 0.0), 0.5);
        assert_eq!(eval("1 - 2 - 3", 0.0), -4.0);
        assert_eq!(eval("8 / 4 / 2", 0.0), 1.0);
        assert_eq!(eval("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(eval("(1 + 2) * 3", 0.0), 9.0);
        assert_eq!(eval("2 * -x", 1.5), -3.0);
        assert_eq!(eval("1.5e1 + .5 + 2E-1", 0.0), 15.7);
        assert_eq!(eval("  abs ( x )  ", -2.0), 2.0);
    }

    #[test]
    fn domain_errors() {
        let div = parse_expression("1/x").unwrap();
        assert!(matches!(div.eval(0.0), Err(Error::Domain { .. })));
        let log = parse_expression("log(x)").unwrap();
        assert!(matches!(log.eval(0.0), Err(Error::Domain { .. })));
        assert!(matches!(log.eval(-1.0), Err(Error::Domain { .. })));
        let sqrt = parse_expression("sqrt(x)").unwrap();
        assert!(matches!(sqrt.eval(-1e-3), Err(Error::Domain { .. })));
        let big = parse_expression("exp(x)").unwrap();
        assert!(matches!(big.eval(1e4), Err(Error::Domain { .. })));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(
            parse_expression("x +"),
            Err(Error::Syntax { offset: 3, message: "unexpected end of input".into() })
        );
        match parse_expression("1 + foo(x)") {
            Err(Error::UnknownFunction { name, offset }) => {
                assert_eq!(name, "foo");
                assert_eq!(offset, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_expression(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse_expression("   "), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expression("(x"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expression("x )"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expression("sin x"), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse_expression("1e"), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(parse_expression("--x"), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(parse_expression("y"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expression("x # 1"), Err(Error::Syntax { offset: 2, .. })));
    }

    #[test]
    fn constant_detection() {
        assert!(parse_expression("2*sin(3)").unwrap().is_constant());
        assert!(!parse_expression("2*sin(x)").unwrap().is_constant());
    }

    fn leaf() -> impl Strategy<Value = Expression> {
        prop_oneof![
            (-50.0f64..50.0).prop_map(Expression::Number),
            Just(Expression::Variable),
        ]
    }

    fn tree() -> impl Strategy<Value = Expression> {
        leaf().prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expression::Neg(Box::new(e))),
                (inner.clone(), inner.clone(), 0usize..5).prop_map(|(l, r, k)| {
                    let op = [BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div, BinaryOp::Pow][k];
                    Expression::binary(op, l, r)
                }),
                (inner, 0usize..9).prop_map(|(e, k)| {
                    let names = ["sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "abs"];
                    Expression::Call(Function::from_name(names[k]).unwrap(), Box::new(e))
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(e in tree(), x in -3.0f64..3.0) {
            let printed = e.to_string();
            let reparsed = parse_expression(&printed).unwrap();
            prop_assert_eq!(reparsed.to_string(), printed);
            match (e.eval(x), reparsed.eval(x)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
            }
        }
    }
}
