//! The generator-expression language used for `h(s)`, `κ₁(s)` and `κ₂(s)`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?          (right-associative)
//! atom   := number | 's' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Unary minus binds looser than `^`, so `-s^2` is `-(s^2)`. The Unicode
//! minus sign `−` is accepted as a synonym for `-`.

use std::fmt;

use crate::error::{Error, Result, Span};
use crate::jet::{Func, Jet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    Num(f64),
    Var,
    Pi,
    E,
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

/// A parsed expression. Equality ignores source spans.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Num(a), Num(b)) => a == b,
            (Var, Var) | (Pi, Pi) | (E, E) => true,
            (Neg(a), Neg(b)) => a == b,
            (Call(f, a), Call(g, b)) => f == g && a == b,
            (Bin(o, a, b), Bin(p, c, d)) => o == p && a == c && b == d,
            _ => false,
        }
    }
}

impl Expr {
    fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    /// True when the expression does not mention `s`.
    pub fn is_constant(&self) -> bool {
        match &self.kind {
            ExprKind::Num(_) | ExprKind::Pi | ExprKind::E => true,
            ExprKind::Var => false,
            ExprKind::Neg(a) | ExprKind::Call(_, a) => a.is_constant(),
            ExprKind::Bin(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Jet of the denoted function at `s` up to `order`.
    pub fn eval_jet(&self, s: f64, order: usize) -> Result<Jet> {
        assert!(order <= crate::jet::MAX_ORDER, "jet order too large");
        self.jet(s, order)
    }

    fn jet(&self, s: f64, order: usize) -> Result<Jet> {
        let at_node = |e: Error| match e {
            Error::Domain { func, at } => Error::DomainAt {
                func,
                at,
                span: self.span,
            },
            other => other,
        };
        Ok(match &self.kind {
            ExprKind::Num(x) => Jet::constant(s, *x, order),
            ExprKind::Pi => Jet::constant(s, std::f64::consts::PI, order),
            ExprKind::E => Jet::constant(s, std::f64::consts::E, order),
            ExprKind::Var => Jet::variable(s, order),
            ExprKind::Neg(a) => -a.jet(s, order)?,
            ExprKind::Call(f, a) => f.apply(&a.jet(s, order)?).map_err(at_node)?,
            ExprKind::Bin(op, a, b) => {
                let x = a.jet(s, order)?;
                let y = b.jet(s, order)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x.checked_div(&y).map_err(at_node)?,
                    BinOp::Pow => x.pow(&y).map_err(at_node)?,
                }
            }
        })
    }

    /// Plain evaluation, independent of the jet machinery.
    pub fn eval_real(&self, s: f64) -> Result<f64> {
        let fail = |func: &'static str| Error::DomainAt {
            func,
            at: s,
            span: self.span,
        };
        let v = match &self.kind {
            ExprKind::Num(x) => *x,
            ExprKind::Pi => std::f64::consts::PI,
            ExprKind::E => std::f64::consts::E,
            ExprKind::Var => s,
            ExprKind::Neg(a) => -a.eval_real(s)?,
            ExprKind::Call(f, a) => f.apply_real(a.eval_real(s)?).ok_or_else(|| fail(f.name()))?,
            ExprKind::Bin(op, a, b) => {
                let x = a.eval_real(s)?;
                let y = b.eval_real(s)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div if y == 0.0 => return Err(fail("div")),
                    BinOp::Div => x / y,
                    BinOp::Pow => x.powf(y),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(fail("pow"))
        }
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesised rendering; parsing it yields an equal tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Num(x) => write!(f, "{x:?}"),
            ExprKind::Var => f.write_str("s"),
            ExprKind::Pi => f.write_str("pi"),
            ExprKind::E => f.write_str("e"),
            ExprKind::Neg(a) => write!(f, "(-{a})"),
            ExprKind::Call(func, a) => write!(f, "{func}({a})"),
            ExprKind::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

// ---- lexer -----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, Span)>> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (t, sp) = lx.next()?;
            let end = t == Tok::End;
            out.push((t, sp));
            if end {
                return Ok(out);
            }
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn next(&mut self) -> Result<(Tok, Span)> {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        let start = self.pos;
        let Some(c) = self.peek_char() else {
            return Ok((Tok::End, Span { start, end: start }));
        };
        let tok = if c.is_ascii_digit() || c == '.' {
            self.number()?
        } else if c.is_alphabetic() || c == '_' {
            while let Some(c) = self.peek_char() {
                if c.is_alphanumeric() || c == '_' {
                    self.pos += c.len_utf8();
                } else {
                    break;
                }
            }
            Tok::Ident(self.src[start..self.pos].to_string())
        } else {
            self.pos += c.len_utf8();
            match c {
                '+' | '*' | '/' | '^' | '-' => Tok::Op(c),
                '\u{2212}' => Tok::Op('-'),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(Error::Syntax {
                        offset: start,
                        expected: vec!["number", "s", "function", "(", "operator"],
                    })
                }
            }
        };
        Ok((tok, Span { start, end: self.pos }))
    }

    fn number(&mut self) -> Result<Tok> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let digits = |p: &mut usize| {
            let s = *p;
            while *p < bytes.len() && bytes[*p].is_ascii_digit() {
                *p += 1;
            }
            *p - s
        };
        let mut p = self.pos;
        let mut n = digits(&mut p);
        if p < bytes.len() && bytes[p] == b'.' {
            p += 1;
            n += digits(&mut p);
        }
        if n == 0 {
            return Err(Error::Syntax {
                offset: start,
                expected: vec!["digit"],
            });
        }
        // optional exponent, only if digits follow
        if p < bytes.len() && (bytes[p] == b'e' || bytes[p] == b'E') {
            let mut q = p + 1;
            if q < bytes.len() && (bytes[q] == b'+' || bytes[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) > 0 {
                p = q;
            }
        }
        self.pos = p;
        let text = &self.src[start..p];
        text.parse::<f64>().map(Tok::Num).map_err(|_| Error::Syntax {
            offset: start,
            expected: vec!["number"],
        })
    }
}

// ---- parser ----------------------------------------------------------------

const ATOM_START: &[&str] = &["number", "s", "pi", "e", "function", "(", "-"];

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

/// Parses generator syntax into an [`Expr`].
pub fn parse(text: &str) -> Result<Expr> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(Error::Syntax {
            offset: p.span().start,
            expected: vec!["operator", "end of input"],
        }),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = *self.peek() {
            self.bump();
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Tok::Op(c @ ('*' | '/')) = *self.peek() {
            self.bump();
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Tok::Op('-') = self.peek() {
            let (_, sp) = self.bump();
            let inner = self.unary()?;
            let span = Span {
                start: sp.start,
                end: inner.span.end,
            };
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Tok::Op('^') = self.peek() {
            self.bump();
            let exp = self.unary()?;
            return Ok(bin(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let (tok, sp) = self.bump();
        match tok {
            Tok::Num(x) => Ok(Expr::new(ExprKind::Num(x), sp)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "s" => Ok(Expr::new(ExprKind::Var, sp)),
                "pi" => Ok(Expr::new(ExprKind::Pi, sp)),
                "e" => Ok(Expr::new(ExprKind::E, sp)),
                _ => {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(Error::UnknownFunction {
                            name,
                            offset: sp.start,
                        });
                    };
                    if *self.peek() != Tok::LParen {
                        return Err(Error::Syntax {
                            offset: self.span().start,
                            expected: vec!["("],
                        });
                    }
                    self.bump();
                    let arg = self.expr()?;
                    let close = self.expect_rparen()?;
                    Ok(Expr::new(
                        ExprKind::Call(func, Box::new(arg)),
                        Span {
                            start: sp.start,
                            end: close.end,
                        },
                    ))
                }
            },
            _ => Err(Error::Syntax {
                offset: sp.start,
                expected: ATOM_START.to_vec(),
            }),
        }
    }

    fn expect_rparen(&mut self) -> Result<Span> {
        if *self.peek() == Tok::RParen {
            Ok(self.bump().1)
        } else {
            Err(Error::Syntax {
                offset: self.span().start,
                expected: vec![")", "operator"],
            })
        }
    }
}

fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
    let span = Span {
        start: a.span.start,
        end: b.span.end,
    };
    Expr::new(ExprKind::Bin(op, Box::new(a), Box::new(b)), span)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(x: f64) -> Expr {
        Expr::new(ExprKind::Num(x), Span::default())
    }
    fn var() -> Expr {
        Expr::new(ExprKind::Var, Span::default())
    }
    fn call(f: Func, a: Expr) -> Expr {
        Expr::new(ExprKind::Call(f, Box::new(a)), Span::default())
    }

    #[test]
    fn parses_cubic() {
        let e = parse("s + s^3").unwrap();
        assert_eq!(e, bin(BinOp::Add, var(), bin(BinOp::Pow, var(), num(3.0))));
    }

    #[test]
    fn parses_cot_example() {
        let e = parse("cot(exp(s)/2)").unwrap();
        let want = call(Func::Cot, bin(BinOp::Div, call(Func::Exp, var()), num(2.0)));
        assert_eq!(e, want);
    }

    #[test]
    fn syntax_error_offset() {
        match parse("s + * 3") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("(s + 1"), Err(Error::Syntax { offset: 6, .. })));
        assert!(matches!(parse("s s"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { offset: 0, .. })));
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(
            parse("sec(s)"),
            Err(Error::UnknownFunction { ref name, offset: 0 }) if name == "sec"
        ));
        assert!(matches!(
            parse("2*x"),
            Err(Error::UnknownFunction { ref name, offset: 2 }) if name == "x"
        ));
    }

    #[test]
    fn unary_minus_is_looser_than_power() {
        let e = parse("-s^2").unwrap();
        let want = Expr::new(
            ExprKind::Neg(Box::new(bin(BinOp::Pow, var(), num(2.0)))),
            Span::default(),
        );
        assert_eq!(e, want);
        assert_eq!(e.eval_real(3.0).unwrap(), -9.0);
        assert_eq!(parse("\u{2212}s^2").unwrap(), want);
    }

    #[test]
    fn power_is_right_associative() {
        let e = parse("2^3^2").unwrap();
        assert_eq!(e.eval_real(0.0).unwrap(), 512.0);
        assert_eq!(parse("2^-1").unwrap().eval_real(0.0).unwrap(), 0.5);
    }

    #[test]
    fn numbers_with_exponents() {
        assert_eq!(parse("1.5e-3").unwrap().eval_real(0.0).unwrap(), 1.5e-3);
        assert_eq!(parse(".25").unwrap().eval_real(0.0).unwrap(), 0.25);
        // `2e` is the number 2 followed by the constant e: no implicit product
        assert!(parse("2e").is_err());
        assert_eq!(
            parse("2*e").unwrap().eval_real(0.0).unwrap(),
            2.0 * std::f64::consts::E
        );
    }

    #[test]
    fn eval_cubic_jet() {
        let e = parse("s + s^3").unwrap();
        let j = e.eval_jet(1.0, 1).unwrap();
        assert_eq!(j.derivatives(), vec![2.0, 4.0]);
    }

    #[test]
    fn eval_tanh_jet() {
        let j = parse("tanh(s)").unwrap().eval_jet(0.0, 3).unwrap();
        let d = j.derivatives();
        assert!(d[0].abs() < 1e-15 && (d[1] - 1.0).abs() < 1e-15);
        assert!(d[2].abs() < 1e-15 && (d[3] + 2.0).abs() < 1e-14);
    }

    #[test]
    fn domain_error_points_at_node() {
        let src = "1 + log(s)";
        let e = parse(src).unwrap();
        match e.eval_jet(-1.0, 3) {
            Err(Error::DomainAt { func, span, .. }) => {
                assert_eq!(func, "log");
                assert_eq!(&src[span.start..span.end], "log(s)");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            e.eval_real(-1.0),
            Err(Error::DomainAt { func: "log", .. })
        ));
    }

    #[test]
    fn display_reparses() {
        for src in [
            "s + s^3",
            "cot(exp(s)/2)",
            "-s^2*3 - 2/(1+s)",
            "tanh(s)^-1.5e-3",
            "pi*e",
        ] {
            let e = parse(src).unwrap();
            let again = parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{src} -> {e}");
        }
    }

    #[test]
    fn variable_exponent() {
        let e = parse("s^s").unwrap();
        let j = e.eval_jet(2.0, 2).unwrap();
        // d/ds s^s = s^s (ln s + 1)
        assert!((j.derivative(1) - 4.0 * (2f64.ln() + 1.0)).abs() < 1e-12);
    }
}
