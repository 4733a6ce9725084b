//! Expression parser for operator input.
//!
//! Surface syntax: scalar literals as reduced fractions, indexed
//! generators `D1 I2 H3 X1 e1[r,c]`, the operators `+ - * ^` with `^` the
//! tightest and `*` noncommutative, parentheses, and positional monomials
//! whose unindexed slot factors (`H^b`, `H^b I^a`, `H^b D^a`, `e[r,c]`,
//! `1`) are joined by `⊗`. `∂` and `∫` are accepted as aliases for `D`
//! and `I`. Exponents are nonnegative integer literals; juxtaposition is
//! not multiplication.

use std::fmt;

use intdiff_core::algebra::{Factor, Gen, Monomial, Operator};
use intdiff_core::scalar::{int, parse_scalar, Scalar};

#[derive(Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax { offset: usize, message: String },
    IndexOutOfRange { offset: usize, slot: usize, n: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { offset, message } => {
                write!(f, "syntax error at byte {offset}: {message}")
            }
            ParseError::IndexOutOfRange { offset, slot, n } => {
                write!(f, "slot index {slot} out of range for n = {n} at byte {offset}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

/// Abstract syntax of an operator expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Number(Scalar),
    Generator(Gen, usize),
    MatrixUnit { slot: usize, row: u32, col: u32 },
    /// A positional monomial with one factor per slot.
    Monomial(Vec<Factor>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Letter(char),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Tensor,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    offset: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(offset, c)) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Spanned { tok: Tok::Int(digits), offset });
            }
            'D' | 'I' | 'H' | 'X' | 'e' => {
                chars.next();
                out.push(Spanned { tok: Tok::Letter(c), offset });
            }
            '\u{2202}' => {
                // ∂
                chars.next();
                out.push(Spanned { tok: Tok::Letter('D'), offset });
            }
            '\u{222B}' => {
                // ∫
                chars.next();
                out.push(Spanned { tok: Tok::Letter('I'), offset });
            }
            '+' => {
                chars.next();
                out.push(Spanned { tok: Tok::Plus, offset });
            }
            '-' => {
                chars.next();
                out.push(Spanned { tok: Tok::Minus, offset });
            }
            '*' => {
                chars.next();
                out.push(Spanned { tok: Tok::Star, offset });
            }
            '^' => {
                chars.next();
                out.push(Spanned { tok: Tok::Caret, offset });
            }
            '/' => {
                chars.next();
                out.push(Spanned { tok: Tok::Slash, offset });
            }
            '(' => {
                chars.next();
                out.push(Spanned { tok: Tok::LParen, offset });
            }
            ')' => {
                chars.next();
                out.push(Spanned { tok: Tok::RParen, offset });
            }
            '[' => {
                chars.next();
                out.push(Spanned { tok: Tok::LBracket, offset });
            }
            ']' => {
                chars.next();
                out.push(Spanned { tok: Tok::RBracket, offset });
            }
            ',' => {
                chars.next();
                out.push(Spanned { tok: Tok::Comma, offset });
            }
            '\u{2297}' => {
                // ⊗
                chars.next();
                out.push(Spanned { tok: Tok::Tensor, offset });
            }
            other => {
                return Err(ParseError::Syntax {
                    offset,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    n: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|s| &s.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |s| s.offset)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { offset: self.offset(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.syntax(format!("expected {what}"))
        }
    }

    fn nat(&mut self, what: &str) -> Result<u32, ParseError> {
        match self.peek() {
            Some(Tok::Int(d)) => {
                let v = d
                    .parse::<u32>()
                    .map_err(|_| ParseError::Syntax {
                        offset: self.offset(),
                        message: format!("{what} too large"),
                    })?;
                self.pos += 1;
                Ok(v)
            }
            _ => self.syntax(format!("expected {what}")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.exponent()?;
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        match self.peek() {
            Some(Tok::Int(_)) => self.nat("exponent"),
            Some(Tok::LParen) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Minus) {
                    return self.syntax("negative powers are not defined here");
                }
                let v = self.nat("exponent")?;
                self.expect(Tok::RParen, "')' after exponent")?;
                Ok(v)
            }
            Some(Tok::Minus) => self.syntax("negative powers are not defined here"),
            _ => self.syntax("expected exponent"),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Int(_)) => {
                // a scalar literal, or the identity slot of a positional
                // monomial when followed by the tensor sign
                if self.peek2() == Some(&Tok::Tensor) {
                    return self.positional();
                }
                let start = self.offset();
                let num = self.digits()?;
                let text = if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let den = self.digits()?;
                    format!("{num}/{den}")
                } else {
                    num
                };
                match parse_scalar(&text) {
                    Some(v) => Ok(Expr::Number(v)),
                    None => Err(ParseError::Syntax {
                        offset: start,
                        message: format!("bad scalar literal {text:?}"),
                    }),
                }
            }
            Some(Tok::Letter(c)) => {
                let c = *c;
                match self.peek2() {
                    // an index digit directly after the letter: D1, e2[..]
                    Some(Tok::Int(_)) => self.indexed_generator(c),
                    _ => self.positional(),
                }
            }
            _ => self.syntax("expected a number, generator, or parenthesized expression"),
        }
    }

    fn digits(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Int(d)) => {
                let v = d.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => self.syntax("expected an integer"),
        }
    }

    fn slot_index(&mut self) -> Result<usize, ParseError> {
        let offset = self.offset();
        let v = self.nat("slot index")? as usize;
        if v == 0 || v > self.n {
            return Err(ParseError::IndexOutOfRange { offset, slot: v, n: self.n });
        }
        Ok(v)
    }

    fn indexed_generator(&mut self, letter: char) -> Result<Expr, ParseError> {
        self.pos += 1; // the letter
        let slot = self.slot_index()?;
        match letter {
            'D' => Ok(Expr::Generator(Gen::Deriv, slot)),
            'I' => Ok(Expr::Generator(Gen::Integ, slot)),
            'H' => Ok(Expr::Generator(Gen::Euler, slot)),
            'X' => Ok(Expr::Generator(Gen::Coord, slot)),
            'e' => {
                self.expect(Tok::LBracket, "'[' after e")?;
                let row = self.nat("row index")?;
                self.expect(Tok::Comma, "',' between indices")?;
                let col = self.nat("column index")?;
                self.expect(Tok::RBracket, "']'")?;
                Ok(Expr::MatrixUnit { slot, row, col })
            }
            _ => unreachable!(),
        }
    }

    /// A positional monomial: slot factors joined by the tensor sign; the
    /// number of factors must equal n.
    fn positional(&mut self) -> Result<Expr, ParseError> {
        let start = self.offset();
        let mut factors = vec![self.slot_factor()?];
        while self.peek() == Some(&Tok::Tensor) {
            self.pos += 1;
            factors.push(self.slot_factor()?);
        }
        if factors.len() != self.n {
            return Err(ParseError::Syntax {
                offset: start,
                message: format!("positional monomial has {} slots, expected {}", factors.len(), self.n),
            });
        }
        Ok(Expr::Monomial(factors))
    }

    fn slot_factor(&mut self) -> Result<Factor, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(d)) if d == "1" => {
                self.pos += 1;
                Ok(Factor::ONE)
            }
            Some(Tok::Letter('e')) => {
                self.pos += 1;
                self.expect(Tok::LBracket, "'[' after e")?;
                let row = self.nat("row index")?;
                self.expect(Tok::Comma, "',' between indices")?;
                let col = self.nat("column index")?;
                self.expect(Tok::RBracket, "']'")?;
                Ok(Factor::Matrix { row, col })
            }
            Some(Tok::Letter('H')) => {
                self.pos += 1;
                let h_pow = self.optional_power()?;
                // an adjacent unindexed shift belongs to the same slot
                match self.peek() {
                    Some(Tok::Letter(c @ ('I' | 'D')))
                        if !matches!(self.peek2(), Some(Tok::Int(_))) =>
                    {
                        let c = *c;
                        self.pos += 1;
                        let a = self.optional_power()? as i64;
                        let shift = if c == 'I' { a } else { -a };
                        Ok(Factor::Band { h_pow, shift })
                    }
                    _ => Ok(Factor::Band { h_pow, shift: 0 }),
                }
            }
            Some(Tok::Letter(c @ ('I' | 'D'))) => {
                self.pos += 1;
                let a = self.optional_power()? as i64;
                Ok(Factor::Band { h_pow: 0, shift: if c == 'I' { a } else { -a } })
            }
            _ => self.syntax("expected a slot factor (1, H^b, I^a, D^a, or e[r,c])"),
        }
    }

    /// `^nat` if present, else exponent 1.
    fn optional_power(&mut self) -> Result<u32, ParseError> {
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            self.nat("exponent")
        } else {
            Ok(1)
        }
    }
}

/// Parses an expression over n slots.
pub fn parse(text: &str, n: usize) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, n, end: text.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.syntax("unexpected trailing input");
    }
    Ok(e)
}

/// Evaluates an expression to a normal-form operator.
pub fn evaluate(expr: &Expr, n: usize) -> Operator {
    match expr {
        Expr::Number(c) => Operator::from_scalar(n, c.clone()),
        Expr::Generator(kind, slot) => {
            Operator::generator(*kind, *slot, n).expect("slot validated during parsing")
        }
        Expr::MatrixUnit { slot, row, col } => Operator::matrix_unit(slot - 1, n, *row, *col),
        Expr::Monomial(factors) => {
            Operator::single(n, Monomial::new(factors.clone()), int(1))
        }
        Expr::Neg(inner) => -&evaluate(inner, n),
        Expr::Add(a, b) => &evaluate(a, n) + &evaluate(b, n),
        Expr::Sub(a, b) => &evaluate(a, n) - &evaluate(b, n),
        Expr::Mul(a, b) => &evaluate(a, n) * &evaluate(b, n),
        Expr::Pow(a, e) => evaluate(a, n).pow(*e),
    }
}

/// Parse and evaluate in one step.
pub fn parse_operator(text: &str, n: usize) -> Result<Operator, ParseError> {
    Ok(evaluate(&parse(text, n)?, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use intdiff_core::scalar::ratio;

    #[test]
    fn products_and_sums() {
        let e = parse_operator("D1*I1", 1).unwrap();
        assert_eq!(e, Operator::one(1));
        let e = parse_operator("I1*D1 + e1[0,0]", 1).unwrap();
        assert_eq!(e, Operator::one(1));
        let e = parse_operator("H1*(1 - I1*D1)", 1).unwrap();
        assert_eq!(e, Operator::matrix_unit(0, 1, 0, 0));
    }

    #[test]
    fn negative_power_is_rejected() {
        let err = parse("D1^(-1)", 1).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn coordinate_generator() {
        let e = parse_operator("X1", 1).unwrap();
        assert_eq!(e, Operator::coord(1, 1));
    }

    #[test]
    fn index_bounds() {
        assert!(matches!(
            parse("D3", 2),
            Err(ParseError::IndexOutOfRange { slot: 3, n: 2, .. })
        ));
        assert!(matches!(parse("H0", 1), Err(ParseError::IndexOutOfRange { .. })));
    }

    #[test]
    fn juxtaposition_is_rejected() {
        assert!(parse("D1 I1", 1).is_err());
        assert!(parse("2 D1", 1).is_err());
    }

    #[test]
    fn scalars() {
        assert_eq!(parse_operator("3/4", 1).unwrap(), Operator::from_scalar(1, ratio(3, 4)));
        assert_eq!(parse_operator("0", 2).unwrap(), Operator::zero(2));
        assert_eq!(parse_operator("-2", 1).unwrap(), Operator::from_scalar(1, int(-2)));
        assert!(parse("1/0", 1).is_err());
    }

    #[test]
    fn positional_monomials() {
        let e = parse_operator("H^2 I^3", 1).unwrap();
        assert_eq!(
            e,
            Operator::slot_factor(0, 1, Factor::Band { h_pow: 2, shift: 3 })
        );
        let e = parse_operator("1\u{2297}e[0,1]", 2).unwrap();
        assert_eq!(e, Operator::matrix_unit(1, 2, 0, 1));
        let e = parse_operator("H\u{2297}D^2", 2).unwrap();
        let expected = &Operator::euler(1, 2) * &Operator::deriv(2, 2).pow(2);
        assert_eq!(e, expected);
        // arity must match
        assert!(parse("H^1", 2).is_err());
        assert!(parse("H\u{2297}H\u{2297}H", 2).is_err());
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(
            parse_operator("\u{2202}1*\u{222B}1", 1).unwrap(),
            Operator::one(1)
        );
    }

    #[test]
    fn print_parse_fixpoint() {
        let samples = [
            "0",
            "1",
            "D1*I1 + 2*e1[0,0]",
            "H1^3*I1 - 1/2*D1^2",
            "e1[2,0]*e1[0,5] + 7/3",
            "X1*X1 - H1",
        ];
        for s in samples {
            let a = parse_operator(s, 1).unwrap();
            let printed = a.to_string();
            let b = parse_operator(&printed, 1).unwrap();
            assert_eq!(a, b, "fixpoint failed for {s} -> {printed}");
            assert_eq!(printed, b.to_string());
        }
        let two_slot = parse_operator("D1*I2 + e1[0,0]*e2[1,1] - 5/2", 2).unwrap();
        let printed = two_slot.to_string();
        assert_eq!(parse_operator(&printed, 2).unwrap(), two_slot);
    }

    #[test]
    fn error_offsets_point_into_the_text() {
        let err = parse("D1 + $", 1).unwrap_err();
        match err {
            ParseError::Syntax { offset, .. } => assert_eq!(offset, 5),
            other => panic!("unexpected {other:?}"),
        }
    }
}
