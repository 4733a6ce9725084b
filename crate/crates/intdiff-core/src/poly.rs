//! The polynomial module in the divided-power basis.
//!
//! On `x^[k] = x^k / k!` differentiation and integration act as unit
//! shifts, the Euler operator acts diagonally with eigenvalue k + 1, and
//! matrix units act as their name says. This module is the ground-truth
//! oracle: two operators are equal iff they act identically on a window
//! whose size is computable from their supports.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::algebra::{Factor, Operator};
use crate::scalar::{format_scalar, int_pow, parse_scalar, Scalar};

/// A polynomial in the divided-power basis: a sparse map from multi-indices
/// to rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DividedPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl DividedPoly {
    pub fn zero(n: usize) -> Self {
        DividedPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(vec![0; n], Scalar::from_integer(1.into()))
    }

    /// The basis element x^[alpha].
    pub fn x_pow(alpha: Vec<u32>) -> Self {
        Self::monomial(alpha, Scalar::from_integer(1.into()))
    }

    pub fn monomial(alpha: Vec<u32>, c: Scalar) -> Self {
        assert!(!alpha.is_empty());
        let n = alpha.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(alpha, c);
        }
        DividedPoly { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &[u32]) -> Scalar {
        self.terms.get(alpha).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms = self.terms.clone();
        for (a, c) in &other.terms {
            add_term(&mut terms, a.clone(), c.clone());
        }
        DividedPoly { n: self.n, terms }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        DividedPoly {
            n: self.n,
            terms: self.terms.iter().map(|(a, v)| (a.clone(), v * c)).collect(),
        }
    }

    /// Largest index in any slot.
    pub fn max_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|a| a.iter().copied())
            .max()
            .unwrap_or(0)
    }
}

fn add_term(terms: &mut BTreeMap<Vec<u32>, Scalar>, a: Vec<u32>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.entry(a) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// One slot factor applied to one divided-power index: the resulting index
/// and scalar, or `None` when the action kills it.
fn act_factor(f: &Factor, k: u32) -> Option<(u32, Scalar)> {
    match *f {
        Factor::Band { h_pow, shift } => {
            let k2 = k as i64 + shift;
            if k2 < 0 {
                None
            } else {
                Some((k2 as u32, int_pow(k2 + 1, h_pow)))
            }
        }
        Factor::Matrix { row, col } => (col == k).then(|| (row, Scalar::from_integer(1.into()))),
    }
}

/// The module action of an operator on a divided-power polynomial.
pub fn apply(op: &Operator, p: &DividedPoly) -> DividedPoly {
    assert_eq!(op.n(), p.n, "dimension mismatch");
    let mut terms = BTreeMap::new();
    for (m, c) in op.terms() {
        for (alpha, v) in &p.terms {
            let mut out_alpha = Vec::with_capacity(p.n);
            let mut coeff = c * v;
            let mut dead = false;
            for (f, &k) in m.factors().iter().zip(alpha) {
                match act_factor(f, k) {
                    Some((k2, s)) => {
                        out_alpha.push(k2);
                        coeff *= s;
                    }
                    None => {
                        dead = true;
                        break;
                    }
                }
            }
            if !dead {
                add_term(&mut terms, out_alpha, coeff);
            }
        }
    }
    DividedPoly { n: p.n, terms }
}

/// The matrix of an operator on the window of divided powers with all
/// indices below `bound`, with columns that leak outside the window
/// flagged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedMatrix {
    n: usize,
    bound: u32,
    dim: usize,
    entries: Vec<Vec<Scalar>>,
    escaped: Vec<bool>,
}

impl TruncatedMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row][col]
    }

    /// True when the column's image left the window.
    pub fn column_escaped(&self, col: usize) -> bool {
        self.escaped[col]
    }

    pub fn is_transpose_of(&self, other: &Self) -> bool {
        self.dim == other.dim
            && (0..self.dim)
                .all(|r| (0..self.dim).all(|c| self.entries[r][c] == other.entries[c][r]))
    }

    /// Rank of the multi-index in the lexicographic enumeration of the
    /// window.
    pub fn index_of(&self, alpha: &[u32]) -> usize {
        alpha
            .iter()
            .fold(0usize, |acc, &a| acc * self.bound as usize + a as usize)
    }
}

pub fn truncated_matrix(op: &Operator, bound: u32) -> TruncatedMatrix {
    assert!(bound >= 1);
    let n = op.n();
    let dim = (bound as usize).pow(n as u32);
    let mut entries = vec![vec![Scalar::zero(); dim]; dim];
    let mut escaped = vec![false; dim];
    let mut alpha = vec![0u32; n];
    for col in 0..dim {
        let image = apply(op, &DividedPoly::x_pow(alpha.clone()));
        for (beta, c) in image.terms() {
            if beta.iter().all(|&b| b < bound) {
                let row = beta
                    .iter()
                    .fold(0usize, |acc, &b| acc * bound as usize + b as usize);
                entries[row][col] = c.clone();
            } else {
                escaped[col] = true;
            }
        }
        // advance lexicographically
        for slot in (0..n).rev() {
            alpha[slot] += 1;
            if alpha[slot] < bound {
                break;
            }
            alpha[slot] = 0;
        }
    }
    TruncatedMatrix { n, bound, dim, entries, escaped }
}

/// True iff the two operators act identically on every divided power with
/// all indices below `bound`.
pub fn agree_on_window(a: &Operator, b: &Operator, bound: u32) -> bool {
    assert_eq!(a.n(), b.n(), "dimension mismatch");
    let n = a.n();
    let dim = (bound as usize).pow(n as u32);
    let mut alpha = vec![0u32; n];
    for _ in 0..dim {
        let p = DividedPoly::x_pow(alpha.clone());
        if apply(a, &p) != apply(b, &p) {
            return false;
        }
        for slot in (0..n).rev() {
            alpha[slot] += 1;
            if alpha[slot] < bound {
                break;
            }
            alpha[slot] = 0;
        }
    }
    true
}

/// A window bound on which any nonzero element with the supports of `ops`
/// is guaranteed to act nontrivially: matrix indices + |shifts| + H-powers
/// + 1.
pub fn faithful_window_bound(ops: &[&Operator]) -> u32 {
    let d = ops
        .iter()
        .filter_map(|o| o.max_matrix_index())
        .max()
        .map_or(0, |v| v + 1);
    let s = ops.iter().map(|o| o.max_abs_shift()).max().unwrap_or(0) as u32;
    let h = ops.iter().map(|o| o.max_h_pow()).max().unwrap_or(0);
    d + s + h + 1
}

impl fmt::Display for DividedPoly {
    /// Terms joined by `" + "`, each `c * x1^[a1] x2^[a2] …` with zero
    /// exponents omitted; the constant monomial prints as the coefficient.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(alpha, c)| {
                let factors: Vec<String> = alpha
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(i, &a)| format!("x{}^[{}]", i + 1, a))
                    .collect();
                if factors.is_empty() {
                    format_scalar(c)
                } else {
                    format!("{} * {}", format_scalar(c), factors.join(" "))
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct PolyParseError(pub String);

impl fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse polynomial: {}", self.0)
    }
}

impl std::error::Error for PolyParseError {}

/// Parses the display form; the dimension cannot be recovered from text
/// that omits zero exponents, so it is supplied by the caller.
pub fn parse_poly(text: &str, n: usize) -> Result<DividedPoly, PolyParseError> {
    let text = text.trim();
    if text == "0" {
        return Ok(DividedPoly::zero(n));
    }
    let mut out = DividedPoly::zero(n);
    for (idx, raw_term) in text.split('+').enumerate() {
        let term = raw_term.trim();
        if term.is_empty() {
            return Err(PolyParseError(format!("empty term #{idx}")));
        }
        let (coeff_text, monos) = match term.split_once('*') {
            Some((c, m)) => (c.trim(), m.trim()),
            None => {
                if term.starts_with('x') {
                    ("1", term)
                } else {
                    (term, "")
                }
            }
        };
        let c = parse_scalar(coeff_text)
            .ok_or_else(|| PolyParseError(format!("bad coefficient {coeff_text:?}")))?;
        let mut alpha = vec![0u32; n];
        for piece in monos.split_whitespace() {
            let rest = piece
                .strip_prefix('x')
                .ok_or_else(|| PolyParseError(format!("expected x factor, got {piece:?}")))?;
            let (slot_text, exp_text) = rest
                .split_once("^[")
                .ok_or_else(|| PolyParseError(format!("expected ^[..] in {piece:?}")))?;
            let exp_text = exp_text
                .strip_suffix(']')
                .ok_or_else(|| PolyParseError(format!("unclosed exponent in {piece:?}")))?;
            let slot: usize = slot_text
                .parse()
                .map_err(|_| PolyParseError(format!("bad slot in {piece:?}")))?;
            if slot == 0 || slot > n {
                return Err(PolyParseError(format!("slot {slot} out of range for n = {n}")));
            }
            let exp: u32 = exp_text
                .parse()
                .map_err(|_| PolyParseError(format!("bad exponent in {piece:?}")))?;
            alpha[slot - 1] = exp;
        }
        out = out.add(&DividedPoly::monomial(alpha, c));
    }
    Ok(out)
}

impl FromStr for DividedPoly {
    type Err = PolyParseError;
    /// Parses with the dimension inferred as the largest slot mentioned
    /// (at least 1).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut n = 1;
        let bytes = s.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            if b == b'x' {
                let digits: String = s[i + 1..].chars().take_while(|c| c.is_ascii_digit()).collect();
                if let Ok(v) = digits.parse::<usize>() {
                    n = n.max(v);
                }
            }
        }
        parse_poly(s, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn action_examples() {
        let n1 = 1;
        let d = Operator::deriv(1, n1);
        assert!(apply(&d, &DividedPoly::one(n1)).is_zero());
        let e23 = Operator::matrix_unit(0, n1, 2, 3);
        assert_eq!(apply(&e23, &DividedPoly::x_pow(vec![3])), DividedPoly::x_pow(vec![2]));
        assert!(apply(&e23, &DividedPoly::x_pow(vec![4])).is_zero());
        let h = Operator::euler(1, n1);
        assert_eq!(
            apply(&h, &DividedPoly::x_pow(vec![5])),
            DividedPoly::x_pow(vec![5]).scale(&int(6))
        );
        // the coordinate operator multiplies by x: x * x^[k] = (k+1) x^[k+1]
        let x = Operator::coord(1, n1);
        assert_eq!(
            apply(&x, &DividedPoly::x_pow(vec![2])),
            DividedPoly::x_pow(vec![3]).scale(&int(3))
        );
    }

    #[test]
    fn tensor_action() {
        let a = &Operator::deriv(1, 2) * &Operator::integ(2, 2);
        let p = DividedPoly::x_pow(vec![2, 0]);
        assert_eq!(apply(&a, &p), DividedPoly::x_pow(vec![1, 1]));
    }

    #[test]
    fn truncation() {
        let e00 = Operator::matrix_unit(0, 1, 0, 0);
        let m = truncated_matrix(&e00, 3);
        assert_eq!(m.dim(), 3);
        assert_eq!(*m.entry(0, 0), int(1));
        assert_eq!(*m.entry(1, 1), int(0));
        assert!(!m.column_escaped(0));

        let id = truncated_matrix(&Operator::one(1), 4);
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(*id.entry(r, c), int(if r == c { 1 } else { 0 }));
            }
        }

        let d = truncated_matrix(&Operator::deriv(1, 1), 3);
        for c in 1..3 {
            assert_eq!(*d.entry(c - 1, c), int(1));
        }
        assert_eq!(*d.entry(0, 0), int(0));

        // integration pushes the top column out of the window
        let i = truncated_matrix(&Operator::integ(1, 1), 3);
        assert!(i.column_escaped(2));
        assert!(!i.column_escaped(0));
    }

    #[test]
    fn star_is_transpose_on_matrix_units() {
        for r in 0..3 {
            for c in 0..3 {
                let e = Operator::matrix_unit(0, 1, r, c);
                let m = truncated_matrix(&e, 4);
                let mt = truncated_matrix(&e.star(), 4);
                assert!(m.is_transpose_of(&mt));
            }
        }
    }

    #[test]
    fn window_agreement() {
        let lhs = &Operator::integ(1, 1) * &Operator::deriv(1, 1);
        let rhs = &Operator::one(1) - &Operator::matrix_unit(0, 1, 0, 0);
        assert!(agree_on_window(&lhs, &rhs, 6));
        let lhs = &Operator::deriv(1, 1) * &Operator::integ(1, 1);
        assert!(agree_on_window(&lhs, &Operator::one(1), 6));
        let h = Operator::euler(1, 1);
        let h_plus = &h + &Operator::matrix_unit(0, 1, 0, 0);
        assert!(!agree_on_window(&h, &h_plus, 1));
    }

    #[test]
    fn faithfulness_bound() {
        // every nonzero element within the bandwidth acts nontrivially
        // somewhere inside the computed window
        let n = 1;
        let mut candidates = Vec::new();
        for b in 0..2u32 {
            for a in -2i64..=2 {
                candidates.push(Operator::slot_factor(0, n, Factor::Band { h_pow: b, shift: a }));
            }
        }
        for r in 0..2 {
            for c in 0..2 {
                candidates.push(Operator::matrix_unit(0, n, r, c));
            }
        }
        for x in &candidates {
            for y in &candidates {
                let a = x - &y.scale(&int(3));
                if a.is_zero() {
                    continue;
                }
                let bound = faithful_window_bound(&[&a]);
                let mut hit = false;
                for k in 0..bound {
                    if !apply(&a, &DividedPoly::x_pow(vec![k])).is_zero() {
                        hit = true;
                        break;
                    }
                }
                assert!(hit, "element {a} invisible below {bound}");
            }
        }
    }

    #[test]
    fn display_and_parse() {
        let p = DividedPoly::monomial(vec![2, 0], int(3))
            .add(&DividedPoly::monomial(vec![0, 1], crate::scalar::ratio(1, 2)));
        let text = p.to_string();
        assert_eq!(text, "1/2 * x2^[1] + 3 * x1^[2]");
        assert_eq!(parse_poly(&text, 2).unwrap(), p);
        assert_eq!(parse_poly("0", 2).unwrap(), DividedPoly::zero(2));
        assert_eq!(parse_poly("7", 1).unwrap(), DividedPoly::one(1).scale(&int(7)));
        assert_eq!(
            parse_poly("x1^[3]", 1).unwrap(),
            DividedPoly::x_pow(vec![3])
        );
        assert!(parse_poly("x9^[1]", 2).is_err());
        assert!(parse_poly("x1^[oops]", 1).is_err());
    }
}
