//! Normal-form arithmetic for the algebra of polynomial
//! integro-differential operators on n variables.
//!
//! Each tensor slot carries a factor from the canonical basis
//! `{H^b I^a, H^b D^a, H^b, e[i,j]}` with the Euler operator H written to
//! the left of the shift. Elements are sparse rational combinations of
//! such tensor monomials; every product is rewritten back into the basis
//! through the rules
//!
//! ```text
//!   D I = 1,              I^a D^c = v_{a-c} - sum_{t=1..min(a,c)} e[a-t, c-t],
//!   I H = (H - 1) I,      D H = (H + 1) D,
//!   H e[i,j] = (i+1) e[i,j],   e[i,j] H = (j+1) e[i,j],
//!   I e[i,j] = e[i+1,j],   e[i,j] I = e[i,j-1],
//!   D e[i,j] = e[i-1,j],   e[i,j] D = e[i,j+1],
//!   e[i,j] e[k,l] = delta_jk e[i,l],
//! ```
//!
//! where `v_k` is `I^k`, `1`, or `D^-k` according to the sign of `k`, and
//! matrix units with a negative index vanish.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ideal::IdealDescriptor;
use crate::scalar::{format_scalar, int_pow, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("slot {0} out of range for n = {1}")]
    SlotOutOfRange(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UnitError {
    #[error("element is not of the form c(1 + f) with f supported on matrix units in every slot")]
    NotFiniteUnitShape,
    #[error("the finite matrix block is singular; the element is not a unit")]
    SingularBlock,
}

/// One tensor-slot factor of a canonical basis monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    /// `H^h_pow` followed by `I^shift` (shift > 0), `D^-shift` (shift < 0),
    /// or nothing (shift = 0).
    Band { h_pow: u32, shift: i64 },
    /// Matrix unit `e[row, col]`.
    Matrix { row: u32, col: u32 },
}

impl Factor {
    pub const ONE: Factor = Factor::Band { h_pow: 0, shift: 0 };

    fn degree(&self) -> i64 {
        match *self {
            Factor::Band { shift, .. } => shift,
            Factor::Matrix { row, col } => row as i64 - col as i64,
        }
    }
}

/// A canonical basis monomial: one factor per tensor slot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<Factor>);

impl Monomial {
    pub fn new(factors: Vec<Factor>) -> Self {
        Monomial(factors)
    }

    pub fn identity(n: usize) -> Self {
        Monomial(vec![Factor::ONE; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|f| *f == Factor::ONE)
    }

    /// Slots whose factor is a matrix unit.
    pub fn matrix_slots(&self) -> BTreeSet<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, f)| matches!(f, Factor::Matrix { .. }))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn degree(&self) -> Vec<i64> {
        self.0.iter().map(Factor::degree).collect()
    }
}

/// Which generator to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    Deriv,
    Integ,
    Euler,
    Coord,
}

/// A sparse exact-rational combination of canonical basis monomials.
///
/// No zero coefficients are stored, so structural equality is equality in
/// the algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operator {
    n: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Operator {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "need at least one slot");
        Operator { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::from_scalar(n, Scalar::one())
    }

    pub fn from_scalar(n: usize, c: Scalar) -> Self {
        Self::single(n, Monomial::identity(n), c)
    }

    pub fn single(n: usize, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.n(), n, "monomial has wrong number of slots");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Operator { n, terms }
    }

    /// A single-slot factor placed at `slot` (0-based), identity elsewhere.
    pub fn slot_factor(slot: usize, n: usize, f: Factor) -> Self {
        assert!(slot < n, "slot out of range");
        let mut factors = vec![Factor::ONE; n];
        factors[slot] = f;
        Self::single(n, Monomial(factors), Scalar::one())
    }

    /// The generator of the requested kind at a 1-based slot.
    pub fn generator(kind: Gen, slot: usize, n: usize) -> Result<Self, AlgebraError> {
        if slot == 0 || slot > n {
            return Err(AlgebraError::SlotOutOfRange(slot, n));
        }
        let i = slot - 1;
        Ok(match kind {
            Gen::Deriv => Self::slot_factor(i, n, Factor::Band { h_pow: 0, shift: -1 }),
            Gen::Integ => Self::slot_factor(i, n, Factor::Band { h_pow: 0, shift: 1 }),
            Gen::Euler => Self::slot_factor(i, n, Factor::Band { h_pow: 1, shift: 0 }),
            // the coordinate operator is integration after H; in normal form
            // I H = (H - 1) I
            Gen::Coord => {
                &Self::slot_factor(i, n, Factor::Band { h_pow: 1, shift: 1 })
                    - &Self::slot_factor(i, n, Factor::Band { h_pow: 0, shift: 1 })
            }
        })
    }

    pub fn deriv(slot: usize, n: usize) -> Self {
        Self::generator(Gen::Deriv, slot, n).expect("slot in range")
    }

    pub fn integ(slot: usize, n: usize) -> Self {
        Self::generator(Gen::Integ, slot, n).expect("slot in range")
    }

    pub fn euler(slot: usize, n: usize) -> Self {
        Self::generator(Gen::Euler, slot, n).expect("slot in range")
    }

    pub fn coord(slot: usize, n: usize) -> Self {
        Self::generator(Gen::Coord, slot, n).expect("slot in range")
    }

    /// The matrix unit e[row, col] in a 0-based slot.
    pub fn matrix_unit(slot: usize, n: usize, row: u32, col: u32) -> Self {
        Self::slot_factor(slot, n, Factor::Matrix { row, col })
    }

    /// The multi-index matrix unit with the given rows and columns.
    pub fn matrix_unit_multi(rows: &[u32], cols: &[u32]) -> Self {
        assert_eq!(rows.len(), cols.len());
        let n = rows.len();
        let factors = rows
            .iter()
            .zip(cols)
            .map(|(&row, &col)| Factor::Matrix { row, col })
            .collect();
        Self::single(n, Monomial(factors), Scalar::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub(crate) fn from_map(n: usize, terms: BTreeMap<Monomial, Scalar>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Operator { n, terms }
    }

    pub(crate) fn add_term(terms: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = terms.entry(m);
        match entry {
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

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Operator {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Coefficient-wise combination `sum coeffs[k] * elems[k]`.
    pub fn linear_combine(coeffs: &[Scalar], elems: &[Operator]) -> Result<Self, AlgebraError> {
        assert_eq!(coeffs.len(), elems.len(), "length mismatch");
        assert!(!elems.is_empty(), "empty combination has no dimension");
        let n = elems[0].n;
        let mut terms = BTreeMap::new();
        for (c, e) in coeffs.iter().zip(elems) {
            if e.n != n {
                return Err(AlgebraError::DimensionMismatch(n, e.n));
            }
            for (m, v) in &e.terms {
                Self::add_term(&mut terms, m.clone(), c * v);
            }
        }
        Ok(Self::from_map(n, terms))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.n);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// The involution exchanging differentiation and integration; it is an
    /// anti-automorphism of order two fixing H.
    pub fn star(&self) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let per_slot: Vec<Vec<(Scalar, Factor)>> =
                m.0.iter().map(star_factor).collect();
            accumulate_products(&mut terms, c.clone(), &per_slot);
        }
        Self::from_map(self.n, terms)
    }

    /// Splits into graded components keyed by the shift-degree vector.
    pub fn graded_components(&self) -> BTreeMap<Vec<i64>, Operator> {
        let mut out: BTreeMap<Vec<i64>, Operator> = BTreeMap::new();
        for (m, c) in &self.terms {
            let slot = out
                .entry(m.degree())
                .or_insert_with(|| Operator::zero(self.n));
            slot.terms.insert(m.clone(), c.clone());
        }
        out
    }

    /// True when every basis monomial of the element lies in the ideal.
    pub fn is_in_ideal(&self, ideal: &IdealDescriptor) -> bool {
        assert_eq!(self.n, ideal.n(), "dimension mismatch");
        if ideal.is_whole() {
            return true;
        }
        if ideal.is_zero() {
            return self.is_zero();
        }
        let min = ideal.min_primes().expect("proper ideal");
        self.terms.keys().all(|m| {
            let slots = m.matrix_slots();
            min.iter().all(|prime| prime.iter().any(|i| slots.contains(i)))
        })
    }

    /// The two-sided ideal generated by this element: the sum, over its
    /// basis monomials, of the ideal cut out by each monomial's matrix
    /// slots.
    pub fn generated_ideal(&self) -> IdealDescriptor {
        let mut acc = IdealDescriptor::zero(self.n);
        for m in self.terms.keys() {
            let slots = m.matrix_slots();
            if slots.is_empty() {
                return IdealDescriptor::whole(self.n);
            }
            let mut part = IdealDescriptor::whole(self.n);
            for i in slots {
                part = part.product(&IdealDescriptor::prime([i], self.n).expect("valid slot"));
            }
            acc = acc.sum(&part);
        }
        acc
    }

    /// Inverts `c(1 + f)` where every monomial of `f` is a matrix unit in
    /// every slot, by inverting the finite matrix block.
    pub fn try_invert_finite_unit(&self) -> Result<Self, UnitError> {
        let id = Monomial::identity(self.n);
        let c = self.coeff(&id);
        if c.is_zero() {
            return Err(UnitError::NotFiniteUnitShape);
        }
        // collect the matrix part of (1/c) * self - 1
        let mut entries: BTreeMap<(Vec<u32>, Vec<u32>), Scalar> = BTreeMap::new();
        for (m, v) in &self.terms {
            if *m == id {
                continue;
            }
            let mut rows = Vec::with_capacity(self.n);
            let mut cols = Vec::with_capacity(self.n);
            for f in &m.0 {
                match f {
                    Factor::Matrix { row, col } => {
                        rows.push(*row);
                        cols.push(*col);
                    }
                    Factor::Band { .. } => return Err(UnitError::NotFiniteUnitShape),
                }
            }
            entries.insert((rows, cols), v / &c);
        }
        // finite window spanned by all row and column indices
        let support: Vec<Vec<u32>> = entries
            .keys()
            .flat_map(|(r, s)| [r.clone(), s.clone()])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let k = support.len();
        let pos = |idx: &Vec<u32>| support.binary_search(idx).expect("in support");
        let mut block = vec![vec![Scalar::zero(); k]; k];
        for i in 0..k {
            block[i][i] = Scalar::one();
        }
        for ((r, s), v) in &entries {
            block[pos(r)][pos(s)] += v.clone();
        }
        let inv = invert_rational_matrix(block).ok_or(UnitError::SingularBlock)?;
        let mut out = Operator::one(self.n).scale(&c.recip());
        for (i, row_idx) in support.iter().enumerate() {
            for (j, col_idx) in support.iter().enumerate() {
                let mut v = inv[i][j].clone();
                if i == j {
                    v -= Scalar::one();
                }
                if !v.is_zero() {
                    let unit = Operator::matrix_unit_multi(row_idx, col_idx);
                    out = &out + &unit.scale(&(v / &c));
                }
            }
        }
        Ok(out)
    }

    /// Largest matrix-unit index appearing in any slot, if any.
    pub fn max_matrix_index(&self) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter())
            .filter_map(|f| match f {
                Factor::Matrix { row, col } => Some(*row.max(col)),
                _ => None,
            })
            .max()
    }

    /// Largest |shift| over all band factors.
    pub fn max_abs_shift(&self) -> i64 {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter())
            .filter_map(|f| match f {
                Factor::Band { shift, .. } => Some(shift.abs()),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Largest H-power over all band factors.
    pub fn max_h_pow(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter())
            .filter_map(|f| match f {
                Factor::Band { h_pow, .. } => Some(*h_pow),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Coefficients of `H^b1 (H - shift)^b2` as a dense vector indexed by the
/// power of H.
fn shifted_h_power(b1: u32, b2: u32, shift: i64) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); (b1 + b2 + 1) as usize];
    let mut binom = BigInt::one();
    for k in 0..=b2 {
        // C(b2, k) * (-shift)^(b2-k) at H-power b1 + k
        let c = &binom * BigInt::from(-shift).pow(b2 - k);
        out[(b1 + k) as usize] = Scalar::from_integer(c);
        binom = binom * BigInt::from((b2 - k) as i64) / BigInt::from((k + 1) as i64);
    }
    out
}

fn eval_h_poly(coeffs: &[Scalar], at: i64) -> Scalar {
    let mut acc = Scalar::zero();
    for c in coeffs.iter().rev() {
        acc = acc * crate::scalar::int(at) + c;
    }
    acc
}

/// Product of two slot factors, as a combination of slot factors.
fn mul_factor(x: &Factor, y: &Factor) -> Vec<(Scalar, Factor)> {
    match (*x, *y) {
        (Factor::Band { h_pow: b1, shift: a1 }, Factor::Band { h_pow: b2, shift: a2 }) => {
            let coeffs = shifted_h_power(b1, b2, a1);
            let mut out = Vec::new();
            for (k, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    out.push((
                        c.clone(),
                        Factor::Band { h_pow: k as u32, shift: a1 + a2 },
                    ));
                }
            }
            if a1 > 0 && a2 < 0 {
                // I^a D^c leaves a finite-rank defect on the lowest degrees
                for t in 1..=a1.min(-a2) {
                    let row = (a1 - t) as u32;
                    let col = (-a2 - t) as u32;
                    let v = -eval_h_poly(&coeffs, row as i64 + 1);
                    if !v.is_zero() {
                        out.push((v, Factor::Matrix { row, col }));
                    }
                }
            }
            out
        }
        (Factor::Band { h_pow, shift }, Factor::Matrix { row, col }) => {
            let new_row = row as i64 + shift;
            if new_row < 0 {
                return Vec::new();
            }
            vec![(
                int_pow(new_row + 1, h_pow),
                Factor::Matrix { row: new_row as u32, col },
            )]
        }
        (Factor::Matrix { row, col }, Factor::Band { h_pow, shift }) => {
            let new_col = col as i64 - shift;
            if new_col < 0 {
                return Vec::new();
            }
            vec![(
                int_pow(col as i64 + 1, h_pow),
                Factor::Matrix { row, col: new_col as u32 },
            )]
        }
        (Factor::Matrix { row, col }, Factor::Matrix { row: r2, col: c2 }) => {
            if col == r2 {
                vec![(Scalar::one(), Factor::Matrix { row, col: c2 })]
            } else {
                Vec::new()
            }
        }
    }
}

fn star_factor(f: &Factor) -> Vec<(Scalar, Factor)> {
    match *f {
        // (H^b v_a)* = v_{-a} H^b = (H + a)^b v_{-a}
        Factor::Band { h_pow, shift } => shifted_h_power(0, h_pow, -shift)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c, Factor::Band { h_pow: k as u32, shift: -shift }))
            .collect(),
        Factor::Matrix { row, col } => vec![(Scalar::one(), Factor::Matrix { row: col, col: row })],
    }
}

/// Expands the tensor product of per-slot factor combinations into `terms`,
/// scaled by `coeff`.
fn accumulate_products(
    terms: &mut BTreeMap<Monomial, Scalar>,
    coeff: Scalar,
    per_slot: &[Vec<(Scalar, Factor)>],
) {
    if per_slot.iter().any(|s| s.is_empty()) {
        return;
    }
    let n = per_slot.len();
    let mut idx = vec![0usize; n];
    loop {
        let mut c = coeff.clone();
        let mut factors = Vec::with_capacity(n);
        for (slot, &i) in idx.iter().enumerate() {
            let (ref sc, f) = per_slot[slot][i];
            c *= sc;
            factors.push(f);
        }
        Operator::add_term(terms, Monomial(factors), c);
        // advance the mixed-radix counter
        let mut slot = 0;
        loop {
            if slot == n {
                return;
            }
            idx[slot] += 1;
            if idx[slot] < per_slot[slot].len() {
                break;
            }
            idx[slot] = 0;
            slot += 1;
        }
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Operator::add_term(&mut terms, m.clone(), c.clone());
        }
        Operator { n: self.n, terms }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self + &(-rhs)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let per_slot: Vec<Vec<(Scalar, Factor)>> = m1
                    .0
                    .iter()
                    .zip(&m2.0)
                    .map(|(f1, f2)| mul_factor(f1, f2))
                    .collect();
                accumulate_products(&mut terms, c1 * c2, &per_slot);
            }
        }
        Operator::from_map(self.n, terms)
    }
}

fn invert_rational_matrix(mut a: Vec<Vec<Scalar>>) -> Option<Vec<Vec<Scalar>>> {
    let k = a.len();
    let mut inv = vec![vec![Scalar::zero(); k]; k];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    for col in 0..k {
        let pivot = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        for v in inv[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..k {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..k {
                let sub = &a[col][c] * &f;
                a[r][c] -= sub;
                let sub = &inv[col][c] * &f;
                inv[r][c] -= sub;
            }
        }
    }
    Some(inv)
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Factor::Band { h_pow: 0, shift: 0 } => write!(f, "1"),
            Factor::Band { h_pow, shift: 0 } => write!(f, "H^{h_pow}"),
            Factor::Band { h_pow: 0, shift } if shift > 0 => write!(f, "I^{shift}"),
            Factor::Band { h_pow: 0, shift } => write!(f, "D^{}", -shift),
            Factor::Band { h_pow, shift } if shift > 0 => write!(f, "H^{h_pow} I^{shift}"),
            Factor::Band { h_pow, shift } => write!(f, "H^{h_pow} D^{}", -shift),
            Factor::Matrix { row, col } => write!(f, "e[{row},{col}]"),
        }
    }
}

impl fmt::Display for Operator {
    /// Canonical text form: terms joined by `" + "`, each term a reduced
    /// fraction followed by `" * "` and the slot factors joined by `"⊗"`.
    /// The identity monomial prints as the bare coefficient.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_identity() {
                    format_scalar(c)
                } else {
                    let slots = m
                        .0
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join("\u{2297}");
                    format!("{} * {}", format_scalar(c), slots)
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn d() -> Operator {
        Operator::deriv(1, 1)
    }
    fn i1() -> Operator {
        Operator::integ(1, 1)
    }
    fn h() -> Operator {
        Operator::euler(1, 1)
    }
    fn e(r: u32, c: u32) -> Operator {
        Operator::matrix_unit(0, 1, r, c)
    }

    #[test]
    fn generators() {
        assert_eq!(
            d(),
            Operator::single(1, Monomial::new(vec![Factor::Band { h_pow: 0, shift: -1 }]), int(1))
        );
        let h2 = Operator::euler(2, 2);
        assert_eq!(
            h2,
            Operator::slot_factor(1, 2, Factor::Band { h_pow: 1, shift: 0 })
        );
        assert!(Operator::generator(Gen::Deriv, 3, 2).is_err());
        assert!(Operator::generator(Gen::Deriv, 0, 2).is_err());
    }

    #[test]
    fn coordinate_is_integration_after_euler() {
        let x = Operator::coord(1, 1);
        assert_eq!(x, &i1() * &h());
        assert_eq!(x.num_terms(), 2);
    }

    #[test]
    fn linear_combination() {
        let zero = Operator::linear_combine(&[int(1), int(-1)], &[d(), d()]).unwrap();
        assert!(zero.is_zero());
        let one = Operator::linear_combine(&[int(1), int(1)], &[&i1() * &d(), e(0, 0)]).unwrap();
        assert_eq!(one, Operator::one(1));
        let five_h = Operator::linear_combine(&[int(2), int(3)], &[h(), h()]).unwrap();
        assert_eq!(five_h, h().scale(&int(5)));
        let bad = Operator::linear_combine(&[int(1), int(1)], &[d(), Operator::deriv(1, 2)]);
        assert_eq!(bad, Err(AlgebraError::DimensionMismatch(1, 2)));
    }

    #[test]
    fn basic_products() {
        assert_eq!(&d() * &i1(), Operator::one(1));
        assert_eq!(&i1() * &d(), &Operator::one(1) - &e(0, 0));
        assert_eq!(&e(1, 2) * &e(2, 3), e(1, 3));
        assert!((&e(1, 2) * &e(1, 3)).is_zero());
        let ii_dd = &i1().pow(2) * &d().pow(2);
        assert_eq!(ii_dd, &(&Operator::one(1) - &e(0, 0)) - &e(1, 1));
    }

    #[test]
    fn h_commutation() {
        // I H = (H - 1) I and D H = (H + 1) D
        let ih = &i1() * &h();
        let expected = &(&h() * &i1()) - &i1();
        assert_eq!(ih, expected);
        let dh = &d() * &h();
        let expected = &(&h() * &d()) + &d();
        assert_eq!(dh, expected);
        // H e00 = e00 H = e00
        assert_eq!(&h() * &e(0, 0), e(0, 0));
        assert_eq!(&e(0, 0) * &h(), e(0, 0));
    }

    #[test]
    fn involution_examples() {
        assert_eq!(d().star(), i1());
        assert_eq!(i1().star(), d());
        assert_eq!(h().star(), h());
        assert_eq!(e(2, 5).star(), e(5, 2));
        // (H I)* = (H + 1) D
        let hi = &h() * &i1();
        assert_eq!(hi.star(), &(&h() * &d()) + &d());
        // anti-automorphism on a sample
        let a = &(&h() * &i1()) + &e(1, 0);
        let b = &d() - &e(0, 3);
        assert_eq!((&a * &b).star(), &b.star() * &a.star());
        assert_eq!(a.star().star(), a);
    }

    #[test]
    fn grading() {
        let mix = &d() + &i1();
        let comps = mix.graded_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[&vec![-1]], d());
        assert_eq!(comps[&vec![1]], i1());
        let e20 = e(2, 0);
        let comps = e20.graded_components();
        assert_eq!(comps.keys().collect::<Vec<_>>(), vec![&vec![2]]);
        assert_eq!(h().graded_components().keys().collect::<Vec<_>>(), vec![&vec![0]]);
    }

    #[test]
    fn grading_multiplicative() {
        let a = &(&h() * &i1()) + &e(2, 1);
        let b = &d().pow(2) + &e(0, 3);
        let prod = &a * &b;
        for (deg, comp) in prod.graded_components() {
            // every monomial of each component carries the component degree
            for (m, _) in comp.terms() {
                assert_eq!(m.degree(), deg);
            }
        }
    }

    #[test]
    fn ideal_membership() {
        let p1 = IdealDescriptor::prime([0], 2).unwrap();
        let f2 = IdealDescriptor::smallest_nonzero(2);
        let e00_1 = Operator::matrix_unit(0, 2, 0, 0);
        assert!(e00_1.is_in_ideal(&p1));
        let h_1 = Operator::euler(1, 2);
        assert!(!h_1.is_in_ideal(&p1));
        let e00_e11 = &Operator::matrix_unit(0, 2, 0, 0) * &Operator::matrix_unit(1, 2, 1, 1);
        assert!(e00_e11.is_in_ideal(&f2));
        assert!(!e00_1.is_in_ideal(&f2));
    }

    #[test]
    fn generated_ideals() {
        let e00_1 = Operator::matrix_unit(0, 2, 0, 0);
        assert_eq!(e00_1.generated_ideal(), IdealDescriptor::prime([0], 2).unwrap());
        assert_eq!(h().generated_ideal(), IdealDescriptor::whole(1));
        assert_eq!(Operator::zero(1).generated_ideal(), IdealDescriptor::zero(1));
        // D H I - H = 1, so the ideal generated by H is everything
        let dhi = &(&d() * &h()) * &i1();
        assert_eq!(&dhi - &h(), Operator::one(1));
    }

    #[test]
    fn finite_unit_inversion() {
        let u = &Operator::one(1) + &e(0, 0);
        let inv = u.try_invert_finite_unit().unwrap();
        assert_eq!(inv, &Operator::one(1) - &e(0, 0).scale(&ratio(1, 2)));
        assert_eq!(&u * &inv, Operator::one(1));
        assert_eq!(&inv * &u, Operator::one(1));

        let v = &Operator::one(1) + &e(0, 1);
        let inv = v.try_invert_finite_unit().unwrap();
        assert_eq!(inv, &Operator::one(1) - &e(0, 1));

        let s = &Operator::one(1) - &e(0, 0);
        assert_eq!(s.try_invert_finite_unit(), Err(UnitError::SingularBlock));

        let not_unit_shape = &Operator::one(1) + &i1();
        assert_eq!(
            not_unit_shape.try_invert_finite_unit(),
            Err(UnitError::NotFiniteUnitShape)
        );
        // scaling keeps invertibility
        let w = (&Operator::one(1) + &e(1, 2)).scale(&ratio(3, 7));
        let winv = w.try_invert_finite_unit().unwrap();
        assert_eq!(&w * &winv, Operator::one(1));
    }

    #[test]
    fn annihilator_identities() {
        for k in 0..8 {
            assert!((&e(k, 0) * &i1()).is_zero());
            assert!((&d() * &e(0, k)).is_zero());
        }
        // nothing on the right annihilates integration
        for r in 0..4 {
            for c in 0..4 {
                assert!(!(&i1() * &e(r, c)).is_zero());
            }
        }
        for b in 0..4u32 {
            for a in -3i64..=3 {
                let m = Operator::slot_factor(0, 1, Factor::Band { h_pow: b, shift: a });
                assert!(!(&i1() * &m).is_zero());
            }
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(Operator::zero(2).to_string(), "0");
        assert_eq!(Operator::one(1).to_string(), "1");
        assert_eq!(d().to_string(), "1 * D^1");
        assert_eq!((&i1() * &d()).to_string(), "1 + -1 * e[0,0]");
        let t = Operator::matrix_unit(1, 2, 0, 1).scale(&ratio(-1, 2));
        assert_eq!(t.to_string(), "-1/2 * 1\u{2297}e[0,1]");
    }
}
