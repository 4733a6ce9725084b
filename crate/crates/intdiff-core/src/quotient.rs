//! The quotient by the maximal ideal: a skew Laurent polynomial algebra in
//! invertible generators z_i with polynomial coefficients in the Euler
//! operators, twisted by z_i H_i = (H_i - 1) z_i. The quotient map sends
//! integration to z_i, differentiation to z_i^-1, and kills every monomial
//! with a matrix-unit factor.
//!
//! The top z-degree of a quotient image computes the Fredholm index (with a
//! sign flip), and the automorphisms of the quotient — integer-matrix,
//! torus, and commuting-shift parts — host the image of the automorphism
//! group of the operator algebra.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{Factor, Operator};
use crate::aut::CanonicalAutomorphism;
use crate::scalar::{format_scalar, scalar_pow, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuotientError {
    #[error("the zero element has no top degree")]
    ZeroElement,
    #[error("element lies in the smallest ideal and is not Fredholm")]
    NotFredholm,
    #[error("the zero exponent vector spans no basis direction")]
    ZeroAlpha,
    #[error("matrix is not invertible over the integers")]
    NotUnimodular,
    #[error("torus entries must be nonzero")]
    ZeroTorusEntry,
    #[error("shift vector fails the commutation compatibility condition")]
    IncompatibleShift,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// A commutative polynomial in the Euler generators H_1..H_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl HPoly {
    pub fn zero(n: usize) -> Self {
        HPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        Self::monomial(vec![0; n], c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Scalar::one())
    }

    /// The generator H at a 0-based slot.
    pub fn var(slot: usize, n: usize) -> Self {
        let mut exp = vec![0; n];
        exp[slot] = 1;
        Self::monomial(exp, Scalar::one())
    }

    pub fn monomial(exp: Vec<u32>, c: Scalar) -> Self {
        let n = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        HPoly { n, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant c (including zero).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (exp, c) = self.terms.iter().next().unwrap();
                exp.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Splits an affine polynomial into (linear coefficients, constant);
    /// `None` if any monomial has total degree at least two.
    pub fn as_affine(&self) -> Option<(Vec<Scalar>, Scalar)> {
        let mut linear = vec![Scalar::zero(); self.n];
        let mut constant = Scalar::zero();
        for (exp, c) in &self.terms {
            match exp.iter().sum::<u32>() {
                0 => constant = c.clone(),
                1 => {
                    let slot = exp.iter().position(|&e| e == 1).unwrap();
                    linear[slot] = c.clone();
                }
                _ => return None,
            }
        }
        Some((linear, constant))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            hadd(&mut terms, e.clone(), c.clone());
        }
        HPoly { n: self.n, terms }
    }

    pub fn neg(&self) -> Self {
        HPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                hadd(&mut terms, e, c1 * c2);
            }
        }
        HPoly { n: self.n, terms }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        HPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Substitutes H_i -> H_i - s_i.
    pub fn shift_args(&self, s: &[i64]) -> Self {
        assert_eq!(s.len(), self.n);
        let mut out = Self::zero(self.n);
        for (exp, c) in &self.terms {
            let mut term = Self::constant(self.n, c.clone());
            for (slot, &e) in exp.iter().enumerate() {
                let base = Self::var(slot, self.n)
                    .add(&Self::constant(self.n, crate::scalar::int(-s[slot])));
                for _ in 0..e {
                    term = term.mul(&base);
                }
            }
            out = out.add(&term);
        }
        out
    }
}

fn hadd(terms: &mut BTreeMap<Vec<u32>, Scalar>, e: Vec<u32>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.entry(e) {
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

/// An element of the quotient algebra: a finite sum of `c(H) z^beta` with
/// the polynomial coefficients written to the left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BElement {
    n: usize,
    terms: BTreeMap<Vec<i64>, HPoly>,
}

impl BElement {
    pub fn zero(n: usize) -> Self {
        BElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::from_coeff(vec![0; n], HPoly::one(n))
    }

    pub fn z(slot: usize, n: usize) -> Self {
        Self::z_pow(slot, n, 1)
    }

    pub fn z_pow(slot: usize, n: usize, e: i64) -> Self {
        let mut exp = vec![0; n];
        exp[slot] = e;
        Self::from_coeff(exp, HPoly::one(n))
    }

    pub fn h(slot: usize, n: usize) -> Self {
        Self::from_coeff(vec![0; n], HPoly::var(slot, n))
    }

    pub fn from_coeff(exp: Vec<i64>, coeff: HPoly) -> Self {
        let n = exp.len();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        BElement { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &HPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[i64]) -> HPoly {
        self.terms.get(exp).cloned().unwrap_or_else(|| HPoly::zero(self.n))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms = self.terms.clone();
        for (e, p) in &other.terms {
            badd(&mut terms, e.clone(), p.clone());
        }
        BElement { n: self.n, terms }
    }

    pub fn neg(&self) -> Self {
        BElement {
            n: self.n,
            terms: self.terms.iter().map(|(e, p)| (e.clone(), p.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        BElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, p)| (e.clone(), p.scale(c)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    /// Skew product: `c(H) z^b · d(H) z^g = c(H) d(H - b) z^{b+g}`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms = BTreeMap::new();
        for (b, c) in &self.terms {
            for (g, d) in &other.terms {
                let exp: Vec<i64> = b.iter().zip(g).map(|(x, y)| x + y).collect();
                badd(&mut terms, exp, c.mul(&d.shift_args(b)));
            }
        }
        BElement { n: self.n, terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.n);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Largest z-exponent with a nonzero coefficient (single-variable
    /// case).
    pub fn top_degree(&self) -> Result<i64, QuotientError> {
        assert_eq!(self.n, 1, "top degree is defined for one variable");
        self.terms
            .keys()
            .map(|e| e[0])
            .max()
            .ok_or(QuotientError::ZeroElement)
    }
}

fn badd(terms: &mut BTreeMap<Vec<i64>, HPoly>, e: Vec<i64>, p: HPoly) {
    if p.is_zero() {
        return;
    }
    match terms.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(p);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get().add(&p);
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

impl Operator {
    /// The image in the quotient by the maximal ideal: monomials with any
    /// matrix-unit factor die; `H^b I^a` and `H^b D^a` become `H^b z^{±a}`.
    pub fn quotient_image(&self) -> BElement {
        let n = self.n();
        let mut out = BElement::zero(n);
        'mono: for (m, c) in self.terms() {
            let mut exp = Vec::with_capacity(n);
            let mut hexp = Vec::with_capacity(n);
            for f in m.factors() {
                match *f {
                    Factor::Matrix { .. } => continue 'mono,
                    Factor::Band { h_pow, shift } => {
                        exp.push(shift);
                        hexp.push(h_pow);
                    }
                }
            }
            out = out.add(&BElement::from_coeff(exp, HPoly::monomial(hexp, c.clone())));
        }
        out
    }
}

/// The Fredholm index of a one-variable operator: minus the top degree of
/// its quotient image; undefined inside the smallest ideal.
pub fn fredholm_index(op: &Operator) -> Result<i64, QuotientError> {
    assert_eq!(op.n(), 1, "index calculus is single-variable");
    let image = op.quotient_image();
    if image.is_zero() {
        return Err(QuotientError::NotFredholm);
    }
    Ok(-image.top_degree().expect("nonzero"))
}

/// A Laurent polynomial in the invertible generators z_1..z_n with scalar
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Laurent {
    n: usize,
    terms: BTreeMap<Vec<i64>, Scalar>,
}

impl Laurent {
    pub fn zero(n: usize) -> Self {
        Laurent { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        Self::monomial(vec![0; n], c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Scalar::one())
    }

    pub fn z(slot: usize, n: usize) -> Self {
        let mut exp = vec![0; n];
        exp[slot] = 1;
        Self::monomial(exp, Scalar::one())
    }

    pub fn monomial(exp: Vec<i64>, c: Scalar) -> Self {
        let n = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Laurent { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Scalar)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            ladd(&mut terms, e.clone(), c.clone());
        }
        Laurent { n: self.n, terms }
    }

    pub fn neg(&self) -> Self {
        Laurent {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Laurent {
            n: self.n,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                ladd(&mut terms, e, c1 * c2);
            }
        }
        Laurent { n: self.n, terms }
    }

    /// Monomial substitution z_i -> mult_i * prod_j z_j^{mat[i][j]}.
    pub fn substitute(&self, mat: &[Vec<i64>], mult: &[Scalar]) -> Self {
        let mut out = Self::zero(self.n);
        for (exp, c) in &self.terms {
            let mut coeff = c.clone();
            let mut new_exp = vec![0i64; self.n];
            for (i, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                coeff *= scalar_pow(&mult[i], e);
                for (j, v) in new_exp.iter_mut().enumerate() {
                    *v += e * mat[i][j];
                }
            }
            out = out.add(&Self::monomial(new_exp, coeff));
        }
        out
    }

    pub fn to_belement(&self) -> BElement {
        let mut out = BElement::zero(self.n);
        for (e, c) in &self.terms {
            out = out.add(&BElement::from_coeff(e.clone(), HPoly::constant(self.n, c.clone())));
        }
        out
    }
}

fn ladd(terms: &mut BTreeMap<Vec<i64>, Scalar>, e: Vec<i64>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.entry(e) {
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

/// Shift vectors (p_1..p_n) are admissible when the perturbed Euler images
/// H_i + p_i still commute pairwise; coefficientwise this reads
/// `alpha_i c_j(alpha) = alpha_j c_i(alpha)` for every exponent vector.
pub fn is_admissible_shift(ps: &[Laurent]) -> bool {
    let n = ps.len();
    for i in 0..n {
        for j in (i + 1)..n {
            // z_i d p_j / d z_i  vs  z_j d p_i / d z_j
            let mut lhs = Laurent::zero(n);
            for (e, c) in ps[j].terms() {
                lhs = lhs.add(&Laurent::monomial(e.clone(), c * crate::scalar::int(e[i])));
            }
            let mut rhs = Laurent::zero(n);
            for (e, c) in ps[i].terms() {
                rhs = rhs.add(&Laurent::monomial(e.clone(), c * crate::scalar::int(e[j])));
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// The basis vector of admissible shifts attached to a nonzero exponent
/// vector: entries vanish off the support, the first supported entry is 1,
/// and the rest are the exponent ratios.
pub fn shift_basis_vector(alpha: &[i64]) -> Result<Vec<Laurent>, QuotientError> {
    let n = alpha.len();
    let min = alpha
        .iter()
        .position(|&a| a != 0)
        .ok_or(QuotientError::ZeroAlpha)?;
    let mut out = Vec::with_capacity(n);
    for &a in alpha.iter() {
        if a == 0 {
            out.push(Laurent::zero(n));
        } else {
            let lam = crate::scalar::ratio(a, alpha[min]);
            out.push(Laurent::monomial(alpha.to_vec(), lam));
        }
    }
    Ok(out)
}

/// An automorphism of the quotient algebra in canonical triple form: an
/// integer matrix of determinant ±1, a torus vector, and an admissible
/// shift vector. The action is
///
/// ```text
///   z_i |-> lambda_i * prod_j z_j^{a_ij}
///   H_i |-> sum_j H_j b_ji + (a t_lambda)(p_i),      b = a^{-1}.
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BAutomorphism {
    n: usize,
    mat: Vec<Vec<i64>>,
    mat_inv: Vec<Vec<i64>>,
    lambda: Vec<Scalar>,
    shifts: Vec<Laurent>,
}

fn integer_inverse(mat: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let k = mat.len();
    let mut a: Vec<Vec<Scalar>> = mat
        .iter()
        .map(|row| row.iter().map(|&v| crate::scalar::int(v)).collect())
        .collect();
    let mut inv = vec![vec![Scalar::zero(); k]; k];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    let mut det = Scalar::one();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !a[r][col].is_zero())?;
        if pivot != col {
            a.swap(col, pivot);
            inv.swap(col, pivot);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
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
    if det != Scalar::one() && det != -Scalar::one() {
        return None;
    }
    // determinant ±1 makes the inverse integral
    Some(
        inv.iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        debug_assert!(v.denom().is_one());
                        i64::try_from(v.numer()).expect("small entries")
                    })
                    .collect()
            })
            .collect(),
    )
}

impl BAutomorphism {
    pub fn new(
        mat: Vec<Vec<i64>>,
        lambda: Vec<Scalar>,
        shifts: Vec<Laurent>,
    ) -> Result<Self, QuotientError> {
        let n = mat.len();
        if lambda.len() != n {
            return Err(QuotientError::DimensionMismatch(n, lambda.len()));
        }
        if shifts.len() != n {
            return Err(QuotientError::DimensionMismatch(n, shifts.len()));
        }
        if mat.iter().any(|row| row.len() != n) {
            return Err(QuotientError::NotUnimodular);
        }
        if lambda.iter().any(Scalar::is_zero) {
            return Err(QuotientError::ZeroTorusEntry);
        }
        if !is_admissible_shift(&shifts) {
            return Err(QuotientError::IncompatibleShift);
        }
        let mat_inv = integer_inverse(&mat).ok_or(QuotientError::NotUnimodular)?;
        Ok(BAutomorphism { n, mat, mat_inv, lambda, shifts })
    }

    pub fn identity(n: usize) -> Self {
        let mat: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::new(mat, vec![Scalar::one(); n], vec![Laurent::zero(n); n]).expect("identity")
    }

    pub fn torus(lambda: Vec<Scalar>) -> Result<Self, QuotientError> {
        let n = lambda.len();
        let id = Self::identity(n);
        Self::new(id.mat, lambda, vec![Laurent::zero(n); n])
    }

    pub fn shift(shifts: Vec<Laurent>) -> Result<Self, QuotientError> {
        let n = shifts.len();
        let id = Self::identity(n);
        Self::new(id.mat, vec![Scalar::one(); n], shifts)
    }

    pub fn from_matrix(mat: Vec<Vec<i64>>) -> Result<Self, QuotientError> {
        let n = mat.len();
        Self::new(mat, vec![Scalar::one(); n], vec![Laurent::zero(n); n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.mat
    }

    pub fn lambda(&self) -> &[Scalar] {
        &self.lambda
    }

    pub fn shifts(&self) -> &[Laurent] {
        &self.shifts
    }

    /// Image of z_i.
    pub fn z_image(&self, i: usize) -> BElement {
        let l = Laurent::monomial(self.mat[i].clone(), self.lambda[i].clone());
        l.to_belement()
    }

    /// Image of H_i.
    pub fn h_image(&self, i: usize) -> BElement {
        let mut out = BElement::zero(self.n);
        for j in 0..self.n {
            let b_ji = self.mat_inv[j][i];
            if b_ji != 0 {
                out = out.add(
                    &BElement::from_coeff(
                        vec![0; self.n],
                        HPoly::var(j, self.n).scale(&crate::scalar::int(b_ji)),
                    ),
                );
            }
        }
        let moved = self.shifts[i].substitute(&self.mat, &self.lambda);
        out.add(&moved.to_belement())
    }

    /// Applies the automorphism to an arbitrary element: evaluate each
    /// coefficient polynomial at the (commuting) Euler images and multiply
    /// by the z-images.
    pub fn apply(&self, u: &BElement) -> BElement {
        assert_eq!(self.n, u.n());
        let h_images: Vec<BElement> = (0..self.n).map(|i| self.h_image(i)).collect();
        let mut out = BElement::zero(self.n);
        for (exp, coeff) in u.terms() {
            // z-part: unit monomial, computed exactly
            let mut unit_exp = vec![0i64; self.n];
            let mut unit_c = Scalar::one();
            for (i, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                unit_c *= scalar_pow(&self.lambda[i], e);
                for (j, v) in unit_exp.iter_mut().enumerate() {
                    *v += e * self.mat[i][j];
                }
            }
            let unit = BElement::from_coeff(unit_exp, HPoly::constant(self.n, unit_c));
            // H-part: evaluate the polynomial at the Euler images
            for (hexp, c) in &coeff.terms {
                let mut val = BElement::from_coeff(vec![0; self.n], HPoly::constant(self.n, c.clone()));
                for (slot, &e) in hexp.iter().enumerate() {
                    for _ in 0..e {
                        val = val.mul(&h_images[slot]);
                    }
                }
                out = out.add(&val.mul(&unit));
            }
        }
        out
    }

    /// Canonical triple of the composition `self ∘ other`, recovered from
    /// the composed action on the generators.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut mat = Vec::with_capacity(n);
        let mut lambda = Vec::with_capacity(n);
        for i in 0..n {
            let img = self.apply(&other.z_image(i));
            let mut it = img.terms();
            let (exp, coeff) = it.next().expect("unit image");
            assert!(it.next().is_none(), "unit image must be a single term");
            let c = coeff.as_constant().expect("constant coefficient");
            mat.push(exp.clone());
            lambda.push(c);
        }
        let mat_inv = integer_inverse(&mat).expect("composition of unimodular matrices");
        let mut shifts = Vec::with_capacity(n);
        for i in 0..n {
            let img = self.apply(&other.h_image(i));
            // img = sum_j H_j b'_ji + (a' t_lambda')(p'_i)
            let mut laurent = Laurent::zero(n);
            for (exp, coeff) in img.terms() {
                if exp.iter().all(|&e| e == 0) {
                    let (linear, constant) = coeff.as_affine().expect("affine Euler image");
                    for (j, v) in linear.iter().enumerate() {
                        assert_eq!(
                            *v,
                            crate::scalar::int(mat_inv[j][i]),
                            "linear part must match the inverse matrix"
                        );
                    }
                    laurent = laurent.add(&Laurent::constant(n, constant));
                } else {
                    let c = coeff.as_constant().expect("constant z-coefficients");
                    laurent = laurent.add(&Laurent::monomial(exp.clone(), c));
                }
            }
            // undo the twist (a t_lambda) to recover p'_i
            let mult: Vec<Scalar> = (0..n)
                .map(|r| {
                    let mut m = Scalar::one();
                    for (j, l) in lambda.iter().enumerate() {
                        m *= scalar_pow(l, -mat_inv[r][j]);
                    }
                    m
                })
                .collect();
            shifts.push(laurent.substitute(&mat_inv, &mult));
        }
        Self::new(mat, lambda, shifts).expect("composition is an automorphism")
    }

    /// Canonical triple of the inverse, transported along the conjugation
    /// identities for the three subgroups.
    pub fn inverse(&self) -> Self {
        let n = self.n;
        let b = &self.mat_inv;
        // lambda' = prod_j lambda_j^{-b_ij}
        let lambda: Vec<Scalar> = (0..n)
            .map(|i| {
                let mut v = Scalar::one();
                for (j, l) in self.lambda.iter().enumerate() {
                    v *= scalar_pow(l, -b[i][j]);
                }
                v
            })
            .collect();
        // p' = t_{lambda'}^{-1} ( sum_j a^{-1}(-p_j) * b_ji )
        let ones: Vec<Scalar> = vec![Scalar::one(); n];
        let lambda_inv_mult: Vec<Scalar> = lambda.iter().map(|l| l.clone().recip()).collect();
        let id_mat: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut shifts = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = Laurent::zero(n);
            for j in 0..n {
                if b[j][i] == 0 {
                    continue;
                }
                let moved = self.shifts[j].neg().substitute(b, &ones);
                acc = acc.add(&moved.scale(&crate::scalar::int(b[j][i])));
            }
            shifts.push(acc.substitute(&id_mat, &lambda_inv_mult));
        }
        let out = Self::new(self.mat_inv.clone(), lambda, shifts).expect("inverse triple");
        debug_assert!({
            let round = self.compose(&out);
            let id = Self::identity(n);
            (0..n).all(|i| {
                round.apply(&BElement::z(i, n)) == id.apply(&BElement::z(i, n))
                    && round.apply(&BElement::h(i, n)) == id.apply(&BElement::h(i, n))
            })
        });
        out
    }
}

/// The induced automorphism of the quotient: the permutation-torus part
/// survives, inner automorphisms act trivially.
pub fn induced_quotient_aut(aut: &CanonicalAutomorphism) -> BAutomorphism {
    let n = aut.n();
    let mut mat = vec![vec![0i64; n]; n];
    for (i, row) in mat.iter_mut().enumerate() {
        row[aut.perm().apply(i)] = 1;
    }
    BAutomorphism::new(mat, aut.torus().entries().to_vec(), vec![Laurent::zero(n); n])
        .expect("permutation-torus triple")
}

impl fmt::Display for BElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (exp, coeff) in &self.terms {
            let cs: Vec<String> = coeff
                .terms
                .iter()
                .map(|(he, c)| {
                    let vars: Vec<String> = he
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| format!("H{}^{}", i + 1, e))
                        .collect();
                    if vars.is_empty() {
                        format_scalar(c)
                    } else {
                        format!("{} {}", format_scalar(c), vars.join(" "))
                    }
                })
                .collect();
            let coeff_text = if cs.len() == 1 {
                cs.into_iter().next().unwrap()
            } else {
                format!("({})", cs.join(" + "))
            };
            let zs: Vec<String> = exp
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| format!("z{}^{}", i + 1, e))
                .collect();
            if zs.is_empty() {
                parts.push(coeff_text);
            } else {
                parts.push(format!("{} * {}", coeff_text, zs.join(" ")));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}
