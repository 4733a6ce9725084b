//! The automorphism group in canonical form.
//!
//! Every automorphism factors uniquely as a slot permutation, a torus
//! scaling, and an inner automorphism by a unit congruent to 1 modulo the
//! maximal ideal. This module applies, composes, and inverts such triples,
//! recognizes a triple from the images of the generators, and computes the
//! conjugating unit (and its inverse) of an inner automorphism by a closed
//! formula over a finite window.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{Factor, Operator};
use crate::ideal::IdealDescriptor;
use crate::quotient::BElement;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutError {
    #[error("images violate a defining relation: {0}")]
    RelationViolation(String),
    #[error("quotient residues are not of torus-permutation shape")]
    BadResidue,
    #[error("conjugating-unit formula output is inconsistent with the images")]
    ConjugatorMismatch,
    #[error("images do not reduce to the identity modulo the maximal ideal")]
    NotInKernelXi,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("not a bijection of the slot set")]
    NotBijection,
    #[error("unit validation failed: the two elements are not mutually inverse units congruent to 1")]
    NotUnit,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// A bijection of the n tensor slots, stored as 0-based images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, AutError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            if im >= n || seen[im] {
                return Err(AutError::NotBijection);
            }
            seen[im] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds from 1-based images as used in serialized documents.
    pub fn from_one_based(images: &[usize]) -> Result<Self, AutError> {
        if images.iter().any(|&v| v == 0) {
            return Err(AutError::NotBijection);
        }
        Self::from_images(images.iter().map(|&v| v - 1).collect())
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Permutation { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Permutation { images }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        Permutation {
            images: (0..self.n()).map(|i| self.apply(other.apply(i))).collect(),
        }
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v + 1).collect()
    }
}

/// A vector of nonzero scalars acting diagonally on the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusVector {
    entries: Vec<Scalar>,
}

impl TorusVector {
    pub fn ones(n: usize) -> Self {
        TorusVector { entries: vec![Scalar::one(); n] }
    }

    pub fn new(entries: Vec<Scalar>) -> Result<Self, AutError> {
        if entries.iter().any(Scalar::is_zero) {
            return Err(AutError::BadParameter("torus entries must be nonzero".into()));
        }
        Ok(TorusVector { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.entries[i]
    }

    pub fn is_ones(&self) -> bool {
        self.entries.iter().all(Scalar::is_one)
    }

    pub fn inverse(&self) -> Self {
        TorusVector {
            entries: self.entries.iter().map(|v| v.clone().recip()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        TorusVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    /// Transport along a permutation: entry i of the result is entry
    /// s^{-1}(i).
    pub fn permuted(&self, s: &Permutation) -> Self {
        let inv = s.inverse();
        TorusVector {
            entries: (0..self.n()).map(|i| self.entries[inv.apply(i)].clone()).collect(),
        }
    }
}

/// A unit congruent to 1 modulo the maximal ideal, stored together with
/// its inverse because general units of that shape have no algorithmic
/// inversion here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerUnit {
    phi: Operator,
    phi_inv: Operator,
}

impl InnerUnit {
    pub fn one(n: usize) -> Self {
        InnerUnit { phi: Operator::one(n), phi_inv: Operator::one(n) }
    }

    /// Validates that the two elements are mutually inverse and both lie
    /// in 1 + (maximal ideal).
    pub fn new(phi: Operator, phi_inv: Operator) -> Result<Self, AutError> {
        let n = phi.n();
        if phi_inv.n() != n {
            return Err(AutError::DimensionMismatch(n, phi_inv.n()));
        }
        let one = Operator::one(n);
        if &phi * &phi_inv != one || &phi_inv * &phi != one {
            return Err(AutError::NotUnit);
        }
        let maximal = IdealDescriptor::maximal(n);
        if !(&phi - &one).is_in_ideal(&maximal) || !(&phi_inv - &one).is_in_ideal(&maximal) {
            return Err(AutError::NotUnit);
        }
        Ok(InnerUnit { phi, phi_inv })
    }

    /// Inverts a finite-rank perturbation of 1 and pairs it with the
    /// result.
    pub fn from_finite_unit(phi: Operator) -> Result<Self, AutError> {
        let phi_inv = phi
            .try_invert_finite_unit()
            .map_err(|e| AutError::BadParameter(e.to_string()))?;
        Self::new(phi, phi_inv)
    }

    pub fn n(&self) -> usize {
        self.phi.n()
    }

    pub fn phi(&self) -> &Operator {
        &self.phi
    }

    pub fn phi_inv(&self) -> &Operator {
        &self.phi_inv
    }

    pub fn is_identity(&self) -> bool {
        self.phi == Operator::one(self.n())
    }

    pub fn inverse(&self) -> Self {
        InnerUnit { phi: self.phi_inv.clone(), phi_inv: self.phi.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        InnerUnit {
            phi: &self.phi * &other.phi,
            phi_inv: &other.phi_inv * &self.phi_inv,
        }
    }

    /// Conjugation a -> phi a phi^{-1}.
    pub fn conjugate(&self, a: &Operator) -> Operator {
        &(&self.phi * a) * &self.phi_inv
    }

    /// Applies an algebra map given on operators to both halves.
    fn map(&self, f: impl Fn(&Operator) -> Operator) -> Self {
        InnerUnit { phi: f(&self.phi), phi_inv: f(&self.phi_inv) }
    }
}

/// An automorphism in canonical form: permutation, then torus, then inner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalAutomorphism {
    perm: Permutation,
    torus: TorusVector,
    inner: InnerUnit,
}

impl CanonicalAutomorphism {
    pub fn new(perm: Permutation, torus: TorusVector, inner: InnerUnit) -> Self {
        assert_eq!(perm.n(), torus.n(), "dimension mismatch");
        assert_eq!(perm.n(), inner.n(), "dimension mismatch");
        CanonicalAutomorphism { perm, torus, inner }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Permutation::identity(n), TorusVector::ones(n), InnerUnit::one(n))
    }

    pub fn from_perm(perm: Permutation) -> Self {
        let n = perm.n();
        Self::new(perm, TorusVector::ones(n), InnerUnit::one(n))
    }

    pub fn from_torus(torus: TorusVector) -> Self {
        let n = torus.n();
        Self::new(Permutation::identity(n), torus, InnerUnit::one(n))
    }

    pub fn from_inner(inner: InnerUnit) -> Self {
        let n = inner.n();
        Self::new(Permutation::identity(n), TorusVector::ones(n), inner)
    }

    /// The transvection generator for one variable: conjugation by
    /// 1 + c·e[row,col] with distinct indices.
    pub fn transvection1(row: u32, col: u32, c: Scalar) -> Result<Self, AutError> {
        if row == col {
            return Err(AutError::BadParameter("transvection needs row != col".into()));
        }
        if c.is_zero() {
            return Err(AutError::BadParameter("transvection coefficient must be nonzero".into()));
        }
        let e = Operator::matrix_unit(0, 1, row, col);
        let phi = &Operator::one(1) + &e.scale(&c);
        let phi_inv = &Operator::one(1) - &e.scale(&c);
        Ok(Self::from_inner(InnerUnit::new(phi, phi_inv).expect("nilpotent transvection")))
    }

    /// The dilation generator for one variable: conjugation by
    /// 1 + mu·e[1,1], defined for mu != -1.
    pub fn dilation1(mu: Scalar) -> Result<Self, AutError> {
        if mu == -Scalar::one() {
            return Err(AutError::BadParameter("dilation is singular at -1".into()));
        }
        let e = Operator::matrix_unit(0, 1, 1, 1);
        let phi = &Operator::one(1) + &e.scale(&mu);
        let ratio = &mu / (Scalar::one() + &mu);
        let phi_inv = &Operator::one(1) - &e.scale(&ratio);
        Ok(Self::from_inner(InnerUnit::new(phi, phi_inv).expect("diagonal unit")))
    }

    pub fn n(&self) -> usize {
        self.perm.n()
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn torus(&self) -> &TorusVector {
        &self.torus
    }

    pub fn inner(&self) -> &InnerUnit {
        &self.inner
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity() && self.torus.is_ones() && self.inner.is_identity()
    }

    /// Applies the automorphism: inner conjugation, then torus scaling,
    /// then slot permutation.
    pub fn apply(&self, a: &Operator) -> Operator {
        assert_eq!(self.n(), a.n(), "dimension mismatch");
        let conj = self.inner.conjugate(a);
        let scaled = torus_action(&self.torus, &conj);
        perm_action(&self.perm, &scaled)
    }

    /// Images of all 3n generators, in slot order.
    pub fn images(&self) -> GeneratorImages {
        let n = self.n();
        GeneratorImages {
            d: (1..=n).map(|i| self.apply(&Operator::deriv(i, n))).collect(),
            i: (1..=n).map(|i| self.apply(&Operator::integ(i, n))).collect(),
            h: (1..=n).map(|i| self.apply(&Operator::euler(i, n))).collect(),
        }
    }

    /// Canonical form of `self ∘ other` (apply `other` first). The closed
    /// form is checked against the composed action in debug builds.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        let perm = self.perm.compose(&other.perm);
        let torus = self.torus.permuted(&other.perm.inverse()).mul(&other.torus);
        let moved = self
            .inner
            .map(|op| torus_action(&other.torus.inverse(), &perm_action(&other.perm.inverse(), op)));
        let inner = moved.mul(&other.inner);
        let out = Self::new(perm, torus, inner);
        debug_assert!({
            let n = self.n();
            (1..=n).all(|i| {
                [Operator::deriv(i, n), Operator::integ(i, n), Operator::euler(i, n)]
                    .iter()
                    .all(|g| out.apply(g) == self.apply(&other.apply(g)))
            })
        });
        out
    }

    /// Canonical form of the inverse: the permutation and torus invert
    /// directly and the inner unit is transported through them.
    pub fn invert(&self) -> Self {
        let perm = self.perm.inverse();
        let torus = self.torus.inverse().permuted(&self.perm);
        let moved = self
            .inner
            .inverse()
            .map(|op| perm_action(&self.perm, &torus_action(&self.torus, op)));
        let out = Self::new(perm, torus, moved);
        debug_assert!(out.compose(self).is_identity());
        out
    }

    /// Conjugate by the involution: the automorphism whose generator
    /// images are star-images of this one's.
    pub fn star_conjugate(&self) -> Self {
        let n = self.n();
        let images = GeneratorImages {
            d: (1..=n)
                .map(|i| self.apply(&Operator::integ(i, n)).star())
                .collect(),
            i: (1..=n)
                .map(|i| self.apply(&Operator::deriv(i, n)).star())
                .collect(),
            h: (1..=n)
                .map(|i| self.apply(&Operator::euler(i, n)).star())
                .collect(),
        };
        recognize(&images).expect("conjugate of an automorphism by the involution")
    }
}

/// Slot permutation of an element: the factor in slot s(i) of the image is
/// the factor in slot i of the input.
pub fn perm_action(s: &Permutation, a: &Operator) -> Operator {
    assert_eq!(s.n(), a.n(), "dimension mismatch");
    let n = a.n();
    let mut out = BTreeMap::new();
    for (m, c) in a.terms() {
        let mut factors = vec![Factor::ONE; n];
        for (i, f) in m.factors().iter().enumerate() {
            factors[s.apply(i)] = *f;
        }
        out.insert(crate::algebra::Monomial::new(factors), c.clone());
    }
    Operator::from_map(n, out)
}

/// Torus scaling: a band factor with shift a in slot i scales by
/// lambda_i^a, a matrix unit e[r,c] in slot i by lambda_i^{r-c}.
pub fn torus_action(lambda: &TorusVector, a: &Operator) -> Operator {
    assert_eq!(lambda.n(), a.n(), "dimension mismatch");
    let n = a.n();
    let mut out = BTreeMap::new();
    for (m, c) in a.terms() {
        let mut scale = c.clone();
        for (i, f) in m.factors().iter().enumerate() {
            let e = match *f {
                Factor::Band { shift, .. } => shift,
                Factor::Matrix { row, col } => row as i64 - col as i64,
            };
            scale *= crate::scalar::scalar_pow(lambda.get(i), e);
        }
        out.insert(m.clone(), scale);
    }
    Operator::from_map(n, out)
}

/// The images of the 3n generators defining a would-be automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorImages {
    pub d: Vec<Operator>,
    pub i: Vec<Operator>,
    pub h: Vec<Operator>,
}

impl GeneratorImages {
    pub fn new(d: Vec<Operator>, i: Vec<Operator>, h: Vec<Operator>) -> Result<Self, AutError> {
        let n = d.len();
        if i.len() != n || h.len() != n || n == 0 {
            return Err(AutError::DimensionMismatch(n, i.len().max(h.len())));
        }
        for op in d.iter().chain(&i).chain(&h) {
            if op.n() != n {
                return Err(AutError::DimensionMismatch(n, op.n()));
            }
        }
        Ok(GeneratorImages { d, i, h })
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    fn map(&self, f: impl Fn(&Operator) -> Operator) -> Self {
        GeneratorImages {
            d: self.d.iter().map(&f).collect(),
            i: self.i.iter().map(&f).collect(),
            h: self.h.iter().map(&f).collect(),
        }
    }
}

/// Checks every defining relation on the images.
pub fn validate_relations(images: &GeneratorImages) -> Result<(), AutError> {
    let n = images.n();
    let one = Operator::one(n);
    for k in 0..n {
        let (d, i, h) = (&images.d[k], &images.i[k], &images.h[k]);
        if &(d * i) != &one {
            return Err(AutError::RelationViolation(format!("D{} I{} != 1", k + 1, k + 1)));
        }
        let hi = &(h * i) - &(i * h);
        if hi != *i {
            return Err(AutError::RelationViolation(format!("[H{0}, I{0}] != I{0}", k + 1)));
        }
        let hd = &(h * d) - &(d * h);
        if hd != -d {
            return Err(AutError::RelationViolation(format!("[H{0}, D{0}] != -D{0}", k + 1)));
        }
        let proj = &one - &(i * d);
        if &(h * &proj) != &proj || &(&proj * h) != &proj {
            return Err(AutError::RelationViolation(format!(
                "H{0} (1 - I{0} D{0}) != 1 - I{0} D{0}",
                k + 1
            )));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            for (x, xn) in [(&images.d[a], "D"), (&images.i[a], "I"), (&images.h[a], "H")] {
                for (y, yn) in [(&images.d[b], "D"), (&images.i[b], "I"), (&images.h[b], "H")] {
                    if &(x * y) != &(y * x) {
                        return Err(AutError::RelationViolation(format!(
                            "{}{} and {}{} do not commute",
                            xn,
                            a + 1,
                            yn,
                            b + 1
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Reads the permutation and torus vector from the quotient residues of
/// the derivation images: each must be a single term  lambda^{-1}
/// z_{s(k)}^{-1}  and the slots must form a bijection.
fn read_perm_torus(images: &GeneratorImages) -> Result<(Permutation, TorusVector), AutError> {
    let n = images.n();
    let mut perm_images = vec![0usize; n];
    let mut lambda = Vec::with_capacity(n);
    for k in 0..n {
        let res = images.d[k].quotient_image();
        let mut it = res.terms();
        let Some((exp, coeff)) = it.next() else {
            return Err(AutError::BadResidue);
        };
        if it.next().is_some() {
            return Err(AutError::BadResidue);
        }
        let Some(c) = coeff.as_constant() else {
            return Err(AutError::BadResidue);
        };
        let target = exp.iter().position(|&e| e == -1);
        match target {
            Some(j) if exp.iter().enumerate().all(|(t, &e)| t == j || e == 0) => {
                perm_images[k] = j;
                lambda.push(c.recip());
            }
            _ => return Err(AutError::BadResidue),
        }
    }
    let perm = Permutation::from_images(perm_images).map_err(|_| AutError::BadResidue)?;
    let torus = TorusVector::new(lambda).map_err(|_| AutError::BadResidue)?;
    Ok((perm, torus))
}

/// Cross-checks the integration and Euler residues against the permutation
/// and torus read from the derivations.
fn check_integ_euler_residues(
    images: &GeneratorImages,
    perm: &Permutation,
    torus: &TorusVector,
) -> Result<(), AutError> {
    let n = images.n();
    for k in 0..n {
        let j = perm.apply(k);
        let expected_i = BElement::z(j, n).scale(torus.get(k));
        if images.i[k].quotient_image() != expected_i {
            return Err(AutError::BadResidue);
        }
        if images.h[k].quotient_image() != BElement::h(j, n) {
            return Err(AutError::BadResidue);
        }
    }
    Ok(())
}

/// The idempotent projecting onto divided powers with index below `d` in
/// the chosen slots and at least `d` in the others.
pub fn window_idempotent(low_slots: &[usize], d: u32, n: usize) -> Operator {
    assert!(d >= 1);
    let mut out = Operator::one(n);
    for slot in 0..n {
        let mut p = Operator::zero(n);
        for j in 0..d {
            p = &p + &Operator::matrix_unit(slot, n, j, j);
        }
        let proj = if low_slots.contains(&slot) {
            p
        } else {
            &Operator::one(n) - &p
        };
        out = &out * &proj;
    }
    out
}

fn check_kernel_residues(images: &GeneratorImages) -> Result<(), AutError> {
    let n = images.n();
    for k in 0..n {
        if images.d[k].quotient_image() != BElement::z_pow(k, n, -1)
            || images.i[k].quotient_image() != BElement::z(k, n)
            || images.h[k].quotient_image() != BElement::h(k, n)
        {
            return Err(AutError::NotInKernelXi);
        }
    }
    Ok(())
}

/// Window size for the conjugating-unit formulas: one more than the
/// largest matrix index appearing in any difference image - generator.
fn conjugator_window(images: &GeneratorImages) -> u32 {
    let n = images.n();
    let mut d = 0;
    for k in 0..n {
        for (img, gen) in [
            (&images.d[k], Operator::deriv(k + 1, n)),
            (&images.i[k], Operator::integ(k + 1, n)),
            (&images.h[k], Operator::euler(k + 1, n)),
        ] {
            if let Some(m) = (img - &gen).max_matrix_index() {
                d = d.max(m + 1);
            }
        }
    }
    d.max(1)
}

fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    (1..(1u32 << n))
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// The unit phi conjugating the identity to the given kernel images: over
/// the window of size d, phi maps each low divided power to its image
/// basis vector and fixes everything above.
pub fn conjugating_unit_from_images(images: &GeneratorImages) -> Result<Operator, AutError> {
    check_kernel_residues(images)?;
    let n = images.n();
    let d = conjugator_window(images);
    // powers of the image derivations and of plain integrations, up to d
    let d_pows: Vec<Vec<Operator>> = (0..n).map(|k| powers(&images.d[k], d)).collect();
    let i_pows: Vec<Vec<Operator>> = (0..n)
        .map(|k| powers(&Operator::integ(k + 1, n), d))
        .collect();
    let mut phi = window_idempotent(&[], d, n);
    for low in nonempty_subsets(n) {
        let mut sum = Operator::zero(n);
        let mut alpha = vec![0u32; low.len()];
        loop {
            let mut term = Operator::one(n);
            for (t, &slot) in low.iter().enumerate() {
                term = &term * &d_pows[slot][(d - alpha[t]) as usize];
            }
            for (t, &slot) in low.iter().enumerate() {
                term = &term * &i_pows[slot][(d - alpha[t]) as usize];
            }
            // e_{aa} * p(low, d) = e_{aa}: every index is below d
            for (t, &slot) in low.iter().enumerate() {
                term = &term * &Operator::matrix_unit(slot, n, alpha[t], alpha[t]);
            }
            sum = &sum + &term;
            if !advance(&mut alpha, d) {
                break;
            }
        }
        let others: Vec<usize> = (0..n).filter(|s| !low.contains(s)).collect();
        let q_high = high_projector(&others, d, n);
        phi = &phi + &(&sum * &q_high);
    }
    Ok(phi)
}

/// The inverse unit, built from the image integrations and image matrix
/// units over the same window.
pub fn conjugating_unit_inverse_from_images(images: &GeneratorImages) -> Result<Operator, AutError> {
    check_kernel_residues(images)?;
    let n = images.n();
    let d = conjugator_window(images);
    let d_pows: Vec<Vec<Operator>> = (0..n)
        .map(|k| powers(&Operator::deriv(k + 1, n), d))
        .collect();
    let i_pows: Vec<Vec<Operator>> = (0..n).map(|k| powers(&images.i[k], d)).collect();
    // image matrix units e'_{jj}(k) = s(I)^j s(D)^j - s(I)^{j+1} s(D)^{j+1}
    let image_units: Vec<Vec<Operator>> = (0..n)
        .map(|k| {
            let ip = powers(&images.i[k], d + 1);
            let dp = powers(&images.d[k], d + 1);
            (0..d)
                .map(|j| {
                    let ju = j as usize;
                    &(&ip[ju] * &dp[ju]) - &(&ip[ju + 1] * &dp[ju + 1])
                })
                .collect()
        })
        .collect();
    let one = Operator::one(n);
    // q'(full, d) = prod_k (1 - sum_j e'_jj(k))
    let mut phi_inv = one.clone();
    for units in image_units.iter() {
        let mut p = Operator::zero(n);
        for u in units {
            p = &p + u;
        }
        phi_inv = &phi_inv * &(&one - &p);
    }
    for low in nonempty_subsets(n) {
        let mut sum = Operator::zero(n);
        let mut alpha = vec![0u32; low.len()];
        loop {
            let mut term = Operator::one(n);
            for (t, &slot) in low.iter().enumerate() {
                term = &term * &d_pows[slot][(d - alpha[t]) as usize];
            }
            for (t, &slot) in low.iter().enumerate() {
                term = &term * &i_pows[slot][(d - alpha[t]) as usize];
            }
            // e'_{aa}(low) * p'(low, d) = e'_{aa}(low)
            for (t, &slot) in low.iter().enumerate() {
                term = &term * &image_units[slot][alpha[t] as usize];
            }
            sum = &sum + &term;
            if !advance(&mut alpha, d) {
                break;
            }
        }
        let mut q_high = one.clone();
        for (slot, units) in image_units.iter().enumerate() {
            if low.contains(&slot) {
                continue;
            }
            let mut p = Operator::zero(n);
            for u in units {
                p = &p + u;
            }
            q_high = &q_high * &(&one - &p);
        }
        phi_inv = &phi_inv + &(&sum * &q_high);
    }
    Ok(phi_inv)
}

fn powers(op: &Operator, up_to: u32) -> Vec<Operator> {
    let mut out = Vec::with_capacity(up_to as usize + 1);
    out.push(Operator::one(op.n()));
    for _ in 0..up_to {
        out.push(&out[out.len() - 1] * op);
    }
    out
}

fn advance(alpha: &mut [u32], bound: u32) -> bool {
    for a in alpha.iter_mut().rev() {
        *a += 1;
        if *a < bound {
            return true;
        }
        *a = 0;
    }
    false
}

fn high_projector(slots: &[usize], d: u32, n: usize) -> Operator {
    let one = Operator::one(n);
    let mut out = one.clone();
    for &slot in slots {
        let mut p = Operator::zero(n);
        for j in 0..d {
            p = &p + &Operator::matrix_unit(slot, n, j, j);
        }
        out = &out * &(&one - &p);
    }
    out
}

/// Recovers the canonical form from generator images: validates the
/// defining relations, reads the permutation and torus from the quotient
/// residues, computes the conjugating unit of the reduced images, and
/// verifies that the assembled automorphism reproduces every image.
pub fn recognize(images: &GeneratorImages) -> Result<CanonicalAutomorphism, AutError> {
    // the residue shape of the derivation images is checked first: a
    // derivation sent to a positive shift is impossible for index reasons
    // and is reported as a residue defect even when no completion of the
    // images could satisfy the relations
    let (perm, torus) = read_perm_torus(images)?;
    validate_relations(images)?;
    check_integ_euler_residues(images, &perm, &torus)?;
    let perm_inv = perm.inverse();
    let torus_inv = torus.inverse();
    let reduced = images.map(|op| torus_action(&torus_inv, &perm_action(&perm_inv, op)));
    let phi = conjugating_unit_from_images(&reduced)?;
    let phi_inv = conjugating_unit_inverse_from_images(&reduced)?;
    let inner = InnerUnit::new(phi, phi_inv).map_err(|_| AutError::ConjugatorMismatch)?;
    let cand = CanonicalAutomorphism::new(perm, torus, inner);
    let n = images.n();
    for k in 0..n {
        if cand.apply(&Operator::deriv(k + 1, n)) != images.d[k]
            || cand.apply(&Operator::integ(k + 1, n)) != images.i[k]
            || cand.apply(&Operator::euler(k + 1, n)) != images.h[k]
        {
            return Err(AutError::ConjugatorMismatch);
        }
    }
    Ok(cand)
}

/// Inner automorphisms are exactly those whose derivation images reduce to
/// the derivations modulo the maximal ideal.
pub fn is_inner(images: &GeneratorImages) -> Result<bool, AutError> {
    validate_relations(images)?;
    let n = images.n();
    Ok((0..n).all(|k| images.d[k].quotient_image() == BElement::z_pow(k, n, -1)))
}

impl fmt::Display for CanonicalAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let perm = self
            .perm
            .one_based()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let lambda = self
            .torus
            .entries()
            .iter()
            .map(crate::scalar::format_scalar)
            .collect::<Vec<_>>()
            .join(", ");
        write!(f, "perm [{perm}] lambda [{lambda}] phi {}", self.inner.phi())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn e(r: u32, c: u32) -> Operator {
        Operator::matrix_unit(0, 1, r, c)
    }

    fn omega_1_e00() -> CanonicalAutomorphism {
        let phi = &Operator::one(1) + &e(0, 0);
        CanonicalAutomorphism::from_inner(InnerUnit::from_finite_unit(phi).unwrap())
    }

    #[test]
    fn torus_and_perm_actions() {
        let n = 1;
        let t = CanonicalAutomorphism::from_torus(TorusVector::new(vec![int(2)]).unwrap());
        assert_eq!(
            t.apply(&Operator::deriv(1, n)),
            Operator::deriv(1, n).scale(&ratio(1, 2))
        );
        let s = CanonicalAutomorphism::from_perm(Permutation::transposition(2, 0, 1));
        assert_eq!(s.apply(&Operator::euler(1, 2)), Operator::euler(2, 2));
        let di = &Operator::deriv(1, 2) * &Operator::integ(2, 2);
        let id = &Operator::integ(1, 2) * &Operator::deriv(2, 2);
        assert_eq!(s.apply(&di), id);
        // torus scaling of a matrix unit follows its degree
        let t2 = TorusVector::new(vec![int(3)]).unwrap();
        assert_eq!(
            torus_action(&t2, &e(2, 0)),
            e(2, 0).scale(&int(9))
        );
        assert_eq!(torus_action(&TorusVector::ones(1), &e(1, 2)), e(1, 2));
    }

    #[test]
    fn inner_action_example() {
        let omega = omega_1_e00();
        let d = Operator::deriv(1, 1);
        assert_eq!(omega.apply(&d), &d + &e(0, 1));
        let i = Operator::integ(1, 1);
        assert_eq!(omega.apply(&i), &i - &e(1, 0).scale(&ratio(1, 2)));
        let h = Operator::euler(1, 1);
        assert_eq!(omega.apply(&h), h);
    }

    #[test]
    fn window_idempotents() {
        let p = window_idempotent(&[0], 2, 1);
        assert_eq!(p, &e(0, 0) + &e(1, 1));
        let q = window_idempotent(&[], 1, 1);
        assert_eq!(q, &Operator::one(1) - &e(0, 0));
        // the window idempotents over all slot subsets sum to 1
        let n = 2;
        let mut total = Operator::zero(n);
        let subsets: Vec<Vec<usize>> = vec![vec![], vec![0], vec![1], vec![0, 1]];
        for s in &subsets {
            total = &total + &window_idempotent(s, 2, n);
        }
        assert_eq!(total, Operator::one(n));
        // and they are orthogonal idempotents
        for a in &subsets {
            for b in &subsets {
                let pa = window_idempotent(a, 2, n);
                let pb = window_idempotent(b, 2, n);
                let prod = &pa * &pb;
                if a == b {
                    assert_eq!(prod, pa);
                } else {
                    assert!(prod.is_zero());
                }
            }
        }
    }

    #[test]
    fn conjugating_unit_identity() {
        let images = CanonicalAutomorphism::identity(1).images();
        assert_eq!(conjugating_unit_from_images(&images).unwrap(), Operator::one(1));
        assert_eq!(
            conjugating_unit_inverse_from_images(&images).unwrap(),
            Operator::one(1)
        );
        let images2 = CanonicalAutomorphism::identity(2).images();
        assert_eq!(conjugating_unit_from_images(&images2).unwrap(), Operator::one(2));
    }

    #[test]
    fn conjugating_unit_examples() {
        let omega = omega_1_e00();
        let images = omega.images();
        let phi = conjugating_unit_from_images(&images).unwrap();
        assert_eq!(phi, &Operator::one(1) + &e(0, 0));
        let phi_inv = conjugating_unit_inverse_from_images(&images).unwrap();
        assert_eq!(phi_inv, &Operator::one(1) - &e(0, 0).scale(&ratio(1, 2)));

        let t = CanonicalAutomorphism::transvection1(0, 1, int(1)).unwrap();
        let images = t.images();
        assert_eq!(
            conjugating_unit_from_images(&images).unwrap(),
            &Operator::one(1) + &e(0, 1)
        );
        assert_eq!(
            conjugating_unit_inverse_from_images(&images).unwrap(),
            &Operator::one(1) - &e(0, 1)
        );
    }

    #[test]
    fn conjugating_unit_rejects_non_kernel() {
        let t = CanonicalAutomorphism::from_torus(TorusVector::new(vec![int(2)]).unwrap());
        let images = t.images();
        assert_eq!(
            conjugating_unit_from_images(&images),
            Err(AutError::NotInKernelXi)
        );
    }

    #[test]
    fn recognize_examples() {
        let t = CanonicalAutomorphism::from_torus(TorusVector::new(vec![int(5)]).unwrap());
        assert_eq!(recognize(&t.images()).unwrap(), t);

        let omega = omega_1_e00();
        assert_eq!(recognize(&omega.images()).unwrap(), omega);

        // derivation mapped to integration: impossible by the index
        let n = 1;
        let mut images = CanonicalAutomorphism::identity(n).images();
        images.d[0] = Operator::integ(1, n);
        images.i[0] = Operator::deriv(1, n);
        assert_eq!(recognize(&images), Err(AutError::BadResidue));
    }

    #[test]
    fn recognize_rejects_bad_relations() {
        let n = 1;
        let mut images = CanonicalAutomorphism::identity(n).images();
        images.h[0] = &images.h[0] + &e(1, 1);
        assert!(matches!(
            recognize(&images),
            Err(AutError::RelationViolation(_))
        ));
    }

    #[test]
    fn inner_detection() {
        let omega = omega_1_e00();
        assert!(is_inner(&omega.images()).unwrap());
        let t = CanonicalAutomorphism::from_torus(TorusVector::new(vec![int(2)]).unwrap());
        assert!(!is_inner(&t.images()).unwrap());
        assert!(is_inner(&CanonicalAutomorphism::identity(1).images()).unwrap());
    }

    #[test]
    fn compose_and_invert() {
        let t1 = CanonicalAutomorphism::from_torus(TorusVector::new(vec![int(2)]).unwrap());
        let t2 = CanonicalAutomorphism::from_torus(TorusVector::new(vec![int(3)]).unwrap());
        let prod = t1.compose(&t2);
        assert_eq!(prod.torus().entries()[0], int(6));

        let s = CanonicalAutomorphism::from_perm(Permutation::transposition(2, 0, 1));
        let lam = CanonicalAutomorphism::from_torus(TorusVector::new(vec![int(2), int(3)]).unwrap());
        let sl = s.compose(&lam);
        assert_eq!(sl.torus().entries(), &[int(2), int(3)]);
        let ls = lam.compose(&s);
        assert_eq!(ls.torus().entries(), &[int(3), int(2)]);

        let omega = omega_1_e00();
        let sigma = t1.compose(&omega);
        assert_eq!(sigma.compose(&sigma.invert()), CanonicalAutomorphism::identity(1));
        assert_eq!(sigma.invert().invert(), sigma);
        assert_eq!(
            omega.invert().inner().phi(),
            &(&Operator::one(1) - &e(0, 0).scale(&ratio(1, 2)))
        );
    }

    #[test]
    fn inner_units_multiply() {
        let u = InnerUnit::from_finite_unit(&Operator::one(1) + &e(0, 1)).unwrap();
        let v = InnerUnit::from_finite_unit(&Operator::one(1) + &e(1, 0).scale(&int(2))).unwrap();
        let a = CanonicalAutomorphism::from_inner(u.clone());
        let b = CanonicalAutomorphism::from_inner(v.clone());
        let ab = a.compose(&b);
        assert!(ab.perm().is_identity());
        assert!(ab.torus().is_ones());
        assert_eq!(ab.inner().phi(), &(u.phi() * v.phi()));
    }

    #[test]
    fn star_conjugation() {
        let t = CanonicalAutomorphism::from_torus(TorusVector::new(vec![int(4)]).unwrap());
        let st = t.star_conjugate();
        assert_eq!(st.torus().entries()[0], ratio(1, 4));
        let id = CanonicalAutomorphism::identity(1);
        assert_eq!(id.star_conjugate(), id);
        let omega = omega_1_e00();
        assert_eq!(omega.star_conjugate().star_conjugate(), omega);
    }

    #[test]
    fn named_generators() {
        let t = CanonicalAutomorphism::transvection1(0, 1, int(1)).unwrap();
        assert_eq!(t.inner().phi(), &(&Operator::one(1) + &e(0, 1)));
        assert!(CanonicalAutomorphism::transvection1(1, 1, int(1)).is_err());
        assert!(CanonicalAutomorphism::transvection1(0, 1, int(0)).is_err());
        let d = CanonicalAutomorphism::dilation1(int(3)).unwrap();
        assert_eq!(d.inner().phi(), &(&Operator::one(1) + &e(1, 1).scale(&int(3))));
        assert!(matches!(
            CanonicalAutomorphism::dilation1(int(-1)),
            Err(AutError::BadParameter(_))
        ));
    }

    #[test]
    fn unit_validation() {
        let bad = InnerUnit::new(&Operator::one(1) + &e(0, 0), Operator::one(1));
        assert_eq!(bad.unwrap_err(), AutError::NotUnit);
        // mutually inverse but not congruent to 1 mod the maximal ideal
        let two = Operator::one(1).scale(&int(2));
        let half = Operator::one(1).scale(&ratio(1, 2));
        assert_eq!(InnerUnit::new(two, half).unwrap_err(), AutError::NotUnit);
    }
}
