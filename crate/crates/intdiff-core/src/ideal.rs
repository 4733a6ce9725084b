//! The ideal lattice in minimal-prime antichain form.
//!
//! Every proper nonzero ideal is a unique product (= intersection) of
//! pairwise incomparable prime ideals, and each nonzero prime is determined
//! by a nonempty subset of tensor slots. A proper ideal is therefore stored
//! as an antichain of nonempty slot subsets; `Zero` and `Whole` complete the
//! lattice. All operations are exact set combinatorics.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// A set of tensor slots, 0-based.
pub type SlotSet = BTreeSet<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("a prime ideal needs a nonempty slot set")]
    EmptySet,
    #[error("slot {0} out of range for n = {1}")]
    SlotOutOfRange(usize, usize),
    #[error("descriptor is not a proper nonzero ideal")]
    NotProper,
    #[error("pattern family is not an antichain")]
    NotAntichain,
    #[error("enumeration is only supported for n <= {0}")]
    TooLarge(usize),
    #[error("cannot parse ideal descriptor: {0}")]
    Parse(String),
}

/// Number of antichains in the lattice of subsets of an n-element set,
/// for n = 1..=5. Used as the enumeration cross-check.
pub const DEDEKIND: [usize; 5] = [3, 6, 20, 168, 7581];

const MAX_ENUM: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Kind {
    Zero,
    Proper(BTreeSet<SlotSet>),
    Whole,
}

/// An ideal of the n-slot operator algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealDescriptor {
    n: usize,
    kind: Kind,
}

fn minimalize(sets: BTreeSet<SlotSet>) -> BTreeSet<SlotSet> {
    sets.iter()
        .filter(|s| !sets.iter().any(|t| *t != **s && t.is_subset(s)))
        .cloned()
        .collect()
}

impl IdealDescriptor {
    pub fn zero(n: usize) -> Self {
        IdealDescriptor { n, kind: Kind::Zero }
    }

    pub fn whole(n: usize) -> Self {
        IdealDescriptor { n, kind: Kind::Whole }
    }

    /// The prime ideal attached to a nonempty slot subset.
    pub fn prime<I: IntoIterator<Item = usize>>(slots: I, n: usize) -> Result<Self, IdealError> {
        let set: SlotSet = slots.into_iter().collect();
        if set.is_empty() {
            return Err(IdealError::EmptySet);
        }
        if let Some(&bad) = set.iter().find(|&&s| s >= n) {
            return Err(IdealError::SlotOutOfRange(bad, n));
        }
        Ok(IdealDescriptor {
            n,
            kind: Kind::Proper(BTreeSet::from([set])),
        })
    }

    /// The unique maximal ideal (kernel of the quotient map).
    pub fn maximal(n: usize) -> Self {
        Self::prime(0..n, n).expect("n >= 1")
    }

    /// The smallest nonzero ideal: intersection of all height-one primes.
    pub fn smallest_nonzero(n: usize) -> Self {
        IdealDescriptor {
            n,
            kind: Kind::Proper((0..n).map(|i| BTreeSet::from([i])).collect()),
        }
    }

    /// Builds a proper ideal from any family of nonempty slot subsets; the
    /// family is reduced to its minimal members.
    pub fn proper_from_family<I>(family: I, n: usize) -> Result<Self, IdealError>
    where
        I: IntoIterator<Item = SlotSet>,
    {
        let mut sets = BTreeSet::new();
        for set in family {
            if set.is_empty() {
                return Err(IdealError::EmptySet);
            }
            if let Some(&bad) = set.iter().find(|&&s| s >= n) {
                return Err(IdealError::SlotOutOfRange(bad, n));
            }
            sets.insert(set);
        }
        if sets.is_empty() {
            return Err(IdealError::NotProper);
        }
        Ok(IdealDescriptor {
            n,
            kind: Kind::Proper(minimalize(sets)),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.kind == Kind::Zero
    }

    pub fn is_whole(&self) -> bool {
        self.kind == Kind::Whole
    }

    pub fn is_proper(&self) -> bool {
        matches!(self.kind, Kind::Proper(_))
    }

    /// Minimal primes of a proper nonzero ideal, as an antichain of slot sets.
    pub fn min_primes(&self) -> Result<&BTreeSet<SlotSet>, IdealError> {
        match &self.kind {
            Kind::Proper(sets) => Ok(sets),
            _ => Err(IdealError::NotProper),
        }
    }

    /// True for the zero ideal and for proper ideals with a single minimal
    /// prime; the whole ring is not prime.
    pub fn is_prime(&self) -> bool {
        match &self.kind {
            Kind::Zero => true,
            Kind::Proper(sets) => sets.len() == 1,
            Kind::Whole => false,
        }
    }

    /// Height of a prime ideal: 0 for the zero ideal, |I| for the prime of
    /// slot set I. `None` when the ideal is not prime.
    pub fn height(&self) -> Option<usize> {
        match &self.kind {
            Kind::Zero => Some(0),
            Kind::Proper(sets) if sets.len() == 1 => Some(sets.iter().next().unwrap().len()),
            _ => None,
        }
    }

    /// Ideal sum. Zero is neutral, the whole ring absorbs; for proper ideals
    /// the minimal primes of the sum are the minimal unions I ∪ J.
    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        match (&self.kind, &other.kind) {
            (Kind::Zero, _) => other.clone(),
            (_, Kind::Zero) => self.clone(),
            (Kind::Whole, _) | (_, Kind::Whole) => Self::whole(self.n),
            (Kind::Proper(a), Kind::Proper(b)) => {
                let unions: BTreeSet<SlotSet> = a
                    .iter()
                    .flat_map(|i| b.iter().map(move |j| i.union(j).cloned().collect()))
                    .collect();
                IdealDescriptor {
                    n: self.n,
                    kind: Kind::Proper(minimalize(unions)),
                }
            }
        }
    }

    /// Ideal product, which coincides with the intersection: the union of
    /// the two antichains, reduced to its minimal members.
    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        match (&self.kind, &other.kind) {
            (Kind::Zero, _) | (_, Kind::Zero) => Self::zero(self.n),
            (Kind::Whole, _) => other.clone(),
            (_, Kind::Whole) => self.clone(),
            (Kind::Proper(a), Kind::Proper(b)) => {
                let all: BTreeSet<SlotSet> = a.union(b).cloned().collect();
                IdealDescriptor {
                    n: self.n,
                    kind: Kind::Proper(minimalize(all)),
                }
            }
        }
    }

    /// Same as [`product`](Self::product); every product of ideals here is
    /// an intersection.
    pub fn intersect(&self, other: &Self) -> Self {
        self.product(other)
    }

    /// `other ⊆ self`, decided through the lattice law b ⊆ a ⟺ a ∩ b = b.
    pub fn contains(&self, other: &Self) -> bool {
        self.intersect(other) == *other
    }

    /// Rebuilds the ideal as the product of its minimal primes.
    pub fn product_of_min_primes(&self) -> Result<Self, IdealError> {
        let sets = self.min_primes()?;
        let mut acc = Self::whole(self.n);
        for set in sets {
            acc = acc.product(&Self::prime(set.iter().copied(), self.n)?);
        }
        Ok(acc)
    }

    /// The ideal attached to an antichain of slot patterns, where a pattern
    /// lists the slots carrying the finite-rank factor. The empty family
    /// gives the zero ideal and the empty pattern gives the whole ring.
    pub fn from_pattern_family(patterns: &[SlotSet], n: usize) -> Result<Self, IdealError> {
        for p in patterns {
            if let Some(&bad) = p.iter().find(|&&s| s >= n) {
                return Err(IdealError::SlotOutOfRange(bad, n));
            }
        }
        let distinct: BTreeSet<&SlotSet> = patterns.iter().collect();
        for a in &distinct {
            for b in &distinct {
                if a != b && a.is_subset(b) {
                    return Err(IdealError::NotAntichain);
                }
            }
        }
        let mut acc = Self::zero(n);
        for p in &distinct {
            let summand = if p.is_empty() {
                Self::whole(n)
            } else {
                let mut t = Self::whole(n);
                for &i in p.iter() {
                    t = t.product(&Self::prime([i], n)?);
                }
                t
            };
            acc = acc.sum(&summand);
        }
        Ok(acc)
    }

    /// The orbit of the antichain under a slot permutation (0-based images).
    pub fn permuted(&self, images: &[usize]) -> Self {
        match &self.kind {
            Kind::Proper(sets) => IdealDescriptor {
                n: self.n,
                kind: Kind::Proper(
                    sets.iter()
                        .map(|s| s.iter().map(|&i| images[i]).collect())
                        .collect(),
                ),
            },
            _ => self.clone(),
        }
    }
}

/// All ideals for small n, each exactly once, in a fixed deterministic
/// order: zero first, then proper ideals in antichain-extension order, the
/// whole ring last. The count is the Dedekind number.
pub fn enumerate_ideals(n: usize) -> Result<Vec<IdealDescriptor>, IdealError> {
    let chains = enumerate_antichains(n)?;
    let mut out = Vec::with_capacity(chains.len() + 2);
    out.push(IdealDescriptor::zero(n));
    for sets in chains {
        out.push(IdealDescriptor {
            n,
            kind: Kind::Proper(sets),
        });
    }
    out.push(IdealDescriptor::whole(n));
    Ok(out)
}

/// Sequential reference implementation of [`enumerate_ideals`].
pub fn enumerate_ideals_sequential(n: usize) -> Result<Vec<IdealDescriptor>, IdealError> {
    let chains = enumerate_antichains_sequential(n)?;
    let mut out = Vec::with_capacity(chains.len() + 2);
    out.push(IdealDescriptor::zero(n));
    for sets in chains {
        out.push(IdealDescriptor {
            n,
            kind: Kind::Proper(sets),
        });
    }
    out.push(IdealDescriptor::whole(n));
    Ok(out)
}

fn check_enum_bound(n: usize) -> Result<Vec<u32>, IdealError> {
    if n == 0 || n > MAX_ENUM {
        return Err(IdealError::TooLarge(MAX_ENUM));
    }
    // nonempty subsets of {0..n} as bitmasks, in increasing numeric order
    Ok((1..(1u32 << n)).collect())
}

fn comparable(a: u32, b: u32) -> bool {
    a & b == a || a & b == b
}

fn mask_to_set(mask: u32) -> SlotSet {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

fn extend_antichain(masks: &[u32], chain: &mut Vec<u32>, start: usize, out: &mut Vec<BTreeSet<SlotSet>>) {
    for idx in start..masks.len() {
        let m = masks[idx];
        if chain.iter().any(|&c| comparable(c, m)) {
            continue;
        }
        chain.push(m);
        out.push(chain.iter().map(|&c| mask_to_set(c)).collect());
        extend_antichain(masks, chain, idx + 1, out);
        chain.pop();
    }
}

/// Nonempty antichains of nonempty subsets of {0..n}, in extension order.
fn enumerate_antichains_sequential(n: usize) -> Result<Vec<BTreeSet<SlotSet>>, IdealError> {
    let masks = check_enum_bound(n)?;
    let mut out = Vec::new();
    let mut chain = Vec::new();
    extend_antichain(&masks, &mut chain, 0, &mut out);
    Ok(out)
}

#[cfg(feature = "parallel")]
fn enumerate_antichains(n: usize) -> Result<Vec<BTreeSet<SlotSet>>, IdealError> {
    let masks = check_enum_bound(n)?;
    // partition by the first chosen subset; merging in index order keeps the
    // output identical to the sequential version
    let branches: Vec<Vec<BTreeSet<SlotSet>>> = (0..masks.len())
        .into_par_iter()
        .map(|idx| {
            let mut out = Vec::new();
            let mut chain = vec![masks[idx]];
            out.push(chain.iter().map(|&c| mask_to_set(c)).collect());
            extend_antichain(&masks, &mut chain, idx + 1, &mut out);
            out
        })
        .collect();
    Ok(branches.into_iter().flatten().collect())
}

#[cfg(not(feature = "parallel"))]
fn enumerate_antichains(n: usize) -> Result<Vec<BTreeSet<SlotSet>>, IdealError> {
    enumerate_antichains_sequential(n)
}

/// Grouping of a generic ideal's minimal primes by height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericStructure {
    /// Slots not covered by any minimal prime.
    pub free_slots: usize,
    /// `(height, multiplicity)` pairs, ascending in height.
    pub blocks: Vec<(usize, usize)>,
}

impl GenericStructure {
    /// Predicted stabilizer order: m! · ∏ (h!)^k · k! over blocks (h, k).
    pub fn stabilizer_order(&self) -> usize {
        fn fact(k: usize) -> usize {
            (1..=k).product::<usize>().max(1)
        }
        let mut order = fact(self.free_slots);
        for &(h, k) in &self.blocks {
            order *= fact(h).pow(k as u32) * fact(k);
        }
        order
    }
}

/// Stabilizer of an ideal under slot permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerReport {
    pub n: usize,
    /// Stabilizing permutations as 0-based image arrays, lexicographic.
    pub permutations: Vec<Vec<usize>>,
    pub order: usize,
    /// Index in the full symmetric group; `order * index == n!`.
    pub index: usize,
    /// Present exactly when the ideal is generic.
    pub generic: Option<GenericStructure>,
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

fn stabilizes(antichain: &BTreeSet<SlotSet>, images: &[usize]) -> bool {
    antichain
        .iter()
        .all(|s| antichain.contains(&s.iter().map(|&i| images[i]).collect::<SlotSet>()))
}

/// True when the minimal primes have pairwise disjoint slot sets.
pub fn is_generic(ideal: &IdealDescriptor) -> Result<bool, IdealError> {
    let sets = ideal.min_primes()?;
    let mut seen = SlotSet::new();
    for s in sets {
        if s.iter().any(|i| seen.contains(i)) {
            return Ok(false);
        }
        seen.extend(s.iter().copied());
    }
    Ok(true)
}

/// Height/multiplicity structure of a generic ideal; `None` if not generic.
pub fn generic_structure(ideal: &IdealDescriptor) -> Result<Option<GenericStructure>, IdealError> {
    if !is_generic(ideal)? {
        return Ok(None);
    }
    let sets = ideal.min_primes()?;
    let covered: usize = sets.iter().map(|s| s.len()).sum();
    let mut by_height: std::collections::BTreeMap<usize, usize> = Default::default();
    for s in sets {
        *by_height.entry(s.len()).or_insert(0) += 1;
    }
    Ok(Some(GenericStructure {
        free_slots: ideal.n() - covered,
        blocks: by_height.into_iter().collect(),
    }))
}

fn stabilizer_from_perms(ideal: &IdealDescriptor, perms: Vec<Vec<usize>>) -> Result<StabilizerReport, IdealError> {
    let n = ideal.n();
    let order = perms.len();
    let n_fact: usize = (1..=n).product::<usize>().max(1);
    Ok(StabilizerReport {
        n,
        order,
        index: n_fact / order,
        generic: generic_structure(ideal)?,
        permutations: perms,
    })
}

/// Exhaustive scan of the symmetric group for permutations preserving the
/// antichain of minimal primes.
pub fn stabilizer(ideal: &IdealDescriptor) -> Result<StabilizerReport, IdealError> {
    let sets = ideal.min_primes()?.clone();
    let perms = all_permutations(ideal.n());
    #[cfg(feature = "parallel")]
    let kept: Vec<Vec<usize>> = perms
        .into_par_iter()
        .filter(|p| stabilizes(&sets, p))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let kept: Vec<Vec<usize>> = perms.into_iter().filter(|p| stabilizes(&sets, p)).collect();
    stabilizer_from_perms(ideal, kept)
}

/// Sequential reference implementation of [`stabilizer`].
pub fn stabilizer_sequential(ideal: &IdealDescriptor) -> Result<StabilizerReport, IdealError> {
    let sets = ideal.min_primes()?.clone();
    let kept: Vec<Vec<usize>> = all_permutations(ideal.n())
        .into_iter()
        .filter(|p| stabilizes(&sets, p))
        .collect();
    stabilizer_from_perms(ideal, kept)
}

/// The invariant ideals: zero, the products of all primes of a fixed
/// height s = 1..n, and the whole ring — n + 2 ideals in total.
pub fn invariant_ideals(n: usize) -> Vec<IdealDescriptor> {
    let mut out = vec![IdealDescriptor::zero(n)];
    for size in 1..=n {
        let sets: BTreeSet<SlotSet> = subsets_of_size(n, size);
        out.push(IdealDescriptor {
            n,
            kind: Kind::Proper(sets),
        });
    }
    out.push(IdealDescriptor::whole(n));
    out
}

fn subsets_of_size(n: usize, size: usize) -> BTreeSet<SlotSet> {
    let mut out = BTreeSet::new();
    let mut cur = SlotSet::new();
    fn rec(n: usize, size: usize, from: usize, cur: &mut SlotSet, out: &mut BTreeSet<SlotSet>) {
        if cur.len() == size {
            out.insert(cur.clone());
            return;
        }
        for i in from..n {
            cur.insert(i);
            rec(n, size, i + 1, cur, out);
            cur.remove(&i);
        }
    }
    rec(n, size, 0, &mut cur, &mut out);
    out
}

impl fmt::Display for IdealDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Zero => write!(f, "0"),
            Kind::Whole => write!(f, "1"),
            Kind::Proper(sets) => {
                let body = sets
                    .iter()
                    .map(|s| {
                        let inner = s
                            .iter()
                            .map(|i| (i + 1).to_string())
                            .collect::<Vec<_>>()
                            .join(",");
                        format!("{{{inner}}}")
                    })
                    .collect::<Vec<_>>()
                    .join(", ");
                write!(f, "min{{ {body} }}")
            }
        }
    }
}

/// Parses `"0"`, `"1"`, or `"min{ {1}, {2,3} }"` with 1-based slots.
/// The dimension is supplied separately because it is not recoverable from
/// the text.
pub fn parse_descriptor(text: &str, n: usize) -> Result<IdealDescriptor, IdealError> {
    let t = text.trim();
    match t {
        "0" => return Ok(IdealDescriptor::zero(n)),
        "1" => return Ok(IdealDescriptor::whole(n)),
        _ => {}
    }
    let body = t
        .strip_prefix("min{")
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| IdealError::Parse(format!("expected 0, 1, or min{{ ... }}: {t:?}")))?;
    let mut sets = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('{')
            .ok_or_else(|| IdealError::Parse(format!("expected '{{' in {rest:?}")))?;
        let (inner, tail) = open
            .split_once('}')
            .ok_or_else(|| IdealError::Parse("unclosed '{'".into()))?;
        let mut set = SlotSet::new();
        for part in inner.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let v: usize = part
                .parse()
                .map_err(|_| IdealError::Parse(format!("bad slot index {part:?}")))?;
            if v == 0 {
                return Err(IdealError::Parse("slot indices are 1-based".into()));
            }
            set.insert(v - 1);
        }
        if set.is_empty() {
            return Err(IdealError::EmptySet);
        }
        sets.push(set);
        rest = tail.trim().strip_prefix(',').unwrap_or(tail).trim_start();
    }
    IdealDescriptor::proper_from_family(sets, n)
}

impl fmt::Display for StabilizerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order {}", self.order)?;
        writeln!(f, "index {}", self.index)?;
        match &self.generic {
            Some(g) => {
                let blocks = g
                    .blocks
                    .iter()
                    .map(|(h, k)| format!("({h},{k})"))
                    .collect::<Vec<_>>()
                    .join(" ");
                writeln!(f, "generic m={} blocks={}", g.free_slots, blocks)?;
            }
            None => writeln!(f, "generic none")?,
        }
        for p in &self.permutations {
            let line = p
                .iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(f, "perm {line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(slots: &[usize], n: usize) -> IdealDescriptor {
        IdealDescriptor::prime(slots.iter().copied(), n).unwrap()
    }

    #[test]
    fn prime_construction() {
        assert_eq!(p(&[0], 2).height(), Some(1));
        assert_eq!(p(&[0, 1], 2), IdealDescriptor::maximal(2));
        assert_eq!(
            IdealDescriptor::prime([], 2),
            Err(IdealError::EmptySet)
        );
        assert_eq!(
            IdealDescriptor::prime([5], 2),
            Err(IdealError::SlotOutOfRange(5, 2))
        );
    }

    #[test]
    fn sum_rules() {
        let p1 = p(&[0], 2);
        let p2 = p(&[1], 2);
        assert_eq!(p1.sum(&p2), IdealDescriptor::maximal(2));
        let f2 = IdealDescriptor::smallest_nonzero(2);
        assert_eq!(f2.sum(&p1), p1);
        assert_eq!(p1.sum(&IdealDescriptor::zero(2)), p1);
        assert_eq!(p1.sum(&IdealDescriptor::whole(2)), IdealDescriptor::whole(2));
    }

    #[test]
    fn product_rules() {
        let p1 = p(&[0], 2);
        let p2 = p(&[1], 2);
        assert_eq!(p1.product(&p2), IdealDescriptor::smallest_nonzero(2));
        let a2 = IdealDescriptor::maximal(2);
        assert_eq!(p1.product(&a2), p1);
        assert_eq!(p1.product(&IdealDescriptor::whole(2)), p1);
        assert_eq!(p1.product(&p1), p1);
    }

    #[test]
    fn containment() {
        let p1 = p(&[0], 2);
        let p2 = p(&[1], 2);
        let f2 = IdealDescriptor::smallest_nonzero(2);
        assert!(p1.contains(&f2));
        assert!(!p2.contains(&p1));
        assert!(IdealDescriptor::whole(2).contains(&p1));
        assert!(p1.contains(&IdealDescriptor::zero(2)));
    }

    #[test]
    fn min_primes_and_primality() {
        let f2 = IdealDescriptor::smallest_nonzero(2);
        assert_eq!(f2.min_primes().unwrap().len(), 2);
        assert!(!f2.is_prime());
        let a2 = IdealDescriptor::maximal(2);
        assert!(a2.is_prime());
        assert_eq!(a2.height(), Some(2));
        assert!(IdealDescriptor::zero(2).is_prime());
        assert_eq!(IdealDescriptor::zero(2).height(), Some(0));
        assert!(IdealDescriptor::whole(2).min_primes().is_err());
    }

    #[test]
    fn pattern_families() {
        // all-zero pattern over one slot: the finite-rank ideal
        let f = IdealDescriptor::from_pattern_family(&[SlotSet::from([0])], 1).unwrap();
        assert_eq!(f, IdealDescriptor::smallest_nonzero(1));
        // empty family: zero ideal
        assert_eq!(
            IdealDescriptor::from_pattern_family(&[], 1).unwrap(),
            IdealDescriptor::zero(1)
        );
        // the empty pattern is the whole ring
        assert_eq!(
            IdealDescriptor::from_pattern_family(&[SlotSet::new()], 2).unwrap(),
            IdealDescriptor::whole(2)
        );
        // comparable patterns are rejected
        assert_eq!(
            IdealDescriptor::from_pattern_family(&[SlotSet::from([0]), SlotSet::from([0, 1])], 2),
            Err(IdealError::NotAntichain)
        );
    }

    #[test]
    fn enumeration_counts() {
        for n in 1..=4 {
            let ideals = enumerate_ideals(n).unwrap();
            assert_eq!(ideals.len(), DEDEKIND[n - 1], "n = {n}");
            let distinct: std::collections::BTreeSet<String> =
                ideals.iter().map(|i| i.to_string()).collect();
            assert_eq!(distinct.len(), ideals.len());
            assert_eq!(ideals, enumerate_ideals_sequential(n).unwrap());
        }
        assert_eq!(enumerate_ideals(6), Err(IdealError::TooLarge(5)));
        assert_eq!(enumerate_ideals(0), Err(IdealError::TooLarge(5)));
    }

    #[test]
    fn stabilizer_examples() {
        for n in 2..=5 {
            let rep = stabilizer(&p(&[0], n)).unwrap();
            assert_eq!(rep.index, n);
            assert_eq!(rep.order, (1..n).product::<usize>());
            assert_eq!(rep, stabilizer_sequential(&p(&[0], n)).unwrap());
        }
        let full = stabilizer(&IdealDescriptor::maximal(3)).unwrap();
        assert_eq!(full.index, 1);
        let f3 = stabilizer(&IdealDescriptor::smallest_nonzero(3)).unwrap();
        assert_eq!(f3.index, 1);
        assert!(stabilizer(&IdealDescriptor::zero(2)).is_err());
    }

    #[test]
    fn generic_ideals() {
        // two disjoint height-one primes inside three slots
        let a = p(&[0], 3).product(&p(&[1], 3));
        let g = generic_structure(&a).unwrap().unwrap();
        assert_eq!(g.free_slots, 1);
        assert_eq!(g.blocks, vec![(1, 2)]);
        assert_eq!(g.stabilizer_order(), 2);
        assert_eq!(stabilizer(&a).unwrap().order, 2);

        // overlapping supports are not generic
        let b = p(&[0, 1], 3).product(&p(&[0, 2], 3));
        assert!(!is_generic(&b).unwrap());
        assert_eq!(generic_structure(&b).unwrap(), None);

        let c = p(&[0, 1], 2);
        let gc = generic_structure(&c).unwrap().unwrap();
        assert_eq!((gc.free_slots, gc.blocks.clone()), (0, vec![(2, 1)]));
        assert_eq!(gc.stabilizer_order(), 2);
        assert_eq!(stabilizer(&c).unwrap().order, 2);
    }

    #[test]
    fn invariant_ideal_counts() {
        for n in 1..=4 {
            let inv = invariant_ideals(n);
            assert_eq!(inv.len(), n + 2);
            for ideal in &inv {
                if ideal.is_proper() {
                    assert_eq!(stabilizer(ideal).unwrap().index, 1);
                }
            }
        }
        let inv2 = invariant_ideals(2);
        assert_eq!(inv2[1], IdealDescriptor::smallest_nonzero(2));
        assert_eq!(inv2[2], IdealDescriptor::maximal(2));
    }

    #[test]
    fn display_and_parse() {
        let a = p(&[0], 3).product(&p(&[1, 2], 3));
        let text = a.to_string();
        assert_eq!(text, "min{ {1}, {2,3} }");
        assert_eq!(parse_descriptor(&text, 3).unwrap(), a);
        assert_eq!(parse_descriptor("0", 2).unwrap(), IdealDescriptor::zero(2));
        assert_eq!(parse_descriptor("1", 2).unwrap(), IdealDescriptor::whole(2));
        assert!(parse_descriptor("min{ }", 2).is_err());
        assert!(parse_descriptor("min{ {0} }", 2).is_err());
    }
}
