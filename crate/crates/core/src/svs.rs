//! Finite unions of symbolic vectors, with raw and canonical set algebra.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::symbolic_vector::{for_each_in_box, SymbolicVector};
use crate::vector::Vector;

/// Default number of insertion steps a single canonical union may take.
pub const DEFAULT_UNION_STEP_LIMIT: usize = 5_000_000;

/// A finite set of symbolic vectors of one dimension, read as their union.
///
/// Members are kept in a `BTreeSet`, so iteration follows the lexicographic
/// order on (include, exclude).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymbolicVectorSet {
    members: BTreeSet<SymbolicVector>,
    dim: usize,
}

/// Result of [`SymbolicVectorSet::count_within`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Count {
    Exact(u128),
    /// Floating-point estimate, used when exact arithmetic overflows.
    Approx(f64),
}

impl Count {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Count::Exact(n) => n as f64,
            Count::Approx(x) => x,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Exact(n) => write!(f, "{n}"),
            Count::Approx(x) => write!(f, "~{x:e}"),
        }
    }
}

impl SymbolicVectorSet {
    pub fn empty(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(SymbolicVectorSet { members: BTreeSet::new(), dim })
    }

    /// `{({0}, {})}`.
    pub fn full(dim: usize) -> Result<Self> {
        Ok(SymbolicVectorSet::singleton(SymbolicVector::full(dim)?))
    }

    pub fn singleton(sv: SymbolicVector) -> Self {
        let dim = sv.dim();
        let mut members = BTreeSet::new();
        members.insert(sv);
        SymbolicVectorSet { members, dim }
    }

    /// Raw set of the given members.
    pub fn from_members<I>(dim: usize, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = SymbolicVector>,
    {
        let mut s = SymbolicVectorSet::empty(dim)?;
        for m in members {
            s.check_dim(m.dim())?;
            s.members.insert(m);
        }
        Ok(s)
    }

    fn from_trusted(dim: usize, members: Vec<SymbolicVector>) -> Self {
        SymbolicVectorSet { members: members.into_iter().collect(), dim }
    }

    /// Members of `self` that are not members of `older`. Their union covers
    /// everything `self` denotes beyond `older`.
    pub(crate) fn members_not_in(&self, older: &Self) -> Self {
        let fresh = self.members.iter().filter(|m| !older.members.contains(*m)).cloned();
        SymbolicVectorSet { members: fresh.collect(), dim: self.dim }
    }

    pub fn members(&self) -> impl Iterator<Item = &SymbolicVector> + '_ {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// True iff there are no members.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// True iff every member is empty.
    pub fn denotes_empty(&self) -> bool {
        self.members.iter().all(SymbolicVector::is_empty)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: dim });
        }
        Ok(())
    }

    fn require_canonical(&self) -> Result<()> {
        if self.is_canonical() {
            Ok(())
        } else {
            Err(Error::NonCanonical)
        }
    }

    pub fn contains(&self, q: &Vector) -> Result<bool> {
        self.check_dim(q.dim())?;
        Ok(self.members.iter().any(|m| m.contains_unchecked(q)))
    }

    pub fn max_bound_component(&self) -> u32 {
        self.members.iter().map(SymbolicVector::max_bound_component).max().unwrap_or(0)
    }

    pub fn raw_union(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let mut s = self.clone();
        s.members.extend(other.members.iter().cloned());
        Ok(s)
    }

    /// Pairwise intersections, each canonicalized.
    pub fn raw_intersect(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let mut out = Vec::new();
        for x in &self.members {
            for y in &other.members {
                out.push(x.intersect(y)?);
            }
        }
        Ok(SymbolicVectorSet::from_trusted(self.dim, out))
    }

    /// Member-by-member raw difference. Empty intermediate members are dropped.
    pub fn raw_subtract(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        if other.is_empty() {
            return Ok(self.clone());
        }
        let mut out = Vec::new();
        for x in &self.members {
            let mut cur = alloc::vec![x.clone()];
            for y in &other.members {
                let mut next = Vec::new();
                for c in &cur {
                    next.extend(c.subtract(y)?.members.into_iter().filter(|m| !m.is_empty()));
                }
                cur = next;
            }
            out.extend(cur);
        }
        Ok(SymbolicVectorSet::from_trusted(self.dim, out))
    }

    pub fn raw_negate(&self) -> Result<Self> {
        SymbolicVectorSet::full(self.dim)?.raw_subtract(self)
    }

    pub fn rm_empty(&self) -> Self {
        SymbolicVectorSet {
            members: self.members.iter().filter(|m| !m.is_empty()).cloned().collect(),
            dim: self.dim,
        }
    }

    pub fn is_canonical(&self) -> bool {
        let v: Vec<&SymbolicVector> = self.members.iter().collect();
        for (i, x) in v.iter().enumerate() {
            if !x.is_canonical() || x.is_empty() {
                return false;
            }
            if v[i + 1..].iter().any(|y| x.shareable_unchecked(y)) {
                return false;
            }
        }
        true
    }

    /// Canonical form: canonicalize members, drop empty ones, fold by canonical union.
    pub fn canonicalize(&self) -> Result<Self> {
        let pieces = self.members.iter().map(SymbolicVector::canonicalize).collect();
        SymbolicVectorSet::normalize_pieces(self.dim, pieces, DEFAULT_UNION_STEP_LIMIT)
    }

    /// Canonical set built from canonical (possibly empty or shareable) pieces.
    pub(crate) fn normalize_pieces(dim: usize, pieces: Vec<SymbolicVector>, limit: usize) -> Result<Self> {
        let mut target = Vec::new();
        let mut steps = 0;
        insert_all(&mut target, pieces, limit, &mut steps)?;
        Ok(SymbolicVectorSet::from_trusted(dim, target))
    }

    pub fn canonical_union(&self, other: &Self) -> Result<Self> {
        self.canonical_union_bounded(other, DEFAULT_UNION_STEP_LIMIT)
    }

    /// Canonical union that fails after `limit` insertion steps.
    pub fn canonical_union_bounded(&self, other: &Self, limit: usize) -> Result<Self> {
        self.check_dim(other.dim)?;
        self.require_canonical()?;
        other.require_canonical()?;
        self.union_canonical_unchecked(other, limit)
    }

    pub(crate) fn union_canonical_unchecked(&self, other: &Self, limit: usize) -> Result<Self> {
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        if small.is_empty() {
            return Ok(big.clone());
        }
        let mut target: Vec<SymbolicVector> = big.members.iter().cloned().collect();
        let pending = small.members.iter().filter(|m| !big.members.contains(*m)).cloned().collect();
        let mut steps = 0;
        insert_all(&mut target, pending, limit, &mut steps)?;
        Ok(SymbolicVectorSet::from_trusted(self.dim, target))
    }

    /// Canonical union with canonical, possibly overlapping pieces.
    pub(crate) fn union_pieces(&self, pieces: Vec<SymbolicVector>, limit: usize) -> Result<Self> {
        let mut target: Vec<SymbolicVector> = self.members.iter().cloned().collect();
        let pending = pieces.into_iter().filter(|p| !self.members.contains(p)).collect();
        let mut steps = 0;
        insert_all(&mut target, pending, limit, &mut steps)?;
        Ok(SymbolicVectorSet::from_trusted(self.dim, target))
    }

    pub fn canonical_intersect(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        self.require_canonical()?;
        other.require_canonical()?;
        self.intersect_canonical_unchecked(other, DEFAULT_UNION_STEP_LIMIT)
    }

    pub(crate) fn intersect_canonical_unchecked(&self, other: &Self, limit: usize) -> Result<Self> {
        let mut pieces = Vec::new();
        for x in &self.members {
            for y in other.members.iter().filter(|y| x.meets(y)) {
                pieces.push(x.intersect_canonical(y));
            }
        }
        SymbolicVectorSet::normalize_pieces(self.dim, pieces, limit)
    }

    pub fn canonical_subtract(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        self.require_canonical()?;
        other.require_canonical()?;
        self.subtract_canonical_unchecked(other, DEFAULT_UNION_STEP_LIMIT)
    }

    pub(crate) fn subtract_canonical_unchecked(&self, other: &Self, limit: usize) -> Result<Self> {
        if other.is_empty() {
            return Ok(self.clone());
        }
        let mut pieces = Vec::new();
        for x in &self.members {
            let mut cur = alloc::vec![x.clone()];
            for y in &other.members {
                if cur.is_empty() {
                    break;
                }
                let mut next = Vec::with_capacity(cur.len());
                let mut split = false;
                for c in &cur {
                    let p = c.subtract_pieces(y);
                    split |= p.len() != 1 || p[0] != *c;
                    next.extend(p);
                }
                if split && next.len() > 1 {
                    next = SymbolicVectorSet::normalize_pieces(self.dim, next, limit)?
                        .members
                        .into_iter()
                        .collect();
                }
                cur = next;
            }
            pieces.extend(cur);
        }
        SymbolicVectorSet::normalize_pieces(self.dim, pieces, limit)
    }

    /// Complement of a canonical set.
    pub fn canonical_negate(&self) -> Result<Self> {
        self.require_canonical()?;
        SymbolicVectorSet::full(self.dim)?.subtract_canonical_unchecked(self, DEFAULT_UNION_STEP_LIMIT)
    }

    /// Denotational inclusion.
    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.check_dim(other.dim)?;
        if self == other {
            return Ok(true);
        }
        let canon = |s: &Self| -> Vec<SymbolicVector> {
            s.members.iter().map(SymbolicVector::canonicalize).filter(|m| !m.is_empty()).collect()
        };
        let rhs = canon(other);
        for x in canon(self) {
            let mut cur = alloc::vec![x];
            for y in &rhs {
                if cur.is_empty() {
                    break;
                }
                cur = cur.iter().flat_map(|c| c.subtract_pieces(y)).collect();
            }
            if !cur.is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Denotational equality; structural when both sides are canonical.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.check_dim(other.dim)?;
        if self.is_canonical() && other.is_canonical() {
            return Ok(self == other);
        }
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }

    /// Members within `[0, box]^dim`.
    pub fn enumerate(&self, bx: u32) -> Result<BTreeSet<Vector>> {
        let mut out = BTreeSet::new();
        for m in &self.members {
            out.extend(m.enumerate(bx)?);
        }
        Ok(out)
    }

    /// Denoted vectors inside `[0, bx]^dim`, for any box. Unlike
    /// [`enumerate`](Self::enumerate) the box need not cover the bounds, so
    /// the result says nothing about vectors outside it.
    pub fn enumerate_clipped(&self, bx: u32) -> BTreeSet<Vector> {
        let mut out = BTreeSet::new();
        for m in self.members.iter().filter(|m| !m.is_empty()) {
            for_each_in_box(&m.include_bound(), bx, |q| {
                if m.contains_unchecked(q) {
                    out.insert(q.clone());
                }
            });
        }
        out
    }

    /// Number of denoted vectors within `[0, capacity]^dim`. Requires a canonical set.
    pub fn count_within(&self, capacity: u32) -> Result<Count> {
        self.count_within_caps(&alloc::vec![capacity; self.dim])
    }

    /// As [`count_within`](Self::count_within) with one bound per component.
    pub fn count_within_caps(&self, caps: &[u32]) -> Result<Count> {
        self.check_dim(caps.len())?;
        self.require_canonical()?;
        let exact = self.members.iter().try_fold(0i128, |acc, m| {
            count_member::<i128>(m, caps).and_then(|c| acc.checked_add(c))
        });
        if let Some(n) = exact {
            return Ok(Count::Exact(n as u128));
        }
        let approx = self
            .members
            .iter()
            .map(|m| count_member::<f64>(m, caps).unwrap_or(0.0))
            .sum();
        Ok(Count::Approx(approx))
    }
}

/// Inserts `pending` into `target`, keeping `target` pairwise non-shareable.
///
/// Each pending vector looks for its lex-smallest shareable partner; if there
/// is one, the partner is removed and the pair is rewritten as
/// `merge(s, z)` plus the pieces of `l \ z`, which go back on the worklist.
pub(crate) fn insert_all(
    target: &mut Vec<SymbolicVector>,
    pending: Vec<SymbolicVector>,
    limit: usize,
    steps: &mut usize,
) -> Result<()> {
    target.retain(|t| !t.is_empty());
    // Larger pieces first: small include bounds tend to swallow later ones.
    let mut stack = pending;
    stack.sort_by(|a, b| b.qa().values().iter().sum::<u32>().cmp(&a.qa().values().iter().sum()).then(b.cmp(a)));
    while let Some(sv) = stack.pop() {
        if sv.is_empty() {
            continue;
        }
        *steps += 1;
        if *steps > limit {
            return Err(Error::UnionStepLimit { limit });
        }
        if target.iter().any(|t| sv.covered_by(t)) {
            continue;
        }
        target.retain(|t| !t.covered_by(&sv));
        let partner = target
            .iter()
            .enumerate()
            .filter(|(_, t)| sv.shareable_nonempty(t))
            .min_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i);
        let Some(i) = partner else {
            target.push(sv);
            continue;
        };
        let p = target.swap_remove(i);
        if p == sv {
            target.push(p);
            continue;
        }
        let (s, l) = if (sv.qa(), &sv) <= (p.qa(), &p) { (sv, p) } else { (p, sv) };
        let z = s.share_unchecked(&l);
        let rest = l.subtract_pieces(&z);
        let merged = s.merge_unchecked(&z);
        stack.extend(rest.into_iter().rev());
        stack.extend(merged.into_iter().rev());
    }
    Ok(())
}

/// Arithmetic used by the inclusion-exclusion count.
trait Num: Copy {
    const ZERO: Self;
    fn from_u32(v: u32) -> Self;
    fn add(self, o: Self) -> Option<Self>;
    fn sub(self, o: Self) -> Option<Self>;
    fn mul(self, o: Self) -> Option<Self>;
}

impl Num for i128 {
    const ZERO: Self = 0;
    fn from_u32(v: u32) -> Self {
        v as i128
    }
    fn add(self, o: Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub(self, o: Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul(self, o: Self) -> Option<Self> {
        self.checked_mul(o)
    }
}

impl Num for f64 {
    const ZERO: Self = 0.0;
    fn from_u32(v: u32) -> Self {
        v as f64
    }
    fn add(self, o: Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(self, o: Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(self, o: Self) -> Option<Self> {
        Some(self * o)
    }
}

/// `|up(v) ∩ box|`.
fn up_count<N: Num>(v: &Vector, caps: &[u32]) -> Option<N> {
    let mut acc = N::from_u32(1);
    for (x, c) in v.values().iter().zip(caps) {
        if x > c {
            return Some(N::ZERO);
        }
        acc = acc.mul(N::from_u32(c - x + 1))?;
    }
    Some(acc)
}

fn count_member<N: Num>(m: &SymbolicVector, caps: &[u32]) -> Option<N> {
    let qa = m.include_bound();
    let excl: Vec<Vector> = m.exclude().iter().map(|b| b.join2(&qa)).collect();
    up_count::<N>(&qa, caps)?.sub(union_count(excl, caps)?)
}

/// `|⋃ up(v) ∩ box|` by the recursion
/// `U(v1..vn) = up(v1) + U(v2..vn) - U(v1∨v2 .. v1∨vn)`.
fn union_count<N: Num>(vs: Vec<Vector>, caps: &[u32]) -> Option<N> {
    let mut vs: Vec<Vector> = vs
        .into_iter()
        .filter(|v| v.values().iter().zip(caps).all(|(x, c)| x <= c))
        .collect();
    vs.sort_unstable();
    vs.dedup();
    let mut kept: Vec<Vector> = Vec::with_capacity(vs.len());
    for v in vs {
        if !kept.iter().any(|k| k.is_le(&v)) {
            kept.push(v);
        }
    }
    let Some((first, rest)) = kept.split_first() else {
        return Some(N::ZERO);
    };
    let joined = rest.iter().map(|v| v.join2(first)).collect();
    up_count::<N>(first, caps)?.add(union_count(rest.to_vec(), caps)?)?.sub(union_count(joined, caps)?)
}

impl fmt::Display for SymbolicVectorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SymbolicVectorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for SymbolicVectorSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.members.iter())
    }
}
