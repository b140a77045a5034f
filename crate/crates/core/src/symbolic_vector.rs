//! Symbolic vectors: an upward-closed set minus a union of upward-closed sets.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::svs::SymbolicVectorSet;
use crate::vector::Vector;

/// The pair `(include, exclude)` denoting every `q` that dominates all of
/// `include` and dominates none of `exclude`.
///
/// Both sets are stored sorted and deduplicated, so structural equality is
/// set equality. Canonical values have a single include vector, an antichain
/// of exclude vectors strictly above it, or are the empty sentinel
/// `({0}, {0})`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicVector {
    include: Vec<Vector>,
    exclude: Vec<Vector>,
    dim: usize,
}

fn normalize(mut v: Vec<Vector>) -> Vec<Vector> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Keeps the componentwise-minimal elements. Input must be sorted lex.
fn minimal_antichain(sorted: Vec<Vector>) -> Vec<Vector> {
    let mut kept: Vec<Vector> = Vec::with_capacity(sorted.len());
    for q in sorted {
        // a dominating element is lex-smaller, so it was already seen
        if !kept.iter().any(|k| k.is_le(&q)) {
            kept.push(q);
        }
    }
    kept
}

impl SymbolicVector {
    /// Builds a possibly non-canonical symbolic vector.
    pub fn new(dim: usize, include: Vec<Vector>, exclude: Vec<Vector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        for q in include.iter().chain(&exclude) {
            if q.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: q.dim() });
            }
        }
        Ok(SymbolicVector { include: normalize(include), exclude: normalize(exclude), dim })
    }

    /// `({q}, exclude)`, not canonicalized.
    pub fn from_bounds(q: Vector, exclude: Vec<Vector>) -> Result<Self> {
        SymbolicVector::new(q.dim(), alloc::vec![q], exclude)
    }

    /// Every vector of dimension `dim`: `({0}, {})`.
    pub fn full(dim: usize) -> Result<Self> {
        Ok(SymbolicVector::up(Vector::zero(dim)?))
    }

    /// The empty sentinel `({0}, {0})`.
    pub fn empty(dim: usize) -> Result<Self> {
        let z = Vector::zero(dim)?;
        Ok(SymbolicVector { include: alloc::vec![z.clone()], exclude: alloc::vec![z], dim })
    }

    /// The upward closure of `q`.
    pub fn up(q: Vector) -> Self {
        let dim = q.dim();
        SymbolicVector { include: alloc::vec![q], exclude: Vec::new(), dim }
    }

    /// Trusted constructor for canonical parts. `exclude` must be a sorted antichain.
    pub(crate) fn from_canonical_parts(q: Vector, exclude: Vec<Vector>) -> Self {
        let dim = q.dim();
        SymbolicVector { include: alloc::vec![q], exclude, dim }
    }

    pub fn include(&self) -> &[Vector] {
        &self.include
    }

    pub fn exclude(&self) -> &[Vector] {
        &self.exclude
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Join of the include set.
    pub fn include_bound(&self) -> Vector {
        if self.include.len() == 1 {
            return self.include[0].clone();
        }
        Vector::join(&self.include, self.dim).expect("dimension checked at construction")
    }

    /// Include bound of a canonical value.
    pub(crate) fn qa(&self) -> &Vector {
        debug_assert_eq!(self.include.len(), 1);
        &self.include[0]
    }

    /// Largest component among all bound vectors.
    pub fn max_bound_component(&self) -> u32 {
        self.include.iter().chain(&self.exclude).map(Vector::max_component).max().unwrap_or(0)
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: dim });
        }
        Ok(())
    }

    pub fn contains(&self, q: &Vector) -> Result<bool> {
        self.check_dim(q.dim())?;
        Ok(self.contains_unchecked(q))
    }

    pub(crate) fn contains_unchecked(&self, q: &Vector) -> bool {
        self.include.iter().all(|a| a.is_le(q)) && !self.exclude.iter().any(|b| b.is_le(q))
    }

    /// Denotational inclusion of canonical, non-empty operands.
    pub(crate) fn covered_by(&self, other: &SymbolicVector) -> bool {
        let qa = self.qa();
        other.qa().is_le(qa)
            && other.exclude.iter().all(|d| self.exclude.iter().any(|b| b.is_le_join(d, qa)))
    }

    /// True iff the denoted set is empty.
    pub fn is_empty(&self) -> bool {
        if self.include.len() == 1 {
            let qa = &self.include[0];
            return self.exclude.iter().any(|b| b.is_le(qa));
        }
        let qa = self.include_bound();
        self.exclude.iter().any(|b| b.is_le(&qa))
    }

    pub fn is_sentinel(&self) -> bool {
        self.include.len() == 1
            && self.exclude.len() == 1
            && self.include[0] == self.exclude[0]
            && self.include[0].values().iter().all(|v| *v == 0)
    }

    pub fn is_canonical(&self) -> bool {
        if self.include.len() != 1 {
            return false;
        }
        if self.is_sentinel() {
            return true;
        }
        let qa = &self.include[0];
        // strictly above q_a (this also rules out emptiness)
        if self.exclude.iter().any(|b| !qa.is_le(b) || b == qa) {
            return false;
        }
        for (i, x) in self.exclude.iter().enumerate() {
            for y in &self.exclude[i + 1..] {
                if x.is_le(y) || y.is_le(x) {
                    return false;
                }
            }
        }
        true
    }

    fn require_canonical(&self) -> Result<()> {
        if self.is_canonical() {
            Ok(())
        } else {
            Err(Error::NonCanonical)
        }
    }

    /// Canonical form with the same denotation.
    pub fn canonicalize(&self) -> SymbolicVector {
        let qa = self.include_bound();
        SymbolicVector::canonical_from(qa, self.exclude.iter().cloned())
    }

    /// `can(({qa}, exclude))`.
    pub(crate) fn canonical_from<I>(qa: Vector, exclude: I) -> SymbolicVector
    where
        I: IntoIterator<Item = Vector>,
    {
        let dim = qa.dim();
        let mut lifted = Vec::new();
        for b in exclude {
            if b.is_le(&qa) {
                return SymbolicVector::empty(dim).expect("dim > 0");
            }
            lifted.push(b.join2(&qa));
        }
        SymbolicVector::from_canonical_parts(qa, minimal_antichain(normalize(lifted)))
    }

    /// Canonical intersection.
    pub fn intersect(&self, other: &SymbolicVector) -> Result<SymbolicVector> {
        self.check_dim(other.dim)?;
        let qa = Vector::join(self.include.iter().chain(&other.include), self.dim)?;
        Ok(SymbolicVector::canonical_from(
            qa,
            self.exclude.iter().chain(&other.exclude).cloned(),
        ))
    }

    /// Whether canonical values share a marking, without building the intersection.
    pub(crate) fn meets(&self, other: &SymbolicVector) -> bool {
        let (a, b) = (self.qa(), other.qa());
        !self.exclude.iter().chain(&other.exclude).any(|q| q.is_le_join(a, b))
    }

    /// Intersection of canonical values.
    pub(crate) fn intersect_canonical(&self, other: &SymbolicVector) -> SymbolicVector {
        let qa = self.qa().join2(other.qa());
        SymbolicVector::canonical_from(qa, self.exclude.iter().chain(&other.exclude).cloned())
    }

    /// Raw difference: members `(a, b ∪ {q_c})` for `q_c ∈ c` and
    /// `(a ∪ c ∪ {q_d}, b)` for `q_d ∈ d`, each canonicalized.
    pub fn subtract(&self, other: &SymbolicVector) -> Result<SymbolicVectorSet> {
        self.check_dim(other.dim)?;
        let mut out = Vec::new();
        for qc in &other.include {
            let mut b = self.exclude.clone();
            b.push(qc.clone());
            out.push(SymbolicVector::new(self.dim, self.include.clone(), b)?.canonicalize());
        }
        for qd in &other.exclude {
            let mut a = self.include.clone();
            a.extend(other.include.iter().cloned());
            a.push(qd.clone());
            out.push(SymbolicVector::new(self.dim, a, self.exclude.clone())?.canonicalize());
        }
        SymbolicVectorSet::from_members(self.dim, out)
    }

    /// Disjoint pieces covering `self \ other`, for canonical operands.
    ///
    /// Piece 0 is `(q_a, b ∪ {q_c})`; piece `i` is `(q_a ∨ q_i, b ∪ {q_1..q_{i-1}})`
    /// with the exclude vectors of `other` taken in lexicographic order.
    /// Empty pieces are dropped. Pieces are canonical, but the collection may
    /// still contain shareable pairs.
    pub(crate) fn subtract_pieces(&self, other: &SymbolicVector) -> Vec<SymbolicVector> {
        if self.is_empty() {
            return Vec::new();
        }
        if other.is_empty() || !self.meets(other) {
            return alloc::vec![self.clone()];
        }
        self.piece_formula(other)
    }

    fn piece_formula(&self, other: &SymbolicVector) -> Vec<SymbolicVector> {
        let qa = self.qa();
        let mut pieces = Vec::with_capacity(other.exclude.len() + 1);
        let first = SymbolicVector::canonical_from(
            qa.clone(),
            self.exclude.iter().cloned().chain(core::iter::once(other.qa().clone())),
        );
        if !first.is_empty() {
            pieces.push(first);
        }
        // the exclude set of a canonical value is already lex-sorted
        for (i, qd) in other.exclude.iter().enumerate() {
            let piece = SymbolicVector::canonical_from(
                qa.join2(qd),
                self.exclude.iter().chain(&other.exclude[..i]).cloned(),
            );
            if !piece.is_empty() {
                pieces.push(piece);
            }
        }
        pieces
    }

    /// Canonical difference of canonical operands.
    pub fn canonical_subtract(&self, other: &SymbolicVector) -> Result<SymbolicVectorSet> {
        self.check_dim(other.dim)?;
        self.require_canonical()?;
        other.require_canonical()?;
        SymbolicVectorSet::normalize_pieces(
            self.dim,
            self.subtract_pieces(other),
            crate::svs::DEFAULT_UNION_STEP_LIMIT,
        )
    }

    pub fn mergeable(&self, other: &SymbolicVector) -> Result<bool> {
        self.check_dim(other.dim)?;
        self.require_canonical()?;
        other.require_canonical()?;
        Ok(self.mergeable_unchecked(other))
    }

    pub(crate) fn mergeable_unchecked(&self, other: &SymbolicVector) -> bool {
        if self.is_empty() || other.is_empty() {
            return true;
        }
        let (s, o) = if self.qa().is_le(other.qa()) {
            (self, other)
        } else if other.qa().is_le(self.qa()) {
            (other, self)
        } else {
            return false;
        };
        let qc = o.qa();
        s.exclude.iter().all(|qb| {
            if qc.is_le(qb) {
                return true;
            }
            let j = qb.join2(qc);
            o.exclude.iter().any(|qd| qd.is_le(&j))
        })
    }

    pub fn merge(&self, other: &SymbolicVector) -> Result<SymbolicVectorSet> {
        self.check_dim(other.dim)?;
        self.require_canonical()?;
        other.require_canonical()?;
        SymbolicVectorSet::from_members(self.dim, self.merge_unchecked(other))
    }

    pub(crate) fn merge_unchecked(&self, other: &SymbolicVector) -> Vec<SymbolicVector> {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => return Vec::new(),
            (true, false) => return alloc::vec![other.clone()],
            (false, true) => return alloc::vec![self.clone()],
            (false, false) => {}
        }
        if !self.mergeable_unchecked(other) {
            return alloc::vec![self.clone(), other.clone()];
        }
        let (s, o) = if self.qa().is_le(other.qa()) { (self, other) } else { (other, self) };
        let qc = o.qa();
        let mut excl = Vec::new();
        for qb in &s.exclude {
            if qc.is_le(qb) {
                excl.extend(o.exclude.iter().map(|qd| qb.join2(qd)));
            } else {
                excl.push(qb.clone());
            }
        }
        alloc::vec![SymbolicVector::canonical_from(s.qa().clone(), excl)]
    }

    /// Orders a non-empty canonical pair as (lex-smaller, lex-larger) by include bound.
    fn lex_pair<'a>(&'a self, other: &'a SymbolicVector) -> (&'a SymbolicVector, &'a SymbolicVector) {
        if self.qa() <= other.qa() {
            (self, other)
        } else {
            (other, self)
        }
    }

    pub fn shareable(&self, other: &SymbolicVector) -> Result<bool> {
        self.check_dim(other.dim)?;
        self.require_canonical()?;
        other.require_canonical()?;
        Ok(self.shareable_unchecked(other))
    }

    pub(crate) fn shareable_unchecked(&self, other: &SymbolicVector) -> bool {
        if self.is_empty() || other.is_empty() {
            return true;
        }
        self.shareable_nonempty(other)
    }

    /// `shareable` for canonical operands already known to be non-empty.
    pub(crate) fn shareable_nonempty(&self, other: &SymbolicVector) -> bool {
        let (s, l) = self.lex_pair(other);
        let (a, b) = (s.qa(), l.qa());
        !l.exclude.iter().any(|qd| qd.is_le_join(a, b))
            && !s.exclude.iter().any(|qb| qb.is_le_join(a, b) && !qb.is_ge_join(a, b))
    }

    /// The portion of the lex-larger operand that is handed over to the
    /// lex-smaller one during canonical union.
    ///
    /// `({q_max}, d ∪ {q_b ∨ q_max | q_b ∈ b incomparable with q_max})`, where
    /// `d` belongs to the lex-larger operand and `b` to the lex-smaller one.
    pub fn share(&self, other: &SymbolicVector) -> Result<SymbolicVector> {
        self.check_dim(other.dim)?;
        self.require_canonical()?;
        other.require_canonical()?;
        if self.is_empty() || other.is_empty() || !self.shareable_unchecked(other) {
            return Err(Error::NotShareable);
        }
        Ok(self.share_unchecked(other))
    }

    pub(crate) fn share_unchecked(&self, other: &SymbolicVector) -> SymbolicVector {
        let (s, l) = self.lex_pair(other);
        let qmax = s.qa().join2(l.qa());
        let extra = s
            .exclude
            .iter()
            .filter(|qb| !qb.is_le(&qmax) && !qmax.is_le(qb))
            .map(|qb| qb.join2(&qmax))
            .collect::<Vec<_>>();
        SymbolicVector::canonical_from(qmax, l.exclude.iter().cloned().chain(extra))
    }

    fn qmax_pair(&self, other: &SymbolicVector) -> Result<Vector> {
        self.check_dim(other.dim)?;
        self.require_canonical()?;
        other.require_canonical()?;
        Ok(self.qa().join2(other.qa()))
    }

    pub fn overlap(&self, other: &SymbolicVector) -> Result<bool> {
        let qmax = self.qmax_pair(other)?;
        Ok(!self.exclude.iter().chain(&other.exclude).any(|q| q.is_le(&qmax)))
    }

    pub fn gap(&self, other: &SymbolicVector) -> Result<bool> {
        let qmax = self.qmax_pair(other)?;
        let strictly_below = |q: &Vector| q.is_le(&qmax) && *q != qmax;
        Ok(self.exclude.iter().any(strictly_below)
            || other.exclude.iter().any(strictly_below)
            || (self.exclude.contains(&qmax) && other.exclude.contains(&qmax)))
    }

    pub fn adjacent(&self, other: &SymbolicVector) -> Result<bool> {
        let qmax = self.qmax_pair(other)?;
        let (in_b, in_d) = (self.exclude.contains(&qmax), other.exclude.contains(&qmax));
        Ok((in_b || in_d) && !(in_b && in_d))
    }

    /// Members within `[0, box]^dim`.
    pub fn enumerate(&self, bx: u32) -> Result<BTreeSet<Vector>> {
        let needed = self.max_bound_component();
        if needed > bx {
            return Err(Error::BoxTooSmall { needed, given: bx });
        }
        let mut out = BTreeSet::new();
        if self.is_empty() {
            return Ok(out);
        }
        for_each_in_box(&self.include_bound(), bx, |q| {
            if self.contains_unchecked(q) {
                out.insert(q.clone());
            }
        });
        Ok(out)
    }
}

/// Calls `f` on every vector `q` with `lower ≤ q ≤ bx·1`.
pub(crate) fn for_each_in_box<F: FnMut(&Vector)>(lower: &Vector, bx: u32, mut f: F) {
    if lower.values().iter().any(|v| *v > bx) {
        return;
    }
    let mut q = lower.clone();
    loop {
        f(&q);
        let vals = q.values_mut();
        let mut i = vals.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if vals[i] < bx {
                vals[i] += 1;
                break;
            }
            vals[i] = lower.get(i);
        }
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, s: &[Vector]) -> fmt::Result {
    f.write_str("{")?;
    for (i, q) in s.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{q:?}")?;
    }
    f.write_str("}")
}

impl fmt::Display for SymbolicVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_set(f, &self.include)?;
        f.write_str(",")?;
        write_set(f, &self.exclude)?;
        f.write_str(")")
    }
}

impl fmt::Debug for SymbolicVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        include: Vec<Vector>,
        exclude: Vec<Vector>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    }

    impl Serialize for SymbolicVector {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            let dim = if self.include.is_empty() && self.exclude.is_empty() { Some(self.dim) } else { None };
            Repr { include: self.include.clone(), exclude: self.exclude.clone(), dim }.serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for SymbolicVector {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            use serde::de::Error as _;
            let r = Repr::deserialize(d)?;
            let dim = r
                .dim
                .or_else(|| r.include.first().or(r.exclude.first()).map(Vector::dim))
                .ok_or_else(|| D::Error::custom("cannot infer dimension of an unbounded symbolic vector"))?;
            SymbolicVector::new(dim, r.include, r.exclude).map_err(D::Error::custom)
        }
    }
}
