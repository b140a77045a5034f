//! Fixed-dimension natural vectors, also used as Petri net markings.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// A vector of naturals of fixed dimension.
///
/// The derived `Ord` is the lexicographic order, which is total on vectors
/// of equal dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<u32>", into = "Vec<u32>"))]
pub struct Vector(Vec<u32>);

/// Markings are plain vectors indexed by place position.
pub type Marking = Vector;

impl Vector {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(Vector(values))
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Vector::new(alloc::vec![0; dim])
    }

    /// `v` on place `p` and zero elsewhere.
    pub fn unit(dim: usize, p: usize, v: u32) -> Result<Self> {
        let mut z = Vector::zero(dim)?;
        if p >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p + 1 });
        }
        z.0[p] = v;
        Ok(z)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn max_component(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub(crate) fn values_mut(&mut self) -> &mut [u32] {
        &mut self.0
    }

    fn check_dim(&self, other: &Vector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    /// Componentwise order, checked.
    pub fn leq(&self, other: &Vector) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.is_le(other))
    }

    /// Componentwise order. Dimensions must agree.
    #[inline]
    pub fn is_le(&self, other: &Vector) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self ≤ a ∨ b` without building the join.
    #[inline]
    pub(crate) fn is_le_join(&self, a: &Vector, b: &Vector) -> bool {
        self.0.iter().zip(a.0.iter().zip(&b.0)).all(|(v, (x, y))| *v <= *x.max(y))
    }

    /// `a ∨ b ≤ self` without building the join.
    #[inline]
    pub(crate) fn is_ge_join(&self, a: &Vector, b: &Vector) -> bool {
        self.0.iter().zip(a.0.iter().zip(&b.0)).all(|(v, (x, y))| *v >= *x.max(y))
    }

    /// Lexicographic order, checked.
    pub fn lex_leq(&self, other: &Vector) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self <= other)
    }

    /// Componentwise maximum of two vectors of equal dimension.
    pub fn join2(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Least upper bound of `qs`; the zero vector when `qs` is empty.
    pub fn join<'a, I>(qs: I, dim: usize) -> Result<Vector>
    where
        I: IntoIterator<Item = &'a Vector>,
    {
        let mut acc = Vector::zero(dim)?;
        for q in qs {
            if q.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: q.dim() });
            }
            for (a, b) in acc.0.iter_mut().zip(&q.0) {
                *a = (*a).max(*b);
            }
        }
        Ok(acc)
    }

    /// Componentwise minimum with `bound`.
    pub fn clamp_to(&self, bound: u32) -> Vector {
        Vector(self.0.iter().map(|v| (*v).min(bound)).collect())
    }
}

impl TryFrom<Vec<u32>> for Vector {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        Vector::new(v)
    }
}

impl From<Vector> for Vec<u32> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Vector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let values = t
            .split(',')
            .map(|c| c.trim().parse::<u32>())
            .collect::<core::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidVector(s.to_string()))?;
        Vector::new(values)
    }
}

/// Shorthand used in tests and examples: `vector![1, 0, 2]`.
#[macro_export]
macro_rules! vector {
    ($($x:expr),+ $(,)?) => {
        $crate::Vector::new($crate::__private::vec![$($x),+]).expect("non-empty vector literal")
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: &[u32]) -> Vector {
        Vector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn leq_examples() {
        assert!(v(&[0, 3]).leq(&v(&[1, 4])).unwrap());
        assert!(!v(&[2, 1]).leq(&v(&[1, 2])).unwrap());
        assert!(!v(&[1, 2]).leq(&v(&[2, 1])).unwrap());
        assert!(v(&[1, 1]).leq(&v(&[1, 1])).unwrap());
        assert_eq!(
            v(&[1]).leq(&v(&[1, 1])),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn lex_examples() {
        assert!(v(&[2, 4]).lex_leq(&v(&[4, 2])).unwrap());
        assert!(!v(&[1, 9]).lex_leq(&v(&[1, 2])).unwrap());
        assert!(v(&[3, 3]).lex_leq(&v(&[3, 3])).unwrap());
    }

    #[test]
    fn join_examples() {
        let s = [v(&[1, 3]), v(&[7, 2]), v(&[4, 4])];
        assert_eq!(Vector::join(&s, 2).unwrap(), v(&[7, 4]));
        assert_eq!(Vector::join(&[v(&[1, 1]), v(&[9, 9])], 2).unwrap(), v(&[9, 9]));
        assert_eq!(Vector::join(&[], 2).unwrap(), v(&[0, 0]));
        assert!(Vector::join(&[v(&[1])], 2).is_err());
    }

    #[test]
    fn zero_examples() {
        assert_eq!(Vector::zero(2).unwrap(), v(&[0, 0]));
        assert_eq!(Vector::zero(5).unwrap(), v(&[0, 0, 0, 0, 0]));
        assert_eq!(Vector::zero(1).unwrap(), v(&[0]));
        assert_eq!(Vector::zero(0), Err(Error::ZeroDimension));
    }

    #[test]
    fn text_round_trip() {
        let q = v(&[1, 0, 1, 0, 1]);
        assert_eq!(q.to_string(), "1,0,1,0,1");
        assert_eq!("1,0,1,0,1".parse::<Vector>().unwrap(), q);
        assert_eq!("(1, 0,1,0,1)".parse::<Vector>().unwrap(), q);
        assert!("1,x".parse::<Vector>().is_err());
        assert!("".parse::<Vector>().is_err());
    }

    fn triple() -> impl Strategy<Value = (Vector, Vector, Vector)> {
        (1usize..=5).prop_flat_map(|d| {
            let c = || proptest::collection::vec(0u32..=9, d).prop_map(Vector);
            (c(), c(), c())
        })
    }

    proptest! {
        #[test]
        fn leq_is_partial_order((a, b, c) in triple()) {
            prop_assert!(a.is_le(&a));
            if a.is_le(&b) && b.is_le(&a) { prop_assert_eq!(&a, &b); }
            if a.is_le(&b) && b.is_le(&c) { prop_assert!(a.is_le(&c)); }
        }

        #[test]
        fn lex_is_total_and_extends_leq((a, b, _c) in triple()) {
            let n = [a == b, a < b, b < a].iter().filter(|x| **x).count();
            prop_assert_eq!(n, 1);
            if a.is_le(&b) { prop_assert!(a.lex_leq(&b).unwrap()); }
        }

        #[test]
        fn join_is_least_upper_bound((a, b, u) in triple()) {
            let j = Vector::join([&a, &b], a.dim()).unwrap();
            prop_assert!(a.is_le(&j) && b.is_le(&j));
            if a.is_le(&u) && b.is_le(&u) { prop_assert!(j.is_le(&u)); }
        }
    }
}
