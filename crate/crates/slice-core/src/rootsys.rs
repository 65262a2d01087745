//! Type-A root combinatorics.
//!
//! A root of `A_l` is stored by its matrix position: `α_i + ⋯ + α_j` sits at
//! `(i, j+1)` and its negative at `(j+1, i)`. Every other notion (sign, sum,
//! elementary matrix) is position arithmetic.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::exactring::{Matrix, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("invalid interval a({i},{j})")]
    BadInterval { i: i64, j: i64 },
    #[error("position ({0},{1}) is diagonal")]
    Diagonal(u16, u16),
    #[error("root {0} does not exist in rank {1}")]
    OutOfRank(Root, usize),
    #[error("rank must be positive")]
    ZeroRank,
    #[error("sum of a root and its negative is not a root")]
    Opposite,
    #[error("cannot parse root from {0:?}")]
    Parse(String),
}

/// A root `±(α_i + ⋯ + α_j)`, kept as the matrix position `(row, col)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    row: u16,
    col: u16,
}

impl Root {
    /// `α_i + ⋯ + α_j`.
    pub fn positive(i: u16, j: u16) -> Result<Self, RootError> {
        if i == 0 || j < i {
            return Err(RootError::BadInterval { i: i as i64, j: j as i64 });
        }
        Ok(Root { row: i, col: j + 1 })
    }

    pub fn new(i: u16, j: u16, sign: i8) -> Result<Self, RootError> {
        let r = Self::positive(i, j)?;
        Ok(if sign < 0 { r.negate() } else { r })
    }

    pub fn simple(i: u16) -> Self {
        assert!(i >= 1);
        Root { row: i, col: i + 1 }
    }

    pub fn from_position(row: u16, col: u16) -> Result<Self, RootError> {
        if row == col || row == 0 || col == 0 {
            return Err(RootError::Diagonal(row, col));
        }
        Ok(Root { row, col })
    }

    /// Unchecked position constructor for internal loops over valid indices.
    pub(crate) fn at(row: u16, col: u16) -> Self {
        debug_assert!(row != col && row > 0 && col > 0);
        Root { row, col }
    }

    pub fn row(self) -> u16 {
        self.row
    }

    pub fn col(self) -> u16 {
        self.col
    }

    pub fn row_col(self) -> (u16, u16) {
        (self.row, self.col)
    }

    pub fn is_positive(self) -> bool {
        self.row < self.col
    }

    pub fn sign(self) -> i8 {
        if self.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Start index of the interval.
    pub fn i(self) -> u16 {
        self.row.min(self.col)
    }

    /// End index of the interval.
    pub fn j(self) -> u16 {
        self.row.max(self.col) - 1
    }

    pub fn height(self) -> u16 {
        self.j() - self.i() + 1
    }

    pub fn negate(self) -> Self {
        Root { row: self.col, col: self.row }
    }

    pub fn fits_rank(self, l: usize) -> bool {
        (self.row.max(self.col) as usize) <= l + 1
    }

    /// Indices of the simple roots in the support.
    pub fn support(self) -> std::ops::RangeInclusive<u16> {
        self.i()..=self.j()
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_positive() {
            f.write_str("-")?;
        }
        write!(f, "a({},{})", self.i(), self.j())
    }
}

impl FromStr for Root {
    type Err = RootError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RootError::Parse(s.to_string());
        let t = s.trim();
        let (neg, t) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let inner = t
            .strip_prefix("a(")
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let i: u16 = a.trim().parse().map_err(|_| bad())?;
        let j: u16 = b.trim().parse().map_err(|_| bad())?;
        if j == u16::MAX {
            return Err(bad());
        }
        Root::new(i, j, if neg { -1 } else { 1 })
    }
}

/// `(row, col)`.
pub fn row_col(r: Root) -> (u16, u16) {
    r.row_col()
}

/// `a + b` when it is a root.
pub fn root_add(a: Root, b: Root) -> Result<Option<Root>, RootError> {
    if a == b.negate() {
        return Err(RootError::Opposite);
    }
    if a.col == b.row {
        Ok(Some(Root::at(a.row, b.col)))
    } else if b.col == a.row {
        Ok(Some(Root::at(b.row, a.col)))
    } else {
        Ok(None)
    }
}

/// Sum of two roots known not to be opposite.
pub fn sum(a: Root, b: Root) -> Option<Root> {
    root_add(a, b).ok().flatten()
}

pub fn e_matrix<R: Ring>(r: Root, l: usize) -> Matrix<R> {
    let mut m = Matrix::zero(l + 1);
    m.set(r.row as usize - 1, r.col as usize - 1, R::one());
    m
}

/// Positive roots in lexicographic `(i, j)` order.
pub fn enumerate_positive(l: usize) -> Result<Vec<Root>, RootError> {
    if l == 0 {
        return Err(RootError::ZeroRank);
    }
    let mut out = Vec::with_capacity(l * (l + 1) / 2);
    for i in 1..=l as u16 {
        for j in i..=l as u16 {
            out.push(Root::at(i, j + 1));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct RankContext {
    pub l: usize,
    pub positives: Vec<Root>,
}

impl RankContext {
    pub fn new(l: usize) -> Result<Self, RootError> {
        Ok(RankContext { l, positives: enumerate_positive(l)? })
    }

    /// All roots, positives first then negatives in the same order.
    pub fn all_roots(&self) -> Vec<Root> {
        let mut v = self.positives.clone();
        v.extend(self.positives.iter().map(|r| r.negate()));
        v
    }

    pub fn check(&self, r: Root) -> Result<Root, RootError> {
        if r.fits_rank(self.l) {
            Ok(r)
        } else {
            Err(RootError::OutOfRank(r, self.l))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::Q;
    use proptest::prelude::*;

    #[test]
    fn positions() {
        let r = Root::positive(2, 3).unwrap();
        assert_eq!(row_col(r), (2, 4));
        assert_eq!(row_col(Root::new(1, 1, -1).unwrap()), (2, 1));
        assert_eq!(row_col(Root::simple(5)), (5, 6));
    }

    #[test]
    fn addition() {
        let a1 = Root::simple(1);
        let a2 = Root::simple(2);
        let a3 = Root::simple(3);
        assert_eq!(root_add(a1, a2).unwrap(), Some(Root::positive(1, 2).unwrap()));
        assert_eq!(root_add(a1, a3).unwrap(), None);
        let a12 = Root::positive(1, 2).unwrap();
        assert_eq!(root_add(a12, a3).unwrap(), Some(Root::positive(1, 3).unwrap()));
        assert_eq!(root_add(a1, a1.negate()), Err(RootError::Opposite));
    }

    #[test]
    fn elementary_matrices() {
        let e: Matrix<Q> = e_matrix(Root::simple(1), 2);
        assert_eq!(e.get(0, 1), &Q::from_integer(1.into()));
        let f: Matrix<Q> = e_matrix(Root::positive(1, 2).unwrap().negate(), 2);
        assert_eq!(f.get(2, 0), &Q::from_integer(1.into()));
        assert_eq!(f.nonzero_count(), 1);
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_positive(1).unwrap(), vec![Root::simple(1)]);
        let l2 = enumerate_positive(2).unwrap();
        assert_eq!(
            l2,
            vec![Root::simple(1), Root::positive(1, 2).unwrap(), Root::simple(2)]
        );
        assert_eq!(enumerate_positive(3).unwrap().len(), 6);
        assert_eq!(enumerate_positive(0), Err(RootError::ZeroRank));
    }

    #[test]
    fn text_form() {
        let r: Root = "a(2,4)".parse().unwrap();
        assert_eq!(r, Root::positive(2, 4).unwrap());
        assert_eq!(r.to_string(), "a(2,4)");
        let n: Root = "-a(1,3)".parse().unwrap();
        assert_eq!(n.to_string(), "-a(1,3)");
        for bad in ["a(0,1)", "a(3,2)", "b(1,2)", "a(1,2", "a(,2)", ""] {
            assert!(bad.parse::<Root>().is_err(), "{bad}");
        }
    }

    proptest! {
        #[test]
        fn add_matches_anticommutator(l in 1usize..7, x in 0usize..64, y in 0usize..64) {
            let ps = enumerate_positive(l).unwrap();
            let a = ps[x % ps.len()];
            let b = ps[y % ps.len()];
            let ea: Matrix<Q> = e_matrix(a, l);
            let eb: Matrix<Q> = e_matrix(b, l);
            let ac = ea.mul(&eb).add(&eb.mul(&ea));
            match root_add(a, b).unwrap() {
                Some(s) => {
                    prop_assert_eq!(ac.nonzero_count(), 1);
                    let (r, c) = s.row_col();
                    prop_assert!(!ac.get(r as usize - 1, c as usize - 1).is_zero());
                }
                None => prop_assert!(ac.nonzero_count() != 1),
            }
        }

        #[test]
        fn positions_injective(l in 1usize..9) {
            let ctx = RankContext::new(l).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            for r in ctx.all_roots() {
                prop_assert!(seen.insert(r.row_col()));
            }
        }

        #[test]
        fn text_round_trip(i in 1u16..20, len in 0u16..20, neg in any::<bool>()) {
            let r = Root::new(i, i + len, if neg { -1 } else { 1 }).unwrap();
            prop_assert_eq!(r.to_string().parse::<Root>().unwrap(), r);
        }
    }
}
