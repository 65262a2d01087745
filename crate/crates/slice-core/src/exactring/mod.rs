//! Exact coefficient rings: big rationals, multivariate polynomials in the
//! slice variables, and dense square matrices over either.

mod codec;
mod matrix;
mod poly;

pub use codec::{parse_poly_json, parse_poly_text, poly_to_json, CodecError, PolyJson};
pub use matrix::Matrix;
pub use poly::{DiagRelation, EvalError, Monomial, MultiPoly, VarId};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Commutative ring operations shared by the numeric and symbolic paths.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn scale_int(&self, n: i64) -> Self {
        match n {
            1 => self.clone(),
            -1 => self.neg(),
            0 => Self::zero(),
            _ => self.mul(&Self::from_int(n)),
        }
    }
}

impl Ring for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        q(n)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// `num/den` with the sign on the numerator.
pub fn q_to_string(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    if n.is_empty() || d.is_empty() || d.starts_with('-') || d.starts_with('+') {
        return None;
    }
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

pub fn q_abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text() {
        assert_eq!(q_to_string(&qf(-6, 4)), "-3/2");
        assert_eq!(parse_q("-3/2"), Some(qf(-3, 2)));
        assert_eq!(parse_q("7"), Some(q(7)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("1/-2"), None);
        assert_eq!(parse_q("x"), None);
    }
}
