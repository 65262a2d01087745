use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Signed;
use thiserror::Error;

use super::{q_to_string, Ring, Q};
use crate::rootsys::Root;

/// A polynomial variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    C(Root),
    CPrime(Root),
    Z(u16, u16),
}

impl VarId {
    pub fn is_diag_z(&self) -> bool {
        matches!(self, VarId::Z(i, j) if i == j)
    }

    /// `c:a(1,1)`, `cp:a(1,2)`, `z:3,3`.
    pub fn tag(&self) -> String {
        match self {
            VarId::C(r) => format!("c:{r}"),
            VarId::CPrime(r) => format!("cp:{r}"),
            VarId::Z(i, j) => format!("z:{i},{j}"),
        }
    }

    pub fn parse_tag(s: &str) -> Option<VarId> {
        let (kind, rest) = s.split_once(':')?;
        match kind {
            "c" => rest.parse().ok().map(VarId::C),
            "cp" => rest.parse().ok().map(VarId::CPrime),
            "z" => {
                let (i, j) = rest.split_once(',')?;
                let i: u16 = i.trim().parse().ok()?;
                let j: u16 = j.trim().parse().ok()?;
                (i > 0 && j > 0).then_some(VarId::Z(i, j))
            }
            _ => None,
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::C(r) => write!(f, "c[{r}]"),
            VarId::CPrime(r) => write!(f, "cp[{r}]"),
            VarId::Z(i, j) => write!(f, "z[{i},{j}]"),
        }
    }
}

/// `∏ z_{i,i} = 1` over the block `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiagRelation {
    pub lo: u16,
    pub hi: u16,
}

impl DiagRelation {
    pub fn new(lo: u16, hi: u16) -> Self {
        assert!(lo <= hi);
        DiagRelation { lo, hi }
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<u16> {
        self.lo..=self.hi
    }
}

/// Exponent map, zero exponents omitted.
pub type Monomial = BTreeMap<VarId, i32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no value for variable {0}")]
    MissingVar(VarId),
    #[error("diagonal variable {0} evaluated at zero")]
    ZeroDiagonal(VarId),
    #[error("assignment violates the determinant relation (product of diagonal z is {0})")]
    RelationViolated(String),
    #[error("negative power of non-invertible variable {0}")]
    NotInvertible(VarId),
}

/// Exact polynomial in `c`, `c'` and `z`, Laurent in the diagonal `z_{i,i}`.
#[derive(Clone, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Q>,
    rel: Option<DiagRelation>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.rel == other.rel || self.terms.is_empty() || other.terms.is_empty() {
            return self.terms == other.terms;
        }
        let rel = self.rel.or(other.rel);
        let mut a = self.clone();
        let mut b = other.clone();
        a.set_relation(rel);
        b.set_relation(rel);
        a.terms == b.terms
    }
}

impl Eq for MultiPoly {}

fn shift_diagonal(m: &mut Monomial, rel: DiagRelation) {
    let lo = rel.indices().map(|i| m.get(&VarId::Z(i, i)).copied().unwrap_or(0)).min().unwrap_or(0);
    if lo == 0 {
        return;
    }
    for i in rel.indices() {
        let v = VarId::Z(i, i);
        let e = m.get(&v).copied().unwrap_or(0) - lo;
        if e == 0 {
            m.remove(&v);
        } else {
            m.insert(v, e);
        }
    }
}

impl MultiPoly {
    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(), c);
        }
        MultiPoly { terms, rel: None }
    }

    pub fn var(v: VarId) -> Self {
        Self::monomial(Q::one(), [(v, 1)])
    }

    pub fn c(r: Root) -> Self {
        Self::var(VarId::C(r))
    }

    pub fn cp(r: Root) -> Self {
        Self::var(VarId::CPrime(r))
    }

    pub fn z(i: u16, j: u16) -> Self {
        Self::var(VarId::Z(i, j))
    }

    /// `z_{i,i}^{-1}`.
    pub fn z_inv(i: u16) -> Self {
        Self::monomial(Q::one(), [(VarId::Z(i, i), -1)])
    }

    pub fn monomial(c: Q, vars: impl IntoIterator<Item = (VarId, i32)>) -> Self {
        let mut m = Monomial::new();
        for (v, e) in vars {
            assert!(e >= 0 || v.is_diag_z(), "negative exponent on {v}");
            let slot = m.entry(v).or_insert(0);
            *slot += e;
            if *slot == 0 {
                m.remove(&v);
            }
        }
        let mut p = MultiPoly::default();
        p.insert(m, c);
        p
    }

    pub fn relation(&self) -> Option<DiagRelation> {
        self.rel
    }

    /// Attach (or drop) the determinant relation and renormalize.
    pub fn set_relation(&mut self, rel: Option<DiagRelation>) {
        self.rel = rel;
        if rel.is_some() {
            let old = std::mem::take(&mut self.terms);
            for (m, c) in old {
                self.insert(m, c);
            }
        }
    }

    pub fn with_relation(mut self, rel: Option<DiagRelation>) -> Self {
        self.set_relation(rel);
        self
    }

    fn insert(&mut self, mut m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        if let Some(r) = self.rel {
            shift_diagonal(&mut m, r);
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    pub fn constant_value(&self) -> Option<Q> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.get(&Monomial::new()).cloned().unwrap_or_else(Q::zero))
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.keys().copied()).collect()
    }

    pub fn total_degree(&self) -> i32 {
        self.terms.keys().map(|m| m.values().sum::<i32>()).max().unwrap_or(0)
    }

    fn joint_rel(&self, other: &Self) -> Option<DiagRelation> {
        self.rel.or(other.rel)
    }

    fn binary(&self, other: &Self, neg: bool) -> Self {
        let rel = self.joint_rel(other);
        let mut out = if self.rel == rel { self.clone() } else { self.clone().with_relation(rel) };
        for (m, c) in &other.terms {
            out.insert(m.clone(), if neg { -c.clone() } else { c.clone() });
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return MultiPoly { terms: BTreeMap::new(), rel: self.rel };
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
            rel: self.rel,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = MultiPoly::constant(Q::one()).with_relation(self.rel);
        for _ in 0..e {
            acc = Ring::mul(&acc, self);
        }
        acc
    }

    /// Replace variables by polynomials; variables mapped to `None` are kept.
    /// Only diagonal `z` may carry negative exponents and those are never
    /// substituted.
    pub fn substitute(&self, f: &dyn Fn(&VarId) -> Option<MultiPoly>) -> Self {
        let mut cache: BTreeMap<VarId, Option<MultiPoly>> = BTreeMap::new();
        let mut out = MultiPoly::default().with_relation(self.rel);
        for (m, c) in &self.terms {
            let mut kept = Monomial::new();
            let mut term = MultiPoly::constant(c.clone());
            for (v, &e) in m {
                let sub = cache.entry(*v).or_insert_with(|| f(v)).clone();
                match sub {
                    Some(p) if e > 0 => term = Ring::mul(&term, &p.pow(e as u32)),
                    _ => {
                        kept.insert(*v, e);
                    }
                }
            }
            let keep = MultiPoly { terms: BTreeMap::from([(kept, Q::one())]), rel: None };
            out = Ring::add(&out, &Ring::mul(&term, &keep));
        }
        out
    }

    pub fn eval_with(&self, assign: &dyn Fn(&VarId) -> Option<Q>) -> Result<Q, EvalError> {
        let mut cache: BTreeMap<VarId, Q> = BTreeMap::new();
        let mut look = |v: &VarId| -> Result<Q, EvalError> {
            if let Some(x) = cache.get(v) {
                return Ok(x.clone());
            }
            let x = assign(v).ok_or(EvalError::MissingVar(*v))?;
            if v.is_diag_z() && x.is_zero() {
                return Err(EvalError::ZeroDiagonal(*v));
            }
            cache.insert(*v, x.clone());
            Ok(x)
        };
        let mut total = Q::zero();
        let mut uses_z = false;
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m {
                uses_z |= matches!(v, VarId::Z(..));
                let x = look(v)?;
                if e < 0 && x.is_zero() {
                    return Err(EvalError::NotInvertible(*v));
                }
                let xe = num_traits::pow::pow(x.clone(), e.unsigned_abs() as usize);
                if e < 0 {
                    t /= xe;
                } else {
                    t *= xe;
                }
            }
            total += t;
        }
        if let (Some(r), true) = (self.rel, uses_z) {
            let mut prod = Q::one();
            for i in r.indices() {
                prod *= look(&VarId::Z(i, i))?;
            }
            if !prod.is_one() {
                return Err(EvalError::RelationViolated(q_to_string(&prod)));
            }
        }
        Ok(total)
    }

    pub fn eval(&self, assign: &BTreeMap<VarId, Q>) -> Result<Q, EvalError> {
        self.eval_with(&|v| assign.get(v).cloned())
    }
}

impl Ring for MultiPoly {
    fn zero() -> Self {
        MultiPoly::default()
    }
    fn one() -> Self {
        MultiPoly::constant(Q::one())
    }
    fn from_int(n: i64) -> Self {
        MultiPoly::constant(super::q(n))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self.binary(other, false)
    }
    fn sub(&self, other: &Self) -> Self {
        self.binary(other, true)
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = MultiPoly { terms: BTreeMap::new(), rel: self.joint_rel(other) };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                for (v, e) in mb {
                    let slot = m.entry(*v).or_insert(0);
                    *slot += e;
                    if *slot == 0 {
                        m.remove(v);
                    }
                }
                out.insert(m, ca * cb);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            rel: self.rel,
        }
    }
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: Self) -> MultiPoly {
        Ring::add(self, rhs)
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: Self) -> MultiPoly {
        Ring::sub(self, rhs)
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: Self) -> MultiPoly {
        Ring::mul(self, rhs)
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        Ring::neg(self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let coeff = if a.is_integer() { a.numer().to_string() } else { q_to_string(&a) };
            let mut parts = Vec::new();
            if !a.is_one() || m.is_empty() {
                parts.push(coeff);
            }
            for (v, e) in m {
                parts.push(if *e == 1 { v.to_string() } else { format!("{v}^{e}") });
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::{q, qf};
    use proptest::prelude::*;

    fn a(i: u16) -> Root {
        Root::simple(i)
    }

    #[test]
    fn cancellation() {
        let x = MultiPoly::c(a(1));
        assert!(Ring::add(&x, &Ring::neg(&x)).is_zero());
        let zi = MultiPoly::z(3, 3);
        assert_eq!(Ring::mul(&zi, &MultiPoly::z_inv(3)), MultiPoly::one());
    }

    #[test]
    fn binomial() {
        let s = &MultiPoly::c(a(1)) + &MultiPoly::c(a(2));
        let sq = &s * &s;
        let expect = Ring::add(
            &Ring::add(&MultiPoly::c(a(1)).pow(2), &MultiPoly::c(a(2)).pow(2)),
            &(&MultiPoly::c(a(1)) * &MultiPoly::c(a(2))).scale(&q(2)),
        );
        assert_eq!(sq, expect);
        assert_eq!(sq.to_string(), "2*c[a(1,1)]*c[a(2,2)] + c[a(1,1)]^2 + c[a(2,2)]^2");
    }

    #[test]
    fn evaluation() {
        assert_eq!(MultiPoly::from_int(7).eval(&BTreeMap::new()).unwrap(), q(7));
        let p = MultiPoly::z_inv(3);
        let asg = BTreeMap::from([(VarId::Z(3, 3), q(3))]);
        assert_eq!(p.eval(&asg).unwrap(), qf(1, 3));
        let zero = BTreeMap::from([(VarId::Z(3, 3), q(0))]);
        assert_eq!(p.eval(&zero), Err(EvalError::ZeroDiagonal(VarId::Z(3, 3))));
        assert_eq!(
            MultiPoly::c(a(1)).eval(&BTreeMap::new()),
            Err(EvalError::MissingVar(VarId::C(a(1))))
        );
    }

    #[test]
    fn relation_normal_form() {
        let rel = Some(DiagRelation::new(3, 4));
        let full = (&MultiPoly::z(3, 3) * &MultiPoly::z(4, 4)).with_relation(rel);
        assert_eq!(full, MultiPoly::one());
        let inv = MultiPoly::z_inv(3).with_relation(rel);
        assert_eq!(inv, MultiPoly::z(4, 4));
        let single = MultiPoly::z_inv(3).with_relation(Some(DiagRelation::new(3, 3)));
        assert_eq!(single, MultiPoly::one());
        let bad = BTreeMap::from([(VarId::Z(3, 3), q(2)), (VarId::Z(4, 4), q(2))]);
        assert!(matches!(
            MultiPoly::z(3, 3).with_relation(rel).eval(&bad),
            Err(EvalError::RelationViolated(_))
        ));
    }

    #[test]
    fn substitution() {
        let p = &MultiPoly::cp(a(1)) * &MultiPoly::c(a(2));
        let r = p.substitute(&|v| match v {
            VarId::CPrime(_) => Some(&MultiPoly::c(a(1)) + &MultiPoly::from_int(1)),
            _ => None,
        });
        let expect = &(&MultiPoly::c(a(1)) * &MultiPoly::c(a(2))) + &MultiPoly::c(a(2));
        assert_eq!(r, expect);
    }

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        let var = prop_oneof![
            (1u16..4).prop_map(|i| (VarId::C(Root::simple(i)), 0i32..3)),
            (3u16..5).prop_map(|i| (VarId::Z(i, i), -2i32..3)),
            Just((VarId::Z(3, 4), 0i32..2)),
        ];
        let term = (-5i64..6, 1i64..4, prop::collection::vec(var, 0..3));
        prop::collection::vec(term, 0..4).prop_flat_map(|ts| {
            let n = ts.len();
            (Just(ts), prop::collection::vec(-2i32..3, n * 3))
        })
        .prop_map(|(ts, exps)| {
            let mut p = MultiPoly::zero();
            for (k, (num, den, vars)) in ts.into_iter().enumerate() {
                let vs: Vec<(VarId, i32)> = vars
                    .into_iter()
                    .enumerate()
                    .map(|(t, (v, r))| {
                        let e = exps[k * 3 + t].clamp(r.start, r.end - 1);
                        (v, e)
                    })
                    .collect();
                p = Ring::add(&p, &MultiPoly::monomial(qf(num, den), vs));
            }
            p
        })
    }

    fn sample() -> impl Strategy<Value = BTreeMap<VarId, Q>> {
        (prop::collection::vec((-4i64..5, 1i64..3), 4), 1i64..4, 1i64..4).prop_map(|(v, a, b)| {
            let mut m = BTreeMap::new();
            for (k, (n, d)) in v.into_iter().enumerate() {
                m.insert(VarId::C(Root::simple(k as u16 + 1)), qf(n, d));
            }
            m.insert(VarId::Z(3, 4), q(a - b));
            m.insert(VarId::Z(3, 3), qf(a, b));
            m.insert(VarId::Z(4, 4), qf(b, a));
            m
        })
    }

    proptest! {
        #[test]
        fn eval_is_ring_morphism(x in small_poly(), y in small_poly(), s in sample()) {
            let ex = x.eval(&s).unwrap();
            let ey = y.eval(&s).unwrap();
            prop_assert_eq!(Ring::mul(&x, &y).eval(&s).unwrap(), &ex * &ey);
            prop_assert_eq!(Ring::add(&x, &y).eval(&s).unwrap(), &ex + &ey);
            prop_assert!(Ring::sub(&x, &x).is_zero());
        }

        #[test]
        fn relation_normalization_sound(x in small_poly(), s in sample()) {
            let rel = Some(DiagRelation::new(3, 4));
            let n = x.clone().with_relation(rel);
            prop_assert_eq!(n.eval(&s).unwrap(), x.eval(&s).unwrap());
            for (m, _) in n.terms() {
                let all_pos = (3..=4).all(|i| m.get(&VarId::Z(i, i)).copied().unwrap_or(0) > 0);
                prop_assert!(!all_pos);
                prop_assert!(m.values().all(|&e| e > 0));
            }
        }

        #[test]
        fn difference_zero_iff_equal(x in small_poly(), y in small_poly()) {
            prop_assert_eq!(Ring::sub(&x, &y).is_zero(), x == y);
        }
    }
}
