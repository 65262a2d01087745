//! One-parameter subgroups of `SL(l+1)`, words in them, and the conjugations
//! by `s` and by `z'` that move a layer of `N` into the next.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exactring::{DiagRelation, Matrix, MultiPoly, Ring, VarId};
use crate::rootsys::{sum, Root};
use crate::strata::{Crc, Strata};
use crate::weyl::{act_on_root, sign_data, ClassRep, SignData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("roots {0} and {1} are opposite")]
    OppositeRoots(Root, Root),
    #[error("matrix is not unipotent upper triangular")]
    NotUnipotent,
    #[error("matrix has an entry at ({0},{1}) outside the allowed support")]
    Support(u16, u16),
    #[error("factorization does not multiply back (first difference at {0:?})")]
    Verification(Option<(usize, usize)>),
    #[error("index {0} outside the block")]
    OutsideBlock(u16),
    #[error("word is not supported on one layer and class: {0}")]
    MixedSupport(String),
    #[error("root {0} leaves the positive roots under s")]
    LeavesPositive(Root),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factor<R> {
    pub root: Root,
    pub coeff: R,
}

impl<R> Factor<R> {
    pub fn new(root: Root, coeff: R) -> Self {
        Factor { root, coeff }
    }
}

impl<R: fmt::Display> fmt::Display for Factor<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X_{}({})", self.root, self.coeff)
    }
}

/// Which total order a word is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderTag {
    Prec,
    ZOrder,
    Free,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorWord<R> {
    pub factors: Vec<Factor<R>>,
    pub order_tag: OrderTag,
}

impl<R: Ring> FactorWord<R> {
    pub fn empty(order_tag: OrderTag) -> Self {
        FactorWord { factors: Vec::new(), order_tag }
    }

    pub fn free(factors: Vec<Factor<R>>) -> Self {
        FactorWord { factors, order_tag: OrderTag::Free }
    }

    pub fn from_pairs(order_tag: OrderTag, pairs: impl IntoIterator<Item = (Root, R)>) -> Self {
        FactorWord { factors: pairs.into_iter().map(|(r, c)| Factor::new(r, c)).collect(), order_tag }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Sum of the coefficients sitting on `root`.
    pub fn coeff_of(&self, root: Root) -> R {
        self.factors.iter().filter(|f| f.root == root).fold(R::zero(), |acc, f| acc.add(&f.coeff))
    }

    pub fn coeffs(&self) -> BTreeMap<Root, R> {
        let mut out: BTreeMap<Root, R> = BTreeMap::new();
        for f in &self.factors {
            let slot = out.entry(f.root).or_insert_with(R::zero);
            *slot = slot.add(&f.coeff);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Drops `X_α(0)` factors.
    pub fn compact(mut self) -> Self {
        self.factors.retain(|f| !f.coeff.is_zero());
        self
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        FactorWord { factors, order_tag: OrderTag::Free }
    }

    /// The inverse word: reversed, negated coefficients.
    pub fn inverse(&self) -> Self {
        let factors = self.factors.iter().rev().map(|f| Factor::new(f.root, f.coeff.neg())).collect();
        FactorWord { factors, order_tag: OrderTag::Free }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> FactorWord<S> {
        FactorWord {
            factors: self.factors.iter().map(|x| Factor::new(x.root, f(&x.coeff))).collect(),
            order_tag: self.order_tag,
        }
    }

    /// True when the roots are strictly increasing in ≼.
    pub fn is_prec_ordered(&self, st: &Strata) -> bool {
        self.factors.windows(2).all(|w| st.cmp_prec(w[0].root, w[1].root).is_lt())
    }
}

impl<R: fmt::Display> fmt::Display for FactorWord<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// `I + c·E_root`.
pub fn x_matrix<R: Ring>(root: Root, coeff: &R, n: usize) -> Matrix<R> {
    let mut m = Matrix::identity(n);
    let (a, b) = root.row_col();
    m.set(a as usize - 1, b as usize - 1, coeff.clone());
    m
}

/// `M·(I + c·E_{ab})`: column `b` gains `c` times column `a`.
pub fn right_mul_x<R: Ring>(m: &mut Matrix<R>, root: Root, coeff: &R) {
    if coeff.is_zero() {
        return;
    }
    let (a, b) = root.row_col();
    let (a, b) = (a as usize - 1, b as usize - 1);
    for i in 0..m.dim() {
        let x = m.get(i, a);
        if x.is_zero() {
            continue;
        }
        let v = m.get(i, b).add(&x.mul(coeff));
        m.set(i, b, v);
    }
}

pub fn matrix_of_word<R: Ring>(w: &FactorWord<R>, l: usize) -> Matrix<R> {
    let mut m = Matrix::identity(l + 1);
    for f in &w.factors {
        right_mul_x(&mut m, f.root, &f.coeff);
    }
    m
}

/// Sign in `X_a(x)X_b(y) = X_b(y)X_a(x)X_{a+b}(ε·x·y)`.
pub fn commutator_sign(a: Root, b: Root) -> i8 {
    if a.col() == b.row() {
        1
    } else if a.row() == b.col() {
        -1
    } else {
        0
    }
}

/// Rewrites `X_a X_b` as `X_b X_a` followed by the correction factor, if any.
pub fn commute_pair<R: Ring>(a: &Factor<R>, b: &Factor<R>) -> Result<FactorWord<R>, GroupError> {
    if a.root == b.root.negate() {
        return Err(GroupError::OppositeRoots(a.root, b.root));
    }
    let mut factors = vec![b.clone(), a.clone()];
    if let Some(ab) = sum(a.root, b.root) {
        let eps = commutator_sign(a.root, b.root);
        debug_assert!(eps != 0);
        factors.push(Factor::new(ab, a.coeff.mul(&b.coeff).scale_int(eps as i64)));
    }
    Ok(FactorWord::free(factors))
}

/// Determinant relation `∏ z_{i,i} = 1` over the block, if the block is nonempty.
pub fn block_relation(rep: &ClassRep) -> Option<DiagRelation> {
    (rep.p > 0).then(|| DiagRelation::new((rep.m + 2) as u16, (rep.m + rep.p + 1) as u16))
}

fn check_block(rep: &ClassRep, i: u16) -> Result<(), GroupError> {
    if rep.in_block(i) {
        Ok(())
    } else {
        Err(GroupError::OutsideBlock(i))
    }
}

/// Strictly monotone chains of `r` block indices. `decreasing` picks the
/// direction; `first_ne` excludes a value for the first entry; `bound`
/// is a strict bound for the last entry.
fn chains(rep: &ClassRep, r: usize, decreasing: bool, first_ne: u16, bound: u16) -> Vec<Vec<u16>> {
    let mut idx: Vec<u16> = rep.block().collect();
    if decreasing {
        idx.reverse();
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(idx: &[u16], start: usize, r: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for t in start..idx.len() {
            cur.push(idx[t]);
            rec(idx, t + 1, r, cur, out);
            cur.pop();
        }
    }
    rec(&idx, 0, r, &mut cur, &mut out);
    out.retain(|ch| {
        ch[0] != first_ne && {
            let last = *ch.last().unwrap();
            if decreasing {
                last > bound
            } else {
                last < bound
            }
        }
    });
    out
}

fn path_product(path: &[u16], rel: Option<DiagRelation>) -> MultiPoly {
    path.windows(2)
        .fold(MultiPoly::from_int(1).with_relation(rel), |acc, w| Ring::mul(&acc, &MultiPoly::z(w[0], w[1])))
}

/// `(T_{i,j}^{(r)}, S_{i,j}^{(r)})` as displayed, without signs.
pub fn ts_exprs(rep: &ClassRep, i: u16, j: u16, r: usize) -> Result<(MultiPoly, MultiPoly), GroupError> {
    check_block(rep, i)?;
    check_block(rep, j)?;
    let rel = block_relation(rep);
    let zii_inv = MultiPoly::z_inv(i).with_relation(rel);
    let zii = MultiPoly::z(i, i).with_relation(rel);
    if r == 0 {
        return Ok(if i == j {
            (zii_inv, zii)
        } else {
            (Ring::mul(&zii_inv, &MultiPoly::z(i, j)), Ring::mul(&MultiPoly::z(j, i), &zii))
        });
    }
    let mut t = MultiPoly::zero().with_relation(rel);
    for ch in chains(rep, r, true, i, j) {
        let path: Vec<u16> = std::iter::once(i).chain(ch).chain(std::iter::once(j)).collect();
        t = Ring::add(&t, &path_product(&path, rel));
    }
    let mut s = MultiPoly::zero().with_relation(rel);
    for ch in chains(rep, r, false, j, i) {
        let path: Vec<u16> = std::iter::once(j).chain(ch).chain(std::iter::once(i)).collect();
        s = Ring::add(&s, &path_product(&path, rel));
    }
    Ok((Ring::mul(&zii_inv, &t), Ring::mul(&s, &zii)))
}

/// Which reading of `T` the transport uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TForm {
    /// Exactly as displayed.
    Printed,
    /// Chain terms of length `r+1` carry `(-1)^{r+1}`; this is the entry of `z'^{-1}`.
    #[default]
    Signed,
    /// Signed, with the sign of every `r = 0` term flipped.
    /// Exists only to prove the checks can fail.
    FlipT0,
}

/// `Z_{β_i}(β_j) = Σ_r T_{i,j}^{(r)}` under the given reading.
pub fn z_beta(rep: &ClassRep, i: u16, j: u16, form: TForm) -> Result<MultiPoly, GroupError> {
    let rel = block_relation(rep);
    let mut acc = MultiPoly::zero().with_relation(rel);
    for r in 0..rep.p.max(1) {
        let (t, _) = ts_exprs(rep, i, j, r)?;
        let sign = match form {
            TForm::Printed => 1,
            TForm::FlipT0 if r == 0 && i == j => -1,
            TForm::FlipT0 if r == 0 => 1,
            _ if r == 0 && i == j => 1,
            _ => {
                if r % 2 == 0 {
                    -1
                } else {
                    1
                }
            }
        };
        acc = Ring::add(&acc, &t.scale_int(sign));
    }
    Ok(acc)
}

/// `Z_{δ_i}(δ_j) = Σ_r S_{i,j}^{(r)}`.
pub fn z_delta(rep: &ClassRep, i: u16, j: u16) -> Result<MultiPoly, GroupError> {
    let rel = block_relation(rep);
    let mut acc = MultiPoly::zero().with_relation(rel);
    for r in 0..rep.p.max(1) {
        acc = Ring::add(&acc, &ts_exprs(rep, i, j, r)?.1);
    }
    Ok(acc)
}

/// `z' = z''·z_H`: `z''` is the ≼_Z-ordered product over Δ_Z, `z_H` holds
/// `z_{i,i}` on the block and `μ` on every other index.
pub fn assemble_z_prime<R: Ring>(
    st: &Strata,
    z: &dyn Fn(u16, u16) -> R,
    mu: &R,
) -> Result<Matrix<R>, GroupError> {
    let rep = &st.rep;
    let n = rep.n();
    let mut m = Matrix::identity(n);
    for r in st.z_order() {
        right_mul_x(&mut m, r, &z(r.row(), r.col()));
    }
    let mut h = Matrix::identity(n);
    for x in 1..=n as u16 {
        let v = if rep.in_block(x) { z(x, x) } else { mu.clone() };
        if v.is_zero() {
            return Err(GroupError::Support(x, x));
        }
        h.set(x as usize - 1, x as usize - 1, v);
    }
    Ok(m.mul(&h))
}

/// Symbolic `z'` with `μ = 1`.
pub fn symbolic_z_prime(st: &Strata) -> Matrix<MultiPoly> {
    let rel = block_relation(&st.rep);
    assemble_z_prime(st, &|i, j| MultiPoly::z(i, j).with_relation(rel), &MultiPoly::from_int(1))
        .expect("symbolic diagonal is nonzero")
}

fn single_class(st: &Strata, k: usize, w: &FactorWord<MultiPoly>) -> Result<Option<Crc>, GroupError> {
    let mut class = None;
    for f in &w.factors {
        let c = st.crc_of(f.root).ok_or_else(|| GroupError::MixedSupport(format!("{} not in K", f.root)))?;
        if st.d_of(f.root) != Some(k) {
            return Err(GroupError::MixedSupport(format!("{} not in layer {k}", f.root)));
        }
        let c = if c.is_o() { Crc::O3 } else { c };
        match class {
            None => class = Some(c),
            Some(prev) if prev == c => {}
            Some(_) => return Err(GroupError::MixedSupport("more than one class".into())),
        }
    }
    Ok(class)
}

/// `z'^{-1}·w·z'` for a word inside one of `N_k^C`, `N_k^R` (or the O part,
/// which `z'` centralizes), ≼-ordered.
pub fn z_conjugate(
    st: &Strata,
    k: usize,
    w: &FactorWord<MultiPoly>,
    form: TForm,
) -> Result<FactorWord<MultiPoly>, GroupError> {
    let rep = &st.rep;
    let class = single_class(st, k, w)?;
    let mut out: BTreeMap<Root, MultiPoly> = BTreeMap::new();
    for f in &w.factors {
        match class {
            Some(Crc::C) => {
                let (j, col) = f.root.row_col();
                for i in rep.block() {
                    let target = Root::from_position(i, col).expect("off-diagonal");
                    if st.d_of(target) != Some(k) {
                        return Err(GroupError::MixedSupport(format!("{target} missing from layer {k}")));
                    }
                    let term = Ring::mul(&f.coeff, &z_beta(rep, i, j, form)?);
                    let slot = out.entry(target).or_insert_with(MultiPoly::zero);
                    *slot = Ring::add(slot, &term);
                }
            }
            Some(Crc::R) => {
                let (row, j) = f.root.row_col();
                for i in rep.block() {
                    let target = Root::from_position(row, i).expect("off-diagonal");
                    if st.d_of(target) != Some(k) {
                        return Err(GroupError::MixedSupport(format!("{target} missing from layer {k}")));
                    }
                    let term = Ring::mul(&f.coeff, &z_delta(rep, i, j)?);
                    let slot = out.entry(target).or_insert_with(MultiPoly::zero);
                    *slot = Ring::add(slot, &term);
                }
            }
            _ => {
                let slot = out.entry(f.root).or_insert_with(MultiPoly::zero);
                *slot = Ring::add(slot, &f.coeff);
            }
        }
    }
    let roots = st.sorted_prec(out.keys().copied());
    Ok(FactorWord::from_pairs(OrderTag::Prec, roots.into_iter().map(|r| (r, out[&r].clone()))).compact())
}

/// `s X_η(c) s^{-1} = X_{sη}(t(η)·c)` applied factorwise.
pub fn s_conjugate<R: Ring>(rep: &ClassRep, signs: &SignData, w: &FactorWord<R>) -> FactorWord<R> {
    FactorWord {
        factors: w
            .factors
            .iter()
            .map(|f| Factor::new(act_on_root(&rep.s, f.root), f.coeff.scale_int(signs.t[&f.root] as i64)))
            .collect(),
        order_tag: OrderTag::Free,
    }
}

/// `n'_k = s z'^{-1} n_{k-1} z' s^{-1}` for a ≼-ordered word on layer `k-1`,
/// returned ≼-ordered on layer `k`.
pub fn c_prime(
    st: &Strata,
    k: usize,
    prev: &FactorWord<MultiPoly>,
    form: TForm,
) -> Result<FactorWord<MultiPoly>, GroupError> {
    let rep = &st.rep;
    let signs = sign_data(rep);
    let mut parts: BTreeMap<u8, FactorWord<MultiPoly>> = BTreeMap::new();
    for f in &prev.factors {
        let c = st.crc_of(f.root).ok_or_else(|| GroupError::MixedSupport(format!("{} not in K", f.root)))?;
        let key = match c {
            Crc::C => 0,
            Crc::R => 1,
            _ => 2,
        };
        parts.entry(key).or_insert_with(|| FactorWord::empty(OrderTag::Prec)).factors.push(f.clone());
    }
    let mut out: BTreeMap<Root, MultiPoly> = BTreeMap::new();
    for part in parts.values() {
        let conj = z_conjugate(st, k - 1, part, form)?;
        for f in s_conjugate(rep, &signs, &conj).factors {
            if !f.root.is_positive() {
                return Err(GroupError::LeavesPositive(act_on_root(&rep.s_inv(), f.root)));
            }
            let slot = out.entry(f.root).or_insert_with(MultiPoly::zero);
            *slot = Ring::add(slot, &f.coeff);
        }
    }
    let roots = st.sorted_prec(out.keys().copied());
    Ok(FactorWord::from_pairs(OrderTag::Prec, roots.into_iter().map(|r| (r, out[&r].clone()))).compact())
}

/// Coordinates of the second kind of a unipotent upper-triangular `m` for
/// the given order of roots. The result is checked by multiplying back.
pub fn factorize_unipotent<R: Ring>(m: &Matrix<R>, order: &[Root]) -> Result<FactorWord<R>, GroupError> {
    let n = m.dim();
    for i in 0..n {
        if !m.get(i, i).is_one() {
            return Err(GroupError::NotUnipotent);
        }
        for j in 0..i {
            if !m.get(i, j).is_zero() {
                return Err(GroupError::NotUnipotent);
            }
        }
    }
    let allowed: std::collections::BTreeSet<(u16, u16)> = order.iter().map(|r| r.row_col()).collect();
    for (a, b) in m.off_diagonal_support() {
        if !allowed.contains(&(a, b)) {
            return Err(GroupError::Support(a, b));
        }
    }
    let mut heights: Vec<u16> = order.iter().map(|r| r.height()).collect();
    heights.sort_unstable();
    heights.dedup();
    let mut coeff: Vec<R> = vec![R::zero(); order.len()];
    for h in heights {
        let mut p = Matrix::identity(n);
        for (r, c) in order.iter().zip(&coeff) {
            right_mul_x(&mut p, *r, c);
        }
        for (idx, r) in order.iter().enumerate() {
            if r.height() == h {
                let (a, b) = r.row_col();
                coeff[idx] = m.at(a, b).sub(p.at(a, b));
            }
        }
    }
    let w = FactorWord::from_pairs(OrderTag::Free, order.iter().copied().zip(coeff));
    let back = matrix_of_word(&w, n - 1);
    if back != *m {
        return Err(GroupError::Verification(back.first_difference(m)));
    }
    Ok(w.compact())
}

/// Variable name for a `z` entry, used by evaluators.
pub fn z_var(i: u16, j: u16) -> VarId {
    VarId::Z(i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::{q, qf, Q};
    use crate::strata::stratify;
    use crate::weyl::{representative, s_matrix};
    use proptest::prelude::*;

    fn c(i: u16) -> MultiPoly {
        MultiPoly::c(Root::simple(i))
    }

    #[test]
    fn word_matrix_expansion() {
        let w = FactorWord::free(vec![Factor::new(Root::simple(1), c(1)), Factor::new(Root::simple(2), c(2))]);
        let m = matrix_of_word(&w, 2);
        assert_eq!(*m.at(1, 2), c(1));
        assert_eq!(*m.at(2, 3), c(2));
        assert_eq!(*m.at(1, 3), &c(1) * &c(2));
        let id = matrix_of_word(&w.concat(&w.inverse()), 2);
        assert_eq!(id, Matrix::identity(3));
        assert_eq!(matrix_of_word(&FactorWord::<Q>::empty(OrderTag::Free), 4), Matrix::identity(5));
    }

    #[test]
    fn commute_examples() {
        let a = Factor::new(Root::simple(1), c(1));
        let b = Factor::new(Root::simple(2), c(2));
        let w = commute_pair(&a, &b).unwrap();
        assert_eq!(w.factors[2], Factor::new(Root::positive(1, 2).unwrap(), &c(1) * &c(2)));
        let w = commute_pair(&b, &a).unwrap();
        assert_eq!(w.factors[2], Factor::new(Root::positive(1, 2).unwrap(), Ring::neg(&(&c(2) * &c(1)))));
        let far = Factor::new(Root::simple(3), c(3));
        assert_eq!(commute_pair(&a, &far).unwrap().len(), 2);
        assert!(commute_pair(&a, &Factor::new(Root::simple(1).negate(), c(2))).is_err());
    }

    #[test]
    fn commute_pair_exact_all_pairs() {
        for l in 1..=8usize {
            let n = l + 1;
            let mut roots = Vec::new();
            for a in 1..=n as u16 {
                for b in 1..=n as u16 {
                    if a != b {
                        roots.push(Root::from_position(a, b).unwrap());
                    }
                }
            }
            let x = MultiPoly::c(Root::simple(1));
            let y = MultiPoly::cp(Root::simple(1));
            for &ra in &roots {
                for &rb in &roots {
                    if ra == rb.negate() {
                        continue;
                    }
                    let fa = Factor::new(ra, x.clone());
                    let fb = Factor::new(rb, y.clone());
                    let lhs = matrix_of_word(&FactorWord::free(vec![fa.clone(), fb.clone()]), l);
                    let rhs = matrix_of_word(&commute_pair(&fa, &fb).unwrap(), l);
                    assert_eq!(lhs, rhs, "{ra} {rb}");
                }
            }
        }
    }

    #[test]
    fn factorize_example() {
        let (a1, a2, a12) = (Root::simple(1), Root::simple(2), Root::positive(1, 2).unwrap());
        let m = matrix_of_word(&FactorWord::free(vec![Factor::new(a1, c(1)), Factor::new(a2, c(2))]), 2);
        let w = factorize_unipotent(&m, &[a2, a1, a12]).unwrap();
        assert_eq!(w.coeff_of(a2), c(2));
        assert_eq!(w.coeff_of(a1), c(1));
        assert_eq!(w.coeff_of(a12), &c(1) * &c(2));
        assert!(factorize_unipotent(&Matrix::<Q>::identity(4), &[]).unwrap().is_empty());
        let mut bad = Matrix::<Q>::identity(3);
        bad.set(2, 0, q(1));
        assert_eq!(factorize_unipotent(&bad, &[a1]), Err(GroupError::NotUnipotent));
        let mut off = Matrix::<Q>::identity(3);
        off.set(0, 2, q(1));
        assert_eq!(factorize_unipotent(&off, &[a1]), Err(GroupError::Support(1, 3)));
    }

    #[test]
    fn ts_degenerate_branches() {
        let rep = representative(5, 2).unwrap();
        let b: Vec<u16> = rep.block().collect();
        assert_eq!(b.len(), 3);
        let (t, s) = ts_exprs(&rep, b[0], b[1], 0).unwrap();
        assert_eq!(t, Ring::mul(&MultiPoly::z_inv(b[0]), &MultiPoly::z(b[0], b[1])));
        assert_eq!(s, Ring::mul(&MultiPoly::z(b[1], b[0]), &MultiPoly::z(b[0], b[0])));
        let (t, s) = ts_exprs(&rep, b[0], b[1], 3).unwrap();
        assert!(t.is_zero() && s.is_zero());
        assert!(ts_exprs(&rep, 1, b[0], 0).is_err());
    }

    fn sample_z(st: &Strata, seed: u64) -> BTreeMap<(u16, u16), Q> {
        let rep = &st.rep;
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = ((state >> 33) % 9) as i64 + 1;
            let b = ((state >> 45) % 9) as i64 + 1;
            let sg = if (state >> 60) & 1 == 1 { -1 } else { 1 };
            qf(sg * a, b)
        };
        let mut z = BTreeMap::new();
        let block: Vec<u16> = rep.block().collect();
        for &i in &block {
            for &j in &block {
                z.insert((i, j), next());
            }
        }
        if let Some((&last, init)) = block.split_last() {
            let prod = init.iter().fold(q(1), |acc, &i| acc * &z[&(i, i)]);
            z.insert((last, last), q(1) / prod);
        }
        z
    }

    fn eval_word(w: &FactorWord<MultiPoly>, assign: &BTreeMap<VarId, Q>) -> FactorWord<Q> {
        FactorWord {
            factors: w.factors.iter().map(|f| Factor::new(f.root, f.coeff.eval(assign).unwrap())).collect(),
            order_tag: w.order_tag,
        }
    }

    fn z_assign(z: &BTreeMap<(u16, u16), Q>) -> BTreeMap<VarId, Q> {
        z.iter().map(|(&(i, j), v)| (VarId::Z(i, j), v.clone())).collect()
    }

    #[test]
    fn transport_matches_matrices() {
        for l in 1..=5usize {
            for lp in 1..=l {
                let rep = representative(l, lp).unwrap();
                let st = stratify(&rep);
                let s = s_matrix(&rep).unwrap();
                let si = s.inverse().unwrap();
                for seed in 0..3u64 {
                    let z = sample_z(&st, seed + 10 * l as u64 + lp as u64);
                    let zp = assemble_z_prime(&st, &|i, j| z[&(i, j)].clone(), &q(1)).unwrap();
                    let zpi = zp.inverse().unwrap();
                    let mut assign = z_assign(&z);
                    for k in 1..=st.big_d {
                        let layer = st.sorted_prec(st.layer(k).iter().copied());
                        let w = FactorWord::from_pairs(
                            OrderTag::Prec,
                            layer.iter().filter(|&&r| act_on_root(&rep.s, r).is_positive()).map(|&r| (r, MultiPoly::c(r))),
                        );
                        for (i, f) in w.factors.iter().enumerate() {
                            assign.insert(VarId::C(f.root), qf(i as i64 + 2, 3));
                        }
                        let np = c_prime(&st, k + 1, &w, TForm::Signed).unwrap();
                        assert!(np.is_prec_ordered(&st));
                        let lhs = matrix_of_word(&eval_word(&np, &assign), l);
                        let rhs = s.mul(&zpi).mul(&matrix_of_word(&eval_word(&w, &assign), l)).mul(&zp).mul(&si);
                        assert_eq!(lhs, rhs, "({l},{lp}) k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn z_conjugation_per_class() {
        for (l, lp) in [(4, 1), (5, 2), (5, 3), (6, 3)] {
            let rep = representative(l, lp).unwrap();
            let st = stratify(&rep);
            let z = sample_z(&st, 7);
            let zp = assemble_z_prime(&st, &|i, j| z[&(i, j)].clone(), &q(1)).unwrap();
            let zpi = zp.inverse().unwrap();
            let mut assign = z_assign(&z);
            for k in 1..=st.big_d + 1 {
                for class in [Crc::C, Crc::R] {
                    let roots: Vec<Root> =
                        st.sorted_prec(st.layer(k).iter().copied().filter(|&r| st.crc_of(r) == Some(class)));
                    if roots.is_empty() {
                        continue;
                    }
                    for (i, &r) in roots.iter().enumerate() {
                        assign.insert(VarId::C(r), qf(2 * i as i64 - 3, 5));
                    }
                    let w = FactorWord::from_pairs(OrderTag::Prec, roots.iter().map(|&r| (r, MultiPoly::c(r))));
                    let conj = z_conjugate(&st, k, &w, TForm::Signed).unwrap();
                    let lhs = matrix_of_word(&eval_word(&conj, &assign), l);
                    let rhs = zpi.mul(&matrix_of_word(&eval_word(&w, &assign), l)).mul(&zp);
                    assert_eq!(lhs, rhs, "({l},{lp}) k={k} {class}");
                    let printed = z_conjugate(&st, k, &w, TForm::Printed).unwrap();
                    if class == Crc::C && rep.p >= 2 {
                        assert_ne!(matrix_of_word(&eval_word(&printed, &assign), l), rhs);
                    }
                    let normal = zp.mul(&matrix_of_word(&eval_word(&w, &assign), l)).mul(&zpi);
                    let back = factorize_unipotent(&normal, &roots).unwrap();
                    assert!(back.factors.iter().all(|f| roots.contains(&f.root)));
                }
            }
        }
    }

    #[test]
    fn z_prime_trivial_cases() {
        let rep = representative(3, 3).unwrap();
        let st = stratify(&rep);
        let zp = assemble_z_prime(&st, &|_, _| q(7), &q(1)).unwrap();
        assert_eq!(zp, Matrix::identity(4));
        let rep = representative(3, 2).unwrap();
        let st = stratify(&rep);
        let zp = assemble_z_prime(&st, &|i, j| if i == j { q(1) } else { q(0) }, &q(1)).unwrap();
        assert_eq!(zp, Matrix::identity(4));
    }

    proptest! {
        #[test]
        fn factorize_round_trip(l in 2usize..=8, seed in any::<u64>()) {
            let lp = (seed as usize % l) + 1;
            let rep = representative(l, lp).unwrap();
            let st = stratify(&rep);
            let order = st.prec_order();
            let mut x = seed;
            let w = FactorWord::from_pairs(OrderTag::Prec, order.iter().map(|&r| {
                x = x.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
                (r, qf((x >> 40) as i64 % 7 - 3, ((x >> 20) % 5) as i64 + 1))
            })).compact();
            let back = factorize_unipotent(&matrix_of_word(&w, l), &order).unwrap();
            prop_assert_eq!(back.coeffs(), w.coeffs());
        }
    }
}
