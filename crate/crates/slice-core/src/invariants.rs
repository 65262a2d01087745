//! Closed-form slice coordinates: the free-algebra recursion `B`, its
//! ascending-layer filter `C`, the per-root formula `C_κ`, and the generator
//! set obtained by expanding the transported letters.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::exactring::{MultiPoly, Ring, VarId, Q};
use crate::groupalg::{block_relation, c_prime, factorize_unipotent, matrix_of_word, FactorWord, GroupError, OrderTag, TForm};
use crate::rootsys::Root;
use crate::strata::{Crc, Strata};
use crate::weyl::{delta_sets, WeylError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error("{0} is not a root of K")]
    NotInK(Root),
    #[error("{0} lies in layer 1; the closed form starts at layer 2")]
    FirstLayer(Root),
    #[error("layer bounds violated: q={q}, f={f}, top={top}")]
    Bounds { q: usize, f: usize, top: usize },
    #[error("unexpanded letter {0} in generator")]
    Unexpanded(VarId),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    C(Root),
    /// The transported coordinate `c'_{s^{-1}α}`, attached to `α`.
    CPrime(Root),
}

impl Letter {
    pub fn root(self) -> Root {
        match self {
            Letter::C(r) | Letter::CPrime(r) => r,
        }
    }

    fn var(self) -> VarId {
        match self {
            Letter::C(r) => VarId::C(r),
            Letter::CPrime(r) => VarId::CPrime(r),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.var())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderedTerm {
    pub coeff: Q,
    pub letters: Vec<Letter>,
}

/// A sum of noncommutative words with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OrderedSum {
    terms: BTreeMap<Vec<Letter>, Q>,
}

impl OrderedSum {
    pub fn letter(l: Letter) -> Self {
        OrderedSum { terms: BTreeMap::from([(vec![l], Q::one())]) }
    }

    pub fn word(ls: Vec<Letter>, c: Q) -> Self {
        let mut s = OrderedSum::default();
        s.push(ls, c);
        s
    }

    fn push(&mut self, ls: Vec<Letter>, c: Q) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(ls) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &OrderedSum, sc: i64) {
        for (w, c) in &other.terms {
            self.push(w.clone(), c * Q::from_int(sc));
        }
    }

    pub fn mul(&self, other: &OrderedSum) -> OrderedSum {
        let mut out = OrderedSum::default();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend(w2.iter().copied());
                out.push(w, c1 * c2);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = OrderedTerm> + '_ {
        self.terms.iter().map(|(w, c)| OrderedTerm { coeff: c.clone(), letters: w.clone() })
    }

    /// Commutative image in `c`, `c'` variables.
    pub fn image(&self) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (w, c) in &self.terms {
            let mut counts: BTreeMap<VarId, i32> = BTreeMap::new();
            for l in w {
                *counts.entry(l.var()).or_insert(0) += 1;
            }
            out = Ring::add(&out, &MultiPoly::monomial(c.clone(), counts));
        }
        out
    }
}

impl fmt::Display for OrderedSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for l in w {
                write!(f, "·{l}")?;
            }
        }
        Ok(())
    }
}

/// Which reading of the closed form to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FormulaVariant {
    /// The displayed formula, unsigned and summed over all stages.
    Printed,
    /// Signed commutators, the linear `c_κ` term, last stage only, and the
    /// `P'` term restricted to pairs that actually cross.
    Corrected,
    /// Like `Corrected`, but `B` is split by round: each round only sees its
    /// own moving letters, passed factors of layer `≥ k` contribute their `c`
    /// letter, and a chain of passed factors must follow the order of `v`.
    #[default]
    PerRound,
}

type Key = (Root, usize, usize, usize);

pub struct ClosedForm<'a> {
    st: &'a Strata,
    variant: FormulaVariant,
    memo: HashMap<Key, OrderedSum>,
    round_memo: HashMap<Key, OrderedSum>,
}

impl<'a> ClosedForm<'a> {
    pub fn new(st: &'a Strata, variant: FormulaVariant) -> Self {
        ClosedForm { st, variant, memo: HashMap::new(), round_memo: HashMap::new() }
    }

    fn lay(&self, r: Root) -> usize {
        self.st.d_of(r).unwrap_or(0)
    }

    fn c_sign(&self) -> i64 {
        match self.variant {
            FormulaVariant::Printed => 1,
            FormulaVariant::Corrected | FormulaVariant::PerRound => -1,
        }
    }

    /// `B_η^{q,f}` for the layer `k` being computed.
    pub fn b_expr(&mut self, eta: Root, q: usize, f: usize, k: usize) -> Result<OrderedSum, InvariantError> {
        let top = self.st.big_d + 1;
        if !self.st.in_k(eta) {
            return Err(InvariantError::NotInK(eta));
        }
        if q < 2 || f + 1 < q || f > top || k > top {
            return Err(InvariantError::Bounds { q, f, top });
        }
        self.b(eta, q, f, k)
    }

    fn b(&mut self, eta: Root, q: usize, f: usize, k: usize) -> Result<OrderedSum, InvariantError> {
        if f + 1 == q {
            return self.b(eta, q - 1, k, k);
        }
        let key = (eta, q, f, k);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let cs = self.c_sign();
        let res = if q == 2 && f == 2 {
            let mut res = OrderedSum::letter(Letter::CPrime(eta));
            for (e1, e2) in self.st.c_set(eta, 2, 2) {
                res.add_scaled(&OrderedSum::word(vec![Letter::CPrime(e1), Letter::C(e2)], Q::one()), cs);
            }
            for (e1, e2) in self.st.r_set(eta, 2, 2) {
                res.add_scaled(&OrderedSum::word(vec![Letter::CPrime(e1), Letter::C(e2)], Q::one()), 1);
            }
            res
        } else {
            let mut res = self.b(eta, q, f - 1, k)?;
            for (e1, e2) in self.st.c_set(eta, f, f) {
                let t = self.b(e1, q, f, k)?.mul(&self.b(e2, q, f - 1, k)?);
                res.add_scaled(&t, cs);
            }
            for (e1, e2) in self.st.r_set(eta, f, f) {
                let t = self.b(e1, q, f, k)?.mul(&self.b(e2, q, f, k)?);
                res.add_scaled(&t, 1);
            }
            res
        };
        self.memo.insert(key, res.clone());
        Ok(res)
    }

    /// Coefficient at `η` produced during round `q` up to stage `f`, when
    /// computing layer `k`.
    pub fn round_value(&mut self, eta: Root, q: usize, f: usize, k: usize) -> OrderedSum {
        if f < q {
            return if self.lay(eta) == q { OrderedSum::letter(Letter::CPrime(eta)) } else { OrderedSum::default() };
        }
        let key = (eta, q, f, k);
        if let Some(v) = self.round_memo.get(&key) {
            return v.clone();
        }
        let mut res = self.round_value(eta, q, f - 1, k);
        for (e1, e2) in self.st.c_set(eta, f, f) {
            let t = self.round_value(e1, q, f, k).mul(&self.passed_value(e2, q, f - 1, k));
            res.add_scaled(&self.in_v_order(&t), -1);
        }
        for (e1, e2) in self.st.r_set(eta, f, f) {
            let t = self.round_value(e1, q, f, k).mul(&self.passed_value(e2, q, f, k));
            res.add_scaled(&self.in_v_order(&t), 1);
        }
        self.round_memo.insert(key, res.clone());
        res
    }

    /// Value of the factors at `η` sitting in `v` while round `q` moves through it.
    fn passed_value(&mut self, eta: Root, q: usize, f: usize, k: usize) -> OrderedSum {
        let d = self.lay(eta);
        let mut res = if d >= k { OrderedSum::letter(Letter::C(eta)) } else { OrderedSum::default() };
        res.add_scaled(&self.round_value(eta, q, f, k), 1);
        if d == q {
            res.add_scaled(&OrderedSum::letter(Letter::CPrime(eta)), -1);
        }
        res
    }

    /// Drops words whose `c` letters are not strictly ≼-increasing.
    fn in_v_order(&self, b: &OrderedSum) -> OrderedSum {
        let mut out = OrderedSum::default();
        for (w, c) in &b.terms {
            let cs: Vec<Root> = w
                .iter()
                .filter_map(|l| match l {
                    Letter::C(r) => Some(*r),
                    Letter::CPrime(_) => None,
                })
                .collect();
            if cs.windows(2).all(|p| self.st.cmp_prec(p[0], p[1]).is_lt()) {
                out.push(w.clone(), c.clone());
            }
        }
        out
    }

    fn all_rounds(&mut self, eta: Root, upto: usize, k: usize) -> OrderedSum {
        let mut tot = OrderedSum::default();
        for q in 2..=upto {
            tot.add_scaled(&self.round_value(eta, q, upto, k), 1);
        }
        tot
    }

    fn per_round_letters(&mut self, kappa: Root, k: usize, class: Crc) -> OrderedSum {
        let mut res = OrderedSum::letter(Letter::C(kappa));
        res.add_scaled(&self.all_rounds(kappa, k, k), 1);
        if class.is_o() {
            // a layer-k factor of round q moves left past layer-d_1 factors of later rounds
            for (e1, e2) in self.st.p_set(kappa) {
                let d1 = self.lay(e1);
                for q in 2..=k {
                    let left = self.round_value(e2, q, k, k);
                    for qq in q + 1..=d1 {
                        let t = left.mul(&self.round_value(e1, qq, d1, k));
                        res.add_scaled(&t, Self::eps(e2, e1));
                    }
                }
            }
        }
        if class == Crc::O3 {
            for (e1, e2) in self.st.p_prime_set(kappa) {
                if !self.st.cmp_prec(e1, e2).is_lt() {
                    continue;
                }
                let t = OrderedSum::letter(Letter::C(e2)).mul(&self.all_rounds(e1, k, k));
                res.add_scaled(&t, Self::eps(e2, e1));
            }
        }
        res
    }

    /// Keeps the words whose letters at layer `≥ d(η)` have non-decreasing layers.
    pub fn c_filter(&self, b: &OrderedSum, eta: Root) -> OrderedSum {
        let d0 = self.lay(eta);
        let mut out = OrderedSum::default();
        for (w, c) in &b.terms {
            let seq: Vec<usize> = w.iter().map(|l| self.lay(l.root())).filter(|&d| d >= d0).collect();
            if seq.windows(2).all(|p| p[0] <= p[1]) {
                out.push(w.clone(), c.clone());
            }
        }
        out
    }

    /// `C_η^{q,f}`.
    pub fn c_qf(&mut self, eta: Root, q: usize, f: usize, k: usize) -> Result<OrderedSum, InvariantError> {
        let b = self.b_expr(eta, q, f, k)?;
        Ok(self.c_filter(&b, eta))
    }

    fn eps(left: Root, right: Root) -> i64 {
        crate::groupalg::commutator_sign(left, right) as i64
    }

    /// `C_κ` as a sum of words in `c` and `c'`.
    pub fn c_kappa_letters(&mut self, kappa: Root) -> Result<OrderedSum, InvariantError> {
        let k = self.st.d_of(kappa).ok_or(InvariantError::NotInK(kappa))?;
        if k < 2 {
            return Err(InvariantError::FirstLayer(kappa));
        }
        let class = self.st.crc_of(kappa).expect("in K");
        if self.variant == FormulaVariant::PerRound {
            return Ok(self.per_round_letters(kappa, k, class));
        }
        let corrected = self.variant == FormulaVariant::Corrected;
        let mut res = OrderedSum::default();
        if corrected {
            res = OrderedSum::letter(Letter::C(kappa));
            res.add_scaled(&self.c_qf(kappa, k, k, k)?, 1);
        } else {
            for q in 2..=k {
                res.add_scaled(&self.c_qf(kappa, q, k, k)?, 1);
            }
        }
        if class.is_o() {
            for (e1, e2) in self.st.p_set(kappa) {
                let d1 = self.lay(e1);
                for q in 2..d1 {
                    let mut inner = OrderedSum::default();
                    for qq in q + 1..=d1 {
                        inner.add_scaled(&self.c_qf(e1, qq, d1, k)?, 1);
                    }
                    let sg = if corrected { Self::eps(e2, e1) } else { 1 };
                    res.add_scaled(&self.c_qf(e2, q, k, k)?.mul(&inner), sg);
                }
            }
        }
        if class == Crc::O3 {
            for (e1, e2) in self.st.p_prime_set(kappa) {
                if corrected {
                    // v_k's η_2 stands left of n''s η_1; they cross only when η_1 ≺ η_2
                    if !self.st.cmp_prec(e1, e2).is_lt() {
                        continue;
                    }
                    let t = OrderedSum::letter(Letter::C(e2)).mul(&self.c_qf(e1, k, k, k)?);
                    res.add_scaled(&t, Self::eps(e2, e1));
                } else {
                    for q in 2..=k {
                        let mut inner = OrderedSum::letter(Letter::C(e2));
                        for qq in q + 1..=k {
                            inner.add_scaled(&self.c_qf(e2, qq, k, k)?, 1);
                        }
                        res.add_scaled(&self.c_qf(e1, q, k, k)?.mul(&inner), 1);
                    }
                }
            }
        }
        Ok(res)
    }

    /// Commutative image of `C_κ` in `c`, `c'`.
    pub fn c_kappa(&mut self, kappa: Root) -> Result<MultiPoly, InvariantError> {
        Ok(self.c_kappa_letters(kappa)?.image())
    }
}

/// `C_κ` with the default reading.
pub fn c_kappa(st: &Strata, kappa: Root) -> Result<MultiPoly, InvariantError> {
    ClosedForm::new(st, FormulaVariant::default()).c_kappa(kappa)
}

/// ≼-ordered word of a coordinate map restricted to one layer.
fn layer_word<R: Ring>(st: &Strata, k: usize, vals: &BTreeMap<Root, R>) -> FactorWord<R> {
    FactorWord::from_pairs(
        OrderTag::Prec,
        st.sorted_prec(st.layer(k).iter().copied()).into_iter().filter_map(|r| vals.get(&r).map(|v| (r, v.clone()))),
    )
    .compact()
}

/// Splits the layer-`D` word into its `Δ_s` coordinates and the rest by
/// refactorizing with the `Δ_s` roots first.
pub fn split_layer_d<R: Ring>(
    st: &Strata,
    delta_s: &BTreeSet<Root>,
    word: &FactorWord<R>,
) -> Result<(BTreeMap<Root, R>, BTreeMap<Root, R>), InvariantError> {
    let layer = st.sorted_prec(st.layer(st.big_d).iter().copied());
    let order: Vec<Root> = layer
        .iter()
        .copied()
        .filter(|r| delta_s.contains(r))
        .chain(layer.iter().copied().filter(|r| !delta_s.contains(r)))
        .collect();
    let m = matrix_of_word(word, st.rep.l);
    let w = factorize_unipotent(&m, &order)?;
    let mut p = BTreeMap::new();
    let mut pp = BTreeMap::new();
    for f in w.factors {
        if delta_s.contains(&f.root) {
            p.insert(f.root, f.coeff);
        } else {
            pp.insert(f.root, f.coeff);
        }
    }
    Ok((p, pp))
}

/// Layer-by-layer coordinates `n_1, …, n_{D+1}` obtained from the closed
/// form, as polynomials in `c` and `z`, together with the `Δ_s`-part of
/// layer `D`.
#[derive(Clone, Debug)]
pub struct ExpandedCoords {
    pub n: BTreeMap<Root, MultiPoly>,
    pub delta_s_part: BTreeMap<Root, MultiPoly>,
    /// Transported letters `c'` by root.
    pub c_prime: BTreeMap<Root, MultiPoly>,
}

pub fn expand_coords(st: &Strata, variant: FormulaVariant, form: TForm) -> Result<ExpandedCoords, InvariantError> {
    let rel = block_relation(&st.rep);
    let ds = delta_sets(&st.rep)?.delta_s;
    let mut cf = ClosedForm::new(st, variant);
    let mut n: BTreeMap<Root, MultiPoly> = BTreeMap::new();
    let mut cp_vals: BTreeMap<Root, MultiPoly> = BTreeMap::new();
    let mut delta_s_part = BTreeMap::new();
    for &r in st.layer(1) {
        n.insert(r, MultiPoly::c(r).with_relation(rel));
    }
    for k in 2..=st.big_d + 1 {
        let prev = layer_word(st, k - 1, &n);
        let src = if k - 1 == st.big_d {
            let (p, pp) = split_layer_d(st, &ds, &prev)?;
            delta_s_part = p;
            FactorWord::from_pairs(OrderTag::Prec, st.sorted_prec(pp.keys().copied()).into_iter().map(|r| (r, pp[&r].clone())))
        } else {
            prev
        };
        let np = c_prime(st, k, &src, form)?;
        for &r in st.layer(k) {
            cp_vals.insert(r, np.coeff_of(r).with_relation(rel));
        }
        for &kappa in st.layer(k) {
            let img = cf.c_kappa(kappa)?;
            let sub = img.substitute(&|v| match v {
                VarId::CPrime(r) => cp_vals.get(r).cloned(),
                _ => None,
            });
            if let Some(v) = sub.variables().into_iter().find(|v| matches!(v, VarId::CPrime(_))) {
                return Err(InvariantError::Unexpanded(v));
            }
            n.insert(kappa, sub.with_relation(rel));
        }
    }
    if st.big_d == 0 {
        delta_s_part.clear();
    }
    Ok(ExpandedCoords { n, delta_s_part, c_prime: cp_vals })
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub kappa: Root,
    pub poly: MultiPoly,
}

impl Generator {
    pub fn degree(&self) -> i32 {
        self.poly.total_degree()
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub kappa_to_poly: BTreeMap<Root, MultiPoly>,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.kappa_to_poly.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappa_to_poly.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Generator> + '_ {
        self.kappa_to_poly.iter().map(|(k, p)| Generator { kappa: *k, poly: p.clone() })
    }
}

/// `{C_κ : κ ∈ Δ_s}` with every `c'` expanded into `c` and `z`.
pub fn generators(st: &Strata) -> Result<GeneratorSet, InvariantError> {
    generators_with(st, FormulaVariant::default(), TForm::Signed)
}

pub fn generators_with(st: &Strata, variant: FormulaVariant, form: TForm) -> Result<GeneratorSet, InvariantError> {
    let ds = delta_sets(&st.rep)?.delta_s;
    let coords = expand_coords(st, variant, form)?;
    let kappa_to_poly = ds.iter().map(|&k| (k, coords.n[&k].clone())).collect();
    Ok(GeneratorSet { kappa_to_poly })
}

/// Numeric evaluation of the layer coordinates at one point, without
/// building the expanded polynomials.
pub fn evaluate_coords(
    st: &Strata,
    variant: FormulaVariant,
    form: TForm,
    c: &BTreeMap<Root, Q>,
    z: &BTreeMap<(u16, u16), Q>,
) -> Result<(BTreeMap<Root, Q>, BTreeMap<Root, Q>), InvariantError> {
    let ds = delta_sets(&st.rep)?.delta_s;
    let mut cf = ClosedForm::new(st, variant);
    let zvar = |v: &VarId| match v {
        VarId::Z(i, j) => z.get(&(*i, *j)).cloned(),
        _ => None,
    };
    let mut n: BTreeMap<Root, Q> = st.layer(1).iter().map(|&r| (r, c[&r].clone())).collect();
    let mut cp: BTreeMap<Root, Q> = BTreeMap::new();
    let mut delta_s_part = BTreeMap::new();
    for k in 2..=st.big_d + 1 {
        let prev = layer_word(st, k - 1, &n);
        let src = if k - 1 == st.big_d {
            let (p, pp) = split_layer_d(st, &ds, &prev)?;
            delta_s_part = p;
            layer_word(st, k - 1, &pp)
        } else {
            prev
        };
        let np = c_prime(st, k, &src.map(|x| MultiPoly::constant(x.clone())), form)?;
        for &r in st.layer(k) {
            let v = np.coeff_of(r).eval_with(&zvar).map_err(|_| InvariantError::Unexpanded(VarId::CPrime(r)))?;
            cp.insert(r, v);
        }
        for &kappa in st.layer(k) {
            let img = cf.c_kappa(kappa)?;
            let v = img
                .eval_with(&|var| match var {
                    VarId::C(r) => c.get(r).cloned(),
                    VarId::CPrime(r) => cp.get(r).cloned(),
                    _ => None,
                })
                .map_err(|_| InvariantError::Unexpanded(VarId::C(kappa)))?;
            n.insert(kappa, v);
        }
    }
    Ok((n, delta_s_part))
}

/// Generator values at one point: `n`-coordinates on `Δ_s`.
pub fn evaluate_generators(
    st: &Strata,
    variant: FormulaVariant,
    form: TForm,
    c: &BTreeMap<Root, Q>,
    z: &BTreeMap<(u16, u16), Q>,
) -> Result<BTreeMap<Root, Q>, InvariantError> {
    let ds = delta_sets(&st.rep)?.delta_s;
    let (n, _) = evaluate_coords(st, variant, form, c, z)?;
    Ok(ds.iter().map(|&k| (k, n.get(&k).cloned().unwrap_or_else(Q::zero))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rearrange::{generic_input, run_pipeline, PipelineOptions};
    use crate::strata::stratify;
    use crate::weyl::representative;

    #[test]
    fn base_case_and_filter() {
        let rep = representative(3, 3).unwrap();
        let st = stratify(&rep);
        let mut cf = ClosedForm::new(&st, FormulaVariant::Printed);
        for &eta in st.layer(2) {
            let b = cf.b_expr(eta, 2, 2, 2).unwrap();
            let pairs = st.pqf_set(eta, 2, 2);
            assert_eq!(b.len(), 1 + pairs.len(), "{eta}");
            for (e1, e2) in pairs {
                assert!(b.terms().any(|t| t.letters == vec![Letter::CPrime(e1), Letter::C(e2)]));
            }
            let f = cf.c_filter(&b, eta);
            assert_eq!(cf.c_filter(&f, eta), f);
        }
        assert!(cf.b_expr(Root::simple(1), 1, 1, 1).is_err());
    }

    #[test]
    fn filter_drops_descending_words() {
        let rep = representative(6, 6).unwrap();
        let st = stratify(&rep);
        let cf = ClosedForm::new(&st, FormulaVariant::Corrected);
        let hi = st.layer(3)[0];
        let lo = st.layer(2)[0];
        let w = OrderedSum::word(vec![Letter::C(hi), Letter::C(lo)], Q::one());
        assert!(cf.c_filter(&w, lo).is_zero());
        let single = OrderedSum::letter(Letter::C(hi));
        assert_eq!(cf.c_filter(&single, lo), single);
    }

    fn engine_mismatches(variant: FormulaVariant, l_max: usize) -> Vec<String> {
        let mut bad = Vec::new();
        for l in 2..=l_max {
            for lp in 1..=l {
                let st = stratify(&representative(l, lp).unwrap());
                let mut cf = ClosedForm::new(&st, variant);
                for k in 2..=st.big_d + 1 {
                    let res = run_pipeline(&st, k, &generic_input(&st, k), &PipelineOptions::default()).unwrap();
                    for &kappa in st.layer(k) {
                        if cf.c_kappa(kappa).unwrap() != res.c_bar[&kappa] {
                            bad.push(format!("({l},{lp}) {kappa}"));
                        }
                    }
                }
            }
        }
        bad
    }

    #[test]
    fn matches_engine_through_rank_five() {
        assert_eq!(engine_mismatches(FormulaVariant::Corrected, 5), Vec::<String>::new());
    }

    #[test]
    fn per_round_matches_engine_through_rank_seven() {
        assert_eq!(engine_mismatches(FormulaVariant::PerRound, 7), Vec::<String>::new());
        let cumulative = engine_mismatches(FormulaVariant::Corrected, 7);
        assert!(cumulative.contains(&"(6,5) a(3,4)".to_string()), "{cumulative:?}");
    }

    #[test]
    fn generator_counts() {
        let st = stratify(&representative(3, 3).unwrap());
        let g = generators(&st).unwrap();
        assert_eq!(g.len(), 3);
        let st = stratify(&representative(4, 1).unwrap());
        let g = generators(&st).unwrap();
        assert_eq!(g.len(), delta_sets(&st.rep).unwrap().delta_s.len());
        for gen in g.iter() {
            assert!(gen.poly.variables().iter().all(|v| matches!(v, VarId::C(_) | VarId::Z(..))));
        }
    }
}
