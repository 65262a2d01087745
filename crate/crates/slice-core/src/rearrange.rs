//! Word rewriting that carries `n'_k ⋯ n'_2 v_{D+1} ⋯ v_k` into `v'' n̄_k n''`
//! one commutation at a time, so the layer-k coordinates come out as
//! explicit polynomials.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::exactring::{MultiPoly, Ring};
use crate::groupalg::{
    commutator_sign, factorize_unipotent, matrix_of_word, Factor, FactorWord, GroupError, OrderTag,
};
use crate::rootsys::{sum, Root};
use crate::strata::Strata;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RearrangeError {
    #[error("layer {k} outside 2..={top}")]
    Layer { k: usize, top: usize },
    #[error("{0} is not a root of K")]
    NotInK(Root),
    #[error("cannot move {moving} past {blocker}: layer order violated")]
    Precondition { moving: Root, blocker: Root },
    #[error("product changed at step {0}")]
    Conservation(String),
    #[error("certificate failed at {root}: engine {engine}, matrix {matrix}")]
    Certificate { root: Root, engine: String, matrix: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// How a factor came to be.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Input,
    /// Created when factor `left` passed factor `right`.
    Commutator { left: u64, right: u64 },
}

#[derive(Clone, Debug)]
pub struct Tracked {
    pub id: u64,
    pub root: Root,
    pub coeff: MultiPoly,
    pub origin: Origin,
}

type Word = Vec<Tracked>;

fn to_factor_word(w: &[Tracked]) -> FactorWord<MultiPoly> {
    FactorWord::free(w.iter().map(|t| Factor::new(t.root, t.coeff.clone())).collect())
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    /// Compare the symbolic matrix of the whole product after every stage.
    pub check_conservation: bool,
    /// Compare the result with a factorization of the product matrix.
    pub certify: bool,
    pub trace: bool,
}

/// Inputs: `v_j` for `j = k..=D+1` and `n'_q` for `q = 2..=k`, each ≼-ordered.
#[derive(Clone, Debug)]
pub struct PipelineInput {
    pub v: BTreeMap<usize, FactorWord<MultiPoly>>,
    pub n_prime: BTreeMap<usize, FactorWord<MultiPoly>>,
}

/// `v_j` with coefficients `c_α` and `n'_q` with letters `c'_α`.
pub fn generic_input(st: &Strata, k: usize) -> PipelineInput {
    let word = |j: usize, f: fn(Root) -> MultiPoly| {
        FactorWord::from_pairs(OrderTag::Prec, st.sorted_prec(st.layer(j).iter().copied()).into_iter().map(|r| (r, f(r))))
    };
    PipelineInput {
        v: (k..=st.big_d + 1).map(|j| (j, word(j, MultiPoly::c))).collect(),
        n_prime: (2..=k).map(|q| (q, word(q, MultiPoly::cp))).collect(),
    }
}

/// A factor the engine created at a point where the procedure expects none.
#[derive(Clone, Debug, PartialEq)]
pub struct Anomaly {
    pub stage: String,
    pub root: Root,
}

#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub k: usize,
    /// `n̄_k`, ≼-ordered.
    pub n_bar: FactorWord<MultiPoly>,
    pub c_bar: BTreeMap<Root, MultiPoly>,
    pub trace: Vec<(String, FactorWord<MultiPoly>)>,
    pub anomalies: Vec<Anomaly>,
    /// Correction factors created while sorting a word that the procedure
    /// rearranges "according to ≼".
    pub merge_corrections: Vec<Anomaly>,
    pub commutations: usize,
}

struct Engine<'a> {
    st: &'a Strata,
    next_id: u64,
    commutations: usize,
    anomalies: Vec<Anomaly>,
    merge_corrections: Vec<Anomaly>,
}

impl<'a> Engine<'a> {
    fn d(&self, r: Root) -> Result<usize, RearrangeError> {
        self.st.d_of(r).ok_or(RearrangeError::NotInK(r))
    }

    fn fresh(&mut self, root: Root, coeff: MultiPoly, origin: Origin) -> Tracked {
        self.next_id += 1;
        Tracked { id: self.next_id, root, coeff, origin }
    }

    fn input_word(&mut self, w: &FactorWord<MultiPoly>) -> Word {
        w.factors.iter().map(|f| self.fresh(f.root, f.coeff.clone(), Origin::Input)).collect()
    }

    /// `X_a X_b → X_b X_a X_{a+b}`: the correction, if any.
    fn correction(&mut self, a: &Tracked, b: &Tracked) -> Option<Tracked> {
        let ab = sum(a.root, b.root)?;
        self.commutations += 1;
        let eps = commutator_sign(a.root, b.root) as i64;
        let c = Ring::mul(&a.coeff, &b.coeff).scale_int(eps);
        Some(self.fresh(ab, c, Origin::Commutator { left: a.id, right: b.id }))
    }

    /// Pushes `x` through `u` to the right: `x·u = out·x`.
    fn pass_right(&mut self, x: &Tracked, u: Word) -> Result<Word, RearrangeError> {
        let dx = self.d(x.root)?;
        let mut out = Vec::with_capacity(u.len() + 2);
        for b in u {
            if self.d(b.root)? < dx {
                return Err(RearrangeError::Precondition { moving: x.root, blocker: b.root });
            }
            let corr = self.correction(x, &b);
            out.push(b);
            if let Some(c) = corr {
                self.d(c.root)?;
                out.push(c);
            }
        }
        Ok(out)
    }

    /// Pushes `x` through `u` to the left: `u·x = x·out`.
    fn pass_left(&mut self, u: Word, x: &Tracked) -> Result<Word, RearrangeError> {
        let dx = self.d(x.root)?;
        let mut rev = Vec::with_capacity(u.len() + 2);
        for b in u.into_iter().rev() {
            if self.d(b.root)? > dx {
                return Err(RearrangeError::Precondition { moving: x.root, blocker: b.root });
            }
            if let Some(c) = self.correction(&b, x) {
                self.d(c.root)?;
                rev.push(c);
            }
            rev.push(b);
        }
        rev.reverse();
        Ok(rev)
    }

    fn new_in_layer(&self, w: &Word, before: &BTreeSet<u64>, layer: usize) -> Vec<u64> {
        let mut ids: Vec<(u64, Root)> =
            w.iter().filter(|t| !before.contains(&t.id) && self.st.d_of(t.root) == Some(layer)).map(|t| (t.id, t.root)).collect();
        ids.sort_by(|a, b| self.st.cmp_prec(a.1, b.1).then(a.0.cmp(&b.0)));
        ids.into_iter().map(|(id, _)| id).collect()
    }

    /// Moves `x` to the right of `u`, then peels the new factors of x's
    /// layer out behind it, largest first. Returns `(u_out, emitted)` with
    /// `x·u = u_out·emitted·x`.
    fn move_right(&mut self, x: &Tracked, u: Word, stage: &str) -> Result<(Word, Word), RearrangeError> {
        let dx = self.d(x.root)?;
        let before: BTreeSet<u64> = u.iter().map(|t| t.id).collect();
        let mut cur = self.pass_right(x, u)?;
        let mut emitted: Word = Vec::new();
        loop {
            let fresh = self.new_in_layer(&cur, &before, dx);
            let Some(&id) = fresh.last() else { break };
            let pos = cur.iter().position(|t| t.id == id).expect("tracked id present");
            let y = cur.remove(pos);
            let tail = cur.split_off(pos);
            let tail = self.pass_right(&y, tail)?;
            cur.extend(tail);
            if self.new_in_layer(&cur, &before, dx).len() >= fresh.len() {
                self.anomalies.push(Anomaly { stage: stage.to_string(), root: y.root });
            }
            emitted.insert(0, y);
        }
        Ok((cur, emitted))
    }

    /// Mirror of [`Self::move_right`]: `u·x = x·emitted·u_out`.
    fn move_left(&mut self, u: Word, x: &Tracked, stage: &str) -> Result<(Word, Word), RearrangeError> {
        let dx = self.d(x.root)?;
        let before: BTreeSet<u64> = u.iter().map(|t| t.id).collect();
        let mut cur = self.pass_left(u, x)?;
        let mut emitted: Word = Vec::new();
        loop {
            let fresh = self.new_in_layer(&cur, &before, dx);
            let Some(&id) = fresh.first() else { break };
            let pos = cur.iter().position(|t| t.id == id).expect("tracked id present");
            let y = cur.remove(pos);
            let head: Word = cur.drain(..pos).collect();
            let head = self.pass_left(head, &y)?;
            let mut next = head;
            next.extend(cur);
            cur = next;
            if self.new_in_layer(&cur, &before, dx).len() >= fresh.len() {
                self.anomalies.push(Anomaly { stage: stage.to_string(), root: y.root });
            }
            emitted.push(y);
        }
        Ok((emitted, cur))
    }

    /// Bubble-sorts a word into ≼ order and merges equal roots. Corrections
    /// created on the way are kept and reported.
    fn merge(&mut self, w: Word, stage: &str) -> Result<Word, RearrangeError> {
        let mut w = w;
        let mut i = 0;
        while i + 1 < w.len() {
            let (a, b) = (w[i].root, w[i + 1].root);
            if a == b {
                let t = w.remove(i + 1);
                w[i].coeff = Ring::add(&w[i].coeff, &t.coeff);
                continue;
            }
            if self.st.cmp_prec(a, b).is_gt() {
                let left = w[i].clone();
                let right = w[i + 1].clone();
                let corr = self.correction(&left, &right);
                w[i] = right;
                w[i + 1] = left;
                if let Some(c) = corr {
                    self.d(c.root)?;
                    self.merge_corrections.push(Anomaly { stage: stage.to_string(), root: c.root });
                    w.insert(i + 2, c);
                }
                i = i.saturating_sub(1);
                continue;
            }
            i += 1;
        }
        w.retain(|t| !t.coeff.is_zero());
        Ok(w)
    }
}

fn product_matrix(st: &Strata, parts: &[&[Tracked]]) -> crate::exactring::Matrix<MultiPoly> {
    let mut all = Vec::new();
    for p in parts {
        all.extend(p.iter().map(|t| Factor::new(t.root, t.coeff.clone())));
    }
    matrix_of_word(&FactorWord::free(all), st.rep.l)
}

/// Runs the rearrangement for layer `k`.
pub fn run_pipeline(
    st: &Strata,
    k: usize,
    input: &PipelineInput,
    opts: &PipelineOptions,
) -> Result<PipelineResult, RearrangeError> {
    let top = st.big_d + 1;
    if k < 2 || k > top {
        return Err(RearrangeError::Layer { k, top });
    }
    let mut eng = Engine { st, next_id: 0, commutations: 0, anomalies: Vec::new(), merge_corrections: Vec::new() };
    let mut trace: Vec<(String, FactorWord<MultiPoly>)> = Vec::new();
    let record = |trace: &mut Vec<(String, FactorWord<MultiPoly>)>, name: String, w: &[Tracked]| {
        if opts.trace {
            trace.push((name, to_factor_word(w)));
        }
    };

    let mut v: Word = Vec::new();
    for j in (k..=top).rev() {
        if let Some(w) = input.v.get(&j) {
            let w = eng.input_word(w);
            v.extend(w);
        }
    }
    let mut nps: BTreeMap<usize, Word> = BTreeMap::new();
    for q in 2..=k {
        if let Some(w) = input.n_prime.get(&q) {
            nps.insert(q, eng.input_word(w));
        }
    }
    record(&mut trace, "v(1)".into(), &v);

    let original = if opts.check_conservation || opts.certify {
        let mut parts: Vec<&[Tracked]> = nps.values().rev().map(|w| w.as_slice()).collect();
        parts.push(&v);
        Some(product_matrix(st, &parts))
    } else {
        None
    };
    let conserve = |nps: &BTreeMap<usize, Word>, mid: &[Tracked], right: &[Tracked], step: String| {
        if let (true, Some(orig)) = (opts.check_conservation, &original) {
            let mut parts: Vec<&[Tracked]> = nps.values().rev().map(|w| w.as_slice()).collect();
            parts.push(mid);
            parts.push(right);
            if product_matrix(st, &parts) != *orig {
                return Err(RearrangeError::Conservation(step));
            }
        }
        Ok(())
    };

    // n(q-1) accumulated to the right of v
    let mut right: Word = Vec::new();
    for q in 2..=k {
        let np = nps.remove(&q).unwrap_or_default();
        let orig_ids: BTreeSet<u64> = v.iter().map(|t| t.id).collect();
        let stage = format!("n'_{q} v({})", q - 1);
        let mut block: Word = Vec::new();
        for x in np.into_iter().rev() {
            let (u, emitted) = eng.move_right(&x, std::mem::take(&mut v), &stage)?;
            v = u;
            let mut b = emitted;
            b.push(x);
            b.extend(block);
            block = b;
        }
        let block = eng.merge(block, &stage)?;
        record(&mut trace, format!("v({q},{q})"), &v);
        record(&mut trace, format!("n_{q}^({q})"), &block);
        let mut stage_blocks: Vec<Word> = vec![block];
        for f in q + 1..=k {
            let stage = format!("v({q},{f})");
            let ids = eng.new_in_layer(&v, &orig_ids, f);
            let mut blk: Word = Vec::new();
            for id in ids.into_iter().rev() {
                let pos = v.iter().position(|t| t.id == id).expect("tracked id present");
                let y = v.remove(pos);
                let tail = v.split_off(pos);
                let (tail, emitted) = eng.move_right(&y, tail, &stage)?;
                v.extend(tail);
                let mut b = emitted;
                b.push(y);
                b.extend(blk);
                blk = b;
            }
            let blk = eng.merge(blk, &stage)?;
            record(&mut trace, format!("v({q},{f})"), &v);
            record(&mut trace, format!("n_{f}^({q})"), &blk);
            stage_blocks.push(blk);
        }
        let mut new_right: Word = Vec::new();
        for b in stage_blocks.into_iter().rev() {
            new_right.extend(b);
        }
        new_right.extend(right);
        right = new_right;
        record(&mut trace, format!("v({q})"), &v);
        record(&mut trace, format!("n({q})"), &right);
        conserve(&nps, &v, &right, format!("after n'_{q}"))?;
    }

    // (★★): layer-k factors of n(k) to the left, smallest first.
    let mut n_prime_acc: Word = Vec::new();
    loop {
        let mut cands: Vec<(usize, Root)> =
            right.iter().enumerate().filter(|(_, t)| st.d_of(t.root) == Some(k)).map(|(i, t)| (i, t.root)).collect();
        cands.sort_by(|a, b| st.cmp_prec(a.1, b.1).then(a.0.cmp(&b.0)));
        let Some(&(pos, _)) = cands.first() else { break };
        let x = right.remove(pos);
        let tail = right.split_off(pos);
        let head = std::mem::take(&mut right);
        let (emitted, head) = eng.move_left(head, &x, "n(k)")?;
        n_prime_acc.push(x);
        n_prime_acc.extend(emitted);
        right = head;
        right.extend(tail);
    }
    let n_pp = right;
    for t in &n_pp {
        if st.d_of(t.root).is_some_and(|d| d >= k) {
            eng.anomalies.push(Anomaly { stage: "n''".into(), root: t.root });
        }
    }
    record(&mut trace, "n'".into(), &n_prime_acc);
    record(&mut trace, "n''".into(), &n_pp);

    // v(k) = v'' v_k
    let mut vk: Word = Vec::new();
    loop {
        let Some(pos) = v.iter().rposition(|t| st.d_of(t.root) == Some(k)) else { break };
        let y = v.remove(pos);
        let tail = v.split_off(pos);
        let (tail, emitted) = eng.move_right(&y, tail, "v(k)")?;
        for e in &emitted {
            eng.anomalies.push(Anomaly { stage: "v(k)".into(), root: e.root });
        }
        v.extend(tail);
        let mut b = emitted;
        b.push(y);
        b.extend(vk);
        vk = b;
    }
    record(&mut trace, "v''".into(), &v);
    record(&mut trace, "v_k".into(), &vk);
    conserve(&BTreeMap::new(), &[v.as_slice(), vk.as_slice(), n_prime_acc.as_slice()].concat(), &n_pp, "after (★★)".into())?;

    let mut merged = vk;
    merged.extend(n_prime_acc);
    let n_bar = eng.merge(merged, "n̄_k")?;
    record(&mut trace, format!("n̄_{k}"), &n_bar);
    let n_bar_word = FactorWord::from_pairs(OrderTag::Prec, n_bar.iter().map(|t| (t.root, t.coeff.clone())));
    let c_bar: BTreeMap<Root, MultiPoly> = st.layer(k).iter().map(|&r| (r, n_bar_word.coeff_of(r))).collect();

    if opts.certify {
        let orig = original.as_ref().expect("built when certifying");
        let fw = factorize_unipotent(orig, &st.prec_order())?;
        for &r in st.layer(k) {
            let m = fw.coeff_of(r);
            if m != c_bar[&r] {
                return Err(RearrangeError::Certificate { root: r, engine: c_bar[&r].to_string(), matrix: m.to_string() });
            }
        }
    }

    Ok(PipelineResult {
        k,
        n_bar: n_bar_word,
        c_bar,
        trace,
        anomalies: eng.anomalies,
        merge_corrections: eng.merge_corrections,
        commutations: eng.commutations,
    })
}

impl fmt::Display for PipelineResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, w) in &self.trace {
            writeln!(f, "{name} = {w}")?;
        }
        Ok(())
    }
}

/// `x·u = u_out·emitted·x` for a single factor, on plain words.
pub fn move_right(
    st: &Strata,
    x: &Factor<MultiPoly>,
    u: &FactorWord<MultiPoly>,
) -> Result<(FactorWord<MultiPoly>, FactorWord<MultiPoly>), RearrangeError> {
    let mut eng = Engine { st, next_id: 0, commutations: 0, anomalies: Vec::new(), merge_corrections: Vec::new() };
    let xt = eng.fresh(x.root, x.coeff.clone(), Origin::Input);
    let uw = eng.input_word(u);
    let (out, emitted) = eng.move_right(&xt, uw, "move_right")?;
    Ok((to_factor_word(&out), to_factor_word(&emitted)))
}

/// `u·x = x·emitted·u_out` for a single factor, on plain words.
pub fn move_left(
    st: &Strata,
    u: &FactorWord<MultiPoly>,
    x: &Factor<MultiPoly>,
) -> Result<(FactorWord<MultiPoly>, FactorWord<MultiPoly>), RearrangeError> {
    let mut eng = Engine { st, next_id: 0, commutations: 0, anomalies: Vec::new(), merge_corrections: Vec::new() };
    let xt = eng.fresh(x.root, x.coeff.clone(), Origin::Input);
    let uw = eng.input_word(u);
    let (emitted, out) = eng.move_left(uw, &xt, "move_left")?;
    Ok((to_factor_word(&emitted), to_factor_word(&out)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::stratify;
    use crate::weyl::representative;

    fn opts() -> PipelineOptions {
        PipelineOptions { check_conservation: true, certify: true, trace: true }
    }

    #[test]
    fn pipeline_certifies_small_ranks() {
        for l in 2..=4usize {
            for lp in 1..=l {
                let rep = representative(l, lp).unwrap();
                let st = stratify(&rep);
                for k in 2..=st.big_d + 1 {
                    let res = run_pipeline(&st, k, &generic_input(&st, k), &opts())
                        .unwrap_or_else(|e| panic!("({l},{lp}) k={k}: {e}"));
                    assert!(res.n_bar.is_prec_ordered(&st));
                    assert!(res.anomalies.is_empty(), "({l},{lp}) k={k}: {:?}", res.anomalies);
                }
            }
        }
    }

    #[test]
    fn moves_conserve_products() {
        let rep = representative(3, 3).unwrap();
        let st = stratify(&rep);
        let layer2 = st.layer(2).to_vec();
        let top: Vec<Root> = (2..=st.big_d + 1).flat_map(|j| st.layer(j).to_vec()).collect();
        for &x in &layer2 {
            let u = FactorWord::from_pairs(OrderTag::Prec, st.sorted_prec(top.iter().copied()).into_iter().map(|r| (r, MultiPoly::c(r))));
            let xf = Factor::new(x, MultiPoly::cp(x));
            let (out, emitted) = move_right(&st, &xf, &u).unwrap();
            let lhs = matrix_of_word(&FactorWord::free(vec![xf.clone()]).concat(&u), 3);
            let rhs = matrix_of_word(&out.concat(&emitted).concat(&FactorWord::free(vec![xf.clone()])), 3);
            assert_eq!(lhs, rhs);
        }
        let empty = FactorWord::<MultiPoly>::empty(OrderTag::Free);
        let x = Factor::new(layer2[0], MultiPoly::cp(layer2[0]));
        let (emitted, out) = move_left(&st, &empty, &x).unwrap();
        assert!(emitted.is_empty() && out.is_empty());
    }
}
