//! The layer function `d`, the C/R/O classification, the orders ≼ and ≼_Z,
//! the pair sets used by the rearrangement, and the closed-form d-tables.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::rootsys::{enumerate_positive, Root};
use crate::weyl::{act_on_root, ClassCase, ClassRep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("{0} is not a positive root outside the fixed block")]
    NotInK(Root),
    #[error("no closed-form row covers {0}")]
    NoRow(Root),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Crc {
    C,
    R,
    O1,
    O2,
    O3,
}

impl Crc {
    pub fn is_o(self) -> bool {
        matches!(self, Crc::O1 | Crc::O2 | Crc::O3)
    }
}

impl fmt::Display for Crc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Crc::C => "C",
            Crc::R => "R",
            Crc::O1 => "O1",
            Crc::O2 => "O2",
            Crc::O3 => "O3",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Strata {
    pub rep: ClassRep,
    /// Positive roots outside the block, lexicographic.
    pub k_plus: Vec<Root>,
    pub d: BTreeMap<Root, usize>,
    /// `D`, so layers run `1..=D+1`.
    pub big_d: usize,
    /// `layers[k-1]` is layer k, lexicographic.
    pub layers: Vec<Vec<Root>>,
    pub crc: BTreeMap<Root, Crc>,
    /// Column index → roots of the block with that column.
    pub z_cols: BTreeMap<u16, Vec<Root>>,
}

pub fn stratify(rep: &ClassRep) -> Strata {
    let in_k = |r: Root| !(rep.in_block(r.row()) && rep.in_block(r.col()));
    let k_plus: Vec<Root> = enumerate_positive(rep.l).expect("l >= 1").into_iter().filter(|&r| in_k(r)).collect();
    let sinv = rep.s_inv();
    let mut d = BTreeMap::new();
    for &r in &k_plus {
        let mut x = r;
        let mut k = 0;
        loop {
            x = act_on_root(&sinv, x);
            k += 1;
            if !x.is_positive() {
                break;
            }
            debug_assert!(in_k(x));
        }
        d.insert(r, k);
    }
    let big_d = d.values().copied().max().unwrap_or(1) - 1;
    let layers = (1..=big_d + 1).map(|k| k_plus.iter().copied().filter(|r| d[r] == k).collect()).collect();
    let (m, p) = (rep.m as u16, rep.p as u16);
    let crc = k_plus
        .iter()
        .map(|&r| {
            let c = if rep.in_block(r.row()) {
                Crc::C
            } else if rep.in_block(r.col()) {
                Crc::R
            } else if r.row() >= m + p + 2 {
                Crc::O1
            } else if r.col() <= m + 1 {
                Crc::O2
            } else {
                Crc::O3
            };
            (r, c)
        })
        .collect();
    let mut z_cols = BTreeMap::new();
    for c in rep.block() {
        let col: Vec<Root> = rep.block().filter(|&r| r != c).map(|r| Root::from_position(r, c).unwrap()).collect();
        z_cols.insert(c, col);
    }
    Strata { rep: rep.clone(), k_plus, d, big_d, layers, crc, z_cols }
}

impl Strata {
    pub fn d_of(&self, r: Root) -> Option<usize> {
        self.d.get(&r).copied()
    }

    pub fn in_k(&self, r: Root) -> bool {
        self.d.contains_key(&r)
    }

    pub fn layer(&self, k: usize) -> &[Root] {
        if k == 0 || k > self.layers.len() {
            &[]
        } else {
            &self.layers[k - 1]
        }
    }

    pub fn crc_of(&self, r: Root) -> Option<Crc> {
        self.crc.get(&r).copied()
    }

    pub fn delta_z(&self) -> Vec<Root> {
        self.z_cols.values().flatten().copied().collect()
    }

    /// Sort key realizing ≼: larger d first, then row ascending, then col descending.
    pub fn prec_key(&self, r: Root) -> (i64, u16, i64) {
        (-(self.d[&r] as i64), r.row(), -(r.col() as i64))
    }

    pub fn cmp_prec(&self, a: Root, b: Root) -> Ordering {
        self.prec_key(a).cmp(&self.prec_key(b))
    }

    /// ≼_Z: column ascending, then row ascending.
    pub fn cmp_z(a: Root, b: Root) -> Ordering {
        (a.col(), a.row()).cmp(&(b.col(), b.row()))
    }

    pub fn sorted_prec(&self, roots: impl IntoIterator<Item = Root>) -> Vec<Root> {
        let mut v: Vec<Root> = roots.into_iter().collect();
        v.sort_by_key(|&r| self.prec_key(r));
        v
    }

    /// All of (Δ̄_K)_+ in ≼ order.
    pub fn prec_order(&self) -> Vec<Root> {
        self.sorted_prec(self.k_plus.iter().copied())
    }

    pub fn z_order(&self) -> Vec<Root> {
        let mut v = self.delta_z();
        v.sort_by(|&a, &b| Self::cmp_z(a, b));
        v
    }

    fn layer_between(&self, r: Root, lo: usize, hi: usize) -> bool {
        self.d_of(r).is_some_and(|d| lo <= d && d <= hi)
    }

    /// Ordered pairs `(η, η')` in (Δ̄_K)_+ with `α = η + η'`.
    pub fn p_all(&self, alpha: Root) -> Vec<(Root, Root)> {
        let (a, b) = alpha.row_col();
        let mut out = Vec::new();
        if a >= b {
            return out;
        }
        for k in a + 1..b {
            let x = Root::from_position(a, k).unwrap();
            let y = Root::from_position(k, b).unwrap();
            if self.in_k(x) && self.in_k(y) {
                out.push((x, y));
                out.push((y, x));
            }
        }
        out.sort();
        out
    }

    /// `P_α`: first factor in layers `2..d(α)-1`, second in layer `d(α)`.
    pub fn p_set(&self, alpha: Root) -> Vec<(Root, Root)> {
        let Some(k) = self.d_of(alpha) else { return Vec::new() };
        self.p_all(alpha)
            .into_iter()
            .filter(|&(x, y)| k >= 1 && self.layer_between(x, 2, k.saturating_sub(1)) && self.d_of(y) == Some(k))
            .collect()
    }

    /// `P'_α`: both factors in layer `d(α)`.
    pub fn p_prime_set(&self, alpha: Root) -> Vec<(Root, Root)> {
        let Some(k) = self.d_of(alpha) else { return Vec::new() };
        self.p_all(alpha).into_iter().filter(|&(x, y)| self.d_of(x) == Some(k) && self.d_of(y) == Some(k)).collect()
    }

    /// `Row(α)`: same row, smaller column (all roots).
    pub fn row_set(&self, alpha: Root) -> Vec<Root> {
        (1..alpha.col()).filter(|&c| c != alpha.row()).map(|c| Root::from_position(alpha.row(), c).unwrap()).collect()
    }

    /// `Col(α)`: same column, larger row (all roots).
    pub fn col_set(&self, alpha: Root) -> Vec<Root> {
        let n = self.rep.n() as u16;
        (alpha.row() + 1..=n).filter(|&r| r != alpha.col()).map(|r| Root::from_position(r, alpha.col()).unwrap()).collect()
    }

    /// `C^{q,f}_η`: `(η_1, η_2) ∈ Col(η) × Row(η)`, η_1 in layers `q..f`,
    /// η_2 in layers `d(η)..D+1`.
    pub fn c_set(&self, eta: Root, q: usize, f: usize) -> Vec<(Root, Root)> {
        self.split_set(eta, q, f, true)
    }

    /// `R^{q,f}_η`: `(η_1, η_2) ∈ Row(η) × Col(η)`, same layer bounds.
    pub fn r_set(&self, eta: Root, q: usize, f: usize) -> Vec<(Root, Root)> {
        self.split_set(eta, q, f, false)
    }

    pub fn pqf_set(&self, eta: Root, q: usize, f: usize) -> Vec<(Root, Root)> {
        let mut v = self.c_set(eta, q, f);
        v.extend(self.r_set(eta, q, f));
        v
    }

    fn split_set(&self, eta: Root, q: usize, f: usize, col_first: bool) -> Vec<(Root, Root)> {
        let Some(de) = self.d_of(eta) else { return Vec::new() };
        let top = self.big_d + 1;
        let (a, b) = eta.row_col();
        let mut out = Vec::new();
        for k in a + 1..b {
            let row_part = Root::from_position(a, k).unwrap();
            let col_part = Root::from_position(k, b).unwrap();
            let (x, y) = if col_first { (col_part, row_part) } else { (row_part, col_part) };
            if self.layer_between(x, q, f) && self.layer_between(y, de, top) {
                out.push((x, y));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct PairSets {
    pub p: Vec<(Root, Root)>,
    pub p_prime: Vec<(Root, Root)>,
    pub p_all: Vec<(Root, Root)>,
    pub row: Vec<Root>,
    pub col: Vec<Root>,
    pub c_qf: Vec<(Root, Root)>,
    pub r_qf: Vec<(Root, Root)>,
    pub p_qf: Vec<(Root, Root)>,
}

pub fn pair_sets(st: &Strata, alpha: Root, q: usize, f: usize) -> PairSets {
    PairSets {
        p: st.p_set(alpha),
        p_prime: st.p_prime_set(alpha),
        p_all: st.p_all(alpha),
        row: st.row_set(alpha),
        col: st.col_set(alpha),
        c_qf: st.c_set(alpha, q, f),
        r_qf: st.r_set(alpha, q, f),
        p_qf: st.pqf_set(alpha, q, f),
    }
}

/// `𝒟(a,b) = ⌊(b-a)/2⌋` on doubled arguments, so half-integers are exact.
pub fn script_d_doubled(a2: i64, b2: i64) -> i64 {
    (b2 - a2).div_euclid(4)
}

pub fn script_d(a: i64, b: i64) -> i64 {
    script_d_doubled(2 * a, 2 * b)
}

type DoubledArgs = fn(&TableCtx, i64, i64) -> (i64, i64);

#[derive(Clone, Copy)]
struct TableCtx {
    l: i64,
    m: i64,
    p: i64,
    a: i64,
    bc: i64,
    cc: i64,
    cb: i64,
}

/// One row of the closed-form d-tables: a start index `i` and the end
/// indices `j` it covers.
pub struct AppendixRow {
    pub name: &'static str,
    pub i: i64,
    pub js: Vec<i64>,
    args: DoubledArgs,
}

fn asc(a: i64, b: i64) -> Vec<i64> {
    (a..=b).step_by(2).collect()
}

fn desc(a: i64, b: i64) -> Vec<i64> {
    let mut v = Vec::new();
    let mut x = a;
    while x >= b {
        v.push(x);
        x -= 2;
    }
    v
}

fn tables(rep: &ClassRep) -> (TableCtx, Vec<AppendixRow>) {
    use ClassCase::*;
    let c = rep.case_id;
    let (l, m, p) = (rep.l as i64, rep.m as i64, rep.p as i64);
    let odd_case = matches!(c, I | III);
    let cx = TableCtx {
        l,
        m,
        p,
        a: if odd_case { 3 } else { 4 },
        bc: if odd_case { 5 } else { 6 },
        cc: if odd_case { 5 } else { 7 },
        cb: if odd_case { 3 } else { 2 },
    };
    let mpm = m + p + m;
    let mut rows = Vec::new();
    let mut push = |name, i, js, args: DoubledArgs| rows.push(AppendixRow { name, i, js, args });

    let (i_neg, i_pos) = if matches!(c, I | II) { (asc(1, m + 1), asc(2, m)) } else { (asc(2, m + 1), asc(1, m)) };
    let hi1 = match c {
        I => (mpm + 1, mpm),
        II => (mpm + 1, mpm + 2),
        III => (mpm, mpm + 1),
        IV => (mpm + 2, mpm + 1),
    };
    for &i in &i_neg {
        push("O1a", i, asc(i, m - 1), |t, i, j| (-i, 4 * t.m - j + 2 * t.a));
        push("O1b", i, asc(m + p + 1, hi1.0), |t, i, j| (-i, 4 * t.m - (j - t.p) + 2 * t.a));
        push("O1c", i, desc(hi1.1, m + p + 2), |t, i, j| (-i, 4 * t.m - 2 * t.l + j + 2 * t.bc));
        push("O1d", i, desc(m, i + 1), |t, i, j| (-i, 4 * t.m - 2 * t.l + (j + t.p) + 2 * t.bc));
    }
    let top2 = match c {
        I | II => mpm + 1,
        III => mpm,
        IV => mpm + 2,
    };
    let j2 = match c {
        I => (mpm + 1, mpm),
        II => (mpm + 1, mpm + 2),
        III => (mpm + 1, mpm),
        IV => (mpm + 2, mpm + 1),
    };
    for i in asc(m + p + 3, top2) {
        push("O2a", i, asc(i, j2.0), |t, i, j| (-i, 4 * t.m - j + 2 * t.a));
        push("O2b", i, desc(j2.1, i + 1), |t, i, j| (-i, 4 * t.m - 2 * t.l + (j + t.cc)));
    }
    let hi3 = match c {
        I => (mpm, mpm + 1),
        II => (mpm + 2, mpm + 1),
        III => (mpm + 1, mpm),
        IV => (mpm + 1, mpm + 2),
    };
    for &i in &i_pos {
        push("O3a", i, asc(i, m), |_, i, j| (i, j + 2));
        push("O3b", i, asc(m + p + 2, hi3.0), |t, i, j| (i, (j - t.p) + 2));
        push("O3c", i, desc(hi3.1, m + p + 1), |t, i, j| (i, 2 * t.l - j));
        push("O3d", i, desc(m - 1, i + 1), |t, i, j| (i, 2 * t.l - (j + t.p)));
    }
    let top4 = match c {
        I => mpm,
        II => mpm + 2,
        III | IV => mpm + 1,
    };
    for i in asc(m + p + 2, top4) {
        push("O4a", i, asc(i, hi3.0), |_, i, j| (i, j + 2));
        push("O4b", i, desc(hi3.1, i + 1), |t, i, j| (i, 2 * t.l - (j - 5)));
    }
    for i in m + 2..=m + p + 1 {
        push("Ca", i, asc(m + p + 2, hi3.0), |t, _, j| (2 * (t.m + t.p - 1), 2 * j));
        push("Cb", i, desc(hi3.1, m + p + 1), |t, _, j| (2 * j, 2 * (t.m + t.l + t.cb)));
    }
    let (r_even, r_odd) = if matches!(c, I | II) { (desc(m, 2), asc(1, m + 1)) } else { (desc(m, 1), asc(2, m + 1)) };
    let rj: Vec<i64> = (m + 1..=m + p).collect();
    for i in r_even {
        push("Ra", i, rj.clone(), |t, i, _| (2 * i, 2 * (t.m + 3)));
    }
    for i in r_odd {
        push("Rb", i, rj.clone(), |t, i, _| (-2 * i, 2 * (t.m + 2)));
    }
    (cx, rows)
}

/// Every table row covering `r = α_i + ⋯ + α_j`, with the value it gives.
pub fn appendix_hits(rep: &ClassRep, r: Root) -> Vec<(&'static str, i64)> {
    let (cx, rows) = tables(rep);
    let (i, j) = (r.i() as i64, r.j() as i64);
    rows.iter()
        .filter(|row| row.i == i && row.js.contains(&j))
        .map(|row| {
            let (a2, b2) = (row.args)(&cx, i, j);
            (row.name, script_d_doubled(a2, b2))
        })
        .collect()
}

/// `d(r)` read off the closed-form tables (first covering row).
pub fn appendix_d(rep: &ClassRep, r: Root) -> Result<i64, StrataError> {
    if !r.is_positive() || (rep.in_block(r.row()) && rep.in_block(r.col())) || !r.fits_rank(rep.l) {
        return Err(StrataError::NotInK(r));
    }
    appendix_hits(rep, r).first().map(|h| h.1).ok_or(StrataError::NoRow(r))
}

/// Roots where the tables disagree with `stratify`, as `(root, table value or None, d)`.
pub fn appendix_discrepancies(st: &Strata) -> Vec<(Root, Option<i64>, usize)> {
    st.k_plus
        .iter()
        .filter_map(|&r| {
            let a = appendix_d(&st.rep, r).ok();
            let d = st.d[&r];
            (a != Some(d as i64)).then_some((r, a, d))
        })
        .collect()
}

pub fn layers_union(st: &Strata, lo: usize, hi: usize) -> BTreeSet<Root> {
    (lo..=hi).flat_map(|k| st.layer(k).iter().copied()).collect()
}
