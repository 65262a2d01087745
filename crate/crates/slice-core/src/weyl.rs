//! The Weyl group `S_{l+1}`, single-cycle class representatives and the
//! data attached to them (Δ_s, signs, the matrix of s, special orbits).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::exactring::{Matrix, Ring, Q};
use crate::rootsys::{enumerate_positive, Root};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("l' = {lprime} outside 1..={l}")]
    BadLprime { l: usize, lprime: usize },
    #[error("not a permutation: {0:?}")]
    NotPermutation(Vec<u16>),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("matrix representative has determinant {0}")]
    Determinant(String),
}

/// A permutation of `1..=n` in one-line form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylPerm {
    image: Vec<u16>,
}

impl WeylPerm {
    pub fn identity(n: usize) -> Self {
        WeylPerm { image: (1..=n as u16).collect() }
    }

    pub fn from_one_line(image: Vec<u16>) -> Result<Self, WeylError> {
        let n = image.len();
        let mut seen = vec![false; n + 1];
        for &x in &image {
            if x == 0 || x as usize > n || seen[x as usize] {
                return Err(WeylError::NotPermutation(image));
            }
            seen[x as usize] = true;
        }
        Ok(WeylPerm { image })
    }

    pub fn transposition(n: usize, a: u16, b: u16) -> Self {
        let mut p = Self::identity(n);
        p.image.swap(a as usize - 1, b as usize - 1);
        p
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn one_line(&self) -> &[u16] {
        &self.image
    }

    pub fn apply(&self, k: u16) -> u16 {
        self.image[k as usize - 1]
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        WeylPerm { image: other.image.iter().map(|&x| self.apply(x)).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (k, &x) in self.image.iter().enumerate() {
            inv[x as usize - 1] = k as u16 + 1;
        }
        WeylPerm { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(k, &x)| x as usize == k + 1)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.compose(&p);
            k += 1;
        }
        k
    }

    pub fn fixed_points(&self) -> Vec<u16> {
        (1..=self.n() as u16).filter(|&k| self.apply(k) == k).collect()
    }

    pub fn moved_points(&self) -> Vec<u16> {
        (1..=self.n() as u16).filter(|&k| self.apply(k) != k).collect()
    }

    /// The cycle through `k`, starting at `k`.
    pub fn cycle_from(&self, k: u16) -> Vec<u16> {
        let mut c = vec![k];
        let mut x = self.apply(k);
        while x != k {
            c.push(x);
            x = self.apply(x);
        }
        c
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut p = Self::identity(self.n());
        for _ in 0..k.unsigned_abs() {
            p = base.compose(&p);
        }
        p
    }
}

impl fmt::Debug for WeylPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.image)
    }
}

pub fn act_on_root(w: &WeylPerm, r: Root) -> Root {
    let (a, b) = r.row_col();
    Root::from_position(w.apply(a), w.apply(b)).expect("permutation keeps positions off-diagonal")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassCase {
    I,
    II,
    III,
    IV,
}

impl fmt::Display for ClassCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassCase::I => "i",
            ClassCase::II => "ii",
            ClassCase::III => "iii",
            ClassCase::IV => "iv",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ClassRep {
    pub l: usize,
    pub lprime: usize,
    pub m: usize,
    pub p: usize,
    pub case_id: ClassCase,
    pub gamma1: Vec<Root>,
    pub gamma2: Vec<Root>,
    pub s: WeylPerm,
    /// `γ_1, …, γ_{l'}`; s is the product of their reflections in this order.
    pub word: Vec<Root>,
}

fn step2(a: i64, b: i64) -> impl Iterator<Item = i64> {
    (a..=b).step_by(2)
}

fn simples(xs: impl Iterator<Item = i64>) -> Vec<Root> {
    xs.map(|x| Root::simple(x as u16)).collect()
}

/// `α_a + ⋯ + α_b` with the ends pulled into `1..=l`; `None` when empty.
pub fn clamped_interval(l: usize, a: i64, b: i64) -> Option<Root> {
    let a = a.max(1);
    let b = b.min(l as i64);
    (a <= b).then(|| Root::positive(a as u16, b as u16).expect("nonempty interval"))
}

fn reflection(n: usize, g: Root) -> WeylPerm {
    WeylPerm::transposition(n, g.row(), g.col())
}

fn product_of_reflections(n: usize, roots: &[Root]) -> WeylPerm {
    roots.iter().fold(WeylPerm::identity(n), |acc, &g| acc.compose(&reflection(n, g)))
}

pub fn representative(l: usize, lprime: usize) -> Result<ClassRep, WeylError> {
    if lprime < 1 || lprime > l {
        return Err(WeylError::BadLprime { l, lprime });
    }
    let m = (lprime - 1) / 2;
    let p = l - lprime;
    let (mi, pi) = (m as i64, p as i64);
    let gamma = Root::positive(m as u16 + 1, (m + p + 1) as u16).expect("γ is a root");
    let case_id = match (m % 2 == 0, lprime % 2 == 1) {
        (true, true) => ClassCase::I,
        (true, false) => ClassCase::II,
        (false, true) => ClassCase::III,
        (false, false) => ClassCase::IV,
    };
    let mpm = mi + pi + mi;
    let (g1, lead2, tail2) = match case_id {
        ClassCase::I => (
            [simples(step2(2, mi)), simples(step2(mi + pi + 2, mpm))].concat(),
            simples(step2(1, mi - 1)),
            simples(step2(mi + pi + 3, mpm + 1)),
        ),
        ClassCase::II => (
            [simples(step2(2, mi)), simples(step2(mi + pi + 2, mpm + 2))].concat(),
            simples(step2(1, mi - 1)),
            simples(step2(mi + pi + 3, mpm + 1)),
        ),
        ClassCase::III => (
            [simples(step2(1, mi)), simples(step2(mi + pi + 2, mpm + 1))].concat(),
            simples(step2(2, mi - 1)),
            simples(step2(mi + pi + 3, mpm)),
        ),
        ClassCase::IV => (
            [simples(step2(1, mi)), simples(step2(mi + pi + 2, mpm + 1))].concat(),
            simples(step2(2, mi - 1)),
            simples(step2(mi + pi + 3, mpm + 2)),
        ),
    };
    let mut g2 = lead2;
    g2.push(gamma);
    g2.extend(tail2);
    let word: Vec<Root> = g1.iter().chain(&g2).copied().collect();
    if word.len() != lprime || word.iter().any(|r| !r.fits_rank(l)) {
        return Err(WeylError::Inconsistent(format!("reflection word {word:?} for ({l},{lprime})")));
    }
    let s = product_of_reflections(l + 1, &word);
    Ok(ClassRep { l, lprime, m, p, case_id, gamma1: g1, gamma2: g2, s, word })
}

impl ClassRep {
    pub fn n(&self) -> usize {
        self.l + 1
    }

    pub fn s_inv(&self) -> WeylPerm {
        self.s.inverse()
    }

    /// Indices `m+2..=m+p+1` fixed by s.
    pub fn block(&self) -> std::ops::RangeInclusive<u16> {
        (self.m + 2) as u16..=(self.m + self.p + 1) as u16
    }

    pub fn in_block(&self, k: u16) -> bool {
        self.block().contains(&k)
    }

    /// `γ = α_{m+1} + ⋯ + α_{m+p+1}`.
    pub fn gamma(&self) -> Root {
        Root::positive(self.m as u16 + 1, (self.m + self.p + 1) as u16).unwrap()
    }

    pub fn s1(&self) -> WeylPerm {
        product_of_reflections(self.n(), &self.gamma1)
    }

    pub fn s2(&self) -> WeylPerm {
        product_of_reflections(self.n(), &self.gamma2)
    }
}

fn inversion_set(w: &WeylPerm, l: usize) -> BTreeSet<Root> {
    enumerate_positive(l)
        .expect("l >= 1")
        .into_iter()
        .filter(|&r| !act_on_root(w, r).is_positive())
        .collect()
}

#[derive(Clone, Debug)]
pub struct DeltaSets {
    pub delta_s: BTreeSet<Root>,
    pub delta_s_inv: BTreeSet<Root>,
    pub closed_form_s_inv: BTreeSet<Root>,
}

/// The case list for Δ_{s⁻¹}, with out-of-range interval ends clamped.
pub fn closed_form_s_inv(rep: &ClassRep) -> BTreeSet<Root> {
    let (l, m, p) = (rep.l, rep.m as i64, rep.p as i64);
    let mut out = BTreeSet::new();
    let mut add = |a: i64, b: i64| {
        if let Some(r) = clamped_interval(l, a, b) {
            out.insert(r);
        }
    };
    let first = if matches!(rep.case_id, ClassCase::I | ClassCase::II) { 0 } else { 1 };
    for a in step2(first, m - 2) {
        add(a, a + 2);
    }
    for k in 1..=p {
        add(m, m + k);
    }
    add(m, m + p + 2);
    for k in m + 2..=m + p + 2 {
        add(k, m + p + 2);
    }
    let top = match rep.case_id {
        ClassCase::I | ClassCase::II => m + p + m,
        ClassCase::III => m + p + m - 1,
        ClassCase::IV => m + p + m + 1,
    };
    for a in step2(m + p + 2, top) {
        add(a, a + 2);
    }
    for g in &rep.gamma1 {
        add(g.i() as i64, g.j() as i64);
    }
    out
}

pub fn delta_sets(rep: &ClassRep) -> Result<DeltaSets, WeylError> {
    let delta_s = inversion_set(&rep.s, rep.l);
    let delta_s_inv = inversion_set(&rep.s_inv(), rep.l);
    let closed = closed_form_s_inv(rep);
    if closed != delta_s_inv {
        return Err(WeylError::Inconsistent(format!(
            "closed Δ_(s^-1) list differs for ({},{}): only closed {:?}, only direct {:?}",
            rep.l,
            rep.lprime,
            closed.difference(&delta_s_inv).collect::<Vec<_>>(),
            delta_s_inv.difference(&closed).collect::<Vec<_>>()
        )));
    }
    Ok(DeltaSets { delta_s, delta_s_inv, closed_form_s_inv: closed })
}

/// `s_2 Δ_{s_1} ∪ Δ_{s_2}`.
pub fn delta_s_from_factors(rep: &ClassRep) -> BTreeSet<Root> {
    let s2 = rep.s2();
    let mut out: BTreeSet<Root> =
        inversion_set(&rep.s1(), rep.l).into_iter().map(|r| act_on_root(&s2, r)).collect();
    out.extend(inversion_set(&s2, rep.l));
    out
}

/// `exp(E_γ) exp(-E_{-γ}) exp(E_γ)`: +1 at (row γ, col γ), -1 at (col γ, row γ).
pub fn reflection_matrix(g: Root, n: usize) -> Matrix<Q> {
    let (a, b) = g.row_col();
    let mut m = Matrix::identity(n);
    let (a, b) = (a as usize - 1, b as usize - 1);
    m.set(a, a, Q::zero());
    m.set(b, b, Q::zero());
    m.set(a, b, Q::one());
    m.set(b, a, Q::from_int(-1));
    m
}

/// Sign in `M_γ E_η M_γ⁻¹ = θ E_{s_γ η}`, read from the matrix representative.
pub fn theta(g: Root, eta: Root) -> i8 {
    let minus = g.row();
    let sgn = |k: u16| if k == minus { -1 } else { 1 };
    sgn(eta.row()) * sgn(eta.col())
}

/// The sign table for a simple root `α` acting on `β`.
pub fn theta_table(alpha: Root, beta: Root) -> i8 {
    if alpha == beta {
        return -1;
    }
    if alpha.row() == beta.col() || alpha.row() == beta.row() {
        -1
    } else {
        1
    }
}

#[derive(Clone, Debug)]
pub struct SignData {
    /// `θ_{α,β}` for simple `α` and every root `β`.
    pub theta: BTreeMap<(Root, Root), i8>,
    pub t: BTreeMap<Root, i8>,
}

pub fn sign_data(rep: &ClassRep) -> SignData {
    let n = rep.n();
    let positives = enumerate_positive(rep.l).expect("l >= 1");
    let all: Vec<Root> = positives.iter().copied().chain(positives.iter().map(|r| r.negate())).collect();
    let mut table = BTreeMap::new();
    for i in 1..=rep.l as u16 {
        let a = Root::simple(i);
        for &b in &all {
            table.insert((a, b), theta_table(a, b));
        }
    }
    let mut t = BTreeMap::new();
    for &eta in &all {
        let mut sign = 1i8;
        let mut cur = eta;
        for &g in rep.word.iter().rev() {
            sign *= theta(g, cur);
            cur = act_on_root(&reflection(n, g), cur);
        }
        t.insert(eta, sign);
    }
    SignData { theta: table, t }
}

pub fn s_matrix(rep: &ClassRep) -> Result<Matrix<Q>, WeylError> {
    let n = rep.n();
    let m = rep
        .word
        .iter()
        .fold(Matrix::identity(n), |acc: Matrix<Q>, &g| acc.mul(&reflection_matrix(g, n)));
    let det = m.determinant();
    if !det.is_one() {
        return Err(WeylError::Determinant(crate::exactring::q_to_string(&det)));
    }
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct SpecialOrbits {
    pub gamma_prime: Root,
    pub orbit_gamma_prime: BTreeSet<Root>,
    pub closed_orbit_gamma_prime: BTreeSet<Root>,
    pub o1_seed: Root,
    pub o2_seed: Root,
    pub o1: BTreeSet<Root>,
    pub o2: BTreeSet<Root>,
}

/// `⟨s⟩`-orbit of `r` restricted to positive roots outside the block.
pub fn orbit_in_k(rep: &ClassRep, r: Root) -> BTreeSet<Root> {
    let mut out = BTreeSet::new();
    let mut x = r;
    loop {
        if x.is_positive() && !(rep.in_block(x.row()) && rep.in_block(x.col())) {
            out.insert(x);
        }
        x = act_on_root(&rep.s, x);
        if x == r {
            break;
        }
    }
    out
}

pub fn closed_orbit_gamma_prime(rep: &ClassRep) -> BTreeSet<Root> {
    let (l, m, p) = (rep.l, rep.m as i64, rep.p as i64);
    let mut out = BTreeSet::new();
    let mut add = |a: i64, b: i64| {
        if let Some(r) = clamped_interval(l, a, b) {
            out.insert(r);
        }
    };
    match rep.case_id {
        ClassCase::I | ClassCase::II => {
            for t in 0..(m / 2).max(1) {
                add(m - 2 * t, m + p + 2 + 2 * t);
            }
            let end = if rep.case_id == ClassCase::I { m + p + m + 1 } else { m + p + m + 3 };
            for t in 0..=m / 2 {
                add(1 + 2 * t, end - 2 * t);
            }
        }
        ClassCase::III | ClassCase::IV => {
            for t in 0..=(m - 1) / 2 {
                add(m - 2 * t, m + p + 2 + 2 * t);
            }
            let end = if rep.case_id == ClassCase::III { m + p + m } else { m + p + m + 2 };
            for t in 0..=(m - 1) / 2 {
                add(2 + 2 * t, end - 2 * t);
            }
        }
    }
    out
}

pub fn special_orbits(rep: &ClassRep) -> Result<SpecialOrbits, WeylError> {
    let (l, m, p) = (rep.l, rep.m as i64, rep.p as i64);
    let gamma_prime = clamped_interval(l, m, m + p + 2).expect("γ' nonempty");
    let orbit = orbit_in_k(rep, gamma_prime);
    let closed = closed_orbit_gamma_prime(rep);
    if orbit != closed {
        return Err(WeylError::Inconsistent(format!(
            "orbit of γ' differs from the closed list for ({},{}): {:?} vs {:?}",
            rep.l, rep.lprime, orbit, closed
        )));
    }
    let o1_seed = clamped_interval(l, m, m + p + 1).expect("nonempty");
    let o2_seed = clamped_interval(l, m + 1, m + p + 2).expect("nonempty");
    Ok(SpecialOrbits {
        gamma_prime,
        orbit_gamma_prime: orbit,
        closed_orbit_gamma_prime: closed,
        o1_seed,
        o2_seed,
        o1: orbit_in_k(rep, o1_seed),
        o2: orbit_in_k(rep, o2_seed),
    })
}

#[derive(Clone, Debug)]
pub struct HalfPlaneReport {
    pub passed: bool,
    pub tol: f64,
    /// `(α, v^λ)` for every positive root.
    pub projections: Vec<(Root, Complex64)>,
    /// Largest modulus among roots inside the block.
    pub fixed_max_abs: f64,
    /// Smallest modulus among roots outside the block.
    pub moving_min_abs: f64,
    /// Largest angular gap between consecutive positive projections.
    pub max_gap: f64,
    /// Direction whose open half-plane contains every positive projection.
    pub direction: Option<f64>,
    pub failures: Vec<String>,
}

pub fn eigenvector(rep: &ClassRep) -> Vec<Complex64> {
    let n = rep.n();
    let lambda = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / (rep.lprime + 1) as f64);
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let start = rep.s.moved_points()[0];
    for (a, &k) in rep.s.cycle_from(start).iter().enumerate() {
        v[k as usize - 1] = lambda.powi(-(a as i32));
    }
    v
}

pub fn halfplane_certificate(rep: &ClassRep, tol: f64) -> HalfPlaneReport {
    use std::f64::consts::PI;
    let v = eigenvector(rep);
    let mut failures = Vec::new();
    let lambda = Complex64::from_polar(1.0, 2.0 * PI / (rep.lprime + 1) as f64);
    for k in 1..=rep.n() as u16 {
        let sv = v[rep.s_inv().apply(k) as usize - 1];
        if (sv - lambda * v[k as usize - 1]).norm() > 1e-9 {
            failures.push(format!("not an eigenvector at index {k}"));
        }
    }
    let mut projections = Vec::new();
    let mut fixed_max: f64 = 0.0;
    let mut moving_min = f64::INFINITY;
    let mut angles = Vec::new();
    for r in enumerate_positive(rep.l).expect("l >= 1") {
        let z = v[r.row() as usize - 1].conj() - v[r.col() as usize - 1].conj();
        projections.push((r, z));
        if rep.in_block(r.row()) && rep.in_block(r.col()) {
            fixed_max = fixed_max.max(z.norm());
        } else {
            moving_min = moving_min.min(z.norm());
            if z.norm() <= tol {
                failures.push(format!("{r} projects to {:.3e}", z.norm()));
            } else {
                angles.push(z.arg());
            }
        }
    }
    if fixed_max > tol {
        failures.push(format!("fixed root projects to {fixed_max:.3e}"));
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut max_gap = 2.0 * PI;
    let mut direction = None;
    if let (Some(&lo), Some(&hi)) = (angles.first(), angles.last()) {
        max_gap = 2.0 * PI - (hi - lo);
        let mut gap_end = lo;
        for w in angles.windows(2) {
            if w[1] - w[0] > max_gap {
                max_gap = w[1] - w[0];
                gap_end = w[1];
            }
        }
        if max_gap > PI + tol {
            let arc = 2.0 * PI - max_gap;
            direction = Some(gap_end + arc / 2.0);
        }
    }
    if let Some(dir) = direction {
        let d = Complex64::from_polar(1.0, dir);
        for (r, z) in &projections {
            let moving = !(rep.in_block(r.row()) && rep.in_block(r.col()));
            if moving && (z * d.conj()).re <= 0.0 {
                failures.push(format!("{r} outside the half-plane"));
            }
        }
    } else {
        failures.push(format!("largest angular gap {max_gap:.6} does not exceed π"));
    }
    HalfPlaneReport {
        passed: failures.is_empty(),
        tol,
        projections,
        fixed_max_abs: fixed_max,
        moving_min_abs: moving_min,
        max_gap,
        direction,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::e_matrix;

    fn rt(i: u16, j: u16) -> Root {
        Root::positive(i, j).unwrap()
    }

    #[test]
    fn rank_three_cycle() {
        let rep = representative(3, 3).unwrap();
        assert_eq!(rep.case_id, ClassCase::III);
        assert_eq!(rep.gamma1, vec![rt(1, 1), rt(3, 3)]);
        assert_eq!(rep.gamma2, vec![rt(2, 2)]);
        assert_eq!(rep.s.one_line(), &[2, 4, 1, 3]);
        assert_eq!(act_on_root(&rep.s, rt(1, 1)), rt(2, 3));
        let ds = delta_sets(&rep).unwrap();
        assert_eq!(ds.delta_s_inv, BTreeSet::from([rt(1, 1), rt(3, 3), rt(1, 3)]));
        assert_eq!(ds.delta_s, BTreeSet::from([rt(2, 2), rt(1, 2), rt(2, 3)]));
    }

    #[test]
    fn single_transposition() {
        let rep = representative(4, 1).unwrap();
        assert_eq!(rep.case_id, ClassCase::I);
        assert_eq!(rep.m, 0);
        assert!(rep.gamma1.is_empty());
        assert_eq!(rep.gamma2, vec![rt(1, 4)]);
        assert_eq!(rep.s, WeylPerm::transposition(5, 1, 5));
    }

    #[test]
    fn rejects_bad_lprime() {
        assert!(representative(3, 0).is_err());
        assert!(representative(3, 4).is_err());
    }

    #[test]
    fn identity_and_inverse_action() {
        let id = WeylPerm::identity(5);
        let rep = representative(4, 3).unwrap();
        for r in crate::rootsys::RankContext::new(4).unwrap().all_roots() {
            assert_eq!(act_on_root(&id, r), r);
            assert_eq!(act_on_root(&rep.s_inv(), act_on_root(&rep.s, r)), r);
        }
    }

    #[test]
    fn theta_examples() {
        let a1 = Root::simple(1);
        assert_eq!(theta_table(a1, a1), -1);
        assert_eq!(theta_table(a1, Root::simple(2)), 1);
        for l in 1..6 {
            for a in 1..=l as u16 {
                for b in crate::rootsys::RankContext::new(l).unwrap().all_roots() {
                    assert_eq!(theta(Root::simple(a), b), theta_table(Root::simple(a), b));
                }
            }
        }
    }

    #[test]
    fn simple_reflection_matrix() {
        let m = reflection_matrix(Root::simple(2), 4);
        assert_eq!(m.get(1, 2), &Q::one());
        assert_eq!(m.get(2, 1), &Q::from_int(-1));
        assert_eq!(m.get(0, 0), &Q::one());
        assert_eq!(m.get(1, 1), &Q::zero());
        let id = s_matrix(&representative(1, 1).unwrap()).unwrap();
        assert_eq!(id.nonzero_count(), 2);
    }

    #[test]
    fn s_matrix_conjugation_rank_three() {
        let rep = representative(3, 3).unwrap();
        let m = s_matrix(&rep).unwrap();
        let inv = m.inverse().unwrap();
        let sd = sign_data(&rep);
        let e: Matrix<Q> = e_matrix(rt(1, 1), 3);
        let conj = m.mul(&e).mul(&inv);
        let target: Matrix<Q> = e_matrix(rt(2, 3), 3);
        assert_eq!(conj, target.scale(&Q::from_int(sd.t[&rt(1, 1)] as i64)));
    }

    #[test]
    fn gamma_prime_rank_three() {
        let rep = representative(3, 3).unwrap();
        let so = special_orbits(&rep).unwrap();
        assert_eq!(so.gamma_prime, rt(1, 3));
        assert!(delta_sets(&rep).unwrap().delta_s_inv.contains(&so.gamma_prime));
        assert_ne!(so.o1, so.o2);
    }

    #[test]
    fn halfplane_rank_three() {
        let rep = representative(3, 3).unwrap();
        let h = halfplane_certificate(&rep, 1e-9);
        assert!(h.passed, "{:?}", h.failures);
    }

    #[test]
    fn all_reps_small_rank() {
        for l in 1..=8 {
            for lp in 1..=l {
                let rep = representative(l, lp).unwrap();
                assert_eq!(rep.s.order(), lp + 1, "({l},{lp})");
                let fixed: Vec<u16> = rep.block().collect();
                assert_eq!(rep.s.fixed_points(), fixed, "({l},{lp})");
                for g in [&rep.gamma1, &rep.gamma2] {
                    for (x, a) in g.iter().enumerate() {
                        for b in &g[x + 1..] {
                            let disjoint = a.row() != b.row()
                                && a.row() != b.col()
                                && a.col() != b.row()
                                && a.col() != b.col();
                            assert!(disjoint, "({l},{lp}) {a} {b}");
                        }
                    }
                }
                let ds = delta_sets(&rep).unwrap();
                assert_eq!(ds.delta_s.len(), ds.delta_s_inv.len());
                assert_eq!(delta_s_from_factors(&rep), ds.delta_s, "({l},{lp})");
                let sd = sign_data(&rep);
                let m = s_matrix(&rep).unwrap();
                let inv = m.inverse().unwrap();
                for eta in crate::rootsys::RankContext::new(l).unwrap().all_roots() {
                    let e: Matrix<Q> = e_matrix(eta, l);
                    let target: Matrix<Q> = e_matrix(act_on_root(&rep.s, eta), l);
                    let t = sd.t[&eta];
                    assert_eq!(t * t, 1);
                    assert_eq!(m.mul(&e).mul(&inv), target.scale(&Q::from_int(t as i64)));
                }
                let so = special_orbits(&rep).unwrap();
                assert!(ds.delta_s_inv.contains(&so.gamma_prime));
                if lp >= 2 {
                    assert_ne!(so.o1, so.o2, "({l},{lp})");
                }
                let h = halfplane_certificate(&rep, 1e-9);
                assert!(h.passed, "({l},{lp}) {:?}", h.failures);
            }
        }
    }
}
