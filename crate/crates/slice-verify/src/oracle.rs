//! Slice reduction by explicit matrices: each layer `n_k` is read off a
//! factorization of `s z'^{-1} (ñ_{k-1}⋯ñ_1) z' s^{-1} (v_{D+1}⋯v_k)`.

use std::collections::{BTreeMap, BTreeSet};

use slice_core::exactring::{Matrix, Q};
use slice_core::groupalg::{assemble_z_prime, factorize_unipotent, matrix_of_word, FactorWord, GroupError, OrderTag};
use slice_core::rootsys::Root;
use slice_core::strata::Strata;
use slice_core::weyl::{delta_sets, s_matrix, WeylError};
use thiserror::Error;

use crate::sample::layer_word;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("z' is singular")]
    Singular,
    #[error("layer {k}: {source}")]
    Layer { k: usize, source: GroupError },
    #[error("conjugated element is not of the form n_s z' s^-1: {0}")]
    Membership(GroupError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

#[derive(Clone, Debug)]
pub struct OracleOutput {
    /// `n_k` coordinates by layer.
    pub layers: BTreeMap<usize, BTreeMap<Root, Q>>,
    /// `Δ_s`-first refactorization of `n_D`.
    pub n_d_split: Option<(BTreeMap<Root, Q>, BTreeMap<Root, Q>)>,
    pub n: Matrix<Q>,
    pub n_s: FactorWord<Q>,
    pub slice: Matrix<Q>,
    pub z_prime: Matrix<Q>,
}

impl OracleOutput {
    pub fn n_coord(&self, r: Root) -> Option<&Q> {
        self.layers.values().find_map(|m| m.get(&r))
    }

    pub fn n_s_coords(&self) -> BTreeMap<Root, Q> {
        self.n_s.coeffs()
    }
}

fn product(l: usize, words: impl IntoIterator<Item = FactorWord<Q>>) -> Matrix<Q> {
    words.into_iter().fold(Matrix::identity(l + 1), |acc, w| acc.mul(&matrix_of_word(&w, l)))
}

/// Refactorizes a layer word with its `Δ_s` roots first and returns the
/// `Δ_s` part and the rest.
pub fn split_delta_s(
    st: &Strata,
    k: usize,
    delta_s: &BTreeSet<Root>,
    vals: &BTreeMap<Root, Q>,
) -> Result<(BTreeMap<Root, Q>, BTreeMap<Root, Q>), GroupError> {
    let layer = st.sorted_prec(st.layer(k).iter().copied());
    let order: Vec<Root> = layer
        .iter()
        .copied()
        .filter(|r| delta_s.contains(r))
        .chain(layer.iter().copied().filter(|r| !delta_s.contains(r)))
        .collect();
    let m = matrix_of_word(&layer_word(st, k, vals), st.rep.l);
    let w = factorize_unipotent(&m, &order)?;
    let (p, pp): (Vec<_>, Vec<_>) = w.factors.into_iter().partition(|f| delta_s.contains(&f.root));
    Ok((p.into_iter().map(|f| (f.root, f.coeff)).collect(), pp.into_iter().map(|f| (f.root, f.coeff)).collect()))
}

pub fn numeric_slice_oracle(
    st: &Strata,
    v: &BTreeMap<Root, Q>,
    z: &BTreeMap<(u16, u16), Q>,
    mu: &Q,
) -> Result<OracleOutput, OracleError> {
    let rep = &st.rep;
    let l = rep.l;
    let big_d = st.big_d;
    let s = s_matrix(rep)?;
    let si = s.inverse().expect("permutation matrix");
    let zp = assemble_z_prime(st, &|i, j| z[&(i, j)].clone(), mu)?;
    let zpi = zp.inverse().ok_or(OracleError::Singular)?;
    let ds = delta_sets(rep)?.delta_s;
    let prec = st.prec_order();

    let mut layers: BTreeMap<usize, BTreeMap<Root, Q>> = BTreeMap::new();
    layers.insert(1, st.layer(1).iter().map(|r| (*r, v[r].clone())).collect());
    let mut n_d_split = None;
    for k in 2..=big_d + 1 {
        let mut tilde = Vec::with_capacity(k - 1);
        for j in (1..k).rev() {
            if j == big_d {
                let (p, pp) = split_delta_s(st, j, &ds, &layers[&j]).map_err(|e| OracleError::Layer { k: j, source: e })?;
                tilde.push(layer_word(st, j, &pp));
                n_d_split = Some((p, pp));
            } else {
                tilde.push(layer_word(st, j, &layers[&j]));
            }
        }
        let lower = product(l, tilde);
        let upper = product(l, (k..=big_d + 1).rev().map(|j| layer_word(st, j, v)));
        let a = s.mul(&zpi).mul(&lower).mul(&zp).mul(&si).mul(&upper);
        let w = factorize_unipotent(&a, &prec).map_err(|e| OracleError::Layer { k, source: e })?;
        let coords = w.coeffs();
        layers.insert(k, st.layer(k).iter().map(|r| (*r, coords.get(r).cloned().unwrap_or_else(|| Q::from_integer(0.into())))).collect());
    }
    if big_d >= 1 && n_d_split.is_none() {
        let (p, pp) = split_delta_s(st, big_d, &ds, &layers[&big_d])?;
        n_d_split = Some((p, pp));
    }

    let n = product(l, (1..=big_d + 1).rev().map(|k| layer_word(st, k, &layers[&k])));
    let v_mat = product(l, (1..=big_d + 1).rev().map(|k| layer_word(st, k, v)));
    let ni = n.inverse().expect("unipotent");
    let slice = n.mul(&zp).mul(&si).mul(&v_mat).mul(&ni);
    let ns_mat = slice.mul(&s).mul(&zpi);
    let n_s = factorize_unipotent(&ns_mat, &st.sorted_prec(ds.iter().copied())).map_err(OracleError::Membership)?;
    Ok(OracleOutput { layers, n_d_split, n, n_s: FactorWord { order_tag: OrderTag::Prec, ..n_s }, slice, z_prime: zp })
}
