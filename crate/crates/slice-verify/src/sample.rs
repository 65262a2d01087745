use std::collections::BTreeMap;

use rand::Rng;
use slice_core::exactring::{q, q_to_string, qf, Q};
use slice_core::groupalg::{FactorWord, OrderTag};
use slice_core::rootsys::Root;
use slice_core::strata::Strata;

use crate::config::{Mode, ValuePool};

pub fn rational<G: Rng>(rng: &mut G, pool: ValuePool) -> Q {
    let draw = |rng: &mut G| {
        let a = rng.gen_range(1..=pool.max_abs);
        if rng.gen_bool(0.5) {
            -a
        } else {
            a
        }
    };
    let n = draw(rng);
    let d = draw(rng);
    qf(n, d)
}

pub fn coords<G: Rng>(rng: &mut G, pool: ValuePool, roots: impl IntoIterator<Item = Root>) -> BTreeMap<Root, Q> {
    roots.into_iter().map(|r| (r, rational(rng, pool))).collect()
}

/// Block entries of `z`, with the diagonal product equal to one.
pub fn z_assignment<G: Rng>(rng: &mut G, pool: ValuePool, st: &Strata) -> BTreeMap<(u16, u16), Q> {
    let block: Vec<u16> = st.rep.block().collect();
    let mut z = BTreeMap::new();
    for &i in &block {
        for &j in &block {
            z.insert((i, j), rational(rng, pool));
        }
    }
    if let Some((&last, init)) = block.split_last() {
        let prod = init.iter().fold(q(1), |acc, &i| acc * &z[&(i, i)]);
        z.insert((last, last), q(1) / prod);
    }
    z
}

pub fn torus_scalar<G: Rng>(rng: &mut G, pool: ValuePool, mode: Mode) -> Q {
    match mode {
        Mode::DefaultRing => q(1),
        Mode::StrictTorus => loop {
            let mu = rational(rng, pool);
            if mu != q(1) {
                break mu;
            }
        },
    }
}

/// ≼-ordered word of the coordinates that fall in layer `k`.
pub fn layer_word(st: &Strata, k: usize, vals: &BTreeMap<Root, Q>) -> FactorWord<Q> {
    FactorWord::from_pairs(
        OrderTag::Prec,
        st.sorted_prec(st.layer(k).iter().copied()).into_iter().filter_map(|r| vals.get(&r).map(|v| (r, v.clone()))),
    )
}

pub fn describe(c: &BTreeMap<Root, Q>, z: &BTreeMap<(u16, u16), Q>, mu: &Q) -> BTreeMap<String, String> {
    let mut out: BTreeMap<String, String> = c.iter().map(|(r, v)| (format!("c[{r}]"), q_to_string(v))).collect();
    out.extend(z.iter().map(|((i, j), v)| (format!("z[{i},{j}]"), q_to_string(v))));
    out.insert("mu".into(), q_to_string(mu));
    out
}
