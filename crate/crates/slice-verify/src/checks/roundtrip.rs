//! Factorization of ordered words and the pairwise commutation rule, both
//! checked as exact matrix identities.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use slice_core::exactring::{MultiPoly, Q};
use slice_core::groupalg::{commute_pair, factorize_unipotent, matrix_of_word, Factor, FactorWord, OrderTag};
use slice_core::rootsys::Root;
use slice_core::strata::stratify;
use slice_core::weyl::representative;

use crate::config::TrialConfig;
use crate::sample::rational;
use crate::verdict::{Counterexample, Params, Verdict};

pub const FACTORIZE: &str = "factorize-roundtrip";
pub const COMMUTE: &str = "commute-pair-exact";
pub const WORDS: usize = 1000;

/// Words are split evenly over `l = 1..=l_max`, each at a random `l'`.
pub fn factorize_words(cfg: &TrialConfig, l: usize) -> Result<usize, Counterexample> {
    let ls = cfg.l_max.max(1);
    let count = WORDS / ls + usize::from(l <= WORDS % ls);
    let mut rng = cfg.rng(FACTORIZE, l, 0, 0);
    for t in 0..count {
        let lp = rng.gen_range(1..=l);
        let st = stratify(&representative(l, lp).expect("valid point"));
        let order = st.prec_order();
        let size = rng.gen_range(0..=order.len());
        let chosen = st.sorted_prec(order.choose_multiple(&mut rng, size).copied());
        let w: FactorWord<Q> =
            FactorWord::from_pairs(OrderTag::Prec, chosen.iter().map(|&r| (r, rational(&mut rng, cfg.value_pool))));
        let back = factorize_unipotent(&matrix_of_word(&w, l), &order)
            .map_err(|e| Counterexample::new(vec![], "factorization", e.to_string()).at_trial(t))?;
        if back.coeffs() != w.coeffs() {
            return Err(Counterexample::new(
                chosen.iter().map(Root::to_string).collect(),
                format!("{:?}", w.coeffs()),
                format!("{:?}", back.coeffs()),
            )
            .at_trial(t));
        }
    }
    Ok(count)
}

fn all_roots(l: usize) -> Vec<Root> {
    let n = (l + 1) as u16;
    (1..=n).flat_map(|a| (1..=n).filter(move |&b| b != a).map(move |b| Root::from_position(a, b).expect("off-diagonal"))).collect()
}

pub fn commute_all_pairs(l: usize) -> Result<usize, Counterexample> {
    let roots = all_roots(l);
    let mut pairs = 0;
    for &a in &roots {
        for &b in &roots {
            if a == b.negate() {
                continue;
            }
            let fa = Factor::new(a, MultiPoly::c(a));
            let fb = Factor::new(b, MultiPoly::cp(b));
            let lhs = matrix_of_word(&FactorWord::free(vec![fa.clone(), fb.clone()]), l);
            let rewritten = commute_pair(&fa, &fb).map_err(|e| Counterexample::new(vec![a.to_string(), b.to_string()], "rewrite", e.to_string()))?;
            let rhs = matrix_of_word(&rewritten, l);
            if lhs != rhs {
                return Err(Counterexample::new(vec![a.to_string(), b.to_string()], "equal matrices", "matrices differ"));
            }
            pairs += 1;
        }
    }
    Ok(pairs)
}

pub fn check_roundtrips(cfg: &TrialConfig) -> Vec<Verdict> {
    (cfg.l_min..=cfg.l_max)
        .into_par_iter()
        .flat_map_iter(|l| {
            let p = Params { l, lprime: 0, trials: 1, seed: cfg.seed };
            let words = match factorize_words(cfg, l) {
                Ok(n) => Verdict::pass(FACTORIZE, p.clone()).with_note(format!("{n} words")),
                Err(cx) => Verdict::fail(FACTORIZE, p.clone(), cx),
            };
            let pairs = match commute_all_pairs(l) {
                Ok(n) => Verdict::pass(COMMUTE, p).with_note(format!("{n} pairs")),
                Err(cx) => Verdict::fail(COMMUTE, p, cx),
            };
            [words, pairs]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    use slice_core::exactring::Ring;

    #[test]
    fn word_counts_add_up() {
        let cfg = TrialConfig::default().with_l_max(8);
        let total: usize = (1..=8).map(|l| factorize_words(&cfg, l).unwrap()).sum();
        assert_eq!(total, WORDS);
    }

    #[test]
    fn wrong_sign_would_be_caught() {
        let a = Root::positive(1, 1).unwrap();
        let b = Root::positive(2, 2).unwrap();
        let fa = Factor::new(a, MultiPoly::c(a));
        let fb = Factor::new(b, MultiPoly::cp(b));
        let mut w = commute_pair(&fa, &fb).unwrap();
        let last = w.factors.last_mut().unwrap();
        last.coeff = last.coeff.scale_int(-1);
        assert_ne!(matrix_of_word(&FactorWord::free(vec![fa, fb]), 2), matrix_of_word(&w, 2));
    }
}
