//! Conjugating a point of `N Z' s^{-1} N` by `g ∈ N` leaves its slice
//! representative and every generator value unchanged.
//!
//! Route A reduces `m = u_s z' s^{-1} u` as the conjugate of `z' s^{-1} (u u_s)`.
//! Route B only sees `M = g m g^{-1}`: it splits `g u_s` into an `N_s` part
//! and the rest, moves the rest across `z' s^{-1}` and reduces the result.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use slice_core::exactring::{Matrix, Q};
use slice_core::groupalg::{assemble_z_prime, factorize_unipotent, matrix_of_word, FactorWord, OrderTag, TForm};
use slice_core::invariants::{evaluate_generators, FormulaVariant};
use slice_core::rootsys::Root;
use slice_core::strata::{stratify, Strata};
use slice_core::weyl::{delta_sets, representative, s_matrix};

use crate::config::TrialConfig;
use crate::oracle::numeric_slice_oracle;
use crate::sample::{coords, describe, torus_scalar, z_assignment};
use crate::verdict::{Counterexample, Params, Verdict};

pub const CHECK: &str = "n-invariance";

fn word(order: &[Root], vals: &BTreeMap<Root, Q>) -> FactorWord<Q> {
    FactorWord::from_pairs(OrderTag::Free, order.iter().map(|r| (*r, vals[r].clone())))
}

fn entry_diff(a: &Matrix<Q>, b: &Matrix<Q>) -> (String, String) {
    let (i, j) = a.first_difference(b).unwrap_or((0, 0));
    (format!("entry ({},{}) = {}", i + 1, j + 1, a.get(i, j)), b.get(i, j).to_string())
}

pub fn invariance_trial(st: &Strata, cfg: &TrialConfig, trial: usize) -> Result<(), Counterexample> {
    let rep = &st.rep;
    let l = rep.l;
    let mut rng = cfg.rng(CHECK, l, rep.lprime, trial);
    let z = z_assignment(&mut rng, cfg.value_pool, st);
    let mu = torus_scalar(&mut rng, cfg.value_pool, cfg.mode);
    let ds: BTreeSet<Root> = delta_sets(rep).expect("closed lists agree").delta_s;
    let ds_order = st.sorted_prec(ds.iter().copied());
    let prec = st.prec_order();
    let us = coords(&mut rng, cfg.value_pool, ds_order.iter().copied());
    let u = coords(&mut rng, cfg.value_pool, prec.iter().copied());
    let g = coords(&mut rng, cfg.value_pool, prec.iter().copied());
    let mut assignment = describe(&u, &z, &mu);
    assignment.extend(us.iter().map(|(r, x)| (format!("u_s[{r}]"), x.to_string())));
    assignment.extend(g.iter().map(|(r, x)| (format!("g[{r}]"), x.to_string())));
    let fail = |roots: Vec<String>, e: String, a: String| Counterexample::new(roots, e, a).at_trial(trial).with_assignment(assignment.clone());

    let s = s_matrix(rep).map_err(|e| fail(vec![], "matrix of s".into(), e.to_string()))?;
    let si = s.inverse().expect("permutation matrix");
    let zp = assemble_z_prime(st, &|i, j| z[&(i, j)].clone(), &mu).map_err(|e| fail(vec![], "z' assembly".into(), e.to_string()))?;
    let zpi = zp.inverse().ok_or_else(|| fail(vec![], "invertible z'".into(), "singular".into()))?;
    let us_m = matrix_of_word(&word(&ds_order, &us), l);
    let u_m = matrix_of_word(&word(&prec, &u), l);
    let g_m = matrix_of_word(&word(&prec, &g), l);
    let gi = g_m.inverse().expect("unipotent");

    let reduce = |v: &Matrix<Q>, route: &str| -> Result<(Matrix<Q>, BTreeMap<Root, Q>), Counterexample> {
        let w = factorize_unipotent(v, &prec).map_err(|e| fail(vec![], format!("route {route}: v in N"), e.to_string()))?;
        let c: BTreeMap<Root, Q> = prec.iter().map(|r| (*r, w.coeff_of(*r))).collect();
        let out = numeric_slice_oracle(st, &c, &z, &mu).map_err(|e| fail(vec![], format!("route {route}: reduction"), e.to_string()))?;
        let gens = evaluate_generators(st, FormulaVariant::default(), TForm::Signed, &c, &z)
            .map_err(|e| fail(vec![], format!("route {route}: generators"), e.to_string()))?;
        Ok((out.slice, gens))
    };

    let (slice_a, gens_a) = reduce(&u_m.mul(&us_m), "A")?;

    let big_m = g_m.mul(&us_m).mul(&zp).mul(&si).mul(&u_m).mul(&gi);
    let rest: Vec<Root> = prec.iter().copied().filter(|r| !ds.contains(r)).collect();
    let split_order: Vec<Root> = ds_order.iter().copied().chain(rest.iter().copied()).collect();
    let lw = factorize_unipotent(&g_m.mul(&us_m), &split_order).map_err(|e| fail(vec![], "split of g u_s".into(), e.to_string()))?;
    let (xs, xr): (Vec<_>, Vec<_>) = lw.factors.into_iter().partition(|f| ds.contains(&f.root));
    let xs_m = matrix_of_word(&FactorWord::free(xs), l);
    let xr_m = matrix_of_word(&FactorWord::free(xr), l);
    let y = s.mul(&zpi).mul(&xr_m).mul(&zp).mul(&si);
    if !y.is_unipotent_upper() {
        return Err(fail(vec![], "s z'^-1 x' z' s^-1 in N".into(), "not upper unitriangular".into()));
    }
    let v_b = y.mul(&u_m).mul(&gi).mul(&xs_m);
    let rebuilt = xs_m.mul(&zp).mul(&si).mul(&v_b).mul(&xs_m.inverse().expect("unipotent"));
    if rebuilt != big_m {
        let (e, a) = entry_diff(&big_m, &rebuilt);
        return Err(fail(vec![], format!("route B rebuilds M: {e}"), a));
    }
    let (slice_b, gens_b) = reduce(&v_b, "B")?;

    if slice_a != slice_b {
        let (e, a) = entry_diff(&slice_a, &slice_b);
        return Err(fail(vec![], format!("slice {e}"), a));
    }
    for (k, a) in &gens_a {
        let b = &gens_b[k];
        if a != b {
            return Err(fail(vec![k.to_string()], a.to_string(), b.to_string()));
        }
    }
    Ok(())
}

pub fn check_invariance(cfg: &TrialConfig) -> Vec<Verdict> {
    cfg.points()
        .into_par_iter()
        .map(|(l, lp)| {
            let st = stratify(&representative(l, lp).expect("valid point"));
            let p = Params { l, lprime: lp, trials: cfg.trials, seed: cfg.seed };
            let first = (0..cfg.trials).find_map(|t| invariance_trial(&st, cfg, t).err());
            match first {
                None => Verdict::pass(CHECK, p),
                Some(cx) => Verdict::fail(CHECK, p, cx),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks_are_invariant() {
        for v in check_invariance(&TrialConfig::default().with_l_max(4).with_trials(3)) {
            assert!(!v.is_fail(), "{v}");
        }
    }
}
