//! Closed-form root lists and the appendix layer tables against direct enumeration.

use std::collections::BTreeSet;

use rayon::prelude::*;
use slice_core::rootsys::{enumerate_positive, Root};
use slice_core::strata::{appendix_discrepancies, stratify};
use slice_core::weyl::{act_on_root, closed_form_s_inv, closed_orbit_gamma_prime, orbit_in_k, representative, ClassRep};

use crate::config::TrialConfig;
use crate::verdict::{Counterexample, Params, Verdict};

pub const CLOSED_LIST: &str = "closed-inversion-list";
pub const ORBIT_LIST: &str = "closed-orbit-list";
pub const APPENDIX: &str = "appendix-layer-table";

fn names<'a>(roots: impl IntoIterator<Item = &'a Root>) -> String {
    let v: Vec<String> = roots.into_iter().map(Root::to_string).collect();
    format!("{{{}}}", v.join(", "))
}

fn set_mismatch(closed: &BTreeSet<Root>, direct: &BTreeSet<Root>) -> Result<(), Counterexample> {
    if closed == direct {
        return Ok(());
    }
    let roots = closed.symmetric_difference(direct).map(Root::to_string).collect();
    Err(Counterexample::new(roots, names(direct), names(closed)))
}

fn inversions_of_s_inv(rep: &ClassRep) -> BTreeSet<Root> {
    let sinv = rep.s.inverse();
    enumerate_positive(rep.l)
        .expect("l >= 1")
        .into_iter()
        .filter(|&r| !act_on_root(&sinv, r).is_positive())
        .collect()
}

fn point_verdicts(cfg: &TrialConfig, l: usize, lp: usize) -> Vec<Verdict> {
    let params = Params { l, lprime: lp, trials: 1, seed: cfg.seed };
    let rep = representative(l, lp).expect("valid point");
    let closed = set_mismatch(&closed_form_s_inv(&rep), &inversions_of_s_inv(&rep));
    let gp = slice_core::weyl::special_orbits(&rep).map(|o| o.gamma_prime);
    let orbit = match gp {
        Ok(g) => set_mismatch(&closed_orbit_gamma_prime(&rep), &orbit_in_k(&rep, g)),
        Err(e) => Err(Counterexample::new(vec![], "orbit of γ'", e.to_string())),
    };
    let st = stratify(&rep);
    let bad = appendix_discrepancies(&st);
    let appendix = if bad.is_empty() {
        Ok(())
    } else {
        let listed: Vec<String> = bad
            .iter()
            .map(|(r, a, d)| format!("{r}: table {}, d {d}", a.map_or("none".to_string(), |a| a.to_string())))
            .collect();
        Err(Counterexample::new(
            bad.iter().map(|(r, _, _)| r.to_string()).collect(),
            "table value equals d",
            listed.join("; "),
        ))
    };
    vec![
        Verdict::from_result(CLOSED_LIST, params.clone(), closed),
        Verdict::from_result(ORBIT_LIST, params.clone(), orbit),
        Verdict::from_result(APPENDIX, params, appendix),
    ]
}

pub fn check_tables(cfg: &TrialConfig) -> Vec<Verdict> {
    cfg.points().into_par_iter().flat_map_iter(|(l, lp)| point_verdicts(cfg, l, lp)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_lists_agree_through_rank_six() {
        for v in check_tables(&TrialConfig::default().with_l_max(6)) {
            if v.check_id != APPENDIX {
                assert!(!v.is_fail(), "{v}");
            }
        }
    }

    #[test]
    fn appendix_mismatch_lists_roots() {
        let v = check_tables(&TrialConfig::default().with_l_max(8));
        let bad: Vec<&Verdict> = v.iter().filter(|v| v.check_id == APPENDIX && v.is_fail()).collect();
        assert!(!bad.is_empty());
        assert!(bad.iter().all(|v| !v.counterexample.as_ref().unwrap().roots.is_empty()));
    }
}
