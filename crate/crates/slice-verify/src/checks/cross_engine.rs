//! Closed-form generators against the rewriting engine, as canonical polynomials.

use rayon::prelude::*;
use slice_core::invariants::{ClosedForm, FormulaVariant};
use slice_core::rearrange::{generic_input, run_pipeline, PipelineOptions};
use slice_core::strata::{stratify, Strata};
use slice_core::weyl::representative;

use crate::config::TrialConfig;
use crate::verdict::{Counterexample, Params, Verdict};

pub const CHECK: &str = "closed-form-vs-engine";

pub fn compare_point(st: &Strata, variant: FormulaVariant) -> Result<(), Counterexample> {
    let mut cf = ClosedForm::new(st, variant);
    for k in 2..=st.big_d + 1 {
        let res = run_pipeline(st, k, &generic_input(st, k), &PipelineOptions::default())
            .map_err(|e| Counterexample::new(vec![], format!("engine output for layer {k}"), e.to_string()))?;
        for &kappa in st.layer(k) {
            let want = &res.c_bar[&kappa];
            let got = cf.c_kappa(kappa).map_err(|e| Counterexample::new(vec![kappa.to_string()], want.to_string(), e.to_string()))?;
            if &got != want {
                return Err(Counterexample::new(vec![kappa.to_string()], want.to_string(), got.to_string()));
            }
        }
    }
    Ok(())
}

pub fn check_cross_engine(cfg: &TrialConfig) -> Vec<Verdict> {
    cfg.points()
        .into_par_iter()
        .map(|(l, lp)| {
            let st = stratify(&representative(l, lp).expect("valid point"));
            let p = Params { l, lprime: lp, trials: 1, seed: cfg.seed };
            Verdict::from_result(CHECK, p, compare_point(&st, FormulaVariant::default()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_through_rank_four() {
        for v in check_cross_engine(&TrialConfig::default().with_l_max(4)) {
            assert!(!v.is_fail(), "{v}");
        }
    }

    #[test]
    fn cumulative_reading_is_caught() {
        let st = stratify(&representative(6, 5).unwrap());
        let cx = compare_point(&st, FormulaVariant::Corrected).unwrap_err();
        assert_eq!(cx.roots.len(), 1);
    }
}
