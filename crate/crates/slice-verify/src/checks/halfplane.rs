//! Projections of the positive roots onto the eigenvector of `s` lie in an
//! open half-plane, with the block roots projecting to zero.

use slice_core::weyl::{halfplane_certificate, representative};

use crate::config::TrialConfig;
use crate::verdict::{Counterexample, Params, Verdict};

pub const CHECK: &str = "half-plane";
pub const TOL: f64 = 1e-9;

pub fn check_halfplane(cfg: &TrialConfig) -> Vec<Verdict> {
    cfg.points()
        .into_iter()
        .map(|(l, lp)| {
            let rep = representative(l, lp).expect("valid point");
            let r = halfplane_certificate(&rep, TOL);
            let p = Params { l, lprime: lp, trials: 1, seed: cfg.seed };
            if r.passed {
                Verdict::pass(CHECK, p).with_note(format!("min moving projection {:.3e}", r.moving_min_abs))
            } else {
                Verdict::fail(CHECK, p, Counterexample::new(vec![], "certificate", r.failures.join("; ")))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passes_through_rank_six() {
        assert!(check_halfplane(&TrialConfig::default().with_l_max(6)).iter().all(|v| !v.is_fail()));
    }
}
