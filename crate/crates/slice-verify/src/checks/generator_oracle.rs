use rayon::prelude::*;
use slice_core::exactring::{q_to_string, Q};
use slice_core::groupalg::TForm;
use slice_core::invariants::{evaluate_coords, FormulaVariant};
use slice_core::rootsys::Root;
use slice_core::strata::{stratify, Strata};
use slice_core::weyl::{delta_sets, representative};

use crate::config::{Mode, TrialConfig};
use crate::oracle::numeric_slice_oracle;
use crate::sample::{coords, describe, torus_scalar, z_assignment};
use crate::verdict::{Counterexample, Params, Verdict};

pub const CHECK: &str = "generator-oracle";
pub const CANARY: &str = "canary-flipped-t0";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormulaChoice {
    pub variant: FormulaVariant,
    pub form: TForm,
}

impl Default for FormulaChoice {
    fn default() -> Self {
        FormulaChoice { variant: FormulaVariant::default(), form: TForm::Signed }
    }
}

fn zero() -> Q {
    Q::from_integer(0.into())
}

/// One sampled point: closed-form coordinates against the matrix oracle.
pub fn generator_trial(st: &Strata, cfg: &TrialConfig, trial: usize, choice: FormulaChoice) -> Result<(), Counterexample> {
    let (l, lp) = (st.rep.l, st.rep.lprime);
    let mut rng = cfg.rng(CHECK, l, lp, trial);
    let z = z_assignment(&mut rng, cfg.value_pool, st);
    let mu = torus_scalar(&mut rng, cfg.value_pool, cfg.mode);
    let c = coords(&mut rng, cfg.value_pool, st.k_plus.iter().copied());
    let assignment = describe(&c, &z, &mu);
    let fail = |roots: Vec<Root>, e: String, a: String| {
        Counterexample::new(roots.iter().map(|r| r.to_string()).collect(), e, a)
            .at_trial(trial)
            .with_assignment(assignment.clone())
    };
    let oracle = numeric_slice_oracle(st, &c, &z, &mu).map_err(|e| fail(vec![], "oracle reduction".into(), e.to_string()))?;
    let (n, _) = evaluate_coords(st, choice.variant, choice.form, &c, &z)
        .map_err(|e| fail(vec![], "closed-form evaluation".into(), e.to_string()))?;
    let ds = delta_sets(&st.rep).expect("closed lists agree").delta_s;
    let ns = oracle.n_s_coords();
    for &kappa in &ds {
        let want = ns.get(&kappa).cloned().unwrap_or_else(zero);
        let got = n.get(&kappa).cloned().unwrap_or_else(zero);
        if want != got {
            return Err(fail(vec![kappa], q_to_string(&want), q_to_string(&got)));
        }
    }
    for &kappa in &st.k_plus {
        if ds.contains(&kappa) || st.d_of(kappa) < Some(2) {
            continue;
        }
        let want = oracle.n_coord(kappa).cloned().unwrap_or_else(zero);
        let got = n.get(&kappa).cloned().unwrap_or_else(zero);
        if want != got {
            return Err(fail(vec![kappa], q_to_string(&want), q_to_string(&got)));
        }
    }
    Ok(())
}

fn params(cfg: &TrialConfig, l: usize, lp: usize) -> Params {
    Params { l, lprime: lp, trials: cfg.trials, seed: cfg.seed }
}

/// Runs every trial and returns the number of failures and the first counterexample.
fn run_point(cfg: &TrialConfig, l: usize, lp: usize, choice: FormulaChoice, stop_early: bool) -> (usize, Option<Counterexample>) {
    let st = stratify(&representative(l, lp).expect("valid point"));
    let mut bad = 0;
    let mut first = None;
    for t in 0..cfg.trials {
        if let Err(cx) = generator_trial(&st, cfg, t, choice) {
            bad += 1;
            first.get_or_insert(cx);
            if stop_early {
                break;
            }
        }
    }
    (bad, first)
}

pub fn check_generators_with(cfg: &TrialConfig, choice: FormulaChoice) -> Vec<Verdict> {
    cfg.points()
        .into_par_iter()
        .map(|(l, lp)| {
            let p = params(cfg, l, lp);
            if cfg.mode == Mode::StrictTorus {
                let (bad, _) = run_point(cfg, l, lp, choice, false);
                return Verdict::report(
                    &format!("{CHECK}-strict-torus"),
                    p,
                    format!("{bad}/{} trials disagree with mu != 1", cfg.trials),
                );
            }
            match run_point(cfg, l, lp, choice, true) {
                (0, _) => Verdict::pass(CHECK, p),
                (_, Some(cx)) => Verdict::fail(CHECK, p, cx),
                _ => unreachable!(),
            }
        })
        .collect()
}

pub fn check_generators(cfg: &TrialConfig) -> Vec<Verdict> {
    check_generators_with(cfg, FormulaChoice::default())
}

/// The displayed and the cumulative readings of the closed form, recorded
/// without affecting the outcome.
pub fn probe_formula_variants(cfg: &TrialConfig) -> Vec<Verdict> {
    let variants = [("generator-printed-formula", FormulaVariant::Printed), ("generator-cumulative-formula", FormulaVariant::Corrected)];
    let mut out: Vec<Verdict> = cfg
        .points()
        .into_par_iter()
        .flat_map_iter(|(l, lp)| {
            variants.iter().map(move |&(id, variant)| {
                let (bad, cx) = run_point(cfg, l, lp, FormulaChoice { variant, form: TForm::Signed }, false);
                let mut note = format!("{bad}/{} trials disagree", cfg.trials);
                match cx {
                    Some(cx) if cx.roots.is_empty() => note.push_str(&format!("; expected {}, got {}", cx.expected, cx.actual)),
                    Some(cx) => note.push_str(&format!("; first at {:?}", cx.roots)),
                    None => {}
                }
                Verdict::report(id, params(cfg, l, lp), note)
            })
        })
        .collect();
    out.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    out
}

/// Flipping the sign of the `r = 0` term of `T` must be caught at `(4, 3)`.
pub fn check_canary(cfg: &TrialConfig) -> Vec<Verdict> {
    let (l, lp) = (4, 3);
    let choice = FormulaChoice { form: TForm::FlipT0, ..FormulaChoice::default() };
    let (bad, cx) = run_point(cfg, l, lp, choice, false);
    let p = params(cfg, l, lp);
    if bad > 0 {
        let roots = cx.map(|c| c.roots).unwrap_or_default();
        vec![Verdict::pass(CANARY, p).with_note(format!("mutant caught in {bad}/{} trials, e.g. at {roots:?}", cfg.trials))]
    } else {
        vec![Verdict::fail(
            CANARY,
            p,
            Counterexample::new(vec![], "at least one failing trial", format!("0/{} trials failed", cfg.trials)),
        )]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn zero_sample_gives_zero_generators() {
        let st = stratify(&representative(4, 3).unwrap());
        let c: BTreeMap<Root, Q> = st.k_plus.iter().map(|r| (*r, zero())).collect();
        let mut rng = TrialConfig::default().rng("t", 4, 3, 0);
        let z = z_assignment(&mut rng, Default::default(), &st);
        let one = Q::from_integer(1.into());
        let out = numeric_slice_oracle(&st, &c, &z, &one).unwrap();
        assert!(out.n_s.factors.is_empty());
        let (n, _) = evaluate_coords(&st, FormulaVariant::default(), TForm::Signed, &c, &z).unwrap();
        assert!(n.values().all(|v| *v == zero()));
    }

    #[test]
    fn small_ranks_agree_with_oracle() {
        let cfg = TrialConfig::default().with_l_max(4).with_trials(3);
        let v = check_generators(&cfg);
        assert!(v.iter().all(|v| !v.is_fail()), "{:?}", v.iter().filter(|v| v.is_fail()).collect::<Vec<_>>());
    }

    #[test]
    fn canary_is_caught() {
        let v = check_canary(&TrialConfig::default());
        assert!(!v[0].is_fail(), "{}", v[0]);
    }
}
