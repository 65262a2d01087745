//! Named groups of checks, timing and replay.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::checks::{cross_engine, halfplane, invariance, lemmas, generator_oracle, roundtrip, tables, transport};
use crate::config::{LprimeRule, TrialConfig};
use crate::verdict::{Report, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemmas,
    #[serde(rename = "prop58")]
    Generators,
    Invariance,
    Appendix,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lemmas" => Ok(Suite::Lemmas),
            "prop58" => Ok(Suite::Generators),
            "invariance" => Ok(Suite::Invariance),
            "appendix" => Ok(Suite::Appendix),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite {s:?}")),
        }
    }
}

type Runner = fn(&TrialConfig) -> Vec<Verdict>;

/// Every check with the name used for its timing entry.
const CHECKS: &[(&str, Runner)] = &[
    ("tables", tables::check_tables),
    ("lemmas", lemmas::check_lemmas),
    ("transport", transport::check_transport),
    ("generator-oracle", generator_oracle::check_generators),
    ("formula-variants", generator_oracle::probe_formula_variants),
    ("canary", generator_oracle::check_canary),
    ("cross-engine", cross_engine::check_cross_engine),
    ("invariance", invariance::check_invariance),
    ("roundtrips", roundtrip::check_roundtrips),
    ("half-plane", halfplane::check_halfplane),
];

impl Suite {
    pub fn checks(self) -> Vec<&'static str> {
        match self {
            Suite::Lemmas => vec!["tables", "lemmas", "transport"],
            Suite::Appendix => vec!["tables"],
            Suite::Generators => vec!["generator-oracle", "formula-variants", "canary", "cross-engine"],
            Suite::Invariance => vec!["invariance"],
            Suite::All => CHECKS.iter().map(|(name, _)| *name).collect(),
        }
    }
}

fn runner(name: &str) -> Runner {
    CHECKS.iter().find(|(n, _)| *n == name).map(|(_, f)| *f).expect("registered check")
}

pub fn run_checks(names: &[&str], cfg: &TrialConfig) -> Report {
    let mut report = Report::default();
    for name in names {
        let start = Instant::now();
        let verdicts = runner(name)(cfg);
        report.extend(verdicts, name, start.elapsed().as_secs_f64());
    }
    report.sort();
    report
}

pub fn run_suite(suite: Suite, cfg: &TrialConfig) -> Report {
    run_checks(&suite.checks(), cfg)
}

/// Re-runs the check that produced `v` at its parameter point only.
pub fn replay(v: &Verdict, cfg: &TrialConfig) -> Option<Verdict> {
    let point = TrialConfig {
        l_min: v.params.l,
        l_max: v.params.l,
        lprime_rule: if v.params.lprime == 0 { LprimeRule::All } else { LprimeRule::Only(v.params.lprime) },
        seed: v.params.seed,
        ..cfg.clone()
    };
    CHECKS.iter().find_map(|(_, f)| f(&point).into_iter().find(|w| w.check_id == v.check_id && w.params == v.params))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> TrialConfig {
        TrialConfig::default().with_l_max(3).with_trials(2).with_seed(7)
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite(Suite::All, &small());
        let b = run_suite(Suite::All, &small());
        assert_eq!(a.verdicts_json(), b.verdicts_json());
        assert_eq!(a.timings.len(), CHECKS.len());
    }

    #[test]
    fn failures_replay() {
        let report = run_suite(Suite::Lemmas, &TrialConfig::default().with_l_max(4));
        let fail = report.failures().next().expect("the refuted statements fail at l = 4").clone();
        assert_eq!(replay(&fail, &TrialConfig::default()), Some(fail));
    }

    #[test]
    fn suite_names_parse() {
        for s in ["lemmas", "prop58", "invariance", "appendix", "all"] {
            assert!(s.parse::<Suite>().is_ok());
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(6))]

        #[test]
        fn any_seed_is_deterministic_and_failures_replay(seed in 0u64..1_000_000) {
            let cfg = TrialConfig::default().with_l_max(3).with_trials(2).with_seed(seed);
            let a = run_suite(Suite::All, &cfg);
            let b = run_suite(Suite::All, &cfg);
            proptest::prop_assert_eq!(a.verdicts_json(), b.verdicts_json());
            for f in a.failures() {
                let again = replay(f, &cfg);
                proptest::prop_assert_eq!(again.as_ref(), Some(f));
            }
        }
    }
}
