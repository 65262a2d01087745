//! One line per acceptance criterion. Runs as a plain binary so the lines
//! always show; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use slice_verify::checks::{cross_engine, halfplane, invariance, lemmas, generator_oracle, roundtrip, tables, transport};
use slice_verify::{TrialConfig, Verdict};

struct Criterion {
    number: u8,
    name: &'static str,
    budget_secs: f64,
    run: fn() -> Vec<Verdict>,
}

fn upto(l_max: usize) -> TrialConfig {
    TrialConfig::default().with_l_max(l_max)
}

fn only(ids: &[&str], v: Vec<Verdict>) -> Vec<Verdict> {
    v.into_iter().filter(|v| ids.contains(&v.check_id.as_str())).collect()
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        name: "closed inversion lists, l <= 8",
        budget_secs: 10.0,
        run: || only(&[tables::CLOSED_LIST], tables::check_tables(&upto(8))),
    },
    Criterion {
        number: 2,
        name: "appendix layer tables, l <= 8",
        budget_secs: 10.0,
        run: || only(&[tables::APPENDIX], tables::check_tables(&upto(8))),
    },
    Criterion {
        number: 3,
        name: "root-combinatorics statements, l <= 8",
        budget_secs: 60.0,
        run: || lemmas::check_lemmas(&upto(8)),
    },
    Criterion {
        number: 4,
        name: "z' conjugation and transport, l <= 7, 20 samples",
        budget_secs: 120.0,
        run: || only(&[transport::CHECK], transport::check_transport(&upto(7).with_trials(transport::MIN_SAMPLES))),
    },
    Criterion {
        number: 5,
        name: "closed form against matrix reduction, l <= 6, 10 points",
        budget_secs: 300.0,
        run: || generator_oracle::check_generators(&upto(6).with_trials(10)),
    },
    Criterion {
        number: 6,
        name: "closed form against rewriting engine, l <= 5",
        budget_secs: 600.0,
        run: || cross_engine::check_cross_engine(&upto(5)),
    },
    Criterion {
        number: 7,
        name: "invariance under N-conjugation, l <= 6, 10 points",
        budget_secs: 300.0,
        run: || invariance::check_invariance(&upto(6).with_trials(10)),
    },
    Criterion {
        number: 8,
        name: "factorization and commutation round trips, l <= 8",
        budget_secs: 60.0,
        run: || roundtrip::check_roundtrips(&upto(8)),
    },
    Criterion {
        number: 9,
        name: "half-plane certificate at tol 1e-9, l <= 10",
        budget_secs: 5.0,
        run: || halfplane::check_halfplane(&upto(10)),
    },
    Criterion {
        number: 10,
        name: "flipped T sign is caught at (4,3) in 10 trials",
        budget_secs: 60.0,
        run: || generator_oracle::check_canary(&TrialConfig::default().with_trials(10)),
    },
];

fn clip(s: String, n: usize) -> String {
    if s.chars().count() <= n {
        s
    } else {
        s.chars().take(n).collect::<String>() + " ..."
    }
}

fn main() -> ExitCode {
    let timed = !cfg!(debug_assertions);
    let mut red = Vec::new();
    for c in CRITERIA {
        let start = Instant::now();
        let verdicts = (c.run)();
        let secs = start.elapsed().as_secs_f64();
        let failing: Vec<&Verdict> = verdicts.iter().filter(|v| v.is_fail()).collect();
        let slow = timed && secs > c.budget_secs;
        let ok = !verdicts.is_empty() && failing.is_empty() && !slow;
        println!(
            "criterion {:>2} {}: {} ({} verdicts, {} failing, {:.2} s of {} s)",
            c.number,
            c.name,
            if ok { "PASS" } else { "FAIL" },
            verdicts.len(),
            failing.len(),
            secs,
            c.budget_secs
        );
        for v in failing.iter().take(5) {
            println!("    {}", clip(v.to_string(), 240));
        }
        if failing.len() > 5 {
            println!("    ... {} more", failing.len() - 5);
        }
        if slow {
            println!("    over the time budget");
        }
        if !ok {
            red.push(c.number);
        }
    }
    if red.is_empty() {
        println!("all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("failing criteria: {red:?}");
        ExitCode::FAILURE
    }
}
