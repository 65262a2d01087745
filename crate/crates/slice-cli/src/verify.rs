use clap::{Args, ValueEnum};
use serde_json::json;
use slice_verify::{run_suite, Mode, Status, Suite, TrialConfig};

use crate::{emit, DebugFlags, Failure, Format};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteArg {
    Lemmas,
    #[value(name = "prop58")]
    Generators,
    Invariance,
    Appendix,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Default,
    Strict,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 1)]
    l_min: usize,
    #[arg(long, default_value_t = 4)]
    l_max: usize,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Default)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Leave out per-check timings so that reports compare byte for byte.
    #[arg(long)]
    no_timings: bool,
}

pub fn run(a: VerifyArgs, dbg: DebugFlags) -> Result<(), Failure> {
    if a.l_min == 0 || a.l_min > a.l_max {
        return Err(Failure::Usage(format!("need 1 <= --l-min <= --l-max, got {}..{}", a.l_min, a.l_max)));
    }
    if a.trials == 0 {
        return Err(Failure::Usage("--trials must be positive".into()));
    }
    let suite = match a.suite {
        SuiteArg::Lemmas => Suite::Lemmas,
        SuiteArg::Generators => Suite::Generators,
        SuiteArg::Invariance => Suite::Invariance,
        SuiteArg::Appendix => Suite::Appendix,
        SuiteArg::All => Suite::All,
    };
    let cfg = TrialConfig {
        l_min: a.l_min,
        l_max: a.l_max,
        trials: a.trials,
        seed: a.seed,
        mode: match a.mode {
            ModeArg::Default => Mode::DefaultRing,
            ModeArg::Strict => Mode::StrictTorus,
        },
        ..TrialConfig::default()
    };
    let mut report = run_suite(suite, &cfg);
    if a.no_timings {
        report.timings.clear();
    }
    let mut out = String::new();
    match a.format {
        Format::Json => {
            let doc = json!({
                "schema": "slice-verify/1",
                "config": cfg,
                "verdicts": report.verdicts,
                "timings": report.timings,
            });
            outln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        Format::Text => {
            for v in &report.verdicts {
                if dbg.trace || v.status != Status::Pass {
                    outln!(out, "{v}");
                }
            }
            for t in &report.timings {
                outln!(out, "time {:<18} {:>9.3} s", t.check_id, t.seconds);
            }
            outln!(out, 
                "{} pass, {} fail, {} report-only",
                report.count(Status::Pass),
                report.count(Status::Fail),
                report.count(Status::ReportOnly)
            );
        }
    }
    emit(&out)?;
    if report.has_failures() {
        Err(Failure::Verification)
    } else {
        Ok(())
    }
}
