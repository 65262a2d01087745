use anyhow::Context;
use clap::ValueEnum;
use serde_json::json;
use slice_core::exactring::poly_to_json;
use slice_core::groupalg::{symbolic_z_prime, TForm};
use slice_core::invariants::{generators_with, FormulaVariant};
use slice_core::rearrange::{generic_input, run_pipeline, PipelineOptions};
use slice_core::strata::stratify;
use slice_core::weyl::representative;

use crate::{emit, DebugFlags, Failure, Format, InvariantArgs};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    PerRound,
    Cumulative,
    Printed,
}

impl From<Formula> for FormulaVariant {
    fn from(f: Formula) -> Self {
        match f {
            Formula::PerRound => FormulaVariant::PerRound,
            Formula::Cumulative => FormulaVariant::Corrected,
            Formula::Printed => FormulaVariant::Printed,
        }
    }
}

pub fn run(a: InvariantArgs, dbg: DebugFlags) -> Result<(), Failure> {
    let p = a.point;
    let rep = representative(p.l, p.lprime).context("class representative")?;
    let st = stratify(&rep);
    if dbg.dump_matrices {
        let zp = symbolic_z_prime(&st);
        eprintln!("z' =");
        for i in 0..zp.dim() {
            let row: Vec<String> = (0..zp.dim()).map(|j| zp.get(i, j).to_string()).collect();
            eprintln!("  [{}]", row.join(", "));
        }
    }
    if dbg.trace {
        for k in 2..=st.big_d + 1 {
            let opts = PipelineOptions { trace: true, ..Default::default() };
            let res = run_pipeline(&st, k, &generic_input(&st, k), &opts).context("rewriting engine")?;
            for (stage, w) in &res.trace {
                let factors: Vec<String> = w.factors.iter().map(|f| format!("X[{}]({})", f.root, f.coeff)).collect();
                eprintln!("k={k} {stage}: {}", factors.join(" "));
            }
        }
    }
    let gens = generators_with(&st, a.formula.into(), TForm::Signed).context("generators")?;
    let mut out = String::new();
    match p.format {
        Format::Json => {
            let records: Vec<_> = gens
                .iter()
                .map(|g| {
                    json!({
                        "kappa": g.kappa.to_string(),
                        "degree": g.degree(),
                        "terms": g.poly.num_terms(),
                        "poly": poly_to_json(&g.poly),
                    })
                })
                .collect();
            let doc = json!({
                "schema": "slice-invariants/1",
                "l": rep.l,
                "lprime": rep.lprime,
                "generators": records,
            });
            outln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        Format::Text => {
            outln!(out, "generators for (l={}, l'={}): {}", rep.l, rep.lprime, gens.len());
            for g in gens.iter() {
                outln!(out, "C[{}] (degree {}, {} terms) = {}", g.kappa, g.degree(), g.poly.num_terms(), g.poly);
            }
        }
    }
    emit(&out)
}
