use anyhow::Context;
use serde_json::json;
use slice_core::strata::{appendix_d, stratify, Strata};
use slice_core::weyl::{delta_sets, representative, s_matrix};

use crate::{emit, DebugFlags, Failure, Format, PointArgs};

fn names<'a>(roots: impl IntoIterator<Item = &'a slice_core::rootsys::Root>) -> Vec<String> {
    roots.into_iter().map(|r| r.to_string()).collect()
}

struct Row {
    root: String,
    d: usize,
    class: String,
    table: Option<i64>,
}

fn rows(st: &Strata) -> Vec<Row> {
    st.k_plus
        .iter()
        .map(|&r| Row {
            root: r.to_string(),
            d: st.d[&r],
            class: st.crc_of(r).map(|c| c.to_string()).unwrap_or_default(),
            table: appendix_d(&st.rep, r).ok(),
        })
        .collect()
}

pub fn run(p: PointArgs, dbg: DebugFlags) -> Result<(), Failure> {
    let rep = representative(p.l, p.lprime).context("class representative")?;
    let st = stratify(&rep);
    let ds = delta_sets(&rep).context("inversion sets")?;
    let rows = rows(&st);
    let mut out = String::new();
    match p.format {
        Format::Json => {
            let doc = json!({
                "schema": "slice-describe/1",
                "l": rep.l,
                "lprime": rep.lprime,
                "case": rep.case_id.to_string(),
                "m": rep.m,
                "p": rep.p,
                "s": rep.s.one_line(),
                "reflections": names(&rep.word),
                "D": st.big_d,
                "delta_s": names(&ds.delta_s),
                "delta_s_inv": names(&ds.delta_s_inv),
                "roots": rows.iter().map(|r| json!({
                    "root": r.root, "d": r.d, "class": r.class,
                    "table_d": r.table, "agrees": r.table == Some(r.d as i64),
                })).collect::<Vec<_>>(),
            });
            outln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        Format::Text => {
            outln!(out, "class (l={}, l'={}) case {}", rep.l, rep.lprime, rep.case_id);
            outln!(out, "m = {}, p = {}, D = {}", rep.m, rep.p, st.big_d);
            outln!(out, "s = {:?}", rep.s.one_line());
            outln!(out, "reflections: {}", names(&rep.word).join(" "));
            outln!(out, "Delta_s: {}", names(&ds.delta_s).join(" "));
            outln!(out, "Delta_s^-1: {}", names(&ds.delta_s_inv).join(" "));
            for k in 1..=st.big_d + 1 {
                outln!(out, "layer {k}: {}", names(st.layer(k)).join(" "));
            }
            outln!(out, "{:<10} {:>3} {:<5} {:>5}  agree", "root", "d", "class", "table");
            for r in &rows {
                let table = r.table.map_or("-".to_string(), |t| t.to_string());
                let agree = if r.table == Some(r.d as i64) { "yes" } else { "no" };
                outln!(out, "{:<10} {:>3} {:<5} {:>5}  {agree}", r.root, r.d, r.class, table);
            }
        }
    }
    emit(&out)?;
    if dbg.dump_matrices {
        let s = s_matrix(&rep).context("matrix of s")?;
        eprintln!("s =\n{s}");
    }
    Ok(())
}
