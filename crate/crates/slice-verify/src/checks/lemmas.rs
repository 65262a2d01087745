//! Root-combinatorics statements about the layers, classes and orbits,
//! each checked by enumeration.

use std::collections::BTreeSet;

use rayon::prelude::*;
use slice_core::rootsys::{sum, Root};
use slice_core::strata::{stratify, Crc, Strata};
use slice_core::weyl::{delta_sets, representative, special_orbits, SpecialOrbits};

use crate::config::TrialConfig;
use crate::verdict::{Counterexample, Params, Verdict};

type Outcome = Result<(), Counterexample>;

pub(crate) struct Ctx<'a> {
    st: &'a Strata,
    orbits: SpecialOrbits,
    delta_s: BTreeSet<Root>,
    delta_s_inv: BTreeSet<Root>,
}

fn cx(roots: &[Root], expected: &str, actual: impl Into<String>) -> Counterexample {
    Counterexample::new(roots.iter().map(|r| r.to_string()).collect(), expected, actual)
}

impl Ctx<'_> {
    fn d(&self, r: Root) -> Option<usize> {
        self.st.d_of(r)
    }

    fn class(&self, c: Crc) -> Vec<Root> {
        self.st.k_plus.iter().copied().filter(|&r| self.st.crc_of(r) == Some(c)).collect()
    }

    fn is_o(&self, r: Root) -> bool {
        self.st.crc_of(r).is_some_and(Crc::is_o)
    }

    /// Ordered pairs `(η_1, η_2)` of roots of K with `η_1 + η_2 = η`.
    fn splits(&self, eta: Root) -> Vec<(Root, Root)> {
        let (a, b) = eta.row_col();
        let lo = a.min(b);
        let hi = a.max(b);
        let mut out = Vec::new();
        for t in lo + 1..hi {
            let x = Root::from_position(a, t).expect("off-diagonal");
            let y = Root::from_position(t, b).expect("off-diagonal");
            if self.st.in_k(x) && self.st.in_k(y) {
                out.push((x, y));
                out.push((y, x));
            }
        }
        out
    }

    fn top(&self) -> usize {
        self.st.big_d + 1
    }
}

/// Within the column class, equal layers exactly when columns agree.
fn column_class_layers_follow_columns(c: &Ctx) -> Outcome {
    let roots = c.class(Crc::C);
    for &a in &roots {
        for &b in &roots {
            if (c.d(a) == c.d(b)) != (a.col() == b.col()) {
                return Err(cx(&[a, b], "same layer iff same column", format!("d = {:?}, {:?}", c.d(a), c.d(b))));
            }
        }
    }
    Ok(())
}

fn row_class_layers_follow_rows(c: &Ctx) -> Outcome {
    let roots = c.class(Crc::R);
    for &a in &roots {
        for &b in &roots {
            if (c.d(a) == c.d(b)) != (a.row() == b.row()) {
                return Err(cx(&[a, b], "same layer iff same row", format!("d = {:?}, {:?}", c.d(a), c.d(b))));
            }
        }
    }
    Ok(())
}

fn block_shift_stays_in(c: &Ctx, class: Crc) -> Outcome {
    for alpha in c.st.delta_z() {
        for beta in c.class(class) {
            if let Some(x) = sum(alpha, beta) {
                if c.d(x) != c.d(beta) || c.st.crc_of(x) != Some(class) {
                    return Err(cx(
                        &[alpha, beta, x],
                        &format!("sum in layer {:?}, class {class}", c.d(beta)),
                        format!("layer {:?}, class {:?}", c.d(x), c.st.crc_of(x)),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn block_never_meets_outer_class(c: &Ctx) -> Outcome {
    for alpha in c.st.delta_z() {
        for &eta in &c.st.k_plus {
            if c.is_o(eta) {
                if let Some(x) = sum(alpha, eta) {
                    return Err(cx(&[alpha, eta, x], "no sum", x.to_string()));
                }
            }
        }
    }
    Ok(())
}

/// Two roots of one layer add only as column class plus row class, into O3.
fn same_layer_sums_are_mixed(c: &Ctx) -> Outcome {
    for k in 1..=c.top() {
        let layer = c.st.layer(k);
        for &a in layer {
            for &b in layer {
                let Some(x) = sum(a, b) else { continue };
                let classes = [c.st.crc_of(a), c.st.crc_of(b)];
                let mixed = classes.contains(&Some(Crc::C)) && classes.contains(&Some(Crc::R));
                if !mixed || c.st.crc_of(x) != Some(Crc::O3) {
                    return Err(cx(&[a, b, x], "C + R = O3", format!("{classes:?} -> {:?}", c.st.crc_of(x))));
                }
            }
        }
    }
    Ok(())
}

fn unmixed_roots_do_not_split_in_layer(c: &Ctx) -> Outcome {
    for k in 2..=c.top() {
        for &eta in c.st.layer(k) {
            if c.is_o(eta) {
                continue;
            }
            for (x, y) in c.splits(eta) {
                if c.d(x) == Some(k) || c.d(y) == Some(k) {
                    return Err(cx(&[eta, x, y], "summands outside the layer", format!("d = {:?}, {:?}", c.d(x), c.d(y))));
                }
            }
        }
    }
    Ok(())
}

fn layer_split_forces_outer_class(c: &Ctx) -> Outcome {
    for k in 2..=c.top() {
        for &eta in c.st.layer(k) {
            for (x, y) in c.splits(eta) {
                if c.d(x) == Some(k) && !c.is_o(eta) {
                    return Err(cx(&[eta, x, y], "η in O", format!("{:?}", c.st.crc_of(eta))));
                }
            }
        }
    }
    Ok(())
}

fn special_orbits_split_across_inversions(c: &Ctx) -> Outcome {
    let o = &c.orbits;
    if c.st.rep.lprime >= 2 && o.o1 == o.o2 {
        return Err(cx(&[o.o1_seed, o.o2_seed], "distinct orbits", "equal orbits"));
    }
    let both: BTreeSet<Root> = c.delta_s.union(&c.delta_s_inv).copied().collect();
    for &eta in o.o1.iter().chain(o.o2.iter()) {
        let (a, b) = eta.row_col();
        for t in a + 1..b {
            let x = Root::from_position(a, t).expect("positive");
            let y = Root::from_position(t, b).expect("positive");
            let ok = both.contains(&x)
                && both.contains(&y)
                && !(c.delta_s.contains(&x) && c.delta_s.contains(&y))
                && !(c.delta_s_inv.contains(&x) && c.delta_s_inv.contains(&y));
            if !ok {
                return Err(cx(&[eta, x, y], "one summand in each inversion set", "not split"));
            }
        }
    }
    Ok(())
}

/// A layer-f sum built from a layer-f root cannot grow further inside layer f
/// from a root of layer ≥ f.
fn moved_sum_does_not_extend_in_layer(c: &Ctx) -> Outcome {
    for f in 2..=c.top() {
        for &eta in c.st.layer(f) {
            for (e1, e2) in c.splits(eta) {
                if c.d(e1) != Some(f) || c.d(e2) < Some(f) {
                    continue;
                }
                for &e3 in &c.st.k_plus {
                    if let Some(x) = sum(eta, e3) {
                        if c.d(x) == Some(f) && c.d(e3) >= Some(f) {
                            return Err(cx(&[eta, e1, e2, e3, x], "sum leaves layer or d(η_3) < f", format!("d(η_3) = {:?}", c.d(e3))));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn unmixed_roots_have_no_lower_pairs(c: &Ctx) -> Outcome {
    for k in 2..=c.top() {
        for &kappa in c.st.layer(k) {
            if !c.is_o(kappa) && !c.st.p_set(kappa).is_empty() {
                return Err(cx(&[kappa], "empty P", format!("{:?}", c.st.p_set(kappa))));
            }
        }
    }
    Ok(())
}

fn same_layer_pairs_only_for_o3(c: &Ctx) -> Outcome {
    for &kappa in &c.st.k_plus {
        if c.st.crc_of(kappa) != Some(Crc::O3) && !c.st.p_prime_set(kappa).is_empty() {
            return Err(cx(&[kappa], "empty P'", format!("{:?}", c.st.p_prime_set(kappa))));
        }
    }
    Ok(())
}

fn left_move_does_not_cascade(c: &Ctx) -> Outcome {
    for k in 2..=c.top() {
        let allowed: BTreeSet<Root> = (2..k)
            .flat_map(|j| c.st.layer(j).iter().copied())
            .chain(c.st.layer(k).iter().copied().filter(|&r| c.is_o(r)))
            .collect();
        for &eta in c.st.layer(k) {
            for (e1, e2) in c.splits(eta) {
                if c.d(e1) != Some(k) || !allowed.contains(&e2) {
                    continue;
                }
                for &e3 in &allowed {
                    if let Some(x) = sum(eta, e3) {
                        if c.d(x) == Some(k) {
                            return Err(cx(&[eta, e1, e2, e3, x], "sum outside layer k", format!("layer {k}")));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn lower_pair_roots_are_not_composite(c: &Ctx) -> Outcome {
    for k in 2..=c.top() {
        for &kappa in c.st.layer(k) {
            for (e1, e2) in c.st.p_set(kappa) {
                let Some(f) = c.d(e1) else { continue };
                if c.d(e2) != Some(k) || f >= k {
                    continue;
                }
                for (e3, e4) in c.splits(e1) {
                    let Some(fp) = c.d(e3) else { continue };
                    if (2..f).contains(&fp) && c.d(e4) == Some(k) {
                        return Err(cx(&[kappa, e1, e2, e3, e4], "η_1 ≠ η_3 + η_4", "equal"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn layer_differences_lie_in_special_orbits(c: &Ctx) -> Outcome {
    let orbits: BTreeSet<Root> = c.orbits.o1.union(&c.orbits.o2).copied().collect();
    for f in 2..=c.top() {
        for &eta in c.st.layer(f) {
            for (e1, e2) in c.splits(eta) {
                if c.d(e1) == Some(f) && !orbits.contains(&e2) {
                    return Err(cx(&[eta, e1, e2], "η_2 in O_1 ∪ O_2", "outside"));
                }
            }
        }
    }
    Ok(())
}

type Lemma = fn(&Ctx) -> Outcome;

pub(crate) const LEMMAS: &[(&str, Lemma)] = &[
    ("lemma-column-class-layers", column_class_layers_follow_columns),
    ("lemma-row-class-layers", row_class_layers_follow_rows),
    ("lemma-block-shift-column-class", |c| block_shift_stays_in(c, Crc::C)),
    ("lemma-block-shift-row-class", |c| block_shift_stays_in(c, Crc::R)),
    ("lemma-block-misses-outer-class", block_never_meets_outer_class),
    ("lemma-same-layer-sums", same_layer_sums_are_mixed),
    ("lemma-unmixed-no-layer-split", unmixed_roots_do_not_split_in_layer),
    ("lemma-layer-split-outer", layer_split_forces_outer_class),
    ("lemma-special-orbit-splits", special_orbits_split_across_inversions),
    ("lemma-no-same-layer-extension", moved_sum_does_not_extend_in_layer),
    ("lemma-unmixed-empty-p", unmixed_roots_have_no_lower_pairs),
    ("lemma-p-prime-only-o3", same_layer_pairs_only_for_o3),
    ("lemma-left-move-no-cascade", left_move_does_not_cascade),
    ("lemma-p-first-not-composite", lower_pair_roots_are_not_composite),
    ("lemma-layer-difference-orbits", layer_differences_lie_in_special_orbits),
];

fn params(cfg: &TrialConfig, l: usize, lp: usize) -> Params {
    Params { l, lprime: lp, trials: 1, seed: cfg.seed }
}

fn point_verdicts(cfg: &TrialConfig, l: usize, lp: usize) -> Vec<Verdict> {
    let rep = representative(l, lp).expect("valid point");
    let st = stratify(&rep);
    let p = params(cfg, l, lp);
    let sets = match delta_sets(&rep) {
        Ok(s) => s,
        Err(e) => return vec![Verdict::fail("setup", p, Counterexample::new(vec![], "inversion sets", e.to_string()))],
    };
    let orbits = match special_orbits(&rep) {
        Ok(o) => o,
        Err(e) => return vec![Verdict::fail("setup", p, Counterexample::new(vec![], "special orbits", e.to_string()))],
    };
    let ctx = Ctx { st: &st, orbits, delta_s: sets.delta_s, delta_s_inv: sets.delta_s_inv };
    LEMMAS.iter().map(|(id, f)| Verdict::from_result(id, p.clone(), f(&ctx))).collect()
}

pub fn lemma_ids() -> impl Iterator<Item = &'static str> {
    LEMMAS.iter().map(|(id, _)| *id)
}

pub fn check_lemmas(cfg: &TrialConfig) -> Vec<Verdict> {
    cfg.points().into_par_iter().flat_map_iter(|(l, lp)| point_verdicts(cfg, l, lp)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Statements with known counterexamples in the tested range.
    const REFUTED: [&str; 3] =
        ["lemma-special-orbit-splits", "lemma-layer-difference-orbits", "lemma-p-first-not-composite"];

    #[test]
    fn small_ranks_hold() {
        let v = check_lemmas(&TrialConfig::default().with_l_max(5));
        let bad: Vec<String> =
            v.iter().filter(|v| v.is_fail() && !REFUTED.contains(&v.check_id.as_str())).map(|v| v.to_string()).collect();
        assert!(bad.is_empty(), "{bad:#?}");
        assert_eq!(v.len(), 15 * LEMMAS.len());
    }

    #[test]
    fn layer_difference_counterexample_at_4_3() {
        let v = check_lemmas(&TrialConfig::default().with_l_max(4));
        let hit = v
            .iter()
            .find(|v| v.check_id == "lemma-layer-difference-orbits" && v.params.l == 4 && v.params.lprime == 3)
            .unwrap();
        let cx = hit.counterexample.as_ref().expect("fails");
        assert_eq!(cx.roots, ["a(1,3)", "a(3,3)", "a(1,2)"]);
    }

    #[test]
    fn special_orbit_split_holds_once_seeds_exist() {
        for v in check_lemmas(&TrialConfig::default().with_l_max(7)) {
            if v.check_id == "lemma-special-orbit-splits" {
                assert!(v.params.lprime <= 2 || !v.is_fail(), "{v}");
            }
        }
    }

    #[test]
    fn planted_violation_is_reported() {
        let rep = representative(4, 2).unwrap();
        let mut st = stratify(&rep);
        let c = st.k_plus.iter().copied().find(|&r| st.crc_of(r) == Some(Crc::C)).unwrap();
        st.d.insert(c, st.d[&c] + 1);
        let sets = delta_sets(&rep).unwrap();
        let ctx = Ctx { st: &st, orbits: special_orbits(&rep).unwrap(), delta_s: sets.delta_s, delta_s_inv: sets.delta_s_inv };
        assert!(column_class_layers_follow_columns(&ctx).is_err());
    }
}
