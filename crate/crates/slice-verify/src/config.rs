use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// How the torus outside the block is sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// `μ = 1`: `z'` is the identity off the block.
    #[default]
    DefaultRing,
    /// `μ` sampled from the value pool as well.
    StrictTorus,
}

/// Rationals `a/b` with `a, b ∈ [-max_abs, max_abs] \ {0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuePool {
    pub max_abs: i64,
}

impl Default for ValuePool {
    fn default() -> Self {
        ValuePool { max_abs: 9 }
    }
}

/// Which `l'` to visit for each `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LprimeRule {
    #[default]
    All,
    Only(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub l_min: usize,
    pub l_max: usize,
    pub lprime_rule: LprimeRule,
    pub trials: usize,
    pub seed: u64,
    pub value_pool: ValuePool,
    pub mode: Mode,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            l_min: 1,
            l_max: 6,
            lprime_rule: LprimeRule::All,
            trials: 10,
            seed: 0,
            value_pool: ValuePool::default(),
            mode: Mode::DefaultRing,
        }
    }
}

impl TrialConfig {
    pub fn with_l_max(mut self, l_max: usize) -> Self {
        self.l_max = l_max;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    /// Every `(l, l')` in range, `l'` ascending within `l`.
    pub fn points(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for l in self.l_min.max(1)..=self.l_max {
            match self.lprime_rule {
                LprimeRule::All => out.extend((1..=l).map(|lp| (l, lp))),
                LprimeRule::Only(lp) if lp <= l => out.push((l, lp)),
                LprimeRule::Only(_) => {}
            }
        }
        out
    }

    /// Generator for one trial; independent of scheduling order.
    pub fn rng(&self, check: &str, l: usize, lp: usize, trial: usize) -> ChaCha8Rng {
        let mut h = splitmix(self.seed);
        for b in check.bytes() {
            h = splitmix(h ^ b as u64);
        }
        for x in [l as u64, lp as u64, trial as u64] {
            h = splitmix(h ^ x);
        }
        ChaCha8Rng::seed_from_u64(h)
    }
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn rng_depends_on_every_coordinate() {
        let cfg = TrialConfig::default();
        let draw = |c: &str, l, lp, t| cfg.rng(c, l, lp, t).gen::<u64>();
        let base = draw("generator-oracle", 4, 3, 0);
        assert_eq!(base, draw("generator-oracle", 4, 3, 0));
        assert_ne!(base, draw("generator-oracle", 4, 3, 1));
        assert_ne!(base, draw("generator-oracle", 4, 2, 0));
        assert_ne!(base, draw("invariance", 4, 3, 0));
        assert_ne!(base, cfg.clone().with_seed(1).rng("generator-oracle", 4, 3, 0).gen::<u64>());
    }

    #[test]
    fn points_cover_all_lprime() {
        let cfg = TrialConfig::default().with_l_max(3);
        assert_eq!(cfg.points(), vec![(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]);
        let only = TrialConfig { lprime_rule: LprimeRule::Only(2), ..cfg };
        assert_eq!(only.points(), vec![(2, 2), (3, 2)]);
    }
}
