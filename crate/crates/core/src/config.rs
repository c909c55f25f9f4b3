//! Tunables that the underlying bounds leave symbolic.

use serde::{Deserialize, Serialize};

/// Strategy used to find balanced separators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparatorProvider {
    /// Pick a BFS level whose removal balances the components. Roots are the
    /// far end of a double sweep plus a few random restarts; best candidate
    /// by (separator size, imbalance) wins. Falls back to an arbitrary
    /// n/3-subset (flagged degraded) when no level works, e.g. on cliques.
    BfsLayer,
    /// Remove highest-degree vertices until every component is small enough.
    DegreeGreedy,
}

impl std::str::FromStr for SeparatorProvider {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bfs-layer" => Ok(Self::BfsLayer),
            "degree-greedy" => Ok(Self::DegreeGreedy),
            other => Err(format!("unknown separator provider `{other}`")),
        }
    }
}

/// Which logarithm the net-size formula uses. The sources behind the sampling
/// bound state it both ways; we keep both and default to `ln(n/delta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NetLogForm {
    UniverseOverDelta,
    InvEpsDelta,
}

/// Algorithm configuration.
///
/// `d` is the *assumed* distance VC-dimension. Answers never depend on the
/// assumption being right; only running time (and the group/trace guards,
/// which trigger an automatic retry with `d + 1`) do.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgoConfig {
    /// Assumed distance VC-dimension of the input.
    pub d: u32,
    /// Universal constant `c > 2` in the block-exponent formula.
    pub c_univ: f64,
    /// Block exponent override; `None` derives `1 / (c(d+1) + 2^-(d+1) - 1)`.
    pub eta: Option<f64>,
    /// Multiplier in the epsilon-net sample-size formula.
    pub c_net: f64,
    /// Net failure probability.
    pub delta: f64,
    /// Logarithm form in the net-size formula.
    pub net_log_form: NetLogForm,
    /// Explicit net size; overrides the formula when set.
    pub net_size: Option<usize>,
    /// Separator-size exponent (1/2 for minor-closed inputs).
    pub beta: f64,
    /// Division size; `None` selects `ceil(n^{eps_d/(2-beta)})`.
    pub r: Option<usize>,
    /// Minimum admissible division size.
    pub r_min: usize,
    /// RNG seed; every random choice in the library derives from it.
    pub seed: u64,
    /// Refuse to materialise neighbourhood hypergraphs above this order.
    pub explicit_cap: usize,
    /// Cross-check expensive intermediates against brute force (slow).
    pub verify: bool,
    /// Separator strategy.
    pub provider: SeparatorProvider,
    /// Blocks larger than this use sampled candidate pairs in the
    /// reweighting path construction (roughly sqrt of the pair count per
    /// round) instead of a full scan.
    pub cw_sample_above: Option<usize>,
    /// Work cap for exact shatter searches.
    pub vc_budget: u64,
    /// Slack multiplier applied to Sauer-style group and trace caps.
    pub sauer_slack: f64,
    /// Total stab positions kept in the level cache before eviction.
    pub level_cache_positions: usize,
    /// Retries with `d + 1` after a group/trace cap fires.
    pub d_retries: u32,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        Self {
            d: 4,
            c_univ: 4.0,
            eta: None,
            c_net: 8.0,
            delta: 0.01,
            net_log_form: NetLogForm::UniverseOverDelta,
            net_size: None,
            beta: 0.5,
            r: None,
            r_min: 16,
            seed: 0,
            explicit_cap: 32_768,
            verify: false,
            provider: SeparatorProvider::BfsLayer,
            cw_sample_above: Some(128),
            vc_budget: 100_000_000,
            sauer_slack: 2.0,
            level_cache_positions: 300_000_000,
            d_retries: 2,
        }
    }
}

impl AlgoConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_d(mut self, d: u32) -> Self {
        self.d = d;
        self
    }

    /// Block exponent `eta`.
    pub fn block_exponent(&self) -> f64 {
        match self.eta {
            Some(e) => e,
            None => {
                let d = self.d as f64;
                1.0 / (self.c_univ * (d + 1.0) + 0.5f64.powi(self.d as i32 + 1) - 1.0)
            }
        }
    }

    /// Derived exponent `eps_d = eta / 2^{d+1}`.
    pub fn epsilon_d(&self) -> f64 {
        self.block_exponent() * 0.5f64.powi(self.d as i32 + 1)
    }

    /// Block size `ceil(n^eta)` used when partitioning a universe of size n.
    pub fn block_size(&self, n: usize) -> usize {
        if n == 0 {
            return 1;
        }
        let b = (n as f64).powf(self.block_exponent()).ceil() as usize;
        b.clamp(1, n)
    }

    /// Division size: explicit override or `ceil(n^{eps_d/(2-beta)})`,
    /// clamped to `[r_min, n]`.
    pub fn division_size(&self, n: usize) -> usize {
        let r = match self.r {
            Some(r) => r,
            None => (n as f64).powf(self.epsilon_d() / (2.0 - self.beta)).ceil() as usize,
        };
        r.clamp(self.r_min, n.max(self.r_min))
    }

    /// Default net density `eps = n^{-eps_d}`.
    pub fn net_epsilon(&self, n: usize) -> f64 {
        (n.max(2) as f64).powf(-self.epsilon_d())
    }

    /// Net sample size `ceil(c_net * d * (1/eps) * log)`, clamped to n.
    pub fn net_sample_size(&self, n: usize, eps: f64) -> usize {
        if let Some(s) = self.net_size {
            return s.min(n);
        }
        let log = match self.net_log_form {
            NetLogForm::UniverseOverDelta => (n as f64 / self.delta).ln(),
            NetLogForm::InvEpsDelta => (1.0 / (eps * self.delta)).ln(),
        };
        let s = (self.c_net * self.d as f64 * (1.0 / eps) * log.max(1.0)).ceil() as usize;
        s.clamp(1, n)
    }

    /// Sauer-Shelah bound `sum_{i<=d} C(s, i)` with the configured slack.
    pub fn group_cap(&self, s: usize) -> f64 {
        self.sauer_slack * sauer_bound(s, self.d)
    }
}

/// `sum_{i<=d} C(s, i)` as f64 (saturating, monotone in both arguments).
pub fn sauer_bound(s: usize, d: u32) -> f64 {
    let mut total = 1.0f64; // C(s, 0)
    let mut binom = 1.0f64;
    for i in 1..=d as usize {
        if i > s {
            break;
        }
        binom *= (s + 1 - i) as f64 / i as f64;
        total += binom;
        if total > 1e300 {
            return 1e300;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_exponents_are_consistent() {
        let cfg = AlgoConfig::default();
        // eta / 2^{d+1} must equal 1 / (2^{d+1} [c(d+1) - 1] + 1).
        let d = cfg.d as f64;
        let pow = 2f64.powi(cfg.d as i32 + 1);
        let direct = 1.0 / (pow * (cfg.c_univ * (d + 1.0) - 1.0) + 1.0);
        assert!((cfg.epsilon_d() - direct).abs() < 1e-12);
        assert!(cfg.block_exponent() > 0.0 && cfg.block_exponent() <= 1.0);
    }

    #[test]
    fn sauer_bound_small_cases() {
        assert_eq!(sauer_bound(3, 2) as u64, 7); // 1 + 3 + 3
        assert_eq!(sauer_bound(4, 4) as u64, 16); // full power set
        assert_eq!(sauer_bound(10, 1) as u64, 11);
    }

    #[test]
    fn division_size_clamps() {
        let cfg = AlgoConfig::default();
        assert!(cfg.division_size(10_000) >= cfg.r_min);
        let cfg = AlgoConfig {
            r: Some(4),
            ..AlgoConfig::default()
        };
        assert_eq!(cfg.division_size(10_000), cfg.r_min);
    }
}
