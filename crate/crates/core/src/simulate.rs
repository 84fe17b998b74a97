//! Seeded agent simulation of review sabotage under anonymous versus
//! identity-linked regimes.
//!
//! Each epoch every troll posts a malicious review with its current
//! probability p_m. Under identity linkage every malicious review is
//! attributable: the author takes a trust penalty of `trust.flagged_error`
//! and its p_m decays by exp(−η·penalty). Anonymous reviews are never
//! flagged, so p_m stays at p_m0.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::GovernanceConfig;
use crate::error::{Error, Result};
use crate::scoring::trust_update;

/// Expected epistemic loss n·p_m·q.
pub fn epistemic_loss(n: u64, p_m: f64, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_m) {
        return Err(Error::argument(format!("p_m = {p_m} outside [0, 1]")));
    }
    if !(q >= 0.0 && q.is_finite()) {
        return Err(Error::argument(format!("q = {q} must be finite and non-negative")));
    }
    Ok(n as f64 * p_m * q)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n_agents: u64,
    pub troll_fraction: f64,
    pub p_m0: f64,
    pub q: f64,
    pub eta: f64,
    pub epochs: usize,
    pub seed: u64,
    pub identity_penalties: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n_agents: 100,
            troll_fraction: 0.2,
            p_m0: 0.3,
            q: 1.0,
            eta: 1.0,
            epochs: 100,
            seed: 0,
            identity_penalties: true,
        }
    }
}

impl ScenarioConfig {
    pub fn check(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::argument(format!("{name} = {v} outside [0, 1]")))
            }
        };
        unit("troll_fraction", self.troll_fraction)?;
        unit("p_m0", self.p_m0)?;
        if !(self.q >= 0.0 && self.q.is_finite()) {
            return Err(Error::argument("q must be finite and non-negative"));
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(Error::argument("eta must be finite and non-negative"));
        }
        if self.epochs == 0 {
            return Err(Error::argument("epochs must be >= 1"));
        }
        if self.n_agents == 0 {
            return Err(Error::argument("n_agents must be >= 1"));
        }
        Ok(())
    }

    pub fn n_trolls(&self) -> u64 {
        (self.n_agents as f64 * self.troll_fraction).round() as u64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimMetrics {
    pub loss: Vec<f64>,
    /// Mean p_m over trolls, as used during each epoch.
    pub p_m: Vec<f64>,
    pub rep_honest: Vec<f64>,
    pub rep_troll: Vec<f64>,
    pub malicious_counts: Vec<u64>,
}

impl SimMetrics {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,loss,p_m,rep_honest,rep_troll\n");
        for t in 0..self.loss.len() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                t, self.loss[t], self.p_m[t], self.rep_honest[t], self.rep_troll[t]
            ));
        }
        out
    }
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

pub fn run_scenario(scenario: &ScenarioConfig, governance: &GovernanceConfig) -> Result<SimMetrics> {
    scenario.check()?;
    governance.validate()?;
    let n_trolls = scenario.n_trolls() as usize;
    let n_honest = scenario.n_agents as usize - n_trolls;
    let flag_probability = if scenario.identity_penalties { 1.0 } else { 0.0 };

    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    // p_m of troll i is p_m0 · decay[i]; an unflagged population then
    // averages to exactly p_m0.
    let mut decay = vec![1.0f64; n_trolls];
    let mut troll_trust = vec![0.0; n_trolls];
    let mut honest_trust = vec![0.0; n_honest];

    let mut metrics = SimMetrics {
        loss: Vec::with_capacity(scenario.epochs),
        p_m: Vec::with_capacity(scenario.epochs),
        rep_honest: Vec::with_capacity(scenario.epochs),
        rep_troll: Vec::with_capacity(scenario.epochs),
        malicious_counts: Vec::with_capacity(scenario.epochs),
    };

    for _ in 0..scenario.epochs {
        metrics.p_m.push(scenario.p_m0 * mean(&decay));
        let mut malicious = 0u64;
        for i in 0..n_trolls {
            // Both draws happen every time so paired runs share one stream.
            let posts = rng.gen::<f64>() < scenario.p_m0 * decay[i];
            let flagged = rng.gen::<f64>() < flag_probability;
            if !posts {
                continue;
            }
            malicious += 1;
            if flagged {
                troll_trust[i] = trust_update(troll_trust[i], 0, 1, 0, governance)?;
                let penalty = governance.trust.flagged_error;
                decay[i] *= (-scenario.eta * penalty).exp();
            }
        }
        if scenario.identity_penalties {
            for t in &mut honest_trust {
                *t = trust_update(*t, 1, 0, 0, governance)?;
            }
        }
        let frequency = malicious as f64 / scenario.n_agents as f64;
        metrics.loss.push(epistemic_loss(scenario.n_agents, frequency, scenario.q)?);
        metrics.malicious_counts.push(malicious);
        metrics.rep_honest.push(mean(&honest_trust));
        metrics.rep_troll.push(mean(&troll_trust));
    }
    Ok(metrics)
}

/// Run one scenario per seed, in parallel, preserving seed order.
pub fn run_sweep(base: &ScenarioConfig, seeds: &[u64], governance: &GovernanceConfig) -> Result<Vec<SimMetrics>> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(seeds.len().max(1));
    let chunk = seeds.len().div_ceil(threads).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|seed| {
                            let cfg = ScenarioConfig {
                                seed: *seed,
                                ..base.clone()
                            };
                            run_scenario(&cfg, governance)
                        })
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(seeds.len());
        for h in handles {
            out.extend(h.join().expect("simulation thread panicked")?);
        }
        Ok(out)
    })
}
