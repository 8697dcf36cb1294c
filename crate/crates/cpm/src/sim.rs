//! Parallel Monte Carlo driver; trial `t` always uses stream `t`, so the
//! output does not depend on the thread count.

use cpm_core::graphsim::{sample_dmax, summarize, GraphSimConfig, GraphTrialResult};
use rayon::prelude::*;

pub fn run_trials_parallel(config: &GraphSimConfig) -> cpm_core::Result<Vec<f64>> {
    config.validate()?;
    (0..config.trials)
        .into_par_iter()
        .map(|t| sample_dmax(config, t))
        .collect()
}

pub fn deviation_experiment_parallel(config: &GraphSimConfig) -> cpm_core::Result<GraphTrialResult> {
    summarize(config, run_trials_parallel(config)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cpm_core::graphsim::{run_trials, WeightSampler};

    #[test]
    fn parallel_matches_sequential() {
        let c = GraphSimConfig::with_kappa(
            300,
            2.0,
            WeightSampler::Gamma { shape: 2.0, scale: 0.5 },
            vec![0.5],
            64,
            99,
        );
        assert_eq!(run_trials_parallel(&c).unwrap(), run_trials(&c).unwrap());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let single = pool.install(|| run_trials_parallel(&c).unwrap());
        assert_eq!(single, run_trials(&c).unwrap());
    }
}
