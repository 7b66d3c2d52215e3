//! Numerical checks of the spaced-product maximizers and of the zero-concurrence
//! neighbourhood around the interleaved Bell-pair state.

use serde::{Deserialize, Serialize};

use crate::concurrence::all_spacings;
use crate::cyclic::{embed, spaced_product, CsState};
use crate::error::{argument, Result};
use crate::sampler::{complex_gaussians, trial_rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub n: usize,
    pub k: usize,
    /// Largest change of the embedding under a one-step cyclic shift.
    pub shift_defect: f64,
    /// Subconcurrence at spacings `1..=n/2`.
    pub subconcurrences: Vec<f64>,
    /// Adjacent-pair maximum on `n/k` qubits.
    pub expected: f64,
}

impl Theorem1Report {
    pub fn concurrence(&self, spacing: usize) -> f64 {
        self.subconcurrences[spacing - 1].max(0.0)
    }

    /// Cyclic, `C_k` on target, every other spacing exactly zero after clamping.
    pub fn passes(&self, tol: f64) -> bool {
        self.shift_defect <= 1e-12
            && (self.concurrence(self.k) - self.expected).abs() <= tol
            && (1..=self.n / 2)
                .filter(|&j| j != self.k)
                .all(|j| self.concurrence(j) == 0.0)
    }
}

/// Builds the `k`-spaced product on `n` qubits and evaluates every spacing.
pub fn theorem1_check(n: usize, k: usize) -> Result<Theorem1Report> {
    let state = spaced_product(n, k)?;
    let v = embed(&state);
    let shift_defect = v.max_abs_diff(&v.shift_parties(1));
    let expected = match n / k {
        2 => 1.0,
        _ => 2.0 / 3.0,
    };
    Ok(Theorem1Report { n, k, shift_defect, subconcurrences: all_spacings(&state)?, expected })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub max_concurrence: f64,
    pub max_subconcurrence: f64,
    /// Trials with strictly positive spacing-1 concurrence.
    pub positive: usize,
}

/// Perturbs the interleaved Bell-pair state of 4 qubits by `ε` times random
/// CS states and records the spacing-1 concurrence.
pub fn theorem2_check(epsilon: f64, trials: usize, seed: u64) -> Result<Theorem2Report> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(argument(format!("epsilon {epsilon} must be a finite non-negative number")));
    }
    if trials == 0 {
        return Err(argument("need at least one trial"));
    }
    let base = spaced_product(4, 2)?;
    let subs: Vec<f64> = (0..trials)
        .map(|i| {
            let mut rng = trial_rng(seed, i as u64);
            let dir = CsState::normalized(4, complex_gaussians(&mut rng, base.amplitudes().len()))?;
            let amps = base
                .amplitudes()
                .iter()
                .zip(dir.amplitudes())
                .map(|(b, d)| b + d * epsilon)
                .collect();
            let s = CsState::normalized(4, amps)?;
            Ok(all_spacings(&s)?[0])
        })
        .collect::<Result<_>>()?;
    let max_sub = subs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Theorem2Report {
        epsilon,
        trials,
        seed,
        max_concurrence: max_sub.max(0.0),
        max_subconcurrence: max_sub,
        positive: subs.iter().filter(|&&s| s > 0.0).count(),
    })
}
