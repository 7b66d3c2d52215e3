//! Seeded random CS and CSX states and scatter datasets of their subconcurrences.
//!
//! Trial `i` of seed `s` draws from ChaCha8 seeded with `s` on stream `i`, so
//! every trial is reproducible on its own and parallel runs are order-free.
//! Orbit amplitudes are independent standard complex Gaussians, normalized.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concurrence::{spacing_subconcurrences, ConcurrencePoint};
use crate::csx::csx_branches;
use crate::cyclic::{necklaces, CsState};
use crate::error::{argument, validation, Error, Result};
use crate::linalg::C64;

/// Largest allowed gap between closed-form and generic subconcurrences.
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subspace {
    Cs,
    Csx,
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Cs => "cs",
            Self::Csx => "csx",
        })
    }
}

impl FromStr for Subspace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cs" => Ok(Self::Cs),
            "csx" => Ok(Self::Csx),
            _ => Err(argument(format!("unknown subspace '{s}' (use cs or csx)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Concurrence,
    Subconcurrence,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Concurrence => "concurrence",
            Self::Subconcurrence => "subconcurrence",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "concurrence" => Ok(Self::Concurrence),
            "subconcurrence" => Ok(Self::Subconcurrence),
            _ => Err(argument(format!("unknown mode '{s}' (use concurrence or subconcurrence)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SampleSpec {
    pub n: usize,
    pub subspace: Subspace,
    pub count: usize,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(n: usize, subspace: Subspace, count: usize, seed: u64) -> Result<Self> {
        if n != 4 && n != 5 {
            return Err(argument(format!("sampling supports 4 and 5 qubits, not {n}")));
        }
        if count == 0 {
            return Err(argument("sample count must be at least 1"));
        }
        Ok(Self { n, subspace, count, seed })
    }
}

/// Generator for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `len` independent standard complex Gaussians (unit variance per component).
pub fn complex_gaussians(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    (0..len)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

/// Random state of `n` qubits; odd orbits stay empty for [`Subspace::Csx`].
pub fn random_cs(n: usize, subspace: Subspace, rng: &mut ChaCha8Rng) -> Result<CsState> {
    let orbits = necklaces(n)?;
    let mut amps = complex_gaussians(rng, orbits.len());
    if subspace == Subspace::Csx {
        for (z, o) in amps.iter_mut().zip(&orbits) {
            if !o.is_even() {
                *z = C64::new(0.0, 0.0);
            }
        }
    }
    CsState::normalized(n, amps)
}

/// Trial `index` of `spec`.
pub fn random_state(spec: &SampleSpec, index: usize) -> Result<CsState> {
    if index >= spec.count {
        return Err(argument(format!("index {index} beyond count {}", spec.count)));
    }
    random_cs(spec.n, spec.subspace, &mut trial_rng(spec.seed, index as u64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterDataset {
    pub spec: SampleSpec,
    pub mode: Mode,
    pub points: Vec<ConcurrencePoint>,
}

/// Spacing-1 and spacing-2 values of one state.
///
/// Even-weight states use the closed forms, checked against the generic route.
pub fn state_point(state: &CsState, subspace: Subspace) -> Result<ConcurrencePoint> {
    let generic = spacing_subconcurrences(state)?;
    if subspace == Subspace::Cs {
        return Ok(generic);
    }
    let closed = csx_branches(state)?.point();
    let gap = (closed.s1 - generic.s1).abs().max((closed.s2 - generic.s2).abs());
    if gap > ORACLE_TOL {
        return Err(validation(format!(
            "closed-form-oracle: closed forms differ from the generic route by {gap:e}"
        )));
    }
    Ok(closed)
}

/// Draws `spec.count` states in parallel and evaluates each.
pub fn scatter(spec: &SampleSpec, mode: Mode) -> Result<ScatterDataset> {
    let points: Vec<ConcurrencePoint> = (0..spec.count)
        .into_par_iter()
        .map(|i| {
            let p = state_point(&random_state(spec, i)?, spec.subspace)?;
            Ok(match mode {
                Mode::Concurrence => p.clamped(),
                Mode::Subconcurrence => p,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ScatterDataset { spec: *spec, mode, points })
}
