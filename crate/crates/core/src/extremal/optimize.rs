//! Grid-then-refine maximization of branch combinations over real
//! non-negative coefficients on the unit sphere.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Branch;
use crate::csx::{csx4_branches_real, csx5_branches_real};
use crate::error::{argument, Result};

/// A linear functional of the four branch values `(1μ, 1ν, 2μ, 2ν)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub n: usize,
    pub weights: [f64; 4],
}

impl Objective {
    pub fn new(n: usize, weights: [f64; 4]) -> Result<Self> {
        if n != 4 && n != 5 {
            return Err(argument(format!("closed forms exist for 4 and 5 qubits, not {n}")));
        }
        if weights.iter().any(|w| !w.is_finite()) || weights.iter().all(|&w| w == 0.0) {
            return Err(argument("objective weights must be finite and not all zero"));
        }
        Ok(Self { n, weights })
    }

    pub fn branch(n: usize, b: Branch) -> Result<Self> {
        let mut w = [0.0; 4];
        w[b.index()] = 1.0;
        Self::new(n, w)
    }

    /// Value at real coefficients `(a, c, d, f|g)` (normalized internally).
    pub fn eval(&self, k: [f64; 4]) -> f64 {
        let b = match self.n {
            4 => csx4_branches_real(k[0], k[1], k[2], k[3]),
            _ => csx5_branches_real(k[0], k[1], k[2], k[3]),
        };
        b.as_array().iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    fn at(&self, t: [f64; 3]) -> f64 {
        self.eval(chart(t))
    }
}

/// `(cos t₁, sin t₁ cos t₂, sin t₁ sin t₂ cos t₃, sin t₁ sin t₂ sin t₃)`.
fn chart(t: [f64; 3]) -> [f64; 4] {
    let (s1, c1) = t[0].sin_cos();
    let (s2, c2) = t[1].sin_cos();
    let (s3, c3) = t[2].sin_cos();
    [c1, s1 * c2, s1 * s2 * c3, s1 * s2 * s3]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOptions {
    /// Grid points per angle; at least 200.
    pub grid: usize,
    /// Number of grid seeds handed to local refinement.
    pub seeds: usize,
    /// Angular tolerance of the refinement.
    pub tol: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self { grid: 200, seeds: 12, tol: 1e-10 }
    }
}

/// Result of a maximization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Maximum {
    pub value: f64,
    pub angles: [f64; 3],
    /// Normalized `(a, c, d, f)` or `(a, c, d, g)`.
    pub coefficients: [f64; 4],
}

fn clamp3(t: [f64; 3]) -> [f64; 3] {
    t.map(|x| x.clamp(0.0, FRAC_PI_2))
}

/// Maximizes `obj` by a dense angle grid followed by local refinement of the best cells.
pub fn maximize(obj: &Objective, opts: &OptimizeOptions) -> Result<Maximum> {
    if opts.grid < 200 {
        return Err(argument(format!("grid {} is below 200 points per angle", opts.grid)));
    }
    if opts.seeds == 0 || !(opts.tol > 0.0) {
        return Err(argument("need at least one seed and a positive tolerance"));
    }
    let g = opts.grid;
    let h = FRAC_PI_2 / (g - 1) as f64;
    let node = |i: usize| i as f64 * h;

    // best few cells of each slab, merged
    let keep = opts.seeds;
    let mut cands: Vec<(f64, [f64; 3])> = (0..g)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut top: Vec<(f64, [f64; 3])> = Vec::with_capacity(keep + 1);
            for j in 0..g {
                for k in 0..g {
                    let t = [node(i), node(j), node(k)];
                    let v = obj.at(t);
                    if top.len() < keep || v > top[top.len() - 1].0 {
                        let pos = top.partition_point(|c| c.0 >= v);
                        top.insert(pos, (v, t));
                        top.truncate(keep);
                    }
                }
            }
            top
        })
        .collect();
    cands.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.partial_cmp(&b.1).expect("finite")));

    // spread seeds: skip candidates within two cells of an earlier seed
    let mut seeds: Vec<[f64; 3]> = Vec::new();
    for (_, t) in &cands {
        if seeds.len() >= opts.seeds {
            break;
        }
        if seeds.iter().all(|s| s.iter().zip(t).any(|(a, b)| (a - b).abs() > 2.5 * h)) {
            seeds.push(*t);
        }
    }

    let refined: Vec<(f64, [f64; 3])> = seeds
        .par_iter()
        .map(|&s| refine(obj, s, h, opts.tol))
        .collect();
    let (value, angles) = refined
        .into_iter()
        .chain(cands.first().copied())
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one candidate");
    let c = chart(angles);
    Ok(Maximum { value, angles, coefficients: c })
}

fn refine(obj: &Objective, start: [f64; 3], h: f64, tol: f64) -> (f64, [f64; 3]) {
    let (mut v, mut t) = nelder_mead(obj, start, h, tol);
    // coordinate polish with shrinking brackets
    let mut width = h;
    while width > tol {
        let before = v;
        for axis in 0..3 {
            let lo = (t[axis] - width).max(0.0);
            let hi = (t[axis] + width).min(FRAC_PI_2);
            let f = |x: f64| {
                let mut u = t;
                u[axis] = x;
                obj.at(u)
            };
            let x = golden_argmax(&f, lo, hi, tol);
            let fx = f(x);
            if fx > v {
                v = fx;
                t[axis] = x;
            }
        }
        if v - before < 1e-15 {
            width *= 0.25;
        }
    }
    (v, t)
}

fn golden_argmax(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (ea, eb) = (a, b);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    // endpoints matter on the box faces
    [ea, eb, mid]
        .into_iter()
        .max_by(|x, y| f(*x).total_cmp(&f(*y)))
        .expect("three candidates")
}

fn nelder_mead(obj: &Objective, start: [f64; 3], size: f64, tol: f64) -> (f64, [f64; 3]) {
    let f = |t: [f64; 3]| -obj.at(clamp3(t));
    let mut simplex: Vec<([f64; 3], f64)> = Vec::with_capacity(4);
    simplex.push((start, f(start)));
    for axis in 0..3 {
        let mut t = start;
        t[axis] = if t[axis] + size <= FRAC_PI_2 { t[axis] + size } else { t[axis] - size };
        simplex.push((t, f(t)));
    }
    for _ in 0..5000 {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex
            .iter()
            .skip(1)
            .map(|(t, _)| t.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread < tol {
            break;
        }
        let mut centroid = [0.0; 3];
        for (t, _) in &simplex[..3] {
            for i in 0..3 {
                centroid[i] += t[i] / 3.0;
            }
        }
        let worst = simplex[3];
        let along = |s: f64| -> [f64; 3] {
            let mut p = [0.0; 3];
            for i in 0..3 {
                p[i] = centroid[i] + s * (worst.0[i] - centroid[i]);
            }
            clamp3(p)
        };
        let r = along(-1.0);
        let fr = f(r);
        if fr < simplex[0].1 {
            let e = along(-2.0);
            let fe = f(e);
            simplex[3] = if fe < fr { (e, fe) } else { (r, fr) };
        } else if fr < simplex[2].1 {
            simplex[3] = (r, fr);
        } else {
            let c = if fr < worst.1 { along(-0.5) } else { along(0.5) };
            let fc = f(c);
            if fc < worst.1.min(fr) {
                simplex[3] = (c, fc);
            } else {
                let best = simplex[0].0;
                for item in simplex.iter_mut().skip(1) {
                    let mut p = [0.0; 3];
                    for i in 0..3 {
                        p[i] = best[i] + 0.5 * (item.0[i] - best[i]);
                    }
                    *item = (p, f(p));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (t, v) = simplex[0];
    (-v, clamp3(t))
}

/// Maximum of one branch for `n` qubits.
pub fn maximize_branch(branch: Branch, n: usize, opts: &OptimizeOptions) -> Result<Maximum> {
    maximize(&Objective::branch(n, branch)?, opts)
}

/// A linear inequality on 5-qubit branch values and its numerical check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearBound {
    pub label: String,
    /// Weights on `(1μ, 1ν, 2μ, 2ν)`.
    pub weights: [f64; 4],
    pub bound: f64,
    pub maximum: Maximum,
    /// `maximum.value ≤ bound + 10⁻⁶`.
    pub holds: bool,
}

/// Slack on the linear bounds.
pub const LINEAR_BOUND_SLACK: f64 = 1e-6;

/// The four linear constraints on real 5-qubit branch values, each checked by maximization.
pub fn linear_bounds_5q(opts: &OptimizeOptions) -> Result<Vec<LinearBound>> {
    let specs: [(&str, [f64; 4], f64); 4] = [
        ("1nu + 2nu <= 2/5", [0.0, 1.0, 0.0, 1.0], 0.4),
        ("2nu + 1mu <= 47/100", [1.0, 0.0, 0.0, 1.0], 0.47),
        ("2nu + 2*1mu <= 4/5", [2.0, 0.0, 0.0, 1.0], 0.8),
        ("1nu <= 0.366", [0.0, 1.0, 0.0, 0.0], 0.366),
    ];
    specs
        .into_iter()
        .map(|(label, weights, bound)| {
            let maximum = maximize(&Objective::new(5, weights)?, opts)?;
            let holds = maximum.value <= bound + LINEAR_BOUND_SLACK;
            Ok(LinearBound { label: label.to_string(), weights, bound, maximum, holds })
        })
        .collect()
}
