//! `verify`: oracle equivalence and invariants, one line per check.

use csconc::concurrence::{pair_rdm, spacing_subconcurrences, wootters_spectrum};
use csconc::csx::{csx4_branches, csx5_branches, csx_branches, Csx4Coeffs, Csx5Coeffs};
use csconc::cyclic::{embed, relabel, Relabeling};
use csconc::extremal::{theorem1_check, theorem2_check};
use csconc::linalg::partial_trace;
use csconc::sampler::{random_cs, trial_rng, Subspace};

use crate::Failure;

struct Check {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn states(n: usize, sub: Subspace, count: usize, seed: u64) -> csconc::Result<Vec<csconc::CsState>> {
    (0..count as u64).map(|i| random_cs(n, sub, &mut trial_rng(seed, i))).collect()
}

fn closed_form_oracle(count: usize, seed: u64) -> csconc::Result<Check> {
    let mut worst = 0.0f64;
    for n in [4, 5] {
        for s in states(n, Subspace::Csx, count, seed)? {
            let c = csx_branches(&s)?.concurrences();
            let g = spacing_subconcurrences(&s)?.clamped();
            worst = worst.max((c.s1 - g.s1).abs()).max((c.s2 - g.s2).abs());
        }
    }
    Ok(Check { name: "closed-form-oracle", ok: worst <= 1e-9, detail: format!("max gap {worst:.2e}") })
}

fn shift_invariance(count: usize, seed: u64) -> csconc::Result<Check> {
    let mut worst = 0.0f64;
    for n in 2..=6 {
        for s in states(n, Subspace::Cs, count, seed)? {
            let v = embed(&s);
            worst = worst.max(v.max_abs_diff(&v.shift_parties(1)));
        }
    }
    Ok(Check { name: "shift-invariance", ok: worst <= 1e-12, detail: format!("max defect {worst:.2e}") })
}

fn spacing_symmetry(count: usize, seed: u64) -> csconc::Result<Check> {
    let mut worst = 0.0f64;
    for n in 4..=6 {
        for s in states(n, Subspace::Cs, count, seed)? {
            let v = embed(&s);
            for k in 1..=n / 2 {
                let base = pair_rdm(&s, k)?;
                for i in 1..n {
                    worst = worst.max(partial_trace(&v, &[i, (i + k) % n])?.max_abs_diff(&base));
                }
            }
        }
    }
    Ok(Check { name: "spacing-symmetry", ok: worst <= 1e-12, detail: format!("max gap {worst:.2e}") })
}

fn relabel_swap(count: usize, seed: u64) -> csconc::Result<Check> {
    let r = Relabeling::new(5, 2)?;
    let mut worst = 0.0f64;
    for s in states(5, Subspace::Cs, count, seed)? {
        let p = spacing_subconcurrences(&s)?;
        let q = spacing_subconcurrences(&relabel(&s, &r)?)?;
        worst = worst.max((p.s1 - q.s2).abs()).max((p.s2 - q.s1).abs());
    }
    Ok(Check { name: "relabel-swap", ok: worst <= 1e-10, detail: format!("n=5, m=2, max gap {worst:.2e}") })
}

fn phase_monotonicity(count: usize, seed: u64) -> csconc::Result<Check> {
    let mut worst = f64::NEG_INFINITY;
    for n in [4, 5] {
        for s in states(n, Subspace::Csx, count, seed)? {
            let (b, m) = if n == 4 {
                let k = Csx4Coeffs::from_state(&s)?;
                (csx4_branches(&k), csx4_branches(&k.moduli()))
            } else {
                let k = Csx5Coeffs::from_state(&s)?;
                (csx5_branches(&k), csx5_branches(&k.moduli()))
            };
            for (x, y) in b.as_array().iter().zip(m.as_array()) {
                worst = worst.max(x - y);
            }
        }
    }
    Ok(Check {
        name: "phase-monotonicity",
        ok: worst <= 1e-12,
        detail: format!("largest drop from zeroing phases {worst:.2e}"),
    })
}

fn cd_swap(count: usize, seed: u64) -> csconc::Result<Check> {
    let mut worst = 0.0f64;
    for s in states(5, Subspace::Csx, count, seed)? {
        let k = Csx5Coeffs::from_state(&s)?;
        let (b, t) = (csx5_branches(&k), csx5_branches(&k.swap_cd()));
        let [a0, a1, a2, a3] = b.as_array();
        let [b0, b1, b2, b3] = t.as_array();
        for (x, y) in [(a0, b2), (a1, b3), (a2, b0), (a3, b1)] {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(Check { name: "cd-swap", ok: worst <= 1e-14, detail: format!("max gap {worst:.2e}") })
}

fn wootters_range(count: usize, seed: u64) -> csconc::Result<Check> {
    let mut bad = 0usize;
    for n in [4, 5, 6] {
        for s in states(n, Subspace::Cs, count.min(2000), seed)? {
            for k in 1..=n / 2 {
                let w = wootters_spectrum(&pair_rdm(&s, k)?)?;
                let sub = w.subconcurrence();
                let ordered = w.lambdas.windows(2).all(|p| p[0] >= p[1]);
                if !ordered || w.lambdas[3] < 0.0 || !(-1.0..=1.0).contains(&sub) {
                    bad += 1;
                }
            }
        }
    }
    Ok(Check { name: "wootters-range", ok: bad == 0, detail: format!("{bad} spectra out of range") })
}

fn theorem1() -> csconc::Result<Check> {
    let mut detail = Vec::new();
    let mut ok = true;
    for (n, k) in [(4, 2), (6, 2), (6, 3)] {
        let r = theorem1_check(n, k)?;
        ok &= r.passes(1e-10);
        detail.push(format!("({n},{k}) C_k {:.10}", r.concurrence(k)));
    }
    Ok(Check { name: "theorem1", ok, detail: detail.join(", ") })
}

fn theorem2(seed: u64) -> csconc::Result<Check> {
    let r = theorem2_check(1e-3, 1000, seed)?;
    Ok(Check {
        name: "theorem2",
        ok: r.positive == 0 && r.max_concurrence == 0.0,
        detail: format!("eps 1e-3, 1000 trials, max subconcurrence {:.6}", r.max_subconcurrence),
    })
}

pub(crate) fn run(count: usize, seed: u64) -> Result<(), Failure> {
    if count == 0 {
        return Err(Failure::usage("--count must be positive"));
    }
    let small = count.min(500);
    let checks = [
        closed_form_oracle(count, seed)?,
        shift_invariance(small, seed)?,
        spacing_symmetry(small, seed)?,
        relabel_swap(count, seed)?,
        phase_monotonicity(count, seed)?,
        cd_swap(count, seed)?,
        wootters_range(count, seed)?,
        theorem1()?,
        theorem2(seed)?,
    ];
    for c in &checks {
        println!("{} {}: {}", if c.ok { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.ok).map(|c| c.name).collect();
    match failed.first() {
        None => Ok(()),
        Some(first) => Err(Failure::check(first, format!("{} check(s) failed: {}", failed.len(), failed.join(", ")))),
    }
}
