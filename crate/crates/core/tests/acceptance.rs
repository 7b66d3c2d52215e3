//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::time::{Duration, Instant};

use csconc::concurrence::{spacing_subconcurrences, ConcurrencePoint};
use csconc::csx::csx_branches;
use csconc::cyclic::{relabel, Relabeling};
use csconc::extremal::{
    envelope, piecewise_comparison, piecewise_root, linear_bounds_5q, maximize_branch,
    theorem1_check, theorem2_check, thresholds, trace_all, trace_boundary, Branch,
    OptimizeOptions, TraceOptions,
};
use csconc::sampler::{random_state, state_point, SampleSpec, Subspace};

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, elapsed: Duration, limit: Option<Duration>, detail: &str) {
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let pass = ok && in_time;
        if !pass {
            self.failures += 1;
        }
        let budget = limit.map_or(String::new(), |l| format!(" / {}s", l.as_secs()));
        let late = if in_time { "" } else { " [over time budget]" };
        println!(
            "{} criterion {id}: {detail} ({:.2}s{budget}){late}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }

    fn sub(&self, ok: bool, detail: &str) -> bool {
        println!("    {} {detail}", if ok { "ok  " } else { "MISS" });
        ok
    }
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn criterion1(r: &mut Report) {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for n in [4, 5] {
        let spec = SampleSpec::new(n, Subspace::Csx, 10_000, 2024).unwrap();
        for i in 0..spec.count {
            let s = random_state(&spec, i).unwrap();
            let closed = csx_branches(&s).unwrap().concurrences();
            let generic = spacing_subconcurrences(&s).unwrap().clamped();
            worst = worst.max((closed.s1 - generic.s1).abs()).max((closed.s2 - generic.s2).abs());
        }
    }
    r.line(
        "1",
        worst <= 1e-9,
        t.elapsed(),
        secs(30),
        &format!("closed-form vs generic concurrence, 2 x 10^4 even states, max gap {worst:.2e}"),
    );
}

fn criterion2(r: &mut Report) {
    let t = Instant::now();
    let opts = OptimizeOptions::default();
    let mu4 = maximize_branch(Branch::S1_MU, 4, &opts).unwrap();
    let nu4 = maximize_branch(Branch::S1_NU, 4, &opts).unwrap();
    let mu5 = maximize_branch(Branch::S1_MU, 5, &opts).unwrap();
    let nu5 = maximize_branch(Branch::S1_NU, 5, &opts).unwrap();
    let third = 1.0 / 3f64.sqrt();
    let [a, c, d, f] = nu4.coefficients;
    let [a5, c5, d5, g5] = mu5.coefficients;

    let mut ok = true;
    ok &= r.sub(
        (mu4.value - 0.25).abs() <= 1e-6,
        &format!("max 1mu(4) = {:.9} (target 1/4; argmax a,c,d,f = {:.6?})", mu4.value, mu4.coefficients),
    );
    ok &= r.sub((nu4.value - 0.5).abs() <= 1e-6, &format!("max 1nu(4) = {:.9} (target 1/2)", nu4.value));
    ok &= r.sub((mu5.value - 0.468).abs() <= 1e-3, &format!("max 1mu(5) = {:.7} (target 0.468)", mu5.value));
    ok &= r.sub((nu5.value - 0.366).abs() <= 1e-3, &format!("max 1nu(5) = {:.7} (target 0.366)", nu5.value));
    ok &= r.sub(
        d.abs() <= 1e-4 && [a, c, f].iter().all(|x| (x - third).abs() <= 1e-4),
        &format!("1nu(4) argmax a,c,d,f = {a:.6}, {c:.6}, {d:.6}, {f:.6}"),
    );
    ok &= r.sub(
        a5.abs() <= 1e-4 && g5.abs() <= 1e-4 && (c5 - 0.298).abs() <= 5e-3 && (d5 - 0.955).abs() <= 5e-3,
        &format!("1mu(5) argmax a,c,d,g = {a5:.6}, {c5:.6}, {d5:.6}, {g5:.6}"),
    );
    r.line("2", ok, t.elapsed(), secs(60), "branch maxima and maximizers");
}

fn criterion3(r: &mut Report) {
    let t = Instant::now();
    let opts = TraceOptions::with_resolution(512);
    let mut ok = true;
    for n in [4, 5] {
        let curves = trace_all(n, &opts).unwrap();
        for th in thresholds(n, &curves).unwrap() {
            let (target, tol) = match (n, th.spacing) {
                (4, 1) => ((2.0 * 2f64.sqrt() - 1.0) / 4.0, 1e-6),
                (4, _) => (0.8, 1e-6),
                _ => (0.418, 1e-3),
            };
            ok &= r.sub(
                (th.traced - target).abs() <= tol,
                &format!(
                    "n={n} spacing {}: traced {:.10} vs {target:.10} (on {})",
                    th.spacing, th.traced, th.curve
                ),
            );
        }
    }
    r.line("3", ok, t.elapsed(), secs(120), "monogamy thresholds from traced boundaries at resolution 512");
}

fn criterion4(r: &mut Report) {
    let t = Instant::now();
    let mut ok = true;
    for (n, k) in [(4, 2), (6, 2), (6, 3)] {
        let rep = theorem1_check(n, k).unwrap();
        ok &= r.sub(
            rep.passes(1e-10),
            &format!(
                "n={n} k={k}: shift defect {:.1e}, subconcurrences {:?}, expected C_k {:.6}",
                rep.shift_defect, rep.subconcurrences, rep.expected
            ),
        );
    }
    r.line("4", ok, t.elapsed(), secs(5), "spaced products reach the adjacent maximum at their spacing only");
}

fn criterion5(r: &mut Report) {
    let t = Instant::now();
    let small = theorem2_check(1e-3, 1000, 11).unwrap();
    let large = theorem2_check(0.5, 1000, 11).unwrap();
    let mut ok = r.sub(
        small.positive == 0 && small.max_subconcurrence < 0.0 && small.max_concurrence == 0.0,
        &format!("eps=1e-3: max subconcurrence {:.6}, positive {}", small.max_subconcurrence, small.positive),
    );
    ok &= r.sub(
        large.positive >= 1,
        &format!("eps=0.5: max concurrence {:.6}, positive {}/1000", large.max_concurrence, large.positive),
    );
    r.line("5", ok, t.elapsed(), secs(10), "zero adjacent concurrence near the interleaved Bell state");
}

fn criterion6(r: &mut Report) {
    let t = Instant::now();
    let count = 100_000;
    let mut ok = true;
    let swap = Relabeling::new(5, 2).unwrap();
    for n in [4, 5] {
        let env = envelope(&trace_all(n, &TraceOptions::with_resolution(512)).unwrap()).unwrap();
        let mut outside = 0usize;
        let mut worst_excess = f64::NEG_INFINITY;
        let mut mono_violations = 0usize;
        let mut cs_s1_threshold_violations = 0usize;
        let mut swap_gap = 0.0f64;
        for subspace in [Subspace::Cs, Subspace::Csx] {
            let spec = SampleSpec::new(n, subspace, count, 77 + n as u64).unwrap();
            for i in 0..count {
                let s = random_state(&spec, i).unwrap();
                let p = state_point(&s, subspace).unwrap();
                if subspace == Subspace::Csx {
                    let excess = p.s2 - env.frontier(p.s1 - 1e-6);
                    worst_excess = worst_excess.max(excess);
                    if !env.contains(p, 1e-6) {
                        outside += 1;
                    }
                }
                if n == 4 {
                    if p.s2 > 0.8 + 1e-9 && p.s1 > 0.0 {
                        mono_violations += 1;
                    }
                    if subspace == Subspace::Cs && p.s1 > 0.4571067811865476 + 1e-9 && p.s2 > 0.0 {
                        cs_s1_threshold_violations += 1;
                    }
                } else {
                    if (p.s1 > 0.4185 && p.s2 > 0.0) || (p.s2 > 0.4185 && p.s1 > 0.0) {
                        mono_violations += 1;
                    }
                    let q = spacing_subconcurrences(&relabel(&s, &swap).unwrap()).unwrap();
                    let g = ConcurrencePoint::new(q.s1 - p.s2, q.s2 - p.s1);
                    swap_gap = swap_gap.max(g.s1.abs()).max(g.s2.abs());
                }
            }
        }
        ok &= r.sub(
            outside == 0,
            &format!("n={n}: even samples outside envelope {outside}/{count} (largest excess {worst_excess:.2e})"),
        );
        let what = if n == 4 { "s2 > 4/5 with s1 > 0" } else { "either > 0.4185 with the other > 0" };
        ok &= r.sub(mono_violations == 0, &format!("n={n}: {what}: {mono_violations} of {}", 2 * count));
        if n == 4 {
            println!(
                "    info n=4 general CS samples above the s1 threshold with s2 > 0: {cs_s1_threshold_violations} (reported, not asserted)"
            );
        } else {
            ok &= r.sub(swap_gap <= 1e-10, &format!("n=5: relabel m=2 swaps (s1, s2), max gap {swap_gap:.2e}"));
        }
    }
    r.line("6", ok, t.elapsed(), secs(120), "scatter support, monogamy and exchange symmetry over 10^5 samples");
}

fn criterion7(r: &mut Report) {
    let t = Instant::now();
    let mut ok = true;
    for b in linear_bounds_5q(&OptimizeOptions::default()).unwrap() {
        ok &= r.sub(b.holds, &format!("{}: max {:.8}", b.label, b.maximum.value));
    }
    r.line("7", ok, t.elapsed(), secs(30), "linear bounds on 5-qubit branches");
}

fn criterion8(r: &mut Report) {
    let t = Instant::now();
    let root = piecewise_root();
    let target = (2.0 * 2f64.sqrt() - 1.0) / 4.0;
    let ok = r.sub((root - target).abs() <= 1e-9, &format!("second-branch root {root:.12} vs {target:.12}"));
    let curves = trace_boundary("4:1nu-2mu".parse().unwrap(), &TraceOptions::with_resolution(512)).unwrap();
    let cmp = piecewise_comparison(&envelope(&curves).unwrap(), 101).unwrap();
    println!(
        "    info largest |bound - traced|: left of 63/226 {:.4}, right {:.4}, for s1 >= 1/3 {:.2e} (first branch expected off)",
        cmp.first_branch_max_gap, cmp.second_branch_max_gap, cmp.tail_max_gap
    );
    for row in cmp.rows.iter().step_by(10) {
        let traced = row.traced.map_or("none".to_string(), |v| format!("{v:+.6}"));
        println!("    info s1 {:+.3}: bound {:+.6}, traced {traced}", row.s1, row.bound);
    }
    r.line("8", ok, t.elapsed(), None, "piecewise bound cross-check");
}

fn main() {
    let mut r = Report { failures: 0 };
    criterion1(&mut r);
    criterion2(&mut r);
    criterion3(&mut r);
    criterion4(&mut r);
    criterion5(&mut r);
    criterion6(&mut r);
    criterion7(&mut r);
    criterion8(&mut r);
    println!("acceptance: {} of 8 criteria failed", r.failures);
    if r.failures > 0 {
        std::process::exit(1);
    }
}
