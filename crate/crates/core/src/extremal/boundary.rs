//! Boundary curves of the reduced maps, their outer envelope, thresholds,
//! and the piecewise bound on the `(1ν, 2μ)` map.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::contour::{marching_squares, Grid};
use super::{jacobian_det, reduce_domain, PairId, Parametrization, SphericalPoint};
use crate::concurrence::ConcurrencePoint;
use crate::error::{argument, Error, Result};

/// Number of uniform `s1` bins in [`Envelope::bins`].
pub const ENVELOPE_BINS: usize = 1000;

/// Breakpoint between the two branches of [`piecewise_bound`].
pub const PIECEWISE_BREAK: f64 = 63.0 / 226.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveSource {
    DomainEdge,
    JacobianZero,
    ClosedForm,
    Envelope,
}

impl fmt::Display for CurveSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::DomainEdge => "domain-edge",
            Self::JacobianZero => "jacobian-zero",
            Self::ClosedForm => "closed-form",
            Self::Envelope => "envelope",
        })
    }
}

/// A polyline in the subconcurrence plane.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub source: CurveSource,
    /// Pair whose map produced the curve, if any.
    pub pair: Option<PairId>,
    /// e.g. `4:1nu-2mu/phi=pi/2`.
    pub param_id: String,
    pub points: Vec<ConcurrencePoint>,
    /// Angles of each point; empty when the curve is not a map image.
    pub params: Vec<Vec<f64>>,
}

impl BoundaryCurve {
    /// A plain curve with no parameter record.
    pub fn from_points(source: CurveSource, param_id: impl Into<String>, points: Vec<ConcurrencePoint>) -> Self {
        Self { source, pair: None, param_id: param_id.into(), points, params: Vec::new() }
    }

    /// Largest distance between consecutive points.
    pub fn max_step(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].s1 - w[0].s1).hypot(w[1].s2 - w[0].s2))
            .fold(0.0, f64::max)
    }
}

/// Sampling controls for [`trace_boundary`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    /// Grid cells per angle; at least 64.
    pub resolution: usize,
    /// Largest allowed gap between consecutive curve points.
    pub step_bound: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self { resolution: 512, step_bound: 2e-3 }
    }
}

impl TraceOptions {
    pub fn with_resolution(resolution: usize) -> Self {
        Self { resolution, ..Self::default() }
    }

    fn check(&self) -> Result<()> {
        if self.resolution < 64 {
            return Err(argument(format!("resolution {} is below 64", self.resolution)));
        }
        if !(self.step_bound > 0.0) {
            return Err(argument("step bound must be positive"));
        }
        Ok(())
    }
}

const MAX_BISECTIONS: usize = 16;

fn fmt_angle(t: f64) -> &'static str {
    if t == 0.0 {
        "0"
    } else {
        "pi/2"
    }
}

struct Mapper {
    pair: PairId,
    par: Parametrization,
}

impl Mapper {
    fn at(&self, t: &[f64]) -> ConcurrencePoint {
        self.pair.point(&self.par.branches(&SphericalPoint::clamped(t)))
    }

    /// Image of a straight angle path, subdivided until steps obey `bound`.
    fn polyline(&self, angles: &[Vec<f64>], bound: f64) -> (Vec<ConcurrencePoint>, Vec<Vec<f64>>) {
        let mut pts = Vec::with_capacity(angles.len());
        let mut params = Vec::with_capacity(angles.len());
        if angles.is_empty() {
            return (pts, params);
        }
        pts.push(self.at(&angles[0]));
        params.push(angles[0].clone());
        for w in angles.windows(2) {
            let end = self.at(&w[1]);
            self.fill(&w[0], &w[1], *pts.last().expect("non-empty"), end, bound, 0, &mut pts, &mut params);
            pts.push(end);
            params.push(w[1].clone());
        }
        (pts, params)
    }

    #[allow(clippy::too_many_arguments)]
    fn fill(
        &self,
        a: &[f64],
        b: &[f64],
        pa: ConcurrencePoint,
        pb: ConcurrencePoint,
        bound: f64,
        depth: usize,
        pts: &mut Vec<ConcurrencePoint>,
        params: &mut Vec<Vec<f64>>,
    ) {
        if depth >= MAX_BISECTIONS || (pb.s1 - pa.s1).hypot(pb.s2 - pa.s2) <= bound {
            return;
        }
        let m: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
        let pm = self.at(&m);
        self.fill(a, &m, pa, pm, bound, depth + 1, pts, params);
        pts.push(pm);
        params.push(m.clone());
        self.fill(&m, b, pm, pb, bound, depth + 1, pts, params);
    }

    fn curve(&self, source: CurveSource, label: String, angles: &[Vec<f64>], bound: f64) -> BoundaryCurve {
        let (points, params) = self.polyline(angles, bound);
        BoundaryCurve {
            source,
            pair: Some(self.pair),
            param_id: format!("{}/{label}", self.pair),
            points,
            params,
        }
    }
}

/// Candidate boundary curves of one pair's image: the images of the domain
/// edges and of the zero set of the Jacobian determinant.
pub fn trace_boundary(pair: PairId, opts: &TraceOptions) -> Result<Vec<BoundaryCurve>> {
    opts.check()?;
    let r = reduce_domain(pair)?;
    let map = Mapper { pair, par: r.parametrization };
    let n = opts.resolution;
    let names = r.parametrization.angle_names();
    let line = |k: usize| -> f64 { FRAC_PI_2 * k as f64 / n as f64 };

    if r.parametrization.dims() == 1 {
        let angles: Vec<Vec<f64>> = (0..=n).map(|k| vec![line(k)]).collect();
        return Ok(vec![map.curve(CurveSource::DomainEdge, names[0].to_string(), &angles, opts.step_bound)]);
    }

    let mut curves = Vec::new();
    for fixed in [0usize, 1] {
        for value in [0.0, FRAC_PI_2] {
            let angles: Vec<Vec<f64>> = (0..=n)
                .map(|k| if fixed == 0 { vec![value, line(k)] } else { vec![line(k), value] })
                .collect();
            let label = format!("{}={}", names[fixed], fmt_angle(value));
            curves.push(map.curve(CurveSource::DomainEdge, label, &angles, opts.step_bound));
        }
    }

    // cell-centred lattice keeps the stencil away from the box edges
    let h = FRAC_PI_2 / n as f64;
    let det = |t: f64, p: f64| -> f64 {
        jacobian_det(pair, &SphericalPoint::clamped(&[t, p])).unwrap_or(0.0)
    };
    let values: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % n, idx / n);
            det((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)
        })
        .collect();
    let grid = Grid { nx: n, ny: n, x0: 0.5 * h, y0: 0.5 * h, dx: h, dy: h, values };
    let lines = marching_squares(&grid, Some(&det));
    let mut jac: Vec<BoundaryCurve> = lines
        .par_iter()
        .enumerate()
        .map(|(k, l)| {
            let angles: Vec<Vec<f64>> = l.iter().map(|p| p.to_vec()).collect();
            map.curve(CurveSource::JacobianZero, format!("jacobian-{k}"), &angles, opts.step_bound)
        })
        .collect();
    curves.append(&mut jac);
    Ok(curves)
}

/// Curves of every pair of `n` that has a reduced domain.
pub fn trace_all(n: usize, opts: &TraceOptions) -> Result<Vec<BoundaryCurve>> {
    let mut out = Vec::new();
    for pair in PairId::all(n)? {
        match trace_boundary(pair, opts) {
            Ok(mut c) => out.append(&mut c),
            Err(Error::NotApplicable(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Upper-right envelope of a set of curves.
///
/// `frontier(x)` is the largest `s2` reached anywhere on the curves with
/// `s1 ≥ x`, counting points interior to segments.
#[derive(Debug, Clone)]
pub struct Envelope {
    // vertices ascending in s1 with suffix maxima of s2
    xs: Vec<f64>,
    suffix: Vec<f64>,
    segments: Vec<(ConcurrencePoint, ConcurrencePoint)>,
    buckets: Vec<Vec<u32>>,
    bins: Vec<Option<f64>>,
    pareto: Vec<ConcurrencePoint>,
}

fn bucket_of(x: f64) -> usize {
    let t = ((x + 1.0) / 2.0 * ENVELOPE_BINS as f64).floor();
    t.clamp(0.0, (ENVELOPE_BINS - 1) as f64) as usize
}

pub fn envelope(curves: &[BoundaryCurve]) -> Result<Envelope> {
    let mut verts: Vec<ConcurrencePoint> = curves
        .iter()
        .flat_map(|c| c.points.iter().copied())
        .filter(|p| p.s1.is_finite() && p.s2.is_finite())
        .collect();
    if verts.is_empty() {
        return Err(argument("envelope needs at least one curve point"));
    }
    verts.sort_by(|a, b| a.s1.total_cmp(&b.s1).then(a.s2.total_cmp(&b.s2)));
    let xs: Vec<f64> = verts.iter().map(|p| p.s1).collect();
    let mut suffix = vec![f64::NEG_INFINITY; verts.len()];
    let mut run = f64::NEG_INFINITY;
    for i in (0..verts.len()).rev() {
        run = run.max(verts[i].s2);
        suffix[i] = run;
    }

    let mut pareto: Vec<ConcurrencePoint> = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for p in verts.iter().rev() {
        if p.s2 > best {
            best = p.s2;
            pareto.push(*p);
        }
    }
    pareto.reverse();

    let mut bins = vec![None; ENVELOPE_BINS];
    for p in &verts {
        let b = &mut bins[bucket_of(p.s1)];
        *b = Some(b.map_or(p.s2, |v: f64| v.max(p.s2)));
    }

    let segments: Vec<(ConcurrencePoint, ConcurrencePoint)> = curves
        .iter()
        .flat_map(|c| c.points.windows(2).map(|w| (w[0], w[1])))
        .filter(|(a, b)| a.s1 != b.s1 && a.s1.is_finite() && b.s1.is_finite())
        .collect();
    let mut buckets = vec![Vec::new(); ENVELOPE_BINS];
    for (k, (a, b)) in segments.iter().enumerate() {
        let (lo, hi) = (bucket_of(a.s1.min(b.s1)), bucket_of(a.s1.max(b.s1)));
        for bucket in &mut buckets[lo..=hi] {
            bucket.push(k as u32);
        }
    }
    Ok(Envelope { xs, suffix, segments, buckets, bins, pareto })
}

impl Envelope {
    /// Largest `s2` on the curves among points with `s1 ≥ x`; `-∞` past the right end.
    pub fn frontier(&self, x: f64) -> f64 {
        let i = self.xs.partition_point(|&v| v < x);
        let mut best = self.suffix.get(i).copied().unwrap_or(f64::NEG_INFINITY);
        for &k in &self.buckets[bucket_of(x)] {
            let (a, b) = self.segments[k as usize];
            let (lo, hi) = if a.s1 < b.s1 { (a, b) } else { (b, a) };
            if lo.s1 <= x && x <= hi.s1 {
                let t = (x - lo.s1) / (hi.s1 - lo.s1);
                best = best.max(lo.s2 + t * (hi.s2 - lo.s2));
            }
        }
        best
    }

    /// True when `p` is dominated by the envelope up to `tol`.
    pub fn contains(&self, p: ConcurrencePoint, tol: f64) -> bool {
        p.s2 <= self.frontier(p.s1 - tol) + tol
    }

    /// Largest `s1` on the curves.
    pub fn max_s1(&self) -> f64 {
        *self.xs.last().expect("non-empty")
    }

    /// Per-bin maxima of `s2` over `s1 ∈ [-1, 1]`; `None` for empty bins.
    pub fn bins(&self) -> &[Option<f64>] {
        &self.bins
    }

    /// Pareto-optimal vertices, ascending in `s1`.
    pub fn pareto(&self) -> &[ConcurrencePoint] {
        &self.pareto
    }

    pub fn curve(&self, param_id: impl Into<String>) -> BoundaryCurve {
        BoundaryCurve::from_points(CurveSource::Envelope, param_id, self.pareto.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMethod {
    ClosedForm,
    Traced,
}

/// Largest subconcurrence at `spacing` that still allows a non-negative one at the other spacing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub n: usize,
    pub spacing: u8,
    /// Reported value: the closed form when one is known and agrees, else the traced value.
    pub value: f64,
    pub method: ThresholdMethod,
    /// Value found on the traced curves.
    pub traced: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_label: Option<String>,
    /// Curve on which the maximum was found.
    pub curve: String,
}

/// Agreement needed before a closed form is reported in place of the traced value.
const CLOSED_FORM_AGREEMENT: f64 = 1e-6;

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

fn coord(p: ConcurrencePoint, spacing: u8) -> (f64, f64) {
    if spacing == 1 {
        (p.s1, p.s2)
    } else {
        (p.s2, p.s1)
    }
}

/// Largest `x` with `y ≥ 0` on one curve, refined on the analytic map.
fn curve_threshold(curve: &BoundaryCurve, spacing: u8) -> Option<f64> {
    let pair = curve.pair?;
    if curve.params.len() != curve.points.len() {
        return None;
    }
    let par = reduce_domain(pair).ok()?.parametrization;
    let map = Mapper { pair, par };
    let xy = |t: &[f64]| coord(map.at(t), spacing);

    let mut best: Option<f64> = None;
    let mut consider = |v: f64| {
        if best.is_none_or(|b| v > b) {
            best = Some(v);
        }
    };

    for (k, p) in curve.points.iter().enumerate() {
        let (x, y) = coord(*p, spacing);
        if y >= 0.0 {
            consider(x);
            // local maximum along the curve: polish on both adjacent pieces
            let prev = k.checked_sub(1).map(|j| coord(curve.points[j], spacing).0);
            let next = curve.points.get(k + 1).map(|q| coord(*q, spacing).0);
            if prev.is_none_or(|v| v <= x) && next.is_none_or(|v| v <= x) {
                for j in [k.wrapping_sub(1), k + 1] {
                    if let Some(q) = curve.params.get(j) {
                        let f = |t: f64| {
                            let (x, y) = xy(&lerp(&curve.params[k], q, t));
                            if y >= 0.0 {
                                x
                            } else {
                                f64::NEG_INFINITY
                            }
                        };
                        consider(golden_max(f, 0.0, 1.0));
                    }
                }
            }
        }
    }

    for w in 0..curve.points.len().saturating_sub(1) {
        let (_, ya) = coord(curve.points[w], spacing);
        let (_, yb) = coord(curve.points[w + 1], spacing);
        if (ya >= 0.0) == (yb >= 0.0) {
            continue;
        }
        let (pa, pb) = (&curve.params[w], &curve.params[w + 1]);
        let (mut lo, mut hi) = (0.0, 1.0);
        let lo_sign = ya >= 0.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if (xy(&lerp(pa, pb, mid)).1 >= 0.0) == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // the feasible end of the final bracket
        let t = if lo_sign { lo } else { hi };
        consider(xy(&lerp(pa, pb, t)).0);
    }
    best
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = f(a).max(f(b)).max(fc).max(fd);
    while (b - a).abs() > 1e-13 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
            best = best.max(fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
            best = best.max(fd);
        }
    }
    best
}

fn closed_form(n: usize, spacing: u8) -> Option<(f64, &'static str)> {
    match (n, spacing) {
        (4, 1) => Some(((2.0 * 2f64.sqrt() - 1.0) / 4.0, "(2*sqrt(2)-1)/4")),
        (4, 2) => Some((0.8, "4/5")),
        _ => None,
    }
}

/// Thresholds at spacings 1 and 2 from the traced curves of `n` qubits.
pub fn thresholds(n: usize, curves: &[BoundaryCurve]) -> Result<Vec<Threshold>> {
    if n != 4 && n != 5 {
        return Err(argument(format!("thresholds are defined for 4 and 5 qubits, not {n}")));
    }
    let mut out = Vec::new();
    for spacing in [1u8, 2] {
        let found = curves
            .iter()
            .filter(|c| c.pair.is_some_and(|p| p.n == n))
            .filter_map(|c| curve_threshold(c, spacing).map(|v| (v, c.param_id.clone())))
            .max_by(|a, b| a.0.total_cmp(&b.0));
        let (traced, curve) = found.ok_or_else(|| {
            Error::Validation(format!("no traced curve reaches the spacing-{spacing} threshold"))
        })?;
        let cf = closed_form(n, spacing);
        let agrees = cf.is_some_and(|(v, _)| (v - traced).abs() <= CLOSED_FORM_AGREEMENT);
        out.push(Threshold {
            n,
            spacing,
            value: if agrees { cf.expect("checked").0 } else { traced },
            method: if agrees { ThresholdMethod::ClosedForm } else { ThresholdMethod::Traced },
            traced,
            closed_form: cf.map(|c| c.0),
            closed_form_label: cf.map(|c| c.1.to_string()),
            curve,
        });
    }
    Ok(out)
}

fn piecewise_first(s: f64) -> f64 {
    0.4 * (8.0 * (1.0 - 2.0 * s - 4.0 * s * s).sqrt() - s + 1.0)
}

fn piecewise_second(s: f64) -> f64 {
    (8.0 * (1.0 - s - 2.0 * s * s).max(0.0).sqrt() - 4.0 * s - 1.0) / 9.0
}

/// Reference piecewise upper bound on `2μ` as a function of `1ν` for 4 qubits.
pub fn piecewise_bound(s1: f64) -> Result<f64> {
    if !(-0.5..=0.5).contains(&s1) {
        return Err(argument(format!("s1 = {s1} outside [-1/2, 1/2]")));
    }
    Ok(if s1 <= PIECEWISE_BREAK { piecewise_first(s1) } else { piecewise_second(s1) })
}

/// Root of the second branch, by bisection on `[0, 1/2]`.
pub fn piecewise_root() -> f64 {
    let (mut lo, mut hi) = (0.0, 0.5);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if piecewise_second(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseRow {
    pub s1: f64,
    pub bound: f64,
    /// `None` beyond the right end of the traced curves.
    pub traced: Option<f64>,
}

/// Side-by-side values of [`piecewise_bound`] and a traced envelope.
///
/// Gaps only cover rows where the envelope is defined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseComparison {
    pub breakpoint: f64,
    pub second_branch_root: f64,
    pub rows: Vec<PiecewiseRow>,
    /// Largest `|bound - traced|` left of the breakpoint.
    pub first_branch_max_gap: f64,
    /// Largest `|bound - traced|` right of the breakpoint.
    pub second_branch_max_gap: f64,
    /// Largest `|bound - traced|` for `s1 ≥ 1/3`.
    pub tail_max_gap: f64,
}

/// Compares the printed bound with `env` on `samples` evenly spaced points of `[-1/2, 1/2]`.
pub fn piecewise_comparison(env: &Envelope, samples: usize) -> Result<PiecewiseComparison> {
    if samples < 2 {
        return Err(argument("need at least two comparison points"));
    }
    let mut rows = Vec::with_capacity(samples);
    let (mut g1, mut g2, mut g3) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..samples {
        let s1 = -0.5 + k as f64 / (samples - 1) as f64;
        let bound = piecewise_bound(s1)?;
        let traced = Some(env.frontier(s1)).filter(|v| v.is_finite());
        if let Some(t) = traced {
            let gap = (bound - t).abs();
            if s1 <= PIECEWISE_BREAK {
                g1 = g1.max(gap);
            } else {
                g2 = g2.max(gap);
            }
            if s1 >= 1.0 / 3.0 {
                g3 = g3.max(gap);
            }
        }
        rows.push(PiecewiseRow { s1, bound, traced });
    }
    Ok(PiecewiseComparison {
        breakpoint: PIECEWISE_BREAK,
        second_branch_root: piecewise_root(),
        rows,
        first_branch_max_gap: g1,
        second_branch_max_gap: g2,
        tail_max_gap: g3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(s: &str) -> PairId {
        s.parse().unwrap()
    }

    fn quick() -> TraceOptions {
        TraceOptions { resolution: 64, step_bound: 1e-2 }
    }

    #[test]
    fn resolution_floor() {
        let o = TraceOptions { resolution: 32, step_bound: 1e-2 };
        assert!(trace_boundary(pair("4:1nu-2mu"), &o).is_err());
    }

    #[test]
    fn one_dimensional_map_gives_one_curve() {
        let c = trace_boundary(pair("4:1mu-2mu"), &quick()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].source, CurveSource::DomainEdge);
        let first = c[0].points[0];
        assert!((first.s1 + 0.5).abs() < 1e-15 && (first.s2 - 1.0).abs() < 1e-15);
        assert!(c[0].max_step() <= 1e-2);
    }

    #[test]
    fn five_qubit_edges_are_present() {
        let c = trace_boundary(pair("5:1mu-2mu"), &quick()).unwrap();
        for label in ["theta=pi/2", "phi=0", "phi=pi/2"] {
            let id = format!("5:1mu-2mu/{label}");
            assert!(c.iter().any(|k| k.param_id == id), "missing {id}");
        }
        assert!(c.iter().any(|k| k.source == CurveSource::JacobianZero));
        assert!(c.iter().all(|k| k.max_step() <= 1e-2));
    }

    #[test]
    fn envelope_of_single_curve() {
        let pts = vec![
            ConcurrencePoint::new(-0.5, 1.0),
            ConcurrencePoint::new(0.0, 0.5),
            ConcurrencePoint::new(0.5, -0.5),
        ];
        let env = envelope(&[BoundaryCurve::from_points(CurveSource::ClosedForm, "t", pts.clone())]).unwrap();
        assert_eq!(env.pareto(), pts.as_slice());
        assert!((env.frontier(0.25) - 0.0).abs() < 1e-15);
        assert!((env.frontier(-1.0) - 1.0).abs() < 1e-15);
        assert_eq!(env.frontier(0.6), f64::NEG_INFINITY);
        assert!(env.contains(ConcurrencePoint::new(0.25, -0.1), 0.0));
        assert!(!env.contains(ConcurrencePoint::new(0.25, 0.1), 1e-6));
        assert!(envelope(&[]).is_err());
    }

    #[test]
    fn piecewise_examples() {
        let root = piecewise_root();
        assert!((root - (2.0 * 2f64.sqrt() - 1.0) / 4.0).abs() < 1e-12);
        assert!(piecewise_bound(root).unwrap().abs() < 1e-9);
        assert!((piecewise_bound(0.5).unwrap() + 1.0 / 3.0).abs() < 1e-12);
        assert!((piecewise_bound(-0.5).unwrap() - 3.8).abs() < 1e-12);
        assert!((piecewise_bound(0.0).unwrap() - 3.6).abs() < 1e-12);
        assert!(piecewise_bound(0.6).is_err());
    }

    #[test]
    fn golden_finds_peak() {
        let v = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0);
        assert!(v.abs() < 1e-20);
    }
}
