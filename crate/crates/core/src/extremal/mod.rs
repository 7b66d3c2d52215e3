//! Extremes of the closed-form branches and the boundary of the
//! achievable subconcurrence region.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::concurrence::ConcurrencePoint;
use crate::csx::{csx4_branches_real, csx5_branches_real, BranchValues};
use crate::error::{argument, Error, Result};

mod boundary;
mod contour;
mod optimize;
mod theorems;

pub use boundary::{
    piecewise_bound, piecewise_comparison, piecewise_root, envelope, thresholds, trace_boundary,
    trace_all, BoundaryCurve, CurveSource, Envelope, PiecewiseComparison, PiecewiseRow, Threshold,
    ThresholdMethod, TraceOptions, PIECEWISE_BREAK, ENVELOPE_BINS,
};
pub use contour::{marching_squares, Grid};
pub use optimize::{
    linear_bounds_5q, maximize, maximize_branch, LinearBound, Maximum, Objective, OptimizeOptions,
};
pub use theorems::{theorem1_check, theorem2_check, Theorem1Report, Theorem2Report};

/// Finite-difference step for Jacobians, in radians.
pub const JACOBIAN_STEP: f64 = 1e-5;

/// μ or ν branch of the X-state formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Mu,
    Nu,
}

/// A single branch: spacing 1 or 2 plus kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Branch {
    pub spacing: u8,
    pub kind: Kind,
}

impl Branch {
    pub const S1_MU: Branch = Branch { spacing: 1, kind: Kind::Mu };
    pub const S1_NU: Branch = Branch { spacing: 1, kind: Kind::Nu };
    pub const S2_MU: Branch = Branch { spacing: 2, kind: Kind::Mu };
    pub const S2_NU: Branch = Branch { spacing: 2, kind: Kind::Nu };
    pub const ALL: [Branch; 4] = [Self::S1_MU, Self::S1_NU, Self::S2_MU, Self::S2_NU];

    /// Position within [`BranchValues::as_array`].
    pub fn index(&self) -> usize {
        (self.spacing as usize - 1) * 2 + matches!(self.kind, Kind::Nu) as usize
    }

    pub fn of(&self, b: &BranchValues) -> f64 {
        b.as_array()[self.index()]
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            Kind::Mu => "mu",
            Kind::Nu => "nu",
        };
        write!(f, "{}{k}", self.spacing)
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1mu" | "1μ" => Ok(Self::S1_MU),
            "1nu" | "1ν" => Ok(Self::S1_NU),
            "2mu" | "2μ" => Ok(Self::S2_MU),
            "2nu" | "2ν" => Ok(Self::S2_NU),
            _ => Err(argument(format!("unknown branch '{s}' (use 1mu, 1nu, 2mu, 2nu)"))),
        }
    }
}

/// A spacing-1 branch paired with a spacing-2 branch, for `n` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairId {
    pub n: usize,
    pub first: Kind,
    pub second: Kind,
}

impl PairId {
    pub fn new(n: usize, first: Kind, second: Kind) -> Result<Self> {
        if n != 4 && n != 5 {
            return Err(argument(format!("branch pairs exist for 4 and 5 qubits, not {n}")));
        }
        Ok(Self { n, first, second })
    }

    /// All four pairings for `n`.
    pub fn all(n: usize) -> Result<Vec<Self>> {
        use Kind::*;
        [(Nu, Mu), (Mu, Nu), (Nu, Nu), (Mu, Mu)]
            .into_iter()
            .map(|(a, b)| Self::new(n, a, b))
            .collect()
    }

    pub fn branches(&self) -> (Branch, Branch) {
        (
            Branch { spacing: 1, kind: self.first },
            Branch { spacing: 2, kind: self.second },
        )
    }

    pub fn point(&self, b: &BranchValues) -> ConcurrencePoint {
        let (x, y) = self.branches();
        ConcurrencePoint::new(x.of(b), y.of(b))
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.branches();
        write!(f, "{}:{x}-{y}", self.n)
    }
}

impl FromStr for PairId {
    type Err = Error;

    /// Accepts `4:1nu-2mu` style identifiers.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || argument(format!("cannot parse branch pair '{s}' (expected e.g. 4:1nu-2mu)"));
        let (n, rest) = s.split_once(':').ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        let (x, y) = rest.split_once('-').ok_or_else(bad)?;
        let (x, y): (Branch, Branch) = (x.parse()?, y.parse()?);
        if x.spacing != 1 || y.spacing != 2 {
            return Err(bad());
        }
        Self::new(n, x.kind, y.kind)
    }
}

/// Angle charts on the reduced coefficient sets. All angles lie in `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parametrization {
    /// `d = 0`, `(a, c, f) = (sinθ cosφ, cosθ, sinθ sinφ)`.
    FourAcf,
    /// `a = f = cosα/√2`, `(c, d) = sinα (cosβ, sinβ)`.
    FourSymmetricAcd,
    /// `a = f = 0`, `(c, d) = (cosζ, sinζ)`.
    FourCd,
    /// `a = 0`, `(c, d, g) = (sinθ cosφ, sinθ sinφ, cosθ)`.
    FiveCdg,
}

impl Parametrization {
    pub fn dims(&self) -> usize {
        match self {
            Self::FourCd => 1,
            _ => 2,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Self::FiveCdg => 5,
            _ => 4,
        }
    }

    /// Conventional angle names.
    pub fn angle_names(&self) -> &'static [&'static str] {
        match self {
            Self::FourAcf | Self::FiveCdg => &["theta", "phi"],
            Self::FourSymmetricAcd => &["alpha", "beta"],
            Self::FourCd => &["zeta"],
        }
    }

    /// Real coefficients `(a, c, d, f)` or `(a, c, d, g)`.
    pub fn coefficients(&self, p: &SphericalPoint) -> [f64; 4] {
        let t = p.angles();
        match self {
            Self::FourAcf => {
                let (st, ct) = t[0].sin_cos();
                let (sp, cp) = t[1].sin_cos();
                [st * cp, ct, 0.0, st * sp]
            }
            Self::FourSymmetricAcd => {
                let (sa, ca) = t[0].sin_cos();
                let (sb, cb) = t[1].sin_cos();
                let e = ca * FRAC_1_SQRT_2;
                [e, sa * cb, sa * sb, e]
            }
            Self::FourCd => {
                let (s, c) = t[0].sin_cos();
                [0.0, c, s, 0.0]
            }
            Self::FiveCdg => {
                let (st, ct) = t[0].sin_cos();
                let (sp, cp) = t[1].sin_cos();
                [0.0, st * cp, st * sp, ct]
            }
        }
    }

    pub fn branches(&self, p: &SphericalPoint) -> BranchValues {
        let [a, c, d, x] = self.coefficients(p);
        match self.n() {
            4 => csx4_branches_real(a, c, d, x),
            _ => csx5_branches_real(a, c, d, x),
        }
    }
}

impl fmt::Display for Parametrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::FourAcf => "four-acf",
            Self::FourSymmetricAcd => "four-symmetric-acd",
            Self::FourCd => "four-cd",
            Self::FiveCdg => "five-cdg",
        })
    }
}

/// One or two angles in `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint {
    angles: [f64; 2],
    dims: usize,
}

impl SphericalPoint {
    pub fn new(angles: &[f64]) -> Result<Self> {
        if angles.is_empty() || angles.len() > 2 {
            return Err(argument(format!("expected 1 or 2 angles, got {}", angles.len())));
        }
        if let Some(t) = angles.iter().find(|t| !(0.0..=FRAC_PI_2).contains(*t)) {
            return Err(argument(format!("angle {t} outside [0, pi/2]")));
        }
        let mut a = [0.0; 2];
        a[..angles.len()].copy_from_slice(angles);
        Ok(Self { angles: a, dims: angles.len() })
    }

    /// Clamps each angle into the box instead of failing.
    pub fn clamped(angles: &[f64]) -> Self {
        let v: Vec<f64> = angles.iter().map(|t| t.clamp(0.0, FRAC_PI_2)).collect();
        Self::new(&v).expect("clamped angles are in range")
    }

    pub fn one(t: f64) -> Result<Self> {
        Self::new(&[t])
    }

    pub fn two(t: f64, p: f64) -> Result<Self> {
        Self::new(&[t, p])
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles[..self.dims]
    }

    pub fn dims(&self) -> usize {
        self.dims
    }
}

/// Reduced domain for one branch pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reduction {
    pub pair: PairId,
    pub parametrization: Parametrization,
    /// Human-readable constraint, e.g. `d = 0`.
    pub constraint: &'static str,
}

impl Reduction {
    /// Applies the constraint to real coefficients without renormalizing.
    pub fn project(&self, k: [f64; 4]) -> [f64; 4] {
        let [a, c, d, x] = k;
        match self.parametrization {
            Parametrization::FourAcf => [a, c, 0.0, x],
            Parametrization::FourSymmetricAcd => {
                let m = ((a * a + x * x) / 2.0).sqrt();
                [m, c, d, m]
            }
            Parametrization::FourCd => [0.0, c, d, 0.0],
            Parametrization::FiveCdg => [0.0, c, d, x],
        }
    }
}

/// The coefficient subset on which a branch pair's outer boundary is sought.
pub fn reduce_domain(pair: PairId) -> Result<Reduction> {
    use Kind::*;
    let (parametrization, constraint) = match (pair.n, pair.first, pair.second) {
        (4, Nu, Mu) => (Parametrization::FourAcf, "d = 0"),
        (4, Mu, Nu) | (4, Nu, Nu) => (Parametrization::FourSymmetricAcd, "a = f"),
        (4, Mu, Mu) => (Parametrization::FourCd, "a = f = 0"),
        (5, Mu, Mu) => (Parametrization::FiveCdg, "a = 0"),
        (5, _, _) => {
            return Err(Error::NotApplicable(format!(
                "no reduced domain is known for pair {pair}"
            )))
        }
        _ => return Err(argument(format!("unknown branch pair {pair}"))),
    };
    Ok(Reduction { pair, parametrization, constraint })
}

/// Image of an angle point under a pair's reduced map.
pub fn branch_pair_map(pair: PairId, p: &SphericalPoint) -> Result<ConcurrencePoint> {
    let r = reduce_domain(pair)?;
    if p.dims() != r.parametrization.dims() {
        return Err(argument(format!(
            "{} takes {} angle(s), got {}",
            r.parametrization,
            r.parametrization.dims(),
            p.dims()
        )));
    }
    Ok(pair.point(&r.parametrization.branches(p)))
}

fn map_raw(pair: PairId, par: Parametrization, t: [f64; 2]) -> ConcurrencePoint {
    let p = SphericalPoint { angles: t, dims: 2 };
    pair.point(&par.branches(&p))
}

/// Jacobian determinant of a 2-angle map by central differences with step `h`.
///
/// Near the box edges the stencil may leave `[0, π/2]`; the trigonometric
/// charts extend smoothly, so this is harmless.
pub fn jacobian_det_with_step(pair: PairId, p: &SphericalPoint, h: f64) -> Result<f64> {
    let r = reduce_domain(pair)?;
    if r.parametrization.dims() != 2 || p.dims() != 2 {
        return Err(Error::NotApplicable(format!(
            "the map for {pair} has a one-dimensional domain"
        )));
    }
    let [t, q] = p.angles;
    let f = |a: f64, b: f64| map_raw(pair, r.parametrization, [a, b]);
    let (tp, tm) = (f(t + h, q), f(t - h, q));
    let (qp, qm) = (f(t, q + h), f(t, q - h));
    let dxdt = (tp.s1 - tm.s1) / (2.0 * h);
    let dydt = (tp.s2 - tm.s2) / (2.0 * h);
    let dxdq = (qp.s1 - qm.s1) / (2.0 * h);
    let dydq = (qp.s2 - qm.s2) / (2.0 * h);
    Ok(dxdt * dydq - dxdq * dydt)
}

pub fn jacobian_det(pair: PairId, p: &SphericalPoint) -> Result<f64> {
    jacobian_det_with_step(pair, p, JACOBIAN_STEP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn pair(s: &str) -> PairId {
        s.parse().unwrap()
    }

    #[test]
    fn pair_ids_round_trip() {
        for n in [4, 5] {
            for p in PairId::all(n).unwrap() {
                assert_eq!(p.to_string().parse::<PairId>().unwrap(), p);
            }
        }
        assert!("4:2nu-1mu".parse::<PairId>().is_err());
        assert!("6:1nu-2mu".parse::<PairId>().is_err());
        assert!("4-1nu".parse::<PairId>().is_err());
    }

    #[test]
    fn reductions() {
        let r = reduce_domain(pair("4:1nu-2mu")).unwrap();
        assert_eq!(r.parametrization, Parametrization::FourAcf);
        assert_eq!(r.parametrization.angle_names(), ["theta", "phi"]);
        let r = reduce_domain(pair("4:1mu-2mu")).unwrap();
        assert_eq!(r.parametrization, Parametrization::FourCd);
        assert_eq!(r.parametrization.dims(), 1);
        let r = reduce_domain(pair("5:1mu-2mu")).unwrap();
        assert_eq!(r.parametrization, Parametrization::FiveCdg);
        assert!(matches!(
            reduce_domain(pair("5:1nu-2mu")),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn map_examples() {
        let p = branch_pair_map(pair("4:1mu-2mu"), &SphericalPoint::one(0.0).unwrap()).unwrap();
        assert!((p.s1 + 0.5).abs() < 1e-15 && (p.s2 - 1.0).abs() < 1e-15);

        let q = SphericalPoint::two(FRAC_PI_2, FRAC_PI_4).unwrap();
        let p = branch_pair_map(pair("4:1nu-2mu"), &q).unwrap();
        assert!(p.s1.abs() < 1e-15 && (p.s2 + 1.0).abs() < 1e-15);

        let p = branch_pair_map(pair("5:1mu-2mu"), &q).unwrap();
        assert!((p.s1 - p.s2).abs() < 1e-15);

        assert!(branch_pair_map(pair("4:1mu-2mu"), &q).is_err());
    }

    #[test]
    fn spherical_point_validation() {
        assert!(SphericalPoint::new(&[]).is_err());
        assert!(SphericalPoint::new(&[0.1, 0.2, 0.3]).is_err());
        assert!(SphericalPoint::one(-0.01).is_err());
        assert!(SphericalPoint::one(2.0).is_err());
        assert_eq!(SphericalPoint::clamped(&[2.0, -1.0]).angles(), [FRAC_PI_2, 0.0]);
    }

    #[test]
    fn jacobian_not_applicable_in_one_dimension() {
        let p = SphericalPoint::one(0.3).unwrap();
        assert!(matches!(
            jacobian_det(pair("4:1mu-2mu"), &p),
            Err(Error::NotApplicable(_))
        ));
    }

    // closed form for the d = 0 chart: det ∝ -2 k k' sin³θ (cosθ - k sinθ), k = cosφ + sinφ
    #[test]
    fn jacobian_matches_fold_structure() {
        let id = pair("4:1nu-2mu");
        let phi: f64 = 0.3;
        let k = phi.cos() + phi.sin();
        let fold = (1.0 / k).atan();
        let det = |t: f64| jacobian_det(id, &SphericalPoint::two(t, phi).unwrap()).unwrap();
        assert!(det(fold - 0.05) * det(fold + 0.05) < 0.0);
        assert!(det(fold).abs() < 1e-8);
        let on_line = jacobian_det(id, &SphericalPoint::two(0.7, FRAC_PI_4).unwrap()).unwrap();
        assert!(on_line.abs() < 1e-8);
    }

    #[test]
    fn jacobian_step_halving_is_second_order() {
        let id = pair("5:1mu-2mu");
        let p = SphericalPoint::two(0.9, 0.6).unwrap();
        let d1 = jacobian_det_with_step(id, &p, 1e-3).unwrap();
        let d2 = jacobian_det_with_step(id, &p, 5e-4).unwrap();
        let d3 = jacobian_det_with_step(id, &p, 2.5e-4).unwrap();
        let r = (d1 - d2) / (d2 - d3);
        assert!((r - 4.0).abs() < 0.1, "ratio {r}");
    }

    #[test]
    fn branch_parse() {
        assert_eq!("1NU".parse::<Branch>().unwrap(), Branch::S1_NU);
        assert_eq!(Branch::S2_NU.to_string(), "2nu");
        assert!("3mu".parse::<Branch>().is_err());
    }
}
