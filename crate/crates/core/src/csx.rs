//! Closed-form branch values for even-weight CS states of 4 and 5 qubits.
//!
//! Every value already carries the overall factor 2 of the X-state formula,
//! so `max(0, μ, ν)` at a spacing is that spacing's concurrence.

use serde::{Deserialize, Serialize};

use crate::concurrence::ConcurrencePoint;
use crate::cyclic::CsState;
use crate::error::{argument, validation, Result};
use crate::linalg::{l2_norm, C64, NORM_TOL, ZERO};

/// Amplitudes on orbits `0000`, `0011`, `0101`, `1111`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Csx4Coeffs {
    pub a: C64,
    pub c: C64,
    pub d: C64,
    pub f: C64,
}

/// Amplitudes on orbits `00000`, `00011`, `00101`, `01111`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Csx5Coeffs {
    pub a: C64,
    pub c: C64,
    pub d: C64,
    pub g: C64,
}

fn check_norm(v: &[C64]) -> Result<()> {
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(validation("coefficients must be finite"));
    }
    let norm = l2_norm(v);
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(validation(format!("coefficient norm {norm} differs from 1")));
    }
    Ok(())
}

fn rescale(v: &mut [C64]) -> Result<()> {
    let norm = l2_norm(v);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(validation("cannot normalize zero or non-finite coefficients"));
    }
    v.iter_mut().for_each(|z| *z /= norm);
    Ok(())
}

// positions of the even orbits inside the full necklace list
const EVEN4: [usize; 4] = [0, 2, 3, 5];
const EVEN5: [usize; 4] = [0, 2, 3, 6];

fn from_state(state: &CsState, n: usize, slots: [usize; 4]) -> Result<[C64; 4]> {
    if state.n() != n {
        return Err(argument(format!("expected a {n}-qubit state, got {}", state.n())));
    }
    if !state.is_csx() {
        return Err(argument("state has weight on odd orbits"));
    }
    let amps = state.amplitudes();
    Ok(slots.map(|i| amps[i]))
}

fn to_state(n: usize, slots: [usize; 4], v: [C64; 4]) -> CsState {
    let len = if n == 4 { 6 } else { 8 };
    let mut amps = vec![ZERO; len];
    for (i, z) in slots.into_iter().zip(v) {
        amps[i] = z;
    }
    CsState::new(n, amps).expect("coefficients are normalized")
}

impl Csx4Coeffs {
    pub fn new(a: C64, c: C64, d: C64, f: C64) -> Result<Self> {
        check_norm(&[a, c, d, f])?;
        Ok(Self { a, c, d, f })
    }

    pub fn normalized(a: C64, c: C64, d: C64, f: C64) -> Result<Self> {
        let mut v = [a, c, d, f];
        rescale(&mut v)?;
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn real(a: f64, c: f64, d: f64, f: f64) -> Result<Self> {
        Self::normalized(a.into(), c.into(), d.into(), f.into())
    }

    pub fn from_state(state: &CsState) -> Result<Self> {
        let [a, c, d, f] = from_state(state, 4, EVEN4)?;
        Ok(Self { a, c, d, f })
    }

    pub fn to_state(&self) -> CsState {
        to_state(4, EVEN4, self.as_array())
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.a, self.c, self.d, self.f]
    }

    /// Every coefficient replaced by its modulus.
    pub fn moduli(&self) -> Self {
        let m = |z: C64| C64::new(z.norm(), 0.0);
        Self { a: m(self.a), c: m(self.c), d: m(self.d), f: m(self.f) }
    }
}

impl Csx5Coeffs {
    pub fn new(a: C64, c: C64, d: C64, g: C64) -> Result<Self> {
        check_norm(&[a, c, d, g])?;
        Ok(Self { a, c, d, g })
    }

    pub fn normalized(a: C64, c: C64, d: C64, g: C64) -> Result<Self> {
        let mut v = [a, c, d, g];
        rescale(&mut v)?;
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn real(a: f64, c: f64, d: f64, g: f64) -> Result<Self> {
        Self::normalized(a.into(), c.into(), d.into(), g.into())
    }

    pub fn from_state(state: &CsState) -> Result<Self> {
        let [a, c, d, g] = from_state(state, 5, EVEN5)?;
        Ok(Self { a, c, d, g })
    }

    pub fn to_state(&self) -> CsState {
        to_state(5, EVEN5, self.as_array())
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.a, self.c, self.d, self.g]
    }

    pub fn moduli(&self) -> Self {
        let m = |z: C64| C64::new(z.norm(), 0.0);
        Self { a: m(self.a), c: m(self.c), d: m(self.d), g: m(self.g) }
    }

    /// Exchanges the `0011` and `0101` type orbits.
    pub fn swap_cd(&self) -> Self {
        Self { a: self.a, c: self.d, d: self.c, g: self.g }
    }
}

/// Unclamped μ and ν branches at spacings 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchValues {
    pub s1_mu: f64,
    pub s1_nu: f64,
    pub s2_mu: f64,
    pub s2_nu: f64,
}

impl BranchValues {
    pub fn as_array(&self) -> [f64; 4] {
        [self.s1_mu, self.s1_nu, self.s2_mu, self.s2_nu]
    }

    /// Subconcurrences, i.e. the larger branch at each spacing.
    pub fn point(&self) -> ConcurrencePoint {
        ConcurrencePoint::new(self.s1_mu.max(self.s1_nu), self.s2_mu.max(self.s2_nu))
    }

    pub fn concurrences(&self) -> ConcurrencePoint {
        self.point().clamped()
    }
}

pub fn csx4_branches(k: &Csx4Coeffs) -> BranchValues {
    let Csx4Coeffs { a, c, d, f } = *k;
    let (a2, c2, d2, f2) = (a.norm_sqr(), c.norm_sqr(), d.norm_sqr(), f.norm_sqr());
    BranchValues {
        s1_mu: (c * d.conj() + d * c.conj()).norm() / 2f64.sqrt()
            - 2.0 * ((a2 + c2 / 4.0) * (c2 / 4.0 + f2)).sqrt(),
        s1_nu: (a * c.conj() + c * f.conj()).norm() - c2 / 2.0 - d2,
        s2_mu: c2 - 2.0 * ((a2 + d2 / 2.0) * (d2 / 2.0 + f2)).sqrt(),
        s2_nu: 2f64.sqrt() * (a * d.conj() + d * f.conj()).norm() - c2,
    }
}

pub fn csx5_branches(k: &Csx5Coeffs) -> BranchValues {
    let Csx5Coeffs { a, c, d, g } = *k;
    let (a2, c2, d2, g2) = (a.norm_sqr(), c.norm_sqr(), d.norm_sqr(), g.norm_sqr());
    let r5 = 5f64.sqrt();
    let cross = 2.0 * (c * d.conj()).re;
    BranchValues {
        s1_mu: 0.4
            * ((cross + d2 + g2).abs()
                - ((5.0 * a2 + 2.0 * c2 + d2) * (c2 + 3.0 * g2)).sqrt()),
        s1_nu: 0.4 * ((a * c.conj() * r5 + c * g.conj() * 2.0 + d * g.conj()).norm()
            - c2
            - 2.0 * d2
            - g2),
        s2_mu: 0.4
            * ((cross + c2 + g2).abs()
                - ((5.0 * a2 + c2 + 2.0 * d2) * (d2 + 3.0 * g2)).sqrt()),
        s2_nu: 0.4 * ((a * d.conj() * r5 + d * g.conj() * 2.0 + c * g.conj()).norm()
            - 2.0 * c2
            - d2
            - g2),
    }
}

/// Branch values for real coefficients, which need not be normalized beforehand.
pub fn csx4_branches_real(a: f64, c: f64, d: f64, f: f64) -> BranchValues {
    let n = (a * a + c * c + d * d + f * f).sqrt();
    csx4_branches(&Csx4Coeffs {
        a: (a / n).into(),
        c: (c / n).into(),
        d: (d / n).into(),
        f: (f / n).into(),
    })
}

pub fn csx5_branches_real(a: f64, c: f64, d: f64, g: f64) -> BranchValues {
    let n = (a * a + c * c + d * d + g * g).sqrt();
    csx5_branches(&Csx5Coeffs {
        a: (a / n).into(),
        c: (c / n).into(),
        d: (d / n).into(),
        g: (g / n).into(),
    })
}

/// Branches of a 4- or 5-qubit even-weight CS state.
pub fn csx_branches(state: &CsState) -> Result<BranchValues> {
    match state.n() {
        4 => Ok(csx4_branches(&Csx4Coeffs::from_state(state)?)),
        5 => Ok(csx5_branches(&Csx5Coeffs::from_state(state)?)),
        n => Err(argument(format!("closed forms exist for 4 and 5 qubits, not {n}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::spacing_subconcurrences;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn four_qubit_examples() {
        let t = 1.0 / 3f64.sqrt();
        let b = csx4_branches(&Csx4Coeffs::real(t, t, 0.0, t).unwrap());
        assert!(close(b.s1_nu, 0.5));

        let b = csx4_branches(&Csx4Coeffs::real(0.0, 1.0, 0.0, 0.0).unwrap());
        assert!(close(b.s1_mu, -0.5));
        assert!(close(b.s2_mu, 1.0));

        let b = csx4_branches(&Csx4Coeffs::real(t, 0.0, t, t).unwrap());
        assert!(close(b.s2_nu, 2.0 * 2f64.sqrt() / 3.0));
    }

    #[test]
    fn five_qubit_examples() {
        let b = csx5_branches(&Csx5Coeffs::real(0.0, 0.298, 0.955, 0.0).unwrap());
        assert!((b.s1_mu - 0.468).abs() < 1e-3);

        let b = csx5_branches(&Csx5Coeffs::real(1.0, 0.0, 0.0, 0.0).unwrap());
        assert!(b.as_array().iter().all(|&v| v <= 0.0));
    }

    #[test]
    fn five_qubit_swap_exchanges_spacings() {
        let k = Csx5Coeffs::normalized(
            C64::new(0.3, 0.1),
            C64::new(-0.2, 0.5),
            C64::new(0.4, -0.3),
            C64::new(0.1, 0.2),
        )
        .unwrap();
        let b = csx5_branches(&k);
        let s = csx5_branches(&k.swap_cd());
        assert_eq!((b.s1_mu, b.s1_nu), (s.s2_mu, s.s2_nu));
        assert_eq!((b.s2_mu, b.s2_nu), (s.s1_mu, s.s1_nu));
    }

    #[test]
    fn closed_forms_match_generic_on_complex_points() {
        // opposite-sign cross term: Re(c d*) < 0
        let k5 = Csx5Coeffs::normalized(
            C64::new(0.2, 0.0),
            C64::new(0.6, 0.1),
            C64::new(-0.5, 0.2),
            C64::new(0.1, -0.3),
        )
        .unwrap();
        let generic = spacing_subconcurrences(&k5.to_state()).unwrap();
        let closed = csx5_branches(&k5).point();
        assert!((generic.s1 - closed.s1).abs() < 1e-10);
        assert!((generic.s2 - closed.s2).abs() < 1e-10);

        let k4 = Csx4Coeffs::normalized(
            C64::new(0.4, -0.1),
            C64::new(0.3, 0.5),
            C64::new(-0.2, 0.4),
            C64::new(0.2, 0.1),
        )
        .unwrap();
        let generic = spacing_subconcurrences(&k4.to_state()).unwrap();
        let closed = csx4_branches(&k4).point();
        assert!((generic.s1 - closed.s1).abs() < 1e-10);
        assert!((generic.s2 - closed.s2).abs() < 1e-10);
    }

    #[test]
    fn coefficient_validation() {
        let one = C64::new(1.0, 0.0);
        assert!(Csx4Coeffs::new(one, one, ZERO, ZERO).is_err());
        assert!(Csx4Coeffs::normalized(one, one, ZERO, ZERO).is_ok());
        assert!(Csx5Coeffs::normalized(ZERO, ZERO, ZERO, ZERO).is_err());
        assert!(Csx4Coeffs::new(C64::new(f64::NAN, 0.0), ZERO, ZERO, ZERO).is_err());
    }

    #[test]
    fn state_round_trip() {
        let k = Csx5Coeffs::real(0.1, 0.2, 0.3, 0.4).unwrap();
        let s = k.to_state();
        assert!(s.is_csx());
        assert_eq!(s.amplitude("01111").unwrap(), k.g);
        assert_eq!(Csx5Coeffs::from_state(&s).unwrap(), k);
        let k = Csx4Coeffs::real(0.1, 0.2, 0.3, 0.4).unwrap();
        assert_eq!(k.to_state().amplitude("0101").unwrap(), k.d);
        assert!(csx_branches(&crate::cyclic::dicke(4, 1).unwrap()).is_err());
    }
}
