//! Cyclically symmetric states in the necklace basis.
//!
//! A CS state assigns one amplitude to each cyclic orbit ("necklace") of
//! `n`-bit strings; embedding spreads that amplitude uniformly over the
//! orbit members. Orbits are ordered lexicographically by their minimal
//! rotation, which for a fixed `n` is the same as numeric order.

use serde::{Deserialize, Serialize};

use crate::error::{argument, validation, Error, Result};
use crate::linalg::{bit, l2_norm, StateVector, C64, MAX_QUBITS, NORM_TOL, ONE, ZERO};

/// Smallest register for which CS states are defined here.
pub const MIN_QUBITS: usize = 1;

/// One cyclic orbit of `n`-bit strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Necklace {
    n: usize,
    representative: usize,
    orbit_size: usize,
}

impl Necklace {
    /// Orbit of the bit string `bits` (big-endian, qubit 0 first).
    pub fn of(n: usize, bits: usize) -> Result<Self> {
        check_qubits(n)?;
        if bits >= 1 << n {
            return Err(argument(format!("{bits:#b} does not fit in {n} bits")));
        }
        let mut rep = bits;
        let mut size = n;
        let mut r = bits;
        for k in 1..=n {
            r = rotate_left(r, n);
            if r == bits {
                size = k;
                break;
            }
            rep = rep.min(r);
        }
        Ok(Self {
            n,
            representative: rep,
            orbit_size: size,
        })
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        let n = s.len();
        check_qubits(n)?;
        let bits = usize::from_str_radix(s, 2)
            .map_err(|_| argument(format!("'{s}' is not a bit string")))?;
        Self::of(n, bits)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Minimal rotation, as a basis index.
    pub fn representative(&self) -> usize {
        self.representative
    }

    pub fn representative_string(&self) -> String {
        format!("{:0width$b}", self.representative, width = self.n)
    }

    /// Number of distinct rotations (the string's period).
    pub fn orbit_size(&self) -> usize {
        self.orbit_size
    }

    pub fn weight(&self) -> u32 {
        self.representative.count_ones()
    }

    pub fn is_even(&self) -> bool {
        self.weight().is_multiple_of(2)
    }

    /// Basis indices of the orbit members, ascending.
    pub fn members(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.orbit_size);
        let mut r = self.representative;
        for _ in 0..self.orbit_size {
            out.push(r);
            r = rotate_left(r, self.n);
        }
        out.sort_unstable();
        out
    }
}

fn rotate_left(x: usize, n: usize) -> usize {
    let mask = (1usize << n) - 1;
    ((x << 1) | (x >> (n - 1))) & mask
}

fn check_qubits(n: usize) -> Result<()> {
    if !(MIN_QUBITS..=MAX_QUBITS).contains(&n) {
        return Err(argument(format!(
            "qubit count {n} outside {MIN_QUBITS}..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// All cyclic orbits of `n`-bit strings in lexicographic order.
pub fn necklaces(n: usize) -> Result<Vec<Necklace>> {
    check_qubits(n)?;
    let mut out = Vec::new();
    for x in 0..(1usize << n) {
        let neck = Necklace::of(n, x)?;
        if neck.representative == x {
            out.push(neck);
        }
    }
    Ok(out)
}

/// Orbits of even Hamming weight (the CSX subspace).
pub fn even_necklaces(n: usize) -> Result<Vec<Necklace>> {
    Ok(necklaces(n)?.into_iter().filter(Necklace::is_even).collect())
}

/// Position of the orbit containing `bits` within [`necklaces`]`(n)`.
fn orbit_index(orbits: &[Necklace], n: usize, bits: usize) -> usize {
    let rep = Necklace::of(n, bits)
        .expect("bits are in range")
        .representative;
    orbits
        .binary_search_by_key(&rep, |o| o.representative)
        .expect("every string belongs to an orbit")
}

/// A pure cyclically symmetric state, one amplitude per necklace.
#[derive(Debug, Clone, PartialEq)]
pub struct CsState {
    n: usize,
    orbits: Vec<Necklace>,
    amps: Vec<C64>,
}

impl CsState {
    /// Builds a state from amplitudes ordered like [`necklaces`]`(n)`.
    pub fn new(n: usize, amps: Vec<C64>) -> Result<Self> {
        let state = Self::unchecked(n, amps)?;
        let norm = l2_norm(&state.amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(validation(format!("CS state norm {norm} differs from 1")));
        }
        Ok(state)
    }

    /// Like [`CsState::new`] but rescales to unit norm first.
    pub fn normalized(n: usize, mut amps: Vec<C64>) -> Result<Self> {
        let norm = l2_norm(&amps);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(validation("cannot normalize a zero or non-finite CS state"));
        }
        amps.iter_mut().for_each(|z| *z /= norm);
        Self::new(n, amps)
    }

    /// Builds a state from `(representative, amplitude)` pairs; unnamed orbits are zero.
    /// The result is normalized.
    pub fn from_orbits(n: usize, entries: &[(&str, C64)]) -> Result<Self> {
        let orbits = necklaces(n)?;
        let mut amps = vec![ZERO; orbits.len()];
        for (rep, z) in entries {
            let neck = Necklace::parse(rep)?;
            if neck.n != n {
                return Err(argument(format!("orbit '{rep}' has the wrong length")));
            }
            let i = orbit_index(&orbits, n, neck.representative);
            amps[i] += z;
        }
        Self::normalized(n, amps)
    }

    fn unchecked(n: usize, amps: Vec<C64>) -> Result<Self> {
        let orbits = necklaces(n)?;
        if amps.len() != orbits.len() {
            return Err(argument(format!(
                "{n} qubits have {} orbits, got {} amplitudes",
                orbits.len(),
                amps.len()
            )));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(validation("CS amplitudes must be finite"));
        }
        Ok(Self { n, orbits, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn necklaces(&self) -> &[Necklace] {
        &self.orbits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Amplitude of the orbit containing the bit string `rep`.
    pub fn amplitude(&self, rep: &str) -> Result<C64> {
        let neck = Necklace::parse(rep)?;
        if neck.n != self.n {
            return Err(argument(format!("orbit '{rep}' has the wrong length")));
        }
        Ok(self.amps[orbit_index(&self.orbits, self.n, neck.representative)])
    }

    /// True when every odd-weight orbit has zero amplitude.
    pub fn is_csx(&self) -> bool {
        self.orbits
            .iter()
            .zip(&self.amps)
            .all(|(o, z)| o.is_even() || *z == ZERO)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// JSON layout: `{"n": 4, "orbits": [{"rep": "0011", "re": 0.5, "im": 0.0}, …]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsStateJson {
    pub n: usize,
    pub orbits: Vec<OrbitAmplitude>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitAmplitude {
    pub rep: String,
    pub re: f64,
    pub im: f64,
}

impl From<&CsState> for CsStateJson {
    fn from(s: &CsState) -> Self {
        Self {
            n: s.n,
            orbits: s
                .orbits
                .iter()
                .zip(&s.amps)
                .map(|(o, z)| OrbitAmplitude {
                    rep: o.representative_string(),
                    re: z.re,
                    im: z.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<CsStateJson> for CsState {
    type Error = Error;

    fn try_from(j: CsStateJson) -> Result<Self> {
        let orbits = necklaces(j.n)?;
        let mut amps = vec![ZERO; orbits.len()];
        let mut seen = vec![false; orbits.len()];
        for entry in &j.orbits {
            let neck = Necklace::parse(&entry.rep)?;
            if neck.n != j.n {
                return Err(argument(format!("orbit '{}' has the wrong length", entry.rep)));
            }
            if neck.representative_string() != entry.rep {
                return Err(argument(format!(
                    "'{}' is not a minimal rotation (expected '{}')",
                    entry.rep,
                    neck.representative_string()
                )));
            }
            let i = orbit_index(&orbits, j.n, neck.representative);
            if seen[i] {
                return Err(argument(format!("orbit '{}' listed twice", entry.rep)));
            }
            seen[i] = true;
            amps[i] = C64::new(entry.re, entry.im);
        }
        CsState::new(j.n, amps)
    }
}

impl Serialize for CsState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CsStateJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CsState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let j = CsStateJson::deserialize(deserializer)?;
        CsState::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Expands a CS state into the computational basis.
pub fn embed(state: &CsState) -> StateVector {
    let n = state.n;
    let mut amps = vec![ZERO; 1 << n];
    for (orbit, &z) in state.orbits.iter().zip(&state.amps) {
        if z == ZERO {
            continue;
        }
        let w = z / (orbit.orbit_size as f64).sqrt();
        for x in orbit.members() {
            amps[x] = w;
        }
    }
    StateVector::normalized(n, amps).expect("CS states have unit norm")
}

/// Result of projecting an arbitrary vector onto the CS subspace.
#[derive(Debug, Clone)]
pub struct CsProjection {
    /// The normalized cyclic component.
    pub state: CsState,
    /// Norm of the cyclic component before normalization.
    pub weight: f64,
    /// Norm of the non-cyclic remainder.
    pub residual: f64,
}

/// Orthogonal projection onto the CS subspace.
pub fn project_cs(vector: &StateVector) -> Result<CsProjection> {
    let n = vector.num_qubits();
    let orbits = necklaces(n)?;
    let v = vector.amplitudes();
    let raw: Vec<C64> = orbits
        .iter()
        .map(|o| {
            let sum: C64 = o.members().into_iter().map(|x| v[x]).sum();
            sum / (o.orbit_size as f64).sqrt()
        })
        .collect();
    let weight = l2_norm(&raw);

    let mut residual_sq = 0.0;
    for (o, &z) in orbits.iter().zip(&raw) {
        let w = z / (o.orbit_size as f64).sqrt();
        for x in o.members() {
            residual_sq += (v[x] - w).norm_sqr();
        }
    }
    if weight < 1e-12 {
        return Err(validation("vector has no cyclically symmetric component"));
    }
    let state = CsState::normalized(n, raw)?;
    Ok(CsProjection {
        state,
        weight,
        residual: residual_sq.sqrt(),
    })
}

/// Party relabelling `i ↦ m·i mod n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Relabeling {
    n: usize,
    m: usize,
}

impl Relabeling {
    /// Requires `gcd(m, n) = 1`, which is exactly when the map is a bijection.
    pub fn new(n: usize, m: usize) -> Result<Self> {
        check_qubits(n)?;
        let m = m % n;
        if gcd(m, n) != 1 {
            return Err(argument(format!(
                "multiplier {m} is not invertible modulo {n}"
            )));
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn multiplier(&self) -> usize {
        self.m
    }

    pub fn apply(&self, party: usize) -> usize {
        (self.m * party) % self.n
    }

    /// Spacing `k` maps to spacing `m·k mod n`, folded into `1..=n/2`.
    pub fn map_spacing(&self, k: usize) -> usize {
        let s = (self.m * k) % self.n;
        s.min(self.n - s)
    }

    pub fn inverse(&self) -> Self {
        let inv = (1..self.n.max(2))
            .find(|&x| (x * self.m) % self.n == 1 % self.n)
            .unwrap_or(1);
        Self { n: self.n, m: inv }
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Relabels parties so that qubit `i` of the input becomes qubit `π(i)` of the output.
///
/// Orbits map onto orbits and uniform orbit superpositions map onto uniform
/// superpositions, so the result is a permutation of orbit amplitudes with no
/// extra phases.
pub fn relabel(state: &CsState, r: &Relabeling) -> Result<CsState> {
    let n = state.n;
    if r.n != n {
        return Err(argument(format!(
            "relabeling is for {} qubits, state has {n}",
            r.n
        )));
    }
    let mut amps = vec![ZERO; state.amps.len()];
    for (orbit, &z) in state.orbits.iter().zip(&state.amps) {
        let x = orbit.representative;
        let mut y = 0usize;
        for q in 0..n {
            if bit(x, q, n) {
                y |= 1 << (n - 1 - r.apply(q));
            }
        }
        amps[orbit_index(&state.orbits, n, y)] = z;
    }
    CsState::new(n, amps)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Symmetric Dicke state with `j` excitations.
pub fn dicke(n: usize, j: usize) -> Result<CsState> {
    check_qubits(n)?;
    if j > n {
        return Err(argument(format!("excitation count {j} exceeds {n}")));
    }
    let orbits = necklaces(n)?;
    let norm = binomial(n, j).sqrt();
    let amps = orbits
        .iter()
        .map(|o| {
            if o.weight() as usize == j {
                C64::new((o.orbit_size as f64).sqrt() / norm, 0.0)
            } else {
                ZERO
            }
        })
        .collect();
    CsState::normalized(n, amps)
}

/// Adjacent-concurrence maximizer on `m` qubits, for `m ∈ {2, 3}`.
fn adjacent_maximizer(m: usize) -> Result<StateVector> {
    match m {
        2 => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            StateVector::new(2, vec![C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)])
        }
        3 => embed(&dicke(3, 1)?).permute_qubits(&[0, 1, 2]),
        _ => Err(Error::Unsupported(format!(
            "no adjacent-concurrence maximizer is known for {m} qubits"
        ))),
    }
}

/// `k` interleaved copies of the `(n/k)`-qubit adjacent maximizer.
///
/// Copy `i` occupies parties `{i, i+k, i+2k, …}`, so its internal neighbours
/// sit at spacing `k` in the full register.
pub fn spaced_product(n: usize, k: usize) -> Result<CsState> {
    check_qubits(n)?;
    if k == 0 || !n.is_multiple_of(k) {
        return Err(argument(format!("spacing {k} does not divide {n}")));
    }
    let m = n / k;
    if m < 2 {
        return Err(Error::Unsupported(format!(
            "spacing {k} leaves single-qubit blocks in a {n}-qubit register"
        )));
    }
    let block = adjacent_maximizer(m)?;
    let b = block.amplitudes();
    let mut amps = vec![ONE; 1 << n];
    for (x, amp) in amps.iter_mut().enumerate() {
        for i in 0..k {
            let mut local = 0usize;
            for j in 0..m {
                local = (local << 1) | bit(x, i + j * k, n) as usize;
            }
            *amp *= b[local];
        }
    }
    let full = StateVector::new(n, amps)?;
    let proj = project_cs(&full)?;
    if proj.residual > 1e-12 {
        return Err(validation(format!(
            "spaced product is not cyclic (residual {:e})",
            proj.residual
        )));
    }
    Ok(proj.state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn necklace_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| necklaces(n).unwrap().len()).collect();
        assert_eq!(counts, vec![2, 3, 4, 6, 8, 14]);
    }

    #[test]
    fn four_qubit_orbits() {
        let reps: Vec<String> = necklaces(4)
            .unwrap()
            .iter()
            .map(Necklace::representative_string)
            .collect();
        assert_eq!(reps, ["0000", "0001", "0011", "0101", "0111", "1111"]);
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(Necklace::parse("0101").unwrap().orbit_size(), 2);
        assert_eq!(Necklace::parse("0011").unwrap().orbit_size(), 4);
        assert_eq!(Necklace::parse("1111").unwrap().orbit_size(), 1);
        assert_eq!(Necklace::parse("011011").unwrap().orbit_size(), 3);
        assert_eq!(Necklace::parse("1001").unwrap().representative_string(), "0011");
    }

    #[test]
    fn necklaces_rejects_bad_n() {
        assert!(necklaces(0).is_err());
        assert!(necklaces(7).is_err());
    }

    #[test]
    fn csx_orbits() {
        let reps: Vec<String> = even_necklaces(5)
            .unwrap()
            .iter()
            .map(Necklace::representative_string)
            .collect();
        assert_eq!(reps, ["00000", "00011", "00101", "01111"]);
    }

    #[test]
    fn embed_examples() {
        let s = CsState::from_orbits(4, &[("0011", c(1.0))]).unwrap();
        let v = embed(&s);
        for x in [0b0011, 0b1001, 0b1100, 0b0110] {
            assert!((v.amplitudes()[x] - c(0.5)).norm() < 1e-15);
        }

        let s = CsState::from_orbits(4, &[("0000", c(1.0))]).unwrap();
        assert_eq!(embed(&s).amplitudes()[0], ONE);

        let s = CsState::from_orbits(4, &[("0101", c(1.0))]).unwrap();
        let v = embed(&s);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v.amplitudes()[0b0101] - c(h)).norm() < 1e-15);
        assert!((v.amplitudes()[0b1010] - c(h)).norm() < 1e-15);
    }

    #[test]
    fn projection_of_single_ket() {
        let v = StateVector::basis(4, 0b0001).unwrap();
        let p = project_cs(&v).unwrap();
        assert!((p.weight - 0.5).abs() < 1e-15);
        assert!((p.residual - 0.75f64.sqrt()).abs() < 1e-15);
        assert!((p.state.amplitude("0001").unwrap() - ONE).norm() < 1e-15);
    }

    #[test]
    fn projection_rejects_non_cyclic_vector() {
        // |01⟩ - |10⟩ is antisymmetric under the 2-cycle
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = StateVector::new(2, vec![ZERO, c(h), c(-h), ZERO]).unwrap();
        assert!(project_cs(&v).is_err());
    }

    #[test]
    fn relabeling_requires_unit() {
        assert!(Relabeling::new(6, 4).is_err());
        assert!(Relabeling::new(6, 2).is_err());
        assert!(Relabeling::new(6, 5).is_ok());
        assert!(Relabeling::new(5, 2).is_ok());
        assert_eq!(Relabeling::new(5, 2).unwrap().inverse().multiplier(), 3);
    }

    #[test]
    fn relabel_swaps_five_qubit_orbits() {
        let s = CsState::from_orbits(
            5,
            &[("00000", c(0.1)), ("00011", c(0.7)), ("00101", c(0.2)), ("01111", c(0.4))],
        )
        .unwrap();
        let t = relabel(&s, &Relabeling::new(5, 2).unwrap()).unwrap();
        assert_eq!(t.amplitude("00011").unwrap(), s.amplitude("00101").unwrap());
        assert_eq!(t.amplitude("00101").unwrap(), s.amplitude("00011").unwrap());
        assert_eq!(t.amplitude("00000").unwrap(), s.amplitude("00000").unwrap());
        assert_eq!(t.amplitude("01111").unwrap(), s.amplitude("01111").unwrap());
    }

    #[test]
    fn relabel_matches_explicit_qubit_permutation() {
        let s = CsState::normalized(
            5,
            (0..8).map(|i| C64::new(0.1 * i as f64 + 0.05, 0.3 - 0.07 * i as f64)).collect(),
        )
        .unwrap();
        let r = Relabeling::new(5, 2).unwrap();
        let perm: Vec<usize> = (0..5).map(|q| r.apply(q)).collect();
        let expected = embed(&s).permute_qubits(&perm).unwrap();
        let got = embed(&relabel(&s, &r).unwrap());
        assert!(got.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn relabel_identity_and_inverse() {
        let s = CsState::normalized(5, (0..8).map(|i| c(i as f64 + 1.0)).collect()).unwrap();
        let id = relabel(&s, &Relabeling::new(5, 1).unwrap()).unwrap();
        assert_eq!(id, s);
        let there = relabel(&s, &Relabeling::new(5, 2).unwrap()).unwrap();
        let back = relabel(&there, &Relabeling::new(5, 3).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn dicke_examples() {
        let w4 = dicke(4, 1).unwrap();
        assert!((w4.amplitude("0001").unwrap() - ONE).norm() < 1e-15);

        let w3 = embed(&dicke(3, 1).unwrap());
        let t = 1.0 / 3f64.sqrt();
        for x in [0b001, 0b010, 0b100] {
            assert!((w3.amplitudes()[x] - c(t)).norm() < 1e-15);
        }

        assert_eq!(embed(&dicke(4, 0).unwrap()).amplitudes()[0], ONE);
        assert!(dicke(4, 5).is_err());
    }

    #[test]
    fn dicke_spans_several_orbits() {
        // weight-2 strings of 4 qubits: 0011 (4 members) and 0101 (2 members)
        let d = dicke(4, 2).unwrap();
        assert!((d.amplitude("0011").unwrap() - c((4.0f64 / 6.0).sqrt())).norm() < 1e-15);
        assert!((d.amplitude("0101").unwrap() - c((2.0f64 / 6.0).sqrt())).norm() < 1e-15);
    }

    #[test]
    fn spaced_product_is_interleaved_bell_pairs() {
        let s = spaced_product(4, 2).unwrap();
        assert!((s.amplitude("0000").unwrap() - c(0.5)).norm() < 1e-15);
        assert!((s.amplitude("1111").unwrap() - c(0.5)).norm() < 1e-15);
        assert!((s.amplitude("0101").unwrap() - c(std::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!(s.is_csx());
    }

    #[test]
    fn spaced_product_errors() {
        assert!(matches!(spaced_product(5, 2), Err(Error::Argument(_))));
        assert!(matches!(spaced_product(4, 1), Err(Error::Unsupported(_))));
        assert!(matches!(spaced_product(6, 6), Err(Error::Unsupported(_))));
    }

    #[test]
    fn json_round_trip() {
        let s = CsState::from_orbits(4, &[("0011", C64::new(0.6, 0.1)), ("1111", c(0.5))]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"rep\":\"0011\""));
        let back: CsState = serde_json::from_str(&text).unwrap();
        assert!(back.max_abs_diff(&s) < 1e-15);
    }

    #[test]
    fn json_rejects_non_minimal_rep() {
        let text = r#"{"n":4,"orbits":[{"rep":"1100","re":1.0,"im":0.0}]}"#;
        assert!(serde_json::from_str::<CsState>(text).is_err());
    }
}
