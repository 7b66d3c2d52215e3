//! Two-qubit concurrence, the X-state shortcut, and pair reductions of CS states.

use serde::{Deserialize, Serialize};

use crate::cyclic::{embed, CsState};
use crate::error::{argument, validation, Error, Result};
use crate::linalg::{
    hermitian_eig, partial_trace, sigma_yy, ComplexMatrix, C64, HERMITIAN_TOL, PSD_CLAMP,
};

/// Slack on the unit trace of a density matrix.
pub const TRACE_TOL: f64 = 1e-10;

/// Largest tolerated magnitude outside the X pattern.
pub const X_TOL: f64 = 1e-10;

/// Reduced state of parties `0` and `spacing`.
pub fn pair_rdm(state: &CsState, spacing: usize) -> Result<ComplexMatrix> {
    let n = state.n();
    if spacing == 0 || spacing > n / 2 {
        return Err(argument(format!(
            "spacing {spacing} outside 1..={} for {n} qubits",
            n / 2
        )));
    }
    partial_trace(&embed(state), &[0, spacing])
}

/// Descending `λ₁ ≥ … ≥ λ₄ ≥ 0`, the square roots of the spectrum of `ρρ̃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WoottersSpectrum {
    pub lambdas: [f64; 4],
}

impl WoottersSpectrum {
    /// `λ₁ − λ₂ − λ₃ − λ₄`.
    pub fn subconcurrence(&self) -> f64 {
        let [l1, l2, l3, l4] = self.lambdas;
        l1 - l2 - l3 - l4
    }

    pub fn concurrence(&self) -> f64 {
        self.subconcurrence().max(0.0)
    }
}

fn check_density(rho: &ComplexMatrix) -> Result<()> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(argument(format!(
            "expected a 4x4 density matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let defect = rho.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(validation(format!("density matrix is not Hermitian (defect {defect:e})")));
    }
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return Err(validation(format!("density matrix trace {tr} differs from 1")));
    }
    Ok(())
}

/// Wootters spectrum of a two-qubit density matrix.
///
/// With `ρ = A A†` the `λᵢ` are the singular values of `X = Aᵀ (σy⊗σy) A`.
/// They are read off as the positive half of the spectrum of the Hermitian
/// dilation `[[0, X], [X†, 0]]`, which keeps absolute accuracy near zero
/// instead of square-rooting roundoff.
pub fn wootters_spectrum(rho: &ComplexMatrix) -> Result<WoottersSpectrum> {
    check_density(rho)?;
    let eig = hermitian_eig(rho)?;
    let low = eig.values[3];
    if low < -PSD_CLAMP {
        return Err(validation(format!("density matrix has negative eigenvalue {low:e}")));
    }

    let mut a = ComplexMatrix::zeros(4, 4);
    for k in 0..4 {
        let w = eig.values[k].max(0.0).sqrt();
        for i in 0..4 {
            a[(i, k)] = eig.vectors[(i, k)] * w;
        }
    }
    let x = a.transpose().matmul(&sigma_yy()).matmul(&a);

    let mut dil = ComplexMatrix::zeros(8, 8);
    for i in 0..4 {
        for j in 0..4 {
            dil[(i, j + 4)] = x[(i, j)];
            dil[(j + 4, i)] = x[(i, j)].conj();
        }
    }
    let sv = hermitian_eig(&dil)?.values;
    let mut lambdas = [0.0; 4];
    for (l, &s) in lambdas.iter_mut().zip(&sv) {
        *l = s.max(0.0);
    }
    Ok(WoottersSpectrum { lambdas })
}

/// Unclamped `λ₁ − λ₂ − λ₃ − λ₄`.
pub fn subconcurrence(rho: &ComplexMatrix) -> Result<f64> {
    Ok(wootters_spectrum(rho)?.subconcurrence())
}

pub fn concurrence(rho: &ComplexMatrix) -> Result<f64> {
    Ok(wootters_spectrum(rho)?.concurrence())
}

/// Entries of an X-shaped two-qubit density matrix:
///
/// ```text
/// α 0 0 ν
/// 0 β μ 0
/// 0 μ* γ 0
/// ν* 0 0 δ
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub mu: C64,
    pub nu: C64,
}

impl XParams {
    pub fn assemble(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 0)] = C64::new(self.alpha, 0.0);
        m[(1, 1)] = C64::new(self.beta, 0.0);
        m[(2, 2)] = C64::new(self.gamma, 0.0);
        m[(3, 3)] = C64::new(self.delta, 0.0);
        m[(1, 2)] = self.mu;
        m[(2, 1)] = self.mu.conj();
        m[(0, 3)] = self.nu;
        m[(3, 0)] = self.nu.conj();
        m
    }
}

fn is_x_slot(i: usize, j: usize) -> bool {
    i == j || i + j == 3
}

/// Reads the six X entries, refusing matrices with weight elsewhere.
pub fn extract_x(rho: &ComplexMatrix) -> Result<XParams> {
    check_density(rho)?;
    let mut worst: Option<(usize, usize, f64)> = None;
    for i in 0..4 {
        for j in 0..4 {
            if is_x_slot(i, j) {
                continue;
            }
            let m = rho[(i, j)].norm();
            if m > X_TOL && worst.is_none_or(|(_, _, w)| m > w) {
                worst = Some((i, j, m));
            }
        }
    }
    if let Some((row, col, magnitude)) = worst {
        return Err(Error::NotXShape { row, col, magnitude });
    }
    let low = hermitian_eig(rho)?.values[3];
    if low < -PSD_CLAMP {
        return Err(validation(format!("density matrix has negative eigenvalue {low:e}")));
    }
    Ok(XParams {
        alpha: rho[(0, 0)].re,
        beta: rho[(1, 1)].re,
        gamma: rho[(2, 2)].re,
        delta: rho[(3, 3)].re,
        mu: rho[(1, 2)],
        nu: rho[(0, 3)],
    })
}

/// Both unclamped X-state branches `(2(|μ| − √(αδ)), 2(|ν| − √(βγ)))`.
///
/// The subconcurrence is their maximum and the concurrence is `max(0, ·)` of that.
pub fn x_subconcurrences(p: &XParams) -> (f64, f64) {
    let ad = (p.alpha * p.delta).max(0.0).sqrt();
    let bg = (p.beta * p.gamma).max(0.0).sqrt();
    (2.0 * (p.mu.norm() - ad), 2.0 * (p.nu.norm() - bg))
}

/// Subconcurrences at spacings 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrencePoint {
    pub s1: f64,
    pub s2: f64,
}

impl ConcurrencePoint {
    pub fn new(s1: f64, s2: f64) -> Self {
        Self { s1, s2 }
    }

    pub fn clamped(&self) -> Self {
        Self::new(self.s1.max(0.0), self.s2.max(0.0))
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.s2, self.s1)
    }
}

/// Generic spacing-1 and spacing-2 subconcurrences of a CS state (n ≥ 4).
pub fn spacing_subconcurrences(state: &CsState) -> Result<ConcurrencePoint> {
    if state.n() < 4 {
        return Err(argument("spacing 2 needs at least 4 qubits"));
    }
    let v = embed(state);
    let s1 = wootters_spectrum(&partial_trace(&v, &[0, 1])?)?.subconcurrence();
    let s2 = wootters_spectrum(&partial_trace(&v, &[0, 2])?)?.subconcurrence();
    Ok(ConcurrencePoint::new(s1, s2))
}

/// Subconcurrence at every spacing `1..=n/2`.
pub fn all_spacings(state: &CsState) -> Result<Vec<f64>> {
    let v = embed(state);
    (1..=state.n() / 2)
        .map(|k| subconcurrence(&partial_trace(&v, &[0, k])?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::{dicke, spaced_product};
    use crate::linalg::{matrix_sqrt_psd, spin_flip, ZERO};

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn bell() -> ComplexMatrix {
        ComplexMatrix::outer(&[C64::new(H, 0.0), ZERO, ZERO, C64::new(H, 0.0)])
    }

    fn mixed() -> ComplexMatrix {
        ComplexMatrix::diag(&[0.25; 4])
    }

    // square roots of eig(√ρ ρ̃ √ρ); loses accuracy near zero but is independent
    fn oracle_lambdas(rho: &ComplexMatrix) -> Vec<f64> {
        let s = matrix_sqrt_psd(rho).unwrap();
        let m = s.matmul(&spin_flip(rho).unwrap()).matmul(&s);
        hermitian_eig(&m)
            .unwrap()
            .values
            .iter()
            .map(|e| e.max(0.0).sqrt())
            .collect()
    }

    #[test]
    fn spectrum_examples() {
        let w = wootters_spectrum(&mixed()).unwrap();
        for l in w.lambdas {
            assert!((l - 0.25).abs() < 1e-14);
        }
        let w = wootters_spectrum(&bell()).unwrap();
        assert!((w.lambdas[0] - 1.0).abs() < 1e-14);
        assert!(w.lambdas[1..].iter().all(|l| l.abs() < 1e-14));
    }

    #[test]
    fn spectrum_of_x_form() {
        let p = XParams {
            alpha: 0.4,
            beta: 0.25,
            gamma: 0.15,
            delta: 0.2,
            mu: C64::new(0.1, 0.08),
            nu: C64::new(-0.05, 0.2),
        };
        let mut expected = vec![
            (p.beta * p.gamma).sqrt() + p.mu.norm(),
            (p.beta * p.gamma).sqrt() - p.mu.norm(),
            (p.alpha * p.delta).sqrt() + p.nu.norm(),
            (p.alpha * p.delta).sqrt() - p.nu.norm(),
        ];
        expected.sort_by(|a, b| b.total_cmp(a));
        let w = wootters_spectrum(&p.assemble()).unwrap();
        for (l, e) in w.lambdas.iter().zip(&expected) {
            assert!((l - e).abs() < 1e-13);
        }
        let (s_mu, s_nu) = x_subconcurrences(&p);
        assert!((w.subconcurrence() - s_mu.max(s_nu)).abs() < 1e-13);
    }

    #[test]
    fn spectrum_agrees_with_sqrt_route() {
        let s = CsState::normalized(
            4,
            (0..6).map(|i| C64::new(0.3 + 0.1 * i as f64, 0.2 - 0.13 * i as f64)).collect(),
        )
        .unwrap();
        let rho = pair_rdm(&s, 1).unwrap();
        let w = wootters_spectrum(&rho).unwrap();
        for (a, b) in w.lambdas.iter().zip(oracle_lambdas(&rho)) {
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
    }

    #[test]
    fn spectrum_rejects_bad_input() {
        assert!(matches!(
            wootters_spectrum(&ComplexMatrix::diag(&[0.5, 0.5])),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            wootters_spectrum(&ComplexMatrix::diag(&[0.6, 0.6, -0.1, -0.1])),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            wootters_spectrum(&ComplexMatrix::diag(&[0.5, 0.5, 0.5, 0.5])),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn subconcurrence_examples() {
        assert!((subconcurrence(&mixed()).unwrap() + 0.5).abs() < 1e-14);
        assert!((subconcurrence(&bell()).unwrap() - 1.0).abs() < 1e-14);
        let w4 = pair_rdm(&dicke(4, 1).unwrap(), 1).unwrap();
        assert!((subconcurrence(&w4).unwrap() - 0.5).abs() < 1e-13);
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&bell()).unwrap() - 1.0).abs() < 1e-14);
        let w3 = pair_rdm(&dicke(3, 1).unwrap(), 1).unwrap();
        assert!((concurrence(&w3).unwrap() - 2.0 / 3.0).abs() < 1e-13);
        let p = pair_rdm(&spaced_product(4, 2).unwrap(), 1).unwrap();
        assert_eq!(concurrence(&p).unwrap(), 0.0);
    }

    #[test]
    fn pair_rdm_examples() {
        let s = spaced_product(4, 2).unwrap();
        assert!(pair_rdm(&s, 2).unwrap().max_abs_diff(&bell()) < 1e-14);
        assert!(pair_rdm(&s, 1).unwrap().max_abs_diff(&mixed()) < 1e-14);

        let w = pair_rdm(&dicke(4, 1).unwrap(), 1).unwrap();
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected[(0, 0)] = C64::new(0.5, 0.0);
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            expected[(i, j)] = C64::new(0.25, 0.0);
        }
        assert!(w.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn pair_rdm_rejects_bad_spacing() {
        let s = dicke(5, 2).unwrap();
        assert!(pair_rdm(&s, 0).is_err());
        assert!(pair_rdm(&s, 3).is_err());
        assert!(pair_rdm(&s, 2).is_ok());
    }

    #[test]
    fn extract_x_examples() {
        let p = extract_x(&bell()).unwrap();
        assert!((p.alpha - 0.5).abs() < 1e-15 && (p.delta - 0.5).abs() < 1e-15);
        assert!((p.nu - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!((p.beta, p.gamma, p.mu), (0.0, 0.0, ZERO));

        let p = extract_x(&mixed()).unwrap();
        assert_eq!(p.alpha, 0.25);
        assert_eq!(p.mu, ZERO);
        assert!(p.assemble().max_abs_diff(&mixed()) < 1e-15);
    }

    #[test]
    fn extract_x_reports_worst_entry() {
        let mut m = mixed();
        m[(0, 1)] = C64::new(0.01, 0.0);
        m[(1, 0)] = C64::new(0.01, 0.0);
        m[(2, 3)] = C64::new(0.0, 0.05);
        m[(3, 2)] = C64::new(0.0, -0.05);
        match extract_x(&m) {
            Err(Error::NotXShape { row, col, magnitude }) => {
                assert_eq!((row, col), (2, 3));
                assert!((magnitude - 0.05).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn x_branch_examples() {
        let (m, n) = x_subconcurrences(&extract_x(&bell()).unwrap());
        assert!((m + 1.0).abs() < 1e-14 && (n - 1.0).abs() < 1e-14);
        let (m, n) = x_subconcurrences(&extract_x(&mixed()).unwrap());
        assert!((m + 0.5).abs() < 1e-14 && (n + 0.5).abs() < 1e-14);
        let w = XParams {
            alpha: 0.5,
            beta: 0.25,
            gamma: 0.25,
            delta: 0.0,
            mu: C64::new(0.25, 0.0),
            nu: ZERO,
        };
        let (m, n) = x_subconcurrences(&w);
        assert!((m - 0.5).abs() < 1e-14 && (n + 0.5).abs() < 1e-14);
    }

    #[test]
    fn spacing_helpers() {
        let s = spaced_product(4, 2).unwrap();
        let p = spacing_subconcurrences(&s).unwrap();
        assert!((p.s1 + 0.5).abs() < 1e-13 && (p.s2 - 1.0).abs() < 1e-13);
        assert_eq!(all_spacings(&s).unwrap().len(), 2);
        assert!(spacing_subconcurrences(&dicke(3, 1).unwrap()).is_err());
    }
}
