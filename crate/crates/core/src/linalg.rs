//! Dense complex linear algebra for registers of at most six qubits.
//!
//! Everything here works on small matrices (at most 64×64), so the
//! routines favour robustness over speed: the eigensolver is a cyclic
//! complex Jacobi iteration and all products are naive triple loops.
//!
//! Qubit ordering is big-endian throughout: in an `n`-qubit register,
//! qubit 0 is the most significant bit of the basis index.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{argument, validation, Error, Result};

pub type C64 = Complex64;

/// Largest supported register.
pub const MAX_QUBITS: usize = 6;

/// Largest supported matrix dimension (2⁶).
pub const MAX_DIM: usize = 1 << MAX_QUBITS;

/// Hermiticity tolerance accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as roundoff and clamped to 0.
pub const PSD_CLAMP: f64 = 1e-10;

/// Most negative eigenvalue tolerated by [`matrix_sqrt_psd`].
pub const SQRT_NEG_TOL: f64 = 1e-8;

const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(argument("matrix dimensions must be positive"));
        }
        if rows > MAX_DIM || cols > MAX_DIM {
            return Err(Error::Size(format!(
                "{rows}x{cols} exceeds {MAX_DIM}x{MAX_DIM}"
            )));
        }
        if data.len() != rows * cols {
            return Err(argument(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(validation("matrix has non-finite entries"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|m_ij - conj(m_ji)|`; infinite for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// `U† self U`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.adjoint().matmul(self).matmul(u)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Unit-norm pure state of an `n`-qubit register, `n ≤ 6`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

/// Allowed deviation of a state's norm from 1.
pub const NORM_TOL: f64 = 1e-12;

impl StateVector {
    pub fn new(num_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        check_register(num_qubits, amps.len())?;
        let norm = l2_norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(validation(format!("state norm {norm} differs from 1")));
        }
        Ok(Self { num_qubits, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(num_qubits: usize, mut amps: Vec<C64>) -> Result<Self> {
        check_register(num_qubits, amps.len())?;
        let norm = l2_norm(&amps);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(validation("cannot normalize a zero or non-finite vector"));
        }
        amps.iter_mut().for_each(|z| *z /= norm);
        Ok(Self { num_qubits, amps })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits.min(MAX_QUBITS + 1);
        if index >= dim {
            return Err(argument(format!("basis index {index} out of range")));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self::new(num_qubits, amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Tensor product `self ⊗ other` (self on the leading qubits).
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.num_qubits + other.num_qubits;
        if n > MAX_QUBITS {
            return Err(Error::Size(format!("{n} qubits exceeds {MAX_QUBITS}")));
        }
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self {
            num_qubits: n,
            amps,
        })
    }

    /// Moves the content of qubit `q` to qubit `perm[q]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        let n = self.num_qubits;
        check_distinct(perm, n)?;
        if perm.len() != n {
            return Err(argument("permutation length must equal the qubit count"));
        }
        let mut amps = vec![ZERO; self.dim()];
        for (x, &z) in self.amps.iter().enumerate() {
            let mut y = 0usize;
            for (q, &target) in perm.iter().enumerate() {
                if bit(x, q, n) {
                    y |= 1 << (n - 1 - target);
                }
            }
            amps[y] = z;
        }
        Ok(Self {
            num_qubits: n,
            amps,
        })
    }

    /// Cyclic relabelling `q ↦ q + shift (mod n)`.
    pub fn shift_parties(&self, shift: usize) -> Self {
        let n = self.num_qubits;
        let perm: Vec<usize> = (0..n).map(|q| (q + shift) % n).collect();
        self.permute_qubits(&perm)
            .expect("cyclic shift is always a valid permutation")
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn check_register(num_qubits: usize, len: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(argument(format!(
            "qubit count {num_qubits} outside 1..={MAX_QUBITS}"
        )));
    }
    if len != 1 << num_qubits {
        return Err(argument(format!(
            "{num_qubits} qubits need {} amplitudes, got {len}",
            1usize << num_qubits
        )));
    }
    Ok(())
}

fn check_distinct(indices: &[usize], n: usize) -> Result<()> {
    let mut seen = 0u64;
    for &q in indices {
        if q >= n {
            return Err(argument(format!("qubit index {q} out of range 0..{n}")));
        }
        if seen & (1 << q) != 0 {
            return Err(argument(format!("qubit index {q} repeated")));
        }
        seen |= 1 << q;
    }
    Ok(())
}

pub(crate) fn l2_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Value of qubit `q` in basis index `x` of an `n`-qubit register.
#[inline]
pub(crate) fn bit(x: usize, q: usize, n: usize) -> bool {
    (x >> (n - 1 - q)) & 1 == 1
}

/// Kronecker product.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(Error::Size(format!(
            "kron result {rows}x{cols} exceeds {MAX_DIM}x{MAX_DIM}"
        )));
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let s = a[(i, j)];
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = s * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Reduced density matrix of the qubits in `keep` (0-based), in the given order.
pub fn partial_trace(state: &StateVector, keep: &[usize]) -> Result<ComplexMatrix> {
    let n = state.num_qubits;
    if keep.is_empty() {
        return Err(argument("at least one qubit must be kept"));
    }
    check_distinct(keep, n)?;
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let k = keep.len();
    let dk = 1usize << k;
    let dt = 1usize << traced.len();

    // basis index for (kept bits a, traced bits j)
    let compose = |a: usize, j: usize| -> usize {
        let mut x = 0usize;
        for (pos, &q) in keep.iter().enumerate() {
            if (a >> (k - 1 - pos)) & 1 == 1 {
                x |= 1 << (n - 1 - q);
            }
        }
        for (pos, &q) in traced.iter().enumerate() {
            if (j >> (traced.len() - 1 - pos)) & 1 == 1 {
                x |= 1 << (n - 1 - q);
            }
        }
        x
    };

    let amps = state.amplitudes();
    let mut rho = ComplexMatrix::zeros(dk, dk);
    for j in 0..dt {
        for a in 0..dk {
            let pa = amps[compose(a, j)];
            if pa == ZERO {
                continue;
            }
            for b in 0..dk {
                rho[(a, b)] += pa * amps[compose(b, j)].conj();
            }
        }
    }
    Ok(rho)
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Column `i` is the unit eigenvector of `values[i]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(f(e)) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &e) in self.values.iter().enumerate() {
            let w = f(e);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(argument("eigendecomposition needs a square matrix"));
    }
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(validation(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    let n = m.rows;

    // work on the exactly Hermitian part
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.as_slice().iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tol = JACOBI_TOL * scale;

    let mut converged = n == 1;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm())
            .fold(0.0, f64::max);
        if off < tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r < tol * 1e-3 {
                    continue;
                }
                jacobi_rotate(&mut a, &mut v, p, q, apq, r);
            }
        }
    }
    if !converged {
        return Err(validation("Jacobi iteration did not converge"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Applies `A ← G† A G`, `V ← V G` with `G` chosen to annihilate `A[p][q]`.
///
/// `G = diag(1, e^{-iφ}) · R` on the `(p, q)` plane, where `φ = arg A[p][q]`
/// and `R` is the real rotation diagonalizing the resulting real 2×2 block.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, apq: C64, r: f64) {
    let n = a.rows;
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(app - t * r, 0.0);
    a[(q, q)] = C64::new(aqq + t * r, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Principal square root of a Hermitian positive semidefinite matrix.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    if let Some(&low) = eig.values.last() {
        if low < -SQRT_NEG_TOL {
            return Err(validation(format!(
                "matrix has negative eigenvalue {low:e}"
            )));
        }
    }
    Ok(eig.reconstruct_with(|e| e.max(0.0).sqrt()))
}

/// `σ_y ⊗ σ_y`, which is real: anti-diagonal `(-1, 1, 1, -1)`.
pub fn sigma_yy() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 3)] = -ONE;
    m[(1, 2)] = ONE;
    m[(2, 1)] = ONE;
    m[(3, 0)] = -ONE;
    m
}

/// Wootters spin flip `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.rows != 4 || rho.cols != 4 {
        return Err(argument(format!(
            "spin flip needs a 4x4 matrix, got {}x{}",
            rho.rows, rho.cols
        )));
    }
    let yy = sigma_yy();
    Ok(yy.matmul(&rho.conj()).matmul(&yy))
}
