//! Truncated two-chiral-mode ⊗ spin Hilbert space and the operator algebra on it.
//!
//! Basis ordering is fixed for reproducible eigenvector files: flat index
//! `s·(N+1)² + n_r·(N+1) + n_l` with spin `s` (0 = ↑, 1 = ↓) major, then the
//! right-chiral and left-chiral occupation numbers. Orbital-only operators
//! (ladders, quadratures, L_z, SU(1,1) generators, squeeze unitaries) act on
//! the `(N+1)²`-dimensional orbital factor; the Hamiltonian acts on the full
//! `2(N+1)²`-dimensional space.
//!
//! Truncation policy: raising past the cutoff maps to zero (projector
//! truncation). Canonical relations therefore hold exactly on states with
//! occupations ≤ N−2 and degrade only at the basis edge; leakage metrics are
//! surfaced rather than hidden.

use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::DerivedCouplings;

/// Tolerance below which an operator is auto-flagged Hermitian.
const HERMITIAN_TOL: f64 = 1e-12;

/// Spin component, index 0 = ↑.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

/// Chirality of a phonon mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiralMode {
    Right,
    Left,
}

/// Ladder direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Raise,
    Lower,
}

/// Truncated basis: occupations 0..=N per chiral mode, tensored with spin-1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBasis {
    cutoff: usize,
}

impl FockBasis {
    /// A basis with phonon cutoff N ≥ 1 per chiral mode.
    pub fn new(cutoff: usize) -> Self {
        assert!(cutoff >= 1, "cutoff must be at least 1");
        Self { cutoff }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Dimension of the orbital (two-mode) factor: (N+1)².
    pub fn orbital_dim(&self) -> usize {
        (self.cutoff + 1) * (self.cutoff + 1)
    }

    /// Full dimension including spin: 2(N+1)².
    pub fn dim(&self) -> usize {
        2 * self.orbital_dim()
    }

    /// Flat orbital index of |n_r, n_l⟩.
    pub fn orbital_index(&self, n_r: usize, n_l: usize) -> usize {
        debug_assert!(n_r <= self.cutoff && n_l <= self.cutoff);
        n_r * (self.cutoff + 1) + n_l
    }

    /// Flat full-space index of |s, n_r, n_l⟩.
    pub fn index(&self, spin: Spin, n_r: usize, n_l: usize) -> usize {
        spin.index() * self.orbital_dim() + self.orbital_index(n_r, n_l)
    }

    /// Inverse of [`FockBasis::orbital_index`].
    pub fn occupations(&self, orbital_index: usize) -> (usize, usize) {
        let n1 = self.cutoff + 1;
        (orbital_index / n1, orbital_index % n1)
    }
}

// ---------------------------------------------------------------------------
// OperatorMatrix
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum Storage {
    /// CSR: row_ptr has dim+1 entries; cols/vals sorted within each row.
    Sparse {
        row_ptr: Vec<usize>,
        cols: Vec<usize>,
        vals: Vec<C64>,
    },
    Dense(Array2<C64>),
}

/// Square complex operator on a truncated basis. Ladder-built operators stay
/// sparse; exponentials and eigenvector sets are dense.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    dim: usize,
    hermitian: bool,
    storage: Storage,
}

impl OperatorMatrix {
    /// Build from (row, col, value) triplets; duplicate positions are summed,
    /// exact zeros dropped. The Hermitian flag is detected to 1e-12.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut merged: Vec<(usize, usize, C64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet out of range");
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|t| t.2 != C64::new(0.0, 0.0));

        let mut row_ptr = vec![0usize; dim + 1];
        for &(r, _, _) in &merged {
            row_ptr[r + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let cols = merged.iter().map(|t| t.1).collect();
        let vals = merged.iter().map(|t| t.2).collect();
        let mut m = Self {
            dim,
            hermitian: false,
            storage: Storage::Sparse { row_ptr, cols, vals },
        };
        m.hermitian = m.hermiticity_defect() < HERMITIAN_TOL;
        m
    }

    /// Wrap a dense matrix.
    pub fn from_dense(matrix: Array2<C64>) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols(), "operator must be square");
        let dim = matrix.nrows();
        let mut m = Self {
            dim,
            hermitian: false,
            storage: Storage::Dense(matrix),
        };
        m.hermitian = m.hermiticity_defect() < HERMITIAN_TOL;
        m
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_triplets(dim, (0..dim).map(|i| (i, i, C64::new(1.0, 0.0))).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Sparse { vals, .. } => vals.len(),
            Storage::Dense(d) => d.iter().filter(|v| **v != C64::new(0.0, 0.0)).count(),
        }
    }

    /// max |M − M†| over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        match &self.storage {
            Storage::Dense(d) => {
                for i in 0..self.dim {
                    for j in i..self.dim {
                        worst = worst.max((d[(i, j)] - d[(j, i)].conj()).norm());
                    }
                }
            }
            Storage::Sparse { row_ptr, cols, vals } => {
                for r in 0..self.dim {
                    for k in row_ptr[r]..row_ptr[r + 1] {
                        let c = cols[k];
                        let vt = self.sparse_get(row_ptr, cols, vals, c, r);
                        worst = worst.max((vals[k] - vt.conj()).norm());
                    }
                }
            }
        }
        worst
    }

    fn sparse_get(
        &self,
        row_ptr: &[usize],
        cols: &[usize],
        vals: &[C64],
        r: usize,
        c: usize,
    ) -> C64 {
        let range = row_ptr[r]..row_ptr[r + 1];
        match cols[range.clone()].binary_search(&c) {
            Ok(k) => vals[range.start + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    /// Entry (r, c).
    pub fn get(&self, r: usize, c: usize) -> C64 {
        match &self.storage {
            Storage::Dense(d) => d[(r, c)],
            Storage::Sparse { row_ptr, cols, vals } => self.sparse_get(row_ptr, cols, vals, r, c),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        match &self.storage {
            Storage::Dense(d) => {
                let mut out = Array2::zeros((self.dim, self.dim));
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        out[(j, i)] = d[(i, j)].conj();
                    }
                }
                Self::from_dense(out)
            }
            Storage::Sparse { row_ptr, cols, vals } => {
                let mut trip = Vec::with_capacity(vals.len());
                for r in 0..self.dim {
                    for k in row_ptr[r]..row_ptr[r + 1] {
                        trip.push((cols[k], r, vals[k].conj()));
                    }
                }
                Self::from_triplets(self.dim, trip)
            }
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        match &self.storage {
            Storage::Dense(d) => Self::from_dense(d.mapv(|v| v * factor)),
            Storage::Sparse { row_ptr, cols, vals } => Self {
                dim: self.dim,
                hermitian: false,
                storage: Storage::Sparse {
                    row_ptr: row_ptr.clone(),
                    cols: cols.clone(),
                    vals: vals.iter().map(|v| v * factor).collect(),
                },
            }
            .redetect(),
        }
    }

    fn redetect(mut self) -> Self {
        self.hermitian = self.hermiticity_defect() < HERMITIAN_TOL;
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        match (&self.storage, &other.storage) {
            (
                Storage::Sparse { row_ptr, cols, vals },
                Storage::Sparse {
                    row_ptr: rp2,
                    cols: c2,
                    vals: v2,
                },
            ) => {
                let mut trip = Vec::with_capacity(vals.len() + v2.len());
                for r in 0..self.dim {
                    for k in row_ptr[r]..row_ptr[r + 1] {
                        trip.push((r, cols[k], vals[k]));
                    }
                    for k in rp2[r]..rp2[r + 1] {
                        trip.push((r, c2[k], v2[k]));
                    }
                }
                Self::from_triplets(self.dim, trip)
            }
            _ => {
                let mut d = self.to_dense();
                d += &other.to_dense();
                Self::from_dense(d)
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Matrix product. Sparse·sparse stays sparse; anything dense goes dense.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        match (&self.storage, &other.storage) {
            (
                Storage::Sparse { row_ptr, cols, vals },
                Storage::Sparse {
                    row_ptr: rp2,
                    cols: c2,
                    vals: v2,
                },
            ) => {
                let mut trip = Vec::new();
                let mut scratch = vec![C64::new(0.0, 0.0); self.dim];
                let mut touched: Vec<usize> = Vec::new();
                for r in 0..self.dim {
                    for k in row_ptr[r]..row_ptr[r + 1] {
                        let a = vals[k];
                        let mid = cols[k];
                        for k2 in rp2[mid]..rp2[mid + 1] {
                            let c = c2[k2];
                            if scratch[c] == C64::new(0.0, 0.0) {
                                touched.push(c);
                            }
                            scratch[c] += a * v2[k2];
                        }
                    }
                    touched.sort_unstable();
                    for &c in &touched {
                        if scratch[c] != C64::new(0.0, 0.0) {
                            trip.push((r, c, scratch[c]));
                        }
                        scratch[c] = C64::new(0.0, 0.0);
                    }
                    touched.clear();
                }
                Self::from_triplets(self.dim, trip)
            }
            _ => Self::from_dense(dense_mul(&self.to_dense(), &other.to_dense())),
        }
    }

    /// y = M x.
    pub fn matvec(&self, x: ArrayView1<C64>) -> Array1<C64> {
        assert_eq!(x.len(), self.dim, "dimension mismatch");
        match &self.storage {
            Storage::Dense(d) => {
                let mut y = Array1::zeros(self.dim);
                for i in 0..self.dim {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..self.dim {
                        acc += d[(i, j)] * x[j];
                    }
                    y[i] = acc;
                }
                y
            }
            Storage::Sparse { row_ptr, cols, vals } => {
                let mut y = Array1::zeros(self.dim);
                for r in 0..self.dim {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in row_ptr[r]..row_ptr[r + 1] {
                        acc += vals[k] * x[cols[k]];
                    }
                    y[r] = acc;
                }
                y
            }
        }
    }

    /// ⟨ψ|M|ψ⟩ (no normalization check; see `oracle::numeric_expectation`).
    pub fn expectation(&self, psi: ArrayView1<C64>) -> C64 {
        let m_psi = self.matvec(psi);
        psi.iter()
            .zip(m_psi.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn to_dense(&self) -> Array2<C64> {
        match &self.storage {
            Storage::Dense(d) => d.clone(),
            Storage::Sparse { row_ptr, cols, vals } => {
                let mut out = Array2::zeros((self.dim, self.dim));
                for r in 0..self.dim {
                    for k in row_ptr[r]..row_ptr[r + 1] {
                        out[(r, cols[k])] = vals[k];
                    }
                }
                out
            }
        }
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        match &self.storage {
            Storage::Dense(d) => d.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt(),
            Storage::Sparse { vals, .. } => vals.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt(),
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        match &self.storage {
            Storage::Dense(d) => d.iter().map(|v| v.norm()).fold(0.0, f64::max),
            Storage::Sparse { vals, .. } => vals.iter().map(|v| v.norm()).fold(0.0, f64::max),
        }
    }

    /// [A, B] = AB − BA.
    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// Keep only columns (input states) selected by `keep`; used to restrict
    /// identities to interior states away from the truncation edge.
    pub fn restrict_columns<F: Fn(usize) -> bool>(&self, keep: F) -> Self {
        match &self.storage {
            Storage::Sparse { row_ptr, cols, vals } => {
                let mut trip = Vec::new();
                for r in 0..self.dim {
                    for k in row_ptr[r]..row_ptr[r + 1] {
                        if keep(cols[k]) {
                            trip.push((r, cols[k], vals[k]));
                        }
                    }
                }
                Self::from_triplets(self.dim, trip)
            }
            Storage::Dense(d) => {
                let mut out = d.clone();
                for c in 0..self.dim {
                    if !keep(c) {
                        out.column_mut(c).fill(C64::new(0.0, 0.0));
                    }
                }
                Self::from_dense(out)
            }
        }
    }

    /// Sparse-triplet text dump: a `# dim <d> nnz <n>` header line followed by
    /// one `row col re im` line per stored entry, row-major order.
    pub fn triplet_dump(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let mut entries: Vec<(usize, usize, C64)> = Vec::new();
        match &self.storage {
            Storage::Sparse { row_ptr, cols, vals } => {
                for r in 0..self.dim {
                    for k in row_ptr[r]..row_ptr[r + 1] {
                        entries.push((r, cols[k], vals[k]));
                    }
                }
            }
            Storage::Dense(d) => {
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        if d[(r, c)] != C64::new(0.0, 0.0) {
                            entries.push((r, c, d[(r, c)]));
                        }
                    }
                }
            }
        }
        writeln!(out, "# dim {} nnz {}", self.dim, entries.len()).unwrap();
        for (r, c, v) in entries {
            writeln!(out, "{} {} {} {}", r, c, v.re, v.im).unwrap();
        }
        out
    }
}

/// Plain triple-loop dense complex product; operand sizes here stay ≤ a few
/// thousand so this is adequate without a BLAS gemm.
pub(crate) fn dense_mul(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    let m = b.ncols();
    let kk = a.ncols();
    assert_eq!(kk, b.nrows());
    let mut out = Array2::<C64>::zeros((n, m));
    let bs = b.as_standard_layout().to_owned();
    for i in 0..n {
        for k in 0..kk {
            let aik = a[(i, k)];
            if aik == C64::new(0.0, 0.0) {
                continue;
            }
            let brow = bs.row(k);
            let mut orow = out.row_mut(i);
            for j in 0..m {
                orow[j] += aik * brow[j];
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Operator builders
// ---------------------------------------------------------------------------

/// Elementary ladder operator of the basis family on one chiral mode
/// (orbital space). Lowering: a|n⟩ = √n |n−1⟩; raising past the cutoff
/// truncates to zero.
pub fn ladder(basis: &FockBasis, mode: ChiralMode, direction: Direction) -> OperatorMatrix {
    let n1 = basis.cutoff() + 1;
    let mut trip = Vec::with_capacity(basis.orbital_dim());
    for n_r in 0..n1 {
        for n_l in 0..n1 {
            let col = basis.orbital_index(n_r, n_l);
            let (occ, row) = match (mode, direction) {
                (ChiralMode::Right, Direction::Lower) if n_r > 0 => {
                    (n_r, basis.orbital_index(n_r - 1, n_l))
                }
                (ChiralMode::Right, Direction::Raise) if n_r + 1 < n1 => {
                    (n_r + 1, basis.orbital_index(n_r + 1, n_l))
                }
                (ChiralMode::Left, Direction::Lower) if n_l > 0 => {
                    (n_l, basis.orbital_index(n_r, n_l - 1))
                }
                (ChiralMode::Left, Direction::Raise) if n_l + 1 < n1 => {
                    (n_l + 1, basis.orbital_index(n_r, n_l + 1))
                }
                _ => continue,
            };
            trip.push((row, col, C64::new((occ as f64).sqrt(), 0.0)));
        }
    }
    OperatorMatrix::from_triplets(basis.orbital_dim(), trip)
}

/// Number operator n̂ = a†a of one chiral mode (orbital space, diagonal).
pub fn number_operator(basis: &FockBasis, mode: ChiralMode) -> OperatorMatrix {
    let trip = (0..basis.orbital_dim())
        .map(|i| {
            let (n_r, n_l) = basis.occupations(i);
            let n = match mode {
                ChiralMode::Right => n_r,
                ChiralMode::Left => n_l,
            };
            (i, i, C64::new(n as f64, 0.0))
        })
        .collect();
    OperatorMatrix::from_triplets(basis.orbital_dim(), trip)
}

/// Ladder operator of the *other* frequency family, expressed in this basis
/// through the Bogoliubov bridge ã_r = μ̃ a_r + μ a_l†, ã_l = μ̃ a_l + μ a_r†
/// (and adjoints). Requires finite μ, μ̃ — i.e. both couplings nonzero.
pub fn tilde_ladder(
    basis: &FockBasis,
    couplings: &DerivedCouplings,
    mode: ChiralMode,
    direction: Direction,
) -> OperatorMatrix {
    bogoliubov_ladder(basis, couplings.mu, couplings.mu_tilde, mode, direction)
}

/// Bogoliubov-composed ladder with explicit coefficients; `tilde_ladder`
/// forwards here with (μ, μ̃).
pub fn bogoliubov_ladder(
    basis: &FockBasis,
    mu: f64,
    mu_tilde: f64,
    mode: ChiralMode,
    direction: Direction,
) -> OperatorMatrix {
    assert!(
        mu.is_finite() && mu_tilde.is_finite(),
        "Bogoliubov coefficients must be finite (degenerate family at zero coupling)"
    );
    let other = match mode {
        ChiralMode::Right => ChiralMode::Left,
        ChiralMode::Left => ChiralMode::Right,
    };
    let (d_same, d_other) = match direction {
        Direction::Lower => (Direction::Lower, Direction::Raise),
        Direction::Raise => (Direction::Raise, Direction::Lower),
    };
    ladder(basis, mode, d_same)
        .scale(C64::new(mu_tilde, 0.0))
        .add(&ladder(basis, other, d_other).scale(C64::new(mu, 0.0)))
}

/// The four quadrature operators of a frequency family with ground-state
/// width `width` (orbital space): x_i = Δ_f(a_i + a_i†)/√2 and
/// p_i = −iħ(a_i − a_i†)/(√2 Δ_f), with Cartesian modes recovered from the
/// chiral ones via a_x = (a_r + a_l)/√2, a_y = i(a_r − a_l)/√2.
pub struct Quadratures {
    pub x: OperatorMatrix,
    pub y: OperatorMatrix,
    pub px: OperatorMatrix,
    pub py: OperatorMatrix,
}

pub fn quadratures(basis: &FockBasis, width: f64) -> Quadratures {
    assert!(width.is_finite() && width > 0.0, "width must be positive");
    let ar = ladder(basis, ChiralMode::Right, Direction::Lower);
    let al = ladder(basis, ChiralMode::Left, Direction::Lower);
    let art = ladder(basis, ChiralMode::Right, Direction::Raise);
    let alt = ladder(basis, ChiralMode::Left, Direction::Raise);

    let half = |f: f64| C64::new(f, 0.0);
    let sum_all = ar.add(&al).add(&art).add(&alt);
    let x = sum_all.scale(half(width / 2.0));
    // a_r − a_l − a_r† + a_l†, times iΔ/2
    let y = ar
        .sub(&al)
        .sub(&art)
        .add(&alt)
        .scale(C64::new(0.0, width / 2.0));
    // a_r + a_l − a_r† − a_l†, times −i/(2Δ)
    let px = ar
        .add(&al)
        .sub(&art)
        .sub(&alt)
        .scale(C64::new(0.0, -1.0 / (2.0 * width)));
    let py = ar
        .sub(&al)
        .add(&art)
        .sub(&alt)
        .scale(half(1.0 / (2.0 * width)));
    Quadratures { x, y, px, py }
}

/// Orbital angular momentum L_z = x p_y − y p_x = ħ(n̂_r − n̂_l) in the chiral
/// basis (orbital space, diagonal, family-independent, spin-independent).
pub fn angular_momentum_lz(basis: &FockBasis) -> OperatorMatrix {
    number_operator(basis, ChiralMode::Right).sub(&number_operator(basis, ChiralMode::Left))
}

// ---------------------------------------------------------------------------
// Two-mode squeeze unitary
// ---------------------------------------------------------------------------

/// Result of building the squeeze unitary: the dense matrix plus the
/// truncation-leakage figure for the states it is meant to produce.
#[derive(Debug)]
pub struct SqueezeUnitary {
    pub matrix: OperatorMatrix,
    /// Weight of the true squeezed vacuum lying outside the cutoff:
    /// tanh^{2(N+1)}|θ|. The matrix itself is unitary to roundoff regardless
    /// (the truncated generator is exactly anti-Hermitian), so leakage is the
    /// honest measure of how faithfully it represents the untruncated squeeze.
    pub leakage: f64,
    /// Set when sinh²|θ| > N/4, i.e. the squeezed states barely fit the basis.
    pub heavy_squeeze: bool,
}

/// Default leakage threshold for [`squeeze_unitary`].
pub const DEFAULT_LEAKAGE_THRESHOLD: f64 = 1e-8;

/// Two-mode squeeze unitary U(θ) = exp(θ(K₊ − K₋)) with K₊ = a_r†a_l†
/// (orbital space, dense).
///
/// Built by spectral decomposition of the Hermitian generator −iθ(K₊ − K₋),
/// so the result is unitary to machine precision. Fails with
/// [`Error::TruncationLeakage`] when the vacuum-image tail outside the cutoff
/// exceeds `threshold` (default [`DEFAULT_LEAKAGE_THRESHOLD`]).
pub fn squeeze_unitary(
    basis: &FockBasis,
    theta: f64,
    threshold: Option<f64>,
) -> Result<SqueezeUnitary> {
    use ndarray_linalg::{Eigh, UPLO};

    let threshold = threshold.unwrap_or(DEFAULT_LEAKAGE_THRESHOLD);
    let n = basis.cutoff();
    let leakage = theta.tanh().abs().powi(2 * (n as i32 + 1));
    if leakage > threshold {
        return Err(Error::TruncationLeakage { leakage, threshold });
    }
    let heavy_squeeze = theta.sinh().powi(2) > n as f64 / 4.0;

    let k_plus = ladder(basis, ChiralMode::Right, Direction::Raise)
        .matmul(&ladder(basis, ChiralMode::Left, Direction::Raise));
    let k_minus = k_plus.dagger();
    // Generator A = θ(K₊ − K₋) is anti-Hermitian; M = −iA is Hermitian and
    // U = e^{A} = V e^{iΛ} V†.
    let m = k_plus
        .sub(&k_minus)
        .scale(C64::new(0.0, -theta))
        .to_dense();
    let (evals, raw) = m
        .eigh(UPLO::Lower)
        .map_err(|e| Error::SolverFailure(format!("squeeze generator eigh: {e}")))?;
    // row-major input: eigenvector k = conj(column k) of the returned matrix
    let evecs = raw.mapv(|v: C64| v.conj());
    let dim = basis.orbital_dim();
    let mut scaled = evecs.clone();
    for (k, &lam) in evals.iter().enumerate() {
        let phase = C64::new(0.0, lam).exp();
        scaled.column_mut(k).mapv_inplace(|v| v * phase);
    }
    let mut vdag = Array2::zeros((dim, dim));
    for i in 0..dim {
        for j in 0..dim {
            vdag[(i, j)] = evecs[(j, i)].conj();
        }
    }
    let u = dense_mul(&scaled, &vdag);
    Ok(SqueezeUnitary {
        matrix: OperatorMatrix::from_dense(u),
        leakage,
        heavy_squeeze,
    })
}

// ---------------------------------------------------------------------------
// Spin embedding helpers
// ---------------------------------------------------------------------------

/// 2×2 spin matrices as nested arrays, row-major, index 0 = ↑.
pub mod spin_matrices {
    use num_complex::Complex64 as C64;

    pub const fn sigma_z() -> [[f64; 2]; 2] {
        [[1.0, 0.0], [0.0, -1.0]]
    }

    pub fn sigma_plus() -> [[C64; 2]; 2] {
        let z = C64::new(0.0, 0.0);
        [[z, C64::new(1.0, 0.0)], [z, z]]
    }

    pub fn sigma_minus() -> [[C64; 2]; 2] {
        let z = C64::new(0.0, 0.0);
        [[z, z], [C64::new(1.0, 0.0), z]]
    }
}

/// Kronecker product of a 2×2 spin matrix with an orbital operator, giving a
/// full-space operator in the spin-major layout.
pub fn kron_spin(spin: &[[C64; 2]; 2], orbital: &OperatorMatrix) -> OperatorMatrix {
    let od = orbital.dim();
    let mut trip = Vec::new();
    for (s_r, row) in spin.iter().enumerate() {
        for (s_c, &sval) in row.iter().enumerate() {
            if sval == C64::new(0.0, 0.0) {
                continue;
            }
            match &orbital.storage {
                Storage::Sparse { row_ptr, cols, vals } => {
                    for r in 0..od {
                        for k in row_ptr[r]..row_ptr[r + 1] {
                            trip.push((s_r * od + r, s_c * od + cols[k], sval * vals[k]));
                        }
                    }
                }
                Storage::Dense(d) => {
                    for r in 0..od {
                        for c in 0..od {
                            if d[(r, c)] != C64::new(0.0, 0.0) {
                                trip.push((s_r * od + r, s_c * od + c, sval * d[(r, c)]));
                            }
                        }
                    }
                }
            }
        }
    }
    OperatorMatrix::from_triplets(2 * od, trip)
}

/// Embed an orbital operator as 𝟙_spin ⊗ O on the full space.
pub fn embed_orbital(orbital: &OperatorMatrix) -> OperatorMatrix {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    kron_spin(&[[one, zero], [zero, one]], orbital)
}

/// ⟨ψ|𝟙 ⊗ O|ψ⟩ for an orbital operator and a full-space state, computed
/// blockwise per spin component.
pub fn expectation_orbital(orbital: &OperatorMatrix, psi: ArrayView1<C64>) -> C64 {
    let od = orbital.dim();
    assert_eq!(psi.len(), 2 * od, "state/operator dimension mismatch");
    let mut acc = C64::new(0.0, 0.0);
    for s in 0..2 {
        let block = psi.slice(ndarray::s![s * od..(s + 1) * od]);
        acc += orbital.expectation(block);
    }
    acc
}

/// Apply 𝟙 ⊗ O to a full-space state blockwise.
pub fn apply_orbital(orbital: &OperatorMatrix, psi: ArrayView1<C64>) -> Array1<C64> {
    let od = orbital.dim();
    assert_eq!(psi.len(), 2 * od, "state/operator dimension mismatch");
    let mut out = Array1::zeros(2 * od);
    for s in 0..2 {
        let block = orbital.matvec(psi.slice(ndarray::s![s * od..(s + 1) * od]));
        out.slice_mut(ndarray::s![s * od..(s + 1) * od]).assign(&block);
    }
    out
}
