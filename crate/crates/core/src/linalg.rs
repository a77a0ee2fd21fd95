//! Bipartite spaces, states, operators, and the spectral plumbing they share.
//!
//! A bipartite space H_n ⊗ H_m is flattened row-major: the computational
//! basis vector |e_i⟩ ⊗ |f_j⟩ sits at index `i * m + j`. Everything else in
//! the crate (reshaping to an n×m matrix, partial transposition, tensor-power
//! regrouping) is a reindexing of that convention.

use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2};
use ndarray_linalg::{EigValsh, Eigh, Norm, SVD, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermiticity is accepted up to this relative tolerance (times the largest
/// entry magnitude).
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Density operators may miss unit trace / positivity by this much.
pub const DENSITY_TOL: f64 = 1e-8;

/// Pure states may miss unit norm by this much.
pub const UNIT_NORM_TOL: f64 = 1e-8;

/// Relative cutoff below which an eigenvalue counts as zero (times max |λ|).
pub const EIG_ZERO_TOL: f64 = 1e-9;

/// Dimensions (n, m) of a bipartite space H_n ⊗ H_m.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BipartiteDims {
    n: usize,
    m: usize,
}

impl BipartiteDims {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidDims { n, m });
        }
        Ok(BipartiteDims { n, m })
    }

    /// First-factor dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Second-factor dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Total dimension n·m of the joint space.
    pub fn total(&self) -> usize {
        self.n * self.m
    }

    /// min(n, m): the largest possible Schmidt rank, and the ceiling for the
    /// parameter k everywhere in this crate.
    pub fn min_dim(&self) -> usize {
        self.n.min(self.m)
    }

    /// Validate a Schmidt parameter k against this space.
    pub fn check_k(&self, k: usize) -> Result<()> {
        if k < 1 || k > self.min_dim() {
            return Err(Error::KOutOfRange {
                k,
                max: self.min_dim(),
            });
        }
        Ok(())
    }
}

/// A unit vector in H_n ⊗ H_m, stored as its row-major amplitude list.
#[derive(Clone, Debug)]
pub struct PureState {
    amplitudes: Array1<Complex64>,
    dims: BipartiteDims,
}

impl PureState {
    /// Wrap amplitudes that are already normalized (within
    /// [`UNIT_NORM_TOL`]); rejects anything else.
    pub fn new(amplitudes: Array1<Complex64>, dims: BipartiteDims) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::LengthMismatch {
                expected: dims.total(),
                actual: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm_l2();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NotUnitNorm { norm });
        }
        Ok(PureState { amplitudes, dims })
    }

    /// Normalize arbitrary amplitudes to a unit vector; rejects the zero
    /// vector.
    pub fn normalized(amplitudes: Array1<Complex64>, dims: BipartiteDims) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::LengthMismatch {
                expected: dims.total(),
                actual: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm_l2();
        if norm <= f64::EPSILON * (dims.total() as f64) {
            return Err(Error::ZeroVector);
        }
        Ok(PureState {
            amplitudes: amplitudes / Complex64::new(norm, 0.0),
            dims,
        })
    }

    /// The computational-basis product state |e_i⟩ ⊗ |f_j⟩.
    pub fn basis_product(dims: BipartiteDims, i: usize, j: usize) -> Result<Self> {
        if i >= dims.n() || j >= dims.m() {
            return Err(Error::InvalidParameter(format!(
                "basis indices ({i}, {j}) out of range for {}x{}",
                dims.n(),
                dims.m()
            )));
        }
        let mut amplitudes = Array1::zeros(dims.total());
        amplitudes[i * dims.m() + j] = Complex64::new(1.0, 0.0);
        Ok(PureState { amplitudes, dims })
    }

    pub fn amplitudes(&self) -> ArrayView1<'_, Complex64> {
        self.amplitudes.view()
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    /// Inner product ⟨self | other⟩ (conjugate-linear in `self`).
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dims != other.dims {
            return Err(Error::DimsDisagree {
                left: self.dims.total(),
                right: other.dims.total(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Quadratic form ⟨v|X|v⟩, reported as its real part (exact for
    /// Hermitian X, where the imaginary part vanishes).
    pub fn expectation(&self, x: &BipartiteOperator) -> Result<f64> {
        if self.dims != x.dims {
            return Err(Error::DimsDisagree {
                left: self.dims.total(),
                right: x.dims.total(),
            });
        }
        let xv = x.apply(&self.amplitudes.view());
        let val: Complex64 = self
            .amplitudes
            .iter()
            .zip(xv.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(val.re)
    }
}

/// An operator on H_n ⊗ H_m, stored dense with the same row-major basis
/// ordering as [`PureState`]. Hermiticity is detected once at construction
/// and carried along by structure-preserving operations.
#[derive(Clone, Debug)]
pub struct BipartiteOperator {
    entries: Array2<Complex64>,
    dims: BipartiteDims,
    hermitian: bool,
}

impl BipartiteOperator {
    pub fn new(entries: Array2<Complex64>, dims: BipartiteDims) -> Result<Self> {
        let d = dims.total();
        let (rows, cols) = entries.dim();
        if rows != d || cols != d {
            return Err(Error::ShapeMismatch {
                expected: d,
                rows,
                cols,
            });
        }
        let hermitian = hermitian_defect(&entries.view()) <= HERMITIAN_TOL * max_abs(&entries.view()).max(f64::MIN_POSITIVE);
        Ok(BipartiteOperator {
            entries,
            dims,
            hermitian,
        })
    }

    /// Identity on the joint space.
    pub fn identity(dims: BipartiteDims) -> Self {
        BipartiteOperator {
            entries: Array2::eye(dims.total()),
            dims,
            hermitian: true,
        }
    }

    /// Rank-one operator |w⟩⟨v|.
    pub fn from_outer(w: &PureState, v: &PureState) -> Result<Self> {
        if w.dims != v.dims {
            return Err(Error::DimsDisagree {
                left: w.dims.total(),
                right: v.dims.total(),
            });
        }
        let d = w.dims.total();
        let mut entries = Array2::zeros((d, d));
        for r in 0..d {
            for c in 0..d {
                entries[[r, c]] = w.amplitudes[r] * v.amplitudes[c].conj();
            }
        }
        BipartiteOperator::new(entries, w.dims)
    }

    pub fn entries(&self) -> ArrayView2<'_, Complex64> {
        self.entries.view()
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    /// Side length n·m of the matrix.
    pub fn side(&self) -> usize {
        self.dims.total()
    }

    /// Whether the operator was Hermitian (within [`HERMITIAN_TOL`]) at
    /// construction.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.diag().sum()
    }

    /// Largest entry magnitude; the scale used by relative tolerances.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.entries.view())
    }

    /// Matrix-vector product X·v. Rows are processed in parallel for large
    /// operators when the `parallel` feature is on; the per-row dot products
    /// are unchanged, so the result is identical either way.
    pub fn apply(&self, v: &ArrayView1<Complex64>) -> Array1<Complex64> {
        let d = self.side();
        #[cfg(feature = "parallel")]
        if d >= 1024 {
            let rows = crate::exec::map_collect(d, |i| self.entries.row(i).dot(v));
            return Array1::from_vec(rows);
        }
        let _ = d;
        self.entries.dot(v)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimsDisagree {
                left: self.dims.total(),
                right: other.dims.total(),
            });
        }
        Ok(BipartiteOperator {
            entries: &self.entries + &other.entries,
            dims: self.dims,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimsDisagree {
                left: self.dims.total(),
                right: other.dims.total(),
            });
        }
        Ok(BipartiteOperator {
            entries: &self.entries - &other.entries,
            dims: self.dims,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    /// Scale by a real factor (keeps Hermiticity).
    pub fn scale(&self, c: f64) -> Self {
        BipartiteOperator {
            entries: self.entries.mapv(|z| z * c),
            dims: self.dims,
            hermitian: self.hermitian,
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut entries = Array2::zeros(self.entries.raw_dim());
        for ((r, c), z) in self.entries.indexed_iter() {
            entries[[c, r]] = z.conj();
        }
        BipartiteOperator {
            entries,
            dims: self.dims,
            hermitian: self.hermitian,
        }
    }

    /// Partial transpose on the second factor, an exact entry permutation:
    /// ⟨i,j| X^Γ |k,l⟩ = ⟨i,l| X |k,j⟩.
    pub fn partial_transpose(&self) -> Self {
        let (n, m) = (self.dims.n(), self.dims.m());
        let mut out = Array2::zeros(self.entries.raw_dim());
        for i in 0..n {
            for j in 0..m {
                for k in 0..n {
                    for l in 0..m {
                        out[[i * m + j, k * m + l]] = self.entries[[i * m + l, k * m + j]];
                    }
                }
            }
        }
        BipartiteOperator {
            entries: out,
            dims: self.dims,
            // (X^Γ)† = (X†)^Γ, so the flag carries over.
            hermitian: self.hermitian,
        }
    }

    fn require_hermitian(&self) -> Result<()> {
        if !self.hermitian {
            return Err(Error::NotHermitian {
                defect: hermitian_defect(&self.entries.view()),
            });
        }
        Ok(())
    }
}

/// Maximally entangled state (1/√n) Σᵢ |i⟩⊗|i⟩ on H_n ⊗ H_n.
pub fn maximally_entangled_state(n: usize) -> Result<PureState> {
    let dims = BipartiteDims::new(n, n)?;
    let mut amplitudes = Array1::zeros(n * n);
    let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    for i in 0..n {
        amplitudes[i * n + i] = a;
    }
    PureState::new(amplitudes, dims)
}

/// Rank-one projection E onto the maximally entangled state (normalized, so
/// Tr E = 1 and the 1/n sits inside the entries).
pub fn maximally_entangled_projector(n: usize) -> Result<BipartiteOperator> {
    let e = maximally_entangled_state(n)?;
    BipartiteOperator::from_outer(&e, &e)
}

/// Reshape a state to the n×m matrix A_v with (A_v)_{ij} equal to the
/// amplitude of |e_i⟩⊗|f_j⟩. Its singular values are the Schmidt
/// coefficients of the state.
pub fn vec_to_operator(v: &PureState) -> Array2<Complex64> {
    let (n, m) = (v.dims.n(), v.dims.m());
    let mut a = Array2::zeros((n, m));
    for i in 0..n {
        for j in 0..m {
            a[[i, j]] = v.amplitudes[i * m + j];
        }
    }
    a
}

/// Partial transpose as a free function; see
/// [`BipartiteOperator::partial_transpose`].
pub fn partial_transpose(x: &BipartiteOperator) -> BipartiteOperator {
    x.partial_transpose()
}

/// Regroup an operator on (H_n ⊗ H_n)^⊗r — factors ordered
/// A₁B₁A₂B₂…A_rB_r — into an operator on H_{n^r} ⊗ H_{n^r} with all the
/// A-factors first. This is conjugation by a permutation matrix, so the
/// spectrum is untouched.
pub fn permute_to_bipartite(
    entries: &ArrayView2<Complex64>,
    local_dim: usize,
) -> Result<BipartiteOperator> {
    if local_dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "local dimension must be at least 2, got {local_dim}"
        )));
    }
    let (rows, cols) = entries.dim();
    if rows != cols {
        return Err(Error::ShapeMismatch {
            expected: rows,
            rows,
            cols,
        });
    }
    // side must equal local_dim^(2r) for some r >= 1
    let mut r = 0usize;
    let mut side = 1usize;
    while side < rows {
        side = side
            .checked_mul(local_dim * local_dim)
            .ok_or(Error::NotTensorPower {
                side: rows,
                base: local_dim,
            })?;
        r += 1;
    }
    if side != rows || r == 0 {
        return Err(Error::NotTensorPower {
            side: rows,
            base: local_dim,
        });
    }

    // perm[old] = new: digit d_t (base n, MSB first) moves to slot t/2 when t
    // is even (an A factor) and to slot r + t/2 when odd (a B factor).
    let mut perm = vec![0usize; rows];
    for (old, slot) in perm.iter_mut().enumerate() {
        let mut digits = vec![0usize; 2 * r];
        let mut rem = old;
        for t in (0..2 * r).rev() {
            digits[t] = rem % local_dim;
            rem /= local_dim;
        }
        let mut new_idx = 0usize;
        for t in 0..r {
            new_idx = new_idx * local_dim + digits[2 * t];
        }
        for t in 0..r {
            new_idx = new_idx * local_dim + digits[2 * t + 1];
        }
        *slot = new_idx;
    }

    let mut out = Array2::zeros((rows, rows));
    for i in 0..rows {
        for j in 0..rows {
            out[[perm[i], perm[j]]] = entries[[i, j]];
        }
    }
    let half = local_dim.pow(r as u32);
    let dims = BipartiteDims::new(half, half)?;
    BipartiteOperator::new(out, dims)
}

/// Ky Fan k-norm: the sum of the k largest singular values.
pub fn ky_fan_norm(x: &ArrayView2<Complex64>, k: usize) -> Result<f64> {
    let (rows, cols) = x.dim();
    let max_k = rows.min(cols);
    if k < 1 || k > max_k {
        return Err(Error::KOutOfRange { k, max: max_k });
    }
    let (_, sv, _) = x.svd(false, false)?;
    // LAPACK returns singular values in descending order.
    Ok(sv.iter().take(k).sum())
}

fn validate_density(x: &BipartiteOperator) -> Result<Vec<f64>> {
    if !x.is_hermitian() {
        return Err(Error::NotDensity {
            reason: "not Hermitian".into(),
        });
    }
    let tr = x.trace();
    if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
        return Err(Error::NotDensity {
            reason: format!("trace {:.6} + {:.2e}i is not 1", tr.re, tr.im),
        });
    }
    let vals = x.entries.eigvalsh(UPLO::Lower)?;
    if vals[0] < -DENSITY_TOL {
        return Err(Error::NotDensity {
            reason: format!("minimum eigenvalue {:.3e} is negative", vals[0]),
        });
    }
    Ok(vals.to_vec())
}

/// Trace distance δ(ρ, σ) = ½‖ρ − σ‖₁ between density operators.
pub fn trace_distance(rho: &BipartiteOperator, sigma: &BipartiteOperator) -> Result<f64> {
    validate_density(rho)?;
    validate_density(sigma)?;
    let diff = rho.sub(sigma)?;
    let vals = diff.entries.eigvalsh(UPLO::Lower)?;
    Ok(0.5 * vals.iter().map(|l| l.abs()).sum::<f64>())
}

/// Uhlmann fidelity F(ρ, σ) = (Tr √(√ρ σ √ρ))², between 0 and 1.
pub fn fidelity(rho: &BipartiteOperator, sigma: &BipartiteOperator) -> Result<f64> {
    validate_density(rho)?;
    validate_density(sigma)?;
    if rho.dims != sigma.dims {
        return Err(Error::DimsDisagree {
            left: rho.dims.total(),
            right: sigma.dims.total(),
        });
    }
    let (vals, vecs) = eigh_all(&rho.entries.view())?;
    // √ρ. Eigenvalues within rounding noise of zero are flushed before the
    // square root — √(ε_mach · λmax) per stray eigenvalue would otherwise
    // pollute the trace at the 1e-8 level.
    let flush = |lams: &[f64]| -> f64 {
        100.0 * f64::EPSILON * lams.iter().fold(0.0f64, |a, l| a.max(l.abs()))
    };
    let cut = flush(&vals);
    let mut scaled = vecs.clone();
    for (j, l) in vals.iter().enumerate() {
        let w = Complex64::new(if *l > cut { l.sqrt() } else { 0.0 }, 0.0);
        scaled.column_mut(j).mapv_inplace(|z| z * w);
    }
    let vecs_h = conj_t(&vecs.view());
    let sqrt_rho = scaled.dot(&vecs_h);
    let inner = sqrt_rho.dot(&sigma.entries).dot(&sqrt_rho);
    // Hermitize before the final eigensolve to shed rounding asymmetry.
    let inner_h = conj_t(&inner.view());
    let sym = (&inner + &inner_h).mapv(|z| z * 0.5);
    let lams = sym.eigvalsh(UPLO::Lower)?;
    let cut = flush(lams.as_slice().unwrap());
    let root_sum: f64 = lams.iter().map(|l| if *l > cut { l.sqrt() } else { 0.0 }).sum();
    Ok(root_sum * root_sum)
}

/// Eigendecomposition of a Hermitian operator, split into its positive /
/// zero / negative parts.
///
/// Eigenvalues are ascending, so the three classes occupy contiguous index
/// ranges: negatives first, then zeros (|λ| ≤ `tol_zero`), then positives.
#[derive(Clone, Debug)]
pub struct SpectralSplit {
    dims: BipartiteDims,
    eigenvalues: Vec<f64>,
    eigenvectors: Array2<Complex64>,
    tol_zero: f64,
    neg_count: usize,
    zero_count: usize,
}

impl SpectralSplit {
    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors as matrix columns, ordered like
    /// [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> ArrayView2<'_, Complex64> {
        self.eigenvectors.view()
    }

    /// The cutoff below which |λ| was classified as zero.
    pub fn tol_zero(&self) -> f64 {
        self.tol_zero
    }

    pub fn neg_count(&self) -> usize {
        self.neg_count
    }

    pub fn zero_count(&self) -> usize {
        self.zero_count
    }

    pub fn pos_count(&self) -> usize {
        self.eigenvalues.len() - self.neg_count - self.zero_count
    }

    /// Strictly negative eigenvalues (ascending).
    pub fn negative_eigenvalues(&self) -> &[f64] {
        &self.eigenvalues[..self.neg_count]
    }

    /// Strictly positive eigenvalues (ascending).
    pub fn positive_eigenvalues(&self) -> &[f64] {
        &self.eigenvalues[self.neg_count + self.zero_count..]
    }

    fn weighted(&self, range: std::ops::Range<usize>, w: impl Fn(usize) -> f64) -> BipartiteOperator {
        let d = self.dims.total();
        let mut entries = Array2::zeros((d, d));
        if !range.is_empty() {
            let vs = self.eigenvectors.slice(s![.., range.clone()]);
            let mut scaled = vs.to_owned();
            for (offset, i) in range.clone().enumerate() {
                let c = Complex64::new(w(i), 0.0);
                scaled.column_mut(offset).mapv_inplace(|z| z * c);
            }
            let vs_h = conj_t(&vs);
            entries = scaled.dot(&vs_h);
        }
        BipartiteOperator {
            entries,
            dims: self.dims,
            hermitian: true,
        }
    }

    /// X⁺ = Σ_{λ>0} λ |v⟩⟨v| (zero class excluded).
    pub fn pos_part(&self) -> BipartiteOperator {
        let start = self.neg_count + self.zero_count;
        self.weighted(start..self.eigenvalues.len(), |i| self.eigenvalues[i])
    }

    /// X⁻ = Σ_{λ<0} λ |v⟩⟨v|, a negative semidefinite operator with
    /// X ≈ X⁺ + X⁻.
    pub fn neg_part(&self) -> BipartiteOperator {
        self.weighted(0..self.neg_count, |i| self.eigenvalues[i])
    }

    /// Orthogonal projection onto the zero-eigenvalue subspace.
    pub fn proj_zero(&self) -> BipartiteOperator {
        self.weighted(self.neg_count..self.neg_count + self.zero_count, |_| 1.0)
    }

    /// Orthogonal projection onto the strictly negative eigenspace.
    pub fn proj_neg(&self) -> BipartiteOperator {
        self.weighted(0..self.neg_count, |_| 1.0)
    }

    /// Projection onto the closure of the non-positive eigenspace
    /// (zero ⊕ negative), the complement of the strictly positive one.
    pub fn proj_zero_neg(&self) -> BipartiteOperator {
        self.weighted(0..self.neg_count + self.zero_count, |_| 1.0)
    }
}

/// Eigendecompose a Hermitian operator and classify its spectrum.
///
/// `tol_zero` defaults to [`EIG_ZERO_TOL`] · max|λ|; pass an explicit value
/// to widen or disable the zero class.
pub fn hermitian_spectral_split(
    x: &BipartiteOperator,
    tol_zero: Option<f64>,
) -> Result<SpectralSplit> {
    x.require_hermitian()?;
    let (eigenvalues, vecs) = eigh_all(&x.entries.view())?;
    let scale = eigenvalues.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    let tol = tol_zero.unwrap_or(EIG_ZERO_TOL * scale);
    let neg_count = eigenvalues.iter().take_while(|&&l| l < -tol).count();
    let zero_count = eigenvalues[neg_count..]
        .iter()
        .take_while(|&&l| l.abs() <= tol)
        .count();
    Ok(SpectralSplit {
        dims: x.dims,
        eigenvalues,
        eigenvectors: vecs,
        tol_zero: tol,
        neg_count,
        zero_count,
    })
}

/// Largest dimension of a subspace of H_n ⊗ H_m in which every nonzero
/// vector has Schmidt rank at least k: (n−k+1)(m−k+1).
pub fn max_schmidt_subspace_dim(n: usize, m: usize, k: usize) -> Result<usize> {
    let dims = BipartiteDims::new(n, m)?;
    dims.check_k(k)?;
    Ok((n - k + 1) * (m - k + 1))
}

/// Hermitian eigendecomposition with a verified eigenvector orientation.
///
/// The backend's `eigh` can hand back eigenvectors of the *conjugated*
/// matrix depending on the input's memory layout (the row-major fast path
/// transposes, which conjugates a Hermitian matrix). Eigenvalues are immune,
/// but eigenvectors are not, so this wrapper residual-checks the dominant
/// eigenpair and conjugates the whole eigenvector matrix when that fits
/// better. Returns ascending eigenvalues and matching orthonormal columns.
pub(crate) fn eigh_all(entries: &ArrayView2<Complex64>) -> Result<(Vec<f64>, Array2<Complex64>)> {
    let owned = entries.as_standard_layout().into_owned();
    let (vals, mut vecs) = owned.eigh(UPLO::Lower)?;
    let d = vals.len();
    if d > 0 {
        // Index of the eigenvalue with the largest magnitude — its
        // eigenvector gives the best-conditioned residual test.
        let j = if vals[d - 1].abs() >= vals[0].abs() { d - 1 } else { 0 };
        let lam = vals[j];
        let mut plain = 0.0f64;
        let mut conj = 0.0f64;
        for r in 0..d {
            let mut av_plain = Complex64::new(0.0, 0.0);
            let mut av_conj = Complex64::new(0.0, 0.0);
            for c in 0..d {
                av_plain += owned[[r, c]] * vecs[[c, j]];
                av_conj += owned[[r, c]] * vecs[[c, j]].conj();
            }
            plain = plain.max((av_plain - vecs[[r, j]] * lam).norm());
            conj = conj.max((av_conj - vecs[[r, j]].conj() * lam).norm());
        }
        if conj < plain {
            vecs.mapv_inplace(|z| z.conj());
        }
    }
    Ok((vals.to_vec(), vecs))
}

/// Conjugate transpose as an owned matrix.
pub(crate) fn conj_t(x: &ArrayView2<Complex64>) -> Array2<Complex64> {
    let (rows, cols) = x.dim();
    let mut out = Array2::zeros((cols, rows));
    for r in 0..rows {
        for c in 0..cols {
            out[[c, r]] = x[[r, c]].conj();
        }
    }
    out
}

pub(crate) fn max_abs(x: &ArrayView2<Complex64>) -> f64 {
    x.iter().fold(0.0f64, |a, z| a.max(z.norm()))
}

fn hermitian_defect(x: &ArrayView2<Complex64>) -> f64 {
    let d = x.nrows();
    let mut defect = 0.0f64;
    for r in 0..d {
        for c in r..d {
            defect = defect.max((x[[r, c]] - x[[c, r]].conj()).norm());
        }
    }
    defect
}

/// Kronecker product of raw matrices (used to assemble tensor powers before
/// [`permute_to_bipartite`] regroups them).
pub fn kron(a: &ArrayView2<Complex64>, b: &ArrayView2<Complex64>) -> Array2<Complex64> {
    ndarray::linalg::kron(a, b)
}
