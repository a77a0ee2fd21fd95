//! Schmidt decomposition of bipartite pure states and the vector k-norms it
//! induces.
//!
//! The decomposition |v⟩ = Σₜ αₜ |uₜ⟩ ⊗ |wₜ⟩ is the SVD of the n×m reshape
//! of the amplitude list ([`crate::linalg::vec_to_operator`]): coefficients
//! are singular values (descending), the frames are orthonormal. The k-norm
//! keeps the k largest coefficients:
//!
//! ‖v‖ₛ₍ₖ₎ = √(α₁² + … + αₖ²),
//!
//! which is 1 exactly when the Schmidt rank is ≤ k, and √(k/n) on the
//! maximally entangled state of H_n ⊗ H_n.

use ndarray::{Array1, Array2, ArrayView2};
use ndarray_linalg::SVD;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{vec_to_operator, BipartiteDims, PureState};

/// Relative cutoff (times the largest coefficient) below which a Schmidt
/// coefficient does not count toward the rank.
pub const RANK_TOL: f64 = 1e-10;

/// The full Schmidt data of a pure state.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    dims: BipartiteDims,
    coefficients: Vec<f64>,
    left_frame: Array2<Complex64>,
    right_frame: Array2<Complex64>,
    rank: usize,
}

impl SchmidtDecomposition {
    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    /// Schmidt coefficients, descending; there are min(n, m) of them and
    /// their squares sum to 1.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Numerical Schmidt rank: coefficients above `tol` × the largest.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Orthonormal first-factor vectors as columns of an n × min(n, m)
    /// matrix.
    pub fn left_frame(&self) -> ArrayView2<'_, Complex64> {
        self.left_frame.view()
    }

    /// Orthonormal second-factor vectors as columns of an m × min(n, m)
    /// matrix.
    pub fn right_frame(&self) -> ArrayView2<'_, Complex64> {
        self.right_frame.view()
    }

    /// Rebuild the state from the top `terms` coefficients without
    /// normalizing; the full sum reproduces the original amplitudes.
    fn partial_sum(&self, terms: usize) -> Array1<Complex64> {
        let (n, m) = (self.dims.n(), self.dims.m());
        let mut v = Array1::zeros(n * m);
        for t in 0..terms {
            let a = Complex64::new(self.coefficients[t], 0.0);
            for i in 0..n {
                for j in 0..m {
                    v[i * m + j] += a * self.left_frame[[i, t]] * self.right_frame[[j, t]];
                }
            }
        }
        v
    }
}

/// Compute the Schmidt decomposition. `tol` is the relative rank cutoff
/// (default [`RANK_TOL`]).
pub fn schmidt_decompose(v: &PureState, tol: Option<f64>) -> Result<SchmidtDecomposition> {
    let dims = v.dims();
    let a = vec_to_operator(v);
    let (u, sv, vh) = a.view().svd(true, true)?;
    let u = u.expect("requested U");
    let vh = vh.expect("requested V^H");
    let r = dims.min_dim();

    // A = U Σ V^H entrywise means v_ij = Σ_t σ_t U[i,t] conj(V[j,t]), so the
    // second-factor vectors are the *unconjugated* rows of V^H.
    let coefficients: Vec<f64> = sv.iter().take(r).copied().collect();
    let top = coefficients.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Err(Error::ZeroVector);
    }
    let cutoff = tol.unwrap_or(RANK_TOL) * top;
    let rank = coefficients.iter().filter(|&&s| s > cutoff).count();

    let left_frame = u.slice(ndarray::s![.., ..r]).to_owned();
    let mut right_frame = Array2::zeros((dims.m(), r));
    for t in 0..r {
        for j in 0..dims.m() {
            right_frame[[j, t]] = vh[[t, j]];
        }
    }

    Ok(SchmidtDecomposition {
        dims,
        coefficients,
        left_frame,
        right_frame,
        rank,
    })
}

/// Numerical Schmidt rank of a state (see [`schmidt_decompose`] for `tol`).
pub fn schmidt_rank(v: &PureState, tol: Option<f64>) -> Result<usize> {
    Ok(schmidt_decompose(v, tol)?.rank())
}

/// The vector k-norm ‖v‖ₛ₍ₖ₎ = √(Σᵢ₌₁ᵏ αᵢ²).
pub fn vector_k_norm(v: &PureState, k: usize) -> Result<f64> {
    v.dims().check_k(k)?;
    let sd = schmidt_decompose(v, None)?;
    Ok(sd.coefficients[..k].iter().map(|a| a * a).sum::<f64>().sqrt())
}

/// The closest (in overlap) state of Schmidt rank ≤ k: truncate the
/// decomposition to its k largest coefficients and renormalize. The overlap
/// with the original state is exactly ‖v‖ₛ₍ₖ₎.
pub fn nearest_rank_k_state(v: &PureState, k: usize) -> Result<PureState> {
    v.dims().check_k(k)?;
    let sd = schmidt_decompose(v, None)?;
    let truncated = sd.partial_sum(k);
    PureState::normalized(truncated, v.dims())
}
