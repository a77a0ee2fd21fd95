//! Random quantum objects: Haar-distributed states and unitaries, states of
//! bounded Schmidt rank, Hermitian/density/projection operators, and random
//! channels. All samplers take a caller-owned RNG so results are
//! reproducible from a seed.

use ndarray::{Array1, Array2};
use ndarray_linalg::QR;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{BipartiteDims, BipartiteOperator, PureState};

/// Standard complex Gaussian: real and imaginary parts are independent
/// N(0, 1) draws.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Array2<Complex64> {
    Array2::from_shape_fn((rows, cols), |_| complex_gaussian(rng))
}

/// Haar-random state on the joint space (a normalized Gaussian vector).
pub fn random_pure_state<R: Rng + ?Sized>(dims: BipartiteDims, rng: &mut R) -> PureState {
    let v = Array1::from_shape_fn(dims.total(), |_| complex_gaussian(rng));
    PureState::normalized(v, dims).expect("Gaussian vector is nonzero almost surely")
}

/// Haar-random d×k isometry: QR of a Gaussian matrix with the R-diagonal
/// phases folded back in (the phase fix is what makes the distribution
/// exactly Haar rather than merely unitarily invariant in law).
pub fn haar_frame<R: Rng + ?Sized>(d: usize, k: usize, rng: &mut R) -> Array2<Complex64> {
    assert!(k <= d, "frame cannot have more columns than rows");
    let g = gaussian_matrix(rng, d, k);
    let (mut q, r) = g.qr().expect("QR of a Gaussian matrix");
    for j in 0..k {
        let rjj = r[[j, j]];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.column_mut(j).mapv_inplace(|z| z * phase);
    }
    q
}

/// Haar-random unitary on C^d.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Array2<Complex64> {
    haar_frame(d, d, rng)
}

/// Uniform point on the probability simplex (Dirichlet(1,…,1)) of the given
/// length, via normalized exponential spacings.
pub fn uniform_simplex<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    let mut draws: Vec<f64> = (0..len)
        .map(|_| {
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            -u.ln()
        })
        .collect();
    let total: f64 = draws.iter().sum();
    for d in &mut draws {
        *d /= total;
    }
    draws
}

/// Random state of Schmidt rank at most k: Haar frames on both factors and
/// square-rooted simplex weights, v = Σᵢ cᵢ uᵢ ⊗ wᵢ.
pub fn random_sr_state<R: Rng + ?Sized>(
    dims: BipartiteDims,
    k: usize,
    rng: &mut R,
) -> Result<PureState> {
    dims.check_k(k)?;
    let (n, m) = (dims.n(), dims.m());
    let u = haar_frame(n, k, rng);
    let w = haar_frame(m, k, rng);
    let c: Vec<f64> = uniform_simplex(k, rng).iter().map(|p| p.sqrt()).collect();
    let mut v = Array1::zeros(n * m);
    for i in 0..k {
        let ci = Complex64::new(c[i], 0.0);
        for a in 0..n {
            for b in 0..m {
                v[a * m + b] += ci * u[[a, i]] * w[[b, i]];
            }
        }
    }
    PureState::new(v, dims)
}

/// Random Hermitian operator (G + G†)/2 with Gaussian G.
pub fn random_hermitian<R: Rng + ?Sized>(dims: BipartiteDims, rng: &mut R) -> BipartiteOperator {
    let d = dims.total();
    let g = gaussian_matrix(rng, d, d);
    let mut h = Array2::zeros((d, d));
    for r in 0..d {
        for c in 0..d {
            h[[r, c]] = (g[[r, c]] + g[[c, r]].conj()) * 0.5;
        }
    }
    BipartiteOperator::new(h, dims).expect("shape is correct by construction")
}

/// Random density operator GG†/Tr(GG†) (Wishart normalized to unit trace).
pub fn random_density<R: Rng + ?Sized>(dims: BipartiteDims, rng: &mut R) -> BipartiteOperator {
    let d = dims.total();
    let g = gaussian_matrix(rng, d, d);
    let gh = crate::linalg::conj_t(&g.view());
    let w = g.dot(&gh);
    let tr: Complex64 = w.diag().sum();
    let rho = w.mapv(|z| z / tr.re);
    BipartiteOperator::new(rho, dims).expect("shape is correct by construction")
}

/// Random orthogonal projection of the given rank (Haar frame times its
/// adjoint).
pub fn random_projection<R: Rng + ?Sized>(
    dims: BipartiteDims,
    rank: usize,
    rng: &mut R,
) -> Result<BipartiteOperator> {
    let d = dims.total();
    if rank < 1 || rank > d {
        return Err(crate::error::Error::ROutOfRange {
            r: rank,
            min: 1,
            max: d,
        });
    }
    let q = haar_frame(d, rank, rng);
    let qh = crate::linalg::conj_t(&q.view());
    BipartiteOperator::new(q.dot(&qh), dims)
}

/// Kraus operators of a Haar-random channel C^d → C^d with the given number
/// of operators: blocks of a random (num·d)×d isometry, so Σ AᵢᴴAᵢ = I
/// exactly up to rounding.
pub fn random_kraus_channel<R: Rng + ?Sized>(
    d: usize,
    num_ops: usize,
    rng: &mut R,
) -> Vec<Array2<Complex64>> {
    let v = haar_frame(num_ops * d, d, rng);
    (0..num_ops)
        .map(|j| v.slice(ndarray::s![j * d..(j + 1) * d, ..]).to_owned())
        .collect()
}
