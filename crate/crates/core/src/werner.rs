//! The Werner family of bipartite states and its norm-limit criterion.
//!
//! For local dimension n and mixing parameter α ∈ [−1, 1], the Werner
//! state is ρ_α = (I − αV)/(n² − αn) with V the swap operator. Its
//! partial transpose is (I − αnE)/(n² − αn), a two-eigenvalue operator
//! whose k-block positivity is exactly characterized: it holds iff
//! α ≤ 1/k.
//!
//! The module also materializes the projector family P_r^− onto the −1
//! eigenspace of the r-fold tensor power of I − 2E (regrouped across the
//! n^r ⊗ n^r cut), evaluates the closed form for its rank and for the
//! analytic lower bound on ‖P_r^−‖ S(2), and assembles the limit report:
//! the bound tends to 1/2 from below as r grows, and any certified lower
//! bound *exceeding* 1/2 would refute the 2-block positivity of the
//! tensor powers that underpins the family's undistillability evidence.

use ndarray::Array2;
use num_bigint::BigUint;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{
    kron, maximally_entangled_projector, permute_to_bipartite, BipartiteDims, BipartiteOperator,
};
use crate::opnorm::{op_norm_heuristic, proj_rank_ineq_bound, HeuristicOptions};

/// Largest matrix side that projector/tensor-power builders materialize
/// by default. Dense work scales cubically with the side, so the default
/// keeps interactive runs fast; past the cap only closed-form quantities
/// are reported. Raise it explicitly when longer waits are acceptable.
pub const DEFAULT_SIZE_CAP: usize = 1024;

/// A certified lower bound must clear 1/2 by this much before the limit
/// report flags it.
const EXCEED_MARGIN: f64 = 1e-9;

/// Local dimension and mixing parameter of a Werner state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WernerParams {
    n: usize,
    alpha: f64,
}

impl WernerParams {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "local dimension must be at least 2, got {n}"
            )));
        }
        if !alpha.is_finite() || alpha.abs() > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "mixing parameter must lie in [-1, 1], got {alpha}"
            )));
        }
        Ok(WernerParams { n, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// The Werner state ρ_α = (I − αV)/(n² − αn), where V is the swap
/// operator on H_n ⊗ H_n. A density operator for every α ∈ [−1, 1].
pub fn werner_state(p: &WernerParams) -> BipartiteOperator {
    let n = p.n;
    let e = maximally_entangled_projector(n).expect("n >= 2 by construction");
    let swap = e.partial_transpose().scale(n as f64);
    let denom = (n * n) as f64 - p.alpha * n as f64;
    BipartiteOperator::identity(e.dims())
        .sub(&swap.scale(p.alpha))
        .expect("same dims by construction")
        .scale(1.0 / denom)
}

/// The partial transpose ρ_α^Γ = (I − αnE)/(n² − αn).
pub fn werner_pt(p: &WernerParams) -> BipartiteOperator {
    let n = p.n;
    let e = maximally_entangled_projector(n).expect("n >= 2 by construction");
    let denom = (n * n) as f64 - p.alpha * n as f64;
    BipartiteOperator::identity(e.dims())
        .sub(&e.scale(p.alpha * n as f64))
        .expect("same dims by construction")
        .scale(1.0 / denom)
}

/// Whether ρ_α^Γ is k-block positive. The characterization is exact —
/// α ≤ 1/k — so the comparison carries no tolerance.
pub fn werner_pt_kpos(p: &WernerParams, k: usize) -> Result<bool> {
    BipartiteDims::new(p.n, p.n)?.check_k(k)?;
    Ok(p.alpha <= 1.0 / k as f64)
}

/// rank(P_r^−) = (n^{2r} − (n²−2)^r)/2, in exact integer arithmetic.
pub fn neg_projector_rank(n: usize, r: usize) -> Result<BigUint> {
    check_family_params(n, r)?;
    let rr = u32::try_from(r)
        .map_err(|_| Error::InvalidParameter(format!("tensor power {r} too large")))?;
    let total = BigUint::from(n).pow(2 * rr);
    let plus_minus_gap = BigUint::from(n * n - 2).pow(rr);
    Ok((total - plus_minus_gap) / 2u32)
}

fn check_family_params(n: usize, r: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "local dimension must be at least 2, got {n}"
        )));
    }
    if r < 1 {
        return Err(Error::InvalidParameter(
            "tensor power must be at least 1".to_string(),
        ));
    }
    Ok(())
}

/// Matrix side n^{2r} of the regrouped r-fold tensor power, or the cap
/// violation if it exceeds `size_cap`.
fn checked_side(n: usize, r: usize, size_cap: usize) -> Result<usize> {
    let mut side = 1u128;
    for _ in 0..2 * r {
        side = side.saturating_mul(n as u128);
    }
    if side > size_cap as u128 {
        return Err(Error::SizeCapExceeded {
            required: side.min(usize::MAX as u128) as usize,
            cap: size_cap,
        });
    }
    Ok(side as usize)
}

/// The projector P_r^− onto the −1 eigenspace of (I − 2E)^{⊗r}, viewed
/// across the n^r ⊗ n^r cut, together with its exact rank. The operator
/// itself is materialized only when the matrix side n^{2r} fits the size
/// cap.
#[derive(Clone, Debug)]
pub struct NegProjectorFamily {
    n: usize,
    r: usize,
    rank: BigUint,
    projector: Option<BipartiteOperator>,
}

impl NegProjectorFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rank(&self) -> &BigUint {
        &self.rank
    }

    pub fn projector(&self) -> Option<&BipartiteOperator> {
        self.projector.as_ref()
    }
}

/// Materialize P_r^− by the tensor recursion
/// P_r^− = P_1^− ⊗ P_{r−1}^+ + P_1^+ ⊗ P_{r−1}^− (with P_1^− = E,
/// P_1^+ = I − E), then regroup the interleaved factors across the
/// n^r ⊗ n^r cut. Errors when the matrix side n^{2r} exceeds `size_cap`.
pub fn build_neg_projector(n: usize, r: usize, size_cap: usize) -> Result<NegProjectorFamily> {
    check_family_params(n, r)?;
    checked_side(n, r, size_cap)?;
    let rank = neg_projector_rank(n, r)?;
    let e = maximally_entangled_projector(n)?;
    let p1_minus = e.entries().to_owned();
    let eye = Array2::from_diag_elem(n * n, Complex64::new(1.0, 0.0));
    let p1_plus = &eye - &p1_minus;
    let mut p_minus = p1_minus.clone();
    let mut p_plus = p1_plus.clone();
    for _ in 2..=r {
        let next_minus =
            kron(&p1_minus.view(), &p_plus.view()) + kron(&p1_plus.view(), &p_minus.view());
        let next_plus =
            kron(&p1_plus.view(), &p_plus.view()) + kron(&p1_minus.view(), &p_minus.view());
        p_minus = next_minus;
        p_plus = next_plus;
    }
    drop(p_plus);
    let projector = permute_to_bipartite(&p_minus.view(), n)?;
    Ok(NegProjectorFamily {
        n,
        r,
        rank,
        projector: Some(projector),
    })
}

/// Exact rational evaluation of the lower bound when every intermediate
/// fits in 128-bit integers.
fn norm_lower_bound_exact(n: usize, r: usize) -> Option<f64> {
    let rr = u32::try_from(r).ok()?;
    let big_n = (n as i128).checked_pow(rr)?;
    let total = big_n.checked_mul(big_n)?;
    let gap = ((n * n - 2) as i128).checked_pow(rr)?;
    // (total + (N−2)(total − gap)/2) / (total(N−1)), doubled through:
    let numer = big_n
        .checked_sub(2)?
        .checked_mul(total.checked_sub(gap)?)?
        .checked_add(total.checked_mul(2)?)?;
    let denom = total.checked_mul(2)?.checked_mul(big_n.checked_sub(1)?)?;
    Some(numer as f64 / denom as f64)
}

/// Cancellation-free floating evaluation: with u = n^{−r} and
/// q = (n²−2)/n², the bound equals (1 − (1−2u)q^r) / (2(1−u)), every
/// factor staying in [0, 1].
fn norm_lower_bound_float(n: usize, r: usize) -> f64 {
    let u = (1.0 / n as f64).powi(r as i32);
    let q = (n * n - 2) as f64 / (n * n) as f64;
    (1.0 - (1.0 - 2.0 * u) * q.powi(r as i32)) / (2.0 * (1.0 - u))
}

/// Analytic lower bound on ‖P_r^−‖ S(2):
/// (n^{2r} + (n^r−2)(n^{2r} − (n²−2)^r)/2) / (n^{2r}(n^r−1)).
/// Evaluated in exact integer arithmetic when it fits 128 bits, otherwise
/// by a rearrangement that avoids catastrophic cancellation. Tends to 1/2
/// as r → ∞ and stays strictly below it for n ≥ 4.
pub fn werner_norm_lower_bound(n: usize, r: usize) -> Result<f64> {
    check_family_params(n, r)?;
    Ok(norm_lower_bound_exact(n, r).unwrap_or_else(|| norm_lower_bound_float(n, r)))
}

/// One row of the limit report: both analytic lower bounds on
/// ‖P_r^−‖ S(2), the heuristic lower bound when the projector was small
/// enough to materialize, the 1/2 threshold, and — for n ≥ 4, where the
/// bound provably stays below 1/2 — whether any certified lower bound
/// exceeded the threshold anyway (`None` for n < 4, where small-dimension
/// effects push the analytic bounds above 1/2 without significance).
#[derive(Clone, Debug)]
pub struct WernerLimitRow {
    pub r: usize,
    pub rank: BigUint,
    pub bound_average: f64,
    pub bound_rank: f64,
    pub heuristic: Option<f64>,
    pub threshold: f64,
    pub exceeds: Option<bool>,
}

/// Evaluate the limit report for r = 1..=r_max: closed-form columns for
/// every row (computed in parallel), plus a heuristic lower bound with
/// witness search for the rows whose projector fits `size_cap`
/// (sequential, since each inner search already parallelizes).
pub fn werner_limit_report(
    n: usize,
    r_max: usize,
    size_cap: usize,
    opts: &HeuristicOptions,
) -> Result<Vec<WernerLimitRow>> {
    check_family_params(n, r_max)?;
    let analytic: Vec<Result<(BigUint, f64, f64)>> = exec::map_collect(r_max, |idx| {
        let r = idx + 1;
        let rank = neg_projector_rank(n, r)?;
        let rank_f = rank_to_f64(&rank);
        let avg = werner_norm_lower_bound(n, r)?;
        let side = (n as f64).powi(r as i32);
        let by_rank = if side <= usize::MAX as f64 {
            proj_rank_ineq_bound(side as usize, side as usize, 2, rank_f)
        } else {
            // Same formula with the square dimensions already folded in.
            let arg = 4.0 * rank_f - 4.0;
            if arg.is_finite() {
                let r0 = ((2.0 * side - arg.sqrt()) / 2.0).ceil().max(1.0);
                (2.0 / r0).min(1.0)
            } else {
                0.0
            }
        };
        Ok((rank, avg, by_rank))
    });
    let mut rows = Vec::with_capacity(r_max);
    for (idx, entry) in analytic.into_iter().enumerate() {
        let r = idx + 1;
        let (rank, bound_average, bound_rank) = entry?;
        let heuristic = match build_neg_projector(n, r, size_cap) {
            Ok(family) => {
                let p = family.projector().expect("within cap implies materialized");
                Some(op_norm_heuristic(p, 2, opts)?.lower)
            }
            Err(Error::SizeCapExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        let exceeds = if n >= 4 {
            let best = bound_average.max(bound_rank).max(heuristic.unwrap_or(0.0));
            Some(best > 0.5 + EXCEED_MARGIN)
        } else {
            None
        };
        rows.push(WernerLimitRow {
            r,
            rank,
            bound_average,
            bound_rank,
            heuristic,
            threshold: 0.5,
            exceeds,
        });
    }
    Ok(rows)
}

fn rank_to_f64(rank: &BigUint) -> f64 {
    let digits = rank.to_string();
    digits.parse::<f64>().unwrap_or(f64::MAX)
}

/// Materialize (ρ_α^Γ)^{⊗r} regrouped across the n^r ⊗ n^r cut, ready for
/// block-positivity certification at k = 2. Errors when the matrix side
/// n^{2r} exceeds `size_cap`.
pub fn tensor_power_pt(p: &WernerParams, r: usize, size_cap: usize) -> Result<BipartiteOperator> {
    check_family_params(p.n, r)?;
    checked_side(p.n, r, size_cap)?;
    let base = werner_pt(p).entries().to_owned();
    let mut acc = base.clone();
    for _ in 2..=r {
        acc = kron(&acc.view(), &base.view());
    }
    permute_to_bipartite(&acc.view(), p.n)
}
