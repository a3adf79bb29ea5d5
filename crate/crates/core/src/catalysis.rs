//! Catalytic transformations, embezzling catalysts, and two notions of a
//! catalyst being returned "close enough".

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::num::Real;
use crate::states::{tensor_capped, total_variation, EnergyLevels, InverseTemperature, QuasiState, DEFAULT_DIM_CAP};
use crate::thermal_ops::thermo_majorization_check;

/// An ancilla that must be handed back after the transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalyst<T>(QuasiState<T>);

impl<T: Real> Catalyst<T> {
    pub fn new(state: QuasiState<T>) -> Self {
        Self(state)
    }

    pub fn state(&self) -> &QuasiState<T> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Whether `p ⊗ xi -> q ⊗ xi` thermomajorizes, the catalyst returned exactly.
pub fn catalytic_transform_check<T: Real>(
    p: &QuasiState<T>,
    q: &QuasiState<T>,
    c: &Catalyst<T>,
    beta: InverseTemperature<T>,
) -> Result<bool> {
    catalytic_transform_check_capped(p, q, c, beta, DEFAULT_DIM_CAP)
}

/// [`catalytic_transform_check`] with an explicit composite-dimension cap.
pub fn catalytic_transform_check_capped<T: Real>(
    p: &QuasiState<T>,
    q: &QuasiState<T>,
    c: &Catalyst<T>,
    beta: InverseTemperature<T>,
    cap: usize,
) -> Result<bool> {
    let from = tensor_capped(p, c.state(), cap)?;
    let to = tensor_capped(q, c.state(), cap)?;
    thermo_majorization_check(&from, &to, beta)
}

/// The `N`-level embezzling family `xi_j = (1/j) / H_N` on degenerate levels,
/// `H_N` the `N`-th harmonic number.
pub fn embezzler<T: Real>(n: usize) -> Result<Catalyst<T>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("embezzler needs N >= 2, got {n}")));
    }
    let weights: Vec<T> = (1..=n).map(|j| T::from_usize_lossy(j).recip()).collect();
    let h: T = crate::num::compensated_sum(weights.iter().copied());
    let probs = weights.into_iter().map(|w| w / h).collect();
    Ok(Catalyst(QuasiState::new(probs, EnergyLevels::degenerate(n)?)?))
}

/// Result of embezzling one pure bit from a catalyst.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbezzleReport<T> {
    pub catalyst_dim: usize,
    /// Total variation between the relabeled output and the ideal
    /// `xi ⊗ |0>`.
    pub degradation: T,
    /// Work gained, in units of `k_B T`.
    pub work_embezzled: T,
    /// The relabeled catalyst-plus-bit state, catalyst index major.
    pub output: QuasiState<T>,
}

/// Relabels `xi ⊗ (1/2, 1/2)` so that its `N` largest entries occupy the
/// bit-zero slots in descending order, and the rest the bit-one slots.
///
/// The bit-zero block `xi~` is a subnormalized catalyst; the degradation
/// `(1/2)|xi~ - xi|_1 + (1/2)(1 - tr xi~)` equals the total variation between
/// the output and `xi ⊗ |0>`. One maximally mixed bit is purified, worth
/// `ln 2`. Permutations are free because every level is degenerate.
pub fn embezzle_bit<T: Real>(c: &Catalyst<T>) -> Result<EmbezzleReport<T>> {
    let n = c.dim();
    let levels = c.state().energies().as_slice();
    if n < 2 || levels.iter().any(|&e| e != levels[0]) {
        return Err(Error::InvalidParameter(
            "embezzlement needs a catalyst of dimension >= 2 on degenerate levels".into(),
        ));
    }
    let xi = c.state().probs();
    let half = T::lit(0.5);
    let mut sorted: Vec<T> = xi.iter().flat_map(|&x| [x * half, x * half]).collect();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));

    let mut joint = vec![T::zero(); 2 * n];
    let mut ideal = vec![T::zero(); 2 * n];
    for j in 0..n {
        joint[2 * j] = sorted[j];
        joint[2 * j + 1] = sorted[n + j];
        ideal[2 * j] = xi[j];
    }
    let degradation = total_variation(&joint, &ideal);
    let energies = EnergyLevels::new(vec![levels[0]; 2 * n])?;
    Ok(EmbezzleReport {
        catalyst_dim: n,
        degradation,
        work_embezzled: T::LN_2(),
        output: QuasiState::from_parts_unchecked(joint, energies),
    })
}

/// Trace-distance closeness: identical levels and total variation `<= eps`.
pub fn eps_close_trace<T: Real>(a: &QuasiState<T>, b: &QuasiState<T>, eps: T) -> bool {
    a.energies() == b.energies() && total_variation(a.probs(), b.probs()) <= eps
}

/// Threshold `eps / ln N` of the dimension-penalized closeness notion.
pub fn catd_threshold<T: Real>(eps: T, n: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("catalyst dimension must be >= 2, got {n}")));
    }
    Ok(eps / T::from_usize_lossy(n).ln())
}

/// Dimension-penalized closeness: total variation `<= eps / ln N`.
pub fn eps_close_catd<T: Real>(xi: &Catalyst<T>, xi_tilde: &Catalyst<T>, eps: T) -> Result<bool> {
    if xi.dim() != xi_tilde.dim() {
        return Err(Error::LengthMismatch { expected: xi.dim(), found: xi_tilde.dim() });
    }
    let threshold = catd_threshold(eps, xi.dim())?;
    Ok(xi.state().energies() == xi_tilde.state().energies()
        && total_variation(xi.state().probs(), xi_tilde.state().probs()) <= threshold)
}
