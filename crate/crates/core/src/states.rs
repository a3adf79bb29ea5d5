//! State and Hamiltonian representations.
//!
//! Energies are in units where `k_B = 1`; with an [`InverseTemperature`] in
//! scope, `beta * E` is dimensionless. A [`QuasiState`] is the commuting
//! case: a probability vector over the energy eigenbasis. A
//! [`DensityState`] carries a full density matrix with its Hamiltonian.

use nalgebra::{DMatrix, RealField};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::num::{log_sum_exp, Real};

/// Dense complex matrix used for density operators, Hamiltonians and unitaries.
pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Default cap on the dimension of composite (tensor-product) states.
pub const DEFAULT_DIM_CAP: usize = 1 << 20;

/// Tolerance for normalization at construction.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// A finite, discrete Hamiltonian spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLevels<T>(Vec<T>);

impl<T: Real> EnergyLevels<T> {
    pub fn new(levels: Vec<T>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidParameter("energy levels must be non-empty".into()));
        }
        if levels.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite("energy levels"));
        }
        Ok(Self(levels))
    }

    /// `d` degenerate levels at energy zero.
    pub fn degenerate(d: usize) -> Result<Self> {
        Self::new(vec![T::zero(); d])
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every level shifted by `c`.
    pub fn shifted(&self, c: T) -> Self {
        Self(self.0.iter().map(|&e| e + c).collect())
    }

    /// `ln Z` for `Z = Σ exp(-beta E_i)`, evaluated without overflow.
    pub fn log_partition(&self, beta: InverseTemperature<T>) -> T {
        log_sum_exp(self.0.iter().map(|&e| -beta.value() * e))
    }

    /// Levels of the composite system: all pairwise sums, first factor major.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for &a in &self.0 {
            for &b in &other.0 {
                out.push(a + b);
            }
        }
        Self(out)
    }
}

impl<T> From<EnergyLevels<T>> for Vec<T> {
    fn from(e: EnergyLevels<T>) -> Self {
        e.0
    }
}

/// Inverse temperature `beta = 1 / (k_B T)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct InverseTemperature<T>(T);

impl<T: Real> InverseTemperature<T> {
    pub fn new(beta: T) -> Result<Self> {
        if beta.is_finite() && beta > T::zero() {
            Ok(Self(beta))
        } else {
            Err(Error::InvalidBeta)
        }
    }

    pub fn value(self) -> T {
        self.0
    }

    /// The temperature `1 / beta`.
    pub fn temperature(self) -> T {
        self.0.recip()
    }
}

/// A state diagonal in the energy eigenbasis: occupation probabilities
/// paired with the level energies.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiState<T> {
    probs: Vec<T>,
    energies: EnergyLevels<T>,
}

pub(crate) fn validate_distribution<T: Real>(probs: &[T]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if probs.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("probabilities"));
    }
    if let Some((i, p)) = probs.iter().enumerate().find(|(_, &p)| p < T::zero()) {
        return Err(Error::InvalidDistribution(format!("entry {i} is negative ({p})")));
    }
    let total: T = probs.iter().copied().sum();
    if (total - T::one()).abs() > T::tol(NORMALIZATION_TOL) {
        return Err(Error::InvalidDistribution(format!("sums to {total}, not 1")));
    }
    Ok(())
}

impl<T: Real> QuasiState<T> {
    /// Validates and pairs a distribution with its levels. Inputs outside the
    /// normalization tolerance are rejected, never renormalized.
    pub fn new(probs: Vec<T>, energies: EnergyLevels<T>) -> Result<Self> {
        if probs.len() != energies.len() {
            return Err(Error::LengthMismatch { expected: energies.len(), found: probs.len() });
        }
        validate_distribution(&probs)?;
        Ok(Self { probs, energies })
    }

    pub fn from_vecs(probs: Vec<T>, energies: Vec<T>) -> Result<Self> {
        Self::new(probs, EnergyLevels::new(energies)?)
    }

    /// A distribution over `probs.len()` degenerate levels at zero energy.
    pub fn degenerate(probs: Vec<T>) -> Result<Self> {
        let d = probs.len();
        Self::new(probs, EnergyLevels::degenerate(d.max(1))?)
    }

    /// The pure state occupying level `index`.
    pub fn pure(energies: EnergyLevels<T>, index: usize) -> Result<Self> {
        if index >= energies.len() {
            return Err(Error::InvalidParameter(format!(
                "level {index} out of range for {} levels",
                energies.len()
            )));
        }
        let mut probs = vec![T::zero(); energies.len()];
        probs[index] = T::one();
        Self::new(probs, energies)
    }

    /// The maximally mixed state on `energies`.
    pub fn maximally_mixed(energies: EnergyLevels<T>) -> Self {
        let d = energies.len();
        let p = T::from_usize_lossy(d).recip();
        Self { probs: vec![p; d], energies }
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn energies(&self) -> &EnergyLevels<T> {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Mean energy `Σ p_i E_i`.
    pub fn mean_energy(&self) -> T {
        self.probs.iter().zip(self.energies.as_slice()).map(|(&p, &e)| p * e).sum()
    }

    /// Same energies, new probabilities (validated).
    pub fn with_probs(&self, probs: Vec<T>) -> Result<Self> {
        Self::new(probs, self.energies.clone())
    }

    /// Same probabilities, new energies: a sudden Hamiltonian switch.
    pub fn with_energies(&self, energies: EnergyLevels<T>) -> Result<Self> {
        if energies.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: energies.len() });
        }
        Ok(Self { probs: self.probs.clone(), energies })
    }

    pub(crate) fn from_parts_unchecked(probs: Vec<T>, energies: EnergyLevels<T>) -> Self {
        debug_assert_eq!(probs.len(), energies.len());
        Self { probs, energies }
    }
}

/// Two-level battery with gap `gap`, in `|0>` or in the charged level `|W>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkBit<T> {
    gap: T,
    occupied: bool,
}

impl<T: Real> WorkBit<T> {
    pub fn new(gap: T, occupied: bool) -> Result<Self> {
        if !gap.is_finite() || gap < T::zero() {
            return Err(Error::InvalidParameter(format!("work-bit gap must be >= 0, got {gap}")));
        }
        Ok(Self { gap, occupied })
    }

    pub fn gap(&self) -> T {
        self.gap
    }

    pub fn is_charged(&self) -> bool {
        self.occupied
    }

    /// The bit as a pure state on levels `(0, gap)`.
    pub fn to_state(&self) -> QuasiState<T> {
        let probs = if self.occupied {
            vec![T::zero(), T::one()]
        } else {
            vec![T::one(), T::zero()]
        };
        QuasiState::from_parts_unchecked(probs, EnergyLevels(vec![T::zero(), self.gap]))
    }
}

/// Gibbs distribution `exp(-beta E_i) / Z`.
pub fn gibbs_state<T: Real>(energies: &EnergyLevels<T>, beta: InverseTemperature<T>) -> QuasiState<T> {
    let b = beta.value();
    let e_min = energies.as_slice().iter().copied().fold(T::infinity(), T::min);
    let weights: Vec<T> = energies.as_slice().iter().map(|&e| (-b * (e - e_min)).exp()).collect();
    let z: T = weights.iter().copied().sum();
    let probs = weights.into_iter().map(|w| w / z).collect();
    QuasiState::from_parts_unchecked(probs, energies.clone())
}

/// Composite of two independent systems with additive energies.
pub fn tensor<T: Real>(a: &QuasiState<T>, b: &QuasiState<T>) -> Result<QuasiState<T>> {
    tensor_capped(a, b, DEFAULT_DIM_CAP)
}

/// [`tensor`] with an explicit composite-dimension cap.
pub fn tensor_capped<T: Real>(a: &QuasiState<T>, b: &QuasiState<T>, cap: usize) -> Result<QuasiState<T>> {
    let dim = a
        .len()
        .checked_mul(b.len())
        .ok_or(Error::DimensionTooLarge { dim: usize::MAX, cap })?;
    if dim > cap {
        return Err(Error::DimensionTooLarge { dim, cap });
    }
    let mut probs = Vec::with_capacity(dim);
    for &pa in &a.probs {
        for &pb in &b.probs {
            probs.push(pa * pb);
        }
    }
    Ok(QuasiState::from_parts_unchecked(probs, a.energies.tensor(&b.energies)))
}

/// Total-variation distance `(1/2) Σ |p_i - q_i|`.
///
/// # Panics
/// If the lengths differ.
pub fn total_variation<T: Real>(p: &[T], q: &[T]) -> T {
    assert_eq!(p.len(), q.len(), "distributions differ in length");
    p.iter().zip(q).map(|(&a, &b)| (a - b).abs()).sum::<T>() / T::lit(2.0)
}

/// Which tensor factor of a bipartite state to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

fn additivity_tol<T: Real>(levels: &[T]) -> T {
    let scale = levels.iter().fold(T::one(), |m, e| m.max(e.abs()));
    T::tol(1e-10) * scale
}

fn marginal_probs<T: Real>(probs: &[T], na: usize, nb: usize, keep: Factor) -> Vec<T> {
    match keep {
        Factor::First => (0..na).map(|i| probs[i * nb..(i + 1) * nb].iter().copied().sum()).collect(),
        Factor::Second => (0..nb).map(|j| (0..na).map(|i| probs[i * nb + j]).sum()).collect(),
    }
}

/// Discards one factor of a bipartite state whose levels are declared as
/// `first ⊗ second`. The joint energies must equal the pairwise sums.
pub fn marginalize<T: Real>(
    joint: &QuasiState<T>,
    first: &EnergyLevels<T>,
    second: &EnergyLevels<T>,
    keep: Factor,
) -> Result<QuasiState<T>> {
    let (na, nb) = (first.len(), second.len());
    if na * nb != joint.len() {
        return Err(Error::NotComposite(format!(
            "{} levels cannot split as {na} x {nb}",
            joint.len()
        )));
    }
    let expected = first.tensor(second);
    let tol = additivity_tol(joint.energies.as_slice());
    for (k, (&e, &f)) in joint.energies.as_slice().iter().zip(expected.as_slice()).enumerate() {
        if (e - f).abs() > tol {
            return Err(Error::NotComposite(format!(
                "level {k} has energy {e}, declared factors give {f}"
            )));
        }
    }
    let probs = marginal_probs(&joint.probs, na, nb, keep);
    let energies = match keep {
        Factor::First => first.clone(),
        Factor::Second => second.clone(),
    };
    Ok(QuasiState::from_parts_unchecked(probs, energies))
}

/// Discards one factor given only the factor sizes. The factor levels are
/// inferred from the joint energies, with the discarded factor's lowest
/// level placed at zero; non-additive joint energies are rejected.
pub fn marginalize_sizes<T: Real>(
    joint: &QuasiState<T>,
    sizes: (usize, usize),
    keep: Factor,
) -> Result<QuasiState<T>> {
    let (na, nb) = sizes;
    if na == 0 || nb == 0 || na.checked_mul(nb) != Some(joint.len()) {
        return Err(Error::NotComposite(format!(
            "{} levels cannot split as {na} x {nb}",
            joint.len()
        )));
    }
    let e = joint.energies.as_slice();
    let (a, b): (Vec<T>, Vec<T>) = match keep {
        Factor::First => {
            let a: Vec<T> = (0..na)
                .map(|i| e[i * nb..(i + 1) * nb].iter().copied().fold(T::infinity(), T::min))
                .collect();
            let b = (0..nb).map(|j| e[j] - a[0]).collect();
            (a, b)
        }
        Factor::Second => {
            let b: Vec<T> = (0..nb)
                .map(|j| (0..na).map(|i| e[i * nb + j]).fold(T::infinity(), T::min))
                .collect();
            let a = (0..na).map(|i| e[i * nb] - b[0]).collect();
            (a, b)
        }
    };
    marginalize(joint, &EnergyLevels(a), &EnergyLevels(b), keep)
}

/// A general state: density operator paired with a Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState<T: RealField> {
    rho: CMatrix<T>,
    hamiltonian: CMatrix<T>,
}

pub(crate) fn max_abs<T: Real + RealField>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| num_traits::Float::max(acc, z.norm()))
}

pub(crate) fn hermiticity_defect<T: Real + RealField>(m: &CMatrix<T>) -> T {
    max_abs(&(m - m.adjoint()))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Real + RealField>(m: &CMatrix<T>) -> Vec<T> {
    let mut ev: Vec<T> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    ev
}

/// Validates that `rho` is a unit-trace Hermitian PSD matrix.
pub fn validate_density_matrix<T: Real + RealField>(rho: &CMatrix<T>) -> Result<()> {
    if !rho.is_square() || rho.nrows() == 0 {
        return Err(Error::InvalidDensityMatrix("matrix must be square and non-empty".into()));
    }
    if rho.iter().any(|z| !num_traits::Float::is_finite(z.re) || !num_traits::Float::is_finite(z.im)) {
        return Err(Error::NonFinite("density matrix"));
    }
    let tol = T::tol(NORMALIZATION_TOL);
    let herm = hermiticity_defect(rho);
    if herm > tol {
        return Err(Error::InvalidDensityMatrix(format!("not Hermitian (defect {herm})")));
    }
    let tr = rho.trace();
    if num_traits::Float::abs(tr.re - T::one()) > tol || num_traits::Float::abs(tr.im) > tol {
        return Err(Error::InvalidDensityMatrix(format!("trace is {tr}, not 1")));
    }
    let min_ev = hermitian_eigenvalues(rho)[0];
    if min_ev < -tol {
        return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min_ev}")));
    }
    Ok(())
}

impl<T: Real + RealField> DensityState<T> {
    pub fn new(rho: CMatrix<T>, hamiltonian: CMatrix<T>) -> Result<Self> {
        validate_density_matrix(&rho)?;
        if hamiltonian.shape() != rho.shape() {
            return Err(Error::LengthMismatch { expected: rho.nrows(), found: hamiltonian.nrows() });
        }
        if hamiltonian.iter().any(|z| !num_traits::Float::is_finite(z.re) || !num_traits::Float::is_finite(z.im)) {
            return Err(Error::NonFinite("hamiltonian"));
        }
        let herm = hermiticity_defect(&hamiltonian);
        if herm > T::tol(NORMALIZATION_TOL) {
            return Err(Error::InvalidDensityMatrix(format!("Hamiltonian not Hermitian (defect {herm})")));
        }
        Ok(Self { rho, hamiltonian })
    }

    /// Embeds a quasiclassical state as diagonal matrices.
    pub fn from_quasi(s: &QuasiState<T>) -> Self {
        let rho = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            s.len(),
            s.probs().iter().map(|&p| Complex::new(p, T::zero())),
        ));
        let hamiltonian = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            s.len(),
            s.energies().as_slice().iter().map(|&e| Complex::new(e, T::zero())),
        ));
        Self { rho, hamiltonian }
    }

    /// The diagonal part as a [`QuasiState`], when both matrices are diagonal
    /// within `tol`.
    pub fn to_quasi(&self, tol: T) -> Result<QuasiState<T>> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if i != j && (self.rho[(i, j)].norm() > tol || self.hamiltonian[(i, j)].norm() > tol) {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "entry ({i}, {j}) is off-diagonal; state is not diagonal in the energy basis"
                    )));
                }
            }
        }
        let probs = (0..d).map(|i| num_traits::Float::max(self.rho[(i, i)].re, T::zero())).collect();
        let energies = EnergyLevels::new((0..d).map(|i| self.hamiltonian[(i, i)].re).collect())?;
        QuasiState::new(probs, energies)
    }

    pub fn rho(&self) -> &CMatrix<T> {
        &self.rho
    }

    pub fn hamiltonian(&self) -> &CMatrix<T> {
        &self.hamiltonian
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }
}

/// Whether `[rho, H]` vanishes: its largest absolute entry is at most `tol`.
pub fn is_quasiclassical<T: Real + RealField>(s: &DensityState<T>, tol: T) -> bool {
    let comm = &s.rho * &s.hamiltonian - &s.hamiltonian * &s.rho;
    max_abs(&comm) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn levels(v: &[f64]) -> EnergyLevels<f64> {
        EnergyLevels::new(v.to_vec()).unwrap()
    }

    fn beta(b: f64) -> InverseTemperature<f64> {
        InverseTemperature::new(b).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn gibbs_degenerate_is_uniform() {
        for b in [0.1, 1.0, 37.0] {
            let g = gibbs_state(&levels(&[0.0, 0.0, 0.0]), beta(b));
            for &p in g.probs() {
                assert!((p - 1.0 / 3.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn gibbs_ground_state_limit() {
        let g = gibbs_state(&levels(&[0.0, 1.0]), beta(1e4));
        assert_eq!(g.probs(), &[1.0, 0.0]);
    }

    #[test]
    fn gibbs_two_level_direct() {
        let g = gibbs_state(&levels(&[0.0, 1.0]), beta(1.0));
        let z = 1.0 + (-1.0f64).exp();
        assert!((g.probs()[0] - 1.0 / z).abs() < 1e-15);
        assert!((g.probs()[1] - (-1.0f64).exp() / z).abs() < 1e-15);
    }

    #[test]
    fn gibbs_shift_invariant() {
        let e = levels(&[0.3, -1.2, 2.5, 0.0]);
        let g = gibbs_state(&e, beta(0.7));
        let h = gibbs_state(&e.shifted(123.456), beta(0.7));
        for (a, b) in g.probs().iter().zip(h.probs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            QuasiState::from_vecs(vec![0.5, 0.5 + 1e-9], vec![0.0, 1.0]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            QuasiState::from_vecs(vec![1.2, -0.2], vec![0.0, 1.0]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            QuasiState::from_vecs(vec![1.0], vec![0.0, 1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(EnergyLevels::<f64>::new(vec![]).is_err());
        assert!(EnergyLevels::new(vec![f64::NAN]).is_err());
        assert!(InverseTemperature::new(0.0).is_err());
        assert!(InverseTemperature::new(f64::INFINITY).is_err());
        assert!(WorkBit::new(-1.0, false).is_err());
    }

    #[test]
    fn tensor_identity_factor() {
        let one = QuasiState::from_vecs(vec![1.0], vec![0.0]).unwrap();
        let b = QuasiState::from_vecs(vec![0.2, 0.3, 0.5], vec![0.0, 1.0, 4.0]).unwrap();
        assert_eq!(tensor(&one, &b).unwrap(), b);
    }

    #[test]
    fn tensor_product_rule() {
        let h = QuasiState::from_vecs(vec![0.5, 0.5], vec![0.0, 1.0]).unwrap();
        let t = tensor(&h, &h).unwrap();
        assert_eq!(t.probs(), &[0.25; 4]);
        assert_eq!(t.energies().as_slice(), &[0.0, 1.0, 1.0, 2.0]);
    }

    #[test]
    fn tensor_of_gibbs_is_gibbs() {
        let (ea, eb) = (levels(&[0.0, 0.4, 1.3]), levels(&[-0.2, 0.9]));
        let b = beta(1.7);
        let t = tensor(&gibbs_state(&ea, b), &gibbs_state(&eb, b)).unwrap();
        let g = gibbs_state(&ea.tensor(&eb), b);
        for (x, y) in t.probs().iter().zip(g.probs()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn tensor_respects_cap() {
        let a = QuasiState::maximally_mixed(EnergyLevels::<f64>::degenerate(8).unwrap());
        assert!(matches!(
            tensor_capped(&a, &a, 63),
            Err(Error::DimensionTooLarge { dim: 64, cap: 63 })
        ));
        assert!(tensor_capped(&a, &a, 64).is_ok());
    }

    #[test]
    fn marginalize_round_trip() {
        let a = QuasiState::from_vecs(vec![0.1f64, 0.9], vec![0.0, 2.0]).unwrap();
        let b = QuasiState::from_vecs(vec![0.2, 0.3, 0.5], vec![1.0, 1.5, 4.0]).unwrap();
        let t = tensor(&a, &b).unwrap();
        let ma = marginalize(&t, a.energies(), b.energies(), Factor::First).unwrap();
        let mb = marginalize(&t, a.energies(), b.energies(), Factor::Second).unwrap();
        for (x, y) in ma.probs().iter().zip(a.probs()) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in mb.probs().iter().zip(b.probs()) {
            assert!((x - y).abs() < 1e-12);
        }
        assert_eq!(ma.energies(), a.energies());
    }

    #[test]
    fn marginalize_trivial_factor() {
        let b = QuasiState::from_vecs(vec![0.2, 0.8], vec![0.0, 1.0]).unwrap();
        let m = marginalize_sizes(&b, (1, 2), Factor::First).unwrap();
        assert_eq!(m.probs(), &[1.0]);
    }

    #[test]
    fn marginalize_correlated_joint() {
        let j = QuasiState::degenerate(vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let m = marginalize_sizes(&j, (2, 2), Factor::Second).unwrap();
        assert_eq!(m.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn marginalize_rejects_non_additive() {
        let j = QuasiState::from_vecs(vec![0.25; 4], vec![0.0, 1.0, 1.0, 3.0]).unwrap();
        assert!(matches!(marginalize_sizes(&j, (2, 2), Factor::First), Err(Error::NotComposite(_))));
        assert!(matches!(marginalize_sizes(&j, (3, 2), Factor::First), Err(Error::NotComposite(_))));
    }

    #[test]
    fn quasiclassical_detection() {
        let diag = DensityState::from_quasi(&QuasiState::from_vecs(vec![0.3, 0.7], vec![0.0, 1.0]).unwrap());
        assert!(is_quasiclassical(&diag, 1e-12));

        let plus = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)]);
        let h = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let s = DensityState::new(plus, h).unwrap();
        assert!(!is_quasiclassical(&s, 1e-12));

        let mixed = CMatrix::identity(2, 2) * c(0.5, 0.0);
        let h = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.3, -0.2), c(0.3, 0.2), c(1.0, 0.0)]);
        assert!(is_quasiclassical(&DensityState::new(mixed, h).unwrap(), 1e-12));
    }

    #[test]
    fn density_validation() {
        let h = CMatrix::<f64>::zeros(2, 2);
        let not_herm = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(DensityState::new(not_herm, h.clone()).is_err());
        let negative = CMatrix::from_row_slice(2, 2, &[c(1.2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.2, 0.0)]);
        assert!(DensityState::new(negative, h.clone()).is_err());
        let trace2 = CMatrix::identity(2, 2);
        assert!(DensityState::new(trace2, h).is_err());
    }

    #[test]
    fn single_precision_states() {
        let g = gibbs_state(
            &EnergyLevels::new(vec![0.0f32, 1.0]).unwrap(),
            InverseTemperature::new(1.0f32).unwrap(),
        );
        assert!((g.probs().iter().sum::<f32>() - 1.0).abs() < 1e-6);
        assert!(QuasiState::new(vec![1.0f32 / 3.0; 3], EnergyLevels::degenerate(3).unwrap()).is_ok());
    }
}
