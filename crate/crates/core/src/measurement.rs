//! Trace distance and its operational meaning, POVM statistics, and a
//! memory-coupled measurement whose memory is reset for a work fee.

use nalgebra::{RealField, SymmetricEigen};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::entropies::SmoothingParameter;
use crate::error::{Error, Result};
use crate::num::Real;
use crate::rng::{sample_index, stream_rng};
use crate::states::{hermitian_eigenvalues, marginalize_sizes, max_abs, CMatrix, EnergyLevels, Factor, InverseTemperature, QuasiState};
use crate::work::{erase_cost, WorkQuantity};

/// Tolerance for POVM positivity and completeness.
pub const POVM_TOL: f64 = 1e-10;

/// A measurement: PSD elements summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm<T: RealField> {
    elements: Vec<CMatrix<T>>,
}

impl<T: Real + RealField> Povm<T> {
    pub fn new(elements: Vec<CMatrix<T>>) -> Result<Self> {
        let first = elements.first().ok_or_else(|| Error::InvalidPovm("no elements".into()))?;
        let d = first.nrows();
        let tol = T::tol(POVM_TOL);
        let mut total = CMatrix::zeros(d, d);
        for (i, m) in elements.iter().enumerate() {
            if m.shape() != (d, d) {
                return Err(Error::InvalidPovm(format!("element {i} has shape {:?}", m.shape())));
            }
            if crate::states::hermiticity_defect(m) > tol {
                return Err(Error::InvalidPovm(format!("element {i} is not Hermitian")));
            }
            if hermitian_eigenvalues(m)[0] < -tol {
                return Err(Error::InvalidPovm(format!("element {i} is not positive semidefinite")));
            }
            total += m;
        }
        let defect = max_abs(&(total - CMatrix::identity(d, d)));
        if defect > tol {
            return Err(Error::InvalidPovm(format!("elements sum to identity only within {defect}")));
        }
        Ok(Self { elements })
    }

    /// The trivial measurement `{1}`.
    pub fn trivial(d: usize) -> Self {
        Self { elements: vec![CMatrix::identity(d, d)] }
    }

    /// Projective measurement in the computational basis.
    pub fn computational(d: usize) -> Self {
        let elements = (0..d)
            .map(|i| {
                let mut m = CMatrix::zeros(d, d);
                m[(i, i)] = Complex::new(T::one(), T::zero());
                m
            })
            .collect();
        Self { elements }
    }

    pub fn elements(&self) -> &[CMatrix<T>] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }
}

fn check_same_dim<T: RealField>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::LengthMismatch { expected: a.nrows(), found: b.nrows() });
    }
    Ok(())
}

fn real_trace_product<T: Real + RealField>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    // Re Tr(AB) without forming the product
    let mut acc = T::zero();
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

/// `(1/2) Tr|a - b|`.
pub fn trace_distance<T: Real + RealField>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<T> {
    check_same_dim(a, b)?;
    let ev = hermitian_eigenvalues(&(a - b));
    Ok(ev.into_iter().map(|x| num_traits::Float::abs(x)).sum::<T>() / T::lit(2.0))
}

/// Outcome probabilities `Tr(rho M_i)`.
pub fn povm_outcome_probs<T: Real + RealField>(rho: &CMatrix<T>, m: &Povm<T>) -> Result<Vec<T>> {
    check_same_dim(rho, &m.elements[0])?;
    Ok(m.elements.iter().map(|e| real_trace_product(rho, e)).collect())
}

/// `max_i |Tr(M_i a) - Tr(M_i b)|`.
pub fn distinguish_gap<T: Real + RealField>(a: &CMatrix<T>, b: &CMatrix<T>, m: &Povm<T>) -> Result<T> {
    let pa = povm_outcome_probs(a, m)?;
    let pb = povm_outcome_probs(b, m)?;
    Ok(pa.iter().zip(&pb).fold(T::zero(), |acc, (&x, &y)| num_traits::Float::max(acc, num_traits::Float::abs(x - y))))
}

/// The two-outcome measurement projecting onto the positive part of `a - b`
/// and its complement; it attains the trace distance.
pub fn helstrom_povm<T: Real + RealField>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<Povm<T>> {
    check_same_dim(a, b)?;
    let d = a.nrows();
    let eig = SymmetricEigen::new(a - b);
    let mut proj = CMatrix::zeros(d, d);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > T::zero() {
            let v = eig.eigenvectors.column(k);
            proj += &v * v.adjoint();
        }
    }
    let rest = CMatrix::identity(d, d) - &proj;
    Ok(Povm { elements: vec![proj, rest] })
}

/// Grid search for the qubit trace distance over projective measurements
/// `{P_n, 1 - P_n}`, `P_n = (1 + n·sigma) / 2`. Polar angles `k pi / n_theta`
/// for `k = 0..=n_theta`, azimuths `2 pi l / n_phi` for `l < n_phi`.
/// Never exceeds [`trace_distance`]; doubling both resolutions nests the
/// grids, so the result is non-decreasing under refinement.
pub fn bruteforce_trace_distance<T: Real + RealField>(
    a: &CMatrix<T>,
    b: &CMatrix<T>,
    n_theta: usize,
    n_phi: usize,
) -> Result<T> {
    check_same_dim(a, b)?;
    if a.nrows() != 2 {
        return Err(Error::InvalidParameter("grid search is defined for qubits only".into()));
    }
    if n_theta == 0 || n_phi == 0 {
        return Err(Error::InvalidParameter("grid resolution must be positive".into()));
    }
    let diff = a - b;
    // Bloch components of the difference: Tr(sigma_k diff)
    let rx = (diff[(0, 1)] + diff[(1, 0)]).re;
    let ry = (diff[(1, 0)] - diff[(0, 1)]).im;
    let rz = (diff[(0, 0)] - diff[(1, 1)]).re;
    let half = T::lit(0.5);
    let two_pi = T::lit(2.0) * T::PI();
    let mut best = T::zero();
    for k in 0..=n_theta {
        let theta = T::PI() * T::from_usize_lossy(k) / T::from_usize_lossy(n_theta);
        let (st, ct) = (num_traits::Float::sin(theta), num_traits::Float::cos(theta));
        for l in 0..n_phi {
            let phi = two_pi * T::from_usize_lossy(l) / T::from_usize_lossy(n_phi);
            let (sp, cp) = (num_traits::Float::sin(phi), num_traits::Float::cos(phi));
            let proj = half * (st * cp * rx + st * sp * ry + ct * rz);
            best = num_traits::Float::max(best, num_traits::Float::abs(proj));
        }
    }
    Ok(best)
}

/// Copies the system's energy label into a `memory_dim`-level memory with a
/// degenerate Hamiltonian: probability `p_i` lands on `(level i, memory i)`.
pub fn record_measurement<T: Real>(system: &QuasiState<T>, memory_dim: usize) -> Result<QuasiState<T>> {
    let n = system.len();
    if memory_dim < n {
        return Err(Error::InvalidParameter(format!(
            "memory of dimension {memory_dim} cannot record {n} outcomes"
        )));
    }
    let mut probs = vec![T::zero(); n * memory_dim];
    for (i, &p) in system.probs().iter().enumerate() {
        probs[i * memory_dim + i] = p;
    }
    let energies = system.energies().tensor(&EnergyLevels::degenerate(memory_dim)?);
    QuasiState::new(probs, energies)
}

/// Record of one measure-then-reset round.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementLedger<T> {
    pub outcome: usize,
    /// Erasure fee, in units of `k_B T`.
    pub fee_paid: WorkQuantity<T>,
    pub memory_reset: bool,
    pub seed: u64,
}

/// Serialized ledger: `{"outcome": i, "fee_nats": x, "seed": s}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerRecord {
    pub outcome: usize,
    pub fee_nats: f64,
    pub seed: u64,
}

impl<T: Real> MeasurementLedger<T> {
    pub fn record(&self, beta: InverseTemperature<T>) -> LedgerRecord {
        LedgerRecord {
            outcome: self.outcome,
            fee_nats: self.fee_paid.in_thermal_units(beta).to_f64().unwrap_or(f64::NAN),
            seed: self.seed,
        }
    }
}

/// Reads the memory of a recorded joint state and resets it.
///
/// The outcome is drawn from the memory marginal with stream 0 of `seed`;
/// the fee is the erasure cost of that pre-measurement marginal.
pub fn measure_and_reset<T: Real>(
    joint: &QuasiState<T>,
    memory_dim: usize,
    beta: InverseTemperature<T>,
    eps: SmoothingParameter<T>,
    seed: u64,
) -> Result<MeasurementLedger<T>> {
    let _ = beta;
    if memory_dim == 0 || joint.len() % memory_dim != 0 {
        return Err(Error::NotComposite(format!(
            "{} levels do not contain a {memory_dim}-level memory",
            joint.len()
        )));
    }
    let memory = marginalize_sizes(joint, (joint.len() / memory_dim, memory_dim), Factor::Second)?;
    let outcome = sample_index(memory.probs(), &mut stream_rng(seed, 0));
    Ok(MeasurementLedger { outcome, fee_paid: erase_cost(memory.probs(), eps), memory_reset: true, seed })
}
