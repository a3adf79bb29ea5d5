//! One-shot work cost and yield, erasure, free energies, and the i.i.d.
//! limit of the smooth entropies.

use std::cmp::Ordering;

use crate::entropies::{renyi_divergence, smooth_d_0, smooth_d_inf, smooth_h0, Alpha, SmoothingParameter};
use crate::error::{Error, Result};
use crate::num::Real;
use crate::states::{gibbs_state, EnergyLevels, InverseTemperature, QuasiState};

/// Units a [`WorkQuantity`] is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorkUnits {
    /// Absolute energy.
    Energy,
    /// Multiples of `k_B T`.
    ThermalUnits,
}

/// An amount of work, possibly `+inf` when it comes from an infinite divergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkQuantity<T> {
    pub value: T,
    pub units: WorkUnits,
}

impl<T: Real> WorkQuantity<T> {
    pub fn energy(value: T) -> Self {
        Self { value, units: WorkUnits::Energy }
    }

    pub fn thermal(value: T) -> Self {
        Self { value, units: WorkUnits::ThermalUnits }
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }

    /// Value in absolute energy at inverse temperature `beta`.
    pub fn in_energy(&self, beta: InverseTemperature<T>) -> T {
        match self.units {
            WorkUnits::Energy => self.value,
            WorkUnits::ThermalUnits => self.value / beta.value(),
        }
    }

    /// Value in multiples of `k_B T` at inverse temperature `beta`.
    pub fn in_thermal_units(&self, beta: InverseTemperature<T>) -> T {
        match self.units {
            WorkUnits::Energy => self.value * beta.value(),
            WorkUnits::ThermalUnits => self.value,
        }
    }
}

fn scaled<T: Real>(divergence: T, beta: InverseTemperature<T>) -> WorkQuantity<T> {
    WorkQuantity::energy(divergence / beta.value())
}

/// Work to create one copy of `p`: `D_inf(p || gamma) / beta`.
pub fn work_cost<T: Real>(p: &QuasiState<T>, beta: InverseTemperature<T>) -> WorkQuantity<T> {
    let g = gibbs_state(p.energies(), beta);
    scaled(renyi_divergence(p.probs(), g.probs(), Alpha::Infinity), beta)
}

/// Work extractable from one copy of `p`: `D_0(p || gamma) / beta`.
pub fn work_yield<T: Real>(p: &QuasiState<T>, beta: InverseTemperature<T>) -> WorkQuantity<T> {
    let g = gibbs_state(p.energies(), beta);
    scaled(renyi_divergence(p.probs(), g.probs(), Alpha::zero()), beta)
}

/// [`work_cost`] up to error `eps`.
pub fn smooth_work_cost<T: Real>(
    p: &QuasiState<T>,
    beta: InverseTemperature<T>,
    eps: SmoothingParameter<T>,
) -> WorkQuantity<T> {
    let g = gibbs_state(p.energies(), beta);
    scaled(smooth_d_inf(p.probs(), g.probs(), eps), beta)
}

/// [`work_yield`] up to error `eps`.
pub fn smooth_work_yield<T: Real>(
    p: &QuasiState<T>,
    beta: InverseTemperature<T>,
    eps: SmoothingParameter<T>,
) -> WorkQuantity<T> {
    let g = gibbs_state(p.energies(), beta);
    scaled(smooth_d_0(p.probs(), g.probs(), eps), beta)
}

/// Work, in units of `k_B T`, to reset a memory with degenerate levels from
/// `memory` to a pure state.
///
/// Creating the pure state costs `ln d`; first extracting the smooth yield
/// `ln d - H_0^eps` leaves a net fee of `H_0^eps(memory)`.
pub fn erase_cost<T: Real>(memory: &[T], eps: SmoothingParameter<T>) -> WorkQuantity<T> {
    WorkQuantity::thermal(smooth_h0(memory, eps))
}

/// `F_f - F_i = -(1/beta) ln(Z_f / Z_i)`.
pub fn delta_f<T: Real>(initial: &EnergyLevels<T>, final_: &EnergyLevels<T>, beta: InverseTemperature<T>) -> T {
    -(final_.log_partition(beta) - initial.log_partition(beta)) / beta.value()
}

/// Which smooth entropy [`asymptotic_rate`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateKind {
    H0,
    HInf,
}

/// Largest copy count [`asymptotic_rate`] accepts for an alphabet of size `d`.
pub fn max_copies(d: usize) -> usize {
    match d {
        0..=2 => 64,
        3..=4 => 20,
        5..=8 => 10,
        _ => 6,
    }
}

/// All strings of one composition: they share a probability.
struct TypeClass<T> {
    ln_prob: T,
    count: u128,
}

fn binomial(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

fn type_classes<T: Real>(ln_p: &[T], n: u32) -> Vec<TypeClass<T>> {
    let mut out = Vec::new();
    let mut counts = vec![0u32; ln_p.len()];
    fn visit<T: Real>(ln_p: &[T], pos: usize, left: u32, counts: &mut [u32], mult: u128, out: &mut Vec<TypeClass<T>>) {
        if pos + 1 == ln_p.len() {
            counts[pos] = left;
            let ln_prob = counts
                .iter()
                .zip(ln_p)
                .filter(|(&c, _)| c > 0)
                .map(|(&c, &l)| T::from_u32(c).expect("small count") * l)
                .sum();
            out.push(TypeClass { ln_prob, count: mult });
            return;
        }
        for c in 0..=left {
            counts[pos] = c;
            visit(ln_p, pos + 1, left - c, counts, mult * binomial(left, c), out);
        }
    }
    visit(ln_p, 0, n, &mut counts, 1, &mut out);
    out
}

fn u128_to_real<T: Real>(x: u128) -> T {
    T::from_u128(x).expect("representable count")
}

/// Per-copy smooth entropy of `n` i.i.d. copies of `p`, computed over type
/// classes instead of the `d^n` strings.
///
/// `H0` is `ln` of the smallest support left after discarding at most `eps`
/// of the probability. `HInf` is `-ln` of the smallest peak probability
/// reachable within total variation `eps`, floored at the uniform level
/// `d^-n`.
pub fn asymptotic_rate<T: Real>(p: &[T], n: usize, eps: SmoothingParameter<T>, which: RateKind) -> Result<T> {
    crate::states::validate_distribution(p)?;
    let cap = max_copies(p.len());
    if n == 0 || n > cap {
        return Err(Error::InvalidParameter(format!(
            "copy count {n} outside 1..={cap} for an alphabet of {}",
            p.len()
        )));
    }
    let support: Vec<T> = p.iter().copied().filter(|&x| x > T::zero()).collect();
    let ln_p: Vec<T> = support.iter().map(|x| x.ln()).collect();
    let mut classes = type_classes(&ln_p, n as u32);
    let nn = T::from_usize_lossy(n);
    let eps = eps.value();
    let budget = eps + T::tol(1e-12);

    match which {
        RateKind::H0 => {
            classes.sort_by(|a, b| a.ln_prob.partial_cmp(&b.ln_prob).unwrap_or(Ordering::Equal));
            let total: u128 = classes.iter().map(|c| c.count).sum();
            let (mut used, mut removed) = (T::zero(), 0u128);
            for c in &classes {
                let prob = c.ln_prob.exp();
                let mass = u128_to_real::<T>(c.count) * prob;
                if used + mass <= budget {
                    used = used + mass;
                    removed += c.count;
                } else {
                    let room = ((budget - used) / prob).floor();
                    let fits = if room >= u128_to_real(c.count) { c.count } else { room.to_u128().unwrap_or(0) };
                    removed += fits;
                    break;
                }
            }
            let left = (total - removed).max(1);
            Ok(u128_to_real::<T>(left).ln() / nn)
        }
        RateKind::HInf => {
            classes.sort_by(|a, b| b.ln_prob.partial_cmp(&a.ln_prob).unwrap_or(Ordering::Equal));
            let (mut mass, mut count) = (T::zero(), T::zero());
            let mut level = T::zero();
            for (k, c) in classes.iter().enumerate() {
                let prob = c.ln_prob.exp();
                mass = mass + u128_to_real::<T>(c.count) * prob;
                count = count + u128_to_real(c.count);
                let next = classes.get(k + 1).map_or(T::zero(), |c| c.ln_prob.exp());
                if mass - next * count > eps {
                    level = (mass - eps) / count;
                    break;
                }
            }
            let floor = -nn * T::from_usize_lossy(p.len()).ln();
            let ln_peak = if level > T::zero() { level.ln().max(floor) } else { floor };
            Ok(-ln_peak / nn)
        }
    }
}
