//! Two-point-measurement work statistics for driven protocols of quenches
//! and partial thermalizations, with exact and sampled checks of the Crooks
//! and Jarzynski relations.
//!
//! Quenches do work `E_new(l) - E_old(l)` at the occupied level `l`;
//! thermalizations only exchange heat. Reverse work is reported on the same
//! sign convention as forward work: a reverse run that extracts `w` shows up
//! as `-w`, so Crooks compares `P_fwd(W)` with `P_rev(-W)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::num::{compensated_sum, Real};
use crate::rng::{sample_index, stream_rng};
use crate::states::{gibbs_state, EnergyLevels, InverseTemperature};
use crate::thermal_ops::{thermalization_kernel, StochasticMap};

/// Largest trajectory space `levels^(1 + #thermalize)` accepted.
pub const TRAJECTORY_CAP: f64 = 1e7;
/// Work values closer than this are merged.
pub const MERGE_TOL: f64 = 1e-12;
/// Work values are matched across directions within this.
pub const MATCH_TOL: f64 = 1e-9;
/// Allowed detailed-balance defect of a thermalization kernel.
pub const BALANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Segment<T> {
    Quench(EnergyLevels<T>),
    /// Partial thermalization with strength `lambda` in `(0, 1]`.
    Thermalize(T),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Protocol<T> {
    initial_energies: EnergyLevels<T>,
    segments: Vec<Segment<T>>,
}

impl<T: Real> Protocol<T> {
    pub fn new(initial_energies: EnergyLevels<T>, segments: Vec<Segment<T>>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidParameter("protocol needs at least one segment".into()));
        }
        let d = initial_energies.len();
        for (k, s) in segments.iter().enumerate() {
            match s {
                Segment::Quench(e) if e.len() != d => {
                    return Err(Error::LengthMismatch { expected: d, found: e.len() });
                }
                Segment::Thermalize(l) if !(*l > T::zero() && *l <= T::one()) => {
                    return Err(Error::InvalidParameter(format!("segment {k}: thermalization strength must lie in (0, 1]")));
                }
                _ => {}
            }
        }
        Ok(Self { initial_energies, segments })
    }

    pub fn initial_energies(&self) -> &EnergyLevels<T> {
        &self.initial_energies
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn levels(&self) -> usize {
        self.initial_energies.len()
    }

    pub fn final_energies(&self) -> &EnergyLevels<T> {
        self.segments
            .iter()
            .rev()
            .find_map(|s| match s {
                Segment::Quench(e) => Some(e),
                Segment::Thermalize(_) => None,
            })
            .unwrap_or(&self.initial_energies)
    }

    /// Time reverse: start at the final Hamiltonian, run the segments
    /// backwards, each quench returning to the Hamiltonian it left, with the
    /// same thermalization strengths.
    pub fn reversed(&self) -> Self {
        let mut before = Vec::with_capacity(self.segments.len());
        let mut current = &self.initial_energies;
        for s in &self.segments {
            before.push(current);
            if let Segment::Quench(e) = s {
                current = e;
            }
        }
        let segments = self
            .segments
            .iter()
            .zip(before)
            .rev()
            .map(|(s, prev)| match s {
                Segment::Quench(_) => Segment::Quench(prev.clone()),
                Segment::Thermalize(l) => Segment::Thermalize(*l),
            })
            .collect();
        Self { initial_energies: current.clone(), segments }
    }

    /// Size of the trajectory space, `levels^(1 + #thermalize)`.
    pub fn trajectory_space(&self) -> f64 {
        let thermalizations = self.segments.iter().filter(|s| matches!(s, Segment::Thermalize(_))).count();
        (self.levels() as f64).powi(1 + thermalizations as i32)
    }

    fn check_cap(&self) -> Result<()> {
        let size = self.trajectory_space();
        if size > TRAJECTORY_CAP {
            return Err(Error::CapExceeded { size, cap: TRAJECTORY_CAP });
        }
        Ok(())
    }
}

/// Thermalization kernel at `energies`, checked for detailed balance.
fn balanced_kernel<T: Real>(energies: &EnergyLevels<T>, beta: InverseTemperature<T>, lambda: T) -> Result<StochasticMap<T>> {
    let k = thermalization_kernel(energies, beta, lambda)?;
    let defect = k.detailed_balance_defect(gibbs_state(energies, beta).probs());
    if defect > T::tol(BALANCE_TOL) {
        return Err(Error::DetailedBalance(defect.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(k)
}

/// A finite work distribution, sorted by work value.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkDistribution<T> {
    support: Vec<(T, T)>,
}

impl<T: Real> WorkDistribution<T> {
    /// Sorts by work and merges values within [`MERGE_TOL`] of the first
    /// value of their cluster. Zero-probability entries are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (T, T)>) -> Self {
        let mut pairs: Vec<(T, T)> = pairs.into_iter().filter(|&(_, p)| p > T::zero()).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        let tol = T::lit(MERGE_TOL);
        let mut support: Vec<(T, T)> = Vec::with_capacity(pairs.len());
        let mut anchor = T::zero();
        for (w, p) in pairs {
            match support.last_mut() {
                Some(last) if w - anchor <= tol => last.1 = last.1 + p,
                _ => {
                    anchor = w;
                    support.push((w, p));
                }
            }
        }
        Self { support }
    }

    pub fn support(&self) -> &[(T, T)] {
        &self.support
    }

    pub fn total(&self) -> T {
        compensated_sum(self.support.iter().map(|&(_, p)| p))
    }

    pub fn mean(&self) -> T {
        compensated_sum(self.support.iter().map(|&(w, p)| w * p))
    }

    /// `<e^{-beta W}>`.
    pub fn exp_average(&self, beta: InverseTemperature<T>) -> T {
        compensated_sum(self.support.iter().map(|&(w, p)| p * (-beta.value() * w).exp()))
    }

    /// Probability of the work value within `tol` of `w`.
    pub fn prob_near(&self, w: T, tol: T) -> T {
        let i = self.support.partition_point(|&(x, _)| x < w - tol);
        self.support[i..].iter().take_while(|&&(x, _)| x <= w + tol).map(|&(_, p)| p).sum()
    }
}

/// One sampled run: the occupied level before the protocol and after each
/// segment, with the accumulated work.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub levels: Vec<usize>,
    pub work: T,
}

/// Exact forward work distribution.
pub fn enumerate_forward<T: Real>(p: &Protocol<T>, beta: InverseTemperature<T>) -> Result<WorkDistribution<T>> {
    p.check_cap()?;
    let d = p.levels();
    let start = gibbs_state(p.initial_energies(), beta);
    // per level: work distribution of runs currently occupying it
    let mut by_level: Vec<WorkDistribution<T>> =
        start.probs().iter().map(|&q| WorkDistribution::from_pairs([(T::zero(), q)])).collect();
    let mut energies = p.initial_energies().clone();
    for s in p.segments() {
        match s {
            Segment::Quench(next) => {
                for (l, dist) in by_level.iter_mut().enumerate() {
                    let dw = next.as_slice()[l] - energies.as_slice()[l];
                    *dist = WorkDistribution::from_pairs(dist.support.iter().map(|&(w, q)| (w + dw, q)));
                }
                energies = next.clone();
            }
            Segment::Thermalize(lambda) => {
                let k = balanced_kernel(&energies, beta, *lambda)?;
                by_level = (0..d)
                    .map(|to| {
                        WorkDistribution::from_pairs(by_level.iter().enumerate().flat_map(|(from, dist)| {
                            let t = k.get(to, from);
                            dist.support.iter().map(move |&(w, q)| (w, q * t))
                        }))
                    })
                    .collect();
            }
        }
    }
    Ok(WorkDistribution::from_pairs(by_level.into_iter().flat_map(|d| d.support)))
}

/// Exact work distribution of the time-reversed protocol.
pub fn enumerate_reverse<T: Real>(p: &Protocol<T>, beta: InverseTemperature<T>) -> Result<WorkDistribution<T>> {
    enumerate_forward(&p.reversed(), beta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrooksReport<T> {
    /// `max |P_fwd(W) / P_rev(-W) - e^{beta (W - dF)}|` over matched `W`.
    pub max_deviation: T,
    /// Forward work values with no reverse mass at `-W`.
    pub absolute_continuity_failures: Vec<T>,
}

pub fn crooks_check<T: Real>(
    fwd: &WorkDistribution<T>,
    rev: &WorkDistribution<T>,
    beta: InverseTemperature<T>,
    delta_f: T,
) -> CrooksReport<T> {
    let tol = T::lit(MATCH_TOL);
    let mut max_deviation = T::zero();
    let mut failures = Vec::new();
    for &(w, pf) in fwd.support() {
        let pr = rev.prob_near(-w, tol);
        if pr > T::zero() {
            let dev = (pf / pr - (beta.value() * (w - delta_f)).exp()).abs();
            max_deviation = max_deviation.max(dev);
        } else {
            failures.push(w);
        }
    }
    CrooksReport { max_deviation, absolute_continuity_failures: failures }
}

/// `<e^{-beta W}>` under the exact forward distribution.
pub fn jarzynski_exact<T: Real>(p: &Protocol<T>, beta: InverseTemperature<T>) -> Result<T> {
    Ok(enumerate_forward(p, beta)?.exp_average(beta))
}

/// A protocol with its initial Gibbs weights and thermalization kernels
/// precomputed, for repeated sampling.
#[derive(Debug, Clone)]
pub struct Sampler<T> {
    initial: Vec<T>,
    /// Per segment: work increments per level for a quench, or the kernel
    /// columns `K(. <- from)` for a thermalization.
    steps: Vec<Step<T>>,
}

#[derive(Debug, Clone)]
enum Step<T> {
    Quench(Vec<T>),
    Thermalize(Vec<Vec<T>>),
}

impl<T: Real> Sampler<T> {
    pub fn new(p: &Protocol<T>, beta: InverseTemperature<T>) -> Result<Self> {
        let d = p.levels();
        let mut energies = p.initial_energies();
        let mut steps = Vec::with_capacity(p.segments().len());
        for s in p.segments() {
            match s {
                Segment::Quench(next) => {
                    steps.push(Step::Quench(next.as_slice().iter().zip(energies.as_slice()).map(|(&a, &b)| a - b).collect()));
                    energies = next;
                }
                Segment::Thermalize(lambda) => {
                    let k = balanced_kernel(energies, beta, *lambda)?;
                    steps.push(Step::Thermalize((0..d).map(|from| (0..d).map(|to| k.get(to, from)).collect()).collect()));
                }
            }
        }
        Ok(Self { initial: gibbs_state(p.initial_energies(), beta).probs().to_vec(), steps })
    }

    /// Samples one forward run.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Trajectory<T> {
        let mut level = sample_index(&self.initial, rng);
        let mut levels = Vec::with_capacity(self.steps.len() + 1);
        levels.push(level);
        let mut work = T::zero();
        for step in &self.steps {
            match step {
                Step::Quench(dw) => work = work + dw[level],
                Step::Thermalize(columns) => level = sample_index(&columns[level], rng),
            }
            levels.push(level);
        }
        Trajectory { levels, work }
    }
}

/// Samples one forward run.
pub fn sample_trajectory<T: Real, R: Rng + ?Sized>(p: &Protocol<T>, beta: InverseTemperature<T>, rng: &mut R) -> Result<Trajectory<T>> {
    Ok(Sampler::new(p, beta)?.sample(rng))
}

/// Monte Carlo estimate of `<e^{-beta W}>` and its standard error.
///
/// Trajectory `i` draws from stream `i` of `seed`, and the reduction runs in
/// index order, so the result depends only on `(seed, n_samples)`.
pub fn jarzynski_estimate<T: Real>(
    p: &Protocol<T>,
    beta: InverseTemperature<T>,
    n_samples: usize,
    seed: u64,
) -> Result<(T, T)> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let sampler = Sampler::new(p, beta)?;
    let values: Vec<T> = (0..n_samples)
        .map(|i| (-beta.value() * sampler.sample(&mut stream_rng(seed, i as u64)).work).exp())
        .collect();
    let n = T::from_usize_lossy(n_samples);
    let mean = compensated_sum(values.iter().copied()) / n;
    if n_samples == 1 {
        return Ok((mean, T::infinity()));
    }
    let var = compensated_sum(values.iter().map(|&v| (v - mean) * (v - mean))) / (n - T::one());
    Ok((mean, (var / n).sqrt()))
}
